//! Toolkit for reconstructing activity-flow development-process models.
//!
//! Given a model in the ACT text format and a set of structured-English
//! requirements, the pipeline selects the required entities, inserts the
//! required tasks, pins tasks matching the reservation rules, and picks
//! the optimal subset of the remaining tasks by exact 0/1 integer
//! programming with branch-and-bound, splicing control flows around
//! everything it drops.

pub mod cli;
pub mod dsl;
pub mod extract;
pub mod ilp;
pub mod model;
pub mod pipeline;
pub mod restructure;

//! Exact 0/1 integer programming for task selection.
//!
//! [`build_problem`] turns a restructured process model plus its objective
//! and sum-bound rules into a binary program: one variable per optimizable
//! task, reserved and forced tasks fixed to 1 with their contributions
//! folded into the objective constant and row bounds.
//!
//! [`branch_and_bound`] solves it exactly: best-first search ordered by
//! the LP relaxation bound, branching on the most fractional variable
//! (ties to the lowest index), exploring x=1 before x=0. Among
//! equal-objective optima the search keeps the lexicographically smallest
//! assignment, preferring 1 over 0 at the earliest variable, which makes
//! results reproducible and lets [`brute_force`] serve as an exact oracle
//! with the identical tie-breaking rule.

mod simplex;

use crate::extract::{Direction, ObjectiveSpec, PropertyRule, Relation};
use crate::model::ProcessModel;
use serde::{Deserialize, Serialize};
use simplex::{maximize_boxed, LpOutcome};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

/// Absolute tolerance on row satisfaction. Integer-valued data stays
/// exact in f64, so this only matters for decimal inputs.
pub const FEASIBILITY_TOL: f64 = 1e-6;
/// Integrality tolerance when reading LP relaxation points.
const INTEGRALITY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RowRelation {
    Le,
    Ge,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub coefficients: Vec<f64>,
    pub relation: RowRelation,
    pub bound: f64,
}

/// A 0/1 linear program over named task variables. Row bounds are already
/// reduced by the contributions of tasks fixed to 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IlpProblem {
    pub direction: Direction,
    pub variables: Vec<String>,
    pub objective_coefficients: Vec<f64>,
    #[serde(default)]
    pub fixed_contribution: f64,
    pub rows: Vec<Row>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub fixed: BTreeMap<String, u8>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveStatus {
    Optimal,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes_explored: u64,
    pub best_bound: f64,
}

/// Solver output. On `optimal` the assignment covers every variable plus
/// every fixed task, and `best_bound == objective_value` is the
/// optimality certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub assignment: BTreeMap<String, u8>,
    pub objective_value: f64,
    pub status: SolveStatus,
    pub stats: SearchStats,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IlpError {
    #[error("no objective: an optimization run requires an objective property")]
    NoObjective,
    #[error("too many variables for exhaustive search: {count} (limit {limit})")]
    TooManyVariables { count: usize, limit: usize },
    #[error("malformed problem: {0}")]
    Malformed(String),
}

const BRUTE_FORCE_LIMIT: usize = 25;

impl IlpProblem {
    pub fn validate(&self) -> Result<(), IlpError> {
        let n = self.variables.len();
        if self.objective_coefficients.len() != n {
            return Err(IlpError::Malformed(format!(
                "objective has {} coefficients for {} variables",
                self.objective_coefficients.len(),
                n
            )));
        }
        for (i, row) in self.rows.iter().enumerate() {
            if row.coefficients.len() != n {
                return Err(IlpError::Malformed(format!(
                    "row {i} has {} coefficients for {} variables",
                    row.coefficients.len(),
                    n
                )));
            }
            if !row.bound.is_finite() || row.coefficients.iter().any(|c| !c.is_finite()) {
                return Err(IlpError::Malformed(format!(
                    "row {i} has non-finite values"
                )));
            }
        }
        if self.objective_coefficients.iter().any(|c| !c.is_finite())
            || !self.fixed_contribution.is_finite()
        {
            return Err(IlpError::Malformed(
                "objective has non-finite values".to_string(),
            ));
        }
        for name in self.fixed.keys() {
            if self.variables.contains(name) {
                return Err(IlpError::Malformed(format!(
                    "task \"{name}\" is both a variable and fixed"
                )));
            }
        }
        Ok(())
    }

    /// Total objective of an assignment over the free variables,
    /// including the fixed contribution. Summation runs in variable
    /// order so the solver and the oracle agree bit for bit.
    pub fn objective_of(&self, bits: &[u8]) -> f64 {
        let free: f64 = self
            .objective_coefficients
            .iter()
            .zip(bits)
            .map(|(c, &b)| c * f64::from(b))
            .sum();
        free + self.fixed_contribution
    }

    pub fn row_lhs(&self, row: &Row, bits: &[u8]) -> f64 {
        row.coefficients
            .iter()
            .zip(bits)
            .map(|(c, &b)| c * f64::from(b))
            .sum()
    }

    /// Checks all rows at the feasibility tolerance.
    pub fn is_feasible(&self, bits: &[u8]) -> bool {
        self.rows.iter().all(|row| {
            let lhs = self.row_lhs(row, bits);
            match row.relation {
                RowRelation::Le => lhs <= row.bound + FEASIBILITY_TOL,
                RowRelation::Ge => lhs >= row.bound - FEASIBILITY_TOL,
            }
        })
    }

    fn maximizing(&self) -> bool {
        self.direction == Direction::Max
    }

    fn solution(&self, bits: &[u8], objective: f64, nodes: u64) -> Solution {
        let mut assignment = BTreeMap::new();
        for (name, &bit) in self.variables.iter().zip(bits) {
            assignment.insert(name.clone(), bit);
        }
        for (name, &bit) in &self.fixed {
            assignment.insert(name.clone(), bit);
        }
        Solution {
            assignment,
            objective_value: objective,
            status: SolveStatus::Optimal,
            stats: SearchStats {
                nodes_explored: nodes,
                best_bound: objective,
            },
        }
    }

    fn infeasible_solution(&self, nodes: u64) -> Solution {
        Solution {
            assignment: BTreeMap::new(),
            objective_value: 0.0,
            status: SolveStatus::Infeasible,
            stats: SearchStats {
                nodes_explored: nodes,
                best_bound: 0.0,
            },
        }
    }
}

/// Builds the 0/1 program for a restructured model: one binary variable
/// per task outside `reserved` and `forced`, those tasks fixed to 1, the
/// objective taken from the `tfc` property and each `cc` rule becoming a
/// sum bound with the fixed contributions subtracted out.
pub fn build_problem(
    model: &ProcessModel,
    tfc: Option<&ObjectiveSpec>,
    cc: &[PropertyRule],
    reserved: &BTreeSet<String>,
    forced: &BTreeSet<String>,
) -> Result<IlpProblem, IlpError> {
    let tfc = tfc.ok_or(IlpError::NoObjective)?;
    let pinned = |name: &str| reserved.contains(name) || forced.contains(name);

    let mut variables = Vec::new();
    let mut objective_coefficients = Vec::new();
    let mut fixed = BTreeMap::new();
    let mut fixed_contribution = 0.0;

    for task in model.tasks() {
        let value = task.property(&tfc.property).unwrap_or(0.0);
        if pinned(&task.name) {
            fixed.insert(task.name.clone(), 1u8);
            fixed_contribution += value;
        } else {
            variables.push(task.name.clone());
            objective_coefficients.push(value);
        }
    }

    let mut rows = Vec::new();
    for rule in cc {
        let mut coefficients = Vec::with_capacity(variables.len());
        let mut fixed_sum = 0.0;
        for task in model.tasks() {
            let value = task.property(&rule.property).unwrap_or(0.0);
            if pinned(&task.name) {
                fixed_sum += value;
            } else {
                coefficients.push(value);
            }
        }
        let relation = match rule.relation {
            Relation::Less => RowRelation::Le,
            Relation::Greater => RowRelation::Ge,
        };
        rows.push(Row {
            coefficients,
            relation,
            bound: rule.value - fixed_sum,
        });
    }

    Ok(IlpProblem {
        direction: tfc.direction,
        variables,
        objective_coefficients,
        fixed_contribution,
        rows,
        fixed,
    })
}

/// Bound of the LP relaxation over a partial assignment, or the prune
/// sentinel when the relaxation is infeasible.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RelaxationBound {
    Bound(f64),
    Prune,
}

struct Relaxation {
    bound: f64,
    point: Vec<f64>,
}

fn relax(problem: &IlpProblem, partial: &[Option<u8>]) -> Option<Relaxation> {
    let n = problem.variables.len();
    debug_assert_eq!(partial.len(), n);
    let maximizing = problem.maximizing();

    if partial.iter().all(|a| a.is_some()) {
        let bits: Vec<u8> = partial.iter().map(|a| a.unwrap()).collect();
        if !problem.is_feasible(&bits) {
            return None;
        }
        let point = bits.iter().map(|&b| f64::from(b)).collect();
        return Some(Relaxation {
            bound: problem.objective_of(&bits),
            point,
        });
    }

    if problem.rows.is_empty() {
        // Unconstrained relaxation: free variables sit at whichever bound
        // favors the objective. The sum is exact, no simplex involved.
        let mut bound = problem.fixed_contribution;
        let mut point = Vec::with_capacity(n);
        for (j, assigned) in partial.iter().enumerate() {
            let c = problem.objective_coefficients[j];
            let x = match assigned {
                Some(b) => f64::from(*b),
                None => {
                    let favorable = if maximizing { c > 0.0 } else { c < 0.0 };
                    if favorable {
                        1.0
                    } else {
                        0.0
                    }
                }
            };
            bound += c * x;
            point.push(x);
        }
        return Some(Relaxation { bound, point });
    }

    let sense = if maximizing { 1.0 } else { -1.0 };
    let objective: Vec<f64> = problem
        .objective_coefficients
        .iter()
        .map(|c| c * sense)
        .collect();
    let rows: Vec<(Vec<f64>, f64)> = problem
        .rows
        .iter()
        .map(|row| match row.relation {
            RowRelation::Le => (row.coefficients.clone(), row.bound),
            RowRelation::Ge => (row.coefficients.iter().map(|c| -c).collect(), -row.bound),
        })
        .collect();
    let lower: Vec<f64> = partial.iter().map(|a| a.map_or(0.0, f64::from)).collect();
    let upper: Vec<f64> = partial.iter().map(|a| a.map_or(1.0, f64::from)).collect();

    match maximize_boxed(&objective, &rows, &lower, &upper) {
        LpOutcome::Infeasible => None,
        LpOutcome::Optimal {
            objective: value,
            point,
        } => {
            let total = sense * value + problem.fixed_contribution;
            // Widen by a hair so floating-point rounding in the simplex can
            // never make the bound cut off a true completion (admissibility).
            let margin = 1e-9 * (1.0 + total.abs());
            let bound = if maximizing {
                total + margin
            } else {
                total - margin
            };
            Some(Relaxation { bound, point })
        }
    }
}

/// Upper bound (for max; lower for min) on the objective of every
/// feasible 0/1 completion of `partial`, from the exact [0,1] linear
/// relaxation. With every variable assigned this is the assignment's
/// objective value exactly.
pub fn relaxation_bound(problem: &IlpProblem, partial: &[Option<u8>]) -> RelaxationBound {
    match relax(problem, partial) {
        None => RelaxationBound::Prune,
        Some(r) => RelaxationBound::Bound(r.bound),
    }
}

/// True when `a` precedes `b` in the solver's preference order: at the
/// first differing variable, the assignment with 1 wins.
fn lex_earlier(a: &[u8], b: &[u8]) -> bool {
    for (x, y) in a.iter().zip(b) {
        if x != y {
            return *x == 1;
        }
    }
    false
}

struct Incumbent {
    bits: Vec<u8>,
    objective: f64,
}

struct SearchNode {
    assign: Vec<Option<u8>>,
    bound: f64,
    point: Vec<f64>,
    seq: u64,
}

impl SearchNode {
    fn lexbest(&self) -> Vec<u8> {
        self.assign.iter().map(|a| a.unwrap_or(1)).collect()
    }
}

fn improvement_eps(objective: f64) -> f64 {
    1e-9 * (1.0 + objective.abs())
}

/// Can this node be discarded? Yes when its bound cannot strictly beat
/// the incumbent and no completion can win the lexicographic tie either:
/// the node's most-preferred completion (free variables at 1) already
/// loses to the incumbent.
fn prunable(node_bound: f64, node: &SearchNode, incumbent: &Incumbent, maximizing: bool) -> bool {
    let eps = improvement_eps(incumbent.objective);
    let hopeless = if maximizing {
        node_bound < incumbent.objective - eps
    } else {
        node_bound > incumbent.objective + eps
    };
    if hopeless {
        return true;
    }
    let cannot_beat = if maximizing {
        node_bound <= incumbent.objective + eps
    } else {
        node_bound >= incumbent.objective - eps
    };
    cannot_beat && !lex_earlier(&node.lexbest(), &incumbent.bits)
}

fn consider(
    problem: &IlpProblem,
    incumbent: &mut Option<Incumbent>,
    bits: Vec<u8>,
    objective: f64,
) {
    match incumbent {
        None => *incumbent = Some(Incumbent { bits, objective }),
        Some(inc) => {
            let better = if problem.maximizing() {
                objective > inc.objective
            } else {
                objective < inc.objective
            };
            if better || (objective == inc.objective && lex_earlier(&bits, &inc.bits)) {
                *incumbent = Some(Incumbent { bits, objective });
            }
        }
    }
}

/// Exact deterministic branch-and-bound over the 0/1 assignments.
pub fn branch_and_bound(problem: &IlpProblem) -> Solution {
    debug_assert!(problem.validate().is_ok());
    let n = problem.variables.len();
    let maximizing = problem.maximizing();

    // Best-first: higher score pops first; ties pop in insertion order,
    // so the x=1 child (pushed first) leads.
    let mut heap: std::collections::BinaryHeap<HeapEntry> = std::collections::BinaryHeap::new();
    let mut seq: u64 = 0;
    let mut nodes_explored: u64 = 0;
    let mut incumbent: Option<Incumbent> = None;

    let root_assign = vec![None; n];
    if let Some(r) = relax(problem, &root_assign) {
        heap.push(HeapEntry::new(
            SearchNode {
                assign: root_assign,
                bound: r.bound,
                point: r.point,
                seq,
            },
            maximizing,
        ));
        seq += 1;
    }

    while let Some(entry) = heap.pop() {
        let node = entry.node;
        nodes_explored += 1;

        if let Some(inc) = &incumbent {
            if prunable(node.bound, &node, inc, maximizing) {
                continue;
            }
        }

        let free: Vec<usize> = (0..n).filter(|&j| node.assign[j].is_none()).collect();

        if free.is_empty() {
            let bits: Vec<u8> = node.assign.iter().map(|a| a.unwrap()).collect();
            if problem.is_feasible(&bits) {
                let objective = problem.objective_of(&bits);
                consider(problem, &mut incumbent, bits, objective);
            }
            continue;
        }

        // An integral relaxation point is the best solution under this
        // node; adopt it, then keep branching only if a lexicographically
        // earlier tie might still hide in the subtree.
        let integral = free
            .iter()
            .all(|&j| (node.point[j] - node.point[j].round()).abs() <= INTEGRALITY_TOL);
        if integral {
            let bits: Vec<u8> = (0..n)
                .map(|j| node.assign[j].unwrap_or_else(|| node.point[j].round() as u8))
                .collect();
            if problem.is_feasible(&bits) {
                let objective = problem.objective_of(&bits);
                consider(problem, &mut incumbent, bits, objective);
                if let Some(inc) = &incumbent {
                    if prunable(node.bound, &node, inc, maximizing) {
                        continue;
                    }
                }
            }
        }

        // Branch on the most fractional free variable; ties and the
        // all-integral case fall to the lowest index. x=1 first.
        let branch_var = free
            .iter()
            .copied()
            .max_by(|&a, &b| {
                let fa = node.point[a].min(1.0 - node.point[a]);
                let fb = node.point[b].min(1.0 - node.point[b]);
                fa.partial_cmp(&fb).unwrap().then(b.cmp(&a))
            })
            .unwrap();

        for value in [1u8, 0u8] {
            let mut child_assign = node.assign.clone();
            child_assign[branch_var] = Some(value);
            if let Some(r) = relax(problem, &child_assign) {
                let child = SearchNode {
                    assign: child_assign,
                    bound: r.bound,
                    point: r.point,
                    seq,
                };
                seq += 1;
                let skip = incumbent
                    .as_ref()
                    .is_some_and(|inc| prunable(child.bound, &child, inc, maximizing));
                if !skip {
                    heap.push(HeapEntry::new(child, maximizing));
                }
            }
        }
    }

    match incumbent {
        Some(inc) => problem.solution(&inc.bits, inc.objective, nodes_explored),
        None => problem.infeasible_solution(nodes_explored),
    }
}

struct HeapEntry {
    score: f64,
    seq: u64,
    node: SearchNode,
}

impl HeapEntry {
    fn new(node: SearchNode, maximizing: bool) -> Self {
        let score = if maximizing { node.bound } else { -node.bound };
        HeapEntry {
            score,
            seq: node.seq,
            node,
        }
    }
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.score == other.score && self.seq == other.seq
    }
}
impl Eq for HeapEntry {}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.score
            .total_cmp(&other.score)
            .then(other.seq.cmp(&self.seq))
    }
}

/// Exhaustive oracle: enumerates all 2^n assignments in the solver's
/// preference order and keeps the first strict improvement, which yields
/// the identical optimum and tie-breaking as [`branch_and_bound`].
pub fn brute_force(problem: &IlpProblem) -> Result<Solution, IlpError> {
    problem.validate()?;
    let n = problem.variables.len();
    if n > BRUTE_FORCE_LIMIT {
        return Err(IlpError::TooManyVariables {
            count: n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let maximizing = problem.maximizing();

    let mut best: Option<Incumbent> = None;
    let total: u64 = 1u64 << n;
    let mut bits = vec![0u8; n];
    for mask in (0..total).rev() {
        for (i, bit) in bits.iter_mut().enumerate() {
            *bit = ((mask >> (n - 1 - i)) & 1) as u8;
        }
        if !problem.is_feasible(&bits) {
            continue;
        }
        let objective = problem.objective_of(&bits);
        let improves = match &best {
            None => true,
            Some(inc) => {
                if maximizing {
                    objective > inc.objective
                } else {
                    objective < inc.objective
                }
            }
        };
        if improves {
            best = Some(Incumbent {
                bits: bits.clone(),
                objective,
            });
        }
    }

    Ok(match best {
        Some(inc) => problem.solution(&inc.bits, inc.objective, total),
        None => problem.infeasible_solution(total),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Entity, Task};
    use proptest::prelude::*;

    fn problem(
        direction: Direction,
        objective: Vec<f64>,
        rows: Vec<(Vec<f64>, RowRelation, f64)>,
    ) -> IlpProblem {
        let n = objective.len();
        IlpProblem {
            direction,
            variables: (0..n).map(|i| format!("t{i}")).collect(),
            objective_coefficients: objective,
            fixed_contribution: 0.0,
            rows: rows
                .into_iter()
                .map(|(coefficients, relation, bound)| Row {
                    coefficients,
                    relation,
                    bound,
                })
                .collect(),
            fixed: BTreeMap::new(),
        }
    }

    fn four_task_instance() -> IlpProblem {
        problem(
            Direction::Max,
            vec![10.0, 7.0, 6.0, 4.0],
            vec![(vec![5.0, 4.0, 3.0, 1.0], RowRelation::Le, 9.0)],
        )
    }

    fn case_model() -> ProcessModel {
        let spec: [(&str, f64, f64); 4] = [
            ("A", 10.0, 5.0),
            ("B", 7.0, 4.0),
            ("C", 6.0, 3.0),
            ("D", 4.0, 1.0),
        ];
        let mut model = ProcessModel::new("G");
        model.entities.push(Entity {
            name: "E".to_string(),
            tasks: spec
                .iter()
                .map(|(name, importance, time)| {
                    Task::new(*name)
                        .with_property("importance", *importance)
                        .with_property("time", *time)
                })
                .collect(),
        });
        model
    }

    #[test]
    fn build_problem_transcribes_model() {
        let model = case_model();
        let tfc = ObjectiveSpec {
            property: "importance".to_string(),
            direction: Direction::Max,
        };
        let cc = vec![PropertyRule {
            property: "time".to_string(),
            relation: Relation::Less,
            value: 9.0,
        }];
        let p = build_problem(&model, Some(&tfc), &cc, &BTreeSet::new(), &BTreeSet::new()).unwrap();
        assert_eq!(p.variables, vec!["A", "B", "C", "D"]);
        assert_eq!(p.objective_coefficients, vec![10.0, 7.0, 6.0, 4.0]);
        assert_eq!(p.fixed_contribution, 0.0);
        assert_eq!(p.rows.len(), 1);
        assert_eq!(p.rows[0].coefficients, vec![5.0, 4.0, 3.0, 1.0]);
        assert_eq!(p.rows[0].relation, RowRelation::Le);
        assert_eq!(p.rows[0].bound, 9.0);
        assert!(p.fixed.is_empty());
    }

    #[test]
    fn build_problem_folds_reserved_tasks_in() {
        let model = case_model();
        let tfc = ObjectiveSpec {
            property: "importance".to_string(),
            direction: Direction::Max,
        };
        let cc = vec![PropertyRule {
            property: "time".to_string(),
            relation: Relation::Less,
            value: 9.0,
        }];
        let reserved = BTreeSet::from(["A".to_string()]);
        let p = build_problem(&model, Some(&tfc), &cc, &reserved, &BTreeSet::new()).unwrap();
        assert_eq!(p.variables, vec!["B", "C", "D"]);
        assert_eq!(p.fixed_contribution, 10.0);
        assert_eq!(p.rows[0].coefficients, vec![4.0, 3.0, 1.0]);
        assert_eq!(p.rows[0].bound, 4.0);
        assert_eq!(p.fixed.get("A"), Some(&1));
    }

    #[test]
    fn build_problem_without_rows_or_objective() {
        let model = case_model();
        let tfc = ObjectiveSpec {
            property: "importance".to_string(),
            direction: Direction::Max,
        };
        let p = build_problem(&model, Some(&tfc), &[], &BTreeSet::new(), &BTreeSet::new()).unwrap();
        assert!(p.rows.is_empty());
        assert_eq!(
            build_problem(&model, None, &[], &BTreeSet::new(), &BTreeSet::new()),
            Err(IlpError::NoObjective)
        );
    }

    #[test]
    fn relaxation_with_all_variables_assigned_is_exact() {
        let p = four_task_instance();
        let partial = vec![Some(1), Some(0), Some(1), Some(1)];
        match relaxation_bound(&p, &partial) {
            RelaxationBound::Bound(b) => assert_eq!(b, 20.0),
            RelaxationBound::Prune => panic!("feasible assignment must not prune"),
        }
    }

    #[test]
    fn relaxation_with_zero_rows_sums_positive_coefficients() {
        let p = problem(Direction::Max, vec![3.0, -2.0, 5.0], vec![]);
        match relaxation_bound(&p, &[None, None, Some(1)]) {
            RelaxationBound::Bound(b) => assert_eq!(b, 3.0 + 5.0),
            RelaxationBound::Prune => panic!("unconstrained relaxation cannot prune"),
        }
    }

    #[test]
    fn relaxation_bounds_the_integer_optimum() {
        let p = four_task_instance();
        match relaxation_bound(&p, &[None; 4]) {
            RelaxationBound::Bound(b) => {
                assert!(b >= 20.0, "bound {b} must dominate the integer optimum");
                assert!(
                    (b - 20.0).abs() < 1e-6,
                    "LP optimum here is exactly 20, got {b}"
                );
            }
            RelaxationBound::Prune => panic!("relaxation is feasible"),
        }
    }

    #[test]
    fn relaxation_detects_infeasible_partial() {
        let p = problem(
            Direction::Max,
            vec![1.0, 1.0],
            vec![(vec![3.0, 3.0], RowRelation::Le, 2.0)],
        );
        assert_eq!(
            relaxation_bound(&p, &[Some(1), None]),
            RelaxationBound::Prune
        );
    }

    #[test]
    fn branch_and_bound_solves_the_four_task_instance() {
        let solution = branch_and_bound(&four_task_instance());
        assert_eq!(solution.status, SolveStatus::Optimal);
        assert_eq!(solution.objective_value, 20.0);
        assert_eq!(solution.stats.best_bound, 20.0);
        let expected: BTreeMap<String, u8> = [("t0", 1), ("t1", 0), ("t2", 1), ("t3", 1)]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
        assert_eq!(solution.assignment, expected);
    }

    #[test]
    fn infeasible_when_fixed_contributions_exceed_bound() {
        // A reserved task already spends 3000 against a <= 2500 budget.
        let p = IlpProblem {
            direction: Direction::Max,
            variables: vec!["free".to_string()],
            objective_coefficients: vec![5.0],
            fixed_contribution: 95.0,
            rows: vec![Row {
                coefficients: vec![10.0],
                relation: RowRelation::Le,
                bound: 2500.0 - 3000.0,
            }],
            fixed: BTreeMap::from([("reserved".to_string(), 1u8)]),
        };
        let solution = branch_and_bound(&p);
        assert_eq!(solution.status, SolveStatus::Infeasible);
        let oracle = brute_force(&p).unwrap();
        assert_eq!(oracle.status, SolveStatus::Infeasible);
    }

    #[test]
    fn no_rows_and_positive_coefficients_keep_everything() {
        let p = problem(Direction::Max, vec![2.0, 1.0, 3.0], vec![]);
        let solution = branch_and_bound(&p);
        assert!(solution.assignment.values().all(|&b| b == 1));
        assert_eq!(solution.objective_value, 6.0);
    }

    #[test]
    fn zero_coefficient_tasks_are_kept_on_ties() {
        let p = problem(Direction::Max, vec![0.0, 5.0], vec![]);
        let solution = branch_and_bound(&p);
        assert_eq!(solution.assignment["t0"], 1);
        assert_eq!(solution.assignment["t1"], 1);
    }

    #[test]
    fn brute_force_zero_variables() {
        let mut p = problem(Direction::Max, vec![], vec![]);
        p.fixed_contribution = 7.5;
        let solution = brute_force(&p).unwrap();
        assert_eq!(solution.status, SolveStatus::Optimal);
        assert_eq!(solution.objective_value, 7.5);
    }

    #[test]
    fn brute_force_matches_frozen_four_task_answer() {
        let solution = brute_force(&four_task_instance()).unwrap();
        assert_eq!(solution.objective_value, 20.0);
        assert_eq!(solution.assignment["t0"], 1);
        assert_eq!(solution.assignment["t1"], 0);
        assert_eq!(solution.assignment["t2"], 1);
        assert_eq!(solution.assignment["t3"], 1);
    }

    #[test]
    fn brute_force_guards_against_blowup() {
        let p = problem(Direction::Max, vec![1.0; 26], vec![]);
        assert!(matches!(
            brute_force(&p),
            Err(IlpError::TooManyVariables { count: 26, .. })
        ));
    }

    #[test]
    fn determinism_byte_identical_solutions() {
        let p = problem(
            Direction::Max,
            vec![4.0, 4.0, 4.0, 2.0, 2.0],
            vec![(vec![3.0, 3.0, 3.0, 1.0, 1.0], RowRelation::Le, 7.0)],
        );
        let a = serde_json::to_string(&branch_and_bound(&p)).unwrap();
        let b = serde_json::to_string(&branch_and_bound(&p)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn validate_rejects_mismatched_rows_and_overlapping_fixed() {
        let mut p = problem(
            Direction::Max,
            vec![1.0],
            vec![(vec![1.0, 2.0], RowRelation::Le, 1.0)],
        );
        assert!(p.validate().is_err());
        p.rows[0].coefficients = vec![1.0];
        p.fixed.insert("t0".to_string(), 1);
        assert!(p.validate().is_err());
    }

    // Small deterministic generator for the oracle-equivalence and
    // admissibility properties.
    fn arb_problem() -> impl Strategy<Value = IlpProblem> {
        (
            1usize..8,
            0usize..3,
            proptest::bool::ANY,
            proptest::collection::vec(0u32..=100, 8),
            proptest::collection::vec(
                (
                    proptest::collection::vec(0u32..=100, 8),
                    proptest::bool::ANY,
                    0u32..=400,
                ),
                0..3,
            ),
        )
            .prop_map(|(n, n_rows, maximize, obj, row_spec)| {
                let rows = row_spec
                    .into_iter()
                    .take(n_rows)
                    .map(|(coeffs, le, bound)| Row {
                        coefficients: coeffs[..n].iter().map(|&c| c as f64).collect(),
                        relation: if le { RowRelation::Le } else { RowRelation::Ge },
                        bound: bound as f64,
                    })
                    .collect();
                IlpProblem {
                    direction: if maximize {
                        Direction::Max
                    } else {
                        Direction::Min
                    },
                    variables: (0..n).map(|i| format!("t{i}")).collect(),
                    objective_coefficients: obj[..n].iter().map(|&c| c as f64).collect(),
                    fixed_contribution: 0.0,
                    rows,
                    fixed: BTreeMap::new(),
                }
            })
    }

    proptest! {
        #[test]
        fn oracle_equivalence(p in arb_problem()) {
            let fast = branch_and_bound(&p);
            let slow = brute_force(&p).unwrap();
            prop_assert_eq!(fast.status, slow.status);
            if fast.status == SolveStatus::Optimal {
                prop_assert_eq!(fast.objective_value, slow.objective_value);
                prop_assert_eq!(&fast.assignment, &slow.assignment);
            }
        }

        #[test]
        fn relaxation_is_admissible(p in arb_problem(), mask in proptest::collection::vec(0u8..3, 8)) {
            let n = p.variables.len();
            let partial: Vec<Option<u8>> = (0..n)
                .map(|i| match mask[i] { 0 => Some(0), 1 => Some(1), _ => None })
                .collect();
            let bound = relaxation_bound(&p, &partial);
            // Enumerate completions; every feasible one must respect the bound.
            let free: Vec<usize> = (0..n).filter(|&i| partial[i].is_none()).collect();
            for mask in 0u32..(1 << free.len()) {
                let mut bits: Vec<u8> = partial.iter().map(|a| a.unwrap_or(0)).collect();
                for (k, &i) in free.iter().enumerate() {
                    bits[i] = ((mask >> k) & 1) as u8;
                }
                if !p.is_feasible(&bits) {
                    continue;
                }
                let value = p.objective_of(&bits);
                match bound {
                    RelaxationBound::Prune => prop_assert!(false, "prune with feasible completion"),
                    RelaxationBound::Bound(b) => {
                        if p.direction == Direction::Max {
                            prop_assert!(b >= value, "bound {} < completion {}", b, value);
                        } else {
                            prop_assert!(b <= value, "bound {} > completion {}", b, value);
                        }
                    }
                }
            }
        }

        #[test]
        fn min_max_duality(p in arb_problem()) {
            let mut negated = p.clone();
            negated.direction = match p.direction {
                Direction::Max => Direction::Min,
                Direction::Min => Direction::Max,
            };
            for c in &mut negated.objective_coefficients {
                *c = -*c;
            }
            negated.fixed_contribution = -negated.fixed_contribution;
            let straight = branch_and_bound(&p);
            let flipped = branch_and_bound(&negated);
            prop_assert_eq!(straight.status, flipped.status);
            if straight.status == SolveStatus::Optimal {
                prop_assert_eq!(straight.objective_value, -flipped.objective_value);
                prop_assert_eq!(&straight.assignment, &flipped.assignment);
            }
        }

        #[test]
        fn optimal_solutions_carry_a_certificate(p in arb_problem()) {
            let solution = branch_and_bound(&p);
            if solution.status == SolveStatus::Optimal {
                let bits: Vec<u8> = p.variables.iter().map(|v| solution.assignment[v]).collect();
                prop_assert!(p.is_feasible(&bits));
                let recomputed = p.objective_of(&bits);
                let scale = 1.0f64.max(recomputed.abs());
                prop_assert!((recomputed - solution.objective_value).abs() <= 1e-9 * scale);
                prop_assert_eq!(solution.stats.best_bound, solution.objective_value);
            }
        }
    }
}

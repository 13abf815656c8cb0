//! End-to-end reconstruction: parse the model, extract constraints,
//! restructure, solve the task-selection program, splice out the dropped
//! tasks, and serialize the result together with a JSON report.

use crate::dsl::{parse_model, serialize_model, ParseDiagnostic};
use crate::extract::{extract, ConstraintSet, Dictionary, Direction, ExtractError, Relation};
use crate::ilp::{branch_and_bound, build_problem, IlpError, SolveStatus};
use crate::model::{ModelError, ProcessModel};
use crate::restructure::{
    add_tasks, reserve_tasks, select_entities, ReservationMark, RestructureError,
};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportStatus {
    Optimal,
    Infeasible,
    /// No objective was requested, so the solver was bypassed and every
    /// task kept.
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportObjective {
    pub property: String,
    pub direction: Direction,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub property: String,
    pub relation: Relation,
    pub bound: f64,
    pub achieved_total: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverStats {
    pub nodes_explored: u64,
    pub best_bound: f64,
    pub status: ReportStatus,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct StageTimings {
    pub parse_ms: u64,
    pub extract_ms: u64,
    pub restructure_ms: u64,
    pub solve_ms: u64,
    pub rebuild_ms: u64,
}

/// What happened to every task, plus the solver's certificate and stage
/// timings. `kept` and `dropped` partition the optimizable tasks;
/// `reserved` and `added` tasks are pinned and listed separately.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionReport {
    pub kept: Vec<String>,
    pub dropped: Vec<String>,
    pub added: Vec<String>,
    pub reserved: Vec<String>,
    pub objective: Option<ReportObjective>,
    pub constraint_rows: Vec<ReportRow>,
    pub solver_stats: SolverStats,
    pub warnings: Vec<String>,
    pub timings: StageTimings,
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("parse: {0}")]
    Parse(#[from] ParseDiagnostic),
    #[error("extract: {0}")]
    Extract(#[from] ExtractError),
    #[error("restructure: {0}")]
    Restructure(#[from] RestructureError),
    #[error("build: {0}")]
    Build(#[from] IlpError),
    #[error("build: constraints were given without an objective to optimize")]
    ConstraintsWithoutObjective,
    #[error("sidecar property for unknown added task \"{0}\"")]
    UnknownAddedTask(String),
    #[error("serialize: {0}")]
    Serialize(#[from] ModelError),
    #[error("solve: the constraints cannot be satisfied")]
    Infeasible(Box<ReconstructionReport>),
}

/// Property overrides for added tasks, from the `--added-props` sidecar:
/// `(task, property, value)` rows replacing the zero defaults.
pub type AddedProps = [(String, String, f64)];

pub fn reconstruct(
    model_text: &str,
    requirements_text: &str,
    dict: &Dictionary,
    added_props: &AddedProps,
) -> Result<(String, ReconstructionReport), PipelineError> {
    let mut timings = StageTimings::default();

    let t = Instant::now();
    let model = parse_model(model_text)?;
    timings.parse_ms = t.elapsed().as_millis() as u64;

    let t = Instant::now();
    let constraints = extract(requirements_text, dict)?;
    timings.extract_ms = t.elapsed().as_millis() as u64;

    let t = Instant::now();
    let model = select_entities(&model, constraints.esc.as_deref())?;
    let (mut model, forced) = add_tasks(&model, &constraints.aac)?;
    apply_added_props(&mut model, &forced, added_props)?;
    let (reserved, warnings) = reserve_tasks(&model, &constraints.arc);
    let mark = ReservationMark { reserved, forced };
    timings.restructure_ms = t.elapsed().as_millis() as u64;

    if constraints.tfc.is_none() {
        if !constraints.cc.is_empty() {
            return Err(PipelineError::ConstraintsWithoutObjective);
        }
        // Nothing to optimize: keep every task.
        let t = Instant::now();
        let text = serialize_model(&model)?;
        timings.rebuild_ms = t.elapsed().as_millis() as u64;
        let report = build_report(
            &model,
            &constraints,
            &mark,
            &model,
            Vec::new(),
            SolverStats {
                nodes_explored: 0,
                best_bound: 0.0,
                status: ReportStatus::Skipped,
            },
            None,
            warnings,
            timings,
        );
        return Ok((text, report));
    }

    let t = Instant::now();
    let problem = build_problem(
        &model,
        constraints.tfc.as_ref(),
        &constraints.cc,
        &mark.reserved,
        &mark.forced,
    )?;
    let solution = branch_and_bound(&problem);
    timings.solve_ms = t.elapsed().as_millis() as u64;

    if solution.status == SolveStatus::Infeasible {
        let report = build_report(
            &model,
            &constraints,
            &mark,
            &model,
            Vec::new(),
            SolverStats {
                nodes_explored: solution.stats.nodes_explored,
                best_bound: solution.stats.best_bound,
                status: ReportStatus::Infeasible,
            },
            None,
            warnings,
            timings,
        );
        return Err(PipelineError::Infeasible(Box::new(report)));
    }

    let t = Instant::now();
    let dropped: Vec<String> = problem
        .variables
        .iter()
        .filter(|name| solution.assignment[*name] == 0)
        .cloned()
        .collect();
    let mut rebuilt = model.clone();
    for name in &dropped {
        rebuilt = rebuilt
            .remove_task_with_splice(name)
            .expect("dropped task came from the model");
    }
    let text = serialize_model(&rebuilt)?;
    timings.rebuild_ms = t.elapsed().as_millis() as u64;

    let objective = constraints.tfc.as_ref().map(|tfc| ReportObjective {
        property: tfc.property.clone(),
        direction: tfc.direction,
        value: solution.objective_value,
    });
    let report = build_report(
        &model,
        &constraints,
        &mark,
        &rebuilt,
        dropped,
        SolverStats {
            nodes_explored: solution.stats.nodes_explored,
            best_bound: solution.stats.best_bound,
            status: ReportStatus::Optimal,
        },
        objective,
        warnings,
        timings,
    );
    Ok((text, report))
}

fn apply_added_props(
    model: &mut ProcessModel,
    forced: &BTreeSet<String>,
    added_props: &AddedProps,
) -> Result<(), PipelineError> {
    for (task_name, property, value) in added_props {
        if !forced.contains(task_name) {
            return Err(PipelineError::UnknownAddedTask(task_name.clone()));
        }
        for entity in &mut model.entities {
            for task in &mut entity.tasks {
                if task.name == *task_name {
                    task.properties.insert(property.clone(), *value);
                }
            }
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn build_report(
    restructured: &ProcessModel,
    constraints: &ConstraintSet,
    mark: &ReservationMark,
    rebuilt: &ProcessModel,
    dropped: Vec<String>,
    solver_stats: SolverStats,
    objective: Option<ReportObjective>,
    warnings: Vec<String>,
    timings: StageTimings,
) -> ReconstructionReport {
    let pinned = mark.pinned();
    let kept: Vec<String> = restructured
        .tasks()
        .map(|t| t.name.clone())
        .filter(|name| !pinned.contains(name) && !dropped.contains(name))
        .collect();
    let reserved: Vec<String> = restructured
        .tasks()
        .map(|t| t.name.clone())
        .filter(|name| mark.reserved.contains(name))
        .collect();
    let added: Vec<String> = constraints.aac.iter().map(|a| a.task.clone()).collect();

    let constraint_rows: Vec<ReportRow> = constraints
        .cc
        .iter()
        .map(|rule| {
            let achieved_total: f64 = rebuilt
                .tasks()
                .filter_map(|t| t.property(&rule.property))
                .sum();
            ReportRow {
                property: rule.property.clone(),
                relation: rule.relation,
                bound: rule.value,
                achieved_total,
            }
        })
        .collect();

    ReconstructionReport {
        kept,
        dropped,
        added,
        reserved,
        objective,
        constraint_rows,
        solver_stats,
        warnings,
        timings,
    }
}

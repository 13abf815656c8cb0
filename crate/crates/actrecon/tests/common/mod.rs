//! Shared seeded generators for the integration and acceptance suites.
//! Everything here is deterministic: the same seed always produces the
//! same fixture, so failures reproduce exactly.

#![allow(dead_code)] // each integration test crate uses a subset

use actrecon::extract::Direction;
use actrecon::ilp::{IlpProblem, Row, RowRelation};
use actrecon::model::{ControlFlow, Entity, ProcessModel, Task};
use std::collections::BTreeMap;

/// SplitMix64: tiny, seedable, and stable across platforms and releases.
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }

    /// Uniform in `[lo, hi]` inclusive.
    pub fn range(&mut self, lo: u64, hi: u64) -> u64 {
        lo + self.below(hi - lo + 1)
    }

    pub fn chance(&mut self, numerator: u64, denominator: u64) -> bool {
        self.below(denominator) < numerator
    }
}

pub const CASE_STUDY_SEED: u64 = 0x00AC_7000_2026_0810;

pub const CASE_STUDY_ENTITIES: [&str; 5] = [
    "Supplier",
    "Airborne Health Management Professional",
    "Member Management Specialist",
    "Test and Validation Expert",
    "Customer Service Company",
];

pub const RFI_TASK: &str = "Airborne Maintenance and Health Management System RFI Response";

/// The 5-entity / 49-task development-process fixture. Property values are
/// seeded so the time and cost budgets are genuinely binding: expected
/// total time is well above 2500 hours, so the solver has to drop tasks.
pub fn case_study_model() -> ProcessModel {
    let mut rng = Rng::new(CASE_STUDY_SEED);
    let task_counts = [10usize, 10, 10, 10, 9];

    let mut model = ProcessModel::new("Onboard Maintenance Development");
    let mut all_tasks: Vec<String> = Vec::new();
    for (entity_name, count) in CASE_STUDY_ENTITIES.iter().zip(task_counts) {
        let mut entity = Entity {
            name: entity_name.to_string(),
            tasks: Vec::new(),
        };
        for step in 1..=count {
            let name = format!("{entity_name} Step {step:02}");
            let task = Task::new(name.clone())
                .with_property("time", rng.range(20, 120) as f64)
                .with_property("cost", (rng.range(50, 600) * 1000) as f64)
                .with_property("importance", rng.range(50, 100) as f64);
            entity.tasks.push(task);
            all_tasks.push(name);
        }
        model.entities.push(entity);
    }

    // A backbone chain in creation order, plus a few forward skips, keeps
    // the flow graph a DAG.
    for window in all_tasks.windows(2) {
        model.flows.push(ControlFlow {
            source: window[0].clone(),
            target: window[1].clone(),
        });
    }
    for i in 0..all_tasks.len() {
        if rng.chance(1, 6) {
            let j = i + 2 + rng.below(5) as usize;
            if j < all_tasks.len() {
                let flow = ControlFlow {
                    source: all_tasks[i].clone(),
                    target: all_tasks[j].clone(),
                };
                if !model.flows.contains(&flow) {
                    model.flows.push(flow);
                }
            }
        }
    }
    model
}

/// The six canonical requirement sentences for the case-study fixture.
pub fn case_study_requirements() -> String {
    let entities: Vec<String> = CASE_STUDY_ENTITIES
        .iter()
        .map(|e| format!("\"{e}\""))
        .collect();
    format!(
        concat!(
            "# Development requirements for the onboard maintenance system rebuild\n",
            "The new model shall contain {}\n",
            "Supplier shall add \"{}\"\n",
            "The \"importance\" is maximum\n",
            "Reserve \"importance\" higher than 90 tasks\n",
            "The \"time\" does not exceed 2500 hours\n",
            "The \"cost\" does not exceed 15,000,000\n",
        ),
        entities.join(", "),
        RFI_TASK
    )
}

const NAME_CHARS: &[char] = &[
    'a', 'b', 'c', 'X', 'Y', 'Z', '0', '7', ' ', ' ', '"', '\\', '#', '-', '_', '.', '\u{e9}',
    '\u{4ef6}', '\u{3001}',
];

fn tricky_name(rng: &mut Rng, counter: usize) -> String {
    let len = rng.below(9) as usize;
    let mut name = String::new();
    for _ in 0..len {
        name.push(NAME_CHARS[rng.below(NAME_CHARS.len() as u64) as usize]);
    }
    // The counter suffix keeps names unique even after whitespace trimming.
    name.push_str(&format!("#{counter}"));
    name
}

const PROP_NAMES: [&str; 5] = ["time", "cost", "importance", "risk_level", "head_count"];

/// Random valid model with adversarial names (quotes, backslashes,
/// comment characters, non-ASCII) for parser round-trip stress.
pub fn random_model(rng: &mut Rng) -> ProcessModel {
    let mut model = ProcessModel::new(tricky_name(rng, 0));
    let n_entities = rng.below(4) as usize;
    let mut counter = 1;
    let mut task_names: Vec<String> = Vec::new();

    for _ in 0..n_entities {
        let mut entity = Entity {
            name: tricky_name(rng, counter),
            tasks: Vec::new(),
        };
        counter += 1;
        for _ in 0..rng.below(5) {
            let mut task = Task::new(tricky_name(rng, counter));
            counter += 1;
            for prop in PROP_NAMES.iter().take(rng.below(4) as usize) {
                let value = match rng.below(4) {
                    0 => rng.below(10_000) as f64,
                    1 => rng.below(1_000_000) as f64 / 100.0,
                    2 => 0.0,
                    _ => rng.below(1_000_000_000) as f64 / 7.0,
                };
                task.properties.insert(prop.to_string(), value);
            }
            task_names.push(task.name.clone());
            entity.tasks.push(task);
        }
        model.entities.push(entity);
    }

    for _ in 0..rng.below(10) {
        if task_names.len() < 2 {
            break;
        }
        let a = rng.below(task_names.len() as u64) as usize;
        let b = rng.below(task_names.len() as u64) as usize;
        if a == b {
            continue;
        }
        let flow = ControlFlow {
            source: task_names[a].clone(),
            target: task_names[b].clone(),
        };
        if !model.flows.contains(&flow) {
            model.flows.push(flow);
        }
    }
    model
}

/// Random DAG model (edges only run forward in task order) plus the index
/// of a task to remove, for splice-reachability checks.
pub fn random_dag_model(rng: &mut Rng) -> (ProcessModel, Vec<String>, String) {
    let n_tasks = rng.range(5, 24) as usize;
    let names: Vec<String> = (0..n_tasks).map(|i| format!("step {i:02}")).collect();

    let mut model = ProcessModel::new("dag");
    let n_entities = rng.range(1, 3) as usize;
    for e in 0..n_entities {
        model.entities.push(Entity {
            name: format!("lane {e}"),
            tasks: Vec::new(),
        });
    }
    for (i, name) in names.iter().enumerate() {
        let lane = i % n_entities;
        model.entities[lane].tasks.push(Task::new(name.clone()));
    }
    for i in 0..n_tasks {
        for j in i + 1..n_tasks {
            if rng.chance(1, 5) {
                model.flows.push(ControlFlow {
                    source: names[i].clone(),
                    target: names[j].clone(),
                });
            }
        }
    }
    let removal = names[rng.below(n_tasks as u64) as usize].clone();
    (model, names, removal)
}

/// Random 0/1 instance matching the oracle-equivalence profile:
/// 1..=15 variables, 0..=3 rows, integer coefficients in [0, 100], row
/// bounds sampled around the coefficient sum so roughly half are binding.
pub fn random_ilp(rng: &mut Rng) -> IlpProblem {
    let n = rng.range(1, 15) as usize;
    let n_rows = rng.below(4) as usize;
    let direction = if rng.chance(3, 4) {
        Direction::Max
    } else {
        Direction::Min
    };
    let objective: Vec<f64> = (0..n).map(|_| rng.below(101) as f64).collect();

    let mut rows = Vec::new();
    for _ in 0..n_rows {
        let coefficients: Vec<f64> = (0..n).map(|_| rng.below(101) as f64).collect();
        let sum: f64 = coefficients.iter().sum();
        let relation = if rng.chance(3, 4) {
            RowRelation::Le
        } else {
            RowRelation::Ge
        };
        let bound = match relation {
            // Scale factor in [0.3, 1.3]: about half the rows end up binding.
            RowRelation::Le => (sum * rng.range(30, 130) as f64 / 100.0).round(),
            RowRelation::Ge => (sum * rng.range(0, 60) as f64 / 100.0).round(),
        };
        rows.push(Row {
            coefficients,
            relation,
            bound,
        });
    }

    let fixed_contribution = if rng.chance(1, 4) {
        rng.below(100) as f64
    } else {
        0.0
    };
    IlpProblem {
        direction,
        variables: (0..n).map(|i| format!("task {i:02}")).collect(),
        objective_coefficients: objective,
        fixed_contribution,
        rows,
        fixed: BTreeMap::new(),
    }
}

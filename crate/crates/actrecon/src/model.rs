//! In-memory representation of an ACT development-process model.
//!
//! A model is a named graph: entities (swimlanes) own ordered task lists,
//! and control flows connect tasks across the whole model. All types are
//! immutable values after construction; the operations here return new
//! models rather than mutating in place.

use indexmap::IndexMap;
use std::collections::HashSet;
use thiserror::Error;

/// Task names are the global identity. Matching is exact after trimming
/// surrounding whitespace, case-sensitive.
pub fn name_eq(a: &str, b: &str) -> bool {
    a.trim() == b.trim()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProcessModel {
    pub name: String,
    pub entities: Vec<Entity>,
    pub flows: Vec<ControlFlow>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Entity {
    pub name: String,
    pub tasks: Vec<Task>,
}

/// A process step with numeric properties (e.g. `time`, `cost`,
/// `importance`). The property set is open: any lowercase identifier.
#[derive(Debug, Clone, PartialEq)]
pub struct Task {
    pub name: String,
    pub properties: IndexMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ControlFlow {
    pub source: String,
    pub target: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("unknown task \"{0}\"")]
    UnknownTask(String),
    #[error("invalid model: {}", .0.join("; "))]
    Invalid(Vec<String>),
}

fn is_property_ident(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

impl ProcessModel {
    pub fn new(name: impl Into<String>) -> Self {
        ProcessModel {
            name: name.into(),
            entities: Vec::new(),
            flows: Vec::new(),
        }
    }

    /// Returns one entry per violated invariant, each naming the offending
    /// element. Empty iff the model is well-formed.
    pub fn validate(&self) -> Vec<String> {
        let mut violations = Vec::new();

        let mut entity_names: HashSet<&str> = HashSet::new();
        for entity in &self.entities {
            if !entity_names.insert(entity.name.trim()) {
                violations.push(format!("duplicate entity name \"{}\"", entity.name));
            }
        }

        let mut task_names: HashSet<&str> = HashSet::new();
        for task in self.tasks() {
            if !task_names.insert(task.name.trim()) {
                violations.push(format!("duplicate task name \"{}\"", task.name));
            }
            for (prop, value) in &task.properties {
                if !is_property_ident(prop) {
                    violations.push(format!(
                        "task \"{}\": property name \"{}\" must match [a-z][a-z0-9_]*",
                        task.name, prop
                    ));
                }
                if !value.is_finite() || *value < 0.0 {
                    violations.push(format!(
                        "task \"{}\": property \"{}\" must be finite and >= 0, got {}",
                        task.name, prop, value
                    ));
                }
            }
        }

        let mut seen_flows: Vec<(&str, &str)> = Vec::new();
        for flow in &self.flows {
            let src = flow.source.trim();
            let tgt = flow.target.trim();
            if !task_names.contains(src) {
                violations.push(format!(
                    "flow \"{}\" -> \"{}\": unknown source task",
                    flow.source, flow.target
                ));
            }
            if !task_names.contains(tgt) {
                violations.push(format!(
                    "flow \"{}\" -> \"{}\": unknown target task",
                    flow.source, flow.target
                ));
            }
            if src == tgt {
                violations.push(format!(
                    "flow \"{}\" -> \"{}\": self-loop",
                    flow.source, flow.target
                ));
            }
            if seen_flows.contains(&(src, tgt)) {
                violations.push(format!(
                    "duplicate flow \"{}\" -> \"{}\"",
                    flow.source, flow.target
                ));
            }
            seen_flows.push((src, tgt));
        }

        violations
    }

    /// Owning entity and task record for `name`, or `None` when absent.
    pub fn lookup_task(&self, name: &str) -> Option<(&Entity, &Task)> {
        for entity in &self.entities {
            for task in &entity.tasks {
                if name_eq(&task.name, name) {
                    return Some((entity, task));
                }
            }
        }
        None
    }

    /// Removes `name` and reconnects every predecessor to every successor,
    /// so reachability among the remaining tasks is preserved. Splicing
    /// never introduces self-loops or duplicate flows.
    pub fn remove_task_with_splice(&self, name: &str) -> Result<ProcessModel, ModelError> {
        if self.lookup_task(name).is_none() {
            return Err(ModelError::UnknownTask(name.to_string()));
        }

        let mut result = self.clone();
        for entity in &mut result.entities {
            entity.tasks.retain(|t| !name_eq(&t.name, name));
        }

        let mut predecessors: Vec<String> = Vec::new();
        let mut successors: Vec<String> = Vec::new();
        for flow in &self.flows {
            if name_eq(&flow.target, name) && !predecessors.iter().any(|p| name_eq(p, &flow.source))
            {
                predecessors.push(flow.source.clone());
            }
            if name_eq(&flow.source, name) && !successors.iter().any(|s| name_eq(s, &flow.target)) {
                successors.push(flow.target.clone());
            }
        }

        result
            .flows
            .retain(|f| !name_eq(&f.source, name) && !name_eq(&f.target, name));

        for pred in &predecessors {
            for succ in &successors {
                if name_eq(pred, succ) {
                    continue;
                }
                let exists = result
                    .flows
                    .iter()
                    .any(|f| name_eq(&f.source, pred) && name_eq(&f.target, succ));
                if !exists {
                    result.flows.push(ControlFlow {
                        source: pred.clone(),
                        target: succ.clone(),
                    });
                }
            }
        }

        Ok(result)
    }

    /// All tasks in model order (entity order, then task order within each).
    pub fn tasks(&self) -> impl Iterator<Item = &Task> {
        self.entities.iter().flat_map(|e| e.tasks.iter())
    }

    /// Union of property names over all tasks, in first-seen model order.
    pub fn property_universe(&self) -> Vec<String> {
        let mut universe = Vec::new();
        for task in self.tasks() {
            for prop in task.properties.keys() {
                if !universe.iter().any(|p| p == prop) {
                    universe.push(prop.clone());
                }
            }
        }
        universe
    }
}

impl Task {
    pub fn new(name: impl Into<String>) -> Self {
        Task {
            name: name.into(),
            properties: IndexMap::new(),
        }
    }

    pub fn with_property(mut self, name: impl Into<String>, value: f64) -> Self {
        self.properties.insert(name.into(), value);
        self
    }

    pub fn property(&self, name: &str) -> Option<f64> {
        self.properties.get(name).copied()
    }
}

//! Structural reorganization of a process model: entity selection, task
//! augmentation, and reservation marking. Stages run in that order; the
//! reservation rules apply to the restructured model.

use crate::extract::{PropertyRule, Relation, TaskAddition};
use crate::model::{name_eq, ProcessModel, Task};
use std::collections::BTreeSet;
use thiserror::Error;

/// Task names pinned to survive optimization: `reserved` by rule,
/// `forced` because they were just added to satisfy a requirement.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReservationMark {
    pub reserved: BTreeSet<String>,
    pub forced: BTreeSet<String>,
}

impl ReservationMark {
    pub fn pinned(&self) -> BTreeSet<String> {
        self.reserved.union(&self.forced).cloned().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RestructureError {
    #[error("unknown entity \"{0}\"")]
    UnknownEntity(String),
    #[error("task \"{0}\" already exists in the model")]
    DuplicateTask(String),
}

/// Entity names resolve exactly first, then case-insensitively with
/// surrounding whitespace trimmed: requirements prose capitalizes freely.
fn resolve_entity<'a>(model: &'a ProcessModel, name: &str) -> Option<&'a str> {
    if let Some(entity) = model.entities.iter().find(|e| name_eq(&e.name, name)) {
        return Some(&entity.name);
    }
    let wanted = name.trim().to_lowercase();
    model
        .entities
        .iter()
        .find(|e| e.name.trim().to_lowercase() == wanted)
        .map(|e| e.name.as_str())
}

/// Keeps exactly the selected entities (in original model order) and
/// removes every task of a dropped entity via splice, so flows through
/// dropped tasks are reconnected. `None` returns the model unchanged.
pub fn select_entities(
    model: &ProcessModel,
    esc: Option<&[String]>,
) -> Result<ProcessModel, RestructureError> {
    let esc = match esc {
        None => return Ok(model.clone()),
        Some(esc) => esc,
    };

    let mut keep: Vec<&str> = Vec::new();
    for name in esc {
        match resolve_entity(model, name) {
            Some(resolved) => keep.push(resolved),
            None => return Err(RestructureError::UnknownEntity(name.clone())),
        }
    }

    let mut result = model.clone();
    let doomed: Vec<String> = result
        .entities
        .iter()
        .filter(|e| !keep.iter().any(|k| name_eq(k, &e.name)))
        .flat_map(|e| e.tasks.iter().map(|t| t.name.clone()))
        .collect();
    for task in doomed {
        result = result
            .remove_task_with_splice(&task)
            .expect("task collected from the model must exist");
    }
    result
        .entities
        .retain(|e| keep.iter().any(|k| name_eq(k, &e.name)));
    Ok(result)
}

/// Appends each requested task to its entity with every property of the
/// model's property universe set to 0. No flows are added. Returns the
/// new model and the set of added task names (the forced set).
pub fn add_tasks(
    model: &ProcessModel,
    aac: &[TaskAddition],
) -> Result<(ProcessModel, BTreeSet<String>), RestructureError> {
    let universe = model.property_universe();
    let mut result = model.clone();
    let mut forced = BTreeSet::new();

    for addition in aac {
        let entity_name = resolve_entity(&result, &addition.entity)
            .ok_or_else(|| RestructureError::UnknownEntity(addition.entity.clone()))?
            .to_string();
        if result.lookup_task(&addition.task).is_some() {
            return Err(RestructureError::DuplicateTask(addition.task.clone()));
        }
        let mut task = Task::new(addition.task.clone());
        for prop in &universe {
            task.properties.insert(prop.clone(), 0.0);
        }
        let entity = result
            .entities
            .iter_mut()
            .find(|e| name_eq(&e.name, &entity_name))
            .expect("entity was just resolved");
        entity.tasks.push(task);
        forced.insert(addition.task.clone());
    }
    Ok((result, forced))
}

/// Tasks whose property satisfies a reservation rule under the strict
/// comparison (`greater` means value > threshold). Tasks missing the
/// property never match. A rule whose property appears on no task at all
/// contributes nothing and produces a warning.
pub fn reserve_tasks(
    model: &ProcessModel,
    arc: &[PropertyRule],
) -> (BTreeSet<String>, Vec<String>) {
    let mut reserved = BTreeSet::new();
    let mut warnings = Vec::new();

    for rule in arc {
        let known = model
            .tasks()
            .any(|t| t.properties.contains_key(&rule.property));
        if !known {
            warnings.push(format!(
                "reservation rule on \"{}\" matches no task: no task has that property",
                rule.property
            ));
            continue;
        }
        for task in model.tasks() {
            let value = match task.property(&rule.property) {
                Some(v) => v,
                None => continue,
            };
            let hit = match rule.relation {
                Relation::Greater => value > rule.value,
                Relation::Less => value < rule.value,
            };
            if hit {
                reserved.insert(task.name.clone());
            }
        }
    }
    (reserved, warnings)
}

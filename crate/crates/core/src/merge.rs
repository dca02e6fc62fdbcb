//! Synthesis of a single ordered recipe from the accepted steps of several
//! recipes.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::af::{join, ArgumentId, Label, Labeling};
use crate::conflict::StepInfo;
use crate::recipe::{footprint, Operation, Recipe, RecipeJson, StepJson};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DependencyReason {
    IntraRecipe,
    ProducesConsumes,
    ConsumeBeforeDelete,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DependencyEdge {
    pub before: ArgumentId,
    pub after: ArgumentId,
    pub reason: DependencyReason,
}

impl fmt::Display for DependencyEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} ({:?})", self.before, self.after, self.reason)
    }
}

/// Which dependency rules [`dependency_edges`] applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct DependencyRules {
    pub intra_recipe: bool,
    pub produces_consumes: bool,
    pub consume_before_delete: bool,
}

impl Default for DependencyRules {
    fn default() -> Self {
        DependencyRules {
            intra_recipe: true,
            produces_consumes: true,
            consume_before_delete: true,
        }
    }
}

/// Ordering constraints among accepted steps.
///
/// * intra-recipe: steps of one recipe keep their authored order;
/// * produces/consumes: across recipes, a step writing a column comes before
///   a step reading or deleting it;
/// * consume-before-delete: across recipes, a reader of a column comes before
///   its deleter, unless a produces/consumes edge already orders the pair
///   the other way.
pub fn dependency_edges(accepted: &[StepInfo], rules: DependencyRules) -> BTreeSet<DependencyEdge> {
    let fps: Vec<_> = accepted.iter().map(|s| footprint(&s.operation)).collect();
    let mut edges = BTreeSet::new();
    let edge = |before: &StepInfo, after: &StepInfo, reason| DependencyEdge {
        before: before.label.clone(),
        after: after.label.clone(),
        reason,
    };

    for (i, x) in accepted.iter().enumerate() {
        for (j, y) in accepted.iter().enumerate() {
            if i == j {
                continue;
            }
            if x.recipe == y.recipe {
                if rules.intra_recipe && x.position < y.position {
                    edges.insert(edge(x, y, DependencyReason::IntraRecipe));
                }
                continue;
            }
            if rules.produces_consumes && produces_for(&fps[i], &fps[j]) {
                edges.insert(edge(x, y, DependencyReason::ProducesConsumes));
            }
        }
    }

    if rules.consume_before_delete {
        for (i, x) in accepted.iter().enumerate() {
            for (j, y) in accepted.iter().enumerate() {
                if i == j || x.recipe == y.recipe {
                    continue;
                }
                // x deletes a column y reads: y goes first.
                let starves = fps[i].columns_deleted.iter().any(|c| fps[j].columns_read.contains(c));
                let opposed = rules.produces_consumes && produces_for(&fps[i], &fps[j]);
                if starves && !opposed {
                    edges.insert(edge(y, x, DependencyReason::ConsumeBeforeDelete));
                }
            }
        }
    }
    edges
}

fn produces_for(x: &crate::recipe::Footprint, y: &crate::recipe::Footprint) -> bool {
    x.columns_written
        .iter()
        .any(|c| y.columns_read.contains(c) || y.columns_deleted.contains(c))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MergedStep {
    pub label: ArgumentId,
    pub operation: Operation,
    pub curator: String,
    /// Position in the source recipe.
    pub position: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MergedRecipe {
    pub steps: Vec<MergedStep>,
    pub dependency_edges: BTreeSet<DependencyEdge>,
}

impl MergedRecipe {
    pub fn labels(&self) -> Vec<&ArgumentId> {
        self.steps.iter().map(|s| &s.label).collect()
    }

    /// Same steps and edges, in the order given by `labels`.
    pub fn reordered(&self, labels: &[&str]) -> Result<MergedRecipe, MergeError> {
        let mut by_label: BTreeMap<&str, &MergedStep> = self.steps.iter().map(|s| (s.label.as_str(), s)).collect();
        let mut steps = Vec::with_capacity(labels.len());
        for l in labels {
            let step = by_label.remove(l).ok_or_else(|| MergeError::UnknownStep((*l).into()))?;
            steps.push(step.clone());
        }
        if let Some(missing) = by_label.keys().next() {
            return Err(MergeError::UnknownStep((*missing).into()));
        }
        Ok(MergedRecipe {
            steps,
            dependency_edges: self.dependency_edges.clone(),
        })
    }

    /// Recipe JSON with per-step `curator` / `source_label` annotations and
    /// the dependency edges under `dependencies`.
    pub fn to_json(&self) -> String {
        let steps = self
            .steps
            .iter()
            .map(|s| StepJson {
                curator: Some(s.curator.clone()),
                source_label: Some(s.label.to_string()),
                ..StepJson::new(&s.label, &s.operation)
            })
            .collect();
        let deps = self
            .dependency_edges
            .iter()
            .map(|e| json!({"before": e.before, "after": e.after, "reason": e.reason}))
            .collect();
        let file = RecipeJson {
            curator: "merged".into(),
            steps,
            dependencies: Some(serde_json::Value::Array(deps)),
        };
        serde_json::to_string_pretty(&file).expect("merged recipe serializes") + "\n"
    }
}

/// Merges the IN steps of `recipes` under `labeling` with the default rules.
pub fn merge(recipes: &[Recipe], labeling: &Labeling) -> Result<MergedRecipe, MergeError> {
    merge_with(recipes, labeling, DependencyRules::default())
}

pub fn merge_with(recipes: &[Recipe], labeling: &Labeling, rules: DependencyRules) -> Result<MergedRecipe, MergeError> {
    let mut seen = HashSet::new();
    let mut steps = Vec::new();
    for (ri, recipe) in recipes.iter().enumerate() {
        for step in &recipe.steps {
            if !seen.insert(step.label.clone()) {
                return Err(MergeError::DuplicateLabel(step.label.clone()));
            }
            steps.push(StepInfo {
                label: step.label.clone(),
                curator: recipe.curator.clone(),
                recipe: ri,
                position: step.position,
                operation: step.operation.clone(),
            });
        }
    }

    let mut unlabeled = Vec::new();
    let mut undecided = Vec::new();
    for s in &steps {
        match labeling.get(s.label.as_str()) {
            None => unlabeled.push(s.label.clone()),
            Some(Label::Undec) => undecided.push(s.label.clone()),
            Some(_) => {}
        }
    }
    if !unlabeled.is_empty() {
        unlabeled.sort();
        return Err(MergeError::Unlabeled(unlabeled));
    }
    if let Some((extra, _)) = labeling.iter().find(|(a, _)| !seen.contains(*a)) {
        return Err(MergeError::UnknownStep(extra.clone()));
    }
    if !undecided.is_empty() {
        undecided.sort();
        return Err(MergeError::Unresolved(undecided));
    }

    let accepted: Vec<StepInfo> = steps
        .into_iter()
        .filter(|s| labeling.get(s.label.as_str()) == Some(Label::In))
        .collect();
    let edges = dependency_edges(&accepted, rules);
    let order = topological_order(&accepted, &edges)?;
    Ok(MergedRecipe {
        steps: order
            .into_iter()
            .map(|i| {
                let s = &accepted[i];
                MergedStep {
                    label: s.label.clone(),
                    operation: s.operation.clone(),
                    curator: s.curator.clone(),
                    position: s.position,
                }
            })
            .collect(),
        dependency_edges: edges,
    })
}

/// Kahn's algorithm; among ready steps the smallest (original position,
/// curator, label) goes first.
fn topological_order(steps: &[StepInfo], edges: &BTreeSet<DependencyEdge>) -> Result<Vec<usize>, MergeError> {
    let index: BTreeMap<&ArgumentId, usize> = steps.iter().enumerate().map(|(i, s)| (&s.label, i)).collect();
    let n = steps.len();
    let mut succ = vec![Vec::new(); n];
    let mut pred = vec![Vec::new(); n];
    let mut indegree = vec![0usize; n];
    let mut pairs = BTreeSet::new();
    for e in edges {
        let (b, a) = (index[&e.before], index[&e.after]);
        if pairs.insert((b, a)) {
            succ[b].push(a);
            pred[a].push(b);
            indegree[a] += 1;
        }
    }

    let key = |i: usize| (steps[i].position, steps[i].curator.as_str(), &steps[i].label, i);
    let mut ready: BTreeSet<_> = (0..n).filter(|&i| indegree[i] == 0).map(key).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(first) = ready.pop_first() {
        let i = first.3;
        order.push(i);
        for &t in &succ[i] {
            indegree[t] -= 1;
            if indegree[t] == 0 {
                ready.insert(key(t));
            }
        }
    }
    if order.len() == n {
        return Ok(order);
    }

    // Every remaining node has a remaining predecessor; walk back to a repeat.
    let start = (0..n).find(|&i| indegree[i] > 0).expect("unsorted node");
    let mut path = vec![start];
    let mut pos = BTreeMap::from([(start, 0usize)]);
    let mut cur = start;
    loop {
        let p = *pred[cur]
            .iter()
            .find(|&&p| indegree[p] > 0)
            .expect("remaining predecessor");
        if let Some(&at) = pos.get(&p) {
            let mut cycle: Vec<ArgumentId> = path[at..].iter().map(|&i| steps[i].label.clone()).collect();
            cycle.reverse();
            return Err(MergeError::Cycle(cycle));
        }
        pos.insert(p, path.len());
        path.push(p);
        cur = p;
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OrderViolation {
    Misordered { edge: DependencyEdge },
    MissingStep { edge: DependencyEdge, label: ArgumentId },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderCheck {
    pub valid: bool,
    pub violations: Vec<OrderViolation>,
}

/// Checks every dependency edge against the step order of `merged`.
pub fn validate_order(merged: &MergedRecipe) -> OrderCheck {
    let at: BTreeMap<&ArgumentId, usize> = merged.steps.iter().enumerate().map(|(i, s)| (&s.label, i)).collect();
    let mut violations = Vec::new();
    for e in &merged.dependency_edges {
        match (at.get(&e.before), at.get(&e.after)) {
            (Some(b), Some(a)) if b < a => {}
            (Some(_), Some(_)) => violations.push(OrderViolation::Misordered { edge: e.clone() }),
            (None, _) => violations.push(OrderViolation::MissingStep {
                edge: e.clone(),
                label: e.before.clone(),
            }),
            (_, None) => violations.push(OrderViolation::MissingStep {
                edge: e.clone(),
                label: e.after.clone(),
            }),
        }
    }
    OrderCheck {
        valid: violations.is_empty(),
        violations,
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MergeError {
    #[error("unresolved conflicts: {} undecided; select a stable labeling", join(.0))]
    Unresolved(Vec<ArgumentId>),
    #[error("dependency cycle: {}", join(.0))]
    Cycle(Vec<ArgumentId>),
    #[error("labeling does not cover steps: {}", join(.0))]
    Unlabeled(Vec<ArgumentId>),
    #[error("unknown step `{0}`")]
    UnknownStep(ArgumentId),
    #[error("step label `{0}` is used more than once")]
    DuplicateLabel(ArgumentId),
}

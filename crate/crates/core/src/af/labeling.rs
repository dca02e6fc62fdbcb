use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{AfError, ArgumentId, AttackGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    /// Accepted.
    In,
    /// Rejected (defeated).
    Out,
    /// Undecided.
    Undec,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::In => "in",
            Label::Out => "out",
            Label::Undec => "undec",
        })
    }
}

/// Assignment of a [`Label`] to arguments. Serializes as a JSON object
/// `{"a": "in", "b": "out", ...}` with keys in sorted order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Labeling(BTreeMap<ArgumentId, Label>);

impl Labeling {
    pub fn new() -> Self {
        Self::default()
    }

    /// A labeling giving every argument of `graph` the same label.
    pub fn uniform(graph: &AttackGraph, label: Label) -> Self {
        Labeling(graph.arguments().iter().map(|a| (a.clone(), label)).collect())
    }

    pub fn set(&mut self, arg: ArgumentId, label: Label) {
        self.0.insert(arg, label);
    }

    pub fn get(&self, arg: &str) -> Option<Label> {
        self.0.get(arg).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ArgumentId, Label)> {
        self.0.iter().map(|(a, l)| (a, *l))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Arguments carrying `label`, in sorted order.
    pub fn with_label(&self, label: Label) -> Vec<&ArgumentId> {
        self.iter().filter(|(_, l)| *l == label).map(|(a, _)| a).collect()
    }

    pub fn in_set(&self) -> Vec<&ArgumentId> {
        self.with_label(Label::In)
    }

    pub fn count(&self, label: Label) -> usize {
        self.0.values().filter(|l| **l == label).count()
    }

    pub fn is_two_valued(&self) -> bool {
        self.count(Label::Undec) == 0
    }

    /// True if `self` agrees with `coarser` on every argument `coarser`
    /// decides (labels IN or OUT).
    pub fn refines(&self, coarser: &Labeling) -> bool {
        coarser
            .iter()
            .filter(|(_, l)| *l != Label::Undec)
            .all(|(a, l)| self.get(a.as_str()) == Some(l))
    }

    /// Checks that exactly the arguments of `graph` are labeled.
    pub fn check_total(&self, graph: &AttackGraph) -> Result<(), AfError> {
        let missing: Vec<ArgumentId> = graph
            .arguments()
            .iter()
            .filter(|a| !self.0.contains_key(*a))
            .cloned()
            .collect();
        if !missing.is_empty() {
            return Err(AfError::NotTotal(missing));
        }
        if let Some(extra) = self.0.keys().find(|a| !graph.arguments().contains(*a)) {
            return Err(AfError::UnknownArgument(extra.clone()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("labeling serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, AfError> {
        serde_json::from_str(text).map_err(|e| AfError::LabelingJson(e.to_string()))
    }
}

impl FromIterator<(ArgumentId, Label)> for Labeling {
    fn from_iter<I: IntoIterator<Item = (ArgumentId, Label)>>(iter: I) -> Self {
        Labeling(iter.into_iter().collect())
    }
}

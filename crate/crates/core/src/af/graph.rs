use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::AfError;

/// Identifier of an argument; in a reconciliation session this is the step
/// label of a curation action (`"E"`, `"Q"`, ...).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ArgumentId(String);

impl ArgumentId {
    pub fn new(id: impl Into<String>) -> Result<Self, AfError> {
        let id = id.into();
        if id.is_empty() {
            return Err(AfError::EmptyArgumentId);
        }
        Ok(ArgumentId(id))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ArgumentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for ArgumentId {
    /// Panics on an empty string; use [`ArgumentId::new`] for untrusted input.
    fn from(s: &str) -> Self {
        ArgumentId::new(s).expect("argument id must be non-empty")
    }
}

impl std::borrow::Borrow<str> for ArgumentId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

pub type Attack = (ArgumentId, ArgumentId);

/// A finite directed attack graph. Arguments and attacks are kept as ordered
/// sets so every traversal is deterministic.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AttackGraph {
    arguments: BTreeSet<ArgumentId>,
    attacks: BTreeSet<Attack>,
}

impl AttackGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph from explicit parts, rejecting attacks whose endpoints
    /// are not declared arguments.
    pub fn from_parts(
        arguments: impl IntoIterator<Item = ArgumentId>,
        attacks: impl IntoIterator<Item = Attack>,
    ) -> Result<Self, AfError> {
        let mut graph = AttackGraph::new();
        for arg in arguments {
            graph.add_argument(arg);
        }
        for (attacker, target) in attacks {
            graph.add_attack(attacker, target)?;
        }
        Ok(graph)
    }

    /// Returns `false` if the argument was already present.
    pub fn add_argument(&mut self, arg: ArgumentId) -> bool {
        self.arguments.insert(arg)
    }

    pub fn add_attack(&mut self, attacker: ArgumentId, target: ArgumentId) -> Result<bool, AfError> {
        for end in [&attacker, &target] {
            if !self.arguments.contains(end) {
                return Err(AfError::UndeclaredArgument(end.clone()));
            }
        }
        Ok(self.attacks.insert((attacker, target)))
    }

    pub fn arguments(&self) -> &BTreeSet<ArgumentId> {
        &self.arguments
    }

    pub fn attacks(&self) -> &BTreeSet<Attack> {
        &self.attacks
    }

    pub fn contains(&self, arg: &str) -> bool {
        self.arguments.contains(arg)
    }

    pub fn len(&self) -> usize {
        self.arguments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arguments.is_empty()
    }

    pub fn attackers_of<'a>(&'a self, target: &'a ArgumentId) -> impl Iterator<Item = &'a ArgumentId> + 'a {
        self.attacks.iter().filter(move |(_, t)| t == target).map(|(a, _)| a)
    }

    pub(crate) fn indexed(&self) -> IndexedGraph<'_> {
        IndexedGraph::new(self)
    }
}

/// Dense integer view of an [`AttackGraph`] used by the solvers. Index order
/// follows the sorted argument order.
pub(crate) struct IndexedGraph<'g> {
    pub ids: Vec<&'g ArgumentId>,
    pub attackers: Vec<Vec<usize>>,
    pub targets: Vec<Vec<usize>>,
}

impl<'g> IndexedGraph<'g> {
    fn new(graph: &'g AttackGraph) -> Self {
        let ids: Vec<&ArgumentId> = graph.arguments.iter().collect();
        let index: BTreeMap<&ArgumentId, usize> = ids.iter().enumerate().map(|(i, id)| (*id, i)).collect();
        let mut attackers = vec![Vec::new(); ids.len()];
        let mut targets = vec![Vec::new(); ids.len()];
        for (a, t) in &graph.attacks {
            let (a, t) = (index[a], index[t]);
            attackers[t].push(a);
            targets[a].push(t);
        }
        IndexedGraph {
            ids,
            attackers,
            targets,
        }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }
}

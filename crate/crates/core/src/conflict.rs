//! Pairwise conflict detection between steps of different recipes.
//!
//! The operation-conflict matrix is plain data ([`ConflictMatrix`]): each
//! rule names an ordered pair of operation kinds, the overlap that must hold
//! between them, and the resulting attack direction. Lookups for the mirrored
//! pair flip the direction, so only one triangle of the matrix is stored.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::af::{ArgumentId, AttackGraph};
use crate::recipe::{OpKind, Operation, Recipe, RowId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConflictKind {
    Mutual,
    AAttacksB,
    BAttacksA,
    None,
}

impl ConflictKind {
    pub fn mirror(self) -> Self {
        match self {
            ConflictKind::AAttacksB => ConflictKind::BAttacksA,
            ConflictKind::BAttacksA => ConflictKind::AAttacksB,
            other => other,
        }
    }
}

/// Scope predicate a rule requires before it fires.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Overlap {
    /// The operations name a common column (for `join_col`, any source).
    SameColumn,
    SameRow,
    /// Same row and a common column.
    SameCell,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConflictRule {
    pub a: OpKind,
    pub b: OpKind,
    pub when: Overlap,
    pub effect: ConflictKind,
}

impl ConflictRule {
    const fn new(a: OpKind, b: OpKind, when: Overlap, effect: ConflictKind) -> Self {
        ConflictRule { a, b, when, effect }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConflictMatrix {
    pub rules: Vec<ConflictRule>,
}

impl Default for ConflictMatrix {
    /// Deletions beat edits, transforms beat splits and joins, renames beat
    /// everything that still uses the old column name.
    fn default() -> Self {
        use ConflictKind::*;
        use OpKind::*;
        use Overlap::*;
        let r = ConflictRule::new;
        ConflictMatrix {
            rules: vec![
                r(CellEdit, CellEdit, SameCell, Mutual),
                r(DelRow, CellEdit, SameRow, AAttacksB),
                r(DelCol, CellEdit, SameColumn, AAttacksB),
                r(SplitCol, CellEdit, SameColumn, BAttacksA),
                r(SplitCol, DelCol, SameColumn, BAttacksA),
                r(Transform, CellEdit, SameColumn, Mutual),
                r(Transform, DelCol, SameColumn, BAttacksA),
                r(Transform, SplitCol, SameColumn, AAttacksB),
                r(Transform, Transform, SameColumn, Mutual),
                r(JoinCol, CellEdit, SameColumn, BAttacksA),
                r(JoinCol, DelCol, SameColumn, BAttacksA),
                r(JoinCol, Transform, SameColumn, BAttacksA),
                r(Rename, CellEdit, SameColumn, AAttacksB),
                r(Rename, DelCol, SameColumn, Mutual),
                r(Rename, SplitCol, SameColumn, AAttacksB),
                r(Rename, Transform, SameColumn, AAttacksB),
                r(Rename, JoinCol, SameColumn, AAttacksB),
                r(Rename, Rename, SameColumn, Mutual),
            ],
        }
    }
}

impl ConflictMatrix {
    pub fn from_json(text: &str) -> Result<Self, ConflictError> {
        let matrix: ConflictMatrix =
            serde_json::from_str(text).map_err(|e| ConflictError::MatrixJson(e.to_string()))?;
        matrix.validate()?;
        Ok(matrix)
    }

    /// A kind pair may be covered by at most one rule (in either
    /// orientation), and a rule on a kind with itself must be symmetric.
    pub fn validate(&self) -> Result<(), ConflictError> {
        let mut seen = HashSet::new();
        for rule in &self.rules {
            let key = if rule.a <= rule.b {
                (rule.a, rule.b)
            } else {
                (rule.b, rule.a)
            };
            if !seen.insert(key) {
                return Err(ConflictError::AmbiguousMatrix(rule.a, rule.b));
            }
            if rule.a == rule.b && rule.effect.mirror() != rule.effect {
                return Err(ConflictError::AmbiguousMatrix(rule.a, rule.b));
            }
        }
        Ok(())
    }

    fn lookup(&self, a: OpKind, b: OpKind) -> Option<(Overlap, ConflictKind)> {
        self.rules.iter().find_map(|r| {
            if (r.a, r.b) == (a, b) {
                Some((r.when, r.effect))
            } else if (r.b, r.a) == (a, b) {
                Some((r.when, r.effect.mirror()))
            } else {
                None
            }
        })
    }

    /// Conflict between two operations from different curators.
    pub fn pairwise(&self, a: &Operation, b: &Operation) -> ConflictKind {
        if a == b {
            return ConflictKind::None;
        }
        match self.lookup(a.kind(), b.kind()) {
            Some((overlap, effect)) if overlaps(overlap, a, b) => effect,
            _ => ConflictKind::None,
        }
    }
}

/// Conflict between `a` and `b` under the default matrix.
pub fn pairwise_conflict(a: &Operation, b: &Operation) -> ConflictKind {
    ConflictMatrix::default().pairwise(a, b)
}

fn subject_columns(op: &Operation) -> Vec<&str> {
    match op {
        Operation::CellEdit { column, .. }
        | Operation::DelCol { column }
        | Operation::SplitCol { column, .. }
        | Operation::Transform { column, .. }
        | Operation::Rename { column, .. } => vec![column.as_str()],
        Operation::JoinCol { columns, .. } => columns.iter().map(String::as_str).collect(),
        Operation::DelRow { .. } => Vec::new(),
    }
}

fn subject_row(op: &Operation) -> Option<RowId> {
    match op {
        Operation::CellEdit { row, .. } | Operation::DelRow { row } => Some(*row),
        _ => None,
    }
}

fn overlaps(overlap: Overlap, a: &Operation, b: &Operation) -> bool {
    let same_column = || {
        let bs = subject_columns(b);
        subject_columns(a).iter().any(|c| bs.contains(c))
    };
    let same_row = || matches!((subject_row(a), subject_row(b)), (Some(x), Some(y)) if x == y);
    match overlap {
        Overlap::SameColumn => same_column(),
        Overlap::SameRow => same_row(),
        Overlap::SameCell => same_row() && same_column(),
    }
}

/// Session-level view of one recipe step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepInfo {
    pub label: ArgumentId,
    pub curator: String,
    /// Index of the owning recipe in the session.
    pub recipe: usize,
    pub position: usize,
    pub operation: Operation,
}

/// Attack graph of a reconciliation session plus the execution-order edges
/// of each recipe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConflictGraph {
    pub graph: AttackGraph,
    pub order_edges: BTreeSet<(ArgumentId, ArgumentId)>,
    pub steps: Vec<StepInfo>,
}

impl ConflictGraph {
    pub fn step(&self, label: &str) -> Option<&StepInfo> {
        self.steps.iter().find(|s| s.label.as_str() == label)
    }

    /// Sidecar JSON accompanying the APX attack list: order edges and step
    /// metadata.
    pub fn sidecar_json(&self) -> serde_json::Value {
        json!({
            "arguments": self.graph.arguments(),
            "attacks": self.graph.attacks(),
            "order_edges": self.order_edges,
            "steps": self.steps.iter().map(|s| json!({
                "label": s.label,
                "curator": s.curator,
                "position": s.position,
                "op": s.operation.kind(),
                "args": s.operation.args(),
                "description": s.operation.to_string(),
            })).collect::<Vec<_>>(),
        })
    }
}

pub fn detect_conflicts(recipes: &[Recipe]) -> Result<ConflictGraph, ConflictError> {
    detect_conflicts_with(&ConflictMatrix::default(), recipes)
}

/// Builds the session attack graph: one argument per step, attacks from the
/// matrix over every cross-recipe step pair, and dashed order edges between
/// consecutive steps of each recipe.
pub fn detect_conflicts_with(matrix: &ConflictMatrix, recipes: &[Recipe]) -> Result<ConflictGraph, ConflictError> {
    if recipes.len() < 2 {
        return Err(ConflictError::TooFewRecipes(recipes.len()));
    }
    let mut graph = AttackGraph::new();
    let mut steps = Vec::new();
    let mut order_edges = BTreeSet::new();
    for (ri, recipe) in recipes.iter().enumerate() {
        for step in &recipe.steps {
            if !graph.add_argument(step.label.clone()) {
                return Err(ConflictError::DuplicateLabel(step.label.clone()));
            }
            steps.push(StepInfo {
                label: step.label.clone(),
                curator: recipe.curator.clone(),
                recipe: ri,
                position: step.position,
                operation: step.operation.clone(),
            });
        }
        for w in recipe.steps.windows(2) {
            order_edges.insert((w[0].label.clone(), w[1].label.clone()));
        }
    }

    for (i, x) in steps.iter().enumerate() {
        for y in &steps[i + 1..] {
            if x.recipe == y.recipe {
                continue;
            }
            let (fwd, back) = match matrix.pairwise(&x.operation, &y.operation) {
                ConflictKind::Mutual => (true, true),
                ConflictKind::AAttacksB => (true, false),
                ConflictKind::BAttacksA => (false, true),
                ConflictKind::None => (false, false),
            };
            if fwd {
                graph.add_attack(x.label.clone(), y.label.clone()).expect("declared");
            }
            if back {
                graph.add_attack(y.label.clone(), x.label.clone()).expect("declared");
            }
        }
    }
    Ok(ConflictGraph {
        graph,
        order_edges,
        steps,
    })
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConflictError {
    #[error("conflict detection needs at least 2 recipes, got {0}")]
    TooFewRecipes(usize),
    #[error("step label `{0}` is used more than once in the session")]
    DuplicateLabel(ArgumentId),
    #[error("invalid conflict matrix JSON: {0}")]
    MatrixJson(String),
    #[error("conflict matrix has more than one rule for {0} / {1}, or an asymmetric rule on one kind")]
    AmbiguousMatrix(OpKind, OpKind),
}

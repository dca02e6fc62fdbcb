//! Abstract argumentation frameworks: attack graphs, grounded and stable
//! labelings, labeling verification, and the APX / DOT / JSON exchange
//! formats.

mod apx;
mod dot;
mod graph;
mod grounded;
mod labeling;
mod stable;
mod verify;

use thiserror::Error;

pub use apx::{parse_apx, to_apx};
pub use dot::{label_color, to_dot, IN_COLOR, OUT_COLOR, UNDEC_COLOR};
pub use graph::{ArgumentId, Attack, AttackGraph};
pub use grounded::grounded_labeling;
pub use labeling::{Label, Labeling};
pub use stable::{stable_labelings, stable_labelings_capped, StableEnumeration};
pub use verify::{verify_labeling, Verdict, Verification, Violation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AfError {
    #[error("argument id must be non-empty")]
    EmptyArgumentId,
    #[error("attack references undeclared argument `{0}`")]
    UndeclaredArgument(ArgumentId),
    #[error("line {line}: {message}")]
    ApxSyntax { line: usize, message: String },
    #[error("line {line}: attack references undeclared argument `{argument}`")]
    ApxUndeclared { line: usize, argument: ArgumentId },
    #[error("labeling is not total; unlabeled: {}", join(.0))]
    NotTotal(Vec<ArgumentId>),
    #[error("labeling mentions unknown argument `{0}`")]
    UnknownArgument(ArgumentId),
    #[error("invalid labeling JSON: {0}")]
    LabelingJson(String),
}

pub(crate) fn join(ids: &[ArgumentId]) -> String {
    ids.iter().map(ArgumentId::as_str).collect::<Vec<_>>().join(", ")
}

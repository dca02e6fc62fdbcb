//! Reconciliation of independently authored data-cleaning recipes.
//!
//! Steps from different recipes that conflict become mutually attacking
//! arguments of an argumentation framework ([`conflict`]). Solving it
//! ([`af`]) accepts, rejects, or leaves undecided each step; a chosen stable
//! labeling is turned into one ordered recipe ([`merge`]) that runs over the
//! original table ([`dataset`]).

pub mod af;
pub mod conflict;
pub mod dataset;
pub mod merge;
pub mod recipe;

pub use af::{
    grounded_labeling, parse_apx, stable_labelings, stable_labelings_capped, to_apx, to_dot, verify_labeling, AfError,
    ArgumentId, AttackGraph, Label, Labeling, StableEnumeration, Verdict, Verification, Violation,
};
pub use conflict::{
    detect_conflicts, detect_conflicts_with, pairwise_conflict, ConflictError, ConflictGraph, ConflictKind,
    ConflictMatrix, StepInfo,
};
pub use dataset::{apply_op, apply_recipe, load_csv, save_csv, ApplyError, Cell, Dataset, DatasetError, Executable};
pub use merge::{
    dependency_edges, merge, merge_with, validate_order, DependencyEdge, DependencyReason, DependencyRules, MergeError,
    MergedRecipe, OrderCheck,
};
pub use recipe::{
    footprint, parse_recipe, Footprint, GrelFunction, OpKind, Operation, Recipe, RecipeError, RecipeStep, RowId,
};

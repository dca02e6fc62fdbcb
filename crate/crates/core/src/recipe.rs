//! Data-cleaning operations, recipes, their JSON form, and the read/write
//! footprint of each operation.
//!
//! Recipe JSON:
//!
//! ```json
//! {"curator": "Alice",
//!  "steps": [{"label": "E", "op": "rename", "args": ["Book Title", "Book-Title"]},
//!            {"label": "K", "op": "join_col", "args": [["Author 1", "Date"], ", ", "Citation"]}]}
//! ```
//!
//! `args` are positional, in the order of the operation signature.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::af::ArgumentId;

/// Stable row identifier assigned at load time (1-based file order). Never
/// renumbered when rows are deleted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RowId(pub u64);

impl fmt::Display for RowId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The supported subset of GREL.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GrelFunction {
    Trim,
    ToNumber,
}

impl GrelFunction {
    pub fn parse(expr: &str) -> Result<Self, RecipeError> {
        match expr.trim() {
            "value.trim()" => Ok(GrelFunction::Trim),
            "value.toNumber()" => Ok(GrelFunction::ToNumber),
            other => Err(RecipeError::UnsupportedExpression(other.to_string())),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            GrelFunction::Trim => "value.trim()",
            GrelFunction::ToNumber => "value.toNumber()",
        }
    }
}

impl fmt::Display for GrelFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OpKind {
    CellEdit,
    DelRow,
    DelCol,
    SplitCol,
    Transform,
    JoinCol,
    Rename,
}

impl OpKind {
    pub const ALL: [OpKind; 7] = [
        OpKind::CellEdit,
        OpKind::DelRow,
        OpKind::DelCol,
        OpKind::SplitCol,
        OpKind::Transform,
        OpKind::JoinCol,
        OpKind::Rename,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            OpKind::CellEdit => "cell_edit",
            OpKind::DelRow => "del_row",
            OpKind::DelCol => "del_col",
            OpKind::SplitCol => "split_col",
            OpKind::Transform => "transform",
            OpKind::JoinCol => "join_col",
            OpKind::Rename => "rename",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        OpKind::ALL.into_iter().find(|k| k.as_str() == s)
    }

    fn arity(self) -> usize {
        match self {
            OpKind::CellEdit | OpKind::JoinCol => 3,
            OpKind::DelRow | OpKind::DelCol => 1,
            OpKind::SplitCol | OpKind::Transform | OpKind::Rename => 2,
        }
    }
}

impl fmt::Display for OpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Operation {
    CellEdit {
        row: RowId,
        column: String,
        value: String,
    },
    DelRow {
        row: RowId,
    },
    DelCol {
        column: String,
    },
    SplitCol {
        column: String,
        separator: String,
    },
    Transform {
        column: String,
        function: GrelFunction,
    },
    JoinCol {
        columns: Vec<String>,
        separator: String,
        new_column: String,
    },
    Rename {
        column: String,
        new_column: String,
    },
}

impl Operation {
    pub fn kind(&self) -> OpKind {
        match self {
            Operation::CellEdit { .. } => OpKind::CellEdit,
            Operation::DelRow { .. } => OpKind::DelRow,
            Operation::DelCol { .. } => OpKind::DelCol,
            Operation::SplitCol { .. } => OpKind::SplitCol,
            Operation::Transform { .. } => OpKind::Transform,
            Operation::JoinCol { .. } => OpKind::JoinCol,
            Operation::Rename { .. } => OpKind::Rename,
        }
    }

    /// Checks the per-kind parameter invariants.
    pub fn validate(&self) -> Result<(), RecipeError> {
        let bad = |msg: String| Err(RecipeError::InvalidOperation(msg));
        match self {
            Operation::CellEdit { row, .. } | Operation::DelRow { row } if row.0 == 0 => {
                bad("row ids start at 1".into())
            }
            Operation::SplitCol { separator, .. } if separator.is_empty() => {
                bad("split_col separator must be non-empty".into())
            }
            Operation::JoinCol { columns, .. } if columns.len() < 2 => bad(format!(
                "join_col needs at least 2 source columns, got {}",
                columns.len()
            )),
            Operation::JoinCol {
                columns, new_column, ..
            } if columns.contains(new_column) => bad(format!("join_col target `{new_column}` is one of its sources")),
            Operation::Rename { column, new_column } if column == new_column => {
                bad(format!("rename of `{column}` to itself"))
            }
            _ => Ok(()),
        }
    }

    /// Positional arguments as they appear in recipe JSON.
    pub fn args(&self) -> Vec<Value> {
        match self {
            Operation::CellEdit { row, column, value } => vec![json!(row.0), json!(column), json!(value)],
            Operation::DelRow { row } => vec![json!(row.0)],
            Operation::DelCol { column } => vec![json!(column)],
            Operation::SplitCol { column, separator } => vec![json!(column), json!(separator)],
            Operation::Transform { column, function } => vec![json!(column), json!(function.as_str())],
            Operation::JoinCol {
                columns,
                separator,
                new_column,
            } => {
                vec![json!(columns), json!(separator), json!(new_column)]
            }
            Operation::Rename { column, new_column } => vec![json!(column), json!(new_column)],
        }
    }

    pub fn from_args(kind: OpKind, args: &[Value]) -> Result<Self, RecipeError> {
        if args.len() != kind.arity() {
            return Err(RecipeError::Arity {
                kind,
                expected: kind.arity(),
                found: args.len(),
            });
        }
        let op = match kind {
            OpKind::CellEdit => Operation::CellEdit {
                row: row_arg(kind, &args[0])?,
                column: str_arg(kind, &args[1])?,
                value: str_arg(kind, &args[2])?,
            },
            OpKind::DelRow => Operation::DelRow {
                row: row_arg(kind, &args[0])?,
            },
            OpKind::DelCol => Operation::DelCol {
                column: str_arg(kind, &args[0])?,
            },
            OpKind::SplitCol => Operation::SplitCol {
                column: str_arg(kind, &args[0])?,
                separator: str_arg(kind, &args[1])?,
            },
            OpKind::Transform => Operation::Transform {
                column: str_arg(kind, &args[0])?,
                function: GrelFunction::parse(&str_arg(kind, &args[1])?)?,
            },
            OpKind::JoinCol => {
                let columns = args[0]
                    .as_array()
                    .ok_or_else(|| RecipeError::BadArgument {
                        kind,
                        message: "source columns must be an array".into(),
                    })?
                    .iter()
                    .map(|v| str_arg(kind, v))
                    .collect::<Result<Vec<_>, _>>()?;
                Operation::JoinCol {
                    columns,
                    separator: str_arg(kind, &args[1])?,
                    new_column: str_arg(kind, &args[2])?,
                }
            }
            OpKind::Rename => Operation::Rename {
                column: str_arg(kind, &args[0])?,
                new_column: str_arg(kind, &args[1])?,
            },
        };
        op.validate()?;
        Ok(op)
    }
}

fn str_arg(kind: OpKind, v: &Value) -> Result<String, RecipeError> {
    v.as_str().map(str::to_owned).ok_or_else(|| RecipeError::BadArgument {
        kind,
        message: format!("expected a string, got {v}"),
    })
}

fn row_arg(kind: OpKind, v: &Value) -> Result<RowId, RecipeError> {
    let parsed = match v {
        Value::Number(n) => n.as_u64(),
        Value::String(s) => s.trim().parse::<u64>().ok(),
        _ => None,
    };
    match parsed {
        Some(r) if r > 0 => Ok(RowId(r)),
        _ => Err(RecipeError::BadArgument {
            kind,
            message: format!("expected a positive row id, got {v}"),
        }),
    }
}

impl fmt::Display for Operation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operation::CellEdit { row, column, value } => write!(f, "cell_edit({row}, {column:?}, {value:?})"),
            Operation::DelRow { row } => write!(f, "del_row({row})"),
            Operation::DelCol { column } => write!(f, "del_col({column:?})"),
            Operation::SplitCol { column, separator } => write!(f, "split_col({column:?}, {separator:?})"),
            Operation::Transform { column, function } => {
                write!(f, "transform({column:?}, {:?})", function.as_str())
            }
            Operation::JoinCol {
                columns,
                separator,
                new_column,
            } => {
                write!(f, "join_col({columns:?}, {separator:?}, {new_column:?})")
            }
            Operation::Rename { column, new_column } => write!(f, "rename({column:?}, {new_column:?})"),
        }
    }
}

/// Columns, rows and cells an operation touches.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Footprint {
    pub columns_read: BTreeSet<String>,
    pub columns_written: BTreeSet<String>,
    pub columns_deleted: BTreeSet<String>,
    pub rows_deleted: BTreeSet<RowId>,
    pub cells_edited: BTreeSet<(RowId, String)>,
}

impl Footprint {
    /// Every column name mentioned by the footprint.
    pub fn columns(&self) -> BTreeSet<&str> {
        self.columns_read
            .iter()
            .chain(&self.columns_written)
            .chain(&self.columns_deleted)
            .map(String::as_str)
            .collect()
    }

    pub fn rows(&self) -> BTreeSet<RowId> {
        self.rows_deleted
            .iter()
            .copied()
            .chain(self.cells_edited.iter().map(|(r, _)| *r))
            .collect()
    }
}

/// Name of the `index`th (1-based) column produced by splitting `column`.
pub fn split_part_name(column: &str, index: usize) -> String {
    format!("{column} {index}")
}

pub fn footprint(op: &Operation) -> Footprint {
    let set = |items: &[&str]| items.iter().map(|s| s.to_string()).collect::<BTreeSet<_>>();
    let mut fp = Footprint::default();
    match op {
        Operation::CellEdit { row, column, .. } => {
            fp.cells_edited.insert((*row, column.clone()));
            fp.columns_written = set(&[column]);
        }
        Operation::DelRow { row } => {
            fp.rows_deleted.insert(*row);
        }
        Operation::DelCol { column } => {
            fp.columns_read = set(&[column]);
            fp.columns_deleted = set(&[column]);
        }
        Operation::SplitCol { column, .. } => {
            fp.columns_read = set(&[column]);
            fp.columns_written = [split_part_name(column, 1), split_part_name(column, 2)].into();
        }
        Operation::Transform { column, .. } => {
            fp.columns_read = set(&[column]);
            fp.columns_written = set(&[column]);
        }
        Operation::JoinCol {
            columns, new_column, ..
        } => {
            fp.columns_read = columns.iter().cloned().collect();
            fp.columns_written = set(&[new_column]);
        }
        Operation::Rename { column, new_column } => {
            fp.columns_read = set(&[column]);
            fp.columns_written = set(&[new_column]);
            fp.columns_deleted = set(&[column]);
        }
    }
    fp
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecipeStep {
    pub label: ArgumentId,
    pub operation: Operation,
    /// 1-based position within the owning recipe.
    pub position: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Recipe {
    pub curator: String,
    pub steps: Vec<RecipeStep>,
}

impl Recipe {
    /// Builds a recipe from labeled operations, numbering positions from 1.
    pub fn new(
        curator: impl Into<String>,
        steps: impl IntoIterator<Item = (ArgumentId, Operation)>,
    ) -> Result<Self, RecipeError> {
        let curator = curator.into();
        if curator.trim().is_empty() {
            return Err(RecipeError::EmptyCurator);
        }
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for (i, (label, operation)) in steps.into_iter().enumerate() {
            operation.validate()?;
            if !seen.insert(label.clone()) {
                return Err(RecipeError::DuplicateLabel(label));
            }
            out.push(RecipeStep {
                label,
                operation,
                position: i + 1,
            });
        }
        Ok(Recipe { curator, steps: out })
    }

    pub fn to_json(&self) -> String {
        let steps: Vec<StepJson> = self
            .steps
            .iter()
            .map(|s| StepJson::new(&s.label, &s.operation))
            .collect();
        let file = RecipeJson {
            curator: self.curator.clone(),
            steps,
            dependencies: None,
        };
        serde_json::to_string_pretty(&file).expect("recipe serializes") + "\n"
    }
}

#[derive(Serialize, Deserialize)]
pub(crate) struct RecipeJson {
    pub curator: String,
    pub steps: Vec<StepJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dependencies: Option<Value>,
}

#[derive(Serialize, Deserialize)]
pub(crate) struct StepJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub op: String,
    pub args: Vec<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curator: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_label: Option<String>,
}

impl StepJson {
    pub fn new(label: &ArgumentId, op: &Operation) -> Self {
        StepJson {
            label: Some(label.to_string()),
            op: op.kind().as_str().to_string(),
            args: op.args(),
            curator: None,
            source_label: None,
        }
    }

    pub fn operation(&self) -> Result<Operation, RecipeError> {
        let kind = OpKind::parse(&self.op).ok_or_else(|| RecipeError::UnknownKind(self.op.clone()))?;
        Operation::from_args(kind, &self.args)
    }
}

/// Parses recipe JSON. Steps keep file order; steps without a label get the
/// next unused label from the sequence A, B, ..., Z, AA, AB, ...
pub fn parse_recipe(text: &str) -> Result<Recipe, RecipeError> {
    let file: RecipeJson = serde_json::from_str(text).map_err(|e| RecipeError::Json(e.to_string()))?;
    let explicit: HashSet<&str> = file.steps.iter().filter_map(|s| s.label.as_deref()).collect();
    let mut auto = (0..).map(spreadsheet_label).filter(|l| !explicit.contains(l.as_str()));

    let mut steps = Vec::with_capacity(file.steps.len());
    for (i, step) in file.steps.iter().enumerate() {
        let op = step.operation().map_err(|e| RecipeError::AtStep {
            step: i + 1,
            source: Box::new(e),
        })?;
        let label = match &step.label {
            Some(l) => ArgumentId::new(l.clone()).map_err(|_| RecipeError::AtStep {
                step: i + 1,
                source: Box::new(RecipeError::EmptyLabel),
            })?,
            None => ArgumentId::new(auto.next().expect("infinite")).expect("generated labels are non-empty"),
        };
        steps.push((label, op));
    }
    Recipe::new(file.curator, steps)
}

fn spreadsheet_label(mut n: usize) -> String {
    let mut out = Vec::new();
    loop {
        out.push(b'A' + (n % 26) as u8);
        if n < 26 {
            break;
        }
        n = n / 26 - 1;
    }
    out.reverse();
    String::from_utf8(out).expect("ascii")
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RecipeError {
    #[error("invalid recipe JSON: {0}")]
    Json(String),
    #[error("unknown operation kind `{0}`")]
    UnknownKind(String),
    #[error("{kind} takes {expected} arguments, got {found}")]
    Arity {
        kind: OpKind,
        expected: usize,
        found: usize,
    },
    #[error("{kind}: {message}")]
    BadArgument { kind: OpKind, message: String },
    #[error("unsupported transform expression `{0}` (only value.trim() and value.toNumber())")]
    UnsupportedExpression(String),
    #[error("invalid operation: {0}")]
    InvalidOperation(String),
    #[error("duplicate step label `{0}`")]
    DuplicateLabel(ArgumentId),
    #[error("step label must be non-empty")]
    EmptyLabel,
    #[error("curator name must be non-empty")]
    EmptyCurator,
    #[error("step {step}: {source}")]
    AtStep { step: usize, source: Box<RecipeError> },
}

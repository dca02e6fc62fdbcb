//! Tabular data and the execution of cleaning operations on it.

use std::collections::HashSet;
use std::fmt;

use serde::ser::{Serialize, SerializeStruct, Serializer};
use thiserror::Error;

use crate::af::ArgumentId;
use crate::merge::MergedRecipe;
use crate::recipe::{split_part_name, GrelFunction, Operation, Recipe, RowId};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Number {
    Integer(i64),
    Decimal(f64),
}

impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Number::Integer(i) => write!(f, "{i}"),
            Number::Decimal(d) => write!(f, "{d}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Text(String),
    Number(Number),
    Empty,
}

impl Cell {
    /// A string cell; the empty string becomes [`Cell::Empty`].
    pub fn text(s: impl Into<String>) -> Cell {
        let s = s.into();
        if s.is_empty() {
            Cell::Empty
        } else {
            Cell::Text(s)
        }
    }

    /// Text as written to CSV or used by `join_col`.
    pub fn render(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Number(n) => n.to_string(),
            Cell::Empty => String::new(),
        }
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self, Cell::Number(_))
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Cell::Text(t) => s.serialize_str(t),
            Cell::Number(Number::Integer(i)) => s.serialize_i64(*i),
            Cell::Number(Number::Decimal(d)) => s.serialize_f64(*d),
            Cell::Empty => s.serialize_none(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub id: RowId,
    /// One cell per dataset column, in column order.
    pub cells: Vec<Cell>,
}

impl Serialize for Row {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Row", 2)?;
        st.serialize_field("id", &self.id)?;
        st.serialize_field("cells", &self.cells)?;
        st.end()
    }
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Dataset {
    columns: Vec<String>,
    rows: Vec<Row>,
}

impl Serialize for Dataset {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Dataset", 2)?;
        st.serialize_field("columns", &self.columns)?;
        st.serialize_field("rows", &self.rows)?;
        st.end()
    }
}

impl Dataset {
    /// Builds a dataset, numbering rows 1..n.
    pub fn new(columns: Vec<String>, rows: Vec<Vec<Cell>>) -> Result<Self, DatasetError> {
        check_unique(&columns)?;
        let rows = rows
            .into_iter()
            .enumerate()
            .map(|(i, cells)| {
                if cells.len() != columns.len() {
                    return Err(DatasetError::Ragged {
                        record: i + 2,
                        expected: columns.len(),
                        found: cells.len(),
                    });
                }
                Ok(Row {
                    id: RowId(i as u64 + 1),
                    cells,
                })
            })
            .collect::<Result<_, _>>()?;
        Ok(Dataset { columns, rows })
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn column_index(&self, name: &str) -> Result<usize, DatasetError> {
        self.columns
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| DatasetError::MissingColumn(name.to_string()))
    }

    fn row_index(&self, id: RowId) -> Result<usize, DatasetError> {
        self.rows
            .iter()
            .position(|r| r.id == id)
            .ok_or(DatasetError::MissingRow(id))
    }

    pub fn cell(&self, row: RowId, column: &str) -> Option<&Cell> {
        let c = self.column_index(column).ok()?;
        let r = self.row_index(row).ok()?;
        Some(&self.rows[r].cells[c])
    }

    /// The rendered text of every row, column by column.
    pub fn rendered(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| r.cells.iter().map(Cell::render).collect())
            .collect()
    }

    fn ensure_absent(&self, name: &str) -> Result<(), DatasetError> {
        if self.columns.iter().any(|c| c == name) {
            Err(DatasetError::ColumnExists(name.to_string()))
        } else {
            Ok(())
        }
    }
}

fn check_unique(columns: &[String]) -> Result<(), DatasetError> {
    let mut seen = HashSet::new();
    for c in columns {
        if !seen.insert(c) {
            return Err(DatasetError::DuplicateHeader(c.clone()));
        }
    }
    Ok(())
}

/// Reads RFC 4180 CSV with a mandatory header row. Every cell loads as a
/// string (empty fields as empty cells); whitespace is kept as-is.
pub fn load_csv(text: &str) -> Result<Dataset, DatasetError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| DatasetError::Csv(e.to_string()))?.clone();
    if header.is_empty() {
        return Err(DatasetError::MissingHeader);
    }
    let columns: Vec<String> = header.iter().map(str::to_owned).collect();
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| DatasetError::Csv(e.to_string()))?;
        if record.len() != columns.len() {
            return Err(DatasetError::Ragged {
                record: i + 2,
                expected: columns.len(),
                found: record.len(),
            });
        }
        rows.push(record.iter().map(Cell::text).collect());
    }
    Dataset::new(columns, rows)
}

/// Writes CSV with `\n` line endings, quoting only where required.
pub fn save_csv(dataset: &Dataset) -> String {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .quote_style(csv::QuoteStyle::Necessary)
        .from_writer(Vec::new());
    writer.write_record(&dataset.columns).expect("in-memory write");
    for row in dataset.rendered() {
        writer.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 in, utf-8 out")
}

/// Parses the trimmed text as an integer or a plain decimal.
fn to_number(s: &str) -> Option<Number> {
    let t = s.trim();
    let digits = t.strip_prefix(['+', '-']).unwrap_or(t);
    if digits.is_empty() {
        return None;
    }
    if digits.bytes().all(|b| b.is_ascii_digit()) {
        return Some(match t.parse::<i64>() {
            Ok(i) => Number::Integer(i),
            Err(_) => Number::Decimal(t.parse().ok()?),
        });
    }
    let (int, frac) = digits.split_once('.')?;
    let all_digits = |p: &str| p.bytes().all(|b| b.is_ascii_digit());
    if (int.is_empty() && frac.is_empty()) || !all_digits(int) || !all_digits(frac) {
        return None;
    }
    t.parse::<f64>().ok().map(Number::Decimal)
}

/// Applies one operation, returning the new dataset and any warnings.
pub fn apply_op(dataset: &Dataset, op: &Operation) -> Result<(Dataset, Vec<String>), DatasetError> {
    let mut d = dataset.clone();
    let mut warnings = Vec::new();
    match op {
        Operation::CellEdit { row, column, value } => {
            let c = d.column_index(column)?;
            let r = d.row_index(*row)?;
            d.rows[r].cells[c] = Cell::text(value.clone());
        }
        Operation::DelRow { row } => {
            let r = d.row_index(*row)?;
            d.rows.remove(r);
        }
        Operation::DelCol { column } => {
            let c = d.column_index(column)?;
            d.columns.remove(c);
            for row in &mut d.rows {
                row.cells.remove(c);
            }
        }
        Operation::SplitCol { column, separator } => {
            if separator.is_empty() {
                return Err(DatasetError::EmptySeparator);
            }
            let c = d.column_index(column)?;
            let parts: Vec<Vec<Cell>> = d
                .rows
                .iter()
                .map(|row| match &row.cells[c] {
                    Cell::Empty => Vec::new(),
                    cell => cell
                        .render()
                        .split(separator.as_str())
                        .map(|p| Cell::text(p.trim()))
                        .collect(),
                })
                .collect();
            let k = parts.iter().map(Vec::len).max().unwrap_or(0);
            let names: Vec<String> = (1..=k).map(|i| split_part_name(column, i)).collect();
            for n in &names {
                d.ensure_absent(n)?;
            }
            d.columns.extend(names);
            for (row, mut row_parts) in d.rows.iter_mut().zip(parts) {
                row_parts.resize(k, Cell::Empty);
                row.cells.extend(row_parts);
            }
        }
        Operation::Transform { column, function } => {
            let c = d.column_index(column)?;
            for row in &mut d.rows {
                let Cell::Text(s) = &row.cells[c] else { continue };
                let next = match function {
                    GrelFunction::Trim => Cell::text(s.trim()),
                    GrelFunction::ToNumber => match to_number(s) {
                        Some(n) => Cell::Number(n),
                        None => {
                            warnings.push(format!(
                                "row {}: cannot convert {s:?} in `{column}` to a number",
                                row.id
                            ));
                            continue;
                        }
                    },
                };
                row.cells[c] = next;
            }
        }
        Operation::JoinCol {
            columns,
            separator,
            new_column,
        } => {
            let idx = columns
                .iter()
                .map(|c| d.column_index(c))
                .collect::<Result<Vec<_>, _>>()?;
            d.ensure_absent(new_column)?;
            d.columns.push(new_column.clone());
            for row in &mut d.rows {
                let joined = idx
                    .iter()
                    .map(|&i| row.cells[i].render())
                    .collect::<Vec<_>>()
                    .join(separator);
                row.cells.push(Cell::text(joined));
            }
        }
        Operation::Rename { column, new_column } => {
            let c = d.column_index(column)?;
            if column != new_column {
                d.ensure_absent(new_column)?;
            }
            d.columns[c] = new_column.clone();
        }
    }
    Ok((d, warnings))
}

/// Anything that can be executed as an ordered list of labeled operations.
pub trait Executable {
    fn labeled_ops(&self) -> Vec<(&ArgumentId, &Operation)>;
}

impl Executable for Recipe {
    fn labeled_ops(&self) -> Vec<(&ArgumentId, &Operation)> {
        self.steps.iter().map(|s| (&s.label, &s.operation)).collect()
    }
}

impl Executable for MergedRecipe {
    fn labeled_ops(&self) -> Vec<(&ArgumentId, &Operation)> {
        self.steps.iter().map(|s| (&s.label, &s.operation)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct StepLog {
    pub label: ArgumentId,
    pub operation: String,
    pub warnings: Vec<String>,
}

/// Failure of one step of [`apply_recipe`], with the state reached so far.
#[derive(Debug, Error, Clone, PartialEq)]
#[error("step {index} ({label}): {source}")]
pub struct ApplyError {
    /// 1-based index in the executed sequence.
    pub index: usize,
    pub label: ArgumentId,
    pub source: DatasetError,
    /// Dataset before the failing step.
    pub dataset: Dataset,
    pub log: Vec<StepLog>,
}

/// Runs the steps left to right.
pub fn apply_recipe(dataset: &Dataset, recipe: &impl Executable) -> Result<(Dataset, Vec<StepLog>), Box<ApplyError>> {
    let mut current = dataset.clone();
    let mut log = Vec::new();
    for (i, (label, op)) in recipe.labeled_ops().into_iter().enumerate() {
        match apply_op(&current, op) {
            Ok((next, warnings)) => {
                current = next;
                log.push(StepLog {
                    label: label.clone(),
                    operation: op.to_string(),
                    warnings,
                });
            }
            Err(source) => {
                return Err(Box::new(ApplyError {
                    index: i + 1,
                    label: label.clone(),
                    source,
                    dataset: current,
                    log,
                }));
            }
        }
    }
    Ok((current, log))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DatasetError {
    #[error("no such column `{0}`")]
    MissingColumn(String),
    #[error("no row with id {0}")]
    MissingRow(RowId),
    #[error("split separator must be non-empty")]
    EmptySeparator,
    #[error("column `{0}` already exists")]
    ColumnExists(String),
    #[error("duplicate header `{0}`")]
    DuplicateHeader(String),
    #[error("CSV has no header row")]
    MissingHeader,
    #[error("record {record}: expected {expected} fields, found {found}")]
    Ragged {
        record: usize,
        expected: usize,
        found: usize,
    },
    #[error("CSV: {0}")]
    Csv(String),
}

#[cfg(test)]
mod tests {
    use super::*;

    fn data(csv: &str) -> Dataset {
        load_csv(csv).unwrap()
    }

    fn apply(d: &Dataset, op: Operation) -> Dataset {
        apply_op(d, &op).unwrap().0
    }

    #[test]
    fn whitespace_preserved_on_load() {
        let d = data("Date\n\"  1985 \"\n");
        assert_eq!(d.cell(RowId(1), "Date"), Some(&Cell::Text("  1985 ".into())));
    }

    #[test]
    fn header_only() {
        let d = data("a,b\n");
        assert_eq!(d.columns(), ["a", "b"]);
        assert!(d.rows().is_empty());
    }

    #[test]
    fn ragged_and_duplicate_header() {
        assert!(matches!(
            load_csv("a,b\n1\n"),
            Err(DatasetError::Ragged { record: 2, .. })
        ));
        assert_eq!(load_csv("a,a\n1,2\n"), Err(DatasetError::DuplicateHeader("a".into())));
    }

    #[test]
    fn round_trip_untyped() {
        let text = "Name,Note\n\"Collins, H.M.\",  padded \nx,\n\"say \"\"hi\"\"\",y\n";
        assert_eq!(save_csv(&data(text)), text);
    }

    #[test]
    fn trim_and_to_number() {
        let d = data("Date\n\"  1985 \"\n\n");
        let trimmed = apply(
            &d,
            Operation::Transform {
                column: "Date".into(),
                function: GrelFunction::Trim,
            },
        );
        assert_eq!(trimmed.cell(RowId(1), "Date"), Some(&Cell::Text("1985".into())));

        let (num, warnings) = apply_op(
            &d,
            &Operation::Transform {
                column: "Date".into(),
                function: GrelFunction::ToNumber,
            },
        )
        .unwrap();
        assert_eq!(num.cell(RowId(1), "Date"), Some(&Cell::Number(Number::Integer(1985))));
        assert!(warnings.is_empty());
        assert_eq!(save_csv(&num), "Date\n1985\n");
    }

    #[test]
    fn to_number_failure_warns_and_keeps_text() {
        let d = data("v\nabc\n1.5\n-.5\n");
        let (out, warnings) = apply_op(
            &d,
            &Operation::Transform {
                column: "v".into(),
                function: GrelFunction::ToNumber,
            },
        )
        .unwrap();
        assert_eq!(warnings.len(), 1);
        assert_eq!(out.cell(RowId(1), "v"), Some(&Cell::Text("abc".into())));
        assert_eq!(out.cell(RowId(2), "v"), Some(&Cell::Number(Number::Decimal(1.5))));
        assert_eq!(out.cell(RowId(3), "v"), Some(&Cell::Number(Number::Decimal(-0.5))));
    }

    #[test]
    fn to_number_grammar() {
        assert_eq!(to_number(" 42 "), Some(Number::Integer(42)));
        assert_eq!(to_number("+7"), Some(Number::Integer(7)));
        assert_eq!(to_number("3."), Some(Number::Decimal(3.0)));
        assert_eq!(to_number("."), None);
        assert_eq!(to_number("1e5"), None);
        assert_eq!(to_number("-"), None);
        assert_eq!(to_number("1.2.3"), None);
    }

    #[test]
    fn split_appends_trimmed_parts() {
        let d = data("Author,Date\n\"Collins, H.M.\",1985\nSolo,1\n,2\n");
        let out = apply(
            &d,
            Operation::SplitCol {
                column: "Author".into(),
                separator: ",".into(),
            },
        );
        assert_eq!(out.columns(), ["Author", "Date", "Author 1", "Author 2"]);
        assert_eq!(out.rendered()[0], ["Collins, H.M.", "1985", "Collins", "H.M."]);
        assert_eq!(out.rendered()[1], ["Solo", "1", "Solo", ""]);
        assert_eq!(out.rendered()[2], ["", "2", "", ""]);
    }

    #[test]
    fn split_counts_every_separator() {
        let d = data("a\nx;y;z\n");
        let out = apply(
            &d,
            Operation::SplitCol {
                column: "a".into(),
                separator: ";".into(),
            },
        );
        assert_eq!(out.columns(), ["a", "a 1", "a 2", "a 3"]);
    }

    #[test]
    fn split_name_collision() {
        let d = data("a,a 1\nx;y,z\n");
        let err = apply_op(
            &d,
            &Operation::SplitCol {
                column: "a".into(),
                separator: ";".into(),
            },
        )
        .unwrap_err();
        assert_eq!(err, DatasetError::ColumnExists("a 1".into()));
    }

    #[test]
    fn join_appends_last() {
        let d = data("a,b,c\nx,y,z\n");
        let out = apply(
            &d,
            Operation::JoinCol {
                columns: vec!["c".into(), "a".into()],
                separator: ", ".into(),
                new_column: "j".into(),
            },
        );
        assert_eq!(out.columns(), ["a", "b", "c", "j"]);
        assert_eq!(out.rendered()[0][3], "z, x");
    }

    #[test]
    fn stable_row_ids_survive_deletion() {
        let d = data("a\nr1\nr2\nr3\n");
        let out = apply(&d, Operation::DelRow { row: RowId(2) });
        let out = apply(
            &out,
            Operation::CellEdit {
                row: RowId(3),
                column: "a".into(),
                value: "edited".into(),
            },
        );
        assert_eq!(out.rendered(), vec![vec!["r1"], vec!["edited"]]);
        let err = apply_op(
            &out,
            &Operation::CellEdit {
                row: RowId(2),
                column: "a".into(),
                value: "x".into(),
            },
        );
        assert_eq!(err.unwrap_err(), DatasetError::MissingRow(RowId(2)));
    }

    #[test]
    fn rename_and_delete_column() {
        let d = data("a,b\n1,2\n");
        let out = apply(
            &d,
            Operation::Rename {
                column: "a".into(),
                new_column: "z".into(),
            },
        );
        assert_eq!(out.columns(), ["z", "b"]);
        assert!(apply_op(
            &out,
            &Operation::Rename {
                column: "z".into(),
                new_column: "b".into()
            }
        )
        .is_err());
        let out = apply(&out, Operation::DelCol { column: "z".into() });
        assert_eq!(out.columns(), ["b"]);
        assert_eq!(out.rendered(), vec![vec!["2"]]);
        assert_eq!(
            apply_op(&out, &Operation::DelCol { column: "z".into() }).unwrap_err(),
            DatasetError::MissingColumn("z".into())
        );
    }

    #[test]
    fn apply_recipe_reports_failing_step() {
        let d = data("a\n1\n");
        let r = Recipe::new(
            "A",
            [
                (
                    "x".into(),
                    Operation::Rename {
                        column: "a".into(),
                        new_column: "b".into(),
                    },
                ),
                ("y".into(), Operation::DelCol { column: "a".into() }),
            ],
        )
        .unwrap();
        let err = apply_recipe(&d, &r).unwrap_err();
        assert_eq!(err.index, 2);
        assert_eq!(err.label.as_str(), "y");
        assert_eq!(err.dataset.columns(), ["b"]);
        assert_eq!(err.log.len(), 1);
    }

    #[test]
    fn json_shape() {
        let d = data("a,b\n1,\n").clone();
        let d = apply(
            &d,
            Operation::Transform {
                column: "a".into(),
                function: GrelFunction::ToNumber,
            },
        );
        assert_eq!(
            serde_json::to_string(&d).unwrap(),
            r#"{"columns":["a","b"],"rows":[{"id":1,"cells":[1,null]}]}"#
        );
    }
}

//! File formats: matrices (JSON or CSV), sequences, and corpus entries.
//!
//! Matrix JSON is `{"rows": m, "cols": n, "entries": [["3", "1/2"], ...]}`
//! with rational strings. Corpus entries `{"matrix": [[...]], "labels":
//! {"tp": k, "tn": k}}` are accepted wherever a matrix is expected.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::generators::{CorpusEntry, Labels};
use crate::matrix::Matrix;
use crate::polya::SeqWindow;
use crate::scalar::{parse_rational, Scalar};

fn parse_err(position: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse { position: position.into(), message: message.into() }
}

fn json_err(e: serde_json::Error) -> Error {
    parse_err(format!("line {}, column {}", e.line(), e.column()), e.to_string())
}

fn scalar_from_json<T: Scalar>(value: &Value, position: impl Fn() -> String) -> Result<T> {
    let text = match value {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        other => return Err(parse_err(position(), format!("expected a rational string, got {other}"))),
    };
    parse_rational(&text).map(|r| T::from_rational(&r)).map_err(|m| parse_err(position(), m))
}

fn rows_from_json<T: Scalar>(value: &Value, field: &str) -> Result<Vec<Vec<T>>> {
    let rows = value.as_array().ok_or_else(|| parse_err(field, "expected an array of rows"))?;
    rows.iter()
        .enumerate()
        .map(|(i, row)| {
            let row = row.as_array().ok_or_else(|| parse_err(format!("{field}[{i}]"), "expected an array"))?;
            row.iter().enumerate().map(|(j, v)| scalar_from_json(v, || format!("{field}[{i}][{j}]"))).collect()
        })
        .collect()
}

fn matrix_from_rows<T: Scalar>(rows: Vec<Vec<T>>, field: &str) -> Result<Matrix<T>> {
    Matrix::from_rows(rows).map_err(|e| parse_err(field, e.to_string()))
}

/// Parses matrix JSON (either the matrix or the corpus layout).
pub fn matrix_from_json<T: Scalar>(text: &str) -> Result<Matrix<T>> {
    let value: Value = serde_json::from_str(text).map_err(json_err)?;
    if value.get("matrix").is_some() {
        return Ok(corpus_entry_from_value(&value)?.matrix);
    }
    let entries = value.get("entries").ok_or_else(|| parse_err("$", "missing field 'entries'"))?;
    let matrix = matrix_from_rows(rows_from_json::<T>(entries, "entries")?, "entries")?;
    for (field, expected) in [("rows", matrix.rows()), ("cols", matrix.cols())] {
        if let Some(declared) = value.get(field) {
            let declared = declared.as_u64().ok_or_else(|| parse_err(field, "expected a non-negative integer"))?;
            if declared as usize != expected {
                return Err(parse_err(field, format!("declared {declared}, entries have {expected}")));
            }
        }
    }
    Ok(matrix)
}

/// Parses comma-separated rows; blank lines and `#` comments are ignored.
pub fn matrix_from_csv<T: Scalar>(text: &str) -> Result<Matrix<T>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| parse_err("csv", e.to_string()))?;
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        let row = record
            .iter()
            .enumerate()
            .map(|(j, field)| {
                parse_rational(field)
                    .map(|r| T::from_rational(&r))
                    .map_err(|m| parse_err(format!("line {line}, field {}", j + 1), m))
            })
            .collect::<Result<Vec<T>>>()?;
        rows.push(row);
    }
    matrix_from_rows(rows, "csv")
}

/// JSON when the text starts with `{`, CSV otherwise.
pub fn read_matrix<T: Scalar>(text: &str) -> Result<Matrix<T>> {
    if text.trim_start().starts_with('{') {
        matrix_from_json(text)
    } else {
        matrix_from_csv(text)
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixFile {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<String>>,
}

pub fn matrix_to_value<T: Scalar>(m: &Matrix<T>) -> Value {
    serde_json::to_value(MatrixFile { rows: m.rows(), cols: m.cols(), entries: m.render_rows() })
        .expect("plain data serializes")
}

pub fn matrix_to_json<T: Scalar>(m: &Matrix<T>) -> String {
    serde_json::to_string_pretty(&matrix_to_value(m)).expect("plain data serializes")
}

#[derive(Serialize, Deserialize)]
struct SequenceFile {
    offset: i64,
    values: Vec<Value>,
    #[serde(default)]
    finite_support: bool,
}

pub fn sequence_from_json<T: Scalar>(text: &str) -> Result<SeqWindow<T>> {
    let file: SequenceFile = serde_json::from_str(text).map_err(json_err)?;
    let values = file
        .values
        .iter()
        .enumerate()
        .map(|(i, v)| scalar_from_json(v, || format!("values[{i}]")))
        .collect::<Result<Vec<T>>>()?;
    SeqWindow::new(file.offset, values, file.finite_support).map_err(|e| parse_err("values", e.to_string()))
}

pub fn sequence_to_json<T: Scalar>(s: &SeqWindow<T>) -> String {
    let file = SequenceFile {
        offset: s.offset(),
        values: s.values().iter().map(|v| Value::String(v.render())).collect(),
        finite_support: s.finite_support(),
    };
    serde_json::to_string_pretty(&file).expect("plain data serializes")
}

fn corpus_entry_from_value<T: Scalar>(value: &Value) -> Result<CorpusEntry<T>> {
    let rows = rows_from_json::<T>(&value["matrix"], "matrix")?;
    let matrix = matrix_from_rows(rows, "matrix")?;
    let labels: Labels = match value.get("labels") {
        Some(l) => serde_json::from_value(l.clone()).map_err(|e| parse_err("labels", e.to_string()))?,
        None => crate::generators::classify(&matrix)?,
    };
    Ok(CorpusEntry { matrix, labels })
}

pub fn corpus_entry_from_json<T: Scalar>(text: &str) -> Result<CorpusEntry<T>> {
    let value: Value = serde_json::from_str(text).map_err(json_err)?;
    corpus_entry_from_value(&value)
}

pub fn corpus_entry_to_value<T: Scalar>(entry: &CorpusEntry<T>) -> Value {
    serde_json::json!({ "matrix": entry.matrix.render_rows(), "labels": entry.labels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat, Exact};

    #[test]
    fn json_matrix_with_fractions_and_decimals() {
        let text = r#"{"rows": 2, "cols": 2, "entries": [["1/2", "0.25"], [3, "-4"]]}"#;
        let m: Matrix<Exact> = matrix_from_json(text).unwrap();
        assert_eq!(m, Matrix::from_rows(vec![vec![rat(1, 2), rat(1, 4)], vec![int(3), int(-4)]]).unwrap());
    }

    #[test]
    fn json_errors_are_positioned() {
        let err = matrix_from_json::<Exact>(r#"{"rows": 1, "cols": 2, "entries": [["1", "x"]]}"#).unwrap_err();
        assert_eq!(err, Error::Parse { position: "entries[0][1]".into(), message: "invalid rational 'x'".into() });
        let err = matrix_from_json::<Exact>("{\n  \"entries\": [[1,]\n}").unwrap_err();
        let Error::Parse { position, .. } = err else { panic!() };
        assert!(position.starts_with("line 2"), "{position}");
        assert!(matrix_from_json::<Exact>(r#"{"rows": 3, "cols": 1, "entries": [["1"]]}"#).is_err());
        assert!(matrix_from_json::<Exact>(r#"{"entries": [["1"], ["1", "2"]]}"#).is_err());
    }

    #[test]
    fn csv_matrix() {
        let m: Matrix<Exact> = read_matrix("# comment\n1, 2.5\n3/4, -1\n").unwrap();
        assert_eq!(m, Matrix::from_rows(vec![vec![int(1), rat(5, 2)], vec![rat(3, 4), int(-1)]]).unwrap());
        let err = read_matrix::<Exact>("1,2\n3,y\n").unwrap_err();
        assert_eq!(err, Error::Parse { position: "line 2, field 2".into(), message: "invalid rational 'y'".into() });
    }

    #[test]
    fn matrix_json_round_trip() {
        let m = Matrix::from_rows(vec![vec![rat(-7, 3), int(0)], vec![int(5), rat(1, 9)]]).unwrap();
        assert_eq!(matrix_from_json::<Exact>(&matrix_to_json(&m)).unwrap(), m);
    }

    #[test]
    fn sequences() {
        let s: SeqWindow<Exact> =
            sequence_from_json(r#"{"offset": -1, "values": ["1/2", "1", "2"], "finite_support": true}"#).unwrap();
        assert_eq!(s.term(-1), Some(rat(1, 2)));
        assert_eq!(s.term(5), Some(int(0)));
        assert_eq!(sequence_from_json::<Exact>(&sequence_to_json(&s)).unwrap(), s);
        let err = sequence_from_json::<Exact>(r#"{"offset": 0, "values": ["1", "q"]}"#).unwrap_err();
        assert!(matches!(err, Error::Parse { ref position, .. } if position == "values[1]"));
    }

    #[test]
    fn corpus_entries_read_as_matrices() {
        let text = r#"{"matrix": [["1", "1"], ["1", "2"]], "labels": {"tp": 2, "tn": 2}}"#;
        let entry: CorpusEntry<Exact> = corpus_entry_from_json(text).unwrap();
        assert_eq!(entry.labels, Labels { tp: 2, tn: 2 });
        assert_eq!(read_matrix::<Exact>(text).unwrap(), entry.matrix);
        let back: CorpusEntry<Exact> = corpus_entry_from_json(&corpus_entry_to_value(&entry).to_string()).unwrap();
        assert_eq!(back, entry);
    }
}

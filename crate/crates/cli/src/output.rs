//! Rendering of results: JSON (the default, stable key order), CSV and
//! Markdown tables.

use std::io;

use serde::Serialize;
use serde_json::ser::Formatter;
use serde_json::Value;

/// Single-line JSON with `": "` and `", "` separators.
struct Spaced;

impl Formatter for Spaced {
    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        if first {
            Ok(())
        } else {
            w.write_all(b", ")
        }
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        if first {
            Ok(())
        } else {
            w.write_all(b", ")
        }
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        w.write_all(b": ")
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Spaced);
    value.serialize(&mut ser).expect("values always serialize");
    String::from_utf8(out).expect("JSON is UTF-8")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Md,
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Object(m) if m.values().all(Value::is_number) => m
            .iter()
            .map(|(k, v)| format!("{k}: {v}"))
            .collect::<Vec<_>>()
            .join(", "),
        other => to_json(other),
    }
}

/// Rows of a table view: the first array of objects found under a known key,
/// or the top-level object as a single row.
fn rows_of(value: &Value) -> Vec<&serde_json::Map<String, Value>> {
    for key in ["regions", "rows", "results", "functions", "spaces"] {
        if let Some(Value::Array(items)) = value.get(key) {
            if !items.is_empty() && items.iter().all(Value::is_object) {
                return items.iter().filter_map(Value::as_object).collect();
            }
        }
    }
    value.as_object().into_iter().collect()
}

fn table(value: &Value) -> (Vec<String>, Vec<Vec<String>>) {
    let rows = rows_of(value);
    let mut header: Vec<String> = Vec::new();
    for r in &rows {
        for k in r.keys() {
            if !header.contains(k) {
                header.push(k.clone());
            }
        }
    }
    let body = rows
        .iter()
        .map(|r| header.iter().map(|k| r.get(k).map(cell).unwrap_or_default()).collect())
        .collect();
    (header, body)
}

pub fn render(value: &Value, format: Format) -> String {
    match format {
        Format::Json => to_json(value),
        Format::Csv => {
            let (header, body) = table(value);
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&header).expect("in-memory write");
            for row in body {
                w.write_record(&row).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory write")).expect("UTF-8")
                .trim_end()
                .to_string()
        }
        Format::Md => {
            let (header, body) = table(value);
            let mut out = format!("| {} |\n|{}|", header.join(" | "), vec!["---"; header.len()].join("|"));
            for row in body {
                out += &format!("\n| {} |", row.join(" | "));
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn spaced_json() {
        assert_eq!(to_json(&json!({"D": 2})), r#"{"D": 2}"#);
        assert_eq!(to_json(&json!({"a": [1, 2], "b": {"c": null}})), r#"{"a": [1, 2], "b": {"c": null}}"#);
    }

    #[test]
    fn tables() {
        let v = json!({"regions": [{"twist": 0, "degree_spectrum": {"2": 511}}, {"twist": 9, "degree_spectrum": {"5": 511}}]});
        assert_eq!(render(&v, Format::Csv), "twist,degree_spectrum\n0,2: 511\n9,5: 511");
        assert_eq!(
            render(&v, Format::Md),
            "| twist | degree_spectrum |\n|---|---|\n| 0 | 2: 511 |\n| 9 | 5: 511 |"
        );
        assert_eq!(render(&json!({"D": 2}), Format::Csv), "D\n2");
    }
}

//! Report emission. JSON carries the whole report; CSV and tables carry the
//! `rows` array when there is one and the top-level payload otherwise.

use serde_json::{Map, Value};

use crate::Format;

const META: [&str; 4] = ["schema", "tool", "command", "timing"];

pub fn render(report: &Value, format: Format) -> Result<String, String> {
    match format {
        Format::Json => serde_json::to_string_pretty(report).map(|s| s + "\n").map_err(|e| e.to_string()),
        Format::Csv => csv(&records(report)),
        Format::Table => Ok(table(&records(report))),
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Bool(_) | Value::Number(_) => v.to_string(),
        _ => v.to_string(),
    }
}

fn records(report: &Value) -> (Vec<String>, Vec<Vec<String>>) {
    let empty = Map::new();
    let obj = report.as_object().unwrap_or(&empty);
    let rows: Vec<Map<String, Value>> = match obj.get("rows").and_then(Value::as_array) {
        Some(rows) => rows
            .iter()
            .map(|r| match r {
                Value::Object(m) => m.clone(),
                other => Map::from_iter([("value".to_string(), other.clone())]),
            })
            .collect(),
        None => vec![obj.iter().filter(|(k, _)| !META.contains(&k.as_str())).map(|(k, v)| (k.clone(), v.clone())).collect()],
    };
    let mut header: Vec<String> = Vec::new();
    for r in &rows {
        for k in r.keys() {
            if !header.contains(k) {
                header.push(k.clone());
            }
        }
    }
    let body = rows.iter().map(|r| header.iter().map(|k| r.get(k).map(cell).unwrap_or_default()).collect()).collect();
    (header, body)
}

fn csv((header, body): &(Vec<String>, Vec<Vec<String>>)) -> Result<String, String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(|e| e.to_string())?;
    for row in body {
        w.write_record(row).map_err(|e| e.to_string())?;
    }
    let bytes = w.into_inner().map_err(|e| e.to_string())?;
    String::from_utf8(bytes).map_err(|e| e.to_string())
}

fn table((header, body): &(Vec<String>, Vec<Vec<String>>)) -> String {
    let width = |i: usize| {
        body.iter().map(|r| r[i].chars().count()).chain([header[i].chars().count()]).max().unwrap_or(0)
    };
    let widths: Vec<usize> = (0..header.len()).map(width).collect();
    let line = |cells: &[String]| {
        let mut s = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect::<Vec<_>>()
            .join("  ");
        s.truncate(s.trim_end().len());
        s + "\n"
    };
    let mut out = line(header);
    out += &line(&widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>());
    for r in body {
        out += &line(r);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn csv_quotes_and_keeps_rationals() {
        let r = json!({"schema": 1, "value": "1/7", "note": "a, b"});
        assert_eq!(render(&r, Format::Csv).unwrap(), "note,value\n\"a, b\",1/7\n");
    }

    #[test]
    fn rows_take_precedence() {
        let r = json!({"rows": [{"p": 2, "w": -1}, {"p": 3, "w": 1}], "family": "W_1"});
        assert_eq!(render(&r, Format::Csv).unwrap(), "p,w\n2,-1\n3,1\n");
        assert_eq!(render(&r, Format::Table).unwrap(), "p  w\n-  --\n2  -1\n3  1\n");
    }
}

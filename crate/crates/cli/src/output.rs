use std::path::PathBuf;

use serde_json::Value;

#[derive(Clone, Copy, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// One command's result. The JSON document is the source of truth; `rows`
/// names its array rendered by `--out csv`.
pub struct Report {
    pub value: Value,
    pub rows: Option<&'static str>,
    pub dot: Option<(PathBuf, String)>,
    pub failed: Option<String>,
}

impl Report {
    pub fn new(value: Value, rows: Option<&'static str>) -> Self {
        Report { value, rows, dot: None, failed: None }
    }

    pub fn render(&self, format: Format) -> anyhow::Result<String> {
        match format {
            Format::Json => Ok(serde_json::to_string_pretty(&self.value)? + "\n"),
            Format::Csv => csv(&self.value, self.rows),
        }
    }
}

fn csv(value: &Value, rows: Option<&str>) -> anyhow::Result<String> {
    let single;
    let records: &[Value] = match rows.and_then(|k| value.get(k)).and_then(Value::as_array) {
        Some(a) => a,
        None => {
            single = [value.clone()];
            &single
        }
    };
    // header: keys in first-seen order across all records
    let mut header: Vec<String> = Vec::new();
    for r in records {
        match r {
            Value::Object(m) => {
                for k in m.keys() {
                    if !header.contains(k) {
                        header.push(k.clone());
                    }
                }
            }
            _ => {
                if !header.iter().any(|h| h == "value") {
                    header.push("value".into());
                }
            }
        }
    }
    if header.is_empty() {
        return Ok(String::new());
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&header)?;
    for r in records {
        let cells = header.iter().map(|h| match r {
            Value::Object(m) => m.get(h).map(cell).unwrap_or_default(),
            other if h == "value" => cell(other),
            _ => String::new(),
        });
        w.write_record(cells)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Bool(_) | Value::Number(_) => v.to_string(),
        Value::Array(items) if items.iter().all(|x| !x.is_array() && !x.is_object()) => {
            items.iter().map(cell).collect::<Vec<_>>().join(";")
        }
        _ => v.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn csv_quotes_and_joins() {
        let v = json!({"rows": [{"a": "x,y", "b": [1, 2]}, {"a": "say \"hi\"", "c": true}]});
        let text = csv(&v, Some("rows")).unwrap();
        assert_eq!(text, "a,b,c\n\"x,y\",1;2,\n\"say \"\"hi\"\"\",,true\n");
    }

    #[test]
    fn csv_of_a_plain_object_is_one_row() {
        let v = json!({"order": 60, "nu": [5, 3, 2]});
        assert_eq!(csv(&v, None).unwrap(), "nu,order\n5;3;2,60\n");
    }
}

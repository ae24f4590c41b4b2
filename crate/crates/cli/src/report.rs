//! Deterministic report documents. JSON rendering preserves insertion
//! order and prints every float with 17 significant digits, so identical
//! runs produce byte-identical files.

use std::fmt::Write as _;

#[derive(Clone, Debug, PartialEq)]
pub enum Json {
    Null,
    Bool(bool),
    UInt(u64),
    Float(f64),
    Str(String),
    Arr(Vec<Json>),
    Obj(Vec<(String, Json)>),
}

impl Json {
    pub fn obj(fields: Vec<(&str, Json)>) -> Json {
        Json::Obj(fields.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write(&mut out, 0);
        out.push('\n');
        out
    }

    fn write(&self, out: &mut String, indent: usize) {
        match self {
            Json::Null => out.push_str("null"),
            Json::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Json::UInt(v) => {
                let _ = write!(out, "{v}");
            }
            Json::Float(v) => write_float(out, *v),
            Json::Str(s) => write_string(out, s),
            Json::Arr(items) => {
                if items.is_empty() {
                    out.push_str("[]");
                    return;
                }
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push('\n');
                    pad(out, indent + 1);
                    item.write(out, indent + 1);
                }
                out.push('\n');
                pad(out, indent);
                out.push(']');
            }
            Json::Obj(fields) => {
                if fields.is_empty() {
                    out.push_str("{}");
                    return;
                }
                out.push('{');
                for (i, (k, v)) in fields.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push('\n');
                    pad(out, indent + 1);
                    write_string(out, k);
                    out.push_str(": ");
                    v.write(out, indent + 1);
                }
                out.push('\n');
                pad(out, indent);
                out.push('}');
            }
        }
    }
}

fn pad(out: &mut String, indent: usize) {
    for _ in 0..indent {
        out.push_str("  ");
    }
}

/// 17 significant digits in scientific form; round-trips every finite f64
/// and never depends on locale. Non-finite values have no JSON number form
/// and are rendered as null.
fn write_float(out: &mut String, v: f64) {
    if !v.is_finite() {
        out.push_str("null");
        return;
    }
    let _ = write!(out, "{v:.16e}");
}

fn write_string(out: &mut String, s: &str) {
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
}

/// One measured number with its uncertainty and free-form context.
pub struct Quantity {
    pub name: String,
    pub value: f64,
    pub std_error: Option<f64>,
    pub extra: Vec<(String, Json)>,
}

/// One asserted comparison; `passed` feeds the process exit code.
pub struct VerdictLine {
    pub name: String,
    pub observed: f64,
    pub comparison: String,
    pub threshold: f64,
    pub passed: bool,
}

pub struct ReportBuilder {
    experiment: &'static str,
    title: Option<String>,
    inputs: Json,
    notes: Vec<(String, Json)>,
    quantities: Vec<Quantity>,
    verdicts: Vec<VerdictLine>,
}

impl ReportBuilder {
    pub fn new(experiment: &'static str, title: Option<String>, inputs: Json) -> Self {
        Self {
            experiment,
            title,
            inputs,
            notes: Vec::new(),
            quantities: Vec::new(),
            verdicts: Vec::new(),
        }
    }

    pub fn note(&mut self, name: &str, value: Json) {
        self.notes.push((name.to_string(), value));
    }

    pub fn quantity(&mut self, name: impl Into<String>, value: f64, std_error: Option<f64>) {
        self.quantity_with(name, value, std_error, Vec::new());
    }

    pub fn quantity_with(
        &mut self,
        name: impl Into<String>,
        value: f64,
        std_error: Option<f64>,
        extra: Vec<(String, Json)>,
    ) {
        self.quantities.push(Quantity {
            name: name.into(),
            value,
            std_error,
            extra,
        });
    }

    /// Records an assertion; comparison is one of "<", "<=", ">", ">=", "==".
    pub fn verdict(
        &mut self,
        name: impl Into<String>,
        observed: f64,
        comparison: &str,
        threshold: f64,
    ) -> bool {
        let passed = match comparison {
            "<" => observed < threshold,
            "<=" => observed <= threshold,
            ">" => observed > threshold,
            ">=" => observed >= threshold,
            "==" => observed == threshold,
            other => panic!("unknown comparison {other}"),
        };
        self.verdicts.push(VerdictLine {
            name: name.into(),
            observed,
            comparison: comparison.to_string(),
            threshold,
            passed,
        });
        passed
    }

    /// Records an assertion that is already a boolean fact.
    pub fn verdict_bool(&mut self, name: impl Into<String>, passed: bool) -> bool {
        self.verdicts.push(VerdictLine {
            name: name.into(),
            observed: if passed { 1.0 } else { 0.0 },
            comparison: "==".to_string(),
            threshold: 1.0,
            passed,
        });
        passed
    }

    pub fn finish(self, csv_override: Option<String>) -> ReportDocument {
        let passed = self.verdicts.iter().all(|v| v.passed);
        let mut fields: Vec<(String, Json)> = vec![
            ("version".into(), Json::UInt(1)),
            ("experiment".into(), Json::Str(self.experiment.to_string())),
        ];
        if let Some(t) = &self.title {
            fields.push(("title".into(), Json::Str(t.clone())));
        }
        fields.push(("inputs".into(), self.inputs));
        for (k, v) in self.notes {
            fields.push((k, v));
        }
        fields.push((
            "quantities".into(),
            Json::Arr(
                self.quantities
                    .iter()
                    .map(|q| {
                        let mut f: Vec<(String, Json)> = vec![
                            ("name".into(), Json::Str(q.name.clone())),
                            ("value".into(), Json::Float(q.value)),
                            (
                                "std_error".into(),
                                q.std_error.map_or(Json::Null, Json::Float),
                            ),
                        ];
                        f.extend(q.extra.iter().cloned());
                        Json::Obj(f)
                    })
                    .collect(),
            ),
        ));
        fields.push((
            "verdicts".into(),
            Json::Arr(
                self.verdicts
                    .iter()
                    .map(|v| {
                        Json::obj(vec![
                            ("name", Json::Str(v.name.clone())),
                            ("observed", Json::Float(v.observed)),
                            ("comparison", Json::Str(v.comparison.clone())),
                            ("threshold", Json::Float(v.threshold)),
                            ("passed", Json::Bool(v.passed)),
                        ])
                    })
                    .collect(),
            ),
        ));
        fields.push(("passed".into(), Json::Bool(passed)));
        ReportDocument {
            json: Json::Obj(fields),
            quantities: self.quantities,
            verdicts: self.verdicts,
            passed,
            csv_override,
        }
    }
}

pub struct ReportDocument {
    pub json: Json,
    pub quantities: Vec<Quantity>,
    pub verdicts: Vec<VerdictLine>,
    pub passed: bool,
    /// Experiment-specific tabular form (census: one row per weight).
    pub csv_override: Option<String>,
}

impl ReportDocument {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.json.render(),
            Format::Csv => self.render_csv(),
            Format::Human => self.render_human(),
        }
    }

    fn render_csv(&self) -> String {
        if let Some(csv) = &self.csv_override {
            return csv.clone();
        }
        let mut out = String::from("kind,name,value,std_error,threshold,passed\n");
        for q in &self.quantities {
            let se = q
                .std_error
                .map_or(String::new(), |s| format!("{s:.16e}"));
            let _ = writeln!(out, "quantity,{},{:.16e},{se},,", csv_field(&q.name), q.value);
        }
        for v in &self.verdicts {
            let _ = writeln!(
                out,
                "verdict,{},{:.16e},,{:.16e},{}",
                csv_field(&v.name),
                v.observed,
                v.threshold,
                v.passed
            );
        }
        out
    }

    fn render_human(&self) -> String {
        let mut out = String::new();
        for q in &self.quantities {
            match q.std_error {
                Some(se) => {
                    let _ = writeln!(out, "  {:<58} {:>12.5e} +- {:.2e}", q.name, q.value, se);
                }
                None => {
                    let _ = writeln!(out, "  {:<58} {:>12.5e}", q.name, q.value);
                }
            }
        }
        for v in &self.verdicts {
            let _ = writeln!(
                out,
                "{} {}: {:.5e} {} {:.5e}",
                if v.passed { "PASS" } else { "FAIL" },
                v.name,
                v.observed,
                v.comparison,
                v.threshold
            );
        }
        let _ = writeln!(out, "{}", if self.passed { "ALL PASS" } else { "FAILED" });
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Human,
}

/// Recursive comparison of two JSON documents with a numeric tolerance:
/// numbers are equal when |a - b| <= tol * max(1, |a|, |b|). Returns the
/// paths that differ, capped at 32 entries.
pub fn diff_json(a: &serde_json::Value, b: &serde_json::Value, tol: f64) -> Vec<String> {
    let mut diffs = Vec::new();
    diff_walk(a, b, tol, "$", &mut diffs);
    diffs
}

fn diff_walk(
    a: &serde_json::Value,
    b: &serde_json::Value,
    tol: f64,
    path: &str,
    diffs: &mut Vec<String>,
) {
    use serde_json::Value;
    if diffs.len() >= 32 {
        return;
    }
    match (a, b) {
        (Value::Number(x), Value::Number(y)) => {
            let (x, y) = (x.as_f64().unwrap_or(f64::NAN), y.as_f64().unwrap_or(f64::NAN));
            let scale = 1.0f64.max(x.abs()).max(y.abs());
            if !((x - y).abs() <= tol * scale) {
                diffs.push(format!("{path}: {x} vs {y}"));
            }
        }
        (Value::Object(x), Value::Object(y)) => {
            for key in x.keys().chain(y.keys().filter(|k| !x.contains_key(*k))) {
                match (x.get(key), y.get(key)) {
                    (Some(va), Some(vb)) => {
                        diff_walk(va, vb, tol, &format!("{path}.{key}"), diffs)
                    }
                    (Some(_), None) => diffs.push(format!("{path}.{key}: missing on right")),
                    (None, _) => diffs.push(format!("{path}.{key}: missing on left")),
                }
            }
        }
        (Value::Array(x), Value::Array(y)) => {
            if x.len() != y.len() {
                diffs.push(format!("{path}: length {} vs {}", x.len(), y.len()));
                return;
            }
            for (i, (va, vb)) in x.iter().zip(y).enumerate() {
                diff_walk(va, vb, tol, &format!("{path}[{i}]"), diffs);
            }
        }
        (x, y) if x == y => {}
        _ => diffs.push(format!("{path}: {a} vs {b}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_is_exact_and_stable() {
        let mut s = String::new();
        write_float(&mut s, 0.5);
        assert_eq!(s, "5.0000000000000000e-1");
        let mut s = String::new();
        write_float(&mut s, -1.0 / 3.0);
        assert_eq!(s, "-3.3333333333333331e-1");
        let parsed: f64 = "-3.3333333333333331e-1".parse().unwrap();
        assert_eq!(parsed, -1.0 / 3.0);
    }

    #[test]
    fn report_renders_all_formats() {
        let mut b = ReportBuilder::new("norms", Some("demo".into()), Json::obj(vec![]));
        b.quantity("alpha", 0.25, Some(1e-3));
        b.verdict("alpha small", 0.25, "<", 0.5);
        let doc = b.finish(None);
        assert!(doc.passed);
        let json = doc.render(Format::Json);
        assert!(json.contains("\"passed\": true"));
        assert!(json.contains("2.5000000000000000e-1"));
        let csv = doc.render(Format::Csv);
        assert!(csv.starts_with("kind,name,value"));
        let human = doc.render(Format::Human);
        assert!(human.contains("PASS alpha small"));
        assert!(human.trim_end().ends_with("ALL PASS"));
    }

    #[test]
    fn empty_report_is_valid_per_format() {
        let doc = ReportBuilder::new("census", None, Json::obj(vec![])).finish(None);
        assert!(doc.passed, "no verdicts means nothing failed");
        let json = doc.render(Format::Json);
        serde_json::from_str::<serde_json::Value>(&json).expect("valid JSON");
        assert_eq!(doc.render(Format::Csv), "kind,name,value,std_error,threshold,passed\n");
        assert_eq!(doc.render(Format::Human), "ALL PASS\n");
    }

    #[test]
    fn diff_respects_tolerance() {
        let a: serde_json::Value = serde_json::from_str(r#"{"x": 1.0, "y": [1.0, 2.0]}"#).unwrap();
        let b: serde_json::Value =
            serde_json::from_str(r#"{"x": 1.0000001, "y": [1.0, 2.5]}"#).unwrap();
        assert!(diff_json(&a, &b, 1e-3).iter().any(|d| d.contains("y[1]")));
        assert_eq!(diff_json(&a, &b, 1.0).len(), 0);
        let c: serde_json::Value = serde_json::from_str(r#"{"x": 1.0}"#).unwrap();
        let d = diff_json(&a, &c, 1e-3);
        assert!(d.iter().any(|m| m.contains("missing")));
    }

    #[test]
    fn json_escapes_control_characters() {
        let j = Json::Str("a\"b\\c\nd\u{1}".into());
        assert_eq!(j.render(), "\"a\\\"b\\\\c\\nd\\u0001\"\n");
    }
}

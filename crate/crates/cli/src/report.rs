use divlab_core::{Rat, ValidationReport, Violation};
use serde_json::{json, Map, Value};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Verdict {
    Ok,
    Fail,
    Found,
    NoneFound,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Ok => "ok",
            Verdict::Fail => "fail",
            Verdict::Found => "found",
            Verdict::NoneFound => "none-found",
        }
    }

    pub fn exit_code(self) -> u8 {
        match self {
            Verdict::Ok | Verdict::Found => 0,
            Verdict::Fail | Verdict::NoneFound => 1,
        }
    }
}

/// What a command writes: a report on stdout plus a one-line summary on stderr,
/// or a document (diversity, function, tower) on stdout.
pub enum Output {
    Report { verdict: Verdict, witness: Option<Value>, violations: Option<Vec<Value>>, summary: String },
    Document { body: String, summary: String },
}

impl Output {
    pub fn report(verdict: Verdict, summary: impl Into<String>) -> Output {
        Output::Report { verdict, witness: None, violations: None, summary: summary.into() }
    }

    pub fn with_witness(mut self, w: Value) -> Output {
        if let Output::Report { witness, .. } = &mut self {
            *witness = Some(w);
        }
        self
    }

    pub fn with_violations(mut self, v: Vec<Value>) -> Output {
        if let Output::Report { violations, .. } = &mut self {
            *violations = Some(v);
        }
        self
    }

    /// Report for a validation-style check.
    pub fn from_validation(report: &ValidationReport, labels: &[String], what: &str) -> Output {
        let verdict = if report.ok { Verdict::Ok } else { Verdict::Fail };
        let summary = if report.ok {
            format!("{what}: ok")
        } else {
            let first = report.violations.first().map(|v| v.describe(labels)).unwrap_or_default();
            format!("{what}: {} violation(s); first: {first}", report.violations.len())
        };
        let out = Output::report(verdict, summary);
        if report.ok {
            out
        } else {
            out.with_violations(report.violations.iter().map(|v| violation_json(v, labels)).collect())
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            Output::Report { verdict, .. } => verdict.exit_code(),
            Output::Document { .. } => 0,
        }
    }

    pub fn summary(&self) -> &str {
        match self {
            Output::Report { summary, .. } | Output::Document { summary, .. } => summary,
        }
    }

    pub fn stdout(&self) -> String {
        match self {
            Output::Document { body, .. } => body.clone(),
            Output::Report { verdict, witness, violations, .. } => {
                let mut m = Map::new();
                m.insert("verdict".into(), Value::String(verdict.as_str().into()));
                if let Some(w) = witness {
                    m.insert("witness".into(), w.clone());
                }
                if let Some(v) = violations {
                    m.insert("violations".into(), Value::Array(v.clone()));
                }
                divlab_core::io::pretty(&Value::Object(m))
            }
        }
    }
}

pub fn subset_name(s: divlab_core::SubsetKey, labels: &[String]) -> String {
    s.iter().map(|p| labels[p.0].as_str()).collect::<Vec<_>>().join(" ")
}

pub fn violation_json(v: &Violation, labels: &[String]) -> Value {
    json!({
        "rule": v.rule,
        "subsets": v.witnesses.iter().map(|s| subset_name(*s, labels)).collect::<Vec<_>>(),
        "lhs": v.lhs.to_string(),
        "relation": v.relation,
        "rhs": v.rhs.to_string(),
        "message": v.describe(labels),
    })
}

/// Exact value with its decimal approximation.
pub fn value_json(v: Rat) -> Value {
    json!({ "value": v.to_string(), "decimal": v.to_decimal_string(6) })
}

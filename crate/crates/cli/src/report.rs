//! Command reports. The JSON form is the source; text is rendered from it.

use serde::Serialize;
use serde_json::{Map, Value};

use jordanlab::component::EngineStats;
use jordanlab::Error;

use crate::Verb;

/// Version of the report layout.
pub const REPORT_FORMAT: u32 = 1;

#[derive(Serialize)]
pub struct Report {
    verb: &'static str,
    inputs: Map<String, Value>,
    results: Map<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<Value>,
    cache: Value,
    timings: Map<String, Value>,
    tool_version: &'static str,
    format_version: u32,
}

pub fn verb_name(v: &Verb) -> &'static str {
    match v {
        Verb::Lift { .. } => "lift",
        Verb::Gamma { .. } => "gamma",
        Verb::Scheck { .. } => "scheck",
        Verb::Zeroj { .. } => "zeroj",
        Verb::Jdim { .. } => "jdim",
        Verb::Sdim { .. } => "sdim",
        Verb::Tdim { .. } => "tdim",
        Verb::Tmember { .. } => "tmember",
        Verb::Catalog { .. } => "catalog",
        Verb::AlbertEval { .. } => "albert-eval",
        Verb::SymEval { .. } => "sym-eval",
        Verb::VerifyAll { .. } => "verify-all",
    }
}

impl Report {
    pub fn new(verb: &'static str) -> Report {
        Report {
            verb,
            inputs: Map::new(),
            results: Map::new(),
            error: None,
            cache: serde_json::json!({"hits": 0, "computed": 0, "warnings": []}),
            timings: Map::new(),
            tool_version: env!("CARGO_PKG_VERSION"),
            format_version: REPORT_FORMAT,
        }
    }

    pub fn input(&mut self, key: &str, v: impl Serialize) {
        self.inputs.insert(key.into(), serde_json::to_value(v).expect("serializable input"));
    }

    pub fn result(&mut self, key: &str, v: impl Serialize) {
        self.results.insert(key.into(), serde_json::to_value(v).expect("serializable result"));
    }

    pub fn timing(&mut self, key: &str, ms: u128) {
        self.timings.insert(key.into(), Value::from(ms as u64));
    }

    pub fn cache(&mut self, stats: &EngineStats) {
        self.cache = serde_json::json!({
            "hits": stats.cache_hits,
            "computed": stats.computed,
            "warnings": stats.warnings,
        });
    }

    pub fn error(&mut self, e: &Error, code: u8) {
        let mut v = serde_json::json!({"message": e.to_string(), "exit_code": code});
        if let Error::Parse(p) = e {
            v["line"] = p.line.into();
            v["column"] = p.column.into();
            v["expected"] = serde_json::to_value(&p.expected).expect("strings");
        }
        self.error = Some(v);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.verb);
        for (k, v) in &self.inputs {
            render(&mut out, k, v, 1, true);
        }
        for (k, v) in &self.results {
            render(&mut out, k, v, 1, false);
        }
        if let Some(e) = &self.error {
            out.push_str(&format!("  error: {}\n", scalar(&e["message"], false)));
        }
        out
    }
}

/// Echoed inputs longer than this are abbreviated in text output.
const TEXT_WIDTH: usize = 240;

fn scalar(v: &Value, abbreviate: bool) -> String {
    let s = match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    if !abbreviate || s.chars().count() <= TEXT_WIDTH {
        return s;
    }
    let head: String = s.chars().take(TEXT_WIDTH).collect();
    format!("{head} ... ({} chars; use --format json for the full text)", s.chars().count())
}

fn render(out: &mut String, key: &str, v: &Value, depth: usize, abbreviate: bool) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(m) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (k, x) in m {
                render(out, k, x, depth + 1, abbreviate);
            }
        }
        Value::Array(items) if items.iter().any(|x| x.is_object()) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (i, x) in items.iter().enumerate() {
                render(out, &format!("[{i}]"), x, depth + 1, abbreviate);
            }
        }
        Value::Array(items) if items.iter().all(Value::is_string) && !items.is_empty() => {
            out.push_str(&format!("{pad}{key}:\n"));
            for x in items {
                out.push_str(&format!("{pad}  {}\n", scalar(x, abbreviate)));
            }
        }
        other => out.push_str(&format!("{pad}{key}: {}\n", scalar(other, abbreviate))),
    }
}

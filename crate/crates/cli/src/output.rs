//! Report envelope and text rendering.

use morava_core::E0Ring;
use serde_json::{json, Value};

use crate::config::{Format, RunConfig};

pub const SCHEMA: &str = "morava-rings/1";

/// Result of one command: JSON payload, text form, and whether all checks held.
pub struct Outcome {
    pub result: Value,
    pub text: Vec<String>,
    pub pass: bool,
    /// Rows for `--format csv`; the first row is the header.
    pub csv: Option<Vec<Vec<String>>>,
}

impl Outcome {
    pub fn new(result: Value, text: Vec<String>) -> Self {
        Outcome { result, text, pass: true, csv: None }
    }

    pub fn checked(mut self, pass: bool) -> Self {
        self.pass = pass;
        self
    }
}

pub fn render(cfg: &RunConfig, command: &str, out: &Outcome) -> String {
    match cfg.format {
        Format::Json => {
            let v = json!({
                "schema": SCHEMA,
                "command": command,
                "config": cfg.to_json(),
                "pass": out.pass,
                "result": out.result,
            });
            serde_json::to_string_pretty(&v).expect("serializable") + "\n"
        }
        Format::Csv => match &out.csv {
            Some(rows) => rows.iter().map(|r| r.join(",") + "\n").collect(),
            None => out.text.iter().map(|l| l.clone() + "\n").collect(),
        },
        Format::Table => out.text.iter().map(|l| l.clone() + "\n").collect(),
    }
}

pub fn pass_word(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "FAIL"
    }
}

/// `Σ c_k var^k` with coefficients printed through `E0Ring::format`, highest degree first.
pub fn poly_text(ring: &E0Ring, coeffs: &[Vec<u64>], var: &str) -> String {
    let mut terms = Vec::new();
    for (k, c) in coeffs.iter().enumerate().rev() {
        if c.iter().all(|&x| x == 0) {
            continue;
        }
        let s = ring.format(c);
        let s = if s.contains(' ') || (s.contains('*') && k > 0) { format!("({s})") } else { s };
        let mono = match k {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{k}"),
        };
        terms.push(match (k, s.as_str()) {
            (0, _) => s,
            (_, "1") => mono,
            (_, "-1") => format!("-{mono}"),
            _ => format!("{s}*{mono}"),
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

//! Deterministic reports: results, checks and an optional certificate block.

use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};
use subm_core::rational::to_decimal;
use subm_core::{ExtRat, FinSet, PointMeasure, Rational};

const APPROX_DIGITS: u32 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Pass,
    Fail,
    /// Computed value disagrees with a published claim known to be off.
    Flagged,
    Inconclusive,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Flagged => "FLAGGED",
            Status::Inconclusive => "INCONCLUSIVE",
        }
    }

    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub claim: String,
    pub computed: String,
    pub status: Status,
}

#[derive(Debug, Clone)]
struct Field {
    name: String,
    value: Value,
    approx: Option<String>,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub inputs_digest: String,
    fields: Vec<Field>,
    pub checks: Vec<Check>,
    pub certificate: Option<Value>,
}

/// Canonical exact string of a rational: `p/q`, or `p` when integral.
pub fn q(r: &Rational) -> String {
    r.to_string()
}

/// Always `p/q`, even for integers.
pub fn q_fraction(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn ext(v: &ExtRat) -> String {
    v.to_string()
}

pub fn set_json(s: &FinSet) -> Value {
    Value::Array(s.iter().map(Value::from).collect())
}

pub fn measure_json(m: &PointMeasure) -> Value {
    Value::Array(m.weights().iter().map(|(k, w)| Value::Array(vec![Value::from(*k), Value::from(q(w))])).collect())
}

impl Report {
    /// `inputs` are hashed in order; each is length-prefixed so boundaries count.
    pub fn new(command: impl Into<String>, inputs: &[&[u8]]) -> Self {
        let mut h = Sha256::new();
        for i in inputs {
            h.update((i.len() as u64).to_le_bytes());
            h.update(i);
        }
        let digest: String = h.finalize().iter().map(|b| format!("{b:02x}")).collect();
        Report { command: command.into(), inputs_digest: format!("sha256:{digest}"), fields: Vec::new(), checks: Vec::new(), certificate: None }
    }

    pub fn field(&mut self, name: &str, value: impl Into<Value>) -> &mut Self {
        self.fields.push(Field { name: name.into(), value: value.into(), approx: None });
        self
    }

    pub fn rational(&mut self, name: &str, r: &Rational) -> &mut Self {
        self.fields.push(Field { name: name.into(), value: q(r).into(), approx: Some(to_decimal(r, APPROX_DIGITS)) });
        self
    }

    /// Like [`Report::rational`] but always in `p/q` form.
    pub fn fraction(&mut self, name: &str, r: &Rational) -> &mut Self {
        self.fields.push(Field { name: name.into(), value: q_fraction(r).into(), approx: Some(to_decimal(r, APPROX_DIGITS)) });
        self
    }

    pub fn ext_rat(&mut self, name: &str, v: &ExtRat) -> &mut Self {
        self.fields.push(Field { name: name.into(), value: ext(v).into(), approx: v.finite().map(|r| to_decimal(r, APPROX_DIGITS)) });
        self
    }

    pub fn check(&mut self, name: &str, claim: impl Into<String>, computed: impl Into<String>, status: Status) -> &mut Self {
        self.checks.push(Check { name: name.into(), claim: claim.into(), computed: computed.into(), status });
        self
    }

    pub fn get(&self, name: &str) -> Option<&Value> {
        self.fields.iter().find(|f| f.name == name).map(|f| &f.value)
    }

    /// 1 if any check failed, else 3 if any was inconclusive, else 0.
    pub fn exit_code(&self) -> u8 {
        if self.checks.iter().any(|c| c.status == Status::Fail) {
            1
        } else if self.checks.iter().any(|c| c.status == Status::Inconclusive) {
            3
        } else {
            0
        }
    }

    pub fn to_json(&self, approx: bool) -> Value {
        let mut results = Map::new();
        for f in &self.fields {
            results.insert(f.name.clone(), f.value.clone());
            if let (true, Some(a)) = (approx, &f.approx) {
                results.insert(format!("{}_approx", f.name), Value::from(a.clone()));
            }
        }
        let mut out = Map::new();
        out.insert("command".into(), self.command.clone().into());
        out.insert("inputs_digest".into(), self.inputs_digest.clone().into());
        out.insert("results".into(), Value::Object(results));
        out.insert("checks".into(), serde_json::to_value(&self.checks).expect("plain data"));
        if let Some(c) = &self.certificate {
            out.insert("certificate".into(), c.clone());
        }
        out.insert("exit_code".into(), self.exit_code().into());
        Value::Object(out)
    }

    pub fn render(&self, json: bool, approx: bool) -> String {
        if json {
            let mut s = serde_json::to_string_pretty(&self.to_json(approx)).expect("plain data");
            s.push('\n');
            return s;
        }
        let mut s = format!("command: {}\ninputs: {}\n", self.command, self.inputs_digest);
        for f in &self.fields {
            let v = match &f.value {
                Value::String(x) => x.clone(),
                other => other.to_string(),
            };
            match (approx, &f.approx) {
                (true, Some(a)) => s.push_str(&format!("{}: {v} (~{a})\n", f.name)),
                _ => s.push_str(&format!("{}: {v}\n", f.name)),
            }
        }
        if !self.checks.is_empty() {
            let w = self.checks.iter().map(|c| c.name.chars().count()).max().unwrap_or(0);
            s.push_str("checks:\n");
            for c in &self.checks {
                let pad = " ".repeat(w - c.name.chars().count());
                s.push_str(&format!("  {:<12} {}{pad}  claim: {}  computed: {}\n", format!("[{}]", c.status.label()), c.name, c.claim, c.computed));
            }
            let count = |st| self.checks.iter().filter(|c| c.status == st).count();
            s.push_str(&format!(
                "summary: {} pass, {} fail, {} flagged, {} inconclusive\n",
                count(Status::Pass),
                count(Status::Fail),
                count(Status::Flagged),
                count(Status::Inconclusive)
            ));
        }
        if let Some(c) = &self.certificate {
            s.push_str("certificate:\n");
            s.push_str(&serde_json::to_string_pretty(c).expect("plain data"));
            s.push('\n');
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use subm_core::rational::rat;

    #[test]
    fn exit_codes_follow_worst_status() {
        let mut r = Report::new("t", &[b"x"]);
        assert_eq!(r.exit_code(), 0);
        r.check("a", "1", "1", Status::Flagged);
        assert_eq!(r.exit_code(), 0);
        r.check("b", "1", "?", Status::Inconclusive);
        assert_eq!(r.exit_code(), 3);
        r.check("c", "1", "2", Status::Fail);
        assert_eq!(r.exit_code(), 1);
    }

    #[test]
    fn digest_separates_inputs() {
        assert_ne!(Report::new("t", &[b"ab", b"c"]).inputs_digest, Report::new("t", &[b"a", b"bc"]).inputs_digest);
    }

    #[test]
    fn approx_only_on_request() {
        let mut r = Report::new("t", &[]);
        r.rational("v", &rat(4, 3));
        assert!(r.render(false, false).contains("v: 4/3\n"));
        assert!(r.render(false, true).contains("v: 4/3 (~1.333333)"));
        assert!(!r.render(true, false).contains("approx"));
        assert!(r.render(true, true).contains("\"v_approx\""));
        assert_eq!(q_fraction(&rat(2, 2)), "1/1");
    }
}

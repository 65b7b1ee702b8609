//! Verdicts and reports.
//!
//! A [`Verdict`] holds only numbers derived from the run's configuration and
//! seeds, so its JSON is reproducible byte for byte. Wall time and other
//! run-dependent data live in [`Provenance`].

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Pass,
    Inconclusive,
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok { Status::Pass } else { Status::Fail }
    }

    /// The worse of two statuses.
    pub fn and(self, other: Status) -> Status {
        self.max(other)
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Inconclusive => "INCONCLUSIVE",
            Status::Fail => "FAIL",
        })
    }
}

/// A reported number with its error bar and the method that produced it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Observed {
    pub value: f64,
    pub err: f64,
    pub method: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper: Option<f64>,
}

impl Observed {
    pub fn exact(value: f64) -> Self {
        Observed { value, err: 0.0, method: "exact".into(), lower: None, upper: None }
    }

    pub fn estimate(value: f64, err: f64, method: impl Into<String>) -> Self {
        Observed { value, err, method: method.into(), lower: None, upper: None }
    }

    /// A bracket `[lower, upper]`, flattened to midpoint and half-width.
    pub fn bracket(lower: f64, upper: f64, method: impl Into<String>) -> Self {
        Observed {
            value: 0.5 * (lower + upper),
            err: 0.5 * (upper - lower).abs(),
            method: method.into(),
            lower: Some(lower),
            upper: Some(upper),
        }
    }

    pub fn lo(&self) -> f64 {
        self.lower.unwrap_or(self.value - self.err)
    }

    pub fn hi(&self) -> f64 {
        self.upper.unwrap_or(self.value + self.err)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub status: Status,
    pub observed: BTreeMap<String, Observed>,
    pub tolerance: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub note: String,
}

impl Verdict {
    pub fn new(name: impl Into<String>) -> Self {
        Verdict {
            name: name.into(),
            status: Status::Pass,
            observed: BTreeMap::new(),
            tolerance: BTreeMap::new(),
            note: String::new(),
        }
    }

    pub fn obs(mut self, key: &str, o: Observed) -> Self {
        self.observed.insert(key.into(), o);
        self
    }

    pub fn tol(mut self, key: &str, v: f64) -> Self {
        self.tolerance.insert(key.into(), v);
        self
    }

    pub fn status(mut self, s: Status) -> Self {
        self.status = s;
        self
    }

    pub fn note(mut self, n: impl Into<String>) -> Self {
        self.note = n.into();
        self
    }

    /// A failed verdict for a case that raised an error.
    pub fn errored(name: impl Into<String>, err: &crate::GeoError) -> Self {
        Verdict::new(name).status(Status::Fail).note(format!("error: {err}"))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub version: String,
    pub seeds: Vec<u64>,
    pub threads: usize,
    pub wall_time_s: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub config: serde_json::Value,
    pub verdicts: Vec<Verdict>,
    pub provenance: Provenance,
}

#[derive(Serialize)]
struct Payload<'a> {
    suite: &'a str,
    config: &'a serde_json::Value,
    verdicts: &'a [Verdict],
}

impl Report {
    pub fn new(suite: impl Into<String>, config: serde_json::Value, verdicts: Vec<Verdict>) -> Self {
        Report {
            suite: suite.into(),
            config,
            verdicts,
            provenance: Provenance { version: env!("CARGO_PKG_VERSION").into(), ..Provenance::default() },
        }
    }

    /// Everything except provenance, as canonical JSON.
    pub fn payload_json(&self) -> String {
        let p = Payload { suite: &self.suite, config: &self.config, verdicts: &self.verdicts };
        serde_json::to_string_pretty(&p).expect("report serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn count(&self, s: Status) -> usize {
        self.verdicts.iter().filter(|v| v.status == s).count()
    }

    /// 0 when nothing failed; with `strict`, INCONCLUSIVE also fails.
    pub fn exit_code(&self, strict: bool) -> i32 {
        let bad = self.count(Status::Fail) + if strict { self.count(Status::Inconclusive) } else { 0 };
        if bad == 0 { 0 } else { 1 }
    }

    /// One row per verdict; each observed quantity becomes `key.value` and
    /// `key.err` columns.
    pub fn to_csv(&self) -> String {
        let keys: BTreeSet<&str> =
            self.verdicts.iter().flat_map(|v| v.observed.keys().map(String::as_str)).collect();
        let mut out = String::from("suite,name,status");
        for k in &keys {
            out.push_str(&format!(",{k}.value,{k}.err"));
        }
        out.push('\n');
        for v in &self.verdicts {
            out.push_str(&format!("{},{},{}", csv_field(&self.suite), csv_field(&v.name), v.status));
            for k in &keys {
                match v.observed.get(*k) {
                    Some(o) => out.push_str(&format!(",{},{}", o.value, o.err)),
                    None => out.push_str(",,"),
                }
            }
            out.push('\n');
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) { format!("\"{}\"", s.replace('"', "\"\"")) } else { s.to_string() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        let pass = Verdict::new("a");
        let inc = Verdict::new("b").status(Status::Inconclusive);
        let r = Report::new("s", serde_json::json!({}), vec![pass.clone(), inc]);
        assert_eq!(r.exit_code(false), 0);
        assert_eq!(r.exit_code(true), 1);
        let r = Report::new("s", serde_json::json!({}), vec![pass, Verdict::new("c").status(Status::Fail)]);
        assert_eq!(r.exit_code(false), 1);
    }

    #[test]
    fn payload_excludes_provenance() {
        let mut r = Report::new("s", serde_json::json!({"seed": 1}), vec![Verdict::new("a")]);
        let before = r.payload_json();
        r.provenance.wall_time_s = 12.5;
        assert_eq!(before, r.payload_json());
        assert!(!before.contains("wall_time"));
    }

    #[test]
    fn csv_flattens_brackets() {
        let v = Verdict::new("x,y").obs("pi", Observed::bracket(1.0, 3.0, "pietsch"));
        let csv = Report::new("s", serde_json::json!({}), vec![v]).to_csv();
        assert_eq!(csv, "suite,name,status,pi.value,pi.err\ns,\"x,y\",PASS,2,1\n");
    }

    #[test]
    fn status_order() {
        assert_eq!(Status::Pass.and(Status::Inconclusive), Status::Inconclusive);
        assert_eq!(Status::Fail.and(Status::Inconclusive), Status::Fail);
    }
}

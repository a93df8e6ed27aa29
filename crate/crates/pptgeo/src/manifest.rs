use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

/// A checked property of an experiment's results.
#[derive(Debug, Clone, PartialEq)]
pub struct Invariant {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Invariant {
    pub fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Invariant { name: name.to_string(), passed, detail: detail.into() }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Convergence {
    pub converged: usize,
    pub total: usize,
}

impl Convergence {
    pub fn count(flags: impl IntoIterator<Item = bool>) -> Self {
        flags.into_iter().fold(Convergence::default(), |c, ok| Convergence { converged: c.converged + ok as usize, total: c.total + 1 })
    }

    pub fn failure_rate(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            (self.total - self.converged) as f64 / self.total as f64
        }
    }
}

/// Everything needed to audit or reproduce a run.
#[derive(Debug, Clone)]
pub struct RunManifest {
    pub experiment: String,
    pub config: BTreeMap<String, String>,
    pub version: String,
    pub wall_clock_seconds: f64,
    pub convergence: BTreeMap<String, Convergence>,
    /// Output path (or `-` for stdout) to SHA-256.
    pub outputs: BTreeMap<String, String>,
    pub tolerances: Map<String, Value>,
    pub invariants: Vec<Invariant>,
    pub summary: Value,
}

impl RunManifest {
    pub fn passed(&self) -> bool {
        self.invariants.iter().all(|i| i.passed)
    }

    pub fn failed(&self) -> impl Iterator<Item = &Invariant> {
        self.invariants.iter().filter(|i| !i.passed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "experiment": self.experiment,
            "config": self.config,
            "version": self.version,
            "wall_clock_seconds": self.wall_clock_seconds,
            "convergence": self.convergence.iter().map(|(k, c)| (k.clone(), json!({"converged": c.converged, "total": c.total}))).collect::<Map<_, _>>(),
            "outputs": self.outputs,
            "tolerances": self.tolerances,
            "invariants": self.invariants.iter().map(|i| json!({"name": i.name, "passed": i.passed, "detail": i.detail})).collect::<Vec<_>>(),
            "passed": self.passed(),
            "summary": self.summary,
        })
    }
}

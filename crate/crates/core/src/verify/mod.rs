//! Claim registry and suite runner.
//!
//! The registry is a TOML manifest: each `[[claim]]` names an operation and
//! its parameters, and an optional `instances` array expands it into one
//! claim per parameter set. The built-in manifest is embedded at compile
//! time; `Registry::from_toml` accepts any other.

mod ops;

use std::collections::BTreeSet;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::budget::Budgets;
use crate::error::{Error, Result};

const BUILTIN: &str = include_str!("claims.toml");

/// Aliases accepted by `--suite`, mapped to registry suite ids.
pub const SUITE_ALIASES: &[(&str, &str)] = &[
    ("theorem1", "distance"),
    ("theorem2", "self-duality"),
    ("theorem3", "hadamard-rank"),
    ("theorem4", "conference-rank"),
    ("conjecture1", "mds"),
    ("sylvester", "covering-radius"),
    ("theorem6", "sylvester-lattices"),
    ("bounds", "radius-bounds"),
    ("ivA", "kernel-lattices"),
    ("ivB", "reverse-duality"),
    ("ivC", "discrete-transform"),
];

pub fn resolve_suite(name: &str) -> &str {
    SUITE_ALIASES
        .iter()
        .find(|(alias, _)| *alias == name)
        .map_or(name, |(_, id)| id)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    ProvedInstance,
    BoundRespected,
    ConjectureOutcome,
    SkippedBudget,
    Failed,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::ProvedInstance => "proved-instance",
            Status::BoundRespected => "bound-respected",
            Status::ConjectureOutcome => "conjecture-outcome",
            Status::SkippedBudget => "skipped-budget",
            Status::Failed => "failed",
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClaimSpec {
    id: String,
    suite: String,
    locus: String,
    op: String,
    #[serde(default)]
    params: toml::Table,
    #[serde(default)]
    instances: Vec<toml::Table>,
}

impl ClaimSpec {
    /// Instances that only vary the matrix order, which `--orders` replaces.
    fn order_indexed(&self) -> bool {
        !self.instances.is_empty()
            && self
                .instances
                .iter()
                .all(|t| t.len() == 1 && t.contains_key("order"))
    }

    fn expand(&self, orders: Option<&[usize]>) -> Vec<Claim> {
        let replaced: Vec<toml::Table>;
        let instances = match orders {
            Some(orders) if self.order_indexed() => {
                replaced = orders
                    .iter()
                    .map(|&n| {
                        let mut t = toml::Table::new();
                        t.insert("order".into(), toml::Value::Integer(n as i64));
                        t
                    })
                    .collect();
                &replaced
            }
            _ => &self.instances,
        };
        if instances.is_empty() {
            return vec![self.claim(self.id.clone(), self.params.clone())];
        }
        instances
            .iter()
            .map(|inst| {
                let mut params = self.params.clone();
                let mut id = self.id.clone();
                for (k, v) in inst {
                    id.push('.');
                    id.push_str(&id_fragment(k, v));
                    params.insert(k.clone(), v.clone());
                }
                self.claim(id, params)
            })
            .collect()
    }

    fn claim(&self, id: String, params: toml::Table) -> Claim {
        Claim {
            id,
            suite: self.suite.clone(),
            locus: self.locus.clone(),
            op: self.op.clone(),
            params,
        }
    }
}

// zero-padded so that ids sort in numeric order
fn id_fragment(key: &str, v: &toml::Value) -> String {
    match v {
        toml::Value::Integer(i) => format!("{key}{i:03}"),
        toml::Value::String(s) => format!("{key}-{}", s.replace(':', "")),
        other => format!("{key}-{other}"),
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Manifest {
    claim: Vec<ClaimSpec>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Claim {
    pub id: String,
    pub suite: String,
    pub locus: String,
    pub op: String,
    pub params: toml::Table,
}

pub struct Registry {
    specs: Vec<ClaimSpec>,
}

impl Registry {
    pub fn builtin() -> Self {
        Registry::from_toml(BUILTIN).expect("built-in manifest is valid")
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let manifest: Manifest = toml::from_str(text).map_err(|e| Error::Parse {
            line: e
                .span()
                .map_or(0, |s| text[..s.start].lines().count().max(1)),
            msg: e.message().to_string(),
        })?;
        let registry = Registry {
            specs: manifest.claim,
        };
        let mut seen = BTreeSet::new();
        for c in registry.specs.iter().flat_map(|s| s.expand(None)) {
            if !ops::is_known(&c.op) {
                return Err(Error::precondition(format!(
                    "claim {}: unknown op {:?}",
                    c.id, c.op
                )));
            }
            if c.suite == "all" {
                return Err(Error::precondition("suite id `all` is reserved"));
            }
            if !seen.insert(c.id.clone()) {
                return Err(Error::precondition(format!("duplicate claim id {}", c.id)));
            }
        }
        Ok(registry)
    }

    /// Suite ids in manifest order.
    pub fn suites(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for s in &self.specs {
            if !out.contains(&s.suite) {
                out.push(s.suite.clone());
            }
        }
        out
    }

    /// Claims of `suite` (or every claim for `all`), sorted by id.
    pub fn select(&self, suite: &str, orders: Option<&[usize]>) -> Result<Vec<Claim>> {
        let suite = resolve_suite(suite);
        let mut claims: Vec<Claim> = self
            .specs
            .iter()
            .filter(|s| suite == "all" || s.suite == suite)
            .flat_map(|s| s.expand(orders))
            .collect();
        if claims.is_empty() {
            return Err(Error::precondition(format!(
                "unknown suite {suite:?}; known: {}",
                self.suites().join(", ")
            )));
        }
        claims.sort_by(|a, b| a.id.cmp(&b.id));
        claims.dedup_by(|a, b| a.id == b.id);
        Ok(claims)
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub budgets: Budgets,
    pub seed: u64,
    pub orders: Option<Vec<usize>>,
    /// Record wall time per claim. Off by default so reports are byte-stable.
    pub timings: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClaimResult {
    pub id: String,
    pub locus: String,
    pub op: String,
    pub status: Status,
    pub values: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifySuiteReport {
    pub suite: String,
    pub seed: u64,
    pub budgets: Budgets,
    pub claims: Vec<ClaimResult>,
    pub counts: std::collections::BTreeMap<&'static str, usize>,
}

impl VerifySuiteReport {
    pub fn failed(&self) -> bool {
        self.claims.iter().any(|c| c.status == Status::Failed)
    }

    /// Aligned plain-text table.
    pub fn to_text(&self) -> String {
        let idw = self
            .claims
            .iter()
            .map(|c| c.id.len())
            .max()
            .unwrap_or(2)
            .max(5);
        let mut out = format!("suite {} (seed {})\n", self.suite, self.seed);
        for c in &self.claims {
            let time = c.wall_ms.map(|t| format!("  {t} ms")).unwrap_or_default();
            out.push_str(&format!(
                "{:<idw$}  {:<18}  {}{}\n",
                c.id,
                c.status.as_str(),
                c.values,
                time
            ));
        }
        let counts: Vec<String> = self
            .counts
            .iter()
            .map(|(k, v)| format!("{k}: {v}"))
            .collect();
        out.push_str(&format!("{}\n", counts.join(", ")));
        out
    }
}

pub fn run_claim(claim: &Claim, opts: &RunOptions) -> ClaimResult {
    let start = Instant::now();
    let (status, values) = match ops::run(claim, opts) {
        Ok(o) => (o.status, o.values),
        Err(e @ Error::BudgetExceeded { .. }) => (
            Status::SkippedBudget,
            serde_json::json!({ "reason": e.to_string() }),
        ),
        Err(e) => (
            Status::Failed,
            serde_json::json!({ "error": e.to_string() }),
        ),
    };
    ClaimResult {
        id: claim.id.clone(),
        locus: claim.locus.clone(),
        op: claim.op.clone(),
        status,
        values,
        wall_ms: opts.timings.then(|| start.elapsed().as_millis() as u64),
    }
}

/// Runs every selected claim on the rayon pool; results keep id order.
pub fn run_suite(registry: &Registry, suite: &str, opts: &RunOptions) -> Result<VerifySuiteReport> {
    let claims = registry.select(suite, opts.orders.as_deref())?;
    let claims: Vec<ClaimResult> = claims.par_iter().map(|c| run_claim(c, opts)).collect();
    let mut counts = std::collections::BTreeMap::new();
    for c in &claims {
        *counts.entry(c.status.as_str()).or_insert(0) += 1;
    }
    Ok(VerifySuiteReport {
        suite: resolve_suite(suite).to_string(),
        seed: opts.seed,
        budgets: opts.budgets,
        claims,
        counts,
    })
}

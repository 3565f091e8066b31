//! Human-readable and JSON reports for the command line.

use std::fmt::Write as _;

use serde::Serialize;

use crate::corpus::{ExampleRun, Status};
use crate::factorization::{Verdict, Verification};
use crate::independence::{AxiomReport, AxiomScan, StatementCheck};
use crate::markov::{ChainReport, MarkovReport};
use crate::Assignment;

/// Envelope shared by every subcommand's `--json` output.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model_digest: Option<String>,
    pub tnorm: String,
    pub epsilon: f64,
    pub exact: bool,
    pub status: Status,
    pub result: serde_json::Value,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub vacuous_cells: Vec<Assignment>,
    pub timing_ms: f64,
    #[serde(skip)]
    pub human: String,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_human(&self) -> String {
        let mut s = String::new();
        if let Some(d) = &self.model_digest {
            let _ = writeln!(s, "model sha256:{}", &d[..16]);
        }
        let _ = writeln!(s, "t-norm {}  epsilon {:e}{}", self.tnorm, self.epsilon, if self.exact { "  (exact)" } else { "" });
        s.push_str(&self.human);
        if !self.vacuous_cells.is_empty() {
            let _ = writeln!(s, "vacuous conditioning cells (marginal 0, conditional set to 1):");
            for c in &self.vacuous_cells {
                let _ = writeln!(s, "  {c}");
            }
        }
        let _ = writeln!(s, "result: {}", status_word(self.status));
        s
    }
}

pub fn status_word(s: Status) -> &'static str {
    match s {
        Status::Holds => "HOLDS",
        Status::Fails => "FAILS",
        Status::Unknown => "UNKNOWN",
        Status::Vacuous => "VACUOUS",
    }
}

fn mark(b: bool) -> &'static str {
    if b {
        "holds"
    } else {
        "FAILS"
    }
}

pub fn statement(c: &StatementCheck) -> String {
    let mut s = format!("{}: {}\n", c.statement, mark(c.holds));
    if let Some(w) = &c.witness {
        let _ = writeln!(s, "  witness: {w}");
    }
    s
}

pub fn axiom(r: &AxiomReport) -> String {
    let mut s = format!("{} ({}): {}\n", r.axiom, r.axiom.name(), mark(r.holds));
    for a in &r.antecedents {
        let _ = write!(s, "  if   {}", statement(a));
    }
    let _ = write!(s, "  then {}", statement(&r.consequent));
    s
}

pub fn scan(scan: &AxiomScan, axioms: &[crate::Axiom]) -> String {
    let mut s = String::new();
    for &ax in axioms {
        let _ = writeln!(
            s,
            "{ax} ({}): {} instances, {} violations",
            ax.name(),
            scan.instance_count(ax),
            scan.violation_count(ax)
        );
        if let Some(first) = scan.violations().find(|r| r.axiom == ax) {
            for line in axiom(first).lines() {
                let _ = writeln!(s, "    {line}");
            }
        }
    }
    s
}

pub fn markov(r: &MarkovReport) -> String {
    let failed = r.checked.iter().filter(|c| !c.holds).count();
    let mut s = format!(
        "{} Markov property: {} ({} statements checked, {} failed, {} skipped as vacuous)\n",
        r.property,
        mark(r.holds),
        r.checked.len(),
        failed,
        r.skipped.len()
    );
    if let Some(w) = &r.witness {
        let _ = write!(s, "  first failure: {}", statement(w));
    }
    s
}

pub fn chain(c: &ChainReport) -> String {
    let mut s = String::new();
    if let Some(v) = &c.factorization {
        s.push_str(&verdict(v));
    }
    for r in [&c.global, &c.local, &c.pairwise] {
        s.push_str(&markov(r));
    }
    let _ = writeln!(s, "pattern: {}", c.pattern());
    s
}

pub fn verdict(v: &Verdict) -> String {
    match v {
        Verdict::Yes { factorization } => {
            let mut s = format!("factorization: YES ({} factors under {})\n", factorization.factors.len(), factorization.tnorm);
            for f in &factorization.factors {
                let vals: Vec<String> = f.table.values().iter().map(|v| format!("{v:.6}")).collect();
                let _ = writeln!(s, "  ψ[{}] = [{}]", f.vars.join(","), vals.join(", "));
            }
            s
        }
        Verdict::No { witness, reason } => {
            let mut s = format!("factorization: NO — {reason}\n");
            if let Some(w) = witness {
                let _ = writeln!(s, "  witness: {w}");
            }
            s
        }
        Verdict::Unknown { reason } => format!("factorization: UNKNOWN — {reason}\n"),
    }
}

pub fn verification(v: &Verification) -> String {
    let mut s = format!("supplied factorization: {} (max error {:.3e})\n", mark(v.holds), v.max_error);
    if let Some(w) = &v.witness {
        let _ = writeln!(s, "  witness: {w}");
    }
    s
}

pub fn example_run(r: &ExampleRun) -> String {
    let mut s = format!("example {} [{}]: {}\n", r.id, r.tnorm, r.title);
    let _ = writeln!(s, "  headline {}: {}", r.headline.check, status_word(r.headline.status));
    if let Some(st) = &r.headline.witness_statement {
        let _ = writeln!(s, "    failing statement: {st}");
    }
    if let Some(w) = &r.headline.witness {
        let _ = writeln!(s, "    witness: {w}");
    }
    for e in &r.expectations {
        let _ = writeln!(
            s,
            "  [{}] {}: expected {}, got {}",
            if e.matches { "ok" } else { "MISMATCH" },
            e.actual.check,
            if e.expected { "holds" } else { "fails" },
            status_word(e.actual.status).to_lowercase()
        );
    }
    s
}

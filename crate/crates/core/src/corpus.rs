//! The five built-in example models and their expected verdicts.
//!
//! Each example carries a *headline* check (the one the `examples`
//! subcommand turns into an exit status) and a list of expectations, each
//! scoped to the t-norms it is claimed for.

use serde::Serialize;

use crate::factorization::{self, Verdict};
use crate::independence::{self, Axiom, Statement};
use crate::markov::{self, MarkovProperty};
use crate::model::ModelFile;
use crate::{Assignment, Base, Error, Result, Scalar, TNorm, Tolerance};

const SOURCES: [&str; 5] = [
    include_str!("../models/ex1.json"),
    include_str!("../models/ex2.json"),
    include_str!("../models/ex3.json"),
    include_str!("../models/ex4.json"),
    include_str!("../models/ex5.json"),
];

/// Which t-norms an expectation is claimed for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    Any,
    Godel,
    Archimedean,
}

impl Scope {
    pub fn applies(self, tn: &TNorm) -> bool {
        match self {
            Scope::Any => true,
            Scope::Godel => tn.base == Base::Godel,
            Scope::Archimedean => tn.is_archimedean(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Check {
    Independence { statement: Statement },
    Axiom { axiom: Axiom, groups: Vec<Vec<String>> },
    /// Holds iff a full scan finds no violation of the axiom.
    AxiomScan { axiom: Axiom },
    Markov { property: MarkovProperty, exhaustive: bool },
    Factorization,
}

impl Check {
    pub fn describe(&self) -> String {
        match self {
            Check::Independence { statement } => statement.to_string(),
            Check::Axiom { axiom, groups } => {
                let g: Vec<String> = groups.iter().map(|g| if g.is_empty() { "∅".into() } else { g.join(",") }).collect();
                format!("{axiom} on ({})", g.join(" ; "))
            }
            Check::AxiomScan { axiom } => format!("{axiom} scan has no violations"),
            Check::Markov { property, exhaustive } => {
                format!("{property} Markov property{}", if *exhaustive { " (exhaustive)" } else { "" })
            }
            Check::Factorization => "factorizes over the graph cliques".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Expectation {
    pub check: Check,
    pub scope: Scope,
    pub holds: bool,
    /// Expected failing assignment, as labels in schema order of the
    /// witness's variables.
    pub witness: Option<Vec<String>>,
    pub witness_statement: Option<Statement>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Example {
    pub id: u8,
    pub title: String,
    pub model: ModelFile,
    pub headline: Check,
    pub expectations: Vec<Expectation>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Holds,
    Fails,
    Unknown,
    /// The question is trivially true (an empty group).
    Vacuous,
}

impl Status {
    /// Process exit code: 0 holds, 1 fails, 2 unknown or vacuous.
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Holds => 0,
            Status::Fails => 1,
            Status::Unknown | Status::Vacuous => 2,
        }
    }
}

/// Result of running one check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Evaluated {
    pub check: String,
    pub status: Status,
    pub witness: Option<Assignment>,
    pub witness_statement: Option<Statement>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpectationResult {
    pub scope: Scope,
    pub expected: bool,
    pub actual: Evaluated,
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExampleRun {
    pub id: u8,
    pub title: String,
    pub tnorm: String,
    pub headline: Evaluated,
    pub expectations: Vec<ExpectationResult>,
}

impl ExampleRun {
    pub fn all_match(&self) -> bool {
        self.expectations.iter().all(|e| e.matches)
    }
}

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn labels(v: &[u8]) -> Option<Vec<String>> {
    Some(v.iter().map(|d| d.to_string()).collect())
}

fn expect(check: Check, scope: Scope, holds: bool) -> Expectation {
    Expectation { check, scope, holds, witness: None, witness_statement: None }
}

fn indep(a: &[&str], b: &[&str], s: &[&str]) -> Check {
    Check::Independence { statement: Statement::new(a, b, s) }
}

fn a5_empty_w() -> Check {
    Check::Axiom { axiom: Axiom::A5, groups: vec![names(&["X"]), names(&["Y"]), names(&["Z"]), vec![]] }
}

fn markov(property: MarkovProperty, exhaustive: bool) -> Check {
    Check::Markov { property, exhaustive }
}

fn semigraphoid_scans(scope: Scope) -> Vec<Expectation> {
    Axiom::SEMIGRAPHOID.iter().map(|&axiom| expect(Check::AxiomScan { axiom }, scope, true)).collect()
}

fn expectations(id: u8) -> (Check, Vec<Expectation>) {
    use MarkovProperty::*;
    use Scope::*;
    match id {
        1 => {
            let mut e = vec![
                expect(indep(&["X"], &["Y"], &["Z"]), Any, true),
                expect(indep(&["X"], &["Z"], &["Y"]), Any, true),
                Expectation { witness: labels(&[1, 0, 0]), ..expect(indep(&["X"], &["Y", "Z"], &[]), Any, false) },
                Expectation { witness: labels(&[1, 0, 0]), ..expect(a5_empty_w(), Any, false) },
                expect(Check::AxiomScan { axiom: Axiom::A5 }, Any, false),
            ];
            e.extend(semigraphoid_scans(Any));
            (indep(&["X"], &["Y", "Z"], &[]), e)
        }
        2 => {
            let mut e = vec![
                expect(indep(&["X"], &["Y"], &["Z"]), Godel, true),
                expect(indep(&["X"], &["Z"], &["Y"]), Godel, true),
                Expectation { witness: labels(&[1, 0, 0]), ..expect(indep(&["X"], &["Y", "Z"], &[]), Godel, false) },
                expect(a5_empty_w(), Godel, false),
                expect(Check::AxiomScan { axiom: Axiom::A5 }, Archimedean, true),
            ];
            e.extend(semigraphoid_scans(Any));
            (a5_empty_w(), e)
        }
        3 => {
            let e = vec![
                expect(markov(Pairwise, false), Any, true),
                Expectation {
                    witness_statement: Some(Statement::new(&["X"], &["Y", "Z"], &[])),
                    ..expect(markov(Local, false), Any, false)
                },
                expect(markov(Global, false), Any, false),
                expect(markov(Global, true), Any, false),
            ];
            (markov(Local, false), e)
        }
        4 => {
            let g = Expectation {
                witness: labels(&[0, 0, 0, 0, 0]),
                witness_statement: Some(Statement::new(&["U", "W"], &["Y", "Z"], &["X"])),
                ..expect(markov(Global, false), Any, false)
            };
            let e = vec![
                expect(markov(Pairwise, false), Any, true),
                expect(markov(Local, false), Any, true),
                g,
                expect(markov(Global, true), Any, false),
            ];
            (markov(Global, false), e)
        }
        5 => {
            let e = vec![
                expect(markov(Pairwise, false), Any, true),
                expect(markov(Local, false), Any, true),
                expect(markov(Global, false), Any, true),
                expect(markov(Global, true), Any, true),
                Expectation { witness: labels(&[0, 1, 0, 0]), ..expect(Check::Factorization, Any, false) },
            ];
            (Check::Factorization, e)
        }
        _ => unreachable!("example ids are 1..=5"),
    }
}

/// Example `id` (1–5).
pub fn example(id: u8) -> Result<Example> {
    let source = SOURCES
        .get((id as usize).wrapping_sub(1))
        .ok_or_else(|| Error::Parse(format!("unknown example id {id} (expected 1-5)")))?;
    let model = ModelFile::from_json(source)?;
    let title = model
        .meta
        .as_ref()
        .and_then(|m| m.get("title"))
        .and_then(|t| t.as_str())
        .unwrap_or_default()
        .to_string();
    let (headline, expectations) = expectations(id);
    Ok(Example { id, title, model, headline, expectations })
}

pub fn builtin_examples() -> Vec<Example> {
    (1..=5).map(|id| example(id).expect("embedded example parses")).collect()
}

/// Runs one check against the example's model.
pub fn evaluate<V: Scalar>(model: &ModelFile, check: &Check, tn: &TNorm, tol: Tolerance) -> Result<Evaluated> {
    let t = model.table::<V>(tol)?;
    let graph = || model.graph()?.ok_or_else(|| Error::graph("the model has no graph"));
    let status = |b: bool| if b { Status::Holds } else { Status::Fails };
    let (st, witness, witness_statement) = match check {
        Check::Independence { statement } => {
            let r = independence::independent(&t, tn, statement, tol)?;
            (status(r.holds), r.witness, None)
        }
        Check::Axiom { axiom, groups } => {
            let r = independence::check_axiom(&t, tn, *axiom, groups, tol)?;
            (status(r.holds), r.witness, None)
        }
        Check::AxiomScan { axiom } => {
            let scan = independence::scan_axioms(&t, tn, &[*axiom], tol, independence::DEFAULT_SCAN_LIMIT)?;
            let first = scan.violations().next();
            (
                status(first.is_none()),
                first.and_then(|r| r.witness.clone()),
                first.map(|r| r.consequent.statement.clone()),
            )
        }
        Check::Markov { property, exhaustive } => {
            let r = markov::check(*property, &t, &graph()?, tn, tol, *exhaustive)?;
            let w = r.witness;
            (status(r.holds), w.as_ref().and_then(|c| c.witness.clone()), w.map(|c| c.statement))
        }
        Check::Factorization => match factorization::factorizes(&t.to_f64(), &graph()?, tn, tol)? {
            Verdict::Yes { .. } => (Status::Holds, None, None),
            Verdict::No { witness, .. } => (Status::Fails, witness, None),
            Verdict::Unknown { .. } => (Status::Unknown, None, None),
        },
    };
    Ok(Evaluated { check: check.describe(), status: st, witness, witness_statement })
}

impl Expectation {
    fn matches(&self, e: &Evaluated) -> bool {
        let status_ok = e.status == if self.holds { Status::Holds } else { Status::Fails };
        let witness_ok = self.witness.as_ref().is_none_or(|w| {
            e.witness.as_ref().map(|a| a.labels()) == Some(w.iter().map(String::as_str).collect())
        });
        let stmt_ok = self.witness_statement.as_ref().is_none_or(|s| e.witness_statement.as_ref() == Some(s));
        status_ok && witness_ok && stmt_ok
    }
}

/// Runs the headline and every expectation that applies to `tn`.
pub fn run<V: Scalar>(ex: &Example, tn: &TNorm, tol: Tolerance) -> Result<ExampleRun> {
    let headline = evaluate::<V>(&ex.model, &ex.headline, tn, tol)?;
    let mut expectations = Vec::new();
    for e in ex.expectations.iter().filter(|e| e.scope.applies(tn)) {
        let actual = evaluate::<V>(&ex.model, &e.check, tn, tol)?;
        expectations.push(ExpectationResult { scope: e.scope, expected: e.holds, matches: e.matches(&actual), actual });
    }
    Ok(ExampleRun { id: ex.id, title: ex.title.clone(), tnorm: tn.to_string(), headline, expectations })
}

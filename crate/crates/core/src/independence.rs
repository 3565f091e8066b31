//! Conditional T-independence and the (semi)graphoid axioms.
//!
//! `A ⟂ B | S` holds for a table `π` and t-norm `T` when, for every joint
//! assignment `(a, b, s)`,
//!
//! ```text
//! T(π_{A|S}(a|s), π_{BS}(b, s)) = π_{ABS}(a, b, s)
//! ```
//!
//! with `π_{A|S}` the residual conditional. Groups are flattened into one
//! compound variable each, and an empty conditioning group uses the scalar
//! marginal 1. [`independent_ae`] evaluates the same relation through the
//! almost-everywhere form and serves as a cross-check.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::possibility::AeComparison;
use crate::{Assignment, Error, PossibilityTable, Result, Scalar, Schema, TNorm, Tolerance, VarSet};

/// Default maximum schema size for [`scan_axioms`].
pub const DEFAULT_SCAN_LIMIT: usize = 6;

/// `I(a, b | given)` over named variable groups.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Statement {
    pub a: Vec<String>,
    pub b: Vec<String>,
    #[serde(default)]
    pub given: Vec<String>,
}

impl Statement {
    pub fn new<S: AsRef<str>>(a: &[S], b: &[S], given: &[S]) -> Self {
        let own = |v: &[S]| v.iter().map(|s| s.as_ref().to_string()).collect();
        Statement { a: own(a), b: own(b), given: own(given) }
    }

    pub(crate) fn from_sets(schema: &Schema, sets: Sets) -> Self {
        Statement {
            a: schema.names_of(sets.a),
            b: schema.names_of(sets.b),
            given: schema.names_of(sets.s),
        }
    }

    /// Resolves names and checks pairwise disjointness.
    pub fn resolve(&self, schema: &Schema) -> Result<Sets> {
        let a = schema.set_of(&self.a)?;
        let b = schema.set_of(&self.b)?;
        let s = schema.set_of(&self.given)?;
        for (x, y, what) in [(a, b, "a and b"), (a, s, "a and given"), (b, s, "b and given")] {
            if !x.is_disjoint(y) {
                return Err(Error::Disjointness(format!(
                    "{what} share {:?} in {self}",
                    schema.names_of(x.intersection(y))
                )));
            }
        }
        if self.a.len() != a.len() || self.b.len() != b.len() || self.given.len() != s.len() {
            return Err(Error::Disjointness(format!("a group repeats a variable in {self}")));
        }
        Ok(Sets { a, b, s })
    }

    pub fn is_vacuous(&self) -> bool {
        self.a.is_empty() || self.b.is_empty()
    }
}

fn group(names: &[String]) -> String {
    if names.is_empty() {
        "∅".to_string()
    } else {
        names.join(",")
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "I({} ; {} | {})", group(&self.a), group(&self.b), group(&self.given))
    }
}

/// A statement resolved to schema positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Sets {
    pub a: VarSet,
    pub b: VarSet,
    pub s: VarSet,
}

impl Sets {
    pub fn new(a: VarSet, b: VarSet, s: VarSet) -> Self {
        Sets { a, b, s }
    }
}

/// Outcome of one independence test.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatementCheck {
    pub statement: Statement,
    pub holds: bool,
    /// First failing assignment over `a ∪ b ∪ given`, in schema order.
    pub witness: Option<Assignment>,
}

impl StatementCheck {
    fn vacuous(statement: Statement) -> Self {
        StatementCheck { statement, holds: true, witness: None }
    }
}

/// Decides `stmt` for table `t` under `tn`.
pub fn independent<V: Scalar>(t: &PossibilityTable<V>, tn: &TNorm, stmt: &Statement, tol: Tolerance) -> Result<StatementCheck> {
    tn.ensure_supported::<V>()?;
    let sets = stmt.resolve(t.schema())?;
    Ok(check_sets(t, tn, sets, tol).into_check(t.schema(), stmt.clone()))
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Outcome {
    pub holds: bool,
    /// Cell index of the failure inside the `a ∪ b ∪ s` marginal.
    pub failure: Option<usize>,
    pub scope: VarSet,
}

impl Outcome {
    pub(crate) fn into_check(self, schema: &Schema, statement: Statement) -> StatementCheck {
        let witness = self.failure.map(|i| schema.restrict(self.scope).assignment(i));
        StatementCheck { statement, holds: self.holds, witness }
    }
}

/// Core test on resolved sets; assumes `tn` supports `V`.
pub(crate) fn check_sets<V: Scalar>(t: &PossibilityTable<V>, tn: &TNorm, sets: Sets, tol: Tolerance) -> Outcome {
    let scope = sets.a.union(sets.b).union(sets.s);
    if sets.a.is_empty() || sets.b.is_empty() {
        return Outcome { holds: true, failure: None, scope };
    }
    let joint = t.marginal(scope);
    let a = sets.a.compress(scope);
    let b = sets.b.compress(scope);
    let s = sets.s.compress(scope);

    // π_{A|S} over A ∪ S
    let as_set = a.union(s);
    let pi_as = joint.marginal(as_set);
    let s_in_as = s.compress(as_set);
    let pi_s = pi_as.marginal(s_in_as);
    let as_to_s = pi_as.schema().projector(s_in_as);
    let cond: Vec<V> = pi_as
        .values()
        .iter()
        .zip(&as_to_s)
        .map(|(v, &j)| tn.eval_residual(v, pi_s.get(j)))
        .collect();

    let pi_bs = joint.marginal(b.union(s));
    let to_as = joint.schema().projector(as_set);
    let to_bs = joint.schema().projector(b.union(s));

    let failure = joint
        .values()
        .iter()
        .enumerate()
        .position(|(i, v)| !tn.eval(&cond[to_as[i]], pi_bs.get(to_bs[i])).close_to(v, tol));
    Outcome { holds: failure.is_none(), failure, scope }
}

/// The same relation evaluated as an almost-everywhere equality: for every
/// `(a, b)`, the functions `s ↦ π_{AB|S}(a,b|s)` and
/// `s ↦ T(π_{A|S}(a|s), π_{B|S}(b|s))` must be `(Π_S, T)`-equal.
pub fn independent_ae<V: Scalar>(t: &PossibilityTable<V>, tn: &TNorm, stmt: &Statement, tol: Tolerance) -> Result<StatementCheck> {
    tn.ensure_supported::<V>()?;
    let sets = stmt.resolve(t.schema())?;
    if stmt.is_vacuous() {
        return Ok(StatementCheck::vacuous(stmt.clone()));
    }
    let scope = sets.a.union(sets.b).union(sets.s);
    let joint = t.marginal(scope);
    let (a, b, s) = (sets.a.compress(scope), sets.b.compress(scope), sets.s.compress(scope));
    let ab_s = joint.condition_sets(tn, a.union(b), s).as_table();
    let a_s = joint.condition_sets(tn, a, s).as_table();
    let b_s = joint.condition_sets(tn, b, s).as_table();
    let pi_s = joint.marginal(s);

    // ab_s shares joint's schema (same variable set, same order)
    let to_as = joint.schema().projector(a.union(s));
    let to_bs = joint.schema().projector(b.union(s));
    let to_s = joint.schema().projector(s);
    let to_ab = joint.schema().projector(a.union(b));

    let s_schema = pi_s.schema().clone();
    let n_ab = joint.schema().restrict(a.union(b)).cells();
    let mut lhs: Vec<Vec<V>> = vec![vec![V::zero(); s_schema.cells()]; n_ab];
    let mut rhs = lhs.clone();
    for i in 0..joint.schema().cells() {
        let (k, j) = (to_ab[i], to_s[i]);
        lhs[k][j] = ab_s.get(i).clone();
        rhs[k][j] = tn.eval(a_s.get(to_as[i]), b_s.get(to_bs[i]));
    }
    for k in 0..n_ab {
        let h1 = PossibilityTable::factor(s_schema.clone(), lhs[k].clone())?;
        let h2 = PossibilityTable::factor(s_schema.clone(), rhs[k].clone())?;
        let AeComparison { equal, .. } = PossibilityTable::ae_equal(&h1, &h2, &pi_s, tn, tol)?;
        if !equal {
            // first failing cell in storage order of the joint
            let witness = (0..joint.schema().cells())
                .find(|&i| {
                    let j = to_s[i];
                    let (l, r) = (lhs[to_ab[i]][j].clone(), rhs[to_ab[i]][j].clone());
                    !tn.eval(&l, pi_s.get(j)).close_to(&tn.eval(&r, pi_s.get(j)), tol)
                })
                .map(|i| joint.schema().assignment(i));
            return Ok(StatementCheck { statement: stmt.clone(), holds: false, witness });
        }
    }
    Ok(StatementCheck { statement: stmt.clone(), holds: true, witness: None })
}

/// The five (semi)graphoid axioms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Axiom {
    A1,
    A2,
    A3,
    A4,
    A5,
}

impl Axiom {
    pub const ALL: [Axiom; 5] = [Axiom::A1, Axiom::A2, Axiom::A3, Axiom::A4, Axiom::A5];
    pub const SEMIGRAPHOID: [Axiom; 4] = [Axiom::A1, Axiom::A2, Axiom::A3, Axiom::A4];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::A1 => "symmetry",
            Axiom::A2 => "decomposition",
            Axiom::A3 => "weak union",
            Axiom::A4 => "contraction",
            Axiom::A5 => "intersection",
        }
    }

    /// Number of groups: `(X, Y, Z)` for A1, `(X, Y, Z, W)` otherwise.
    pub fn arity(self) -> usize {
        if self == Axiom::A1 {
            3
        } else {
            4
        }
    }

    /// Antecedents and consequent for groups `[X, Y, Z, W]`.
    fn instantiate(self, g: [VarSet; 4]) -> (Vec<Sets>, Sets) {
        let [x, y, z, w] = g;
        let yz = y.union(z);
        match self {
            Axiom::A1 => (vec![Sets::new(x, y, z)], Sets::new(y, x, z)),
            Axiom::A2 => (vec![Sets::new(x, yz, w)], Sets::new(x, z, w)),
            Axiom::A3 => (vec![Sets::new(x, yz, w)], Sets::new(x, y, z.union(w))),
            Axiom::A4 => (
                vec![Sets::new(x, y, z.union(w)), Sets::new(x, z, w)],
                Sets::new(x, yz, w),
            ),
            Axiom::A5 => (
                vec![Sets::new(x, y, z.union(w)), Sets::new(x, z, y.union(w))],
                Sets::new(x, yz, w),
            ),
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl std::str::FromStr for Axiom {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "A1" => Ok(Axiom::A1),
            "A2" => Ok(Axiom::A2),
            "A3" => Ok(Axiom::A3),
            "A4" => Ok(Axiom::A4),
            "A5" => Ok(Axiom::A5),
            _ => Err(Error::Parse(format!("unknown axiom `{s}` (expected A1..A5)"))),
        }
    }
}

/// One instantiation of an axiom.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomReport {
    pub axiom: Axiom,
    pub groups: Vec<Vec<String>>,
    pub antecedents: Vec<StatementCheck>,
    pub consequent: StatementCheck,
    /// False only when every antecedent holds and the consequent fails.
    pub holds: bool,
    pub witness: Option<Assignment>,
}

/// Memoizes independence outcomes for one table and t-norm.
pub(crate) struct Oracle<'a, V: Scalar> {
    table: &'a PossibilityTable<V>,
    tn: &'a TNorm,
    tol: Tolerance,
    cache: HashMap<Sets, Outcome>,
}

impl<'a, V: Scalar> Oracle<'a, V> {
    pub(crate) fn new(table: &'a PossibilityTable<V>, tn: &'a TNorm, tol: Tolerance) -> Self {
        Oracle { table, tn, tol, cache: HashMap::new() }
    }

    pub(crate) fn outcome(&mut self, sets: Sets) -> Outcome {
        let (table, tn, tol) = (self.table, self.tn, self.tol);
        *self.cache.entry(sets).or_insert_with(|| check_sets(table, tn, sets, tol))
    }

    pub(crate) fn check(&mut self, sets: Sets) -> StatementCheck {
        let schema = self.table.schema();
        self.outcome(sets).into_check(schema, Statement::from_sets(schema, sets))
    }

    fn axiom(&mut self, axiom: Axiom, groups: [VarSet; 4]) -> AxiomReport {
        let (ante, cons) = axiom.instantiate(groups);
        let antecedents: Vec<StatementCheck> = ante.into_iter().map(|s| self.check(s)).collect();
        let consequent = self.check(cons);
        let holds = !(antecedents.iter().all(|c| c.holds) && !consequent.holds);
        let schema = self.table.schema();
        AxiomReport {
            axiom,
            groups: groups[..axiom.arity()].iter().map(|&g| schema.names_of(g)).collect(),
            witness: if holds { None } else { consequent.witness.clone() },
            antecedents,
            consequent,
            holds,
        }
    }
}

/// Evaluates one instantiation of `axiom`.
///
/// `groups` is `[X, Y, Z]` for A1 and `[X, Y, Z, W]` for A2–A5; `W` (and the
/// conditioning group `Z` of A1) may be empty.
pub fn check_axiom<V: Scalar, S: AsRef<str>>(
    t: &PossibilityTable<V>,
    tn: &TNorm,
    axiom: Axiom,
    groups: &[Vec<S>],
    tol: Tolerance,
) -> Result<AxiomReport> {
    tn.ensure_supported::<V>()?;
    if groups.len() != axiom.arity() {
        return Err(Error::Arity { axiom: axiom.to_string(), expected: axiom.arity(), got: groups.len() });
    }
    let schema = t.schema();
    let mut sets = [VarSet::EMPTY; 4];
    let mut seen = VarSet::EMPTY;
    for (slot, names) in sets.iter_mut().zip(groups) {
        let g = schema.set_of(names)?;
        if g.len() != names.len() || !g.is_disjoint(seen) {
            return Err(Error::Disjointness(format!("axiom {axiom} groups overlap")));
        }
        seen = seen.union(g);
        *slot = g;
    }
    Ok(Oracle::new(t, tn, tol).axiom(axiom, sets))
}

/// All instantiations of the requested axioms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomScan {
    pub reports: Vec<AxiomReport>,
}

impl AxiomScan {
    pub fn violations(&self) -> impl Iterator<Item = &AxiomReport> {
        self.reports.iter().filter(|r| !r.holds)
    }

    pub fn violation_count(&self, axiom: Axiom) -> usize {
        self.violations().filter(|r| r.axiom == axiom).count()
    }

    pub fn instance_count(&self, axiom: Axiom) -> usize {
        self.reports.iter().filter(|r| r.axiom == axiom).count()
    }
}

/// Group assignments for `axiom` over `n` variables, in deterministic order.
///
/// Every variable is placed in one of the groups or left out; `X`, `Y` and
/// (for A2–A5) `Z` must be nonempty.
pub(crate) fn instances(axiom: Axiom, n: usize) -> Vec<[VarSet; 4]> {
    let k = axiom.arity() + 1; // +1 for "unused"
    let total = k.pow(n as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let mut g = [VarSet::EMPTY; 4];
        let mut c = code;
        for var in 0..n {
            let slot = c % k;
            c /= k;
            if slot > 0 {
                g[slot - 1] = g[slot - 1].with(var);
            }
        }
        let required = if axiom == Axiom::A1 { 2 } else { 3 };
        if g[..required].iter().all(|s| !s.is_empty()) {
            out.push(g);
        }
    }
    out
}

/// Enumerates every instantiation of `axioms` over the table's variables.
pub fn scan_axioms<V: Scalar>(
    t: &PossibilityTable<V>,
    tn: &TNorm,
    axioms: &[Axiom],
    tol: Tolerance,
    limit: usize,
) -> Result<AxiomScan> {
    tn.ensure_supported::<V>()?;
    let n = t.schema().len();
    if n > limit {
        return Err(Error::Limit { vars: n, limit });
    }
    let mut oracle = Oracle::new(t, tn, tol);
    let mut reports = Vec::new();
    for &axiom in axioms {
        for g in instances(axiom, n) {
            reports.push(oracle.axiom(axiom, g));
        }
    }
    Ok(AxiomScan { reports })
}

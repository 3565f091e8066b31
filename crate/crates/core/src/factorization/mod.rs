//! Clique factorizations `π(x) = T(ψ_{C₁}(x_{C₁}), …, ψ_{Cₖ}(x_{Cₖ}))`.
//!
//! Verification is direct recombination. Construction is decided in three
//! regimes, each with a sound and complete procedure:
//!
//! - **crisp tables**, any t-norm: a factor must be 1 wherever the table is,
//!   so the indicator of the projection of `S = {π = 1}` is forced on every
//!   clique; a factorization exists iff the intersection of the clique
//!   cylinders is exactly `S`.
//! - **Gödel**: every factor dominates the clique marginal, so the
//!   marginals themselves reproduce `π` whenever any factorization does.
//! - **strictly positive tables, Archimedean t-norm**: through the additive
//!   generator the problem is linear in clique-local unknowns. Strict norms
//!   solve `log φ(π) = Σ θ_C` by least squares and fix the gauge so every
//!   `θ_C ≤ 0`; nilpotent norms solve `φ(π) + k − 1 = Σ ρ_C` with
//!   `ρ_C ∈ [0, 1]`.
//!
//! Anything else is [`Verdict::Unknown`].

mod lp;

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::model::{Entry, Value};
use crate::{
    Assignment, Base, Class, Error, PossibilityTable, Result, Schema, TNorm, Tolerance, UndirectedGraph, VarSet,
};

/// Largest dense linear system (rows × unknowns) the positive constructor
/// will set up.
pub const MAX_SYSTEM_ENTRIES: usize = 4_000_000;

/// A factor table over a subset of the schema's variables.
#[derive(Debug, Clone, PartialEq)]
pub struct Factor {
    pub vars: Vec<String>,
    pub table: PossibilityTable,
}

impl Factor {
    /// `table`'s schema lists the variables, in schema order.
    pub fn new(table: PossibilityTable) -> Self {
        let vars = table.schema().names().iter().map(|s| s.to_string()).collect();
        Factor { vars, table }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Factorization {
    pub tnorm: TNorm,
    pub factors: Vec<Factor>,
}

#[derive(Serialize, Deserialize)]
struct FactorSpec {
    vars: Vec<String>,
    #[serde(default = "one")]
    default: Value,
    #[serde(default)]
    entries: Vec<Entry>,
}

fn one() -> Value {
    Value::Number(1.0)
}

#[derive(Serialize, Deserialize)]
struct FactorizationSpec {
    #[serde(default)]
    tnorm: Option<TNorm>,
    cliques: Vec<FactorSpec>,
}

impl Serialize for Factorization {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let cliques = self
            .factors
            .iter()
            .map(|f| FactorSpec {
                vars: f.vars.clone(),
                default: one(),
                entries: f
                    .table
                    .values()
                    .iter()
                    .enumerate()
                    .map(|(i, v)| Entry { assignment: f.table.schema().assignment(i).to_map(), value: Value::Number(*v) })
                    .collect(),
            })
            .collect();
        FactorizationSpec { tnorm: Some(self.tnorm.clone()), cliques }.serialize(s)
    }
}

impl Factorization {
    /// Parses the JSON form against `schema`. Missing entries default to the
    /// clique's `default` (1 if absent); `fallback` applies when the JSON
    /// names no t-norm.
    pub fn from_json(text: &str, schema: &Schema, fallback: &TNorm) -> Result<Self> {
        let spec: FactorizationSpec =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("factorization: {e}")))?;
        let mut factors = Vec::new();
        for c in spec.cliques {
            let set = schema.set_of(&c.vars)?;
            let sub = schema.restrict(set);
            let mut values = vec![c.default.to_scalar::<f64>()?; sub.cells()];
            for e in &c.entries {
                values[sub.locate(&e.assignment)?] = e.value.to_scalar()?;
            }
            factors.push(Factor::new(PossibilityTable::factor(sub, values)?));
        }
        Ok(Factorization { tnorm: spec.tnorm.unwrap_or_else(|| fallback.clone()), factors })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("factorization serializes")
    }
}

/// Outcome of [`factorizes`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Verdict {
    Yes { factorization: Factorization },
    /// `witness`, when present, is an assignment where every factorization
    /// must disagree with the table.
    No { witness: Option<Assignment>, reason: String },
    Unknown { reason: String },
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Yes { .. } => "yes",
            Verdict::No { .. } => "no",
            Verdict::Unknown { .. } => "unknown",
        }
    }

    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::Yes { .. })
    }

    pub fn factorization(&self) -> Option<&Factorization> {
        match self {
            Verdict::Yes { factorization } => Some(factorization),
            _ => None,
        }
    }
}

fn factor_sets(f: &Factorization, schema: &Schema) -> Result<Vec<VarSet>> {
    f.factors
        .iter()
        .map(|fac| {
            let set = schema.set_of(&fac.vars)?;
            fac.table.schema().ensure_same(&schema.restrict(set))?;
            Ok(set)
        })
        .collect()
}

/// Recombines the factors over `schema` with `f.tnorm`.
///
/// The result is not required to be normal; a warning is logged if it is
/// not.
pub fn combine(f: &Factorization, schema: &Schema) -> Result<PossibilityTable> {
    let sets = factor_sets(f, schema)?;
    let covered = sets.iter().fold(VarSet::EMPTY, |a, &s| a.union(s));
    if let Some(missing) = schema.all().difference(covered).first() {
        return Err(Error::Coverage(schema.variables()[missing].name.clone()));
    }
    let projectors: Vec<Vec<usize>> = sets.iter().map(|&s| schema.projector(s)).collect();
    let values = (0..schema.cells())
        .map(|i| {
            f.tnorm
                .eval_fold(f.factors.iter().zip(&projectors).map(|(fac, p)| fac.table.get(p[i])))
        })
        .collect();
    let t = PossibilityTable::factor(schema.clone(), values)?;
    if !t.is_normal(Tolerance::DEFAULT) {
        log::warn!("combined factorization is not normal (max {})", t.max_value());
    }
    Ok(t)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verification {
    pub holds: bool,
    pub max_error: f64,
    pub witness: Option<Assignment>,
}

/// Checks that `f` is a factorization of `t` with respect to `g`: every
/// factor sits on a complete vertex set and the recombination equals `t`.
pub fn verify(t: &PossibilityTable, g: &UndirectedGraph, f: &Factorization, tol: Tolerance) -> Result<Verification> {
    g.ensure_aligned(t.schema())?;
    let cliques = g.cliques();
    for (fac, set) in f.factors.iter().zip(factor_sets(f, t.schema())?) {
        if !cliques.iter().any(|c| set.is_subset(*c)) {
            return Err(Error::CliqueMismatch(format!("{:?} is not a complete set of the graph", fac.vars)));
        }
    }
    let combined = combine(f, t.schema())?;
    let mut max_error: f64 = 0.0;
    let mut witness = None;
    for (i, (a, b)) in combined.values().iter().zip(t.values()).enumerate() {
        let e = (a - b).abs();
        max_error = max_error.max(e);
        if e > tol.value() && witness.is_none() {
            witness = Some(t.schema().assignment(i));
        }
    }
    Ok(Verification { holds: witness.is_none(), max_error, witness })
}

fn clique_tables(t: &PossibilityTable, cliques: &[VarSet], mut value: impl FnMut(VarSet) -> Vec<f64>) -> Result<Vec<Factor>> {
    cliques
        .iter()
        .map(|&c| Ok(Factor::new(PossibilityTable::factor(t.schema().restrict(c), value(c))?)))
        .collect()
}

/// Index of the first cell where `f` disagrees with `t`.
fn first_mismatch(t: &PossibilityTable, f: &Factorization, tol: Tolerance) -> Result<Option<usize>> {
    let c = combine(f, t.schema())?;
    Ok(c.values().iter().zip(t.values()).position(|(a, b)| (a - b).abs() > tol.value()))
}

/// Factorization by clique marginals under the Gödel t-norm. On failure,
/// returns the first cell where the marginals' minimum exceeds the table;
/// every min-factorization is at least that large there.
pub fn construct_godel(t: &PossibilityTable, g: &UndirectedGraph, tol: Tolerance) -> Result<std::result::Result<Factorization, Assignment>> {
    g.ensure_aligned(t.schema())?;
    let factors = clique_tables(t, &g.cliques(), |c| t.marginal(c).into_values())?;
    let f = Factorization { tnorm: TNorm::godel(), factors };
    Ok(match first_mismatch(t, &f, tol)? {
        None => Ok(f),
        Some(i) => Err(t.schema().assignment(i)),
    })
}

/// Indicator factorization of a crisp table. On failure, returns the first
/// cell outside `{π = 1}` that lies in every clique cylinder.
pub fn construct_crisp(
    t: &PossibilityTable,
    g: &UndirectedGraph,
    tn: &TNorm,
    tol: Tolerance,
) -> Result<std::result::Result<Factorization, Assignment>> {
    g.ensure_aligned(t.schema())?;
    if let Some(i) = t.first_non_crisp(tol) {
        return Err(Error::Crispness { value: t.get(i).to_string(), at: t.schema().assignment(i).to_string() });
    }
    let schema = t.schema();
    let ones: Vec<bool> = t.values().iter().map(|v| *v > 0.5).collect();
    let cliques = g.cliques();
    let projectors: Vec<Vec<usize>> = cliques.iter().map(|&c| schema.projector(c)).collect();
    let mut cylinders: Vec<Vec<bool>> = cliques.iter().map(|&c| vec![false; schema.restrict(c).cells()]).collect();
    for (i, _) in ones.iter().enumerate().filter(|(_, on)| **on) {
        for (cyl, p) in cylinders.iter_mut().zip(&projectors) {
            cyl[p[i]] = true;
        }
    }
    let outside = (0..schema.cells()).find(|&i| !ones[i] && cylinders.iter().zip(&projectors).all(|(cyl, p)| cyl[p[i]]));
    if let Some(i) = outside {
        return Ok(Err(schema.assignment(i)));
    }
    let mut k = 0;
    let factors = clique_tables(t, &cliques, |_| {
        k += 1;
        cylinders[k - 1].iter().map(|&b| if b { 1.0 } else { 0.0 }).collect()
    })?;
    Ok(Ok(Factorization { tnorm: tn.clone(), factors }))
}

/// Why the positive constructor gave no factorization.
#[derive(Debug, Clone, PartialEq)]
pub enum PositiveFailure {
    /// The linear system has no solution; the cell with the largest residual.
    Inconsistent(Assignment),
    /// The linear system is solvable but not within the factor range.
    OutOfRange,
    /// The system is too large or the solution did not verify numerically.
    Undecided(String),
}

/// Factorization of a strictly positive table under an Archimedean t-norm.
pub fn construct_strict_positive(
    t: &PossibilityTable,
    g: &UndirectedGraph,
    tn: &TNorm,
    tol: Tolerance,
) -> Result<std::result::Result<Factorization, PositiveFailure>> {
    g.ensure_aligned(t.schema())?;
    if let Some(i) = t.first_zero() {
        return Err(Error::Positivity { at: t.schema().assignment(i).to_string() });
    }
    let class = tn.classify();
    if class == Class::NonArchimedean {
        return Err(Error::UnsupportedTNorm(format!("{tn} is not Archimedean; use the Gödel constructor")));
    }
    let schema = t.schema();
    let cliques = g.cliques();
    let sizes: Vec<usize> = cliques.iter().map(|&c| schema.restrict(c).cells()).collect();
    let offsets: Vec<usize> = sizes.iter().scan(0, |acc, &s| Some(std::mem::replace(acc, *acc + s))).collect();
    let unknowns: usize = sizes.iter().sum();
    let m = schema.cells();
    if m.saturating_mul(unknowns) > MAX_SYSTEM_ENTRIES {
        return Ok(Err(PositiveFailure::Undecided(format!("linear system of {m} × {unknowns} is too large"))));
    }
    let projectors: Vec<Vec<usize>> = cliques.iter().map(|&c| schema.projector(c)).collect();
    let mut a = DMatrix::<f64>::zeros(m, unknowns);
    for i in 0..m {
        for (k, p) in projectors.iter().enumerate() {
            a[(i, offsets[k] + p[i])] = 1.0;
        }
    }
    let phi = |x: f64| tn.automorphism.as_ref().map_or(x, |a| a.forward(x));
    let phi_inv = |x: f64| tn.automorphism.as_ref().map_or(x, |a| a.inverse(x));
    let k = cliques.len() as f64;
    // rhs, and the box [0, upper] for the shifted unknowns
    let (rhs, upper, lower): (Vec<f64>, f64, f64) = match class {
        Class::Strict => {
            let logs: Vec<f64> = t.values().iter().map(|&v| phi(v).ln()).collect();
            let low = logs.iter().copied().fold(0.0, f64::min);
            (logs, -low, low)
        }
        _ => (t.values().iter().map(|&v| phi(v) + k - 1.0).collect(), 1.0, 0.0),
    };

    let b = DVector::from_vec(rhs.clone());
    let (x, residual) = lp::least_squares(&a, &b);
    if residual.norm() > tol.value() * (m as f64).sqrt() {
        let worst = residual.iamax();
        return Ok(Err(PositiveFailure::Inconsistent(schema.assignment(worst))));
    }

    let theta: Vec<f64> = if class == Class::Strict {
        match simple_shift(&x, &offsets, &sizes) {
            Some(shifted) => shifted,
            None => {
                // θ = L + y with y ∈ [0, -L], where L = min log φ(π)
                let c: Vec<f64> = rhs.iter().map(|r| r - k * lower).collect();
                match lp::box_feasible(&a, &c, &vec![upper; unknowns], tol.value() * m as f64) {
                    Some(y) => y.into_iter().map(|v| (v + lower).min(0.0)).collect(),
                    None => return Ok(Err(PositiveFailure::OutOfRange)),
                }
            }
        }
    } else {
        let in_box = x.iter().all(|v| (-tol.value()..=1.0 + tol.value()).contains(v));
        if in_box {
            x.iter().map(|v| v.clamp(0.0, 1.0)).collect()
        } else {
            match lp::box_feasible(&a, &rhs, &vec![1.0; unknowns], tol.value() * m as f64) {
                Some(y) => y,
                None => return Ok(Err(PositiveFailure::OutOfRange)),
            }
        }
    };

    let to_factor = |v: f64| match class {
        Class::Strict => phi_inv(v.exp()),
        _ => phi_inv(v.clamp(0.0, 1.0)),
    }
    .clamp(0.0, 1.0);
    let mut idx = 0;
    let factors = clique_tables(t, &cliques, |_| {
        idx += 1;
        let (o, s) = (offsets[idx - 1], sizes[idx - 1]);
        theta[o..o + s].iter().map(|&v| to_factor(v)).collect()
    })?;
    let f = Factorization { tnorm: tn.clone(), factors };
    match first_mismatch(t, &f, tol)? {
        None => Ok(Ok(f)),
        Some(i) => Ok(Err(PositiveFailure::Undecided(format!(
            "recovered factors miss the table at {} beyond tolerance",
            schema.assignment(i)
        )))),
    }
}

/// Subtracts each clique's maximum and adds the total to the first clique;
/// `None` if that clique then exceeds 0.
fn simple_shift(x: &DVector<f64>, offsets: &[usize], sizes: &[usize]) -> Option<Vec<f64>> {
    let mut theta: Vec<f64> = x.iter().copied().collect();
    let mut total = 0.0;
    for (&o, &s) in offsets.iter().zip(sizes) {
        let max = theta[o..o + s].iter().copied().fold(f64::NEG_INFINITY, f64::max);
        theta[o..o + s].iter_mut().for_each(|v| *v -= max);
        total += max;
    }
    let (o, s) = (offsets[0], sizes[0]);
    theta[o..o + s].iter_mut().for_each(|v| *v += total);
    let over = theta[o..o + s].iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if over > 1e-12 {
        return None;
    }
    theta[o..o + s].iter_mut().for_each(|v| *v = v.min(0.0));
    Some(theta)
}

/// Decides whether `t` factorizes over the cliques of `g` under `tn`.
pub fn factorizes(t: &PossibilityTable, g: &UndirectedGraph, tn: &TNorm, tol: Tolerance) -> Result<Verdict> {
    g.ensure_aligned(t.schema())?;
    let cliques = g.cliques();
    if cliques.len() == 1 && cliques[0] == t.schema().all() {
        let factorization = Factorization { tnorm: tn.clone(), factors: vec![Factor::new(t.clone())] };
        return Ok(Verdict::Yes { factorization });
    }
    if t.is_crisp(tol) {
        return Ok(match construct_crisp(t, g, tn, tol)? {
            Ok(factorization) => Verdict::Yes { factorization },
            Err(w) => Verdict::No {
                reason: "the assignment lies in every clique cylinder of {π = 1} but has possibility 0".into(),
                witness: Some(w),
            },
        });
    }
    if tn.base == Base::Godel {
        return Ok(match construct_godel(t, g, tol)? {
            Ok(factorization) => Verdict::Yes { factorization },
            Err(w) => Verdict::No {
                reason: "the minimum of the clique marginals exceeds the table here".into(),
                witness: Some(w),
            },
        });
    }
    if !t.is_strictly_positive() {
        return Ok(Verdict::Unknown {
            reason: format!("no decision procedure for a non-crisp table with zeros under {tn}"),
        });
    }
    Ok(match construct_strict_positive(t, g, tn, tol)? {
        Ok(factorization) => Verdict::Yes { factorization },
        Err(PositiveFailure::Inconsistent(w)) => Verdict::No {
            reason: "the generator-transformed table is not a sum of clique terms (largest residual here)".into(),
            witness: Some(w),
        },
        Err(PositiveFailure::OutOfRange) => Verdict::No {
            reason: "every solution of the clique system has a factor outside [0, 1]".into(),
            witness: None,
        },
        Err(PositiveFailure::Undecided(reason)) => Verdict::Unknown { reason },
    })
}

/// Factor lookup by clique names, mainly for reports and tests.
pub fn factor_map(f: &Factorization) -> BTreeMap<Vec<String>, &PossibilityTable> {
    f.factors.iter().map(|fac| (fac.vars.clone(), &fac.table)).collect()
}

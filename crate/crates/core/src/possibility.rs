//! Finite possibility distributions.
//!
//! A [`PossibilityTable`] stores one value per joint assignment of its
//! [`Schema`]. Storage is dense with the *first* schema variable varying
//! fastest, and every enumeration in the crate (witness search included)
//! follows that order.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result, Scalar, TNorm, Tolerance, VarSet};

/// Upper bound on the number of cells of a dense table.
pub const MAX_CELLS: usize = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    pub domain: Vec<String>,
}

impl Variable {
    pub fn new(name: impl Into<String>, domain: &[&str]) -> Self {
        Variable { name: name.into(), domain: domain.iter().map(|s| s.to_string()).collect() }
    }

    /// A variable with labels `"0"`, `"1"`, …
    pub fn indexed(name: impl Into<String>, size: usize) -> Self {
        Variable { name: name.into(), domain: (0..size).map(|i| i.to_string()).collect() }
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.domain.iter().position(|l| l == label)
    }
}

/// Ordered list of variables with finite domains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schema {
    vars: Vec<Variable>,
    strides: Vec<usize>,
    cells: usize,
}

impl Schema {
    pub fn new(vars: Vec<Variable>) -> Result<Self> {
        if vars.len() > VarSet::CAPACITY {
            return Err(Error::schema(format!("at most {} variables are supported", VarSet::CAPACITY)));
        }
        let mut seen = HashSet::new();
        for v in &vars {
            if v.name.is_empty() {
                return Err(Error::schema("variable with empty name"));
            }
            if !seen.insert(v.name.as_str()) {
                return Err(Error::schema(format!("duplicate variable `{}`", v.name)));
            }
            if v.domain.len() < 2 {
                return Err(Error::schema(format!(
                    "variable `{}` needs at least two values, has {}",
                    v.name,
                    v.domain.len()
                )));
            }
            let labels: HashSet<&str> = v.domain.iter().map(String::as_str).collect();
            if labels.len() != v.domain.len() {
                return Err(Error::schema(format!("variable `{}` has duplicate labels", v.name)));
            }
        }
        let mut strides = Vec::with_capacity(vars.len());
        let mut cells = 1usize;
        for v in &vars {
            strides.push(cells);
            cells = cells
                .checked_mul(v.domain.len())
                .filter(|&c| c <= MAX_CELLS)
                .ok_or_else(|| Error::schema(format!("joint space exceeds {MAX_CELLS} cells")))?;
        }
        Ok(Schema { vars, strides, cells })
    }

    /// Binary variables with the given names.
    pub fn binary(names: &[&str]) -> Result<Self> {
        Schema::new(names.iter().map(|n| Variable::indexed(*n, 2)).collect())
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn variables(&self) -> &[Variable] {
        &self.vars
    }

    pub fn names(&self) -> Vec<&str> {
        self.vars.iter().map(|v| v.name.as_str()).collect()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.vars.iter().map(|v| v.domain.len()).collect()
    }

    pub fn all(&self) -> VarSet {
        VarSet::full(self.vars.len())
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn set_of<S: AsRef<str>>(&self, names: &[S]) -> Result<VarSet> {
        names.iter().try_fold(VarSet::EMPTY, |acc, n| {
            let n = n.as_ref();
            let i = self.index_of(n).ok_or_else(|| Error::schema(format!("unknown variable `{n}`")))?;
            Ok(acc.with(i))
        })
    }

    pub fn names_of(&self, set: VarSet) -> Vec<String> {
        set.iter().filter(|&i| i < self.len()).map(|i| self.vars[i].name.clone()).collect()
    }

    /// The sub-schema of `set`, in schema order.
    pub fn restrict(&self, set: VarSet) -> Schema {
        let vars = set.iter().filter(|&i| i < self.len()).map(|i| self.vars[i].clone()).collect();
        Schema::new(vars).expect("a restriction of a valid schema is valid")
    }

    /// Label indices of cell `idx`, in schema order.
    pub fn decode(&self, mut idx: usize) -> Vec<usize> {
        self.vars
            .iter()
            .map(|v| {
                let d = idx % v.domain.len();
                idx /= v.domain.len();
                d
            })
            .collect()
    }

    pub fn encode(&self, digits: &[usize]) -> usize {
        digits.iter().zip(&self.strides).map(|(d, s)| d * s).sum()
    }

    /// Cell index from a name → label map covering every variable.
    pub fn locate(&self, assignment: &BTreeMap<String, String>) -> Result<usize> {
        if let Some(extra) = assignment.keys().find(|k| self.index_of(k).is_none()) {
            return Err(Error::schema(format!("unknown variable `{extra}` in assignment")));
        }
        let mut idx = 0;
        for (v, stride) in self.vars.iter().zip(&self.strides) {
            let label = assignment
                .get(&v.name)
                .ok_or_else(|| Error::schema(format!("assignment does not set variable `{}`", v.name)))?;
            let d = v
                .label_index(label)
                .ok_or_else(|| Error::schema(format!("variable `{}` has no value `{label}`", v.name)))?;
            idx += d * stride;
        }
        Ok(idx)
    }

    pub fn assignment(&self, idx: usize) -> Assignment {
        Assignment(
            self.vars
                .iter()
                .zip(self.decode(idx))
                .map(|(v, d)| (v.name.clone(), v.domain[d].clone()))
                .collect(),
        )
    }

    /// For every cell of `self`, the index of its restriction to `sub`
    /// inside `self.restrict(sub)`.
    pub fn projector(&self, sub: VarSet) -> Vec<usize> {
        let sizes = self.sizes();
        let mut sub_strides = vec![0usize; self.len()];
        let mut s = 1;
        for i in sub.iter().filter(|&i| i < self.len()) {
            sub_strides[i] = s;
            s *= sizes[i];
        }
        let mut out = Vec::with_capacity(self.cells);
        let mut digits = vec![0usize; self.len()];
        let mut acc = 0usize;
        for _ in 0..self.cells {
            out.push(acc);
            for i in 0..digits.len() {
                digits[i] += 1;
                acc += sub_strides[i];
                if digits[i] < sizes[i] {
                    break;
                }
                acc -= sub_strides[i] * sizes[i];
                digits[i] = 0;
            }
        }
        out
    }

    /// Checks that both schemas declare the same variables and domains in
    /// the same order.
    pub fn ensure_same(&self, other: &Schema) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::schema(format!(
                "schemas differ: [{}] vs [{}]",
                self.names().join(", "),
                other.names().join(", ")
            )))
        }
    }
}

/// A joint assignment as `(variable, label)` pairs in schema order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment(pub Vec<(String, String)>);

impl Assignment {
    pub fn labels(&self) -> Vec<&str> {
        self.0.iter().map(|(_, l)| l.as_str()).collect()
    }

    pub fn get(&self, name: &str) -> Option<&str> {
        self.0.iter().find(|(n, _)| n == name).map(|(_, l)| l.as_str())
    }

    pub fn to_map(&self) -> BTreeMap<String, String> {
        self.0.iter().cloned().collect()
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(n, l)| format!("{n}={l}")).collect();
        f.write_str(&parts.join(", "))
    }
}

/// A possibility distribution (or, when not normal, a factor) over the
/// joint space of a schema.
#[derive(Debug, Clone, PartialEq)]
pub struct PossibilityTable<V: Scalar = f64> {
    schema: Schema,
    values: Vec<V>,
}

impl<V: Scalar> PossibilityTable<V> {
    /// A normal distribution: entries in `[0,1]`, maximum 1.
    pub fn from_values(schema: Schema, values: Vec<V>, tol: Tolerance) -> Result<Self> {
        let t = Self::factor(schema, values)?;
        t.ensure_normal(tol)?;
        Ok(t)
    }

    /// A table whose entries lie in `[0,1]` without a normality requirement.
    pub fn factor(schema: Schema, values: Vec<V>) -> Result<Self> {
        if values.len() != schema.cells() {
            return Err(Error::schema(format!(
                "expected {} values, got {}",
                schema.cells(),
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_unit()) {
            return Err(Error::Domain {
                value: values[i].to_string(),
                context: format!("table entry at {}", schema.assignment(i)),
            });
        }
        Ok(PossibilityTable { schema, values })
    }

    pub fn constant(schema: Schema, value: V) -> Result<Self> {
        let n = schema.cells();
        Self::factor(schema, vec![value; n])
    }

    /// Builds a normal table from sparse entries over a default value.
    pub fn load<I>(schema: Schema, entries: I, default: V, tol: Tolerance) -> Result<Self>
    where
        I: IntoIterator<Item = (BTreeMap<String, String>, V)>,
    {
        if !default.is_unit() {
            return Err(Error::Domain { value: default.to_string(), context: "table default".into() });
        }
        let mut values = vec![default; schema.cells()];
        for (assignment, v) in entries {
            let idx = schema.locate(&assignment)?;
            if !v.is_unit() {
                return Err(Error::Domain {
                    value: v.to_string(),
                    context: format!("table entry at {}", schema.assignment(idx)),
                });
            }
            values[idx] = v;
        }
        Self::from_values(schema, values, tol)
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn values(&self) -> &[V] {
        &self.values
    }

    pub fn into_values(self) -> Vec<V> {
        self.values
    }

    pub fn get(&self, idx: usize) -> &V {
        &self.values[idx]
    }

    /// Value at the assignment given by label strings in schema order.
    pub fn value_at(&self, labels: &[&str]) -> Result<&V> {
        if labels.len() != self.schema.len() {
            return Err(Error::schema(format!(
                "expected {} labels, got {}",
                self.schema.len(),
                labels.len()
            )));
        }
        let map = self
            .schema
            .variables()
            .iter()
            .zip(labels)
            .map(|(v, l)| (v.name.clone(), l.to_string()))
            .collect();
        Ok(&self.values[self.schema.locate(&map)?])
    }

    pub fn max_value(&self) -> V {
        self.values.iter().fold(V::zero(), |m, v| m.max_of(v))
    }

    pub fn is_normal(&self, tol: Tolerance) -> bool {
        self.max_value().close_to(&V::one(), tol)
    }

    pub fn ensure_normal(&self, tol: Tolerance) -> Result<()> {
        if self.is_normal(tol) {
            Ok(())
        } else {
            Err(Error::Normality { max: self.max_value().to_string() })
        }
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.values.iter().all(|v| *v > V::zero())
    }

    pub fn first_zero(&self) -> Option<usize> {
        self.values.iter().position(|v| *v <= V::zero())
    }

    /// Every entry is 0 or 1 (within tolerance).
    pub fn is_crisp(&self, tol: Tolerance) -> bool {
        self.first_non_crisp(tol).is_none()
    }

    pub fn first_non_crisp(&self, tol: Tolerance) -> Option<usize> {
        self.values
            .iter()
            .position(|v| !v.close_to(&V::zero(), tol) && !v.close_to(&V::one(), tol))
    }

    /// Marginal on `keep` (positions in this table's schema).
    pub fn marginal(&self, keep: VarSet) -> PossibilityTable<V> {
        let keep = keep.intersection(self.schema.all());
        if keep == self.schema.all() {
            return self.clone();
        }
        let schema = self.schema.restrict(keep);
        let mut values = vec![V::zero(); schema.cells()];
        for (v, j) in self.values.iter().zip(self.schema.projector(keep)) {
            if *v > values[j] {
                values[j] = v.clone();
            }
        }
        PossibilityTable { schema, values }
    }

    /// Marginal on the named variables (result in schema order).
    pub fn marginalize<S: AsRef<str>>(&self, keep: &[S]) -> Result<PossibilityTable<V>> {
        Ok(self.marginal(self.schema.set_of(keep)?))
    }

    /// Residual conditional `π_{target|given}` over `target ∪ given`.
    pub fn condition<S: AsRef<str>>(&self, tn: &TNorm, target: &[S], given: &[S]) -> Result<ConditionalTable<V>> {
        tn.ensure_supported::<V>()?;
        let t = self.schema.set_of(target)?;
        let g = self.schema.set_of(given)?;
        if !t.is_disjoint(g) {
            return Err(Error::Disjointness(format!(
                "target and given share {:?}",
                self.schema.names_of(t.intersection(g))
            )));
        }
        Ok(self.condition_sets(tn, t, g))
    }

    pub(crate) fn condition_sets(&self, tn: &TNorm, target: VarSet, given: VarSet) -> ConditionalTable<V> {
        let joint = self.marginal(target.union(given));
        let local_given = given.compress(target.union(given));
        let marg = joint.marginal(local_given);
        let proj = joint.schema.projector(local_given);
        let mut vacuous = Vec::new();
        let values = joint
            .values
            .iter()
            .zip(&proj)
            .enumerate()
            .map(|(i, (v, &j))| {
                if marg.values[j] <= V::zero() {
                    vacuous.push(i);
                }
                tn.eval_residual(v, &marg.values[j])
            })
            .collect();
        ConditionalTable {
            target: self.schema.names_of(target),
            given: self.schema.names_of(given),
            schema: joint.schema,
            values,
            vacuous,
        }
    }

    /// `(Π, T)`-almost-everywhere equality of two fuzzy variables.
    pub fn ae_equal(h1: &Self, h2: &Self, reference: &Self, tn: &TNorm, tol: Tolerance) -> Result<AeComparison> {
        tn.ensure_supported::<V>()?;
        h1.schema.ensure_same(&h2.schema)?;
        h1.schema.ensure_same(&reference.schema)?;
        let witness = h1
            .values
            .iter()
            .zip(&h2.values)
            .zip(&reference.values)
            .position(|((a, b), p)| !tn.eval(a, p).close_to(&tn.eval(b, p), tol))
            .map(|i| h1.schema.assignment(i));
        Ok(AeComparison { equal: witness.is_none(), witness })
    }

    /// Converts every entry to another scalar type.
    pub fn map_scalar<W: Scalar>(&self, f: impl Fn(&V) -> Option<W>) -> Result<PossibilityTable<W>> {
        let values = self
            .values
            .iter()
            .map(|v| f(v).ok_or_else(|| Error::Inexact(format!("value {v}"))))
            .collect::<Result<Vec<_>>>()?;
        PossibilityTable::factor(self.schema.clone(), values)
    }

    pub fn to_f64(&self) -> PossibilityTable<f64> {
        PossibilityTable {
            schema: self.schema.clone(),
            values: self.values.iter().map(|v| v.to_f64()).collect(),
        }
    }
}

/// Result of an almost-everywhere comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct AeComparison {
    pub equal: bool,
    /// First assignment (in storage order) where the two sides differ.
    pub witness: Option<Assignment>,
}

/// Residual conditional distribution `π_{target|given}`.
///
/// Entries are the residual representative of the conditional's
/// almost-everywhere equivalence class. Cells whose conditioning marginal is
/// zero hold 1 and are listed as vacuous.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalTable<V: Scalar = f64> {
    pub target: Vec<String>,
    pub given: Vec<String>,
    schema: Schema,
    values: Vec<V>,
    vacuous: Vec<usize>,
}

impl<V: Scalar> ConditionalTable<V> {
    /// Schema over `target ∪ given`, in the parent schema's order.
    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn values(&self) -> &[V] {
        &self.values
    }

    pub fn vacuous_cells(&self) -> Vec<Assignment> {
        self.vacuous.iter().map(|&i| self.schema.assignment(i)).collect()
    }

    pub fn vacuous_indices(&self) -> &[usize] {
        &self.vacuous
    }

    pub fn as_table(&self) -> PossibilityTable<V> {
        PossibilityTable { schema: self.schema.clone(), values: self.values.clone() }
    }
}

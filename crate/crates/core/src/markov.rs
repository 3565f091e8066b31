//! Pairwise, local and global Markov properties relative to a graph.

use std::fmt;

use serde::Serialize;

use crate::factorization::{self, Verdict};
use crate::independence::{Oracle, Sets, Statement, StatementCheck};
use crate::{Error, PossibilityTable, Result, Scalar, TNorm, Tolerance, UndirectedGraph, VarSet};

/// Largest graph the global property will enumerate separators for.
pub const GLOBAL_LIMIT: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MarkovProperty {
    Pairwise,
    Local,
    Global,
}

impl MarkovProperty {
    pub const ALL: [MarkovProperty; 3] = [MarkovProperty::Pairwise, MarkovProperty::Local, MarkovProperty::Global];

    pub fn letter(self) -> char {
        match self {
            MarkovProperty::Pairwise => 'P',
            MarkovProperty::Local => 'L',
            MarkovProperty::Global => 'G',
        }
    }
}

impl fmt::Display for MarkovProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            MarkovProperty::Pairwise => "pairwise",
            MarkovProperty::Local => "local",
            MarkovProperty::Global => "global",
        };
        f.write_str(name)
    }
}

impl std::str::FromStr for MarkovProperty {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "p" | "pairwise" => Ok(MarkovProperty::Pairwise),
            "l" | "local" => Ok(MarkovProperty::Local),
            "g" | "global" => Ok(MarkovProperty::Global),
            _ => Err(Error::Parse(format!("unknown Markov property `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MarkovReport {
    pub property: MarkovProperty,
    pub holds: bool,
    pub checked: Vec<StatementCheck>,
    /// Statements with an empty group; recorded, not counted as passes.
    pub skipped: Vec<Statement>,
    /// First failing statement, with its failing assignment.
    pub witness: Option<StatementCheck>,
}

impl MarkovReport {
    fn from_checks(property: MarkovProperty, checked: Vec<StatementCheck>, skipped: Vec<Statement>) -> Self {
        let witness = checked.iter().find(|c| !c.holds).cloned();
        MarkovReport { property, holds: witness.is_none(), checked, skipped, witness }
    }
}

struct Ctx<'a, V: Scalar> {
    graph: &'a UndirectedGraph,
    oracle: Oracle<'a, V>,
}

impl<'a, V: Scalar> Ctx<'a, V> {
    fn new(t: &'a PossibilityTable<V>, g: &'a UndirectedGraph, tn: &'a TNorm, tol: Tolerance) -> Result<Self> {
        tn.ensure_supported::<V>()?;
        g.ensure_aligned(t.schema())?;
        Ok(Ctx { graph: g, oracle: Oracle::new(t, tn, tol) })
    }

    fn pairwise(&mut self) -> MarkovReport {
        let all = self.graph.vertices();
        let mut checked = Vec::new();
        for i in all.iter() {
            for j in all.iter().filter(|&j| j > i && !self.graph.has_edge(i, j)) {
                let rest = all.without(i).without(j);
                checked.push(self.oracle.check(Sets::new(VarSet::singleton(i), VarSet::singleton(j), rest)));
            }
        }
        MarkovReport::from_checks(MarkovProperty::Pairwise, checked, Vec::new())
    }

    fn local(&mut self) -> MarkovReport {
        let all = self.graph.vertices();
        let (mut checked, mut skipped) = (Vec::new(), Vec::new());
        for i in all.iter() {
            let a = VarSet::singleton(i);
            let sets = Sets::new(a, all.difference(self.graph.closure(a)), self.graph.boundary(a));
            if sets.b.is_empty() {
                skipped.push(self.statement(sets));
            } else {
                checked.push(self.oracle.check(sets));
            }
        }
        MarkovReport::from_checks(MarkovProperty::Local, checked, skipped)
    }

    fn global(&mut self, exhaustive: bool) -> Result<MarkovReport> {
        let n = self.graph.len();
        if n > GLOBAL_LIMIT {
            return Err(Error::Limit { vars: n, limit: GLOBAL_LIMIT });
        }
        let triples = if exhaustive { self.separated_triples() } else { self.component_bipartitions() };
        let checked = triples.into_iter().map(|s| self.oracle.check(s)).collect();
        Ok(MarkovReport::from_checks(MarkovProperty::Global, checked, Vec::new()))
    }

    /// For each `S` (increasing mask), every split of the components of
    /// `V ∖ S` into two nonempty unions, with the first component in `A`.
    /// Decomposition makes these cover every separated triple.
    fn component_bipartitions(&self) -> Vec<Sets> {
        let mut out = Vec::new();
        for s in self.graph.vertices().subsets() {
            let comps = self.graph.components(s);
            let k = comps.len();
            if k < 2 {
                continue;
            }
            for mask in 0..(1u64 << (k - 1)) - 1 {
                let mut a = comps[0];
                let mut b = VarSet::EMPTY;
                for (c, comp) in comps.iter().enumerate().skip(1) {
                    if mask & (1 << (c - 1)) != 0 {
                        a = a.union(*comp);
                    } else {
                        b = b.union(*comp);
                    }
                }
                out.push(Sets::new(a, b, s));
            }
        }
        out
    }

    /// Every disjoint `(A, B, S)` with `A, B` nonempty and separated by `S`,
    /// up to swapping `A` and `B`.
    fn separated_triples(&self) -> Vec<Sets> {
        let all = self.graph.vertices();
        let mut out = Vec::new();
        for s in all.subsets() {
            let rest = all.difference(s);
            for a in rest.subsets().filter(|a| !a.is_empty()) {
                for b in rest.difference(a).subsets().filter(|b| !b.is_empty()) {
                    if a.first() < b.first() && self.graph.separates(a, b, s) {
                        out.push(Sets::new(a, b, s));
                    }
                }
            }
        }
        out
    }

    fn statement(&self, sets: Sets) -> Statement {
        let names = |s: VarSet| self.graph.names_of(s);
        Statement { a: names(sets.a), b: names(sets.b), given: names(sets.s) }
    }
}

/// `I(i, j | V ∖ {i, j})` for every non-adjacent pair.
pub fn pairwise<V: Scalar>(t: &PossibilityTable<V>, g: &UndirectedGraph, tn: &TNorm, tol: Tolerance) -> Result<MarkovReport> {
    Ok(Ctx::new(t, g, tn, tol)?.pairwise())
}

/// `I(i, V ∖ cl(i) | bd(i))` for every vertex.
pub fn local<V: Scalar>(t: &PossibilityTable<V>, g: &UndirectedGraph, tn: &TNorm, tol: Tolerance) -> Result<MarkovReport> {
    Ok(Ctx::new(t, g, tn, tol)?.local())
}

/// `I(A, B | S)` whenever `S` separates `A` from `B`.
///
/// The default enumerates component bipartitions per separator; with
/// `exhaustive` every separated triple is tested instead.
pub fn global<V: Scalar>(
    t: &PossibilityTable<V>,
    g: &UndirectedGraph,
    tn: &TNorm,
    tol: Tolerance,
    exhaustive: bool,
) -> Result<MarkovReport> {
    Ctx::new(t, g, tn, tol)?.global(exhaustive)
}

pub fn check<V: Scalar>(
    property: MarkovProperty,
    t: &PossibilityTable<V>,
    g: &UndirectedGraph,
    tn: &TNorm,
    tol: Tolerance,
    exhaustive: bool,
) -> Result<MarkovReport> {
    let mut ctx = Ctx::new(t, g, tn, tol)?;
    match property {
        MarkovProperty::Pairwise => Ok(ctx.pairwise()),
        MarkovProperty::Local => Ok(ctx.local()),
        MarkovProperty::Global => ctx.global(exhaustive),
    }
}

/// All three properties, plus the factorization verdict when requested.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainReport {
    pub factorization: Option<Verdict>,
    pub global: MarkovReport,
    pub local: MarkovReport,
    pub pairwise: MarkovReport,
}

impl ChainReport {
    pub fn pattern(&self) -> String {
        let mark = |b: bool| if b { "true" } else { "false" };
        let f = match &self.factorization {
            Some(v) => format!("F={} ", v.label()),
            None => String::new(),
        };
        format!(
            "{f}G={} L={} P={}",
            mark(self.global.holds),
            mark(self.local.holds),
            mark(self.pairwise.holds)
        )
    }
}

/// Runs P, L and G (and F if `with_factorization`), erroring with
/// [`Error::InternalInconsistency`] if the results break `G ⟹ L ⟹ P` or,
/// for Archimedean t-norms, `F ⟹ G`.
pub fn chain_report<V: Scalar>(
    t: &PossibilityTable<V>,
    g: &UndirectedGraph,
    tn: &TNorm,
    tol: Tolerance,
    with_factorization: bool,
) -> Result<ChainReport> {
    let mut ctx = Ctx::new(t, g, tn, tol)?;
    let report = ChainReport {
        pairwise: ctx.pairwise(),
        local: ctx.local(),
        global: ctx.global(false)?,
        factorization: if with_factorization {
            Some(factorization::factorizes(&t.to_f64(), g, tn, tol)?)
        } else {
            None
        },
    };
    let f_yes = matches!(report.factorization, Some(Verdict::Yes { .. }));
    let problem = if report.global.holds && !report.local.holds {
        Some("global holds but local fails")
    } else if report.local.holds && !report.pairwise.holds {
        Some("local holds but pairwise fails")
    } else if f_yes && tn.is_archimedean() && !report.global.holds {
        Some("factorization found but global fails")
    } else {
        None
    };
    match problem {
        Some(p) => Err(Error::InternalInconsistency(format!("{p} ({})", report.pattern()))),
        None => Ok(report),
    }
}

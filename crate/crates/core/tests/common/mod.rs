//! Brute-force oracles and a seeded random corpus shared by the integration
//! tests. Nothing here calls into the library's algorithms: tables are kept
//! as plain row-major arrays, marginals are maxima over full enumeration,
//! separation is a breadth-first search and t-norms are closed forms.
#![allow(dead_code)]

use std::collections::BTreeSet;

use posscheck::{PossibilityTable, Schema, TNorm, Tolerance, UndirectedGraph, Variable};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const EPS: f64 = 1e-9;
pub const NAMES: [&str; 6] = ["A", "B", "C", "D", "E", "F"];

// ---------------------------------------------------------------- t-norms

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Base {
    Godel,
    Product,
    Lukasiewicz,
}

/// Closed-form t-norm, optionally transformed by `x ↦ x^p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OTNorm {
    pub base: Base,
    pub p: f64,
}

impl OTNorm {
    pub const GODEL: OTNorm = OTNorm { base: Base::Godel, p: 1.0 };
    pub const PRODUCT: OTNorm = OTNorm { base: Base::Product, p: 1.0 };
    pub const LUKASIEWICZ: OTNorm = OTNorm { base: Base::Lukasiewicz, p: 1.0 };
    pub const BASES: [OTNorm; 3] = [Self::GODEL, Self::PRODUCT, Self::LUKASIEWICZ];
    /// Every specification used by the random suites.
    pub const SPECS: [OTNorm; 5] = [
        Self::GODEL,
        Self::PRODUCT,
        Self::LUKASIEWICZ,
        OTNorm { base: Base::Product, p: 2.0 },
        OTNorm { base: Base::Lukasiewicz, p: 2.0 },
    ];

    pub fn spec(self) -> String {
        let b = match self.base {
            Base::Godel => "godel",
            Base::Product => "product",
            Base::Lukasiewicz => "lukasiewicz",
        };
        if self.p == 1.0 {
            b.to_string()
        } else {
            format!("{b}@{}", self.p)
        }
    }

    pub fn library(self) -> TNorm {
        self.spec().parse().unwrap()
    }

    pub fn archimedean(self) -> bool {
        self.base != Base::Godel
    }

    pub fn fwd(self, x: f64) -> f64 {
        x.powf(self.p)
    }

    pub fn inv(self, x: f64) -> f64 {
        x.powf(1.0 / self.p)
    }

    pub fn t(self, a: f64, b: f64) -> f64 {
        match self.base {
            Base::Godel => a.min(b),
            Base::Product => self.inv(self.fwd(a) * self.fwd(b)),
            Base::Lukasiewicz => self.inv((self.fwd(a) + self.fwd(b) - 1.0).max(0.0)),
        }
    }

    /// `sup{z : T(z, x) <= y}`.
    pub fn residual(self, y: f64, x: f64) -> f64 {
        if x <= y {
            return 1.0;
        }
        match self.base {
            Base::Godel => y,
            Base::Product => self.inv(self.fwd(y) / self.fwd(x)),
            Base::Lukasiewicz => self.inv(1.0 - self.fwd(x) + self.fwd(y)),
        }
    }

    pub fn fold(self, xs: impl IntoIterator<Item = f64>) -> f64 {
        xs.into_iter().fold(1.0, |acc, x| self.t(acc, x))
    }
}

pub fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= EPS
}

// ---------------------------------------------------------------- tables

/// Row-major table: the last variable varies fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct OTable {
    pub sizes: Vec<usize>,
    pub values: Vec<f64>,
}

pub fn assignments(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &s in sizes {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..s).map(move |v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    out
}

impl OTable {
    pub fn n(&self) -> usize {
        self.sizes.len()
    }

    pub fn index(&self, x: &[usize]) -> usize {
        x.iter().zip(&self.sizes).fold(0, |acc, (&v, &s)| acc * s + v)
    }

    pub fn get(&self, x: &[usize]) -> f64 {
        self.values[self.index(x)]
    }

    pub fn cells(&self) -> Vec<Vec<usize>> {
        assignments(&self.sizes)
    }

    /// `max{π(y) : y agrees with x on keep}`; 1 for an empty `keep`.
    pub fn marginal(&self, keep: &[usize], x: &[usize]) -> f64 {
        self.cells()
            .iter()
            .filter(|y| keep.iter().all(|&k| y[k] == x[k]))
            .map(|y| self.get(y))
            .fold(0.0, f64::max)
    }

    pub fn names(&self) -> Vec<&'static str> {
        NAMES[..self.n()].to_vec()
    }

    pub fn schema(&self) -> Schema {
        let vars = self.names().iter().zip(&self.sizes).map(|(n, &s)| Variable::indexed(*n, s)).collect();
        Schema::new(vars).unwrap()
    }

    /// The library table, laid out first-variable-fastest.
    pub fn library(&self) -> PossibilityTable {
        let mut colex = vec![0.0; self.values.len()];
        for x in self.cells() {
            let idx = x.iter().zip(&self.sizes).rev().fold(0, |acc, (&v, &s)| acc * s + v);
            colex[idx] = self.get(&x);
        }
        PossibilityTable::from_values(self.schema(), colex, Tolerance::DEFAULT).unwrap()
    }

    pub fn is_positive(&self) -> bool {
        self.values.iter().all(|&v| v > 0.0)
    }
}

pub fn labels(x: &[usize]) -> Vec<String> {
    x.iter().map(|v| v.to_string()).collect()
}

// ---------------------------------------------------------------- independence

/// First failing assignment (row-major) of `I(a, b | s)`, or `None` if it holds.
pub fn independence_failure(t: &OTable, tn: OTNorm, a: &[usize], b: &[usize], s: &[usize]) -> Option<Vec<usize>> {
    let cat = |x: &[usize], y: &[usize]| -> Vec<usize> { x.iter().chain(y).copied().collect() };
    let (as_, bs, abs) = (cat(a, s), cat(b, s), cat(&cat(a, b), s));
    for x in t.cells() {
        let ps = t.marginal(s, &x);
        let cond = tn.residual(t.marginal(&as_, &x), ps);
        let lhs = tn.t(cond, t.marginal(&bs, &x));
        if !close(lhs, t.marginal(&abs, &x)) {
            return Some(x);
        }
    }
    None
}

pub fn independent(t: &OTable, tn: OTNorm, a: &[usize], b: &[usize], s: &[usize]) -> bool {
    a.is_empty() || b.is_empty() || independence_failure(t, tn, a, b, s).is_none()
}

// ---------------------------------------------------------------- graphs

#[derive(Debug, Clone, PartialEq)]
pub struct OGraph {
    pub n: usize,
    pub adj: Vec<Vec<bool>>,
}

impl OGraph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut adj = vec![vec![false; n]; n];
        for &(i, j) in edges {
            adj[i][j] = true;
            adj[j][i] = true;
        }
        OGraph { n, adj }
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n).flat_map(|i| (i + 1..self.n).map(move |j| (i, j))).filter(|&(i, j)| self.adj[i][j]).collect()
    }

    pub fn library(&self) -> UndirectedGraph {
        let names = &NAMES[..self.n];
        let edges: Vec<(&str, &str)> = self.edges().iter().map(|&(i, j)| (names[i], names[j])).collect();
        UndirectedGraph::from_edges(names, &edges).unwrap()
    }

    pub fn neighbours(&self, i: usize) -> Vec<usize> {
        (0..self.n).filter(|&j| self.adj[i][j]).collect()
    }

    /// Every path from `a` to `b` meets `s`.
    pub fn separates(&self, a: &[usize], b: &[usize], s: &[usize]) -> bool {
        let mut seen: BTreeSet<usize> = a.iter().copied().collect();
        let mut queue: Vec<usize> = a.to_vec();
        while let Some(v) = queue.pop() {
            if b.contains(&v) {
                return false;
            }
            for w in self.neighbours(v) {
                if !s.contains(&w) && seen.insert(w) {
                    queue.push(w);
                }
            }
        }
        true
    }

    fn complete(&self, set: &[usize]) -> bool {
        set.iter().all(|&i| set.iter().all(|&j| i == j || self.adj[i][j]))
    }

    /// Maximal complete subsets by exhaustive enumeration.
    pub fn cliques(&self) -> Vec<Vec<usize>> {
        let subsets: Vec<Vec<usize>> = (1u32..1 << self.n)
            .map(|m| (0..self.n).filter(|&i| m >> i & 1 == 1).collect::<Vec<_>>())
            .filter(|s| self.complete(s))
            .collect();
        subsets
            .iter()
            .filter(|s| !subsets.iter().any(|t| t.len() > s.len() && s.iter().all(|x| t.contains(x))))
            .cloned()
            .collect()
    }
}

fn members(mask: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|&i| mask >> i & 1 == 1).collect()
}

pub fn pairwise(t: &OTable, g: &OGraph, tn: OTNorm) -> bool {
    let n = t.n();
    (0..n).all(|i| {
        (i + 1..n).all(|j| {
            g.adj[i][j] || {
                let rest: Vec<usize> = (0..n).filter(|&k| k != i && k != j).collect();
                independent(t, tn, &[i], &[j], &rest)
            }
        })
    })
}

pub fn local(t: &OTable, g: &OGraph, tn: OTNorm) -> bool {
    let n = t.n();
    (0..n).all(|i| {
        let nb = g.neighbours(i);
        let rest: Vec<usize> = (0..n).filter(|&k| k != i && !nb.contains(&k)).collect();
        independent(t, tn, &[i], &rest, &nb)
    })
}

/// Every separated triple of disjoint sets (A, B nonempty, S possibly empty).
pub fn global(t: &OTable, g: &OGraph, tn: OTNorm) -> bool {
    let n = t.n();
    let full = (1u32 << n) - 1;
    for am in 1..=full {
        for bm in 1..=full {
            if am & bm != 0 || am > bm {
                continue;
            }
            let rest = full & !am & !bm;
            let mut sm = rest;
            loop {
                let (a, b, s) = (members(am, n), members(bm, n), members(sm, n));
                if g.separates(&a, &b, &s) && !independent(t, tn, &a, &b, &s) {
                    return false;
                }
                if sm == 0 {
                    break;
                }
                sm = (sm - 1) & rest;
            }
        }
    }
    true
}

// ---------------------------------------------------------------- factorization

/// Combination of clique factors, each a row-major table over its clique.
pub fn combine(sizes: &[usize], cliques: &[Vec<usize>], factors: &[Vec<f64>], tn: OTNorm) -> OTable {
    let values = assignments(sizes)
        .iter()
        .map(|x| {
            tn.fold(cliques.iter().zip(factors).map(|(c, f)| {
                let idx = c.iter().fold(0, |acc, &v| acc * sizes[v] + x[v]);
                f[idx]
            }))
        })
        .collect();
    OTable { sizes: sizes.to_vec(), values }
}

// ---------------------------------------------------------------- corpus

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A normal table with up to `max_vars` variables of domain size 2 or 3,
/// values on the 0.25 grid; strictly positive when `positive`.
pub fn grid_table(rng: &mut impl Rng, min_vars: usize, max_vars: usize, positive: bool) -> OTable {
    let n = rng.random_range(min_vars..=max_vars);
    let sizes: Vec<usize> = (0..n).map(|_| rng.random_range(2..=3)).collect();
    let cells: usize = sizes.iter().product();
    let lo = if positive { 1 } else { 0 };
    let mut values: Vec<f64> = (0..cells).map(|_| rng.random_range(lo..=4) as f64 * 0.25).collect();
    let peak = rng.random_range(0..cells);
    values[peak] = 1.0;
    OTable { sizes, values }
}

pub fn random_graph(rng: &mut impl Rng, n: usize) -> OGraph {
    let density = rng.random_range(0.2..0.8);
    let edges: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|_| rng.random_bool(density)).collect();
    OGraph::new(n, &edges)
}

/// The shared 500-table corpus: even entries may contain zeros, odd entries
/// are strictly positive.
pub fn corpus() -> Vec<OTable> {
    let mut r = rng(0x5eed_0001);
    (0..500).map(|i| grid_table(&mut r, 2, 4, i % 2 == 1)).collect()
}

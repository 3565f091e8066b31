//! Undirected graphs over named vertices.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::{Error, Result, Schema, VarSet};

/// A simple undirected graph with at most 64 vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UndirectedGraph {
    names: Vec<String>,
    adj: Vec<VarSet>,
}

/// JSON form of a graph: an edge list plus optional isolated vertices.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSpec {
    #[serde(default)]
    pub edges: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub isolated: Vec<String>,
}

impl UndirectedGraph {
    /// Graph on `names` with no edges.
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        if names.len() > VarSet::CAPACITY {
            return Err(Error::graph(format!("{} vertices exceed the limit of {}", names.len(), VarSet::CAPACITY)));
        }
        let unique: BTreeSet<&str> = names.iter().map(String::as_str).collect();
        if unique.len() != names.len() {
            return Err(Error::graph("duplicate vertex name"));
        }
        let n = names.len();
        Ok(UndirectedGraph { names, adj: vec![VarSet::EMPTY; n] })
    }

    pub fn from_edges<S: AsRef<str>>(names: &[S], edges: &[(S, S)]) -> Result<Self> {
        let mut g = Self::new(names)?;
        for (a, b) in edges {
            g.add_edge(a.as_ref(), b.as_ref())?;
        }
        Ok(g)
    }

    /// Builds a graph over the schema's variables, in schema order.
    pub fn from_spec(spec: &GraphSpec, schema: &Schema) -> Result<Self> {
        let mut g = Self::new(&schema.names())?;
        for v in &spec.isolated {
            g.index(v)?;
        }
        for (a, b) in &spec.edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    pub fn to_spec(&self) -> GraphSpec {
        let mut edges = Vec::new();
        let mut isolated = Vec::new();
        for i in 0..self.len() {
            if self.adj[i].is_empty() {
                isolated.push(self.names[i].clone());
            }
            for j in self.adj[i].iter().filter(|&j| j > i) {
                edges.push((self.names[i].clone(), self.names[j].clone()));
            }
        }
        GraphSpec { edges, isolated }
    }

    pub fn add_edge(&mut self, a: &str, b: &str) -> Result<()> {
        let (i, j) = (self.index(a)?, self.index(b)?);
        if i == j {
            return Err(Error::graph(format!("self-loop on `{a}`")));
        }
        self.adj[i] = self.adj[i].with(j);
        self.adj[j] = self.adj[j].with(i);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn vertices(&self) -> VarSet {
        VarSet::full(self.len())
    }

    pub fn index(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::graph(format!("unknown vertex `{name}`")))
    }

    pub fn set_of<S: AsRef<str>>(&self, names: &[S]) -> Result<VarSet> {
        names.iter().try_fold(VarSet::EMPTY, |s, n| Ok(s.with(self.index(n.as_ref())?)))
    }

    pub fn names_of(&self, set: VarSet) -> Vec<String> {
        set.iter().map(|i| self.names[i].clone()).collect()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i].contains(j)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    pub fn neighbours(&self, i: usize) -> VarSet {
        self.adj[i]
    }

    /// `bd(A)`: vertices outside `a` adjacent to some member of `a`.
    pub fn boundary(&self, a: VarSet) -> VarSet {
        a.iter().fold(VarSet::EMPTY, |acc, v| acc.union(self.adj[v])).difference(a)
    }

    /// `cl(A) = A ∪ bd(A)`.
    pub fn closure(&self, a: VarSet) -> VarSet {
        a.union(self.boundary(a))
    }

    /// Checks that the vertex set equals the schema's variables, in the same
    /// order.
    pub fn ensure_aligned(&self, schema: &Schema) -> Result<()> {
        let names = schema.names();
        if names.len() != self.names.len() || names.iter().zip(&self.names).any(|(a, b)| a != b) {
            return Err(Error::graph(format!(
                "graph vertices [{}] do not match the table variables [{}]",
                self.names.join(", "),
                names.join(", ")
            )));
        }
        Ok(())
    }

    /// Maximal cliques, each sorted ascending, ordered by their member lists.
    pub fn cliques(&self) -> Vec<VarSet> {
        let mut out = Vec::new();
        self.bron_kerbosch(VarSet::EMPTY, self.vertices(), VarSet::EMPTY, &mut out);
        out.sort_by_key(|c| c.iter().collect::<Vec<_>>());
        out
    }

    fn bron_kerbosch(&self, r: VarSet, p: VarSet, x: VarSet, out: &mut Vec<VarSet>) {
        if p.is_empty() {
            if x.is_empty() {
                out.push(r);
            }
            return;
        }
        let pivot = p.union(x).iter().max_by_key(|&u| self.adj[u].intersection(p).len()).unwrap();
        let (mut p, mut x) = (p, x);
        for v in p.difference(self.adj[pivot]).iter() {
            self.bron_kerbosch(r.with(v), p.intersection(self.adj[v]), x.intersection(self.adj[v]), out);
            p = p.without(v);
            x = x.with(v);
        }
    }

    pub fn is_complete(&self) -> bool {
        (0..self.len()).all(|i| self.closure(VarSet::singleton(i)) == self.vertices())
    }

    /// Connected components of the graph with `removed` deleted, ordered by
    /// smallest member.
    pub fn components(&self, removed: VarSet) -> Vec<VarSet> {
        let mut left = self.vertices().difference(removed);
        let mut out = Vec::new();
        while let Some(start) = left.first() {
            let mut comp = VarSet::singleton(start);
            let mut frontier = comp;
            while !frontier.is_empty() {
                let next = frontier
                    .iter()
                    .fold(VarSet::EMPTY, |acc, v| acc.union(self.adj[v]))
                    .intersection(left)
                    .difference(comp);
                comp = comp.union(next);
                frontier = next;
            }
            left = left.difference(comp);
            out.push(comp);
        }
        out
    }

    /// Whether every path between `a` and `b` meets `s`.
    pub fn separates(&self, a: VarSet, b: VarSet, s: VarSet) -> bool {
        self.components(s)
            .iter()
            .all(|c| c.is_disjoint(a) || c.is_disjoint(b))
    }

    pub fn separates_names<S: AsRef<str>>(&self, a: &[S], b: &[S], s: &[S]) -> Result<bool> {
        Ok(self.separates(self.set_of(a)?, self.set_of(b)?, self.set_of(s)?))
    }

    pub fn clique_names(&self) -> Vec<Vec<String>> {
        self.cliques().into_iter().map(|c| self.names_of(c)).collect()
    }
}

//! Conditional independence, Markov properties and factorization of finite
//! possibility distributions, parameterized by a continuous t-norm.
//!
//! The crate is organised bottom-up:
//!
//! - [`tnorm`]: Gödel, product and Łukasiewicz t-norms, their power
//!   transforms, n-ary folds and residuals.
//! - [`possibility`]: dense possibility tables over finite product spaces,
//!   marginalization, residual conditioning and almost-everywhere equality.
//! - [`independence`]: conditional T-independence and the (semi)graphoid
//!   axioms A1–A5.
//! - [`graphs`]: undirected graphs, boundaries, cliques and separation.
//! - [`markov`]: pairwise, local and global Markov properties.
//! - [`factorization`]: verification and construction of clique
//!   factorizations.
//! - [`model`], [`corpus`], [`report`] and [`cli`]: the JSON model format,
//!   the built-in example corpus and the `posscheck` command line front end.
//!
//! All numeric routines are generic over [`Scalar`], implemented for `f64`
//! (compared within a [`Tolerance`]) and for exact [`Rational`] values.

pub mod cli;
pub mod corpus;
mod error;
pub mod factorization;
pub mod graphs;
pub mod independence;
pub mod markov;
pub mod model;
pub mod possibility;
pub mod report;
mod scalar;
pub mod tnorm;
mod varset;

pub use error::{Error, Result};
pub use scalar::{parse_rational, Rational, Scalar, Tolerance};
pub use varset::VarSet;

pub use factorization::{Factor, Factorization, Verdict};
pub use graphs::UndirectedGraph;
pub use independence::{Axiom, AxiomReport, Statement};
pub use markov::{MarkovProperty, MarkovReport};
pub use possibility::{Assignment, ConditionalTable, PossibilityTable, Schema, Variable};
pub use tnorm::{Automorphism, Base, Class, TNorm};

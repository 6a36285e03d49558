//! Exact computation of balanced probability measures on finite connected
//! graphs.
//!
//! A probability measure `mu` on the vertices of a graph is *balanced* when
//! its transport cost `T(v) = sum_u d(u, v) mu(u)` attains its global maximum
//! at every vertex of its support. This crate computes, enumerates, extrapolates
//! and decomposes such measures using exact rational arithmetic throughout.
//!
//! Module map:
//!
//! * [`graph`]: simple graphs, generators, joins/complements/products and
//!   exact BFS distance matrices.
//! * [`measure`]: measures, transport costs, support/max-set pairs,
//!   balancedness and compatibility.
//! * [`extrapolation`]: the line family through two balanced measures and its
//!   exact balanced interval.
//! * [`enumeration`]: exhaustive catalog of basic balanced measures and the
//!   compatibility graph.
//! * [`decomposition`]: climbing to basic measures, decomposition into
//!   compatible basic measures, convex hull membership.
//! * [`constructions`]: the join family, the 14-vertex extrapolation example,
//!   `C4 x C4` and the compatibility-embedding graphs `G_H`.
//! * [`certify`]: the named suite of reference examples used by the CLI.

#![forbid(unsafe_code)]

pub mod certify;
pub mod constructions;
pub mod decomposition;
pub mod enumeration;
pub mod error;
pub mod extrapolation;
pub mod graph;
pub mod linalg;
pub mod lp;
pub mod measure;
pub mod rational;
pub mod vertex_set;

pub use error::{Error, Result};
pub use graph::{DistanceMatrix, Graph, SimpleGraph};
pub use measure::{Measure, SupportMaxPair};
pub use rational::Rational;
pub use vertex_set::VertexSet;

//! Exact and sampled statistics of the number of edges induced by a random
//! vertex subset of a uniform hypergraph, together with the slice coupling,
//! multilinear polynomial tools and 3-graph structure recognition built on it.

pub mod analysis;
pub mod combin;
pub mod distribution;
pub mod error;
pub mod exec;
pub mod hypergraph;
pub mod matching;
pub mod poly;
pub mod ramsey;
pub mod rng;
pub mod slice;
pub mod structure;

pub use error::{Error, Result};
pub use exec::{with_exec, Exec};
pub use hypergraph::{complete_bipartite, gabm, Hypergraph, RandomModel, VertexSet};
pub use distribution::{Budget, DistributionTable};
pub use poly::MultilinearPolynomial;

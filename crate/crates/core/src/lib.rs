//! H-percolation (graph bootstrap percolation) on dense graphs.
//!
//! Starting from a graph `G`, every missing edge whose addition creates a new
//! copy of a fixed template `H` is added, in parallel rounds, until nothing
//! changes. The crate computes these closures exactly, analyses templates for
//! balancedness and the exponents `λ` and `λ*`, estimates critical edge
//! probabilities by Monte Carlo, and runs the random-template experiments.

mod bits;

pub mod balance;
pub mod closure;
pub mod edge_list;
pub mod experiments;
pub mod fraction;
pub mod graph;
pub mod seed;
pub mod stats;
pub mod template;
pub mod threshold;

pub use balance::{BalanceError, BalanceReport, DensityProfile};
pub use closure::{closure, edge_completes_copy, evolve_round, percolates, ClosureEngine, ClosureError, ClosureResult, Strategy};
pub use edge_list::{parse_edge_list, serialize_edge_list, ParseError};
pub use fraction::Fraction;
pub use graph::{Graph, GraphError, PairUniforms};
pub use seed::{Seed, RNG_NAME};
pub use template::{Template, TemplateError};

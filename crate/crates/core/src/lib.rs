//! Clique-to-tensor reductions for deciding self-concordance at a point.
//!
//! The crate turns a graph into a cubic (or quartic) polynomial whose
//! self-concordance at the origin is equivalent to the graph having no clique
//! of a given size, maximizes homogeneous forms over spheres and quadratic
//! forms over simplices, and checks self-concordance with a sound
//! three-valued verdict backed by exact rational certificates.
//!
//! Numerical routines are generic over the scalar ([`Scalar`], [`optimize::Real`]);
//! the aliases below fix the common choices.

pub mod concordance;
pub mod error;
pub mod format;
pub mod graph;
pub mod optimize;
pub mod reduction;
pub mod scalar;
pub mod tensor;
pub mod verify;

pub use concordance::{
    check_sc, check_sc2, decide_clique_via_sc, hessian_psd, sigma_opt_bounds, violates,
    CheckOptions, Certificate, Mode, SigmaBounds, Status, Verdict,
};
pub use error::{Error, Result};
pub use graph::{enumerate_graphs, parse_dimacs, parse_edge_list, parse_graph, Graph};
pub use optimize::{OptConfig, OptReport};
pub use reduction::{ConcordanceInstance, InstanceKind};
pub use scalar::{Rational, Scalar};
pub use tensor::{SymTensor, Vector};

pub type Vector64 = Vector<f64>;
pub type Vector32 = Vector<f32>;
pub type RationalVector = Vector<Rational>;
pub type OptReport64 = OptReport<f64>;
pub type OptReport32 = OptReport<f32>;

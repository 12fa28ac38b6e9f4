//! Exact Green functions, admissible measures and the invariant `e(G, D)` on
//! metrized graphs, with closed forms for one-point sums and chains, nodal
//! fiber configurations, and slope / Bogomolov bound arithmetic.
//!
//! All scalars are exact rationals except in [`oracle`], which is a
//! floating-point discretisation used for cross-checking.

pub mod admissible;
pub mod bounds;
pub mod compose;
pub mod error;
pub mod fibration;
pub mod graph;
pub mod linalg;
pub mod oracle;
pub mod rational;
pub mod resistance;
pub mod sample;

pub use admissible::{
    admissible_measure, canonical_measure, e_invariant, e_via_basepoint, AdmissibleMeasure,
    GreenSystem,
};
pub use error::{Error, Result};
pub use fibration::{FiberConfiguration, FiberReport, FiberWarning, NodeType};
pub use graph::{one_point_sum, EdgeId, GraphPoint, MetrizedGraph, RDivisor, Relocation, VertexId};
pub use rational::Rational;
pub use resistance::{effective_resistance, resistance_in_deleted_edge, DeletedEdgeResistance};

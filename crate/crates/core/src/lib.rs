//! Lattice-periodic Steiner networks in two and three dimensions.
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod families;
pub mod graph;
pub mod homotopy;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod network;
pub mod optimize;
pub mod scalar;
pub mod symmetric;

pub use error::{Error, Result};
pub use families::FamilyKind;
pub use graph::{validate_quotient, Incidence, MultiEdge, QuotientEdge, QuotientGraph, ValidationReport};
pub use homotopy::{homotopy_length_profile, homotopy_network, HomotopyParams, ProfilePoint};
pub use io::{export_obj, report_ratio, NetworkDocument, RatioReport, ToolConfig};
pub use lattice::{lattice_volume, Lattice};
pub use network::{
    balancing_residual, lift_tile, network_length, star_balancing_residual, CellRange, NetworkMetrics, PeriodicNetwork,
    Segment,
};
pub use optimize::{OptimizationReport, SolverStatus};
pub use scalar::Scalar;

pub type Lattice64 = Lattice<f64>;
pub type Lattice32 = Lattice<f32>;
pub type Network64 = PeriodicNetwork<f64>;
pub type Network32 = PeriodicNetwork<f32>;

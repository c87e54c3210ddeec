//! Signed sums of planar unit vectors with certified norm bounds.
//!
//! For any norm on the plane and any odd number of unit vectors, there is a
//! choice of signs making the signed sum have norm at most one. This crate
//! constructs such signs, together with an ordering whose odd prefix sums also
//! stay within one, and an online signer whose odd prefix sums stay within two.
//! Every result comes with a [`BalanceCertificate`] or [`StreamOutcome`] that
//! can be re-checked independently, and the [`oracle`] module provides
//! exhaustive search to compare against on small instances.
//!
//! ```
//! use signbal::{alternating_balance, Norm, Vec2};
//!
//! let norm = Norm::Max;
//! let vectors = [Vec2::new(1.0, 0.5), Vec2::new(-1.0, 0.5), Vec2::new(0.0, 1.0)];
//! let cert = alternating_balance(&norm, &vectors).unwrap();
//! assert!(norm.eval(cert.signed_sum) <= 1.0);
//! assert!(cert.is_verified());
//! ```

pub mod balancer;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod norms;
pub mod oracle;
pub mod streaming;
pub mod tolerance;

pub use balancer::{
    alternating_balance, alternating_balance_with, balance_three, boundary_order, canonical_flip,
    edge_vectors, odd_prefix_points, BalanceCertificate, BalanceOptions, BoundaryOrdering,
};
pub use error::{Error, Result};
pub use geometry::{Sign, Vec2};
pub use norms::{hull_of_plus_minus, polygon_norm, Norm, SymmetricPolygon};
pub use oracle::{OracleReport, Quantity};
pub use streaming::{decompose, stream_run, stream_run_with, StreamOptions, StreamOutcome, StreamState};
pub use tolerance::Tolerances;

/// Version string recorded in emitted files.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

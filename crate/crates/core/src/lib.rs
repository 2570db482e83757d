//! Exact spectral moments of sparse random block matrices.
//!
//! The ensemble is an `N d x N d` symmetric matrix built from `d x d` blocks:
//! each pair of block rows is joined with probability `Z/N` by a random rank-one
//! projector. Two variants are covered, the adjacency block matrix and the
//! block Laplacian. Moments in the `N -> infinity` limit are computed exactly
//! as polynomials in `t = Z/d` with rational-function-of-`d` coefficients by
//! enumerating closed walks on trees and averaging the random projectors.
//!
//! Modules:
//! - [`polyalg`]: exact rationals, polynomials, rational functions of `d`.
//! - [`walks`]: tree-walk enumeration and the crossing (`abab`) predicates.
//! - [`averager`]: projector averaging and assembly of full moments.
//! - [`limits`]: `d -> infinity` laws, series, resolvents and densities.
//! - [`montecarlo`]: sampling of the actual random matrices.
//! - [`tables`]: reference moment tables in `c_m` notation.
//! - [`verify`]: the cross-checks behind the acceptance suite and `verify` command.

pub mod averager;
pub mod error;
pub mod limits;
pub mod model;
pub mod montecarlo;
pub mod polyalg;
pub mod tables;
pub mod verify;
pub mod walks;

pub use error::{Error, Result};
pub use model::Model;

/// Sources of the walk enumerator and the averager. Caches of computed
/// moments key on a hash of these so that algorithm changes invalidate them.
pub const ENGINE_SOURCES: [&str; 5] = [
    include_str!("walks.rs"),
    include_str!("averager/mod.rs"),
    include_str!("averager/sp.rs"),
    include_str!("averager/factored.rs"),
    include_str!("polyalg/ratfn.rs"),
];

//! Boundary jets, Gauss–Codazzi integration and a priori estimate checks for
//! surfaces whose Gauss curvature vanishes to first order on the boundary,
//! plus a solver for the model degenerate operator `t u_tt + a u_t + u_ss = f`.

// NaN-rejecting guards are written as `!(x > 0.0)`; index loops mirror the formulas.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod analysis;
pub mod chart;
pub mod codazzi;
pub mod degenerate;
mod error;
pub mod fixtures;
pub mod io;
pub mod jet;
pub mod metric;
pub mod quadrature;
pub mod spectral;
pub mod stencil;
pub mod taylor;

pub use chart::{GeodesicChart, Grading};
pub use error::{Error, Result};

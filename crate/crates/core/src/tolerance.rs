//! Numerical thresholds for float mode. Exact mode never consults these.

/// Singular values at or below `RANK_EPS · σ_max` count as zero.
pub const RANK_EPS: f64 = 1e-10;

/// Two subspaces are equal when the sine of their largest principal angle is
/// at most this.
pub const ANGLE_EPS: f64 = 1e-7;

/// Degenerate-edge threshold, relative to the bounding-box diagonal.
pub const GEOM_EPS_REL: f64 = 1e-9;

/// Relative residual accepted for solves and commuting checks.
pub const RESIDUAL_REL: f64 = 1e-9;

/// Accepted `‖UΣVᵀ − M‖ / (‖M‖ · max(rows, cols))` for a computed SVD.
pub const RECONSTRUCTION_REL: f64 = 1e-13;

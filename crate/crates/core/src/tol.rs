//! Default numerical tolerances.
//!
//! Defects are Frobenius or operator norms. Absolute thresholds are applied
//! to unit-scale quantities and multiplied by `max(1, scale)` otherwise.

/// Hermitian defect `|M - M^*|`.
pub const HERM: f64 = 1e-8;
/// Slack on operator-norm preconditions.
pub const NORM: f64 = 1e-8;
/// Most negative eigenvalue clamped to zero in square roots.
pub const PSD: f64 = 1e-8;
/// Relative threshold for tight / Parseval classification and g-ONB defects.
pub const CLASS: f64 = 1e-8;
/// Absolute eigenvalue threshold separating rank deficiency from roundoff.
pub const RANK: f64 = 1e-10;
/// Duality defect `|sum D_i^* L_i - I|_F`.
pub const DUAL: f64 = 1e-8;
/// Reconstruction residual of decompositions, relative to `1 + |T|_F`.
pub const RECON: f64 = 1e-8;
/// Inversion residual `|M M^-1 - I|_F`.
pub const INV: f64 = 1e-8;
/// Commutation defect, relative to `1 + |S| |C|`.
pub const COMM: f64 = 1e-8;
/// Proportionality residual in weight extraction, relative.
pub const EIG: f64 = 1e-8;
/// Unitarity / isometry defect accepted when certifying constructed factors.
pub const UNITARY: f64 = 1e-8;
/// Hard cap on Neumann series length.
pub const MAX_SERIES_TERMS: usize = 100_000;

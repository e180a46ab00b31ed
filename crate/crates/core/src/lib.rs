//! Finite-dimensional g-frame toolkit.
//!
//! A g-frame is a family of operators `L_i : H -> H_i` with
//! `A |f|^2 <= sum |L_i f|^2 <= B |f|^2`. This crate computes optimal bounds,
//! classifications and canonical duals, decomposes g-frames into
//! g-orthonormal bases and Parseval g-frames, builds and inverts g-Bessel
//! multipliers with certified inverse-norm brackets, and checks the
//! controlled and weighted g-frame equivalences.
//!
//! Everything is generic over the real scalar `T: Real` (`f32` or `f64`);
//! the `*64` aliases below fix `T = f64`.

pub mod cli;
pub mod controlled;
pub mod corpus;
pub mod decompose;
pub mod error;
pub mod frame;
pub mod generate;
pub mod io;
pub mod kernel;
pub mod multiplier;
pub mod random;
pub mod report;
pub mod scalar;
pub mod selftest;
pub mod tol;
pub mod weighted;

pub use error::{Error, Result};
pub use frame::{
    canonical_dual, classify, frame_bounds, frame_operator, gframe_from_vector_frame, induced_frame, verify_duality,
    Classification, ClassificationReport, FrameBounds, GFrame, VectorFrame,
};
pub use kernel::{
    polar_decompose, psd_sqrt, spectral_range, unitary_pair_from_contraction, unitary_triple_from_small_norm,
    PolarParts,
};
pub use scalar::{CMatrix, CVector, Real};

pub type CMatrix64 = CMatrix<f64>;
pub type CMatrix32 = CMatrix<f32>;
pub type GFrame64 = GFrame<f64>;
pub type GFrame32 = GFrame<f32>;
pub type FrameBounds64 = FrameBounds<f64>;
pub type VectorFrame64 = VectorFrame<f64>;
pub type ControlOperator64 = controlled::ControlOperator<f64>;
pub type WeightSequence64 = multiplier::WeightSequence<f64>;
pub type WeightSequence32 = multiplier::WeightSequence<f32>;
pub type MultiplierCertificate64 = multiplier::MultiplierCertificate<f64>;
pub type GFrameDecomposition64 = decompose::GFrameDecomposition<f64>;
pub type InstanceFile64 = io::InstanceFile<f64>;

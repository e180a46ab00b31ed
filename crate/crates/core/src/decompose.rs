//! Constructive decompositions of g-frames into g-orthonormal bases,
//! Parseval g-frames and g-Riesz bases.
//!
//! Each operation works on the stacked analysis matrix `T`, splits it with
//! the unitary-averaging primitives from [`crate::kernel`], reshapes the
//! factors back into blocks with the input's partition, and certifies every
//! component with [`classify`].

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::{classify, frame_bounds, require_frame, ClassificationReport, GFrame};
use crate::kernel::{self, op_norm, polar_decompose, unitary_pair_from_contraction, unitary_triple_from_small_norm};
use crate::scalar::{CMatrix, Real};
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ComponentKind {
    GOnb,
    NormalizedTight,
    GRiesz,
}

impl ComponentKind {
    fn accepts<T: Real>(self, report: &ClassificationReport<T>) -> bool {
        match self {
            ComponentKind::GOnb => report.is_g_onb,
            ComponentKind::NormalizedTight => report.is_parseval,
            ComponentKind::GRiesz => report.is_g_riesz,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ComponentKind::GOnb => "g-ONB",
            ComponentKind::NormalizedTight => "normalized tight g-frame",
            ComponentKind::GRiesz => "g-Riesz basis",
        }
    }
}

/// A g-frame written as a combination of certified components.
///
/// With one scalar `a` the input is `a * sum(components)`; with one scalar
/// per component it is `sum(scalar_k * component_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GFrameDecomposition<T: Real> {
    pub scalars: Vec<Complex<T>>,
    pub components: Vec<GFrame<T>>,
    pub component_kinds: Vec<ComponentKind>,
    pub certificates: Vec<ClassificationReport<T>>,
    /// `|T - reconstruction|_F` over stacked analysis matrices.
    pub reconstruction_residual: T,
}

impl<T: Real> GFrameDecomposition<T> {
    /// Stacked analysis matrix of the recombined family.
    pub fn reconstruct(&self) -> CMatrix<T> {
        let first = self.components[0].analysis_matrix();
        let mut acc = CMatrix::zeros(first.nrows(), first.ncols());
        if self.scalars.len() == 1 {
            for comp in &self.components {
                acc += comp.analysis_matrix();
            }
            acc.map(|z| z * self.scalars[0])
        } else {
            for (s, comp) in self.scalars.iter().zip(&self.components) {
                acc += comp.analysis_matrix().map(|z| z * *s);
            }
            acc
        }
    }
}

fn real<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

fn assemble<T: Real>(
    f: &GFrame<T>,
    scalars: Vec<Complex<T>>,
    stacked: Vec<(CMatrix<T>, ComponentKind)>,
) -> Result<GFrameDecomposition<T>> {
    let partition = f.partition();
    let mut components = Vec::with_capacity(stacked.len());
    let mut kinds = Vec::with_capacity(stacked.len());
    let mut certificates = Vec::with_capacity(stacked.len());
    for (index, (m, kind)) in stacked.into_iter().enumerate() {
        let comp = GFrame::from_analysis(&m, &partition)?;
        let report = classify(&comp);
        if !kind.accepts(&report) {
            return Err(Error::CertificationFailed {
                index,
                kind: kind.name().into(),
            });
        }
        components.push(comp);
        kinds.push(kind);
        certificates.push(report);
    }
    let mut out = GFrameDecomposition {
        scalars,
        components,
        component_kinds: kinds,
        certificates,
        reconstruction_residual: T::zero(),
    };
    let t = f.analysis_matrix();
    out.reconstruction_residual = (out.reconstruct() - &t).norm();
    let limit = T::tol(tol::RECON) * (T::one() + t.norm());
    if out.reconstruction_residual > limit {
        return Err(Error::ResidualTooLarge {
            residual: out.reconstruction_residual.as_f64(),
            tol: limit.as_f64(),
        });
    }
    Ok(out)
}

fn require_square<T: Real>(f: &GFrame<T>) -> Result<()> {
    if f.total_dim() != f.h_dim() {
        return Err(Error::DimensionMismatch {
            total: f.total_dim(),
            h_dim: f.h_dim(),
        });
    }
    Ok(())
}

/// `L_i = a (U_i + G_i + P_i)` with three g-ONBs and `a = |T|`.
///
/// Requires a g-frame with `sum d_i = d`.
pub fn decompose_three_gonb<T: Real>(f: &GFrame<T>) -> Result<GFrameDecomposition<T>> {
    require_frame(f)?;
    require_square(f)?;
    let t = f.analysis_matrix();
    let a = op_norm(&t);
    let (u1, u2, u3) = unitary_triple_from_small_norm(&t.unscale(T::lit(3.0) * a))?;
    assemble(
        f,
        vec![real(a)],
        vec![
            (u1, ComponentKind::GOnb),
            (u2, ComponentKind::GOnb),
            (u3, ComponentKind::GOnb),
        ],
    )
}

/// `L_i = a U_i + b G_i` with two g-ONBs and `a = b = |T| / 2`.
///
/// Only g-Riesz bases admit such a combination.
pub fn decompose_two_gonb_combo<T: Real>(f: &GFrame<T>) -> Result<GFrameDecomposition<T>> {
    if !classify(f).is_g_riesz {
        return Err(Error::NotGRiesz);
    }
    let t = f.analysis_matrix();
    let norm = op_norm(&t);
    let (u1, u2) = unitary_pair_from_contraction(&t.unscale(norm))?;
    let half = real(norm * T::lit(0.5));
    assemble(
        f,
        vec![half, half],
        vec![(u1, ComponentKind::GOnb), (u2, ComponentKind::GOnb)],
    )
}

/// Image `{ Theta_i K^* }` of a g-ONB under a co-isometry `K : H -> H0`,
/// a Parseval g-frame for `H0`.
pub fn coisometry_image<T: Real>(theta: &GFrame<T>, k: &CMatrix<T>) -> Result<GFrame<T>> {
    if !classify(theta).is_g_onb {
        return Err(Error::NotGOnb);
    }
    if k.ncols() != theta.h_dim() || k.nrows() > k.ncols() || k.nrows() == 0 {
        return Err(Error::ShapeMismatch(format!(
            "co-isometry must be d0 x {} with d0 <= {}, got {}x{}",
            theta.h_dim(),
            theta.h_dim(),
            k.nrows(),
            k.ncols()
        )));
    }
    let defect = (k * k.adjoint() - kernel::identity::<T>(k.nrows())).norm();
    if defect > T::tol(tol::UNITARY) {
        return Err(Error::NotCoisometry {
            defect: defect.as_f64(),
        });
    }
    let k_adj = k.adjoint();
    let image = theta.map_blocks(|_, b| b * &k_adj)?;
    if !classify(&image).is_parseval {
        return Err(Error::CertificationFailed {
            index: 0,
            kind: ComponentKind::NormalizedTight.name().into(),
        });
    }
    Ok(image)
}

/// `L_i = a (F_i + P_i)` with two Parseval g-frames and `a = |T| / 2`.
///
/// With `T = V P`, `Q = P / (2a)` and `B = Q + i sqrt(I - Q^2)`, the
/// components have stacked matrices `V B` and `V B^*`. Any `sum d_i >= d`.
pub fn decompose_two_parseval<T: Real>(f: &GFrame<T>) -> Result<GFrameDecomposition<T>> {
    require_frame(f)?;
    let t = f.analysis_matrix();
    let a = op_norm(&t) * T::lit(0.5);
    let polar = polar_decompose(&t)?;
    let b = kernel::unit_lift(&polar.positive.unscale(T::lit(2.0) * a))?;
    let first = &polar.isometry * &b;
    let second = &polar.isometry * b.adjoint();
    assemble(
        f,
        vec![real(a)],
        vec![
            (first, ComponentKind::NormalizedTight),
            (second, ComponentKind::NormalizedTight),
        ],
    )
}

/// `L_i = U_i + G_i` with a g-ONB `U` (stacked `-W`) and a g-Riesz basis `G`
/// (stacked `T + W = W (P + I)`), where `T = W P`.
pub fn decompose_gonb_plus_griesz<T: Real>(f: &GFrame<T>) -> Result<GFrameDecomposition<T>> {
    require_frame(f)?;
    require_square(f)?;
    let t = f.analysis_matrix();
    let w = polar_decompose(&t)?.isometry;
    let riesz = &t + &w;
    let one = real(T::one());
    assemble(
        f,
        vec![one, one],
        vec![(-w, ComponentKind::GOnb), (riesz, ComponentKind::GRiesz)],
    )
}

/// Checks that `a U + b G` built from two g-ONBs classifies as g-Riesz.
pub fn combination_is_g_riesz<T: Real>(
    a: Complex<T>,
    upsilon: &GFrame<T>,
    b: Complex<T>,
    gamma: &GFrame<T>,
) -> Result<bool> {
    let combo = GFrame::from_analysis(
        &(upsilon.analysis_matrix().map(|z| z * a) + gamma.analysis_matrix().map(|z| z * b)),
        &upsilon.partition(),
    )?;
    Ok(classify(&combo).is_g_riesz && frame_bounds(&combo).is_frame())
}

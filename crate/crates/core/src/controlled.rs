//! g-frames controlled by an invertible operator `C`.
//!
//! The controlled form is `f -> sum <L_i C^* f, L_i f> = <S C^* f, f>`. It is
//! real for every `f` exactly when `S C^*` is Hermitian, i.e. when `C`
//! commutes with `S`; otherwise no real bounds exist and the family is
//! reported as not controlled.

use crate::error::{Error, Result};
use crate::frame::{classify, frame_bounds, frame_operator, induced_frame, GFrame, VectorFrame};
use crate::kernel::{self, hermitian_defect, hermitian_part, op_norm, spectral_range};
use crate::scalar::{all_finite, CMatrix, Real};
use crate::tol;

/// An invertible operator on `H`.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlOperator<T: Real> {
    pub matrix: CMatrix<T>,
    pub is_self_adjoint: bool,
    pub is_positive: bool,
    /// Spectral extremes `(m_C, M_C)` when self-adjoint.
    pub bounds: Option<(T, T)>,
}

impl<T: Real> ControlOperator<T> {
    pub fn new(matrix: CMatrix<T>) -> Result<Self> {
        if !all_finite(&matrix) {
            return Err(Error::NonFinite);
        }
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        if kernel::min_singular_value(&matrix) <= T::tol(tol::RANK) {
            return Err(Error::NotInvertible);
        }
        let is_self_adjoint = hermitian_defect(&matrix) <= T::tol(tol::HERM) * T::one().max(matrix.norm());
        let bounds = if is_self_adjoint {
            Some(spectral_range(&hermitian_part(&matrix))?)
        } else {
            None
        };
        let is_positive = bounds.is_some_and(|(lo, _)| lo > T::tol(tol::RANK));
        Ok(ControlOperator {
            matrix,
            is_self_adjoint,
            is_positive,
            bounds,
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlledBounds<T: Real> {
    pub m_cl: T,
    pub big_m_cl: T,
    pub is_controlled_frame: bool,
    /// Set when `S C^*` is not Hermitian, so the form takes complex values.
    pub non_self_adjoint_form: bool,
}

fn check_dim<T: Real>(f: &GFrame<T>, c: &ControlOperator<T>) -> Result<()> {
    if c.dim() != f.h_dim() {
        return Err(Error::ShapeMismatch(format!(
            "control is {0}x{0}, frame acts on dimension {1}",
            c.dim(),
            f.h_dim()
        )));
    }
    Ok(())
}

/// `S_C = S C^*`.
pub fn controlled_frame_operator<T: Real>(f: &GFrame<T>, c: &ControlOperator<T>) -> Result<CMatrix<T>> {
    check_dim(f, c)?;
    Ok(frame_operator(f) * c.matrix.adjoint())
}

fn commutation_threshold<T: Real>(s: &CMatrix<T>, c: &CMatrix<T>) -> T {
    T::tol(tol::COMM) * (T::one() + op_norm(s) * op_norm(c))
}

pub fn controlled_bounds<T: Real>(f: &GFrame<T>, c: &ControlOperator<T>) -> Result<ControlledBounds<T>> {
    let s = frame_operator(f);
    let sc = controlled_frame_operator(f, c)?;
    if hermitian_defect(&sc) > commutation_threshold(&s, &c.matrix) {
        return Ok(ControlledBounds {
            m_cl: T::zero(),
            big_m_cl: T::zero(),
            is_controlled_frame: false,
            non_self_adjoint_form: true,
        });
    }
    let (m_cl, big_m_cl) = spectral_range(&hermitian_part(&sc))?;
    Ok(ControlledBounds {
        m_cl,
        big_m_cl,
        is_controlled_frame: m_cl > T::tol(tol::RANK),
        non_self_adjoint_form: false,
    })
}

/// `(holds, |S C^* - C S|_F)`.
pub fn verify_commutation<T: Real>(f: &GFrame<T>, c: &ControlOperator<T>) -> Result<(bool, T)> {
    check_dim(f, c)?;
    let s = frame_operator(f);
    let defect = (&s * c.matrix.adjoint() - &c.matrix * &s).norm();
    Ok((defect <= commutation_threshold(&s, &c.matrix), defect))
}

/// Both sides of: controlled by a self-adjoint `C` iff a g-frame with `C`
/// positive and commuting with `S`.
pub fn controlled_equivalence<T: Real>(f: &GFrame<T>, c: &ControlOperator<T>) -> Result<(bool, bool)> {
    if !c.is_self_adjoint {
        return Err(Error::NotSelfAdjoint);
    }
    let lhs = controlled_bounds(f, c)?.is_controlled_frame;
    let rhs = classify(f).is_g_frame && c.is_positive && verify_commutation(f, c)?.0;
    Ok((lhs, rhs))
}

/// Bound pairs derived from controlled, frame and control bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedBounds<T: Real> {
    /// `(m_CL / M_C, M_CL / m_C)`, bounds for `S`.
    pub frame_operator: (T, T),
    /// `(m_CL / M, M_CL / m)`, bounds for `C`.
    pub control: (T, T),
    /// `(m m_C, M M_C)`, bounds for `S_C`.
    pub controlled_operator: (T, T),
}

pub fn controlled_bound_arithmetic<T: Real>(
    m_cl: T,
    big_m_cl: T,
    m: T,
    big_m: T,
    m_c: T,
    big_m_c: T,
) -> Result<DerivedBounds<T>> {
    for (name, v) in [
        ("m_CL", m_cl),
        ("M_CL", big_m_cl),
        ("m", m),
        ("M", big_m),
        ("m_C", m_c),
        ("M_C", big_m_c),
    ] {
        if !(v > T::zero() && v.is_finite()) {
            return Err(Error::NonPositiveInput(format!("{name} = {v}")));
        }
    }
    Ok(DerivedBounds {
        frame_operator: (m_cl / big_m_c, big_m_cl / m_c),
        control: (m_cl / big_m, big_m_cl / m),
        controlled_operator: (m * m_c, big_m * big_m_c),
    })
}

/// The induced vectors and whether `sum_{i,k} psi_{i,k} (C psi_{i,k})^* = S_C`,
/// the operator form of `sum <f, C psi> psi = S_C f` for all `f`.
pub fn induced_controlled_frame<T: Real>(f: &GFrame<T>, c: &ControlOperator<T>) -> Result<(VectorFrame<T>, bool)> {
    let sc = controlled_frame_operator(f, c)?;
    let vf = induced_frame(f);
    let mut acc = CMatrix::zeros(f.h_dim(), f.h_dim());
    for psi in &vf.vectors {
        acc += psi * (&c.matrix * psi).adjoint();
    }
    let holds = (acc - &sc).norm() <= T::tol(1e-10) * (T::one() + sc.norm());
    Ok((vf, holds))
}

/// True spectra of `S`, `C` and `S_C` for comparison with [`DerivedBounds`].
pub fn true_ranges<T: Real>(f: &GFrame<T>, c: &ControlOperator<T>) -> Result<[(T, T); 3]> {
    let b = frame_bounds(f);
    let cb = c.bounds.ok_or(Error::NotSelfAdjoint)?;
    let sc = controlled_frame_operator(f, c)?;
    let scb = spectral_range(&hermitian_part(&sc))?;
    Ok([(b.lower, b.upper), cb, scb])
}

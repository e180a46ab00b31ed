//! Weighted g-frames `{ w_i L_i }` and the multiplier identities that tie
//! weights, control operators and frame operators together.

use num_complex::Complex;

use crate::controlled::{controlled_bounds, ControlOperator};
use crate::error::{Error, Result};
use crate::frame::{canonical_dual, classify, frame_operator, induced_frame, FrameBounds, GFrame, VectorFrame};
use crate::kernel::{hermitian_defect, op_norm, spectral_range};
use crate::multiplier::{multiplier, WeightSequence};
use crate::scalar::{CMatrix, Real};
use crate::tol;

fn check_len<T: Real>(f: &GFrame<T>, w: &WeightSequence<T>) -> Result<()> {
    if f.len() != w.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} weights for {} blocks",
            w.len(),
            f.len()
        )));
    }
    Ok(())
}

fn require_positive<T: Real>(w: &WeightSequence<T>) -> Result<()> {
    if !w.is_real() {
        return Err(Error::ComplexWeights);
    }
    match w.values().iter().position(|z| z.re <= T::zero()) {
        Some(index) => Err(Error::NonPositiveWeight { index }),
        None => Ok(()),
    }
}

/// Optimal bounds of `sum |w_i|^2 |L_i f|^2`.
pub fn weighted_bounds<T: Real>(f: &GFrame<T>, w: &WeightSequence<T>) -> Result<FrameBounds<T>> {
    check_len(f, w)?;
    let mut s = CMatrix::zeros(f.h_dim(), f.h_dim());
    for (b, z) in f.blocks().iter().zip(w.values()) {
        s += (b.adjoint() * b).scale(z.norm_sqr());
    }
    FrameBounds::from_operator(&s)
}

/// Induced vectors carrying the replicated weights `w'_{i,k} = w_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedVectorFrame<T: Real> {
    pub frame: VectorFrame<T>,
    pub weights: Vec<Complex<T>>,
}

impl<T: Real> WeightedVectorFrame<T> {
    /// `sum |w'_k|^2 psi_k psi_k^*`.
    pub fn frame_operator(&self) -> CMatrix<T> {
        let d = self.frame.h_dim;
        let mut s = CMatrix::zeros(d, d);
        for (v, z) in self.frame.vectors.iter().zip(&self.weights) {
            s += (v * v.adjoint()).scale(z.norm_sqr());
        }
        s
    }

    pub fn bounds(&self) -> Result<FrameBounds<T>> {
        FrameBounds::from_operator(&self.frame_operator())
    }
}

pub fn induced_weighted_frame<T: Real>(f: &GFrame<T>, w: &WeightSequence<T>) -> Result<WeightedVectorFrame<T>> {
    check_len(f, w)?;
    let frame = induced_frame(f);
    let weights = frame.indices.iter().map(|&(i, _)| w.values()[i]).collect();
    Ok(WeightedVectorFrame { frame, weights })
}

/// Extracts `w_i` from `C L_i^* = w_i L_i^*` for a family controlled by a
/// self-adjoint `C`, and reports whether `C = M_{w, L, L~}`.
pub fn weight_from_control<T: Real>(f: &GFrame<T>, c: &ControlOperator<T>) -> Result<(WeightSequence<T>, bool)> {
    if !c.is_self_adjoint {
        return Err(Error::NotSelfAdjoint);
    }
    let cb = controlled_bounds(f, c)?;
    if !cb.is_controlled_frame {
        return Err(Error::hypothesis(
            "family is a C-controlled g-frame",
            format!("m_CL = {}, form self-adjoint = {}", cb.m_cl, !cb.non_self_adjoint_form),
        ));
    }
    let c_norm = op_norm(&c.matrix);
    let mut weights = Vec::with_capacity(f.len());
    for (block, b) in f.blocks().iter().enumerate() {
        let x = b.adjoint();
        let xn = x.norm();
        if xn <= T::tol(tol::RANK) {
            return Err(Error::ZeroBlock { block });
        }
        let y = &c.matrix * &x;
        let w = x.dotc(&y) / Complex::new(xn * xn, T::zero());
        let residual = (&y - x.map(|z| z * w)).norm();
        if residual > T::tol(tol::EIG) * T::one().max(c_norm * xn) {
            return Err(Error::NotEigenRelation {
                block,
                residual: residual.as_f64(),
            });
        }
        if w.re <= T::zero() {
            return Err(Error::NonPositiveWeight { index: block });
        }
        weights.push(Complex::new(w.re, T::zero()));
    }
    let w = WeightSequence::new(weights)?;
    let dual = canonical_dual(f)?;
    let recovered = multiplier(&w, f, &dual)?;
    let is_multiplier = (&c.matrix - recovered).norm() <= T::tol(tol::INV) * T::one().max(c_norm);
    Ok((w, is_multiplier))
}

/// `{ w_i^-1 L~_i }`, a dual of `{ w_i L_i }` for real nonzero weights.
pub fn weighted_dual<T: Real>(f: &GFrame<T>, w: &WeightSequence<T>) -> Result<GFrame<T>> {
    check_len(f, w)?;
    if !w.is_real() {
        return Err(Error::ComplexWeights);
    }
    if let Some(index) = w.values().iter().position(|z| z.re == T::zero()) {
        return Err(Error::ZeroWeight { index });
    }
    let inverse: Vec<_> = w
        .values()
        .iter()
        .map(|z| Complex::new(T::one() / z.re, T::zero()))
        .collect();
    canonical_dual(f)?.weighted(&inverse)
}

/// Outcome of checking that `M_{w,L}` is the frame operator of `{ sqrt(w_i) L_i }`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameOperatorChecks<T: Real> {
    pub matches_frame_operator: bool,
    pub hermitian: bool,
    pub positive_definite: bool,
    pub defect: T,
    pub lambda_min: T,
}

impl<T: Real> FrameOperatorChecks<T> {
    pub fn all(&self) -> bool {
        self.matches_frame_operator && self.hermitian && self.positive_definite
    }
}

pub fn weighted_multiplier_as_frame_operator<T: Real>(
    f: &GFrame<T>,
    w: &WeightSequence<T>,
) -> Result<(CMatrix<T>, FrameOperatorChecks<T>)> {
    check_len(f, w)?;
    require_positive(w)?;
    let mm = multiplier(w, f, f)?;
    let s_root = frame_operator(&f.weighted(w.sqrt().values())?);
    let defect = (&mm - &s_root).norm();
    let scale = T::one().max(mm.norm());
    let hermitian = hermitian_defect(&mm) <= T::tol(tol::HERM) * scale;
    let lambda_min = spectral_range(&crate::kernel::hermitian_part(&mm))?.0;
    let checks = FrameOperatorChecks {
        matches_frame_operator: defect <= T::tol(1e-12) * scale,
        hermitian,
        positive_definite: lambda_min > T::tol(tol::RANK),
        defect,
        lambda_min,
    };
    Ok((mm, checks))
}

/// The six equivalent characterizations of a g-frame under positive weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EquivalenceVerdicts {
    /// The family is a g-frame.
    pub is_g_frame: bool,
    /// `M_{w,L}` is positive, self-adjoint and invertible.
    pub multiplier_positive_invertible: bool,
    /// `sum w_i |L_i f|^2` has a positive lower bound.
    pub weighted_form_bounded_below: bool,
    /// `{ sqrt(w_i) L_i }` is a g-frame.
    pub sqrt_weighted_is_g_frame: bool,
    /// `M_{w',L}` is positive and invertible for the alternative weights.
    pub alt_multiplier_positive_invertible: bool,
    /// `{ w_i L_i }` is a g-frame.
    pub weighted_is_g_frame: bool,
}

impl EquivalenceVerdicts {
    pub fn as_array(&self) -> [bool; 6] {
        [
            self.is_g_frame,
            self.multiplier_positive_invertible,
            self.weighted_form_bounded_below,
            self.sqrt_weighted_is_g_frame,
            self.alt_multiplier_positive_invertible,
            self.weighted_is_g_frame,
        ]
    }

    pub fn unanimous(&self) -> bool {
        let v = self.as_array();
        v.iter().all(|&b| b == v[0])
    }
}

fn positive_invertible<T: Real>(m: &CMatrix<T>) -> Result<bool> {
    let scale = T::one().max(m.norm());
    if hermitian_defect(m) > T::tol(tol::HERM) * scale {
        return Ok(false);
    }
    Ok(spectral_range(m)?.0 > T::tol(tol::RANK))
}

pub fn weighted_equivalence_suite<T: Real>(
    f: &GFrame<T>,
    w: &WeightSequence<T>,
    w_alt: &WeightSequence<T>,
) -> Result<EquivalenceVerdicts> {
    check_len(f, w)?;
    check_len(f, w_alt)?;
    require_positive(w)?;
    require_positive(w_alt)?;

    let mut form = CMatrix::zeros(f.h_dim(), f.h_dim());
    for (b, z) in f.blocks().iter().zip(w.values()) {
        form += (b.adjoint() * b).scale(z.re);
    }
    let form_lower = FrameBounds::from_operator(&form)?.is_frame();

    Ok(EquivalenceVerdicts {
        is_g_frame: classify(f).is_g_frame,
        multiplier_positive_invertible: positive_invertible(&multiplier(w, f, f)?)?,
        weighted_form_bounded_below: form_lower,
        sqrt_weighted_is_g_frame: classify(&f.weighted(w.sqrt().values())?).is_g_frame,
        alt_multiplier_positive_invertible: positive_invertible(&multiplier(w_alt, f, f)?)?,
        weighted_is_g_frame: classify(&f.weighted(w.values())?).is_g_frame,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::{frame_bounds, verify_duality};
    use crate::kernel::identity;
    use crate::random::{random_cmatrix, seeded};
    use crate::scalar::{cdiag, cmat_real};

    fn w(vals: &[f64]) -> WeightSequence<f64> {
        WeightSequence::from_real(vals).unwrap()
    }

    #[test]
    fn weighted_bounds_examples() {
        let id = GFrame::<f64>::identity(2);
        let b = weighted_bounds(&id, &w(&[2.0, 3.0])).unwrap();
        assert_eq!((b.lower, b.upper), (4.0, 9.0));
        let mut rng = seeded(2);
        let f = GFrame::<f64>::from_analysis(&random_cmatrix(&mut rng, 5, 3), &[2, 3]).unwrap();
        let b = weighted_bounds(&f, &w(&[1.0, 1.0])).unwrap();
        let fb = frame_bounds(&f);
        assert!((b.lower - fb.lower).abs() < 1e-12 && (b.upper - fb.upper).abs() < 1e-12);
    }

    #[test]
    fn induced_weighted_examples() {
        let id = GFrame::<f64>::identity(2);
        let wf = induced_weighted_frame(&id, &w(&[2.0, 3.0])).unwrap();
        assert_eq!(wf.weights.iter().map(|z| z.re).collect::<Vec<_>>(), vec![2.0, 3.0]);
        let b = wf.bounds().unwrap();
        assert_eq!((b.lower, b.upper), (4.0, 9.0));
        let plain = induced_weighted_frame(&id, &w(&[1.0, 1.0])).unwrap();
        assert_eq!(plain.frame, induced_frame(&id));
    }

    #[test]
    fn weight_from_control_examples() {
        let id = GFrame::<f64>::identity(2);
        let c = ControlOperator::new(cdiag(&[2.0, 3.0])).unwrap();
        let (wts, is_mult) = weight_from_control(&id, &c).unwrap();
        assert_eq!(wts.values().iter().map(|z| z.re).collect::<Vec<_>>(), vec![2.0, 3.0]);
        assert!(is_mult);
        let (wts, _) = weight_from_control(&id, &ControlOperator::new(identity(2)).unwrap()).unwrap();
        assert_eq!(wts, w(&[1.0, 1.0]));

        // Both blocks mix the eigenvectors of C.
        let h = 1.0 / 2f64.sqrt();
        let mixed = GFrame::<f64>::new(2, vec![cmat_real(&[&[h, h]]), cmat_real(&[&[h, -h]])]).unwrap();
        assert!(matches!(
            weight_from_control(&mixed, &c),
            Err(Error::NotEigenRelation { block: 0, .. })
        ));
    }

    #[test]
    fn weight_from_control_zero_block() {
        let f = GFrame::<f64>::new(
            2,
            vec![
                cmat_real(&[&[1.0, 0.0]]),
                cmat_real(&[&[0.0, 1.0]]),
                cmat_real(&[&[0.0, 0.0]]),
            ],
        )
        .unwrap();
        let c = ControlOperator::new(cdiag(&[2.0, 3.0])).unwrap();
        assert_eq!(weight_from_control(&f, &c).unwrap_err(), Error::ZeroBlock { block: 2 });
    }

    #[test]
    fn weighted_dual_examples() {
        let id = GFrame::<f64>::identity(2);
        let wt = w(&[2.0, 3.0]);
        let dual = weighted_dual(&id, &wt).unwrap();
        assert_eq!(dual.blocks()[0], cmat_real(&[&[0.5, 0.0]]));
        assert!((&dual.blocks()[1] - cmat_real(&[&[0.0, 1.0 / 3.0]])).norm() < 1e-15);
        assert!(verify_duality(&id.weighted(wt.values()).unwrap(), &dual).unwrap());

        let mut rng = seeded(4);
        let f = GFrame::<f64>::from_analysis(&random_cmatrix(&mut rng, 4, 3), &[2, 2]).unwrap();
        assert_eq!(weighted_dual(&f, &w(&[1.0, 1.0])).unwrap(), canonical_dual(&f).unwrap());
        assert_eq!(
            weighted_dual(&f, &w(&[1.0, 0.0])).unwrap_err(),
            Error::ZeroWeight { index: 1 }
        );
    }

    #[test]
    fn frame_operator_identity_examples() {
        let id = GFrame::<f64>::identity(2);
        let (m, checks) = weighted_multiplier_as_frame_operator(&id, &w(&[2.0, 3.0])).unwrap();
        assert_eq!(m, cdiag(&[2.0, 3.0]));
        assert!(checks.all());
        let mut rng = seeded(8);
        let f = GFrame::<f64>::from_analysis(&random_cmatrix(&mut rng, 4, 3), &[1, 3]).unwrap();
        let (m, checks) = weighted_multiplier_as_frame_operator(&f, &w(&[1.0, 1.0])).unwrap();
        assert_eq!(m, frame_operator(&f));
        assert!(checks.all());
        assert_eq!(
            weighted_multiplier_as_frame_operator(&f, &w(&[1.0, -1.0])).unwrap_err(),
            Error::NonPositiveWeight { index: 1 }
        );
    }

    #[test]
    fn equivalence_examples() {
        let id = GFrame::<f64>::identity(2);
        let v = weighted_equivalence_suite(&id, &w(&[0.5, 4.0]), &w(&[2.0, 2.0])).unwrap();
        assert_eq!(v.as_array(), [true; 6]);
        let deficient = GFrame::<f64>::new(2, vec![cmat_real(&[&[1.0, 0.0]])]).unwrap();
        let v = weighted_equivalence_suite(&deficient, &w(&[3.0]), &w(&[0.2])).unwrap();
        assert_eq!(v.as_array(), [false; 6]);
    }
}

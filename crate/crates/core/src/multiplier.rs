//! g-Bessel multipliers `M = sum_i m_i L_i^* T_i`, their norm bound, and
//! certified inversion.
//!
//! Every `invert_*` routine returns the inverse together with a
//! [`MultiplierCertificate`]: the hypothesis constants it evaluated (always
//! the optimal bounds), a bracket `[lower, upper]` that provably contains
//! `|M^-1|`, the number of series terms used, and the residual
//! `|M M^-1 - I|_F`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::{canonical_dual, frame_operator};
use crate::frame::{check_same_shape, duality_defect, frame_bounds, require_frame, GFrame};
use crate::kernel::{self, identity, op_norm};
use crate::scalar::{all_finite, cabs, CMatrix, Real};
use crate::tol;

/// Per-block weights `m_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSequence<T: Real> {
    values: Vec<Complex<T>>,
    norm_inf: T,
    semi_norm_bounds: Option<(T, T)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Positive,
    Negative,
}

impl<T: Real> WeightSequence<T> {
    pub fn new(values: Vec<Complex<T>>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::ShapeMismatch("weight sequence is empty".into()));
        }
        if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let moduli: Vec<T> = values.iter().map(|&z| cabs(z)).collect();
        let norm_inf = moduli.iter().copied().fold(T::zero(), T::max);
        let min = moduli.iter().copied().fold(norm_inf, T::min);
        let semi_norm_bounds = (min > T::zero()).then_some((min, norm_inf));
        Ok(WeightSequence {
            values,
            norm_inf,
            semi_norm_bounds,
        })
    }

    pub fn from_real(values: &[T]) -> Result<Self> {
        Self::new(values.iter().map(|&x| Complex::new(x, T::zero())).collect())
    }

    pub fn ones(n: usize) -> Self {
        Self::from_real(&vec![T::one(); n]).expect("non-empty")
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn norm_inf(&self) -> T {
        self.norm_inf
    }

    /// `(min |m_i|, max |m_i|)` when no weight vanishes.
    pub fn semi_norm_bounds(&self) -> Option<(T, T)> {
        self.semi_norm_bounds
    }

    pub fn is_real(&self) -> bool {
        let eps = T::tol(tol::HERM);
        self.values.iter().all(|z| z.im.abs() <= eps * T::one().max(z.re.abs()))
    }

    /// Sign of a real, sign-definite sequence.
    pub fn sign(&self) -> Result<Sign> {
        if !self.is_real() {
            return Err(Error::ComplexWeights);
        }
        if self.values.iter().all(|z| z.re > T::zero()) {
            Ok(Sign::Positive)
        } else if self.values.iter().all(|z| z.re < T::zero()) {
            Ok(Sign::Negative)
        } else {
            Err(Error::MixedSigns)
        }
    }

    /// `(1 - m_i)`.
    pub fn complement(&self) -> Self {
        let one = Complex::new(T::one(), T::zero());
        Self::new(self.values.iter().map(|&z| one - z).collect()).expect("finite")
    }

    /// `(|m_i|)`.
    pub fn conjugate(&self) -> Self {
        Self::new(self.values.iter().map(|z| z.conj()).collect()).expect("same moduli")
    }

    pub fn moduli(&self) -> Self {
        Self::from_real(&self.values.iter().map(|&z| cabs(z)).collect::<Vec<_>>()).expect("finite")
    }

    /// `(|m_i|^2)`.
    pub fn squared_moduli(&self) -> Self {
        Self::from_real(&self.values.iter().map(|&z| z.norm_sqr()).collect::<Vec<_>>()).expect("finite")
    }

    /// `(sqrt(m_i))`, principal branch.
    pub fn sqrt(&self) -> Self {
        Self::new(self.values.iter().map(|&z| nalgebra::ComplexField::sqrt(z)).collect()).expect("finite")
    }
}

/// Which family sits on the left (adjoint) side of the multiplier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Order {
    /// `sum m_i L_i^* T_i`
    #[default]
    LambdaTheta,
    /// `sum m_i T_i^* L_i`
    ThetaLambda,
}

/// The sufficient condition a certificate was issued under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Construction {
    /// `T_i = L_i G` with `G` bijective and sign-definite weights.
    Bijection,
    /// Weights close to 1 against an arbitrary dual.
    DualPerturbation,
    /// Weights close to 1 against the canonical dual.
    CanonicalDual,
    /// Second family a Bessel perturbation of the first.
    BesselPerturbation,
    /// `m T` close to `L`.
    MuPerturbation,
    /// `m T` close to a dual of `L`.
    DualMuPerturbation,
    /// Plain dense inversion, no sufficient condition used.
    Direct,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiplierCertificate<T: Real> {
    pub construction: Construction,
    pub hypothesis_values: Vec<(String, T)>,
    pub inverse_norm_lower: T,
    pub inverse_norm_upper: T,
    pub series_terms_for_tol: usize,
    pub residual: T,
    /// Norm bound `q < 1` on the Neumann ratio, when one is known a priori.
    pub contraction: Option<T>,
}

impl<T: Real> MultiplierCertificate<T> {
    pub fn hypothesis(&self, name: &str) -> Option<T> {
        self.hypothesis_values.iter().find(|(n, _)| n == name).map(|&(_, v)| v)
    }

    /// True when `norm` lies in the bracket up to `slack`.
    pub fn bracket_contains(&self, norm: T, slack: T) -> bool {
        norm >= self.inverse_norm_lower - slack && norm <= self.inverse_norm_upper + slack
    }
}

/// `sum_i m_i L_i^* T_i`.
pub fn multiplier<T: Real>(m: &WeightSequence<T>, l: &GFrame<T>, t: &GFrame<T>) -> Result<CMatrix<T>> {
    check_same_shape(l, t)?;
    if m.len() != l.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} weights for {} blocks",
            m.len(),
            l.len()
        )));
    }
    let d = l.h_dim();
    let mut acc = CMatrix::zeros(d, d);
    for ((w, lb), tb) in m.values().iter().zip(l.blocks()).zip(t.blocks()) {
        acc += (lb.adjoint() * tb).map(|z| z * *w);
    }
    Ok(acc)
}

pub fn multiplier_ordered<T: Real>(
    m: &WeightSequence<T>,
    l: &GFrame<T>,
    t: &GFrame<T>,
    order: Order,
) -> Result<CMatrix<T>> {
    match order {
        Order::LambdaTheta => multiplier(m, l, t),
        Order::ThetaLambda => multiplier(m, t, l),
    }
}

/// `sqrt(B_L B_T) |m|_inf`, an upper bound on `|M|`.
pub fn multiplier_norm_bound<T: Real>(m: &WeightSequence<T>, l: &GFrame<T>, t: &GFrame<T>) -> Result<T> {
    check_same_shape(l, t)?;
    if m.len() != l.len() {
        return Err(Error::ShapeMismatch("weights and blocks differ in length".into()));
    }
    let bl = frame_bounds(l).upper;
    let bt = frame_bounds(t).upper;
    Ok((bl * bt).sqrt() * m.norm_inf())
}

/// `q^(k+1) / (1 - q)`, the tail of a geometric series after `k`.
pub fn geometric_tail<T: Real>(q: T, k: usize) -> T {
    q.powi(k as i32 + 1) / (T::one() - q)
}

/// Smallest `K` with `geometric_tail(q, K) <= tol`.
pub fn terms_for_tail<T: Real>(q: T, tol: T) -> Result<usize> {
    if q <= T::zero() {
        return Ok(0);
    }
    let mut k = 0usize;
    while geometric_tail(q, k) > tol {
        k += 1;
        if k >= tol::MAX_SERIES_TERMS {
            return Err(Error::MaxIterations { terms: k });
        }
    }
    Ok(k)
}

/// Partial sums `sum_{k<=K} X^k P` for `K = 0..terms`, `P = I` when absent.
pub fn neumann_partial_sums<T: Real>(x: &CMatrix<T>, post: Option<&CMatrix<T>>, terms: usize) -> Vec<CMatrix<T>> {
    let mut term = post.cloned().unwrap_or_else(|| identity(x.nrows()));
    let mut sum = term.clone();
    let mut out = vec![sum.clone()];
    for _ in 1..terms {
        term = x * &term;
        sum += &term;
        out.push(sum.clone());
    }
    out
}

/// `sum_{k=0}^{K} X^k P` stopping once `|X^k P|_F <= tol`.
fn neumann_until_small<T: Real>(x: &CMatrix<T>, post: &CMatrix<T>, tol: T) -> Result<(CMatrix<T>, usize)> {
    let mut term = post.clone();
    let mut sum = term.clone();
    let mut terms = 1;
    while term.norm() > tol {
        term = x * &term;
        sum += &term;
        terms += 1;
        if terms >= tol::MAX_SERIES_TERMS || !all_finite(&term) {
            return Err(Error::MaxIterations { terms });
        }
    }
    Ok((sum, terms))
}

fn finish<T: Real>(
    m: &CMatrix<T>,
    inv: CMatrix<T>,
    mut cert: MultiplierCertificate<T>,
    series_tol: T,
) -> Result<(CMatrix<T>, MultiplierCertificate<T>)> {
    let residual = (m * &inv - identity::<T>(m.nrows())).norm();
    cert.residual = residual;
    let limit = T::tol(tol::INV).max(series_tol * T::lit(100.0));
    if residual > limit || !all_finite(&inv) {
        return Err(Error::ResidualTooLarge {
            residual: residual.as_f64(),
            tol: limit.as_f64(),
        });
    }
    Ok((inv, cert))
}

fn named<T: Real>(pairs: &[(&str, T)]) -> Vec<(String, T)> {
    pairs.iter().map(|&(n, v)| (n.to_string(), v)).collect()
}

fn check_tol<T: Real>(tol: T) -> Result<()> {
    if tol > T::zero() && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveInput(format!("series tolerance {tol}")))
    }
}

/// Inverse of `M_{m,L,LG} = +-S_{sqrt|m| L} G` as `+-G^-1 S^-1`.
///
/// `m` must be real and sign-definite, `L` a g-frame and `G` invertible.
pub fn invert_via_bijection<T: Real>(
    m: &WeightSequence<T>,
    l: &GFrame<T>,
    g: &CMatrix<T>,
) -> Result<(CMatrix<T>, MultiplierCertificate<T>)> {
    let sign = m.sign()?;
    if g.shape() != (l.h_dim(), l.h_dim()) {
        return Err(Error::ShapeMismatch(format!(
            "G must be {0}x{0}, got {1}x{2}",
            l.h_dim(),
            g.nrows(),
            g.ncols()
        )));
    }
    let (_, bounds) = require_frame(l)?;
    let g_inv = kernel::inverse(g).map_err(|_| Error::SingularG)?;
    if kernel::min_singular_value(g) <= T::tol(tol::RANK) {
        return Err(Error::SingularG);
    }
    let theta = l.map_blocks(|_, b| b * g)?;
    let mm = multiplier(m, l, &theta)?;
    let s_w = frame_operator(&l.weighted(m.moduli().sqrt().values())?);
    let s_inv = kernel::inverse(&s_w)?;
    let mut inv = &g_inv * s_inv;
    if sign == Sign::Negative {
        inv = -inv;
    }
    let (a, b) = m.semi_norm_bounds().expect("sign-definite weights are nonzero");
    let g_norm = op_norm(g);
    let g_inv_norm = op_norm(&g_inv);
    let cert = MultiplierCertificate {
        construction: Construction::Bijection,
        hypothesis_values: named(&[
            ("a", a),
            ("b", b),
            ("A_L", bounds.lower),
            ("B_L", bounds.upper),
            ("|G|", g_norm),
            ("|G^-1|", g_inv_norm),
        ]),
        inverse_norm_lower: T::one() / (b * bounds.upper * g_norm),
        inverse_norm_upper: g_inv_norm / (a * bounds.lower),
        series_terms_for_tol: 0,
        residual: T::zero(),
        contraction: None,
    };
    finish(&mm, inv, cert, T::zero())
}

/// Neumann inverse of `M_{m,L,D}` (or `M_{m,D,L}`) for a dual pair `(L, D)`:
/// `M^-1 = sum_k (M_{1-m})^k`, valid when `q = lambda sqrt(B_L B_D) < 1`
/// with `lambda = max |1 - m_i|`. The series is cut at the first `K` whose
/// geometric tail `q^(K+1) / (1 - q)` is at most `tol`.
pub fn invert_dual_neumann<T: Real>(
    m: &WeightSequence<T>,
    l: &GFrame<T>,
    d: &GFrame<T>,
    order: Order,
    tol: T,
) -> Result<(CMatrix<T>, MultiplierCertificate<T>)> {
    check_tol(tol)?;
    let defect = duality_defect(l, d)?;
    if defect > T::tol(tol::DUAL) {
        return Err(Error::NotDual {
            defect: defect.as_f64(),
        });
    }
    let mm = multiplier_ordered(m, l, d, order)?;
    let complement = m.complement();
    let lambda = complement.norm_inf();
    let bl = frame_bounds(l).upper;
    let bd = frame_bounds(d).upper;
    let q = lambda * (bl * bd).sqrt();
    if q >= T::one() {
        return Err(Error::hypothesis(
            "lambda * sqrt(B_L * B_D) < 1",
            format!("lambda = {lambda}, B_L = {bl}, B_D = {bd}, product = {q}"),
        ));
    }
    let x = multiplier_ordered(&complement, l, d, order)?;
    let k = terms_for_tail(q, tol)?;
    let inv = neumann_partial_sums(&x, None, k + 1).pop().expect("at least one term");
    let cert = MultiplierCertificate {
        construction: Construction::DualPerturbation,
        hypothesis_values: named(&[("lambda", lambda), ("B_L", bl), ("B_D", bd), ("q", q)]),
        inverse_norm_lower: T::one() / (T::one() + q),
        inverse_norm_upper: T::one() / (T::one() - q),
        series_terms_for_tol: k + 1,
        residual: T::zero(),
        contraction: Some(q),
    };
    finish(&mm, inv, cert, tol)
}

/// [`invert_dual_neumann`] against the canonical dual; requires
/// `lambda < sqrt(A_L / B_L)`.
pub fn invert_canonical_dual<T: Real>(
    m: &WeightSequence<T>,
    l: &GFrame<T>,
    order: Order,
    tol: T,
) -> Result<(CMatrix<T>, MultiplierCertificate<T>)> {
    let (_, bounds) = require_frame(l)?;
    let lambda = m.complement().norm_inf();
    let ratio = (bounds.lower / bounds.upper).sqrt();
    if lambda >= ratio {
        return Err(Error::hypothesis(
            "lambda < sqrt(A_L / B_L)",
            format!(
                "lambda = {lambda}, A_L = {}, B_L = {}, sqrt(A_L/B_L) = {ratio}",
                bounds.lower, bounds.upper
            ),
        ));
    }
    let dual = canonical_dual(l)?;
    let (inv, mut cert) = invert_dual_neumann(m, l, &dual, order, tol)?;
    let q = lambda * (bounds.upper / bounds.lower).sqrt();
    cert.construction = Construction::CanonicalDual;
    cert.hypothesis_values = named(&[
        ("lambda", lambda),
        ("A_L", bounds.lower),
        ("B_L", bounds.upper),
        ("q", q),
    ]);
    cert.inverse_norm_lower = T::one() / (T::one() + q);
    cert.inverse_norm_upper = T::one() / (T::one() - q);
    Ok((inv, cert))
}

/// Inverse of `M_{m,L,T}` (or `M_{m,T,L}`) when `T - L` is a small Bessel
/// perturbation: `B_{T-L} < A_L^2 / B_L` and `b / a < A_L / sqrt(B_{T-L} B_L)`
/// for real sign-definite `m` with `a <= |m_i| <= b`.
///
/// With `S = S_{sqrt|m| L}` the inverse is `+-sum_k [S^-1 (S -+ M)]^k S^-1`,
/// summed until a term drops below `tol` in Frobenius norm.
pub fn invert_bessel_perturb<T: Real>(
    m: &WeightSequence<T>,
    l: &GFrame<T>,
    t: &GFrame<T>,
    order: Order,
    tol: T,
) -> Result<(CMatrix<T>, MultiplierCertificate<T>)> {
    check_tol(tol)?;
    let sign = m.sign()?;
    let (_, bounds) = require_frame(l)?;
    let (al, bl) = (bounds.lower, bounds.upper);
    let b_diff = frame_bounds(&t.difference(l)?).upper;
    let limit = al * al / bl;
    if b_diff >= limit {
        return Err(Error::hypothesis(
            "B_(T-L) < A_L^2 / B_L",
            format!("B_(T-L) = {b_diff}, A_L^2/B_L = {limit}"),
        ));
    }
    let (a, b) = m.semi_norm_bounds().expect("sign-definite weights are nonzero");
    let root = (b_diff * bl).sqrt();
    if b_diff > T::zero() && b / a >= al / root {
        return Err(Error::hypothesis(
            "b / a < A_L / sqrt(B_(T-L) * B_L)",
            format!("b/a = {}, A_L/sqrt(B_(T-L) B_L) = {}", b / a, al / root),
        ));
    }
    let mm = multiplier_ordered(m, l, t, order)?;
    let s = frame_operator(&l.weighted(m.moduli().sqrt().values())?);
    let s_inv = kernel::inverse(&s)?;
    let x = match sign {
        Sign::Positive => &s_inv * (&s - &mm),
        Sign::Negative => &s_inv * (&s + &mm),
    };
    let (mut inv, terms) = neumann_until_small(&x, &s_inv, tol)?;
    if sign == Sign::Negative {
        inv = -inv;
    }
    let at = frame_bounds(t).lower;
    let cert = MultiplierCertificate {
        construction: Construction::BesselPerturbation,
        hypothesis_values: named(&[
            ("a", a),
            ("b", b),
            ("A_L", al),
            ("B_L", bl),
            ("B_T-L", b_diff),
            ("A_T", at),
        ]),
        inverse_norm_lower: T::one() / (b * bl + b * root),
        inverse_norm_upper: T::one() / (a * al - b * root),
        series_terms_for_tol: terms,
        residual: T::zero(),
        contraction: None,
    };
    finish(&mm, inv, cert, tol)
}

/// Largest eigenvalue of `sum (m_i T_i - R_i)^* (m_i T_i - R_i)`.
///
/// `M_{m,T,L}` is the adjoint of `M_{conj m,L,T}`, so the reversed order is
/// controlled by `conj(m_i) T_i`; the two agree for real weights.
fn perturbation_mu<T: Real>(m: &WeightSequence<T>, t: &GFrame<T>, reference: &GFrame<T>, order: Order) -> Result<T> {
    let weights = match order {
        Order::LambdaTheta => m.clone(),
        Order::ThetaLambda => m.conjugate(),
    };
    let mt = t.weighted(weights.values())?;
    Ok(frame_bounds(&mt.difference(reference)?).upper)
}

fn resolve_mu<T: Real>(computed: T, supplied: Option<T>) -> Result<T> {
    match supplied {
        None => Ok(computed),
        Some(mu) if mu >= computed * (T::one() - T::tol(tol::CLASS)) - T::tol(tol::RANK) => Ok(mu),
        Some(mu) => Err(Error::hypothesis(
            "sum |(m_i T_i - R_i) f|^2 <= mu |f|^2",
            format!("supplied mu = {mu} is below the optimal constant {computed}"),
        )),
    }
}

/// Inverse of `M_{m,L,T}` (or `M_{m,T,L}`) when
/// `sum |(m_i T_i - L_i) f|^2 <= mu |f|^2` with `mu < A_L^2 / B_L`:
/// `M^-1 = sum_k [S_L^-1 (S_L - M)]^k S_L^-1`.
///
/// `mu` is computed as an eigenvalue; a caller-supplied value is validated
/// against it and then used for the bracket.
pub fn invert_mu_perturb<T: Real>(
    m: &WeightSequence<T>,
    l: &GFrame<T>,
    t: &GFrame<T>,
    order: Order,
    tol: T,
    mu: Option<T>,
) -> Result<(CMatrix<T>, MultiplierCertificate<T>)> {
    check_tol(tol)?;
    let (s, bounds) = require_frame(l)?;
    let (al, bl) = (bounds.lower, bounds.upper);
    let mu = resolve_mu(perturbation_mu(m, t, l, order)?, mu)?;
    let limit = al * al / bl;
    if mu >= limit {
        return Err(Error::hypothesis(
            "mu < A_L^2 / B_L",
            format!("mu = {mu}, A_L^2/B_L = {limit}"),
        ));
    }
    let mm = multiplier_ordered(m, l, t, order)?;
    let s_inv = kernel::inverse(&s)?;
    let x = &s_inv * (&s - &mm);
    let (inv, terms) = neumann_until_small(&x, &s_inv, tol)?;
    let root = (mu * bl).sqrt();
    let a_mt = frame_bounds(&t.weighted(m.values())?).lower;
    let cert = MultiplierCertificate {
        construction: Construction::MuPerturbation,
        hypothesis_values: named(&[("mu", mu), ("A_L", al), ("B_L", bl), ("A_mT", a_mt)]),
        inverse_norm_lower: T::one() / (bl + root),
        inverse_norm_upper: T::one() / (al - root),
        series_terms_for_tol: terms,
        residual: T::zero(),
        contraction: None,
    };
    finish(&mm, inv, cert, tol)
}

/// Inverse of `M_{m,L,T}` (or `M_{m,T,L}`) when `m T` is close to a dual
/// `D` of `L`: `sum |(m_i T_i - D_i) f|^2 <= mu |f|^2`, `mu < 1 / B_L`.
/// The inverse is `sum_k (I - M)^k` with contraction `q = sqrt(mu B_L)`,
/// cut where the geometric tail drops below `tol`.
pub fn invert_dual_mu_perturb<T: Real>(
    m: &WeightSequence<T>,
    l: &GFrame<T>,
    d: &GFrame<T>,
    t: &GFrame<T>,
    order: Order,
    tol: T,
    mu: Option<T>,
) -> Result<(CMatrix<T>, MultiplierCertificate<T>)> {
    check_tol(tol)?;
    let defect = duality_defect(l, d)?;
    if defect > T::tol(tol::DUAL) {
        return Err(Error::NotDual {
            defect: defect.as_f64(),
        });
    }
    let bl = frame_bounds(l).upper;
    let mu = resolve_mu(perturbation_mu(m, t, d, order)?, mu)?;
    if mu * bl >= T::one() {
        return Err(Error::hypothesis(
            "mu < 1 / B_L",
            format!("mu = {mu}, 1/B_L = {}", T::one() / bl),
        ));
    }
    let mm = multiplier_ordered(m, l, t, order)?;
    let q = (mu * bl).sqrt();
    let x = identity::<T>(l.h_dim()) - &mm;
    let k = terms_for_tail(q, tol)?;
    let inv = neumann_partial_sums(&x, None, k + 1).pop().expect("at least one term");
    let a_mt = frame_bounds(&t.weighted(m.values())?).lower;
    let cert = MultiplierCertificate {
        construction: Construction::DualMuPerturbation,
        hypothesis_values: named(&[("mu", mu), ("B_L", bl), ("q", q), ("A_mT", a_mt)]),
        inverse_norm_lower: T::one() / (T::one() + q),
        inverse_norm_upper: T::one() / (T::one() - q),
        series_terms_for_tol: k + 1,
        residual: T::zero(),
        contraction: Some(q),
    };
    finish(&mm, inv, cert, tol)
}

/// Dense inverse with the exact norm as a degenerate bracket.
pub fn invert_direct<T: Real>(
    m: &WeightSequence<T>,
    l: &GFrame<T>,
    t: &GFrame<T>,
    order: Order,
) -> Result<(CMatrix<T>, MultiplierCertificate<T>)> {
    let mm = multiplier_ordered(m, l, t, order)?;
    let inv = kernel::inverse(&mm)?;
    let norm = op_norm(&inv);
    let cert = MultiplierCertificate {
        construction: Construction::Direct,
        hypothesis_values: Vec::new(),
        inverse_norm_lower: norm,
        inverse_norm_upper: norm,
        series_terms_for_tol: 0,
        residual: T::zero(),
        contraction: None,
    };
    finish(&mm, inv, cert, T::zero())
}

/// `1 / (B_other |M^-1|^2)`: the lower frame bound inherited by the weighted
/// family opposite to the Bessel family with upper bound `B_other`.
pub fn lower_bound_from_invertible<T: Real>(mm: &CMatrix<T>, b_other: T) -> Result<T> {
    if b_other <= T::zero() {
        return Err(Error::NonPositiveInput(format!("upper bound {b_other}")));
    }
    let inv = kernel::inverse(mm)?;
    let n = op_norm(&inv);
    Ok(T::one() / (b_other * n * n))
}

/// Which weighted family a lower bound is claimed for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `{ m_i L_i }`, bound uses `B_T`.
    WeightedFirst,
    /// `{ m_i T_i }`, bound uses `B_L`.
    WeightedSecond,
}

/// Lower frame bound for `m L` or `m T` from an invertible `M_{m,L,T}`.
pub fn weighted_family_lower_bound<T: Real>(
    m: &WeightSequence<T>,
    l: &GFrame<T>,
    t: &GFrame<T>,
    side: Side,
) -> Result<T> {
    let mm = multiplier(m, l, t)?;
    let other = match side {
        Side::WeightedFirst => frame_bounds(t).upper,
        Side::WeightedSecond => frame_bounds(l).upper,
    };
    lower_bound_from_invertible(&mm, other)
}

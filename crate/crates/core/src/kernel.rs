//! Dense complex-matrix primitives: spectral ranges, square roots, polar
//! factors and the unitary-averaging constructions.

use nalgebra::DVector;
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{all_finite, cabs, CMatrix, Real};
use crate::tol;

/// Isometry and positive factor of `M = isometry * positive`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarParts<T: Real> {
    /// `rows x cols` with orthonormal columns; unitary when `M` is square.
    pub isometry: CMatrix<T>,
    /// `cols x cols` Hermitian PSD, the principal square root of `M^* M`.
    pub positive: CMatrix<T>,
}

fn check_finite<T: Real>(m: &CMatrix<T>) -> Result<()> {
    if all_finite(m) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

fn check_square<T: Real>(m: &CMatrix<T>) -> Result<()> {
    if m.is_square() {
        Ok(())
    } else {
        Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        })
    }
}

pub fn identity<T: Real>(n: usize) -> CMatrix<T> {
    CMatrix::identity(n, n)
}

/// Thin SVD `M = U diag(sigma) V^*` with `sigma` descending.
///
/// One-sided Jacobi on the columns of `M` (or of `M^*` when wide). Columns of
/// `U` for zero singular values are left zero.
pub(crate) struct Svd<T: Real> {
    pub u: CMatrix<T>,
    pub sigma: Vec<T>,
    pub v: CMatrix<T>,
}

const JACOBI_SWEEPS: usize = 80;

pub(crate) fn svd<T: Real>(m: &CMatrix<T>) -> Svd<T> {
    if m.nrows() < m.ncols() {
        let t = svd(&m.adjoint());
        return Svd {
            u: t.v,
            sigma: t.sigma,
            v: t.u,
        };
    }
    let (rows, n) = m.shape();
    let mut a = m.clone();
    let mut v = identity::<T>(n);
    let eps = T::lit(T::EPS);
    for _ in 0..JACOBI_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = a.column(p).norm_squared();
                let beta = a.column(q).norm_squared();
                let gamma = a.column(p).dotc(&a.column(q));
                let g = cabs(gamma);
                if g == T::zero() || g <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                // rephase column q so that <a_p, a_q> = g is real
                let phase = Complex::new(gamma.re / g, -gamma.im / g);
                let zeta = (beta - alpha) / (T::lit(2.0) * g);
                let t = if zeta >= T::zero() { T::one() } else { -T::one() }
                    / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                for mat in [&mut a, &mut v] {
                    for i in 0..mat.nrows() {
                        let xp = mat[(i, p)];
                        let xq = mat[(i, q)] * phase;
                        mat[(i, p)] = xp.scale(c) - xq.scale(s);
                        mat[(i, q)] = xp.scale(s) + xq.scale(c);
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let norms: Vec<T> = (0..n).map(|j| a.column(j).norm()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap_or(std::cmp::Ordering::Equal));
    let mut u = CMatrix::zeros(rows, n);
    let mut v_sorted = CMatrix::zeros(n, n);
    let mut sigma = Vec::with_capacity(n);
    for (k, &j) in order.iter().enumerate() {
        let s = norms[j];
        if s > T::zero() {
            u.set_column(k, &a.column(j).unscale(s));
        }
        v_sorted.set_column(k, &v.column(j));
        sigma.push(s);
    }
    Svd { u, sigma, v: v_sorted }
}

/// Singular values in descending order.
pub fn singular_values<T: Real>(m: &CMatrix<T>) -> DVector<T> {
    if m.is_empty() {
        return DVector::zeros(0);
    }
    DVector::from_vec(svd(m).sigma)
}

/// Operator norm, the largest singular value.
pub fn op_norm<T: Real>(m: &CMatrix<T>) -> T {
    singular_values(m).iter().copied().fold(T::zero(), T::max)
}

/// Smallest singular value of a square or tall matrix.
pub fn min_singular_value<T: Real>(m: &CMatrix<T>) -> T {
    singular_values(m)
        .iter()
        .copied()
        .fold(T::max_value().unwrap_or_else(T::one), T::min)
}

pub fn hermitian_defect<T: Real>(m: &CMatrix<T>) -> T {
    (m - m.adjoint()).norm()
}

pub fn hermitian_part<T: Real>(m: &CMatrix<T>) -> CMatrix<T> {
    (m + m.adjoint()).scale(T::lit(0.5))
}

/// `|U^* U - I|_F`; zero for isometries.
pub fn isometry_defect<T: Real>(u: &CMatrix<T>) -> T {
    (u.adjoint() * u - identity::<T>(u.ncols())).norm()
}

/// `|U^* U - I|_F + |U U^* - I|_F` for square `U`.
pub fn unitarity_defect<T: Real>(u: &CMatrix<T>) -> T {
    isometry_defect(u) + (u * u.adjoint() - identity::<T>(u.nrows())).norm()
}

fn herm_threshold<T: Real>(m: &CMatrix<T>) -> T {
    T::tol(tol::HERM) * T::one().max(m.norm())
}

fn check_hermitian<T: Real>(m: &CMatrix<T>) -> Result<()> {
    check_finite(m)?;
    check_square(m)?;
    let defect = hermitian_defect(m);
    if defect > herm_threshold(m) {
        return Err(Error::NotHermitian {
            defect: defect.as_f64(),
        });
    }
    Ok(())
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
///
/// Only the Hermitian part of `m` is decomposed.
pub fn hermitian_eigen<T: Real>(m: &CMatrix<T>) -> Result<(DVector<T>, CMatrix<T>)> {
    check_hermitian(m)?;
    let eig = hermitian_part(m).symmetric_eigen();
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = DVector::from_iterator(n, order.iter().map(|&k| eig.eigenvalues[k]));
    let mut vectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok((values, vectors))
}

/// Smallest and largest eigenvalue of a Hermitian matrix.
pub fn spectral_range<T: Real>(m: &CMatrix<T>) -> Result<(T, T)> {
    let (values, _) = hermitian_eigen(m)?;
    let n = values.len();
    if n == 0 {
        return Err(Error::NotSquare { rows: 0, cols: 0 });
    }
    Ok((values[0], values[n - 1]))
}

/// `Q diag(f(lambda)) Q^*` for a Hermitian matrix with eigenpairs `(values, vectors)`.
pub fn spectral_apply<T: Real>(values: &DVector<T>, vectors: &CMatrix<T>, f: impl Fn(T) -> Complex<T>) -> CMatrix<T> {
    let mut scaled = vectors.clone();
    for (j, &lambda) in values.iter().enumerate() {
        let fj = f(lambda);
        scaled.column_mut(j).iter_mut().for_each(|z| *z *= fj);
    }
    scaled * vectors.adjoint()
}

/// Principal square root of a Hermitian PSD matrix.
pub fn psd_sqrt<T: Real>(m: &CMatrix<T>) -> Result<CMatrix<T>> {
    let (values, vectors) = hermitian_eigen(m)?;
    let floor = -T::tol(tol::PSD) * T::one().max(m.norm());
    if let Some(&bad) = values.iter().find(|&&v| v < floor) {
        return Err(Error::NegativeEigenvalue { value: bad.as_f64() });
    }
    let root = spectral_apply(&values, &vectors, |v| Complex::new(v.max(T::zero()).sqrt(), T::zero()));
    Ok(hermitian_part(&root))
}

/// Dense inverse via LU; `Singular` when no inverse exists.
pub fn inverse<T: Real>(m: &CMatrix<T>) -> Result<CMatrix<T>> {
    check_finite(m)?;
    check_square(m)?;
    let inv = m.clone().try_inverse().ok_or(Error::Singular)?;
    if all_finite(&inv) {
        Ok(inv)
    } else {
        Err(Error::Singular)
    }
}

/// Fills the columns of `basis` not listed in `kept` with an orthonormal
/// completion. Candidates are the standard basis vectors; at each step the
/// candidate with the largest component orthogonal to the current columns is
/// taken, so the result is deterministic.
fn complete_orthonormal<T: Real>(basis: &mut CMatrix<T>, kept: &[bool]) {
    let rows = basis.nrows();
    let mut accepted: Vec<usize> = (0..basis.ncols()).filter(|&j| kept[j]).collect();
    let missing: Vec<usize> = (0..basis.ncols()).filter(|&j| !kept[j]).collect();
    for target in missing {
        let mut best: Option<(T, CVec<T>)> = None;
        for e in 0..rows {
            let mut v = CVec::<T>::zeros(rows);
            v[e] = Complex::new(T::one(), T::zero());
            for _ in 0..2 {
                for &j in &accepted {
                    let q = basis.column(j);
                    let proj = q.dotc(&v);
                    v -= q * proj;
                }
            }
            let n = v.norm();
            if best.as_ref().is_none_or(|(bn, _)| n > *bn) {
                best = Some((n, v));
            }
        }
        let (n, v) = best.expect("rows > 0");
        basis.set_column(target, &v.unscale(n));
        accepted.push(target);
    }
}

type CVec<T> = nalgebra::DVector<Complex<T>>;

/// Polar decomposition `M = W P` of a matrix with `rows >= cols`.
///
/// Computed from the SVD `M = U Sigma V^*` as `W = U V^*`, `P = V Sigma V^*`.
/// Left singular vectors belonging to (numerically) zero singular values are
/// replaced by a pivoted Gram-Schmidt completion, so `W` is always an
/// isometry and, for square `M`, unitary.
pub fn polar_decompose<T: Real>(m: &CMatrix<T>) -> Result<PolarParts<T>> {
    check_finite(m)?;
    let (rows, cols) = m.shape();
    if rows < cols || cols == 0 {
        return Err(Error::WideMatrix { rows, cols });
    }
    let Svd { mut u, sigma, v } = svd(m);
    let smax = sigma.first().copied().unwrap_or_else(T::zero);
    let cutoff = T::tol(tol::RANK) * T::one().max(smax);
    let kept: Vec<bool> = sigma.iter().map(|&s| s > cutoff).collect();
    if kept.iter().any(|k| !k) {
        complete_orthonormal(&mut u, &kept);
    }
    let v_t = v.adjoint();
    let isometry = &u * &v_t;
    let mut vs = v;
    for (j, &s) in sigma.iter().enumerate() {
        let sj = Complex::new(s, T::zero());
        vs.column_mut(j).iter_mut().for_each(|z| *z *= sj);
    }
    let positive = hermitian_part(&(vs * v_t));
    Ok(PolarParts { isometry, positive })
}

/// Writes a contraction as the average of two unitaries.
///
/// With `A = W P`, set `B = P + i sqrt(I - P^2)`; then `U1 = W B` and
/// `U2 = W B^*` are unitary and `(U1 + U2) / 2 = A`.
pub fn unitary_pair_from_contraction<T: Real>(a: &CMatrix<T>) -> Result<(CMatrix<T>, CMatrix<T>)> {
    check_finite(a)?;
    check_square(a)?;
    let norm = op_norm(a);
    let limit = T::one() + T::tol(tol::NORM);
    if norm > limit {
        return Err(Error::NormTooLarge {
            norm: norm.as_f64(),
            limit: limit.as_f64(),
        });
    }
    let polar = polar_decompose(a)?;
    let b = unit_lift(&polar.positive)?;
    let u1 = &polar.isometry * &b;
    let u2 = &polar.isometry * b.adjoint();
    Ok((u1, u2))
}

/// `P + i sqrt(I - P^2)` for Hermitian `P` with spectrum in `[0, 1]`,
/// evaluated on a single eigenbasis so the result is unitary to roundoff.
pub(crate) fn unit_lift<T: Real>(p: &CMatrix<T>) -> Result<CMatrix<T>> {
    let (values, vectors) = hermitian_eigen(p)?;
    Ok(spectral_apply(&values, &vectors, |x| {
        let x = x.max(T::zero()).min(T::one());
        Complex::new(x, (T::one() - x * x).max(T::zero()).sqrt())
    }))
}

/// Writes a matrix of norm at most 1/3 as the average of three unitaries.
///
/// `U1` is the unitary polar factor of `3A`; `C = (3A - U1) / 2` is a
/// contraction and splits into `U2`, `U3` by [`unitary_pair_from_contraction`].
pub fn unitary_triple_from_small_norm<T: Real>(a: &CMatrix<T>) -> Result<(CMatrix<T>, CMatrix<T>, CMatrix<T>)> {
    check_finite(a)?;
    check_square(a)?;
    let norm = op_norm(a);
    let limit = T::one() / T::lit(3.0) + T::tol(tol::NORM);
    if norm > limit {
        return Err(Error::NormTooLarge {
            norm: norm.as_f64(),
            limit: limit.as_f64(),
        });
    }
    let three_a = a.scale(T::lit(3.0));
    let u1 = polar_decompose(&three_a)?.isometry;
    let contraction = (&three_a - &u1).scale(T::lit(0.5));
    let (u2, u3) = unitary_pair_from_contraction(&contraction)?;
    Ok((u1, u2, u3))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_cmatrix, random_unitary, seeded};
    use crate::scalar::{c, cdiag, cmat_real};

    fn close(a: &CMatrix<f64>, b: &CMatrix<f64>, eps: f64) -> bool {
        (a - b).norm() <= eps
    }

    #[test]
    fn spectral_range_examples() {
        assert_eq!(spectral_range(&identity::<f64>(2)).unwrap(), (1.0, 1.0));
        let (lo, hi) = spectral_range(&cdiag::<f64>(&[1.0, 4.0])).unwrap();
        assert!((lo - 1.0).abs() < 1e-14 && (hi - 4.0).abs() < 1e-14);
    }

    #[test]
    fn spectral_range_rejects_non_hermitian_and_nan() {
        let m = cmat_real::<f64>(&[&[1.0, 2.0], &[0.0, 1.0]]);
        assert!(matches!(spectral_range(&m), Err(Error::NotHermitian { .. })));
        let mut n = identity::<f64>(2);
        n[(0, 1)] = c(f64::NAN, 0.0);
        assert_eq!(spectral_range(&n), Err(Error::NonFinite));
    }

    #[test]
    fn polar_examples() {
        let p = polar_decompose(&identity::<f64>(2)).unwrap();
        assert!(close(&p.isometry, &identity(2), 1e-14));
        assert!(close(&p.positive, &identity(2), 1e-14));

        let d = cdiag::<f64>(&[2.0, 3.0]);
        let p = polar_decompose(&d).unwrap();
        assert!(close(&p.isometry, &identity(2), 1e-13));
        assert!(close(&p.positive, &d, 1e-13));

        let rot = cmat_real::<f64>(&[&[0.0, -1.0], &[1.0, 0.0]]);
        // rot^* rot = I by hand, so the positive factor is I.
        let p = polar_decompose(&rot).unwrap();
        assert!(close(&p.isometry, &rot, 1e-13));
        assert!(close(&p.positive, &identity(2), 1e-13));
    }

    #[test]
    fn polar_singular_is_completed_to_unitary() {
        let m = cmat_real::<f64>(&[&[1.0, 1.0, 0.0], &[1.0, 1.0, 0.0], &[0.0, 0.0, 0.0]]);
        let p = polar_decompose(&m).unwrap();
        assert!(unitarity_defect(&p.isometry) < 1e-12);
        assert!(close(&(&p.isometry * &p.positive), &m, 1e-12));
        let again = polar_decompose(&m).unwrap();
        assert_eq!(p, again);
    }

    #[test]
    fn polar_tall_and_wide() {
        let mut rng = seeded(3);
        let m: CMatrix<f64> = random_cmatrix(&mut rng, 5, 3);
        let p = polar_decompose(&m).unwrap();
        assert!(isometry_defect(&p.isometry) < 1e-12);
        assert!(close(&(&p.isometry * &p.positive), &m, 1e-12));
        let pp = &p.positive * &p.positive;
        assert!(close(&pp, &(m.adjoint() * &m), 1e-11));
        assert!(matches!(polar_decompose(&m.adjoint()), Err(Error::WideMatrix { .. })));
    }

    #[test]
    fn pair_examples() {
        let (u1, u2) = unitary_pair_from_contraction(&identity::<f64>(2)).unwrap();
        assert!(close(&u1, &identity(2), 1e-12) && close(&u2, &identity(2), 1e-12));

        let (u1, u2) = unitary_pair_from_contraction(&CMatrix::<f64>::zeros(2, 2)).unwrap();
        let i = identity::<f64>(2).map(|z| z * c(0.0, 1.0));
        assert!(close(&u1, &i, 1e-12));
        assert!(close(&u2, &(-i), 1e-12));

        let a = cdiag::<f64>(&[0.6, 0.8]);
        let (u1, u2) = unitary_pair_from_contraction(&a).unwrap();
        assert!(close(&((&u1 + &u2).scale(0.5)), &a, 1e-10));
        assert!(unitarity_defect(&u1) <= 1e-10 && unitarity_defect(&u2) <= 1e-10);

        let big = cdiag::<f64>(&[1.5, 0.1]);
        assert!(matches!(
            unitary_pair_from_contraction(&big),
            Err(Error::NormTooLarge { .. })
        ));
    }

    #[test]
    fn triple_examples() {
        let third = identity::<f64>(2).scale(1.0 / 3.0);
        let (u1, u2, u3) = unitary_triple_from_small_norm(&third).unwrap();
        let i = identity::<f64>(2).map(|z| z * c(0.0, 1.0));
        assert!(close(&u1, &identity(2), 1e-12));
        assert!(close(&u2, &i, 1e-12));
        assert!(close(&u3, &(-i), 1e-12));

        let zero = CMatrix::<f64>::zeros(2, 2);
        let (u1, u2, u3) = unitary_triple_from_small_norm(&zero).unwrap();
        assert!(((&u1 + &u2 + &u3).scale(1.0 / 3.0)).norm() <= 1e-10);
        for u in [&u1, &u2, &u3] {
            assert!(unitarity_defect(u) <= 1e-10);
        }

        let mut rng = seeded(11);
        let x: CMatrix<f64> = random_cmatrix(&mut rng, 3, 3);
        let a = x.scale(0.3 / op_norm(&x));
        let (u1, u2, u3) = unitary_triple_from_small_norm(&a).unwrap();
        assert!(close(&((&u1 + &u2 + &u3).scale(1.0 / 3.0)), &a, 1e-9));

        assert!(matches!(
            unitary_triple_from_small_norm(&identity::<f64>(2).scale(0.5)),
            Err(Error::NormTooLarge { .. })
        ));
    }

    #[test]
    fn psd_sqrt_examples() {
        assert!(close(&psd_sqrt(&identity::<f64>(3)).unwrap(), &identity(3), 1e-14));
        let r = psd_sqrt(&cdiag::<f64>(&[4.0, 9.0])).unwrap();
        assert!(close(&r, &cdiag(&[2.0, 3.0]), 1e-13));

        let mut rng = seeded(5);
        let x: CMatrix<f64> = random_cmatrix(&mut rng, 4, 4);
        let g = x.adjoint() * &x;
        let r = psd_sqrt(&g).unwrap();
        assert!((&r * &r - &g).norm() <= 1e-9);
        assert!(hermitian_defect(&r) < 1e-12);

        assert!(matches!(
            psd_sqrt(&cdiag::<f64>(&[1.0, -1.0])),
            Err(Error::NegativeEigenvalue { .. })
        ));
        // Slightly negative roundoff is clamped.
        assert!(psd_sqrt(&cdiag::<f64>(&[1.0, -1e-12])).is_ok());
    }

    #[test]
    fn spectral_range_is_unitarily_invariant() {
        let mut rng = seeded(21);
        for _ in 0..50 {
            let x: CMatrix<f64> = random_cmatrix(&mut rng, 5, 5);
            let h = hermitian_part(&x);
            let u: CMatrix<f64> = random_unitary(&mut rng, 5);
            let (a, b) = spectral_range(&h).unwrap();
            let (a2, b2) = spectral_range(&(u.adjoint() * &h * &u)).unwrap();
            assert!((a - a2).abs() < 1e-9 && (b - b2).abs() < 1e-9);
        }
    }

    #[test]
    fn single_precision_pair() {
        let a = cdiag::<f32>(&[0.25, 0.75, 1.0]);
        let (u1, u2) = unitary_pair_from_contraction(&a).unwrap();
        assert!(((&u1 + &u2).scale(0.5) - &a).norm() < 1e-5);
        assert!(unitarity_defect(&u1) < 1e-5);
    }

    #[test]
    fn svd_of_rank_deficient_matrices() {
        // rank one; an earlier bidiagonal SVD recomposed this with error 3e-4
        let m = CMatrix::<f64>::from_row_slice(
            2,
            2,
            &[
                c(0.0045725038504761395, -0.014334339977972621),
                c(-0.005824285293153542, 0.001552170755098517),
                c(0.02168360334464714, -0.01571767589936729),
                c(-0.009985759659956905, -0.003923100106808269),
            ],
        );
        let p = polar_decompose(&m).unwrap();
        assert!((&p.isometry * &p.positive - &m).norm() < 1e-15);
        assert!(unitarity_defect(&p.isometry) < 1e-14);

        let mut rng = seeded(9);
        for trial in 0..3000 {
            let n = 1 + trial % 6;
            let r = 1 + trial % n;
            let a: CMatrix<f64> = random_cmatrix(&mut rng, n + trial % 2, r) * random_cmatrix::<f64, _>(&mut rng, r, n);
            let s = svd(&a);
            let sigma = CMatrix::from_diagonal(&DVector::from_iterator(n, s.sigma.iter().map(|&x| c(x, 0.0))));
            assert!((&s.u * sigma * s.v.adjoint() - &a).norm() <= 1e-13 * a.norm());
            assert!(unitarity_defect(&s.v) < 1e-13);
            assert!(s.sigma.windows(2).all(|w| w[0] >= w[1]));
            assert_eq!(s.sigma.iter().filter(|&&x| x > 1e-10 * s.sigma[0]).count(), r);
        }
    }
}

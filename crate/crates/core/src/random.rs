//! Deterministic random matrices and families for test corpora.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::scalar::{CMatrix, CVector, Real};

pub type DetRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> DetRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_complex<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(T::lit(re), T::lit(im))
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn random_cmatrix<T: Real, R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix<T> {
    let mut m = CMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = random_complex(rng);
        }
    }
    m
}

pub fn random_cvector<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> CVector<T> {
    CVector::from_fn(n, |_, _| random_complex(rng))
}

pub fn random_unit_vector<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> CVector<T> {
    loop {
        let v = random_cvector::<T, R>(rng, n);
        let norm = v.norm();
        if norm > T::lit(1e-6) {
            return v.unscale(norm);
        }
    }
}

/// `rows x cols` isometry (`rows >= cols`) from the QR factor of a Gaussian
/// matrix, with column phases fixed by the diagonal of R.
pub fn random_isometry<T: Real, R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix<T> {
    assert!(rows >= cols, "isometry needs rows >= cols");
    let g = random_cmatrix::<T, R>(rng, rows, cols);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..cols {
        let d = r[(j, j)];
        let n = crate::scalar::cabs(d);
        if n > T::zero() {
            let phase = d / Complex::new(n, T::zero());
            q.column_mut(j).iter_mut().for_each(|z| *z *= phase);
        }
    }
    q
}

pub fn random_unitary<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix<T> {
    random_isometry(rng, n, n)
}

/// Uniform real in `[lo, hi)`.
pub fn uniform<T: Real, R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> T {
    T::lit(rng.random_range(lo..hi))
}

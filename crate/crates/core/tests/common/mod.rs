//! Reference computations that avoid the library's linear algebra.
//!
//! Everything here is written with explicit loops so that a bug in the
//! eigen/SVD/inverse code paths cannot hide itself.

#![allow(dead_code)]

use gframe::{CMatrix, CVector, GFrame};
use num_complex::Complex64;

pub type M = CMatrix<f64>;

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

pub fn matmul(a: &M, b: &M) -> M {
    assert_eq!(a.ncols(), b.nrows());
    let mut out = M::zeros(a.nrows(), b.ncols());
    for i in 0..a.nrows() {
        for j in 0..b.ncols() {
            let mut acc = zero();
            for k in 0..a.ncols() {
                acc += a[(i, k)] * b[(k, j)];
            }
            out[(i, j)] = acc;
        }
    }
    out
}

pub fn adjoint(a: &M) -> M {
    M::from_fn(a.ncols(), a.nrows(), |i, j| a[(j, i)].conj())
}

pub fn eye(n: usize) -> M {
    M::from_fn(n, n, |i, j| if i == j { Complex64::new(1.0, 0.0) } else { zero() })
}

pub fn frob(a: &M) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs(a: &M) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `sum_i L_i^* L_i`, entry by entry.
pub fn frame_operator(f: &GFrame<f64>) -> M {
    let d = f.h_dim();
    let mut s = M::zeros(d, d);
    for b in f.blocks() {
        for r in 0..b.nrows() {
            for i in 0..d {
                for j in 0..d {
                    s[(i, j)] += b[(r, i)].conj() * b[(r, j)];
                }
            }
        }
    }
    s
}

/// `psi_{i,k} = L_i^* e_k`: the conjugated rows of each block.
pub fn induced_vectors(f: &GFrame<f64>) -> Vec<(usize, CVector<f64>)> {
    let mut out = Vec::new();
    for (i, b) in f.blocks().iter().enumerate() {
        for r in 0..b.nrows() {
            out.push((i, CVector::from_fn(b.ncols(), |j, _| b[(r, j)].conj())));
        }
    }
    out
}

/// Gauss-Jordan elimination with partial pivoting; `None` when a pivot
/// vanishes relative to the matrix scale.
pub fn gauss_inverse(a: &M) -> Option<M> {
    let n = a.nrows();
    assert_eq!(n, a.ncols());
    let scale = max_abs(a).max(f64::MIN_POSITIVE);
    let mut w = a.clone();
    let mut inv = eye(n);
    for col in 0..n {
        let pivot = (col..n).max_by(|&x, &y| w[(x, col)].norm().total_cmp(&w[(y, col)].norm()))?;
        if w[(pivot, col)].norm() <= 1e-14 * scale {
            return None;
        }
        w.swap_rows(col, pivot);
        inv.swap_rows(col, pivot);
        let p = w[(col, col)];
        for j in 0..n {
            w[(col, j)] /= p;
            inv[(col, j)] /= p;
        }
        for r in 0..n {
            if r != col {
                let factor = w[(r, col)];
                if factor != zero() {
                    for j in 0..n {
                        let (wc, ic) = (w[(col, j)], inv[(col, j)]);
                        w[(r, j)] -= factor * wc;
                        inv[(r, j)] -= factor * ic;
                    }
                }
            }
        }
    }
    Some(inv)
}

fn rayleigh(h: &M, v: &CVector<f64>) -> f64 {
    let hv = CVector::from_fn(v.len(), |i, _| (0..v.len()).map(|k| h[(i, k)] * v[k]).sum());
    let num: Complex64 = v.iter().zip(hv.iter()).map(|(a, b)| a.conj() * b).sum();
    num.re / v.iter().map(|z| z.norm_sqr()).sum::<f64>()
}

/// Dominant eigenvector of a PSD matrix by power iteration with repeated
/// squaring: 60 squarings apply `P^(2^60)`, so even nearly degenerate top
/// eigenvalues separate.
fn dominant_vector(p: &M) -> CVector<f64> {
    let n = p.nrows();
    let mut q = p.clone();
    for _ in 0..60 {
        let s = max_abs(&q);
        if s == 0.0 {
            break;
        }
        q = q.unscale(s);
        q = matmul(&q, &q);
    }
    let best = (0..n)
        .max_by(|&x, &y| {
            let nx: f64 = q.column(x).iter().map(|z| z.norm_sqr()).sum();
            let ny: f64 = q.column(y).iter().map(|z| z.norm_sqr()).sum();
            nx.total_cmp(&ny)
        })
        .unwrap_or(0);
    let v = CVector::from_fn(n, |i, _| q[(i, best)]);
    if v.iter().all(|z| *z == zero()) {
        CVector::from_fn(n, |i, _| if i == 0 { Complex64::new(1.0, 0.0) } else { zero() })
    } else {
        v
    }
}

fn gershgorin(h: &M) -> f64 {
    (0..h.nrows())
        .map(|i| (0..h.ncols()).map(|j| h[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Extremes of the Rayleigh quotient of a Hermitian `h` over random samples
/// and the two shifted power-iteration vectors.
pub fn rayleigh_extremes(h: &M, samples: &[CVector<f64>]) -> (f64, f64) {
    let n = h.nrows();
    let g = gershgorin(h);
    let top = dominant_vector(&(h + eye(n).scale(g)));
    let bottom = dominant_vector(&(eye(n).scale(g) - h));
    let mut lo = rayleigh(h, &bottom).min(rayleigh(h, &top));
    let mut hi = rayleigh(h, &top).max(rayleigh(h, &bottom));
    for v in samples {
        let r = rayleigh(h, v);
        lo = lo.min(r);
        hi = hi.max(r);
    }
    (lo, hi)
}

/// Largest singular value via the top eigenvalue of `A^* A`.
pub fn power_norm(a: &M) -> f64 {
    let g = matmul(&adjoint(a), a);
    let v = dominant_vector(&g);
    rayleigh(&g, &v).max(0.0).sqrt()
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn lambda_min(h: &M) -> f64 {
    rayleigh_extremes(h, &[]).0
}

pub fn lambda_max(h: &M) -> f64 {
    rayleigh_extremes(h, &[]).1
}

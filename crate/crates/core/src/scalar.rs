//! Scalar abstraction shared by every module.
//!
//! All linear algebra runs over `Complex<T>` where `T` is a real floating
//! point type. Tolerances are specified in `f64` and widened to a floor of a
//! few thousand ulps so that single precision remains usable.

use std::fmt::{Debug, Display};

use nalgebra::{DMatrix, DVector, RealField};
use num_complex::Complex;
use num_traits::{FromPrimitive, ToPrimitive};

/// Real field usable as the component type of the complex scalars.
pub trait Real: RealField + Copy + FromPrimitive + ToPrimitive + Display + Debug {
    /// Machine epsilon of the underlying type.
    const EPS: f64;

    /// Converts an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// A tolerance of `base`, never tighter than `1000 * EPS`.
    fn tol(base: f64) -> Self {
        Self::lit(base.max(1000.0 * Self::EPS))
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {
    const EPS: f64 = f32::EPSILON as f64;
}

impl Real for f64 {
    const EPS: f64 = f64::EPSILON;
}

/// Dense complex matrix. Every operator in the crate is one of these.
pub type CMatrix<T> = DMatrix<Complex<T>>;

/// Dense complex column vector.
pub type CVector<T> = DVector<Complex<T>>;

pub fn c<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

pub fn re<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

/// Promotes a real matrix to a complex one.
pub fn complexify<T: Real>(m: &DMatrix<T>) -> CMatrix<T> {
    m.map(|x| Complex::new(x, T::zero()))
}

/// Builds a complex matrix from real `f64` rows.
pub fn cmat_real<T: Real>(rows: &[&[f64]]) -> CMatrix<T> {
    let r = rows.len();
    let cols = rows.first().map_or(0, |row| row.len());
    CMatrix::from_fn(r, cols, |i, j| re(T::lit(rows[i][j])))
}

/// Builds a complex diagonal matrix from real `f64` values.
pub fn cdiag<T: Real>(values: &[f64]) -> CMatrix<T> {
    let n = values.len();
    CMatrix::from_fn(n, n, |i, j| {
        if i == j {
            re(T::lit(values[i]))
        } else {
            Complex::new(T::zero(), T::zero())
        }
    })
}

pub fn all_finite<T: Real>(m: &CMatrix<T>) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Modulus of a complex scalar.
pub fn cabs<T: Real>(z: Complex<T>) -> T {
    (z.re * z.re + z.im * z.im).sqrt()
}

//! Random instance builders that satisfy the hypotheses of each
//! construction by design. Used by `generate`, `selftest` and the test
//! suites.

use num_complex::Complex;
use rand::Rng;

use crate::controlled::ControlOperator;
use crate::frame::{frame_bounds, frame_operator, GFrame};
use crate::kernel::{identity, inverse, op_norm};
use crate::multiplier::{Order, WeightSequence};
use crate::random::{random_cmatrix, random_isometry, random_unitary, uniform};
use crate::scalar::{CMatrix, Real};

/// Block sizes in `1..=3`, at most 8 blocks, summing to at least `d`.
pub fn random_partition<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Vec<usize> {
    let min_blocks = d.div_ceil(3).max(1);
    let k = rng.random_range(min_blocks..=8.max(min_blocks));
    let mut sizes: Vec<usize> = (0..k).map(|_| rng.random_range(1..=3)).collect();
    let mut i = 0;
    while sizes.iter().sum::<usize>() < d {
        if sizes[i] < 3 {
            sizes[i] += 1;
        }
        i = (i + 1) % k;
    }
    sizes
}

/// Block sizes in `1..=3` summing to exactly `d`.
pub fn exact_partition<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Vec<usize> {
    let mut sizes = Vec::new();
    let mut left = d;
    while left > 0 {
        let s = rng.random_range(1..=left.min(3));
        sizes.push(s);
        left -= s;
    }
    sizes
}

/// `n x d` matrix `U diag(s) V^*` with singular values drawn from `[lo, hi]`.
pub fn conditioned_matrix<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize, d: usize, lo: f64, hi: f64) -> CMatrix<T> {
    let u = random_isometry::<T, R>(rng, n, d);
    let v = random_unitary::<T, R>(rng, d);
    let s = CMatrix::<T>::from_diagonal(&nalgebra::DVector::from_fn(d, |_, _| {
        Complex::new(uniform::<T, R>(rng, lo, hi), T::zero())
    }));
    u * s * v.adjoint()
}

/// A g-frame with frame bounds inside `[lo^2, hi^2]`.
pub fn conditioned_gframe<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    d: usize,
    partition: &[usize],
    lo: f64,
    hi: f64,
) -> GFrame<T> {
    let n = partition.iter().sum();
    GFrame::from_analysis(&conditioned_matrix(rng, n, d, lo, hi), partition).expect("partition fits")
}

/// A Bessel family on the same partition with upper bound exactly `bound`.
pub fn bessel_with_bound<T: Real, R: Rng + ?Sized>(rng: &mut R, d: usize, partition: &[usize], bound: T) -> GFrame<T> {
    let n = partition.iter().sum();
    let z = random_cmatrix::<T, R>(rng, n, d);
    let scale = bound.sqrt() / op_norm(&z);
    GFrame::from_analysis(&z.scale(scale), partition).expect("partition fits")
}

/// A dual of `l` other than the canonical one: analysis `T S^-1 + (I - T S^-1 T^*) Z`.
pub fn alternate_dual<T: Real, R: Rng + ?Sized>(rng: &mut R, l: &GFrame<T>, spread: f64) -> GFrame<T> {
    let t = l.analysis_matrix();
    let n = t.nrows();
    let s_inv = inverse(&frame_operator(l)).expect("frame operator invertible");
    let canonical = &t * &s_inv;
    let proj = identity::<T>(n) - &canonical * t.adjoint();
    let z = random_cmatrix::<T, R>(rng, n, l.h_dim()).scale(T::lit(spread));
    GFrame::from_analysis(&(canonical + proj * z), &l.partition()).expect("same partition")
}

/// Complex weights `1 + lambda u_i` with `|u_i| <= 1`.
pub fn weights_near_one<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize, lambda: T) -> WeightSequence<T> {
    let values = (0..n)
        .map(|_| {
            let r: T = uniform(rng, 0.0, 1.0);
            let phi: T = uniform(rng, 0.0, std::f64::consts::TAU);
            Complex::new(T::one() + lambda * r * phi.cos(), lambda * r * phi.sin())
        })
        .collect();
    WeightSequence::new(values).expect("finite weights")
}

/// Real weights of one sign with moduli in `[a, b]`.
pub fn sign_definite_weights<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    a: f64,
    b: f64,
    negative: bool,
) -> WeightSequence<T> {
    let sign = if negative { -1.0 } else { 1.0 };
    let values: Vec<T> = (0..n).map(|_| T::lit(sign) * uniform::<T, R>(rng, a, b)).collect();
    WeightSequence::from_real(&values).expect("finite weights")
}

/// Complex weights with moduli in `[a, b]`.
pub fn complex_weights<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize, a: f64, b: f64) -> WeightSequence<T> {
    let values = (0..n)
        .map(|_| {
            let r: T = uniform(rng, a, b);
            let phi: T = uniform(rng, 0.0, std::f64::consts::TAU);
            Complex::new(r * phi.cos(), r * phi.sin())
        })
        .collect();
    WeightSequence::new(values).expect("finite weights")
}

pub fn random_order<R: Rng + ?Sized>(rng: &mut R) -> Order {
    if rng.random_bool(0.5) {
        Order::LambdaTheta
    } else {
        Order::ThetaLambda
    }
}

/// `c0 I + c1 S + c2 S^2` with coefficients in `[0.5, 2]`.
pub fn commuting_control<T: Real, R: Rng + ?Sized>(rng: &mut R, f: &GFrame<T>) -> CMatrix<T> {
    let s = frame_operator(f);
    let c: [T; 3] = std::array::from_fn(|_| uniform(rng, 0.5, 2.0));
    identity::<T>(f.h_dim()).scale(c[0]) + s.scale(c[1]) + (&s * &s).scale(c[2])
}

/// A positive definite control that generically does not commute with `S`.
pub fn generic_positive_control<T: Real, R: Rng + ?Sized>(rng: &mut R, d: usize) -> CMatrix<T> {
    let x = conditioned_matrix::<T, R>(rng, d, d, 0.7, 1.4);
    x.adjoint() * x
}

/// Inputs for one multiplier inversion.
#[derive(Debug, Clone)]
pub struct InversionCase<T: Real> {
    pub m: WeightSequence<T>,
    pub l: GFrame<T>,
    /// Second family, or the dual for the dual-based constructions.
    pub other: GFrame<T>,
    /// A dual of `l` when the construction needs one besides `other`.
    pub dual: Option<GFrame<T>>,
    pub g: Option<CMatrix<T>>,
    pub order: Order,
}

fn base_frame<T: Real, R: Rng + ?Sized>(rng: &mut R, d: usize) -> GFrame<T> {
    let p = random_partition(rng, d);
    conditioned_gframe(rng, d, &p, 0.7, 1.4)
}

pub fn bijection_case<T: Real, R: Rng + ?Sized>(rng: &mut R, d: usize) -> InversionCase<T> {
    let l = base_frame::<T, R>(rng, d);
    let g = conditioned_matrix::<T, R>(rng, d, d, 0.5, 2.0);
    let negative = rng.random_bool(0.5);
    let m = sign_definite_weights(rng, l.len(), 0.5, 2.0, negative);
    let other = l.map_blocks(|_, b| b * &g).expect("same shape");
    InversionCase {
        m,
        l,
        other,
        dual: None,
        g: Some(g),
        order: Order::LambdaTheta,
    }
}

pub fn dual_neumann_case<T: Real, R: Rng + ?Sized>(rng: &mut R, d: usize) -> InversionCase<T> {
    let l = base_frame::<T, R>(rng, d);
    let dual = alternate_dual(rng, &l, 0.3);
    let bl = frame_bounds(&l).upper;
    let bd = frame_bounds(&dual).upper;
    let q: T = uniform(rng, 0.05, 0.9);
    let m = weights_near_one(rng, l.len(), q / (bl * bd).sqrt());
    let order = random_order(rng);
    InversionCase {
        m,
        l,
        other: dual,
        dual: None,
        g: None,
        order,
    }
}

pub fn canonical_case<T: Real, R: Rng + ?Sized>(rng: &mut R, d: usize) -> InversionCase<T> {
    let l = base_frame::<T, R>(rng, d);
    let b = frame_bounds(&l);
    let q: T = uniform(rng, 0.05, 0.9);
    let m = weights_near_one(rng, l.len(), q * (b.lower / b.upper).sqrt());
    let other = crate::frame::canonical_dual(&l).expect("frame");
    let order = random_order(rng);
    InversionCase {
        m,
        l,
        other,
        dual: None,
        g: None,
        order,
    }
}

pub fn bessel_perturb_case<T: Real, R: Rng + ?Sized>(rng: &mut R, d: usize) -> InversionCase<T> {
    let l = base_frame::<T, R>(rng, d);
    let b = frame_bounds(&l);
    let rho: T = uniform(rng, 0.02, 0.3);
    let e = bessel_with_bound(rng, d, &l.partition(), rho * b.lower * b.lower / b.upper);
    let other = l.map_blocks(|i, blk| blk + &e.blocks()[i]).expect("same shape");
    // b / a < A / sqrt(B_E B) = 1 / sqrt(rho)
    let ratio = (T::one() / rho.sqrt()).as_f64();
    let a = 0.5;
    let hi = a * (1.0 + 0.9 * (ratio - 1.0));
    let negative = rng.random_bool(0.5);
    let m = sign_definite_weights(rng, l.len(), a, hi, negative);
    let order = random_order(rng);
    InversionCase {
        m,
        l,
        other,
        dual: None,
        g: None,
        order,
    }
}

/// The weight multiplying the second family in the perturbation hypothesis:
/// `m_i`, or `conj(m_i)` for the reversed order.
fn effective_weight<T: Real>(m: &WeightSequence<T>, i: usize, order: Order) -> Complex<T> {
    match order {
        Order::LambdaTheta => m.values()[i],
        Order::ThetaLambda => m.values()[i].conj(),
    }
}

pub fn mu_perturb_case<T: Real, R: Rng + ?Sized>(rng: &mut R, d: usize) -> InversionCase<T> {
    let l = base_frame::<T, R>(rng, d);
    let b = frame_bounds(&l);
    let rho: T = uniform(rng, 0.02, 0.8);
    let e = bessel_with_bound(rng, d, &l.partition(), rho * b.lower * b.lower / b.upper);
    let m = complex_weights(rng, l.len(), 0.5, 2.0);
    let order = random_order(rng);
    let other = l
        .map_blocks(|i, blk| (blk + &e.blocks()[i]).map(|z| z / effective_weight(&m, i, order)))
        .expect("same shape");
    InversionCase {
        m,
        l,
        other,
        dual: None,
        g: None,
        order,
    }
}

pub fn dual_mu_case<T: Real, R: Rng + ?Sized>(rng: &mut R, d: usize) -> InversionCase<T> {
    let l = base_frame::<T, R>(rng, d);
    let dual = alternate_dual(rng, &l, 0.3);
    let bl = frame_bounds(&l).upper;
    let rho: T = uniform(rng, 0.02, 0.8);
    let e = bessel_with_bound(rng, d, &l.partition(), rho / bl);
    let m = complex_weights(rng, l.len(), 0.5, 2.0);
    let order = random_order(rng);
    let other = dual
        .map_blocks(|i, blk| (blk + &e.blocks()[i]).map(|z| z / effective_weight(&m, i, order)))
        .expect("same shape");
    InversionCase {
        m,
        l,
        other,
        dual: Some(dual),
        g: None,
        order,
    }
}

/// A family whose blocks act inside eigenspaces of a positive `C`, so that
/// `C L_i^* = w_i L_i^*` holds exactly.
pub fn eigen_controlled_case<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    d: usize,
) -> (GFrame<T>, ControlOperator<T>, Vec<T>) {
    let u = random_unitary::<T, R>(rng, d);
    let groups = exact_partition(rng, d);
    let mut blocks = Vec::new();
    let mut expected = Vec::new();
    let mut eig = vec![T::zero(); d];
    let mut start = 0;
    for &k in &groups {
        let c: T = uniform(rng, 0.5, 3.0);
        eig[start..start + k].iter_mut().for_each(|e| *e = c);
        let q = u.columns(start, k).into_owned();
        // enough rows to span the eigenspace, split over one or two blocks
        let rows = k + rng.random_range(0..=1);
        let r = conditioned_matrix::<T, R>(rng, rows, k, 0.7, 1.4);
        let split = if rows > 1 && rng.random_bool(0.5) {
            rng.random_range(1..rows)
        } else {
            rows
        };
        for (lo, hi) in [(0, split), (split, rows)] {
            if hi > lo {
                blocks.push(r.rows(lo, hi - lo) * q.adjoint());
                expected.push(c);
            }
        }
        start += k;
    }
    let diag = CMatrix::<T>::from_diagonal(&nalgebra::DVector::from_iterator(
        d,
        eig.iter().map(|&e| Complex::new(e, T::zero())),
    ));
    let c = ControlOperator::new(&u * diag * u.adjoint()).expect("positive definite");
    (GFrame::new(d, blocks).expect("valid blocks"), c, expected)
}

//! The g-frame data model: families of operator blocks over a common space,
//! the frame operator, optimal bounds, classification, canonical duals and
//! the correspondence with induced vector frames.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{self, identity, spectral_range};
use crate::scalar::{all_finite, CMatrix, CVector, Real};
use crate::tol;

/// A family of blocks `L_i : H -> H_i`, block `i` a `d_i x d` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct GFrame<T: Real> {
    h_dim: usize,
    blocks: Vec<CMatrix<T>>,
    pub label: Option<String>,
}

impl<T: Real> GFrame<T> {
    pub fn new(h_dim: usize, blocks: Vec<CMatrix<T>>) -> Result<Self> {
        if h_dim == 0 {
            return Err(Error::InvalidFrame("h_dim must be positive".into()));
        }
        if blocks.is_empty() {
            return Err(Error::InvalidFrame("block list is empty".into()));
        }
        for (i, b) in blocks.iter().enumerate() {
            if b.ncols() != h_dim {
                return Err(Error::InvalidFrame(format!(
                    "block {i} has {} columns, expected {h_dim}",
                    b.ncols()
                )));
            }
            if b.nrows() == 0 {
                return Err(Error::InvalidFrame(format!("block {i} has no rows")));
            }
            if !all_finite(b) {
                return Err(Error::NonFinite);
            }
        }
        Ok(GFrame {
            h_dim,
            blocks,
            label: None,
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// The identity g-frame on `C^d`: `d` blocks, each a standard basis row.
    pub fn identity(d: usize) -> Self {
        let blocks = (0..d)
            .map(|i| {
                let mut row = CMatrix::zeros(1, d);
                row[(0, i)] = Complex::new(T::one(), T::zero());
                row
            })
            .collect();
        GFrame::new(d, blocks).expect("identity frame is valid")
    }

    /// Splits a stacked analysis matrix into blocks of the given heights.
    pub fn from_analysis(t: &CMatrix<T>, partition: &[usize]) -> Result<Self> {
        let total: usize = partition.iter().sum();
        if total != t.nrows() || partition.contains(&0) {
            return Err(Error::BadPartition {
                partition: partition.to_vec(),
                count: t.nrows(),
            });
        }
        let mut start = 0;
        let blocks = partition
            .iter()
            .map(|&rows| {
                let b = t.rows(start, rows).into_owned();
                start += rows;
                b
            })
            .collect();
        GFrame::new(t.ncols(), blocks)
    }

    pub fn h_dim(&self) -> usize {
        self.h_dim
    }

    pub fn blocks(&self) -> &[CMatrix<T>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Block heights `d_i`.
    pub fn partition(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.nrows()).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.blocks.iter().map(|b| b.nrows()).sum()
    }

    /// The stacked analysis matrix `T` (`sum d_i` rows, `d` columns).
    pub fn analysis_matrix(&self) -> CMatrix<T> {
        let mut t = CMatrix::zeros(self.total_dim(), self.h_dim);
        let mut start = 0;
        for b in &self.blocks {
            t.rows_mut(start, b.nrows()).copy_from(b);
            start += b.nrows();
        }
        t
    }

    /// Applies `f(i, block)` to every block.
    pub fn map_blocks(&self, mut f: impl FnMut(usize, &CMatrix<T>) -> CMatrix<T>) -> Result<Self> {
        let blocks: Vec<_> = self.blocks.iter().enumerate().map(|(i, b)| f(i, b)).collect();
        let h_dim = blocks.first().map_or(self.h_dim, |b| b.ncols());
        GFrame::new(h_dim, blocks)
    }

    /// `{ c_i L_i }`.
    pub fn weighted(&self, weights: &[Complex<T>]) -> Result<Self> {
        if weights.len() != self.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} weights for {} blocks",
                weights.len(),
                self.len()
            )));
        }
        self.map_blocks(|i, b| b.map(|z| z * weights[i]))
    }

    pub fn scaled(&self, c: T) -> Self {
        self.map_blocks(|_, b| b.scale(c)).expect("scaling keeps shapes")
    }

    /// Blockwise difference `self - other`.
    pub fn difference(&self, other: &GFrame<T>) -> Result<Self> {
        check_same_shape(self, other)?;
        self.map_blocks(|i, b| b - &other.blocks[i])
    }
}

pub(crate) fn check_same_shape<T: Real>(a: &GFrame<T>, b: &GFrame<T>) -> Result<()> {
    if a.h_dim != b.h_dim || a.partition() != b.partition() {
        return Err(Error::ShapeMismatch(format!(
            "families differ: dim {} partition {:?} vs dim {} partition {:?}",
            a.h_dim,
            a.partition(),
            b.h_dim,
            b.partition()
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    /// Never produced for finite families.
    NotBessel,
    BesselOnly,
    GFrame,
    TightGFrame,
    ParsevalGFrame,
}

/// Optimal bounds: the extreme eigenvalues of the frame operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameBounds<T: Real> {
    pub lower: T,
    pub upper: T,
    pub classification: Classification,
}

impl<T: Real> FrameBounds<T> {
    /// Bounds from the spectral range of a frame-operator-like PSD matrix.
    pub fn from_operator(s: &CMatrix<T>) -> Result<Self> {
        let (lo, hi) = spectral_range(s)?;
        Ok(Self::from_extremes(lo.max(T::zero()), hi.max(T::zero())))
    }

    pub fn from_extremes(lower: T, upper: T) -> Self {
        let rank_tol = T::tol(tol::RANK);
        let class_tol = T::tol(tol::CLASS);
        let classification = if lower <= rank_tol {
            Classification::BesselOnly
        } else if (upper - lower).abs() <= class_tol * upper {
            if (upper - T::one()).abs() <= class_tol {
                Classification::ParsevalGFrame
            } else {
                Classification::TightGFrame
            }
        } else {
            Classification::GFrame
        };
        FrameBounds {
            lower,
            upper,
            classification,
        }
    }

    pub fn is_frame(&self) -> bool {
        !matches!(
            self.classification,
            Classification::NotBessel | Classification::BesselOnly
        )
    }
}

/// An ordered family of vectors labelled by `(block, row)` pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorFrame<T: Real> {
    pub h_dim: usize,
    pub vectors: Vec<CVector<T>>,
    pub indices: Vec<(usize, usize)>,
}

impl<T: Real> VectorFrame<T> {
    /// Vectors with indices `(0,0), (0,1), ...` grouped by `partition`.
    pub fn new(h_dim: usize, vectors: Vec<CVector<T>>) -> Result<Self> {
        if vectors.iter().any(|v| v.len() != h_dim) {
            return Err(Error::ShapeMismatch("vector length differs from h_dim".into()));
        }
        let indices = (0..vectors.len()).map(|k| (k, 0)).collect();
        Ok(VectorFrame {
            h_dim,
            vectors,
            indices,
        })
    }

    /// `sum_k psi_k psi_k^*`.
    pub fn frame_operator(&self) -> CMatrix<T> {
        let mut s = CMatrix::zeros(self.h_dim, self.h_dim);
        for v in &self.vectors {
            s += v * v.adjoint();
        }
        s
    }

    pub fn bounds(&self) -> Result<FrameBounds<T>> {
        FrameBounds::from_operator(&self.frame_operator())
    }

    /// Synthesis matrix with the vectors as columns.
    pub fn synthesis_matrix(&self) -> CMatrix<T> {
        let mut m = CMatrix::zeros(self.h_dim, self.vectors.len());
        for (k, v) in self.vectors.iter().enumerate() {
            m.set_column(k, v);
        }
        m
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationReport<T: Real> {
    pub is_g_bessel: bool,
    pub is_g_frame: bool,
    pub is_tight: bool,
    pub is_parseval: bool,
    pub is_g_complete: bool,
    pub is_g_riesz: bool,
    pub is_g_onb: bool,
    pub bounds: FrameBounds<T>,
    pub riesz_bounds: Option<(T, T)>,
    /// Number of eigenvalues of `S` above the rank threshold.
    pub rank: usize,
}

/// `S = sum_i L_i^* L_i`.
pub fn frame_operator<T: Real>(f: &GFrame<T>) -> CMatrix<T> {
    let mut s = CMatrix::zeros(f.h_dim, f.h_dim);
    for b in &f.blocks {
        s += b.adjoint() * b;
    }
    s
}

pub fn frame_bounds<T: Real>(f: &GFrame<T>) -> FrameBounds<T> {
    FrameBounds::from_operator(&frame_operator(f)).expect("frame operator is Hermitian")
}

pub fn classify<T: Real>(f: &GFrame<T>) -> ClassificationReport<T> {
    let s = frame_operator(f);
    let (eigs, _) = kernel::hermitian_eigen(&s).expect("frame operator is Hermitian");
    let bounds = FrameBounds::from_extremes(eigs[0].max(T::zero()), eigs[eigs.len() - 1].max(T::zero()));
    let rank_tol = T::tol(tol::RANK);
    let rank = eigs.iter().filter(|&&e| e > rank_tol).count();
    let is_g_complete = rank == f.h_dim;
    let is_g_frame = bounds.is_frame();
    let square = f.total_dim() == f.h_dim;
    let is_g_riesz = square && is_g_frame;
    let riesz_bounds = is_g_riesz.then_some((bounds.lower, bounds.upper));
    let is_g_onb = square && {
        let t = f.analysis_matrix();
        kernel::isometry_defect(&t) <= T::tol(tol::CLASS) * T::lit(f.h_dim as f64).sqrt()
    };
    ClassificationReport {
        is_g_bessel: true,
        is_g_frame,
        is_tight: matches!(
            bounds.classification,
            Classification::TightGFrame | Classification::ParsevalGFrame
        ),
        is_parseval: bounds.classification == Classification::ParsevalGFrame,
        is_g_complete,
        is_g_riesz,
        is_g_onb: is_g_onb && is_g_riesz,
        bounds,
        riesz_bounds,
        rank,
    }
}

/// Requires a g-frame and returns its frame operator and bounds.
pub(crate) fn require_frame<T: Real>(f: &GFrame<T>) -> Result<(CMatrix<T>, FrameBounds<T>)> {
    let s = frame_operator(f);
    let bounds = FrameBounds::from_operator(&s)?;
    if !bounds.is_frame() {
        return Err(Error::NotAFrame {
            lower: bounds.lower.as_f64(),
        });
    }
    Ok((s, bounds))
}

/// The canonical dual `{ L_i S^-1 }`.
pub fn canonical_dual<T: Real>(f: &GFrame<T>) -> Result<GFrame<T>> {
    let (s, _) = require_frame(f)?;
    let s_inv = kernel::inverse(&s)?;
    f.map_blocks(|_, b| b * &s_inv)
}

/// The induced vectors `psi_{i,k} = L_i^* e_{i,k}` (conjugated rows).
pub fn induced_frame<T: Real>(f: &GFrame<T>) -> VectorFrame<T> {
    let mut vectors = Vec::with_capacity(f.total_dim());
    let mut indices = Vec::with_capacity(f.total_dim());
    for (i, b) in f.blocks.iter().enumerate() {
        for k in 0..b.nrows() {
            vectors.push(b.row(k).adjoint());
            indices.push((i, k));
        }
    }
    VectorFrame {
        h_dim: f.h_dim,
        vectors,
        indices,
    }
}

/// Groups vectors into blocks whose rows are the conjugated vectors.
pub fn gframe_from_vector_frame<T: Real>(v: &VectorFrame<T>, partition: &[usize]) -> Result<GFrame<T>> {
    let total: usize = partition.iter().sum();
    if total != v.vectors.len() || partition.is_empty() || partition.contains(&0) {
        return Err(Error::BadPartition {
            partition: partition.to_vec(),
            count: v.vectors.len(),
        });
    }
    let mut it = v.vectors.iter();
    let blocks = partition
        .iter()
        .map(|&rows| {
            let mut b = CMatrix::zeros(rows, v.h_dim);
            for k in 0..rows {
                let vec = it.next().expect("partition checked");
                b.set_row(k, &vec.adjoint());
            }
            b
        })
        .collect();
    GFrame::new(v.h_dim, blocks)
}

/// `|sum_i D_i^* L_i - I|_F`.
pub fn duality_defect<T: Real>(f: &GFrame<T>, d: &GFrame<T>) -> Result<T> {
    check_same_shape(f, d)?;
    let mut acc = CMatrix::zeros(f.h_dim, f.h_dim);
    for (l, dd) in f.blocks.iter().zip(&d.blocks) {
        acc += dd.adjoint() * l;
    }
    Ok((acc - identity::<T>(f.h_dim)).norm())
}

/// True when `sum_i D_i^* L_i = I` within tolerance.
pub fn verify_duality<T: Real>(f: &GFrame<T>, d: &GFrame<T>) -> Result<bool> {
    Ok(duality_defect(f, d)? <= T::tol(tol::DUAL))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_cmatrix, random_unitary, seeded};
    use crate::scalar::{c, cdiag, cmat_real};

    fn diag12() -> GFrame<f64> {
        GFrame::new(2, vec![cmat_real(&[&[1.0, 0.0]]), cmat_real(&[&[0.0, 2.0]])]).unwrap()
    }

    #[test]
    fn rejects_bad_blocks() {
        assert!(GFrame::<f64>::new(2, vec![]).is_err());
        let err = GFrame::<f64>::new(2, vec![cmat_real(&[&[1.0, 0.0]]), cmat_real(&[&[1.0]])]);
        assert!(matches!(err, Err(Error::InvalidFrame(msg)) if msg.contains("block 1")));
    }

    #[test]
    fn frame_operator_examples() {
        assert_eq!(frame_operator(&GFrame::<f64>::identity(2)), identity(2));
        assert_eq!(frame_operator(&diag12()), cdiag(&[1.0, 4.0]));
    }

    #[test]
    fn bounds_examples() {
        let b = frame_bounds(&GFrame::<f64>::identity(2));
        assert_eq!((b.lower, b.upper), (1.0, 1.0));
        assert_eq!(b.classification, Classification::ParsevalGFrame);
        let b = frame_bounds(&diag12());
        assert!((b.lower - 1.0).abs() < 1e-14 && (b.upper - 4.0).abs() < 1e-14);
        assert_eq!(b.classification, Classification::GFrame);
        let b = frame_bounds(&GFrame::<f64>::identity(2).scaled(3.0));
        assert_eq!(b.classification, Classification::TightGFrame);
    }

    #[test]
    fn classify_examples() {
        let r = classify(&GFrame::<f64>::identity(2));
        assert!(r.is_g_bessel && r.is_g_frame && r.is_tight && r.is_parseval);
        assert!(r.is_g_complete && r.is_g_riesz && r.is_g_onb);

        let h = 1.0 / 2f64.sqrt();
        let over = GFrame::<f64>::new(
            2,
            vec![
                cmat_real(&[&[1.0, 0.0]]),
                cmat_real(&[&[0.0, 1.0]]),
                cmat_real(&[&[h, h]]),
            ],
        )
        .unwrap();
        let r = classify(&over);
        assert!(r.is_g_frame && r.is_g_complete && !r.is_g_riesz && !r.is_g_onb);
        assert!(r.riesz_bounds.is_none());

        let deficient = GFrame::<f64>::new(2, vec![cmat_real(&[&[1.0, 0.0]])]).unwrap();
        let r = classify(&deficient);
        assert!(!r.is_g_complete && !r.is_g_frame && r.is_g_bessel);
        assert_eq!(r.bounds.lower, 0.0);
        assert_eq!(r.rank, 1);
    }

    #[test]
    fn canonical_dual_examples() {
        let id = GFrame::<f64>::identity(2);
        assert_eq!(canonical_dual(&id).unwrap(), id);

        let dual = canonical_dual(&diag12()).unwrap();
        assert!((&dual.blocks()[1] - cmat_real(&[&[0.0, 0.5]])).norm() < 1e-15);
        let b = frame_bounds(&dual);
        assert!((b.lower - 0.25).abs() < 1e-14 && (b.upper - 1.0).abs() < 1e-14);

        let deficient = GFrame::<f64>::new(2, vec![cmat_real(&[&[1.0, 0.0]])]).unwrap();
        assert!(matches!(canonical_dual(&deficient), Err(Error::NotAFrame { .. })));
    }

    #[test]
    fn canonical_dual_reconstructs_and_is_involutive() {
        let mut rng = seeded(8);
        for _ in 0..20 {
            let t = random_cmatrix(&mut rng, 6, 4);
            let f = GFrame::<f64>::from_analysis(&t, &[2, 1, 3]).unwrap();
            let d = canonical_dual(&f).unwrap();
            assert!(duality_defect(&f, &d).unwrap() < 1e-10);
            let dd = canonical_dual(&d).unwrap();
            for (a, b) in dd.blocks().iter().zip(f.blocks()) {
                assert!((a - b).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn induced_examples() {
        let v = induced_frame(&GFrame::<f64>::identity(2));
        assert_eq!(v.vectors[0].as_slice(), &[c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(v.vectors[1].as_slice(), &[c(0.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(v.indices, vec![(0, 0), (1, 0)]);

        let mut row = CMatrix::<f64>::zeros(1, 2);
        row[(0, 0)] = c(1.0, 0.0);
        row[(0, 1)] = c(0.0, 1.0);
        let v = induced_frame(&GFrame::new(2, vec![row]).unwrap());
        assert_eq!(v.vectors[0].as_slice(), &[c(1.0, 0.0), c(0.0, -1.0)]);
    }

    #[test]
    fn from_vector_frame_examples() {
        let v = induced_frame(&GFrame::<f64>::identity(2));
        assert_eq!(gframe_from_vector_frame(&v, &[1, 1]).unwrap(), GFrame::identity(2));
        let single = gframe_from_vector_frame(&v, &[2]).unwrap();
        assert_eq!(single.blocks()[0], identity(2));
        assert!(matches!(
            gframe_from_vector_frame(&v, &[3]),
            Err(Error::BadPartition { .. })
        ));
    }

    #[test]
    fn duality_examples() {
        let id = GFrame::<f64>::identity(2);
        assert!(verify_duality(&id, &id).unwrap());
        assert!(!verify_duality(&id, &id.scaled(2.0)).unwrap());
        assert!(!verify_duality(&id, &diag12()).unwrap());
        let other = GFrame::<f64>::new(2, vec![identity(2)]).unwrap();
        assert!(matches!(verify_duality(&id, &other), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn rebasing_block_spaces_leaves_frame_operator_unchanged() {
        let mut rng = seeded(44);
        let t = random_cmatrix(&mut rng, 5, 3);
        let f = GFrame::<f64>::from_analysis(&t, &[2, 3]).unwrap();
        let g = f
            .map_blocks(|_, b| random_unitary::<f64, _>(&mut rng, b.nrows()) * b)
            .unwrap();
        assert!((frame_operator(&f) - frame_operator(&g)).norm() < 1e-12);
        assert_eq!(classify(&f).is_g_frame, classify(&g).is_g_frame);
    }
}

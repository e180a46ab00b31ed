//! JSON instance files.
//!
//! Matrices are stored row-major as nested arrays of `[re, im]` pairs:
//!
//! ```json
//! { "schema_version": 1, "h_dim": 2,
//!   "blocks": [ { "dim": 1, "matrix": [[[1, 0], [0, 0]]] },
//!               { "dim": 1, "matrix": [[[0, 0], [1, 0]]] } ] }
//! ```
//!
//! Optional top-level fields: `label`, `weights` (one `[re, im]` per block),
//! `control` (an `h_dim x h_dim` matrix), `companion` (a second block list)
//! and `payloads`, an object with the keys `bijection` (matrix `G`), `dual`
//! (block list), `w_alt` (weights), `coisometry` (matrix `K`) and `mu`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::GFrame;
use crate::multiplier::WeightSequence;
use crate::scalar::{CMatrix, Real};

pub const SCHEMA_VERSION: u32 = 1;

type RawComplex = [f64; 2];
type RawMatrix = Vec<Vec<RawComplex>>;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBlock {
    dim: usize,
    matrix: RawMatrix,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPayloads {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    bijection: Option<RawMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dual: Option<Vec<RawBlock>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    w_alt: Option<Vec<RawComplex>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coisometry: Option<RawMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mu: Option<f64>,
}

impl RawPayloads {
    fn is_empty(&self) -> bool {
        self.bijection.is_none()
            && self.dual.is_none()
            && self.w_alt.is_none()
            && self.coisometry.is_none()
            && self.mu.is_none()
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    h_dim: usize,
    blocks: Vec<RawBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weights: Option<Vec<RawComplex>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    control: Option<RawMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    companion: Option<Vec<RawBlock>>,
    #[serde(default, skip_serializing_if = "RawPayloads::is_empty")]
    payloads: RawPayloads,
}

/// Extra inputs used by individual operations.
#[derive(Debug, Clone, PartialEq)]
pub struct Payloads<T: Real> {
    /// Bijection `G` with second family `L_i G`.
    pub bijection: Option<CMatrix<T>>,
    /// A dual of the primary family.
    pub dual: Option<GFrame<T>>,
    /// Alternative positive weights for the weighted equivalence checks.
    pub w_alt: Option<WeightSequence<T>>,
    /// Co-isometry `K` mapping the primary family's space onto `C^rows`.
    pub coisometry: Option<CMatrix<T>>,
    /// Perturbation constant for the `mu`-based inversions.
    pub mu: Option<T>,
}

impl<T: Real> Default for Payloads<T> {
    fn default() -> Self {
        Payloads {
            bijection: None,
            dual: None,
            w_alt: None,
            coisometry: None,
            mu: None,
        }
    }
}

/// A validated instance: a g-frame plus optional companions.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceFile<T: Real> {
    pub label: Option<String>,
    pub frame: GFrame<T>,
    pub weights: Option<WeightSequence<T>>,
    pub control: Option<CMatrix<T>>,
    pub companion: Option<GFrame<T>>,
    pub payloads: Payloads<T>,
}

impl<T: Real> InstanceFile<T> {
    pub fn new(frame: GFrame<T>) -> Self {
        InstanceFile {
            label: frame.label.clone(),
            frame,
            weights: None,
            control: None,
            companion: None,
            payloads: Payloads::default(),
        }
    }

    /// Pretty-printed JSON; [`parse_instance`] inverts it exactly.
    pub fn to_json(&self) -> String {
        let raw = RawInstance {
            schema_version: SCHEMA_VERSION,
            label: self.label.clone(),
            h_dim: self.frame.h_dim(),
            blocks: blocks_out(&self.frame),
            weights: self.weights.as_ref().map(weights_out),
            control: self.control.as_ref().map(matrix_out),
            companion: self.companion.as_ref().map(blocks_out),
            payloads: RawPayloads {
                bijection: self.payloads.bijection.as_ref().map(matrix_out),
                dual: self.payloads.dual.as_ref().map(blocks_out),
                w_alt: self.payloads.w_alt.as_ref().map(weights_out),
                coisometry: self.payloads.coisometry.as_ref().map(matrix_out),
                mu: self.payloads.mu.map(|x| x.as_f64()),
            },
        };
        let mut s = serde_json::to_string_pretty(&raw).expect("plain data serializes");
        s.push('\n');
        s
    }
}

fn complex_out<T: Real>(z: &Complex<T>) -> RawComplex {
    [z.re.as_f64(), z.im.as_f64()]
}

fn matrix_out<T: Real>(m: &CMatrix<T>) -> RawMatrix {
    m.row_iter().map(|row| row.iter().map(complex_out).collect()).collect()
}

fn blocks_out<T: Real>(f: &GFrame<T>) -> Vec<RawBlock> {
    f.blocks()
        .iter()
        .map(|b| RawBlock {
            dim: b.nrows(),
            matrix: matrix_out(b),
        })
        .collect()
}

fn weights_out<T: Real>(w: &WeightSequence<T>) -> Vec<RawComplex> {
    w.values().iter().map(complex_out).collect()
}

fn complex_in<T: Real>(z: &RawComplex, path: &str) -> Result<Complex<T>> {
    if !(z[0].is_finite() && z[1].is_finite()) {
        return Err(Error::schema(path, "non-finite entry"));
    }
    Ok(Complex::new(T::lit(z[0]), T::lit(z[1])))
}

fn matrix_in<T: Real>(m: &RawMatrix, rows: usize, cols: usize, path: &str) -> Result<CMatrix<T>> {
    if m.len() != rows {
        return Err(Error::schema(path, format!("has {} rows, expected {rows}", m.len())));
    }
    let mut out = CMatrix::zeros(rows, cols);
    for (i, row) in m.iter().enumerate() {
        if row.len() != cols {
            return Err(Error::schema(
                format!("{path}[{i}]"),
                format!("has {} columns, expected {cols}", row.len()),
            ));
        }
        for (j, z) in row.iter().enumerate() {
            out[(i, j)] = complex_in(z, &format!("{path}[{i}][{j}]"))?;
        }
    }
    Ok(out)
}

/// A matrix whose shape is read from the data, `cols` fixed.
fn wide_matrix_in<T: Real>(m: &RawMatrix, cols: usize, path: &str) -> Result<CMatrix<T>> {
    if m.is_empty() {
        return Err(Error::schema(path, "matrix has no rows"));
    }
    matrix_in(m, m.len(), cols, path)
}

fn blocks_in<T: Real>(raw: &[RawBlock], h_dim: usize, path: &str) -> Result<GFrame<T>> {
    if raw.is_empty() {
        return Err(Error::schema(path, "block list is empty"));
    }
    let mut blocks = Vec::with_capacity(raw.len());
    for (i, b) in raw.iter().enumerate() {
        if b.dim == 0 {
            return Err(Error::schema(
                format!("{path}[{i}].dim"),
                "block dimension must be positive",
            ));
        }
        blocks.push(matrix_in(&b.matrix, b.dim, h_dim, &format!("{path}[{i}].matrix"))?);
    }
    GFrame::new(h_dim, blocks).map_err(|e| Error::schema(path, e.to_string()))
}

fn weights_in<T: Real>(raw: &[RawComplex], count: usize, path: &str) -> Result<WeightSequence<T>> {
    if raw.len() != count {
        return Err(Error::schema(
            path,
            format!("has {} weights, expected one per block ({count})", raw.len()),
        ));
    }
    let values = raw
        .iter()
        .enumerate()
        .map(|(i, z)| complex_in(z, &format!("{path}[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    WeightSequence::new(values).map_err(|e| Error::schema(path, e.to_string()))
}

/// Parses and validates an instance document.
///
/// Structural errors carry the JSON path of the offending value, e.g.
/// `$.blocks[1].matrix[0]`.
pub fn parse_instance<T: Real>(text: &str) -> Result<InstanceFile<T>> {
    let mut de = serde_json::Deserializer::from_str(text);
    let raw: RawInstance = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let path = if path == "." {
            "$".to_string()
        } else {
            format!("$.{path}")
        };
        Error::schema(path, e.into_inner().to_string())
    })?;
    de.end().map_err(|e| Error::schema("$", e.to_string()))?;

    if raw.schema_version != SCHEMA_VERSION {
        return Err(Error::schema(
            "$.schema_version",
            format!("unsupported version {}, expected {SCHEMA_VERSION}", raw.schema_version),
        ));
    }
    if raw.h_dim == 0 {
        return Err(Error::schema("$.h_dim", "must be positive"));
    }
    let d = raw.h_dim;
    let mut frame: GFrame<T> = blocks_in(&raw.blocks, d, "$.blocks")?;
    frame.label = raw.label.clone();
    let n = frame.len();
    let weights = raw
        .weights
        .as_deref()
        .map(|w| weights_in(w, n, "$.weights"))
        .transpose()?;
    let control = raw
        .control
        .as_ref()
        .map(|m| matrix_in(m, d, d, "$.control"))
        .transpose()?;
    let companion = raw
        .companion
        .as_deref()
        .map(|b| blocks_in(b, d, "$.companion"))
        .transpose()?;
    let p = &raw.payloads;
    let mu = match p.mu {
        Some(x) if !(x.is_finite() && x > 0.0) => {
            return Err(Error::schema("$.payloads.mu", "must be a positive finite number"))
        }
        other => other.map(T::lit),
    };
    let payloads = Payloads {
        bijection: p
            .bijection
            .as_ref()
            .map(|m| matrix_in(m, d, d, "$.payloads.bijection"))
            .transpose()?,
        dual: p
            .dual
            .as_deref()
            .map(|b| blocks_in(b, d, "$.payloads.dual"))
            .transpose()?,
        w_alt: p
            .w_alt
            .as_deref()
            .map(|w| weights_in(w, n, "$.payloads.w_alt"))
            .transpose()?,
        coisometry: p
            .coisometry
            .as_ref()
            .map(|m| wide_matrix_in(m, d, "$.payloads.coisometry"))
            .transpose()?,
        mu,
    };
    Ok(InstanceFile {
        label: raw.label,
        frame,
        weights,
        control,
        companion,
        payloads,
    })
}

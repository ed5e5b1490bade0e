//! Dense complex tensors split into a block of row modes and a block of
//! column modes.
//!
//! Entries are stored row-major over the concatenated multi-index
//! `(i_1, .., i_M, j_1, .., j_N)`. Because the row block comes first, the
//! same buffer read as a `prod(I) x prod(J)` row-major matrix is exactly the
//! matricization used by [`crate::matricize`]; every module relies on this
//! convention.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matricize;

/// Double-precision complex scalar.
pub type C64 = Complex64;

/// Ordered row-mode and column-mode extents of a tensor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ShapeSignature {
    row_extents: Vec<usize>,
    col_extents: Vec<usize>,
}

impl ShapeSignature {
    pub fn new(row_extents: Vec<usize>, col_extents: Vec<usize>) -> Result<Self> {
        if row_extents.is_empty() && col_extents.is_empty() {
            return Err(Error::InvalidSignature(
                "a tensor needs at least one mode".into(),
            ));
        }
        if let Some(pos) = row_extents
            .iter()
            .chain(col_extents.iter())
            .position(|&e| e == 0)
        {
            return Err(Error::InvalidSignature(format!("mode {pos} has extent 0")));
        }
        let count = row_extents
            .iter()
            .chain(col_extents.iter())
            .try_fold(1usize, |acc, &e| acc.checked_mul(e));
        if count.is_none() || count.is_some_and(|c| c > isize::MAX as usize) {
            return Err(Error::InvalidSignature(
                "element count overflows the index space".into(),
            ));
        }
        Ok(Self {
            row_extents,
            col_extents,
        })
    }

    /// Square signature `(extents, extents)`.
    pub fn square(extents: &[usize]) -> Result<Self> {
        Self::new(extents.to_vec(), extents.to_vec())
    }

    pub fn row_extents(&self) -> &[usize] {
        &self.row_extents
    }

    pub fn col_extents(&self) -> &[usize] {
        &self.col_extents
    }

    /// Number of modes in both blocks together.
    pub fn order(&self) -> usize {
        self.row_extents.len() + self.col_extents.len()
    }

    /// Product of the row extents (matricized row count).
    pub fn row_count(&self) -> usize {
        self.row_extents.iter().product()
    }

    /// Product of the column extents (matricized column count).
    pub fn col_count(&self) -> usize {
        self.col_extents.iter().product()
    }

    pub fn element_count(&self) -> usize {
        self.row_count() * self.col_count()
    }

    /// Signature with the two mode blocks exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            row_extents: self.col_extents.clone(),
            col_extents: self.row_extents.clone(),
        }
    }

    pub fn is_square(&self) -> bool {
        self.row_extents == self.col_extents
    }
}

/// Compares two extent lists mode by mode, reporting the first difference.
pub(crate) fn check_extents(op: &'static str, left: &[usize], right: &[usize]) -> Result<()> {
    if let Some(mode) = left.iter().zip(right).position(|(l, r)| l != r) {
        return Err(Error::ShapeMismatch {
            op,
            mode,
            left: left[mode],
            right: right[mode],
        });
    }
    if left.len() != right.len() {
        return Err(Error::OrderMismatch {
            op,
            left: left.len(),
            right: right.len(),
        });
    }
    Ok(())
}

fn check_same_signature(op: &'static str, a: &ShapeSignature, b: &ShapeSignature) -> Result<()> {
    check_extents(op, a.row_extents(), b.row_extents())?;
    // column modes are numbered after the row modes
    check_extents(op, a.col_extents(), b.col_extents()).map_err(|e| match e {
        Error::ShapeMismatch {
            op,
            mode,
            left,
            right,
        } => Error::ShapeMismatch {
            op,
            mode: mode + a.row_extents().len(),
            left,
            right,
        },
        other => other,
    })
}

/// Comparison thresholds shared by the numerical routines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    /// Relative Frobenius threshold used by [`DenseTensor::approx_equal`].
    pub rel_eq: f64,
    /// Relative singular-value cutoff. `None` selects
    /// `f64::EPSILON * max(rows, cols)` for each matrix.
    pub rank_cut: Option<f64>,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rel_eq: 1e-8,
            rank_cut: None,
        }
    }
}

impl Tolerance {
    pub fn new(rel_eq: f64, rank_cut: Option<f64>) -> Result<Self> {
        if !(rel_eq > 0.0 && rel_eq < 1.0) {
            return Err(Error::InvalidSignature(format!(
                "rel_eq must lie in (0, 1), got {rel_eq}"
            )));
        }
        if let Some(cut) = rank_cut {
            if !(cut > 0.0 && cut.is_finite()) {
                return Err(Error::InvalidSignature(format!(
                    "rank_cut must be positive, got {cut}"
                )));
            }
        }
        Ok(Self { rel_eq, rank_cut })
    }

    /// Relative cutoff applied to a `rows x cols` matrix.
    pub fn cutoff(&self, rows: usize, cols: usize) -> f64 {
        self.rank_cut
            .unwrap_or(f64::EPSILON * rows.max(cols) as f64)
    }
}

/// Dense complex tensor with an explicit (row modes, column modes) split.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseTensor {
    signature: ShapeSignature,
    entries: Vec<C64>,
}

impl DenseTensor {
    pub fn new(signature: ShapeSignature, entries: Vec<C64>) -> Result<Self> {
        if entries.len() != signature.element_count() {
            return Err(Error::LengthMismatch {
                expected: signature.element_count(),
                found: entries.len(),
            });
        }
        if let Some(index) = entries.iter().position(|z| !z.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { signature, entries })
    }

    /// Builds a tensor from real entries.
    pub fn from_real(signature: ShapeSignature, values: &[f64]) -> Result<Self> {
        Self::new(
            signature,
            values.iter().map(|&x| C64::new(x, 0.0)).collect(),
        )
    }

    /// Builds a tensor by evaluating `f` at every concatenated multi-index,
    /// in storage order.
    pub fn from_fn(signature: ShapeSignature, mut f: impl FnMut(&[usize]) -> C64) -> Result<Self> {
        let dims: Vec<usize> = signature
            .row_extents()
            .iter()
            .chain(signature.col_extents())
            .copied()
            .collect();
        let mut index = vec![0usize; dims.len()];
        let mut entries = Vec::with_capacity(signature.element_count());
        for _ in 0..signature.element_count() {
            entries.push(f(&index));
            for k in (0..dims.len()).rev() {
                index[k] += 1;
                if index[k] < dims[k] {
                    break;
                }
                index[k] = 0;
            }
        }
        Self::new(signature, entries)
    }

    /// Wraps entries already known to be finite and of the right length.
    pub(crate) fn from_parts(signature: ShapeSignature, entries: Vec<C64>) -> Self {
        debug_assert_eq!(entries.len(), signature.element_count());
        Self { signature, entries }
    }

    pub fn signature(&self) -> &ShapeSignature {
        &self.signature
    }

    pub fn row_extents(&self) -> &[usize] {
        self.signature.row_extents()
    }

    pub fn col_extents(&self) -> &[usize] {
        self.signature.col_extents()
    }

    /// Flat entries in storage order.
    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<C64> {
        self.entries
    }

    /// Linear position of a concatenated multi-index.
    pub fn offset(&self, index: &[usize]) -> Option<usize> {
        let dims = self
            .signature
            .row_extents()
            .iter()
            .chain(self.signature.col_extents());
        if index.len() != self.signature.order() {
            return None;
        }
        let mut offset = 0usize;
        for (&i, &d) in index.iter().zip(dims) {
            if i >= d {
                return None;
            }
            offset = offset * d + i;
        }
        Some(offset)
    }

    pub fn get(&self, index: &[usize]) -> Option<C64> {
        self.offset(index).map(|o| self.entries[o])
    }

    /// Einstein product contracting all column modes of `self` against all
    /// row modes of `other`.
    pub fn einstein_product(&self, other: &DenseTensor) -> Result<DenseTensor> {
        check_extents("einstein_product", self.col_extents(), other.row_extents())?;
        let m = self.signature.row_count();
        let k = self.signature.col_count();
        let n = other.signature.col_count();
        let entries = matricize::gemm(&self.entries, &other.entries, m, k, n);
        let signature =
            ShapeSignature::new(self.row_extents().to_vec(), other.col_extents().to_vec())?;
        Ok(Self::from_parts(signature, entries))
    }

    /// Conjugate transpose: swaps the mode blocks and conjugates every entry.
    pub fn conj_transpose(&self) -> DenseTensor {
        let rows = self.signature.row_count();
        let cols = self.signature.col_count();
        let mut entries = vec![C64::new(0.0, 0.0); self.entries.len()];
        for i in 0..rows {
            for j in 0..cols {
                entries[j * rows + i] = self.entries[i * cols + j].conj();
            }
        }
        Self::from_parts(self.signature.swapped(), entries)
    }

    /// `alpha * a + beta * b` for tensors of identical signature.
    pub fn linear_combine(
        alpha: C64,
        a: &DenseTensor,
        beta: C64,
        b: &DenseTensor,
    ) -> Result<DenseTensor> {
        check_same_signature("linear_combine", &a.signature, &b.signature)?;
        let entries = a
            .entries
            .iter()
            .zip(&b.entries)
            .map(|(x, y)| alpha * x + beta * y)
            .collect::<Vec<_>>();
        // overflow in alpha * x can still produce infinities
        Self::new(a.signature.clone(), entries)
    }

    pub fn add(&self, other: &DenseTensor) -> Result<DenseTensor> {
        Self::linear_combine(C64::new(1.0, 0.0), self, C64::new(1.0, 0.0), other)
    }

    pub fn sub(&self, other: &DenseTensor) -> Result<DenseTensor> {
        Self::linear_combine(C64::new(1.0, 0.0), self, C64::new(-1.0, 0.0), other)
    }

    pub fn scale(&self, alpha: C64) -> DenseTensor {
        Self::from_parts(
            self.signature.clone(),
            self.entries.iter().map(|z| alpha * z).collect(),
        )
    }

    pub fn frobenius_norm(&self) -> f64 {
        frobenius(&self.entries)
    }

    /// `||a - b||_F / max(1, ||a||_F, ||b||_F)`.
    pub fn rel_distance(&self, other: &DenseTensor) -> Result<f64> {
        check_same_signature("rel_distance", &self.signature, &other.signature)?;
        Ok(relative_gap(&self.entries, &other.entries))
    }

    pub fn approx_equal(&self, other: &DenseTensor, tol: &Tolerance) -> Result<bool> {
        Ok(self.rel_distance(other)? <= tol.rel_eq)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }
}

pub(crate) fn frobenius(entries: &[C64]) -> f64 {
    // scaled accumulation avoids overflow for large entries
    let scale = entries.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
    if scale == 0.0 {
        return 0.0;
    }
    let sum: f64 = entries.iter().map(|z| (z / scale).norm_sqr()).sum();
    scale * sum.sqrt()
}

pub(crate) fn relative_gap(a: &[C64], b: &[C64]) -> f64 {
    let diff: Vec<C64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let denom = 1.0f64.max(frobenius(a)).max(frobenius(b));
    frobenius(&diff) / denom
}

/// Einstein product of a chain of tensors, evaluated left to right.
pub fn chain(factors: &[&DenseTensor]) -> Result<DenseTensor> {
    let (first, rest) = factors
        .split_first()
        .ok_or_else(|| Error::InvalidSignature("empty product chain".into()))?;
    rest.iter()
        .try_fold((*first).clone(), |acc, t| acc.einstein_product(t))
}

pub fn einstein_product(a: &DenseTensor, b: &DenseTensor) -> Result<DenseTensor> {
    a.einstein_product(b)
}

pub fn conj_transpose(a: &DenseTensor) -> DenseTensor {
    a.conj_transpose()
}

/// Identity tensor over `extents x extents`.
pub fn identity_tensor(extents: &[usize]) -> Result<DenseTensor> {
    let signature = ShapeSignature::square(extents)?;
    let n = signature.row_count();
    let mut entries = vec![C64::new(0.0, 0.0); n * n];
    for i in 0..n {
        entries[i * n + i] = C64::new(1.0, 0.0);
    }
    Ok(DenseTensor::from_parts(signature, entries))
}

pub fn zero_tensor(signature: ShapeSignature) -> DenseTensor {
    let len = signature.element_count();
    DenseTensor::from_parts(signature, vec![C64::new(0.0, 0.0); len])
}

/// Square diagonal tensor whose diagonal, read in row-major order over the
/// row multi-index, is `diag_values`.
pub fn diagonal_tensor(extents: &[usize], diag_values: &[C64]) -> Result<DenseTensor> {
    let signature = ShapeSignature::square(extents)?;
    let n = signature.row_count();
    if diag_values.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: diag_values.len(),
        });
    }
    let mut entries = vec![C64::new(0.0, 0.0); n * n];
    for (i, &d) in diag_values.iter().enumerate() {
        entries[i * n + i] = d;
    }
    DenseTensor::new(signature, entries)
}

pub fn linear_combine(
    alpha: C64,
    a: &DenseTensor,
    beta: C64,
    b: &DenseTensor,
) -> Result<DenseTensor> {
    DenseTensor::linear_combine(alpha, a, beta, b)
}

pub fn frobenius_norm(a: &DenseTensor) -> f64 {
    a.frobenius_norm()
}

pub fn rel_distance(a: &DenseTensor, b: &DenseTensor) -> Result<f64> {
    a.rel_distance(b)
}

pub fn approx_equal(a: &DenseTensor, b: &DenseTensor, tol: &Tolerance) -> Result<bool> {
    a.approx_equal(b, tol)
}

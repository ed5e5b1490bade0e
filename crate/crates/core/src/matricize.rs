//! Matricization: a tensor with signature `((I_1..I_M), (J_1..J_N))` is the
//! `prod(I) x prod(J)` matrix read from the same row-major buffer. Under this
//! map the Einstein product is the ordinary matrix product.

use crate::error::{Error, Result};
use crate::tensor::{frobenius, DenseTensor, ShapeSignature, C64};

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<C64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidSignature(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if entries.len() != rows * cols {
            return Err(Error::LengthMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        if let Some(index) = entries.iter().position(|z| !z.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub(crate) fn from_parts(rows: usize, cols: usize, entries: Vec<C64>) -> Self {
        debug_assert_eq!(entries.len(), rows * cols);
        Self {
            rows,
            cols,
            entries,
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_parts(rows, cols, vec![C64::new(0.0, 0.0); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_diagonal(values: &[C64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m.entries[i * n + i] = v;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<C64> {
        self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[row * self.cols + col]
    }

    pub(crate) fn set(&mut self, row: usize, col: usize, value: C64) {
        self.entries[row * self.cols + col] = value;
    }

    pub fn conj_transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.entries[j * self.rows + i] = self.entries[i * self.cols + j].conj();
            }
        }
        out
    }

    pub fn matmul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch {
                op: "matmul",
                mode: 0,
                left: self.cols,
                right: other.rows,
            });
        }
        Ok(Self::from_parts(
            self.rows,
            other.cols,
            gemm(
                &self.entries,
                &other.entries,
                self.rows,
                self.cols,
                other.cols,
            ),
        ))
    }

    pub fn sub(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch {
                op: "sub",
                mode: usize::from(self.rows == other.rows),
                left: if self.rows != other.rows {
                    self.rows
                } else {
                    self.cols
                },
                right: if self.rows != other.rows {
                    other.rows
                } else {
                    other.cols
                },
            });
        }
        Ok(Self::from_parts(
            self.rows,
            self.cols,
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        ))
    }

    pub fn frobenius_norm(&self) -> f64 {
        frobenius(&self.entries)
    }

    /// Column `j` as an owned vector.
    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }
}

/// `C = A B` for row-major `m x k` and `k x n` buffers. The inner sum runs
/// over `k` in increasing order.
pub(crate) fn gemm(a: &[C64], b: &[C64], m: usize, k: usize, n: usize) -> Vec<C64> {
    let mut c = vec![C64::new(0.0, 0.0); m * n];
    for i in 0..m {
        let row = &mut c[i * n..(i + 1) * n];
        for p in 0..k {
            let aip = a[i * k + p];
            if aip.re == 0.0 && aip.im == 0.0 {
                continue;
            }
            let brow = &b[p * n..(p + 1) * n];
            for (cij, bpj) in row.iter_mut().zip(brow) {
                *cij += aip * bpj;
            }
        }
    }
    c
}

/// Matricizes `a`: rows indexed by the row multi-index, columns by the
/// column multi-index, both linearized row-major.
pub fn flatten(a: &DenseTensor) -> DenseMatrix {
    let sig = a.signature();
    DenseMatrix::from_parts(sig.row_count(), sig.col_count(), a.entries().to_vec())
}

/// Consuming variant of [`flatten`]; reuses the buffer.
pub fn into_matrix(a: DenseTensor) -> DenseMatrix {
    let (rows, cols) = (a.signature().row_count(), a.signature().col_count());
    DenseMatrix::from_parts(rows, cols, a.into_entries())
}

/// Inverse of [`flatten`] for a given signature.
pub fn unflatten(mx: DenseMatrix, signature: ShapeSignature) -> Result<DenseTensor> {
    if mx.rows != signature.row_count() || mx.cols != signature.col_count() {
        return Err(Error::LengthMismatch {
            expected: signature.element_count(),
            found: mx.entries.len(),
        });
    }
    Ok(DenseTensor::from_parts(signature, mx.entries))
}

/// Index-loop Einstein product kept as an independent reference for tests.
/// It walks the multi-indices explicitly and never forms a matrix.
#[doc(hidden)]
pub mod reference {
    use super::*;

    fn advance(index: &mut [usize], dims: &[usize]) -> bool {
        for k in (0..dims.len()).rev() {
            index[k] += 1;
            if index[k] < dims[k] {
                return true;
            }
            index[k] = 0;
        }
        false
    }

    pub fn naive_einstein_product(a: &DenseTensor, b: &DenseTensor) -> Result<DenseTensor> {
        if a.col_extents() != b.row_extents() {
            return Err(Error::InvalidSignature("contracted modes differ".into()));
        }
        let out_sig = ShapeSignature::new(a.row_extents().to_vec(), b.col_extents().to_vec())?;
        let (ri, cj, ck) = (a.row_extents(), a.col_extents(), b.col_extents());
        let mut out = Vec::with_capacity(out_sig.element_count());
        let mut i = vec![0usize; ri.len()];
        loop {
            let mut k = vec![0usize; ck.len()];
            loop {
                let mut acc = C64::new(0.0, 0.0);
                let mut j = vec![0usize; cj.len()];
                loop {
                    let ij: Vec<usize> = i.iter().chain(&j).copied().collect();
                    let jk: Vec<usize> = j.iter().chain(&k).copied().collect();
                    acc += a.get(&ij).unwrap() * b.get(&jk).unwrap();
                    if !advance(&mut j, cj) {
                        break;
                    }
                }
                out.push(acc);
                if !advance(&mut k, ck) {
                    break;
                }
            }
            if !advance(&mut i, ri) {
                break;
            }
        }
        DenseTensor::new(out_sig, out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{complex_gaussian_tensor, rng};
    use crate::tensor::identity_tensor;
    use proptest::prelude::*;

    fn sig(rows: &[usize], cols: &[usize]) -> ShapeSignature {
        ShapeSignature::new(rows.to_vec(), cols.to_vec()).unwrap()
    }

    #[test]
    fn flatten_index_arithmetic() {
        let a = complex_gaussian_tensor(sig(&[2, 3], &[4]), &mut rng(11));
        let m = flatten(&a);
        assert_eq!((m.rows(), m.cols()), (6, 4));
        assert_eq!(m.get(5, 3), a.get(&[1, 2, 3]).unwrap());
    }

    #[test]
    fn identity_flattens_to_identity() {
        assert_eq!(
            flatten(&identity_tensor(&[2, 3]).unwrap()),
            DenseMatrix::identity(6)
        );
        assert_eq!(
            unflatten(DenseMatrix::identity(6), sig(&[2, 3], &[2, 3])).unwrap(),
            identity_tensor(&[2, 3]).unwrap()
        );
    }

    #[test]
    fn unflatten_matches_product_example() {
        let m = DenseMatrix::new(
            2,
            2,
            [19.0, 22.0, 43.0, 50.0]
                .iter()
                .map(|&x| C64::new(x, 0.0))
                .collect(),
        )
        .unwrap();
        let t = unflatten(m, sig(&[2], &[2])).unwrap();
        let a = DenseTensor::from_real(sig(&[2], &[2]), &[1.0, 2.0, 3.0, 4.0]).unwrap();
        let b = DenseTensor::from_real(sig(&[2], &[2]), &[5.0, 6.0, 7.0, 8.0]).unwrap();
        assert_eq!(a.einstein_product(&b).unwrap(), t);
    }

    #[test]
    fn unflatten_rejects_count_mismatch() {
        assert!(unflatten(DenseMatrix::identity(4), sig(&[2], &[3])).is_err());
    }

    #[test]
    fn naive_oracle_matches_textbook_product() {
        let a = DenseTensor::from_real(sig(&[2], &[2]), &[1.0, 2.0, 3.0, 4.0]).unwrap();
        let b = DenseTensor::from_real(sig(&[2], &[2]), &[5.0, 6.0, 7.0, 8.0]).unwrap();
        let p = reference::naive_einstein_product(&a, &b).unwrap();
        assert_eq!(
            p.entries(),
            &[19.0, 22.0, 43.0, 50.0].map(|x| C64::new(x, 0.0))
        );
    }

    fn extents(max_modes: usize) -> impl Strategy<Value = Vec<usize>> {
        prop::collection::vec(1usize..=4, 0..=max_modes)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn flatten_is_a_product_homomorphism(
            i in extents(2), j in extents(2), k in extents(2), seed in any::<u64>()
        ) {
            prop_assume!(!(i.is_empty() && j.is_empty()));
            prop_assume!(!(j.is_empty() && k.is_empty()));
            prop_assume!(!(i.is_empty() && k.is_empty()));
            let mut r = rng(seed);
            let a = complex_gaussian_tensor(sig(&i, &j), &mut r);
            let b = complex_gaussian_tensor(sig(&j, &k), &mut r);
            let lhs = flatten(&a.einstein_product(&b).unwrap());
            let rhs = flatten(&a).matmul(&flatten(&b)).unwrap();
            prop_assert_eq!(&lhs, &rhs);
            let naive = reference::naive_einstein_product(&a, &b).unwrap();
            let d = crate::tensor::relative_gap(lhs.entries(), naive.entries());
            prop_assert!(d <= 1e-13, "{}", d);
        }

        #[test]
        fn round_trips_are_exact(i in extents(3), j in extents(3), seed in any::<u64>()) {
            prop_assume!(!(i.is_empty() && j.is_empty()));
            let a = complex_gaussian_tensor(sig(&i, &j), &mut rng(seed));
            let back = unflatten(flatten(&a), a.signature().clone()).unwrap();
            prop_assert_eq!(&back, &a);
            prop_assert_eq!(flatten(&a.conj_transpose()), flatten(&a).conj_transpose());
        }
    }
}

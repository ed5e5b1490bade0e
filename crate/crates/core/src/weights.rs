//! Hermitian positive definite weight tensors.
//!
//! A weight is held in spectral form `P = U *_K D *_K U^H` with `U` unitary
//! and `D` diagonal with positive entries. `P`, `P^{-1}`, `P^{1/2}` and
//! `P^{-1/2}` are all derived from that form once, at construction, and
//! each is symmetrized so it is Hermitian to the last bit.

use crate::error::{Error, Result};
use crate::kernels::hermitian_eig;
use crate::matricize::{flatten, unflatten, DenseMatrix};
use crate::random::{log_uniform, random_unitary, rng};
use crate::tensor::{identity_tensor, DenseTensor, ShapeSignature, Tolerance};
use rand::seq::SliceRandom;

/// Maximum Frobenius deviation of `U^H U` from the identity accepted by
/// [`HpdWeight::from_spectral`].
pub const UNITARY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct HpdWeight {
    extents: Vec<usize>,
    unitary: DenseTensor,
    diagonal: Vec<f64>,
    p: DenseTensor,
    p_inv: DenseTensor,
    p_sqrt: DenseTensor,
    p_inv_sqrt: DenseTensor,
}

/// `U diag(values) U^H`, made exactly Hermitian.
fn spectral_form(u: &DenseMatrix, values: &[f64]) -> DenseMatrix {
    let n = u.rows();
    let mut ud = u.clone();
    for i in 0..n {
        for (j, &v) in values.iter().enumerate() {
            let z = ud.get(i, j) * v;
            ud.set(i, j, z);
        }
    }
    let p = ud.matmul(&u.conj_transpose()).expect("square factors");
    let mut h = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            h.set(i, j, (p.get(i, j) + p.get(j, i).conj()) * 0.5);
        }
    }
    h
}

impl HpdWeight {
    /// Builds `P = U *_K D *_K U^H` from a unitary square tensor and a
    /// positive diagonal (row-major over the multi-index).
    pub fn from_spectral(unitary: DenseTensor, diagonal: Vec<f64>) -> Result<Self> {
        let sig = unitary.signature();
        if !sig.is_square() {
            return Err(Error::NotSquare(format!(
                "unitary factor has signature {:?} x {:?}",
                sig.row_extents(),
                sig.col_extents()
            )));
        }
        let extents = sig.row_extents().to_vec();
        let n = sig.row_count();
        if diagonal.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: diagonal.len(),
            });
        }
        if let Some((index, &value)) = diagonal
            .iter()
            .enumerate()
            .find(|(_, &d)| !(d > 0.0 && d.is_finite()))
        {
            return Err(Error::NonPositiveDiagonal { index, value });
        }
        let u = flatten(&unitary);
        let deviation = u
            .conj_transpose()
            .matmul(&u)?
            .sub(&DenseMatrix::identity(n))?
            .frobenius_norm();
        if deviation > UNITARY_TOL {
            return Err(Error::NonUnitary { deviation });
        }

        let square = ShapeSignature::square(&extents)?;
        let form = |f: &dyn Fn(f64) -> f64| -> Result<DenseTensor> {
            let values: Vec<f64> = diagonal.iter().map(|&d| f(d)).collect();
            unflatten(spectral_form(&u, &values), square.clone())
        };
        Ok(Self {
            p: form(&|d| d)?,
            p_inv: form(&|d| 1.0 / d)?,
            p_sqrt: form(&|d| d.sqrt())?,
            p_inv_sqrt: form(&|d| 1.0 / d.sqrt())?,
            extents,
            unitary,
            diagonal,
        })
    }

    /// Identity weight over `extents`.
    pub fn identity(extents: &[usize]) -> Result<Self> {
        let n = extents.iter().product();
        Self::from_spectral(identity_tensor(extents)?, vec![1.0; n])
    }

    /// Checks that `p` is Hermitian positive definite and returns its
    /// spectral form. The smallest eigenvalue must exceed
    /// `tol.cutoff(n, n)` times the largest.
    pub fn validate(p: &DenseTensor, tol: &Tolerance) -> Result<Self> {
        let sig = p.signature();
        if !sig.is_square() {
            return Err(Error::NotSquare(format!(
                "weight has signature {:?} x {:?}",
                sig.row_extents(),
                sig.col_extents()
            )));
        }
        let n = sig.row_count();
        let eig = hermitian_eig(&flatten(p))?;
        let min = eig.eigenvalues[0];
        let max = eig.eigenvalues[n - 1];
        if !(min > 0.0 && min > tol.cutoff(n, n) * max) {
            return Err(Error::NotPositiveDefinite {
                min_eigenvalue: min,
            });
        }
        let u = unflatten(eig.u, ShapeSignature::square(sig.row_extents())?)?;
        Self::from_spectral(u, eig.eigenvalues)
    }

    /// Seeded weight with a Haar-like unitary factor and eigenvalues
    /// log-uniform on `[1/sqrt(kappa), sqrt(kappa)]`, both endpoints
    /// attained when there are at least two eigenvalues.
    pub fn random(extents: &[usize], condition_number: f64, seed: u64) -> Result<Self> {
        let mut g = rng(seed);
        let n: usize = extents.iter().product();
        let u = random_unitary(n, &mut g);
        let diagonal = spread_spectrum(n, condition_number, &mut g)?;
        Self::from_spectral(unflatten(u, ShapeSignature::square(extents)?)?, diagonal)
    }

    /// Seeded diagonal weight (identity unitary factor) with the same
    /// spectrum law as [`HpdWeight::random`].
    pub fn random_diagonal(extents: &[usize], condition_number: f64, seed: u64) -> Result<Self> {
        let mut g = rng(seed);
        let n: usize = extents.iter().product();
        let diagonal = spread_spectrum(n, condition_number, &mut g)?;
        Self::from_spectral(identity_tensor(extents)?, diagonal)
    }

    /// The weight `P^{-1}`, in spectral form.
    pub fn inverse(&self) -> Self {
        Self::from_spectral(
            self.unitary.clone(),
            self.diagonal.iter().map(|d| 1.0 / d).collect(),
        )
        .expect("inverting a valid weight keeps it valid")
    }

    pub fn extents(&self) -> &[usize] {
        &self.extents
    }

    pub fn unitary(&self) -> &DenseTensor {
        &self.unitary
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    /// `P`.
    pub fn tensor(&self) -> &DenseTensor {
        &self.p
    }

    /// `P^{-1}`.
    pub fn inv(&self) -> &DenseTensor {
        &self.p_inv
    }

    /// `P^{1/2}`.
    pub fn sqrt(&self) -> &DenseTensor {
        &self.p_sqrt
    }

    /// `P^{-1/2}`.
    pub fn inv_sqrt(&self) -> &DenseTensor {
        &self.p_inv_sqrt
    }

    pub fn condition_number(&self) -> f64 {
        let max = self.diagonal.iter().copied().fold(f64::MIN, f64::max);
        let min = self.diagonal.iter().copied().fold(f64::MAX, f64::min);
        max / min
    }
}

fn spread_spectrum(n: usize, kappa: f64, g: &mut crate::random::SeededRng) -> Result<Vec<f64>> {
    if !(kappa >= 1.0 && kappa.is_finite()) {
        return Err(Error::InvalidProfile(format!(
            "condition number must be a finite value >= 1, got {kappa}"
        )));
    }
    if n == 1 {
        return Ok(vec![1.0]);
    }
    let (lo, hi) = (1.0 / kappa.sqrt(), kappa.sqrt());
    let mut d: Vec<f64> = (0..n).map(|_| log_uniform(lo, hi, g)).collect();
    d[0] = lo;
    d[1] = hi;
    d.shuffle(g);
    Ok(d)
}

/// Free-function spelling of [`HpdWeight::from_spectral`].
pub fn hpd_from_spectral(unitary: DenseTensor, diagonal: Vec<f64>) -> Result<HpdWeight> {
    HpdWeight::from_spectral(unitary, diagonal)
}

/// Free-function spelling of [`HpdWeight::validate`].
pub fn validate_hpd(p: &DenseTensor, tol: &Tolerance) -> Result<HpdWeight> {
    HpdWeight::validate(p, tol)
}

/// Free-function spelling of [`HpdWeight::random`].
pub fn random_hpd(extents: &[usize], condition_number: f64, seed: u64) -> Result<HpdWeight> {
    HpdWeight::random(extents, condition_number, seed)
}

//! Matrix kernels behind the tensor routines: one-sided Jacobi SVD, cyclic
//! Jacobi for Hermitian eigenproblems, pseudo-inverse and inverse.
//!
//! Both Jacobi variants are capped at [`MAX_SWEEPS`] sweeps and report
//! [`Error::NoConvergence`] instead of returning partially reduced factors.

use crate::error::{Error, Result};
use crate::matricize::DenseMatrix;
use crate::tensor::{Tolerance, C64};

pub const MAX_SWEEPS: usize = 100;

/// Thin SVD `A = U diag(s) V^H` with `k = min(rows, cols)` singular triplets.
#[derive(Debug, Clone)]
pub struct SvdFactors {
    /// `rows x k`, orthonormal columns.
    pub u: DenseMatrix,
    /// Nonincreasing, nonnegative.
    pub singular_values: Vec<f64>,
    /// `cols x k`, orthonormal columns.
    pub v: DenseMatrix,
}

impl SvdFactors {
    pub fn reconstruct(&self) -> DenseMatrix {
        let k = self.singular_values.len();
        let mut us = self.u.clone();
        for i in 0..us.rows() {
            for j in 0..k {
                let z = us.get(i, j) * self.singular_values[j];
                us.set(i, j, z);
            }
        }
        us.matmul(&self.v.conj_transpose())
            .expect("factor shapes agree by construction")
    }
}

#[derive(Debug, Clone)]
pub struct HermEigFactors {
    /// Unitary, eigenvectors in columns.
    pub u: DenseMatrix,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
}

impl HermEigFactors {
    pub fn reconstruct(&self) -> DenseMatrix {
        let d: Vec<C64> = self.eigenvalues.iter().map(|&x| C64::new(x, 0.0)).collect();
        self.u
            .matmul(&DenseMatrix::from_diagonal(&d))
            .and_then(|ud| ud.matmul(&self.u.conj_transpose()))
            .expect("factor shapes agree by construction")
    }
}

fn columns_of(m: &DenseMatrix) -> Vec<Vec<C64>> {
    (0..m.cols()).map(|j| m.column(j)).collect()
}

fn from_columns(rows: usize, cols: &[Vec<C64>]) -> DenseMatrix {
    let mut m = DenseMatrix::zeros(rows, cols.len());
    for (j, col) in cols.iter().enumerate() {
        for (i, &v) in col.iter().enumerate() {
            m.set(i, j, v);
        }
    }
    m
}

fn dot(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

fn norm(x: &[C64]) -> f64 {
    crate::tensor::frobenius(x)
}

/// Real rotation `(c, s)` annihilating the off-diagonal entry `g > 0` of
/// the 2x2 symmetric block `[[a, g], [g, b]]` under `[[c, s], [-s, c]]`.
fn jacobi_rotation(a: f64, b: f64, g: f64) -> (f64, f64) {
    let zeta = (b - a) / (2.0 * g);
    let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
    let c = 1.0 / (1.0 + t * t).sqrt();
    (c, c * t)
}

/// Fills zero columns of `cols` (flagged in `missing`) with unit vectors
/// orthogonal to every other column.
fn complete_orthonormal(cols: &mut [Vec<C64>], missing: &[bool]) {
    let n = cols.first().map_or(0, Vec::len);
    let mut candidate = 0usize;
    for j in 0..cols.len() {
        if !missing[j] {
            continue;
        }
        loop {
            assert!(candidate < n, "ran out of basis vectors");
            let mut v = vec![C64::new(0.0, 0.0); n];
            v[candidate] = C64::new(1.0, 0.0);
            candidate += 1;
            for _pass in 0..2 {
                for (i, q) in cols.iter().enumerate() {
                    if i == j || (missing[i] && i > j) {
                        continue;
                    }
                    let p = dot(q, &v);
                    for (vi, qi) in v.iter_mut().zip(q) {
                        *vi -= p * qi;
                    }
                }
            }
            let nv = norm(&v);
            if nv > 0.5 {
                v.iter_mut().for_each(|x| *x /= nv);
                cols[j] = v;
                break;
            }
        }
    }
}

/// One-sided Jacobi SVD of a matrix with `rows >= cols`.
fn svd_tall(a: &DenseMatrix) -> Result<SvdFactors> {
    let (m, n) = (a.rows(), a.cols());
    let mut g = columns_of(a);
    let mut v: Vec<Vec<C64>> = (0..n)
        .map(|j| {
            let mut e = vec![C64::new(0.0, 0.0); n];
            e[j] = C64::new(1.0, 0.0);
            e
        })
        .collect();

    let mut converged = n < 2;
    for _sweep in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let alpha = g[p].iter().map(|z| z.norm_sqr()).sum::<f64>();
                let beta = g[q].iter().map(|z| z.norm_sqr()).sum::<f64>();
                let gamma = dot(&g[p], &g[q]);
                let mag = gamma.norm();
                if mag == 0.0 || mag <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                // rephase column q so that <g_p, g_q> becomes real positive
                let phase = (gamma / mag).conj();
                for z in g[q].iter_mut() {
                    *z *= phase;
                }
                for z in v[q].iter_mut() {
                    *z *= phase;
                }
                let (c, s) = jacobi_rotation(alpha, beta, mag);
                for cols in [&mut g, &mut v] {
                    let (left, right) = cols.split_at_mut(q);
                    for (x, y) in left[p].iter_mut().zip(right[0].iter_mut()) {
                        let (xp, yq) = (*x, *y);
                        *x = xp * c - yq * s;
                        *y = xp * s + yq * c;
                    }
                }
            }
        }
        if !rotated {
            converged = true;
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            routine: "svd",
            iterations: MAX_SWEEPS,
        });
    }

    let mut order: Vec<(usize, f64)> = g.iter().map(|c| norm(c)).enumerate().collect();
    order.sort_by(|x, y| y.1.total_cmp(&x.1));

    let mut u_cols = Vec::with_capacity(n);
    let mut v_cols = Vec::with_capacity(n);
    let mut sigma = Vec::with_capacity(n);
    let mut missing = Vec::with_capacity(n);
    for &(j, s) in &order {
        sigma.push(s);
        if s > 0.0 {
            u_cols.push(g[j].iter().map(|z| z / s).collect::<Vec<_>>());
            missing.push(false);
        } else {
            u_cols.push(vec![C64::new(0.0, 0.0); m]);
            missing.push(true);
        }
        v_cols.push(v[j].clone());
    }
    if missing.iter().any(|&x| x) {
        complete_orthonormal(&mut u_cols, &missing);
    }
    Ok(SvdFactors {
        u: from_columns(m, &u_cols),
        singular_values: sigma,
        v: from_columns(n, &v_cols),
    })
}

/// Thin singular value decomposition.
pub fn svd(mx: &DenseMatrix) -> Result<SvdFactors> {
    if mx.rows() >= mx.cols() {
        svd_tall(mx)
    } else {
        // A^H = U' S V'^H  =>  A = V' S U'^H
        let f = svd_tall(&mx.conj_transpose())?;
        Ok(SvdFactors {
            u: f.v,
            singular_values: f.singular_values,
            v: f.u,
        })
    }
}

/// Moore-Penrose inverse `V diag(s+) U^H`, dropping singular values at or
/// below `tol.cutoff(rows, cols) * s_max`.
pub fn matrix_pinv(mx: &DenseMatrix, tol: &Tolerance) -> Result<DenseMatrix> {
    let f = svd(mx)?;
    let smax = f.singular_values.first().copied().unwrap_or(0.0);
    let cut = tol.cutoff(mx.rows(), mx.cols()) * smax;
    let (n, k) = (f.v.rows(), f.singular_values.len());
    let mut vs = DenseMatrix::zeros(n, k);
    for (j, &s) in f.singular_values.iter().enumerate() {
        if s > cut && s > 0.0 {
            for i in 0..n {
                vs.set(i, j, f.v.get(i, j) / s);
            }
        }
    }
    vs.matmul(&f.u.conj_transpose())
}

/// Numerical rank under the same cutoff as [`matrix_pinv`].
pub fn numerical_rank(mx: &DenseMatrix, tol: &Tolerance) -> Result<usize> {
    let f = svd(mx)?;
    let smax = f.singular_values.first().copied().unwrap_or(0.0);
    let cut = tol.cutoff(mx.rows(), mx.cols()) * smax;
    Ok(f.singular_values
        .iter()
        .filter(|&&s| s > cut && s > 0.0)
        .count())
}

/// Relative Hermitian defect `||A - A^H|| / ||A||`.
pub fn hermitian_defect(mx: &DenseMatrix) -> f64 {
    let scale = mx.frobenius_norm();
    if scale == 0.0 {
        return 0.0;
    }
    mx.sub(&mx.conj_transpose())
        .map(|d| d.frobenius_norm() / scale)
        .unwrap_or(f64::INFINITY)
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi.
pub fn hermitian_eig(mx: &DenseMatrix) -> Result<HermEigFactors> {
    if mx.rows() != mx.cols() {
        return Err(Error::NotSquare(format!("{}x{}", mx.rows(), mx.cols())));
    }
    let deviation = hermitian_defect(mx);
    if deviation > 1e-12 {
        return Err(Error::NotHermitian { deviation });
    }
    let n = mx.rows();
    // work on the exact Hermitian part
    let mut h = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let z = (mx.get(i, j) + mx.get(j, i).conj()) * 0.5;
            h.set(i, j, z);
        }
    }
    let mut u = DenseMatrix::identity(n);
    let scale = h.frobenius_norm();

    let off = |h: &DenseMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += h.get(i, j).norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut converged = false;
    for _sweep in 0..MAX_SWEEPS {
        if scale == 0.0 || off(&h) <= 1e-3 * f64::EPSILON * scale {
            converged = true;
            break;
        }
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let hpq = h.get(p, q);
                let mag = hpq.norm();
                let app = h.get(p, p).re;
                let aqq = h.get(q, q).re;
                if mag <= 1e-3 * f64::EPSILON * scale {
                    continue;
                }
                rotated = true;
                let phase = (hpq / mag).conj();
                let (c, s) = jacobi_rotation(app, aqq, mag);
                // G = [[c, s], [-s e, c e]] in the (p, q) plane, e = phase
                let g_pp = C64::new(c, 0.0);
                let g_pq = C64::new(s, 0.0);
                let g_qp = phase * (-s);
                let g_qq = phase * c;
                // H <- H G (columns p, q)
                for i in 0..n {
                    let (x, y) = (h.get(i, p), h.get(i, q));
                    h.set(i, p, x * g_pp + y * g_qp);
                    h.set(i, q, x * g_pq + y * g_qq);
                    let (x, y) = (u.get(i, p), u.get(i, q));
                    u.set(i, p, x * g_pp + y * g_qp);
                    u.set(i, q, x * g_pq + y * g_qq);
                }
                // H <- G^H H (rows p, q)
                for j in 0..n {
                    let (x, y) = (h.get(p, j), h.get(q, j));
                    h.set(p, j, g_pp.conj() * x + g_qp.conj() * y);
                    h.set(q, j, g_pq.conj() * x + g_qq.conj() * y);
                }
                h.set(p, q, C64::new(0.0, 0.0));
                h.set(q, p, C64::new(0.0, 0.0));
                let (hp, hq) = (h.get(p, p).re, h.get(q, q).re);
                h.set(p, p, C64::new(hp, 0.0));
                h.set(q, q, C64::new(hq, 0.0));
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            routine: "hermitian_eig",
            iterations: MAX_SWEEPS,
        });
    }

    let mut order: Vec<(usize, f64)> = (0..n).map(|i| (i, h.get(i, i).re)).collect();
    order.sort_by(|x, y| x.1.total_cmp(&y.1));
    let cols: Vec<Vec<C64>> = order.iter().map(|&(j, _)| u.column(j)).collect();
    Ok(HermEigFactors {
        u: from_columns(n, &cols),
        eigenvalues: order.into_iter().map(|(_, l)| l).collect(),
    })
}

/// Inverse of a square matrix through its SVD.
pub fn matrix_inverse(mx: &DenseMatrix, tol: &Tolerance) -> Result<DenseMatrix> {
    if mx.rows() != mx.cols() {
        return Err(Error::NotSquare(format!("{}x{}", mx.rows(), mx.cols())));
    }
    let f = svd(mx)?;
    let smax = f.singular_values[0];
    let smin = *f.singular_values.last().expect("nonempty");
    if smin.partial_cmp(&(tol.cutoff(mx.rows(), mx.cols()) * smax))
        != Some(std::cmp::Ordering::Greater)
    {
        return Err(Error::Singular {
            min_singular_value: smin,
        });
    }
    let n = mx.rows();
    let mut vs = f.v.clone();
    for (j, &s) in f.singular_values.iter().enumerate() {
        for i in 0..n {
            vs.set(i, j, f.v.get(i, j) / s);
        }
    }
    vs.matmul(&f.u.conj_transpose())
}

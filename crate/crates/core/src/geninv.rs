//! Moore-Penrose and weighted Moore-Penrose inverses of tensors, the
//! weighted conjugate transpose, and residuals of the defining equations.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::kernels::matrix_pinv;
use crate::matricize::{into_matrix, unflatten};
use crate::tensor::{chain, check_extents, DenseTensor, Tolerance};
use crate::weights::HpdWeight;

/// Residuals of the four Penrose equations for a candidate inverse.
///
/// Each residual is `||lhs - rhs||_F / max(1, ||lhs||_F, ||rhs||_F)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PenroseReport {
    pub residuals: [f64; 4],
    pub tolerance: f64,
    pub verdict: bool,
}

impl PenroseReport {
    fn new(residuals: [f64; 4], tolerance: f64) -> Self {
        let verdict = residuals.iter().all(|&r| r <= tolerance);
        Self {
            residuals,
            tolerance,
            verdict,
        }
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// Checks that `m` weighs the row modes and `n` the column modes of `a`.
fn check_weights(op: &'static str, a: &DenseTensor, m: &HpdWeight, n: &HpdWeight) -> Result<()> {
    check_extents(op, m.extents(), a.row_extents())?;
    check_extents(op, n.extents(), a.col_extents())
}

/// Moore-Penrose inverse, computed from the SVD of the matricization.
pub fn mpinverse(a: &DenseTensor, tol: &Tolerance) -> Result<DenseTensor> {
    let swapped = a.signature().swapped();
    let pinv = matrix_pinv(&into_matrix(a.clone()), tol)?;
    unflatten(pinv, swapped)
}

/// Weighted Moore-Penrose inverse `A^+_{MN}` with `M` on the row modes and
/// `N` on the column modes of `a`.
///
/// Reduces to the unweighted inverse of `M^{1/2} *_M A *_N N^{-1/2}`:
/// `X = N^{-1/2} *_N (M^{1/2} *_M A *_N N^{-1/2})^+ *_M M^{1/2}`.
///
/// Without an explicit `rank_cut`, the default cutoff is widened by
/// `sqrt(cond(M) cond(N))`, the roundoff amplification of forming the
/// transformed operand.
pub fn weighted_mpinverse(
    a: &DenseTensor,
    m: &HpdWeight,
    n: &HpdWeight,
    tol: &Tolerance,
) -> Result<DenseTensor> {
    check_weights("weighted_mpinverse", a, m, n)?;
    let transformed = chain(&[m.sqrt(), a, n.inv_sqrt()])?;
    let widened;
    let tol = match tol.rank_cut {
        Some(_) => tol,
        None => {
            let amp = (m.condition_number() * n.condition_number()).sqrt();
            let cut = tol.cutoff(a.signature().row_count(), a.signature().col_count()) * amp;
            widened = Tolerance::new(tol.rel_eq, Some(cut))?;
            &widened
        }
    };
    let inner = mpinverse(&transformed, tol)?;
    chain(&[n.inv_sqrt(), &inner, m.sqrt()])
}

/// Weighted conjugate transpose `A^#_{MN} = N^{-1} *_N A^H *_M M`.
pub fn weighted_conj_transpose(
    a: &DenseTensor,
    m: &HpdWeight,
    n: &HpdWeight,
) -> Result<DenseTensor> {
    check_weights("weighted_conj_transpose", a, m, n)?;
    chain(&[n.inv(), &a.conj_transpose(), m.tensor()])
}

/// `(P)^#_{WW} = W^{-1} *_K P^H *_K W` for a square `p` over the modes of `w`.
pub fn weighted_self_adjoint(p: &DenseTensor, w: &HpdWeight) -> Result<DenseTensor> {
    weighted_conj_transpose(p, w, w)
}

/// Residuals of
/// `X A X' = X`-style equations for the pair `(a, x)`:
/// `A X A = A`, `X A X = X`, `(A X)^H = A X`, `(X A)^H = X A`.
pub fn penrose_residuals(a: &DenseTensor, x: &DenseTensor, tol: f64) -> Result<PenroseReport> {
    let ax = a.einstein_product(x)?;
    let xa = x.einstein_product(a)?;
    let r1 = ax.einstein_product(a)?.rel_distance(a)?;
    let r2 = xa.einstein_product(x)?.rel_distance(x)?;
    let r3 = ax.conj_transpose().rel_distance(&ax)?;
    let r4 = xa.conj_transpose().rel_distance(&xa)?;
    Ok(PenroseReport::new([r1, r2, r3, r4], tol))
}

/// Residuals of the weighted equations
/// `A X A = A`, `X A X = X`, `(M A X)^H = M A X`, `(N X A)^H = N X A`.
pub fn weighted_penrose_residuals(
    a: &DenseTensor,
    x: &DenseTensor,
    m: &HpdWeight,
    n: &HpdWeight,
    tol: f64,
) -> Result<PenroseReport> {
    check_weights("weighted_penrose_residuals", a, m, n)?;
    let ax = a.einstein_product(x)?;
    let xa = x.einstein_product(a)?;
    let r1 = ax.einstein_product(a)?.rel_distance(a)?;
    let r2 = xa.einstein_product(x)?.rel_distance(x)?;
    let max = m.tensor().einstein_product(&ax)?;
    let nxa = n.tensor().einstein_product(&xa)?;
    let r3 = max.conj_transpose().rel_distance(&max)?;
    let r4 = nxa.conj_transpose().rel_distance(&nxa)?;
    Ok(PenroseReport::new([r1, r2, r3, r4], tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::random::{complex_gaussian_tensor, rng};
    use crate::tensor::{diagonal_tensor, identity_tensor, zero_tensor, ShapeSignature, C64};

    fn sig(rows: &[usize], cols: &[usize]) -> ShapeSignature {
        ShapeSignature::new(rows.to_vec(), cols.to_vec()).unwrap()
    }

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn low_rank(rows: &[usize], cols: &[usize], rank: usize, seed: u64) -> DenseTensor {
        let mut g = rng(seed);
        let x = complex_gaussian_tensor(sig(rows, &[rank]), &mut g);
        let y = complex_gaussian_tensor(sig(&[rank], cols), &mut g);
        x.einstein_product(&y).unwrap()
    }

    #[test]
    fn mpinverse_examples() {
        let id = identity_tensor(&[2, 3]).unwrap();
        assert_eq!(mpinverse(&id, &tol()).unwrap(), id);

        let z = zero_tensor(sig(&[2, 2], &[3]));
        let zi = mpinverse(&z, &tol()).unwrap();
        assert!(zi.is_zero());
        assert_eq!(zi.signature(), &sig(&[3], &[2, 2]));

        let d = diagonal_tensor(&[2], &[C64::new(2.0, 0.0), C64::new(0.0, 0.0)]).unwrap();
        let want = diagonal_tensor(&[2], &[C64::new(0.5, 0.0), C64::new(0.0, 0.0)]).unwrap();
        assert_eq!(mpinverse(&d, &tol()).unwrap(), want);
    }

    #[test]
    fn mpinverse_passes_penrose_on_random_and_deficient() {
        for seed in 0..10u64 {
            let a = complex_gaussian_tensor(sig(&[2, 3], &[3]), &mut rng(seed));
            let x = mpinverse(&a, &tol()).unwrap();
            assert!(penrose_residuals(&a, &x, 1e-10).unwrap().verdict);
            let d = low_rank(&[3, 2], &[2, 2], 2, seed);
            let x = mpinverse(&d, &tol()).unwrap();
            let r = penrose_residuals(&d, &x, 1e-10).unwrap();
            assert!(r.verdict, "{r:?}");
        }
    }

    #[test]
    fn residual_examples() {
        let id = identity_tensor(&[2]).unwrap();
        let r = penrose_residuals(&id, &id, 1e-10).unwrap();
        assert_eq!(r.residuals, [0.0; 4]);
        assert!(r.verdict);

        let a = complex_gaussian_tensor(sig(&[3], &[2, 2]), &mut rng(77));
        let r = penrose_residuals(&a, &a.conj_transpose(), 1e-10).unwrap();
        assert!(!r.verdict);
        assert!(r.residuals[0] > 1e-3);
    }

    #[test]
    fn identity_weights_reduce_to_plain_inverse() {
        for seed in 0..5u64 {
            let a = low_rank(&[2, 2], &[3], 2, seed);
            let m = HpdWeight::identity(&[2, 2]).unwrap();
            let n = HpdWeight::identity(&[3]).unwrap();
            let w = weighted_mpinverse(&a, &m, &n, &tol()).unwrap();
            let p = mpinverse(&a, &tol()).unwrap();
            assert!(w.rel_distance(&p).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn weighted_inverse_satisfies_weighted_equations() {
        for seed in 0..10u64 {
            let a = if seed % 2 == 0 {
                complex_gaussian_tensor(sig(&[3], &[2, 2]), &mut rng(seed))
            } else {
                low_rank(&[3], &[2, 2], 1, seed)
            };
            let m = HpdWeight::random(&[3], 10.0, seed + 1000).unwrap();
            let n = HpdWeight::random(&[2, 2], 10.0, seed + 2000).unwrap();
            let x = weighted_mpinverse(&a, &m, &n, &tol()).unwrap();
            let r = weighted_penrose_residuals(&a, &x, &m, &n, 1e-9).unwrap();
            assert!(r.verdict, "{r:?}");
        }
    }

    #[test]
    fn invertible_operand_gives_the_inverse() {
        // inverse of A through the matrix kernel, checked against the
        // weighted equations directly
        let a = complex_gaussian_tensor(sig(&[2, 2], &[2, 2]), &mut rng(5));
        let inv = unflatten(
            crate::kernels::matrix_inverse(&crate::matricize::flatten(&a), &tol()).unwrap(),
            a.signature().clone(),
        )
        .unwrap();
        let m = HpdWeight::random(&[2, 2], 10.0, 1).unwrap();
        let n = HpdWeight::random(&[2, 2], 10.0, 2).unwrap();
        assert!(
            weighted_penrose_residuals(&a, &inv, &m, &n, 1e-9)
                .unwrap()
                .verdict
        );
        let x = weighted_mpinverse(&a, &m, &n, &tol()).unwrap();
        assert!(x.rel_distance(&inv).unwrap() <= 1e-9);
    }

    #[test]
    fn double_weighted_inverse_returns_operand() {
        for seed in 0..5u64 {
            let a = low_rank(&[2, 3], &[2], 1, seed);
            let m = HpdWeight::random(&[2, 3], 10.0, seed + 10).unwrap();
            let n = HpdWeight::random(&[2], 10.0, seed + 20).unwrap();
            let x = weighted_mpinverse(&a, &m, &n, &tol()).unwrap();
            let back = weighted_mpinverse(&x, &n, &m, &tol()).unwrap();
            assert!(back.rel_distance(&a).unwrap() <= 1e-9);
        }
        // tiny rank-one operands leave roundoff just above the plain cutoff
        for seed in 0..200u64 {
            let a = low_rank(&[2], &[2], 1, seed);
            let m = HpdWeight::random(&[2], 10.0, seed + 1000).unwrap();
            let n = HpdWeight::random(&[2], 10.0, seed + 2000).unwrap();
            let x = weighted_mpinverse(&a, &m, &n, &tol()).unwrap();
            let back = weighted_mpinverse(&x, &n, &m, &tol()).unwrap();
            assert!(back.rel_distance(&a).unwrap() <= 1e-9, "seed {seed}");
        }
    }

    #[test]
    fn explicit_rank_cut_is_not_widened() {
        let a = DenseTensor::from_real(sig(&[2], &[2]), &[1.0, 0.0, 0.0, 1e-6]).unwrap();
        let w = HpdWeight::identity(&[2]).unwrap();
        let keep = Tolerance::new(1e-8, Some(1e-7)).unwrap();
        let drop = Tolerance::new(1e-8, Some(1e-5)).unwrap();
        let x = weighted_mpinverse(&a, &w, &w, &keep).unwrap();
        assert!((x.entries()[3].re - 1e6).abs() < 1e-3);
        let x = weighted_mpinverse(&a, &w, &w, &drop).unwrap();
        assert_eq!(x.entries()[3].re, 0.0);
    }

    #[test]
    fn weighted_transpose_examples() {
        let a = complex_gaussian_tensor(sig(&[2], &[3, 2]), &mut rng(9));
        let im = HpdWeight::identity(&[2]).unwrap();
        let inn = HpdWeight::identity(&[3, 2]).unwrap();
        assert_eq!(
            weighted_conj_transpose(&a, &im, &inn).unwrap(),
            a.conj_transpose()
        );

        let m = HpdWeight::random(&[2], 10.0, 1).unwrap();
        let n = HpdWeight::random(&[3, 2], 10.0, 2).unwrap();
        let once = weighted_conj_transpose(&a, &m, &n).unwrap();
        let twice = weighted_conj_transpose(&once, &n, &m).unwrap();
        assert!(twice.rel_distance(&a).unwrap() <= 1e-10);

        let b = complex_gaussian_tensor(sig(&[3, 2], &[4]), &mut rng(10));
        let l = HpdWeight::random(&[4], 10.0, 3).unwrap();
        let lhs = weighted_conj_transpose(&a.einstein_product(&b).unwrap(), &m, &l).unwrap();
        let rhs = weighted_conj_transpose(&b, &n, &l)
            .unwrap()
            .einstein_product(&once)
            .unwrap();
        assert!(lhs.rel_distance(&rhs).unwrap() <= 1e-10);
    }

    #[test]
    fn weight_shape_mismatch_is_reported() {
        let a = complex_gaussian_tensor(sig(&[2], &[3]), &mut rng(1));
        let m = HpdWeight::identity(&[3]).unwrap();
        let n = HpdWeight::identity(&[3]).unwrap();
        assert!(matches!(
            weighted_mpinverse(&a, &m, &n, &tol()),
            Err(Error::ShapeMismatch { .. })
        ));
        assert!(weighted_conj_transpose(&a, &n, &m).is_err());
    }
}

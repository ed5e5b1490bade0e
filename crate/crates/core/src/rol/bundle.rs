//! Seeded `(A, B, M, N, L)` instance bundles.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geninv::weighted_mpinverse;
use crate::matricize::unflatten;
use crate::random::{
    complex_gaussian, complex_gaussian_tensor, derive_seed, log_uniform, random_unitary, rng,
    SeededRng,
};
use crate::tensor::{
    check_extents, diagonal_tensor, identity_tensor, DenseTensor, ShapeSignature, Tolerance, C64,
};
use crate::weights::HpdWeight;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Invertible,
    DiagonalCommuting,
    PinvPair,
    RandomDeficient,
    RandomFull,
    /// `A = B = I`; the trivial bundle.
    Identity,
}

impl Family {
    /// The five generated families, in suite rotation order.
    pub const MIXED: [Family; 5] = [
        Family::Invertible,
        Family::DiagonalCommuting,
        Family::PinvPair,
        Family::RandomDeficient,
        Family::RandomFull,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::Invertible => "invertible",
            Family::DiagonalCommuting => "diagonal_commuting",
            Family::PinvPair => "pinv_pair",
            Family::RandomDeficient => "random_deficient",
            Family::RandomFull => "random_full",
            Family::Identity => "identity",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let all = Family::MIXED.iter().chain(&[Family::Identity]);
        all.copied()
            .find(|f| f.as_str() == s.replace('-', "_"))
            .ok_or_else(|| Error::InvalidProfile(format!("unknown family `{s}`")))
    }
}

/// Mode extents of the row block of `A`, the shared middle block, and the
/// column block of `B`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeProfile {
    pub row: Vec<usize>,
    pub mid: Vec<usize>,
    pub col: Vec<usize>,
}

impl ShapeProfile {
    pub fn new(row: Vec<usize>, mid: Vec<usize>, col: Vec<usize>) -> Self {
        Self { row, mid, col }
    }

    /// All three blocks equal to `extents`.
    pub fn square(extents: &[usize]) -> Self {
        Self::new(extents.to_vec(), extents.to_vec(), extents.to_vec())
    }

    fn sizes(&self) -> (usize, usize, usize) {
        let p = |v: &[usize]| v.iter().product::<usize>();
        (p(&self.row), p(&self.mid), p(&self.col))
    }

    fn validate(&self) -> Result<()> {
        for (name, block) in [("row", &self.row), ("mid", &self.mid), ("col", &self.col)] {
            if block.is_empty() || block.contains(&0) {
                return Err(Error::InvalidProfile(format!(
                    "{name} block must be non-empty with positive extents, got {block:?}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum WeightProfile {
    Identity,
    RandomHpd { kappa: f64 },
    DiagonalHpd { kappa: f64 },
}

impl WeightProfile {
    fn build(self, extents: &[usize], seed: u64) -> Result<HpdWeight> {
        match self {
            WeightProfile::Identity => HpdWeight::identity(extents),
            WeightProfile::RandomHpd { kappa } => HpdWeight::random(extents, kappa, seed),
            WeightProfile::DiagonalHpd { kappa } => {
                HpdWeight::random_diagonal(extents, kappa, seed)
            }
        }
    }
}

/// `A` (row x mid), `B` (mid x col) and weights `M` (row), `N` (mid),
/// `L` (col).
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceBundle {
    pub a: DenseTensor,
    pub b: DenseTensor,
    pub m: HpdWeight,
    pub n: HpdWeight,
    pub l: HpdWeight,
    /// Generating family; `None` for bundles assembled from loaded tensors.
    pub family: Option<Family>,
    /// Seeds the auxiliary tensors of the cancellation checks.
    pub seed: u64,
    pub expected_rol: Option<bool>,
}

impl InstanceBundle {
    /// Assembles a bundle after checking that all five pieces fit.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        a: DenseTensor,
        b: DenseTensor,
        m: HpdWeight,
        n: HpdWeight,
        l: HpdWeight,
        family: Option<Family>,
        seed: u64,
        expected_rol: Option<bool>,
    ) -> Result<Self> {
        check_extents("bundle", a.col_extents(), b.row_extents())?;
        check_extents("bundle", m.extents(), a.row_extents())?;
        check_extents("bundle", n.extents(), a.col_extents())?;
        check_extents("bundle", l.extents(), b.col_extents())?;
        Ok(Self {
            a,
            b,
            m,
            n,
            l,
            family,
            seed,
            expected_rol,
        })
    }

    /// `A = B = I` over `extents` with identity weights.
    pub fn identity(extents: &[usize]) -> Result<Self> {
        generate_instance(
            Family::Identity,
            &ShapeProfile::square(extents),
            WeightProfile::Identity,
            0,
        )
    }

    /// Whether `A` and `B` share one square signature, as the square
    /// sufficient-condition checkers require.
    pub fn is_square(&self) -> bool {
        let sig = self.a.signature();
        sig.is_square() && sig == self.b.signature()
    }
}

/// Seeded bundle of the given family. The same arguments always give a
/// bit-identical bundle.
pub fn generate_instance(
    family: Family,
    shapes: &ShapeProfile,
    weights: WeightProfile,
    seed: u64,
) -> Result<InstanceBundle> {
    shapes.validate()?;
    let (rows, mid, cols) = shapes.sizes();
    let mut g = rng(derive_seed(seed, 0));
    let m = weights.build(&shapes.row, derive_seed(seed, 1))?;
    let n = weights.build(&shapes.mid, derive_seed(seed, 2))?;
    let sig = |r: &[usize], c: &[usize]| ShapeSignature::new(r.to_vec(), c.to_vec());
    let a_sig = sig(&shapes.row, &shapes.mid)?;
    let b_sig = sig(&shapes.mid, &shapes.col)?;

    let (a, b, l, expected) = match family {
        Family::Identity => {
            if shapes.row != shapes.mid || shapes.mid != shapes.col {
                return Err(Error::InvalidProfile(
                    "identity family needs equal blocks".into(),
                ));
            }
            let l = weights.build(&shapes.col, derive_seed(seed, 3))?;
            let id = identity_tensor(&shapes.mid)?;
            (id.clone(), id, l, Some(true))
        }
        Family::Invertible => {
            if rows != mid || mid != cols {
                return Err(Error::InvalidProfile(format!(
                    "invertible family needs equal flattened sizes, got {rows}, {mid}, {cols}"
                )));
            }
            let l = weights.build(&shapes.col, derive_seed(seed, 3))?;
            let a = well_conditioned(a_sig, &mut g)?;
            let b = well_conditioned(b_sig, &mut g)?;
            (a, b, l, Some(true))
        }
        Family::DiagonalCommuting => {
            if shapes.row != shapes.mid || shapes.mid != shapes.col {
                return Err(Error::InvalidProfile(
                    "diagonal_commuting family needs equal blocks".into(),
                ));
            }
            if let WeightProfile::RandomHpd { .. } = weights {
                return Err(Error::InvalidProfile(
                    "diagonal_commuting family takes identity or diagonal weights".into(),
                ));
            }
            let l = weights.build(&shapes.col, derive_seed(seed, 3))?;
            let (a, b) = diagonal_pair(&shapes.mid, &mut g)?;
            (a, b, l, Some(true))
        }
        Family::PinvPair => {
            if shapes.col != shapes.row {
                return Err(Error::InvalidProfile(
                    "pinv_pair family needs the col block equal to the row block".into(),
                ));
            }
            let a = if g.random_bool(0.5) {
                complex_gaussian_tensor(a_sig, &mut g)
            } else {
                low_rank(a_sig, (rows.min(mid) / 2).max(1), &mut g)?
            };
            let b = weighted_mpinverse(&a, &m, &n, &Tolerance::default())?;
            (a, b, m.clone(), None)
        }
        Family::RandomDeficient => {
            let ra = rows.min(mid) / 2;
            let rb = mid.min(cols) / 2;
            if ra == 0 || rb == 0 {
                return Err(Error::InvalidProfile(format!(
                    "random_deficient family needs every flattened size >= 2, got {rows}, {mid}, {cols}"
                )));
            }
            let l = weights.build(&shapes.col, derive_seed(seed, 3))?;
            let a = low_rank(a_sig, ra, &mut g)?;
            let b = low_rank(b_sig, rb, &mut g)?;
            (a, b, l, None)
        }
        Family::RandomFull => {
            let l = weights.build(&shapes.col, derive_seed(seed, 3))?;
            let a = complex_gaussian_tensor(a_sig, &mut g);
            let b = complex_gaussian_tensor(b_sig, &mut g);
            (a, b, l, None)
        }
    };
    InstanceBundle::new(a, b, m, n, l, Some(family), seed, expected)
}

/// `U diag(s) V^H` with Haar-like unitaries and `s` log-uniform on `[1, 3]`.
fn well_conditioned(sig: ShapeSignature, g: &mut SeededRng) -> Result<DenseTensor> {
    let n = sig.row_count();
    let u = random_unitary(n, g);
    let v = random_unitary(n, g);
    let s: Vec<C64> = (0..n)
        .map(|_| C64::new(log_uniform(1.0, 3.0, g), 0.0))
        .collect();
    let us = u.matmul(&crate::matricize::DenseMatrix::from_diagonal(&s))?;
    unflatten(us.matmul(&v.conj_transpose())?, sig)
}

/// Product of Gaussian factors with inner dimension `rank`.
fn low_rank(sig: ShapeSignature, rank: usize, g: &mut SeededRng) -> Result<DenseTensor> {
    let left = complex_gaussian_tensor(
        ShapeSignature::new(sig.row_extents().to_vec(), vec![rank])?,
        g,
    );
    let right = complex_gaussian_tensor(
        ShapeSignature::new(vec![rank], sig.col_extents().to_vec())?,
        g,
    );
    left.einstein_product(&right)
}

/// Diagonal pair with independent zero patterns, each keeping at least one
/// nonzero. Half of the pairs use unimodular entries.
fn diagonal_pair(extents: &[usize], g: &mut SeededRng) -> Result<(DenseTensor, DenseTensor)> {
    let n: usize = extents.iter().product();
    let unimodular = g.random_bool(0.5);
    let draw = |g: &mut SeededRng| -> Vec<C64> {
        let mut d: Vec<C64> = (0..n)
            .map(|_| {
                if g.random_bool(1.0 / 3.0) {
                    C64::new(0.0, 0.0)
                } else if unimodular {
                    C64::from_polar(1.0, g.random_range(0.0..std::f64::consts::TAU))
                } else {
                    let z = complex_gaussian(g);
                    z / z.norm() * log_uniform(0.5, 2.0, g)
                }
            })
            .collect();
        if d.iter().all(|z| z.norm() == 0.0) {
            d[g.random_range(0..n)] = C64::new(1.0, 0.0);
        }
        d
    };
    let a = draw(g);
    let b = draw(g);
    Ok((diagonal_tensor(extents, &a)?, diagonal_tensor(extents, &b)?))
}

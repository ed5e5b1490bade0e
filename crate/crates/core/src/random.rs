//! Seeded generators for test instances. Every generator takes an explicit
//! RNG; nothing reads an entropy source.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::matricize::DenseMatrix;
use crate::tensor::{DenseTensor, ShapeSignature, C64};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Mixes a master seed with a stream index (SplitMix64 finalizer).
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master
        .wrapping_add(index.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Standard complex Gaussian sample (independent real and imaginary parts,
/// each with variance 1/2).
pub fn complex_gaussian(rng: &mut impl Rng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn complex_gaussian_tensor(signature: ShapeSignature, rng: &mut impl Rng) -> DenseTensor {
    let entries = (0..signature.element_count())
        .map(|_| complex_gaussian(rng))
        .collect();
    DenseTensor::from_parts(signature, entries)
}

pub fn complex_gaussian_matrix(rows: usize, cols: usize, rng: &mut impl Rng) -> DenseMatrix {
    let entries = (0..rows * cols).map(|_| complex_gaussian(rng)).collect();
    DenseMatrix::from_parts(rows, cols, entries)
}

/// Unitary matrix from orthonormalizing the columns of a seeded complex
/// Gaussian matrix (modified Gram-Schmidt, two passes).
pub fn random_unitary(n: usize, rng: &mut impl Rng) -> DenseMatrix {
    let g = complex_gaussian_matrix(n, n, rng);
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| g.column(j)).collect();
    for j in 0..n {
        for _pass in 0..2 {
            for i in 0..j {
                let proj: C64 = cols[i]
                    .iter()
                    .zip(&cols[j])
                    .map(|(q, v)| q.conj() * v)
                    .sum();
                let qi = cols[i].clone();
                for (v, q) in cols[j].iter_mut().zip(&qi) {
                    *v -= proj * q;
                }
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for v in cols[j].iter_mut() {
            *v /= norm;
        }
    }
    let mut u = DenseMatrix::zeros(n, n);
    for (j, col) in cols.iter().enumerate() {
        for (i, &v) in col.iter().enumerate() {
            u.set(i, j, v);
        }
    }
    u
}

/// Log-uniform sample from `[lo, hi]`.
pub fn log_uniform(lo: f64, hi: f64, rng: &mut impl Rng) -> f64 {
    if lo == hi {
        return lo;
    }
    let t: f64 = rng.random();
    (lo.ln() + t * (hi.ln() - lo.ln())).exp()
}

//! JSON interchange for tensors, weights and bundle metadata.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use tensor_geninv::rol::{Family, ShapeProfile, WeightProfile};
use tensor_geninv::{DenseTensor, HpdWeight, ShapeSignature, Tolerance, C64};

/// On-disk tensor: shapes plus real and imaginary parts, row-major over
/// the concatenated row and column multi-index.
///
/// Floats are written in shortest round-trip form, so reading a written
/// file gives back the same bits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TensorFile {
    pub row_shape: Vec<usize>,
    pub col_shape: Vec<usize>,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl TensorFile {
    pub fn from_tensor(t: &DenseTensor) -> Self {
        Self {
            row_shape: t.row_extents().to_vec(),
            col_shape: t.col_extents().to_vec(),
            re: t.entries().iter().map(|z| z.re).collect(),
            im: t.entries().iter().map(|z| z.im).collect(),
        }
    }

    pub fn into_tensor(self) -> Result<DenseTensor> {
        if self.re.len() != self.im.len() {
            anyhow::bail!(
                "re has {} values but im has {}",
                self.re.len(),
                self.im.len()
            );
        }
        let sig = ShapeSignature::new(self.row_shape, self.col_shape)?;
        let entries = self
            .re
            .into_iter()
            .zip(self.im)
            .map(|(re, im)| C64::new(re, im))
            .collect();
        Ok(DenseTensor::new(sig, entries)?)
    }
}

pub fn read_tensor(path: &Path) -> Result<DenseTensor> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: TensorFile =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    file.into_tensor()
        .with_context(|| format!("invalid tensor in {}", path.display()))
}

pub fn write_tensor(path: &Path, t: &DenseTensor) -> Result<()> {
    write_json(path, &TensorFile::from_tensor(t))
}

/// Reads a tensor and checks that it is Hermitian positive definite.
pub fn read_weight(path: &Path) -> Result<HpdWeight> {
    let t = read_tensor(path)?;
    HpdWeight::validate(&t, &Tolerance::default())
        .with_context(|| format!("{} is not a valid weight", path.display()))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// Metadata written next to a generated bundle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BundleMeta {
    pub family: Family,
    pub seed: u64,
    pub expected_rol: Option<bool>,
    pub shapes: ShapeProfile,
    pub weights: WeightProfile,
}

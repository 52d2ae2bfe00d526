//! The `htj-v1` hypermatrix file: a JSON object with interleaved real and
//! imaginary parts, first index fastest.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use tubal::{Hypermatrix64, Shape};

use crate::error::CliError;

pub const FORMAT_TAG: &str = "htj-v1";

#[derive(Debug, Serialize, Deserialize)]
pub struct HypermatrixFile {
    pub format: String,
    pub order: usize,
    pub shape: Vec<usize>,
    pub data: Vec<f64>,
}

impl HypermatrixFile {
    pub fn from_hypermatrix(a: &Hypermatrix64) -> Result<Self, CliError> {
        let mut data = Vec::with_capacity(2 * a.len());
        for z in a.data() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(CliError::Data("cannot serialize non-finite entries".into()));
            }
            data.push(z.re);
            data.push(z.im);
        }
        Ok(HypermatrixFile { format: FORMAT_TAG.into(), order: a.order(), shape: a.dims().to_vec(), data })
    }

    pub fn into_hypermatrix(self) -> Result<Hypermatrix64, CliError> {
        if self.format != FORMAT_TAG {
            return Err(CliError::Data(format!("unsupported format tag {:?}", self.format)));
        }
        if self.order != self.shape.len() {
            return Err(CliError::Data(format!(
                "order {} does not match shape of length {}",
                self.order,
                self.shape.len()
            )));
        }
        let shape = Shape::new(self.shape)?;
        if self.data.len() != 2 * shape.size() {
            return Err(CliError::Data(format!(
                "data has {} numbers, shape {shape} needs {}",
                self.data.len(),
                2 * shape.size()
            )));
        }
        let entries = self.data.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect();
        Ok(Hypermatrix64::from_vec(shape, entries)?)
    }
}

pub fn parse(text: &str) -> Result<Hypermatrix64, CliError> {
    let file: HypermatrixFile = serde_json::from_str(text).map_err(|e| CliError::Data(format!("malformed file: {e}")))?;
    file.into_hypermatrix()
}

pub fn read(path: &Path) -> Result<Hypermatrix64, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
    parse(&text).map_err(|e| match e {
        CliError::Data(msg) => CliError::Data(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn to_string(a: &Hypermatrix64) -> Result<String, CliError> {
    Ok(serde_json::to_string(&HypermatrixFile::from_hypermatrix(a)?).expect("plain struct serializes"))
}

pub fn write(path: &Path, a: &Hypermatrix64) -> Result<(), CliError> {
    let mut text = to_string(a)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| CliError::Io(path.display().to_string(), e))
}

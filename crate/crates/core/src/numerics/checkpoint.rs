//! Self-describing parameter container: a versioned flat list of named
//! arrays (shape list + raw values), serialized as JSON. `f64` values
//! round-trip exactly.

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NamedArray {
    pub name: String,
    pub shape: Vec<usize>,
    pub data: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ArrayBundle {
    pub format_version: u32,
    pub arrays: Vec<NamedArray>,
}

impl Default for ArrayBundle {
    fn default() -> Self {
        Self::new()
    }
}

impl ArrayBundle {
    pub fn new() -> Self {
        Self {
            format_version: FORMAT_VERSION,
            arrays: Vec::new(),
        }
    }

    pub fn push(&mut self, name: impl Into<String>, shape: Vec<usize>, data: Vec<f64>) {
        self.arrays.push(NamedArray {
            name: name.into(),
            shape,
            data,
        });
    }

    pub fn get(&self, name: &str) -> Result<&NamedArray> {
        self.arrays
            .iter()
            .find(|a| a.name == name)
            .ok_or_else(|| Error::Integrity(format!("missing array '{name}'")))
    }

    pub fn validate(&self) -> Result<()> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::Integrity(format!(
                "unsupported container version {}",
                self.format_version
            )));
        }
        for a in &self.arrays {
            let expect: usize = a.shape.iter().product();
            if a.data.len() != expect {
                return Err(Error::Integrity(format!(
                    "array '{}': {} values for shape {:?}",
                    a.name,
                    a.data.len(),
                    a.shape
                )));
            }
            if !a.data.iter().all(|v| v.is_finite()) {
                return Err(Error::Integrity(format!(
                    "array '{}' holds non-finite values",
                    a.name
                )));
            }
        }
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let file = File::create(path)?;
        serde_json::to_writer(BufWriter::new(file), self)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = File::open(path)?;
        let bundle: ArrayBundle = serde_json::from_reader(BufReader::new(file))?;
        bundle.validate()?;
        Ok(bundle)
    }
}

use std::path::{Path, PathBuf};

use serde::Serialize;

use nanofiber::io::{json_bytes, write_atomic};
use nanofiber::Result;

/// Artifacts of one invocation, all stamped with the config hash.
pub struct Output {
    dir: PathBuf,
    provenance: String,
}

impl Output {
    pub fn new(dir: &Path, config_hash: &str) -> Self {
        Self {
            dir: dir.to_path_buf(),
            provenance: format!(
                "config_sha256={config_hash} nanofiber={}",
                env!("CARGO_PKG_VERSION")
            ),
        }
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn csv(&self, name: &str, bytes: Vec<u8>) -> Result<()> {
        write_atomic(&self.dir.join(name), &bytes)
    }

    pub fn json<T: Serialize>(&self, name: &str, value: &T) -> Result<()> {
        write_atomic(&self.dir.join(name), &json_bytes(value)?)
    }
}

/// `{}` of the value, so `200.0` becomes `200`.
pub fn label(v: f64) -> String {
    format!("{v}")
}

pub fn opt(v: Option<f64>) -> String {
    v.map(nanofiber::io::fmt_f64).unwrap_or_default()
}

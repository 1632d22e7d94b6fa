use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{dispersion_csv, json_bytes, read_dispersion_csv, sha256_hex, write_atomic};
use crate::bath::FrequencyGrid;
use crate::error::{Error, Result};
use crate::waveguide::{build_dispersion_table, DielectricModel, DispersionTable};

const FORMAT_VERSION: u32 = 2;

/// Dispersion tables keyed by model, radius and frequency grid.
#[derive(Debug, Clone)]
pub struct DispersionCache {
    dir: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CacheSidecar {
    pub format_version: u32,
    pub key: String,
    pub model: DielectricModel,
    pub radius_m: f64,
    pub grid: FrequencyGrid,
    pub rows: usize,
    pub csv_sha256: String,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", content = "reason", rename_all = "snake_case")]
pub enum CacheOutcome {
    Hit,
    Miss,
    Rebuilt(String),
}

impl DispersionCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn key(model: &DielectricModel, radius: f64, grid: &FrequencyGrid) -> String {
        let spec = format!(
            "{}|a={:016x}|n={}|dw={:016x}|m={}",
            model.fingerprint(),
            radius.to_bits(),
            grid.len,
            grid.step.to_bits(),
            grid.omega0_index
        );
        sha256_hex(spec.as_bytes())[..24].to_string()
    }

    pub fn csv_path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("dispersion-{key}.csv"))
    }

    pub fn sidecar_path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("dispersion-{key}.json"))
    }

    /// `Ok(None)` when absent; `CorruptCache` when present but unreadable
    /// or failing its checksum.
    pub fn load(&self, key: &str) -> Result<Option<DispersionTable>> {
        let (csv_path, side_path) = (self.csv_path(key), self.sidecar_path(key));
        if !csv_path.exists() || !side_path.exists() {
            return Ok(None);
        }
        let corrupt = |why: String| Error::CorruptCache(format!("{}: {why}", csv_path.display()));
        let sidecar: CacheSidecar = serde_json::from_slice(&fs::read(&side_path)?)
            .map_err(|e| corrupt(format!("sidecar: {e}")))?;
        let bytes = fs::read(&csv_path)?;
        if sidecar.format_version != FORMAT_VERSION || sidecar.key != key {
            return Err(corrupt("sidecar does not describe this entry".into()));
        }
        if sha256_hex(&bytes) != sidecar.csv_sha256 {
            return Err(corrupt("checksum mismatch".into()));
        }
        let [omega, beta, beta_prime, v_g, v_p] =
            read_dispersion_csv(&bytes).map_err(|e| corrupt(e.to_string()))?;
        if omega.len() != sidecar.rows {
            return Err(corrupt(format!(
                "{} rows, sidecar says {}",
                omega.len(),
                sidecar.rows
            )));
        }
        Ok(Some(DispersionTable {
            model: sidecar.model,
            radius: sidecar.radius_m,
            omega,
            beta,
            beta_prime,
            v_g,
            v_p,
            warnings: sidecar.warnings,
        }))
    }

    pub fn store(&self, key: &str, table: &DispersionTable, grid: &FrequencyGrid) -> Result<()> {
        let bytes = dispersion_csv(
            table,
            &format!(
                "dispersion cache key={key} model={}",
                table.model.fingerprint()
            ),
        )?;
        let sidecar = CacheSidecar {
            format_version: FORMAT_VERSION,
            key: key.to_string(),
            model: table.model,
            radius_m: table.radius,
            grid: *grid,
            rows: table.len(),
            csv_sha256: sha256_hex(&bytes),
            warnings: table.warnings.clone(),
        };
        write_atomic(&self.csv_path(key), &bytes)?;
        write_atomic(&self.sidecar_path(key), &json_bytes(&sidecar)?)
    }

    /// Cached table for the grid points below the model's guiding limit,
    /// rebuilt and rewritten when missing or corrupt.
    pub fn load_or_build(
        &self,
        model: &DielectricModel,
        radius: f64,
        grid: &FrequencyGrid,
    ) -> Result<(DispersionTable, CacheOutcome)> {
        let key = Self::key(model, radius, grid);
        let outcome = match self.load(&key) {
            Ok(Some(table)) => return Ok((table, CacheOutcome::Hit)),
            Ok(None) => CacheOutcome::Miss,
            Err(Error::CorruptCache(why)) => CacheOutcome::Rebuilt(why),
            Err(e) => return Err(e),
        };
        let table =
            build_dispersion_table(model, radius, &grid.positive_omegas(model.guiding_limit()))?;
        self.store(&key, &table, grid)?;
        Ok((table, outcome))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{omega_780, NM};

    #[test]
    fn hit_is_bit_identical_and_corruption_rebuilds() {
        let dir = tempfile::tempdir().unwrap();
        let cache = DispersionCache::new(dir.path());
        let grid = FrequencyGrid::new(omega_780(), 40.0, 256).unwrap();
        let model = DielectricModel::silica();
        let (built, first) = cache.load_or_build(&model, 200.0 * NM, &grid).unwrap();
        assert_eq!(first, CacheOutcome::Miss);
        let (hit, second) = cache.load_or_build(&model, 200.0 * NM, &grid).unwrap();
        assert_eq!(second, CacheOutcome::Hit);
        assert_eq!(hit, built);

        let key = DispersionCache::key(&model, 200.0 * NM, &grid);
        let path = cache.csv_path(&key);
        let mut bytes = fs::read(&path).unwrap();
        let at = bytes.len() - 5;
        bytes[at] = if bytes[at] == b'1' { b'2' } else { b'1' };
        fs::write(&path, bytes).unwrap();
        assert!(matches!(cache.load(&key), Err(Error::CorruptCache(_))));
        let (rebuilt, third) = cache.load_or_build(&model, 200.0 * NM, &grid).unwrap();
        assert!(matches!(third, CacheOutcome::Rebuilt(_)));
        assert_eq!(rebuilt, built);
        assert_eq!(cache.load(&key).unwrap().unwrap(), built);
    }

    #[test]
    fn keys_separate_geometries() {
        let grid = FrequencyGrid::new(omega_780(), 40.0, 256).unwrap();
        let m = DielectricModel::silica();
        assert_ne!(
            DispersionCache::key(&m, 2e-7, &grid),
            DispersionCache::key(&m, 1.5e-7, &grid)
        );
        assert_ne!(
            DispersionCache::key(&m, 2e-7, &grid),
            DispersionCache::key(&m, 2e-7, &grid.refined())
        );
    }
}

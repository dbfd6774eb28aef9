//! Structured campaign outputs: CSV data tables and JSON run manifests.
//!
//! Data files carry full-precision scientific notation (17 significant
//! digits) so reruns diff byte-for-byte. Wall-clock information lives only
//! in the manifest, never in data files.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::ScenarioConfig;
use crate::{GlvError, Result};

/// Full-precision scientific notation: 17 significant digits, enough to
/// round-trip any f64 exactly.
pub fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

/// A CSV table with a commented header block describing the columns.
///
/// Comment lines are written first, prefixed with `# `, then the column
/// names, then the rows. Cells are plain strings; numeric cells should be
/// formatted with [`sci`].
#[derive(Debug, Clone)]
pub struct CsvTable {
    columns: Vec<String>,
    comments: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        CsvTable {
            columns: columns.into_iter().map(Into::into).collect(),
            comments: Vec::new(),
            rows: Vec::new(),
        }
    }

    /// Add one header comment line (no leading `#`, no newline).
    pub fn comment(&mut self, line: impl Into<String>) -> &mut Self {
        self.comments.push(line.into());
        self
    }

    pub fn push_row<S: Into<String>>(
        &mut self,
        cells: impl IntoIterator<Item = S>,
    ) -> Result<()> {
        let row: Vec<String> = cells.into_iter().map(Into::into).collect();
        if row.len() != self.columns.len() {
            return Err(GlvError::Parameter(format!(
                "csv row has {} cells, table has {} columns",
                row.len(),
                self.columns.len()
            )));
        }
        for cell in &row {
            if cell.contains(',') || cell.contains('\n') {
                return Err(GlvError::Parameter(format!(
                    "csv cell {cell:?} contains a delimiter"
                )));
            }
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn push_numeric_row(&mut self, values: &[f64]) -> Result<()> {
        self.push_row(values.iter().map(|v| sci(*v)))
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for line in &self.comments {
            out.push_str("# ");
            out.push_str(line);
            out.push('\n');
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn write_to(&self, path: &Path) -> Result<()> {
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent)?;
        }
        let mut file = std::fs::File::create(path)?;
        file.write_all(self.render().as_bytes())?;
        Ok(())
    }
}

/// JSON manifest written next to each campaign's data files.
///
/// The config echo is the fully resolved TOML document, so a run can be
/// reproduced from the manifest alone. Wall time is informational and is
/// the only non-deterministic field.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub scenario: String,
    pub master_seed: u64,
    pub code_version: String,
    pub wall_time_s: f64,
    pub config_toml: String,
}

impl Manifest {
    pub fn new(cfg: &ScenarioConfig, wall_time_s: f64) -> Result<Self> {
        Ok(Manifest {
            scenario: cfg.scenario.clone(),
            master_seed: cfg.master_seed,
            code_version: env!("CARGO_PKG_VERSION").to_string(),
            wall_time_s,
            config_toml: cfg.to_toml_string()?,
        })
    }

    /// Recover the echoed config.
    pub fn config(&self) -> Result<ScenarioConfig> {
        ScenarioConfig::from_toml_str(&self.config_toml)
    }

    pub fn write_to(&self, path: &Path) -> Result<()> {
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent)?;
        }
        let json = serde_json::to_string_pretty(self)
            .map_err(|e| GlvError::Config(e.to_string()))?;
        std::fs::write(path, json + "\n")?;
        Ok(())
    }

    pub fn read_from(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| GlvError::Config(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::default_config;

    #[test]
    fn sci_round_trips_f64_exactly() {
        for &x in &[
            0.0,
            1.0,
            -1.0,
            std::f64::consts::PI,
            2.76e-11,
            6.02e23,
            f64::MIN_POSITIVE,
            1.409_f64,
        ] {
            let s = sci(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{s}");
        }
    }

    #[test]
    fn csv_renders_comments_header_rows() {
        let mut t = CsvTable::new(["time_s", "c_hal_mol_per_m3"]);
        t.comment("time_s: sample time in seconds");
        t.push_numeric_row(&[0.1, 2.5e-9]).unwrap();
        let text = t.render();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# time_s: sample time in seconds");
        assert_eq!(lines[1], "time_s,c_hal_mol_per_m3");
        assert_eq!(lines[2], "1.0000000000000001e-1,2.5000000000000001e-9");
    }

    #[test]
    fn csv_rejects_ragged_rows_and_delimiters() {
        let mut t = CsvTable::new(["a", "b"]);
        assert!(t.push_row(["only-one"]).is_err());
        assert!(t.push_row(["x,y", "z"]).is_err());
        assert_eq!(t.n_rows(), 0);
    }

    #[test]
    fn manifest_round_trips_config() {
        let cfg = default_config();
        let manifest = Manifest::new(&cfg, 1.25).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("manifest.json");
        manifest.write_to(&path).unwrap();
        let back = Manifest::read_from(&path).unwrap();
        assert_eq!(back.master_seed, cfg.master_seed);
        let cfg2 = back.config().unwrap();
        assert_eq!(cfg2.to_toml_string().unwrap(), cfg.to_toml_string().unwrap());
    }
}

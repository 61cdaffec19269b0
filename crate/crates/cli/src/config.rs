//! Run configuration and its validation.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{name} = {value} is out of range ({range})")]
    Range {
        name: &'static str,
        value: String,
        range: &'static str,
    },
    #[error("cannot read config {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed config {path}: {source}")]
    Parse {
        path: PathBuf,
        source: serde_json::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Geometry {
    Circle,
    Sphere,
    Plane,
    Halfplane,
    Core,
    Finite,
    All,
}

impl Geometry {
    /// Suites run by this selector, in report order.
    pub fn suites(self) -> Vec<Geometry> {
        use Geometry::*;
        match self {
            All => vec![Circle, Sphere, Plane, Halfplane, Finite, Core],
            g => vec![g],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Geometry::Circle => "circle",
            Geometry::Sphere => "sphere",
            Geometry::Plane => "plane",
            Geometry::Halfplane => "halfplane",
            Geometry::Core => "core",
            Geometry::Finite => "finite",
            Geometry::All => "all",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Parameter overrides; any field left out keeps the suite default.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    pub r: Option<f64>,
    pub t: Option<f64>,
    pub alpha: Option<f64>,
    pub dim: Option<usize>,
    pub grid: Option<usize>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
}

impl Overrides {
    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| ConfigError::Parse {
            path: path.to_path_buf(),
            source,
        })
    }

    /// Fields set in `self` win over those in `base`.
    pub fn over(self, base: Overrides) -> Overrides {
        Overrides {
            r: self.r.or(base.r),
            t: self.t.or(base.t),
            alpha: self.alpha.or(base.alpha),
            dim: self.dim.or(base.dim),
            grid: self.grid.or(base.grid),
            tol: self.tol.or(base.tol),
            seed: self.seed.or(base.seed),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub geometry: Geometry,
    pub overrides: Overrides,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub parallel: bool,
}

impl RunConfig {
    pub fn new(geometry: Geometry) -> Self {
        Self {
            geometry,
            overrides: Overrides::default(),
            out: None,
            format: Format::Json,
            parallel: false,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let o = &self.overrides;
        let bad = |name, value: String, range| Err(ConfigError::Range { name, value, range });
        if let Some(r) = o.r {
            if !(0.0..=1.0).contains(&r) {
                return bad("r", r.to_string(), "0 <= r <= 1");
            }
        }
        if let Some(t) = o.t {
            let ok = if self.geometry == Geometry::Halfplane {
                t > 0.0 && t < 1.0
            } else {
                (0.0..1.0).contains(&t)
            };
            if !ok {
                return bad("t", t.to_string(), "0 <= t < 1 (0 < t < 1 for halfplane)");
            }
        }
        if let Some(a) = o.alpha {
            if !(a > 0.0 && a <= 50.0) {
                return bad("alpha", a.to_string(), "0 < alpha <= 50");
            }
        }
        if let Some(d) = o.dim {
            if !(4..=256).contains(&d) {
                return bad("dim", d.to_string(), "4 <= dim <= 256");
            }
        }
        if let Some(g) = o.grid {
            if !(4..=4096).contains(&g) {
                return bad("grid", g.to_string(), "4 <= grid <= 4096");
            }
        }
        if let Some(tol) = o.tol {
            if !(tol > 0.0 && tol.is_finite()) {
                return bad("tol", tol.to_string(), "tol > 0");
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        let mut c = RunConfig::new(Geometry::Circle);
        assert!(c.validate().is_ok());
        c.overrides.r = Some(1.5);
        assert!(c.validate().is_err());
        let mut c = RunConfig::new(Geometry::Halfplane);
        c.overrides.t = Some(0.0);
        assert!(c.validate().is_err());
        c.geometry = Geometry::Plane;
        assert!(c.validate().is_ok());
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(serde_json::from_str::<Overrides>(r#"{"r": 0.5, "radius": 1}"#).is_err());
        let o: Overrides = serde_json::from_str(r#"{"t": 0.3}"#).unwrap();
        let merged = Overrides { r: Some(0.2), ..Default::default() }.over(o);
        assert_eq!((merged.r, merged.t), (Some(0.2), Some(0.3)));
    }
}

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// One subcommand per experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentId {
    Sanity,
    Family,
    SphereFamily,
    Curvature,
    Busemann,
    Kristaly,
}

impl ExperimentId {
    pub const ALL: [ExperimentId; 6] =
        [Self::Sanity, Self::Family, Self::SphereFamily, Self::Curvature, Self::Busemann, Self::Kristaly];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Sanity => "sanity",
            Self::Family => "family",
            Self::SphereFamily => "sphere-family",
            Self::Curvature => "curvature",
            Self::Busemann => "busemann",
            Self::Kristaly => "kristaly",
        }
    }

    /// Admissible `[i_min, i_max]`.
    fn index_limits(self) -> (u32, u32) {
        match self {
            Self::Family => (3, 14),
            Self::SphereFamily => (0, 14),
            _ => (0, 30),
        }
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExperimentId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown experiment {s:?}")))
    }
}

/// Pass thresholds; every entry must be positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Interval model against `π²/16`.
    pub interval: f64,
    /// Euclidean and hemisphere goldens.
    pub eigenvalue: f64,
    /// `|max violation|` of the C⁰ estimate on the equality model.
    pub c0_equality: f64,
    /// Ricci lower bound accepted as nonnegative.
    pub ricci: f64,
    /// Analytic against finite-difference profile derivatives, relative.
    pub derivative: f64,
    /// `|bound/λ₁ − 1|` in the Euclidean equality case.
    pub kristaly: f64,
    /// Asymptotic volume ratio accepted as zero.
    pub avr: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { interval: 1e-8, eigenvalue: 1e-7, c0_equality: 1e-9, ricci: 1e-8, derivative: 1e-6, kristaly: 1e-6, avr: 1e-6 }
    }
}

impl Tolerances {
    fn entries(&self) -> [(&'static str, f64); 7] {
        [
            ("interval", self.interval),
            ("eigenvalue", self.eigenvalue),
            ("c0_equality", self.c0_equality),
            ("ricci", self.ricci),
            ("derivative", self.derivative),
            ("kristaly", self.kristaly),
            ("avr", self.avr),
        ]
    }
}

/// Everything that determines an experiment's output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentId,
    /// Manifold dimension `n`.
    pub dim: usize,
    pub i_min: u32,
    pub i_max: u32,
    /// Finite-difference cells `N`, a power of two.
    pub mesh: usize,
    /// Distance-lattice resolution per axis.
    pub grid: usize,
    /// Output directory; not part of the hash.
    #[serde(default = "default_out")]
    pub out: PathBuf,
    #[serde(default)]
    pub tolerances: Tolerances,
}

fn default_out() -> PathBuf {
    PathBuf::from("out")
}

/// Command-line values that replace config entries.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub i_min: Option<u32>,
    pub i_max: Option<u32>,
    pub dim: Option<usize>,
    pub mesh: Option<usize>,
    pub grid: Option<usize>,
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Settings that reproduce the reference tables.
    pub fn defaults(experiment: ExperimentId) -> Self {
        let (i_min, i_max) = match experiment {
            ExperimentId::Sanity => (0, 0),
            ExperimentId::Family => (4, 12),
            ExperimentId::SphereFamily => (0, 12),
            ExperimentId::Curvature => (3, 10),
            ExperimentId::Busemann => (6, 8),
            ExperimentId::Kristaly => (4, 8),
        };
        Self { experiment, dim: 2, i_min, i_max, mesh: 1024, grid: 256, out: default_out(), tolerances: Tolerances::default() }
    }

    /// Parses a JSON config for `experiment`. Missing keys take the
    /// defaults; an `experiment` key naming a different experiment is an error.
    pub fn from_json(experiment: ExperimentId, text: &str) -> Result<Self> {
        let mut value: Value = serde_json::from_str(text).map_err(|e| Error::Config(format!("config is not valid JSON: {e}")))?;
        let obj = value.as_object_mut().ok_or_else(|| Error::Config("config must be a JSON object".into()))?;
        let mut merged = serde_json::to_value(Self::defaults(experiment))?;
        let target = merged.as_object_mut().expect("config serialises to an object");
        for (k, v) in std::mem::take(obj) {
            target.insert(k, v);
        }
        let cfg: Self = serde_json::from_value(merged).map_err(|e| Error::Config(e.to_string()))?;
        if cfg.experiment != experiment {
            return Err(Error::Config(format!("config is for {}, not {experiment}", cfg.experiment)));
        }
        Ok(cfg)
    }

    pub fn from_file(experiment: ExperimentId, path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(experiment, &text)
    }

    pub fn apply(mut self, o: &Overrides) -> Self {
        self.i_min = o.i_min.unwrap_or(self.i_min);
        self.i_max = o.i_max.unwrap_or(self.i_max);
        self.dim = o.dim.unwrap_or(self.dim);
        self.mesh = o.mesh.unwrap_or(self.mesh);
        self.grid = o.grid.unwrap_or(self.grid);
        if let Some(out) = &o.out {
            self.out = out.clone();
        }
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim < 2 {
            return Err(Error::Config(format!("dimension must be at least 2, got {}", self.dim)));
        }
        if self.i_min > self.i_max {
            return Err(Error::Config(format!("empty index range [{}, {}]", self.i_min, self.i_max)));
        }
        let (lo, hi) = self.experiment.index_limits();
        if self.i_min < lo || self.i_max > hi {
            return Err(Error::Config(format!("{} needs indices within [{lo}, {hi}], got [{}, {}]", self.experiment, self.i_min, self.i_max)));
        }
        if self.mesh < 64 || !self.mesh.is_power_of_two() {
            return Err(Error::Config(format!("mesh must be a power of two ≥ 64, got {}", self.mesh)));
        }
        if self.grid < 64 {
            return Err(Error::Config(format!("grid resolution must be at least 64, got {}", self.grid)));
        }
        for (name, v) in self.tolerances.entries() {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("tolerance {name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    pub fn indices(&self) -> Vec<u32> {
        (self.i_min..=self.i_max).collect()
    }

    /// First 16 hex digits of the SHA-256 of the canonical JSON, output
    /// directory excluded.
    pub fn hash(&self) -> String {
        let mut value = serde_json::to_value(self).expect("config serialises");
        value.as_object_mut().expect("object").remove("out");
        let digest = Sha256::digest(value.to_string().as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_json_takes_defaults() {
        let cfg = ExperimentConfig::from_json(ExperimentId::Family, r#"{"i_max": 6, "tolerances": {"avr": 1e-5}}"#).unwrap();
        assert_eq!((cfg.i_min, cfg.i_max, cfg.mesh), (4, 6, 1024));
        assert_eq!(cfg.tolerances.avr, 1e-5);
        assert_eq!(cfg.tolerances.interval, 1e-8);
        cfg.validate().unwrap();
    }

    #[test]
    fn mismatched_or_unknown_keys_are_rejected() {
        assert!(ExperimentConfig::from_json(ExperimentId::Family, r#"{"experiment": "sanity"}"#).is_err());
        assert!(ExperimentConfig::from_json(ExperimentId::Family, r#"{"meshh": 64}"#).is_err());
        assert!(ExperimentConfig::from_json(ExperimentId::Family, "[1]").is_err());
    }

    #[test]
    fn validation() {
        let base = ExperimentConfig::defaults(ExperimentId::Family);
        base.validate().unwrap();
        let bad = [
            ExperimentConfig { mesh: 100, ..base.clone() },
            ExperimentConfig { mesh: 32, ..base.clone() },
            ExperimentConfig { i_min: 2, ..base.clone() },
            ExperimentConfig { i_max: 15, ..base.clone() },
            ExperimentConfig { i_min: 9, i_max: 8, ..base.clone() },
            ExperimentConfig { dim: 1, ..base.clone() },
            ExperimentConfig { tolerances: Tolerances { ricci: 0.0, ..Tolerances::default() }, ..base.clone() },
        ];
        for cfg in bad {
            assert!(matches!(cfg.validate(), Err(Error::Config(_))), "{cfg:?}");
        }
    }

    #[test]
    fn hash_ignores_output_directory() {
        let a = ExperimentConfig::defaults(ExperimentId::Sanity);
        let b = a.clone().apply(&Overrides { out: Some("elsewhere".into()), ..Overrides::default() });
        let c = a.clone().apply(&Overrides { mesh: Some(2048), ..Overrides::default() });
        assert_eq!(a.hash(), b.hash());
        assert_ne!(a.hash(), c.hash());
        assert_eq!(a.hash().len(), 16);
    }

    #[test]
    fn ids_round_trip() {
        for id in ExperimentId::ALL {
            assert_eq!(id.as_str().parse::<ExperimentId>().unwrap(), id);
        }
        assert!("families".parse::<ExperimentId>().is_err());
    }
}

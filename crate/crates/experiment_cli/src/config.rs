use std::path::{Path, PathBuf};

use gaussian_lab::GaussianClassSpec;
use kernel_core::{KernelSpec, GAMMA_DEFAULT};
use serde::Deserialize;

use crate::{Error, Result};

/// One experiment: either a generative setup (two Gaussian class specs,
/// fresh train/test draws per seed) or a fixed dataset path. With a dataset
/// the seeds only label the rows, nothing is drawn, the error rate is the
/// resubstitution rate on that dataset and no oracle rate exists.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    #[serde(default)]
    pub class1: Option<ClassConfig>,
    #[serde(default)]
    pub class2: Option<ClassConfig>,
    #[serde(default)]
    pub dataset: Option<PathBuf>,
    pub kernel: KernelConfig,
    #[serde(deserialize_with = "deserialize_c")]
    pub c: f64,
    /// Training samples drawn per class.
    pub n_train: usize,
    /// Total test points per seed (balanced draw).
    pub n_test: usize,
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub grid: GridConfig,
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassConfig {
    pub mean: Vec<f64>,
    pub covariance: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelConfig {
    pub family: String,
    #[serde(default)]
    pub gamma: Option<f64>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default = "default_resolution")]
    pub resolution: usize,
    #[serde(default = "default_padding")]
    pub padding: f64,
}

fn default_resolution() -> usize {
    256
}

fn default_padding() -> f64 {
    3.0
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            resolution: default_resolution(),
            padding: default_padding(),
        }
    }
}

fn deserialize_c<'de, D>(de: D) -> std::result::Result<f64, D::Error>
where
    D: serde::Deserializer<'de>,
{
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Number(f64),
        Text(String),
    }
    match Raw::deserialize(de)? {
        Raw::Number(v) => Ok(v),
        Raw::Text(s) if s == "inf" => Ok(f64::INFINITY),
        Raw::Text(s) => Err(serde::de::Error::custom(format!(
            "C must be a positive number or \"inf\", got {s:?}"
        ))),
    }
}

/// Parse a `--C` flag value the same way the config field is parsed.
pub fn parse_c(text: &str) -> Result<f64> {
    if text == "inf" {
        return Ok(f64::INFINITY);
    }
    let v: f64 = text
        .parse()
        .map_err(|_| Error::Config(format!("C must be a positive number or \"inf\", got {text:?}")))?;
    if v <= 0.0 {
        return Err(Error::Config(format!("C must be positive, got {v}")));
    }
    Ok(v)
}

/// Build the kernel from a family name and optional gamma (defaulted for
/// the gaussian family, rejected for the others).
pub fn parse_kernel(family: &str, gamma: Option<f64>) -> Result<KernelSpec> {
    match (family, gamma) {
        ("linear", None) => Ok(KernelSpec::Linear),
        ("poly2", None) => Ok(KernelSpec::Poly2),
        ("gaussian", g) => {
            let g = g.unwrap_or(GAMMA_DEFAULT);
            if g <= 0.0 {
                return Err(Error::Config(format!("gamma must be positive, got {g}")));
            }
            Ok(KernelSpec::gaussian(g))
        }
        (f @ ("linear" | "poly2"), Some(_)) => Err(Error::Config(format!(
            "kernel family {f:?} takes no gamma"
        ))),
        (f, _) => Err(Error::Config(format!(
            "unknown kernel family {f:?} (expected linear, poly2 or gaussian)"
        ))),
    }
}

impl KernelConfig {
    pub fn to_spec(&self) -> Result<KernelSpec> {
        parse_kernel(&self.family, self.gamma)
    }
}

impl ClassConfig {
    pub fn to_spec(&self) -> Result<GaussianClassSpec> {
        Ok(GaussianClassSpec::new(
            self.mean.clone(),
            self.covariance.clone(),
        )?)
    }
}

impl ExperimentConfig {
    /// Structural checks beyond what serde enforces.
    pub fn validate(&self) -> Result<()> {
        self.kernel.to_spec()?;
        if !(self.c > 0.0) {
            return Err(Error::Config(format!("C must be positive, got {}", self.c)));
        }
        if self.seeds.is_empty() {
            return Err(Error::Config("seeds list is empty".into()));
        }
        match (&self.class1, &self.class2, &self.dataset) {
            (Some(c1), Some(c2), None) => {
                c1.to_spec()?;
                c2.to_spec()?;
                if self.n_train == 0 {
                    return Err(Error::Config("n_train must be positive".into()));
                }
                if self.n_test < 1000 {
                    return Err(Error::Config(format!(
                        "n_test must be at least 1000, got {}",
                        self.n_test
                    )));
                }
            }
            (None, None, Some(path)) => {
                if !path.exists() {
                    return Err(Error::Config(format!(
                        "dataset path {} does not exist",
                        path.display()
                    )));
                }
            }
            _ => {
                return Err(Error::Config(
                    "exactly one of {class1 + class2} or {dataset} must be given".into(),
                ))
            }
        }
        if self.grid.resolution < 16 {
            return Err(Error::Config(format!(
                "grid resolution must be at least 16, got {}",
                self.grid.resolution
            )));
        }
        Ok(())
    }
}

macro_rules! bundled_configs {
    ($($name:literal),* $(,)?) => {
        /// Names of the configs compiled into the binary.
        pub const BUNDLED: &[&str] = &[$($name),*];

        fn bundled_source(name: &str) -> Option<&'static str> {
            match name {
                $($name => Some(include_str!(concat!("../configs/", $name, ".json"))),)*
                _ => None,
            }
        }
    };
}

bundled_configs![
    "reg1-fullrank-linear",
    "reg1-lowrank-linear",
    "reg1-fullrank-poly2",
    "reg1-lowrank-poly2",
    "reg2-fullrank-linear",
    "reg2-lowrank-linear",
    "reg2-fullrank-poly2",
    "reg2-lowrank-poly2",
    "sim1-gauss",
    "sim2-gauss",
    "sim3-gauss",
    "overlap-origin",
];

/// Load a config by bundled name or by path, then validate it.
pub fn load_config(arg: &str) -> Result<ExperimentConfig> {
    let text = match bundled_source(arg) {
        Some(text) => text.to_string(),
        None => {
            let path = Path::new(arg);
            if !path.exists() {
                return Err(Error::Config(format!(
                    "{arg:?} is neither a bundled config ({}) nor an existing file",
                    BUNDLED.join(", ")
                )));
            }
            std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{arg}: {e}")))?
        }
    };
    let cfg: ExperimentConfig =
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{arg}: {e}")))?;
    cfg.validate()?;
    Ok(cfg)
}

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};
use hubo_core::cop::Reduction;
use hubo_core::simulate::OptimizerConfig;
use hubo_core::{Encoding, Strategy};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Problem {
    /// Built-in five-flight gate assignment.
    #[default]
    Gap,
    /// Built-in five-vertex four-coloring.
    Mkcs,
    /// Built-in four-variable integer program.
    Ip,
    /// Instance or problem file given by `instance`.
    File,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum EncodingChoice {
    Qubo,
    Hubo,
    #[default]
    Both,
}

impl EncodingChoice {
    pub fn encodings(self) -> Vec<Encoding> {
        match self {
            EncodingChoice::Qubo => vec![Encoding::Qubo],
            EncodingChoice::Hubo => vec![Encoding::Hubo],
            EncodingChoice::Both => vec![Encoding::Qubo, Encoding::Hubo],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Chain,
    Gray,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Chain => Strategy::Chain,
            StrategyArg::Gray => Strategy::Gray,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReductionArg {
    FixToReference,
    Delete,
}

impl From<ReductionArg> for Reduction {
    fn from(r: ReductionArg) -> Self {
        match r {
            ReductionArg::FixToReference => Reduction::FixToReference,
            ReductionArg::Delete => Reduction::Delete,
        }
    }
}

/// Inclusive range of QAOA depths, written `min..=max`, `min-max` or `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LayerRange {
    pub min: usize,
    pub max: usize,
}

impl LayerRange {
    pub fn contains(&self, p: usize) -> bool {
        (self.min..=self.max).contains(&p)
    }
}

impl Default for LayerRange {
    fn default() -> Self {
        Self { min: 1, max: 10 }
    }
}

impl fmt::Display for LayerRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..={}", self.min, self.max)
    }
}

impl FromStr for LayerRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let parse = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("bad layer count `{t}` in `{s}`"))
        };
        let (min, max) = if let Some((a, b)) = s.split_once("..=") {
            (parse(a)?, parse(b)?)
        } else if let Some((a, b)) = s.split_once('-') {
            (parse(a)?, parse(b)?)
        } else if s.contains("..") {
            return Err(format!("write layer ranges as `min..=max`, got `{s}`"));
        } else {
            let n = parse(s)?;
            (n, n)
        };
        Ok(Self { min, max })
    }
}

impl Serialize for LayerRange {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for LayerRange {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Count(usize),
        }
        match Raw::deserialize(d)? {
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
            Raw::Count(n) => Ok(Self { min: n, max: n }),
        }
    }
}

/// Everything one invocation needs. Loaded from TOML, then overridden by flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BenchmarkConfig {
    pub problem: Problem,
    /// Path for `problem = "file"`: a problem file or an instance file.
    pub instance: Option<PathBuf>,
    pub encoding: EncodingChoice,
    pub strategy: Strategy,
    pub layers: LayerRange,
    pub runs: usize,
    pub seed: u64,
    pub samples: usize,
    /// Encoding penalty (one-hot or invalid-code weight).
    pub penalty: Option<f64>,
    /// Weight of the problem's own constraint penalties.
    pub constraint_penalty: Option<f64>,
    /// Double the constraint penalty until the unconstrained minimum is feasible.
    pub calibrate: bool,
    pub threshold: Option<f64>,
    pub reduction: Option<Reduction>,
    pub optimizer: OptimizerConfig,
    pub jobs: Option<usize>,
    pub out: PathBuf,
}

impl Default for BenchmarkConfig {
    fn default() -> Self {
        Self {
            problem: Problem::Gap,
            instance: None,
            encoding: EncodingChoice::Both,
            strategy: Strategy::Gray,
            layers: LayerRange::default(),
            runs: 100,
            seed: 0,
            samples: 10_000,
            penalty: None,
            constraint_penalty: None,
            calibrate: false,
            threshold: None,
            reduction: None,
            optimizer: OptimizerConfig::default(),
            jobs: None,
            out: PathBuf::from("results"),
        }
    }
}

/// Flags shared by every subcommand; each overrides the config file.
#[derive(Debug, Clone, Default, Args)]
pub struct ConfigArgs {
    /// TOML config file; flags override its entries.
    #[arg(long, short = 'c', value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub problem: Option<Problem>,
    /// Problem or instance file for `--problem file`.
    #[arg(long, value_name = "FILE")]
    pub instance: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub encoding: Option<EncodingChoice>,
    /// Cost-layer compilation strategy.
    #[arg(long, value_enum)]
    pub strategy: Option<StrategyArg>,
    /// QAOA depths to report: `min..=max`, `min-max` or a single depth.
    #[arg(long, value_name = "RANGE")]
    pub layers: Option<LayerRange>,
    /// Independent optimizations per encoding.
    #[arg(long)]
    pub runs: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Measurement shots per depth for the sampled ratio.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Encoding penalty weight.
    #[arg(long)]
    pub penalty: Option<f64>,
    /// Weight of the problem's constraint penalties.
    #[arg(long)]
    pub constraint_penalty: Option<f64>,
    /// Double the constraint penalty until the unconstrained optimum is feasible.
    #[arg(long)]
    pub calibrate: bool,
    /// Approximation-ratio target for threshold records.
    #[arg(long)]
    pub threshold: Option<f64>,
    /// How the scaling ladder shrinks the instance.
    #[arg(long, value_enum)]
    pub reduction: Option<ReductionArg>,
    /// Optimizer iteration cap per depth.
    #[arg(long)]
    pub max_iterations: Option<usize>,
    /// Worker threads for independent runs.
    #[arg(long, short = 'j')]
    pub jobs: Option<usize>,
    /// Root directory for output; each invocation writes a subdirectory.
    #[arg(long, short = 'o', value_name = "DIR")]
    pub out: Option<PathBuf>,
}

impl ConfigArgs {
    pub fn resolve(&self) -> Result<BenchmarkConfig, Failure> {
        let mut cfg = match &self.config {
            Some(path) => BenchmarkConfig::from_file(path)?,
            None => BenchmarkConfig::default(),
        };
        macro_rules! set {
            ($($field:ident),*) => {$(
                if let Some(v) = self.$field.clone() {
                    cfg.$field = v.into();
                }
            )*};
        }
        set!(problem, encoding, strategy, layers, runs, seed, samples, out);
        if let Some(p) = &self.instance {
            cfg.instance = Some(p.clone());
        }
        if self.penalty.is_some() {
            cfg.penalty = self.penalty;
        }
        if self.constraint_penalty.is_some() {
            cfg.constraint_penalty = self.constraint_penalty;
        }
        if self.threshold.is_some() {
            cfg.threshold = self.threshold;
        }
        if let Some(r) = self.reduction {
            cfg.reduction = Some(r.into());
        }
        if let Some(j) = self.jobs {
            cfg.jobs = Some(j);
        }
        if let Some(k) = self.max_iterations {
            cfg.optimizer.max_iterations = k;
        }
        cfg.calibrate |= self.calibrate;
        cfg.validate()?;
        Ok(cfg)
    }
}

impl BenchmarkConfig {
    pub fn from_file(path: &Path) -> Result<Self, Failure> {
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::Config(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<(), Failure> {
        let bad = |m: String| Err(Failure::Config(m));
        if self.layers.min == 0 || self.layers.min > self.layers.max {
            return bad(format!("layer range {} is empty or starts at 0", self.layers));
        }
        if self.runs == 0 {
            return bad("runs must be at least 1".into());
        }
        if self.samples == 0 {
            return bad("samples must be at least 1".into());
        }
        if self.jobs == Some(0) {
            return bad("jobs must be at least 1".into());
        }
        for (name, v) in [("penalty", self.penalty), ("constraint_penalty", self.constraint_penalty)] {
            if let Some(v) = v {
                if !(v.is_finite() && v > 0.0) {
                    return bad(format!("{name} must be positive and finite, got {v}"));
                }
            }
        }
        if let Some(t) = self.threshold {
            if !t.is_finite() {
                return bad(format!("threshold must be finite, got {t}"));
            }
        }
        match (self.problem, &self.instance) {
            (Problem::File, None) => bad("problem `file` needs an instance path".into()),
            (Problem::File, Some(_)) | (_, None) => Ok(()),
            (p, Some(_)) => bad(format!(
                "an instance path only applies to problem `file`, not `{}`",
                serde_json::to_value(p).unwrap().as_str().unwrap()
            )),
        }
    }

    /// Threshold to use: the configured one, else a per-problem default.
    pub fn threshold(&self) -> f64 {
        self.threshold.unwrap_or(match self.problem {
            Problem::Gap | Problem::File => 0.5,
            Problem::Mkcs => 0.2,
            Problem::Ip => 0.3,
        })
    }

    pub fn reduction(&self) -> Reduction {
        self.reduction.unwrap_or(match self.problem {
            Problem::Gap | Problem::Mkcs => Reduction::Delete,
            Problem::Ip | Problem::File => Reduction::FixToReference,
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configs always serialize")
    }

    /// SHA-256 over everything that affects results, plus the instance's
    /// canonical hash. `out` and `jobs` are excluded.
    pub fn hash(&self, instance_hash: &str) -> String {
        let mut c = self.clone();
        c.out = PathBuf::new();
        c.jobs = None;
        let mut h = Sha256::new();
        h.update(serde_json::to_vec(&c).expect("configs always serialize"));
        h.update(b"\n");
        h.update(instance_hash.as_bytes());
        format!("{:x}", h.finalize())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layer_range_forms() {
        assert_eq!("1..=10".parse::<LayerRange>().unwrap(), LayerRange { min: 1, max: 10 });
        assert_eq!("2-4".parse::<LayerRange>().unwrap(), LayerRange { min: 2, max: 4 });
        assert_eq!("3".parse::<LayerRange>().unwrap(), LayerRange { min: 3, max: 3 });
        assert!("1..10".parse::<LayerRange>().is_err());
        assert!("a-b".parse::<LayerRange>().is_err());
    }

    #[test]
    fn toml_round_trip() {
        let mut cfg = BenchmarkConfig {
            problem: Problem::Mkcs,
            layers: LayerRange { min: 2, max: 3 },
            reduction: Some(Reduction::Delete),
            ..Default::default()
        };
        cfg.optimizer.max_iterations = 7;
        let back: BenchmarkConfig = toml::from_str(&cfg.to_toml()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn partial_toml_uses_defaults() {
        let cfg: BenchmarkConfig = toml::from_str("problem = \"ip\"\nlayers = 4\n[optimizer]\ngrid = 4\n").unwrap();
        assert_eq!(cfg.problem, Problem::Ip);
        assert_eq!(cfg.layers, LayerRange { min: 4, max: 4 });
        assert_eq!(cfg.optimizer.grid, 4);
        assert_eq!(cfg.optimizer.max_iterations, 500);
        assert_eq!(cfg.runs, 100);
        assert!(toml::from_str::<BenchmarkConfig>("problme = \"gap\"").is_err());
    }

    #[test]
    fn flags_override_file_values() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.toml");
        fs::write(&path, "problem = \"mkcs\"\nruns = 5\nseed = 9\n").unwrap();
        let args = ConfigArgs {
            config: Some(path),
            runs: Some(2),
            max_iterations: Some(3),
            strategy: Some(StrategyArg::Chain),
            ..Default::default()
        };
        let cfg = args.resolve().unwrap();
        assert_eq!((cfg.problem, cfg.runs, cfg.seed), (Problem::Mkcs, 2, 9));
        assert_eq!(cfg.optimizer.max_iterations, 3);
        assert_eq!(cfg.strategy, Strategy::Chain);
    }

    #[test]
    fn validation_rejects_bad_values() {
        let check = |f: &dyn Fn(&mut BenchmarkConfig)| {
            let mut cfg = BenchmarkConfig::default();
            f(&mut cfg);
            cfg.validate()
        };
        assert!(check(&|_| {}).is_ok());
        assert!(check(&|c| c.runs = 0).is_err());
        assert!(check(&|c| c.layers = LayerRange { min: 3, max: 2 }).is_err());
        assert!(check(&|c| c.layers = LayerRange { min: 0, max: 2 }).is_err());
        assert!(check(&|c| c.penalty = Some(-1.0)).is_err());
        assert!(check(&|c| c.problem = Problem::File).is_err());
        assert!(check(&|c| c.instance = Some("x".into())).is_err());
    }

    #[test]
    fn hash_ignores_output_location() {
        let a = BenchmarkConfig::default();
        let mut b = a.clone();
        b.out = "elsewhere".into();
        b.jobs = Some(3);
        assert_eq!(a.hash("x"), b.hash("x"));
        assert_ne!(a.hash("x"), a.hash("y"));
        b.seed = 1;
        assert_ne!(a.hash("x"), b.hash("x"));
        assert_eq!(a.hash("x").len(), 64);
    }
}

//! Sweep configuration, read from TOML.
//!
//! ```toml
//! hq_fractions = [0.1, 0.5, 0.9]
//! repetitions = 10
//! seed_base = 1
//! output = "results.csv"
//!
//! [params]
//! alpha = 40.0
//! beta1 = 20.0
//! beta2 = 10.0
//!
//! [[instances]]
//! preset = "G1"
//!
//! [[instances]]
//! file = "graphs/shop.json"
//!
//! [[instances]]
//! generate = { name = "R1", nodes = 14, edges = 40, total_hosting = 300, seed = 9 }
//!
//! [[solvers]]
//! name = "exact"
//! kind = "exact"
//!
//! [[solvers]]
//! name = "bpso"
//! kind = "bpso"
//! config = { swarm_size = 40 }
//! ```
//!
//! Every field has a default; an empty file is the default sweep.

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::DEFAULT_MAX_NODES;
use crate::instances::{generate_instance, preset, preset_specs, read_graph, InstanceSpec};
use crate::metaheuristics::{BpsoConfig, GaConfig};
use crate::model::{CostParams, SbaGraph};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default = "default_instances")]
    pub instances: Vec<InstanceSource>,
    #[serde(default = "default_hq_fractions")]
    pub hq_fractions: Vec<f64>,
    #[serde(default)]
    pub params: Coefficients,
    #[serde(default = "default_solvers")]
    pub solvers: Vec<SolverEntry>,
    /// Runs per stochastic solver; run `r` uses seed `seed_base + r`.
    #[serde(default = "default_repetitions")]
    pub repetitions: usize,
    #[serde(default = "default_seed_base")]
    pub seed_base: u64,
    #[serde(default)]
    pub output: Option<PathBuf>,
    /// Directory that relative instance paths resolve against.
    #[serde(skip)]
    pub base_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Coefficients {
    pub alpha: f64,
    pub beta1: f64,
    pub beta2: f64,
}

impl Default for Coefficients {
    fn default() -> Self {
        Coefficients {
            alpha: 40.0,
            beta1: 20.0,
            beta2: 10.0,
        }
    }
}

impl Coefficients {
    pub fn with_hq(&self, hq: f64) -> Result<CostParams> {
        CostParams::new(self.alpha, self.beta1, self.beta2, hq)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InstanceSource {
    Preset {
        preset: String,
    },
    File {
        file: PathBuf,
        #[serde(default)]
        name: Option<String>,
    },
    Generated {
        generate: InstanceSpec,
    },
}

impl InstanceSource {
    pub fn label(&self) -> String {
        match self {
            InstanceSource::Preset { preset } => preset.clone(),
            InstanceSource::File { file, name } => name.clone().unwrap_or_else(|| {
                file.file_stem().map_or_else(
                    || file.display().to_string(),
                    |s| s.to_string_lossy().into_owned(),
                )
            }),
            InstanceSource::Generated { generate } => generate.name.clone(),
        }
    }

    pub fn load(&self, base_dir: Option<&Path>) -> Result<SbaGraph> {
        match self {
            InstanceSource::Preset { preset: name } => {
                let spec = preset(name)
                    .ok_or_else(|| Error::invalid(format!("unknown preset {name:?}")))?;
                generate_instance(&spec)
            }
            InstanceSource::File { file, .. } => match base_dir {
                Some(dir) if file.is_relative() => read_graph(dir.join(file)),
                _ => read_graph(file),
            },
            InstanceSource::Generated { generate } => generate_instance(generate),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverEntry {
    pub name: String,
    #[serde(flatten)]
    pub kind: SolverKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SolverKind {
    Exact {
        #[serde(default = "default_max_nodes")]
        max_nodes: usize,
    },
    ExactBnb {
        #[serde(default = "default_max_nodes")]
        max_nodes: usize,
    },
    Bpso {
        #[serde(default)]
        config: BpsoConfig,
    },
    Ga {
        #[serde(default)]
        config: GaConfig,
    },
    Greedy,
}

impl SolverKind {
    pub fn is_exact(&self) -> bool {
        matches!(self, SolverKind::Exact { .. } | SolverKind::ExactBnb { .. })
    }

    pub fn is_stochastic(&self) -> bool {
        matches!(self, SolverKind::Bpso { .. } | SolverKind::Ga { .. })
    }
}

impl SolverEntry {
    pub fn new(name: impl Into<String>, kind: SolverKind) -> Self {
        SolverEntry {
            name: name.into(),
            kind,
        }
    }

    pub fn runs(&self, repetitions: usize) -> usize {
        if self.kind.is_stochastic() {
            repetitions
        } else {
            1
        }
    }
}

fn default_instances() -> Vec<InstanceSource> {
    preset_specs()
        .into_iter()
        .map(|spec| InstanceSource::Preset { preset: spec.name })
        .collect()
}

/// 0.1, 0.2, ..., 0.9.
pub fn default_hq_fractions() -> Vec<f64> {
    (1..=9).map(|i| i as f64 / 10.0).collect()
}

fn default_solvers() -> Vec<SolverEntry> {
    vec![
        SolverEntry::new(
            "exact",
            SolverKind::Exact {
                max_nodes: DEFAULT_MAX_NODES,
            },
        ),
        SolverEntry::new(
            "bpso",
            SolverKind::Bpso {
                config: BpsoConfig::default(),
            },
        ),
        SolverEntry::new(
            "ga",
            SolverKind::Ga {
                config: GaConfig::default(),
            },
        ),
        SolverEntry::new("greedy", SolverKind::Greedy),
    ]
}

fn default_repetitions() -> usize {
    10
}

fn default_seed_base() -> u64 {
    1
}

fn default_max_nodes() -> usize {
    DEFAULT_MAX_NODES
}

impl Default for SweepConfig {
    /// All ten presets, nine fractions, exact + BPSO + GA + greedy, 10 repetitions.
    fn default() -> Self {
        SweepConfig {
            instances: default_instances(),
            hq_fractions: default_hq_fractions(),
            params: Coefficients::default(),
            solvers: default_solvers(),
            repetitions: default_repetitions(),
            seed_base: default_seed_base(),
            output: None,
            base_dir: None,
        }
    }
}

impl SweepConfig {
    pub fn from_toml(text: &str, origin: &str) -> Result<Self> {
        let config: SweepConfig = toml::from_str(text).map_err(|e| Error::Parse {
            path: origin.to_string(),
            line: e
                .span()
                .map_or(0, |span| text[..span.start].matches('\n').count() + 1),
            message: e.message().to_string(),
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut config = SweepConfig::from_toml(&text, &path.display().to_string())?;
        config.base_dir = path.parent().map(Path::to_path_buf);
        Ok(config)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("sweep configs always serialize")
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(f) = self.hq_fractions.iter().find(|f| !(0.0..=1.0).contains(*f)) {
            return Err(Error::invalid(format!("hq fraction {f} outside [0, 1]")));
        }
        if self.repetitions < 1 {
            return Err(Error::invalid("repetitions must be >= 1"));
        }
        if self.solvers.is_empty() {
            return Err(Error::invalid("at least one solver is required"));
        }
        let mut names = HashSet::new();
        for entry in &self.solvers {
            if !names.insert(entry.name.as_str()) {
                return Err(Error::invalid(format!(
                    "duplicate solver name {:?}",
                    entry.name
                )));
            }
            match &entry.kind {
                SolverKind::Bpso { config } => config.validate()?,
                SolverKind::Ga { config } => config.validate()?,
                _ => {}
            }
        }
        CostParams::new(self.params.alpha, self.params.beta1, self.params.beta2, 0.0)?;
        Ok(())
    }

    /// Rows a complete sweep produces.
    pub fn cell_count(&self) -> usize {
        let per_hq: usize = self.solvers.iter().map(|s| s.runs(self.repetitions)).sum();
        self.instances.len() * self.hq_fractions.len() * per_hq
    }
}

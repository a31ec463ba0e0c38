use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Backbone {
    /// Plain chain of graph convolutions.
    Gcn,
    /// Hidden layers from the second on add their input to their output.
    ResGcn,
    /// Every layer after the first reads the concatenation of all earlier
    /// hidden outputs.
    DenseGcn,
    /// Plain hidden chain; the classifier reads the concatenation of every
    /// hidden output.
    JkNet,
}

impl Backbone {
    pub const ALL: [Backbone; 4] = [Backbone::Gcn, Backbone::ResGcn, Backbone::DenseGcn, Backbone::JkNet];

    pub fn as_str(&self) -> &'static str {
        match self {
            Backbone::Gcn => "gcn",
            Backbone::ResGcn => "resgcn",
            Backbone::DenseGcn => "densegcn",
            Backbone::JkNet => "jknet",
        }
    }
}

impl fmt::Display for Backbone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Backbone {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gcn" => Ok(Backbone::Gcn),
            "resgcn" | "res" => Ok(Backbone::ResGcn),
            "densegcn" | "dense" => Ok(Backbone::DenseGcn),
            "jknet" | "jk" => Ok(Backbone::JkNet),
            other => Err(Error::domain(format!("unknown backbone {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelConfig {
    pub backbone: Backbone,
    /// Number of graph-convolution layers, classifier included.
    pub depth: usize,
    pub hidden: usize,
    /// Piece count per layer; all ones means undecomposed.
    pub k_schedule: Vec<usize>,
    pub slope: f64,
    pub learning_rate: f64,
    pub weight_decay: f64,
    pub max_epochs: usize,
    pub patience: usize,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self {
            backbone: Backbone::Gcn,
            depth: 2,
            hidden: 16,
            k_schedule: vec![1, 1],
            slope: crate::propagate::DEFAULT_SLOPE,
            learning_rate: 0.1,
            weight_decay: 5e-4,
            max_epochs: 300,
            patience: 20,
        }
    }
}

impl ModelConfig {
    pub fn new(backbone: Backbone, depth: usize) -> Self {
        Self {
            backbone,
            depth,
            k_schedule: vec![1; depth],
            ..Self::default()
        }
    }

    /// Same config with every layer split into `k` pieces.
    pub fn with_uniform_k(mut self, k: usize) -> Self {
        self.k_schedule = vec![k; self.depth];
        self
    }

    pub fn is_decomposed(&self) -> bool {
        self.k_schedule.iter().any(|&k| k > 1)
    }

    pub fn validate(&self) -> Result<()> {
        if self.depth < 2 {
            return Err(Error::domain(format!("depth must be at least 2, got {}", self.depth)));
        }
        if self.k_schedule.len() != self.depth {
            return Err(Error::domain(format!(
                "K schedule has {} entries for depth {}",
                self.k_schedule.len(),
                self.depth
            )));
        }
        if self.k_schedule.contains(&0) {
            return Err(Error::domain("K schedule entries must be >= 1"));
        }
        if self.hidden == 0 {
            return Err(Error::domain("hidden width must be positive"));
        }
        if !(self.slope > 0.0 && self.slope <= 1.0) {
            return Err(Error::domain(format!("slope must be in (0, 1], got {}", self.slope)));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::domain("learning rate must be positive"));
        }
        if !(self.weight_decay >= 0.0 && self.weight_decay.is_finite()) {
            return Err(Error::domain("weight decay must be non-negative"));
        }
        if self.max_epochs == 0 {
            return Err(Error::domain("max_epochs must be positive"));
        }
        Ok(())
    }

    /// Reads `key=value` lines; `#` starts a comment. Unset keys keep their
    /// defaults, and a missing `k_schedule` means all ones.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }

    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let mut cfg = Self::default();
        let mut schedule = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Parse {
                path: origin.to_path_buf(),
                line: idx + 1,
                msg,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected key=value, found {line:?}")))?;
            let value = value.trim();
            fn num<T: FromStr>(v: &str) -> std::result::Result<T, String> {
                v.parse().map_err(|_| format!("invalid number {v:?}"))
            }
            match key.trim() {
                "backbone" => cfg.backbone = value.parse().map_err(|e: Error| err(e.to_string()))?,
                "depth" => cfg.depth = num(value).map_err(err)?,
                "hidden" => cfg.hidden = num(value).map_err(err)?,
                "k_schedule" => schedule = Some(parse_schedule(value).map_err(|e| err(e.to_string()))?),
                "slope" => cfg.slope = num(value).map_err(err)?,
                "learning_rate" | "lr" => cfg.learning_rate = num(value).map_err(err)?,
                "weight_decay" => cfg.weight_decay = num(value).map_err(err)?,
                "max_epochs" => cfg.max_epochs = num(value).map_err(err)?,
                "patience" => cfg.patience = num(value).map_err(err)?,
                other => return Err(err(format!("unknown key {other:?}"))),
            }
        }
        cfg.k_schedule = schedule.unwrap_or_else(|| vec![1; cfg.depth]);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_kv(&self) -> String {
        format!(
            "backbone={}\ndepth={}\nhidden={}\nk_schedule={}\nslope={}\nlearning_rate={}\nweight_decay={}\nmax_epochs={}\npatience={}\n",
            self.backbone,
            self.depth,
            self.hidden,
            format_schedule(&self.k_schedule),
            self.slope,
            self.learning_rate,
            self.weight_decay,
            self.max_epochs,
            self.patience
        )
    }
}

/// Accepts `3,3,2,2` or `[3,3,2,2]`.
pub fn parse_schedule(s: &str) -> Result<Vec<usize>> {
    let inner = s.trim().trim_start_matches('[').trim_end_matches(']');
    inner
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::domain(format!("invalid K schedule entry {t:?}")))
        })
        .collect()
}

pub fn format_schedule(k: &[usize]) -> String {
    let items: Vec<String> = k.iter().map(usize::to_string).collect();
    format!("[{}]", items.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_config_file() {
        let text = "# model\nbackbone = jknet\ndepth=4\nk_schedule=[3,3,2,2]\nlr=0.1 # step\n";
        let cfg = ModelConfig::parse(text, Path::new("m.cfg")).unwrap();
        assert_eq!(cfg.backbone, Backbone::JkNet);
        assert_eq!(cfg.k_schedule, vec![3, 3, 2, 2]);
        assert_eq!(cfg.learning_rate, 0.1);
        assert_eq!(ModelConfig::parse(&cfg.to_kv(), Path::new("x")).unwrap(), cfg);
    }

    #[test]
    fn missing_schedule_defaults_to_ones() {
        let cfg = ModelConfig::parse("depth=5", Path::new("m")).unwrap();
        assert_eq!(cfg.k_schedule, vec![1; 5]);
    }

    #[test]
    fn invalid_configs() {
        assert!(ModelConfig::parse("depth=1", Path::new("m")).is_err());
        assert!(ModelConfig::parse("depth=3\nk_schedule=2,2", Path::new("m")).is_err());
        assert!(matches!(
            ModelConfig::parse("depth=x", Path::new("m")),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(ModelConfig::parse("colour=red", Path::new("m")).is_err());
    }
}

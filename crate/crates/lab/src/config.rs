use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use synchrotree::sync::tree_word_length;
use synchrotree::Word;

use crate::error::{LabError, Result};

/// How the word length `k` is chosen for each `n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum KRule {
    Explicit(usize),
    /// `ceil((1 + epsilon) log2 n)`, clamped as in the tree-word search.
    Epsilon { epsilon: f64 },
}

impl KRule {
    pub fn k_for(&self, n: usize) -> usize {
        match *self {
            KRule::Explicit(k) => k,
            KRule::Epsilon { epsilon } => tree_word_length(n, epsilon),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: String,
    pub n: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<KRule>,
    #[serde(default = "one")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    /// Cap on candidate words per tree-word search.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
    /// Words for experiments that fix them, in text form.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub words: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default = "yes")]
    pub parallel: bool,
}

fn one() -> usize {
    1
}

fn yes() -> bool {
    true
}

impl ExperimentConfig {
    pub fn new(experiment: &str, n: Vec<usize>, trials: usize, seed: u64) -> Self {
        ExperimentConfig {
            experiment: experiment.to_string(),
            n,
            k: None,
            trials,
            seed,
            budget: None,
            words: Vec::new(),
            output: None,
            parallel: true,
        }
    }

    pub fn with_k(mut self, k: KRule) -> Self {
        self.k = Some(k);
        self
    }

    pub fn with_words(mut self, words: &[&str]) -> Self {
        self.words = words.iter().map(|w| w.to_string()).collect();
        self
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| LabError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| LabError::Io { path: path.display().to_string(), message: e.to_string() })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("configs serialize")
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(LabError::Config("trials must be at least 1".into()));
        }
        if self.n.is_empty() {
            return Err(LabError::Config("n list is empty".into()));
        }
        if let Some(&n) = self.n.iter().find(|&&n| n < 2) {
            return Err(LabError::Config(format!("n = {n} is below 2")));
        }
        match self.k {
            Some(KRule::Explicit(0)) => return Err(LabError::Config("k must be at least 1".into())),
            Some(KRule::Epsilon { epsilon }) if epsilon.is_nan() || epsilon <= 0.0 => {
                return Err(LabError::Config(format!("epsilon must be positive, got {epsilon}")))
            }
            _ => {}
        }
        self.parsed_words().map_err(|e| LabError::Config(format!("words: {e}")))?;
        Ok(())
    }

    pub fn parsed_words(&self) -> Result<Vec<Word>> {
        self.words.iter().map(|w| Word::parse(w, 2).map_err(LabError::from)).collect()
    }
}

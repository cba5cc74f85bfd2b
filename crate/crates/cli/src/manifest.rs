//! Run manifests and the CSV header that points to them.

use std::path::Path;

use sha2::{Digest, Sha256};
use toml::{Table, Value};

use crate::config::ExperimentConfig;
use crate::error::CliError;

pub const TOOL: &str = "toricqfi";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const MANIFEST_FILE: &str = "manifest.toml";

/// Everything needed to rerun an experiment. Output paths and thread counts
/// are left out on purpose: they do not affect results, and keeping them out
/// makes reruns byte-identical.
#[derive(Clone, Debug)]
pub struct Manifest {
    text: String,
    hash: String,
}

impl Manifest {
    pub fn new(config: &ExperimentConfig, seeds: &[u64], notes: &[(&str, String)]) -> Self {
        let mut top = Table::new();
        top.insert("tool".into(), Value::String(TOOL.into()));
        top.insert("version".into(), Value::String(VERSION.into()));
        top.insert("experiment".into(), Value::String(config.experiment.name().into()));
        // seeds as strings: TOML integers are signed
        top.insert(
            "seeds".into(),
            Value::Array(seeds.iter().map(|s| Value::String(s.to_string())).collect()),
        );
        top.insert(
            "config".into(),
            Value::Table(config.values().clone().into_iter().collect()),
        );
        if !notes.is_empty() {
            let notes: Table = notes
                .iter()
                .map(|(k, v)| (k.to_string(), Value::String(v.clone())))
                .collect();
            top.insert("notes".into(), Value::Table(notes));
        }
        let text = toml::to_string(&top).expect("serializable manifest");
        let hash = hex::encode(Sha256::digest(text.as_bytes()));
        Self { text, hash }
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn hash(&self) -> &str {
        &self.hash
    }

    pub fn write(&self, dir: &Path) -> Result<(), CliError> {
        let path = dir.join(MANIFEST_FILE);
        std::fs::write(&path, &self.text).map_err(|e| CliError::io(&path, e))
    }

    /// Comment lines for the top of every CSV.
    pub fn csv_header(&self, experiment: &str) -> Vec<String> {
        vec![
            format!("{TOOL} {VERSION}"),
            format!("experiment: {experiment}"),
            format!("manifest: {MANIFEST_FILE}"),
            format!("manifest_sha256: {}", self.hash),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Experiment;

    #[test]
    fn hash_tracks_content() {
        let a = ExperimentConfig::resolve(Experiment::Ground, None, &[], Some(1)).unwrap();
        let b = ExperimentConfig::resolve(Experiment::Ground, None, &[], Some(2)).unwrap();
        let ma = Manifest::new(&a, &[1], &[]);
        assert_eq!(ma.hash(), Manifest::new(&a, &[1], &[]).hash());
        assert_ne!(ma.hash(), Manifest::new(&b, &[2], &[]).hash());
        assert_eq!(ma.hash().len(), 64);
        let parsed: Table = ma.text().parse().unwrap();
        assert_eq!(parsed["experiment"].as_str(), Some("ground"));
        assert_eq!(parsed["config"]["l_region"].as_integer(), Some(64));
    }
}

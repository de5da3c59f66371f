use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

/// What a subcommand read, how it was parameterized and what it wrote.
/// Saved as `<output>.run.json`; contains nothing that varies between runs.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub inputs: Vec<String>,
    pub params: BTreeMap<String, String>,
    pub seed: Option<u64>,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(subcommand: &str) -> Self {
        RunManifest {
            subcommand: subcommand.into(),
            inputs: Vec::new(),
            params: BTreeMap::new(),
            seed: None,
            outputs: Vec::new(),
        }
    }

    pub fn input(&mut self, p: &Path) {
        self.inputs.push(p.display().to_string());
    }

    pub fn output(&mut self, p: &Path) {
        self.outputs.push(p.display().to_string());
    }

    pub fn param(&mut self, k: &str, v: impl Display) {
        self.params.insert(k.into(), v.to_string());
    }

    pub fn path_for(out: &Path) -> PathBuf {
        let mut s = out.as_os_str().to_owned();
        s.push(".run.json");
        PathBuf::from(s)
    }

    pub fn write_beside(&self, out: &Path) -> Result<()> {
        let p = Self::path_for(out);
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(&p, text).with_context(|| format!("writing {}", p.display()))
    }
}

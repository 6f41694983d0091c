//! Settings shared by all commands. Values come from flags, then from an
//! optional TOML file with the same keys, then from defaults.

use std::path::Path;

use serde::Deserialize;
use trivalent::closure::UniverseSpec;
use trivalent::scheme::resolve_selector;
use trivalent::{Error, LogicSpec, Result, Scheme, Standard};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeSet {
    /// All sixteen schemes, and all 256 ordered pairs where pairs are needed.
    #[default]
    AllPairs,
    /// Only strong, weak and middle.
    Presets,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    T,
    Td,
    Tar,
}

/// Every key a config file may set. Flags with the same name win.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct RunConfig {
    pub scheme: Option<Vec<String>>,
    pub standard: Option<Vec<String>>,
    pub tt_scheme: Option<String>,
    pub ss_scheme: Option<String>,
    pub allow_non_bnm: Option<bool>,
    pub atoms: Option<Vec<String>>,
    pub depth: Option<usize>,
    pub cap: Option<usize>,
    pub reserve: Option<Vec<String>>,
    pub mode: Option<Mode>,
    pub seed: Option<u64>,
    pub sample: Option<usize>,
    pub schemes: Option<SchemeSet>,
    pub only: Option<Vec<String>>,
    pub no_timestamp: Option<bool>,
    pub format: Option<Format>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Precondition(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<RunConfig> {
        toml::from_str(text).map_err(|e| Error::Precondition(format!("bad config: {e}")))
    }

    /// Universe parameters, starting from `base` and replacing what is set.
    pub fn universe(&self, base: UniverseSpec) -> UniverseSpec {
        UniverseSpec {
            atoms: self.atoms.clone().unwrap_or(base.atoms),
            depth: self.depth.unwrap_or(base.depth),
            cap: self.cap.unwrap_or(base.cap),
            reserve: self.reserve.clone().unwrap_or(base.reserve),
        }
    }
}

/// Resolves a selector and pairs it with a standard. Non-BNM schemes are an
/// error unless explicitly allowed.
pub fn logic(selector: &str, standard: Standard, allow_non_bnm: bool) -> Result<LogicSpec> {
    let scheme: Scheme = resolve_selector(selector, allow_non_bnm)?;
    if allow_non_bnm {
        Ok(LogicSpec::new_unchecked(scheme, standard))
    } else {
        LogicSpec::new(scheme, standard)
    }
}

/// Splits comma-separated entries so `--only a,b` and repeated flags agree.
pub fn split_list(items: &[String]) -> Vec<String> {
    items
        .iter()
        .flat_map(|s| s.split(','))
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(String::from)
        .collect()
}

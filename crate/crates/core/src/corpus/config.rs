use std::collections::BTreeSet;
use std::path::Path;

use serde::Deserialize;

use crate::error::CorpusError;

/// The five verbs with the lowest inverse document frequency.
pub const LOW_IDF_VERBS: [&str; 5] = ["said", "say", "had", "made", "told"];

pub const LIGHT_VERBS: [&str; 15] = [
    "appear", "be", "become", "do", "have", "seem", "get", "give", "go", "have", "keep", "make",
    "put", "set", "take",
];

pub const REPORTING_VERBS: [&str; 5] = ["argue", "claim", "say", "suggest", "tell"];

/// Pruning thresholds and the banned-verb list.
#[derive(Clone, Debug, PartialEq)]
pub struct PruneConfig {
    /// Lowercased verbs whose events are removed.
    pub banned_verbs: BTreeSet<String>,
    /// Statistical links strictly below this confidence are removed.
    pub min_statistical_confidence: f64,
    pub drop_vague: bool,
    pub require_subject_and_object: bool,
}

impl Default for PruneConfig {
    fn default() -> Self {
        PruneConfig {
            banned_verbs: LOW_IDF_VERBS
                .iter()
                .chain(&LIGHT_VERBS)
                .chain(&REPORTING_VERBS)
                .map(|v| v.to_string())
                .collect(),
            min_statistical_confidence: 0.5,
            drop_vague: true,
            require_subject_and_object: true,
        }
    }
}

/// On-disk form. Each verb list replaces its default when present;
/// `extra_verbs` is added on top.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    min_statistical_confidence: Option<f64>,
    drop_vague: Option<bool>,
    require_subject_and_object: Option<bool>,
    low_idf_verbs: Option<Vec<String>>,
    light_verbs: Option<Vec<String>>,
    reporting_verbs: Option<Vec<String>>,
    #[serde(default)]
    extra_verbs: Vec<String>,
}

fn list(values: &[&str]) -> String {
    let quoted: Vec<String> = values.iter().map(|v| format!("\"{v}\"")).collect();
    format!("[{}]", quoted.join(", "))
}

impl PruneConfig {
    pub fn new(
        banned_verbs: impl IntoIterator<Item = String>,
        min_statistical_confidence: f64,
        drop_vague: bool,
        require_subject_and_object: bool,
    ) -> Result<Self, CorpusError> {
        if !(0.0..=1.0).contains(&min_statistical_confidence) {
            return Err(CorpusError::Config(format!(
                "min_statistical_confidence {min_statistical_confidence} outside [0, 1]"
            )));
        }
        Ok(PruneConfig {
            banned_verbs: banned_verbs.into_iter().map(|v| v.to_lowercase()).collect(),
            min_statistical_confidence,
            drop_vague,
            require_subject_and_object,
        })
    }

    pub fn is_banned(&self, verb: &str) -> bool {
        self.banned_verbs.contains(&verb.trim().to_lowercase())
    }

    pub fn from_toml_str(text: &str) -> Result<Self, CorpusError> {
        let file: ConfigFile =
            toml::from_str(text).map_err(|e| CorpusError::Config(e.to_string()))?;
        let owned = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        let verbs = file
            .low_idf_verbs
            .unwrap_or_else(|| owned(&LOW_IDF_VERBS))
            .into_iter()
            .chain(file.light_verbs.unwrap_or_else(|| owned(&LIGHT_VERBS)))
            .chain(
                file.reporting_verbs
                    .unwrap_or_else(|| owned(&REPORTING_VERBS)),
            )
            .chain(file.extra_verbs);
        let d = PruneConfig::default();
        PruneConfig::new(
            verbs,
            file.min_statistical_confidence
                .unwrap_or(d.min_statistical_confidence),
            file.drop_vague.unwrap_or(d.drop_vague),
            file.require_subject_and_object
                .unwrap_or(d.require_subject_and_object),
        )
    }

    pub fn from_path(path: &Path) -> Result<Self, CorpusError> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    /// The default configuration as an editable config file.
    pub fn default_toml() -> String {
        format!(
            "# Statistical links below this confidence are removed; rule links are kept.\n\
             min_statistical_confidence = 0.5\n\
             drop_vague = true\n\
             require_subject_and_object = true\n\
             \n\
             # Setting a list replaces its default. extra_verbs adds to the union.\n\
             low_idf_verbs = {}\n\
             light_verbs = {}\n\
             reporting_verbs = {}\n\
             extra_verbs = []\n",
            list(&LOW_IDF_VERBS),
            list(&LIGHT_VERBS),
            list(&REPORTING_VERBS),
        )
    }
}

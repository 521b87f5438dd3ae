//! Scenario files: a family (or survey settings) plus output options.

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::config::{ConfigError, KeyValues};
use crate::family::{family_from_keys, CircleFamilySpec, FamilyError, FAMILY_KEYS};
use crate::render::{DEFAULT_MARGIN, DEFAULT_STRIDE};
use crate::seismic::{SurveyConfig, SurveyError, SURVEY_KEYS};

/// Keys for naming and rendering.
pub const OUTPUT_KEYS: &[&str] = &["name", "out", "stride", "margin"];

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read scenario {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Survey(#[from] SurveyError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    /// Absent for survey-only scenarios.
    pub family: Option<CircleFamilySpec>,
    pub survey: Option<SurveyConfig>,
    /// Output directory, relative paths resolved against the scenario file.
    pub out: Option<PathBuf>,
    /// Draw every `stride`-th circle.
    pub stride: usize,
    /// View-box margin as a fraction of the figure size.
    pub margin: f64,
}

/// Parse scenario text. `name` is used when the text has no `name` key.
pub fn parse_scenario(text: &str, name: &str) -> Result<Scenario, ScenarioError> {
    let kv = KeyValues::parse(text)?;
    let allowed: Vec<&str> = FAMILY_KEYS
        .iter()
        .chain(SURVEY_KEYS)
        .chain(OUTPUT_KEYS)
        .copied()
        .collect();
    kv.check_keys(&allowed)?;

    let has_family = ["gamma.x", "gamma.y", "lambda"]
        .iter()
        .any(|k| kv.get(k).is_some());
    let has_survey = SURVEY_KEYS.iter().any(|k| kv.get(k).is_some());
    let family = if has_family || !has_survey {
        Some(family_from_keys(&kv)?)
    } else {
        None
    };
    let survey = if has_survey {
        Some(SurveyConfig::from_keys(&kv)?)
    } else {
        None
    };

    let stride = match kv.get("stride") {
        Some(e) => match e.parse_usize()? {
            0 => return Err(e.invalid("stride must be at least 1").into()),
            s => s,
        },
        None => DEFAULT_STRIDE,
    };
    let margin = match kv.get("margin") {
        Some(e) => match e.parse_f64()? {
            m if m >= 0.0 => m,
            _ => return Err(e.invalid("margin must be non-negative").into()),
        },
        None => DEFAULT_MARGIN,
    };
    Ok(Scenario {
        name: kv
            .get("name")
            .map_or_else(|| name.to_string(), |e| e.value.clone()),
        family,
        survey,
        out: kv.get("out").map(|e| PathBuf::from(&e.value)),
        stride,
        margin,
    })
}

/// Read and validate a scenario file.
pub fn load_scenario(path: &Path) -> Result<Scenario, ScenarioError> {
    let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("scenario");
    let mut scenario = parse_scenario(&text, stem)?;
    if let (Some(out), Some(dir)) = (&scenario.out, path.parent()) {
        if out.is_relative() {
            scenario.out = Some(dir.join(out));
        }
    }
    Ok(scenario)
}

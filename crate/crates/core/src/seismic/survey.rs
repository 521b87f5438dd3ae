//! Survey records and their CSV form.

use std::fs::File;
use std::io::Read;
use std::path::Path;

use thiserror::Error;

use crate::config::{ConfigError, KeyValues};
use crate::geom::Vec2;

pub const SURVEY_HEADER: [&str; 4] = ["t", "sensor_x", "sensor_y", "arrival_s"];
/// Scenario keys read by the survey configuration.
pub const SURVEY_KEYS: &[&str] = &["source", "speed", "side"];

#[derive(Debug, Error)]
pub enum SurveyError {
    #[error("cannot read survey: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("header must be `t,sensor_x,sensor_y,arrival_s`, found `{0}`")]
    Header(String),
    #[error("line {line}: arrival time must be positive, got {value}")]
    NonPositiveArrival { line: u64, value: f64 },
    #[error("line {line}: duplicate t = {t}")]
    DuplicateT { line: u64, t: f64 },
    #[error("line {line}: t = {t} is not greater than the previous record")]
    Unsorted { line: u64, t: f64 },
    #[error("speed must be positive, got {0}")]
    NonPositiveSpeed(f64),
    #[error("survey needs at least 2 records, got {0}")]
    TooFewRecords(usize),
    #[error(transparent)]
    Config(#[from] ConfigError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurveyRecord {
    pub t: f64,
    pub sensor: Vec2,
    pub arrival: f64,
    /// 1-based line in the source file.
    pub line: u64,
}

/// Validated survey: records sorted strictly by `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct SurveyData {
    rows: Vec<SurveyRecord>,
    source: Vec2,
    speed: f64,
}

impl SurveyData {
    pub fn new(rows: Vec<SurveyRecord>, source: Vec2, speed: f64) -> Result<Self, SurveyError> {
        if !(speed > 0.0 && speed.is_finite()) {
            return Err(SurveyError::NonPositiveSpeed(speed));
        }
        if rows.len() < 2 {
            return Err(SurveyError::TooFewRecords(rows.len()));
        }
        for (k, r) in rows.iter().enumerate() {
            if !(r.arrival > 0.0 && r.arrival.is_finite()) {
                return Err(SurveyError::NonPositiveArrival {
                    line: r.line,
                    value: r.arrival,
                });
            }
            if k > 0 {
                let prev = rows[k - 1].t;
                if r.t == prev {
                    return Err(SurveyError::DuplicateT {
                        line: r.line,
                        t: r.t,
                    });
                }
                if !(r.t > prev) {
                    return Err(SurveyError::Unsorted {
                        line: r.line,
                        t: r.t,
                    });
                }
            }
        }
        Ok(SurveyData {
            rows,
            source,
            speed,
        })
    }

    pub fn rows(&self) -> &[SurveyRecord] {
        &self.rows
    }

    pub fn source(&self) -> Vec2 {
        self.source
    }

    pub fn speed(&self) -> f64 {
        self.speed
    }

    pub fn t(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.t).collect()
    }

    pub fn sensors(&self) -> Vec<Vec2> {
        self.rows.iter().map(|r| r.sensor).collect()
    }

    /// `c τ` at each record.
    pub fn path_lengths(&self) -> Vec<f64> {
        self.rows.iter().map(|r| self.speed * r.arrival).collect()
    }
}

/// Read `t,sensor_x,sensor_y,arrival_s` records.
pub fn ingest_survey<R: Read>(
    reader: R,
    source: Vec2,
    speed: f64,
) -> Result<SurveyData, SurveyError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader);
    let header = rdr.headers().map_err(|e| csv_error(e, 1))?.clone();
    if header.iter().collect::<Vec<_>>() != SURVEY_HEADER {
        return Err(SurveyError::Header(
            header.iter().collect::<Vec<_>>().join(","),
        ));
    }
    let mut rows = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| csv_error(e, 0))?;
        let line = record.position().map_or(0, |p| p.line());
        let field = |i: usize| -> Result<f64, SurveyError> {
            let text = record.get(i).unwrap_or("");
            text.parse::<f64>().map_err(|_| SurveyError::Parse {
                line,
                message: format!("`{}` is not a number (column {})", text, SURVEY_HEADER[i]),
            })
        };
        rows.push(SurveyRecord {
            t: field(0)?,
            sensor: Vec2::new(field(1)?, field(2)?),
            arrival: field(3)?,
            line,
        });
    }
    SurveyData::new(rows, source, speed)
}

pub fn ingest_survey_file(
    path: &Path,
    source: Vec2,
    speed: f64,
) -> Result<SurveyData, SurveyError> {
    ingest_survey(File::open(path)?, source, speed)
}

fn csv_error(e: csv::Error, fallback_line: u64) -> SurveyError {
    let line = e.position().map_or(fallback_line, |p| p.line());
    SurveyError::Parse {
        line,
        message: e.to_string(),
    }
}

/// Which side of the sensor line the reflector lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Side {
    Upper,
    #[default]
    Lower,
}

impl std::str::FromStr for Side {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "upper" => Ok(Side::Upper),
            "lower" => Ok(Side::Lower),
            other => Err(format!("side must be `upper` or `lower`, got `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurveyConfig {
    pub source: Vec2,
    pub speed: f64,
    pub side: Side,
}

impl SurveyConfig {
    /// Read `source`, `speed` and optional `side`.
    pub fn from_keys(kv: &KeyValues) -> Result<Self, SurveyError> {
        let (x, y) = kv.require("source")?.parse_pair()?;
        let speed_entry = kv.require("speed")?;
        let speed = speed_entry.parse_f64()?;
        if !(speed > 0.0) {
            return Err(SurveyError::NonPositiveSpeed(speed));
        }
        let side = match kv.get("side") {
            Some(e) => e.value.parse().map_err(|m: String| e.invalid(m))?,
            None => Side::default(),
        };
        Ok(SurveyConfig {
            source: Vec2::new(x, y),
            speed,
            side,
        })
    }
}

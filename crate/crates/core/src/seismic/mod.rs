//! Orthotomic and reflector recovery from seismic travel times.
//!
//! A sensor at `γ(t)` records the arrival time `τ(t)` of a wave sent from
//! the source `A` and reflected once. With wave speed `c` the circles
//! `C(γ(t), c τ(t))` envelope the orthotomic `W` of the reflector with
//! respect to `A`; the reflector is then the set of points equidistant
//! from `A` and `W` on the segments from `W` to the sensors.

mod spline;
mod survey;

pub use spline::{CubicSpline, SplineError};
pub use survey::{
    ingest_survey, ingest_survey_file, Side, SurveyConfig, SurveyData, SurveyError, SurveyRecord,
    SURVEY_HEADER, SURVEY_KEYS,
};

use thiserror::Error;

use crate::analysis::Analysis;
use crate::creativity::{Classification, CreativityParams};
use crate::envelope::{EnvelopeBranch, EnvelopeError};
use crate::family::{CircleFamily, FamilyError, FamilySample, Interval};
use crate::frontal::{FrontalData, FrontalError};
use crate::geom::Vec2;

/// Records closer than this to either end are not interior.
pub const INTERIOR_MARGIN: usize = 3;
/// Normal used when every sensor sits at the same point.
pub const FALLBACK_NORMAL: Vec2 = Vec2::new(0.0, -1.0);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeismicError {
    #[error(
        "travel times are inconsistent: the circle family is not creative at record t = {t} (line {line}), \
         where |λ'| exceeds |β| by {excess:.3e}"
    )]
    NotCreative { t: f64, line: u64, excess: f64 },
    #[error("sensors do not move along a curve (β ≡ 0): uncountably many envelopes, no canonical orthotomic")]
    UncountablyMany,
    #[error("source coincides with the orthotomic at t = {t}; the mirror bisector is undefined")]
    SourceOnOrthotomic { t: f64 },
    #[error(transparent)]
    Spline(#[from] SplineError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Frontal(#[from] FrontalError),
    #[error(transparent)]
    Envelope(#[from] EnvelopeError),
}

/// `λ = c τ` at the records.
pub fn radii_from_times(data: &SurveyData) -> Vec<f64> {
    data.path_lengths()
}

/// Circle family of a survey: splines through the sensor positions and
/// the path lengths, analysed on the record parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct SurveyFamily {
    t: Vec<f64>,
    sensor_x: CubicSpline,
    sensor_y: CubicSpline,
    radius: CubicSpline,
    interval: Interval,
}

impl SurveyFamily {
    pub fn new(data: &SurveyData) -> Result<Self, SeismicError> {
        let t = data.t();
        let sensors = data.sensors();
        let xs: Vec<f64> = sensors.iter().map(|p| p.x).collect();
        let ys: Vec<f64> = sensors.iter().map(|p| p.y).collect();
        let n = t.len();
        let interval = Interval::new(
            t[0] - 0.5 * (t[1] - t[0]),
            t[n - 1] + 0.5 * (t[n - 1] - t[n - 2]),
        )?;
        Ok(SurveyFamily {
            sensor_x: CubicSpline::new(&t, &xs)?,
            sensor_y: CubicSpline::new(&t, &ys)?,
            radius: CubicSpline::new(&t, &radii_from_times(data))?,
            t,
            interval,
        })
    }
}

impl CircleFamily for SurveyFamily {
    fn interval(&self) -> Interval {
        self.interval
    }

    fn grid(&self) -> Vec<f64> {
        self.t.clone()
    }

    fn sample(&self, t: f64) -> Result<FamilySample, FamilyError> {
        let radius = self.radius.eval(t);
        if !(radius > 0.0) {
            return Err(FamilyError::NonPositiveRadius { t, value: radius });
        }
        Ok(FamilySample {
            t,
            center: Vec2::new(self.sensor_x.eval(t), self.sensor_y.eval(t)),
            velocity: Vec2::new(self.sensor_x.deriv(t), self.sensor_y.deriv(t)),
            radius,
            radius_rate: self.radius.deriv(t),
            gauss: None,
        })
    }
}

/// Recovered orthotomic: all branches plus the one on the chosen side.
#[derive(Debug, Clone, PartialEq)]
pub struct Orthotomic {
    pub analysis: Analysis,
    pub branches: Vec<EnvelopeBranch>,
    pub selected: usize,
    /// Mean signed distance of each branch from the sensor line.
    pub mean_offsets: Vec<f64>,
}

impl Orthotomic {
    pub fn selected_branch(&self) -> &EnvelopeBranch {
        &self.branches[self.selected]
    }
}

/// Unit normal of the line through the first and last sensor, pointing
/// to its left (upper side for sensors laid out left to right).
pub fn sensor_line_normal(sensors: &[Vec2]) -> Vec2 {
    let first = sensors[0];
    let last = sensors[sensors.len() - 1];
    (last - first)
        .normalized()
        .map_or(Vec2::new(0.0, 1.0), |d| d.rot90())
}

/// Envelope of the survey circles on the requested side of the sensors.
pub fn recover_orthotomic(
    data: &SurveyData,
    side: Side,
    params: &CreativityParams,
) -> Result<Orthotomic, SeismicError> {
    let family = SurveyFamily::new(data)?;
    let samples = family.sample_grid()?;
    let frames = match FrontalData::build(&samples) {
        Err(FrontalError::AllSingular) => {
            FrontalData::build_with_constant_normal(&samples, FALLBACK_NORMAL)?
        }
        other => other?,
    };
    let analysis = Analysis::from_parts(samples, frames, params);
    match analysis.report.classification {
        Classification::NotCreative { index, witness_t } => {
            let excess = -analysis.report.margin[index];
            return Err(SeismicError::NotCreative {
                t: witness_t,
                line: data.rows()[index].line,
                excess,
            });
        }
        Classification::UncountablyMany => return Err(SeismicError::UncountablyMany),
        _ => {}
    }
    let branches = analysis.envelopes()?;
    let sensors = data.sensors();
    let normal = sensor_line_normal(&sensors);
    let origin = sensors[0];
    let mean_offsets: Vec<f64> = branches
        .iter()
        .map(|b| {
            b.points
                .iter()
                .map(|p| (*p - origin).dot(normal))
                .sum::<f64>()
                / b.points.len() as f64
        })
        .collect();
    let order = |a: &f64, b: &f64| a.total_cmp(b);
    let selected = match side {
        Side::Lower => {
            (0..branches.len()).min_by(|&i, &j| order(&mean_offsets[i], &mean_offsets[j]))
        }
        Side::Upper => {
            (0..branches.len()).max_by(|&i, &j| order(&mean_offsets[i], &mean_offsets[j]))
        }
    }
    .unwrap_or(0);
    Ok(Orthotomic {
        analysis,
        branches,
        selected,
        mean_offsets,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectorPoint {
    pub t: f64,
    pub point: Vec2,
    /// The bisector meets the line through `f` and `γ` outside the segment.
    pub flagged: bool,
}

/// Reflector point for orthotomic point `f`, source `a` and sensor `g`:
/// the point of the line `f → g` equidistant from `a` and `f`.
pub fn mirror_point(f: Vec2, a: Vec2, g: Vec2) -> Option<(Vec2, f64)> {
    let fa = f - a;
    let denom = (g - f).dot(fa);
    if denom == 0.0 || fa.norm_sq() == 0.0 {
        return None;
    }
    let s = -0.5 * fa.norm_sq() / denom;
    Some((f + s * (g - f), s))
}

/// Reflector samples from an orthotomic branch.
pub fn reconstruct_reflector(
    w: &EnvelopeBranch,
    source: Vec2,
    sensors: &[Vec2],
) -> Result<Vec<ReflectorPoint>, SeismicError> {
    assert_eq!(
        w.points.len(),
        sensors.len(),
        "branch and sensors differ in length"
    );
    w.points
        .iter()
        .zip(sensors)
        .zip(&w.t)
        .map(|((&f, &g), &t)| {
            if f == source {
                return Err(SeismicError::SourceOnOrthotomic { t });
            }
            Ok(match mirror_point(f, source, g) {
                Some((point, s)) => ReflectorPoint {
                    t,
                    point,
                    flagged: !(0.0..=1.0).contains(&s),
                },
                None => ReflectorPoint {
                    t,
                    point: f,
                    flagged: true,
                },
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flat_survey(n: usize) -> SurveyData {
        let rows = (0..n)
            .map(|k| {
                let x = -2.0 + 4.0 * k as f64 / (n - 1) as f64;
                SurveyRecord {
                    t: x,
                    sensor: Vec2::new(x, 0.0),
                    arrival: (x * x + 4.0).sqrt(),
                    line: k as u64 + 2,
                }
            })
            .collect();
        SurveyData::new(rows, Vec2::ZERO, 1.0).unwrap()
    }

    #[test]
    fn radius_is_speed_times_time() {
        let rows = vec![
            SurveyRecord {
                t: 0.0,
                sensor: Vec2::ZERO,
                arrival: 2.0,
                line: 2,
            },
            SurveyRecord {
                t: 1.0,
                sensor: Vec2::new(1.0, 0.0),
                arrival: 2.5,
                line: 3,
            },
        ];
        let d = SurveyData::new(rows, Vec2::ZERO, 1500.0).unwrap();
        assert_eq!(radii_from_times(&d), vec![3000.0, 3750.0]);
    }

    #[test]
    fn interpolated_radius_is_between_records() {
        let d = flat_survey(21);
        let fam = SurveyFamily::new(&d).unwrap();
        let r = radii_from_times(&d);
        for k in 10..20 {
            let mid = 0.5 * (d.rows()[k].t + d.rows()[k + 1].t);
            let v = fam.sample(mid).unwrap().radius;
            assert!(v > r[k] && v < r[k + 1]);
        }
    }

    #[test]
    fn flat_reflector_orthotomic() {
        let d = flat_survey(101);
        let o = recover_orthotomic(&d, Side::Lower, &Default::default()).unwrap();
        assert_eq!(o.branches.len(), 2);
        let w = o.selected_branch();
        for (k, p) in w.points.iter().enumerate().skip(3).take(95) {
            assert!((*p - Vec2::new(0.0, -2.0)).norm() < 1e-6, "{k}: {p}");
        }
        let up = recover_orthotomic(&d, Side::Upper, &Default::default()).unwrap();
        assert!((up.selected_branch().points[50] - Vec2::new(0.0, 2.0)).norm() < 1e-6);
    }

    #[test]
    fn flat_reflector_points() {
        let d = flat_survey(101);
        let o = recover_orthotomic(&d, Side::Lower, &Default::default()).unwrap();
        let m = reconstruct_reflector(o.selected_branch(), d.source(), &d.sensors()).unwrap();
        for (k, r) in m.iter().enumerate().skip(3).take(95) {
            assert!(!r.flagged);
            assert!((r.point - Vec2::new(r.t / 2.0, -1.0)).norm() < 1e-6, "{k}");
        }
    }

    #[test]
    fn mirror_point_example() {
        let (m, s) = mirror_point(Vec2::new(0.0, -2.0), Vec2::ZERO, Vec2::new(3.0, 0.0)).unwrap();
        assert!((m - Vec2::new(1.5, -1.0)).norm() < 1e-15);
        assert_eq!(s, 0.5);
    }

    #[test]
    fn source_on_orthotomic_is_an_error() {
        let w = EnvelopeBranch {
            label: crate::envelope::BranchLabel::Plus,
            t: vec![0.0],
            creator: vec![Vec2::new(0.0, -1.0)],
            points: vec![Vec2::ZERO],
            warnings: vec![],
        };
        let e = reconstruct_reflector(&w, Vec2::ZERO, &[Vec2::new(0.0, 1.0)]).unwrap_err();
        assert_eq!(e, SeismicError::SourceOnOrthotomic { t: 0.0 });
    }

    #[test]
    fn sensors_at_one_point() {
        let rows = (0..10)
            .map(|k| SurveyRecord {
                t: k as f64,
                sensor: Vec2::new(1.0, 0.0),
                arrival: 1.0,
                line: k + 2,
            })
            .collect();
        let d = SurveyData::new(rows, Vec2::ZERO, 1.0).unwrap();
        assert_eq!(
            recover_orthotomic(&d, Side::Lower, &Default::default()).unwrap_err(),
            SeismicError::UncountablyMany
        );
    }

    #[test]
    fn inconsistent_times_are_not_creative() {
        let rows = (0..10)
            .map(|k| {
                let x = k as f64 * 0.1;
                SurveyRecord {
                    t: x,
                    sensor: Vec2::new(x, 0.0),
                    arrival: 1.0 + 3.0 * x,
                    line: k + 2,
                }
            })
            .collect();
        let d = SurveyData::new(rows, Vec2::ZERO, 1.0).unwrap();
        let e = recover_orthotomic(&d, Side::Lower, &Default::default()).unwrap_err();
        assert!(
            matches!(e, SeismicError::NotCreative { line: 2, .. }),
            "{e}"
        );
    }
}

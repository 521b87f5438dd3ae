//! The creative condition `λ' = β cos θ` and the envelope-count
//! classification built on it.
//!
//! Density statements over the open interval are approximated on the
//! sample grid by splitting its range into equal windows. A window with no
//! samples carries no evidence and is skipped.

use std::fmt::{self, Write as _};

use rayon::prelude::*;

use crate::frontal::FrontalData;

/// Relative band around `|λ'| = |β|` that counts as tangency.
pub const EPS_TAN: f64 = 1e-6;
/// Relative margin for the strict inequality `|λ'| < |β|`.
pub const DELTA_STRICT: f64 = 1e-6;
/// Default number of density windows.
pub const DEFAULT_WINDOWS: usize = 64;
/// `|cos θ|` up to `1 + CLAMP_BAND` is clamped instead of rejected.
pub const CLAMP_BAND: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CreativityParams {
    /// Threshold on |β|; `None` uses the frame's singularity threshold.
    pub eps_beta: Option<f64>,
    pub eps_tan: f64,
    pub delta_strict: f64,
    pub windows: usize,
}

impl Default for CreativityParams {
    fn default() -> Self {
        CreativityParams {
            eps_beta: None,
            eps_tan: EPS_TAN,
            delta_strict: DELTA_STRICT,
            windows: DEFAULT_WINDOWS,
        }
    }
}

/// Solvability of `λ' = β cos θ` at one sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PointStatus {
    Solvable {
        cos_theta: f64,
    },
    /// β = 0 and λ' = 0: every creator direction works.
    Unconstrained,
    /// |λ'| > |β|.
    NoSolution,
}

impl PointStatus {
    pub fn label(&self) -> &'static str {
        match self {
            PointStatus::Solvable { .. } => "solvable",
            PointStatus::Unconstrained => "unconstrained",
            PointStatus::NoSolution => "no-solution",
        }
    }

    pub fn cos_theta(&self) -> Option<f64> {
        match self {
            PointStatus::Solvable { cos_theta } => Some(*cos_theta),
            _ => None,
        }
    }
}

/// Decide `λ' = β cos θ` for a single sample.
pub fn pointwise_creative(radius_rate: f64, beta: f64, eps_beta: f64) -> PointStatus {
    if beta.abs() <= eps_beta {
        return if radius_rate.abs() <= eps_beta {
            PointStatus::Unconstrained
        } else {
            PointStatus::NoSolution
        };
    }
    let c = radius_rate / beta;
    if c.abs() <= 1.0 {
        PointStatus::Solvable { cos_theta: c }
    } else if c.abs() <= 1.0 + CLAMP_BAND {
        PointStatus::Solvable {
            cos_theta: c.signum(),
        }
    } else {
        PointStatus::NoSolution
    }
}

/// How many distinct envelopes the family creates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Classification {
    /// The creative identity fails; `witness_t` is the smallest failing sample.
    NotCreative {
        witness_t: f64,
        index: usize,
    },
    Unique,
    ExactlyTwo,
    UncountablyMany,
    /// The window evidence fits none of the cases.
    Ambiguous,
}

impl Classification {
    pub fn name(&self) -> &'static str {
        match self {
            Classification::NotCreative { .. } => "NotCreative",
            Classification::Unique => "Unique",
            Classification::ExactlyTwo => "ExactlyTwo",
            Classification::UncountablyMany => "UncountablyMany",
            Classification::Ambiguous => "Ambiguous",
        }
    }

    pub fn is_creative(&self) -> bool {
        !matches!(self, Classification::NotCreative { .. })
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::NotCreative { witness_t, .. } => {
                write!(f, "NotCreative (witness t = {witness_t:.6})")
            }
            other => f.write_str(other.name()),
        }
    }
}

/// Evidence gathered in one density window `[lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowStat {
    pub lo: f64,
    pub hi: f64,
    pub samples: usize,
    /// Some sample has |β| > ε_β.
    pub regular: bool,
    /// Some sample has |β| > ε_β and |λ'| = |β| within the tangency band.
    pub tangent: bool,
    /// Some sample has |λ'| < (1 - δ)|β|.
    pub strict: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CreativityReport {
    pub t: Vec<f64>,
    pub status: Vec<PointStatus>,
    /// `|β| - |λ'|` per sample.
    pub margin: Vec<f64>,
    pub classification: Classification,
    pub windows: Vec<WindowStat>,
    pub eps_beta: f64,
}

/// Run the pointwise test over the grid and classify the family.
pub fn classify_family(
    frames: &FrontalData,
    radius_rate: &[f64],
    params: &CreativityParams,
) -> CreativityReport {
    assert_eq!(
        frames.len(),
        radius_rate.len(),
        "radius rates do not match the grid"
    );
    let eps_beta = params.eps_beta.unwrap_or(frames.eps_sing);
    let status: Vec<PointStatus> = frames
        .beta
        .par_iter()
        .zip(radius_rate.par_iter())
        .map(|(&b, &r)| pointwise_creative(r, b, eps_beta))
        .collect();
    let margin: Vec<f64> = frames
        .beta
        .iter()
        .zip(radius_rate)
        .map(|(b, r)| b.abs() - r.abs())
        .collect();

    let windows = window_stats(frames, radius_rate, eps_beta, params);

    let classification = match status.iter().position(|s| *s == PointStatus::NoSolution) {
        Some(index) => Classification::NotCreative {
            witness_t: frames.t[index],
            index,
        },
        None => {
            let populated = windows.iter().filter(|w| w.samples > 0);
            let (mut all_regular, mut all_tangent, mut any_strict) = (true, true, false);
            for w in populated {
                all_regular &= w.regular;
                all_tangent &= w.tangent;
                any_strict |= w.strict;
            }
            if !all_regular {
                Classification::UncountablyMany
            } else if all_tangent {
                Classification::Unique
            } else if any_strict {
                Classification::ExactlyTwo
            } else {
                Classification::Ambiguous
            }
        }
    };

    CreativityReport {
        t: frames.t.clone(),
        status,
        margin,
        classification,
        windows,
        eps_beta,
    }
}

fn window_stats(
    frames: &FrontalData,
    radius_rate: &[f64],
    eps_beta: f64,
    params: &CreativityParams,
) -> Vec<WindowStat> {
    let nw = params.windows.max(1);
    let (lo, hi) = (frames.t[0], frames.t[frames.len() - 1]);
    let width = (hi - lo) / nw as f64;
    let mut windows: Vec<WindowStat> = (0..nw)
        .map(|k| WindowStat {
            lo: lo + k as f64 * width,
            hi: if k + 1 == nw {
                hi
            } else {
                lo + (k + 1) as f64 * width
            },
            samples: 0,
            regular: false,
            tangent: false,
            strict: false,
        })
        .collect();
    for ((&t, &b), &r) in frames.t.iter().zip(&frames.beta).zip(radius_rate) {
        let k = if width > 0.0 {
            (((t - lo) / width) as usize).min(nw - 1)
        } else {
            0
        };
        let w = &mut windows[k];
        let (b, r) = (b.abs(), r.abs());
        w.samples += 1;
        if b > eps_beta {
            w.regular = true;
            if (r - b).abs() <= params.eps_tan * b {
                w.tangent = true;
            }
        }
        if r < (1.0 - params.delta_strict) * b {
            w.strict = true;
        }
    }
    windows
}

impl CreativityReport {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// Status line followed by a per-window table.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "classification: {}", self.classification);
        let count = |f: fn(&PointStatus) -> bool| self.status.iter().filter(|s| f(s)).count();
        let _ = writeln!(
            out,
            "samples: {} (solvable {}, unconstrained {}, no-solution {}), eps_beta = {:e}",
            self.len(),
            count(|s| matches!(s, PointStatus::Solvable { .. })),
            count(|s| matches!(s, PointStatus::Unconstrained)),
            count(|s| matches!(s, PointStatus::NoSolution)),
            self.eps_beta
        );
        let min_margin = self.margin.iter().copied().fold(f64::INFINITY, f64::min);
        let _ = writeln!(out, "min margin |beta|-|lambda'|: {min_margin:.6e}");
        let _ = writeln!(
            out,
            "window  lo            hi            samples  beta!=0  tangent  strict"
        );
        for (k, w) in self.windows.iter().enumerate() {
            let yn = |b: bool| if b { "yes" } else { "no" };
            let _ = writeln!(
                out,
                "{:<7} {:<13.6e} {:<13.6e} {:<8} {:<8} {:<8} {}",
                k,
                w.lo,
                w.hi,
                w.samples,
                yn(w.regular),
                yn(w.tangent),
                yn(w.strict)
            );
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{CircleFamily, CircleFamilySpec};

    fn classify(
        gamma: (&str, &str),
        lambda: &str,
        nu: Option<(&str, &str)>,
        iv: (f64, f64),
    ) -> CreativityReport {
        let spec = CircleFamilySpec::from_sources(gamma, lambda, nu, iv, 2001).unwrap();
        let samples = spec.sample_grid().unwrap();
        let frames = FrontalData::build(&samples).unwrap();
        let rates: Vec<f64> = samples.iter().map(|s| s.radius_rate).collect();
        classify_family(&frames, &rates, &CreativityParams::default())
    }

    #[test]
    fn pointwise_cases() {
        assert_eq!(
            pointwise_creative(1.0, 1.0, 1e-8),
            PointStatus::Solvable { cos_theta: 1.0 }
        );
        assert_eq!(pointwise_creative(1.2, 1.0, 1e-8), PointStatus::NoSolution);
        assert_eq!(
            pointwise_creative(0.0, 0.0, 1e-8),
            PointStatus::Unconstrained
        );
        assert_eq!(pointwise_creative(1e-3, 0.0, 1e-8), PointStatus::NoSolution);
        assert_eq!(
            pointwise_creative(-0.5, 2.0, 1e-8),
            PointStatus::Solvable { cos_theta: -0.25 }
        );
    }

    #[test]
    fn roundoff_at_tangency_is_clamped() {
        let s = pointwise_creative(1.0 + 1e-12, 1.0, 1e-8);
        assert_eq!(s, PointStatus::Solvable { cos_theta: 1.0 });
        let s = pointwise_creative(-(1.0 + 1e-12), 1.0, 1e-8);
        assert_eq!(s, PointStatus::Solvable { cos_theta: -1.0 });
    }

    #[test]
    fn solvable_satisfies_identity() {
        for (r, b) in [(0.3, 1.0), (-2.0, 3.0), (1.0, -1.0), (0.0, 5.0)] {
            let c = pointwise_creative(r, b, 1e-8).cos_theta().unwrap();
            assert!((r - b * c).abs() <= 1e-9);
        }
    }

    #[test]
    fn expanding_vertical_family_is_unique() {
        let r = classify(("0", "1+t"), "1+t", None, (0.0, 4.0));
        assert_eq!(r.classification, Classification::Unique);
    }

    #[test]
    fn translated_unit_circles_make_two() {
        let r = classify(("t", "0"), "1", None, (-2.0, 2.0));
        assert_eq!(r.classification, Classification::ExactlyTwo);
    }

    #[test]
    fn concentric_family_is_uncountable() {
        let r = classify(("0", "0"), "1", Some(("1", "0")), (-1.0, 1.0));
        assert_eq!(r.classification, Classification::UncountablyMany);
    }

    #[test]
    fn quadratic_radius_fails_past_one_half() {
        let r = classify(("t", "0"), "t^2", None, (0.0, 4.0));
        match r.classification {
            Classification::NotCreative { witness_t, .. } => {
                assert!(witness_t > 0.5 && witness_t <= 0.6, "{witness_t}")
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn growing_concentric_circles_are_not_creative() {
        let r = classify(("0", "0"), "1+t", Some(("1", "0")), (0.0, 1.0));
        assert!(matches!(
            r.classification,
            Classification::NotCreative { index: 0, .. }
        ));
    }

    #[test]
    fn gauss_sign_flip_keeps_classification() {
        let a = classify(
            ("t^3", "t^2"),
            "1",
            Some(("2/sqrt(4+9*t^2)", "-3*t/sqrt(4+9*t^2)")),
            (-2.0, 2.0),
        );
        let b = classify(
            ("t^3", "t^2"),
            "1",
            Some(("-2/sqrt(4+9*t^2)", "3*t/sqrt(4+9*t^2)")),
            (-2.0, 2.0),
        );
        assert_eq!(a.classification, Classification::ExactlyTwo);
        assert_eq!(a.classification, b.classification);
    }

    #[test]
    fn report_text_mentions_classification() {
        let r = classify(("t", "0"), "1", None, (-2.0, 2.0));
        let text = r.to_text();
        assert!(text.starts_with("classification: ExactlyTwo"));
        assert_eq!(text.lines().count(), 4 + DEFAULT_WINDOWS);
    }
}

//! Creators `ν̃` and envelope branches `f = γ + λ ν̃`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::creativity::{Classification, CreativityReport, PointStatus};
use crate::frontal::FrontalData;
use crate::geom::{finite_difference, Vec2};

/// Relative tolerance on the tangency residual `|f'·(f - γ)|`.
pub const TOL_TANGENCY: f64 = 1e-6;
/// Relative tolerance on the radius residual `| |f - γ| - λ |`.
pub const TOL_RADIUS: f64 = 1e-9;
/// `sin θ` below this marks a sample where the two branches touch.
pub const CONTACT_SIN: f64 = 1e-6;
/// Consecutive creators with a smaller dot product are reported.
pub const CREATOR_CONTINUITY_DOT: f64 = 0.9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EnvelopeError {
    #[error("family is not creative (identity fails at t = {witness_t}); it creates no envelope")]
    NotCreative { witness_t: f64 },
    #[error("creator and frame lengths differ")]
    LengthMismatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BranchLabel {
    Plus,
    Minus,
    /// The only admissible creator (unique envelope).
    Forced,
    /// Randomized creator differing from the canonical one on
    /// unconstrained stretches.
    Variant(usize),
}

impl BranchLabel {
    pub fn name(&self) -> String {
        match self {
            BranchLabel::Plus => "plus".into(),
            BranchLabel::Minus => "minus".into(),
            BranchLabel::Forced => "forced".into(),
            BranchLabel::Variant(k) => format!("variant{k}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EnvelopeWarning {
    /// `|cos θ| = 1`: the plus and minus branches meet here.
    BranchContact { index: usize, t: f64 },
    /// The creator turns sharply between `index` and `index + 1`.
    CreatorJump { index: usize, t: f64, dot: f64 },
}

/// Unit creator field over the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CreatorBranch {
    pub label: BranchLabel,
    pub creator: Vec<Vec2>,
    pub warnings: Vec<EnvelopeWarning>,
}

/// A sampled envelope.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeBranch {
    pub label: BranchLabel,
    pub t: Vec<f64>,
    pub creator: Vec<Vec2>,
    pub points: Vec<Vec2>,
    pub warnings: Vec<EnvelopeWarning>,
}

/// `cos θ` per sample, with unconstrained stretches filled by linear
/// interpolation between the nearest solvable neighbours (0 if none).
pub fn filled_cos_theta(report: &CreativityReport) -> Vec<f64> {
    let n = report.len();
    let mut cos = vec![0.0; n];
    let known: Vec<usize> = (0..n)
        .filter(|&k| matches!(report.status[k], PointStatus::Solvable { .. }))
        .collect();
    for &k in &known {
        cos[k] = report.status[k].cos_theta().unwrap();
    }
    if known.is_empty() {
        return cos;
    }
    let mut next = 0; // index into `known` of the first known sample >= k
    for k in 0..n {
        while next < known.len() && known[next] < k {
            next += 1;
        }
        if next < known.len() && known[next] == k {
            continue;
        }
        let left = next.checked_sub(1).map(|j| known[j]);
        let right = known.get(next).copied();
        cos[k] = match (left, right) {
            (Some(l), Some(r)) => {
                let s = (report.t[k] - report.t[l]) / (report.t[r] - report.t[l]);
                cos[l] + s * (cos[r] - cos[l])
            }
            (Some(l), None) => cos[l],
            (None, Some(r)) => cos[r],
            (None, None) => 0.0,
        };
    }
    cos
}

/// The canonical creators `ν̃± = -cos θ μ ± sin θ ν`; one creator when the
/// envelope is unique.
pub fn creator_branches(
    report: &CreativityReport,
    frames: &FrontalData,
) -> Result<Vec<CreatorBranch>, EnvelopeError> {
    if let Classification::NotCreative { witness_t, .. } = report.classification {
        return Err(EnvelopeError::NotCreative { witness_t });
    }
    if report.len() != frames.len() {
        return Err(EnvelopeError::LengthMismatch);
    }
    let cos = filled_cos_theta(report);
    let sin: Vec<f64> = cos.iter().map(|c| (1.0 - c * c).max(0.0).sqrt()).collect();
    let build = |sign: f64| -> Vec<Vec2> {
        (0..frames.len())
            .into_par_iter()
            .map(|k| {
                let v = -cos[k] * frames.tangent[k] + sign * sin[k] * frames.normal[k];
                v / v.norm()
            })
            .collect()
    };
    let contacts: Vec<EnvelopeWarning> = sin
        .iter()
        .enumerate()
        .filter(|(k, s)| **s <= CONTACT_SIN && report.status[*k] != PointStatus::Unconstrained)
        .map(|(index, _)| EnvelopeWarning::BranchContact {
            index,
            t: frames.t[index],
        })
        .collect();

    let labelled: Vec<(BranchLabel, f64)> = if report.classification == Classification::Unique {
        vec![(BranchLabel::Forced, 1.0)]
    } else {
        vec![(BranchLabel::Plus, 1.0), (BranchLabel::Minus, -1.0)]
    };
    Ok(labelled
        .into_iter()
        .map(|(label, sign)| {
            let creator = build(sign);
            let mut warnings = if label == BranchLabel::Forced {
                Vec::new()
            } else {
                contacts.clone()
            };
            warnings.extend(jump_warnings(&frames.t, &creator));
            CreatorBranch {
                label,
                creator,
                warnings,
            }
        })
        .collect())
}

fn jump_warnings(t: &[f64], creator: &[Vec2]) -> Vec<EnvelopeWarning> {
    creator
        .windows(2)
        .enumerate()
        .filter_map(|(index, w)| {
            let dot = w[0].dot(w[1]);
            (dot < CREATOR_CONTINUITY_DOT).then_some(EnvelopeWarning::CreatorJump {
                index,
                t: t[index],
                dot,
            })
        })
        .collect()
}

// Smooth bump on (0, 1), 1 at s = 1/2, vanishing with all derivatives at the ends.
fn bump(s: f64) -> f64 {
    if s <= 0.0 || s >= 1.0 {
        return 0.0;
    }
    let x = 2.0 * s - 1.0;
    (1.0 - 1.0 / (1.0 - x * x)).exp()
}

/// Additional creators that differ from `base` only on stretches where
/// every direction is admissible (β = λ' = 0). Each rotates `base` by a
/// random angle times a smooth bump supported on the stretch, so values at
/// the stretch boundaries are unchanged. Empty when there is no such stretch.
pub fn randomized_creators(
    base: &CreatorBranch,
    report: &CreativityReport,
    count: usize,
    seed: u64,
) -> Vec<CreatorBranch> {
    let n = report.len();
    let mut runs: Vec<(usize, usize)> = Vec::new();
    let mut k = 0;
    while k < n {
        if report.status[k] == PointStatus::Unconstrained {
            let start = k;
            while k < n && report.status[k] == PointStatus::Unconstrained {
                k += 1;
            }
            runs.push((start, k - 1));
        } else {
            k += 1;
        }
    }
    if runs.is_empty() {
        return Vec::new();
    }
    let t = &report.t;
    let step = if n > 1 { t[1] - t[0] } else { 1.0 };
    let spans: Vec<(f64, f64)> = runs
        .iter()
        .map(|&(i0, i1)| {
            let lo = if i0 > 0 { t[i0 - 1] } else { t[i0] - step };
            let hi = if i1 + 1 < n { t[i1 + 1] } else { t[i1] + step };
            (lo, hi)
        })
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|j| {
            let amplitudes: Vec<f64> = runs
                .iter()
                .map(|_| {
                    let mag = rng.gen_range(PI / 8.0..3.0 * PI / 8.0);
                    if rng.gen_bool(0.5) {
                        mag
                    } else {
                        -mag
                    }
                })
                .collect();
            let mut creator = base.creator.clone();
            for ((&(i0, i1), &(lo, hi)), &amp) in runs.iter().zip(&spans).zip(&amplitudes) {
                for (idx, c) in creator.iter_mut().enumerate().take(i1 + 1).skip(i0) {
                    let angle = amp * bump((t[idx] - lo) / (hi - lo));
                    let (s, co) = angle.sin_cos();
                    *c = Vec2::new(co * c.x - s * c.y, s * c.x + co * c.y);
                }
            }
            let warnings = jump_warnings(t, &creator);
            CreatorBranch {
                label: BranchLabel::Variant(j + 1),
                creator,
                warnings,
            }
        })
        .collect()
}

/// `f(t) = γ(t) + λ(t) ν̃(t)` per sample.
pub fn build_envelope(
    branch: &CreatorBranch,
    t: &[f64],
    centers: &[Vec2],
    radius: &[f64],
) -> Result<EnvelopeBranch, EnvelopeError> {
    let n = branch.creator.len();
    if t.len() != n || centers.len() != n || radius.len() != n {
        return Err(EnvelopeError::LengthMismatch);
    }
    let points = (0..n)
        .map(|k| centers[k] + radius[k] * branch.creator[k])
        .collect();
    Ok(EnvelopeBranch {
        label: branch.label,
        t: t.to_vec(),
        creator: branch.creator.clone(),
        points,
        warnings: branch.warnings.clone(),
    })
}

/// Residuals of the envelope conditions over a sampled branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residuals {
    /// max |f'·(f - γ)|, f' by finite differences of the samples.
    pub tangency: f64,
    /// Sample index where the tangency residual peaks.
    pub tangency_index: usize,
    /// max | |f - γ| - λ |.
    pub radius: f64,
    /// (1 + max |f'|)(1 + max λ)
    pub scale: f64,
    pub pass: bool,
}

impl Residuals {
    pub fn tangency_tolerance(&self) -> f64 {
        TOL_TANGENCY * self.scale
    }
}

/// Check both envelope conditions on a sampled branch.
pub fn verify_envelope(branch: &EnvelopeBranch, centers: &[Vec2], radius: &[f64]) -> Residuals {
    let n = branch.points.len();
    assert!(
        centers.len() == n && radius.len() == n,
        "branch and family lengths differ"
    );
    let velocity = finite_difference(&branch.t, &branch.points);
    let mut tangency = 0.0;
    let mut tangency_index = 0;
    let mut radial = 0.0f64;
    for k in 0..n {
        let offset = branch.points[k] - centers[k];
        let r1 = velocity[k].dot(offset).abs();
        if r1 > tangency {
            tangency = r1;
            tangency_index = k;
        }
        radial = radial.max((offset.norm() - radius[k]).abs());
    }
    let max_speed = velocity.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let max_radius = radius.iter().copied().fold(0.0, f64::max);
    let scale = (1.0 + max_speed) * (1.0 + max_radius);
    let pass = tangency <= TOL_TANGENCY * scale && radial <= TOL_RADIUS * (1.0 + max_radius);
    Residuals {
        tangency,
        tangency_index,
        radius: radial,
        scale,
        pass,
    }
}

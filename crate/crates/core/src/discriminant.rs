//! The discriminant set `F = ∂F/∂t = 0` for `F = |p - γ(t)|² - λ(t)²`,
//! its decomposition into envelopes and singular circles, and limits of
//! intersections of nearby circles.

use rayon::prelude::*;
use thiserror::Error;

use crate::analysis::Analysis;
use crate::creativity::{Classification, CLAMP_BAND};
use crate::envelope::EnvelopeBranch;
use crate::family::{CircleFamily, FamilyError, FamilySample};
use crate::frontal::{FrontalData, PointFrame};
use crate::geom::Vec2;

/// Relative tolerance for tangency of two circles.
pub const TANGENT_REL: f64 = 1e-12;
/// Slice points and envelope points closer than this are matched.
pub const MATCH_TOL: f64 = 1e-6;
/// Default ε sequence for the nearby-circle limit.
pub const DEFAULT_EPSILONS: [f64; 8] = [1e-2, 1e-3, 1e-4, 1e-5, -1e-2, -1e-3, -1e-4, -1e-5];
/// Minimum fitted convergence order.
pub const MIN_ORDER: f64 = 0.9;
/// Final-distance tolerance, relative to `1 + |f(t0)|`.
pub const LIMIT_TOL: f64 = 1e-4;
/// Distances below this (relative to `1 + |f(t0)| + λ(t0)`) are roundoff.
pub const ROUNDOFF_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Intersection {
    Empty,
    Tangent(Vec2),
    /// Left point first, seen from the first center towards the second.
    Pair(Vec2, Vec2),
}

impl Intersection {
    pub fn points(&self) -> Vec<Vec2> {
        match *self {
            Intersection::Empty => vec![],
            Intersection::Tangent(p) => vec![p],
            Intersection::Pair(p, q) => vec![p, q],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum IntersectError {
    #[error("circle radius must be positive, got {0}")]
    NonPositiveRadius(f64),
    #[error("circles coincide; they meet in infinitely many points")]
    Coincident,
}

/// Intersection of two circles by the radical-line construction.
pub fn circle_circle_intersect(
    c1: Vec2,
    r1: f64,
    c2: Vec2,
    r2: f64,
) -> Result<Intersection, IntersectError> {
    for r in [r1, r2] {
        if !(r > 0.0) {
            return Err(IntersectError::NonPositiveRadius(r));
        }
    }
    let delta = c2 - c1;
    let d = delta.norm();
    let scale = 1.0 + r1.max(r2) + d;
    let tol = TANGENT_REL * scale;
    if d <= tol {
        return if (r1 - r2).abs() <= tol {
            Err(IntersectError::Coincident)
        } else {
            Ok(Intersection::Empty)
        };
    }
    let e = delta / d;
    // signed distance from c1 to the radical line
    let a = (d * d + (r1 - r2) * (r1 + r2)) / (2.0 * d);
    let foot = c1 + a * e;
    if (d - (r1 + r2)).abs() <= tol || (d - (r1 - r2).abs()).abs() <= tol {
        return Ok(Intersection::Tangent(foot));
    }
    let h2 = (r1 - a) * (r1 + a);
    if h2 < 0.0 {
        return Ok(Intersection::Empty);
    }
    let h = h2.sqrt() * e.rot90();
    Ok(Intersection::Pair(foot + h, foot - h))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SliceKind {
    Empty,
    Tangent(Vec2),
    /// `γ + λ(-cμ + sν)` first, `γ + λ(-cμ - sν)` second.
    Pair(Vec2, Vec2),
    FullCircle {
        center: Vec2,
        radius: f64,
    },
}

impl SliceKind {
    pub fn name(&self) -> &'static str {
        match self {
            SliceKind::Empty => "Empty",
            SliceKind::Tangent(_) => "Tangent",
            SliceKind::Pair(..) => "Pair",
            SliceKind::FullCircle { .. } => "FullCircle",
        }
    }

    /// Isolated points of the slice (none for `Empty` and `FullCircle`).
    pub fn points(&self) -> Vec<Vec2> {
        match *self {
            SliceKind::Tangent(p) => vec![p],
            SliceKind::Pair(p, q) => vec![p, q],
            _ => vec![],
        }
    }
}

/// Solutions of `F = ∂F/∂t = 0` at one parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscriminantSlice {
    pub t: f64,
    pub kind: SliceKind,
}

/// Slice from pointwise data, reducing `∂F/∂t = 0` to `β (u·μ) = -λ'`
/// for `p = γ + λ u`.
pub fn slice_from_frame(
    t: f64,
    center: Vec2,
    radius: f64,
    radius_rate: f64,
    frame: &PointFrame,
    eps_beta: f64,
) -> DiscriminantSlice {
    let kind = if frame.beta.abs() <= eps_beta {
        if radius_rate.abs() <= eps_beta {
            SliceKind::FullCircle { center, radius }
        } else {
            SliceKind::Empty
        }
    } else {
        let c = radius_rate / frame.beta;
        if (c.abs() - 1.0).abs() <= CLAMP_BAND {
            SliceKind::Tangent(center - radius * c.signum() * frame.tangent)
        } else if c.abs() > 1.0 {
            SliceKind::Empty
        } else {
            let s = (1.0 - c * c).sqrt();
            let base = center - radius * c * frame.tangent;
            let side = radius * s * frame.normal;
            SliceKind::Pair(base + side, base - side)
        }
    };
    DiscriminantSlice { t, kind }
}

/// Slice at an arbitrary parameter of the family.
pub fn discriminant_slice(
    sample: &FamilySample,
    frames: &FrontalData,
    eps_beta: f64,
) -> DiscriminantSlice {
    let frame = frames.frame_at(sample);
    slice_from_frame(
        sample.t,
        sample.center,
        sample.radius,
        sample.radius_rate,
        &frame,
        eps_beta,
    )
}

/// Slice at grid sample `k`.
pub fn grid_slice(analysis: &Analysis, k: usize) -> DiscriminantSlice {
    let f = &analysis.frames;
    let s = &analysis.samples[k];
    let frame = PointFrame {
        normal: f.normal[k],
        tangent: f.tangent[k],
        beta: f.beta[k],
        singular: f.singular[k],
    };
    slice_from_frame(
        s.t,
        s.center,
        s.radius,
        s.radius_rate,
        &frame,
        analysis.report.eps_beta,
    )
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiscriminantError {
    #[error("family is not creative (identity fails at t = {witness_t}); the decomposition does not apply")]
    NotCreative { witness_t: f64 },
    #[error(transparent)]
    Family(#[from] FamilyError),
}

/// A slice point with no envelope point within [`MATCH_TOL`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unmatched {
    pub index: usize,
    pub t: f64,
    pub point: Vec2,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscriminantSet {
    pub slices: Vec<DiscriminantSlice>,
    /// Grid indices with a full-circle slice.
    pub circles: Vec<usize>,
    /// Full circles at samples not flagged singular.
    pub unattributed_circles: Vec<usize>,
    pub unmatched: Vec<Unmatched>,
    /// Largest distance from an envelope sample to its slice.
    pub max_envelope_gap: f64,
}

impl DiscriminantSet {
    /// Slices decompose into envelope points plus circles at singular samples.
    pub fn is_consistent(&self) -> bool {
        self.unmatched.is_empty()
            && self.unattributed_circles.is_empty()
            && self.max_envelope_gap <= MATCH_TOL
    }

    pub fn to_text(&self) -> String {
        let count = |name: &str| self.slices.iter().filter(|s| s.kind.name() == name).count();
        let mut out = format!(
            "slices: {} (pair {}, tangent {}, empty {}, full circle {})\n",
            self.slices.len(),
            count("Pair"),
            count("Tangent"),
            count("Empty"),
            count("FullCircle")
        );
        for &k in &self.circles {
            out.push_str(&format!(
                "circle at t = {} (sample {k})\n",
                self.slices[k].t
            ));
        }
        out.push_str(&format!(
            "unmatched points: {}, unattributed circles: {}, max envelope gap: {:.3e}\n",
            self.unmatched.len(),
            self.unattributed_circles.len(),
            self.max_envelope_gap
        ));
        out
    }
}

/// All grid slices, matched against the envelope branches.
pub fn discriminant_set(
    analysis: &Analysis,
    branches: &[EnvelopeBranch],
) -> Result<DiscriminantSet, DiscriminantError> {
    if let Classification::NotCreative { witness_t, .. } = analysis.report.classification {
        return Err(DiscriminantError::NotCreative { witness_t });
    }
    let n = analysis.samples.len();
    let slices: Vec<DiscriminantSlice> = (0..n)
        .into_par_iter()
        .map(|k| grid_slice(analysis, k))
        .collect();

    let mut circles = Vec::new();
    let mut unattributed_circles = Vec::new();
    let mut unmatched = Vec::new();
    let mut max_envelope_gap = 0.0f64;
    for (k, slice) in slices.iter().enumerate() {
        if let SliceKind::FullCircle { center, radius } = slice.kind {
            circles.push(k);
            if !analysis.frames.singular[k] {
                unattributed_circles.push(k);
            }
            for b in branches {
                max_envelope_gap =
                    max_envelope_gap.max(((b.points[k] - center).norm() - radius).abs());
            }
            continue;
        }
        let pts = slice.kind.points();
        for p in &pts {
            let distance = branches
                .iter()
                .map(|b| b.points[k].distance(*p))
                .fold(f64::INFINITY, f64::min);
            if distance > MATCH_TOL {
                unmatched.push(Unmatched {
                    index: k,
                    t: slice.t,
                    point: *p,
                    distance,
                });
            }
        }
        for b in branches {
            let gap = pts
                .iter()
                .map(|p| p.distance(b.points[k]))
                .fold(f64::INFINITY, f64::min);
            max_envelope_gap = max_envelope_gap.max(gap);
        }
    }
    Ok(DiscriminantSet {
        slices,
        circles,
        unattributed_circles,
        unmatched,
        max_envelope_gap,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum E1Step {
    Points(Intersection),
    Coincident,
}

/// One tracked sequence of intersection points as |ε| shrinks, ε > 0
/// first, then ε < 0.
#[derive(Debug, Clone, PartialEq)]
pub struct E1Branch {
    /// (ε, point), |ε| decreasing within each sign.
    pub points: Vec<(f64, Vec2)>,
    /// Richardson extrapolation of the last two points to ε = 0.
    pub limit: Vec2,
    /// Nearest slice point at `t0`.
    pub target: Option<Vec2>,
    pub distances: Vec<f64>,
    /// Least-squares slope of log distance against log |ε|.
    pub order: Option<f64>,
    pub final_distance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct E1Report {
    pub t0: f64,
    pub slice: DiscriminantSlice,
    pub steps: Vec<(f64, E1Step)>,
    pub branches: Vec<E1Branch>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum E1Status {
    /// Every tracked branch converges to a slice point.
    Converged,
    /// Some tracked branch fails the order or distance check.
    Failed,
    /// Nearby circles coincide.
    Coincident,
    /// Nearby circles do not meet.
    Empty,
}

impl E1Report {
    pub fn status(&self) -> E1Status {
        if self.steps.iter().any(|(_, s)| *s == E1Step::Coincident) {
            E1Status::Coincident
        } else if self.branches.is_empty() {
            E1Status::Empty
        } else if self.branches.iter().all(|b| b.pass) {
            E1Status::Converged
        } else {
            E1Status::Failed
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "t0 = {}, slice {}, status {:?}\n",
            self.t0,
            self.slice.kind.name(),
            self.status()
        );
        for (eps, step) in &self.steps {
            let desc = match step {
                E1Step::Coincident => "coincident".to_string(),
                E1Step::Points(i) => {
                    let pts: Vec<String> = i.points().iter().map(|p| p.to_string()).collect();
                    if pts.is_empty() {
                        "empty".into()
                    } else {
                        pts.join(" ")
                    }
                }
            };
            out.push_str(&format!("eps = {eps:+e}: {desc}\n"));
        }
        for (j, b) in self.branches.iter().enumerate() {
            let target = b
                .target
                .map(|p| p.to_string())
                .unwrap_or_else(|| "-".into());
            let order = b
                .order
                .map(|o| format!("{o:.3}"))
                .unwrap_or_else(|| "-".into());
            out.push_str(&format!(
                "branch {j}: extrapolated limit {}, target {target}, final distance {:.3e}, order {order}, {}\n",
                b.limit,
                b.final_distance,
                if b.pass { "pass" } else { "FAIL" }
            ));
        }
        out
    }
}

/// Intersections of `C(t0)` with `C(t0 + ε)` for each ε, tracked by
/// nearest-neighbour continuation as |ε| shrinks on each side, joined
/// across the two signs, and compared with the slice at `t0`.
pub fn e1_limit<F: CircleFamily + ?Sized>(
    family: &F,
    frames: &FrontalData,
    t0: f64,
    epsilons: &[f64],
    eps_beta: f64,
) -> Result<E1Report, FamilyError> {
    let interval = family.interval();
    for t in std::iter::once(t0).chain(epsilons.iter().map(|e| t0 + e)) {
        if !interval.contains(t) {
            return Err(FamilyError::OutOfInterval {
                t,
                a: interval.a,
                b: interval.b,
            });
        }
    }
    let base = family.sample(t0)?;
    let slice = discriminant_slice(&base, frames, eps_beta);
    let targets = slice.kind.points();

    let mut steps = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        let other = family.sample(t0 + eps)?;
        let step =
            match circle_circle_intersect(base.center, base.radius, other.center, other.radius) {
                Ok(i) => E1Step::Points(i),
                Err(IntersectError::Coincident) => E1Step::Coincident,
                Err(e @ IntersectError::NonPositiveRadius(_)) => {
                    unreachable!("family radii are validated: {e}")
                }
            };
        steps.push((eps, step, other.center));
    }

    let f_norm = targets.iter().map(|p| p.norm()).fold(0.0, f64::max);
    let floor = ROUNDOFF_FLOOR * (1.0 + f_norm + base.radius);
    let mut sides = [1.0, -1.0].map(|sign| {
        let mut side: Vec<&(f64, E1Step, Vec2)> = steps
            .iter()
            .filter(|(e, _, _)| e.signum() == sign)
            .collect();
        side.sort_by(|a, b| b.0.abs().total_cmp(&a.0.abs()));
        track_points(&side, base.center)
    });
    let [plus, minus] = &mut sides;
    let branches = join_sides(std::mem::take(plus), std::mem::take(minus))
        .into_iter()
        .map(|track| score_branch(track, &targets, f_norm, floor))
        .collect();
    Ok(E1Report {
        t0,
        slice,
        steps: steps.into_iter().map(|(e, s, _)| (e, s)).collect(),
        branches,
    })
}

fn track_points(steps: &[&(f64, E1Step, Vec2)], c0: Vec2) -> Vec<Vec<(f64, Vec2)>> {
    let mut tracks: Vec<Vec<(f64, Vec2)>> = Vec::new();
    for &&(eps, step, c1) in steps {
        let pts = match step {
            E1Step::Points(i) => i.points(),
            E1Step::Coincident => continue,
        };
        if tracks.is_empty() {
            tracks = pts.iter().map(|p| vec![(eps, *p)]).collect();
            continue;
        }
        let last: Vec<Vec2> = tracks.iter().map(|t| t.last().unwrap().1).collect();
        match (last.len(), pts.len()) {
            (_, 0) => {}
            (2, 2) => {
                let straight = last[0].distance(pts[0]) + last[1].distance(pts[1]);
                let crossed = last[0].distance(pts[1]) + last[1].distance(pts[0]);
                let swap = if (straight - crossed).abs() <= 1e-15 * (1.0 + straight) {
                    // tie: keep each track on its side of the center line
                    let axis = c1 - c0;
                    axis.cross(last[0] - c0).signum() != axis.cross(pts[0] - c0).signum()
                } else {
                    crossed < straight
                };
                let (p0, p1) = if swap {
                    (pts[1], pts[0])
                } else {
                    (pts[0], pts[1])
                };
                tracks[0].push((eps, p0));
                tracks[1].push((eps, p1));
            }
            (_, _) => {
                let mut used = vec![false; pts.len()];
                for (j, track) in tracks.iter_mut().enumerate() {
                    let k = (0..pts.len())
                        .min_by(|&a, &b| {
                            last[j]
                                .distance(pts[a])
                                .total_cmp(&last[j].distance(pts[b]))
                        })
                        .unwrap();
                    used[k] = true;
                    track.push((eps, pts[k]));
                }
                for (k, p) in pts.iter().enumerate() {
                    if !used[k] {
                        tracks.push(vec![(eps, *p)]);
                    }
                }
            }
        }
    }
    tracks
}

// Pair each ε > 0 track with the ε < 0 track ending nearest to it; both
// approach the same limit point.
fn join_sides(plus: Vec<Vec<(f64, Vec2)>>, minus: Vec<Vec<(f64, Vec2)>>) -> Vec<Vec<(f64, Vec2)>> {
    let mut minus: Vec<Option<Vec<(f64, Vec2)>>> = minus.into_iter().map(Some).collect();
    let mut out = Vec::new();
    for mut track in plus {
        let end = track.last().unwrap().1;
        let nearest = (0..minus.len())
            .filter(|&j| minus[j].is_some())
            .min_by(|&a, &b| {
                let da = minus[a].as_ref().unwrap().last().unwrap().1.distance(end);
                let db = minus[b].as_ref().unwrap().last().unwrap().1.distance(end);
                da.total_cmp(&db)
            });
        if let Some(j) = nearest {
            track.extend(minus[j].take().unwrap());
        }
        out.push(track);
    }
    out.extend(minus.into_iter().flatten());
    out
}

// Richardson extrapolation to ε = 0 from the two smallest |ε| on each
// side, averaged over the sides present.
fn extrapolate(points: &[(f64, Vec2)]) -> Vec2 {
    let mut sum = Vec2::ZERO;
    let mut count = 0.0;
    for sign in [1.0, -1.0] {
        let side: Vec<&(f64, Vec2)> = points.iter().filter(|(e, _)| e.signum() == sign).collect();
        let estimate = match side.as_slice() {
            [.., (e1, p1), (e2, p2)] if e1 != e2 => (*e1 * *p2 - *e2 * *p1) / (e1 - e2),
            [.., (_, p)] => *p,
            [] => continue,
        };
        sum += estimate;
        count += 1.0;
    }
    sum / count
}

fn score_branch(points: Vec<(f64, Vec2)>, targets: &[Vec2], f_norm: f64, floor: f64) -> E1Branch {
    let limit = extrapolate(&points);
    let target = targets
        .iter()
        .copied()
        .min_by(|a, b| a.distance(limit).total_cmp(&b.distance(limit)));
    let Some(target) = target else {
        return E1Branch {
            points,
            limit,
            target: None,
            distances: vec![],
            order: None,
            final_distance: f64::INFINITY,
            pass: false,
        };
    };
    let distances: Vec<f64> = points.iter().map(|(_, p)| p.distance(target)).collect();
    let smallest = points
        .iter()
        .map(|(e, _)| e.abs())
        .fold(f64::INFINITY, f64::min);
    let final_distance = points
        .iter()
        .zip(&distances)
        .filter(|((e, _), _)| e.abs() == smallest)
        .map(|(_, d)| *d)
        .fold(0.0, f64::max);
    let fit: Vec<(f64, f64)> = points
        .iter()
        .zip(&distances)
        .filter(|(_, &d)| d > floor)
        .map(|((e, _), &d)| (e.abs().ln(), d.ln()))
        .collect();
    let order = (fit.len() >= 2).then(|| slope(&fit));
    let at_floor = fit.len() < 2
        && distances
            .iter()
            .all(|&d| d <= floor.max(LIMIT_TOL * (1.0 + f_norm)));
    let pass = final_distance <= LIMIT_TOL * (1.0 + f_norm)
        && (at_floor || order.is_some_and(|o| o >= MIN_ORDER));
    E1Branch {
        points,
        limit,
        target: Some(target),
        distances,
        order,
        final_distance,
        pass,
    }
}

fn slope(xy: &[(f64, f64)]) -> f64 {
    let n = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / n;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::CircleFamilySpec;

    fn run(
        gamma: (&str, &str),
        lambda: &str,
        nu: Option<(&str, &str)>,
        iv: (f64, f64),
    ) -> (CircleFamilySpec, Analysis) {
        let spec = CircleFamilySpec::from_sources(gamma, lambda, nu, iv, 2001).unwrap();
        let a = Analysis::run(&spec, &Default::default()).unwrap();
        (spec, a)
    }

    #[test]
    fn two_circle_cases() {
        let o = Vec2::ZERO;
        match circle_circle_intersect(o, 1.0, Vec2::new(1.0, 0.0), 1.0).unwrap() {
            Intersection::Pair(p, q) => {
                assert!((p - Vec2::new(0.5, 0.8660254)).norm() < 1e-7);
                assert!((q - Vec2::new(0.5, -0.8660254)).norm() < 1e-7);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(
            circle_circle_intersect(o, 1.0, Vec2::new(3.0, 0.0), 1.0),
            Ok(Intersection::Empty)
        );
        assert_eq!(
            circle_circle_intersect(o, 1.0, Vec2::new(2.0, 0.0), 1.0),
            Ok(Intersection::Tangent(Vec2::new(1.0, 0.0)))
        );
        assert_eq!(
            circle_circle_intersect(o, 2.0, Vec2::new(1.0, 0.0), 1.0),
            Ok(Intersection::Tangent(Vec2::new(2.0, 0.0)))
        );
        assert_eq!(
            circle_circle_intersect(o, 1.0, o, 1.0),
            Err(IntersectError::Coincident)
        );
        assert_eq!(
            circle_circle_intersect(o, 1.0, o, 2.0),
            Ok(Intersection::Empty)
        );
        assert_eq!(
            circle_circle_intersect(o, 3.0, Vec2::new(0.5, 0.0), 1.0),
            Ok(Intersection::Empty)
        );
        assert!(circle_circle_intersect(o, 0.0, o, 1.0).is_err());
    }

    #[test]
    fn singular_slice_is_unit_circle() {
        let (spec, a) = run(("t^3", "t^6"), "1", None, (-1.5, 1.5));
        let s = discriminant_slice(&spec.sample(0.0).unwrap(), &a.frames, a.report.eps_beta);
        assert_eq!(
            s.kind,
            SliceKind::FullCircle {
                center: Vec2::ZERO,
                radius: 1.0
            }
        );
    }

    #[test]
    fn regular_slices() {
        let (spec, a) = run(("t", "0"), "1", None, (-2.0, 2.0));
        let s = discriminant_slice(&spec.sample(0.0).unwrap(), &a.frames, a.report.eps_beta);
        let pts = s.kind.points();
        assert_eq!(pts.len(), 2);
        assert!(pts.contains(&Vec2::new(0.0, 1.0)) && pts.contains(&Vec2::new(0.0, -1.0)));

        let (spec, a) = run(("t", "0"), "t^2", None, (0.0, 4.0));
        let s = discriminant_slice(&spec.sample(0.6).unwrap(), &a.frames, a.report.eps_beta);
        assert_eq!(s.kind, SliceKind::Empty);
    }

    #[test]
    fn decomposition_of_cusp_family() {
        let (_, a) = run(("t^3", "t^6"), "1", None, (-1.5, 1.5));
        let set = discriminant_set(&a, &a.envelopes().unwrap()).unwrap();
        assert_eq!(set.circles, vec![1000]);
        assert!(set.is_consistent(), "{}", set.to_text());
    }

    #[test]
    fn decomposition_of_lines_has_no_circles() {
        let (_, a) = run(("t", "0"), "1", None, (-2.0, 2.0));
        let set = discriminant_set(&a, &a.envelopes().unwrap()).unwrap();
        assert!(set.circles.is_empty());
        assert!(set.is_consistent());
    }

    #[test]
    fn unique_family_slices_are_tangent_at_origin() {
        let (_, a) = run(("0", "1+t"), "1+t", Some(("1", "0")), (0.0, 4.0));
        let set = discriminant_set(&a, &a.envelopes().unwrap()).unwrap();
        for s in &set.slices {
            match s.kind {
                SliceKind::Tangent(p) => assert!(p.norm() < 1e-12),
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn refuses_non_creative() {
        let (_, a) = run(("t", "0"), "t^2", None, (0.0, 4.0));
        assert!(matches!(
            discriminant_set(&a, &[]),
            Err(DiscriminantError::NotCreative { .. })
        ));
    }

    #[test]
    fn nearby_unit_circles() {
        let (spec, a) = run(("t", "0"), "1", None, (-2.0, 2.0));
        let r = e1_limit(&spec, &a.frames, 0.0, &[1e-3], a.report.eps_beta).unwrap();
        match r.steps[0].1 {
            E1Step::Points(Intersection::Pair(p, q)) => {
                assert!((p - Vec2::new(5e-4, 0.9999999)).norm() < 1e-7);
                assert!((q - Vec2::new(5e-4, -0.9999999)).norm() < 1e-7);
            }
            other => panic!("{other:?}"),
        }
        let r = e1_limit(&spec, &a.frames, 0.0, &DEFAULT_EPSILONS, a.report.eps_beta).unwrap();
        assert_eq!(r.status(), E1Status::Converged, "{}", r.to_text());
        assert_eq!(r.branches.len(), 2);
        assert!(r.branches.iter().all(|b| b.points.len() == 8));
        for b in &r.branches {
            assert!((b.order.unwrap() - 1.0).abs() < 0.05);
        }
    }

    #[test]
    fn cusp_limits_reach_closed_form() {
        let (spec, a) = run(("t^3", "t^2"), "1", None, (-2.0, 2.0));
        let r = e1_limit(&spec, &a.frames, 1.0, &DEFAULT_EPSILONS, a.report.eps_beta).unwrap();
        assert_eq!(r.status(), E1Status::Converged, "{}", r.to_text());
        let expected = [
            Vec2::new(1.5547002, 0.1679497),
            Vec2::new(0.4452998, 1.8320503),
        ];
        for b in &r.branches {
            assert_eq!(b.points.last().unwrap().0.abs(), 1e-5);
            assert!(
                expected.iter().any(|e| (b.limit - *e).norm() < 1e-6),
                "{}",
                r.to_text()
            );
            assert!(b.final_distance < 1e-4);
        }
    }

    #[test]
    fn unique_family_converges_at_roundoff() {
        let (spec, a) = run(("0", "1+t"), "1+t", Some(("1", "0")), (0.0, 4.0));
        let r = e1_limit(&spec, &a.frames, 2.0, &DEFAULT_EPSILONS, a.report.eps_beta).unwrap();
        assert_eq!(r.status(), E1Status::Converged, "{}", r.to_text());
    }

    #[test]
    fn concentric_family_is_coincident() {
        let (spec, a) = run(("0", "0"), "1", Some(("1", "0")), (-1.0, 1.0));
        let r = e1_limit(&spec, &a.frames, 0.0, &DEFAULT_EPSILONS, a.report.eps_beta).unwrap();
        assert_eq!(r.status(), E1Status::Coincident);
    }

    #[test]
    fn epsilon_outside_interval_is_rejected() {
        let (spec, a) = run(("t", "0"), "1", None, (-2.0, 2.0));
        assert!(e1_limit(
            &spec,
            &a.frames,
            1.995,
            &DEFAULT_EPSILONS,
            a.report.eps_beta
        )
        .is_err());
    }
}

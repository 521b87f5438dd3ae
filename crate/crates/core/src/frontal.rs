//! Gauss map, moving frame and curvature pair along the center curve.
//!
//! The frame is `{μ, ν}` with `μ = J(ν)`, `J(x, y) = (-y, x)`. The
//! curvature pair is `ℓ = ν'·μ`, `β = γ'·μ`; β vanishes exactly at the
//! singular points of γ.

use thiserror::Error;

use crate::family::FamilySample;
use crate::geom::{finite_difference, Vec2};

/// Relative singularity threshold: a sample is singular when
/// `|γ'| <= SING_REL * (1 + max |γ'|)`.
pub const SING_REL: f64 = 1e-8;
/// Consecutive tracked normals with a smaller dot product are reported.
pub const CONTINUITY_DOT: f64 = 0.9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FrontalError {
    #[error("γ is singular at every sample (constant curve); supply ν explicitly")]
    AllSingular,
    #[error("Gauss map supplied at some samples but not others")]
    PartialGauss,
    #[error("empty sample grid")]
    Empty,
}

/// Where the Gauss map came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GaussSource {
    Supplied,
    Tracked,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FrameWarning {
    /// Tracked normals at `index` and `index + 1` turn sharply.
    Discontinuity { index: usize, t: f64, dot: f64 },
}

/// Frame quantities at a single parameter value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointFrame {
    pub normal: Vec2,
    pub tangent: Vec2,
    pub beta: f64,
    pub singular: bool,
}

/// Per-sample frontal data over the analysis grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FrontalData {
    pub t: Vec<f64>,
    pub center: Vec<Vec2>,
    pub velocity: Vec<Vec2>,
    /// ν
    pub normal: Vec<Vec2>,
    /// μ = J(ν)
    pub tangent: Vec<Vec2>,
    pub ell: Vec<f64>,
    pub beta: Vec<f64>,
    pub singular: Vec<bool>,
    pub eps_sing: f64,
    pub source: GaussSource,
    pub warnings: Vec<FrameWarning>,
}

/// `J(ν)` for every sample.
pub fn moving_frame(normals: &[Vec2]) -> Vec<Vec2> {
    normals.iter().map(|n| n.rot90()).collect()
}

/// Scale-aware singularity cutoff for a set of velocity samples.
pub fn singularity_threshold(velocity: &[Vec2]) -> f64 {
    let max = velocity.iter().map(|v| v.norm()).fold(0.0, f64::max);
    SING_REL * (1.0 + max)
}

/// Continuity-tracked Gauss map from γ' alone.
///
/// The first regular sample gets `ν = -J(γ'/|γ'|)`; later regular samples
/// take whichever of `±J(γ'/|γ'|)` is closer to the previous normal. Runs
/// of singular samples between two regular ones are filled by normalized
/// linear interpolation; leading and trailing runs copy the nearest
/// regular normal.
pub fn auto_gauss(
    t: &[f64],
    velocity: &[Vec2],
    eps_sing: f64,
) -> Result<(Vec<Vec2>, Vec<FrameWarning>), FrontalError> {
    let n = velocity.len();
    if n == 0 {
        return Err(FrontalError::Empty);
    }
    let regular: Vec<bool> = velocity.iter().map(|v| v.norm() > eps_sing).collect();
    let first = regular
        .iter()
        .position(|&r| r)
        .ok_or(FrontalError::AllSingular)?;

    let candidate = |k: usize| -> Vec2 {
        let u = velocity[k] / velocity[k].norm();
        -u.rot90()
    };

    let mut normals = vec![Vec2::ZERO; n];
    normals[first] = candidate(first);
    let mut prev = normals[first];
    let mut last_regular = first;
    for k in first + 1..n {
        if !regular[k] {
            normals[k] = prev;
            continue;
        }
        let mut c = candidate(k);
        if c.dot(prev) < 0.0 {
            c = -c;
        }
        normals[k] = c;
        if k > last_regular + 1 {
            let (t0, t1) = (t[last_regular], t[k]);
            let (n0, n1) = (normals[last_regular], c);
            for (j, slot) in normals
                .iter_mut()
                .enumerate()
                .take(k)
                .skip(last_regular + 1)
            {
                let s = (t[j] - t0) / (t1 - t0);
                let blend = n0.lerp(n1, s);
                *slot = if blend.norm() > 1e-6 {
                    blend / blend.norm()
                } else {
                    n0
                };
            }
        }
        prev = c;
        last_regular = k;
    }
    for k in 0..first {
        normals[k] = normals[first];
    }

    let warnings = normals
        .windows(2)
        .enumerate()
        .filter_map(|(k, w)| {
            let dot = w[0].dot(w[1]);
            (dot < CONTINUITY_DOT).then_some(FrameWarning::Discontinuity {
                index: k,
                t: t[k],
                dot,
            })
        })
        .collect();
    Ok((normals, warnings))
}

/// `(ℓ, β)` per sample. `normal_rate` is `dν/dt` when known symbolically;
/// otherwise it is estimated by finite differences of the normals.
pub fn curvature_pair(
    t: &[f64],
    velocity: &[Vec2],
    normals: &[Vec2],
    tangents: &[Vec2],
    normal_rate: Option<&[Vec2]>,
) -> (Vec<f64>, Vec<f64>) {
    let estimated;
    let rate = match normal_rate {
        Some(r) => r,
        None => {
            estimated = finite_difference(t, normals);
            &estimated
        }
    };
    let ell = rate.iter().zip(tangents).map(|(r, m)| r.dot(*m)).collect();
    let beta = velocity
        .iter()
        .zip(tangents)
        .map(|(v, m)| v.dot(*m))
        .collect();
    (ell, beta)
}

impl FrontalData {
    /// Build the frame from sampled family data. A supplied Gauss map is
    /// used as given; otherwise it is tracked from γ'.
    pub fn build(samples: &[FamilySample]) -> Result<Self, FrontalError> {
        if samples.is_empty() {
            return Err(FrontalError::Empty);
        }
        let t: Vec<f64> = samples.iter().map(|s| s.t).collect();
        let center: Vec<Vec2> = samples.iter().map(|s| s.center).collect();
        let velocity: Vec<Vec2> = samples.iter().map(|s| s.velocity).collect();
        let eps_sing = singularity_threshold(&velocity);
        let supplied = samples.iter().filter(|s| s.gauss.is_some()).count();

        let (normal, rate, source, warnings) = if supplied == samples.len() {
            let normal: Vec<Vec2> = samples.iter().map(|s| s.gauss.unwrap().normal).collect();
            let rate: Vec<Vec2> = samples.iter().map(|s| s.gauss.unwrap().rate).collect();
            (normal, Some(rate), GaussSource::Supplied, Vec::new())
        } else if supplied == 0 {
            let (normal, warnings) = auto_gauss(&t, &velocity, eps_sing)?;
            (normal, None, GaussSource::Tracked, warnings)
        } else {
            return Err(FrontalError::PartialGauss);
        };

        let tangent = moving_frame(&normal);
        let (ell, beta) = curvature_pair(&t, &velocity, &normal, &tangent, rate.as_deref());
        let singular = velocity.iter().map(|v| v.norm() <= eps_sing).collect();
        Ok(FrontalData {
            t,
            center,
            velocity,
            normal,
            tangent,
            ell,
            beta,
            singular,
            eps_sing,
            source,
            warnings,
        })
    }

    /// Build with an explicit constant Gauss map, for curves where every
    /// normal is admissible (γ' ≡ 0).
    pub fn build_with_constant_normal(
        samples: &[FamilySample],
        normal: Vec2,
    ) -> Result<Self, FrontalError> {
        let unit = normal.normalized().ok_or(FrontalError::Empty)?;
        let with: Vec<FamilySample> = samples
            .iter()
            .map(|s| FamilySample {
                gauss: Some(crate::family::GaussSample {
                    normal: unit,
                    rate: Vec2::ZERO,
                }),
                ..*s
            })
            .collect();
        FrontalData::build(&with)
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// Index of the grid sample nearest to `t`.
    pub fn nearest_index(&self, t: f64) -> usize {
        match self.t.binary_search_by(|x| x.total_cmp(&t)) {
            Ok(k) => k,
            Err(0) => 0,
            Err(k) if k >= self.t.len() => self.t.len() - 1,
            Err(k) => {
                if (t - self.t[k - 1]) <= (self.t[k] - t) {
                    k - 1
                } else {
                    k
                }
            }
        }
    }

    /// Frame at an arbitrary parameter, oriented consistently with the
    /// nearest grid sample when the Gauss map is tracked.
    pub fn frame_at(&self, sample: &FamilySample) -> PointFrame {
        let singular = sample.velocity.norm() <= self.eps_sing;
        let normal = match sample.gauss {
            Some(g) => g.normal,
            None => {
                let reference = self.normal[self.nearest_index(sample.t)];
                match sample.velocity.normalized() {
                    Some(u) if !singular => {
                        let c = -u.rot90();
                        if c.dot(reference) < 0.0 {
                            -c
                        } else {
                            c
                        }
                    }
                    _ => reference,
                }
            }
        };
        let tangent = normal.rot90();
        PointFrame {
            normal,
            tangent,
            beta: sample.velocity.dot(tangent),
            singular,
        }
    }

    /// Largest `|γ'·ν|` relative to `1 + |γ'|` over the grid.
    pub fn max_orthogonality_defect(&self) -> f64 {
        self.velocity
            .iter()
            .zip(&self.normal)
            .map(|(v, n)| v.dot(*n).abs() / (1.0 + v.norm()))
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{CircleFamily, CircleFamilySpec};

    fn frames(
        gx: &str,
        gy: &str,
        nu: Option<(&str, &str)>,
        iv: (f64, f64),
        n: usize,
    ) -> FrontalData {
        let spec = CircleFamilySpec::from_sources((gx, gy), "1", nu, iv, n).unwrap();
        FrontalData::build(&spec.sample_grid().unwrap()).unwrap()
    }

    #[test]
    fn line_gets_downward_normal() {
        let f = frames("t", "0", None, (-1.0, 1.0), 11);
        for k in 0..f.len() {
            assert_eq!(f.normal[k], Vec2::new(0.0, -1.0));
            assert_eq!(f.tangent[k], Vec2::new(1.0, 0.0));
            assert_eq!(f.beta[k], 1.0);
            assert!(f.ell[k].abs() < 1e-15);
        }
    }

    #[test]
    fn cusp_normal_follows_closed_form_for_positive_start() {
        let f = frames("t^3", "t^2", None, (0.1, 2.0), 51);
        for k in 0..f.len() {
            let t = f.t[k];
            let expected = Vec2::new(2.0, -3.0 * t) / (4.0 + 9.0 * t * t).sqrt();
            assert!((f.normal[k] - expected).norm() < 1e-14);
        }
    }

    #[test]
    fn tracking_keeps_one_global_sign_through_cusp() {
        let f = frames("t^3", "t^2", None, (-2.0, 2.0), 101);
        assert!(f.singular[50]);
        let sign = {
            let t = f.t[0];
            let e = Vec2::new(2.0, -3.0 * t) / (4.0 + 9.0 * t * t).sqrt();
            f.normal[0].dot(e).signum()
        };
        for k in 0..f.len() {
            let t = f.t[k];
            let e = Vec2::new(2.0, -3.0 * t) / (4.0 + 9.0 * t * t).sqrt() * sign;
            assert!(
                (f.normal[k] - e).norm() < 1e-12,
                "k={k}: {} vs {}",
                f.normal[k],
                e
            );
        }
        assert!(f.warnings.is_empty());
    }

    #[test]
    fn vertical_line_normal_is_horizontal() {
        let f = frames("0", "1 + t", None, (0.0, 4.0), 9);
        for n in &f.normal {
            assert_eq!(*n, Vec2::new(1.0, 0.0));
        }
    }

    #[test]
    fn constant_curve_needs_explicit_normal() {
        let spec = CircleFamilySpec::from_sources(("0", "0"), "1", None, (-1.0, 1.0), 5).unwrap();
        let samples = spec.sample_grid().unwrap();
        assert_eq!(FrontalData::build(&samples), Err(FrontalError::AllSingular));
        let f = FrontalData::build_with_constant_normal(&samples, Vec2::new(1.0, 0.0)).unwrap();
        assert!(f.singular.iter().all(|&s| s));
        assert!(f.beta.iter().all(|&b| b == 0.0));
    }

    #[test]
    fn moving_frame_rotates_normals() {
        let s = 13f64.sqrt();
        let mu = moving_frame(&[
            Vec2::new(0.0, -1.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(2.0 / s, -3.0 / s),
        ]);
        assert_eq!(mu[0], Vec2::new(1.0, 0.0));
        assert_eq!(mu[1], Vec2::new(0.0, 1.0));
        assert!((mu[2] - Vec2::new(0.8320503, 0.5547002)).norm() < 1e-7);
    }

    #[test]
    fn beta_matches_closed_forms() {
        // γ = (t³, t²) with ν = (2, -3t)/√(4+9t²): β = t√(4+9t²)
        let f = frames(
            "t^3",
            "t^2",
            Some(("2/sqrt(4+9*t^2)", "-3*t/sqrt(4+9*t^2)")),
            (0.0, 2.0),
            2,
        );
        let spec = CircleFamilySpec::from_sources(
            ("t^3", "t^2"),
            "1",
            Some(("2/sqrt(4+9*t^2)", "-3*t/sqrt(4+9*t^2)")),
            (0.0, 2.0),
            2,
        )
        .unwrap();
        let p = f.frame_at(&spec.sample(1.0).unwrap());
        assert!((p.beta - 13f64.sqrt()).abs() < 1e-12);

        // γ = (t³, t⁶) with ν = (-2t³, 1)/√(4t⁶+1): β = -3t²(1+4t⁶)/√(4t⁶+1)
        let spec = CircleFamilySpec::from_sources(
            ("t^3", "t^6"),
            "1",
            Some(("-2*t^3/sqrt(4*t^6+1)", "1/sqrt(4*t^6+1)")),
            (-1.5, 1.5),
            3,
        )
        .unwrap();
        let f = FrontalData::build(&spec.sample_grid().unwrap()).unwrap();
        let p = f.frame_at(&spec.sample(1.0).unwrap());
        assert!((p.beta + 15.0 / 5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn symbolic_and_estimated_ell_agree() {
        let nu = Some(("-2*t^3/sqrt(4*t^6+1)", "1/sqrt(4*t^6+1)"));
        let sym = frames("t^3", "t^6", nu, (-1.5, 1.5), 2001);
        let (ell_fd, _) = curvature_pair(&sym.t, &sym.velocity, &sym.normal, &sym.tangent, None);
        for (k, fd) in ell_fd.iter().enumerate().take(sym.len() - 1).skip(1) {
            assert!(
                (sym.ell[k] - fd).abs() <= 1e-5 * (1.0 + sym.ell[k].abs()),
                "k={k}: {} vs {}",
                sym.ell[k],
                ell_fd[k]
            );
        }
    }

    #[test]
    fn beta_magnitude_equals_speed() {
        let f = frames("t^3", "t^2", None, (-2.0, 2.0), 201);
        for k in 0..f.len() {
            assert!((f.beta[k].abs() - f.velocity[k].norm()).abs() <= 1e-9);
        }
        assert!(f.beta[0] >= 0.0);
        assert!(f.max_orthogonality_defect() <= 1e-12);
    }
}

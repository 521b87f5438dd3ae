//! Circle families `C(γ, λ)`: centers along a curve γ with radii λ(t) > 0
//! over an open parameter interval.

use rayon::prelude::*;
use thiserror::Error;

use crate::config::{ConfigError, KeyValues};
use crate::expr::{parse_expr, EvalError, Expr, ParseError};
use crate::geom::Vec2;

/// Tolerance on `|ν| - 1` for a supplied Gauss map.
pub const UNIT_TOL: f64 = 1e-9;
/// Relative tolerance on the frontal condition `γ'·ν = 0`.
pub const ORTH_TOL: f64 = 1e-9;
/// Sample count used when a scenario does not set one.
pub const DEFAULT_SAMPLES: usize = 2001;

/// Keys understood by [`build_family`].
pub const FAMILY_KEYS: &[&str] = &[
    "gamma.x", "gamma.y", "lambda", "nu.x", "nu.y", "interval", "samples",
];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FamilyError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("`{key}`: {source}")]
    Expression { key: String, source: ParseError },
    #[error("`{key}`: {source}")]
    Eval { key: String, source: EvalError },
    #[error("interval must satisfy a < b (got a = {a}, b = {b})")]
    EmptyInterval { a: f64, b: f64 },
    #[error("at least 2 samples required (got {0})")]
    TooFewSamples(usize),
    #[error("radius must be positive: λ({t}) = {value}")]
    NonPositiveRadius { t: f64, value: f64 },
    #[error("Gauss map is not unit length at t = {t}: |ν| = {norm}")]
    NotUnit { t: f64, norm: f64 },
    #[error("Gauss map is not normal to γ at t = {t}: γ'·ν = {dot}")]
    NotOrthogonal { t: f64, dot: f64 },
    #[error("t = {t} lies outside the open interval ({a}, {b})")]
    OutOfInterval { t: f64, a: f64, b: f64 },
}

/// Open parameter interval `(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub a: f64,
    pub b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self, FamilyError> {
        if a.is_finite() && b.is_finite() && a < b {
            Ok(Interval { a, b })
        } else {
            Err(FamilyError::EmptyInterval { a, b })
        }
    }

    pub fn len(&self) -> f64 {
        self.b - self.a
    }

    pub fn contains(&self, t: f64) -> bool {
        self.a < t && t < self.b
    }

    /// Cell midpoints `a + (k + 1/2)(b - a)/n`; endpoints are never sampled.
    pub fn midpoint_grid(&self, n: usize) -> Vec<f64> {
        let width = self.len();
        (0..n)
            .map(|k| self.a + ((k as f64 + 0.5) * width) / n as f64)
            .collect()
    }
}

/// Gauss map value and derivative at one parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussSample {
    pub normal: Vec2,
    pub rate: Vec2,
}

/// Everything the analysis needs from a family at one parameter value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilySample {
    pub t: f64,
    /// γ(t)
    pub center: Vec2,
    /// γ'(t)
    pub velocity: Vec2,
    /// λ(t)
    pub radius: f64,
    /// λ'(t)
    pub radius_rate: f64,
    /// Supplied Gauss map, if any.
    pub gauss: Option<GaussSample>,
}

/// A circle family that can be sampled at any parameter in its interval.
pub trait CircleFamily: Sync {
    fn interval(&self) -> Interval;

    /// Analysis grid, sorted ascending.
    fn grid(&self) -> Vec<f64>;

    fn sample(&self, t: f64) -> Result<FamilySample, FamilyError>;

    /// Sample every grid point (in parallel, order preserved).
    fn sample_grid(&self) -> Result<Vec<FamilySample>, FamilyError> {
        self.grid().par_iter().map(|&t| self.sample(t)).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
struct Component {
    key: &'static str,
    expr: Expr,
    deriv: Expr,
}

impl Component {
    fn new(key: &'static str, expr: Expr) -> Self {
        let deriv = expr.diff();
        Component { key, expr, deriv }
    }

    fn value(&self, t: f64) -> Result<f64, FamilyError> {
        self.expr.eval(t).map_err(|source| FamilyError::Eval {
            key: self.key.into(),
            source,
        })
    }

    fn rate(&self, t: f64) -> Result<f64, FamilyError> {
        self.deriv.eval(t).map_err(|source| FamilyError::Eval {
            key: self.key.into(),
            source,
        })
    }
}

/// A circle family given by closed-form expressions in `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleFamilySpec {
    gamma_x: Component,
    gamma_y: Component,
    lambda: Component,
    nu: Option<(Component, Component)>,
    interval: Interval,
    samples: usize,
}

impl CircleFamilySpec {
    /// Build and validate a family on the midpoint grid of `interval`.
    pub fn new(
        gamma: (Expr, Expr),
        lambda: Expr,
        nu: Option<(Expr, Expr)>,
        interval: Interval,
        samples: usize,
    ) -> Result<Self, FamilyError> {
        if samples < 2 {
            return Err(FamilyError::TooFewSamples(samples));
        }
        let spec = CircleFamilySpec {
            gamma_x: Component::new("gamma.x", gamma.0),
            gamma_y: Component::new("gamma.y", gamma.1),
            lambda: Component::new("lambda", lambda),
            nu: nu.map(|(x, y)| (Component::new("nu.x", x), Component::new("nu.y", y))),
            interval,
            samples,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Parse expressions from source text; convenience for tests and tools.
    pub fn from_sources(
        gamma: (&str, &str),
        lambda: &str,
        nu: Option<(&str, &str)>,
        interval: (f64, f64),
        samples: usize,
    ) -> Result<Self, FamilyError> {
        let p = |key: &str, src: &str| {
            parse_expr(src).map_err(|source| FamilyError::Expression {
                key: key.into(),
                source,
            })
        };
        let nu = match nu {
            Some((x, y)) => Some((p("nu.x", x)?, p("nu.y", y)?)),
            None => None,
        };
        CircleFamilySpec::new(
            (p("gamma.x", gamma.0)?, p("gamma.y", gamma.1)?),
            p("lambda", lambda)?,
            nu,
            Interval::new(interval.0, interval.1)?,
            samples,
        )
    }

    fn validate(&self) -> Result<(), FamilyError> {
        self.sample_grid().map(|_| ())
    }

    pub fn gamma(&self) -> (&Expr, &Expr) {
        (&self.gamma_x.expr, &self.gamma_y.expr)
    }

    pub fn lambda(&self) -> &Expr {
        &self.lambda.expr
    }

    pub fn gauss(&self) -> Option<(&Expr, &Expr)> {
        self.nu.as_ref().map(|(x, y)| (&x.expr, &y.expr))
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    /// Same family re-validated on a different sample count.
    pub fn with_samples(&self, samples: usize) -> Result<Self, FamilyError> {
        CircleFamilySpec::new(
            (self.gamma_x.expr.clone(), self.gamma_y.expr.clone()),
            self.lambda.expr.clone(),
            self.nu
                .as_ref()
                .map(|(x, y)| (x.expr.clone(), y.expr.clone())),
            self.interval,
            samples,
        )
    }

    /// Same family with the supplied Gauss map dropped (frame is then
    /// derived from γ').
    pub fn without_gauss(&self) -> Self {
        CircleFamilySpec {
            nu: None,
            ..self.clone()
        }
    }

    /// Reparametrize by `t -> -t` over the mirrored interval.
    pub fn reversed(&self) -> Result<Self, FamilyError> {
        let neg = Expr::Neg(Box::new(Expr::Var));
        let r = |c: &Component| c.expr.compose(&neg);
        CircleFamilySpec::new(
            (r(&self.gamma_x), r(&self.gamma_y)),
            r(&self.lambda),
            self.nu.as_ref().map(|(x, y)| (r(x), r(y))),
            Interval::new(-self.interval.b, -self.interval.a)?,
            self.samples,
        )
    }
}

impl CircleFamily for CircleFamilySpec {
    fn interval(&self) -> Interval {
        self.interval
    }

    fn grid(&self) -> Vec<f64> {
        self.interval.midpoint_grid(self.samples)
    }

    fn sample(&self, t: f64) -> Result<FamilySample, FamilyError> {
        let center = Vec2::new(self.gamma_x.value(t)?, self.gamma_y.value(t)?);
        let velocity = Vec2::new(self.gamma_x.rate(t)?, self.gamma_y.rate(t)?);
        let radius = self.lambda.value(t)?;
        if radius <= 0.0 {
            return Err(FamilyError::NonPositiveRadius { t, value: radius });
        }
        let radius_rate = self.lambda.rate(t)?;
        let gauss = match &self.nu {
            None => None,
            Some((nx, ny)) => {
                let normal = Vec2::new(nx.value(t)?, ny.value(t)?);
                let norm = normal.norm();
                if (norm - 1.0).abs() > UNIT_TOL {
                    return Err(FamilyError::NotUnit { t, norm });
                }
                let dot = velocity.dot(normal);
                if dot.abs() > ORTH_TOL * (1.0 + velocity.norm()) {
                    return Err(FamilyError::NotOrthogonal { t, dot });
                }
                Some(GaussSample {
                    normal,
                    rate: Vec2::new(nx.rate(t)?, ny.rate(t)?),
                })
            }
        };
        Ok(FamilySample {
            t,
            center,
            velocity,
            radius,
            radius_rate,
            gauss,
        })
    }
}

/// Build a family from `key = value` scenario text.
pub fn build_family(config: &str) -> Result<CircleFamilySpec, FamilyError> {
    let kv = KeyValues::parse(config)?;
    kv.check_keys(FAMILY_KEYS)?;
    family_from_keys(&kv)
}

/// Build a family from already-parsed pairs. Keys outside
/// [`FAMILY_KEYS`] are ignored here; callers decide whether they are errors.
pub fn family_from_keys(kv: &KeyValues) -> Result<CircleFamilySpec, FamilyError> {
    let expr = |key: &str| -> Result<Expr, FamilyError> {
        let entry = kv.require(key)?;
        parse_expr(&entry.value).map_err(|source| FamilyError::Expression {
            key: key.to_string(),
            source,
        })
    };
    let gamma = (expr("gamma.x")?, expr("gamma.y")?);
    let lambda = expr("lambda")?;
    let nu = match (kv.get("nu.x"), kv.get("nu.y")) {
        (None, None) => None,
        _ => Some((expr("nu.x")?, expr("nu.y")?)),
    };
    let interval_entry = kv.require("interval")?;
    let (a, b) = interval_entry.parse_pair()?;
    let interval = Interval::new(a, b)?;
    let samples = match kv.get("samples") {
        Some(e) => e.parse_usize()?,
        None => DEFAULT_SAMPLES,
    };
    CircleFamilySpec::new(gamma, lambda, nu, interval, samples)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builds_cusp_family() {
        let spec = build_family(
            "# cusp\ngamma.x = t^3\ngamma.y = t^2\nlambda = 1\ninterval = -2 2\nsamples = 101\n",
        )
        .unwrap();
        assert_eq!(spec.samples(), 101);
        let grid = spec.grid();
        assert_eq!(grid.len(), 101);
        assert!(grid[0] > -2.0 && grid[100] < 2.0);
        assert_eq!(grid[50], 0.0);
    }

    #[test]
    fn midpoint_grid_excludes_endpoints() {
        let g = Interval::new(0.0, 1.0).unwrap().midpoint_grid(4);
        assert_eq!(g, vec![0.125, 0.375, 0.625, 0.875]);
    }

    #[test]
    fn rejects_nonpositive_radius() {
        let err =
            build_family("gamma.x = t\ngamma.y = 0\nlambda = t\ninterval = -1 1\nsamples = 10")
                .unwrap_err();
        assert!(matches!(err, FamilyError::NonPositiveRadius { t, .. } if t < 0.0));
    }

    #[test]
    fn rejects_gauss_map_not_normal() {
        let err = build_family(
            "gamma.x = t\ngamma.y = 0\nlambda = 1\nnu.x = 1\nnu.y = 0\ninterval = -1 1\nsamples = 10",
        )
        .unwrap_err();
        assert!(matches!(err, FamilyError::NotOrthogonal { dot, .. } if dot == 1.0));
    }

    #[test]
    fn rejects_non_unit_gauss_map() {
        let err = build_family(
            "gamma.x = t\ngamma.y = 0\nlambda = 1\nnu.x = 0\nnu.y = 2\ninterval = -1 1\nsamples = 10",
        )
        .unwrap_err();
        assert!(matches!(err, FamilyError::NotUnit { .. }));
    }

    #[test]
    fn malformed_configs() {
        assert!(matches!(
            build_family("gamma.x = t\nlambda = 1\ninterval = 0 1"),
            Err(FamilyError::Config(ConfigError::MissingKey { ref key })) if key == "gamma.y"
        ));
        assert!(matches!(
            build_family("gamma.x = t\ngamma.y = 0\nlambda = 1\ninterval = 1 0"),
            Err(FamilyError::EmptyInterval { .. })
        ));
        assert!(matches!(
            build_family("gamma.x = t\ngamma.y = 0\nlambda = 1\ninterval = 0 1\nsamples = 1"),
            Err(FamilyError::TooFewSamples(1))
        ));
        assert!(matches!(
            build_family("gamma.x = t +\ngamma.y = 0\nlambda = 1\ninterval = 0 1"),
            Err(FamilyError::Expression { ref key, .. }) if key == "gamma.x"
        ));
        assert!(matches!(
            build_family("gamma.x = t\ngamma.y = 0\nlambda = 1\nnu.x = 0\ninterval = 0 1"),
            Err(FamilyError::Config(ConfigError::MissingKey { ref key })) if key == "nu.y"
        ));
        assert!(matches!(
            build_family("gamma.x = t\ngamma.y = 0\nlambda = 1\ninterval = 0 1\ncolor = red"),
            Err(FamilyError::Config(ConfigError::UnknownKey { .. }))
        ));
    }

    #[test]
    fn evaluation_errors_carry_key() {
        let err =
            build_family("gamma.x = log(t)\ngamma.y = 0\nlambda = 1\ninterval = -1 1\nsamples = 4")
                .unwrap_err();
        assert!(matches!(err, FamilyError::Eval { ref key, .. } if key == "gamma.x"));
    }

    #[test]
    fn reversal_mirrors_interval() {
        let spec =
            CircleFamilySpec::from_sources(("t^3", "t^2"), "1 + t^2", None, (0.5, 2.0), 8).unwrap();
        let rev = spec.reversed().unwrap();
        assert_eq!(rev.interval(), Interval { a: -2.0, b: -0.5 });
        let s = spec.sample(1.5).unwrap();
        let r = rev.sample(-1.5).unwrap();
        assert_eq!(s.center, r.center);
        assert_eq!(s.velocity, -r.velocity);
        assert_eq!(s.radius_rate, -r.radius_rate);
    }
}

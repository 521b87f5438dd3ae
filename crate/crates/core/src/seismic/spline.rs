//! Interpolating cubic spline with not-a-knot end conditions.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SplineError {
    #[error("need at least 2 knots, got {0}")]
    TooFewKnots(usize),
    #[error("knots and values differ in length")]
    LengthMismatch,
    #[error("knots must be finite and strictly increasing (index {0})")]
    NotIncreasing(usize),
}

/// Piecewise cubic `S` with `S(x_i) = y_i`, continuous up to the second
/// derivative, and a continuous third derivative at the second and
/// second-to-last knots. Reproduces cubics exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    /// Second derivatives at the knots.
    m: Vec<f64>,
}

impl CubicSpline {
    pub fn new(x: &[f64], y: &[f64]) -> Result<Self, SplineError> {
        let n = x.len();
        if n != y.len() {
            return Err(SplineError::LengthMismatch);
        }
        if n < 2 {
            return Err(SplineError::TooFewKnots(n));
        }
        for i in 0..n {
            if !x[i].is_finite() || (i > 0 && x[i] <= x[i - 1]) {
                return Err(SplineError::NotIncreasing(i));
            }
        }
        let m = match n {
            2 => vec![0.0; 2],
            3 => {
                let d0 = (y[1] - y[0]) / (x[1] - x[0]);
                let d1 = (y[2] - y[1]) / (x[2] - x[1]);
                vec![2.0 * (d1 - d0) / (x[2] - x[0]); 3]
            }
            _ => not_a_knot_moments(x, y),
        };
        Ok(CubicSpline {
            x: x.to_vec(),
            y: y.to_vec(),
            m,
        })
    }

    pub fn knots(&self) -> &[f64] {
        &self.x
    }

    fn segment(&self, t: f64) -> usize {
        let n = self.x.len();
        self.x.partition_point(|&k| k <= t).clamp(1, n - 1) - 1
    }

    pub fn eval(&self, t: f64) -> f64 {
        let i = self.segment(t);
        let (x0, x1) = (self.x[i], self.x[i + 1]);
        let h = x1 - x0;
        let (a, b) = (x1 - t, t - x0);
        self.m[i] * a.powi(3) / (6.0 * h)
            + self.m[i + 1] * b.powi(3) / (6.0 * h)
            + (self.y[i] / h - self.m[i] * h / 6.0) * a
            + (self.y[i + 1] / h - self.m[i + 1] * h / 6.0) * b
    }

    pub fn deriv(&self, t: f64) -> f64 {
        let i = self.segment(t);
        let (x0, x1) = (self.x[i], self.x[i + 1]);
        let h = x1 - x0;
        let (a, b) = (x1 - t, t - x0);
        -self.m[i] * a * a / (2.0 * h) + self.m[i + 1] * b * b / (2.0 * h)
            - (self.y[i] / h - self.m[i] * h / 6.0)
            + (self.y[i + 1] / h - self.m[i + 1] * h / 6.0)
    }
}

// Moments M_i = S''(x_i) for n >= 4. The two not-a-knot rows are eliminated
// into the first and last interior equations, leaving a tridiagonal system
// in M_1..M_{n-2}.
fn not_a_knot_moments(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let d: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
    let k = n - 2;
    let mut sub = vec![0.0; k];
    let mut diag = vec![0.0; k];
    let mut sup = vec![0.0; k];
    let mut rhs = vec![0.0; k];
    for j in 0..k {
        let i = j + 1;
        sub[j] = h[i - 1];
        diag[j] = 2.0 * (h[i - 1] + h[i]);
        sup[j] = h[i];
        rhs[j] = 6.0 * (d[i] - d[i - 1]);
    }
    // M_0 = ((h0 + h1) M_1 - h0 M_2) / h1
    let (h0, h1) = (h[0], h[1]);
    diag[0] += h0 * (h0 + h1) / h1;
    sup[0] -= h0 * h0 / h1;
    // M_{n-1} = ((h_{n-2} + h_{n-3}) M_{n-2} - h_{n-2} M_{n-3}) / h_{n-3}
    let (ha, hb) = (h[n - 3], h[n - 2]);
    diag[k - 1] += hb * (ha + hb) / ha;
    sub[k - 1] -= hb * hb / ha;

    let inner = if k == 2 {
        // the coupled rows are the whole system
        let det = diag[0] * diag[1] - sup[0] * sub[1];
        vec![
            (rhs[0] * diag[1] - sup[0] * rhs[1]) / det,
            (diag[0] * rhs[1] - sub[1] * rhs[0]) / det,
        ]
    } else {
        thomas(&sub, &diag, &sup, &rhs)
    };
    let mut m = Vec::with_capacity(n);
    m.push(((h0 + h1) * inner[0] - h0 * inner[1]) / h1);
    m.extend_from_slice(&inner);
    m.push(((ha + hb) * inner[k - 1] - hb * inner[k - 2]) / ha);
    m
}

fn thomas(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut r = vec![0.0; n];
    c[0] = sup[0] / diag[0];
    r[0] = rhs[0] / diag[0];
    for i in 1..n {
        let denom = diag[i] - sub[i] * c[i - 1];
        c[i] = sup[i] / denom;
        r[i] = (rhs[i] - sub[i] * r[i - 1]) / denom;
    }
    let mut out = vec![0.0; n];
    out[n - 1] = r[n - 1];
    for i in (0..n - 1).rev() {
        out[i] = r[i] - c[i] * out[i + 1];
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cubic(t: f64) -> f64 {
        2.0 * t.powi(3) - t * t + 0.5 * t - 3.0
    }

    #[test]
    fn reproduces_cubics() {
        for n in [4, 5, 9, 40] {
            let x: Vec<f64> = (0..n)
                .map(|i| -1.0 + 3.0 * (i as f64 / (n - 1) as f64).powf(1.3))
                .collect();
            let y: Vec<f64> = x.iter().map(|&t| cubic(t)).collect();
            let s = CubicSpline::new(&x, &y).unwrap();
            for k in 0..=100 {
                let t = -1.2 + 3.4 * k as f64 / 100.0;
                assert!((s.eval(t) - cubic(t)).abs() < 1e-10, "n={n} t={t}");
                let d = 6.0 * t * t - 2.0 * t + 0.5;
                assert!((s.deriv(t) - d).abs() < 1e-9, "n={n} t={t}");
            }
        }
    }

    #[test]
    fn small_knot_counts() {
        let s = CubicSpline::new(&[0.0, 2.0], &[1.0, 5.0]).unwrap();
        assert_eq!(s.eval(1.0), 3.0);
        assert_eq!(s.deriv(0.5), 2.0);
        let s = CubicSpline::new(&[0.0, 1.0, 3.0], &[0.0, 1.0, 9.0]).unwrap();
        assert!((s.eval(2.0) - 4.0).abs() < 1e-12);
        assert!((s.deriv(2.0) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn interpolates_knots() {
        let x = [0.0, 0.3, 0.7, 1.0, 1.8, 2.0];
        let y = [1.0, -2.0, 0.5, 0.0, 3.0, 1.0];
        let s = CubicSpline::new(&x, &y).unwrap();
        for (a, b) in x.iter().zip(&y) {
            assert!((s.eval(*a) - b).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_knots() {
        assert_eq!(
            CubicSpline::new(&[0.0], &[1.0]),
            Err(SplineError::TooFewKnots(1))
        );
        assert_eq!(
            CubicSpline::new(&[0.0, 0.0], &[1.0, 2.0]),
            Err(SplineError::NotIncreasing(1))
        );
        assert_eq!(
            CubicSpline::new(&[0.0, 1.0], &[1.0]),
            Err(SplineError::LengthMismatch)
        );
    }
}

//! Symbolic differentiation with constant-folding node constructors.

use super::{Expr, Func};

fn num(v: f64) -> Expr {
    Expr::Num(v)
}

fn as_num(e: &Expr) -> Option<f64> {
    match e {
        Expr::Num(v) => Some(*v),
        _ => None,
    }
}

pub(crate) fn neg(a: Expr) -> Expr {
    match a {
        Expr::Num(v) => num(-v),
        Expr::Neg(inner) => *inner,
        other => Expr::Neg(Box::new(other)),
    }
}

pub(crate) fn add(a: Expr, b: Expr) -> Expr {
    match (as_num(&a), as_num(&b)) {
        (Some(x), Some(y)) => num(x + y),
        (Some(0.0), _) => b,
        (_, Some(0.0)) => a,
        _ => Expr::Add(Box::new(a), Box::new(b)),
    }
}

pub(crate) fn sub(a: Expr, b: Expr) -> Expr {
    match (as_num(&a), as_num(&b)) {
        (Some(x), Some(y)) => num(x - y),
        (Some(0.0), _) => neg(b),
        (_, Some(0.0)) => a,
        _ => Expr::Sub(Box::new(a), Box::new(b)),
    }
}

pub(crate) fn mul(a: Expr, b: Expr) -> Expr {
    match (as_num(&a), as_num(&b)) {
        (Some(x), Some(y)) => num(x * y),
        (Some(x), _) | (_, Some(x)) if x == 0.0 => num(0.0),
        (Some(1.0), _) => b,
        (_, Some(1.0)) => a,
        _ => Expr::Mul(Box::new(a), Box::new(b)),
    }
}

pub(crate) fn div(a: Expr, b: Expr) -> Expr {
    match (as_num(&a), as_num(&b)) {
        (Some(x), Some(y)) if y != 0.0 => num(x / y),
        (Some(0.0), _) => num(0.0),
        (_, Some(1.0)) => a,
        _ => Expr::Div(Box::new(a), Box::new(b)),
    }
}

pub(crate) fn pow(a: Expr, n: i32) -> Expr {
    match (as_num(&a), n) {
        (_, 0) => num(1.0),
        (_, 1) => a,
        (Some(x), n) if x != 0.0 || n > 0 => num(x.powi(n)),
        _ => Expr::Pow(Box::new(a), n),
    }
}

fn call(f: Func, a: Expr) -> Expr {
    Expr::Call(f, Box::new(a))
}

pub(super) fn diff(e: &Expr) -> Expr {
    match e {
        Expr::Num(_) => num(0.0),
        Expr::Var => num(1.0),
        Expr::Neg(a) => neg(diff(a)),
        Expr::Add(a, b) => add(diff(a), diff(b)),
        Expr::Sub(a, b) => sub(diff(a), diff(b)),
        Expr::Mul(a, b) => add(mul(diff(a), (**b).clone()), mul((**a).clone(), diff(b))),
        Expr::Div(a, b) => div(
            sub(mul(diff(a), (**b).clone()), mul((**a).clone(), diff(b))),
            pow((**b).clone(), 2),
        ),
        Expr::Pow(a, n) => {
            if *n == 0 {
                return num(0.0);
            }
            mul(mul(num(f64::from(*n)), pow((**a).clone(), n - 1)), diff(a))
        }
        Expr::Call(f, a) => {
            let u = (**a).clone();
            let du = diff(a);
            match f {
                Func::Sin => mul(call(Func::Cos, u), du),
                Func::Cos => neg(mul(call(Func::Sin, u), du)),
                Func::Exp => mul(call(Func::Exp, u), du),
                Func::Log => div(du, u),
                Func::Sqrt => div(du, mul(num(2.0), call(Func::Sqrt, u))),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::expr::parse_expr;

    use super::*;

    fn d(src: &str) -> Expr {
        parse_expr(src).unwrap().diff()
    }

    #[test]
    fn power_rule() {
        assert_eq!(d("t^3"), parse_expr("3*t^2").unwrap());
        assert_eq!(d("t^2"), parse_expr("2*t").unwrap());
    }

    #[test]
    fn sine_to_cosine() {
        assert_eq!(d("sin(t)"), parse_expr("cos(t)").unwrap());
    }

    #[test]
    fn constants_differentiate_to_literal_zero() {
        assert_eq!(d("1"), Expr::Num(0.0));
        assert_eq!(d("sqrt(2)*exp(3)"), Expr::Num(0.0));
    }

    #[test]
    fn log_derivative_may_be_singular_at_runtime() {
        let e = d("log(t)");
        assert_eq!(e.eval(2.0).unwrap(), 0.5);
        assert!(e.eval(0.0).is_err());
    }

    #[test]
    fn quotient_and_chain_rules() {
        let e = d("1/sqrt(4*t^6+1)");
        // -12 t^5 / (4t^6+1)^{3/2} at t=1
        let expected = -12.0 / 5f64.powf(1.5);
        assert!((e.eval(1.0).unwrap() - expected).abs() < 1e-14);
        let e = d("cos(t^2)*exp(-t)");
        let t: f64 = 0.7;
        let expected = -2.0 * t * (t * t).sin() * (-t).exp() - (t * t).cos() * (-t).exp();
        assert!((e.eval(t).unwrap() - expected).abs() < 1e-14);
    }
}

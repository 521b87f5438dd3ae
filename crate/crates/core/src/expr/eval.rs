use thiserror::Error;

use super::{Expr, Func};

/// The kind of domain violation hit during evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainKind {
    LogNonPositive,
    SqrtNegative,
    DivisionByZero,
    NonFinite,
}

impl std::fmt::Display for DomainKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DomainKind::LogNonPositive => "log of a non-positive value",
            DomainKind::SqrtNegative => "sqrt of a negative value",
            DomainKind::DivisionByZero => "division by zero",
            DomainKind::NonFinite => "non-finite result",
        })
    }
}

/// Domain error carrying the offending subexpression and parameter value.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{kind} in `{subexpr}` at t = {t}")]
pub struct EvalError {
    pub kind: DomainKind,
    pub subexpr: String,
    pub t: f64,
}

fn fail(kind: DomainKind, e: &Expr, t: f64) -> EvalError {
    EvalError {
        kind,
        subexpr: e.to_string(),
        t,
    }
}

pub(super) fn eval(e: &Expr, t: f64) -> Result<f64, EvalError> {
    let v = match e {
        Expr::Num(v) => *v,
        Expr::Var => t,
        Expr::Neg(a) => -eval(a, t)?,
        Expr::Add(a, b) => eval(a, t)? + eval(b, t)?,
        Expr::Sub(a, b) => eval(a, t)? - eval(b, t)?,
        Expr::Mul(a, b) => eval(a, t)? * eval(b, t)?,
        Expr::Div(a, b) => {
            let num = eval(a, t)?;
            let den = eval(b, t)?;
            if den == 0.0 {
                return Err(fail(DomainKind::DivisionByZero, e, t));
            }
            num / den
        }
        Expr::Pow(a, n) => {
            let x = eval(a, t)?;
            if x == 0.0 && *n < 0 {
                return Err(fail(DomainKind::DivisionByZero, e, t));
            }
            x.powi(*n)
        }
        Expr::Call(f, a) => {
            let x = eval(a, t)?;
            match f {
                Func::Sin => x.sin(),
                Func::Cos => x.cos(),
                Func::Exp => x.exp(),
                Func::Log => {
                    if x <= 0.0 {
                        return Err(fail(DomainKind::LogNonPositive, e, t));
                    }
                    x.ln()
                }
                Func::Sqrt => {
                    if x < 0.0 {
                        return Err(fail(DomainKind::SqrtNegative, e, t));
                    }
                    x.sqrt()
                }
            }
        }
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(fail(DomainKind::NonFinite, e, t))
    }
}

//! Scalar expressions in the curve parameter `t`.
//!
//! Expressions are parsed from a small infix grammar, evaluated in IEEE
//! double precision, and differentiated symbolically. The only rewriting
//! applied is constant folding in the node constructors.

mod diff;
mod eval;
mod parse;

use std::fmt;

pub use eval::{DomainKind, EvalError};
pub use parse::{parse_expr, ParseError};

/// Elementary functions admitted by the grammar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }
}

/// Expression tree over the single variable `t`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    /// Integer power.
    Pow(Box<Expr>, i32),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn num(v: f64) -> Expr {
        Expr::Num(v)
    }

    pub fn var() -> Expr {
        Expr::Var
    }

    /// Number of nodes in the tree. Integer exponents are stored inline
    /// and do not count as nodes.
    pub fn node_count(&self) -> usize {
        match self {
            Expr::Num(_) | Expr::Var => 1,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Call(_, a) => 1 + a.node_count(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                1 + a.node_count() + b.node_count()
            }
        }
    }

    /// True if the expression does not mention `t`.
    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Num(_) => true,
            Expr::Var => false,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Call(_, a) => a.is_constant(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.is_constant() && b.is_constant()
            }
        }
    }

    /// Substitute `inner` for every occurrence of `t`.
    pub fn compose(&self, inner: &Expr) -> Expr {
        let c = |e: &Expr| Box::new(e.compose(inner));
        match self {
            Expr::Num(v) => Expr::Num(*v),
            Expr::Var => inner.clone(),
            Expr::Neg(a) => Expr::Neg(c(a)),
            Expr::Add(a, b) => Expr::Add(c(a), c(b)),
            Expr::Sub(a, b) => Expr::Sub(c(a), c(b)),
            Expr::Mul(a, b) => Expr::Mul(c(a), c(b)),
            Expr::Div(a, b) => Expr::Div(c(a), c(b)),
            Expr::Pow(a, n) => Expr::Pow(c(a), *n),
            Expr::Call(f, a) => Expr::Call(*f, c(a)),
        }
    }

    /// Symbolic derivative with respect to `t`.
    pub fn diff(&self) -> Expr {
        diff::diff(self)
    }

    /// Evaluate at `t`. Domain violations are returned as errors.
    pub fn eval(&self, t: f64) -> Result<f64, EvalError> {
        eval::eval(self, t)
    }

    // Binding strength used by the printer; higher binds tighter.
    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Pow(..) => 3,
            Expr::Num(_) | Expr::Var | Expr::Neg(_) | Expr::Call(..) => 4,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        if self.precedence() < min_prec {
            write!(f, "(")?;
            self.fmt_at(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Expr::Num(v) => write!(f, "{v}"),
            Expr::Var => write!(f, "t"),
            Expr::Neg(a) => {
                write!(f, "-")?;
                a.fmt_at(f, 4)
            }
            Expr::Add(a, b) => {
                a.fmt_at(f, 1)?;
                write!(f, " + ")?;
                b.fmt_at(f, 2)
            }
            Expr::Sub(a, b) => {
                a.fmt_at(f, 1)?;
                write!(f, " - ")?;
                b.fmt_at(f, 2)
            }
            Expr::Mul(a, b) => {
                a.fmt_at(f, 2)?;
                write!(f, "*")?;
                b.fmt_at(f, 3)
            }
            Expr::Div(a, b) => {
                a.fmt_at(f, 2)?;
                write!(f, "/")?;
                b.fmt_at(f, 3)
            }
            Expr::Pow(a, n) => {
                a.fmt_at(f, 4)?;
                write!(f, "^{n}")
            }
            Expr::Call(func, a) => {
                write!(f, "{}(", func.name())?;
                a.fmt_at(f, 0)?;
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

impl std::str::FromStr for Expr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_expr(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printer_parenthesizes_by_precedence() {
        let e = parse_expr("-(t^2) - (t - 1)*(2/(t+1))").unwrap();
        assert_eq!(e.to_string(), "-(t^2) - (t - 1)*(2/(t + 1))");
        assert_eq!(parse_expr(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn unary_minus_binds_to_base() {
        // '-' base, then '^': (-t)^2
        let e = parse_expr("-t^2").unwrap();
        assert_eq!(e, Expr::Pow(Box::new(Expr::Neg(Box::new(Expr::Var))), 2));
        assert_eq!(e.eval(3.0).unwrap(), 9.0);
    }

    #[test]
    fn compose_substitutes_variable() {
        let e = parse_expr("t^3 + 1").unwrap();
        let g = e.compose(&parse_expr("-t").unwrap());
        assert_eq!(g.eval(2.0).unwrap(), -7.0);
    }
}

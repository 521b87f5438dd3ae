use thiserror::Error;

use super::{Expr, Func};

/// Failure to parse an expression. Offsets are byte offsets into the source.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("empty expression")]
    Empty,
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("non-integer exponent `{text}` at offset {offset}")]
    NonIntegerExponent { text: String, offset: usize },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64, String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(_, s) => format!("number `{s}`"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut toks = Vec::new();
    let mut iter = src.char_indices().peekable();
    while let Some(&(pos, ch)) = iter.peek() {
        match ch {
            c if c.is_whitespace() => {
                iter.next();
            }
            '+' => {
                iter.next();
                toks.push((Tok::Plus, pos));
            }
            '-' | '\u{2212}' => {
                iter.next();
                toks.push((Tok::Minus, pos));
            }
            '*' | '\u{00d7}' => {
                iter.next();
                toks.push((Tok::Star, pos));
            }
            '/' | '\u{00f7}' => {
                iter.next();
                toks.push((Tok::Slash, pos));
            }
            '^' => {
                iter.next();
                toks.push((Tok::Caret, pos));
            }
            '(' => {
                iter.next();
                toks.push((Tok::LParen, pos));
            }
            ')' => {
                iter.next();
                toks.push((Tok::RParen, pos));
            }
            c if c.is_ascii_digit() || c == '.' => {
                let mut end = pos;
                let bytes = src.as_bytes();
                let mut seen_exp = false;
                while end < bytes.len() {
                    let b = bytes[end];
                    if b.is_ascii_digit() || b == b'.' {
                        end += 1;
                    } else if (b == b'e' || b == b'E') && !seen_exp {
                        // exponent only if followed by digits (optionally signed)
                        let mut k = end + 1;
                        if k < bytes.len() && (bytes[k] == b'+' || bytes[k] == b'-') {
                            k += 1;
                        }
                        if k < bytes.len() && bytes[k].is_ascii_digit() {
                            seen_exp = true;
                            end = k;
                        } else {
                            break;
                        }
                    } else {
                        break;
                    }
                }
                let text = &src[pos..end];
                let value: f64 = text.parse().map_err(|_| ParseError::Syntax {
                    offset: pos,
                    message: format!("malformed number `{text}`"),
                })?;
                toks.push((Tok::Num(value, text.to_string()), pos));
                while iter.peek().is_some_and(|&(p, _)| p < end) {
                    iter.next();
                }
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut name = String::new();
                while let Some(&(_, c)) = iter.peek() {
                    if c.is_alphanumeric() || c == '_' {
                        name.push(c);
                        iter.next();
                    } else {
                        break;
                    }
                }
                toks.push((Tok::Ident(name), pos));
            }
            other => {
                return Err(ParseError::Syntax {
                    offset: pos,
                    message: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    toks.push((Tok::End, src.len()));
    Ok(toks)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        ParseError::Syntax {
            offset: self.offset(),
            message: format!("expected {wanted}, found {}", self.peek().describe()),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Tok::Slash => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.base()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let start = self.offset();
        let negative = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let off = self.offset();
        match self.peek().clone() {
            Tok::Num(_, text) => {
                self.bump();
                if !text.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(ParseError::NonIntegerExponent {
                        text: if negative { format!("-{text}") } else { text },
                        offset: start,
                    });
                }
                let mag: i32 = text.parse().map_err(|_| ParseError::Syntax {
                    offset: off,
                    message: format!("exponent `{text}` out of range"),
                })?;
                let n = if negative { -mag } else { mag };
                Ok(Expr::Pow(Box::new(base), n))
            }
            _ => Err(self.unexpected("integer exponent")),
        }
    }

    fn base(&mut self) -> Result<Expr, ParseError> {
        let (tok, off) = self.bump();
        match tok {
            Tok::Num(v, _) => Ok(Expr::Num(v)),
            Tok::Minus => Ok(Expr::Neg(Box::new(self.base()?))),
            Tok::LParen => {
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.unexpected("`)`"));
                }
                self.bump();
                Ok(inner)
            }
            Tok::Ident(name) if name == "t" => Ok(Expr::Var),
            Tok::Ident(name) => {
                let func = Func::from_name(&name)
                    .ok_or(ParseError::UnknownIdentifier { name, offset: off })?;
                if *self.peek() != Tok::LParen {
                    return Err(self.unexpected("`(` after function name"));
                }
                self.bump();
                let arg = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.unexpected("`)`"));
                }
                self.bump();
                Ok(Expr::Call(func, Box::new(arg)))
            }
            other => Err(ParseError::Syntax {
                offset: off,
                message: format!("expected operand, found {}", other.describe()),
            }),
        }
    }
}

/// Parse an expression in `t`.
///
/// Grammar: `expr := term (('+'|'-') term)*`, `term := factor (('*'|'/') factor)*`,
/// `factor := base ('^' integer)?`, `base := number | 't' | ident '(' expr ')' | '(' expr ')' | '-' base`.
pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    if src.trim().is_empty() {
        return Err(ParseError::Empty);
    }
    let toks = tokenize(src)?;
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected("operator or end of input"));
    }
    Ok(e)
}

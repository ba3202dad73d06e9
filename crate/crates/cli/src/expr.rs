//! Expression front end for building array polynomials from text.
//!
//! Input form: `n=<rows> k=<cols>; <expression>`. An expression combines
//! rational constants (`3`, `1/2`), array variables `x[row,col]`, power
//! sums `P[a1,...,ak]`, explicit symmetrization `sym(...)`, parentheses,
//! `*`, `^` with a nonnegative integer exponent, and `+`/`-` including a
//! leading sign. `#` starts a comment that runs to the end of the line.
//! Everything elaborates directly to an exact-coefficient polynomial.

use multisym::sym::{power_sum, symmetrize, ExpTuple};
use multisym::{Error, Poly, Rat, Result, Shape, VarIndex};
use num::BigInt;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Eq,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(s) => format!("number '{}'", s),
            Tok::Ident(s) => format!("'{}'", s),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::LBracket => "'['".into(),
            Tok::RBracket => "']'".into(),
            Tok::Comma => "','".into(),
            Tok::Semi => "';'".into(),
            Tok::Eq => "'='".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<(Vec<Spanned>, (usize, usize))> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut it = src.chars().peekable();
    while let Some(&c) = it.peek() {
        let (l0, c0) = (line, col);
        match c {
            '\n' => {
                it.next();
                line += 1;
                col = 1;
            }
            _ if c.is_whitespace() => {
                it.next();
                col += 1;
            }
            '#' => {
                while let Some(&d) = it.peek() {
                    if d == '\n' {
                        break;
                    }
                    it.next();
                    col += 1;
                }
            }
            '0'..='9' => {
                let mut s = String::new();
                while let Some(&d) = it.peek() {
                    if d.is_ascii_digit() {
                        s.push(d);
                        it.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                out.push(Spanned { tok: Tok::Num(s), line: l0, col: c0 });
            }
            _ if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&d) = it.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        s.push(d);
                        it.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                out.push(Spanned { tok: Tok::Ident(s), line: l0, col: c0 });
            }
            _ => {
                let tok = match c {
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    '/' => Tok::Slash,
                    '^' => Tok::Caret,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '[' => Tok::LBracket,
                    ']' => Tok::RBracket,
                    ',' => Tok::Comma,
                    ';' => Tok::Semi,
                    '=' => Tok::Eq,
                    other => {
                        return Err(Error::Parse {
                            line: l0,
                            col: c0,
                            msg: format!("unexpected character '{}'", other),
                        })
                    }
                };
                it.next();
                col += 1;
                out.push(Spanned { tok, line: l0, col: c0 });
            }
        }
    }
    Ok((out, (line, col)))
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    end: (usize, usize),
    shape: Shape,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map(|s| (s.line, s.col)).unwrap_or(self.end)
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T> {
        let (line, col) = self.here();
        Err(Error::Parse { line, col, msg: msg.into() })
    }

    /// Pins any elaboration error (index range, orbit size, ...) to the
    /// position where the offending construct started.
    fn pin<T>(&self, at: (usize, usize), r: Result<T>) -> Result<T> {
        r.map_err(|e| match e {
            Error::Parse { .. } => e,
            other => Error::Parse { line: at.0, col: at.1, msg: other.to_string() },
        })
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|s| s.tok.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<()> {
        match self.peek() {
            Some(t) if *t == want => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => {
                let msg = format!("expected {}, found {}", want.describe(), t.describe());
                self.fail(msg)
            }
            None => self.fail(format!("expected {}, found end of input", want.describe())),
        }
    }

    fn expect_uint(&mut self, what: &str) -> Result<u32> {
        let at = self.here();
        match self.peek().cloned() {
            Some(Tok::Num(s)) => {
                self.pos += 1;
                s.parse::<u32>().map_err(|_| Error::Parse {
                    line: at.0,
                    col: at.1,
                    msg: format!("{} '{}' is too large", what, s),
                })
            }
            Some(t) => {
                let msg = format!("expected {}, found {}", what, t.describe());
                self.fail(msg)
            }
            None => self.fail(format!("expected {}, found end of input", what)),
        }
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut negate = false;
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                negate = true;
            }
            Some(Tok::Plus) => {
                self.pos += 1;
            }
            _ => {}
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.scale(&-Rat::from_integer(1.into()));
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.add(&t)?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.sub(&t)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            let f = self.factor()?;
            acc = acc.mul(&f)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly> {
        let base = self.base()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let e = self.expect_uint("exponent")?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Poly> {
        let at = self.here();
        match self.next() {
            Some(Tok::Num(num)) => {
                let numer: BigInt = num.parse().expect("digits parse as an integer");
                let denom: BigInt = if self.peek() == Some(&Tok::Slash) {
                    self.pos += 1;
                    let d = match self.next() {
                        Some(Tok::Num(d)) => d,
                        Some(t) => {
                            return self
                                .fail(format!("expected denominator digits, found {}", t.describe()))
                        }
                        None => return self.fail("expected denominator digits, found end of input"),
                    };
                    let d: BigInt = d.parse().expect("digits parse as an integer");
                    if d == BigInt::from(0) {
                        return Err(Error::Parse {
                            line: at.0,
                            col: at.1,
                            msg: "zero denominator".into(),
                        });
                    }
                    d
                } else {
                    BigInt::from(1)
                };
                Ok(Poly::constant(self.shape, Rat::new(numer, denom)))
            }
            Some(Tok::Ident(name)) => match name.as_str() {
                "x" => {
                    self.expect(Tok::LBracket)?;
                    let row = self.expect_uint("row index")?;
                    self.expect(Tok::Comma)?;
                    let col = self.expect_uint("column index")?;
                    self.expect(Tok::RBracket)?;
                    self.pin(at, Poly::var(self.shape, VarIndex::new(row, col)))
                }
                "P" => {
                    self.expect(Tok::LBracket)?;
                    let mut tuple = vec![self.expect_uint("exponent")?];
                    while self.peek() == Some(&Tok::Comma) {
                        self.pos += 1;
                        tuple.push(self.expect_uint("exponent")?);
                    }
                    self.expect(Tok::RBracket)?;
                    if tuple.len() != self.shape.cols as usize {
                        return Err(Error::Parse {
                            line: at.0,
                            col: at.1,
                            msg: format!(
                                "power sum needs {} exponents for k={}, got {}",
                                self.shape.cols,
                                self.shape.cols,
                                tuple.len()
                            ),
                        });
                    }
                    let a = self.pin(at, ExpTuple::new(tuple))?;
                    self.pin(at, power_sum(self.shape, &a))
                }
                "sym" => {
                    self.expect(Tok::LParen)?;
                    let inner = self.expr()?;
                    self.expect(Tok::RParen)?;
                    self.pin(at, symmetrize(&inner))
                }
                other => self.fail(format!(
                    "unknown name '{}'; expected x[..], P[..] or sym(..)",
                    other
                )),
            },
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Some(t) => self.fail(format!("expected a constant, variable, power sum, sym(..) or '(', found {}", t.describe())),
            None => self.fail("expected an expression, found end of input"),
        }
    }
}

/// Parses `n=<n> k=<k>; <expression>` into a polynomial on that array.
pub fn parse_expression(src: &str) -> Result<Poly> {
    let (toks, end) = lex(src)?;
    // header before the shape exists: read it with a throwaway shape
    let mut p = Parser { toks, pos: 0, end, shape: Shape::new(1, 1)? };
    let expect_keyword = |p: &mut Parser, name: &str| -> Result<()> {
        match p.peek() {
            Some(Tok::Ident(s)) if s == name => {
                p.pos += 1;
                Ok(())
            }
            _ => p.fail("input must start with 'n=<rows> k=<cols>;'"),
        }
    };
    expect_keyword(&mut p, "n")?;
    p.expect(Tok::Eq)?;
    let n = p.expect_uint("row count")?;
    expect_keyword(&mut p, "k")?;
    p.expect(Tok::Eq)?;
    let k = p.expect_uint("column count")?;
    p.expect(Tok::Semi)?;
    let at = (1, 1);
    p.shape = p.pin(at, Shape::new(n, k))?;
    let poly = p.expr()?;
    if let Some(t) = p.peek() {
        let msg = format!("unexpected {} after the expression", t.describe());
        return p.fail(msg);
    }
    Ok(poly)
}

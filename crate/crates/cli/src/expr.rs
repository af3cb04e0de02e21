//! A small infix language for rational functions over Q(ζ_N).
//!
//! Grammar (juxtaposition multiplies, `^` takes a non-negative integer):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/')? unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' int)?
//! atom   := int | symbol | '(' expr ')'
//! ```
//!
//! Symbols: `x`; `z` = ζ_N; `i` = ζ_4 (needs 4 | N); `u` = ζ_3 and
//! `ub` = ζ_3² (need 3 | N); `w` = 1 - i and `wb` = 1 + i.

use std::sync::Arc;

use num_bigint::BigInt;
use thiserror::Error;
use unital::{peel_roots, CycField, CycNum, P1Value, Poly, Rat, UnitalFn};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("symbol `{sym}` is not defined in Q(zeta_{n})")]
    Symbol { sym: String, n: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("expression is not a constant")]
    NotConstant,
    #[error(transparent)]
    Core(#[from] unital::Error),
}

pub type Result<T> = std::result::Result<T, ExprError>;

/// A quotient of two polynomials, not reduced.
#[derive(Clone, Debug)]
pub struct RatFn {
    pub num: Poly,
    pub den: Poly,
}

impl RatFn {
    fn constant(c: CycNum) -> RatFn {
        let field = c.field().clone();
        RatFn {
            num: Poly::constant(c),
            den: Poly::one(&field),
        }
    }

    fn x(field: &Arc<CycField>) -> RatFn {
        RatFn {
            num: Poly::from_ints(field, &[0, 1]),
            den: Poly::one(field),
        }
    }

    fn add(&self, o: &RatFn) -> Result<RatFn> {
        Ok(RatFn {
            num: self.num.mul(&o.den)?.add(&o.num.mul(&self.den)?)?,
            den: self.den.mul(&o.den)?,
        })
    }

    fn neg(&self) -> Result<RatFn> {
        let m1 = CycNum::from_int(self.num.field(), -1);
        Ok(RatFn {
            num: self.num.scale(&m1)?,
            den: self.den.clone(),
        })
    }

    fn mul(&self, o: &RatFn) -> Result<RatFn> {
        Ok(RatFn {
            num: self.num.mul(&o.num)?,
            den: self.den.mul(&o.den)?,
        })
    }

    fn div(&self, o: &RatFn) -> Result<RatFn> {
        if o.num.is_zero() {
            return Err(ExprError::DivisionByZero);
        }
        Ok(RatFn {
            num: self.num.mul(&o.den)?,
            den: self.den.mul(&o.num)?,
        })
    }

    fn pow(&self, e: u32) -> Result<RatFn> {
        let mut out = RatFn::constant(CycNum::one(self.num.field()));
        for _ in 0..e {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// The constant value, if both parts have degree 0.
    pub fn as_constant(&self) -> Option<CycNum> {
        match (self.num.degree(), self.den.degree()) {
            (None, Some(0)) => Some(CycNum::zero(self.num.field())),
            (Some(0), Some(0)) => self.num.coeff(0).div(&self.den.coeff(0)).ok(),
            _ => None,
        }
    }

    /// Factors numerator and denominator over {0} ∪ Γ_N and cancels.
    pub fn to_unital(&self) -> Result<UnitalFn> {
        let (zs, cz) = peel_roots(&self.num)?;
        let (ps, cp) = peel_roots(&self.den)?;
        let mut exps: std::collections::BTreeMap<_, i32> = std::collections::BTreeMap::new();
        for (p, e) in zs.exps() {
            *exps.entry(*p).or_default() += *e as i32;
        }
        for (p, e) in ps.exps() {
            *exps.entry(*p).or_default() -= *e as i32;
        }
        Ok(UnitalFn::new(
            cz.div(&cp)?,
            exps.into_iter().filter(|(_, e)| *e != 0),
        )?)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Sym(&'static str),
    Op(char),
}

const SYMBOLS: [&str; 7] = ["ub", "wb", "u", "w", "i", "x", "z"];

fn lex(s: &str) -> Result<Vec<(usize, Tok)>> {
    let b = s.as_bytes();
    let mut out = Vec::new();
    let mut k = 0;
    while k < b.len() {
        let c = b[k] as char;
        if c.is_ascii_whitespace() {
            k += 1;
        } else if c.is_ascii_digit() {
            let start = k;
            while k < b.len() && b[k].is_ascii_digit() {
                k += 1;
            }
            out.push((start, Tok::Int(s[start..k].parse().expect("digits"))));
        } else if "+-*/^()".contains(c) {
            out.push((k, Tok::Op(c)));
            k += 1;
        } else if let Some(sym) = SYMBOLS.iter().find(|sym| s[k..].starts_with(**sym)) {
            out.push((k, Tok::Sym(sym)));
            k += sym.len();
        } else {
            return Err(ExprError::Syntax {
                pos: k,
                msg: format!("unexpected `{c}`"),
            });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    field: &'a Arc<CycField>,
    toks: Vec<(usize, Tok)>,
    at: usize,
    len: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.len, |(p, _)| *p)
    }

    fn fail<T>(&self, msg: &str) -> Result<T> {
        Err(ExprError::Syntax {
            pos: self.pos(),
            msg: msg.to_string(),
        })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RatFn> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?)?;
            } else if self.eat('-') {
                acc = acc.add(&self.term()?.neg()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RatFn> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?)?;
            } else if self.eat('/') {
                acc = acc.div(&self.unary()?)?;
            } else if matches!(self.peek(), Some(Tok::Int(_) | Tok::Sym(_) | Tok::Op('('))) {
                acc = acc.mul(&self.unary()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RatFn> {
        if self.eat('-') {
            return self.unary()?.neg();
        }
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        match self.peek().cloned() {
            Some(Tok::Int(e)) => {
                self.at += 1;
                match u32::try_from(e) {
                    Ok(e) if e <= 64 => base.pow(e),
                    _ => self.fail("exponent too large"),
                }
            }
            _ => self.fail("expected an integer exponent"),
        }
    }

    fn atom(&mut self) -> Result<RatFn> {
        match self.peek().cloned() {
            Some(Tok::Int(v)) => {
                self.at += 1;
                Ok(RatFn::constant(CycNum::from_rat(
                    self.field,
                    Rat::from_integer(v),
                )))
            }
            Some(Tok::Sym(s)) => {
                self.at += 1;
                symbol(self.field, s)
            }
            Some(Tok::Op('(')) => {
                self.at += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return self.fail("expected `)`");
                }
                Ok(inner)
            }
            _ => self.fail("expected a number, symbol or `(`"),
        }
    }
}

fn root(field: &Arc<CycField>, m: u32, j: i64, sym: &str) -> Result<CycNum> {
    let n = field.order();
    if !n.is_multiple_of(m) {
        return Err(ExprError::Symbol {
            sym: sym.to_string(),
            n,
        });
    }
    Ok(CycNum::root_of_unity(field, j * (n / m) as i64))
}

fn symbol(field: &Arc<CycField>, s: &str) -> Result<RatFn> {
    let one = CycNum::one(field);
    let c = match s {
        "x" => return Ok(RatFn::x(field)),
        "z" => CycNum::root_of_unity(field, 1),
        "i" => root(field, 4, 1, s)?,
        "u" => root(field, 3, 1, s)?,
        "ub" => root(field, 3, 2, s)?,
        "w" => &one - &root(field, 4, 1, s)?,
        "wb" => &one + &root(field, 4, 1, s)?,
        _ => unreachable!("lexer only yields known symbols"),
    };
    Ok(RatFn::constant(c))
}

/// Parses `s` as a rational function in `x` over Q(ζ_N).
pub fn parse(field: &Arc<CycField>, s: &str) -> Result<RatFn> {
    let mut p = Parser {
        field,
        toks: lex(s)?,
        at: 0,
        len: s.len(),
    };
    let out = p.expr()?;
    if p.at != p.toks.len() {
        return p.fail("trailing input");
    }
    Ok(out)
}

pub fn parse_unital(field: &Arc<CycField>, s: &str) -> Result<UnitalFn> {
    parse(field, s)?.to_unital()
}

/// Parses a point of P¹(Q(ζ_N)); `inf` is the point at infinity.
pub fn parse_value(field: &Arc<CycField>, s: &str) -> Result<P1Value> {
    if s.trim() == "inf" {
        return Ok(P1Value::Infinity);
    }
    parse(field, s)?
        .as_constant()
        .map(P1Value::Finite)
        .ok_or(ExprError::NotConstant)
}

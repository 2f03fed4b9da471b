//! Text form of scalars and polynomials.
//!
//! ```text
//! poly   := term (('+'|'-') term)*
//! term   := item ('*' item)*
//! item   := rational | 'z(' nat ')' ('^' int)? | 'x' digits ('^' nat)?
//! ```
//!
//! Whitespace is ignored. A leading sign is allowed on the first term.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{CycloField, CycloNum, Rat};
use crate::polyring::{HomogPoly, Monomial};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    nvars: usize,
    field: &'a CycloField,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{}'", c as char))
        }
    }

    fn digits(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digits parse"))
    }

    fn small_nat(&mut self) -> Result<u32> {
        let start = self.pos;
        let v = self.digits()?;
        u32::try_from(&v).or_else(|_| {
            self.pos = start;
            self.err("number too large")
        })
    }

    fn int(&mut self) -> Result<i64> {
        let neg = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        let start = self.pos;
        let v = self.digits()?;
        let v = i64::try_from(&v).or_else(|_| {
            self.pos = start;
            self.err("exponent too large")
        })?;
        Ok(if neg { -v } else { v })
    }

    /// One product term: a coefficient and an exponent vector.
    fn term(&mut self) -> Result<(CycloNum, Vec<u32>)> {
        let mut coeff = self.field.one();
        let mut exps = vec![0u32; self.nvars];
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let num = self.digits()?;
                    let mut r = Rat::from_integer(num);
                    if self.eat(b'/') {
                        let at = self.pos;
                        let den = self.digits()?;
                        if den.is_zero() {
                            self.pos = at;
                            return self.err("zero denominator");
                        }
                        r /= Rat::from_integer(den);
                    }
                    coeff = &coeff * &self.field.from_rat(&r);
                }
                Some(b'z') => {
                    let at = self.pos;
                    self.pos += 1;
                    self.expect(b'(')?;
                    let m = self.small_nat()?;
                    self.expect(b')')?;
                    let j = if self.eat(b'^') { self.int()? } else { 1 };
                    let root = match self.field.root_of_unity(m, j) {
                        Ok(r) => r,
                        Err(_) => {
                            self.pos = at;
                            return self.err(format!(
                                "z({m}) needs a conductor divisible by {m}, field is Q(zeta_{})",
                                self.field.conductor()
                            ));
                        }
                    };
                    coeff = &coeff * &root;
                }
                Some(b'x') => {
                    let at = self.pos;
                    self.pos += 1;
                    let idx_start = self.pos;
                    while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                        self.pos += 1;
                    }
                    if idx_start == self.pos {
                        return self.err("expected variable index after 'x'");
                    }
                    let name = std::str::from_utf8(&self.src[at..self.pos]).expect("ascii");
                    let idx: usize = name[1..].parse().unwrap_or(usize::MAX);
                    if idx >= self.nvars {
                        return Err(Error::UnknownVariable(name.to_string()));
                    }
                    let e = if self.eat(b'^') { self.small_nat()? } else { 1 };
                    exps[idx] += e;
                }
                Some(_) => return self.err("expected a number, z(M) or a variable"),
                None => return self.err("unexpected end of input"),
            }
            if !self.eat(b'*') {
                break;
            }
        }
        Ok((coeff, exps))
    }

    fn poly(&mut self) -> Result<Vec<(CycloNum, Vec<u32>)>> {
        let mut out = Vec::new();
        let mut negate = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        loop {
            let (c, e) = self.term()?;
            out.push((if negate { -c } else { c }, e));
            if self.eat(b'+') {
                negate = false;
            } else if self.eat(b'-') {
                negate = true;
            } else {
                break;
            }
        }
        if self.peek().is_some() {
            return self.err("unexpected character");
        }
        Ok(out)
    }
}

/// Parses a homogeneous polynomial in variables `x0 .. x{nvars-1}`.
pub fn parse_polynomial(text: &str, nvars: usize, field: &CycloField) -> Result<HomogPoly> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        nvars,
        field,
    };
    let terms = p.poly()?;
    HomogPoly::from_terms(field, nvars, None, terms.into_iter().map(|(c, e)| (e, c)))
}

/// Parses a scalar expression such as `-1/2*z(5)^3 + 2`.
pub fn parse_scalar(text: &str, field: &CycloField) -> Result<CycloNum> {
    let f = parse_polynomial(text, 0, field)?;
    Ok(f.coefficient(&[]))
}

fn write_rat_factor(out: &mut String, r: &Rat, has_more: bool) {
    let a = r.abs();
    if !(a.is_one() && has_more) {
        out.push_str(&a.numer().to_string());
        if !a.denom().is_one() {
            out.push('/');
            out.push_str(&a.denom().to_string());
        }
        if has_more {
            out.push('*');
        }
    }
}

fn write_terms<'a, I>(f: &mut fmt::Formatter<'_>, conductor: u32, terms: I) -> fmt::Result
where
    I: Iterator<Item = (Option<&'a Monomial>, Vec<(u32, Rat)>)>,
{
    let mut first = true;
    for (mono, comps) in terms {
        for (k, r) in comps {
            let mut body = String::new();
            let mut factors = Vec::new();
            if k > 0 {
                factors.push(if k == 1 {
                    format!("z({conductor})")
                } else {
                    format!("z({conductor})^{k}")
                });
            }
            if let Some(m) = mono {
                for (i, &e) in m.exponents().iter().enumerate() {
                    match e {
                        0 => {}
                        1 => factors.push(format!("x{i}")),
                        _ => factors.push(format!("x{i}^{e}")),
                    }
                }
            }
            write_rat_factor(&mut body, &r, !factors.is_empty());
            body.push_str(&factors.join("*"));
            let neg = r.is_negative();
            match (first, neg) {
                (true, false) => write!(f, "{body}")?,
                (true, true) => write!(f, "-{body}")?,
                (false, false) => write!(f, " + {body}")?,
                (false, true) => write!(f, " - {body}")?,
            }
            first = false;
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

pub(crate) fn write_poly(f: &mut fmt::Formatter<'_>, p: &HomogPoly) -> fmt::Result {
    let conductor = p.field().conductor();
    write_terms(
        f,
        conductor,
        p.terms().rev().map(|(m, c)| (Some(m), c.sparse_coeffs())),
    )
}

pub(crate) fn write_scalar(f: &mut fmt::Formatter<'_>, c: &CycloNum) -> fmt::Result {
    write_terms(
        f,
        c.field().conductor(),
        std::iter::once((None, c.sparse_coeffs())),
    )
}

//! Text syntax for exact super forms.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary ('*' unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' '-'? INT)?
//! atom    := NUMBER | IDENT | '(' expr ')'
//! NUMBER  := INT ('/' INT)? 'i'?
//! ```
//!
//! Identifiers are `i`, `tau`, ring generators, odd generators, even basis
//! 1-forms, and `d<odd>` for the differential of an odd generator.
//! Products are super (wedge) products.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::number::{GaussRat, Rational};
use crate::scalar::{GenId, Mono, Scalar};
use crate::superalg::{ExtMono, SuperAlgebra, SuperForm, MAX_ODD};

/// Expression error with a character offset into the source string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExprError {
    pub offset: usize,
    pub msg: String,
}

impl ExprError {
    /// Converts to a located error given the position of the expression's
    /// first character.
    pub fn locate(self, line: usize, col: usize) -> Error {
        Error::Parse { line, col: col + self.offset, msg: self.msg }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(GaussRat),
    Ident(String),
    Int(u32),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn lex(src: &str) -> std::result::Result<Vec<(usize, Tok)>, ExprError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |offset: usize, msg: &str| ExprError { offset, msg: msg.to_string() };
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        match c {
            ' ' | '\t' => {
                i += 1;
            }
            '+' => {
                out.push((start, Tok::Plus));
                i += 1;
            }
            '-' => {
                out.push((start, Tok::Minus));
                i += 1;
            }
            '*' => {
                out.push((start, Tok::Star));
                i += 1;
            }
            '^' => {
                out.push((start, Tok::Caret));
                i += 1;
            }
            '(' => {
                out.push((start, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((start, Tok::RParen));
                i += 1;
            }
            '0'..='9' => {
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let num: String = chars[start..i].iter().collect();
                if i < chars.len() && (chars[i] == '.' || chars[i] == 'e' || chars[i] == 'E') {
                    let is_float = chars[i] == '.'
                        || chars.get(i + 1).map(|c| c.is_ascii_digit() || *c == '-' || *c == '+').unwrap_or(false);
                    if is_float {
                        return Err(err(start, "floating-point literals are not allowed"));
                    }
                }
                let after_caret = matches!(out.last(), Some((_, Tok::Caret)))
                    || (matches!(out.last(), Some((_, Tok::Minus)))
                        && out.len() >= 2
                        && matches!(out[out.len() - 2].1, Tok::Caret));
                if after_caret {
                    let v: u32 = num.parse().map_err(|_| err(start, "exponent too large"))?;
                    out.push((start, Tok::Int(v)));
                    continue;
                }
                let numer: BigInt = num.parse().unwrap();
                let mut value = Rational::from_integer(numer.clone());
                if i < chars.len() && chars[i] == '/' {
                    let ds = i + 1;
                    let mut j = ds;
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    if j == ds {
                        return Err(err(i, "expected denominator after `/`"));
                    }
                    let den: BigInt = chars[ds..j].iter().collect::<String>().parse().unwrap();
                    if den.is_zero() {
                        return Err(err(ds, "zero denominator"));
                    }
                    value = Rational::new(numer, den);
                    i = j;
                    if i < chars.len() && chars[i] == '.' {
                        return Err(err(start, "floating-point literals are not allowed"));
                    }
                }
                let imag = i < chars.len()
                    && chars[i] == 'i'
                    && !chars.get(i + 1).map(|c| c.is_alphanumeric() || *c == '_').unwrap_or(false);
                if imag {
                    i += 1;
                    out.push((start, Tok::Num(GaussRat::new(Rational::zero(), value))));
                } else {
                    out.push((start, Tok::Num(GaussRat::from_rat(value))));
                }
            }
            '.' => return Err(err(start, "floating-point literals are not allowed")),
            c if c.is_alphabetic() || c == '_' => {
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(chars[start..i].iter().collect())));
            }
            _ => return Err(err(start, &format!("unexpected character `{}`", c))),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    alg: &'a SuperAlgebra,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: &str) -> std::result::Result<T, ExprError> {
        Err(ExprError { offset: self.offset(), msg: msg.to_string() })
    }

    fn expr(&mut self) -> std::result::Result<SuperForm, ExprError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc.add_assign(&t);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc.sub_assign(&t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> std::result::Result<SuperForm, ExprError> {
        let mut acc = self.unary()?;
        while let Some(Tok::Star) = self.peek() {
            self.pos += 1;
            let f = self.unary()?;
            acc = self.alg.mul(&acc, &f);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> std::result::Result<SuperForm, ExprError> {
        if let Some(Tok::Minus) = self.peek() {
            self.pos += 1;
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> std::result::Result<SuperForm, ExprError> {
        let at = self.offset();
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            let neg = if let Some(Tok::Minus) = self.peek() {
                self.pos += 1;
                true
            } else {
                false
            };
            let e = match self.peek() {
                Some(Tok::Int(e)) => *e,
                _ => return self.err("expected integer exponent"),
            };
            self.pos += 1;
            if e > 64 {
                return Err(ExprError { offset: at, msg: "exponent too large".into() });
            }
            let b = if neg {
                let s = base.terms().get(&ExtMono::one()).cloned().unwrap_or_default();
                if base.len() != 1 || s.is_zero() {
                    return Err(ExprError { offset: at, msg: "negative power of a non-unit".into() });
                }
                match self.alg.ring.try_invert(&s) {
                    Ok(inv) => SuperForm::scalar(inv),
                    Err(_) => return Err(ExprError { offset: at, msg: "negative power of a non-unit".into() }),
                }
            } else {
                base
            };
            return Ok(self.alg.pow(&b, e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> std::result::Result<SuperForm, ExprError> {
        let at = self.offset();
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(SuperForm::constant(v))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                resolve(self.alg, &name).ok_or(ExprError { offset: at, msg: format!("unknown symbol `{}`", name) })
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected `)`");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(_) => self.err("unexpected token"),
            None => self.err("unexpected end of expression"),
        }
    }
}

fn resolve(alg: &SuperAlgebra, name: &str) -> Option<SuperForm> {
    if name == "i" {
        return Some(SuperForm::constant(GaussRat::i()));
    }
    if name == "tau" {
        return Some(SuperForm::scalar(Scalar::tau_pow(1)));
    }
    if let Ok(g) = alg.ring.gen_id(name) {
        return Some(alg.gen(g));
    }
    if let Some(j) = alg.odd_id(name) {
        return Some(alg.theta(j));
    }
    if let Some(k) = alg.ring.basis_id(name) {
        return Some(alg.e(k));
    }
    if let Some(rest) = name.strip_prefix('d') {
        if let Some(j) = alg.odd_id(rest) {
            return Some(alg.dtheta(j));
        }
    }
    None
}

/// Parses an expression into a super form over `alg`.
pub fn parse_form(alg: &SuperAlgebra, src: &str) -> std::result::Result<SuperForm, ExprError> {
    let toks = lex(src)?;
    if toks.is_empty() {
        return Err(ExprError { offset: 0, msg: "empty expression".into() });
    }
    let mut p = Parser { toks, pos: 0, alg, end: src.chars().count() };
    let f = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(f)
}

/// Parses an expression that must be a plain ring element.
pub fn parse_scalar(alg: &SuperAlgebra, src: &str) -> std::result::Result<Scalar, ExprError> {
    let f = parse_form(alg, src)?;
    if f.terms().keys().any(|m| *m != ExtMono::one()) {
        return Err(ExprError { offset: 0, msg: "expected a scalar (no odd generators or 1-forms)".into() });
    }
    Ok(f.body_scalar())
}

fn fmt_rat(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn coeff_text(c: &GaussRat) -> (bool, String) {
    if c.im.is_zero() {
        return (c.re.is_negative(), fmt_rat(&c.re.abs()));
    }
    if c.re.is_zero() {
        let neg = c.im.is_negative();
        let a = c.im.abs();
        return (neg, if a.is_one() { "i".into() } else { format!("{}i", fmt_rat(&a)) });
    }
    let sign = if c.im.is_negative() { "-" } else { "+" };
    let a = c.im.abs();
    let im = if a.is_one() { "i".to_string() } else { format!("{}i", fmt_rat(&a)) };
    (false, format!("({} {} {})", fmt_rat(&c.re), sign, im))
}

fn factors(alg: &SuperAlgebra, m: &Mono, e: &ExtMono) -> Vec<String> {
    let ring = &alg.ring;
    let mut out = Vec::new();
    if m.tau == 1 {
        out.push("tau".to_string());
    } else if m.tau != 0 {
        out.push(format!("tau^{}", m.tau));
    }
    for &(g, p) in &m.gens {
        let name = ring.gen_name(g as GenId);
        if p == 1 {
            out.push(name.to_string());
        } else {
            out.push(format!("{}^{}", name, p));
        }
    }
    for j in 0..MAX_ODD {
        if e.theta & (1 << j) != 0 {
            out.push(alg.odd_names()[j].clone());
        }
    }
    for k in 0..16 {
        if e.e & (1 << k) != 0 {
            out.push(ring.basis()[k].clone());
        }
    }
    for j in 0..MAX_ODD {
        let p = e.dtheta[j];
        if p == 1 {
            out.push(format!("d{}", alg.odd_names()[j]));
        } else if p > 1 {
            out.push(format!("d{}^{}", alg.odd_names()[j], p));
        }
    }
    out
}

/// Canonical text of a form; `parse_form(format_form(f)) == f`.
pub fn format_form(alg: &SuperAlgebra, f: &SuperForm) -> String {
    let mut s = String::new();
    for (e, sc) in f.terms() {
        for (m, c) in sc.terms() {
            let (neg, ctext) = coeff_text(c);
            let fs = factors(alg, m, e);
            let body = if fs.is_empty() {
                ctext
            } else if ctext == "1" {
                fs.join("*")
            } else {
                format!("{}*{}", ctext, fs.join("*"))
            };
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let _ = write!(s, "{}", body);
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

pub fn format_scalar(alg: &SuperAlgebra, s: &Scalar) -> String {
    format_form(alg, &SuperForm::scalar(s.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Ring;

    fn alg() -> SuperAlgebra {
        let mut r = Ring::new(vec!["e".into()], vec!["c".into(), "s".into(), "a".into()], &[]).unwrap();
        let c = r.gen_id("c").unwrap();
        let s = r.gen_id("s").unwrap();
        let a = r.gen_id("a").unwrap();
        let i = GaussRat::i();
        r.set_derivation(c, vec![Scalar::term(Mono::from_pairs(1, &[(s, 1)]), i.clone())]).unwrap();
        r.set_derivation(s, vec![Scalar::term(Mono::from_pairs(1, &[(c, 1)]), -i)]).unwrap();
        r.set_derivation(a, vec![Scalar::one()]).unwrap();
        let rhs = Scalar::one().sub(&Scalar::term(Mono::from_pairs(0, &[(s, 2)]), GaussRat::one()));
        r.add_relation(Mono::from_pairs(0, &[(c, 2)]), rhs, "c^2").unwrap();
        SuperAlgebra::new(r, vec!["t".into(), "u".into()]).unwrap()
    }

    #[test]
    fn roundtrip() {
        let a = alg();
        for src in [
            "c^2 + 2*c*s",
            "(1/2 - 3i)*tau^-2*a*t*u*e*dt^2",
            "-i*tau*s*e + 3*dt*du",
            "0",
            "(1+2i)*(1-2i)",
        ] {
            let f = parse_form(&a, src).unwrap();
            let txt = format_form(&a, &f);
            assert_eq!(parse_form(&a, &txt).unwrap(), f, "{}", txt);
        }
    }

    #[test]
    fn relation_applied_on_parse() {
        let a = alg();
        let f = parse_form(&a, "c^2").unwrap();
        assert_eq!(f, parse_form(&a, "1 - s^2").unwrap());
    }

    #[test]
    fn floats_rejected() {
        let a = alg();
        let e = parse_form(&a, "1 + 0.5*c").unwrap_err();
        assert_eq!(e.offset, 4);
        assert!(e.msg.contains("floating"));
        assert!(parse_form(&a, "1e5").is_err());
    }

    #[test]
    fn unknown_symbol_located() {
        let a = alg();
        let e = parse_form(&a, "c + zz").unwrap_err();
        assert_eq!(e.offset, 4);
    }
}

//! Text syntax for vector fields and polynomials.
//!
//! ```text
//! field   := term { ("+"|"-") term }
//! term    := [ coef "*" ] "D[" var "]"
//! coef    := factor { "*" factor }
//! factor  := rational | "I" | var [ "^" nat ] | "(" sum ")" [ "^" nat ]
//! var     := name "[" index { "," index } "]"
//! ```
//!
//! Unary minus may precede any term or factor. `#` starts a comment.

use crate::exact::{Block, Gq, Kind, Monomial, Poly, VarId};
use crate::quadric::QuadricModel;
use crate::vfield::VectorField;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("variable {name} takes {expected} index(es), got {found}")]
    IndexArity { name: String, expected: usize, found: usize },
    #[error("coefficient of D[{0}] is not holomorphic")]
    NotHolomorphic(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

/// The coordinates a parse may refer to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ambient {
    vars: BTreeSet<VarId>,
}

impl Ambient {
    pub fn of_model(model: &QuadricModel) -> Self {
        Ambient { vars: model.z_vars.iter().chain(&model.w_vars).copied().collect() }
    }

    pub fn from_vars<I: IntoIterator<Item = VarId>>(vars: I) -> Self {
        Ambient { vars: vars.into_iter().collect() }
    }

    fn arity_of(&self, block: Block) -> Option<usize> {
        self.vars.iter().find(|v| v.block == block).map(VarId::arity)
    }

    fn contains(&self, v: VarId) -> bool {
        let h = VarId { kind: holomorphic_kind(v.kind), ..v };
        self.vars.contains(&h)
    }
}

fn holomorphic_kind(k: Kind) -> Kind {
    match k {
        Kind::Z | Kind::ZBar => Kind::Z,
        Kind::W | Kind::WBar => Kind::W,
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    line0: usize,
    ambient: &'a Ambient,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, line0: usize, ambient: &'a Ambient) -> Self {
        Parser { src: text.as_bytes(), pos: 0, line0, ambient }
    }

    fn err_at(&self, pos: usize, kind: ParseErrorKind) -> ParseError {
        let before = &self.src[..pos.min(self.src.len())];
        let line = before.iter().filter(|&&b| b == b'\n').count();
        let col = pos - before.iter().rposition(|&b| b == b'\n').map(|p| p + 1).unwrap_or(0) + 1;
        ParseError { line: self.line0 + line, col, kind }
    }

    fn syntax(&self, msg: impl Into<String>) -> ParseError {
        self.err_at(self.pos, ParseErrorKind::Syntax(msg.into()))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() {
            match self.src[self.pos] {
                b' ' | b'\t' | b'\r' | b'\n' => self.pos += 1,
                b'#' => {
                    while self.pos < self.src.len() && self.src[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                _ => break,
            }
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

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.syntax(format!("expected '{}'", c as char)))
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn nat(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.syntax("expected a number"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    fn small_nat(&mut self) -> Result<u32, ParseError> {
        let start = self.pos;
        let n = self.nat()?;
        u32::try_from(n).map_err(|_| self.err_at(start, ParseErrorKind::Syntax("number too large".into())))
    }

    fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        if start == self.pos {
            None
        } else {
            Some(String::from_utf8(self.src[start..self.pos].to_vec()).unwrap())
        }
    }

    /// `name[` already consumed up to the bracket.
    fn var_tail(&mut self, name: &str, start: usize) -> Result<VarId, ParseError> {
        self.expect(b'[')?;
        let mut idx = vec![self.small_nat()?];
        while self.eat(b',') {
            idx.push(self.small_nat()?);
        }
        self.expect(b']')?;
        let unknown = |p: &Self| p.err_at(start, ParseErrorKind::UnknownVariable(format!("{name}{idx:?}")));
        let (block, bar) = match name {
            "z" => (Block::Z, false),
            "u" => (Block::U, false),
            "v" => (Block::V, false),
            "w" => (Block::W, false),
            "zb" => (Block::Z, true),
            "ub" => (Block::U, true),
            "vb" => (Block::V, true),
            "wb" => (Block::W, true),
            _ => return Err(unknown(self)),
        };
        let expected = self.ambient.arity_of(block).ok_or_else(|| unknown(self))?;
        if expected != idx.len() || idx.len() > 2 {
            return Err(self.err_at(
                start,
                ParseErrorKind::IndexArity { name: name.to_string(), expected, found: idx.len() },
            ));
        }
        let to16 = |x: u32| u16::try_from(x).ok();
        let i = to16(idx[0]).ok_or_else(|| unknown(self))?;
        let j = match idx.get(1) {
            Some(&j) => Some(to16(j).ok_or_else(|| unknown(self))?),
            None => None,
        };
        let kind = match (block, bar) {
            (Block::W, false) => Kind::W,
            (Block::W, true) => Kind::WBar,
            (_, false) => Kind::Z,
            (_, true) => Kind::ZBar,
        };
        let v = VarId { kind, block, i, j };
        if !self.ambient.contains(v) {
            let display = format!("{v}");
            return Err(self.err_at(start, ParseErrorKind::UnknownVariable(display)));
        }
        Ok(v)
    }

    fn factor(&mut self) -> Result<Poly, ParseError> {
        let mut negate = false;
        while self.eat(b'-') {
            negate = !negate;
        }
        let base = match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let p = self.sum()?;
                self.expect(b')')?;
                p
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.nat()?;
                let den = if self.eat(b'/') { self.nat()? } else { BigInt::one() };
                if den.is_zero() {
                    return Err(self.syntax("zero denominator"));
                }
                Poly::constant(Gq::real(BigRational::new(num, den)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                let name = self.ident().unwrap();
                if name == "I" {
                    Poly::constant(Gq::i())
                } else if name == "D" {
                    return Err(self.err_at(start, ParseErrorKind::Syntax("unexpected D[...] in coefficient".into())));
                } else {
                    Poly::var(self.var_tail(&name, start)?)
                }
            }
            _ => return Err(self.syntax("expected a factor")),
        };
        let out = if self.eat(b'^') { base.pow(self.small_nat()?) } else { base };
        Ok(if negate { -&out } else { out })
    }

    fn product(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn sum(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.product()?;
        loop {
            if self.eat(b'+') {
                acc += &self.product()?;
            } else if self.eat(b'-') {
                acc -= &self.product()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn looking_at_deriv(&mut self) -> bool {
        self.skip_ws();
        self.src[self.pos..].starts_with(b"D[") || self.src[self.pos..].starts_with(b"D ")
    }

    fn deriv(&mut self) -> Result<VarId, ParseError> {
        self.skip_ws();
        let start = self.pos;
        match self.ident().as_deref() {
            Some("D") => {}
            _ => return Err(self.err_at(start, ParseErrorKind::Syntax("expected D[...]".into()))),
        }
        self.expect(b'[')?;
        let vstart = {
            self.skip_ws();
            self.pos
        };
        let name = self.ident().ok_or_else(|| self.syntax("expected a variable"))?;
        let v = self.var_tail(&name, vstart)?;
        self.expect(b']')?;
        if !v.is_holomorphic() {
            return Err(self.err_at(vstart, ParseErrorKind::NotHolomorphic(format!("{v}"))));
        }
        Ok(v)
    }

    fn term(&mut self, field: &mut VectorField, negate: bool) -> Result<(), ParseError> {
        let mut neg = negate;
        while self.eat(b'-') {
            neg = !neg;
        }
        let coef_start = self.pos;
        let coef = if self.looking_at_deriv() {
            Poly::one()
        } else {
            let mut c = self.factor()?;
            loop {
                if !self.eat(b'*') {
                    return Err(self.syntax("expected '*' before D[...]"));
                }
                if self.looking_at_deriv() {
                    break c;
                }
                c = &c * &self.factor()?;
            }
        };
        let v = self.deriv()?;
        if !coef.is_holomorphic() {
            return Err(self.err_at(coef_start, ParseErrorKind::NotHolomorphic(format!("{v}"))));
        }
        field.add_component(v, &if neg { -&coef } else { coef });
        Ok(())
    }

    fn field(&mut self) -> Result<VectorField, ParseError> {
        let mut f = VectorField::zero();
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let trimmed: Vec<u8> = rest.iter().copied().filter(|b| !b.is_ascii_whitespace()).collect();
        if trimmed == b"0" {
            self.pos = self.src.len();
            return Ok(f);
        }
        self.term(&mut f, false)?;
        loop {
            if self.eat(b'+') {
                self.term(&mut f, false)?;
            } else if self.eat(b'-') {
                self.term(&mut f, true)?;
            } else if self.at_end() {
                return Ok(f);
            } else {
                return Err(self.syntax("expected '+', '-' or end of input"));
            }
        }
    }
}

/// Parse a vector field over the coordinates of `ambient`.
pub fn parse_field(text: &str, ambient: &Ambient) -> Result<VectorField, ParseError> {
    Parser::new(text, 1, ambient).field()
}

/// Parse a polynomial (conjugate variables `zb[..]`, `wb[..]` allowed).
pub fn parse_poly(text: &str, ambient: &Ambient) -> Result<Poly, ParseError> {
    let mut p = Parser::new(text, 1, ambient);
    let out = p.sum()?;
    if !p.at_end() {
        return Err(p.syntax("trailing input"));
    }
    Ok(out)
}

/// One `name := field` entry of a generator file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixtureEntry {
    pub name: String,
    pub line: usize,
    pub field: VectorField,
}

/// Parse a generator file: one `name := field` per line, `#` comments.
pub fn parse_fixture(text: &str, ambient: &Ambient) -> Result<Vec<FixtureEntry>, ParseError> {
    let mut out = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let Some((name, expr)) = content.split_once(":=") else {
            return Err(ParseError { line, col: 1, kind: ParseErrorKind::Syntax("expected 'name := field'".into()) });
        };
        let name = name.trim();
        if name.is_empty() {
            return Err(ParseError { line, col: 1, kind: ParseErrorKind::Syntax("empty generator name".into()) });
        }
        let offset = content.find(":=").unwrap() + 2;
        let field = Parser::new(expr, line, ambient).field().map_err(|mut e| {
            if e.line == line {
                e.col += offset;
            }
            e
        })?;
        out.push(FixtureEntry { name: name.to_string(), line, field });
    }
    Ok(out)
}

fn rat(r: &BigRational) -> String {
    crate::exact::rational_string(r)
}

/// Sign and body of a scalar; `None` body means the scalar is `±1`.
fn scalar_parts(c: &Gq) -> (bool, Option<String>) {
    let (re, im) = (c.re(), c.im());
    if im.is_zero() {
        let neg = re.is_negative();
        let a = re.abs();
        (neg, if a.is_one() { None } else { Some(rat(&a)) })
    } else if re.is_zero() {
        let neg = im.is_negative();
        let b = im.abs();
        (neg, Some(if b.is_one() { "I".into() } else { format!("{}*I", rat(&b)) }))
    } else {
        let b = if im.is_negative() {
            format!("-{}", imag_body(&im.abs()))
        } else {
            format!("+{}", imag_body(im))
        };
        (false, Some(format!("({}{})", rat(re), b)))
    }
}

fn imag_body(b: &BigRational) -> String {
    if b.is_one() {
        "I".into()
    } else {
        format!("{}*I", rat(b))
    }
}

fn monomial_body(m: &Monomial) -> Vec<String> {
    m.factors()
        .iter()
        .map(|(v, e)| if *e == 1 { format!("{v}") } else { format!("{v}^{e}") })
        .collect()
}

fn push_term(out: &mut String, neg: bool, body: String) {
    if out.is_empty() {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    out.push_str(&body);
}

/// Canonical text of a field; the zero field prints as `0`.
pub fn print_field(f: &VectorField) -> String {
    let mut out = String::new();
    for (v, m, c) in f.terms() {
        let (neg, scalar) = scalar_parts(c);
        let mut parts: Vec<String> = scalar.into_iter().collect();
        parts.extend(monomial_body(m));
        parts.push(format!("D[{v}]"));
        push_term(&mut out, neg, parts.join("*"));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Canonical text of a polynomial.
pub fn print_poly(p: &Poly) -> String {
    let mut out = String::new();
    for (m, c) in p.terms() {
        let (neg, scalar) = scalar_parts(c);
        let mut parts: Vec<String> = scalar.into_iter().collect();
        parts.extend(monomial_body(m));
        if parts.is_empty() {
            parts.push("1".into());
        }
        push_term(&mut out, neg, parts.join("*"));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

//! Exact Gaussian-rational scalars and sparse multivariate polynomials.
//!
//! Variables come in four kinds (holomorphic `z`, `w` and their formal
//! conjugates). Every polynomial is kept in canonical sparse form: no
//! zero coefficients and no zero exponents are ever stored.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid substitution: {0}")]
    InvalidSubstitution(String),
}

// ---------------------------------------------------------------------------
// Gaussian rationals
// ---------------------------------------------------------------------------

/// Exact complex number `re + im*i` with rational parts.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Gq {
    re: BigRational,
    im: BigRational,
}

impl Gq {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Gq { re, im }
    }

    pub fn zero() -> Self {
        Gq::default()
    }

    pub fn one() -> Self {
        Gq::int(1)
    }

    pub fn i() -> Self {
        Gq::new(BigRational::zero(), BigRational::one())
    }

    pub fn int(n: i64) -> Self {
        Gq::real(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn real(re: BigRational) -> Self {
        Gq::new(re, BigRational::zero())
    }

    pub fn frac(num: i64, den: i64) -> Self {
        Gq::real(BigRational::new(num.into(), den.into()))
    }

    /// `a + b*i` from small integers.
    pub fn gauss(a: i64, b: i64) -> Self {
        Gq::new(
            BigRational::from_integer(a.into()),
            BigRational::from_integer(b.into()),
        )
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Gq {
        Gq::new(self.re.clone(), -self.im.clone())
    }

    /// Squared modulus `re² + im²`.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Result<Gq, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        let n = self.norm_sqr();
        Ok(Gq::new(&self.re / &n, -(&self.im / &n)))
    }

    pub fn scale_real(&self, r: &BigRational) -> Gq {
        Gq::new(&self.re * r, &self.im * r)
    }

    /// Multiply by `i`.
    pub fn times_i(&self) -> Gq {
        Gq::new(-self.im.clone(), self.re.clone())
    }
}

impl fmt::Display for Gq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}*I", self.im),
            _ => {
                if self.im.is_negative() {
                    write!(f, "({}-{}*I)", self.re, -self.im.clone())
                } else {
                    write!(f, "({}+{}*I)", self.re, self.im)
                }
            }
        }
    }
}

impl<'a> Add<&'a Gq> for &'a Gq {
    type Output = Gq;
    fn add(self, o: &Gq) -> Gq {
        Gq::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl<'a> Sub<&'a Gq> for &'a Gq {
    type Output = Gq;
    fn sub(self, o: &Gq) -> Gq {
        Gq::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl<'a> Mul<&'a Gq> for &'a Gq {
    type Output = Gq;
    fn mul(self, o: &Gq) -> Gq {
        if self.im.is_zero() && o.im.is_zero() {
            return Gq::real(&self.re * &o.re);
        }
        Gq::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Neg for &Gq {
    type Output = Gq;
    fn neg(self) -> Gq {
        Gq::new(-self.re.clone(), -self.im.clone())
    }
}

impl Neg for Gq {
    type Output = Gq;
    fn neg(self) -> Gq {
        Gq::new(-self.re, -self.im)
    }
}

impl Add for Gq {
    type Output = Gq;
    fn add(self, o: Gq) -> Gq {
        &self + &o
    }
}

impl Sub for Gq {
    type Output = Gq;
    fn sub(self, o: Gq) -> Gq {
        &self - &o
    }
}

impl Mul for Gq {
    type Output = Gq;
    fn mul(self, o: Gq) -> Gq {
        &self * &o
    }
}

impl AddAssign<&Gq> for Gq {
    fn add_assign(&mut self, o: &Gq) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl SubAssign<&Gq> for Gq {
    fn sub_assign(&mut self, o: &Gq) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GqOp {
    Add,
    Mul,
    Neg,
    Inv,
    Conj,
}

/// Dispatch form of the scalar operations; binary ops read `y` (missing = 0).
pub fn gq_arith(op: GqOp, x: &Gq, y: Option<&Gq>) -> Result<Gq, ExactError> {
    let zero = Gq::zero();
    let y = y.unwrap_or(&zero);
    Ok(match op {
        GqOp::Add => x + y,
        GqOp::Mul => x * y,
        GqOp::Neg => -x,
        GqOp::Inv => x.inv()?,
        GqOp::Conj => x.conj(),
    })
}

// ---------------------------------------------------------------------------
// Variables
// ---------------------------------------------------------------------------

/// Variable kind. Declaration order is the block order of the variable order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Kind {
    Z,
    ZBar,
    W,
    WBar,
}

/// Block tag inside a kind; `z < u < v` for the z-kind blocks.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Block {
    Z,
    U,
    V,
    W,
}

impl Block {
    pub fn letter(self) -> &'static str {
        match self {
            Block::Z => "z",
            Block::U => "u",
            Block::V => "v",
            Block::W => "w",
        }
    }
}

/// A coordinate: kind, block tag and a one- or two-component index.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct VarId {
    pub kind: Kind,
    pub block: Block,
    pub i: u16,
    pub j: Option<u16>,
}

impl VarId {
    pub fn z(i: u16) -> Self {
        VarId { kind: Kind::Z, block: Block::Z, i, j: None }
    }

    pub fn w(i: u16) -> Self {
        VarId { kind: Kind::W, block: Block::W, i, j: None }
    }

    /// Two-index variable of a holomorphic block (`z`, `u`, `v` or `w`).
    pub fn pair(block: Block, i: u16, j: u16) -> Self {
        let kind = if block == Block::W { Kind::W } else { Kind::Z };
        VarId { kind, block, i, j: Some(j) }
    }

    pub fn is_holomorphic(&self) -> bool {
        matches!(self.kind, Kind::Z | Kind::W)
    }

    pub fn is_w_like(&self) -> bool {
        matches!(self.kind, Kind::W | Kind::WBar)
    }

    pub fn weight(&self) -> u32 {
        if self.is_w_like() {
            2
        } else {
            1
        }
    }

    pub fn conj(&self) -> Self {
        let kind = match self.kind {
            Kind::Z => Kind::ZBar,
            Kind::ZBar => Kind::Z,
            Kind::W => Kind::WBar,
            Kind::WBar => Kind::W,
        };
        VarId { kind, ..*self }
    }

    pub fn arity(&self) -> usize {
        if self.j.is_some() {
            2
        } else {
            1
        }
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bar = matches!(self.kind, Kind::ZBar | Kind::WBar);
        write!(f, "{}{}[{}", self.block.letter(), if bar { "b" } else { "" }, self.i)?;
        if let Some(j) = self.j {
            write!(f, ",{j}")?;
        }
        write!(f, "]")
    }
}

// ---------------------------------------------------------------------------
// Monomials
// ---------------------------------------------------------------------------

/// Product of variable powers, sorted by variable, exponents positive.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(Vec<(VarId, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: VarId) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn pow(v: VarId, e: u32) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(v, e)])
        }
    }

    /// Build from arbitrary (var, exp) pairs, merging repeats.
    pub fn from_pairs<I: IntoIterator<Item = (VarId, u32)>>(pairs: I) -> Self {
        let mut map: BTreeMap<VarId, u32> = BTreeMap::new();
        for (v, e) in pairs {
            *map.entry(v).or_insert(0) += e;
        }
        Monomial(map.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(VarId, u32)] {
        &self.0
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().map(|(v, e)| v.weight() * e).sum()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, v: VarId) -> u32 {
        match self.0.binary_search_by(|(u, _)| u.cmp(&v)) {
            Ok(k) => self.0[k].1,
            Err(_) => 0,
        }
    }

    pub fn is_holomorphic(&self) -> bool {
        self.0.iter().all(|(v, _)| v.is_holomorphic())
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut x, mut y) = (0, 0);
        while x < a.len() && y < b.len() {
            match a[x].0.cmp(&b[y].0) {
                Ordering::Less => {
                    out.push(a[x]);
                    x += 1;
                }
                Ordering::Greater => {
                    out.push(b[y]);
                    y += 1;
                }
                Ordering::Equal => {
                    out.push((a[x].0, a[x].1 + b[y].1));
                    x += 1;
                    y += 1;
                }
            }
        }
        out.extend_from_slice(&a[x..]);
        out.extend_from_slice(&b[y..]);
        Monomial(out)
    }

    /// Exponent of `v` and the monomial with one factor of `v` removed.
    pub fn lower(&self, v: VarId) -> Option<(u32, Monomial)> {
        let k = self.0.binary_search_by(|(u, _)| u.cmp(&v)).ok()?;
        let e = self.0[k].1;
        let mut rest = self.0.clone();
        if e == 1 {
            rest.remove(k);
        } else {
            rest[k].1 -= 1;
        }
        Some((e, Monomial(rest)))
    }

    pub fn conj(&self) -> Monomial {
        Monomial::from_pairs(self.0.iter().map(|&(v, e)| (v.conj(), e)))
    }

    /// Split into the factors satisfying `pred` and the rest.
    pub fn split<F: Fn(&VarId) -> bool>(&self, pred: F) -> (Monomial, Monomial) {
        let (a, b): (Vec<_>, Vec<_>) = self.0.iter().partition(|(v, _)| pred(v));
        (Monomial(a), Monomial(b))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, (v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Polynomials
// ---------------------------------------------------------------------------

/// Sparse polynomial with Gaussian-rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Gq>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Gq::one())
    }

    pub fn constant(c: Gq) -> Self {
        Poly::term(Monomial::one(), c)
    }

    pub fn var(v: VarId) -> Self {
        Poly::term(Monomial::var(v), Gq::one())
    }

    pub fn term(m: Monomial, c: Gq) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    /// Collect terms, summing repeated monomials and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Gq)>>(iter: I) -> Self {
        let mut p = Poly::zero();
        for (m, c) in iter {
            p.add_term(m, &c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: &Gq) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Gq)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Gq {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn scale(&self, c: &Gq) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    /// Multiply every term by a monomial.
    pub fn shift(&self, m: &Monomial) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(t, a)| (t.mul(m), a.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn conj(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.conj(), c.conj())).collect(),
        }
    }

    pub fn is_holomorphic(&self) -> bool {
        self.terms.keys().all(Monomial::is_holomorphic)
    }

    /// Formal partial derivative, every variable independent.
    pub fn partial(&self, v: VarId) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            if let Some((e, rest)) = m.lower(v) {
                let factor = Gq::int(e as i64);
                out.add_term(rest, &(c * &factor));
            }
        }
        out
    }

    /// Replace bound variables by polynomials in one pass.
    ///
    /// Fails if some right-hand side mentions a bound variable.
    pub fn substitute(&self, bindings: &BTreeMap<VarId, Poly>) -> Result<Poly, ExactError> {
        for (v, rhs) in bindings {
            for m in rhs.terms.keys() {
                if let Some((u, _)) = m.factors().iter().find(|(u, _)| bindings.contains_key(u)) {
                    return Err(ExactError::InvalidSubstitution(format!(
                        "binding for {v} mentions bound variable {u}"
                    )));
                }
            }
        }
        let mut powers: HashMap<(VarId, u32), Poly> = HashMap::new();
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let (bound, free) = m.split(|v| bindings.contains_key(v));
            let mut acc = Poly::term(free, c.clone());
            for &(v, e) in bound.factors() {
                let p = powers
                    .entry((v, e))
                    .or_insert_with(|| bindings[&v].pow(e));
                acc = &acc * &*p;
            }
            out += &acc;
        }
        Ok(out)
    }

    /// Weights of all monomials present.
    pub fn weights(&self) -> std::collections::BTreeSet<u32> {
        self.terms.keys().map(Monomial::weight).collect()
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let mut out = self.clone();
        out += o;
        out
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let mut out = self.clone();
        out -= o;
        out
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                out.add_term(ma.mul(mb), &(ca * cb));
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, o: &Poly) {
        for (m, c) in &o.terms {
            self.add_term(m.clone(), c);
        }
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, o: &Poly) {
        for (m, c) in &o.terms {
            self.add_term(m.clone(), &-c);
        }
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, o: Poly) -> Poly {
        self += &o;
        self
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(mut self, o: Poly) -> Poly {
        self -= &o;
        self
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, o: Poly) -> Poly {
        &self * &o
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{c}*{m}")?;
            }
        }
        Ok(())
    }
}

/// Second operand of [`poly_arith`].
pub enum PolyOperand<'a> {
    Poly(&'a Poly),
    Scalar(&'a Gq),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Mul,
    Scale,
    Neg,
}

/// Dispatch form of the polynomial ring operations; a missing operand is 0.
pub fn poly_arith(op: PolyOp, p: &Poly, q: Option<PolyOperand<'_>>) -> Poly {
    let q = match q {
        Some(PolyOperand::Poly(q)) => q.clone(),
        Some(PolyOperand::Scalar(c)) => Poly::constant(c.clone()),
        None => Poly::zero(),
    };
    match op {
        PolyOp::Add => p + &q,
        PolyOp::Mul | PolyOp::Scale => p * &q,
        PolyOp::Neg => -p,
    }
}

pub fn poly_partial(p: &Poly, v: VarId) -> Poly {
    p.partial(v)
}

pub fn poly_substitute(p: &Poly, bindings: &BTreeMap<VarId, Poly>) -> Result<Poly, ExactError> {
    p.substitute(bindings)
}

/// Render a rational as `"n"` or `"n/d"`.
pub fn rational_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

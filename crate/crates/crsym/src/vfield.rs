//! Holomorphic polynomial vector fields.

use crate::exact::{Gq, Monomial, Poly, VarId};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("component along {0} is not a holomorphic direction")]
    BadTarget(VarId),
    #[error("component along {0} has antiholomorphic coefficients")]
    NotHolomorphic(VarId),
}

/// `Σ P_v ∂_v` over holomorphic coordinates `v`, with holomorphic `P_v`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct VectorField {
    components: BTreeMap<VarId, Poly>,
}

/// A field together with the weight it is homogeneous of.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeightedField {
    pub weight: i32,
    pub field: VectorField,
}

impl VectorField {
    pub fn zero() -> Self {
        VectorField::default()
    }

    /// The coordinate field `∂_v`.
    pub fn coordinate(v: VarId) -> Self {
        VectorField::zero().with(v, Poly::one())
    }

    pub fn from_components<I>(components: I) -> Result<Self, FieldError>
    where
        I: IntoIterator<Item = (VarId, Poly)>,
    {
        let mut f = VectorField::zero();
        for (v, p) in components {
            if !v.is_holomorphic() {
                return Err(FieldError::BadTarget(v));
            }
            if !p.is_holomorphic() {
                return Err(FieldError::NotHolomorphic(v));
            }
            f.add_component(v, &p);
        }
        Ok(f)
    }

    /// Add `p ∂_v`. Both must be holomorphic (checked in debug builds).
    pub fn add_component(&mut self, v: VarId, p: &Poly) {
        debug_assert!(v.is_holomorphic() && p.is_holomorphic());
        let slot = self.components.entry(v).or_default();
        *slot += p;
        if slot.is_zero() {
            self.components.remove(&v);
        }
    }

    /// Builder form of [`add_component`](Self::add_component).
    pub fn with(mut self, v: VarId, p: Poly) -> Self {
        self.add_component(v, &p);
        self
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn component(&self, v: VarId) -> Option<&Poly> {
        self.components.get(&v)
    }

    pub fn components(&self) -> impl Iterator<Item = (&VarId, &Poly)> {
        self.components.iter()
    }

    /// Every (target, monomial, coefficient) triple.
    pub fn terms(&self) -> impl Iterator<Item = (VarId, &Monomial, &Gq)> {
        self.components
            .iter()
            .flat_map(|(v, p)| p.terms().map(move |(m, c)| (*v, m, c)))
    }

    pub fn scale(&self, c: &Gq) -> VectorField {
        if c.is_zero() {
            return VectorField::zero();
        }
        VectorField {
            components: self.components.iter().map(|(v, p)| (*v, p.scale(c))).collect(),
        }
    }

    /// Derivative of `p` along the field.
    pub fn apply(&self, p: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (v, comp) in &self.components {
            let d = p.partial(*v);
            if !d.is_zero() {
                out += &(comp * &d);
            }
        }
        out
    }

    /// Lie bracket `[self, other]`.
    pub fn bracket(&self, other: &VectorField) -> VectorField {
        let mut out = VectorField::zero();
        let targets: std::collections::BTreeSet<VarId> = self
            .components
            .keys()
            .chain(other.components.keys())
            .copied()
            .collect();
        for v in targets {
            let mut c = Poly::zero();
            if let Some(q) = other.components.get(&v) {
                c += &self.apply(q);
            }
            if let Some(p) = self.components.get(&v) {
                c -= &other.apply(p);
            }
            if !c.is_zero() {
                out.components.insert(v, c);
            }
        }
        out
    }

    /// Weight-homogeneous parts, in increasing weight.
    pub fn weight_decompose(&self) -> Vec<WeightedField> {
        let mut parts: BTreeMap<i32, VectorField> = BTreeMap::new();
        for (v, m, c) in self.terms() {
            let k = term_weight(v, m);
            parts
                .entry(k)
                .or_default()
                .add_component(v, &Poly::term(m.clone(), c.clone()));
        }
        parts
            .into_iter()
            .map(|(weight, field)| WeightedField { weight, field })
            .collect()
    }

    /// The common weight of all terms, if there is exactly one.
    pub fn weight(&self) -> Option<i32> {
        let parts = self.weight_decompose();
        match parts.as_slice() {
            [one] => Some(one.weight),
            _ => None,
        }
    }

    pub fn is_homogeneous(&self, k: i32) -> bool {
        self.is_zero() || self.weight() == Some(k)
    }
}

/// Weight of the term `m ∂_v`.
pub fn term_weight(v: VarId, m: &Monomial) -> i32 {
    m.weight() as i32 - v.weight() as i32
}

pub fn apply(l: &VectorField, p: &Poly) -> Poly {
    l.apply(p)
}

pub fn bracket(x: &VectorField, y: &VectorField) -> VectorField {
    x.bracket(y)
}

pub fn weight_decompose(l: &VectorField) -> Vec<WeightedField> {
    l.weight_decompose()
}

pub fn is_homogeneous(l: &VectorField, k: i32) -> bool {
    l.is_homogeneous(k)
}

impl<'a> Add<&'a VectorField> for &'a VectorField {
    type Output = VectorField;
    fn add(self, o: &VectorField) -> VectorField {
        let mut out = self.clone();
        for (v, p) in &o.components {
            out.add_component(*v, p);
        }
        out
    }
}

impl<'a> Sub<&'a VectorField> for &'a VectorField {
    type Output = VectorField;
    fn sub(self, o: &VectorField) -> VectorField {
        self + &-o
    }
}

impl Neg for &VectorField {
    type Output = VectorField;
    fn neg(self) -> VectorField {
        VectorField {
            components: self.components.iter().map(|(v, p)| (*v, -p)).collect(),
        }
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::dsl::print_field(self))
    }
}

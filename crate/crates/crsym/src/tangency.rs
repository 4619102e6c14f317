//! Membership test for the symmetry algebra: is `L + L̄` tangent to the quadric?

use crate::exact::{Poly, VarId};
use crate::quadric::QuadricModel;
use crate::vfield::VectorField;
use std::collections::BTreeMap;

/// Conjugate data `Σ conj(P_v)(z̄, w̄) ∂_{v̄}` of a holomorphic field.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct AntiField {
    components: BTreeMap<VarId, Poly>,
}

impl AntiField {
    pub fn components(&self) -> impl Iterator<Item = (&VarId, &Poly)> {
        self.components.iter()
    }

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

    /// Undo the conjugation.
    pub fn conj(&self) -> VectorField {
        let mut f = VectorField::zero();
        for (v, p) in &self.components {
            f.add_component(v.conj(), &p.conj());
        }
        f
    }
}

pub fn conjugate_field_formally(l: &VectorField) -> AntiField {
    AntiField {
        components: l.components().map(|(v, p)| (v.conj(), p.conj())).collect(),
    }
}

/// Per-equation remainders of `(L + L̄)ρ_j` on the quadric.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TangencyDefect {
    pub per_equation: Vec<Poly>,
}

impl TangencyDefect {
    pub fn is_zero(&self) -> bool {
        self.per_equation.iter().all(Poly::is_zero)
    }

    /// Zero-based indices of the equations with a nonzero remainder.
    pub fn failing_equations(&self) -> Vec<usize> {
        self.per_equation
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(k, _)| k)
            .collect()
    }
}

/// For each equation, `(Lρ, L̄ρ)` with every `w̄` eliminated.
///
/// The defect of `c·L` for a complex scalar `c` is `c·Lρ + c̄·L̄ρ`.
pub fn defect_parts(l: &VectorField, model: &QuadricModel) -> Vec<(Poly, Poly)> {
    let bindings = model.wbar_bindings();
    let anti = conjugate_field_formally(l);
    model
        .equations
        .iter()
        .map(|e| {
            let rho = e.rho();
            let hol = l.apply(&rho);
            let anti_part = anti
                .apply(&rho)
                .substitute(&bindings)
                .expect("elimination rules never mention conjugated w");
            (hol, anti_part)
        })
        .collect()
}

pub fn defect(l: &VectorField, model: &QuadricModel) -> TangencyDefect {
    TangencyDefect {
        per_equation: defect_parts(l, model).into_iter().map(|(p, q)| p + q).collect(),
    }
}

pub fn is_symmetry(l: &VectorField, model: &QuadricModel) -> bool {
    defect(l, model).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{Block, Gq};
    use crate::quadric::{build_e2, build_e3, build_so};

    fn dw(i: u16) -> VectorField {
        VectorField::coordinate(VarId::w(i))
    }

    #[test]
    fn conjugation() {
        let f = dw(1).scale(&Gq::i());
        let a = conjugate_field_formally(&f);
        let comps: Vec<_> = a.components().collect();
        assert_eq!(comps.len(), 1);
        assert_eq!(*comps[0].0, VarId::w(1).conj());
        assert_eq!(*comps[0].1, Poly::constant(-Gq::i()));

        let g = VectorField::coordinate(VarId::z(1)).with(VarId::w(1), Poly::var(VarId::z(4)));
        let a = conjugate_field_formally(&g);
        let comps: BTreeMap<_, _> = a.components().map(|(v, p)| (*v, p.clone())).collect();
        assert_eq!(comps[&VarId::z(1).conj()], Poly::one());
        assert_eq!(comps[&VarId::w(1).conj()], Poly::var(VarId::z(4).conj()));
        assert_eq!(a.conj(), g);
    }

    #[test]
    fn translations_of_e2() {
        let m = build_e2();
        assert!(defect(&dw(1).scale(&Gq::i()), &m).is_zero());
        let d = defect(&dw(1), &m);
        assert_eq!(d.per_equation[0], Poly::constant(Gq::int(2)));
        assert_eq!(d.failing_equations(), vec![0]);
    }

    #[test]
    fn so2_translation_is_tangent() {
        let m = build_so(2).unwrap();
        let w12 = VarId::pair(Block::W, 1, 2);
        let l = VectorField::coordinate(VarId::z(1)).with(w12, -&Poly::var(VarId::z(2)));
        assert!(is_symmetry(&l, &m));
    }

    #[test]
    fn plain_translation_breaks_e3() {
        let m = build_e3();
        assert!(!is_symmetry(&VectorField::coordinate(VarId::z(1)), &m));
        assert!(is_symmetry(&VectorField::zero(), &m));
    }

    #[test]
    fn scale_invariance() {
        let m = build_so(2).unwrap();
        let m2 = m.with_scaled_equation(0, &Gq::int(2));
        let w12 = VarId::pair(Block::W, 1, 2);
        let l = VectorField::coordinate(VarId::z(1)).with(w12, -&Poly::var(VarId::z(2)));
        let l2 = VectorField::coordinate(VarId::z(1)).with(w12, Poly::var(VarId::z(2)).scale(&Gq::int(-2)));
        assert!(is_symmetry(&l, &m) && !is_symmetry(&l, &m2));
        assert!(is_symmetry(&l2, &m2) && !is_symmetry(&l2, &m));
    }
}

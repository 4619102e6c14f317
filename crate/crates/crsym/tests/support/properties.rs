//! Random inputs and exact algebraic identities shared by the property suites.

#![allow(dead_code)]

use crsym::dsl::{self, Ambient};
use crsym::exact::{Gq, Monomial, Poly, VarId};
use crsym::generators::{self, GeneratorSet};
use crsym::liealg;
use crsym::quadric;
use crsym::vfield::VectorField;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use std::collections::BTreeMap;

pub fn gq() -> impl Strategy<Value = Gq> {
    (-3i64..=3, -3i64..=3, 1i64..=3).prop_map(|(a, b, d)| &Gq::frac(a, d) + &Gq::frac(b, d).times_i())
}

pub fn any_vars() -> Vec<VarId> {
    vec![VarId::z(1), VarId::z(2), VarId::z(1).conj(), VarId::w(1), VarId::w(1).conj()]
}

pub fn holomorphic_vars() -> Vec<VarId> {
    vec![VarId::z(1), VarId::z(2), VarId::w(1)]
}

pub fn poly_over(vars: Vec<VarId>) -> impl Strategy<Value = Poly> {
    let n = vars.len();
    prop::collection::vec((gq(), prop::collection::vec(0u32..=2, n)), 0..=4).prop_map(move |terms| {
        Poly::from_terms(
            terms.into_iter().map(|(c, e)| (Monomial::from_pairs(vars.iter().copied().zip(e)), c)),
        )
    })
}

pub fn poly() -> impl Strategy<Value = Poly> {
    poly_over(any_vars())
}

pub fn field() -> impl Strategy<Value = VectorField> {
    let h = || poly_over(holomorphic_vars());
    (h(), h(), h()).prop_map(|(a, b, c)| {
        VectorField::zero().with(VarId::z(1), a).with(VarId::z(2), b).with(VarId::w(1), c)
    })
}

fn check(ok: bool, what: &str) -> Result<(), TestCaseError> {
    if ok {
        Ok(())
    } else {
        Err(TestCaseError::fail(what.to_string()))
    }
}

pub fn ring_axioms(p: &Poly, q: &Poly, r: &Poly) -> Result<(), TestCaseError> {
    check(&(p + q) + r == p + &(q + r), "associative sum")?;
    check(&(p * q) * r == p * &(q * r), "associative product")?;
    check(p * q == q * p, "commutative product")?;
    check(p * &(q + r) == &(p * q) + &(p * r), "distributive")?;
    check((p + &-p).is_zero(), "additive inverse")?;
    check(p * &Poly::one() == *p, "unit")
}

pub fn scalar_field_axioms(a: &Gq, b: &Gq) -> Result<(), TestCaseError> {
    check(&(a * b) - &(b * a) == Gq::zero(), "commutative")?;
    check((a * &b.conj()).conj() == &a.conj() * b, "conjugation")?;
    if !a.is_zero() {
        check(&(a * &a.inv().unwrap()) == &Gq::one(), "inverse")?;
    }
    Ok(())
}

pub fn partial_is_derivation(p: &Poly, q: &Poly) -> Result<(), TestCaseError> {
    for v in any_vars() {
        let lhs = (p * q).partial(v);
        let rhs = &(&p.partial(v) * q) + &(p * &q.partial(v));
        check(lhs == rhs, "Leibniz rule")?;
    }
    Ok(())
}

/// `w̄1 ↦ b` with `b` free of `w̄1`.
pub fn substitution_is_homomorphism(p: &Poly, q: &Poly, b: &Poly) -> Result<(), TestCaseError> {
    let bar = VarId::w(1).conj();
    let bindings: BTreeMap<VarId, Poly> = [(bar, b.clone())].into();
    let s = |x: &Poly| x.substitute(&bindings).unwrap();
    check(s(&(p * q)) == &s(p) * &s(q), "multiplicative")?;
    check(s(&(p + q)) == &s(p) + &s(q), "additive")?;
    check(p.substitute(&BTreeMap::new()).unwrap() == *p, "empty binding")
}

pub fn canonical_idempotent(p: &Poly) -> Result<(), TestCaseError> {
    let again = Poly::from_terms(p.terms().map(|(m, c)| (m.clone(), c.clone())));
    check(again == *p, "renormalizing")
}

pub fn bracket_axioms(x: &VectorField, y: &VectorField, z: &VectorField) -> Result<(), TestCaseError> {
    check(x.bracket(y) == -&y.bracket(x), "antisymmetry")?;
    let jacobi = &(&x.bracket(&y.bracket(z)) + &y.bracket(&z.bracket(x))) + &z.bracket(&x.bracket(y));
    check(jacobi.is_zero(), "Jacobi")
}

pub fn apply_is_derivation(x: &VectorField, p: &Poly, q: &Poly) -> Result<(), TestCaseError> {
    let lhs = x.apply(&(p * q));
    let rhs = &(&x.apply(p) * q) + &(p * &x.apply(q));
    check(lhs == rhs, "field acts as a derivation")
}

pub fn weight_parts_reconstruct(x: &VectorField) -> Result<(), TestCaseError> {
    let parts = x.weight_decompose();
    let sum = parts.iter().fold(VectorField::zero(), |acc, p| &acc + &p.field);
    check(sum == *x, "weight parts sum to the field")?;
    check(parts.iter().all(|p| p.field.is_homogeneous(p.weight)), "parts homogeneous")
}

pub fn field_round_trip(x: &VectorField) -> Result<(), TestCaseError> {
    let ambient = Ambient::of_model(&quadric::build_e2());
    let back = dsl::parse_field(&dsl::print_field(x), &ambient).map_err(|e| TestCaseError::fail(e.to_string()))?;
    check(back == *x, "print then parse")
}

/// Triples of basis elements violating invariance of the Killing form.
pub fn killing_invariance_failures(set: &GeneratorSet) -> usize {
    let basis: Vec<VectorField> = set.iter().map(|g| g.effective().clone()).collect();
    let sc = liealg::structure_constants(&basis).expect("generators form a basis");
    let k = liealg::killing(&sc);
    liealg::killing_invariance_failures(&sc, &k)
}

/// Fixture lines whose parse, print, parse cycle changes the field.
pub fn fixture_round_trip_failures() -> (usize, usize) {
    let mut lines = 0;
    let mut bad = 0;
    for (family, model) in [(quadric::Family::E2, quadric::build_e2()), (quadric::Family::E3, quadric::build_e3())] {
        let ambient = Ambient::of_model(&model);
        let text = generators::fixture_text(&family).expect("fixture exists");
        for entry in dsl::parse_fixture(text, &ambient).expect("fixture parses") {
            lines += 1;
            let printed = dsl::print_field(&entry.field);
            if dsl::parse_field(&printed, &ambient).ok().as_ref() != Some(&entry.field) {
                bad += 1;
            }
        }
    }
    (lines, bad)
}

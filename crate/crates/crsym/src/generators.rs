//! Explicit generator lists for the catalog models.
//!
//! E_II and E_III come from fixture files in the field grammar of [`crate::dsl`].
//! The so and su families are expanded from their summation formulas.

mod so;
mod su;

use crate::dsl::{self, Ambient, ParseError};
use crate::exact::{Gq, Poly, VarId};
use crate::quadric::{self, Family, ModelError, QuadricModel};
use crate::vfield::VectorField;
use std::collections::BTreeMap;
use thiserror::Error;

pub use so::gens_so;
pub use su::gens_su;

const E2_FIXTURE: &str = include_str!("../fixtures/e2.gens");
const E3_FIXTURE: &str = include_str!("../fixtures/e3.gens");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeneratorError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("fixture: {0}")]
    Fixture(#[from] ParseError),
    #[error("generator {name} is not homogeneous of weight {weight}")]
    NotHomogeneous { name: String, weight: i32 },
}

/// Index repair applied to a displayed formula whose literal reading is not a symmetry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Repair {
    pub note: String,
    pub field: VectorField,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedGenerator {
    pub name: String,
    pub weight: i32,
    /// The formula read literally.
    pub field: VectorField,
    pub repair: Option<Repair>,
}

impl NamedGenerator {
    pub fn new(name: impl Into<String>, weight: i32, field: VectorField) -> Self {
        NamedGenerator { name: name.into(), weight, field, repair: None }
    }

    fn repaired(mut self, note: impl Into<String>, field: VectorField) -> Self {
        self.repair = Some(Repair { note: note.into(), field });
        self
    }

    /// The repaired field when a repair exists, else the literal one.
    pub fn effective(&self) -> &VectorField {
        self.repair.as_ref().map_or(&self.field, |r| &r.field)
    }
}

/// A named real-linear combination of generators, such as the dilation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Combination {
    pub name: String,
    pub terms: Vec<(String, Gq)>,
    pub field: VectorField,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSet {
    pub model: QuadricModel,
    pub per_weight: BTreeMap<i32, Vec<NamedGenerator>>,
    pub combinations: Vec<Combination>,
}

impl GeneratorSet {
    fn new(model: QuadricModel) -> Self {
        GeneratorSet { model, per_weight: BTreeMap::new(), combinations: Vec::new() }
    }

    fn push(&mut self, g: NamedGenerator) {
        self.per_weight.entry(g.weight).or_default().push(g);
    }

    pub fn count(&self, k: i32) -> usize {
        self.per_weight.get(&k).map_or(0, Vec::len)
    }

    pub fn len(&self) -> usize {
        self.per_weight.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn weight(&self, k: i32) -> &[NamedGenerator] {
        self.per_weight.get(&k).map_or(&[], Vec::as_slice)
    }

    pub fn iter(&self) -> impl Iterator<Item = &NamedGenerator> {
        self.per_weight.values().flatten()
    }

    pub fn get(&self, name: &str) -> Option<&NamedGenerator> {
        self.iter().find(|g| g.name == name)
    }

    /// Sum of named generators with coefficients, recorded as a combination.
    fn combine(&mut self, name: &str, terms: Vec<(String, Gq)>) {
        let mut field = VectorField::zero();
        for (n, c) in &terms {
            let g = self.get(n).expect("combination refers to a listed generator");
            field = &field + &g.effective().scale(c);
        }
        self.combinations.push(Combination { name: name.into(), terms, field });
    }

    /// Check every effective field is homogeneous of its labeled weight.
    pub fn check_homogeneous(&self) -> Result<(), GeneratorError> {
        for g in self.iter() {
            if !g.effective().is_homogeneous(g.weight) {
                return Err(GeneratorError::NotHomogeneous { name: g.name.clone(), weight: g.weight });
            }
        }
        Ok(())
    }
}

fn label_weight(name: &str) -> Option<i32> {
    let sup = name.rsplit_once('^')?.1;
    sup.trim_start_matches('{').trim_end_matches('}').parse().ok()
}

fn from_fixture(model: QuadricModel, text: &str) -> Result<GeneratorSet, GeneratorError> {
    let ambient = Ambient::of_model(&model);
    let mut set = GeneratorSet::new(model);
    for entry in dsl::parse_fixture(text, &ambient)? {
        let weight = label_weight(&entry.name)
            .or_else(|| entry.field.weight())
            .ok_or_else(|| GeneratorError::NotHomogeneous { name: entry.name.clone(), weight: 0 })?;
        set.push(NamedGenerator::new(entry.name, weight, entry.field));
    }
    set.check_homogeneous()?;
    Ok(set)
}

pub fn gens_e2() -> Result<GeneratorSet, GeneratorError> {
    from_fixture(quadric::build_e2(), E2_FIXTURE)
}

pub fn gens_e3() -> Result<GeneratorSet, GeneratorError> {
    from_fixture(quadric::build_e3(), E3_FIXTURE)
}

pub fn fixture_text(family: &Family) -> Option<&'static str> {
    match family {
        Family::E2 => Some(E2_FIXTURE),
        Family::E3 => Some(E3_FIXTURE),
        _ => None,
    }
}

pub fn gens_for(family: &Family) -> Result<GeneratorSet, GeneratorError> {
    match *family {
        Family::E2 => gens_e2(),
        Family::E3 => gens_e3(),
        Family::So(n) => gens_so(n),
        Family::Su(l, m, n) => gens_su(l, m, n),
    }
}

/// Accumulates `Σ P_v ∂_v` term by term.
#[derive(Default)]
struct FieldBuilder {
    field: VectorField,
}

impl FieldBuilder {
    fn add(&mut self, v: VarId, p: Poly) -> &mut Self {
        self.field.add_component(v, &p);
        self
    }

    fn sub(&mut self, v: VarId, p: Poly) -> &mut Self {
        self.field.add_component(v, &-&p);
        self
    }

    fn build(&mut self) -> VectorField {
        std::mem::take(&mut self.field)
    }
}

fn var(v: VarId) -> Poly {
    Poly::var(v)
}

fn int(n: i64) -> Poly {
    Poly::constant(Gq::int(n))
}

/// `a d - b c`.
fn det(a: &Poly, b: &Poly, c: &Poly, d: &Poly) -> Poly {
    &(a * d) - &(b * c)
}

/// Index pair in a generator label, `12` or `10,11`.
fn pair_label(i: usize, j: usize) -> String {
    if i < 10 && j < 10 {
        format!("{i}{j}")
    } else {
        format!("{i},{j}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tangency;

    #[test]
    fn fixture_counts() {
        for set in [gens_e2().unwrap(), gens_e3().unwrap()] {
            let counts: Vec<usize> = (-2..=2).map(|k| set.count(k)).collect();
            assert_eq!(counts, vec![8, 16, 30, 16, 8]);
            assert_eq!(set.len(), 78);
        }
    }

    #[test]
    fn e2_first_translation_entry() {
        let set = gens_e2().unwrap();
        let g = set.get("L_{z_1}^{-1}").unwrap();
        let ambient = Ambient::of_model(&set.model);
        let expected = dsl::parse_field(
            "D[z[1]] + z[4]*D[w[1]] + z[6]*D[w[2]] - z[7]*D[w[3]] - z[8]*D[w[4]] - z[8]*D[w[5]]",
            &ambient,
        )
        .unwrap();
        assert_eq!(g.field, expected);
    }

    #[test]
    fn e3_contains_pure_translation() {
        let set = gens_e3().unwrap();
        let g = set.get("L_{w_3}^{-2}").unwrap();
        assert_eq!(g.field, VectorField::coordinate(VarId::w(3)));
        assert_eq!(set.count(0), 30);
    }

    #[test]
    fn fixture_entries_are_symmetries() {
        for set in [gens_e2().unwrap(), gens_e3().unwrap()] {
            for g in set.iter() {
                assert!(tangency::is_symmetry(&g.field, &set.model), "{}", g.name);
                assert!(g.repair.is_none());
            }
        }
    }

    #[test]
    fn labels_carry_weights() {
        assert_eq!(label_weight("IL_{z_3}^{-1}"), Some(-1));
        assert_eq!(label_weight("L_1^0"), Some(0));
        assert_eq!(label_weight("L_{w_3w_3}^2"), Some(2));
        assert_eq!(label_weight("R"), None);
    }
}

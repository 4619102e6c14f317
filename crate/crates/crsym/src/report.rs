//! End-to-end verification of a catalog model and its JSON artifacts.
//!
//! Rationals are serialized as `"num/den"` strings (integers without a
//! denominator) and every collection is emitted in a fixed order, so equal
//! inputs give byte-identical JSON.

use crate::generators::{self, GeneratorError, GeneratorSet, NamedGenerator};
use crate::liealg::{self, KillingData, StructureConstants};
use crate::prolong::{self, SolvedBasis};
use crate::quadric::{Family, QuadricModel};
use crate::tangency;
use crate::vfield::VectorField;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

/// Weights beyond the grading checked for vanishing.
pub const VANISHING_WEIGHTS: [i32; 3] = [-3, 3, 4];

#[derive(Debug, Clone, Default)]
pub struct VerifyOptions {
    /// Restrict the per-weight checks; the Lie-algebra checks need all of `-2..=2`.
    pub weights: Option<Vec<i32>>,
    /// Skip the solves at [`VANISHING_WEIGHTS`].
    pub skip_vanishing: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModelDescriptor {
    pub name: String,
    pub selector: String,
    pub params: Vec<usize>,
    pub crdim: usize,
    pub codim: usize,
    pub expected_real_form: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TangencyFailure {
    pub name: String,
    pub equations: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightRecord {
    pub kappa: i32,
    pub expected_dim: usize,
    pub solved_dim: usize,
    #[serde(rename = "paper_generator_count")]
    pub generator_count: usize,
    pub tangency_failures: Vec<TangencyFailure>,
    pub span_match: bool,
}

/// A displayed formula that is not a symmetry as printed, with its repair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArbitrationEntry {
    pub name: String,
    pub kappa: i32,
    pub literal_failing_equations: Vec<usize>,
    pub repair: String,
    pub repaired_is_symmetry: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CombinationRecord {
    pub name: String,
    pub terms: Vec<(String, String)>,
    pub is_symmetry: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VanishingRecord {
    pub kappa: i32,
    pub solved_dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Totals {
    pub expected_total: usize,
    pub total_dim: usize,
    /// Which list the Lie-algebra checks ran on: `generators` or `solver`.
    pub basis: Option<String>,
    pub bracket_closed: Option<bool>,
    pub grading_ok: Option<bool>,
    pub jacobi_ok: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KillingSummary {
    pub inertia: [usize; 3],
    pub nondegenerate: bool,
    pub weight_pairing: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub model: ModelDescriptor,
    pub weights: Vec<WeightRecord>,
    pub combinations: Vec<CombinationRecord>,
    pub typo_arbitration: Vec<ArbitrationEntry>,
    pub vanishing: Vec<VanishingRecord>,
    pub totals: Totals,
    pub killing: Option<KillingSummary>,
    pub center_dim: Option<usize>,
    pub derived_dim: Option<usize>,
    /// Whether the ideal generated by every single basis element is everything.
    pub single_element_ideals_full: Option<bool>,
    pub conclusion: String,
}

impl VerificationReport {
    /// All checks that ran passed.
    pub fn passed(&self) -> bool {
        let weights_ok = self.weights.iter().all(|w| {
            w.solved_dim == w.expected_dim
                && w.generator_count == w.expected_dim
                && w.tangency_failures.is_empty()
                && w.span_match
        });
        let t = &self.totals;
        let lie_ok = [t.bracket_closed, t.grading_ok, t.jacobi_ok, self.single_element_ideals_full]
            .iter()
            .all(|b| b.unwrap_or(true));
        let killing_ok = self.killing.as_ref().is_none_or(|k| k.nondegenerate && k.weight_pairing);
        let center_ok = self.center_dim.is_none_or(|c| c == 0) && self.derived_dim.is_none_or(|d| d == t.expected_total);
        weights_ok
            && lie_ok
            && killing_ok
            && center_ok
            && self.combinations.iter().all(|c| c.is_symmetry)
            && self.typo_arbitration.iter().all(|a| a.repaired_is_symmetry)
            && self.vanishing.iter().all(|v| v.solved_dim == 0)
            && t.basis.as_ref().is_none_or(|_| t.total_dim == t.expected_total)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

/// Rational as `num/den`, or `num` when integral.
pub fn rational_string(x: &BigRational) -> String {
    x.to_string()
}

/// Everything computed along the way, for the export commands.
pub struct Verification {
    pub report: VerificationReport,
    pub set: GeneratorSet,
    pub basis_names: Vec<String>,
    pub structure: Option<StructureConstants>,
    pub killing: Option<KillingData>,
}

fn weight_record(set: &GeneratorSet, k: i32, solved: &SolvedBasis) -> WeightRecord {
    let listed = set.weight(k);
    let tangency_failures = listed
        .par_iter()
        .filter_map(|g| tangency_failure(g.name.clone(), g.effective(), &set.model))
        .collect();
    let fields: Vec<VectorField> = listed.iter().map(|g| g.effective().clone()).collect();
    let span_match = prolong::span_equal(&fields, solved).unwrap_or(false);
    WeightRecord {
        kappa: k,
        expected_dim: set.model.expected_dim(k),
        solved_dim: solved.real_dimension,
        generator_count: listed.len(),
        tangency_failures,
        span_match,
    }
}

fn tangency_failure(name: String, field: &VectorField, model: &QuadricModel) -> Option<TangencyFailure> {
    let equations = tangency::defect(field, model).failing_equations();
    (!equations.is_empty()).then_some(TangencyFailure { name, equations })
}

fn arbitration(g: &NamedGenerator, model: &QuadricModel) -> Option<ArbitrationEntry> {
    let repair = g.repair.as_ref()?;
    Some(ArbitrationEntry {
        name: g.name.clone(),
        kappa: g.weight,
        literal_failing_equations: tangency::defect(&g.field, model).failing_equations(),
        repair: repair.note.clone(),
        repaired_is_symmetry: tangency::is_symmetry(&repair.field, model),
    })
}

fn descriptor(model: &QuadricModel) -> ModelDescriptor {
    ModelDescriptor {
        name: model.name.clone(),
        selector: model.family.selector(),
        params: model.family.params(),
        crdim: model.crdim(),
        codim: model.codim(),
        expected_real_form: model.family.real_form(),
    }
}

/// Run generators, tangency, the solver, span comparison and the Lie-algebra checks.
pub fn verify(family: Family, options: &VerifyOptions) -> Result<Verification, GeneratorError> {
    let set = generators::gens_for(&family)?;
    let all: Vec<i32> = (-2..=2).collect();
    let mut kappas = options.weights.clone().unwrap_or_else(|| all.clone());
    kappas.sort_unstable();
    kappas.dedup();
    let full = all.iter().all(|k| kappas.contains(k));

    let solved: Vec<SolvedBasis> = kappas.iter().map(|&k| prolong::solve_graded(&set.model, k)).collect();
    let weights: Vec<WeightRecord> = kappas.iter().zip(&solved).map(|(&k, s)| weight_record(&set, k, s)).collect();

    let typo_arbitration = set
        .iter()
        .filter(|g| kappas.contains(&g.weight))
        .filter_map(|g| arbitration(g, &set.model))
        .collect();
    let combinations = set
        .combinations
        .iter()
        .map(|c| CombinationRecord {
            name: c.name.clone(),
            terms: c.terms.iter().map(|(n, x)| (n.clone(), x.to_string())).collect(),
            is_symmetry: tangency::is_symmetry(&c.field, &set.model),
        })
        .collect();
    let vanishing = if options.skip_vanishing {
        Vec::new()
    } else {
        VANISHING_WEIGHTS
            .iter()
            .map(|&k| VanishingRecord { kappa: k, solved_dim: prolong::solve_graded(&set.model, k).real_dimension })
            .collect()
    };

    let total_dim = solved.iter().map(|s| s.real_dimension).sum();
    let mut totals = Totals {
        expected_total: set.model.expected_total(),
        total_dim,
        basis: None,
        bracket_closed: None,
        grading_ok: None,
        jacobi_ok: None,
    };
    let mut report = VerificationReport {
        model: descriptor(&set.model),
        weights,
        combinations,
        typo_arbitration,
        vanishing,
        totals: totals.clone(),
        killing: None,
        center_dim: None,
        derived_dim: None,
        single_element_ideals_full: None,
        conclusion: String::new(),
    };
    let mut structure = None;
    let mut killing = None;
    let mut basis_names = Vec::new();

    if full {
        let use_generators = report.weights.iter().all(|w| w.span_match && w.generator_count == w.solved_dim);
        let (names, basis, weights): (Vec<String>, Vec<VectorField>, Vec<i32>) = if use_generators {
            let gens: Vec<&NamedGenerator> = set.iter().collect();
            (
                gens.iter().map(|g| g.name.clone()).collect(),
                gens.iter().map(|g| g.effective().clone()).collect(),
                gens.iter().map(|g| g.weight).collect(),
            )
        } else {
            let mut out = (Vec::new(), Vec::new(), Vec::new());
            for (&k, s) in kappas.iter().zip(&solved) {
                for (n, f) in s.basis.iter().enumerate() {
                    out.0.push(format!("X^{k}_{n}"));
                    out.1.push(f.clone());
                    out.2.push(k);
                }
            }
            out
        };
        totals.basis = Some(if use_generators { "generators" } else { "solver" }.to_string());
        match liealg::structure_constants(&basis) {
            Ok(sc) => {
                totals.bracket_closed = Some(true);
                totals.grading_ok = Some(liealg::grading_check(&sc, &weights));
                totals.jacobi_ok = Some(liealg::jacobi_residual(&sc).is_zero());
                let k = liealg::killing(&sc);
                report.killing = Some(KillingSummary {
                    inertia: [k.inertia.0, k.inertia.1, k.inertia.2],
                    nondegenerate: k.nondegenerate(),
                    weight_pairing: liealg::killing_weight_pairing(&k, &weights),
                });
                let (c, d) = liealg::center_and_derived(&sc);
                report.center_dim = Some(c);
                report.derived_dim = Some(d);
                report.single_element_ideals_full =
                    Some(liealg::single_element_ideal_dims(&sc).iter().all(|&x| x == sc.dim));
                structure = Some(sc);
                killing = Some(k);
            }
            Err(_) => totals.bracket_closed = Some(false),
        }
        basis_names = names;
    }
    report.totals = totals;
    report.conclusion = conclusion(&report);
    Ok(Verification { report, set, basis_names, structure, killing })
}

fn conclusion(r: &VerificationReport) -> String {
    if !r.passed() {
        return "verification failed".into();
    }
    match &r.killing {
        Some(k) => format!(
            "semisimple real Lie algebra of dimension {} with Killing inertia ({}, {}, {}); consistent with {}, isomorphism not proved",
            r.totals.total_dim, k.inertia[0], k.inertia[1], k.inertia[2], r.model.expected_real_form
        ),
        None => "per-weight checks passed; Lie-algebra checks need all weights".into(),
    }
}

#[derive(Serialize)]
struct ScEntry {
    i: usize,
    j: usize,
    coords: Vec<String>,
}

#[derive(Serialize)]
struct ScExport<'a> {
    dim: usize,
    basis: &'a [String],
    entries: Vec<ScEntry>,
}

/// `{dim, basis, entries: [{i, j, coords}]}` with dense rational coordinates, `i < j`, nonzero brackets only.
pub fn structure_constants_json(sc: &StructureConstants, names: &[String]) -> String {
    let entries = sc
        .c
        .iter()
        .filter(|(_, v)| !v.is_empty())
        .map(|(&(i, j), _)| ScEntry { i, j, coords: sc.coords(i, j).iter().map(rational_string).collect() })
        .collect();
    serde_json::to_string_pretty(&ScExport { dim: sc.dim, basis: names, entries }).expect("serializes") + "\n"
}

#[derive(Serialize)]
struct KillingExport {
    matrix: Vec<Vec<String>>,
    inertia: [usize; 3],
}

pub fn killing_json(k: &KillingData) -> String {
    let matrix = k.matrix.iter().map(|row| row.iter().map(rational_string).collect()).collect();
    let export = KillingExport { matrix, inertia: [k.inertia.0, k.inertia.1, k.inertia.2] };
    serde_json::to_string_pretty(&export).expect("serializes") + "\n"
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn so2_report_passes() {
        let v = verify(Family::So(2), &VerifyOptions::default()).unwrap();
        let r = &v.report;
        assert!(r.passed(), "{}", r.to_json());
        let dims: Vec<usize> = r.weights.iter().map(|w| w.solved_dim).collect();
        assert_eq!(dims, vec![1, 4, 5, 4, 1]);
        assert_eq!(r.totals.total_dim, 15);
        assert_eq!(r.center_dim, Some(0));
        assert_eq!(r.vanishing.len(), 3);
        assert_eq!(r.combinations[0].name, "D");
    }

    #[test]
    fn bracket_of_translations_in_export() {
        let v = verify(Family::So(2), &VerifyOptions { weights: None, skip_vanishing: true }).unwrap();
        let sc = v.structure.as_ref().unwrap();
        let i = v.basis_names.iter().position(|n| n == "L_{z_1}^{-1}").unwrap();
        let j = v.basis_names.iter().position(|n| n == "L_{z_2}^{-1}").unwrap();
        let k = v.basis_names.iter().position(|n| n == "L_{w_{12}}^{-2}").unwrap();
        assert_eq!(rational_string(&sc.coords(i, j)[k]), "2");
        let json = structure_constants_json(sc, &v.basis_names);
        assert!(json.contains("\"dim\": 15"));
    }

    #[test]
    fn weight_subset_skips_lie_checks() {
        let opts = VerifyOptions { weights: Some(vec![-1, -2]), skip_vanishing: true };
        let r = verify(Family::So(3), &opts).unwrap().report;
        assert_eq!(r.weights.iter().map(|w| w.kappa).collect::<Vec<_>>(), vec![-2, -1]);
        assert!(r.killing.is_none() && r.totals.bracket_closed.is_none());
        assert!(r.passed());
    }

    #[test]
    fn su_report_lists_arbitration() {
        let r = verify(Family::Su(2, 1, 1), &VerifyOptions { weights: None, skip_vanishing: true }).unwrap().report;
        assert!(r.passed(), "{}", r.to_json());
        assert!(!r.typo_arbitration.is_empty());
        for a in &r.typo_arbitration {
            assert!(!a.literal_failing_equations.is_empty(), "{}", a.name);
            assert!(a.repaired_is_symmetry);
        }
    }

    #[test]
    fn rationals_print_reduced() {
        let x = BigRational::new(6.into(), (-4).into());
        assert_eq!(rational_string(&x), "-3/2");
        assert_eq!(rational_string(&BigRational::from_integer(5.into())), "5");
    }
}

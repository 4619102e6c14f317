mod support;

use crsym::exact::Gq;
use crsym::generators::{gens_su, GeneratorSet};
use crsym::vfield::VectorField;
use crsym::{prolong, tangency};
use support::su_matrix::*;

fn pl(i: usize, j: usize) -> String {
    if i < 10 && j < 10 {
        format!("{i}{j}")
    } else {
        format!("{i},{j}")
    }
}

/// Listed generator or recorded combination of that name.
fn effective<'a>(set: &'a GeneratorSet, name: &str) -> &'a VectorField {
    match set.get(name) {
        Some(g) => g.effective(),
        None => &set.combinations.iter().find(|c| c.name == name).unwrap_or_else(|| panic!("missing {name}")).field,
    }
}

fn letter_cols(s: &Shape) -> Vec<(&'static str, Col)> {
    let mut out = Vec::new();
    for j in 1..=s.n {
        out.push(("z", Col::Z(j)));
    }
    for k in 1..=s.m {
        out.push(("u", Col::U(k)));
    }
    for k in 1..=s.m {
        out.push(("v", Col::V(k)));
    }
    out
}

fn col_label(c: Col) -> usize {
    match c {
        Col::Z(i) | Col::U(i) | Col::V(i) => i,
    }
}

/// Every named generator paired with the field predicted by the matrix action.
fn predictions(s: &Shape) -> Vec<(String, VectorField)> {
    let (l, m, n) = (s.l, s.m, s.n);
    let one = Gq::one;
    let i_ = Gq::i;
    let neg = || Gq::int(-1);
    let mut out = Vec::new();

    for a in 1..=l {
        for c in a + 1..=l {
            out.push((format!("L_{{w_{{{}}}}}", pl(a, c)), translation(s, &small(s, &[(a, c, one()), (c, a, neg())]))));
        }
    }
    for a in 1..=l {
        for c in 1..=a {
            let entries = if a == c { vec![(a, a, i_())] } else { vec![(a, c, i_()), (c, a, i_())] };
            out.push((format!("IL_{{w_{{{}}}}}", pl(a, c)), translation(s, &small(s, &entries))));
        }
    }

    for (sym, col) in letter_cols(s) {
        for (prefix, c) in [("L", one()), ("IL", i_())] {
            for a in 1..=l {
                let name = format!("{prefix}_{{{sym}_{{{}}}}}", pl(a, col_label(col)));
                out.push((name, minus_one(s, &unit_b(s, a, col, c.clone()))));
            }
        }
    }

    let mut free = |name: String, entries: Vec<(Col, Col, Gq)>| {
        let q = column_matrix(s, &entries);
        assert!(preserves_pairing(s, &q), "{name} leaves u(J)");
        out.push((name, zero_q(s, &q)));
    };
    for (prefix, c, d) in [("L", one(), neg()), ("IL", i_(), i_())] {
        for k1 in 1..=m {
            for k2 in 1..=m {
                free(format!("{prefix}_{{{}}}^1", pl(k1, k2)), vec![(Col::U(k1), Col::U(k2), c.clone()), (Col::V(k2), Col::V(k1), d.clone())]);
            }
        }
        for k1 in 1..=m {
            for k2 in k1 + 1..=m {
                free(format!("{prefix}_{{{}}}^2", pl(k1, k2)), vec![(Col::V(k1), Col::U(k2), c.clone()), (Col::V(k2), Col::U(k1), d.clone())]);
                free(format!("{prefix}_{{{}}}^3", pl(k1, k2)), vec![(Col::U(k1), Col::V(k2), c.clone()), (Col::U(k2), Col::V(k1), d.clone())]);
            }
        }
        for i in 1..=n {
            for k in 1..=m {
                free(format!("{prefix}_{{{i},{k}}}^4"), vec![(Col::U(k), Col::Z(i), c.clone()), (Col::Z(i), Col::V(k), d.clone())]);
                free(format!("{prefix}_{{{i},{k}}}^5"), vec![(Col::V(k), Col::Z(i), c.clone()), (Col::Z(i), Col::U(k), d.clone())]);
            }
        }
        for i1 in 1..=n {
            for i2 in i1 + 1..=n {
                free(format!("{prefix}_{{{i1},{i2}}}^6"), vec![(Col::Z(i1), Col::Z(i2), c.clone()), (Col::Z(i2), Col::Z(i1), d.clone())]);
            }
        }
    }
    for i in 1..=n {
        free(format!("IL_{i}^7"), vec![(Col::Z(i), Col::Z(i), i_())]);
    }
    for k in 1..=m {
        free(format!("IL_{k}^8"), vec![(Col::V(k), Col::U(k), i_())]);
        free(format!("IL_{k}^9"), vec![(Col::U(k), Col::V(k), i_())]);
    }

    for i in 1..=l {
        for j in 1..=l {
            out.push((format!("L_{{{i},{j}}}"), zero_p(s, &small(s, &[(j, i, one())]))));
            out.push((format!("IL_{{{i},{j}}}"), zero_p(s, &small(s, &[(j, i, i_())]))));
        }
    }

    for (sym, col) in letter_cols(s) {
        let dual = dual_col(col);
        for (prefix, c) in [("L", neg()), ("IL", i_())] {
            for a in 1..=l {
                let x = format!("{sym}_{{{}}}", pl(a, col_label(col)));
                out.push((format!("{prefix}_{{{x}{x}}}"), plus_one(s, &unit_b(s, a, dual, c.clone()))));
            }
        }
    }

    for i in 1..=l {
        for j in i + 1..=l {
            let a = small(s, &[(j, i, i_()), (i, j, Gq::gauss(0, -1))]);
            out.push((format!("L_{{w_{{{ij}}}w_{{{ij}}}}}", ij = pl(i, j)), plus_two(s, &a)));
        }
        let d = pl(i, i);
        out.push((format!("IL_{{w_{{{d}}}w_{{{d}}}}}"), plus_two(s, &small(s, &[(i, i, neg())]))));
        for j in 1..i {
            let a = small(s, &[(i, j, neg()), (j, i, neg())]);
            out.push((format!("IL_{{w_{{{ij}}}w_{{{ij}}}}}", ij = pl(i, j)), plus_two(s, &a)));
        }
    }
    out
}

const SHAPES: [(usize, usize, usize); 6] = [(1, 0, 1), (1, 1, 0), (2, 0, 1), (2, 1, 1), (3, 1, 1), (3, 2, 2)];

#[test]
fn repaired_generators_match_matrix_action() {
    for (l, m, n) in SHAPES {
        let s = Shape { l, m, n };
        let set = gens_su(l, m, n).unwrap();
        let predicted = predictions(&s);
        assert_eq!(predicted.len(), set.len() + set.combinations.len(), "su({l},{m},{n}) entry count");
        for (name, field) in &predicted {
            assert!(tangency::is_symmetry(field, &set.model), "su({l},{m},{n}) model {name} not tangent");
            assert_eq!(effective(&set, name), field, "su({l},{m},{n}) {name}");
        }
    }
}

#[test]
fn effective_generators_are_symmetries() {
    for (l, m, n) in [(4, 1, 1), (3, 0, 2), (2, 2, 0)] {
        let set = gens_su(l, m, n).unwrap();
        for g in set.iter() {
            assert!(tangency::is_symmetry(g.effective(), &set.model), "su({l},{m},{n}) {}", g.name);
        }
    }
}

#[test]
fn every_repair_fixes_a_non_symmetry() {
    for (l, m, n) in [(3, 1, 1), (3, 2, 2)] {
        let set = gens_su(l, m, n).unwrap();
        let repaired: Vec<_> = set.iter().filter(|g| g.repair.is_some()).collect();
        assert!(!repaired.is_empty());
        for g in repaired {
            assert!(!tangency::is_symmetry(&g.field, &set.model), "su({l},{m},{n}) {} is tangent as printed", g.name);
        }
    }
}

#[test]
fn generators_span_each_graded_piece() {
    for (l, m, n) in [(1, 0, 1), (1, 1, 0), (2, 0, 1), (2, 1, 1)] {
        let set = gens_su(l, m, n).unwrap();
        for k in -2..=2 {
            let solved = prolong::solve_graded(&set.model, k);
            let fields: Vec<VectorField> = set.weight(k).iter().map(|g| g.effective().clone()).collect();
            assert!(prolong::span_equal(&fields, &solved).unwrap(), "su({l},{m},{n}) weight {k}");
        }
    }
}

#[test]
fn degree_zero_list_has_one_dependency() {
    for (l, m, n) in [(1, 1, 1), (2, 1, 1), (2, 0, 2)] {
        let set = gens_su(l, m, n).unwrap();
        let big_n = n + 2 * m;
        let listed = set.count(0) + set.combinations.len();
        assert_eq!(listed, big_n * big_n + 2 * l * l);
        let solved = prolong::solve_graded(&set.model, 0);
        assert_eq!(solved.real_dimension, listed - 1);
        let mut with_trace: Vec<VectorField> = set.weight(0).iter().map(|g| g.effective().clone()).collect();
        assert!(prolong::span_equal(&with_trace, &solved).unwrap());
        with_trace.push(set.combinations[0].field.clone());
        assert!(prolong::span_equal(&with_trace, &solved).unwrap());
    }
}

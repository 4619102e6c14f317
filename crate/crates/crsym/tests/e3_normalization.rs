use crsym::exact::Gq;
use crsym::generators::gens_e3;
use crsym::quadric::{build_e3_with_diagonal, E3_DIAGONAL};
use crsym::{prolong, tangency};

fn failures_with_diagonal(d: Gq) -> (usize, Vec<usize>) {
    let set = gens_e3().unwrap();
    let model = build_e3_with_diagonal(d);
    let bad = set.iter().filter(|g| !tangency::is_symmetry(g.effective(), &model)).count();
    let dims = (-2..=2).map(|k| prolong::solve_graded(&model, k).real_dimension).collect();
    (bad, dims)
}

#[test]
fn half_diagonal_makes_every_listed_generator_tangent() {
    let (bad, dims) = failures_with_diagonal(Gq::frac(E3_DIAGONAL.0, E3_DIAGONAL.1));
    assert_eq!(bad, 0);
    assert_eq!(dims, [8, 16, 30, 16, 8]);
}

#[test]
fn unit_diagonal_keeps_dimensions_but_breaks_listed_generators() {
    let (bad, dims) = failures_with_diagonal(Gq::one());
    assert_eq!(bad, 52);
    assert_eq!(dims, [8, 16, 30, 16, 8]);
}

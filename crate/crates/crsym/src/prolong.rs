//! Graded pieces of the symmetry algebra recomputed from scratch.
//!
//! The generic weight-`κ` field has one complex unknown per admissible
//! (target, monomial) pair. Its tangency defect is linear in the unknowns, so
//! the graded piece is the kernel of an exact real linear system. The system
//! is block diagonal with respect to the diagonal torus preserving the
//! quadric, and each block is solved on its own.

use crate::exact::{Gq, Monomial, Poly, VarId};
use crate::linalg::{self, RatRow};
use crate::quadric::QuadricModel;
use crate::vfield::VectorField;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use std::collections::{BTreeMap, HashMap};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpanError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// One complex unknown: the coefficient of `monomial ∂_target`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Unknown {
    pub target: VarId,
    pub monomial: Monomial,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ansatz {
    pub weight: i32,
    pub unknowns: Vec<Unknown>,
}

impl Ansatz {
    pub fn len(&self) -> usize {
        self.unknowns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.unknowns.is_empty()
    }

    fn index(&self) -> HashMap<(VarId, Monomial), usize> {
        self.unknowns
            .iter()
            .enumerate()
            .map(|(k, u)| ((u.target, u.monomial.clone()), k))
            .collect()
    }
}

/// All holomorphic monomials of the given weight, in canonical order.
pub fn holomorphic_monomials(vars: &[VarId], weight: i32) -> Vec<Monomial> {
    fn rec(vars: &[VarId], left: u32, acc: &mut Vec<(VarId, u32)>, out: &mut Vec<Monomial>) {
        let Some((&v, rest)) = vars.split_first() else {
            if left == 0 {
                out.push(Monomial::from_pairs(acc.iter().copied()));
            }
            return;
        };
        let w = v.weight();
        for e in 0..=left / w {
            if e > 0 {
                acc.push((v, e));
            }
            rec(rest, left - e * w, acc, out);
            if e > 0 {
                acc.pop();
            }
        }
    }
    if weight < 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    rec(vars, weight as u32, &mut Vec::new(), &mut out);
    out.sort();
    out
}

pub fn enumerate_ansatz(model: &QuadricModel, k: i32) -> Ansatz {
    let vars = model.holomorphic_vars();
    let mut unknowns = Vec::new();
    if k >= -2 {
        for &t in &vars {
            for m in holomorphic_monomials(&vars, k + t.weight() as i32) {
                unknowns.push(Unknown { target: t, monomial: m });
            }
        }
    }
    Ansatz { weight: k, unknowns }
}

/// Integer gradings of the coordinates under which every equation is homogeneous.
///
/// Each row assigns a real scaling to every coordinate (`s_a + s_b = r_k`
/// for every Hermitian entry `(a, b)` of equation `k`); the last rows are
/// phase charges, one per connected block of z-coordinates.
#[derive(Debug, Clone)]
pub struct Torus {
    vars: Vec<VarId>,
    scalings: Vec<Vec<i64>>,
    phases: Vec<Vec<i64>>,
}

impl Torus {
    pub fn of_model(model: &QuadricModel) -> Torus {
        let vars = model.holomorphic_vars();
        let pos: HashMap<VarId, usize> = vars.iter().enumerate().map(|(k, v)| (*v, k)).collect();
        let mut rows: Vec<RatRow> = Vec::new();
        for e in &model.equations {
            for &(a, b) in e.hermitian.keys() {
                let mut r: BTreeMap<u32, i64> = BTreeMap::new();
                *r.entry(pos[&a] as u32).or_default() += 1;
                *r.entry(pos[&b] as u32).or_default() += 1;
                *r.entry(pos[&e.w_var] as u32).or_default() -= 1;
                rows.push(
                    r.into_iter()
                        .filter(|&(_, x)| x != 0)
                        .map(|(c, x)| (c, BigRational::from_integer(x.into())))
                        .collect(),
                );
            }
        }
        let scalings = linalg::kernel(&rows, vars.len())
            .into_iter()
            .map(|kv| integer_vector(&kv.coords, vars.len()))
            .collect();

        // connected components of the z-coordinates linked by Hermitian entries
        let mut parent: Vec<usize> = (0..vars.len()).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for e in &model.equations {
            for &(a, b) in e.hermitian.keys() {
                let (ra, rb) = (find(&mut parent, pos[&a]), find(&mut parent, pos[&b]));
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut roots: Vec<usize> = Vec::new();
        for (k, v) in vars.iter().enumerate() {
            if !v.is_w_like() {
                let r = find(&mut parent, k);
                if !roots.contains(&r) {
                    roots.push(r);
                }
            }
        }
        let phases = roots
            .iter()
            .map(|&r| {
                (0..vars.len())
                    .map(|k| i64::from(!vars[k].is_w_like() && find(&mut parent, k) == r))
                    .collect()
            })
            .collect();
        Torus { vars, scalings, phases }
    }

    pub fn rank(&self) -> usize {
        self.scalings.len()
    }

    fn charge(&self, row: &[i64], u: &Unknown) -> i64 {
        let at = |v: VarId| self.vars.iter().position(|x| *x == v).map(|k| row[k]).unwrap_or(0);
        let m: i64 = u.monomial.factors().iter().map(|&(v, e)| at(v) * e as i64).sum();
        m - at(u.target)
    }

    /// Block label of an unknown; unknowns with different labels never
    /// share an equation of the linear system.
    fn label(&self, u: &Unknown) -> (Vec<i64>, Vec<i64>) {
        let real = self.scalings.iter().map(|r| self.charge(r, u)).collect();
        let mut phase: Vec<i64> = self.phases.iter().map(|r| self.charge(r, u)).collect();
        let neg: Vec<i64> = phase.iter().map(|x| -x).collect();
        if neg > phase {
            phase = neg;
        }
        (real, phase)
    }
}

fn integer_vector(coords: &RatRow, n: usize) -> Vec<i64> {
    use num_integer::Integer;
    let l = coords.iter().fold(num_bigint::BigInt::one(), |a, (_, v)| a.lcm(v.denom()));
    let mut out = vec![0i64; n];
    for (c, v) in coords {
        let x = v.numer() * (&l / v.denom());
        out[*c as usize] = i64::try_from(x).expect("small torus weights");
    }
    out
}

/// Precomputed pieces of the defect of a single unknown.
struct DefectKit<'a> {
    model: &'a QuadricModel,
    /// `∂_x ρ_k` for every holomorphic target `x` and equation `k`.
    hol: HashMap<(VarId, usize), Poly>,
    /// `∂_{x̄} ρ_k`.
    anti: HashMap<(VarId, usize), Poly>,
    /// Eliminated conjugate of each w-monomial, filled on demand.
    wbar_powers: std::sync::Mutex<HashMap<Monomial, Poly>>,
    bindings: BTreeMap<VarId, Poly>,
}

impl<'a> DefectKit<'a> {
    fn new(model: &'a QuadricModel) -> Self {
        let mut hol = HashMap::new();
        let mut anti = HashMap::new();
        for (k, e) in model.equations.iter().enumerate() {
            let rho = e.rho();
            for v in model.holomorphic_vars() {
                let d = rho.partial(v);
                if !d.is_zero() {
                    hol.insert((v, k), d);
                }
                let d = rho.partial(v.conj());
                if !d.is_zero() {
                    anti.insert((v, k), d);
                }
            }
        }
        DefectKit {
            model,
            hol,
            anti,
            wbar_powers: std::sync::Mutex::new(HashMap::new()),
            bindings: model.wbar_bindings(),
        }
    }

    fn eliminated(&self, wpart: &Monomial) -> Poly {
        if let Some(p) = self.wbar_powers.lock().unwrap().get(wpart) {
            return p.clone();
        }
        let p = Poly::term(wpart.conj(), Gq::one())
            .substitute(&self.bindings)
            .expect("elimination rules never mention conjugated w");
        self.wbar_powers.lock().unwrap().insert(wpart.clone(), p.clone());
        p
    }

    /// `(Lρ_k, L̄ρ_k)` for `L = monomial ∂_target`, every `w̄` eliminated.
    fn parts(&self, u: &Unknown) -> Vec<(Poly, Poly)> {
        let (wpart, zpart) = u.monomial.split(VarId::is_w_like);
        let zbar = zpart.conj();
        let sub = self.eliminated(&wpart);
        (0..self.model.equations.len())
            .map(|k| {
                let p = self.hol.get(&(u.target, k)).map(|g| g.shift(&u.monomial)).unwrap_or_default();
                let q = self
                    .anti
                    .get(&(u.target, k))
                    .map(|h| (&sub * h).shift(&zbar))
                    .unwrap_or_default();
                (p, q)
            })
            .collect()
    }
}

/// Real unknown columns: `2u` is the real part of unknown `u`, `2u+1` the imaginary part.
fn assemble(kit: &DefectKit<'_>, ansatz: &Ansatz, members: &[usize]) -> Vec<RatRow> {
    let mut row_of: HashMap<(usize, Monomial, bool), usize> = HashMap::new();
    let mut rows: Vec<RatRow> = Vec::new();
    let mut push = |key: (usize, Monomial, bool), col: u32, v: BigRational, rows: &mut Vec<RatRow>| {
        if v.is_zero() {
            return;
        }
        let idx = *row_of.entry(key).or_insert_with(|| {
            rows.push(Vec::new());
            rows.len() - 1
        });
        rows[idx].push((col, v));
    };
    for (local, &u) in members.iter().enumerate() {
        let (ca, cb) = (2 * local as u32, 2 * local as u32 + 1);
        for (k, (p, q)) in kit.parts(&ansatz.unknowns[u]).into_iter().enumerate() {
            let mut mons: Vec<&Monomial> = p.terms().map(|(m, _)| m).chain(q.terms().map(|(m, _)| m)).collect();
            mons.sort();
            mons.dedup();
            for m in mons {
                let (pc, qc) = (p.coeff(m), q.coeff(m));
                // c = a + i b contributes a(p + q) + b·i(p − q)
                let sum = &pc + &qc;
                let diff = (&pc - &qc).times_i();
                push((k, m.clone(), false), ca, sum.re().clone(), &mut rows);
                push((k, m.clone(), true), ca, sum.im().clone(), &mut rows);
                push((k, m.clone(), false), cb, diff.re().clone(), &mut rows);
                push((k, m.clone(), true), cb, diff.im().clone(), &mut rows);
            }
        }
    }
    rows
}

/// Size data of one solve.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub complex_unknowns: usize,
    pub blocks: usize,
    pub largest_block: usize,
    pub torus_rank: usize,
}

#[derive(Debug, Clone)]
pub struct SolvedBasis {
    pub weight: i32,
    pub basis: Vec<VectorField>,
    pub real_dimension: usize,
    pub ansatz: Ansatz,
    /// Free real column of each basis vector, increasing.
    pub free_columns: Vec<u32>,
    /// Basis vectors in real unknown coordinates.
    pub vectors: Vec<RatRow>,
    pub stats: SolveStats,
}

fn field_of(ansatz: &Ansatz, coords: &RatRow) -> VectorField {
    let mut parts: BTreeMap<usize, (BigRational, BigRational)> = BTreeMap::new();
    for (c, v) in coords {
        let e = parts.entry(*c as usize / 2).or_insert_with(|| (BigRational::zero(), BigRational::zero()));
        if c % 2 == 0 {
            e.0 = v.clone();
        } else {
            e.1 = v.clone();
        }
    }
    let mut f = VectorField::zero();
    for (u, (re, im)) in parts {
        let unk = &ansatz.unknowns[u];
        f.add_component(unk.target, &Poly::term(unk.monomial.clone(), Gq::new(re, im)));
    }
    f
}

/// The real graded piece of weight `k` as a canonical reduced basis.
pub fn solve_graded(model: &QuadricModel, k: i32) -> SolvedBasis {
    let ansatz = enumerate_ansatz(model, k);
    let torus = Torus::of_model(model);
    let mut blocks: BTreeMap<(Vec<i64>, Vec<i64>), Vec<usize>> = BTreeMap::new();
    for (u, unk) in ansatz.unknowns.iter().enumerate() {
        blocks.entry(torus.label(unk)).or_default().push(u);
    }
    let kit = DefectKit::new(model);
    let members: Vec<Vec<usize>> = blocks.into_values().collect();
    let solved: Vec<Vec<(u32, RatRow)>> = members
        .par_iter()
        .map(|mem| {
            let rows = assemble(&kit, &ansatz, mem);
            let global = |c: u32| 2 * mem[c as usize / 2] as u32 + c % 2;
            linalg::kernel(&rows, 2 * mem.len())
                .into_iter()
                .map(|kv| {
                    let mut coords: RatRow = kv.coords.into_iter().map(|(c, v)| (global(c), v)).collect();
                    coords.sort_by_key(|(c, _)| *c);
                    (global(kv.free), coords)
                })
                .collect()
        })
        .collect();
    let mut all: Vec<(u32, RatRow)> = solved.into_iter().flatten().collect();
    all.sort_by_key(|(f, _)| *f);
    let stats = SolveStats {
        complex_unknowns: ansatz.len(),
        blocks: members.len(),
        largest_block: members.iter().map(Vec::len).max().unwrap_or(0),
        torus_rank: torus.rank(),
    };
    let basis = all.iter().map(|(_, c)| field_of(&ansatz, c)).collect();
    let (free_columns, vectors): (Vec<u32>, Vec<RatRow>) = all.into_iter().unzip();
    SolvedBasis {
        weight: k,
        real_dimension: vectors.len(),
        basis,
        ansatz,
        free_columns,
        vectors,
        stats,
    }
}

impl SolvedBasis {
    /// Real coordinates of a field in the unknown columns, if it fits the ansatz.
    pub fn coordinates_in_ansatz(&self, f: &VectorField) -> Option<BTreeMap<u32, BigRational>> {
        let index = self.ansatz.index();
        let mut out = BTreeMap::new();
        for (v, m, c) in f.terms() {
            let u = *index.get(&(v, m.clone()))? as u32;
            if !c.re().is_zero() {
                out.insert(2 * u, c.re().clone());
            }
            if !c.im().is_zero() {
                out.insert(2 * u + 1, c.im().clone());
            }
        }
        Some(out)
    }

    /// Coordinates of `f` in the basis, or `None` if it is not in the span.
    pub fn coordinates(&self, f: &VectorField) -> Option<Vec<BigRational>> {
        let x = self.coordinates_in_ansatz(f)?;
        let lambda: Vec<BigRational> = self
            .free_columns
            .iter()
            .map(|c| x.get(c).cloned().unwrap_or_default())
            .collect();
        let mut rebuilt: BTreeMap<u32, BigRational> = BTreeMap::new();
        for (l, vec) in lambda.iter().zip(&self.vectors) {
            if l.is_zero() {
                continue;
            }
            for (c, v) in vec {
                let e = rebuilt.entry(*c).or_insert_with(BigRational::zero);
                *e += l * v;
                if e.is_zero() {
                    rebuilt.remove(c);
                }
            }
        }
        (rebuilt == x).then_some(lambda)
    }
}

/// Whether `fields` spans exactly the solved graded piece over the reals.
pub fn span_equal(fields: &[VectorField], solved: &SolvedBasis) -> Result<bool, SpanError> {
    for (n, f) in fields.iter().enumerate() {
        if !f.is_homogeneous(solved.weight) {
            return Err(SpanError::InvalidInput(format!(
                "field #{n} is not homogeneous of weight {}",
                solved.weight
            )));
        }
    }
    let mut coords = Vec::with_capacity(fields.len());
    for f in fields {
        match solved.coordinates(f) {
            Some(c) => coords.push(c.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect()),
            None => return Ok(false),
        }
    }
    Ok(linalg::rank(&coords) == solved.real_dimension)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Block;
    use crate::quadric::{build_e2, build_so, build_su};
    use crate::tangency;

    #[test]
    fn ansatz_sizes() {
        let so2 = build_so(2).unwrap();
        let a = enumerate_ansatz(&so2, -2);
        assert_eq!(a.len(), 1);
        assert_eq!(a.unknowns[0].target, VarId::pair(Block::W, 1, 2));
        assert!(a.unknowns[0].monomial.is_one());
        assert_eq!(enumerate_ansatz(&so2, -1).len(), 4);
        assert_eq!(enumerate_ansatz(&build_e2(), -2).len(), 8);
        assert!(enumerate_ansatz(&so2, -3).is_empty());
    }

    #[test]
    fn monomial_enumeration_counts() {
        let vars: Vec<VarId> = (1..=3).map(VarId::z).chain([VarId::w(1)]).collect();
        // weight 2: z_a z_b (6) and w (1)
        assert_eq!(holomorphic_monomials(&vars, 2).len(), 7);
        let m = holomorphic_monomials(&vars, 3);
        let mut sorted = m.clone();
        sorted.sort();
        assert_eq!(m, sorted);
        assert_eq!(m.len(), 10 + 3);
    }

    #[test]
    fn unit_defects_agree_with_tangency() {
        let models = [build_e2(), crate::quadric::build_e3(), build_su(2, 1, 1).unwrap()];
        for model in &models {
            let kit = DefectKit::new(model);
            for k in [-1, 1, 2] {
                let a = enumerate_ansatz(model, k);
                for u in a.unknowns.iter().step_by(37) {
                    let f = VectorField::zero().with(u.target, Poly::term(u.monomial.clone(), Gq::one()));
                    assert_eq!(kit.parts(u), tangency::defect_parts(&f, model));
                }
            }
        }
    }

    #[test]
    fn small_dimensions() {
        let su = build_su(1, 0, 1).unwrap();
        let dims: Vec<usize> = (-2..=2).map(|k| solve_graded(&su, k).real_dimension).collect();
        assert_eq!(dims, vec![1, 2, 2, 2, 1]);
        let so2 = build_so(2).unwrap();
        let dims: Vec<usize> = (-2..=2).map(|k| solve_graded(&so2, k).real_dimension).collect();
        assert_eq!(dims, vec![1, 4, 5, 4, 1]);
    }

    #[test]
    fn solved_fields_are_symmetries() {
        let so2 = build_so(2).unwrap();
        for k in -2..=2 {
            let s = solve_graded(&so2, k);
            for f in &s.basis {
                assert!(f.is_homogeneous(k));
                assert!(tangency::is_symmetry(f, &so2));
            }
        }
    }

    #[test]
    fn span_checks() {
        let e2 = build_e2();
        let s = solve_graded(&e2, -2);
        let gens: Vec<VectorField> = (1..=8).map(|i| VectorField::coordinate(VarId::w(i)).scale(&Gq::i())).collect();
        // only the Im-type translations are symmetries
        assert!(!span_equal(&gens, &s).unwrap());
        let good: Vec<VectorField> = e2
            .equations
            .iter()
            .map(|e| {
                let c = if e.eq_type == crate::quadric::EqType::RePart { Gq::i() } else { Gq::one() };
                VectorField::coordinate(e.w_var).scale(&c)
            })
            .collect();
        assert!(span_equal(&good, &s).unwrap());
        assert!(!span_equal(&good[..7], &s).unwrap());
        let bad = [VectorField::coordinate(VarId::z(1))];
        assert!(matches!(span_equal(&bad, &s), Err(SpanError::InvalidInput(_))));
    }
}

//! Structure constants and invariants of finite-dimensional real Lie algebras
//! of vector fields.

use crate::exact::{Monomial, VarId};
use crate::linalg::{self, RatRow, RatVec, SpanSolver, PRIME};
use crate::vfield::VectorField;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use std::collections::{BTreeMap, HashMap};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LieError {
    #[error("bracket of basis elements {0} and {1} leaves the span")]
    NotClosed(usize, usize),
    #[error("basis is not linearly independent over the reals")]
    Dependent,
}

/// Result of expressing a field in a basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpanResult {
    Coords(Vec<BigRational>),
    NotInSpan,
}

/// Real coordinates of fields: one axis per (target, monomial, real/imaginary part).
#[derive(Debug, Default)]
pub struct FieldCoordinates {
    index: HashMap<(VarId, Monomial, bool), usize>,
}

impl FieldCoordinates {
    pub fn vector(&mut self, f: &VectorField) -> RatVec {
        let mut out = RatVec::new();
        for (v, m, c) in f.terms() {
            for (part, x) in [(false, c.re()), (true, c.im())] {
                if !x.is_zero() {
                    let n = self.index.len();
                    let k = *self.index.entry((v, m.clone(), part)).or_insert(n);
                    out.insert(k, x.clone());
                }
            }
        }
        out
    }

    /// Like [`vector`](Self::vector) but `None` if some axis is unknown.
    pub fn lookup(&self, f: &VectorField) -> Option<RatVec> {
        let mut out = RatVec::new();
        for (v, m, c) in f.terms() {
            for (part, x) in [(false, c.re()), (true, c.im())] {
                if !x.is_zero() {
                    let k = *self.index.get(&(v, m.clone(), part))?;
                    out.insert(k, x.clone());
                }
            }
        }
        Some(out)
    }
}

/// Precomputed solver for real coordinates in a fixed list of fields.
pub struct FieldSpan {
    coords: FieldCoordinates,
    solver: SpanSolver,
}

impl FieldSpan {
    pub fn new(basis: &[VectorField]) -> Self {
        let mut coords = FieldCoordinates::default();
        let vecs: Vec<RatVec> = basis.iter().map(|b| coords.vector(b)).collect();
        FieldSpan { coords, solver: SpanSolver::new(&vecs) }
    }

    pub fn is_independent(&self) -> bool {
        self.solver.is_independent()
    }

    pub fn rank(&self) -> usize {
        self.solver.rank()
    }

    pub fn coordinates(&self, x: &VectorField) -> SpanResult {
        match self.coords.lookup(x).and_then(|v| self.solver.solve(&v)) {
            Some(c) => SpanResult::Coords(c),
            None => SpanResult::NotInSpan,
        }
    }
}

pub fn span_coordinates(x: &VectorField, basis: &[VectorField]) -> SpanResult {
    FieldSpan::new(basis).coordinates(x)
}

pub type SparseCoords = Vec<(usize, BigRational)>;

/// `[e_i, e_j] = Σ_k c[(i,j)][k] e_k`, stored for `i < j` as sparse lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureConstants {
    pub dim: usize,
    pub c: BTreeMap<(usize, usize), SparseCoords>,
}

impl StructureConstants {
    /// Sparse coordinates of `[e_i, e_j]` for any ordered pair.
    pub fn bracket(&self, i: usize, j: usize) -> SparseCoords {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Equal => Vec::new(),
            Less => self.c.get(&(i, j)).cloned().unwrap_or_default(),
            Greater => self
                .c
                .get(&(j, i))
                .map(|v| v.iter().map(|(k, x)| (*k, -x)).collect())
                .unwrap_or_default(),
        }
    }

    /// Dense coordinates of `[e_i, e_j]`.
    pub fn coords(&self, i: usize, j: usize) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.dim];
        for (k, x) in self.bracket(i, j) {
            out[k] = x;
        }
        out
    }

    /// `[x, y]` for coordinate vectors.
    pub fn bracket_vectors(&self, x: &SparseCoords, y: &SparseCoords) -> SparseCoords {
        let mut acc: BTreeMap<usize, BigRational> = BTreeMap::new();
        for (i, a) in x {
            for (j, b) in y {
                if i == j {
                    continue;
                }
                let ab = a * b;
                for (k, c) in self.bracket(*i, *j) {
                    let e = acc.entry(k).or_insert_with(BigRational::zero);
                    *e += &ab * c;
                }
            }
        }
        acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
    }

    /// Abelian algebra of the given dimension.
    pub fn abelian(dim: usize) -> Self {
        StructureConstants { dim, c: BTreeMap::new() }
    }
}

pub fn structure_constants(basis: &[VectorField]) -> Result<StructureConstants, LieError> {
    let span = FieldSpan::new(basis);
    if !span.is_independent() {
        return Err(LieError::Dependent);
    }
    let n = basis.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let results: Vec<Result<SparseCoords, LieError>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let b = basis[i].bracket(&basis[j]);
            match span.coordinates(&b) {
                SpanResult::Coords(c) => Ok(c.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect()),
                SpanResult::NotInSpan => Err(LieError::NotClosed(i, j)),
            }
        })
        .collect();
    let mut c = BTreeMap::new();
    for (p, r) in pairs.into_iter().zip(results) {
        let v = r?;
        if !v.is_empty() {
            c.insert(p, v);
        }
    }
    Ok(StructureConstants { dim: n, c })
}

/// Every nonzero `[e_i, e_j]` lies in the weight `κ_i + κ_j` part.
pub fn grading_check(sc: &StructureConstants, weights: &[i32]) -> bool {
    sc.c.iter().all(|(&(i, j), v)| {
        v.iter().all(|(k, _)| weights.get(*k) == Some(&(weights[i] + weights[j])))
    })
}

/// Largest `|coefficient|` of `[x,[y,z]] + [y,[z,x]] + [z,[x,y]]` over basis triples.
pub fn jacobi_residual(sc: &StructureConstants) -> BigRational {
    let n = sc.dim;
    let unit = |i: usize| -> SparseCoords { vec![(i, BigRational::from_integer(1.into()))] };
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut worst = BigRational::zero();
            for j in i + 1..n {
                for k in j + 1..n {
                    let terms = [
                        sc.bracket_vectors(&unit(i), &sc.bracket(j, k)),
                        sc.bracket_vectors(&unit(j), &sc.bracket(k, i)),
                        sc.bracket_vectors(&unit(k), &sc.bracket(i, j)),
                    ];
                    let mut acc: BTreeMap<usize, BigRational> = BTreeMap::new();
                    for t in terms.iter().flatten() {
                        *acc.entry(t.0).or_insert_with(BigRational::zero) += &t.1;
                    }
                    for v in acc.values() {
                        if v.abs() > worst {
                            worst = v.abs();
                        }
                    }
                }
            }
            worst
        })
        .reduce(BigRational::zero, |a, b| if a > b { a } else { b })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KillingData {
    pub matrix: Vec<Vec<BigRational>>,
    pub inertia: (usize, usize, usize),
}

impl KillingData {
    pub fn nondegenerate(&self) -> bool {
        self.inertia.2 == 0
    }
}

/// `(ad e_i)` as a sparse map `(row l, column k) → c^l_{ik}`.
fn adjoint(sc: &StructureConstants, i: usize) -> HashMap<(usize, usize), BigRational> {
    let mut m = HashMap::new();
    for k in 0..sc.dim {
        for (l, x) in sc.bracket(i, k) {
            m.insert((l, k), x);
        }
    }
    m
}

/// Killing form `B(x, y) = tr(ad x ∘ ad y)` and its inertia.
pub fn killing(sc: &StructureConstants) -> KillingData {
    let n = sc.dim;
    let ads: Vec<HashMap<(usize, usize), BigRational>> = (0..n).into_par_iter().map(|i| adjoint(sc, i)).collect();
    let matrix: Vec<Vec<BigRational>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = BigRational::zero();
                    for (&(l, k), a) in &ads[i] {
                        if let Some(b) = ads[j].get(&(k, l)) {
                            acc += a * b;
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect();
    let inertia = linalg::inertia(&matrix);
    KillingData { matrix, inertia }
}

/// Number of basis triples violating `B([x,y],z) + B(y,[x,z]) = 0`.
pub fn killing_invariance_failures(sc: &StructureConstants, b: &KillingData) -> usize {
    let n = sc.dim;
    let form = |v: &SparseCoords, k: usize| -> BigRational {
        v.iter().fold(BigRational::zero(), |acc, (l, x)| acc + x * &b.matrix[*l][k])
    };
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut bad = 0;
            for j in 0..n {
                let xy = sc.bracket(i, j);
                for k in 0..n {
                    let xz = sc.bracket(i, k);
                    if !(form(&xy, k) + form(&xz, j)).is_zero() {
                        bad += 1;
                    }
                }
            }
            bad
        })
        .sum()
}

/// `B(e_i, e_j) ≠ 0` only when the weights add up to zero.
pub fn killing_weight_pairing(b: &KillingData, weights: &[i32]) -> bool {
    b.matrix.iter().enumerate().all(|(i, row)| {
        row.iter().enumerate().all(|(j, x)| x.is_zero() || weights[i] + weights[j] == 0)
    })
}

/// Dimensions of the center and of the derived algebra `[g, g]`.
pub fn center_and_derived(sc: &StructureConstants) -> (usize, usize) {
    let n = sc.dim;
    // x is central iff Σ_i x_i c^l_{ij} = 0 for all (j, l)
    let mut rows: BTreeMap<(usize, usize), RatRow> = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            for (l, x) in sc.bracket(i, j) {
                rows.entry((j, l)).or_default().push((i as u32, x));
            }
        }
    }
    let rows: Vec<RatRow> = rows.into_values().collect();
    let center = n - linalg::rank_exact(&rows, n);
    let brackets: Vec<RatRow> = sc
        .c
        .values()
        .map(|v| v.iter().map(|(k, x)| (*k as u32, x.clone())).collect())
        .collect();
    let derived = linalg::rank_exact(&brackets, n);
    (center, derived)
}

fn to_mod(sc: &StructureConstants) -> Option<Vec<Vec<Vec<(usize, u64)>>>> {
    let n = sc.dim;
    let mut table = vec![vec![Vec::new(); n]; n];
    for (i, row) in table.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            for (k, x) in sc.bracket(i, j) {
                slot.push((k, linalg::rational_mod(&x)?));
            }
        }
    }
    Some(table)
}

/// Reduce `v` against normalised modular pivots; insert if independent.
fn insert_mod(pivots: &mut BTreeMap<usize, Vec<u64>>, mut v: Vec<u64>) -> Option<Vec<u64>> {
    for (&p, row) in pivots.iter() {
        let s = v[p];
        if s != 0 {
            for (a, b) in v.iter_mut().zip(row) {
                *a = (*a + PRIME - linalg::mulmod(s, *b)) % PRIME;
            }
        }
    }
    let lead = v.iter().position(|&x| x != 0)?;
    let inv = linalg::invmod(v[lead]);
    for a in v.iter_mut() {
        *a = linalg::mulmod(*a, inv);
    }
    for row in pivots.values_mut() {
        let s = row[lead];
        if s != 0 {
            for (a, b) in row.iter_mut().zip(&v) {
                *a = (*a + PRIME - linalg::mulmod(s, *b)) % PRIME;
            }
        }
    }
    pivots.insert(lead, v.clone());
    Some(v)
}

fn ideal_dim_mod(table: &[Vec<Vec<(usize, u64)>>], start: usize) -> usize {
    let n = table.len();
    let mut pivots = BTreeMap::new();
    let mut e = vec![0u64; n];
    e[start] = 1;
    let mut queue = vec![insert_mod(&mut pivots, e).expect("unit vector")];
    while let Some(v) = queue.pop() {
        if pivots.len() == n {
            break;
        }
        for row in table {
            let mut out = vec![0u64; n];
            for (l, &x) in v.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for &(k, c) in &row[l] {
                    out[k] = (out[k] + linalg::mulmod(x, c)) % PRIME;
                }
            }
            if let Some(r) = insert_mod(&mut pivots, out) {
                queue.push(r);
            }
        }
    }
    pivots.len()
}

fn ideal_dim_exact(sc: &StructureConstants, start: usize) -> usize {
    let n = sc.dim;
    let mut ech = linalg::Echelon::new();
    let one = BigRational::from_integer(1.into());
    ech.insert(&vec![(start as u32, one.clone())]);
    let mut queue: Vec<SparseCoords> = vec![vec![(start, one)]];
    while let Some(v) = queue.pop() {
        for j in 0..n {
            if ech.rank() == n {
                return n;
            }
            let w = sc.bracket_vectors(&vec![(j, BigRational::from_integer(1.into()))], &v);
            let row: RatRow = w.iter().map(|(k, x)| (*k as u32, x.clone())).collect();
            if !row.is_empty() && ech.insert(&row) {
                queue.push(w);
            }
        }
    }
    ech.rank()
}

/// Dimension of the ideal generated by each single basis element.
///
/// A full modular dimension certifies the exact one; otherwise the
/// closure is recomputed over the rationals.
pub fn single_element_ideal_dims(sc: &StructureConstants) -> Vec<usize> {
    let table = to_mod(sc);
    (0..sc.dim)
        .into_par_iter()
        .map(|i| match &table {
            Some(t) if ideal_dim_mod(t, i) == sc.dim => sc.dim,
            _ => ideal_dim_exact(sc, i),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{Block, Gq, Poly};

    fn so2_negative_part() -> Vec<VectorField> {
        let w12 = VarId::pair(Block::W, 1, 2);
        let z = |i| Poly::var(VarId::z(i));
        vec![
            VectorField::coordinate(w12),
            VectorField::coordinate(VarId::z(1)).with(w12, -&z(2)),
            VectorField::coordinate(VarId::z(2)).with(w12, z(1)),
        ]
    }

    #[test]
    fn coordinates() {
        let b = so2_negative_part();
        let one = BigRational::from_integer(1.into());
        let zero = BigRational::zero();
        assert_eq!(span_coordinates(&b[1], &b), SpanResult::Coords(vec![zero.clone(), one, zero.clone()]));
        let br = b[1].bracket(&b[2]);
        assert_eq!(
            span_coordinates(&br, &b[..1]),
            SpanResult::Coords(vec![BigRational::from_integer(2.into())])
        );
        let dz1 = VectorField::coordinate(VarId::z(1));
        assert_eq!(span_coordinates(&dz1, &b[..1]), SpanResult::NotInSpan);
    }

    #[test]
    fn closure_and_grading() {
        let b = so2_negative_part();
        let sc = structure_constants(&b).unwrap();
        assert_eq!(sc.bracket(1, 2), vec![(0, BigRational::from_integer(2.into()))]);
        assert!(grading_check(&sc, &[-2, -1, -1]));
        assert!(!grading_check(&sc, &[-1, -1, -2]));
        assert!(jacobi_residual(&sc).is_zero());
        let not_closed = structure_constants(&b[1..]);
        assert_eq!(not_closed, Err(LieError::NotClosed(0, 1)));
        let dep = vec![b[0].clone(), b[0].scale(&Gq::int(3))];
        assert_eq!(structure_constants(&dep), Err(LieError::Dependent));
    }

    #[test]
    fn translations_commute() {
        let t: Vec<VectorField> = (1..=3).map(|i| VectorField::coordinate(VarId::w(i))).collect();
        let sc = structure_constants(&t).unwrap();
        assert!(sc.c.is_empty());
        assert_eq!(center_and_derived(&sc), (3, 0));
        let k = killing(&sc);
        assert_eq!(k.inertia, (0, 0, 3));
    }

    #[test]
    fn abelian_toy() {
        assert_eq!(center_and_derived(&StructureConstants::abelian(3)), (3, 0));
    }

    #[test]
    fn corrupted_constants_break_jacobi() {
        // sl(2): [h,e] = 2e, [h,f] = −2f, [e,f] = h
        let q = |x: i64| BigRational::from_integer(x.into());
        let mut c = BTreeMap::new();
        c.insert((0, 1), vec![(1, q(2))]);
        c.insert((0, 2), vec![(2, q(-2))]);
        c.insert((1, 2), vec![(0, q(1))]);
        let sl2 = StructureConstants { dim: 3, c };
        assert!(jacobi_residual(&sl2).is_zero());
        let k = killing(&sl2);
        assert_eq!(k.inertia, (2, 1, 0));
        assert_eq!(killing_invariance_failures(&sl2, &k), 0);
        assert_eq!(center_and_derived(&sl2), (0, 3));
        assert_eq!(single_element_ideal_dims(&sl2), vec![3, 3, 3]);

        let mut bad = sl2.clone();
        bad.c.insert((1, 2), vec![(0, q(2)), (1, q(1))]);
        assert!(!jacobi_residual(&bad).is_zero());
    }
}

//! Exact sparse linear algebra: echelon forms, kernels, spans and inertia.
//!
//! Sparse rows are sorted `(column, value)` lists without zeros.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, HashMap};

pub type RatRow = Vec<(u32, BigRational)>;
pub type IntRow = Vec<(u32, BigInt)>;

/// Prime used for rank certificates.
pub const PRIME: u64 = 2_305_843_009_213_693_951; // 2^61 - 1

pub(crate) fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    r
}

pub(crate) fn invmod(a: u64) -> u64 {
    powmod(a, PRIME - 2)
}

fn bigint_mod(x: &BigInt) -> u64 {
    let p = BigInt::from(PRIME);
    let r = x.mod_floor(&p);
    u64::try_from(r).expect("reduced residue fits")
}

/// Residue of a rational, or `None` if the prime divides the denominator.
pub fn rational_mod(r: &BigRational) -> Option<u64> {
    let d = bigint_mod(r.denom());
    if d == 0 {
        return None;
    }
    Some(mulmod(bigint_mod(r.numer()), invmod(d)))
}

// ---------------------------------------------------------------------------
// Row echelon over the prime field
// ---------------------------------------------------------------------------

/// Result of eliminating a row list modulo [`PRIME`].
#[derive(Debug, Clone)]
pub struct ModRank {
    pub rank: usize,
    /// Indices of input rows that became pivots (an independent subset).
    pub independent_rows: Vec<usize>,
}

/// Rank modulo [`PRIME`]; `None` if some entry has a denominator divisible by it.
pub fn rank_mod_p(rows: &[RatRow]) -> Option<ModRank> {
    let mut pivots: HashMap<u32, Vec<(u32, u64)>> = HashMap::new();
    let mut independent_rows = Vec::new();
    for (idx, row) in rows.iter().enumerate() {
        let mut r: Vec<(u32, u64)> = Vec::with_capacity(row.len());
        for (c, v) in row {
            let m = rational_mod(v)?;
            if m != 0 {
                r.push((*c, m));
            }
        }
        while let Some(&(lead, val)) = r.first() {
            match pivots.get(&lead) {
                Some(p) => {
                    // r ← r − val·p  (p has leading coefficient 1)
                    r = axpy_mod(&r, p, PRIME - val);
                }
                None => {
                    let inv = invmod(val);
                    let normed: Vec<(u32, u64)> = r.iter().map(|&(c, v)| (c, mulmod(v, inv))).collect();
                    pivots.insert(lead, normed);
                    independent_rows.push(idx);
                    break;
                }
            }
        }
    }
    Some(ModRank { rank: pivots.len(), independent_rows })
}

fn axpy_mod(r: &[(u32, u64)], p: &[(u32, u64)], s: u64) -> Vec<(u32, u64)> {
    let mut out = Vec::with_capacity(r.len() + p.len());
    let (mut i, mut j) = (0, 0);
    while i < r.len() || j < p.len() {
        let take_r = j >= p.len() || (i < r.len() && r[i].0 < p[j].0);
        let take_p = i >= r.len() || (j < p.len() && p[j].0 < r[i].0);
        if take_r {
            out.push(r[i]);
            i += 1;
        } else if take_p {
            out.push((p[j].0, mulmod(p[j].1, s)));
            j += 1;
        } else {
            let v = (r[i].1 + mulmod(p[j].1, s)) % PRIME;
            if v != 0 {
                out.push((r[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Fraction-free echelon over the integers
// ---------------------------------------------------------------------------

/// Scale a rational row to a primitive integer row with positive leading entry.
pub fn primitive_row(row: &RatRow) -> IntRow {
    if row.is_empty() {
        return Vec::new();
    }
    let l = row.iter().fold(BigInt::one(), |acc, (_, v)| acc.lcm(v.denom()));
    let ints: IntRow = row
        .iter()
        .map(|(c, v)| (*c, v.numer() * (&l / v.denom())))
        .collect();
    make_primitive(ints)
}

fn make_primitive(mut row: IntRow) -> IntRow {
    let mut g = BigInt::zero();
    for (_, v) in &row {
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    if row.first().map(|(_, v)| v.is_negative()).unwrap_or(false) {
        g = -g;
    }
    if !g.is_zero() && !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v = &*v / &g;
        }
    }
    row
}

/// `a·r − b·p` for sparse integer rows.
fn combine(r: &IntRow, a: &BigInt, p: &IntRow, b: &BigInt) -> IntRow {
    let mut out = Vec::with_capacity(r.len() + p.len());
    let (mut i, mut j) = (0, 0);
    while i < r.len() || j < p.len() {
        let take_r = j >= p.len() || (i < r.len() && r[i].0 < p[j].0);
        let take_p = i >= r.len() || (j < p.len() && p[j].0 < r[i].0);
        if take_r {
            out.push((r[i].0, a * &r[i].1));
            i += 1;
        } else if take_p {
            out.push((p[j].0, -(b * &p[j].1)));
            j += 1;
        } else {
            let v = a * &r[i].1 - b * &p[j].1;
            if !v.is_zero() {
                out.push((r[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Kernel element attached to its free column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelVector {
    pub free: u32,
    pub coords: RatRow,
}

/// Row echelon form keyed by leading column.
#[derive(Debug, Clone, Default)]
pub struct Echelon {
    pivots: BTreeMap<u32, IntRow>,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = u32> + '_ {
        self.pivots.keys().copied()
    }

    /// Reduce and insert a row; returns whether the rank grew.
    pub fn insert(&mut self, row: &RatRow) -> bool {
        let mut r = primitive_row(row);
        while let Some((lead, _)) = r.first() {
            match self.pivots.get(lead) {
                Some(p) => {
                    let (a, b) = (&p[0].1, &r[0].1);
                    let g = a.gcd(b);
                    let (a, b) = (a / &g, b / &g);
                    r = make_primitive(combine(&r, &a, p, &b));
                }
                None => {
                    let lead = *lead;
                    self.pivots.insert(lead, r);
                    return true;
                }
            }
        }
        false
    }

    /// Canonical kernel basis: one vector per non-pivot column `< ncols`,
    /// equal to 1 there and 0 on every other non-pivot column.
    pub fn kernel(&self, ncols: usize) -> Vec<KernelVector> {
        (0..ncols as u32)
            .filter(|c| !self.pivots.contains_key(c))
            .map(|f| KernelVector { free: f, coords: self.kernel_vector(f) })
            .collect()
    }

    fn kernel_vector(&self, f: u32) -> RatRow {
        let mut x: BTreeMap<u32, BigRational> = BTreeMap::new();
        x.insert(f, BigRational::one());
        for (&p, row) in self.pivots.range(..f).rev() {
            let mut acc = BigRational::zero();
            for (c, v) in &row[1..] {
                if let Some(xc) = x.get(c) {
                    acc += xc * BigRational::from_integer(v.clone());
                }
            }
            if !acc.is_zero() {
                let lead = BigRational::from_integer(row[0].1.clone());
                x.insert(p, -acc / lead);
            }
        }
        x.into_iter().collect()
    }
}

pub fn dot(row: &RatRow, x: &RatRow) -> BigRational {
    let xs: HashMap<u32, &BigRational> = x.iter().map(|(c, v)| (*c, v)).collect();
    row.iter()
        .filter_map(|(c, v)| xs.get(c).map(|xc| v * *xc))
        .fold(BigRational::zero(), |a, b| a + b)
}

/// Canonical kernel of a sparse rational system with `ncols` unknowns.
///
/// A modular pass first certifies the rank; when it leaves no kernel the
/// exact pass is skipped. Otherwise the independent rows are eliminated
/// exactly and the resulting vectors are checked against every row.
pub fn kernel(rows: &[RatRow], ncols: usize) -> Vec<KernelVector> {
    if let Some(m) = rank_mod_p(rows) {
        if m.rank == ncols {
            return Vec::new();
        }
        let mut ech = Echelon::new();
        for &i in &m.independent_rows {
            ech.insert(&rows[i]);
        }
        let ker = ech.kernel(ncols);
        if ker.iter().all(|x| rows.iter().all(|r| dot(r, &x.coords).is_zero())) {
            return ker;
        }
    }
    let mut ech = Echelon::new();
    for r in rows {
        ech.insert(r);
    }
    ech.kernel(ncols)
}

/// Exact rank of a sparse rational system with `ncols` columns.
///
/// A full modular rank is a certificate; otherwise the rows are eliminated exactly.
pub fn rank_exact(rows: &[RatRow], ncols: usize) -> usize {
    if let Some(m) = rank_mod_p(rows) {
        if m.rank == ncols {
            return ncols;
        }
    }
    let mut ech = Echelon::new();
    for r in rows {
        ech.insert(r);
        if ech.rank() == ncols {
            break;
        }
    }
    ech.rank()
}

// ---------------------------------------------------------------------------
// Spans of rational vectors
// ---------------------------------------------------------------------------

pub type RatVec = BTreeMap<usize, BigRational>;

/// Echelon data for solving `x = Σ λ_i b_i` over a fixed list `b`.
#[derive(Debug, Clone)]
pub struct SpanSolver {
    len: usize,
    pivots: BTreeMap<usize, (RatVec, Vec<BigRational>)>,
}

fn sub_scaled(x: &mut RatVec, y: &RatVec, s: &BigRational) {
    for (k, v) in y {
        let e = x.entry(*k).or_insert_with(BigRational::zero);
        *e -= v * s;
        if e.is_zero() {
            x.remove(k);
        }
    }
}

fn sub_scaled_dense(x: &mut [BigRational], y: &[BigRational], s: &BigRational) {
    for (a, b) in x.iter_mut().zip(y) {
        if !b.is_zero() {
            *a -= b * s;
        }
    }
}

impl SpanSolver {
    pub fn new(basis: &[RatVec]) -> Self {
        let mut s = SpanSolver { len: basis.len(), pivots: BTreeMap::new() };
        for (i, b) in basis.iter().enumerate() {
            let mut combo = vec![BigRational::zero(); basis.len()];
            combo[i] = BigRational::one();
            let mut x = b.clone();
            s.reduce(&mut x, &mut combo);
            if let Some((&lead, _)) = x.iter().next() {
                s.pivots.insert(lead, (x, combo));
            }
        }
        s
    }

    fn reduce(&self, x: &mut RatVec, combo: &mut [BigRational]) {
        loop {
            let Some(k) = x.keys().find(|k| self.pivots.contains_key(k)).copied() else {
                return;
            };
            let (row, rc) = &self.pivots[&k];
            let s = &x[&k] / &row[&k];
            sub_scaled(x, row, &s);
            sub_scaled_dense(combo, rc, &s);
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_independent(&self) -> bool {
        self.rank() == self.len
    }

    /// Coordinates of `x`, or `None` if it is outside the span.
    pub fn solve(&self, x: &RatVec) -> Option<Vec<BigRational>> {
        let mut r = x.clone();
        let mut combo = vec![BigRational::zero(); self.len];
        self.reduce(&mut r, &mut combo);
        if !r.is_empty() {
            return None;
        }
        Some(combo.into_iter().map(|c| -c).collect())
    }
}

/// Rank of a list of sparse rational vectors.
pub fn rank(vectors: &[RatVec]) -> usize {
    SpanSolver::new(vectors).rank()
}

// ---------------------------------------------------------------------------
// Inertia of symmetric forms
// ---------------------------------------------------------------------------

/// `(n_plus, n_minus, n_zero)` of a symmetric rational matrix by exact congruence.
///
/// Diagonal pivots are taken in index order; when the remaining diagonal
/// vanishes a hyperbolic 2×2 block is split off and counted as `(1, 1)`.
pub fn inertia(matrix: &[Vec<BigRational>]) -> (usize, usize, usize) {
    let mut a: Vec<Vec<BigRational>> = matrix.to_vec();
    let (mut plus, mut minus, mut zero) = (0, 0, 0);
    while !a.is_empty() {
        let n = a.len();
        if let Some(i) = (0..n).find(|&i| !a[i][i].is_zero()) {
            let d = a[i][i].clone();
            if d.is_positive() {
                plus += 1;
            } else {
                minus += 1;
            }
            let keep: Vec<usize> = (0..n).filter(|&k| k != i).collect();
            let next = keep
                .iter()
                .map(|&r| {
                    keep.iter()
                        .map(|&c| {
                            if a[r][i].is_zero() || a[i][c].is_zero() {
                                a[r][c].clone()
                            } else {
                                &a[r][c] - &a[r][i] * &a[i][c] / &d
                            }
                        })
                        .collect()
                })
                .collect();
            a = next;
            continue;
        }
        let off = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| !a[i][j].is_zero());
        let Some((i, j)) = off else {
            zero += n;
            break;
        };
        plus += 1;
        minus += 1;
        // block E = [[0, e], [e, 0]], E⁻¹ = [[0, 1/e], [1/e, 0]]
        let e = a[i][j].clone();
        let keep: Vec<usize> = (0..n).filter(|&k| k != i && k != j).collect();
        let next = keep
            .iter()
            .map(|&r| {
                keep.iter()
                    .map(|&c| {
                        let corr = (&a[r][i] * &a[j][c] + &a[r][j] * &a[i][c]) / &e;
                        &a[r][c] - corr
                    })
                    .collect()
            })
            .collect();
        a = next;
    }
    (plus, minus, zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn rrow(v: &[(u32, i64)]) -> RatRow {
        v.iter().map(|&(c, x)| (c, q(x))).collect()
    }

    #[test]
    fn kernel_of_small_system() {
        // x0 + x1 + x2 = 0, x1 − x2 = 0
        let rows = vec![rrow(&[(0, 1), (1, 1), (2, 1)]), rrow(&[(1, 1), (2, -1)])];
        let k = kernel(&rows, 3);
        assert_eq!(k, vec![KernelVector { free: 2, coords: rrow(&[(0, -2), (1, 1), (2, 1)]) }]);
    }

    #[test]
    fn kernel_free_columns_follow_column_order() {
        // x0 = x2, x1 arbitrary
        let rows = vec![rrow(&[(0, 2), (2, -2)])];
        let k: Vec<RatRow> = kernel(&rows, 3).into_iter().map(|v| v.coords).collect();
        assert_eq!(k, vec![rrow(&[(1, 1)]), rrow(&[(0, 1), (2, 1)])]);
    }

    #[test]
    fn full_rank_has_empty_kernel() {
        let rows = vec![rrow(&[(0, 1), (1, 1)]), rrow(&[(0, 1), (1, -1)])];
        assert!(kernel(&rows, 2).is_empty());
        assert_eq!(rank_mod_p(&rows).unwrap().rank, 2);
    }

    #[test]
    fn modular_reduction_of_rationals() {
        let half = BigRational::new(1.into(), 2.into());
        let h = rational_mod(&half).unwrap();
        assert_eq!(mulmod(h, 2), 1);
        assert_eq!(rational_mod(&q(-1)).unwrap(), PRIME - 1);
    }

    #[test]
    fn span_solver() {
        let v = |e: &[(usize, i64)]| -> RatVec { e.iter().map(|&(k, x)| (k, q(x))).collect() };
        let s = SpanSolver::new(&[v(&[(0, 1), (1, 1)]), v(&[(1, 1)])]);
        assert!(s.is_independent());
        assert_eq!(s.solve(&v(&[(0, 2), (1, 5)])), Some(vec![q(2), q(3)]));
        assert_eq!(s.solve(&v(&[(2, 1)])), None);
        assert_eq!(rank(&[v(&[(0, 1)]), v(&[(0, 3)])]), 1);
    }

    #[test]
    fn inertia_examples() {
        let m = |r: &[&[i64]]| -> Vec<Vec<BigRational>> {
            r.iter().map(|row| row.iter().map(|&x| q(x)).collect()).collect()
        };
        assert_eq!(inertia(&m(&[&[1, 0], &[0, -3]])), (1, 1, 0));
        assert_eq!(inertia(&m(&[&[0, 2], &[2, 0]])), (1, 1, 0));
        assert_eq!(inertia(&m(&[&[0, 0], &[0, 0]])), (0, 0, 2));
        assert_eq!(inertia(&m(&[&[2, 1, 0], &[1, 2, 0], &[0, 0, 0]])), (2, 0, 1));
        // zero diagonal, hyperbolic plus a definite part
        assert_eq!(inertia(&m(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, -5]])), (1, 2, 0));
    }
}

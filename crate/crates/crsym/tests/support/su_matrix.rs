//! Independent construction of the su-family symmetries from the matrix action.
//!
//! Coordinates are packed into an `l x N` matrix `Z = [z | u | v]` and an `l x l`
//! matrix `H` with `H_aa = w_aa`, `H_ac = w_ca + w_ac`, `H_ca = w_ca - w_ac` for `a < c`.
//! The quadric reads `H + H^* = 2 Z J Z^*` where `J` pairs `z_i` with itself and `u_k` with `v_k`.
//! The graded pieces act by
//!   -2: `H' = A` (A anti-hermitian)
//!   -1: `Z' = B`, `H' = 2 Z J B^*`
//!    0: `Z' = P Z + Z Q`, `H' = P H + H P^*` (Q in u(J))
//!    1: `Z' = H C - 2 (Z J C^*) Z`, `H' = -2 (Z J C^*) H`
//!    2: `Z' = -H (iA) Z`, `H' = -H (iA) H` (A hermitian)

#![allow(dead_code)]

use crsym::exact::{Gq, Poly, VarId};
use crsym::quadric::{su_u, su_v, su_w, su_z};
use crsym::vfield::VectorField;

#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub l: usize,
    pub m: usize,
    pub n: usize,
}

/// Column of the packed `Z` matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Col {
    Z(usize),
    U(usize),
    V(usize),
}

impl Shape {
    pub fn width(&self) -> usize {
        self.n + 2 * self.m
    }

    fn col_index(&self, c: Col) -> usize {
        match c {
            Col::Z(i) => i - 1,
            Col::U(k) => self.n + k - 1,
            Col::V(k) => self.n + self.m + k - 1,
        }
    }

    fn col_var(&self, a: usize, idx: usize) -> VarId {
        if idx < self.n {
            su_z(a, idx + 1)
        } else if idx < self.n + self.m {
            su_u(a, idx - self.n + 1)
        } else {
            su_v(a, idx - self.n - self.m + 1)
        }
    }

    /// `J` applied to a column index.
    fn dual(&self, idx: usize) -> usize {
        if idx < self.n {
            idx
        } else if idx < self.n + self.m {
            idx + self.m
        } else {
            idx - self.m
        }
    }
}

type Mat = Vec<Vec<Poly>>;

fn zeros(r: usize, c: usize) -> Mat {
    vec![vec![Poly::zero(); c]; r]
}

fn mul(a: &Mat, b: &Mat) -> Mat {
    let (r, k, c) = (a.len(), b.len(), b.first().map_or(0, Vec::len));
    let mut out = zeros(r, c);
    for i in 0..r {
        for t in 0..k {
            if a[i][t].is_zero() {
                continue;
            }
            for j in 0..c {
                if !b[t][j].is_zero() {
                    out[i][j] += &(&a[i][t] * &b[t][j]);
                }
            }
        }
    }
    out
}

fn add(a: &Mat, b: &Mat) -> Mat {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(p, q)| p + q).collect()).collect()
}

fn scale(a: &Mat, c: &Gq) -> Mat {
    a.iter().map(|row| row.iter().map(|p| p.scale(c)).collect()).collect()
}

/// Conjugate transpose of a constant matrix.
fn star(a: &Mat) -> Mat {
    let (r, c) = (a.len(), a.first().map_or(0, Vec::len));
    let mut out = zeros(c, r);
    for i in 0..r {
        for j in 0..c {
            out[j][i] = a[i][j].conj();
        }
    }
    out
}

fn w(a: usize, c: usize) -> Poly {
    Poly::var(su_w(a, c))
}

pub fn z_matrix(s: &Shape) -> Mat {
    (1..=s.l).map(|a| (0..s.width()).map(|k| Poly::var(s.col_var(a, k))).collect()).collect()
}

pub fn h_matrix(s: &Shape) -> Mat {
    let mut h = zeros(s.l, s.l);
    for a in 1..=s.l {
        for c in 1..=s.l {
            h[a - 1][c - 1] = match a.cmp(&c) {
                std::cmp::Ordering::Equal => w(a, a),
                std::cmp::Ordering::Less => &w(c, a) + &w(a, c),
                std::cmp::Ordering::Greater => &w(a, c) - &w(c, a),
            };
        }
    }
    h
}

/// `X J` for a matrix with `N` columns.
fn times_j(s: &Shape, x: &Mat) -> Mat {
    x.iter()
        .map(|row| (0..s.width()).map(|k| row[s.dual(k)].clone()).collect())
        .collect()
}

fn field_from(s: &Shape, zp: &Mat, hp: &Mat) -> VectorField {
    let mut f = VectorField::zero();
    let half = Gq::frac(1, 2);
    for a in 1..=s.l {
        for k in 0..s.width() {
            f.add_component(s.col_var(a, k), &zp[a - 1][k]);
        }
        f.add_component(su_w(a, a), &hp[a - 1][a - 1]);
        for c in a + 1..=s.l {
            let (ac, ca) = (&hp[a - 1][c - 1], &hp[c - 1][a - 1]);
            f.add_component(su_w(c, a), &(ac + ca).scale(&half));
            f.add_component(su_w(a, c), &(ac - ca).scale(&half));
        }
    }
    f
}

/// `c E_{a, col}` as an `l x N` constant matrix.
pub fn unit_b(s: &Shape, a: usize, col: Col, c: Gq) -> Mat {
    let mut b = zeros(s.l, s.width());
    b[a - 1][s.col_index(col)] = Poly::constant(c);
    b
}

/// Constant `l x l` matrix from entries `(a, c, value)`.
pub fn small(s: &Shape, entries: &[(usize, usize, Gq)]) -> Mat {
    let mut a = zeros(s.l, s.l);
    for (i, j, v) in entries {
        a[i - 1][j - 1] = &a[i - 1][j - 1] + &Poly::constant(v.clone());
    }
    a
}

pub fn translation(s: &Shape, a: &Mat) -> VectorField {
    field_from(s, &zeros(s.l, s.width()), a)
}

pub fn minus_one(s: &Shape, b: &Mat) -> VectorField {
    let hp = scale(&mul(&times_j(s, &z_matrix(s)), &star(b)), &Gq::int(2));
    field_from(s, b, &hp)
}

/// Degree-zero piece with `P = 0`.
pub fn zero_q(s: &Shape, q: &Mat) -> VectorField {
    field_from(s, &mul(&z_matrix(s), q), &zeros(s.l, s.l))
}

/// `n x n` constant matrix on the columns of `Z` from entries `(col, col, value)`.
pub fn column_matrix(s: &Shape, entries: &[(Col, Col, Gq)]) -> Mat {
    let mut q = zeros(s.width(), s.width());
    for (a, b, v) in entries {
        let (a, b) = (s.col_index(*a), s.col_index(*b));
        q[a][b] = &q[a][b] + &Poly::constant(v.clone());
    }
    q
}

/// Whether `Q` preserves the pairing: `Q J + J Q^* = 0`, with `J` real symmetric.
pub fn preserves_pairing(s: &Shape, q: &Mat) -> bool {
    let qs = star(q);
    (0..s.width()).all(|a| (0..s.width()).all(|b| (&q[a][s.dual(b)] + &qs[s.dual(a)][b]).is_zero()))
}

/// `J` applied to a column.
pub fn dual_col(c: Col) -> Col {
    match c {
        Col::Z(i) => Col::Z(i),
        Col::U(k) => Col::V(k),
        Col::V(k) => Col::U(k),
    }
}

/// Degree-zero piece with `Q = 0`.
pub fn zero_p(s: &Shape, p: &Mat) -> VectorField {
    let h = h_matrix(s);
    let hp = add(&mul(p, &h), &mul(&h, &star(p)));
    field_from(s, &mul(p, &z_matrix(s)), &hp)
}

pub fn plus_one(s: &Shape, c: &Mat) -> VectorField {
    let z = z_matrix(s);
    let h = h_matrix(s);
    let k = scale(&mul(&times_j(s, &z), &star(c)), &Gq::int(-2));
    let zp = add(&mul(&h, c), &mul(&k, &z));
    field_from(s, &zp, &mul(&k, &h))
}

/// Degree-two piece for hermitian `A`.
pub fn plus_two(s: &Shape, a: &Mat) -> VectorField {
    let z = z_matrix(s);
    let h = h_matrix(s);
    let m = scale(&mul(&h, a), &Gq::gauss(0, -1));
    field_from(s, &mul(&m, &z), &mul(&m, &h))
}

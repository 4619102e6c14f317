//! Quadric CR models: defining equations `Re/Im w_j = Re/Im T_j(z, z̄)`.

use crate::exact::{Block, Gq, Monomial, Poly, VarId};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unrecognised model selector '{0}' (expected e2, e3, so:<n> or su:<l>,<m>,<n>)")]
    BadSelector(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EqType {
    RePart,
    ImPart,
}

impl EqType {
    /// `+1` for real-part equations, `−1` for imaginary-part equations.
    pub fn sign(self) -> Gq {
        match self {
            EqType::RePart => Gq::one(),
            EqType::ImPart => Gq::int(-1),
        }
    }
}

/// `w + s·w̄ = T + s·T̄` with `s = ±1` and `T = Σ H[a,b] z_a z̄_b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefiningEquation {
    pub w_var: VarId,
    pub eq_type: EqType,
    pub hermitian: BTreeMap<(VarId, VarId), Gq>,
}

impl DefiningEquation {
    pub fn new(w_var: VarId, eq_type: EqType) -> Self {
        DefiningEquation { w_var, eq_type, hermitian: BTreeMap::new() }
    }

    fn entry(mut self, a: VarId, b: VarId, c: Gq) -> Self {
        let slot = self.hermitian.entry((a, b)).or_default();
        *slot += &c;
        if slot.is_zero() {
            self.hermitian.remove(&(a, b));
        }
        self
    }

    /// `T(z, z̄)`.
    pub fn t_poly(&self) -> Poly {
        Poly::from_terms(
            self.hermitian
                .iter()
                .map(|(&(a, b), c)| (Monomial::from_pairs([(a, 1), (b.conj(), 1)]), c.clone())),
        )
    }

    /// `T + s·T̄`, the real constraint on the z-side.
    pub fn constraint_poly(&self) -> Poly {
        let t = self.t_poly();
        &t + &t.conj().scale(&self.eq_type.sign())
    }

    /// `ρ = w + s·w̄ − (T + s·T̄)`.
    pub fn rho(&self) -> Poly {
        let s = self.eq_type.sign();
        let w = Poly::var(self.w_var);
        let wb = Poly::var(self.w_var.conj()).scale(&s);
        &(&w + &wb) - &self.constraint_poly()
    }

    /// Right-hand side for eliminating `w̄` on the quadric.
    pub fn wbar_rule(&self) -> Poly {
        let w = Poly::var(self.w_var);
        let c = self.constraint_poly();
        match self.eq_type {
            EqType::RePart => &c - &w,
            EqType::ImPart => &w - &c,
        }
    }

    pub fn scaled(&self, r: &Gq) -> DefiningEquation {
        DefiningEquation {
            w_var: self.w_var,
            eq_type: self.eq_type,
            hermitian: self.hermitian.iter().map(|(k, c)| (*k, c * r)).collect(),
        }
    }
}

/// Which catalog family a model belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    E2,
    E3,
    So(usize),
    Su(usize, usize, usize),
}

impl Family {
    pub fn selector(&self) -> String {
        match *self {
            Family::E2 => "e2".into(),
            Family::E3 => "e3".into(),
            Family::So(n) => format!("so:{n}"),
            Family::Su(l, m, n) => format!("su:{l},{m},{n}"),
        }
    }

    pub fn params(&self) -> Vec<usize> {
        match *self {
            Family::E2 | Family::E3 => vec![],
            Family::So(n) => vec![n],
            Family::Su(l, m, n) => vec![l, m, n],
        }
    }

    /// Name of the real form the symmetry algebra should be.
    pub fn real_form(&self) -> String {
        match *self {
            Family::E2 => "E6(2)".into(),
            Family::E3 => "E6(-14)".into(),
            Family::So(n) => format!("so({},{})", n + 2, n),
            Family::Su(l, m, n) => format!("su({},{})", l + m + n, l + m),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadricModel {
    pub name: String,
    pub family: Family,
    pub z_vars: Vec<VarId>,
    pub w_vars: Vec<VarId>,
    pub equations: Vec<DefiningEquation>,
    pub expected_dims: BTreeMap<i32, usize>,
}

impl QuadricModel {
    pub fn crdim(&self) -> usize {
        self.z_vars.len()
    }

    pub fn codim(&self) -> usize {
        self.w_vars.len()
    }

    pub fn expected_total(&self) -> usize {
        self.expected_dims.values().sum()
    }

    pub fn expected_dim(&self, k: i32) -> usize {
        self.expected_dims.get(&k).copied().unwrap_or(0)
    }

    /// Coordinates in canonical order: z-block first, then w-block.
    pub fn holomorphic_vars(&self) -> Vec<VarId> {
        let mut v: Vec<VarId> = self.z_vars.iter().chain(&self.w_vars).copied().collect();
        v.sort();
        v
    }

    pub fn has_var(&self, v: VarId) -> bool {
        let h = VarId { kind: if v.is_w_like() { crate::exact::Kind::W } else { crate::exact::Kind::Z }, ..v };
        self.z_vars.contains(&h) || self.w_vars.contains(&h)
    }

    /// Elimination rules `w̄_k ↦ …` for every equation.
    pub fn wbar_bindings(&self) -> BTreeMap<VarId, Poly> {
        self.equations
            .iter()
            .map(|e| (e.w_var.conj(), e.wbar_rule()))
            .collect()
    }

    /// Same model with equation `k` rescaled by `r` on its Hermitian side.
    pub fn with_scaled_equation(&self, k: usize, r: &Gq) -> QuadricModel {
        let mut m = self.clone();
        m.equations[k] = m.equations[k].scaled(r);
        m
    }
}

impl fmt::Display for QuadricModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (CR dim {}, codim {})", self.name, self.crdim(), self.codim())
    }
}

fn dims(d2: usize, d1: usize, d0: usize) -> BTreeMap<i32, usize> {
    [(-2, d2), (-1, d1), (0, d0), (1, d1), (2, d2)].into_iter().collect()
}

fn from_pairs(w: u16, ty: EqType, pairs: &[(i64, u16, u16)]) -> DefiningEquation {
    pairs.iter().fold(DefiningEquation::new(VarId::w(w), ty), |e, &(c, a, b)| {
        e.entry(VarId::z(a), VarId::z(b), Gq::int(c))
    })
}

pub fn build_e2() -> QuadricModel {
    use EqType::*;
    let shared: &[(i64, u16, u16)] = &[(1, 2, 7), (1, 3, 6), (-1, 5, 4), (-1, 8, 1)];
    let equations = vec![
        from_pairs(1, RePart, &[(1, 1, 4), (1, 2, 3)]),
        from_pairs(2, RePart, &[(1, 1, 6), (1, 2, 5)]),
        from_pairs(3, ImPart, &[(1, 1, 7), (1, 5, 3)]),
        from_pairs(4, ImPart, shared),
        from_pairs(5, RePart, shared),
        from_pairs(6, ImPart, &[(1, 2, 8), (1, 6, 4)]),
        from_pairs(7, RePart, &[(1, 3, 8), (1, 4, 7)]),
        from_pairs(8, RePart, &[(1, 5, 8), (1, 6, 7)]),
    ];
    QuadricModel {
        name: "E_II".into(),
        family: Family::E2,
        z_vars: (1..=8).map(VarId::z).collect(),
        w_vars: (1..=8).map(VarId::w).collect(),
        equations,
        expected_dims: dims(8, 16, 30),
    }
}

/// Weight of the diagonal entries of the first two equations of `E_III`.
///
/// With weight `1/2` the real constraint reads `w + w̄ = Σ|z_a|²`, which is
/// the normalisation under which the listed `E_III` generators are tangent.
pub const E3_DIAGONAL: (i64, i64) = (1, 2);

pub fn build_e3() -> QuadricModel {
    build_e3_with_diagonal(Gq::frac(E3_DIAGONAL.0, E3_DIAGONAL.1))
}

/// `E_III` with a chosen weight on the diagonal Hermitian forms.
pub fn build_e3_with_diagonal(d: Gq) -> QuadricModel {
    use EqType::*;
    let diag = |w: u16, range: std::ops::RangeInclusive<u16>| {
        range.fold(DefiningEquation::new(VarId::w(w), RePart), |e, a| {
            e.entry(VarId::z(a), VarId::z(a), d.clone())
        })
    };
    let p3: &[(i64, u16, u16)] = &[(1, 1, 7), (1, 2, 8), (1, 5, 3), (1, 6, 4)];
    let p5: &[(i64, u16, u16)] = &[(1, 1, 6), (-1, 3, 8), (1, 5, 2), (-1, 7, 4)];
    let p7: &[(i64, u16, u16)] = &[(1, 2, 6), (1, 3, 7), (-1, 5, 1), (-1, 8, 4)];
    let equations = vec![
        diag(1, 1..=4),
        diag(2, 5..=8),
        from_pairs(3, ImPart, p3),
        from_pairs(4, RePart, p3),
        from_pairs(5, ImPart, p5),
        from_pairs(6, RePart, p5),
        from_pairs(7, ImPart, p7),
        from_pairs(8, RePart, p7),
    ];
    QuadricModel {
        name: "E_III".into(),
        family: Family::E3,
        z_vars: (1..=8).map(VarId::z).collect(),
        w_vars: (1..=8).map(VarId::w).collect(),
        equations,
        expected_dims: dims(8, 16, 30),
    }
}

/// `w_{ij}` for `i < j` in the so-family.
pub fn so_w(i: usize, j: usize) -> VarId {
    debug_assert!(i < j);
    VarId::pair(Block::W, i as u16, j as u16)
}

pub fn build_so(n: usize) -> Result<QuadricModel, ModelError> {
    if n < 2 {
        return Err(ModelError::InvalidParameter(format!("so-model needs n >= 2, got {n}")));
    }
    let mut w_vars = Vec::new();
    let mut equations = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            let w = so_w(i, j);
            w_vars.push(w);
            equations.push(
                DefiningEquation::new(w, EqType::ImPart)
                    .entry(VarId::z(i as u16), VarId::z(j as u16), Gq::one()),
            );
        }
    }
    let c = n * (n - 1) / 2;
    Ok(QuadricModel {
        name: format!("so({},{})", n + 2, n),
        family: Family::So(n),
        z_vars: (1..=n as u16).map(VarId::z).collect(),
        w_vars,
        equations,
        expected_dims: dims(c, 2 * n, n * n + 1),
    })
}

pub fn su_z(a: usize, i: usize) -> VarId {
    VarId::pair(Block::Z, a as u16, i as u16)
}

pub fn su_u(a: usize, k: usize) -> VarId {
    VarId::pair(Block::U, a as u16, k as u16)
}

pub fn su_v(a: usize, k: usize) -> VarId {
    VarId::pair(Block::V, a as u16, k as u16)
}

pub fn su_w(a: usize, c: usize) -> VarId {
    VarId::pair(Block::W, a as u16, c as u16)
}

pub fn build_su(l: usize, m: usize, n: usize) -> Result<QuadricModel, ModelError> {
    if l < 1 {
        return Err(ModelError::InvalidParameter(format!("su-model needs l >= 1, got {l}")));
    }
    if m == 0 && n == 0 {
        return Err(ModelError::InvalidParameter("su-model needs (m, n) != (0, 0)".into()));
    }
    let mut z_vars = Vec::new();
    for a in 1..=l {
        z_vars.extend((1..=n).map(|i| su_z(a, i)));
    }
    for a in 1..=l {
        z_vars.extend((1..=m).map(|k| su_u(a, k)));
    }
    for a in 1..=l {
        z_vars.extend((1..=m).map(|k| su_v(a, k)));
    }
    let mut w_vars = Vec::new();
    let mut equations = Vec::new();
    for a in 1..=l {
        for c in 1..=l {
            let w = su_w(a, c);
            w_vars.push(w);
            let ty = if a < c { EqType::ImPart } else { EqType::RePart };
            let mut e = DefiningEquation::new(w, ty);
            for i in 1..=n {
                e = e.entry(su_z(a, i), su_z(c, i), Gq::one());
            }
            for k in 1..=m {
                e = e.entry(su_u(a, k), su_v(c, k), Gq::one());
                e = e.entry(su_v(a, k), su_u(c, k), Gq::one());
            }
            equations.push(e);
        }
    }
    let big_n = n + 2 * m;
    Ok(QuadricModel {
        name: format!("su({},{})", l + m + n, l + m),
        family: Family::Su(l, m, n),
        z_vars,
        w_vars,
        equations,
        expected_dims: dims(l * l, 2 * big_n * l, big_n * big_n + 2 * l * l - 1),
    })
}

pub fn build(family: Family) -> Result<QuadricModel, ModelError> {
    match family {
        Family::E2 => Ok(build_e2()),
        Family::E3 => Ok(build_e3()),
        Family::So(n) => build_so(n),
        Family::Su(l, m, n) => build_su(l, m, n),
    }
}

/// Parse `e2`, `e3`, `so:<n>` or `su:<l>,<m>,<n>`.
pub fn parse_selector(s: &str) -> Result<Family, ModelError> {
    let bad = || ModelError::BadSelector(s.to_string());
    let t = s.trim().to_ascii_lowercase();
    match t.as_str() {
        "e2" => return Ok(Family::E2),
        "e3" => return Ok(Family::E3),
        _ => {}
    }
    let (head, rest) = t.split_once(':').ok_or_else(bad)?;
    let nums: Vec<usize> = rest
        .split(',')
        .map(|x| x.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad())?;
    match (head, nums.as_slice()) {
        ("so", &[n]) => Ok(Family::So(n)),
        ("su", &[l, m, n]) => Ok(Family::Su(l, m, n)),
        _ => Err(bad()),
    }
}

/// Parse a selector and build the model.
pub fn model_from_selector(s: &str) -> Result<QuadricModel, ModelError> {
    build(parse_selector(s)?)
}

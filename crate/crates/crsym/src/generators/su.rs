use super::{var, FieldBuilder, GeneratorError, GeneratorSet, NamedGenerator};
use crate::exact::{Gq, Poly, VarId};
use crate::quadric::{self, su_u, su_v, su_w, su_z};
use crate::vfield::VectorField;

/// How to read a displayed formula.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Reading {
    /// Exactly as printed. An index left unbound by its sum ranges over all
    /// admissible values; a symbol outside the coordinate set contributes zero.
    Literal,
    /// With the index repairs recorded in the family note.
    Repaired,
}

use Reading::{Literal, Repaired};

#[derive(Clone, Copy)]
struct Shape {
    l: usize,
    m: usize,
    n: usize,
}

/// Column letter of the `l x (n + 2m)` coordinate block.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Letter {
    Z,
    U,
    V,
}

impl Letter {
    fn var(self, a: usize, p: usize) -> VarId {
        match self {
            Letter::Z => su_z(a, p),
            Letter::U => su_u(a, p),
            Letter::V => su_v(a, p),
        }
    }

    fn poly(self, a: usize, p: usize) -> Poly {
        var(self.var(a, p))
    }

    fn symbol(self) -> &'static str {
        match self {
            Letter::Z => "z",
            Letter::U => "u",
            Letter::V => "v",
        }
    }

    fn width(self, s: &Shape) -> usize {
        match self {
            Letter::Z => s.n,
            _ => s.m,
        }
    }
}

fn w(a: usize, c: usize) -> Poly {
    var(su_w(a, c))
}

fn wv(a: usize, c: usize) -> VarId {
    su_w(a, c)
}

fn c(g: Gq) -> Poly {
    Poly::constant(g)
}

fn ii() -> Poly {
    c(Gq::i())
}

fn k(n: i64) -> Poly {
    c(Gq::int(n))
}

/// `Σ sign · w_{ab} w_{cd}`.
fn ww(terms: &[(i64, [usize; 4])]) -> Poly {
    let mut out = Poly::zero();
    for (sign, [a, b, x, y]) in terms {
        out += &(&w(*a, *b) * &w(*x, *y)).scale(&Gq::int(*sign));
    }
    out
}

/// Pair label `12` or `10,11`.
fn pl(i: usize, j: usize) -> String {
    super::pair_label(i, j)
}

fn comma(i: usize, j: usize) -> String {
    format!("{i},{j}")
}

struct Family {
    entries: Vec<NamedGenerator>,
}

impl Family {
    fn new() -> Self {
        Family { entries: Vec::new() }
    }

    /// Record an entry built under both readings.
    fn push<F: Fn(Reading) -> VectorField>(&mut self, name: String, weight: i32, note: &str, build: F) {
        let literal = build(Literal);
        let repaired = build(Repaired);
        let g = NamedGenerator::new(name, weight, literal.clone());
        self.entries.push(if repaired != literal { g.repaired(note, repaired) } else { g });
    }
}

pub fn gens_su(l: usize, m: usize, n: usize) -> Result<GeneratorSet, GeneratorError> {
    let model = quadric::build_su(l, m, n)?;
    let s = Shape { l, m, n };
    let last = format!("IL_{{{}}}", comma(l, l));
    let mut set = GeneratorSet::new(model);
    for g in listed(&s).into_iter().filter(|g| g.name != last) {
        set.push(g);
    }
    set.combine(&last, trace_relation(&s));
    set.check_homogeneous()?;
    Ok(set)
}

/// Every displayed entry in display order.
fn listed(s: &Shape) -> Vec<NamedGenerator> {
    let mut fam = Family::new();
    minus_two(s, &mut fam);
    minus_one(s, &mut fam);
    zero_free(s, &mut fam);
    zero_w(s, &mut fam);
    plus_one(s, &mut fam);
    plus_two(s, &mut fam);
    fam.entries
}

/// `IL_{l,l}` as the combination forced by `Σ_i IL_{i,i} = Σ_j IL_j^7 + Σ_k IL_{kk}^1`.
fn trace_relation(s: &Shape) -> Vec<(String, Gq)> {
    let mut terms: Vec<(String, Gq)> = (1..=s.n).map(|j| (format!("IL_{j}^7"), Gq::one())).collect();
    terms.extend((1..=s.m).map(|k| (format!("IL_{{{}}}^1", pl(k, k)), Gq::one())));
    terms.extend((1..s.l).map(|i| (format!("IL_{{{}}}", comma(i, i)), Gq::int(-1))));
    terms
}

fn minus_two(s: &Shape, fam: &mut Family) {
    let mut b = FieldBuilder::default();
    for a in 1..=s.l {
        for c2 in a + 1..=s.l {
            let f = b.add(wv(a, c2), k(1)).build();
            fam.push(format!("L_{{w_{{{}}}}}", pl(a, c2)), -2, "", |_| f.clone());
        }
    }
    for a in 1..=s.l {
        for c2 in 1..=a {
            let f = b.add(wv(a, c2), ii()).build();
            fam.push(format!("IL_{{w_{{{}}}}}", pl(a, c2)), -2, "", |_| f.clone());
        }
    }
}

/// `L_{x}` for `x = target(i, p)` with side coefficients `coef(r) = coef_letter(r, p)`.
fn translation(s: &Shape, target: VarId, coef: Letter, i: usize, p: usize, imaginary: bool) -> VectorField {
    let mut b = FieldBuilder::default();
    let (lead, side) = if imaginary { (ii(), c(Gq::gauss(0, -1))) } else { (k(1), k(1)) };
    b.add(target, lead);
    for r in 1..i {
        b.add(wv(r, i), &side * &coef.poly(r, p));
    }
    for s2 in 1..i {
        b.add(wv(i, s2), &side * &coef.poly(s2, p));
    }
    b.add(wv(i, i), &side * &coef.poly(i, p).scale(&Gq::int(2)));
    for r in i + 1..=s.l {
        b.add(wv(r, i), &side * &coef.poly(r, p));
    }
    for s2 in i + 1..=s.l {
        b.sub(wv(i, s2), &side * &coef.poly(s2, p));
    }
    b.build()
}

fn minus_one(s: &Shape, fam: &mut Family) {
    let blocks = [(Letter::Z, Letter::Z), (Letter::U, Letter::V), (Letter::V, Letter::U)];
    for (target, coef) in blocks {
        for imaginary in [false, true] {
            for i in 1..=s.l {
                for p in 1..=target.width(s) {
                    let f = translation(s, target.var(i, p), coef, i, p, imaginary);
                    let prefix = if imaginary { "IL" } else { "L" };
                    let name = format!("{prefix}_{{{}_{{{}}}}}", target.symbol(), pl(i, p));
                    fam.push(name, -1, "", |_| f.clone());
                }
            }
        }
    }
}

/// `Σ_{l'} x_{l' a} ∂y_{l' b}`.
fn column_shift(s: &Shape, x: Letter, a: usize, y: Letter, b2: usize) -> VectorField {
    let mut b = FieldBuilder::default();
    for lp in 1..=s.l {
        b.add(y.var(lp, b2), x.poly(lp, a));
    }
    b.build()
}

fn zero_free(s: &Shape, fam: &mut Family) {
    use Letter::{U, V, Z};
    let (m, n) = (s.m, s.n);
    for imaginary in [false, true] {
        let (prefix, coef, second) = if imaginary {
            ("IL", Gq::i(), Gq::i())
        } else {
            ("L", Gq::one(), Gq::int(-1))
        };
        let mut emit = |name: String, x: (Letter, usize, Letter, usize), y: (Letter, usize, Letter, usize)| {
            let f = &column_shift(s, x.0, x.1, x.2, x.3).scale(&coef)
                + &column_shift(s, y.0, y.1, y.2, y.3).scale(&second);
            fam.push(name, 0, "", |_| f.clone());
        };
        for k1 in 1..=m {
            for k2 in 1..=m {
                emit(format!("{prefix}_{{{}}}^1", pl(k1, k2)), (U, k1, U, k2), (V, k2, V, k1));
            }
        }
        for k1 in 1..=m {
            for k2 in k1 + 1..=m {
                emit(format!("{prefix}_{{{}}}^2", pl(k1, k2)), (V, k1, U, k2), (V, k2, U, k1));
            }
        }
        for k1 in 1..=m {
            for k2 in k1 + 1..=m {
                emit(format!("{prefix}_{{{}}}^3", pl(k1, k2)), (U, k1, V, k2), (U, k2, V, k1));
            }
        }
        for i in 1..=n {
            for kk in 1..=m {
                emit(format!("{prefix}_{{{}}}^4", comma(i, kk)), (U, kk, Z, i), (Z, i, V, kk));
            }
        }
        for i in 1..=n {
            for kk in 1..=m {
                emit(format!("{prefix}_{{{}}}^5", comma(i, kk)), (V, kk, Z, i), (Z, i, U, kk));
            }
        }
        for i1 in 1..=n {
            for i2 in i1 + 1..=n {
                emit(format!("{prefix}_{{{}}}^6", comma(i1, i2)), (Z, i1, Z, i2), (Z, i2, Z, i1));
            }
        }
    }
    for i in 1..=n {
        let f = column_shift(s, Z, i, Z, i).scale(&Gq::i());
        fam.push(format!("IL_{i}^7"), 0, "", |_| f.clone());
    }
    for kk in 1..=m {
        let f = column_shift(s, V, kk, U, kk).scale(&Gq::i());
        fam.push(format!("IL_{kk}^8"), 0, "", |_| f.clone());
    }
    for kk in 1..=m {
        let f = column_shift(s, U, kk, V, kk).scale(&Gq::i());
        fam.push(format!("IL_{kk}^9"), 0, "", |_| f.clone());
    }
}

/// `Σ x_{i p} ∂x_{j p}` over all three letters.
fn row_shift(s: &Shape, i: usize, j: usize, coef: &Poly) -> FieldBuilder {
    let mut b = FieldBuilder::default();
    for letter in [Letter::Z, Letter::U, Letter::V] {
        for p in 1..=letter.width(s) {
            b.add(letter.var(j, p), coef * &letter.poly(i, p));
        }
    }
    b
}

const IL_II_NOTE: &str =
    "the second sum over i<s<=l is printed as w_{si} d/dw_{is} a second time; read as w_{is} d/dw_{si}";

fn zero_w(s: &Shape, fam: &mut Family) {
    let l = s.l;
    for i in 1..=l {
        for j in i + 1..=l {
            let mut b = row_shift(s, i, j, &k(1));
            for s2 in 1..i {
                b.add(wv(j, s2), w(i, s2));
            }
            for s2 in i..=j {
                b.add(wv(j, s2), w(s2, i));
            }
            for s2 in j + 1..=l {
                b.add(wv(j, s2), w(i, s2));
            }
            for r in 1..i {
                b.add(wv(r, j), w(r, i));
            }
            for r in i + 1..j {
                b.sub(wv(r, j), w(i, r));
            }
            for r in j..=l {
                b.add(wv(r, j), w(r, i));
            }
            let f = b.build();
            fam.push(format!("L_{{{}}}", comma(i, j)), 0, "", |_| f.clone());
        }
    }
    for i in 1..=l {
        for j in 1..=i {
            let mut b = row_shift(s, i, j, &k(1));
            for s2 in 1..=j {
                b.add(wv(j, s2), w(i, s2));
            }
            for s2 in j + 1..i {
                b.sub(wv(j, s2), w(s2, i));
            }
            for s2 in i + 1..=l {
                b.add(wv(j, s2), w(i, s2));
            }
            for r in 1..j {
                b.add(wv(r, j), w(r, i));
            }
            for r in j..=i {
                b.add(wv(r, j), w(i, r));
            }
            for r in i + 1..=l {
                b.add(wv(r, j), w(r, i));
            }
            let f = b.build();
            fam.push(format!("L_{{{}}}", comma(i, j)), 0, "", |_| f.clone());
        }
    }
    for i in 1..=l {
        for j in i + 1..=l {
            let mut b = row_shift(s, i, j, &ii());
            let iw = |a: usize, c2: usize| &ii() * &w(a, c2);
            for s2 in 1..i {
                b.sub(wv(j, s2), iw(s2, i));
            }
            for s2 in i + 1..=j {
                b.add(wv(j, s2), iw(i, s2));
            }
            for s2 in j + 1..=l {
                b.add(wv(j, s2), iw(s2, i));
            }
            for r in 1..=i {
                b.sub(wv(r, j), iw(i, r));
            }
            for r in i + 1..j {
                b.sub(wv(r, j), iw(r, i));
            }
            for r in j..=l {
                b.add(wv(r, j), iw(i, r));
            }
            let f = b.build();
            fam.push(format!("IL_{{{}}}", comma(i, j)), 0, "", |_| f.clone());
        }
    }
    for i in 1..=l {
        fam.push(format!("IL_{{{}}}", comma(i, i)), 0, IL_II_NOTE, |reading| {
            let mut b = row_shift(s, i, i, &ii());
            let iw = |a: usize, c2: usize| &ii() * &w(a, c2);
            for s2 in 1..i {
                b.sub(wv(i, s2), iw(s2, i));
            }
            for s2 in i + 1..=l {
                b.add(wv(i, s2), iw(s2, i));
            }
            for s2 in 1..i {
                b.sub(wv(s2, i), iw(i, s2));
            }
            for s2 in i + 1..=l {
                match reading {
                    Literal => b.add(wv(i, s2), iw(s2, i)),
                    Repaired => b.add(wv(s2, i), iw(i, s2)),
                };
            }
            b.build()
        });
    }
    for i in 1..=l {
        for j in 1..i {
            let mut b = row_shift(s, i, j, &ii());
            let iw = |a: usize, c2: usize| &ii() * &w(a, c2);
            for s2 in 1..=j {
                b.sub(wv(j, s2), iw(s2, i));
            }
            for s2 in j + 1..=i {
                b.add(wv(j, s2), iw(i, s2));
            }
            for s2 in i + 1..=l {
                b.add(wv(j, s2), iw(s2, i));
            }
            for r in 1..j {
                b.sub(wv(r, j), iw(i, r));
            }
            for r in j..i {
                b.sub(wv(r, j), iw(r, i));
            }
            for r in i + 1..=l {
                b.add(wv(r, j), iw(i, r));
            }
            let f = b.build();
            fam.push(format!("IL_{{{}}}", comma(i, j)), 0, "", |_| f.clone());
        }
    }
}

const G1_W_NOTE: &str = "w-part: the sum printed over 1<=r<=i with s unbound read over r<i<s; \
the sum printed over i<r<=l with summand indexed by s read over i<s<=l; \
w_{s*}[w_{ii}] read with the family letter; \
the second sum printed over i<r<=l with s unbound read over s<i<r";
const G1_IMAG_NOTE: &str = "the d/dw_{ii} term is missing its factor sqrt(-1)";

/// Ŵ-part shared by the six degree-one families, with `x(a) = letter_{a,p}`.
fn g1_w_part(s: &Shape, b: &mut FieldBuilder, x: &dyn Fn(usize) -> Poly, i: usize, p: usize, cf: &Poly, imaginary: bool, reading: Reading) {
    let l = s.l;
    let add = |b: &mut FieldBuilder, v: VarId, poly: Poly| {
        b.add(v, cf * &poly);
    };
    for r in 1..i {
        for s2 in r + 1..i {
            add(b, wv(r, s2), &(&x(r) * &(&w(i, s2) - &w(s2, i))) + &(&x(s2) * &(&w(r, i) - &w(i, r))));
        }
    }
    for r in 1..i {
        add(b, wv(r, i), &(&x(r) * &w(i, i)) + &(&x(i) * &(&w(r, i) - &w(i, r))));
    }
    let body9 = |r: usize, s2: usize| &(&x(r) * &(&w(i, s2) + &w(s2, i))) + &(&x(s2) * &(&w(r, i) - &w(i, r)));
    match reading {
        Literal => {
            for r in 1..=i {
                for s2 in 1..=l {
                    add(b, wv(r, s2), body9(r, s2));
                }
            }
        }
        Repaired => {
            for r in 1..i {
                for s2 in i + 1..=l {
                    add(b, wv(r, s2), body9(r, s2));
                }
            }
        }
    }
    let body10 = |s2: usize| &(&x(i) * &(&w(i, s2) + &w(s2, i))) - &(&x(s2) * &w(i, i));
    match reading {
        Literal => {
            for _r in i + 1..=l {
                for s2 in 1..=l {
                    add(b, wv(i, s2), body10(s2));
                }
            }
        }
        Repaired => {
            for s2 in i + 1..=l {
                add(b, wv(i, s2), body10(s2));
            }
        }
    }
    for r in i + 1..=l {
        for s2 in r + 1..=l {
            add(b, wv(r, s2), &(&x(r) * &(&w(i, s2) + &w(s2, i))) - &(&x(s2) * &(&w(r, i) + &w(i, r))));
        }
    }
    for r in 1..i {
        add(b, wv(r, r), &x(r) * &(&w(i, r) - &w(r, i)).scale(&Gq::int(2)));
    }
    let diag = &x(i) * &w(i, i).scale(&Gq::int(2));
    if reading == Literal && imaginary {
        b.add(wv(i, i), diag);
    } else {
        add(b, wv(i, i), diag);
    }
    for r in i + 1..=l {
        add(b, wv(r, r), &x(r) * &(&w(i, r) + &w(r, i)).scale(&Gq::int(2)));
    }
    for r in 1..i {
        for s2 in 1..r {
            add(b, wv(r, s2), &(&x(r) * &(&w(i, s2) - &w(s2, i))) + &(&x(s2) * &(&w(i, r) - &w(r, i))));
        }
    }
    for s2 in 1..i {
        // printed as `w_{s p}`, absent when `p > l`
        let second = match reading {
            Repaired => x(s2),
            Literal if p <= l => w(s2, p),
            Literal => Poly::zero(),
        };
        add(b, wv(i, s2), &(&x(i) * &(&w(i, s2) - &w(s2, i))) + &(&second * &w(i, i)));
    }
    let body17 = |r: usize, s2: usize| &(&x(r) * &(&w(i, s2) - &w(s2, i))) + &(&x(s2) * &(&w(i, r) + &w(r, i)));
    match reading {
        Literal => {
            for r in i + 1..=l {
                for s2 in 1..=l {
                    add(b, wv(r, s2), body17(r, s2));
                }
            }
        }
        Repaired => {
            for r in i + 1..=l {
                for s2 in 1..i {
                    add(b, wv(r, s2), body17(r, s2));
                }
            }
        }
    }
    for r in i + 1..=l {
        add(b, wv(r, i), &(&x(r) * &w(i, i)) + &(&x(i) * &(&w(i, r) + &w(r, i))));
    }
    for r in i + 1..=l {
        for s2 in i + 1..r {
            add(b, wv(r, s2), &(&x(r) * &(&w(i, s2) + &w(s2, i))) + &(&x(s2) * &(&w(i, r) + &w(r, i))));
        }
    }
}

fn plus_one(s: &Shape, fam: &mut Family) {
    for letter in [Letter::Z, Letter::U, Letter::V] {
        for imaginary in [false, true] {
            for i in 1..=s.l {
                for p in 1..=letter.width(s) {
                    let prefix = if imaginary { "IL" } else { "L" };
                    let x = format!("{}_{{{}}}", letter.symbol(), pl(i, p));
                    let name = format!("{prefix}_{{{x}{x}}}");
                    let note = g1_note(letter, imaginary);
                    fam.push(name, 1, &note, |reading| g1_field(s, letter, imaginary, i, p, reading));
                }
            }
        }
    }
}

fn g1_note(letter: Letter, imaginary: bool) -> String {
    let mut parts = vec![match letter {
        Letter::Z => "d/dv terms read 2 z_{l'j} v_{im'} for 2 z_{l'j} u_{im'}".to_string(),
        Letter::U => "d/du terms read 2 u_{im'} u_{l'k} for 2 u_{im'} u_{l'm'}".to_string(),
        Letter::V => "d/dv terms read 2 v_{im'} v_{l'k} for 2 v_{im'} v_{l'm'}; \
the remaining terms read u for v in the second factor and in the direction"
            .to_string(),
    }];
    parts.push(G1_W_NOTE.to_string());
    if imaginary {
        parts.push(G1_IMAG_NOTE.to_string());
    }
    parts.join("; ")
}

fn g1_field(s: &Shape, letter: Letter, imaginary: bool, i: usize, p: usize, reading: Reading) -> VectorField {
    use Letter::{U, V, Z};
    let (l, m, n) = (s.l, s.m, s.n);
    let cf = if imaginary { ii() } else { k(1) };
    let sg = if imaginary { Gq::one() } else { Gq::int(-1) };
    let two = Gq::int(2);
    let mut b = FieldBuilder::default();
    let put = |b: &mut FieldBuilder, v: VarId, poly: Poly| {
        b.add(v, &cf * &poly);
    };
    // `2 x y + sg (w_{l'i} ± w_{il'})` on the paired direction
    let paired = |lp: usize, x: Poly| -> Poly {
        let wpart = match lp.cmp(&i) {
            std::cmp::Ordering::Less => &w(lp, i) + &w(i, lp),
            std::cmp::Ordering::Equal => w(i, i),
            std::cmp::Ordering::Greater => &w(lp, i) - &w(i, lp),
        };
        &x.scale(&two) + &wpart.scale(&sg)
    };
    match letter {
        Z => {
            let j = p;
            for lp in 1..=l {
                for np in (1..=n).filter(|&np| np != j) {
                    put(&mut b, su_z(lp, np), (&Z.poly(lp, j) * &Z.poly(i, np)).scale(&two));
                }
            }
            for lp in 1..=l {
                put(&mut b, su_z(lp, j), paired(lp, &Z.poly(lp, j) * &Z.poly(i, j)));
            }
            for lp in 1..=l {
                for mp in 1..=m {
                    put(&mut b, su_u(lp, mp), (&Z.poly(lp, j) * &U.poly(i, mp)).scale(&two));
                }
            }
            for lp in 1..=l {
                for mp in 1..=m {
                    let second = if reading == Literal { U.poly(i, mp) } else { V.poly(i, mp) };
                    put(&mut b, su_v(lp, mp), (&Z.poly(lp, j) * &second).scale(&two));
                }
            }
        }
        U | V => {
            let kk = p;
            let (own, other) = if letter == U { (U, V) } else { (V, U) };
            for lp in 1..=l {
                for np in 1..=n {
                    put(&mut b, su_z(lp, np), (&Z.poly(i, np) * &own.poly(lp, kk)).scale(&two));
                }
            }
            for lp in 1..=l {
                for mp in 1..=m {
                    let second = if reading == Literal { own.poly(lp, mp) } else { own.poly(lp, kk) };
                    put(&mut b, own.var(lp, mp), (&own.poly(i, mp) * &second).scale(&two));
                }
            }
            // the v-family prints its own letter where the pairing needs u
            let (target, partner) = match (letter, reading) {
                (V, Literal) => (V, V),
                _ => (other, other),
            };
            for lp in 1..=l {
                for mp in (1..=m).filter(|&mp| mp != kk) {
                    put(&mut b, target.var(lp, mp), (&own.poly(lp, kk) * &partner.poly(i, mp)).scale(&two));
                }
            }
            for lp in 1..=l {
                put(&mut b, target.var(lp, kk), paired(lp, &own.poly(lp, kk) * &partner.poly(i, kk)));
            }
        }
    }
    let x = |a: usize| letter.poly(a, p);
    g1_w_part(s, &mut b, &x, i, p, &cf, imaginary, reading);
    b.build()
}

fn plus_two(s: &Shape, fam: &mut Family) {
    let l = s.l;
    for i in 1..=l {
        for j in i + 1..=l {
            let f = g2_real(s, i, j);
            fam.push(format!("L_{{w_{{{ij}}}w_{{{ij}}}}}", ij = pl(i, j)), 2, "", |_| f.clone());
        }
    }
    const IIW_NOTE: &str = "the last double sum is missing its factor sqrt(-1)";
    for i in 1..=l {
        fam.push(format!("IL_{{w_{{{ii}}}w_{{{ii}}}}}", ii = pl(i, i)), 2, IIW_NOTE, |reading| g2_diag(s, i, reading));
    }
    const IJW_NOTE: &str = "u_{in'} and v_{in'} inside the sums over m' read u_{im'} and v_{im'}; \
the d/dw_{jj} coefficient 2 w_{jj} w_{ji} read 2 w_{jj} w_{ij}";
    for i in 1..=l {
        for j in 1..i {
            fam.push(format!("IL_{{w_{{{ij}}}w_{{{ij}}}}}", ij = pl(i, j)), 2, IJW_NOTE, |reading| g2_imag(s, i, j, reading));
        }
    }
}

fn letters(s: &Shape) -> [(Letter, usize); 3] {
    [(Letter::Z, s.n), (Letter::U, s.m), (Letter::V, s.m)]
}

fn g2_real(s: &Shape, i: usize, j: usize) -> VectorField {
    let l = s.l;
    let mut b = FieldBuilder::default();
    for (y, width) in letters(s) {
        for p in 1..=width {
            let yi = y.poly(i, p);
            let yj = y.poly(j, p);
            for lp in 1..i {
                b.add(y.var(lp, p), &(&yi * &(&w(j, lp) + &w(lp, j))) - &(&yj * &(&w(i, lp) + &w(lp, i))));
            }
            b.add(y.var(i, p), &(&yi * &(&w(i, j) + &w(j, i))) - &(&yj * &w(i, i)));
            for lp in i + 1..j {
                b.add(y.var(lp, p), &(&yi * &(&w(j, lp) + &w(lp, j))) + &(&yj * &(&w(i, lp) - &w(lp, i))));
            }
            b.add(y.var(j, p), &(&yi * &w(j, j)) + &(&yj * &(&w(i, j) - &w(j, i))));
            for lp in j + 1..=l {
                b.add(y.var(lp, p), &(&yi * &(&w(lp, j) - &w(j, lp))) + &(&yj * &(&w(i, lp) - &w(lp, i))));
            }
        }
    }
    for r in 1..i {
        b.add(wv(r, r), ww(&[(-2, [r, i, j, r]), (2, [r, j, i, r])]));
    }
    for r in 1..i {
        b.add(wv(r, i), ww(&[(1, [r, i, i, j]), (-1, [i, r, j, i]), (1, [i, i, j, r])]));
    }
    for r in 1..i {
        b.add(wv(r, j), ww(&[(1, [r, j, i, j]), (-1, [i, r, j, j]), (1, [j, i, j, r])]));
    }
    for s2 in 1..i {
        b.add(wv(i, s2), ww(&[(-1, [s2, i, j, i]), (1, [s2, j, i, i]), (1, [i, s2, i, j])]));
    }
    b.add(wv(i, i), ww(&[(2, [i, i, i, j])]));
    for s2 in i + 1..j {
        b.add(wv(i, s2), ww(&[(-1, [i, i, j, s2]), (1, [i, s2, i, j]), (1, [s2, i, j, i])]));
    }
    b.add(wv(i, j), ww(&[(-1, [i, i, j, j]), (1, [i, j, i, j]), (1, [j, i, j, i])]));
    for s2 in j + 1..=l {
        b.add(wv(i, s2), ww(&[(-1, [i, i, s2, j]), (1, [i, j, i, s2]), (1, [j, i, s2, i])]));
    }
    for r in i + 1..j {
        b.add(wv(r, i), ww(&[(1, [i, i, r, j]), (1, [j, i, i, r]), (1, [i, j, r, i])]));
    }
    for r in i + 1..j {
        b.add(wv(r, r), ww(&[(2, [i, r, j, r]), (2, [r, i, r, j])]));
    }
    for r in i + 1..j {
        b.add(wv(r, j), ww(&[(1, [i, j, r, j]), (-1, [r, i, j, j]), (1, [j, i, j, r])]));
    }
    for s2 in 1..i {
        b.add(wv(j, s2), ww(&[(-1, [s2, i, j, j]), (1, [s2, j, j, i]), (1, [i, j, j, s2])]));
    }
    b.add(wv(j, i), ww(&[(2, [i, j, j, i])]));
    for s2 in i + 1..j {
        b.add(wv(j, s2), ww(&[(1, [i, s2, j, j]), (1, [i, j, j, s2]), (1, [s2, j, j, i])]));
    }
    b.add(wv(j, j), ww(&[(2, [i, j, j, j])]));
    for s2 in j + 1..=l {
        b.add(wv(j, s2), ww(&[(1, [i, j, j, s2]), (-1, [j, i, s2, j]), (1, [j, j, s2, i])]));
    }
    for r in j + 1..=l {
        b.add(wv(r, i), ww(&[(-1, [i, i, j, r]), (1, [i, j, r, i]), (1, [i, r, j, i])]));
    }
    for r in j + 1..=l {
        b.add(wv(r, j), ww(&[(1, [i, j, r, j]), (1, [i, r, j, j]), (-1, [j, i, j, r])]));
    }
    for r in j + 1..=l {
        b.add(wv(r, r), ww(&[(2, [i, r, r, j]), (-2, [j, r, r, i])]));
    }
    let mut pairs = |rr: std::ops::Range<usize>, sr: std::ops::Range<usize>, cond: fn(usize, usize) -> bool, t: [(i64, [char; 4]); 4]| {
        for r in rr {
            for s2 in sr.clone() {
                if !cond(r, s2) {
                    continue;
                }
                let idx = |ch: char| match ch {
                    'i' => i,
                    'j' => j,
                    'r' => r,
                    _ => s2,
                };
                let terms: Vec<(i64, [usize; 4])> =
                    t.iter().map(|(sg, q)| (*sg, [idx(q[0]), idx(q[1]), idx(q[2]), idx(q[3])])).collect();
                b.add(wv(r, s2), ww(&terms));
            }
        }
    };
    let any = |_: usize, _: usize| true;
    let gt = |r: usize, s2: usize| s2 < r;
    let lt = |r: usize, s2: usize| r < s2;
    pairs(1..i, 1..i, gt, [(-1, ['s', 'i', 'j', 'r']), (1, ['s', 'j', 'i', 'r']), (-1, ['r', 'i', 'j', 's']), (1, ['r', 'j', 'i', 's'])]);
    pairs(1..i, 1..i, lt, [(1, ['r', 'i', 's', 'j']), (-1, ['r', 'j', 's', 'i']), (-1, ['i', 'r', 'j', 's']), (1, ['i', 's', 'j', 'r'])]);
    pairs(1..i, i + 1..j, any, [(1, ['r', 'i', 's', 'j']), (1, ['r', 'j', 'i', 's']), (-1, ['i', 'r', 'j', 's']), (1, ['s', 'i', 'j', 'r'])]);
    pairs(1..i, j + 1..l + 1, any, [(-1, ['r', 'i', 'j', 's']), (1, ['r', 'j', 'i', 's']), (-1, ['i', 'r', 's', 'j']), (1, ['j', 'r', 's', 'i'])]);
    pairs(i + 1..j, 1..i, any, [(-1, ['s', 'i', 'j', 'r']), (1, ['s', 'j', 'r', 'i']), (1, ['i', 's', 'r', 'j']), (1, ['i', 'r', 'j', 's'])]);
    pairs(i + 1..j, i + 1..j, gt, [(1, ['i', 's', 'j', 'r']), (1, ['i', 'r', 'j', 's']), (1, ['s', 'i', 'r', 'j']), (1, ['s', 'j', 'r', 'i'])]);
    pairs(i + 1..j, i + 1..j, lt, [(-1, ['i', 'r', 's', 'j']), (1, ['i', 's', 'r', 'j']), (-1, ['r', 'i', 'j', 's']), (1, ['s', 'i', 'j', 'r'])]);
    pairs(i + 1..j, j + 1..l + 1, any, [(1, ['i', 'r', 'j', 's']), (1, ['i', 's', 'r', 'j']), (-1, ['r', 'i', 's', 'j']), (1, ['j', 'r', 's', 'i'])]);
    pairs(j + 1..l + 1, 1..i, any, [(-1, ['s', 'i', 'r', 'j']), (1, ['s', 'j', 'r', 'i']), (-1, ['i', 's', 'j', 'r']), (1, ['i', 'r', 'j', 's'])]);
    pairs(j + 1..l + 1, i + 1..j, any, [(1, ['i', 's', 'r', 'j']), (1, ['i', 'r', 'j', 's']), (-1, ['s', 'i', 'j', 'r']), (1, ['s', 'j', 'r', 'i'])]);
    pairs(j + 1..l + 1, j + 1..l + 1, gt, [(1, ['i', 's', 'r', 'j']), (1, ['i', 'r', 's', 'j']), (-1, ['j', 's', 'r', 'i']), (-1, ['j', 'r', 's', 'i'])]);
    pairs(j + 1..l + 1, j + 1..l + 1, lt, [(1, ['i', 'r', 'j', 's']), (-1, ['i', 's', 'j', 'r']), (-1, ['r', 'i', 's', 'j']), (1, ['r', 'j', 's', 'i'])]);
    b.build()
}

fn g2_diag(s: &Shape, i: usize, reading: Reading) -> VectorField {
    let l = s.l;
    let mut b = FieldBuilder::default();
    let ic = ii();
    for (y, width) in letters(s) {
        for p in 1..=width {
            let yi = y.poly(i, p);
            for lp in 1..i {
                b.add(y.var(lp, p), &ic * &(&yi * &(&w(lp, i) + &w(i, lp))));
            }
            b.add(y.var(i, p), &ic * &(&yi * &w(i, i)));
            for lp in i + 1..=l {
                b.add(y.var(lp, p), &ic * &(&yi * &(&w(lp, i) - &w(i, lp))));
            }
        }
    }
    let mut put = |v: VarId, poly: Poly| {
        b.add(v, &ic * &poly);
    };
    for r in 1..i {
        put(wv(r, r), ww(&[(-1, [r, i, r, i]), (1, [i, r, i, r])]));
    }
    put(wv(i, i), ww(&[(1, [i, i, i, i])]));
    for r in i + 1..=l {
        put(wv(r, r), ww(&[(1, [r, i, r, i]), (-1, [i, r, i, r])]));
    }
    for s2 in 1..i {
        put(wv(i, s2), ww(&[(1, [i, s2, i, i])]));
    }
    for s2 in i + 1..=l {
        put(wv(i, s2), ww(&[(1, [i, s2, i, i])]));
    }
    for r in 1..i {
        put(wv(r, i), ww(&[(1, [r, i, i, i])]));
    }
    for r in i + 1..=l {
        put(wv(r, i), ww(&[(1, [r, i, i, i])]));
    }
    for r in 1..i {
        for s2 in r + 1..i {
            put(wv(r, s2), ww(&[(1, [r, i, i, s2]), (-1, [s2, i, i, r])]));
        }
    }
    for r in 1..i {
        for s2 in 1..r {
            put(wv(r, s2), ww(&[(-1, [s2, i, r, i]), (1, [i, s2, i, r])]));
        }
    }
    for r in i + 1..=l {
        for s2 in r + 1..=l {
            put(wv(r, s2), ww(&[(-1, [i, r, s2, i]), (1, [i, s2, r, i])]));
        }
    }
    for r in i + 1..=l {
        for s2 in i + 1..r {
            put(wv(r, s2), ww(&[(-1, [i, s2, i, r]), (1, [s2, i, r, i])]));
        }
    }
    for r in 1..i {
        for s2 in i + 1..=l {
            put(wv(r, s2), ww(&[(1, [r, i, s2, i]), (1, [i, r, i, s2])]));
        }
    }
    for r in i + 1..=l {
        for s2 in 1..i {
            let body = ww(&[(1, [s2, i, i, r]), (1, [i, s2, r, i])]);
            match reading {
                Literal => b.add(wv(r, s2), body),
                Repaired => b.add(wv(r, s2), &ic * &body),
            };
        }
    }
    b.build()
}

fn g2_imag(s: &Shape, i: usize, j: usize, reading: Reading) -> VectorField {
    let l = s.l;
    let mut b = FieldBuilder::default();
    let ic = ii();
    for (y, width) in letters(s) {
        for p in 1..=width {
            let yi = y.poly(i, p);
            let yj = y.poly(j, p);
            for lp in 1..j {
                let first = match (y, reading) {
                    (Letter::Z, _) | (_, Repaired) => &yi * &(&w(lp, j) + &w(j, lp)),
                    (_, Literal) => {
                        // `y_{i n'}` with `n'` unbound in a sum over `m'`
                        let mut acc = Poly::zero();
                        for np in (1..=s.n).filter(|&np| np <= s.m) {
                            acc += &(&y.poly(i, np) * &(&w(lp, j) + &w(j, lp)));
                        }
                        acc
                    }
                };
                b.add(y.var(lp, p), &ic * &(&first + &(&yj * &(&w(lp, i) + &w(i, lp)))));
            }
            b.add(y.var(j, p), &ic * &(&(&yi * &w(j, j)) + &(&yj * &(&w(j, i) + &w(i, j)))));
            for lp in j + 1..i {
                b.add(y.var(lp, p), &ic * &(&(&yi * &(&w(lp, j) - &w(j, lp))) + &(&yj * &(&w(lp, i) + &w(i, lp)))));
            }
            b.add(y.var(i, p), &ic * &(&(&yi * &(&w(i, j) - &w(j, i))) + &(&yj * &w(i, i))));
            for lp in i + 1..=l {
                b.add(y.var(lp, p), &ic * &(&(&yi * &(&w(lp, j) - &w(j, lp))) + &(&yj * &(&w(lp, i) - &w(i, lp)))));
            }
        }
    }
    let put = |b: &mut FieldBuilder, v: VarId, terms: &[(i64, [usize; 4])]| {
        b.add(v, &ic * &ww(terms));
    };
    for r in 1..j {
        put(&mut b, wv(r, r), &[(-2, [r, j, r, i]), (2, [j, r, i, r])]);
    }
    for r in 1..j {
        put(&mut b, wv(r, j), &[(1, [r, j, i, j]), (1, [r, i, j, j]), (-1, [j, r, j, i])]);
    }
    for r in 1..j {
        put(&mut b, wv(r, i), &[(1, [r, j, i, i]), (1, [r, i, i, j]), (1, [j, i, i, r])]);
    }
    for s2 in 1..j {
        put(&mut b, wv(j, s2), &[(-1, [s2, j, j, i]), (1, [j, s2, i, j]), (1, [j, j, i, s2])]);
    }
    let jj = match reading {
        Literal => [j, j, j, i],
        Repaired => [j, j, i, j],
    };
    put(&mut b, wv(j, j), &[(2, jj)]);
    for s2 in j + 1..i {
        put(&mut b, wv(j, s2), &[(-1, [j, j, s2, i]), (1, [j, s2, i, j]), (1, [j, i, s2, j])]);
    }
    put(&mut b, wv(j, i), &[(2, [i, j, j, i])]);
    for s2 in i + 1..=l {
        put(&mut b, wv(j, s2), &[(1, [j, j, i, s2]), (1, [j, i, s2, j]), (1, [j, s2, i, j])]);
    }
    for r in j + 1..i {
        put(&mut b, wv(r, j), &[(1, [j, j, i, r]), (1, [j, r, j, i]), (1, [r, j, i, j])]);
    }
    for r in j + 1..i {
        put(&mut b, wv(r, r), &[(2, [j, r, r, i]), (2, [r, j, i, r])]);
    }
    for r in j + 1..i {
        put(&mut b, wv(r, i), &[(-1, [j, r, i, i]), (1, [j, i, i, r]), (1, [r, i, i, j])]);
    }
    for s2 in 1..j {
        put(&mut b, wv(i, s2), &[(1, [s2, i, j, i]), (1, [j, s2, i, i]), (1, [i, s2, i, j])]);
    }
    put(&mut b, wv(i, j), &[(1, [j, j, i, i]), (1, [i, j, i, j]), (1, [j, i, j, i])]);
    for s2 in j + 1..i {
        put(&mut b, wv(i, s2), &[(1, [j, i, s2, i]), (1, [s2, j, i, i]), (1, [i, j, i, s2])]);
    }
    put(&mut b, wv(i, i), &[(2, [i, j, i, i])]);
    for s2 in i + 1..=l {
        put(&mut b, wv(i, s2), &[(-1, [j, i, s2, i]), (1, [j, s2, i, i]), (1, [i, j, i, s2])]);
    }
    for r in i + 1..=l {
        put(&mut b, wv(r, j), &[(1, [j, j, r, i]), (1, [j, i, j, r]), (1, [i, j, r, j])]);
    }
    for r in i + 1..=l {
        put(&mut b, wv(r, i), &[(-1, [j, i, i, r]), (1, [i, j, r, i]), (1, [i, i, r, j])]);
    }
    for r in i + 1..=l {
        put(&mut b, wv(r, r), &[(-2, [j, r, i, r]), (2, [r, j, r, i])]);
    }
    let mut pairs = |rr: std::ops::Range<usize>, sr: std::ops::Range<usize>, cond: fn(usize, usize) -> bool, t: [(i64, [char; 4]); 4]| {
        for r in rr {
            for s2 in sr.clone() {
                if !cond(r, s2) {
                    continue;
                }
                let idx = |ch: char| match ch {
                    'i' => i,
                    'j' => j,
                    'r' => r,
                    _ => s2,
                };
                let terms: Vec<(i64, [usize; 4])> =
                    t.iter().map(|(sg, q)| (*sg, [idx(q[0]), idx(q[1]), idx(q[2]), idx(q[3])])).collect();
                put(&mut b, wv(r, s2), &terms);
            }
        }
    };
    let any = |_: usize, _: usize| true;
    let gt = |r: usize, s2: usize| s2 < r;
    let lt = |r: usize, s2: usize| r < s2;
    pairs(1..j, 1..j, gt, [(-1, ['s', 'j', 'r', 'i']), (-1, ['s', 'i', 'r', 'j']), (1, ['j', 's', 'i', 'r']), (1, ['j', 'r', 'i', 's'])]);
    pairs(1..j, 1..j, lt, [(1, ['r', 'j', 'i', 's']), (1, ['r', 'i', 'j', 's']), (-1, ['s', 'j', 'i', 'r']), (-1, ['s', 'i', 'j', 'r'])]);
    pairs(1..j, j + 1..i, any, [(1, ['r', 'j', 'i', 's']), (1, ['r', 'i', 's', 'j']), (-1, ['j', 'r', 's', 'i']), (1, ['j', 's', 'i', 'r'])]);
    pairs(1..j, i + 1..l + 1, any, [(1, ['r', 'j', 's', 'i']), (1, ['r', 'i', 's', 'j']), (1, ['i', 's', 'j', 'r']), (1, ['j', 's', 'i', 'r'])]);
    pairs(j + 1..i, 1..j, any, [(-1, ['s', 'j', 'r', 'i']), (1, ['s', 'i', 'j', 'r']), (1, ['j', 's', 'i', 'r']), (1, ['r', 'j', 'i', 's'])]);
    pairs(j + 1..i, j + 1..i, gt, [(1, ['j', 's', 'r', 'i']), (1, ['j', 'r', 's', 'i']), (1, ['s', 'j', 'i', 'r']), (1, ['r', 'j', 'i', 's'])]);
    pairs(j + 1..i, j + 1..i, lt, [(-1, ['j', 'r', 'i', 's']), (1, ['j', 's', 'i', 'r']), (-1, ['r', 'j', 's', 'i']), (1, ['r', 'i', 's', 'j'])]);
    pairs(j + 1..i, i + 1..l + 1, any, [(-1, ['j', 'r', 's', 'i']), (1, ['j', 's', 'i', 'r']), (1, ['i', 's', 'r', 'j']), (1, ['r', 'i', 's', 'j'])]);
    pairs(i + 1..l + 1, 1..j, any, [(1, ['s', 'j', 'i', 'r']), (1, ['s', 'i', 'j', 'r']), (1, ['r', 'i', 'j', 's']), (1, ['i', 's', 'r', 'j'])]);
    pairs(i + 1..l + 1, j + 1..i, any, [(-1, ['j', 's', 'i', 'r']), (1, ['j', 'r', 's', 'i']), (1, ['s', 'j', 'r', 'i']), (1, ['i', 's', 'r', 'j'])]);
    pairs(i + 1..l + 1, i + 1..l + 1, gt, [(-1, ['j', 's', 'i', 'r']), (-1, ['j', 'r', 'i', 's']), (1, ['s', 'j', 'r', 'i']), (1, ['s', 'i', 'r', 'j'])]);
    pairs(i + 1..l + 1, i + 1..l + 1, lt, [(-1, ['j', 'r', 's', 'i']), (1, ['j', 's', 'r', 'i']), (-1, ['i', 'r', 's', 'j']), (1, ['i', 's', 'r', 'j'])]);
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tangency;

    fn shape(l: usize, m: usize, n: usize) -> Shape {
        Shape { l, m, n }
    }

    #[test]
    fn counts_follow_dimension_formulas() {
        for (l, m, n) in [(1, 0, 1), (1, 1, 0), (2, 1, 0), (2, 0, 1), (2, 1, 1), (3, 2, 1)] {
            let set = gens_su(l, m, n).unwrap();
            let big_n = n + 2 * m;
            let counts: Vec<usize> = (-2..=2).map(|k| set.count(k)).collect();
            let g1 = 2 * big_n * l;
            assert_eq!(counts, vec![l * l, g1, big_n * big_n + 2 * l * l - 1, g1, l * l]);
            assert_eq!(set.combinations.len(), 1);
        }
        assert_eq!(gens_su(2, 1, 0).unwrap().count(0), 11);
        assert!(gens_su(1, 0, 0).is_err());
    }

    #[test]
    fn translation_pair_for_smallest_model() {
        let set = gens_su(1, 0, 1).unwrap();
        let z = var(su_z(1, 1));
        let two_z = z.scale(&Gq::int(2));
        let real = VectorField::coordinate(su_z(1, 1)).with(su_w(1, 1), two_z.clone());
        let imag = VectorField::zero()
            .with(su_z(1, 1), ii())
            .with(su_w(1, 1), two_z.scale(&Gq::gauss(0, -1)));
        assert_eq!(set.get("L_{z_{11}}").unwrap().field, real);
        assert_eq!(set.get("IL_{z_{11}}").unwrap().field, imag);
    }

    #[test]
    fn eighth_family_present() {
        let set = gens_su(1, 1, 0).unwrap();
        let expected = VectorField::zero().with(su_u(1, 1), &ii() * &var(su_v(1, 1)));
        assert_eq!(set.get("IL_1^8").unwrap().field, expected);
    }

    #[test]
    fn last_trace_entry_is_the_recorded_combination() {
        for (l, m, n) in [(1, 0, 1), (2, 1, 1), (3, 1, 2)] {
            let s = shape(l, m, n);
            let set = gens_su(l, m, n).unwrap();
            let name = format!("IL_{{{l},{l}}}");
            let printed = listed(&s).into_iter().find(|g| g.name == name).unwrap();
            assert!(printed.repair.is_none());
            assert!(set.get(&name).is_none());
            let combo = &set.combinations[0];
            assert_eq!(combo.name, name);
            assert_eq!(combo.field, printed.field);
        }
    }

    #[test]
    fn effective_fields_are_symmetries() {
        for (l, m, n) in [(1, 0, 1), (1, 1, 0), (2, 1, 1), (3, 1, 1)] {
            let set = gens_su(l, m, n).unwrap();
            for g in set.iter() {
                assert!(tangency::is_symmetry(g.effective(), &set.model), "{}", g.name);
            }
            assert!(tangency::is_symmetry(&set.combinations[0].field, &set.model));
        }
    }

    #[test]
    fn repairs_are_localized() {
        let set = gens_su(3, 1, 1).unwrap();
        let flagged: Vec<&str> = set.iter().filter(|g| g.repair.is_some()).map(|g| g.name.as_str()).collect();
        assert!(flagged.contains(&"IL_{1,1}"));
        assert!(flagged.contains(&"IL_{w_{21}w_{21}}"));
        assert!(flagged.contains(&"L_{z_{11}z_{11}}"));
        for k in [-2, -1] {
            assert!(set.weight(k).iter().all(|g| g.repair.is_none()));
        }
        assert!(set.get("L_{w_{12}w_{12}}").unwrap().repair.is_none());
    }

    #[test]
    fn literal_reading_counts_unbound_index() {
        // the sum over r <= i with s unbound reaches every w_{rs}
        let s = shape(2, 0, 1);
        let lit = g1_field(&s, Letter::Z, false, 1, 1, Literal);
        let rep = g1_field(&s, Letter::Z, false, 1, 1, Repaired);
        assert_ne!(lit, rep);
        assert!(lit.component(su_w(1, 1)) != rep.component(su_w(1, 1)));
    }
}

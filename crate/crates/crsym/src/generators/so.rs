use super::{det, int, pair_label, var, FieldBuilder, GeneratorError, GeneratorSet, NamedGenerator};
use crate::exact::{Gq, Poly, VarId};
use crate::quadric::{self, so_w};

fn z(i: usize) -> VarId {
    VarId::z(i as u16)
}

fn zp(i: usize) -> Poly {
    var(z(i))
}

fn wp(i: usize, j: usize) -> Poly {
    var(so_w(i, j))
}

fn i_unit() -> Poly {
    Poly::constant(Gq::i())
}

pub fn gens_so(n: usize) -> Result<GeneratorSet, GeneratorError> {
    let mut set = GeneratorSet::new(quadric::build_so(n)?);
    let mut b = FieldBuilder::default();

    for i in 1..=n {
        for j in i + 1..=n {
            let f = b.add(so_w(i, j), int(1)).build();
            set.push(NamedGenerator::new(format!("L_{{w_{{{}}}}}^{{-2}}", pair_label(i, j)), -2, f));
        }
    }

    for i in 1..=n {
        b.add(z(i), int(1));
        for k in 1..i {
            b.add(so_w(k, i), zp(k));
        }
        for k in i + 1..=n {
            b.sub(so_w(i, k), zp(k));
        }
        set.push(NamedGenerator::new(format!("L_{{z_{i}}}^{{-1}}"), -1, b.build()));
    }
    for i in 1..=n {
        b.add(z(i), i_unit());
        for k in 1..i {
            b.sub(so_w(k, i), &i_unit() * &zp(k));
        }
        for k in i + 1..=n {
            b.add(so_w(i, k), &i_unit() * &zp(k));
        }
        set.push(NamedGenerator::new(format!("IL_{{z_{i}}}^{{-1}}"), -1, b.build()));
    }

    for i in 1..=n {
        for j in i + 1..=n {
            b.add(z(j), zp(i));
            for k in 1..i {
                b.add(so_w(k, j), wp(k, i));
            }
            for k in i + 1..j {
                b.sub(so_w(k, j), wp(i, k));
            }
            for k in j + 1..=n {
                b.add(so_w(j, k), wp(i, k));
            }
            set.push(NamedGenerator::new(format!("L_{{{}}}^0", pair_label(i, j)), 0, b.build()));
        }
    }
    for i in 1..=n {
        b.add(z(i), zp(i));
        for k in 1..i {
            b.add(so_w(k, i), wp(k, i));
        }
        for k in i + 1..=n {
            b.add(so_w(i, k), wp(i, k));
        }
        set.push(NamedGenerator::new(format!("L_{{{}}}^0", pair_label(i, i)), 0, b.build()));
    }
    for i in 1..=n {
        for j in 1..i {
            b.add(z(j), zp(i));
            for k in 1..j {
                b.add(so_w(k, j), wp(k, i));
            }
            for k in j + 1..i {
                b.sub(so_w(j, k), wp(k, i));
            }
            for k in i + 1..=n {
                b.add(so_w(j, k), wp(i, k));
            }
            set.push(NamedGenerator::new(format!("L_{{{}}}^0", pair_label(i, j)), 0, b.build()));
        }
    }
    for k in 1..=n {
        b.add(z(k), &i_unit() * &zp(k));
    }
    set.push(NamedGenerator::new("R", 0, b.build()));

    for imaginary in [false, true] {
        for i in 1..=n {
            let c = if imaginary { i_unit() } else { int(1) };
            let sign = if imaginary { -1 } else { 1 };
            for k in 1..i {
                b.add(z(k), &c * &(&(&zp(i) * &zp(k)) - &wp(k, i).scale(&Gq::int(sign))));
            }
            b.add(z(i), &c * &(&zp(i) * &zp(i)));
            for k in i + 1..=n {
                b.add(z(k), &c * &(&(&zp(i) * &zp(k)) + &wp(i, k).scale(&Gq::int(sign))));
            }
            for k in 1..i {
                b.add(so_w(k, i), &c * &(&zp(i) * &wp(k, i)));
            }
            for l in i + 1..=n {
                b.add(so_w(i, l), &c * &(&zp(i) * &wp(i, l)));
            }
            for k in 1..i {
                for l in k + 1..i {
                    b.add(so_w(k, l), &c * &det(&zp(k), &-&wp(k, i), &zp(l), &-&wp(l, i)));
                }
            }
            for k in 1..i {
                for l in i + 1..=n {
                    b.add(so_w(k, l), &c * &det(&zp(k), &-&wp(k, i), &zp(l), &wp(i, l)));
                }
            }
            for k in i + 1..=n {
                for l in k + 1..=n {
                    b.add(so_w(k, l), &c * &det(&zp(k), &wp(i, k), &zp(l), &wp(i, l)));
                }
            }
            let prefix = if imaginary { "IL" } else { "L" };
            set.push(NamedGenerator::new(format!("{prefix}_{{z_{i}z_{i}}}^1"), 1, b.build()));
        }
    }

    for i in 1..=n {
        for j in i + 1..=n {
            let wij = wp(i, j);
            for k in 1..i {
                b.add(z(k), det(&zp(i), &wp(k, i), &zp(j), &wp(k, j)));
            }
            b.add(z(i), &zp(i) * &wij);
            for k in i + 1..j {
                b.add(z(k), det(&zp(i), &-&wp(i, k), &zp(j), &wp(k, j)));
            }
            b.add(z(j), &zp(j) * &wij);
            for k in j + 1..=n {
                b.add(z(k), det(&zp(i), &-&wp(i, k), &zp(j), &-&wp(j, k)));
            }
            for k in 1..i {
                b.add(so_w(k, i), &wij * &wp(k, i));
            }
            for k in 1..i {
                b.add(so_w(k, j), &wij * &wp(k, j));
            }
            for l in i + 1..j {
                b.add(so_w(i, l), &wij * &wp(i, l));
            }
            b.add(so_w(i, j), &wij * &wij);
            for l in j + 1..=n {
                b.add(so_w(i, l), &wij * &wp(i, l));
            }
            for k in i + 1..j {
                b.add(so_w(k, j), &wij * &wp(k, j));
            }
            for l in j + 1..=n {
                b.add(so_w(j, l), &wij * &wp(j, l));
            }
            for k in 1..i {
                for l in k + 1..i {
                    b.add(so_w(k, l), det(&-&wp(k, i), &-&wp(k, j), &-&wp(l, i), &-&wp(l, j)));
                }
            }
            for k in 1..i {
                for l in i + 1..j {
                    b.add(so_w(k, l), det(&-&wp(k, i), &-&wp(k, j), &wp(i, l), &-&wp(l, j)));
                }
            }
            for k in 1..i {
                for l in j + 1..=n {
                    b.add(so_w(k, l), det(&-&wp(k, i), &-&wp(k, j), &wp(i, l), &wp(j, l)));
                }
            }
            for k in i + 1..j {
                for l in k + 1..j {
                    b.add(so_w(k, l), det(&wp(i, k), &-&wp(k, j), &wp(i, l), &-&wp(l, j)));
                }
            }
            for k in i + 1..j {
                for l in j + 1..=n {
                    b.add(so_w(k, l), det(&wp(i, k), &-&wp(k, j), &wp(i, l), &wp(j, l)));
                }
            }
            for k in j + 1..=n {
                for l in k + 1..=n {
                    b.add(so_w(k, l), det(&wp(i, k), &wp(j, k), &wp(i, l), &wp(j, l)));
                }
            }
            let ij = pair_label(i, j);
            set.push(NamedGenerator::new(format!("L_{{w_{{{ij}}}w_{{{ij}}}}}^2"), 2, b.build()));
        }
    }

    let diagonal = (1..=n).map(|i| (format!("L_{{{}}}^0", pair_label(i, i)), Gq::one())).collect();
    set.combine("D", diagonal);
    set.check_homogeneous()?;
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tangency;
    use crate::vfield::VectorField;

    #[test]
    fn counts_follow_dimension_formulas() {
        for n in 2..=5 {
            let set = gens_so(n).unwrap();
            let counts: Vec<usize> = (-2..=2).map(|k| set.count(k)).collect();
            let c = n * (n - 1) / 2;
            assert_eq!(counts, vec![c, 2 * n, n * n + 1, 2 * n, c]);
        }
        assert!(gens_so(1).is_err());
    }

    #[test]
    fn quadratic_entry_for_two_variables() {
        let set = gens_so(2).unwrap();
        let g = set.get("L_{z_1z_1}^1").unwrap();
        let w12 = so_w(1, 2);
        let expected = VectorField::zero()
            .with(z(1), &zp(1) * &zp(1))
            .with(z(2), &(&zp(1) * &zp(2)) + &var(w12))
            .with(w12, &zp(1) * &var(w12));
        assert_eq!(g.field, expected);
    }

    #[test]
    fn rotation_present() {
        let set = gens_so(2).unwrap();
        let r = set.get("R").unwrap();
        let expected = VectorField::zero()
            .with(z(1), &i_unit() * &zp(1))
            .with(z(2), &i_unit() * &zp(2));
        assert_eq!(r.field, expected);
    }

    #[test]
    fn all_entries_are_symmetries() {
        for n in 2..=5 {
            let set = gens_so(n).unwrap();
            for g in set.iter() {
                assert!(tangency::is_symmetry(&g.field, &set.model), "n={n} {}", g.name);
            }
        }
    }

    #[test]
    fn dilation_doubles_on_w() {
        let set = gens_so(3).unwrap();
        let d = &set.combinations[0];
        assert_eq!(d.name, "D");
        assert_eq!(d.field.component(z(2)), Some(&zp(2)));
        assert_eq!(d.field.component(so_w(1, 3)), Some(&wp(1, 3).scale(&Gq::int(2))));
        assert!(tangency::is_symmetry(&d.field, &set.model));
    }
}

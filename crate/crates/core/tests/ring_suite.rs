use std::sync::Arc;

use qcohom_core::action::build_weight_matrix;
use qcohom_core::algebra::{Polynomial, Rational, Vars};
use qcohom_core::ring::{
    default_xi, full_relation, groebner_basis, kernel_generators, normal_form, ring_presentation,
    RingPresentation,
};
use qcohom_core::walls::Sign;

fn presentation(r: usize, xi: Option<&[Rational]>) -> RingPresentation {
    ring_presentation(&build_weight_matrix(r).unwrap(), xi).unwrap()
}

#[test]
fn opposite_sides_multiply_to_the_full_relation() {
    for r in 1..=4 {
        let a = build_weight_matrix(r).unwrap();
        let gens = kernel_generators(&a);
        assert_eq!(gens.len(), 2 * r);
        let full = full_relation(&a);
        for pair in gens.chunks(2) {
            assert_eq!((pair[0].side, pair[1].side), (Sign::Plus, Sign::Minus));
            assert_eq!(pair[0].circle, pair[1].circle);
            assert_eq!(&pair[0].product.expanded * &pair[1].product.expanded, full);
            let n = pair[0].product.points.len() + pair[1].product.points.len();
            assert_eq!(n, 1 << r);
        }
    }
}

#[test]
fn two_qubit_products_read_back() {
    let a = build_weight_matrix(2).unwrap();
    let text: Vec<String> = kernel_generators(&a)
        .iter()
        .map(|g| g.product.factored(&a))
        .collect();
    for t in &text {
        assert_eq!(t.matches('(').count(), 2, "{t}");
    }
    // each factor appears in exactly one + and one - generator
    for col in a.columns() {
        let f: String = std::iter::once("(w".to_string())
            .chain(
                col.iter()
                    .enumerate()
                    .map(|(i, &x)| format!(" {} t{}", if x > 0 { '+' } else { '-' }, i + 1)),
            )
            .chain(std::iter::once(")".to_string()))
            .collect();
        assert_eq!(text.iter().filter(|t| t.contains(&f)).count(), 2, "{f}");
    }
}

#[test]
fn quotient_is_nonzero_and_kills_the_relations() {
    for r in 1..=3 {
        let pres = presentation(r, None);
        let one = Polynomial::one(&pres.vars);
        assert_eq!(pres.normal_form(&one).unwrap(), one);
        for g in pres.ideal_generators() {
            assert!(pres.normal_form(&g).unwrap().is_zero());
        }
        assert!(pres.normal_form(&pres.full_relation).unwrap().is_zero());
    }
}

#[test]
fn poincare_series_is_palindromic() {
    for r in 1..=3 {
        let p = presentation(r, None).poincare;
        assert_eq!(p.len(), (1 << r) - r, "r = {r}");
        let mut rev = p.clone();
        rev.reverse();
        assert_eq!(p, rev, "r = {r}");
        assert_eq!(p[0], 1);
    }
}

#[test]
fn four_qubit_poincare() {
    let p = presentation(4, None).poincare;
    assert_eq!(p, vec![1, 5, 15, 35, 58, 58, 58, 58, 35, 15, 5, 1]);
}

fn in_ideal(p: &Polynomial, basis: &[Polynomial]) -> bool {
    normal_form(p, basis).unwrap().is_zero()
}

/// t_i -> t_perm[i], w fixed.
fn relabel(p: &Polynomial, perm: &[usize], vars: &Arc<Vars>) -> Polynomial {
    let r = perm.len();
    let mut images: Vec<Polynomial> = perm.iter().map(|&k| Polynomial::var(vars, k)).collect();
    images.push(Polynomial::var(vars, r));
    p.compose(&images).unwrap()
}

#[test]
fn ideal_follows_permuted_levels() {
    let r = 3;
    let xi = default_xi(r);
    let base = presentation(r, Some(&xi));
    for perm in [[1, 0, 2], [0, 2, 1], [2, 0, 1]] {
        let mut moved = vec![Rational::from_integer(0.into()); r];
        for i in 0..r {
            moved[perm[i]] = xi[i].clone();
        }
        let other = presentation(r, Some(&moved));
        let images: Vec<Polynomial> = base
            .ideal_generators()
            .iter()
            .map(|g| relabel(g, &perm, &base.vars))
            .collect();
        let gb = groebner_basis(&images).unwrap();
        for g in &other.groebner {
            assert!(in_ideal(g, &gb), "{perm:?}: {g}");
        }
        for g in &images {
            assert!(in_ideal(g, &other.groebner), "{perm:?}: {g}");
        }
        assert_eq!(base.poincare, other.poincare);
    }
}

#[test]
fn level_on_a_wall_or_outside_is_rejected() {
    let a = build_weight_matrix(2).unwrap();
    let q = |n: i64, d: i64| Rational::new(n.into(), d.into());
    assert!(ring_presentation(&a, Some(&[q(1, 4), q(1, 4)])).is_err());
    assert!(ring_presentation(&a, Some(&[q(1, 4), q(1, 1)])).is_err());
    assert!(ring_presentation(&a, Some(&[q(1, 4)])).is_err());
}

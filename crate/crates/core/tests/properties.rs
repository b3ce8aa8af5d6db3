use std::sync::{Arc, OnceLock};

use proptest::prelude::*;

use qcohom_core::action::{build_weight_matrix, WeightMatrix};
use qcohom_core::algebra::{
    residue_at_zero, Monomial, Polynomial, Rational, RationalFunction, Vars,
};
use qcohom_core::engine::{ClassSpec, Engine};
use qcohom_core::ring::{
    normal_form, ring_presentation, sigma_substitute, sigma_vars, symmetric_expand,
    RingPresentation,
};

fn twv() -> Arc<Vars> {
    static V: OnceLock<Arc<Vars>> = OnceLock::new();
    V.get_or_init(|| Vars::theta_omega(2)).clone()
}

fn small_rat() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

/// Up to five terms, degree at most 3 in each variable.
fn poly_in(vars: Arc<Vars>) -> impl Strategy<Value = Polynomial> {
    let n = vars.len();
    prop::collection::vec((prop::collection::vec(0u32..=3, n), small_rat()), 0..=5).prop_map(
        move |terms| {
            Polynomial::from_terms(&vars, terms.into_iter().map(|(e, c)| (Monomial::new(e), c)))
        },
    )
}

fn poly() -> impl Strategy<Value = Polynomial> {
    poly_in(twv())
}

fn nonzero_rat() -> impl Strategy<Value = Rational> {
    small_rat().prop_filter("nonzero", |c| *c != Rational::from_integer(0.into()))
}

/// p / (c * t1^k * (1 + t2) )
fn laurent() -> impl Strategy<Value = RationalFunction> {
    (poly(), nonzero_rat(), 1u32..=4).prop_map(|(p, c, k)| {
        let v = twv();
        let unit = Polynomial::parse(&v, "1 + t2").unwrap();
        let den = Polynomial::monomial(&v, Monomial::var(3, 0, k), c);
        RationalFunction::new(p, &den * &unit).unwrap()
    })
}

proptest! {
    #[test]
    fn ring_axioms(p in poly(), q in poly(), s in poly()) {
        prop_assert_eq!(&(&p + &q) + &s, &p + &(&q + &s));
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&(&p * &q) * &s, &p * &(&q * &s));
        prop_assert_eq!(&p * &(&q + &s), &(&p * &q) + &(&p * &s));
        prop_assert!((&p - &p).is_zero());
    }

    #[test]
    fn canonical_text_round_trips(p in poly()) {
        prop_assert_eq!(Polynomial::parse(&twv(), &p.to_string()).unwrap(), p);
    }

    #[test]
    fn residue_is_linear(f in laurent(), g in laurent(), a in small_rat(), b in small_rat()) {
        let lhs = residue_at_zero(&f.scale(&a).try_add(&g.scale(&b)).unwrap(), 0).unwrap();
        let rhs = residue_at_zero(&f, 0).unwrap().scale(&a).try_add(&residue_at_zero(&g, 0).unwrap().scale(&b)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn residue_kills_derivatives(f in laurent()) {
        prop_assert!(residue_at_zero(&f.derivative(0), 0).unwrap().is_zero());
    }

    #[test]
    fn normalize_is_idempotent(f in laurent()) {
        let n = f.normalize();
        let nn = n.normalize();
        prop_assert_eq!(n.numer(), nn.numer());
        prop_assert_eq!(n.denom(), nn.denom());
        prop_assert_eq!(n, f);
    }
}

fn presentation(r: usize) -> &'static RingPresentation {
    static P: OnceLock<Vec<RingPresentation>> = OnceLock::new();
    &P.get_or_init(|| {
        (1..=3)
            .map(|r| ring_presentation(&build_weight_matrix(r).unwrap(), None).unwrap())
            .collect()
    })[r - 1]
}

proptest! {
    #[test]
    fn normal_form_is_idempotent(p in poly_in(Vars::theta_omega(3)), q in poly()) {
        for (pres, p) in [(presentation(3), p), (presentation(2), q)] {
            let p = p.embed(&pres.vars).unwrap();
            let nf = normal_form(&p, &pres.groebner).unwrap();
            prop_assert_eq!(normal_form(&nf, &pres.groebner).unwrap(), nf.clone());
            // p - nf lies in the ideal
            prop_assert!(normal_form(&(&p - &nf), &pres.groebner).unwrap().is_zero());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn symmetric_round_trip(q in poly_in(sigma_vars(3))) {
        let alphabet = Vars::theta(3);
        let p = sigma_substitute(&q, &alphabet).unwrap();
        prop_assert_eq!(symmetric_expand(&p).unwrap(), q);
    }
}

fn engine(r: usize) -> &'static Engine {
    static E: OnceLock<Vec<Engine>> = OnceLock::new();
    &E.get_or_init(|| (1..=3).map(|r| Engine::new(r).unwrap()).collect())[r - 1]
}

/// Points with denominators up to 23 that the engine accepts.
fn regular_point(r: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((-22i64..=22, 23i64..=23), r)
        .prop_map(|v| {
            v.into_iter()
                .map(|(n, d)| Rational::new(n.into(), d.into()))
                .collect::<Vec<_>>()
        })
        .prop_filter("regular", move |xi| {
            engine(r).pairing(ClassSpec::dh(r), xi).is_ok()
        })
}

fn shuffled(a: &WeightMatrix, perm: &[usize]) -> WeightMatrix {
    WeightMatrix::from_columns(perm.iter().map(|&k| a.columns()[k].clone()).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn numeric_matches_symbolic(xi in regular_point(3)) {
        let spec = ClassSpec::dh(3);
        let num = engine(3).pairing(spec, &xi).unwrap().rational().unwrap();
        let sym = engine(3).pairing_symbolic(spec, &xi).unwrap().value;
        prop_assert_eq!(sym.eval(&xi).unwrap(), num);
    }

    #[test]
    fn column_order_does_not_matter(
        xi in regular_point(3),
        perm in Just((0..8).collect::<Vec<usize>>()).prop_shuffle(),
        a in 0u32..=4,
    ) {
        let spec = ClassSpec::new(3, a, 4 - a).unwrap();
        let canon = engine(3).pairing(spec, &xi).unwrap();
        let other = Engine::with_matrix(shuffled(engine(3).matrix(), &perm)).unwrap();
        let res = other.pairing(spec, &xi).unwrap();
        prop_assert_eq!(res.rational().unwrap(), canon.rational().unwrap());
    }

    #[test]
    fn two_qubit_numeric_matches_symbolic(xi in regular_point(2)) {
        let spec = ClassSpec::dh(2);
        let num = engine(2).pairing(spec, &xi).unwrap().rational().unwrap();
        let sym = engine(2).pairing_symbolic(spec, &xi).unwrap().value;
        prop_assert_eq!(sym.eval(&xi).unwrap(), num);
    }
}

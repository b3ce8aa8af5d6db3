//! Regression checks against the canonical text in tests/fixtures/v1.

use std::path::PathBuf;

use serde_json::Value;

use qcohom_core::action::build_weight_matrix;
use qcohom_core::algebra::{parse_rational, parse_rational_list, Polynomial, Rational, Vars};
use qcohom_core::engine::{dh_density, ClassSpec, Engine};
use qcohom_core::ring::{kernel_generators, ring_presentation};
use qcohom_core::walls::Cell;

fn fixture(name: &str) -> Value {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures/v1")
        .join(name);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    serde_json::from_str(&text).unwrap()
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_str().unwrap().to_string())
        .collect()
}

fn rationals(v: &Value) -> Vec<Rational> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|x| parse_rational(x.as_str().unwrap()).unwrap())
        .collect()
}

fn check_ring(r: usize) {
    let fx = fixture(&format!("ring_r{r}.json"));
    let a = build_weight_matrix(r).unwrap();
    let xi = rationals(&fx["xi"]);
    let pres = ring_presentation(&a, Some(&xi)).unwrap();

    let gens = kernel_generators(&a);
    let want = fx["generators"].as_array().unwrap();
    assert_eq!(gens.len(), want.len());
    for (g, w) in gens.iter().zip(want) {
        assert_eq!(g.circle as u64, w["circle"].as_u64().unwrap());
        assert_eq!(g.side.to_string(), w["side"].as_str().unwrap());
        assert_eq!(g.product.factored(&a), w["factored"].as_str().unwrap());
        assert_eq!(
            g.product.expanded.to_string(),
            w["expanded"].as_str().unwrap()
        );
    }
    assert_eq!(
        pres.full_relation.to_string(),
        fx["full_relation"].as_str().unwrap()
    );
    let got: Vec<String> = pres.groebner.iter().map(Polynomial::to_string).collect();
    assert_eq!(got, strings(&fx["groebner"]));
}

#[test]
fn ring_r2() {
    check_ring(2);
}

#[test]
fn ring_r3() {
    check_ring(3);
}

#[test]
fn poincare_r3() {
    let fx = fixture("poincare_r3.json");
    let a = build_weight_matrix(3).unwrap();
    let pres = ring_presentation(&a, Some(&rationals(&fx["xi"]))).unwrap();
    let want: Vec<u64> = fx["poincare"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap())
        .collect();
    assert_eq!(pres.poincare, want);
}

fn check_dh(r: usize) {
    let fx = fixture(&format!("dh_r{r}.json"));
    let vars = Vars::xi(r);
    for (key, normalize) in [("raw", false), ("normalized", true)] {
        let d = dh_density(r, normalize).unwrap();
        let want = fx[key].as_object().unwrap();
        assert_eq!(d.cells.len(), want.len());
        for (cell, p) in &d.cells {
            let text = want[&cell.name()].as_str().unwrap();
            assert_eq!(p.to_string(), text, "{key} {}", cell.name());
            assert_eq!(*p, Polynomial::parse(&vars, text).unwrap());
        }
        if normalize {
            assert_eq!(
                d.scale,
                parse_rational(fx["scale"].as_str().unwrap()).unwrap()
            );
        }
    }
}

#[test]
fn chamber_polynomials_r2() {
    check_dh(2);
}

#[test]
fn chamber_polynomials_r3() {
    check_dh(3);
}

#[test]
fn mixed_pairing_r3() {
    let fx = fixture("mixed_r3_upper.json");
    let xi = parse_rational_list(&strings(&fx["xi"]).join(",")).unwrap();
    let spec = ClassSpec::new(3, 1, 3).unwrap();
    let res = Engine::new(3).unwrap().pairing_symbolic(spec, &xi).unwrap();
    assert_eq!(
        res.chamber.cell,
        Cell::parse(3, fx["cell"].as_str().unwrap()).unwrap()
    );
    assert_eq!(res.value.to_string(), fx["polynomial"].as_str().unwrap());
}

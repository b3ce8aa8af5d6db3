use qcohom_core::action::build_weight_matrix;
use qcohom_core::algebra::{parse_rational_list, Rational};
use qcohom_core::engine::{dh_density, ClassSpec, Engine};
use qcohom_core::walls::{enumerate_walls, Wall};

mod common;
use common::{continuity, signed_permutations, symmetry};

#[test]
fn continuous_across_walls() {
    for r in 1..=3 {
        continuity(&dh_density(r, false).unwrap()).unwrap();
    }
}

#[test]
fn invariant_under_signed_permutations() {
    for r in 1..=3 {
        symmetry(&dh_density(r, false).unwrap()).unwrap();
    }
}

#[test]
fn four_qubit_density_is_symmetric_and_normalized() {
    let d = dh_density(4, true).unwrap();
    assert_eq!(d.cells.len(), 192);
    assert_eq!(d.integral().unwrap(), Rational::from_integer(1.into()));
    continuity(&d).unwrap();
}

fn wall_key(w: &Wall) -> (Vec<i64>, Rational) {
    // normalize the overall sign so x = c and -x = -c compare equal
    let first = w
        .normal
        .iter()
        .find(|&&n| n != 0)
        .copied()
        .unwrap_or(1)
        .signum();
    (
        w.normal.iter().map(|n| n * first).collect(),
        &w.offset * Rational::from_integer(first.into()),
    )
}

#[test]
fn walls_are_symmetric() {
    for r in 2..=3 {
        let walls = enumerate_walls(&build_weight_matrix(r).unwrap());
        let mut keys: Vec<_> = walls.iter().map(wall_key).collect();
        keys.sort();
        for (perm, signs) in signed_permutations(r) {
            let mut moved: Vec<_> = walls
                .iter()
                .map(|w| {
                    let mut n = vec![0; r];
                    for i in 0..r {
                        n[perm[i]] = w.normal[i] * signs[i];
                    }
                    wall_key(&Wall {
                        normal: n,
                        offset: w.offset.clone(),
                        vertex_set: vec![],
                    })
                })
                .collect();
            moved.sort();
            assert_eq!(moved, keys);
        }
    }
}

#[test]
fn two_qubit_values() {
    let e = Engine::new(2).unwrap();
    let spec = ClassSpec::dh(2);
    let xi = parse_rational_list("0,3/4").unwrap();
    let res = e.pairing(spec, &xi).unwrap();
    assert_eq!(res.chamber.name(), "upper");
    assert_eq!(
        res.rational().unwrap(),
        Rational::new((-1).into(), 16.into())
    );
    for c in res.contributions.values() {
        assert_eq!(
            c.as_constant().unwrap(),
            Rational::new((-1).into(), 32.into())
        );
    }
}

#[test]
fn one_qubit_is_flat() {
    let d = dh_density(1, true).unwrap();
    assert_eq!(d.cells[0].1.to_string(), "1/2");
}

#[test]
fn symbolic_cap_is_enforced() {
    let e = Engine::new(6).unwrap();
    let xi = parse_rational_list("1/128,1/64,1/32,1/16,1/8,1/4").unwrap();
    assert!(e.pairing_symbolic(ClassSpec::dh(6), &xi).is_err());
}

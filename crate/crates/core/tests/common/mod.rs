//! Checks shared by the density suite and the acceptance run.

use qcohom_core::algebra::{Polynomial, Rational, Vars};
use qcohom_core::engine::DhDensity;
use qcohom_core::walls::{Cell, Sign};

fn neighbours(cell: &Cell) -> Vec<(Cell, usize, usize, i64)> {
    // (neighbour, kept axis a, eliminated axis b, s) for the wall x_b = s x_a
    let r = cell.r();
    let steps = cell.steps().to_vec();
    let mut out = Vec::new();
    for k in 0..steps.len().saturating_sub(1) {
        let mut s = steps.clone();
        s.swap(k, k + 1);
        let (a, sa) = steps[k];
        let (b, sb) = steps[k + 1];
        out.push((Cell::new(r, s).unwrap(), a, b, sa.to_i64() * sb.to_i64()));
    }
    if let Some(&(a, sa)) = steps.last() {
        let last = cell.last_axis();
        for sigma in [Sign::Plus, Sign::Minus] {
            let mut s = steps.clone();
            // on s_a x_a = sigma x_last, x_last has the sign of sigma
            *s.last_mut().unwrap() = (last, sigma);
            out.push((
                Cell::new(r, s).unwrap(),
                a,
                last,
                sa.to_i64() * sigma.to_i64(),
            ));
        }
    }
    out
}

pub fn continuity(d: &DhDensity) -> Result<(), String> {
    let vars = Vars::xi(d.r);
    for (cell, p) in &d.cells {
        for (other, a, b, s) in neighbours(cell) {
            let q = d.polynomial(&other).unwrap();
            let image = Polynomial::var(&vars, a).scale(&Rational::from_integer(s.into()));
            if p.substitute(b, &image).unwrap() != q.substitute(b, &image).unwrap() {
                return Err(format!(
                    "{} vs {} on x{} = {s} x{}",
                    cell.name(),
                    other.name(),
                    b + 1,
                    a + 1
                ));
            }
        }
    }
    Ok(())
}

pub fn signed_permutations(r: usize) -> Vec<(Vec<usize>, Vec<i64>)> {
    fn perms(items: Vec<usize>) -> Vec<Vec<usize>> {
        if items.len() <= 1 {
            return vec![items];
        }
        let mut out = Vec::new();
        for i in 0..items.len() {
            let mut rest = items.clone();
            let x = rest.remove(i);
            for mut p in perms(rest) {
                p.insert(0, x);
                out.push(p);
            }
        }
        out
    }
    let mut out = Vec::new();
    for p in perms((0..r).collect()) {
        for mask in 0..1u32 << r {
            let signs = (0..r)
                .map(|i| if mask >> i & 1 == 1 { -1 } else { 1 })
                .collect();
            out.push((p.clone(), signs));
        }
    }
    out
}

pub fn symmetry(d: &DhDensity) -> Result<(), String> {
    let vars = Vars::xi(d.r);
    for (perm, signs) in signed_permutations(d.r) {
        // y_perm[i] = signs[i] x_i
        let mut images = vec![Polynomial::zero(&vars); d.r];
        for i in 0..d.r {
            images[perm[i]] =
                Polynomial::var(&vars, i).scale(&Rational::from_integer(signs[i].into()));
        }
        for (cell, p) in &d.cells {
            let image = cell.permuted(&perm, &signs);
            let q = d.polynomial(&image).unwrap();
            if &q.compose(&images).unwrap() != p {
                return Err(format!("{} -> {}", cell.name(), image.name()));
            }
        }
    }
    Ok(())
}

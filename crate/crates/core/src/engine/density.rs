use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::{ClassSpec, Engine};
use crate::algebra::{factorial, Polynomial, Rational, Vars};
use crate::walls::Cell;
use crate::{Error, Result};

/// Piecewise polynomial density on [-1,1]^r, one polynomial per cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DhDensity {
    pub r: usize,
    pub normalized: bool,
    /// Factor applied to the raw pairing polynomials (1 when not normalized).
    pub scale: Rational,
    pub cells: Vec<(Cell, Polynomial)>,
}

impl DhDensity {
    pub fn polynomial(&self, cell: &Cell) -> Option<&Polynomial> {
        self.cells.iter().find(|(c, _)| c == cell).map(|(_, p)| p)
    }

    /// Exact integral over the hypercube.
    pub fn integral(&self) -> Result<Rational> {
        let parts: Vec<Rational> = self
            .cells
            .par_iter()
            .map(|(c, p)| integrate_cell(p, c))
            .collect::<Result<_>>()?;
        Ok(parts.into_iter().fold(Rational::zero(), |a, b| a + b))
    }

    /// Value at a point whose coordinates have distinct magnitudes.
    pub fn eval(&self, xi: &[Rational]) -> Result<Rational> {
        if xi.len() != self.r {
            return Err(Error::Shape(format!(
                "xi has {} coordinates, r = {}",
                xi.len(),
                self.r
            )));
        }
        let cell = Cell::of_point(xi)?;
        self.polynomial(&cell)
            .ok_or_else(|| Error::Config(format!("no polynomial for cell {}", cell.name())))?
            .eval(xi)
    }
}

/// omega^m pairing on every cell; with `normalize`, rescaled by one global
/// constant so that the density integrates to 1.
pub fn dh_density(r: usize, normalize: bool) -> Result<DhDensity> {
    let engine = Engine::new(r)?;
    let spec = ClassSpec::dh(r);
    let cells: Vec<(Cell, Polynomial)> = Cell::all(r)
        .into_par_iter()
        .map(|c| engine.cell_polynomial(spec, &c).map(|p| (c, p)))
        .collect::<Result<_>>()?;
    let mut d = DhDensity {
        r,
        normalized: false,
        scale: Rational::one(),
        cells,
    };
    if normalize {
        let total = d.integral()?;
        if total.is_zero() {
            return Err(Error::NotNormalized("0".into()));
        }
        let s = total.recip();
        d.cells = d.cells.into_iter().map(|(c, p)| (c, p.scale(&s))).collect();
        d.scale = s;
        d.normalized = true;
    }
    Ok(d)
}

/// The cell {1 >= s_1 x_{i_1} >= ... >= s_{r-1} x_{i_{r-1}} >= |x_{i_r}|}
/// as two simplices 0, v_1, v_1+v_2, ..., split by the sign of x_{i_r}.
pub fn cell_simplices(cell: &Cell) -> Vec<Vec<Vec<Rational>>> {
    let r = cell.r();
    let last = cell.last_axis();
    [1i64, -1]
        .into_iter()
        .map(|s_last| {
            let mut verts = vec![vec![Rational::zero(); r]];
            let mut cur = vec![Rational::zero(); r];
            let steps = cell
                .steps()
                .iter()
                .map(|&(i, s)| (i, s.to_i64()))
                .chain(std::iter::once((last, s_last)));
            for (i, s) in steps {
                cur[i] = Rational::from_integer(s.into());
                verts.push(cur.clone());
            }
            verts
        })
        .collect()
}

pub(crate) fn det(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut d = Rational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&k| !m[k][col].is_zero()) else {
            return Rational::zero();
        };
        if piv != col {
            m.swap(piv, col);
            d = -d;
        }
        d *= &m[col][col];
        for k in col + 1..n {
            if m[k][col].is_zero() {
                continue;
            }
            let f = &m[k][col] / &m[col][col];
            for c in col..n {
                let x = &m[col][c] * &f;
                m[k][c] -= x;
            }
        }
    }
    d
}

/// Exact integral of `p` over the simplex with the given n+1 vertices, via
/// the affine map from the standard simplex and
/// int lambda^a = prod a_k! / (n + |a|)!.
pub fn integrate_over_simplex(p: &Polynomial, verts: &[Vec<Rational>]) -> Result<Rational> {
    let n = p.vars().len();
    if verts.len() != n + 1 || verts.iter().any(|v| v.len() != n) {
        return Err(Error::Shape(format!(
            "simplex in dimension {n} needs {} vertices",
            n + 1
        )));
    }
    let lam = Vars::new((1..=n).map(|k| format!("l{k}")));
    let edges: Vec<Vec<Rational>> = verts[1..]
        .iter()
        .map(|v| v.iter().zip(&verts[0]).map(|(a, b)| a - b).collect())
        .collect();
    let images: Vec<Polynomial> = (0..n)
        .map(|i| {
            let coeffs: Vec<Rational> = edges.iter().map(|e| e[i].clone()).collect();
            Polynomial::linear(&lam, &coeffs, verts[0][i].clone())
        })
        .collect();
    let q = p.compose(&images)?;
    let mut acc = Rational::zero();
    for (m, c) in q.terms() {
        let num = m
            .exps()
            .iter()
            .fold(num_bigint::BigInt::one(), |a, &e| a * factorial(e));
        let den = factorial(n as u32 + m.degree());
        acc += c * Rational::new(num, den);
    }
    Ok(acc * det(edges).abs())
}

/// Exact integral over a cell. In the signed coordinates y_t = s_t x_{i_t}
/// each half of the cell is the order simplex 1 >= y_1 >= ... >= y_r >= 0,
/// where int y^f = prod_k 1 / (f_k + ... + f_r + r - k + 1), so no
/// composition is needed.
pub fn integrate_cell(p: &Polynomial, cell: &Cell) -> Result<Rational> {
    let r = cell.r();
    if p.vars().len() != r {
        return Err(Error::Shape(format!(
            "polynomial in {} variables on a cell for r = {r}",
            p.vars().len()
        )));
    }
    let axes = cell.residue_order();
    let signs: Vec<i64> = cell.steps().iter().map(|s| s.1.to_i64()).collect();
    let mut acc = Rational::zero();
    for (m, c) in p.terms() {
        let f: Vec<u32> = axes.iter().map(|&i| m.exps()[i]).collect();
        let mut den = num_bigint::BigInt::one();
        let mut tail = 0u32;
        for k in (0..r).rev() {
            tail += f[k] + 1;
            den *= tail;
        }
        let fixed: i64 = signs
            .iter()
            .zip(&f)
            .map(|(&s, &e)| if s < 0 && e % 2 == 1 { -1 } else { 1 })
            .product();
        // both signs of the last coordinate
        let both = if f[r - 1] % 2 == 1 { 0 } else { 2 };
        acc += c * Rational::new((fixed * both).into(), den);
    }
    Ok(acc)
}

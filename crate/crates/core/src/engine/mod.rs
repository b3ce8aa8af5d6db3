//! Iterated-residue pairings over the quotient M_xi and the resulting
//! Duistermaat-Heckman densities.
//!
//! A pairing sums, over the two paths of xi's dendrite, the iterated residue
//! of the class restricted to the path's terminal fixed point divided stage
//! by stage by the Euler factors, times the path sign and the fixed point's
//! polarization orientation.

mod density;

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::action::{
    build_weight_matrix, fixed_points, stage_factors, FixedPointData, StageFactors, WeightMatrix,
};
use crate::algebra::{residue_at_zero, residue_at_zero_with, Polynomial, Rational, Vars};
use crate::walls::{
    build_dendrite, dendrite_for_cell, enumerate_walls, locate_chamber, Cell, Chamber,
    DendritePath, Wall,
};
use crate::{Error, Result};

pub(crate) use density::det;
pub use density::{cell_simplices, dh_density, integrate_over_simplex, DhDensity};

/// Largest r accepted with numeric xi. r = 6 takes about two minutes in release.
pub const MAX_NUMERIC_QUBITS: usize = 6;
/// Largest r for symbolic xi (coefficients are polynomials in x1..xr).
/// r = 5 is already ~35 s per cell.
pub const MAX_SYMBOLIC_QUBITS: usize = 5;

/// Complex dimension 2^r - (r+1) of the quotient.
pub fn quotient_dim(r: usize) -> u32 {
    (1u32 << r) - r as u32 - 1
}

/// The class eta^a omega^b; a + b must equal the quotient dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassSpec {
    pub a: u32,
    pub b: u32,
}

impl ClassSpec {
    pub fn new(r: usize, a: u32, b: u32) -> Result<ClassSpec> {
        let want = quotient_dim(r);
        if a + b != want {
            return Err(Error::Dimension { got: a + b, want });
        }
        Ok(ClassSpec { a, b })
    }

    /// omega^m, whose pairing is the DH density.
    pub fn dh(r: usize) -> ClassSpec {
        ClassSpec {
            a: 0,
            b: quotient_dim(r),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub enum XiMode<'a> {
    /// xi enters as the variables x1..xr.
    Symbolic,
    Numeric(&'a [Rational]),
}

/// The class restricted to a fixed point, kept as eta^a omega^b with eta
/// and omega linear in t1..tr. Expanding the power is the expensive part of
/// a pairing, and the first residue needs only one coefficient of it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictedClass {
    pub spec: ClassSpec,
    /// -(t1 + ... + tr)
    pub eta: Polynomial,
    /// sum (alpha_i - xi_i) t_i
    pub omega: Polynomial,
}

fn binomial(n: u32, k: u32) -> Rational {
    let mut acc = num_bigint::BigInt::from(1);
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    Rational::from_integer(acc)
}

impl RestrictedClass {
    pub fn value(&self) -> Polynomial {
        &self.eta.pow(self.spec.a) * &self.omega.pow(self.spec.b)
    }

    /// Coefficient of t_v^k in the expanded value, from the binomial
    /// expansions of (c t_v + rest)^n for both factors.
    pub fn coeff_of_power(&self, v: usize, k: u32) -> Polynomial {
        let split = |l: &Polynomial| (l.coeff_of_power(v, 1), l.coeff_of_power(v, 0));
        let (ce, re) = split(&self.eta);
        let (co, ro) = split(&self.omega);
        let (a, b) = (self.spec.a, self.spec.b);
        let mut out = Polynomial::zero(self.eta.vars());
        for i in 0..=k.min(a) {
            let j = k - i;
            if j > b {
                continue;
            }
            let left = (&ce.pow(i) * &re.pow(a - i)).scale(&binomial(a, i));
            let right = (&co.pow(j) * &ro.pow(b - j)).scale(&binomial(b, j));
            out = &out + &(&left * &right);
        }
        out
    }
}

/// (-sum t_i)^a (sum (alpha_i - xi_i) t_i)^b at the fixed point `fp`.
pub fn restrict_class(
    spec: ClassSpec,
    fp: &FixedPointData,
    xi: XiMode<'_>,
) -> Result<RestrictedClass> {
    let r = fp.vertex.len();
    let want = quotient_dim(r);
    if spec.a + spec.b != want {
        return Err(Error::Dimension {
            got: spec.a + spec.b,
            want,
        });
    }
    let int = |x: i64| Rational::from_integer(x.into());
    let (vars, omega) = match xi {
        XiMode::Symbolic => {
            let vars = Vars::theta_xi(r);
            let mut omega = Polynomial::zero(&vars);
            for i in 0..r {
                let t = Polynomial::var(&vars, i);
                let x = Polynomial::var(&vars, r + i);
                let lin = &Polynomial::constant(&vars, int(fp.vertex[i])) - &x;
                omega = &omega + &(&lin * &t);
            }
            (vars, omega)
        }
        XiMode::Numeric(xs) => {
            if xs.len() != r {
                return Err(Error::Shape(format!(
                    "xi has {} coordinates, r = {r}",
                    xs.len()
                )));
            }
            let vars = Vars::theta(r);
            let c: Vec<Rational> = (0..r).map(|i| int(fp.vertex[i]) - &xs[i]).collect();
            (vars.clone(), Polynomial::linear(&vars, &c, int(0)))
        }
    };
    let eta = Polynomial::linear(&vars, &vec![int(-1); r], int(0));
    Ok(RestrictedClass { spec, eta, omega })
}

/// sign * orientation * res_{v_r} ( ... res_{v_1}(class / f_1) ... / f_r ),
/// expressed over x1..xr (constant in numeric mode).
pub fn path_contribution(
    path: &DendritePath,
    restricted: &RestrictedClass,
    factors: &StageFactors,
) -> Result<Polynomial> {
    let order = path.residue_order();
    if factors.order != order {
        return Err(Error::Config(format!(
            "stage factors built for order {:?}, path needs {:?}",
            factors.order, order
        )));
    }
    let v1 = order[0];
    let mut f = residue_at_zero_with(
        |k| Ok(restricted.coeff_of_power(v1, k)),
        &factors.factors[0],
        v1,
    )?;
    for (t, &v) in order.iter().enumerate().skip(1) {
        f = f.div_poly(&factors.factors[t])?;
        f = residue_at_zero(&f, v)?;
    }
    let p = f
        .to_polynomial()
        .ok_or_else(|| Error::NotPolynomial(f.to_string()))?;
    let p = p.scale(&Rational::from_integer(
        (path.sign * factors.orientation).into(),
    ));
    p.embed(&Vars::xi(order.len()))
}

#[derive(Clone, Debug)]
pub struct PairingResult {
    pub chamber: Chamber,
    /// Polynomial in x1..xr; a constant in numeric mode.
    pub value: Polynomial,
    /// Keyed by 1-based fixed-point index.
    pub contributions: BTreeMap<usize, Polynomial>,
}

impl PairingResult {
    pub fn rational(&self) -> Option<Rational> {
        self.value.as_constant()
    }
}

/// Fixed-point table, walls and variable lists for one weight matrix.
pub struct Engine {
    matrix: WeightMatrix,
    walls: Vec<Wall>,
    points: Vec<FixedPointData>,
}

impl Engine {
    pub fn new(r: usize) -> Result<Engine> {
        Engine::with_matrix(build_weight_matrix(r)?)
    }

    /// Any column order; fixed points are labelled by column.
    pub fn with_matrix(matrix: WeightMatrix) -> Result<Engine> {
        let walls = enumerate_walls(&matrix);
        let points = fixed_points(&matrix)?;
        Ok(Engine {
            matrix,
            walls,
            points,
        })
    }

    pub fn r(&self) -> usize {
        self.matrix.r()
    }

    pub fn matrix(&self) -> &WeightMatrix {
        &self.matrix
    }

    pub fn walls(&self) -> &[Wall] {
        &self.walls
    }

    pub fn fixed_points(&self) -> &[FixedPointData] {
        &self.points
    }

    pub fn locate(&self, xi: &[Rational]) -> Result<Chamber> {
        if xi.len() != self.r() {
            return Err(Error::Shape(format!(
                "xi has {} coordinates, r = {}",
                xi.len(),
                self.r()
            )));
        }
        locate_chamber(&self.walls, xi)
    }

    fn contributions(
        &self,
        spec: ClassSpec,
        paths: &[DendritePath],
        xi: XiMode<'_>,
    ) -> Result<BTreeMap<usize, Polynomial>> {
        let r = self.r();
        let (cap, vars): (usize, Arc<Vars>) = match xi {
            XiMode::Symbolic => (MAX_SYMBOLIC_QUBITS, Vars::theta_xi(r)),
            XiMode::Numeric(_) => (MAX_NUMERIC_QUBITS, Vars::theta(r)),
        };
        if r > cap {
            return Err(Error::Config(format!(
                "r = {r} exceeds the exact-expansion limit {cap} for this mode"
            )));
        }
        let parts: Vec<(usize, Polynomial)> = paths
            .par_iter()
            .map(|path| {
                let fp = &self.points[path.terminal - 1];
                let restricted = restrict_class(spec, fp, xi)?;
                let factors = stage_factors(fp, &path.residue_order(), &vars)?;
                Ok((
                    path.terminal,
                    path_contribution(path, &restricted, &factors)?,
                ))
            })
            .collect::<Result<_>>()?;
        let mut out: BTreeMap<usize, Polynomial> = BTreeMap::new();
        for (j, p) in parts {
            let acc = match out.remove(&j) {
                Some(q) => &q + &p,
                None => p,
            };
            out.insert(j, acc);
        }
        Ok(out)
    }

    fn assemble(
        chamber: Chamber,
        contributions: BTreeMap<usize, Polynomial>,
        r: usize,
    ) -> PairingResult {
        let value = contributions
            .values()
            .fold(Polynomial::zero(&Vars::xi(r)), |acc, p| &acc + p);
        PairingResult {
            chamber,
            value,
            contributions,
        }
    }

    /// Exact pairing at a rational regular value.
    pub fn pairing(&self, spec: ClassSpec, xi: &[Rational]) -> Result<PairingResult> {
        ClassSpec::new(self.r(), spec.a, spec.b)?;
        let chamber = self.locate(xi)?;
        let paths = build_dendrite(&chamber, &self.matrix, xi)?;
        let c = self.contributions(spec, &paths, XiMode::Numeric(xi))?;
        Ok(Self::assemble(chamber, c, self.r()))
    }

    /// The polynomial in x1..xr that computes the pairing throughout the
    /// cell containing `xi`.
    pub fn pairing_symbolic(&self, spec: ClassSpec, xi: &[Rational]) -> Result<PairingResult> {
        ClassSpec::new(self.r(), spec.a, spec.b)?;
        let chamber = self.locate(xi)?;
        let paths = build_dendrite(&chamber, &self.matrix, xi)?;
        let c = self.contributions(spec, &paths, XiMode::Symbolic)?;
        Ok(Self::assemble(chamber, c, self.r()))
    }

    /// Symbolic pairing polynomial of a cell.
    pub fn cell_polynomial(&self, spec: ClassSpec, cell: &Cell) -> Result<Polynomial> {
        ClassSpec::new(self.r(), spec.a, spec.b)?;
        let paths = dendrite_for_cell(cell, &self.matrix)?;
        let c = self.contributions(spec, &paths, XiMode::Symbolic)?;
        Ok(c.values()
            .fold(Polynomial::zero(&Vars::xi(self.r())), |acc, p| &acc + p))
    }
}

/// One-shot numeric pairing with the canonical matrix.
pub fn pairing(r: usize, spec: ClassSpec, xi: &[Rational]) -> Result<PairingResult> {
    Engine::new(r)?.pairing(spec, xi)
}

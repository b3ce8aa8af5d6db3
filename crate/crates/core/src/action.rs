//! The r-qubit torus action on P^(2^r - 1): weight matrix, fixed points,
//! isotropy weights, polarization and stage Euler factors.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use crate::algebra::{Monomial, Polynomial, Rational, Vars};
use crate::{Error, Result};

pub const MAX_QUBITS: usize = 6;

/// r x 2^r matrix of signs; column j is the moment-map image of the j-th
/// coordinate point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightMatrix {
    r: usize,
    columns: Vec<Vec<i64>>,
}

/// Builds the canonical matrix: columns sorted by number of -1 entries,
/// ties broken by the integer whose bit i is set when row r-i is -1.
pub fn build_weight_matrix(r: usize) -> Result<WeightMatrix> {
    if !(1..=MAX_QUBITS).contains(&r) {
        return Err(Error::Config(format!(
            "qubit count {r} outside 1..={MAX_QUBITS}"
        )));
    }
    let mut keyed: Vec<(u32, usize, Vec<i64>)> = (0..1usize << r)
        .map(|mask| {
            // bit i of mask <-> row r-i (1-based) is -1
            let col: Vec<i64> = (0..r)
                .map(|row| {
                    if mask >> (r - 1 - row) & 1 == 1 {
                        -1
                    } else {
                        1
                    }
                })
                .collect();
            (mask.count_ones(), mask, col)
        })
        .collect();
    keyed.sort();
    Ok(WeightMatrix {
        r,
        columns: keyed.into_iter().map(|(_, _, c)| c).collect(),
    })
}

impl WeightMatrix {
    /// Any column order, as long as every sign pattern occurs exactly once.
    pub fn from_columns(columns: Vec<Vec<i64>>) -> Result<Self> {
        let r = columns.first().map_or(0, Vec::len);
        if !(1..=MAX_QUBITS).contains(&r) || columns.len() != 1 << r {
            return Err(Error::Config(format!(
                "expected 2^r columns of length r, got {} columns of length {r}",
                columns.len()
            )));
        }
        let mut seen = vec![false; 1 << r];
        for c in &columns {
            if c.len() != r || c.iter().any(|&x| x != 1 && x != -1) {
                return Err(Error::Config(format!(
                    "column {c:?} is not a sign vector of length {r}"
                )));
            }
            let mask = c.iter().fold(0usize, |m, &x| (m << 1) | usize::from(x < 0));
            if std::mem::replace(&mut seen[mask], true) {
                return Err(Error::Config(format!("column {c:?} repeated")));
            }
        }
        Ok(WeightMatrix { r, columns })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn num_points(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[Vec<i64>] {
        &self.columns
    }

    /// Column for the 1-based fixed-point index `j`.
    pub fn column(&self, j: usize) -> Result<&[i64]> {
        self.check_index(j)?;
        Ok(&self.columns[j - 1])
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.columns[j - 1][i]
    }

    /// 1-based index of the column equal to `vertex`.
    pub fn index_of(&self, vertex: &[i64]) -> Option<usize> {
        self.columns.iter().position(|c| c == vertex).map(|k| k + 1)
    }

    fn check_index(&self, j: usize) -> Result<()> {
        if (1..=self.columns.len()).contains(&j) {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: j,
                max: self.columns.len(),
            })
        }
    }
}

/// Integer coefficients of a linear form in t1..tr.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Weight {
    pub coeffs: Vec<i64>,
}

impl Weight {
    pub fn dot(&self, v: &[i64]) -> i64 {
        self.coeffs.iter().zip(v).map(|(a, b)| a * b).sum()
    }

    pub fn negate(&self) -> Weight {
        Weight {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    /// As a polynomial over `vars`, whose first r variables are t1..tr.
    pub fn to_poly(&self, vars: &Arc<Vars>) -> Polynomial {
        let c: Vec<Rational> = self
            .coeffs
            .iter()
            .map(|&x| Rational::from_integer(x.into()))
            .collect();
        Polynomial::linear(vars, &c, Rational::from_integer(0.into()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolarizedWeight {
    pub weight: Weight,
    pub epsilon: i64,
}

impl PolarizedWeight {
    /// `epsilon * weight`
    pub fn polarized(&self) -> Weight {
        if self.epsilon < 0 {
            self.weight.negate()
        } else {
            self.weight.clone()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPointData {
    pub index: usize,
    pub vertex: Vec<i64>,
    /// Indices l (1-based) of the other fixed points, aligned with `weights`.
    pub others: Vec<usize>,
    pub weights: Vec<Weight>,
    pub polarized: Vec<PolarizedWeight>,
}

impl FixedPointData {
    /// Product of the polarization signs: the orientation of the polarized
    /// tangent space relative to the complex one.
    pub fn orientation(&self) -> i64 {
        self.polarized.iter().map(|p| p.epsilon).product()
    }

    /// Product of all polarized weights, the polarized equivariant Euler class.
    pub fn euler_class(&self, vars: &Arc<Vars>) -> Polynomial {
        self.polarized.iter().fold(Polynomial::one(vars), |acc, p| {
            &acc * &p.polarized().to_poly(vars)
        })
    }
}

/// gamma = (-2^(r-1), ..., -2, -1)
pub fn canonical_gamma(r: usize) -> Vec<i64> {
    (0..r).map(|i| -(1i64 << (r - 1 - i))).collect()
}

/// Weights alpha_l - alpha_j for l != j, in column order.
pub fn isotropy_weights(a: &WeightMatrix, j: usize) -> Result<Vec<Weight>> {
    let aj = a.column(j)?;
    Ok(a.columns
        .iter()
        .enumerate()
        .filter(|(k, _)| k + 1 != j)
        .map(|(_, al)| Weight {
            coeffs: al.iter().zip(aj).map(|(x, y)| x - y).collect(),
        })
        .collect())
}

pub fn polarize(weights: &[Weight], gamma: &[i64]) -> Result<Vec<PolarizedWeight>> {
    weights
        .iter()
        .map(|w| match w.dot(gamma) {
            0 => Err(Error::NonGenericPolarization {
                weight: w.coeffs.clone(),
                gamma: gamma.to_vec(),
            }),
            d => Ok(PolarizedWeight {
                weight: w.clone(),
                epsilon: if d < 0 { -1 } else { 1 },
            }),
        })
        .collect()
}

pub fn fixed_point(a: &WeightMatrix, j: usize, gamma: &[i64]) -> Result<FixedPointData> {
    let weights = isotropy_weights(a, j)?;
    let polarized = polarize(&weights, gamma)?;
    Ok(FixedPointData {
        index: j,
        vertex: a.column(j)?.to_vec(),
        others: (1..=a.num_points()).filter(|&l| l != j).collect(),
        weights,
        polarized,
    })
}

/// The whole fixed-point table under the canonical polarization.
pub fn fixed_points(a: &WeightMatrix) -> Result<Vec<FixedPointData>> {
    let gamma = canonical_gamma(a.r());
    (1..=a.num_points())
        .map(|j| fixed_point(a, j, &gamma))
        .collect()
}

/// Per-stage Euler factors for one residue order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageFactors {
    /// Residue variables (0-based axes), first residue first.
    pub order: Vec<usize>,
    pub factors: Vec<Polynomial>,
    /// Positions into `FixedPointData::polarized` taken by each stage.
    pub stages: Vec<Vec<usize>>,
    pub orientation: i64,
}

/// Greedy stage assignment: stage t takes every still-unassigned polarized
/// weight with a nonzero coefficient on `order[t]`, and its factor is the
/// product of those coefficients times `t_{order[t]}^(stage size)`.
///
/// `vars` must start with t1..tr.
pub fn stage_factors(
    fp: &FixedPointData,
    order: &[usize],
    vars: &Arc<Vars>,
) -> Result<StageFactors> {
    let r = fp.vertex.len();
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != (0..r).collect::<Vec<_>>() {
        return Err(Error::Config(format!(
            "{order:?} is not a permutation of the {r} axes"
        )));
    }
    if fp.polarized.is_empty() {
        return Err(Error::DegenerateStage(1));
    }
    let mut taken = vec![false; fp.polarized.len()];
    let mut factors = Vec::with_capacity(r);
    let mut stages = Vec::with_capacity(r);
    for (t, &v) in order.iter().enumerate() {
        let mut coef = BigInt::one();
        let mut members = Vec::new();
        for (k, pw) in fp.polarized.iter().enumerate() {
            let c = pw.polarized().coeffs[v];
            if !taken[k] && c != 0 {
                taken[k] = true;
                coef *= c;
                members.push(k);
            }
        }
        if members.is_empty() {
            return Err(Error::DegenerateStage(t + 1));
        }
        let m = Monomial::var(vars.len(), v, members.len() as u32);
        factors.push(Polynomial::monomial(vars, m, Rational::from_integer(coef)));
        stages.push(members);
    }
    if taken.iter().any(|t| !t) {
        return Err(Error::DegenerateStage(r));
    }
    Ok(StageFactors {
        order: order.to_vec(),
        factors,
        stages,
        orientation: fp.orientation(),
    })
}

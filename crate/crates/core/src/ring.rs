//! Cohomology ring of the quotient at a regular level: product generators
//! of the Kirwan kernel, Groebner bases over `t1..tr, w`, Poincare series,
//! and the elementary symmetric rewriting of the full relation.
//!
//! The 2r coordinate generators alone do not give a finite-dimensional
//! quotient once r >= 2, so the presentation also carries one product for
//! every minimal vertex set cut off by a hyperplane through xi. Those depend
//! on the chamber of xi.

use std::collections::{BTreeSet, HashSet};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::action::WeightMatrix;
use crate::algebra::{Monomial, Polynomial, Rational, Vars};
use crate::engine::det;
use crate::walls::{enumerate_walls, Sign};
use crate::{Error, Result};

/// Largest r for which `ring_presentation` is attempted.
pub const MAX_RING_QUBITS: usize = 4;

/// chi_j = sum_i a_ij t_i, one per column, over `t1..tr, w`.
pub fn characters(a: &WeightMatrix) -> Vec<Polynomial> {
    let vars = Vars::theta_omega(a.r());
    a.columns().iter().map(|c| character(&vars, c)).collect()
}

fn character(vars: &Arc<Vars>, col: &[i64]) -> Polynomial {
    let coeffs: Vec<Rational> = col
        .iter()
        .map(|&x| Rational::from_integer(x.into()))
        .chain(std::iter::once(Rational::zero()))
        .collect();
    Polynomial::linear(vars, &coeffs, Rational::zero())
}

fn factor(vars: &Arc<Vars>, col: &[i64]) -> Polynomial {
    let w = Polynomial::var(vars, vars.len() - 1);
    &w + &character(vars, col)
}

fn factor_text(col: &[i64]) -> String {
    let mut s = String::from("(w");
    for (i, &x) in col.iter().enumerate() {
        s.push_str(if x > 0 { " + " } else { " - " });
        s.push_str(&format!("t{}", i + 1));
    }
    s.push(')');
    s
}

/// Product of the linear forms `w + chi_j` over a set of fixed points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductGenerator {
    /// 1-based column indices, increasing.
    pub points: Vec<usize>,
    pub factors: Vec<Polynomial>,
    pub expanded: Polynomial,
}

impl ProductGenerator {
    fn new(a: &WeightMatrix, vars: &Arc<Vars>, points: Vec<usize>) -> Self {
        let factors: Vec<Polynomial> = points
            .iter()
            .map(|&j| factor(vars, &a.columns()[j - 1]))
            .collect();
        let mut expanded = Polynomial::one(vars);
        for f in &factors {
            expanded = &expanded * f;
        }
        ProductGenerator {
            points,
            factors,
            expanded,
        }
    }

    /// e.g. `(w + t1 + t2)(w + t1 - t2)`
    pub fn factored(&self, a: &WeightMatrix) -> String {
        self.points
            .iter()
            .map(|&j| factor_text(&a.columns()[j - 1]))
            .collect()
    }
}

/// Generator attached to circle `circle` (1-based) and one side of its level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelGenerator {
    pub circle: usize,
    pub side: Sign,
    pub product: ProductGenerator,
}

/// The 2r coordinate generators, ordered by circle then `+` before `-`.
pub fn kernel_generators(a: &WeightMatrix) -> Vec<KernelGenerator> {
    let vars = Vars::theta_omega(a.r());
    let mut out = Vec::with_capacity(2 * a.r());
    for i in 0..a.r() {
        for side in [Sign::Plus, Sign::Minus] {
            let points = (1..=a.num_points())
                .filter(|&j| a.entry(i, j) == side.to_i64())
                .collect();
            out.push(KernelGenerator {
                circle: i + 1,
                side,
                product: ProductGenerator::new(a, &vars, points),
            });
        }
    }
    out
}

/// prod_j (w + chi_j) over all fixed points.
pub fn full_relation(a: &WeightMatrix) -> Polynomial {
    let vars = Vars::theta_omega(a.r());
    ProductGenerator::new(a, &vars, (1..=a.num_points()).collect()).expanded
}

/// xi_i = 2^(i-1) / 2^(r+2): inside the central cell, off every wall.
pub fn default_xi(r: usize) -> Vec<Rational> {
    let den = Rational::from_integer((1i64 << (r + 2)).into());
    (0..r)
        .map(|i| Rational::from_integer((1i64 << i).into()) / &den)
        .collect()
}

fn check_regular(a: &WeightMatrix, xi: &[Rational]) -> Result<()> {
    if xi.len() != a.r() {
        return Err(Error::Dimension {
            got: xi.len() as u32,
            want: a.r() as u32,
        });
    }
    if let Some(i) = xi.iter().position(|x| x.abs() >= Rational::one()) {
        return Err(Error::OutsidePolytope(i + 1));
    }
    if let Some(w) = enumerate_walls(a)
        .into_iter()
        .find(|w| w.value(xi).is_zero())
    {
        return Err(Error::NotRegular(w.to_string()));
    }
    Ok(())
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Minimal nonempty vertex sets {j : <alpha_j - xi, X> > 0} over directions X.
/// The minima sit on the rays of the central arrangement cut out by the
/// vectors alpha_j - xi, so only those rays are visited. Sets are 1-based.
pub fn separating_sets(a: &WeightMatrix, xi: &[Rational]) -> Result<Vec<Vec<usize>>> {
    check_regular(a, xi)?;
    let r = a.r();
    let diffs: Vec<Vec<Rational>> = a
        .columns()
        .iter()
        .map(|c| {
            c.iter()
                .zip(xi)
                .map(|(&v, x)| Rational::from_integer(v.into()) - x)
                .collect()
        })
        .collect();
    let mut sets: BTreeSet<Vec<usize>> = BTreeSet::new();
    for sub in combinations(diffs.len(), r - 1) {
        // generalized cross product of the chosen rows
        let normal: Vec<Rational> = (0..r)
            .map(|k| {
                let minor: Vec<Vec<Rational>> = sub
                    .iter()
                    .map(|&j| {
                        diffs[j]
                            .iter()
                            .enumerate()
                            .filter(|&(c, _)| c != k)
                            .map(|(_, x)| x.clone())
                            .collect()
                    })
                    .collect();
                let d = det(minor);
                if k % 2 == 0 {
                    d
                } else {
                    -d
                }
            })
            .collect();
        if normal.iter().all(Zero::is_zero) {
            continue;
        }
        for sgn in [1, -1] {
            let pos: Vec<usize> = diffs
                .iter()
                .enumerate()
                .filter(|(_, d)| {
                    let s: Rational = d.iter().zip(&normal).map(|(x, n)| x * n).sum();
                    if sgn > 0 {
                        s.is_positive()
                    } else {
                        s.is_negative()
                    }
                })
                .map(|(j, _)| j + 1)
                .collect();
            if !pos.is_empty() && pos.len() < diffs.len() {
                sets.insert(pos);
            }
        }
    }
    let all: Vec<Vec<usize>> = sets.into_iter().collect();
    let minimal = all
        .iter()
        .filter(|s| {
            !all.iter()
                .any(|t| t.len() < s.len() && t.iter().all(|x| s.contains(x)))
        })
        .cloned()
        .collect();
    Ok(minimal)
}

pub fn separating_generators(a: &WeightMatrix, xi: &[Rational]) -> Result<Vec<ProductGenerator>> {
    let vars = Vars::theta_omega(a.r());
    Ok(separating_sets(a, xi)?
        .into_iter()
        .map(|s| ProductGenerator::new(a, &vars, s))
        .collect())
}

#[derive(Clone, Debug)]
pub struct RingPresentation {
    pub r: usize,
    pub xi: Vec<Rational>,
    pub vars: Arc<Vars>,
    pub generators: Vec<KernelGenerator>,
    pub separating: Vec<ProductGenerator>,
    pub full_relation: Polynomial,
    pub groebner: Vec<Polynomial>,
    pub poincare: Vec<u64>,
}

impl RingPresentation {
    /// Everything handed to Buchberger, without duplicates.
    pub fn ideal_generators(&self) -> Vec<Polynomial> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        let products = self
            .generators
            .iter()
            .map(|g| &g.product)
            .chain(&self.separating);
        for p in products {
            if seen.insert(p.points.clone()) {
                out.push(p.expanded.clone());
            }
        }
        out.push(self.full_relation.clone());
        out
    }

    pub fn normal_form(&self, p: &Polynomial) -> Result<Polynomial> {
        normal_form(p, &self.groebner)
    }
}

/// Presentation at `xi` (default: `default_xi`).
pub fn ring_presentation(a: &WeightMatrix, xi: Option<&[Rational]>) -> Result<RingPresentation> {
    let r = a.r();
    if r > MAX_RING_QUBITS {
        return Err(Error::Config(format!(
            "ring presentation supports r <= {MAX_RING_QUBITS}, got {r}"
        )));
    }
    let xi = xi
        .map(<[Rational]>::to_vec)
        .unwrap_or_else(|| default_xi(r));
    let separating = separating_generators(a, &xi)?;
    let mut pres = RingPresentation {
        r,
        xi,
        vars: Vars::theta_omega(r),
        generators: kernel_generators(a),
        separating,
        full_relation: full_relation(a),
        groebner: Vec::new(),
        poincare: Vec::new(),
    };
    pres.groebner = groebner_basis(&pres.ideal_generators())?;
    pres.poincare = poincare_series(&pres.groebner)?;
    Ok(pres)
}

fn same_ring(gens: &[Polynomial]) -> Result<&Arc<Vars>> {
    let first = gens
        .first()
        .ok_or_else(|| Error::Config("empty generator list".into()))?;
    let vars = first.vars();
    if let Some(g) = gens.iter().find(|g| g.vars() != vars) {
        return Err(Error::RingMismatch(
            vars.names().join(","),
            g.vars().names().join(","),
        ));
    }
    Ok(vars)
}

/// Full reduction of `p` by `basis` (no Groebner assumption).
fn reduce(p: &Polynomial, basis: &[Polynomial]) -> Polynomial {
    let mut p = p.clone();
    let mut rem = Polynomial::zero(p.vars());
    while let Some((m, c)) = p.pop_leading() {
        let div = basis
            .iter()
            .find(|g| g.leading_monomial().is_some_and(|lm| lm.divides(&m)));
        match div {
            Some(g) => {
                let (lm, lc) = g.leading_term().unwrap();
                let shift = m.div(lm);
                let coef = -(&c / lc);
                // the leading term cancels against the popped one
                let mut tail = g.clone();
                tail.pop_leading();
                p.add_scaled_shifted(&tail, &coef, &shift);
            }
            None => rem.add_term(m, c),
        }
    }
    rem
}

/// Remainder of complete multivariate division; zero iff `p` lies in the
/// ideal when `basis` is a Groebner basis.
pub fn normal_form(p: &Polynomial, basis: &[Polynomial]) -> Result<Polynomial> {
    if let Some(g) = basis.iter().find(|g| g.vars() != p.vars()) {
        return Err(Error::RingMismatch(
            p.vars().names().join(","),
            g.vars().names().join(","),
        ));
    }
    Ok(reduce(p, basis))
}

fn lm(p: &Polynomial) -> &Monomial {
    p.leading_monomial().expect("basis elements are nonzero")
}

/// Reduced Groebner basis under grevlex: Buchberger with the coprime and
/// chain criteria, pairs taken smallest lcm first. Elements are monic and
/// sorted by leading monomial, largest first.
pub fn groebner_basis(gens: &[Polynomial]) -> Result<Vec<Polynomial>> {
    same_ring(gens)?;
    let mut basis: Vec<Polynomial> = Vec::new();
    let mut pending: BTreeSet<(usize, usize)> = BTreeSet::new();

    let push =
        |basis: &mut Vec<Polynomial>, pending: &mut BTreeSet<(usize, usize)>, h: Polynomial| {
            let k = basis.len();
            basis.push(h.monic());
            for i in 0..k {
                pending.insert((i, k));
            }
        };

    for g in gens {
        let h = reduce(g, &basis);
        if !h.is_zero() {
            push(&mut basis, &mut pending, h);
        }
    }

    while let Some(&(i, j)) = pending.iter().min_by(|x, y| {
        lm(&basis[x.0])
            .lcm(lm(&basis[x.1]))
            .cmp(&lm(&basis[y.0]).lcm(lm(&basis[y.1])))
            .then(x.cmp(y))
    }) {
        pending.remove(&(i, j));
        let (mi, mj) = (lm(&basis[i]), lm(&basis[j]));
        if mi.coprime(mj) {
            continue;
        }
        let l = mi.lcm(mj);
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && lm(&basis[k]).divides(&l)
                && !pending.contains(&(i.min(k), i.max(k)))
                && !pending.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        let mut s = basis[i].mul_monomial(&l.div(mi), &Rational::one());
        s.add_scaled_shifted(&basis[j], &-Rational::one(), &l.div(mj));
        let h = reduce(&s, &basis);
        if !h.is_zero() {
            push(&mut basis, &mut pending, h);
        }
    }

    // minimal: drop elements whose leading monomial is a multiple of another's
    let mut keep: Vec<Polynomial> = Vec::new();
    for (k, g) in basis.iter().enumerate() {
        let redundant = basis
            .iter()
            .enumerate()
            .any(|(t, h)| t != k && lm(h).divides(lm(g)) && (lm(h) != lm(g) || t < k));
        if !redundant {
            keep.push(g.clone());
        }
    }
    let mut reduced: Vec<Polynomial> = (0..keep.len())
        .map(|k| {
            let others: Vec<Polynomial> = keep
                .iter()
                .enumerate()
                .filter(|&(t, _)| t != k)
                .map(|(_, h)| h.clone())
                .collect();
            let g = &keep[k];
            let (m, c) = g.leading_term().unwrap();
            let mut tail = g.clone();
            tail.pop_leading();
            let mut out = reduce(&tail, &others);
            out.add_term(m.clone(), c.clone());
            out.monic()
        })
        .collect();
    reduced.sort_by(|x, y| lm(y).cmp(lm(x)));
    Ok(reduced)
}

/// Dimensions of the graded quotient by polynomial degree d (cohomological
/// degree 2d), from the standard monomials. Errors if some variable has no
/// pure power among the leading monomials.
pub fn poincare_series(basis: &[Polynomial]) -> Result<Vec<u64>> {
    let vars = same_ring(basis)?;
    let lms: Vec<&Monomial> = basis.iter().map(lm).collect();
    if lms.iter().any(|m| m.is_one()) {
        return Ok(Vec::new());
    }
    let n = vars.len();
    let mut bound = vec![0u32; n];
    for v in 0..n {
        bound[v] = lms
            .iter()
            .filter(|m| m.pure_power_of() == Some(v))
            .map(|m| m.exps()[v])
            .min()
            .ok_or_else(|| Error::InfiniteQuotient(vars.name(v).to_string()))?;
    }
    let mut counts: Vec<u64> = Vec::new();
    let mut e = vec![0u32; n];
    loop {
        let m = Monomial::new(e.clone());
        if !lms.iter().any(|l| l.divides(&m)) {
            let d = m.degree() as usize;
            if counts.len() <= d {
                counts.resize(d + 1, 0);
            }
            counts[d] += 1;
        }
        // odometer over the box
        let mut k = 0;
        while k < n {
            e[k] += 1;
            if e[k] < bound[k] {
                break;
            }
            e[k] = 0;
            k += 1;
        }
        if k == n {
            break;
        }
    }
    Ok(counts)
}

/// sigma_k of all variables of `vars`.
pub fn elementary(vars: &Arc<Vars>, k: usize) -> Polynomial {
    Polynomial::from_terms(
        vars,
        combinations(vars.len(), k).into_iter().map(|idx| {
            let mut e = vec![0u32; vars.len()];
            for i in idx {
                e[i] = 1;
            }
            (Monomial::new(e), Rational::one())
        }),
    )
}

/// `s1..sn`
pub fn sigma_vars(n: usize) -> Arc<Vars> {
    Vars::new((1..=n).map(|k| format!("s{k}")))
}

/// Rewrites a polynomial symmetric in all of its variables as a polynomial
/// in `s1..sn`, s_k standing for the k-th elementary symmetric polynomial.
pub fn symmetric_expand(p: &Polynomial) -> Result<Polynomial> {
    let alpha = p.vars().clone();
    let n = alpha.len();
    for i in 0..n.saturating_sub(1) {
        if p.swap_vars(i, i + 1) != *p {
            return Err(Error::NotSymmetric(
                alpha.name(i).to_string(),
                alpha.name(i + 1).to_string(),
            ));
        }
    }
    let svars = sigma_vars(n);
    let sig: Vec<Polynomial> = (1..=n).map(|k| elementary(&alpha, k)).collect();
    let mut rest = p.clone();
    let mut out = Polynomial::zero(&svars);
    while !rest.is_zero() {
        // lex-leading term, first variable largest
        let (m, c) = rest
            .terms()
            .max_by(|x, y| x.0.exps().cmp(y.0.exps()))
            .map(|(m, c)| (m.clone(), c.clone()))
            .unwrap();
        let e = m.exps();
        let d: Vec<u32> = (0..n)
            .map(|k| e[k] - e.get(k + 1).copied().unwrap_or(0))
            .collect();
        let mut prod = Polynomial::one(&alpha);
        for (k, &dk) in d.iter().enumerate() {
            if dk > 0 {
                prod = &prod * &sig[k].pow(dk);
            }
        }
        out.add_term(Monomial::new(d), c.clone());
        rest.add_scaled_shifted(&prod, &-c, &Monomial::one(n));
    }
    Ok(out)
}

/// Inverse of `symmetric_expand`: substitutes sigma_k(alphabet) for s_k.
pub fn sigma_substitute(q: &Polynomial, alphabet: &Arc<Vars>) -> Result<Polynomial> {
    let images: Vec<Polynomial> = (1..=q.vars().len())
        .map(|k| elementary(alphabet, k))
        .collect();
    q.compose(&images)
}

/// sigma_k of the characters, as a polynomial in `t1..tr` and in `s1..sr`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChiSigma {
    pub k: usize,
    pub theta: Polynomial,
    pub sigma: Polynomial,
}

/// Reads sigma_k(chi) off the coefficient of w^(N-k) in the full relation
/// and rewrites it in the elementary symmetric polynomials of theta.
pub fn chi_sigma_decomposition(a: &WeightMatrix) -> Result<Vec<ChiSigma>> {
    let rel = full_relation(a);
    let n = a.num_points();
    let w = a.r();
    let theta = Vars::theta(a.r());
    (1..=n)
        .map(|k| {
            let t = rel.coeff_of_power(w, (n - k) as u32).embed(&theta)?;
            let sigma = symmetric_expand(&t)?;
            Ok(ChiSigma { k, theta: t, sigma })
        })
        .collect()
}

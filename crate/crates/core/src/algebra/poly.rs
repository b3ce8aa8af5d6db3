use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::rational::{parse_rational, Rational};
use crate::{Error, Result};

/// Ordered list of variable names. Later names are larger in the monomial
/// order, so `[t1, t2, w]` gives `t1 < t2 < w`.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct Vars {
    names: Vec<String>,
}

impl Vars {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Arc<Vars> {
        Arc::new(Vars {
            names: names.into_iter().map(Into::into).collect(),
        })
    }

    fn indexed(prefix: &str, n: usize) -> impl Iterator<Item = String> + '_ {
        (1..=n).map(move |i| format!("{prefix}{i}"))
    }

    /// `t1..tr`
    pub fn theta(r: usize) -> Arc<Vars> {
        Vars::new(Self::indexed("t", r))
    }

    /// `t1..tr, w`
    pub fn theta_omega(r: usize) -> Arc<Vars> {
        Vars::new(Self::indexed("t", r).chain(std::iter::once("w".to_string())))
    }

    /// `t1..tr, x1..xr`
    pub fn theta_xi(r: usize) -> Arc<Vars> {
        Vars::new(Self::indexed("t", r).chain(Self::indexed("x", r)))
    }

    /// `x1..xr`
    pub fn xi(r: usize) -> Arc<Vars> {
        Vars::new(Self::indexed("x", r))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    fn same(a: &Arc<Vars>, b: &Arc<Vars>) -> bool {
        Arc::ptr_eq(a, b) || a == b
    }
}

/// Exponent vector. `Ord` is graded reverse lexicographic: higher total
/// degree wins, and at equal degree the monomial with the smaller exponent
/// in the earliest (smallest) variable is larger.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, i: usize, e: u32) -> Self {
        let mut v = vec![0; n];
        v[i] = e;
        Monomial(v)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(&a, &b)| a == 0 || b == 0)
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| a.max(b))
                .collect(),
        )
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| a.min(b))
                .collect(),
        )
    }

    /// `self / other`; caller guarantees divisibility.
    pub fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(&a, &b)| a - b).collect())
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(&a, &b)| a + b).collect())
    }

    /// The single variable this monomial is a pure power of, if any.
    pub fn pure_power_of(&self) -> Option<usize> {
        let mut nz = self.0.iter().enumerate().filter(|(_, &e)| e > 0);
        match (nz.next(), nz.next()) {
            (Some((i, _)), None) => Some(i),
            _ => None,
        }
    }

    fn write(&self, vars: &Vars, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            f.write_str(vars.name(i))?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        for (a, b) in self.0.iter().zip(&other.0) {
            if a != b {
                return b.cmp(a);
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial with exact rational coefficients. Terms are kept in
/// increasing monomial order; zero coefficients are never stored.
#[derive(Clone, Debug)]
pub struct Polynomial {
    vars: Arc<Vars>,
    terms: BTreeMap<Monomial, Rational>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        Vars::same(&self.vars, &other.vars) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

fn mismatch(a: &Vars, b: &Vars) -> Error {
    Error::RingMismatch(a.names.join(","), b.names.join(","))
}

impl Polynomial {
    pub fn zero(vars: &Arc<Vars>) -> Self {
        Polynomial {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &Arc<Vars>, c: Rational) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(Monomial::one(vars.len()), c);
        p
    }

    pub fn one(vars: &Arc<Vars>) -> Self {
        Self::constant(vars, Rational::one())
    }

    pub fn var(vars: &Arc<Vars>, i: usize) -> Self {
        Self::monomial(vars, Monomial::var(vars.len(), i, 1), Rational::one())
    }

    pub fn var_named(vars: &Arc<Vars>, name: &str) -> Result<Self> {
        let i = vars
            .index_of(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        Ok(Self::var(vars, i))
    }

    pub fn monomial(vars: &Arc<Vars>, m: Monomial, c: Rational) -> Self {
        assert_eq!(m.0.len(), vars.len(), "exponent vector length");
        let mut p = Self::zero(vars);
        p.add_term(m, c);
        p
    }

    pub fn from_terms(
        vars: &Arc<Vars>,
        terms: impl IntoIterator<Item = (Monomial, Rational)>,
    ) -> Self {
        let mut p = Self::zero(vars);
        for (m, c) in terms {
            assert_eq!(m.0.len(), vars.len(), "exponent vector length");
            p.add_term(m, c);
        }
        p
    }

    /// `c_0 + sum_i coeffs[i] * var_i`; `coeffs` may be shorter than the list.
    pub fn linear(vars: &Arc<Vars>, coeffs: &[Rational], c0: Rational) -> Self {
        let mut p = Self::constant(vars, c0);
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(Monomial::var(vars.len(), i, 1), c.clone());
        }
        p
    }

    pub fn vars(&self) -> &Arc<Vars> {
        &self.vars
    }

    /// Terms in increasing monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.keys().next_back()
    }

    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.terms.values().next_back()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut d = self.terms.keys().map(Monomial::degree);
        match d.next() {
            None => true,
            Some(first) => d.all(|e| e == first),
        }
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0)
    }

    pub fn min_degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[i]).min()
    }

    /// Whether variable `i` occurs in any term.
    pub fn involves(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m.0[i] > 0)
    }

    /// Removes and returns the leading term.
    pub fn pop_leading(&mut self) -> Option<(Monomial, Rational)> {
        self.terms.pop_last()
    }

    /// `self += c * x^m`, in place.
    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += coef * x^shift * other`, in place.
    pub fn add_scaled_shifted(&mut self, other: &Polynomial, coef: &Rational, shift: &Monomial) {
        assert!(
            Vars::same(&self.vars, &other.vars),
            "{}",
            mismatch(&self.vars, &other.vars)
        );
        for (m, c) in &other.terms {
            self.add_term(m.mul(shift), c * coef);
        }
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check(other)?;
        let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                *acc.entry(m1.mul(m2)).or_insert_with(Rational::zero) += c1 * c2;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(Polynomial {
            vars: self.vars.clone(),
            terms: acc,
        })
    }

    fn check(&self, other: &Polynomial) -> Result<()> {
        if Vars::same(&self.vars, &other.vars) {
            Ok(())
        } else {
            Err(mismatch(&self.vars, &other.vars))
        }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.vars);
        }
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.vars);
        }
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(k, x)| (k.mul(m), x * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut result = Polynomial::one(&self.vars);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Coefficient of `v^k` as a polynomial in the remaining variables
    /// (same variable list, exponent of `v` zero).
    pub fn coeff_of_power(&self, v: usize, k: u32) -> Polynomial {
        let mut out = Polynomial::zero(&self.vars);
        for (m, c) in &self.terms {
            if m.0[v] == k {
                let mut e = m.0.clone();
                e[v] = 0;
                out.terms.insert(Monomial(e), c.clone());
            }
        }
        out
    }

    /// Exact division by the monomial `m`; `None` if some term is not divisible.
    pub fn div_monomial(&self, m: &Monomial) -> Option<Polynomial> {
        let mut out = Polynomial::zero(&self.vars);
        for (k, c) in &self.terms {
            if !m.divides(k) {
                return None;
            }
            out.terms.insert(k.div(m), c.clone());
        }
        Some(out)
    }

    /// Greatest monomial dividing every term (the unit monomial for zero).
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        match it.next() {
            None => Monomial::one(self.vars.len()),
            Some(first) => it.fold(first.clone(), |g, m| g.gcd(m)),
        }
    }

    /// Replaces each variable `i` by `images[i]`; all images share one
    /// variable list, which becomes the result's.
    pub fn compose(&self, images: &[Polynomial]) -> Result<Polynomial> {
        if images.len() != self.vars.len() {
            return Err(Error::Shape(format!(
                "compose needs {} images, got {}",
                self.vars.len(),
                images.len()
            )));
        }
        let target = match images.first() {
            Some(p) => p.vars.clone(),
            None => {
                let c = self.as_constant().unwrap_or_else(Rational::zero);
                return Ok(Polynomial::constant(&Vars::new(Vec::<String>::new()), c));
            }
        };
        for p in images {
            if !Vars::same(&p.vars, &target) {
                return Err(mismatch(&target, &p.vars));
            }
        }
        let mut powers: Vec<Vec<Polynomial>> = images
            .iter()
            .map(|p| vec![Polynomial::one(&target), p.clone()])
            .collect();
        let mut out = Polynomial::zero(&target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(&target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = &powers[i][powers[i].len() - 1] * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e as usize];
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Substitutes `v := q` where `q` lives over the same variable list.
    pub fn substitute(&self, v: usize, q: &Polynomial) -> Result<Polynomial> {
        self.check(q)?;
        let images: Vec<Polynomial> = (0..self.vars.len())
            .map(|i| {
                if i == v {
                    q.clone()
                } else {
                    Polynomial::var(&self.vars, i)
                }
            })
            .collect();
        self.compose(&images)
    }

    /// Partial evaluation: the listed variables are set to rational values.
    pub fn substitute_values(&self, values: &[(usize, Rational)]) -> Polynomial {
        let mut out = Polynomial::zero(&self.vars);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            let mut coef = c.clone();
            for (i, x) in values {
                let k = e[*i];
                if k > 0 {
                    coef *= num_traits::pow(x.clone(), k as usize);
                    e[*i] = 0;
                }
            }
            out.add_term(Monomial(e), coef);
        }
        out
    }

    /// Full evaluation at a point.
    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.vars.len() {
            return Err(Error::Shape(format!(
                "point has {} coordinates, polynomial has {} variables",
                point.len(),
                self.vars.len()
            )));
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= num_traits::pow(point[i].clone(), e as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Re-expresses the polynomial over another variable list, matching by
    /// name. Variables that occur must exist in `target`.
    pub fn embed(&self, target: &Arc<Vars>) -> Result<Polynomial> {
        let mut map = Vec::with_capacity(self.vars.len());
        for (i, n) in self.vars.names.iter().enumerate() {
            match target.index_of(n) {
                Some(j) => map.push(Some(j)),
                None if self.involves(i) => return Err(Error::UnknownVariable(n.clone())),
                None => map.push(None),
            }
        }
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0; target.len()];
            for (i, &k) in m.0.iter().enumerate() {
                if let Some(j) = map[i] {
                    e[j] += k;
                }
            }
            out.add_term(Monomial(e), c.clone());
        }
        Ok(out)
    }

    pub fn derivative(&self, v: usize) -> Polynomial {
        let mut out = Polynomial::zero(&self.vars);
        for (m, c) in &self.terms {
            let k = m.0[v];
            if k > 0 {
                let mut e = m.0.clone();
                e[v] -= 1;
                out.add_term(Monomial(e), c * Rational::from_integer(BigInt::from(k)));
            }
        }
        out
    }

    /// Swaps two variables.
    pub fn swap_vars(&self, i: usize, j: usize) -> Polynomial {
        let mut out = Polynomial::zero(&self.vars);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            e.swap(i, j);
            out.terms.insert(Monomial(e), c.clone());
        }
        out
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Polynomial {
        match self.leading_coeff() {
            None => self.clone(),
            Some(lc) => self.scale(&lc.recip()),
        }
    }

    /// Parses the canonical text form, e.g. `w^2 + 2*t1*w - 1/8*t2 + 3`.
    /// Parentheses are not supported.
    pub fn parse(vars: &Arc<Vars>, s: &str) -> Result<Polynomial> {
        let bad = || Error::Parse(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad());
        }
        // Split at top-level signs, keeping the sign with its term.
        let mut pieces: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        let mut prev: Option<char> = None;
        for ch in compact.chars() {
            if (ch == '+' || ch == '-') && !matches!(prev, None | Some('^') | Some('*')) {
                pieces.push((neg, std::mem::take(&mut cur)));
                neg = ch == '-';
            } else if (ch == '+' || ch == '-') && prev.is_none() {
                neg = ch == '-';
            } else {
                cur.push(ch);
            }
            prev = Some(ch);
        }
        pieces.push((neg, cur));
        let mut out = Polynomial::zero(vars);
        for (neg, term) in pieces {
            if term.is_empty() {
                return Err(bad());
            }
            let mut coef = Rational::one();
            let mut exps = vec![0u32; vars.len()];
            for factor in term.split('*') {
                if factor.is_empty() {
                    return Err(bad());
                }
                if factor.starts_with(|c: char| c.is_ascii_digit() || c == '.') {
                    coef *= parse_rational(factor)?;
                } else {
                    let (name, e) = match factor.split_once('^') {
                        Some((n, e)) => (n, e.parse::<u32>().map_err(|_| bad())?),
                        None => (factor, 1),
                    };
                    let i = vars
                        .index_of(name)
                        .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
                    exps[i] += e;
                }
            }
            if neg {
                coef = -coef;
            }
            out.add_term(Monomial(exps), coef);
        }
        Ok(out)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let mag = c.abs();
            if k == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                m.write(&self.vars, f)?;
            }
        }
        Ok(())
    }
}

/// Product of two polynomials over the same variable list.
pub fn poly_mul(p: &Polynomial, q: &Polynomial) -> Result<Polynomial> {
    p.try_mul(q)
}

pub fn poly_pow(p: &Polynomial, k: u32) -> Polynomial {
    p.pow(k)
}

// Operator forms panic on mismatched variable lists; use the `try_` methods
// where that can happen.
impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &'a Polynomial) -> Polynomial {
        self.try_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &'a Polynomial) -> Polynomial {
        self.try_sub(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &'a Polynomial) -> Polynomial {
        self.try_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

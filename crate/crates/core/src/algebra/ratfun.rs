use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::poly::Polynomial;
use super::rational::Rational;
use crate::{Error, Result};

/// Quotient of two polynomials over one variable list.
///
/// Normal form: common monomial factors cancelled; a constant denominator
/// is folded into the numerator; otherwise both sides carry coprime integer
/// coefficients and the denominator's leading coefficient is positive. No
/// multivariate gcd is taken, so equality is decided by cross-multiplying.
#[derive(Clone, Debug)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if num.vars() != den.vars() {
            return Err(Error::RingMismatch(
                num.vars().names().join(","),
                den.vars().names().join(","),
            ));
        }
        Ok(Self::normalized(num, den))
    }

    pub fn from_poly(p: Polynomial) -> Self {
        let den = Polynomial::one(p.vars());
        RationalFunction { num: p, den }
    }

    pub fn numer(&self) -> &Polynomial {
        &self.num
    }

    pub fn denom(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The polynomial value when the denominator is constant.
    pub fn to_polynomial(&self) -> Option<Polynomial> {
        self.den.as_constant().map(|c| self.num.scale(&c.recip()))
    }

    pub fn normalize(&self) -> Self {
        Self::normalized(self.num.clone(), self.den.clone())
    }

    fn normalized(num: Polynomial, den: Polynomial) -> Self {
        if num.is_zero() {
            let one = Polynomial::one(num.vars());
            return RationalFunction { num, den: one };
        }
        let g = num.monomial_content().gcd(&den.monomial_content());
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_monomial(&g).unwrap(), den.div_monomial(&g).unwrap())
        };
        if let Some(c) = den.as_constant() {
            let one = Polynomial::one(den.vars());
            return RationalFunction {
                num: num.scale(&c.recip()),
                den: one,
            };
        }
        let mut l = BigInt::one();
        for (_, c) in num.terms().chain(den.terms()) {
            l = l.lcm(c.denom());
        }
        let mut g = BigInt::zero();
        for (_, c) in num.terms().chain(den.terms()) {
            g = g.gcd(&(c * &l).to_integer());
        }
        let mut factor = Rational::new(l, g);
        if den.leading_coeff().is_some_and(|c| c.is_negative()) {
            factor = -factor;
        }
        if !factor.is_one() {
            num = num.scale(&factor);
            den = den.scale(&factor);
        }
        RationalFunction { num, den }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.den == other.den {
            return Ok(Self::normalized(
                self.num.try_add(&other.num)?,
                self.den.clone(),
            ));
        }
        let n = self
            .num
            .try_mul(&other.den)?
            .try_add(&other.num.try_mul(&self.den)?)?;
        Ok(Self::normalized(n, self.den.try_mul(&other.den)?))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        Ok(Self::normalized(
            self.num.try_mul(&other.num)?,
            self.den.try_mul(&other.den)?,
        ))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self::normalized(
            self.num.try_mul(&other.den)?,
            self.den.try_mul(&other.num)?,
        ))
    }

    pub fn div_poly(&self, p: &Polynomial) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self::normalized(self.num.clone(), self.den.try_mul(p)?))
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::normalized(self.num.scale(c), self.den.clone())
    }

    pub fn derivative(&self, v: usize) -> Self {
        let n = &(&self.num.derivative(v) * &self.den) - &(&self.num * &self.den.derivative(v));
        Self::normalized(n, &self.den * &self.den)
    }
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        match (self.num.try_mul(&other.den), other.num.try_mul(&self.den)) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        }
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.as_constant().is_some_and(|c| c.is_one()) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, Vars};

    fn p(s: &str) -> Polynomial {
        Polynomial::parse(&Vars::theta(2), s).unwrap()
    }

    #[test]
    fn normal_form() {
        let f = RationalFunction::new(p("2*t1^2*t2 + 4*t1"), p("-6*t1*t2 + 2*t1")).unwrap();
        assert_eq!(f.numer(), &p("-t1*t2 - 2"));
        assert_eq!(f.denom(), &p("3*t2 - 1"));
        let c = RationalFunction::new(p("t1 + 1"), p("4")).unwrap();
        assert_eq!(c.to_polynomial().unwrap(), p("1/4*t1 + 1/4"));
        assert_eq!(f.normalize().numer(), f.numer());
    }

    #[test]
    fn zero_denominator() {
        assert_eq!(
            RationalFunction::new(p("t1"), p("0")).unwrap_err(),
            Error::ZeroDenominator
        );
    }

    #[test]
    fn field_operations() {
        let a = RationalFunction::new(p("1"), p("t1")).unwrap();
        let b = RationalFunction::new(p("1"), p("t2")).unwrap();
        let s = a.try_add(&b).unwrap();
        assert_eq!(s, RationalFunction::new(p("t1 + t2"), p("t1*t2")).unwrap());
        assert!(s.try_sub(&s).unwrap().is_zero());
        let q = s.try_div(&s).unwrap();
        // no gcd reduction, but equality cross-multiplies
        assert_eq!(q, RationalFunction::from_poly(p("1")));
        assert_eq!(
            a.scale(&rat(3, 2)),
            RationalFunction::new(p("3"), p("2*t1")).unwrap()
        );
    }
}

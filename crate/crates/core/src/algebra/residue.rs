use super::poly::Polynomial;
use super::ratfun::RationalFunction;
use crate::{Error, Result};

/// Coefficient of `v^-1` in the Laurent expansion of `f` about `v = 0`.
///
/// The denominator is split as `v^m * u(v)` with `u(0) != 0`; `1/u` is
/// expanded to order `m-1` with the scaled recursion
/// `B_0 = 1`, `B_k = -sum_{i=1..k} u_i B_{k-i} u_0^{i-1}`, so that
/// `1/u = sum_k B_k v^k / u_0^{k+1}` and everything stays polynomial until
/// the final division by `u_0^m`.
pub fn residue_at_zero(f: &RationalFunction, v: usize) -> Result<RationalFunction> {
    let f = f.normalize();
    residue_at_zero_with(|k| Ok(f.numer().coeff_of_power(v, k)), f.denom(), v)
}

/// Same residue with the numerator supplied coefficient by coefficient:
/// `numer_coeff(k)` is the coefficient of `v^k`. Only coefficients paired
/// with a nonzero `B_k` are requested, so a monomial denominator asks for
/// exactly one.
pub fn residue_at_zero_with<F>(
    mut numer_coeff: F,
    den: &Polynomial,
    v: usize,
) -> Result<RationalFunction>
where
    F: FnMut(u32) -> Result<Polynomial>,
{
    if den.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    let vars = den.vars().clone();
    let m = den.min_degree_in(v).unwrap_or(0);
    if m == 0 {
        return Ok(RationalFunction::from_poly(Polynomial::zero(&vars)));
    }
    let shift = crate::algebra::Monomial::var(vars.len(), v, m);
    let u = den
        .div_monomial(&shift)
        .expect("v^m divides the denominator");
    let ucoef: Vec<Polynomial> = (0..m).map(|i| u.coeff_of_power(v, i)).collect();
    let u0 = &ucoef[0];

    let mut u0pow = vec![Polynomial::one(&vars)];
    for i in 1..=m as usize {
        u0pow.push(&u0pow[i - 1] * u0);
    }
    let mut b: Vec<Polynomial> = vec![Polynomial::one(&vars)];
    for k in 1..m as usize {
        let mut acc = Polynomial::zero(&vars);
        for i in 1..=k {
            if ucoef[i].is_zero() || b[k - i].is_zero() {
                continue;
            }
            acc = &acc + &(&(&ucoef[i] * &b[k - i]) * &u0pow[i - 1]);
        }
        b.push(-&acc);
    }
    let mut num = Polynomial::zero(&vars);
    let top = m as usize - 1;
    for (k, bk) in b.iter().enumerate() {
        if bk.is_zero() {
            continue;
        }
        let nk = numer_coeff((top - k) as u32)?;
        if nk.is_zero() {
            continue;
        }
        num = &num + &(&(&nk * bk) * &u0pow[top - k]);
    }
    RationalFunction::new(num, u0pow[m as usize].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Vars;

    fn rf(vars: &std::sync::Arc<Vars>, n: &str, d: &str) -> RationalFunction {
        RationalFunction::new(
            Polynomial::parse(vars, n).unwrap(),
            Polynomial::parse(vars, d).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn simple_pole() {
        let v = Vars::theta(1);
        assert_eq!(
            residue_at_zero(&rf(&v, "1", "t1"), 0).unwrap().to_string(),
            "1"
        );
    }

    #[test]
    fn polynomial_has_no_residue() {
        let v = Vars::theta(2);
        assert!(residue_at_zero(&rf(&v, "t1^3 + t2 - 7", "1"), 0)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn inner_two_qubit_residue() {
        let v = Vars::new(["t1", "t2", "a", "b"]);
        let r = residue_at_zero(&rf(&v, "a*t1 + b*t2", "4*t2^2"), 1).unwrap();
        assert_eq!(r.to_polynomial().unwrap().to_string(), "1/4*b");
    }

    #[test]
    fn non_monomial_unit() {
        // 1/(v^2 (1 + a v)) = v^-2 - a v^-1 + ..., residue -a
        let v = Vars::new(["v", "a"]);
        let r = residue_at_zero(&rf(&v, "1", "v^2 + a*v^3"), 0).unwrap();
        assert_eq!(r.to_polynomial().unwrap().to_string(), "-a");
        // (1 + v)/(v^3 (2 - v)): 1/(2-v) = 1/2 + v/4 + v^2/8, times (1+v): v^2 coeff 1/8 + 1/4
        let r = residue_at_zero(&rf(&v, "1 + v", "2*v^3 - v^4"), 0).unwrap();
        assert_eq!(r.to_polynomial().unwrap().to_string(), "3/8");
        // 1/(v (a + v)) has residue 1/a
        let r = residue_at_zero(&rf(&v, "1", "a*v + v^2"), 0).unwrap();
        assert_eq!(r, rf(&v, "1", "a"));
    }

    #[test]
    fn lazy_numerator_asks_once_for_monomial_poles() {
        let v = Vars::theta(2);
        let den = Polynomial::parse(&v, "4*t2^3").unwrap();
        let mut asked = Vec::new();
        let r = residue_at_zero_with(
            |k| {
                asked.push(k);
                Ok(Polynomial::parse(&v, "t1").unwrap())
            },
            &den,
            1,
        )
        .unwrap();
        assert_eq!(asked, vec![2]);
        assert_eq!(r.to_polynomial().unwrap().to_string(), "1/4*t1");
        assert_eq!(
            residue_at_zero_with(|_| Ok(Polynomial::zero(&v)), &Polynomial::zero(&v), 0)
                .unwrap_err(),
            Error::ZeroDenominator
        );
    }
}

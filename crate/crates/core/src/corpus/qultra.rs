//! Continuous q-ultraspherical polynomials as Laurent polynomials in `x`,
//! and their connection coefficients.

use std::collections::BTreeMap;

use super::sums::SumOptions;
use super::{Bindings, Built, IdentityInstance, Side, Value, VerificationReport};
use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::product::Factors;
use crate::series::TSeries;

/// A Laurent polynomial in `x` whose coefficients are truncated series.
pub type LaurentPolyX = BTreeMap<i64, TSeries>;

/// `C_n(x; beta | q)` coefficientwise: `(x-exponent, factors)` pairs.
fn qultra_factors(n: i64, beta: &Monomial) -> Vec<(i64, Factors)> {
    let q = Monomial::q(1);
    (0..=n)
        .map(|k| {
            let f = Factors::new()
                .poch(beta, 2, k)
                .poch(beta, 2, n - k)
                .recip_poch(&q, 2, k)
                .recip_poch(&q, 2, n - k);
            (2 * k - n, f)
        })
        .collect()
}

fn accumulate(p: &mut LaurentPolyX, x: i64, s: TSeries) {
    let e = p.remove(&x);
    let v = match e {
        Some(old) => old.add(&s),
        None => s,
    };
    p.insert(x, v);
}

/// `C_n(x; beta | q) = sum_k (beta)_k (beta)_{n-k} / ((q)_k (q)_{n-k}) x^{2k-n}`.
pub fn qultra_poly(n: i64, beta: &Monomial, order: i64) -> Result<LaurentPolyX> {
    let mut p = LaurentPolyX::new();
    for (x, f) in qultra_factors(n, beta) {
        accumulate(&mut p, x, f.eval(order)?);
    }
    Ok(p)
}

pub(super) fn check_conn(b: &Bindings) -> Result<()> {
    if b.opt_int("n")?.is_some_and(|n| n > 12) {
        return Err(Error::ConstraintViolation("n must be <= 12".into()));
    }
    if b.opt_mono("beta")?.is_some_and(|m| m == Monomial::one() || m.is_zero()) {
        return Err(Error::ConstraintViolation("beta must be nonzero and not 1".into()));
    }
    Ok(())
}

pub(super) fn conn(b: &Bindings, order: i64, _: &SumOptions) -> Result<Built> {
    let n = b.int("n")?;
    let beta = b.mono("beta")?;
    let c = b.mono("c")?;
    let lhs = qultra_poly(n, &c, order)?;
    let q = Monomial::q(1);
    let mut rhs = LaurentPolyX::new();
    let mut terms = 0;
    for k in 0..=n / 2 {
        let coef = Factors::new()
            .poch(&c.div(&beta), 2, k)
            .poch(&c, 2, n - k)
            .recip_poch(&q, 2, k)
            .recip_poch(&beta.shift_q(1), 2, n - k)
            .mono(&beta.pow(k))
            .binomial(&beta.shift_q(n - 2 * k))
            .recip_binomial(&beta);
        for (x, g) in qultra_factors(n - 2 * k, &beta) {
            accumulate(&mut rhs, x, coef.clone().extend(&g).eval(order)?);
            terms += 1;
        }
    }
    Ok(Built { lhs: Side::Bivariate(lhs), rhs: Side::Bivariate(rhs), terms, derived: vec![] })
}

/// Verifies the connection formula from `C_n(x; c)` to `C_{n-2k}(x; beta)`.
pub fn connection_check(n: i64, beta: &Monomial, c: &Monomial, order: i64) -> VerificationReport {
    let inst = IdentityInstance::new(
        "QULTRA_CONN",
        &[("n", Value::Int(n)), ("beta", Value::Mono(beta.clone())), ("c", Value::Mono(c.clone()))],
        order,
    );
    super::verify(&inst)
}

#[cfg(test)]
mod tests {
    use super::super::Status;
    use super::*;
    use crate::rational::rat;

    #[test]
    fn small_polynomials() {
        let b = Monomial::cq(rat(2), 1);
        let p0 = qultra_poly(0, &b, 20).unwrap();
        assert_eq!(p0.len(), 1);
        assert!(p0[&0].agrees_with(&TSeries::one()));
        let p1 = qultra_poly(1, &b, 20).unwrap();
        let want = Factors::new().binomial(&b).recip_binomial(&Monomial::q(1)).eval(20).unwrap();
        assert_eq!(p1[&1], want);
        assert_eq!(p1[&-1], want);
        let p5 = qultra_poly(5, &b, 20).unwrap();
        for j in [1, 3, 5] {
            assert_eq!(p5[&j], p5[&-j]);
        }
    }

    #[test]
    fn connection() {
        let two_q = Monomial::cq(rat(2), 1);
        let three_q = Monomial::cq(rat(3), 1);
        for n in 0..=4 {
            let r = connection_check(n, &two_q, &three_q, 40);
            assert_eq!(r.status, Status::Pass, "{}", r.summary_line());
        }
        let r = connection_check(3, &two_q, &two_q, 40);
        assert_eq!(r.status, Status::Pass);
    }
}

//! Specializations of the 8psi8 transformation that recover Ramanujan's
//! 1psi1 and Bailey's 6psi6, and the index shift that turns its left side
//! into a very-well-poised series starting at zero.
//!
//! The transformation carries a nonnegative integer `m`; both routes take
//! `m` large enough that the `m`-dependent tails lie beyond the order.

use serde::Serialize;

use super::sums::SumOptions;
use super::wp_rows::{r1psi1_product, r1psi1_sum, B6, T8};
use crate::error::Result;
use crate::monomial::Monomial;
use crate::product::{times, Factors};
use crate::rational::rat;
use crate::series::TSeries;

/// Order in t-units used by [`degeneration_suite`].
pub const SUITE_ORDER: i64 = 100;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegenerationCheck {
    pub name: String,
    /// The value of `m` standing in for `m -> infinity`, if any.
    pub m: Option<i64>,
    pub passed: bool,
    pub first_mismatch_texp: Option<i64>,
}

impl DegenerationCheck {
    fn compare(name: &str, m: Option<i64>, a: &TSeries, b: &TSeries) -> Self {
        let first = a.first_mismatch(b);
        DegenerationCheck { name: name.into(), m, passed: first.is_none(), first_mismatch_texp: first }
    }
}

fn mono(c: i64, t: i64) -> Monomial {
    Monomial::new(rat(c), t)
}

/// `alpha = 0, mu1 = b, mu2 = aq/(bz), rho1 = aq/c, rho2 = bz, a = b`.
pub fn one_psi_one_route(b: &Monomial, c: &Monomial, z: &Monomial, order: i64) -> Result<Vec<DegenerationCheck>> {
    let opts = SumOptions::default();
    let m = order + 10;
    let aq = b.shift_q(1);
    let t = T8 {
        m,
        a: b.clone(),
        alpha: Monomial::new(rat(0), 0),
        rho1: aq.div(c),
        rho2: b.mul(z),
        mu1: b.clone(),
        mu2: aq.div(&b.mul(z)),
    };
    let (inner, _) = t.rhs_sum(order, &opts)?;
    let (direct, _) = r1psi1_sum(b, c, z, order, &opts)?;
    let (lhs, _) = t.lhs(order, &opts)?;
    let product = r1psi1_product(b, c, z);
    let rhs = times(&t.prefactor(), |cap| product.eval(cap), order)?;
    Ok(vec![
        DegenerationCheck::compare("1psi1 route, inner sum", Some(m), &inner, &direct),
        DegenerationCheck::compare("1psi1 route, both sides", Some(m), &lhs, &rhs),
    ])
}

/// `rho1 = b, rho2 = c, mu1 = d, mu2 = e, alpha = aq/d`, so that `lambda = e`.
pub fn six_psi_six_route(a: &Monomial, params: [Monomial; 4], order: i64) -> Result<Vec<DegenerationCheck>> {
    let opts = SumOptions::default();
    let m = order + 10;
    let [b, c, d, e] = params.clone();
    let t = T8 { m, a: a.clone(), alpha: a.shift_q(1).div(&d), rho1: b, rho2: c, mu1: d, mu2: e };
    let b6 = B6 { a: a.clone(), params };
    let (lhs, _) = t.lhs(order, &opts)?;
    let (direct, _) = b6.sum(order, &opts)?;
    let (rhs, _) = t.rhs(order, &opts)?;
    let product = b6.product().eval(order)?;
    Ok(vec![
        DegenerationCheck::compare("6psi6 route, left side", Some(m), &lhs, &direct),
        DegenerationCheck::compare("6psi6 route, right side", Some(m), &rhs, &product),
    ])
}

/// Replaces `k` by `k - m` in the left side of the 8psi8 transformation and
/// compares each term with the well-poised form in `a q^(-2m)` and
/// parameters `x q^(-m)`, for `k = 0..count`.
pub fn index_shift_check(m: i64, count: i64, order: i64) -> Result<DegenerationCheck> {
    let t = T8 {
        m,
        a: mono(7, 5),
        alpha: mono(3, 6),
        rho1: mono(2, 2),
        rho2: mono(3, 2),
        mu1: mono(2, 4),
        mu2: mono(5, 2),
    };
    let a = &t.a;
    let aq = a.shift_q(1);
    let x_last = a.pow(3).shift_q(2 + m).div(&t.alpha.mul(&t.rho1).mul(&t.rho2).mul(&t.mu1).mul(&t.mu2));
    let xs = [t.rho1.clone(), t.rho2.clone(), t.mu1.clone(), t.mu2.clone(), a.shift_q(-m), x_last];
    let z = t.alpha.div(a);
    let a2 = a.shift_q(-2 * m);
    let x2: Vec<Monomial> = xs.iter().map(|x| x.shift_q(-m)).collect();
    let mut c = Factors::new().binomial(&a2).recip_binomial(a).mono(&z.pow(-m));
    for x in &xs {
        c = c.poch(&aq.div(x).shift_q(-m), 2, m).recip_poch(&x.shift_q(-m), 2, m);
    }
    let mut first = None;
    for k in 0..count {
        let mut shifted = c.clone().well_poised(&a2, 2, k).mono(&z.pow(k));
        for x in &x2 {
            shifted = shifted.poch(x, 2, k).recip_poch(&a2.shift_q(1).div(x), 2, k);
        }
        let lhs = t.lhs_term(k - m).eval(order)?;
        let rhs = shifted.eval(order)?;
        if let Some(e) = lhs.first_mismatch(&rhs) {
            first = first.or(Some(e));
        }
    }
    Ok(DegenerationCheck { name: format!("index shift, m = {m}"), m: Some(m), passed: first.is_none(), first_mismatch_texp: first })
}

/// Every degeneration check at [`SUITE_ORDER`].
pub fn degeneration_suite() -> Result<Vec<DegenerationCheck>> {
    degeneration_suite_at(SUITE_ORDER)
}

pub fn degeneration_suite_at(order: i64) -> Result<Vec<DegenerationCheck>> {
    let mut out = one_psi_one_route(&mono(2, 0), &mono(2, 4), &mono(1, 2), order)?;
    out.extend(six_psi_six_route(&mono(2, 4), [mono(2, 2), mono(3, 2), mono(5, 1), mono(7, 2)], order)?);
    out.push(index_shift_check(2, 5, order)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_at_low_order() {
        for c in degeneration_suite_at(30).unwrap() {
            assert!(c.passed, "{c:?}");
        }
    }

    #[test]
    fn index_shift_small_m() {
        assert!(index_shift_check(2, 5, 30).unwrap().passed);
        assert!(index_shift_check(0, 3, 30).unwrap().passed);
    }
}

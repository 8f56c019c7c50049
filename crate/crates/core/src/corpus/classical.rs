//! Rogers-Ramanujan, q-binomial, q-Pfaff-Saalschutz and the triple product.

use super::sums::{bilateral, unilateral, SumOptions};
use super::{series, Bindings, Built};
use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::product::Factors;

pub(super) fn no_check(_: &Bindings) -> Result<()> {
    Ok(())
}

fn q() -> Monomial {
    Monomial::q(1)
}

fn rr(i: i64, order: i64, opts: &SumOptions) -> Result<Built> {
    let lhs = unilateral(0, None, move |k| Factors::new().q_pow(k * k + i * k).recip_poch(&q(), 2, k))
        .eval(order, opts)?;
    let rhs = Factors::new()
        .recip_poch_inf(&Monomial::q(1 + i), 10)
        .recip_poch_inf(&Monomial::q(4 - i), 10)
        .eval(order)?;
    Ok(Built { lhs: series(lhs.value), rhs: series(rhs), terms: lhs.terms, derived: vec![] })
}

pub(super) fn rr1(_: &Bindings, order: i64, opts: &SumOptions) -> Result<Built> {
    rr(0, order, opts)
}

pub(super) fn rr2(_: &Bindings, order: i64, opts: &SumOptions) -> Result<Built> {
    rr(1, order, opts)
}

pub(super) fn check_qbi(b: &Bindings) -> Result<()> {
    if b.opt_int("n")?.is_some_and(|n| n > 10) {
        return Err(Error::ConstraintViolation("n must be <= 10".into()));
    }
    Ok(())
}

pub(super) fn qbi(b: &Bindings, order: i64, opts: &SumOptions) -> Result<Built> {
    let n = b.int("n")?;
    let z = b.mono("z")?;
    let qn = Monomial::q(-n);
    let zz = z.clone();
    let lhs = unilateral(0, Some(n), move |k| {
        Factors::new().poch(&qn, 2, k).mono(&zz.pow(k)).recip_poch(&q(), 2, k)
    })
    .eval(order, opts)?;
    let rhs = Factors::new().poch(&z.shift_q(-n), 2, n).eval(order)?;
    Ok(Built { lhs: series(lhs.value), rhs: series(rhs), terms: lhs.terms, derived: vec![] })
}

pub(super) fn check_qps(b: &Bindings) -> Result<()> {
    if b.opt_int("n")?.is_some_and(|n| n > 8) {
        return Err(Error::ConstraintViolation("n must be <= 8".into()));
    }
    for p in ["a", "b", "c"] {
        if b.opt_mono(p)?.is_some_and(|m| m.is_zero()) {
            return Err(Error::ConstraintViolation(format!("{p} must be nonzero")));
        }
    }
    Ok(())
}

pub(super) fn qps(b: &Bindings, order: i64, opts: &SumOptions) -> Result<Built> {
    let n = b.int("n")?;
    let (a, bb, c) = (b.mono("a")?, b.mono("b")?, b.mono("c")?);
    let d = a.mul(&bb).shift_q(1 - n).div(&c);
    let qn = Monomial::q(-n);
    let (a2, b2, c2) = (a.clone(), bb.clone(), c.clone());
    let lhs = unilateral(0, Some(n), move |k| {
        Factors::new()
            .poch(&a2, 2, k)
            .poch(&b2, 2, k)
            .poch(&qn, 2, k)
            .recip_poch(&q(), 2, k)
            .recip_poch(&c2, 2, k)
            .recip_poch(&d, 2, k)
            .q_pow(k)
    })
    .eval(order, opts)?;
    let rhs = Factors::new()
        .poch(&c.div(&a), 2, n)
        .poch(&c.div(&bb), 2, n)
        .recip_poch(&c, 2, n)
        .recip_poch(&c.div(&a.mul(&bb)), 2, n)
        .eval(order)?;
    Ok(Built { lhs: series(lhs.value), rhs: series(rhs), terms: lhs.terms, derived: vec![] })
}

pub(super) fn check_jtp(b: &Bindings) -> Result<()> {
    if b.opt_mono("z")?.is_some_and(|m| m.is_zero()) {
        return Err(Error::ConstraintViolation("z must be nonzero".into()));
    }
    Ok(())
}

pub(super) fn jtp(b: &Bindings, order: i64, opts: &SumOptions) -> Result<Built> {
    let z = b.mono("z")?;
    let zz = z.clone();
    let lhs = bilateral(
        move |n| Factors::new().sign(n).mono(&zz.pow(n)).q_pow(n * (n - 1) / 2),
        order,
        opts,
    )?;
    let rhs = Factors::new()
        .poch_inf(&q(), 2)
        .poch_inf(&z, 2)
        .poch_inf(&q().div(&z), 2)
        .eval(order)?;
    Ok(Built { lhs: series(lhs.value), rhs: series(rhs), terms: lhs.terms, derived: vec![] })
}

#[cfg(test)]
mod tests {
    use super::super::{verify, IdentityInstance, Status, Value};
    use crate::monomial::Monomial;
    use crate::rational::{rat, ratio};

    fn mono(c: crate::Rational, e: i64) -> Value {
        Value::Mono(Monomial::cq(c, e))
    }

    #[test]
    fn rogers_ramanujan() {
        for id in ["RR1", "RR2"] {
            let r = verify(&IdentityInstance::new(id, &[], 120));
            assert_eq!(r.status, Status::Pass, "{}", r.summary_line());
        }
    }

    #[test]
    fn binomial_and_saalschutz() {
        for n in 0..=6 {
            let r = verify(&IdentityInstance::new("QBI", &[("n", Value::Int(n)), ("z", mono(rat(3), 1))], 40));
            assert_eq!(r.status, Status::Pass, "{}", r.summary_line());
        }
        let r = verify(&IdentityInstance::new(
            "QPS",
            &[("n", Value::Int(4)), ("a", mono(rat(2), 1)), ("b", mono(rat(3), 2)), ("c", mono(ratio(5, 7), 1))],
            40,
        ));
        assert_eq!(r.status, Status::Pass, "{}", r.summary_line());
    }

    #[test]
    fn triple_product() {
        let r = verify(&IdentityInstance::new("JTP", &[("z", Value::Mono(Monomial::q(1)))], 60));
        assert_eq!(r.status, Status::Pass, "{}", r.summary_line());
        let r = verify(&IdentityInstance::new("JTP", &[("z", mono(ratio(-2, 3), 3))], 60));
        assert_eq!(r.status, Status::Pass, "{}", r.summary_line());
    }
}

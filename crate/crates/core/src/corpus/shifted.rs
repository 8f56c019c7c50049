//! Identities obtained from the shifted Bailey pair: m-versions of the
//! Andrews-Gordon and Gollnitz-Gordon identities, their polynomial
//! specializations, inversions and change-of-base variants.

use super::sums::{unilateral, MultiSum, SumOptions};
use super::{series, Bindings, Built, Status, VerificationReport};
use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::product::{times, Factors};
use crate::qfunc::{qbinom, qbinom_factors};
use crate::rational::{fmt_rational, sign_pow};
use crate::series::{TSeries, EXACT};

fn q1() -> Monomial {
    Monomial::q(1)
}

fn c2(n: i64) -> i64 {
    n * (n - 1) / 2
}

/// `(B^a, B^b, B^c; B)_inf / (q)_inf` with `B = q^modulus`; exponents in q.
fn jacobi_over_euler(modulus: i64, exps: [i64; 2]) -> Factors {
    let mut f = Factors::new().recip_poch_inf(&q1(), 2);
    for e in std::iter::once(modulus).chain(exps) {
        f = f.poch_inf(&Monomial::q(e), 2 * modulus);
    }
    f
}

/// Sum over `n_0 >= n_1 >= .. >= n_{d-1} >= floor` of `q^(sum n_i^2 + lin_i n_i)`
/// divided by `(q)_{n_i - n_{i+1}}` and by `(q)_{n_{d-1}}`, i.e. the
/// Andrews-Gordon style multisum with per-variable linear exponents.
fn ag_multisum<'a>(lin: Vec<i64>, last_base_q: i64) -> MultiSum<'a> {
    let d = lin.len();
    let lin2 = lin.clone();
    MultiSum::new(
        vec![0; d],
        vec![None; d],
        move |i, n| Ok(Some(2 * (n * n + lin2[i] * n))),
        move |p| {
            let mut f = Factors::new();
            let mut e = 0;
            for i in 0..d {
                e += p[i] * p[i] + lin[i] * p[i];
                if i + 1 < d {
                    f = f.recip_poch(&q1(), 2, p[i] - p[i + 1]);
                }
            }
            let base = Monomial::q(last_base_q);
            f.q_pow(e).recip_poch(&base, 2 * last_base_q, p[d - 1])
        },
    )
    .chain()
}

fn kmrr_lhs(k: i64, m: i64, order: i64, opts: &SumOptions) -> Result<(TSeries, usize)> {
    let k = k as usize;
    let floor = -(m / 2);
    let mut ceils = vec![None; k];
    ceils[k - 1] = Some(0);
    let ms = MultiSum::new(
        vec![floor; k],
        ceils,
        move |i, n| {
            let w = 2 * (n * n + m * n);
            Ok(if i + 1 < k {
                Some(w)
            } else if n >= floor && n <= 0 {
                Some(w + 2 * c2(n))
            } else {
                None
            })
        },
        move |p| {
            let s: i64 = p.iter().sum();
            let sq: i64 = p.iter().map(|x| x * x).sum();
            let mut f = Factors::new().q_pow(sq + m * s);
            for i in 0..k - 1 {
                f = f.recip_poch(&q1(), 2, p[i] - p[i + 1]);
            }
            let nk = p[k - 1];
            qbinom_factors(f.sign(nk).q_pow(c2(nk)), m + nk, m + 2 * nk, 2)
        },
    )
    .chain();
    let r = ms.eval(order, opts)?;
    Ok((r.value, r.terms))
}

pub(super) fn kmrr(b: &Bindings, order: i64, opts: &SumOptions) -> Result<Built> {
    let (k, m) = (b.int("k")?, b.int("m")?);
    let (lhs, terms) = kmrr_lhs(k, m, order, opts)?;
    let rhs = jacobi_over_euler(2 * k + 1, [k * (m + 1), k * (1 - m) + 1]).eval(order)?;
    Ok(Built { lhs: series(lhs), rhs: series(rhs), terms, derived: vec![] })
}

/// KMRR compared against a right side with modulus `2k` in place of
/// `2k + 1`; a negative control that must fail.
pub fn corrupted_kmrr(k: i64, m: i64, order: i64) -> VerificationReport {
    let inst = super::IdentityInstance::new(
        "KMRR",
        &[("k", super::Value::Int(k)), ("m", super::Value::Int(m))],
        order,
    );
    let mut rep = VerificationReport::blank(&inst);
    let out = kmrr_lhs(k, m, order, &SumOptions::default()).and_then(|(lhs, terms)| {
        let rhs = jacobi_over_euler(2 * k, [k * (m + 1), k * (1 - m) + 1]).eval(order)?;
        Ok((lhs, rhs, terms))
    });
    match out {
        Ok((lhs, rhs, terms)) => {
            rep.terms_summed = terms;
            match lhs.first_mismatch(&rhs) {
                Some(e) => {
                    rep.status = Status::Fail;
                    rep.first_mismatch_texp = Some(e);
                    rep.lhs_coeff = Some(fmt_rational(&lhs.coeff(e)));
                    rep.rhs_coeff = Some(fmt_rational(&rhs.coeff(e)));
                }
                None => rep.status = Status::Pass,
            }
        }
        Err(e) => rep.error = Some(e.to_string()),
    }
    rep
}

pub(super) fn kmgg(b: &Bindings, order: i64, opts: &SumOptions) -> Result<Built> {
    let (k, m) = (b.int("k")?, b.int("m")?);
    let ku = k as usize;
    let floor = -(m / 2);
    let neg = Monomial::t(m + 1).neg();
    let mut ceils = vec![None; ku];
    ceils[ku - 1] = Some(0);
    let negw = neg.clone();
    let ms = MultiSum::new(
        vec![floor; ku],
        ceils,
        move |i, n| {
            let mut w = if i == 0 {
                let v = Factors::new().poch(&negw, 2, n).valuation()?.unwrap_or(0);
                n * n + m * n + v
            } else {
                2 * (n * n + m * n)
            };
            if i + 1 == ku {
                if n < floor || n > 0 {
                    return Ok(None);
                }
                w += 2 * c2(n);
            }
            Ok(Some(w))
        },
        move |p| {
            let mut f = Factors::new().t_pow(p[0] * p[0] + m * p[0]).poch(&neg, 2, p[0]);
            for i in 1..ku {
                f = f.q_pow(p[i] * p[i] + m * p[i]);
            }
            for i in 0..ku - 1 {
                f = f.recip_poch(&q1(), 2, p[i] - p[i + 1]);
            }
            let nk = p[ku - 1];
            qbinom_factors(f.sign(nk).q_pow(c2(nk)), m + nk, m + 2 * nk, 2)
        },
    )
    .chain();
    let r = ms.eval(order, opts)?;
    // (-q^((m+1)/2))_inf / (q)_inf (q^(2k), q^((k-1/2)(m+1)), q^(k(1-m)+(m+1)/2); q^(2k))_inf in t
    let base = 4 * k;
    let rhs = Factors::new()
        .poch_inf(&Monomial::t(m + 1).neg(), 2)
        .recip_poch_inf(&q1(), 2)
        .poch_inf(&Monomial::t(base), base)
        .poch_inf(&Monomial::t((2 * k - 1) * (m + 1)), base)
        .poch_inf(&Monomial::t(2 * k * (1 - m) + m + 1), base)
        .eval(order)?;
    Ok(Built { lhs: series(r.value), rhs: series(rhs), terms: r.terms, derived: vec![] })
}

fn poly(s: TSeries) -> super::Side {
    series(s)
}

pub(super) fn k1mrr(b: &Bindings, _order: i64, _: &SumOptions) -> Result<Built> {
    let m = b.int("m")?;
    let mut lhs = TSeries::zero(EXACT);
    for j in 0..=m / 2 {
        lhs = lhs.add(&qbinom(m - j, j, 2).mul_monomial(&sign_pow(j), 2 * c2(j)));
    }
    let rhs = if m % 3 == 2 {
        TSeries::zero(EXACT)
    } else {
        TSeries::q_monomial(sign_pow(m / 3), m * (m - 1) / 6)
    };
    Ok(Built { lhs: poly(lhs), rhs: poly(rhs), terms: (m / 2 + 1) as usize, derived: vec![] })
}

pub(super) fn k1mgg_even(b: &Bindings, _order: i64, _: &SumOptions) -> Result<Built> {
    let m = b.int("m")?;
    let mut lhs = TSeries::zero(EXACT);
    let negq = Monomial::q(1).neg();
    for j in 0..=m {
        let p = Factors::new().poch(&negq, 4, m - j).eval(EXACT)?;
        lhs = lhs.add(&qbinom(2 * m - j, j, 4).mul(&p).mul_monomial(&sign_pow(j), 4 * c2(j)));
    }
    let rhs = TSeries::q_monomial(sign_pow(m / 2), m * (3 * m - 1) / 2);
    Ok(Built { lhs: poly(lhs), rhs: poly(rhs), terms: (m + 1) as usize, derived: vec![] })
}

pub(super) fn k1mgg_odd(b: &Bindings, _order: i64, _: &SumOptions) -> Result<Built> {
    let m = b.int("m")?;
    let mut lhs = TSeries::zero(EXACT);
    let negq = Monomial::q(1).neg();
    for j in 0..=m {
        let p = Factors::new().poch(&negq, 2, m - j).eval(EXACT)?;
        lhs = lhs.add(&qbinom(2 * m + 1 - j, j, 2).mul(&p).mul_monomial(&sign_pow(j), 2 * c2(j)));
    }
    let rhs = if m % 2 == 1 {
        TSeries::zero(EXACT)
    } else {
        TSeries::q_monomial(sign_pow(m / 2), m * (3 * m + 2) / 4)
    };
    Ok(Built { lhs: poly(lhs), rhs: poly(rhs), terms: (m + 1) as usize, derived: vec![] })
}

/// `sum_{j, k} (-1)^j q^(c C(j,2) - l j) [m-j, j]_B X_k`, the shape shared by
/// the two m-versions with an outer finite sum.
fn outer_inner<'a>(
    m: i64,
    quad: i64,
    lin: i64,
    binom_base: i64,
    inner: impl Fn(i64, i64) -> Factors + Sync + 'a,
) -> MultiSum<'a> {
    MultiSum::new(
        vec![0, 0],
        vec![Some(m / 2), None],
        move |i, n| Ok(Some(if i == 0 { 2 * (quad * c2(n) - lin * n) } else { 2 * n * n })),
        move |p| {
            let (j, k) = (p[0], p[1]);
            let f = Factors::new().sign(j).q_pow(quad * c2(j) - lin * j).extend(&inner(j, k));
            qbinom_factors(f, m - j, j, binom_base)
        },
    )
}

pub(super) fn mrr(b: &Bindings, order: i64, opts: &SumOptions) -> Result<Built> {
    let m = b.int("m")?;
    let ms = outer_inner(m, 5, 2 * m - 3, 2, move |j, k| {
        Factors::new().q_pow(k * k + (m - 2 * j) * k).recip_poch(&q1(), 2, k)
    });
    let r = ms.eval(order, opts)?;
    let rhs = jacobi_over_euler(5, [2 * m + 2, 3 - 2 * m]).eval(order)?;
    Ok(Built { lhs: series(r.value), rhs: series(rhs), terms: r.terms, derived: vec![] })
}

pub(super) fn mgg(b: &Bindings, order: i64, opts: &SumOptions) -> Result<Built> {
    let m = b.int("m")?;
    let neg = Monomial::q(m + 1).neg();
    // the k = 2 case of KMGG with n_1 = k - j, n_2 = -j, then q -> q^2
    let ms = outer_inner(m, 8, 3 * m - 5, 4, move |j, k| {
        Factors::new()
            .q_pow(k * k + (m - 2 * j) * k)
            .poch(&Monomial::q(m + 1).neg(), 4, k - j)
            .recip_poch(&Monomial::q(2), 4, k)
    });
    let r = ms.eval(order, opts)?;
    let rhs = Factors::new()
        .poch_inf(&neg, 4)
        .recip_poch_inf(&Monomial::q(2), 4)
        .poch_inf(&Monomial::q(8), 16)
        .poch_inf(&Monomial::q(3 * m + 3), 16)
        .poch_inf(&Monomial::q(5 - 3 * m), 16)
        .eval(order)?;
    Ok(Built { lhs: series(r.value), rhs: series(rhs), terms: r.terms, derived: vec![] })
}

fn sum_products(range: std::ops::RangeInclusive<i64>, order: i64, f: impl Fn(i64) -> Factors) -> Result<TSeries> {
    let mut acc = TSeries::zero(order);
    for j in range {
        acc = acc.add(&f(j).eval(order)?);
    }
    Ok(acc)
}

pub(super) fn gis(b: &Bindings, order: i64, opts: &SumOptions) -> Result<Built> {
    let m = b.int("m")?;
    let r = unilateral(0, None, move |n| Factors::new().q_pow(n * n + n * m).recip_poch(&q1(), 2, n))
        .eval(order, opts)?;
    let rhs = sum_products(0..=m, order, |k| {
        qbinom_factors(Factors::new(), m, k, 2)
            .q_pow(2 * k * (k - m))
            .extend(&jacobi_over_euler(5, [3 + 4 * k - 2 * m, 2 - 4 * k + 2 * m]))
    })?;
    Ok(Built { lhs: series(r.value), rhs: series(rhs), terms: r.terms, derived: vec![] })
}

fn kmrr_inv_rhs(k: i64, m: i64, order: i64) -> Result<TSeries> {
    sum_products(0..=m, order, |j| {
        qbinom_factors(Factors::new(), m, j, 2)
            .q_pow(k * j * (j - m))
            .extend(&jacobi_over_euler(2 * k + 1, [k * (m - 2 * j + 1), k * (1 - m + 2 * j) + 1]))
    })
}

pub(super) fn kmrr_inv(b: &Bindings, order: i64, opts: &SumOptions) -> Result<Built> {
    let (k, m) = (b.int("k")?, b.int("m")?);
    let (lhs, terms) = if k == 1 {
        (TSeries::one(), 1)
    } else {
        let r = ag_multisum(vec![m; (k - 1) as usize], 1).eval(order, opts)?;
        (r.value, r.terms)
    };
    let rhs = kmrr_inv_rhs(k, m, order)?;
    Ok(Built { lhs: series(lhs), rhs: series(rhs), terms, derived: vec![] })
}

fn k2mrr_lhs(k: i64, m: i64, order: i64, opts: &SumOptions) -> Result<(TSeries, usize)> {
    let ku = k as usize;
    let mut ceils = vec![None; ku];
    ceils[ku - 1] = Some(m);
    let ms = MultiSum::new(
        vec![0; ku],
        ceils,
        move |i, n| {
            Ok(if i + 1 < ku {
                Some(2 * n * n)
            } else if n <= m {
                Some(2 * (n * n + c2(n) - m * n))
            } else {
                None
            })
        },
        move |p| {
            let sq: i64 = p.iter().map(|x| x * x).sum();
            let mut f = Factors::new().q_pow(sq);
            for i in 0..ku - 1 {
                f = f.recip_poch(&q1(), 2, p[i] - p[i + 1]);
            }
            let nk = p[ku - 1];
            qbinom_factors(f.sign(nk).q_pow(c2(nk) - m * nk), m + nk, 2 * nk, 2)
        },
    )
    .chain();
    let r = ms.eval(order, opts)?;
    Ok((r.value, r.terms))
}

pub(super) fn k2mrr(b: &Bindings, order: i64, opts: &SumOptions) -> Result<Built> {
    let (k, m) = (b.int("k")?, b.int("m")?);
    let (lhs, terms) = k2mrr_lhs(k, m, order, opts)?;
    let rhs = jacobi_over_euler(2 * k + 1, [k + m + 1, k - m]).eval(order)?;
    Ok(Built { lhs: series(lhs), rhs: series(rhs), terms, derived: vec![] })
}

pub(super) fn check_full_ag(b: &Bindings) -> Result<()> {
    if let (Some(k), Some(m)) = (b.opt_int("k")?, b.opt_int("m")?) {
        if m < 1 || m > k - 1 {
            return Err(Error::ConstraintViolation("m must lie in 1..=k-1".into()));
        }
    }
    Ok(())
}

pub(super) fn lhs_full_ag(b: &Bindings, order: i64, opts: &SumOptions) -> Result<Built> {
    let (k, m) = (b.int("k")?, b.int("m")?);
    let (lhs, t1) = k2mrr_lhs(k, m, order, opts)?;
    // linear term n_i for 1-based i >= k - m
    let lin = (1..k).map(|i| i64::from(i >= k - m)).collect();
    let r = ag_multisum(lin, 1).eval(order, opts)?;
    Ok(Built { lhs: series(lhs), rhs: series(r.value), terms: t1 + r.terms, derived: vec![] })
}

pub(super) fn kmrr_change(b: &Bindings, order: i64, opts: &SumOptions) -> Result<Built> {
    let (k, m) = (b.int("k")?, b.int("m")?);
    let rhs = jacobi_over_euler(2 * k, [(k - 1) * (m + 1), (k - 1) * (1 - m) + 2]).eval(order)?;
    if k == 1 {
        return Ok(Built { lhs: series(TSeries::zero(order)), rhs: series(rhs), terms: 0, derived: vec![] });
    }
    let ku = k as usize;
    let floor = -(m / 2);
    let mut ceils = vec![None; ku];
    ceils[ku - 1] = Some(0);
    let ms = MultiSum::new(
        vec![floor; ku],
        ceils,
        move |i, n| {
            Ok(if i + 2 < ku {
                Some(2 * (n * n + m * n))
            } else if i + 2 == ku {
                Some(2 * (n * n + m * n + n))
            } else if n >= floor && n <= 0 {
                Some(2 * (n * n - 2 * n))
            } else {
                None
            })
        },
        move |p| {
            let sq: i64 = p.iter().map(|x| x * x).sum();
            let s: i64 = p[..ku - 1].iter().sum();
            let nk = p[ku - 1];
            let nk1 = p[ku - 2];
            let mut f = Factors::new()
                .q_pow(sq + m * s + nk1 - 2 * nk)
                .poch(&Monomial::q(1).neg(), 2, 2 * nk + m);
            for i in 0..ku - 2 {
                f = f.recip_poch(&q1(), 2, p[i] - p[i + 1]);
            }
            f = f.recip_poch(&Monomial::q(2), 4, nk1 - nk).sign(nk);
            qbinom_factors(f, m + nk, m + 2 * nk, 4)
        },
    )
    .chain();
    let r = ms.eval(order, opts)?;
    Ok(Built { lhs: series(r.value), rhs: series(rhs), terms: r.terms, derived: vec![] })
}

pub(super) fn kmgg_inv(b: &Bindings, order: i64, opts: &SumOptions) -> Result<Built> {
    let (k, m) = (b.int("k")?, b.int("m")?);
    let rhs = sum_products(0..=m, order, |j| {
        let mut f = qbinom_factors(Factors::new(), m, j, 4)
            .q_pow((k - 1) * j * (j - m))
            .recip_poch(&Monomial::q(1).neg(), 2, m)
            .recip_poch_inf(&q1(), 2);
        for e in [2 * k, (k - 1) * (m - 2 * j + 1), (k - 1) * (1 - m + 2 * j) + 2] {
            f = f.poch_inf(&Monomial::q(e), 4 * k);
        }
        f
    })?;
    if k == 1 {
        return Ok(Built { lhs: series(TSeries::zero(order)), rhs: series(rhs), terms: 0, derived: vec![] });
    }
    let d = (k - 1) as usize;
    let ms = MultiSum::new(
        vec![0; d],
        vec![None; d],
        move |i, n| Ok(Some(2 * (n * n + m * n + if i + 1 == d { n } else { 0 }))),
        move |p| {
            let sq: i64 = p.iter().map(|x| x * x).sum();
            let s: i64 = p.iter().sum();
            let mut f = Factors::new().q_pow(sq + m * s + p[d - 1]);
            for i in 0..d - 1 {
                f = f.recip_poch(&q1(), 2, p[i] - p[i + 1]);
            }
            f.recip_poch(&Monomial::q(2), 4, p[d - 1])
        },
    )
    .chain();
    let r = ms.eval(order, opts)?;
    Ok(Built { lhs: series(r.value), rhs: series(rhs), terms: r.terms, derived: vec![] })
}

/// The sequences `a_m`, `b_m` from the inversion of KMRR at even shift,
/// related by the classical Bailey inversion with `a = q`.
pub fn kmrr_inversion_sequences(
    k: i64,
) -> (impl Fn(i64, i64) -> Result<TSeries> + Sync, impl Fn(i64, i64) -> Result<TSeries> + Sync) {
    let a_seq = move |m: i64, order: i64| {
        Factors::new()
            .q_pow(k * m * m - m)
            .binomial(&Monomial::q(2 * m + 1))
            .recip_binomial(&q1())
            .extend(&jacobi_over_euler(2 * k + 1, [k * (2 * m + 1), k * (1 - 2 * m) + 1]))
            .eval(order)
    };
    let b_seq = move |m: i64, order: i64| {
        let f = Factors::new().q_pow(k * m * m - m).recip_poch(&q1(), 2, 2 * m);
        times(
            &f,
            |cap| {
                if k == 1 {
                    Ok(TSeries::one())
                } else {
                    Ok(ag_multisum(vec![2 * m; (k - 1) as usize], 1).eval(cap, &SumOptions::default())?.value)
                }
            },
            order,
        )
    };
    (a_seq, b_seq)
}

#[cfg(test)]
mod tests {
    use super::super::{build_sides, verify, IdentityInstance, Side, Status, Value};
    use super::*;
    use crate::bailey::classical_inversion_check;

    fn inst(id: &str, ps: &[(&str, i64)], order: i64) -> IdentityInstance {
        let b: Vec<(&str, Value)> = ps.iter().map(|(n, v)| (*n, Value::Int(*v))).collect();
        IdentityInstance::new(id, &b, order)
    }

    fn pass(id: &str, ps: &[(&str, i64)], order: i64) {
        let r = verify(&inst(id, ps, order));
        assert_eq!(r.status, Status::Pass, "{}", r.summary_line());
    }

    #[test]
    fn kmrr_examples() {
        let b = build_sides(&inst("KMRR", &[("k", 1), ("m", 0)], 40), &SumOptions::default()).unwrap();
        assert_eq!(b.lhs, Side::Series(TSeries::one().truncate(40)));
        for (k, m) in [(1, 3), (2, 0), (2, 1), (2, 4), (3, 2)] {
            pass("KMRR", &[("k", k), ("m", m)], 60);
        }
        let bad = corrupted_kmrr(2, 1, 60);
        assert_eq!(bad.status, Status::Fail);
        assert!(bad.first_mismatch_texp.unwrap() < 20);
    }

    #[test]
    fn kmgg_examples() {
        for (k, m) in [(1, 0), (1, 3), (2, 0), (2, 2), (2, 5)] {
            pass("KMGG", &[("k", k), ("m", m)], 60);
        }
    }

    #[test]
    fn polynomial_rows() {
        let b = build_sides(&inst("K1MRR", &[("m", 3)], 40), &SumOptions::default()).unwrap();
        assert_eq!(b.lhs, Side::Series(TSeries::q_monomial(-crate::rational::rat(1), 1)));
        let b = build_sides(&inst("K1MGG_EVEN", &[("m", 1)], 40), &SumOptions::default()).unwrap();
        assert_eq!(b.rhs, Side::Series(TSeries::q_monomial(crate::rational::rat(1), 1)));
        for m in 0..12 {
            pass("K1MRR", &[("m", m)], 40);
            pass("K1MGG_EVEN", &[("m", m)], 40);
            pass("K1MGG_ODD", &[("m", m)], 40);
        }
    }

    #[test]
    fn m_versions() {
        for m in [0, 1, 3, 6] {
            pass("MRR", &[("m", m)], 60);
            pass("MGG", &[("m", m)], 60);
            pass("GIS", &[("m", m)], 60);
        }
    }

    #[test]
    fn inversions_and_changes() {
        for (k, m) in [(1, 2), (2, 0), (2, 3), (3, 1)] {
            pass("KMRR_INV", &[("k", k), ("m", m)], 60);
            pass("KMRR_CHANGE", &[("k", k), ("m", m)], 60);
            pass("KMGG_INV", &[("k", k), ("m", m)], 60);
        }
        for (k, m) in [(1, 0), (2, 3), (3, 5)] {
            pass("K2MRR", &[("k", k), ("m", m)], 60);
        }
        pass("LHS_FULL_AG", &[("k", 3), ("m", 2)], 60);
    }

    #[test]
    fn inversion_sequences() {
        let (a, b) = kmrr_inversion_sequences(2);
        let r = classical_inversion_check(1, &a, &b, 3, 40).unwrap();
        assert!(r.passed(), "{r:?}");
    }
}

//! WP-bilateral Bailey pairs and the two constructions of the WP-Bailey
//! lemma. The defining relation is
//!
//! ```text
//! beta_n(a, alpha) = sum_{r <= n} (alpha/a)_{n-r} (alpha)_{n+r} / ((q)_{n-r} (aq)_{n+r}) alpha_r
//! ```
//!
//! in base `q`. It becomes the classical relation at `alpha = 0`. The sum is
//! finite when `a = q^m` (the kernel vanishes for `n + r + m < 0`) or when
//! the `alpha` sequence has a known lower end.

use std::sync::Arc;

use crate::bailey::{compare_range, finite_sum, BaileyPair, RelationReport, Seq};
use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::product::{times, Factors};
use crate::qfunc::qbinom_factors;
use crate::series::{TSeries, EXACT};

const Q: i64 = 2;

#[derive(Clone, Debug)]
pub struct WpPair {
    pub a: Monomial,
    /// The second pair parameter (the WP `alpha`).
    pub param: Monomial,
    /// `Some(m)` when `a = q^m`.
    pub shift: Option<i64>,
    /// `alpha_r = 0` for all `r` below this index, when known.
    pub alpha_lo: Option<i64>,
    /// `beta_n = 0` for all `n` below this index.
    pub beta_lo: i64,
    alpha: Arc<Seq>,
    beta: Arc<Seq>,
}

impl WpPair {
    pub fn alpha(&self, n: i64, order: i64) -> Result<TSeries> {
        if self.alpha_lo.is_some_and(|lo| n < lo) {
            return Ok(TSeries::zero(order));
        }
        self.alpha.get(n, order)
    }

    pub fn beta(&self, n: i64, order: i64) -> Result<TSeries> {
        if n < self.beta_lo {
            return Ok(TSeries::zero(order));
        }
        self.beta.get(n, order)
    }

    /// Lowest `r` contributing to `beta_n` in the defining relation.
    pub fn relation_lo(&self, n: i64) -> Result<i64> {
        match (self.alpha_lo, self.shift) {
            (Some(lo), Some(m)) => Ok(lo.max(-m - n)),
            (Some(lo), None) => Ok(lo),
            (None, Some(m)) => Ok(-m - n),
            (None, None) => Err(Error::FormalDivergence("defining relation has no lower end".into())),
        }
    }

    /// A classical pair at `a = q^m`, read as a WP pair with parameter 0.
    pub fn from_classical(p: &BaileyPair) -> Result<WpPair> {
        if p.base_texp != Q {
            return Err(Error::DegenerateParameter("WP pairs are taken in base q".into()));
        }
        let (pa, pb) = (p.clone(), p.clone());
        Ok(WpPair {
            a: p.a(),
            param: Monomial::zero(),
            shift: Some(p.m),
            alpha_lo: None,
            beta_lo: p.beta_lo(),
            alpha: Arc::new(Seq::new(move |n, o| pa.alpha(n, o))),
            beta: Arc::new(Seq::new(move |n, o| pb.beta(n, o))),
        })
    }

    fn with_generators<A, B>(&self, param: Monomial, alpha: A, beta: B) -> WpPair
    where
        A: Fn(i64, i64) -> Result<TSeries> + Send + Sync + 'static,
        B: Fn(i64, i64) -> Result<TSeries> + Send + Sync + 'static,
    {
        WpPair {
            a: self.a.clone(),
            param,
            shift: self.shift,
            alpha_lo: self.alpha_lo,
            beta_lo: self.beta_lo,
            alpha: Arc::new(Seq::new(alpha)),
            beta: Arc::new(Seq::new(beta)),
        }
    }
}

type MakeFn = dyn Fn(&Monomial) -> Result<WpPair> + Send + Sync;

/// WP pairs related to a fixed `a`, indexed by the WP parameter.
#[derive(Clone)]
pub struct WpFamily {
    pub a: Monomial,
    make: Arc<MakeFn>,
}

impl WpFamily {
    pub fn new<F>(a: Monomial, make: F) -> Self
    where
        F: Fn(&Monomial) -> Result<WpPair> + Send + Sync + 'static,
    {
        WpFamily { a, make: Arc::new(make) }
    }

    pub fn at(&self, param: &Monomial) -> Result<WpPair> {
        (self.make)(param)
    }

    /// `wp_unit_pair(m, a, .)`.
    pub fn unit(m: i64, a: Monomial) -> Self {
        let a2 = a.clone();
        WpFamily::new(a, move |al| wp_unit_pair(m, a2.clone(), al.clone()))
    }

    /// `wp_shifted_pair(m, .)`, with the classical shifted pair at parameter 0.
    pub fn shifted(m: i64) -> Self {
        WpFamily::new(Monomial::q(m), move |al| {
            if al.is_zero() {
                WpPair::from_classical(&crate::bailey::shifted_pair(m)?)
            } else {
                wp_shifted_pair(m, al.clone())
            }
        })
    }

    /// The family `alpha -> wp_lemma_first(self, alpha, rho1, rho2)`.
    pub fn lemma_first(&self, rho1: Monomial, rho2: Monomial) -> Self {
        let inner = self.clone();
        WpFamily::new(self.a.clone(), move |al| wp_lemma_first(&inner, al.clone(), rho1.clone(), rho2.clone()))
    }
}

fn nonzero(x: &Monomial, what: &str) -> Result<()> {
    if x.is_zero() {
        Err(Error::DegenerateParameter(format!("{what} = 0")))
    } else {
        Ok(())
    }
}

/// The unit WP pair shifted by `m`: `beta_n = delta_{n+m,0}` and
///
/// ```text
/// alpha_n = (1 - aq^2n)/(1 - a) (a)_{n-m}/(q)_{n+m} (a/alpha)_{n+m}/(alpha q)_{n-m}
///           (1 - alpha q^-2m)/(1 - alpha) (alpha/a)^(n+m)
/// ```
pub fn wp_unit_pair(m: i64, a: Monomial, alpha: Monomial) -> Result<WpPair> {
    if m < 0 {
        return Err(Error::UnsupportedShift(m));
    }
    nonzero(&a, "a")?;
    nonzero(&alpha, "alpha")?;
    let (a2, al2) = (a.clone(), alpha.clone());
    let alpha_gen = move |n: i64, order: i64| {
        Factors::new()
            .well_poised(&a2, Q, n)
            .poch(&a2, Q, n - m)
            .recip_poch(&Monomial::q(1), Q, n + m)
            .poch(&a2.div(&al2), Q, n + m)
            .recip_poch(&al2.shift_q(1), Q, n - m)
            .binomial(&al2.shift_q(-2 * m))
            .recip_binomial(&al2)
            .mono(&al2.div(&a2).pow(n + m))
            .eval(order)
    };
    let beta_gen = move |n: i64, _order: i64| {
        Ok(if n + m == 0 { TSeries::one() } else { TSeries::zero(EXACT) })
    };
    Ok(WpPair {
        a,
        param: alpha,
        shift: None,
        alpha_lo: Some(-m),
        beta_lo: -m,
        alpha: Arc::new(Seq::new(alpha_gen)),
        beta: Arc::new(Seq::new(beta_gen)),
    })
}

/// The WP-shifted pair at `a = q^m`:
///
/// ```text
/// alpha_n = (q^m/alpha)_n / (alpha q^-m)_n (alpha q^-m)^n
/// beta_n  = (q)_m (q/alpha)_{m-n} (alpha^2 q^-2m)_{m+2n}
///           / ((q/alpha, alpha q^-m)_m (alpha q^(1-m))_{m+n}) [m+n, m+2n] (q^m/alpha)^n
/// ```
pub fn wp_shifted_pair(m: i64, alpha: Monomial) -> Result<WpPair> {
    if m < 0 {
        return Err(Error::UnsupportedShift(m));
    }
    nonzero(&alpha, "alpha")?;
    let a = Monomial::q(m);
    let al_qm = alpha.shift_q(-m);
    let qm_al = a.div(&alpha);
    let q_al = Monomial::q(1).div(&alpha);
    let (x, y) = (qm_al.clone(), al_qm.clone());
    let alpha_gen = move |n: i64, order: i64| {
        Factors::new().poch(&x, Q, n).recip_poch(&y, Q, n).mono(&y.pow(n)).eval(order)
    };
    let al = alpha.clone();
    let beta_gen = move |n: i64, order: i64| {
        if 2 * n + m < 0 {
            return Ok(TSeries::zero(EXACT));
        }
        let f = Factors::new()
            .poch(&Monomial::q(1), Q, m)
            .poch(&q_al, Q, m - n)
            .poch(&al.pow(2).shift_q(-2 * m), Q, m + 2 * n)
            .recip_poch(&q_al, Q, m)
            .recip_poch(&al_qm, Q, m)
            .recip_poch(&al.shift_q(1 - m), Q, m + n)
            .mono(&qm_al.pow(n));
        qbinom_factors(f, m + n, m + 2 * n, Q).eval(order)
    };
    let beta_lo = -(m / 2);
    Ok(WpPair {
        a,
        param: alpha,
        shift: Some(m),
        alpha_lo: None,
        beta_lo,
        alpha: Arc::new(Seq::new(alpha_gen)),
        beta: Arc::new(Seq::new(beta_gen)),
    })
}

fn relation_rhs(p: &WpPair, n: i64, order: i64) -> Result<TSeries> {
    let aq = p.a.shift_q(1);
    let al_a = p.param.div(&p.a);
    finite_sum(p.relation_lo(n)?, n, order, |r| {
        let f = Factors::new()
            .poch(&al_a, Q, n - r)
            .poch(&p.param, Q, n + r)
            .recip_poch(&Monomial::q(1), Q, n - r)
            .recip_poch(&aq, Q, n + r);
        times(&f, |c| p.alpha(r, c), order)
    })
}

/// Recomputes the defining relation for `n_lo..=n_hi` and compares with
/// `p.beta(n)`.
pub fn check_wp_pair(p: &WpPair, n_lo: i64, n_hi: i64, order: i64) -> Result<RelationReport> {
    compare_range(n_lo, n_hi, order, |n| Ok((p.beta(n, order)?, relation_rhs(p, n, order)?)))
}

/// Recovers `alpha` from `beta` by the inverse relation
///
/// ```text
/// alpha_n = (1 - aq^2n)/(1 - a) sum_{r <= n} (a)_{n+r}/(q)_{n-r} (a/alpha)_{n-r}/(alpha q)_{n+r}
///           (1 - alpha q^2r)/(1 - alpha) (alpha/a)^(n-r) beta_r
/// ```
///
/// and compares with `p.alpha(n)`. At `a = q^m` the kernel is symmetric
/// under `r -> -m-r`, so `beta` only determines `alpha_r + alpha_{-m-r}`
/// (or `alpha_r` alone at `2r = -m`). The inverse sum returns that folded
/// sequence, supported on `2n + m >= 0`, and the report starts at `beta_lo`.
pub fn wp_inversion_check(p: &WpPair, n_lo: i64, n_hi: i64, order: i64) -> Result<RelationReport> {
    nonzero(&p.param, "alpha")?;
    let n_lo = if p.shift.is_some() { n_lo.max(p.beta_lo) } else { n_lo };
    let a_al = p.a.div(&p.param);
    let al_a = p.param.div(&p.a);
    let alq = p.param.shift_q(1);
    compare_range(n_lo, n_hi, order, |n| {
        let got = finite_sum(p.beta_lo, n, order, |r| {
            let f = Factors::new()
                .well_poised(&p.a, Q, n)
                .poch(&p.a, Q, n + r)
                .recip_poch(&Monomial::q(1), Q, n - r)
                .poch(&a_al, Q, n - r)
                .recip_poch(&alq, Q, n + r)
                .well_poised(&p.param, Q, r)
                .mono(&al_a.pow(n - r));
            times(&f, |c| p.beta(r, c), order)
        })?;
        let want = match p.shift {
            Some(m) if 2 * n + m > 0 => p.alpha(n, order)?.add(&p.alpha(-m - n, order)?),
            _ => p.alpha(n, order)?,
        };
        Ok((want, got))
    })
}

/// First construction of the WP-Bailey lemma: the family is evaluated at
/// `c = alpha rho1 rho2 / aq` and the result is related to `a` and `alpha`.
/// At `alpha = 0` this is the bilateral Bailey lemma.
pub fn wp_lemma_first(family: &WpFamily, alpha: Monomial, rho1: Monomial, rho2: Monomial) -> Result<WpPair> {
    nonzero(&rho1, "rho1")?;
    nonzero(&rho2, "rho2")?;
    let a = family.a.clone();
    let aq = a.shift_q(1);
    let r = aq.div(&rho1.mul(&rho2));
    let c = alpha.mul(&rho1).mul(&rho2).div(&aq);
    let inner = family.at(&c)?;
    let (aq_r1, aq_r2) = (aq.div(&rho1), aq.div(&rho2));
    let (ar1, ar2) = (alpha.mul(&rho1).div(&a), alpha.mul(&rho2).div(&a));

    let (i1, r1, r2, d1, d2, rr) = (inner.clone(), rho1.clone(), rho2.clone(), aq_r1.clone(), aq_r2.clone(), r.clone());
    let alpha_gen = move |n: i64, order: i64| {
        let f = Factors::new()
            .poch(&r1, Q, n)
            .poch(&r2, Q, n)
            .recip_poch(&d1, Q, n)
            .recip_poch(&d2, Q, n)
            .mono(&rr.pow(n));
        times(&f, |cap| i1.alpha(n, cap), order)
    };

    let al = alpha.clone();
    let i2 = inner.clone();
    let beta_gen = move |n: i64, order: i64| {
        let outer = Factors::new()
            .poch(&ar1, Q, n)
            .poch(&ar2, Q, n)
            .recip_poch(&aq_r1, Q, n)
            .recip_poch(&aq_r2, Q, n);
        let Some(v) = outer.valuation()? else {
            return Ok(TSeries::zero(order));
        };
        let cap = order - v;
        let sum = finite_sum(i2.beta_lo, n, cap, |j| {
            let f = Factors::new()
                .poch(&rho1, Q, j)
                .poch(&rho2, Q, j)
                .recip_poch(&ar1, Q, j)
                .recip_poch(&ar2, Q, j)
                .well_poised(&c, Q, j)
                .poch(&r, Q, n - j)
                .poch(&al, Q, n + j)
                .recip_poch(&Monomial::q(1), Q, n - j)
                .recip_poch(&c.shift_q(1), Q, n + j)
                .mono(&r.pow(j));
            times(&f, |k| i2.beta(j, k), cap)
        })?;
        times(&outer, |_| Ok(sum), order)
    };
    Ok(inner.with_generators(alpha, alpha_gen, beta_gen))
}

/// Second construction of the WP-Bailey lemma: the family is evaluated at
/// `qa^2/alpha` and `s = alpha^2/(qa^2)` must have positive valuation.
pub fn wp_lemma_second(family: &WpFamily, alpha: Monomial) -> Result<WpPair> {
    nonzero(&alpha, "alpha")?;
    let a = family.a.clone();
    let c2 = a.pow(2).shift_q(1).div(&alpha);
    let s = alpha.div(&c2);
    if s.texp <= 0 {
        return Err(Error::FormalDivergence(format!("alpha^2/(qa^2) = {s} has no positive valuation")));
    }
    let inner = family.at(&c2)?;

    let (i1, s1, al) = (inner.clone(), s.clone(), alpha.clone());
    let alpha_gen = move |n: i64, order: i64| {
        let f = Factors::new().poch(&c2, Q, 2 * n).recip_poch(&al, Q, 2 * n).mono(&s1.pow(n));
        times(&f, |cap| i1.alpha(n, cap), order)
    };
    let i2 = inner.clone();
    let beta_gen = move |n: i64, order: i64| {
        finite_sum(i2.beta_lo, n, order, |j| {
            let f = Factors::new().poch(&s, Q, n - j).recip_poch(&Monomial::q(1), Q, n - j).mono(&s.pow(j));
            times(&f, |k| i2.beta(j, k), order)
        })
    };
    Ok(inner.with_generators(alpha, alpha_gen, beta_gen))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bailey::{apply_lemma, shifted_pair};
    use crate::rational::rat;

    fn cq(c: i64, e: i64) -> Monomial {
        Monomial::cq(rat(c), e)
    }

    #[test]
    fn unit_pair_relation_and_inversion() {
        let p = wp_unit_pair(0, cq(5, 1), cq(2, 1)).unwrap();
        assert_eq!(p.beta(0, 20).unwrap(), TSeries::one().truncate(20));
        assert!(p.beta(1, 20).unwrap().is_zero());
        assert!(check_wp_pair(&p, -3, 4, 30).unwrap().passed());
        let p2 = wp_unit_pair(2, Monomial::new(rat(7), 1), cq(3, 2)).unwrap();
        assert!(check_wp_pair(&p2, -4, 4, 30).unwrap().passed());
        let p3 = wp_unit_pair(1, cq(5, 1), cq(2, 3)).unwrap();
        assert!(wp_inversion_check(&p3, -3, 3, 30).unwrap().passed());
        assert!(matches!(wp_unit_pair(1, cq(5, 1), Monomial::zero()), Err(Error::DegenerateParameter(_))));
    }

    #[test]
    fn shifted_pair_relation_and_inversion() {
        let p = wp_shifted_pair(3, cq(2, 5)).unwrap();
        assert!(check_wp_pair(&p, -4, 4, 30).unwrap().passed());
        let p2 = wp_shifted_pair(2, cq(3, 4)).unwrap();
        let r = wp_inversion_check(&p2, -3, 3, 30).unwrap();
        assert!(r.passed());
        assert_eq!(r.n_lo, -1);
        for m in 0..4 {
            let p = wp_shifted_pair(m, Monomial::new(rat(3), 5)).unwrap();
            assert!(check_wp_pair(&p, -m - 2, m + 4, 30).unwrap().passed(), "m = {m}");
        }
        let p0 = wp_shifted_pair(0, cq(2, 3)).unwrap();
        assert!(p0.beta(-1, 20).unwrap().is_zero());
    }

    #[test]
    fn high_valuation_parameter_gives_shifted_pair() {
        let w = wp_shifted_pair(2, Monomial::q(50)).unwrap();
        let s = shifted_pair(2).unwrap();
        for n in -1..3 {
            assert_eq!(w.beta(n, 40).unwrap(), s.beta(n, 40).unwrap(), "n = {n}");
            assert_eq!(w.alpha(n, 40).unwrap(), s.alpha(n, 40).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn corrupted_beta_fails() {
        let p = wp_shifted_pair(1, cq(2, 3)).unwrap();
        let (inner, orig) = (p.clone(), p.clone());
        let bad = orig.with_generators(
            orig.param.clone(),
            move |n, o| inner.alpha(n, o),
            move |n, o| {
                let b = p.beta(n, o)?;
                Ok(if n == 2 { b.add(&TSeries::monomial(rat(1), 6)) } else { b })
            },
        );
        assert_eq!(check_wp_pair(&bad, -2, 4, 30).unwrap().mismatch, Some((2, 6)));
    }

    #[test]
    fn zero_parameter_reduces_to_bailey_lemma() {
        for m in 0..3 {
            let (r1, r2) = (cq(2, 1), Monomial::new(rat(3), 3));
            let w = wp_lemma_first(&WpFamily::shifted(m), Monomial::zero(), r1.clone(), r2.clone()).unwrap();
            let b = apply_lemma(&shifted_pair(m).unwrap(), r1.into(), r2.into()).unwrap();
            for n in -2..4 {
                assert_eq!(w.alpha(n, 30).unwrap(), b.alpha(n, 30).unwrap());
                assert_eq!(w.beta(n, 30).unwrap(), b.beta(n, 30).unwrap());
            }
        }
    }

    #[test]
    fn first_construction_preserves_relation() {
        let fam = WpFamily::shifted(2);
        let p = wp_lemma_first(&fam, cq(3, 2), cq(2, 1), Monomial::new(rat(5), 3)).unwrap();
        assert!(check_wp_pair(&p, -3, 3, 30).unwrap().passed());
        let unit = WpFamily::unit(1, cq(5, 1));
        let twice = unit.lemma_first(cq(2, 1), cq(3, 1));
        let p = wp_lemma_first(&twice, cq(7, 2), cq(4, 2), Monomial::new(rat(3), 3)).unwrap();
        assert!(check_wp_pair(&p, -3, 3, 30).unwrap().passed());
    }

    #[test]
    fn second_construction_preserves_relation() {
        for m in 0..3 {
            let fam = WpFamily::shifted(m);
            // alpha^2/(q^(1+2m)) needs positive valuation
            let al = Monomial::new(rat(2), 2 * m + 3);
            let p = wp_lemma_second(&fam, al).unwrap();
            assert!(check_wp_pair(&p, -3, 3, 30).unwrap().passed(), "m = {m}");
        }
        let after_first = WpFamily::shifted(1).lemma_first(cq(2, 1), cq(3, 1));
        let p = wp_lemma_second(&after_first, Monomial::new(rat(5), 5)).unwrap();
        assert!(check_wp_pair(&p, -2, 3, 30).unwrap().passed());
        let bad = wp_lemma_second(&WpFamily::shifted(1), Monomial::q(1));
        assert!(matches!(bad, Err(Error::FormalDivergence(_))));
    }
}

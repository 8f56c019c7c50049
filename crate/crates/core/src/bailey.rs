//! Bilateral Bailey pairs at `a = B^m`, the Bailey lemma and its
//! specializations, change of base, and the classical Bailey inversion.
//!
//! A pair is a couple of memoized generators `n, order -> TSeries`. The
//! defining relation is
//!
//! ```text
//! beta_n = sum_{r <= n} alpha_r / ((B;B)_{n-r} (aB;B)_{n+r})
//! ```
//!
//! and with `a = B^m` the factor `1/(aB;B)_{n+r}` vanishes for
//! `n + r + m < 0`, so the sum runs over `r` in `[-m-n, n]`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::monomial::{Monomial, Param};
use crate::par;
use crate::product::{times, Factors};
use crate::qfunc::qbinom_factors;
use crate::rational::rat;
use crate::series::TSeries;

type GenFn = dyn Fn(i64, i64) -> Result<TSeries> + Send + Sync;

/// A sequence `n -> TSeries` backed by a generator and a cache holding the
/// most precise value produced so far for each index.
pub struct Seq {
    gen: Box<GenFn>,
    memo: Mutex<HashMap<i64, TSeries>>,
}

impl Seq {
    pub fn new<F>(f: F) -> Self
    where
        F: Fn(i64, i64) -> Result<TSeries> + Send + Sync + 'static,
    {
        Seq { gen: Box::new(f), memo: Mutex::new(HashMap::new()) }
    }

    /// Value at `n`, exact up to and including `order`.
    pub fn get(&self, n: i64, order: i64) -> Result<TSeries> {
        if let Some(s) = self.memo.lock().unwrap().get(&n) {
            if s.order() >= order {
                return Ok(s.truncate(order));
            }
        }
        let s = (self.gen)(n, order)?;
        if s.order() < order {
            return Err(Error::PrecisionLoss(order));
        }
        let mut memo = self.memo.lock().unwrap();
        let keep = memo.get(&n).is_none_or(|old| old.order() < s.order());
        if keep {
            memo.insert(n, s.clone());
        }
        Ok(s.truncate(order))
    }
}

impl fmt::Debug for Seq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Seq({} cached)", self.memo.lock().unwrap().len())
    }
}

/// Sum of `term(lo..=hi)`, each term exact to `cap`.
pub(crate) fn finite_sum<F>(lo: i64, hi: i64, cap: i64, term: F) -> Result<TSeries>
where
    F: Fn(i64) -> Result<TSeries>,
{
    let mut acc = TSeries::zero(crate::series::EXACT);
    for r in lo..=hi {
        acc = acc.add(&term(r)?.truncate(cap));
    }
    Ok(acc.truncate(cap))
}

fn binom2(n: i64) -> i64 {
    n * (n - 1) / 2
}

#[derive(Clone, Debug)]
pub struct BaileyPair {
    /// `a = B^m`.
    pub m: i64,
    /// `B = t^base_texp`.
    pub base_texp: i64,
    alpha: Arc<Seq>,
    beta: Arc<Seq>,
}

impl BaileyPair {
    pub fn from_generators<A, Bt>(m: i64, base_texp: i64, alpha: A, beta: Bt) -> Self
    where
        A: Fn(i64, i64) -> Result<TSeries> + Send + Sync + 'static,
        Bt: Fn(i64, i64) -> Result<TSeries> + Send + Sync + 'static,
    {
        assert!(m >= 0 && base_texp >= 1);
        BaileyPair { m, base_texp, alpha: Arc::new(Seq::new(alpha)), beta: Arc::new(Seq::new(beta)) }
    }

    pub fn alpha(&self, n: i64, order: i64) -> Result<TSeries> {
        self.alpha.get(n, order)
    }

    pub fn beta(&self, n: i64, order: i64) -> Result<TSeries> {
        if self.beta_vanishes(n) {
            return Ok(TSeries::zero(order));
        }
        self.beta.get(n, order)
    }

    /// True when `beta_n` is zero by the support law `2n + m < 0`.
    pub fn beta_vanishes(&self, n: i64) -> bool {
        2 * n + self.m < 0
    }

    /// Smallest index with a possibly nonzero `beta`.
    pub fn beta_lo(&self) -> i64 {
        (-self.m).div_euclid(2) + i64::from((-self.m).rem_euclid(2) != 0)
    }

    /// `a` as a monomial in `t`.
    pub fn a(&self) -> Monomial {
        Monomial::t(self.m * self.base_texp)
    }

    fn a_b(&self) -> Monomial {
        Monomial::t((self.m + 1) * self.base_texp)
    }

    /// The same pair with `q` replaced by `q^k`.
    pub fn scale_base(&self, k: i64) -> BaileyPair {
        assert!(k >= 1);
        let (a, b) = (self.alpha.clone(), self.beta.clone());
        let inner = move |seq: Arc<Seq>| {
            move |n: i64, order: i64| -> Result<TSeries> {
                let o = if order >= crate::series::EXACT { order } else { order.div_euclid(k) + 1 };
                Ok(seq.get(n, o)?.scale_base(k, order))
            }
        };
        let m = self.m;
        let beta = move |n: i64, order: i64| {
            if 2 * n + m < 0 {
                Ok(TSeries::zero(order))
            } else {
                inner(b.clone())(n, order)
            }
        };
        BaileyPair::from_generators(self.m, self.base_texp * k, inner(a), beta)
    }
}

/// Outcome of a defining-relation check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationReport {
    pub n_lo: i64,
    pub n_hi: i64,
    pub order: i64,
    /// First failing index and the first t-exponent where the sides differ.
    pub mismatch: Option<(i64, i64)>,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.mismatch.is_none()
    }
}

pub(crate) fn compare_range<F>(n_lo: i64, n_hi: i64, order: i64, pair_at: F) -> Result<RelationReport>
where
    F: Fn(i64) -> Result<(TSeries, TSeries)> + Sync,
{
    let ns: Vec<i64> = (n_lo..=n_hi).collect();
    let results = par::map(&ns, |&n| pair_at(n));
    let mut mismatch = None;
    for (n, res) in ns.iter().zip(results) {
        let (want, got) = res?;
        if let Some(e) = want.truncate(order).first_mismatch(&got.truncate(order)) {
            mismatch = Some((*n, e));
            break;
        }
    }
    Ok(RelationReport { n_lo, n_hi, order, mismatch })
}

/// Recomputes the right side of the defining relation for each `n` in
/// `n_lo..=n_hi` and compares it with `p.beta(n)`.
pub fn check_pair(p: &BaileyPair, n_lo: i64, n_hi: i64, order: i64) -> Result<RelationReport> {
    compare_range(n_lo, n_hi, order, |n| Ok((p.beta(n, order)?, relation_rhs(p, n, order)?)))
}

fn relation_rhs(p: &BaileyPair, n: i64, order: i64) -> Result<TSeries> {
    let (b, ab) = (p.base_texp, p.a_b());
    let bq = Monomial::t(b);
    finite_sum(-p.m - n, n, order, |r| {
        let f = Factors::new().recip_poch(&bq, b, n - r).recip_poch(&ab, b, n + r);
        times(&f, |c| p.alpha(r, c), order)
    })
}

/// `beta_n` from the defining relation with an explicitly given `alpha`.
pub fn beta_from_alpha<F>(m: i64, base_texp: i64, n: i64, order: i64, alpha: F) -> Result<TSeries>
where
    F: Fn(i64, i64) -> Result<TSeries>,
{
    let bq = Monomial::t(base_texp);
    let ab = Monomial::t((m + 1) * base_texp);
    finite_sum(-m - n, n, order, |r| {
        let f = Factors::new().recip_poch(&bq, base_texp, n - r).recip_poch(&ab, base_texp, n + r);
        times(&f, |c| alpha(r, c), order)
    })
}

/// The shifted pair in base `t^base_texp`:
/// `alpha_n = (-1)^n B^C(n,2)`, `beta_n = (B;B)_m (-1)^n B^C(n,2) [m+n, m+2n]_B`.
pub fn shifted_pair_in_base(m: i64, base_texp: i64) -> Result<BaileyPair> {
    if m < 0 {
        return Err(Error::UnsupportedShift(m));
    }
    let b = base_texp;
    let alpha = move |n: i64, _order: i64| Factors::new().sign(n).t_pow(b * binom2(n)).eval(crate::series::EXACT);
    let beta = move |n: i64, _order: i64| {
        if 2 * n + m < 0 {
            return Ok(TSeries::zero(crate::series::EXACT));
        }
        let f = Factors::new().poch(&Monomial::t(b), b, m).sign(n).t_pow(b * binom2(n));
        qbinom_factors(f, m + n, m + 2 * n, b).eval(crate::series::EXACT)
    };
    Ok(BaileyPair::from_generators(m, base_texp, alpha, beta))
}

/// The shifted pair related to `a = q^m`.
pub fn shifted_pair(m: i64) -> Result<BaileyPair> {
    shifted_pair_in_base(m, 2)
}

/// The unit pair `beta_n = delta_{n,0}` at `a = 1` and `a = q`, taken as the
/// shifted pairs with `m = 0, 1`.
pub fn unit_pair(m: i64) -> Result<BaileyPair> {
    match m {
        0 | 1 => shifted_pair(m),
        _ => Err(Error::UnsupportedShift(m)),
    }
}

/// `(rho)_n rho^-n`, or its limit `(-1)^n B^C(n,2)` as `rho -> inf`.
fn rho_part(f: Factors, rho: &Param, b: i64, n: i64) -> Factors {
    match rho {
        Param::Finite(r) => f.poch(r, b, n).mono(&r.pow(-n)),
        Param::Infinity => f.sign(n).t_pow(b * binom2(n)),
    }
}

/// `1 / (aB/rho)_n`, which tends to 1 as `rho -> inf`.
fn rho_den(f: Factors, ab: &Monomial, rho: &Param, b: i64, n: i64) -> Factors {
    match rho {
        Param::Finite(r) => f.recip_poch(&ab.div(r), b, n),
        Param::Infinity => f,
    }
}

fn check_rho(rho: &Param) -> Result<()> {
    match rho {
        Param::Finite(r) if r.is_zero() => Err(Error::DegenerateParameter("rho = 0".into())),
        _ => Ok(()),
    }
}

/// The bilateral Bailey lemma with parameters `rho1`, `rho2`, either of
/// which may be infinite.
pub fn apply_lemma(p: &BaileyPair, rho1: Param, rho2: Param) -> Result<BaileyPair> {
    check_rho(&rho1)?;
    check_rho(&rho2)?;
    let b = p.base_texp;
    let ab = p.a_b();
    let e_arg = match (&rho1, &rho2) {
        (Param::Finite(x), Param::Finite(y)) => Some(ab.div(&x.mul(y))),
        _ => None,
    };
    let prefix = {
        let (rho1, rho2, ab) = (rho1.clone(), rho2.clone(), ab.clone());
        move |j: i64| {
            let f = rho_part(Factors::new(), &rho1, b, j);
            rho_part(f, &rho2, b, j).mono(&ab.pow(j))
        }
    };
    let dens = {
        let (rho1, rho2, ab) = (rho1.clone(), rho2.clone(), ab.clone());
        move |f: Factors, n: i64| rho_den(rho_den(f, &ab, &rho1, b, n), &ab, &rho2, b, n)
    };

    let inner = p.clone();
    let (pre_a, den_a) = (prefix.clone(), dens.clone());
    let alpha = move |n: i64, order: i64| {
        let f = den_a(pre_a(n), n);
        times(&f, |c| inner.alpha(n, c), order)
    };

    let inner = p.clone();
    let beta = move |n: i64, order: i64| {
        let outer = dens(Factors::new(), n);
        let Some(v) = outer.valuation()? else {
            return Ok(TSeries::zero(order));
        };
        let cap = order - v;
        let sum = finite_sum(inner.beta_lo(), n, cap, |j| {
            let mut f = prefix(j).recip_poch(&Monomial::t(b), b, n - j);
            if let Some(e) = &e_arg {
                f = f.poch(e, b, n - j);
            }
            times(&f, |c| inner.beta(j, c), cap)
        })?;
        times(&outer, |_| Ok(sum), order)
    };
    Ok(BaileyPair::from_generators(p.m, b, alpha, beta))
}

/// `rho1, rho2 -> inf`: `alpha'_n = B^(n^2) a^n alpha_n`.
pub fn apply_s1(p: &BaileyPair) -> Result<BaileyPair> {
    apply_lemma(p, Param::Infinity, Param::Infinity)
}

/// `rho1 = -sqrt(aB)`, `rho2 -> inf`: `alpha'_n = B^(n^2/2) a^(n/2) alpha_n`.
pub fn apply_s2(p: &BaileyPair) -> Result<BaileyPair> {
    let e = p.base_texp * (p.m + 1);
    if e % 2 != 0 {
        return Err(Error::DegenerateParameter(format!("sqrt(aq) = t^({e}/2) is off the t-grid")));
    }
    apply_lemma(p, Param::Finite(Monomial::new(rat(-1), e / 2)), Param::Infinity)
}

/// Change of base: a pair related to `(a^2, B^2)` becomes one related to
/// `(a, B)`. The input base exponent must be even.
pub fn change_base(p: &BaileyPair, b: Param) -> Result<BaileyPair> {
    if p.base_texp % 2 != 0 {
        return Err(Error::DegenerateParameter(format!(
            "input base t^{} is not a square on the t-grid",
            p.base_texp
        )));
    }
    check_rho(&b)?;
    let base = p.base_texp / 2;
    let ab = Monomial::t((p.m + 1) * base);
    let neg_ab = ab.neg();
    let inner = p.clone();
    let out_m = p.m;
    match b {
        Param::Infinity => {
            let a_in = inner.clone();
            let alpha = move |n: i64, order: i64| a_in.alpha(n, order);
            let beta = move |n: i64, order: i64| {
                finite_sum(inner.beta_lo(), n, order, |j| {
                    let f = Factors::new()
                        .poch(&neg_ab, base, 2 * j)
                        .recip_poch(&Monomial::t(2 * base), 2 * base, n - j)
                        .t_pow(base * (n - j));
                    times(&f, |c| inner.beta(j, c), order)
                })
            };
            Ok(BaileyPair::from_generators(out_m, base, alpha, beta))
        }
        Param::Finite(bm) => {
            let neg_ab_over_b = neg_ab.div(&bm);
            let (bm_a, nab_a, a_in) = (bm.clone(), neg_ab_over_b.clone(), inner.clone());
            let alpha = move |n: i64, order: i64| {
                let f = Factors::new()
                    .poch(&bm_a.neg(), base, n)
                    .recip_poch(&nab_a, base, n)
                    .mono(&bm_a.pow(-n))
                    .t_pow(-base * binom2(n));
                times(&f, |c| a_in.alpha(n, c), order)
            };
            let beta = move |n: i64, order: i64| {
                let outer = Factors::new().recip_poch(&bm, base, n).recip_poch(&neg_ab_over_b, base, n);
                let Some(v) = outer.valuation()? else {
                    return Ok(TSeries::zero(order));
                };
                let cap = order - v;
                let sum = finite_sum(inner.beta_lo(), n, cap, |k| {
                    let f = Factors::new()
                        .poch(&neg_ab, base, 2 * k)
                        .poch(&bm.pow(2), 2 * base, k)
                        .poch(&bm.recip().shift_t(-base * k), base, n - k)
                        .poch(&bm.shift_t(base * (k + 1)), base, n - k)
                        .recip_poch(&Monomial::t(2 * base), 2 * base, n - k)
                        .mono(&bm.pow(-k))
                        .t_pow(-base * binom2(k));
                    times(&f, |c| inner.beta(k, c), cap)
                })?;
                times(&outer, |_| Ok(sum), order)
            };
            Ok(BaileyPair::from_generators(out_m, base, alpha, beta))
        }
    }
}

/// Classical Bailey inversion at `a = q^shift`, checked both ways for
/// `0 <= j <= m_max`:
///
/// ```text
/// b_m = sum_{j=0}^m a_j / ((q)_{m-j} (aq)_{m+j})
/// a_m = (1 - a q^2m)/(1 - a) sum_{j=0}^m (a)_{m+j} (-1)^(m-j) q^C(m-j,2) / (q)_{m-j} b_j
/// ```
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InversionReport {
    pub order: i64,
    /// First index where `b` disagrees with the sum built from `a`.
    pub backward_mismatch: Option<(i64, i64)>,
    /// First index where `a` disagrees with the sum built from `b`.
    pub forward_mismatch: Option<(i64, i64)>,
}

impl InversionReport {
    pub fn passed(&self) -> bool {
        self.backward_mismatch.is_none() && self.forward_mismatch.is_none()
    }
}

pub fn classical_inversion_check<A, B>(
    shift: i64,
    a_seq: A,
    b_seq: B,
    m_max: i64,
    order: i64,
) -> Result<InversionReport>
where
    A: Fn(i64, i64) -> Result<TSeries> + Sync,
    B: Fn(i64, i64) -> Result<TSeries> + Sync,
{
    let a = Monomial::q(shift);
    let q1 = Monomial::q(1);
    let aq = a.shift_q(1);
    let backward = compare_range(0, m_max, order, |m| {
        let s = finite_sum(0, m, order, |j| {
            let f = Factors::new().recip_poch(&q1, 2, m - j).recip_poch(&aq, 2, m + j);
            times(&f, |c| a_seq(j, c), order)
        })?;
        Ok((b_seq(m, order)?, s))
    })?;
    let forward = compare_range(0, m_max, order, |m| {
        let s = finite_sum(0, m, order, |j| {
            let f = Factors::new()
                .well_poised(&a, 2, m)
                .poch(&a, 2, m + j)
                .sign(m - j)
                .q_pow(binom2(m - j))
                .recip_poch(&q1, 2, m - j);
            times(&f, |c| b_seq(j, c), order)
        })?;
        Ok((a_seq(m, order)?, s))
    })?;
    Ok(InversionReport { order, backward_mismatch: backward.mismatch, forward_mismatch: forward.mismatch })
}

//! q-Pochhammer symbols, Gaussian binomials, triple products and windowed
//! evaluation of unilateral and bilateral sums.

use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::product::Factors;
use crate::rational::Rational;
use crate::series::{TSeries, EXACT};

/// The value inside a Pochhammer symbol.
#[derive(Clone, Debug)]
pub enum PochValue {
    Mono(Monomial),
    Series(TSeries),
}

/// `(value; t^base_texp)`. Ordinary base `q` has `base_texp == 2`.
#[derive(Clone, Debug)]
pub struct PochhammerArg {
    pub value: PochValue,
    pub base_texp: i64,
}

impl PochhammerArg {
    pub fn mono(m: Monomial, base_texp: i64) -> Self {
        assert!(base_texp >= 1, "base_texp must be positive");
        PochhammerArg { value: PochValue::Mono(m), base_texp }
    }

    /// `(m; q)`.
    pub fn q(m: Monomial) -> Self {
        Self::mono(m, 2)
    }

    pub fn series(s: TSeries, base_texp: i64) -> Self {
        assert!(base_texp >= 1, "base_texp must be positive");
        PochhammerArg { value: PochValue::Series(s), base_texp }
    }

    fn valuation(&self) -> Option<i64> {
        match &self.value {
            PochValue::Mono(m) => m.valuation(),
            PochValue::Series(s) => (!s.is_zero()).then(|| s.valuation()),
        }
    }
}

/// `(a; B)_k` for any integer `k`, exact up to `order`. For monomial `a` and
/// `k >= 0` an `order` of [`EXACT`] yields the exact polynomial.
pub fn poch(a: &PochhammerArg, k: i64, order: i64) -> Result<TSeries> {
    match &a.value {
        PochValue::Mono(m) => Factors::new().poch(m, a.base_texp, k).eval(order),
        PochValue::Series(s) => {
            let b = a.base_texp;
            let factor = |j: i64| TSeries::one().sub(&s.mul_monomial(&Rational::from_integer(1.into()), b * j));
            if k >= 0 {
                let mut acc = TSeries::one();
                for j in 0..k {
                    acc = acc.mul_trunc(&factor(j), order);
                }
                Ok(acc.truncate(order))
            } else {
                let mut acc = TSeries::one();
                for j in k..0 {
                    acc = acc.mul_trunc(&factor(j), EXACT);
                }
                acc.inv(order)
            }
        }
    }
}

/// `(a; B)_inf` up to `order`. The argument must have positive valuation.
pub fn poch_inf(a: &PochhammerArg, order: i64) -> Result<TSeries> {
    let Some(v) = a.valuation() else {
        return Ok(TSeries::one().truncate(order));
    };
    if v <= 0 {
        return Err(Error::FormalDivergence(format!(
            "infinite Pochhammer product with argument of valuation {v}"
        )));
    }
    match &a.value {
        PochValue::Mono(m) => Factors::new().poch_inf(m, a.base_texp).eval(order),
        PochValue::Series(s) => {
            let mut acc = TSeries::one().truncate(order);
            let mut j = 0;
            while v + a.base_texp * j <= order {
                let term = s.mul_monomial(&Rational::from_integer(1.into()), a.base_texp * j);
                acc = acc.mul_trunc(&TSeries::one().sub(&term), order);
                j += 1;
            }
            Ok(acc)
        }
    }
}

/// Index of a Pochhammer product: finite or infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PochIndex {
    Finite(i64),
    Infinite,
}

/// `(a_1, ..., a_r)_k`.
pub fn poch_multi(args: &[PochhammerArg], k: PochIndex, order: i64) -> Result<TSeries> {
    let mut acc = TSeries::one();
    for a in args {
        let f = match k {
            PochIndex::Finite(k) => poch(a, k, order)?,
            PochIndex::Infinite => poch_inf(a, order)?,
        };
        acc = acc.mul_trunc(&f, order);
    }
    Ok(if args.is_empty() { acc } else { acc.truncate(order) })
}

/// The Gaussian binomial `[n, k]` in base `t^base_texp`, as an exact
/// polynomial; zero when `k < 0` or `k > n`.
pub fn qbinom(n: i64, k: i64, base_texp: i64) -> TSeries {
    if k < 0 || k > n {
        return TSeries::zero(EXACT);
    }
    let degree = base_texp * k * (n - k);
    // [n,k] = (B^(k+1); B)_(n-k) / (B; B)_(n-k)
    let s = qbinom_factors(Factors::new(), n, k, base_texp)
        .eval(degree)
        .expect("Gaussian binomial denominators never vanish");
    TSeries::from_terms(s.terms().map(|(e, c)| (e, c.clone())), EXACT)
}

/// Factors of the Gaussian binomial for use inside larger products.
pub fn qbinom_factors(f: Factors, n: i64, k: i64, base_texp: i64) -> Factors {
    if k < 0 || k > n {
        return f.scalar(&Rational::from_integer(0.into()));
    }
    let b = Monomial::t(base_texp);
    f.poch(&Monomial::t(base_texp * (k + 1)), base_texp, n - k).recip_poch(&b, base_texp, n - k)
}

/// `(B, z, B/z; B)_inf` with `B = t^modulus_texp`.
pub fn triple_product(z: &Monomial, modulus_texp: i64, order: i64) -> Result<TSeries> {
    let v = z.valuation().ok_or_else(|| Error::FormalDivergence("triple product at z = 0".into()))?;
    if v <= 0 || v >= modulus_texp {
        return Err(Error::FormalDivergence(format!(
            "triple product needs 0 < val(z) < {modulus_texp}, got {v}"
        )));
    }
    let b = Monomial::t(modulus_texp);
    Factors::new()
        .poch_inf(&b, modulus_texp)
        .poch_inf(z, modulus_texp)
        .poch_inf(&b.div(z), modulus_texp)
        .eval(order)
}

/// Summation window. With `adaptive` set the upper end keeps extending
/// past `hi` until `stall_cap` consecutive terms lie beyond the target order
/// with nondecreasing valuations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SumWindow {
    pub lo: i64,
    pub hi: i64,
    pub adaptive: bool,
    pub stall_cap: usize,
}

impl SumWindow {
    pub const DEFAULT_STALL_CAP: usize = 3;

    pub fn fixed(lo: i64, hi: i64) -> Self {
        assert!(lo <= hi, "empty summation window");
        SumWindow { lo, hi, adaptive: false, stall_cap: Self::DEFAULT_STALL_CAP }
    }

    pub fn adaptive(lo: i64, hi: i64) -> Self {
        assert!(lo <= hi, "empty summation window");
        SumWindow { lo, hi, adaptive: true, stall_cap: Self::DEFAULT_STALL_CAP }
    }

    /// Same window with both ends pushed twice as far from the origin and a
    /// doubled stall run.
    pub fn doubled(&self) -> Self {
        SumWindow {
            lo: if self.lo < 0 { 2 * self.lo } else { self.lo },
            hi: if self.hi > 0 { 2 * self.hi } else { self.hi },
            adaptive: self.adaptive,
            stall_cap: self.stall_cap * 2,
        }
    }
}

/// Outcome of a windowed summation.
#[derive(Clone, Debug)]
pub struct Summation {
    pub value: TSeries,
    pub terms: usize,
    /// Extreme index reached in each direction.
    pub lo_reached: i64,
    pub hi_reached: i64,
}

/// Walks `start, start+dir, ...` collecting terms until the window and the
/// stop rule are satisfied.
fn walk<F>(term: &mut F, start: i64, end: i64, dir: i64, window: &SumWindow, order: i64) -> Result<(Vec<TSeries>, i64)>
where
    F: FnMut(i64) -> Result<TSeries>,
{
    let mut out = Vec::new();
    let width = ((end - start).abs() + 1).max(8);
    let limit = (end - start).abs() + (window.stall_cap as i64) * 4 * width;
    let mut n = start;
    let mut run = 0usize;
    let mut last_val = i64::MIN;
    loop {
        let steps = (n - start) * dir;
        let past_window = steps > (end - start) * dir;
        if past_window && (!window.adaptive || run >= window.stall_cap) {
            break;
        }
        if steps > limit {
            return Err(Error::FormalDivergence(format!(
                "summation did not settle within {limit} terms past index {start}"
            )));
        }
        let t = term(n)?;
        let v = if t.is_zero() { order + 1 } else { t.valuation() };
        if v > order && (run == 0 || v >= last_val) {
            run += 1;
        } else if v > order {
            run = 1;
        } else {
            run = 0;
        }
        last_val = v;
        out.push(t);
        n += dir;
    }
    Ok((out, n - dir))
}

fn fold(terms: &[TSeries], order: i64, reverse: bool) -> TSeries {
    let mut acc = TSeries::zero(order);
    if reverse {
        for t in terms.iter().rev() {
            acc = acc.add(&t.truncate(order));
        }
    } else {
        for t in terms {
            acc = acc.add(&t.truncate(order));
        }
    }
    acc
}

/// `sum_{n >= window.lo} term(n)` up to `order`.
pub fn sum_unilateral<F>(term: F, window: &SumWindow, order: i64) -> Result<Summation>
where
    F: FnMut(i64) -> Result<TSeries>,
{
    sum_unilateral_with(term, window, order, false)
}

pub fn sum_unilateral_with<F>(mut term: F, window: &SumWindow, order: i64, reverse: bool) -> Result<Summation>
where
    F: FnMut(i64) -> Result<TSeries>,
{
    let (terms, hi) = walk(&mut term, window.lo, window.hi, 1, window, order)?;
    Ok(Summation { value: fold(&terms, order, reverse), terms: terms.len(), lo_reached: window.lo, hi_reached: hi })
}

/// `sum_{n in Z} term(n)` up to `order`; the stop rule runs independently
/// upward from `max(lo, 0)` and downward from `-1`.
pub fn sum_bilateral<F>(term: F, window: &SumWindow, order: i64) -> Result<Summation>
where
    F: FnMut(i64) -> Result<TSeries>,
{
    sum_bilateral_with(term, window, order, false)
}

pub fn sum_bilateral_with<F>(mut term: F, window: &SumWindow, order: i64, reverse: bool) -> Result<Summation>
where
    F: FnMut(i64) -> Result<TSeries>,
{
    let up_start = window.lo.max(0);
    let (mut terms, hi) = walk(&mut term, up_start, window.hi.max(up_start), 1, window, order)?;
    let mut lo = up_start;
    if window.lo < 0 {
        let (down, lo_r) = walk(&mut term, -1, window.lo, -1, window, order)?;
        lo = lo_r;
        terms.extend(down);
    }
    Ok(Summation { value: fold(&terms, order, reverse), terms: terms.len(), lo_reached: lo, hi_reached: hi })
}

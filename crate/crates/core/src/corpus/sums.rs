//! Nested sums of hypergeometric terms.
//!
//! A [`MultiSum`] enumerates integer points `(n_0, .., n_{d-1})` where each
//! `n_i` ranges over `[lo_i(prefix), hi_i(prefix)]`. Every variable carries a
//! weight, a lower bound for the t-valuation of the part of the term that
//! depends on it alone; the weights of a full point add up to a lower bound
//! for the valuation of its term, and that bound is checked against the
//! exact valuation of every emitted term. Points whose bound exceeds the
//! budget are pruned, and an unbounded range stops once its weights have
//! risen past the budget for several consecutive indices.

use num_traits::One;

use crate::error::{Error, Result};
use crate::par;
use crate::product::Factors;
use crate::rational::Rational;
use crate::series::TSeries;

/// Consecutive over-budget, nondecreasing weights needed to close an
/// unbounded range.
const STALL: usize = 4;
/// Hard cap on the length of one unbounded range.
const MAX_SPAN: i64 = 20_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SumOptions {
    /// Sum every term whose valuation bound lies within twice the usual
    /// budget, and demand a doubled stall run before closing a range.
    pub doubled: bool,
    /// Accumulate the terms in reverse enumeration order.
    pub reversed: bool,
}

type RangeFn<'a> = Box<dyn Fn(&[i64]) -> Option<i64> + 'a>;
type WeightFn<'a> = Box<dyn Fn(usize, i64) -> Result<Option<i64>> + 'a>;
type TermFn<'a> = Box<dyn Fn(&[i64]) -> Factors + Sync + 'a>;

pub struct MultiSum<'a> {
    floors: Vec<i64>,
    ceils: Vec<Option<i64>>,
    lo: RangeFn<'a>,
    hi: RangeFn<'a>,
    weight: WeightFn<'a>,
    term: TermFn<'a>,
}

#[derive(Clone, Debug)]
pub struct SumResult {
    pub value: TSeries,
    pub terms: usize,
}

impl<'a> MultiSum<'a> {
    /// `floors[i]` and `ceils[i]` are static bounds for variable `i`;
    /// `weight(i, n)` returns `None` when every term with `n_i = n` vanishes.
    pub fn new<W, T>(floors: Vec<i64>, ceils: Vec<Option<i64>>, weight: W, term: T) -> Self
    where
        W: Fn(usize, i64) -> Result<Option<i64>> + 'a,
        T: Fn(&[i64]) -> Factors + Sync + 'a,
    {
        assert_eq!(floors.len(), ceils.len());
        MultiSum {
            floors,
            ceils,
            lo: Box::new(|_| None),
            hi: Box::new(|_| None),
            weight: Box::new(weight),
            term: Box::new(term),
        }
    }

    /// Prefix-dependent lower ends, on top of the floors.
    pub fn lower<F: Fn(&[i64]) -> Option<i64> + 'a>(mut self, f: F) -> Self {
        self.lo = Box::new(f);
        self
    }

    /// Prefix-dependent upper ends, on top of the ceilings.
    pub fn upper<F: Fn(&[i64]) -> Option<i64> + 'a>(mut self, f: F) -> Self {
        self.hi = Box::new(f);
        self
    }

    /// `n_0 >= n_1 >= .. >= n_{d-1}`.
    pub fn chain(self) -> Self {
        self.upper(|p| p.last().copied())
    }

    fn stall(opts: &SumOptions) -> usize {
        if opts.doubled {
            2 * STALL
        } else {
            STALL
        }
    }

    fn min_weight(&self, i: usize, budget: i64, opts: &SumOptions) -> Result<Option<i64>> {
        let mut best: Option<i64> = None;
        let mut run = 0;
        let mut prev = i64::MIN;
        let start = self.floors[i];
        let mut n = start;
        loop {
            if self.ceils[i].is_some_and(|c| n > c) {
                break;
            }
            if n - start > MAX_SPAN {
                return Err(Error::FormalDivergence(format!("variable {i} shows no valuation growth")));
            }
            match (self.weight)(i, n)? {
                Some(w) => {
                    best = Some(best.map_or(w, |b: i64| b.min(w)));
                    if w > budget.max(best.unwrap()) && w >= prev {
                        run += 1;
                    } else {
                        run = 0;
                    }
                    prev = w;
                }
                None => run += 1,
            }
            if self.ceils[i].is_none() && run >= Self::stall(opts) {
                break;
            }
            n += 1;
        }
        Ok(best)
    }

    /// All points whose valuation bound is at most `budget`, each with its
    /// bound, in enumeration order.
    fn points(&self, budget: i64, opts: &SumOptions) -> Result<Vec<(Vec<i64>, i64)>> {
        let d = self.floors.len();
        let mut rest = vec![0i64; d + 1];
        for i in (0..d).rev() {
            match self.min_weight(i, budget, opts)? {
                Some(w) => rest[i] = rest[i + 1] + w,
                None => return Ok(Vec::new()),
            }
        }
        let mut out = Vec::new();
        let mut prefix = Vec::with_capacity(d);
        self.descend(&mut prefix, 0, budget, &rest, opts, &mut out)?;
        Ok(out)
    }

    fn descend(
        &self,
        prefix: &mut Vec<i64>,
        acc: i64,
        budget: i64,
        rest: &[i64],
        opts: &SumOptions,
        out: &mut Vec<(Vec<i64>, i64)>,
    ) -> Result<()> {
        let i = prefix.len();
        if i == self.floors.len() {
            out.push((prefix.clone(), acc));
            return Ok(());
        }
        let lo = (self.lo)(prefix).map_or(self.floors[i], |l| l.max(self.floors[i]));
        let hi = match ((self.hi)(prefix), self.ceils[i]) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let mut run = 0;
        let mut prev = i64::MIN;
        let mut n = lo;
        loop {
            if hi.is_some_and(|h| n > h) {
                break;
            }
            if n - lo > MAX_SPAN {
                return Err(Error::FormalDivergence(format!("variable {i} shows no valuation growth")));
            }
            match (self.weight)(i, n)? {
                Some(w) => {
                    if acc + w + rest[i + 1] <= budget {
                        prefix.push(n);
                        self.descend(prefix, acc + w, budget, rest, opts, out)?;
                        prefix.pop();
                        run = 0;
                    } else if w >= prev {
                        run += 1;
                    } else {
                        run = 0;
                    }
                    prev = w;
                }
                None => run += 1,
            }
            if hi.is_none() && run >= Self::stall(opts) {
                break;
            }
            n += 1;
        }
        Ok(())
    }

    /// The sum, exact up to and including `order`.
    pub fn eval(&self, order: i64, opts: &SumOptions) -> Result<SumResult> {
        let budget = if opts.doubled { order + order.abs().max(8) } else { order };
        let pts = self.points(budget, opts)?;
        let term = &self.term;
        let chunks = runs(&pts);
        let evaluated = par::map(&chunks, |run| -> Result<Vec<TSeries>> {
            let mut fs = Vec::with_capacity(run.len());
            for (p, bound) in run.iter() {
                let f = term(p);
                let v = f.valuation()?;
                if let Some(v) = v.filter(|v| v < bound) {
                    return Err(Error::FormalDivergence(format!(
                        "term at {p:?} has valuation {v} below its bound {bound}"
                    )));
                }
                fs.push((f, v));
            }
            let prec = fs.iter().filter_map(|(_, v)| v.map(|v| order - v)).max().unwrap_or(0).max(0);
            let mut out = Vec::with_capacity(run.len());
            let mut prev: Option<(Factors, i64, TSeries)> = None;
            for (f, v) in fs {
                let Some(v) = v else {
                    prev = None;
                    out.push(TSeries::zero(order));
                    continue;
                };
                let stepped = match &prev {
                    Some((pf, pv, pu)) => match f.over(pf).scale_unit(pu.clone()) {
                        Ok(Some((r, u))) if pv + r == v => Some(u),
                        _ => None,
                    },
                    None => None,
                };
                let unit = match stepped {
                    Some(u) => u,
                    None => match f.scale_unit(TSeries::one().truncate(prec)) {
                        Ok(Some((_, u))) => u,
                        _ => {
                            prev = None;
                            out.push(f.eval(order)?);
                            continue;
                        }
                    },
                };
                out.push(unit.mul_monomial(&Rational::one(), v).truncate(order));
                prev = Some((f, v, unit));
            }
            Ok(out)
        });
        let mut terms = Vec::with_capacity(pts.len());
        for chunk in evaluated {
            terms.extend(chunk?);
        }
        if opts.reversed {
            terms.reverse();
        }
        let mut value = TSeries::zero(order);
        for t in &terms {
            value = value.add(t);
        }
        Ok(SumResult { value, terms: terms.len() })
    }
}

/// Longest stretch of consecutive points evaluated from one another.
const RUN: usize = 24;

/// Splits `pts` into pieces of at most `RUN` points in which each point
/// follows the previous one by a unit step in the last coordinate.
fn runs(pts: &[(Vec<i64>, i64)]) -> Vec<&[(Vec<i64>, i64)]> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=pts.len() {
        let split = i == pts.len() || i - start == RUN || {
            let (a, b) = (&pts[i - 1].0, &pts[i].0);
            let k = a.len();
            k == 0 || a[..k - 1] != b[..k - 1] || b[k - 1] != a[k - 1] + 1
        };
        if split {
            out.push(&pts[start..i]);
            start = i;
        }
    }
    out
}

/// `sum_{n >= lo} term(n)` with weights equal to the exact valuations of
/// the terms.
pub fn unilateral<'a, T>(lo: i64, hi: Option<i64>, term: T) -> MultiSum<'a>
where
    T: Fn(i64) -> Factors + Sync + Clone + 'a,
{
    let t2 = term.clone();
    MultiSum::new(vec![lo], vec![hi], move |_, n| t2(n).valuation(), move |p| term(p[0]))
}

/// `sum_{n in Z} term(n)`, split as `n >= 0` and `n = -1 - j` for `j >= 0`.
pub fn bilateral<T>(term: T, order: i64, opts: &SumOptions) -> Result<SumResult>
where
    T: Fn(i64) -> Factors + Sync + Clone,
{
    let up = unilateral(0, None, term.clone()).eval(order, opts)?;
    let down = unilateral(0, None, move |j| term(-1 - j)).eval(order, opts)?;
    let value = if opts.reversed { down.value.add(&up.value) } else { up.value.add(&down.value) };
    Ok(SumResult { value, terms: up.terms + down.terms })
}

//! Truncated formal Laurent series in `t = q^(1/2)`.
//!
//! A [`TSeries`] stores dense coefficients starting at its valuation and
//! knows every coefficient up to and including `order`. Coefficients above
//! `order` are unknown. Exact polynomials carry `order == EXACT`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{fmt_rational, Rational};

/// Order sentinel for series that are exact (Laurent polynomials).
pub const EXACT: i64 = i64::MAX / 4;

fn clamp(o: i64) -> i64 {
    if o >= EXACT / 2 {
        EXACT
    } else {
        o
    }
}

fn add_orders(a: i64, b: i64) -> i64 {
    if a >= EXACT / 2 || b >= EXACT / 2 {
        // EXACT + finite negative stays huge; EXACT is absorbing here.
        if a >= EXACT / 2 && b >= EXACT / 2 {
            return EXACT;
        }
        let (big, small) = if a >= EXACT / 2 { (a, b) } else { (b, a) };
        return clamp(big.saturating_add(small));
    }
    a + b
}

#[derive(Clone, PartialEq, Eq)]
pub struct TSeries {
    min_exp: i64,
    coeffs: Vec<Rational>,
    order: i64,
}

impl TSeries {
    /// The zero series known up to `order`.
    pub fn zero(order: i64) -> Self {
        let order = clamp(order);
        TSeries { min_exp: order.saturating_add(1), coeffs: Vec::new(), order }
    }

    pub fn one() -> Self {
        Self::monomial(Rational::one(), 0)
    }

    /// The exact series `c t^e`.
    pub fn monomial(c: Rational, e: i64) -> Self {
        if c.is_zero() {
            return Self::zero(EXACT);
        }
        TSeries { min_exp: e, coeffs: vec![c], order: EXACT }
    }

    /// The exact series `c q^e` (that is, `c t^(2e)`).
    pub fn q_monomial(c: Rational, q_exp: i64) -> Self {
        Self::monomial(c, 2 * q_exp)
    }

    /// Builds a series from coefficients starting at `min_exp`, dropping
    /// anything above `order` and normalizing leading zeros away.
    pub fn from_coeffs(min_exp: i64, coeffs: Vec<Rational>, order: i64) -> Self {
        let mut s = TSeries { min_exp, coeffs, order: clamp(order) };
        s.normalize();
        s
    }

    /// Exact Laurent polynomial from `(t-exponent, coefficient)` pairs.
    pub fn from_terms<I: IntoIterator<Item = (i64, Rational)>>(terms: I, order: i64) -> Self {
        let terms: Vec<(i64, Rational)> = terms.into_iter().collect();
        if terms.is_empty() {
            return Self::zero(order);
        }
        let lo = terms.iter().map(|t| t.0).min().unwrap();
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut coeffs = vec![Rational::zero(); (hi - lo + 1) as usize];
        for (e, c) in terms {
            coeffs[(e - lo) as usize] += c;
        }
        Self::from_coeffs(lo, coeffs, order)
    }

    fn normalize(&mut self) {
        let max_len = if self.order >= EXACT {
            self.coeffs.len()
        } else {
            (self.order - self.min_exp + 1).max(0) as usize
        };
        self.coeffs.truncate(max_len);
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead == self.coeffs.len() {
            self.coeffs.clear();
            self.min_exp = self.order.saturating_add(1);
        } else if lead > 0 {
            self.coeffs.drain(..lead);
            self.min_exp += lead as i64;
        }
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn is_exact(&self) -> bool {
        self.order >= EXACT
    }

    /// Zero up to the known order.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Smallest exponent with a nonzero coefficient, or `order + 1` when the
    /// series is zero up to its order.
    pub fn valuation(&self) -> i64 {
        self.min_exp
    }

    /// Largest exponent carrying a stored (nonzero) coefficient.
    pub fn degree(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.min_exp + self.coeffs.len() as i64 - 1)
        }
    }

    pub fn coeff(&self, e: i64) -> Rational {
        if e < self.min_exp {
            return Rational::zero();
        }
        self.coeffs.get((e - self.min_exp) as usize).cloned().unwrap_or_else(Rational::zero)
    }

    /// Nonzero `(exponent, coefficient)` pairs in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.min_exp + i as i64, c))
    }

    /// Drops everything above `order`.
    pub fn truncate(&self, order: i64) -> Self {
        if order >= self.order {
            return self.clone();
        }
        let mut s = self.clone();
        s.order = order;
        s.normalize();
        s
    }

    pub fn neg(&self) -> Self {
        TSeries {
            min_exp: self.min_exp,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            order: self.order,
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.order);
        }
        TSeries {
            min_exp: self.min_exp,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
            order: self.order,
        }
    }

    /// Multiplies by the exact monomial `c t^e`.
    pub fn mul_monomial(&self, c: &Rational, e: i64) -> Self {
        if c.is_zero() {
            return Self::zero(EXACT);
        }
        TSeries {
            min_exp: if self.coeffs.is_empty() { add_orders(self.order, e) + 1 } else { self.min_exp + e },
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
            order: add_orders(self.order, e),
        }
    }

    pub fn add(&self, other: &TSeries) -> Self {
        let order = self.order.min(other.order);
        if self.coeffs.is_empty() {
            return other.truncate(order);
        }
        if other.coeffs.is_empty() {
            return self.truncate(order);
        }
        let lo = self.min_exp.min(other.min_exp);
        let mut hi = self.degree().unwrap().max(other.degree().unwrap());
        if order < EXACT {
            hi = hi.min(order);
        }
        if hi < lo {
            return Self::zero(order);
        }
        let mut coeffs = vec![Rational::zero(); (hi - lo + 1) as usize];
        for s in [self, other] {
            for (i, c) in s.coeffs.iter().enumerate() {
                let e = s.min_exp + i as i64;
                if e > hi {
                    break;
                }
                coeffs[(e - lo) as usize] += c;
            }
        }
        Self::from_coeffs(lo, coeffs, order)
    }

    pub fn sub(&self, other: &TSeries) -> Self {
        self.add(&other.neg())
    }

    /// Order of the product of `self` and `other`.
    pub fn product_order(&self, other: &TSeries) -> i64 {
        let a = add_orders(self.order, other.valuation());
        let b = add_orders(other.order, self.valuation());
        clamp(a.min(b))
    }

    pub fn mul(&self, other: &TSeries) -> Self {
        self.mul_trunc(other, EXACT)
    }

    /// Cauchy product, keeping nothing above `cap`.
    pub fn mul_trunc(&self, other: &TSeries, cap: i64) -> Self {
        let order = self.product_order(other).min(cap);
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::zero(order);
        }
        let lo = self.min_exp + other.min_exp;
        let mut hi = self.degree().unwrap() + other.degree().unwrap();
        if order < EXACT {
            hi = hi.min(order);
        }
        if hi < lo {
            return Self::zero(order);
        }
        let len = (hi - lo + 1) as usize;
        let (an, ad) = common_denominator(&self.coeffs[..self.coeffs.len().min(len)]);
        let (bn, bd) = common_denominator(&other.coeffs[..other.coeffs.len().min(len)]);
        let mut acc = vec![BigInt::zero(); len];
        for (i, x) in an.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in bn.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                if !y.is_zero() {
                    acc[i + j] += x * y;
                }
            }
        }
        let den = ad * bd;
        let coeffs = acc.into_iter().map(|n| Rational::new(n, den.clone())).collect();
        Self::from_coeffs(lo, coeffs, order)
    }

    /// Multiplies in place by `(1 - c t^p)` for `p > 0`.
    pub fn mul_one_minus(&self, c: &Rational, p: i64) -> Self {
        assert!(p > 0, "binomial factor exponent must be positive");
        if self.coeffs.is_empty() {
            return self.clone();
        }
        let mut len = self.coeffs.len() + p as usize;
        if self.order < EXACT {
            len = len.min((self.order - self.min_exp + 1).max(0) as usize);
        }
        let mut out: Vec<Rational> = Vec::with_capacity(len);
        for i in 0..len {
            let mut v = self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero);
            if i >= p as usize {
                if let Some(prev) = self.coeffs.get(i - p as usize) {
                    if !prev.is_zero() {
                        v -= prev * c;
                    }
                }
            }
            out.push(v);
        }
        Self::from_coeffs(self.min_exp, out, self.order)
    }

    /// Divides by `(1 - c t^p)` for `p > 0`, keeping nothing above `cap`.
    pub fn div_one_minus(&self, c: &Rational, p: i64, cap: i64) -> Self {
        assert!(p > 0, "binomial factor exponent must be positive");
        let order = self.order.min(cap);
        assert!(order < EXACT, "division by a binomial needs a finite cap");
        if self.coeffs.is_empty() {
            return Self::zero(order);
        }
        let len = (order - self.min_exp + 1).max(0) as usize;
        let mut out: Vec<Rational> = Vec::with_capacity(len);
        for i in 0..len {
            let mut v = self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero);
            if i >= p as usize {
                let prev = &out[i - p as usize];
                if !prev.is_zero() {
                    v += prev * c;
                }
            }
            out.push(v);
        }
        Self::from_coeffs(self.min_exp, out, order)
    }

    /// `g` with `self * g = 1` up to the derivable order, capped at `cap`.
    pub fn inv(&self, cap: i64) -> Result<Self> {
        if self.coeffs.is_empty() {
            return Err(Error::ZeroSeriesInversion);
        }
        let v = self.min_exp;
        if self.coeffs.len() == 1 && self.is_exact() {
            return Ok(Self::monomial(self.coeffs[0].recip(), -v));
        }
        let order = clamp(add_orders(self.order, -2 * v)).min(cap);
        if order >= EXACT {
            return Err(Error::PrecisionLoss(order));
        }
        let len = (order + v + 1).max(0) as usize;
        let inv0 = self.coeffs[0].recip();
        let mut out: Vec<Rational> = Vec::with_capacity(len);
        for n in 0..len {
            if n == 0 {
                out.push(inv0.clone());
                continue;
            }
            let mut s = Rational::zero();
            for k in 1..=n.min(self.coeffs.len() - 1) {
                let a = &self.coeffs[k];
                if !a.is_zero() {
                    s += a * &out[n - k];
                }
            }
            out.push(-s * &inv0);
        }
        Ok(Self::from_coeffs(-v, out, order))
    }

    /// Substitutes `t -> t^k`, keeping nothing above `cap`.
    pub fn scale_base(&self, k: i64, cap: i64) -> Self {
        assert!(k >= 1, "base scaling factor must be positive");
        let order = clamp(if self.is_exact() { EXACT } else { self.order.saturating_mul(k) }).min(cap);
        let terms: Vec<(i64, Rational)> = self
            .terms()
            .map(|(e, c)| (e * k, c.clone()))
            .filter(|(e, _)| *e <= order)
            .collect();
        Self::from_terms(terms, order)
    }

    /// Coefficientwise comparison on the common known range. Returns the
    /// first exponent at which the two series differ.
    pub fn first_mismatch(&self, other: &TSeries) -> Option<i64> {
        let order = self.order.min(other.order);
        let lo = self.min_exp.min(other.min_exp);
        let hi = match (self.degree(), other.degree()) {
            (None, None) => return None,
            (a, b) => a.unwrap_or(lo).max(b.unwrap_or(lo)).min(order),
        };
        (lo..=hi).find(|&e| self.coeff(e) != other.coeff(e))
    }

    /// Equality on the common known range.
    pub fn agrees_with(&self, other: &TSeries) -> bool {
        self.first_mismatch(other).is_none()
    }

    /// Lines `"e c"` for every nonzero coefficient.
    pub fn to_lines(&self) -> Vec<String> {
        self.terms().map(|(e, c)| format!("{} {}", e, fmt_rational(c))).collect()
    }
}

fn common_denominator(cs: &[Rational]) -> (Vec<BigInt>, BigInt) {
    let mut den = BigInt::one();
    for c in cs {
        if !c.denom().is_one() {
            den = den.lcm(c.denom());
        }
    }
    let nums = cs
        .iter()
        .map(|c| if c.is_zero() { BigInt::zero() } else { c.numer() * (&den / c.denom()) })
        .collect();
    (nums, den)
}

impl fmt::Debug for TSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for TSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})t^{}", fmt_rational(c), e)?;
        }
        if first {
            write!(f, "0")?;
        }
        if self.is_exact() {
            Ok(())
        } else {
            write!(f, " + O(t^{})", self.order + 1)
        }
    }
}

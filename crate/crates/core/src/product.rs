//! Products and quotients of binomial factors `(1 - c t^p)`.
//!
//! Every hypergeometric term in the engine is a monomial times a ratio of
//! Pochhammer symbols of monomials. [`Factors`] collects those factors
//! symbolically, cancels identical numerator/denominator factors, moves
//! nonpositive-exponent factors into the monomial prefactor, and only then
//! expands to a [`TSeries`]. Cancellation is what makes `(x)_k / (x)_k = 1`
//! hold even when `x` is a pure power of `q` and both sides vanish.

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::rational::Rational;
use crate::series::{TSeries, EXACT};

#[derive(Clone, Debug)]
struct InfFactor {
    coeff: Rational,
    texp: i64,
    base: i64,
}

#[derive(Clone, Debug)]
pub struct Factors {
    coeff: Rational,
    texp: i64,
    num: Vec<(Rational, i64)>,
    den: Vec<(Rational, i64)>,
    inf_num: Vec<InfFactor>,
    inf_den: Vec<InfFactor>,
}

struct Normalized {
    coeff: Rational,
    texp: i64,
    num: Vec<(Rational, i64)>,
    den: Vec<(Rational, i64)>,
    inf_num: Vec<InfFactor>,
    inf_den: Vec<InfFactor>,
}

impl Default for Factors {
    fn default() -> Self {
        Self::new()
    }
}

impl Factors {
    pub fn new() -> Self {
        Factors {
            coeff: Rational::one(),
            texp: 0,
            num: Vec::new(),
            den: Vec::new(),
            inf_num: Vec::new(),
            inf_den: Vec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn mono(mut self, m: &Monomial) -> Self {
        self.mul_mono(m);
        self
    }

    pub fn mul_mono(&mut self, m: &Monomial) {
        if m.is_zero() {
            self.coeff = Rational::zero();
        } else {
            self.coeff *= &m.coeff;
            self.texp += m.texp;
        }
    }

    pub fn div_mono(&mut self, m: &Monomial) {
        assert!(!m.is_zero(), "division by the zero monomial");
        self.coeff /= &m.coeff;
        self.texp -= m.texp;
    }

    pub fn scalar(mut self, c: &Rational) -> Self {
        self.coeff *= c;
        self
    }

    /// Multiplies by `t^e`.
    pub fn t_pow(mut self, e: i64) -> Self {
        self.texp += e;
        self
    }

    /// Multiplies by `q^e`.
    pub fn q_pow(self, e: i64) -> Self {
        self.t_pow(2 * e)
    }

    /// Multiplies by `(-1)^e`.
    pub fn sign(mut self, e: i64) -> Self {
        if e.rem_euclid(2) == 1 {
            self.coeff = -self.coeff;
        }
        self
    }

    /// Multiplies by `(1 - x)` for a monomial `x`.
    pub fn binomial(mut self, x: &Monomial) -> Self {
        if !x.is_zero() {
            self.num.push((x.coeff.clone(), x.texp));
        }
        self
    }

    /// Divides by `(1 - x)`.
    pub fn recip_binomial(mut self, x: &Monomial) -> Self {
        if !x.is_zero() {
            self.den.push((x.coeff.clone(), x.texp));
        }
        self
    }

    /// Multiplies by `(x; t^base)_k` for any integer `k`.
    pub fn poch(mut self, x: &Monomial, base: i64, k: i64) -> Self {
        self.push_poch(x, base, k, false);
        self
    }

    /// Divides by `(x; t^base)_k`.
    pub fn recip_poch(mut self, x: &Monomial, base: i64, k: i64) -> Self {
        self.push_poch(x, base, k, true);
        self
    }

    fn push_poch(&mut self, x: &Monomial, base: i64, k: i64, invert: bool) {
        assert!(base >= 1, "Pochhammer base exponent must be positive");
        if x.is_zero() || k == 0 {
            return;
        }
        // (x)_k = prod_{j<k} (1 - x B^j);  (x)_{-k} = 1 / prod_{j=-k}^{-1} (1 - x B^j)
        let (range, on_top) = if k > 0 { (0..k, !invert) } else { (k..0, invert) };
        let list = if on_top { &mut self.num } else { &mut self.den };
        for j in range {
            list.push((x.coeff.clone(), x.texp + base * j));
        }
    }

    /// Multiplies by `(x; t^base)_inf`.
    pub fn poch_inf(mut self, x: &Monomial, base: i64) -> Self {
        assert!(base >= 1, "Pochhammer base exponent must be positive");
        if !x.is_zero() {
            self.inf_num.push(InfFactor { coeff: x.coeff.clone(), texp: x.texp, base });
        }
        self
    }

    /// Divides by `(x; t^base)_inf`.
    pub fn recip_poch_inf(mut self, x: &Monomial, base: i64) -> Self {
        assert!(base >= 1, "Pochhammer base exponent must be positive");
        if !x.is_zero() {
            self.inf_den.push(InfFactor { coeff: x.coeff.clone(), texp: x.texp, base });
        }
        self
    }

    /// Multiplies by `(1 - x B^(2n)) / (1 - x)`, the very-well-poised factor.
    pub fn well_poised(self, x: &Monomial, base: i64, n: i64) -> Self {
        self.binomial(&x.shift_t(2 * base * n)).recip_binomial(x)
    }

    pub fn extend(mut self, other: &Factors) -> Self {
        self.coeff *= &other.coeff;
        self.texp += other.texp;
        self.num.extend(other.num.iter().cloned());
        self.den.extend(other.den.iter().cloned());
        self.inf_num.extend(other.inf_num.iter().cloned());
        self.inf_den.extend(other.inf_den.iter().cloned());
        self
    }

    fn normalize(&self) -> Result<Option<Normalized>> {
        if self.coeff.is_zero() {
            return Ok(None);
        }
        let mut num = self.num.clone();
        let mut den = self.den.clone();
        let mut inf_num = Vec::new();
        let mut inf_den = Vec::new();
        for (src, fin, inf) in [
            (&self.inf_num, &mut num, &mut inf_num),
            (&self.inf_den, &mut den, &mut inf_den),
        ] {
            for f in src {
                let mut p = f.texp;
                while p <= 0 {
                    fin.push((f.coeff.clone(), p));
                    p += f.base;
                }
                inf.push(InfFactor { coeff: f.coeff.clone(), texp: p, base: f.base });
            }
        }
        cancel(&mut num, &mut den);

        let mut coeff = self.coeff.clone();
        let mut texp = self.texp;
        let mut pos_num = Vec::with_capacity(num.len());
        for (c, p) in num {
            match p.cmp(&0) {
                std::cmp::Ordering::Greater => pos_num.push((c, p)),
                std::cmp::Ordering::Equal => {
                    let v = Rational::one() - &c;
                    if v.is_zero() {
                        return Ok(None);
                    }
                    coeff *= v;
                }
                std::cmp::Ordering::Less => {
                    // 1 - c t^p = -c t^p (1 - c^-1 t^-p)
                    coeff *= -&c;
                    texp += p;
                    pos_num.push((c.recip(), -p));
                }
            }
        }
        let mut pos_den = Vec::with_capacity(den.len());
        for (c, p) in den {
            match p.cmp(&0) {
                std::cmp::Ordering::Greater => pos_den.push((c, p)),
                std::cmp::Ordering::Equal => {
                    let v = Rational::one() - &c;
                    if v.is_zero() {
                        return Err(Error::ZeroSeriesInversion);
                    }
                    coeff /= v;
                }
                std::cmp::Ordering::Less => {
                    coeff /= -&c;
                    texp -= p;
                    pos_den.push((c.recip(), -p));
                }
            }
        }
        cancel(&mut pos_num, &mut pos_den);
        Ok(Some(Normalized { coeff, texp, num: pos_num, den: pos_den, inf_num, inf_den }))
    }

    /// `self / other` as a single product, before cancellation.
    pub fn over(&self, other: &Factors) -> Factors {
        assert!(!other.coeff.is_zero(), "division by a vanishing product");
        Factors {
            coeff: &self.coeff / &other.coeff,
            texp: self.texp - other.texp,
            num: self.num.iter().chain(&other.den).cloned().collect(),
            den: self.den.iter().chain(&other.num).cloned().collect(),
            inf_num: self.inf_num.iter().chain(&other.inf_den).cloned().collect(),
            inf_den: self.inf_den.iter().chain(&other.inf_num).cloned().collect(),
        }
    }

    /// Multiplies `unit` by this product divided by its leading power of
    /// `t`, keeping the order of `unit`. Returns the valuation of the
    /// product, or `None` when it vanishes. Infinite products must have
    /// cancelled.
    pub(crate) fn scale_unit(&self, unit: TSeries) -> Result<Option<(i64, TSeries)>> {
        let Some(n) = self.normalize()? else {
            return Ok(None);
        };
        if !n.inf_num.is_empty() || !n.inf_den.is_empty() {
            return Err(Error::PrecisionLoss(unit.order()));
        }
        let prec = unit.order();
        let mut s = unit;
        for (c, p) in &n.num {
            if *p <= prec {
                s = s.mul_one_minus(c, *p);
            }
        }
        for (c, p) in &n.den {
            if *p <= prec {
                s = s.div_one_minus(c, *p, prec);
            }
        }
        Ok(Some((n.texp, s.scale(&n.coeff))))
    }

    /// Exact valuation of the product in t-units, or `None` when it vanishes.
    pub fn valuation(&self) -> Result<Option<i64>> {
        Ok(self.normalize()?.map(|n| n.texp))
    }

    /// Expands the product, exact up to and including `cap`. With
    /// `cap == EXACT` the product must be a Laurent polynomial.
    pub fn eval(&self, cap: i64) -> Result<TSeries> {
        let Some(n) = self.normalize()? else {
            return Ok(TSeries::zero(cap));
        };
        if cap >= EXACT {
            if !n.den.is_empty() || !n.inf_num.is_empty() || !n.inf_den.is_empty() {
                return Err(Error::PrecisionLoss(cap));
            }
            let mut s = TSeries::one();
            for (c, p) in &n.num {
                s = s.mul_one_minus(c, *p);
            }
            return Ok(s.mul_monomial(&n.coeff, n.texp));
        }
        let budget = cap - n.texp;
        if budget < 0 {
            return Ok(TSeries::zero(cap));
        }
        let mut s = TSeries::from_coeffs(0, vec![Rational::one()], budget);
        for (c, p) in &n.num {
            if *p <= budget {
                s = s.mul_one_minus(c, *p);
            }
        }
        for f in &n.inf_num {
            let mut p = f.texp;
            while p <= budget {
                s = s.mul_one_minus(&f.coeff, p);
                p += f.base;
            }
        }
        for (c, p) in &n.den {
            if *p <= budget {
                s = s.div_one_minus(c, *p, budget);
            }
        }
        for f in &n.inf_den {
            let mut p = f.texp;
            while p <= budget {
                s = s.div_one_minus(&f.coeff, p, budget);
                p += f.base;
            }
        }
        Ok(s.mul_monomial(&n.coeff, n.texp))
    }
}

/// `f * s` exact up to `cap`, where `s` is produced at whatever order the
/// valuation of `f` demands.
pub fn times<G>(f: &Factors, get: G, cap: i64) -> Result<TSeries>
where
    G: FnOnce(i64) -> Result<TSeries>,
{
    let Some(vf) = f.valuation()? else {
        return Ok(TSeries::zero(cap));
    };
    let s = get(cap - vf)?;
    if s.is_zero() {
        return Ok(TSeries::zero(cap));
    }
    let fs = f.eval(cap - s.valuation())?;
    Ok(fs.mul_trunc(&s, cap))
}

fn cancel(num: &mut Vec<(Rational, i64)>, den: &mut Vec<(Rational, i64)>) {
    if num.is_empty() || den.is_empty() {
        return;
    }
    let mut counts: HashMap<(Rational, i64), usize> = HashMap::new();
    for f in den.iter() {
        *counts.entry(f.clone()).or_default() += 1;
    }
    let mut removed: HashMap<(Rational, i64), usize> = HashMap::new();
    num.retain(|f| match counts.get_mut(f) {
        Some(c) if *c > 0 => {
            *c -= 1;
            *removed.entry(f.clone()).or_default() += 1;
            false
        }
        _ => true,
    });
    den.retain(|f| match removed.get_mut(f) {
        Some(c) if *c > 0 => {
            *c -= 1;
            false
        }
        _ => true,
    });
}

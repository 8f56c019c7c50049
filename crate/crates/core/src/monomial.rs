//! Monomial parameters `c q^(e/2)`.

use std::fmt;

use num_traits::{One, Zero};

use crate::rational::{fmt_rational, pow, Rational};
use crate::series::TSeries;

/// `coeff * t^texp` with `t = q^(1/2)`. The zero monomial has `coeff == 0`
/// and its `texp` is meaningless.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub coeff: Rational,
    pub texp: i64,
}

impl Monomial {
    pub fn new(coeff: Rational, texp: i64) -> Self {
        if coeff.is_zero() {
            Self::zero()
        } else {
            Monomial { coeff, texp }
        }
    }

    pub fn zero() -> Self {
        Monomial { coeff: Rational::zero(), texp: 0 }
    }

    pub fn one() -> Self {
        Monomial { coeff: Rational::one(), texp: 0 }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(c, 0)
    }

    /// `t^texp`.
    pub fn t(texp: i64) -> Self {
        Monomial { coeff: Rational::one(), texp }
    }

    /// `q^e`.
    pub fn q(e: i64) -> Self {
        Self::t(2 * e)
    }

    pub fn cq(c: Rational, q_exp: i64) -> Self {
        Self::new(c, 2 * q_exp)
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn valuation(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.texp)
        }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        Monomial { coeff: &self.coeff * &other.coeff, texp: self.texp + other.texp }
    }

    /// Panics on division by the zero monomial.
    pub fn div(&self, other: &Monomial) -> Monomial {
        assert!(!other.is_zero(), "division by the zero monomial");
        if self.is_zero() {
            return Self::zero();
        }
        Monomial { coeff: &self.coeff / &other.coeff, texp: self.texp - other.texp }
    }

    pub fn recip(&self) -> Monomial {
        Self::one().div(self)
    }

    pub fn pow(&self, e: i64) -> Monomial {
        if e == 0 {
            return Self::one();
        }
        if self.is_zero() {
            assert!(e > 0, "zero monomial raised to a negative power");
            return Self::zero();
        }
        Monomial { coeff: pow(&self.coeff, e), texp: self.texp * e }
    }

    pub fn neg(&self) -> Monomial {
        Monomial { coeff: -self.coeff.clone(), texp: self.texp }
    }

    /// Multiplies by `q^e`.
    pub fn shift_q(&self, e: i64) -> Monomial {
        self.mul(&Monomial::q(e))
    }

    pub fn shift_t(&self, e: i64) -> Monomial {
        self.mul(&Monomial::t(e))
    }

    pub fn to_series(&self) -> TSeries {
        TSeries::monomial(self.coeff.clone(), self.texp)
    }

    /// True when `self` equals `q^e` exactly for some integer `e`; used to
    /// detect vanishing Pochhammer factors.
    pub fn is_pure_q_power(&self) -> bool {
        self.coeff.is_one() && self.texp % 2 == 0
    }
}

impl fmt::Display for Monomial {
    /// Renders in the instance-file grammar, e.g. `5/2q^3`, `-q^(3/2)`, `7`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if self.texp == 0 {
            return write!(f, "{}", fmt_rational(&self.coeff));
        }
        if self.coeff == -Rational::one() {
            write!(f, "-")?;
        } else if !self.coeff.is_one() {
            write!(f, "{}", fmt_rational(&self.coeff))?;
        }
        write!(f, "q")?;
        if self.texp == 2 {
            Ok(())
        } else if self.texp % 2 == 0 {
            write!(f, "^{}", self.texp / 2)
        } else {
            write!(f, "^({}/2)", self.texp)
        }
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// A lemma parameter: a finite monomial or the limit `rho -> infinity`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Param {
    Finite(Monomial),
    Infinity,
}

impl Param {
    pub fn finite(&self) -> Option<&Monomial> {
        match self {
            Param::Finite(m) => Some(m),
            Param::Infinity => None,
        }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Param::Finite(m) => write!(f, "{}", m),
            Param::Infinity => write!(f, "inf"),
        }
    }
}

impl From<Monomial> for Param {
    fn from(m: Monomial) -> Self {
        Param::Finite(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{ratio, rat};

    #[test]
    fn display_forms() {
        assert_eq!(Monomial::cq(rat(2), 1).to_string(), "2q");
        assert_eq!(Monomial::new(ratio(5, 2), 8).to_string(), "5/2q^4");
        assert_eq!(Monomial::new(rat(-1), 3).to_string(), "-q^(3/2)");
        assert_eq!(Monomial::constant(rat(7)).to_string(), "7");
        assert_eq!(Monomial::zero().to_string(), "0");
        assert_eq!(Monomial::q(-2).to_string(), "q^-2");
    }

    #[test]
    fn arithmetic() {
        let a = Monomial::new(rat(3), 4);
        let b = Monomial::new(ratio(1, 2), -1);
        assert_eq!(a.mul(&b), Monomial::new(ratio(3, 2), 3));
        assert_eq!(a.div(&a), Monomial::one());
        assert_eq!(b.pow(-2), Monomial::new(rat(4), 2));
    }
}

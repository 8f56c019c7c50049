//! Identities from the WP-bilateral Bailey lemma: the 8psi8 transformation,
//! Ramanujan's 1psi1, Bailey's 6psi6 and the bilateral extension with a
//! 4phi3 on the right.

use super::sums::{bilateral, unilateral, SumOptions};
use super::{series, Bindings, Built};
use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::product::{times, Factors};
use crate::rational::rat;
use crate::series::TSeries;

fn q() -> Monomial {
    Monomial::q(1)
}

fn val(m: &Monomial) -> i64 {
    m.valuation().unwrap_or(i64::MAX / 8)
}

fn nonzero(b: &Bindings, names: &[&str]) -> Result<()> {
    for p in names {
        if b.opt_mono(p)?.is_some_and(|m| m.is_zero()) {
            return Err(Error::ConstraintViolation(format!("{p} must be nonzero")));
        }
    }
    Ok(())
}

fn pochs(mut f: Factors, xs: &[Monomial], k: i64) -> Factors {
    for x in xs {
        f = f.poch(x, 2, k);
    }
    f
}

fn recip_pochs(mut f: Factors, xs: &[Monomial], k: i64) -> Factors {
    for x in xs {
        f = f.recip_poch(x, 2, k);
    }
    f
}

fn infs(mut f: Factors, num: &[Monomial], den: &[Monomial]) -> Factors {
    for x in num {
        f = f.poch_inf(x, 2);
    }
    for x in den {
        f = f.recip_poch_inf(x, 2);
    }
    f
}

/// Parameters of one instance of the 8psi8 transformation.
#[derive(Clone, Debug)]
pub(crate) struct T8 {
    pub m: i64,
    pub a: Monomial,
    pub alpha: Monomial,
    pub rho1: Monomial,
    pub rho2: Monomial,
    pub mu1: Monomial,
    pub mu2: Monomial,
}

impl T8 {
    fn from_bindings(b: &Bindings) -> Result<Self> {
        Ok(T8 {
            m: b.int("m")?,
            a: b.mono("a")?,
            alpha: b.mono("alpha")?,
            rho1: b.mono("rho1")?,
            rho2: b.mono("rho2")?,
            mu1: b.mono("mu1")?,
            mu2: b.mono("mu2")?,
        })
    }

    pub fn lambda(&self) -> Monomial {
        self.alpha.mul(&self.mu1).mul(&self.mu2).div(&self.a.shift_q(1))
    }

    fn prod4(&self) -> Monomial {
        self.rho1.mul(&self.rho2).mul(&self.mu1).mul(&self.mu2)
    }

    /// The well-poised numerator parameters of the left side other than
    /// the last one, which depends on `alpha`.
    fn lhs_params(&self) -> Vec<Monomial> {
        vec![self.rho1.clone(), self.rho2.clone(), self.mu1.clone(), self.mu2.clone(), self.a.shift_q(-self.m)]
    }

    /// Summand of the left 8psi8.
    pub fn lhs_term(&self, k: i64) -> Factors {
        let aq = self.a.shift_q(1);
        let xs = self.lhs_params();
        let ys: Vec<Monomial> = xs.iter().map(|x| aq.div(x)).collect();
        let f = pochs(Factors::new().well_poised(&self.a, 2, k), &xs, k);
        let f = recip_pochs(f, &ys, k);
        if self.alpha.is_zero() {
            // (X)_k (alpha/a)^k with X = a^3 q^(2+m) / (alpha rho1 rho2 mu1 mu2) as alpha -> 0
            let w = self.a.pow(2).shift_q(2 + self.m).div(&self.prod4());
            f.sign(k).q_pow(k * (k - 1) / 2).mono(&w.pow(k))
        } else {
            let x = self.a.pow(3).shift_q(2 + self.m).div(&self.alpha.mul(&self.prod4()));
            f.poch(&x, 2, k).recip_poch(&aq.div(&x), 2, k).mono(&self.alpha.div(&self.a).pow(k))
        }
    }

    /// The products in front of the right 8psi8.
    pub fn prefactor(&self) -> Factors {
        let (a, m) = (&self.a, self.m);
        let aq = a.shift_q(1);
        let num_inf = vec![aq.clone(), aq.div(&self.mu1.mul(&self.mu2))];
        let den_inf = vec![aq.div(&self.mu1), aq.div(&self.mu2)];
        let f = infs(Factors::new(), &num_inf, &den_inf);
        let f = pochs(f, &[q().div(a), aq.div(&self.rho1.mul(&self.rho2))], m);
        let f = recip_pochs(f, &[q().div(&self.rho1), q().div(&self.rho2)], m);
        if self.alpha.is_zero() {
            // the lambda-dependent factors tend to 1
            return f;
        }
        let l = self.lambda();
        let lq = l.shift_q(1);
        let f = infs(f, &[lq.div(&self.mu1), lq.div(&self.mu2)], &[self.alpha.div(a), lq]);
        let f = pochs(f, &[aq.div(&l.mul(&self.rho1)), aq.div(&l.mul(&self.rho2))], m);
        recip_pochs(f, &[q().div(&l), a.mul(&aq).div(&l.mul(&self.rho1).mul(&self.rho2))], m)
    }

    /// Summand of the right 8psi8 in base `lambda`.
    pub fn rhs_term(&self, k: i64) -> Factors {
        let (a, m) = (&self.a, self.m);
        let l = self.lambda();
        let aq = a.shift_q(1);
        let num = [
            self.mu1.clone(),
            self.mu2.clone(),
            l.mul(&self.rho1).div(a),
            l.mul(&self.rho2).div(a),
            l.shift_q(-m),
            a.shift_q(1 + m).div(&self.rho1.mul(&self.rho2)),
        ];
        let den = [
            l.shift_q(1).div(&self.mu1),
            l.shift_q(1).div(&self.mu2),
            aq.div(&self.rho1),
            aq.div(&self.rho2),
            Monomial::q(1 + m),
            l.mul(&self.rho1).mul(&self.rho2).shift_q(-m).div(a),
        ];
        let z = aq.div(&self.mu1.mul(&self.mu2));
        let f = pochs(Factors::new().well_poised(&l, 2, k), &num, k);
        recip_pochs(f, &den, k).mono(&z.pow(k))
    }

    pub fn lhs(&self, order: i64, opts: &SumOptions) -> Result<(TSeries, usize)> {
        let t = self.clone();
        let r = bilateral(move |k| t.lhs_term(k), order, opts)?;
        Ok((r.value, r.terms))
    }

    pub fn rhs_sum(&self, order: i64, opts: &SumOptions) -> Result<(TSeries, usize)> {
        let t = self.clone();
        let r = bilateral(move |k| t.rhs_term(k), order, opts)?;
        Ok((r.value, r.terms))
    }

    pub fn rhs(&self, order: i64, opts: &SumOptions) -> Result<(TSeries, usize)> {
        let mut terms = 0;
        let s = times(
            &self.prefactor(),
            |cap| {
                let (s, n) = self.rhs_sum(cap, opts)?;
                terms = n;
                Ok(s)
            },
            order,
        )?;
        Ok((s, terms))
    }
}

pub(super) fn check_t8psi8(b: &Bindings) -> Result<()> {
    nonzero(b, &["a", "rho1", "rho2", "mu1", "mu2"])?;
    if b.opt_mono("a")?.is_some_and(|a| a.coeff == rat(1) && a.texp % 2 == 0) {
        return Err(Error::ConstraintViolation("a must not be an integral power of q".into()));
    }
    if let (Some(a), Some(alpha)) = (b.opt_mono("a")?, b.opt_mono("alpha")?) {
        if !alpha.is_zero() && val(&alpha) - val(&a) < 1 {
            return Err(Error::ConstraintViolation("need val(alpha/a) >= 1".into()));
        }
    }
    if let (Some(a), Some(m1), Some(m2)) = (b.opt_mono("a")?, b.opt_mono("mu1")?, b.opt_mono("mu2")?) {
        if val(&a) + 2 - val(&m1) - val(&m2) < 1 {
            return Err(Error::ConstraintViolation("need val(aq/(mu1 mu2)) >= 1".into()));
        }
    }
    Ok(())
}

pub(super) fn t8psi8(b: &Bindings, order: i64, opts: &SumOptions) -> Result<Built> {
    let t = T8::from_bindings(b)?;
    let (lhs, n1) = t.lhs(order, opts)?;
    let (rhs, n2) = t.rhs(order, opts)?;
    Ok(Built { lhs: series(lhs), rhs: series(rhs), terms: n1 + n2, derived: vec![("lambda".into(), t.lambda())] })
}

pub(super) fn check_r1psi1(b: &Bindings) -> Result<()> {
    nonzero(b, &["b", "c", "z"])?;
    if let Some(z) = b.opt_mono("z")? {
        if val(&z) < 1 {
            return Err(Error::ConstraintViolation("need val(z) >= 1".into()));
        }
        if let (Some(bb), Some(c)) = (b.opt_mono("b")?, b.opt_mono("c")?) {
            if val(&c) - val(&bb) < val(&z) + 1 {
                return Err(Error::ConstraintViolation("need val(c/b) >= val(z) + 1".into()));
            }
        }
    }
    Ok(())
}

pub(crate) fn r1psi1_sum(b: &Monomial, c: &Monomial, z: &Monomial, order: i64, opts: &SumOptions) -> Result<(TSeries, usize)> {
    let (b, c, z) = (b.clone(), c.clone(), z.clone());
    let r = bilateral(move |n| Factors::new().poch(&b, 2, n).recip_poch(&c, 2, n).mono(&z.pow(n)), order, opts)?;
    Ok((r.value, r.terms))
}

pub(crate) fn r1psi1_product(b: &Monomial, c: &Monomial, z: &Monomial) -> Factors {
    let bz = b.mul(z);
    infs(
        Factors::new(),
        &[q(), c.div(b), bz.clone(), q().div(&bz)],
        &[c.clone(), q().div(b), z.clone(), c.div(&bz)],
    )
}

pub(super) fn r1psi1(bd: &Bindings, order: i64, opts: &SumOptions) -> Result<Built> {
    let (b, c, z) = (bd.mono("b")?, bd.mono("c")?, bd.mono("z")?);
    let (lhs, terms) = r1psi1_sum(&b, &c, &z, order, opts)?;
    let rhs = r1psi1_product(&b, &c, &z).eval(order)?;
    Ok(Built { lhs: series(lhs), rhs: series(rhs), terms, derived: vec![] })
}

pub(super) fn check_b6psi6(b: &Bindings) -> Result<()> {
    nonzero(b, &["a", "b", "c", "d", "e"])?;
    let ms: Result<Vec<Option<Monomial>>> = ["a", "b", "c", "d", "e"].iter().map(|p| b.opt_mono(p)).collect();
    if let [Some(a), Some(bb), Some(c), Some(d), Some(e)] = &ms?[..] {
        if 2 * val(a) + 2 - val(bb) - val(c) - val(d) - val(e) < 1 {
            return Err(Error::ConstraintViolation("need val(a^2 q/(bcde)) >= 1".into()));
        }
    }
    Ok(())
}

pub(crate) struct B6 {
    pub a: Monomial,
    pub params: [Monomial; 4],
}

impl B6 {
    pub fn sum(&self, order: i64, opts: &SumOptions) -> Result<(TSeries, usize)> {
        let a = self.a.clone();
        let aq = a.shift_q(1);
        let xs = self.params.to_vec();
        let ys: Vec<Monomial> = xs.iter().map(|x| aq.div(x)).collect();
        let z = a.mul(&aq).div(&xs.iter().fold(Monomial::one(), |p, x| p.mul(x)));
        let r = bilateral(
            move |k| recip_pochs(pochs(Factors::new().well_poised(&a, 2, k), &xs, k), &ys, k).mono(&z.pow(k)),
            order,
            opts,
        )?;
        Ok((r.value, r.terms))
    }

    pub fn product(&self) -> Factors {
        let a = &self.a;
        let aq = a.shift_q(1);
        let [b, c, d, e] = &self.params;
        let num = [
            q(),
            aq.clone(),
            q().div(a),
            aq.div(&b.mul(c)),
            aq.div(&b.mul(d)),
            aq.div(&b.mul(e)),
            aq.div(&c.mul(d)),
            aq.div(&c.mul(e)),
            aq.div(&d.mul(e)),
        ];
        let den = [
            q().div(b),
            q().div(c),
            q().div(d),
            q().div(e),
            aq.div(b),
            aq.div(c),
            aq.div(d),
            aq.div(e),
            a.mul(&aq).div(&b.mul(c).mul(d).mul(e)),
        ];
        infs(Factors::new(), &num, &den)
    }
}

pub(super) fn b6psi6(bd: &Bindings, order: i64, opts: &SumOptions) -> Result<Built> {
    let b6 = B6 { a: bd.mono("a")?, params: [bd.mono("b")?, bd.mono("c")?, bd.mono("d")?, bd.mono("e")?] };
    let (lhs, terms) = b6.sum(order, opts)?;
    let rhs = b6.product().eval(order)?;
    Ok(Built { lhs: series(lhs), rhs: series(rhs), terms, derived: vec![] })
}

pub(super) fn check_ext63(b: &Bindings) -> Result<()> {
    nonzero(b, &["beta", "gamma", "rho"])?;
    if b.opt_mono("beta")?.is_some_and(|beta| 2 - 2 * val(&beta) < 1) {
        return Err(Error::ConstraintViolation("need val(q/beta^2) >= 1".into()));
    }
    Ok(())
}

pub(super) fn ext63(bd: &Bindings, order: i64, opts: &SumOptions) -> Result<Built> {
    let m = bd.int("m")?;
    let (beta, gamma, rho) = (bd.mono("beta")?, bd.mono("gamma")?, bd.mono("rho")?);
    let qm1 = Monomial::q(1 + m);
    let qb = q().div(&beta);

    let lhs_pre = Factors::new().poch(&beta, 2, m).recip_poch(&qb, 2, m);
    let (g, r, b) = (gamma.clone(), rho.clone(), beta.clone());
    let num = [g.recip(), r.clone(), g.mul(&qm1).div(&b.mul(&r))];
    let den = [g.clone(), qm1.div(&r), b.mul(&r).div(&g)];
    let (bqm, qmb) = (b.shift_q(m), qm1.div(&b));
    let zz = qb.clone();
    let mut lhs_terms = 0;
    let lhs = times(
        &lhs_pre,
        |cap| {
            let s = bilateral(
                move |n| {
                    recip_pochs(pochs(Factors::new(), &num, n), &den, n)
                        .poch(&bqm, 2, 2 * n)
                        .recip_poch(&qmb, 2, 2 * n)
                        .mono(&zz.pow(n))
                },
                cap,
                opts,
            )?;
            lhs_terms = s.terms;
            Ok(s.value)
        },
        order,
    )?;

    let z = qb.div(&beta);
    let pre = infs(Factors::new(), &[q(), z.clone()], &[qb.clone(), qb.clone()]);
    let mut rhs_terms = 0;
    let rhs = times(
        &pre,
        |cap| {
            let mut acc = TSeries::zero(cap);
            for s in 0..=m / 2 {
                let coef = Factors::new()
                    .mono(&beta.pow(3).shift_q(-1).pow(s))
                    .poch(&q().div(&gamma), 2, s)
                    .poch(&gamma.shift_q(1).div(&beta.mul(&rho)), 2, s)
                    .poch(&rho.shift_q(-m), 2, s)
                    .recip_poch(&q(), 2, s)
                    .recip_poch(&q().div(&rho), 2, s)
                    .recip_poch(&beta.mul(&rho).shift_q(-m).div(&gamma), 2, s)
                    .binomial(&gamma.shift_q(m - 2 * s))
                    .recip_binomial(&gamma)
                    .poch(&beta, 2, m - 2 * s)
                    .poch(&gamma.pow(2), 2, m - 2 * s)
                    .recip_poch(&q(), 2, m - 2 * s)
                    .recip_poch(&gamma.shift_q(1), 2, m - 2 * s)
                    .poch(&q(), 2, m - s)
                    .recip_poch(&gamma.shift_q(1), 2, m - s);
                let num = [
                    beta.div(&gamma),
                    beta.shift_q(m - 2 * s),
                    rho.mul(&beta).shift_q(-s),
                    gamma.shift_q(1 + m - s).div(&rho),
                ];
                let den = [
                    q(),
                    gamma.shift_q(1 + m - 2 * s),
                    beta.mul(&rho).shift_q(-s).div(&gamma),
                    Monomial::q(1 + m - s).div(&rho),
                ];
                let zs = z.clone();
                let term = times(
                    &coef,
                    |c| {
                        let phi = unilateral(0, None, move |j| {
                            recip_pochs(pochs(Factors::new(), &num, j), &den, j).mono(&zs.pow(j))
                        })
                        .eval(c, opts)?;
                        rhs_terms += phi.terms;
                        Ok(phi.value)
                    },
                    cap,
                )?;
                acc = acc.add(&term);
            }
            Ok(acc)
        },
        order,
    )?;
    Ok(Built { lhs: series(lhs), rhs: series(rhs), terms: lhs_terms + rhs_terms, derived: vec![] })
}

//! Brute-force checks that share no code with the q-function layer:
//! partition counting, the pentagonal number expansion, and resummation
//! of term generators under altered windows.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::corpus::{MultiSum, SumOptions};
use crate::error::Result;
use crate::product::Factors;
use crate::rational::rat;
use crate::series::TSeries;

pub use crate::corpus::{resummation_check, ResummationReport};

/// Which partitions to count: parts drawn from an allowed set, with an
/// optional minimum difference between neighbouring parts.
pub struct PartitionSpec {
    allowed: Box<dyn Fn(u64) -> bool + Send + Sync>,
    min_difference: u64,
}

impl PartitionSpec {
    pub fn new<F: Fn(u64) -> bool + Send + Sync + 'static>(allowed: F) -> Self {
        PartitionSpec { allowed: Box::new(allowed), min_difference: 0 }
    }

    pub fn all() -> Self {
        Self::new(|_| true)
    }

    pub fn none() -> Self {
        Self::new(|_| false)
    }

    /// Parts congruent to one of `residues` modulo `modulus`.
    pub fn residues(modulus: u64, residues: &[u64]) -> Self {
        let rs: Vec<u64> = residues.iter().map(|r| r % modulus).collect();
        Self::new(move |p| rs.contains(&(p % modulus)))
    }

    /// Neighbouring parts must differ by at least `d`; `d = 1` means distinct parts.
    pub fn with_difference(mut self, d: u64) -> Self {
        self.min_difference = d;
        self
    }

    pub fn allows(&self, part: u64) -> bool {
        part > 0 && (self.allowed)(part)
    }

    pub fn min_difference(&self) -> u64 {
        self.min_difference
    }
}

/// Number of partitions of `n` for `n = 0..=n_max`.
pub fn count_partitions(spec: &PartitionSpec, n_max: usize) -> Vec<BigUint> {
    let d = spec.min_difference as usize;
    // by_top[n][p]: partitions of n whose largest part is p
    // upto[n][p]: partitions of n with every part at most p (empty one included at n = 0)
    let mut by_top = vec![vec![BigUint::zero(); n_max + 1]; n_max + 1];
    let mut upto = vec![vec![BigUint::zero(); n_max + 1]; n_max + 1];
    for p in 0..=n_max {
        upto[0][p] = BigUint::from(1u8);
    }
    for n in 1..=n_max {
        for p in 1..=n {
            if spec.allows(p as u64) {
                let rest = n - p;
                // the remaining parts are at most p - d
                by_top[n][p] = match p.checked_sub(d) {
                    Some(cap) => upto[rest][cap.min(rest)].clone(),
                    None => BigUint::from(u8::from(rest == 0)),
                };
            }
        }
        for p in 1..=n_max {
            let add = if p <= n { by_top[n][p].clone() } else { BigUint::zero() };
            upto[n][p] = &upto[n][p - 1] + add;
        }
    }
    (0..=n_max).map(|n| upto[n][n].clone()).collect()
}

/// `sum_{j in Z} (-1)^j q^(j(3j-1)/2)`, truncated at `order` in t-units.
pub fn pentagonal_expansion(order: i64) -> TSeries {
    let mut terms = Vec::new();
    let mut j: i64 = 0;
    loop {
        let mut any = false;
        for s in if j == 0 { vec![0] } else { vec![j, -j] } {
            let e = s * (3 * s - 1);
            if e <= order {
                terms.push((e, rat(if s % 2 == 0 { 1 } else { -1 })));
                any = true;
            }
        }
        if !any {
            break;
        }
        j += 1;
    }
    TSeries::from_terms(terms, order)
}

/// Sums `term(n)` for `n >= 0` plainly, with doubled windows and in
/// reverse, and reports whether all three agree up to `order`.
pub fn resummation_check_terms<T>(term: T, order: i64) -> ResummationReport
where
    T: Fn(i64) -> Factors + Sync + Clone,
{
    let run = || -> Result<Option<String>> {
        let t = term.clone();
        let sum = MultiSum::new(vec![0], vec![None], move |_, n| t(n).valuation(), |p| term(p[0]));
        let base = sum.eval(order, &SumOptions::default())?.value;
        for opts in [
            SumOptions { doubled: true, reversed: false },
            SumOptions { doubled: false, reversed: true },
            SumOptions { doubled: true, reversed: true },
        ] {
            let other = sum.eval(order, &opts)?.value.truncate(order);
            if let Some(e) = base.first_mismatch(&other) {
                return Ok(Some(format!("coefficients differ at t^{e} under {opts:?}")));
            }
        }
        Ok(None)
    };
    match run() {
        Ok(None) => ResummationReport { identical: true, detail: None },
        Ok(Some(d)) => ResummationReport { identical: false, detail: Some(d) },
        Err(e) => ResummationReport { identical: false, detail: Some(e.to_string()) },
    }
}

/// A term generator whose valuations rise past `order`, stay flat for a
/// few indices and then drop back below it.
pub fn adversarial_term(order: i64) -> impl Fn(i64) -> Factors + Sync + Clone {
    move |n| match n {
        0 => Factors::new(),
        1..=5 => Factors::new().t_pow(order + 1),
        6 => Factors::new().t_pow(1).scalar(&rat(3)),
        _ => Factors::new().t_pow(order + n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::Monomial;

    /// Partitions of `n` as nonincreasing part lists, by plain recursion.
    fn enumerate(n: u64, max: u64, out: &mut Vec<Vec<u64>>, cur: &mut Vec<u64>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=n.min(max)).rev() {
            cur.push(p);
            enumerate(n - p, p, out, cur);
            cur.pop();
        }
    }

    fn brute(spec: &PartitionSpec, n: u64) -> usize {
        let mut all = Vec::new();
        enumerate(n, n, &mut all, &mut Vec::new());
        all.iter()
            .filter(|ps| ps.iter().all(|&p| spec.allows(p)))
            .filter(|ps| ps.windows(2).all(|w| w[0] - w[1] >= spec.min_difference()))
            .count()
    }

    #[test]
    fn small_counts() {
        let rr = PartitionSpec::residues(5, &[1, 4]);
        assert_eq!(count_partitions(&rr, 4)[4], BigUint::from(2u8));
        assert_eq!(count_partitions(&PartitionSpec::all(), 5)[5], BigUint::from(7u8));
        assert_eq!(count_partitions(&PartitionSpec::none(), 1)[1], BigUint::zero());
        assert_eq!(count_partitions(&PartitionSpec::none(), 1)[0], BigUint::from(1u8));
    }

    #[test]
    fn dp_matches_enumeration() {
        let specs = [
            PartitionSpec::all(),
            PartitionSpec::residues(5, &[1, 4]),
            PartitionSpec::residues(5, &[2, 3]),
            PartitionSpec::all().with_difference(1),
            PartitionSpec::all().with_difference(2),
            PartitionSpec::new(|p| p >= 2).with_difference(2),
            PartitionSpec::new(|p| p % 2 == 1).with_difference(3),
        ];
        for spec in &specs {
            let dp = count_partitions(spec, 14);
            for n in 0..=14 {
                assert_eq!(dp[n as usize], BigUint::from(brute(spec, n)), "n = {n}");
            }
        }
    }

    #[test]
    fn rogers_ramanujan_both_ways() {
        // difference-2 partitions against congruence partitions, an identity
        // that needs no series code at all
        for (lowest, res) in [(1, [1, 4]), (2, [2, 3])] {
            let a = count_partitions(&PartitionSpec::new(move |p| p >= lowest).with_difference(2), 40);
            let b = count_partitions(&PartitionSpec::residues(5, &res), 40);
            assert_eq!(a, b);
        }
    }

    #[test]
    fn pentagonal() {
        let p = pentagonal_expansion(30);
        let want: Vec<(i64, i64)> = vec![(0, 1), (2, -1), (4, -1), (10, 1), (14, 1), (24, -1), (30, -1)];
        let got: Vec<(i64, i64)> = p.terms().map(|(e, c)| (e, if *c == rat(1) { 1 } else { -1 })).collect();
        assert_eq!(got, want);
        assert_eq!(pentagonal_expansion(0), TSeries::from_terms([(0, rat(1))], 0));
        let euler = Factors::new().poch_inf(&Monomial::q(1), 2).eval(200).unwrap();
        assert_eq!(pentagonal_expansion(200), euler);
    }

    #[test]
    fn adversarial_generator_is_flagged() {
        let r = resummation_check_terms(adversarial_term(20), 20);
        assert!(!r.identical);
        let fine = resummation_check_terms(|n| Factors::new().q_pow(n * n).recip_poch(&Monomial::q(1), 2, n), 40);
        assert!(fine.identical, "{:?}", fine.detail);
    }
}

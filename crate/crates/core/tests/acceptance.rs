//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! fails if any criterion fails. All comparisons are exact.

use std::process::ExitCode;
use std::time::Instant;

use baileykit_core::bailey::{apply_lemma, apply_s1, apply_s2, change_base, check_pair, shifted_pair, BaileyPair};
use baileykit_core::corpus::{
    build_sides, corrupted_kmrr, degeneration_suite, resummation_check, verify_all, IdentityInstance, Side, Status,
    SumOptions, Value,
};
use baileykit_core::oracle::{count_partitions, PartitionSpec};
use baileykit_core::par;
use baileykit_core::rational::{rat, ratio};
use baileykit_core::wp::{check_wp_pair, wp_inversion_check, wp_lemma_first, wp_shifted_pair, wp_unit_pair, WpFamily};
use baileykit_core::{Monomial, Param, Rational, Result};

fn int(n: i64) -> Value {
    Value::Int(n)
}

fn mono(c: Rational, t: i64) -> Value {
    Value::Mono(Monomial::new(c, t))
}

fn inst(id: &str, b: &[(&str, Value)], order: i64) -> IdentityInstance {
    IdentityInstance::new(id, b, order)
}

fn grid(id: &str, ks: &[i64], ms: impl Fn(i64) -> Vec<i64>, order: i64) -> Vec<IdentityInstance> {
    let mut out = Vec::new();
    for &k in ks {
        for m in ms(k) {
            out.push(inst(id, &[("k", int(k)), ("m", int(m))], order));
        }
    }
    out
}

fn m_range(id: &str, ms: std::ops::RangeInclusive<i64>, order: i64) -> Vec<IdentityInstance> {
    ms.map(|m| inst(id, &[("m", int(m))], order)).collect()
}

struct Run {
    failures: Vec<String>,
    /// Instances from corpus criteria that passed, for the robustness check.
    passed: Vec<IdentityInstance>,
}

impl Run {
    fn report(&mut self, n: u32, what: &str, started: Instant, problems: Vec<String>) {
        let secs = started.elapsed().as_secs_f64();
        if problems.is_empty() {
            println!("PASS {n:>2} {what} ({secs:.1} s)");
        } else {
            println!("FAIL {n:>2} {what} ({secs:.1} s)");
            for p in &problems {
                println!("        {p}");
            }
            self.failures.push(format!("criterion {n}"));
        }
    }

    /// Verifies a batch; collects the passing instances and returns the
    /// summary lines of the others.
    fn verify(&mut self, insts: Vec<IdentityInstance>) -> Vec<String> {
        let reports = verify_all(&insts);
        let mut bad = Vec::new();
        for (i, r) in insts.into_iter().zip(reports) {
            if r.status == Status::Pass {
                self.passed.push(i);
            } else {
                bad.push(r.summary_line());
            }
        }
        bad
    }
}

fn series(s: Side) -> baileykit_core::TSeries {
    match s {
        Side::Series(s) => s,
        Side::Bivariate(_) => panic!("expected a series"),
    }
}

fn polynomial_identities(run: &mut Run) {
    let t = Instant::now();
    let mut insts = m_range("K1MRR", 0..=40, 40);
    insts.extend(m_range("K1MGG_EVEN", 0..=30, 40));
    insts.extend(m_range("K1MGG_ODD", 0..=30, 40));
    let mut bad = run.verify(insts.clone());
    // the zero branches really are zero on both sides
    for i in insts {
        let m = i.bindings.int("m").unwrap();
        let zero = match i.id.as_str() {
            "K1MRR" => m % 3 == 2,
            "K1MGG_ODD" => m % 2 == 1,
            _ => false,
        };
        if zero {
            let b = build_sides(&i, &SumOptions::default()).unwrap();
            if !series(b.lhs).is_zero() || !series(b.rhs).is_zero() {
                bad.push(format!("{} is not identically zero", i.to_line()));
            }
        }
    }
    run.report(1, "K1MRR m = 0..40, K1MGG_EVEN and K1MGG_ODD m = 0..30, zero branches included", t, bad);
}

fn andrews_gordon(run: &mut Run) {
    let t = Instant::now();
    let order = 120;
    let mut bad = run.verify(grid("KMRR", &[1, 2, 3], |_| (0..=6).collect(), order));
    bad.extend(run.verify(vec![inst("RR1", &[], order), inst("RR2", &[], order)]));

    let sides = |i: IdentityInstance| build_sides(&i, &SumOptions::default()).unwrap();
    for (m, rr) in [(0, "RR1"), (1, "RR2")] {
        let k = sides(inst("KMRR", &[("k", int(2)), ("m", int(m))], order));
        let r = sides(inst(rr, &[], order));
        if series(k.lhs) != series(r.lhs) || series(k.rhs) != series(r.rhs) {
            bad.push(format!("KMRR k=2 m={m} differs from {rr}"));
        }
    }

    for (rr, res) in [("RR1", [1, 4]), ("RR2", [2, 3])] {
        let counts = count_partitions(&PartitionSpec::residues(5, &res), 60);
        let rhs = series(sides(inst(rr, &[], order)).rhs);
        for e in 0..=order {
            let want = if e % 2 == 0 { Rational::from_integer(counts[(e / 2) as usize].clone().into()) } else { rat(0) };
            if rhs.coeff(e) != want {
                bad.push(format!("{rr} coefficient of t^{e} is {} but the partition count is {want}", rhs.coeff(e)));
                break;
            }
        }
    }
    run.report(2, "KMRR (k, m) in {1,2,3} x {0..6} and RR1/RR2 against partition counts, q-order 60", t, bad);
}

fn gollnitz_gordon(run: &mut Run) {
    let t = Instant::now();
    let bad = run.verify(grid("KMGG", &[1, 2], |_| (0..=6).collect(), 120));
    run.report(3, "KMGG (k, m) in {1,2} x {0..6}, t-order 120", t, bad);
}

fn m_versions(run: &mut Run) {
    let t = Instant::now();
    let order = 120;
    let mut insts = Vec::new();
    for id in ["MRR", "MGG", "GIS"] {
        insts.extend(m_range(id, 0..=8, order));
    }
    for id in ["KMRR_INV", "KMRR_CHANGE", "KMGG_INV"] {
        insts.extend(grid(id, &[1, 2, 3], |_| (0..=5).collect(), order));
    }
    insts.extend(grid("K2MRR", &[2, 3, 4], |k| (0..=2 * k).collect(), order));
    insts.extend(grid("LHS_FULL_AG", &[2, 3, 4], |k| (1..k).collect(), order));
    let bad = run.verify(insts);
    run.report(4, "MRR, MGG, GIS, KMRR_INV, K2MRR, LHS_FULL_AG, KMRR_CHANGE, KMGG_INV grids, q-order 60", t, bad);
}

fn relation_problems(label: String, p: Result<BaileyPair>, order: i64) -> Option<String> {
    match p.and_then(|p| check_pair(&p, -6, 8, order)) {
        Ok(r) if r.passed() => None,
        Ok(r) => Some(format!("{label}: {r:?}")),
        Err(e) => Some(format!("{label}: {e}")),
    }
}

fn bailey_relation(run: &mut Run) {
    let t = Instant::now();
    let order = 80;
    let cq = |c: i64, e: i64| -> Param { Monomial::cq(rat(c), e).into() };
    let mut jobs: Vec<(i64, usize)> = Vec::new();
    for m in 0..=8 {
        for j in 0..8 {
            jobs.push((m, j));
        }
    }
    let bad: Vec<String> = par::map(&jobs, |&(m, j)| {
        let base = shifted_pair(m);
        let (label, p) = match j {
            0 => ("shifted pair", base),
            1 => ("lemma (2q, 3q)", base.and_then(|p| apply_lemma(&p, cq(2, 1), cq(3, 1)))),
            2 => ("lemma (inf, inf)", base.and_then(|p| apply_lemma(&p, Param::Infinity, Param::Infinity))),
            3 => ("lemma (2q, inf)", base.and_then(|p| apply_lemma(&p, cq(2, 1), Param::Infinity))),
            4 => ("s1", base.and_then(|p| apply_s1(&p))),
            5 => ("s2", base.and_then(|p| apply_s2(&p))),
            6 => ("base change b = inf", base.and_then(|p| change_base(&p.scale_base(2), Param::Infinity))),
            _ => ("base change b = 2q", base.and_then(|p| change_base(&p.scale_base(2), cq(2, 1)))),
        };
        relation_problems(format!("m = {m}, {label}"), p, order)
    })
    .into_iter()
    .flatten()
    .collect();
    run.report(5, "Bailey relation for shifted pairs m = 0..8 and every transform, n in [-6, 8], q-order 40", t, bad);
}

fn wp_suite(run: &mut Run) {
    let t = Instant::now();
    let order = 60;
    let alphas = [Monomial::cq(rat(2), 2), Monomial::cq(rat(3), 3), Monomial::cq(ratio(5, 2), 4)];
    let a = Monomial::cq(rat(5), 1);
    let mut jobs = Vec::new();
    for m in 0..=3 {
        for al in &alphas {
            jobs.push((m, al.clone()));
        }
    }
    let mut bad: Vec<String> = par::map(&jobs, |(m, al)| {
        let mut out = Vec::new();
        for (label, p) in [("unit", wp_unit_pair(*m, a.clone(), al.clone())), ("shifted", wp_shifted_pair(*m, al.clone()))] {
            let tag = format!("{label} pair m = {m}, alpha = {al}");
            let res = p.and_then(|p| Ok((check_wp_pair(&p, -4, 4, order)?, wp_inversion_check(&p, -4, 4, order)?)));
            match res {
                Ok((rel, inv)) => {
                    if !rel.passed() {
                        out.push(format!("{tag}: relation {rel:?}"));
                    }
                    if !inv.passed() {
                        out.push(format!("{tag}: inversion {inv:?}"));
                    }
                }
                Err(e) => out.push(format!("{tag}: {e}")),
            }
        }
        out
    })
    .into_iter()
    .flatten()
    .collect();

    for m in 0..=3 {
        let (r1, r2) = (Monomial::cq(rat(2), 1), Monomial::new(rat(3), 3));
        let res = (|| -> Result<bool> {
            let w = wp_lemma_first(&WpFamily::shifted(m), Monomial::zero(), r1.clone(), r2.clone())?;
            let b = apply_lemma(&shifted_pair(m)?, r1.clone().into(), r2.clone().into())?;
            for n in -4..=4 {
                if w.alpha(n, order)? != b.alpha(n, order)? || w.beta(n, order)? != b.beta(n, order)? {
                    return Ok(false);
                }
            }
            Ok(true)
        })();
        if !matches!(res, Ok(true)) {
            bad.push(format!("first construction at alpha = 0, m = {m}: {res:?}"));
        }
        let res = (|| -> Result<bool> {
            let w = wp_shifted_pair(m, Monomial::q(50))?;
            let s = shifted_pair(m)?;
            for n in -4..=4 {
                if w.alpha(n, 80)? != s.alpha(n, 80)? || w.beta(n, 80)? != s.beta(n, 80)? {
                    return Ok(false);
                }
            }
            Ok(true)
        })();
        if !matches!(res, Ok(true)) {
            bad.push(format!("alpha = q^50 against the shifted pair, m = {m}: {res:?}"));
        }
    }
    run.report(6, "WP pairs, inversion, alpha = 0 reduction and alpha = q^50 limit, q-order 30/40", t, bad);
}

/// The three recorded 8psi8 assignments `(a, alpha, rho1, rho2, mu1, mu2)`.
fn t8_assignments() -> Vec<[Value; 6]> {
    vec![
        [mono(rat(7), 5), mono(rat(3), 6), mono(rat(2), 2), mono(rat(3), 2), mono(rat(2), 4), mono(rat(5), 2)],
        [mono(rat(2), 6), int(0), mono(rat(2), 2), mono(rat(3), 1), mono(rat(2), 2), mono(rat(5), 1)],
        [mono(rat(2), 4), mono(rat(5), 5), mono(ratio(1, 2), 0), mono(rat(3), 2), mono(rat(3), 1), mono(rat(2), 1)],
    ]
}

fn wp_identities(run: &mut Run) {
    let t = Instant::now();
    let mut insts = Vec::new();
    for p in t8_assignments() {
        for m in 0..=2 {
            let mut b = vec![("m", int(m))];
            b.extend(["a", "alpha", "rho1", "rho2", "mu1", "mu2"].into_iter().zip(p.iter().cloned()));
            insts.push(inst("T8PSI8", &b, 80));
        }
    }
    for (b, c, z) in [
        (mono(rat(2), 0), mono(rat(2), 4), mono(rat(1), 2)),
        (mono(ratio(1, 3), 1), mono(rat(5), 5), mono(rat(-2), 1)),
        (mono(rat(3), 2), mono(ratio(-1, 2), 6), mono(rat(7), 2)),
    ] {
        insts.push(inst("R1PSI1", &[("b", b), ("c", c), ("z", z)], 100));
    }
    for p in [
        [mono(rat(2), 4), mono(rat(3), 2), mono(rat(5), 2), mono(rat(7), 2), mono(ratio(1, 2), 2)],
        [mono(rat(2), 4), mono(rat(2), 2), mono(rat(3), 2), mono(rat(5), 1), mono(rat(7), 2)],
        [mono(ratio(3, 2), 2), mono(rat(-1), 1), mono(rat(2), 1), mono(rat(5), 1), mono(rat(3), 1)],
    ] {
        let b: Vec<(&str, Value)> = ["a", "b", "c", "d", "e"].into_iter().zip(p).collect();
        insts.push(inst("B6PSI6", &b, 100));
    }
    let mut bad = run.verify(insts);
    match degeneration_suite() {
        Ok(checks) => {
            for c in checks.into_iter().filter(|c| !c.passed) {
                bad.push(format!("{c:?}"));
            }
        }
        Err(e) => bad.push(format!("degeneration suite: {e}")),
    }
    run.report(7, "T8PSI8 three assignments m = 0..2, degenerations to 1psi1 and 6psi6, R1PSI1 and B6PSI6 directly", t, bad);
}

fn extension(run: &mut Run) {
    let t = Instant::now();
    let mut insts = Vec::new();
    for (beta, gamma, rho) in [
        (mono(rat(2), 0), mono(rat(3), 0), mono(rat(5), 2)),
        (mono(ratio(1, 2), 0), mono(rat(5), 2), mono(rat(3), 4)),
        (mono(rat(3), -1), mono(ratio(2, 3), 1), mono(rat(-1), 2)),
    ] {
        for m in 0..=4 {
            insts.push(inst("EXT63", &[("m", int(m)), ("beta", beta.clone()), ("gamma", gamma.clone()), ("rho", rho.clone())], 80));
        }
    }
    let bad = run.verify(insts);
    run.report(8, "EXT63 m = 0..4 for three assignments, q-order 40", t, bad);
}

fn connection(run: &mut Run) {
    let t = Instant::now();
    let mut insts = Vec::new();
    for (beta, c) in [
        (mono(rat(2), 2), mono(rat(3), 2)),
        (mono(rat(3), 4), mono(rat(2), 2)),
        (mono(rat(2), 2), mono(rat(2), 2)),
    ] {
        for n in 0..=8 {
            insts.push(inst("QULTRA_CONN", &[("n", int(n)), ("beta", beta.clone()), ("c", c.clone())], 80));
        }
    }
    let bad = run.verify(insts);
    run.report(9, "QULTRA_CONN n = 0..8 for three (beta, c), exact in x and q to q-order 40", t, bad);
}

fn robustness(run: &mut Run) {
    let t = Instant::now();
    let passed = std::mem::take(&mut run.passed);
    let mut bad: Vec<String> = par::map(&passed, |i| {
        let r = resummation_check(i);
        (!r.identical).then(|| format!("{}: {}", i.to_line(), r.detail.unwrap_or_default()))
    })
    .into_iter()
    .flatten()
    .collect();
    let control = corrupted_kmrr(2, 1, 60);
    if control.status != Status::Fail || control.first_mismatch_texp.is_none() {
        bad.push(format!("corrupted control did not fail: {}", control.summary_line()));
    }
    let what = format!("resummation of all {} passing instances; corrupted KMRR control fails", passed.len());
    run.report(10, &what, t, bad);
}

fn main() -> ExitCode {
    let mut run = Run { failures: Vec::new(), passed: Vec::new() };
    polynomial_identities(&mut run);
    andrews_gordon(&mut run);
    gollnitz_gordon(&mut run);
    m_versions(&mut run);
    bailey_relation(&mut run);
    wp_suite(&mut run);
    wp_identities(&mut run);
    extension(&mut run);
    connection(&mut run);
    robustness(&mut run);
    if run.failures.is_empty() {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed {}", run.failures.join(", "));
        ExitCode::FAILURE
    }
}

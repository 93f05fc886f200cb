//! Acceptance gate: one PASS/FAIL line per criterion, tolerances pinned below.
//!
//! Run with `cargo test -p bispec-core --test acceptance`. The process exits
//! nonzero when any criterion fails, except those listed in
//! `KNOWN_UNATTAINABLE`, which still print FAIL together with the reason. A
//! listed criterion that starts passing is itself an error.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use bispec_core::adcond::run_ad_suite;
use bispec_core::bispectral::{
    builtin_recursion, check_recursion_poly, check_recursion_series, in_kernel_span, series_kernel_oracle,
    solve_free_params, two_gap_expected_constraints,
};
use bispec_core::diffop::{intertwine_check, DiffOperator};
use bispec_core::families::{
    darboux_factors, eigen_poly, eigen_residual_exponent, family_operator, gauge_weight, hermite_bundle_member,
    intertwiner_s, intertwiner_t, psi, series_basis, shifted_operator, FamilyId,
};
use bispec_core::hyp::{check_identity, HypIdentity};
use bispec_core::parallel::Execution;
use bispec_core::poly::Polynomial;
use bispec_core::ratfun::RationalFunction;
use bispec_core::rational::int;
use bispec_core::rng::Lcg;
use bispec_core::verify::{run_section, verify, Suite, VerifyConfig, ALGEBRA_INSTANCES};

const FACTORIZATION_BUDGET: Duration = Duration::from_millis(10);
const INTERTWINE_BUDGET: Duration = Duration::from_millis(50);
const EIGEN_BUDGET: Duration = Duration::from_secs(5);
const ADCOND_BUDGET: Duration = Duration::from_secs(1);
const VERIFY_ALL_BUDGET: Duration = Duration::from_secs(60);

const EIGEN_N_MAX: usize = 40;
const POLY_RECURSION_N: std::ops::RangeInclusive<usize> = 1..=40;
const PSI_ORDER: usize = 60;
const PSI_SLACK: i64 = 2;
const PSI_N: std::ops::RangeInclusive<usize> = 1..=20;
const SEEDED_PAIRS: usize = 3;
const SERIES_EIGEN_N_MAX: usize = 20;
const SERIES_ORDER: usize = 40;
const ORACLE_N_MAX: usize = 12;
const ORACLE_TRUNC: usize = 30;
const PARAMS_ORDER: usize = 40;
const HYP_N_MAX: usize = 12;
const HYP_MIN_ORDER: i64 = 20;
const HYP_ORDER: usize = 24;
const MIN_ALGEBRA_INSTANCES: usize = 200;

/// Criteria that cannot hold as stated, with the exact finding.
const KNOWN_UNATTAINABLE: &[(u32, &str)] = &[(
    7,
    "the two-gap window {3,4,5} forces rank 6, not 3: at n = 3 every recursion coefficient vanishes, \
     so the relation reads theta*phi_3 = 0 and kills alpha~1 and beta~3; the stated rank-3 system is \
     what windows starting at n = 6 produce",
)];

struct Outcome {
    id: u32,
    title: &'static str,
    pass: bool,
    detail: String,
    elapsed: Duration,
}

fn timed(f: impl FnOnce() -> (bool, String)) -> (bool, String, Duration) {
    let t = Instant::now();
    let (pass, detail) = f();
    (pass, detail, t.elapsed())
}

fn rf(num: &[i64], den: &[i64]) -> RationalFunction {
    RationalFunction::from_ints(num, den).unwrap()
}

fn c1() -> (bool, String) {
    let (a, b) = darboux_factors();
    let h = a.compose(&b) == shifted_operator(FamilyId::Hermite, 1);
    let l = b.compose(&a) == shifted_operator(FamilyId::OneGap, 1);
    (h && l, format!("H+2 product {h}, L+2 product {l}"))
}

fn c2() -> (bool, String) {
    let h = family_operator(FamilyId::Hermite);
    let lt = family_operator(FamilyId::TwoGap);
    let t = intertwine_check(&lt, &h, &intertwiner_t());
    let s = intertwine_check(&h, &lt, &intertwiner_s());
    let s_note = if s.holds {
        "SL~ - HS = 0".to_string()
    } else {
        format!("SL~ - HS = {}", s.residual)
    };
    (t.holds, format!("L~T - TH = {}; {s_note}", t.residual))
}

fn c3() -> (bool, String) {
    let p: Vec<Vec<i64>> = vec![
        vec![-1],
        vec![0],
        vec![2, 0, 4],
        vec![0, 0, 0, 16],
        vec![-12, 0, -48, 0, 48],
        vec![0, 0, 0, -320, 0, 128],
        vec![120, 0, 720, 0, -1440, 0, 320],
    ];
    let q: Vec<Vec<i64>> = vec![
        vec![0],
        vec![0, -8],
        vec![-4, 0, -8],
        vec![0],
        vec![24, 0, 0, 0, 32],
        vec![0, 96, 0, -128, 0, 128],
    ];
    let bad: Vec<String> = p
        .iter()
        .enumerate()
        .filter(|(n, c)| eigen_poly(FamilyId::OneGap, *n) != Polynomial::from_ints(c))
        .map(|(n, _)| format!("p_{n}"))
        .chain(
            q.iter()
                .enumerate()
                .filter(|(n, c)| eigen_poly(FamilyId::TwoGap, *n) != Polynomial::from_ints(c))
                .map(|(n, _)| format!("q_{n}")),
        )
        .collect();
    (
        bad.is_empty(),
        if bad.is_empty() {
            "p_0..p_6, q_0..q_5 exact".into()
        } else {
            bad.join(", ")
        },
    )
}

fn c4() -> (bool, String) {
    let mut bad = Vec::new();
    for f in FamilyId::ALL {
        for n in 0..=EIGEN_N_MAX {
            if !shifted_operator(f, n).apply_poly(&eigen_poly(f, n)).is_zero() {
                bad.push(format!("{f} n={n}"));
            }
        }
    }
    (
        bad.is_empty(),
        format!("n <= {EIGEN_N_MAX}, three families; failures: {bad:?}"),
    )
}

fn c5() -> (bool, String) {
    let mut notes = Vec::new();
    let mut ok = true;
    for f in [FamilyId::OneGap, FamilyId::TwoGap] {
        let r = check_recursion_poly(f, &builtin_recursion(f), |n| eigen_poly(f, n), POLY_RECURSION_N).unwrap();
        ok &= r.all_zero();
        notes.push(format!("{f} poly {}", r.all_zero()));
    }
    let hr = builtin_recursion(FamilyId::Hermite);
    let need = PSI_ORDER as i64 - PSI_SLACK;
    let r = check_recursion_series(FamilyId::Hermite, &hr, |n| psi(n, PSI_ORDER), PSI_N).unwrap();
    let psi_ok = r.all_zero() && r.min_valid_order().unwrap() >= need;
    ok &= psi_ok;
    notes.push(format!("psi valid through {:?}", r.min_valid_order()));
    let mut g = Lcg::new(0);
    for _ in 0..SEEDED_PAIRS {
        let (a0, b0) = (g.nonzero_rational(), g.nonzero_rational());
        let r = check_recursion_series(
            FamilyId::Hermite,
            &hr,
            |n| hermite_bundle_member(n, &a0, &b0, PSI_ORDER),
            PSI_N,
        )
        .unwrap();
        let pair_ok = r.all_zero() && r.min_valid_order().unwrap() >= need;
        ok &= pair_ok;
        notes.push(format!("({a0}, {b0}) {pair_ok}"));
    }
    (ok, notes.join("; "))
}

fn c6() -> (bool, String) {
    let mut bad = Vec::new();
    for f in [FamilyId::OneGap, FamilyId::TwoGap] {
        for n in 0..=SERIES_EIGEN_N_MAX {
            let (even, odd) = series_basis(f, n, SERIES_ORDER).unwrap();
            for (part, s) in [("even", &even), ("odd", &odd)] {
                if eigen_residual_exponent(f, n, s).unwrap().is_some() {
                    bad.push(format!("{f} n={n} {part} eigen"));
                }
            }
        }
        for n in 0..=ORACLE_N_MAX {
            let k = series_kernel_oracle(&family_operator(f), &int(-2 * n as i64), ORACLE_TRUNC).unwrap();
            let (even, odd) = series_basis(f, n, ORACLE_TRUNC).unwrap();
            if !(in_kernel_span(&k, &even, ORACLE_TRUNC) && in_kernel_span(&k, &odd, ORACLE_TRUNC)) {
                bad.push(format!("{f} n={n} oracle"));
            }
        }
    }
    (
        bad.is_empty(),
        format!("eigen n <= {SERIES_EIGEN_N_MAX}, oracle n <= {ORACLE_N_MAX} at N = {ORACLE_TRUNC}; failures: {bad:?}"),
    )
}

fn c7() -> (bool, String) {
    let two = solve_free_params(
        FamilyId::TwoGap,
        &builtin_recursion(FamilyId::TwoGap),
        3..=5,
        PARAMS_ORDER,
    )
    .unwrap();
    let two_ok = two.rank == 3 && two.same_system(&two_gap_expected_constraints());
    let one = solve_free_params(
        FamilyId::OneGap,
        &builtin_recursion(FamilyId::OneGap),
        4..=20,
        PARAMS_ORDER,
    )
    .unwrap();
    let herm = solve_free_params(
        FamilyId::Hermite,
        &builtin_recursion(FamilyId::Hermite),
        1..=10,
        PARAMS_ORDER,
    )
    .unwrap();
    let rows: Vec<String> = two
        .constraints
        .iter()
        .map(|c| format!("{} = {}", c.lhs, c.rhs))
        .collect();
    let from_six = solve_free_params(
        FamilyId::TwoGap,
        &builtin_recursion(FamilyId::TwoGap),
        6..=20,
        PARAMS_ORDER,
    )
    .unwrap()
    .same_system(&two_gap_expected_constraints());
    (
        two_ok && one.is_empty() && herm.is_empty(),
        format!(
            "two-gap {{3,4,5}}: rank {} [{}]; one-gap 4..20 empty {}; hermite 1..10 empty {}; \
             (two-gap 6..20 equals the stated system: {from_six})",
            two.rank,
            rows.join("; "),
            one.is_empty(),
            herm.is_empty()
        ),
    )
}

fn c8() -> (bool, String) {
    let mut bad = Vec::new();
    let mut min_valid = i64::MAX;
    for id in HypIdentity::ALL {
        for n in 0..=HYP_N_MAX {
            let c = check_identity(id, n, HYP_ORDER).unwrap();
            min_valid = min_valid.min(c.valid_order);
            if !c.holds || c.valid_order < HYP_MIN_ORDER {
                bad.push(format!("{id:?} n={n}"));
            }
        }
    }
    (
        bad.is_empty(),
        format!("n <= {HYP_N_MAX}, compared through x^{min_valid}; failures: {bad:?}"),
    )
}

fn c9() -> (bool, String) {
    let d2 = rf(&[1], &[1]);
    let zero = RationalFunction::zero();
    let hermite = DiffOperator::new(vec![rf(&[1, 0, -1], &[1]), zero.clone(), d2.clone()]);
    let one_gap = DiffOperator::new(vec![rf(&[-2, 0, -1, 0, -1], &[0, 0, 1]), zero.clone(), d2.clone()]);
    let bump = rf(&[0, 4], &[-1, 0, 2]).derivative().scale(&int(2));
    let two_gap = DiffOperator::new(vec![&rf(&[-3, 0, -1], &[1]) + &bump, zero, d2]);
    let got: Vec<bool> = [hermite, one_gap, two_gap]
        .iter()
        .zip(FamilyId::ALL)
        .map(|(want, f)| &family_operator(f).gauge(&gauge_weight(f)) == want)
        .collect();
    (got.iter().all(|&b| b), format!("hermite, one-gap, two-gap: {got:?}"))
}

fn c10() -> (bool, String) {
    let r = run_ad_suite(Execution::default());
    let zero: Vec<bool> = r.iter().map(|e| e.residual_is_zero).collect();
    (zero == [true, true, false, true], format!("residualIsZero = {zero:?}"))
}

fn c11() -> (bool, String) {
    let cfg = VerifyConfig::default();
    let algebra = run_section(Suite::Algebra, &cfg);
    let laws_ok = ALGEBRA_INSTANCES >= MIN_ALGEBRA_INSTANCES && algebra.tally.failed == 0;
    let t = Instant::now();
    let report = verify(&Suite::ALL, &cfg, String::new()).unwrap();
    let elapsed = t.elapsed();
    let ok = laws_ok && report.passed() && elapsed < VERIFY_ALL_BUDGET;
    (
        ok,
        format!(
            "{} laws x {ALGEBRA_INSTANCES} instances, failed {}; verify all at defaults: failed {}, {:.1} s",
            algebra.checks.len(),
            algebra.tally.failed,
            report.overall.failed,
            elapsed.as_secs_f64()
        ),
    )
}

fn main() -> ExitCode {
    type Criterion = (u32, &'static str, fn() -> (bool, String), Option<Duration>);
    let criteria: [Criterion; 11] = [
        (1, "Darboux factorizations", c1, Some(FACTORIZATION_BUDGET)),
        (2, "intertwining", c2, Some(INTERTWINE_BUDGET)),
        (3, "polynomial tables", c3, None),
        (4, "polynomial eigen-equations", c4, Some(EIGEN_BUDGET)),
        (5, "recursions in n", c5, None),
        (6, "series families and kernel oracle", c6, None),
        (7, "constraint discovery", c7, None),
        (8, "hypergeometric identities", c8, None),
        (9, "gauge conjugations", c9, None),
        (10, "ad-conditions", c10, Some(ADCOND_BUDGET)),
        (11, "property suites and full verify", c11, None),
    ];
    let mut outcomes = Vec::new();
    for (id, title, run, budget) in criteria {
        let (mut pass, mut detail, elapsed) = timed(run);
        if let Some(b) = budget {
            if elapsed >= b {
                pass = false;
                detail = format!("{detail}; over budget {b:?}");
            }
        }
        outcomes.push(Outcome {
            id,
            title,
            pass,
            detail,
            elapsed,
        });
    }
    let mut unexpected = 0;
    for o in &outcomes {
        let known = KNOWN_UNATTAINABLE.iter().find(|(id, _)| *id == o.id);
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("{tag} C{:<2} {:<34} {:>9.1?}  {}", o.id, o.title, o.elapsed, o.detail);
        match (o.pass, known) {
            (false, Some((_, why))) => println!("          known unattainable: {why}"),
            (false, None) => unexpected += 1,
            (true, Some(_)) => {
                println!("          listed as unattainable but passed; update KNOWN_UNATTAINABLE");
                unexpected += 1;
            }
            (true, None) => {}
        }
    }
    let passed = outcomes.iter().filter(|o| o.pass).count();
    let known = outcomes
        .iter()
        .filter(|o| !o.pass && KNOWN_UNATTAINABLE.iter().any(|(id, _)| *id == o.id))
        .count();
    println!(
        "acceptance: {passed}/{} passed, {known} known unattainable, {unexpected} unexpected",
        outcomes.len()
    );
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

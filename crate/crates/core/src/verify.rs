//! The full verification sweep behind `bispec verify` and the acceptance gate.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::Serialize;
use serde_json::{json, Value};

use crate::adcond::{ad_power_consistent, builtin_ad_suite, run_ad_suite, tau_vanishing_holds};
use crate::bispectral::{
    builtin_recursion, check_recursion_poly_with, check_recursion_series_with, in_kernel_span, series_kernel_oracle,
    solve_free_params_with, two_gap_expected_constraints, RecursionReport,
};
use crate::diffop::{intertwine_check, DiffOperator, GaugeWeight};
use crate::error::{Error, Result};
use crate::families::{
    darboux_factors, eigen_poly, eigen_residual_exponent, family_operator, gauge_weight, gauged_operator,
    hermite_bundle_member, hermite_poly, intertwiner_s, intertwiner_t, psi, seeded_family_member, series_basis,
    shifted_operator, FamilyId, SeedLayout, Seeds,
};
use crate::hyp::{check_all, is_parameter_pole};
use crate::linalg::in_span;
use crate::parallel::{self, Execution};
use crate::poly::Polynomial;
use crate::ratfun::RationalFunction;
use crate::rational::{int, rat, Rational};
use crate::rng::Lcg;
use crate::series::TruncatedSeries;

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Instances per algebra law.
pub const ALGEBRA_INSTANCES: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Factorization,
    Intertwine,
    Eigen,
    Recursion,
    Params,
    Hyp,
    Gauge,
    Adcond,
    Oracle,
    Algebra,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Factorization,
        Suite::Intertwine,
        Suite::Eigen,
        Suite::Recursion,
        Suite::Params,
        Suite::Hyp,
        Suite::Gauge,
        Suite::Adcond,
        Suite::Oracle,
        Suite::Algebra,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Factorization => "factorization",
            Suite::Intertwine => "intertwine",
            Suite::Eigen => "eigen",
            Suite::Recursion => "recursion",
            Suite::Params => "params",
            Suite::Hyp => "hyp",
            Suite::Gauge => "gauge",
            Suite::Adcond => "adcond",
            Suite::Oracle => "oracle",
            Suite::Algebra => "algebra",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data: Option<Value>,
}

impl Check {
    fn new(name: impl Into<String>, ok: bool) -> Self {
        Check {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            detail: None,
            data: None,
        }
    }

    fn skip(name: impl Into<String>, why: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: Status::Skip,
            detail: Some(why.into()),
            data: None,
        }
    }

    fn failed(name: impl Into<String>, err: &Error) -> Self {
        Check::new(name, false).detail(err.to_string())
    }

    fn detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }

    fn data(mut self, v: Value) -> Self {
        self.data = Some(v);
        self
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

impl Tally {
    fn add(&mut self, other: Tally) {
        self.passed += other.passed;
        self.failed += other.failed;
        self.skipped += other.skipped;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Section {
    pub name: Suite,
    #[serde(flatten)]
    pub tally: Tally,
    pub checks: Vec<Check>,
}

impl Section {
    fn new(name: Suite, checks: Vec<Check>) -> Self {
        let mut tally = Tally::default();
        for c in &checks {
            match c.status {
                Status::Pass => tally.passed += 1,
                Status::Fail => tally.failed += 1,
                Status::Skip => tally.skipped += 1,
            }
        }
        Section { name, tally, checks }
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VerifyConfig {
    pub n_max: usize,
    pub order: usize,
    pub seed: u64,
    #[serde(skip)]
    pub exec: Execution,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            n_max: 40,
            order: 60,
            seed: 0,
            exec: Execution::default(),
        }
    }
}

impl VerifyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_max < 1 {
            return Err(Error::InvalidArgument("nMax must be at least 1".into()));
        }
        if self.order < 20 {
            return Err(Error::InvalidArgument("order must be at least 20".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VerificationReport {
    pub schema_version: u32,
    pub tool_version: String,
    #[serde(rename = "timestampUTC")]
    pub timestamp_utc: String,
    pub config: VerifyConfig,
    pub sections: Vec<Section>,
    pub overall: Tally,
}

impl VerificationReport {
    pub fn section(&self, s: Suite) -> Option<&Section> {
        self.sections.iter().find(|x| x.name == s)
    }

    pub fn passed(&self) -> bool {
        self.overall.failed == 0
    }
}

/// Runs the requested suites. Sections are computed independently (in
/// parallel when enabled) and assembled in the fixed suite order.
pub fn verify(suites: &[Suite], cfg: &VerifyConfig, timestamp_utc: String) -> Result<VerificationReport> {
    cfg.validate()?;
    let mut wanted: Vec<Suite> = Suite::ALL.into_iter().filter(|s| suites.contains(s)).collect();
    wanted.dedup();
    let sections = parallel::map(cfg.exec, wanted, |s| run_section(s, cfg));
    let mut overall = Tally::default();
    for s in &sections {
        overall.add(s.tally);
    }
    Ok(VerificationReport {
        schema_version: SCHEMA_VERSION,
        tool_version: TOOL_VERSION.to_string(),
        timestamp_utc,
        config: *cfg,
        sections,
        overall,
    })
}

pub fn run_section(s: Suite, cfg: &VerifyConfig) -> Section {
    let checks = match s {
        Suite::Factorization => factorization(),
        Suite::Intertwine => intertwine(cfg),
        Suite::Eigen => eigen(cfg),
        Suite::Recursion => recursion(cfg),
        Suite::Params => params(cfg),
        Suite::Hyp => hyp(cfg),
        Suite::Gauge => gauge(),
        Suite::Adcond => adcond(cfg),
        Suite::Oracle => oracle(cfg),
        Suite::Algebra => algebra(cfg),
    };
    Section::new(s, checks)
}

fn op_json(op: &DiffOperator) -> Value {
    json!(op.to_string())
}

fn factorization() -> Vec<Check> {
    let (a, b) = darboux_factors();
    let h2 = shifted_operator(FamilyId::Hermite, 1);
    let l2 = shifted_operator(FamilyId::OneGap, 1);
    let ab = a.compose(&b);
    let ba = b.compose(&a);
    vec![
        Check::new("H + 2 = (1/x ∂ - 2)(x∂ - 1)", ab == h2).data(json!({"product": op_json(&ab)})),
        Check::new("L + 2 = (x∂ - 1)(1/x ∂ - 2)", ba == l2).data(json!({"product": op_json(&ba)})),
    ]
}

fn intertwine(cfg: &VerifyConfig) -> Vec<Check> {
    let h = family_operator(FamilyId::Hermite);
    let lt = family_operator(FamilyId::TwoGap);
    let t = intertwiner_t();
    let ct = intertwine_check(&lt, &h, &t);
    let mut checks = vec![Check::new("L~T - TH = 0", ct.holds).data(json!({"residual": op_json(&ct.residual)}))];

    let s = intertwiner_s();
    let cs = intertwine_check(&h, &lt, &s);
    let s_check = if cs.holds {
        Check::new("SL~ - HS = 0", true)
    } else {
        Check::skip("SL~ - HS = 0", "displayed S does not intertwine; recorded, not altered")
    };
    checks.push(s_check.data(json!({"S": op_json(&s), "residual": op_json(&cs.residual)})));

    // B = x∂ - 1 carries H_n to a multiple of p_n, and T carries H_n to a multiple of q_n
    let (_, b) = darboux_factors();
    let maps_to = |op: &DiffOperator, f: FamilyId| {
        (0..=cfg.n_max).all(|n| {
            let image = op.apply_poly(&hermite_poly(n));
            let target = eigen_poly(f, n);
            match image.as_polynomial() {
                Some(p) if p.is_zero() => true,
                Some(p) => p.proportionality(&target).is_some_and(|c| !c.is_zero()),
                None => false,
            }
        })
    };
    checks.push(Check::new("(x∂ - 1)H_n ∝ p_n", maps_to(&b, FamilyId::OneGap)));
    checks.push(Check::new("T H_n ∝ q_n", maps_to(&t, FamilyId::TwoGap)));
    checks
}

/// `p_0..p_6` and `q_0..q_5` lowest degree first.
pub fn listed_polynomials(f: FamilyId) -> Vec<Polynomial> {
    let rows: &[&[i64]] = match f {
        FamilyId::OneGap => &[
            &[-1],
            &[0],
            &[2, 0, 4],
            &[0, 0, 0, 16],
            &[-12, 0, -48, 0, 48],
            &[0, 0, 0, -320, 0, 128],
            &[120, 0, 720, 0, -1440, 0, 320],
        ],
        FamilyId::TwoGap => &[
            &[0],
            &[0, -8],
            &[-4, 0, -8],
            &[0],
            &[24, 0, 0, 0, 32],
            &[0, 96, 0, -128, 0, 128],
        ],
        FamilyId::Hermite => &[&[1], &[0, 2], &[-2, 0, 4], &[0, -12, 0, 8]],
    };
    rows.iter().map(|r| Polynomial::from_ints(r)).collect()
}

/// A displayed series prefix: `(family, n, odd part?, [(exponent, p, q)])`.
type Display = (FamilyId, usize, bool, &'static [(usize, i64, i64)]);

/// The leading terms of the series eigenfunctions as displayed, normalized to
/// a leading coefficient of one.
pub const SERIES_DISPLAYS: &[Display] = &[
    (FamilyId::OneGap, 0, true, &[(3, 1, 1), (5, 3, 5)]),
    (
        FamilyId::OneGap,
        1,
        false,
        &[(0, 1, 1), (2, 1, 1), (4, 1, 2), (6, 1, 6), (8, 1, 24)],
    ),
    (
        FamilyId::OneGap,
        2,
        false,
        &[(0, 1, 1), (2, 2, 1), (4, 0, 1), (6, 0, 1)],
    ),
    (FamilyId::OneGap, 2, true, &[(3, 1, 1), (5, 1, 5)]),
    (FamilyId::OneGap, 3, false, &[(0, 1, 1), (2, 3, 1), (4, -3, 2)]),
    (FamilyId::OneGap, 3, true, &[(3, 1, 1), (5, 0, 1), (7, 0, 1)]),
    (
        FamilyId::TwoGap,
        0,
        false,
        &[(0, 1, 1), (2, 4, 1), (4, 0, 1), (6, -16, 15), (8, -64, 105)],
    ),
    (
        FamilyId::TwoGap,
        0,
        true,
        &[(1, 1, 1), (3, 1, 3), (5, -1, 6), (7, -1, 6), (9, -5, 72)],
    ),
    (
        FamilyId::TwoGap,
        1,
        false,
        &[(0, 1, 1), (2, 3, 1), (4, -1, 6), (6, -13, 30), (8, -11, 56)],
    ),
    (FamilyId::TwoGap, 1, true, &[(1, 1, 1), (3, 0, 1), (5, 0, 1)]),
    (
        FamilyId::TwoGap,
        2,
        false,
        &[(0, 1, 1), (2, 2, 1), (4, 0, 1), (6, 0, 1)],
    ),
    (
        FamilyId::TwoGap,
        2,
        true,
        &[(1, 1, 1), (3, -1, 3), (5, 7, 30), (7, 23, 210), (9, 47, 1512)],
    ),
    (
        FamilyId::TwoGap,
        3,
        false,
        &[(0, 1, 1), (2, 1, 1), (4, 1, 2), (6, 1, 6), (8, 1, 24)],
    ),
    (
        FamilyId::TwoGap,
        3,
        true,
        &[(1, 1, 1), (3, -2, 3), (5, 8, 15), (7, 16, 105), (9, 32, 945)],
    ),
];

fn display_checks(order: usize) -> Vec<Check> {
    SERIES_DISPLAYS
        .iter()
        .map(|&(f, n, odd, terms)| {
            let name = format!("{f} phi_{n} {} part matches display", if odd { "odd" } else { "even" });
            let basis = match series_basis(f, n, order) {
                Ok(b) => b,
                Err(e) => return Check::failed(name, &e),
            };
            let s = if odd { basis.1 } else { basis.0 };
            let bad: Vec<String> = terms
                .iter()
                .filter(|&&(k, p, q)| s.coeff(k as i64) != Some(rat(p, q)))
                .map(|&(k, p, q)| format!("x^{k}: displayed {p}/{q}, computed {:?}", s.coeff(k as i64)))
                .collect();
            if bad.is_empty() {
                Check::new(name, true)
            } else {
                // a display discrepancy is reported; the closed form stands
                Check::skip(name, bad.join("; "))
            }
        })
        .collect()
}

fn seeds_for(f: FamilyId, g: &mut Lcg, constrained: bool) -> Seeds {
    let layout = SeedLayout::of(f);
    let alpha: Vec<Rational> = (0..layout.alpha_seeds).map(|_| g.nonzero_rational()).collect();
    let mut beta: Vec<Rational> = (0..layout.beta_seeds).map(|_| g.nonzero_rational()).collect();
    if constrained && f == FamilyId::TwoGap {
        for n in 0..3 {
            beta[n + 3] = -int(4 * (n * (n + 1)) as i64) * &alpha[n];
        }
    }
    Seeds::new(f, alpha, beta).expect("layout sized")
}

fn eigen(cfg: &VerifyConfig) -> Vec<Check> {
    let mut checks = Vec::new();
    for f in [FamilyId::OneGap, FamilyId::TwoGap] {
        let listed = listed_polynomials(f);
        let ok = listed.iter().enumerate().all(|(n, p)| &eigen_poly(f, n) == p);
        checks.push(Check::new(format!("{f} polynomials match listed table"), ok));
    }
    for f in FamilyId::ALL {
        let bad = parallel::map(cfg.exec, (0..=cfg.n_max).collect(), |n| {
            let r = shifted_operator(f, n).apply_poly(&eigen_poly(f, n));
            (n, r.is_zero())
        })
        .into_iter()
        .filter(|(_, ok)| !ok)
        .map(|(n, _)| n)
        .collect::<Vec<_>>();
        checks.push(
            Check::new(
                format!("{f} polynomial eigen-equation n <= {}", cfg.n_max),
                bad.is_empty(),
            )
            .data(json!({"failingN": bad})),
        );
    }
    let series_max = cfg.n_max.min(20);
    for f in [FamilyId::OneGap, FamilyId::TwoGap] {
        let outcomes = parallel::map(cfg.exec, (0..=series_max).collect(), |n| -> Result<bool> {
            let (even, odd) = series_basis(f, n, cfg.order)?;
            Ok(eigen_residual_exponent(f, n, &even)?.is_none() && eigen_residual_exponent(f, n, &odd)?.is_none())
        });
        let name = format!("{f} closed-form series eigen-equation n <= {series_max}");
        checks.push(match outcomes.into_iter().collect::<Result<Vec<_>>>() {
            Ok(v) => Check::new(name, v.iter().all(|&b| b)),
            Err(e) => Check::failed(name, &e),
        });
    }
    let mut g = Lcg::new(cfg.seed);
    for f in [FamilyId::OneGap, FamilyId::TwoGap] {
        let seeds = seeds_for(f, &mut g, false);
        let ok = (0..=series_max).all(|n| {
            seeded_family_member(f, &seeds, n, cfg.order)
                .and_then(|s| eigen_residual_exponent(f, n, &s))
                .is_ok_and(|e| e.is_none())
        });
        checks.push(Check::new(
            format!("{f} seeded family eigen-equation n <= {series_max}"),
            ok,
        ));
    }
    let psi_ok = (0..=series_max)
        .all(|n| eigen_residual_exponent(FamilyId::Hermite, n, &psi(n, cfg.order)).is_ok_and(|e| e.is_none()));
    checks.push(Check::new(
        format!("hermite psi_n eigen-equation n <= {series_max}"),
        psi_ok,
    ));
    checks.extend(display_checks(cfg.order));
    checks
}

fn recursion_check(name: String, report: Result<RecursionReport>, min_valid: Option<i64>) -> Check {
    match report {
        Ok(r) => {
            let valid = r.min_valid_order();
            let ok = r.all_zero() && min_valid.is_none_or(|m| valid.is_some_and(|v| v >= m));
            let failing: Vec<usize> = r.results.iter().filter(|e| !e.is_zero).map(|e| e.n).collect();
            Check::new(name, ok).data(json!({"minValidOrder": valid, "failingN": failing}))
        }
        Err(e) => Check::failed(name, &e),
    }
}

fn recursion(cfg: &VerifyConfig) -> Vec<Check> {
    let exec = cfg.exec;
    let n_max = cfg.n_max;
    let order = cfg.order;
    let series_max = n_max.min(20);
    let mut checks = Vec::new();
    for f in [FamilyId::OneGap, FamilyId::TwoGap] {
        let rec = builtin_recursion(f);
        let r = check_recursion_poly_with(exec, f, &rec, |n| eigen_poly(f, n), 1..=n_max);
        checks.push(recursion_check(
            format!("{f} polynomial recursion n in 1..={n_max}"),
            r,
            None,
        ));
    }
    let hr = builtin_recursion(FamilyId::Hermite);
    let slack = 2;
    let want = Some(order as i64 - slack);
    let r = check_recursion_series_with(exec, FamilyId::Hermite, &hr, |n| psi(n, order), 1..=series_max);
    checks.push(recursion_check(
        format!("hermite psi recursion n in 1..={series_max}"),
        r,
        want,
    ));
    let mut g = Lcg::new(cfg.seed);
    for i in 0..3 {
        let (a0, b0) = (g.nonzero_rational(), g.nonzero_rational());
        let r = check_recursion_series_with(
            exec,
            FamilyId::Hermite,
            &hr,
            |n| hermite_bundle_member(n, &a0, &b0, order),
            1..=series_max,
        );
        let c = recursion_check(format!("hermite bundle recursion, pair {i}"), r, want);
        let data = c.data.clone().unwrap_or(json!({}));
        checks.push(c.data(json!({"a0": a0.to_string(), "b0": b0.to_string(), "result": data})));
    }
    for (f, from) in [(FamilyId::OneGap, 4), (FamilyId::TwoGap, 6)] {
        let seeds = seeds_for(f, &mut g, true);
        let rec = builtin_recursion(f);
        let hi = series_max.max(from + 2);
        let r = check_recursion_series_with(
            exec,
            f,
            &rec,
            |n| seeded_family_member(f, &seeds, n, order).expect("series family"),
            from..=hi,
        );
        checks.push(recursion_check(
            format!("{f} seeded series recursion n in {from}..={hi}"),
            r,
            None,
        ));
    }
    checks
}

fn params(cfg: &VerifyConfig) -> Vec<Check> {
    let exec = cfg.exec;
    let order = cfg.order.max(30);
    let run =
        |f: FamilyId, lo: usize, hi: usize| solve_free_params_with(exec, f, &builtin_recursion(f), lo..=hi, order);
    let render = |c: &crate::bispectral::ConstraintSet| {
        json!(c
            .constraints
            .iter()
            .map(|k| format!("{} = {}", k.lhs, k.rhs))
            .collect::<Vec<_>>())
    };
    let mut checks = Vec::new();
    for (f, lo, hi) in [(FamilyId::Hermite, 1, 10), (FamilyId::OneGap, 4, 20)] {
        let name = format!("{f} window {lo}..{hi} leaves seeds free");
        checks.push(match run(f, lo, hi) {
            Ok(c) => Check::new(name, c.is_empty()).data(render(&c)),
            Err(e) => Check::failed(name, &e),
        });
    }
    let expected = two_gap_expected_constraints();
    let name = "two-gap window 6..20 gives beta~(n+3) = -4n(n+1) alpha~n".to_string();
    checks.push(match run(FamilyId::TwoGap, 6, 20) {
        Ok(c) => Check::new(name, c.same_system(&expected)).data(render(&c)),
        Err(e) => Check::failed(name, &e),
    });
    // the window 3..5 imposes more: the expected rows are implied but the rank is larger
    let name = "two-gap window 3..5 implies beta~(n+3) = -4n(n+1) alpha~n".to_string();
    checks.push(match run(FamilyId::TwoGap, 3, 5) {
        Ok(c) => {
            let rows = c.rows();
            let implied = expected.iter().all(|r| in_span(&rows, r));
            Check::new(name, implied)
                .detail(format!("rank {}", c.rank))
                .data(render(&c))
        }
        Err(e) => Check::failed(name, &e),
    });
    let name = "one-gap window 1..3".to_string();
    checks.push(match run(FamilyId::OneGap, 1, 3) {
        Ok(c) => Check::new(name, true)
            .detail(format!("rank {}", c.rank))
            .data(render(&c)),
        Err(e) => Check::failed(name, &e),
    });
    checks
}

fn hyp(cfg: &VerifyConfig) -> Vec<Check> {
    let n_max = cfg.n_max.min(12);
    check_all(cfg.exec, n_max, cfg.order)
        .into_iter()
        .map(|(id, n, r)| {
            let name = format!(
                "{} n = {n}",
                serde_json::to_value(id).expect("enum").as_str().unwrap_or("")
            );
            match r {
                Ok(c) => Check::new(name, c.holds && c.valid_order >= 20).data(json!({"validOrder": c.valid_order})),
                Err(e) if is_parameter_pole(&e) => Check::skip(name, e.to_string()),
                Err(e) => Check::failed(name, &e),
            }
        })
        .collect()
}

fn gauge() -> Vec<Check> {
    let mut checks: Vec<Check> = FamilyId::ALL
        .into_iter()
        .map(|f| {
            let w = gauge_weight(f);
            let g = family_operator(f).gauge(&w);
            let target = gauged_operator(f);
            Check::new(format!("{f} gauge by {}", w.0), g == target).data(json!({"gauged": op_json(&g)}))
        })
        .collect();
    // conjugating back recovers the operator
    let ok = FamilyId::ALL.into_iter().all(|f| {
        let w = gauge_weight(f);
        gauged_operator(f).gauge(&GaugeWeight::new(-w.0.clone())) == family_operator(f)
    });
    checks.push(Check::new("gauge by -w inverts gauge by w", ok));
    checks
}

fn adcond(cfg: &VerifyConfig) -> Vec<Check> {
    let mut checks: Vec<Check> = run_ad_suite(cfg.exec)
        .into_iter()
        .map(|e| {
            let name = format!("{} ({})", e.name, if e.expected_zero { "zero" } else { "nonzero" });
            let ok = e.passed;
            let mut data = serde_json::to_value(&e).expect("serializable");
            if e.residual_is_zero {
                if let Some(m) = data.as_object_mut() {
                    m.remove("residual");
                }
            }
            Check::new(name, ok).data(data)
        })
        .collect();
    let consistent = builtin_ad_suite().iter().all(|(id, _)| ad_power_consistent(id, 4));
    checks.push(Check::new(
        "ad^k by iteration equals binomial expansion, k <= 4",
        consistent,
    ));
    let coherent = builtin_ad_suite()
        .iter()
        .all(|(id, _)| id.theta == builtin_recursion(id.family).theta);
    checks.push(Check::new("theta agrees with the recursion", coherent));
    checks.push(Check::new(
        "theta' vanishes at 0 (one-gap) and on 2x^2 - 1 (two-gap)",
        tau_vanishing_holds(FamilyId::OneGap) && tau_vanishing_holds(FamilyId::TwoGap),
    ));
    checks
}

fn oracle(cfg: &VerifyConfig) -> Vec<Check> {
    let n_max = cfg.n_max.min(12);
    let trunc = cfg.order.min(40);
    let mut jobs = Vec::new();
    for f in [FamilyId::OneGap, FamilyId::TwoGap] {
        for n in 0..=n_max {
            jobs.push((f, n));
        }
    }
    let mut checks = parallel::map(cfg.exec, jobs, |(f, n)| {
        let name = format!("{f} n = {n} closed form in oracle kernel");
        let run = || -> Result<bool> {
            let k = series_kernel_oracle(&family_operator(f), &int(-2 * n as i64), trunc)?;
            let (even, odd) = series_basis(f, n, trunc)?;
            Ok(in_kernel_span(&k, &even, trunc) && in_kernel_span(&k, &odd, trunc))
        };
        match run() {
            Ok(ok) => Check::new(name, ok),
            Err(e) => Check::failed(name, &e),
        }
    });
    let h = family_operator(FamilyId::Hermite);
    let hermite_ok = (0..=n_max).all(|n| {
        series_kernel_oracle(&h, &int(-2 * n as i64), trunc).is_ok_and(|k| {
            in_kernel_span(&k, &psi(n, trunc), trunc)
                && in_kernel_span(
                    &k,
                    &TruncatedSeries::from_polynomial(&hermite_poly(n), trunc as i64),
                    trunc,
                )
        })
    });
    checks.push(Check::new(
        format!("hermite H_n and psi_n in oracle kernel, n <= {n_max}"),
        hermite_ok,
    ));
    checks
}

/// Random rational function with a denominator from a fixed pool (no pole
/// depth beyond 2 at zero).
pub fn random_ratfun(g: &mut Lcg) -> RationalFunction {
    let deg = g.range(0, 2) as usize;
    let num = Polynomial::new((0..=deg).map(|_| g.rational()).collect());
    let den = match g.range(0, 4) {
        0 | 1 => Polynomial::one(),
        2 => Polynomial::x(),
        3 => Polynomial::from_ints(&[1, 0, 1]),
        _ => Polynomial::from_ints(&[-1, 0, 2]),
    };
    RationalFunction::new(num, den).expect("nonzero denominator")
}

pub fn random_operator(g: &mut Lcg, max_order: usize) -> DiffOperator {
    let order = g.range(0, max_order as i64) as usize;
    DiffOperator::new((0..=order).map(|_| random_ratfun(g)).collect())
}

fn law(name: &str, instances: usize, g: &mut Lcg, mut holds: impl FnMut(&mut Lcg) -> bool) -> Check {
    let failures = (0..instances).filter(|_| !holds(g)).count();
    Check::new(name, failures == 0).data(json!({"instances": instances, "failures": failures}))
}

fn algebra(cfg: &VerifyConfig) -> Vec<Check> {
    let mut g = Lcg::new(cfg.seed);
    let n = ALGEBRA_INSTANCES;
    vec![
        law("composition is associative", n, &mut g, |g| {
            let (a, b, c) = (random_operator(g, 2), random_operator(g, 2), random_operator(g, 2));
            a.compose(&b).compose(&c) == a.compose(&b.compose(&c))
        }),
        law("ad is a derivation of composition", n, &mut g, |g| {
            let (a, b, c) = (random_operator(g, 2), random_operator(g, 1), random_operator(g, 1));
            a.commutator(&b.compose(&c)) == &a.commutator(&b).compose(&c) + &b.compose(&a.commutator(&c))
        }),
        law("d/dx is a derivation on rational functions", n, &mut g, |g| {
            let (f, h) = (random_ratfun(g), random_ratfun(g));
            (&f * &h).derivative() == &(&f.derivative() * &h) + &(&f * &h.derivative())
        }),
        law("Jacobi identity", n, &mut g, |g| {
            let (a, b, c) = (random_operator(g, 2), random_operator(g, 1), random_operator(g, 1));
            let j = &(&a.commutator(&b.commutator(&c)) + &b.commutator(&c.commutator(&a)))
                + &c.commutator(&a.commutator(&b));
            j.is_zero()
        }),
        law("gauge composition law", n, &mut g, |g| {
            let a = random_operator(g, 2);
            let (w1, w2) = (GaugeWeight::new(random_ratfun(g)), GaugeWeight::new(random_ratfun(g)));
            a.gauge(&w1).gauge(&w2) == a.gauge(&w1.combine(&w2))
        }),
        law("gauge is multiplicative", n, &mut g, |g| {
            let (a, b) = (random_operator(g, 2), random_operator(g, 2));
            let w = GaugeWeight::new(random_ratfun(g));
            a.compose(&b).gauge(&w) == a.gauge(&w).compose(&b.gauge(&w))
        }),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> VerifyConfig {
        VerifyConfig {
            n_max: 5,
            order: 30,
            seed: 0,
            exec: Execution::Sequential,
        }
    }

    #[test]
    fn each_section_passes_at_small_scale() {
        for s in Suite::ALL {
            let sec = run_section(s, &small());
            let bad: Vec<_> = sec.checks.iter().filter(|c| c.status == Status::Fail).collect();
            assert!(bad.is_empty(), "{s}: {bad:#?}");
        }
    }

    #[test]
    fn tallies_add_up() {
        let r = verify(&[Suite::Factorization, Suite::Adcond], &small(), "t".into()).unwrap();
        assert_eq!(r.sections.len(), 2);
        let sum: usize = r
            .sections
            .iter()
            .map(|s| s.tally.passed + s.tally.failed + s.tally.skipped)
            .sum();
        assert_eq!(sum, r.overall.passed + r.overall.failed + r.overall.skipped);
        assert!(r.passed());
    }

    #[test]
    fn suite_order_is_fixed() {
        let r = verify(
            &[Suite::Gauge, Suite::Factorization, Suite::Gauge],
            &small(),
            "t".into(),
        )
        .unwrap();
        let names: Vec<_> = r.sections.iter().map(|s| s.name).collect();
        assert_eq!(names, vec![Suite::Factorization, Suite::Gauge]);
    }

    #[test]
    fn rejects_small_order() {
        let cfg = VerifyConfig { order: 10, ..small() };
        assert!(verify(&[Suite::Gauge], &cfg, String::new()).is_err());
    }

    #[test]
    fn adcond_section_entries() {
        let sec = run_section(Suite::Adcond, &small());
        let zero: Vec<bool> = sec.checks[..4]
            .iter()
            .map(|c| c.data.as_ref().unwrap()["residualIsZero"].as_bool().unwrap())
            .collect();
        assert_eq!(zero, vec![true, true, false, true]);
        assert_eq!(sec.tally.failed, 0);
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("everything".parse::<Suite>().is_err());
    }
}

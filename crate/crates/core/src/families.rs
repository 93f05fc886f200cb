//! The Hermite operator, its one- and two-gap Darboux descendants, and their
//! eigenfunction families: Hermite polynomials, the nonpolynomial companions
//! `psi_n`, confluent hypergeometric series, the Wronskian polynomials
//! `p_n`/`q_n` and the two-parameter series families `phi_n`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::diffop::{DiffOperator, GaugeWeight};
use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::ratfun::RationalFunction;
use crate::rational::{double_factorial, factorial, int, rat, Rational};
use crate::series::TruncatedSeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyId {
    /// `d^2 - 2x d`
    Hermite,
    /// `d^2 - 2(x + 1/x) d`
    OneGap,
    /// `d^2 - 2(2x^3+3x)/(2x^2-1) d + 8/(2x^2-1)`
    TwoGap,
}

impl FamilyId {
    pub const ALL: [FamilyId; 3] = [FamilyId::Hermite, FamilyId::OneGap, FamilyId::TwoGap];

    pub fn name(self) -> &'static str {
        match self {
            FamilyId::Hermite => "hermite",
            FamilyId::OneGap => "one-gap",
            FamilyId::TwoGap => "two-gap",
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hermite" => Ok(FamilyId::Hermite),
            "one-gap" => Ok(FamilyId::OneGap),
            "two-gap" => Ok(FamilyId::TwoGap),
            _ => Err(Error::InvalidArgument(format!("unknown family {s:?}"))),
        }
    }
}

fn poly_rf(c: &[i64]) -> RationalFunction {
    RationalFunction::from(Polynomial::from_ints(c))
}

fn rf(num: &[i64], den: &[i64]) -> RationalFunction {
    RationalFunction::from_ints(num, den).expect("nonzero denominator")
}

/// `2x^2 - 1`, the denominator of the two-gap operator.
pub fn two_gap_tau() -> Polynomial {
    Polynomial::from_ints(&[-1, 0, 2])
}

pub fn family_operator(f: FamilyId) -> DiffOperator {
    match f {
        FamilyId::Hermite => DiffOperator::new(vec![poly_rf(&[0]), poly_rf(&[0, -2]), poly_rf(&[1])]),
        FamilyId::OneGap => DiffOperator::new(vec![poly_rf(&[0]), rf(&[-2, 0, -2], &[0, 1]), poly_rf(&[1])]),
        FamilyId::TwoGap => DiffOperator::new(vec![
            rf(&[8], &[-1, 0, 2]),
            rf(&[0, -6, 0, -4], &[-1, 0, 2]),
            poly_rf(&[1]),
        ]),
    }
}

/// `Op + 2n`, whose kernel holds the eigenfunctions with eigenvalue `-2n`.
pub fn shifted_operator(f: FamilyId, n: usize) -> DiffOperator {
    family_operator(f).add_scalar(&int(2 * n as i64))
}

/// Factor pair of the one-gap Darboux step: `(1/x) d - 2` and `x d - 1`.
pub fn darboux_factors() -> (DiffOperator, DiffOperator) {
    (
        DiffOperator::new(vec![poly_rf(&[-2]), rf(&[1], &[0, 1])]),
        DiffOperator::new(vec![poly_rf(&[-1]), poly_rf(&[0, 1])]),
    )
}

/// `T = (2x^2-1) d^2 - 4x d`, with `L~ T = T H`.
pub fn intertwiner_t() -> DiffOperator {
    DiffOperator::new(vec![poly_rf(&[0]), poly_rf(&[0, -4]), poly_rf(&[-1, 0, 2])])
}

/// `S` as displayed: `1/tau d^2 - 4x/tau (1 + 1/tau) d + 4/tau (1 + 1/tau) + 2`
/// with `tau = 2x^2 - 1`; claimed to satisfy `S L~ = H S`.
pub fn intertwiner_s() -> DiffOperator {
    let tau = RationalFunction::from(two_gap_tau());
    let inv = tau.recip().expect("tau is nonzero");
    let one_plus = &RationalFunction::one() + &inv;
    let c2 = inv.clone();
    let c1 = -(&(&poly_rf(&[0, 4]) * &inv) * &one_plus);
    let c0 = &(&(&poly_rf(&[4]) * &inv) * &one_plus) + &poly_rf(&[2]);
    DiffOperator::new(vec![c0, c1, c2])
}

/// `h'/h` for the gauge factor that brings each operator to Schrödinger form:
/// `e^{x^2/2}`, `x e^{x^2/2}` and `e^{x^2/2}(2x^2-1)`.
pub fn gauge_weight(f: FamilyId) -> GaugeWeight {
    GaugeWeight::new(match f {
        FamilyId::Hermite => poly_rf(&[0, 1]),
        FamilyId::OneGap => rf(&[1, 0, 1], &[0, 1]),
        FamilyId::TwoGap => &poly_rf(&[0, 1]) + &rf(&[0, 4], &[-1, 0, 2]),
    })
}

/// The gauged operators `d^2 - x^2 + 1`, `d^2 - x^2 - 1 + 2 (log x)''` and
/// `d^2 - x^2 - 3 + 2 (log(2x^2-1))''`, assembled independently of [`gauge_weight`].
pub fn gauged_operator(f: FamilyId) -> DiffOperator {
    let (constant, log_arg) = match f {
        FamilyId::Hermite => (1, None),
        FamilyId::OneGap => (-1, Some(Polynomial::x())),
        FamilyId::TwoGap => (-3, Some(two_gap_tau())),
    };
    let mut c0 = poly_rf(&[constant, 0, -1]);
    if let Some(g) = log_arg {
        let log_deriv = RationalFunction::new(g.derivative(), g).expect("nonzero");
        c0 = &c0 + &log_deriv.derivative().scale(&int(2));
    }
    DiffOperator::new(vec![c0, RationalFunction::zero(), poly_rf(&[1])])
}

/// Physicists' Hermite polynomial via `H_{n+1} = 2x H_n - 2n H_{n-1}`.
pub fn hermite_poly(n: usize) -> Polynomial {
    let two_x = Polynomial::from_ints(&[0, 2]);
    let mut prev = Polynomial::zero();
    let mut cur = Polynomial::one();
    for k in 0..n {
        let next = &(&two_x * &cur) - &prev.scale(&int(2 * k as i64));
        prev = cur;
        cur = next;
    }
    cur
}

/// Wronskian-type polynomial eigenfunctions of the Darboux descendants:
/// `p_n = x H_n' - H_n` (one gap) and `q_n = (4x^2-2) H_{n-1}' - 8x H_{n-1}`
/// (two gaps, with `q_0 = 0`).
pub fn wronskian_eigen_poly(f: FamilyId, n: usize) -> Result<Polynomial> {
    match f {
        FamilyId::Hermite => Err(Error::InvalidArgument(
            "the Hermite operator has no Wronskian family; use hermite_poly".into(),
        )),
        FamilyId::OneGap => {
            let h = hermite_poly(n);
            Ok(&(&Polynomial::x() * &h.derivative()) - &h)
        }
        FamilyId::TwoGap => {
            if n == 0 {
                return Ok(Polynomial::zero());
            }
            let h = hermite_poly(n - 1);
            let a = &Polynomial::from_ints(&[-2, 0, 4]) * &h.derivative();
            let b = &Polynomial::from_ints(&[0, 8]) * &h;
            Ok(&a - &b)
        }
    }
}

/// `H_n`, `p_n` or `q_n` depending on the family.
pub fn eigen_poly(f: FamilyId, n: usize) -> Polynomial {
    match f {
        FamilyId::Hermite => hermite_poly(n),
        _ => wronskian_eigen_poly(f, n).expect("Darboux family"),
    }
}

/// `1F1(a; b; t) = sum_k (a)_k / ((b)_k k!) t^k`, through `t^trunc`.
pub fn hyp1f1_series(a: &Rational, b: &Rational, trunc: usize) -> Result<TruncatedSeries> {
    let mut coeffs = Vec::with_capacity(trunc + 1);
    let mut term = Rational::one();
    for k in 0..=trunc {
        if k > 0 {
            let kk = (k - 1) as i64;
            let a_k = a + int(kk);
            if a_k.is_zero() {
                break;
            }
            let b_k = b + int(kk);
            if b_k.is_zero() {
                return Err(Error::PochhammerPole {
                    b: crate::rational::to_display_string(b),
                    k,
                });
            }
            term = term * a_k / (b_k * int(k as i64));
        }
        coeffs.push(term.clone());
    }
    Ok(TruncatedSeries::new(0, coeffs, trunc as i64))
}

/// `1F1(a; b; x^2)` as a series in `x`, exact through `x^order`.
pub fn hyp1f1_in_x_squared(a: &Rational, b: &Rational, order: usize) -> Result<TruncatedSeries> {
    Ok(hyp1f1_series(a, b, order / 2)?.compose_square().truncate(order as i64))
}

/// The nonpolynomial companions of `H_n`, normalized so `psi_0 = x + x^3/3 + ...`:
/// `psi_{2m+1} = (-1)^{m+1} 4^m m! 1F1(-m-1/2; 1/2; x^2)` and
/// `psi_{2m} = (-4)^m m! x 1F1(1/2-m; 3/2; x^2)`.
pub fn psi(n: usize, order: usize) -> TruncatedSeries {
    let m = (n / 2) as i64;
    let scale = Rational::from_integer(BigInt::from(4).pow(m as u32) * factorial(m as u64));
    let hyp =
        |a: Rational, b: Rational, ord: usize| hyp1f1_in_x_squared(&a, &b, ord).expect("half-integer lower parameter");
    if n % 2 == 1 {
        let sign = if m % 2 == 0 { -1 } else { 1 };
        hyp(rat(-2 * m - 1, 2), rat(1, 2), order).scale(&(scale * int(sign)))
    } else {
        let sign = if m % 2 == 0 { 1 } else { -1 };
        hyp(rat(1 - 2 * m, 2), rat(3, 2), order.saturating_sub(1))
            .shift(1)
            .truncate(order as i64)
            .scale(&(scale * int(sign)))
    }
}

fn sign(k: i64) -> Rational {
    if k.rem_euclid(2) == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

fn product(range: impl Iterator<Item = i64>) -> Rational {
    Rational::from_integer(range.fold(BigInt::one(), |acc, v| acc * v))
}

fn ratio(num: Rational, den: BigInt) -> Rational {
    num / Rational::from_integer(den)
}

/// One-gap even coefficient `S_{n,i}` (of `x^{2i}`), `i >= 1`.
pub fn one_gap_s(n: usize, i: usize) -> Rational {
    let (n, i) = (n as i64, i as i64);
    if i == 1 {
        return int(n);
    }
    let num = sign(i + 1) * product((0..i).map(|k| n - 2 * k));
    ratio(num, factorial(i as u64) * double_factorial(2 * i - 3))
}

/// One-gap odd coefficient `Gamma_{n,i}` (of `x^{2i+1}`), `i >= 2`.
pub fn one_gap_gamma(n: usize, i: usize) -> Rational {
    let (n, i) = (n as i64, i as i64);
    let num = int(3) * sign(i + 1) * product((1..i).map(|k| n - 2 * k - 1));
    ratio(num, factorial((i - 1) as u64) * double_factorial(2 * i + 1))
}

/// Two-gap even coefficient `S_{n,i}`, `i >= 1`.
pub fn two_gap_s(n: usize, i: usize) -> Rational {
    let (n, i) = (n as i64, i as i64);
    if i == 1 {
        return int(-(n - 4));
    }
    let num = sign(i) * int(n + 4 * i * (i - 2)) * product((1..i).map(|k| n - 2 * k));
    ratio(num, factorial(i as u64) * double_factorial(2 * i - 1))
}

/// Two-gap odd coefficient `Gamma_{n,i}` (of `x^{2i+1}`), `i >= 1`.
pub fn two_gap_gamma(n: usize, i: usize) -> Rational {
    let (n, i) = (n as i64, i as i64);
    if i == 1 {
        return rat(-(n - 1), 3);
    }
    let num = sign(i) * int(n - 1) * int(n + (2 * i - 3) * (2 * i + 1)) * product((2..i).map(|k| n - 2 * k - 1));
    ratio(
        num,
        BigInt::from(2 * i + 1) * factorial(i as u64) * double_factorial(2 * i - 1),
    )
}

/// The even and odd basis series of the `-2n` eigenspace from the closed-form
/// coefficients, exact through `x^order`.
///
/// One gap: `1 + sum_{i>=1} S x^{2i}` and `x^3 + sum_{i>=2} Gamma x^{2i+1}`.
/// Two gaps: `1 + sum_{i>=1} S x^{2i}` and `x + sum_{i>=1} Gamma x^{2i+1}`.
pub fn series_basis(f: FamilyId, n: usize, order: usize) -> Result<(TruncatedSeries, TruncatedSeries)> {
    type Coeff = fn(usize, usize) -> Rational;
    let (s, gamma, odd_lead, gamma_from): (Coeff, Coeff, usize, usize) = match f {
        FamilyId::OneGap => (one_gap_s, one_gap_gamma, 3, 2),
        FamilyId::TwoGap => (two_gap_s, two_gap_gamma, 1, 1),
        FamilyId::Hermite => {
            return Err(Error::InvalidArgument(
                "closed-form series families exist for one-gap and two-gap only".into(),
            ))
        }
    };
    let mut even = vec![Rational::zero(); order + 1];
    let mut odd = vec![Rational::zero(); order + 1];
    even[0] = Rational::one();
    for i in 1..=order / 2 {
        even[2 * i] = s(n, i);
    }
    if odd_lead <= order {
        odd[odd_lead] = Rational::one();
    }
    for i in gamma_from.. {
        if 2 * i + 1 > order {
            break;
        }
        odd[2 * i + 1] = gamma(n, i);
    }
    let trunc = order as i64;
    Ok((
        TruncatedSeries::new(0, even, trunc),
        TruncatedSeries::new(0, odd, trunc),
    ))
}

/// Which seeds are free in each family: `alpha~0..` then `beta~0..`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedLayout {
    pub alpha_seeds: usize,
    pub beta_seeds: usize,
}

impl SeedLayout {
    pub fn of(f: FamilyId) -> SeedLayout {
        match f {
            // (a0, b0) multiply H_n and psi_n
            FamilyId::Hermite => SeedLayout {
                alpha_seeds: 1,
                beta_seeds: 1,
            },
            FamilyId::OneGap => SeedLayout {
                alpha_seeds: 2,
                beta_seeds: 4,
            },
            FamilyId::TwoGap => SeedLayout {
                alpha_seeds: 3,
                beta_seeds: 6,
            },
        }
    }

    pub fn len(&self) -> usize {
        self.alpha_seeds + self.beta_seeds
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn names(&self, f: FamilyId) -> Vec<String> {
        if f == FamilyId::Hermite {
            return vec!["a0".into(), "b0".into()];
        }
        (0..self.alpha_seeds)
            .map(|i| format!("alpha~{i}"))
            .chain((0..self.beta_seeds).map(|i| format!("beta~{i}")))
            .collect()
    }
}

/// `alpha_n = m * alpha~_s`: returns `(s, m)` from
/// `alpha_n = -2(n-1) alpha_{n-2}` past the seeds.
pub fn alpha_multiplier(f: FamilyId, n: usize) -> (usize, Rational) {
    let seeds = SeedLayout::of(f).alpha_seeds;
    if f == FamilyId::Hermite {
        return (0, Rational::one());
    }
    let mut k = n;
    let mut m = Rational::one();
    while k >= seeds {
        m *= int(-2 * (k as i64 - 1));
        k -= 2;
    }
    (k, m)
}

/// `beta_n = m * beta~_s` from `beta_n = -2(n-1)n/(n-3) beta_{n-2}` (one gap, n >= 4)
/// or `beta_n = -2(n-3)(n-2)/(n-5) beta_{n-2}` (two gaps, n >= 6).
pub fn beta_multiplier(f: FamilyId, n: usize) -> (usize, Rational) {
    let seeds = SeedLayout::of(f).beta_seeds;
    if f == FamilyId::Hermite {
        return (0, Rational::one());
    }
    let mut k = n;
    let mut m = Rational::one();
    while k >= seeds {
        let kk = k as i64;
        let step = match f {
            FamilyId::OneGap => {
                assert_ne!(kk, 3, "n = 3 is a seed index");
                rat(-2 * (kk - 1) * kk, kk - 3)
            }
            _ => {
                assert_ne!(kk, 5, "n = 5 is a seed index");
                rat(-2 * (kk - 3) * (kk - 2), kk - 5)
            }
        };
        m *= step;
        k -= 2;
    }
    (k, m)
}

/// Concrete seed values `(alpha~, beta~)` for a family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Seeds {
    pub alpha: Vec<Rational>,
    pub beta: Vec<Rational>,
}

impl Seeds {
    pub fn new(f: FamilyId, alpha: Vec<Rational>, beta: Vec<Rational>) -> Result<Seeds> {
        let layout = SeedLayout::of(f);
        if alpha.len() != layout.alpha_seeds || beta.len() != layout.beta_seeds {
            return Err(Error::InvalidArgument(format!(
                "{f} needs {} alpha and {} beta seeds",
                layout.alpha_seeds, layout.beta_seeds
            )));
        }
        Ok(Seeds { alpha, beta })
    }

    pub fn alpha_n(&self, f: FamilyId, n: usize) -> Rational {
        let (s, m) = alpha_multiplier(f, n);
        m * &self.alpha[s]
    }

    pub fn beta_n(&self, f: FamilyId, n: usize) -> Rational {
        let (s, m) = beta_multiplier(f, n);
        m * &self.beta[s]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeriesFamilyElement {
    pub n: usize,
    #[serde(with = "crate::rational::serde_fraction")]
    pub alpha: Rational,
    #[serde(with = "crate::rational::serde_fraction")]
    pub beta: Rational,
    pub series: TruncatedSeries,
    pub family: FamilyId,
}

/// Checks `(Op + 2n) s = 0` through the propagated order; returns the first
/// offending exponent otherwise.
pub fn eigen_residual_exponent(f: FamilyId, n: usize, s: &TruncatedSeries) -> Result<Option<i64>> {
    let r = shifted_operator(f, n).apply_series(s)?;
    Ok(r.first_nonzero())
}

/// `alpha * even + beta * odd`, validated against the eigen-equation.
pub fn series_family(
    f: FamilyId,
    n: usize,
    alpha: &Rational,
    beta: &Rational,
    order: usize,
) -> Result<SeriesFamilyElement> {
    let (even, odd) = series_basis(f, n, order)?;
    for basis in [&even, &odd] {
        if let Some(exponent) = eigen_residual_exponent(f, n, basis)? {
            return Err(Error::EigencheckFailed {
                family: f.to_string(),
                n,
                exponent,
            });
        }
    }
    let series = &even.scale(alpha) + &odd.scale(beta);
    Ok(SeriesFamilyElement {
        n,
        alpha: alpha.clone(),
        beta: beta.clone(),
        series,
        family: f,
    })
}

/// `phi_n` with `alpha_n`, `beta_n` generated from the seeds.
pub fn seeded_family_member(f: FamilyId, seeds: &Seeds, n: usize, order: usize) -> Result<TruncatedSeries> {
    if f == FamilyId::Hermite {
        return Ok(hermite_bundle_member(n, &seeds.alpha[0], &seeds.beta[0], order));
    }
    let (even, odd) = series_basis(f, n, order)?;
    Ok(&even.scale(&seeds.alpha_n(f, n)) + &odd.scale(&seeds.beta_n(f, n)))
}

/// `a0 H_n + b0 psi_n`.
pub fn hermite_bundle_member(n: usize, a0: &Rational, b0: &Rational, order: usize) -> TruncatedSeries {
    let h = TruncatedSeries::from_polynomial(&hermite_poly(n), order as i64);
    &h.scale(a0) + &psi(n, order).scale(b0)
}

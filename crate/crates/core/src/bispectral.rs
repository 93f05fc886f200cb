//! Recursions in the spectral index `n`, residual checks for polynomial and
//! series families, discovery of constraints on the free seeds, and an
//! independent kernel oracle for the series eigenfunctions.

use std::ops::RangeInclusive;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::diffop::DiffOperator;
use crate::error::{Error, Result};
use crate::families::{alpha_multiplier, beta_multiplier, hermite_poly, psi, series_basis, FamilyId, SeedLayout};
use crate::linalg::{in_span, Matrix};
use crate::parallel::{self, Execution};
use crate::poly::Polynomial;
use crate::ratfun::RationalFunction;
use crate::rational::{int, rat, to_display_string, Rational};
use crate::series::TruncatedSeries;

/// `c(n) f_{n+offset}`, with `c` a rational function of `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecursionTerm {
    pub offset: i64,
    pub coeff: RationalFunction,
}

/// `sum_j c_j(n) f_{n+j} = theta(x) f_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NRecursion {
    pub terms: Vec<RecursionTerm>,
    pub theta: Polynomial,
}

impl NRecursion {
    pub fn coeff_at(&self, term: &RecursionTerm, n: i64) -> Result<Rational> {
        term.coeff
            .eval(&int(n))
            .map_err(|_| Error::CoefficientPoleOnRange { offset: term.offset, n })
    }

    pub fn offsets(&self) -> Vec<i64> {
        self.terms.iter().map(|t| t.offset).collect()
    }

    /// `tau = theta'`.
    pub fn tau(&self) -> Polynomial {
        self.theta.derivative()
    }

    /// Coefficients `(offset, c(n))` with poles reported as errors.
    fn coefficients(&self, n: i64) -> Result<Vec<(i64, Rational)>> {
        self.terms
            .iter()
            .map(|t| Ok((t.offset, self.coeff_at(t, n)?)))
            .collect()
    }
}

fn n_poly(c: &[Rational]) -> Polynomial {
    Polynomial::new(c.to_vec())
}

fn term(offset: i64, num: Polynomial, den: Polynomial) -> RecursionTerm {
    RecursionTerm {
        offset,
        coeff: RationalFunction::new(num, den).expect("nonzero denominator"),
    }
}

/// The recursions in `n` satisfied by `H_n`/`psi_n`, `p_n` and `q_n`.
///
/// Hermite: `f_{n+1} + 2n f_{n-1} = 2x f_n`, stored with `theta = x` as
/// `(1/2) f_{n+1} + n f_{n-1} = x f_n`.
pub fn builtin_recursion(f: FamilyId) -> NRecursion {
    let one = Polynomial::one();
    let n = Polynomial::x();
    let lin = |a: i64, b: i64| Polynomial::from_ints(&[a, b]); // a + b n
    match f {
        FamilyId::Hermite => NRecursion {
            terms: vec![
                term(-1, n.clone(), one.clone()),
                term(1, Polynomial::constant(rat(1, 2)), one),
            ],
            theta: Polynomial::x(),
        },
        FamilyId::OneGap => NRecursion {
            // n(n-1)/2 p_{n-2} + (2n-1)/4 p_n + (n-1)/(8(n+1)) p_{n+2} = x^2/2 p_n
            terms: vec![
                term(-2, n_poly(&[int(0), rat(-1, 2), rat(1, 2)]), one.clone()),
                term(0, n_poly(&[rat(-1, 4), rat(1, 2)]), one),
                term(2, lin(-1, 1), lin(8, 8)),
            ],
            theta: Polynomial::new(vec![int(0), int(0), rat(1, 2)]),
        },
        FamilyId::TwoGap => NRecursion {
            // (2/3)(n-1)(n-2)(n-3) q_{n-3} + (n-3)(n-1) q_{n-1} + (n-3)/2 q_{n+1}
            //   + (n-3)/(12n) q_{n+3} = (2x^3/3 - x) q_n
            terms: vec![
                term(
                    -3,
                    (&(&lin(-1, 1) * &lin(-2, 1)) * &lin(-3, 1)).scale(&rat(2, 3)),
                    one.clone(),
                ),
                term(-1, &lin(-3, 1) * &lin(-1, 1), one.clone()),
                term(1, lin(-3, 1).scale(&rat(1, 2)), one),
                term(3, lin(-3, 1), lin(0, 12)),
            ],
            theta: Polynomial::new(vec![int(0), int(-1), int(0), rat(2, 3)]),
        },
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RecursionEntry {
    pub n: usize,
    pub is_zero: bool,
    /// Highest certified exponent for series residuals; `None` when exact.
    pub valid_order: Option<i64>,
    #[serde(skip)]
    pub residual: Residual,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Residual {
    Polynomial(Polynomial),
    Series(TruncatedSeries),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RecursionReport {
    pub family: FamilyId,
    pub theta: Polynomial,
    pub n_range: (usize, usize),
    pub results: Vec<RecursionEntry>,
}

impl RecursionReport {
    pub fn all_zero(&self) -> bool {
        self.results.iter().all(|e| e.is_zero)
    }

    pub fn min_valid_order(&self) -> Option<i64> {
        self.results.iter().filter_map(|e| e.valid_order).min()
    }
}

/// Residual `sum_j c_j(n) f_{n+j} - theta f_n` for a polynomial family, exactly.
/// Negative indices are the zero polynomial.
pub fn check_recursion_poly<F>(
    f: FamilyId,
    rec: &NRecursion,
    family: F,
    range: RangeInclusive<usize>,
) -> Result<RecursionReport>
where
    F: Fn(usize) -> Polynomial + Sync + Send,
{
    check_recursion_poly_with(Execution::default(), f, rec, family, range)
}

pub fn check_recursion_poly_with<F>(
    exec: Execution,
    f: FamilyId,
    rec: &NRecursion,
    family: F,
    range: RangeInclusive<usize>,
) -> Result<RecursionReport>
where
    F: Fn(usize) -> Polynomial + Sync + Send,
{
    let n_range = (*range.start(), *range.end());
    let results = parallel::try_map(exec, range.collect(), |n| {
        let mut residual = -&(&rec.theta * &family(n));
        for (offset, c) in rec.coefficients(n as i64)? {
            let m = n as i64 + offset;
            if m < 0 || c.is_zero() {
                continue;
            }
            residual = &residual + &family(m as usize).scale(&c);
        }
        Ok(RecursionEntry {
            n,
            is_zero: residual.is_zero(),
            valid_order: None,
            residual: Residual::Polynomial(residual),
        })
    })?;
    Ok(RecursionReport {
        family: f,
        theta: rec.theta.clone(),
        n_range,
        results,
    })
}

/// Residual of the recursion on a family of truncated series. Zero means every
/// coefficient through the propagated valid order vanishes.
pub fn check_recursion_series<F>(
    f: FamilyId,
    rec: &NRecursion,
    family: F,
    range: RangeInclusive<usize>,
) -> Result<RecursionReport>
where
    F: Fn(usize) -> TruncatedSeries + Sync + Send,
{
    check_recursion_series_with(Execution::default(), f, rec, family, range)
}

pub fn check_recursion_series_with<F>(
    exec: Execution,
    f: FamilyId,
    rec: &NRecursion,
    family: F,
    range: RangeInclusive<usize>,
) -> Result<RecursionReport>
where
    F: Fn(usize) -> TruncatedSeries + Sync + Send,
{
    let n_range = (*range.start(), *range.end());
    let results = parallel::try_map(exec, range.collect(), |n| {
        let fn_ = family(n);
        let mut residual = -&fn_.mul_poly(&rec.theta);
        for (offset, c) in rec.coefficients(n as i64)? {
            let m = n as i64 + offset;
            if m < 0 || c.is_zero() {
                continue;
            }
            residual = &residual + &family(m as usize).scale(&c);
        }
        let valid = residual.trunc_order();
        if valid < 0 {
            return Err(Error::ValidOrderTooSmall {
                valid,
                low: residual.low_order().min(0),
            });
        }
        Ok(RecursionEntry {
            n,
            is_zero: residual.is_zero(),
            valid_order: Some(valid),
            residual: Residual::Series(residual),
        })
    })?;
    Ok(RecursionReport {
        family: f,
        theta: rec.theta.clone(),
        n_range,
        results,
    })
}

/// Member `n` of a family as a linear form in the seeds: entry `s` is the
/// series multiplying seed `s`.
pub fn seed_linear_member(f: FamilyId, n: usize, order: usize) -> Result<Vec<TruncatedSeries>> {
    let layout = SeedLayout::of(f);
    let trunc = order as i64;
    let mut parts = vec![TruncatedSeries::zero(trunc); layout.len()];
    match f {
        FamilyId::Hermite => {
            parts[0] = TruncatedSeries::from_polynomial(&hermite_poly(n), trunc);
            parts[1] = psi(n, order);
        }
        _ => {
            let (even, odd) = series_basis(f, n, order)?;
            let (sa, ma) = alpha_multiplier(f, n);
            let (sb, mb) = beta_multiplier(f, n);
            parts[sa] = even.scale(&ma);
            parts[layout.alpha_seeds + sb] = odd.scale(&mb);
        }
    }
    Ok(parts)
}

/// One reduced linear relation `sum coefficients[s] * seed_s = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Constraint {
    pub lhs: String,
    pub rhs: String,
    #[serde(serialize_with = "serialize_fractions")]
    pub coefficients: Vec<Rational>,
}

fn serialize_fractions<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::Serialize as _;
    v.iter()
        .map(crate::rational::to_fraction_string)
        .collect::<Vec<_>>()
        .serialize(s)
}

/// Linear relations among the seeds, in reduced row-echelon form with columns
/// ordered `alpha~0, alpha~1, ..., beta~0, beta~1, ...`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ConstraintSet {
    pub family: FamilyId,
    pub theta: Polynomial,
    pub n_range: (usize, usize),
    pub seeds: Vec<String>,
    pub rank: usize,
    pub constraints: Vec<Constraint>,
    /// Lowest certified order over the residuals that produced the rows.
    pub valid_order: i64,
}

impl ConstraintSet {
    pub fn rows(&self) -> Vec<Vec<Rational>> {
        self.constraints.iter().map(|c| c.coefficients.clone()).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    /// Same solution set as the system given by `rows`.
    pub fn same_system(&self, rows: &[Vec<Rational>]) -> bool {
        let other = reduce_rows(rows.to_vec(), self.seeds.len());
        other == self.rows()
    }
}

fn reduce_rows(rows: Vec<Vec<Rational>>, cols: usize) -> Vec<Vec<Rational>> {
    if rows.is_empty() {
        return rows;
    }
    Matrix::from_rows(rows, cols).row_space_basis()
}

fn render_constraint(names: &[String], row: &[Rational]) -> Constraint {
    let pivot = row.iter().position(|c| !c.is_zero()).expect("nonzero row");
    let mut rhs = String::new();
    for (name, c) in names.iter().zip(row).skip(pivot + 1) {
        if c.is_zero() {
            continue;
        }
        let v = -c;
        let neg = v < Rational::zero();
        let mag = if neg { -v.clone() } else { v.clone() };
        let body = if mag.is_one() {
            name.clone()
        } else {
            format!("{}·{name}", to_display_string(&mag))
        };
        if rhs.is_empty() {
            if neg {
                rhs.push('-');
            }
        } else {
            rhs.push_str(if neg { " - " } else { " + " });
        }
        rhs.push_str(&body);
    }
    if rhs.is_empty() {
        rhs.push('0');
    }
    Constraint {
        lhs: names[pivot].clone(),
        rhs,
        coefficients: row.to_vec(),
    }
}

/// Treats the seeds as unknowns, demands the recursion residual vanish for
/// every `n` in `window` (through the propagated order), and returns the
/// reduced system on the seeds.
pub fn solve_free_params(
    f: FamilyId,
    rec: &NRecursion,
    window: RangeInclusive<usize>,
    order: usize,
) -> Result<ConstraintSet> {
    solve_free_params_with(Execution::default(), f, rec, window, order)
}

pub fn solve_free_params_with(
    exec: Execution,
    f: FamilyId,
    rec: &NRecursion,
    window: RangeInclusive<usize>,
    order: usize,
) -> Result<ConstraintSet> {
    let layout = SeedLayout::of(f);
    let names = layout.names(f);
    let n_range = (*window.start(), *window.end());
    let blocks = parallel::try_map(exec, window.collect(), |n| -> Result<(Vec<Vec<Rational>>, i64)> {
        let member = |m: usize| seed_linear_member(f, m, order);
        let base = member(n)?;
        let mut residual: Vec<TruncatedSeries> = base.iter().map(|s| -&s.mul_poly(&rec.theta)).collect();
        for (offset, c) in rec.coefficients(n as i64)? {
            let m = n as i64 + offset;
            if m < 0 || c.is_zero() {
                continue;
            }
            for (r, s) in residual.iter_mut().zip(member(m as usize)?) {
                *r = &*r + &s.scale(&c);
            }
        }
        let valid = residual.iter().map(TruncatedSeries::trunc_order).min().unwrap_or(0);
        let low = residual
            .iter()
            .filter_map(TruncatedSeries::first_nonzero)
            .min()
            .unwrap_or(valid + 1);
        let rows = (low..=valid)
            .map(|e| {
                residual
                    .iter()
                    .map(|r| r.coeff(e).expect("within valid order"))
                    .collect::<Vec<_>>()
            })
            .filter(|row: &Vec<Rational>| row.iter().any(|c| !c.is_zero()))
            .collect();
        Ok((rows, valid))
    })?;
    let valid_order = blocks.iter().map(|(_, v)| *v).min().unwrap_or(order as i64);
    let rows: Vec<Vec<Rational>> = blocks.into_iter().flat_map(|(r, _)| r).collect();
    let reduced = reduce_rows(rows, layout.len());
    Ok(ConstraintSet {
        family: f,
        theta: rec.theta.clone(),
        n_range,
        seeds: names.clone(),
        rank: reduced.len(),
        constraints: reduced.iter().map(|r| render_constraint(&names, r)).collect(),
        valid_order,
    })
}

/// Rows of `beta~_{n+3} + 4n(n+1) alpha~_n = 0` for `n = 0, 1, 2` in the
/// two-gap seed columns.
pub fn two_gap_expected_constraints() -> Vec<Vec<Rational>> {
    let layout = SeedLayout::of(FamilyId::TwoGap);
    (0..3)
        .map(|n: usize| {
            let mut row = vec![Rational::zero(); layout.len()];
            row[n] = int(4 * (n * (n + 1)) as i64);
            row[layout.alpha_seeds + n + 3] = Rational::one();
            row
        })
        .collect()
}

/// Least common multiple of the coefficient denominators.
fn common_denominator(op: &DiffOperator) -> Polynomial {
    op.coeffs().iter().fold(Polynomial::one(), |acc, c| {
        let g = acc.gcd(c.den());
        (&acc * c.den()).div_exact(&g).expect("gcd divides").monic()
    })
}

/// Basis of the kernel of `A - lambda` on Taylor series `c_0 + ... + c_N x^N`.
///
/// Denominators are cleared first; the equation for `x^j` is kept only when it
/// involves no coefficient beyond `c_N`. For the three operators studied here
/// the kernel has dimension two.
pub fn series_kernel_oracle(op: &DiffOperator, lambda: &Rational, trunc: usize) -> Result<Vec<TruncatedSeries>> {
    let shifted = op.add_scalar(&-lambda);
    let den = common_denominator(&shifted);
    let cleared: Vec<Polynomial> = shifted
        .coeffs()
        .iter()
        .map(|c| {
            let scale = den.div_exact(c.den()).expect("common denominator");
            c.num() * &scale
        })
        .collect();
    // x^i feeds x^{i-k+v} and above for a term b x^v d^k
    let reach = cleared
        .iter()
        .enumerate()
        .filter_map(|(k, b)| b.valuation().map(|v| k as i64 - v as i64))
        .max()
        .unwrap_or(0);
    let last_row = trunc as i64 - reach.max(0);
    if last_row < 0 {
        return Err(Error::ValidOrderTooSmall {
            valid: last_row,
            low: 0,
        });
    }
    let rows = (last_row + 1) as usize;
    let mut m = Matrix::zeros(rows, trunc + 1);
    for i in 0..=trunc {
        let mono = Polynomial::monomial(Rational::one(), i);
        let mut image = Polynomial::zero();
        let mut deriv = mono;
        for (k, b) in cleared.iter().enumerate() {
            if k > 0 {
                deriv = deriv.derivative();
            }
            if deriv.is_zero() {
                break;
            }
            image = &image + &(b * &deriv);
        }
        for (j, c) in image.coeffs().iter().enumerate().take(rows) {
            m[(j, i)] = c.clone();
        }
    }
    let kernel = m.kernel();
    if kernel.len() != 2 {
        return Err(Error::UnexpectedKernelDimension {
            expected: 2,
            found: kernel.len(),
        });
    }
    Ok(kernel
        .into_iter()
        .map(|v| TruncatedSeries::new(0, v, trunc as i64))
        .collect())
}

/// Whether `s` (a Taylor series, truncated at `trunc`) lies in the span of the
/// oracle kernel basis.
pub fn in_kernel_span(kernel: &[TruncatedSeries], s: &TruncatedSeries, trunc: usize) -> bool {
    let vec_of = |t: &TruncatedSeries| -> Option<Vec<Rational>> { (0..=trunc as i64).map(|k| t.coeff(k)).collect() };
    let Some(target) = vec_of(s) else {
        return false;
    };
    let Some(basis) = kernel.iter().map(vec_of).collect::<Option<Vec<_>>>() else {
        return false;
    };
    in_span(&basis, &target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{eigen_poly, family_operator, hermite_bundle_member};

    #[test]
    fn builtin_offsets_and_theta() {
        let r = builtin_recursion(FamilyId::OneGap);
        assert_eq!(r.offsets(), vec![-2, 0, 2]);
        assert_eq!(r.theta, Polynomial::new(vec![int(0), int(0), rat(1, 2)]));
        let r = builtin_recursion(FamilyId::TwoGap);
        assert_eq!(r.offsets(), vec![-3, -1, 1, 3]);
        assert_eq!(r.theta, Polynomial::new(vec![int(0), int(-1), int(0), rat(2, 3)]));
        let r = builtin_recursion(FamilyId::Hermite);
        assert_eq!(r.offsets(), vec![-1, 1]);
        assert_eq!(r.theta, Polynomial::x());
    }

    #[test]
    fn one_gap_n2_by_hand() {
        // p0 + (3/4) p2 + (1/24) p4 = (x^2/2) p2 = 2x^4 + x^2
        let r = builtin_recursion(FamilyId::OneGap);
        let cs = r.coefficients(2).unwrap();
        assert_eq!(cs, vec![(-2, int(1)), (0, rat(3, 4)), (2, rat(1, 24))]);
        let rep = check_recursion_poly(FamilyId::OneGap, &r, |n| eigen_poly(FamilyId::OneGap, n), 1..=3).unwrap();
        assert!(rep.all_zero());
    }

    #[test]
    fn two_gap_n1_by_hand() {
        let r = builtin_recursion(FamilyId::TwoGap);
        let cs = r.coefficients(1).unwrap();
        assert_eq!(cs, vec![(-3, int(0)), (-1, int(0)), (1, int(-1)), (3, rat(-1, 6))]);
    }

    #[test]
    fn pole_on_range_is_an_error() {
        let r = builtin_recursion(FamilyId::TwoGap);
        let err = check_recursion_poly(FamilyId::TwoGap, &r, |n| eigen_poly(FamilyId::TwoGap, n), 0..=2);
        assert_eq!(err.unwrap_err(), Error::CoefficientPoleOnRange { offset: 3, n: 0 });
    }

    #[test]
    fn hermite_series_recursion_pure_psi() {
        let r = builtin_recursion(FamilyId::Hermite);
        let rep = check_recursion_series(FamilyId::Hermite, &r, |n| psi(n, 30), 1..=8).unwrap();
        assert!(rep.all_zero());
        assert!(rep.min_valid_order().unwrap() >= 28);
        // n = 0 is outside the relation's contract
        let rep0 = check_recursion_series(FamilyId::Hermite, &r, |n| psi(n, 30), 0..=0).unwrap();
        assert!(!rep0.all_zero());
        let polys = check_recursion_series(
            FamilyId::Hermite,
            &r,
            |n| hermite_bundle_member(n, &int(1), &int(0), 30),
            0..=8,
        )
        .unwrap();
        assert!(polys.all_zero());
    }

    #[test]
    fn hermite_seeds_are_free() {
        let r = builtin_recursion(FamilyId::Hermite);
        let c = solve_free_params(FamilyId::Hermite, &r, 1..=10, 30).unwrap();
        assert!(c.is_empty());
        assert_eq!(c.seeds, vec!["a0", "b0"]);
    }

    #[test]
    fn one_gap_small_window_constraints() {
        let r = builtin_recursion(FamilyId::OneGap);
        let c = solve_free_params(FamilyId::OneGap, &r, 1..=3, 24).unwrap();
        // alpha~1 = 0, beta~1 = 0, beta~0 = beta~2 / 4
        let mut rows = vec![vec![Rational::zero(); 6]; 3];
        rows[0][1] = int(1);
        rows[1][3] = int(1);
        rows[2][2] = int(1);
        rows[2][4] = rat(-1, 4);
        assert!(c.same_system(&rows), "{:?}", c.constraints);
    }

    #[test]
    fn oracle_for_one_gap_n2() {
        let l = family_operator(FamilyId::OneGap);
        let k = series_kernel_oracle(&l, &int(-4), 20).unwrap();
        let (even, odd) = series_basis(FamilyId::OneGap, 2, 20).unwrap();
        assert!(in_kernel_span(&k, &even, 20));
        assert!(in_kernel_span(&k, &odd, 20));
        assert_eq!(odd.coeff(5), Some(rat(1, 5)));
        let bogus = TruncatedSeries::new(0, vec![int(1), int(1)], 20);
        assert!(!in_kernel_span(&k, &bogus, 20));
    }

    #[test]
    fn oracle_for_hermite() {
        let h = family_operator(FamilyId::Hermite);
        let k = series_kernel_oracle(&h, &int(0), 10).unwrap();
        assert!(in_kernel_span(&k, &TruncatedSeries::one(10), 10));
        assert!(in_kernel_span(&k, &psi(0, 10), 10));
        let k1 = series_kernel_oracle(&h, &int(-2), 10).unwrap();
        let h1 = TruncatedSeries::from_polynomial(&hermite_poly(1), 10);
        assert!(in_kernel_span(&k1, &h1, 10));
    }

    #[test]
    fn oracle_rejects_wrong_dimension() {
        // d^3 has a three-dimensional polynomial kernel
        let d3 = DiffOperator::new(vec![
            RationalFunction::zero(),
            RationalFunction::zero(),
            RationalFunction::zero(),
            RationalFunction::one(),
        ]);
        assert_eq!(
            series_kernel_oracle(&d3, &int(0), 10).unwrap_err(),
            Error::UnexpectedKernelDimension { expected: 2, found: 3 }
        );
    }

    #[test]
    fn one_gap_window_from_four_is_free() {
        let r = builtin_recursion(FamilyId::OneGap);
        assert!(solve_free_params(FamilyId::OneGap, &r, 4..=20, 40).unwrap().is_empty());
    }

    #[test]
    fn two_gap_constraints_from_six() {
        let r = builtin_recursion(FamilyId::TwoGap);
        let c = solve_free_params(FamilyId::TwoGap, &r, 6..=12, 40).unwrap();
        assert_eq!(c.rank, 3);
        assert!(c.same_system(&two_gap_expected_constraints()));
        let lhs: Vec<_> = c.constraints.iter().map(|k| format!("{} = {}", k.lhs, k.rhs)).collect();
        assert_eq!(
            lhs,
            vec!["alpha~1 = -1/8·beta~4", "alpha~2 = -1/24·beta~5", "beta~3 = 0"]
        );
    }

    #[test]
    fn two_gap_window_three_to_five_is_stricter() {
        let r = builtin_recursion(FamilyId::TwoGap);
        let c = solve_free_params(FamilyId::TwoGap, &r, 3..=5, 40).unwrap();
        assert_eq!(c.rank, 6);
        assert!(!c.same_system(&two_gap_expected_constraints()));
        let expected = Matrix::from_rows(two_gap_expected_constraints(), 9);
        for row in expected.row_space_basis() {
            assert!(in_span(&c.rows(), &row));
        }
    }
}

//! Coefficientwise checks of the confluent hypergeometric identities behind
//! the one-gap family:
//!
//! * `(x d - 1) 1F1(-n/2; 1/2; x^2) = -1F1(-n/2; -1/2; x^2)`
//! * `(x d - 1) [x 1F1(1/2 - n/2; 3/2; x^2)] = (2/3)(1 - n) x^3 1F1(3/2 - n/2; 5/2; x^2)`
//! * `x 1F1(1/2 - n/2; 3/2; x^2) = F(x) int_0^x e^{y^2} / F(y)^2 dy`, `F = 1F1(-n/2; 1/2; .)`

use serde::Serialize;

use crate::diffop::DiffOperator;
use crate::error::{Error, Result};
use crate::families::hyp1f1_in_x_squared;
use crate::parallel::{self, Execution};
use crate::poly::Polynomial;
use crate::ratfun::RationalFunction;
use crate::rational::{int, rat, Rational};
use crate::series::TruncatedSeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HypIdentity {
    EvenLowering,
    OddRaising,
    Integral,
}

impl HypIdentity {
    pub const ALL: [HypIdentity; 3] = [
        HypIdentity::EvenLowering,
        HypIdentity::OddRaising,
        HypIdentity::Integral,
    ];
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct HypCheck {
    pub identity: HypIdentity,
    pub n: usize,
    pub holds: bool,
    /// Exponent through which both sides were compared.
    pub valid_order: i64,
    /// First exponent where the sides differ.
    pub mismatch_at: Option<i64>,
}

fn half(n: usize, shift: i64) -> Rational {
    rat(shift - n as i64, 2)
}

fn x_d_minus_one() -> DiffOperator {
    DiffOperator::new(vec![
        RationalFunction::constant(int(-1)),
        RationalFunction::from(Polynomial::x()),
    ])
}

/// `e^{x^2}` through `x^order`.
pub fn exp_x_squared(order: usize) -> TruncatedSeries {
    hyp1f1_in_x_squared(&int(1), &int(1), order).expect("b = 1")
}

fn compare(identity: HypIdentity, n: usize, lhs: &TruncatedSeries, rhs: &TruncatedSeries) -> HypCheck {
    let valid_order = lhs.trunc_order().min(rhs.trunc_order());
    let mismatch_at = (lhs - rhs).first_nonzero_through(valid_order);
    HypCheck {
        identity,
        n,
        holds: mismatch_at.is_none(),
        valid_order,
        mismatch_at,
    }
}

pub fn check_identity(identity: HypIdentity, n: usize, order: usize) -> Result<HypCheck> {
    let x = Polynomial::x();
    let (lhs, rhs) = match identity {
        HypIdentity::EvenLowering => {
            let f = hyp1f1_in_x_squared(&half(n, 0), &rat(1, 2), order)?;
            let lhs = x_d_minus_one().apply_series(&f)?;
            let rhs = -&hyp1f1_in_x_squared(&half(n, 0), &rat(-1, 2), order)?;
            (lhs, rhs)
        }
        HypIdentity::OddRaising => {
            let g = hyp1f1_in_x_squared(&half(n, 1), &rat(3, 2), order)?.mul_poly(&x);
            let lhs = x_d_minus_one().apply_series(&g)?;
            let coeff = rat(2, 3) * int(1 - n as i64);
            let rhs = hyp1f1_in_x_squared(&half(n, 3), &rat(5, 2), order)?.mul_poly(&Polynomial::monomial(coeff, 3));
            (lhs, rhs)
        }
        HypIdentity::Integral => {
            let trunc = order as i64;
            let f = hyp1f1_in_x_squared(&half(n, 0), &rat(1, 2), order)?;
            let inv_sq = (&f * &f).reciprocal(trunc)?;
            let integrand = &exp_x_squared(order) * &inv_sq;
            let rhs = &f * &integrand.integrate()?;
            let lhs = hyp1f1_in_x_squared(&half(n, 1), &rat(3, 2), order)?.mul_poly(&x);
            (lhs, rhs)
        }
    };
    Ok(compare(identity, n, &lhs, &rhs))
}

/// Every identity for `n` in `0..=n_max`. Parameter poles are reported as
/// `Err` entries rather than aborting the sweep.
pub fn check_all(exec: Execution, n_max: usize, order: usize) -> Vec<(HypIdentity, usize, Result<HypCheck>)> {
    let jobs: Vec<(HypIdentity, usize)> = HypIdentity::ALL
        .iter()
        .flat_map(|&id| (0..=n_max).map(move |n| (id, n)))
        .collect();
    parallel::map(exec, jobs, |(id, n)| (id, n, check_identity(id, n, order)))
}

pub fn is_parameter_pole(e: &Error) -> bool {
    matches!(e, Error::PochhammerPole { .. })
}

//! Operator identities `sum_k c_k (ad L)^k (Theta) = 0`.

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::bispectral::builtin_recursion;
use crate::diffop::DiffOperator;
use crate::families::{family_operator, two_gap_tau, FamilyId};
use crate::parallel::{self, Execution};
use crate::poly::Polynomial;
use crate::ratfun::RationalFunction;
use crate::rational::{int, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdIdentity {
    pub name: String,
    pub family: FamilyId,
    pub op: DiffOperator,
    pub theta: Polynomial,
    /// `(k, c_k)`; `k = 0` is multiplication by `theta`.
    pub terms: Vec<(usize, Rational)>,
}

impl AdIdentity {
    pub fn new(family: FamilyId, name: &str, terms: &[(usize, i64)]) -> Self {
        AdIdentity {
            name: name.to_string(),
            family,
            op: family_operator(family),
            theta: builtin_recursion(family).theta,
            terms: terms.iter().map(|&(k, c)| (k, int(c))).collect(),
        }
    }

    fn theta_op(&self) -> DiffOperator {
        DiffOperator::multiplication(RationalFunction::from(self.theta.clone()))
    }
}

pub fn ad_identity_residual(id: &AdIdentity) -> DiffOperator {
    let theta = id.theta_op();
    id.terms.iter().fold(DiffOperator::zero(), |acc, (k, c)| {
        &acc + &id.op.ad_power(&theta, *k).scale(c)
    })
}

/// `sum_j (-1)^j C(k, j) L^{k-j} Y L^j`.
pub fn ad_power_expanded(l: &DiffOperator, y: &DiffOperator, k: usize) -> DiffOperator {
    let mut powers = vec![DiffOperator::identity()];
    for _ in 0..k {
        let next = powers.last().expect("nonempty").compose(l);
        powers.push(next);
    }
    let mut binom = BigInt::one();
    let mut acc = DiffOperator::zero();
    for j in 0..=k {
        let sign = if j % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        let c = Rational::from_integer(&binom * sign);
        let term = powers[k - j].compose(y).compose(&powers[j]).scale(&c);
        acc = &acc + &term;
        binom = binom * BigInt::from(k - j) / BigInt::from(j + 1);
    }
    acc
}

/// The four listed identities and whether each is expected to hold.
pub fn builtin_ad_suite() -> Vec<(AdIdentity, bool)> {
    vec![
        (AdIdentity::new(FamilyId::Hermite, "hermite", &[(3, 1), (1, -4)]), true),
        (AdIdentity::new(FamilyId::OneGap, "one-gap", &[(4, 1), (2, -16)]), true),
        (
            AdIdentity::new(FamilyId::OneGap, "one-gap-stronger", &[(2, 1), (0, -16)]),
            false,
        ),
        (
            AdIdentity::new(FamilyId::TwoGap, "two-gap", &[(4, 1), (2, -40), (0, 144)]),
            true,
        ),
    ]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AdEntry {
    pub name: String,
    pub theta_degree: usize,
    pub powers: Vec<usize>,
    #[serde(serialize_with = "crate::rational::serde_fraction_vec::serialize")]
    pub coefficients: Vec<Rational>,
    pub residual_is_zero: bool,
    /// Differential order of the residual; `None` when it vanishes.
    pub residual_order: Option<usize>,
    pub expected_zero: bool,
    pub passed: bool,
    pub residual: DiffOperator,
}

pub fn run_ad_suite(exec: Execution) -> Vec<AdEntry> {
    parallel::map(exec, builtin_ad_suite(), |(id, expected_zero)| {
        let residual = ad_identity_residual(&id);
        let residual_is_zero = residual.is_zero();
        AdEntry {
            name: id.name.clone(),
            theta_degree: id.theta.degree().unwrap_or(0),
            powers: id.terms.iter().map(|t| t.0).collect(),
            coefficients: id.terms.iter().map(|t| t.1.clone()).collect(),
            residual_is_zero,
            residual_order: residual.order(),
            expected_zero,
            passed: residual_is_zero == expected_zero,
            residual,
        }
    })
}

/// `ad^k` by iteration agrees with the binomial expansion for `k <= max_k`.
pub fn ad_power_consistent(id: &AdIdentity, max_k: usize) -> bool {
    let theta = id.theta_op();
    (0..=max_k).all(|k| id.op.ad_power(&theta, k) == ad_power_expanded(&id.op, &theta, k))
}

/// `Theta'` vanishes where expected: at `0` for one-gap, on `2x^2 - 1` for two-gap.
pub fn tau_vanishing_holds(f: FamilyId) -> bool {
    let tau = builtin_recursion(f).tau();
    match f {
        FamilyId::Hermite => tau.is_constant() && !tau.is_zero(),
        FamilyId::OneGap => tau.div_exact(&Polynomial::x()).is_some(),
        FamilyId::TwoGap => tau.div_exact(&two_gap_tau()).is_some(),
    }
}

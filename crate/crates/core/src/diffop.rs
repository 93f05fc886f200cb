//! Ordinary differential operators `sum_k a_k(x) d^k` with rational-function
//! coefficients.
//!
//! Composition follows the Leibniz rule
//! `a d^k . b d^j = sum_i C(k,i) a b^(i) d^(k+j-i)`, so every identity between
//! operators is decided by comparing canonical coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::ratfun::RationalFunction;
use crate::rational::Rational;
use crate::series::{TruncatedSeries, MAX_POLE_DEPTH};

#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "OperatorRepr", into = "OperatorRepr")]
pub struct DiffOperator {
    coeffs: Vec<RationalFunction>,
}

#[derive(Serialize, Deserialize)]
struct OperatorRepr {
    order: Option<usize>,
    coeffs: Vec<RationalFunction>,
}

impl From<DiffOperator> for OperatorRepr {
    fn from(op: DiffOperator) -> Self {
        OperatorRepr {
            order: op.order(),
            coeffs: op.coeffs,
        }
    }
}

impl TryFrom<OperatorRepr> for DiffOperator {
    type Error = Error;
    fn try_from(r: OperatorRepr) -> Result<Self> {
        let op = DiffOperator::new(r.coeffs);
        if op.order() != r.order {
            return Err(Error::InvalidArgument(format!(
                "declared order {:?} does not match coefficients (order {:?})",
                r.order,
                op.order()
            )));
        }
        Ok(op)
    }
}

fn binomial(n: usize, k: usize) -> Rational {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    Rational::from_integer(acc)
}

impl DiffOperator {
    /// `coeffs[k]` multiplies `d^k`. Trailing zero coefficients are dropped.
    pub fn new(mut coeffs: Vec<RationalFunction>) -> Self {
        while coeffs.last().is_some_and(RationalFunction::is_zero) {
            coeffs.pop();
        }
        DiffOperator { coeffs }
    }

    pub fn zero() -> Self {
        DiffOperator { coeffs: Vec::new() }
    }

    pub fn identity() -> Self {
        Self::multiplication(RationalFunction::one())
    }

    /// The plain derivative `d/dx`.
    pub fn derivation() -> Self {
        Self::new(vec![RationalFunction::zero(), RationalFunction::one()])
    }

    /// Multiplication by `f`, an operator of order zero.
    pub fn multiplication(f: RationalFunction) -> Self {
        Self::new(vec![f])
    }

    pub fn scalar(c: Rational) -> Self {
        Self::multiplication(RationalFunction::constant(c))
    }

    pub fn coeffs(&self) -> &[RationalFunction] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> RationalFunction {
        self.coeffs.get(k).cloned().unwrap_or_else(RationalFunction::zero)
    }

    pub fn order(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.scale(c)).collect())
    }

    /// `self + c I`.
    pub fn add_scalar(&self, c: &Rational) -> Self {
        self + &Self::scalar(c.clone())
    }

    pub fn compose(&self, rhs: &DiffOperator) -> DiffOperator {
        let (Some(ka), Some(kb)) = (self.order(), rhs.order()) else {
            return Self::zero();
        };
        // derivs[j][i] = i-th derivative of rhs.coeffs[j]
        let derivs: Vec<Vec<RationalFunction>> = rhs
            .coeffs
            .iter()
            .map(|b| {
                let mut ds = Vec::with_capacity(ka + 1);
                let mut cur = b.clone();
                for i in 0..=ka {
                    if i > 0 {
                        cur = cur.derivative();
                    }
                    ds.push(cur.clone());
                }
                ds
            })
            .collect();
        let mut out = vec![RationalFunction::zero(); ka + kb + 1];
        for (k, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, ds) in derivs.iter().enumerate() {
                for (i, bi) in ds.iter().enumerate().take(k + 1) {
                    if bi.is_zero() {
                        continue;
                    }
                    let term = (a * bi).scale(&binomial(k, i));
                    out[k + j - i] = &out[k + j - i] + &term;
                }
            }
        }
        Self::new(out)
    }

    /// `[self, rhs] = self rhs - rhs self`.
    pub fn commutator(&self, rhs: &DiffOperator) -> DiffOperator {
        &self.compose(rhs) - &rhs.compose(self)
    }

    /// `(ad self)^k (y)`, with `(ad self)^0 (y) = y`.
    pub fn ad_power(&self, y: &DiffOperator, k: usize) -> DiffOperator {
        (0..k).fold(y.clone(), |acc, _| self.commutator(&acc))
    }

    /// `A(p)` as a rational function (the coefficients of `A` may be rational).
    pub fn apply_poly(&self, p: &Polynomial) -> RationalFunction {
        let mut deriv = p.clone();
        let mut acc = RationalFunction::zero();
        for (k, a) in self.coeffs.iter().enumerate() {
            if k > 0 {
                deriv = deriv.derivative();
            }
            if deriv.is_zero() {
                break;
            }
            if !a.is_zero() {
                acc = &acc + &a.mul_poly(&deriv);
            }
        }
        acc
    }

    /// `A(s)` for a truncated Laurent series, exact through the propagated order.
    ///
    /// The term `a_k s^(k)` is known through `N - k + v_k`, where `N` is the
    /// truncation of `s` and `v_k` the order of `a_k` at zero.
    pub fn apply_series(&self, s: &TruncatedSeries) -> Result<TruncatedSeries> {
        let n = s.trunc_order();
        let mut deriv = s.clone();
        let mut acc: Option<TruncatedSeries> = None;
        for (k, a) in self.coeffs.iter().enumerate() {
            if k > 0 {
                deriv = deriv.derivative();
            }
            let Some(v) = a.order_at_zero() else {
                continue;
            };
            let valid = n - k as i64 + v;
            let term = if deriv.is_zero() {
                TruncatedSeries::zero(valid)
            } else {
                let need = valid - deriv.low_order();
                let a_series = a.series_at_zero(need)?;
                &a_series * &deriv
            };
            acc = Some(match acc {
                None => term,
                Some(prev) => &prev + &term,
            });
        }
        let out = acc.unwrap_or_else(|| TruncatedSeries::zero(n));
        if let Some(low) = out.first_nonzero() {
            if low < -MAX_POLE_DEPTH {
                return Err(Error::PoleDepthExceeded {
                    depth: -low,
                    bound: MAX_POLE_DEPTH,
                });
            }
        }
        Ok(out)
    }

    /// `h^{-1} . A . h` where `w = h'/h`, via the substitution `d -> d + w`.
    pub fn gauge(&self, w: &GaugeWeight) -> DiffOperator {
        let shifted = &Self::derivation() + &Self::multiplication(w.0.clone());
        let mut power = Self::identity();
        let mut acc = Self::zero();
        for (k, a) in self.coeffs.iter().enumerate() {
            if k > 0 {
                power = shifted.compose(&power);
            }
            if !a.is_zero() {
                acc = &acc + &Self::multiplication(a.clone()).compose(&power);
            }
        }
        acc
    }

    /// Residual `A T - T B` of the intertwining relation `A T = T B`.
    pub fn intertwine_residual(a: &DiffOperator, b: &DiffOperator, t: &DiffOperator) -> DiffOperator {
        &a.compose(t) - &t.compose(b)
    }

    pub fn is_canonical(&self) -> bool {
        self.coeffs.last().is_none_or(|c| !c.is_zero()) && self.coeffs.iter().all(RationalFunction::is_canonical)
    }
}

/// Outcome of an intertwining check `A T = T B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntertwineCheck {
    pub holds: bool,
    pub residual: DiffOperator,
}

pub fn intertwine_check(a: &DiffOperator, b: &DiffOperator, t: &DiffOperator) -> IntertwineCheck {
    let residual = DiffOperator::intertwine_residual(a, b, t);
    IntertwineCheck {
        holds: residual.is_zero(),
        residual,
    }
}

/// Logarithmic derivative `w = h'/h` of a gauge factor `h`.
///
/// The factor itself may be transcendental (`e^{x^2/2}`); only `w` is needed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaugeWeight(pub RationalFunction);

impl GaugeWeight {
    pub fn new(w: RationalFunction) -> Self {
        GaugeWeight(w)
    }

    /// Weight of the product of two gauge factors.
    pub fn combine(&self, other: &GaugeWeight) -> GaugeWeight {
        GaugeWeight(&self.0 + &other.0)
    }
}

impl fmt::Display for DiffOperator {
    /// Highest derivative first, e.g. `∂^2 - (2x + 2/x)∂ + 2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (k, a) in self.coeffs.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let d = match k {
                0 => String::new(),
                1 => "∂".to_string(),
                _ => format!("∂^{k}"),
            };
            // the multiplication term comes last, so its own signs can be spliced in
            let (neg, term) = if k == 0 {
                let body = a.to_string();
                match body.strip_prefix('-') {
                    Some(rest) => (true, rest.to_string()),
                    None => (false, body),
                }
            } else {
                let neg = a.num().leading().is_some_and(|c| c < &Rational::zero());
                let mag = if neg { -a } else { a.clone() };
                let single_term = mag.is_polynomial() && mag.num().is_monomial();
                let body = mag.to_string();
                let term = if single_term && body == "1" {
                    d
                } else if single_term {
                    format!("{body}{d}")
                } else {
                    format!("({body}){d}")
                };
                (neg, term)
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&term);
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

impl fmt::Debug for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiffOperator({self})")
    }
}

impl Add for &DiffOperator {
    type Output = DiffOperator;
    fn add(self, rhs: &DiffOperator) -> DiffOperator {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        DiffOperator::new((0..n).map(|k| &self.coeff(k) + &rhs.coeff(k)).collect())
    }
}

impl Sub for &DiffOperator {
    type Output = DiffOperator;
    fn sub(self, rhs: &DiffOperator) -> DiffOperator {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        DiffOperator::new((0..n).map(|k| &self.coeff(k) - &rhs.coeff(k)).collect())
    }
}

impl Neg for &DiffOperator {
    type Output = DiffOperator;
    fn neg(self) -> DiffOperator {
        DiffOperator::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &DiffOperator {
    type Output = DiffOperator;
    fn mul(self, rhs: &DiffOperator) -> DiffOperator {
        self.compose(rhs)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for DiffOperator {
            type Output = DiffOperator;
            fn $m(self, rhs: DiffOperator) -> DiffOperator {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn rf(num: &[i64], den: &[i64]) -> RationalFunction {
        RationalFunction::from_ints(num, den).unwrap()
    }

    fn poly(c: &[i64]) -> RationalFunction {
        rf(c, &[1])
    }

    fn hermite() -> DiffOperator {
        DiffOperator::new(vec![poly(&[0]), poly(&[0, -2]), poly(&[1])])
    }

    fn one_gap() -> DiffOperator {
        DiffOperator::new(vec![poly(&[0]), rf(&[-2, 0, -2], &[0, 1]), poly(&[1])])
    }

    #[test]
    fn darboux_factorization_both_orders() {
        let a = DiffOperator::new(vec![poly(&[-2]), rf(&[1], &[0, 1])]); // (1/x)d - 2
        let b = DiffOperator::new(vec![poly(&[-1]), poly(&[0, 1])]); // x d - 1
        assert_eq!(a.compose(&b), hermite().add_scalar(&int(2)));
        assert_eq!(b.compose(&a), one_gap().add_scalar(&int(2)));
    }

    #[test]
    fn identity_is_neutral() {
        let h = hermite();
        assert_eq!(h.compose(&DiffOperator::identity()), h);
        assert_eq!(DiffOperator::identity().compose(&h), h);
        assert!(h.compose(&DiffOperator::zero()).is_zero());
    }

    #[test]
    fn hermite_commutators_with_x() {
        let x = DiffOperator::multiplication(poly(&[0, 1]));
        let h = hermite();
        let once = h.ad_power(&x, 1);
        assert_eq!(once, DiffOperator::new(vec![poly(&[0, -2]), poly(&[2])]));
        assert_eq!(h.ad_power(&x, 2), DiffOperator::multiplication(poly(&[0, 4])));
        assert_eq!(h.ad_power(&x, 0), x);
        assert!(h.commutator(&h).is_zero());
    }

    #[test]
    fn apply_to_polynomials() {
        let h2 = Polynomial::from_ints(&[-2, 0, 4]);
        assert_eq!(hermite().apply_poly(&h2), RationalFunction::from(h2.scale(&int(-4))));
        let p3 = Polynomial::from_ints(&[0, 0, 0, 16]);
        assert!(one_gap().add_scalar(&int(6)).apply_poly(&p3).is_zero());
    }

    #[test]
    fn apply_to_series() {
        let d = DiffOperator::derivation();
        let s = TruncatedSeries::new(1, vec![int(1), int(0), crate::rational::rat(1, 3)], 3);
        assert_eq!(
            d.apply_series(&s).unwrap(),
            TruncatedSeries::new(0, vec![int(1), int(0), int(1)], 2)
        );
        // (1/x) d on 1 + x^2 gives 2 exactly, known through order N - 2
        let inv_x_d = DiffOperator::new(vec![poly(&[0]), rf(&[1], &[0, 1])]);
        let t = TruncatedSeries::new(0, vec![int(1), int(0), int(1)], 6);
        let r = inv_x_d.apply_series(&t).unwrap();
        assert_eq!(r.coeff(0), Some(int(2)));
        assert_eq!(r.trunc_order(), 4);
        // (1/x) d on x: a genuine x^-1 term
        let u = TruncatedSeries::new(1, vec![int(1)], 6);
        assert_eq!(inv_x_d.apply_series(&u).unwrap().low_order(), -1);
    }

    #[test]
    fn gauge_hermite_to_oscillator() {
        let w = GaugeWeight::new(poly(&[0, 1]));
        let expected = DiffOperator::new(vec![poly(&[1, 0, -1]), poly(&[0]), poly(&[1])]);
        assert_eq!(hermite().gauge(&w), expected);
        assert_eq!(hermite().gauge(&GaugeWeight::new(RationalFunction::zero())), hermite());
    }

    #[test]
    fn gauge_one_gap() {
        let w = GaugeWeight::new(rf(&[1, 0, 1], &[0, 1]));
        // d^2 - x^2 - 1 - 2/x^2
        let c0 = rf(&[-2, 0, -1, 0, -1], &[0, 0, 1]);
        let expected = DiffOperator::new(vec![c0, poly(&[0]), poly(&[1])]);
        assert_eq!(one_gap().gauge(&w), expected);
    }

    #[test]
    fn display_forms() {
        assert_eq!(hermite().to_string(), "∂^2 - 2x∂");
        assert_eq!(one_gap().add_scalar(&int(2)).to_string(), "∂^2 - (2x + 2/x)∂ + 2");
        assert_eq!(DiffOperator::zero().to_string(), "0");
        let rf = |n: &[i64], d: &[i64]| RationalFunction::from_ints(n, d).unwrap();
        let two_gap = DiffOperator::new(vec![
            rf(&[8], &[-1, 0, 2]),
            rf(&[0, -6, 0, -4], &[-1, 0, 2]),
            rf(&[1], &[1]),
        ]);
        assert_eq!(two_gap.to_string(), "∂^2 - ((4x^3 + 6x)/(2x^2 - 1))∂ + 8/(2x^2 - 1)");
        let schroedinger = DiffOperator::new(vec![
            rf(&[-2, 0, -1, 0, -1], &[0, 0, 1]),
            RationalFunction::zero(),
            rf(&[1], &[1]),
        ]);
        assert_eq!(schroedinger.to_string(), "∂^2 - x^2 - 1 - 2/x^2");
    }

    #[test]
    fn json_round_trip() {
        let op = one_gap();
        let v = serde_json::to_value(&op).unwrap();
        assert_eq!(v["order"], 2);
        assert_eq!(v["coeffs"][1]["den"], serde_json::json!(["0/1", "1/1"]));
        let back: DiffOperator = serde_json::from_value(v).unwrap();
        assert_eq!(back, op);
    }
}

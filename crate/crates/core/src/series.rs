//! Truncated Laurent series `sum_{i=low}^{trunc} c_i x^i + O(x^{trunc+1})`.
//!
//! Every operation records the exponent through which its result is exact, so
//! identity checks only ever compare certified coefficients. Stored
//! coefficients start at the first nonzero one; a series with no known nonzero
//! coefficient has an empty window and `low = trunc + 1`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::rational::{self, Rational};
use crate::render::join_terms;

/// Deepest pole a series may carry.
pub const MAX_POLE_DEPTH: i64 = 8;

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SeriesRepr", into = "SeriesRepr")]
pub struct TruncatedSeries {
    low: i64,
    trunc: i64,
    coeffs: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct SeriesRepr {
    low_order: i64,
    trunc_order: i64,
    #[serde(with = "rational::serde_fraction_vec")]
    coeffs: Vec<Rational>,
}

impl From<TruncatedSeries> for SeriesRepr {
    fn from(s: TruncatedSeries) -> Self {
        SeriesRepr {
            low_order: s.low,
            trunc_order: s.trunc,
            coeffs: s.coeffs,
        }
    }
}

impl TryFrom<SeriesRepr> for TruncatedSeries {
    type Error = Error;
    fn try_from(r: SeriesRepr) -> Result<Self> {
        if r.low_order + r.coeffs.len() as i64 - 1 > r.trunc_order {
            return Err(Error::InvalidArgument(
                "series has more coefficients than its truncation order allows".into(),
            ));
        }
        Ok(TruncatedSeries::new(r.low_order, r.coeffs, r.trunc_order))
    }
}

impl TruncatedSeries {
    /// Coefficients `coeffs[k]` of `x^{low+k}`, exact through `x^trunc`.
    /// Entries past `trunc` are dropped; missing entries up to `trunc` are zero.
    pub fn new(low: i64, coeffs: Vec<Rational>, trunc: i64) -> Self {
        let mut coeffs = coeffs;
        let keep = (trunc - low + 1).max(0) as usize;
        coeffs.truncate(keep);
        let lead = coeffs.iter().position(|c| !c.is_zero());
        match lead {
            None => Self::zero(trunc),
            Some(k) => {
                coeffs.drain(..k);
                let low = low + k as i64;
                coeffs.resize((trunc - low + 1) as usize, Rational::zero());
                TruncatedSeries { low, trunc, coeffs }
            }
        }
    }

    /// `O(x^{trunc+1})`.
    pub fn zero(trunc: i64) -> Self {
        TruncatedSeries {
            low: trunc + 1,
            trunc,
            coeffs: Vec::new(),
        }
    }

    pub fn one(trunc: i64) -> Self {
        Self::new(0, vec![Rational::one()], trunc)
    }

    pub fn from_polynomial(p: &Polynomial, trunc: i64) -> Self {
        Self::new(0, p.coeffs().to_vec(), trunc)
    }

    pub fn monomial(c: Rational, k: i64, trunc: i64) -> Self {
        Self::new(k, vec![c], trunc)
    }

    /// Lowest exponent with a nonzero coefficient (`trunc + 1` if none).
    pub fn low_order(&self) -> i64 {
        self.low
    }

    /// Highest exponent through which the coefficients are exact.
    pub fn trunc_order(&self) -> i64 {
        self.trunc
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `x^k`; `None` above the truncation order.
    pub fn coeff(&self, k: i64) -> Option<Rational> {
        if k > self.trunc {
            None
        } else if k < self.low {
            Some(Rational::zero())
        } else {
            Some(self.coeffs[(k - self.low) as usize].clone())
        }
    }

    fn c(&self, k: i64) -> Rational {
        self.coeff(k).unwrap_or_else(Rational::zero)
    }

    /// `(exponent, coefficient)` over the stored window.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(k, c)| (self.low + k as i64, c))
    }

    /// Zero up to truncation: no known nonzero coefficient.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// First exponent carrying a nonzero coefficient, if any.
    pub fn first_nonzero(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.low)
    }

    pub fn truncate(&self, trunc: i64) -> Self {
        if trunc >= self.trunc {
            return self.clone();
        }
        Self::new(self.low, self.coeffs.clone(), trunc)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.low, self.coeffs.iter().map(|a| a * c).collect(), self.trunc)
    }

    /// Multiplication by `x^k`.
    pub fn shift(&self, k: i64) -> Self {
        TruncatedSeries {
            low: self.low + k,
            trunc: self.trunc + k,
            coeffs: self.coeffs.clone(),
        }
    }

    /// Exact polynomial times series; the polynomial has no truncation error.
    pub fn mul_poly(&self, p: &Polynomial) -> Self {
        let Some(v) = p.valuation() else {
            return Self::zero(self.trunc);
        };
        let v = v as i64;
        let trunc = self.trunc + v;
        let mut out = vec![Rational::zero(); (trunc - self.low - v + 1).max(0) as usize];
        for (i, a) in p.coeffs().iter().enumerate().skip(v as usize) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in self.coeffs.iter().enumerate() {
                let idx = (i as i64 - v) + j as i64;
                if idx as usize >= out.len() {
                    break;
                }
                out[idx as usize] += a * b;
            }
        }
        Self::new(self.low + v, out, trunc)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.low - 1,
            self.terms().map(|(k, c)| c * rational::int(k)).collect(),
            self.trunc - 1,
        )
    }

    /// Termwise antiderivative with zero constant term.
    pub fn integrate(&self) -> Result<Self> {
        if !self.c(-1).is_zero() {
            return Err(Error::LogTermRequired);
        }
        Ok(Self::new(
            self.low + 1,
            self.terms()
                .map(|(k, c)| {
                    if k == -1 {
                        Rational::zero()
                    } else {
                        c / rational::int(k + 1)
                    }
                })
                .collect(),
            self.trunc + 1,
        ))
    }

    /// `1/s` through `x^trunc` (or less, if `s` is not known far enough).
    pub fn reciprocal(&self, trunc: i64) -> Result<Self> {
        let v = self.first_nonzero().ok_or(Error::ReciprocalOfZeroLeadingTerm)?;
        if -v < -MAX_POLE_DEPTH {
            return Err(Error::PoleDepthExceeded {
                depth: v,
                bound: MAX_POLE_DEPTH,
            });
        }
        let out_trunc = trunc.min(self.trunc - 2 * v);
        let len = (out_trunc + v + 1).max(0) as usize;
        let u0_inv = self.coeffs[0].recip();
        let mut b: Vec<Rational> = Vec::with_capacity(len);
        for k in 0..len {
            if k == 0 {
                b.push(u0_inv.clone());
                continue;
            }
            let mut acc = Rational::zero();
            for j in 1..=k.min(self.coeffs.len() - 1) {
                acc += &self.coeffs[j] * &b[k - j];
            }
            b.push(-acc * &u0_inv);
        }
        Ok(Self::new(-v, b, out_trunc))
    }

    /// Substitutes `x -> x^2` (series in `t` becomes a series in `x = sqrt t`).
    pub fn compose_square(&self) -> Self {
        let mut coeffs = Vec::new();
        for c in &self.coeffs {
            if !coeffs.is_empty() {
                coeffs.push(Rational::zero());
            }
            coeffs.push(c.clone());
        }
        Self::new(2 * self.low, coeffs, 2 * self.trunc + 1)
    }

    pub fn is_even(&self) -> bool {
        self.terms().all(|(k, c)| k % 2 == 0 || c.is_zero())
    }

    pub fn is_odd(&self) -> bool {
        self.terms().all(|(k, c)| k % 2 != 0 || c.is_zero())
    }

    /// True when both agree on every exponent through `order`.
    pub fn agrees_through(&self, other: &TruncatedSeries, order: i64) -> bool {
        if order > self.trunc || order > other.trunc {
            return false;
        }
        let lo = self.low.min(other.low);
        (lo..=order).all(|k| self.c(k) == other.c(k))
    }

    /// First exponent at which the series is known to be nonzero.
    pub fn first_nonzero_through(&self, order: i64) -> Option<i64> {
        self.first_nonzero().filter(|&k| k <= order)
    }

    pub fn is_canonical(&self) -> bool {
        let len_ok = if self.coeffs.is_empty() {
            self.low == self.trunc + 1
        } else {
            self.coeffs.len() as i64 == self.trunc - self.low + 1 && !self.coeffs[0].is_zero()
        };
        len_ok && self.coeffs.iter().all(rational::is_canonical)
    }

    /// Drops the truncation marker: the known part as a polynomial.
    /// `None` if the series has negative powers.
    pub fn to_polynomial(&self) -> Option<Polynomial> {
        if self.is_zero() {
            return Some(Polynomial::zero());
        }
        if self.low < 0 {
            return None;
        }
        Some(Polynomial::new(self.coeffs.clone()).shift(self.low as usize))
    }
}

impl fmt::Display for TruncatedSeries {
    /// Ascending powers without the order term, e.g. `x + (1/3)x^3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&join_terms(self.terms().map(|(k, c)| (c, k)), "x"))
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} + O(x^{})", self.trunc + 1)
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let trunc = self.trunc.min(rhs.trunc);
        let low = self.low.min(rhs.low);
        TruncatedSeries::new(low, (low..=trunc).map(|k| self.c(k) + rhs.c(k)).collect(), trunc)
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self + &(-rhs)
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        TruncatedSeries {
            low: self.low,
            trunc: self.trunc,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    /// Valid through `min(N1 + m2, N2 + m1)` where `m` is the lowest nonzero
    /// exponent of each factor.
    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let trunc = (self.trunc + rhs.low).min(rhs.trunc + self.low);
        let low = self.low + rhs.low;
        if self.is_zero() || rhs.is_zero() {
            return TruncatedSeries::zero(trunc);
        }
        let len = (trunc - low + 1).max(0) as usize;
        let mut out = vec![Rational::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= len {
                break;
            }
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(len - i) {
                out[i + j] += a * b;
            }
        }
        TruncatedSeries::new(low, out, trunc)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for TruncatedSeries {
            type Output = TruncatedSeries;
            fn $m(self, rhs: TruncatedSeries) -> TruncatedSeries {
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
    use crate::rational::{int, rat};

    fn s(low: i64, c: &[Rational], trunc: i64) -> TruncatedSeries {
        TruncatedSeries::new(low, c.to_vec(), trunc)
    }

    #[test]
    fn geometric_reciprocal() {
        let one_minus_x2 = s(0, &[int(1), int(0), int(-1)], 10);
        let r = one_minus_x2.reciprocal(4).unwrap();
        assert_eq!(r, s(0, &[int(1), int(0), int(1), int(0), int(1)], 4));
    }

    #[test]
    fn reciprocal_of_laurent_monomial() {
        let r = TruncatedSeries::monomial(int(2), 1, 6).reciprocal(3).unwrap();
        assert_eq!(r.low_order(), -1);
        assert_eq!(r.coeff(-1), Some(rat(1, 2)));
        assert_eq!(r.trunc_order(), 3);
    }

    #[test]
    fn reciprocal_errors() {
        assert_eq!(
            TruncatedSeries::zero(5).reciprocal(5),
            Err(Error::ReciprocalOfZeroLeadingTerm)
        );
        assert!(matches!(
            TruncatedSeries::monomial(int(1), 9, 20).reciprocal(0),
            Err(Error::PoleDepthExceeded { .. })
        ));
    }

    #[test]
    fn derivative_power_rule() {
        let f = s(1, &[int(1), int(0), rat(1, 3)], 3);
        assert_eq!(f.derivative(), s(0, &[int(1), int(0), int(1)], 2));
    }

    #[test]
    fn integrate_fixes_constant_and_rejects_log() {
        let f = s(0, &[int(1), int(0), int(1)], 2);
        let g = f.integrate().unwrap();
        assert_eq!(g.coeff(0), Some(int(0)));
        assert_eq!(g, s(1, &[int(1), int(0), rat(1, 3)], 3));
        let h = s(-1, &[int(1), int(1)], 3);
        assert_eq!(h.integrate(), Err(Error::LogTermRequired));
    }

    #[test]
    fn product_truncation_rule() {
        // (x^-1 + O(x^4)) * (1 + x + O(x^6)) is known through min(4+0, 6-1) = 4
        let a = s(-1, &[int(1)], 4);
        let b = s(0, &[int(1), int(1)], 6);
        let p = &a * &b;
        assert_eq!(p.trunc_order(), 4);
        assert_eq!(p.low_order(), -1);
        assert_eq!(p.coeff(0), Some(int(1)));
    }

    #[test]
    fn compose_square_extends_truncation() {
        let t = s(0, &[int(1), int(1), int(1)], 2);
        let x = t.compose_square();
        assert_eq!(x.trunc_order(), 5);
        assert_eq!(x.coeff(4), Some(int(1)));
        assert_eq!(x.coeff(3), Some(int(0)));
    }

    #[test]
    fn json_shape() {
        let f = s(-1, &[int(1), rat(1, 2)], 1);
        let v = serde_json::to_value(&f).unwrap();
        assert_eq!(v["lowOrder"], -1);
        assert_eq!(v["truncOrder"], 1);
        assert_eq!(v["coeffs"][1], "1/2");
        let back: TruncatedSeries = serde_json::from_value(v).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn display_ascending() {
        let f = s(1, &[int(1), int(0), rat(1, 3), int(0), rat(1, 10)], 7);
        assert_eq!(f.to_string(), "x + (1/3)x^3 + (1/10)x^5");
    }
}

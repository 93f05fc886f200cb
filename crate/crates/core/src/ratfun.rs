//! Rational functions `num/den` in canonical form.
//!
//! Canonical means `gcd(num, den) = 1` and `den` monic (so its leading
//! coefficient is positive); zero is `0/1`. Two rational functions are equal
//! iff their fields are equal.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::rational::Rational;
use crate::render::join_terms;
use crate::series::{TruncatedSeries, MAX_POLE_DEPTH};

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RatFunRepr", into = "RatFunRepr")]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

#[derive(Serialize, Deserialize)]
struct RatFunRepr {
    num: Polynomial,
    den: Polynomial,
}

impl From<RationalFunction> for RatFunRepr {
    fn from(f: RationalFunction) -> Self {
        RatFunRepr { num: f.num, den: f.den }
    }
}

impl TryFrom<RatFunRepr> for RationalFunction {
    type Error = Error;
    fn try_from(r: RatFunRepr) -> Result<Self> {
        RationalFunction::new(r.num, r.den)
    }
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Polynomial, den: Polynomial) -> Self {
        Self::reduce_by(num, den, None)
    }

    /// Canonicalizes `num/den`. When `common` is given, it must contain every
    /// factor `num` and `den` can share, so only `gcd(num, common)` is taken.
    fn reduce_by(num: Polynomial, den: Polynomial, common: Option<&Polynomial>) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = if den.is_constant() || num.is_constant() {
            Polynomial::one()
        } else {
            num.gcd(common.unwrap_or(&den))
        };
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        let lc = den.leading().expect("nonzero denominator").clone();
        if !lc.is_one() {
            let inv = lc.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RationalFunction { num, den }
    }

    pub fn zero() -> Self {
        RationalFunction {
            num: Polynomial::zero(),
            den: Polynomial::one(),
        }
    }

    pub fn one() -> Self {
        Self::from(Polynomial::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from(Polynomial::constant(c))
    }

    pub fn from_ints(num: &[i64], den: &[i64]) -> Result<Self> {
        Self::new(Polynomial::from_ints(num), Polynomial::from_ints(den))
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_polynomial(&self) -> Option<&Polynomial> {
        self.is_polynomial().then_some(&self.num)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn mul_poly(&self, p: &Polynomial) -> Self {
        Self::reduce(&self.num * p, self.den.clone())
    }

    pub fn recip(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, other: &RationalFunction) -> Result<Self> {
        Ok(self * &other.recip()?)
    }

    pub fn derivative(&self) -> Self {
        if self.is_polynomial() {
            return Self::from(self.num.derivative());
        }
        // with g = gcd(d, d'), d = g e, d' = g h: (n/d)' = (n' e - n h) / (g e^2),
        // and the numerator is already coprime to e
        let d1 = self.den.derivative();
        let g = self.den.gcd(&d1);
        let e = self.den.div_exact(&g).expect("gcd divides");
        let h = d1.div_exact(&g).expect("gcd divides");
        let num = &(&self.num.derivative() * &e) - &(&self.num * &h);
        Self::reduce_by(num, &(&g * &e) * &e, Some(&g))
    }

    pub fn nth_derivative(&self, k: usize) -> Self {
        (0..k).fold(self.clone(), |f, _| f.derivative())
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.num.eval(x) / d)
    }

    /// Order of vanishing of the denominator at 0, i.e. the pole order there.
    pub fn pole_order_at_zero(&self) -> usize {
        self.den.valuation().unwrap_or(0)
    }

    /// Lowest exponent of the Laurent expansion at 0 (`None` for zero).
    pub fn order_at_zero(&self) -> Option<i64> {
        let v = self.num.valuation()? as i64;
        Some(v - self.pole_order_at_zero() as i64)
    }

    /// Laurent expansion at 0, exact through `x^trunc`.
    pub fn series_at_zero(&self, trunc: i64) -> Result<TruncatedSeries> {
        let pole = self.pole_order_at_zero() as i64;
        if pole > MAX_POLE_DEPTH {
            return Err(Error::PoleDepthExceeded {
                depth: pole,
                bound: MAX_POLE_DEPTH,
            });
        }
        let reduced_den = Polynomial::new(self.den.coeffs()[pole as usize..].to_vec());
        let inner_trunc = trunc + pole;
        let inv = TruncatedSeries::from_polynomial(&reduced_den, inner_trunc.max(0)).reciprocal(inner_trunc)?;
        Ok(inv.mul_poly(&self.num).truncate(inner_trunc).shift(-pole))
    }

    pub fn is_canonical(&self) -> bool {
        !self.den.is_zero()
            && self.den.leading().is_some_and(One::is_one)
            && self.num.gcd(&self.den).is_one()
            && (!self.num.is_zero() || self.den.is_one())
            && self.num.is_canonical()
            && self.den.is_canonical()
    }
}

impl From<Polynomial> for RationalFunction {
    fn from(p: Polynomial) -> Self {
        RationalFunction {
            num: p,
            den: Polynomial::one(),
        }
    }
}

impl fmt::Display for RationalFunction {
    /// Polynomials print as such; a monomial denominator `c x^k` prints as a
    /// Laurent polynomial (`-2x - 2/x`); anything else as `(num)/(den)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            return write!(f, "{}", self.num);
        }
        if self.den.is_monomial() {
            let k = self.den.degree().expect("nonzero") as i64;
            let c = self.den.leading().expect("nonzero").recip();
            let terms: Vec<(Rational, i64)> = self
                .num
                .coeffs()
                .iter()
                .enumerate()
                .rev()
                .map(|(j, a)| (a * &c, j as i64 - k))
                .collect();
            return f.write_str(&join_terms(terms.iter().map(|(a, e)| (a, *e)), "x"));
        }
        let scale = Rational::from_integer(self.den.coeffs().iter().fold(num_bigint::BigInt::one(), |acc, c| {
            num_integer::Integer::lcm(&acc, c.denom())
        }));
        let num = self.num.scale(&scale);
        let den = self.den.scale(&scale);
        if num.is_monomial() {
            write!(f, "{num}/({den})")
        } else {
            write!(f, "({num})/({den})")
        }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({self})")
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_polynomial() && rhs.is_polynomial() {
            return RationalFunction::from(&self.num + &rhs.num);
        }
        let g = self.den.gcd(&rhs.den);
        let a = rhs.den.div_exact(&g).expect("gcd divides");
        let b = self.den.div_exact(&g).expect("gcd divides");
        let num = &(&self.num * &a) + &(&rhs.num * &b);
        // any common factor of num and the lcm divides g
        RationalFunction::reduce_by(num, &self.den * &a, Some(&g))
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_polynomial() && rhs.is_polynomial() {
            return RationalFunction::from(&self.num * &rhs.num);
        }
        // cross-cancel; both inputs are already reduced
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let cancel = |p: &Polynomial, g: &Polynomial| {
            if g.is_one() {
                p.clone()
            } else {
                p.div_exact(g).expect("gcd divides")
            }
        };
        let num = &cancel(&self.num, &g1) * &cancel(&rhs.num, &g2);
        let den = &cancel(&self.den, &g2) * &cancel(&rhs.den, &g1);
        RationalFunction::reduce_by(num, den, Some(&Polynomial::one()))
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, rhs: RationalFunction) -> RationalFunction {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn rf(num: &[i64], den: &[i64]) -> RationalFunction {
        RationalFunction::from_ints(num, den).unwrap()
    }

    #[test]
    fn canonical_form() {
        let f = rf(&[-2, 0, 2], &[-2, 2]); // (2x^2-2)/(2x-2) = x+1
        assert_eq!(f, rf(&[1, 1], &[1]));
        let g = rf(&[4], &[-2, 0, 4]); // 4/(4x^2-2) = 1/(x^2-1/2)
        assert!(g.is_canonical());
        assert!(g.den().leading().unwrap().is_one());
        assert_eq!(rf(&[0], &[3, 1]), RationalFunction::zero());
        assert_eq!(RationalFunction::from_ints(&[1], &[0]), Err(Error::DivisionByZero));
    }

    #[test]
    fn quotient_rule() {
        // d/dx [4x/(2x^2-1)] = (-8x^2-4)/(2x^2-1)^2
        let f = rf(&[0, 4], &[-1, 0, 2]);
        let expected = rf(&[-4, 0, -8], &[1, 0, -4, 0, 4]);
        assert_eq!(f.derivative(), expected);
    }

    #[test]
    fn laurent_at_zero() {
        let s = rf(&[1], &[0, 1]).series_at_zero(4).unwrap();
        assert_eq!(s.low_order(), -1);
        assert_eq!(s.coeff(-1), Some(int(1)));
        assert!((0..=4).all(|k| s.coeff(k) == Some(int(0))));
        // 8/(2x^2-1) = -8 sum (2x^2)^i
        let s = rf(&[8], &[-1, 0, 2]).series_at_zero(6).unwrap();
        let expected = [-8, 0, -16, 0, -32, 0, -64];
        for (k, e) in expected.iter().enumerate() {
            assert_eq!(s.coeff(k as i64), Some(int(*e)));
        }
        assert_eq!(s.trunc_order(), 6);
    }

    #[test]
    fn deep_pole_rejected() {
        let mut den = vec![0; 10];
        den.push(1);
        assert!(matches!(
            rf(&[1], &den).series_at_zero(3),
            Err(Error::PoleDepthExceeded { depth: 10, .. })
        ));
    }

    #[test]
    fn division_by_zero_function() {
        assert_eq!(
            rf(&[1], &[1]).checked_div(&RationalFunction::zero()),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn renders_laurent_coefficients() {
        assert_eq!(rf(&[-2, 0, -2], &[0, 1]).to_string(), "-2x - 2/x");
        assert_eq!(rf(&[8], &[-1, 0, 2]).to_string(), "8/(2x^2 - 1)");
        assert_eq!(rf(&[0, 12, 0, 8], &[-1, 0, 2]).to_string(), "(8x^3 + 12x)/(2x^2 - 1)");
    }
}

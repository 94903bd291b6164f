//! Exact scalar arithmetic plus the numeric comparison policy.
//!
//! Every quantity in the library (eigenvalues, decomposition weights,
//! measures) is a [`Scalar`]: an arbitrary-precision rational. Inputs given
//! as binary floats are converted to their exact rational value, so all
//! arithmetic downstream is exact in both numeric modes. What changes with
//! the mode is *comparison*: rational mode compares exactly, float mode
//! compares up to a relative tolerance `|a-b| <= tol * max(1, |a|, |b|)`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// An exact rational number.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Scalar(BigRational);

impl Scalar {
    pub fn zero() -> Self {
        Scalar(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar(BigRational::one())
    }

    pub fn from_int(v: i64) -> Self {
        Scalar(BigRational::from_integer(BigInt::from(v)))
    }

    /// Exact ratio `p / q`. Panics if `q == 0`.
    pub fn from_ratio(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        Scalar(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    /// Exact value of a finite binary float.
    pub fn from_f64(v: f64) -> Result<Self> {
        BigRational::from_float(v).map(Scalar).ok_or_else(|| Error::InvalidScalar {
            text: v.to_string(),
            reason: "not a finite number".into(),
        })
    }

    /// Parses `"p/q"`, an integer string, or a plain decimal such as `-1.4`
    /// (read exactly, i.e. `-14/10`).
    pub fn parse(text: &str) -> Result<Self> {
        let bad = |reason: &str| Error::InvalidScalar {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        let s = text.trim();
        if s.is_empty() {
            return Err(bad("empty"));
        }
        if let Some((num, den)) = s.split_once('/') {
            let p: BigInt = num.trim().parse().map_err(|_| bad("bad numerator"))?;
            let q: BigInt = den.trim().parse().map_err(|_| bad("bad denominator"))?;
            if q.is_zero() {
                return Err(bad("zero denominator"));
            }
            return Ok(Scalar(BigRational::new(p, q)));
        }
        if let Some((int_part, frac_part)) = s.split_once('.') {
            let negative = int_part.trim_start().starts_with('-');
            let int_digits = if int_part.is_empty() || int_part == "-" || int_part == "+" {
                "0".to_string()
            } else {
                int_part.to_string()
            };
            let whole: BigInt = int_digits.parse().map_err(|_| bad("bad integer part"))?;
            if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad("bad fractional part"));
            }
            let frac: BigInt = frac_part.parse().map_err(|_| bad("bad fractional part"))?;
            let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
            let signed_frac = if negative { -frac } else { frac };
            return Ok(Scalar(BigRational::new(whole * &scale + signed_frac, scale)));
        }
        let p: BigInt = s.parse().map_err(|_| bad("not an integer, ratio, or decimal"))?;
        Ok(Scalar(BigRational::from_integer(p)))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Scalar(self.0.abs())
    }

    pub fn mul_int(&self, k: i64) -> Self {
        Scalar(&self.0 * BigInt::from(k))
    }

    /// Exact division by a nonzero integer.
    pub fn div_int(&self, k: i64) -> Self {
        assert!(k != 0, "division by zero");
        Scalar(&self.0 / BigInt::from(k))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                Scalar(self.0 $op rhs.0)
            }
        }
        impl $trait for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                Scalar(&self.0 $op &rhs.0)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                Scalar(self.0 $op &rhs.0)
            }
        }
    };
}

scalar_binop!(Add, add, +);
scalar_binop!(Sub, sub, -);
scalar_binop!(Mul, mul, *);

impl Div for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        assert!(!rhs.is_zero(), "division by zero");
        Scalar(&self.0 / &rhs.0)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-self.0)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-&self.0)
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

impl<'a> std::iter::Sum<&'a Scalar> for Scalar {
    fn sum<I: Iterator<Item = &'a Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

/// Which comparison semantics a computation uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NumericMode {
    Rational,
    Float,
}

/// Comparison policy: exact in rational mode, tolerance-based in float mode.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericPolicy {
    mode: NumericMode,
    tolerance: Scalar,
}

impl NumericPolicy {
    /// Exact-comparison policy (the default).
    pub fn rational() -> Self {
        NumericPolicy {
            mode: NumericMode::Rational,
            tolerance: Scalar::zero(),
        }
    }

    /// Float policy with relative tolerance `tol > 0`.
    pub fn float(tol: f64) -> Result<Self> {
        if !(tol.is_finite() && tol > 0.0) {
            return Err(Error::BadTolerance);
        }
        Ok(NumericPolicy {
            mode: NumericMode::Float,
            tolerance: Scalar::from_f64(tol)?,
        })
    }

    pub fn mode(&self) -> NumericMode {
        self.mode
    }

    pub fn tolerance(&self) -> &Scalar {
        &self.tolerance
    }

    /// `a == b` under this policy: exact, or `|a-b| <= tol * max(1,|a|,|b|)`.
    pub fn eq(&self, a: &Scalar, b: &Scalar) -> bool {
        match self.mode {
            NumericMode::Rational => a == b,
            NumericMode::Float => {
                let diff = (a - b).abs();
                let scale = Scalar::one().max(a.abs()).max(b.abs());
                diff <= self.tolerance.clone() * scale
            }
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        self.eq(a, &Scalar::zero())
    }

    /// Strictly negative under the policy: below zero and not within
    /// tolerance of it.
    pub fn is_negative(&self, a: &Scalar) -> bool {
        a.is_negative() && !self.is_zero(a)
    }

    /// `a >= b` allowing tolerance equality in float mode.
    pub fn ge(&self, a: &Scalar, b: &Scalar) -> bool {
        a >= b || self.eq(a, b)
    }
}

impl Default for NumericPolicy {
    fn default() -> Self {
        NumericPolicy::rational()
    }
}

/// Complex number over [`Scalar`] (a Gaussian rational).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ComplexScalar {
    pub re: Scalar,
    pub im: Scalar,
}

impl ComplexScalar {
    pub fn new(re: Scalar, im: Scalar) -> Self {
        ComplexScalar { re, im }
    }

    pub fn real(re: Scalar) -> Self {
        ComplexScalar {
            re,
            im: Scalar::zero(),
        }
    }

    pub fn zero() -> Self {
        ComplexScalar::real(Scalar::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn norm_sqr(&self) -> Scalar {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn mul(&self, rhs: &ComplexScalar) -> ComplexScalar {
        ComplexScalar {
            re: &(&self.re * &rhs.re) - &(&self.im * &rhs.im),
            im: &(&self.re * &rhs.im) + &(&self.im * &rhs.re),
        }
    }

    pub fn add(&self, rhs: &ComplexScalar) -> ComplexScalar {
        ComplexScalar {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }

    pub fn sub(&self, rhs: &ComplexScalar) -> ComplexScalar {
        ComplexScalar {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }

    pub fn div(&self, rhs: &ComplexScalar) -> ComplexScalar {
        let d = rhs.norm_sqr();
        assert!(!d.is_zero(), "division by zero");
        let conj = ComplexScalar {
            re: rhs.re.clone(),
            im: -&rhs.im,
        };
        let num = self.mul(&conj);
        ComplexScalar {
            re: &num.re / &d,
            im: &num.im / &d,
        }
    }

    pub fn scale(&self, k: &Scalar) -> ComplexScalar {
        ComplexScalar {
            re: &self.re * k,
            im: &self.im * k,
        }
    }
}

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::polynomial::Polynomial;
use crate::error::{Error, Result};

/// Reduced quotient of two polynomials over `Q`.
///
/// Canonical form: numerator and denominator coprime, denominator monic, and the
/// zero function stored as `0/1`. Structural equality is therefore equality of functions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: Polynomial, den: Polynomial) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = Polynomial::gcd(&num, &den);
        let (mut num, mut den) = if g.degree() == Some(0) {
            (num, den)
        } else {
            (
                num.exact_div(&g).expect("gcd nonzero").expect("gcd divides"),
                den.exact_div(&g).expect("gcd nonzero").expect("gcd divides"),
            )
        };
        let lead = den.leading().expect("nonzero").clone();
        if !lead.is_one() {
            let inv = lead.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RationalFunction { num, den }
    }

    /// Builds from parts already known to be coprime, only fixing the scaling.
    ///
    /// The caller is responsible for coprimality; debug builds check it.
    pub fn from_coprime(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        debug_assert_eq!(Polynomial::gcd(&num, &den).degree(), Some(0));
        let inv = den.leading().expect("nonzero").recip();
        Ok(RationalFunction {
            num: num.scale(&inv),
            den: den.scale(&inv),
        })
    }

    pub fn zero() -> Self {
        RationalFunction {
            num: Polynomial::zero(),
            den: Polynomial::one(),
        }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        RationalFunction {
            num: Polynomial::constant(c),
            den: Polynomial::one(),
        }
    }

    pub fn from_polynomial(p: Polynomial) -> Self {
        RationalFunction {
            num: p,
            den: Polynomial::one(),
        }
    }

    /// The identity function `x`.
    pub fn x() -> Self {
        Self::from_polynomial(Polynomial::x())
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, rhs: &RationalFunction) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(&self.num * &rhs.den, &self.den * &rhs.num))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        RationalFunction {
            num: self.num.pow(n),
            den: self.den.pow(n),
        }
    }

    /// Exact value at `x`; a zero of the reduced denominator is a [`Error::Pole`].
    pub fn evaluate(&self, x: &BigRational) -> Result<BigRational> {
        let d = self.den.evaluate(x);
        if d.is_zero() {
            return Err(Error::Pole { at: x.to_string() });
        }
        Ok(self.num.evaluate(x) / d)
    }

    pub fn evaluate_int(&self, x: i64) -> Result<BigRational> {
        self.evaluate(&BigRational::from_integer(x.into()))
    }

    pub fn evaluate_f64(&self, x: f64) -> f64 {
        self.num.evaluate_f64(x) / self.den.evaluate_f64(x)
    }

    /// `(order, leading)` with `f(x) ~ leading · x^order` as `x → ∞`.
    pub fn asymptotic_order(&self) -> Result<(i64, BigRational)> {
        let nd = self.num.degree().ok_or(Error::ZeroFunction)?;
        let dd = self.den.degree().expect("denominator nonzero");
        let lead = self.num.leading().expect("nonzero") / self.den.leading().expect("nonzero");
        Ok((nd as i64 - dd as i64, lead))
    }

    /// `f(x²)`; stays reduced because `x → x²` preserves coprimality.
    pub fn substitute_square(&self) -> Self {
        RationalFunction {
            num: self.num.substitute_square(),
            den: self.den.substitute_square(),
        }
    }

    pub fn display_in(&self, var: &str) -> String {
        if self.den.is_one() {
            return self.num.display_in(var);
        }
        format!("({}) / ({})", self.num.display_in(var), self.den.display_in(var))
    }

    /// Coefficient strings, lowest degree first.
    pub fn to_coefficient_strings(&self) -> (Vec<String>, Vec<String>) {
        let f = |p: &Polynomial| p.coeffs().iter().map(|c| c.to_string()).collect();
        (f(&self.num), f(&self.den))
    }

    pub fn from_coefficient_strings(num: &[String], den: &[String]) -> Result<Self> {
        let parse = |v: &[String]| -> Result<Polynomial> {
            v.iter()
                .map(|s| {
                    BigRational::from_str(s.trim())
                        .map_err(|e| Error::Parse(format!("coefficient {s:?}: {e}")))
                })
                .collect::<Result<Vec<_>>>()
                .map(Polynomial::new)
        };
        Self::new(parse(num)?, parse(den)?)
    }

    /// Exact value at `x`, rounded to `f64`.
    pub fn to_f64_at(&self, x: &BigRational) -> Result<f64> {
        Ok(self.evaluate(x)?.to_f64().unwrap_or(f64::NAN))
    }
}

impl Default for RationalFunction {
    fn default() -> Self {
        Self::zero()
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("x"))
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({})", self.display_in("x"))
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.den == rhs.den {
            return RationalFunction::normalized(&self.num + &rhs.num, self.den.clone());
        }
        RationalFunction::normalized(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
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
        RationalFunction::normalized(&self.num * &rhs.num, &self.den * &rhs.den)
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

#[derive(Serialize, Deserialize)]
struct Wire {
    num: Vec<String>,
    den: Vec<String>,
}

impl Serialize for RationalFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let (num, den) = self.to_coefficient_strings();
        Wire { num, den }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalFunction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = Wire::deserialize(d)?;
        RationalFunction::from_coefficient_strings(&w.num, &w.den).map_err(serde::de::Error::custom)
    }
}

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::poly::Polynomial;
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Default magnitude below which a denominator counts as a pole in [`RationalFunction::eval`].
pub const POLE_FLOOR: f64 = 1e-300;

/// Ratio of polynomials in lowest terms with a monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

/// The four field operations accepted by [`rf_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Exact `f op g`, normalized. Division by the zero function is an error.
pub fn rf_arith(op: ArithOp, f: &RationalFunction, g: &RationalFunction) -> Result<RationalFunction> {
    Ok(match op {
        ArithOp::Add => f + g,
        ArithOp::Sub => f - g,
        ArithOp::Mul => f * g,
        ArithOp::Div => f.checked_div(g)?,
    })
}

impl RationalFunction {
    /// Builds `num/den` and normalizes it. Errors on a zero denominator.
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: Polynomial, den: Polynomial) -> Self {
        if num.is_zero() {
            return RationalFunction { num, den: Polynomial::one() };
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = if g.is_constant() { (num, den) } else { (num.exact_div(&g), den.exact_div(&g)) };
        if !d.is_monic() {
            let inv = d.leading().unwrap().inv().unwrap();
            n = n.scale(&inv);
            d = d.scale(&inv);
        }
        RationalFunction { num: n, den: d }
    }

    pub fn zero() -> Self {
        RationalFunction { num: Polynomial::zero(), den: Polynomial::one() }
    }

    pub fn one() -> Self {
        Self::constant(Scalar::int(1))
    }

    pub fn constant(c: Scalar) -> Self {
        RationalFunction { num: Polynomial::constant(c), den: Polynomial::one() }
    }

    pub fn int(n: i64) -> Self {
        Self::constant(Scalar::int(n))
    }

    pub fn z() -> Self {
        Self::from_poly(Polynomial::z())
    }

    pub fn from_poly(p: Polynomial) -> Self {
        RationalFunction { num: p, den: Polynomial::one() }
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

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// Constant value if the function is constant.
    pub fn as_constant(&self) -> Option<Scalar> {
        (self.num.is_constant() && self.den.is_constant()).then(|| self.num.coeff(0))
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        Self::normalized(self.num.scale(s), self.den.clone())
    }

    pub fn recip(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, g: &RationalFunction) -> Result<Self> {
        if g.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(&self.num * &g.den, &self.den * &g.num))
    }

    /// Integer power; negative exponents invert (zero base is an error).
    pub fn powi(&self, e: i32) -> Result<Self> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let k = e.unsigned_abs();
        Ok(RationalFunction { num: base.num.pow(k), den: base.den.pow(k) })
    }

    /// Exact derivative by the quotient rule.
    pub fn derivative(&self) -> Self {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::normalized(n, &self.den * &self.den)
    }

    /// Exact value at a Gaussian-rational point; a pole is an error.
    pub fn eval_exact(&self, z: &Scalar) -> Result<Scalar> {
        let d = self.den.eval(z);
        if d.is_zero() {
            return Err(Error::Pole { at: z.to_complex() });
        }
        Ok(self.num.eval(z) / d)
    }

    /// Floating evaluation with the default pole floor.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        self.eval_with_floor(z, POLE_FLOOR)
    }

    pub fn eval_with_floor(&self, z: Complex64, floor: f64) -> Result<Complex64> {
        let d = self.den.eval_c(z);
        if d.norm() <= floor {
            return Err(Error::Pole { at: z });
        }
        Ok(self.num.eval_c(z) / d)
    }

    /// `self(g(z))`.
    pub fn compose(&self, g: &RationalFunction) -> Result<RationalFunction> {
        let horner = |p: &Polynomial| {
            p.coeffs()
                .iter()
                .rev()
                .fold(RationalFunction::zero(), |acc, c| &(&acc * g) + &RationalFunction::constant(c.clone()))
        };
        horner(&self.num).checked_div(&horner(&self.den))
    }
}

impl fmt::Display for RationalFunction {
    /// `(p(z))/(q(z))`; parses back to the same function.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/({})", self.num, self.den)
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl std::str::FromStr for RationalFunction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        super::parse::parse(s)
    }
}

impl serde::Serialize for RationalFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for RationalFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl<'a> Add<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn add(self, g: &RationalFunction) -> RationalFunction {
        if self.den == g.den {
            return RationalFunction::normalized(&self.num + &g.num, self.den.clone());
        }
        RationalFunction::normalized(&(&self.num * &g.den) + &(&g.num * &self.den), &self.den * &g.den)
    }
}

impl<'a> Sub<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn sub(self, g: &RationalFunction) -> RationalFunction {
        self + &(-g)
    }
}

impl<'a> Mul<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn mul(self, g: &RationalFunction) -> RationalFunction {
        RationalFunction::normalized(&self.num * &g.num, &self.den * &g.den)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, o: RationalFunction) -> RationalFunction {
                (&self).$m(&o)
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

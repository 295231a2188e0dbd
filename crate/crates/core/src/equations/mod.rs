//! Second-order linear operators, Bose invariants, canonical forms and the
//! named equations that serve as reduction targets.

mod constructors;
mod gauge;
mod jet;
mod riemann;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{RationalFunction, Scalar};

pub use constructors::{
    airy_reduction, hermite_reduction, make_airy, make_confluent_family, make_hermite, make_hypergeometric,
    make_oscillator, AiryData, ConfluentFamily, ConfluentParams, HermiteData, HypergeometricParams, OscillatorParams,
};
pub use gauge::{canonical_form, gauge_transform, GaugeFactor, PowerFactor};
pub use jet::Jet;
pub use riemann::{make_riemann, riemann_conjugate, riemann_mobius, Mobius, RiemannData, SingularPoint};

/// The operator `a(z)∂² + b(z)∂ + c(z)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawOde")]
pub struct LinearODE2 {
    pub a: RationalFunction,
    pub b: RationalFunction,
    pub c: RationalFunction,
}

#[derive(Deserialize)]
struct RawOde {
    a: RationalFunction,
    b: RationalFunction,
    c: RationalFunction,
}

impl TryFrom<RawOde> for LinearODE2 {
    type Error = Error;
    fn try_from(r: RawOde) -> Result<Self> {
        LinearODE2::new(r.a, r.b, r.c)
    }
}

impl LinearODE2 {
    pub fn new(a: RationalFunction, b: RationalFunction, c: RationalFunction) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::ZeroLeadingCoefficient);
        }
        Ok(LinearODE2 { a, b, c })
    }

    /// Left multiplication `f·A`.
    pub fn scale_left(&self, f: &RationalFunction) -> Result<Self> {
        LinearODE2::new(f * &self.a, f * &self.b, f * &self.c)
    }

    pub fn scale(&self, s: &Scalar) -> Result<Self> {
        self.scale_left(&RationalFunction::constant(s.clone()))
    }

    /// The same operator with leading coefficient 1.
    pub fn normalized(&self) -> Self {
        let inv = self.a.recip().expect("nonzero leading coefficient");
        LinearODE2 { a: RationalFunction::one(), b: &self.b * &inv, c: &self.c * &inv }
    }

    /// Pullback along a Möbius or affine substitution `z = m(w)`: returns the
    /// operator in `w` acting on `f(m(w))` that equals this operator in `z`.
    pub fn pullback(&self, m: &RationalFunction) -> Result<Self> {
        // ∂z = (1/m') ∂w, ∂z² = (1/m'²) ∂w² − (m''/m'³) ∂w
        let m1 = m.derivative();
        let m2 = m1.derivative();
        let inv1 = m1.recip()?;
        let inv2 = &inv1 * &inv1;
        let a = self.a.compose(m)?;
        let b = self.b.compose(m)?;
        let c = self.c.compose(m)?;
        LinearODE2::new(&a * &inv2, &(&b * &inv1) - &(&(&a * &m2) * &(&inv2 * &inv1)), c)
    }

    pub fn coeffs_at(&self, z: Complex64) -> Result<[Complex64; 3]> {
        Ok([self.a.eval(z)?, self.b.eval(z)?, self.c.eval(z)?])
    }

    /// `a f'' + b f' + c f` for a function given by its 2-jet at `z`.
    pub fn apply(&self, f: Jet, z: Complex64) -> Result<Complex64> {
        let [a, b, c] = self.coeffs_at(z)?;
        Ok(a * f.d2 + b * f.d1 + c * f.v)
    }
}

/// `(4ac − 2ab' + 2ba' − b²) / (4a²)`.
pub fn bose_invariant(ode: &LinearODE2) -> RationalFunction {
    let LinearODE2 { a, b, c } = ode;
    let four = Scalar::int(4);
    let two = Scalar::int(2);
    let num = &(&(&(a * c).scale(&four) - &(a * &b.derivative()).scale(&two)) + &(b * &a.derivative()).scale(&two))
        - &(b * b);
    num.checked_div(&(a * a).scale(&four)).expect("nonzero leading coefficient")
}

/// Pointwise Bose invariant assembled from coefficient values, which avoids the
/// cancellation of evaluating the expanded rational function close to a pole.
pub fn bose_invariant_fn(ode: &LinearODE2) -> impl Fn(Complex64) -> Result<Complex64> + Send + Sync + 'static {
    let LinearODE2 { a, b, c } = ode.clone();
    let (a1, b1) = (a.derivative(), b.derivative());
    move |z| {
        let (a, b, c, a1, b1) = (a.eval(z)?, b.eval(z)?, c.eval(z)?, a1.eval(z)?, b1.eval(z)?);
        Ok((4.0 * a * c - 2.0 * a * b1 + 2.0 * b * a1 - b * b) / (4.0 * a * a))
    }
}

/// Equal Bose invariants, compared exactly.
pub fn gauge_equivalent(ode1: &LinearODE2, ode2: &LinearODE2) -> bool {
    bose_invariant(ode1) == bose_invariant(ode2)
}

/// `a(z) f'' + b(z) f' + c(z) f`.
pub fn apply_operator(
    ode: &LinearODE2,
    f_value: Complex64,
    f_prime: Complex64,
    f_second: Complex64,
    z: Complex64,
) -> Result<Complex64> {
    ode.apply(Jet::new(f_value, f_prime, f_second), z)
}

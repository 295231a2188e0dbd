//! Exact polynomial and rational-function arithmetic over the Gaussian rationals.
//!
//! Every symbolic identity in the crate (Bose invariants, Schwarz derivatives of
//! rational maps, Riemann operators) is computed here without rounding.

mod parse;
mod poly;
mod ratfun;
mod roots;
mod scalar;

pub use poly::Polynomial;
pub use ratfun::{rf_arith, ArithOp, RationalFunction, POLE_FLOOR};
pub use roots::{gaussian_roots, partial_fractions, PartialFractions, PoleTerm};
pub use scalar::Scalar;

/// Exact derivative (quotient rule).
pub fn rf_diff(f: &RationalFunction) -> RationalFunction {
    f.derivative()
}

/// Floating evaluation via Horner; errors at a pole.
pub fn rf_eval(f: &RationalFunction, z: num_complex::Complex64) -> crate::Result<num_complex::Complex64> {
    f.eval(z)
}

//! Liouville transformations and the ansatz engine producing `(V, z(r))` pairs.

mod cov;
mod numeric;

pub use cov::{ChangeOfVariables, ClosedForm, Jet3};
pub use numeric::{integrate_cov, CovAnchor, CovTable};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::RationalFunction;

type C = Complex64;

/// `J(r) = z'(r)² I(z(r)) + ½{z, r}` at real `r` inside the domain of `cov`.
pub fn liouville_transform(invariant: impl Fn(C) -> Result<C>, cov: &ChangeOfVariables, r: f64) -> Result<f64> {
    let j = cov.jet(r)?;
    let s = cov::schwarz_of_jet(&j.map(C::from));
    Ok((j[1] * j[1] * invariant(j[0].into())? + 0.5 * s).re)
}

/// Complex-argument version; no domain check, closed forms and composites only.
pub fn liouville_at(invariant: impl Fn(C) -> Result<C>, cov: &ChangeOfVariables, r: C) -> Result<C> {
    let j = cov.jet_c(r)?;
    Ok(j[1] * j[1] * invariant(j[0])? + 0.5 * cov::schwarz_of_jet(&j))
}

/// `Ĩ₁ … Ĩ_{n−1}` with coefficients `b̃_i`, plus the energy-carrying `Ĩ_n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantBasis {
    pub functions: Vec<RationalFunction>,
    pub coefficients: Vec<C>,
    pub energy_term: RationalFunction,
}

impl InvariantBasis {
    pub fn new(functions: Vec<RationalFunction>, coefficients: Vec<C>, energy_term: RationalFunction) -> Result<Self> {
        if energy_term.is_zero() {
            return Err(Error::InvalidParameter("energy term must not vanish identically".into()));
        }
        if functions.len() != coefficients.len() {
            return Err(Error::InvalidParameter(format!(
                "{} basis functions but {} coefficients",
                functions.len(),
                coefficients.len()
            )));
        }
        Ok(InvariantBasis { functions, coefficients, energy_term })
    }

    /// `Σ b̃_i Ĩ_i(z)`.
    pub fn combination(&self, z: C) -> Result<C> {
        let mut acc = C::new(0.0, 0.0);
        for (f, b) in self.functions.iter().zip(&self.coefficients) {
            acc += b * f.eval(z)?;
        }
        Ok(acc)
    }

    /// The invariant `E·Ĩ_n − Σ b̃_i Ĩ_i` of the target equation at energy `E`.
    pub fn invariant(&self, energy: C, z: C) -> Result<C> {
        Ok(energy * self.energy_term.eval(z)? - self.combination(z)?)
    }
}

/// Potential `V(r) = z'² Σ b̃_i Ĩ_i(z) − ½{z, r}` attached to a basis and a matching cov.
#[derive(Debug, Clone)]
pub struct NatanzonPotential {
    pub basis: InvariantBasis,
    pub cov: ChangeOfVariables,
}

const MATCH_SAMPLES: usize = 20;
const MATCH_TOL: f64 = 1e-8;

/// Interior sample points of an open interval, possibly unbounded.
pub(crate) fn interior_samples(domain: (f64, f64), n: usize) -> Vec<f64> {
    let (lo, hi) = domain;
    (1..=n)
        .map(|k| {
            let t = k as f64 / (n + 1) as f64;
            match (lo.is_finite(), hi.is_finite()) {
                (true, true) => lo + (hi - lo) * t,
                (true, false) => lo + t / (1.0 - t),
                (false, true) => hi - (1.0 - t) / t,
                (false, false) => (t - 0.5) / (t * (1.0 - t)),
            }
        })
        .collect()
}

/// Checks `z'² Ĩ_n(z) = 1` on the domain of `cov` and returns the potential.
pub fn natanzon_potential(basis: InvariantBasis, cov: ChangeOfVariables) -> Result<NatanzonPotential> {
    let mut worst: Option<(f64, f64)> = None;
    for r in interior_samples(cov.domain, MATCH_SAMPLES) {
        let j = cov.jet(r)?;
        let m = (j[1] * j[1] * basis.energy_term.eval(j[0].into())?.re - 1.0).abs();
        let m = if m.is_finite() { m } else { f64::INFINITY };
        if worst.is_none_or(|(_, w)| m > w) {
            worst = Some((r, m));
        }
    }
    if let Some((at, mismatch)) = worst {
        if mismatch > MATCH_TOL {
            return Err(Error::CovMismatch { at, mismatch });
        }
    }
    Ok(NatanzonPotential { basis, cov })
}

impl NatanzonPotential {
    pub fn eval(&self, r: f64) -> Result<f64> {
        let j = self.cov.jet(r)?;
        let s = cov::schwarz_of_jet(&j.map(C::from));
        Ok((j[1] * j[1] * self.basis.combination(j[0].into())? - 0.5 * s).re)
    }

    pub fn eval_c(&self, r: C) -> Result<C> {
        let j = self.cov.jet_c(r)?;
        Ok(j[1] * j[1] * self.basis.combination(j[0])? - 0.5 * cov::schwarz_of_jet(&j))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equations::{bose_invariant, make_hypergeometric, HypergeometricParams};
    use crate::exactalg::Scalar;
    use crate::schwarz::schwarz_numeric;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn rf(s: &str) -> RationalFunction {
        s.parse().unwrap()
    }

    fn c(x: f64) -> C {
        C::new(x, 0.0)
    }

    #[test]
    fn identity_map_keeps_invariant() {
        let inv = rf("(z^2 + 1)/(z - 3)");
        let cov = ChangeOfVariables::identity();
        for r in [-2.0, 0.5, 2.9] {
            let j = liouville_transform(|z| inv.eval(z), &cov, r).unwrap();
            assert!((j - inv.eval(c(r)).unwrap().re).abs() < 1e-13);
        }
    }

    #[test]
    fn zero_invariant_under_square() {
        let cov = ChangeOfVariables::closed(ClosedForm::Square, (0.0, 10.0));
        for y in [0.3, 1.0, 4.5] {
            let j = liouville_transform(|_| Ok(c(0.0)), &cov, y).unwrap();
            assert!((j + 0.75 / (y * y)).abs() < 1e-12);
            let num = 0.5 * schwarz_numeric(|t| t * t, y, 0.05 * y).unwrap();
            assert!((j - num).abs() < 1e-8);
        }
    }

    #[test]
    fn hypergeometric_invariant_under_sine_square() {
        let (al, be, mu) = (Scalar::ratio(3, 2), Scalar::ratio(5, 2), Scalar::ratio(7, 3));
        let inv = bose_invariant(&make_hypergeometric(&HypergeometricParams::from_symmetric(
            al.clone(),
            be.clone(),
            mu.clone(),
        )));
        let cov = ChangeOfVariables::closed(ClosedForm::SinSq, (0.0, FRAC_PI_2));
        let (a, b, m) = (al.to_complex().re, be.to_complex().re, mu.to_complex().re);
        for k in 1..20 {
            let r = FRAC_PI_2 * k as f64 / 20.0;
            let j = liouville_transform(|z| inv.eval(z), &cov, r).unwrap();
            let v = (a * a - 0.25) / r.sin().powi(2) + (b * b - 0.25) / r.cos().powi(2);
            assert!((j - (m * m - v)).abs() < 1e-11 * (1.0 + v.abs()), "r = {r}");
        }
        assert!(matches!(liouville_transform(|z| inv.eval(z), &cov, 2.0), Err(Error::OutsideDomain { .. })));
    }

    #[test]
    fn composition_law() {
        // z = y², y = e^{r}: one step with z = e^{2r} against two steps.
        let inv = rf("(z + 2)/(z^2 + 1)");
        let outer = ChangeOfVariables::closed(ClosedForm::Square, (0.0, f64::INFINITY));
        let inner = ChangeOfVariables::closed(ClosedForm::Exp, (-3.0, 3.0));
        let both = ChangeOfVariables::compose(outer.clone(), inner.clone());
        for r in interior_samples((-3.0, 3.0), 20) {
            let once = liouville_transform(|z| inv.eval(z), &both, r).unwrap();
            let first = |y: C| liouville_at(|z| inv.eval(z), &outer, y);
            let twice = liouville_transform(first, &inner, r).unwrap();
            assert!((once - twice).abs() < 1e-8 * (1.0 + once.abs()));
        }
    }

    #[test]
    fn constant_basis_gives_constant_potential() {
        let basis = InvariantBasis::new(vec![rf("1")], vec![c(2.5)], rf("1")).unwrap();
        let v = natanzon_potential(basis, ChangeOfVariables::identity()).unwrap();
        for r in [-7.0, 0.0, 3.0] {
            assert!((v.eval(r).unwrap() - 2.5).abs() < 1e-15);
        }
    }

    fn pt_basis(a: f64, b: f64) -> InvariantBasis {
        InvariantBasis::new(
            vec![rf("1/(4*z^2*(1-z))"), rf("1/(4*z*(1-z)^2)"), rf("1/(4*z*(1-z))")],
            vec![c(a * a - 1.0), c(b * b - 1.0), c(1.0)],
            rf("1/(4*z*(1-z))"),
        )
        .unwrap()
    }

    #[test]
    fn trigonometric_poschl_teller_from_basis() {
        let (a, b) = (0.7, 2.2);
        let cov = ChangeOfVariables::closed(ClosedForm::SinSq, (0.0, FRAC_PI_2));
        let v = natanzon_potential(pt_basis(a, b), cov).unwrap();
        for k in 1..30 {
            let r = FRAC_PI_2 * k as f64 / 30.0;
            let expected = (a * a - 0.25) / r.sin().powi(2) + (b * b - 0.25) / r.cos().powi(2);
            assert!((v.eval(r).unwrap() - expected).abs() < 1e-10 * (1.0 + expected.abs()));
        }
    }

    #[test]
    fn radial_oscillator_from_basis() {
        let (g, a) = (1.3, 0.4);
        let basis =
            InvariantBasis::new(vec![rf("1/4"), rf("1/(4*z^2)")], vec![c(g * g), c(a * a - 1.0)], rf("1/(4*z)"))
                .unwrap();
        let v = natanzon_potential(basis, ChangeOfVariables::closed(ClosedForm::Square, (0.0, f64::INFINITY))).unwrap();
        for r in [0.1, 0.8, 3.0] {
            let expected = g * g * r * r + (a * a - 0.25) / (r * r);
            assert!((v.eval(r).unwrap() - expected).abs() < 1e-11 * (1.0 + expected.abs()));
        }
    }

    #[test]
    fn mismatched_cov_is_rejected() {
        let cov = ChangeOfVariables::closed(ClosedForm::Square, (0.0, 5.0));
        match natanzon_potential(pt_basis(1.0, 1.0), cov) {
            Err(Error::CovMismatch { at, mismatch }) => assert!(at > 0.0 && at < 5.0 && mismatch > 1e-8),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn numeric_route_matches_closed_form() {
        let (a, b, e) = (1.5, 2.5, 9.0);
        let basis = pt_basis(a, b);
        let closed = ChangeOfVariables::closed(ClosedForm::SinSq, (0.0, FRAC_PI_2));
        let numeric = integrate_cov(&basis.energy_term, CovAnchor { z0: 0.5, r0: FRAC_PI_4 }, 1.0, (0.0, 1.0)).unwrap();
        let inv = |z: C| basis.invariant(c(e), z);
        for k in 1..20 {
            let r = 0.05 + 1.45 * k as f64 / 20.0;
            let x = liouville_transform(inv, &closed, r).unwrap();
            let y = liouville_transform(inv, &numeric, r).unwrap();
            assert!((x - y).abs() < 1e-7 * (1.0 + x.abs()), "r = {r}: {x} vs {y}");
        }
        let vn = natanzon_potential(basis, numeric).unwrap();
        let r = 0.6f64;
        let expected = (a * a - 0.25) / r.sin().powi(2) + (b * b - 0.25) / r.cos().powi(2);
        assert!((vn.eval(r).unwrap() - expected).abs() < 1e-7 * expected);
    }
}

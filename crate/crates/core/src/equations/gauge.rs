use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{bose_invariant, Jet, LinearODE2};
use crate::error::Result;
use crate::exactalg::{partial_fractions, Polynomial, RationalFunction, Scalar};

/// `(z - root)^exponent`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerFactor {
    pub root: Scalar,
    pub exponent: Scalar,
}

/// `const · exp(exp_poly(z)) · Π (z - root)^exponent`.
///
/// `exp_poly` is a rational function rather than a polynomial so that poles of
/// order two or more in `b/2a` (as for the ₂F₀ equation) still integrate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaugeFactor {
    pub exp_poly: RationalFunction,
    pub power_factors: Vec<PowerFactor>,
    #[serde(rename = "const")]
    pub constant: Scalar,
}

impl GaugeFactor {
    pub fn trivial() -> Self {
        GaugeFactor { exp_poly: RationalFunction::zero(), power_factors: Vec::new(), constant: Scalar::int(1) }
    }

    pub fn power(root: Scalar, exponent: Scalar) -> Self {
        GaugeFactor { power_factors: vec![PowerFactor { root, exponent }], ..Self::trivial() }
    }

    pub fn exponential(exp_poly: RationalFunction) -> Self {
        GaugeFactor { exp_poly, ..Self::trivial() }
    }

    pub fn is_trivial(&self) -> bool {
        self.exp_poly.is_zero() && self.power_factors.is_empty() && self.constant.is_one()
    }

    /// Pointwise product; power factors with a common root are merged.
    pub fn mul(&self, o: &GaugeFactor) -> GaugeFactor {
        let mut pf = self.power_factors.clone();
        for f in &o.power_factors {
            match pf.iter_mut().find(|g| g.root == f.root) {
                Some(g) => g.exponent += &f.exponent,
                None => pf.push(f.clone()),
            }
        }
        pf.retain(|f| !f.exponent.is_zero());
        GaugeFactor {
            exp_poly: &self.exp_poly + &o.exp_poly,
            power_factors: pf,
            constant: &self.constant * &o.constant,
        }
    }

    pub fn inverse(&self) -> GaugeFactor {
        GaugeFactor {
            exp_poly: -&self.exp_poly,
            power_factors: self
                .power_factors
                .iter()
                .map(|f| PowerFactor { root: f.root.clone(), exponent: -&f.exponent })
                .collect(),
            constant: self.constant.inv().expect("nonzero gauge constant"),
        }
    }

    /// `g'/g`, exactly.
    pub fn log_derivative(&self) -> RationalFunction {
        self.power_factors.iter().fold(self.exp_poly.derivative(), |acc, f| {
            let term =
                RationalFunction::new(Polynomial::constant(f.exponent.clone()), Polynomial::linear_root(&f.root))
                    .expect("nonzero denominator");
            &acc + &term
        })
    }

    /// Jet at `z` using principal powers.
    pub fn jet(&self, z: Complex64) -> Result<Jet> {
        self.jet_with(z, |f| Jet::power(z, f.root.to_complex(), f.exponent.to_complex()))
    }

    /// Jet at real `x` with `|x - root|^e` for real roots; the result differs
    /// from [`GaugeFactor::jet`] by a locally constant factor.
    pub fn jet_abs(&self, x: f64) -> Result<Jet> {
        let z = Complex64::new(x, 0.0);
        self.jet_with(z, |f| {
            let r = f.root.to_complex();
            if r.im == 0.0 {
                Jet::abs_power(x, r.re, f.exponent.to_complex())
            } else {
                Jet::power(z, r, f.exponent.to_complex())
            }
        })
    }

    fn jet_with(&self, z: Complex64, pow: impl Fn(&PowerFactor) -> Jet) -> Result<Jet> {
        let e1 = self.exp_poly.derivative();
        let e = Jet::new(self.exp_poly.eval(z)?, e1.eval(z)?, e1.derivative().eval(z)?).exp();
        let mut j = e.scale(self.constant.to_complex());
        for f in &self.power_factors {
            j = j * pow(f);
        }
        Ok(j)
    }
}

/// `g⁻¹ A g`, i.e. the operator `f ↦ A(g f) / g`. Exact because `g'/g` is rational.
pub fn gauge_transform(ode: &LinearODE2, g: &GaugeFactor) -> LinearODE2 {
    let l = g.log_derivative();
    let LinearODE2 { a, b, c } = ode;
    let b2 = &(a * &l).scale(&Scalar::int(2)) + b;
    let c2 = &(&(a * &(&l.derivative() + &(&l * &l))) + &(b * &l)) + c;
    LinearODE2 { a: a.clone(), b: b2, c: c2 }
}

/// Bose invariant together with `h = exp(∫ b/2a)`, so that `h·(A/a)·h⁻¹ = ∂² + I`.
pub fn canonical_form(ode: &LinearODE2) -> Result<(RationalFunction, GaugeFactor)> {
    let half = ode.b.checked_div(&ode.a.scale(&Scalar::int(2)))?;
    let pf = partial_fractions(&half)?;
    let mut exp_poly = RationalFunction::from_poly(pf.poly.antiderivative());
    let mut power_factors: Vec<PowerFactor> = Vec::new();
    for t in pf.terms {
        if t.order == 1 {
            power_factors.push(PowerFactor { root: t.root, exponent: t.coeff });
        } else {
            let k = (t.order - 1) as i64;
            let d = Polynomial::linear_root(&t.root).pow(k as u32);
            let c = -(&t.coeff / &Scalar::int(k));
            exp_poly = &exp_poly + &RationalFunction::new(Polynomial::constant(c), d)?;
        }
    }
    Ok((bose_invariant(ode), GaugeFactor { exp_poly, power_factors, constant: Scalar::int(1) }))
}

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use super::certificate::TargetEquation;
use super::{family_potential, FamilyId, FamilyParams};
use crate::equations::bose_invariant_fn;
use crate::error::{Error, Result};
use crate::liouville::{liouville_transform, ChangeOfVariables, ClosedForm};

/// A second substitution into the hypergeometric equation that lands on a catalog family.
#[derive(Debug, Clone, Copy)]
pub struct AlternateRoute {
    pub substitution: &'static str,
    pub form: ClosedForm,
    pub domain: (f64, f64),
    pub lands_on: FamilyId,
    /// Hypergeometric `(α, β, μ)` ↦ catalog parameters and energy.
    pub landing: fn(f64, f64, f64) -> Landing,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Landing {
    pub values: [f64; 2],
    pub energy: f64,
}

pub fn alternate_routes() -> Vec<AlternateRoute> {
    vec![
        AlternateRoute {
            substitution: "z = tanh^2 r",
            form: ClosedForm::TanhSq,
            domain: (0.0, f64::INFINITY),
            lands_on: FamilyId::PtHyp,
            landing: |a, b, m| Landing { values: [a, m], energy: -b * b },
        },
        AlternateRoute {
            substitution: "z = -tan^2 r",
            form: ClosedForm::NegTanSq,
            domain: (0.0, FRAC_PI_2),
            lands_on: FamilyId::PtTrig,
            landing: |a, b, m| Landing { values: [a, m], energy: b * b },
        },
        AlternateRoute {
            substitution: "z = 1 + e^{2r}",
            form: ClosedForm::OnePlusExp2,
            domain: (f64::NEG_INFINITY, f64::INFINITY),
            lands_on: FamilyId::Rosen,
            landing: |a, b, m| Landing { values: [b * b - m * m, a], energy: -m * m },
        },
        AlternateRoute {
            substitution: "z = 1 - e^{2r}",
            form: ClosedForm::OneMinusExp2,
            domain: (0.0, f64::INFINITY),
            lands_on: FamilyId::Eckart,
            landing: |a, b, m| Landing { values: [m * m - b * b, a], energy: -b * b },
        },
    ]
}

impl AlternateRoute {
    pub fn cov(&self) -> ChangeOfVariables {
        ChangeOfVariables::closed(self.form, self.domain)
    }

    /// Largest `|V_family(r) + J(r) − E|` over `samples`, where `J` is the Liouville
    /// transform of `₂I₁(α, β, μ)` along this substitution; also returns the mean
    /// of `V + J`, the additive constant absorbed into the energy.
    pub fn deviation(&self, alpha: f64, beta: f64, mu: f64, samples: &[f64]) -> Result<(f64, f64)> {
        let inv = bose_invariant_fn(&TargetEquation::hypergeometric(alpha.into(), beta.into(), mu.into()).ode());
        let land = (self.landing)(alpha, beta, mu);
        let params = FamilyParams::new(self.lands_on, land.values)?;
        let cov = self.cov();
        let sums = samples
            .iter()
            .map(|&r| {
                let v = family_potential(&params, r)?;
                let j = liouville_transform(&inv, &cov, r)?;
                Ok((v + j, v.abs().max(1.0)))
            })
            .collect::<Result<Vec<_>>>()?;
        let mean = sums.iter().map(|s| s.0).sum::<f64>() / sums.len() as f64;
        let dev = sums.iter().map(|(s, scale)| (s - land.energy).abs() / scale).fold(0.0, f64::max);
        Ok((dev, mean))
    }
}

/// Parameters of `s²V(s r)` within the same family, for `special_I` and `special_II`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RescaledFamily {
    pub params: FamilyParams,
    /// Energies scale by `s²`.
    pub energy_factor: f64,
}

pub fn rescale(params: &FamilyParams, s: f64) -> Result<RescaledFamily> {
    if !(s > 0.0) {
        return Err(Error::InvalidParameter(format!("scale must be positive, got {s}")));
    }
    let [p, q] = params.values;
    let values = match params.id {
        FamilyId::SpecialI => [p * s.powf(8.0 / 3.0), q * s.powf(4.0 / 3.0)],
        FamilyId::SpecialII => [p * s.powf(1.5), q * s],
        id => return Err(Error::InvalidParameter(format!("{id} is not scale-covariant"))),
    };
    Ok(RescaledFamily { params: FamilyParams::new(params.id, values)?, energy_factor: s * s })
}

/// Coefficient `c₂` of `r⁻²` in `V`, by solving `r²V(r) = c₂ + A r^{e₁} + B r^{e₂}`
/// at three small radii (the model is exact for the new potentials).
pub fn inverse_square_coefficient(params: &FamilyParams) -> Result<f64> {
    inverse_square_coefficient_of(params.id, |r| family_potential(params, r))
}

pub(crate) fn inverse_square_coefficient_of(id: FamilyId, v: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    let (e1, e2) = match id {
        FamilyId::SpecialI => (4.0 / 3.0, 8.0 / 3.0),
        FamilyId::SpecialII => (1.0, 1.5),
        id => return Err(Error::InvalidParameter(format!("no power model for {id}"))),
    };
    let rs = [0.05f64, 0.1, 0.2];
    let mut m = [[0.0; 3]; 3];
    let mut g = [0.0; 3];
    for (k, &r) in rs.iter().enumerate() {
        m[k] = [1.0, r.powf(e1), r.powf(e2)];
        g[k] = r * r * v(r)?;
    }
    let det = |m: &[[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let mut m0 = m;
    for k in 0..3 {
        m0[k][0] = g[k];
    }
    Ok(det(&m0) / det(&m))
}

/// `V(i r)` for the trigonometric family, to be compared with `−V_hyp(r)`.
pub fn rotated_potential(params: &FamilyParams, r: f64) -> Complex64 {
    super::family_potential_c(params, Complex64::new(0.0, r))
}

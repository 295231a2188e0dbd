use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use super::{family_potential, FamilyId, FamilyParams};
use crate::equations::{
    bose_invariant_fn, hermite_reduction, make_confluent_family, make_hermite, make_hypergeometric, make_oscillator,
    ConfluentFamily, ConfluentParams, HypergeometricParams, LinearODE2, OscillatorParams,
};
use crate::error::Result;
use crate::exactalg::Scalar;
use crate::liouville::ChangeOfVariables;

type C = Complex64;

pub const CERTIFICATE_TOL: f64 = 1e-9;
pub const CERTIFICATE_POINTS: usize = 200;

/// Target equation of a reduction with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "equation", rename_all = "snake_case")]
pub enum TargetEquation {
    /// `z(1−z)∂² + (c − (a+b+1)z)∂ − ab`.
    Hypergeometric { a: C, b: C, c: C, alpha: C, beta: C, mu: C },
    /// `z∂² + (c − γz)∂ − a`.
    Confluent { a: C, c: C, gamma: C, alpha: C, nu: C },
    /// `∂² − 2y∂ − 2a` in `y = scale·(r + shift)`.
    Hermite { a: C, shift: C, scale: C },
    /// `−∂² + θ²z² + ρz + λ`.
    Oscillator { theta2: C, rho: C, lambda: C },
}

fn x(c: C) -> Scalar {
    Scalar::from_complex(c)
}

impl TargetEquation {
    pub fn hypergeometric(alpha: C, beta: C, mu: C) -> Self {
        let s = 1.0 + alpha + beta;
        TargetEquation::Hypergeometric { a: (s - mu) / 2.0, b: (s + mu) / 2.0, c: 1.0 + alpha, alpha, beta, mu }
    }

    pub fn confluent(alpha: C, nu: C, gamma: C) -> Self {
        TargetEquation::Confluent { a: (gamma + alpha * gamma - nu) / 2.0, c: 1.0 + alpha, gamma, alpha, nu }
    }

    /// The target operator with parameters converted exactly from their binary values.
    pub fn ode(&self) -> LinearODE2 {
        match *self {
            TargetEquation::Hypergeometric { a, b, c, .. } => {
                make_hypergeometric(&HypergeometricParams { a: x(a), b: x(b), c: x(c) })
            }
            TargetEquation::Confluent { a, c, gamma, .. } => {
                make_confluent_family(&ConfluentFamily::Generalized(ConfluentParams {
                    a: x(a),
                    c: x(c),
                    gamma: x(gamma),
                }))
            }
            TargetEquation::Hermite { a, .. } => make_hermite(&x(a)),
            TargetEquation::Oscillator { theta2, rho, lambda } => {
                make_oscillator(&OscillatorParams { theta_sq: x(theta2), rho: x(rho), lambda: x(lambda) })
            }
        }
    }

    /// Target parameters of a family at energy `e`.
    pub fn for_family(params: &FamilyParams, e: f64) -> Result<Self> {
        let id = params.id;
        let [p, q] = params.values.map(C::from);
        let t = id.energy_param_of(e.into());
        Ok(match id {
            FamilyId::PtTrig | FamilyId::PtHyp => TargetEquation::hypergeometric(p, q, t),
            FamilyId::Rosen | FamilyId::Eckart => TargetEquation::hypergeometric(t, (p + t * t).sqrt(), q),
            FamilyId::Hydrogen => TargetEquation::confluent(p, q, t),
            FamilyId::RadialOsc => TargetEquation::confluent(p, t, q),
            FamilyId::Morse => TargetEquation::confluent(t, p, q),
            FamilyId::Gho => {
                let h = hermite_reduction(p, q, t);
                TargetEquation::Hermite { a: h.a, shift: h.shift, scale: h.sqrt_theta }
            }
            FamilyId::SpecialI => TargetEquation::Oscillator { theta2: p, rho: t, lambda: q },
            FamilyId::SpecialII => TargetEquation::Oscillator { theta2: t, rho: p, lambda: q },
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl GridSpec {
    /// The middle 90% of `window`.
    pub fn middle(window: (f64, f64), n: usize) -> Self {
        let w = window.1 - window.0;
        GridSpec { lo: window.0 + 0.05 * w, hi: window.1 - 0.05 * w, n }
    }

    pub fn bounds(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        let step = if self.n > 1 { (self.hi - self.lo) / (self.n - 1) as f64 } else { 0.0 };
        (0..self.n).map(move |k| self.lo + step * k as f64)
    }
}

/// Evidence that `E − V(r)` is the Liouville transform of the target's Bose invariant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReductionCertificate {
    pub family: FamilyId,
    pub params: BTreeMap<String, f64>,
    pub energy: f64,
    pub target: TargetEquation,
    pub max_mismatch: f64,
    pub worst_point: f64,
    pub grid: GridSpec,
    pub tolerance: f64,
    pub passed: bool,
}

pub fn family_reduction(params: &FamilyParams, e: f64) -> Result<ReductionCertificate> {
    family_reduction_with(params, e, CERTIFICATE_TOL, GridSpec::middle(params.id.window(), CERTIFICATE_POINTS))
}

/// Certificate on an explicit grid; the mismatch is `|J − (E − V)| / max(1, |E|, |V|)`.
pub fn family_reduction_with(
    params: &FamilyParams,
    e: f64,
    tolerance: f64,
    grid: GridSpec,
) -> Result<ReductionCertificate> {
    let target = TargetEquation::for_family(params, e)?;
    let cov = params.id.cov(params)?;
    certify(params, target, &cov, |r| family_potential(params, r), e, tolerance, grid)
}

fn certify(
    params: &FamilyParams,
    target: TargetEquation,
    cov: &ChangeOfVariables,
    potential: impl Fn(f64) -> Result<f64>,
    e: f64,
    tolerance: f64,
    grid: GridSpec,
) -> Result<ReductionCertificate> {
    let invariant = bose_invariant_fn(&target.ode());
    let mut max_mismatch = 0.0f64;
    let mut worst_point = grid.lo;
    for r in grid.points() {
        let v = potential(r)?;
        let j = cov.jet(r).and_then(|j| {
            let s = j[3] / j[1] - 1.5 * (j[2] / j[1]).powi(2);
            Ok(j[1] * j[1] * invariant(j[0].into())? + 0.5 * s)
        });
        let m = match j {
            Ok(j) => (j - (e - v)).norm() / 1f64.max(e.abs()).max(v.abs()),
            Err(_) => f64::INFINITY,
        };
        let m = if m.is_nan() { f64::INFINITY } else { m };
        if m > max_mismatch || (r == grid.lo && m >= max_mismatch) {
            max_mismatch = m;
            worst_point = r;
        }
    }
    Ok(ReductionCertificate {
        family: params.id,
        params: params.named(),
        energy: e,
        target,
        max_mismatch,
        worst_point,
        grid,
        tolerance,
        passed: max_mismatch <= tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(id: FamilyId, a: f64, b: f64) -> FamilyParams {
        FamilyParams::new(id, [a, b]).unwrap()
    }

    #[test]
    fn every_family_certifies() {
        let cases = [
            (fp(FamilyId::PtTrig, 1.5, 0.5), 9.0),
            (fp(FamilyId::PtTrig, 0.3, 2.2), -4.0),
            (fp(FamilyId::PtHyp, 1.2, 3.1), -2.0),
            (fp(FamilyId::Rosen, 1.7, 2.5), -0.8),
            (fp(FamilyId::Eckart, -2.1, 1.4), -0.6),
            (fp(FamilyId::Hydrogen, 1.0, 2.0), -1.0),
            (fp(FamilyId::RadialOsc, 0.6, 1.1), 3.3),
            (fp(FamilyId::Morse, 7.0, 1.0), -1.5),
            (fp(FamilyId::Gho, 1.0, 0.0), 1.0),
            (fp(FamilyId::Gho, 2.3, -0.7), 0.4),
            (fp(FamilyId::SpecialI, 1.4, -0.3), 2.0),
            (fp(FamilyId::SpecialII, 0.8, 0.5), -1.2),
        ];
        for (p, e) in cases {
            let c = family_reduction(&p, e).unwrap();
            assert!(c.passed, "{:?} E = {e}: {} at {}", p, c.max_mismatch, c.worst_point);
            assert_eq!(c.grid.n, 200);
        }
    }

    #[test]
    fn documented_target_parameters() {
        let c = family_reduction(&fp(FamilyId::PtTrig, 1.5, 0.5), 9.0).unwrap();
        match c.target {
            TargetEquation::Hypergeometric { a, b, c, .. } => {
                // {(α+β−μ+1)/2, (α+β+μ+1)/2} = {0, 3}, c = 1 + α
                assert!(a.norm() < 1e-15 && (b - 3.0).norm() < 1e-15 && (c - 2.5).norm() < 1e-15);
            }
            other => panic!("{other:?}"),
        }
        let c = family_reduction(&fp(FamilyId::Hydrogen, 1.0, 2.0), -1.0).unwrap();
        match c.target {
            TargetEquation::Confluent { a, c, gamma, .. } => {
                assert!((a - 0.0).norm() < 1e-15 && (c - 2.0).norm() < 1e-15 && (gamma - 1.0).norm() < 1e-15);
            }
            other => panic!("{other:?}"),
        }
        let c = family_reduction(&fp(FamilyId::Gho, 4.0, 3.0), -0.7).unwrap();
        match c.target {
            TargetEquation::Hermite { shift, scale, .. } => {
                assert!((shift - 3.0 / 8.0).norm() < 1e-15 && (scale - 2f64.sqrt()).norm() < 1e-15);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn perturbed_potential_fails_with_worst_point() {
        let p = fp(FamilyId::Hydrogen, 1.0, 2.0);
        let target = TargetEquation::for_family(&p, -1.0).unwrap();
        let cov = p.id.cov(&p).unwrap();
        let grid = GridSpec::middle(p.id.window(), 50);
        let bump = |r: f64| Ok(family_potential(&p, r)? + if (r - 10.0).abs() < 0.4 { 1e-6 } else { 0.0 });
        let c = certify(&p, target, &cov, bump, -1.0, 1e-9, grid).unwrap();
        assert!(!c.passed);
        assert!((c.worst_point - 10.0).abs() < 0.4);
        let json = serde_json::to_value(&c).unwrap();
        for key in ["family", "params", "energy", "target", "max_mismatch", "grid"] {
            assert!(json.get(key).is_some(), "{key}");
        }
        assert_eq!(json["grid"]["n"], 50);
        assert_eq!(json["target"]["equation"], "confluent");
    }
}

//! The ten exactly solvable families: potentials, substitutions, reduction
//! certificates and bound-state spectra.

mod alternates;
mod certificate;
mod spectrum;

pub use alternates::{
    alternate_routes, inverse_square_coefficient, rescale, rotated_potential, AlternateRoute, Landing, RescaledFamily,
};
pub use certificate::{
    family_reduction, family_reduction_with, GridSpec, ReductionCertificate, TargetEquation, CERTIFICATE_POINTS,
    CERTIFICATE_TOL,
};
pub use spectrum::analytic_spectrum;

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::liouville::{ChangeOfVariables, ClosedForm};

type C = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FamilyId {
    #[serde(rename = "pt_trig")]
    PtTrig,
    #[serde(rename = "pt_hyp")]
    PtHyp,
    #[serde(rename = "rosen")]
    Rosen,
    #[serde(rename = "eckart")]
    Eckart,
    #[serde(rename = "hydrogen")]
    Hydrogen,
    #[serde(rename = "radial_osc")]
    RadialOsc,
    #[serde(rename = "morse")]
    Morse,
    #[serde(rename = "gho")]
    Gho,
    #[serde(rename = "special_I")]
    SpecialI,
    #[serde(rename = "special_II")]
    SpecialII,
}

impl FamilyId {
    pub const ALL: [FamilyId; 10] = [
        FamilyId::PtTrig,
        FamilyId::PtHyp,
        FamilyId::Rosen,
        FamilyId::Eckart,
        FamilyId::Hydrogen,
        FamilyId::RadialOsc,
        FamilyId::Morse,
        FamilyId::Gho,
        FamilyId::SpecialI,
        FamilyId::SpecialII,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FamilyId::PtTrig => "pt_trig",
            FamilyId::PtHyp => "pt_hyp",
            FamilyId::Rosen => "rosen",
            FamilyId::Eckart => "eckart",
            FamilyId::Hydrogen => "hydrogen",
            FamilyId::RadialOsc => "radial_osc",
            FamilyId::Morse => "morse",
            FamilyId::Gho => "gho",
            FamilyId::SpecialI => "special_I",
            FamilyId::SpecialII => "special_II",
        }
    }

    /// Names of the two potential-level parameters.
    pub fn param_names(self) -> [&'static str; 2] {
        match self {
            FamilyId::PtTrig | FamilyId::PtHyp => ["alpha", "beta"],
            FamilyId::Rosen | FamilyId::Eckart => ["kappa", "mu"],
            FamilyId::Hydrogen => ["alpha", "nu"],
            FamilyId::RadialOsc => ["alpha", "gamma"],
            FamilyId::Morse => ["nu", "gamma"],
            FamilyId::Gho => ["theta2", "rho"],
            FamilyId::SpecialI => ["theta2", "lambda"],
            FamilyId::SpecialII => ["rho", "lambda"],
        }
    }

    /// The target parameter carrying the energy.
    pub fn energy_param(self) -> &'static str {
        match self {
            FamilyId::PtTrig | FamilyId::PtHyp => "mu",
            FamilyId::Rosen | FamilyId::Eckart | FamilyId::Morse => "alpha",
            FamilyId::Hydrogen => "gamma",
            FamilyId::RadialOsc => "nu",
            FamilyId::Gho => "lambda",
            FamilyId::SpecialI => "rho",
            FamilyId::SpecialII => "theta2",
        }
    }

    /// `E` as a function of the energy parameter `t`.
    pub fn energy_of(self, t: C) -> C {
        match self {
            FamilyId::PtTrig => t * t,
            FamilyId::PtHyp | FamilyId::Rosen | FamilyId::Eckart | FamilyId::Hydrogen => -t * t,
            FamilyId::RadialOsc => 2.0 * t,
            FamilyId::Morse => -t * t / 4.0,
            FamilyId::Gho | FamilyId::SpecialI | FamilyId::SpecialII => -t,
        }
    }

    /// Inverse of [`FamilyId::energy_of`] on the principal branch.
    pub fn energy_param_of(self, e: C) -> C {
        match self {
            FamilyId::PtTrig => e.sqrt(),
            FamilyId::PtHyp | FamilyId::Rosen | FamilyId::Eckart | FamilyId::Hydrogen => (-e).sqrt(),
            FamilyId::RadialOsc => e / 2.0,
            FamilyId::Morse => 2.0 * (-e).sqrt(),
            FamilyId::Gho | FamilyId::SpecialI | FamilyId::SpecialII => -e,
        }
    }

    /// Open natural domain in `r`.
    pub fn domain(self) -> (f64, f64) {
        match self {
            FamilyId::PtTrig => (0.0, FRAC_PI_2),
            FamilyId::Rosen | FamilyId::Morse | FamilyId::Gho => (f64::NEG_INFINITY, f64::INFINITY),
            _ => (0.0, f64::INFINITY),
        }
    }

    /// Finite window used for certificates and sampling on unbounded domains.
    pub fn window(self) -> (f64, f64) {
        match self {
            FamilyId::PtTrig => (0.0, FRAC_PI_2),
            FamilyId::PtHyp => (0.0, 6.0),
            FamilyId::Rosen => (-4.0, 4.0),
            FamilyId::Eckart => (0.0, 5.0),
            FamilyId::Hydrogen => (0.0, 30.0),
            FamilyId::RadialOsc => (0.0, 6.0),
            FamilyId::Morse => (-3.0, 15.0),
            FamilyId::Gho => (-6.0, 6.0),
            FamilyId::SpecialI | FamilyId::SpecialII => (0.0, 8.0),
        }
    }

    /// The substitution `r ↦ z` (for `gho`, the Hermite variable `y`).
    pub fn cov(self, params: &FamilyParams) -> Result<ChangeOfVariables> {
        let form = match self {
            FamilyId::PtTrig => ClosedForm::SinSq,
            FamilyId::PtHyp => ClosedForm::NegSinhSq,
            FamilyId::Rosen => ClosedForm::Logistic,
            FamilyId::Eckart => ClosedForm::EckartMap,
            FamilyId::Hydrogen => ClosedForm::Affine { scale: 2.0, shift: 0.0 },
            FamilyId::RadialOsc => ClosedForm::Square,
            FamilyId::Morse => ClosedForm::ExpNeg,
            FamilyId::Gho => {
                let [theta2, rho] = params.values;
                if !(theta2 > 0.0) {
                    return Err(Error::InvalidParameter(format!("gho needs theta2 > 0, got {theta2}")));
                }
                let s = theta2.sqrt().sqrt();
                ClosedForm::Affine { scale: s, shift: s * rho / (2.0 * theta2) }
            }
            FamilyId::SpecialI => ClosedForm::Power { scale: 1.5, exponent: 2.0 / 3.0 },
            FamilyId::SpecialII => ClosedForm::Power { scale: 2.0, exponent: 0.5 },
        };
        Ok(ChangeOfVariables::closed(form, self.domain()))
    }

    pub fn metadata(self) -> FamilyInfo {
        let (target, substitution, potential, aliases): (_, _, _, &[&str]) = match self {
            FamilyId::PtTrig => (
                "hypergeometric",
                "z = sin^2 r",
                "(alpha^2-1/4)/sin^2 r + (beta^2-1/4)/cos^2 r",
                &["Poschl-Teller", "trigonometric Poschl-Teller"],
            ),
            FamilyId::PtHyp => (
                "hypergeometric",
                "z = -sinh^2 r",
                "(alpha^2-1/4)/sinh^2 r - (beta^2-1/4)/cosh^2 r",
                &["hyperbolic Poschl-Teller", "Poschl-Teller of the second kind"],
            ),
            FamilyId::Rosen => (
                "hypergeometric",
                "z = 1/(1+e^{2r})",
                "kappa/(1+e^{2r}) - (mu^2-1)/(4 cosh^2 r)",
                &["Manning-Rosen", "Scarf", "Woods-Saxon"],
            ),
            FamilyId::Eckart => (
                "hypergeometric",
                "z = 1/(1-e^{-2r})",
                "kappa/(1-e^{-2r}) + (mu^2-1)/(4 sinh^2 r)",
                &["Hulthen", "generalized Morse"],
            ),
            FamilyId::Hydrogen => {
                ("confluent", "z = 2r", "-nu/r + (alpha^2-1)/(4 r^2)", &["Coulomb", "radial hydrogen"])
            }
            FamilyId::RadialOsc => (
                "confluent",
                "z = r^2",
                "gamma^2 r^2 + (alpha^2-1/4)/r^2",
                &["rotationally symmetric harmonic oscillator"],
            ),
            FamilyId::Morse => ("confluent", "z = e^{-r}", "(gamma^2/4) e^{-2r} - (nu/2) e^{-r}", &[]),
            FamilyId::Gho => (
                "hermite",
                "y = theta^{1/2} (r + rho/(2 theta^2))",
                "theta2 r^2 + rho r",
                &["shifted harmonic oscillator"],
            ),
            FamilyId::SpecialI => ("oscillator", "z = (3r/2)^{2/3}", "theta2 z + lambda/z - 5/(36 r^2)", &[]),
            FamilyId::SpecialII => ("oscillator", "z = (2r)^{1/2}", "rho/(2r)^{1/2} + lambda/(2r) - 3/(16 r^2)", &[]),
        };
        let (lo, hi) = self.domain();
        let kind = |x: f64| if x.is_finite() { EndpointKind::Singular } else { EndpointKind::Infinite };
        FamilyInfo {
            id: self,
            params: self.param_names().to_vec(),
            energy: format!("E = {}", energy_text(self)),
            domain: (lo, hi),
            endpoints: (kind(lo), kind(hi)),
            substitution,
            potential,
            target,
            aliases: aliases.to_vec(),
        }
    }
}

fn energy_text(id: FamilyId) -> &'static str {
    match id {
        FamilyId::PtTrig => "mu^2",
        FamilyId::PtHyp => "-mu^2",
        FamilyId::Rosen | FamilyId::Eckart => "-alpha^2",
        FamilyId::Hydrogen => "-gamma^2",
        FamilyId::RadialOsc => "2 nu",
        FamilyId::Morse => "-alpha^2/4",
        FamilyId::Gho => "-lambda",
        FamilyId::SpecialI => "-rho",
        FamilyId::SpecialII => "-theta2",
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FamilyId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        FamilyId::ALL
            .into_iter()
            .find(|id| id.as_str().to_ascii_lowercase() == key)
            .ok_or_else(|| Error::UnknownFamily(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EndpointKind {
    Singular,
    Infinite,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyInfo {
    pub id: FamilyId,
    pub params: Vec<&'static str>,
    pub energy: String,
    pub domain: (f64, f64),
    pub endpoints: (EndpointKind, EndpointKind),
    pub substitution: &'static str,
    pub potential: &'static str,
    pub target: &'static str,
    pub aliases: Vec<&'static str>,
}

pub fn list_families() -> Vec<FamilyInfo> {
    FamilyId::ALL.iter().map(|id| id.metadata()).collect()
}

/// The two real parameters of a family, in the order of [`FamilyId::param_names`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyParams {
    pub id: FamilyId,
    pub values: [f64; 2],
}

impl FamilyParams {
    pub fn new(id: FamilyId, values: [f64; 2]) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!("{id} parameters must be finite")));
        }
        Ok(FamilyParams { id, values })
    }

    /// From `name = value` pairs; unknown names are rejected and missing ones default to 0.
    pub fn from_named<'a>(id: FamilyId, pairs: impl IntoIterator<Item = (&'a str, f64)>) -> Result<Self> {
        let names = id.param_names();
        let mut values = [0.0; 2];
        for (name, v) in pairs {
            let k = names
                .iter()
                .position(|n| *n == name)
                .ok_or_else(|| Error::UnknownParameter { family: id.to_string(), name: name.to_string() })?;
            values[k] = v;
        }
        FamilyParams::new(id, values)
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.id.param_names().iter().position(|n| *n == name).map(|k| self.values[k])
    }

    pub fn named(&self) -> BTreeMap<String, f64> {
        self.id.param_names().iter().map(|n| n.to_string()).zip(self.values).collect()
    }
}

/// `V(r)` on the natural domain.
pub fn family_potential(params: &FamilyParams, r: f64) -> Result<f64> {
    let (lo, hi) = params.id.domain();
    if !(r > lo && r < hi) {
        return Err(Error::OutsideDomain { at: r, lo, hi });
    }
    let [p, q] = params.values;
    let v = match params.id {
        FamilyId::PtTrig => (p * p - 0.25) / r.sin().powi(2) + (q * q - 0.25) / r.cos().powi(2),
        FamilyId::PtHyp => (p * p - 0.25) / r.sinh().powi(2) - (q * q - 0.25) / r.cosh().powi(2),
        FamilyId::Rosen => p / (1.0 + (2.0 * r).exp()) - (q * q - 1.0) / (4.0 * r.cosh().powi(2)),
        FamilyId::Eckart => p / -(-2.0 * r).exp_m1() + (q * q - 1.0) / (4.0 * r.sinh().powi(2)),
        FamilyId::Hydrogen => -q / r + (p * p - 1.0) / (4.0 * r * r),
        FamilyId::RadialOsc => q * q * r * r + (p * p - 0.25) / (r * r),
        FamilyId::Morse => q * q / 4.0 * (-2.0 * r).exp() - p / 2.0 * (-r).exp(),
        FamilyId::Gho => p * r * r + q * r,
        FamilyId::SpecialI => {
            let z = (1.5 * r).powf(2.0 / 3.0);
            p * z + q / z - 5.0 / (36.0 * r * r)
        }
        FamilyId::SpecialII => p / (2.0 * r).sqrt() + q / (2.0 * r) - 3.0 / (16.0 * r * r),
    };
    if !v.is_finite() {
        return Err(Error::Pole { at: r.into() });
    }
    Ok(v)
}

/// The same closed form at a complex argument, without domain checks.
pub fn family_potential_c(params: &FamilyParams, r: C) -> C {
    let [p, q] = params.values;
    let one = C::new(1.0, 0.0);
    match params.id {
        FamilyId::PtTrig => (p * p - 0.25) / r.sin().powi(2) + (q * q - 0.25) / r.cos().powi(2),
        FamilyId::PtHyp => (p * p - 0.25) / r.sinh().powi(2) - (q * q - 0.25) / r.cosh().powi(2),
        FamilyId::Rosen => p / (one + (2.0 * r).exp()) - (q * q - 1.0) / (4.0 * r.cosh().powi(2)),
        FamilyId::Eckart => p / (one - (-2.0 * r).exp()) + (q * q - 1.0) / (4.0 * r.sinh().powi(2)),
        FamilyId::Hydrogen => -q / r + (p * p - 1.0) / (4.0 * r * r),
        FamilyId::RadialOsc => q * q * r * r + (p * p - 0.25) / (r * r),
        FamilyId::Morse => q * q / 4.0 * (-2.0 * r).exp() - p / 2.0 * (-r).exp(),
        FamilyId::Gho => p * r * r + q * r,
        FamilyId::SpecialI => {
            let z = (1.5 * r).powf(2.0 / 3.0);
            p * z + q / z - 5.0 / (36.0 * r * r)
        }
        FamilyId::SpecialII => p / (2.0 * r).sqrt() + q / (2.0 * r) - 3.0 / (16.0 * r * r),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    fn fp(id: FamilyId, a: f64, b: f64) -> FamilyParams {
        FamilyParams::new(id, [a, b]).unwrap()
    }

    #[test]
    fn names_round_trip() {
        for id in FamilyId::ALL {
            assert_eq!(id.as_str().parse::<FamilyId>().unwrap(), id);
            assert_eq!(serde_json::to_string(&id).unwrap(), format!("\"{id}\""));
        }
        assert_eq!("Special_i".parse::<FamilyId>().unwrap(), FamilyId::SpecialI);
        assert!(matches!("kepler".parse::<FamilyId>(), Err(Error::UnknownFamily(_))));
    }

    #[test]
    fn catalog_listing() {
        let all = list_families();
        assert_eq!(all.len(), 10);
        let aliases = |id: FamilyId| all.iter().find(|f| f.id == id).unwrap().aliases.clone();
        assert!(aliases(FamilyId::Rosen).contains(&"Scarf"));
        assert!(aliases(FamilyId::Rosen).contains(&"Woods-Saxon"));
        assert!(aliases(FamilyId::Eckart).contains(&"Hulthen"));
        assert!(aliases(FamilyId::Eckart).contains(&"generalized Morse"));
    }

    #[test]
    fn named_parameters() {
        let p = FamilyParams::from_named(FamilyId::Morse, [("gamma", 1.0), ("nu", 7.0)]).unwrap();
        assert_eq!(p.values, [7.0, 1.0]);
        assert_eq!(p.get("gamma"), Some(1.0));
        assert!(matches!(
            FamilyParams::from_named(FamilyId::Morse, [("beta", 1.0)]),
            Err(Error::UnknownParameter { .. })
        ));
    }

    #[test]
    fn energy_maps_invert() {
        for id in FamilyId::ALL {
            let t = C::new(0.8, 0.0);
            assert!((id.energy_param_of(id.energy_of(t)) - t).norm() < 1e-15, "{id}");
        }
    }

    #[test]
    fn potential_examples() {
        let free = fp(FamilyId::PtTrig, 0.5, 0.5);
        for r in [0.1, 0.7, 1.5] {
            assert_eq!(family_potential(&free, r).unwrap(), 0.0);
        }
        let v = family_potential(&fp(FamilyId::PtTrig, 1.0, 1.0), FRAC_PI_4).unwrap();
        assert!((v - 3.0).abs() < 1e-14);
        assert!(matches!(family_potential(&free, 2.0), Err(Error::OutsideDomain { .. })));
        assert!(matches!(family_potential(&fp(FamilyId::Hydrogen, 1.0, 1.0), 0.0), Err(Error::OutsideDomain { .. })));
    }

    #[test]
    fn new_potentials_fixed_inverse_square_terms() {
        // r²V → c₂ as r → 0 when the other parameters vanish
        let r = 1e-3;
        let v1 = family_potential(&fp(FamilyId::SpecialI, 0.0, 0.0), r).unwrap();
        assert!((r * r * v1 + 5.0 / 36.0).abs() < 1e-15);
        let v2 = family_potential(&fp(FamilyId::SpecialII, 0.0, 0.0), r).unwrap();
        assert!((r * r * v2 + 3.0 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn potentials_real_on_domain() {
        for id in FamilyId::ALL {
            let p = fp(id, 1.3, 0.7);
            let (lo, hi) = id.window();
            for k in 1..50 {
                let r = lo + (hi - lo) * k as f64 / 50.0;
                let v = family_potential_c(&p, r.into());
                assert!(v.im == 0.0 && v.re.is_finite(), "{id} at {r}");
            }
        }
    }
}

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::family::family_spectrum;
use super::numerov::residual;
use crate::catalog::{analytic_spectrum, family_potential, family_reduction, FamilyId, FamilyParams};
use crate::specfun::{build_solution, uniform_grid};

pub const SPECTRUM_TOL: f64 = 1e-7;
pub const RESIDUAL_TOL: f64 = 1e-6;
pub const SWEEP_CERTIFICATES: usize = 20;
pub const SWEEP_PROFILES: usize = 5;
pub const SWEEP_LEVELS: usize = 6;
/// Grid step for residual checks; the stencil error scales like `(h/r)⁴`.
pub const PROFILE_STEP: f64 = 0.0025;

/// Random parameters and energy for a certificate check.
pub fn certificate_draw(id: FamilyId, rng: &mut impl Rng) -> (FamilyParams, f64) {
    let mut draw = |lo: f64, hi: f64| rng.gen_range(lo..hi);
    let (mut a, b) = (draw(-3.0, 3.0), draw(-3.0, 3.0));
    let e = draw(-5.0, 5.0);
    if id == FamilyId::Gho {
        a = a.abs() + 0.1;
    }
    (FamilyParams::new(id, [a, b]).expect("finite draw"), e)
}

/// Random parameters and energy whose series solution is evaluable to full
/// precision on [`profile_window`].
pub fn profile_draw(id: FamilyId, rng: &mut impl Rng) -> (FamilyParams, f64) {
    let mut a: f64 = rng.gen_range(0.6..2.5);
    let mut b: f64 = rng.gen_range(0.6..2.5);
    let mut e: f64 = rng.gen_range(-3.0..3.0);
    match id {
        FamilyId::Gho => a = rng.gen_range(0.5..2.0),
        // E > 0 puts the Kummer argument on the imaginary axis
        FamilyId::Hydrogen => e = -e.abs() - 0.05,
        FamilyId::Rosen | FamilyId::Eckart => {
            a = rng.gen_range(-2.0..2.0);
            b = b.max(1.0);
        }
        // θ² > 0: an imaginary θ puts the Kummer argument near the imaginary axis
        FamilyId::SpecialI => b *= if rng.gen_bool(0.5) { 1.0 } else { -1.0 },
        FamilyId::SpecialII => {
            e = -e.abs() - 0.3;
            a *= if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        }
        _ => {}
    }
    (FamilyParams::new(id, [a, b]).expect("finite draw"), e)
}

/// Grid inside every series' evaluation region for moderate parameters.
pub fn profile_window(id: FamilyId) -> (f64, f64) {
    match id {
        FamilyId::PtTrig => (0.2, 1.0),
        FamilyId::PtHyp => (0.2, 1.3),
        FamilyId::Rosen => (-0.5, 4.0),
        FamilyId::Eckart => (0.2, 4.0),
        FamilyId::Hydrogen => (0.2, 8.0),
        FamilyId::RadialOsc => (0.2, 3.0),
        FamilyId::Morse => (-1.5, 8.0),
        FamilyId::Gho => (-4.0, 4.0),
        FamilyId::SpecialI | FamilyId::SpecialII => (0.2, 4.0),
    }
}

pub fn profile_grid(id: FamilyId) -> Vec<f64> {
    let (lo, hi) = profile_window(id);
    uniform_grid(lo, hi, ((hi - lo) / PROFILE_STEP).round() as usize + 1)
}

/// Parameters with several bound states, used for spectrum comparisons.
/// `None` for families without a closed-form spectrum.
pub fn reference_params(id: FamilyId) -> Option<FamilyParams> {
    let v = match id {
        FamilyId::PtTrig => [1.5, 2.5],
        FamilyId::PtHyp => [1.5, 14.0],
        FamilyId::Rosen => [2.0, 9.0],
        FamilyId::Eckart => [-30.0, 1.5],
        FamilyId::Hydrogen => [2.0, 10.0],
        FamilyId::RadialOsc => [1.5, 1.0],
        FamilyId::Morse => [14.0, 1.0],
        FamilyId::Gho => [1.0, 0.0],
        FamilyId::SpecialI | FamilyId::SpecialII => return None,
    };
    FamilyParams::new(id, v).ok()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckSummary {
    pub checks: usize,
    pub failures: usize,
    /// Largest error seen; infinite when a check could not be evaluated.
    pub worst: f64,
    pub tolerance: f64,
    /// First failure, if any.
    pub detail: Option<String>,
}

impl CheckSummary {
    fn new(tolerance: f64) -> Self {
        CheckSummary { checks: 0, failures: 0, worst: 0.0, tolerance, detail: None }
    }

    fn record(&mut self, err: Result<f64, String>, what: impl FnOnce() -> String) {
        self.checks += 1;
        let (value, msg) = match err {
            Ok(v) if v <= self.tolerance => {
                self.worst = self.worst.max(v);
                return;
            }
            Ok(v) => (if v.is_nan() { f64::INFINITY } else { v }, format!("{}: error {v:e}", what())),
            Err(m) => (f64::INFINITY, format!("{}: {m}", what())),
        };
        self.worst = self.worst.max(value);
        self.failures += 1;
        self.detail.get_or_insert(msg);
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyReport {
    pub family: FamilyId,
    pub certificates: CheckSummary,
    pub residuals: CheckSummary,
    pub spectrum: Option<CheckSummary>,
}

impl FamilyReport {
    pub fn passed(&self) -> bool {
        self.certificates.passed() && self.residuals.passed() && self.spectrum.as_ref().is_none_or(|s| s.passed())
    }
}

/// Certificates at random parameters, residuals of random solution profiles and
/// (where a closed form exists) analytic against shooting spectra.
pub fn verify_family(id: FamilyId, seed: u64) -> FamilyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (id as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let mut certificates = CheckSummary::new(crate::catalog::CERTIFICATE_TOL);
    for _ in 0..SWEEP_CERTIFICATES {
        let (p, e) = certificate_draw(id, &mut rng);
        let got = family_reduction(&p, e).map(|c| c.max_mismatch).map_err(|e| e.to_string());
        certificates.record(got, || format!("certificate {:?} E = {e}", p.values));
    }

    let mut residuals = CheckSummary::new(RESIDUAL_TOL);
    let grid = profile_grid(id);
    for _ in 0..SWEEP_PROFILES {
        let (p, e) = profile_draw(id, &mut rng);
        let got = build_solution(&p, e, &grid)
            .and_then(|prof| residual(|r| family_potential(&p, r).unwrap_or(f64::NAN), e, &prof))
            .map_err(|e| e.to_string());
        residuals.record(got, || format!("profile {:?} E = {e}", p.values));
    }

    let spectrum = reference_params(id).map(|p| {
        let mut s = CheckSummary::new(SPECTRUM_TOL);
        let analytic = analytic_spectrum(&p, SWEEP_LEVELS).unwrap_or_default();
        match family_spectrum(&p, analytic.len()) {
            Ok(shot) => {
                for (n, e) in analytic.iter().enumerate() {
                    let got = shot
                        .levels
                        .get(n)
                        .map(|l| (l.energy - e).abs() / e.abs().max(1.0))
                        .ok_or_else(|| "level not found by shooting".to_string());
                    s.record(got, || format!("level {n} of {:?}", p.values));
                }
            }
            Err(err) => s.record(Err(err.to_string()), || format!("spectrum of {:?}", p.values)),
        }
        s
    });
    FamilyReport { family: id, certificates, residuals, spectrum }
}

/// Every family, checked concurrently; reports come back in catalog order.
pub fn verify_all(seed: u64) -> Vec<FamilyReport> {
    std::thread::scope(|s| {
        let handles: Vec<_> = FamilyId::ALL.iter().map(|&id| s.spawn(move || verify_family(id, seed))).collect();
        handles.into_iter().map(|h| h.join().expect("family check panicked")).collect()
    })
}

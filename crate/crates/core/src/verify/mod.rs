//! Numerical oracle: Numerov integration, finite-difference residuals and shooting spectra.

mod family;
mod numerov;
mod shooting;
mod sweep;

pub use family::{family_problem, family_spectrum};
pub use numerov::{numerov, residual, residual_on, NumerovSolution, Renormalization, OVERFLOW};
pub use shooting::{
    shoot_spectrum, Endpoint, EndpointType, Potential, ShootingProblem, ShootingSpectrum, ShotLevel, MAX_BOX_PASSES,
};
pub use sweep::{
    certificate_draw, profile_draw, profile_grid, profile_window, reference_params, verify_all, verify_family,
    CheckSummary, FamilyReport, PROFILE_STEP, RESIDUAL_TOL, SPECTRUM_TOL, SWEEP_CERTIFICATES, SWEEP_LEVELS,
    SWEEP_PROFILES,
};

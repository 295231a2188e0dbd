//! Hypergeometric-type series and closed-form wavefunctions.

mod profile;
mod series;

pub use profile::{build_solution, uniform_grid, Anchor, GaugeSummary, Route, SolutionProfile, SERIES_TOL};
pub use series::{
    hermite_jet, hermite_pair, hermite_solution, hyp0f1, hyp0f1_jet, hyp1f1, hyp1f1_jet, hyp2f1, hyp2f1_jet,
    CONFLUENT_RADIUS, DIRECT_RADIUS, HERMITE_RANGE, MAX_TERMS, MIN_TOL,
};

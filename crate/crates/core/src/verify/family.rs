use super::shooting::{shoot_spectrum, Endpoint, ShootingProblem, ShootingSpectrum};
use crate::catalog::{family_potential, FamilyId, FamilyParams};
use crate::error::{Error, Result};

/// Shooting setup for a catalog family: endpoint types from the potential's
/// behaviour, the catalog window as the initial box, and the continuum
/// threshold (if any) as the top of the energy bracket.
pub fn family_problem(params: &FamilyParams) -> Result<ShootingProblem> {
    let p = *params;
    let id = p.id;
    let [a, b] = p.values;
    let (w0, w1) = id.window();
    let (lo, hi) = match id {
        FamilyId::PtTrig => (Endpoint::singular(w0), Endpoint::singular(w1)),
        FamilyId::Rosen | FamilyId::Morse | FamilyId::Gho => (Endpoint::infinite(w0), Endpoint::infinite(w1)),
        _ => (Endpoint::singular(0.0), Endpoint::infinite(w1)),
    };
    let threshold = match id {
        FamilyId::PtHyp | FamilyId::Hydrogen | FamilyId::Morse | FamilyId::SpecialII => Some(0.0),
        FamilyId::Rosen => Some(a.min(0.0)),
        FamilyId::Eckart => Some(a),
        FamilyId::SpecialI if a <= 0.0 => {
            return Err(Error::InvalidParameter("special_I needs rho > 0 for a discrete spectrum".into()))
        }
        FamilyId::RadialOsc if b == 0.0 => {
            return Err(Error::InvalidParameter("radial_osc needs gamma != 0 for a discrete spectrum".into()))
        }
        _ => None,
    };
    let v = move |r: f64| family_potential(&p, r).unwrap_or(f64::NAN);
    let vmin = sample_min(&v, lo.at, hi.at);
    if !vmin.is_finite() {
        return Err(Error::InvalidParameter(format!("{id}: potential not finite on the window")));
    }
    let floor = vmin - 1.0;
    Ok(match threshold {
        Some(t) if t > floor => ShootingProblem::new(v, lo, hi, (floor, t)),
        Some(_) => ShootingProblem::new(v, lo, hi, (floor, floor + 1.0)),
        None => ShootingProblem::new(v, lo, hi, (floor, vmin + 10.0)).expanding(),
    })
}

/// Minimum over a uniform sample plus geometric samples toward each end.
fn sample_min(v: &dyn Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    let len = hi - lo;
    let delta = 1e-4 * len.min(1.0);
    let mut m = f64::INFINITY;
    let mut take = |r: f64| {
        let x = v(r);
        if x.is_finite() {
            m = m.min(x);
        }
    };
    for k in 1..2000 {
        take(lo + len * k as f64 / 2000.0);
    }
    let mut d = delta;
    while d < 0.05 * len {
        take(lo + d);
        take(hi - d);
        d *= 1.5;
    }
    m
}

pub fn family_spectrum(params: &FamilyParams, levels: usize) -> Result<ShootingSpectrum> {
    shoot_spectrum(&family_problem(params)?, levels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::analytic_spectrum;
    use crate::specfun::{build_solution, uniform_grid};
    use crate::verify::numerov;

    fn fp(id: FamilyId, a: f64, b: f64) -> FamilyParams {
        FamilyParams::new(id, [a, b]).unwrap()
    }

    #[test]
    fn morse_levels() {
        let p = fp(FamilyId::Morse, 7.0, 1.0);
        let s = family_spectrum(&p, 3).unwrap();
        let a = analytic_spectrum(&p, 3).unwrap();
        assert_eq!(s.levels.len(), 3);
        for (l, e) in s.levels.iter().zip(&a) {
            assert!((l.energy - e).abs() < 1e-7, "{l:?} vs {e}");
            assert_eq!(l.nodes, l.n);
        }
    }

    #[test]
    fn eckart_and_rosen_levels() {
        for p in [fp(FamilyId::Eckart, -30.0, 1.5), fp(FamilyId::Rosen, 2.0, 9.0)] {
            let a = analytic_spectrum(&p, 3).unwrap();
            assert!(!a.is_empty());
            let s = family_spectrum(&p, a.len()).unwrap();
            for (l, e) in s.levels.iter().zip(&a) {
                assert!((l.energy - e).abs() < 1e-7 * e.abs().max(1.0), "{}: {l:?} vs {e}", p.id);
            }
        }
    }

    #[test]
    fn numerov_matches_the_closed_form() {
        let p = fp(FamilyId::PtHyp, 1.3, 2.7);
        let e = -0.8;
        let grid = uniform_grid(0.2, 1.3, 1101);
        let prof = build_solution(&p, e, &grid).unwrap();
        let v = |r: f64| family_potential(&p, r).unwrap();
        let s = numerov(v, e, &grid, prof.values[0].re, prof.values[1].re).unwrap();
        let err = s.values.iter().zip(&prof.values).map(|(a, b)| (a - b.re).abs()).fold(0.0, f64::max);
        assert!(err <= 1e-6 * prof.max_abs(), "{err}");
    }

    #[test]
    fn six_families_six_levels() {
        let cases = [
            fp(FamilyId::PtTrig, 1.5, 2.5),
            fp(FamilyId::PtHyp, 1.5, 14.0),
            fp(FamilyId::Hydrogen, 2.0, 10.0),
            fp(FamilyId::RadialOsc, 1.5, 1.0),
            fp(FamilyId::Morse, 14.0, 1.0),
            fp(FamilyId::Gho, 1.0, 0.0),
        ];
        for p in cases {
            let a = analytic_spectrum(&p, 6).unwrap();
            assert_eq!(a.len(), 6, "{}", p.id);
            let s = family_spectrum(&p, 6).unwrap();
            assert!(s.box_converged && !s.exhausted, "{}", p.id);
            for (l, e) in s.levels.iter().zip(&a) {
                let err = (l.energy - e).abs() / e.abs().max(1.0);
                assert!(err <= 1e-7, "{}: {l:?} vs {e}", p.id);
                assert_eq!(l.nodes, l.n);
            }
        }
    }

    #[test]
    fn every_family_profile_solves_the_equation() {
        use crate::verify::sweep::{profile_draw, profile_grid};
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for id in FamilyId::ALL {
            let grid = profile_grid(id);
            for _ in 0..10 {
                let (p, e) = profile_draw(id, &mut rng);
                let prof = build_solution(&p, e, &grid).unwrap_or_else(|err| panic!("{id} {:?} {e}: {err}", p.values));
                let res = super::super::residual(|r| family_potential(&p, r).unwrap(), e, &prof).unwrap();
                assert!(res <= 1e-6, "{id} {:?} {e}: {res}", p.values);
            }
        }
    }
}

use super::{FamilyId, FamilyParams};
use crate::error::{Error, Result};

pub const MAX_LEVELS: usize = 21;

/// Bound-state energies `E_0, E_1, …` (at most `levels` of them) from series
/// termination, keeping only levels whose wavefunction decays at both ends.
///
/// Families without a termination rule (`special_I`, `special_II`) return an
/// empty list, as do parameters without bound states.
pub fn analytic_spectrum(params: &FamilyParams, levels: usize) -> Result<Vec<f64>> {
    if levels > MAX_LEVELS {
        return Err(Error::InvalidParameter(format!("at most {MAX_LEVELS} levels, asked for {levels}")));
    }
    let [p, q] = params.values;
    let mut out = Vec::new();
    for n in 0..levels {
        let n2 = 2.0 * n as f64;
        let e = match params.id {
            FamilyId::PtTrig => Some((p.abs() + q.abs() + 1.0 + n2).powi(2)),
            FamilyId::PtHyp => {
                let s = q.abs() - p.abs() - 1.0 - n2;
                (s > 0.0).then(|| -s * s)
            }
            FamilyId::Rosen => {
                // α + β = s, β² − α² = κ
                let s = q.abs() - 1.0 - n2;
                (s > 0.0 && s * s > p.abs()).then(|| -((s * s - p) / (2.0 * s)).powi(2))
            }
            FamilyId::Eckart => {
                // β − |α| = −t, β² − α² = κ, β > 0
                let t = q.abs() + 1.0 + n2;
                (t * t < -p).then(|| -((t * t - p) / (2.0 * t)).powi(2))
            }
            FamilyId::Hydrogen => (q > 0.0).then(|| -(q / (p.abs() + 1.0 + n2)).powi(2)),
            FamilyId::RadialOsc => (q != 0.0).then(|| 2.0 * q.abs() * (1.0 + p.abs() + n2)),
            FamilyId::Morse => {
                let s = if q != 0.0 { p / q.abs() - 1.0 - n2 } else { -1.0 };
                (s > 0.0).then(|| -s * s / 4.0)
            }
            FamilyId::Gho => (p > 0.0).then(|| {
                let theta = p.sqrt();
                theta * (2.0 * n as f64 + 1.0) - q * q / (4.0 * p)
            }),
            FamilyId::SpecialI | FamilyId::SpecialII => None,
        };
        match e {
            Some(e) => out.push(e),
            None => break,
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(id: FamilyId, a: f64, b: f64, n: usize) -> Vec<f64> {
        analytic_spectrum(&FamilyParams::new(id, [a, b]).unwrap(), n).unwrap()
    }

    #[test]
    fn closed_forms() {
        assert_eq!(spec(FamilyId::PtTrig, 0.5, 0.5, 3), vec![4.0, 16.0, 36.0]);
        assert_eq!(spec(FamilyId::Gho, 1.0, 0.0, 5), vec![1.0, 3.0, 5.0, 7.0, 9.0]);
        let h = spec(FamilyId::Hydrogen, 1.0, 2.0, 2);
        assert!((h[0] + 1.0).abs() < 1e-15 && (h[1] + 0.25).abs() < 1e-15);
        let m = spec(FamilyId::Morse, 7.0, 1.0, 10);
        assert_eq!(m, vec![-9.0, -4.0, -1.0]);
    }

    #[test]
    fn no_bound_states() {
        assert!(spec(FamilyId::Hydrogen, 1.0, -2.0, 5).is_empty());
        assert!(spec(FamilyId::PtHyp, 3.0, 2.0, 5).is_empty());
        assert!(spec(FamilyId::SpecialI, 1.0, 1.0, 5).is_empty());
        assert!(spec(FamilyId::Eckart, 1.0, 0.5, 5).is_empty());
        assert!(analytic_spectrum(&FamilyParams::new(FamilyId::Gho, [1.0, 0.0]).unwrap(), 50).is_err());
    }
}

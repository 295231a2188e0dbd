use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;

use super::series::{hermite_jet, hyp0f1_jet, hyp1f1_jet, hyp2f1_jet};
use crate::catalog::{family_reduction, FamilyId, FamilyParams, TargetEquation};
use crate::equations::{airy_reduction, canonical_form, hermite_reduction, GaugeFactor, Jet};
use crate::error::{Error, Result};
use crate::output::sci;

type C = Complex64;

pub const SERIES_TOL: f64 = 1e-15;

/// How a profile was assembled: `φ(r) = |z'|^{−½}·h(z)·f(z)` with `z = z(r)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Route {
    /// The series behind `f`, e.g. `2F1(a,b;c;z)`.
    pub series: String,
    pub target: TargetEquation,
    pub gauge: GaugeSummary,
}

/// `h(z) = exp(p(z))·∏|z − z_k|^{e_k}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GaugeSummary {
    pub exponential: String,
    pub powers: Vec<(C, C)>,
}

impl GaugeSummary {
    fn of(g: &GaugeFactor) -> Self {
        GaugeSummary {
            exponential: g.exp_poly.to_string(),
            powers: g.power_factors.iter().map(|f| (f.root.to_complex(), f.exponent.to_complex())).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Anchor {
    pub point: f64,
    pub value: C,
    pub derivative: C,
}

/// A wavefunction sampled on a grid, scaled so that it equals 1 at the anchor.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolutionProfile {
    pub family: FamilyId,
    pub params: std::collections::BTreeMap<String, f64>,
    pub energy: f64,
    pub grid: Vec<f64>,
    pub values: Vec<C>,
    pub route: Route,
    pub anchor: Anchor,
}

impl SolutionProfile {
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["r", "re", "im"])?;
        for (r, v) in self.grid.iter().zip(&self.values) {
            out.write_record([sci(*r), sci(v.re), sci(v.im)])?;
        }
        Ok(out.flush()?)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("profile serializes")
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// The series solution `f` of the target equation, as a jet in the target variable.
struct Branch {
    series: String,
    eval: Box<dyn Fn(f64) -> Result<Jet>>,
}

fn branch(id: FamilyId, target: TargetEquation) -> Result<Branch> {
    let tol = SERIES_TOL;
    Ok(match target {
        TargetEquation::Hypergeometric { a, b, c, .. } if id == FamilyId::Eckart => {
            // the solution at z = 1, continued through the Pfaff form for z > 1
            let c1 = a + b - c + 1.0;
            Branch {
                series: format!("2F1({a},{b};{c1};1-z)"),
                eval: Box::new(move |z| {
                    let j = hyp2f1_jet(a, b, c1, (1.0 - z).into(), tol)?;
                    Ok(j.compose(Jet::real(1.0 - z, -1.0, 0.0)))
                }),
            }
        }
        TargetEquation::Hypergeometric { a, b, c, .. } => Branch {
            series: format!("2F1({a},{b};{c};z)"),
            eval: Box::new(move |z| hyp2f1_jet(a, b, c, z.into(), tol)),
        },
        TargetEquation::Confluent { a, c, gamma, .. } => {
            if gamma.norm() == 0.0 {
                return Err(Error::InvalidParameter("confluent route needs gamma != 0".into()));
            }
            let a1 = a / gamma;
            Branch {
                series: format!("1F1({a1};{c};{gamma}*z)"),
                eval: Box::new(move |z| {
                    let w = gamma * z;
                    Ok(hyp1f1_jet(a1, c, w, tol)?.compose(Jet::new(w, gamma, C::new(0.0, 0.0))))
                }),
            }
        }
        TargetEquation::Hermite { a, .. } => {
            Branch { series: format!("hermite({a};y)"), eval: Box::new(move |y| hermite_jet(a, y.into(), tol)) }
        }
        TargetEquation::Oscillator { theta2, rho, lambda } => {
            if theta2.norm() != 0.0 {
                let h = hermite_reduction(theta2, rho, lambda);
                let s = h.sqrt_theta;
                Branch {
                    series: format!("exp(-w^2/2)*hermite({};w), w = {s}*(z + {})", h.a, h.shift),
                    eval: Box::new(move |z| {
                        let w = h.y(z.into());
                        let g = Jet::new(-w * w / 2.0, -w, C::new(-1.0, 0.0)).exp() * hermite_jet(h.a, w, tol)?;
                        Ok(g.compose(Jet::new(w, s, C::new(0.0, 0.0))))
                    }),
                }
            } else if rho.norm() != 0.0 {
                // f'' = y f in y = scale·z + shift
                let d = airy_reduction(rho, lambda);
                Branch {
                    series: format!("0F1(;2/3;y^3/9), y = {}*z + {}", d.scale, d.shift),
                    eval: Box::new(move |z| {
                        let y = d.y(z.into());
                        let w = y * y * y / 9.0;
                        let g = hyp0f1_jet(C::new(2.0 / 3.0, 0.0), w, tol)?.compose(Jet::new(
                            w,
                            y * y / 3.0,
                            2.0 * y / 3.0,
                        ));
                        Ok(g.compose(Jet::new(y, d.scale, C::new(0.0, 0.0))))
                    }),
                }
            } else {
                Branch {
                    series: format!("0F1(;1/2;{lambda}*z^2/4)"),
                    eval: Box::new(move |z| {
                        let w = lambda * z * z / 4.0;
                        Ok(hyp0f1_jet(C::new(0.5, 0.0), w, tol)?.compose(Jet::new(w, lambda * z / 2.0, lambda / 2.0)))
                    }),
                }
            }
        }
    })
}

/// Closed-form solution of `−φ'' + Vφ = Eφ` on `grid`, normalized to 1 at the
/// grid point where `|φ|` is largest.
pub fn build_solution(params: &FamilyParams, e: f64, grid: &[f64]) -> Result<SolutionProfile> {
    let id = params.id;
    let (lo, hi) = id.domain();
    if grid.is_empty() || grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidGrid("grid must be nonempty and strictly increasing".into()));
    }
    for &r in [grid[0], grid[grid.len() - 1]].iter() {
        if !(r > lo && r < hi) {
            return Err(Error::OutsideDomain { at: r, lo, hi });
        }
    }
    let cert = family_reduction(params, e)?;
    if !cert.passed {
        return Err(Error::InvalidParameter(format!(
            "reduction certificate failed: mismatch {:e} at r = {}",
            cert.max_mismatch, cert.worst_point
        )));
    }
    let target = cert.target;
    let cov = id.cov(params)?;
    let (_, gauge) = canonical_form(&target.ode())?;
    let f = branch(id, target)?;

    let mut values = Vec::with_capacity(grid.len());
    let mut slopes = Vec::with_capacity(grid.len());
    for &r in grid {
        let at_r = |e: Error| match e {
            Error::SeriesDomain { z, msg } => Error::SeriesDomain { z, msg: format!("at r = {r}: {msg}") },
            Error::NoConvergence { terms } => Error::SeriesDomain {
                z: C::new(r, 0.0),
                msg: format!("no convergence within {terms} terms at r = {r}"),
            },
            other => other,
        };
        let [z, z1, z2, _] = cov.jet(r)?;
        let phi = (gauge.jet_abs(z)? * (f.eval)(z).map_err(at_r)?).compose(Jet::real(z, z1, z2));
        // |z'|^{−½} and its r-derivative
        let m = z1.abs().powf(-0.5);
        let dm = -0.5 * z2 / (z1 * z1.abs().sqrt());
        let (v, d) = (m * phi.v, dm * phi.v + m * phi.d1);
        if !(v.is_finite() && d.is_finite()) {
            return Err(Error::SeriesDomain {
                z: C::new(z, 0.0),
                msg: format!("non-finite solution value at r = {r}"),
            });
        }
        values.push(v);
        slopes.push(d);
    }
    let k = (0..grid.len()).max_by(|&i, &j| values[i].norm().total_cmp(&values[j].norm())).unwrap_or(0);
    let scale = values[k];
    if !(scale.norm() > 0.0 && scale.is_finite()) {
        return Err(Error::InvalidParameter("solution vanishes or overflows on the grid".into()));
    }
    let values: Vec<C> = values.iter().map(|v| v / scale).collect();
    Ok(SolutionProfile {
        family: id,
        params: params.named(),
        energy: e,
        grid: grid.to_vec(),
        anchor: Anchor { point: grid[k], value: values[k], derivative: slopes[k] / scale },
        values,
        route: Route { series: f.series, target, gauge: GaugeSummary::of(&gauge) },
    })
}

pub fn uniform_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n < 2 {
        return vec![lo; n];
    }
    let h = (hi - lo) / (n - 1) as f64;
    (0..n).map(|k| if k == n - 1 { hi } else { lo + h * k as f64 }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(id: FamilyId, a: f64, b: f64) -> FamilyParams {
        FamilyParams::new(id, [a, b]).unwrap()
    }

    #[test]
    fn gaussian_ground_state() {
        let grid = uniform_grid(-4.0, 4.0, 81);
        let p = build_solution(&fp(FamilyId::Gho, 1.0, 0.0), 1.0, &grid).unwrap();
        for (r, v) in grid.iter().zip(&p.values) {
            assert!((v - (-r * r / 2.0).exp()).norm() < 1e-13, "r = {r}");
        }
        assert!(p.anchor.point.abs() < 1e-12 && p.anchor.derivative.norm() < 1e-12);
    }

    #[test]
    fn free_sine() {
        let grid = uniform_grid(0.05, 1.0, 40);
        let p = build_solution(&fp(FamilyId::PtTrig, 0.5, 0.5), 4.0, &grid).unwrap();
        let k = p.grid.iter().position(|&r| r == p.anchor.point).unwrap();
        let s = (2.0 * p.grid[k]).sin();
        for (r, v) in grid.iter().zip(&p.values) {
            assert!((v - (2.0 * r).sin() / s).norm() < 1e-12, "r = {r}");
        }
    }

    #[test]
    fn hydrogen_ground_state() {
        let grid = uniform_grid(0.1, 8.0, 60);
        let p = build_solution(&fp(FamilyId::Hydrogen, 1.0, 2.0), -1.0, &grid).unwrap();
        // φ ∝ r e^{−r}
        let k = p.grid.iter().position(|&r| r == p.anchor.point).unwrap();
        let f = |r: f64| r * (-r).exp();
        for (r, v) in grid.iter().zip(&p.values) {
            assert!((v - f(*r) / f(p.grid[k])).norm() < 1e-12, "r = {r}");
        }
        assert!((p.anchor.point - 1.0).abs() < 0.15);
    }

    #[test]
    fn offending_r_is_reported() {
        let grid = uniform_grid(0.1, 1.5, 30);
        let err = build_solution(&fp(FamilyId::PtTrig, 1.2, 0.7), 3.3, &grid).unwrap_err();
        match err {
            Error::SeriesDomain { msg, .. } => assert!(msg.contains("at r = "), "{msg}"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            build_solution(&fp(FamilyId::PtTrig, 1.2, 0.7), 3.3, &[0.5, 0.4]),
            Err(Error::InvalidGrid(_))
        ));
    }

    #[test]
    fn exports() {
        let grid = uniform_grid(0.2, 3.0, 5);
        let p = build_solution(&fp(FamilyId::Morse, 7.0, 1.0), -4.0, &grid).unwrap();
        let mut buf = Vec::new();
        p.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("r,re,im\n"));
        assert_eq!(text.lines().count(), 6);
        let j = p.to_json();
        assert_eq!(j["route"]["target"]["equation"], "confluent");
        assert!(j["anchor"]["point"].is_number());
    }
}

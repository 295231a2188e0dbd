use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::specfun::SolutionProfile;

/// Values beyond this magnitude trigger a rescale of the whole solution so far.
pub const OVERFLOW: f64 = 1e150;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Renormalization {
    /// Index of the step that crossed the threshold.
    pub index: usize,
    /// Factor applied to every value up to and including `index`.
    pub factor: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NumerovSolution {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub renormalizations: Vec<Renormalization>,
}

pub(crate) fn uniform_step(grid: &[f64], min_points: usize) -> Result<f64> {
    if grid.len() < min_points {
        return Err(Error::InvalidGrid(format!("need at least {min_points} points, got {}", grid.len())));
    }
    let h = (grid[grid.len() - 1] - grid[0]) / (grid.len() - 1) as f64;
    if !(h > 0.0) {
        return Err(Error::InvalidGrid("grid must be increasing".into()));
    }
    for (k, w) in grid.windows(2).enumerate() {
        if ((w[1] - w[0]) - h).abs() > 1e-8 * h {
            return Err(Error::InvalidGrid(format!("grid is not uniform at index {k}")));
        }
    }
    Ok(h)
}

/// Three-term Numerov recursion for `u'' = g u` on a uniform grid.
pub(crate) fn numerov_g(g: &[f64], h: f64, u0: f64, u1: f64) -> (Vec<f64>, Vec<Renormalization>) {
    let k = h * h / 12.0;
    let mut u = Vec::with_capacity(g.len());
    let mut events = Vec::new();
    u.push(u0);
    if g.len() > 1 {
        u.push(u1);
    }
    for n in 1..g.len().saturating_sub(1) {
        let next = (2.0 * (1.0 + 5.0 * k * g[n]) * u[n] - (1.0 - k * g[n - 1]) * u[n - 1]) / (1.0 - k * g[n + 1]);
        u.push(next);
        if next.abs() > OVERFLOW {
            let factor = 1.0 / next.abs();
            u.iter_mut().for_each(|x| *x *= factor);
            events.push(Renormalization { index: n + 1, factor });
        }
    }
    (u, events)
}

/// Numerov solution of `−y'' + V y = E y` from the first two values.
pub fn numerov(v: impl Fn(f64) -> f64, e: f64, grid: &[f64], y0: f64, y1: f64) -> Result<NumerovSolution> {
    let h = uniform_step(grid, 2)?;
    let g = grid
        .iter()
        .map(|&r| {
            let x = v(r);
            if x.is_finite() {
                Ok(x - e)
            } else {
                Err(Error::Pole { at: r.into() })
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let (values, renormalizations) = numerov_g(&g, h, y0, y1);
    Ok(NumerovSolution { grid: grid.to_vec(), values, renormalizations })
}

/// Largest `|−φ'' + (V − E)φ| / max(|φ|·s, floor)` over interior points, with the
/// fourth-order five-point second difference, `s = max(1, |V|, |E|)` and
/// `floor = 1e−3·max|φ|·max(1, |E|)`.
pub fn residual_on(v: impl Fn(f64) -> f64, e: f64, grid: &[f64], values: &[Complex64]) -> Result<f64> {
    if grid.len() != values.len() {
        return Err(Error::InvalidGrid("grid and values differ in length".into()));
    }
    let h = uniform_step(grid, 7)?;
    let peak = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let floor = (1e-3 * peak * e.abs().max(1.0)).max(f64::MIN_POSITIVE);
    let mut worst = 0.0f64;
    for i in 2..grid.len() - 2 {
        let d2 = (-values[i - 2] + 16.0 * values[i - 1] - 30.0 * values[i] + 16.0 * values[i + 1] - values[i + 2])
            / (12.0 * h * h);
        let vi = v(grid[i]);
        let r = (-d2 + (vi - e) * values[i]).norm();
        let s = 1f64.max(vi.abs()).max(e.abs());
        let rel = r / (values[i].norm() * s).max(floor);
        worst = worst.max(if rel.is_nan() { f64::INFINITY } else { rel });
    }
    Ok(worst)
}

pub fn residual(v: impl Fn(f64) -> f64, e: f64, profile: &SolutionProfile) -> Result<f64> {
    residual_on(v, e, &profile.grid, &profile.values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::uniform_grid;
    use std::f64::consts::PI;

    #[test]
    fn free_particle() {
        let grid = uniform_grid(0.0, PI, 1001);
        let h = grid[1];
        let s = numerov(|_| 0.0, 1.0, &grid, 0.0, h.sin()).unwrap();
        let err = grid.iter().zip(&s.values).map(|(r, y)| (y - r.sin()).abs()).fold(0.0, f64::max);
        assert!(err < 1e-10, "{err}");
        assert!(s.renormalizations.is_empty());
    }

    fn gaussian_error(n: usize) -> f64 {
        let grid = uniform_grid(0.0, 3.0, n);
        let h = grid[1];
        let s = numerov(|r| r * r, 1.0, &grid, 1.0, (-h * h / 2.0).exp()).unwrap();
        grid.iter().zip(&s.values).map(|(r, y)| (y - (-r * r / 2.0).exp()).abs()).fold(0.0, f64::max)
    }

    #[test]
    fn oscillator_ground_state() {
        assert!(gaussian_error(481) < 1e-8);
    }

    fn sine_error(n: usize) -> f64 {
        let grid = uniform_grid(0.0, PI, n);
        let s = numerov(|_| 0.0, 1.0, &grid, 0.0, grid[1].sin()).unwrap();
        grid.iter().zip(&s.values).map(|(r, y)| (y - r.sin()).abs()).fold(0.0, f64::max)
    }

    #[test]
    fn fourth_order_convergence() {
        for n in [51, 101, 201] {
            let (e1, e2) = (sine_error(n), sine_error(2 * n - 1));
            assert!(e1 / e2 >= 16.0, "{n}: {e1} / {e2}");
        }
    }

    #[test]
    fn overflow_is_rescaled_and_logged() {
        let grid = uniform_grid(0.0, 400.0, 8001);
        let s = numerov(|_| 4.0, 0.0, &grid, 1.0, (2.0 * grid[1]).exp()).unwrap();
        assert!(!s.renormalizations.is_empty());
        assert!(s.values.iter().all(|v| v.is_finite() && v.abs() <= OVERFLOW));
        let k = s.values.len() - 1;
        let ratio = s.values[k] / s.values[k - 100];
        let err = ratio.ln() - 2.0 * (grid[k] - grid[k - 100]);
        assert!(err.abs() < 1e-5, "{err}");
    }

    #[test]
    fn residual_detects_corruption() {
        let grid = uniform_grid(0.0, PI, 201);
        let mut values: Vec<Complex64> = grid.iter().map(|r| Complex64::new(r.sin(), 0.0)).collect();
        let clean = residual_on(|_| 0.0, 1.0, &grid, &values).unwrap();
        assert!(clean <= 1e-9, "{clean}");
        values[100] += 1e-3;
        assert!(residual_on(|_| 0.0, 1.0, &grid, &values).unwrap() > 1e-2);
        assert!(residual_on(|_| 0.0, 1.0, &grid[..5], &values[..5]).is_err());
    }
}

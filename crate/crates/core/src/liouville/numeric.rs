use std::io::Write;

use quadrature::double_exponential::integrate;

use super::cov::ChangeOfVariables;
use crate::error::{Error, Result};
use crate::exactalg::{RationalFunction, Scalar};

const INTERVALS: usize = 256;
const QUAD_TOL: f64 = 1e-14;

/// Integration constant: `r(z0) = r0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovAnchor {
    pub z0: f64,
    pub r0: f64,
}

/// Tabulated solution of `(dr/dz)² = Ĩ(z)` on a window in `z`.
#[derive(Debug, Clone)]
pub struct CovTable {
    metric: RationalFunction,
    m1: RationalFunction,
    m2: RationalFunction,
    /// `Ĩ(lo + t)` and `Ĩ(hi − t)`, free of cancellation near the window ends.
    near_ends: [RationalFunction; 2],
    direction: f64,
    zs: Vec<f64>,
    rs: Vec<f64>,
}

/// Numerically integrates `r(z) = r0 ± ∫_{z0}^{z} √Ĩ` over `window` (open in `z`).
///
/// `direction` picks the sign of `dr/dz`.
pub fn integrate_cov(
    metric: &RationalFunction,
    anchor: CovAnchor,
    direction: f64,
    window: (f64, f64),
) -> Result<ChangeOfVariables> {
    let (lo, hi) = window;
    if !(lo < hi) || !(anchor.z0 > lo && anchor.z0 < hi) {
        return Err(Error::InvalidParameter(format!("anchor z0 = {} not inside ({lo}, {hi})", anchor.z0)));
    }
    let m = |z: f64| metric.eval(z.into()).map(|v| v.re).unwrap_or(f64::NAN);
    // Scan outward from the anchor for a sign change or pole of the metric.
    let good = |v: f64| v > 0.0 && v.is_finite();
    if !good(m(anchor.z0)) {
        return Err(Error::NonPositiveMetric { at: anchor.z0, value: m(anchor.z0) });
    }
    let n_scan = 2000;
    for end in [lo, hi] {
        let mut last = anchor.z0;
        for k in 1..n_scan {
            let z = anchor.z0 + (end - anchor.z0) * k as f64 / n_scan as f64;
            if !good(m(z)) {
                let at = refine_crossing(&m, last, z);
                return Err(Error::NonPositiveMetric { at, value: m(at) });
            }
            last = z;
        }
    }
    let mut zs: Vec<f64> = (0..=INTERVALS).map(|k| lo + (hi - lo) * k as f64 / INTERVALS as f64).collect();
    let split = zs.partition_point(|&z| z < anchor.z0);
    if zs[split] != anchor.z0 {
        zs.insert(split, anchor.z0);
    }
    let shifted = |end: f64, sign: i64| {
        let t = &RationalFunction::constant(Scalar::from_f64(end)) + &RationalFunction::z().scale(&Scalar::int(sign));
        metric.compose(&t)
    };
    let near_ends = [shifted(lo, 1)?, shifted(hi, -1)?];
    let m1 = metric.derivative();
    let m2 = m1.derivative();
    let mut table = CovTable { metric: metric.clone(), m1, m2, near_ends, direction, zs, rs: Vec::new() };
    let mut rs = vec![0.0; table.zs.len()];
    rs[split] = anchor.r0;
    for k in split + 1..rs.len() {
        rs[k] = rs[k - 1] + direction * table.integral(table.zs[k - 1], table.zs[k]);
    }
    for k in (0..split).rev() {
        rs[k] = rs[k + 1] - direction * table.integral(table.zs[k], table.zs[k + 1]);
    }
    table.rs = rs;
    Ok(ChangeOfVariables::numeric(table))
}

fn refine_crossing(m: &impl Fn(f64) -> f64, mut good: f64, mut bad: f64) -> f64 {
    for _ in 0..60 {
        let mid = 0.5 * (good + bad);
        let v = m(mid);
        if v > 0.0 && v.is_finite() {
            good = mid;
        } else {
            bad = mid;
        }
    }
    bad
}

impl CovTable {
    pub fn metric(&self) -> &RationalFunction {
        &self.metric
    }

    pub fn direction(&self) -> f64 {
        self.direction
    }

    pub fn nodes(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.zs.iter().copied().zip(self.rs.iter().copied())
    }

    pub fn z_range(&self) -> (f64, f64) {
        (self.zs[0], *self.zs.last().unwrap())
    }

    pub fn r_range(&self) -> (f64, f64) {
        let (a, b) = (self.rs[0], *self.rs.last().unwrap());
        (a.min(b), a.max(b))
    }

    fn m(&self, z: f64) -> f64 {
        self.metric.eval(z.into()).map(|v| v.re).unwrap_or(f64::NAN)
    }

    /// `√Ĩ(end + sign·t)` for small `t ≥ 0`.
    fn sqrt_metric_from(&self, end: f64, sign: f64, t: f64) -> f64 {
        let (lo, hi) = self.z_range();
        let v = if end == lo && sign > 0.0 {
            self.near_ends[0].eval(t.into()).map(|v| v.re).unwrap_or(f64::NAN)
        } else if end == hi && sign < 0.0 {
            self.near_ends[1].eval(t.into()).map(|v| v.re).unwrap_or(f64::NAN)
        } else {
            self.m(end + sign * t)
        };
        v.sqrt()
    }

    /// `∫_a^b √Ĩ` by double-exponential quadrature on each half after `z = a + h s²`
    /// (resp. `b − h s²`), which regularises inverse-square-root behaviour at either end.
    fn integral(&self, a: f64, b: f64) -> f64 {
        if a == b {
            return 0.0;
        }
        let h = 0.5 * (b - a);
        let sign = h.signum();
        let half = |end: f64, sign: f64| {
            let g = |s: f64| {
                let v = self.sqrt_metric_from(end, sign, h.abs() * s * s) * 2.0 * h.abs() * s;
                if v.is_finite() {
                    v
                } else {
                    0.0
                }
            };
            integrate(g, 0.0, 1.0, QUAD_TOL).integral
        };
        sign * (half(a, sign) + half(b, -sign))
    }

    fn r_from_node(&self, k: usize, z: f64) -> f64 {
        self.rs[k] + self.direction * self.integral(self.zs[k], z)
    }

    pub fn r_of_z(&self, z: f64) -> Result<f64> {
        let (lo, hi) = self.z_range();
        if !(z > lo && z < hi) {
            return Err(Error::OutsideDomain { at: z, lo, hi });
        }
        let k = self.zs.partition_point(|&t| t <= z).saturating_sub(1);
        let k = if k + 1 < self.zs.len() && (self.zs[k + 1] - z) < (z - self.zs[k]) { k + 1 } else { k };
        Ok(self.r_from_node(k, z))
    }

    /// Inverse by bracketing in the table followed by safeguarded Newton.
    pub fn z_of_r(&self, r: f64) -> Result<f64> {
        let (rlo, rhi) = self.r_range();
        if !(r > rlo && r < rhi) {
            return Err(Error::OutsideDomain { at: r, lo: rlo, hi: rhi });
        }
        let up = self.direction > 0.0;
        let k = if up { self.rs.partition_point(|&t| t <= r) } else { self.rs.partition_point(|&t| t >= r) }
            .clamp(1, self.rs.len() - 1)
            - 1;
        let (mut a, mut b) = (self.zs[k], self.zs[k + 1]);
        let t = (r - self.rs[k]) / (self.rs[k + 1] - self.rs[k]);
        let mut z = a + t.clamp(0.0, 1.0) * (b - a);
        if !(z > a && z < b) {
            z = 0.5 * (a + b);
        }
        for _ in 0..100 {
            let f = self.r_from_node(k, z) - r;
            if f == 0.0 {
                break;
            }
            // f is increasing in z iff direction > 0
            if (f > 0.0) == up {
                b = z;
            } else {
                a = z;
            }
            let slope = self.direction * self.m(z).sqrt();
            let mut next = z - f / slope;
            if !next.is_finite() || next <= a || next >= b {
                next = 0.5 * (a + b);
            }
            let done = (next - z).abs() <= 1e-15 * (1.0 + z.abs()) || (b - a) <= 1e-15 * (1.0 + z.abs());
            z = next;
            if done {
                break;
            }
        }
        Ok(z)
    }

    /// Jet of `z(r)` from `z' = ±Ĩ^{−1/2}` and its exact derivatives.
    pub fn jet(&self, r: f64) -> Result<[f64; 4]> {
        let z = self.z_of_r(r)?;
        let c = z.into();
        let (i0, i1, i2) = (self.metric.eval(c)?.re, self.m1.eval(c)?.re, self.m2.eval(c)?.re);
        let d = self.direction;
        let g = d * i0.powf(-0.5);
        let g1 = -0.5 * d * i0.powf(-1.5) * i1;
        let g2 = d * (0.75 * i0.powf(-2.5) * i1 * i1 - 0.5 * i0.powf(-1.5) * i2);
        Ok([z, g, g1 * g, (g2 * g + g1 * g1) * g])
    }

    /// Audit dump with columns `z,r,dzdr`.
    pub fn write_csv(&self, w: impl Write) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["z", "r", "dzdr"])?;
        for (z, r) in self.nodes() {
            let dzdr = self.direction / self.m(z).sqrt();
            out.write_record([z, r, dzdr].map(|x| format!("{x:.16e}")))?;
        }
        out.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    fn rf(s: &str) -> RationalFunction {
        s.parse().unwrap()
    }

    #[test]
    fn constant_metric_is_affine() {
        let cov = integrate_cov(&rf("1/4"), CovAnchor { z0: 0.0, r0: 0.0 }, 1.0, (-1.0, 10.0)).unwrap();
        for z in [-0.5, 0.3, 2.0, 9.9] {
            assert!((cov.inverse(z).unwrap() - z / 2.0).abs() < 1e-13);
        }
        let j = cov.jet(1.0).unwrap();
        assert!((j[0] - 2.0).abs() < 1e-12 && (j[1] - 2.0).abs() < 1e-12 && j[2].abs() < 1e-12);
    }

    #[test]
    fn arcsine_of_root() {
        let cov = integrate_cov(&rf("1/(4*z*(1-z))"), CovAnchor { z0: 0.5, r0: FRAC_PI_4 }, 1.0, (0.0, 1.0)).unwrap();
        for z in [1e-6, 0.01, 0.3, 0.5, 0.77, 0.999] {
            let r = cov.inverse(z).unwrap();
            assert!((r - z.sqrt().asin()).abs() < 1e-10, "z = {z}: {:e}", r - z.sqrt().asin());
        }
        for k in 1..100 {
            let r = 1.5 * k as f64 / 100.0 + 0.02;
            let z = cov.z(r).unwrap();
            assert!((z - r.sin().powi(2)).abs() < 1e-10);
            assert!((cov.inverse(z).unwrap() - r).abs() < 1e-9);
        }
    }

    #[test]
    fn logarithmic_metric_decreasing() {
        // 1/(4z²) with r decreasing in z: r = −½ ln z
        let cov = integrate_cov(&rf("1/(4*z^2)"), CovAnchor { z0: 1.0, r0: 0.0 }, -1.0, (0.01, 20.0)).unwrap();
        for z in [0.02, 0.5, 3.0, 19.0] {
            assert!((cov.inverse(z).unwrap() + 0.5 * z.ln()).abs() < 1e-11);
        }
        let r = 0.4;
        let j = cov.jet(r).unwrap();
        let z = (-2.0 * r).exp();
        assert!((j[0] - z).abs() < 1e-12 && (j[1] + 2.0 * z).abs() < 1e-11 && (j[3] + 8.0 * z).abs() < 1e-10);
    }

    #[test]
    fn non_positive_metric_reports_crossing() {
        match integrate_cov(&rf("z - 1/2"), CovAnchor { z0: 0.8, r0: 0.0 }, 1.0, (0.0, 1.0)) {
            Err(Error::NonPositiveMetric { at, .. }) => assert!((at - 0.5).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn csv_dump() {
        let cov = integrate_cov(&rf("1/4"), CovAnchor { z0: 0.5, r0: 0.0 }, 1.0, (0.0, 1.0)).unwrap();
        let mut buf = Vec::new();
        cov.table().unwrap().write_csv(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.starts_with("z,r,dzdr\n"));
        assert_eq!(s.lines().count(), INTERVALS + 2);
    }
}

use num_complex::Complex64;

use crate::equations::Jet;
use crate::error::{Error, Result};

type C = Complex64;

pub const MAX_TERMS: usize = 10_000;
pub const MIN_TOL: f64 = 1e-15;
pub const DIRECT_RADIUS: f64 = 0.75;
pub const CONFLUENT_RADIUS: f64 = 50.0;

/// Compensated (Kahan) complex accumulator.
#[derive(Debug, Clone, Copy, Default)]
struct Kahan {
    sum: C,
    comp: C,
}

impl Kahan {
    fn add(&mut self, x: C) {
        let y = x - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }
}

fn nonpositive_integer(x: C) -> Option<usize> {
    (x.im == 0.0 && x.re <= 0.0 && x.re.fract() == 0.0 && x.re > -1e15).then(|| (-x.re) as usize)
}

fn check(c: C, tol: f64) -> Result<()> {
    if nonpositive_integer(c).is_some() {
        return Err(Error::CPole { c });
    }
    if !(tol >= MIN_TOL) {
        return Err(Error::InvalidParameter(format!("tolerance {tol:e} below {MIN_TOL:e}")));
    }
    Ok(())
}

/// `Σ t_k` with `t_0 = 1`, `t_{k+1} = t_k·ratio(k)`; `bound(k)` bounds `|t_{j+1}/t_j|`
/// for every `j ≥ k` (when it can), giving the geometric tail estimate.
fn sum_series(ratio: impl Fn(usize) -> C, bound: impl Fn(usize) -> Option<f64>, tol: f64) -> Result<C> {
    let mut s = Kahan::default();
    let mut t = C::new(1.0, 0.0);
    for k in 0..MAX_TERMS {
        s.add(t);
        let next = t * ratio(k);
        if next == C::new(0.0, 0.0) {
            return Ok(s.sum);
        }
        if let Some(q) = bound(k + 1) {
            if q < 1.0 && next.norm() / (1.0 - q) <= tol * s.sum.norm().max(f64::MIN_POSITIVE) {
                s.add(next);
                return Ok(s.sum);
            }
        }
        if !next.is_finite() {
            return Err(Error::NoConvergence { terms: k + 1 });
        }
        t = next;
    }
    Err(Error::NoConvergence { terms: MAX_TERMS })
}

fn series_2f1(a: C, b: C, c: C, z: C, tol: f64) -> Result<C> {
    let ac = c.norm();
    sum_series(
        |k| {
            let k = k as f64;
            (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z
        },
        |k| {
            let k = k as f64;
            (k > ac).then(|| z.norm() * (1.0 + (a - 1.0).norm() / (k + 1.0)) * (1.0 + (b - c).norm() / (k - ac)))
        },
        tol,
    )
}

/// Gauss hypergeometric function `₂F₁(a, b; c; z)`.
///
/// Direct series for `|z| ≤ 0.75`, otherwise the Pfaff form
/// `(1−z)^{−a} ₂F₁(a, c−b; c; z/(z−1))` when `|z/(z−1)| ≤ 0.75`. Terminating
/// series (`a` or `b` a non-positive integer) are summed for any `z`.
pub fn hyp2f1(a: C, b: C, c: C, z: C, tol: f64) -> Result<C> {
    check(c, tol)?;
    if nonpositive_integer(a).is_some() || nonpositive_integer(b).is_some() || z.norm() <= DIRECT_RADIUS {
        return series_2f1(a, b, c, z, tol);
    }
    let w = z / (z - 1.0);
    if w.norm() <= DIRECT_RADIUS {
        return Ok((1.0 - z).powc(-a) * series_2f1(a, c - b, c, w, tol)?);
    }
    Err(Error::SeriesDomain { z, msg: "needs |z| <= 0.75 or |z/(z-1)| <= 0.75".into() })
}

fn series_1f1(a: C, c: C, z: C, tol: f64) -> Result<C> {
    let ac = c.norm();
    sum_series(
        |k| {
            let k = k as f64;
            (a + k) / ((c + k) * (k + 1.0)) * z
        },
        |k| {
            let k = k as f64;
            (k > ac).then(|| z.norm() * (1.0 + (a - c).norm() / (k - ac)) / (k + 1.0))
        },
        tol,
    )
}

fn kummer(a: C, c: C, z: C, tol: f64) -> Result<C> {
    if z.re < 0.0 && nonpositive_integer(a).is_none() {
        Ok(z.exp() * series_1f1(c - a, c, -z, tol)?)
    } else {
        series_1f1(a, c, z, tol)
    }
}

/// Kummer's function `₁F₁(a; c; z)` for `|z| ≤ 50`; Kummer's transformation is
/// used when `Re z < 0` to avoid cancellation.
pub fn hyp1f1(a: C, c: C, z: C, tol: f64) -> Result<C> {
    check(c, tol)?;
    if z.norm() > CONFLUENT_RADIUS && nonpositive_integer(a).is_none() {
        return Err(Error::SeriesDomain { z, msg: "needs |z| <= 50".into() });
    }
    kummer(a, c, z, tol)
}

/// `₀F₁(; c; z)` for `|z| ≤ 50`.
pub fn hyp0f1(c: C, z: C, tol: f64) -> Result<C> {
    check(c, tol)?;
    if z.norm() > CONFLUENT_RADIUS {
        return Err(Error::SeriesDomain { z, msg: "needs |z| <= 50".into() });
    }
    let ac = c.norm();
    sum_series(
        |k| {
            let k = k as f64;
            z / ((c + k) * (k + 1.0))
        },
        |k| {
            let k = k as f64;
            (k > ac).then(|| z.norm() / ((k - ac) * (k + 1.0)))
        },
        tol,
    )
}

pub fn hyp2f1_jet(a: C, b: C, c: C, z: C, tol: f64) -> Result<Jet> {
    let f0 = hyp2f1(a, b, c, z, tol)?;
    let f1 = hyp2f1(a + 1.0, b + 1.0, c + 1.0, z, tol)?;
    let f2 = hyp2f1(a + 2.0, b + 2.0, c + 2.0, z, tol)?;
    let k1 = a * b / c;
    Ok(Jet::new(f0, k1 * f1, k1 * (a + 1.0) * (b + 1.0) / (c + 1.0) * f2))
}

pub fn hyp1f1_jet(a: C, c: C, z: C, tol: f64) -> Result<Jet> {
    let f0 = hyp1f1(a, c, z, tol)?;
    let f1 = hyp1f1(a + 1.0, c + 1.0, z, tol)?;
    let f2 = hyp1f1(a + 2.0, c + 2.0, z, tol)?;
    Ok(Jet::new(f0, a / c * f1, a * (a + 1.0) / (c * (c + 1.0)) * f2))
}

pub fn hyp0f1_jet(c: C, z: C, tol: f64) -> Result<Jet> {
    let f0 = hyp0f1(c, z, tol)?;
    let f1 = hyp0f1(c + 1.0, z, tol)?;
    let f2 = hyp0f1(c + 2.0, z, tol)?;
    Ok(Jet::new(f0, f1 / c, f2 / (c * (c + 1.0))))
}

pub const HERMITE_RANGE: f64 = 20.0;

/// Even and odd solutions `₁F₁(a/2; ½; y²)` and `y·₁F₁(a/2+½; 3/2; y²)` of
/// `f'' − 2y f' − 2a f = 0`, as jets in `y`.
pub fn hermite_pair(a: C, y: C, tol: f64) -> Result<(Jet, Jet)> {
    if !(tol >= MIN_TOL) {
        return Err(Error::InvalidParameter(format!("tolerance {tol:e} below {MIN_TOL:e}")));
    }
    if y.norm() > HERMITE_RANGE {
        return Err(Error::SeriesDomain { z: y, msg: "Hermite solutions need |y| <= 20".into() });
    }
    let w = y * y;
    // jets in w, then composed with w = y²
    let f = |a: C, c: C| -> Result<Jet> {
        let v = |a: C, c: C| kummer(a, c, w, tol);
        Ok(Jet::new(v(a, c)?, a / c * v(a + 1.0, c + 1.0)?, a * (a + 1.0) / (c * (c + 1.0)) * v(a + 2.0, c + 2.0)?))
    };
    let sq = Jet::new(w, 2.0 * y, C::new(2.0, 0.0));
    let even = f(a / 2.0, C::new(0.5, 0.0))?.compose(sq);
    let odd = Jet::variable(y) * f(a / 2.0 + 0.5, C::new(1.5, 0.0))?.compose(sq);
    Ok((even, odd))
}

/// Solution of `f'' − 2y f' − 2a f = 0` selected by parity: for `a = −n` the
/// degree-`n` polynomial (up to scale), otherwise the even solution.
pub fn hermite_solution(a: C, y: C, tol: f64) -> Result<C> {
    Ok(hermite_jet(a, y, tol)?.v)
}

pub fn hermite_jet(a: C, y: C, tol: f64) -> Result<Jet> {
    let (even, odd) = hermite_pair(a, y, tol)?;
    Ok(match nonpositive_integer(a) {
        Some(n) if n % 2 == 1 => odd,
        _ => even,
    })
}

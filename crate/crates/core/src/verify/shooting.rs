use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};

pub type Potential = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EndpointType {
    /// Dirichlet condition at a finite point.
    Regular,
    /// `V ~ c₂/d²` at distance `d`; the `d^s` branch is selected.
    Singular,
    /// Unbounded; `at` is the initial truncation.
    Infinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Endpoint {
    pub at: f64,
    pub kind: EndpointType,
}

impl Endpoint {
    pub fn regular(at: f64) -> Self {
        Endpoint { at, kind: EndpointType::Regular }
    }
    pub fn singular(at: f64) -> Self {
        Endpoint { at, kind: EndpointType::Singular }
    }
    pub fn infinite(at: f64) -> Self {
        Endpoint { at, kind: EndpointType::Infinite }
    }
}

/// Eigenvalue search for `−φ'' + Vφ = Eφ`.
#[derive(Clone)]
pub struct ShootingProblem {
    pub potential: Potential,
    pub lo: Endpoint,
    pub hi: Endpoint,
    /// Energies searched; the lower end must lie below the ground state.
    pub bracket: (f64, f64),
    /// Widen the bracket upward until enough levels are enclosed.
    pub expand_bracket: bool,
    /// Bisection width relative to `max(1, |E|)`.
    pub tol: f64,
    /// Box doubling stops once levels move less than this (relative to `max(1, |E|)`).
    pub box_tol: f64,
    /// Offset from singular endpoints, relative to `min(1, hi − lo)`.
    pub singular_offset: f64,
}

impl std::fmt::Debug for ShootingProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ShootingProblem")
            .field("lo", &self.lo)
            .field("hi", &self.hi)
            .field("bracket", &self.bracket)
            .field("expand_bracket", &self.expand_bracket)
            .finish_non_exhaustive()
    }
}

impl ShootingProblem {
    pub fn new(
        potential: impl Fn(f64) -> f64 + Send + Sync + 'static,
        lo: Endpoint,
        hi: Endpoint,
        bracket: (f64, f64),
    ) -> Self {
        ShootingProblem {
            potential: Arc::new(potential),
            lo,
            hi,
            bracket,
            expand_bracket: false,
            tol: 1e-10,
            box_tol: 1e-9,
            singular_offset: 1e-4,
        }
    }

    pub fn expanding(mut self) -> Self {
        self.expand_bracket = true;
        self
    }

    /// The same problem in `r ↦ −r`, integrated in the opposite direction.
    pub fn reversed(&self) -> Self {
        let v = self.potential.clone();
        ShootingProblem {
            potential: Arc::new(move |r| v(-r)),
            lo: Endpoint { at: -self.hi.at, kind: self.hi.kind },
            hi: Endpoint { at: -self.lo.at, kind: self.lo.kind },
            ..self.clone()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.lo.at < self.hi.at) {
            return Err(Error::Shooting(format!("empty domain ({}, {})", self.lo.at, self.hi.at)));
        }
        if !(self.bracket.0 < self.bracket.1) {
            return Err(Error::Shooting(format!("empty bracket {:?}", self.bracket)));
        }
        if !(self.tol > 0.0 && self.box_tol > 0.0 && self.singular_offset > 0.0) {
            return Err(Error::Shooting("tolerances must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShotLevel {
    pub n: usize,
    pub energy: f64,
    /// Sign changes of the computed eigenfunction.
    pub nodes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShootingSpectrum {
    pub levels: Vec<ShotLevel>,
    /// Fewer than the requested levels lie in the bracket.
    pub exhausted: bool,
    /// Final truncated domain.
    pub domain: (f64, f64),
    /// Box doubling met `box_tol` (always true without infinite ends).
    pub box_converged: bool,
    pub renormalizations: usize,
}

impl ShootingSpectrum {
    pub fn energies(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.energy).collect()
    }
}

/// `r(x)`; every non-identity map has `−½{r, x} = ¼`.
#[derive(Debug, Clone, Copy)]
enum Map {
    Identity,
    LeftLog { lo: f64 },
    RightLog { hi: f64 },
    Logit { lo: f64, hi: f64 },
}

impl Map {
    fn of(lo: Endpoint, hi: Endpoint) -> Self {
        match (lo.kind == EndpointType::Singular, hi.kind == EndpointType::Singular) {
            (false, false) => Map::Identity,
            (true, false) => Map::LeftLog { lo: lo.at },
            (false, true) => Map::RightLog { hi: hi.at },
            (true, true) => Map::Logit { lo: lo.at, hi: hi.at },
        }
    }

    /// `(r, r', distance to lo, distance to hi)`; distances only where they are exact.
    fn eval(self, x: f64) -> (f64, f64, f64, f64) {
        match self {
            Map::Identity => (x, 1.0, f64::NAN, f64::NAN),
            Map::LeftLog { lo } => {
                let d = x.exp();
                (lo + d, d, d, f64::NAN)
            }
            Map::RightLog { hi } => {
                let d = (-x).exp();
                (hi - d, d, f64::NAN, d)
            }
            Map::Logit { lo, hi } => {
                let l = hi - lo;
                let s = 1.0 / (1.0 + (-x).exp());
                let t = 1.0 / (1.0 + x.exp());
                let (dl, dh) = (l * s, l * t);
                let r = if dl < dh { lo + dl } else { hi - dh };
                (r, l * s * t, dl, dh)
            }
        }
    }

    fn x_of(self, r: f64) -> f64 {
        match self {
            Map::Identity => r,
            Map::LeftLog { lo } => (r - lo).ln(),
            Map::RightLog { hi } => -(hi - r).ln(),
            Map::Logit { lo, hi } => ((r - lo) / (hi - r)).ln(),
        }
    }

    fn q(self) -> f64 {
        match self {
            Map::Identity => 0.0,
            _ => 0.25,
        }
    }
}

/// Leading behaviour `d^s (1 + a₁ d)` at a singular end.
#[derive(Debug, Clone, Copy)]
struct Frobenius {
    s: f64,
    a1: f64,
}

impl Frobenius {
    fn estimate(v: &dyn Fn(f64) -> f64, at: f64, sign: f64, delta: f64) -> Result<Self> {
        let f = |d: f64| d * d * v(at + sign * d);
        let (f1, f2) = (f(delta), f(2.0 * delta));
        let c2 = 2.0 * f1 - f2;
        let c1 = (f2 - f1) / delta;
        if !(c2.is_finite() && c1.is_finite()) {
            return Err(Error::Shooting(format!("potential not finite near the singular end {at}")));
        }
        if c2 < -0.25 {
            return Err(Error::Shooting(format!("r^-2 coefficient {c2} < -1/4 at {at}: no power-law branch")));
        }
        let s = 0.5 + (c2 + 0.25).sqrt();
        Ok(Frobenius { s, a1: c1 / (2.0 * s) })
    }

    fn y(self, d: f64) -> f64 {
        d.powf(self.s) * (1.0 + self.a1 * d)
    }
}

/// A fixed uniform `x`-grid over the truncated domain.
struct Disc {
    h: f64,
    /// `r'²` and `r'² V + ¼·[mapped]`, so that `G(E) = vq − E·rp2`.
    rp2: Vec<f64>,
    vq: Vec<f64>,
    left: Option<(f64, f64)>,
    right: Option<f64>,
    lo_kind: EndpointType,
    hi_kind: EndpointType,
}

#[derive(Debug, Clone, Copy)]
struct Shot {
    count: usize,
    mismatch: f64,
    nodes: usize,
    renorms: usize,
}

impl Disc {
    fn new(p: &ShootingProblem, domain: (f64, f64), cells: usize) -> Result<Self> {
        let map = Map::of(p.lo, p.hi);
        let v = &*p.potential;
        let delta = p.singular_offset * (p.hi.at - p.lo.at).min(1.0);
        let x0 = match p.lo.kind {
            EndpointType::Singular => map.x_of(p.lo.at + delta),
            _ => map.x_of(domain.0),
        };
        let x1 = match p.hi.kind {
            EndpointType::Singular => map.x_of(p.hi.at - delta),
            _ => map.x_of(domain.1),
        };
        let h = (x1 - x0) / cells as f64;
        let mut rp2 = Vec::with_capacity(cells + 1);
        let mut vq = Vec::with_capacity(cells + 1);
        let mut dists = Vec::with_capacity(cells + 1);
        for k in 0..=cells {
            let x = if k == cells { x1 } else { x0 + h * k as f64 };
            let (r, dr, dl, dh) = map.eval(x);
            let vr = v(r);
            if !vr.is_finite() {
                return Err(Error::Shooting(format!("potential not finite at r = {r}")));
            }
            rp2.push(dr * dr);
            vq.push(dr * dr * vr + map.q());
            dists.push((dr, dl, dh));
        }
        let start = |fr: Frobenius, k: usize, lo_side: bool| {
            let (dr, dl, dh) = dists[k];
            fr.y(if lo_side { dl } else { dh }) / dr.sqrt()
        };
        let left = match p.lo.kind {
            EndpointType::Singular => {
                let fr = Frobenius::estimate(v, p.lo.at, 1.0, delta)?;
                let (u0, u1) = (start(fr, 0, true), start(fr, 1, true));
                Some((u0 / u1, 1.0))
            }
            _ => None,
        };
        let right = match p.hi.kind {
            EndpointType::Singular => {
                let fr = Frobenius::estimate(v, p.hi.at, -1.0, delta)?;
                Some(start(fr, cells, false) / start(fr, cells - 1, false))
            }
            _ => None,
        };
        Ok(Disc { h, rp2, vq, left, right, lo_kind: p.lo.kind, hi_kind: p.hi.kind })
    }

    fn len(&self) -> usize {
        self.rp2.len()
    }

    fn g(&self, k: usize, e: f64) -> f64 {
        self.vq[k] - e * self.rp2[k]
    }

    fn wkb_ratio(&self, far: usize, near: usize, e: f64) -> f64 {
        let (gf, gn) = (self.g(far, e), self.g(near, e));
        if gf > 0.0 && gn > 0.0 {
            (gn / gf).powf(0.25) * (-self.h * 0.5 * (gf.sqrt() + gn.sqrt())).exp()
        } else {
            0.0
        }
    }

    /// `(u₀, u₁)` at the left end.
    fn left_start(&self, e: f64) -> (f64, f64) {
        match (self.lo_kind, self.left) {
            (EndpointType::Singular, Some(s)) => s,
            (EndpointType::Infinite, _) => (self.wkb_ratio(0, 1, e), 1.0),
            _ => (0.0, 1.0),
        }
    }

    /// `u_N / u_{N−1}` imposed at the right end.
    fn right_ratio(&self, e: f64) -> f64 {
        let n = self.len() - 1;
        match (self.hi_kind, self.right) {
            (EndpointType::Singular, Some(r)) => r,
            (EndpointType::Infinite, _) => self.wkb_ratio(n, n - 1, e),
            _ => 0.0,
        }
    }

    /// Turning point nearest the middle (ties toward the middle), else the middle.
    fn matching_index(&self, e: f64) -> usize {
        let n = self.len();
        let mid = n / 2;
        let mut best: Option<usize> = None;
        for k in 1..n - 2 {
            if (self.g(k, e) < 0.0) != (self.g(k + 1, e) < 0.0) {
                let better = match best {
                    None => true,
                    Some(b) => k.abs_diff(mid) < b.abs_diff(mid),
                };
                if better {
                    best = Some(k);
                }
            }
        }
        best.unwrap_or(mid).clamp(1, n - 3)
    }

    /// Outward and inward Numerov sweeps at energy `e`.
    fn shoot(&self, e: f64) -> Shot {
        let n = self.len() - 1;
        let k = self.h * self.h / 12.0;
        let m = self.matching_index(e);
        let step = |g_prev: f64, g: f64, g_next: f64, u_prev: f64, u: f64| {
            (2.0 * (1.0 + 5.0 * k * g) * u - (1.0 - k * g_prev) * u_prev) / (1.0 - k * g_next)
        };
        let mut renorms = 0;
        let sign_change = |a: f64, b: f64| (a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0);

        // outward: sign changes over u₀..u_{N−1} plus the boundary-condition crossing
        let (mut u_prev, mut u) = self.left_start(e);
        let mut count = usize::from(sign_change(u_prev, u));
        let mut last = if u != 0.0 { u } else { u_prev };
        let mut out_m = (f64::NAN, f64::NAN);
        let mut nodes_out = count;
        for j in 1..n {
            let next = step(self.g(j - 1, e), self.g(j, e), self.g(j + 1, e), u_prev, u);
            u_prev = u;
            u = next;
            if j == m {
                out_m = (u_prev, u);
                nodes_out = count;
            }
            if j + 1 < n {
                if sign_change(last, u) {
                    count += 1;
                }
                if u != 0.0 {
                    last = u;
                }
            }
            if u.abs() > super::numerov::OVERFLOW {
                let f = 1.0 / u.abs();
                u *= f;
                u_prev *= f;
                last *= f;
                renorms += 1;
            }
        }
        // u_prev = u_{N−1}, u = u_N
        let rho = self.right_ratio(e);
        if sign_change(u - rho * u_prev, u_prev) {
            count += 1;
        }

        // inward from the right end
        let (mut v_next, mut v) = (rho, 1.0);
        let mut nodes_in = 0;
        let mut last_in = v;
        let mut in_m = (f64::NAN, f64::NAN);
        for j in (m..n - 1).rev() {
            let prev = step(self.g(j + 2, e), self.g(j + 1, e), self.g(j, e), v_next, v);
            v_next = v;
            v = prev;
            if sign_change(last_in, v) {
                nodes_in += 1;
            }
            if v != 0.0 {
                last_in = v;
            }
            if j == m {
                in_m = (v, v_next);
            }
            if v.abs() > super::numerov::OVERFLOW {
                let f = 1.0 / v.abs();
                v *= f;
                v_next *= f;
                last_in *= f;
                renorms += 1;
            }
        }

        // Wronskian of w = (1 − h²G/12)u at m, normalized
        let w = |g: f64, x: f64| (1.0 - k * g) * x;
        let (gm, gm1) = (self.g(m, e), self.g(m + 1, e));
        let (ao, bo) = (w(gm, out_m.0), w(gm1, out_m.1));
        let (ai, bi) = (w(gm, in_m.0), w(gm1, in_m.1));
        let scale = (ao.abs() + bo.abs()) * (ai.abs() + bi.abs());
        let mismatch = (bo * ai - ao * bi) / scale;
        Shot { count, mismatch, nodes: nodes_out + nodes_in, renorms }
    }
}

fn scaled(e: f64) -> f64 {
    e.abs().max(1.0)
}

struct Found {
    levels: Vec<ShotLevel>,
    exhausted: bool,
    renorms: usize,
}

/// Levels `0..n_max` of one discretisation within `(emin, emax)`.
fn levels_in(disc: &Disc, n_max: usize, emin: f64, emax: f64, tol: f64) -> Result<Found> {
    let mut renorms = 0;
    let mut shoot = |e: f64| {
        let s = disc.shoot(e);
        renorms += s.renorms;
        s
    };
    let c0 = shoot(emin).count;
    if c0 > 0 {
        return Err(Error::Shooting(format!("lower bracket {emin} lies above {c0} level(s)")));
    }
    let top = shoot(emax).count;
    let wanted = n_max.min(top);
    let mut levels = Vec::with_capacity(wanted);
    let mut a = emin;
    for n in 0..wanted {
        let mut b = emax;
        // isolate: count(a) = n, count(b) = n + 1
        let mut cb = top;
        while cb > n + 1 {
            let mid = 0.5 * (a + b);
            let c = shoot(mid).count;
            if c > n {
                b = mid;
                cb = c;
            } else {
                a = mid;
            }
        }
        // refine on the matching mismatch, falling back to node counts
        let (mut fa, mut fb) = (shoot(a).mismatch, shoot(b).mismatch);
        while b - a > tol * scaled(0.5 * (a + b)) {
            let mid = 0.5 * (a + b);
            let s = shoot(mid);
            let use_mismatch = fa.is_finite() && fb.is_finite() && fa * fb < 0.0 && s.mismatch.is_finite();
            let left = if use_mismatch { s.mismatch * fa > 0.0 } else { s.count <= n };
            if left {
                a = mid;
                fa = s.mismatch;
            } else {
                b = mid;
                fb = s.mismatch;
            }
        }
        let e = 0.5 * (a + b);
        levels.push(ShotLevel { n, energy: e, nodes: shoot(e).nodes });
        // count(b) = n + 1 starts the next level
        a = b;
    }
    Ok(Found { levels, exhausted: wanted < n_max, renorms })
}

fn cells_for(p: &ShootingProblem, domain: (f64, f64), emin: f64, emax: f64) -> Result<usize> {
    let probe = Disc::new(p, domain, 4000)?;
    let mut need: f64 = 0.0;
    let span = probe.h * 4000.0;
    for k in 0..probe.len() {
        for e in [emin, emax] {
            let g = probe.g(k, e);
            let h = if g < 0.0 { 0.05 / (-g).sqrt() } else { (1.2 / g.max(1e-300)).sqrt() };
            need = need.max(span / h);
        }
    }
    Ok((need.ceil() as usize).clamp(2000, 400_000))
}

/// One box: levels with Richardson extrapolation over `h` and `h/2`.
fn solve_box(p: &ShootingProblem, domain: (f64, f64), n_max: usize, emin: f64, emax: f64) -> Result<Found> {
    let cells = cells_for(p, domain, emin, emax)?;
    let (coarse, fine) = std::thread::scope(|s| {
        let c = s.spawn(|| Disc::new(p, domain, cells).and_then(|d| levels_in(&d, n_max, emin, emax, p.tol)));
        let f = Disc::new(p, domain, 2 * cells).and_then(|d| levels_in(&d, n_max, emin, emax, p.tol));
        (c.join().expect("shooting thread"), f)
    });
    let (coarse, fine) = (coarse?, fine?);
    let levels = fine
        .levels
        .iter()
        .zip(&coarse.levels)
        .map(|(f, c)| ShotLevel { n: f.n, energy: f.energy + (f.energy - c.energy) / 15.0, nodes: f.nodes })
        .collect::<Vec<_>>();
    let exhausted = fine.exhausted || levels.len() < fine.levels.len();
    Ok(Found { levels, exhausted, renorms: coarse.renorms + fine.renorms })
}

/// Move infinite ends outward until `V − E_top ≥ 25·max(1, |E_top|)·growth` or the
/// WKB decay `∫√(V − E_top)` past the last turning point reaches `40·growth`.
fn truncate(p: &ShootingProblem, domain: (f64, f64), e_top: f64, growth: f64) -> (f64, f64) {
    let v = &*p.potential;
    let scale = scaled(e_top);
    let extend = |from: f64, dir: f64, len: f64| {
        let dr = len / 400.0;
        let mut r = from;
        let mut decay = 0.0;
        for _ in 0..400_000 {
            let g = v(r) - e_top;
            if g >= 25.0 * scale * growth || decay >= 40.0 * growth {
                return r;
            }
            if g > 0.0 {
                decay += g.sqrt() * dr;
            } else {
                decay = 0.0;
            }
            r += dir * dr;
        }
        r
    };
    let len = domain.1 - domain.0;
    let lo = if p.lo.kind == EndpointType::Infinite { extend(domain.0, -1.0, len).min(domain.0) } else { domain.0 };
    let hi = if p.hi.kind == EndpointType::Infinite { extend(domain.1, 1.0, len).max(domain.1) } else { domain.1 };
    (lo, hi)
}

pub const MAX_BOX_PASSES: usize = 6;

/// Bound-state energies `E_0 … E_{n_max−1}` found in the bracket.
pub fn shoot_spectrum(p: &ShootingProblem, n_max: usize) -> Result<ShootingSpectrum> {
    p.validate()?;
    let (emin, mut emax) = p.bracket;
    let mut domain = (p.lo.at, p.hi.at);
    let infinite = p.lo.kind == EndpointType::Infinite || p.hi.kind == EndpointType::Infinite;
    if p.expand_bracket {
        let probe = Disc::new(p, domain, 4000)?;
        let mut tries = 0;
        while probe.shoot(emax).count < n_max && tries < 60 {
            emax = emin + 2.0 * (emax - emin);
            tries += 1;
        }
    }
    let mut renorms = 0;
    let mut prev: Option<Vec<ShotLevel>> = None;
    for pass in 0..MAX_BOX_PASSES {
        let found = solve_box(p, domain, n_max, emin, emax)?;
        renorms += found.renorms;
        if !infinite {
            return Ok(ShootingSpectrum {
                levels: found.levels,
                exhausted: found.exhausted,
                domain,
                box_converged: true,
                renormalizations: renorms,
            });
        }
        let e_top = found.levels.last().map_or(emax, |l| l.energy);
        let stable = prev.as_ref().is_some_and(|q| {
            q.len() == found.levels.len()
                && q.iter().zip(&found.levels).all(|(a, b)| (a.energy - b.energy).abs() <= p.box_tol * scaled(b.energy))
        });
        if stable || pass + 1 == MAX_BOX_PASSES {
            return Ok(ShootingSpectrum {
                levels: found.levels,
                exhausted: found.exhausted,
                domain,
                box_converged: stable,
                renormalizations: renorms,
            });
        }
        // the truncation criterion doubles on every pass
        domain = truncate(p, domain, e_top, (1u64 << pass) as f64);
        prev = Some(found.levels);
    }
    unreachable!("the final pass returns")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn harmonic_box() {
        let p = ShootingProblem::new(|r| r * r, Endpoint::regular(-8.0), Endpoint::regular(8.0), (-1.0, 20.0));
        let s = shoot_spectrum(&p, 6).unwrap();
        assert_eq!(s.levels.len(), 6);
        for l in &s.levels {
            assert!((l.energy - (2 * l.n + 1) as f64).abs() < 1e-7, "{l:?}");
            assert_eq!(l.nodes, l.n);
        }
    }

    #[test]
    fn infinite_well() {
        let p = ShootingProblem::new(|_| 0.0, Endpoint::regular(0.0), Endpoint::regular(PI), (-1.0, 40.0));
        let s = shoot_spectrum(&p, 6).unwrap();
        for l in &s.levels {
            assert!((l.energy - ((l.n + 1) * (l.n + 1)) as f64).abs() < 1e-8, "{l:?}");
        }
    }

    #[test]
    fn exhausted_bracket_is_flagged() {
        let p = ShootingProblem::new(|_| 0.0, Endpoint::regular(0.0), Endpoint::regular(PI), (-1.0, 10.0));
        let s = shoot_spectrum(&p, 6).unwrap();
        assert_eq!(s.levels.len(), 3);
        assert!(s.exhausted);
    }

    #[test]
    fn singular_and_infinite_ends() {
        // radial oscillator with l = 1: V = r² + 2/r², E_n = 4n + 5
        let p = ShootingProblem::new(
            |r| r * r + 2.0 / (r * r),
            Endpoint::singular(0.0),
            Endpoint::infinite(6.0),
            (0.0, 30.0),
        );
        let s = shoot_spectrum(&p, 5).unwrap();
        assert!(s.box_converged);
        for l in &s.levels {
            assert!((l.energy - (4 * l.n + 5) as f64).abs() < 1e-7, "{l:?}");
            assert_eq!(l.nodes, l.n);
        }
        let r = shoot_spectrum(&p.reversed(), 5).unwrap();
        for (a, b) in s.levels.iter().zip(&r.levels) {
            assert!((a.energy - b.energy).abs() < 2e-9);
        }
    }
}

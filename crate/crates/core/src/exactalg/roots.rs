use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::Polynomial;
use super::ratfun::RationalFunction;
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// `f = poly + Σ coeff / (z - root)^order`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialFractions {
    pub poly: Polynomial,
    pub terms: Vec<PoleTerm>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoleTerm {
    pub root: Scalar,
    pub order: usize,
    pub coeff: Scalar,
}

/// Distinct roots of `p` with multiplicities, when all of them are Gaussian rationals.
///
/// Roots are located numerically on the square-free part, snapped to nearby
/// rationals and then confirmed by exact division; a root that cannot be
/// confirmed yields [`Error::Unsplit`].
pub fn gaussian_roots(p: &Polynomial) -> Result<Vec<(Scalar, usize)>> {
    let deg = match p.degree() {
        None => return Err(Error::Unsplit("zero polynomial".into())),
        Some(d) => d,
    };
    if deg == 0 {
        return Ok(Vec::new());
    }
    let sqfree = p.exact_div(&p.gcd(&p.derivative())).monic();
    let mut remaining = p.monic();
    let mut out = Vec::new();
    for guess in numeric_roots(&sqfree) {
        let root = snap(&sqfree, guess).ok_or_else(|| Error::Unsplit(format!("{p} (no exact root near {guess})")))?;
        if out.iter().any(|(r, _): &(Scalar, usize)| *r == root) {
            continue;
        }
        let lin = Polynomial::linear_root(&root);
        let mut mult = 0;
        loop {
            let (q, r) = remaining.div_rem(&lin);
            if !r.is_zero() {
                break;
            }
            remaining = q;
            mult += 1;
        }
        out.push((root, mult));
    }
    if remaining.degree() != Some(0) {
        return Err(Error::Unsplit(p.to_string()));
    }
    Ok(out)
}

/// Partial-fraction decomposition over the Gaussian rationals.
pub fn partial_fractions(f: &RationalFunction) -> Result<PartialFractions> {
    let den = f.denominator();
    let (poly, rem) = f.numerator().div_rem(den);
    let mut terms = Vec::new();
    if rem.is_zero() {
        return Ok(PartialFractions { poly, terms });
    }
    for (root, m) in gaussian_roots(den)? {
        // den = (z-root)^m · e, expand rem/e around root to order m.
        let e = den.exact_div(&Polynomial::linear_root(&root).pow(m as u32));
        let num = rem.taylor_shift(&root);
        let dd = e.taylor_shift(&root);
        let series = series_div(&num, &dd, m);
        for (k, c) in series.into_iter().enumerate() {
            if !c.is_zero() {
                terms.push(PoleTerm { root: root.clone(), order: m - k, coeff: c });
            }
        }
    }
    Ok(PartialFractions { poly, terms })
}

/// First `n` Taylor coefficients of `a/b` where `b(0) != 0`.
fn series_div(a: &Polynomial, b: &Polynomial, n: usize) -> Vec<Scalar> {
    let b0inv = b.coeff(0).inv().expect("unit constant term");
    let mut out: Vec<Scalar> = Vec::with_capacity(n);
    for k in 0..n {
        let mut s = a.coeff(k);
        for (j, o) in out.iter().enumerate() {
            s -= &(o * &b.coeff(k - j));
        }
        out.push(&s * &b0inv);
    }
    out
}

fn numeric_roots(p: &Polynomial) -> Vec<Complex64> {
    let n = p.degree().unwrap_or(0);
    let c: Vec<Complex64> = p.coeffs().iter().map(Scalar::to_complex).collect();
    if n == 1 {
        return vec![-c[0] / c[1]];
    }
    let lead = c[n];
    let eval = |z: Complex64| c.iter().rev().fold(Complex64::zero(), |acc, k| acc * z + k) / lead;
    let radius = 1.0 + c.iter().take(n).map(|k| (k / lead).norm()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * radius.min(10.0)).collect();
    for _ in 0..2000 {
        let mut delta: f64 = 0.0;
        for i in 0..n {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            let step = eval(z[i]) / den;
            z[i] -= step;
            delta = delta.max(step.norm() / (1.0 + z[i].norm()));
        }
        if delta < 1e-15 {
            break;
        }
    }
    z
}

fn snap(p: &Polynomial, z: Complex64) -> Option<Scalar> {
    for re in rational_candidates(z.re) {
        for im in rational_candidates(z.im) {
            let s = Scalar::new(re.clone(), im);
            if p.eval(&s).is_zero() {
                return Some(s);
            }
        }
    }
    None
}

/// Continued-fraction convergents of `x` plus its exact dyadic value.
fn rational_candidates(x: f64) -> Vec<BigRational> {
    if x.abs() < 1e-12 {
        return vec![BigRational::zero()];
    }
    let mut out = Vec::new();
    let (mut p0, mut q0) = (BigInt::one(), BigInt::zero());
    let (mut p1, mut q1) = (BigInt::from(x.floor() as i64), BigInt::one());
    let mut frac = x - x.floor();
    out.push(BigRational::new(p1.clone(), q1.clone()));
    for _ in 0..40 {
        if frac.abs() < 1e-13 {
            break;
        }
        let inv = 1.0 / frac;
        let a = BigInt::from(inv.floor() as i64);
        frac = inv - inv.floor();
        let p2 = &a * &p1 + &p0;
        let q2 = &a * &q1 + &q0;
        out.push(BigRational::new(p2.clone(), q2.clone()));
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        if q1 > BigInt::from(1_000_000_000_000i64) {
            break;
        }
    }
    out.push(BigRational::from_float(x).expect("finite"));
    out
}

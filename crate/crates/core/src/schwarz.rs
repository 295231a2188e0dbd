//! Schwarz derivatives `{r, y} = (r''/r')' − ½(r''/r')²`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{RationalFunction, Scalar};

/// Exact Schwarz derivative of a rational map.
pub fn schwarz_rational(r: &RationalFunction) -> Result<RationalFunction> {
    let r1 = r.derivative();
    if r1.is_zero() {
        return Err(Error::ConstantMap);
    }
    let s = r.derivative().derivative().checked_div(&r1)?;
    Ok(&s.derivative() - &(&s * &s).scale(&Scalar::ratio(1, 2)))
}

/// Finite-difference Schwarz derivative of `map` at `y`.
///
/// Fourth-order central stencils for the first three derivatives at steps `h`
/// and `h/2`, combined by one Richardson step.
pub fn schwarz_numeric(map: impl Fn(f64) -> f64, y: f64, h: f64) -> Result<f64> {
    let at = |h: f64| -> Result<f64> {
        let f = |k: f64| map(y + k * h);
        let (m3, m2, m1, p1, p2, p3) = (f(-3.0), f(-2.0), f(-1.0), f(1.0), f(2.0), f(3.0));
        let f0 = f(0.0);
        let d1 = (-p2 + 8.0 * p1 - 8.0 * m1 + m2) / (12.0 * h);
        let d2 = (-p2 + 16.0 * p1 - 30.0 * f0 + 16.0 * m1 - m2) / (12.0 * h * h);
        let d3 = (-p3 + 8.0 * p2 - 13.0 * p1 + 13.0 * m1 - 8.0 * m2 + m3) / (8.0 * h * h * h);
        if d1.abs() < 1e-12 {
            return Err(Error::NearCritical { at: y, value: d1.abs() });
        }
        Ok(d3 / d1 - 1.5 * (d2 / d1).powi(2))
    };
    let coarse = at(h)?;
    let fine = at(h / 2.0)?;
    Ok((16.0 * fine - coarse) / 15.0)
}

/// Exponents in `z' = k·z^p(1−z)^q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerAnsatz {
    pub p: Scalar,
    pub q: Scalar,
    pub k: Scalar,
}

impl PowerAnsatz {
    pub fn new(p: Scalar, q: Scalar) -> Self {
        PowerAnsatz { p, q, k: Scalar::int(1) }
    }

    pub fn with_k(mut self, k: Scalar) -> Self {
        self.k = k;
        self
    }
}

/// `z^{e0}(1−z)^{e1}·body(z)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerDecorated {
    pub z_exponent: Scalar,
    pub one_minus_z_exponent: Scalar,
    pub body: RationalFunction,
}

impl PowerDecorated {
    /// Principal powers of `z` and `1 − z`.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let pw = |base: Complex64, e: &Scalar| -> Complex64 {
            if e.is_zero() {
                Complex64::new(1.0, 0.0)
            } else if let Some(n) = e.as_integer().and_then(|n| i32::try_from(n).ok()) {
                base.powi(n)
            } else {
                base.powc(e.to_complex())
            }
        };
        Ok(pw(z, &self.z_exponent) * pw(1.0 - z, &self.one_minus_z_exponent) * self.body.eval(z)?)
    }

    /// The whole expression as a rational function when both exponents are integers.
    pub fn to_rational(&self) -> Option<RationalFunction> {
        let e0 = i32::try_from(self.z_exponent.as_integer()?).ok()?;
        let e1 = i32::try_from(self.one_minus_z_exponent.as_integer()?).ok()?;
        let z = RationalFunction::z();
        let omz = &RationalFunction::one() - &z;
        Some(&(&z.powi(e0).ok()? * &omz.powi(e1).ok()?) * &self.body)
    }
}

/// `{z, r}` for `z' = k·z^p(1−z)^q`:
/// `½k² z^{2p−2}(1−z)^{2q−2}[(p²−2p)(1−z)² + (q²−2q)z² − 2pq z(1−z)]`.
pub fn schwarz_power_ansatz(pa: &PowerAnsatz) -> PowerDecorated {
    let PowerAnsatz { p, q, k } = pa;
    let two = Scalar::int(2);
    let z = RationalFunction::z();
    let omz = &RationalFunction::one() - &z;
    let t1 = (&omz * &omz).scale(&(&(p * p) - &(p * &two)));
    let t2 = (&z * &z).scale(&(&(q * q) - &(q * &two)));
    let t3 = (&z * &omz).scale(&(&(p * q) * &two));
    let body = (&(&t1 + &t2) - &t3).scale(&(&(k * k) * &Scalar::ratio(1, 2)));
    PowerDecorated { z_exponent: &(p * &two) - &two, one_minus_z_exponent: &(q * &two) - &two, body }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(s: &str) -> RationalFunction {
        s.parse().unwrap()
    }

    #[test]
    fn rational_examples() {
        assert!(schwarz_rational(&rf("(2*z + 3)/(5*z - 1)")).unwrap().is_zero());
        assert_eq!(schwarz_rational(&rf("z^2")).unwrap(), rf("-3/(2*z^2)"));
        assert_eq!(schwarz_rational(&rf("z^3")).unwrap(), rf("-4/z^2"));
        assert_eq!(schwarz_rational(&rf("7")), Err(Error::ConstantMap));
    }

    #[test]
    fn numeric_examples() {
        assert!((schwarz_numeric(f64::exp, 0.0, 1e-2).unwrap() + 0.5).abs() < 1e-10);
        let m = |y: f64| (2.0 * y + 3.0) / (5.0 * y - 1.0);
        assert!(schwarz_numeric(m, 1.0, 1e-2).unwrap().abs() < 1e-8);
        assert!(matches!(schwarz_numeric(|y| y * y, 0.0, 1e-2), Err(Error::NearCritical { .. })));
    }

    #[test]
    fn ansatz_closed_forms() {
        let zero = schwarz_power_ansatz(&PowerAnsatz::new(Scalar::int(0), Scalar::int(0)));
        assert!(zero.body.is_zero());
        let exp = schwarz_power_ansatz(&PowerAnsatz::new(Scalar::int(1), Scalar::int(0)));
        assert_eq!(exp.to_rational().unwrap(), rf("-1/2"));
        let half = Scalar::ratio(1, 2);
        let sin = schwarz_power_ansatz(&PowerAnsatz::new(half.clone(), half).with_k(Scalar::int(2)));
        // z = sin²r: ½{z,r} = 1 − 3/(4z(1−z))
        let expected = rf("2 - 3/(2*z*(1-z))");
        assert_eq!(sin.to_rational().unwrap(), expected);
        let r = 0.3f64;
        let z = r.sin().powi(2);
        let num = schwarz_numeric(|t| t.sin().powi(2), r, 1e-2).unwrap();
        assert!((num - sin.eval(z.into()).unwrap().re).abs() < 1e-8);
    }
}

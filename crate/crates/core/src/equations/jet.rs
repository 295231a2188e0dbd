use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

/// Value and first two derivatives of a function at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub v: Complex64,
    pub d1: Complex64,
    pub d2: Complex64,
}

impl Jet {
    pub fn new(v: Complex64, d1: Complex64, d2: Complex64) -> Self {
        Jet { v, d1, d2 }
    }

    pub fn real(v: f64, d1: f64, d2: f64) -> Self {
        Jet::new(v.into(), d1.into(), d2.into())
    }

    pub fn constant(c: Complex64) -> Self {
        Jet::new(c, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))
    }

    /// The identity function at `z`.
    pub fn variable(z: Complex64) -> Self {
        Jet::new(z, Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
    }

    pub fn scale(self, s: Complex64) -> Self {
        Jet::new(self.v * s, self.d1 * s, self.d2 * s)
    }

    pub fn recip(self) -> Self {
        let v = self.v.inv();
        Jet::new(v, -self.d1 * v * v, (2.0 * self.d1 * self.d1 * v - self.d2) * v * v)
    }

    /// `exp` of a jet.
    pub fn exp(self) -> Self {
        let e = self.v.exp();
        Jet::new(e, e * self.d1, e * (self.d2 + self.d1 * self.d1))
    }

    /// `self ∘ inner`, where `self` is the jet of the outer function at `inner.v`.
    pub fn compose(self, inner: Jet) -> Self {
        Jet::new(self.v, self.d1 * inner.d1, self.d2 * inner.d1 * inner.d1 + self.d1 * inner.d2)
    }

    /// Jet of `(z - root)^e` at `z`, principal branch.
    pub fn power(z: Complex64, root: Complex64, e: Complex64) -> Self {
        let u = z - root;
        let v = u.powc(e);
        Jet::new(v, e * v / u, e * (e - 1.0) * v / (u * u))
    }

    /// Jet of `|x - root|^e` on the real line (any complex `e`).
    pub fn abs_power(x: f64, root: f64, e: Complex64) -> Self {
        let u = x - root;
        let v = (e * u.abs().ln()).exp();
        Jet::new(v, e * v / u, e * (e - 1.0) * v / (u * u))
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        Jet::new(self.v * o.v, self.d1 * o.v + self.v * o.d1, self.d2 * o.v + 2.0 * self.d1 * o.d1 + self.v * o.d2)
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet::new(self.v + o.v, self.d1 + o.d1, self.d2 + o.d2)
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        Jet::new(self.v - o.v, self.d1 - o.d1, self.d2 - o.d2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_reciprocal() {
        let z = Complex64::new(0.7, 0.2);
        let f = Jet::power(z, Complex64::new(0.0, 0.0), Complex64::new(2.5, 0.0));
        let one = f * f.recip();
        assert!((one.v - 1.0).norm() < 1e-15);
        assert!(one.d1.norm() < 1e-14 && one.d2.norm() < 1e-13);
    }

    #[test]
    fn chain_rule_for_square_of_sine() {
        let x = 0.4f64;
        let inner = Jet::real(x.sin(), x.cos(), -x.sin());
        let outer = Jet::real(x.sin().powi(2), 2.0 * x.sin(), 2.0);
        let j = outer.compose(inner);
        assert!((j.d1.re - (2.0 * x).sin()).abs() < 1e-15);
        assert!((j.d2.re - 2.0 * (2.0 * x).cos()).abs() < 1e-15);
    }
}

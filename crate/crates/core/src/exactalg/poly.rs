use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{Signed, Zero};

use super::scalar::Scalar;

/// Univariate polynomial over the Gaussian rationals, coefficients indexed by degree.
///
/// The zero polynomial is the empty coefficient list; every other polynomial
/// has a nonzero last coefficient.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    coeffs: Vec<Scalar>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Polynomial::constant(Scalar::int(1))
    }

    pub fn constant(c: Scalar) -> Self {
        Polynomial::new(vec![c])
    }

    /// The indeterminate `z`.
    pub fn z() -> Self {
        Polynomial::new(vec![Scalar::int(0), Scalar::int(1)])
    }

    /// `z - root`.
    pub fn linear_root(root: &Scalar) -> Self {
        Polynomial::new(vec![-root, Scalar::int(1)])
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Polynomial::new(c.iter().map(|&n| Scalar::int(n)).collect())
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` is the degree of the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(Scalar::is_one)
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        if s.is_zero() {
            return Polynomial::zero();
        }
        Polynomial::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Polynomial::zero(),
            Some(lc) if lc.is_one() => self.clone(),
            Some(lc) => self.scale(&lc.inv().expect("nonzero leading coefficient")),
        }
    }

    /// Multiply by `z^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Polynomial::zero();
        }
        let mut c = vec![Scalar::int(0); k];
        c.extend(self.coeffs.iter().cloned());
        Polynomial { coeffs: c }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Polynomial::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Polynomial::new(self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * &Scalar::int(k as i64)).collect())
    }

    /// Antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Self {
        let mut c = vec![Scalar::int(0)];
        c.extend(self.coeffs.iter().enumerate().map(|(k, a)| a / &Scalar::int(k as i64 + 1)));
        Polynomial::new(c)
    }

    pub fn eval(&self, z: &Scalar) -> Scalar {
        self.coeffs.iter().rev().fold(Scalar::int(0), |acc, c| &(&acc * z) + c)
    }

    pub fn eval_c(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c.to_complex())
    }

    /// `p(q(z))`.
    pub fn compose(&self, q: &Polynomial) -> Polynomial {
        self.coeffs.iter().rev().fold(Polynomial::zero(), |acc, c| &(&acc * q) + &Polynomial::constant(c.clone()))
    }

    /// Coefficients of `p(root + t)` in powers of `t`.
    pub fn taylor_shift(&self, root: &Scalar) -> Polynomial {
        self.compose(&Polynomial::new(vec![root.clone(), Scalar::int(1)]))
    }

    /// Euclidean division over the field; panics on a zero divisor.
    pub fn div_rem(&self, d: &Polynomial) -> (Polynomial, Polynomial) {
        let dd = d.degree().expect("polynomial division by zero");
        let lc_inv = d.leading().unwrap().inv().unwrap();
        let mut rem = self.coeffs.clone();
        let Some(n) = self.degree() else {
            return (Polynomial::zero(), Polynomial::zero());
        };
        if n < dd {
            return (Polynomial::zero(), self.clone());
        }
        let mut quot = vec![Scalar::int(0); n - dd + 1];
        for k in (0..=n - dd).rev() {
            let q = &rem[k + dd] * &lc_inv;
            if !q.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[k + j] -= &(&q * dc);
                }
            }
            quot[k] = q;
        }
        rem.truncate(dd);
        (Polynomial::new(quot), Polynomial::new(rem))
    }

    /// Quotient of a division known to be exact.
    pub fn exact_div(&self, d: &Polynomial) -> Polynomial {
        let (q, r) = self.div_rem(d);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Pseudo-remainder `prem(a, b) = rem(lc(b)^(deg a - deg b + 1) · a, b)`.
    pub fn pseudo_rem(&self, b: &Polynomial) -> Polynomial {
        match (self.degree(), b.degree()) {
            (Some(da), Some(db)) if da >= db => prem_exact(self, b),
            (_, None) => Polynomial::zero(),
            _ => self.clone(),
        }
    }

    /// Monic gcd via the subresultant polynomial remainder sequence.
    pub fn gcd(&self, other: &Polynomial) -> Polynomial {
        let (mut a, mut b) =
            if self.degree() >= other.degree() { (self.clone(), other.clone()) } else { (other.clone(), self.clone()) };
        if b.is_zero() {
            return a.monic();
        }
        let mut g = Scalar::int(1);
        let mut h = Scalar::int(1);
        loop {
            let delta = (a.degree().unwrap() - b.degree().unwrap()) as u32;
            let r = prem_exact(&a, &b);
            if r.is_zero() {
                return b.monic();
            }
            if r.degree() == Some(0) {
                return Polynomial::one();
            }
            let beta = &g * &h.pow(delta);
            a = b;
            b = r.scale(&beta.inv().unwrap());
            g = a.leading().unwrap().clone();
            // h <- g^delta / h^(delta - 1)
            h = if delta == 0 { h } else { &g.pow(delta) / &h.pow(delta - 1) };
        }
    }
}

/// Pseudo-remainder with the full `lc(b)^(deg a - deg b + 1)` factor, as the
/// subresultant recurrence requires.
fn prem_exact(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let da = a.degree().unwrap();
    let db = b.degree().unwrap();
    let lc = b.leading().unwrap();
    let scaled = a.scale(&lc.pow((da - db + 1) as u32));
    scaled.div_rem(b).1
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = c.im.is_zero() && c.re.is_negative() || c.re.is_zero() && c.im.is_negative();
            let mag = if negative { -c } else { c.clone() };
            match (first, negative) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            let mono = match k {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{k}"),
            };
            if k == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{mag}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, o: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(o.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, o: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(o.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, o: &Polynomial) -> Polynomial {
        if self.is_zero() || o.is_zero() {
            return Polynomial::zero();
        }
        let mut c = vec![Scalar::int(0); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] += &(a * b);
            }
        }
        Polynomial::new(c)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

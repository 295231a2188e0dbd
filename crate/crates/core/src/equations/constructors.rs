use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::LinearODE2;
use crate::exactalg::{Polynomial, RationalFunction, Scalar};

fn rf_poly(c: &[Scalar]) -> RationalFunction {
    RationalFunction::from_poly(Polynomial::new(c.to_vec()))
}

fn ode(a: &[Scalar], b: &[Scalar], c: &[Scalar]) -> LinearODE2 {
    LinearODE2::new(rf_poly(a), rf_poly(b), rf_poly(c)).expect("nonzero leading coefficient")
}

fn half(x: Scalar) -> Scalar {
    x * Scalar::ratio(1, 2)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypergeometricParams {
    pub a: Scalar,
    pub b: Scalar,
    pub c: Scalar,
}

impl HypergeometricParams {
    /// `a = (1+α+β−μ)/2`, `b = (1+α+β+μ)/2`, `c = 1+α`.
    pub fn from_symmetric(alpha: Scalar, beta: Scalar, mu: Scalar) -> Self {
        let s = &(&Scalar::int(1) + &alpha) + &beta;
        HypergeometricParams { a: half(&s - &mu), b: half(&s + &mu), c: Scalar::int(1) + alpha }
    }

    pub fn alpha(&self) -> Scalar {
        &self.c - &Scalar::int(1)
    }

    pub fn beta(&self) -> Scalar {
        &(&self.a + &self.b) - &self.c
    }

    /// `b − a`, so that the round trip through [`Self::from_symmetric`] is exact.
    pub fn mu(&self) -> Scalar {
        &self.b - &self.a
    }
}

/// `z(1−z)∂² + (c − (a+b+1)z)∂ − ab`.
pub fn make_hypergeometric(p: &HypergeometricParams) -> LinearODE2 {
    let one = Scalar::int(1);
    ode(&[Scalar::int(0), one.clone(), Scalar::int(-1)], &[p.c.clone(), -(&(&p.a + &p.b) + &one)], &[-(&p.a * &p.b)])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfluentParams {
    pub a: Scalar,
    pub c: Scalar,
    pub gamma: Scalar,
}

impl ConfluentParams {
    /// `a = (γ + αγ − ν)/2`, `c = 1+α`.
    pub fn from_symmetric(alpha: Scalar, nu: Scalar, gamma: Scalar) -> Self {
        let a = half(&(&gamma + &(&alpha * &gamma)) - &nu);
        ConfluentParams { a, c: Scalar::int(1) + alpha, gamma }
    }

    pub fn alpha(&self) -> Scalar {
        &self.c - &Scalar::int(1)
    }

    pub fn nu(&self) -> Scalar {
        &(&self.c * &self.gamma) - &(&self.a * &Scalar::int(2))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ConfluentFamily {
    /// `z∂² + (c − γz)∂ − a`.
    Generalized(ConfluentParams),
    /// `z²∂² + (−1 + (1+a+b)z)∂ + ab`.
    TwoF0 { a: Scalar, b: Scalar },
    /// `z∂² + c∂ − 1`.
    ZeroF1 { c: Scalar },
}

pub fn make_confluent_family(p: &ConfluentFamily) -> LinearODE2 {
    let z = [Scalar::int(0), Scalar::int(1)];
    match p {
        ConfluentFamily::Generalized(p) => ode(&z, &[p.c.clone(), -&p.gamma], &[-&p.a]),
        ConfluentFamily::TwoF0 { a, b } => ode(
            &[Scalar::int(0), Scalar::int(0), Scalar::int(1)],
            &[Scalar::int(-1), &(&Scalar::int(1) + a) + b],
            &[a * b],
        ),
        ConfluentFamily::ZeroF1 { c } => ode(&z, std::slice::from_ref(c), &[Scalar::int(-1)]),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OscillatorParams {
    pub theta_sq: Scalar,
    pub rho: Scalar,
    pub lambda: Scalar,
}

/// `−∂² + θ²z² + ρz + λ`.
pub fn make_oscillator(p: &OscillatorParams) -> LinearODE2 {
    ode(&[Scalar::int(-1)], &[], &[p.lambda.clone(), p.rho.clone(), p.theta_sq.clone()])
}

/// The Hermite operator `∂² − 2y∂ − 2a`.
pub fn make_hermite(a: &Scalar) -> LinearODE2 {
    ode(&[Scalar::int(1)], &[Scalar::int(0), Scalar::int(-2)], &[a * &Scalar::int(-2)])
}

/// `∂² − y`, whose regular solution at the origin is `₀F₁(;2/3;y³/9)`.
pub fn make_airy() -> LinearODE2 {
    ode(&[Scalar::int(1)], &[], &[Scalar::int(0), Scalar::int(-1)])
}

/// Data of `−∂z² + θ²z² + ρz + λ = −θ·e^{−y²/2} 𝒢(a) e^{y²/2}` with `y = √θ (z + shift)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HermiteData {
    pub theta: Complex64,
    pub sqrt_theta: Complex64,
    pub shift: Complex64,
    pub a: Complex64,
}

impl HermiteData {
    pub fn y(&self, z: Complex64) -> Complex64 {
        self.sqrt_theta * (z + self.shift)
    }
}

/// θ is the principal square root of θ²; requires θ² ≠ 0.
pub fn hermite_reduction(theta_sq: Complex64, rho: Complex64, lambda: Complex64) -> HermiteData {
    let theta = theta_sq.sqrt();
    let shift = rho / (2.0 * theta_sq);
    let a = (lambda - rho * rho / (4.0 * theta_sq)) / (2.0 * theta) + 0.5;
    HermiteData { theta, sqrt_theta: theta.sqrt(), shift, a }
}

/// Data of `−∂z² + ρz + λ = ρ^{2/3}(−∂y² + y)` with `y = ρ^{1/3} z + ρ^{−2/3} λ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AiryData {
    pub scale: Complex64,
    pub shift: Complex64,
    pub prefactor: Complex64,
}

impl AiryData {
    pub fn y(&self, z: Complex64) -> Complex64 {
        self.scale * z + self.shift
    }
}

/// Real cube root for real ρ, principal otherwise; requires ρ ≠ 0.
pub fn airy_reduction(rho: Complex64, lambda: Complex64) -> AiryData {
    let scale = if rho.im == 0.0 { Complex64::new(rho.re.cbrt(), 0.0) } else { rho.powf(1.0 / 3.0) };
    AiryData { scale, shift: lambda / (scale * scale), prefactor: scale * scale }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equations::{bose_invariant, Jet};

    fn rf(s: &str) -> RationalFunction {
        s.parse().unwrap()
    }

    #[test]
    fn symmetric_parameters_round_trip() {
        let p = HypergeometricParams::from_symmetric(Scalar::int(1), Scalar::int(1), Scalar::int(1));
        assert_eq!((p.a.clone(), p.b.clone(), p.c.clone()), (Scalar::int(1), Scalar::int(2), Scalar::int(2)));
        let q = HypergeometricParams::from_symmetric(
            Scalar::ratio(2, 9),
            Scalar::gaussian((1, 2), (3, 1)),
            Scalar::ratio(-7, 4),
        );
        let back = HypergeometricParams::from_symmetric(q.alpha(), q.beta(), q.mu());
        assert_eq!(back, q);
        let r = ConfluentParams::from_symmetric(Scalar::ratio(1, 3), Scalar::int(5), Scalar::ratio(3, 2));
        assert_eq!(ConfluentParams::from_symmetric(r.alpha(), r.nu(), r.gamma.clone()), r);
    }

    #[test]
    fn hypergeometric_with_zero_a_kills_constants() {
        let ode =
            make_hypergeometric(&HypergeometricParams { a: Scalar::int(0), b: Scalar::ratio(3, 7), c: Scalar::int(1) });
        let v = ode.apply(Jet::constant(1.0.into()), Complex64::new(0.3, 0.0)).unwrap();
        assert_eq!(v, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn symmetric_hypergeometric_invariant() {
        let (al, be, mu) = (Scalar::ratio(1, 3), Scalar::ratio(5, 2), Scalar::ratio(-4, 7));
        let ode = make_hypergeometric(&HypergeometricParams::from_symmetric(al.clone(), be.clone(), mu.clone()));
        let sq = |x: &Scalar| x * x;
        let one = Scalar::int(1);
        let expected = format!(
            "(({})*(1-z) + ({})*z + ({})*(1-z)*z)/(4*z^2*(1-z)^2)",
            &one - &sq(&al),
            &one - &sq(&be),
            &sq(&mu) - &one
        );
        assert_eq!(bose_invariant(&ode), rf(&expected));
    }

    #[test]
    fn gamma_one_is_confluent() {
        let p = ConfluentParams { a: Scalar::ratio(1, 2), c: Scalar::int(3), gamma: Scalar::int(1) };
        let ode = make_confluent_family(&ConfluentFamily::Generalized(p));
        assert_eq!((ode.a, ode.b, ode.c), (rf("z"), rf("3 - z"), rf("-1/2")));
    }

    #[test]
    fn symmetric_confluent_invariant() {
        let (al, nu, ga) = (Scalar::ratio(3, 5), Scalar::ratio(-2, 3), Scalar::ratio(7, 4));
        let ode = make_confluent_family(&ConfluentFamily::Generalized(ConfluentParams::from_symmetric(
            al.clone(),
            nu.clone(),
            ga.clone(),
        )));
        let expected = format!("-({})^2/4 + ({})/(2*z) + (1 - ({})^2)/(4*z^2)", ga, nu, al);
        assert_eq!(bose_invariant(&ode), rf(&expected));
    }

    #[test]
    fn free_oscillator() {
        let z = Scalar::int(0);
        let ode = make_oscillator(&OscillatorParams { theta_sq: z.clone(), rho: z.clone(), lambda: z });
        assert_eq!((ode.a, ode.b.is_zero(), ode.c.is_zero()), (rf("-1"), true, true));
    }

    #[test]
    fn hermite_constant_pins_standard_oscillator() {
        // θ = 1, ρ = 0: −∂² + z² + λ with a = −n gives λ = −(2n+1).
        let h = hermite_reduction(1.0.into(), 0.0.into(), (-5.0).into());
        assert!((h.a + 2.0).norm() < 1e-15);
        let h = hermite_reduction(4.0.into(), 3.0.into(), 0.7.into());
        let lam = h.theta * (2.0 * h.a - 1.0) + 9.0 / 16.0;
        assert!((lam - 0.7).norm() < 1e-14);
    }
}

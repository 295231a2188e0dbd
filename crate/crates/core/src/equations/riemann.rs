use serde::{Deserialize, Serialize};

use super::LinearODE2;
use crate::error::{Error, Result};
use crate::exactalg::{Polynomial, RationalFunction, Scalar};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SingularPoint {
    Finite(Scalar),
    Infinity,
}

impl SingularPoint {
    pub fn finite(&self) -> Option<&Scalar> {
        match self {
            SingularPoint::Finite(z) => Some(z),
            SingularPoint::Infinity => None,
        }
    }
}

impl From<i64> for SingularPoint {
    fn from(n: i64) -> Self {
        SingularPoint::Finite(Scalar::int(n))
    }
}

/// Three singular points and their index pairs `(ρᵢ, ρ̃ᵢ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiemannData {
    pub points: [SingularPoint; 3],
    pub indices: [[Scalar; 2]; 3],
}

impl RiemannData {
    /// Validated constructor: indices sum to one, points pairwise distinct.
    pub fn new(points: [SingularPoint; 3], indices: [[Scalar; 2]; 3]) -> Result<Self> {
        let d = RiemannData { points, indices };
        d.validate()?;
        Ok(d)
    }

    pub fn index_sum(&self) -> Scalar {
        self.indices.iter().flatten().fold(Scalar::int(0), |acc, r| &acc + r)
    }

    pub fn validate(&self) -> Result<()> {
        let s = self.index_sum();
        if !s.is_one() {
            return Err(Error::IndexSum { sum: s.to_string() });
        }
        let p = &self.points;
        if p[0] == p[1] || p[0] == p[2] || p[1] == p[2] {
            return Err(Error::CoincidentPoints);
        }
        Ok(())
    }

    /// Index differences `ρᵢ − ρ̃ᵢ`.
    pub fn exponent_differences(&self) -> [Scalar; 3] {
        self.indices.clone().map(|[r, rt]| &r - &rt)
    }
}

fn inv_linear(root: &Scalar, power: u32) -> RationalFunction {
    RationalFunction::new(Polynomial::one(), Polynomial::linear_root(root).pow(power)).expect("nonzero")
}

/// The Riemann operator with leading coefficient 1.
pub fn make_riemann(d: &RiemannData) -> Result<LinearODE2> {
    d.validate()?;
    // Move a point at infinity into the third column; the operator is symmetric in the columns.
    let mut cols: Vec<(SingularPoint, [Scalar; 2])> = d.points.iter().cloned().zip(d.indices.iter().cloned()).collect();
    if let Some(k) = cols.iter().position(|(p, _)| *p == SingularPoint::Infinity) {
        cols.swap(k, 2);
    }
    let one = Scalar::int(1);
    let mut b = RationalFunction::zero();
    let mut c = RationalFunction::zero();
    let finite: Vec<(Scalar, Scalar, Scalar)> =
        cols.iter().filter_map(|(p, [r, rt])| p.finite().map(|z| (z.clone(), r.clone(), rt.clone()))).collect();
    for (zi, r, rt) in &finite {
        b = &b - &inv_linear(zi, 1).scale(&(&(r + rt) - &one));
    }
    if finite.len() == 3 {
        for i in 0..3 {
            let (zi, r, rt) = &finite[i];
            let (zj, zk) = (&finite[(i + 1) % 3].0, &finite[(i + 2) % 3].0);
            let coef = &(&(r * rt) * &(zi - zj)) * &(zi - zk);
            let term = &(&inv_linear(zi, 2) * &inv_linear(zj, 1)) * &inv_linear(zk, 1);
            c = &c + &term.scale(&coef);
        }
    } else {
        let (z1, z2) = (&finite[0].0, &finite[1].0);
        for (i, (zi, r, rt)) in finite.iter().enumerate() {
            let zj = if i == 0 { z2 } else { z1 };
            let term = &inv_linear(zi, 2) * &inv_linear(zj, 1);
            c = &c + &term.scale(&(&(r * rt) * &(zi - zj)));
        }
        let [r3, rt3] = &cols[2].1;
        c = &c + &(&inv_linear(z1, 1) * &inv_linear(z2, 1)).scale(&(r3 * rt3));
    }
    LinearODE2::new(RationalFunction::one(), b, c)
}

/// `w = (az + b)/(cz + d)` with `ad − bc = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mobius {
    pub a: Scalar,
    pub b: Scalar,
    pub c: Scalar,
    pub d: Scalar,
}

impl Mobius {
    pub fn new(a: Scalar, b: Scalar, c: Scalar, d: Scalar) -> Result<Self> {
        let m = Mobius { a, b, c, d };
        m.check()?;
        Ok(m)
    }

    pub fn identity() -> Self {
        Mobius { a: Scalar::int(1), b: Scalar::int(0), c: Scalar::int(0), d: Scalar::int(1) }
    }

    pub fn det(&self) -> Scalar {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    fn check(&self) -> Result<()> {
        let det = self.det();
        if det.is_one() {
            Ok(())
        } else {
            Err(Error::DegenerateMobius { det: det.to_string() })
        }
    }

    pub fn apply(&self, p: &SingularPoint) -> SingularPoint {
        match p {
            SingularPoint::Finite(z) => {
                let den = &(&self.c * z) + &self.d;
                if den.is_zero() {
                    SingularPoint::Infinity
                } else {
                    SingularPoint::Finite(&(&(&self.a * z) + &self.b) / &den)
                }
            }
            SingularPoint::Infinity if self.c.is_zero() => SingularPoint::Infinity,
            SingularPoint::Infinity => SingularPoint::Finite(&self.a / &self.c),
        }
    }

    /// The map as a rational function of `z`.
    pub fn as_rational(&self) -> RationalFunction {
        let num = Polynomial::new(vec![self.b.clone(), self.a.clone()]);
        let den = Polynomial::new(vec![self.d.clone(), self.c.clone()]);
        RationalFunction::new(num, den).expect("nondegenerate")
    }
}

/// Points mapped by `h`, indices unchanged.
pub fn riemann_mobius(d: &RiemannData, h: &Mobius) -> Result<RiemannData> {
    h.check()?;
    RiemannData::new(d.points.clone().map(|p| h.apply(&p)), d.indices.clone())
}

/// Indices after conjugating by `(z−z₁)^{−λ}(z−z₂)^{λ}`.
pub fn riemann_conjugate(d: &RiemannData, lambda: &Scalar) -> Result<RiemannData> {
    if d.points[0].finite().is_none() || d.points[1].finite().is_none() {
        return Err(Error::InfiniteConjugationPoint);
    }
    let mut out = d.clone();
    for r in out.indices[0].iter_mut() {
        *r -= lambda;
    }
    for r in out.indices[1].iter_mut() {
        *r += lambda;
    }
    out.validate()?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equations::{
        bose_invariant, canonical_form, gauge_transform, make_hypergeometric, GaugeFactor, HypergeometricParams,
    };

    fn s(n: i64, d: i64) -> Scalar {
        Scalar::ratio(n, d)
    }

    fn hyp_table(p: &HypergeometricParams) -> RiemannData {
        let one = Scalar::int(1);
        RiemannData::new(
            [0.into(), 1.into(), SingularPoint::Infinity],
            [[Scalar::int(0), &one - &p.c], [Scalar::int(0), &(&p.c - &p.a) - &p.b], [p.a.clone(), p.b.clone()]],
        )
        .unwrap()
    }

    #[test]
    fn hypergeometric_is_a_riemann_operator() {
        let p = HypergeometricParams { a: s(1, 3), b: s(-5, 2), c: s(7, 4) };
        let ode = make_riemann(&hyp_table(&p)).unwrap();
        let scaled = ode.scale_left(&"z*(1-z)".parse().unwrap()).unwrap();
        assert_eq!(scaled, make_hypergeometric(&p));
    }

    #[test]
    fn infinity_column_can_sit_anywhere() {
        let d = hyp_table(&HypergeometricParams { a: s(1, 3), b: s(2, 1), c: s(1, 5) });
        let mut e = d.clone();
        e.points.swap(0, 2);
        e.indices.swap(0, 2);
        assert_eq!(make_riemann(&d).unwrap(), make_riemann(&e).unwrap());
    }

    #[test]
    fn index_sum_and_coincidence_errors() {
        let bad = RiemannData::new(
            [0.into(), 1.into(), 2.into()],
            [[s(1, 1), s(0, 1)], [s(0, 1), s(0, 1)], [s(0, 1), s(1, 2)]],
        );
        assert!(matches!(bad, Err(Error::IndexSum { .. })));
        let coincide = RiemannData::new(
            [0.into(), 0.into(), 2.into()],
            [[s(1, 1), s(0, 1)], [s(0, 1), s(0, 1)], [s(0, 1), s(0, 1)]],
        );
        assert_eq!(coincide, Err(Error::CoincidentPoints));
    }

    #[test]
    fn symmetric_table_canonical_form() {
        let (al, be, mu) = (s(2, 3), s(-1, 4), s(5, 7));
        let h = s(1, 2);
        let d = RiemannData::new(
            [0.into(), 1.into(), SingularPoint::Infinity],
            [
                [&(&al * &h) + &h, &(-&al * &h) + &h],
                [&(&be * &h) + &h, &(-&be * &h) + &h],
                [&(&mu * &h) - &h, &(-&mu * &h) - &h],
            ],
        )
        .unwrap();
        let (inv, _) = canonical_form(&make_riemann(&d).unwrap()).unwrap();
        let one = Scalar::int(1);
        let sq = |x: &Scalar| x * x;
        let expected: RationalFunction = format!(
            "-(({})/(4*z^2*(1-z)) + ({})/(4*z*(1-z)^2) - ({})/(4*z*(1-z)))",
            &sq(&al) - &one,
            &sq(&be) - &one,
            &sq(&mu) - &one
        )
        .parse()
        .unwrap();
        assert_eq!(inv, expected);
    }

    #[test]
    fn reflection_swaps_zero_and_one() {
        let i = Scalar::i();
        let h = Mobius::new(-&i, i.clone(), Scalar::int(0), i.clone()).unwrap();
        let d = hyp_table(&HypergeometricParams { a: s(1, 2), b: s(1, 3), c: s(1, 4) });
        let m = riemann_mobius(&d, &h).unwrap();
        assert_eq!(m.points, [1.into(), 0.into(), SingularPoint::Infinity]);
        assert_eq!(m.indices, d.indices);
        assert!(Mobius::new(Scalar::int(1), Scalar::int(1), Scalar::int(1), Scalar::int(1)).is_err());
    }

    #[test]
    fn conjugated_operator_matches_shifted_indices() {
        let base = [[s(1, 3), s(-1, 5)], [s(1, 2), s(2, 7)], [s(3, 11), s(0, 1)]];
        let mut indices = base.clone();
        let partial = indices.iter().flatten().take(5).fold(Scalar::int(0), |a, r| &a + r);
        indices[2][1] = &Scalar::int(1) - &partial;
        let d = RiemannData::new([0.into(), 2.into(), 5.into()], indices).unwrap();
        let lam = s(3, 8);
        let conj = riemann_conjugate(&d, &lam).unwrap();
        let g = GaugeFactor::power(Scalar::int(0), lam.clone()).mul(&GaugeFactor::power(Scalar::int(2), -&lam));
        let lhs = gauge_transform(&make_riemann(&d).unwrap(), &g);
        assert_eq!(lhs, make_riemann(&conj).unwrap());
        assert_eq!(bose_invariant(&lhs), bose_invariant(&make_riemann(&d).unwrap()));
        assert!(
            riemann_conjugate(&hyp_table(&HypergeometricParams { a: s(1, 1), b: s(1, 1), c: s(1, 2) }), &lam).is_ok()
        );
        let mut at_inf = d.clone();
        at_inf.points = [SingularPoint::Infinity, 0.into(), 1.into()];
        assert_eq!(riemann_conjugate(&at_inf, &lam), Err(Error::InfiniteConjugationPoint));
    }
}

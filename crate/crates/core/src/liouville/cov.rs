use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::numeric::CovTable;
use crate::error::{Error, Result};

type C = Complex64;

/// `[z, z', z'', z''']` at a point.
pub type Jet3 = [C; 4];

/// Closed-form maps `r ↦ z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClosedForm {
    Identity,
    /// `scale·r + shift`
    Affine {
        scale: f64,
        shift: f64,
    },
    /// `sin² r`
    SinSq,
    /// `−sinh² r`
    NegSinhSq,
    /// `tanh² r`
    TanhSq,
    /// `−tan² r`
    NegTanSq,
    /// `1/(1 + e^{2r})`
    Logistic,
    /// `1/(1 − e^{−2r})`
    EckartMap,
    /// `1 − e^{2r}`
    OneMinusExp2,
    /// `1 + e^{2r}`
    OnePlusExp2,
    /// `e^{−r}`
    ExpNeg,
    /// `e^{r}`
    Exp,
    /// `r²`
    Square,
    /// `(scale·r)^exponent`
    Power {
        scale: f64,
        exponent: f64,
    },
    /// `(a r + b)/(c r + d)`
    Mobius {
        a: f64,
        b: f64,
        c: f64,
        d: f64,
    },
}

/// Jet of a solution of the autonomous equation `z' = F(z)`, given `F, F', F''` at `z`.
fn autonomous(z: C, f: C, f1: C, f2: C) -> Jet3 {
    [z, f, f1 * f, (f2 * f + f1 * f1) * f]
}

impl ClosedForm {
    pub fn jet(&self, r: C) -> Jet3 {
        use ClosedForm::*;
        let one = C::new(1.0, 0.0);
        let zero = C::new(0.0, 0.0);
        match *self {
            Identity => [r, one, zero, zero],
            Affine { scale, shift } => [r * scale + shift, scale.into(), zero, zero],
            SinSq => {
                let (s, c) = ((2.0 * r).sin(), (2.0 * r).cos());
                [r.sin().powi(2), s, 2.0 * c, -4.0 * s]
            }
            NegSinhSq => {
                let (s, c) = ((2.0 * r).sinh(), (2.0 * r).cosh());
                [-r.sinh().powi(2), -s, -2.0 * c, -4.0 * s]
            }
            TanhSq => {
                let t = r.tanh();
                let s = one - t * t;
                [t * t, 2.0 * t * s, 2.0 * s * s - 4.0 * t * t * s, -16.0 * t * s * s + 8.0 * t * t * t * s]
            }
            NegTanSq => {
                let t = r.tan();
                let s = one + t * t;
                [-t * t, -2.0 * t * s, -2.0 * s * s - 4.0 * t * t * s, -16.0 * t * s * s - 8.0 * t * t * t * s]
            }
            Logistic => {
                let z = (one + (2.0 * r).exp()).inv();
                autonomous(z, -2.0 * z * (one - z), 4.0 * z - 2.0, 4.0.into())
            }
            EckartMap => {
                let z = (one - (-2.0 * r).exp()).inv();
                autonomous(z, 2.0 * z * (one - z), 2.0 - 4.0 * z, (-4.0).into())
            }
            OneMinusExp2 => {
                let z = one - (2.0 * r).exp();
                autonomous(z, 2.0 * (z - 1.0), 2.0.into(), zero)
            }
            OnePlusExp2 => {
                let z = one + (2.0 * r).exp();
                autonomous(z, 2.0 * (z - 1.0), 2.0.into(), zero)
            }
            ExpNeg => {
                let z = (-r).exp();
                autonomous(z, -z, (-1.0).into(), zero)
            }
            Exp => {
                let z = r.exp();
                autonomous(z, z, one, zero)
            }
            Square => [r * r, 2.0 * r, 2.0.into(), zero],
            Power { scale, exponent: e } => {
                let u = r * scale;
                let pw = |k: f64| if u == zero && k == 0.0 { one } else { u.powf(k) };
                [
                    pw(e),
                    e * scale * pw(e - 1.0),
                    e * (e - 1.0) * scale * scale * pw(e - 2.0),
                    e * (e - 1.0) * (e - 2.0) * scale.powi(3) * pw(e - 3.0),
                ]
            }
            Mobius { a, b, c, d } => {
                let det = a * d - b * c;
                let w = r * c + d;
                [(r * a + b) / w, det / (w * w), -2.0 * c * det / w.powi(3), 6.0 * c * c * det / w.powi(4)]
            }
        }
    }

    /// Inverse on the branch used by the catalog domains.
    pub fn inverse(&self, z: f64) -> f64 {
        use ClosedForm::*;
        match *self {
            Identity => z,
            Affine { scale, shift } => (z - shift) / scale,
            SinSq => z.sqrt().asin(),
            NegSinhSq => (-z).sqrt().asinh(),
            TanhSq => z.sqrt().atanh(),
            NegTanSq => (-z).sqrt().atan(),
            Logistic => 0.5 * ((1.0 - z) / z).ln(),
            EckartMap => -0.5 * ((z - 1.0) / z).ln(),
            OneMinusExp2 => 0.5 * (1.0 - z).ln(),
            OnePlusExp2 => 0.5 * (z - 1.0).ln(),
            ExpNeg => -z.ln(),
            Exp => z.ln(),
            Square => z.sqrt(),
            Power { scale, exponent } => z.powf(1.0 / exponent) / scale,
            Mobius { a, b, c, d } => (d * z - b) / (a - c * z),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) enum CovMap {
    Closed(ClosedForm),
    Numeric(Arc<CovTable>),
    /// `outer ∘ inner`
    Composite(Box<ChangeOfVariables>, Box<ChangeOfVariables>),
}

/// An invertible map `r ↦ z` on an open interval of `r`.
#[derive(Debug, Clone)]
pub struct ChangeOfVariables {
    pub(crate) map: CovMap,
    pub domain: (f64, f64),
    pub codomain: (f64, f64),
}

impl ChangeOfVariables {
    pub fn closed(form: ClosedForm, domain: (f64, f64)) -> Self {
        let a = form.jet(domain.0.into())[0].re;
        let b = form.jet(domain.1.into())[0].re;
        ChangeOfVariables { map: CovMap::Closed(form), domain, codomain: (a.min(b), a.max(b)) }
    }

    pub fn identity() -> Self {
        Self::closed(ClosedForm::Identity, (f64::NEG_INFINITY, f64::INFINITY))
    }

    pub(crate) fn numeric(table: CovTable) -> Self {
        let domain = table.r_range();
        let codomain = table.z_range();
        ChangeOfVariables { map: CovMap::Numeric(Arc::new(table)), domain, codomain }
    }

    /// `r ↦ outer(inner(r))`; the domain is that of `inner`.
    pub fn compose(outer: ChangeOfVariables, inner: ChangeOfVariables) -> Self {
        let domain = inner.domain;
        let ends =
            [inner.domain.0, inner.domain.1].map(|r| inner.z(r).ok().and_then(|y| outer.z(y).ok()).unwrap_or(f64::NAN));
        let codomain = (ends[0].min(ends[1]), ends[0].max(ends[1]));
        ChangeOfVariables { map: CovMap::Composite(Box::new(outer), Box::new(inner)), domain, codomain }
    }

    pub fn closed_form(&self) -> Option<ClosedForm> {
        match &self.map {
            CovMap::Closed(f) => Some(*f),
            _ => None,
        }
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self.map, CovMap::Numeric(_))
    }

    pub fn table(&self) -> Option<&CovTable> {
        match &self.map {
            CovMap::Numeric(t) => Some(t),
            _ => None,
        }
    }

    pub fn contains(&self, r: f64) -> bool {
        r > self.domain.0 && r < self.domain.1
    }

    fn check(&self, r: f64) -> Result<()> {
        if self.contains(r) {
            Ok(())
        } else {
            Err(Error::OutsideDomain { at: r, lo: self.domain.0, hi: self.domain.1 })
        }
    }

    /// Real jet with a domain check.
    pub fn jet(&self, r: f64) -> Result<[f64; 4]> {
        self.check(r)?;
        let j = match &self.map {
            CovMap::Numeric(t) => return t.jet(r),
            _ => self.jet_c(r.into())?,
        };
        Ok(j.map(|c| c.re))
    }

    /// Complex jet without a domain check (closed forms and their composites only).
    pub fn jet_c(&self, r: C) -> Result<Jet3> {
        match &self.map {
            CovMap::Closed(f) => Ok(f.jet(r)),
            CovMap::Numeric(t) => {
                if r.im != 0.0 {
                    return Err(Error::InvalidParameter("numeric change of variables needs a real argument".into()));
                }
                Ok(t.jet(r.re)?.map(C::from))
            }
            CovMap::Composite(outer, inner) => {
                let g = inner.jet_c(r)?;
                let f = outer.jet_c(g[0])?;
                Ok([
                    f[0],
                    f[1] * g[1],
                    f[2] * g[1] * g[1] + f[1] * g[2],
                    f[3] * g[1].powi(3) + 3.0 * f[2] * g[1] * g[2] + f[1] * g[3],
                ])
            }
        }
    }

    pub fn z(&self, r: f64) -> Result<f64> {
        Ok(self.jet(r)?[0])
    }

    pub fn dzdr(&self, r: f64) -> Result<f64> {
        Ok(self.jet(r)?[1])
    }

    /// `z ↦ r`.
    pub fn inverse(&self, z: f64) -> Result<f64> {
        match &self.map {
            CovMap::Closed(f) => Ok(f.inverse(z)),
            CovMap::Numeric(t) => t.r_of_z(z),
            CovMap::Composite(outer, inner) => inner.inverse(outer.inverse(z)?),
        }
    }

    /// `{z, r}` from the exact jet.
    pub fn schwarzian(&self, r: f64) -> Result<f64> {
        self.check(r)?;
        Ok(schwarz_of_jet(&self.jet_c(r.into())?).re)
    }

    pub fn schwarzian_c(&self, r: C) -> Result<C> {
        Ok(schwarz_of_jet(&self.jet_c(r)?))
    }
}

pub(crate) fn schwarz_of_jet(j: &Jet3) -> C {
    let s = j[2] / j[1];
    j[3] / j[1] - 1.5 * s * s
}

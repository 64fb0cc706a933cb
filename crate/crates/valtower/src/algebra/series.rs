//! Truncated series in `k[[x]][y]` with tracked precision.

use super::poly::Poly2;
use crate::error::{Error, Result};

/// A polynomial known modulo `x^prec_x` and, when `prec_y` is set, modulo `y^prec_y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XSeries {
    pub poly: Poly2,
    pub prec_x: u32,
    pub prec_y: Option<u32>,
}

impl XSeries {
    pub fn new(poly: &Poly2, prec_x: u32) -> Self {
        XSeries { poly: poly.truncate_x(prec_x), prec_x, prec_y: None }
    }

    fn ycap(&self) -> u32 {
        self.prec_y.unwrap_or(u32::MAX)
    }

    pub fn mul(&self, o: &XSeries) -> XSeries {
        let px = self.prec_x.min(o.prec_x);
        let py = match (self.prec_y, o.prec_y) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        XSeries { poly: self.poly.mul_trunc(&o.poly, px, py.unwrap_or(u32::MAX)), prec_x: px, prec_y: py }
    }

    pub fn sub(&self, o: &XSeries) -> XSeries {
        let px = self.prec_x.min(o.prec_x);
        let py = match (self.prec_y, o.prec_y) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        XSeries { poly: (&self.poly - &o.poly).truncate(px, py.unwrap_or(u32::MAX)), prec_x: px, prec_y: py }
    }

    /// Zero to the tracked precision.
    pub fn is_zero(&self) -> bool {
        self.poly.truncate(self.prec_x, self.ycap()).is_zero()
    }

    pub fn x_order(&self) -> Result<u32> {
        self.poly.truncate(self.prec_x, self.ycap()).x_order()
    }
}

/// Inverse of a unit modulo `(x^m, y^m)`; exact modulo `x^m` when `u` does not involve y.
pub fn invert_unit(u: &Poly2, m: u32) -> Result<XSeries> {
    let f = u.field();
    let c0 = u.constant_term();
    if c0.is_zero() {
        return Err(Error::NotAUnit);
    }
    let y_free = u.deg_y() == Some(0);
    let my = if y_free { 1 } else { m };
    let c0inv = c0.inv()?;
    // u = c0 (1 - h), u^{-1} = c0^{-1} sum h^k
    let h = (&Poly2::one(f) - &u.scale(c0inv)).truncate(m, my);
    let mut acc = Poly2::one(f).truncate(m, my);
    let mut hk = Poly2::one(f);
    loop {
        hk = hk.mul_trunc(&h, m, my);
        if hk.is_zero() {
            break;
        }
        acc = &acc + &hk;
    }
    let poly = acc.scale(c0inv);
    Ok(XSeries { poly, prec_x: m, prec_y: if y_free { None } else { Some(m) } })
}

//! Moebius transformations of the Riemann sphere as 2x2 complex matrices.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sphere::Point;

/// `z -> (a z + b) / (c z + d)` with `ad - bc != 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoebiusMap {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

impl MoebiusMap {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let m = MoebiusMap { a, b, c, d };
        let det = m.det();
        let scale = a.norm() * d.norm() + b.norm() * c.norm();
        if det == ZERO || det.norm() <= 1e-14 * scale {
            return Err(Error::Domain("Moebius map has zero determinant".into()));
        }
        Ok(m)
    }

    pub fn identity() -> Self {
        MoebiusMap { a: ONE, b: ZERO, c: ZERO, d: ONE }
    }

    /// `z -> k z`.
    pub fn scaling(k: Complex64) -> Result<Self> {
        Self::new(k, ZERO, ZERO, ONE)
    }

    /// The unique map sending `z1, z2, z3` to `0, 1, infinity`.
    pub fn to_zero_one_infinity(z1: Point, z2: Point, z3: Point) -> Result<Self> {
        use Point::*;
        let m = match (z1, z2, z3) {
            (Infinity, Finite(z2), Finite(z3)) => Self::new(ZERO, -(z2 - z3), -ONE, z3),
            (Finite(z1), Infinity, Finite(z3)) => Self::new(ONE, -z1, ONE, -z3),
            (Finite(z1), Finite(z2), Infinity) => Self::new(-ONE, z1, ZERO, -(z2 - z1)),
            (Finite(z1), Finite(z2), Finite(z3)) => Self::new(z2 - z3, -z1 * (z2 - z3), z2 - z1, -z3 * (z2 - z1)),
            _ => Err(Error::Domain("points must be distinct".into())),
        }?;
        Ok(m)
    }

    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    pub fn apply(&self, z: Point) -> Point {
        match z {
            Point::Infinity => {
                if self.c == ZERO {
                    Point::Infinity
                } else {
                    Point::Finite(self.a / self.c)
                }
            }
            Point::Finite(z) => {
                let den = self.c * z + self.d;
                let num = self.a * z + self.b;
                if den == ZERO {
                    Point::Infinity
                } else {
                    Point::from_float(num / den)
                }
            }
        }
    }

    /// Applies to a finite point, panicking on infinity; for test and
    /// geometry code where the image is known to be finite.
    pub fn apply_finite(&self, z: Complex64) -> Complex64 {
        self.apply(Point::Finite(z)).finite().expect("Moebius image is infinite")
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &MoebiusMap) -> MoebiusMap {
        MoebiusMap {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
    }

    pub fn inverse(&self) -> MoebiusMap {
        MoebiusMap { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    /// Rescales so that `ad - bc = 1`.
    pub fn normalized(&self) -> MoebiusMap {
        let k = self.det().sqrt().inv();
        MoebiusMap { a: self.a * k, b: self.b * k, c: self.c * k, d: self.d * k }
    }

    /// Distance from `self` to `other` as projective matrices.
    pub fn distance(&self, other: &MoebiusMap) -> f64 {
        let (x, y) = (self.normalized(), other.normalized());
        let diff = |s: f64| {
            [(x.a - y.a * s), (x.b - y.b * s), (x.c - y.c * s), (x.d - y.d * s)]
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max)
        };
        diff(1.0).min(diff(-1.0))
    }
}

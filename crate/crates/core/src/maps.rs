//! The normalized quadratic Siegel family
//! `g_c(z) = (a z^2 + lambda z) / (b z + 1)` with critical points `1` and `c`,
//! and the Moebius maps that move between its normalizations.

use std::io::Write;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fmt::sig;
use crate::moebius::MoebiusMap;
use crate::numbers::RotationNumber;
use crate::sphere::Point;

/// Parameters closer than this to 0, 1 or -1 are rejected.
pub const DEGENERACY_RADIUS: f64 = 1e-9;

/// Tolerance used when matching normalization data under a Moebius map.
const MATCH_TOL: f64 = 1e-9;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A member `g_c` of the normalized family: `g(0) = 0`, `g'(0) = lambda`,
/// `g(inf) = inf`, `g'(1) = g'(c) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticSiegelMap {
    c: Point,
    theta: RotationNumber,
    lambda: Complex64,
    a: Complex64,
    b: Complex64,
}

/// Rejects parameters within [`DEGENERACY_RADIUS`] of 0, 1 or -1.
pub fn check_parameter(c: Point) -> Result<()> {
    if let Point::Finite(z) = c {
        let near = [0.0, 1.0, -1.0].iter().any(|&e| (z - e).norm() < DEGENERACY_RADIUS);
        if near || !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::DegenerateParameter(z));
        }
    }
    Ok(())
}

/// Builds `g_c`; `c = Infinity` selects the polynomial
/// `g_inf(z) = lambda z - lambda z^2 / 2`.
pub fn make_map(c: Point, theta: &RotationNumber) -> Result<QuadraticSiegelMap> {
    QuadraticSiegelMap::new(c, theta.clone())
}

impl QuadraticSiegelMap {
    pub fn new(c: Point, theta: RotationNumber) -> Result<Self> {
        check_parameter(c)?;
        let lambda = theta.multiplier();
        let (a, b) = match c {
            Point::Infinity => (-lambda / 2.0, Complex64::new(0.0, 0.0)),
            Point::Finite(c) => (-lambda * (1.0 + c) / (2.0 * c), -2.0 / (1.0 + c)),
        };
        Ok(QuadraticSiegelMap { c, theta, lambda, a, b })
    }

    pub fn c(&self) -> Point {
        self.c
    }

    pub fn theta(&self) -> &RotationNumber {
        &self.theta
    }

    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    pub fn a(&self) -> Complex64 {
        self.a
    }

    pub fn b(&self) -> Complex64 {
        self.b
    }

    pub fn is_polynomial(&self) -> bool {
        self.c.is_infinite()
    }

    /// The finite pole `-1/b`, absent for the polynomial.
    pub fn pole(&self) -> Option<Complex64> {
        (!self.is_polynomial()).then(|| -1.0 / self.b)
    }

    /// Evaluates at a finite point, returning `None` at the pole.
    #[inline]
    pub fn eval_finite(&self, z: Complex64) -> Option<Complex64> {
        let den = self.b * z + 1.0;
        if self.is_pole_denominator(den, z) {
            return None;
        }
        let w = z * (self.a * z + self.lambda) / den;
        (w.re.is_finite() && w.im.is_finite()).then_some(w)
    }

    #[inline]
    fn is_pole_denominator(&self, den: Complex64, z: Complex64) -> bool {
        !self.is_polynomial() && den.norm() <= f64::EPSILON * (1.0 + (self.b * z).norm())
    }

    pub fn eval(&self, z: Point) -> Point {
        match z {
            Point::Infinity => Point::Infinity,
            Point::Finite(z) => self.eval_finite(z).map_or(Point::Infinity, Point::Finite),
        }
    }

    /// `g'(z) = (a b z^2 + 2 a z + lambda) / (b z + 1)^2`.
    pub fn derivative(&self, z: Complex64) -> Result<Complex64> {
        let den = self.b * z + 1.0;
        if self.is_pole_denominator(den, z) {
            return Err(Error::Pole(z));
        }
        Ok(self.critical_numerator(z) / (den * den))
    }

    /// The numerator `a b z^2 + 2 a z + lambda` of `g'`, whose roots are the
    /// critical points.
    pub fn critical_numerator(&self, z: Complex64) -> Complex64 {
        (self.a * self.b * z + 2.0 * self.a) * z + self.lambda
    }

    pub fn critical_points(&self) -> [Point; 2] {
        [Point::Finite(ONE), self.c]
    }

    /// The fixed points `{0, inf, p_c}`.
    pub fn fixed_points(&self) -> FixedPoints {
        let lambda = self.lambda;
        let third = match self.c {
            // g_inf(z) = z  <=>  z = 2 (lambda - 1) / lambda
            Point::Infinity => Point::Finite(2.0 * (lambda - 1.0) / lambda),
            Point::Finite(c) => {
                let den = 4.0 * c - lambda * (1.0 + c) * (1.0 + c);
                let scale = 4.0 * c.norm() + (1.0 + c).norm_sqr();
                if den.norm() <= 1e-12 * scale {
                    Point::Infinity
                } else {
                    Point::from_float((1.0 - lambda) * 2.0 * c * (1.0 + c) / den)
                }
            }
        };
        let coincident = match third {
            Point::Infinity => true,
            Point::Finite(p) => p.norm() < 1e-12,
        };
        FixedPoints { points: [Point::Finite(Complex64::new(0.0, 0.0)), Point::Infinity, third], coincident }
    }

    /// `z0, g(z0), ..., g^n(z0)`, stopping at the first visit to infinity.
    pub fn orbit(&self, z0: Point, n: usize) -> Result<Orbit> {
        if n == 0 {
            return Err(Error::Domain("orbit length must be >= 1".into()));
        }
        let mut points = Vec::with_capacity(n + 1);
        let mut z = z0;
        for k in 0..=n {
            points.push(z);
            if z.is_infinite() {
                return Ok(Orbit { points, hit_infinity: Some(k) });
            }
            if k < n {
                z = self.eval(z);
            }
        }
        Ok(Orbit { points, hit_infinity: None })
    }

    /// Conjugates by `m`, returning `m ∘ g ∘ m^{-1}` as a normalized map.
    ///
    /// `m` has to fix 0, send one critical point to 1 and one of the fixed
    /// points `inf`, `p_c` to infinity; the image of the other critical point
    /// becomes the new parameter.
    pub fn conjugate_by(&self, m: &MoebiusMap) -> Result<QuadraticSiegelMap> {
        let zero = Point::Finite(Complex64::new(0.0, 0.0));
        let close = |x: Point, y: Point| x.chordal_distance(&y) < MATCH_TOL;
        if !close(m.apply(zero), zero) {
            return Err(Error::NonNormalizing("0 is not fixed".into()));
        }
        let inv = m.inverse();
        let fixed = self.fixed_points();
        let to_infinity = inv.apply(Point::Infinity);
        if !(close(to_infinity, Point::Infinity) || close(to_infinity, fixed.points[2])) {
            return Err(Error::NonNormalizing("the preimage of infinity is not a fixed point".into()));
        }
        let to_one = inv.apply(Point::Finite(ONE));
        let other = if close(to_one, Point::Finite(ONE)) {
            self.c
        } else if close(to_one, self.c) {
            Point::Finite(ONE)
        } else {
            return Err(Error::NonNormalizing("the preimage of 1 is not a critical point".into()));
        };
        QuadraticSiegelMap::new(m.apply(other), self.theta.clone())
    }

    /// The Moebius map realizing one of the four normalizations.
    pub fn normalization(&self, case: Normalization) -> Result<MoebiusMap> {
        let zero = Complex64::new(0.0, 0.0);
        let p = || match self.fixed_points().points[2] {
            Point::Finite(p) if p.norm() > 1e-12 => Ok(p),
            _ => Err(Error::NonNormalizing("map has only the fixed points 0 and inf".into())),
        };
        let c = || self.c.finite().ok_or_else(|| Error::NonNormalizing("c = inf cannot be sent to 1".into()));
        match case {
            Normalization::Identity => Ok(MoebiusMap::identity()),
            // phi(z) = (1 - p) z / (z - p)
            Normalization::FixOne => {
                let p = p()?;
                MoebiusMap::new(1.0 - p, zero, ONE, -p)
            }
            // psi(z) = z / c
            Normalization::ScaleByCritical => MoebiusMap::scaling(c()?.inv()),
            // phi(0) = 0, phi(c) = 1, phi(p) = inf
            Normalization::CriticalToOne => {
                let (p, c) = (p()?, c()?);
                MoebiusMap::new((c - p) / c, zero, ONE, -p)
            }
        }
    }
}

/// The four normalizing conjugations of a map with three fixed points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// `phi = id`.
    Identity,
    /// `phi(0) = 0`, `phi(1) = 1`, `phi(p) = inf`.
    FixOne,
    /// `phi(z) = z / c`.
    ScaleByCritical,
    /// `phi(0) = 0`, `phi(c) = 1`, `phi(p) = inf`.
    CriticalToOne,
}

impl Normalization {
    pub const ALL: [Normalization; 4] =
        [Normalization::Identity, Normalization::FixOne, Normalization::ScaleByCritical, Normalization::CriticalToOne];
}

/// The parameter of the map obtained by the `FixOne` conjugation:
/// `c~ = ((lambda - 2) c + lambda) / (-lambda c + 2 - lambda)`.
pub fn tilde_parameter(c: Complex64, lambda: Complex64) -> Point {
    let den = -lambda * c + 2.0 - lambda;
    if den.norm() == 0.0 {
        return Point::Infinity;
    }
    Point::from_float(((lambda - 2.0) * c + lambda) / den)
}

/// `mu(c) = 1 / c~(c)`, an involution of parameter space.
pub fn swap_parameter(c: Complex64, lambda: Complex64) -> Point {
    let num = -lambda * c + 2.0 - lambda;
    let den = (lambda - 2.0) * c + lambda;
    if den.norm() == 0.0 {
        return Point::Infinity;
    }
    Point::from_float(num / den)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixedPoints {
    /// `[0, inf, p_c]`.
    pub points: [Point; 3],
    /// Set when `p_c` numerically collides with 0 or infinity.
    pub coincident: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Orbit {
    pub points: Vec<Point>,
    /// Index of the first iterate equal to infinity.
    pub hit_infinity: Option<usize>,
}

impl Orbit {
    /// Writes `index,re,im` rows; infinity is written as `inf,inf`.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> Result<()> {
        writeln!(out, "index,re,im")?;
        for (k, z) in self.points.iter().enumerate() {
            match z {
                Point::Finite(z) => writeln!(out, "{},{},{}", k, sig(z.re), sig(z.im))?,
                Point::Infinity => writeln!(out, "{k},inf,inf")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn golden() -> RotationNumber {
        RotationNumber::golden()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn map(re: f64, im: f64) -> QuadraticSiegelMap {
        make_map(Point::new(re, im), &golden()).unwrap()
    }

    #[test]
    fn polynomial_limit() {
        let g = make_map(Point::Infinity, &golden()).unwrap();
        let lambda = golden().multiplier();
        let z = c(0.3, -0.7);
        let expected = lambda * z - lambda * z * z / 2.0;
        assert!((g.eval_finite(z).unwrap() - expected).norm() < 1e-15);
        assert_eq!(g.b(), c(0.0, 0.0));
    }

    #[test]
    fn coefficients_for_c_equal_two() {
        let g = map(2.0, 0.0);
        let lambda = golden().multiplier();
        assert!((g.a() - (-3.0 * lambda / 4.0)).norm() < 1e-15);
        assert!((g.b() - c(-2.0 / 3.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn excluded_parameters() {
        for bad in [0.0, 1.0, -1.0, 1.0 + 1e-10] {
            assert!(matches!(make_map(Point::new(bad, 0.0), &golden()), Err(Error::DegenerateParameter(_))));
        }
        assert!(make_map(Point::new(1.0 + 1e-6, 0.0), &golden()).is_ok());
    }

    #[test]
    fn eval_special_points() {
        let g = map(2.0, 1.0);
        assert_eq!(g.eval(Point::new(0.0, 0.0)), Point::new(0.0, 0.0));
        assert_eq!(g.eval(Point::Infinity), Point::Infinity);
        assert_eq!(g.eval(Point::Finite(g.pole().unwrap())), Point::Infinity);
        assert!(g.derivative(g.pole().unwrap()).is_err());
    }

    #[test]
    fn derivative_at_fixed_and_critical_points() {
        for (re, im) in [(2.0, 0.0), (3.0, 1.0), (-0.4, 0.9), (0.2, -0.1)] {
            let g = map(re, im);
            assert!((g.derivative(c(0.0, 0.0)).unwrap() - g.lambda()).norm() < 1e-15);
            assert!(g.derivative(c(1.0, 0.0)).unwrap().norm() < 1e-12);
            assert!(g.derivative(c(re, im)).unwrap().norm() < 1e-12);
            // a(b + 2) + lambda = 0
            assert!((g.a() * (g.b() + 2.0) + g.lambda()).norm() < 1e-12);
        }
    }

    #[test]
    fn fixed_point_formula() {
        let g = map(2.0, 0.0);
        let p = g.fixed_points().points[2].finite().unwrap();
        assert!((g.eval_finite(p).unwrap() - p).norm() < 1e-10);
        // quadratic-formula oracle: z((a - b) z + lambda - 1) = 0
        let root = (1.0 - g.lambda()) / (g.a() - g.b());
        assert!((p - root).norm() < 1e-12);
        let g = make_map(Point::Infinity, &golden()).unwrap();
        let p = g.fixed_points().points[2].finite().unwrap();
        assert!((g.eval_finite(p).unwrap() - p).norm() < 1e-12);
    }

    #[test]
    fn fixed_point_degenerates_near_minus_one() {
        let mut last = f64::INFINITY;
        for eps in [1e-2, 1e-4, 1e-6, 1e-8] {
            let g = map(-1.0 + eps, eps);
            let p = g.fixed_points().points[2].finite().unwrap();
            assert!(p.norm() < last);
            last = p.norm();
        }
        assert!(last < 1e-7);
    }

    #[test]
    fn orbit_edge_cases() {
        let g = map(2.0, 0.0);
        let o = g.orbit(Point::new(0.0, 0.0), 5).unwrap();
        assert_eq!(o.points, vec![Point::new(0.0, 0.0); 6]);
        assert_eq!(o.hit_infinity, None);
        let o = g.orbit(Point::Infinity, 5).unwrap();
        assert_eq!(o.points, vec![Point::Infinity]);
        assert_eq!(o.hit_infinity, Some(0));
        assert!(g.orbit(Point::new(1.0, 0.0), 0).is_err());
    }

    #[test]
    fn polynomial_orbit_by_hand() {
        let g = make_map(Point::Infinity, &golden()).unwrap();
        let lambda = golden().multiplier();
        let step = |z: Complex64| lambda * z - lambda * z * z / 2.0;
        let z1 = lambda / 2.0;
        let z2 = step(z1);
        let z3 = step(z2);
        let o = g.orbit(Point::new(1.0, 0.0), 3).unwrap();
        for (got, want) in o.points[1..].iter().zip([z1, z2, z3]) {
            assert!((got.finite().unwrap() - want).norm() < 1e-15);
        }
    }

    #[test]
    fn orbit_csv_writes_infinity_literally() {
        let o = Orbit { points: vec![Point::new(1.0, -0.5), Point::Infinity], hit_infinity: Some(1) };
        let mut buf = Vec::new();
        o.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "index,re,im\n0,1,-0.5\n1,inf,inf\n");
    }

    #[test]
    fn identity_conjugation() {
        let g = map(2.0, 0.5);
        let h = g.conjugate_by(&MoebiusMap::identity()).unwrap();
        assert_eq!(h, g);
    }

    #[test]
    fn tilde_formula_matches_fix_one_conjugation() {
        for (re, im) in [(2.0, 0.0), (3.0, 1.0), (-0.5, 2.0), (0.3, 0.2)] {
            let g = map(re, im);
            let m = g.normalization(Normalization::FixOne).unwrap();
            let h = g.conjugate_by(&m).unwrap();
            let want = tilde_parameter(c(re, im), g.lambda()).finite().unwrap();
            assert!((h.c().finite().unwrap() - want).norm() < 1e-9 * (1.0 + want.norm()));
        }
    }

    #[test]
    fn all_normalizations_produce_conjugate_maps() {
        let g = map(1.5, 0.7);
        for case in Normalization::ALL {
            let m = g.normalization(case).unwrap();
            let h = g.conjugate_by(&m).unwrap();
            // check m ∘ g = h ∘ m at a few points
            for z in [c(0.1, 0.2), c(-0.3, 0.05), c(0.4, -0.4)] {
                let lhs = m.apply(g.eval(z.into()));
                let rhs = h.eval(m.apply(z.into()));
                assert!(lhs.chordal_distance(&rhs) < 1e-9, "{case:?}");
            }
        }
        let psi = g.normalization(Normalization::ScaleByCritical).unwrap();
        let h = g.conjugate_by(&psi).unwrap();
        assert!((h.c().finite().unwrap() - c(1.5, 0.7).inv()).norm() < 1e-12);
    }

    #[test]
    fn non_normalizing_map_is_rejected() {
        let g = map(2.0, 0.0);
        let shift = MoebiusMap::new(c(1.0, 0.0), c(0.5, 0.0), c(0.0, 0.0), c(1.0, 0.0)).unwrap();
        assert!(matches!(g.conjugate_by(&shift), Err(Error::NonNormalizing(_))));
        let scale = MoebiusMap::scaling(c(3.0, 0.0)).unwrap();
        assert!(matches!(g.conjugate_by(&scale), Err(Error::NonNormalizing(_))));
    }

    #[test]
    fn swap_parameter_is_an_involution() {
        let lambda = golden().multiplier();
        for (re, im) in [(2.0, 0.0), (0.3, -1.2), (-4.0, 0.5)] {
            let once = swap_parameter(c(re, im), lambda).finite().unwrap();
            let twice = swap_parameter(once, lambda).finite().unwrap();
            assert!((twice - c(re, im)).norm() < 1e-10);
        }
    }

    fn param() -> impl Strategy<Value = Complex64> {
        (-5.0f64..5.0, -5.0f64..5.0)
            .prop_map(|(re, im)| c(re, im))
            .prop_filter("away from 0, 1, -1", |z| [0.0, 1.0, -1.0].iter().all(|&e| (z - e).norm() > 1e-3))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn eval_matches_closed_form(cc in param(), zr in -3.0f64..3.0, zi in -3.0f64..3.0) {
            let g = make_map(cc.into(), &golden()).unwrap();
            let lambda = g.lambda();
            let z = c(zr, zi);
            // Horner on the explicit numerator and denominator in terms of c
            let num = (-lambda * (1.0 + cc) * (1.0 + cc) * z + 2.0 * lambda * cc * (1.0 + cc)) * z;
            let den = -4.0 * cc * z + 2.0 * cc * (1.0 + cc);
            prop_assume!(den.norm() > 1e-6 * (1.0 + cc.norm_sqr()));
            let want = num / den;
            let got = g.eval_finite(z).unwrap();
            prop_assert!((got - want).norm() <= 1e-12 * want.norm().max(1.0));
        }

        #[test]
        fn derivative_matches_central_differences(cc in param(), zr in -2.0f64..2.0, zi in -2.0f64..2.0) {
            let g = make_map(cc.into(), &golden()).unwrap();
            let z = c(zr, zi);
            prop_assume!((g.b() * z + 1.0).norm() > 0.05);
            let h = 1e-6;
            let fd = (g.eval_finite(z + h).unwrap() - g.eval_finite(z - h).unwrap()) / (2.0 * h);
            let d = g.derivative(z).unwrap();
            prop_assert!((fd - d).norm() <= 1e-5 * d.norm().max(1.0));
        }

        #[test]
        fn critical_points_solve_the_quadratic(cc in param()) {
            let g = make_map(cc.into(), &golden()).unwrap();
            prop_assert!(g.critical_numerator(c(1.0, 0.0)).norm() < 1e-12);
            prop_assert!(g.critical_numerator(cc).norm() < 1e-12 * cc.norm().max(1.0));
        }

        #[test]
        fn fixed_point_is_fixed(cc in param()) {
            let g = make_map(cc.into(), &golden()).unwrap();
            let fp = g.fixed_points();
            prop_assume!(!fp.coincident);
            let p = fp.points[2].finite().unwrap();
            prop_assume!(p.norm() < 1e6);
            let gp = g.eval_finite(p).unwrap();
            prop_assert!((gp - p).norm() < 1e-10 * p.norm().max(1.0));
        }
    }
}

//! Symmetric degree-3 Blaschke products
//! `B(z) = e^{it} z (z - p)/(1 - conj(p) z) (z - q)/(1 - conj(q) z)`
//! with `|p| > 1 > |q|`, and their parameterization by the free critical
//! point `c`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::sphere::Point;

/// `|t|^2 - 1` below this magnitude is treated as lying on the curve `gamma`.
const GAMMA_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlaschkeProduct {
    p: Complex64,
    q: Complex64,
    prefactor_angle: f64,
}

impl BlaschkeProduct {
    /// Requires `|p| > 1 > |q|`.
    pub fn new(p: Complex64, q: Complex64) -> Result<Self> {
        if !(p.norm() > 1.0 && q.norm() < 1.0) {
            return Err(Error::Labeling { p_abs: p.norm(), q_abs: q.norm() });
        }
        Ok(BlaschkeProduct { p, q, prefactor_angle: 0.0 })
    }

    /// Same product multiplied by `e^{it}`, `t` reduced to `[0, 2 pi)`.
    pub fn with_prefactor(&self, t: f64) -> Self {
        BlaschkeProduct { prefactor_angle: t.rem_euclid(TAU), ..*self }
    }

    pub fn p(&self) -> Complex64 {
        self.p
    }

    pub fn q(&self) -> Complex64 {
        self.q
    }

    pub fn prefactor_angle(&self) -> f64 {
        self.prefactor_angle
    }

    pub fn eval(&self, z: Point) -> Point {
        let Point::Finite(z) = z else {
            return Point::Infinity;
        };
        let den_p = 1.0 - self.p.conj() * z;
        let den_q = 1.0 - self.q.conj() * z;
        if den_p == Complex64::new(0.0, 0.0) || den_q == Complex64::new(0.0, 0.0) {
            return Point::Infinity;
        }
        let rot = Complex64::from_polar(1.0, self.prefactor_angle);
        Point::from_float(rot * z * (z - self.p) / den_p * (z - self.q) / den_q)
    }

    /// `T'(alpha)` where `B(e^{i alpha}) = e^{i T(alpha)}`.
    pub fn circle_derivative(&self, alpha: f64) -> f64 {
        let e = Complex64::from_polar(1.0, alpha);
        let kernel = |a: Complex64| (1.0 - a.norm_sqr()) / (1.0 - a.conj() * e).norm_sqr();
        1.0 + kernel(self.q) + kernel(self.p)
    }

    /// The continuous lift `F` of the circle map: `B(e^{ix}) = e^{i F(x)}`
    /// with `F(x + 2 pi) = F(x) + 2 pi`.
    ///
    /// Writes `B(z)/z` as a product of factors whose principal arguments
    /// stay in `(-pi/2, pi/2)` on the circle, so no branch tracking is needed.
    #[inline]
    pub fn lift(&self, x: f64) -> f64 {
        let (s, c) = x.sin_cos();
        let e = Complex64::new(c, s);
        let outer = 1.0 - e / self.p;
        let inner = 1.0 - self.q * e.conj();
        x + self.prefactor_angle + 2.0 * (self.p.arg() + outer.arg() + inner.arg())
    }

    /// `T''(alpha)`.
    pub fn circle_second_derivative(&self, alpha: f64) -> f64 {
        let e = Complex64::from_polar(1.0, alpha);
        let term = |a: Complex64| {
            // |1 - conj(a) e|^2 = 1 - 2 Re(conj(a) e) + |a|^2
            let den = (1.0 - a.conj() * e).norm_sqr();
            let dden = 2.0 * (a.conj() * e).im;
            -(1.0 - a.norm_sqr()) * dden / (den * den)
        };
        term(self.q) + term(self.p)
    }

    /// Minimum of `T'` over `samples` equally spaced angles and where it occurs.
    pub fn min_circle_derivative(&self, samples: usize) -> (f64, f64) {
        (0..samples.max(1))
            .map(|k| {
                let alpha = TAU * k as f64 / samples.max(1) as f64;
                (self.circle_derivative(alpha), alpha)
            })
            .fold((f64::INFINITY, 0.0), |best, x| if x.0 < best.0 { x } else { best })
    }

    /// Trapezoid rule for `int_0^{2 pi} T'`; spectrally accurate for this
    /// periodic analytic integrand.
    pub fn circle_derivative_integral(&self, samples: usize) -> f64 {
        let h = TAU / samples as f64;
        (0..samples).map(|k| self.circle_derivative(h * k as f64)).sum::<f64>() * h
    }

    /// Checks that the circle restriction is an orientation-preserving
    /// homeomorphism: `T' >= 0` up to rounding.
    pub fn check_homeomorphism(&self) -> Result<()> {
        let (min, _) = self.min_circle_derivative(4096);
        if min < -1e-10 {
            return Err(Error::NotHomeomorphism { min_derivative: min });
        }
        Ok(())
    }

    /// Numerator of `B'`:
    /// `conj(v) z^4 - 2 conj(w) z^3 + (3 + |w|^2 - |v|^2) z^2 - 2 w z + v`
    /// with `w = p + q`, `v = p q`.
    pub fn critical_numerator(&self) -> Poly {
        let w = self.p + self.q;
        let v = self.p * self.q;
        Poly::new(vec![v, -2.0 * w, Complex64::new(3.0 + w.norm_sqr() - v.norm_sqr(), 0.0), -2.0 * w.conj(), v.conj()])
    }
}

/// `t = (2 + c + 1/conj(c)) / 2`.
pub fn half_trace(c: Complex64) -> Complex64 {
    (2.0 + c + c.conj().inv()) / 2.0
}

/// `s = 1 + c/conj(c) + 2 (c + 1/conj(c))`.
pub fn s_coefficient(c: Complex64) -> Complex64 {
    1.0 + c / c.conj() + 2.0 * (c + c.conj().inv())
}

/// Coefficient data for the critical point `c` on a chosen branch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalData {
    pub c: Complex64,
    pub t_half: Complex64,
    pub s: Complex64,
    /// `p q`
    pub v: Complex64,
    /// `p + q`
    pub w: Complex64,
}

/// Which closed-form solution of the quadratic for `|v|` a branch uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Branch {
    /// `|t| > 1`, smaller root, `v` along `c`.
    D1,
    /// `|t| > 1`, larger root, `v` along `c`; the branch realizing the family.
    D2,
    /// `|t| < 1`, `v` along `-c`.
    D3,
    /// `|t| < 1`, `v` along `c`.
    D4,
    /// `|t| = 1`: the equation degenerates to `-|s| |v| + 3 = 0`.
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BranchSolution {
    pub branch: Branch,
    pub v: Complex64,
    pub w: Complex64,
    /// Roots of `x^2 - w x + v`, larger modulus first.
    pub roots: [Complex64; 2],
}

impl BranchSolution {
    fn new(branch: Branch, c: Complex64, abs_v: f64, along_c: bool) -> Self {
        let dir = c / c.norm();
        let v = if along_c { dir * abs_v } else { -dir * abs_v };
        let w = half_trace(c).conj() * v;
        BranchSolution { branch, v, w, roots: vieta_roots(w, v) }
    }

    pub fn critical_data(&self, c: Complex64) -> CriticalData {
        CriticalData { c, t_half: half_trace(c), s: s_coefficient(c), v: self.v, w: self.w }
    }
}

/// Roots of `x^2 - w x + v`, larger modulus first.
fn vieta_roots(w: Complex64, v: Complex64) -> [Complex64; 2] {
    let sq = (w * w - 4.0 * v).sqrt();
    let (plus, minus) = ((w + sq) / 2.0, (w - sq) / 2.0);
    let big = if plus.norm() >= minus.norm() { plus } else { minus };
    let small = if big == Complex64::new(0.0, 0.0) { big } else { v / big };
    [big, small]
}

/// Every admissible positive solution for `|v|` and its quadratic roots.
pub fn all_branches(c: Complex64) -> Result<Vec<BranchSolution>> {
    if c.norm() <= 1.0 {
        return Err(Error::Domain(format!("|c| = {} must exceed 1", c.norm())));
    }
    let tt = half_trace(c).norm_sqr() - 1.0;
    let s = s_coefficient(c).norm();
    let disc = (s * s - 12.0 * tt).max(0.0).sqrt();
    // (s - disc) / (2 tt) rewritten without cancellation
    let small_root = 6.0 / (s + disc);
    let out = if tt.abs() <= GAMMA_TOL {
        vec![BranchSolution::new(Branch::Linear, c, 3.0 / s, true)]
    } else if tt > 0.0 {
        vec![
            BranchSolution::new(Branch::D1, c, small_root, true),
            BranchSolution::new(Branch::D2, c, (s + disc) / (2.0 * tt), true),
        ]
    } else {
        vec![
            BranchSolution::new(Branch::D3, c, (s + disc) / (-2.0 * tt), false),
            BranchSolution::new(Branch::D4, c, small_root, true),
        ]
    };
    Ok(out)
}

/// True iff `c` lies in the component `U` of the complement of `gamma`
/// containing `2` and infinity, i.e. `|t| > 1`.
pub fn in_region_u(c: Point) -> Result<bool> {
    match c {
        Point::Infinity => Ok(true),
        Point::Finite(c) if c.norm() <= 1.0 => Err(Error::Domain(format!("|c| = {} must exceed 1", c.norm()))),
        Point::Finite(c) => Ok(half_trace(c).norm() > 1.0),
    }
}

/// The member of the family with free critical point `c` (prefactor 0).
pub fn phi_inverse(c: Point) -> Result<BlaschkeProduct> {
    Ok(phi_inverse_with_data(c)?.0)
}

/// [`phi_inverse`] together with the coefficient data (absent for `c = inf`).
pub fn phi_inverse_with_data(c: Point) -> Result<(BlaschkeProduct, Option<CriticalData>)> {
    let c = match c {
        Point::Infinity => {
            let b = BlaschkeProduct::new(Complex64::new(3.0, 0.0), Complex64::new(0.0, 0.0))?;
            return Ok((b, None));
        }
        Point::Finite(c) => c,
    };
    if !in_region_u(c.into())? {
        return Err(Error::OutsideRegion(c));
    }
    let sol = all_branches(c)?.into_iter().find(|b| b.branch == Branch::D2).ok_or(Error::OutsideRegion(c))?;
    let [p, q] = sol.roots;
    Ok((BlaschkeProduct::new(p, q)?, Some(sol.critical_data(c))))
}

/// Samples of `gamma = { r e^{it} : r + 1/r + 4 cos t = 0, r > 1 }`,
/// `t` strictly inside `(2 pi/3, 4 pi/3)`.
pub fn gamma_curve(n: usize) -> Result<Vec<Complex64>> {
    if n < 2 {
        return Err(Error::Domain("gamma_curve needs n >= 2".into()));
    }
    let (lo, width) = (2.0 * PI / 3.0, 2.0 * PI / 3.0);
    Ok((0..n)
        .map(|k| {
            let t = lo + width * (k + 1) as f64 / (n + 1) as f64;
            let cos = t.cos();
            let r = -2.0 * cos + (4.0 * cos * cos - 1.0).sqrt();
            Complex64::from_polar(r, t)
        })
        .collect())
}

/// Outcome of [`verify_critical_points`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalReport {
    /// The refined double critical point (expected at 1).
    pub double_root: Complex64,
    /// Simple roots of the numerator; infinity when the degree drops.
    pub simple_roots: Vec<Point>,
    /// Largest deviation from `{1, 1, c, 1/conj(c)}`, relative to
    /// `max(1, |root|)`.
    pub max_residual: f64,
}

/// Finds the critical points of `b` from the quartic numerator of `B'` and
/// compares them with `{1 (double), c, 1/conj(c)}`.
pub fn verify_critical_points(b: &BlaschkeProduct, c: Point) -> CriticalReport {
    let num = b.critical_numerator();
    let roots = critical_roots(&num);
    let (double_root, simple) = roots;
    let expected: Vec<Point> = match c {
        Point::Infinity => vec![Point::Infinity, Point::Finite(Complex64::new(0.0, 0.0))],
        Point::Finite(c) => vec![Point::Finite(c), Point::Finite(c.conj().inv())],
    };
    let mut residual = (double_root - 1.0).norm();
    for e in &expected {
        let best = simple.iter().map(|r| root_distance(r, e)).fold(f64::INFINITY, f64::min);
        residual = residual.max(best);
    }
    CriticalReport { double_root, simple_roots: simple, max_residual: residual }
}

/// The free critical point outside the disk: the largest-modulus simple root.
pub fn free_critical_point(b: &BlaschkeProduct) -> Point {
    let (_, simple) = critical_roots(&b.critical_numerator());
    simple.into_iter().max_by(|x, y| modulus(x).total_cmp(&modulus(y))).unwrap_or(Point::Infinity)
}

fn modulus(z: &Point) -> f64 {
    z.finite().map_or(f64::INFINITY, |z| z.norm())
}

fn root_distance(a: &Point, b: &Point) -> f64 {
    match (a, b) {
        (Point::Infinity, Point::Infinity) => 0.0,
        (Point::Finite(a), Point::Finite(b)) => (a - b).norm() / a.norm().max(b.norm()).max(1.0),
        _ => f64::INFINITY,
    }
}

/// Splits the roots of the numerator into the double root near 1 and the
/// simple ones. The double root is refined as a simple root of the
/// derivative, which keeps full precision.
fn critical_roots(num: &Poly) -> (Complex64, Vec<Point>) {
    // q = 0 drops the degree; the missing roots sit at infinity
    let coeffs = num.coeffs();
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut len = coeffs.len();
    while len > 3 && coeffs[len - 1].norm() <= 1e-14 * scale {
        len -= 1;
    }
    let trimmed = Poly::new(coeffs[..len].to_vec());
    let mut roots = trimmed.roots();
    roots.sort_by(|x, y| (x - 1.0).norm().total_cmp(&(y - 1.0).norm()));
    let cluster = (roots[0] + roots[1]) / 2.0;
    let double_root = trimmed.derivative().newton(cluster, 50);
    let mut simple: Vec<Point> = roots[2..].iter().map(|&r| Point::Finite(trimmed.newton(r, 50))).collect();
    simple.extend(std::iter::repeat_n(Point::Infinity, 4 - trimmed.degree()));
    (double_root, simple)
}

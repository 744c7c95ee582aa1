//! Approximations of the Siegel-disk boundary as the closure of the orbit of
//! the critical point 1, cross ratios along it, and inner angles.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::maps::make_map;
use crate::numbers::RotationNumber;
use crate::sphere::Point;

/// Orbit points beyond this modulus count as escaped.
pub const ESCAPE_RADIUS: f64 = 1e6;

/// Two orbit points closer than this are treated as a periodic orbit.
pub const COLLISION_RADIUS: f64 = 1e-12;

/// Parameters within this distance of `1` or `-1` take the rotation limit in
/// [`lambda_fn`].
pub const LIMIT_RADIUS: f64 = 1e-9;

/// Orbit `g_c^k(1)` for `k < N`, labeled by the internal angle `{k theta}`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCurve {
    c: Point,
    theta: f64,
    points: Vec<Complex64>,
    angles: Vec<f64>,
    by_angle: Vec<usize>,
}

impl BoundaryCurve {
    /// Builds a curve from points already ordered by orbit index.
    pub fn from_orbit(c: Point, theta: f64, points: Vec<Complex64>) -> Self {
        let angles: Vec<f64> = (0..points.len()).map(|k| internal_angle(k, theta)).collect();
        let mut by_angle: Vec<usize> = (0..points.len()).collect();
        by_angle.sort_by(|&i, &j| angles[i].total_cmp(&angles[j]));
        BoundaryCurve { c, theta, points, angles, by_angle }
    }

    /// Builds a curve from arbitrary `(angle, point)` samples, e.g. a
    /// synthetic test curve. The orbit index is the input position.
    pub fn from_samples(samples: &[(f64, Complex64)]) -> Self {
        let points: Vec<Complex64> = samples.iter().map(|s| s.1).collect();
        let angles: Vec<f64> = samples.iter().map(|s| s.0.rem_euclid(1.0)).collect();
        let mut by_angle: Vec<usize> = (0..points.len()).collect();
        by_angle.sort_by(|&i, &j| angles[i].total_cmp(&angles[j]));
        BoundaryCurve { c: Point::Infinity, theta: f64::NAN, points, angles, by_angle }
    }

    pub fn c(&self) -> Point {
        self.c
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `g_c^k(1)`.
    pub fn point(&self, k: usize) -> Complex64 {
        self.points[k]
    }

    pub fn angle(&self, k: usize) -> f64 {
        self.angles[k]
    }

    /// Orbit points in orbit order.
    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    /// Orbit indices sorted by internal angle.
    pub fn by_angle(&self) -> &[usize] {
        &self.by_angle
    }

    /// `(angle, point)` pairs sorted by angle.
    pub fn samples(&self) -> impl Iterator<Item = (f64, Complex64)> + '_ {
        self.by_angle.iter().map(|&k| (self.angles[k], self.points[k]))
    }

    /// Smallest modulus over the samples.
    pub fn min_modulus(&self) -> f64 {
        self.points.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min)
    }

    /// Orbit index and distance of the sample nearest to `z`.
    pub fn nearest(&self, z: Complex64) -> Option<(usize, f64)> {
        self.points.iter().enumerate().map(|(k, p)| (k, (p - z).norm())).min_by(|a, b| a.1.total_cmp(&b.1))
    }

    /// Largest distance from sample `k` to its two angular neighbours.
    pub fn local_spacing(&self, k: usize) -> f64 {
        let n = self.by_angle.len();
        if n < 2 {
            return 0.0;
        }
        let pos = self.by_angle.iter().position(|&j| j == k).expect("index in curve");
        let prev = self.by_angle[(pos + n - 1) % n];
        let next = self.by_angle[(pos + 1) % n];
        let z = self.points[k];
        (self.points[prev] - z).norm().max((self.points[next] - z).norm())
    }
}

/// `{k theta}`, computed without forming a large product first.
fn internal_angle(k: usize, theta: f64) -> f64 {
    let whole = k as f64 * theta;
    (whole - whole.floor()).rem_euclid(1.0)
}

/// Iterates `g_c` on the critical point 1 `n` times, labeling `g_c^k(1)` by
/// the internal angle `{k theta}`.
pub fn boundary_orbit(c: Point, theta: &RotationNumber, n: usize) -> Result<BoundaryCurve> {
    if n == 0 {
        return Err(Error::Domain("boundary orbit needs at least one point".into()));
    }
    let g = make_map(c, theta)?;
    let mut points = Vec::with_capacity(n);
    let mut z = Complex64::new(1.0, 0.0);
    for k in 0..n {
        if z.norm().is_nan() || z.norm() > ESCAPE_RADIUS {
            return Err(Error::Escape { iterate: k });
        }
        points.push(z);
        if k + 1 < n {
            z = g.eval_finite(z).ok_or(Error::Escape { iterate: k + 1 })?;
        }
    }
    check_collisions(&points)?;
    Ok(BoundaryCurve::from_orbit(c, theta.value(), points))
}

fn check_collisions(points: &[Complex64]) -> Result<()> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&i, &j| points[i].re.total_cmp(&points[j].re));
    for (a, &i) in order.iter().enumerate() {
        for &j in &order[a + 1..] {
            if points[j].re - points[i].re > COLLISION_RADIUS {
                break;
            }
            if (points[j] - points[i]).norm() <= COLLISION_RADIUS {
                return Err(Error::FiniteOrbit { first: i.min(j), second: i.max(j) });
            }
        }
    }
    Ok(())
}

/// `((z1 - z3)(z2 - z4)) / ((z2 - z3)(z1 - z4))`.
pub fn cross_ratio(z1: Complex64, z2: Complex64, z3: Complex64, z4: Complex64) -> Result<Complex64> {
    let zs = [z1, z2, z3, z4];
    let scale = zs.iter().map(|z| z.norm()).fold(1.0, f64::max);
    for i in 0..4 {
        for j in i + 1..4 {
            if (zs[i] - zs[j]).norm() <= f64::EPSILON * scale {
                return Err(Error::CoincidentPoints);
            }
        }
    }
    Ok(((z1 - z3) * (z2 - z4)) / ((z2 - z3) * (z1 - z4)))
}

/// Cross ratio of the rotation orbit `e^{2 pi i k theta}` at four indices.
pub fn alpha(theta: f64, idx: [usize; 4]) -> Result<Complex64> {
    let e = |k: usize| Complex64::from_polar(1.0, TAU * internal_angle(k, theta));
    cross_ratio(e(idx[0]), e(idx[1]), e(idx[2]), e(idx[3]))
}

/// `lambda_{k,l,m,n}(c)`: the cross ratio of four points on the critical
/// orbit. At `c = +-1` the map degenerates to the rotation and the limit
/// value [`alpha`] is returned.
pub fn lambda_fn(c: Point, theta: &RotationNumber, idx: [usize; 4]) -> Result<Complex64> {
    if !idx.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::Domain(format!("indices {idx:?} must be strictly increasing")));
    }
    if let Point::Finite(z) = c {
        if (z - 1.0).norm() <= LIMIT_RADIUS || (z + 1.0).norm() <= LIMIT_RADIUS {
            return alpha(theta.value(), idx);
        }
    }
    let curve = boundary_orbit(c, theta, idx[3] + 1)?;
    let [k, l, m, n] = idx.map(|i| curve.point(i));
    cross_ratio(k, l, m, n)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossRatioReport {
    pub min_abs: f64,
    /// Orbit indices of the minimizing quadruple, in angular order.
    pub arg_quadruple: [usize; 4],
    pub quadruples_tested: usize,
}

/// Minimum `|cross ratio|` over `trials` random quadruples taken in the
/// circular order of the internal angles.
pub fn quasicircle_delta(curve: &BoundaryCurve, trials: usize, seed: u64) -> Result<CrossRatioReport> {
    let n = curve.len();
    if n < 4 {
        return Err(Error::Domain(format!("need at least 4 samples, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let order = curve.by_angle();
    let mut best = CrossRatioReport { min_abs: f64::INFINITY, arg_quadruple: [0; 4], quadruples_tested: 0 };
    for _ in 0..trials {
        let mut pos = sample(&mut rng, n, 4).into_vec();
        pos.sort_unstable();
        let quad = [order[pos[0]], order[pos[1]], order[pos[2]], order[pos[3]]];
        let [a, b, c, d] = quad.map(|k| curve.point(k));
        let Ok(cr) = cross_ratio(a, b, c, d) else {
            continue;
        };
        best.quadruples_tested += 1;
        if cr.norm() < best.min_abs {
            best.min_abs = cr.norm();
            best.arg_quadruple = quad;
        }
    }
    Ok(best)
}

/// Internal angle of the sample nearest to `z`, when `z` is within three
/// local sample spacings of the curve.
pub fn nearest_angle(curve: &BoundaryCurve, z: Complex64) -> Option<f64> {
    let (k, dist) = curve.nearest(z)?;
    (dist <= 3.0 * curve.local_spacing(k)).then(|| curve.angle(k))
}

/// Internal angle of the second critical point `c` on the boundary curve, if
/// `c` lies on it to sampling resolution.
pub fn inner_angle(c: Point, theta: &RotationNumber, n: usize) -> Result<Option<f64>> {
    let curve = boundary_orbit(c, theta, n)?;
    Ok(c.finite().and_then(|z| nearest_angle(&curve, z)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct XiSample {
    pub c: Point,
    /// `d(c, gamma_c)`; infinite for `c = inf`.
    pub distance: f64,
    /// Set when the distance is a surrogate rather than a measurement.
    pub flagged: bool,
    pub error: Option<String>,
}

/// Distance from each parameter `c` to its own sampled boundary curve.
/// Failures are recorded per parameter.
pub fn xi_scan(grid: &[Point], theta: &RotationNumber, n: usize) -> Vec<XiSample> {
    grid.par_iter()
        .map(|&c| match c {
            Point::Infinity => XiSample { c, distance: f64::INFINITY, flagged: true, error: None },
            Point::Finite(z) => match boundary_orbit(c, theta, n) {
                Ok(curve) => {
                    let distance = curve.nearest(z).map_or(f64::INFINITY, |(_, d)| d);
                    XiSample { c, distance, flagged: false, error: None }
                }
                Err(e) => XiSample { c, distance: f64::NAN, flagged: true, error: Some(e.to_string()) },
            },
        })
        .collect()
}

//! Rotation numbers of circle homeomorphisms, tuning of the Blaschke
//! prefactor to a target rotation number, and closest-return comparability
//! diagnostics.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use crate::blaschke::BlaschkeProduct;
use crate::error::{Error, Result};
use crate::numbers::RotationNumber;

/// An orientation-preserving circle homeomorphism given by a lift
/// `F: R -> R` with `F(x + 2 pi) = F(x) + 2 pi`. Angles are in radians.
pub trait CircleMap {
    fn lift(&self, x: f64) -> f64;

    fn check_homeomorphism(&self) -> Result<()> {
        Ok(())
    }
}

impl CircleMap for BlaschkeProduct {
    #[inline]
    fn lift(&self, x: f64) -> f64 {
        BlaschkeProduct::lift(self, x)
    }

    fn check_homeomorphism(&self) -> Result<()> {
        BlaschkeProduct::check_homeomorphism(self)
    }
}

/// `z -> e^{2 pi i theta} z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidRotation {
    pub theta: f64,
}

impl CircleMap for RigidRotation {
    #[inline]
    fn lift(&self, x: f64) -> f64 {
        x + TAU * self.theta
    }
}

/// Iterates the lift `n` times from `x`, returning the reduced endpoint in
/// `[0, 2 pi)` and the total displacement. Keeping the state reduced avoids
/// evaluating trigonometric functions at huge arguments.
fn advance<M: CircleMap + ?Sized>(map: &M, x: f64, n: usize) -> (f64, f64) {
    let mut turns = 0i64;
    let start = x.rem_euclid(TAU);
    let mut y = start;
    for _ in 0..n {
        let next = map.lift(y);
        let w = (next / TAU).floor();
        turns += w as i64;
        y = next - w * TAU;
        if y >= TAU {
            y -= TAU;
            turns += 1;
        }
    }
    (y, TAU * turns as f64 + (y - start))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RotationEstimate {
    /// Rotation number reduced to `[0, 1)`.
    pub rho: f64,
    /// Unreduced value of the lift, in turns.
    pub lift_rho: f64,
    /// Rigorous bound `1/n` on `|lift_rho - rotation number of the lift|`.
    pub error_bound: f64,
    /// Map evaluations spent.
    pub iterations: u64,
}

/// Birkhoff estimate of the rotation number with one Richardson step over
/// `n` and `2n` iterates.
pub fn rotation_number<M: CircleMap + ?Sized>(map: &M, x0: f64, n: usize) -> Result<RotationEstimate> {
    map.check_homeomorphism()?;
    Ok(estimate(map, x0, n))
}

fn estimate<M: CircleMap + ?Sized>(map: &M, x0: f64, n: usize) -> RotationEstimate {
    let n = n.max(1);
    let (mid, d_n) = advance(map, x0, n);
    let (_, d_rest) = advance(map, mid, n);
    let d_2n = d_n + d_rest;
    // 2 rho_{2n} - rho_n, which is the n-step average started at F^n(x0)
    let lift_rho = 2.0 * d_2n / (TAU * 2.0 * n as f64) - d_n / (TAU * n as f64);
    RotationEstimate { rho: lift_rho.rem_euclid(1.0), lift_rho, error_bound: 1.0 / n as f64, iterations: 2 * n as u64 }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TuneOptions {
    /// Iterates for the final rotation-number measurement.
    pub n_max: usize,
    /// Maximum number of bisection steps.
    pub max_depth: usize,
    /// Points of the coarse monotonicity check.
    pub grid_points: usize,
}

impl Default for TuneOptions {
    fn default() -> Self {
        TuneOptions { n_max: 1_000_000, max_depth: 60, grid_points: 16 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TuneResult {
    /// Prefactor angle in `[0, 2 pi)`.
    pub t: f64,
    /// Rotation number of `e^{it} B` measured with `n_max` iterates.
    pub rho: f64,
    /// Total map evaluations.
    pub iterations: u64,
    /// Final bracket `[lo, hi]` around the exact prefactor.
    pub bracket: (f64, f64),
    pub bisections: usize,
}

/// Finds `t` such that `e^{it} B_{p,q}` has rotation number `theta` within
/// `tol`, using the default [`TuneOptions`].
pub fn tune_prefactor(p: Complex64, q: Complex64, theta: &RotationNumber, tol: f64) -> Result<TuneResult> {
    let b = BlaschkeProduct::new(p, q)?;
    tune_blaschke(&b, theta, tol, &TuneOptions::default())
}

/// Bisection on the prefactor. The rotation number of the lift
/// `x -> F(x) + t` is continuous and nondecreasing in `t` and gains exactly
/// one turn over `[0, 2 pi]`, so the target `theta + k` is bracketed.
/// Midpoints are classified with as few iterates as the `1/n` error bound
/// allows; only midpoints close to the target pay for `n_max` iterates.
pub fn tune_blaschke(b: &BlaschkeProduct, theta: &RotationNumber, tol: f64, opts: &TuneOptions) -> Result<TuneResult> {
    if theta.is_rational() {
        return Err(Error::Domain(format!("theta = {} is rational; tuning needs an irrational target", theta.value())));
    }
    if tol.is_nan() || tol < 1e-6 || tol < 1.0 / opts.n_max as f64 {
        return Err(Error::Domain(format!("tolerance {tol} is below the measurement floor")));
    }
    let base = b.with_prefactor(0.0);
    base.check_homeomorphism()?;
    let mut iterations = 0u64;
    let mut measure = |t: f64, n: usize| {
        let est = estimate(&Shifted { map: &base, t }, 0.0, n);
        iterations += est.iterations;
        est.lift_rho
    };

    // an already tuned product keeps its prefactor
    let current = b.prefactor_angle();
    if current != 0.0 {
        let rho = measure(current, opts.n_max).rem_euclid(1.0);
        if circle_gap(rho, theta.value()) <= tol {
            return Ok(TuneResult { t: current, rho, iterations, bracket: (current, current), bisections: 0 });
        }
    }

    check_monotone(&mut measure, opts.grid_points)?;

    let r0 = measure(0.0, opts.n_max);
    let target = theta.value() + (r0 - theta.value()).ceil();
    if (target - r0).abs() <= tol || (r0 + 1.0 - target).abs() <= tol {
        return Ok(TuneResult { t: 0.0, rho: r0.rem_euclid(1.0), iterations, bracket: (0.0, 0.0), bisections: 0 });
    }

    let levels: Vec<usize> =
        [1_000, 10_000, 100_000].into_iter().filter(|&n| n < opts.n_max).chain(std::iter::once(opts.n_max)).collect();
    let (mut lo, mut hi) = (0.0, TAU);
    for depth in 0..opts.max_depth {
        let mid = 0.5 * (lo + hi);
        for &n in &levels {
            let est = measure(mid, n);
            let err = 1.0 / n as f64;
            if n == opts.n_max && (est - target).abs() <= tol {
                return Ok(TuneResult {
                    t: mid.rem_euclid(TAU),
                    rho: est.rem_euclid(1.0),
                    iterations,
                    bracket: (lo, hi),
                    bisections: depth + 1,
                });
            }
            if est - target > err || (n == opts.n_max && est > target) {
                hi = mid;
                break;
            }
            if target - est > err || n == opts.n_max {
                lo = mid;
                break;
            }
        }
    }
    Err(Error::TuningNonConvergence { depth: opts.max_depth, lo, hi })
}

/// Distance between two rotation numbers modulo 1.
fn circle_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

struct Shifted<'a> {
    map: &'a BlaschkeProduct,
    t: f64,
}

impl CircleMap for Shifted<'_> {
    #[inline]
    fn lift(&self, x: f64) -> f64 {
        self.map.lift(x) + self.t
    }
}

/// Coarse check that the rotation number grows with the prefactor.
fn check_monotone(measure: &mut impl FnMut(f64, usize) -> f64, points: usize) -> Result<()> {
    const N: usize = 1_000;
    let slack = 2.0 / N as f64;
    let mut prev = measure(0.0, N);
    let first = prev;
    for k in 1..=points.max(1) {
        let t = TAU * k as f64 / points.max(1) as f64;
        let r = measure(t, N);
        if r < prev - slack {
            return Err(Error::NonMonotone { t });
        }
        prev = r;
    }
    if (prev - first - 1.0).abs() > slack {
        return Err(Error::NonMonotone { t: TAU });
    }
    Ok(())
}

/// Solves `F(y) = x` by bisection on the monotone lift.
pub fn inverse_lift<M: CircleMap + ?Sized>(map: &M, x: f64) -> Option<f64> {
    let guess = x - (map.lift(x) - x);
    let (mut lo, mut hi) = (guess, guess);
    let mut steps = 0;
    while map.lift(lo) > x {
        lo -= std::f64::consts::PI;
        steps += 1;
        if steps > 64 {
            return None;
        }
    }
    while map.lift(hi) < x {
        hi += std::f64::consts::PI;
        steps += 1;
        if steps > 128 {
            return None;
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if map.lift(mid) < x {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let y = 0.5 * (lo + hi);
    ((map.lift(y) - x).abs() < 1e-9).then_some(y)
}

/// Ratio statistics for one convergent index `n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparabilityRow {
    pub n: usize,
    pub q_n: u64,
    pub q_next: u64,
    /// min/max of `|G^{-q_n}(z) - z| / |G^{q_n}(z) - z|`.
    pub backward_min: f64,
    pub backward_max: f64,
    /// min/max of `|G^{q_{n+1}}(z) - z| / |G^{q_n}(z) - z|`.
    pub forward_min: f64,
    pub forward_max: f64,
    /// Samples skipped because an inverse step failed or a distance vanished.
    pub flagged: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparabilityReport {
    pub rows: Vec<ComparabilityRow>,
    /// Smallest `K` with every ratio in `[1/K, K]`; `None` for an empty report.
    pub k: Option<f64>,
    pub samples: usize,
}

/// Closest-return comparability ratios for `n = 1..=n_max` at `samples`
/// equally spaced points of the circle.
pub fn comparability_report<M: CircleMap + ?Sized>(
    map: &M,
    theta: &RotationNumber,
    n_max: usize,
    samples: usize,
) -> Result<ComparabilityReport> {
    map.check_homeomorphism()?;
    let conv = theta.convergents(n_max + 1).items;
    let rows_wanted = n_max.min(conv.len().saturating_sub(1));
    if samples == 0 || rows_wanted == 0 {
        return Ok(ComparabilityReport { rows: Vec::new(), k: None, samples });
    }
    let qs: Vec<u64> = conv.iter().map(|c| c.q).collect();
    let q_top = qs[rows_wanted] as usize;
    let q_back = qs[rows_wanted - 1] as usize;

    let mut rows: Vec<ComparabilityRow> = (0..rows_wanted)
        .map(|i| ComparabilityRow {
            n: i + 1,
            q_n: qs[i],
            q_next: qs[i + 1],
            backward_min: f64::INFINITY,
            backward_max: 0.0,
            forward_min: f64::INFINITY,
            forward_max: 0.0,
            flagged: 0,
        })
        .collect();

    let chord = |a: f64, b: f64| 2.0 * (0.5 * (a - b)).sin().abs();
    for j in 0..samples {
        let x = TAU * j as f64 / samples as f64;
        let mut forward = vec![0.0; q_top + 1];
        forward[0] = x;
        for k in 1..=q_top {
            forward[k] = map.lift(forward[k - 1]);
        }
        let mut backward = vec![Some(x); q_back + 1];
        for k in 1..=q_back {
            backward[k] = backward[k - 1].and_then(|y| inverse_lift(map, y));
        }
        for row in rows.iter_mut() {
            let (qn, qn1) = (row.q_n as usize, row.q_next as usize);
            let fwd = chord(forward[qn], x);
            let next = chord(forward[qn1], x);
            let Some(back) = backward[qn].map(|y| chord(y, x)) else {
                row.flagged += 1;
                continue;
            };
            if fwd == 0.0 {
                row.flagged += 1;
                continue;
            }
            let (r1, r2) = (back / fwd, next / fwd);
            row.backward_min = row.backward_min.min(r1);
            row.backward_max = row.backward_max.max(r1);
            row.forward_min = row.forward_min.min(r2);
            row.forward_max = row.forward_max.max(r2);
        }
    }
    let k = rows
        .iter()
        .filter(|r| r.flagged < samples)
        .flat_map(|r| [r.backward_min, r.backward_max, r.forward_min, r.forward_max])
        .map(|x| x.max(1.0 / x))
        .fold(None, |acc: Option<f64>, x| Some(acc.map_or(x, |a| a.max(x))));
    Ok(ComparabilityReport { rows, k, samples })
}

/// Sign of `F^{q_n}(0) - 2 pi (p_n + k q_n)` for `n = 1..=n_max`, where `k`
/// is the integer part of the lift's rotation number. For an irrational
/// rotation number the signs alternate.
pub fn closest_return_signs<M: CircleMap + ?Sized>(map: &M, theta: &RotationNumber, n_max: usize) -> Result<Vec<i8>> {
    let est = rotation_number(map, 0.0, 100_000)?;
    let k = (est.lift_rho - theta.value()).round();
    let conv = theta.convergents(n_max).items;
    Ok(conv
        .iter()
        .map(|c| {
            let (_, d) = advance(map, 0.0, c.q as usize);
            let offset = d - TAU * (c.p as f64 + k * c.q as f64);
            if offset > 0.0 {
                1
            } else if offset < 0.0 {
                -1
            } else {
                0
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blaschke::phi_inverse;
    use crate::sphere::Point;

    #[test]
    fn rigid_rotation_is_exact() {
        let theta = RotationNumber::golden().value();
        for n in [1, 10, 1000] {
            let est = rotation_number(&RigidRotation { theta }, 0.3, n).unwrap();
            assert!((est.rho - theta).abs() < 1e-12);
        }
    }

    #[test]
    fn estimate_is_orbit_independent() {
        let b = phi_inverse(Point::Infinity).unwrap();
        let n = 20_000;
        let ests: Vec<f64> = [0.0, 1.0, 4.0].iter().map(|&x| rotation_number(&b, x, n).unwrap().lift_rho).collect();
        for pair in ests.windows(2) {
            assert!((pair[0] - pair[1]).abs() <= 2.0 / n as f64);
        }
    }

    #[test]
    fn rotation_grows_with_prefactor() {
        let b = phi_inverse(Point::new(2.0, 0.0)).unwrap();
        let mut prev = f64::NEG_INFINITY;
        for k in 0..=24 {
            let t = TAU * k as f64 / 24.0;
            let r = estimate(&Shifted { map: &b, t }, 0.0, 5_000).lift_rho;
            assert!(r >= prev - 2.0 / 5_000.0);
            prev = r;
        }
    }

    #[test]
    fn non_homeomorphism_is_rejected() {
        // |p| close to 1 with q near the circle: T' dips below zero
        let b = BlaschkeProduct::new(Complex64::new(1.05, 0.0), Complex64::new(0.0, -0.95)).unwrap();
        assert!(matches!(rotation_number(&b, 0.0, 10), Err(Error::NotHomeomorphism { .. })));
    }

    #[test]
    fn inverse_lift_round_trip() {
        let b = phi_inverse(Point::new(3.0, 1.0)).unwrap().with_prefactor(1.0);
        for k in 0..50 {
            let x = -7.0 + 0.3 * k as f64;
            let y = inverse_lift(&b, x).unwrap();
            assert!((b.lift(y) - x).abs() < 1e-12);
        }
    }

    #[test]
    fn rational_target_is_rejected() {
        let b = phi_inverse(Point::Infinity).unwrap();
        let half = RotationNumber::new(0.5).unwrap();
        assert!(matches!(tune_prefactor(b.p(), b.q(), &half, 1e-4), Err(Error::Domain(_))));
    }

    #[test]
    fn family_members_fix_one() {
        // (p - 1)(1 - q) is real on the whole family, so B(1) = 1 and the
        // untuned rotation number is 0
        for z in [Point::new(2.0, 0.0), Point::new(3.0, 1.0), Point::new(-1.0, 4.0)] {
            let b = phi_inverse(z).unwrap();
            let w = b.eval(Point::new(1.0, 0.0)).finite().unwrap();
            assert!((w - 1.0).norm() < 1e-12);
            assert_eq!(estimate(&b, 0.0, 1000).rho, 0.0);
        }
    }

    #[test]
    fn tuning_is_a_fixed_point() {
        let b = phi_inverse(Point::new(3.0, 1.0)).unwrap();
        let opts = TuneOptions { n_max: 100_000, ..TuneOptions::default() };
        let golden = RotationNumber::golden();
        let first = tune_blaschke(&b, &golden, 1e-4, &opts).unwrap();
        assert!(circle_gap(first.rho, golden.value()) <= 1e-4);
        let again = tune_blaschke(&b.with_prefactor(first.t), &golden, 1e-4, &opts).unwrap();
        assert_eq!(again.t, first.t);
        assert_eq!(again.bisections, 0);
    }

    #[test]
    fn rigid_rotation_comparability() {
        let theta = RotationNumber::golden();
        let rot = RigidRotation { theta: theta.value() };
        let report = comparability_report(&rot, &theta, 5, 10).unwrap();
        assert_eq!(report.rows.len(), 5);
        let x = theta.value();
        for row in &report.rows {
            assert!((row.backward_min - 1.0).abs() < 1e-9 && (row.backward_max - 1.0).abs() < 1e-9);
            let exact = (std::f64::consts::PI * row.q_next as f64 * x).sin().abs()
                / (std::f64::consts::PI * row.q_n as f64 * x).sin().abs();
            assert!((row.forward_min - exact).abs() < 1e-9);
            assert!((row.forward_max - exact).abs() < 1e-9);
        }
        let empty = comparability_report(&rot, &theta, 5, 0).unwrap();
        assert!(empty.rows.is_empty() && empty.k.is_none());
    }

    #[test]
    fn rigid_rotation_closest_returns_alternate() {
        let theta = RotationNumber::golden();
        let signs = closest_return_signs(&RigidRotation { theta: theta.value() }, &theta, 6).unwrap();
        for pair in signs.windows(2) {
            assert_eq!(pair[0], -pair[1]);
        }
    }
}

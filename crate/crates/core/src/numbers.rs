//! Continued fractions and bounded-type rotation numbers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Residual below which the Gauss-map expansion is considered terminated.
pub const RESIDUAL_FLOOR: f64 = 1e-14;

/// Propagated rounding error at which further partial quotients are noise.
const ERROR_CEILING: f64 = 1e-6;

/// Default number of partial quotients kept by [`RotationNumber::new`].
pub const DEFAULT_DEPTH: usize = 40;

/// Expands `theta` with the Gauss map `x -> {1/x}`.
///
/// The expansion stops at `depth` terms, when the residual drops below
/// [`RESIDUAL_FLOOR`] (the number is rational to double precision), or when
/// the accumulated rounding error makes the next quotient unreliable.
pub fn continued_fraction(theta: f64, depth: usize) -> Result<Vec<u64>> {
    Ok(expand(theta, depth)?.0)
}

/// Returns the terms and whether the expansion terminated on a zero residual.
fn expand(theta: f64, depth: usize) -> Result<(Vec<u64>, bool)> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::Domain(format!("theta = {theta} is not in (0, 1)")));
    }
    if depth == 0 {
        return Err(Error::Domain("continued fraction depth must be >= 1".into()));
    }
    let mut terms = Vec::with_capacity(depth);
    let mut x = theta;
    let mut err = f64::EPSILON * theta;
    while terms.len() < depth {
        let inv = 1.0 / x;
        // the Gauss map stretches errors by 1/x^2
        err = err * inv * inv + 4.0 * f64::EPSILON * inv;
        let nearest = inv.round();
        if (inv - nearest).abs() <= err.max(RESIDUAL_FLOOR) {
            terms.push(nearest as u64);
            return Ok((terms, true));
        }
        let a = inv.floor();
        terms.push(a as u64);
        x = inv - a;
        if err > ERROR_CEILING {
            break;
        }
    }
    Ok((terms, false))
}

/// Folds `[a_1, ..., a_n]` back into `1/(a_1 + 1/(a_2 + ...))`.
pub fn fold(cf: &[u64]) -> f64 {
    cf.iter().rev().fold(0.0, |tail, &a| 1.0 / (a as f64 + tail))
}

/// A reduced fraction `p/q` approximating a rotation number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Convergent {
    pub p: u64,
    pub q: u64,
}

impl Convergent {
    pub fn value(&self) -> f64 {
        self.p as f64 / self.q as f64
    }
}

/// Result of [`convergents`]; `truncated` is set when fewer than the
/// requested number could be produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Convergents {
    pub items: Vec<Convergent>,
    pub truncated: bool,
}

/// The first `n` convergents `p_k/q_k` of `[a_1, a_2, ...]` via the
/// standard three-term recurrence.
pub fn convergents(cf: &[u64], n: usize) -> Result<Convergents> {
    if cf.is_empty() {
        return Err(Error::Domain("continued fraction is empty".into()));
    }
    let (mut p_prev, mut q_prev) = (1u64, 0u64);
    let (mut p, mut q) = (0u64, 1u64);
    let mut items = Vec::with_capacity(n.min(cf.len()));
    for &a in cf.iter().take(n) {
        let next = a
            .checked_mul(p)
            .and_then(|x| x.checked_add(p_prev))
            .zip(a.checked_mul(q).and_then(|x| x.checked_add(q_prev)));
        let Some((p_next, q_next)) = next else {
            return Ok(Convergents { items, truncated: true });
        };
        (p_prev, q_prev, p, q) = (p, q, p_next, q_next);
        items.push(Convergent { p, q });
    }
    let truncated = items.len() < n;
    Ok(Convergents { items, truncated })
}

/// True iff every partial quotient is at most `bound`.
pub fn is_bounded_type(cf: &[u64], bound: u64) -> bool {
    cf.iter().all(|&a| a <= bound)
}

/// A rotation number together with its truncated continued fraction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RotationNumber {
    value: f64,
    cf: Vec<u64>,
    bound: u64,
    terminated: bool,
}

impl RotationNumber {
    pub fn new(value: f64) -> Result<Self> {
        Self::with_depth(value, DEFAULT_DEPTH)
    }

    pub fn with_depth(value: f64, depth: usize) -> Result<Self> {
        let (cf, terminated) = expand(value, depth)?;
        let bound = cf.iter().copied().max().unwrap_or(0);
        Ok(RotationNumber { value, cf, bound, terminated })
    }

    /// The golden mean `(sqrt(5) - 1)/2 = [1, 1, 1, ...]`.
    pub fn golden() -> Self {
        let value = (5f64.sqrt() - 1.0) / 2.0;
        RotationNumber { value, cf: vec![1; DEFAULT_DEPTH], bound: 1, terminated: false }
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn cf(&self) -> &[u64] {
        &self.cf
    }

    /// Largest partial quotient among the computed terms.
    pub fn bound(&self) -> u64 {
        self.bound
    }

    /// True when the expansion terminated, i.e. the value is rational to
    /// double precision.
    pub fn is_rational(&self) -> bool {
        self.terminated
    }

    pub fn convergents(&self, n: usize) -> Convergents {
        convergents(&self.cf, n).expect("cf is never empty")
    }

    /// `e^{2 pi i theta}`.
    pub fn multiplier(&self) -> num_complex::Complex64 {
        num_complex::Complex64::from_polar(1.0, std::f64::consts::TAU * self.value)
    }
}

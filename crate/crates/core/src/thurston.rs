//! Thurston linear transformation matrices of multicurves, their leading
//! eigenvalue, and orbifold Euler characteristics.

use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Eigenvalues within this distance below 1 still count as obstructions.
pub const OBSTRUCTION_TOL: f64 = 1e-12;

/// Relative gap between the Collatz-Wielandt bounds at which iteration stops.
pub const EIGEN_TOL: f64 = 1e-14;

/// Each squaring doubles the number of power-iteration steps.
pub const MAX_SQUARINGS: usize = 64;

/// Combinatorics of a multicurve `{gamma_1, ..., gamma_n}` under `f`.
///
/// Each entry `[j, i, d]` says that one non-peripheral component of
/// `f^{-1}(gamma_j)` is homotopic to `gamma_i` and maps onto `gamma_j` with
/// degree `d`. Indices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MulticurveSpec {
    pub n: usize,
    pub preimages: Vec<[u64; 3]>,
}

impl MulticurveSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: MulticurveSpec = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Domain("a multicurve needs at least one curve".into()));
        }
        for &[j, i, d] in &self.preimages {
            for index in [j, i] {
                if index == 0 || index as usize > self.n {
                    return Err(Error::IndexOutOfRange { index: index as usize, n: self.n });
                }
            }
            if d == 0 {
                return Err(Error::Domain(format!("preimage [{j}, {i}, {d}] has degree 0")));
            }
        }
        Ok(())
    }

    /// `copies` disjoint copies of this multicurve, whose matrix is
    /// block-diagonal with one block per copy.
    pub fn block_diagonal(&self, copies: usize) -> MulticurveSpec {
        let mut preimages = Vec::with_capacity(self.preimages.len() * copies);
        for copy in 0..copies as u64 {
            let offset = copy * self.n as u64;
            preimages.extend(self.preimages.iter().map(|&[j, i, d]| [j + offset, i + offset, d]));
        }
        MulticurveSpec { n: self.n * copies, preimages }
    }
}

/// Dense nonnegative `n x n` matrix, row-major.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThurstonMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl ThurstonMatrix {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Domain("empty matrix".into()));
        }
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::Domain(format!("row of length {} in a {n} x {n} matrix", row.len())));
            }
            if let Some(x) = row.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
                return Err(Error::Domain(format!("entry {x} is not a finite nonnegative number")));
            }
            entries.extend_from_slice(row);
        }
        Ok(ThurstonMatrix { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.n).map(<[f64]>::to_vec).collect()
    }
}

/// `a_ij = sum over preimages of gamma_j homotopic to gamma_i of 1/d`.
pub fn thurston_matrix(spec: &MulticurveSpec) -> Result<ThurstonMatrix> {
    spec.validate()?;
    let n = spec.n;
    let mut entries = vec![0.0; n * n];
    for &[j, i, d] in &spec.preimages {
        entries[(i as usize - 1) * n + (j as usize - 1)] += 1.0 / d as f64;
    }
    Ok(ThurstonMatrix { n, entries })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LeadingEigenvalue {
    pub value: f64,
    pub obstructed: bool,
    pub iterations: usize,
}

/// Spectral radius of a nonnegative matrix.
///
/// The matrix is split into strongly connected components. On each
/// irreducible diagonal block `M`, the shifted block `B = M + sI` is
/// primitive; the iterates `B^(2^k) 1` are bracketed by the Collatz-Wielandt
/// bounds `min (Bx)_i / x_i <= rho(B) <= max (Bx)_i / x_i`.
pub fn leading_eigenvalue(a: &ThurstonMatrix) -> Result<LeadingEigenvalue> {
    let n = a.n;
    let mut graph = DiGraph::<(), ()>::with_capacity(n, n * n);
    let nodes: Vec<_> = (0..n).map(|_| graph.add_node(())).collect();
    for i in 0..n {
        for j in 0..n {
            if a.get(i, j) > 0.0 {
                graph.add_edge(nodes[i], nodes[j], ());
            }
        }
    }
    let mut value = 0.0f64;
    let mut iterations = 0;
    for component in tarjan_scc(&graph) {
        let idx: Vec<usize> = component.iter().map(|v| v.index()).collect();
        let (rho, its) = block_radius(a, &idx)?;
        value = value.max(rho);
        iterations += its;
    }
    Ok(LeadingEigenvalue { value, obstructed: value >= 1.0 - OBSTRUCTION_TOL, iterations })
}

fn block_radius(a: &ThurstonMatrix, idx: &[usize]) -> Result<(f64, usize)> {
    let m = idx.len();
    if m == 1 {
        return Ok((a.get(idx[0], idx[0]), 0));
    }
    let mut b: Vec<f64> = idx.iter().flat_map(|&i| idx.iter().map(move |&j| a.get(i, j))).collect();
    let shift = b.chunks(m).map(|row| row.iter().sum::<f64>()).fold(0.0, f64::max);
    for r in 0..m {
        b[r * m + r] += shift;
    }
    // x = B^(2^k) 1, tracked through the normalized powers of B
    let mut power = b.clone();
    let mut gap = f64::INFINITY;
    for k in 0..MAX_SQUARINGS {
        let x: Vec<f64> = power.chunks(m).map(|row| row.iter().sum()).collect();
        let (lo, hi) = collatz_wielandt(&b, &x);
        gap = hi - lo;
        if gap <= EIGEN_TOL * hi {
            return Ok((0.5 * (lo + hi) - shift, k));
        }
        power = square(&power, m);
        let norm = power.iter().copied().fold(0.0, f64::max);
        power.iter_mut().for_each(|p| *p /= norm);
    }
    Err(Error::EigenNonConvergence { iterations: MAX_SQUARINGS, gap })
}

/// `min` and `max` of `(Bx)_i / x_i`.
fn collatz_wielandt(b: &[f64], x: &[f64]) -> (f64, f64) {
    b.chunks(x.len()).zip(x).fold((f64::INFINITY, 0.0f64), |(lo, hi), (row, xi)| {
        let q = row.iter().zip(x).map(|(a, x)| a * x).sum::<f64>() / xi;
        (lo.min(q), hi.max(q))
    })
}

fn square(p: &[f64], m: usize) -> Vec<f64> {
    let mut out = vec![0.0; m * m];
    for i in 0..m {
        for k in 0..m {
            let pik = p[i * m + k];
            for j in 0..m {
                out[i * m + j] += pik * p[k * m + j];
            }
        }
    }
    out
}

/// Branching order `nu(x)`: an integer `>= 2` or infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Nu {
    Finite(u32),
    Infinite,
}

impl FromStr for Nu {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(Nu::Infinite),
            t => t.parse().map(Nu::Finite).map_err(|_| Error::Parse(format!("bad branching order {t:?}"))),
        }
    }
}

impl fmt::Display for Nu {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Nu::Finite(v) => write!(f, "{v}"),
            Nu::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbifoldSignature(pub Vec<Nu>);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EulerCharacteristic {
    pub chi: Rational64,
    pub hyperbolic: bool,
}

impl EulerCharacteristic {
    pub fn to_f64(&self) -> f64 {
        *self.chi.numer() as f64 / *self.chi.denom() as f64
    }
}

/// `chi = 2 - sum (1 - 1/nu)`, exact; hyperbolic iff `chi < 0`.
pub fn orbifold_euler(sig: &OrbifoldSignature) -> Result<EulerCharacteristic> {
    if sig.0.is_empty() {
        return Err(Error::Domain("empty orbifold signature".into()));
    }
    let one = Rational64::from_integer(1);
    let mut chi = Rational64::from_integer(2);
    for nu in &sig.0 {
        chi -= match *nu {
            Nu::Infinite => one,
            Nu::Finite(v) if v >= 2 => one - Rational64::new(1, v as i64),
            Nu::Finite(v) => return Err(Error::Domain(format!("branching order {v} is below 2"))),
        };
    }
    Ok(EulerCharacteristic { chi, hyperbolic: chi < Rational64::from_integer(0) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{DMatrix, Schur};
    use proptest::prelude::*;

    /// Characteristic polynomial by Faddeev-LeVerrier, then the largest
    /// modulus among the companion-matrix eigenvalues.
    fn oracle_radius(rows: &[Vec<f64>]) -> f64 {
        let n = rows.len();
        let a = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
        // p(x) = x^n + c[1] x^{n-1} + ... + c[n]
        let mut c = vec![1.0; n + 1];
        let mut m = DMatrix::<f64>::zeros(n, n);
        for k in 1..=n {
            m = &a * &m + DMatrix::identity(n, n) * c[k - 1];
            c[k] = -(&a * &m).trace() / k as f64;
        }
        // deflate roots at zero, which the shifted QR cannot split off
        let scale = rows.iter().flatten().fold(1.0f64, |m, x| m.max(*x)) * n as f64;
        while c.len() > 1 && c.last().unwrap().abs() <= 1e-13 * scale.powi(c.len() as i32 - 1) {
            c.pop();
        }
        let n = c.len() - 1;
        if n == 0 {
            return 0.0;
        }
        let companion = DMatrix::from_fn(n, n, |i, j| {
            if i == 0 {
                -c[j + 1]
            } else if i == j + 1 {
                1.0
            } else {
                0.0
            }
        });
        let schur = Schur::try_new(companion, 1e-15, 100_000).expect("Schur decomposition converges");
        schur.complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn spec(n: usize, preimages: &[[u64; 3]]) -> MulticurveSpec {
        MulticurveSpec { n, preimages: preimages.to_vec() }
    }

    #[test]
    fn single_curve_degree_two() {
        let a = thurston_matrix(&spec(1, &[[1, 1, 2]])).unwrap();
        assert_eq!(a.rows(), vec![vec![0.5]]);
        let e = leading_eigenvalue(&a).unwrap();
        assert_eq!(e.value, 0.5);
        assert!(!e.obstructed);
    }

    #[test]
    fn swapped_pair() {
        let a = thurston_matrix(&spec(2, &[[1, 2, 1], [2, 1, 1]])).unwrap();
        assert_eq!(a.rows(), vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
        let e = leading_eigenvalue(&a).unwrap();
        assert!((e.value - 1.0).abs() < 1e-12);
        assert!(e.obstructed);
    }

    #[test]
    fn identity_is_obstructed() {
        let a = ThurstonMatrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let e = leading_eigenvalue(&a).unwrap();
        assert_eq!(e.value, 1.0);
        assert!(e.obstructed);
    }

    #[test]
    fn degrees_accumulate() {
        let a = thurston_matrix(&spec(2, &[[1, 1, 2], [1, 1, 2], [2, 1, 3]])).unwrap();
        assert_eq!(a.get(0, 0), 1.0);
        assert!((a.get(0, 1) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(a.get(1, 0), 0.0);
    }

    #[test]
    fn json_spec_round_trip() {
        let s = MulticurveSpec::from_json(r#"{"n": 2, "preimages": [[1, 2, 2], [2, 1, 3]]}"#).unwrap();
        assert_eq!(s, spec(2, &[[1, 2, 2], [2, 1, 3]]));
        let back = MulticurveSpec::from_json(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn invalid_specs_are_rejected() {
        assert_eq!(thurston_matrix(&spec(2, &[[3, 1, 1]])), Err(Error::IndexOutOfRange { index: 3, n: 2 }));
        assert!(thurston_matrix(&spec(2, &[[0, 1, 1]])).is_err());
        assert!(thurston_matrix(&spec(2, &[[1, 1, 0]])).is_err());
        assert!(thurston_matrix(&spec(0, &[])).is_err());
        assert!(MulticurveSpec::from_json("{\"n\": 1}").is_err());
        assert!(ThurstonMatrix::from_rows(&[vec![-1.0]]).is_err());
        assert!(ThurstonMatrix::from_rows(&[vec![1.0, 0.0]]).is_err());
    }

    #[test]
    fn block_diagonal_keeps_leading_eigenvalue() {
        let b = spec(3, &[[1, 2, 2], [2, 3, 3], [3, 1, 2], [3, 3, 4], [2, 1, 5]]);
        let ab = thurston_matrix(&b.block_diagonal(2)).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(ab.get(i, j + 3), 0.0);
                assert_eq!(ab.get(i + 3, j), 0.0);
                assert_eq!(ab.get(i, j), ab.get(i + 3, j + 3));
            }
        }
        let lb = leading_eigenvalue(&thurston_matrix(&b).unwrap()).unwrap().value;
        let lab = leading_eigenvalue(&ab).unwrap().value;
        assert!((lb - lab).abs() < 1e-10);
        assert!((lb - oracle_radius(&thurston_matrix(&b).unwrap().rows())).abs() < 1e-10);
    }

    #[test]
    fn reducible_matrix_uses_largest_block() {
        // upper triangular with a nilpotent part
        let a = ThurstonMatrix::from_rows(&[vec![0.3, 5.0, 0.0], vec![0.0, 0.7, 2.0], vec![0.0, 0.0, 0.2]]).unwrap();
        assert!((leading_eigenvalue(&a).unwrap().value - 0.7).abs() < 1e-15);
        let zero = ThurstonMatrix::from_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert_eq!(leading_eigenvalue(&zero).unwrap().value, 0.0);
    }

    #[test]
    fn periodic_block_converges() {
        // a 4-cycle: eigenvalues are the fourth roots of unity times 0.9
        let mut rows = vec![vec![0.0; 4]; 4];
        for i in 0..4 {
            rows[i][(i + 1) % 4] = 0.9;
        }
        let e = leading_eigenvalue(&ThurstonMatrix::from_rows(&rows).unwrap()).unwrap();
        assert!((e.value - 0.9).abs() < 1e-12);
    }

    fn nonnegative_matrix() -> impl Strategy<Value = Vec<Vec<f64>>> {
        (1usize..=8)
            .prop_flat_map(|n| prop::collection::vec(prop::collection::vec(prop_oneof![Just(0.0), 0.0f64..2.0], n), n))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn power_iteration_matches_oracle(rows in nonnegative_matrix()) {
            let a = ThurstonMatrix::from_rows(&rows).unwrap();
            let got = leading_eigenvalue(&a).unwrap().value;
            let want = oracle_radius(&rows);
            prop_assert!((got - want).abs() < 1e-8 * want.max(1.0), "{got} vs {want}");
        }

        #[test]
        fn removing_preimages_never_increases_lambda(
            entries in prop::collection::vec((1u64..=4, 1u64..=4, 1u64..=4), 1..12),
            drop in 0usize..12,
        ) {
            let full = spec(4, &entries.iter().map(|&(j, i, d)| [j, i, d]).collect::<Vec<_>>());
            let mut fewer = full.clone();
            fewer.preimages.remove(drop % fewer.preimages.len());
            let l_full = leading_eigenvalue(&thurston_matrix(&full).unwrap()).unwrap().value;
            let l_fewer = leading_eigenvalue(&thurston_matrix(&fewer).unwrap()).unwrap().value;
            prop_assert!(l_fewer <= l_full + 1e-12);
        }
    }

    fn sig(s: &str) -> OrbifoldSignature {
        OrbifoldSignature(s.split(',').map(|t| t.parse().unwrap()).collect())
    }

    #[test]
    fn orbifold_table() {
        let e = orbifold_euler(&sig("inf,inf")).unwrap();
        assert_eq!(e.chi, Rational64::from_integer(0));
        assert!(!e.hyperbolic);
        let e = orbifold_euler(&sig("2,2,2,2")).unwrap();
        assert_eq!(e.chi, Rational64::from_integer(0));
        assert!(!e.hyperbolic);
        let e = orbifold_euler(&sig("2,2,2,3")).unwrap();
        assert_eq!(e.chi, Rational64::new(-1, 6));
        assert!(e.hyperbolic);
        assert!((e.to_f64() + 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn orbifold_rejects_bad_orders() {
        assert!(orbifold_euler(&sig("1,3")).is_err());
        assert!(orbifold_euler(&OrbifoldSignature(vec![])).is_err());
        assert!("x".parse::<Nu>().is_err());
    }
}

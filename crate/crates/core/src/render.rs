//! Orbit-trap classification of a pixel grid and binary PPM output.
//!
//! A pixel is labeled by the first iterate that lands in a small disk around
//! the fixed point 0, which sits inside the Siegel disk. The labels are a
//! diagnostic picture of the disk and its preimages; the unresolved fraction
//! says nothing rigorous about measure.

use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maps::QuadraticSiegelMap;
use crate::siegel::boundary_orbit;
use crate::sphere::Point;

/// Orbits of the polynomial leaving this disk go to infinity.
pub const ESCAPE_RADIUS: f64 = 10.0;

/// Fraction of the smallest boundary-sample modulus used as trap radius.
pub const TRAP_FRACTION: f64 = 0.4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RasterSpec {
    pub center: Complex64,
    /// Width of the viewport in the plane; the height follows the aspect ratio.
    pub width: f64,
    pub px_w: usize,
    pub px_h: usize,
    pub max_iter: usize,
    pub trap_radius: f64,
}

impl RasterSpec {
    pub fn validate(&self) -> Result<()> {
        if self.px_w == 0 || self.px_h == 0 {
            return Err(Error::Domain(format!("raster {}x{} has no pixels", self.px_w, self.px_h)));
        }
        if !(self.width > 0.0 && self.width.is_finite()) {
            return Err(Error::Domain(format!("viewport width {} must be positive", self.width)));
        }
        if !(self.trap_radius > 0.0 && self.trap_radius.is_finite()) {
            return Err(Error::Domain(format!("trap radius {} must be positive", self.trap_radius)));
        }
        Ok(())
    }

    /// Plane coordinate of the center of pixel `(i, j)`, row `j` counted from
    /// the top.
    pub fn pixel(&self, i: usize, j: usize) -> Complex64 {
        let step = self.width / self.px_w as f64;
        let height = step * self.px_h as f64;
        Complex64::new(
            self.center.re - 0.5 * self.width + (i as f64 + 0.5) * step,
            self.center.im + 0.5 * height - (j as f64 + 0.5) * step,
        )
    }
}

/// `0.4 * min |g^k(1)|` over `n` orbit points of the critical point 1.
pub fn default_trap_radius(g: &QuadraticSiegelMap, n: usize) -> Result<f64> {
    let curve = boundary_orbit(g.c(), g.theta(), n)?;
    Ok(TRAP_FRACTION * curve.min_modulus())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Label {
    /// First iterate inside the trap disk.
    Hit(u32),
    Unresolved,
    Escaped,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Labels {
    pub width: usize,
    pub height: usize,
    pub max_iter: usize,
    /// Row-major from the top-left pixel.
    pub data: Vec<Label>,
}

impl Labels {
    pub fn unresolved_fraction(&self) -> f64 {
        let n = self.data.iter().filter(|l| **l == Label::Unresolved).count();
        n as f64 / self.data.len().max(1) as f64
    }
}

pub fn classify_point(g: &QuadraticSiegelMap, z0: Complex64, max_iter: usize, trap_radius: f64) -> Label {
    let mut z = z0;
    for k in 0..=max_iter {
        if z.norm() < trap_radius {
            return Label::Hit(k as u32);
        }
        if g.is_polynomial() && z.norm() > ESCAPE_RADIUS {
            return Label::Escaped;
        }
        if k == max_iter {
            break;
        }
        let Some(next) = g.eval_finite(z) else {
            return Label::Unresolved;
        };
        // a numerically fixed point outside the trap stays there
        if (next - z).norm() <= 4.0 * f64::EPSILON * (1.0 + z.norm()) {
            return Label::Unresolved;
        }
        z = next;
    }
    Label::Unresolved
}

pub fn classify_grid(g: &QuadraticSiegelMap, spec: &RasterSpec) -> Result<Labels> {
    spec.validate()?;
    let data = (0..spec.px_w * spec.px_h)
        .into_par_iter()
        .map(|p| classify_point(g, spec.pixel(p % spec.px_w, p / spec.px_w), spec.max_iter, spec.trap_radius))
        .collect();
    Ok(Labels { width: spec.px_w, height: spec.px_h, max_iter: spec.max_iter, data })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Palette {
    pub unresolved: [u8; 3],
    pub escaped: [u8; 3],
    /// Color of an immediate hit; later hits fade toward `hit_late`.
    pub hit_early: [u8; 3],
    pub hit_late: [u8; 3],
}

impl Default for Palette {
    fn default() -> Self {
        Palette { unresolved: [0, 0, 0], escaped: [255, 255, 255], hit_early: [255, 200, 40], hit_late: [20, 40, 160] }
    }
}

impl Palette {
    pub fn color(&self, label: Label, max_iter: usize) -> [u8; 3] {
        match label {
            Label::Unresolved => self.unresolved,
            Label::Escaped => self.escaped,
            Label::Hit(k) => {
                let t = (k as f64 / max_iter.max(1) as f64).sqrt().min(1.0);
                let mix = |a: u8, b: u8| (a as f64 + t * (b as f64 - a as f64)).round() as u8;
                [0, 1, 2].map(|c| mix(self.hit_early[c], self.hit_late[c]))
            }
        }
    }
}

/// Binary PPM (`P6`) bytes, rows from the top.
pub fn encode_ppm(labels: &Labels, palette: &Palette) -> Result<Vec<u8>> {
    let (w, h) = (labels.width, labels.height);
    if w == 0 || h == 0 {
        return Err(Error::Domain(format!("image {w}x{h} has no pixels")));
    }
    if labels.data.len() != w * h {
        return Err(Error::Domain(format!("{} labels for a {w}x{h} image", labels.data.len())));
    }
    let mut out = format!("P6\n{w} {h}\n255\n").into_bytes();
    out.reserve(3 * w * h);
    for &l in &labels.data {
        out.extend_from_slice(&palette.color(l, labels.max_iter));
    }
    Ok(out)
}

pub fn write_image(labels: &Labels, palette: &Palette, path: &Path) -> Result<()> {
    let bytes = encode_ppm(labels, palette)?;
    let mut file = std::fs::File::create(path)?;
    file.write_all(&bytes)?;
    Ok(())
}

/// Labels a single point given on the sphere; infinity is unresolved unless
/// the map is the polynomial.
pub fn classify_sphere_point(g: &QuadraticSiegelMap, z: Point, max_iter: usize, trap_radius: f64) -> Label {
    match z {
        Point::Finite(z) => classify_point(g, z, max_iter, trap_radius),
        Point::Infinity if g.is_polynomial() => Label::Escaped,
        Point::Infinity => Label::Unresolved,
    }
}

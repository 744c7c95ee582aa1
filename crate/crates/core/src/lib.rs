//! Numerical tools for bounded-type Siegel disks of quadratic rational maps.
//!
//! The crate is organized bottom-up:
//!
//! * [`numbers`]: continued fractions and rotation numbers,
//! * [`maps`]: the normalized family `g_c` and its Moebius normalizations,
//! * [`blaschke`]: the symmetric degree-3 Blaschke products and their
//!   critical parameterization,
//! * [`rotation`]: rotation numbers of circle homeomorphisms, prefactor
//!   tuning and comparability diagnostics,
//! * [`siegel`]: Siegel boundaries as critical-orbit closures, cross ratios
//!   and the quasicircle diagnostic,
//! * [`thurston`]: Thurston matrices and orbifold Euler characteristics,
//! * [`render`]: orbit-trap rasters written as PPM images,
//! * [`cli`]: the `siegel-lab` command line.

pub mod blaschke;
pub mod cli;
pub mod error;
pub mod fmt;
pub mod maps;
pub mod moebius;
pub mod numbers;
pub mod poly;
pub mod render;
pub mod rotation;
pub mod siegel;
pub mod sphere;
pub mod thurston;

pub use error::{Error, Result};
pub use maps::{make_map, QuadraticSiegelMap};
pub use moebius::MoebiusMap;
pub use numbers::RotationNumber;
pub use sphere::Point;

//! C ABI for `siegel-lab`.
//!
//! Objects cross the boundary as opaque handles created by `sl_*_new` and
//! released by the matching `sl_*_free`. Every fallible call returns an
//! [`SlStatus`]; the detailed message of the last failure on the calling
//! thread is available from [`sl_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use num_complex::Complex64;
use siegel_lab::blaschke::{phi_inverse, BlaschkeProduct};
use siegel_lab::maps::{make_map, QuadraticSiegelMap};
use siegel_lab::rotation::{rotation_number, tune_blaschke, TuneOptions};
use siegel_lab::siegel::{boundary_orbit, cross_ratio, quasicircle_delta, BoundaryCurve};
use siegel_lab::thurston::{leading_eigenvalue, ThurstonMatrix};
use siegel_lab::{Error, Point, RotationNumber};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    DegenerateParameter = 3,
    Pole = 4,
    OutsideRegion = 5,
    NotHomeomorphism = 6,
    TuningFailed = 7,
    Escape = 8,
    FiniteOrbit = 9,
    CoincidentPoints = 10,
    IndexOutOfRange = 11,
    EigenNonConvergence = 12,
    Io = 13,
    Parse = 14,
    Panic = 15,
}

impl From<&Error> for SlStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Domain(_) | Error::Labeling { .. } | Error::NonNormalizing(_) => SlStatus::Domain,
            Error::DegenerateParameter(_) => SlStatus::DegenerateParameter,
            Error::Pole(_) => SlStatus::Pole,
            Error::OutsideRegion(_) => SlStatus::OutsideRegion,
            Error::NotHomeomorphism { .. } => SlStatus::NotHomeomorphism,
            Error::NonMonotone { .. } | Error::TuningNonConvergence { .. } => SlStatus::TuningFailed,
            Error::Escape { .. } => SlStatus::Escape,
            Error::FiniteOrbit { .. } => SlStatus::FiniteOrbit,
            Error::CoincidentPoints => SlStatus::CoincidentPoints,
            Error::IndexOutOfRange { .. } => SlStatus::IndexOutOfRange,
            Error::EigenNonConvergence { .. } => SlStatus::EigenNonConvergence,
            Error::Io(_) => SlStatus::Io,
            Error::Parse(_) => SlStatus::Parse,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlComplex {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for SlComplex {
    fn from(z: Complex64) -> Self {
        SlComplex { re: z.re, im: z.im }
    }
}

impl From<SlComplex> for Complex64 {
    fn from(z: SlComplex) -> Self {
        Complex64::new(z.re, z.im)
    }
}

/// A point of the Riemann sphere; `re` and `im` are ignored when `infinite`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlPoint {
    pub re: f64,
    pub im: f64,
    pub infinite: bool,
}

impl From<SlPoint> for Point {
    fn from(p: SlPoint) -> Self {
        if p.infinite {
            Point::Infinity
        } else {
            Point::new(p.re, p.im)
        }
    }
}

impl From<Point> for SlPoint {
    fn from(p: Point) -> Self {
        match p {
            Point::Finite(z) => SlPoint { re: z.re, im: z.im, infinite: false },
            Point::Infinity => SlPoint { re: 0.0, im: 0.0, infinite: true },
        }
    }
}

/// Opaque handle to a normalized quadratic map `g_c`.
pub struct SlMap {
    inner: QuadraticSiegelMap,
}

/// Opaque handle to a degree-3 Blaschke product with its prefactor.
pub struct SlBlaschke {
    inner: BlaschkeProduct,
}

/// Opaque handle to a sampled boundary curve.
pub struct SlCurve {
    inner: BoundaryCurve,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

/// Runs `body`, converting errors and panics into a status code.
fn guard(body: impl FnOnce() -> Result<(), Error>) -> SlStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_last_error("");
            SlStatus::Ok
        }
        Ok(Err(e)) => {
            set_last_error(&e.to_string());
            SlStatus::from(&e)
        }
        Err(_) => {
            set_last_error("internal panic");
            SlStatus::Panic
        }
    }
}

fn null_error(what: &str) -> Error {
    Error::Domain(format!("null pointer: {what}"))
}

/// Writes `value` through `out`, failing on a null pointer.
///
/// # Safety
/// `out` must be null or valid for writes.
unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Error> {
    match out.as_mut() {
        Some(slot) => {
            *slot = value;
            Ok(())
        }
        None => Err(null_error(what)),
    }
}

fn null_pointer() -> SlStatus {
    set_last_error("null pointer argument");
    SlStatus::NullPointer
}

fn checked<T>(status: SlStatus, out: *mut T) -> SlStatus {
    if out.is_null() {
        null_pointer()
    } else {
        status
    }
}

fn rotation(theta: f64) -> Result<RotationNumber, Error> {
    RotationNumber::new(theta)
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn sl_status_message(status: SlStatus) -> *const c_char {
    let s: &'static CStr = match status {
        SlStatus::Ok => c"ok",
        SlStatus::NullPointer => c"null pointer argument",
        SlStatus::Domain => c"domain error",
        SlStatus::DegenerateParameter => c"degenerate critical parameter",
        SlStatus::Pole => c"evaluation at a pole",
        SlStatus::OutsideRegion => c"parameter outside the Blaschke region",
        SlStatus::NotHomeomorphism => c"circle map is not a homeomorphism",
        SlStatus::TuningFailed => c"prefactor tuning failed",
        SlStatus::Escape => c"orbit escaped",
        SlStatus::FiniteOrbit => c"finite critical orbit",
        SlStatus::CoincidentPoints => c"coincident points",
        SlStatus::IndexOutOfRange => c"index out of range",
        SlStatus::EigenNonConvergence => c"eigenvalue iteration did not converge",
        SlStatus::Io => c"i/o error",
        SlStatus::Parse => c"parse error",
        SlStatus::Panic => c"internal panic",
    };
    s.as_ptr()
}

/// Message of the last failed call on this thread, or an empty string. The
/// pointer stays valid until the next call into this library on the thread.
#[no_mangle]
pub extern "C" fn sl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// The golden mean `(sqrt(5) - 1) / 2`.
#[no_mangle]
pub extern "C" fn sl_golden_mean() -> f64 {
    RotationNumber::golden().value()
}

/// Creates `g_c` with rotation number `theta` in (0, 1).
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sl_map_new(c: SlPoint, theta: f64, out: *mut *mut SlMap) -> SlStatus {
    if out.is_null() {
        return null_pointer();
    }
    let status = guard(|| {
        let map = make_map(c.into(), &rotation(theta)?)?;
        put(out, Box::into_raw(Box::new(SlMap { inner: map })), "out")
    });
    checked(status, out)
}

/// # Safety
/// `map` must be null or a handle from [`sl_map_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sl_map_free(map: *mut SlMap) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}

/// `g_c(z)`; fails with `SL_STATUS_POLE` at the pole.
///
/// # Safety
/// `map` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sl_map_eval(map: *const SlMap, z: SlComplex, out: *mut SlComplex) -> SlStatus {
    let Some(map) = map.as_ref() else {
        return null_pointer();
    };
    let status = guard(|| {
        let w = map.inner.eval_finite(z.into()).ok_or(Error::Pole(z.into()))?;
        put(out, w.into(), "out")
    });
    checked(status, out)
}

/// `g_c'(z)`.
///
/// # Safety
/// `map` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sl_map_derivative(map: *const SlMap, z: SlComplex, out: *mut SlComplex) -> SlStatus {
    let Some(map) = map.as_ref() else {
        return null_pointer();
    };
    let status = guard(|| put(out, map.inner.derivative(z.into())?.into(), "out"));
    checked(status, out)
}

/// The third fixed point `p_c` (besides 0 and infinity).
///
/// # Safety
/// `map` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sl_map_fixed_point(map: *const SlMap, out: *mut SlPoint) -> SlStatus {
    let Some(map) = map.as_ref() else {
        return null_pointer();
    };
    let status = guard(|| put(out, map.inner.fixed_points().points[2].into(), "out"));
    checked(status, out)
}

/// The member of the symmetric Blaschke family whose free critical point is
/// `c`, with prefactor 0.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sl_blaschke_new(c: SlPoint, out: *mut *mut SlBlaschke) -> SlStatus {
    if out.is_null() {
        return null_pointer();
    }
    let status = guard(|| {
        let b = phi_inverse(c.into())?;
        put(out, Box::into_raw(Box::new(SlBlaschke { inner: b })), "out")
    });
    checked(status, out)
}

/// # Safety
/// `b` must be null or a handle from [`sl_blaschke_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sl_blaschke_free(b: *mut SlBlaschke) {
    if !b.is_null() {
        drop(Box::from_raw(b));
    }
}

/// The zeros `p` (outside the disk) and `q` (inside) and the prefactor angle.
///
/// # Safety
/// `b` must be a live handle; the outputs must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sl_blaschke_params(
    b: *const SlBlaschke,
    p: *mut SlComplex,
    q: *mut SlComplex,
    prefactor: *mut f64,
) -> SlStatus {
    let Some(b) = b.as_ref() else {
        return null_pointer();
    };
    if p.is_null() || q.is_null() || prefactor.is_null() {
        return null_pointer();
    }
    guard(|| {
        put(p, b.inner.p().into(), "p")?;
        put(q, b.inner.q().into(), "q")?;
        put(prefactor, b.inner.prefactor_angle(), "prefactor")
    })
}

/// Rotation number of the circle restriction, estimated from `n` iterates.
///
/// # Safety
/// `b` must be a live handle and `rho` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sl_blaschke_rotation_number(b: *const SlBlaschke, n: usize, rho: *mut f64) -> SlStatus {
    let Some(b) = b.as_ref() else {
        return null_pointer();
    };
    let status = guard(|| put(rho, rotation_number(&b.inner, 0.0, n)?.rho, "rho"));
    checked(status, rho)
}

/// Sets the prefactor so that the rotation number is `theta` within `tol`,
/// measured with `n_max` iterates. Writes the prefactor and the measured
/// rotation number.
///
/// # Safety
/// `b` must be a live handle; `t` and `rho` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sl_blaschke_tune(
    b: *mut SlBlaschke,
    theta: f64,
    tol: f64,
    n_max: usize,
    t: *mut f64,
    rho: *mut f64,
) -> SlStatus {
    let Some(b) = b.as_mut() else {
        return null_pointer();
    };
    if t.is_null() || rho.is_null() {
        return null_pointer();
    }
    guard(|| {
        let opts = TuneOptions { n_max, ..TuneOptions::default() };
        let result = tune_blaschke(&b.inner, &rotation(theta)?, tol, &opts)?;
        b.inner = b.inner.with_prefactor(result.t);
        put(t, result.t, "t")?;
        put(rho, result.rho, "rho")
    })
}

/// Samples `g_c^k(1)` for `k < n`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sl_curve_new(c: SlPoint, theta: f64, n: usize, out: *mut *mut SlCurve) -> SlStatus {
    if out.is_null() {
        return null_pointer();
    }
    let status = guard(|| {
        let curve = boundary_orbit(c.into(), &rotation(theta)?, n)?;
        put(out, Box::into_raw(Box::new(SlCurve { inner: curve })), "out")
    });
    checked(status, out)
}

/// # Safety
/// `curve` must be null or a handle from [`sl_curve_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sl_curve_free(curve: *mut SlCurve) {
    if !curve.is_null() {
        drop(Box::from_raw(curve));
    }
}

/// Number of samples; 0 for a null handle.
///
/// # Safety
/// `curve` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sl_curve_len(curve: *const SlCurve) -> usize {
    curve.as_ref().map_or(0, |c| c.inner.len())
}

/// The `i`-th sample in internal-angle order.
///
/// # Safety
/// `curve` must be a live handle; `angle` and `z` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sl_curve_sample(
    curve: *const SlCurve,
    i: usize,
    angle: *mut f64,
    z: *mut SlComplex,
) -> SlStatus {
    let Some(curve) = curve.as_ref() else {
        return null_pointer();
    };
    if angle.is_null() || z.is_null() {
        return null_pointer();
    }
    guard(|| {
        let n = curve.inner.len();
        let k = *curve.inner.by_angle().get(i).ok_or(Error::IndexOutOfRange { index: i, n })?;
        put(angle, curve.inner.angle(k), "angle")?;
        put(z, curve.inner.point(k).into(), "z")
    })
}

/// Minimum `|cross ratio|` over `trials` seeded angle-ordered quadruples.
///
/// # Safety
/// `curve` must be a live handle and `min_abs` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sl_curve_quasicircle_delta(
    curve: *const SlCurve,
    trials: usize,
    seed: u64,
    min_abs: *mut f64,
) -> SlStatus {
    let Some(curve) = curve.as_ref() else {
        return null_pointer();
    };
    let status = guard(|| put(min_abs, quasicircle_delta(&curve.inner, trials, seed)?.min_abs, "min_abs"));
    checked(status, min_abs)
}

/// `((z1 - z3)(z2 - z4)) / ((z2 - z3)(z1 - z4))`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sl_cross_ratio(
    z1: SlComplex,
    z2: SlComplex,
    z3: SlComplex,
    z4: SlComplex,
    out: *mut SlComplex,
) -> SlStatus {
    let status = guard(|| put(out, cross_ratio(z1.into(), z2.into(), z3.into(), z4.into())?.into(), "out"));
    checked(status, out)
}

/// Spectral radius of the nonnegative `n x n` row-major matrix `entries`, and
/// whether it is at least 1.
///
/// # Safety
/// `entries` must point to `n * n` readable doubles; `lambda` and
/// `obstructed` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sl_leading_eigenvalue(
    entries: *const f64,
    n: usize,
    lambda: *mut f64,
    obstructed: *mut bool,
) -> SlStatus {
    if entries.is_null() || lambda.is_null() || obstructed.is_null() {
        return null_pointer();
    }
    guard(|| {
        let len = n.checked_mul(n).ok_or_else(|| Error::Domain("matrix too large".into()))?;
        let flat = std::slice::from_raw_parts(entries, len);
        let rows: Vec<Vec<f64>> = flat.chunks(n.max(1)).map(<[f64]>::to_vec).collect();
        let e = leading_eigenvalue(&ThurstonMatrix::from_rows(&rows)?)?;
        put(lambda, e.value, "lambda")?;
        put(obstructed, e.obstructed, "obstructed")
    })
}

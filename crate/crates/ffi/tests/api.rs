use std::ffi::CStr;
use std::ptr;

use siegel_lab_ffi::*;

const INF: SlPoint = SlPoint { re: 0.0, im: 0.0, infinite: true };

fn finite(re: f64, im: f64) -> SlPoint {
    SlPoint { re, im, infinite: false }
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(sl_last_error_message()) }.to_string_lossy().into_owned()
}

#[test]
fn map_round_trip() {
    let theta = sl_golden_mean();
    let mut map = ptr::null_mut();
    unsafe {
        assert_eq!(sl_map_new(finite(2.0, 0.5), theta, &mut map), SlStatus::Ok);
        let mut p = INF;
        assert_eq!(sl_map_fixed_point(map, &mut p), SlStatus::Ok);
        assert!(!p.infinite);
        let mut w = SlComplex { re: 0.0, im: 0.0 };
        assert_eq!(sl_map_eval(map, SlComplex { re: p.re, im: p.im }, &mut w), SlStatus::Ok);
        assert!((w.re - p.re).abs() < 1e-10 && (w.im - p.im).abs() < 1e-10);

        let mut d = SlComplex { re: 0.0, im: 0.0 };
        assert_eq!(sl_map_derivative(map, SlComplex { re: 0.0, im: 0.0 }, &mut d), SlStatus::Ok);
        let angle = d.im.atan2(d.re).rem_euclid(std::f64::consts::TAU);
        assert!((angle - std::f64::consts::TAU * theta).abs() < 1e-12);
        sl_map_free(map);
    }
}

#[test]
fn errors_carry_status_and_message() {
    let mut map = ptr::null_mut();
    unsafe {
        assert_eq!(sl_map_new(finite(0.0, 0.0), 0.3, &mut map), SlStatus::DegenerateParameter);
        assert!(map.is_null());
        assert!(!last_error().is_empty());
        assert_eq!(sl_map_new(INF, 1.5, &mut map), SlStatus::Domain);
        assert_eq!(sl_map_new(INF, 0.3, ptr::null_mut()), SlStatus::NullPointer);
        assert_eq!(sl_map_eval(ptr::null(), SlComplex { re: 0.0, im: 0.0 }, ptr::null_mut()), SlStatus::NullPointer);
        assert!(!CStr::from_ptr(sl_status_message(SlStatus::Pole)).to_bytes().is_empty());
        sl_map_free(ptr::null_mut());
    }
}

#[test]
fn pole_is_reported() {
    let mut map = ptr::null_mut();
    unsafe {
        assert_eq!(sl_map_new(finite(3.0, 0.0), 0.3, &mut map), SlStatus::Ok);
        // b = -1/2 for c = 3, so the pole sits at z = 2.
        let mut w = SlComplex { re: 0.0, im: 0.0 };
        assert_eq!(sl_map_eval(map, SlComplex { re: 2.0, im: 0.0 }, &mut w), SlStatus::Pole);
        sl_map_free(map);
    }
}

#[test]
fn blaschke_tuning_hits_target() {
    let theta = sl_golden_mean();
    let mut b = ptr::null_mut();
    unsafe {
        assert_eq!(sl_blaschke_new(finite(2.0, 0.0), &mut b), SlStatus::Ok);
        let (mut p, mut q, mut t0) = (SlComplex { re: 0.0, im: 0.0 }, SlComplex { re: 0.0, im: 0.0 }, 1.0);
        assert_eq!(sl_blaschke_params(b, &mut p, &mut q, &mut t0), SlStatus::Ok);
        assert!(p.re.hypot(p.im) > 1.0 && q.re.hypot(q.im) < 1.0);
        assert_eq!(t0, 0.0);

        let (mut t, mut rho) = (0.0, 0.0);
        assert_eq!(sl_blaschke_tune(b, theta, 1e-4, 1_000_000, &mut t, &mut rho), SlStatus::Ok);
        assert!((rho - theta).abs() <= 1e-4);
        let mut measured = 0.0;
        assert_eq!(sl_blaschke_rotation_number(b, 1_000_000, &mut measured), SlStatus::Ok);
        assert!((measured.rem_euclid(1.0) - theta).abs() <= 1e-4);
        sl_blaschke_free(b);
    }
}

#[test]
fn curve_samples_are_angle_ordered() {
    let mut curve = ptr::null_mut();
    unsafe {
        assert_eq!(sl_curve_new(INF, sl_golden_mean(), 2000, &mut curve), SlStatus::Ok);
        let n = sl_curve_len(curve);
        assert_eq!(n, 2000);
        let mut prev = -1.0;
        let mut z = SlComplex { re: 0.0, im: 0.0 };
        for i in 0..n {
            let mut a = 0.0;
            assert_eq!(sl_curve_sample(curve, i, &mut a, &mut z), SlStatus::Ok);
            assert!(a > prev);
            prev = a;
        }
        let mut a = 0.0;
        assert_eq!(sl_curve_sample(curve, n, &mut a, &mut z), SlStatus::IndexOutOfRange);

        let (mut d1, mut d2) = (0.0, 0.0);
        assert_eq!(sl_curve_quasicircle_delta(curve, 500, 7, &mut d1), SlStatus::Ok);
        assert_eq!(sl_curve_quasicircle_delta(curve, 500, 7, &mut d2), SlStatus::Ok);
        assert!(d1 > 0.0);
        assert_eq!(d1.to_bits(), d2.to_bits());
        sl_curve_free(curve);
        assert_eq!(sl_curve_len(ptr::null()), 0);
    }
}

#[test]
fn cross_ratio_matches_formula() {
    let z = [(0.3, 1.0), (-2.0, 0.5), (1.5, -1.0), (0.0, 4.0)].map(|(re, im)| SlComplex { re, im });
    let c = |s: SlComplex| num_complex::Complex64::new(s.re, s.im);
    let expected = ((c(z[0]) - c(z[2])) * (c(z[1]) - c(z[3]))) / ((c(z[1]) - c(z[2])) * (c(z[0]) - c(z[3])));
    let mut out = SlComplex { re: 0.0, im: 0.0 };
    unsafe {
        assert_eq!(sl_cross_ratio(z[0], z[1], z[2], z[3], &mut out), SlStatus::Ok);
        assert!((c(out) - expected).norm() < 1e-14);
        assert_eq!(sl_cross_ratio(z[0], z[0], z[2], z[3], &mut out), SlStatus::CoincidentPoints);
    }
}

#[test]
fn leading_eigenvalue_of_small_matrices() {
    let (mut lambda, mut obstructed) = (0.0, false);
    unsafe {
        let a = [0.5, 0.5, 0.5, 0.5];
        assert_eq!(sl_leading_eigenvalue(a.as_ptr(), 2, &mut lambda, &mut obstructed), SlStatus::Ok);
        assert!((lambda - 1.0).abs() < 1e-12);
        assert!(obstructed);

        let a = [0.0, 0.5, 0.25, 0.0];
        assert_eq!(sl_leading_eigenvalue(a.as_ptr(), 2, &mut lambda, &mut obstructed), SlStatus::Ok);
        assert!((lambda - 0.125f64.sqrt()).abs() < 1e-12);
        assert!(!obstructed);

        assert_eq!(sl_leading_eigenvalue(ptr::null(), 2, &mut lambda, &mut obstructed), SlStatus::NullPointer);
    }
}

use std::ffi::{CStr, CString};
use std::ptr;

use approx::assert_relative_eq;
use coupler_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(coupler_last_error()) }.to_string_lossy().into_owned()
}

unsafe fn take(s: *mut std::ffi::c_char) -> String {
    let out = CStr::from_ptr(s).to_string_lossy().into_owned();
    coupler_string_free(s);
    out
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(coupler_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn example_linear_coupling() {
    unsafe {
        let cfg = coupler_config_example();
        let mut lin = CouplerLinear::default();
        assert_eq!(coupler_linear(cfg, &mut lin), CouplerStatus::Ok);
        assert_relative_eq!(lin.gamma_n_per_m, 3.624_322_717_61e-19, max_relative = 1e-10);
        assert_relative_eq!(lin.gamma_n_per_m, lin.a12_c_per_m * lin.zeta * lin.a34_n_per_c, max_relative = 1e-14);
        assert!(lin.t_swap_s.is_finite() && lin.t_swap_s > 0.0);
        let mut lumped = CouplerLumped::default();
        assert_eq!(coupler_lumped(cfg, &mut lumped), CouplerStatus::Ok);
        assert_relative_eq!(lin.gamma_n_per_m / lumped.gamma_plate_exact_n_per_m, 4.53e-3, max_relative = 1e-2);
        coupler_config_free(cfg);
    }
}

#[test]
fn report_json_is_deterministic() {
    unsafe {
        let cfg = coupler_config_example();
        let mut a = ptr::null_mut();
        let mut b = ptr::null_mut();
        assert_eq!(coupler_report_json(cfg, CouplerModel::Both, &mut a), CouplerStatus::Ok);
        assert_eq!(coupler_report_json(cfg, CouplerModel::Both, &mut b), CouplerStatus::Ok);
        let (a, b) = (take(a), take(b));
        assert_eq!(a, b);
        let v: serde_json::Value = serde_json::from_str(&a).unwrap();
        assert!(v["linear"]["gamma_n_per_m"].is_number());
        coupler_config_free(cfg);
    }
}

#[test]
fn bad_json_reports_validation() {
    unsafe {
        let mut cfg = ptr::null_mut();
        let text = CString::new("{ not json").unwrap();
        assert_eq!(coupler_config_from_json(text.as_ptr(), &mut cfg), CouplerStatus::Validation);
        assert!(cfg.is_null());
        assert!(last_error().contains("malformed"));
        assert_eq!(coupler_config_from_json(ptr::null(), &mut cfg), CouplerStatus::NullPointer);
        let missing = CString::new("/nonexistent/coupler.json").unwrap();
        assert_ne!(coupler_config_load(missing.as_ptr(), &mut cfg), CouplerStatus::Ok);
        assert!(!last_error().is_empty());
    }
}

#[test]
fn null_outputs_are_rejected() {
    unsafe {
        assert_eq!(coupler_linear(ptr::null(), ptr::null_mut()), CouplerStatus::NullPointer);
        assert_eq!(coupler_a12(1.0, 1.0, 1.0, ptr::null_mut()), CouplerStatus::NullPointer);
        assert_eq!(coupler_trajectory_len(ptr::null()), 0);
        coupler_config_free(ptr::null_mut());
        coupler_trajectory_free(ptr::null_mut());
        coupler_string_free(ptr::null_mut());
    }
}

#[test]
fn a12_agrees_with_plane_window() {
    let (q, r, d) = (1.602_176_634e-19, 2.5e-4, 5e-5);
    let mut a12 = 0.0;
    let mut lo = 0.0;
    let mut hi = 0.0;
    let h = 1e-9;
    unsafe {
        assert_eq!(coupler_a12(q, r, d, &mut a12), CouplerStatus::Ok);
        assert_eq!(coupler_induced_charge_plane(q, d - h, r, &mut lo), CouplerStatus::Ok);
        assert_eq!(coupler_induced_charge_plane(q, d + h, r, &mut hi), CouplerStatus::Ok);
    }
    assert_relative_eq!(a12, (hi - lo).abs() / (2.0 * h), max_relative = 1e-6);
    let mut bem = 0.0;
    unsafe {
        assert_eq!(coupler_induced_charge_bem(q, d, r, 64, &mut bem), CouplerStatus::Ok);
    }
    assert!(bem < 0.0 && bem.abs() < q);
    unsafe {
        assert_eq!(coupler_a12(q, -1.0, d, &mut a12), CouplerStatus::Validation);
    }
}

#[test]
fn simulated_exchange_matches_swap_time() {
    let (m, omega) = (40.0 * 1.660_539_066_6e-27, 2.0 * std::f64::consts::PI * 1e6);
    let k = m * omega * omega;
    let gamma = 1e-3 * k;
    let t_swap = std::f64::consts::PI * m * omega / gamma;
    let dt = 2.0 * std::f64::consts::PI / omega / 200.0;
    unsafe {
        let mut traj = ptr::null_mut();
        let status = coupler_simulate(m, omega, gamma, 1e-8, 1.25 * t_swap, dt, 10, &mut traj);
        assert_eq!(status, CouplerStatus::Ok, "{}", last_error());
        let n = coupler_trajectory_len(traj);
        assert!(n > 100);
        let mut first = CouplerSample::default();
        let mut last = CouplerSample::default();
        assert_eq!(coupler_trajectory_sample(traj, 0, &mut first), CouplerStatus::Ok);
        assert_eq!(coupler_trajectory_sample(traj, n - 1, &mut last), CouplerStatus::Ok);
        assert_relative_eq!(first.etot_j, last.etot_j, max_relative = 1e-8);
        assert_eq!(coupler_trajectory_sample(traj, n, &mut last), CouplerStatus::Validation);
        let mut t_ex = 0.0;
        assert_eq!(coupler_trajectory_exchange_time(traj, &mut t_ex), CouplerStatus::Ok);
        assert_relative_eq!(t_ex, t_swap, max_relative = 1e-3);
        coupler_trajectory_free(traj);
    }
}

#[test]
fn simulate_rejects_coarse_step() {
    let (m, omega) = (6.6e-26, 6.28e6);
    let mut traj = ptr::null_mut();
    let status = unsafe { coupler_simulate(m, omega, 1e-20, 1e-8, 1e-3, 1e-6, 1, &mut traj) };
    assert_ne!(status, CouplerStatus::Ok);
    assert!(traj.is_null());
}

#[test]
fn causal_check_and_compose() {
    unsafe {
        let ok = CString::new("x ->= y\ny ->= z\nclaim x ->= z\n").unwrap();
        let mut report = ptr::null_mut();
        assert_eq!(coupler_causal_check(ok.as_ptr(), &mut report), CouplerStatus::Ok);
        assert!(take(report).contains("DERIVABLE"));

        let bad = CString::new("x ->= y\nclaim z ->= x\n").unwrap();
        assert_eq!(coupler_causal_check(bad.as_ptr(), ptr::null_mut()), CouplerStatus::Causal);

        let broken = CString::new("x => y\n").unwrap();
        assert_eq!(coupler_causal_check(broken.as_ptr(), ptr::null_mut()), CouplerStatus::Validation);

        let (a, b) = (CString::new("x <-= y").unwrap(), CString::new("x ->= z").unwrap());
        let mut out = ptr::null_mut();
        assert_eq!(coupler_causal_compose(a.as_ptr(), b.as_ptr(), &mut out), CouplerStatus::Ok);
        assert!(!take(out).is_empty());
    }
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/coupler.h")).unwrap();
    for f in [
        "coupler_version",
        "coupler_last_error",
        "coupler_config_from_json",
        "coupler_linear",
        "coupler_lumped",
        "coupler_report_json",
        "coupler_simulate",
        "coupler_trajectory_sample",
        "coupler_causal_check",
        "coupler_causal_compose",
    ] {
        assert!(header.contains(&format!("{f}(")), "{f} missing from header");
    }
    assert!(header.contains("typedef struct CouplerConfig CouplerConfig;"));
}

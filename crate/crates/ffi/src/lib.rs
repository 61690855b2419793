//! C ABI over the `coupler` library.
//!
//! Every fallible call returns a [`CouplerStatus`]; on failure the message
//! is available from [`coupler_last_error`] on the same thread. Objects are
//! handed out as opaque pointers and must be released with the matching
//! `_free` function. Strings returned by the library are released with
//! [`coupler_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use coupler::config::{validate_config, Config, ValidatedConfig};
use coupler::dynamics::{self, CoupledOscillatorSystem, SimulationOptions, Trajectory};
use coupler::report::{self, ModelSelector, ReportFormat};
use coupler::{causal, linear, oracle, Error};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CouplerStatus {
    Ok = 0,
    Validation = 1,
    Numerical = 2,
    Causal = 3,
    NullPointer = 4,
    Utf8 = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CouplerModel {
    Linear = 0,
    Lumped = 1,
    Both = 2,
}

/// A validated configuration.
pub struct CouplerConfig {
    raw: Config,
    validated: ValidatedConfig,
}

/// A simulated trajectory.
pub struct CouplerTrajectory(Trajectory);

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct CouplerLinear {
    pub a12_c_per_m: f64,
    pub zeta: f64,
    pub a34_n_per_c: f64,
    pub gamma_n_per_m: f64,
    pub gamma_reverse_n_per_m: f64,
    /// NaN when the traps differ in frequency or the ions in mass.
    pub g_rad_per_s: f64,
    pub t_swap_s: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct CouplerLumpedIon {
    pub c_hyb_a_f: f64,
    pub l_hyb_a_h: f64,
    pub c_hyb_b_f: f64,
    pub l_hyb_b_h: f64,
    pub eta: f64,
    pub c_hyb_b_actual_f: f64,
    pub plate_separation_m: f64,
    pub oscillation_energy_j: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct CouplerLumped {
    pub ion1: CouplerLumpedIon,
    pub ion2: CouplerLumpedIon,
    pub c_conductor_f: f64,
    pub gamma_plate_exact_n_per_m: f64,
    pub gamma_plate_large_c_n_per_m: f64,
    pub gamma_plate_geometric_n_per_m: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct CouplerSample {
    pub t_s: f64,
    pub x1_m: f64,
    pub v1_mps: f64,
    pub x2_m: f64,
    pub v2_mps: f64,
    pub e1_j: f64,
    pub e2_j: f64,
    pub etot_j: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(CouplerStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e.exit_code() {
            2 => CouplerStatus::Numerical,
            _ => CouplerStatus::Validation,
        };
        Failure(status, e.to_string())
    }
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> CouplerStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            CouplerStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            CouplerStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(CouplerStatus::NullPointer, format!("{what} is null"))
}

unsafe fn as_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(CouplerStatus::Utf8, format!("{what}: {e}")))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).map_or(ptr::null_mut(), CString::into_raw)
}

fn make_config(raw: Config) -> Result<*mut CouplerConfig, Failure> {
    let validated = validate_config(&raw)?;
    Ok(Box::into_raw(Box::new(CouplerConfig { raw, validated })))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn coupler_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn coupler_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn coupler_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The built-in example configuration. Never null.
#[no_mangle]
pub extern "C" fn coupler_config_example() -> *mut CouplerConfig {
    let raw = Config::example();
    let validated = validate_config(&raw).expect("example configuration is valid");
    Box::into_raw(Box::new(CouplerConfig { raw, validated }))
}

/// # Safety
/// `json` must be a valid NUL-terminated string; `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn coupler_config_from_json(json: *const c_char, out_config: *mut *mut CouplerConfig) -> CouplerStatus {
    guard(|| {
        let slot = out(out_config, "out_config")?;
        let text = as_str(json, "json")?;
        let raw = Config::from_json(text).map_err(|e| Failure(CouplerStatus::Validation, format!("malformed configuration: {e}")))?;
        *slot = make_config(raw)?;
        Ok(())
    })
}

/// # Safety
/// `path` must be a valid NUL-terminated string; `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn coupler_config_load(path: *const c_char, out_config: *mut *mut CouplerConfig) -> CouplerStatus {
    guard(|| {
        let slot = out(out_config, "out_config")?;
        let raw = Config::load(Path::new(as_str(path, "path")?))?;
        *slot = make_config(raw)?;
        Ok(())
    })
}

/// # Safety
/// `config` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn coupler_config_free(config: *mut CouplerConfig) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

/// # Safety
/// `config` must be a live handle; `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn coupler_linear(config: *const CouplerConfig, out_linear: *mut CouplerLinear) -> CouplerStatus {
    guard(|| {
        let c = config.as_ref().ok_or_else(|| null("config"))?;
        let slot = out(out_linear, "out_linear")?;
        let mut warnings = Vec::new();
        let l = report::linear_section(&c.validated, &linear::CapacitanceRatio, &mut warnings)?;
        *slot = CouplerLinear {
            a12_c_per_m: l.a12_c_per_m,
            zeta: l.zeta,
            a34_n_per_c: l.a34_n_per_c,
            gamma_n_per_m: l.gamma_n_per_m,
            gamma_reverse_n_per_m: l.gamma_reverse_n_per_m,
            g_rad_per_s: l.g_rad_per_s.unwrap_or(f64::NAN),
            t_swap_s: l.t_swap_s.unwrap_or(f64::NAN),
        };
        Ok(())
    })
}

fn lumped_ion(e: &coupler::LumpedElements) -> CouplerLumpedIon {
    CouplerLumpedIon {
        c_hyb_a_f: e.c_hyb_a_f,
        l_hyb_a_h: e.l_hyb_a_h,
        c_hyb_b_f: e.c_hyb_b_f,
        l_hyb_b_h: e.l_hyb_b_h,
        eta: e.eta,
        c_hyb_b_actual_f: e.c_hyb_b_actual_f,
        plate_separation_m: e.plate_separation_m,
        oscillation_energy_j: e.oscillation_energy_j,
    }
}

/// # Safety
/// `config` must be a live handle; `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn coupler_lumped(config: *const CouplerConfig, out_lumped: *mut CouplerLumped) -> CouplerStatus {
    guard(|| {
        let c = config.as_ref().ok_or_else(|| null("config"))?;
        let slot = out(out_lumped, "out_lumped")?;
        let l = report::lumped_section(&c.validated)?;
        *slot = CouplerLumped {
            ion1: lumped_ion(&l.ion1),
            ion2: lumped_ion(&l.ion2),
            c_conductor_f: l.c_conductor_f,
            gamma_plate_exact_n_per_m: l.gamma_plate.exact_n_per_m,
            gamma_plate_large_c_n_per_m: l.gamma_plate.large_c_n_per_m,
            gamma_plate_geometric_n_per_m: l.gamma_plate.geometric_n_per_m,
        };
        Ok(())
    })
}

/// Full report as JSON (sorted keys, no timestamp). Free the result with
/// [`coupler_string_free`].
///
/// # Safety
/// `config` must be a live handle; `out_json` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn coupler_report_json(
    config: *const CouplerConfig,
    model: CouplerModel,
    out_json: *mut *mut c_char,
) -> CouplerStatus {
    guard(|| {
        let c = config.as_ref().ok_or_else(|| null("config"))?;
        let slot = out(out_json, "out_json")?;
        let model = match model {
            CouplerModel::Linear => ModelSelector::Linear,
            CouplerModel::Lumped => ModelSelector::Lumped,
            CouplerModel::Both => ModelSelector::Both,
        };
        let r = report::build_report(&c.raw, &c.validated, model, false)?;
        *slot = into_c_string(r.emit(ReportFormat::Json)?);
        Ok(())
    })
}

/// Charge induced on a grounded disk per unit ion displacement, C/m.
///
/// # Safety
/// `out_value` must be a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn coupler_a12(q: f64, r: f64, d: f64, out_value: *mut f64) -> CouplerStatus {
    guard(|| {
        *out(out_value, "out_value")? = linear::a12(q, r, d)?;
        Ok(())
    })
}

/// Image charge inside a window of radius `r` under a charge `q` at height `d`.
///
/// # Safety
/// `out_value` must be a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn coupler_induced_charge_plane(q: f64, d: f64, r: f64, out_value: *mut f64) -> CouplerStatus {
    guard(|| {
        *out(out_value, "out_value")? = oracle::induced_charge_plane_window(q, d, r)?;
        Ok(())
    })
}

/// Total charge on a grounded finite disk from the ring boundary-element solver.
///
/// # Safety
/// `out_value` must be a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn coupler_induced_charge_bem(
    q: f64,
    d: f64,
    radius: f64,
    rings: usize,
    out_value: *mut f64,
) -> CouplerStatus {
    guard(|| {
        *out(out_value, "out_value")? = oracle::induced_charge_bem(q, d, radius, rings)?.total_charge;
        Ok(())
    })
}

/// Two identical oscillators, ion 1 displaced by `amplitude` at rest.
///
/// # Safety
/// `out_trajectory` must be a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn coupler_simulate(
    mass_kg: f64,
    angular_frequency: f64,
    gamma_n_per_m: f64,
    amplitude_m: f64,
    duration_s: f64,
    dt_s: f64,
    record_stride: usize,
    out_trajectory: *mut *mut CouplerTrajectory,
) -> CouplerStatus {
    guard(|| {
        let slot = out(out_trajectory, "out_trajectory")?;
        let system = CoupledOscillatorSystem::identical(mass_kg, angular_frequency, gamma_n_per_m, amplitude_m)?;
        let options = SimulationOptions {
            record_stride,
            ..Default::default()
        };
        let t = dynamics::simulate_with(&system, duration_s, dt_s, options)?;
        *slot = Box::into_raw(Box::new(CouplerTrajectory(t)));
        Ok(())
    })
}

/// Number of recorded samples; 0 for a null handle.
///
/// # Safety
/// `trajectory` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn coupler_trajectory_len(trajectory: *const CouplerTrajectory) -> usize {
    trajectory.as_ref().map_or(0, |t| t.0.samples.len())
}

/// # Safety
/// `trajectory` must be a live handle; `out_sample` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn coupler_trajectory_sample(
    trajectory: *const CouplerTrajectory,
    index: usize,
    out_sample: *mut CouplerSample,
) -> CouplerStatus {
    guard(|| {
        let t = trajectory.as_ref().ok_or_else(|| null("trajectory"))?;
        let slot = out(out_sample, "out_sample")?;
        let s = t.0.samples.get(index).ok_or_else(|| {
            Failure(
                CouplerStatus::Validation,
                format!("index {index} out of range (len {})", t.0.samples.len()),
            )
        })?;
        *slot = CouplerSample {
            t_s: s.t,
            x1_m: s.x1,
            v1_mps: s.v1,
            x2_m: s.x2,
            v2_mps: s.v2,
            e1_j: s.e1,
            e2_j: s.e2,
            etot_j: s.e_total,
        };
        Ok(())
    })
}

/// # Safety
/// `trajectory` must be a live handle; `out_value` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn coupler_trajectory_exchange_time(
    trajectory: *const CouplerTrajectory,
    out_value: *mut f64,
) -> CouplerStatus {
    guard(|| {
        let t = trajectory.as_ref().ok_or_else(|| null("trajectory"))?;
        *out(out_value, "out_value")? = dynamics::exchange_time(&t.0)?;
        Ok(())
    })
}

/// # Safety
/// `trajectory` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn coupler_trajectory_free(trajectory: *mut CouplerTrajectory) {
    if !trajectory.is_null() {
        drop(Box::from_raw(trajectory));
    }
}

/// Checks a derivation script. Returns `COUPLER_STATUS_CAUSAL` when a claim
/// is not derivable and `COUPLER_STATUS_VALIDATION` for malformed scripts.
/// `out_report` (optional) receives the text verdict report.
///
/// # Safety
/// `script` must be a valid NUL-terminated string; `out_report` null or writable.
#[no_mangle]
pub unsafe extern "C" fn coupler_causal_check(script: *const c_char, out_report: *mut *mut c_char) -> CouplerStatus {
    guard(|| {
        let text = as_str(script, "script")?;
        let report = causal::check_derivation(text).map_err(|e| Failure(CouplerStatus::Validation, e.to_string()))?;
        if let Some(slot) = out_report.as_mut() {
            *slot = into_c_string(report.render_text());
        }
        if report.all_derivable() {
            Ok(())
        } else {
            Err(Failure(CouplerStatus::Causal, "a claim is not derivable".into()))
        }
    })
}

/// Composes two relations; `out_result` receives the conclusion (or the
/// reason there is none).
///
/// # Safety
/// Both relations must be valid NUL-terminated strings; `out_result` writable.
#[no_mangle]
pub unsafe extern "C" fn coupler_causal_compose(
    first: *const c_char,
    second: *const c_char,
    out_result: *mut *mut c_char,
) -> CouplerStatus {
    guard(|| {
        let slot = out(out_result, "out_result")?;
        let parse = |p, what| -> Result<causal::CausalRelation, Failure> {
            causal::parse_relation(as_str(p, what)?).map_err(|e| Failure(CouplerStatus::Validation, format!("{what}: {e}")))
        };
        let (a, b) = (parse(first, "first")?, parse(second, "second")?);
        let c = causal::compose(&a, &b).map_err(|e| Failure(CouplerStatus::Validation, e.to_string()))?;
        *slot = into_c_string(c.to_string());
        Ok(())
    })
}

/// Success flag helper for callers that only need a boolean.
#[no_mangle]
pub extern "C" fn coupler_status_is_ok(status: CouplerStatus) -> c_int {
    c_int::from(status == CouplerStatus::Ok)
}

//! C ABI for the flux-qubit chain simulator.
//!
//! Conventions: every fallible function returns a [`FluxldeStatus`] and
//! writes results through out-pointers; handles are opaque and must be
//! released with the matching `_free` function; `fluxlde_last_error`
//! returns a thread-local message for the most recent failure.

use std::cell::RefCell;
use std::ffi::{c_char, CString};

use fluxlde::dynamics::{run_protocol_dc, run_protocol_mw, EvolutionTrace, MwModel};
use fluxlde::hamiltonians::{build_dc, build_xx_effective, DcChainConfig, MwChainConfig};
use fluxlde::metrics::{concurrence, TwoQubitDensityMatrix};
use fluxlde::readout::{measurement_time, optimal_q, ReadoutParams};
use fluxlde::spectral::ground_state;
use fluxlde::{CMatrix, TWO_PI};

/// Result code of every fallible API call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FluxldeStatus {
    /// Success.
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Arguments were rejected before any computation ran.
    InvalidArgument = 2,
    /// The computation itself failed; see `fluxlde_last_error`.
    ComputeError = 3,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(e: fluxlde::Error) -> FluxldeStatus {
    set_error(&e.to_string());
    match e {
        fluxlde::Error::InvalidConfig(_)
        | fluxlde::Error::RunConfig(_)
        | fluxlde::Error::SiteOutOfRange { .. }
        | fluxlde::Error::OddChainLength(_) => FluxldeStatus::InvalidArgument,
        _ => FluxldeStatus::ComputeError,
    }
}

/// Message describing the most recent error on this thread. The pointer is
/// valid until the next failing call on the same thread; do not free it.
#[no_mangle]
pub extern "C" fn fluxlde_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Opaque dc-protocol chain configuration.
pub struct FluxldeDcConfig(DcChainConfig);

/// Opaque microwave-protocol chain configuration.
pub struct FluxldeMwConfig(MwChainConfig);

/// Opaque evolution trace (sampled fidelity/concurrence time series).
pub struct FluxldeTrace(EvolutionTrace);

/// Creates a dc chain configuration. All frequencies are linear GHz.
/// Returns a handle through `out`; free with `fluxlde_dc_config_free`.
#[no_mangle]
pub extern "C" fn fluxlde_dc_config_new(
    n_sites: usize,
    j_ghz: f64,
    lambda: f64,
    lambda_h: f64,
    delta_ghz: f64,
    eps0_ghz: f64,
    ramp_ghz: f64,
    out: *mut *mut FluxldeDcConfig,
) -> FluxldeStatus {
    if out.is_null() {
        return FluxldeStatus::NullPointer;
    }
    let cfg = DcChainConfig {
        n_sites,
        j_ghz,
        lambda,
        lambda_h,
        delta_ghz,
        eps0_ghz,
        ramp_ghz,
        ..DcChainConfig::reference()
    };
    if let Err(e) = cfg.validate() {
        return fail(e);
    }
    unsafe { *out = Box::into_raw(Box::new(FluxldeDcConfig(cfg))) };
    FluxldeStatus::Ok
}

/// Reference dc operating point (four-site chain, Δ = 4.5, ε₀ = 20, J = 5 GHz, λ = 0.2, λ_h = 0.02, r = 0.04 GHz).
#[no_mangle]
pub extern "C" fn fluxlde_dc_config_default(out: *mut *mut FluxldeDcConfig) -> FluxldeStatus {
    if out.is_null() {
        return FluxldeStatus::NullPointer;
    }
    unsafe { *out = Box::into_raw(Box::new(FluxldeDcConfig(DcChainConfig::reference()))) };
    FluxldeStatus::Ok
}

/// Frees a dc configuration handle (null is a no-op).
#[no_mangle]
pub extern "C" fn fluxlde_dc_config_free(cfg: *mut FluxldeDcConfig) {
    if !cfg.is_null() {
        drop(unsafe { Box::from_raw(cfg) });
    }
}

/// Creates a microwave chain configuration (resonant drive, default phases).
#[no_mangle]
pub extern "C" fn fluxlde_mw_config_new(
    n_sites: usize,
    j_ghz: f64,
    lambda: f64,
    delta_ghz: f64,
    omega0_ghz: f64,
    ramp_ghz: f64,
    out: *mut *mut FluxldeMwConfig,
) -> FluxldeStatus {
    if out.is_null() {
        return FluxldeStatus::NullPointer;
    }
    let cfg = MwChainConfig {
        n_sites,
        j_ghz,
        lambda,
        delta_ghz,
        omega0_ghz,
        ramp_ghz,
        ..MwChainConfig::reference()
    };
    if let Err(e) = cfg.validate() {
        return fail(e);
    }
    unsafe { *out = Box::into_raw(Box::new(FluxldeMwConfig(cfg))) };
    FluxldeStatus::Ok
}

/// Reference mw operating point (four-site chain, Δ = 10, Ω₀ = 2, J = 1 GHz, λ = 0.2, r = 0.02 GHz, resonant drive).
#[no_mangle]
pub extern "C" fn fluxlde_mw_config_default(out: *mut *mut FluxldeMwConfig) -> FluxldeStatus {
    if out.is_null() {
        return FluxldeStatus::NullPointer;
    }
    unsafe { *out = Box::into_raw(Box::new(FluxldeMwConfig(MwChainConfig::reference()))) };
    FluxldeStatus::Ok
}

/// Frees a microwave configuration handle (null is a no-op).
#[no_mangle]
pub extern "C" fn fluxlde_mw_config_free(cfg: *mut FluxldeMwConfig) {
    if !cfg.is_null() {
        drop(unsafe { Box::from_raw(cfg) });
    }
}

fn gap_and_concurrence(h: &CMatrix, n_sites: usize) -> fluxlde::Result<(f64, f64)> {
    let gs = ground_state(h)?;
    let c = if gs.degenerate {
        f64::NAN
    } else {
        fluxlde::metrics::end_to_end_concurrence(&gs.state, n_sites)?
    };
    Ok((gs.gap / TWO_PI, c))
}

/// Ground-state gap (linear GHz) and end-to-end concurrence of the dc chain
/// at bias amplitude `eps_ghz`. Either out-pointer may be null to skip it;
/// concurrence is NaN at degenerate points.
#[no_mangle]
pub extern "C" fn fluxlde_dc_ground_properties(
    cfg: *const FluxldeDcConfig,
    eps_ghz: f64,
    out_gap_ghz: *mut f64,
    out_concurrence: *mut f64,
) -> FluxldeStatus {
    let Some(cfg) = (unsafe { cfg.as_ref() }) else {
        return FluxldeStatus::NullPointer;
    };
    let r = build_dc(&cfg.0, eps_ghz).and_then(|h| gap_and_concurrence(&h, cfg.0.n_sites));
    match r {
        Ok((gap, c)) => {
            if !out_gap_ghz.is_null() {
                unsafe { *out_gap_ghz = gap };
            }
            if !out_concurrence.is_null() {
                unsafe { *out_concurrence = c };
            }
            FluxldeStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Ground-state gap (linear GHz) and end-to-end concurrence of the effective
/// XX chain at drive amplitude `omega_drive_ghz`.
#[no_mangle]
pub extern "C" fn fluxlde_mw_ground_properties(
    cfg: *const FluxldeMwConfig,
    omega_drive_ghz: f64,
    out_gap_ghz: *mut f64,
    out_concurrence: *mut f64,
) -> FluxldeStatus {
    let Some(cfg) = (unsafe { cfg.as_ref() }) else {
        return FluxldeStatus::NullPointer;
    };
    let r = build_xx_effective(&cfg.0, omega_drive_ghz)
        .and_then(|h| gap_and_concurrence(&h, cfg.0.n_sites));
    match r {
        Ok((gap, c)) => {
            if !out_gap_ghz.is_null() {
                unsafe { *out_gap_ghz = gap };
            }
            if !out_concurrence.is_null() {
                unsafe { *out_concurrence = c };
            }
            FluxldeStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Runs the dc ramp protocol for `t_final_ns`, sampling `n_samples` points.
/// On success `out` receives a trace handle; free with `fluxlde_trace_free`.
#[no_mangle]
pub extern "C" fn fluxlde_run_dc(
    cfg: *const FluxldeDcConfig,
    t_final_ns: f64,
    n_samples: usize,
    out: *mut *mut FluxldeTrace,
) -> FluxldeStatus {
    let Some(cfg) = (unsafe { cfg.as_ref() }) else {
        return FluxldeStatus::NullPointer;
    };
    if out.is_null() {
        return FluxldeStatus::NullPointer;
    }
    if !(t_final_ns >= 0.0) || n_samples == 0 {
        set_error("t_final_ns must be >= 0 and n_samples >= 1");
        return FluxldeStatus::InvalidArgument;
    }
    match run_protocol_dc(&cfg.0, t_final_ns, n_samples) {
        Ok(trace) => {
            unsafe { *out = Box::into_raw(Box::new(FluxldeTrace(trace))) };
            FluxldeStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Microwave-protocol model selector.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FluxldeMwModel {
    /// Full driven chain in the lab frame.
    Full = 0,
    /// Effective XX model in the rotating frame.
    Effective = 1,
}

/// Runs the microwave ramp protocol with the chosen model.
#[no_mangle]
pub extern "C" fn fluxlde_run_mw(
    cfg: *const FluxldeMwConfig,
    t_final_ns: f64,
    n_samples: usize,
    model: FluxldeMwModel,
    out: *mut *mut FluxldeTrace,
) -> FluxldeStatus {
    let Some(cfg) = (unsafe { cfg.as_ref() }) else {
        return FluxldeStatus::NullPointer;
    };
    if out.is_null() {
        return FluxldeStatus::NullPointer;
    }
    if !(t_final_ns >= 0.0) || n_samples == 0 {
        set_error("t_final_ns must be >= 0 and n_samples >= 1");
        return FluxldeStatus::InvalidArgument;
    }
    let model = match model {
        FluxldeMwModel::Full => MwModel::Full,
        FluxldeMwModel::Effective => MwModel::Effective,
    };
    match run_protocol_mw(&cfg.0, t_final_ns, n_samples, model) {
        Ok(trace) => {
            unsafe { *out = Box::into_raw(Box::new(FluxldeTrace(trace))) };
            FluxldeStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Number of sampled rows in a trace.
#[no_mangle]
pub extern "C" fn fluxlde_trace_len(trace: *const FluxldeTrace) -> usize {
    match unsafe { trace.as_ref() } {
        Some(t) => t.0.rows.len(),
        None => 0,
    }
}

/// Reads row `index` of a trace. Any out-pointer may be null to skip that
/// column. Fidelity is NaN at degenerate instantaneous ground states.
#[no_mangle]
pub extern "C" fn fluxlde_trace_row(
    trace: *const FluxldeTrace,
    index: usize,
    out_t_ns: *mut f64,
    out_control_ghz: *mut f64,
    out_fidelity: *mut f64,
    out_concurrence: *mut f64,
    out_norm_error: *mut f64,
) -> FluxldeStatus {
    let Some(t) = (unsafe { trace.as_ref() }) else {
        return FluxldeStatus::NullPointer;
    };
    let Some(row) = t.0.rows.get(index) else {
        set_error("trace row index out of range");
        return FluxldeStatus::InvalidArgument;
    };
    unsafe {
        if !out_t_ns.is_null() {
            *out_t_ns = row.t_ns;
        }
        if !out_control_ghz.is_null() {
            *out_control_ghz = row.control_ghz;
        }
        if !out_fidelity.is_null() {
            *out_fidelity = row.fidelity;
        }
        if !out_concurrence.is_null() {
            *out_concurrence = row.concurrence;
        }
        if !out_norm_error.is_null() {
            *out_norm_error = row.norm_error;
        }
    }
    FluxldeStatus::Ok
}

/// Frees a trace handle (null is a no-op).
#[no_mangle]
pub extern "C" fn fluxlde_trace_free(trace: *mut FluxldeTrace) {
    if !trace.is_null() {
        drop(unsafe { Box::from_raw(trace) });
    }
}

/// Wootters concurrence of a two-qubit density matrix given as two 16-entry
/// row-major arrays (real and imaginary parts). The matrix must be
/// Hermitian, unit-trace, and positive semidefinite within validation
/// tolerance.
#[no_mangle]
pub extern "C" fn fluxlde_concurrence(
    rho_re: *const f64,
    rho_im: *const f64,
    out: *mut f64,
) -> FluxldeStatus {
    if rho_re.is_null() || rho_im.is_null() || out.is_null() {
        return FluxldeStatus::NullPointer;
    }
    let re = unsafe { std::slice::from_raw_parts(rho_re, 16) };
    let im = unsafe { std::slice::from_raw_parts(rho_im, 16) };
    let m = CMatrix::from_fn(4, 4, |i, j| {
        num_complex::Complex64::new(re[4 * i + j], im[4 * i + j])
    });
    match TwoQubitDensityMatrix::new(m).and_then(|rho| concurrence(&rho)) {
        Ok(c) => {
            unsafe { *out = c };
            FluxldeStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Dispersive-readout timing: measurement time at quality factor `q` and the
/// optimal integer quality factor over `[q_min, q_max]`. Either out-pointer
/// may be null to skip that estimate.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub extern "C" fn fluxlde_readout_timing(
    lq_ph: f64,
    iq_ua: f64,
    kappa: f64,
    tn_k: f64,
    omega_r_ghz: f64,
    q: f64,
    q_min: u32,
    q_max: u32,
    out_t_meas_ns: *mut f64,
    out_optimal_q: *mut u32,
) -> FluxldeStatus {
    let p = ReadoutParams { lq_ph, iq_ua, kappa, tn_k, omega_r_ghz, q };
    if let Err(e) = p.validate() {
        return fail(e);
    }
    if !out_t_meas_ns.is_null() {
        unsafe { *out_t_meas_ns = measurement_time(&p) };
    }
    if !out_optimal_q.is_null() {
        match optimal_q(&p, q_min, q_max) {
            Ok(v) => unsafe { *out_optimal_q = v },
            Err(e) => return fail(e),
        }
    }
    FluxldeStatus::Ok
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CStr;
    use std::ptr;

    #[test]
    fn dc_round_trip() {
        let mut cfg: *mut FluxldeDcConfig = ptr::null_mut();
        assert_eq!(fluxlde_dc_config_default(&mut cfg), FluxldeStatus::Ok);
        let mut gap = 0.0;
        let mut c = 0.0;
        assert_eq!(
            fluxlde_dc_ground_properties(cfg, 0.0, &mut gap, &mut c),
            FluxldeStatus::Ok
        );
        assert!((gap - 0.058).abs() < 0.058 * 0.02, "gap {gap}");
        assert!(c > 0.5 && c < 0.8, "concurrence {c}");
        fluxlde_dc_config_free(cfg);
    }

    #[test]
    fn mw_round_trip() {
        let mut cfg: *mut FluxldeMwConfig = ptr::null_mut();
        assert_eq!(fluxlde_mw_config_default(&mut cfg), FluxldeStatus::Ok);
        let mut gap = 0.0;
        let mut c = 0.0;
        assert_eq!(
            fluxlde_mw_ground_properties(cfg, 0.0, &mut gap, &mut c),
            FluxldeStatus::Ok
        );
        assert!((gap - 0.038).abs() < 0.038 * 0.03, "gap {gap}");
        assert!(c > 0.8, "concurrence {c}");
        fluxlde_mw_config_free(cfg);
    }

    #[test]
    fn invalid_config_reports_error() {
        let mut cfg: *mut FluxldeDcConfig = ptr::null_mut();
        let st = fluxlde_dc_config_new(4, -1.0, 0.2, 0.02, 4.5, 20.0, 0.04, &mut cfg);
        assert_eq!(st, FluxldeStatus::InvalidArgument);
        let msg = unsafe { CStr::from_ptr(fluxlde_last_error()) }
            .to_string_lossy()
            .to_string();
        assert!(msg.contains("J"), "{msg}");
    }

    #[test]
    fn trace_lifecycle() {
        let mut cfg: *mut FluxldeDcConfig = ptr::null_mut();
        fluxlde_dc_config_default(&mut cfg);
        let mut trace: *mut FluxldeTrace = ptr::null_mut();
        assert_eq!(fluxlde_run_dc(cfg, 1.0, 5, &mut trace), FluxldeStatus::Ok);
        assert_eq!(fluxlde_trace_len(trace), 5);
        let mut t = -1.0;
        let mut f = 0.0;
        assert_eq!(
            fluxlde_trace_row(trace, 0, &mut t, ptr::null_mut(), &mut f, ptr::null_mut(), ptr::null_mut()),
            FluxldeStatus::Ok
        );
        assert_eq!(t, 0.0);
        assert!((f - 1.0).abs() < 1e-9);
        assert_eq!(
            fluxlde_trace_row(trace, 99, ptr::null_mut(), ptr::null_mut(), ptr::null_mut(), ptr::null_mut(), ptr::null_mut()),
            FluxldeStatus::InvalidArgument
        );
        fluxlde_trace_free(trace);
        fluxlde_dc_config_free(cfg);
    }

    #[test]
    fn concurrence_of_bell_state() {
        // |Φ+⟩⟨Φ+| has 0.5 at the four corners
        let mut re = [0.0; 16];
        re[0] = 0.5;
        re[3] = 0.5;
        re[12] = 0.5;
        re[15] = 0.5;
        let im = [0.0; 16];
        let mut c = 0.0;
        assert_eq!(fluxlde_concurrence(re.as_ptr(), im.as_ptr(), &mut c), FluxldeStatus::Ok);
        assert!((c - 1.0).abs() < 1e-9);
    }

    #[test]
    fn readout_timing() {
        let mut t = 0.0;
        let mut q = 0u32;
        let st = fluxlde_readout_timing(25.0, 0.25, 0.01, 5.0, 7.5, 75.0, 10, 500, &mut t, &mut q);
        assert_eq!(st, FluxldeStatus::Ok);
        assert!((t - 1.5).abs() <= 0.3);
        assert!((q as i32 - 75).abs() <= 5);
    }

    #[test]
    fn null_pointers_are_rejected() {
        assert_eq!(
            fluxlde_dc_config_default(ptr::null_mut()),
            FluxldeStatus::NullPointer
        );
        assert_eq!(fluxlde_trace_len(ptr::null()), 0);
        let mut c = 0.0;
        assert_eq!(
            fluxlde_concurrence(ptr::null(), ptr::null(), &mut c),
            FluxldeStatus::NullPointer
        );
    }
}

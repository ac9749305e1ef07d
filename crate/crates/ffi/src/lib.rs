//! C ABI for `hcb-entropy`.
//!
//! Every fallible function returns an [`HcbStatus`] and writes its result
//! through an out pointer. On failure the message is available from
//! [`hcb_last_error_message`] on the same thread. Handles are opaque and
//! must be released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hcb_entropy::finite::{self, ThermalBlockModel, ThermalMode};
use hcb_entropy::{thermo, Backend, Error, SectorSpectrum, SystemShape};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HcbStatus {
    Ok = 0,
    Domain = 1,
    Shape = 2,
    Sector = 3,
    BlockLabel = 4,
    TooLarge = 5,
    ClusterAmbiguity = 6,
    NoConvergence = 7,
    Argument = 8,
    NullPointer = 9,
    IndexOutOfRange = 10,
    Panic = 11,
}

/// Arithmetic used for the eigenvalue tables.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HcbBackend {
    /// Rational up to L = 200, log-space floats above.
    Auto = 0,
    Rational = 1,
    LogFloat = 2,
}

/// How sector spectra are combined at finite temperature.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HcbThermalMode {
    MeanOfEntropies = 0,
    EntropyOfMean = 1,
}

/// One row of a sector spectrum.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HcbEigenvalue {
    pub k: usize,
    pub s: usize,
    pub lambda: f64,
    /// May round for very large blocks.
    pub degeneracy: f64,
}

/// Eigenvalue table of one sector.
pub struct HcbSpectrum {
    inner: SectorSpectrum,
}

/// Cached sector spectra for temperature sweeps.
pub struct HcbThermalModel {
    inner: ThermalBlockModel,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> HcbStatus {
    match e {
        Error::Domain { .. } => HcbStatus::Domain,
        Error::Shape { .. } => HcbStatus::Shape,
        Error::Sector { .. } => HcbStatus::Sector,
        Error::BlockLabel { .. } => HcbStatus::BlockLabel,
        Error::TooLarge { .. } => HcbStatus::TooLarge,
        Error::ClusterAmbiguity { .. } => HcbStatus::ClusterAmbiguity,
        Error::NoConvergence { .. } => HcbStatus::NoConvergence,
        Error::Argument(_) => HcbStatus::Argument,
    }
}

fn fail(status: HcbStatus, msg: impl Into<String>) -> HcbStatus {
    set_last_error(msg.into());
    status
}

/// Runs `f`, stores its value in `out` and converts errors and panics.
fn guard<T>(out: *mut T, f: impl FnOnce() -> hcb_entropy::Result<T>) -> HcbStatus {
    if out.is_null() {
        return fail(HcbStatus::NullPointer, "output pointer is null");
    }
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(v)) => {
            // SAFETY: `out` is non-null and the caller guarantees it is writable.
            unsafe { out.write(v) };
            HcbStatus::Ok
        }
        Ok(Err(e)) => fail(status_of(&e), e.to_string()),
        Err(_) => fail(HcbStatus::Panic, "internal panic"),
    }
}

fn backend(b: HcbBackend, sites: usize) -> Backend {
    match b {
        HcbBackend::Auto => Backend::default_for(sites),
        HcbBackend::Rational => Backend::Rational,
        HcbBackend::LogFloat => Backend::LogFloat,
    }
}

fn mode(m: HcbThermalMode) -> ThermalMode {
    match m {
        HcbThermalMode::MeanOfEntropies => ThermalMode::MeanOfEntropies,
        HcbThermalMode::EntropyOfMean => ThermalMode::EntropyOfMean,
    }
}

/// Message of the last failed call on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn hcb_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Clears the stored error message.
#[no_mangle]
pub extern "C" fn hcb_clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn hcb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Binary entropy in bits.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hcb_binary_entropy(x: f64, out: *mut f64) -> HcbStatus {
    guard(out, || hcb_entropy::arith::binary_entropy(x))
}

/// Inverse temperature at which the chemical-potential parameter equals `mu`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hcb_beta_star(mu: f64, out: *mut f64) -> HcbStatus {
    guard(out, || thermo::beta_star(mu))
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hcb_critical_temperature(p: f64, out: *mut f64) -> HcbStatus {
    guard(out, || thermo::critical_temperature(p))
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hcb_mu_star(beta: f64, p: f64, out: *mut f64) -> HcbStatus {
    guard(out, || thermo::mu_star(beta, p))
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hcb_order_parameter(p: f64, mu: f64, out: *mut f64) -> HcbStatus {
    guard(out, || thermo::order_parameter(p, mu))
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hcb_free_energy_density(beta: f64, p: f64, out: *mut f64) -> HcbStatus {
    guard(out, || thermo::free_energy_density(beta, p))
}

/// Block entropy in bits of `n` sites in the thermodynamic limit.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hcb_limit_block_entropy(
    p: f64,
    mu: f64,
    n: usize,
    out: *mut f64,
) -> HcbStatus {
    guard(out, || thermo::limit_block_entropy(p, mu, n))
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hcb_sector_energy(
    sites: usize,
    particles: usize,
    r: usize,
    out: *mut f64,
) -> HcbStatus {
    guard(out, || finite::sector_energy(sites, particles, r))
}

/// Block entropy in bits of a finite lattice at inverse temperature `beta`
/// (`INFINITY` for the ground state).
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hcb_thermal_block_entropy(
    sites: usize,
    particles: usize,
    block: usize,
    beta: f64,
    thermal_mode: HcbThermalMode,
    arith: HcbBackend,
    out: *mut f64,
) -> HcbStatus {
    guard(out, || {
        let shape = SystemShape::new(sites, particles, block)?;
        finite::thermal_block_entropy(&shape, beta, mode(thermal_mode), backend(arith, sites))
    })
}

/// Builds the eigenvalue table of sector `r`.
///
/// # Safety
/// `out` must be valid for writes. The handle is released with
/// [`hcb_spectrum_free`].
#[no_mangle]
pub unsafe extern "C" fn hcb_spectrum_new(
    sites: usize,
    particles: usize,
    block: usize,
    r: usize,
    arith: HcbBackend,
    out: *mut *mut HcbSpectrum,
) -> HcbStatus {
    guard(out, || {
        let shape = SystemShape::new(sites, particles, block)?;
        let inner = finite::sector_spectrum(&shape, r, backend(arith, sites))?;
        Ok(Box::into_raw(Box::new(HcbSpectrum { inner })))
    })
}

/// # Safety
/// `spectrum` must come from [`hcb_spectrum_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hcb_spectrum_free(spectrum: *mut HcbSpectrum) {
    if !spectrum.is_null() {
        drop(Box::from_raw(spectrum));
    }
}

/// Number of rows; 0 for a NULL handle.
///
/// # Safety
/// `spectrum` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hcb_spectrum_len(spectrum: *const HcbSpectrum) -> usize {
    spectrum.as_ref().map_or(0, |s| s.inner.entries.len())
}

/// # Safety
/// `spectrum` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hcb_spectrum_get(
    spectrum: *const HcbSpectrum,
    index: usize,
    out: *mut HcbEigenvalue,
) -> HcbStatus {
    let Some(s) = spectrum.as_ref() else {
        return fail(HcbStatus::NullPointer, "spectrum handle is null");
    };
    let Some(e) = s.inner.entries.get(index) else {
        return fail(
            HcbStatus::IndexOutOfRange,
            format!(
                "index {index} out of range for {} rows",
                s.inner.entries.len()
            ),
        );
    };
    guard(out, || {
        Ok(HcbEigenvalue {
            k: e.k,
            s: e.s,
            lambda: e.value.to_f64(),
            degeneracy: e.degeneracy_f64(),
        })
    })
}

/// Exact eigenvalue of row `index` as a `"num/den"` string, or NULL for the
/// float backend. Release with [`hcb_string_free`].
///
/// # Safety
/// `spectrum` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hcb_spectrum_exact(
    spectrum: *const HcbSpectrum,
    index: usize,
) -> *mut c_char {
    spectrum
        .as_ref()
        .and_then(|s| s.inner.entries.get(index))
        .and_then(|e| e.value.exact())
        .and_then(|x| CString::new(x.to_string()).ok())
        .map_or(ptr::null_mut(), CString::into_raw)
}

/// # Safety
/// `spectrum` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hcb_spectrum_trace(
    spectrum: *const HcbSpectrum,
    out: *mut f64,
) -> HcbStatus {
    let Some(s) = spectrum.as_ref() else {
        return fail(HcbStatus::NullPointer, "spectrum handle is null");
    };
    guard(out, || Ok(s.inner.trace()))
}

/// # Safety
/// `spectrum` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hcb_spectrum_entropy(
    spectrum: *const HcbSpectrum,
    out: *mut f64,
) -> HcbStatus {
    let Some(s) = spectrum.as_ref() else {
        return fail(HcbStatus::NullPointer, "spectrum handle is null");
    };
    guard(out, || Ok(s.inner.entropy_bits()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn hcb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `out` must be valid for writes. Release with [`hcb_thermal_model_free`].
#[no_mangle]
pub unsafe extern "C" fn hcb_thermal_model_new(
    sites: usize,
    particles: usize,
    block: usize,
    arith: HcbBackend,
    out: *mut *mut HcbThermalModel,
) -> HcbStatus {
    guard(out, || {
        let shape = SystemShape::new(sites, particles, block)?;
        let inner = ThermalBlockModel::new(shape, backend(arith, sites))?;
        Ok(Box::into_raw(Box::new(HcbThermalModel { inner })))
    })
}

/// # Safety
/// `model` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hcb_thermal_model_entropy(
    model: *const HcbThermalModel,
    beta: f64,
    thermal_mode: HcbThermalMode,
    out: *mut f64,
) -> HcbStatus {
    let Some(m) = model.as_ref() else {
        return fail(HcbStatus::NullPointer, "model handle is null");
    };
    guard(out, || m.inner.entropy(beta, mode(thermal_mode)))
}

/// # Safety
/// `model` must come from [`hcb_thermal_model_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hcb_thermal_model_free(model: *mut HcbThermalModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

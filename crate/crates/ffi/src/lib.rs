//! C ABI over the `fitland` library.
//!
//! Landscapes cross the boundary as opaque `FlLandscape` handles. Every
//! function returns an `FlStatus`; on failure a message describing the error
//! is available from `fl_last_error` on the calling thread until the next
//! call into this library from that thread. Strings returned through `char**`
//! out-parameters are owned by the caller and must be released with
//! `fl_string_free`. Handles are immutable and may be shared between threads.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fitland::evolution::{run_de, WalkMethod};
use fitland::generators::{generate, GeneratorConfig};
use fitland::io::{load_landscape, CsvOptions};
use fitland::snapshot::save_snapshot;
use fitland::{
    analyze, Alphabet, AlphabetChoice, AnalysisOptions, Error, FeatureReport, FeatureSet,
    Landscape, VariantRecord,
};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// An option or parameter was out of range or malformed.
    InvalidArgument = 3,
    /// The input data was rejected (ingestion, degenerate data, bad file).
    DataError = 4,
    /// A file could not be read or written.
    IoError = 5,
    /// An internal panic was caught at the boundary.
    Panic = 6,
}

/// Opaque handle to an immutable landscape.
pub struct FlLandscape {
    inner: Landscape,
}

/// Adaptive walk rule for `fl_run_de`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlWalkMethod {
    Greedy = 0,
    Stochastic = 1,
}

/// Analysis options. Start from `fl_analysis_options_default` and override
/// fields as needed. NaN for `eps_tol` or `sigma` and 0 for `walk_length`
/// select the data-driven defaults.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct FlAnalysisOptions {
    /// Comma-separated feature names, or null for all features.
    pub features: *const c_char,
    pub eps_tol: f64,
    pub sigma: f64,
    pub walks: usize,
    pub walk_length: usize,
    pub seed: u64,
    pub max_fit_nodes: usize,
    pub max_optima: usize,
}

/// The twenty features in report order. Undefined or skipped features are NaN.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct FlFeatures {
    pub phi_lo: f64,
    pub rs_ratio: f64,
    pub rho_a: f64,
    pub gamma: f64,
    pub nfc: f64,
    pub eps_mag: f64,
    pub eps_sign: f64,
    pub eps_reci: f64,
    pub eps_pos: f64,
    pub eps_neg: f64,
    pub i_id: f64,
    pub eps_dr: f64,
    pub eps_ic: f64,
    pub eps_pairwise_r2: f64,
    pub fdc: f64,
    pub alpha_go: f64,
    pub bfc_acc: f64,
    pub bfc_greedy: f64,
    pub phi_ee: f64,
    pub eta: f64,
}

/// Summary of a batch of adaptive walks.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct FlDeSummary {
    pub runs: usize,
    pub mean_percentile: f64,
    pub mean_steps: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

struct Failure(FlStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Io(_) => FlStatus::IoError,
            Error::InvalidParameter(_) | Error::InvalidK { .. } => FlStatus::InvalidArgument,
            _ => FlStatus::DataError,
        };
        Failure(status, e.to_string())
    }
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure(FlStatus::InvalidArgument, msg.into())
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> FlStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FlStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            FlStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(FlStatus::NullPointer, format!("{name} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(FlStatus::InvalidUtf8, format!("{name} is not valid UTF-8")))
}

unsafe fn opt_str_arg<'a>(p: *const c_char, name: &str) -> Result<Option<&'a str>, Failure> {
    if p.is_null() {
        Ok(None)
    } else {
        str_arg(p, name).map(Some)
    }
}

unsafe fn handle<'a>(p: *const FlLandscape) -> Result<&'a Landscape, Failure> {
    p.as_ref()
        .map(|h| &h.inner)
        .ok_or_else(|| Failure(FlStatus::NullPointer, "landscape handle is null".into()))
}

unsafe fn out_ptr<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, Failure> {
    p.as_mut()
        .ok_or_else(|| Failure(FlStatus::NullPointer, format!("{name} is null")))
}

fn alphabet_choice(name: Option<&str>) -> Result<AlphabetChoice, Failure> {
    match name {
        None | Some("infer") => Ok(AlphabetChoice::Infer),
        Some(n) => Alphabet::parse(n)
            .map(AlphabetChoice::Preset)
            .ok_or_else(|| invalid(format!("unknown alphabet {n:?}"))),
    }
}

fn give_handle(out: &mut *mut FlLandscape, landscape: Landscape) {
    *out = Box::into_raw(Box::new(FlLandscape { inner: landscape }));
}

fn give_string(out: *mut *mut c_char, s: String) {
    if let Some(out) = unsafe { out.as_mut() } {
        *out = CString::new(s).map_or(ptr::null_mut(), CString::into_raw);
    }
}

/// Builds a landscape from parallel arrays of `len` sequences and fitness
/// values. `alphabet` is `"infer"`, `"binary"`, `"dna"`, `"rna"` or
/// `"protein"` (null means infer). Without `delimiter` every character of a
/// sequence is one allele.
///
/// # Safety
/// `sequences` and `fitness` must point to `len` valid elements, each
/// sequence a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fl_landscape_from_arrays(
    sequences: *const *const c_char,
    fitness: *const f64,
    len: usize,
    alphabet: *const c_char,
    delimiter: *const c_char,
    out: *mut *mut FlLandscape,
) -> FlStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        if len == 0 {
            return Err(Error::EmptyInput.into());
        }
        if sequences.is_null() || fitness.is_null() {
            return Err(Failure(FlStatus::NullPointer, "input arrays are null".into()));
        }
        let choice = alphabet_choice(opt_str_arg(alphabet, "alphabet")?)?;
        let delimiter = opt_str_arg(delimiter, "delimiter")?;
        let seqs = std::slice::from_raw_parts(sequences, len);
        let fits = std::slice::from_raw_parts(fitness, len);
        let mut records = Vec::with_capacity(len);
        for (i, (&s, &f)) in seqs.iter().zip(fits).enumerate() {
            let s = str_arg(s, &format!("sequence {i}"))?;
            let alleles = fitland::genotype::split_sequence(s, delimiter);
            records.push(VariantRecord::new(alleles, f));
        }
        give_handle(out, Landscape::from_records(&records, &choice)?);
        Ok(())
    })
}

/// Loads a landscape from a CSV table or a binary snapshot.
///
/// # Safety
/// `path` must be a NUL-terminated string; `alphabet` and `delimiter` may be
/// null; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fl_landscape_load(
    path: *const c_char,
    alphabet: *const c_char,
    delimiter: *const c_char,
    out: *mut *mut FlLandscape,
) -> FlStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let path = str_arg(path, "path")?;
        let choice = alphabet_choice(opt_str_arg(alphabet, "alphabet")?)?;
        let opts = CsvOptions {
            allele_delimiter: opt_str_arg(delimiter, "delimiter")?.map(str::to_string),
        };
        give_handle(out, load_landscape(path, &choice, &opts)?);
        Ok(())
    })
}

/// Writes a binary snapshot of the landscape.
///
/// # Safety
/// `landscape` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn fl_landscape_save_snapshot(
    landscape: *const FlLandscape,
    path: *const c_char,
) -> FlStatus {
    guard(|| {
        let l = handle(landscape)?;
        save_snapshot(l, str_arg(path, "path")?)?;
        Ok(())
    })
}

/// Generates a synthetic landscape from a JSON configuration such as
/// `{"model": {"model": "nk", "k": 3}, "alphabet_sizes": [2, 2, 2, 2], "seed": 1}`.
///
/// # Safety
/// `config_json` must be a NUL-terminated string; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fl_generate(
    config_json: *const c_char,
    out: *mut *mut FlLandscape,
) -> FlStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let config: GeneratorConfig = serde_json::from_str(str_arg(config_json, "config_json")?)
            .map_err(|e| invalid(format!("generator configuration: {e}")))?;
        give_handle(out, generate(&config)?);
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `landscape` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fl_landscape_free(landscape: *mut FlLandscape) {
    if !landscape.is_null() {
        drop(Box::from_raw(landscape));
    }
}

/// Number of observed genotypes; 0 for a null handle.
///
/// # Safety
/// `landscape` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fl_landscape_node_count(landscape: *const FlLandscape) -> usize {
    landscape.as_ref().map_or(0, |h| h.inner.node_count())
}

/// Number of directed edges; 0 for a null handle.
///
/// # Safety
/// `landscape` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fl_landscape_edge_count(landscape: *const FlLandscape) -> usize {
    landscape.as_ref().map_or(0, |h| h.inner.edge_count())
}

/// Fraction of the sequence space that was observed; NaN for a null handle.
///
/// # Safety
/// `landscape` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fl_landscape_completeness(landscape: *const FlLandscape) -> f64 {
    landscape.as_ref().map_or(f64::NAN, |h| h.inner.completeness())
}

#[no_mangle]
pub extern "C" fn fl_analysis_options_default() -> FlAnalysisOptions {
    let d = AnalysisOptions::default();
    FlAnalysisOptions {
        features: ptr::null(),
        eps_tol: f64::NAN,
        sigma: f64::NAN,
        walks: d.walks,
        walk_length: 0,
        seed: d.seed,
        max_fit_nodes: d.max_fit_nodes,
        max_optima: d.max_optima,
    }
}

unsafe fn analysis_options(opts: *const FlAnalysisOptions) -> Result<AnalysisOptions, Failure> {
    let o = match opts.as_ref() {
        Some(o) => *o,
        None => fl_analysis_options_default(),
    };
    let features = match opt_str_arg(o.features, "features")? {
        None => FeatureSet::all(),
        Some(s) => s.parse()?,
    };
    Ok(AnalysisOptions {
        features,
        eps_tol: (!o.eps_tol.is_nan()).then_some(o.eps_tol),
        sigma: (!o.sigma.is_nan()).then_some(o.sigma),
        walks: o.walks,
        walk_length: (o.walk_length > 0).then_some(o.walk_length),
        seed: o.seed,
        max_fit_nodes: o.max_fit_nodes,
        max_optima: o.max_optima,
    })
}

fn feature_values(r: &FeatureReport) -> FlFeatures {
    let v = |x: Option<f64>| x.unwrap_or(f64::NAN);
    FlFeatures {
        phi_lo: v(r.phi_lo),
        rs_ratio: v(r.rs_ratio),
        rho_a: v(r.rho_a),
        gamma: v(r.gamma),
        nfc: v(r.nfc),
        eps_mag: v(r.eps_mag),
        eps_sign: v(r.eps_sign),
        eps_reci: v(r.eps_reci),
        eps_pos: v(r.eps_pos),
        eps_neg: v(r.eps_neg),
        i_id: v(r.i_id),
        eps_dr: v(r.eps_dr),
        eps_ic: v(r.eps_ic),
        eps_pairwise_r2: v(r.eps_pairwise_r2),
        fdc: v(r.fdc),
        alpha_go: v(r.alpha_go),
        bfc_acc: v(r.bfc_acc),
        bfc_greedy: v(r.bfc_greedy),
        phi_ee: v(r.phi_ee),
        eta: v(r.eta),
    }
}

/// Computes the feature report. `options` may be null for defaults. Either
/// output may be null: `values` receives the twenty features, `report_json`
/// the full report (features and diagnostics) as a JSON object with `null`
/// for undefined values.
///
/// # Safety
/// `landscape` must be a live handle; non-null pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn fl_analyze(
    landscape: *const FlLandscape,
    options: *const FlAnalysisOptions,
    values: *mut FlFeatures,
    report_json: *mut *mut c_char,
) -> FlStatus {
    guard(|| {
        let l = handle(landscape)?;
        let opts = analysis_options(options)?;
        let report = analyze(l, &opts)?;
        if let Some(v) = values.as_mut() {
            *v = feature_values(&report);
        }
        if !report_json.is_null() {
            give_string(report_json, serde_json::to_string(&report).map_err(Error::from)?);
        }
        Ok(())
    })
}

/// Runs `runs` adaptive walks from seeded random starts. Either output may
/// be null; `result_json` receives every run.
///
/// # Safety
/// `landscape` must be a live handle; non-null pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn fl_run_de(
    landscape: *const FlLandscape,
    method: FlWalkMethod,
    runs: usize,
    seed: u64,
    summary: *mut FlDeSummary,
    result_json: *mut *mut c_char,
) -> FlStatus {
    guard(|| {
        let l = handle(landscape)?;
        let method = match method {
            FlWalkMethod::Greedy => WalkMethod::Greedy,
            FlWalkMethod::Stochastic => WalkMethod::Stochastic,
        };
        let result = run_de(l, method, runs, seed)?;
        if let Some(s) = summary.as_mut() {
            *s = FlDeSummary {
                runs: result.runs,
                mean_percentile: result.mean_percentile,
                mean_steps: result.per_run.iter().map(|r| r.steps as f64).sum::<f64>()
                    / result.runs as f64,
            };
        }
        if !result_json.is_null() {
            give_string(result_json, serde_json::to_string(&result).map_err(Error::from)?);
        }
        Ok(())
    })
}

/// Message for the last failed call on this thread, or null. The pointer is
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn fl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn fl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

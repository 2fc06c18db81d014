//! C ABI over the `lacunary` crate.
//!
//! Every fallible call returns a [`LacStatus`]; on failure the message is
//! available from [`lac_last_error`] on the same thread until the next call.
//! Handles are opaque and owned by the caller, who releases them with the
//! matching `_free` function. Strings returned by the library are released
//! with [`lac_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use lacunary::cmforms::{coefficient_via_multiplicativity, identity};
use lacunary::exactalg::Rational;
use lacunary::fixtures::{check_appendix2, check_appendix3, FixtureSet, TableSummary};
use lacunary::heckeops::{eta_modularity_check, hecke_tp_to, sturm_bound, SpaceDescriptor};
use lacunary::lacunarity::{
    full_scan, zero_density, CoefficientTable, DensityMode, Evidence, ScanOptions, ScanVerdict, SweepMode,
};
use lacunary::qseries::{EtaQuotient, QSeries, SeriesError};
use num_bigint::BigInt;
use num_traits::ToPrimitive;

/// Result codes. The first five agree with the command-line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LacStatus {
    Ok = 0,
    Failure = 1,
    Parse = 2,
    NonIntegralValuation = 3,
    Fixture = 4,
    NullPointer = 5,
    OutOfRange = 6,
    Panic = 7,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Fail(LacStatus, String);

impl From<SeriesError> for Fail {
    fn from(e: SeriesError) -> Self {
        let code = match e {
            SeriesError::Parse(_) => LacStatus::Parse,
            SeriesError::NonIntegralValuation(_) | SeriesError::NegativeValuation(_) => LacStatus::NonIntegralValuation,
            _ => LacStatus::Failure,
        };
        Fail(code, e.to_string())
    }
}

fn fail(e: impl std::fmt::Display) -> Fail {
    Fail(LacStatus::Failure, e.to_string())
}

/// Runs `f`, recording any error or panic as the thread's last error.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> LacStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LacStatus::Ok,
        Ok(Err(Fail(code, msg))) => {
            set_error(msg);
            code
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            LacStatus::Panic
        }
    }
}

unsafe fn out_ref<'a, T>(p: *mut T) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| Fail(LacStatus::NullPointer, "null output pointer".into()))
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(LacStatus::NullPointer, "null string argument".into()));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(LacStatus::Parse, "argument is not UTF-8".into()))
}

fn parse_spec(s: &str) -> Result<EtaQuotient, Fail> {
    s.parse().map_err(|e: SeriesError| e.into())
}

fn write_rational(q: &Rational, num: *mut i64, den: *mut i64) -> Result<(), Fail> {
    let (n, d) = (q.numer().to_i64(), q.denom().to_i64());
    let (Some(n), Some(d)) = (n, d) else {
        return Err(Fail(LacStatus::OutOfRange, format!("{q} does not fit in 64-bit integers")));
    };
    // SAFETY: the callers pass pointers the C side promised are writable
    unsafe {
        *out_ref(num)? = n;
        *out_ref(den)? = d;
    }
    Ok(())
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Message for the last failed call on this thread, or NULL. Owned by the
/// library; valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn lac_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lac_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Integer q-series known below `q^truncation`.
pub struct LacSeries(QSeries<BigInt>);

/// Expands an eta quotient such as `"eta(12z)^2*eta(48z)^2"`, keeping `terms`
/// coefficients from the valuation on.
///
/// # Safety
/// `spec` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lac_series_expand(spec: *const c_char, terms: usize, out: *mut *mut LacSeries) -> LacStatus {
    guard(|| {
        let out = out_ref(out)?;
        *out = ptr::null_mut();
        let q = parse_spec(str_arg(spec)?)?;
        if terms == 0 {
            return Err(Fail(LacStatus::OutOfRange, "terms must be at least 1".into()));
        }
        let v = q.integral_valuation()?;
        *out = Box::into_raw(Box::new(LacSeries(q.expand(&(), v + terms)?)));
        Ok(())
    })
}

/// `T_p` of an eta quotient on `Gamma0(level)`, with `terms` coefficients.
///
/// # Safety
/// `spec` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lac_series_hecke(
    spec: *const c_char,
    p: u64,
    level: u64,
    terms: usize,
    out: *mut *mut LacSeries,
) -> LacStatus {
    guard(|| {
        let out = out_ref(out)?;
        *out = ptr::null_mut();
        let q = parse_spec(str_arg(spec)?)?;
        if terms == 0 || p < 2 {
            return Err(Fail(LacStatus::OutOfRange, "need terms >= 1 and p >= 2".into()));
        }
        let report = eta_modularity_check(&q, level).map_err(fail)?;
        let weight = u32::try_from(report.weight).map_err(|_| fail("weight must be positive"))?;
        let f: QSeries<BigInt> = q.expand(&(), (terms - 1) * p as usize + 1)?;
        let img = hecke_tp_to(&f, p, &SpaceDescriptor::new(weight, level, report.character), terms).map_err(fail)?;
        *out = Box::into_raw(Box::new(LacSeries(img)));
        Ok(())
    })
}

/// # Safety
/// `s` must be NULL or a handle from this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lac_series_free(s: *mut LacSeries) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// # Safety
/// `s` must be a live series handle.
#[no_mangle]
pub unsafe extern "C" fn lac_series_valuation(s: *const LacSeries) -> usize {
    s.as_ref().map_or(0, |s| s.0.valuation())
}

/// # Safety
/// `s` must be a live series handle.
#[no_mangle]
pub unsafe extern "C" fn lac_series_truncation(s: *const LacSeries) -> usize {
    s.as_ref().map_or(0, |s| s.0.truncation())
}

/// Coefficient of `q^n`; `OutOfRange` if `n` is not below the truncation or
/// the value does not fit in 64 bits.
///
/// # Safety
/// `s` must be a live series handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lac_series_coeff(s: *const LacSeries, n: usize, out: *mut i64) -> LacStatus {
    guard(|| {
        let s = s.as_ref().ok_or_else(|| Fail(LacStatus::NullPointer, "null series".into()))?;
        let out = out_ref(out)?;
        let c = s.0.coeff(n).ok_or_else(|| Fail(LacStatus::OutOfRange, format!("q^{n} is beyond the truncation")))?;
        *out = c.to_i64().ok_or_else(|| Fail(LacStatus::OutOfRange, format!("coefficient {c} exceeds 64 bits")))?;
        Ok(())
    })
}

/// The series as JSON `{valuation, truncation, ring, coeffs}`; free with
/// [`lac_string_free`]. NULL on a NULL handle.
///
/// # Safety
/// `s` must be NULL or a live series handle.
#[no_mangle]
pub unsafe extern "C" fn lac_series_to_json(s: *const LacSeries) -> *mut c_char {
    s.as_ref().map_or(ptr::null_mut(), |s| into_c_string(s.0.to_json()))
}

/// Zero density over `0 <= n <= x`, restricted to `n = residue mod modulus`
/// when `modulus > 0`, as `num / den`.
///
/// # Safety
/// `s` must be a live series handle; `num` and `den` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lac_series_zero_density(
    s: *const LacSeries,
    x: usize,
    modulus: usize,
    residue: usize,
    num: *mut i64,
    den: *mut i64,
) -> LacStatus {
    guard(|| {
        let s = s.as_ref().ok_or_else(|| Fail(LacStatus::NullPointer, "null series".into()))?;
        let mode = if modulus == 0 { DensityMode::All } else { DensityMode::Progression { modulus, residue } };
        let d = zero_density(&s.0, x, mode).map_err(|e| Fail(LacStatus::OutOfRange, e.to_string()))?;
        write_rational(&d, num, den)
    })
}

#[no_mangle]
pub extern "C" fn lac_sturm_bound(weight: u32, level: u64) -> u64 {
    if level == 0 {
        return 0;
    }
    sturm_bound(weight, level)
}

/// Checks CM identity `case` (1..=5) through its Sturm bound. On success
/// `*equal` is set, and `*first_mismatch` is the first differing index or 0.
///
/// # Safety
/// `equal` and `first_mismatch` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lac_verify_identity(case: u8, equal: *mut bool, first_mismatch: *mut u64) -> LacStatus {
    guard(|| {
        let (equal, first) = (out_ref(equal)?, out_ref(first_mismatch)?);
        let id = identity(case).map_err(|e| Fail(LacStatus::OutOfRange, e.to_string()))?;
        let rep = id.verify().map_err(fail)?;
        *equal = rep.equal;
        *first = rep.first_mismatch.map_or(0, |n| n as u64);
        Ok(())
    })
}

/// Coefficient `a(n)` of identity `case` through multiplicativity, for `n`
/// coprime to the level, as `num / den`.
///
/// # Safety
/// `num` and `den` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lac_identity_coefficient(case: u8, n: u64, num: *mut i64, den: *mut i64) -> LacStatus {
    guard(|| {
        let id = identity(case).map_err(|e| Fail(LacStatus::OutOfRange, e.to_string()))?;
        let a = coefficient_via_multiplicativity(&id.combination, n)
            .map_err(|e| Fail(LacStatus::OutOfRange, e.to_string()))?;
        write_rational(&a, num, den)
    })
}

/// Loads the reference tables from `dir` (checksums included) and compares
/// them with computed coefficients. `*passes` is true when every row agrees or
/// is a confirmed misprint.
///
/// # Safety
/// `dir` must be a NUL-terminated path; `passes` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lac_verify_tables(dir: *const c_char, passes: *mut bool) -> LacStatus {
    guard(|| {
        let passes = out_ref(passes)?;
        let set = FixtureSet::load(str_arg(dir)?).map_err(|e| Fail(LacStatus::Fixture, e.to_string()))?;
        let two = TableSummary::from_checks(&check_appendix2(&set.appendix2).map_err(fail)?);
        let three = TableSummary::from_checks(&check_appendix3(&set.appendix3).map_err(fail)?);
        *passes = two.passes() && three.passes() && set.appendix1 == CoefficientTable::computed(set.appendix1.len());
        Ok(())
    })
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LacEvidenceKind {
    Witness = 0,
    HeckeVanishing = 1,
    Excluded = 2,
}

/// One scan verdict. For `WITNESS`, `n` and `value` give a nonzero
/// coefficient of `T_prime f_b(12z)`; for `HECKE_VANISHING`, `n` is the bound
/// checked; for `EXCLUDED`, only `b` is meaningful.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LacVerdict {
    pub b: u64,
    pub lacunary: bool,
    pub kind: LacEvidenceKind,
    pub prime: u64,
    pub n: u64,
    pub value: i64,
}

impl From<&ScanVerdict> for LacVerdict {
    fn from(v: &ScanVerdict) -> Self {
        let (kind, prime, n, value) = match &v.evidence {
            Evidence::Witness { prime, n, value } => (LacEvidenceKind::Witness, *prime, *n, *value),
            Evidence::HeckeVanishing { prime, bound } => (LacEvidenceKind::HeckeVanishing, *prime, *bound, 0),
            Evidence::Excluded { .. } => (LacEvidenceKind::Excluded, 0, 0, 0),
        };
        LacVerdict { b: v.b, lacunary: v.lacunary, kind, prime, n, value }
    }
}

/// Verdicts of a scan over `1 <= b <= b_max`.
pub struct LacScan(Vec<ScanVerdict>);

/// Sweeps `b = 1..=b_max` with `T_23` (adaptive truncation) on `jobs`
/// threads; `jobs = 0` uses every core.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lac_scan(b_max: u64, jobs: usize, out: *mut *mut LacScan) -> LacStatus {
    guard(|| {
        let out = out_ref(out)?;
        *out = ptr::null_mut();
        let mut opts = ScanOptions::new(b_max);
        opts.jobs = jobs;
        opts.mode = SweepMode::Adaptive;
        *out = Box::into_raw(Box::new(LacScan(full_scan(&opts).map_err(fail)?)));
        Ok(())
    })
}

/// # Safety
/// `s` must be NULL or a live scan handle.
#[no_mangle]
pub unsafe extern "C" fn lac_scan_len(s: *const LacScan) -> usize {
    s.as_ref().map_or(0, |s| s.0.len())
}

/// # Safety
/// `s` must be a live scan handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lac_scan_get(s: *const LacScan, index: usize, out: *mut LacVerdict) -> LacStatus {
    guard(|| {
        let s = s.as_ref().ok_or_else(|| Fail(LacStatus::NullPointer, "null scan".into()))?;
        let v = s.0.get(index).ok_or_else(|| Fail(LacStatus::OutOfRange, format!("index {index} out of range")))?;
        *out_ref(out)? = v.into();
        Ok(())
    })
}

/// # Safety
/// `s` must be NULL or a scan handle from this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lac_scan_free(s: *mut LacScan) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

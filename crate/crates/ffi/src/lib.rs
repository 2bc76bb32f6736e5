//! C interface to `pillowtile`.
//!
//! Objects cross the boundary as opaque handles created by `pt_*_new`-style
//! constructors and released with the matching `pt_*_free`. Every fallible
//! call returns a [`PtStatus`]; on failure the message is available from
//! [`pt_last_error`] on the same thread. Strings returned through `char **`
//! out-parameters are owned by the caller and released with
//! [`pt_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;
use num_traits::Zero;
use pillowtile::bform::{holomorphic_basis, pairing_matrices, BFormReport, LiftedQuadratic, QuadratureOptions, SuperellipticCurve};
use pillowtile::coverings::{cyclic_to_pillow, CoverReport, CyclicCoverSpec, SphereDifferential};
use pillowtile::cylinders::{ekz_for_pillow, EKZReport};
use pillowtile::lyapunov::{
    certify_degenerate, CertifyInput, CertifyOptions, Certificate, CocycleWalk, LyapunovEstimate, Verdict,
    DEFAULT_REORTHO,
};
use pillowtile::orbit::DEFAULT_ORBIT_CAP;
use pillowtile::permsurf::PillowCover;
use pillowtile::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PtStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    /// A datum, permutation list or geometry that the library rejects.
    InvalidInput = 4,
    Precondition = 5,
    OrbitCap = 6,
    Quadrature = 7,
    Numerical = 8,
    /// Independent computations disagreed.
    Consistency = 9,
    Internal = 10,
    Panic = 11,
    BufferTooSmall = 12,
}

/// Verdict of a degeneracy certificate.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PtVerdict {
    Pass = 0,
    Fail = 1,
    Contradiction = 2,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> PtStatus {
    match e {
        Error::Parse(_) => PtStatus::Parse,
        Error::Monodromy(_) | Error::Connectivity(_) | Error::Datum(_) | Error::Locus(_) | Error::Geometry(_) => {
            PtStatus::InvalidInput
        }
        Error::Precondition(_) => PtStatus::Precondition,
        Error::OrbitCap { .. } => PtStatus::OrbitCap,
        Error::Quadrature(_) => PtStatus::Quadrature,
        Error::Numerical(_) => PtStatus::Numerical,
        Error::Consistency(_) | Error::Calibration(_) => PtStatus::Consistency,
        Error::Internal(_) => PtStatus::Internal,
    }
}

struct Failure(PtStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

/// Runs `f`, recording its error message and turning panics into
/// [`PtStatus::Panic`].
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> PtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PtStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_error(format!("panic: {msg}"));
            PtStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(PtStatus::NullPointer, format!("{what} is null"))
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null("string argument"));
    }
    CStr::from_ptr(p).to_str().map_err(|e| Failure(PtStatus::InvalidUtf8, e.to_string()))
}

unsafe fn emit<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn emit_json<T: serde::Serialize>(out: *mut *mut c_char, value: &T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    let s = serde_json::to_string(value).map_err(|e| Failure(PtStatus::Internal, e.to_string()))?;
    *out = CString::new(s).map_err(|e| Failure(PtStatus::Internal, e.to_string()))?.into_raw();
    Ok(())
}

unsafe fn emit_slice(values: &[f64], buf: *mut f64, cap: usize, len: *mut usize) -> Result<(), Failure> {
    if len.is_null() {
        return Err(null("length pointer"));
    }
    *len = values.len();
    if values.is_empty() {
        return Ok(());
    }
    if buf.is_null() {
        return Err(null("buffer"));
    }
    if cap < values.len() {
        return Err(Failure(PtStatus::BufferTooSmall, format!("buffer holds {cap} values, need {}", values.len())));
    }
    ptr::copy_nonoverlapping(values.as_ptr(), buf, values.len());
    Ok(())
}

unsafe fn release<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pt_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn pt_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn pt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// A pillowcase cover, remembering the cyclic datum it came from if any.
pub struct PtCover {
    cover: PillowCover,
    cyclic: Option<CyclicCoverSpec>,
}

/// Cyclic cover `(N, a1, a2, a3, a4)`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pt_cover_cyclic(n: u32, a1: u32, a2: u32, a3: u32, a4: u32, out: *mut *mut PtCover) -> PtStatus {
    guard(|| {
        let spec = CyclicCoverSpec::new(n, [a1, a2, a3, a4])?;
        emit(out, PtCover { cover: cyclic_to_pillow(&spec).0, cyclic: Some(spec) })
    })
}

/// Parses `N a1 a2 a3 a4` or `d; g0; g1; g2; g3` with cycle-notation
/// permutations.
///
/// # Safety
/// `line` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pt_cover_parse(line: *const c_char, out: *mut *mut PtCover) -> PtStatus {
    guard(|| {
        let line = text(line)?.trim();
        let cover = if line.contains(';') {
            PtCover { cover: line.parse()?, cyclic: None }
        } else {
            let spec: CyclicCoverSpec = line.parse()?;
            PtCover { cover: cyclic_to_pillow(&spec).0, cyclic: Some(spec) }
        };
        emit(out, cover)
    })
}

/// # Safety
/// `cover` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn pt_cover_free(cover: *mut PtCover) {
    release(cover)
}

/// Degree over the pillowcase, or 0 for a null handle.
///
/// # Safety
/// `cover` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pt_cover_degree(cover: *const PtCover) -> usize {
    cover.as_ref().map_or(0, |c| c.cover.degree())
}

/// Genus of the cover, or 0 for a null handle.
///
/// # Safety
/// `cover` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pt_cover_genus(cover: *const PtCover) -> u32 {
    cover.as_ref().map_or(0, |c| c.cover.genus())
}

/// Cover report (degree, genus, stratum, poles) as JSON.
///
/// # Safety
/// `cover` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pt_cover_report_json(cover: *const PtCover, out: *mut *mut c_char) -> PtStatus {
    guard(|| {
        let c = borrow(cover, "cover")?;
        let report = match &c.cyclic {
            Some(s) => CoverReport::from_cyclic(s),
            None => CoverReport::from_pillow(&c.cover),
        };
        emit_json(out, &report)
    })
}

/// Exact Lyapunov sum with its decomposition, as JSON. `orbit_cap` of 0
/// selects the default cap.
///
/// # Safety
/// `cover` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pt_ekz_json(cover: *const PtCover, orbit_cap: usize, out: *mut *mut c_char) -> PtStatus {
    guard(|| {
        let report = ekz(borrow(cover, "cover")?, orbit_cap)?;
        emit_json(out, &report)
    })
}

/// Whether the exact Lyapunov sum vanishes.
///
/// # Safety
/// `cover` must be a live handle and `degenerate` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pt_ekz_is_degenerate(cover: *const PtCover, orbit_cap: usize, degenerate: *mut bool) -> PtStatus {
    guard(|| {
        let report = ekz(borrow(cover, "cover")?, orbit_cap)?;
        let out = degenerate.as_mut().ok_or_else(|| null("output pointer"))?;
        *out = report.lyap_sum.is_zero();
        Ok(())
    })
}

fn cap_or_default(cap: usize) -> usize {
    if cap == 0 {
        DEFAULT_ORBIT_CAP
    } else {
        cap
    }
}

fn ekz(c: &PtCover, cap: usize) -> Result<EKZReport, Failure> {
    Ok(ekz_for_pillow(&c.cover, cap_or_default(cap))?.1)
}

/// Monte-Carlo estimate of the Lyapunov exponents.
pub struct PtEstimate(LyapunovEstimate);

/// Runs the cocycle walk for `steps` continued-fraction digits split into
/// `blocks` blocks.
///
/// # Safety
/// `cover` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pt_lyapunov_run(
    cover: *const PtCover,
    steps: usize,
    seed: u64,
    blocks: usize,
    orbit_cap: usize,
    out: *mut *mut PtEstimate,
) -> PtStatus {
    guard(|| {
        let c = borrow(cover, "cover")?;
        let walk = CocycleWalk::new(&c.cover, cap_or_default(orbit_cap))?;
        emit(out, PtEstimate(walk.run(steps, seed, blocks, DEFAULT_REORTHO)?))
    })
}

/// Copies `λ⁺` into `buf` (capacity `cap`) and stores the count in `len`.
/// With a null `buf` and `cap` 0 only the count is reported, as an error
/// unless the spectrum is empty.
///
/// # Safety
/// `est` must be a live handle, `buf` valid for `cap` writes, `len` valid.
#[no_mangle]
pub unsafe extern "C" fn pt_estimate_lambda_plus(est: *const PtEstimate, buf: *mut f64, cap: usize, len: *mut usize) -> PtStatus {
    guard(|| emit_slice(&borrow(est, "estimate")?.0.lambda_plus, buf, cap, len))
}

/// Copies `λ⁻` like [`pt_estimate_lambda_plus`].
///
/// # Safety
/// As for [`pt_estimate_lambda_plus`].
#[no_mangle]
pub unsafe extern "C" fn pt_estimate_lambda_minus(est: *const PtEstimate, buf: *mut f64, cap: usize, len: *mut usize) -> PtStatus {
    guard(|| emit_slice(&borrow(est, "estimate")?.0.lambda_minus, buf, cap, len))
}

/// # Safety
/// `est` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pt_estimate_json(est: *const PtEstimate, out: *mut *mut c_char) -> PtStatus {
    guard(|| emit_json(out, &borrow(est, "estimate")?.0))
}

/// # Safety
/// `est` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn pt_estimate_free(est: *mut PtEstimate) {
    release(est)
}

/// Degeneracy certificate.
pub struct PtCertificate(Certificate);

/// Certifies full degeneracy of `λ⁺` using seeds `1..=seeds`.
///
/// # Safety
/// `cover` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pt_certify(
    cover: *const PtCover,
    epsilon: f64,
    steps: usize,
    seeds: u64,
    out: *mut *mut PtCertificate,
) -> PtStatus {
    guard(|| {
        let c = borrow(cover, "cover")?;
        let input = match c.cyclic {
            Some(s) => CertifyInput::Cyclic(s),
            None => CertifyInput::Pillow(c.cover.clone()),
        };
        let opts = CertifyOptions { epsilon, steps, seeds: (1..=seeds).collect(), ..CertifyOptions::default() };
        emit(out, PtCertificate(certify_degenerate(&input, &opts)?))
    })
}

/// Verdict of a certificate; a null handle reads as a contradiction.
///
/// # Safety
/// `cert` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pt_certificate_verdict(cert: *const PtCertificate) -> PtVerdict {
    match cert.as_ref().map(|c| c.0.verdict) {
        Some(Verdict::Pass) => PtVerdict::Pass,
        Some(Verdict::Fail) => PtVerdict::Fail,
        Some(Verdict::Contradiction) | None => PtVerdict::Contradiction,
    }
}

/// # Safety
/// `cert` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pt_certificate_json(cert: *const PtCertificate, out: *mut *mut c_char) -> PtStatus {
    guard(|| emit_json(out, &borrow(cert, "certificate")?.0))
}

/// # Safety
/// `cert` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn pt_certificate_free(cert: *mut PtCertificate) {
    release(cert)
}

/// B-form report of a holomorphic basis.
pub struct PtBForm(BFormReport);

fn bform(curve: &SuperellipticCurve, q: &LiftedQuadratic, tol: f64) -> Result<PtBForm, Failure> {
    let basis = holomorphic_basis(curve)?;
    let opts = QuadratureOptions { tol: if tol > 0.0 { tol } else { QuadratureOptions::default().tol }, ..Default::default() };
    Ok(PtBForm(pairing_matrices(curve, q, &basis, &opts)?))
}

/// B-form of a cyclic cover with branch values `0, 1, ∞, t` against the
/// pullback of the pillowcase differential. `tol` of 0 selects the
/// default quadrature tolerance.
///
/// # Safety
/// `cover` must be a live handle carrying a cyclic datum; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn pt_bform_cyclic(
    cover: *const PtCover,
    t_re: f64,
    t_im: f64,
    tol: f64,
    out: *mut *mut PtBForm,
) -> PtStatus {
    guard(|| {
        let c = borrow(cover, "cover")?;
        let spec = c
            .cyclic
            .ok_or_else(|| Failure(PtStatus::Precondition, "cover was not built from a cyclic datum".into()))?;
        let t = Complex64::new(t_re, t_im);
        let curve = SuperellipticCurve::from_cyclic(&spec, t)?;
        let q = LiftedQuadratic::pullback(SphereDifferential::standard(t)?);
        emit(out, bform(&curve, &q, tol)?)
    })
}

/// B-form of `w² = Π (z - z_k)` against the anti-invariant `w⁻¹ dz²`.
/// `points` holds `count` interleaved `(re, im)` pairs.
///
/// # Safety
/// `points` must be valid for `2 * count` reads and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn pt_bform_hyperelliptic(points: *const f64, count: usize, tol: f64, out: *mut *mut PtBForm) -> PtStatus {
    guard(|| {
        if points.is_null() && count > 0 {
            return Err(null("points"));
        }
        let raw = if count == 0 { &[][..] } else { std::slice::from_raw_parts(points, 2 * count) };
        let pts = raw.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect();
        let curve = SuperellipticCurve::hyperelliptic(pts)?;
        emit(out, bform(&curve, &LiftedQuadratic::anti_invariant(), tol)?)
    })
}

/// Copies the θ-spectrum, nonincreasing, like [`pt_estimate_lambda_plus`].
///
/// # Safety
/// `report` must be a live handle, `buf` valid for `cap` writes, `len` valid.
#[no_mangle]
pub unsafe extern "C" fn pt_bform_theta(report: *const PtBForm, buf: *mut f64, cap: usize, len: *mut usize) -> PtStatus {
    guard(|| emit_slice(&borrow(report, "report")?.0.theta, buf, cap, len))
}

/// Largest modulus of a B entry, or NaN for a null handle.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pt_bform_max_entry(report: *const PtBForm) -> f64 {
    report.as_ref().map_or(f64::NAN, |r| r.0.max_b_entry())
}

/// Quadrature error estimate, or NaN for a null handle.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pt_bform_quad_error(report: *const PtBForm) -> f64 {
    report.as_ref().map_or(f64::NAN, |r| r.0.quad_error)
}

/// # Safety
/// `report` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pt_bform_json(report: *const PtBForm, out: *mut *mut c_char) -> PtStatus {
    guard(|| emit_json(out, &borrow(report, "report")?.0))
}

/// # Safety
/// `report` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn pt_bform_free(report: *mut PtBForm) {
    release(report)
}

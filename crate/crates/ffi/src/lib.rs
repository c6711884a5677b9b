//! C ABI for `seifert-tv`.
//!
//! Symbols and triangulations are opaque handles created by `*_parse` /
//! `*_new` functions and released with the matching `*_free`. Every fallible
//! function returns an [`SfStatus`]; on failure a message is available from
//! [`sf_last_error_message`] on the same thread. Strings returned through
//! `char **` out-parameters are owned by the caller and freed with
//! [`sf_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use seifert_tv::growth::{lower_bound_for, Target};
use seifert_tv::modular::{classify_hypothesis, dedekind_sum};
use seifert_tv::rt::{rt_closed, rt_double_simplified, InvariantValue};
use seifert_tv::triangulation::Triangulation;
use seifert_tv::tv::{tv_bounded, tv_closed, tv_statesum, TvValue};
use seifert_tv::{Epsilon, Error, Fiber, RootContext, SeifertSymbol};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidSymbol = 3,
    InvalidFiber = 4,
    NotInvertible = 5,
    Domain = 6,
    Precondition = 7,
    ColorOutOfRange = 8,
    NotAdmissible = 9,
    Hypothesis = 10,
    Degenerate = 11,
    NumericInconsistency = 12,
    TriangulationParse = 13,
    InvalidTriangulation = 14,
    Unsupported = 15,
    Panic = 16,
}

impl From<&Error> for SfStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidFiber { .. } => SfStatus::InvalidFiber,
            Error::InvalidSymbol(_) => SfStatus::InvalidSymbol,
            Error::NotInvertible { .. } => SfStatus::NotInvertible,
            Error::Domain(_) => SfStatus::Domain,
            Error::Precondition(_) => SfStatus::Precondition,
            Error::ColorOutOfRange { .. } => SfStatus::ColorOutOfRange,
            Error::NotAdmissible(_) => SfStatus::NotAdmissible,
            Error::Hypothesis(_) => SfStatus::Hypothesis,
            Error::Degenerate(_) => SfStatus::Degenerate,
            Error::Numeric(_) => SfStatus::NumericInconsistency,
            Error::TriangulationParse { .. } => SfStatus::TriangulationParse,
            Error::InvalidTriangulation(_) => SfStatus::InvalidTriangulation,
            Error::Unsupported(_) => SfStatus::Unsupported,
        }
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SfComplex {
    pub re: f64,
    pub im: f64,
}

/// A complex invariant with its cancellation bookkeeping.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SfInvariant {
    pub value: SfComplex,
    /// Sum of the absolute values of all summands.
    pub term_magnitude_sum: f64,
    pub term_count: u64,
    pub r: u32,
    /// Nonzero when the formula did not apply and `value` is a placeholder.
    pub degenerate: bool,
}

impl From<InvariantValue> for SfInvariant {
    fn from(v: InvariantValue) -> Self {
        SfInvariant {
            value: SfComplex {
                re: v.value.re,
                im: v.value.im,
            },
            term_magnitude_sum: v.term_magnitude_sum,
            term_count: v.term_count,
            r: v.r,
            degenerate: v.degenerate,
        }
    }
}

/// A real Turaev–Viro value.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SfTv {
    pub value: f64,
    pub imaginary_residue: f64,
    pub term_count: u64,
    pub r: u32,
}

impl From<TvValue> for SfTv {
    fn from(v: TvValue) -> Self {
        SfTv {
            value: v.value,
            imaginary_residue: v.imaginary_residue,
            term_count: v.term_count,
            r: v.r,
        }
    }
}

/// Opaque Seifert symbol.
pub struct SfSymbol(SeifertSymbol);

/// Opaque triangulation.
pub struct SfTriangulation(Triangulation);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).expect("NULs removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = c);
}

struct Failure(SfStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(SfStatus::from(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(SfStatus::NullPointer, format!("{what} is NULL"))
}

/// Runs `body`, converting errors and panics into a status and the thread's last error.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> SfStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error("");
            SfStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(&message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            SfStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(SfStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write_out<T>(p: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    p.write(value);
    Ok(())
}

unsafe fn write_string(p: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Failure(SfStatus::Panic, "string contains NUL".into()))?;
    write_out(p, c.into_raw(), "out")
}

/// Message for the last failing call on this thread; empty after a success.
/// The pointer stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn sf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

const STATUSES: [SfStatus; 17] = [
    SfStatus::Ok,
    SfStatus::NullPointer,
    SfStatus::InvalidUtf8,
    SfStatus::InvalidSymbol,
    SfStatus::InvalidFiber,
    SfStatus::NotInvertible,
    SfStatus::Domain,
    SfStatus::Precondition,
    SfStatus::ColorOutOfRange,
    SfStatus::NotAdmissible,
    SfStatus::Hypothesis,
    SfStatus::Degenerate,
    SfStatus::NumericInconsistency,
    SfStatus::TriangulationParse,
    SfStatus::InvalidTriangulation,
    SfStatus::Unsupported,
    SfStatus::Panic,
];

/// Static name of a status code, e.g. `"precondition"`; `"unknown"` for values outside the enum.
#[no_mangle]
pub extern "C" fn sf_status_name(status: i32) -> *const c_char {
    let Some(&status) = usize::try_from(status).ok().and_then(|i| STATUSES.get(i)) else {
        return c"unknown".as_ptr();
    };
    let s: &'static CStr = match status {
        SfStatus::Ok => c"ok",
        SfStatus::NullPointer => c"null-pointer",
        SfStatus::InvalidUtf8 => c"invalid-utf8",
        SfStatus::InvalidSymbol => c"invalid-symbol",
        SfStatus::InvalidFiber => c"invalid-fiber",
        SfStatus::NotInvertible => c"not-invertible",
        SfStatus::Domain => c"domain",
        SfStatus::Precondition => c"precondition",
        SfStatus::ColorOutOfRange => c"color-out-of-range",
        SfStatus::NotAdmissible => c"not-admissible",
        SfStatus::Hypothesis => c"hypothesis",
        SfStatus::Degenerate => c"degenerate",
        SfStatus::NumericInconsistency => c"numeric-inconsistency",
        SfStatus::TriangulationParse => c"triangulation-parse",
        SfStatus::InvalidTriangulation => c"invalid-triangulation",
        SfStatus::Unsupported => c"unsupported",
        SfStatus::Panic => c"panic",
    };
    s.as_ptr()
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn sf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Frees a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must be NULL or a pointer obtained from this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a symbol from JSON such as
/// `{"epsilon":"o","genus":1,"fibers":[[3,1],[5,1]],"boundary":true}`.
///
/// # Safety
/// `json` must be NULL or a NUL-terminated string; `out` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn sf_symbol_parse(json: *const c_char, out: *mut *mut SfSymbol) -> SfStatus {
    guard(|| {
        let text = str_arg(json, "json")?;
        let s = SeifertSymbol::from_json(text)?;
        write_out(out, Box::into_raw(Box::new(SfSymbol(s))), "out")
    })
}

/// Builds a symbol from arrays of `a_j` and `b_j`. `orientable` selects `o` (nonzero) or `n` (zero).
///
/// # Safety
/// `a` and `b` must point to `n` readable values each (they may be NULL when `n == 0`);
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_symbol_new(
    orientable: bool,
    genus: i64,
    a: *const i64,
    b: *const i64,
    n: usize,
    boundary: bool,
    out: *mut *mut SfSymbol,
) -> SfStatus {
    guard(|| {
        let fibers = if n == 0 {
            Vec::new()
        } else {
            if a.is_null() || b.is_null() {
                return Err(null("fiber array"));
            }
            let (a, b) = (
                std::slice::from_raw_parts(a, n),
                std::slice::from_raw_parts(b, n),
            );
            a.iter().zip(b).map(|(&a, &b)| Fiber::new(a, b)).collect()
        };
        let eps = if orientable {
            Epsilon::Orientable
        } else {
            Epsilon::NonOrientable
        };
        let s = SeifertSymbol::new(eps, genus, fibers, boundary)?;
        write_out(out, Box::into_raw(Box::new(SfSymbol(s))), "out")
    })
}

/// # Safety
/// `s` must be NULL or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn sf_symbol_free(s: *mut SfSymbol) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Compact JSON of a symbol; free the result with [`sf_string_free`].
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_symbol_to_json(s: *const SfSymbol, out: *mut *mut c_char) -> SfStatus {
    guard(|| write_string(out, ref_arg(s, "symbol")?.0.to_json()))
}

unsafe fn derive_symbol(
    s: *const SfSymbol,
    out: *mut *mut SfSymbol,
    f: impl FnOnce(&SeifertSymbol) -> seifert_tv::Result<SeifertSymbol>,
) -> SfStatus {
    guard(|| {
        let next = f(&ref_arg(s, "symbol")?.0)?;
        write_out(out, Box::into_raw(Box::new(SfSymbol(next))), "out")
    })
}

/// The double of a bounded symbol, as a new handle.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_symbol_double(s: *const SfSymbol, out: *mut *mut SfSymbol) -> SfStatus {
    derive_symbol(s, out, |x| x.double())
}

/// The orientation reversal, as a new handle.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_symbol_reverse(
    s: *const SfSymbol,
    out: *mut *mut SfSymbol,
) -> SfStatus {
    derive_symbol(s, out, |x| Ok(x.reverse_orientation()))
}

/// The normal form, as a new handle.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_symbol_normalize(
    s: *const SfSymbol,
    out: *mut *mut SfSymbol,
) -> SfStatus {
    derive_symbol(s, out, |x| Ok(x.normalize()))
}

/// Euler number as a reduced fraction `num / den`.
///
/// # Safety
/// `s` must be a live handle; `num` and `den` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_symbol_euler_number(
    s: *const SfSymbol,
    num: *mut i64,
    den: *mut i64,
) -> SfStatus {
    guard(|| {
        let e = ref_arg(s, "symbol")?.0.euler_number()?;
        let (n, d) = fraction_i64(e)?;
        write_out(num, n, "num")?;
        write_out(den, d, "den")
    })
}

fn fraction_i64(x: seifert_tv::Rational) -> Result<(i64, i64), Failure> {
    match (i64::try_from(x.numerator()), i64::try_from(x.denominator())) {
        (Ok(n), Ok(d)) => Ok((n, d)),
        _ => Err(Failure(
            SfStatus::Precondition,
            format!("{x} does not fit in 64 bits"),
        )),
    }
}

/// `RT_r(M)` of a closed symbol by the direct sum.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_rt(s: *const SfSymbol, r: u32, out: *mut SfInvariant) -> SfStatus {
    guard(|| {
        let v = rt_closed(&ref_arg(s, "symbol")?.0, r)?;
        write_out(out, v.into(), "out")
    })
}

/// `RT_r(D(M))` of the double of a bounded symbol by the closed form; requires `A | r`.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_rt_double_simplified(
    s: *const SfSymbol,
    r: u32,
    out: *mut SfInvariant,
) -> SfStatus {
    guard(|| {
        let v = rt_double_simplified(&ref_arg(s, "symbol")?.0, r)?;
        write_out(out, v.into(), "out")
    })
}

/// `TV_r`: `|RT_r|²` for closed symbols, `Re RT_r(D(M))` for bounded ones.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_tv(s: *const SfSymbol, r: u32, out: *mut SfTv) -> SfStatus {
    guard(|| {
        let sym = &ref_arg(s, "symbol")?.0;
        let v = if sym.has_boundary() {
            tv_bounded(sym, r)?
        } else {
            tv_closed(sym, r)?
        };
        write_out(out, v.into(), "out")
    })
}

/// Lower bound for `|TV_{kA}(M)|`, or for the double when `of_double` is set.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_lower_bound(
    s: *const SfSymbol,
    k: u32,
    of_double: bool,
    out: *mut f64,
) -> SfStatus {
    guard(|| {
        let target = if of_double { Target::DM } else { Target::M };
        let b = lower_bound_for(&ref_arg(s, "symbol")?.0, k, target)?;
        write_out(out, b, "out")
    })
}

/// Hypothesis classification and certificate as JSON; free with [`sf_string_free`].
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_certify(s: *const SfSymbol, out: *mut *mut c_char) -> SfStatus {
    guard(|| {
        let sym = &ref_arg(s, "symbol")?.0;
        sym.require_positive_fibers()?;
        let c = classify_hypothesis(sym)?;
        let json =
            serde_json::to_string(&c).map_err(|e| Failure(SfStatus::Panic, e.to_string()))?;
        write_string(out, json)
    })
}

/// Dedekind sum `s(b, a)` as a reduced fraction.
///
/// # Safety
/// `num` and `den` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_dedekind_sum(b: i64, a: i64, num: *mut i64, den: *mut i64) -> SfStatus {
    guard(|| {
        let (n, d) = fraction_i64(dedekind_sum(b, a)?)?;
        write_out(num, n, "num")?;
        write_out(den, d, "den")
    })
}

/// Quantum 6j symbol for colours `(i, j, k, l, m, n)` at level `r`.
///
/// # Safety
/// `colors` must point to 6 readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_six_j(colors: *const u32, r: u32, out: *mut SfComplex) -> SfStatus {
    guard(|| {
        if colors.is_null() {
            return Err(null("colors"));
        }
        let c: [u32; 6] = std::slice::from_raw_parts(colors, 6)
            .try_into()
            .expect("six entries");
        let v = RootContext::new(r)?.six_j(c)?;
        write_out(out, SfComplex { re: v.re, im: v.im }, "out")
    })
}

/// Parses a triangulation in the `tet <id>: g0 g1 g2 g3` text format.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_triangulation_parse(
    text: *const c_char,
    out: *mut *mut SfTriangulation,
) -> SfStatus {
    guard(|| {
        let t = Triangulation::parse(str_arg(text, "text")?)?;
        write_out(out, Box::into_raw(Box::new(SfTriangulation(t))), "out")
    })
}

/// The shipped two-tetrahedron triangulation of the 3-sphere.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_triangulation_s3(out: *mut *mut SfTriangulation) -> SfStatus {
    guard(|| {
        write_out(
            out,
            Box::into_raw(Box::new(SfTriangulation(Triangulation::s3()))),
            "out",
        )
    })
}

/// # Safety
/// `t` must be NULL or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn sf_triangulation_free(t: *mut SfTriangulation) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Numbers of vertex, edge, face and tetrahedron classes. Any out pointer may be NULL.
///
/// # Safety
/// `t` must be a live handle; non-NULL out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_triangulation_counts(
    t: *const SfTriangulation,
    vertices: *mut usize,
    edges: *mut usize,
    faces: *mut usize,
    tetrahedra: *mut usize,
) -> SfStatus {
    guard(|| {
        let t = &ref_arg(t, "triangulation")?.0;
        for (p, v) in [
            (vertices, t.num_vertices()),
            (edges, t.num_edges()),
            (faces, t.num_faces()),
            (tetrahedra, t.num_tetrahedra()),
        ] {
            if !p.is_null() {
                p.write(v);
            }
        }
        Ok(())
    })
}

/// `TV_r` of a closed triangulation by the 6j state sum.
///
/// # Safety
/// `t` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_tv_statesum(
    t: *const SfTriangulation,
    r: u32,
    out: *mut SfTv,
) -> SfStatus {
    guard(|| {
        let t = &ref_arg(t, "triangulation")?.0;
        let v = tv_statesum(t, &RootContext::new(r)?)?;
        write_out(out, v.into(), "out")
    })
}

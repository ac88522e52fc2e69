//! C interface to `fockcat`.
//!
//! Every function returns an [`FcStatus`]. On failure the message of the most
//! recent error on the calling thread is available from [`fc_last_error`].
//! Strings handed out by the library must be released with [`fc_string_free`],
//! and handles with their matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fockcat::diagrams::{self, DiagramGroupoid};
use fockcat::dsl::{self, Query};
use fockcat::groupoid::{weak_quotient, PermAction};
use fockcat::scalar::format_rational;
use fockcat::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    ComposeConst = 4,
    NonIntegral = 5,
    Cutoff = 6,
    Size = 7,
    Diverged = 8,
    Input = 9,
    Type = 10,
    Unsupported = 11,
    Panic = 12,
}

impl From<&Error> for FcStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Parse { .. } | Error::UnknownIdentifier { .. } => FcStatus::Parse,
            Error::ComposeConstant { .. } => FcStatus::ComposeConst,
            Error::NonIntegral { .. } => FcStatus::NonIntegral,
            Error::Cutoff { .. } => FcStatus::Cutoff,
            Error::Size(_) => FcStatus::Size,
            Error::Diverged { .. } => FcStatus::Diverged,
            Error::Input(_) => FcStatus::Input,
            Error::Type(_) => FcStatus::Type,
            Error::Unsupported(_) => FcStatus::Unsupported,
        }
    }
}

/// A parsed query, ready to be evaluated any number of times.
pub struct FcQuery {
    query: Query,
}

/// An enumerated diagram groupoid.
pub struct FcDiagrams {
    groupoid: DiagramGroupoid,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let message = CString::new(message.replace('\0', " ")).expect("interior nul bytes were replaced");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(message));
}

fn fail(status: FcStatus, message: String) -> FcStatus {
    set_last_error(message);
    status
}

fn guard(body: impl FnOnce() -> Result<(), FcStatus>) -> FcStatus {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => FcStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => fail(FcStatus::Panic, "internal panic".into()),
    }
}

fn library_error(e: Error) -> FcStatus {
    fail(FcStatus::from(&e), e.to_string())
}

unsafe fn read_str<'a>(text: *const c_char) -> Result<&'a str, FcStatus> {
    if text.is_null() {
        return Err(fail(FcStatus::NullPointer, "null string argument".into()));
    }
    CStr::from_ptr(text).to_str().map_err(|e| fail(FcStatus::InvalidUtf8, e.to_string()))
}

unsafe fn read_slice<'a, T>(data: *const T, len: usize) -> Result<&'a [T], FcStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if data.is_null() {
        return Err(fail(FcStatus::NullPointer, "null array argument".into()));
    }
    Ok(std::slice::from_raw_parts(data, len))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), FcStatus> {
    if out.is_null() {
        return Err(fail(FcStatus::NullPointer, "null output pointer".into()));
    }
    out.write(value);
    Ok(())
}

fn into_c_string(text: String) -> *mut c_char {
    CString::new(text).expect("library output never contains nul bytes").into_raw()
}

/// Message of the last failure on this thread, or null if the last call
/// succeeded. The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn fc_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library. Null is accepted.
///
/// # Safety
/// `s` must be null or a pointer obtained from this library that has not
/// been freed yet.
#[no_mangle]
pub unsafe extern "C" fn fc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Version string of the library. Static, do not free.
#[no_mangle]
pub extern "C" fn fc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses and evaluates a query, writing its JSON result to `*out_json`.
///
/// # Safety
/// `text` must be a nul-terminated string and `out_json` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn fc_eval(text: *const c_char, out_json: *mut *mut c_char) -> FcStatus {
    guard(|| {
        let text = read_str(text)?;
        let value = dsl::run(text).map_err(library_error)?;
        write_out(out_json, into_c_string(value.to_string()))
    })
}

/// Parses a query into a reusable handle.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn fc_query_parse(text: *const c_char, out: *mut *mut FcQuery) -> FcStatus {
    guard(|| {
        let query = dsl::parse_query(read_str(text)?).map_err(library_error)?;
        write_out(out, Box::into_raw(Box::new(FcQuery { query })))
    })
}

/// Normalized text of a parsed query.
///
/// # Safety
/// `query` must be a live handle from [`fc_query_parse`].
#[no_mangle]
pub unsafe extern "C" fn fc_query_text(query: *const FcQuery, out_text: *mut *mut c_char) -> FcStatus {
    guard(|| {
        let query = query.as_ref().ok_or_else(|| fail(FcStatus::NullPointer, "null query handle".into()))?;
        write_out(out_text, into_c_string(query.query.to_string()))
    })
}

/// # Safety
/// `query` must be a live handle from [`fc_query_parse`].
#[no_mangle]
pub unsafe extern "C" fn fc_query_eval(query: *const FcQuery, out_json: *mut *mut c_char) -> FcStatus {
    guard(|| {
        let query = query.as_ref().ok_or_else(|| fail(FcStatus::NullPointer, "null query handle".into()))?;
        let value = dsl::eval_query(&query.query).map_err(library_error)?;
        write_out(out_json, into_c_string(value.to_string()))
    })
}

/// # Safety
/// `query` must be null or a handle from [`fc_query_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fc_query_free(query: *mut FcQuery) {
    if !query.is_null() {
        drop(Box::from_raw(query));
    }
}

/// Enumerates the diagrams with `k` inputs, `l` outputs and the given vertex
/// valences.
///
/// # Safety
/// `valences` must point to `count` readable values (or be null when
/// `count` is zero) and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fc_diagrams_new(k: usize, l: usize, valences: *const usize, count: usize, out: *mut *mut FcDiagrams) -> FcStatus {
    guard(|| {
        let valences = read_slice(valences, count)?;
        let groupoid = diagrams::enumerate(k, l, valences).map_err(library_error)?;
        write_out(out, Box::into_raw(Box::new(FcDiagrams { groupoid })))
    })
}

/// Number of isomorphism classes.
///
/// # Safety
/// `d` must be a live handle from [`fc_diagrams_new`].
#[no_mangle]
pub unsafe extern "C" fn fc_diagrams_class_count(d: *const FcDiagrams, out: *mut usize) -> FcStatus {
    guard(|| {
        let d = d.as_ref().ok_or_else(|| fail(FcStatus::NullPointer, "null diagram handle".into()))?;
        write_out(out, d.groupoid.classes.len())
    })
}

/// Groupoid cardinality as an exact fraction such as `"1/48"`.
///
/// # Safety
/// `d` must be a live handle from [`fc_diagrams_new`].
#[no_mangle]
pub unsafe extern "C" fn fc_diagrams_cardinality(d: *const FcDiagrams, out_text: *mut *mut c_char) -> FcStatus {
    guard(|| {
        let d = d.as_ref().ok_or_else(|| fail(FcStatus::NullPointer, "null diagram handle".into()))?;
        write_out(out_text, into_c_string(format_rational(&d.groupoid.cardinality())))
    })
}

/// Full dump of the classes, their automorphism orders and occupation profiles.
///
/// # Safety
/// `d` must be a live handle from [`fc_diagrams_new`].
#[no_mangle]
pub unsafe extern "C" fn fc_diagrams_json(d: *const FcDiagrams, out_json: *mut *mut c_char) -> FcStatus {
    guard(|| {
        let d = d.as_ref().ok_or_else(|| fail(FcStatus::NullPointer, "null diagram handle".into()))?;
        write_out(out_json, into_c_string(d.groupoid.to_json().to_string()))
    })
}

/// # Safety
/// `d` must be null or a handle from [`fc_diagrams_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fc_diagrams_free(d: *mut FcDiagrams) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Cardinality of the action groupoid of a permutation group acting on
/// `set_size` points. `images` holds `generator_count` rows of `set_size`
/// entries, row `g` listing the image of each point under generator `g`.
///
/// # Safety
/// `images` must point to `set_size * generator_count` readable values and
/// `out_text` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fc_weak_quotient_cardinality(
    set_size: usize,
    images: *const usize,
    generator_count: usize,
    out_text: *mut *mut c_char,
) -> FcStatus {
    guard(|| {
        let len = set_size.checked_mul(generator_count).ok_or_else(|| fail(FcStatus::Size, "generator table is too large".into()))?;
        let flat = read_slice(images, len)?;
        let generators =
            if set_size == 0 { vec![Vec::new(); generator_count] } else { flat.chunks(set_size).map(<[usize]>::to_vec).collect() };
        let action = PermAction::from_images(set_size, generators).map_err(library_error)?;
        let cardinality = weak_quotient(set_size, &action)
            .map_err(library_error)?
            .rational_cardinality()
            .ok_or_else(|| fail(FcStatus::Unsupported, "cardinality is not rational".into()))?;
        write_out(out_text, into_c_string(format_rational(&cardinality)))
    })
}

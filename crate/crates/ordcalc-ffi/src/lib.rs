//! C ABI over the ordcalc engine.
//!
//! Semigroups are opaque handles created from JSON documents; every
//! operation returns a status code and, on success, a JSON report string
//! allocated by this library. Strings must be released with
//! [`ordcalc_string_free`], handles with [`ordcalc_semigroup_free`].
//! The last error message is retrievable per thread via
//! [`ordcalc_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::ptr;
use std::slice;

use ordcalc::dynamics::{validate_action, DEFAULT_GROUP_CAP};
use ordcalc::io::{self, Document, NamedSemigroup};

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg).unwrap_or_else(|_| CString::new("invalid error").unwrap());
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum OrdcalcStatus {
    /// Success; any requested output was produced.
    Ok = 0,
    /// The computation ran but the checked property failed; the report
    /// carries witnesses.
    PropertyFailed = 1,
    /// Malformed JSON input.
    BadJson = 2,
    /// Schema violation (wrong kind, wrong shape, unknown fields).
    BadSchema = 3,
    /// Dangling or duplicate element names.
    BadName = 4,
    /// The document parsed but violates a structural axiom.
    BadStructure = 5,
    /// A null handle or pointer argument.
    NullArgument = 6,
    /// Any other engine error; see `ordcalc_last_error`.
    EngineError = 7,
}

fn status_of_io(e: &io::IoError) -> OrdcalcStatus {
    match e.code() {
        "E_JSON" => OrdcalcStatus::BadJson,
        "E_ADD_SHAPE" | "E_SCHEMA" => OrdcalcStatus::BadSchema,
        "E_NAME" => OrdcalcStatus::BadName,
        _ => OrdcalcStatus::BadStructure,
    }
}

/// An opaque named semigroup handle.
pub struct OrdcalcSemigroup {
    inner: NamedSemigroup,
}

/// # Safety
/// `bytes` must point to `len` readable bytes; `out` must be a valid
/// location for a handle pointer.
#[no_mangle]
pub unsafe extern "C" fn ordcalc_semigroup_parse(
    bytes: *const u8,
    len: usize,
    out: *mut *mut OrdcalcSemigroup,
) -> OrdcalcStatus {
    if bytes.is_null() || out.is_null() {
        set_error("null argument".into());
        return OrdcalcStatus::NullArgument;
    }
    let data = slice::from_raw_parts(bytes, len);
    let doc = match io::parse(data) {
        Ok(Document::Semigroup(d)) => d,
        Ok(other) => {
            set_error(format!("expected a semigroup document, found {}", other.kind()));
            return OrdcalcStatus::BadSchema;
        }
        Err(e) => {
            let s = status_of_io(&e);
            set_error(e.to_string());
            return s;
        }
    };
    match io::semigroup_from_doc(&doc) {
        Ok(named) => {
            *out = Box::into_raw(Box::new(OrdcalcSemigroup { inner: named }));
            OrdcalcStatus::Ok
        }
        Err(e) => {
            let s = status_of_io(&e);
            set_error(e.to_string());
            s
        }
    }
}

/// # Safety
/// `handle` must be null or a pointer returned by
/// [`ordcalc_semigroup_parse`] that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn ordcalc_semigroup_free(handle: *mut OrdcalcSemigroup) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Number of elements in the carrier; zero for a null handle.
///
/// # Safety
/// `handle` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ordcalc_semigroup_size(handle: *const OrdcalcSemigroup) -> usize {
    if handle.is_null() {
        return 0;
    }
    (*handle).inner.semigroup.size()
}

fn emit_report(
    env: &io::ReportEnvelope,
    out: *mut *mut c_char,
) -> OrdcalcStatus {
    let bytes = env.to_bytes();
    let c = match CString::new(bytes) {
        Ok(c) => c,
        Err(_) => {
            set_error("report contained an interior nul byte".into());
            return OrdcalcStatus::EngineError;
        }
    };
    unsafe {
        if !out.is_null() {
            *out = c.into_raw();
        }
    }
    if env.passed {
        OrdcalcStatus::Ok
    } else {
        OrdcalcStatus::PropertyFailed
    }
}

/// Runs the W- and Cu-axiom batteries. On return, `*report` holds a JSON
/// report string when `report` is non-null.
///
/// # Safety
/// `handle` must be a live handle; `report` null or writable.
#[no_mangle]
pub unsafe extern "C" fn ordcalc_validate(
    handle: *const OrdcalcSemigroup,
    report: *mut *mut c_char,
) -> OrdcalcStatus {
    if handle.is_null() {
        set_error("null handle".into());
        return OrdcalcStatus::NullArgument;
    }
    let named = &(*handle).inner;
    let mut env = io::ReportEnvelope::new("validate", named.names.clone());
    env.push(ordcalc::wsemi::check_w_axioms(&named.semigroup));
    emit_report(&env, report)
}

/// Almost-unperforation scan; a failing scan returns `PropertyFailed` with
/// the `(a, b, k)` witness inside the report.
///
/// # Safety
/// `handle` must be a live handle; `report` null or writable.
#[no_mangle]
pub unsafe extern "C" fn ordcalc_compare_au(
    handle: *const OrdcalcSemigroup,
    report: *mut *mut c_char,
) -> OrdcalcStatus {
    if handle.is_null() {
        set_error("null handle".into());
        return OrdcalcStatus::NullArgument;
    }
    let named = &(*handle).inner;
    let res = ordcalc::functional::almost_unperforated(&named.semigroup);
    let mut env = io::ReportEnvelope::new("compare", named.names.clone());
    let mut rep = ordcalc::report::AxiomReport::new("almost_unperforation");
    match res.witness {
        None => rep.pass("almost_unperforated"),
        Some((a, b, k)) => rep.fail("almost_unperforated", vec![a, b, k]),
    }
    env.push(rep);
    emit_report(&env, report)
}

/// Generates the normal closed pair from a relation document and returns
/// the pair document as JSON.
///
/// # Safety
/// `handle` must be a live handle; `seed_json` must point to `seed_len`
/// readable bytes; `pair_out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn ordcalc_generate_normal(
    handle: *const OrdcalcSemigroup,
    seed_json: *const u8,
    seed_len: usize,
    pair_out: *mut *mut c_char,
) -> OrdcalcStatus {
    if handle.is_null() || seed_json.is_null() {
        set_error("null argument".into());
        return OrdcalcStatus::NullArgument;
    }
    let named = &(*handle).inner;
    let data = slice::from_raw_parts(seed_json, seed_len);
    let rel_doc = match io::parse(data) {
        Ok(Document::Relation(d)) => d,
        Ok(other) => {
            set_error(format!("expected a relation document, found {}", other.kind()));
            return OrdcalcStatus::BadSchema;
        }
        Err(e) => {
            let s = status_of_io(&e);
            set_error(e.to_string());
            return s;
        }
    };
    let seed = match io::relation_from_doc(&rel_doc, named) {
        Ok(r) => r,
        Err(e) => {
            let s = status_of_io(&e);
            set_error(e.to_string());
            return s;
        }
    };
    match ordcalc::genpair::generate_normal(&named.semigroup, &seed) {
        Ok(g) => {
            let doc = io::pair_to_doc(&g.pair, named, &rel_doc.on);
            let bytes = io::serialize(&Document::Pair(doc));
            match CString::new(bytes) {
                Ok(c) => {
                    if !pair_out.is_null() {
                        *pair_out = c.into_raw();
                    }
                    OrdcalcStatus::Ok
                }
                Err(_) => {
                    set_error("pair document contained an interior nul byte".into());
                    OrdcalcStatus::EngineError
                }
            }
        }
        Err(e) => {
            set_error(e.to_string());
            OrdcalcStatus::EngineError
        }
    }
}

/// Quotients by the normal pair generated from an action document and
/// returns a report with the quotient semigroup and the class map.
///
/// # Safety
/// `handle` must be a live handle; `action_json` must point to
/// `action_len` readable bytes; `report` null or writable.
#[no_mangle]
pub unsafe extern "C" fn ordcalc_dyn_quotient(
    handle: *const OrdcalcSemigroup,
    action_json: *const u8,
    action_len: usize,
    report: *mut *mut c_char,
) -> OrdcalcStatus {
    if handle.is_null() || action_json.is_null() {
        set_error("null argument".into());
        return OrdcalcStatus::NullArgument;
    }
    let named = &(*handle).inner;
    let data = slice::from_raw_parts(action_json, action_len);
    let action_doc = match io::parse(data) {
        Ok(Document::Action(d)) => d,
        Ok(other) => {
            set_error(format!("expected an action document, found {}", other.kind()));
            return OrdcalcStatus::BadSchema;
        }
        Err(e) => {
            let s = status_of_io(&e);
            set_error(e.to_string());
            return s;
        }
    };
    let gens = match io::action_from_doc(&action_doc, named) {
        Ok(g) => g,
        Err(e) => {
            let s = status_of_io(&e);
            set_error(e.to_string());
            return s;
        }
    };
    let g = match validate_action(&named.semigroup, &gens, DEFAULT_GROUP_CAP) {
        Ok(g) => g,
        Err(e) => {
            set_error(e.to_string());
            return OrdcalcStatus::BadStructure;
        }
    };
    match ordcalc::dynamics::dyn_quotient(&named.semigroup, &g) {
        Ok(q) => {
            let qnames: Vec<String> = q
                .reps
                .iter()
                .map(|&r| format!("[{}]", named.names[r]))
                .collect();
            let qnamed = NamedSemigroup {
                names: qnames.clone(),
                semigroup: q.quotient.clone(),
            };
            let mut env = io::ReportEnvelope::new("dyn-quotient", named.names.clone());
            env.push(ordcalc::wsemi::check_w_axioms(&q.quotient));
            let classes: std::collections::BTreeMap<String, String> =
                (0..named.semigroup.size())
                    .map(|a| (named.names[a].clone(), qnames[q.class_of[a]].clone()))
                    .collect();
            env.payload = Some(serde_json::json!({
                "quotient": io::semigroup_to_doc(&qnamed),
                "class_of": classes,
            }));
            emit_report(&env, report)
        }
        Err(e) => {
            set_error(e.to_string());
            OrdcalcStatus::EngineError
        }
    }
}

/// Completes the semigroup by round ideals and runs the completion
/// battery.
///
/// # Safety
/// `handle` must be a live handle; `report` null or writable.
#[no_mangle]
pub unsafe extern "C" fn ordcalc_complete(
    handle: *const OrdcalcSemigroup,
    report: *mut *mut c_char,
) -> OrdcalcStatus {
    if handle.is_null() {
        set_error("null handle".into());
        return OrdcalcStatus::NullArgument;
    }
    let named = &(*handle).inner;
    match ordcalc::completion::idempotence_check(&named.semigroup) {
        Ok(rep) => {
            let mut env = io::ReportEnvelope::new("complete", named.names.clone());
            env.push(rep);
            emit_report(&env, report)
        }
        Err(e) => {
            set_error(e.to_string());
            OrdcalcStatus::EngineError
        }
    }
}

/// The last error message recorded on this thread, or null. The pointer is
/// owned by the library and valid until the next failing call on the same
/// thread.
#[no_mangle]
pub extern "C" fn ordcalc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| match &*e.borrow() {
        Some(c) => c.as_ptr(),
        None => ptr::null(),
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ordcalc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nbar2_json() -> Vec<u8> {
        let spec = ordcalc::wsemi::FixtureSpec::Nbar(2);
        let named = NamedSemigroup {
            names: ordcalc::wsemi::fixture_names(&spec).unwrap(),
            semigroup: ordcalc::wsemi::make_fixture(&spec).unwrap(),
        };
        io::serialize(&Document::Semigroup(io::semigroup_to_doc(&named)))
    }

    #[test]
    fn parse_validate_free_round_trip() {
        let json = nbar2_json();
        let mut handle: *mut OrdcalcSemigroup = ptr::null_mut();
        unsafe {
            let st = ordcalc_semigroup_parse(json.as_ptr(), json.len(), &mut handle);
            assert!(matches!(st, OrdcalcStatus::Ok));
            assert_eq!(ordcalc_semigroup_size(handle), 3);
            let mut report: *mut c_char = ptr::null_mut();
            let st = ordcalc_validate(handle, &mut report);
            assert!(matches!(st, OrdcalcStatus::Ok));
            let text = std::ffi::CStr::from_ptr(report).to_str().unwrap();
            assert!(text.contains("\"passed\": true"));
            ordcalc_string_free(report);
            ordcalc_semigroup_free(handle);
        }
    }

    #[test]
    fn au_failure_is_property_failed() {
        let json = nbar2_json();
        let mut handle: *mut OrdcalcSemigroup = ptr::null_mut();
        unsafe {
            ordcalc_semigroup_parse(json.as_ptr(), json.len(), &mut handle);
            let mut report: *mut c_char = ptr::null_mut();
            let st = ordcalc_compare_au(handle, &mut report);
            assert!(matches!(st, OrdcalcStatus::PropertyFailed));
            let text = std::ffi::CStr::from_ptr(report).to_str().unwrap();
            assert!(text.contains("witness"));
            ordcalc_string_free(report);
            ordcalc_semigroup_free(handle);
        }
    }

    #[test]
    fn bad_json_status() {
        let mut handle: *mut OrdcalcSemigroup = ptr::null_mut();
        unsafe {
            let st = ordcalc_semigroup_parse(b"{".as_ptr(), 1, &mut handle);
            assert!(matches!(st, OrdcalcStatus::BadJson));
            assert!(!ordcalc_last_error().is_null());
        }
    }

    #[test]
    fn dangling_name_status() {
        let text = br#"{"kind":"semigroup","elements":["0"],"zero":"x","add":[["0"]],"prec":[["0","0"]]}"#;
        let mut handle: *mut OrdcalcSemigroup = ptr::null_mut();
        unsafe {
            let st = ordcalc_semigroup_parse(text.as_ptr(), text.len(), &mut handle);
            assert!(matches!(st, OrdcalcStatus::BadName));
        }
    }

    #[test]
    fn generate_normal_over_ffi() {
        let json = nbar2_json();
        let seed = br#"{"kind":"relation","on":"nbar2","pairs":[["2","0"]]}"#;
        let mut handle: *mut OrdcalcSemigroup = ptr::null_mut();
        unsafe {
            ordcalc_semigroup_parse(json.as_ptr(), json.len(), &mut handle);
            let mut pair: *mut c_char = ptr::null_mut();
            let st = ordcalc_generate_normal(handle, seed.as_ptr(), seed.len(), &mut pair);
            assert!(matches!(st, OrdcalcStatus::Ok));
            let text = std::ffi::CStr::from_ptr(pair).to_str().unwrap();
            // The collapsing seed generates the full order.
            let doc: serde_json::Value = serde_json::from_str(text).unwrap();
            assert_eq!(doc["order"].as_array().unwrap().len(), 9);
            ordcalc_string_free(pair);
            ordcalc_semigroup_free(handle);
        }
    }
}

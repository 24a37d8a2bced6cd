//! C ABI for embedding the scanner: opaque result handles, UTF-8 strings
//! owned by this library, and integer status codes.
//!
//! Every string returned to the caller must be released with
//! [`cryptovet_string_free`]; every scan result with
//! [`cryptovet_result_free`]. On any non-OK status the thread-local error
//! message is set and readable via [`cryptovet_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use cryptovet::report::{render, ReportFormat};
use cryptovet::rules::{rule_by_id, rule_catalog, RuleConfig};
use cryptovet::scan::{scan_path, ScanOutcome};
use cryptovet::Error;

/// Status code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CvStatus {
    /// The call succeeded.
    CvOk = 0,
    /// A pointer or string argument was null, not UTF-8, or out of range.
    CvInvalidArgument = 1,
    /// The configuration or input was rejected.
    CvConfigError = 2,
    /// The scanner failed internally.
    CvInternalError = 3,
}

/// Report format selector for [`cryptovet_result_report`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CvFormat {
    CvFormatText = 0,
    CvFormatJson = 1,
    CvFormatSarif = 2,
}

/// Opaque scan result. Owned by the library; release with
/// [`cryptovet_result_free`].
pub struct CvScanResult {
    outcome: ScanOutcome,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: &str) {
    let stored = CString::new(message.replace('\0', " "))
        .unwrap_or_else(|_| CString::new("error message unavailable").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(stored));
}

fn clear_last_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn status_of(error: &Error) -> CvStatus {
    match error.exit_code() {
        3 => CvStatus::CvInternalError,
        _ => CvStatus::CvConfigError,
    }
}

fn fail(status: CvStatus, message: &str) -> CvStatus {
    set_last_error(message);
    status
}

/// Run `body` with panics converted to `CvInternalError` so unwinding
/// never crosses the ABI boundary.
fn guarded(body: impl FnOnce() -> CvStatus) -> CvStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => fail(CvStatus::CvInternalError, "internal panic"),
    }
}

/// Duplicate a Rust string into a caller-owned C string.
fn export_string(s: &str) -> *mut c_char {
    match CString::new(s.replace('\0', " ")) {
        Ok(c) => c.into_raw(),
        Err(_) => ptr::null_mut(),
    }
}

unsafe fn required_str<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, CvStatus> {
    if ptr.is_null() {
        return Err(fail(
            CvStatus::CvInvalidArgument,
            &format!("{what} must not be null"),
        ));
    }
    unsafe { CStr::from_ptr(ptr) }.to_str().map_err(|_| {
        fail(
            CvStatus::CvInvalidArgument,
            &format!("{what} must be valid UTF-8"),
        )
    })
}

/// Library version as a static string; never freed by the caller.
#[no_mangle]
pub extern "C" fn cryptovet_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Scan the Go project under `root`.
///
/// `rules_csv` selects rules by comma-separated id ("04,11"); pass null
/// for the whole catalog. On `CvOk`, `*out` owns the result.
///
/// # Safety
/// `root` and (when non-null) `rules_csv` must point to NUL-terminated
/// strings; `out` must point to writable memory for one pointer.
#[no_mangle]
pub unsafe extern "C" fn cryptovet_scan(
    root: *const c_char,
    rules_csv: *const c_char,
    exclude_tests: bool,
    out: *mut *mut CvScanResult,
) -> CvStatus {
    guarded(|| {
        clear_last_error();
        if out.is_null() {
            return fail(CvStatus::CvInvalidArgument, "out must not be null");
        }
        unsafe { *out = ptr::null_mut() };

        let root = match unsafe { required_str(root, "root") } {
            Ok(s) => s,
            Err(status) => return status,
        };

        let mut config = RuleConfig {
            exclude_tests,
            ..RuleConfig::default()
        };
        if !rules_csv.is_null() {
            let csv = match unsafe { required_str(rules_csv, "rules_csv") } {
                Ok(s) => s,
                Err(status) => return status,
            };
            config.enabled_rules = csv
                .split(',')
                .map(str::trim)
                .filter(|id| !id.is_empty())
                .map(str::to_string)
                .collect();
            for id in &config.enabled_rules {
                if rule_by_id(id).is_none() {
                    return fail(CvStatus::CvConfigError, &format!("unknown rule id {id:?}"));
                }
            }
        }

        match scan_path(Path::new(root), &config) {
            Ok(outcome) => {
                let handle = Box::new(CvScanResult { outcome });
                unsafe { *out = Box::into_raw(handle) };
                CvStatus::CvOk
            }
            Err(e) => fail(status_of(&e), &e.to_string()),
        }
    })
}

/// Number of findings in a scan result; 0 for null.
///
/// # Safety
/// `result` must be null or a pointer from [`cryptovet_scan`] that has not
/// been freed.
#[no_mangle]
pub unsafe extern "C" fn cryptovet_result_finding_count(result: *const CvScanResult) -> usize {
    if result.is_null() {
        return 0;
    }
    unsafe { &*result }.outcome.findings.len()
}

/// Render a scan result as text, JSON, or SARIF. On `CvOk`, `*out` is a
/// caller-owned string; release it with [`cryptovet_string_free`].
///
/// # Safety
/// `result` must be a live pointer from [`cryptovet_scan`]; `out` must
/// point to writable memory for one pointer.
#[no_mangle]
pub unsafe extern "C" fn cryptovet_result_report(
    result: *const CvScanResult,
    format: CvFormat,
    out: *mut *mut c_char,
) -> CvStatus {
    guarded(|| {
        clear_last_error();
        if out.is_null() {
            return fail(CvStatus::CvInvalidArgument, "out must not be null");
        }
        unsafe { *out = ptr::null_mut() };
        if result.is_null() {
            return fail(CvStatus::CvInvalidArgument, "result must not be null");
        }
        let format = match format {
            CvFormat::CvFormatText => ReportFormat::Text,
            CvFormat::CvFormatJson => ReportFormat::Json,
            CvFormat::CvFormatSarif => ReportFormat::Sarif,
        };
        match render(&unsafe { &*result }.outcome.findings, format) {
            Ok(report) => {
                let exported = export_string(&report);
                if exported.is_null() {
                    return fail(CvStatus::CvInternalError, "report allocation failed");
                }
                unsafe { *out = exported };
                CvStatus::CvOk
            }
            Err(e) => fail(status_of(&e), &e.to_string()),
        }
    })
}

/// Release a scan result. Null is a no-op.
///
/// # Safety
/// `result` must be null or a pointer from [`cryptovet_scan`] that has not
/// already been freed.
#[no_mangle]
pub unsafe extern "C" fn cryptovet_result_free(result: *mut CvScanResult) {
    if !result.is_null() {
        drop(unsafe { Box::from_raw(result) });
    }
}

/// Release a string returned by this library. Null is a no-op.
///
/// # Safety
/// `s` must be null or a string this library returned that has not
/// already been freed.
#[no_mangle]
pub unsafe extern "C" fn cryptovet_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// The rule catalog as a JSON array (id, category, title, severity,
/// advisory). Caller owns the string; release with
/// [`cryptovet_string_free`]. Returns null on allocation failure.
#[no_mangle]
pub extern "C" fn cryptovet_rule_catalog_json() -> *mut c_char {
    let rows: Vec<serde_json::Value> = rule_catalog()
        .iter()
        .map(|d| {
            serde_json::json!({
                "id": d.id,
                "category": d.category,
                "title": d.title,
                "severity": d.severity.to_string(),
                "advisory": d.advisory,
            })
        })
        .collect();
    match serde_json::to_string_pretty(&rows) {
        Ok(body) => export_string(&body),
        Err(_) => ptr::null_mut(),
    }
}

/// Copy of the calling thread's last error message, or null when the last
/// call on this thread succeeded. Caller owns the string; release with
/// [`cryptovet_string_free`].
#[no_mangle]
pub extern "C" fn cryptovet_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| match slot.borrow().as_ref() {
        Some(message) => match message.to_str() {
            Ok(s) => export_string(s),
            Err(_) => ptr::null_mut(),
        },
        None => ptr::null_mut(),
    })
}

#[cfg(test)]
mod tests {
    use std::ffi::CString;
    use std::fs;

    use super::*;

    fn c(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    unsafe fn take_string(ptr: *mut c_char) -> String {
        assert!(!ptr.is_null());
        let s = unsafe { CStr::from_ptr(ptr) }.to_str().unwrap().to_string();
        unsafe { cryptovet_string_free(ptr) };
        s
    }

    fn scan_ok(root: &str, rules: Option<&str>) -> *mut CvScanResult {
        let root = c(root);
        let rules = rules.map(c);
        let mut out: *mut CvScanResult = ptr::null_mut();
        let status = unsafe {
            cryptovet_scan(
                root.as_ptr(),
                rules.as_ref().map_or(ptr::null(), |r| r.as_ptr()),
                true,
                &mut out,
            )
        };
        assert_eq!(status, CvStatus::CvOk);
        assert!(!out.is_null());
        out
    }

    #[test]
    fn version_is_a_static_utf8_string() {
        let v = unsafe { CStr::from_ptr(cryptovet_version()) };
        assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    }

    #[test]
    fn scan_report_free_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(
            dir.path().join("hash.go"),
            "package p\n\nimport \"crypto/md5\"\n\nfunc run() { md5.New() }\n",
        )
        .unwrap();

        let result = scan_ok(dir.path().to_str().unwrap(), None);
        assert_eq!(unsafe { cryptovet_result_finding_count(result) }, 1);

        let mut report: *mut c_char = ptr::null_mut();
        let status =
            unsafe { cryptovet_result_report(result, CvFormat::CvFormatJson, &mut report) };
        assert_eq!(status, CvStatus::CvOk);
        let body = unsafe { take_string(report) };
        let findings: Vec<serde_json::Value> = serde_json::from_str(&body).unwrap();
        assert_eq!(findings[0]["rule_id"], "01");

        unsafe { cryptovet_result_free(result) };
    }

    #[test]
    fn rule_filter_narrows_the_scan() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(
            dir.path().join("hash.go"),
            "package p\n\nimport \"crypto/md5\"\n\nfunc run() { md5.New() }\n",
        )
        .unwrap();

        let result = scan_ok(dir.path().to_str().unwrap(), Some("11"));
        assert_eq!(unsafe { cryptovet_result_finding_count(result) }, 0);
        unsafe { cryptovet_result_free(result) };
    }

    #[test]
    fn null_root_is_invalid_and_sets_the_error() {
        let mut out: *mut CvScanResult = ptr::null_mut();
        let status = unsafe { cryptovet_scan(ptr::null(), ptr::null(), true, &mut out) };
        assert_eq!(status, CvStatus::CvInvalidArgument);
        assert!(out.is_null());
        let message = unsafe { take_string(cryptovet_last_error_message()) };
        assert!(message.contains("root"));
    }

    #[test]
    fn unknown_rule_is_a_config_error() {
        let dir = tempfile::tempdir().unwrap();
        let root = c(dir.path().to_str().unwrap());
        let rules = c("99");
        let mut out: *mut CvScanResult = ptr::null_mut();
        let status = unsafe { cryptovet_scan(root.as_ptr(), rules.as_ptr(), true, &mut out) };
        assert_eq!(status, CvStatus::CvConfigError);
        let message = unsafe { take_string(cryptovet_last_error_message()) };
        assert!(message.contains("99"));
    }

    #[test]
    fn missing_root_is_a_config_error_with_message() {
        let root = c("/nonexistent/cryptovet-root");
        let mut out: *mut CvScanResult = ptr::null_mut();
        let status = unsafe { cryptovet_scan(root.as_ptr(), ptr::null(), true, &mut out) };
        assert_eq!(status, CvStatus::CvConfigError);
        assert!(out.is_null());
        let message = unsafe { take_string(cryptovet_last_error_message()) };
        assert!(message.contains("nonexistent"));
    }

    #[test]
    fn success_clears_the_previous_error() {
        let mut out: *mut CvScanResult = ptr::null_mut();
        unsafe { cryptovet_scan(ptr::null(), ptr::null(), true, &mut out) };
        assert!(!cryptovet_last_error_message().is_null());

        let dir = tempfile::tempdir().unwrap();
        let result = scan_ok(dir.path().to_str().unwrap(), None);
        unsafe { cryptovet_result_free(result) };
        assert!(cryptovet_last_error_message().is_null());
    }

    #[test]
    fn catalog_json_lists_all_rules() {
        let body = unsafe { take_string(cryptovet_rule_catalog_json()) };
        let rows: Vec<serde_json::Value> = serde_json::from_str(&body).unwrap();
        assert_eq!(rows.len(), 14);
        assert_eq!(rows[0]["id"], "01");
        assert_eq!(rows[13]["severity"], "High");
    }

    #[test]
    fn frees_accept_null() {
        unsafe {
            cryptovet_result_free(ptr::null_mut());
            cryptovet_string_free(ptr::null_mut());
        }
    }

    #[test]
    fn generated_header_declares_the_surface() {
        let header = fs::read_to_string(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/include/cryptovet.h"
        ))
        .unwrap();
        for symbol in [
            "cryptovet_version",
            "cryptovet_scan",
            "cryptovet_result_report",
            "cryptovet_result_finding_count",
            "cryptovet_result_free",
            "cryptovet_string_free",
            "cryptovet_rule_catalog_json",
            "cryptovet_last_error_message",
            "CvScanResult",
            "CvStatus",
        ] {
            assert!(header.contains(symbol), "header lacks {symbol}");
        }
    }
}

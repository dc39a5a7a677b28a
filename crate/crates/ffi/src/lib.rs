//! C ABI over `schurcc`.
//!
//! Fields and contexts are opaque handles created by `*_new` functions and
//! released with the matching `*_free`. Every fallible call returns a
//! `SchurccStatus`; on failure `schurcc_last_error_message` describes the
//! error on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use schurcc::context::{build_context, BMode, SchurContext};
use schurcc::decision::{self, Decision, Method, OracleOptions, Verdict};
use schurcc::field::{load_field, FieldSpec};
use schurcc::local::{self, CaseTag, DEFAULT_CLASS_BOUND};
use schurcc::Error;

/// Result of every fallible call. Values match the CLI exit codes where
/// they overlap.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SchurccStatus {
    Ok = 0,
    InvalidInput = 1,
    PrimeNotInField = 2,
    InvariantViolation = 3,
    ResourceLimit = 4,
    NullPointer = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SchurccBMode {
    Definition = 0,
    Example = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SchurccVerdict {
    Finite = 0,
    Infinite = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SchurccMethod {
    FullScan = 0,
    RestrictedScan = 1,
    Noncyclic = 2,
    Oracle = 3,
    ShortcutSmallExponent = 4,
    ShortcutNuDominates = 5,
    ShortcutOutsideSpan = 6,
}

/// Opaque abelian field.
pub struct SchurccField(FieldSpec);

/// Opaque field-and-prime context.
pub struct SchurccContext(SchurContext);

/// Invariants of a context.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct SchurccContextInfo {
    pub conductor: u64,
    pub degree: u64,
    pub p: u64,
    pub a: u32,
    pub s: u32,
    pub b: u32,
    pub n_f: u64,
    pub g_order: u64,
    pub c_order: u64,
    pub rho: u64,
    pub sigma: u64,
    pub q: u64,
    pub t: u32,
    pub cyclic: bool,
    /// Zero in the cyclic case.
    pub d_nc: u32,
}

#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct SchurccDecision {
    pub verdict: SchurccVerdict,
    pub method: SchurccMethod,
    pub has_witness: bool,
    /// Failing `psi` for scan witnesses, residue class for oracle witnesses.
    pub witness: u64,
    /// Prime realizing an oracle witness, zero if none was requested.
    pub witness_prime: u64,
}

/// Local data at an unramified odd prime.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct SchurccLocalData {
    pub psi: u64,
    pub f_r: u64,
    pub f: u32,
    pub d: u32,
    pub nu: u32,
    pub beta: u32,
    pub j_prime: u64,
    pub j: u64,
    pub eta: u64,
    pub noncyclic_parity: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> SchurccStatus {
    match e.exit_code() {
        2 => SchurccStatus::PrimeNotInField,
        3 => SchurccStatus::InvariantViolation,
        4 => SchurccStatus::ResourceLimit,
        _ => SchurccStatus::InvalidInput,
    }
}

fn guarded(f: impl FnOnce() -> Result<(), SchurccStatus>) -> SchurccStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SchurccStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic".to_string());
            SchurccStatus::Panic
        }
    }
}

fn lift<T>(r: schurcc::Result<T>) -> Result<T, SchurccStatus> {
    r.map_err(|e| {
        set_error(e.to_string());
        status_of(&e)
    })
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, SchurccStatus> {
    p.as_ref().ok_or_else(|| {
        set_error(format!("{what} is null"));
        SchurccStatus::NullPointer
    })
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), SchurccStatus> {
    if out.is_null() {
        set_error("output pointer is null".to_string());
        return Err(SchurccStatus::NullPointer);
    }
    out.write(value);
    Ok(())
}

fn convert_decision(d: &Decision) -> SchurccDecision {
    let method = match d.method {
        Method::FullScan => SchurccMethod::FullScan,
        Method::RestrictedScan => SchurccMethod::RestrictedScan,
        Method::Noncyclic => SchurccMethod::Noncyclic,
        Method::Oracle => SchurccMethod::Oracle,
        Method::Shortcut(decision::Shortcut::SmallExponent) => SchurccMethod::ShortcutSmallExponent,
        Method::Shortcut(decision::Shortcut::NuDominates) => SchurccMethod::ShortcutNuDominates,
        Method::Shortcut(decision::Shortcut::OutsideSpan) => SchurccMethod::ShortcutOutsideSpan,
    };
    let (witness, witness_prime) = match &d.witness {
        Some(decision::Witness::Psi { profile, .. }) => (Some(profile.psi.value()), 0),
        Some(decision::Witness::Class { report, prime }) => {
            let residue = match report.source {
                local::Source::Class { residue, .. } => residue,
                local::Source::Prime(r) => r,
            };
            (Some(residue), prime.unwrap_or(0))
        }
        _ => (None, 0),
    };
    SchurccDecision {
        verdict: match d.verdict {
            Verdict::Finite => SchurccVerdict::Finite,
            Verdict::Infinite => SchurccVerdict::Infinite,
        },
        method,
        has_witness: witness.is_some(),
        witness: witness.unwrap_or(0),
        witness_prime,
    }
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn schurcc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parses a field from inline `m:g1,g2,...` text or a field file path.
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn schurcc_field_parse(text: *const c_char, out: *mut *mut SchurccField) -> SchurccStatus {
    guarded(|| {
        if text.is_null() {
            set_error("text is null".to_string());
            return Err(SchurccStatus::NullPointer);
        }
        let s = CStr::from_ptr(text).to_str().map_err(|_| {
            set_error("text is not UTF-8".to_string());
            SchurccStatus::InvalidInput
        })?;
        let field = lift(load_field(s))?;
        write_out(out, Box::into_raw(Box::new(SchurccField(field))))
    })
}

/// Fixed field of the subgroup of `(Z/mZ)*` generated by `gens`.
///
/// # Safety
/// `gens` must point to `n_gens` values (or be null when `n_gens` is zero).
#[no_mangle]
pub unsafe extern "C" fn schurcc_field_new(
    m: u64,
    gens: *const u64,
    n_gens: usize,
    out: *mut *mut SchurccField,
) -> SchurccStatus {
    guarded(|| {
        let gens = if n_gens == 0 {
            &[][..]
        } else {
            deref(gens, "gens")?;
            std::slice::from_raw_parts(gens, n_gens)
        };
        let field = lift(schurcc::field::fixed_field(m, gens))?;
        write_out(out, Box::into_raw(Box::new(SchurccField(field))))
    })
}

/// # Safety
/// `field` must come from a `schurcc_field_*` constructor, or be null.
#[no_mangle]
pub unsafe extern "C" fn schurcc_field_free(field: *mut SchurccField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Conductor of the normalized field, zero for a null handle.
///
/// # Safety
/// `field` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn schurcc_field_conductor(field: *const SchurccField) -> u64 {
    field.as_ref().map_or(0, |f| f.0.conductor())
}

/// Degree over Q, zero for a null handle.
///
/// # Safety
/// `field` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn schurcc_field_degree(field: *const SchurccField) -> u64 {
    field.as_ref().map_or(0, |f| f.0.degree())
}

/// # Safety
/// `field` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn schurcc_context_new(
    field: *const SchurccField,
    p: u64,
    mode: SchurccBMode,
    out: *mut *mut SchurccContext,
) -> SchurccStatus {
    guarded(|| {
        let field = deref(field, "field")?;
        let mode = match mode {
            SchurccBMode::Definition => BMode::Definition,
            SchurccBMode::Example => BMode::Example,
        };
        let ctx = lift(build_context(&field.0, p, mode))?;
        write_out(out, Box::into_raw(Box::new(SchurccContext(ctx))))
    })
}

/// # Safety
/// `ctx` must come from `schurcc_context_new`, or be null.
#[no_mangle]
pub unsafe extern "C" fn schurcc_context_free(ctx: *mut SchurccContext) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

/// # Safety
/// `ctx` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn schurcc_context_info(ctx: *const SchurccContext, out: *mut SchurccContextInfo) -> SchurccStatus {
    guarded(|| {
        let c = &deref(ctx, "ctx")?.0;
        let info = SchurccContextInfo {
            conductor: c.m(),
            degree: c.field.degree(),
            p: c.p,
            a: c.a,
            s: c.s,
            b: c.b,
            n_f: c.n_f,
            g_order: c.g.order(),
            c_order: c.c.order(),
            rho: c.rho.value(),
            sigma: c.sigma.value(),
            q: c.q,
            t: c.t,
            cyclic: c.cyclic_case,
            d_nc: c.d_nc.unwrap_or(0),
        };
        write_out(out, info)
    })
}

/// Decides finiteness of the index by the group-theoretic criterion.
///
/// # Safety
/// `ctx` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn schurcc_decide(ctx: *const SchurccContext, out: *mut SchurccDecision) -> SchurccStatus {
    guarded(|| {
        let d = lift(decision::decide(&deref(ctx, "ctx")?.0))?;
        write_out(out, convert_decision(&d))
    })
}

/// Decides by scanning residue classes. `max_classes` zero means the default
/// bound; `realize_bound` nonzero realizes a failing class by a prime.
///
/// # Safety
/// `ctx` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn schurcc_oracle_decide(
    ctx: *const SchurccContext,
    max_classes: u64,
    realize_bound: u64,
    out: *mut SchurccDecision,
) -> SchurccStatus {
    guarded(|| {
        let opts = OracleOptions {
            max_classes: if max_classes == 0 { DEFAULT_CLASS_BOUND } else { max_classes },
            realize_bound: (realize_bound != 0).then_some(realize_bound),
        };
        let d = lift(decision::oracle_decide_with(&deref(ctx, "ctx")?.0, opts))?;
        write_out(out, convert_decision(&d))
    })
}

/// Local data at an odd prime `r` not dividing the conductor or `p`.
///
/// # Safety
/// `ctx` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn schurcc_local_data(ctx: *const SchurccContext, r: u64, out: *mut SchurccLocalData) -> SchurccStatus {
    guarded(|| {
        let rep = lift(local::local_report(&deref(ctx, "ctx")?.0, r))?;
        let data = SchurccLocalData {
            psi: rep.psi.value(),
            f_r: rep.f_r,
            f: rep.f,
            d: rep.d,
            nu: rep.nu,
            beta: rep.beta,
            j_prime: rep.decomposition.j_prime,
            j: rep.decomposition.j,
            eta: rep.decomposition.eta.value(),
            noncyclic_parity: rep.case_tag == CaseTag::NoncyclicParity,
        };
        write_out(out, data)
    })
}

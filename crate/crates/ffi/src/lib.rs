//! C interface to the `roommates` solvers.
//!
//! Profiles and solutions are opaque handles created and destroyed through
//! this interface. Every fallible call returns an [`SrStatus`]; after a
//! failure, [`sr_last_error_message`] describes it. Agents are referred to
//! by their index in the `agents` line of the instance text.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use roommates::blocking::{min_blocking_agents, min_blocking_pairs};
use roommates::cli::format::{parse_instance, serialize_instance};
use roommates::noties::solve_egal_noties;
use roommates::ties::{solve_egal_constant, solve_egal_ties, TiesOptions};
use roommates::{Error, Matching, Profile};

/// Outcome of a call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SrStatus {
    Ok = 0,
    /// The solver finished and found nothing within the bound.
    NotFound = 1,
    /// A null pointer, bad UTF-8, or an index out of range.
    InvalidArgument = 2,
    ParseError = 3,
    DomainError = 4,
    CapacityError = 5,
    /// An internal error; the library state is unchanged.
    Panic = 6,
}

/// A validated preference profile.
pub struct SrProfile {
    profile: Profile,
    names: Vec<CString>,
}

/// A matching returned by a solver, with its objective value.
pub struct SrSolution {
    pairs: Vec<(usize, usize)>,
    value: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

fn fail(status: SrStatus, message: &str) -> SrStatus {
    set_error(message);
    status
}

fn from_error(e: &Error) -> SrStatus {
    let status = match e {
        Error::Parse { .. } => SrStatus::ParseError,
        Error::Domain(_) => SrStatus::DomainError,
        Error::Capacity(_) => SrStatus::CapacityError,
        Error::Invalid(_) => SrStatus::InvalidArgument,
    };
    fail(status, &e.to_string())
}

// Runs `body`, turning a panic into `SrStatus::Panic`.
fn guard(body: impl FnOnce() -> SrStatus) -> SrStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => fail(SrStatus::Panic, "internal error"),
    }
}

/// Message for the most recent failure on this thread, or an empty string.
/// The pointer stays valid until the next failing call on this thread.
#[no_mangle]
pub extern "C" fn sr_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses instance text into a new profile stored in `*out`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer to
/// writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn sr_profile_parse(text: *const c_char, out: *mut *mut SrProfile) -> SrStatus {
    guard(|| {
        if text.is_null() || out.is_null() {
            return fail(SrStatus::InvalidArgument, "null pointer");
        }
        // SAFETY: checked non-null; the caller guarantees NUL termination.
        let Ok(text) = (unsafe { CStr::from_ptr(text) }).to_str() else {
            return fail(SrStatus::InvalidArgument, "instance text is not UTF-8");
        };
        match parse_instance(text) {
            Ok(profile) => {
                let names = profile.names().iter().map(|n| CString::new(n.as_str()).unwrap_or_default()).collect();
                // SAFETY: `out` is non-null and writable per the contract.
                unsafe { *out = Box::into_raw(Box::new(SrProfile { profile, names })) };
                SrStatus::Ok
            }
            Err(e) => from_error(&e),
        }
    })
}

/// Releases a profile. Null is ignored.
///
/// # Safety
/// `profile` must be null or a handle from [`sr_profile_parse`] that has not
/// been freed.
#[no_mangle]
pub unsafe extern "C" fn sr_profile_free(profile: *mut SrProfile) {
    if !profile.is_null() {
        // SAFETY: the handle was created by `Box::into_raw` and is live.
        drop(unsafe { Box::from_raw(profile) });
    }
}

/// Number of agents, or 0 for a null handle.
///
/// # Safety
/// `profile` must be null or a live profile handle.
#[no_mangle]
pub unsafe extern "C" fn sr_profile_agent_count(profile: *const SrProfile) -> usize {
    // SAFETY: null or live per the contract.
    unsafe { profile.as_ref() }.map_or(0, |p| p.profile.n())
}

/// Name of agent `index`, owned by the profile, or null when out of range.
///
/// # Safety
/// `profile` must be null or a live profile handle.
#[no_mangle]
pub unsafe extern "C" fn sr_profile_agent_name(profile: *const SrProfile, index: usize) -> *const c_char {
    // SAFETY: null or live per the contract.
    match unsafe { profile.as_ref() }.and_then(|p| p.names.get(index)) {
        Some(name) => name.as_ptr(),
        None => ptr::null(),
    }
}

/// Canonical instance text; release it with [`sr_string_free`]. Null on a
/// null handle.
///
/// # Safety
/// `profile` must be null or a live profile handle.
#[no_mangle]
pub unsafe extern "C" fn sr_profile_serialize(profile: *const SrProfile) -> *mut c_char {
    // SAFETY: null or live per the contract.
    match unsafe { profile.as_ref() } {
        Some(p) => CString::new(serialize_instance(&p.profile)).map_or(ptr::null_mut(), CString::into_raw),
        None => ptr::null_mut(),
    }
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from [`sr_profile_serialize`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sr_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: created by `CString::into_raw` and still live.
        drop(unsafe { CString::from_raw(s) });
    }
}

// Shared plumbing for the solver entry points.
unsafe fn solve_into(
    profile: *const SrProfile,
    out: *mut *mut SrSolution,
    solver: impl FnOnce(&Profile) -> roommates::Result<Option<(Matching, usize)>>,
) -> SrStatus {
    guard(|| {
        // SAFETY: null or live per the caller's contract.
        let Some(p) = (unsafe { profile.as_ref() }) else {
            return fail(SrStatus::InvalidArgument, "null profile");
        };
        if out.is_null() {
            return fail(SrStatus::InvalidArgument, "null output pointer");
        }
        match solver(&p.profile) {
            Ok(Some((m, value))) => {
                let pairs = m.pairs().iter().map(|q| (q.lo().index(), q.hi().index())).collect();
                // SAFETY: `out` is non-null and writable per the contract.
                unsafe { *out = Box::into_raw(Box::new(SrSolution { pairs, value })) };
                SrStatus::Ok
            }
            Ok(None) => fail(SrStatus::NotFound, "no matching within the bound"),
            Err(e) => from_error(&e),
        }
    })
}

/// Stable matching whose egalitarian cost (unmatched agents pay their list
/// length) is at most `gamma`. The value is the cost.
///
/// # Safety
/// `profile` must be a live profile handle and `out` writable storage for
/// one handle.
#[no_mangle]
pub unsafe extern "C" fn sr_solve_egal(profile: *const SrProfile, gamma: usize, out: *mut *mut SrSolution) -> SrStatus {
    // SAFETY: forwarded contract.
    unsafe {
        solve_into(profile, out, |p| {
            let s = if p.is_tie_free() {
                solve_egal_noties(p, gamma)?
            } else {
                solve_egal_ties(p, gamma, &TiesOptions::default())?
            };
            Ok(s.map(|s| (s.matching, s.cost)))
        })
    }
}

/// Cheapest stable matching when each unmatched agent costs `c`, if its
/// cost is at most `gamma`.
///
/// # Safety
/// As for [`sr_solve_egal`].
#[no_mangle]
pub unsafe extern "C" fn sr_solve_egal_constant(
    profile: *const SrProfile,
    gamma: usize,
    c: usize,
    out: *mut *mut SrSolution,
) -> SrStatus {
    // SAFETY: forwarded contract.
    unsafe {
        solve_into(profile, out, |p| {
            Ok(solve_egal_constant(p, gamma, c, &TiesOptions::default())?.map(|s| (s.matching, s.cost)))
        })
    }
}

/// Matching with the fewest blocking pairs, if at most `max_pairs`. The
/// value is the number of blocking pairs.
///
/// # Safety
/// As for [`sr_solve_egal`].
#[no_mangle]
pub unsafe extern "C" fn sr_solve_min_blocking_pairs(
    profile: *const SrProfile,
    max_pairs: usize,
    out: *mut *mut SrSolution,
) -> SrStatus {
    // SAFETY: forwarded contract.
    unsafe {
        solve_into(profile, out, |p| Ok(min_blocking_pairs(p, max_pairs)?.map(|c| (c.matching, c.pairs.len()))))
    }
}

/// Matching with the fewest blocking agents, if at most `max_agents`. The
/// value is the number of blocking agents.
///
/// # Safety
/// As for [`sr_solve_egal`].
#[no_mangle]
pub unsafe extern "C" fn sr_solve_min_blocking_agents(
    profile: *const SrProfile,
    max_agents: usize,
    out: *mut *mut SrSolution,
) -> SrStatus {
    // SAFETY: forwarded contract.
    unsafe {
        solve_into(profile, out, |p| Ok(min_blocking_agents(p, max_agents)?.map(|c| (c.matching, c.agents.len()))))
    }
}

/// Number of matched pairs, or 0 for a null handle.
///
/// # Safety
/// `solution` must be null or a live solution handle.
#[no_mangle]
pub unsafe extern "C" fn sr_solution_pair_count(solution: *const SrSolution) -> usize {
    // SAFETY: null or live per the contract.
    unsafe { solution.as_ref() }.map_or(0, |s| s.pairs.len())
}

/// Objective value of the solution, or 0 for a null handle.
///
/// # Safety
/// `solution` must be null or a live solution handle.
#[no_mangle]
pub unsafe extern "C" fn sr_solution_value(solution: *const SrSolution) -> usize {
    // SAFETY: null or live per the contract.
    unsafe { solution.as_ref() }.map_or(0, |s| s.value)
}

/// Writes the agent indices of pair `index` to `*a` and `*b` (`*a < *b`).
///
/// # Safety
/// `solution` must be a live solution handle; `a` and `b` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sr_solution_pair(solution: *const SrSolution, index: usize, a: *mut usize, b: *mut usize) -> SrStatus {
    // SAFETY: null or live per the contract.
    let Some(s) = (unsafe { solution.as_ref() }) else {
        return fail(SrStatus::InvalidArgument, "null solution");
    };
    if a.is_null() || b.is_null() {
        return fail(SrStatus::InvalidArgument, "null output pointer");
    }
    let Some(&(x, y)) = s.pairs.get(index) else {
        return fail(SrStatus::InvalidArgument, "pair index out of range");
    };
    // SAFETY: both checked non-null and writable per the contract.
    unsafe {
        *a = x;
        *b = y;
    }
    SrStatus::Ok
}

/// Releases a solution. Null is ignored.
///
/// # Safety
/// `solution` must be null or a live solution handle.
#[no_mangle]
pub unsafe extern "C" fn sr_solution_free(solution: *mut SrSolution) {
    if !solution.is_null() {
        // SAFETY: created by `Box::into_raw` and still live.
        drop(unsafe { Box::from_raw(solution) });
    }
}

//! C ABI for the assignment-game core solver.
//!
//! Instances travel as JSON strings in the same formats the CLI uses; the
//! parsed game lives behind an opaque handle. Every function returns a
//! status code; on failure a thread-local message is available through
//! [`lexicore_last_error_message`]. Strings returned through out-parameters
//! are owned by the caller and must be released with
//! [`lexicore_string_free`].

use lexicore::classify::classify;
use lexicore::game::{AssignmentGame, Imputation};
use lexicore::mechanism::{self, MechanismError, RunOptions};
use lexicore::oracle::{self, OracleError};
use lexicore::profile::Mode;
use lexicore::report;
use lexicore::solutions::{check_core, extreme_imputations};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Result of every API call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum LexicoreStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    /// Malformed JSON or an invalid instance/imputation.
    ParseError = 3,
    /// Instance too large for the brute-force oracle.
    GuardExceeded = 4,
    InternalError = 5,
}

/// Which optimum to compute.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum LexicoreObjective {
    Leximin = 0,
    Leximax = 1,
}

impl From<LexicoreObjective> for Mode {
    fn from(o: LexicoreObjective) -> Mode {
        match o {
            LexicoreObjective::Leximin => Mode::Leximin,
            LexicoreObjective::Leximax => Mode::Leximax,
        }
    }
}

/// Opaque parsed instance.
pub struct LexicoreGame {
    game: AssignmentGame,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap();
    });
}

/// Message for the most recent failure on this thread. Valid until the next
/// failing call; never NULL.
#[no_mangle]
pub extern "C" fn lexicore_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

fn fail(status: LexicoreStatus, message: &str) -> LexicoreStatus {
    set_error(message);
    status
}

fn mechanism_status(e: &MechanismError) -> LexicoreStatus {
    match e {
        MechanismError::NotACoreImputation | MechanismError::DimensionMismatch => {
            LexicoreStatus::ParseError
        }
        _ => LexicoreStatus::InternalError,
    }
}

unsafe fn read_str<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, LexicoreStatus> {
    if ptr.is_null() {
        return Err(fail(
            LexicoreStatus::NullArgument,
            &format!("{} is NULL", what),
        ));
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        fail(
            LexicoreStatus::InvalidUtf8,
            &format!("{} is not UTF-8", what),
        )
    })
}

fn write_out(out: *mut *mut c_char, text: String) -> LexicoreStatus {
    if out.is_null() {
        return fail(LexicoreStatus::NullArgument, "output pointer is NULL");
    }
    match CString::new(text) {
        Ok(s) => {
            unsafe { *out = s.into_raw() };
            LexicoreStatus::Ok
        }
        Err(_) => fail(
            LexicoreStatus::InternalError,
            "output contains an interior NUL byte",
        ),
    }
}

fn guarded(body: impl FnOnce() -> LexicoreStatus) -> LexicoreStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => fail(LexicoreStatus::InternalError, "internal panic"),
    }
}

unsafe fn game_ref<'a>(game: *const LexicoreGame) -> Result<&'a AssignmentGame, LexicoreStatus> {
    if game.is_null() {
        return Err(fail(LexicoreStatus::NullArgument, "game handle is NULL"));
    }
    Ok(&(*game).game)
}

/// Parses an instance from JSON:
/// `{"left": n, "right": m, "edges": [{"u": 0, "v": 1, "w": 10}, ...]}` with
/// weights as integers or "p/q" strings. On success stores a handle in
/// `out_game`; free it with `lexicore_game_free`.
///
/// # Safety
/// `json` must be a valid NUL-terminated string; `out_game` must be a valid
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn lexicore_game_parse(
    json: *const c_char,
    out_game: *mut *mut LexicoreGame,
) -> LexicoreStatus {
    guarded(|| {
        if out_game.is_null() {
            return fail(LexicoreStatus::NullArgument, "out_game is NULL");
        }
        let text = match read_str(json, "instance JSON") {
            Ok(t) => t,
            Err(s) => return s,
        };
        match AssignmentGame::parse(text) {
            Ok(game) => {
                *out_game = Box::into_raw(Box::new(LexicoreGame { game }));
                LexicoreStatus::Ok
            }
            Err(e) => fail(LexicoreStatus::ParseError, &e.to_string()),
        }
    })
}

/// Releases a handle returned by `lexicore_game_parse`. NULL is a no-op.
///
/// # Safety
/// `game` must be NULL or a pointer previously returned by
/// `lexicore_game_parse` that has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn lexicore_game_free(game: *mut LexicoreGame) {
    if !game.is_null() {
        drop(Box::from_raw(game));
    }
}

/// Number of left-side vertices; 0 if the handle is NULL.
///
/// # Safety
/// `game` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lexicore_game_left_size(game: *const LexicoreGame) -> usize {
    game_ref(game).map(|g| g.left_size()).unwrap_or(0)
}

/// Number of right-side vertices; 0 if the handle is NULL.
///
/// # Safety
/// `game` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lexicore_game_right_size(game: *const LexicoreGame) -> usize {
    game_ref(game).map(|g| g.right_size()).unwrap_or(0)
}

/// Number of edges; 0 if the handle is NULL.
///
/// # Safety
/// `game` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lexicore_game_edge_count(game: *const LexicoreGame) -> usize {
    game_ref(game).map(|g| g.edges().len()).unwrap_or(0)
}

/// Canonical byte-stable JSON serialization of the instance.
///
/// # Safety
/// `game` must be a live handle; `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lexicore_game_to_json(
    game: *const LexicoreGame,
    out_json: *mut *mut c_char,
) -> LexicoreStatus {
    guarded(|| {
        let g = match game_ref(game) {
            Ok(g) => g,
            Err(s) => return s,
        };
        write_out(out_json, g.to_json())
    })
}

/// Worth of the game (maximum matching weight) as a decimal or "p/q" string.
///
/// # Safety
/// `game` must be a live handle; `out_worth` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lexicore_worth(
    game: *const LexicoreGame,
    out_worth: *mut *mut c_char,
) -> LexicoreStatus {
    guarded(|| {
        let g = match game_ref(game) {
            Ok(g) => g,
            Err(s) => return s,
        };
        write_out(out_worth, lexicore::total_worth(g).to_string())
    })
}

fn solve_json(game: &AssignmentGame, mode: Mode) -> Result<String, (LexicoreStatus, String)> {
    let (imputation, _) =
        mechanism::run(game, mode).map_err(|e| (mechanism_status(&e), e.to_string()))?;
    let classification = classify(game);
    Ok(report::solve_report(&classification, imputation, mode).to_json())
}

/// Computes the leximin or leximax core imputation. `out_json` receives
/// `{"worth": ..., "imputation": {"u": [...], "v": [...]}, "profile": [...]}`
/// with all numbers as exact strings.
///
/// # Safety
/// `game` must be a live handle; `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lexicore_solve(
    game: *const LexicoreGame,
    objective: LexicoreObjective,
    out_json: *mut *mut c_char,
) -> LexicoreStatus {
    guarded(|| {
        let g = match game_ref(game) {
            Ok(g) => g,
            Err(s) => return s,
        };
        match solve_json(g, objective.into()) {
            Ok(text) => write_out(out_json, text),
            Err((status, msg)) => fail(status, &msg),
        }
    })
}

/// Event log of a run, one JSON object per line. With `snapshots` each line
/// carries the imputation after the event.
///
/// # Safety
/// `game` must be a live handle; `out_jsonl` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lexicore_trace(
    game: *const LexicoreGame,
    objective: LexicoreObjective,
    snapshots: bool,
    out_jsonl: *mut *mut c_char,
) -> LexicoreStatus {
    guarded(|| {
        let g = match game_ref(game) {
            Ok(g) => g,
            Err(s) => return s,
        };
        match mechanism::run_with_options(g, objective.into(), None, RunOptions { snapshots }) {
            Ok((_, trace)) => write_out(out_jsonl, report::trace_to_jsonl(&trace)),
            Err(e) => fail(mechanism_status(&e), &e.to_string()),
        }
    })
}

/// Labels every vertex and edge essential / viable / subpar.
///
/// # Safety
/// `game` must be a live handle; `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lexicore_classify(
    game: *const LexicoreGame,
    out_json: *mut *mut c_char,
) -> LexicoreStatus {
    guarded(|| {
        let g = match game_ref(game) {
            Ok(g) => g,
            Err(s) => return s,
        };
        let classification = classify(g);
        write_out(
            out_json,
            report::ClassifyReport::new(g, &classification).to_json(),
        )
    })
}

/// U-optimal and V-optimal core imputations.
///
/// # Safety
/// `game` must be a live handle; `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lexicore_extremes(
    game: *const LexicoreGame,
    out_json: *mut *mut c_char,
) -> LexicoreStatus {
    guarded(|| {
        let g = match game_ref(game) {
            Ok(g) => g,
            Err(s) => return s,
        };
        let (u_optimal, v_optimal) = extreme_imputations(g);
        let report = report::ExtremesReport {
            u_optimal,
            v_optimal,
        };
        write_out(out_json, report.to_json())
    })
}

/// Checks core membership of an imputation given as
/// `{"u": [...], "v": [...]}`. The report lands in `out_json`; a
/// non-core imputation is still `LEXICORE_STATUS_OK`; inspect `is_core`.
///
/// # Safety
/// `game` must be a live handle; `imputation_json` a valid NUL-terminated
/// string; `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lexicore_check(
    game: *const LexicoreGame,
    imputation_json: *const c_char,
    out_json: *mut *mut c_char,
) -> LexicoreStatus {
    guarded(|| {
        let g = match game_ref(game) {
            Ok(g) => g,
            Err(s) => return s,
        };
        let text = match read_str(imputation_json, "imputation JSON") {
            Ok(t) => t,
            Err(s) => return s,
        };
        let imputation = match Imputation::parse(text) {
            Ok(i) => i,
            Err(e) => return fail(LexicoreStatus::ParseError, &e.to_string()),
        };
        match check_core(g, &imputation) {
            Ok(report) => write_out(out_json, report::check_report_to_json(&report)),
            Err(e) => fail(LexicoreStatus::ParseError, &e.to_string()),
        }
    })
}

/// Brute-force reference solution; fails with `LEXICORE_STATUS_GUARD_EXCEEDED`
/// on instances beyond desk scale.
///
/// # Safety
/// `game` must be a live handle; `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lexicore_oracle_solve(
    game: *const LexicoreGame,
    objective: LexicoreObjective,
    out_json: *mut *mut c_char,
) -> LexicoreStatus {
    guarded(|| {
        let g = match game_ref(game) {
            Ok(g) => g,
            Err(s) => return s,
        };
        let mode: Mode = objective.into();
        let result = match mode {
            Mode::Leximin => oracle::oracle_leximin(g),
            Mode::Leximax => oracle::oracle_leximax(g),
        };
        match result {
            Ok(imputation) => {
                let classification = classify(g);
                write_out(
                    out_json,
                    report::solve_report(&classification, imputation, mode).to_json(),
                )
            }
            Err(e @ OracleError::GuardExceeded(_)) => {
                fail(LexicoreStatus::GuardExceeded, &e.to_string())
            }
            Err(e) => fail(LexicoreStatus::InternalError, &e.to_string()),
        }
    })
}

/// Frees a string returned through any out-parameter. NULL is a no-op.
///
/// # Safety
/// `s` must be NULL or a string returned by this library that has not been
/// freed yet.
#[no_mangle]
pub unsafe extern "C" fn lexicore_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

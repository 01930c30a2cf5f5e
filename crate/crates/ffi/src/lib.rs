//! C ABI over `lee-lattice`.
//!
//! Objects cross the boundary as opaque handles created by `ll_*_new`-style
//! constructors and released with the matching `ll_*_free`. Every fallible
//! call returns an [`LlStatus`]; on failure the message is kept per thread
//! and read back with [`ll_last_error`]. Panics never unwind into C.
//!
//! Strings are NUL-terminated UTF-8. Output strings use the `snprintf`
//! convention: the call writes at most `cap` bytes including the NUL and
//! reports the full length, so a second call with a larger buffer succeeds.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::{ptr, slice};

use lee_lattice::codes::CodeDistance;
use lee_lattice::lattice::DistanceResult;
use lee_lattice::transform::{lambda_w, DiscreteTransform};
use lee_lattice::{
    matrices, sylvester, Budgets, Error, IntMatrix, Lattice, LinearCodeZm, Metric, WeighingMatrix,
};

/// Result of every fallible call. Zero is success.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LlStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidArgument = 2,
    Parse = 3,
    BudgetExceeded = 4,
    Precondition = 5,
    Io = 6,
    Panic = 7,
}

/// Work limits; see [`ll_budgets_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct LlBudgets {
    pub max_order: usize,
    pub coset_budget: u64,
    pub node_budget: u64,
    pub enum_budget: u64,
}

impl From<LlBudgets> for Budgets {
    fn from(b: LlBudgets) -> Self {
        Budgets {
            max_order: b.max_order,
            coset_budget: b.coset_budget,
            node_budget: b.node_budget,
            enum_budget: b.enum_budget,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LlMetric {
    Lee = 0,
    Hamming = 1,
}

/// A distance search outcome. `exact` is set when `lower == upper` was
/// certified; otherwise the search ran out of budget.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct LlDistance {
    pub lower: u64,
    pub upper: u64,
    pub exact: bool,
}

/// A weighing matrix.
pub struct LlMatrix(WeighingMatrix);
/// A full-rank integer lattice in canonical form.
pub struct LlLattice(Lattice);
/// A linear code over Z_m.
pub struct LlCode(LinearCodeZm);
/// The discrete transform of a weighing matrix, with its coset table.
pub struct LlTransform(DiscreteTransform);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> LlStatus {
    match e {
        Error::BudgetExceeded { .. } => LlStatus::BudgetExceeded,
        Error::Parse { .. } => LlStatus::Parse,
        Error::Io(_) => LlStatus::Io,
        Error::Precondition(_) => LlStatus::Precondition,
        _ => LlStatus::InvalidArgument,
    }
}

struct Fail(LlStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(LlStatus::NullArgument, format!("{what} is null"))
}

/// Runs `f`, recording any failure (including a panic) in the thread's error slot.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> LlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            LlStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            LlStatus::Panic
        }
    }
}

unsafe fn text<'a>(s: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Fail(LlStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(h: *const T, what: &str) -> Result<&'a T, Fail> {
    h.as_ref().ok_or_else(|| null(what))
}

unsafe fn input<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts(p, len))
}

unsafe fn output<'a, T>(p: *mut T, len: usize, what: &str) -> Result<&'a mut [T], Fail> {
    if len == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts_mut(p, len))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn set<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = value;
    Ok(())
}

fn check_len(got: usize, expected: usize, what: &str) -> Result<(), Fail> {
    if got != expected {
        return Err(Fail(
            LlStatus::InvalidArgument,
            format!("{what} has length {got}, expected {expected}"),
        ));
    }
    Ok(())
}

/// Copies `s` into `buf` (truncated, NUL-terminated) and returns `s.len()`.
unsafe fn write_str(s: &str, buf: *mut c_char, cap: usize) -> usize {
    if !buf.is_null() && cap > 0 {
        let n = s.len().min(cap - 1);
        ptr::copy_nonoverlapping(s.as_ptr().cast::<c_char>(), buf, n);
        *buf.add(n) = 0;
    }
    s.len()
}

/// Copies the calling thread's last error message into `buf` and returns
/// its length in bytes, excluding the NUL. Empty after a successful call.
///
/// # Safety
/// `buf` is null or points to `cap` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn ll_last_error(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|e| write_str(&e.borrow(), buf, cap))
}

#[no_mangle]
pub extern "C" fn ll_budgets_default() -> LlBudgets {
    let b = Budgets::default();
    LlBudgets {
        max_order: b.max_order,
        coset_budget: b.coset_budget,
        node_budget: b.node_budget,
        enum_budget: b.enum_budget,
    }
}

// ---- matrices ----

/// Builds a named matrix: `sylvester:M`, `paley-i:Q`, `paley-ii:Q`,
/// `conference:Q` or `doubling:<name>`.
///
/// # Safety
/// `name` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ll_matrix_named(
    name: *const c_char,
    max_order: usize,
    out: *mut *mut LlMatrix,
) -> LlStatus {
    guard(|| {
        let w = matrices::named(text(name, "name")?, max_order)?;
        put(out, LlMatrix(w))
    })
}

/// Parses the text format: a header line `n w` then `n` rows of entries.
///
/// # Safety
/// `source` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ll_matrix_parse(
    source: *const c_char,
    out: *mut *mut LlMatrix,
) -> LlStatus {
    guard(|| {
        let w = lee_lattice::io::parse_matrix(text(source, "source")?)?;
        put(out, LlMatrix(w))
    })
}

/// Builds a matrix from `n * n` row-major entries in {-1, 0, 1}.
///
/// # Safety
/// `entries` points to `n * n` readable values; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ll_matrix_from_entries(
    n: usize,
    entries: *const i64,
    out: *mut *mut LlMatrix,
) -> LlStatus {
    guard(|| {
        let data = input(entries, n * n, "entries")?.to_vec();
        let m = IntMatrix::from_vec(n, n, data)?;
        put(out, LlMatrix(WeighingMatrix::new(&m)?))
    })
}

/// # Safety
/// `m` is null or a live matrix handle.
#[no_mangle]
pub unsafe extern "C" fn ll_matrix_order(m: *const LlMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.order())
}

/// # Safety
/// `m` is null or a live matrix handle.
#[no_mangle]
pub unsafe extern "C" fn ll_matrix_weight(m: *const LlMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.weight())
}

/// Copies the `order * order` row-major entries into `buf`.
///
/// # Safety
/// `m` is a live matrix handle; `buf` points to `len` writable values.
#[no_mangle]
pub unsafe extern "C" fn ll_matrix_entries(
    m: *const LlMatrix,
    buf: *mut i8,
    len: usize,
) -> LlStatus {
    guard(|| {
        let m = handle(m, "matrix")?;
        check_len(len, m.0.entries().len(), "buffer")?;
        output(buf, len, "buffer")?.copy_from_slice(m.0.entries());
        Ok(())
    })
}

/// Negates and permutes columns so the first row reads `0...0 1...1`.
///
/// # Safety
/// `m` is a live matrix handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ll_matrix_normal_form(
    m: *const LlMatrix,
    out: *mut *mut LlMatrix,
) -> LlStatus {
    guard(|| {
        let m = handle(m, "matrix")?;
        put(out, LlMatrix(matrices::normal_form(&m.0)))
    })
}

/// # Safety
/// `m` is null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ll_matrix_free(m: *mut LlMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

// ---- lattices ----

/// The lattice `{x : W x = 0 mod w}` of a weighing matrix of weight `w`.
///
/// # Safety
/// `m` is a live matrix handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ll_lattice_of_matrix(
    m: *const LlMatrix,
    out: *mut *mut LlLattice,
) -> LlStatus {
    guard(|| {
        let m = handle(m, "matrix")?;
        put(out, LlLattice(lambda_w(&m.0)?))
    })
}

/// The Sylvester lattice with parameters `m >= j >= 0`.
///
/// # Safety
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ll_lattice_sylvester(
    m: u32,
    j: u32,
    max_order: usize,
    out: *mut *mut LlLattice,
) -> LlStatus {
    guard(|| put(out, LlLattice(sylvester::lambda_mj(m, j, max_order)?)))
}

/// A lattice from `n` basis rows given row-major.
///
/// # Safety
/// `rows` points to `n * n` readable values; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ll_lattice_from_basis(
    n: usize,
    rows: *const i64,
    out: *mut *mut LlLattice,
) -> LlStatus {
    guard(|| {
        let data = input(rows, n * n, "rows")?.to_vec();
        let basis = IntMatrix::from_vec(n, n, data)?;
        put(out, LlLattice(Lattice::canonicalize(&basis)?))
    })
}

/// # Safety
/// `l` is null or a live lattice handle.
#[no_mangle]
pub unsafe extern "C" fn ll_lattice_dimension(l: *const LlLattice) -> usize {
    l.as_ref().map_or(0, |l| l.0.dimension())
}

/// Writes the volume as a decimal string and stores its length in `len`.
///
/// # Safety
/// `l` is a live lattice handle; `buf` is null or has `cap` writable bytes;
/// `len` is writable.
#[no_mangle]
pub unsafe extern "C" fn ll_lattice_volume(
    l: *const LlLattice,
    buf: *mut c_char,
    cap: usize,
    len: *mut usize,
) -> LlStatus {
    guard(|| {
        let l = handle(l, "lattice")?;
        let n = write_str(&l.0.volume().to_string(), buf, cap);
        set(len, n)
    })
}

/// Copies the canonical (row Hermite) basis, row-major, into `buf`.
///
/// # Safety
/// `l` is a live lattice handle; `buf` points to `len` writable values.
#[no_mangle]
pub unsafe extern "C" fn ll_lattice_canonical_basis(
    l: *const LlLattice,
    buf: *mut i64,
    len: usize,
) -> LlStatus {
    guard(|| {
        let l = handle(l, "lattice")?;
        let data = l.0.canonical().as_slice();
        check_len(len, data.len(), "buffer")?;
        output(buf, len, "buffer")?.copy_from_slice(data);
        Ok(())
    })
}

/// # Safety
/// `l` is a live lattice handle; `x` points to `n` readable values;
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ll_lattice_contains(
    l: *const LlLattice,
    x: *const i64,
    n: usize,
    out: *mut bool,
) -> LlStatus {
    guard(|| {
        let l = handle(l, "lattice")?;
        check_len(n, l.0.dimension(), "point")?;
        set(out, l.0.contains(input(x, n, "point")?))
    })
}

/// Minimum Manhattan norm of a nonzero lattice point. When `witness` is
/// non-null it receives a point achieving `upper`.
///
/// # Safety
/// `l` is a live lattice handle; `witness` is null or has `dimension`
/// writable values; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ll_lattice_min_distance(
    l: *const LlLattice,
    node_budget: u64,
    witness: *mut i64,
    out: *mut LlDistance,
) -> LlStatus {
    guard(|| {
        let l = handle(l, "lattice")?;
        let r = l.0.min_manhattan_distance(node_budget);
        if !witness.is_null() {
            output(witness, l.0.dimension(), "witness")?.copy_from_slice(r.witness());
        }
        let (lower, upper) = r.bounds();
        let exact = matches!(r, DistanceResult::Exact { .. });
        set(
            out,
            LlDistance {
                lower,
                upper,
                exact,
            },
        )
    })
}

/// Exact covering radius by breadth-first search over `Z^n / L`.
///
/// # Safety
/// `l` is a live lattice handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ll_lattice_covering_radius(
    l: *const LlLattice,
    coset_budget: u64,
    out: *mut u32,
) -> LlStatus {
    guard(|| {
        let l = handle(l, "lattice")?;
        set(out, l.0.covering_radius(coset_budget)?)
    })
}

/// # Safety
/// `l` is null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ll_lattice_free(l: *mut LlLattice) {
    if !l.is_null() {
        drop(Box::from_raw(l));
    }
}

// ---- codes ----

/// The code over Z_`modulus` spanned by `k` generators of length `n`.
///
/// # Safety
/// `generators` points to `k * n` readable values; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ll_code_from_generators(
    modulus: u64,
    k: usize,
    n: usize,
    generators: *const u64,
    out: *mut *mut LlCode,
) -> LlStatus {
    guard(|| {
        let data = input(generators, k * n, "generators")?;
        let rows = if n == 0 {
            Vec::new()
        } else {
            data.chunks(n).map(<[u64]>::to_vec).collect()
        };
        put(out, LlCode(LinearCodeZm::new(modulus, n, rows)?))
    })
}

/// The code over Z_`modulus` spanned by the rows of a weighing matrix.
///
/// # Safety
/// `m` is a live matrix handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ll_code_of_matrix(
    m: *const LlMatrix,
    modulus: u64,
    out: *mut *mut LlCode,
) -> LlStatus {
    guard(|| {
        let m = handle(m, "matrix")?;
        put(
            out,
            LlCode(LinearCodeZm::from_matrix(&m.0.to_int_matrix(), modulus)?),
        )
    })
}

/// The Sylvester code: the Z_{2^j} reduction of the Sylvester lattice.
///
/// # Safety
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ll_code_sylvester(
    m: u32,
    j: u32,
    max_order: usize,
    out: *mut *mut LlCode,
) -> LlStatus {
    guard(|| put(out, LlCode(sylvester::c_mj(m, j, max_order)?)))
}

/// # Safety
/// `c` is null or a live code handle.
#[no_mangle]
pub unsafe extern "C" fn ll_code_length(c: *const LlCode) -> usize {
    c.as_ref().map_or(0, |c| c.0.length())
}

/// # Safety
/// `c` is null or a live code handle.
#[no_mangle]
pub unsafe extern "C" fn ll_code_modulus(c: *const LlCode) -> u64 {
    c.as_ref().map_or(0, |c| c.0.modulus())
}

/// Number of rows of the Howell form.
///
/// # Safety
/// `c` is null or a live code handle.
#[no_mangle]
pub unsafe extern "C" fn ll_code_rank(c: *const LlCode) -> usize {
    c.as_ref().map_or(0, |c| c.0.rank())
}

/// # Safety
/// `c` is a live code handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ll_code_is_self_dual(c: *const LlCode, out: *mut bool) -> LlStatus {
    guard(|| {
        let c = handle(c, "code")?;
        set(out, c.0.is_self_dual())
    })
}

/// # Safety
/// `c` is a live code handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ll_code_dual(c: *const LlCode, out: *mut *mut LlCode) -> LlStatus {
    guard(|| {
        let c = handle(c, "code")?;
        put(out, LlCode(c.0.dual()))
    })
}

/// Minimum weight of a nonzero codeword. Enumerates when the code has at
/// most `enum_budget` words, otherwise runs the pruned search.
///
/// # Safety
/// `c` is a live code handle; `witness` is null or has `length` writable
/// values; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ll_code_min_distance(
    c: *const LlCode,
    metric: LlMetric,
    budgets: LlBudgets,
    witness: *mut u64,
    out: *mut LlDistance,
) -> LlStatus {
    guard(|| {
        let c = handle(c, "code")?;
        let metric = match metric {
            LlMetric::Lee => Metric::Lee,
            LlMetric::Hamming => Metric::Hamming,
        };
        let r = c.0.min_distance(metric, &budgets.into())?;
        if !witness.is_null() {
            output(witness, c.0.length(), "witness")?.copy_from_slice(r.witness());
        }
        let (lower, upper) = r.bounds();
        let exact = matches!(r, CodeDistance::Exact { .. });
        set(
            out,
            LlDistance {
                lower,
                upper,
                exact,
            },
        )
    })
}

/// # Safety
/// `c` is null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ll_code_free(c: *mut LlCode) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

// ---- discrete transform ----

/// Builds the discrete transform of a symmetric or skew weighing matrix
/// whose weight is a perfect square. Materializes the coset table, so the
/// coset budget applies.
///
/// # Safety
/// `m` is a live matrix handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ll_transform_new(
    m: *const LlMatrix,
    budgets: LlBudgets,
    out: *mut *mut LlTransform,
) -> LlStatus {
    guard(|| {
        let m = handle(m, "matrix")?;
        put(
            out,
            LlTransform(DiscreteTransform::new(&m.0, &budgets.into())?),
        )
    })
}

/// # Safety
/// `t` is null or a live transform handle.
#[no_mangle]
pub unsafe extern "C" fn ll_transform_dimension(t: *const LlTransform) -> usize {
    t.as_ref().map_or(0, |t| t.0.matrix().order())
}

/// Maps `x` to `y`; applying the transform twice returns `x`.
///
/// # Safety
/// `t` is a live transform handle; `x` and `y` each hold `n` values.
#[no_mangle]
pub unsafe extern "C" fn ll_transform_apply(
    t: *const LlTransform,
    x: *const i64,
    n: usize,
    y: *mut i64,
) -> LlStatus {
    guard(|| {
        let t = handle(t, "transform")?;
        check_len(n, t.0.matrix().order(), "point")?;
        let image = t.0.apply(input(x, n, "x")?);
        output(y, n, "y")?.copy_from_slice(&image);
        Ok(())
    })
}

/// # Safety
/// `t` is null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ll_transform_free(t: *mut LlTransform) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

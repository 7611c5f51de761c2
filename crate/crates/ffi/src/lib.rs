//! C ABI over the `qas` library.
//!
//! Every fallible function returns a [`QasStatus`]; on failure a message is
//! kept per thread and can be copied out with [`qas_last_error_message`].
//! Objects are opaque handles, each released by its own `_free` function.
//! Strings go out through caller buffers: `needed` receives the size including
//! the terminating NUL, and `QAS_BUFFER_TOO_SMALL` is returned when `len` is
//! short.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qas::circuit::{self, Architecture, SearchSpace};
use qas::sim::{Hamiltonian, NoiseModel};
use qas::supernet::{InitPolicy, SupernetStore};
use qas::tasks::{classification_space, h2_hamiltonian, vqe_rc_space, vqe_space, VqeTask};
use qas::QasError;

#[repr(C)]
#[allow(non_camel_case_types)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QasStatus {
    QAS_OK = 0,
    QAS_NULL_POINTER = 1,
    QAS_INVALID_ARGUMENT = 2,
    QAS_INDEX = 3,
    QAS_CAPABILITY = 4,
    QAS_NUMERIC = 5,
    QAS_CONFIG = 6,
    QAS_IO = 7,
    QAS_BUFFER_TOO_SMALL = 8,
    QAS_PANIC = 9,
}

/// Depolarizing noise: `p1` after single-qubit gates, `p2` after CNOTs.
/// Ignored unless `enabled` is non-zero.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct QasNoise {
    pub p1: f64,
    pub p2: f64,
    pub enabled: i32,
}

pub struct QasHamiltonian {
    inner: Hamiltonian,
}

pub struct QasSpace {
    inner: SearchSpace,
}

/// A supernet parameter store bound to the space it was created for.
pub struct QasStore {
    inner: SupernetStore,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &QasError) -> QasStatus {
    match e {
        QasError::Index(_) => QasStatus::QAS_INDEX,
        QasError::Argument(_) => QasStatus::QAS_INVALID_ARGUMENT,
        QasError::Capability(_) => QasStatus::QAS_CAPABILITY,
        QasError::Numeric(_) => QasStatus::QAS_NUMERIC,
        QasError::Config(_) | QasError::Json(_) => QasStatus::QAS_CONFIG,
        QasError::Io(_) => QasStatus::QAS_IO,
    }
}

/// Runs `f`, records any error or panic, and converts it to a status.
fn guard<F: FnOnce() -> Result<(), (QasStatus, String)>>(f: F) -> QasStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QasStatus::QAS_OK,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside qas");
            QasStatus::QAS_PANIC
        }
    }
}

fn lift<T>(r: qas::Result<T>) -> Result<T, (QasStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (QasStatus, String) {
    (QasStatus::QAS_NULL_POINTER, format!("{what} is null"))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (QasStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (QasStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (QasStatus::QAS_INVALID_ARGUMENT, format!("{what} is not UTF-8")))
}

unsafe fn slice<'a>(p: *const f64, n: usize, what: &str) -> Result<&'a [f64], (QasStatus, String)> {
    if n == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, n))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), (QasStatus, String)> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

/// Copies `s` plus NUL into `buf` when it fits; always reports the size.
unsafe fn write_str(s: &str, buf: *mut c_char, len: usize, needed: *mut usize) -> Result<(), (QasStatus, String)> {
    let n = s.len() + 1;
    if !needed.is_null() {
        needed.write(n);
    }
    if buf.is_null() || len < n {
        return Err((QasStatus::QAS_BUFFER_TOO_SMALL, format!("need {n} bytes, have {len}")));
    }
    ptr::copy_nonoverlapping(s.as_ptr(), buf as *mut u8, s.len());
    buf.add(s.len()).write(0);
    Ok(())
}

fn noise_of(n: &QasNoise) -> Result<NoiseModel, (QasStatus, String)> {
    if n.enabled == 0 {
        return Ok(NoiseModel::noiseless());
    }
    lift(NoiseModel::depolarizing(n.p1, n.p2))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qas_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Copies the calling thread's last error message into `buf`.
///
/// # Safety
/// `buf` must be writable for `len` bytes (or null); `needed` null or writable.
#[no_mangle]
pub unsafe extern "C" fn qas_last_error_message(buf: *mut c_char, len: usize, needed: *mut usize) -> QasStatus {
    let msg = LAST_ERROR.with(|e| e.borrow().as_ref().map(|c| c.to_string_lossy().into_owned()));
    match write_str(msg.as_deref().unwrap_or(""), buf, len, needed) {
        Ok(()) => QasStatus::QAS_OK,
        Err((s, _)) => s,
    }
}

/// The four-qubit H2 Hamiltonian. Release with [`qas_hamiltonian_free`].
#[no_mangle]
pub extern "C" fn qas_hamiltonian_h2() -> *mut QasHamiltonian {
    Box::into_raw(Box::new(QasHamiltonian { inner: h2_hamiltonian() }))
}

/// # Safety
/// `h` must come from this library and not be used afterwards; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn qas_hamiltonian_free(h: *mut QasHamiltonian) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Smallest eigenvalue by dense diagonalization.
///
/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qas_hamiltonian_exact_energy(h: *const QasHamiltonian, out: *mut f64) -> QasStatus {
    guard(|| {
        let h = deref(h, "hamiltonian")?;
        let e = lift(h.inner.exact_ground_energy())?;
        put(out, e, "out")
    })
}

/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qas_hamiltonian_num_qubits(h: *const QasHamiltonian, out: *mut usize) -> QasStatus {
    guard(|| put(out, deref(h, "hamiltonian")?.inner.n_qubits(), "out"))
}

fn boxed_space(s: SearchSpace) -> *mut QasSpace {
    Box::into_raw(Box::new(QasSpace { inner: s }))
}

/// 3 qubits, `RY` pool, pairs (0,1) (0,2) (1,2), three layers.
#[no_mangle]
pub extern "C" fn qas_space_classification() -> *mut QasSpace {
    boxed_space(classification_space())
}

/// 4 qubits, `RY`/`RZ` pool, CNOT chain, three layers.
#[no_mangle]
pub extern "C" fn qas_space_vqe() -> *mut QasSpace {
    boxed_space(vqe_space())
}

/// 4 qubits, `RY`/`RZ` pool, six directed device pairs, three layers.
#[no_mangle]
pub extern "C" fn qas_space_vqe_rc() -> *mut QasSpace {
    boxed_space(vqe_rc_space())
}

/// Parses a JSON space description.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qas_space_from_json(json: *const c_char, out: *mut *mut QasSpace) -> QasStatus {
    guard(|| {
        let text = c_str(json, "json")?;
        let space: SearchSpace = serde_json::from_str(text)
            .map_err(|e| (QasStatus::QAS_CONFIG, format!("invalid space: {e}")))?;
        lift(space.validate())?;
        put(out, boxed_space(space), "out")
    })
}

/// # Safety
/// `s` must come from this library and not be used afterwards; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn qas_space_free(s: *mut QasSpace) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Number of trainable angles of any subnet.
///
/// # Safety
/// `s` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qas_space_num_params(s: *const QasSpace, out: *mut usize) -> QasStatus {
    guard(|| put(out, deref(s, "space")?.inner.n_params(), "out"))
}

/// Number of subnets; `QAS_NUMERIC` when it does not fit 64 bits.
///
/// # Safety
/// `s` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qas_space_size(s: *const QasSpace, out: *mut u64) -> QasStatus {
    guard(|| {
        let size = deref(s, "space")?.inner.size();
        let v = u64::try_from(&size)
            .map_err(|_| (QasStatus::QAS_NUMERIC, format!("space size {size} exceeds 64 bits")))?;
        put(out, v, "out")
    })
}

/// Writes the text form of a uniformly sampled subnet.
///
/// # Safety
/// `s` must be a live handle; `buf`/`needed` as for [`qas_last_error_message`].
#[no_mangle]
pub unsafe extern "C" fn qas_space_sample(
    s: *const QasSpace,
    seed: u64,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> QasStatus {
    guard(|| {
        let space = &deref(s, "space")?.inner;
        let arch = space.sample_uniform(&mut qas::seeded_rng(seed, 0));
        write_str(&arch.to_text(space), buf, len, needed)
    })
}

/// Parses an architecture and writes back its canonical text form.
///
/// # Safety
/// `s` a live handle, `text` NUL-terminated; `buf`/`needed` as above.
#[no_mangle]
pub unsafe extern "C" fn qas_arch_normalize(
    s: *const QasSpace,
    text: *const c_char,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> QasStatus {
    guard(|| {
        let space = &deref(s, "space")?.inner;
        let arch = lift(Architecture::parse(space, c_str(text, "text")?))?;
        write_str(&arch.to_text(space), buf, len, needed)
    })
}

/// Fresh store with angles uniform in `[0, 2π)`, derived from `seed`.
///
/// # Safety
/// `s` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qas_store_new(s: *const QasSpace, seed: u64, out: *mut *mut QasStore) -> QasStatus {
    guard(|| {
        let space = &deref(s, "space")?.inner;
        let store = SupernetStore::new(space, InitPolicy::default(), seed);
        put(out, Box::into_raw(Box::new(QasStore { inner: store })), "out")
    })
}

/// Loads a store saved by the command-line tool; the space must match.
///
/// # Safety
/// `s` a live handle, `json` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qas_store_from_json(
    s: *const QasSpace,
    json: *const c_char,
    out: *mut *mut QasStore,
) -> QasStatus {
    guard(|| {
        let space = &deref(s, "space")?.inner;
        let store = lift(SupernetStore::from_json(space, c_str(json, "json")?))?;
        put(out, Box::into_raw(Box::new(QasStore { inner: store })), "out")
    })
}

/// # Safety
/// `st` must come from this library and not be used afterwards; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn qas_store_free(st: *mut QasStore) {
    if !st.is_null() {
        drop(Box::from_raw(st));
    }
}

/// Energy `<H>` of subnet `arch` with the store's shared angles.
///
/// # Safety
/// Handles live, `arch` NUL-terminated, `noise` null (noiseless) or valid, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qas_store_evaluate(
    st: *const QasStore,
    arch: *const c_char,
    h: *const QasHamiltonian,
    noise: *const QasNoise,
    out: *mut f64,
) -> QasStatus {
    guard(|| {
        let store = &deref(st, "store")?.inner;
        let h = &deref(h, "hamiltonian")?.inner;
        let noise = match noise.as_ref() {
            Some(n) => noise_of(n)?,
            None => NoiseModel::noiseless(),
        };
        let space = store.space();
        if h.n_qubits() != space.n_qubits {
            return Err((
                QasStatus::QAS_INVALID_ARGUMENT,
                format!("hamiltonian has {} qubits, space {}", h.n_qubits(), space.n_qubits),
            ));
        }
        let arch = lift(Architecture::parse(space, c_str(arch, "arch")?))?;
        let params = lift(store.get_params(&arch))?;
        let task = VqeTask::new(h.clone());
        let e = lift(circuit::evaluate(space, &arch, &params, &task, &noise))?;
        put(out, e, "out")
    })
}

/// Spearman rank correlation with average ranks for ties.
///
/// # Safety
/// `r` and `s` readable for `n` doubles, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qas_spearman(r: *const f64, s: *const f64, n: usize, out: *mut f64) -> QasStatus {
    guard(|| {
        let v = lift(qas::diag::spearman(slice(r, n, "r")?, slice(s, n, "s")?))?;
        put(out, v, "out")
    })
}

/// Kendall's tau-a.
///
/// # Safety
/// `r` and `s` readable for `n` doubles, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qas_kendall(r: *const f64, s: *const f64, n: usize, out: *mut f64) -> QasStatus {
    guard(|| {
        let v = lift(qas::diag::kendall(slice(r, n, "r")?, slice(s, n, "s")?))?;
        put(out, v, "out")
    })
}

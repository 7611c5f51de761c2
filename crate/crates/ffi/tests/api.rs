use std::ffi::{c_char, CStr, CString};
use std::ptr;

use qas_ffi::*;

fn last_error() -> String {
    let mut buf = [0 as c_char; 512];
    unsafe {
        assert_eq!(qas_last_error_message(buf.as_mut_ptr(), buf.len(), ptr::null_mut()), QasStatus::QAS_OK);
        CStr::from_ptr(buf.as_ptr()).to_string_lossy().into_owned()
    }
}

fn text_out(f: impl Fn(*mut c_char, usize, *mut usize) -> QasStatus) -> String {
    let mut needed = 0usize;
    assert_eq!(f(ptr::null_mut(), 0, &mut needed), QasStatus::QAS_BUFFER_TOO_SMALL);
    let mut buf = vec![0 as c_char; needed];
    assert_eq!(f(buf.as_mut_ptr(), buf.len(), &mut needed), QasStatus::QAS_OK);
    unsafe { CStr::from_ptr(buf.as_ptr()).to_string_lossy().into_owned() }
}

#[test]
fn exact_energy_of_h2() {
    let h = qas_hamiltonian_h2();
    let mut e = 0.0;
    let mut n = 0usize;
    unsafe {
        assert_eq!(qas_hamiltonian_exact_energy(h, &mut e), QasStatus::QAS_OK);
        assert_eq!(qas_hamiltonian_num_qubits(h, &mut n), QasStatus::QAS_OK);
        qas_hamiltonian_free(h);
    }
    assert!((e + 1.136).abs() < 0.01, "{e}");
    assert_eq!(n, 4);
}

#[test]
fn space_sizes_and_params() {
    let cases = [(qas_space_classification(), 512u64, 9usize), (qas_space_vqe(), 128u64.pow(3), 12),
        (qas_space_vqe_rc(), 1024u64.pow(3), 12)];
    for (s, size, params) in cases {
        let (mut got, mut p) = (0u64, 0usize);
        unsafe {
            assert_eq!(qas_space_size(s, &mut got), QasStatus::QAS_OK);
            assert_eq!(qas_space_num_params(s, &mut p), QasStatus::QAS_OK);
            qas_space_free(s);
        }
        assert_eq!((got, p), (size, params));
    }
}

#[test]
fn sampled_arch_round_trips() {
    let s = qas_space_vqe();
    for seed in 0..20 {
        let text = text_out(|b, l, n| unsafe { qas_space_sample(s, seed, b, l, n) });
        let c = CString::new(text.clone()).unwrap();
        let back = text_out(|b, l, n| unsafe { qas_arch_normalize(s, c.as_ptr(), b, l, n) });
        assert_eq!(back, text);
    }
    let bad = CString::new("YY:0").unwrap();
    let mut buf = [0 as c_char; 64];
    let st = unsafe { qas_arch_normalize(s, bad.as_ptr(), buf.as_mut_ptr(), buf.len(), ptr::null_mut()) };
    assert_ne!(st, QasStatus::QAS_OK);
    assert!(!last_error().is_empty());
    unsafe { qas_space_free(s) };
}

#[test]
fn store_evaluation_matches_library() {
    use qas::circuit::{evaluate, Architecture};
    use qas::sim::NoiseModel;
    use qas::supernet::{InitPolicy, SupernetStore};
    use qas::tasks::{vqe_space, VqeTask};

    let s = qas_space_vqe();
    let h = qas_hamiltonian_h2();
    let mut store = ptr::null_mut();
    unsafe { assert_eq!(qas_store_new(s, 11, &mut store), QasStatus::QAS_OK) };
    let text = "YYZZ:101|ZZYY:000|YZYZ:010";
    let arch = CString::new(text).unwrap();
    let noise = QasNoise { p1: 0.05, p2: 0.2, enabled: 1 };
    let (mut quiet, mut noisy) = (0.0, 0.0);
    unsafe {
        assert_eq!(qas_store_evaluate(store, arch.as_ptr(), h, ptr::null(), &mut quiet), QasStatus::QAS_OK);
        assert_eq!(qas_store_evaluate(store, arch.as_ptr(), h, &noise, &mut noisy), QasStatus::QAS_OK);
    }

    let space = vqe_space();
    let lib = SupernetStore::new(&space, InitPolicy::default(), 11);
    let a = Architecture::parse(&space, text).unwrap();
    let p = lib.get_params(&a).unwrap();
    let task = VqeTask::h2();
    assert_eq!(quiet, evaluate(&space, &a, &p, &task, &NoiseModel::noiseless()).unwrap());
    assert_eq!(noisy, evaluate(&space, &a, &p, &task, &NoiseModel::benchmark()).unwrap());

    // the JSON form loads to an identical store
    let json = CString::new(lib.to_json().unwrap()).unwrap();
    let mut loaded = ptr::null_mut();
    let mut again = 0.0;
    unsafe {
        assert_eq!(qas_store_from_json(s, json.as_ptr(), &mut loaded), QasStatus::QAS_OK);
        assert_eq!(qas_store_evaluate(loaded, arch.as_ptr(), h, ptr::null(), &mut again), QasStatus::QAS_OK);
        qas_store_free(loaded);
        qas_store_free(store);
        qas_hamiltonian_free(h);
        qas_space_free(s);
    }
    assert_eq!(again, quiet);
}

#[test]
fn errors_are_reported() {
    let mut out = 0.0;
    unsafe {
        assert_eq!(qas_hamiltonian_exact_energy(ptr::null(), &mut out), QasStatus::QAS_NULL_POINTER);
        assert!(last_error().contains("null"));
        let bad = CString::new("{\"n_qubits\": 0}").unwrap();
        let mut s = ptr::null_mut();
        assert_eq!(qas_space_from_json(bad.as_ptr(), &mut s), QasStatus::QAS_CONFIG);
        assert!(s.is_null());
        // classification space with a 4-qubit Hamiltonian
        let cs = qas_space_classification();
        let h = qas_hamiltonian_h2();
        let mut st = ptr::null_mut();
        assert_eq!(qas_store_new(cs, 0, &mut st), QasStatus::QAS_OK);
        let a = CString::new("YYY:000|YYY:000|YYY:000").unwrap();
        assert_eq!(qas_store_evaluate(st, a.as_ptr(), h, ptr::null(), &mut out), QasStatus::QAS_INVALID_ARGUMENT);
        let noise = QasNoise { p1: 2.0, p2: 0.0, enabled: 1 };
        let vs = qas_space_vqe();
        let mut vst = ptr::null_mut();
        assert_eq!(qas_store_new(vs, 0, &mut vst), QasStatus::QAS_OK);
        let va = CString::new("YYYY:000|YYYY:000|YYYY:000").unwrap();
        assert_eq!(qas_store_evaluate(vst, va.as_ptr(), h, &noise, &mut out), QasStatus::QAS_INVALID_ARGUMENT);
        qas_store_free(vst);
        qas_space_free(vs);
        qas_store_free(st);
        qas_hamiltonian_free(h);
        qas_space_free(cs);
        qas_space_free(ptr::null_mut());
    }
}

#[test]
fn rank_correlations() {
    let r = [1.0, 2.0, 3.0, 4.0];
    let s = [1.0, 3.0, 2.0, 4.0];
    let (mut rho, mut tau) = (0.0, 0.0);
    unsafe {
        assert_eq!(qas_spearman(r.as_ptr(), s.as_ptr(), 4, &mut rho), QasStatus::QAS_OK);
        assert_eq!(qas_kendall(r.as_ptr(), s.as_ptr(), 3, &mut tau), QasStatus::QAS_OK);
        assert_eq!(qas_spearman(r.as_ptr(), s.as_ptr(), 1, &mut rho), QasStatus::QAS_INVALID_ARGUMENT);
        assert_eq!(qas_kendall(ptr::null(), s.as_ptr(), 3, &mut tau), QasStatus::QAS_NULL_POINTER);
    }
    assert!((rho - 0.8).abs() < 1e-15);
    assert!((tau - 1.0 / 3.0).abs() < 1e-15);
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(qas_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

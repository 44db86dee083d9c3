use std::ffi::{CStr, CString};
use std::ptr;

use ordistack_ffi::*;

fn last_error() -> String {
    let p = ordistack_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

/// Three well-separated classes on one feature.
fn toy() -> (Vec<f64>, Vec<i64>) {
    let mut x = Vec::new();
    let mut y = Vec::new();
    for class in 0..3i64 {
        for j in 0..20 {
            x.push(class as f64 * 4.0 + j as f64 * 0.05);
            y.push(class + 1);
        }
    }
    (x, y)
}

fn fit(method: OrdistackMethod) -> *mut OrdistackModel {
    let (x, y) = toy();
    let mut model = ptr::null_mut();
    let status = unsafe {
        ordistack_fit(
            x.as_ptr(),
            y.len(),
            1,
            y.as_ptr(),
            method as u32,
            OrdistackLearner::Logistic as u32,
            OrdistackStrategy::EvenSplit as u32,
            OrdistackMode::Full as u32,
            7,
            &mut model,
        )
    };
    assert_eq!(status, OrdistackStatus::Ok);
    assert!(!model.is_null());
    model
}

#[test]
fn fit_predict_and_query() {
    for method in [
        OrdistackMethod::Difference,
        OrdistackMethod::Tree,
        OrdistackMethod::Votes,
        OrdistackMethod::OneVsRest,
    ] {
        let model = fit(method);
        unsafe {
            let mut n = 0usize;
            assert_eq!(ordistack_model_n_classes(model, &mut n), OrdistackStatus::Ok);
            assert_eq!(n, 3);
            assert_eq!(ordistack_model_n_features(model, &mut n), OrdistackStatus::Ok);
            assert_eq!(n, 1);

            let mut label = ptr::null_mut();
            assert_eq!(ordistack_model_class_label(model, 2, &mut label), OrdistackStatus::Ok);
            assert_eq!(CStr::from_ptr(label).to_str().unwrap(), "3");
            ordistack_string_free(label);
            assert_eq!(
                ordistack_model_class_label(model, 3, &mut label),
                OrdistackStatus::InvalidArgument
            );

            let x = [0.1, 4.2, 8.5];
            let mut probs = [0.0; 9];
            assert_eq!(
                ordistack_model_predict_proba(model, x.as_ptr(), 3, 1, probs.as_mut_ptr()),
                OrdistackStatus::Ok
            );
            for row in probs.chunks(3) {
                assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            }
            let mut pred = [9usize; 3];
            assert_eq!(
                ordistack_model_predict(model, x.as_ptr(), 3, 1, pred.as_mut_ptr()),
                OrdistackStatus::Ok
            );
            assert_eq!(pred, [0, 1, 2], "{method:?}");

            // wrong column count
            assert_eq!(
                ordistack_model_predict(model, x.as_ptr(), 1, 3, pred.as_mut_ptr()),
                OrdistackStatus::DataError
            );
            assert!(!last_error().is_empty());
            ordistack_model_free(model);
        }
    }
}

#[test]
fn json_round_trip_and_files() {
    let model = fit(OrdistackMethod::Tree);
    let dir = tempfile::tempdir().unwrap();
    let path = CString::new(dir.path().join("m.json").to_str().unwrap()).unwrap();
    unsafe {
        let mut json = ptr::null_mut();
        assert_eq!(ordistack_model_to_json(model, &mut json), OrdistackStatus::Ok);
        let mut again = ptr::null_mut();
        assert_eq!(ordistack_model_load_json(json, &mut again), OrdistackStatus::Ok);
        let mut json2 = ptr::null_mut();
        assert_eq!(ordistack_model_to_json(again, &mut json2), OrdistackStatus::Ok);
        assert_eq!(CStr::from_ptr(json), CStr::from_ptr(json2));

        assert_eq!(ordistack_model_save(model, path.as_ptr()), OrdistackStatus::Ok);
        let mut loaded = ptr::null_mut();
        assert_eq!(ordistack_model_load(path.as_ptr(), &mut loaded), OrdistackStatus::Ok);
        let x = [2.0];
        let (mut a, mut b) = ([0.0; 3], [0.0; 3]);
        ordistack_model_predict_proba(model, x.as_ptr(), 1, 1, a.as_mut_ptr());
        ordistack_model_predict_proba(loaded, x.as_ptr(), 1, 1, b.as_mut_ptr());
        assert_eq!(a.map(f64::to_bits), b.map(f64::to_bits));

        ordistack_string_free(json);
        ordistack_string_free(json2);
        ordistack_model_free(again);
        ordistack_model_free(loaded);
        ordistack_model_free(model);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut model = ptr::null_mut();
        assert_eq!(ordistack_model_load_json(ptr::null(), &mut model), OrdistackStatus::NullPointer);
        assert!(last_error().contains("json"));

        let bad = CString::new("{\"format\": \"other\"}").unwrap();
        assert_ne!(ordistack_model_load_json(bad.as_ptr(), &mut model), OrdistackStatus::Ok);
        assert!(model.is_null());

        let missing = CString::new("/nonexistent/dir/model.json").unwrap();
        assert_eq!(ordistack_model_load(missing.as_ptr(), &mut model), OrdistackStatus::IoError);

        let mut n = 0usize;
        assert_eq!(ordistack_model_n_classes(ptr::null(), &mut n), OrdistackStatus::NullPointer);

        let (x, y) = toy();
        assert_eq!(
            ordistack_fit(x.as_ptr(), y.len(), 1, y.as_ptr(), 99, 0, 0, 0, 0, &mut model),
            OrdistackStatus::InvalidArgument
        );

        // success clears the previous message
        let p = [0.5];
        let mut out = [0.0; 2];
        assert_eq!(
            ordistack_tree_class_probs(p.as_ptr(), 1, 0, out.as_mut_ptr()),
            OrdistackStatus::Ok
        );
        assert!(ordistack_last_error_message().is_null());

        ordistack_model_free(ptr::null_mut());
        ordistack_string_free(ptr::null_mut());
    }
}

#[test]
fn probability_helpers() {
    unsafe {
        let p = [0.8, 0.5];
        let mut out = [0.0; 3];
        assert_eq!(
            ordistack_tree_class_probs(p.as_ptr(), 2, 0, out.as_mut_ptr()),
            OrdistackStatus::Ok
        );
        for (a, b) in out.iter().zip([0.2, 0.4, 0.4]) {
            assert!((a - b).abs() < 1e-12);
        }

        let p = [0.3, 0.6];
        let mut adj = [0.0; 2];
        assert_eq!(
            ordistack_monotone_adjust(p.as_ptr(), 2, 0, adj.as_mut_ptr()),
            OrdistackStatus::Ok
        );
        assert!(adj[0] >= adj[1]);
        assert_eq!(
            ordistack_difference_class_probs(p.as_ptr(), 2, 0, out.as_mut_ptr()),
            OrdistackStatus::Ok
        );
        assert!((out.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(out.iter().all(|&v| v >= 0.0));

        let bad = [1.5];
        assert_ne!(
            ordistack_monotone_adjust(bad.as_ptr(), 1, 0, adj.as_mut_ptr()),
            OrdistackStatus::Ok
        );
    }
}

#[test]
fn polychoric_of_tables() {
    unsafe {
        let indep: [u64; 4] = [25, 25, 25, 25];
        let mut rho = f64::NAN;
        assert_eq!(ordistack_polychoric(indep.as_ptr(), 2, 2, &mut rho), OrdistackStatus::Ok);
        assert!(rho.abs() < 1e-6);

        let diag: [u64; 4] = [10, 0, 0, 10];
        assert_eq!(ordistack_polychoric(diag.as_ptr(), 2, 2, &mut rho), OrdistackStatus::Ok);
        assert_eq!(rho, 0.999);

        let one_row: [u64; 3] = [4, 5, 6];
        assert_ne!(ordistack_polychoric(one_row.as_ptr(), 1, 3, &mut rho), OrdistackStatus::Ok);
    }
}

#[test]
fn header_compiles_as_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/ordistack.h");
    let Ok(status) = std::process::Command::new("cc")
        .args(["-fsyntax-only", "-x", "c", "-std=c11", "-Wall", "-Werror", header])
        .status()
    else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    assert!(status.success());
}

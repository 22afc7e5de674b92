use std::ffi::CString;

use pyo3::prelude::*;
use pyo3::types::PyModule;

fn with_module<R>(f: impl FnOnce(Python<'_>, &Bound<'_, PyModule>) -> R) -> R {
    Python::attach(|py| {
        let m = PyModule::new(py, "schober").unwrap();
        schober::register(&m).unwrap();
        py.import("sys").unwrap().getattr("modules").unwrap().set_item("schober", &m).unwrap();
        f(py, &m)
    })
}

#[test]
fn smoke_script_runs_against_fresh_build() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../python/smoke_test.py");
    let src = CString::new(std::fs::read_to_string(path).unwrap()).unwrap();
    with_module(|py, _| {
        let script = PyModule::from_code(py, &src, c"smoke_test.py", c"smoke_test").unwrap();
        script.getattr("main").unwrap().call0().unwrap();
    });
}

#[test]
fn errors_become_value_errors() {
    with_module(|py, m| {
        let e = m.getattr("CellSheaf").unwrap().getattr("local_system").unwrap().call1(("0",)).unwrap_err();
        assert!(e.is_instance_of::<pyo3::exceptions::PyValueError>(py));
        let e = m.getattr("LBComplex").unwrap().getattr("from_json").unwrap().call1(("{",)).unwrap_err();
        assert!(e.is_instance_of::<pyo3::exceptions::PyValueError>(py));
    });
}

#[test]
fn rgamma_dict_has_int_keys() {
    with_module(|_, m| {
        let o = m.getattr("LBComplex").unwrap().getattr("line_bundle").unwrap().call1((1, 2)).unwrap();
        let dims: std::collections::BTreeMap<i64, usize> = o.call_method0("rgamma").unwrap().extract().unwrap();
        assert_eq!(dims, [(0, 3)].into());
    });
}

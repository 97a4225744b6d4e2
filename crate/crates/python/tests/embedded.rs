use std::ffi::CString;

use pfractal_py::pfractal_module;
use pyo3::prelude::*;

/// Runs python/smoke_test.py against the module registered in an embedded
/// interpreter, so no separate extension build is needed.
#[test]
fn smoke_script_passes() {
    pyo3::append_to_inittab!(pfractal_module);
    let script = concat!(env!("CARGO_MANIFEST_DIR"), "/../../python/smoke_test.py");
    let code = CString::new(format!("import runpy\nrunpy.run_path({script:?}, run_name='__main__')")).unwrap();
    Python::attach(|py| {
        if let Err(e) = py.run(&code, None, None) {
            e.print(py);
            panic!("smoke script failed");
        }
    });
}

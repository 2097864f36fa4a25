use pyo3::prelude::*;
use pyo3::types::PyDict;

use specrig_py::specrig_module;

#[test]
fn module_runs_in_an_embedded_interpreter() {
    pyo3::append_to_inittab!(specrig_module);
    Python::initialize();
    Python::attach(|py| {
        let globals = PyDict::new(py);
        let code = c"
import specrig
r = specrig.analyze('rank: 2\\npoles: inf\\nmatrix:\\n  0, 1\\n  z, 0\\n')
result = (r.exit_code, r.rigidity, r.euler_char, r.pole('inf').milnor)
";
        py.run(code, Some(&globals), None).unwrap();
        let got: (i32, i64, i64, i64) = globals.get_item("result").unwrap().unwrap().extract().unwrap();
        assert_eq!(got, (0, 2, 2, 4));
    });
}

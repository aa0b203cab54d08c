use pyfrey::pyfrey;
use pyo3::prelude::*;

fn run(code: &std::ffi::CStr) {
    pyo3::append_to_inittab!(pyfrey);
    Python::initialize();
    Python::attach(|py| py.run(code, None, None)).unwrap_or_else(|e| panic!("{e}"));
}

#[test]
fn module_round_trip() {
    run(cr#"
import pyfrey
f = pyfrey.Cubic([1, 0, 0, 1])
assert f.discriminant() == (-27, 0)
assert f.hessian() == [(0, 0), (9, 0), (0, 0)]
assert f.frey_curve(1, 0).a6 == (1, 0)

g = pyfrey.Cubic([2, 1, 0, 1])
big = 512 * 7**29
assert g.audit(512, 512, 2, 29, 7).consistent
assert g.audit(big, big, 686, 29, 7).failures == ["q_not_dividing_z"]

k = pyfrey.Field(-23)
assert k.class_number() == 3
h = pyfrey.Cubic([1, 0, 1, 1], field=-23)
assert len(h.exceptional_set().class_representatives) == 2

try:
    pyfrey.Field(-4)
except pyfrey.FreyError:
    pass
else:
    raise AssertionError("accepted a non-squarefree d")
"#);
}

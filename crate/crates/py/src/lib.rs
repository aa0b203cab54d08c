//! Python bindings. Elements of K are passed as Python ints (rational
//! integers) or `(a, b)` pairs meaning a + b·ω, and returned as `(a, b)`.

use frey_core::cubic::BinaryCubic;
use frey_core::curve::{frey_curve, frey_t, KFraction, WeierstrassCurve};
use frey_core::json::{audit_to_json, sf_to_json, to_pretty};
use frey_core::nf::{factor_rational_prime, AlgInt, Ideal, IdealClassGroup, PrimeIdeal, QuadField};
use frey_core::pipeline::{
    audit_solution, bad_primes, build_sf_with_policy, distinguishing_prime, normalize_pair,
    serre_level_candidates, theorem_hypothesis, tm_search_with, AuditInput, AuditReport,
    ExceptionalSet, HkPolicy, SearchOptions, TMSolution, Verdict, DEFAULT_LEVEL_CAP,
};
use num_bigint::BigInt;
use pyo3::create_exception;
use pyo3::exceptions::{PyTypeError, PyValueError};
use pyo3::prelude::*;

create_exception!(
    pyfrey,
    FreyError,
    PyValueError,
    "Invalid input or failed computation."
);

type Pair = (BigInt, BigInt);
type Hnf = (BigInt, BigInt, BigInt);

fn err(e: frey_core::Error) -> PyErr {
    FreyError::new_err(e.to_string())
}

fn pair(x: &AlgInt) -> Pair {
    (x.a().clone(), x.b().clone())
}

fn hnf(i: &Ideal) -> Hnf {
    let [a, b, c] = i.hnf();
    (a.clone(), b.clone(), c.clone())
}

fn element(k: QuadField, obj: &Bound<'_, PyAny>) -> PyResult<AlgInt> {
    if let Ok(n) = obj.extract::<BigInt>() {
        return Ok(k.int(n));
    }
    if let Ok((a, b)) = obj.extract::<Pair>() {
        return k.elem(a, b).map_err(err);
    }
    Err(PyTypeError::new_err(
        "expected an int or an (a, b) pair of ints",
    ))
}

fn parse_field(d: Option<&Bound<'_, PyAny>>) -> PyResult<QuadField> {
    let Some(d) = d else {
        return Ok(QuadField::rationals());
    };
    if let Ok(s) = d.extract::<String>() {
        return frey_core::json::parse_field_str(&s).map_err(err);
    }
    match d.extract::<i64>()? {
        1 => Ok(QuadField::rationals()),
        d => QuadField::new(d).map_err(err),
    }
}

fn policy(all_classes: bool) -> HkPolicy {
    if all_classes {
        HkPolicy::AllClasses
    } else {
        HkPolicy::NonPrincipal
    }
}

/// Q (`Field()` or `Field("Q")`) or Q(√d) for squarefree d < 0.
#[pyclass(frozen, eq, hash, skip_from_py_object, module = "pyfrey")]
#[derive(Clone, PartialEq, Eq, Hash)]
struct Field {
    k: QuadField,
}

#[pymethods]
impl Field {
    #[new]
    #[pyo3(signature = (d=None))]
    fn new(d: Option<&Bound<'_, PyAny>>) -> PyResult<Self> {
        Ok(Field { k: parse_field(d)? })
    }

    /// The squarefree d, or None for Q.
    #[getter]
    fn d(&self) -> Option<i64> {
        self.k.d()
    }

    #[getter]
    fn disc(&self) -> i64 {
        self.k.disc()
    }

    #[getter]
    fn degree(&self) -> u32 {
        self.k.degree()
    }

    fn class_number(&self) -> PyResult<usize> {
        Ok(IdealClassGroup::new(self.k).map_err(err)?.class_number())
    }

    /// The primes above a rational prime p.
    fn primes_above(&self, p: u64) -> PyResult<Vec<Prime>> {
        if !frey_core::arith::is_prime_u64(p) {
            return Err(FreyError::new_err(format!("{p} is not prime")));
        }
        Ok(factor_rational_prime(self.k, p)
            .into_iter()
            .map(|(q, _)| Prime { q })
            .collect())
    }

    fn __repr__(&self) -> String {
        match self.k.d() {
            Some(d) => format!("Field({d})"),
            None => "Field('Q')".into(),
        }
    }

    fn __str__(&self) -> String {
        self.k.to_string()
    }
}

#[pyclass(frozen, eq, hash, skip_from_py_object, module = "pyfrey")]
#[derive(Clone, PartialEq, Eq, Hash)]
struct Prime {
    q: PrimeIdeal,
}

#[pymethods]
impl Prime {
    /// The rational prime below.
    #[getter]
    fn p(&self) -> u64 {
        self.q.p()
    }

    #[getter]
    fn norm(&self) -> u128 {
        self.q.norm()
    }

    #[getter]
    fn residue_degree(&self) -> u8 {
        self.q.residue_degree()
    }

    #[getter]
    fn ramification_index(&self) -> u32 {
        self.q.ramification_index()
    }

    /// Hermite normal form [n00, n01, n11] of the ideal.
    #[getter]
    fn hnf(&self) -> Hnf {
        hnf(self.q.ideal())
    }

    #[getter]
    fn field(&self) -> Field {
        Field { k: self.q.field() }
    }

    fn valuation(&self, x: &Bound<'_, PyAny>) -> PyResult<u32> {
        self.q.valuation(&element(self.q.field(), x)?).map_err(err)
    }

    fn __repr__(&self) -> String {
        let (a, b, c) = self.hnf();
        format!(
            "Prime(p={}, norm={}, hnf=[{a}, {b}, {c}])",
            self.q.p(),
            self.q.norm()
        )
    }

    fn __str__(&self) -> String {
        self.q.to_string()
    }
}

fn prime_arg(k: QuadField, obj: &Bound<'_, PyAny>) -> PyResult<PrimeIdeal> {
    if let Ok(p) = obj.cast::<Prime>() {
        return Ok(p.get().q.clone());
    }
    let p: u64 = obj.extract()?;
    if !k.is_rationals() || !frey_core::arith::is_prime_u64(p) {
        return Err(FreyError::new_err(format!(
            "{p} does not name a prime ideal of {k}"
        )));
    }
    Ok(factor_rational_prime(k, p).remove(0).0)
}

/// Y² = X³ + a2·X² + a4·X + a6.
#[pyclass(frozen, eq, skip_from_py_object, module = "pyfrey")]
#[derive(Clone, PartialEq, Eq)]
struct Curve {
    e: WeierstrassCurve,
}

#[pymethods]
impl Curve {
    #[new]
    #[pyo3(signature = (a2, a4, a6, field=None))]
    fn new(
        a2: &Bound<'_, PyAny>,
        a4: &Bound<'_, PyAny>,
        a6: &Bound<'_, PyAny>,
        field: Option<&Bound<'_, PyAny>>,
    ) -> PyResult<Self> {
        let k = parse_field(field)?;
        let e = WeierstrassCurve::new(element(k, a2)?, element(k, a4)?, element(k, a6)?)
            .map_err(err)?;
        Ok(Curve { e })
    }

    #[getter]
    fn a2(&self) -> Pair {
        pair(&self.e.a2)
    }

    #[getter]
    fn a4(&self) -> Pair {
        pair(&self.e.a4)
    }

    #[getter]
    fn a6(&self) -> Pair {
        pair(&self.e.a6)
    }

    #[getter]
    fn c4(&self) -> Pair {
        pair(&self.e.invariants().c4)
    }

    #[getter]
    fn c6(&self) -> Pair {
        pair(&self.e.invariants().c6)
    }

    #[getter]
    fn discriminant(&self) -> Pair {
        pair(&self.e.invariants().delta)
    }

    /// j as (numerator, denominator), or None for a singular model.
    #[getter]
    fn j(&self) -> Option<(Pair, BigInt)> {
        self.e.invariants().j.map(|j| (pair(&j.num), j.den))
    }

    /// GOOD, MULTIPLICATIVE, ADDITIVE or UNDETERMINED_SMALL_PRIME.
    fn reduction_type(&self, q: &Bound<'_, PyAny>) -> PyResult<&'static str> {
        let q = prime_arg(self.e.field(), q)?;
        Ok(self.e.reduction_type(&q).map_err(err)?.tag())
    }

    fn point_count(&self, q: &Bound<'_, PyAny>) -> PyResult<u128> {
        let q = prime_arg(self.e.field(), q)?;
        self.e.point_count(&q).map_err(err)
    }

    /// a_q = N(q) + 1 − #E(F_q) at a prime of good reduction.
    fn trace(&self, q: &Bound<'_, PyAny>) -> PyResult<i128> {
        let q = prime_arg(self.e.field(), q)?;
        self.e.trace_a(&q).map_err(err)
    }

    fn __repr__(&self) -> String {
        self.e.to_string()
    }
}

#[pyclass(frozen, name = "ExceptionalSet", module = "pyfrey")]
struct ExceptionalSetPy {
    s: ExceptionalSet,
}

#[pymethods]
impl ExceptionalSetPy {
    /// The finite primes, sorted.
    #[getter]
    fn primes(&self) -> Vec<Prime> {
        self.s
            .finite_primes()
            .iter()
            .map(|q| Prime { q: q.clone() })
            .collect()
    }

    /// (class index, prime) for each class representative added.
    #[getter]
    fn class_representatives(&self) -> Vec<(usize, Prime)> {
        self.s
            .hk_members()
            .iter()
            .map(|m| (m.class, Prime { q: m.prime.clone() }))
            .collect()
    }

    fn __contains__(&self, q: &Bound<'_, PyAny>) -> PyResult<bool> {
        Ok(self.s.contains(&prime_arg(self.s.field(), q)?))
    }

    fn __len__(&self) -> usize {
        self.s.finite_primes().len()
    }

    /// Candidate Serre levels as HNF triples, sorted.
    #[pyo3(signature = (cap=DEFAULT_LEVEL_CAP))]
    fn level_candidates(&self, cap: u128) -> PyResult<Vec<Hnf>> {
        Ok(serre_level_candidates(&self.s, cap)
            .map_err(err)?
            .iter()
            .map(hnf)
            .collect())
    }

    fn to_json(&self) -> String {
        to_pretty(&sf_to_json(&self.s))
    }

    fn __repr__(&self) -> String {
        let names: Vec<String> = self
            .s
            .finite_primes()
            .iter()
            .map(|q| q.to_string())
            .collect();
        format!("ExceptionalSet([{}])", names.join(", "))
    }
}

#[pyclass(frozen, get_all, module = "pyfrey")]
struct Solution {
    x: Pair,
    y: Pair,
    value: Pair,
    support: Vec<Prime>,
}

#[pymethods]
impl Solution {
    fn __repr__(&self) -> String {
        format!(
            "Solution(x={:?}, y={:?}, value={:?})",
            self.x, self.y, self.value
        )
    }
}

impl From<&TMSolution> for Solution {
    fn from(t: &TMSolution) -> Self {
        Solution {
            x: pair(&t.x),
            y: pair(&t.y),
            value: pair(&t.value),
            support: t.support.iter().map(|q| Prime { q: q.clone() }).collect(),
        }
    }
}

#[pyclass(frozen, module = "pyfrey")]
struct Audit {
    r: AuditReport,
}

#[pymethods]
impl Audit {
    /// "CONSISTENT" or "VIOLATION(name, ...)".
    #[getter]
    fn verdict(&self) -> String {
        self.r.verdict.to_string()
    }

    #[getter]
    fn consistent(&self) -> bool {
        self.r.verdict == Verdict::Consistent
    }

    #[getter]
    fn failures(&self) -> Vec<&'static str> {
        self.r.failures()
    }

    #[getter]
    fn j_valuation(&self) -> Option<i64> {
        self.r.j_valuation
    }

    /// (name, expected, actual, pass) for every check.
    #[getter]
    fn checks(&self) -> Vec<(&'static str, String, String, bool)> {
        self.r
            .checks
            .iter()
            .map(|c| (c.name, c.expected.clone(), c.actual.clone(), c.pass))
            .collect()
    }

    fn to_json(&self) -> String {
        to_pretty(&serde_json::Value::Object(audit_to_json(&self.r)))
    }

    fn __repr__(&self) -> String {
        format!("Audit({})", self.r.verdict)
    }
}

#[pyclass(frozen, get_all, module = "pyfrey")]
struct Normalized {
    x: Pair,
    y: Pair,
    gcd: Hnf,
    gcd_class: usize,
    j_preserved: Option<bool>,
}

/// F = a0·x³ + a1·x²y + a2·xy² + a3·y³.
#[pyclass(frozen, eq, skip_from_py_object, module = "pyfrey")]
#[derive(Clone, PartialEq, Eq)]
struct Cubic {
    f: BinaryCubic,
}

impl Cubic {
    fn k(&self) -> QuadField {
        self.f.field()
    }

    fn point(&self, x: &Bound<'_, PyAny>, y: &Bound<'_, PyAny>) -> PyResult<(AlgInt, AlgInt)> {
        Ok((element(self.k(), x)?, element(self.k(), y)?))
    }

    fn sf(&self, class_bound: u64, all_classes: bool) -> PyResult<ExceptionalSet> {
        build_sf_with_policy(&self.f, class_bound, policy(all_classes)).map_err(err)
    }
}

#[pymethods]
impl Cubic {
    #[new]
    #[pyo3(signature = (coeffs, field=None))]
    fn new(coeffs: Vec<Bound<'_, PyAny>>, field: Option<&Bound<'_, PyAny>>) -> PyResult<Self> {
        let k = parse_field(field)?;
        let cs: Vec<AlgInt> = coeffs
            .iter()
            .map(|c| element(k, c))
            .collect::<PyResult<_>>()?;
        let cs: [AlgInt; 4] = cs.try_into().map_err(|v: Vec<AlgInt>| {
            FreyError::new_err(format!("a cubic needs 4 coefficients, got {}", v.len()))
        })?;
        Ok(Cubic {
            f: BinaryCubic::new(cs).map_err(err)?,
        })
    }

    #[getter]
    fn field(&self) -> Field {
        Field { k: self.k() }
    }

    #[getter]
    fn coeffs(&self) -> Vec<Pair> {
        self.f.coeffs().iter().map(pair).collect()
    }

    fn evaluate(&self, x: &Bound<'_, PyAny>, y: &Bound<'_, PyAny>) -> PyResult<Pair> {
        let (x, y) = self.point(x, y)?;
        Ok(pair(&self.f.evaluate(&x, &y)))
    }

    fn discriminant(&self) -> Pair {
        pair(&self.f.discriminant())
    }

    /// Coefficients of the Hessian H.
    fn hessian(&self) -> Vec<Pair> {
        self.f.hessian().coeffs().iter().map(pair).collect()
    }

    /// Coefficients of the cubic covariant G.
    fn covariant_g(&self) -> Vec<Pair> {
        self.f.covariant_g().coeffs().iter().map(pair).collect()
    }

    fn resultant_hf(&self) -> Pair {
        pair(&self.f.resultant_hf())
    }

    /// True iff 4H³ + G² + 27·Disc·F² vanishes identically.
    fn syzygy_holds(&self) -> bool {
        self.f.syzygy_residual().is_zero()
    }

    fn is_irreducible(&self) -> PyResult<bool> {
        self.f.is_irreducible().map_err(err)
    }

    /// Primes above 2, 3 and the discriminant.
    fn bad_primes(&self) -> PyResult<Vec<Prime>> {
        Ok(bad_primes(&self.f)
            .map_err(err)?
            .into_iter()
            .map(|q| Prime { q })
            .collect())
    }

    /// Primes exactly dividing the discriminant and not dividing 2·a0.
    fn hypothesis_primes(&self) -> PyResult<Vec<Prime>> {
        Ok(theorem_hypothesis(&self.f)
            .map_err(err)?
            .into_iter()
            .map(|q| Prime { q })
            .collect())
    }

    #[pyo3(signature = (class_bound=1000, all_classes=false))]
    fn exceptional_set(&self, class_bound: u64, all_classes: bool) -> PyResult<ExceptionalSetPy> {
        Ok(ExceptionalSetPy {
            s: self.sf(class_bound, all_classes)?,
        })
    }

    fn frey_t(&self, x: &Bound<'_, PyAny>, y: &Bound<'_, PyAny>) -> PyResult<Pair> {
        let (x, y) = self.point(x, y)?;
        Ok(pair(&frey_t(&self.f, &x, &y)))
    }

    fn frey_curve(&self, x: &Bound<'_, PyAny>, y: &Bound<'_, PyAny>) -> PyResult<Curve> {
        let (x, y) = self.point(x, y)?;
        Ok(Curve {
            e: frey_curve(&self.f, &x, &y).map_err(err)?,
        })
    }

    /// Orbit representatives (x, y) of height at most `height` with F(x, y)
    /// supported on the exceptional set, in canonical order.
    #[pyo3(signature = (height, class_bound=1000, all_classes=false, workers=1))]
    fn tm_search(
        &self,
        py: Python<'_>,
        height: u64,
        class_bound: u64,
        all_classes: bool,
        workers: usize,
    ) -> PyResult<Vec<Solution>> {
        let s = self.sf(class_bound, all_classes)?;
        let opts = SearchOptions { workers };
        let sols = py
            .detach(|| tm_search_with(&self.f, &s, height, &opts, None, |_| {}))
            .map_err(err)?;
        Ok(sols.iter().map(Solution::from).collect())
    }

    /// Audit a putative solution of F(x0, y0) = z0^l.
    #[pyo3(signature = (x0, y0, z0, l, q, class_bound=1000))]
    fn audit(
        &self,
        x0: &Bound<'_, PyAny>,
        y0: &Bound<'_, PyAny>,
        z0: &Bound<'_, PyAny>,
        l: u64,
        q: &Bound<'_, PyAny>,
        class_bound: u64,
    ) -> PyResult<Audit> {
        let k = self.k();
        let (x0, y0, z0) = (element(k, x0)?, element(k, y0)?, element(k, z0)?);
        let q = prime_arg(k, q)?;
        let s = self.sf(class_bound, false)?;
        let r = audit_solution(&AuditInput {
            f: &self.f,
            x0: &x0,
            y0: &y0,
            z0: &z0,
            l,
            q: &q,
            s: &s,
        })
        .map_err(err)?;
        Ok(Audit { r })
    }

    /// Rescale (x/x_den, y/y_den) to an integral pair whose gcd is (1) or
    /// the class representative in the exceptional set.
    #[pyo3(signature = (x, y, x_den=None, y_den=None, class_bound=1000))]
    fn normalize(
        &self,
        x: &Bound<'_, PyAny>,
        y: &Bound<'_, PyAny>,
        x_den: Option<BigInt>,
        y_den: Option<BigInt>,
        class_bound: u64,
    ) -> PyResult<Normalized> {
        let k = self.k();
        let frac = |n: &Bound<'_, PyAny>, d: Option<BigInt>| -> PyResult<KFraction> {
            let d = k.int(d.unwrap_or_else(|| 1.into()));
            KFraction::new(element(k, n)?, &d).ok_or_else(|| FreyError::new_err("zero denominator"))
        };
        let (x1, y1) = (frac(x, x_den)?, frac(y, y_den)?);
        let group = IdealClassGroup::new(k).map_err(err)?;
        let s = self.sf(class_bound, false)?;
        let n = normalize_pair(&self.f, &x1, &y1, &group, &s).map_err(err)?;
        Ok(Normalized {
            x: pair(&n.x),
            y: pair(&n.y),
            gcd: hnf(&n.gcd),
            gcd_class: n.gcd_class,
            j_preserved: n.j_preserved,
        })
    }

    fn __repr__(&self) -> String {
        format!("Cubic({})", self.f)
    }
}

/// The prime of least norm at which the traces of two curves differ mod p,
/// as (prime, a1, a2), or None when there is none up to `norm_bound`.
/// By default primes above 2 and 3 are skipped.
#[pyfunction]
#[pyo3(signature = (e1, e2, p=2, avoid=None, norm_bound=1000, workers=1))]
fn distinguish(
    py: Python<'_>,
    e1: &Curve,
    e2: &Curve,
    p: u64,
    avoid: Option<Vec<Bound<'_, PyAny>>>,
    norm_bound: u64,
    workers: usize,
) -> PyResult<Option<(Prime, i128, i128)>> {
    let k = e1.e.field();
    let avoid: Vec<PrimeIdeal> = match avoid {
        Some(xs) => xs
            .iter()
            .map(|x| prime_arg(k, x))
            .collect::<PyResult<_>>()?,
        None => [2, 3]
            .iter()
            .flat_map(|&r| factor_rational_prime(k, r))
            .map(|(q, _)| q)
            .collect(),
    };
    let opts = SearchOptions { workers };
    match py.detach(|| distinguishing_prime(&e1.e, &e2.e, p, &avoid, norm_bound, &opts)) {
        Ok(d) => Ok(Some((Prime { q: d.prime }, d.a1, d.a2))),
        Err(frey_core::Error::NotFound(_)) => Ok(None),
        Err(e) => Err(err(e)),
    }
}

#[pymodule]
pub fn pyfrey(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Field>()?;
    m.add_class::<Prime>()?;
    m.add_class::<Cubic>()?;
    m.add_class::<Curve>()?;
    m.add_class::<ExceptionalSetPy>()?;
    m.add_class::<Solution>()?;
    m.add_class::<Audit>()?;
    m.add_class::<Normalized>()?;
    m.add_function(wrap_pyfunction!(distinguish, m)?)?;
    m.add("FreyError", m.py().get_type::<FreyError>())?;
    Ok(())
}

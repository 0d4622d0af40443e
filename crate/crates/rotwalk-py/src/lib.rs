use std::sync::Arc;

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

use rotwalk::discrepancy::{self, DiscrepancyBreakdown};
use rotwalk::exact_reals::{self as er, AngleDescriptor, Elem, Field};
use rotwalk::ostrowski::{self, Numeration};
use rotwalk::walk_renorm as wr;
use rotwalk::{beta_expansion, oracle, Error};

create_exception!(rotwalk_py, RotwalkError, PyException);
create_exception!(rotwalk_py, HorizonError, RotwalkError);

fn err(e: Error) -> PyErr {
    match e {
        Error::Parse(_) | Error::OutOfRange(_) | Error::RationalInput => PyValueError::new_err(e.to_string()),
        Error::ValidityHorizon { .. } | Error::TruncationExceeded { .. } => HorizonError::new_err(e.to_string()),
        _ => RotwalkError::new_err(e.to_string()),
    }
}

/// An exact element u + vα (or a quadratic surd) of the angle's field.
#[pyclass(frozen, skip_from_py_object, name = "Value")]
#[derive(Clone)]
struct PyValue(Elem);

#[pymethods]
impl PyValue {
    fn __str__(&self) -> String {
        self.0.render()
    }

    fn __repr__(&self) -> String {
        format!("Value({})", self.0.render())
    }

    fn __float__(&self) -> f64 {
        self.0.to_f64()
    }

    fn __eq__(&self, other: &PyValue) -> bool {
        self.0.exact_eq(&other.0)
    }

    fn __lt__(&self, other: &PyValue) -> PyResult<bool> {
        self.0.lt(&other.0).map_err(err)
    }

    /// (u, v) as decimal fraction strings when the value is u + vα.
    fn linear(&self) -> Option<(String, String)> {
        self.0.as_linear().map(|(u, v)| (u.to_string(), v.to_string()))
    }
}

#[pyclass(frozen, skip_from_py_object, name = "Angle")]
#[derive(Clone)]
struct PyAngle {
    angle: AngleDescriptor,
    field: Arc<Field>,
}

impl PyAngle {
    fn beta(&self, spec: &str) -> PyResult<Elem> {
        er::parse_beta(spec).and_then(|b| b.to_elem(&self.field)).map_err(err)
    }

    fn opt_beta(&self, spec: Option<&str>) -> PyResult<Option<Elem>> {
        spec.map(|s| self.beta(s)).transpose()
    }
}

#[pymethods]
impl PyAngle {
    /// Parses descriptors such as "golden", "periodic:1,2", "surd:...", "list:1,2,3".
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        let angle = er::parse_angle(spec).map_err(err)?;
        let field = Field::new(&angle);
        Ok(PyAngle { angle, field })
    }

    fn __repr__(&self) -> String {
        format!("Angle({})", self.angle)
    }

    fn __float__(&self) -> f64 {
        self.angle.approx_f64()
    }

    fn quotient(&self, h: usize) -> PyResult<u64> {
        self.angle.quotient(h).map_err(err)
    }

    fn quotients(&self, m: usize) -> PyResult<Vec<u64>> {
        self.angle.quotients(m).map_err(err)
    }

    /// Rows (h, a_h, p_h, q_h) for h ≤ depth; a_0 is reported as 0.
    fn convergents(&self, depth: usize) -> PyResult<Vec<(usize, u64, String, String)>> {
        let t = er::convergent_table(&self.angle, depth).map_err(err)?;
        Ok((0..=depth)
            .map(|h| (h, if h == 0 { 0 } else { t.a(h) }, t.p(h).to_string(), t.q(h).to_string()))
            .collect())
    }

    /// Parses an offset descriptor ("rat:1/3", "surd:...", "fsum:1,3") into an exact value.
    fn value(&self, spec: &str) -> PyResult<PyValue> {
        self.beta(spec).map(PyValue)
    }

    fn validity_horizon(&self) -> Option<u128> {
        self.angle.validity_horizon()
    }
}

#[pyclass(frozen, name = "Walker")]
struct PyWalker {
    angle: PyAngle,
    inner: wr::Walker,
}

#[pymethods]
impl PyWalker {
    #[new]
    #[pyo3(signature = (angle, base = wr::DEFAULT_WALK_BASE))]
    fn new(angle: &PyAngle, base: u128) -> PyResult<Self> {
        let inner = wr::Walker::with_base(&angle.angle, base).map_err(err)?;
        Ok(PyWalker { angle: angle.clone(), inner })
    }

    /// S_n(α, β); β defaults to 0.
    #[pyo3(signature = (n, beta = None))]
    fn walk(&self, n: u128, beta: Option<&str>) -> PyResult<i64> {
        match self.angle.opt_beta(beta)? {
            None => self.inner.walk(n).map_err(err),
            Some(b) => wr::walk_general_with(&self.inner, n, &b).map_err(err),
        }
    }

    /// (max, min) of S_n over 0 ≤ n ≤ r.
    fn extrema(&self, r: u128) -> PyResult<(i64, i64)> {
        let e = self.inner.extrema(r).map_err(err)?;
        Ok((e.max, e.min))
    }
}

/// Exact relative discrepancy with its three-part split.
#[pyclass(frozen, name = "Discrepancy")]
struct PyDiscrepancy(DiscrepancyBreakdown);

#[pymethods]
impl PyDiscrepancy {
    #[getter]
    fn value(&self) -> PyValue {
        PyValue(self.0.value.clone())
    }

    #[getter]
    fn c_part(&self) -> PyValue {
        PyValue(self.0.c_part.clone())
    }

    #[getter]
    fn s_part(&self) -> PyValue {
        PyValue(self.0.s_part.clone())
    }

    #[getter]
    fn b_part(&self) -> PyValue {
        PyValue(self.0.b_part.clone())
    }

    #[getter]
    fn steps(&self) -> usize {
        self.0.path.len()
    }

    fn __repr__(&self) -> String {
        format!("Discrepancy(n={}, value={})", self.0.n, self.0.value.render())
    }
}

#[pyclass(frozen, name = "Evaluator")]
struct PyEvaluator {
    angle: PyAngle,
    inner: discrepancy::Evaluator,
}

#[pymethods]
impl PyEvaluator {
    #[new]
    fn new(angle: &PyAngle) -> PyResult<Self> {
        let inner = discrepancy::Evaluator::new(&angle.angle).map_err(err)?;
        Ok(PyEvaluator { angle: angle.clone(), inner })
    }

    #[pyo3(signature = (n, beta, complemented = false))]
    fn d_rel(&self, n: u128, beta: &str, complemented: bool) -> PyResult<PyDiscrepancy> {
        let b = self.angle.beta(beta)?;
        let d = if complemented { self.inner.d_rel_complemented(n, &b) } else { self.inner.d_rel(n, &b) };
        d.map(PyDiscrepancy).map_err(err)
    }
}

#[pyfunction]
fn to_ostrowski(angle: &PyAngle, r: u128) -> PyResult<Vec<u64>> {
    let num = Numeration::new(&angle.angle, r.max(1)).map_err(err)?;
    num.to_ostrowski(r).map(|rep| rep.coeffs().to_vec()).map_err(err)
}

/// (peak, j, k, R1, R0) for r.
#[pyfunction]
fn decompose(angle: &PyAngle, r: u128) -> PyResult<(u128, u128, u128, u128, u128)> {
    let d = ostrowski::decompose(r, &angle.angle).map_err(err)?;
    Ok((d.peak, d.j, d.k, d.r1, d.r0))
}

#[pyfunction]
fn return_peaks(angle: &PyAngle, r_max: u128) -> PyResult<Vec<u128>> {
    ostrowski::ReturnStructure::new(&angle.angle).and_then(|s| s.peaks_upto(r_max)).map_err(err)
}

/// Digits b_k of the expansion of β, k = 0..depth.
#[pyfunction]
fn beta_digits(angle: &PyAngle, beta: &str, depth: usize) -> PyResult<Vec<u64>> {
    let b = angle.beta(beta)?;
    beta_expansion::expand(&b, &angle.angle, depth).map(|e| e.coeffs().to_vec()).map_err(err)
}

#[pyfunction]
fn d_star(angle: &PyAngle, n: u128) -> PyResult<PyValue> {
    discrepancy::d_star_exact(n, &angle.angle).map(PyValue).map_err(err)
}

#[pyfunction]
fn pinner_bound(angle: &PyAngle, n: u128) -> PyResult<String> {
    discrepancy::pinner_bound(n, &angle.angle).map(|b| b.to_string()).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (angle, n, beta = None))]
fn oracle_walk(angle: &PyAngle, n: u128, beta: Option<&str>) -> PyResult<i64> {
    let b = angle.opt_beta(beta)?;
    oracle::oracle_walk(n, &angle.angle, b.as_ref()).map_err(err)
}

#[pyfunction]
fn oracle_drel(angle: &PyAngle, n: u128, beta: &str) -> PyResult<PyValue> {
    let b = angle.beta(beta)?;
    oracle::oracle_drel(n, &angle.angle, &b).map(PyValue).map_err(err)
}

#[pymodule]
fn rotwalk_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("RotwalkError", m.py().get_type::<RotwalkError>())?;
    m.add("HorizonError", m.py().get_type::<HorizonError>())?;
    m.add_class::<PyValue>()?;
    m.add_class::<PyAngle>()?;
    m.add_class::<PyWalker>()?;
    m.add_class::<PyDiscrepancy>()?;
    m.add_class::<PyEvaluator>()?;
    m.add_function(wrap_pyfunction!(to_ostrowski, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(return_peaks, m)?)?;
    m.add_function(wrap_pyfunction!(beta_digits, m)?)?;
    m.add_function(wrap_pyfunction!(d_star, m)?)?;
    m.add_function(wrap_pyfunction!(pinner_bound, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_walk, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_drel, m)?)?;
    Ok(())
}

//! Python bindings. Rationals cross the boundary as `fractions.Fraction`;
//! anything whose `str()` parses as `a/b` is accepted on the way in.

use pfractal::cyclo_cancel::{self, CancellationInput};
use pfractal::exact_arith::{Rat, UniPoly};
use pfractal::fp_hypersurface::{self as fp, ColengthConfig, FpPoly, ParsedPoly, Var, DEFAULT_BUDGET};
use pfractal::phi_lab::{self, DyadicPoint, PhiFunction};
use pfractal::qp_series;
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyList;
use serde::Serialize;

create_exception!(pfractal, PfractalError, PyValueError);
create_exception!(pfractal, BudgetError, PfractalError);

fn err(e: pfractal::Error) -> PyErr {
    match e {
        pfractal::Error::Budget { .. } => BudgetError::new_err(e.to_string()),
        _ => PfractalError::new_err(e.to_string()),
    }
}

trait OrPy<T> {
    fn py_err(self) -> PyResult<T>;
}

impl<T> OrPy<T> for pfractal::Result<T> {
    fn py_err(self) -> PyResult<T> {
        self.map_err(err)
    }
}

fn rat_of(obj: &Bound<'_, PyAny>) -> PyResult<Rat> {
    obj.str()?.to_string().parse().py_err()
}

fn rats_of(obj: &Bound<'_, PyAny>) -> PyResult<Vec<Rat>> {
    obj.try_iter()?.map(|x| rat_of(&x?)).collect()
}

fn fraction<'py>(py: Python<'py>, r: &Rat) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((r.to_string(),))
}

fn fractions<'py>(py: Python<'py>, rs: &[Rat]) -> PyResult<Bound<'py, PyList>> {
    let items = rs.iter().map(|r| fraction(py, r)).collect::<PyResult<Vec<_>>>()?;
    PyList::new(py, items)
}

/// Plain Python data (dicts, lists, strings) through the JSON form.
fn plain<'py>(py: Python<'py>, value: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PfractalError::new_err(e.to_string()))?;
    py.import("json")?.getattr("loads")?.call1((text,))
}

fn config(budget: Option<u64>) -> ColengthConfig {
    ColengthConfig::with_budget(budget.unwrap_or(DEFAULT_BUDGET))
}

/// A polynomial over `F_p` in the maximal ideal of `F_p[[x_1..x_s]]`.
#[pyclass(frozen, name = "Polynomial", module = "pfractal")]
struct PyPolynomial {
    f: FpPoly,
    vars: Vec<Var>,
}

#[pymethods]
impl PyPolynomial {
    /// `vars` fixes the ambient ring, e.g. `"x,y,z"`; by default the
    /// variables occurring in `text`.
    #[new]
    #[pyo3(signature = (text, p, vars = None))]
    fn new(text: &str, p: u64, vars: Option<&str>) -> PyResult<Self> {
        let parsed = ParsedPoly::parse(text).py_err()?;
        let vars = match vars {
            Some(v) => fp::parse_var_list(v).py_err()?,
            None => parsed.variables(),
        };
        let f = parsed.to_fp_with(p, &vars).py_err()?;
        Ok(PyPolynomial { f, vars })
    }

    #[getter]
    fn p(&self) -> u64 {
        self.f.characteristic()
    }

    #[getter]
    fn nvars(&self) -> usize {
        self.f.nvars()
    }

    #[getter]
    fn vars(&self) -> Vec<String> {
        self.vars.iter().map(Var::to_string).collect()
    }

    /// `dim F_p[x]/(x_i^(p^n), f^a)`.
    #[pyo3(signature = (a, n, budget = None))]
    fn colength(&self, py: Python<'_>, a: u64, n: u32, budget: Option<u64>) -> PyResult<u64> {
        let cfg = config(budget);
        py.detach(|| fp::colength_with(&self.f, a, n, &cfg)).py_err()
    }

    #[pyo3(signature = (n, budget = None))]
    fn hk(&self, py: Python<'_>, n: u32, budget: Option<u64>) -> PyResult<u64> {
        let cfg = config(budget);
        py.detach(|| phi_lab::hk_function_with(&self.f, n, &cfg)).py_err()
    }

    #[pyo3(signature = (n, budget = None))]
    fn fs(&self, py: Python<'_>, n: u32, budget: Option<u64>) -> PyResult<u64> {
        let cfg = config(budget);
        py.detach(|| phi_lab::fs_function_with(&self.f, n, &cfg)).py_err()
    }

    fn __str__(&self) -> String {
        self.f.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Polynomial({:?}, p={})", self.f.to_string(), self.p())
    }
}

/// A function on `{a/p^n} ∩ [0, 1]` with exact values.
#[pyclass(frozen, name = "Phi", module = "pfractal")]
struct PyPhi(PhiFunction);

#[pymethods]
impl PyPhi {
    /// The normalized colength function of a hypersurface.
    #[new]
    #[pyo3(signature = (f, budget = None))]
    fn new(f: &PyPolynomial, budget: Option<u64>) -> PyResult<Self> {
        PhiFunction::hypersurface_with(f.f.clone(), config(budget)).map(PyPhi).py_err()
    }

    #[staticmethod]
    fn constant(p: u64, c: &Bound<'_, PyAny>) -> PyResult<Self> {
        PhiFunction::constant(p, rat_of(c)?).map(PyPhi).py_err()
    }

    #[getter]
    fn p(&self) -> u64 {
        self.0.prime()
    }

    /// Value at a point given as `"3/8"`, `"3/2^3"`, `0` or `1`.
    fn __call__<'py>(&self, py: Python<'py>, t: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
        let t = DyadicPoint::parse(&t.str()?.to_string(), self.0.prime()).py_err()?;
        let v = py.detach(|| self.0.eval(&t)).py_err()?;
        fraction(py, &v)
    }

    fn reflect(&self) -> Self {
        PyPhi(self.0.reflect())
    }

    #[pyo3(signature = (n, b = 0))]
    fn shift(&self, n: u32, b: u64) -> PyResult<Self> {
        self.0.shift(n, b).map(PyPhi).py_err()
    }

    /// `phi + psi - phi psi`.
    fn product_phi(&self, other: &PyPhi) -> PyResult<Self> {
        self.0.product_phi(&other.0).map(PyPhi).py_err()
    }

    fn __add__(&self, other: &PyPhi) -> PyResult<Self> {
        self.0.sum(&other.0).map(PyPhi).py_err()
    }

    fn __mul__(&self, other: &PyPhi) -> PyResult<Self> {
        self.0.product(&other.0).map(PyPhi).py_err()
    }

    /// `e_{s,n} = p^(ns) phi(1/p^n)` for `n = 0..=nmax`.
    fn e_sequence<'py>(&self, py: Python<'py>, s: u32, nmax: u32) -> PyResult<Bound<'py, PyList>> {
        let v = py.detach(|| phi_lab::e_sequence(&self.0, s, nmax)).py_err()?;
        fractions(py, &v)
    }

    /// Weak p-fractal report on `e_{s,n}` as a dict.
    fn report<'py>(&self, py: Python<'py>, s: u32, nmax: usize, max_order: usize) -> PyResult<Bound<'py, PyAny>> {
        let rep = py
            .detach(|| qp_series::weak_pfractal_report(&self.0, s, nmax, max_order))
            .py_err()?;
        plain(py, &rep)
    }

    fn __repr__(&self) -> String {
        self.0.to_string()
    }
}

/// Rational function in canonical form, as a power series at 0.
#[pyclass(frozen, eq, name = "RationalGF", module = "pfractal")]
#[derive(PartialEq)]
struct PyRationalGF(pfractal::exact_arith::RationalGF);

#[pymethods]
impl PyRationalGF {
    /// Coefficients are listed constant term first.
    #[new]
    fn new(num: &Bound<'_, PyAny>, den: &Bound<'_, PyAny>) -> PyResult<Self> {
        let g = pfractal::exact_arith::RationalGF::new(UniPoly::new(rats_of(num)?), UniPoly::new(rats_of(den)?));
        g.map(PyRationalGF).py_err()
    }

    #[getter]
    fn num<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyList>> {
        fractions(py, self.0.num().coeffs())
    }

    #[getter]
    fn den<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyList>> {
        fractions(py, self.0.den().coeffs())
    }

    fn expand<'py>(&self, py: Python<'py>, n: usize) -> PyResult<Bound<'py, PyList>> {
        fractions(py, &self.0.expand(n).py_err()?)
    }

    /// `lim_{z -> 1/p^d} (1 - p^d z) G(z)`.
    fn multiplicity<'py>(&self, py: Python<'py>, d: u32, p: u64) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &qp_series::multiplicity_from_series(&self.0, d, p).py_err()?)
    }

    fn __add__(&self, other: &PyRationalGF) -> Self {
        PyRationalGF(&self.0 + &other.0)
    }

    fn __sub__(&self, other: &PyRationalGF) -> Self {
        PyRationalGF(&self.0 - &other.0)
    }

    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        plain(py, &self.0)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("RationalGF({})", self.0)
    }
}

/// `n -> Σ_j a_j(n) p^(jn)` with periodic rational tables `a_j`.
#[pyclass(frozen, eq, name = "QuasiPolynomial", module = "pfractal")]
#[derive(PartialEq)]
struct PyQuasiPolynomial(qp_series::QuasiPolynomial);

#[pymethods]
impl PyQuasiPolynomial {
    #[new]
    fn new(p: u64, tables: &Bound<'_, PyAny>) -> PyResult<Self> {
        let tables = tables.try_iter()?.map(|t| rats_of(&t?)).collect::<PyResult<Vec<_>>>()?;
        qp_series::QuasiPolynomial::new(p, tables).map(PyQuasiPolynomial).py_err()
    }

    /// Inverse of `series`, for a series whose denominator divides
    /// `Π_j (1 - p^(jm) z^m)`.
    #[staticmethod]
    fn from_series(g: &PyRationalGF, d: usize, m: usize, p: u64) -> PyResult<Self> {
        qp_series::qp_of_series(&g.0, d, m, p).map(PyQuasiPolynomial).py_err()
    }

    #[getter]
    fn p(&self) -> u64 {
        self.0.prime()
    }

    #[getter]
    fn degree(&self) -> usize {
        self.0.degree()
    }

    #[getter]
    fn period(&self) -> usize {
        self.0.period()
    }

    #[getter]
    fn tables<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyList>>> {
        self.0.tables().iter().map(|t| fractions(py, t)).collect()
    }

    fn __call__<'py>(&self, py: Python<'py>, n: usize) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &self.0.eval(n))
    }

    fn series(&self) -> PyRationalGF {
        PyRationalGF(self.0.series())
    }

    /// Mean of the leading table; the multiplicity of the series.
    fn leading_mean<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &self.0.leading_mean())
    }

    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        plain(py, &self.0)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("QuasiPolynomial({})", self.0)
    }
}

/// Fit a quasi-polynomial to a prefix. Returns `(offset, qp, series)`.
#[pyfunction]
#[pyo3(signature = (prefix, p, d, m, max_offset = 0))]
fn fit_quasi_polynomial(
    prefix: &Bound<'_, PyAny>,
    p: u64,
    d: usize,
    m: usize,
    max_offset: usize,
) -> PyResult<(usize, PyQuasiPolynomial, PyRationalGF)> {
    let fit = qp_series::fit_quasi_polynomial(&rats_of(prefix)?, p, d, m, max_offset).py_err()?;
    let series = fit.series();
    Ok((fit.offset, PyQuasiPolynomial(fit.qp), PyRationalGF(series)))
}

/// Recurrence search over a prefix, returned as a report dict.
#[pyfunction]
#[pyo3(signature = (prefix, max_order, max_start = None))]
fn sequence_report<'py>(
    py: Python<'py>,
    prefix: &Bound<'py, PyAny>,
    max_order: usize,
    max_start: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let prefix = rats_of(prefix)?;
    let max_start = match max_start {
        Some(s) => s,
        None => (prefix.len() > 2 * max_order)
            .then(|| prefix.len() - 1 - 2 * max_order)
            .ok_or_else(|| PfractalError::new_err("prefix too short for this max_order"))?,
    };
    plain(py, &qp_series::sequence_report("python", prefix, max_order, max_start).py_err()?)
}

#[pyfunction]
fn rnc_hk<'py>(py: Python<'py>, g: u64, p: u64, n: u32) -> PyResult<Bound<'py, PyAny>> {
    fraction(py, &qp_series::rnc_hk(g, p, n).py_err()?)
}

fn cancellation_input(p: u64, d: u32, ad: &Bound<'_, PyAny>, a0: &Bound<'_, PyAny>) -> PyResult<CancellationInput> {
    CancellationInput::new(p, d, rat_of(ad)?, rats_of(a0)?).py_err()
}

/// Numerator, denominator and dividing cyclotomics for `a_d p^(dn) + a_0(n)`.
#[pyfunction]
fn cancellation_analyze<'py>(
    py: Python<'py>,
    p: u64,
    d: u32,
    ad: &Bound<'py, PyAny>,
    a0: &Bound<'py, PyAny>,
) -> PyResult<Bound<'py, PyAny>> {
    let rep = cyclo_cancel::cancellation_analyze(&cancellation_input(p, d, ad, a0)?).py_err()?;
    plain(py, &rep)
}

#[pyfunction]
fn check_pd_not_root(p: u64, d: u32, ad: &Bound<'_, PyAny>, a0: &Bound<'_, PyAny>) -> PyResult<bool> {
    Ok(cyclo_cancel::check_pd_not_root(&cancellation_input(p, d, ad, a0)?))
}

#[pyfunction]
fn sm_dimension(m: usize, p: u64, d: u32) -> PyResult<usize> {
    cyclo_cancel::sm_dimension(m, p, d).py_err()
}

#[pyfunction]
fn vl_sum_dimension(m: usize) -> PyResult<usize> {
    cyclo_cancel::vl_sum_dimension(m).py_err()
}

#[pyfunction]
fn question_check<'py>(py: Python<'py>, m: usize, p: u64, d: u32) -> PyResult<Bound<'py, PyAny>> {
    plain(py, &cyclo_cancel::question_check(m, p, d).py_err()?)
}

#[pymodule]
#[pyo3(name = "pfractal")]
pub fn pfractal_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("PfractalError", m.py().get_type::<PfractalError>())?;
    m.add("BudgetError", m.py().get_type::<BudgetError>())?;
    m.add_class::<PyPolynomial>()?;
    m.add_class::<PyPhi>()?;
    m.add_class::<PyRationalGF>()?;
    m.add_class::<PyQuasiPolynomial>()?;
    m.add_function(wrap_pyfunction!(fit_quasi_polynomial, m)?)?;
    m.add_function(wrap_pyfunction!(sequence_report, m)?)?;
    m.add_function(wrap_pyfunction!(rnc_hk, m)?)?;
    m.add_function(wrap_pyfunction!(cancellation_analyze, m)?)?;
    m.add_function(wrap_pyfunction!(check_pd_not_root, m)?)?;
    m.add_function(wrap_pyfunction!(sm_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(vl_sum_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(question_check, m)?)?;
    Ok(())
}

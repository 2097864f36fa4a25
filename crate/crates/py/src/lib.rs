//! Python bindings: problems, rational functions and analysis reports.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use specrig::exact::{Point, RatFn};
use specrig::io::{self, render_text, run_analysis, PoleBlock, ProblemSpec, ReportDocument};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_point(s: &str) -> PyResult<Point> {
    io::parse_pole(s.trim(), 1, 1).map_err(value_error)
}

/// A rational function of one variable with rational coefficients.
#[pyclass(name = "RationalFunction", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyRatFn {
    inner: RatFn,
    variable: String,
}

#[pymethods]
impl PyRatFn {
    #[new]
    #[pyo3(signature = (expr, variable = "z"))]
    fn new(expr: &str, variable: &str) -> PyResult<Self> {
        let inner = io::parse_expr(expr, variable).map_err(value_error)?;
        Ok(PyRatFn {
            inner,
            variable: variable.to_string(),
        })
    }

    /// Order of vanishing at a point ("inf" or a rational); None for zero.
    fn valuation(&self, point: &str) -> PyResult<Option<i64>> {
        Ok(self.inner.valuation(&parse_point(point)?))
    }

    fn is_polynomial(&self) -> bool {
        self.inner.is_polynomial()
    }

    fn __str__(&self) -> String {
        self.inner.display_in(&self.variable)
    }

    fn __repr__(&self) -> String {
        format!("RationalFunction('{}')", self.__str__())
    }
}

/// A parsed problem file.
#[pyclass(name = "Problem", skip_from_py_object)]
#[derive(Clone)]
pub struct PyProblem {
    inner: ProblemSpec,
}

#[pymethods]
impl PyProblem {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        io::parse_problem(text)
            .map(|inner| PyProblem { inner })
            .map_err(value_error)
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank
    }

    #[getter]
    fn variable(&self) -> String {
        self.inner.variable.clone()
    }

    #[getter]
    fn poles(&self) -> Vec<String> {
        self.inner.poles.iter().map(|p| p.to_string()).collect()
    }

    #[getter]
    fn matrix(&self) -> Vec<Vec<PyRatFn>> {
        (0..self.inner.rank)
            .map(|i| {
                self.inner
                    .matrix
                    .row(i)
                    .iter()
                    .map(|e| PyRatFn {
                        inner: e.clone(),
                        variable: self.inner.variable.clone(),
                    })
                    .collect()
            })
            .collect()
    }

    #[getter]
    fn get_check_reduction(&self) -> bool {
        self.inner.flags.check_reduction
    }

    #[setter]
    fn set_check_reduction(&mut self, v: bool) {
        self.inner.flags.check_reduction = v;
    }

    #[getter]
    fn get_assume_irreducible_curve(&self) -> bool {
        self.inner.flags.assume_irreducible_curve
    }

    #[setter]
    fn set_assume_irreducible_curve(&mut self, v: bool) {
        self.inner.flags.assume_irreducible_curve = v;
    }

    #[getter]
    fn get_assert_irreducible_connection(&self) -> bool {
        self.inner.flags.assert_irreducible_connection
    }

    #[setter]
    fn set_assert_irreducible_connection(&mut self, v: bool) {
        self.inner.flags.assert_irreducible_connection = v;
    }

    #[getter]
    fn get_truncation(&self) -> Option<usize> {
        self.inner.flags.truncation
    }

    #[setter]
    fn set_truncation(&mut self, v: Option<usize>) {
        self.inner.flags.truncation = v;
    }

    /// Canonical problem text.
    fn render(&self) -> String {
        self.inner.render()
    }

    fn analyze(&self) -> PyReport {
        PyReport {
            inner: run_analysis(&self.inner),
        }
    }

    fn __repr__(&self) -> String {
        format!("Problem(rank={}, poles={:?})", self.inner.rank, self.poles())
    }
}

/// Invariants of one pole.
#[pyclass(name = "PoleInvariants", frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
pub struct PyPole {
    pole: String,
    pole_order: i64,
    mode: String,
    m: usize,
    irr: i64,
    irr_end: i64,
    delta_end: i64,
    milnor: i64,
    milnor_oracle: i64,
    delta: i64,
    r_c: usize,
    inf_intersection: i64,
    checks_pass: bool,
}

impl From<&PoleBlock> for PyPole {
    fn from(b: &PoleBlock) -> Self {
        let g = b.germ.as_ref();
        let c = &b.checks;
        PyPole {
            pole: b.pole.clone(),
            pole_order: b.pole_order,
            mode: b.mode.clone(),
            m: b.m,
            irr: b.irr,
            irr_end: b.irr_end,
            delta_end: b.delta_end,
            milnor: g.map_or(0, |g| g.milnor),
            milnor_oracle: g.map_or(0, |g| g.milnor_oracle),
            delta: g.map_or(0, |g| g.delta),
            r_c: g.map_or(0, |g| g.r_c),
            inf_intersection: g.map_or(0, |g| g.inf_intersection),
            checks_pass: c.milnor_ok != Some(false)
                && c.delta_identity_ok
                && c.oracle_agrees != Some(false)
                && c.disc_identity_ok
                && c.irr_end_agrees
                && c.reduction_agrees != Some(false),
        }
    }
}

#[pymethods]
impl PyPole {
    fn __repr__(&self) -> String {
        format!(
            "PoleInvariants(pole={}, irr={}, irr_end={}, delta_end={}, milnor={}, delta={})",
            self.pole, self.irr, self.irr_end, self.delta_end, self.milnor, self.delta
        )
    }
}

/// The report document of one analysis.
#[pyclass(name = "Report", frozen)]
pub struct PyReport {
    inner: ReportDocument,
}

#[pymethods]
impl PyReport {
    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        ReportDocument::from_json(s)
            .map(|inner| PyReport { inner })
            .map_err(value_error)
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn to_text(&self) -> String {
        render_text(&self.inner)
    }

    #[getter]
    fn exit_code(&self) -> i32 {
        self.inner.exit_code
    }

    #[getter]
    fn schema(&self) -> String {
        self.inner.schema.clone()
    }

    #[getter]
    fn poles(&self) -> Vec<PyPole> {
        self.inner.poles.iter().map(PyPole::from).collect()
    }

    /// Block of a pole given as "inf", "0", "1/2", ...
    fn pole(&self, name: &str) -> PyResult<Option<PyPole>> {
        let key = io::point_str(&parse_point(name)?);
        Ok(self.inner.pole(&key).map(PyPole::from))
    }

    #[getter]
    fn rigidity(&self) -> Option<i64> {
        self.inner.global.as_ref().map(|g| g.rigidity)
    }

    #[getter]
    fn euler_char(&self) -> Option<i64> {
        self.inner.global.as_ref().map(|g| g.euler_char)
    }

    #[getter]
    fn arithmetic_genus(&self) -> Option<i64> {
        self.inner.global.as_ref().map(|g| g.arithmetic_genus)
    }

    #[getter]
    fn main_theorem(&self) -> Option<String> {
        self.inner.global.as_ref().map(|g| g.main_theorem.status.clone())
    }

    #[getter]
    fn smoothness(&self) -> Option<String> {
        self.inner.global.as_ref().map(|g| g.smoothness.status.clone())
    }

    #[getter]
    fn irreducibility(&self) -> Option<String> {
        self.inner.global.as_ref().map(|g| g.irreducibility.status.clone())
    }

    #[getter]
    fn warnings(&self) -> Vec<String> {
        self.inner.warnings.clone()
    }

    /// (pole or None, kind, message) for every analysis error.
    #[getter]
    fn diagnostics(&self) -> Vec<(Option<String>, String, String)> {
        self.inner
            .diagnostics
            .iter()
            .map(|d| (d.pole.clone(), d.kind.clone(), d.message.clone()))
            .collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "Report(poles={}, rigidity={:?}, exit_code={})",
            self.inner.poles.len(),
            self.rigidity(),
            self.inner.exit_code
        )
    }
}

#[pyfunction]
fn parse_problem(text: &str) -> PyResult<PyProblem> {
    PyProblem::new(text)
}

/// Analyzes problem text and returns the report.
#[pyfunction]
#[pyo3(signature = (text, check_reduction = false))]
fn analyze(text: &str, check_reduction: bool) -> PyResult<PyReport> {
    let mut p = PyProblem::new(text)?;
    p.inner.flags.check_reduction |= check_reduction;
    Ok(p.analyze())
}

#[pymodule]
#[pyo3(name = "specrig")]
pub fn specrig_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyRatFn>()?;
    m.add_class::<PyProblem>()?;
    m.add_class::<PyPole>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(parse_problem, m)?)?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add("SCHEMA_VERSION", io::SCHEMA_VERSION)?;
    Ok(())
}

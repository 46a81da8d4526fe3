//! Python bindings: `import boxball_py`.

use std::collections::BTreeMap;

use ::boxball::carrier::{energy_profile, transfer as carrier_transfer, Capacity};
use ::boxball::corpus::CorpusSpec;
use ::boxball::matching::{match_stack, stack_permutation as stack_word};
use ::boxball::poset::{poset_of_seq, poset_of_word};
use ::boxball::rsk;
use ::boxball::state::{evolve_tts, is_asymptotic, solitons, BoxBallState};
use ::boxball::verify::{corrupted_r_step, run_suite, run_suite_on, SuiteConfig, SuiteReport};
use ::boxball::walkpath::{evolve_reflect as reflect, to_walk, Walk};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn value_err(e: ::boxball::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A finite configuration of balls on the integer line.
#[pyclass(name = "BoxBallState", frozen, eq, hash, from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PyState(BoxBallState);

#[pymethods]
impl PyState {
    /// `BoxBallState("10011011@2")` or `BoxBallState("10011011", offset=2)`.
    #[new]
    #[pyo3(signature = (text, offset = None))]
    fn new(text: &str, offset: Option<i64>) -> PyResult<Self> {
        let p = match offset {
            Some(off) => BoxBallState::parse(text, off),
            None => text.parse(),
        };
        p.map(Self).map_err(value_err)
    }

    #[staticmethod]
    fn from_positions(positions: Vec<i64>) -> Self {
        Self(BoxBallState::from_positions(&positions))
    }

    #[getter]
    fn offset(&self) -> i64 {
        self.0.offset()
    }

    #[getter]
    fn cells(&self) -> Vec<u8> {
        self.0.cells().to_vec()
    }

    #[getter]
    fn text(&self) -> String {
        self.0.to_string()
    }

    fn ball_count(&self) -> usize {
        self.0.ball_count()
    }

    fn ball_positions(&self) -> Vec<i64> {
        self.0.ball_positions()
    }

    /// One step of the ball-moving rule, or `steps` of them.
    #[pyo3(signature = (steps = 1))]
    fn evolve(&self, steps: usize) -> Self {
        let mut p = self.0.clone();
        for _ in 0..steps {
            p = evolve_tts(&p);
        }
        Self(p)
    }

    /// Soliton lengths from left to right.
    fn solitons(&self) -> Vec<usize> {
        solitons(&self.0).lengths()
    }

    #[pyo3(signature = (threshold = None))]
    fn is_asymptotic(&self, threshold: Option<usize>) -> bool {
        is_asymptotic(&self.0, threshold.unwrap_or(self.0.ball_count()))
    }

    fn render(&self, lo: i64, hi: i64) -> String {
        self.0.render_range(lo, hi)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("BoxBallState('{}')", self.0)
    }
}

#[pyfunction]
fn stack_permutation(state: &PyState) -> Vec<usize> {
    stack_word(&match_stack(&state.0)).word
}

#[pyfunction]
fn depth_histogram(state: &PyState) -> Vec<usize> {
    match_stack(&state.0).depth_histogram()
}

#[pyfunction]
fn p_symbol(word: Vec<usize>) -> Vec<Vec<usize>> {
    rsk::p_symbol(&word).rows().to_vec()
}

#[pyfunction]
fn shape(word: Vec<usize>) -> Vec<usize> {
    rsk::p_symbol(&word).shape().parts().to_vec()
}

/// `(I_1..I_n, D_1..D_n)` of the poset of a word, or of a state's pairs.
#[pyfunction]
fn greene(py: Python<'_>, obj: &Bound<'_, PyAny>) -> PyResult<(Vec<usize>, Vec<usize>)> {
    let poset = match obj.cast::<PyState>() {
        Ok(s) => poset_of_seq(&match_stack(&s.get().0)),
        Err(_) => poset_of_word(&obj.extract::<Vec<usize>>()?),
    };
    let g = py.detach(|| poset.greene()).map_err(value_err)?;
    Ok((g.increasing, g.decreasing))
}

/// `{l: E_l}` for `l = 1..=lmax`.
#[pyfunction]
#[pyo3(signature = (state, lmax = None))]
fn energies(state: &PyState, lmax: Option<usize>) -> BTreeMap<usize, usize> {
    energy_profile(&state.0, lmax.unwrap_or(state.0.ball_count())).values
}

/// One carrier sweep: `(new state, energy, energy sites)`. `capacity=None` is unbounded.
#[pyfunction]
#[pyo3(signature = (state, capacity = None))]
fn transfer(state: &PyState, capacity: Option<usize>) -> PyResult<(PyState, usize, Vec<i64>)> {
    let cap = match capacity {
        Some(0) => return Err(PyValueError::new_err("capacity must be at least 1")),
        Some(l) => Capacity::Finite(l),
        None => Capacity::Unbounded,
    };
    let t = carrier_transfer(&state.0, cap);
    Ok((PyState(t.state), t.energy, t.sites))
}

/// The lattice walk as a `"U R ..."` string.
#[pyfunction]
fn walk(state: &PyState) -> String {
    to_walk(&match_stack(&state.0)).to_string()
}

/// One step of the walk-reflection dynamics, read back as a state.
#[pyfunction]
fn evolve_reflect(state: &PyState) -> PyState {
    let w: Walk = reflect(&to_walk(&match_stack(&state.0)));
    PyState(::boxball::walkpath::walk_to_state(&w))
}

/// Runs the verification suite; returns the report as a JSON string.
#[pyfunction]
#[pyo3(signature = (seed = 42, count = 500, steps = 20, state = None, corrupt_r_step = false))]
fn verify(
    py: Python<'_>,
    seed: u64,
    count: usize,
    steps: usize,
    state: Option<PyState>,
    corrupt_r_step: bool,
) -> PyResult<(bool, String)> {
    let mut cfg = SuiteConfig { steps, ..SuiteConfig::default() };
    if corrupt_r_step {
        cfg.rule = corrupted_r_step;
    }
    let report: SuiteReport = py.detach(|| match state {
        Some(p) => run_suite_on(&CorpusSpec { count: 1, ..CorpusSpec::default() }, &[p.0], &[], &cfg),
        None => run_suite(&CorpusSpec { seed, count, ..CorpusSpec::default() }, &cfg),
    });
    let json = serde_json::to_string(&report).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok((report.passed(), json))
}

#[pymodule]
fn boxball_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyState>()?;
    m.add_function(wrap_pyfunction!(stack_permutation, m)?)?;
    m.add_function(wrap_pyfunction!(depth_histogram, m)?)?;
    m.add_function(wrap_pyfunction!(p_symbol, m)?)?;
    m.add_function(wrap_pyfunction!(shape, m)?)?;
    m.add_function(wrap_pyfunction!(greene, m)?)?;
    m.add_function(wrap_pyfunction!(energies, m)?)?;
    m.add_function(wrap_pyfunction!(transfer, m)?)?;
    m.add_function(wrap_pyfunction!(walk, m)?)?;
    m.add_function(wrap_pyfunction!(evolve_reflect, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}

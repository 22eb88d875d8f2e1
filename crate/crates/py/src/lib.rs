//! Python bindings: patterns, the two engines, Formula-Pair instances and the
//! reduction generators.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use homre_core::fast::{fast_solve, FastConfig, FastError};
use homre_core::forge::{self, ReductionType};
use homre_core::formula::{self, FormulaPairInstance};
use homre_core::ov;
use homre_core::{Nfa, Problem, Symbol};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn problem(name: &str) -> PyResult<Problem> {
    name.parse().map_err(err)
}

/// A parsed pattern.
#[pyclass(frozen)]
struct Pattern {
    inner: homre_core::Pattern,
}

#[pymethods]
impl Pattern {
    #[new]
    fn new(src: &str) -> PyResult<Self> {
        Ok(Pattern { inner: homre_core::Pattern::parse(src).map_err(err)? })
    }

    fn size(&self) -> usize {
        self.inner.size()
    }

    fn depth(&self) -> usize {
        self.inner.depth()
    }

    /// `(homogeneous, type, depth)`.
    fn classify(&self) -> (bool, String, usize) {
        let c = homre_core::classify(&self.inner);
        (c.homogeneous, c.type_string.to_string(), c.depth)
    }

    /// Type after applying the simplification rules for `problem`.
    fn simplified_type(&self, problem: &str) -> PyResult<String> {
        let c = homre_core::classify(&self.inner);
        Ok(homre_core::simplify_type(&c.type_string, self::problem(problem)?).to_string())
    }

    fn __str__(&self) -> String {
        self.inner.render()
    }

    fn __repr__(&self) -> String {
        format!("Pattern({:?})", self.inner.render())
    }
}

fn chars(s: &str) -> Vec<Symbol> {
    s.chars().collect()
}

/// Baseline NFA verdict.
#[pyfunction]
#[pyo3(signature = (text, pattern, problem = "matching"))]
fn oracle(text: &str, pattern: &Pattern, problem: &str) -> PyResult<bool> {
    let nfa = Nfa::compile(&pattern.inner);
    let t = chars(text);
    Ok(match self::problem(problem)? {
        Problem::Matching => nfa.matches(&t),
        Problem::Membership => nfa.accepts(&t),
    })
}

/// `(answer, engine)`; falls back to the baseline for unsupported types.
#[pyfunction]
#[pyo3(signature = (text, pattern, problem = "matching", seed = 1, threshold_f = None))]
fn solve(
    text: &str,
    pattern: &Pattern,
    problem: &str,
    seed: u64,
    threshold_f: Option<usize>,
) -> PyResult<(bool, String)> {
    let prob = self::problem(problem)?;
    let cfg = FastConfig { threshold_f, seed, ..FastConfig::default() };
    let t = chars(text);
    match fast_solve(&t, &pattern.inner, prob, &cfg) {
        Ok(out) => Ok((out.answer, out.engine)),
        Err(FastError::UnsupportedType(_)) => Ok((oracle(text, pattern, problem)?, "baseline".into())),
        Err(e) => Err(err(e)),
    }
}

/// For each vector of `a`, whether some vector of `b` is orthogonal to it.
#[pyfunction]
fn batch_ov(a: Vec<Vec<bool>>, b: Vec<Vec<bool>>) -> PyResult<Vec<bool>> {
    let pack = |v: &[Vec<bool>]| v.iter().map(|x| ov::BitVec::from_bools(x)).collect::<Vec<_>>();
    ov::batch_ov(&pack(&a), &pack(&b)).map_err(err)
}

/// A Formula-Pair instance: a monotone formula and two lists of half-assignments.
#[pyclass(frozen)]
struct Instance {
    inner: FormulaPairInstance,
}

#[pymethods]
impl Instance {
    #[new]
    fn new(formula: &str, a: Vec<Vec<bool>>, b: Vec<Vec<bool>>) -> PyResult<Self> {
        let f = formula::MonotoneFormula::parse(formula).map_err(err)?;
        Ok(Instance { inner: FormulaPairInstance::new(f, a, b).map_err(err)? })
    }

    #[staticmethod]
    fn random(s: usize, depth: usize, n: usize, m: usize, seed: u64) -> PyResult<Self> {
        Ok(Instance { inner: formula::random_instance(s, depth, n, m, seed).map_err(err)? })
    }

    #[staticmethod]
    fn parse(src: &str) -> PyResult<Self> {
        Ok(Instance { inner: FormulaPairInstance::parse(src).map_err(err)? })
    }

    fn render(&self) -> String {
        self.inner.render()
    }

    #[getter]
    fn formula(&self) -> String {
        self.inner.formula.render()
    }

    /// First satisfying pair, 1-based, or `None`.
    fn brute_force(&self) -> Option<(usize, usize)> {
        formula::brute_force_pair(&self.inner)
    }

    /// `(text, pattern, meta)` for reduction type `ty` (`cpc`, `coc`, `cs`, `cpo`, `cop`, `opoc`).
    #[pyo3(signature = (ty, problem = "matching"))]
    fn reduce(&self, ty: &str, problem: &str) -> PyResult<(String, Pattern, String)> {
        let ty: ReductionType = ty.parse().map_err(err)?;
        let ri = forge::build(&self.inner, ty, self::problem(problem)?).map_err(err)?;
        Ok((ri.text.iter().collect(), Pattern { inner: ri.pattern.clone() }, ri.meta.render()))
    }

    /// `(ok, report)` from rebuilding and checking the reduction against brute force.
    #[pyo3(signature = (ty, problem = "matching"))]
    fn verify(&self, ty: &str, problem: &str) -> PyResult<(bool, String)> {
        let ty: ReductionType = ty.parse().map_err(err)?;
        let ri = forge::build(&self.inner, ty, self::problem(problem)?).map_err(err)?;
        let report = forge::verify_reduction(&ri, &self.inner);
        Ok((report.ok(), report.to_string()))
    }
}

#[pymodule]
fn homre(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Pattern>()?;
    m.add_class::<Instance>()?;
    m.add_function(wrap_pyfunction!(oracle, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(batch_ov, m)?)?;
    Ok(())
}

//! Python bindings: matroids, weights, certificates and the verification
//! entry points. Structured results come back as plain dicts.

use gr38_core::driver::{self, BatchOptions, InputMode};
use gr38_core::known;
use gr38_core::matroid::subsets::{label, parse_label, ElementSet};
use gr38_core::matroid::{classify_template, Matroid, MatroidJson, Permutation, TemplateKind};
use gr38_core::schubert::{verify_qsp_algebra, DEFAULT_POINTS, DEFAULT_SEED};
use gr38_core::subdivision::Weight;
use gr38_core::verify::{self, Certificate, VerifyOptions};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use std::collections::HashMap;
use std::path::PathBuf;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn runtime_err(e: impl std::fmt::Display) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, v: &impl serde::Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).map_err(runtime_err)?;
    py.import("json")?.call_method1("loads", (text,))
}

fn sets(labels: &[String]) -> PyResult<Vec<ElementSet>> {
    labels
        .iter()
        .map(|l| parse_label(l).ok_or_else(|| value_err(format!("bad subset label {l:?}"))))
        .collect()
}

#[pyclass(name = "Matroid", module = "gr38", frozen, eq, hash, from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyMatroid(Matroid);

#[pymethods]
impl PyMatroid {
    /// Give either `bases` or `nonbases` as labels like "126"; with neither
    /// the matroid is uniform.
    #[new]
    #[pyo3(signature = (n, r, *, bases=None, nonbases=None))]
    fn new(n: usize, r: usize, bases: Option<Vec<String>>, nonbases: Option<Vec<String>>) -> PyResult<Self> {
        let m = match (bases, nonbases) {
            (Some(_), Some(_)) => return Err(value_err("give bases or nonbases, not both")),
            (Some(b), None) => Matroid::from_bases(n, r, &sets(&b)?),
            (None, Some(nb)) => Matroid::from_nonbases(n, r, &sets(&nb)?),
            (None, None) => Matroid::from_nonbases(n, r, &[]),
        };
        m.map(Self).map_err(value_err)
    }

    #[staticmethod]
    fn special() -> Self {
        Self(known::qsp())
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let j: MatroidJson = serde_json::from_str(text).map_err(value_err)?;
        Matroid::from_json(&j).map(Self).map_err(value_err)
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.0.to_json()).expect("matroid serializes")
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn rank(&self) -> usize {
        self.0.rank()
    }

    fn bases(&self) -> Vec<String> {
        self.0.bases().map(label).collect()
    }

    fn nonbases(&self) -> Vec<String> {
        self.0.nonbases().map(label).collect()
    }

    fn is_basis(&self, subset: &str) -> PyResult<bool> {
        Ok(self.0.is_basis(sets(&[subset.to_string()])?[0]))
    }

    fn is_connected(&self) -> bool {
        self.0.is_connected()
    }

    /// Template description such as "U(1,2,6,34578)", or None.
    fn template(&self) -> Option<String> {
        let t = classify_template(&self.0);
        (t.kind != TemplateKind::None).then(|| t.describe())
    }

    /// Thin Schubert cell dimension and number of components, or None when
    /// no rule certifies it.
    fn thin_schubert_dim(&self) -> PyResult<Option<(i64, usize)>> {
        let d = gr38_core::schubert::dim_thin_schubert(&self.0).map_err(runtime_err)?;
        Ok(d.dimension.map(|k| (k as i64, d.components)))
    }

    fn permuted(&self, images: Vec<u8>) -> PyResult<Self> {
        let sigma = Permutation::new(images).map_err(value_err)?;
        Ok(Self(self.0.permuted(&sigma)))
    }

    fn __repr__(&self) -> String {
        let desc = self.template().unwrap_or_else(|| format!("{} bases", self.0.num_bases()));
        format!("Matroid(n={}, r={}, {desc})", self.0.n(), self.0.rank())
    }
}

#[pyclass(name = "Weight", module = "gr38", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq)]
struct PyWeight(Weight);

#[pymethods]
impl PyWeight {
    /// Values keyed by basis label; missing bases get 0. Values are ints or
    /// rational strings like "-3/2".
    #[new]
    #[pyo3(signature = (n, r, values=None, ambient=None))]
    fn new(n: usize, r: usize, values: Option<HashMap<String, Bound<'_, PyAny>>>, ambient: Option<PyMatroid>) -> PyResult<Self> {
        let amb = match ambient {
            Some(m) if m.0.n() != n || m.0.rank() != r => return Err(value_err("ambient has the wrong shape")),
            Some(m) => m.0,
            None => Matroid::from_nonbases(n, r, &[]).map_err(value_err)?,
        };
        let mut entries = Vec::new();
        for (l, v) in values.unwrap_or_default() {
            let set = sets(&[l])?[0];
            let value = v.str()?.to_string();
            entries.push(gr38_core::subdivision::Entry {
                basis: gr38_core::matroid::subsets::elements(set).map(|e| e + 1).collect(),
                value,
            });
        }
        let j = gr38_core::subdivision::WeightJson {
            n,
            r,
            ambient: (!amb.is_uniform()).then(|| amb.to_json()),
            entries,
        };
        Weight::from_json(&j).map(Self).map_err(value_err)
    }

    /// Built-in weights: "special", "tree", "mantis", "six_fin".
    #[staticmethod]
    fn example(name: &str) -> PyResult<Self> {
        Ok(Self(match name {
            "special" => known::w_sp(),
            "tree" => known::tree_example(),
            "mantis" => known::mantis_example(),
            "six_fin" => known::six_fin_example(),
            _ => return Err(value_err(format!("unknown example {name:?}"))),
        }))
    }

    /// Valuations of the maximal minors of the one-parameter degeneration
    /// of the special realization.
    #[staticmethod]
    fn from_degeneration() -> PyResult<Self> {
        verify::plucker_valuations(&verify::a_t()).map(Self).map_err(runtime_err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        serde_json::from_str(text).map(Self).map_err(value_err)
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.0).expect("weight serializes")
    }

    #[getter]
    fn ambient(&self) -> PyMatroid {
        PyMatroid(self.0.ambient().clone())
    }

    /// Basis label to value, as rational strings.
    fn values(&self) -> Vec<(String, String)> {
        self.0
            .bases()
            .into_iter()
            .zip(self.0.values())
            .map(|(b, v)| (label(b), gr38_core::rational::format_rational(v)))
            .collect()
    }

    fn projected(&self) -> Self {
        Self(self.0.project_lineality())
    }

    fn canonical(&self) -> Self {
        Self(driver::canonical_rep(&self.0))
    }

    fn content_hash(&self) -> String {
        driver::content_hash(&driver::canonical_rep(&self.0))
    }

    fn permuted(&self, images: Vec<u8>) -> PyResult<Self> {
        let sigma = Permutation::new(images).map_err(value_err)?;
        Ok(Self(self.0.permuted(&sigma)))
    }

    fn __add__(&self, other: &Self) -> PyResult<Self> {
        if self.0.ambient() != other.0.ambient() {
            return Err(value_err("weights live on different matroids"));
        }
        Ok(Self(self.0.add(&other.0)))
    }

    fn __repr__(&self) -> String {
        let nonzero = self.0.values().iter().filter(|v| !num_traits::Zero::is_zero(*v)).count();
        format!("Weight(n={}, r={}, {nonzero} nonzero)", self.0.ambient().n(), self.0.ambient().rank())
    }
}

#[pyclass(name = "Certificate", module = "gr38", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyCertificate(Certificate);

#[pymethods]
impl PyCertificate {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        serde_json::from_str(text).map(Self).map_err(value_err)
    }

    fn to_json(&self) -> String {
        self.0.to_json_string()
    }

    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.0)
    }

    #[getter]
    fn group(&self) -> String {
        self.0.group.clone()
    }

    #[getter]
    fn label(&self) -> Option<String> {
        self.0.label.map(|l| l.to_string())
    }

    #[getter]
    fn verified(&self) -> bool {
        self.0.verified
    }

    #[getter]
    fn smooth(&self) -> bool {
        self.0.smooth
    }

    #[getter]
    fn components(&self) -> usize {
        self.0.components
    }

    #[getter]
    fn dimension(&self) -> Option<i64> {
        self.0.dimension
    }

    #[getter]
    fn failure(&self) -> Option<String> {
        self.0.failure.clone()
    }

    #[getter]
    fn weight(&self) -> PyWeight {
        PyWeight(self.0.weight.clone())
    }

    /// Evidence steps as dicts.
    fn evidence<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.0.evidence)
    }

    /// Re-sum the evidence; raises ValueError on any mismatch.
    fn audit(&self) -> PyResult<i64> {
        verify::dimension_audit(&self.0).map_err(value_err)
    }

    /// Replay every recorded elimination; returns how many were replayed.
    #[pyo3(signature = (points=DEFAULT_POINTS, seed=DEFAULT_SEED))]
    fn replay(&self, py: Python<'_>, points: usize, seed: u64) -> PyResult<usize> {
        let c = self.0.clone();
        py.detach(move || verify::replay_presentations(&c, points, seed))
            .map(|r| r.len())
            .map_err(value_err)
    }

    fn __repr__(&self) -> String {
        let py_bool = |b: bool| if b { "True" } else { "False" };
        let dim = self.0.dimension.map_or_else(|| "None".to_string(), |d| d.to_string());
        format!(
            "Certificate(group={:?}, verified={}, components={}, dimension={dim})",
            self.0.group,
            py_bool(self.0.verified),
            self.0.components
        )
    }
}

/// Group label such as "G5" or "G6/H0".
#[pyfunction]
fn classify(w: &PyWeight) -> PyResult<String> {
    verify::classify(&w.0).map(|l| l.to_string()).map_err(runtime_err)
}

#[pyfunction]
fn is_special(w: &PyWeight) -> bool {
    verify::detect_csp(&w.0)
}

#[pyfunction(name = "verify")]
#[pyo3(signature = (w, seed=DEFAULT_SEED, points=DEFAULT_POINTS))]
fn verify_weight(py: Python<'_>, w: &PyWeight, seed: u64, points: usize) -> PyCertificate {
    let w = w.0.clone();
    let opts = VerifyOptions { points, seed };
    PyCertificate(py.detach(move || verify::verify_with(&w, &opts)))
}

#[pyfunction]
fn subdivision<'py>(py: Python<'py>, w: &PyWeight) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &driver::subdivision_report(&w.0).map_err(runtime_err)?)
}

#[pyfunction]
fn tight_span<'py>(py: Python<'py>, w: &PyWeight) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &driver::tight_span_report(&w.0).map_err(runtime_err)?)
}

#[pyfunction]
fn qsp_check<'py>(py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &verify_qsp_algebra())
}

/// Verify a JSON-lines file of cones; returns the run summary as a dict.
#[pyfunction]
#[pyo3(signature = (path, out=None, jobs=None, all_cones=false, seed=DEFAULT_SEED))]
fn run_batch<'py>(
    py: Python<'py>,
    path: PathBuf,
    out: Option<PathBuf>,
    jobs: Option<usize>,
    all_cones: bool,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let opts = BatchOptions {
        mode: if all_cones { InputMode::AllCones } else { InputMode::Orbits },
        jobs,
        out,
        verify: VerifyOptions {
            points: DEFAULT_POINTS,
            seed,
        },
    };
    let summary = py.detach(|| driver::run_batch(&path, &opts)).map_err(value_err)?;
    to_py(py, &summary)
}

/// The `gr38` Python module.
#[pymodule]
pub fn gr38(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMatroid>()?;
    m.add_class::<PyWeight>()?;
    m.add_class::<PyCertificate>()?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(is_special, m)?)?;
    m.add_function(wrap_pyfunction!(verify_weight, m)?)?;
    m.add_function(wrap_pyfunction!(subdivision, m)?)?;
    m.add_function(wrap_pyfunction!(tight_span, m)?)?;
    m.add_function(wrap_pyfunction!(qsp_check, m)?)?;
    m.add_function(wrap_pyfunction!(run_batch, m)?)?;
    Ok(())
}

//! Python bindings: intrinsic volumes, Radon probabilities, point
//! configurations and Monte Carlo estimates.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use radon_core::export::{lattice_to_dot, lattice_to_json};
use radon_core::geometry::{self as geo, fixtures};
use radon_core::gfun::GEvaluator;
use radon_core::montecarlo::{self as mc, Estimate as CoreEstimate, SimConfig};
use radon_core::partition::Partition as CorePartition;
use radon_core::tables::{self, TableKind};
use radon_core::volumes::{v0_exact, Method, VkRequest, VolumeEngine, DEFAULT_VK_TOL};

fn py_err(e: radon_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// The auxiliary function `g_ell(r)`.
#[pyfunction]
#[pyo3(signature = (ell, r, tol = DEFAULT_VK_TOL))]
fn g(ell: usize, r: f64, tol: f64) -> PyResult<f64> {
    GEvaluator::shared().g_eval(ell, r, tol).map_err(py_err)
}

/// Intrinsic volume `v_k(m, n)` of the `(m, n)` partition cone.
#[pyfunction]
#[pyo3(signature = (k, m, n, method = "auto", tol = DEFAULT_VK_TOL))]
fn vk(k: usize, m: usize, n: usize, method: &str, tol: f64) -> PyResult<f64> {
    let method: Method = method.parse().map_err(py_err)?;
    VolumeEngine::default()
        .vk(VkRequest::new(k, m, n).method(method).tol(tol))
        .map_err(py_err)
}

/// `v_0(m, n) = 1 / C(m+n, m)` as a `(numerator, denominator)` pair.
#[pyfunction]
fn v0(m: usize, n: usize) -> PyResult<(String, String)> {
    let q = v0_exact(m, n).map_err(py_err)?;
    Ok((q.numer().to_string(), q.denom().to_string()))
}

/// Probability that a fixed partition with parts of sizes `m`, `n` of
/// Gaussian points in `R^d` is a Radon partition.
#[pyfunction]
#[pyo3(signature = (d, m, n, tol = DEFAULT_VK_TOL))]
fn radon_probability(d: usize, m: usize, n: usize, tol: f64) -> PyResult<f64> {
    VolumeEngine::default()
        .radon_probability(d, m, n, tol)
        .map_err(py_err)
}

/// CSV of a reference table: `section` is one of m1, m2, m3, kmax.
#[pyfunction]
#[pyo3(signature = (section, max_n = None, tol = DEFAULT_VK_TOL))]
fn table_csv(section: &str, max_n: Option<usize>, tol: f64) -> PyResult<String> {
    let kind = TableKind::ALL
        .into_iter()
        .find(|k| k.name() == section)
        .ok_or_else(|| PyValueError::new_err(format!("unknown table {section:?}")))?;
    let table = tables::generate(
        &VolumeEngine::default(),
        kind,
        max_n.unwrap_or(kind.default_max_n()),
        tol,
    )
    .map_err(py_err)?;
    Ok(table.to_csv())
}

/// An ordered pair of disjoint index sets over `{1..n_total}`.
#[pyclass(frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct Partition {
    inner: CorePartition,
}

#[pymethods]
impl Partition {
    #[new]
    fn new(n_total: usize, a: Vec<usize>, b: Vec<usize>) -> PyResult<Self> {
        Ok(Self {
            inner: CorePartition::new(n_total, &a, &b).map_err(py_err)?,
        })
    }

    /// Parses labels such as `"14,3"`.
    #[staticmethod]
    fn parse(n_total: usize, label: &str) -> PyResult<Self> {
        Ok(Self {
            inner: CorePartition::parse_label(n_total, label).map_err(py_err)?,
        })
    }

    #[getter]
    fn a(&self) -> Vec<usize> {
        self.inner.a()
    }

    #[getter]
    fn b(&self) -> Vec<usize> {
        self.inner.b()
    }

    #[getter]
    fn n_total(&self) -> usize {
        self.inner.n_total()
    }

    fn label(&self) -> String {
        self.inner.label()
    }

    fn reversed(&self) -> Self {
        Self {
            inner: self.inner.reversed(),
        }
    }

    fn contains(&self, other: &Partition) -> bool {
        self.inner.contains(&other.inner)
    }

    fn __repr__(&self) -> String {
        format!("Partition({:?}, {:?})", self.inner.a(), self.inner.b())
    }
}

/// A finite point set in `R^d`.
#[pyclass(frozen)]
struct PointConfig {
    inner: geo::PointConfig,
}

fn wrap(r: radon_core::Result<geo::PointConfig>) -> PyResult<PointConfig> {
    Ok(PointConfig {
        inner: r.map_err(py_err)?,
    })
}

fn wrap_all(parts: Vec<CorePartition>) -> Vec<Partition> {
    parts.into_iter().map(|inner| Partition { inner }).collect()
}

#[pymethods]
impl PointConfig {
    #[new]
    fn new(points: Vec<Vec<f64>>) -> PyResult<Self> {
        wrap(geo::PointConfig::new(points))
    }

    #[staticmethod]
    fn from_csv(text: &str) -> PyResult<Self> {
        wrap(geo::PointConfig::from_csv(text))
    }

    /// Points `1..n` on the real line.
    #[staticmethod]
    fn line(n: usize) -> PyResult<Self> {
        wrap(fixtures::line(n))
    }

    /// The `n`-th roots of unity.
    #[staticmethod]
    fn circle(n: usize) -> PyResult<Self> {
        wrap(fixtures::circle(n))
    }

    #[staticmethod]
    fn pentagon_with_center() -> PyResult<Self> {
        wrap(fixtures::pentagon_with_center())
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn points(&self) -> Vec<Vec<f64>> {
        self.inner.points().to_vec()
    }

    fn is_radon(&self, p: &Partition) -> PyResult<bool> {
        self.inner.is_radon(&p.inner).map_err(py_err)
    }

    fn is_general_position(&self) -> bool {
        self.inner.is_general_position()
    }

    /// Minimal Radon partitions with their normalized kernel vectors.
    fn minimal_partitions(&self) -> PyResult<Vec<(Partition, Vec<f64>)>> {
        Ok(self
            .inner
            .minimal_partitions()
            .map_err(py_err)?
            .into_iter()
            .map(|(inner, v)| (Partition { inner }, v.coords().to_vec()))
            .collect())
    }

    fn f_vector(&self) -> PyResult<Vec<usize>> {
        Ok(self.inner.face_lattice().map_err(py_err)?.f_vector())
    }

    /// Face lattice as a JSON document.
    fn lattice_json(&self) -> PyResult<String> {
        lattice_to_json(&self.inner.face_lattice().map_err(py_err)?).map_err(py_err)
    }

    /// Vertex-edge graph in Graphviz DOT.
    fn lattice_dot(&self) -> PyResult<String> {
        lattice_to_dot(&self.inner.face_lattice().map_err(py_err)?).map_err(py_err)
    }

    fn is_tolerant(&self, p: &Partition) -> PyResult<bool> {
        self.inner.is_tolerant(&p.inner).map_err(py_err)
    }

    fn tolerant_partitions(&self) -> PyResult<Vec<Partition>> {
        Ok(wrap_all(self.inner.tolerant_partitions().map_err(py_err)?))
    }

    fn has_reay(&self) -> PyResult<bool> {
        self.inner.has_reay().map_err(py_err)
    }

    /// Reay triples `(A, B, C)` in canonical order.
    fn find_reay(&self) -> PyResult<Vec<(Vec<usize>, Vec<usize>, Vec<usize>)>> {
        Ok(self
            .inner
            .find_reay()
            .map_err(py_err)?
            .into_iter()
            .map(|t| (t.a, t.b, t.c))
            .collect())
    }
}

/// A Monte Carlo proportion with its 3σ half-width.
#[pyclass(frozen, get_all)]
struct Estimate {
    p_hat: f64,
    successes: u64,
    samples: u64,
    ci_half_width: f64,
    seed: u64,
    workers: usize,
}

impl From<CoreEstimate> for Estimate {
    fn from(e: CoreEstimate) -> Self {
        Self {
            p_hat: e.p_hat,
            successes: e.successes,
            samples: e.samples,
            ci_half_width: e.ci_half_width,
            seed: e.seed,
            workers: e.workers,
        }
    }
}

#[pymethods]
impl Estimate {
    fn covers(&self, value: f64) -> bool {
        (self.p_hat - value).abs() <= self.ci_half_width
    }

    fn __repr__(&self) -> String {
        format!(
            "Estimate(p_hat={}, ci_half_width={}, samples={}, seed={})",
            self.p_hat, self.ci_half_width, self.samples, self.seed
        )
    }
}

fn run(py: Python<'_>, f: impl FnOnce() -> radon_core::Result<CoreEstimate> + Send) -> PyResult<Estimate> {
    py.detach(f).map(Estimate::from).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (d, m, n, samples, seed, workers = 1))]
fn estimate_partition_probability(
    py: Python<'_>,
    d: usize,
    m: usize,
    n: usize,
    samples: u64,
    seed: u64,
    workers: usize,
) -> PyResult<Estimate> {
    let cfg = SimConfig::new(samples, seed).workers(workers);
    run(py, || mc::estimate_partition_probability(d, m, n, cfg))
}

#[pyfunction]
#[pyo3(signature = (n, d, samples, seed, workers = 1))]
fn estimate_reay_probability(
    py: Python<'_>,
    n: usize,
    d: usize,
    samples: u64,
    seed: u64,
    workers: usize,
) -> PyResult<Estimate> {
    let cfg = SimConfig::new(samples, seed).workers(workers);
    run(py, || mc::estimate_reay_probability(n, d, cfg))
}

#[pyfunction]
#[pyo3(signature = (n, d, samples, seed, workers = 1))]
fn estimate_tolerance_probability(
    py: Python<'_>,
    n: usize,
    d: usize,
    samples: u64,
    seed: u64,
    workers: usize,
) -> PyResult<Estimate> {
    let cfg = SimConfig::new(samples, seed).workers(workers);
    run(py, || mc::estimate_tolerance_probability(n, d, cfg))
}

#[pymodule]
fn radon(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(g, m)?)?;
    m.add_function(wrap_pyfunction!(vk, m)?)?;
    m.add_function(wrap_pyfunction!(v0, m)?)?;
    m.add_function(wrap_pyfunction!(radon_probability, m)?)?;
    m.add_function(wrap_pyfunction!(table_csv, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_partition_probability, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_reay_probability, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_tolerance_probability, m)?)?;
    m.add_class::<Partition>()?;
    m.add_class::<PointConfig>()?;
    m.add_class::<Estimate>()?;
    Ok(())
}

//! Python bindings: lattices, F-sup-semilattices and frames, the three
//! constructions, the adjunction checks, the law suites and the worked
//! examples. Elements and nodes are passed by label.

use std::collections::BTreeMap;

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use fsl_core::adjunctions::{check_triangles, AdjunctionReport, Adjunction, Verdict};
use fsl_core::constructions;
use fsl_core::error::Error;
use fsl_core::format::{parse_structure, render_structure, Structure};
use fsl_core::frames::{make_frame, Frame as CoreFrame};
use fsl_core::lattice::{validate_lattice, SupLattice};
use fsl_core::laws::{run_suite, Suite};
use fsl_core::morphisms::{enumerate_join_homs, FSupLattice};
use fsl_core::nuclei::{nucleus_closure, prenucleus_from_pairs, quotient};
use fsl_core::worked::run_example;

create_exception!(fsl, FslError, PyValueError, "Invalid structure or failed construction.");
create_exception!(fsl, CarrierTooLarge, FslError, "A construction would exceed the carrier cap.");

fn to_py(e: Error) -> PyErr {
    match e {
        Error::CarrierTooLarge { .. } => CarrierTooLarge::new_err(e.to_string()),
        other => FslError::new_err(other.to_string()),
    }
}

fn element(l: &SupLattice, label: &str) -> PyResult<fsl_core::lattice::Element> {
    l.require(label).map_err(to_py)
}

/// A finite lattice given by its elements and generating order pairs.
#[pyclass(name = "Lattice", module = "fsl", frozen, skip_from_py_object)]
#[derive(Clone)]
struct Lattice {
    inner: SupLattice,
}

#[pymethods]
impl Lattice {
    #[new]
    fn new(elements: Vec<String>, leq: Vec<(String, String)>) -> PyResult<Self> {
        let inner = validate_lattice(&elements, &leq).map_err(to_py)?;
        Ok(Lattice { inner })
    }

    #[staticmethod]
    fn chain(labels: Vec<String>) -> PyResult<Self> {
        Ok(Lattice {
            inner: SupLattice::chain(&labels).map_err(to_py)?,
        })
    }

    #[staticmethod]
    fn two() -> Self {
        Lattice { inner: SupLattice::two() }
    }

    #[staticmethod]
    fn singleton(label: &str) -> Self {
        Lattice {
            inner: SupLattice::singleton(label),
        }
    }

    #[getter]
    fn elements(&self) -> Vec<String> {
        self.inner.labels().to_vec()
    }

    #[getter]
    fn bottom(&self) -> String {
        self.inner.label(self.inner.bottom()).to_string()
    }

    #[getter]
    fn top(&self) -> String {
        self.inner.label(self.inner.top()).to_string()
    }

    fn leq(&self, a: &str, b: &str) -> PyResult<bool> {
        Ok(self.inner.leq(element(&self.inner, a)?, element(&self.inner, b)?))
    }

    fn join(&self, a: &str, b: &str) -> PyResult<String> {
        let j = self.inner.join(element(&self.inner, a)?, element(&self.inner, b)?);
        Ok(self.inner.label(j).to_string())
    }

    fn meet(&self, a: &str, b: &str) -> PyResult<String> {
        let m = self.inner.meet(element(&self.inner, a)?, element(&self.inner, b)?);
        Ok(self.inner.label(m).to_string())
    }

    /// Covering pairs `(lower, upper)`.
    fn covers(&self) -> Vec<(String, String)> {
        let l = &self.inner;
        l.covers()
            .into_iter()
            .map(|(a, b)| (l.label(a).to_string(), l.label(b).to_string()))
            .collect()
    }

    fn to_json(&self) -> String {
        render_structure(&Structure::Lattice(self.inner.clone()))
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Lattice({:?})", self.inner.labels())
    }
}

/// A lattice with a join-preserving operator `F`.
#[pyclass(name = "Fss", module = "fsl", frozen, skip_from_py_object)]
#[derive(Clone)]
struct Fss {
    inner: FSupLattice,
}

#[pymethods]
impl Fss {
    #[new]
    #[pyo3(signature = (lattice, f))]
    fn new(lattice: &Lattice, f: BTreeMap<String, String>) -> PyResult<Self> {
        let g = &lattice.inner;
        let op = g
            .elements()
            .map(|x| {
                let label = g.label(x);
                let value = f
                    .get(label)
                    .ok_or_else(|| FslError::new_err(format!("F has no value for `{label}`")))?;
                element(g, value)
            })
            .collect::<PyResult<Vec<_>>>()?;
        Ok(Fss {
            inner: FSupLattice::new(g, op).map_err(to_py)?,
        })
    }

    /// `lattice` with the zero operator.
    #[staticmethod]
    fn plain(lattice: &Lattice) -> Self {
        Fss {
            inner: FSupLattice::plain(&lattice.inner),
        }
    }

    #[getter]
    fn lattice(&self) -> Lattice {
        Lattice {
            inner: self.inner.lattice().clone(),
        }
    }

    #[getter(F)]
    fn operator(&self) -> BTreeMap<String, String> {
        let g = self.inner.lattice();
        g.elements()
            .map(|x| (g.label(x).to_string(), g.label(self.inner.f(x)).to_string()))
            .collect()
    }

    fn f(&self, x: &str) -> PyResult<String> {
        let g = self.inner.lattice();
        Ok(g.label(self.inner.f(element(g, x)?)).to_string())
    }

    fn to_json(&self) -> String {
        render_structure(&Structure::Fss(self.inner.clone()))
    }

    fn __len__(&self) -> usize {
        self.inner.lattice().len()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Fss({:?})", self.inner.lattice().labels())
    }
}

/// A set of nodes with a binary relation.
#[pyclass(name = "Frame", module = "fsl", frozen, skip_from_py_object)]
#[derive(Clone)]
struct Frame {
    inner: CoreFrame,
}

#[pymethods]
impl Frame {
    #[new]
    fn new(nodes: Vec<String>, rel: Vec<(String, String)>) -> PyResult<Self> {
        Ok(Frame {
            inner: make_frame(&nodes, &rel).map_err(to_py)?,
        })
    }

    #[getter]
    fn nodes(&self) -> Vec<String> {
        self.inner.nodes().to_vec()
    }

    #[getter]
    fn rel(&self) -> Vec<(String, String)> {
        self.inner.rel_labels()
    }

    fn related(&self, i: &str, k: &str) -> PyResult<bool> {
        let i = self.inner.require(i).map_err(to_py)?;
        let k = self.inner.require(k).map_err(to_py)?;
        Ok(self.inner.related(i, k))
    }

    fn to_json(&self) -> String {
        render_structure(&Structure::Frame(self.inner.clone()))
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Frame({:?}, {} related pairs)", self.inner.nodes(), self.inner.rel().len())
    }
}

/// The outcome of an adjunction check.
#[pyclass(name = "Report", module = "fsl", frozen)]
struct Report {
    inner: AdjunctionReport,
}

#[pymethods]
impl Report {
    #[getter]
    fn passed(&self) -> bool {
        self.inner.passed()
    }

    /// `(law, passed, detail)` per law; the detail is the number of checks or
    /// the counterexample.
    #[getter]
    fn laws(&self) -> Vec<(String, bool, String)> {
        self.inner
            .laws
            .iter()
            .map(|l| match &l.verdict {
                Verdict::Pass { checked } => (l.law.clone(), true, format!("{checked} checked")),
                Verdict::Fail { witness } => (l.law.clone(), false, witness.clone()),
            })
            .collect()
    }

    fn render(&self) -> String {
        self.inner.render()
    }

    fn __repr__(&self) -> String {
        format!("Report({}, passed={})", self.inner.subject, self.inner.passed())
    }
}

/// Parses a structure file's text into a `Lattice`, `Fss` or `Frame`.
#[pyfunction]
fn parse(py: Python<'_>, text: &str) -> PyResult<Py<PyAny>> {
    let s = parse_structure(text).map_err(|e| FslError::new_err(e.to_string()))?;
    Ok(match s {
        Structure::Lattice(inner) => Py::new(py, Lattice { inner })?.into_any(),
        Structure::Fss(inner) => Py::new(py, Fss { inner })?.into_any(),
        Structure::Frame(inner) => Py::new(py, Frame { inner })?.into_any(),
    })
}

/// Every join-preserving map, as a label-to-label dict.
#[pyfunction]
fn join_homs(source: &Lattice, target: &Lattice) -> PyResult<Vec<BTreeMap<String, String>>> {
    let (g, l) = (&source.inner, &target.inner);
    let homs = enumerate_join_homs(g, l).map_err(to_py)?;
    Ok(homs
        .iter()
        .map(|f| g.elements().map(|x| (g.label(x).to_string(), l.label(f.apply(x)).to_string())).collect())
        .collect())
}

/// `L^J` with its frame operator.
#[pyfunction]
fn power(lattice: &Lattice, frame: &Frame) -> PyResult<Fss> {
    let p = constructions::frame_operator(&lattice.inner, &frame.inner).map_err(to_py)?;
    Ok(Fss { inner: p.fss().clone() })
}

/// The lattice `J⊗H`; elements are labelled by their least representatives.
#[pyfunction]
fn tensor(frame: &Frame, fss: &Fss) -> PyResult<Lattice> {
    let q = constructions::tensor(&frame.inner, &fss.inner).map_err(to_py)?;
    Ok(Lattice {
        inner: q.lattice().clone(),
    })
}

/// The frame `J[H,L]` and the value table of the hom at each node.
#[pyfunction]
fn hom_frame(fss: &Fss, lattice: &Lattice) -> PyResult<(Frame, Vec<BTreeMap<String, String>>)> {
    let hf = constructions::hom_frame(&fss.inner, &lattice.inner).map_err(to_py)?;
    let (g, l) = (fss.inner.lattice(), &lattice.inner);
    let tables = hf
        .homs()
        .iter()
        .map(|f| g.elements().map(|x| (g.label(x).to_string(), l.label(f.apply(x)).to_string())).collect())
        .collect();
    Ok((
        Frame {
            inner: hf.frame().clone(),
        },
        tables,
    ))
}

/// The closure of the prenucleus identifying `pairs`, as a label map; with
/// the size of the quotient it induces.
#[pyfunction]
fn nucleus(fss: &Fss, pairs: Vec<(String, String)>) -> PyResult<(BTreeMap<String, String>, usize)> {
    let g = fss.inner.lattice();
    let pairs = pairs
        .iter()
        .map(|(a, b)| Ok((element(g, a)?, element(g, b)?)))
        .collect::<PyResult<Vec<_>>>()?;
    let pre = prenucleus_from_pairs(&fss.inner, &pairs).map_err(to_py)?;
    let n = nucleus_closure(&pre);
    let size = quotient(&fss.inner, &n).map_err(to_py)?.len();
    let table = g
        .elements()
        .map(|x| (g.label(x).to_string(), g.label(n.apply(x)).to_string()))
        .collect();
    Ok((table, size))
}

/// Checks the triangle identities of adjunction `"I"`, `"II"` or `"III"`.
#[pyfunction]
fn check(adjunction: &str, frame: &Frame, fss: &Fss, lattice: &Lattice) -> PyResult<Report> {
    let which: Adjunction = adjunction.parse().map_err(|e: String| FslError::new_err(e))?;
    let inner = check_triangles(which, &frame.inner, &fss.inner, &lattice.inner).map_err(to_py)?;
    Ok(Report { inner })
}

/// Runs the adjunction, nucleus and oracle suites; returns whether all
/// instances passed and the summary text.
#[pyfunction]
fn check_laws(py: Python<'_>, seed: u64, count: usize) -> PyResult<(bool, String)> {
    py.detach(|| {
        let mut passed = true;
        let mut text = String::new();
        for suite in [Suite::Adjunctions, Suite::Nuclei, Suite::Oracles] {
            let outcome = run_suite(suite, seed, count)?;
            passed &= outcome.passed();
            text.push_str(&outcome.render());
        }
        Ok((passed, text))
    })
    .map_err(to_py)
}

/// Recomputes worked example `n`; returns whether it matches its golden
/// tables and the full rendering.
#[pyfunction]
fn example(n: usize) -> PyResult<(bool, String)> {
    if !(1..=3).contains(&n) {
        return Err(FslError::new_err(format!("no example {n}; choose 1, 2 or 3")));
    }
    let run = run_example(n).map_err(to_py)?;
    Ok((run.matches(), run.render()))
}

#[pymodule]
fn fsl(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("FslError", m.py().get_type::<FslError>())?;
    m.add("CarrierTooLarge", m.py().get_type::<CarrierTooLarge>())?;
    m.add_class::<Lattice>()?;
    m.add_class::<Fss>()?;
    m.add_class::<Frame>()?;
    m.add_class::<Report>()?;
    m.add_function(wrap_pyfunction!(parse, m)?)?;
    m.add_function(wrap_pyfunction!(join_homs, m)?)?;
    m.add_function(wrap_pyfunction!(power, m)?)?;
    m.add_function(wrap_pyfunction!(tensor, m)?)?;
    m.add_function(wrap_pyfunction!(hom_frame, m)?)?;
    m.add_function(wrap_pyfunction!(nucleus, m)?)?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(check_laws, m)?)?;
    m.add_function(wrap_pyfunction!(example, m)?)?;
    Ok(())
}

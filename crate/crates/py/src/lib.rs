//! Python bindings. Fourier series cross the boundary as lists of
//! `(n, re, im)` tuples; rationals as strings like `"-2/3"`.

use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hypolab_core::cecoh::{cohomology_dim, Representation};
use hypolab_core::cli::{execute, parse_args};
use hypolab_core::dyncoh as dc;
use hypolab_core::heis as hs;
use hypolab_core::liealg as la;
use hypolab_core::rational::{format_q, parse_q};
use hypolab_core::torus as tr;

create_exception!(hypolab, ResonanceError, PyValueError);
create_exception!(hypolab, ObstructionError, PyValueError);

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn torus_err(e: tr::TorusError) -> PyErr {
    match e {
        tr::TorusError::Resonance { frequency } => ResonanceError::new_err(frequency),
        other => value_err(other),
    }
}

fn dyn_err(e: dc::DynError) -> PyErr {
    match e {
        dc::DynError::Torus(t) => torus_err(t),
        other => value_err(other),
    }
}

type Terms = Vec<(Vec<i64>, f64, f64)>;

fn series_from(d: usize, terms: Terms) -> PyResult<tr::FourierSeries> {
    tr::FourierSeries::new(d, terms.into_iter().map(|(n, re, im)| (n, Complex64::new(re, im)))).map_err(torus_err)
}

fn series_to(s: &tr::FourierSeries) -> Terms {
    s.iter().map(|(n, c)| (n.clone(), c.re, c.im)).collect()
}

#[pyclass(name = "LieAlgebra", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyLieAlgebra(la::LieAlgebra);

#[pymethods]
impl PyLieAlgebra {
    #[staticmethod]
    fn heisenberg(g: usize) -> PyResult<Self> {
        if g == 0 {
            return Err(value_err("g must be at least 1"));
        }
        Ok(Self(la::LieAlgebra::heisenberg(g)))
    }

    #[staticmethod]
    fn filiform(g: usize) -> PyResult<Self> {
        if g == 0 {
            return Err(value_err("g must be at least 1"));
        }
        Ok(Self(la::LieAlgebra::filiform(g)))
    }

    #[staticmethod]
    fn g23() -> Self {
        Self(la::LieAlgebra::free_nilpotent_2_3())
    }

    #[staticmethod]
    fn abelian(n: usize) -> PyResult<Self> {
        if n == 0 {
            return Err(value_err("dimension must be at least 1"));
        }
        Ok(Self(la::LieAlgebra::abelian(n)))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        la::LieAlgebra::from_json(text).map(Self).map_err(value_err)
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn names(&self) -> Vec<String> {
        self.0.names().to_vec()
    }

    /// Bracket of two coordinate vectors given as rational strings.
    fn bracket(&self, x: Vec<String>, y: Vec<String>) -> PyResult<Vec<String>> {
        let parse = |v: Vec<String>| v.iter().map(|s| parse_q(s).map_err(value_err)).collect::<PyResult<Vec<_>>>();
        let z = self.0.bracket(&parse(x)?, &parse(y)?).map_err(value_err)?;
        Ok(z.iter().map(format_q).collect())
    }

    fn lower_central_dims(&self) -> Vec<usize> {
        self.0.lower_central_dims()
    }

    fn step(&self) -> Option<usize> {
        self.0.step()
    }

    fn center(&self) -> Vec<String> {
        self.0.center().basis().iter().map(|v| self.0.format_element(v)).collect()
    }

    fn jacobi_violations(&self) -> Vec<(usize, usize, usize)> {
        self.0.jacobi_check().violations
    }

    /// `(genus, euclidean)` when the algebra is `h^genus × R^euclidean`.
    fn classify_2step(&self) -> Option<(usize, usize)> {
        la::classify_2step_dim1(&self.0).ok().map(|p| (p.genus, p.euclidean))
    }

    /// `(cochains, cocycles, coboundaries, cohomology)` in the trivial
    /// (`rep="trivial"`) or adjoint representation.
    #[pyo3(signature = (degree, rep = "trivial"))]
    fn cohomology(&self, degree: usize, rep: &str) -> PyResult<(usize, usize, usize, usize)> {
        let r = match rep {
            "trivial" => Representation::trivial(self.0.clone(), 1),
            "adjoint" => Representation::adjoint(self.0.clone()),
            other => return Err(value_err(format!("unknown representation {other}"))),
        };
        let d = cohomology_dim(&r, degree).map_err(value_err)?;
        Ok((d.cochains, d.cocycles, d.coboundaries, d.cohomology))
    }

    fn __repr__(&self) -> String {
        format!("LieAlgebra({})", self.0.names().join(", "))
    }
}

#[pyclass(name = "ScanReport", frozen, get_all)]
struct PyScanReport {
    tau: f64,
    radius: u64,
    k_hat: f64,
    argmin: Vec<i64>,
    decay: Vec<f64>,
    resonance: Option<Vec<i64>>,
    verdict: String,
}

#[pyclass(name = "TranslationAction", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyTranslationAction(tr::TranslationAction);

#[pymethods]
impl PyTranslationAction {
    /// `generators[j]` is the column `X_{j+1}` in `R^d`.
    #[new]
    fn new(d: usize, generators: Vec<Vec<f64>>) -> PyResult<Self> {
        tr::TranslationAction::new(d, generators).map(Self).map_err(torus_err)
    }

    #[staticmethod]
    fn golden() -> Self {
        Self(tr::TranslationAction::golden())
    }

    #[staticmethod]
    fn golden_2d() -> Self {
        Self(tr::TranslationAction::golden_2d())
    }

    #[staticmethod]
    fn golden_k(k: usize) -> PyResult<Self> {
        if k == 0 {
            return Err(value_err("k must be at least 1"));
        }
        Ok(Self(tr::TranslationAction::golden_k(k)))
    }

    #[staticmethod]
    fn rational_half() -> Self {
        Self(tr::TranslationAction::rational_half())
    }

    #[staticmethod]
    fn liouville(terms: u32) -> PyResult<Self> {
        if !(1..=6).contains(&terms) {
            return Err(value_err("terms must be in 1..=6"));
        }
        Ok(Self(tr::TranslationAction::liouville(terms)))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        tr::TranslationAction::from_json(text).map(Self).map_err(torus_err)
    }

    #[getter]
    fn d(&self) -> usize {
        self.0.d()
    }

    #[getter]
    fn k(&self) -> usize {
        self.0.k()
    }

    #[getter]
    fn generators(&self) -> Vec<Vec<f64>> {
        self.0.generators().to_vec()
    }

    fn laplacian_symbol(&self, n: Vec<i64>) -> PyResult<f64> {
        tr::laplacian_symbol(&self.0, &n).map_err(torus_err)
    }

    fn scan(&self, py: Python<'_>, tau: f64, radius: u64) -> PyResult<PyScanReport> {
        if radius == 0 || !tau.is_finite() || tau < 0.0 {
            return Err(value_err("need radius >= 1 and finite tau >= 0"));
        }
        let act = self.0.clone();
        let r = py.detach(move || tr::diophantine_scan(&act, tau, radius));
        let verdict = match r.verdict {
            tr::ScanVerdict::Resonant => "resonant",
            tr::ScanVerdict::DiophantineConsistent => "diophantine-consistent",
            tr::ScanVerdict::Failing => "failing",
        };
        Ok(PyScanReport {
            tau,
            radius,
            k_hat: r.k_hat,
            argmin: r.argmin,
            decay: r.decay,
            resonance: r.resonance,
            verdict: verdict.to_string(),
        })
    }

    /// Solves `Δu = v − v̂(0)`; returns `(u, (re, im) of v̂(0))`.
    fn solve_laplacian(&self, v: Terms) -> PyResult<(Terms, (f64, f64))> {
        let v = series_from(self.0.d(), v)?;
        let s = tr::solve_laplacian(&self.0, &v).map_err(torus_err)?;
        Ok((series_to(&s.solution), (s.obstruction.re, s.obstruction.im)))
    }

    /// Solves `X_j u = v − v̂(0)`.
    fn solve_vectorfield(&self, j: usize, v: Terms) -> PyResult<(Terms, (f64, f64))> {
        let v = series_from(self.0.d(), v)?;
        let s = tr::solve_vectorfield(&self.0, j, &v).map_err(torus_err)?;
        Ok((series_to(&s.solution), (s.obstruction.re, s.obstruction.im)))
    }

    /// `(empirical C, analytic bound)` for the tame inverse with loss `2τ`.
    #[pyo3(signature = (tau, r = 0.0, trials = 20, radius = 200, seed = 0))]
    fn tame_constant(&self, tau: f64, r: f64, trials: usize, radius: u64, seed: u64) -> PyResult<(f64, f64)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = tr::tame_constant_estimate(&self.0, tau, r, trials, radius, &mut rng).map_err(torus_err)?;
        Ok((e.empirical, e.analytic_bound))
    }

    fn __repr__(&self) -> String {
        format!("TranslationAction(d={}, generators={:?})", self.0.d(), self.0.generators())
    }
}

#[pyclass(name = "Cochain", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyCochain(dc::Cochain);

#[pymethods]
impl PyCochain {
    /// Components as `{index: terms}` with 0-based increasing indices.
    #[new]
    fn new(action: &PyTranslationAction, degree: usize, components: Vec<(Vec<usize>, Terms)>) -> PyResult<Self> {
        let act = &action.0;
        let comps = components
            .into_iter()
            .map(|(i, t)| {
                let index = hypolab_core::exterior::MultiIndex::new(act.k(), &i).map_err(value_err)?;
                Ok((index, series_from(act.d(), t)?))
            })
            .collect::<PyResult<Vec<_>>>()?;
        dc::Cochain::new(act, degree, comps).map(Self).map_err(dyn_err)
    }

    #[staticmethod]
    #[pyo3(signature = (action, degree, radius = 3, modes = 4, seed = 0))]
    fn random(action: &PyTranslationAction, degree: usize, radius: i64, modes: usize, seed: u64) -> PyResult<Self> {
        if degree > action.0.k() {
            return Err(value_err("degree exceeds k"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Ok(Self(dc::Cochain::random(&action.0, degree, radius, modes, &mut rng)))
    }

    #[staticmethod]
    #[pyo3(signature = (action, radius = 3, modes = 4, seed = 0))]
    fn random_closed(action: &PyTranslationAction, radius: i64, modes: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self(dc::random_closed_one_form(&action.0, radius, modes, &mut rng))
    }

    #[staticmethod]
    fn from_json(text: &str, action: &PyTranslationAction) -> PyResult<Self> {
        dc::Cochain::from_json(text, &action.0).map(Self).map_err(dyn_err)
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    #[getter]
    fn degree(&self) -> usize {
        self.0.degree()
    }

    fn components(&self) -> Vec<(Vec<usize>, Terms)> {
        self.0.components().map(|(i, u)| (i.indices().to_vec(), series_to(u))).collect()
    }

    fn l2_norm(&self) -> f64 {
        self.0.l2_norm()
    }

    fn sobolev_norm(&self, s: f64) -> f64 {
        self.0.sobolev_norm(s)
    }

    fn differential(&self) -> PyResult<Self> {
        dc::differential(&self.0).map(Self).map_err(dyn_err)
    }

    fn codifferential(&self) -> PyResult<Self> {
        dc::codifferential(&self.0).map(Self).map_err(dyn_err)
    }

    fn laplacian(&self) -> PyResult<Self> {
        dc::cochain_laplacian(&self.0).map(Self).map_err(dyn_err)
    }

    fn diagonality_residual(&self) -> PyResult<f64> {
        dc::diagonality_residual(&self.0).map_err(dyn_err)
    }

    /// `(exact, coexact, harmonic coefficients, max orthogonality cosine,
    /// reconstruction error)`.
    #[allow(clippy::type_complexity)]
    fn hodge(&self) -> PyResult<(Self, Self, Vec<(Vec<usize>, f64, f64)>, f64, f64)> {
        let p = dc::hodge_decompose(&self.0).map_err(dyn_err)?;
        let harmonic = p.harmonic.terms().map(|(i, z)| (i.indices().to_vec(), z.re, z.im)).collect();
        let orth = p.orthogonality().max();
        let recon = p.reconstruction_error(&self.0);
        Ok((Self(p.exact), Self(p.coexact), harmonic, orth, recon))
    }

    /// `S(ω)(t, x)` for a closed 1-cochain.
    fn cocycle(&self, t: Vec<f64>, x: Vec<f64>) -> PyResult<(f64, f64)> {
        let z = dc::cocycle_from_form(&self.0, &t, &x).map_err(dyn_err)?;
        Ok((z.re, z.im))
    }

    fn roundtrip_error(&self) -> PyResult<f64> {
        dc::roundtrip_error(&self.0).map_err(dyn_err)
    }
}

#[pyfunction]
fn harmonic_dims(action: &PyTranslationAction, radius: i64) -> Vec<usize> {
    dc::harmonic_dims(&action.0, radius)
}

#[pyclass(name = "HeisenbergReport", frozen, get_all)]
struct PyHeisenbergReport {
    abelian: bool,
    center_test: bool,
    base_test: bool,
    base_k_hat: f64,
    passes: bool,
    reasons: Vec<String>,
}

#[pyclass(name = "HeisenbergAction", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyHeisenbergAction(hs::HeisenbergAction);

#[pymethods]
impl PyHeisenbergAction {
    /// Generators are rational strings in the basis `X_1..X_g, Y_1..Y_g, Z`.
    #[new]
    fn new(g: usize, generators: Vec<Vec<String>>) -> PyResult<Self> {
        let gens = generators
            .iter()
            .map(|row| row.iter().map(|s| parse_q(s).map_err(value_err)).collect::<PyResult<Vec<_>>>())
            .collect::<PyResult<Vec<_>>>()?;
        hs::HeisenbergAction::new(g, gens).map(Self).map_err(value_err)
    }

    #[staticmethod]
    fn no_center() -> Self {
        Self(hs::HeisenbergAction::xy())
    }

    #[staticmethod]
    fn center_golden() -> Self {
        Self(hs::HeisenbergAction::golden_with_center())
    }

    #[staticmethod]
    fn x_flow() -> Self {
        Self(hs::HeisenbergAction::x_flow())
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        hs::HeisenbergAction::from_json(text).map(Self).map_err(value_err)
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    #[pyo3(signature = (tau = 1.0, radius = 1000))]
    fn check(&self, py: Python<'_>, tau: f64, radius: u64) -> PyResult<PyHeisenbergReport> {
        if radius == 0 || !tau.is_finite() || tau < 0.0 {
            return Err(value_err("need radius >= 1 and finite tau >= 0"));
        }
        let act = self.0.clone();
        let r = py.detach(move || hs::heisenberg_gh_check(&act, tau, radius));
        Ok(PyHeisenbergReport {
            abelian: r.abelian,
            center_test: r.center_test,
            base_test: r.base_test,
            base_k_hat: r.base_scan.k_hat,
            passes: r.verdict == hs::HeisVerdict::PassesNecessaryConditions,
            reasons: r.reasons,
        })
    }
}

/// Runs the Schrödinger-model division on `e^{-|x|²}` (`profile="gaussian"`)
/// or on `symbol · e^{-|x|²}` (`profile="cancellation"`). Returns the witness
/// value `v(0)`, or raises nothing and returns the residual when solvable,
/// as `("obstruction", value)` or `("solved", residual)`.
#[pyfunction]
#[pyo3(signature = (g = 1, k = 1, profile = "gaussian", extent = hs::DEFAULT_RADIUS, step = hs::DEFAULT_STEP))]
fn schrodinger_witness(g: usize, k: usize, profile: &str, extent: f64, step: f64) -> PyResult<(String, f64)> {
    let model = hs::SchrodingerModel::new(g, k, extent, step, hs::DEFAULT_TOL).map_err(value_err)?;
    let gauss = |x: &[f64]| (-x.iter().map(|v| v * v).sum::<f64>()).exp();
    let v = match profile {
        "gaussian" => model.sample(gauss),
        "cancellation" => model.sample(|x| hs::multiplication_symbol(&model, x) * gauss(x)),
        other => return Err(value_err(format!("unknown profile {other}"))),
    };
    Ok(match hs::attempt_solve_multiplication(&model, &v).map_err(value_err)? {
        hs::MultiplicationOutcome::Obstruction { value, .. } => ("obstruction".to_string(), value),
        hs::MultiplicationOutcome::Solved { residual, .. } => ("solved".to_string(), residual),
    })
}

/// `[S', R']` in 𝔤_{2,3} for `R' = X1 + βX2 + Y`, `S' = Z + Y'`; returns the
/// formatted bracket.
#[pyfunction]
#[pyo3(signature = (beta, y = None, y_prime = None))]
fn counterexample(beta: &str, y: Option<(String, String)>, y_prime: Option<(String, String)>) -> PyResult<String> {
    let b = parse_q(beta).map_err(value_err)?;
    let pair = |p: Option<(String, String)>| -> PyResult<[hypolab_core::rational::Q; 2]> {
        match p {
            Some((a, c)) => Ok([parse_q(&a).map_err(value_err)?, parse_q(&c).map_err(value_err)?]),
            None => Ok(Default::default()),
        }
    };
    let w = la::counterexample_g23(&b, &pair(y)?, &pair(y_prime)?);
    Ok(la::LieAlgebra::free_nilpotent_2_3().format_element(&w.bracket))
}

/// Runs a CLI command (without the program name) and returns
/// `(exit_code, report_json)`; input errors raise `ValueError`.
#[pyfunction]
fn run_cli(py: Python<'_>, args: Vec<String>) -> PyResult<(i32, String)> {
    let cli = parse_args(std::iter::once("hypolab".to_string()).chain(args)).map_err(value_err)?;
    let report = py.detach(move || execute(&cli)).map_err(value_err)?;
    Ok((report.exit_code, report.to_json()))
}

#[pymodule]
fn hypolab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyLieAlgebra>()?;
    m.add_class::<PyTranslationAction>()?;
    m.add_class::<PyScanReport>()?;
    m.add_class::<PyCochain>()?;
    m.add_class::<PyHeisenbergAction>()?;
    m.add_class::<PyHeisenbergReport>()?;
    m.add_function(wrap_pyfunction!(harmonic_dims, m)?)?;
    m.add_function(wrap_pyfunction!(schrodinger_witness, m)?)?;
    m.add_function(wrap_pyfunction!(counterexample, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    m.add("ResonanceError", m.py().get_type::<ResonanceError>())?;
    m.add("ObstructionError", m.py().get_type::<ObstructionError>())?;
    Ok(())
}

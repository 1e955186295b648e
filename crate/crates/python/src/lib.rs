//! Python bindings. Complex numbers cross as Python `complex`.

use hol_core::blaschke::BlaschkeProduct;
use hol_core::eigen::{
    blaschke_eigenvector, check_lp_convergence, eigenvalue_gamma, outer_eval, BoundaryModulus, LpVerdict,
    OuterEigenfunction,
};
use hol_core::geometry::{classify, AutomorphismClass};
use hol_core::hardy::{span_classification, SpanCase, SpanOptions};
use hol_core::{Complex64, DiscPoint, GeneralAutomorphismParams, HolError, NonEllipticNormalForm};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn py_err(e: HolError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn disc(z: Complex64) -> PyResult<DiscPoint> {
    DiscPoint::new(z).map_err(py_err)
}

/// A hyperbolic (`z -> alpha z` on the half-plane) or parabolic (`z -> z + t`) normal form.
#[pyclass(name = "NormalForm", frozen, skip_from_py_object)]
struct PyNormalForm(NonEllipticNormalForm);

#[pymethods]
impl PyNormalForm {
    #[staticmethod]
    fn hyperbolic(alpha: f64) -> PyResult<Self> {
        NonEllipticNormalForm::hyperbolic(alpha).map(Self).map_err(py_err)
    }

    #[staticmethod]
    fn parabolic(t: f64) -> PyResult<Self> {
        NonEllipticNormalForm::parabolic(t).map(Self).map_err(py_err)
    }

    #[getter]
    fn is_hyperbolic(&self) -> bool {
        self.0.is_hyperbolic()
    }

    fn fixed_points(&self) -> Vec<Complex64> {
        self.0.fixed_points()
    }

    fn iterate(&self, n: i64, z: Complex64) -> PyResult<Complex64> {
        Ok(self.0.iterate_eval(n, disc(z)?.value()))
    }

    fn derivative_modulus(&self, n: i64, z: Complex64) -> PyResult<f64> {
        Ok(self.0.derivative_modulus(n, disc(z)?.value()))
    }

    /// Lower and upper bound of the n-th derivative modulus on J.
    fn derivative_bounds(&self, n: i64) -> (f64, f64) {
        self.0.derivative_bounds(n)
    }

    /// Index of the tile containing `z`.
    fn quotient_index(&self, z: Complex64) -> PyResult<i64> {
        self.0.quotient_index(z).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.0)
    }
}

/// "elliptic", "parabolic" or "hyperbolic" for `z -> e^{i theta}(p - z)/(1 - conj(p) z)`.
#[pyfunction]
fn classify_automorphism(theta: f64, p: Complex64) -> PyResult<&'static str> {
    let params = GeneralAutomorphismParams::new(theta, p).map_err(py_err)?;
    Ok(match classify(&params).map_err(py_err)? {
        AutomorphismClass::Elliptic => "elliptic",
        AutomorphismClass::Parabolic => "parabolic",
        AutomorphismClass::Hyperbolic => "hyperbolic",
    })
}

#[pyfunction]
fn pseudo_hyperbolic_distance(z: Complex64, w: Complex64) -> PyResult<f64> {
    Ok(hol_core::geometry::rho(disc(z)?, disc(w)?))
}

#[pyfunction]
fn blaschke_eval(zeros: Vec<Complex64>, z: Complex64) -> PyResult<Complex64> {
    let b = BlaschkeProduct::from_disc_zeros(&zeros).map_err(py_err)?;
    Ok(b.eval(z, b.len()).map_err(py_err)?.value)
}

/// Blaschke eigenvector with zeros on the orbits of `seeds`; returns `(gamma, zeros)`.
#[pyfunction]
#[pyo3(signature = (form, seeds, n_orbit=32))]
fn blaschke_eigen(form: &PyNormalForm, seeds: Vec<Complex64>, n_orbit: u32) -> PyResult<(Complex64, Vec<Complex64>)> {
    let seeds = seeds.into_iter().map(disc).collect::<PyResult<Vec<_>>>()?;
    let ev = blaschke_eigenvector(&form.0, &seeds, n_orbit).map_err(py_err)?;
    let zeros = (0..ev.product.len()).map(|k| ev.product.zero(k).disc()).collect();
    Ok((ev.gamma, zeros))
}

/// "constants", "model" or "whole" for the closed span of the kernels at `points`.
#[pyfunction]
#[pyo3(signature = (points, form, blaschke_intent=true))]
fn span_case(points: Vec<Complex64>, form: &PyNormalForm, blaschke_intent: bool) -> PyResult<&'static str> {
    let points = points.into_iter().map(disc).collect::<PyResult<Vec<_>>>()?;
    let c = span_classification(&points, blaschke_intent, &form.0, &SpanOptions::default()).map_err(py_err)?;
    Ok(match c.case {
        SpanCase::ConstantsOnly => "constants",
        SpanCase::ModelSpace { .. } => "model",
        SpanCase::WholeSpace => "whole",
    })
}

/// Outer eigenfunction built from boundary-modulus samples on each arc of J.
#[pyclass(name = "OuterEigenfunction", frozen)]
struct PyOuter(OuterEigenfunction);

#[pymethods]
impl PyOuter {
    #[new]
    #[pyo3(signature = (form, arcs, lam, p=2.0, n_tile=24))]
    fn new(form: &PyNormalForm, arcs: Vec<Vec<f64>>, lam: f64, p: f64, n_tile: u32) -> PyResult<Self> {
        let f0 = BoundaryModulus::new(arcs).map_err(py_err)?;
        OuterEigenfunction::new(form.0, f0, lam, p, n_tile).map(Self).map_err(py_err)
    }

    fn __call__(&self, z: Complex64) -> PyResult<Complex64> {
        Ok(outer_eval(&self.0, disc(z)?).map_err(py_err)?.value)
    }

    fn gamma(&self) -> PyResult<Complex64> {
        Ok(eigenvalue_gamma(&self.0).map_err(py_err)?.gamma)
    }
}

/// Tail bound of the tiled L^p sum after `n_max` tiles, or `None` when it diverges.
#[pyfunction]
#[pyo3(signature = (form, arcs, lam, p=2.0, n_max=60))]
fn lp_tail_bound(form: &PyNormalForm, arcs: Vec<Vec<f64>>, lam: f64, p: f64, n_max: u32) -> PyResult<Option<f64>> {
    let f0 = BoundaryModulus::new(arcs).map_err(py_err)?;
    Ok(match check_lp_convergence(&f0, lam, &form.0, p, n_max).map_err(py_err)?.verdict {
        LpVerdict::Converges { tail_bound } => Some(tail_bound),
        LpVerdict::Diverges => None,
    })
}

#[pymodule]
fn hol(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyNormalForm>()?;
    m.add_class::<PyOuter>()?;
    m.add_function(wrap_pyfunction!(classify_automorphism, m)?)?;
    m.add_function(wrap_pyfunction!(pseudo_hyperbolic_distance, m)?)?;
    m.add_function(wrap_pyfunction!(blaschke_eval, m)?)?;
    m.add_function(wrap_pyfunction!(blaschke_eigen, m)?)?;
    m.add_function(wrap_pyfunction!(span_case, m)?)?;
    m.add_function(wrap_pyfunction!(lp_tail_bound, m)?)?;
    Ok(())
}

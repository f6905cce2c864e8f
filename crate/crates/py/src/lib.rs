//! Python bindings. Results come back as dicts of decimal strings, never binary floats.

use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use malmsten::constants::{constant as eval_constant, ConstantId};
use malmsten::kernels::{identity_registry, KernelSpec};
use malmsten::quadrature::{integrate as quad, verify_identity};
use malmsten::reconstruct::{coeff_table, fourier_table, poly_family, pslq as find_relation, CoeffFamily, PolyFamily};
use malmsten::{cli, Error};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::UnknownId(_) | Error::Parse(_) | Error::Domain(_) | Error::Unsupported(_) => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyArithmeticError::new_err(e.to_string()),
    }
}

/// Ids of every registry identity.
#[pyfunction]
fn identities() -> Vec<String> {
    identity_registry().iter().map(|s| s.id.clone()).collect()
}

/// `{"value", "error_bound", "digits"}` for a constant id such as `zeta(3)`.
#[pyfunction]
#[pyo3(signature = (id, digits = 30))]
fn constant<'py>(py: Python<'py>, id: &str, digits: u32) -> PyResult<Bound<'py, PyDict>> {
    let c: ConstantId = id.parse().map_err(to_py)?;
    let v = py.detach(|| eval_constant(c, digits)).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("value", v.to_decimal(digits as usize))?;
    d.set_item("error_bound", v.error_string())?;
    d.set_item("digits", digits)?;
    Ok(d)
}

/// Certified integral of a kernel id such as `F3:1`.
#[pyfunction]
#[pyo3(signature = (kernel, digits = 30))]
fn integrate<'py>(py: Python<'py>, kernel: &str, digits: u32) -> PyResult<Bound<'py, PyDict>> {
    let k: KernelSpec = kernel.parse().map_err(to_py)?;
    let r = py.detach(|| quad(&k, digits)).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("kernel", k.to_string())?;
    d.set_item("value", r.value.to_decimal(digits as usize))?;
    d.set_item("error_bound", r.value.error_string())?;
    d.set_item("transform", r.transform.to_string())?;
    d.set_item("levels", r.levels)?;
    d.set_item("nodes_used", r.nodes_used)?;
    Ok(d)
}

/// Check one registry identity.
#[pyfunction]
#[pyo3(signature = (id, digits = 30))]
fn verify<'py>(py: Python<'py>, id: &str, digits: u32) -> PyResult<Bound<'py, PyDict>> {
    let c = py.detach(|| verify_identity(id, digits)).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("id", &c.id)?;
    d.set_item("pass", c.pass)?;
    d.set_item("lhs", c.lhs.to_decimal(digits as usize))?;
    d.set_item("rhs", c.rhs.to_decimal(digits as usize))?;
    d.set_item("residual_bound", &c.residual_bound)?;
    d.set_item("threshold", &c.threshold)?;
    Ok(d)
}

/// Coefficient rows of a family as lists of fraction strings.
#[pyfunction]
#[pyo3(signature = (family, n, digits = 30))]
fn coeffs(py: Python<'_>, family: &str, n: u32, digits: u32) -> PyResult<Vec<Vec<String>>> {
    let f: CoeffFamily = family.parse().map_err(to_py)?;
    let t = py.detach(|| coeff_table(&f, n, digits)).map_err(to_py)?;
    if let Some(r) = t.rows.iter().find(|r| !r.certified) {
        return Err(PyArithmeticError::new_err(format!("row {} is uncertified", r.n)));
    }
    Ok(t.rows.iter().map(|r| r.coeffs.iter().map(|c| c.to_string()).collect()).collect())
}

/// `Xi_n` or `Lambda_n` as fraction strings, lowest degree first.
#[pyfunction]
#[pyo3(signature = (family, n, digits = 30))]
fn poly(py: Python<'_>, family: &str, n: u32, digits: u32) -> PyResult<Vec<String>> {
    let f: PolyFamily = family.parse().map_err(to_py)?;
    let p = py.detach(|| poly_family(f, n, digits)).map_err(to_py)?;
    Ok(p.coeffs().iter().map(|c| c.to_string()).collect())
}

/// Integer relation among constant or kernel ids; `None` when there is none up to the height.
#[pyfunction]
#[pyo3(signature = (values, digits = 30, max_height = 1_000_000))]
fn pslq(py: Python<'_>, values: Vec<String>, digits: u32, max_height: u64) -> PyResult<Option<Vec<String>>> {
    let r = py
        .detach(|| {
            let v = values.iter().map(|s| cli::evaluate_spec(s, digits)).collect::<malmsten::Result<Vec<_>>>()?;
            find_relation(&v, digits, max_height)
        })
        .map_err(to_py)?;
    Ok(match r.status {
        malmsten::reconstruct::RelationStatus::Found => Some(r.coefficients.iter().map(|c| c.to_string()).collect()),
        malmsten::reconstruct::RelationStatus::NoneUpToBound => None,
    })
}

/// `(k, partial_sum, delta)` rows of the cosine series for `pi/4`.
#[pyfunction]
#[pyo3(signature = (k, digits = 30))]
fn fourier(py: Python<'_>, k: u32, digits: u32) -> PyResult<Vec<(u32, String, String)>> {
    let rows = py.detach(|| fourier_table(k, digits)).map_err(to_py)?;
    Ok(rows.iter().map(|r| (r.k, r.partial_sum.to_decimal(digits as usize), r.delta.to_decimal(12))).collect())
}

#[pymodule]
#[pyo3(name = "malmsten")]
fn malmsten_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(identities, m)?)?;
    m.add_function(wrap_pyfunction!(constant, m)?)?;
    m.add_function(wrap_pyfunction!(integrate, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(coeffs, m)?)?;
    m.add_function(wrap_pyfunction!(poly, m)?)?;
    m.add_function(wrap_pyfunction!(pslq, m)?)?;
    m.add_function(wrap_pyfunction!(fourier, m)?)?;
    Ok(())
}

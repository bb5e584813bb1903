use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use qdisk_core::cluster::ClusterChart;
use qdisk_core::duality::{i_a_q, i_d_q, pi_q, structure_constants};
use qdisk_core::lamination::{ALamination, DLamination};
use qdisk_core::polygon::{catalan as catalan_number, enumerate_triangulations, Triangulation};
use qdisk_core::verify::{self, Options};

fn err(e: qdisk_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn chart_of(n: usize, chart: Option<&str>) -> qdisk_core::Result<ClusterChart> {
    let t = match chart {
        Some(s) => Triangulation::parse_chart(n, s)?,
        None => Triangulation::fan(n)?,
    };
    ClusterChart::new(&t)
}

pub fn ia_text(n: usize, lamination: &str, chart: Option<&str>, q_one: bool) -> qdisk_core::Result<String> {
    let ch = chart_of(n, chart)?;
    let r = i_a_q(&ch, &ALamination::from_json(n, lamination)?)?;
    Ok(if q_one { r.classical_text(&ch.alg) } else { r.to_text(&ch.alg, true) })
}

pub fn id_json(n: usize, lamination: &str, chart: Option<&str>, q_one: bool) -> qdisk_core::Result<String> {
    let ch = chart_of(n, chart)?;
    let d = DLamination::from_json(n, lamination)?;
    let r = i_d_q(&ch, &d)?;
    let mut j = r.to_json(&ch.alg, !q_one);
    j["pi_check"] = match qdisk_core::cli::phi_preimage(&d) {
        Some(l) => serde_json::Value::Bool(pi_q(&ch.alg, &r)? == i_a_q(&ch, &l)?.value),
        None => serde_json::Value::Null,
    };
    Ok(j.to_string())
}

/// `I_A^q` of an A-lamination given as JSON, as text in the X-chart.
#[pyfunction]
#[pyo3(signature = (n, lamination, chart=None, q_one=false))]
fn compute_ia(n: usize, lamination: &str, chart: Option<&str>, q_one: bool) -> PyResult<String> {
    ia_text(n, lamination, chart, q_one).map_err(err)
}

/// `I_D^q` of a D-lamination given as JSON, returned as a JSON string.
#[pyfunction]
#[pyo3(signature = (n, lamination, chart=None, q_one=false))]
fn compute_id(n: usize, lamination: &str, chart: Option<&str>, q_one: bool) -> PyResult<String> {
    id_json(n, lamination, chart, q_one).map_err(err)
}

/// Structure constants as a list of (lamination JSON, coefficient) pairs.
#[pyfunction]
fn structure(n: usize, left: &str, right: &str) -> PyResult<Vec<(String, String)>> {
    let l1 = ALamination::from_json(n, left).map_err(err)?;
    let l2 = ALamination::from_json(n, right).map_err(err)?;
    let sc = structure_constants(&l1, &l2).map_err(err)?;
    Ok(sc.terms.iter().map(|(l, c)| (l.to_json(), c.to_q_string())).collect())
}

/// Chart specs of every triangulation of the n-gon.
#[pyfunction]
fn triangulations(n: usize) -> PyResult<Vec<String>> {
    Ok(enumerate_triangulations(n).map_err(err)?.iter().map(Triangulation::chart_spec).collect())
}

#[pyfunction]
fn catalan(k: usize) -> u64 {
    catalan_number(k)
}

/// Runs suites; returns (passed, report text).
#[pyfunction]
#[pyo3(signature = (suites, n=None, order=8, weights=None, seed=verify::DEFAULT_SEED, jobs=1))]
fn run_verify(suites: Vec<String>, n: Option<usize>, order: usize, weights: Option<i64>, seed: u64, jobs: usize) -> PyResult<(bool, String)> {
    let o = Options { n, order, weights, seed };
    let reports = verify::run_suites(&suites, &o, jobs).map_err(err)?;
    let text: String = reports.iter().map(verify::SuiteReport::to_text).collect();
    Ok((reports.iter().all(verify::SuiteReport::passed), text))
}

#[pymodule]
fn qdisk(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(compute_ia, m)?)?;
    m.add_function(wrap_pyfunction!(compute_id, m)?)?;
    m.add_function(wrap_pyfunction!(structure, m)?)?;
    m.add_function(wrap_pyfunction!(triangulations, m)?)?;
    m.add_function(wrap_pyfunction!(catalan, m)?)?;
    m.add_function(wrap_pyfunction!(run_verify, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_laminations() {
        assert_eq!(ia_text(5, r#"{"curves":[]}"#, None, false).unwrap(), "1");
        let j: serde_json::Value = serde_json::from_str(&id_json(5, r#"{"front":[],"back":[]}"#, None, false).unwrap()).unwrap();
        assert_eq!(j["n_l"], 0);
        assert_eq!(j["pi_check"], true);
    }

    #[test]
    fn invalid_lamination_is_an_error() {
        assert!(ia_text(5, r#"{"curves":[{"chord":[0,2],"w":1}]}"#, None, false).is_err());
    }
}

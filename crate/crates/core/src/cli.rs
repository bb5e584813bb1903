//! Command-line surface of the `qdisk` binary.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::cluster::ClusterChart;
use crate::duality::{i_a_q, i_d_q, pi_q, structure_constants};
use crate::error::{Error, Result};
use crate::lamination::{ALamination, DLamination};
use crate::polygon::Triangulation;
use crate::skein::{superpose, Multicurve};
use crate::verify::{self, Options};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "qdisk", version, about = "Quantum cluster varieties of a marked disk")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print I_A^q of an A-lamination in the X-chart.
    ComputeIa(ComputeArgs),
    /// Print I_D^q of a D-lamination as JSON.
    ComputeId(ComputeArgs),
    /// Structure constants of I_A^q(l) I_A^q(l') as JSON.
    Structure(PairArgs),
    /// Skein product of two multicurves, with its chart value.
    Product(PairArgs),
    /// Run verification suites.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct ChartArgs {
    /// Number of marked points.
    #[arg(long = "polygon", visible_alias = "n")]
    pub polygon: usize,
    /// Diagonals of the chart, e.g. "0-2,0-3"; defaults to the fan at 0.
    #[arg(long)]
    pub chart: Option<String>,
    /// Write output here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ComputeArgs {
    #[command(flatten)]
    pub chart: ChartArgs,
    /// Lamination JSON file.
    #[arg(long)]
    pub lamination: PathBuf,
    /// Print the specialization at q = 1.
    #[arg(long)]
    pub q_one: bool,
}

#[derive(Args, Debug)]
pub struct PairArgs {
    #[command(flatten)]
    pub chart: ChartArgs,
    /// Two input files, left factor first.
    #[arg(long, num_args = 1, required = true)]
    pub lamination: Vec<PathBuf>,
    #[arg(long)]
    pub q_one: bool,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Suites to run.
    #[arg(required = true)]
    pub suites: Vec<String>,
    /// Restrict to one polygon.
    #[arg(long = "n", visible_alias = "polygon")]
    pub n: Option<usize>,
    /// Truncation order for the dilogarithm series.
    #[arg(long, default_value_t = crate::dilog::DEFAULT_ORDER)]
    pub order: usize,
    /// Weight bound for enumerated laminations and multicurves.
    #[arg(long)]
    pub weights: Option<i64>,
    /// Seed for sampled checks.
    #[arg(long, default_value_t = verify::DEFAULT_SEED)]
    pub seed: u64,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Emit JSON instead of text.
    #[arg(long)]
    pub json: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// What a command produced: text to emit and the exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    pub code: i32,
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn chart_of(a: &ChartArgs) -> Result<ClusterChart> {
    let t = match &a.chart {
        Some(spec) => Triangulation::parse_chart(a.polygon, spec)?,
        None => Triangulation::fan(a.polygon)?,
    };
    ClusterChart::new(&t)
}

fn two(paths: &[PathBuf]) -> Result<(String, String)> {
    match paths {
        [a, b] => Ok((read(a)?, read(b)?)),
        _ => Err(Error::InvalidInput(format!("expected two --lamination files, got {}", paths.len()))),
    }
}

/// Inverse of `phi` when the D-lamination is a `phi`-image.
pub fn phi_preimage(d: &DLamination) -> Option<ALamination> {
    let n = d.n();
    if d.front().keys().any(|c| !c.is_boundary(n) || d.back().contains_key(c)) {
        return None;
    }
    let w: Vec<_> = d.back().iter().map(|(c, x)| (*c, *x)).chain(d.front().iter().map(|(c, x)| (*c, -*x))).collect();
    ALamination::from_weights(n, &w).ok().filter(ALamination::is_valid)
}

pub fn compute_ia(a: &ComputeArgs) -> Result<String> {
    let chart = chart_of(&a.chart)?;
    let l = ALamination::from_json(a.chart.polygon, &read(&a.lamination)?)?;
    let r = i_a_q(&chart, &l)?;
    Ok(if a.q_one { r.classical_text(&chart.alg) } else { r.to_text(&chart.alg, true) })
}

pub fn compute_id(a: &ComputeArgs) -> Result<String> {
    let chart = chart_of(&a.chart)?;
    let l = DLamination::from_json(a.chart.polygon, &read(&a.lamination)?)?;
    let r = i_d_q(&chart, &l)?;
    let mut j = r.to_json(&chart.alg, !a.q_one);
    let check = match phi_preimage(&l) {
        Some(al) => serde_json::Value::Bool(pi_q(&chart.alg, &r)? == i_a_q(&chart, &al)?.value),
        None => serde_json::Value::Null,
    };
    j["pi_check"] = check;
    Ok(serde_json::to_string_pretty(&j).expect("serializable"))
}

pub fn structure(a: &PairArgs) -> Result<String> {
    let chart = chart_of(&a.chart)?;
    let n = a.chart.polygon;
    let (s1, s2) = two(&a.lamination)?;
    let (l1, l2) = (ALamination::from_json(n, &s1)?, ALamination::from_json(n, &s2)?);
    let sc = structure_constants(&l1, &l2)?;
    let reconstructed = sc.reconstruct(&chart)? == i_a_q(&chart, &l1)?.value.try_mul(&i_a_q(&chart, &l2)?.value)?;
    let terms: Vec<_> = sc
        .terms
        .iter()
        .map(|(l, c)| serde_json::json!({"lamination": serde_json::from_str::<serde_json::Value>(&l.to_json()).expect("json"), "c": c.to_q_string()}))
        .collect();
    let j = serde_json::json!({
        "chart": chart.tri().chart_spec(),
        "terms": terms,
        "all_in_q_ring": sc.all_in_q_ring(),
        "all_nonnegative": sc.all_nonnegative(),
        "reconstruction": reconstructed,
    });
    Ok(serde_json::to_string_pretty(&j).expect("serializable"))
}

pub fn product(a: &PairArgs) -> Result<String> {
    let chart = chart_of(&a.chart)?;
    let n = a.chart.polygon;
    let (s1, s2) = two(&a.lamination)?;
    let (k, l) = (Multicurve::from_json(n, &s1)?, Multicurve::from_json(n, &s2)?);
    let p = superpose(&k, &l);
    let v = p.to_chart(&chart)?;
    let labels = chart.alg.base_labels();
    let value = if a.q_one {
        let c = crate::torus::TorusElement::from_terms(
            &v.form().clone(),
            v.eval_at_one().into_iter().map(|(e, c)| (e, crate::coeff::OmegaLaurent::from_int(c))),
        );
        c.to_text(&labels, false)
    } else {
        v.to_text(&labels, true)
    };
    Ok(format!("skein: {p}\nchart: {value}"))
}

pub fn verify(a: &VerifyArgs) -> Result<(String, bool)> {
    let o = Options { n: a.n, order: a.order, weights: a.weights, seed: a.seed };
    let reports = verify::run_suites(&a.suites, &o, a.jobs)?;
    let ok = reports.iter().all(verify::SuiteReport::passed);
    let text = if a.json {
        let j: Vec<_> = reports.iter().map(verify::SuiteReport::to_json).collect();
        serde_json::to_string_pretty(&serde_json::json!({"passed": ok, "suites": j})).expect("serializable")
    } else {
        let mut s: String = reports.iter().map(verify::SuiteReport::to_text).collect();
        s.push_str(if ok { "PASS" } else { "FAIL" });
        s
    };
    Ok((text, ok))
}

fn usage_error(e: &Error) -> String {
    let kind = format!("{e:?}");
    let kind = kind.split('(').next().unwrap_or("Error").to_string();
    serde_json::to_string(&serde_json::json!({"error": kind, "detail": e.to_string()})).expect("serializable")
}

/// Runs a parsed command; errors become exit code 2 with a JSON report.
pub fn execute(cli: &Cli) -> Outcome {
    let output = match &cli.command {
        Command::ComputeIa(a) | Command::ComputeId(a) => &a.chart.output,
        Command::Structure(a) | Command::Product(a) => &a.chart.output,
        Command::Verify(a) => &a.output,
    };
    let r = match &cli.command {
        Command::ComputeIa(a) => compute_ia(a).map(|t| (t, true)),
        Command::ComputeId(a) => compute_id(a).map(|t| (t, true)),
        Command::Structure(a) => structure(a).map(|t| (t, true)),
        Command::Product(a) => product(a).map(|t| (t, true)),
        Command::Verify(a) => verify(a),
    };
    match r {
        Err(e) => Outcome { text: usage_error(&e), code: EXIT_USAGE },
        Ok((mut text, ok)) => {
            text.push('\n');
            let code = if ok { EXIT_OK } else { EXIT_FAILED };
            match output {
                Some(p) => match std::fs::write(p, &text) {
                    Ok(()) => Outcome { text: String::new(), code },
                    Err(e) => Outcome { text: usage_error(&Error::Io(format!("{}: {e}", p.display()))), code: EXIT_USAGE },
                },
                None => Outcome { text, code },
            }
        }
    }
}

/// Parses `args` (program name first) and runs; clap usage errors exit 2.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            Outcome { text: e.to_string(), code }
        }
    }
}

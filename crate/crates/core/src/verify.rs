//! Verification suites behind `qdisk verify` and the acceptance tests.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::classical::ClassicalChart;
use crate::cluster::ClusterChart;
use crate::dilog::{self, DoubleSeed};
use crate::double::ChartAlgebras;
use crate::duality::{
    closed_vertex_paths, i_a_q, i_d_q, n_l, pi_q, structure_constants, verify_b_mutation, verify_gsum, verify_ia_properties,
    verify_id_classical, verify_x_mutation,
};
use crate::error::{Error, Result};
use crate::lamination::{
    default_boundary_box, enumerate_alaminations, enumerate_dlaminations, noncrossing_diagonal_sets, phi, ALamination, DLamination,
};
use crate::polygon::{enumerate_triangulations, mutate_matrix, Chord, MarkedDisk, Triangulation};
use crate::skein::{superpose, Multicurve, SkeinElement};
use crate::torus::TorusElement;

/// Outcome of a single exact check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, detail: detail.into() }
    }

    pub fn pass(name: impl Into<String>) -> Self {
        Self::new(name, true, "")
    }

    pub fn fail(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Self::new(name, false, detail)
    }

    /// Turns an error into a failed check.
    pub fn from_result<T>(name: impl Into<String>, r: Result<T>, ok: impl FnOnce(T) -> Check) -> Check {
        match r {
            Ok(x) => ok(x),
            Err(e) => Self::fail(name, e.to_string()),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        if self.detail.is_empty() {
            write!(f, "{tag} {}", self.name)
        } else {
            write!(f, "{tag} {}: {}", self.name, self.detail)
        }
    }
}

/// Checks of one kind, reduced to a count and the failing entries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Group {
    pub name: String,
    pub total: usize,
    pub failures: Vec<Check>,
}

impl Group {
    pub fn from_checks(name: impl Into<String>, checks: Vec<Check>) -> Self {
        let total = checks.len();
        let failures = checks.into_iter().filter(|c| !c.passed).collect();
        Group { name: name.into(), total, failures }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.total > 0
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            write!(f, "PASS {} ({} checks)", self.name, self.total)
        } else if self.total == 0 {
            write!(f, "FAIL {} (no checks ran)", self.name)
        } else {
            write!(f, "FAIL {} ({} of {} failed)", self.name, self.failures.len(), self.total)?;
            for c in self.failures.iter().take(MAX_LISTED_FAILURES) {
                write!(f, "\n  {c}")?;
            }
            Ok(())
        }
    }
}

/// Failing checks printed per group.
pub const MAX_LISTED_FAILURES: usize = 10;

/// Every group of one suite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub groups: Vec<Group>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        !self.groups.is_empty() && self.groups.iter().all(Group::passed)
    }

    pub fn total(&self) -> usize {
        self.groups.iter().map(|g| g.total).sum()
    }

    pub fn failed(&self) -> usize {
        self.groups.iter().map(|g| g.failures.len()).sum()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for g in &self.groups {
            s.push_str(&format!("{}/{g}\n", self.suite));
        }
        let tag = if self.passed() { "PASS" } else { "FAIL" };
        s.push_str(&format!("{tag} {}: {} checks, {} failed\n", self.suite, self.total(), self.failed()));
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "suite": self.suite,
            "passed": self.passed(),
            "checks": self.total(),
            "failed": self.failed(),
            "groups": self.groups.iter().map(|g| serde_json::json!({
                "name": g.name,
                "passed": g.passed(),
                "checks": g.total,
                "failures": g.failures.iter().map(|c| serde_json::json!({"name": c.name, "detail": c.detail})).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Suite names accepted by `qdisk verify`.
pub const SUITES: [&str; 9] = ["mutation", "compat", "skein-oracle", "ia-props", "structure", "dilog", "double", "gsum", "nl"];

/// Parameters shared by the suites; `None` means the suite's own default.
#[derive(Clone, Debug)]
pub struct Options {
    pub n: Option<usize>,
    pub order: usize,
    pub weights: Option<i64>,
    pub seed: u64,
}

impl Default for Options {
    fn default() -> Self {
        Options { n: None, order: dilog::DEFAULT_ORDER, weights: None, seed: DEFAULT_SEED }
    }
}

/// Seed for every sampled check.
pub const DEFAULT_SEED: u64 = 20_240_601;

impl Options {
    fn ns(&self, default: std::ops::RangeInclusive<usize>) -> Vec<usize> {
        match self.n {
            Some(n) => vec![n],
            None => default.collect(),
        }
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }
}

fn range_label(ns: &[usize]) -> String {
    match ns {
        [] => "none".into(),
        [n] => format!("n={n}"),
        _ => format!("n={}..{}", ns[0], ns[ns.len() - 1]),
    }
}

fn triangulations(n: usize) -> Result<Vec<Triangulation>> {
    enumerate_triangulations(n)
}

fn result_check(name: String, r: Result<bool>, detail: &str) -> Check {
    match r {
        Ok(true) => Check::pass(name),
        Ok(false) => Check::fail(name, detail),
        Err(e) => Check::fail(name, e.to_string()),
    }
}

fn flatten(r: Result<Vec<Check>>, name: &str) -> Vec<Check> {
    r.unwrap_or_else(|e| vec![Check::fail(name, e.to_string())])
}

/// Flip involutivity and `eps_{flip(T,k)} = mutate(eps_T, k)`.
pub fn flip_consistency(ns: &[usize]) -> Group {
    let checks = ns
        .iter()
        .flat_map(|&n| flatten(triangulations(n).map(|ts| ts.par_iter().flat_map_iter(flip_checks).collect()), "enumerate"))
        .collect();
    Group::from_checks(format!("flip consistency {}", range_label(ns)), checks)
}

fn flip_checks(t: &Triangulation) -> Vec<Check> {
    let eps = t.epsilon();
    t.mutable_indices()
        .into_iter()
        .map(|k| {
            let name = format!("flip {} in {t}", t.edges()[k]);
            let r = (|| -> Result<bool> {
                let (t2, perm) = t.flip_at(k)?;
                let (t3, _) = t2.flip_at(perm[k])?;
                let m = mutate_matrix(&eps, k);
                let e2 = t2.epsilon();
                let same = (0..t.num_edges()).all(|i| (0..t.num_edges()).all(|j| m.get(i, j) == e2.get(perm[i], perm[j])));
                Ok(t3 == *t && same)
            })();
            result_check(name, r, "flip is not an involution or the exchange matrix does not mutate")
        })
        .collect()
}

/// `B^t Lambda = (4 Id | 0)` for every triangulation.
pub fn compatibility(ns: &[usize]) -> Group {
    let checks = ns
        .iter()
        .flat_map(|&n| {
            flatten(
                triangulations(n).map(|ts| {
                    ts.par_iter()
                        .map(|t| Check::new(format!("compatibility {t}"), t.exchange_data().is_compatible(), "B^t Lambda is not (4 Id | 0)"))
                        .map(|c| if c.passed { Check::pass(c.name) } else { c })
                        .collect()
                }),
                "enumerate",
            )
        })
        .collect();
    Group::from_checks(format!("compatibility {}", range_label(ns)), checks)
}

/// Every cluster variable, expanded in every chart, has `lambda`-shift 0, `F`
/// with constant term 1 and coefficients in `Z>=0[w^4, w^-4]`.
pub fn f_polynomial_positivity(ns: &[usize]) -> Group {
    let mut checks = Vec::new();
    for &n in ns {
        let ts = match triangulations(n) {
            Ok(ts) => ts,
            Err(e) => {
                checks.push(Check::fail("enumerate", e.to_string()));
                continue;
            }
        };
        let diags = MarkedDisk { n }.diagonals();
        let per: Vec<Check> = ts
            .par_iter()
            .flat_map_iter(|t| {
                let chart = ClusterChart::new(t);
                diags
                    .iter()
                    .map(|c| {
                        let name = format!("F-polynomial of {c} in {t}");
                        let r = chart.as_ref().map_err(Clone::clone).and_then(|ch| ch.f_polynomial(c));
                        match r {
                            Ok(f) if f.lambda_shift == 0 && f.constant_term_is_one() && f.is_polynomial() && f.coefficients_positive() => {
                                Check::pass(name)
                            }
                            Ok(f) => Check::fail(
                                name,
                                format!(
                                    "shift {}, constant term one {}, polynomial {}, positive {}",
                                    f.lambda_shift,
                                    f.constant_term_is_one(),
                                    f.is_polynomial(),
                                    f.coefficients_positive()
                                ),
                            ),
                            Err(e) => Check::fail(name, e.to_string()),
                        }
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
        checks.extend(per);
    }
    Group::from_checks(format!("F-polynomials {}", range_label(ns)), checks)
}

/// Commutation of the `X_j = M_T(x_j)` in the base chart and of `X_j`, `B_j`
/// in the double.
pub fn commutation_relations(ns: &[usize]) -> Group {
    let mut checks = Vec::new();
    for &n in ns {
        let ts = match triangulations(n) {
            Ok(ts) => ts,
            Err(e) => {
                checks.push(Check::fail("enumerate", e.to_string()));
                continue;
            }
        };
        let per: Vec<Check> = ts.par_iter().flat_map_iter(|t| flatten(commutation_checks(t), "chart")).collect();
        checks.extend(per);
    }
    Group::from_checks(format!("commutation relations {}", range_label(ns)), checks)
}

fn commutation_checks(t: &Triangulation) -> Result<Vec<Check>> {
    let alg = ChartAlgebras::new(t)?;
    let jn = alg.num_internal();
    let edge = |j: usize| t.edges()[alg.data.mutable[j]];
    let qc = |a: &TorusElement, b: &TorusElement, e: i64| -> Result<bool> { Ok(a.try_mul(b)? == b.try_mul(a)?.shift(8 * e as i32)) };
    let mut out = Vec::new();
    for i in 0..jn {
        for j in 0..jn {
            let e = alg.eps_j(i, j);
            let xi = alg.from_x_chart(&alg.x_gen(i));
            let xj = alg.from_x_chart(&alg.x_gen(j));
            out.push(result_check(format!("X{}X{} base chart in {t}", edge(i), edge(j)), qc(&xi, &xj, e), "X_i X_j != q^{2 eps} X_j X_i"));
            let (dxi, dxj) = (alg.double_x(i), alg.double_x(j));
            let (dbi, dbj) = (alg.double_b(i), alg.double_b(j));
            out.push(result_check(format!("X{}X{} double in {t}", edge(i), edge(j)), qc(&dxi, &dxj, e), "X_i X_j != q^{2 eps} X_j X_i"));
            out.push(result_check(format!("B{}B{} double in {t}", edge(i), edge(j)), qc(&dbi, &dbj, 0), "B_i B_j != B_j B_i"));
            let d = i64::from(i == j);
            out.push(result_check(format!("X{}B{} double in {t}", edge(i), edge(j)), qc(&dxi, &dbj, d), "X_i B_j != q^{2 delta} B_j X_i"));
        }
    }
    Ok(out)
}

/// The stated transformation of `X` and `B` coordinates under every flip.
pub fn transformation_formulas(ns: &[usize]) -> Group {
    let mut checks = Vec::new();
    for &n in ns {
        let ts = match triangulations(n) {
            Ok(ts) => ts,
            Err(e) => {
                checks.push(Check::fail("enumerate", e.to_string()));
                continue;
            }
        };
        let per: Vec<Check> = ts
            .par_iter()
            .flat_map_iter(|t| {
                flatten(
                    (|| {
                        let chart = ClusterChart::new(t)?;
                        let mut v = Vec::new();
                        for k in 0..chart.alg.num_internal() {
                            v.extend(verify_x_mutation(&chart, k)?);
                            v.extend(verify_b_mutation(&chart, k)?);
                        }
                        Ok(v)
                    })(),
                    "chart",
                )
            })
            .collect();
        checks.extend(per);
    }
    Group::from_checks(format!("X and B transformation formulas {}", range_label(ns)), checks)
}

/// Multicurves with diagonal weights at most `bound`, optionally carrying one
/// boundary arc of weight 1.
pub fn oracle_multicurves(n: usize, bound: i64) -> Result<Vec<Multicurve>> {
    let mut out = Vec::new();
    let boundary = MarkedDisk { n }.boundary_edges();
    for set in noncrossing_diagonal_sets(n) {
        let mut ws: Vec<Vec<(Chord, u32)>> = vec![Vec::new()];
        for c in &set {
            ws = ws.into_iter().flat_map(|w| (1..=bound as u32).map(move |k| [w.clone(), vec![(*c, k)]].concat())).collect();
        }
        for w in ws {
            out.push(Multicurve::new(n, &w)?);
            for b in &boundary {
                let mut w2 = w.clone();
                w2.push((*b, 1));
                out.push(Multicurve::new(n, &w2)?);
            }
        }
    }
    Ok(out)
}

fn oracle_check(charts: &[ClusterChart], idx: usize, k: &Multicurve, l: &Multicurve) -> Check {
    let chart = &charts[idx % charts.len()];
    let name = format!("[{k}][{l}] in {}", chart.tri());
    let r = (|| -> Result<bool> {
        let lhs = superpose(k, l).to_chart(chart)?;
        let a = SkeinElement::from_multicurve(k.clone()).to_chart(chart)?;
        let b = SkeinElement::from_multicurve(l.clone()).to_chart(chart)?;
        Ok(lhs == a.try_mul(&b)?)
    })();
    result_check(name, r, "skein product differs from the torus product")
}

/// Skein superposition against the torus product, exhaustively or on a sample.
pub fn skein_oracle(n: usize, bound: i64, samples: Option<usize>, seed: u64) -> Group {
    let r = (|| -> Result<Vec<Check>> {
        let ms = oracle_multicurves(n, bound)?;
        let charts = triangulations(n)?.iter().map(ClusterChart::new).collect::<Result<Vec<_>>>()?;
        let pairs: Vec<(usize, usize)> = match samples {
            None => (0..ms.len()).flat_map(|i| (0..ms.len()).map(move |j| (i, j))).collect(),
            Some(s) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (0..s).map(|_| (rng.gen_range(0..ms.len()), rng.gen_range(0..ms.len()))).collect()
            }
        };
        Ok(pairs.par_iter().enumerate().map(|(p, &(i, j))| oracle_check(&charts, p, &ms[i], &ms[j])).collect())
    })();
    let label = match samples {
        None => format!("skein oracle n={n} weights<={bound} exhaustive"),
        Some(s) => format!("skein oracle n={n} weights<={bound} {s} sampled pairs"),
    };
    Group::from_checks(label, flatten(r, "setup"))
}

fn charts_of(n: usize) -> Result<Vec<ClusterChart>> {
    triangulations(n)?.iter().map(ClusterChart::new).collect()
}

fn sample<T: Clone>(items: &[T], k: usize, rng: &mut ChaCha8Rng) -> Vec<T> {
    if items.len() <= k {
        return items.to_vec();
    }
    let mut idx = rand::seq::index::sample(rng, items.len(), k).into_vec();
    idx.sort_unstable();
    idx.into_iter().map(|i| items[i].clone()).collect()
}

/// Positivity, classical limit, star-invariance and highest term of `I_A^q`
/// for laminations in every chart (`samples = None`) or on a sample with
/// rotating charts.
pub fn ia_properties(n: usize, bound: i64, samples: Option<usize>, seed: u64) -> Group {
    let r = (|| -> Result<Vec<Check>> {
        let ls = enumerate_alaminations(n, bound, default_boundary_box(n, bound))?;
        let charts = charts_of(n)?;
        let classical = charts.iter().map(|c| ClassicalChart::new(c.tri())).collect::<Result<Vec<_>>>()?;
        let jobs: Vec<(usize, ALamination)> = match samples {
            None => ls.iter().flat_map(|l| (0..charts.len()).map(move |c| (c, l.clone()))).collect(),
            Some(s) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                sample(&ls, s, &mut rng).into_iter().map(|l| (rng.gen_range(0..charts.len()), l)).collect()
            }
        };
        Ok(jobs.par_iter().flat_map_iter(|(c, l)| verify_ia_properties(&charts[*c], &classical[*c], l)).collect())
    })();
    let label = match samples {
        None => format!("I_A properties n={n} weights<={bound} all charts"),
        Some(s) => format!("I_A properties n={n} weights<={bound} {s} sampled"),
    };
    Group::from_checks(label, flatten(r, "setup"))
}

fn structure_check(chart: &ClusterChart, l: &ALamination, l2: &ALamination) -> Vec<Check> {
    let tag = format!("{l} * {l2}");
    match structure_constants(l, l2) {
        Err(e) => vec![Check::fail(format!("structure constants {tag}"), e.to_string())],
        Ok(sc) => {
            let ring = Check::new(format!("constants in Z[q, q^-1] {tag}"), sc.all_in_q_ring() && !sc.terms.is_empty(), "a constant is outside Z[q, q^-1]");
            let rec = (|| -> Result<bool> {
                let lhs = sc.reconstruct(chart)?;
                let rhs = i_a_q(chart, l)?.value.try_mul(&i_a_q(chart, l2)?.value)?;
                Ok(lhs == rhs)
            })();
            let rec = result_check(format!("reconstruction {tag} in {}", chart.tri()), rec, "sum of c I_A differs from I_A I_A");
            vec![if ring.passed { Check::pass(ring.name) } else { ring }, rec]
        }
    }
}

/// Structure constants: finitely many, in `Z[q, q^-1]`, and reconstructing the product.
pub fn structure(n: usize, bound: i64, samples: Option<usize>, seed: u64) -> Group {
    let r = (|| -> Result<Vec<Check>> {
        let ls = enumerate_alaminations(n, bound, default_boundary_box(n, bound))?;
        let charts = charts_of(n)?;
        let pairs: Vec<(ALamination, ALamination)> = match samples {
            None => ls.iter().flat_map(|a| ls.iter().map(move |b| (a.clone(), b.clone()))).collect(),
            Some(s) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (0..s).map(|_| (ls[rng.gen_range(0..ls.len())].clone(), ls[rng.gen_range(0..ls.len())].clone())).collect()
            }
        };
        Ok(pairs
            .par_iter()
            .enumerate()
            .flat_map_iter(|(p, (a, b))| structure_check(&charts[p % charts.len()], a, b))
            .collect())
    })();
    let label = match samples {
        None => format!("structure constants n={n} weights<={bound} all pairs"),
        Some(s) => format!("structure constants n={n} weights<={bound} {s} sampled pairs"),
    };
    Group::from_checks(label, flatten(r, "setup"))
}

/// A front curve crossing a back curve, if any.
pub fn front_back_crossing(d: &DLamination) -> Option<(Chord, Chord)> {
    d.front().keys().find_map(|a| d.back().keys().find(|b| a.crosses(b)).map(|b| (*a, *b)))
}

fn nl_check(charts: &[ClusterChart], d: &DLamination) -> Check {
    let vals: Result<Vec<i64>> = charts.iter().map(|c| n_l(c, d)).collect();
    let name = format!("N_l of {d} over {} charts", charts.len());
    match vals {
        Ok(v) if v.windows(2).all(|w| w[0] == w[1]) => Check::pass(name),
        Ok(v) => {
            let why = match front_back_crossing(d) {
                Some((a, b)) => format!("; front {a} crosses back {b}"),
                None => String::new(),
            };
            Check::fail(name, format!("values {v:?}{why}"))
        }
        Err(e) => Check::fail(name, e.to_string()),
    }
}

/// `N_l` compared across every chart of the polygon on sampled `D`-laminations;
/// with `noncrossing` only those whose front and back curves do not cross.
pub fn nl_independence(n: usize, bound: i64, samples: usize, seed: u64, noncrossing: bool) -> Group {
    let r = (|| -> Result<Vec<Check>> {
        let mut ds = enumerate_dlaminations(n, bound)?;
        if noncrossing {
            ds.retain(|d| front_back_crossing(d).is_none());
        }
        let charts = charts_of(n)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Ok(sample(&ds, samples, &mut rng).par_iter().map(|d| nl_check(&charts, d)).collect())
    })();
    let which = if noncrossing { "without front/back crossings " } else { "" };
    Group::from_checks(format!("N_l chart independence n={n} weights<={bound} {which}{samples} sampled"), flatten(r, "setup"))
}

/// For every ordered pair of arcs, `Lambda_T(g_a, g_b)` is the same in all
/// charts exactly when `a` and `b` do not cross.
pub fn nl_pair_dichotomy(n: usize) -> Group {
    let r = (|| -> Result<Vec<Check>> {
        let charts = charts_of(n)?;
        let arcs = MarkedDisk::new(n)?.all_chords();
        let gs = charts.iter().map(|c| arcs.iter().map(|a| Ok(c.f_polynomial(a)?.g)).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
        let mut out = Vec::new();
        for (i, a) in arcs.iter().enumerate() {
            for (j, b) in arcs.iter().enumerate() {
                let vals: Vec<i64> = charts.iter().zip(&gs).map(|(c, g)| c.alg.base.pair(&g[i], &g[j])).collect();
                let constant = vals.windows(2).all(|w| w[0] == w[1]);
                let cross = a.crosses(b);
                out.push(Check::new(
                    format!("Lambda(g_{a}, g_{b}) crossing={cross}"),
                    constant != cross,
                    format!("values {vals:?}"),
                ));
            }
        }
        Ok(out.into_iter().map(|c| if c.passed { Check::pass(c.name) } else { c }).collect())
    })();
    Group::from_checks(format!("pairwise Lambda(g, g) chart dependence iff crossing n={n}"), flatten(r, "setup"))
}

/// `pi^q(I_D^q(phi(l))) = I_A^q(l)` with `N_l = 0`, and the `w = 1` value of
/// `I_D^q(phi(l))`, in every chart.
pub fn commutative_diagram(n: usize, bound: i64) -> Group {
    let r = (|| -> Result<Vec<Check>> {
        let ls = enumerate_alaminations(n, bound, default_boundary_box(n, bound))?;
        let charts = charts_of(n)?;
        let classical = charts.iter().map(|c| ClassicalChart::new(c.tri())).collect::<Result<Vec<_>>>()?;
        let jobs: Vec<(usize, &ALamination)> = ls.iter().flat_map(|l| (0..charts.len()).map(move |c| (c, l))).collect();
        Ok(jobs
            .par_iter()
            .flat_map_iter(|&(c, l)| {
                let chart = &charts[c];
                let tag = format!("{l} in {}", chart.tri());
                let r = (|| -> Result<(bool, bool)> {
                    let d = phi(l)?;
                    let id = i_d_q(chart, &d)?;
                    let diagram = id.n_l == 0 && pi_q(&chart.alg, &id)? == i_a_q(chart, l)?.value;
                    Ok((diagram, verify_id_classical(chart, &classical[c], &d, &id)?))
                })();
                match r {
                    Ok((a, b)) => vec![
                        Check::new(format!("pi I_D phi = I_A {tag}"), a, "diagram does not commute"),
                        Check::new(format!("I_D at w=1 {tag}"), b, "w = 1 value differs from the commutative evaluation"),
                    ],
                    Err(e) => vec![Check::fail(format!("I_D {tag}"), e.to_string())],
                }
                .into_iter()
                .map(|c| if c.passed { Check::pass(c.name) } else { c })
            })
            .collect())
    })();
    Group::from_checks(format!("commutative diagram n={n} weights<={bound} all charts"), flatten(r, "setup"))
}

/// The `w = 1` value of `I_D^q` on sampled `D`-laminations.
pub fn id_classical(n: usize, bound: i64, samples: usize, seed: u64) -> Group {
    let r = (|| -> Result<Vec<Check>> {
        let ds = enumerate_dlaminations(n, bound)?;
        let charts = charts_of(n)?;
        let classical = charts.iter().map(|c| ClassicalChart::new(c.tri())).collect::<Result<Vec<_>>>()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let picked: Vec<(usize, DLamination)> =
            sample(&ds, samples, &mut rng).into_iter().map(|d| (rng.gen_range(0..charts.len()), d)).collect();
        Ok(picked
            .par_iter()
            .map(|(c, d)| {
                let name = format!("I_D at w=1 {d} in {}", charts[*c].tri());
                let r = i_d_q(&charts[*c], d).and_then(|id| verify_id_classical(&charts[*c], &classical[*c], d, &id));
                result_check(name, r, "w = 1 value differs from the commutative evaluation")
            })
            .collect())
    })();
    Group::from_checks(format!("I_D classical limit n={n} {samples} sampled"), flatten(r, "setup"))
}

/// Alternating g-vector sums along closed vertex paths lie in the lattice of
/// `epsilon`-rows, in every chart.
pub fn gsum_paths(n: usize, max_len: usize) -> Group {
    let r = (|| -> Result<Vec<Check>> {
        let charts = charts_of(n)?;
        let paths: Vec<Vec<usize>> = (1..=max_len / 2).flat_map(|h| closed_vertex_paths(n, 2 * h)).collect();
        Ok(charts
            .par_iter()
            .flat_map_iter(|chart| {
                paths.iter().map(move |p| {
                    let name = format!("path {p:?} in {}", chart.tri());
                    match verify_gsum(chart, p) {
                        Ok(_) => Check::pass(name),
                        Err(e) => Check::fail(name, e.to_string()),
                    }
                })
            })
            .collect())
    })();
    Group::from_checks(format!("g-vector sums n={n} paths<={max_len}"), flatten(r, "setup"))
}

/// Functional equations, then every dilogarithm identity on the full seed and
/// every rank-2 subsystem of each chart.
pub fn dilog_identities(ns: &[usize], order: usize) -> Vec<Group> {
    let mut groups = vec![Group::from_checks(
        format!("functional equations order {}", dilog::FUNCTIONAL_EQUATION_ORDER),
        dilog::verify_functional_equations(dilog::FUNCTIONAL_EQUATION_ORDER),
    )];
    for &n in ns {
        let r = (|| -> Result<Vec<(DoubleSeed, usize)>> {
            let mut jobs = Vec::new();
            for t in triangulations(n)? {
                let s = DoubleSeed::from_chart(&ChartAlgebras::new(&t)?)?;
                for k in 0..s.rank() {
                    jobs.push((s.clone(), k));
                }
                for i in 0..s.rank() {
                    for j in i + 1..s.rank() {
                        let sub = s.subsystem(&[i, j])?;
                        jobs.push((sub.clone(), 0));
                        jobs.push((sub, 1));
                    }
                }
            }
            Ok(jobs)
        })();
        let checks = match r {
            Ok(jobs) => jobs.par_iter().flat_map_iter(|(s, k)| dilog::verify_seed(s, *k, order)).collect(),
            Err(e) => vec![Check::fail("setup", e.to_string())],
        };
        groups.push(Group::from_checks(format!("dilogarithm identities n={n} order {order} with tail check at {}", order + dilog::TAIL_MARGIN), checks));
    }
    groups
}

/// Runs one named suite.
pub fn run_suite(name: &str, o: &Options) -> Result<SuiteReport> {
    let w = |d: i64| o.weights.unwrap_or(d);
    let groups = match name {
        "mutation" => vec![flip_consistency(&o.ns(4..=7)), transformation_formulas(&o.ns(4..=6))],
        "compat" => vec![compatibility(&o.ns(4..=8)), f_polynomial_positivity(&o.ns(4..=8))],
        "double" => {
            let ns = o.ns(4..=7);
            let mut g = vec![commutation_relations(&ns)];
            let n = o.n.unwrap_or(5);
            g.push(commutative_diagram(n, w(2)));
            g.push(id_classical(n, 2, ID_SAMPLES, o.seed));
            g
        }
        "skein-oracle" => match o.n {
            Some(n) if n <= 5 => vec![skein_oracle(n, w(2), None, o.seed)],
            Some(n) => vec![skein_oracle(n, w(2), Some(ORACLE_SAMPLES), o.seed)],
            None => vec![
                skein_oracle(4, w(2), None, o.seed),
                skein_oracle(5, w(2), None, o.seed),
                skein_oracle(6, w(2), Some(ORACLE_SAMPLES), o.seed),
            ],
        },
        "ia-props" => match o.n {
            Some(n) if n <= 5 => vec![ia_properties(n, w(2), None, o.seed)],
            Some(n) => vec![ia_properties(n, w(2), Some(IA_SAMPLES), o.seed)],
            None => vec![ia_properties(5, w(2), None, o.seed), ia_properties(6, w(2), Some(IA_SAMPLES), o.rng(6).gen())],
        },
        "structure" => {
            let n = o.n.unwrap_or(5);
            vec![structure(n, w(1), None, o.seed), structure(n, 2, Some(STRUCTURE_SAMPLES), o.seed)]
        }
        "dilog" => dilog_identities(&o.ns(5..=6), o.order),
        "gsum" => o.ns(5..=6).into_iter().map(|n| gsum_paths(n, 6)).collect(),
        "nl" => o
            .ns(5..=6)
            .into_iter()
            .flat_map(|n| {
                let b = w(if n <= 5 { 2 } else { 1 });
                [
                    nl_independence(n, b, NL_SAMPLES, o.rng(n as u64).gen(), false),
                    nl_pair_dichotomy(n),
                    nl_independence(n, b, NL_SAMPLES, o.rng(n as u64).gen(), true),
                ]
            })
            .collect(),
        _ => return Err(Error::InvalidInput(format!("unknown suite {name}; expected one of {}", SUITES.join(", ")))),
    };
    Ok(SuiteReport { suite: name.to_string(), groups })
}

/// Sampled pairs for the hexagon skein oracle.
pub const ORACLE_SAMPLES: usize = 250;
/// Sampled hexagon laminations for the `I_A` properties.
pub const IA_SAMPLES: usize = 120;
/// Sampled weight-2 pairs for the structure constants.
pub const STRUCTURE_SAMPLES: usize = 60;
/// Sampled `D`-laminations for the classical limit of `I_D^q`.
pub const ID_SAMPLES: usize = 120;
/// Sampled `D`-laminations per polygon for `N_l`.
pub const NL_SAMPLES: usize = 120;

/// Runs suites on a pool of `jobs` threads; reports come back in input order.
pub fn run_suites(names: &[String], o: &Options, jobs: usize) -> Result<Vec<SuiteReport>> {
    for n in names {
        if !SUITES.contains(&n.as_str()) {
            return Err(Error::InvalidInput(format!("unknown suite {n}; expected one of {}", SUITES.join(", "))));
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
    pool.install(|| names.par_iter().map(|n| run_suite(n, o)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(ws: &[(usize, usize, i64)]) -> Vec<(Chord, i64)> {
        ws.iter().map(|&(a, b, x)| (Chord::new(a, b).unwrap(), x)).collect()
    }

    #[test]
    fn group_counts_and_display() {
        let g = Group::from_checks("g", vec![Check::pass("a"), Check::fail("b", "bad")]);
        assert_eq!((g.total, g.failures.len(), g.passed()), (2, 1, false));
        assert_eq!(g.to_string(), "FAIL g (1 of 2 failed)\n  FAIL b: bad");
        assert!(!Group::from_checks("empty", vec![]).passed());
        assert_eq!(Group::from_checks("ok", vec![Check::pass("a")]).to_string(), "PASS ok (1 checks)");
    }

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(run_suite("nope", &Options::default()).is_err());
        assert!(run_suites(&["mutation".into(), "nope".into()], &Options::default(), 1).is_err());
    }

    #[test]
    fn square_suites_pass() {
        let o = Options { n: Some(4), ..Options::default() };
        for s in ["mutation", "compat", "skein-oracle", "dilog"] {
            let r = run_suite(s, &o).unwrap();
            assert!(r.passed(), "{}", r.to_text());
        }
    }

    #[test]
    fn reports_do_not_depend_on_thread_count() {
        let o = Options { n: Some(5), ..Options::default() };
        let names: Vec<String> = ["gsum", "ia-props", "nl"].iter().map(|s| s.to_string()).collect();
        assert_eq!(run_suites(&names, &o, 1).unwrap(), run_suites(&names, &o, 3).unwrap());
    }

    #[test]
    fn n_l_changes_across_charts_when_front_crosses_back() {
        let d = DLamination::new(5, &w(&[(0, 1, 1), (0, 2, 1), (3, 4, 2)]), &w(&[(0, 4, 2), (1, 3, 1), (2, 3, 1)])).unwrap();
        assert_eq!(front_back_crossing(&d), Some((Chord::new(0, 2).unwrap(), Chord::new(1, 3).unwrap())));
        let vals: Vec<i64> = charts_of(5).unwrap().iter().map(|c| n_l(c, &d).unwrap()).collect();
        let mut distinct = vals.clone();
        distinct.sort_unstable();
        distinct.dedup();
        assert_eq!(distinct, vec![0, 4]);
        let c = nl_check(&charts_of(5).unwrap(), &d);
        assert!(!c.passed && c.detail.contains("front 0-2 crosses back 1-3"));
    }

    #[test]
    fn oracle_multicurves_of_the_square() {
        // empty + 2 diagonals x 2 weights, each bare or with one of 4 boundary arcs
        assert_eq!(oracle_multicurves(4, 2).unwrap().len(), 5 * 5);
    }
}

//! Runs the twelve acceptance criteria and prints one PASS/FAIL line each.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use qdisk_core::polygon::catalan;
use qdisk_core::verify::{self, Group, DEFAULT_SEED};

struct Criterion {
    id: usize,
    title: &'static str,
    limit: Option<Duration>,
    run: fn() -> Vec<Group>,
    expect: Expect,
}

#[derive(PartialEq)]
enum Expect {
    Pass,
    /// Fails on the full sample; each failure must name a front/back crossing
    /// and the listed groups must pass.
    KnownCounterexample { must_pass: &'static [usize] },
}

fn secs(s: u64) -> Option<Duration> {
    Some(Duration::from_secs(s))
}

fn criteria() -> Vec<Criterion> {
    vec![
        Criterion {
            id: 1,
            title: "flip involutive and exchange matrices mutate, n=4..7",
            limit: secs(5),
            run: || vec![verify::flip_consistency(&[4, 5, 6, 7])],
            expect: Expect::Pass,
        },
        Criterion {
            id: 2,
            title: "B^t Lambda = (4 Id | 0), n<=8",
            limit: secs(10),
            run: || vec![verify::compatibility(&[4, 5, 6, 7, 8])],
            expect: Expect::Pass,
        },
        Criterion {
            id: 3,
            title: "X and double-torus commutation relations, n<=7",
            limit: None,
            run: || vec![verify::commutation_relations(&[4, 5, 6, 7])],
            expect: Expect::Pass,
        },
        Criterion {
            id: 4,
            title: "X and B transformation formulas under every flip, n=4..6",
            limit: secs(60),
            run: || vec![verify::transformation_formulas(&[4, 5, 6])],
            expect: Expect::Pass,
        },
        Criterion {
            id: 5,
            title: "skein superposition equals torus product",
            limit: None,
            run: || {
                vec![
                    verify::skein_oracle(4, 2, None, DEFAULT_SEED),
                    verify::skein_oracle(5, 2, None, DEFAULT_SEED),
                    verify::skein_oracle(6, 2, Some(verify::ORACLE_SAMPLES), DEFAULT_SEED),
                ]
            },
            expect: Expect::Pass,
        },
        Criterion {
            id: 6,
            title: "I_A^q positive, classical limit, star-invariant, highest term",
            limit: secs(300),
            run: || {
                vec![
                    verify::ia_properties(5, 2, None, DEFAULT_SEED),
                    verify::ia_properties(6, 2, Some(verify::IA_SAMPLES), DEFAULT_SEED),
                ]
            },
            expect: Expect::Pass,
        },
        Criterion {
            id: 7,
            title: "structure constants finite, in Z[q^+-1], reconstruct the product",
            limit: None,
            run: || {
                vec![
                    verify::structure(5, 1, None, DEFAULT_SEED),
                    verify::structure(5, 2, Some(verify::STRUCTURE_SAMPLES), DEFAULT_SEED),
                ]
            },
            expect: Expect::Pass,
        },
        Criterion {
            id: 8,
            title: "quantum dilogarithm identities and mutation closed forms",
            limit: None,
            run: || verify::dilog_identities(&[5, 6], 8),
            expect: Expect::Pass,
        },
        Criterion {
            id: 9,
            title: "N_l independent of the chart",
            limit: None,
            run: || {
                vec![
                    verify::nl_independence(5, 2, verify::NL_SAMPLES, DEFAULT_SEED, false),
                    verify::nl_independence(6, 1, verify::NL_SAMPLES, DEFAULT_SEED, false),
                    verify::nl_pair_dichotomy(5),
                    verify::nl_pair_dichotomy(6),
                    verify::nl_independence(5, 2, verify::NL_SAMPLES, DEFAULT_SEED, true),
                    verify::nl_independence(6, 1, verify::NL_SAMPLES, DEFAULT_SEED, true),
                ]
            },
            expect: Expect::KnownCounterexample { must_pass: &[2, 3, 4, 5] },
        },
        Criterion {
            id: 10,
            title: "pi^q I_D^q phi = I_A^q and classical limit of I_D^q",
            limit: None,
            run: || vec![verify::commutative_diagram(5, 2), verify::id_classical(5, 2, verify::ID_SAMPLES, DEFAULT_SEED)],
            expect: Expect::Pass,
        },
        Criterion {
            id: 11,
            title: "g-vector sums on closed vertex paths of length <=6",
            limit: None,
            run: || vec![verify::gsum_paths(5, 6), verify::gsum_paths(6, 6)],
            expect: Expect::Pass,
        },
        Criterion {
            id: 12,
            title: "F-polynomials: shift 0, constant term 1, positive, n<=8",
            limit: secs(120),
            run: || vec![verify::f_polynomial_positivity(&[4, 5, 6, 7, 8])],
            expect: Expect::Pass,
        },
    ]
}

fn main() -> ExitCode {
    let mut unexpected = Vec::new();
    for c in criteria() {
        let start = Instant::now();
        let groups = (c.run)();
        let elapsed = start.elapsed();
        let checks: usize = groups.iter().map(|g| g.total).sum();
        let failed: usize = groups.iter().map(|g| g.failures.len()).sum();
        let in_time = c.limit.map_or(true, |l| elapsed <= l);
        let passed = groups.iter().all(Group::passed) && in_time;
        let limit = c.limit.map(|l| format!(" limit {}s", l.as_secs())).unwrap_or_default();
        println!(
            "{} {:>2} {} ({checks} checks, {failed} failed, {:.2}s{limit})",
            if passed { "PASS" } else { "FAIL" },
            c.id,
            c.title,
            elapsed.as_secs_f64()
        );
        for g in &groups {
            println!("       {g}");
        }
        if c.id == 2 {
            let n8 = groups[0].total - (4..=7).map(|n| catalan(n - 2) as usize).sum::<usize>();
            if n8 != catalan(6) as usize {
                unexpected.push(format!("criterion 2 counted {n8} octagon triangulations"));
            }
        }
        match c.expect {
            Expect::Pass if !passed => unexpected.push(format!("criterion {} failed", c.id)),
            Expect::Pass => {}
            Expect::KnownCounterexample { must_pass } => {
                if passed {
                    unexpected.push(format!("criterion {} passed but a counterexample was expected", c.id));
                }
                let explained = groups.iter().flat_map(|g| &g.failures).all(|f| f.detail.contains("crosses back"));
                if !explained {
                    unexpected.push(format!("criterion {} has a failure without a front/back crossing", c.id));
                }
                if !must_pass.iter().all(|&i| groups[i].passed()) {
                    unexpected.push(format!("criterion {} diagnostic groups failed", c.id));
                }
            }
        }
    }
    if unexpected.is_empty() {
        println!("acceptance: every outcome as recorded");
        ExitCode::SUCCESS
    } else {
        for u in &unexpected {
            println!("unexpected: {u}");
        }
        ExitCode::FAILURE
    }
}

use std::path::PathBuf;
use std::process::Command;

use qdisk_core::cluster::ClusterChart;
use qdisk_core::duality::i_a_q;
use qdisk_core::lamination::{default_boundary_box, enumerate_alaminations, phi, ALamination};
use qdisk_core::polygon::{catalan, Triangulation};

fn qdisk(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_qdisk")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn file(name: &str, body: &str) -> String {
    let p = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

fn pentagon_diagonal() -> ALamination {
    enumerate_alaminations(5, 1, default_boundary_box(5, 1))
        .unwrap()
        .into_iter()
        .find(|l| l.diagonals().len() == 1)
        .unwrap()
}

#[test]
fn empty_lamination_prints_one() {
    let f = file("empty_a.json", r#"{"curves":[]}"#);
    let (code, out, _) = qdisk(&["compute-ia", "--polygon", "5", "--lamination", &f]);
    assert_eq!((code, out.as_str()), (0, "1\n"));
    let g = file("empty_d.json", r#"{"front":[],"back":[]}"#);
    let (code, out, _) = qdisk(&["compute-id", "--polygon", "5", "--lamination", &g]);
    assert_eq!(code, 0);
    let j: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(j["n_l"], 0);
    assert_eq!(j["numerator"], "1");
}

#[test]
fn compute_ia_matches_library() {
    let l = pentagon_diagonal();
    let f = file("diag_a.json", &l.to_json());
    let t = Triangulation::parse_chart(5, "0-2,0-3").unwrap();
    let chart = ClusterChart::new(&t).unwrap();
    let r = i_a_q(&chart, &l).unwrap();
    let (code, out, _) = qdisk(&["compute-ia", "--polygon", "5", "--chart", "0-2,0-3", "--lamination", &f]);
    assert_eq!(code, 0);
    assert_eq!(out.trim_end(), r.to_text(&chart.alg, true));
    let (code, out, _) = qdisk(&["compute-ia", "--polygon", "5", "--chart", "0-2,0-3", "--lamination", &f, "--q-one"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim_end(), r.classical_text(&chart.alg));
    assert!(!out.contains('q') && !out.contains("w^"), "no quantum parameter at q = 1: {out}");
}

#[test]
fn compute_id_on_phi_image_passes_pi_check() {
    let d = phi(&pentagon_diagonal()).unwrap();
    let f = file("phi_d.json", &d.to_json());
    let (code, out, _) = qdisk(&["compute-id", "--polygon", "5", "--chart", "0-2,2-4", "--lamination", &f]);
    assert_eq!(code, 0);
    let j: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(j["pi_check"], true);
    assert_eq!(j["n_l"], 0);
    for den in j["denominators"].as_array().unwrap() {
        assert!(den["f"].as_str().unwrap().starts_with('1'), "constant term first: {den}");
    }
}

#[test]
fn verify_compat_counts_octagon_triangulations() {
    let (code, out, _) = qdisk(&["verify", "compat", "--n", "8"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains(&format!("PASS compatibility n=8 ({} checks)", catalan(6))), "{out}");
    assert!(out.trim_end().ends_with("PASS"));
}

#[test]
fn verify_dilog_passes() {
    let (code, out, _) = qdisk(&["verify", "dilog", "--order", "8", "--n", "5"]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn verify_failure_exits_one() {
    let (code, out, _) = qdisk(&["verify", "nl", "--n", "5"]);
    assert_eq!(code, 1);
    assert!(out.contains("crosses back"));
}

#[test]
fn usage_errors_exit_two() {
    let (code, _, err) = qdisk(&["verify", "nonsense"]);
    assert_eq!(code, 2);
    assert!(err.contains("unknown suite"));
    let (code, _, _) = qdisk(&["frobnicate"]);
    assert_eq!(code, 2);
    let f = file("empty_a2.json", r#"{"curves":[]}"#);
    let (code, _, err) = qdisk(&["compute-ia", "--polygon", "5", "--chart", "0-2,1-3", "--lamination", &f]);
    assert_eq!(code, 2);
    let j: serde_json::Value = serde_json::from_str(&err).unwrap();
    assert!(j["error"].is_string() && j["detail"].is_string());
    let bad = file("bad_a.json", r#"{"curves":[{"chord":[0,2],"w":1}]}"#);
    let (code, _, err) = qdisk(&["compute-ia", "--polygon", "5", "--lamination", &bad]);
    assert_eq!(code, 2);
    assert!(err.contains("InvalidLamination"), "{err}");
}

#[test]
fn output_is_independent_of_jobs() {
    let a = qdisk(&["verify", "mutation", "gsum", "structure", "--n", "5", "--jobs", "1", "--json"]);
    let b = qdisk(&["verify", "mutation", "gsum", "structure", "--n", "5", "--jobs", "4", "--json"]);
    assert_eq!(a.0, 0);
    assert_eq!(a, b);
}

#[test]
fn output_flag_writes_file() {
    let l = file("out_a.json", &pentagon_diagonal().to_json());
    let target = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("ia_out.txt");
    let t = target.to_string_lossy().into_owned();
    let (code, out, _) = qdisk(&["compute-ia", "--polygon", "5", "--lamination", &l, "--output", &t]);
    assert_eq!((code, out.as_str()), (0, ""));
    let (_, direct, _) = qdisk(&["compute-ia", "--polygon", "5", "--lamination", &l]);
    assert_eq!(std::fs::read_to_string(&target).unwrap(), direct);
}

#[test]
fn structure_and_product_commands() {
    let l = file("s_a.json", &pentagon_diagonal().to_json());
    let (code, out, _) = qdisk(&["structure", "--polygon", "5", "--lamination", &l, "--lamination", &l]);
    assert_eq!(code, 0);
    let j: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(j["reconstruction"], true);
    assert_eq!(j["all_in_q_ring"], true);
    let k1 = file("m1.json", r#"{"curves":[{"chord":[0,2],"mult":1}]}"#);
    let k2 = file("m2.json", r#"{"curves":[{"chord":[1,3],"mult":1}]}"#);
    let (code, out, _) = qdisk(&["product", "--polygon", "4", "--chart", "0-2", "--lamination", &k1, "--lamination", &k2]);
    assert_eq!(code, 0);
    assert!(out.starts_with("skein: ") && out.contains("\nchart: "), "{out}");
    let (code, _, _) = qdisk(&["product", "--polygon", "4", "--lamination", &k1]);
    assert_eq!(code, 2);
}

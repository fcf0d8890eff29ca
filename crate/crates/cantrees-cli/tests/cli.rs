use std::collections::BTreeMap;
use std::path::Path;
use std::process::{Command, Output};

use cantrees::bigdp::Stat;
use cantrees::model::{enumerate_all, parameters, Arity};
use cantrees_cli::{compare_rows, sup_distance};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cantrees")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).expect("utf-8")
}

fn golden(name: &str) -> String {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(p).expect("golden file")
}

#[test]
fn count_at_size_four() {
    assert_eq!(stdout(&["count", "-t", "2", "-n", "4"]), "3\n");
}

#[test]
fn sample_single_vertex() {
    assert_eq!(stdout(&["sample", "-t", "2", "-n", "1", "--seed", "7"]), "[1]\n");
}

#[test]
fn sample_is_deterministic() {
    let a = stdout(&["sample", "-t", "3", "-n", "40", "--seed", "11"]);
    assert_eq!(a, stdout(&["sample", "-t", "3", "-n", "40", "--seed", "11"]));
}

#[test]
fn golden_csv_outputs() {
    let cases: [(&[&str], &str); 6] = [
        (&["dist", "-t", "2", "-n", "8", "--stat", "height"], "dist_t2_n8_height.csv"),
        (&["dist", "-t", "3", "-n", "6", "--stat", "width", "--digits", "12"], "dist_t3_n6_width.csv"),
        (&["dist", "-t", "2", "-n", "7", "--stat", "total_path_length", "--digits", "10"], "dist_t2_n7_total_path_length.csv"),
        (&["series", "-t", "2", "-N", "25"], "series_t2_h25.csv"),
        (&["compare", "-t", "2", "-n", "10", "--stat", "last_level_leaves", "--digits", "12"], "compare_t2_n10_last_level_leaves.csv"),
        (&["width-caps", "-t", "2", "-K", "4", "--n-max", "15"], "width_caps_t2_k4.csv"),
    ];
    for (args, file) in cases {
        assert_eq!(stdout(args), golden(file), "{file}");
    }
}

/// The golden distributions agree with brute-force enumeration.
#[test]
fn golden_counts_match_enumeration() {
    let cases = [(2, 8, "dist_t2_n8_height.csv", Stat::Height), (3, 6, "dist_t3_n6_width.csv", Stat::Width)];
    for (t, n, file, stat) in cases {
        let a = Arity::new(t).unwrap();
        let mut brute: BTreeMap<u64, u64> = BTreeMap::new();
        for p in enumerate_all(a, n) {
            *brute.entry(stat.of(&parameters(&p, a).unwrap())).or_default() += 1;
        }
        let text = golden(file);
        let parsed: BTreeMap<u64, u64> = text
            .lines()
            .skip(1)
            .map(|l| {
                let mut it = l.split(',');
                (it.next().unwrap().parse().unwrap(), it.next().unwrap().parse().unwrap())
            })
            .collect();
        assert_eq!(parsed, brute, "{file}");
    }
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["count", "-t", "2"]).status.code(), Some(2));
    assert_eq!(run(&["count", "-t", "1", "-n", "3"]).status.code(), Some(2));
    assert_eq!(run(&["dist", "-t", "2", "-n", "3", "--stat", "girth"]).status.code(), Some(2));
    assert_eq!(run(&["dist", "-t", "2", "-n", "100000", "--stat", "height"]).status.code(), Some(2));
}

#[test]
fn too_small_truncation_is_diagnosed() {
    let out = run(&["constants", "-t", "2", "--J", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("tail bound"), "{err}");
}

#[test]
fn constants_json_encloses_mean_width() {
    let text = stdout(&["constants", "-t", "2", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let mu_w = &v["reports"][0]["mu_w"];
    let (lo, hi) = (mu_w["lo"].as_f64().unwrap(), mu_w["hi"].as_f64().unwrap());
    assert!(lo <= 1.710776751014961 && 1.710776751014961 <= hi);
}

#[test]
fn constants_check_tables_passes() {
    let text = stdout(&["constants", "-t", "2..10", "--check-tables", "--p-count", "0"]);
    assert!(text.contains("90 of 90 published values enclosed"), "{text}");
}

#[test]
fn verify_suites_pass() {
    for suite in ["series", "width"] {
        let text = stdout(&["verify", "--suite", suite, "-t", "2..3"]);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["passed"], true, "{suite}");
    }
    let text = stdout(&["verify", "--suite", "lll", "-t", "3"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["passed"], true);
}

#[test]
fn worker_count_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_cantrees"))
        .args(["count", "-t", "2", "-n", "10"])
        .env("CANTREES_WORKERS", "2")
        .output()
        .unwrap();
    assert!(out.status.success());
    let bad = Command::new(env!("CARGO_BIN_EXE_cantrees"))
        .args(["count", "-t", "2", "-n", "10"])
        .env("CANTREES_WORKERS", "many")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let zero = Command::new(env!("CARGO_BIN_EXE_cantrees"))
        .args(["count", "-t", "2", "-n", "10"])
        .env("CANTREES_WORKERS", "0")
        .output()
        .unwrap();
    assert_eq!(zero.status.code(), Some(2));
}

/// Main-term normal curve at n = 200. The bound is a frozen regression value
/// (first computation gave 0.00627); the gap is the O(1) mean shift.
#[test]
fn height_normal_approximation() {
    let rows = compare_rows(2, 200, Stat::Height).unwrap();
    let d = sup_distance(&rows);
    assert!(d <= 0.0065, "sup distance {d}");
}

/// With the exact mean and variance of the pmf the normal curve is much closer.
#[test]
fn height_normal_with_exact_moments() {
    let rows = compare_rows(2, 200, Stat::Height).unwrap();
    let p: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| (r.value as f64, num_traits::ToPrimitive::to_f64(&r.exact_probability).unwrap()))
        .collect();
    let m: f64 = p.iter().map(|(x, q)| x * q).sum();
    let v: f64 = p.iter().map(|(x, q)| (x - m).powi(2) * q).sum();
    let density = |x: f64| (-(x - m).powi(2) / (2.0 * v)).exp() / (2.0 * std::f64::consts::PI * v).sqrt();
    let d = p.iter().map(|&(x, q)| (q - density(x)).abs()).fold(0.0, f64::max);
    assert!(d <= 0.001, "sup distance {d}");
}

#[test]
fn last_level_leaves_against_p_m() {
    let rows = compare_rows(2, 30, Stat::LastLevelLeaves).unwrap();
    for r in rows.iter().filter(|r| r.value > 0) {
        let exact = num_traits::ToPrimitive::to_f64(&r.exact_probability).unwrap();
        assert!((exact - r.asymptotic).abs() <= 0.01, "m t = {}: {exact} vs {}", r.value, r.asymptotic);
    }
}

#[test]
fn compare_at_size_zero() {
    let text = stdout(&["compare", "-t", "2", "-n", "0", "--stat", "height"]);
    assert_eq!(text.lines().count(), 2, "{text}");
}

#[test]
fn output_file_flag() {
    let dir = std::env::temp_dir().join(format!("cantrees-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("count.txt");
    stdout(&["count", "-t", "3", "-n", "5", "--output", path.to_str().unwrap()]);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout(&["count", "-t", "3", "-n", "5"]));
    std::fs::remove_dir_all(dir).unwrap();
}

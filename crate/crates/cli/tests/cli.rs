use std::process::{Command, Output};

fn liesys(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_liesys"))
        .args(args)
        .env("RUST_LOG", "off")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect()
}

fn comment(text: &str, key: &str) -> f64 {
    let prefix = format!("# {key}=");
    text.lines()
        .find_map(|l| l.strip_prefix(&prefix))
        .unwrap_or_else(|| panic!("missing {key}"))
        .parse()
        .unwrap()
}

#[test]
fn solve_writes_one_row_per_node() {
    let o = liesys(&["solve", "--problem", "riccati-sl2", "--scheme", "magnus2", "--a", "1", "--b", "10", "--h", "0.5"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.lines().any(|l| l == "t,x1,exact1"));
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 19);
    assert_eq!(rows[0], vec![1.0, 0.0, 0.0]);
    assert_eq!(rows[18][0], 10.0);
}

#[test]
fn rk4_beats_magnus2_at_coarse_step() {
    let final_error = |scheme: &str| {
        let o = liesys(&["solve", "--problem", "riccati-sl2", "--scheme", scheme, "--h", "0.5"]);
        let rows = data_rows(&stdout(&o));
        let last = rows.last().unwrap();
        (last[1] - last[2]).abs()
    };
    assert!(final_error("rk4") < final_error("magnus2"));
}

#[test]
fn values_use_seventeen_significant_digits() {
    let o = liesys(&["solve", "--problem", "riccati-sl2-const", "--scheme", "magnus4", "--steps", "5"]);
    let text = stdout(&o);
    let line = text.lines().filter(|l| !l.starts_with('#')).nth(2).unwrap();
    for field in line.split(',') {
        let mantissa = field.split('e').next().unwrap().trim_start_matches('-');
        assert_eq!(mantissa.len(), 18, "{field}");
    }
}

#[test]
fn sl3_solve_reports_drift_and_exact_columns() {
    let o = liesys(&["solve", "--problem", "riccati-sl3", "--scheme", "alternate-heun", "--h", "0.01"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.lines().any(|l| l == "t,x1,x2,exact1,exact2"));
    assert!(comment(&text, "max_det_drift") > 1e-6);
    // no closed form from a different start: no exact columns
    let o = liesys(&["solve", "--problem", "riccati-sl3", "--scheme", "rk4", "--steps", "30", "--x0", "0.5,0.5"]);
    assert!(stdout(&o).lines().any(|l| l == "t,x1,x2"));
}

#[test]
fn output_flag_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let o = liesys(&[
        "solve",
        "--problem",
        "lqr-vehicle",
        "--scheme",
        "rkmk4",
        "--steps",
        "100",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let rows = data_rows(&std::fs::read_to_string(&path).unwrap());
    assert_eq!(rows.len(), 101);
    let last = rows.last().unwrap();
    assert!((last[1] - last[2]).abs() < 1e-8);
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["solve", "--problem", "nope", "--scheme", "rk4", "--h", "0.1"][..],
        &["solve", "--problem", "riccati-sl2", "--scheme", "euler", "--h", "0.1"],
        &["solve", "--problem", "riccati-sl2", "--scheme", "rk4"],
        &["solve", "--problem", "riccati-sl2", "--scheme", "rk4", "--h", "0.7"],
        &["converge", "--problem", "riccati-sl2", "--schemes", "rk4", "--hs", "0.2,0.1"],
        &["frobnicate"],
    ] {
        assert_eq!(liesys(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn chart_violation_exits_with_three_and_names_the_step() {
    // x' = 1 + 2x + x² from x(0) = 0 reaches its pole at t = 1, step 4 at h = 0.25
    let o = liesys(&["solve", "--problem", "riccati-sl2-const", "--scheme", "magnus2", "--b", "2", "--h", "0.25"]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("step 4"), "{err}");
}

#[test]
fn converge_reports_slopes() {
    let o = liesys(&[
        "converge",
        "--problem",
        "riccati-sl2",
        "--schemes",
        "magnus2,heun",
        "--hs",
        "0.2,0.1,0.05,0.025",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.lines().any(|l| l == "h,err_magnus2,err_heun"));
    assert_eq!(data_rows(&text).len(), 4);
    for key in ["slope_magnus2", "slope_heun"] {
        let s = comment(&text, key);
        assert!((1.7..=2.3).contains(&s), "{key}={s}");
    }
    let o = liesys(&["converge", "--problem", "riccati-sl2", "--schemes", "magnus4,rkmk4,rk4", "--hs", "0.2,0.1,0.05,0.025"]);
    let text = stdout(&o);
    for key in ["slope_magnus4", "slope_rkmk4", "slope_rk4"] {
        let s = comment(&text, key);
        assert!((3.5..=4.5).contains(&s), "{key}={s}");
    }
}

#[test]
fn converge_is_deterministic() {
    let args = ["converge", "--problem", "riccati-sl3", "--schemes", "magnus2,alternate-rk4", "--hs", "0.1,0.05,0.025"];
    assert_eq!(stdout(&liesys(&args)), stdout(&liesys(&args)));
}

#[test]
fn bench_reports_times() {
    let o = liesys(&["bench", "--problem", "riccati-sl2", "--schemes", "magnus2,rk4", "--hs", "0.2,0.1,0.05", "--reps", "3"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.lines().any(|l| l == "h,seconds_magnus2,seconds_rk4"));
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r[1] > 0.0 && r[2] > 0.0));
    assert!(comment(&text, "r_magnus2").is_finite());
}

#[test]
fn lqr_table_and_trajectories() {
    let dir = tempfile::tempdir().unwrap();
    let o = liesys(&["lqr", "--v-bars", "1.2,1", "--out-dir", dir.path().to_str().unwrap()]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().next().unwrap(), "v_bar,J_optimal_x1000,J_constant_x1000");
    let rows = data_rows(&text);
    assert_eq!(rows[1], vec![1.0, 0.0, 0.0]);
    assert!(rows[0][1] < rows[0][2]);
    let traj = std::fs::read_to_string(dir.path().join("lqr_vbar_1.2_constant.csv")).unwrap();
    let last = data_rows(&traj).pop().unwrap();
    assert_eq!(last[0], 1.0);
    assert!(last[1].abs() < 1e-8);
    assert!(dir.path().join("lqr_vbar_1.2_optimal.csv").exists());
    assert!(dir.path().join("lqr_vbar_1_optimal.csv").exists());
}

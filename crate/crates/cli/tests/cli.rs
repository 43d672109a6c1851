use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn sparsequad(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sparsequad")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn rules_prints_nodes_and_weights() {
    let out = sparsequad(&["rules", "--level", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "index,node,weight");
    assert_eq!(lines.len(), 4);
    assert!(lines[2].starts_with("1,0.0000000000000000e0,"));
    let node: f64 = lines[3].split(',').nth(1).unwrap().parse().unwrap();
    assert!((node - 0.6f64.sqrt()).abs() < 1e-15);
}

#[test]
fn indexset_stats_columns_and_values() {
    let dir = tempfile::tempdir().unwrap();
    let weights = dir.path().join("w.txt");
    fs::write(&weights, "2.5\n1\n").unwrap();
    let csv = dir.path().join("stats.csv");
    let out = sparsequad(&[
        "indexset", "stats", "--weights", path_str(&weights), "--q", "0", "--q-max", "5", "--q-step", "1", "--out",
        path_str(&csv),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "q,card_X,card_Y,bound_sg,bound_bd,bound_tp,bound_loglog,max_box,cost_exact,cost_sq"
    );
    assert_eq!(lines.len(), 7);
    let last: Vec<&str> = lines[6].split(',').collect();
    assert_eq!(last[1], "10");
    assert_eq!(last[3].parse::<f64>().unwrap(), 12.0);
    assert_eq!(last[9], "100");
}

#[test]
fn converge_analytic_writes_rows_and_slope() {
    let out = sparsequad(&["converge", "analytic", "--r", "3", "--m", "4", "--q0", "2", "--q-max", "10", "--q-step", "2"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "q,N_points,card_X,err,N_evaluations");
    assert_eq!(rows.len(), 6);
    for row in &rows[1..] {
        let err: f64 = row.split(',').nth(3).unwrap().parse().unwrap();
        assert!(err >= 0.0);
    }
    assert!(text.lines().any(|l| l.starts_with("# slope,err,")));
    assert_eq!(stdout(&sparsequad(&["converge", "analytic", "--r", "3", "--m", "4", "--q0", "2", "--q-max", "10", "--q-step", "2"])), text);
}

#[test]
fn qmc_reference_file_feeds_a_study() {
    let dir = tempfile::tempdir().unwrap();
    let reference = dir.path().join("ref.txt");
    let args = ["qmc", "reference", "--problem", "analytic", "--r", "2", "--m", "3", "--log2-n", "12", "--out", path_str(&reference)];
    let out = sparsequad(&args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&reference).unwrap();
    assert!(text.starts_with("# method=qmc-halton"));
    let values: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(values.len(), 1);
    assert!(values[0].parse::<f64>().is_ok());
    assert!(sparsequad(&args).status.success());
    assert_eq!(fs::read_to_string(&reference).unwrap(), text);

    let out = sparsequad(&["converge", "analytic", "--r", "2", "--m", "3", "--q-max", "3", "--reference", path_str(&reference)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn converge_diffusion_with_grid_dump() {
    let dir = tempfile::tempdir().unwrap();
    let grid = dir.path().join("grid.csv");
    let out = sparsequad(&[
        "converge", "diffusion", "--h-exp", "5", "--trace-tol", "1e-4", "--moments", "2", "--q-max", "2", "--qmc-log2-n",
        "8", "--dump-grid", path_str(&grid),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("q,N_points,card_X,err_m1,err_m2,N_evaluations"));
    let text = fs::read_to_string(&grid).unwrap();
    let header = text.lines().next().unwrap();
    assert!(header.starts_with("y1,") && header.ends_with(",weight"));
    let sum: f64 = text.lines().skip(1).map(|l| l.rsplit(',').next().unwrap().parse::<f64>().unwrap()).sum();
    assert!((sum - 1.0).abs() < 1e-12);
}

#[test]
fn exit_codes() {
    assert_eq!(sparsequad(&["rules"]).status.code(), Some(2));
    assert_eq!(sparsequad(&["converge", "analytic", "--q-max", "4", "--q-ref", "3"]).status.code(), Some(2));
    assert_eq!(
        sparsequad(&["converge", "analytic", "--q-max", "4", "--q-ref", "9", "--qmc-log2-n", "4"]).status.code(),
        Some(2)
    );
    let dir = tempfile::tempdir().unwrap();
    let weights = dir.path().join("w.txt");
    fs::write(&weights, "1\n-2\n").unwrap();
    assert_eq!(sparsequad(&["indexset", "stats", "--weights", path_str(&weights), "--q", "3"]).status.code(), Some(2));
    let guard = sparsequad(&["converge", "diffusion", "--mean", "0.3", "--h-exp", "5", "--trace-tol", "1e-4", "--q-max", "2"]);
    assert_eq!(guard.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&guard.stderr).contains("ellipticity"));
    let missing = sparsequad(&["indexset", "stats", "--weights", "/nonexistent/w.txt", "--q", "3"]);
    assert_eq!(missing.status.code(), Some(1));
}

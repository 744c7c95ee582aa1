use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_siegel-lab")).args(args).output().expect("spawn siegel-lab")
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["verify-examples"]).status.code(), Some(0));
    assert_eq!(run(&["tune", "--c", "0,0"]).status.code(), Some(1));
    assert_eq!(run(&["boundary", "--c", "2", "--n", "0"]).status.code(), Some(1));
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["render"]).status.code(), Some(2));
    assert_eq!(run(&["tune", "--theta", "abc"]).status.code(), Some(2));
    assert_eq!(run(&["tune", "--theta", "1.5"]).status.code(), Some(1));
}

#[test]
fn domain_errors_go_to_stderr() {
    let out = run(&["tune", "--c", "0,0"]);
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());
}

#[test]
fn tune_json_reports_target() {
    let out = run(&["tune", "--c", "-1,4", "--n-max", "200000", "--json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rho = v["rho"].as_f64().unwrap();
    let theta = (5f64.sqrt() - 1.0) / 2.0;
    assert!((rho - theta).abs() < 1e-4);
}

#[test]
fn render_writes_ppm() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.ppm");
    let out = run(&["render", "--px", "32x24", "--iters", "50", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let bytes = std::fs::read(&path).unwrap();
    let header = b"P6\n32 24\n255\n";
    assert!(bytes.starts_with(header));
    assert_eq!(bytes.len(), header.len() + 32 * 24 * 3);
}

#[test]
fn boundary_csv_has_requested_rows() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b.csv");
    let out = run(&["boundary", "--n", "500", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 501);
}

#[test]
fn thread_count_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let grid = dir.path().join("grid.csv");
    std::fs::write(&grid, "re,im\n2,0\n1.5,1.5\n-3,0.2\ninf\n").unwrap();
    let scan = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_siegel-lab"))
            .args(["xi-scan", "--grid-file", grid.to_str().unwrap(), "--n", "400"])
            .env("SIEGEL_LAB_THREADS", threads)
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(scan("1"), scan("3"));
}

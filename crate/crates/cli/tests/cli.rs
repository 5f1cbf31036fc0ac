use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn rankhull(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rankhull"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn triangle_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("triangle.txt");
    fs::write(&file, "5 7\n9 7\n7 9\n").unwrap();
    let out = rankhull(&["hull", arg(&file), "--verify"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "5 7\n9 7\n7 9\n");
}

#[test]
fn generated_set_round_trip_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("pts.txt");
    let gen = rankhull(&[
        "gen", "--width", "640", "--height", "480", "--density", "0.03", "--seed", "1", "--out",
        arg(&file),
    ]);
    assert!(gen.status.success());
    assert_eq!(fs::read_to_string(&file).unwrap().lines().count(), 9216);

    let first = rankhull(&["hull", arg(&file), "--verify", "--p", "32", "--rank", "f2"]);
    assert_eq!(first.status.code(), Some(0));
    let again = rankhull(&["hull", arg(&file), "--verify", "--p", "32", "--rank", "f2"]);
    assert_eq!(first.stdout, again.stdout);
    let naive = rankhull(&["hull", arg(&file), "--shuffle", "naive"]);
    assert_eq!(first.stdout, naive.stdout);
}

#[test]
fn thresholds_table() {
    let out = rankhull(&["thresholds", "--p-list", "32,64"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "p\tkind\texact\tvalue\n\
         32\tsimple\t1/32\t3.12e-2\n\
         32\trefined\t1/141377\t7.07e-6\n\
         64\tsimple\t1/64\t1.56e-2\n\
         64\trefined\t1/1089665\t9.18e-7\n"
    );
}

#[test]
fn image_hull_from_bitmap() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("mask.pbm");
    fs::write(&file, "P1\n4 3\n0 1 0 0\n1 1 1 0\n0 1 0 1\n").unwrap();
    let out = rankhull(&["image-hull", arg(&file), "--verify"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "0 1\n1 0\n3 2\n1 2\n");
}

#[test]
fn errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "1 2 3\n").unwrap();
    let out = rankhull(&["hull", arg(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));

    let missing = rankhull(&["hull", arg(&dir.path().join("nope.txt"))]);
    assert_eq!(missing.status.code(), Some(1));

    let wide = dir.path().join("wide.txt");
    fs::write(&wide, "300 0\n").unwrap();
    let out = rankhull(&["hull", arg(&wide), "--coord-bits", "8"]);
    assert_eq!(out.status.code(), Some(1));

    let out = rankhull(&["gen", "--width", "4", "--height", "4", "--density", "1.5", "--out", arg(&wide)]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bench_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("bench.csv");
    let norm = dir.path().join("norm.csv");
    let out = rankhull(&[
        "bench", "--width", "64", "--height", "48", "--densities", "0.1,0.5", "--p-list", "32,64",
        "--reps", "3", "--out", arg(&csv), "--oracle", "--normalized-out", arg(&norm),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "m1,m2,m,n,density,p,variant,rep_count,median_ns,step1_ns,step2_ns,step3_ns,step4_ns,step5_ns,isleft_evals,shuffle_iterations,deque_ops"
    );
    assert_eq!(lines.count(), 2 * 3);
    assert_eq!(fs::read_to_string(&norm).unwrap().lines().count(), 1 + 6);
}

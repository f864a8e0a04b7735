use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    run_env(args, &[])
}

fn run_env(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_p1k"));
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn ring_check_certifies_and_refutes() {
    let out = run(&["ring", "--check", fixture("laurent.json").to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("strongly graded: yes\n"));

    let out = run(&["ring", "--check", fixture("polynomial.json").to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert_eq!(stdout(&out), "refuted at k=-1\n");
}

#[test]
fn ring_crossed_product_dimensions() {
    let out = run(&["ring", "--crossed", fixture("checkerboard.json").to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "no: dim R_1 = 4 != dim R_0 = 5\n");

    let out = run(&["ring", "--crossed", fixture("laurent.json").to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("yes: u = t"));
}

#[test]
fn ring_pou_prints_pairs_or_refuses() {
    let out = run(&["ring", "--pou", "-1", fixture("twisted_laurent_4.json").to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("pou(-1): 1 = "));

    let out = run(&["ring", "--pou", "-1", fixture("polynomial.json").to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn missing_file_is_an_error() {
    let out = run(&["ring", "--check", "no-such-file.json"]);
    assert_eq!(code(&out), 1);
    assert!(!out.stderr.is_empty());
}

#[test]
fn coh_single_cell() {
    let out = run(&["coh", fixture("laurent.json").to_str().unwrap(), "--cell", "2,1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "2,1,4,0\n");
    let out = run(&["coh", fixture("laurent.json").to_str().unwrap(), "--cell", "-4,1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "-4,1,0,2\n");
}

#[test]
fn coh_grid_table() {
    let out = run(&[
        "coh",
        fixture("checkerboard.json").to_str().unwrap(),
        "--grid",
        "-2",
        "2",
        "-2",
        "2",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 26);
    assert_eq!(lines[0], "k,l,h0,h1,h0_class,h1_class");
    assert!(lines.contains(&"0,0,5,0,2:1,0:0"));
}

#[test]
fn coh_complex_hypercohomology() {
    let out = run(&["coh", "--complex", fixture("cone_identity.json").to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "degree,dim\n");

    let out = run(&["coh", "--complex", fixture("deep_twist.json").to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "degree,dim\n-1,6\n");
}

#[test]
fn window_cap_env_is_honored() {
    let deep = fixture("deep_twist.json");
    let out = run_env(&["coh", "--complex", deep.to_str().unwrap()], &[("P1K_WINDOW_CAP", "0")]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("window"));

    let out = run_env(&["coh", "--complex", deep.to_str().unwrap()], &[("P1K_WINDOW_CAP", "100")]);
    assert_eq!(code(&out), 1);

    let out = run_env(&["coh", "--complex", deep.to_str().unwrap()], &[("P1K_WINDOW_CAP", "24")]);
    assert_eq!(code(&out), 0);
}

#[test]
fn split_reports_pair_and_grid() {
    let out = run(&["split", fixture("o21_laurent.json").to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "(c,d) = (-3, 4); 49/49 cells pass\n");

    let out = run(&[
        "split",
        fixture("psi00_rank2.json").to_str().unwrap(),
        "--grid",
        "-2",
        "2",
        "-2",
        "2",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "(c,d) = (0, 2); 25/25 cells pass\n");
}

#[test]
fn split_rejects_negative_summands() {
    let out = run(&["split", fixture("not_vect0.json").to_str().unwrap()]);
    assert_eq!(code(&out), 3);
}

#[test]
fn verify_passes_and_is_deterministic() {
    let spec = fixture("laurent.json");
    let args = ["verify", spec.to_str().unwrap(), "--seed", "7", "--cases", "4"];
    let first = run(&args);
    assert_eq!(code(&first), 0);
    let text = stdout(&first);
    assert!(text.ends_with("all properties hold\n"));
    assert!(text.contains("cartesian exactness: 25/25"));
    let second = run(&args);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn verify_gates_on_strong_grading() {
    let out = run(&["verify", fixture("polynomial.json").to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert_eq!(stdout(&out), "strong grading refuted at k=-1\n");
}

#[test]
fn usage_errors_exit_one() {
    let out = run(&["coh", fixture("laurent.json").to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let out = run(&["nonsense"]);
    assert_eq!(code(&out), 1);
}

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_verlinde"))
        .args(args)
        .env_remove("VERLINDE_THREADS")
        .output()
        .unwrap()
}

fn run_with_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_verlinde"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(code(&run(&["verify", "integrality", "--e", "4", "--n", "2"])), 0);
    assert_eq!(code(&run(&["verify", "based-ring", "--e", "4", "--n", "2"])), 0);
    assert_eq!(code(&run(&["verify", "based-ring", "--e", "4", "--n", "2", "--raw"])), 1);
    assert_eq!(code(&run(&["gen", "smatrix", "--e", "0"])), 2);
    assert_eq!(code(&run(&["fusion", "--in", "nonsense"])), 2);
    assert_eq!(code(&run(&["no-such-command"])), 2);
}

#[test]
fn output_is_deterministic() {
    let args = ["fusion", "--in", "smatrix:e=5,exterior=2", "--normalize"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let one = Command::new(env!("CARGO_BIN_EXE_verlinde"))
        .args(["--threads", "1"])
        .args(args)
        .output()
        .unwrap();
    assert_eq!(one.stdout, a.stdout);
}

#[test]
fn gen_pipes_into_fusion() {
    let gen = run(&["gen", "fourier", "--e", "3", "--m", "1", "--mult", "2,1,1"]);
    assert_eq!(code(&gen), 0);
    let piped = run_with_stdin(&["--format", "csv", "fusion", "--in", "-"], &gen.stdout);
    assert_eq!(code(&piped), 0, "{}", String::from_utf8_lossy(&piped.stderr));
    let direct = run(&["--format", "csv", "fusion", "--in", "fourier:e=3,m=1,mult=2+1+1"]);
    assert_eq!(piped.stdout, direct.stdout);
    let csv = String::from_utf8(piped.stdout).unwrap();
    assert!(csv.starts_with("i,j,k,N\n"));
}

#[test]
fn json_ring_matches_table_entry() {
    let o = run(&["fusion", "--in", "smatrix:e=4,exterior=2"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let tensor = v["tensor"].as_array().unwrap();
    // b_(0,2) · b_(1,3) = −b_(0,1) + b_(2,3)
    let has = |t: [i64; 4]| tensor.iter().any(|x| x.as_array().unwrap().iter().map(|y| y.as_i64().unwrap()).eq(t));
    assert!(has([1, 4, 0, -1]) && has([1, 4, 5, 1]));
}

#[test]
fn small_scan() {
    let o = run(&["scan", "neg", "--max-basis", "10"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["all_agree"], true);
    let rows = v["rows"].as_array().unwrap();
    let neg: Vec<(u64, u64)> = rows
        .iter()
        .filter(|r| r["has_negative"] == true)
        .map(|r| (r["e"].as_u64().unwrap(), r["n"].as_u64().unwrap()))
        .collect();
    assert_eq!(neg, vec![(4, 2)]);
}

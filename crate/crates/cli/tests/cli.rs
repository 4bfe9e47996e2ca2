use std::path::PathBuf;
use std::process::{Command, Output};

fn morava(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_morava")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("morava-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn rep_count_at_four() {
    let o = morava(&["count", "rep", "--p", "3", "--n", "1", "--q", "4", "--d", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "12");
}

#[test]
fn height_two() {
    let o = morava(&["fgl", "height", "--p", "3", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "2");
}

#[test]
fn sigma_p_constant_term() {
    let o = morava(&["ring", "sigma-p", "--p", "3", "--n", "1", "--check", "f0"]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<_> = stdout(&o).lines().map(str::to_owned).collect();
    assert_eq!(lines, ["f(0)=p", "pass"]);
}

#[test]
fn json_envelope() {
    let o = morava(&["groups", "order", "--d", "3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema"], "morava-rings/1");
    assert_eq!(v["command"], "groups order");
    assert_eq!(v["result"]["order"], "181440");
    assert_eq!(v["result"]["vp"], 4);
    assert_eq!(v["pass"], true);
}

#[test]
fn csv_grid() {
    let o = morava(&["count", "rep", "--d", "4", "--grid", "--format", "csv"]);
    let text = stdout(&o);
    let rows: Vec<_> = text.lines().collect();
    assert_eq!(rows[0], "p,n,q,d,count");
    assert_eq!(rows[1..], ["3,1,4,1,3", "3,1,4,2,6", "3,1,4,3,12", "3,1,4,4,21"]);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(morava(&["bogus"]).status.code(), Some(1));
    assert_eq!(morava(&["count", "rep"]).status.code(), Some(1));
    assert_eq!(morava(&["glp", "d", "--p", "4"]).status.code(), Some(1));
    assert_eq!(morava(&["groups", "generator-a", "--q", "5"]).status.code(), Some(1));
    assert_eq!(morava(&["--help"]).status.code(), Some(0));
}

#[test]
fn precision_exhaustion_exits_three() {
    assert_eq!(morava(&["fgl", "weierstrass", "--dx", "3"]).status.code(), Some(3));
}

#[test]
fn config_file_then_flags() {
    let cfg = scratch("run.conf");
    std::fs::write(&cfg, "# defaults\np = 3\nn = 2\nq = 4\nformat = json\n").unwrap();
    let c = cfg.to_str().unwrap();
    let o = morava(&["--config", c, "count", "rep", "--d", "2"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["config"]["n"], 2);
    assert_eq!(v["result"]["count"], "45");

    let o = morava(&["--config", c, "count", "rep", "--d", "2", "--n", "1", "--format", "table"]);
    assert_eq!(stdout(&o).trim(), "6");

    let bad = scratch("bad.conf");
    std::fs::write(&bad, "colour = red\n").unwrap();
    assert_eq!(morava(&["--config", bad.to_str().unwrap(), "fgl", "height"]).status.code(), Some(1));
}

#[test]
fn output_file() {
    let out = scratch("height.json");
    let o = morava(&["fgl", "height", "--n", "2", "--format", "json", "--output", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["result"]["height"], 2);
}

#[test]
fn deterministic_with_seed() {
    let a = morava(&["count", "crosscheck", "--d", "3", "--seed", "7", "--format", "json"]);
    let b = morava(&["count", "crosscheck", "--d", "3", "--seed", "7", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn enumeration_agrees() {
    let o = morava(&["count", "rep", "--d", "4", "--brute", "--grid"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("d=4: 21 (enumeration 21)"));
}

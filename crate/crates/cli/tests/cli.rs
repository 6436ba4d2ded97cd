use std::process::{Command, Output};

fn tmbin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tmbin"))
        .args(args)
        .env_remove("TMBIN_MAX_PREFIX")
        .env_remove("TMBIN_MAX_SIGNATURE_DOMAIN")
        .env_remove("TMBIN_MAX_FACTOR_LENGTH")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn generate_prefixes() {
    let o = tmbin(&["generate", "--m", "3", "--length", "27"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "012120201120201012201012120\n");
    let o = tmbin(&["generate", "--m", "2", "--length", "12"]);
    assert_eq!(stdout(&o), "011010011001\n");
    let o = tmbin(&["generate", "--m", "4", "--length", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
}

#[test]
fn generate_bad_args() {
    assert_eq!(tmbin(&["generate", "--m", "1", "--length", "3"]).status.code(), Some(2));
    assert_eq!(tmbin(&["generate", "--m", "x", "--length", "3"]).status.code(), Some(2));
    let o = tmbin(&["--max-prefix", "10", "generate", "--m", "2", "--length", "11"]);
    assert_eq!(o.status.code(), Some(3));
    let o = Command::new(env!("CARGO_BIN_EXE_tmbin"))
        .args(["generate", "--m", "2", "--length", "11"])
        .env("TMBIN_MAX_PREFIX", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn complexity_binomial_t3() {
    let o = tmbin(&[
        "complexity", "--m", "3", "--kind", "binomial", "--k", "2", "--from", "0", "--to", "54", "--check",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,computed,formula,match"));
    let rows: Vec<Vec<String>> = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    assert_eq!(rows.len(), 55);
    assert!(rows.iter().all(|r| r[3] == "true"));
    assert_eq!(rows[18][1], "49");
    assert_eq!(rows[19][1], "45");
}

#[test]
fn complexity_abelian_row() {
    let o = tmbin(&["complexity", "--m", "6", "--kind", "abelian", "--from", "1", "--to", "5", "--bare"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "n,value\n1,6\n2,21\n3,30\n4,39\n5,42\n");
    let o = tmbin(&["complexity", "--m", "3", "--kind", "factor", "--from", "5", "--to", "4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn complexity_json() {
    let o = tmbin(&["complexity", "--m", "2", "--kind", "factor", "--from", "0", "--to", "3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v[3]["computed"], 6);
    assert_eq!(v[3]["match"], true);
}

#[test]
fn factorize_unique() {
    let o = tmbin(&["factorize", "--m", "3", "--k", "2", "--word", "1200121202011202010122010121", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["unique"], true);
    let fs = v["factorizations"].as_array().unwrap();
    assert_eq!(fs.len(), 1);
    assert_eq!(fs[0]["x"], "120");
    assert_eq!(fs[0]["u"], "01");
    assert_eq!(fs[0]["y"], "2010121");
    assert_eq!(v["ps_pair"]["s"], "2010121");
    assert_eq!(fs[0]["y_decomposition"]["parts"], serde_json::json!(["20", "1"]));
}

#[test]
fn factorize_short_and_invalid() {
    let o = tmbin(&["factorize", "--m", "3", "--k", "1", "--word", "012012"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("1 factorization(s)"));
    assert!(stdout(&o).contains("u=00"));
    let o = tmbin(&["factorize", "--m", "2", "--k", "1", "--word", "00000"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not a factor"));
}

#[test]
fn rauzy_exports() {
    let o = tmbin(&["rauzy", "--m", "6", "--order", "4", "--check"]);
    assert_eq!(o.status.code(), Some(0));
    let dot = stdout(&o);
    assert_eq!(dot.lines().filter(|l| l.contains("->")).count(), 126);
    let o = tmbin(&["rauzy", "--m", "4", "--order", "5", "--format", "dot"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().filter(|l| l.contains("->")).count(), 52);
    let o = tmbin(&["rauzy", "--m", "3", "--order", "0"]);
    assert_eq!(o.status.code(), Some(2));
    let o = tmbin(&["rauzy", "--m", "3", "--order", "2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["vertices"].as_array().unwrap().len(), 6);
    assert_eq!(v["edges"].as_array().unwrap().len(), 15);
}

#[test]
fn verify_suites() {
    let o = tmbin(&["verify", "--suite", "prop41", "--m", "2", "--k", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("difference=64"));
    let o = tmbin(&["verify", "--suite", "main-equiv", "--m", "3", "--k", "2", "--max-n", "27"]);
    assert_eq!(o.status.code(), Some(0));
    let o = tmbin(&["verify", "--suite", "all", "--m", "3", "--k", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("PASS")).count(), 8);
}

#[test]
fn verify_output_is_stable() {
    let args = ["verify", "--suite", "bigdiff", "--m", "3", "--k", "2", "--seed", "5", "--no-timing", "--format", "json"];
    let a = tmbin(&args);
    let b = tmbin(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v[0]["check"], "bigdiff");
    assert_eq!(v[0]["instances"], 200);
    assert_eq!(v[0]["elapsed_ms"], 0);
}

#[test]
fn output_file() {
    let dir = std::env::temp_dir().join(format!("tmbin-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("t2.txt");
    let o = tmbin(&["generate", "--m", "2", "--length", "8", "--output", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "01101001\n");
    std::fs::remove_dir_all(&dir).ok();
}

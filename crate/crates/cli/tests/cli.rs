use std::fs;

use assert_cmd::Command;

fn sltrace() -> Command {
    Command::cargo_bin("sltrace").unwrap()
}

fn config_file(text: &str) -> tempfile::NamedTempFile {
    let f = tempfile::NamedTempFile::new().unwrap();
    fs::write(f.path(), text).unwrap();
    f
}

fn stdout_of(cmd: &mut Command) -> String {
    let out = cmd.output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn trace_default_has_fixed_columns_and_zero_identity_gap() {
    let out = stdout_of(sltrace().arg("trace"));
    let mut lines = out.lines();
    assert_eq!(
        lines.next().unwrap(),
        "k,Lambda,dimQ0,dimQbar0,trQ0,trQbar0,trQfull,rhs_main,rhs_h0,rhs_h1,rhs_weil,gap_identity,gap_thm31,gap_lemma35"
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 5);
    for r in &rows {
        assert_eq!(r[11], "0/1");
    }
}

#[test]
fn output_is_identical_across_thread_counts() {
    let cfg = config_file("S = inf [0,1] [1,1]\nh[-1] = 1\nh[0] = 2\nh[1] = 1/3\nk_max = 3\n");
    let run = |jobs: &str| {
        stdout_of(
            sltrace()
                .args(["trace", "--jobs", jobs, "--config"])
                .arg(cfg.path()),
        )
    };
    assert_eq!(run("1"), run("4"));
}

#[test]
fn json_and_out_flag() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    sltrace()
        .args(["trace", "--format", "json", "--out"])
        .arg(&path)
        .assert()
        .success();
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[2]["trQ0"], "5/1");
    assert_eq!(rows[2]["dimQ"], 7);
}

#[test]
fn float_mode() {
    let cfg = config_file("h[0] = 1\nk_max = 2\nmode = float\nfloat_terms = 200\n");
    let out = stdout_of(sltrace().arg("trace").arg("--config").arg(cfg.path()));
    let last = out.lines().last().unwrap();
    let tr_q0: f64 = last.split(',').nth(1).unwrap().parse().unwrap();
    assert!((tr_q0 - 5.0 * 2f64.ln()).abs() < 1e-9);
}

#[test]
fn invalid_config_exits_1() {
    let cfg = config_file("S = [0,1] [1,1]\n");
    let out = sltrace().arg("trace").arg("--config").arg(cfg.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("place set rejected"));

    let cfg = config_file("k_min = -2\n");
    sltrace().arg("dims").arg("--config").arg(cfg.path()).assert().code(1);
    sltrace().args(["trace", "--format", "xml"]).assert().code(1);
}

#[test]
fn selftest_passes_and_negative_control_fails() {
    let out = stdout_of(sltrace().arg("selftest"));
    assert_eq!(out.lines().count(), 8);
    assert!(out.lines().all(|l| l.contains(" PASS ")), "{out}");

    let out = sltrace().args(["selftest", "--corrupt-fourier"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let text = String::from_utf8(out.stdout).unwrap();
    let line = text.lines().find(|l| l.starts_with("shell_fourier_involution")).unwrap();
    assert!(line.contains(" FAIL "));
}

#[test]
fn dims_grow_by_two() {
    let out = stdout_of(sltrace().arg("dims"));
    let dims: Vec<usize> = out
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(3).unwrap().parse().unwrap())
        .collect();
    assert_eq!(dims, vec![1, 3, 5, 7, 9]);
}

#[test]
fn places_and_weil() {
    let out = stdout_of(sltrace().args(["places", "--max-degree", "1"]));
    assert_eq!(out.lines().count(), 4);
    assert!(out.contains("[1,1],1,2,0,false"));

    let cfg = config_file("h[1] = 1\nk_max = 1\n");
    let out = stdout_of(sltrace().arg("weil").arg("--config").arg(cfg.path()));
    assert!(out.starts_with("k,rhs_main,rhs_h0,rhs_h1,weil[inf],weil[[0,1]],rhs_total"));
}

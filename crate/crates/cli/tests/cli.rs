use std::path::PathBuf;
use std::process::{Command, Output};

fn witt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_witt")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("witt-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn apply_prints_exact_images() {
    let cases = [
        (vec!["apply", "--h", "1/2", "qr(0)", "z^3"], "7/2*z^3"),
        (vec!["apply", "--h", "1/2", "current(2)", "z"], "0"),
        (vec!["apply", "--h", "1", "qr(1)", "z^2"], "z^3"),
        (vec!["apply", "--h", "3/2", "sl2.Lp1", "z^2"], "8*z"),
    ];
    for (args, want) in cases {
        let o = witt(&args);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        assert_eq!(stdout(&o).trim(), want, "{args:?}");
    }
}

#[test]
fn apply_rejects_bad_input() {
    assert_eq!(witt(&["apply", "--h", "0", "qr(1)", "z"]).status.code(), Some(2));
    assert_eq!(witt(&["apply", "nonsense", "z"]).status.code(), Some(2));
    assert_eq!(witt(&["apply", "qr(1)", "z^"]).status.code(), Some(2));
}

#[test]
fn dump_lists_components() {
    let o = witt(&["dump", "--h", "1", "qr(-1)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "shift -1: (ν^2 + ν)/(1)");
}

#[test]
fn exit_status_contract() {
    assert_eq!(witt(&["run", "--h", "1/2", "--suites", "sl2"]).status.code(), Some(0));
    assert_eq!(witt(&["run", "--K", "1", "--suites", "sl2"]).status.code(), Some(2));
    assert_eq!(witt(&["run", "--N", "3", "--suites", "sl2"]).status.code(), Some(2));
    assert_eq!(witt(&["run", "--suites", "sl3"]).status.code(), Some(2));
    assert_eq!(witt(&["run", "--format", "xml"]).status.code(), Some(2));
    assert_eq!(witt(&["run", "--bogus"]).status.code(), Some(2));
    assert_eq!(witt(&["run", "--config", "/nonexistent/witt.conf"]).status.code(), Some(2));
}

#[test]
fn thm1a_reports_cross_defects() {
    let o = witt(&["run", "--h", "1", "--K", "4", "--suites", "thm1a"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("\"status\": \"nonzero\""));
    assert!(text.contains("\"in_piece_failures\": 0"));
}

#[test]
fn csv_defect_table() {
    let o = witt(&["run", "--h", "1", "--K", "4", "--suites", "thm1a", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("i,j,status\n"));
    assert!(text.contains("\n2,-2,nonzero\n"));
    assert_eq!(text, stdout(&witt(&["run", "--h", "1", "--K", "4", "--suites", "thm1a", "--format", "csv"])));
}

#[test]
fn reports_are_byte_identical() {
    let dir = scratch("det");
    let (a, b) = (dir.join("a.json"), dir.join("b.json"));
    for out in [&a, &b] {
        let o = witt(&["run", "--h", "1/2,1", "--K", "3", "--N", "4", "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert!(dir.join("a.json.log").exists());
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn config_file_with_overrides() {
    let dir = scratch("cfg");
    let conf = dir.join("run.conf");
    std::fs::write(&conf, "# weights\nh = 5\nK = 1\nsuites = sl2\n").unwrap();
    let path = conf.to_str().unwrap();
    assert_eq!(witt(&["run", "--config", path]).status.code(), Some(2));
    let o = witt(&["run", "--config", path, "--K", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\"h\": [\n      \"5\"\n    ]"));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn corrupted_fixture_fails_the_run() {
    let dir = scratch("fixture");
    let good = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../core/fixtures/octahedron_so4.json")).unwrap();
    let bad = good.replacen("\"-1\"", "\"1\"", 1);
    assert_ne!(good, bad);
    let path = dir.join("bad.json");
    std::fs::write(&path, bad).unwrap();
    let o = witt(&["run", "--suites", "octahedron", "--fixture", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("\"status\": \"fail\""));
    assert_eq!(witt(&["run", "--suites", "octahedron"]).status.code(), Some(0));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn findings_never_fail_the_run() {
    let o = witt(&["run", "--h", "1", "--N", "4", "--suites", "overlay,tensor,burnside"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).matches("\"status\": \"finding\"").count(), 3);
}

use std::process::{Command, Output};

fn fratio(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fratio")).args(args).output().expect("binary runs")
}

fn body(out: &Output) -> Vec<String> {
    String::from_utf8_lossy(&out.stdout).lines().filter(|l| !l.starts_with('#')).map(String::from).collect()
}

fn column<'a>(lines: &'a [String], name: &str, row: usize) -> &'a str {
    let idx = lines[0].split(',').position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
    lines[row].split(',').nth(idx).unwrap()
}

#[test]
fn fr_constant_is_one_and_certified() {
    let out = fratio(&["fr", "--setting", "torus", "--fn", "const1", "--n", "8"]);
    assert!(out.status.success());
    let lines = body(&out);
    assert_eq!(column(&lines, "fr_measured", 1).parse::<f64>().unwrap(), 1.0);
    assert_eq!(column(&lines, "certified", 1), "true");
    assert_eq!(column(&lines, "provenance", 1), "analytic");
}

#[test]
fn fr_slack_is_nonnegative() {
    let torus = fratio(&["fr", "--setting", "torus", "--fn", "cc_half", "--n", "4096"]);
    let sphere = fratio(&["fr", "--setting", "sphere", "--fn", "decay_e", "--l", "16"]);
    for out in [torus, sphere] {
        assert!(out.status.success());
        let lines = body(&out);
        assert!(column(&lines, "slack", 1).parse::<f64>().unwrap() >= 0.0);
    }
}

#[test]
fn uncertified_warns_but_succeeds() {
    let out = fratio(&["fr", "--fn", "sin1", "--n", "16"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("not certified"));
}

#[test]
fn recover_constant_exactly() {
    for seed in ["0", "1", "99"] {
        let out = fratio(&["recover", "--fn", "const1", "--n", "8", "--seed", seed, "--delta", "0"]);
        assert!(out.status.success());
        let lines = body(&out);
        assert!(column(&lines, "rel_error", 1).parse::<f64>().unwrap() <= 1e-8);
    }
}

#[test]
fn recover_sphere_constant_from_four_points() {
    let out = fratio(&[
        "recover", "--setting", "sphere", "--fn", "y00", "--l", "2", "--sample-size", "4", "--delta", "0",
    ]);
    assert!(out.status.success());
    let lines = body(&out);
    assert!(column(&lines, "rel_error", 1).parse::<f64>().unwrap() <= 1e-8);
}

#[test]
fn config_errors_exit_with_one() {
    assert_eq!(fratio(&["fr", "--fn", "nope", "--n", "8"]).status.code(), Some(1));
    assert_eq!(fratio(&["fr", "--fn", "const1"]).status.code(), Some(1));
    assert_eq!(fratio(&["recover", "--fn", "const1", "--n", "8", "--eps", "0.7"]).status.code(), Some(1));
    assert_eq!(fratio(&["sweep", "--mode", "nope", "--fn", "const1", "--n", "8"]).status.code(), Some(1));
    assert_eq!(fratio(&["fr", "--unknown-flag"]).status.code(), Some(1));
}

#[test]
fn sweep_from_config_file_with_override() {
    let dir = std::env::temp_dir().join(format!("fratio-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("sweep.cfg");
    let out_path = dir.join("sweep.csv");
    std::fs::write(&cfg, "mode = rn_vs_logn\nsetting = torus\nfn = const1\nn = 64, 128, 256\n").unwrap();
    let out = fratio(&[
        "sweep", "--config", cfg.to_str().unwrap(), "--n", "64,128,256,512", "--out", out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&out_path).unwrap();
    assert!(text.starts_with("# config_hash="));
    assert_eq!(text.lines().filter(|l| l.starts_with("const1,")).count(), 4);
    assert!(text.contains("# fit fn=const1"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn decay_lemmas_and_quadrature_subcommands() {
    for args in [
        &["decay", "--fn", "cc_half,const1", "--n", "16"][..],
        &["lemmas", "--fn", "vm_bump", "--n", "8,16"][..],
        &["quadrature-check", "--l", "2,4", "--signals", "2"][..],
    ] {
        let out = fratio(args);
        assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(body(&out).len() >= 2);
    }
}

use std::process::{Command, Output};

fn sig_path(name: &str) -> String {
    format!(
        "{}/../../signatures/{name}.json",
        env!("CARGO_MANIFEST_DIR")
    )
}

fn dbd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dbd"))
        .args(args)
        .env_remove("DBD_SIG")
        .output()
        .expect("dbd runs")
}

fn stdout(args: &[&str]) -> String {
    let out = dbd(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    dbd(args).status.code().unwrap()
}

fn value<'a>(tsv: &'a str, key: &str) -> &'a str {
    tsv.lines()
        .find_map(|l| l.strip_prefix(key)?.strip_prefix('\t'))
        .unwrap_or_else(|| panic!("no {key} in\n{tsv}"))
}

#[test]
fn count_tables() {
    let closed = stdout(&["count", "--size", "7", "--closed"]);
    assert_eq!(closed.lines().next(), Some("m\tn\tcount"));
    assert_eq!(closed.lines().last(), Some("0\t7\t124"));
    assert_eq!(closed.lines().count(), 9);
    let all = stdout(&["count", "--size", "7", "--all"]);
    assert_eq!(all.lines().last(), Some("inf\t7\t181"));
    assert_eq!(
        stdout(&["count", "--size", "0", "--all"]),
        "m\tn\tcount\ninf\t0\t0\n"
    );
    let open = stdout(&["count", "--size", "4", "--open", "2"]);
    assert_eq!(open.lines().last(), Some("2\t4\t5"));

    let json: serde_json::Value =
        serde_json::from_str(&stdout(&["count", "--size", "7", "--format", "json"])).unwrap();
    assert_eq!(json["m"], "0");
    assert_eq!(json["counts"][7], "124");
}

#[test]
fn count_guard_rails() {
    assert_eq!(code(&["count", "--size", "5001", "--all"]), 2);
    assert_eq!(code(&["count", "--size", "-1"]), 2);
    assert_eq!(code(&["count", "--size", "7", "--closed", "--all"]), 2);
    assert_eq!(code(&["enumerate", "--size", "17"]), 2);
}

#[test]
fn signature_errors() {
    assert_eq!(
        code(&["--sig", "/nonexistent/sig.json", "count", "--size", "3"]),
        3
    );
    let dir = std::env::temp_dir().join(format!("dbd-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"connectives":[{"name":"in","arity":2}]}"#).unwrap();
    assert_eq!(
        code(&["--sig", bad.to_str().unwrap(), "count", "--size", "3"]),
        3
    );
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn signature_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_dbd"))
        .args(["count", "--size", "6", "--closed"])
        .env("DBD_SIG", sig_path("nand"))
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().last(), Some("0\t6\t16"));
}

#[test]
fn asymptotics_report() {
    let out = stdout(&["asymptotics", "--rows", "3"]);
    let rho: f64 = value(&out, "rho").parse().unwrap();
    assert!((rho - 0.25274).abs() < 1e-4);
    let residual: f64 = value(&out, "residual_value").parse().unwrap();
    assert!(residual.abs() < 1e-12);
    let c0: f64 = value(&out, "C_0").parse().unwrap();
    let c3: f64 = value(&out, "C_3").parse().unwrap();
    assert!(c0 < c3);

    let nand = stdout(&["--sig", &sig_path("nand"), "asymptotics", "--size", "50"]);
    let rho: f64 = value(&nand, "rho").parse().unwrap();
    assert!(rho > 0.0 && rho < 1.0);
    assert!(value(&nand, "residual_value").parse::<f64>().unwrap().abs() < 1e-12);
    assert!(
        value(&nand, "residual_branch")
            .parse::<f64>()
            .unwrap()
            .abs()
            < 1e-12
    );

    let unary = dbd(&["--sig", &sig_path("unary"), "asymptotics"]);
    assert_eq!(unary.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&unary.stderr).contains("not admissible"));
}

#[test]
fn check_formulae() {
    let out = stdout(&["check", "(exists (forall (not (in 0 1))))"]);
    assert_eq!(value(&out, "size"), "7");
    assert_eq!(value(&out, "openness"), "0");
    assert_eq!(value(&out, "valid"), "true");
    assert_eq!(value(&out, "sentence"), "true");
    let open = stdout(&["check", "(forall (in 0 2))", "--format", "json"]);
    let json: serde_json::Value = serde_json::from_str(&open).unwrap();
    assert_eq!(json["openness"], 2);
    assert_eq!(json["sentence"], false);

    let bad = dbd(&["check", "(in 0"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stdout).contains("valid\tfalse"));
}

#[test]
fn density_command() {
    let out = stdout(&[
        "density",
        "--template",
        "(exists (forall _))",
        "--size",
        "7",
        "--sizes",
        "7",
    ]);
    assert!(out
        .lines()
        .any(|l| l.starts_with("7\t4/31\t0.129032258065\t")));
    assert_eq!(
        code(&["density", "--template", "(and _ (in 0 0))", "--size", "10"]),
        5
    );
    assert_eq!(
        code(&["density", "--template", "(and _ _)", "--size", "10"]),
        5
    );
    assert_eq!(
        code(&["density", "--template", "(and _", "--size", "10"]),
        5
    );
}

#[test]
fn density_with_limit() {
    let out = stdout(&[
        "density",
        "--template",
        "(exists (forall _))",
        "--size",
        "300",
        "--limit",
    ]);
    let residuals: Vec<f64> = out
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with('n'))
        .map(|l| l.rsplit('\t').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(residuals.len(), 3);
    assert!(residuals.windows(2).all(|w| w[1] < w[0]), "{out}");
}

#[test]
fn bounds_command() {
    let taut = "(forall (or (in 0 0) (not (in 0 0))))";
    let out = stdout(&["bounds", "--tautology", taut]);
    let lower: f64 = value(&out, "lower").parse().unwrap();
    assert!((lower - 1.06e-6).abs() < 0.01e-6);

    let phi = "(exists (forall (not (in 0 1))))";
    let out = stdout(&["bounds", "--tautology", taut, "--phi", phi]);
    assert_eq!(value(&out, "independence_d"), "20");
    assert_eq!(value(&out, "implication"), "desugared");
    assert_eq!(
        code(&[
            "bounds",
            "--tautology",
            taut,
            "--phi",
            phi,
            "--native-implication"
        ]),
        3
    );
    let native = stdout(&[
        "--sig",
        &sig_path("implies"),
        "bounds",
        "--tautology",
        taut,
        "--phi",
        phi,
        "--native-implication",
    ]);
    assert_eq!(value(&native, "independence_d"), "18");
    assert_eq!(value(&native, "implication"), "native");
    assert_eq!(code(&["bounds", "--tautology", "(in 0 0)"]), 2);
}

#[test]
fn sample_dumps() {
    let a = stdout(&["sample", "--size", "12", "--count", "5", "--seed", "9"]);
    let b = stdout(&["sample", "--size", "12", "--count", "5", "--seed", "9"]);
    assert_eq!(a, b);
    let mut lines = a.lines();
    assert!(lines
        .next()
        .unwrap()
        .starts_with("# seed=9 stream=0 rng=chacha8 n=12 m=0 sig="));
    for l in lines {
        let check = stdout(&["check", l]);
        assert_eq!(value(&check, "size"), "12");
        assert_eq!(value(&check, "sentence"), "true");
    }
    assert_eq!(code(&["sample", "--size", "3"]), 2);
}

#[test]
fn enumerate_command() {
    let out = stdout(&["enumerate", "--size", "6"]);
    assert_eq!(out.lines().count(), 34);
    let out = stdout(&["enumerate", "--size", "4", "--open", "1"]);
    assert_eq!(out.lines().count(), 3);
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["asymptotics", "--size", "60", "--format", "json"][..],
        &[
            "bounds",
            "--tautology",
            "(forall (or (in 0 0) (not (in 0 0))))",
        ][..],
    ] {
        assert_eq!(stdout(args), stdout(args));
    }
}

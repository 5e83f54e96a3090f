use std::path::PathBuf;
use std::process::{Command, Output};

fn fricke(args: &[&str], cache: Option<&PathBuf>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_fricke"));
    cmd.args(args).env_remove("FRICKE_CACHE_DIR");
    if let Some(dir) = cache {
        cmd.env("FRICKE_CACHE_DIR", dir);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_str(stdout(o).trim()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("fricke-cli-{name}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

#[test]
fn word_examples() {
    let o = fricke(&["word", "decompose", "[[1,0],[1,1]]"], None);
    assert_eq!(stdout(&o).trim(), "-S T^-1 S");
    let o = fricke(&["word", "eval-char", "--chi", "3", "[[1,1],[0,1]]"], None);
    assert_eq!(stdout(&o).trim(), "-1");
    let o = fricke(&["word", "gamma04-decompose", "[[1,2],[0,1]]"], None);
    assert_eq!(stdout(&o).trim(), "T^2");
    let o = fricke(&["word", "compose", "-S T^-1 S"], None);
    assert_eq!(stdout(&o).trim(), "[[1,0],[1,1]]");
    let o = fricke(&["word", "decompose", "[[1,2],[3,4]]"], None);
    assert_eq!(o.status.code(), Some(2));
    let o = fricke(&["word", "decompose", "[[1,2],[3"], None);
    assert_eq!(o.status.code(), Some(2));
    let o = fricke(&["word", "gamma04-decompose", "[[0,-1],[1,0]]"], None);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn space_examples() {
    let o = fricke(
        &[
            "space", "--group", "g0_4", "--weight", "6", "--kind", "Snew",
        ],
        None,
    );
    assert!(o.status.success());
    let v = json(&o);
    let basis = v["basis"].as_array().unwrap();
    assert_eq!(basis.len(), 1);
    let c = &basis[0]["coeffs"];
    for (key, want) in [
        ("2", "1/1"),
        ("6", "-12/1"),
        ("10", "54/1"),
        ("14", "-88/1"),
    ] {
        assert_eq!(c[key], want);
    }
    let o = fricke(
        &["space", "--group", "sl2z", "--weight", "2", "--kind", "M"],
        None,
    );
    assert_eq!(json(&o)["basis"].as_array().unwrap().len(), 0);
    let o = fricke(
        &[
            "space",
            "--group",
            "sl2z",
            "--weight",
            "6",
            "--character",
            "chi",
            "--kind",
            "S",
        ],
        None,
    );
    let v = json(&o);
    assert_eq!(v["basis"].as_array().unwrap().len(), 1);
    assert_eq!(v["basis"][0]["grid"], "half");
}

#[test]
fn exit_codes() {
    let o = fricke(
        &["space", "--group", "g0_4", "--weight", "7", "--kind", "S"],
        None,
    );
    assert_eq!(o.status.code(), Some(2));
    let o = fricke(
        &[
            "space", "--group", "g0_2", "--weight", "6", "--kind", "Snew",
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(2));
    let o = fricke(
        &[
            "space",
            "--group",
            "g0_4",
            "--weight",
            "12",
            "--kind",
            "S",
            "--precision",
            "10",
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(3));
    let o = fricke(
        &[
            "verify",
            "chi-lift",
            "--weights",
            "6..8",
            "--precision",
            "4",
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(3));
    let o = fricke(&["verify", "characters", "--weights", "6"], None);
    assert_eq!(o.status.code(), Some(2));
    let o = fricke(&["verify", "nonsense"], None);
    assert_eq!(o.status.code(), Some(2));
    let o = fricke(&["--tol", "0", "verify", "characters"], None);
    assert_eq!(o.status.code(), Some(2));
    let o = fricke(&["lfunction", "--weight", "8"], None);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_reports_one_line_per_weight() {
    let o = fricke(
        &["verify", "newspace-odd-support", "--weights", "10,6,8"],
        None,
    );
    assert!(o.status.success());
    let weights: Vec<u64> = stdout(&o)
        .lines()
        .map(|l| {
            serde_json::from_str::<serde_json::Value>(l).unwrap()["weight"]
                .as_u64()
                .unwrap()
        })
        .collect();
    assert_eq!(weights, vec![6, 8, 10]);
    let o = fricke(&["verify", "characters"], None);
    let v = json(&o);
    assert_eq!(v["details"]["characters"], 6);
    assert_eq!(v["details"]["real_residues"].as_array().unwrap().len(), 2);
}

#[test]
fn lfunction_residuals_and_strict() {
    let o = fricke(&["lfunction", "--weight", "6", "--s", "3,2"], None);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["pass"], true);
    for row in v["rows"].as_array().unwrap() {
        assert!(row["residual"].as_f64().unwrap() < 1e-8);
    }
    let o = fricke(
        &["lfunction", "--weight", "6", "--s", "2", "--eps", "+1"],
        None,
    );
    assert!(o.status.success());
    assert!(json(&o)["rows"][0]["residual"].as_f64().unwrap() > 1e-3);
    let o = fricke(
        &[
            "lfunction",
            "--weight",
            "6",
            "--s",
            "2",
            "--eps",
            "+1",
            "--strict",
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn cache_hits_match_fresh_results() {
    let dir = scratch("cache");
    let args = [
        "space", "--group", "g0_4", "--weight", "10", "--kind", "Snew",
    ];
    let fresh = fricke(&args, Some(&dir));
    let listed = stdout(&fricke(&["cache", "list"], Some(&dir)));
    assert_eq!(listed.lines().count(), 1);
    let hit = fricke(&args, Some(&dir));
    let mut bypass_args = args.to_vec();
    bypass_args.push("--no-cache");
    let bypass = fricke(&bypass_args, Some(&dir));
    assert_eq!(fresh.stdout, hit.stdout);
    assert_eq!(fresh.stdout, bypass.stdout);
    // The flag overrides the environment.
    let other = scratch("cache-flag");
    let mut flag_args = args.to_vec();
    flag_args.extend(["--cache-dir", other.to_str().unwrap()]);
    fricke(&flag_args, Some(&dir));
    assert_eq!(std::fs::read_dir(&other).unwrap().count(), 1);
    let cleared = fricke(&["cache", "clear"], Some(&dir));
    assert!(stdout(&cleared).starts_with("removed 1"));
    assert_eq!(stdout(&fricke(&["cache", "list"], Some(&dir))), "");
    let _ = std::fs::remove_dir_all(&dir);
    let _ = std::fs::remove_dir_all(&other);
}

#[test]
fn corrupt_cache_entry_is_recomputed() {
    let dir = scratch("corrupt");
    let args = ["space", "--group", "sl2z", "--weight", "12", "--kind", "S"];
    let fresh = fricke(&args, Some(&dir));
    let name = stdout(&fricke(&["cache", "list"], Some(&dir)));
    std::fs::write(dir.join(name.trim()), "{not json").unwrap();
    let again = fricke(&args, Some(&dir));
    assert!(again.status.success());
    assert_eq!(fresh.stdout, again.stdout);
    let _ = std::fs::remove_dir_all(&dir);
}

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn repo(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .join(rel)
}

fn esmamds(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_esmamds"))
        .args(args)
        .output()
        .unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = esmamds(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

/// Relative path to file contents for every file under `root`.
fn tree(root: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in fs::read_dir(dir).unwrap() {
            let p = entry.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.insert(
                    p.strip_prefix(root).unwrap().to_path_buf(),
                    fs::read(&p).unwrap(),
                );
            }
        }
    }
    out
}

fn mine_toy(out: &Path, repeats: &str) {
    let config = repo("configs/toy.toml");
    ok(&[
        "mine",
        "--config",
        config.to_str().unwrap(),
        "--repeats",
        repeats,
        "--output",
        out.to_str().unwrap(),
    ]);
}

#[test]
fn mining_twice_writes_identical_trees() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    mine_toy(&a, "3");
    mine_toy(&b, "3");
    let (ta, tb) = (tree(&a), tree(&b));
    for f in [
        "runs.csv",
        "summary.csv",
        "campaign.json",
        "run_000/subgroups.json",
        "run_002/colonies.csv",
    ] {
        assert!(ta.contains_key(Path::new(f)), "missing {f}");
    }
    assert_eq!(ta, tb);
}

#[test]
fn invalid_parameters_exit_non_zero() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    let data = repo("data/toy.csv");
    fs::write(
        &cfg,
        format!(
            "[dataset]\npath = {:?}\n\n[search]\nmin_cov = 1.5\n",
            data.to_str().unwrap()
        ),
    )
    .unwrap();
    let out = esmamds(&[
        "mine",
        "--config",
        cfg.to_str().unwrap(),
        "--output",
        dir.path().join("o").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.starts_with("error:") && err.contains("min_cov"),
        "{err}"
    );

    let out = esmamds(&[
        "mine",
        "--data",
        "/no/such/file.csv",
        "--output",
        dir.path().join("o").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn metrics_and_self_comparison() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("mine");
    mine_toy(&out, "1");
    let set = out.join("run_000/subgroups.json");
    let data = repo("data/toy.csv");
    let (set, data) = (set.to_str().unwrap(), data.to_str().unwrap());

    let report: serde_json::Value =
        serde_json::from_str(&ok(&["metrics", "--data", data, "--subgroups", set])).unwrap();
    let stored: serde_json::Value =
        serde_json::from_slice(&fs::read(out.join("run_000/metrics.json")).unwrap()).unwrap();
    assert_eq!(report["metrics"], stored["metrics"]);

    let cmp = dir.path().join("cmp");
    ok(&[
        "compare",
        "--data",
        data,
        "--native",
        set,
        "--other",
        set,
        "--output",
        cmp.to_str().unwrap(),
    ]);
    for name in ["description", "coverage", "model"] {
        let mut r = csv::Reader::from_path(cmp.join(format!("sim_{name}.csv"))).unwrap();
        for (i, row) in r.records().enumerate() {
            let v: f64 = row.unwrap()[i + 1].parse().unwrap();
            assert_eq!(v, 1.0, "sim_{name} diagonal");
        }
    }
}

#[test]
fn vocabulary_mismatch_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("mine");
    mine_toy(&out, "1");
    let set = out.join("run_000/subgroups.json");
    let vet = repo("configs/veteran.toml");
    let r = esmamds(&[
        "metrics",
        "--config",
        vet.to_str().unwrap(),
        "--subgroups",
        set.to_str().unwrap(),
    ]);
    assert_eq!(r.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&r.stderr).contains("attribute"));
}

#[test]
fn synth_is_seeded() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b, c) = (
        dir.path().join("a"),
        dir.path().join("b"),
        dir.path().join("c"),
    );
    for (p, seed) in [(&a, "5"), (&b, "5"), (&c, "6")] {
        ok(&[
            "synth",
            "--records",
            "80",
            "--noise",
            "2",
            "--seed",
            seed,
            "--output",
            p.to_str().unwrap(),
        ]);
    }
    assert_eq!(tree(&a), tree(&b));
    assert_ne!(tree(&a), tree(&c));
    let truth: serde_json::Value =
        serde_json::from_slice(&fs::read(a.join("truth.json")).unwrap()).unwrap();
    assert_eq!(truth["planted"].as_array().unwrap().len(), 2);
}

#[test]
fn preprocess_matches_published_veteran_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("vet.csv");
    let vet = repo("configs/veteran.toml");
    let text = ok(&[
        "preprocess",
        "--config",
        vet.to_str().unwrap(),
        "--output",
        out.to_str().unwrap(),
    ]);
    assert!(
        text.starts_with("137 records, 6 attributes, 23 items, 6.57% censored"),
        "{text}"
    );
    // the written table loads back without further preprocessing
    let again = ok(&[
        "preprocess",
        "--data",
        out.to_str().unwrap(),
        "--time",
        "time",
        "--event",
        "status",
        "--output",
        dir.path().join("again.csv").to_str().unwrap(),
    ]);
    assert!(
        again.starts_with("137 records, 6 attributes, 23 items"),
        "{again}"
    );
}

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn nckp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nckp"))
        .args(args)
        .env_remove("NCKP_CACHE_DIR")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn render(input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_nckp"))
        .args(["render", "--format", "svg"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

#[test]
fn counts() {
    assert_eq!(stdout(&nckp(&["count", "--k", "3", "--n", "6"])), "202\n");
    assert_eq!(stdout(&nckp(&["count", "--k", "3", "--n", "6", "--regular"])), "51\n");
    assert_eq!(stdout(&nckp(&["count", "--k", "2", "--n", "0"])), "1\n");
}

#[test]
fn small_sample_stays_in_support() {
    let out = stdout(&nckp(&["sample", "--k", "3", "--n", "2", "--count", "4", "--seed", "7"]));
    let lines: Vec<_> = out.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines.iter().all(|l| *l == "{1}{2}" || *l == "{1,2}"), "{out}");
}

#[test]
fn same_seed_same_bytes() {
    for extra in [&[][..], &["--regular"], &["--jobs", "3"], &["--format", "arcs"]] {
        let mut args = vec!["sample", "--k", "4", "--n", "12", "--count", "50", "--seed", "9"];
        args.extend_from_slice(extra);
        let a = stdout(&nckp(&args));
        assert_eq!(a, stdout(&nckp(&args)));
        assert_eq!(a.lines().count(), 50);
    }
}

#[test]
fn seeds_differ() {
    let a = stdout(&nckp(&["sample", "--k", "3", "--n", "20", "--count", "20", "--seed", "1"]));
    let b = stdout(&nckp(&["sample", "--k", "3", "--n", "20", "--count", "20", "--seed", "2"]));
    assert_ne!(a, b);
}

#[test]
fn cache_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k3n15.cache");
    let path = path.to_str().unwrap();
    for regular in [false, true] {
        let mut base = vec!["sample", "--k", "3", "--n", "15", "--count", "40", "--seed", "5"];
        if regular {
            base.push("--regular");
        }
        let plain = stdout(&nckp(&base));
        let _ = std::fs::remove_file(path);
        let mut cached = base.clone();
        cached.extend(["--cache", path]);
        // first run writes the cache, second reads it
        assert_eq!(plain, stdout(&nckp(&cached)));
        assert!(std::fs::metadata(path).is_ok());
        assert_eq!(plain, stdout(&nckp(&cached)));
    }
}

#[test]
fn cache_build_then_sample() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("built");
    let p = path.to_str().unwrap();
    let o = nckp(&["cache", "build", "--k", "4", "--n", "10", "--out", p]);
    assert!(o.status.success());
    let args = ["sample", "--k", "4", "--n", "10", "--count", "10", "--seed", "3"];
    let mut cached = args.to_vec();
    cached.extend(["--cache", p]);
    assert_eq!(stdout(&nckp(&args)), stdout(&nckp(&cached)));
}

#[test]
fn cache_mismatch_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c");
    let p = path.to_str().unwrap();
    assert!(nckp(&["cache", "build", "--k", "3", "--n", "8", "--out", p]).status.success());
    let o = nckp(&["sample", "--k", "4", "--n", "8", "--cache", p]);
    assert_eq!(o.status.code(), Some(3));
    let o = nckp(&["sample", "--k", "3", "--n", "8", "--regular", "--cache", p]);
    assert_eq!(o.status.code(), Some(3));

    std::fs::write(&path, "not a cache\n").unwrap();
    let o = nckp(&["sample", "--k", "3", "--n", "8", "--cache", p]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn cache_dir_variable_resolves_relative_paths() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_nckp"))
        .args(["cache", "build", "--k", "3", "--n", "5", "--out", "rel.cache"])
        .env("NCKP_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(dir.path().join("rel.cache").exists());
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["count", "--k", "1", "--n", "3"][..],
        &["count", "--k", "2", "--n", "3", "--regular"],
        &["count", "--n", "3"],
        &["sample", "--k", "3", "--n", "3", "--jobs", "0"],
        &["sample", "--k", "3", "--n", "3", "--format", "xml"],
        &["frobnicate"],
    ] {
        let o = nckp(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
    let o = nckp(&["count", "--k", "1", "--n", "3"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("--k"));
}

#[test]
fn verify_reports_json() {
    let out = stdout(&nckp(&["verify", "--k-max", "3", "--n-max", "5"]));
    let report: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(report["passed"], true);
    assert!(!report["checks"].as_array().unwrap().is_empty());
}

#[test]
fn json_lines() {
    let out = stdout(&nckp(&[
        "sample", "--k", "3", "--n", "7", "--count", "5", "--seed", "4", "--format", "json",
    ]));
    let blocks = stdout(&nckp(&["sample", "--k", "3", "--n", "7", "--count", "5", "--seed", "4"]));
    for (line, text) in out.lines().zip(blocks.lines()) {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["n"], 7);
        let rebuilt: String = v["blocks"]
            .as_array()
            .unwrap()
            .iter()
            .map(|b| {
                let items: Vec<String> =
                    b.as_array().unwrap().iter().map(|x| x.to_string()).collect();
                format!("{{{}}}", items.join(","))
            })
            .collect();
        assert_eq!(rebuilt, text);
    }
}

#[test]
fn out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("samples.txt");
    let args = ["sample", "--k", "3", "--n", "9", "--count", "12", "--seed", "8"];
    let mut to_file = args.to_vec();
    to_file.extend(["--out", path.to_str().unwrap()]);
    assert!(nckp(&to_file).status.success());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout(&nckp(&args)));
}

#[test]
fn stats_histogram_sums_to_samples() {
    let out = stdout(&nckp(&[
        "stats", "--k", "3", "--n", "10", "--samples", "300", "--metric", "arcs", "--seed", "2",
    ]));
    let mut total = 0;
    for line in out.lines().filter(|l| !l.starts_with('#')) {
        let mut cols = line.split('\t');
        let value: usize = cols.next().unwrap().parse().unwrap();
        assert!(value < 10);
        total += cols.next().unwrap().parse::<u64>().unwrap();
    }
    assert_eq!(total, 300);
    assert!(out.lines().last().unwrap().starts_with("# mean"));
}

#[test]
fn render_draws_one_path_per_arc() {
    let samples = stdout(&nckp(&[
        "sample", "--k", "3", "--n", "8", "--count", "6", "--seed", "11", "--format", "json",
    ]));
    let arcs = stdout(&nckp(&[
        "sample", "--k", "3", "--n", "8", "--count", "6", "--seed", "11", "--format", "arcs",
    ]));
    let expected = arcs.matches('(').count();
    let o = render(&samples);
    let svg = stdout(&o);
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    assert_eq!(svg.matches("<path").count(), expected);
    assert_eq!(svg.matches("<g ").count(), 6);
    assert_eq!(svg.matches("<g ").count(), svg.matches("</g>").count());

    let o = render("{1,3}{2,4}\n");
    assert_eq!(stdout(&o).matches("<path").count(), 2);
    let o = render("{1,3\n");
    assert!(!o.status.success());
}

use std::fs;

use chipfire::lattice::configuration;
use chipfire_cli::{main_with, parse_table_csv, EXIT_INVARIANT, EXIT_IO, EXIT_OK, EXIT_USAGE};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["chipfire"];
    argv.extend_from_slice(args);
    let code = main_with(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn count(svg: &str, class: &str) -> usize {
    svg.matches(&format!(r#"class="{class}""#)).count()
}

#[test]
fn table_n4_csv() {
    let (code, out, _) = run(&["table", "--n", "4"]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<_> = out.lines().collect();
    assert_eq!(lines.len(), 10);
    assert_eq!(lines[0], "0,0,16");
    assert_eq!(lines[9], "9,4,1,1");
}

#[test]
fn table_n0_and_limits() {
    assert_eq!(run(&["table", "--n", "0"]).1, "0,0,1\n");
    let (_, out, _) = run(&["table", "--n", "6", "--max-rows", "3", "--header"]);
    assert_eq!(out, "index,y_min,values\n0,0,64\n1,0,32,32\n2,0,16,32,16\n");
}

#[test]
fn table_json_row_count() {
    let (code, out, _) = run(&["table", "--n", "9", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["n"], 9);
    assert_eq!(v["row_count"], 92);
    assert_eq!(v["rows"][0]["values"][0], 512);
}

#[test]
fn csv_round_trip() {
    for n in [0, 3, 8, 11] {
        let (_, out, _) = run(&["table", "--n", &n.to_string(), "--header"]);
        assert_eq!(
            parse_table_csv(&out).unwrap(),
            configuration(n).unwrap(),
            "n = {n}"
        );
    }
    assert!(parse_table_csv("0,0,x\n").is_err());
}

#[test]
fn stable_and_distance() {
    let (_, out, _) = run(&["stable", "--n", "4"]);
    assert_eq!(out.lines().nth(4), Some("4,0,10001"));
    let (_, out, _) = run(&["distance", "--n", "4"]);
    let counts: Vec<_> = out
        .lines()
        .map(|l| l.split(',').nth(1).unwrap().to_string())
        .collect();
    assert_eq!(counts, ["2", "1", "2", "3", "0", "3", "2", "1", "2"]);
    let (_, out, _) = run(&["distance", "--n", "4", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["second_moment"], 104);
    assert_eq!(v["total"], 16);
}

#[test]
fn firings_diff_segment() {
    let (code, out, _) = run(&["firings", "--n", "0..5"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().last(), Some("5,163,163"));
    let (_, out, _) = run(&["diff", "--n", "4"]);
    assert_eq!(out.lines().next(), Some("1,0,16,-16"));
    let (_, out, _) = run(&["diff", "--n", "4", "--signs"]);
    assert_eq!(out.lines().next(), Some("1,0,-"));
    let (_, out, _) = run(&["segment", "--n", "9"]);
    assert_eq!(out.trim(), "9,92,13,24,0-10,10-23,23-80,80-92,12,true");
}

#[test]
fn sequences() {
    let (code, out, _) = run(&["sequences", "total-firings", "--upto", "10"]);
    assert_eq!(code, EXIT_OK);
    let vals: Vec<_> = out.lines().map(|l| l.split_once(',').unwrap().1).collect();
    assert_eq!(vals.join(","), "0,1,5,15,52,163,458,1359,4296,12890,38570");
    let (_, out, _) = run(&["sequences", "nonzero-rows", "--upto", "5", "--half"]);
    assert_eq!(out, "1,1\n2,2\n3,3\n4,5\n5,8\n");
    let (_, out, _) = run(&[
        "sequences",
        "minimal-row-sums",
        "--upto",
        "3",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["values"], serde_json::json!([2, 4, 8]));
    assert_eq!(v["matches_reference"], true);
    assert_eq!(run(&["sequences", "primes", "--upto", "3"]).0, EXIT_USAGE);
    assert_eq!(
        run(&["sequences", "longest-row", "--upto", "3", "--half"]).0,
        EXIT_USAGE
    );
}

#[test]
fn verify_small_range() {
    let (code, out, _) = run(&["verify", "--n", "1..8", "--trials", "5"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("0 failed"));
    let (code, out, _) = run(&["verify", "--n", "4", "--properties", "parity"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("16 stable chips"));
    let (code, out, _) = run(&["verify", "--n", "0"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("skip"));
    assert_eq!(
        run(&["verify", "--n", "3", "--properties", "nonsense"]).0,
        EXIT_USAGE
    );
}

#[test]
fn render_counts() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dots.svg");
    let (code, _, _) = run(&[
        "render",
        "--kind",
        "stable-dots",
        "--n",
        "9",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK);
    let svg = fs::read_to_string(&path).unwrap();
    assert_eq!(count(&svg, "chip"), 512);

    let (_, svg, _) = run(&["render", "--kind", "stable-dots", "--n", "1"]);
    assert_eq!(count(&svg, "chip"), 2);

    let (_, svg, _) = run(&["render", "--kind", "distance-polyline", "--n", "15"]);
    assert_eq!(count(&svg, "point"), 91);

    assert_eq!(run(&["render", "--kind", "pie", "--n", "3"]).0, EXIT_USAGE);
    assert_eq!(
        run(&[
            "render",
            "--kind",
            "stable-dots",
            "--n",
            "3",
            "--width",
            "0"
        ])
        .0,
        EXIT_USAGE
    );
}

#[test]
fn cache_dir_flag() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let (code, first, _) = run(&["table", "--n", "7", "--cache-dir", d]);
    assert_eq!(code, EXIT_OK);
    assert!(dir.path().join("rows-n7.bin").exists());
    let (_, second, _) = run(&["table", "--n", "7", "--cache-dir", d]);
    assert_eq!(first, second);

    fs::write(dir.path().join("rows-n7.bin"), b"garbage").unwrap();
    let (code, third, err) = run(&["table", "--n", "7", "--cache-dir", d]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(third, first);
    assert!(err.contains("recomputed"));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(run(&["table"]).0, EXIT_USAGE);
    assert_eq!(run(&["table", "--n", "127"]).0, EXIT_USAGE);
    assert_eq!(run(&["segment", "--n", "5..2"]).0, EXIT_USAGE);
    assert_eq!(
        run(&["table", "--n", "3", "--out", "/nonexistent/dir/t.csv"]).0,
        EXIT_IO
    );
    assert_eq!(run(&["--help"]).0, EXIT_OK);
    // A failing invariant is distinct from a usage error.
    assert_ne!(EXIT_INVARIANT, EXIT_USAGE);
}

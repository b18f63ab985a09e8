use std::fs;
use std::path::Path;

use proddecomp::cli::{run, EXIT_CAP, EXIT_NEGATIVE, EXIT_OK, EXIT_USAGE};
use proddecomp::decomp::canonicalize;
use proddecomp::text::parse_decomposition;

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("proddecomp").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

fn gen(dir: &Path, extra: &[&str]) -> (String, String, String) {
    let (g, t, w) = (path(dir, "g.txt"), path(dir, "truth.txt"), path(dir, "w.txt"));
    let mut args = vec!["gen", "--n", "2", "--d", "2", "--p", "5", "--seed", "11", "-o", &g, "--truth", &t, "--points", &w];
    args.extend_from_slice(extra);
    assert_eq!(cli(&args).0, EXIT_OK);
    (g, t, w)
}

#[test]
fn generate_detect_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let (g, t, w) = gen(dir.path(), &[]);
    let found = path(dir.path(), "found.txt");
    let (code, out, _) = cli(&["detect", "--system", &g, "-o", &found]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("decomposable\n"));

    let truth = parse_decomposition(&fs::read_to_string(&t).unwrap()).unwrap();
    let got = parse_decomposition(&fs::read_to_string(&found).unwrap()).unwrap();
    assert_eq!(canonicalize(&got), canonicalize(&truth));

    let (code, out, _) = cli(&["verify", "--points", &w, "--decomp", &found]);
    assert_eq!((code, out.as_str()), (EXIT_OK, "verified\n"));

    let (code, out, _) = cli(&["detect", "--points", &w, "--reverse"]);
    assert_eq!(code, EXIT_OK);
    let from_points = parse_decomposition(out.strip_prefix("decomposable\n").unwrap()).unwrap();
    assert_eq!(canonicalize(&from_points), canonicalize(&truth));
}

#[test]
fn tampered_component_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let (_, t, w) = gen(dir.path(), &[]);
    let text = fs::read_to_string(&t).unwrap();
    let line = text.lines().find(|l| l.starts_with("V ")).unwrap();
    let (head, last) = line.rsplit_once(' ').unwrap();
    let bumped = (last.trim_end_matches(',').parse::<u32>().unwrap() + 1) % 5;
    let other = if text.contains(&format!(" {bumped}")) { (bumped + 1) % 5 } else { bumped };
    let tampered = text.replacen(line, &format!("{head} {other}"), 1);
    let bad = path(dir.path(), "bad.txt");
    fs::write(&bad, tampered).unwrap();
    let (code, out, _) = cli(&["verify", "--points", &w, "--decomp", &bad]);
    assert_eq!(code, EXIT_NEGATIVE);
    assert_eq!(out, "not verified: image-mismatch\n");
}

#[test]
fn lfd_and_solve() {
    let dir = tempfile::tempdir().unwrap();
    let (g, _, w) = gen(dir.path(), &[]);
    let (code, out, _) = cli(&["lfd", "--system", &g, "--cap", "4"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("lastFall "));
    assert!(out.contains("capped false"));

    let (code, _, err) = cli(&["lfd", "--system", &g, "--cap", "1"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.starts_with("error:"));

    let points = fs::read_to_string(&w).unwrap();
    for method in ["e", "eprime"] {
        let (code, out, _) = cli(&["solve", "--system", &g, "--method", method]);
        assert_eq!(code, EXIT_OK);
        assert!(out.starts_with("# 4 rational points\n"), "{out}");
        for line in out.lines().skip(1) {
            assert!(points.contains(line), "{line}");
        }
    }
}

#[test]
fn caps_and_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let (g, _, _) = gen(dir.path(), &[]);
    assert_eq!(cli(&["--monomial-cap", "3", "lfd", "--system", &g, "--cap", "4"]).0, EXIT_CAP);
    assert_eq!(cli(&["--enum-cap", "2", "detect", "--system", &g]).0, EXIT_CAP);
    assert_eq!(cli(&["detect"]).0, EXIT_USAGE);
    assert_eq!(cli(&["gen", "--n", "2", "--d", "2", "--p", "4", "-o", &g]).0, EXIT_USAGE);

    let broken = path(dir.path(), "broken.txt");
    fs::write(&broken, "field p 5 m 1\nvars 2\npoly x1^2 +* x2\n").unwrap();
    let (code, _, err) = cli(&["lfd", "--system", &broken, "--cap", "3"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn not_decomposable_system() {
    let dir = tempfile::tempdir().unwrap();
    let g = path(dir.path(), "g.txt");
    fs::write(&g, "field p 5 m 1\nvars 2\npoly x1^2 - 1\npoly x1*x2 - 1\n").unwrap();
    let (code, out, _) = cli(&["detect", "--system", &g]);
    assert_eq!(code, EXIT_NEGATIVE);
    assert!(out.starts_with("not decomposable: "), "{out}");
}

#[test]
fn eq1_output_and_exhaustive_solve() {
    let dir = tempfile::tempdir().unwrap();
    let g = path(dir.path(), "g.txt");
    let eqs = path(dir.path(), "eq1.txt");
    assert_eq!(cli(&["gen", "--n", "2", "--d", "2", "--p", "3", "--seed", "5", "-o", &g]).0, EXIT_OK);
    let (code, out, _) = cli(&["eq1", "--system", &g, "-o", &eqs, "--solve-exhaustive"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("unknowns 12\nequations 12\n"), "{out}");
    assert!(out.contains("canonical forms 1\n"), "{out}");
    assert!(fs::read_to_string(&eqs).unwrap().starts_with("# unknowns x1..x12 are "));
}

#[test]
fn output_is_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let (ga, ta, wa) = gen(a.path(), &[]);
    let (gb, tb, wb) = gen(b.path(), &[]);
    for (x, y) in [(ga, gb), (ta, tb), (wa, wb)] {
        assert_eq!(fs::read(x).unwrap(), fs::read(y).unwrap());
    }
}

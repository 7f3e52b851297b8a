use std::fs;
use std::path::PathBuf;

use luka_cli::dispatch;
use tempfile::TempDir;

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn run(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["luka"];
    argv.extend_from_slice(args);
    let code = dispatch(argv, &mut out, &mut err);
    Run { code, out: String::from_utf8(out).unwrap(), err: String::from_utf8(err).unwrap() }
}

fn file(dir: &TempDir, name: &str, body: &str) -> String {
    let p: PathBuf = dir.path().join(name);
    fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

fn line_value<'a>(out: &'a str, key: &str) -> &'a str {
    out.lines().find_map(|l| l.strip_prefix(key)).unwrap_or_else(|| panic!("no `{key}` in {out}")).trim()
}

#[test]
fn eval_prints_exact_value() {
    let r = run(&["eval", "-f", "!(X1*X1)", "-p", "3/4"]);
    assert_eq!((r.code, r.out.as_str()), (0, "1/2\n"));
    assert_eq!(run(&["eval", "-f", "X1 -> X2", "-p", "1/3,1/4"]).out, "11/12\n");
    assert_eq!(run(&["eval", "-f", "X2", "-p", "1/3"]).code, 2);
    assert_eq!(run(&["eval", "-f", "X1", "-p", "3/2"]).code, 2);
}

#[test]
fn semantic_entailment_with_round_trip() {
    let d = TempDir::new().unwrap();
    let t = file(&d, "t.luka", "# theory\n!(X1*X1)\n");
    let r = run(&["entails", "--semantic", "--theory", &t, "--query", "!X1"]);
    assert_eq!(r.code, 1);
    let point = line_value(&r.out, "countermodel:");
    assert_eq!(point, "1/2");
    assert_eq!(run(&["eval", "-f", "!(X1*X1)", "-p", point]).out, "1\n");
    assert_ne!(run(&["eval", "-f", "!X1", "-p", point]).out, "1\n");

    let r = run(&["entails", "--semantic", "--theory", &t, "--query", "!(X1*X1) + X1"]);
    assert_eq!(r.code, 0, "{}", r.out);
}

#[test]
fn stable_entailment_prints_collapse_note_and_valuation() {
    let d = TempDir::new().unwrap();
    let t = file(&d, "t.luka", "!(X1*X1)\n");
    let r = run(&["entails", "--stable", "--theory", &t, "--query", "!X1"]);
    assert_eq!(r.code, 1);
    assert!(r.out.contains("note: finite theory"));
    let valuation: String = r.out.lines().filter(|l| l.starts_with("point:") || l.starts_with("dir:")).map(|l| format!("{l}\n")).collect();
    let v = file(&d, "cm.dv", &valuation);
    let w = run(&["witness", "--theory", &t, "--query", "!X1", "--valuation", &v]);
    assert_eq!(w.code, 0, "{}", w.out);

    let t2 = file(&d, "t2.luka", "X1\n");
    assert_eq!(run(&["entails", "--stable", "--theory", &t2, "--query", "X1 + X1"]).code, 0);
}

#[test]
fn over_set_entailment() {
    let d = TempDir::new().unwrap();
    let r = file(&d, "half.reg", "POLY {[1/2 -1]}\n");
    assert_eq!(run(&["entails", "--over-set", &r, "--query", "!(X1*X1)"]).code, 0);
    let out = run(&["entails", "--over-set", &r, "--query", "!X1"]);
    assert_eq!(out.code, 1);
    assert_eq!(line_value(&out.out, "countermodel:"), "1/2");
    let empty = file(&d, "empty.reg", "dim: 1\n");
    assert_eq!(run(&["entails", "--over-set", &empty, "--query", "X1"]).code, 0);
}

#[test]
fn theory_loading_errors() {
    let d = TempDir::new().unwrap();
    let bad = file(&d, "bad.luka", "X1 ->\n");
    let r = run(&["entails", "--semantic", "--theory", &bad, "--query", "X1"]);
    assert_eq!(r.code, 2);
    assert!(r.err.contains(":1:"), "{}", r.err);
    let comment = file(&d, "c.luka", "# only a comment\n");
    assert_eq!(run(&["entails", "--semantic", "--theory", &comment, "--query", "X1 -> X1"]).code, 0);
    assert_eq!(run(&["entails", "--semantic", "--theory", "/nonexistent/file", "--query", "X1"]).code, 2);
}

#[test]
fn diffval_commands() {
    let d = TempDir::new().unwrap();
    let u = file(&d, "u.dv", "point: 1/2\ndir: 1\n");
    assert_eq!(run(&["diffval", "satisfies", "--valuation", &u, "--formula", "!(X1*X1)"]).code, 1);
    let left = file(&d, "l.dv", "point: 1/2\ndir: -1\n");
    assert_eq!(run(&["diffval", "satisfies", "--valuation", &left, "--formula", "!(X1*X1)"]).code, 0);
    assert_eq!(run(&["diffval", "check", "--valuation", &u]).code, 0);
    let bad = file(&d, "bad.dv", "point: 1\ndir: 1\n");
    let r = run(&["diffval", "check", "--valuation", &bad]);
    assert_eq!(r.code, 1);
    assert!(r.out.starts_with("invalid"));
    assert_eq!(run(&["diffval", "satisfies", "--valuation", &bad, "--formula", "X1"]).code, 2);

    let v = file(&d, "v.dv", "point: 1/2 0\ndir: 1 0\n");
    assert_eq!(run(&["diffval", "dominates", "--valuation", &v, "--valuation2", &u]).code, 0);
    let v2 = file(&d, "v2.dv", "point: 1/2 0\ndir: 0 1\n");
    assert_eq!(run(&["diffval", "dominates", "--valuation", &v2, "--valuation2", &u]).code, 1);
    assert_eq!(run(&["diffval", "dominates", "--valuation", &v, "--valuation2", &u, "--h", "3"]).code, 2);
}

#[test]
fn witness_for_the_interval_family() {
    let d = TempDir::new().unwrap();
    let members: Vec<String> = (3..=10)
        .map(|k| {
            let a = format!("{}/{}", (1u64 << (k - 1)) + 1, 1u64 << k);
            let r = run(&["interval", "--a", &a]);
            assert_eq!(r.code, 0);
            r.out.trim().to_string()
        })
        .collect();
    let t = file(&d, "fam.luka", &(members.join("\n") + "\n"));
    let u = file(&d, "u.dv", "point: 1/2\ndir: 1\n");
    let r = run(&["witness", "--theory", &t, "--query", "!(X1*X1)", "--valuation", &u, "--family", "theta", "--start", "3"]);
    assert_eq!(r.code, 0, "{}", r.out);
    assert!(r.out.contains("proviso"));
    let sem = run(&["entails", "--semantic", "--theory", &t, "--query", "!(X1*X1)"]);
    assert_eq!(sem.code, 1);
    assert_eq!(line_value(&sem.out, "countermodel:"), "513/1024");

    let one = file(&d, "one.dv", "point: 1\n");
    let x1 = file(&d, "x1.luka", "X1\n");
    assert_eq!(run(&["witness", "--theory", &x1, "--query", "X1", "--valuation", &one]).code, 1);
}

#[test]
fn interval_command() {
    assert_eq!(run(&["interval", "--a", "1/2"]).out, "2.!X1\n");
    assert_eq!(run(&["interval", "--a", "2/3"]).out, "3.!X1\n");
    assert_eq!(run(&["interval", "--a", "1"]).code, 2);
    assert_eq!(run(&["interval", "--a", "x"]).code, 2);
}

#[test]
fn compile_and_oneset() {
    let r = run(&["compile", "-f", "X1 + X2", "--dump"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.out.lines().filter(|l| l.starts_with("CELL")).count(), 2);
    assert_eq!(run(&["compile", "-f", "X1", "-n", "3"]).out.lines().next(), Some("dim: 3"));
    let r = run(&["oneset", "-f", "!(X1*X1)"]);
    assert!(r.out.starts_with("dim: 1\nPOLY"));
}

#[test]
fn tangent_commands() {
    let d = TempDir::new().unwrap();
    let mut seq = String::from("limit: 0 0\n");
    for i in 1..=200u64 {
        seq.push_str(&format!("1/{i} 1/{}\n", i * i));
    }
    let s = file(&d, "parabola.seq", &seq);
    let args = |verb: &'static str, dir: &'static str| vec!["tangent", verb, "--set", &s, "--point", "0,0", "--dir", dir, "--max-m", "10"];
    assert_eq!(run(&args("certify", "1,0")).code, 0);
    assert_eq!(run(&args("certify", "0,1")).code, 1);
    assert_eq!(run(&args("sss", "1,0")).code, 0);
    assert_eq!(run(&args("sss", "0,1")).code, 1);
    assert_eq!(run(&args("outgoing", "1,0")).code, 0);

    let sq = file(&d, "square.reg", "POLY {[0 1 0] [0 0 1]}\n");
    let r = run(&["tangent", "outgoing", "--set", &sq, "--point", "0,0", "--dir", "1,0", "--lambda", "1/2"]);
    assert_eq!(r.code, 1);
    let r = run(&["tangent", "sss", "--set", &sq, "--point", "0,0", "--dir", "1,0"]);
    assert_eq!((r.code, r.out.lines().next()), (0, Some("strongly semisimple")));
    let r = run(&["tangent", "cone", "--set", &sq, "--point", "0,0"]);
    assert_eq!(r.out, "0,1\n1,0\n");
    assert_eq!(run(&["tangent", "certify", "--set", &sq, "--point", "0,0", "--dir", "1,0"]).code, 2);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["frobnicate"]).code, 2);
    assert_eq!(run(&["entails", "--query", "X1"]).code, 2);
    assert_eq!(run(&["entails", "--semantic", "--stable", "--theory", "t", "--query", "X1"]).code, 2);
    assert_eq!(run(&["eval", "-f", "X1 ->", "-p", "0"]).code, 2);
    assert_eq!(run(&["--help"]).code, 0);
}

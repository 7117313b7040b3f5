use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const NESTED_SQUARES: &str = "x1,x2,label
0,0,pos
4,0,pos
4,4,pos
0,4,pos
2,2,pos
1,1,neg
3,1,neg
3,3,neg
1,3,neg
";

const TRIANGLE: &str = "x1,x2,label\n0,0,pos\n1,0,pos\n0,1,pos\n0.9,0.9,neg\n";

fn pchain(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pchain"))
        .args(args)
        .output()
        .expect("run pchain")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Compiles `csv` into `<dir>/net.json` with extra args.
fn compile(dir: &TempDir, csv: &str, extra: &[&str]) -> (PathBuf, Output) {
    let input = write(dir.path(), "data.csv", csv);
    let net = dir.path().join("net.json");
    let mut args = vec!["compile", "--input", s(&input), "--output", s(&net)];
    args.extend_from_slice(extra);
    let out = pchain(&args);
    (net, out)
}

#[test]
fn compile_reports_regions_and_units() {
    let dir = TempDir::new().unwrap();
    let (net, out) = compile(&dir, NESTED_SQUARES, &[]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("regions: m=3"), "{text}");
    assert!(text.contains("units: 15"), "{text}");
    assert!(text.contains("level 3 (pos): 4 facets"), "{text}");
    let json: String = fs::read_to_string(net).unwrap();
    assert!(json.contains("\"format_version\": 1"));
}

#[test]
fn trace_prints_bits_and_label() {
    let dir = TempDir::new().unwrap();
    let (net, out) = compile(&dir, TRIANGLE, &["--bound", "2"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let out = pchain(&["trace", "--network", s(&net), "--point", "1,1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "bits: 0 1 1 0, label: neg");
    let out = pchain(&["trace", "--network", s(&net), "--point", "0.2,0.2"]);
    assert_eq!(stdout(&out).trim(), "bits: 0 0 0 1, label: pos");
}

#[test]
fn trace_outside_domain_is_an_error() {
    let dir = TempDir::new().unwrap();
    let (net, _) = compile(&dir, TRIANGLE, &["--bound", "2"]);
    let out = pchain(&["trace", "--network", s(&net), "--point", "-3,0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(
        stderr(&out).starts_with("ERROR DomainBoundExceeded:"),
        "{}",
        stderr(&out)
    );
}

#[test]
fn verify_full_agreement_and_reproducible() {
    let dir = TempDir::new().unwrap();
    let (net, _) = compile(&dir, NESTED_SQUARES, &[]);
    let args = [
        "verify",
        "--network",
        s(&net),
        "--samples",
        "100000",
        "--epsilon",
        "1e-6",
        "--seed",
        "42",
    ];
    let first = pchain(&args);
    assert_eq!(first.status.code(), Some(0), "{}", stderr(&first));
    assert!(
        stdout(&first).contains("agreement: 100000/100000"),
        "{}",
        stdout(&first)
    );
    let second = pchain(&args);
    assert_eq!(stdout(&first), stdout(&second));
}

#[test]
fn verify_rejects_invalid_network() {
    let dir = TempDir::new().unwrap();
    let (net, _) = compile(&dir, NESTED_SQUARES, &[]);
    let text = fs::read_to_string(&net).unwrap();
    let tampered = text.replacen("\"bit_weight\": null", "\"bit_weight\": 2.0", 1);
    assert_ne!(text, tampered);
    fs::write(&net, tampered).unwrap();
    let out = pchain(&["verify", "--network", s(&net), "--samples", "100"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(
        stderr(&out).contains("ERROR FirstUnitHasBit:"),
        "{}",
        stderr(&out)
    );
}

#[test]
fn verify_detects_a_wrong_network() {
    let dir = TempDir::new().unwrap();
    let (net, _) = compile(&dir, NESTED_SQUARES, &[]);
    // the stored hulls still say pos outside, the units now answer neg
    let text = fs::read_to_string(&net).unwrap();
    let tampered = text.replacen(
        "\"positive_class\": \"pos\"",
        "\"positive_class\": \"neg\"",
        1,
    );
    assert_ne!(text, tampered);
    fs::write(&net, tampered).unwrap();
    let out = pchain(&["verify", "--network", s(&net), "--samples", "2000"]);
    assert_eq!(out.status.code(), Some(1), "{}", stdout(&out));
    assert!(stderr(&out).contains("ERROR Mismatch:"), "{}", stderr(&out));
    assert!(
        stdout(&out).contains("agreement: 0/2000"),
        "{}",
        stdout(&out)
    );
}

#[test]
fn classify_writes_labels_in_input_order() {
    let dir = TempDir::new().unwrap();
    let (net, _) = compile(&dir, NESTED_SQUARES, &[]);
    let points = write(
        dir.path(),
        "points.csv",
        "x1,x2\n2,2\n1.5,1.5\n0.5,0.5\n5,5\n",
    );
    let labels = dir.path().join("labels.csv");
    let out = pchain(&[
        "classify",
        "--network",
        s(&net),
        "--input",
        s(&points),
        "--output",
        s(&labels),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(
        fs::read_to_string(labels).unwrap(),
        "x1,x2,label\n2,2,pos\n1.5,1.5,neg\n0.5,0.5,pos\n5,5,neg\n"
    );
}

#[test]
fn render_and_compile_svg() {
    let dir = TempDir::new().unwrap();
    let svg_at_compile = dir.path().join("compile.svg");
    let (net, out) = compile(&dir, NESTED_SQUARES, &["--svg", s(&svg_at_compile)]);
    assert!(out.status.success(), "{}", stderr(&out));
    let with_points = fs::read_to_string(svg_at_compile).unwrap();
    assert_eq!(with_points.matches("<circle").count(), 9);

    let region = dir.path().join("region.svg");
    let out = pchain(&[
        "render",
        "--network",
        s(&net),
        "--output",
        s(&region),
        "--resolution",
        "16",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let svg = fs::read_to_string(region).unwrap();
    assert_eq!(svg.matches("<polygon").count(), 3);
    assert_eq!(svg.matches("<rect class=\"cell").count(), 256);
}

#[test]
fn positive_class_flag_swaps_outer_hull() {
    let dir = TempDir::new().unwrap();
    let (net, out) = compile(
        &dir,
        "x1,x2,label\n0,0,neg\n4,0,neg\n2,4,neg\n2,1,pos\n",
        &["--positive-class", "neg"],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("level 1 (neg)"));
    let out = pchain(&["trace", "--network", s(&net), "--point", "2,1"]);
    assert!(
        stdout(&out).trim().ends_with("label: pos"),
        "{}",
        stdout(&out)
    );
    let out = pchain(&["trace", "--network", s(&net), "--point", "1,0.5"]);
    assert!(
        stdout(&out).trim().ends_with("label: neg"),
        "{}",
        stdout(&out)
    );
}

#[test]
fn usage_errors_exit_2() {
    let out = pchain(&["compile", "--input", "x.csv"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr(&out).starts_with("ERROR UsageError:"),
        "{}",
        stderr(&out)
    );

    let out = pchain(&["trace", "--network", "net.json", "--point", "1,abc"]);
    assert_eq!(out.status.code(), Some(2));

    let out = pchain(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn input_errors_exit_1_with_code() {
    let dir = TempDir::new().unwrap();
    let (_, out) = compile(&dir, "x1,x2,label\n0,0,maybe\n", &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(
        stderr(&out).starts_with("ERROR UnknownLabel: line 2"),
        "{}",
        stderr(&out)
    );

    let (_, out) = compile(&dir, "x1,x2,label\n0,0,neg\n", &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(
        stderr(&out).starts_with("ERROR EmptyPositiveClass:"),
        "{}",
        stderr(&out)
    );

    let bad = write(dir.path(), "bad.json", "{\"format_version\": 9}");
    let out = pchain(&["trace", "--network", s(&bad), "--point", "0,0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(
        stderr(&out).starts_with("ERROR VersionError:"),
        "{}",
        stderr(&out)
    );
}

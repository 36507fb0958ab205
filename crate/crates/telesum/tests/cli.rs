use std::path::PathBuf;
use std::process::{Command, Output};

const DATA: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data");

fn data(name: &str) -> String {
    format!("{}/{}", DATA, name)
}

fn telesum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_telesum")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("telesum-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn bessel_telescopers() {
    let o = telesum(&["telescope", &data("bessel_multiplication.problem"), "--verify"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for t in ["z*Dz - lam*Dlam - nu", "z*lam*Snu + Dlam", "lam*Dlam^2 + (2*nu + 1)*Dlam + z^2*lam"] {
        assert!(out.contains(t), "missing {}\n{}", t, out);
    }
    assert!(out.contains("T3 = ok"));
}

#[test]
fn output_is_deterministic_and_can_go_to_a_file() {
    let a = telesum(&["certificate", &data("bessel_squares.problem"), "--expand-certificate"]);
    let b = telesum(&["certificate", &data("bessel_squares.problem"), "--expand-certificate"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let target = std::env::temp_dir().join(format!("telesum-out-{}.txt", std::process::id()));
    let c = telesum(&[
        "certificate",
        &data("bessel_squares.problem"),
        "--expand-certificate",
        "--output",
        target.to_str().unwrap(),
    ]);
    assert_eq!(c.status.code(), Some(0));
    assert!(c.stdout.is_empty());
    assert_eq!(std::fs::read(&target).unwrap(), a.stdout);
}

#[test]
fn node_table_lines() {
    let out = stdout(&telesum(&["certificate", &data("bessel_squares.problem")]));
    let table: Vec<&str> = out
        .split("[nodes]\n")
        .nth(1)
        .unwrap()
        .lines()
        .take_while(|l| !l.is_empty())
        .collect();
    assert!(!table.is_empty());
    let kinds = ["leaf", "sum", "scale", "shift", "diff", "pshift"];
    for line in table {
        let cols: Vec<&str> = line.split('\t').collect();
        assert_eq!(cols.len(), 3, "{}", line);
        assert!(cols[0].parse::<usize>().is_ok());
        assert!(kinds.contains(&cols[1]));
    }
}

#[test]
fn pole_check() {
    let out = stdout(&telesum(&["check-poles", &data("bessel_squares.problem"), "--pole-range", "0..1"]));
    assert!(out.contains("T1: no integer poles in {0,1}"), "{}", out);
    assert!(out.contains("T1 n=0: values x/4; 1/x; -x/4"));
    let out = stdout(&telesum(&["check-poles", &data("bessel_squares.problem")]));
    assert!(out.contains("T1: integer poles at {-1}"), "{}", out);
}

#[test]
fn reduce_verifies() {
    let o = telesum(&["reduce", &data("example_reduction.problem"), "--verify"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("reduction = ok"));
    // Without an [adjoint] section the module's own recurrence is used, and
    // the image of that adjoint reduces to zero.
    let p = scratch(
        "image.problem",
        "[variables]\nk shift summation\nn shift\n[generators]\n(n + 1 - k)*Sn - (n + 1)\n(k + 1)*Sk - (n - k)\n\
         [function]\n1 - (n - k)/(k + 1)\n",
    );
    let o = telesum(&["reduce", p.to_str().unwrap(), "--verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("value = 0"), "{}", stdout(&o));
}

#[test]
fn bounded_mode_warns_about_default() {
    let o = telesum(&["telescope", &data("binomial.problem"), "--mode", "bounded"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("using 12"));
    assert!(stdout(&o).contains("mode = bounded=12"));
    assert!(stdout(&o).contains("T1 = Sn - 2"));
}

#[test]
fn exit_codes() {
    let parse = scratch("parse.problem", "[variables]\nn shift summation\n[generators]\nSn - (1\n");
    assert_eq!(telesum(&["telescope", parse.to_str().unwrap()]).status.code(), Some(2));
    let semantic = scratch("semantic.problem", "[variables]\nn shift summation\nx diff\n[generators]\nSn*Sx\n");
    assert_eq!(telesum(&["telescope", semantic.to_str().unwrap()]).status.code(), Some(3));
    let not_d_finite = scratch("ndf.problem", "[variables]\nn shift summation\nx diff\n[generators]\nSn - 1\n");
    assert_eq!(telesum(&["telescope", not_d_finite.to_str().unwrap()]).status.code(), Some(4));
    let singular = scratch("singular.problem", "[variables]\nn shift summation\nx diff\n[generators]\nSn\nDx\n");
    assert_eq!(telesum(&["telescope", singular.to_str().unwrap()]).status.code(), Some(5));
    assert_eq!(telesum(&["telescope", "/nonexistent/file.problem"]).status.code(), Some(1));
    assert_eq!(telesum(&["telescope", &data("binomial.problem"), "--mode", "fast"]).status.code(), Some(2));
}

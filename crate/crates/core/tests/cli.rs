use std::process::{Command, Output};

fn emi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_emi")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn pi_digits_and_report() {
    let o = emi(&["pi", "--digits", "10"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("3.141592653"));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("formula: k=27 gamma=85445659/1"));
    assert!(err.contains("first_digits: 1415926535"));
}

#[test]
fn pi_rate_report_csv() {
    let o = emi(&[
        "pi",
        "--digits",
        "200",
        "--report-rate",
        "--rate-max",
        "6",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip_while(|l| !l.starts_with("n_max,")).skip(1).collect();
    assert_eq!(rows.len(), 6);
    for row in &rows[1..] {
        let gained: i64 = row.rsplit(',').next().unwrap().parse().unwrap();
        assert!((15..=17).contains(&gained), "{row}");
    }
}

#[test]
fn self_check_and_gamma() {
    let o = emi(&["self-check", "--digits", "30"]);
    assert_eq!(stdout(&o), "3.141592653589793238462643383279\n");
    let o = emi(&["gamma", "-k", "27", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\n27,85445659/1,67108864,4.10922397200e-9\n"));
}

#[test]
fn convergence_to_file_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("grid.csv");
    let args = [
        "convergence",
        "--x-min",
        "-2",
        "--x-max",
        "2",
        "--step",
        "0.5",
        "-M",
        "1,2",
        "--out",
        path.to_str().unwrap(),
    ];
    assert_eq!(emi(&args).status.code(), Some(0));
    let first = std::fs::read_to_string(&path).unwrap();
    assert_eq!(emi(&args).status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&path).unwrap(), first);
    let mut lines = first.lines();
    assert_eq!(lines.next(), Some("series,x,M,n_max,abs_error,log10_error"));
    assert_eq!(lines.clone().count(), 9 + 9 + 18);
    assert!(lines
        .clone()
        .any(|l| l.starts_with("maclaurin,0.000000000000,0,10,") && l.ends_with(",-inf")));
    assert!(lines.any(|l| l.starts_with("emi,-2.000000000000,2,10,")));
}

#[test]
fn exit_codes() {
    assert_eq!(emi(&["bogus"]).status.code(), Some(2));
    assert_eq!(emi(&["atan", "1", "-M", "0"]).status.code(), Some(2));
    assert_eq!(emi(&["convergence", "--series", "taylor"]).status.code(), Some(2));
    assert_eq!(
        emi(&["pi", "-k", "27", "--exact", "--digits", "10"]).status.code(),
        Some(4)
    );
    let o = emi(&["pi", "-k", "8", "-n", "1", "--digits", "50"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).is_empty());
    let o = emi(&["self-check", "--out", "/nonexistent-dir/x.txt"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn integrate_runge() {
    let o = emi(&["integrate", "runge", "-1", "1", "-M", "4", "-N", "6", "--digits", "12"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("1.5707963"), "{text}");
    let err: f64 = text
        .lines()
        .nth(1)
        .unwrap()
        .trim_start_matches("abs_error=")
        .parse()
        .unwrap();
    assert!(err < 1e-8);
}

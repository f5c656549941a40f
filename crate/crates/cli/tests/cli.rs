use std::process::{Command, Output};

fn evoforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_evoforge"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn run_is_reproducible_and_prints_one_cost() {
    let args = [
        "run",
        "--problem=onemax:n=20;leadingones:n=10",
        "--budget=300",
        "--runs=3",
        "--seed=4",
        "--crossover=3",
        "--pop-size=2",
    ];
    let a = evoforge(&args);
    let b = evoforge(&args);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let out = stdout(&a);
    assert_eq!(out.lines().count(), 1);
    let cost: f64 = out.trim().parse().unwrap();
    assert!(cost <= 0.0);
    let records = String::from_utf8_lossy(&a.stderr);
    assert_eq!(records.lines().filter(|l| l.starts_with("run=")).count(), 6);
}

#[test]
fn workers_do_not_change_the_cost() {
    let base = [
        "run",
        "--problem=onemax:n=30",
        "--budget=400",
        "--runs=2",
        "--mutation=1",
    ];
    let one = evoforge(&[&base[..], &["--workers=1"]].concat());
    let four = evoforge(&[&base[..], &["--workers=4", "--parallel-runs"]].concat());
    assert!(one.status.success() && four.status.success());
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn out_of_range_encoding_is_a_usage_error() {
    let o = evoforge(&["run", "--crossover=999"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("crossover"));
}

#[test]
fn unknown_flag_and_bad_type_exit_with_usage_code() {
    assert_eq!(evoforge(&["run", "--nope=1"]).status.code(), Some(2));
    assert_eq!(evoforge(&["run", "--budget=lots"]).status.code(), Some(2));
    assert_eq!(evoforge(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn help_lists_sections() {
    let o = evoforge(&["run", "--help"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for section in ["Problem", "Execution", "Performance", "Operator Choice"] {
        assert!(text.contains(section), "missing {section}");
    }
    assert!(text.contains("-c"));
}

#[test]
fn irace_config_round_trips_through_run() {
    let o = evoforge(&["irace-config"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# name\t switch\t type\t range"));
    let mut flags = Vec::new();
    for row in lines {
        let parts: Vec<&str> = row.split(' ').collect();
        assert_eq!(parts.len(), 4, "{row}");
        let switch = parts[1].trim_matches('"');
        let range = parts[3].trim_matches(|c| c == '(' || c == ')');
        let last = range.rsplit(',').next().unwrap();
        flags.push(format!("{switch}{last}"));
    }
    assert_eq!(flags.len(), 9);
    let mut args = vec!["run", "--problem=onemax:n=8", "--budget=50"];
    args.extend(flags.iter().map(String::as_str));
    let run = evoforge(&args);
    assert!(
        run.status.success(),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    assert!(stdout(&run).trim().parse::<f64>().is_ok());
}

#[test]
fn count_lists_slots_and_product() {
    let o = evoforge(&["count", "--list"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 10);
    let product: u128 = lines[..9]
        .iter()
        .map(|l| l.split('\t').nth(1).unwrap().parse::<u128>().unwrap())
        .product();
    assert_eq!(lines[9].parse::<u128>().unwrap(), product);
    assert_eq!(product, 1_968_750);
}

#[test]
fn landscape_reports_fdc_of_onemax() {
    let o = evoforge(&[
        "landscape",
        "--problem=onemax:n=30",
        "--samples=500",
        "--steps=200",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("feature,value,sample_size,seed"));
    let fdc: f64 = text
        .lines()
        .find(|l| l.starts_with("fdc,"))
        .unwrap()
        .split(',')
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    assert!((fdc + 1.0).abs() < 1e-12);
    let dos: f64 = text
        .lines()
        .filter(|l| l.starts_with("density_of_states"))
        .map(|l| l.split(',').nth(1).unwrap().parse::<f64>().unwrap())
        .sum();
    assert!((dos - 1.0).abs() < 1e-9);
}

#[test]
fn landscape_rejects_zero_steps() {
    let o = evoforge(&["landscape", "--steps=0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
}

#[test]
fn bench_arithmetic_is_consistent() {
    let o = evoforge(&["bench", "--evaluations=20000"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let field = |k: &str| -> f64 {
        text.split_whitespace()
            .find_map(|kv| kv.strip_prefix(&format!("{k}=")))
            .unwrap()
            .parse()
            .unwrap()
    };
    let evals = field("evaluations");
    assert!(evals >= 20_000.0);
    let rate = field("evals_per_second");
    assert!((rate * field("seconds") - evals).abs() / evals < 1e-6);
}

#[test]
fn run_writes_trajectories() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("traj");
    let o = evoforge(&[
        "run",
        "--problem=onemax:n=12",
        "--budget=100",
        "--runs=2",
        &format!("--out={}", out.display()),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let files: Vec<_> = std::fs::read_dir(&out).unwrap().collect();
    assert_eq!(files.len(), 2);
    for f in files {
        let body = std::fs::read_to_string(f.unwrap().path()).unwrap();
        assert!(body.starts_with("evaluations,raw_y,best_y\n"));
    }
}

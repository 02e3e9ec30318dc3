mod common;

use std::fs;
use std::process::Command;

use fbm_bvp::cli::{
    run, CliConfig, CommandKind, ConvergeReport, SolveReport, EXIT_NUMERICAL, EXIT_OK, EXIT_USAGE,
    EXIT_VERIFICATION,
};
use fbm_bvp::experiments::{verify_kernel_sum, Status};
use fbm_bvp::noise::kernel_cell_sum;
use fbm_bvp::{HurstIndex, UniformGrid};

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn cli(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(
        std::iter::once("fbm-bvp").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    Run {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn data_rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn sample_noise_is_deterministic() {
    let args = ["sample-noise", "--n", "4", "--seed", "7", "--hurst", "0.25"];
    let a = cli(&args);
    let b = cli(&args);
    assert_eq!(a.code, EXIT_OK);
    assert_eq!(a.stdout, b.stdout);
    assert!(a
        .stdout
        .starts_with("cell_index,x_left,x_right,increment,density\n"));
    let rows = data_rows(&a.stdout);
    assert_eq!(rows.len(), 4);
    for r in &rows {
        let inc: f64 = r[3].parse().unwrap();
        let density: f64 = r[4].parse().unwrap();
        assert_eq!(density, inc * 4.0);
    }

    let bin = Command::new(env!("CARGO_BIN_EXE_fbm-bvp"))
        .args(args)
        .output()
        .unwrap();
    assert!(bin.status.success());
    assert_eq!(String::from_utf8(bin.stdout).unwrap(), a.stdout);
}

#[test]
fn endpoint_variance_is_one() {
    let values: Vec<f64> = (0..10_000)
        .map(|seed| {
            let r = cli(&["sample-noise", "--n", "4", "--seed", &seed.to_string()]);
            let w1: f64 = data_rows(&r.stdout)
                .iter()
                .map(|row| row[3].parse::<f64>().unwrap())
                .sum();
            w1 * w1
        })
        .collect();
    let (mean, se) = common::mean_and_stderr(&values);
    assert!((mean - 1.0).abs() < 4.0 * se, "{mean} ± {se}");
}

#[test]
fn white_noise_self_check_passes() {
    let r = cli(&[
        "sample-noise",
        "--hurst",
        "0.5",
        "--n",
        "16",
        "--samples",
        "20000",
        "--self-check",
    ]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    assert!(
        r.stderr.contains("lag-1") && r.stderr.contains("PASS"),
        "{}",
        r.stderr
    );
    let r = cli(&[
        "sample-noise",
        "--hurst",
        "0.25",
        "--samples",
        "2000",
        "--self-check",
    ]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
}

#[test]
fn deterministic_solve_is_the_parabola() {
    let r = cli(&[
        "solve",
        "--f",
        "zero",
        "--g",
        "one",
        "--zero-noise",
        "--n",
        "16",
        "--solver",
        "both",
    ]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    assert!(r.stdout.contains("# fem residual="));
    assert!(r.stdout.contains("# greens residual="));
    assert!(r.stdout.lines().any(|l| l == "x,u_fem,u_greens"));
    let rows = data_rows(&r.stdout);
    assert_eq!(rows.len(), 17);
    for row in &rows {
        let x: f64 = row[0].parse().unwrap();
        for col in &row[1..] {
            let u: f64 = col.parse().unwrap();
            assert!((u - x * (1.0 - x) / 2.0).abs() < 1e-12);
        }
    }
    for row in [&rows[0], &rows[16]] {
        assert_eq!(row[1].parse::<f64>().unwrap(), 0.0);
        assert_eq!(row[2].parse::<f64>().unwrap(), 0.0);
    }
    let single = cli(&["solve", "--n", "8"]);
    assert!(single.stdout.lines().any(|l| l == "x,u_fem"));
}

#[test]
fn solve_json_round_trips() {
    let r = cli(&[
        "solve",
        "--format",
        "json",
        "--n",
        "12",
        "--f",
        "sqrt-clip",
        "--solver",
        "both",
        "--seed",
        "3",
    ]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    let report: SolveReport = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(report.config.command, CommandKind::Solve);
    assert_eq!(report.config.seed, 3);
    assert_eq!(report.x.len(), 13);
    let again = serde_json::to_string_pretty(&report).unwrap() + "\n";
    assert_eq!(again, r.stdout);
    let config: CliConfig = serde_json::from_value(
        serde_json::from_str::<serde_json::Value>(&r.stdout).unwrap()["config"].clone(),
    )
    .unwrap();
    assert_eq!(config, report.config);
}

#[test]
fn converge_outputs() {
    let base = [
        "converge",
        "--ladder",
        "8:3",
        "--samples",
        "16",
        "--seed",
        "5",
    ];
    let csv = cli(&base);
    assert_eq!(csv.code, EXIT_OK, "{}", csv.stderr);
    let lines: Vec<&str> = csv.stdout.lines().collect();
    assert_eq!(lines[0], "solver,n,h,rms_error,stderr");
    assert_eq!(lines.len(), 5);
    assert!(lines[4].starts_with("fem,fitted_rate,,"));

    let mut json_args = base.to_vec();
    json_args.extend(["--format", "json"]);
    let json = cli(&json_args);
    let report: ConvergeReport = serde_json::from_str(&json.stdout).unwrap();
    assert_eq!(report.config.command, CommandKind::Converge);
    assert_eq!(report.levels.len(), 3);
    assert_eq!(report.levels[0].n, 8);
    let footer: Vec<&str> = lines[4].split(',').collect();
    assert_eq!(footer[3].parse::<f64>().unwrap(), report.fitted_rate);

    json_args.extend(["--solver", "both"]);
    let both = cli(&json_args);
    let reports: Vec<ConvergeReport> = serde_json::from_str(&both.stdout).unwrap();
    assert_eq!(reports.len(), 2);
    assert_eq!(reports[0].levels, report.levels);
}

#[test]
fn seed_fixes_every_number() {
    let strip = |s: &str| -> serde_json::Value {
        let mut v: serde_json::Value = serde_json::from_str(s).unwrap();
        v["wall_time"] = serde_json::Value::Null;
        v["config"]["threads"] = serde_json::Value::Null;
        v
    };
    let args = |threads: &'static str| {
        [
            "converge",
            "--ladder",
            "8:3",
            "--samples",
            "12",
            "--format",
            "json",
            "--threads",
            threads,
        ]
    };
    let a = cli(&args("1"));
    let b = cli(&args("4"));
    assert_eq!(strip(&a.stdout), strip(&b.stdout));
}

#[test]
fn verify_exit_codes() {
    let ok = cli(&["verify", "--hurst", "0.25", "--samples", "2000"]);
    assert_eq!(ok.code, EXIT_OK, "{}", ok.stdout);
    assert!(ok
        .stdout
        .starts_with("check,target,estimate,z_or_rate,verdict\n"));
    assert!(data_rows(&ok.stdout).iter().all(|r| r[4] == "PASS"));

    let white = cli(&["verify", "--hurst", "0.5", "--samples", "2000"]);
    assert_eq!(white.code, EXIT_OK, "{}", white.stdout);
    let kernel: Vec<_> = data_rows(&white.stdout)
        .into_iter()
        .filter(|r| r[0].starts_with("kernel"))
        .collect();
    assert!(!kernel.is_empty());
    assert!(kernel.iter().all(|r| r[4] == "SKIPPED"));

    // two samples per Monte Carlo check: this seed lands outside the band
    let bad = cli(&["verify", "--samples", "2", "--seed", "1"]);
    assert_eq!(bad.code, EXIT_VERIFICATION);
    assert!(bad.stdout.contains(",FAIL"));
}

#[test]
fn off_by_factor_kernel_fails() {
    let grid = UniformGrid::new(16).unwrap();
    let h = HurstIndex::new(0.25).unwrap();
    let good = verify_kernel_sum(grid, h, kernel_cell_sum).unwrap();
    assert_eq!(good.status, Status::Pass);
    let bad = verify_kernel_sum(grid, h, |g, h| Ok(kernel_cell_sum(g, h)? / 4.0)).unwrap();
    assert_eq!(bad.status, Status::Fail);
}

#[test]
fn usage_errors() {
    assert_eq!(cli(&["solve", "--bogus"]).code, EXIT_USAGE);
    assert_eq!(cli(&["solve", "--hurst", "0.7"]).code, EXIT_USAGE);
    assert_eq!(cli(&["converge", "--ladder", "16"]).code, EXIT_USAGE);
    assert_eq!(cli(&["solve", "--f", "cubic"]).code, EXIT_USAGE);
    assert_eq!(cli(&["--help"]).code, EXIT_OK);
    let r = cli(&["nonsense"]);
    assert_eq!(r.code, EXIT_USAGE);
    assert!(!r.stderr.is_empty());

    let bin = Command::new(env!("CARGO_BIN_EXE_fbm-bvp"))
        .args(["solve", "--n", "0"])
        .output()
        .unwrap();
    assert_eq!(bin.status.code(), Some(EXIT_USAGE));
}

#[test]
fn failed_runs_leave_no_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("u.csv");
    let out_s = out.to_str().unwrap();
    let r = cli(&["solve", "--f", "sin", "--max-iters", "1", "--out", out_s]);
    assert_eq!(r.code, EXIT_NUMERICAL, "{}", r.stderr);
    assert!(!out.exists());
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);

    fs::write(&out, "previous").unwrap();
    let r = cli(&["solve", "--f", "sin", "--max-iters", "1", "--out", out_s]);
    assert_eq!(r.code, EXIT_NUMERICAL);
    assert_eq!(fs::read_to_string(&out).unwrap(), "previous");

    let r = cli(&["solve", "--f", "sin", "--out", out_s]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.stdout.is_empty());
    assert_eq!(
        fs::read_to_string(&out).unwrap(),
        cli(&["solve", "--f", "sin"]).stdout
    );
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.cfg");
    fs::write(
        &path,
        "# defaults\nhurst = 0.1\nn=8\nseed=3\nmax_iters = 50\nformat=json\n",
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let r = cli(&["solve", "--config", p, "--n", "16"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    let report: SolveReport = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(report.config.n, 16);
    assert_eq!(report.config.hurst.value(), 0.1);
    assert_eq!(report.config.seed, 3);
    assert_eq!(report.config.max_iters, 50);

    fs::write(&path, "hurst=0.1\ncolour=blue\n").unwrap();
    assert_eq!(cli(&["solve", "--config", p]).code, EXIT_USAGE);
    assert_eq!(
        cli(&["solve", "--config", "/nonexistent/run.cfg"]).code,
        EXIT_USAGE
    );
}

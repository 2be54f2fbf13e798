use std::process::Command;

use gncs::cli::render;

fn gncs(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_gncs")).args(args).output().unwrap()
}

#[test]
fn state_json_reports_normalization() {
    let out = gncs(&["state", "--lambda", "0.5", "--r", "2", "--z-abs", "2", "--z-phase", "0"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["norm_check"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    // M = I₀(4)
    let i0_4 = 11.301_921_952_136_33;
    assert!((v["normalization"].as_f64().unwrap() / i0_4 - 1.0).abs() < 1e-12);
}

#[test]
fn squeeze_csv_shows_x1_squeezing_at_r4() {
    let out = gncs(&["squeeze", "--lambda", "0", "--r", "4", "--phi", "0", "--zsq-max", "16", "--steps", "64"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "lambda,r,phi,z_abs2,var_x1,var_x2,j3_abs,s1,s2,error");
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 64);
    assert!(rows.iter().all(|r| r[7].parse::<f64>().unwrap() < 0.0 && r[9].is_empty()));
}

#[test]
fn invalid_parameters_are_usage_errors() {
    let out = gncs(&["state", "--lambda=-0.6", "--r", "2", "--z-abs", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("lambda"));
    let out = gncs(&["measure", "--lambda", "0.75", "--r", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn r1_rows_outside_the_disk_carry_errors() {
    let o = render(["gncs", "stats", "--lambda", "0.5", "--r", "1", "--zsq-max", "2", "--steps", "4"]).unwrap();
    let text = String::from_utf8(o.bytes).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 4);
    assert!(rows[0].ends_with(','));
    assert!(rows[2].contains("Divergence") || rows[2].contains("|z| < 1"));
}

#[test]
fn wavefunction_and_overlap_outputs() {
    let o = render(["gncs", "wavefunction", "--lambda", "0.75", "--r", "3", "--z-abs", "1", "--steps", "10"]).unwrap();
    let text = String::from_utf8(o.bytes).unwrap();
    assert_eq!(text.lines().next().unwrap(), "x,re,im,abs2");
    assert_eq!(text.lines().count(), 11);

    let o = render([
        "gncs", "overlap", "--lambda", "0.5", "--r", "2", "--z-abs", "1,2", "--z-phase", "0,0",
    ])
    .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&o.bytes).unwrap();
    assert!(v["abs_difference"].as_f64().unwrap() < 1e-12);
}

#[test]
fn measure_json_and_csv_agree() {
    let base = ["gncs", "measure", "--lambda", "1.5", "--r", "2", "--steps", "5"];
    let csv = String::from_utf8(render(base).unwrap().bytes).unwrap();
    let json: serde_json::Value =
        serde_json::from_slice(&render(base.iter().copied().chain(["--format", "json"])).unwrap().bytes).unwrap();
    let first: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(first[3].parse::<f64>().unwrap(), json[0]["weight"].as_f64().unwrap());
}

#[test]
fn output_file_is_written() {
    let path = std::env::temp_dir().join(format!("gncs-cli-{}.csv", std::process::id()));
    let out = gncs(&["stats", "--lambda", "0", "--r", "2", "--steps", "3", "--output", path.to_str().unwrap()]);
    assert!(out.status.success() && out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(text.lines().count(), 4);
}

use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_occupancy"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn header(o: &Output) -> String {
    stdout(o).lines().next().unwrap_or_default().to_string()
}

/// Column `name` of every data row.
fn column(o: &Output, name: &str) -> Vec<String> {
    let text = stdout(o);
    let mut lines = text.lines();
    let idx = lines.next().unwrap().split(',').position(|h| h == name).unwrap();
    lines.map(|l| l.split(',').nth(idx).unwrap().to_string()).collect()
}

#[test]
fn headers() {
    let siso = data("low_snr_siso.scenario");
    let rice = data("rice_siso.json");
    let cases: [(Vec<&str>, &str); 6] = [
        (
            vec!["bounds", "--scenario", &siso, "--occupancy", "1e3"],
            "delta,B,deltaB,R_LB,R_LB_plot,R_UB,C_inf,gap",
        ),
        (
            vec!["bounds", "--scenario", &rice, "--occupancy", "1e3"],
            "delta,B,deltaB,R_LB,R_LB_plot,C_inf,gap",
        ),
        (
            vec!["critical", "--scenario", &siso],
            "deltaB_low,deltaB_low_exact,deltaB_opt,deltaB_opt_exact,deltaB_high_exact,deltaB_high,R_peak,C_inf,gap",
        ),
        (
            vec!["alpha", "--snr", "1e-2", "--bctc", "1e3"],
            "BcTc,alpha_max,alpha_max_over_2,alpha_min_p1,alpha_min_p10,alpha_plus,alpha_minus,\
             alpha_max_norm,alpha_max_over_2_norm,alpha_min_p1_norm,alpha_min_p10_norm,alpha_plus_norm,\
             alpha_minus_norm,clamped,collapsed",
        ),
        (
            vec!["fig6", "--max-antennas", "2"],
            "nt,nr,B_low_exact,B_low_approx,B_high_exact,B_high_approx",
        ),
        (
            vec!["verify", "--scenario", &siso, "--trials", "10000", "--format", "csv"],
            "check,estimate,std_error,z_score,pass",
        ),
    ];
    for (args, want) in cases {
        let o = run(&args);
        assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(header(&o), want, "{args:?}");
    }
}

#[test]
fn optimum_from_critical() {
    let o = run(&["critical", "--scenario", &data("mimo_2x2.scenario"), "--unit", "mhz"]);
    assert!(o.status.success());
    let opt: f64 = column(&o, "deltaB_opt")[0].parse().unwrap();
    let gap: f64 = column(&o, "gap")[0].parse().unwrap();
    assert!((opt - 120.0).abs() / 120.0 < 0.02, "{opt}");
    assert!(gap < 0.18);
    assert!(String::from_utf8_lossy(&o.stderr).contains("MHz"));
}

#[test]
fn bounds_depend_on_occupancy_only() {
    let o = run(&[
        "bounds",
        "--scenario",
        &data("low_snr_siso.scenario"),
        "--delta",
        "0.5,1",
        "--bandwidth",
        "1000,2000",
    ]);
    assert!(o.status.success());
    let r = column(&o, "R_LB");
    let x = column(&o, "deltaB");
    // δ outer: (0.5,1000) (0.5,2000) (1,1000) (1,2000)
    assert_eq!(x[1], x[2]);
    assert_eq!(r[1], r[2]);
    assert_ne!(r[0], r[3]);
}

#[test]
fn default_bounds_sweep_is_a_bell() {
    let o = run(&["bounds", "--scenario", &data("low_snr_siso.scenario"), "--no-upper"]);
    assert!(o.status.success());
    assert!(!header(&o).contains("R_UB"));
    let r: Vec<f64> = column(&o, "R_LB").iter().map(|v| v.parse().unwrap()).collect();
    assert_eq!(r.len(), 121);
    let peak = r.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
    assert!(peak > 0 && peak < 120);
    assert!(r[..=peak].windows(2).all(|w| w[0] <= w[1]));
    assert!(r[peak..].windows(2).all(|w| w[0] >= w[1]));
}

#[test]
fn json_output() {
    let o = run(&[
        "bounds",
        "--scenario",
        &data("low_snr_siso.scenario"),
        "--occupancy",
        "1e2,1e3",
        "--format",
        "json",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1]["deltaB"].as_f64(), Some(1e3));
    assert!(rows[0]["R_UB"].as_f64().unwrap() > rows[0]["R_LB"].as_f64().unwrap());
}

#[test]
fn out_file() {
    let path = std::env::temp_dir().join(format!("occupancy-fig6-{}.csv", std::process::id()));
    let p = path.display().to_string();
    let o = run(&["fig6", "--out", &p]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(text.lines().count(), 1 + 64);
}

#[test]
fn verify_is_deterministic() {
    let siso = data("low_snr_siso.scenario");
    let a = run(&[
        "verify",
        "--scenario",
        &siso,
        "--trials",
        "10000",
        "--format",
        "json",
        "--threads",
        "1",
    ]);
    let b = run(&[
        "verify",
        "--scenario",
        &siso,
        "--trials",
        "10000",
        "--format",
        "json",
        "--threads",
        "3",
    ]);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["all_pass"], serde_json::Value::Bool(true));
    assert_eq!(v["base_seed"], 42);
}

#[test]
fn exit_codes() {
    let siso = data("low_snr_siso.scenario");
    let o = run(&[
        "verify",
        "--scenario",
        &siso,
        "--trials",
        "10000",
        "--kurtosis-override",
        "2.5",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("kurtosis"));

    let usage: [&[&str]; 5] = [
        &["bounds", "--scenario", &data("bad_antennas.scenario")],
        &["bounds", "--scenario", &data("missing.scenario")],
        &["bounds"],
        &["bounds", "--scenario", &data("rice_siso.json"), "--upper"],
        &["critical", "--scenario", &siso, "--no-such-flag"],
    ];
    for args in usage {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty());
    }
}

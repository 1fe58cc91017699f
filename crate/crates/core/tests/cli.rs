use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_colored-dicke"))
        .args(args)
        .arg("--output-dir")
        .arg(out)
        .env("COLORED_DICKE_WORKERS", "2")
        .output()
        .expect("binary runs")
}

fn listing(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    names
}

fn assert_rerun_identical(command: &str, args: &[&str]) {
    let tmp = tempfile::tempdir().unwrap();
    let first = tmp.path().join("first");
    let mut full = vec![command];
    full.extend_from_slice(args);
    let o = bin(&full, &first);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let names = listing(&first);
    let csv = names.iter().find(|n| n.ends_with(".csv")).unwrap();

    let second = tmp.path().join("second");
    let cfg = first.join(csv);
    let o = bin(&[command, "--config", cfg.to_str().unwrap()], &second);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(names, listing(&second));
    for n in &names {
        assert_eq!(
            fs::read(first.join(n)).unwrap(),
            fs::read(second.join(n)).unwrap(),
            "{n} differs"
        );
    }
}

#[test]
fn exponent_csv_reproduces_from_embedded_config() {
    assert_rerun_identical("exponent", &["--s", "0.3,0.8,1.5", "--svg"]);
}

#[test]
fn spectrum_csv_reproduces_from_embedded_config() {
    assert_rerun_identical(
        "spectrum",
        &["--mode", "atom", "--y", "0,0.5", "--spectrum-points", "101", "--svg"],
    );
}

#[test]
fn softmode_and_thermal_reproduce() {
    assert_rerun_identical("softmode", &["--kappa", "2", "--s", "0.4,1.2"]);
    assert_rerun_identical("thermal", &["--s", "0.6", "--gamma", "0.03,0.5", "--t-grid", "0.5:2:0.5"]);
    assert_rerun_identical("sweep", &["--points", "6", "--s", "0.7"]);
}

#[test]
fn csv_layout() {
    let tmp = tempfile::tempdir().unwrap();
    let o = bin(&["exponent", "--s", "0.3,1.5"], tmp.path());
    assert!(o.status.success());
    let text = fs::read_to_string(tmp.path().join("exponent_gamma0.1_T0_mu0.csv")).unwrap();
    assert!(text.starts_with("# command = \"exponent\"\n"));
    let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data[0], "s,exponent,residual");
    assert_eq!(data.len(), 3);
    assert!(data[1].ends_with(",0.0000000000000000e0,nan"));
    let exponent: f64 = data[2].split(',').nth(1).unwrap().parse().unwrap();
    assert!((exponent - 1.0).abs() < 0.05);
    // 17 significant digits
    assert_eq!(data[2].split(',').next().unwrap(), "1.5000000000000000e0");
}

#[test]
fn validation_errors_exit_with_2() {
    let tmp = tempfile::tempdir().unwrap();
    for args in [
        vec!["sweep", "--s", "1.0"],
        vec!["sweep", "--s", "2.5"],
        vec!["spectrum", "--y", "1.2"],
        vec!["thermal", "--temperature", "1", "--mu", "0.5"],
        vec!["oracle-check", "--temperature", "1"],
        vec!["exponent", "--points", "4"],
        vec!["exponent", "--eps-max", "0.5"],
        vec!["sweep", "--bogus"],
        vec!["sweep", "--s-grid", "1:0:0.1"],
    ] {
        let o = bin(&args, tmp.path());
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
    assert!(!tmp.path().join("sweep_s1_gamma0.1_T0_mu0.csv").exists());
}

#[test]
fn config_from_other_command_is_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("run.toml");
    fs::write(&cfg, "command = \"thermal\"\n").unwrap();
    let o = bin(&["sweep", "--config", cfg.to_str().unwrap()], tmp.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn flags_override_config_file() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("run.toml");
    fs::write(&cfg, "s = 0.6\ngamma = [0.2]\npoints = 4\n").unwrap();
    let o = bin(&["sweep", "--config", cfg.to_str().unwrap(), "--s", "0.7"], tmp.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(tmp.path().join("sweep_s0.7_gamma0.2_T0_mu0.csv").exists());
}

#[test]
fn bad_worker_count_is_a_validation_error() {
    let tmp = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_colored-dicke"))
        .args(["sweep", "--output-dir"])
        .arg(tmp.path())
        .env("COLORED_DICKE_WORKERS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use sqsl::cli::{ModelSpec, OrthoSpec, RunConfig, CURVE_HEADER};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qsl"))
}

fn configs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn run(args: &[&str], cwd: &Path) -> Output {
    bin().args(args).current_dir(cwd).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn column(csv: &str, name: &str) -> Vec<f64> {
    let mut lines = csv.lines();
    let idx = lines.next().unwrap().split(',').position(|c| c == name).unwrap();
    lines.map(|l| l.split(',').nth(idx).unwrap().parse().unwrap()).collect()
}

#[test]
fn shipped_configs_round_trip() {
    let mut count = 0;
    for entry in std::fs::read_dir(configs_dir()).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        let cfg = RunConfig::parse(&text).unwrap();
        assert_eq!(cfg.to_toml().unwrap(), text, "{}", path.display());
        cfg.resolve().unwrap();
        count += 1;
    }
    assert_eq!(count, 18);
}

#[test]
fn curve_output_is_deterministic_across_workers() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs_dir().join("fig3b.cfg");
    let mut outputs = Vec::new();
    for workers in ["1", "3"] {
        let out = dir.path().join(format!("w{workers}.csv"));
        let o = bin()
            .env("QSL_WORKERS", workers)
            .args(["curve", "--config", cfg.to_str().unwrap(), "--points", "301", "--out", out.to_str().unwrap()])
            .output()
            .unwrap();
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        outputs.push(std::fs::read(out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    let text = String::from_utf8(outputs.remove(0)).unwrap();
    assert_eq!(text.lines().next().unwrap(), CURVE_HEADER);
    assert_eq!(text.lines().count(), 1 + 3 * 301);
    assert!(text.contains("ortho=bloch(0.900000,4.400000);sign=paper-fixed"));
}

#[test]
fn geodesic_run_is_saturated() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &["curve", "--model", "qubit-product:m=1,alpha=0.7071067811865476", "--t-max", "3.1", "--points", "101"],
        dir.path(),
    );
    assert_eq!(code(&o), 0);
    let csv = String::from_utf8(o.stdout).unwrap();
    for col in ["ratio_mt", "ratio_sqsl"] {
        for v in column(&csv, col) {
            assert!((v - 1.0).abs() < 1e-6, "{col}: {v}");
        }
    }
}

#[test]
fn mt_loosens_with_n() {
    let dir = tempfile::tempdir().unwrap();
    let mut late = Vec::new();
    for n in 2..=4 {
        let f = configs_dir().join(format!("fig1_n{n}.cfg"));
        let o = run(&["curve", "--config", f.to_str().unwrap(), "--points", "801", "--out", "x.csv"], dir.path());
        assert_eq!(code(&o), 0);
        let csv = std::fs::read_to_string(dir.path().join("x.csv")).unwrap();
        let r = column(&csv, "ratio_mt");
        let tail = &r[400..];
        late.push(tail.iter().filter(|v| v.is_finite()).sum::<f64>() / tail.len() as f64);
    }
    assert!(late[0] < late[1] && late[1] < late[2], "{late:?}");
}

#[test]
fn json_uses_null_for_infinities() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &["curve", "--model", "homogeneous-product:m=1,n=2", "--points", "101", "--t-max", "6.283185307179586", "--format", "json"],
        dir.path(),
    );
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let recs = v["curves"][0]["records"].as_array().unwrap();
    assert_eq!(recs.len(), 101);
    assert!(recs.iter().any(|r| r["ratio_mt"].is_null()));
}

#[test]
fn invalid_configs_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["curve", "--model", "qubit-product:m=2,alpha=0.5", "--points", "0"],
        vec!["curve", "--model", "spin-chain:m=4,k=3"],
        vec!["curve", "--model", "qubit-product:m=2"],
        vec!["curve", "--model", "nonsense:m=2"],
        vec!["curve", "--model", "homogeneous-product:m=2,n=3", "--ortho", "bloch:theta=1,phi=1"],
        vec!["curve", "--model", "qubit-product:m=2,alpha=0.5", "--sign-mode", "both"],
        vec!["optimize", "--model", "homogeneous-product:m=2,n=3"],
        vec!["curve"],
    ] {
        let o = run(&args, dir.path());
        assert_eq!(code(&o), 2, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, "sign_mode = \"adaptive\"\n[model]\nkind = \"qubit-ghz\"\nm = 2\nalpha = 0.6\nextra = 1\n").unwrap();
    assert_eq!(code(&run(&["curve", "--config", bad.to_str().unwrap()], dir.path())), 2);
}

#[test]
fn flags_override_file() {
    let dir = tempfile::tempdir().unwrap();
    let f = configs_dir().join("fig6b.cfg");
    let o = run(
        &["curve", "--config", f.to_str().unwrap(), "--ortho", "custom:XX=1,ZI=0.5", "--sign-mode", "adaptive", "--points", "401", "--out", "o.csv"],
        dir.path(),
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("o.csv")).unwrap();
    assert_eq!(csv.lines().count(), 402);
    assert!(csv.lines().skip(1).all(|l| l.contains("ortho=custom(1*XX+0.5*ZI);sign=adaptive")));
}

#[test]
fn optimize_writes_landscape_and_optima() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = "sign_mode = \"paper-fixed\"\n\n[model]\nkind = \"qubit-product\"\nm = 2\nalpha = 0.5773502691896258\n\n\
               [output]\npath = \"land.csv\"\nformat = \"csv\"\noptima_path = \"opt.json\"\n\n\
               [optimizer]\ntheta_step = 0.1\nphi_step = 0.1\nsamples = 100\npanels_per_step = 10\nrefine = false\n";
    std::fs::write(dir.path().join("o.cfg"), cfg).unwrap();
    let o = run(&["optimize", "--config", "o.cfg"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let land = std::fs::read_to_string(dir.path().join("land.csv")).unwrap();
    assert_eq!(land.lines().next(), Some("theta,phi,objective"));
    assert_eq!(land.lines().count(), 1 + 31 * 63);
    let optima: Vec<serde_json::Value> =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("opt.json")).unwrap()).unwrap();
    let near = |t: f64, p: f64| {
        optima.iter().any(|c| {
            (c["theta"].as_f64().unwrap() - t).abs() <= 0.15 && (c["phi"].as_f64().unwrap() - p).abs() <= 0.15
        })
    };
    assert!(near(0.9, 4.4) && near(2.2, 1.3), "{optima:?}");
}

#[test]
fn validate_passes_and_negative_control_fails() {
    let dir = tempfile::tempdir().unwrap();
    let ok = run(&["validate"], dir.path());
    assert_eq!(code(&ok), 0, "{}", String::from_utf8_lossy(&ok.stdout));
    let table = String::from_utf8(ok.stdout).unwrap();
    for name in ["prop1", "prop2", "bound-ordering", "orthogonality-residuals", "analytic-vs-dense", "spin-chain-overlap"] {
        assert!(table.lines().any(|l| l.starts_with(name) && l.contains("PASS")), "{name}\n{table}");
    }
    let bad = run(&["validate", "--sign-mode", "inverted"], dir.path());
    assert_eq!(code(&bad), 1);
    let table = String::from_utf8(bad.stdout).unwrap();
    assert!(table.lines().any(|l| l.starts_with("bound-ordering") && l.contains("FAIL")), "{table}");
    assert!(String::from_utf8_lossy(&bad.stderr).contains("bound-ordering"));

    let f = configs_dir().join("fig7_q4.cfg");
    let with_cfg = run(&["validate", "--config", f.to_str().unwrap(), "--points", "401"], dir.path());
    assert_eq!(code(&with_cfg), 0, "{}", String::from_utf8_lossy(&with_cfg.stdout));
}

#[test]
fn flag_parsers() {
    let m = ModelSpec::parse_flag("qubit-ghz:m=3, alpha=0.6, beta_phase=0.5").unwrap();
    assert_eq!(m.m, 3);
    assert_eq!(m.alpha, Some(0.6));
    assert!(ModelSpec::parse_flag("qubit-ghz:alpha=0.6").is_err());
    assert!(ModelSpec::parse_flag("qubit-ghz:m=2,q=3").is_err());
    assert_eq!(OrthoSpec::parse_flag("projector").unwrap(), OrthoSpec::ProjectorDeviation);
    assert_eq!(OrthoSpec::parse_flag("bloch:theta=1,phi=2").unwrap(), OrthoSpec::Bloch { theta: 1.0, phi: 2.0 });
    assert!(OrthoSpec::parse_flag("bloch:theta=1").is_err());
}

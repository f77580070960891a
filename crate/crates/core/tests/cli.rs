use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_diagprod"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn config(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

const LAMPLIGHTER: &str = "profile.family = identity\nbackend = lamplighter\nkappa = 2\nlambda = 2\nseed = 3\n";

#[test]
fn synth_identity_schedule() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "id.conf", "profile.family = identity\n");
    let o = run(&["synth", "--config", &cfg], dir.path());
    assert!(o.status.success());
    let csv = std::fs::read_to_string(dir.path().join("schedule.csv")).unwrap();
    assert_eq!(csv, "m,k_m,l_m\n0,0,1\n1,inf,1\n");
}

#[test]
fn build_then_verify_lamplighter() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "ll.conf", LAMPLIGHTER);
    assert!(run(&["build", "--config", &cfg, "--level", "1"], dir.path()).status.success());
    let tile = std::fs::read_to_string(dir.path().join("tile_1.txt")).unwrap();
    assert_eq!(tile.lines().count(), 32);
    let o = run(&["verify", "--config", &cfg, "--level", "1"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let log = String::from_utf8_lossy(&o.stderr);
    assert!(log.contains("|T_1|=32, partition OK, Følner ratio 2/2"), "{log}");
    let stats = std::fs::read_to_string(dir.path().join("stats.csv")).unwrap();
    assert!(stats.starts_with("n,T_n,ln_T_n,R_n,eps_n,R'_n,eps'_n\n0,4,"));
}

#[test]
fn tampered_tile_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "ll.conf", LAMPLIGHTER);
    assert!(run(&["build", "--config", &cfg, "--level", "1"], dir.path()).status.success());
    let path = dir.path().join("tile_1.txt");
    let text = std::fs::read_to_string(&path).unwrap();
    let short: Vec<&str> = text.lines().skip(1).collect();
    std::fs::write(&path, short.join("\n")).unwrap();
    let o = run(&["verify", "--config", &cfg, "--level", "1"], dir.path());
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn odd_dihedral_level_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "odd.conf", "lambda = 3\nschedule.k = 0, 2, inf\nschedule.l = 1, 3\n");
    let o = run(&["build", "--config", &cfg], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("hypothesis (H)"));
}

#[test]
fn cap_exceeded_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "cap.conf", &format!("{LAMPLIGHTER}cap = 100\n"));
    let o = run(&["build", "--config", &cfg, "--level", "2"], dir.path());
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn simulate_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "ll.conf", LAMPLIGHTER);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        assert!(run(&["simulate", "--config", &cfg, "--level", "2", "--eps", "0.5"], out).status.success());
    }
    for f in ["histograms.csv", "moments.csv"] {
        let x = std::fs::read(a.join(f)).unwrap();
        assert_eq!(x, std::fs::read(b.join(f)).unwrap());
        assert!(!x.is_empty());
    }
}

#[test]
fn sampled_simulation_records_seed() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "ll.conf", &format!("{LAMPLIGHTER}cap = 100\n"));
    let o = run(&["simulate", "--config", &cfg, "--level", "2", "--samples", "300", "--seed", "9"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let m = std::fs::read_to_string(dir.path().join("moments.csv")).unwrap();
    for line in m.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!((f[4], f[6], f[7], f[8]), ("300", "unknown", "false", "9"), "{line}");
    }
}

#[test]
fn report_writes_series() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(
        dir.path(),
        "p.conf",
        "profile.family = power\nprofile.alpha = 2\ndepth = 42\nmode = synthetic\nreport.n_max = 30\n",
    );
    assert!(run(&["report", "--config", &cfg], dir.path()).status.success());
    let s = std::fs::read_to_string(dir.path().join("series.csv")).unwrap();
    assert_eq!(s.lines().count(), 31);
}

#[test]
fn missing_config_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["synth"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

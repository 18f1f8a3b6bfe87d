//! End-to-end runs of the `gravem` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use gravem_cli::snapshot::Snapshot;
use tempfile::TempDir;

fn gravem(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gravem")).current_dir(dir).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

const TRIVIAL: &str = "\
grid.n = 16
grid.L = 4
t_final = 0.5
output.path = out
output.every = 2
model = maxwell
data.family = trivial
";

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines().skip(1).map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect()
}

// ---------------------------------------------------------------- simulate

#[test]
fn trivial_config_writes_zero_diagnostics() {
    let dir = TempDir::new().unwrap();
    let conf = write(&dir, "run.conf", TRIVIAL);
    let out = gravem(dir.path(), &["simulate", &conf]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let csv = fs::read_to_string(dir.path().join("out/diagnostics.csv")).unwrap();
    assert_eq!(
        csv.lines().next().unwrap(),
        "t,energy_k0,energy_k1,energy_k2,gauge_sup,gauge_l2,divB_l2,divD_l2,alphabar_sup,alpha_sup,rho_sup,sigma_sup,F_total_sup"
    );
    let rows = rows(&csv);
    assert!(rows.len() >= 2);
    assert_eq!(rows[0][0], 0.0);
    assert!((rows.last().unwrap()[0] - 0.5).abs() < 1e-12);
    for r in &rows {
        assert!(r[1..].iter().all(|v| *v == 0.0), "{r:?}");
    }
    let snapshots = fs::read_dir(dir.path().join("out")).unwrap().filter(|e| e.as_ref().unwrap().file_name().to_string_lossy().starts_with("snapshot_")).count();
    assert_eq!(snapshots, rows.len());
}

#[test]
fn snapshots_decode_with_the_final_state() {
    let dir = TempDir::new().unwrap();
    let conf = write(&dir, "run.conf", &TRIVIAL.replace("trivial", "em_pulse\ndata.amplitude = 1e-2\ndata.width = 1"));
    assert_eq!(code(&gravem(dir.path(), &["simulate", &conf])), 0);
    let mut names: Vec<_> = fs::read_dir(dir.path().join("out")).unwrap().map(|e| e.unwrap().path()).filter(|p| p.extension().is_some_and(|e| e == "bin")).collect();
    names.sort();
    let first = Snapshot::read(&mut std::io::BufReader::new(fs::File::open(&names[0]).unwrap())).unwrap();
    let last = Snapshot::read(&mut std::io::BufReader::new(fs::File::open(names.last().unwrap()).unwrap())).unwrap();
    assert_eq!((first.n, first.l, first.t), (16, 4.0, 0.0));
    assert!((last.t - 0.5).abs() < 1e-12);
    assert_eq!(last.names.len(), last.fields.len());
    assert!(last.names.iter().any(|n| n == "B_x"));
    assert!(last.fields.iter().all(|f| f.len() == 16 * 16 * 16 && f.iter().all(|v| v.is_finite())));
    assert_ne!(first.fields, last.fields);
}

#[test]
fn missing_key_exits_2_naming_it() {
    let dir = TempDir::new().unwrap();
    let conf = write(&dir, "run.conf", &TRIVIAL.replace("model = maxwell\n", ""));
    let out = gravem(dir.path(), &["simulate", &conf]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("`model`"), "{}", stderr(&out));
}

#[test]
fn bad_value_exits_2_with_line_number() {
    let dir = TempDir::new().unwrap();
    let conf = write(&dir, "run.conf", &TRIVIAL.replace("grid.L = 4", "grid.L = -4"));
    let out = gravem(dir.path(), &["simulate", &conf]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("line 2"), "{}", stderr(&out));
}

#[test]
fn unstable_run_exits_3_with_step() {
    let dir = TempDir::new().unwrap();
    let text = "grid.n = 16\ngrid.L = 4\nt_final = 400\ncfl = 1\noutput.path = out\noutput.every = 100000\n\
                model = maxwell\ndata.family = em_pulse\ndata.amplitude = 1e-3\ndata.width = 1\n";
    let conf = write(&dir, "run.conf", text);
    let out = gravem(dir.path(), &["simulate", &conf]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("aborted at step 14"), "{}", stderr(&out));
}

#[test]
fn inadmissible_initial_data_exits_3() {
    let dir = TempDir::new().unwrap();
    let text = "grid.n = 16\ngrid.L = 4\nt_final = 1\noutput.path = out\nmodel = born_infeld\nbeta = 1\n\
                data.family = em_pulse\ndata.amplitude = 20\ndata.width = 1\n";
    let conf = write(&dir, "run.conf", text);
    let out = gravem(dir.path(), &["simulate", &conf]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("step 0"), "{}", stderr(&out));
}

#[test]
fn thread_count_does_not_change_output() {
    let text = TRIVIAL
        .replace("data.family = trivial", "data.family = em_pulse\ndata.amplitude = 1e-2\ndata.width = 1")
        .replace("model = maxwell", "model = born_infeld");
    let run = |threads: &str| {
        let dir = TempDir::new().unwrap();
        let conf = write(&dir, "run.conf", &text);
        let out = Command::new(env!("CARGO_BIN_EXE_gravem"))
            .current_dir(dir.path())
            .env("GRAVEM_THREADS", threads)
            .args(["simulate", &conf])
            .output()
            .unwrap();
        assert_eq!(code(&out), 0, "{}", stderr(&out));
        fs::read(dir.path().join("out/diagnostics.csv")).unwrap()
    };
    assert_eq!(run("1"), run("3"));
}

#[test]
fn bad_thread_count_exits_2() {
    let dir = TempDir::new().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_gravem"))
        .current_dir(dir.path())
        .env("GRAVEM_THREADS", "zero")
        .args(["verify", "identities", "--trials", "1"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
}

#[test]
fn maxwell_pulse_matches_committed_fixture() {
    let dir = TempDir::new().unwrap();
    let conf = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/maxwell_pulse.conf");
    let out = gravem(dir.path(), &["simulate", conf.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let got = rows(&fs::read_to_string(dir.path().join("maxwell_pulse/diagnostics.csv")).unwrap());
    let want = rows(include_str!("fixtures/maxwell_pulse.csv"));
    assert_eq!(got.len(), want.len());
    for (g, w) in got.iter().zip(&want) {
        for (a, b) in g.iter().zip(w) {
            assert!((a - b).abs() <= 1e-10, "{g:?}\nvs\n{w:?}");
        }
    }
}

// ---------------------------------------------------------------- verify

#[test]
fn identities_suite_passes_with_1000_trials() {
    let dir = TempDir::new().unwrap();
    let out = gravem(dir.path(), &["verify", "identities", "--trials", "1000"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.lines().all(|l| l.starts_with("PASS ")), "{text}");
    assert!(text.lines().last().unwrap().starts_with("PASS identities"));
}

#[test]
fn stress_suite_passes() {
    let dir = TempDir::new().unwrap();
    let out = gravem(dir.path(), &["verify", "stress", "--trials", "200"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
}

#[test]
fn unknown_suite_exits_2() {
    let dir = TempDir::new().unwrap();
    let out = gravem(dir.path(), &["verify", "everything"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("everything"));
}

// ---------------------------------------------------------------- decay-fit

const HEADER: &str = "t,energy_k0,energy_k1,energy_k2,gauge_sup,gauge_l2,divB_l2,divD_l2,alphabar_sup,alpha_sup,rho_sup,sigma_sup,F_total_sup";

fn synthetic(ts: impl Iterator<Item = f64>) -> String {
    let mut csv = format!("{HEADER}\n");
    for t in ts {
        let f = 3.0 / t;
        csv.push_str(&format!("{t},0,0,0,0,0,0,0,{f},{f},{f},{f},{f}\n"));
    }
    csv
}

fn exponent(out: &Output) -> f64 {
    let text = stdout(out);
    let field = text.split_whitespace().find_map(|w| w.strip_prefix("exponent=")).expect("exponent printed");
    field.parse().unwrap()
}

#[test]
fn planted_inverse_t_is_recovered() {
    let dir = TempDir::new().unwrap();
    let csv = write(&dir, "d.csv", &synthetic((2..=60).map(|i| i as f64 * 0.5)));
    let out = gravem(dir.path(), &["decay-fit", &csv, "--probe", "F_total", "--window", "5,20"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!((exponent(&out) + 1.0).abs() <= 0.01);
}

#[test]
fn maxwell_fixture_decays_like_inverse_t() {
    let csv = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/maxwell_pulse.csv");
    let dir = TempDir::new().unwrap();
    let out = gravem(dir.path(), &["decay-fit", csv.to_str().unwrap(), "--probe", "F_total", "--window", "3,9"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let p = exponent(&out);
    assert!((-1.3..=-0.8).contains(&p), "{p}");
}

#[test]
fn three_row_window_exits_1() {
    let dir = TempDir::new().unwrap();
    let csv = write(&dir, "d.csv", &synthetic([5.0, 6.0, 7.0, 30.0].into_iter()));
    let out = gravem(dir.path(), &["decay-fit", &csv, "--probe", "rho", "--window", "5,20"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn malformed_csv_exits_2() {
    let dir = TempDir::new().unwrap();
    let missing = write(&dir, "a.csv", "t,rho_sup\n1,2\n");
    let out = gravem(dir.path(), &["decay-fit", &missing, "--probe", "F_total", "--window", "5,20"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("F_total_sup"), "{}", stderr(&out));
    let garbage = write(&dir, "b.csv", &format!("{HEADER}\n1,0,0,0,0,0,0,0,0,0,x,0,0\n"));
    let out = gravem(dir.path(), &["decay-fit", &garbage, "--probe", "rho", "--window", "5,20"]);
    assert_eq!(code(&out), 2);
    let ragged = write(&dir, "c.csv", &format!("{HEADER}\n1,2\n"));
    let out = gravem(dir.path(), &["decay-fit", &ragged, "--probe", "rho", "--window", "5,20"]);
    assert_eq!(code(&out), 2);
    let out = gravem(dir.path(), &["decay-fit", "nope.csv", "--probe", "rho", "--window", "5,20"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn unknown_probe_exits_2() {
    let dir = TempDir::new().unwrap();
    let csv = write(&dir, "d.csv", &synthetic((2..=60).map(|i| i as f64 * 0.5)));
    let out = gravem(dir.path(), &["decay-fit", &csv, "--probe", "beta", "--window", "5,20"]);
    assert_eq!(code(&out), 2);
}

//! End-to-end tests of the `qtrap` binary: exit codes, file round-trips,
//! seed logging, and flag/file precedence for decoder configuration.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qtrap_core::alist::load_alist;
use qtrap_core::codes::{CodeSpec, BuiltCode};

fn qtrap() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qtrap"))
}

fn workspace_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .canonicalize()
        .expect("workspace root")
}

fn data(name: &str) -> PathBuf {
    workspace_root().join("data").join(name)
}

fn scratch_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!(
        "qtrap-cli-{tag}-{}-{}",
        std::process::id(),
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .unwrap()
            .as_nanos()
    ));
    std::fs::create_dir_all(&dir).expect("scratch dir");
    dir
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn run_ok(cmd: &mut Command) -> String {
    let out = cmd.output().expect("spawn qtrap");
    assert!(
        out.status.success(),
        "expected success, got {:?}\nstdout:\n{}\nstderr:\n{}",
        out.status.code(),
        stdout_of(&out),
        stderr_of(&out)
    );
    stdout_of(&out)
}

fn run_expect_code(cmd: &mut Command, code: i32) -> Output {
    let out = cmd.output().expect("spawn qtrap");
    assert_eq!(
        out.status.code(),
        Some(code),
        "expected exit code {code}\nstdout:\n{}\nstderr:\n{}",
        stdout_of(&out),
        stderr_of(&out)
    );
    out
}

// ---------------------------------------------------------------------------
// Exit codes
// ---------------------------------------------------------------------------

#[test]
fn usage_errors_exit_with_code_2() {
    // No code input at all (clap-level error).
    run_expect_code(qtrap().arg("params"), 2);
    // A code name that resolves to nothing.
    run_expect_code(
        qtrap().args(["params", "--code", "definitely-not-a-code"]),
        2,
    );
    // Malformed cap value.
    run_expect_code(
        qtrap().args([
            "ts",
            "--spec",
            data("ring3.alist").to_str().unwrap(),
            "--cn-cap",
            "bogus",
        ]),
        2,
    );
    // decode requires exactly one of --error / --syndrome.
    run_expect_code(
        qtrap().args(["decode", "--spec", data("toric3.code").to_str().unwrap()]),
        2,
    );
}

#[test]
fn infeasible_requests_exit_with_code_1() {
    // FER sweeps need a CSS code; a bare classical matrix cannot run one.
    let out = run_expect_code(
        qtrap().args([
            "fer",
            "--spec",
            data("ring3.alist").to_str().unwrap(),
            "--p",
            "0.01",
        ]),
        1,
    );
    assert!(
        stderr_of(&out).contains("CSS"),
        "stderr should explain the CSS requirement: {}",
        stderr_of(&out)
    );
}

// ---------------------------------------------------------------------------
// Round-trips through files
// ---------------------------------------------------------------------------

#[test]
fn construct_writes_alists_identical_to_in_memory_build() {
    let dir = scratch_dir("construct");
    let stdout = run_ok(qtrap().args([
        "construct",
        "--spec",
        data("a1.code").to_str().unwrap(),
        "--out-dir",
        dir.to_str().unwrap(),
    ]));
    assert!(stdout.contains("n=254 k=28"), "stdout: {stdout}");

    let spec = CodeSpec::load(&data("a1.code")).expect("load spec");
    let BuiltCode::Css(code) = spec.build().expect("build") else {
        panic!("a1 should build a CSS code");
    };
    let hx = load_alist(&dir.join("a1_hx.alist")).expect("read hx");
    let hz = load_alist(&dir.join("a1_hz.alist")).expect("read hz");
    assert_eq!(hx, code.h_x, "written h_x must reload bit-exactly");
    assert_eq!(hz, code.h_z, "written h_z must reload bit-exactly");

    // The written alist is itself loadable as a code spec.
    let reparams = run_ok(qtrap().args([
        "params",
        "--spec",
        dir.join("a1_hx.alist").to_str().unwrap(),
    ]));
    assert!(reparams.contains("kind=classical"), "{reparams}");
    assert!(reparams.contains("n=254"), "{reparams}");

    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn construct_of_an_alist_spec_reproduces_the_file_byte_for_byte() {
    let dir = scratch_dir("alist-roundtrip");
    run_ok(qtrap().args([
        "construct",
        "--spec",
        data("ring3.alist").to_str().unwrap(),
        "--out-dir",
        dir.to_str().unwrap(),
    ]));
    let original = std::fs::read(data("ring3.alist")).expect("read fixture");
    let rewritten = std::fs::read(dir.join("ring3.alist")).expect("read output");
    assert_eq!(original, rewritten, "writer output drifted from fixture");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn code_names_resolve_against_the_data_directory() {
    let stdout = run_ok(
        qtrap()
            .current_dir(workspace_root())
            .args(["params", "--code", "a1"]),
    );
    assert!(stdout.contains("name=a1"), "{stdout}");
    assert!(stdout.contains("kind=css"), "{stdout}");
    assert!(stdout.contains("n=254"), "{stdout}");
    assert!(stdout.contains("k=28"), "{stdout}");
}

// ---------------------------------------------------------------------------
// Known small outputs
// ---------------------------------------------------------------------------

#[test]
fn cycle_census_of_the_three_ring_is_a_single_six_cycle() {
    // The weight-2 circulant on 3 bits is one hexagon as a Tanner graph.
    let stdout = run_ok(qtrap().args([
        "cycles",
        "--spec",
        data("ring3.alist").to_str().unwrap(),
        "--max-len",
        "10",
    ]));
    let rows: Vec<&str> = stdout
        .lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .collect();
    assert!(stdout.contains("# girth=6"), "{stdout}");
    // The CSV lists only lengths with a nonzero count.
    assert_eq!(rows, vec!["length,count", "6,1"], "{stdout}");
}

#[test]
fn decode_reports_the_injected_error_for_an_easy_syndrome() {
    let stdout = run_ok(qtrap().args([
        "decode",
        "--spec",
        data("toric3.code").to_str().unwrap(),
        "--side",
        "x",
        "--error",
        "0",
        "--alg",
        "sum_product",
        "--iters",
        "20",
    ]));
    assert!(stdout.contains("matched=true"), "{stdout}");
    assert!(stdout.contains("error=0\n"), "{stdout}");
    // A single qubit flip is recovered exactly, or at worst up to a
    // stabilizer; either way the outcome line must not report a logical.
    assert!(
        stdout.contains("outcome=converged_exact")
            || stdout.contains("outcome=converged_degenerate"),
        "{stdout}"
    );
}

// ---------------------------------------------------------------------------
// Seed logging and reproducibility
// ---------------------------------------------------------------------------

#[test]
fn fer_logs_its_seed_and_reruns_byte_identically_across_worker_counts() {
    let spec = data("toric3.code");
    let base_args = |cmd: &mut Command| {
        cmd.args([
            "fer",
            "--spec",
            spec.to_str().unwrap(),
            "--p",
            "0.04,0.08",
            "--min-failures",
            "4",
            "--max-trials",
            "2048",
            "--alg",
            "min_sum",
            "--iters",
            "8",
        ]);
    };

    // First run omits --seed; the header must echo the one it drew.
    let mut first = qtrap();
    base_args(&mut first);
    let out1 = run_ok(&mut first);
    let seed_line = out1
        .lines()
        .find(|l| l.starts_with("# seed="))
        .expect("header must log the seed");
    let seed = seed_line.trim_start_matches("# seed=").to_string();

    // Reruns with that seed reproduce the whole report byte for byte,
    // no matter how many worker threads are used.
    for workers in ["1", "3"] {
        let mut rerun = qtrap();
        base_args(&mut rerun);
        rerun.args(["--seed", &seed, "--workers", workers]);
        let out2 = run_ok(&mut rerun);
        assert_eq!(
            out1, out2,
            "rerun with seed {seed} and --workers {workers} diverged"
        );
    }
}

// ---------------------------------------------------------------------------
// Decoder configuration precedence
// ---------------------------------------------------------------------------

#[test]
fn decoder_flags_override_values_from_the_spec_file() {
    let dir = scratch_dir("decoder-spec");
    let spec_file = dir.join("dec.cfg");
    std::fs::write(
        &spec_file,
        "algorithm=sum_product\nmax_iters=7\nschedule=flooding\n",
    )
    .expect("write decoder spec");

    // File alone: the resolved decoder line reflects the file.
    let stdout = run_ok(qtrap().args([
        "decode",
        "--spec",
        data("toric3.code").to_str().unwrap(),
        "--error",
        "0",
        "--decoder-spec",
        spec_file.to_str().unwrap(),
    ]));
    let decoder_line = |s: &str| {
        s.lines()
            .find(|l| l.starts_with("# decoder="))
            .expect("decoder header line")
            .to_string()
    };
    let line = decoder_line(&stdout);
    assert!(line.contains("algorithm=sum_product"), "{line}");
    assert!(line.contains("max_iters=7"), "{line}");

    // Flags override individual keys while the rest of the file stands.
    let stdout = run_ok(qtrap().args([
        "decode",
        "--spec",
        data("toric3.code").to_str().unwrap(),
        "--error",
        "0",
        "--decoder-spec",
        spec_file.to_str().unwrap(),
        "--alg",
        "min_sum",
        "--iters",
        "9",
    ]));
    let line = decoder_line(&stdout);
    assert!(line.contains("algorithm=min_sum"), "{line}");
    assert!(line.contains("max_iters=9"), "{line}");

    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn explicit_layer_lists_are_accepted_on_the_command_line() {
    // Two explicit layers covering all 18 variable nodes of the toric
    // x-side graph (the layered schedule updates column by column).
    let evens = "0 2 4 6 8 10 12 14 16";
    let odds = "1 3 5 7 9 11 13 15 17";
    let plan = format!("{evens}|{odds}");
    let stdout = run_ok(qtrap().args([
        "decode",
        "--spec",
        data("toric3.code").to_str().unwrap(),
        "--error",
        "1",
        "--sched",
        "layered",
        "--layers",
        &plan,
        "--alg",
        "min_sum",
    ]));
    assert!(stdout.contains("matched=true"), "{stdout}");
    assert!(
        stdout.contains(&format!("layers={plan}")),
        "resolved decoder line should round-trip the explicit plan: {stdout}"
    );
}

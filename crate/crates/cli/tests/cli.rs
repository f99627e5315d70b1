use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use aliquot_cli::manifest::RunManifest;
use aliquot_cli::output::*;
use aliquot_core::construct::WitnessJson;
use serde::de::DeserializeOwned;

fn run_in(dir: Option<&Path>, args: &[&str], envs: &[(&str, &Path)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_aliquot"));
    cmd.args(args).env_remove("ALIQUOT_SIEVE_CACHE");
    if let Some(d) = dir {
        cmd.current_dir(d);
    }
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn run(args: &[&str]) -> Output {
    run_in(None, args, &[])
}

fn stdout_ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json<T: DeserializeOwned>(args: &[&str]) -> T {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    serde_json::from_str(&stdout_ok(&full)).unwrap_or_else(|e| panic!("{args:?}: {e}"))
}

#[test]
fn fiber_row() {
    assert_eq!(
        stdout_ok(&["fiber", "6", "100"]),
        "m,count,preimages\n6,2,6;25\n"
    );
    assert_eq!(
        stdout_ok(&["fiber", "6,9", "100"]),
        "m,count,preimages\n6,2,6;25\n9,1,15\n"
    );
}

#[test]
fn untouchable_line() {
    assert_eq!(stdout_ok(&["untouchable", "100"]), "2,5,52,88,96\n");
}

#[test]
fn profile_has_sigma() {
    let p: ProfileOut = json(&["profile", "120"]);
    assert_eq!((p.sigma, p.s, p.tau), (360, 240, 16));
    let p: ProfileOut = json(&["profile", "1"]);
    assert_eq!(p.largest_prime, None);
    assert!(stdout_ok(&["profile", "1"]).ends_with("1,1,0,1,0,1,,,1\n"));
}

#[test]
fn every_subcommand_matches_its_schema() {
    let _: SieveOut = json(&["sieve", "1000"]);
    let f: Vec<FiberOut> = json(&["fiber", "9", "81"]);
    assert!(f[0].complete_for_all_n);
    let _: SemiprimeOut = json(&["semiprime", "25"]);
    let _: UntouchableOut = json(&["untouchable", "20"]);
    let m: MultiplicityOut = json(&["multiplicity", "100"]);
    assert_eq!(m.even, vec![[40, 3]]);
    let c: Vec<CollisionOut> = json(&["collision", "1", "3", "17"]);
    assert!(c
        .iter()
        .any(|r| r.k_value == 160 && r.pairs == vec![[5, 17], [7, 13]]));
    let w: WitnessJson = json(&[
        "cluster",
        "2",
        "9/10",
        "17",
        "--seed",
        "2",
        "--waive",
        "primes_above_seed",
        "--waive",
        "primes_above_ratio_bound",
    ]);
    assert_eq!(
        (w.k_value, w.target, w.preimages.clone()),
        (160, 154, vec![170, 182])
    );
    assert_eq!(
        w.waived_constraints,
        vec!["primes_above_seed", "primes_above_ratio_bound"]
    );
    let k: Vec<KnaOut> = json(&["kna", "3", "360", "1000"]);
    assert_eq!(k.len(), 1);
    assert_eq!((k[0].n, k[0].kind.as_str()), (840, "regular"));
    let _: Vec<SporadicOut> = json(&["sporadic", "2", "0", "100,10000"]);
    let w: WitnessJson = json(&["kna-witness", "1", "2000"]);
    assert!(w.window.is_none() && w.preimages.len() >= 2);
    let _: Vec<CongruenceOut> = json(&["congruence", "-1,0,1", "1000"]);
    let d: Vec<DensityOut> = json(&["density", "primes", "1000,10000"]);
    assert_eq!(d.len(), 2);
    let e: Vec<ExceptionalOut> = json(&["exceptional", "1000"]);
    assert_eq!(e[0].count, 1000);
}

#[test]
fn kna_csv_rows() {
    let out = stdout_ok(&["kna", "1", "1", "30"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "k,a,x,n,kind");
    assert_eq!(lines.len(), 11);
    assert!(lines[1..].iter().all(|l| l.ends_with(",regular")));
    assert_eq!(lines[1], "1,1,30,2,regular");
}

#[test]
fn congruence_accepts_negative_residues() {
    let out = stdout_ok(&["congruence", "-1,1", "100"]);
    assert!(out.starts_with("a,count,normalized\n-1,"));
    assert!(out.contains("\n1,25,"));
}

#[test]
fn density_csv() {
    let out = stdout_ok(&["density", "all", "1000"]);
    assert_eq!(out, "x,count,density\n1000,999,0.999\n");
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["fiber", "x", "10"],
        vec!["cluster", "abc", "1/10", "100"],
        vec!["cluster", "1e-3", "1/10", "100"],
        vec!["cluster", "1/2", "1/10", "100", "--waive", "nonsense"],
        vec!["nope"],
        vec!["profile"],
    ] {
        assert_eq!(run(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn module_errors_exit_1() {
    for args in [
        vec!["profile", "0"],
        vec!["kna-witness", "0", "100"],
        vec!["untouchable", "1"],
        vec!["cluster", "1", "1/10", "100", "--seed", "2"],
        vec!["density", "powers:1", "100"],
        vec!["exceptional", "10"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    }
}

#[test]
fn output_is_independent_of_threads() {
    for cmd in [
        vec!["density", "palindromes", "10000,100000"],
        vec!["sieve", "300000"],
        vec!["kna", "2", "0", "100000"],
        vec!["untouchable", "150"],
        vec!["exceptional", "5000,20000"],
    ] {
        let mut a = cmd.clone();
        a.extend(["--threads", "1", "--format", "json"]);
        let mut b = cmd.clone();
        b.extend(["--threads", "4", "--format", "json", "--block-size", "4097"]);
        assert_eq!(stdout_ok(&a), stdout_ok(&b), "{cmd:?}");
    }
}

#[test]
fn out_file_and_manifest_replay() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fiber.csv");
    let manifest = dir.path().join("run.json");
    let o = run(&[
        "fiber",
        "6",
        "100",
        "--out",
        out.to_str().unwrap(),
        "--manifest",
        manifest.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text, "m,count,preimages\n6,2,6;25\n");

    let m = RunManifest::read(&manifest).unwrap();
    assert_eq!(
        m.output_sha256,
        aliquot_cli::manifest::sha256_hex(text.as_bytes())
    );
    assert_eq!(m.version, env!("CARGO_PKG_VERSION"));
    assert_eq!(m.parameters["command"]["Fiber"]["x"], 100);

    assert_eq!(stdout_ok(&["replay", manifest.to_str().unwrap()]), text);

    let mut bad = m.clone();
    bad.output_sha256 = "0".repeat(64);
    bad.write(&manifest).unwrap();
    assert_eq!(
        run(&["replay", manifest.to_str().unwrap()]).status.code(),
        Some(1)
    );
}

#[test]
fn sieve_dump_and_cache() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("d.bin");
    let first = stdout_ok(&["sieve", "5000", "--dump", dump.to_str().unwrap()]);
    assert_eq!(fs::metadata(&dump).unwrap().len(), 5000 * 16);

    let cache = dir.path().join("cache");
    let cold = run_in(None, &["sieve", "5000"], &[("ALIQUOT_SIEVE_CACHE", &cache)]);
    assert!(cold.status.success());
    let cached = cache.join("sigma-1-5000.bin");
    assert_eq!(fs::read(&cached).unwrap(), fs::read(&dump).unwrap());
    let warm = run_in(None, &["sieve", "5000"], &[("ALIQUOT_SIEVE_CACHE", &cache)]);
    assert_eq!(cold.stdout, warm.stdout);
    assert!(first.starts_with("x,sum_sigma,sum_s,max_s,argmax_s\n5000,"));
}

#[test]
fn explicit_set_files() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("small.txt"), "1\n2\n3\n").unwrap();
    let incomplete = run_in(Some(dir.path()), &["density", "file:small.txt", "100"], &[]);
    assert_eq!(incomplete.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&incomplete.stderr).contains("complete through"));

    let evens: String = (0..=400)
        .filter(|v| v % 2 == 0)
        .map(|v| format!("{v}\n"))
        .collect();
    fs::write(
        dir.path().join("evens.txt"),
        format!("# complete_through: 401\n{evens}"),
    )
    .unwrap();
    let ok = run_in(Some(dir.path()), &["density", "file:evens.txt", "100"], &[]);
    assert!(
        ok.status.success(),
        "{}",
        String::from_utf8_lossy(&ok.stderr)
    );

    fs::write(dir.path().join("dup.txt"), "1\n1\n").unwrap();
    assert_eq!(
        run_in(Some(dir.path()), &["density", "file:dup.txt", "10"], &[])
            .status
            .code(),
        Some(1)
    );
}

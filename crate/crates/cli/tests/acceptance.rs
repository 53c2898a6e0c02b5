//! One PASS/FAIL line per acceptance criterion, driven through the binary.
//! Runs without the libtest harness so the lines always reach the output.

use std::collections::HashMap;
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::Instant;

use semicont::conditions::check_plc_jump_char;
use semicont::corpus::{AnyModel, Corpus};

#[derive(Clone, PartialEq, Eq, Debug)]
struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

/// Runs the binary from the repository root; the first output of each invocation is kept
/// so the determinism check can compare against it.
#[derive(Default)]
struct Runner {
    seen: HashMap<Vec<String>, Run>,
}

impl Runner {
    fn fresh(args: &[&str]) -> Run {
        let out = Command::new(env!("CARGO_BIN_EXE_semicont")).args(args).current_dir(root()).output().unwrap();
        Run {
            code: out.status.code().unwrap_or(-1),
            stdout: String::from_utf8(out.stdout).unwrap(),
            stderr: String::from_utf8(out.stderr).unwrap(),
        }
    }

    fn run(&mut self, args: &[&str]) -> Run {
        let key: Vec<String> = args.iter().map(|s| s.to_string()).collect();
        self.seen.entry(key).or_insert_with(|| Self::fresh(args)).clone()
    }
}

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn(&mut Runner) -> Outcome);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn line_with<'a>(text: &'a str, prefix: &str) -> Result<&'a str, String> {
    text.lines().find(|l| l.starts_with(prefix)).ok_or_else(|| format!("no `{prefix}` line in output"))
}

fn corpus_fidelity(r: &mut Runner) -> Outcome {
    let start = Instant::now();
    let out = r.run(&["corpus", "verify"]);
    let elapsed = start.elapsed();
    ensure(out.code == 0, format!("exit {}: {}", out.code, out.stdout))?;
    let passed = out.stdout.lines().filter(|l| l.starts_with("PASS ")).count();
    let failed = out.stdout.lines().filter(|l| l.starts_with("FAIL ")).count();
    ensure(passed >= 9 && failed == 0, format!("{passed} passed, {failed} failed"))?;
    for id in [
        "CE-WLC-STLC",
        "CE-LQC-SWLC",
        "CE-LPC-SLSC",
        "CE-UBLSCA-SDSC",
        "CE-BLSCA-UBSLSCA",
        "CE-TLC-SQRGI",
        "CE-PLC-SLQC",
        "CE-SM-SPLC",
    ] {
        ensure(out.stdout.contains(&format!("PASS {id}\n")), format!("{id} missing"))?;
    }
    ensure(elapsed.as_secs_f64() < 1.0, format!("took {elapsed:?}"))?;
    Ok(format!("{passed} records verified in {} ms", elapsed.as_millis()))
}

fn jump_semantics(r: &mut Runner) -> Outcome {
    let shifted = r.run(&["check", "models/shifted-identity.toml", "--point", "0"]);
    let step = r.run(&["check", "models/step.toml", "--point", "0"]);
    ensure(shifted.code == 0 && step.code == 0, "check failed")?;
    let a = line_with(&shifted.stdout, "jumps: ")?;
    let b = line_with(&step.stdout, "jumps: ")?;
    ensure(a == "jumps: none", a)?;
    ensure(b == "jumps: (0,1)", b)?;
    Ok(format!("shifted identity `{a}`, step `{b}`"))
}

fn sweep_four(r: &mut Runner) -> Result<Run, String> {
    let out = r.run(&["sweep", "--n-max", "4", "--grid", "-inf,-1,0,1,+inf"]);
    ensure(out.code == 0, format!("exit {}: {}", out.code, out.stderr))?;
    Ok(out)
}

fn diagram_soundness(r: &mut Runner) -> Outcome {
    let out = sweep_four(r)?;
    let counts = line_with(&out.stdout, "topologies: ")?.to_string();
    let v = line_with(&out.stdout, "bridge violations: ")?;
    ensure(v == "bridge violations: 0", v)?;
    let c = line_with(&out.stdout, "derivable pairs separated by a model: ")?;
    ensure(c.ends_with(": 0"), c)?;
    Ok(format!("0 violations over {counts}"))
}

fn cross_three(r: &mut Runner) -> Result<Run, String> {
    let out = r.run(&["sweep", "--n-max", "3", "--cross-validate"]);
    ensure(out.code == 0, format!("exit {}: {}", out.code, out.stdout))?;
    Ok(out)
}

fn oracle_equivalence(r: &mut Runner) -> Outcome {
    let out = cross_three(r)?;
    let counts = line_with(&out.stdout, "topologies: ")?;
    ensure(counts.starts_with("topologies: 34 "), counts)?;
    let m = line_with(&out.stdout, "mismatches: ")?;
    ensure(m == "mismatches: 0", m)?;
    Ok(format!("0 mismatches ({counts})"))
}

fn proposition_suites(r: &mut Runner) -> Outcome {
    let out = cross_three(r)?;
    let mut tallies = Vec::new();
    for name in ["check_twlc_equivalences", "check_lpc_levelsets", "check_rgi_char", "check_qrgi_char"] {
        let l = line_with(&out.stdout, &format!("{name}: "))?;
        ensure(l.ends_with(", 0 disagreements") && !l.contains(": 0 checks"), l)?;
        tallies.push(l.to_string());
    }
    let corpus = Corpus::load().map_err(|e| e.to_string())?;
    let mut piecewise = 0;
    for rec in corpus.records() {
        if let Some(AnyModel::Piecewise(f)) = &rec.model {
            let pair = check_plc_jump_char(f).map_err(|e| e.to_string())?;
            ensure(pair.agrees(), format!("check_plc_jump_char disagrees on {}", rec.id()))?;
            piecewise += 1;
        }
    }
    ensure(piecewise > 0, "no piecewise corpus models")?;
    Ok(format!("{}; check_plc_jump_char agrees on {piecewise} corpus models", tallies.join("; ")))
}

fn attainment(r: &mut Runner) -> Outcome {
    let out = sweep_four(r)?;
    let twlc = line_with(&out.stdout, "TWLC everywhere <=> argmin nonempty: ")?;
    let tlc = line_with(&out.stdout, "TLC everywhere <=> argmin closed and nonempty: ")?;
    ensure(twlc.ends_with(": 0 exceptions"), twlc)?;
    ensure(tlc.ends_with(": 0 exceptions"), tlc)?;
    Ok("0 exceptions for both characterizations at n_max=4".to_string())
}

fn consistency_audit(r: &mut Runner) -> Outcome {
    let out = r.run(&["audit"]);
    ensure(out.code == 0, format!("exit {}: {}", out.code, out.stdout))?;
    let v = line_with(&out.stdout, "soundness violations: ")?;
    ensure(v == "soundness violations: 0", v)?;
    let pairs = line_with(&out.stdout, "global pairs: ")?;
    ensure(pairs.ends_with("gaps: 0"), pairs)?;
    let lit = line_with(&out.stdout, "literature items reproduced: ")?;
    Ok(format!("{pairs}; {lit}"))
}

fn closure_spot_checks(r: &mut Runner) -> Outcome {
    let a = r.run(&["implies", "LSC", "TWLC"]);
    ensure(a.code == 0 && a.stdout.starts_with("LSC => TWLC: derivable"), format!("LSC => TWLC: {}", a.stdout))?;
    let b = r.run(&["implies", "SLSC", "TWLC"]);
    ensure(b.code == 1 && b.stdout.contains("refuted by CE-SLSC-TWLC"), format!("SLSC => TWLC: {}", b.stdout))?;
    let c = r.run(&["implies", "SLQC", "LQC", "--hyp", "N1"]);
    ensure(c.code == 0, format!("SLQC => LQC under N1: {}", c.stdout))?;
    let d = r.run(&["implies", "ISLSC", "RGI"]);
    ensure(d.code == 1 && d.stdout.contains("refuted by"), format!("ISLSC => RGI: {}", d.stdout))?;
    let e = r.run(&["implies", "ISLSC", "RGI", "--hyp", "N1"]);
    ensure(e.code == 0, format!("ISLSC => RGI under N1: {}", e.stdout))?;
    Ok("LSC=>TWLC yes; SLSC=>TWLC refuted; SLQC=>LQC yes under N1; ISLSC=>RGI only under N1".to_string())
}

const COMMANDS: &[&[&str]] = &[
    &["check", "models/sierpinski.toml"],
    &["check", "models/step.toml", "--point", "0"],
    &["--format", "json", "check", "models/shifted-identity.toml"],
    &["check", "models/bad-opens.toml"],
    &["implies", "LSC", "TWLC"],
    &["implies", "SLSC", "TWLC"],
    &["--format", "json", "implies", "ISLSC", "RGI", "--hyp", "N1"],
    &["closure", "SLSC", "--scope", "global"],
    &["--format", "json", "closure", "LSC", "--hyp", "N1,no-jump"],
    &["audit"],
    &["--format", "json", "audit"],
    &["corpus", "list"],
    &["--format", "json", "corpus", "list", "--target", "UBSLSCA"],
    &["corpus", "verify"],
    &["corpus", "verify", "CE-WLC-STLC"],
    &["sweep", "--n-max", "4", "--grid", "-inf,-1,0,1,+inf"],
    &["sweep", "--n-max", "3", "--cross-validate"],
    &["--format", "json", "sweep", "--n-max", "2"],
    &["export-dot"],
    &["export-dot", "--scope", "global", "--hyp", "N1"],
    &["implies", "LSC", "NOPE"],
];

fn determinism(r: &mut Runner) -> Outcome {
    for args in COMMANDS {
        let first = r.run(args);
        let second = Runner::fresh(args);
        ensure(first == second, format!("`semicont {}` differs between runs", args.join(" ")))?;
    }
    Ok(format!("{} invocations repeated byte-identically", COMMANDS.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("corpus fidelity", corpus_fidelity),
        ("jump semantics", jump_semantics),
        ("diagram soundness on models", diagram_soundness),
        ("oracle equivalence", oracle_equivalence),
        ("proposition suites", proposition_suites),
        ("attainment theorems", attainment),
        ("consistency audit", consistency_audit),
        ("closure spot checks", closure_spot_checks),
        ("determinism", determinism),
    ];
    let mut runner = Runner::default();
    let mut failures = Vec::new();
    println!();
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check(&mut runner) {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(why) => {
                println!("FAIL {} {name}: {why}", i + 1);
                failures.push(i + 1);
            }
        }
    }
    if failures.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failed criteria: {failures:?}");
        ExitCode::FAILURE
    }
}

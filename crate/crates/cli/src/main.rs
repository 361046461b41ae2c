//! `regreal` command-line tool.
//!
//! Exit status: 0 yes (or success), 1 no, 2 unknown or refused, 64 usage
//! or input error.

mod args;
mod commands;
mod output;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use regreal::Error;
use serde_json::Value;

use args::{Cli, Command};
use commands::{execute, sha256, Ctx};
use output::{manifest, write_artifacts, ManifestData, Outcome};

const USAGE: u8 = 64;

fn error_code(e: &Error) -> u8 {
    match e {
        Error::Refused(_) => 2,
        _ => USAGE,
    }
}

/// Runs a parsed command in memory: outcome, stdout text and inputs read.
fn evaluate(cli: &Cli) -> (Result<Outcome, Error>, String, Vec<(String, String)>) {
    let mut ctx = Ctx {
        threads: cli.global.threads.max(1),
        seed: cli.global.seed,
        ..Ctx::default()
    };
    let r = execute(&cli.command, &mut ctx);
    let stdout = match &r {
        Ok(o) => o.render(cli.global.format, cli.global.out_dir.is_none()),
        Err(_) => String::new(),
    };
    (r, stdout, ctx.inputs)
}

fn run(cli: &Cli, argv: &[String]) -> u8 {
    let (r, stdout, inputs) = evaluate(cli);
    print!("{stdout}");
    let empty = Outcome::default();
    let (outcome, code) = match &r {
        Ok(o) => (o, o.exit_code() as u8),
        Err(e) => {
            eprintln!("regreal: {e}");
            (&empty, error_code(e))
        }
    };
    if let Err(e) = write_artifacts(outcome, cli.global.out_dir.as_deref()) {
        eprintln!("regreal: writing outputs: {e}");
        return USAGE;
    }
    let mut m = manifest(&ManifestData {
        args: argv,
        inputs: &inputs,
        outcome,
        stdout: &stdout,
        exit: i32::from(code),
    });
    if let Ok(cwd) = std::env::current_dir() {
        m["cwd"] = Value::String(cwd.display().to_string());
    }
    if let Err(e) = &r {
        m["error"] = Value::String(e.to_string());
    }
    let text = serde_json::to_string_pretty(&m).expect("manifest serializes");
    let path = cli
        .global
        .manifest
        .clone()
        .or_else(|| cli.global.out_dir.as_ref().map(|d| d.join("manifest.json")));
    match path {
        Some(p) => {
            if let Err(e) = fs::write(&p, text + "\n") {
                eprintln!("regreal: writing manifest {}: {e}", p.display());
                return USAGE;
            }
        }
        None => eprintln!(
            "manifest {}",
            serde_json::to_string(&m).expect("manifest serializes")
        ),
    }
    code
}

fn replay(path: &Path) -> Result<u8, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let m: Value = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let argv: Vec<String> = serde_json::from_value(m["command"].clone())
        .map_err(|e| format!("bad command record: {e}"))?;
    if let Some(cwd) = m["cwd"].as_str() {
        std::env::set_current_dir(PathBuf::from(cwd)).map_err(|e| format!("{cwd}: {e}"))?;
    }
    let cli =
        Cli::try_parse_from(std::iter::once("regreal".to_string()).chain(argv.iter().cloned()))
            .map_err(|e| e.to_string())?;
    if matches!(cli.command, Command::Replay { .. }) {
        return Err("a manifest cannot replay a replay".into());
    }
    let (r, stdout, inputs) = evaluate(&cli);
    let mut same = true;
    let mut report = |what: &str, ok: bool| {
        println!("{what} {}", if ok { "identical" } else { "differs" });
        same &= ok;
    };
    for (i, (p, d)) in inputs.iter().enumerate() {
        report(
            &format!("input {p}"),
            m["inputs"][i]["sha256"].as_str() == Some(d.as_str()),
        );
    }
    report(
        "stdout",
        m["stdout_sha256"].as_str() == Some(sha256(stdout.as_bytes()).as_str()),
    );
    let code = match &r {
        Ok(o) => {
            for (i, (name, t)) in o.artifacts.iter().enumerate() {
                report(
                    &format!("output {name}"),
                    m["outputs"][i]["sha256"].as_str() == Some(sha256(t.as_bytes()).as_str()),
                );
            }
            report(
                "outputs count",
                m["outputs"].as_array().map(Vec::len) == Some(o.artifacts.len()),
            );
            o.exit_code()
        }
        Err(e) => i32::from(error_code(e)),
    };
    report("exit", m["exit"].as_i64() == Some(i64::from(code)));
    Ok(if same { 0 } else { 1 })
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { 0 });
        }
    };
    let code = match &cli.command {
        Command::Replay { manifest } => replay(manifest).unwrap_or_else(|e| {
            eprintln!("regreal: {e}");
            USAGE
        }),
        _ => run(&cli, &argv),
    };
    ExitCode::from(code)
}

//! Command-line entry point exposing every pipeline stage: parsing,
//! checking both proof systems, conversion, certificate emission and
//! checking, benchmark generation, strategy extraction and verification,
//! bounded refutation search, and proof statistics.

use std::collections::BTreeMap;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use mrtk::formats::{efr, mrs, mrt, qdimacs, strategy};
use mrtk::report::{check_report, Report, EXIT_ACCEPT, EXIT_CAP, EXIT_REJECT, EXIT_USAGE};
use mrtk_core::convert::{self, ConvertError, RuleScript};
use mrtk_core::crn::gen_cr;
use mrtk_core::efrege;
use mrtk_core::mres::{check_mres, replay_mres};
use mrtk_core::mrest::{self, replay_script};
use mrtk_core::qbf::Qbf;
use mrtk_core::report::Reason;
use mrtk_core::search::{bounded_search, SearchOptions, SearchOutcome};

#[derive(Parser)]
#[command(name = "mrtk", version, about = "Merge-resolution proof toolkit for false QBFs")]
struct Cli {
    /// Emit the report as a JSON object instead of key: value lines.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse and validate a QDIMACS file.
    Parse { qdimacs: PathBuf },
    /// Check a merge-map proof (.mrs) against a QBF.
    CheckMres { qdimacs: PathBuf, mrs: PathBuf },
    /// Check a graph-strategy proof (.mrt) against a QBF.
    CheckMrest { qdimacs: PathBuf, mrt: PathBuf },
    /// Proof conversions.
    #[command(subcommand)]
    Convert(ConvertCmd),
    /// Emit an extended-Frege certificate from a valid .mrt proof.
    EmitEfrege { qdimacs: PathBuf, mrt: PathBuf },
    /// Check an extended-Frege certificate (.efr) against a QBF.
    CheckEfrege { qdimacs: PathBuf, efr: PathBuf },
    /// Generate a completion-principle instance as QDIMACS on stdout.
    GenCr { n: usize },
    /// Extract the countermodel of a valid .mrt proof as a strategy dump.
    ExtractStrategy { qdimacs: PathBuf, mrt: PathBuf },
    /// Check a strategy dump against a QBF exhaustively.
    VerifyCountermodel { qdimacs: PathBuf, strategy: PathBuf },
    /// Search for a refutation of bounded length; prints .mrt on success.
    Search {
        qdimacs: PathBuf,
        #[arg(long)]
        max_lines: usize,
        /// Explored-state budget before giving up.
        #[arg(long, default_value_t = 2_000_000)]
        max_states: usize,
    },
    /// Check a .mrt proof and print size, width, regularity and node counts.
    Stats { qdimacs: PathBuf, mrt: PathBuf },
}

#[derive(Subcommand)]
enum ConvertCmd {
    /// Convert a valid merge-map proof into the graph-strategy format.
    MresToMrest { qdimacs: PathBuf, mrs: PathBuf },
}

fn read_input(path: &PathBuf) -> Result<String, String> {
    if path.as_os_str() == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| format!("stdin: {e}"))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
    }
}

fn load_qbf(path: &PathBuf) -> Result<Qbf, String> {
    let text = read_input(path)?;
    qdimacs::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
}

struct Outcome {
    report: Option<Report>,
    stdout: Option<String>,
    code: i32,
}

impl Outcome {
    fn report(report: Report, code: i32) -> Outcome {
        Outcome {
            report: Some(report),
            stdout: None,
            code,
        }
    }

    fn artifact(text: String) -> Outcome {
        Outcome {
            report: None,
            stdout: Some(text),
            code: EXIT_ACCEPT,
        }
    }
}

fn invalid_at(line: usize, reason: Reason, size: usize) -> Report {
    let mut rep = Report::new();
    rep.push("verdict", "invalid");
    rep.push("failing_line", line);
    rep.push("reason", reason.to_string());
    rep.push("size", size);
    rep
}

fn cap_report(c: &mrtk_core::report::CapError) -> Report {
    let mut rep = Report::new();
    rep.push("verdict", "unverifiable");
    rep.push("reason", c.to_string());
    rep
}

fn run(cli: &Cli) -> Result<Outcome, String> {
    match &cli.cmd {
        Cmd::Parse { qdimacs: path } => {
            let text = read_input(path)?;
            match qdimacs::parse(&text) {
                Ok(q) => {
                    let mut rep = Report::new();
                    rep.push("verdict", "ok");
                    rep.push("vars", q.num_vars());
                    rep.push("clauses", q.matrix().len());
                    rep.push("blocks", q.blocks().len());
                    rep.push(
                        "existentials",
                        q.existentials().len(),
                    );
                    rep.push("universals", q.universals().len());
                    Ok(Outcome::report(rep, EXIT_ACCEPT))
                }
                Err(e) => {
                    let mut rep = Report::new();
                    rep.push("verdict", "invalid");
                    rep.push("reason", e.to_string());
                    Ok(Outcome::report(rep, EXIT_REJECT))
                }
            }
        }
        Cmd::CheckMres { qdimacs, mrs } => {
            let q = load_qbf(qdimacs)?;
            let rules = mrs::parse(&read_input(mrs)?).map_err(|e| e.to_string())?;
            let n = rules.len();
            match replay_mres(&q, &rules) {
                Ok(proof) => {
                    let report = check_mres(&q, &proof);
                    let code = if report.valid { EXIT_ACCEPT } else { EXIT_REJECT };
                    Ok(Outcome::report(check_report(&report), code))
                }
                Err((line, reason)) => {
                    Ok(Outcome::report(invalid_at(line, reason, n), EXIT_REJECT))
                }
            }
        }
        Cmd::CheckMrest { qdimacs, mrt } => {
            let q = load_qbf(qdimacs)?;
            let script = mrt::parse(&read_input(mrt)?).map_err(|e| e.to_string())?;
            let n = script.len();
            match replay_script(&q, &script.steps) {
                Ok(proof) => match mrest::check(&q, &proof) {
                    Ok(report) => {
                        let code = if report.valid { EXIT_ACCEPT } else { EXIT_REJECT };
                        Ok(Outcome::report(check_report(&report), code))
                    }
                    Err(cap) => Ok(Outcome::report(cap_report(&cap), EXIT_CAP)),
                },
                Err((line, reason)) => {
                    Ok(Outcome::report(invalid_at(line, reason, n), EXIT_REJECT))
                }
            }
        }
        Cmd::Convert(ConvertCmd::MresToMrest { qdimacs, mrs }) => {
            let q = load_qbf(qdimacs)?;
            let rules = mrs::parse(&read_input(mrs)?).map_err(|e| e.to_string())?;
            let n = rules.len();
            let proof = match replay_mres(&q, &rules) {
                Ok(p) => p,
                Err((line, reason)) => {
                    return Ok(Outcome::report(invalid_at(line, reason, n), EXIT_REJECT))
                }
            };
            match convert::mres_to_mrest(&q, &proof) {
                Ok(out) => Ok(Outcome::artifact(mrt::serialize(&RuleScript::new(
                    out.steps(),
                )))),
                Err(ConvertError::Cap(c)) => Ok(Outcome::report(cap_report(&c), EXIT_CAP)),
                Err(ConvertError::InvalidInput(r)) | Err(ConvertError::OutputRejected(r)) => {
                    Ok(Outcome::report(check_report(&r), EXIT_REJECT))
                }
                Err(ConvertError::Structural { line, reason }) => {
                    Ok(Outcome::report(invalid_at(line, reason, n), EXIT_REJECT))
                }
            }
        }
        Cmd::EmitEfrege { qdimacs, mrt } => {
            let q = load_qbf(qdimacs)?;
            let script = mrt::parse(&read_input(mrt)?).map_err(|e| e.to_string())?;
            let n = script.len();
            let proof = match replay_script(&q, &script.steps) {
                Ok(p) => p,
                Err((line, reason)) => {
                    return Ok(Outcome::report(invalid_at(line, reason, n), EXIT_REJECT))
                }
            };
            match efrege::emit_efrege(&q, &proof) {
                Ok(cert) => Ok(Outcome::artifact(efr::serialize(&cert.symbols, &cert.lines))),
                Err(efrege::EmitError::InvalidProof(r)) => {
                    Ok(Outcome::report(check_report(&r), EXIT_REJECT))
                }
                Err(efrege::EmitError::Cap(c)) => Ok(Outcome::report(cap_report(&c), EXIT_CAP)),
            }
        }
        Cmd::CheckEfrege { qdimacs, efr: path } => {
            let q = load_qbf(qdimacs)?;
            let (syms, lines) = efr::parse(&read_input(path)?).map_err(|e| e.to_string())?;
            let report = efrege::check_efrege(&q, &syms, &lines);
            let mut rep = Report::new();
            rep.push("verdict", if report.valid { "valid" } else { "invalid" });
            rep.push(
                "failing_line",
                report.failing_line.map(|l| json!(l)).unwrap_or(Value::Null),
            );
            rep.push(
                "reason",
                report
                    .reason
                    .map(|r| json!(r.to_string()))
                    .unwrap_or(Value::Null),
            );
            rep.push("size", report.size);
            let code = if report.valid { EXIT_ACCEPT } else { EXIT_REJECT };
            Ok(Outcome::report(rep, code))
        }
        Cmd::GenCr { n } => {
            if *n == 0 {
                return Err("n must be at least 1".into());
            }
            Ok(Outcome::artifact(qdimacs::serialize(&gen_cr(*n).qbf)))
        }
        Cmd::ExtractStrategy { qdimacs, mrt } => {
            let q = load_qbf(qdimacs)?;
            let script = mrt::parse(&read_input(mrt)?).map_err(|e| e.to_string())?;
            let n = script.len();
            let proof = match replay_script(&q, &script.steps) {
                Ok(p) => p,
                Err((line, reason)) => {
                    return Ok(Outcome::report(invalid_at(line, reason, n), EXIT_REJECT))
                }
            };
            match mrest::extract_countermodel(&q, &proof) {
                Ok(map) => Ok(Outcome::artifact(strategy::serialize(&proof.store, &map))),
                Err(mrest::ExtractError::InvalidProof(r)) => {
                    Ok(Outcome::report(check_report(&r), EXIT_REJECT))
                }
                Err(mrest::ExtractError::Cap(c)) => Ok(Outcome::report(cap_report(&c), EXIT_CAP)),
            }
        }
        Cmd::VerifyCountermodel { qdimacs, strategy: path } => {
            let q = load_qbf(qdimacs)?;
            let (store, map): (_, BTreeMap<_, _>) =
                strategy::parse(&read_input(path)?).map_err(|e| e.to_string())?;
            match mrest::verify_countermodel(&q, &store, &map) {
                Ok(r) => {
                    let mut rep = Report::new();
                    rep.push("verdict", if r.holds { "true" } else { "false" });
                    rep.push("ambiguous_defaults", r.ambiguous);
                    let code = if r.holds { EXIT_ACCEPT } else { EXIT_REJECT };
                    Ok(Outcome::report(rep, code))
                }
                Err(mrest::VerifyError::TooManyVariables { vars, cap }) => {
                    let mut rep = Report::new();
                    rep.push("verdict", "unverifiable");
                    rep.push("reason", format!("{vars} existentials exceed cap {cap}"));
                    Ok(Outcome::report(rep, EXIT_CAP))
                }
                Err(mrest::VerifyError::MalformedStrategy(e)) => {
                    Err(format!("malformed strategy: {e}"))
                }
            }
        }
        Cmd::Search {
            qdimacs,
            max_lines,
            max_states,
        } => {
            let q = load_qbf(qdimacs)?;
            let opts = SearchOptions {
                max_states: *max_states,
            };
            match bounded_search(&q, *max_lines, &opts).map_err(|e| e.to_string())? {
                SearchOutcome::Found(proof) => Ok(Outcome::artifact(mrt::serialize(
                    &RuleScript::new(proof.steps()),
                ))),
                SearchOutcome::Closed => {
                    let mut rep = Report::new();
                    rep.push("verdict", "none");
                    rep.push("max_lines", *max_lines);
                    Ok(Outcome::report(rep, EXIT_REJECT))
                }
                SearchOutcome::Budget { explored } => {
                    let mut rep = Report::new();
                    rep.push("verdict", "budget-exhausted");
                    rep.push("explored", explored);
                    Ok(Outcome::report(rep, EXIT_CAP))
                }
            }
        }
        Cmd::Stats { qdimacs, mrt } => {
            let q = load_qbf(qdimacs)?;
            let script = mrt::parse(&read_input(mrt)?).map_err(|e| e.to_string())?;
            let n = script.len();
            match replay_script(&q, &script.steps) {
                Ok(proof) => match mrest::check(&q, &proof) {
                    Ok(report) => {
                        let code = if report.valid { EXIT_ACCEPT } else { EXIT_REJECT };
                        Ok(Outcome::report(check_report(&report), code))
                    }
                    Err(cap) => Ok(Outcome::report(cap_report(&cap), EXIT_CAP)),
                },
                Err((line, reason)) => {
                    Ok(Outcome::report(invalid_at(line, reason, n), EXIT_REJECT))
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if let Some(text) = out.stdout {
                print!("{text}");
            }
            if let Some(rep) = out.report {
                rep.print(cli.json);
            }
            ExitCode::from(out.code as u8)
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE as u8)
        }
    }
}

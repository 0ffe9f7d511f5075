//! Command dispatch for the `graphext` binary.
//!
//! Subcommands: `validate`, `analyze`, `coker`, `decide`, `snf`, `export`.
//! Output is text by default; `--format json` (or the `GRAPHEXT_FORMAT`
//! environment variable, with the flag winning) switches to JSON reports
//! that carry enough evidence to re-verify every verdict offline.
//!
//! Exit codes: 0 success or embeddable, 1 not embeddable, 2 invalid input,
//! 3 precondition failed.

mod report;

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use graphext::decide::{decide_auto, decide_essential, decide_general, Decision, Verdict};
use graphext::problem::{parse_problem, Problem};
use graphext::{smith_normal_form, IntMatrix};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_EMBEDDABLE: i32 = 1;
pub const EXIT_INVALID_INPUT: i32 = 2;
pub const EXIT_PRECONDITION_FAILED: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Auto,
    Essential,
    General,
}

impl ModeArg {
    fn name(self) -> &'static str {
        match self {
            ModeArg::Auto => "auto",
            ModeArg::Essential => "essential",
            ModeArg::General => "general",
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "graphext",
    version,
    about = "Graph invariants and embeddability decisions for 1-sink extensions"
)]
struct Cli {
    /// Output format; overrides the GRAPHEXT_FORMAT environment variable.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse a problem file and validate every extension in it.
    Validate { file: PathBuf },
    /// Report every invariant of the base graph and of each extension.
    Analyze { file: PathBuf },
    /// Invariant factors of the relevant cokernel presentations.
    Coker { file: PathBuf },
    /// Decide embeddability for a pair of extensions (1-based indices).
    Decide {
        file: PathBuf,
        /// Extension index; pass twice to select the pair.
        #[arg(long = "ext")]
        ext: Vec<usize>,
        #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
        mode: ModeArg,
        /// Decide every unordered pair in the file.
        #[arg(long, conflicts_with = "ext")]
        all_pairs: bool,
    },
    /// Smith normal form of a matrix file {"rows": [..], "cols": [..], "entries": [[..]]}.
    Snf {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Render a problem file as DOT for visualization.
    Export {
        file: PathBuf,
        /// Include the added part of this extension (1-based).
        #[arg(long)]
        ext: Option<usize>,
    },
}

pub fn run<O: Write, E: Write>(
    args: impl IntoIterator<Item = String>,
    out: &mut O,
    err: &mut E,
) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders --help and --version as errors with success status
            return if e.use_stderr() {
                let _ = write!(err, "{e}");
                EXIT_INVALID_INPUT
            } else {
                let _ = write!(out, "{e}");
                EXIT_OK
            };
        }
    };
    let format = resolve_format(cli.format, err);
    match dispatch(cli.command, format, out) {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INVALID_INPUT
        }
    }
}

fn resolve_format<E: Write>(flag: Option<Format>, err: &mut E) -> Format {
    if let Some(f) = flag {
        return f;
    }
    match std::env::var("GRAPHEXT_FORMAT") {
        Ok(v) if v.eq_ignore_ascii_case("json") => Format::Json,
        Ok(v) if v.eq_ignore_ascii_case("text") => Format::Text,
        Ok(v) => {
            let _ = writeln!(
                err,
                "warning: ignoring unknown GRAPHEXT_FORMAT value `{v}` (expected text or json)"
            );
            Format::Text
        }
        Err(_) => Format::Text,
    }
}

fn dispatch<O: Write>(cmd: Command, format: Format, out: &mut O) -> Result<i32, String> {
    match cmd {
        Command::Validate { file } => {
            let problem = load(&file)?;
            report::validate(&problem, format, out);
            Ok(EXIT_OK)
        }
        Command::Analyze { file } => {
            let problem = load(&file)?;
            report::analyze(&problem, format, out);
            Ok(EXIT_OK)
        }
        Command::Coker { file } => {
            let problem = load(&file)?;
            report::coker(&problem, format, out);
            Ok(EXIT_OK)
        }
        Command::Decide {
            file,
            ext,
            mode,
            all_pairs,
        } => {
            let problem = load(&file)?;
            if all_pairs {
                decide_all_pairs(&problem, mode, format, out)
            } else {
                if ext.len() != 2 {
                    return Err("pass --ext twice to select a pair of extensions".into());
                }
                let (l1, _) = pick_extension(&problem, ext[0])?;
                let (l2, _) = pick_extension(&problem, ext[1])?;
                let (l1, l2) = (l1.to_string(), l2.to_string());
                let e1 = &problem.extensions[ext[0] - 1].1;
                let e2 = &problem.extensions[ext[1] - 1].1;
                let decision = run_decide(&problem, e1, e2, mode)?;
                report::decision(&problem, (&l1, &l2), mode, &decision, format, out);
                Ok(exit_code_for(&decision))
            }
        }
        Command::Snf { matrix } => {
            let text = fs::read_to_string(&matrix)
                .map_err(|e| format!("cannot read `{}`: {e}", matrix.display()))?;
            let m: IntMatrix =
                serde_json::from_str(&text).map_err(|e| format!("malformed matrix: {e}"))?;
            let snf = smith_normal_form(&m);
            graphext::linalg::verify_smith(&m, &snf).map_err(|e| format!("internal: {e}"))?;
            report::snf(&m, &snf, format, out);
            Ok(EXIT_OK)
        }
        Command::Export { file, ext } => {
            let problem = load(&file)?;
            let picked = match ext {
                Some(i) => {
                    let (label, extension) = pick_extension(&problem, i)?;
                    Some((label.to_string(), extension.clone()))
                }
                None => None,
            };
            report::export_dot(&problem, picked.as_ref().map(|(l, e)| (l.as_str(), e)), out);
            Ok(EXIT_OK)
        }
    }
}

fn load(file: &PathBuf) -> Result<Problem, String> {
    parse_problem(file).map_err(|e| e.to_string())
}

fn pick_extension(
    problem: &Problem,
    index: usize,
) -> Result<(&str, &graphext::OneSinkExtension), String> {
    if index == 0 || index > problem.extensions.len() {
        return Err(format!(
            "extension index {index} out of range (file has {}, indices are 1-based)",
            problem.extensions.len()
        ));
    }
    let (label, ext) = &problem.extensions[index - 1];
    Ok((label.as_str(), ext))
}

fn run_decide(
    problem: &Problem,
    e1: &graphext::OneSinkExtension,
    e2: &graphext::OneSinkExtension,
    mode: ModeArg,
) -> Result<Decision, String> {
    let g = &problem.base;
    match mode {
        ModeArg::Auto => decide_auto(g, e1, e2),
        ModeArg::Essential => decide_essential(g, e1, e2),
        ModeArg::General => decide_general(g, e1, e2),
    }
    .map_err(|e| e.to_string())
}

fn exit_code_for(decision: &Decision) -> i32 {
    match decision.verdict {
        Verdict::Embeddable => EXIT_OK,
        Verdict::NotEmbeddable => EXIT_NOT_EMBEDDABLE,
        Verdict::PreconditionFailed => EXIT_PRECONDITION_FAILED,
    }
}

fn decide_all_pairs<O: Write>(
    problem: &Problem,
    mode: ModeArg,
    format: Format,
    out: &mut O,
) -> Result<i32, String> {
    let k = problem.extensions.len();
    if k < 2 {
        return Err(format!(
            "--all-pairs needs at least two extensions, found {k}"
        ));
    }
    let mut worst = EXIT_OK;
    let mut decisions = Vec::new();
    for i in 0..k {
        for j in (i + 1)..k {
            let (l1, e1) = &problem.extensions[i];
            let (l2, e2) = &problem.extensions[j];
            let d = run_decide(problem, e1, e2, mode)?;
            let code = exit_code_for(&d);
            if code == EXIT_PRECONDITION_FAILED || worst == EXIT_PRECONDITION_FAILED {
                worst = EXIT_PRECONDITION_FAILED;
            } else if code == EXIT_NOT_EMBEDDABLE || worst == EXIT_NOT_EMBEDDABLE {
                worst = EXIT_NOT_EMBEDDABLE;
            }
            decisions.push(((l1.clone(), l2.clone()), d));
        }
    }
    report::all_pairs(problem, mode, &decisions, format, out);
    Ok(worst)
}

//! Command-line front end. Exit codes: 0 success, 1 verification failure,
//! 2 input error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::graph::{format as gformat, DecoratedGraph};
use crate::integrator::{check_anomaly, evaluate_traced, Evaluator};
use crate::qmodring::{format as rformat, RingElement};
use crate::residual::delta;
use crate::verify::{run_all, CorpusConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
    Latex,
}

#[derive(Debug, Parser)]
#[command(name = "ellgraph", version, about = "Exact regularized graph integrals on elliptic curves")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, value_enum, default_value_t, global = true)]
    pub format: OutputFormat,
    /// Write elimination traces (JSON lines) to this file.
    #[arg(long, global = true)]
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print W(g) for every graph file.
    Eval { paths: Vec<PathBuf> },
    /// Print the anomaly combination delta(g).
    Delta { paths: Vec<PathBuf> },
    /// Check d_Y W(g) = W(delta g); exits 1 if any graph fails.
    Anomaly { paths: Vec<PathBuf> },
    /// Run the invariant suites on a seeded random corpus.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        max_vertices: usize,
        #[arg(long, default_value_t = 12)]
        max_weight: i64,
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, default_value_t = 4)]
        max_dec: u32,
    },
    /// Print the elimination trace of every graph file.
    Trace { paths: Vec<PathBuf> },
}

struct InputError(String);

fn load(path: &Path) -> Result<DecoratedGraph, InputError> {
    let src = fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    gformat::parse_auto(&src).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn load_all(paths: &[PathBuf]) -> Result<Vec<(String, DecoratedGraph)>, InputError> {
    paths
        .iter()
        .map(|p| load(p).map(|g| (p.display().to_string(), g)))
        .collect()
}

fn require_nonnegative(path: &str, g: &DecoratedGraph) -> Result<(), InputError> {
    if g.edges().iter().any(|e| e.dec < 0) {
        return Err(InputError(format!("{path}: decoration -1 is only meaningful inside the elimination")));
    }
    Ok(())
}

fn ring_json(x: &RingElement) -> Value {
    serde_json::from_str(&rformat::to_json(x)).expect("ring JSON")
}

fn render(x: &RingElement, f: OutputFormat) -> String {
    match f {
        OutputFormat::Text => rformat::to_text(x),
        OutputFormat::Latex => rformat::to_latex(x),
        OutputFormat::Json => rformat::to_json(x),
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(InputError(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
    }
}

fn io(e: std::io::Error) -> InputError {
    InputError(e.to_string())
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32, InputError> {
    match &cli.command {
        Command::Eval { paths } => {
            let graphs = load_all(paths)?;
            for (p, g) in &graphs {
                require_nonnegative(p, g)?;
            }
            let mut ev = Evaluator::default();
            let mut traces = String::new();
            for (p, g) in &graphs {
                let value = if cli.trace.is_some() {
                    let (v, t) = evaluate_traced(g).map_err(|e| InputError(format!("{p}: {e}")))?;
                    traces.push_str(&t.to_json_lines());
                    v
                } else {
                    ev.evaluate(g)
                };
                write_value(out, cli.format, p, &value, graphs.len() > 1).map_err(io)?;
            }
            if let Some(path) = &cli.trace {
                fs::write(path, traces).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
            }
            Ok(EXIT_OK)
        }
        Command::Delta { paths } => {
            for (p, g) in load_all(paths)? {
                let d = delta(&g);
                let body = match cli.format {
                    OutputFormat::Json => gformat::combination_to_json(&d),
                    _ => gformat::combination_to_text(&d),
                };
                if paths.len() > 1 {
                    writeln!(out, "# {p}").map_err(io)?;
                }
                writeln!(out, "{}", body.trim_end()).map_err(io)?;
            }
            Ok(EXIT_OK)
        }
        Command::Anomaly { paths } => {
            let graphs = load_all(paths)?;
            let mut all = true;
            for (p, g) in &graphs {
                let rep = check_anomaly(g).map_err(|e| InputError(format!("{p}: {e}")))?;
                all &= rep.equal;
                match cli.format {
                    OutputFormat::Json => {
                        let line = json!({
                            "path": p,
                            "lhs": ring_json(&rep.lhs),
                            "rhs": ring_json(&rep.rhs),
                            "equal": rep.equal,
                        });
                        writeln!(out, "{line}").map_err(io)?;
                    }
                    f => {
                        let verdict = if rep.equal { "equal" } else { "DIFFERENT" };
                        writeln!(out, "{p}: {verdict}\n  d_Y W     = {}\n  W(delta)  = {}", render(&rep.lhs, f), render(&rep.rhs, f))
                            .map_err(io)?;
                    }
                }
            }
            Ok(if all { EXIT_OK } else { EXIT_FAILED })
        }
        Command::Verify {
            seed,
            max_vertices,
            max_weight,
            count,
            max_dec,
        } => {
            if *max_vertices < 2 {
                return Err(InputError("--max-vertices must be at least 2".into()));
            }
            let cfg = CorpusConfig {
                seed: *seed,
                count: *count,
                max_vertices: *max_vertices,
                max_weight: *max_weight,
                max_dec: *max_dec,
            };
            let reports = run_all(&cfg);
            let passed = reports.iter().all(|r| r.passed());
            match cli.format {
                OutputFormat::Json => {
                    let v = json!({ "config": cfg, "suites": reports, "passed": passed });
                    writeln!(out, "{v}").map_err(io)?;
                }
                _ => {
                    for r in &reports {
                        let tag = if r.passed() { "PASS" } else { "FAIL" };
                        writeln!(out, "{tag} {} ({} cases)", r.name, r.cases).map_err(io)?;
                        for f in r.failures.iter().take(5) {
                            writeln!(out, "  {f}").map_err(io)?;
                        }
                    }
                }
            }
            Ok(if passed { EXIT_OK } else { EXIT_FAILED })
        }
        Command::Trace { paths } => {
            let graphs = load_all(paths)?;
            let mut traces = String::new();
            for (p, g) in &graphs {
                require_nonnegative(p, g)?;
                let (_, t) = evaluate_traced(g).map_err(|e| InputError(format!("{p}: {e}")))?;
                traces.push_str(&t.to_json_lines());
            }
            match &cli.trace {
                Some(path) => fs::write(path, traces).map_err(|e| InputError(format!("{}: {e}", path.display())))?,
                None => write!(out, "{traces}").map_err(io)?,
            }
            Ok(EXIT_OK)
        }
    }
}

fn write_value(out: &mut dyn Write, f: OutputFormat, path: &str, value: &RingElement, prefix: bool) -> std::io::Result<()> {
    match f {
        OutputFormat::Json if prefix => writeln!(out, "{}", json!({ "path": path, "value": ring_json(value) })),
        OutputFormat::Json => writeln!(out, "{}", rformat::to_json(value)),
        _ if prefix => writeln!(out, "{path}: {}", render(value, f)),
        _ => writeln!(out, "{}", render(value, f)),
    }
}

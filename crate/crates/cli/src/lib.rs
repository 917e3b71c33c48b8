//! The `ndviz` command line.
//!
//! | code | meaning |
//! |---|---|
//! | 0 | accept / success |
//! | 1 | reject (or a failing `inv-check`) |
//! | 2 | cutoff-limit |
//! | 64 | usage error |
//! | 65 | malformed or invalid machine |
//! | 66 | unreadable input file |
//! | 70 | internal failure (rendering, server) |
//! | 73 | output file cannot be written |

mod args;
mod error;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::net::SocketAddr;
use std::path::Path;

use clap::Parser;
use ndviz_core::diagram::{emit_dot, render_svg, DiagramSpec};
use ndviz_core::engine::{explore, trace};
use ndviz_core::{
    add_dead_state, validate, word, ExploreError, ExploreOptions, InvariantSet, Machine, PipelineError,
    StateName, Symbol, Verdict, Visualization,
};
use ndviz_service::ServiceConfig;

pub use args::{Cli, Command, DiagramFormat, RunArgs};
pub use error::CliError;

pub const EXIT_USAGE: u8 = 64;
pub const EXIT_DATA: u8 = 65;
pub const EXIT_NO_INPUT: u8 = 66;
pub const EXIT_SOFTWARE: u8 = 70;
pub const EXIT_CANT_CREATE: u8 = 73;

pub fn verdict_code(v: Verdict) -> u8 {
    match v {
        Verdict::Accept => 0,
        Verdict::Reject => 1,
        Verdict::CutoffLimit => 2,
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().ansi().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "ndviz: {e}");
            e.exit_code()
        }
    }
}

fn load(path: &Path) -> Result<Machine, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::NoInput {
        path: path.to_path_buf(),
        source,
    })?;
    let machine = Machine::from_json(&text).map_err(|e| CliError::Malformed {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    let report = validate(&machine);
    if !report.is_ok() {
        return Err(CliError::Invalid {
            path: path.to_path_buf(),
            report,
        });
    }
    Ok(machine)
}

fn check_word(machine: &Machine, word: &[Symbol], what: &str) -> Result<(), CliError> {
    match word.iter().position(|s| !machine.sigma().contains(s)) {
        Some(i) => Err(CliError::Usage(format!(
            "{what}: symbol '{}' at position {i} is not in the input alphabet",
            word[i]
        ))),
        None => Ok(()),
    }
}

/// Machine (augmented if requested), word and options for a run.
fn prepare(args: &RunArgs) -> Result<(Machine, Vec<Symbol>, ExploreOptions), CliError> {
    let mut machine = load(&args.machine)?;
    let w = word(&args.word);
    check_word(&machine, &w, "--word")?;
    if args.add_dead {
        machine = add_dead_state(&machine);
    }
    let options = ExploreOptions::with_max_steps(args.max_steps).with_add_dead(machine.is_augmented());
    Ok((machine, w, options))
}

fn explore_error(e: ExploreError) -> CliError {
    match e {
        ExploreError::InvalidMachine(report) => CliError::Usage(format!("invalid machine: {report}")),
        other => CliError::Usage(other.to_string()),
    }
}

fn pipeline_error(e: PipelineError) -> CliError {
    match e {
        PipelineError::Explore(e) => explore_error(e),
        PipelineError::Invariant { .. } => CliError::Data(e.to_string()),
        PipelineError::FrameOutOfRange { .. } => CliError::Usage(format!("--frame: {e}")),
        other => CliError::Runtime(other.to_string()),
    }
}

fn write_output(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::CantCreate {
        path: path.to_path_buf(),
        source,
    })
}

fn execute(command: Command, out: &mut dyn Write) -> Result<u8, CliError> {
    match command {
        Command::Apply(args) => {
            let (machine, w, options) = prepare(&args)?;
            let forest = explore(&machine, &w, &options).map_err(explore_error)?;
            let verdict = forest.verdict();
            writeln!(out, "{verdict}")?;
            Ok(verdict_code(verdict))
        }
        Command::Trace(args) => {
            let (machine, w, options) = prepare(&args)?;
            let t = trace(&machine, &w, &options).map_err(explore_error)?;
            writeln!(out, "{t}")?;
            Ok(verdict_code(t.verdict))
        }
        Command::Viz { run, dump_frames } => {
            let (machine, w, options) = prepare(&run)?;
            let v = Visualization::build(&machine, &w, &options).map_err(pipeline_error)?;
            let json = v.frames_json();
            match dump_frames {
                Some(path) => {
                    write_output(&path, &json)?;
                    writeln!(
                        out,
                        "{} frames, {} ({})",
                        v.frames().len(),
                        v.verdict(),
                        path.display()
                    )?;
                }
                None => writeln!(out, "{json}")?,
            }
            Ok(0)
        }
        Command::Graph {
            run,
            frame,
            format,
            output,
        } => {
            let (machine, w, options) = prepare(&run)?;
            let text = if frame.is_none() && w.is_empty() {
                let spec = DiagramSpec::new(&machine);
                let dot = emit_dot(spec).map_err(|e| CliError::Runtime(e.to_string()))?;
                match format {
                    DiagramFormat::Dot => dot,
                    DiagramFormat::Svg => render_svg(&dot).map_err(|e| CliError::Runtime(e.to_string()))?,
                }
            } else {
                let v = Visualization::build(&machine, &w, &options).map_err(pipeline_error)?;
                let index = frame.unwrap_or(v.frames().len() - 1);
                match format {
                    DiagramFormat::Dot => v.dot(Some(index)),
                    DiagramFormat::Svg => v.svg(Some(index)),
                }
                .map_err(pipeline_error)?
            };
            match output {
                Some(path) => write_output(&path, &text)?,
                None => out.write_all(text.as_bytes())?,
            }
            Ok(0)
        }
        Command::InvCheck {
            machine,
            state,
            ci,
            stack,
        } => {
            let machine = load(&machine)?;
            let state = StateName::new(state);
            if !machine.has_state(&state) {
                return Err(CliError::Usage(format!("--state: '{state}' is not a state of the machine")));
            }
            let programs = InvariantSet::from_machine(&machine)
                .map_err(|(s, e)| CliError::Data(format!("invariants.{s}: {e}")))?;
            let program = programs
                .get(&state)
                .ok_or_else(|| CliError::Usage(format!("--state: state '{state}' has no invariant")))?;
            let ci = word(&ci);
            check_word(&machine, &ci, "--ci")?;
            let stack = match (stack, machine.kind().has_stack()) {
                (Some(_), false) => {
                    return Err(CliError::Usage("--stack: only pushdown machines have a stack".into()))
                }
                (Some(s), true) => {
                    let s = word(&s);
                    if let Some(x) = s.iter().find(|x| !machine.gamma().contains(x)) {
                        return Err(CliError::Usage(format!(
                            "--stack: symbol '{x}' is not in the stack alphabet"
                        )));
                    }
                    s
                }
                (None, _) => Vec::new(),
            };
            let holds = program.eval(&ci, Some(&stack));
            writeln!(out, "{holds}")?;
            Ok(if holds { 0 } else { 1 })
        }
        Command::Serve {
            host,
            port,
            static_dir,
            allowed_origin,
        } => {
            if let Some(dir) = &static_dir {
                if !dir.is_dir() {
                    return Err(CliError::NoInput {
                        path: dir.clone(),
                        source: std::io::Error::new(std::io::ErrorKind::NotFound, "not a directory"),
                    });
                }
            }
            let _ = tracing_subscriber::fmt()
                .with_env_filter(
                    tracing_subscriber::EnvFilter::try_from_default_env()
                        .unwrap_or_else(|_| "info".into()),
                )
                .with_writer(std::io::stderr)
                .try_init();
            let config = ServiceConfig {
                static_dir,
                allowed_origin,
                ..ServiceConfig::default()
            };
            let addr = SocketAddr::new(host, port);
            let runtime = tokio::runtime::Runtime::new()?;
            runtime
                .block_on(ndviz_service::serve(addr, config))
                .map_err(|e| CliError::Runtime(format!("{addr}: {e}")))?;
            Ok(0)
        }
    }
}

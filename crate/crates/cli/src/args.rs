use std::net::{IpAddr, Ipv4Addr};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ndviz_core::engine::DEFAULT_MAX_STEPS;

#[derive(Debug, Parser)]
#[command(name = "ndviz", version, about = "Explore and visualize nondeterministic automata")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Options shared by every command that runs a machine on a word.
#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Machine JSON file.
    pub machine: PathBuf,
    /// Input word as comma separated symbols; "" is the empty word.
    #[arg(long, short, default_value = "", allow_hyphen_values = true)]
    pub word: String,
    /// Transition bound for pushdown computations.
    #[arg(long, default_value_t = DEFAULT_MAX_STEPS, value_parser = clap::value_parser!(u32).range(1..))]
    pub max_steps: u32,
    /// Complete the machine with a dead state before exploring.
    #[arg(long)]
    pub add_dead: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DiagramFormat {
    Dot,
    Svg,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print accept, reject or cutoff-limit (exit 0, 1 or 2).
    Apply(RunArgs),
    /// Print the configurations of one accepting computation.
    Trace(RunArgs),
    /// Build the frames of a run and write them as JSON.
    Viz {
        #[command(flatten)]
        run: RunArgs,
        /// Write the frame array here instead of stdout.
        #[arg(long, value_name = "PATH")]
        dump_frames: Option<PathBuf>,
    },
    /// Emit the transition diagram, optionally colored for one frame.
    Graph {
        #[command(flatten)]
        run: RunArgs,
        /// Frame to color; defaults to the last frame when a
        /// non-empty --word is given.
        #[arg(long)]
        frame: Option<usize>,
        #[arg(long, value_enum, default_value_t = DiagramFormat::Dot)]
        format: DiagramFormat,
        /// Write the diagram here instead of stdout.
        #[arg(long, short, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Evaluate a state's invariant on a consumed input (and stack).
    InvCheck {
        machine: PathBuf,
        #[arg(long)]
        state: String,
        /// Consumed input, comma separated.
        #[arg(long, default_value = "")]
        ci: String,
        /// Stack contents, top first, comma separated.
        #[arg(long)]
        stack: Option<String>,
    },
    /// Run the HTTP session service.
    Serve {
        #[arg(long, default_value_t = IpAddr::V4(Ipv4Addr::LOCALHOST))]
        host: IpAddr,
        #[arg(long, default_value_t = ndviz_service::DEFAULT_PORT)]
        port: u16,
        /// Directory of web UI assets served at /.
        #[arg(long = "static", value_name = "DIR")]
        static_dir: Option<PathBuf>,
        /// Origin allowed by CORS (any when unset).
        #[arg(long)]
        allowed_origin: Option<String>,
    },
}

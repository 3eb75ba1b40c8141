use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use manuscript_lines::cli::{
    cmd_eval, cmd_segment, cmd_separate, cmd_synth, format_config, load_config, load_synth_spec,
    SynthSpec,
};
use manuscript_lines::{Error, Execution, PipelineConfig};

#[derive(Parser)]
#[command(name = "mslines", version, about = "Text line segmentation for handwritten manuscript pages")]
struct Cli {
    /// Process sequentially even when built with the `parallel` feature.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Detect text lines and write boxes, overlay, layers and histogram.
    Segment {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Clockwise rotation applied before processing.
        #[arg(long, default_value_t = 0, value_parser = parse_rotation)]
        rotate: u32,
    },
    /// Binarize and split pages into text and doodle layers.
    Separate {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0, value_parser = parse_rotation)]
        rotate: u32,
    },
    /// Score predicted box files against ground truth; CSV on stdout.
    Eval {
        pred: PathBuf,
        gt: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Generate synthetic pages with ground-truth boxes.
    Synth {
        /// Generator spec (key = value); defaults when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Overrides the spec's seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// Print the effective pipeline configuration.
    Config {
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

/// Degrees to quarter turns.
fn parse_rotation(s: &str) -> Result<u32, String> {
    match s {
        "0" => Ok(0),
        "90" => Ok(1),
        "180" => Ok(2),
        "270" => Ok(3),
        _ => Err(format!("rotation must be 0, 90, 180 or 270, got {s}")),
    }
}

fn pipeline_config(path: Option<&Path>) -> Result<PipelineConfig, Error> {
    path.map_or_else(|| Ok(PipelineConfig::default()), load_config)
}

fn run(cli: Cli) -> Result<(), Error> {
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    };
    match cli.command {
        Command::Segment { inputs, config, out, rotate } => {
            let config = pipeline_config(config.as_deref())?;
            cmd_segment(&inputs, &config, &out, rotate, exec)
        }
        Command::Separate { inputs, config, out, rotate } => {
            let config = pipeline_config(config.as_deref())?;
            cmd_separate(&inputs, &config, &out, rotate, exec)
        }
        Command::Eval { pred, gt, config } => {
            let config = pipeline_config(config.as_deref())?;
            print!("{}", cmd_eval(&pred, &gt, &config)?);
            Ok(())
        }
        Command::Synth { config, out, seed, count } => {
            let mut spec = config.map_or_else(|| Ok(SynthSpec::default()), load_synth_spec)?;
            if let Some(seed) = seed {
                spec.seed = seed;
            }
            cmd_synth(&spec, &out, count)
        }
        Command::Config { config } => {
            print!("{}", format_config(&pipeline_config(config.as_deref())?));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mslines: {e}");
            match e {
                Error::Evaluation(_) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}

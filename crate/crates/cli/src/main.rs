//! `dsrl`: corpus conversion, encoding, decoding, label casting, scoring and
//! analysis for descriptive semantic role labeling.
//!
//! On failure the last line on stderr is `error[<category>]: <message>` and
//! the exit status is nonzero.

mod commands;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dsrl::codec::{SrlFormalism, StylePrefix};
use dsrl::corpus::Style;
use dsrl::remote::ENDPOINT_ENV;

#[derive(Parser)]
#[command(name = "dsrl", version, about = "Descriptive semantic role labeling toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// CoNLL-2009 file to canonical records.
    Convert(IoArgs),
    /// Dependency corpus to the official CoNLL-2009 column format.
    Export(IoArgs),
    /// Corpus to paired `input.txt` / `target.txt` sequence files in the output directory.
    Encode(EncodeArgs),
    /// Sequence file to parsed structures plus an issue log.
    Decode(DecodeArgs),
    /// Parsed structures to a labeled canonical corpus.
    Cast(CastArgs),
    /// Gold vs. predicted corpus.
    Score(ScoreArgs),
    /// MFS / LFS / UNSEEN tags, or per-partition scores when predictions are given.
    Partition(PartitionArgs),
    /// Corpus statistics.
    Stats(StatsArgs),
    /// Uniform seeded sample of annotated sentences.
    Downsample(DownsampleArgs),
    /// Generate, decode, cast and score in one run.
    Pipeline(PipelineArgs),
}

#[derive(Args)]
struct IoArgs {
    #[arg(long)]
    input: PathBuf,
    /// Defaults to stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum StyleArg {
    Propbank,
    Framenet,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormalismArg {
    #[value(name = "dep-srl")]
    DepSrl,
    #[value(name = "span-srl")]
    SpanSrl,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum Format {
    #[default]
    Text,
    Json,
}

/// Both flags together select the style prefix; neither means no prefix.
#[derive(Args)]
struct PrefixArgs {
    #[arg(long, value_enum, requires = "formalism")]
    style: Option<StyleArg>,
    #[arg(long, value_enum, requires = "style")]
    formalism: Option<FormalismArg>,
}

impl PrefixArgs {
    fn prefix(&self) -> Option<StylePrefix> {
        let style = match self.style? {
            StyleArg::Propbank => Style::Propbank,
            StyleArg::Framenet => Style::Framenet,
        };
        let formalism = match self.formalism? {
            FormalismArg::DepSrl => SrlFormalism::DepSrl,
            FormalismArg::SpanSrl => SrlFormalism::SpanSrl,
        };
        Some(StylePrefix::new(style, formalism))
    }
}

#[derive(Args)]
struct BackendArgs {
    /// `builtin` or `remote`.
    #[arg(long, default_value = "builtin")]
    embedder: String,
    /// Service address for remote backends.
    #[arg(long, env = ENDPOINT_ENV)]
    endpoint: Option<String>,
}

#[derive(Args)]
struct EncodeArgs {
    #[arg(long)]
    input: PathBuf,
    /// Directory receiving `input.txt` and `target.txt`.
    #[arg(long)]
    output: PathBuf,
    #[arg(long)]
    inventory: PathBuf,
    #[command(flatten)]
    prefix: PrefixArgs,
}

#[derive(Args)]
struct DecodeArgs {
    /// One description sequence per line.
    #[arg(long)]
    input: PathBuf,
    /// Corpus the sequences were generated for, one line per structure;
    /// enables span alignment.
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Parsed records; defaults to stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Issue log, one record per issue.
    #[arg(long)]
    issues: Option<PathBuf>,
}

#[derive(Args)]
struct CastArgs {
    /// Parsed records written by `decode --corpus`.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long)]
    inventory: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
    #[command(flatten)]
    backend: BackendArgs,
}

#[derive(Args)]
struct ScoreArgs {
    /// Predicted corpus.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    gold: PathBuf,
    /// `dep`, `span` or `framenet`.
    #[arg(long, default_value = "span")]
    scorer: String,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct PartitionArgs {
    /// Training corpus the sense frequencies come from.
    #[arg(long)]
    train: PathBuf,
    #[arg(long)]
    gold: PathBuf,
    /// Predicted corpus; without it only the tags are written.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, default_value = "span")]
    scorer: String,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct StatsArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    inventory: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct DownsampleArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    fraction: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct PipelineArgs {
    /// Gold corpus.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    inventory: PathBuf,
    /// `gold`, `mfs` or `remote`.
    #[arg(long, default_value = "gold")]
    generator: String,
    /// Training corpus for the `mfs` generator's sense counts.
    #[arg(long)]
    train: Option<PathBuf>,
    #[arg(long, default_value = "span")]
    scorer: String,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
    /// Directory for intermediate artifacts.
    #[arg(long)]
    output: Option<PathBuf>,
    #[command(flatten)]
    prefix: PrefixArgs,
    #[command(flatten)]
    backend: BackendArgs,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let message = e.to_string();
            let first = message
                .lines()
                .find(|l| !l.trim().is_empty())
                .unwrap_or("invalid arguments")
                .trim_start_matches("error: ");
            eprintln!("error[config]: {first}");
            return ExitCode::from(2);
        }
    };
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let message = e.to_string().replace('\n', " ");
            eprintln!("error[{}]: {message}", e.category());
            ExitCode::FAILURE
        }
    }
}

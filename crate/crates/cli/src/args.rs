//! Command-line flags and their mapping onto [`RunConfig`].

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lexnet::corpus::Language;
use lexnet::metrics::DEFAULT_KMIN;
use lexnet::synth::DEFAULT_SEED;

use crate::{Command, ModeSelection, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "lexnet", version, about = "Word-adjacency network growth analysis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandArg,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum CommandArg {
    /// Write token streams and the punctuation census.
    Tokenize,
    /// Build full networks and write edge and node lists.
    Build,
    /// Full-network metrics: size, ASPL, degree, Zipf and Heaps exponents.
    Analyze,
    /// Shifted-start L(N) curves per text and per collection.
    Curve,
    /// Fit the chain/random-graph model to curve CSVs or to texts.
    Fit,
    /// L(N) curve of the accelerated-growth generator.
    Synth,
    /// Curves, fits and a summary table over all inputs.
    Report,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Tokens,
    Words,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LanguageArg {
    En,
    Zh,
    Other,
}

#[derive(Debug, Args)]
pub struct Options {
    /// JSON Lines corpus manifest.
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
    /// Text file; may be repeated.
    #[arg(long = "text", global = true)]
    pub texts: Vec<PathBuf>,
    /// Language of --text inputs.
    #[arg(long, value_enum, default_value = "en", global = true)]
    pub language: LanguageArg,
    /// --text inputs are already whitespace-segmented.
    #[arg(long, global = true)]
    pub pre_segmented: bool,
    /// Curve CSV to fit; may be repeated.
    #[arg(long = "curve", global = true)]
    pub curves: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "both", global = true)]
    pub mode: ModeArg,
    /// Comma-separated node counts.
    #[arg(long, global = true)]
    pub checkpoints: Option<String>,
    /// Shift bands as N_max:delta_tau pairs, e.g. 10000:100,100000:1000.
    #[arg(long, global = true)]
    pub dtau_bands: Option<String>,
    /// Drop checkpoints above this node count.
    #[arg(long, global = true)]
    pub max_n: Option<usize>,
    /// Worker threads (default: available cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SEED, global = true)]
    pub seed: u64,
    #[arg(long, default_value = "lexnet-out", global = true)]
    pub out_dir: PathBuf,
    /// Recompute curves even when cached.
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Also write networks/*.edges and *.nodes.
    #[arg(long, global = true)]
    pub export_edges: bool,
    /// Sentence terminators, whitespace-separated (literal or U+XXXX).
    #[arg(long, global = true)]
    pub terminators: Option<String>,
    /// Non-terminal punctuation marks kept as tokens.
    #[arg(long, global = true)]
    pub marks: Option<String>,
    /// Marks removed from the stream.
    #[arg(long, global = true)]
    pub excluded: Option<String>,
    /// Punctuation inventory JSON file.
    #[arg(long, global = true)]
    pub inventory: Option<PathBuf>,
    /// Word list (one word per line) for segmenting Chinese text.
    #[arg(long, global = true)]
    pub dictionary: Option<PathBuf>,
    /// Lower degree cutoff for the tail exponent.
    #[arg(long, default_value_t = DEFAULT_KMIN, global = true)]
    pub kmin: usize,
    #[arg(long, default_value_t = 1.0, global = true)]
    pub p0: f64,
    #[arg(long, default_value_t = 0.8, global = true)]
    pub delta: f64,
    #[arg(long, default_value_t = 0.5, global = true)]
    pub eta: f64,
    #[arg(long, default_value_t = 100_000, global = true)]
    pub steps: u64,
    #[arg(long, default_value_t = 10, global = true)]
    pub realizations: usize,
    /// Let duplicate attachment draws pass without an edge instead of redrawing.
    #[arg(long, global = true)]
    pub no_resample: bool,
}

impl Cli {
    pub fn into_config(self) -> RunConfig {
        let o = self.opts;
        let command = match self.command {
            CommandArg::Tokenize => Command::Tokenize,
            CommandArg::Build => Command::Build,
            CommandArg::Analyze => Command::Analyze,
            CommandArg::Curve => Command::Curve,
            CommandArg::Fit => Command::Fit,
            CommandArg::Synth => Command::Synth,
            CommandArg::Report => Command::Report,
        };
        RunConfig {
            command,
            mode: match o.mode {
                ModeArg::Tokens => ModeSelection::Tokens,
                ModeArg::Words => ModeSelection::WordsOnly,
                ModeArg::Both => ModeSelection::Both,
            },
            manifest: o.manifest,
            texts: o.texts,
            language: match o.language {
                LanguageArg::En => Language::English,
                LanguageArg::Zh => Language::Chinese,
                LanguageArg::Other => Language::Other,
            },
            pre_segmented: o.pre_segmented,
            curves: o.curves,
            out_dir: o.out_dir,
            checkpoints: o.checkpoints,
            dtau_bands: o.dtau_bands,
            max_n: o.max_n,
            jobs: o
                .jobs
                .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())),
            seed: o.seed,
            no_cache: o.no_cache,
            export_edges: o.export_edges,
            terminators: o.terminators,
            marks: o.marks,
            excluded: o.excluded,
            inventory: o.inventory,
            dictionary: o.dictionary,
            kmin: o.kmin,
            p0: o.p0,
            delta: o.delta,
            eta: o.eta,
            steps: o.steps,
            realizations: o.realizations,
            resample_duplicates: !o.no_resample,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_map_onto_config() {
        let cli = Cli::try_parse_from([
            "lexnet", "curve", "--text", "a.txt", "--mode", "words", "--jobs", "2", "--max-n", "500",
            "--dtau-bands", "1000:10",
        ])
        .unwrap();
        let cfg = cli.into_config();
        assert_eq!(cfg.command, Command::Curve);
        assert_eq!(cfg.mode, ModeSelection::WordsOnly);
        assert_eq!(cfg.jobs, 2);
        assert_eq!(cfg.max_n, Some(500));
        assert_eq!(cfg.dtau_bands.as_deref(), Some("1000:10"));
        assert_eq!(cfg.texts, vec![PathBuf::from("a.txt")]);
    }

    #[test]
    fn synth_defaults() {
        let cfg = Cli::try_parse_from(["lexnet", "synth"]).unwrap().into_config();
        assert_eq!(cfg.synth_config(), lexnet::synth::SynthConfig::default());
        assert_eq!(cfg.realizations, 10);
    }

    #[test]
    fn flags_after_or_before_subcommand() {
        let a = Cli::try_parse_from(["lexnet", "--seed", "7", "synth"]).unwrap().into_config();
        let b = Cli::try_parse_from(["lexnet", "synth", "--seed", "7"]).unwrap().into_config();
        assert_eq!(a, b);
    }
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use donorpdf::batch::{run, Formats, PipelineConfig, RunConfig};
use donorpdf::synth::{generate, CorpusSpec, Perturbation};

#[derive(Parser)]
#[command(name = "donorpdf", version, about = "Extract typed records from form-style PDFs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Process every PDF under a directory.
    Extract(ExtractArgs),
    /// Write a synthetic corpus with ground truth.
    Synth(SynthArgs),
}

#[derive(Args)]
struct ExtractArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: PathBuf,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long, default_value_t = 300)]
    dpi: u32,
    /// Directory of `.grammar` files replacing the built-in set.
    #[arg(long)]
    grammars: Option<PathBuf>,
    #[arg(long, default_value = "csv,json,sql")]
    formats: String,
    #[arg(long, default_value_t = 6.0)]
    col_pitch: f64,
    #[arg(long, default_value_t = 12.0)]
    row_pitch: f64,
    #[arg(long, default_value_t = 100)]
    ink_threshold: u8,
    /// Defaults to `<output>/journal.jsonl`.
    #[arg(long)]
    journal: Option<PathBuf>,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    count: usize,
    #[arg(long)]
    out: PathBuf,
    /// Comma-separated: alt-labels, shifted-columns, extra-blank-lines, gray-rules.
    #[arg(long, value_delimiter = ',')]
    perturb: Vec<String>,
    /// Share of documents that get the perturbations.
    #[arg(long, default_value_t = 1.0)]
    perturb_fraction: f64,
}

fn extract(a: ExtractArgs) -> Result<u8, String> {
    let ExtractArgs { input, output, workers, dpi, grammars, formats, col_pitch, row_pitch, ink_threshold, journal } = a;
    let formats: Formats = formats.parse().map_err(|e| format!("{e}"))?;
    let mut config = RunConfig::new(input, output);
    config.workers = workers;
    config.formats = formats;
    config.grammars = grammars;
    config.journal = journal;
    config.pipeline = PipelineConfig { dpi, col_pitch, row_pitch, ink_threshold };
    let summary = run(&config).map_err(|e| e.to_string())?;
    println!("{}", serde_json::to_string(&summary).unwrap_or_default());
    Ok(summary.exit_code() as u8)
}

fn synth(a: SynthArgs) -> Result<u8, String> {
    let SynthArgs { seed, count, out, perturb, perturb_fraction } = a;
    let perturbations = perturb
        .iter()
        .filter(|p| !p.trim().is_empty())
        .map(|p| p.parse::<Perturbation>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let mut spec = CorpusSpec::new(seed, count);
    spec.perturb_fraction = if perturbations.is_empty() { 0.0 } else { perturb_fraction };
    spec.perturbations = perturbations;
    let manifest = generate(&spec, &out).map_err(|e| e.to_string())?;
    println!("wrote {} documents to {}", manifest.documents.len(), out.display());
    Ok(0)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Extract(a) => extract(a),
        Command::Synth(a) => synth(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

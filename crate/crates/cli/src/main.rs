//! `textclf`: batch runner for ingesting, splitting, training, evaluating and
//! comparing text classifiers.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 runtime failure.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use textclf::classify::{train_logged, Hyperparams, ModelKind};
use textclf::corpus::{load_corpus, save_corpus, stratified_split, validate, Corpus, CorpusSplit, LabelSet, SplitSpec};
use textclf::error::{Error, TrainError};
use textclf::eval::{mean_accuracies, prepare_split, report, run_grid, EvalReport, GridOptions, GridReport};
use textclf::synth::{generate, SynthConfig};
use textclf::text::{PipelineConfig, DEFAULT_PROFILE};
use textclf::vectorize::{FeatureMode, Vectorizer, VectorizerConfig};
use textclf::ModelBundle;

/// Seed used whenever `--seed` is not given.
const DEFAULT_SEED: u64 = 42;

#[derive(Parser, Debug)]
#[command(name = "textclf", version, about = "Arabic-script text classification toolkit")]
struct Cli {
    /// Increase log verbosity (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Load and validate a corpus, printing a JSON summary.
    Ingest(IngestArgs),
    /// Write a stratified train/test split.
    Split(SplitArgs),
    /// Train one classifier on the training side of a split.
    Train(TrainArgs),
    /// Evaluate a trained model on the test side of a split.
    Evaluate(EvaluateArgs),
    /// Train and evaluate every classifier × feature-mode pair.
    Grid(GridArgs),
    /// Render a saved grid or evaluation report.
    Report(ReportArgs),
    /// Generate a synthetic labeled corpus.
    Synth(SynthArgs),
}

#[derive(Args, Debug)]
struct CorpusArgs {
    /// Corpus: a JSONL file or a directory with one sub-directory per label.
    #[arg(long)]
    corpus: PathBuf,
    /// Comma-separated label set, fixing label order (default: sorted observed labels).
    #[arg(long, value_delimiter = ',')]
    labels: Option<Vec<String>>,
}

#[derive(Args, Debug)]
struct IngestArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
}

#[derive(Args, Debug)]
struct SplitArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    /// Fraction of each class assigned to training.
    #[arg(long, default_value_t = 0.8)]
    fraction: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Output directory; receives split.json.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct FeatureArgs {
    /// Pipeline profile name or path to a pipeline JSON file.
    #[arg(long, default_value = DEFAULT_PROFILE)]
    pipeline: String,
    /// Drop tokens occurring in fewer training documents.
    #[arg(long, default_value_t = 1)]
    min_df: usize,
    /// Keep only the N features with the highest chi-square score.
    #[arg(long)]
    select_k: Option<usize>,
    /// Hyperparameter override `key=value`, e.g. `k=3` or `mlp.epochs=50` (repeatable).
    #[arg(long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
}

#[derive(Args, Debug)]
struct TrainArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    /// Split file written by `split`.
    #[arg(long)]
    split: PathBuf,
    #[arg(long, value_enum, default_value_t = Features::Tfidf)]
    features: Features,
    /// gaussian-nb, multinomial-nb, decision-tree, random-forest, logistic-regression, linear-svm, knn, mlp.
    #[arg(long)]
    classifier: ModelKind,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[command(flatten)]
    features_opts: FeatureArgs,
    /// Output directory; receives model.json, vocabulary.json and train_log.json.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct EvaluateArgs {
    /// Model bundle written by `train`.
    #[arg(long)]
    model: PathBuf,
    /// Corpus the split refers to.
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long)]
    split: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write eval.{json,md,csv} into this directory instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GridArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    #[arg(long, default_value_t = 0.8)]
    fraction: f64,
    /// Seeds both the split and every model.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Worker threads for grid cells (0 = all cores).
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Repeat with seeds seed, seed+1, … and also report mean accuracies.
    #[arg(long, default_value_t = 1)]
    repeats: usize,
    #[command(flatten)]
    features_opts: FeatureArgs,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct ReportArgs {
    /// grid.json or eval.json.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Markdown)]
    format: Format,
    /// Output file (default stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SynthArgs {
    #[arg(long, default_value_t = 8)]
    classes: usize,
    #[arg(long, default_value_t = 100)]
    per_class: usize,
    /// Probability that a token comes from the shared noise pool.
    #[arg(long, default_value_t = 0.3)]
    noise: f64,
    /// Signature words per class.
    #[arg(long, default_value_t = 20)]
    signature_size: usize,
    /// Size of the shared noise pool.
    #[arg(long, default_value_t = 200)]
    noise_vocabulary: usize,
    #[arg(long, default_value_t = 30)]
    min_length: usize,
    #[arg(long, default_value_t = 60)]
    max_length: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Output JSONL file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Features {
    Unigram,
    Tfidf,
}

impl From<Features> for FeatureMode {
    fn from(f: Features) -> Self {
        match f {
            Features::Unigram => FeatureMode::Unigram,
            Features::Tfidf => FeatureMode::Tfidf,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Markdown,
    Csv,
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl Failure {
    fn usage(message: impl fmt::Display) -> Self {
        Failure { code: 1, message: message.to_string() }
    }

    fn data(message: impl fmt::Display) -> Self {
        Failure { code: 2, message: message.to_string() }
    }

    fn runtime(message: impl fmt::Display) -> Self {
        Failure { code: 3, message: message.to_string() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match &e {
            Error::Train(TrainError::InvalidHyperparams(_)) => Failure::usage(e),
            Error::Train(TrainError::NonFiniteLoss { .. } | TrainError::NonFiniteUpdate { .. }) => {
                Failure::runtime(e)
            }
            _ => Failure::data(e),
        }
    }
}

macro_rules! from_module_error {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Failure::from(Error::from(e))
            }
        }
    )*};
}

from_module_error!(
    textclf::error::CorpusError,
    textclf::error::PipelineError,
    textclf::error::VectorizeError,
    textclf::error::TrainError,
    textclf::error::EvalError
);

type CmdResult = Result<(), Failure>;

fn write_file(path: &Path, contents: &str) -> CmdResult {
    fs::write(path, contents).map_err(|e| Failure::runtime(format!("cannot write {}: {e}", path.display())))
}

fn ensure_dir(dir: &Path) -> CmdResult {
    fs::create_dir_all(dir).map_err(|e| Failure::runtime(format!("cannot create {}: {e}", dir.display())))
}

fn to_pretty<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn load(args: &CorpusArgs) -> Result<Corpus, Failure> {
    let labels = args.labels.as_ref().map(|names| LabelSet::new(names.iter().cloned())).transpose()?;
    Ok(load_corpus(&args.corpus, labels)?)
}

fn pipeline(spec: &str) -> Result<PipelineConfig, Failure> {
    let path = Path::new(spec);
    if path.is_file() {
        let raw = fs::read_to_string(path).map_err(|e| Failure::data(format!("cannot read {spec}: {e}")))?;
        Ok(PipelineConfig::from_json(&raw)?)
    } else {
        PipelineConfig::profile(spec).map_err(Failure::usage)
    }
}

fn hyperparams(seed: u64, overrides: &[String], section: Option<ModelKind>) -> Result<Hyperparams, Failure> {
    let mut params = Hyperparams::with_seed(seed);
    for item in overrides {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| Failure::usage(format!("--param expects KEY=VALUE, got `{item}`")))?;
        params.set(key.trim(), value.trim(), section).map_err(Failure::usage)?;
    }
    Ok(params)
}

fn ingest(args: IngestArgs) -> CmdResult {
    let corpus = load(&args.corpus)?;
    print!("{}", to_pretty(&validate(&corpus)));
    Ok(())
}

fn split(args: SplitArgs) -> CmdResult {
    let corpus = load(&args.corpus)?;
    let spec = SplitSpec::new(args.fraction, args.seed).map_err(Failure::usage)?;
    let split = stratified_split(&corpus, &spec)?;
    ensure_dir(&args.out)?;
    let path = args.out.join("split.json");
    split.save(&path).map_err(Failure::runtime)?;
    println!("{} train / {} test documents -> {}", split.train_ids.len(), split.test_ids.len(), path.display());
    Ok(())
}

fn train_cmd(args: TrainArgs) -> CmdResult {
    let corpus = load(&args.corpus)?;
    let split = CorpusSplit::load(&args.split)?;
    let opts = &args.features_opts;
    let pipeline = pipeline(&opts.pipeline)?;
    let params = hyperparams(args.seed, &opts.params, Some(args.classifier))?;
    let prep = prepare_split(&corpus, &split, &pipeline)?;
    let n_classes = corpus.labels().len();
    let config = VectorizerConfig { mode: args.features.into(), min_df: opts.min_df, select_k: opts.select_k };
    let vectorizer = Vectorizer::fit(&prep.train_tokens, &prep.train_labels, n_classes, config)?;
    let matrix = vectorizer.transform_all(&prep.train_tokens, &prep.train_labels);
    let start = Instant::now();
    let (model, log) = train_logged(args.classifier, &matrix, n_classes, &params)?;
    log::info!("trained {} in {:?}", args.classifier, start.elapsed());

    ensure_dir(&args.out)?;
    vectorizer.vocabulary.save(&args.out.join("vocabulary.json")).map_err(Failure::runtime)?;
    let bundle = ModelBundle::new(corpus.labels().names().to_vec(), pipeline, vectorizer, model)?;
    bundle.save(&args.out.join("model.json")).map_err(Failure::runtime)?;
    write_file(&args.out.join("train_log.json"), &to_pretty(&log))?;
    println!(
        "trained {} on {} documents ({} features) -> {}",
        args.classifier,
        matrix.len(),
        matrix.dim(),
        args.out.display()
    );
    Ok(())
}

fn render_eval(report: &EvalReport, format: Format, title: &str) -> String {
    match format {
        Format::Json => to_pretty(report),
        Format::Markdown => report::eval_markdown(report, title),
        Format::Csv => report::eval_csv(report),
    }
}

fn extension(format: Format) -> &'static str {
    match format {
        Format::Json => "json",
        Format::Markdown => "md",
        Format::Csv => "csv",
    }
}

fn evaluate(args: EvaluateArgs) -> CmdResult {
    let bundle = ModelBundle::load(&args.model)?;
    let labels = LabelSet::new(bundle.labels.iter().cloned())?;
    let corpus = load_corpus(&args.corpus, Some(labels))?;
    let split = CorpusSplit::load(&args.split)?;
    let prep = prepare_split(&corpus, &split, &bundle.pipeline)?;
    let matrix = bundle.vectorizer.transform_all(&prep.test_tokens, &prep.test_labels);
    let preds = bundle.model.predict_batch(matrix.rows())?;
    let report = EvalReport::from_predictions(matrix.labels(), &preds, &bundle.labels)?;
    let title = format!("{} ({})", bundle.model.kind().display_name(), bundle.vectorizer.mode().display_name());
    let text = render_eval(&report, args.format, &title);
    match args.out {
        Some(dir) => {
            ensure_dir(&dir)?;
            write_file(&dir.join(format!("eval.{}", extension(args.format))), &text)?;
            if args.format != Format::Json {
                write_file(&dir.join("eval.json"), &to_pretty(&report))?;
            }
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn write_grid_files(grid: &GridReport, dir: &Path) -> CmdResult {
    write_file(&dir.join("grid.json"), &grid.to_json())?;
    write_file(&dir.join("accuracy.md"), &report::accuracy_table_markdown(grid))?;
    write_file(&dir.join("accuracy.csv"), &report::accuracy_table_csv(grid))?;
    write_file(&dir.join("per_class.md"), &report::per_class_tables_markdown(grid))?;
    write_file(&dir.join("per_class.csv"), &report::per_class_tables_csv(grid))
}

fn grid(args: GridArgs) -> CmdResult {
    if args.repeats == 0 {
        return Err(Failure::usage("--repeats must be at least 1"));
    }
    let corpus = load(&args.corpus)?;
    let opts = &args.features_opts;
    let pipeline = pipeline(&opts.pipeline)?;
    let params = hyperparams(args.seed, &opts.params, None)?;
    ensure_dir(&args.out)?;

    let mut reports = Vec::with_capacity(args.repeats);
    for r in 0..args.repeats {
        let seed = args.seed.wrapping_add(r as u64);
        let spec = SplitSpec::new(args.fraction, seed).map_err(Failure::usage)?;
        let split = stratified_split(&corpus, &spec)?;
        let options = GridOptions { seed, min_df: opts.min_df, select_k: opts.select_k, jobs: args.jobs };
        let start = Instant::now();
        let report = run_grid(&corpus, &split, &pipeline, &params, &options)?;
        log::info!("grid with seed {seed} finished in {:?}", start.elapsed());
        for cell in &report.cells {
            log::debug!("{}/{}: {:?}", cell.kind, cell.mode, cell.elapsed);
        }
        let dir = if args.repeats == 1 { args.out.clone() } else { args.out.join(format!("seed-{seed}")) };
        ensure_dir(&dir)?;
        split.save(&dir.join("split.json")).map_err(Failure::runtime)?;
        write_grid_files(&report, &dir)?;
        reports.push(report);
    }
    if args.repeats > 1 {
        let means = mean_accuracies(&reports);
        write_file(&args.out.join("mean_accuracy.json"), &to_pretty(&means))?;
        write_file(&args.out.join("mean_accuracy.md"), &report::mean_accuracy_markdown(&means))?;
        print!("{}", report::mean_accuracy_markdown(&means));
    } else {
        print!("{}", report::accuracy_table_markdown(&reports[0]));
    }
    Ok(())
}

fn report_cmd(args: ReportArgs) -> CmdResult {
    let raw = fs::read_to_string(&args.input)
        .map_err(|e| Failure::data(format!("cannot read {}: {e}", args.input.display())))?;
    let text = if let Ok(grid) = serde_json::from_str::<GridReport>(&raw) {
        match args.format {
            Format::Json => grid.to_json(),
            Format::Markdown => {
                format!("{}\n{}", report::accuracy_table_markdown(&grid), report::per_class_tables_markdown(&grid))
            }
            Format::Csv => report::accuracy_table_csv(&grid),
        }
    } else if let Ok(eval) = serde_json::from_str::<EvalReport>(&raw) {
        render_eval(&eval, args.format, "Evaluation")
    } else {
        return Err(Failure::data(format!("{} is neither a grid nor an evaluation report", args.input.display())));
    };
    match args.out {
        Some(path) => write_file(&path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn synth(args: SynthArgs) -> CmdResult {
    let config = SynthConfig {
        classes: args.classes,
        per_class: args.per_class,
        signature_size: args.signature_size,
        noise: args.noise,
        noise_vocabulary: args.noise_vocabulary,
        min_length: args.min_length,
        max_length: args.max_length,
        seed: args.seed,
    };
    config.validate().map_err(Failure::usage)?;
    let corpus = generate(&config)?;
    if let Some(parent) = args.out.parent().filter(|p| !p.as_os_str().is_empty()) {
        ensure_dir(parent)?;
    }
    save_corpus(&corpus, &args.out).map_err(Failure::runtime)?;
    println!("{} documents in {} classes -> {}", corpus.len(), corpus.labels().len(), args.out.display());
    Ok(())
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Ingest(a) => ingest(a),
        Command::Split(a) => split(a),
        Command::Train(a) => train_cmd(a),
        Command::Evaluate(a) => evaluate(a),
        Command::Grid(a) => grid(a),
        Command::Report(a) => report_cmd(a),
        Command::Synth(a) => synth(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code)
        }
    }
}

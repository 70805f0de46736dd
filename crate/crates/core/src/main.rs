use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use mixpois::exact::{parse_rational, MODEL_TAGS};
use mixpois::harness::{run, ConfigFile, ExperimentConfig, Format, Mode};
use mixpois::Error;

#[derive(Parser)]
#[command(name = "mixpois", version, about = "Exact and simulated factorial moments, and mixed Poisson limit checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact factorial moments.
    Exact(RunArgs),
    /// Monte Carlo factorial moments with z-scores against exact values.
    Simulate(RunArgs),
    /// Empirical law against the mixed Poisson limit.
    LimitCheck(RunArgs),
    /// Exact moments against exhaustive enumeration.
    OracleCheck(RunArgs),
    /// Print the model tags and their parameters.
    ListModels,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    j: Option<String>,
    #[arg(long)]
    k: Option<String>,
    #[arg(long)]
    ell: Option<String>,
    #[arg(long)]
    m: Option<String>,
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    beta: Option<String>,
    #[arg(long)]
    gamma: Option<String>,
    #[arg(long)]
    delta: Option<String>,
    #[arg(long)]
    w0: Option<String>,
    #[arg(long)]
    b0: Option<String>,
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    theta: Option<String>,
    #[arg(long)]
    d: Option<String>,
    /// Weight ratio of a descendants tree family.
    #[arg(long)]
    r: Option<String>,
    #[arg(long)]
    kappa: Option<String>,
    #[arg(long)]
    smax: Option<u32>,
    #[arg(long)]
    replicates: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// JSON experiment file; flags given alongside override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
}

const MODEL_PARAMS: [(&str, &str); 13] = [
    ("blocks", "n k ell"),
    ("dimurn", "n m alpha delta"),
    ("descendants", "n j [d | alpha | r]"),
    ("nodedeg", "n j alpha"),
    ("branches", "n j k alpha"),
    ("crp", "n j (a theta | alpha beta)"),
    ("triangular", "n w0 b0 alpha beta [gamma]"),
    ("inversions", "n j kappa"),
    ("records", "n j"),
    ("edgecut", "n j"),
    ("parking", "n j"),
    ("bridge", "n j"),
    ("mapping", "n j"),
];

impl RunArgs {
    fn flag_params(&self) -> [(&'static str, &Option<String>); 16] {
        [
            ("n", &self.n),
            ("j", &self.j),
            ("k", &self.k),
            ("ell", &self.ell),
            ("m", &self.m),
            ("alpha", &self.alpha),
            ("beta", &self.beta),
            ("gamma", &self.gamma),
            ("delta", &self.delta),
            ("w0", &self.w0),
            ("b0", &self.b0),
            ("a", &self.a),
            ("theta", &self.theta),
            ("d", &self.d),
            ("r", &self.r),
            ("kappa", &self.kappa),
        ]
    }

    fn config(&self, mode: Mode) -> Result<ExperimentConfig, Error> {
        let file = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
                Some(ConfigFile::parse(&text)?)
            }
            None => None,
        };
        let mut params = file.as_ref().map(|f| f.params.clone()).unwrap_or_default();
        for (name, value) in self.flag_params() {
            if let Some(text) = value {
                params.set(name, parse_rational(text).map_err(|e| Error::Config(format!("--{name}: {e}")))?)?;
            }
        }
        let model = self
            .model
            .clone()
            .or_else(|| file.as_ref().map(|f| f.model.clone()))
            .ok_or_else(|| Error::Config("--model is required".into()))?;
        let mut cfg = match &file {
            Some(f) => {
                let merged = ConfigFile { model: model.clone(), params: params.clone(), mode, ..f.clone() };
                ExperimentConfig::from_file(&merged)?
            }
            None => ExperimentConfig::new(&model, &params, mode)?,
        };
        if let Some(s) = self.smax {
            cfg.smax = s;
        }
        if let Some(r) = self.replicates {
            cfg.replicates = r;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(out) = &self.out {
            cfg.out = Some(out.clone());
        }
        if let Some(f) = self.format {
            cfg.format = match f {
                FormatArg::Csv => Format::Csv,
                FormatArg::Json => Format::Json,
            };
        }
        Ok(cfg)
    }
}

/// Exit status for a library error: 2 for usage problems, 1 otherwise.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::UnknownModel(_) | Error::InvalidInput(_) => 2,
        _ => 1,
    }
}

fn execute(args: &RunArgs, mode: Mode) -> Result<bool, Error> {
    let cfg = args.config(mode)?;
    let report = run(&cfg)?;
    let text = match cfg.format {
        Format::Csv => report.to_csv(),
        Format::Json => report.to_json(),
    };
    match &cfg.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    eprint!("{}", report.summary());
    Ok(report.pass)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let (args, mode) = match &cli.command {
        Command::ListModels => {
            debug_assert_eq!(MODEL_PARAMS.map(|(t, _)| t), MODEL_TAGS);
            for (tag, params) in MODEL_PARAMS {
                println!("{tag}\t{params}");
            }
            return ExitCode::SUCCESS;
        }
        Command::Exact(a) => (a, Mode::Exact),
        Command::Simulate(a) => (a, Mode::Mc),
        Command::LimitCheck(a) => (a, Mode::LimitCheck),
        Command::OracleCheck(a) => (a, Mode::OracleCheck),
    };
    match execute(args, mode) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::thread;

use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand, ValueEnum};
use zbdt::market_data::{
    build_calibration_input, emit_plot_series, parse_yield_csv, CsvLayout, YieldSeries, YieldUnit, DEFAULT_WINDOW,
};
use zbdt::model::{BetaTarget, VolNormalization};
use zbdt::scenario::{run_scenario, to_json, ScenarioConfig, ScenarioReport};

#[derive(Parser)]
#[command(name = "zbdt", version, about = "BDT and zero-rate BDT lattice calibration and bond option tables")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Calibrate and price one or more scenario files.
    Run(RunArgs),
    /// Long-format yield / rolling volatility table of a data file.
    Series(SeriesArgs),
    /// Calibration curve observed on one date.
    MarketView(ViewArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Unit {
    Percent,
    Decimal,
}

impl From<Unit> for YieldUnit {
    fn from(u: Unit) -> Self {
        match u {
            Unit::Percent => YieldUnit::Percent,
            Unit::Decimal => YieldUnit::Decimal,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    StdDev,
    Variance,
}

#[derive(Clone, Copy, ValueEnum)]
enum Norm {
    RawSum,
    Sample,
}

impl From<Norm> for VolNormalization {
    fn from(n: Norm) -> Self {
        match n {
            Norm::RawSum => VolNormalization::RawSum,
            Norm::Sample => VolNormalization::Sample,
        }
    }
}

#[derive(Args)]
struct DataArgs {
    /// Yield file: a DATE column and one column per tenor.
    #[arg(long)]
    data: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "percent")]
    yields_in: Unit,
}

impl DataArgs {
    fn load(&self) -> Result<Option<Vec<YieldSeries>>, String> {
        let Some(path) = &self.data else { return Ok(None) };
        let file = fs::File::open(path).map_err(|e| format!("{}: {}", path.display(), e))?;
        parse_yield_csv(file, &CsvLayout::with_unit(self.yields_in.into()))
            .map(Some)
            .map_err(|e| format!("{}: {}", path.display(), e))
    }
}

#[derive(Args)]
struct RunArgs {
    /// Scenario file (TOML); repeat to run several concurrently.
    #[arg(long, required = true)]
    config: Vec<PathBuf>,
    #[command(flatten)]
    data: DataArgs,
    /// Directory for the CSV / JSON outputs.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    x0: Option<f64>,
    #[arg(long, value_enum)]
    beta_target: Option<Target>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    /// Print per-step calibration diagnostics to stderr.
    #[arg(long)]
    trace: bool,
}

#[derive(Args)]
struct SeriesArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long, default_value_t = DEFAULT_WINDOW)]
    window: usize,
    #[arg(long, value_enum, default_value = "raw-sum")]
    normalization: Norm,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ViewArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long)]
    as_of: NaiveDate,
    #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5")]
    maturities: Vec<u32>,
    #[arg(long, default_value_t = DEFAULT_WINDOW)]
    window: usize,
    #[arg(long, value_enum, default_value = "raw-sum")]
    normalization: Norm,
}

fn load_config(path: &PathBuf, args: &RunArgs) -> Result<ScenarioConfig, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {}", path.display(), e))?;
    let mut cfg = ScenarioConfig::from_toml(&text).map_err(|e| format!("{}: {}", path.display(), e))?;
    if let Some(p) = args.p {
        cfg.zbdt.p = p;
    }
    if let Some(q) = args.q {
        cfg.zbdt.q = q;
    }
    if let Some(x0) = args.x0 {
        cfg.zbdt.x0 = x0;
    }
    if let Some(t) = args.beta_target {
        cfg.zbdt.beta_target = match t {
            Target::StdDev => BetaTarget::StdDev,
            Target::Variance => BetaTarget::Variance,
        };
    }
    if let Some(tol) = args.tol {
        cfg.solver.tol = tol;
    }
    if let Some(n) = args.max_iter {
        cfg.solver.max_iter = n;
    }
    Ok(cfg)
}

fn trace(report: &ScenarioReport) {
    for (model, steps) in [("BDT", &report.bdt.steps), ("ZBDT", &report.zbdt.steps)] {
        for s in steps.iter() {
            eprintln!(
                "[{}] {} step {}: r1={:.6e} r2={} sigma={:.6} price_res={:.2e} beta_res={:.2e} evals={}",
                report.name,
                model,
                s.step,
                s.r1,
                s.r2.map(|r| format!("{:.6e}", r)).unwrap_or_else(|| "-".into()),
                s.sigma,
                s.price_residual,
                s.beta_residual,
                s.iterations
            );
        }
    }
}

fn run(args: RunArgs) -> Result<(), String> {
    let configs = args.config.iter().map(|p| load_config(p, &args)).collect::<Result<Vec<_>, _>>()?;
    let data = args.data.load()?;
    let data = data.as_deref();

    let results: Vec<_> = thread::scope(|s| {
        let handles: Vec<_> = configs.iter().map(|cfg| s.spawn(move || run_scenario(cfg, data))).collect();
        handles.into_iter().map(|h| h.join().expect("scenario thread panicked")).collect()
    });
    let mut reports = Vec::with_capacity(results.len());
    let mut errors = Vec::new();
    for r in results {
        match r {
            Ok(report) => reports.push(report),
            Err(e) => errors.push(e.to_string()),
        }
    }
    if !errors.is_empty() {
        return Err(errors.join("\n"));
    }

    for (cfg, report) in configs.iter().zip(&reports) {
        if args.trace {
            trace(report);
        }
        match args.format {
            Format::Table => print!("{}", report.render_tables(&cfg.outputs)),
            Format::Csv => print!("{}", report.render_csv(&cfg.outputs)),
            Format::Json => print!("{}", to_json(report)),
        }
        if let Some(dir) = &args.out {
            let written = report.write(&cfg.outputs, dir).map_err(|e| e.to_string())?;
            for path in written {
                eprintln!("wrote {}", path.display());
            }
        }
    }
    Ok(())
}

fn series(args: SeriesArgs) -> Result<(), String> {
    let data = args.data.load()?.ok_or("--data is required")?;
    let text = emit_plot_series(&data, args.window, args.normalization.into()).map_err(|e| e.to_string())?;
    match &args.out {
        Some(path) => fs::write(path, text).map_err(|e| format!("{}: {}", path.display(), e)),
        None => {
            print!("{}", text);
            Ok(())
        }
    }
}

fn market_view(args: ViewArgs) -> Result<(), String> {
    let data = args.data.load()?.ok_or("--data is required")?;
    let snap = build_calibration_input(&data, args.as_of, &args.maturities, args.window, args.normalization.into())
        .map_err(|e| e.to_string())?;
    print!("{}", to_json(&snap));
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => run(a),
        Command::Series(a) => series(a),
        Command::MarketView(a) => market_view(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {}", msg);
            ExitCode::FAILURE
        }
    }
}

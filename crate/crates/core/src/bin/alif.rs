use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use alif::alif::alif_decompose;
use alif::bench::{BenchSettings, Suite};
use alif::config::RunConfig;
use alif::fpfilter::{spectrum_report, write_filter, FilterSpec, Preset};
use alif::instfreq::{hilbert_instantaneous_frequency, local_instantaneous_frequency, FreqMethod};
use alif::io;
use alif::iterfilt::if_decompose;
use alif::signals::{generate_example, ExampleId};
use alif::Error;

const EXIT_USAGE: u8 = 1;
const EXIT_DATA: u8 = 2;
const EXIT_ACCEPTANCE: u8 = 3;

#[derive(Parser)]
#[command(name = "alif", version, about = "Iterative and adaptive local iterative filtering")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Split a signal into IMFs and a remainder.
    Decompose(DecomposeArgs),
    /// Solve a Fokker-Planck filter and report its symbol.
    FilterDesign(FilterDesignArgs),
    /// Instantaneous frequency of a single component.
    Instfreq(InstfreqArgs),
    /// Run the benchmark suite and score it against the acceptance thresholds.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    If,
    Alif,
}

#[derive(Clone, Copy, ValueEnum)]
enum PresetArg {
    Fig4,
    Bump,
}

#[derive(Clone, Copy, ValueEnum)]
enum FreqArg {
    Local,
    Hilbert,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Paper,
}

#[derive(clap::Args)]
struct DecomposeArgs {
    #[arg(long, value_enum)]
    method: MethodArg,
    /// Delimited time series; layout comes from the `[input]` config section.
    #[arg(long, conflicts_with = "example", required_unless_present = "example")]
    input: Option<PathBuf>,
    /// Built-in example signal, e.g. ex1, ex4b, test2.
    #[arg(long)]
    example: Option<String>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(clap::Args)]
struct FilterDesignArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    beta: f64,
    #[arg(long, value_enum, default_value = "fig4")]
    preset: PresetArg,
    /// Mask half-length of the exported filter, in samples.
    #[arg(long, default_value_t = 32.0)]
    half_length: f64,
    #[arg(long)]
    no_self_convolve: bool,
    /// Spectral grid size.
    #[arg(long, default_value_t = 4096)]
    grid: usize,
    /// Filter weights file; the spectrum goes next to it as `<stem>_spectrum.csv`.
    #[arg(long)]
    out: PathBuf,
}

#[derive(clap::Args)]
struct InstfreqArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    method: Option<FreqArg>,
    #[arg(long)]
    eno_threshold: Option<f64>,
    /// Value column, overriding the config.
    #[arg(long)]
    column: Option<usize>,
    /// Header rows to skip, overriding the config.
    #[arg(long)]
    header_rows: Option<usize>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(clap::Args)]
struct BenchArgs {
    #[arg(long, value_enum)]
    suite: SuiteArg,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

enum Failure {
    Usage(String),
    Data(String),
    Acceptance(usize),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidConfig(_) | Error::UnknownExample(_) => Failure::Usage(e.to_string()),
            _ => Failure::Data(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Data(e.to_string())
    }
}

fn load_config(path: Option<&Path>) -> Result<RunConfig, Failure> {
    match path {
        None => Ok(RunConfig::default()),
        Some(p) => RunConfig::load(p).map_err(|e| match e {
            Error::Io(io) => Failure::Usage(format!("cannot read config {}: {io}", p.display())),
            other => Failure::Usage(format!("config {}: {other}", p.display())),
        }),
    }
}

fn decompose(args: DecomposeArgs) -> Result<(), Failure> {
    let cfg = load_config(args.config.as_deref())?;
    let signal = match (&args.input, &args.example) {
        (Some(path), _) => io::load_timeseries_csv(path, &cfg.timeseries_format()?)?,
        (None, Some(name)) => {
            let id: ExampleId = name.parse()?;
            let n = cfg.input.example_len.unwrap_or(id.default_len());
            generate_example(id, n, cfg.input.seed)?.signal
        }
        (None, None) => return Err(Failure::Usage("either --input or --example is required".into())),
    };
    let dec = match args.method {
        MethodArg::If => if_decompose(&signal, &cfg.if_config()?)?,
        MethodArg::Alif => alif_decompose(&signal, &cfg.alif_config()?)?,
    };
    fs::create_dir_all(&args.out)?;
    io::write_decomposition_csv(&dec, args.out.join("decomposition.csv"))?;
    io::write_diagnostics_csv(&dec, args.out.join("diagnostics.csv"))?;
    io::write_sd_history_csv(&dec, args.out.join("sd_history.csv"))?;
    fs::write(args.out.join("config.toml"), cfg.to_toml_string())?;
    println!(
        "{} imfs, stop: {}, reconstruction error {:.1e}",
        dec.imfs.len(),
        dec.stop.as_str(),
        dec.reconstruction_error()
    );
    Ok(())
}

fn filter_design(args: FilterDesignArgs) -> Result<(), Failure> {
    let preset = match args.preset {
        PresetArg::Fig4 => Preset::Fig4,
        PresetArg::Bump => Preset::Bump,
    };
    let spec = FilterSpec {
        preset,
        alpha: args.alpha,
        beta: args.beta,
        self_convolve: !args.no_self_convolve,
        ..FilterSpec::default()
    };
    let w = spec.source()?.realize(args.half_length)?;
    let report = spectrum_report(&w, args.grid, 1e-12)?;
    write_filter(&w, fs::File::create(&args.out)?)?;
    let stem = args.out.file_stem().and_then(|s| s.to_str()).unwrap_or("filter");
    let spectrum_path = args.out.with_file_name(format!("{stem}_spectrum.csv"));
    let mut text = String::from("k,symbol\n");
    for (k, s) in report.symbol.iter().enumerate() {
        text += &format!("{k},{s:.16e}\n");
    }
    fs::write(&spectrum_path, text)?;
    println!(
        "{} taps, condition met: {}, symbol in [{:.3e}, {:.6}]",
        w.weights().len(),
        report.condition_met,
        report.min_symbol,
        report.max_symbol_nonzero
    );
    Ok(())
}

fn instfreq(args: InstfreqArgs) -> Result<(), Failure> {
    let cfg = load_config(args.config.as_deref())?;
    let mut fmt = cfg.timeseries_format()?;
    if let Some(c) = args.column {
        fmt.value_column = c;
    }
    if let Some(h) = args.header_rows {
        fmt.header_rows = h;
    }
    let s = io::load_timeseries_csv(&args.input, &fmt)?;
    let method = match args.method {
        Some(FreqArg::Local) => FreqMethod::Local,
        Some(FreqArg::Hilbert) => FreqMethod::Hilbert,
        None => cfg.instfreq.method,
    };
    let fr = match method {
        FreqMethod::Local => {
            local_instantaneous_frequency(&s, args.eno_threshold.unwrap_or(cfg.instfreq.eno_threshold))?
        }
        FreqMethod::Hilbert => hilbert_instantaneous_frequency(&s)?,
    };
    io::write_freq_csv(&fr, &args.out)?;
    Ok(())
}

fn bench(args: BenchArgs) -> Result<(), Failure> {
    let SuiteArg::Paper = args.suite;
    let cfg = load_config(args.config.as_deref())?;
    let suite = Suite::new(BenchSettings::from_config(&cfg)?);
    let outcomes = suite.all_criteria();
    for o in &outcomes {
        println!("{}", o.summary_line());
    }
    suite.write_outputs(&outcomes, &args.out)?;
    let failed = outcomes.iter().filter(|o| !o.passed()).count();
    if failed > 0 {
        return Err(Failure::Acceptance(failed));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Decompose(a) => decompose(a),
        Command::FilterDesign(a) => filter_design(a),
        Command::Instfreq(a) => instfreq(a),
        Command::Bench(a) => bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Data(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_DATA)
        }
        Err(Failure::Acceptance(n)) => {
            eprintln!("{n} acceptance criteria failed");
            ExitCode::from(EXIT_ACCEPTANCE)
        }
    }
}

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use sltrace::config::{ExperimentConfig, Mode, OutputFormat};
use sltrace::experiment::{identity_warnings, run_experiment, run_float};
use sltrace::place::enumerate_places;
use sltrace::report::{write_csv, write_float_csv, write_float_json, write_json};
use sltrace::scalar::fmt_rational;
use sltrace::selftest::{run_selftest, SelftestOptions};
use sltrace::space::Spaces;
use sltrace::weil::{h_hats, rhs_theorem31};

#[derive(Parser)]
#[command(name = "sltrace", version, about = "Exact semi-local trace computations over F_q(t)")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Experiment config (`key = value` lines); defaults apply when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Overrides the format given in the config.
    #[arg(long, global = true, value_parser = parse_format)]
    format: Option<OutputFormat>,
    /// Write the table here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Worker threads for per-k jobs.
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Traces, right-hand side and gaps for each k.
    Trace,
    /// Run the built-in oracle suites.
    Selftest {
        /// Negative control: double the Fourier normalizing constant.
        #[arg(long)]
        corrupt_fourier: bool,
    },
    /// List places of F_q(t) up to a degree and mark those in S.
    Places {
        #[arg(long, default_value_t = 2)]
        max_degree: u32,
    },
    /// Right-hand side components for each k.
    Weil,
    /// Dimensions of Q, Q0 and Q̄0 for each k.
    Dims,
}

fn parse_format(s: &str) -> Result<OutputFormat, String> {
    s.parse().map_err(|e: sltrace::Error| e.to_string())
}

enum Failure {
    Config(String),
    Suites,
}

impl From<sltrace::Error> for Failure {
    fn from(e: sltrace::Error) -> Self {
        Failure::Config(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Config(e.to_string())
    }
}

fn load_config(common: &Common) -> Result<ExperimentConfig, Failure> {
    let mut cfg = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
            ExperimentConfig::parse(&text)?
        }
        None => ExperimentConfig::default(),
    };
    if let Some(f) = common.format {
        cfg.format = f;
    }
    Ok(cfg)
}

fn output(common: &Common) -> Result<Box<dyn Write>, Failure> {
    Ok(match &common.out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_table(out: &mut dyn Write, format: OutputFormat, header: &[&str], rows: &[Vec<String>]) -> io::Result<()> {
    match format {
        OutputFormat::Csv => {
            writeln!(out, "{}", header.join(","))?;
            for r in rows {
                writeln!(out, "{}", r.join(","))?;
            }
        }
        OutputFormat::Json => {
            let v: Vec<serde_json::Value> = rows
                .iter()
                .map(|r| {
                    header
                        .iter()
                        .zip(r)
                        .map(|(k, v)| (k.to_string(), json!(v)))
                        .collect::<serde_json::Map<_, _>>()
                        .into()
                })
                .collect();
            serde_json::to_writer_pretty(&mut *out, &v)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

fn trace(common: &Common) -> Result<(), Failure> {
    let cfg = load_config(common)?;
    let set = cfg.place_set()?;
    for w in identity_warnings(&set, &cfg.h_function()) {
        eprintln!("warning: {w}");
    }
    let mut out = output(common)?;
    match cfg.mode {
        Mode::Exact => {
            let ex = run_experiment(&cfg)?;
            match cfg.format {
                OutputFormat::Csv => write_csv(&mut out, &ex.rows)?,
                OutputFormat::Json => write_json(&mut out, &ex.rows)?,
            }
        }
        Mode::Float { .. } => {
            let rows = run_float(&cfg)?;
            match cfg.format {
                OutputFormat::Csv => write_float_csv(&mut out, &rows)?,
                OutputFormat::Json => write_float_json(&mut out, &rows)?,
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn selftest(common: &Common, corrupt_fourier: bool) -> Result<(), Failure> {
    let format = common.format.unwrap_or(OutputFormat::Csv);
    let results = run_selftest(SelftestOptions { corrupt_fourier });
    let rows: Vec<Vec<String>> = results
        .iter()
        .map(|r| {
            vec![
                r.name.to_string(),
                if r.passed { "PASS" } else { "FAIL" }.to_string(),
                r.detail.clone(),
            ]
        })
        .collect();
    let mut out = output(common)?;
    match format {
        OutputFormat::Csv => {
            for r in &rows {
                writeln!(out, "{:<28} {}  {}", r[0], r[1], r[2])?;
            }
        }
        OutputFormat::Json => write_table(&mut out, format, &["suite", "status", "detail"], &rows)?,
    }
    out.flush()?;
    if results.iter().all(|r| r.passed) {
        Ok(())
    } else {
        Err(Failure::Suites)
    }
}

fn places(common: &Common, max_degree: u32) -> Result<(), Failure> {
    let cfg = load_config(common)?;
    let set = cfg.place_set()?;
    let mut rows = Vec::new();
    for p in enumerate_places(set.field(), max_degree) {
        rows.push(vec![
            p.spec(),
            p.degree().to_string(),
            p.q_v().to_string(),
            p.n().to_string(),
            set.index_of(&p).is_some().to_string(),
        ]);
    }
    let mut out = output(common)?;
    write_table(&mut out, cfg.format, &["place", "degree", "q_v", "n", "in_S"], &rows)?;
    out.flush()?;
    Ok(())
}

fn weil(common: &Common) -> Result<(), Failure> {
    let cfg = load_config(common)?;
    let set = cfg.place_set()?;
    let h = cfg.h_function();
    let (h0, h1) = h_hats(&h, set.q());
    eprintln!("hat h(0) = {}, hat h(1) = {}", fmt_rational(h0.value()), fmt_rational(h1.value()));
    let mut header: Vec<String> = vec!["k".into()];
    let mut rows = Vec::new();
    for k in cfg.k_min..=cfg.k_max {
        let rhs = rhs_theorem31(k, &h, &set)?;
        let fields = rhs.fields();
        if header.len() == 1 {
            header.extend(fields.iter().map(|(name, _)| name.clone()));
        }
        let mut row = vec![k.to_string()];
        row.extend(fields.iter().map(|(_, v)| fmt_rational(v)));
        rows.push(row);
    }
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut out = output(common)?;
    write_table(&mut out, cfg.format, &header, &rows)?;
    out.flush()?;
    Ok(())
}

fn dims(common: &Common) -> Result<(), Failure> {
    use rayon::prelude::*;
    let cfg = load_config(common)?;
    let set = cfg.place_set()?;
    let rows = (cfg.k_min..=cfg.k_max)
        .into_par_iter()
        .map(|k| {
            let s = Spaces::build(&set, k, cfg.depth.start(k))?;
            Ok(vec![
                k.to_string(),
                s.tilde.depth.to_string(),
                s.q.rank().to_string(),
                s.q0.rank().to_string(),
                s.qbar0.rank().to_string(),
            ])
        })
        .collect::<sltrace::Result<Vec<_>>>()?;
    let mut out = output(common)?;
    write_table(&mut out, cfg.format, &["k", "depth", "dimQ", "dimQ0", "dimQbar0"], &rows)?;
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if let Some(n) = cli.common.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: --jobs: {e}");
            return ExitCode::from(1);
        }
    }
    let result = match cli.command {
        Command::Trace => trace(&cli.common),
        Command::Selftest { corrupt_fourier } => selftest(&cli.common, corrupt_fourier),
        Command::Places { max_degree } => places(&cli.common, max_degree),
        Command::Weil => weil(&cli.common),
        Command::Dims => dims(&cli.common),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Suites) => ExitCode::from(2),
    }
}

//! `orbitp`: runs scenario files and the identity verification suite.
//!
//! Exit codes: 0 success, 1 other failure (including a failed identity),
//! 2 budget exhausted, 3 validation or usage error.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context as _;
use clap::{ArgGroup, Parser, ValueEnum};
use orbitp::budget::{DEFAULT_DEGREE_BUDGET, DEFAULT_TAU_BUDGET};
use orbitp::verify::DEFAULT_PMAX;
use orbitp::{parse_scenario, run_scenario, run_verify_all, Budgets, Error, ErrorReport, Format, Report};
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Text => Format::Text,
            OutputFormat::Json => Format::Json,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "orbitp", version, about = "Orbit intersections of polynomial maps over F_q(t)")]
#[command(group(ArgGroup::new("input").required(true).multiple(true).args(["scenario", "verify_all"])))]
struct Cli {
    /// Scenario file to run; repeat for several.
    #[arg(long, value_name = "FILE")]
    scenario: Vec<PathBuf>,

    /// Run the built-in identity suite.
    #[arg(long)]
    verify_all: bool,

    /// Largest characteristic the identity suite runs.
    #[arg(long, default_value_t = DEFAULT_PMAX)]
    pmax: u64,

    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,

    /// Overrides capM of every scenario.
    #[arg(long)]
    cap_m: Option<u64>,

    /// Overrides capN of every scenario.
    #[arg(long)]
    cap_n: Option<u64>,

    #[arg(long, value_name = "D", help = format!("Largest x-degree any computed polynomial may reach [default: {DEFAULT_DEGREE_BUDGET}]"))]
    degree_budget: Option<u64>,

    #[arg(long, value_name = "D", help = format!("Largest T-degree any twisted polynomial may reach [default: {DEFAULT_TAU_BUDGET}]"))]
    tau_budget: Option<u64>,

    /// Scenarios run in parallel.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: u64,

    /// Include wall-clock time; reports then differ between runs.
    #[arg(long)]
    timing: bool,
}

enum Outcome {
    Done(Box<Report>),
    Failed { source: Option<String>, err: Error },
    Io { source: String, err: anyhow::Error },
}

impl Outcome {
    fn exit_code(&self) -> u8 {
        match self {
            Outcome::Done(r) if r.success => 0,
            Outcome::Done(_) => 1,
            Outcome::Failed { err, .. } if err.is_budget() => 2,
            Outcome::Failed { err, .. } if err.is_validation() => 3,
            Outcome::Failed { .. } | Outcome::Io { .. } => 1,
        }
    }

    fn render(&self, format: Format) -> String {
        match (self, format) {
            (Outcome::Done(r), _) => r.emit(format),
            (Outcome::Failed { source, err }, Format::Json) => {
                let mut s = ErrorReport::new(source.clone(), err).to_json();
                s.push('\n');
                s
            }
            (Outcome::Failed { source, err }, Format::Text) => match source {
                Some(s) => format!("error: {s}: {err}\n"),
                None => format!("error: {err}\n"),
            },
            (Outcome::Io { source, err }, Format::Json) => {
                let e = ErrorReport {
                    tool: orbitp::report::TOOL.into(),
                    version: orbitp::report::VERSION.into(),
                    source: Some(source.clone()),
                    kind: "error".into(),
                    message: format!("{err:#}"),
                    field: None,
                    position: None,
                    exit_code: 1,
                };
                let mut s = e.to_json();
                s.push('\n');
                s
            }
            (Outcome::Io { source, err }, Format::Text) => format!("error: {source}: {err:#}\n"),
        }
    }

    fn is_report(&self) -> bool {
        matches!(self, Outcome::Done(_))
    }
}

fn budgets(cli: &Cli, base: Budgets) -> Budgets {
    Budgets {
        degree: cli.degree_budget.unwrap_or(base.degree),
        tau: cli.tau_budget.unwrap_or(base.tau),
        ..base
    }
}

fn run_file(cli: &Cli, path: &PathBuf) -> Outcome {
    let source = path.display().to_string();
    let text = match std::fs::read_to_string(path).with_context(|| "cannot read scenario") {
        Ok(t) => t,
        Err(err) => return Outcome::Io { source, err },
    };
    let start = Instant::now();
    let result = parse_scenario(&text).and_then(|mut s| {
        s.budgets = budgets(cli, s.budgets);
        if let Some(m) = cli.cap_m {
            s.cap_m = m;
        }
        if let Some(n) = cli.cap_n {
            s.cap_n = n;
        }
        run_scenario(&s)
    });
    match result {
        Ok(r) => Outcome::Done(Box::new(finish(cli, r.with_source(source), start))),
        Err(err) => Outcome::Failed {
            source: Some(source),
            err,
        },
    }
}

fn finish(cli: &Cli, mut r: Report, start: Instant) -> Report {
    if cli.timing {
        r.timing_ms = Some(start.elapsed().as_millis() as u64);
    }
    r
}

fn run(cli: &Cli) -> anyhow::Result<Vec<Outcome>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs as usize)
        .build()
        .context("cannot start worker pool")?;
    let mut out: Vec<Outcome> = pool.install(|| cli.scenario.par_iter().map(|p| run_file(cli, p)).collect());
    if cli.verify_all {
        let start = Instant::now();
        out.push(match run_verify_all(cli.pmax, budgets(cli, Budgets::default())) {
            Ok(r) => Outcome::Done(Box::new(finish(cli, r, start))),
            Err(err) => Outcome::Failed { source: None, err },
        });
    }
    Ok(out)
}

fn emit(outcomes: &[Outcome], format: Format) {
    match format {
        Format::Json if outcomes.len() > 1 => {
            let items: Vec<String> = outcomes.iter().map(|o| o.render(format).trim_end().to_string()).collect();
            println!("[\n{}\n]", items.join(",\n"));
        }
        Format::Json => print!("{}", outcomes[0].render(format)),
        Format::Text => {
            let mut first = true;
            for o in outcomes {
                let text = o.render(format);
                if o.is_report() {
                    if !first {
                        println!();
                    }
                    print!("{text}");
                    first = false;
                } else {
                    eprint!("{text}");
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    let format = Format::from(cli.format);
    let outcomes = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    };
    emit(&outcomes, format);
    let code = outcomes.iter().map(Outcome::exit_code).find(|&c| c != 0).unwrap_or(0);
    ExitCode::from(code)
}

//! `tod-credal`: assess how representative a scenario suite is of a target
//! operational domain.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tod_credal::config::Weighting;
use tod_credal::report::{self, AssessOptions, LocalRef};
use tod_credal::suite::{load_suite, save_suite};
use tod_credal::{AssessmentConfig, Error, LogBase, ScenarioSuite};

#[derive(Parser)]
#[command(name = "tod-credal", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the joint-category table.
    Enumerate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Generate a suite CSV from the config's synthesis multipliers.
    SynthSuite {
        #[arg(long)]
        config: PathBuf,
        /// Number of scenarios; defaults to `synthesis.n`.
        #[arg(long)]
        n: Option<u64>,
        /// contextual | product; defaults to `synthesis.weighting`.
        #[arg(long)]
        weighting: Option<Weighting>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Credal posterior, interval metrics and local table as a JSON report.
    Assess {
        #[command(flatten)]
        inputs: Inputs,
        /// Report path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the local table as CSV.
        #[arg(long)]
        out_local_csv: Option<PathBuf>,
        /// lo | hi | mid | strength=<x>
        #[arg(long, default_value = "mid")]
        local_ref: LocalRef,
        /// Check envelope bracketing at N interior strengths.
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Metric values at fixed prior strengths.
    Sweep {
        #[command(flatten)]
        inputs: Inputs,
        /// Comma-separated strengths, e.g. 5,10,20.
        #[arg(long)]
        strengths: String,
        /// Write the rows as JSON instead of a text table.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Inputs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    suite: PathBuf,
    /// Observed TOD counts; defaults to the suite.
    #[arg(long)]
    observations: Option<PathBuf>,
    /// tvd | jsd | both; defaults to the config's metric list.
    #[arg(long)]
    metric: Option<String>,
    /// 2 | e; overrides `metrics.jsd_log_base`.
    #[arg(long)]
    jsd_base: Option<LogBase>,
}

struct Loaded {
    config: AssessmentConfig,
    suite: ScenarioSuite,
    observations: ScenarioSuite,
    metrics: Vec<tod_credal::MetricKind>,
}

impl Inputs {
    fn load(&self) -> Result<Loaded, Error> {
        let mut config = AssessmentConfig::load(&self.config)?;
        if let Some(base) = self.jsd_base {
            config.metrics.jsd_log_base = base;
        }
        let space = config.space()?;
        let suite = load_suite(&self.suite, &space)?;
        let observations = match &self.observations {
            Some(path) => load_suite(path, &space)?,
            None => suite.clone(),
        };
        let metrics = match &self.metric {
            Some(sel) => report::metric_selection(sel, config.metrics.jsd_log_base)?,
            None => config.metric_kinds(),
        };
        Ok(Loaded { config, suite, observations, metrics })
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Error> {
    std::fs::write(path, text).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Enumerate { config } => {
            let config = AssessmentConfig::load(&config)?;
            let names: Vec<String> = config.domain.variables.iter().map(|v| v.name.clone()).collect();
            println!("code,{}", names.join(","));
            for (code, labels) in report::enumerate(&config)? {
                println!("{code},{}", labels.join(","));
            }
        }
        Command::SynthSuite { config, n, weighting, out } => {
            let config = AssessmentConfig::load(&config)?;
            let suite = config.synthesize_suite(n, weighting)?;
            save_suite(&out, &config.space()?, &suite)?;
            eprintln!("wrote {} scenarios to {}", suite.total(), out.display());
        }
        Command::Assess { inputs, out, out_local_csv, local_ref, grid } => {
            let loaded = inputs.load()?;
            let options = AssessOptions { metrics: Some(loaded.metrics.clone()), local_ref, grid };
            let report = report::assess(&loaded.config, &loaded.suite, &loaded.observations, &options)?;
            let json = report.to_json();
            match out {
                Some(path) => write_file(&path, &json)?,
                None => print!("{json}"),
            }
            if let Some(path) = out_local_csv {
                write_file(&path, &report::local_table_csv(&loaded.config.space()?, &report))?;
            }
            if let Some(tvd) = &report.global.tvd {
                eprintln!("TVD in [{}, {}]", tvd.display.lo, tvd.display.hi);
            }
            if let Some(jsd) = &report.global.jsd {
                eprintln!("JSD in [{}, {}]", jsd.display.lo, jsd.display.hi);
            }
        }
        Command::Sweep { inputs, strengths, out } => {
            let loaded = inputs.load()?;
            let strengths = report::parse_strengths(&strengths)?;
            let rows = report::sweep(&loaded.config, &loaded.suite, &loaded.observations, &strengths, &loaded.metrics)?;
            if let Some(path) = out {
                let mut json = report::sweep_rows_json(&rows);
                json.push('\n');
                write_file(&path, &json)?;
            }
            let multi = rows.iter().any(|r| r.mean_index > 0);
            print!("{}strength", if multi { "mean," } else { "" });
            if rows[0].tvd.is_some() {
                print!(",tvd");
            }
            if rows[0].jsd.is_some() {
                print!(",jsd");
            }
            println!();
            for row in &rows {
                if multi {
                    print!("{},", row.mean_index);
                }
                print!("{}", row.strength);
                if let Some(v) = row.tvd {
                    print!(",{v:.5}");
                }
                if let Some(v) = row.jsd {
                    print!(",{v:.5}");
                }
                println!();
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.kind().exit_code() as u8)
        }
    }
}

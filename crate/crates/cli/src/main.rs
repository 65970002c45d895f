use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use htrunc_cli::config::{parse_n_list, NList};
use htrunc_cli::output::gnuplot_script;
use htrunc_cli::{demo, presets, run, CliError, DemoName, ExperimentConfig};

#[derive(Parser)]
#[command(name = "htrunc", version, about = "Truncation experiments for linear inverse problems in Hilbert space")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment from a config file or a preset and write its CSV.
    Run {
        /// TOML configuration file.
        config: Option<PathBuf>,
        /// Built-in configuration instead of a file.
        #[arg(long, conflicts_with = "config")]
        preset: Option<String>,
        /// Truncation levels, e.g. `2..=100` or `4,10,50`.
        #[arg(long)]
        n_list: Option<String>,
        /// qr | gmres | cg (gmres and cg select the Krylov basis).
        #[arg(long)]
        solver: Option<String>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        trial: Option<String>,
        #[arg(long)]
        test: Option<String>,
        /// min-norm | e_N | N*e_N
        #[arg(long)]
        solution_family: Option<String>,
        /// CSV path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write `<out>.gp`, a gnuplot script for the CSV.
        #[arg(long, requires = "out")]
        gnuplot: bool,
    },
    /// Run a demonstration and report PASS/FAIL for its defining property.
    Demo {
        #[arg(value_enum)]
        name: DemoName,
        /// Report path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List presets, operators, bases and data specifications.
    ListPresets,
    /// Print the configuration of a preset.
    Preset { name: String },
}

fn load(config: Option<PathBuf>, preset: Option<String>) -> Result<ExperimentConfig, CliError> {
    match (config, preset) {
        (Some(path), _) => {
            let text = fs::read_to_string(&path)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            ExperimentConfig::parse(&text).map_err(|e| match e {
                CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
                other => other,
            })
        }
        (None, Some(name)) => presets::find(&name).ok_or_else(|| CliError::Config(format!("unknown preset `{name}`"))),
        (None, None) => Err(CliError::Config("give a config file or --preset".into())),
    }
}

fn write(path: &PathBuf, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))
}

fn execute(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Run {
            config,
            preset,
            n_list,
            solver,
            tol,
            trial,
            test,
            solution_family,
            out,
            gnuplot,
        } => {
            let mut c = load(config, preset)?;
            if let Some(s) = n_list {
                parse_n_list(&s)?;
                c.truncation.n_list = NList::Spec(s);
            }
            if let Some(s) = solver {
                if s != "qr" && trial.is_none() {
                    c.truncation.trial = "krylov".into();
                    c.truncation.test = None;
                }
                c.truncation.solver = s;
            }
            if let Some(t) = tol {
                c.truncation.tol = t;
            }
            if let Some(t) = trial {
                c.truncation.trial = t;
                if test.is_none() {
                    c.truncation.test = None;
                }
            }
            if let Some(t) = test {
                c.truncation.test = Some(t);
            }
            if let Some(f) = solution_family {
                c.truncation.solution_family = f;
            }
            let out = out.or_else(|| c.output.csv.as_ref().map(PathBuf::from));
            let result = run(&c)?;
            match &out {
                Some(path) => {
                    write(path, &result.csv())?;
                    if gnuplot {
                        let script = gnuplot_script(&result.table, &path.display().to_string());
                        write(&path.with_extension("gp"), &script)?;
                    }
                }
                None => print!("{}", result.csv()),
            }
            Ok(true)
        }
        Command::Demo { name, out } => {
            let report = demo(name)?;
            match out {
                Some(path) => write(&path, &report.to_string())?,
                None => print!("{report}"),
            }
            Ok(report.pass)
        }
        Command::ListPresets => {
            print!("{}", presets::listing());
            Ok(true)
        }
        Command::Preset { name } => {
            let c = presets::find(&name).ok_or_else(|| CliError::Config(format!("unknown preset `{name}`")))?;
            print!("{}", c.to_toml());
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("htrunc: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

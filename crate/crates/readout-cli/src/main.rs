use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use readout_cli::oracle::{run_oracle, OracleFile};
use readout_cli::{presets, run_scenario, CliError, CliResult, Format, RunOptions, Scenario, TolProfile};

#[derive(Parser)]
#[command(name = "readout", version, about = "Qubit readout network sweeps and oracle checks")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum TolArg {
    Strict,
    Fast,
}

impl From<TolArg> for TolProfile {
    fn from(t: TolArg) -> Self {
        match t {
            TolArg::Strict => TolProfile::Strict,
            TolArg::Fast => TolProfile::Fast,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a scenario file or a built-in preset.
    Run {
        config: Option<PathBuf>,
        #[arg(long)]
        preset: Option<String>,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Defaults to the --out extension, else csv.
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long, value_enum, default_value = "strict")]
        tol_profile: TolArg,
    },
    /// Fock-space cross-check; uses the reference instances without a config.
    Oracle {
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long, value_enum, default_value = "strict")]
        tol_profile: TolArg,
    },
    /// List the built-in presets.
    ListPresets,
    /// Print a preset as a TOML scenario file.
    ShowPreset { name: String },
}

fn main() -> ExitCode {
    match real_main() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn real_main() -> CliResult<ExitCode> {
    match Cli::parse().cmd {
        Cmd::Run { config, preset, out, format, workers, tol_profile } => {
            let (scenario, preset) = match (config, preset) {
                (Some(p), None) => (Scenario::load(&p)?, None),
                (None, Some(name)) => (presets::get(&name)?, Some(name)),
                _ => return Err(CliError::ConfigParse("give exactly one of CONFIG or --preset".into())),
            };
            let opts = RunOptions { workers, tol_profile: tol_profile.into(), preset };
            let table = run_scenario(&scenario, &opts)?;
            let format = match (format, &out) {
                (Some(FormatArg::Json), _) => Format::Json,
                (Some(FormatArg::Csv), _) => Format::Csv,
                (None, Some(p)) if p.extension().is_some_and(|e| e == "json") => Format::Json,
                _ => Format::Csv,
            };
            match out {
                Some(p) => {
                    for f in table.emit(&p, format)? {
                        eprintln!("wrote {}", f.display());
                    }
                }
                None => match format {
                    Format::Json => println!("{}", table.to_json()),
                    Format::Csv => table.write_csv(std::io::stdout().lock())?,
                },
            }
            let errors = table.error_count();
            if errors > 0 {
                eprintln!("{errors} of {} points failed", table.rows.len());
                return Ok(ExitCode::from(1));
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Oracle { config, out, workers, tol_profile } => {
            let file = match config {
                Some(p) => OracleFile::from_toml(&std::fs::read_to_string(&p)?)?,
                None => OracleFile::reference(),
            };
            let rows = run_oracle(&file, tol_profile.into(), workers)?;
            let text = serde_json::to_string_pretty(&rows).expect("rows serialise");
            match out {
                Some(p) => std::fs::write(p, text)?,
                None => writeln!(std::io::stdout(), "{text}")?,
            }
            for r in &rows {
                eprintln!("{} {}", if r.pass { "PASS" } else { "FAIL" }, r.name);
            }
            Ok(if rows.iter().all(|r| r.pass) { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Cmd::ListPresets => {
            for p in presets::all() {
                println!("{:<24} {}", p.name, p.description);
                if let Some(src) = p.scenario.source() {
                    println!("{:<24} source: {src}", "");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::ShowPreset { name } => {
            let sc = presets::get(&name)?;
            let text = toml::to_string_pretty(&sc).map_err(|e| CliError::ConfigParse(e.to_string()))?;
            print!("{text}");
            Ok(ExitCode::SUCCESS)
        }
    }
}

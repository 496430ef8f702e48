use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use coopbeam::config::{parse_config, ScenarioConfig};
use coopbeam::design::Method;
use coopbeam::simulation::{
    run_campaign, summary_table, write_summary_csv, write_trials_csv, Figure,
};

/// Monte Carlo simulator for cooperative leakage beamforming.
///
/// Writes `trials.csv` and `summary.csv` to the output directory and prints
/// a summary table. The worker count follows `COOPBEAM_THREADS`.
#[derive(Debug, Parser)]
#[command(name = "coopbeam", version)]
struct Args {
    /// Scenario file (TOML).
    #[arg(long)]
    config: PathBuf,

    /// Directory for the CSV outputs.
    #[arg(long, default_value = "out")]
    out: PathBuf,

    /// Comma-separated methods replacing the configured list.
    #[arg(long, value_delimiter = ',')]
    methods: Option<Vec<String>>,

    #[arg(long)]
    trials: Option<usize>,

    #[arg(long)]
    seed: Option<u64>,

    /// Check the scenario and exit without running.
    #[arg(long)]
    validate_only: bool,

    /// Preset experiment: fig3, fig5, fig6, fig7, fig8 or fig9.
    #[arg(long)]
    figure: Option<String>,
}

fn load(args: &Args) -> Result<ScenarioConfig, String> {
    let text = fs::read_to_string(&args.config)
        .map_err(|e| format!("cannot read {}: {e}", args.config.display()))?;
    let mut config = parse_config(&text)
        .map_err(|e| format!("invalid config {}:\n{e}", args.config.display()))?;
    let figure = args
        .figure
        .as_deref()
        .map(str::parse::<Figure>)
        .transpose()?;
    if figure.is_none() && args.methods.is_none() && args.trials.is_none() && args.seed.is_none() {
        return Ok(config);
    }
    if let Some(f) = figure {
        f.apply(&mut config);
    }
    if let Some(names) = &args.methods {
        config.methods.enabled = names
            .iter()
            .map(|n| n.trim().parse::<Method>().map_err(|e| e.to_string()))
            .collect::<Result<_, _>>()?;
    }
    if let Some(t) = args.trials {
        config.campaign.trials = t;
    }
    if let Some(s) = args.seed {
        config.campaign.seed = s;
    }
    // Overrides go through the same validation as the file.
    parse_config(&config.to_toml()).map_err(|e| format!("invalid scenario after overrides:\n{e}"))
}

fn prepare_output(dir: &Path) -> Result<(), String> {
    fs::create_dir_all(dir)
        .map_err(|e| format!("cannot create output directory {}: {e}", dir.display()))?;
    let probe = dir.join(".coopbeam-write-test");
    File::create(&probe)
        .map_err(|e| format!("output directory {} is not writable: {e}", dir.display()))?;
    let _ = fs::remove_file(probe);
    Ok(())
}

fn create(path: &Path) -> Result<BufWriter<File>, String> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn run(args: &Args) -> Result<(), String> {
    let config = load(args)?;
    if args.validate_only {
        println!("{}: ok", args.config.display());
        return Ok(());
    }
    prepare_output(&args.out)?;
    let result = run_campaign(&config).map_err(|e| e.to_string())?;
    let trials = args.out.join("trials.csv");
    write_trials_csv(create(&trials)?, &config, &result.rows)
        .map_err(|e| format!("{}: {e}", trials.display()))?;
    let summary = args.out.join("summary.csv");
    write_summary_csv(create(&summary)?, &result.summary)
        .map_err(|e| format!("{}: {e}", summary.display()))?;
    println!("{}", summary_table(&result.summary));
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}

use std::io::Read as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use hankel_symbol_lab::cli::{run, RunConfig};

/// Construct, verify and classify symbols of positive operator-valued
/// Hankel operators from a JSON run configuration.
#[derive(Parser, Debug)]
#[command(name = "hankel-symbol-lab", version, about)]
struct Args {
    /// Path to the JSON run configuration ("-" reads stdin).
    #[arg(long)]
    config: PathBuf,

    /// Seed for randomized trials; overrides the config value.
    #[arg(long)]
    seed: Option<u64>,

    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Directory for CSV curve data (created if missing).
    #[arg(long)]
    csv: Option<PathBuf>,

    /// Tolerance override, repeatable: --tol-override key=value.
    #[arg(long = "tol-override", value_name = "KEY=VALUE")]
    tol_override: Vec<String>,
}

fn main() -> ExitCode {
    match run_main() {
        Ok(pass) => {
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn run_main() -> Result<bool, Box<dyn std::error::Error>> {
    let args = Args::parse();

    let raw = if args.config.as_os_str() == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        buf
    } else {
        std::fs::read_to_string(&args.config)?
    };
    let mut config = RunConfig::from_json_str(&raw)?;

    if let Some(seed) = args.seed {
        config.seed = Some(seed);
    }
    for pair in &args.tol_override {
        let (key, value) = pair
            .split_once('=')
            .ok_or_else(|| format!("bad --tol-override {pair:?}, expected key=value"))?;
        let value: f64 = value
            .parse()
            .map_err(|e| format!("bad --tol-override value in {pair:?}: {e}"))?;
        config.tolerances.insert(key.to_string(), value);
    }

    let started = Instant::now();
    let (report, csv_files) = run(&config)?;
    // Wall time is deliberately kept out of the report so identical
    // (config, seed) runs stay byte-identical.
    eprintln!(
        "{}: {} in {:.3}s",
        report.command,
        if report.pass { "pass" } else { "FAIL" },
        started.elapsed().as_secs_f64()
    );

    let bytes = report.to_json_bytes();
    match &args.out {
        Some(path) => std::fs::write(path, &bytes)?,
        None => {
            use std::io::Write as _;
            std::io::stdout().write_all(&bytes)?;
        }
    }

    if let Some(dir) = &args.csv {
        std::fs::create_dir_all(dir)?;
        for file in &csv_files {
            std::fs::write(dir.join(&file.name), file.content.as_bytes())?;
        }
    }

    Ok(report.pass)
}

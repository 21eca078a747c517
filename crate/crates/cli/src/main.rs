use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use scscc::DecoderMode;
use scscc_cli::{config::SEED_ENV, load, presets::PRESETS, run, Event, Overrides};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    Window,
    Blockwise,
}

/// Monte Carlo BER sweeps for spatially coupled serially concatenated codes.
#[derive(Debug, Parser)]
#[command(version, after_help = format!("The default seed can be set with {SEED_ENV}."))]
struct Args {
    /// Configuration file (TOML).
    #[arg(long, value_name = "PATH", conflicts_with = "preset")]
    config: Option<PathBuf>,

    /// Built-in configuration, see --list-presets.
    #[arg(long, value_name = "NAME")]
    preset: Option<String>,

    /// Output directory.
    #[arg(long, value_name = "DIR", default_value = "results")]
    out: PathBuf,

    #[arg(long, value_name = "N")]
    seed: Option<u64>,

    /// Worker threads (default: all cores).
    #[arg(long, value_name = "N")]
    threads: Option<usize>,

    #[arg(long, value_enum)]
    mode: Option<Mode>,

    #[arg(long, value_name = "N")]
    max_bits: Option<u64>,

    #[arg(long, value_name = "N")]
    min_errors: Option<u64>,

    /// Print the built-in presets and exit.
    #[arg(long)]
    list_presets: bool,

    /// Print the effective configuration and exit.
    #[arg(long)]
    dry_run: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    if args.list_presets {
        for (name, description, _) in PRESETS {
            println!("{name:8} {description}");
        }
        return ExitCode::SUCCESS;
    }
    if let Some(n) = args.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: --threads: {e}");
            return ExitCode::from(2);
        }
    }
    let mut config = match load(args.preset.as_deref(), args.config.as_deref()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let overrides = Overrides {
        seed: args.seed,
        mode: args.mode.map(|m| match m {
            Mode::Window => DecoderMode::WholeWindow,
            Mode::Blockwise => DecoderMode::BlockWise,
        }),
        max_bits: args.max_bits,
        min_errors: args.min_errors,
    };
    if let Err(e) = config.apply(&overrides) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if args.dry_run {
        print!("{}", config.to_toml());
        return ExitCode::SUCCESS;
    }

    let summary = run(&config, &args.out, |event| match event {
        Event::Point {
            scenario,
            point,
            seconds,
        } => eprintln!(
            "{scenario}  {:6.3} dB  ber {:.3e}  ({} errors / {} bits, {seconds:.1} s)",
            point.ebno_db, point.ber, point.bit_errors, point.info_bits
        ),
        Event::Required { scenario, result } => eprintln!(
            "{scenario}  BER {:.1e} at {:.3} dB [{:.3}, {:.3}]",
            result.target_ber, result.ebno_db, result.low_db, result.high_db
        ),
        Event::Failed { scenario, error } => eprintln!("{scenario}  failed: {error}"),
    });
    match summary {
        Ok(s) if s.success() => {
            println!("{} points written to {}", s.points, s.csv.display());
            ExitCode::SUCCESS
        }
        Ok(s) => {
            for f in &s.failures {
                eprintln!("failed: {f}");
            }
            println!(
                "{} points written to {} ({} failures)",
                s.points,
                s.csv.display(),
                s.failures.len()
            );
            ExitCode::FAILURE
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

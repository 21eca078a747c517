//! Sweep execution and result files.
//!
//! For a run named `NAME` the output directory receives:
//!
//! - `NAME.csv`: one row per (scenario, Eb/N0) point, preceded by `#`
//!   comment lines echoing the effective configuration. Identical
//!   configurations give byte-identical files.
//! - `NAME.timing.csv`: wall-clock seconds per point.
//! - `NAME.dat`: whitespace-separated curves, one block per scenario,
//!   blocks separated by two blank lines (gnuplot `index`).
//! - `NAME.required_snr.csv`: with `run.target_ber`, the required Eb/N0
//!   per scenario.
//!
//! Rows are flushed as points finish, so an interrupted or failing run
//! keeps what it produced.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use scscc::experiment::{required_snr, run_ber_point_with, BerPoint, RequiredSnr, Scenario};
use scscc::ChannelSpec;

use crate::config::{algorithm_name, mode_name, RunConfig};
use crate::{CliError, Result};

pub const CSV_COLUMNS: &[&str] = &[
    "scenario",
    "K",
    "W",
    "m",
    "I_W",
    "uncoupled",
    "mode",
    "L",
    "C",
    "I_eff",
    "ebno_db",
    "bits",
    "errors",
    "block_errors",
    "ber",
    "ci_low",
    "ci_high",
    "sections_per_bit",
    "sections_per_interior_bit",
    "chunks",
];

pub const REQUIRED_COLUMNS: &[&str] = &[
    "scenario",
    "K",
    "W",
    "m",
    "I_W",
    "uncoupled",
    "L",
    "C",
    "I_eff",
    "target_ber",
    "ebno_db",
    "low_db",
    "high_db",
    "points",
];

/// `x` with 12 significant digits.
pub fn sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    format!("{x:.11e}")
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Version string recorded in result headers.
pub fn version() -> String {
    format!("scscc {}", env!("CARGO_PKG_VERSION"))
}

fn comment_header(config: &RunConfig) -> String {
    let mut h = format!("# {}\n# effective configuration:\n", version());
    for line in config.to_toml().lines() {
        h.push_str("# ");
        h.push_str(line);
        h.push('\n');
    }
    h
}

fn point_row(s: &Scenario, p: &BerPoint) -> Vec<String> {
    let sections_per_bit = if p.info_bits == 0 {
        0.0
    } else {
        p.trellis_sections_computed as f64 / p.info_bits as f64
    };
    vec![
        s.name.clone(),
        s.params.k.to_string(),
        s.params.w.to_string(),
        s.params.m.to_string(),
        s.params.iterations.to_string(),
        s.uncoupled.to_string(),
        mode_name(s.mode).to_string(),
        s.latency().to_string(),
        s.constraint_length().to_string(),
        s.effective_iterations().to_string(),
        sig12(p.ebno_db),
        p.info_bits.to_string(),
        p.bit_errors.to_string(),
        p.block_errors.to_string(),
        sig12(p.ber),
        sig12(p.ci_low),
        sig12(p.ci_high),
        sig12(sections_per_bit),
        p.sections_per_interior_bit.map(sig12).unwrap_or_default(),
        p.chunks.to_string(),
    ]
}

fn required_row(s: &Scenario, r: &RequiredSnr) -> Vec<String> {
    vec![
        s.name.clone(),
        s.params.k.to_string(),
        s.params.w.to_string(),
        s.params.m.to_string(),
        s.params.iterations.to_string(),
        s.uncoupled.to_string(),
        s.latency().to_string(),
        s.constraint_length().to_string(),
        s.effective_iterations().to_string(),
        sig12(r.target_ber),
        sig12(r.ebno_db),
        sig12(r.low_db),
        sig12(r.high_db),
        r.points.len().to_string(),
    ]
}

/// Progress events reported while running.
#[derive(Debug, Clone)]
pub enum Event<'a> {
    Point {
        scenario: &'a str,
        point: &'a BerPoint,
        seconds: f64,
    },
    Required {
        scenario: &'a str,
        result: &'a RequiredSnr,
    },
    Failed {
        scenario: &'a str,
        error: &'a str,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub csv: PathBuf,
    pub timing: PathBuf,
    pub dat: PathBuf,
    pub required: Option<PathBuf>,
    pub points: usize,
    /// `scenario: error` for every failed work unit.
    pub failures: Vec<String>,
}

impl RunSummary {
    pub fn success(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Outputs {
    csv: csv::Writer<BufWriter<File>>,
    timing: csv::Writer<BufWriter<File>>,
    dat: BufWriter<File>,
    dat_path: PathBuf,
    required: Option<csv::Writer<BufWriter<File>>>,
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).map_err(io_err(path))?))
}

fn csv_with_header(
    path: &Path,
    header: &str,
    columns: &[&str],
) -> Result<csv::Writer<BufWriter<File>>> {
    let mut f = create(path)?;
    f.write_all(header.as_bytes()).map_err(io_err(path))?;
    let mut w = csv::Writer::from_writer(f);
    w.write_record(columns)?;
    w.flush().map_err(io_err(path))?;
    Ok(w)
}

/// Runs every scenario of `config`, writing results under `out_dir`.
pub fn run(
    config: &RunConfig,
    out_dir: &Path,
    mut progress: impl FnMut(Event<'_>),
) -> Result<RunSummary> {
    std::fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    let stem = out_dir.join(&config.name);
    let path = |ext: &str| PathBuf::from(format!("{}.{ext}", stem.display()));
    let header = comment_header(config);
    let mut summary = RunSummary {
        csv: path("csv"),
        timing: path("timing.csv"),
        dat: path("dat"),
        required: config.target_ber.map(|_| path("required_snr.csv")),
        points: 0,
        failures: Vec::new(),
    };
    let mut out = Outputs {
        csv: csv_with_header(&summary.csv, &header, CSV_COLUMNS)?,
        timing: csv_with_header(
            &summary.timing,
            &format!("# {}\n", version()),
            &["scenario", "ebno_db", "wall_time_s"],
        )?,
        dat: create(&summary.dat)?,
        dat_path: summary.dat.clone(),
        required: match &summary.required {
            Some(p) => Some(csv_with_header(p, &header, REQUIRED_COLUMNS)?),
            None => None,
        },
    };
    writeln!(
        out.dat,
        "# {}\n# columns: ebno_db ber ci_low ci_high\n# algorithm: {}",
        version(),
        algorithm_name(config.algorithm)
    )
    .map_err(io_err(&out.dat_path))?;

    for (i, scenario) in config.scenarios().iter().enumerate() {
        let result = run_scenario(
            config,
            scenario,
            &mut out,
            &mut summary,
            &mut progress,
            i > 0,
        );
        if let Err(e) = result {
            let error = e.to_string();
            progress(Event::Failed {
                scenario: &scenario.name,
                error: &error,
            });
            summary.failures.push(format!("{}: {error}", scenario.name));
        }
    }
    Ok(summary)
}

fn run_scenario(
    config: &RunConfig,
    scenario: &Scenario,
    out: &mut Outputs,
    summary: &mut RunSummary,
    progress: &mut impl FnMut(Event<'_>),
    separate: bool,
) -> Result<()> {
    scenario.validate()?;
    let code = scenario.code()?;
    if separate {
        write!(out.dat, "\n\n").map_err(io_err(&out.dat_path))?;
    }
    writeln!(
        out.dat,
        "# {} K={} W={} m={} I_W={}",
        scenario.name,
        scenario.params.k,
        scenario.params.w,
        scenario.params.m,
        scenario.params.iterations
    )
    .map_err(io_err(&out.dat_path))?;
    for &x in &scenario.ebno_grid {
        let start = Instant::now();
        let p = run_ber_point_with(scenario, &code, &ChannelSpec::new(x))?;
        let seconds = start.elapsed().as_secs_f64();
        out.csv.write_record(point_row(scenario, &p))?;
        out.csv.flush().map_err(io_err(&summary.csv))?;
        out.timing
            .write_record([scenario.name.clone(), sig12(x), format!("{seconds:.3}")])?;
        out.timing.flush().map_err(io_err(&summary.timing))?;
        writeln!(
            out.dat,
            "{} {} {} {}",
            sig12(p.ebno_db),
            sig12(p.ber),
            sig12(p.ci_low),
            sig12(p.ci_high)
        )
        .map_err(io_err(&out.dat_path))?;
        out.dat.flush().map_err(io_err(&out.dat_path))?;
        summary.points += 1;
        progress(Event::Point {
            scenario: &scenario.name,
            point: &p,
            seconds,
        });
    }
    if let (Some(target), Some(w)) = (config.target_ber, out.required.as_mut()) {
        let r = required_snr(scenario, target, &config.search)?;
        w.write_record(required_row(scenario, &r))?;
        w.flush()
            .map_err(io_err(summary.required.as_deref().unwrap_or(Path::new(""))))?;
        progress(Event::Required {
            scenario: &scenario.name,
            result: &r,
        });
    }
    Ok(())
}

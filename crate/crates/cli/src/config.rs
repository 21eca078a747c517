//! Run configuration files.
//!
//! A configuration is a TOML document:
//!
//! ```toml
//! [run]
//! name = "fig5a"
//! seed = 1
//! mode = "window"          # or "blockwise"
//! algorithm = "log-map"    # or "max-log"
//! chunk_blocks = 200
//! target_ber = 1e-4        # optional required-SNR search
//!
//! [code]
//! feedback = "7"           # octal
//! feedforward = "5"
//! memory = 2
//!
//! [ebno]
//! grid = "0.5:0.25:3.0"    # start:step:stop, or a list of values
//!
//! [stop]
//! min_errors = 200
//! max_bits = 2000000
//!
//! [[scenario]]
//! K = 32
//! W = 32
//! m = 15
//! I_W = 3
//!
//! [[scenario]]
//! preset = "table1/L1024"
//!
//! [[scenario]]
//! uncoupled = true
//! K = 1024
//! I_W = 80
//! ```

use serde::{Deserialize, Serialize};

use scscc::experiment::{table1_row, Scenario, SnrSearch, StopRule, TABLE1_LATENCIES};
use scscc::{CouplingParams, DecoderMode, GeneratorSpec, SisoAlgorithm};

use crate::{CliError, Result};

/// Seed used when neither the file nor the environment gives one.
pub const DEFAULT_SEED: u64 = 1;

/// Environment variable that replaces [`DEFAULT_SEED`].
pub const SEED_ENV: &str = "SCSCC_SEED";

/// Largest number of points a grid may expand to.
const MAX_GRID_POINTS: usize = 10_000;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    run: Option<RawRun>,
    code: Option<RawCode>,
    ebno: Option<RawEbno>,
    stop: Option<RawStop>,
    search: Option<RawSearch>,
    #[serde(default)]
    scenario: Vec<RawScenario>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRun {
    name: Option<String>,
    seed: Option<u64>,
    mode: Option<String>,
    algorithm: Option<String>,
    chunk_blocks: Option<usize>,
    tail_blocks: Option<usize>,
    target_ber: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Octal {
    Text(String),
    Int(u32),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCode {
    feedback: Option<Octal>,
    feedforward: Option<Octal>,
    memory: Option<u32>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawGrid {
    Range(String),
    List(Vec<f64>),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEbno {
    grid: Option<RawGrid>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStop {
    min_errors: Option<u64>,
    min_bits: Option<u64>,
    max_bits: Option<u64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSearch {
    start_db: Option<f64>,
    step_db: Option<f64>,
    max_db: Option<f64>,
    resolution_db: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    name: Option<String>,
    preset: Option<String>,
    #[serde(rename = "K")]
    k: Option<usize>,
    #[serde(rename = "W")]
    w: Option<usize>,
    m: Option<usize>,
    #[serde(rename = "I_W")]
    iterations: Option<usize>,
    uncoupled: Option<bool>,
}

/// One simulated code, as listed in the configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioSpec {
    pub name: String,
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "W")]
    pub w: usize,
    pub m: usize,
    #[serde(rename = "I_W")]
    pub iterations: usize,
    pub uncoupled: bool,
}

impl ScenarioSpec {
    pub fn params(&self) -> CouplingParams {
        CouplingParams {
            k: self.k,
            m: self.m,
            w: self.w,
            iterations: self.iterations,
        }
    }
}

/// A validated run configuration with all defaults filled in.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub name: String,
    pub seed: u64,
    pub mode: DecoderMode,
    pub algorithm: SisoAlgorithm,
    pub generator: GeneratorSpec,
    pub grid: Vec<f64>,
    pub stop: StopRule,
    pub chunk_blocks: usize,
    /// `None`: one window's worth of blocks.
    pub tail_blocks: Option<usize>,
    pub target_ber: Option<f64>,
    pub search: SnrSearch,
    pub scenarios: Vec<ScenarioSpec>,
}

fn invalid(key: impl Into<String>, message: impl Into<String>) -> CliError {
    CliError::Invalid {
        key: key.into(),
        message: message.into(),
    }
}

/// Expands `"start:step:stop"` (inclusive of `stop` up to rounding).
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let key = "ebno.grid";
    let parts: Vec<&str> = text.split(':').map(str::trim).collect();
    let num = |s: &str| -> Result<f64> {
        s.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| invalid(key, format!("not a number: {s:?}")))
    };
    match parts.as_slice() {
        [] | [""] => Ok(Vec::new()),
        [single] => Ok(vec![num(single)?]),
        [start, step, stop] => {
            let (start, step, stop) = (num(start)?, num(step)?, num(stop)?);
            if step <= 0.0 {
                return Err(invalid(key, "step must be positive"));
            }
            if stop < start {
                return Err(invalid(key, "stop must not be below start"));
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
            if count > MAX_GRID_POINTS {
                return Err(invalid(key, format!("more than {MAX_GRID_POINTS} points")));
            }
            // round to suppress accumulated binary noise in the echo and CSV
            Ok((0..count)
                .map(|i| ((start + i as f64 * step) * 1e9).round() / 1e9)
                .collect())
        }
        _ => Err(invalid(key, "expected start:step:stop")),
    }
}

fn parse_octal(key: &str, v: &Octal) -> Result<u32> {
    match v {
        Octal::Int(i) => Ok(*i),
        Octal::Text(s) => u32::from_str_radix(s.trim().trim_start_matches("0o"), 8)
            .map_err(|_| invalid(key, format!("not an octal number: {s:?}"))),
    }
}

pub fn parse_mode(text: &str) -> Result<DecoderMode> {
    match text {
        "window" | "whole-window" => Ok(DecoderMode::WholeWindow),
        "blockwise" | "block-wise" => Ok(DecoderMode::BlockWise),
        other => Err(invalid(
            "run.mode",
            format!("expected \"window\" or \"blockwise\", got {other:?}"),
        )),
    }
}

pub fn mode_name(mode: DecoderMode) -> &'static str {
    match mode {
        DecoderMode::WholeWindow => "window",
        DecoderMode::BlockWise => "blockwise",
    }
}

fn parse_algorithm(text: &str) -> Result<SisoAlgorithm> {
    match text {
        "log-map" => Ok(SisoAlgorithm::LogMap),
        "max-log" | "max-log-map" => Ok(SisoAlgorithm::MaxLog),
        other => Err(invalid(
            "run.algorithm",
            format!("expected \"log-map\" or \"max-log\", got {other:?}"),
        )),
    }
}

pub fn algorithm_name(algorithm: SisoAlgorithm) -> &'static str {
    match algorithm {
        SisoAlgorithm::LogMap => "log-map",
        SisoAlgorithm::MaxLog => "max-log",
    }
}

/// Scenarios of a scenario-level preset such as `"table1/L1024"`.
pub fn scenario_preset(name: &str) -> Option<Vec<ScenarioSpec>> {
    let latency: usize = name.strip_prefix("table1/L")?.parse().ok()?;
    if !TABLE1_LATENCIES.contains(&latency) {
        return None;
    }
    Some(
        table1_row(latency)
            .into_iter()
            .map(|p| ScenarioSpec {
                name: format!("L{latency}-K{}-W{}-m{}", p.k, p.w, p.m),
                k: p.k,
                w: p.w,
                m: p.m,
                iterations: p.iterations,
                uncoupled: false,
            })
            .collect(),
    )
}

fn scenario_specs(i: usize, raw: &RawScenario) -> Result<Vec<ScenarioSpec>> {
    let key = |field: &str| format!("scenario[{i}].{field}");
    if let Some(preset) = &raw.preset {
        if raw.k.is_some() || raw.w.is_some() || raw.m.is_some() || raw.iterations.is_some() {
            return Err(invalid(
                key("preset"),
                "cannot be combined with K, W, m or I_W",
            ));
        }
        return scenario_preset(preset)
            .ok_or_else(|| invalid(key("preset"), format!("unknown scenario preset {preset:?}")));
    }
    let uncoupled = raw.uncoupled.unwrap_or(false);
    let k = raw.k.ok_or_else(|| invalid(key("K"), "missing"))?;
    let iterations = raw
        .iterations
        .ok_or_else(|| invalid(key("I_W"), "missing"))?;
    let (w, m) = if uncoupled {
        if raw.w.is_some_and(|w| w != 1) {
            return Err(invalid(key("W"), "uncoupled scenarios use W = 1"));
        }
        if raw.m.is_some_and(|m| m != 0) {
            return Err(invalid(key("m"), "uncoupled scenarios use m = 0"));
        }
        (1, 0)
    } else {
        (
            raw.w.ok_or_else(|| invalid(key("W"), "missing"))?,
            raw.m.ok_or_else(|| invalid(key("m"), "missing"))?,
        )
    };
    if let Err(e) = CouplingParams::new(k, m, w, iterations) {
        let field = match &e {
            scscc::Error::Params(msg) if msg.starts_with("K ") => "K",
            scscc::Error::Params(msg) if msg.starts_with("W ") => "W",
            scscc::Error::Params(msg) if msg.starts_with("I_W") => "I_W",
            _ => "m",
        };
        return Err(invalid(key(field), e.to_string()));
    }
    let name = raw.name.clone().unwrap_or_else(|| {
        if uncoupled {
            format!("SCC-K{k}")
        } else {
            format!("K{k}-W{w}-m{m}")
        }
    });
    Ok(vec![ScenarioSpec {
        name,
        k,
        w,
        m,
        iterations,
        uncoupled,
    }])
}

/// Parses and validates a configuration document. `default_seed` is used
/// when the document has no `run.seed`.
pub fn parse_config_with_seed(text: &str, default_seed: u64) -> Result<RunConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| CliError::Syntax(e.to_string()))?;
    let run = raw.run.unwrap_or_default();
    let code = raw.code.unwrap_or_default();
    let stop_raw = raw.stop.unwrap_or_default();
    let search_raw = raw.search.unwrap_or_default();

    let mode = parse_mode(run.mode.as_deref().unwrap_or("window"))?;
    let algorithm = parse_algorithm(run.algorithm.as_deref().unwrap_or("log-map"))?;

    let default_gen = GeneratorSpec::RSC_5_7;
    let feedback = match &code.feedback {
        Some(v) => parse_octal("code.feedback", v)?,
        None => default_gen.feedback,
    };
    let feedforward = match &code.feedforward {
        Some(v) => parse_octal("code.feedforward", v)?,
        None => default_gen.feedforward,
    };
    let memory = code.memory.unwrap_or(default_gen.memory);
    let generator = GeneratorSpec::new(feedback, feedforward, memory)
        .map_err(|e| invalid("code", e.to_string()))?;

    let grid = match raw.ebno.and_then(|e| e.grid) {
        None => return Err(invalid("ebno.grid", "missing")),
        Some(RawGrid::Range(s)) => parse_grid(&s)?,
        Some(RawGrid::List(v)) => {
            if let Some(x) = v.iter().find(|x| !x.is_finite()) {
                return Err(invalid("ebno.grid", format!("not a finite number: {x}")));
            }
            v
        }
    };
    if grid.is_empty() && run.target_ber.is_none() {
        return Err(invalid("ebno.grid", "empty Eb/N0 grid"));
    }

    let stop = StopRule {
        min_errors: stop_raw
            .min_errors
            .unwrap_or(StopRule::default().min_errors),
        min_bits: stop_raw.min_bits.unwrap_or(0),
        max_bits: stop_raw.max_bits.unwrap_or(StopRule::default().max_bits),
    };
    validate_stop(&stop)?;

    let d = SnrSearch::default();
    let search = SnrSearch {
        start_db: search_raw.start_db.unwrap_or(d.start_db),
        step_db: search_raw.step_db.unwrap_or(d.step_db),
        max_db: search_raw.max_db.unwrap_or(d.max_db),
        resolution_db: search_raw.resolution_db.unwrap_or(d.resolution_db),
    };
    if let Some(t) = run.target_ber {
        if !(t > 0.0 && t < 0.5) {
            return Err(invalid("run.target_ber", "must lie in (0, 0.5)"));
        }
        if search.step_db.is_nan() || search.step_db <= 0.0 {
            return Err(invalid("search.step_db", "must be positive"));
        }
        if search.resolution_db.is_nan() || search.resolution_db <= 0.0 {
            return Err(invalid("search.resolution_db", "must be positive"));
        }
        if search.max_db.partial_cmp(&search.start_db) != Some(std::cmp::Ordering::Greater) {
            return Err(invalid("search.max_db", "must exceed search.start_db"));
        }
    }

    let chunk_blocks = run.chunk_blocks.unwrap_or(200);
    if chunk_blocks == 0 {
        return Err(invalid("run.chunk_blocks", "chunk_blocks >= 1 required"));
    }

    let mut scenarios = Vec::new();
    for (i, s) in raw.scenario.iter().enumerate() {
        scenarios.extend(scenario_specs(i, s)?);
    }
    if scenarios.is_empty() {
        return Err(invalid("scenario", "no scenario given"));
    }
    for s in &scenarios {
        if chunk_blocks + run.tail_blocks.unwrap_or(s.w) < s.w {
            return Err(invalid(
                "run.tail_blocks",
                format!("chunk_blocks + tail_blocks must be at least W = {}", s.w),
            ));
        }
    }

    Ok(RunConfig {
        name: run.name.unwrap_or_else(|| "run".into()),
        seed: run.seed.unwrap_or(default_seed),
        mode,
        algorithm,
        generator,
        grid,
        stop,
        chunk_blocks,
        tail_blocks: run.tail_blocks,
        target_ber: run.target_ber,
        search,
        scenarios,
    })
}

/// Parses a configuration, taking the default seed from `SCSCC_SEED` if set.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    parse_config_with_seed(text, env_seed()?)
}

/// The default seed, honouring `SCSCC_SEED`.
pub fn env_seed() -> Result<u64> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| invalid(SEED_ENV, format!("not an unsigned integer: {v:?}"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn validate_stop(stop: &StopRule) -> Result<()> {
    if stop.max_bits == 0 {
        return Err(invalid("stop.max_bits", "max_bits must be positive"));
    }
    if stop.min_bits > stop.max_bits {
        return Err(invalid("stop.min_bits", "must not exceed stop.max_bits"));
    }
    Ok(())
}

/// Command-line overrides applied on top of a parsed configuration.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub mode: Option<DecoderMode>,
    pub max_bits: Option<u64>,
    pub min_errors: Option<u64>,
}

impl RunConfig {
    pub fn apply(&mut self, o: &Overrides) -> Result<()> {
        if let Some(s) = o.seed {
            self.seed = s;
        }
        if let Some(m) = o.mode {
            self.mode = m;
        }
        if let Some(b) = o.max_bits {
            self.stop.max_bits = b;
        }
        if let Some(e) = o.min_errors {
            self.stop.min_errors = e;
        }
        if self.stop.min_bits > self.stop.max_bits {
            self.stop.min_bits = self.stop.max_bits;
        }
        validate_stop(&self.stop)
    }

    /// Simulation scenarios with the run-wide settings applied.
    pub fn scenarios(&self) -> Vec<Scenario> {
        self.scenarios
            .iter()
            .map(|s| {
                let mut sc = Scenario::coupled(s.params())
                    .with_name(s.name.clone())
                    .with_seed(self.seed)
                    .with_grid(self.grid.clone())
                    .with_stop(self.stop)
                    .with_mode(self.mode)
                    .with_algorithm(self.algorithm)
                    .with_chunk_blocks(self.chunk_blocks)
                    .with_tail_blocks(self.tail_blocks.unwrap_or(s.w));
                sc.uncoupled = s.uncoupled;
                sc.outer = self.generator;
                sc.inner = self.generator;
                sc
            })
            .collect()
    }

    /// The effective configuration as a TOML document.
    pub fn to_toml(&self) -> String {
        #[derive(Serialize)]
        struct Echo<'a> {
            run: EchoRun<'a>,
            code: EchoCode,
            ebno: EchoEbno<'a>,
            stop: EchoStop,
            #[serde(skip_serializing_if = "Option::is_none")]
            search: Option<EchoSearch>,
            scenario: &'a [ScenarioSpec],
        }
        #[derive(Serialize)]
        struct EchoRun<'a> {
            name: &'a str,
            seed: u64,
            mode: &'a str,
            algorithm: &'a str,
            chunk_blocks: usize,
            #[serde(skip_serializing_if = "Option::is_none")]
            tail_blocks: Option<usize>,
            #[serde(skip_serializing_if = "Option::is_none")]
            target_ber: Option<f64>,
        }
        #[derive(Serialize)]
        struct EchoCode {
            feedback: String,
            feedforward: String,
            memory: u32,
        }
        #[derive(Serialize)]
        struct EchoEbno<'a> {
            grid: &'a [f64],
        }
        #[derive(Serialize)]
        struct EchoStop {
            min_errors: u64,
            min_bits: u64,
            max_bits: u64,
        }
        #[derive(Serialize)]
        struct EchoSearch {
            start_db: f64,
            step_db: f64,
            max_db: f64,
            resolution_db: f64,
        }
        let echo = Echo {
            run: EchoRun {
                name: &self.name,
                seed: self.seed,
                mode: mode_name(self.mode),
                algorithm: algorithm_name(self.algorithm),
                chunk_blocks: self.chunk_blocks,
                tail_blocks: self.tail_blocks,
                target_ber: self.target_ber,
            },
            code: EchoCode {
                feedback: format!("{:o}", self.generator.feedback),
                feedforward: format!("{:o}", self.generator.feedforward),
                memory: self.generator.memory,
            },
            ebno: EchoEbno { grid: &self.grid },
            stop: EchoStop {
                min_errors: self.stop.min_errors,
                min_bits: self.stop.min_bits,
                max_bits: self.stop.max_bits,
            },
            search: self.target_ber.map(|_| EchoSearch {
                start_db: self.search.start_db,
                step_db: self.search.step_db,
                max_db: self.search.max_db,
                resolution_db: self.search.resolution_db,
            }),
            scenario: &self.scenarios,
        };
        toml::to_string(&echo).expect("config serializes")
    }
}

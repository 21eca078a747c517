//! Scenario algebra and the Monte Carlo BER harness.
//!
//! A simulation chunk is an independent stream of `chunk_blocks` counted
//! blocks followed by `tail_blocks` blocks that are transmitted and decoded
//! but not counted: random data, continuous encoding, AWGN, sliding-window
//! decoding until every counted block is decided. The tail stands in for the
//! rest of an unterminated stream; without it the last `m` blocks lose part
//! of their inner-code protection. Chunk `c` draws its data and noise from
//! generators keyed by `(seed, c)`, so the result of a chunk does not depend
//! on which thread ran it. Chunks are evaluated in parallel batches and folded in chunk order
//! until the stop rule fires; the counters of a [`BerPoint`] are therefore
//! identical for any thread count.

use rand::Rng;
use rayon::prelude::*;

use crate::channel::{ChannelBlock, ChannelSpec};
use crate::encoder::{CouplingParams, ScSccCode, ScSccEncoder};
use crate::seed::{self, Role};
use crate::siso::SisoAlgorithm;
use crate::trellis::GeneratorSpec;
use crate::window::{DecoderMode, WindowDecoder};
use crate::{Bit, Error, Result};

/// Two-sided 95% normal quantile.
pub const Z_95: f64 = 1.959963984540054;

/// Total iterations spent on one block to match in the fixed-complexity
/// scenarios.
pub const TABLE1_EFFECTIVE_ITERATIONS: usize = 80;
pub const TABLE1_LATENCIES: [usize; 5] = [16384, 8192, 4096, 2048, 1024];
pub const TABLE1_WINDOWS: [usize; 6] = [4, 8, 16, 32, 64, 128];

/// `C = K·(m+1)`.
pub fn constraint_length(k: usize, m: usize) -> usize {
    k * (m + 1)
}

/// `L = W·K`, in bits.
pub fn structural_latency(k: usize, w: usize) -> usize {
    w * k
}

/// `I_eff = W·I_W`.
pub fn effective_iterations(w: usize, iterations: usize) -> usize {
    w * iterations
}

/// Decoding cost per information bit, `3·O_D·I_eff/K`, for a per-block
/// decoder cost `o_d`.
pub fn complexity_per_bit(k: usize, w: usize, iterations: usize, o_d: f64) -> f64 {
    3.0 * o_d * effective_iterations(w, iterations) as f64 / k as f64
}

/// Iterations per window for window `w2` giving at least the effective
/// iterations of `(w1, i1)`: `ceil(w1·i1/w2)`, never below 1.
pub fn matched_iterations(w1: usize, i1: usize, w2: usize) -> usize {
    (w1 * i1).div_ceil(w2).max(1)
}

/// The fixed-latency, fixed-complexity scenarios: for every latency `L` and
/// window `W`, `K = L/W`, `m = W/2 − 1`, `I_W = ceil(80/W)`. Tuples with
/// `m ≥ 2K` are left out.
pub fn table1() -> Vec<CouplingParams> {
    TABLE1_LATENCIES
        .iter()
        .flat_map(|&l| table1_row(l))
        .collect()
}

/// The scenarios of one latency.
pub fn table1_row(latency: usize) -> Vec<CouplingParams> {
    TABLE1_WINDOWS
        .iter()
        .filter_map(|&w| {
            let k = latency / w;
            let m = w / 2 - 1;
            let iterations = TABLE1_EFFECTIVE_ITERATIONS.div_ceil(w);
            CouplingParams::new(k, m, w, iterations).ok()
        })
        .collect()
}

pub fn table1_scenarios() -> Vec<Scenario> {
    table1()
        .into_iter()
        .map(|p| Scenario::coupled(p).with_name(format!("table1/L{}/W{}", p.latency(), p.w)))
        .collect()
}

/// When to stop accumulating chunks at one SNR.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StopRule {
    pub min_errors: u64,
    /// Bits to simulate even after `min_errors` is reached.
    pub min_bits: u64,
    pub max_bits: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        StopRule {
            min_errors: 200,
            min_bits: 0,
            max_bits: 10_000_000,
        }
    }
}

impl StopRule {
    pub fn validate(&self) -> Result<()> {
        if self.max_bits == 0 {
            return Err(Error::StopRule("max_bits must be positive".into()));
        }
        if self.min_bits > self.max_bits {
            return Err(Error::StopRule(format!(
                "min_bits ({}) exceeds max_bits ({})",
                self.min_bits, self.max_bits
            )));
        }
        Ok(())
    }

    pub fn done(&self, bit_errors: u64, bits: u64) -> bool {
        bits >= self.max_bits || (bit_errors >= self.min_errors && bits >= self.min_bits)
    }
}

/// One simulated code configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub params: CouplingParams,
    /// SCC baseline: `m = 0`, `W = 1`.
    pub uncoupled: bool,
    pub seed: u64,
    pub ebno_grid: Vec<f64>,
    pub stop: StopRule,
    pub mode: DecoderMode,
    pub algorithm: SisoAlgorithm,
    pub outer: GeneratorSpec,
    pub inner: GeneratorSpec,
    /// Counted blocks per simulated stream.
    pub chunk_blocks: usize,
    /// Uncounted blocks transmitted after the counted ones.
    pub tail_blocks: usize,
}

impl Scenario {
    pub fn coupled(params: CouplingParams) -> Self {
        Scenario {
            name: format!(
                "K{}-W{}-m{}-I{}",
                params.k, params.w, params.m, params.iterations
            ),
            params,
            uncoupled: false,
            seed: 1,
            ebno_grid: Vec::new(),
            stop: StopRule::default(),
            mode: DecoderMode::WholeWindow,
            algorithm: SisoAlgorithm::LogMap,
            outer: GeneratorSpec::RSC_5_7,
            inner: GeneratorSpec::RSC_5_7,
            chunk_blocks: 200,
            tail_blocks: params.w,
        }
    }

    /// SCC with block length `k` decoded with `iterations` iterations.
    pub fn uncoupled(k: usize, iterations: usize) -> Result<Self> {
        let params = CouplingParams::new(k, 0, 1, iterations)?;
        let mut s = Scenario::coupled(params);
        s.uncoupled = true;
        s.name = format!("SCC-K{k}-I{iterations}");
        Ok(s)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_grid(mut self, grid: Vec<f64>) -> Self {
        self.ebno_grid = grid;
        self
    }

    pub fn with_stop(mut self, stop: StopRule) -> Self {
        self.stop = stop;
        self
    }

    pub fn with_mode(mut self, mode: DecoderMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_algorithm(mut self, algorithm: SisoAlgorithm) -> Self {
        self.algorithm = algorithm;
        self
    }

    pub fn with_chunk_blocks(mut self, blocks: usize) -> Self {
        self.chunk_blocks = blocks;
        self
    }

    pub fn with_tail_blocks(mut self, blocks: usize) -> Self {
        self.tail_blocks = blocks;
        self
    }

    /// Blocks transmitted per chunk.
    pub fn stream_blocks(&self) -> usize {
        self.chunk_blocks + self.tail_blocks
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        self.outer.validate()?;
        self.inner.validate()?;
        self.stop.validate()?;
        if self.uncoupled && (self.params.m != 0 || self.params.w != 1) {
            return Err(Error::Params(format!(
                "uncoupled scenario requires m = 0 and W = 1 (m = {}, W = {})",
                self.params.m, self.params.w
            )));
        }
        if self.chunk_blocks == 0 {
            return Err(Error::Params("chunk_blocks >= 1 required".into()));
        }
        if self.stream_blocks() < self.params.w {
            return Err(Error::StreamTooShort {
                blocks: self.stream_blocks(),
                window: self.params.w,
            });
        }
        if let Some(x) = self.ebno_grid.iter().find(|x| !x.is_finite()) {
            return Err(Error::Params(format!("non-finite Eb/N0 grid value {x}")));
        }
        Ok(())
    }

    pub fn constraint_length(&self) -> usize {
        self.params.constraint_length()
    }

    pub fn latency(&self) -> usize {
        self.params.latency()
    }

    pub fn effective_iterations(&self) -> usize {
        self.params.effective_iterations()
    }

    pub fn code(&self) -> Result<ScSccCode> {
        ScSccCode::new(
            self.params.k,
            self.params.m,
            self.outer,
            self.inner,
            self.seed,
        )
    }
}

/// Counters of one simulated chunk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ChunkResult {
    pub info_bits: u64,
    pub bit_errors: u64,
    pub block_errors: u64,
    pub sections: u64,
    pub interior_bits: u64,
    pub interior_sections: u64,
}

impl ChunkResult {
    fn add(&mut self, o: &ChunkResult) {
        self.info_bits += o.info_bits;
        self.bit_errors += o.bit_errors;
        self.block_errors += o.block_errors;
        self.sections += o.sections;
        self.interior_bits += o.interior_bits;
        self.interior_sections += o.interior_sections;
    }
}

/// Simulates chunk `chunk` of `scenario` at `ebno_db`.
pub fn run_chunk(
    scenario: &Scenario,
    code: &ScSccCode,
    ebno_db: f64,
    chunk: u64,
) -> Result<ChunkResult> {
    run_chunk_with(scenario, code, &ChannelSpec::new(ebno_db), chunk)
}

fn run_chunk_with(
    scenario: &Scenario,
    code: &ScSccCode,
    channel: &ChannelSpec,
    chunk: u64,
) -> Result<ChunkResult> {
    let k = scenario.params.k;
    let counted = scenario.chunk_blocks;
    let t = scenario.stream_blocks();
    let mut data = seed::rng(scenario.seed, Role::Data, &[chunk]);
    let mut noise = seed::rng(scenario.seed, Role::Noise, &[chunk]);
    let mut enc = ScSccEncoder::new(code);
    let mut dec = WindowDecoder::new(code, scenario.params, scenario.mode, scenario.algorithm)?;
    let mut truth: Vec<Vec<Bit>> = Vec::with_capacity(t);
    let mut decided = Vec::with_capacity(t);
    for _ in 0..t {
        if decided.len() >= counted {
            break;
        }
        let u: Vec<Bit> = (0..k).map(|_| data.random_range(0..2)).collect();
        let c = enc.encode_block(&u)?;
        decided.extend(dec.push(&ChannelBlock::through_awgn(&c, channel, &mut noise))?);
        truth.push(u);
    }
    if decided.len() < counted {
        decided.extend(dec.finish()?);
    }
    let w = scenario.params.w;
    let mut r = ChunkResult {
        sections: dec.stats().sections as u64,
        ..Default::default()
    };
    for (b, u) in decided.iter().take(counted).zip(&truth) {
        let errors = b.bits.iter().zip(u).filter(|(a, b)| a != b).count() as u64;
        r.info_bits += k as u64;
        r.bit_errors += errors;
        r.block_errors += u64::from(errors > 0);
        if b.index + 1 >= w && b.index + w <= t {
            r.interior_bits += k as u64;
            r.interior_sections += b.sections as u64;
        }
    }
    Ok(r)
}

/// Measured BER at one Eb/N0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BerPoint {
    pub ebno_db: f64,
    pub info_bits: u64,
    pub bit_errors: u64,
    pub block_errors: u64,
    pub ber: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub chunks: u64,
    pub trellis_sections_computed: u64,
    /// Sections per information bit over blocks that spent a full `W`
    /// window positions in view.
    pub sections_per_interior_bit: Option<f64>,
}

impl BerPoint {
    pub fn from_counts(ebno_db: f64, totals: &ChunkResult, chunks: u64) -> Self {
        let (ci_low, ci_high) = wilson_interval(totals.bit_errors, totals.info_bits, Z_95);
        BerPoint {
            ebno_db,
            info_bits: totals.info_bits,
            bit_errors: totals.bit_errors,
            block_errors: totals.block_errors,
            ber: if totals.info_bits == 0 {
                0.0
            } else {
                totals.bit_errors as f64 / totals.info_bits as f64
            },
            ci_low,
            ci_high,
            chunks,
            trellis_sections_computed: totals.sections,
            sections_per_interior_bit: (totals.interior_bits > 0)
                .then(|| totals.interior_sections as f64 / totals.interior_bits as f64),
        }
    }

    /// True if the 95% intervals of `self` and `other` are disjoint.
    pub fn separated_from(&self, other: &BerPoint) -> bool {
        self.ci_high < other.ci_low || other.ci_high < self.ci_low
    }
}

/// Wilson score interval for `errors` successes in `n` trials.
pub fn wilson_interval(errors: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    if errors == 0 {
        let z2 = z * z;
        return (0.0, z2 / (n as f64 + z2));
    }
    let n = n as f64;
    let p = errors as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Simulates `scenario` at `ebno_db` until its stop rule fires.
pub fn run_ber_point(scenario: &Scenario, ebno_db: f64) -> Result<BerPoint> {
    scenario.validate()?;
    let code = scenario.code()?;
    run_ber_point_with(scenario, &code, &ChannelSpec::new(ebno_db))
}

/// As [`run_ber_point`] with an explicit channel.
pub fn run_ber_point_with(
    scenario: &Scenario,
    code: &ScSccCode,
    channel: &ChannelSpec,
) -> Result<BerPoint> {
    scenario.stop.validate()?;
    let batch = rayon::current_num_threads().max(1) as u64;
    let mut totals = ChunkResult::default();
    let mut chunks = 0u64;
    loop {
        let results: Vec<Result<ChunkResult>> = (chunks..chunks + batch)
            .into_par_iter()
            .map(|c| run_chunk_with(scenario, code, channel, c))
            .collect();
        for r in results {
            totals.add(&r?);
            chunks += 1;
            if scenario.stop.done(totals.bit_errors, totals.info_bits) {
                return Ok(BerPoint::from_counts(channel.ebno_db, &totals, chunks));
            }
        }
    }
}

/// Runs every point of the scenario grid, reporting each as it finishes.
pub fn run_sweep(
    scenario: &Scenario,
    mut on_point: impl FnMut(&BerPoint),
) -> Result<Vec<BerPoint>> {
    scenario.validate()?;
    if scenario.ebno_grid.is_empty() {
        return Err(Error::Params("empty Eb/N0 grid".into()));
    }
    let code = scenario.code()?;
    let mut out = Vec::with_capacity(scenario.ebno_grid.len());
    for &x in &scenario.ebno_grid {
        let p = run_ber_point_with(scenario, &code, &ChannelSpec::new(x))?;
        on_point(&p);
        out.push(p);
    }
    Ok(out)
}

/// Eb/N0 search range for [`required_snr`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrSearch {
    pub start_db: f64,
    pub step_db: f64,
    pub max_db: f64,
    /// Bisection stops once the bracket is this narrow.
    pub resolution_db: f64,
}

impl Default for SnrSearch {
    fn default() -> Self {
        SnrSearch {
            start_db: 0.0,
            step_db: 0.5,
            max_db: 6.0,
            resolution_db: 0.1,
        }
    }
}

/// Required Eb/N0 at a target BER, with the range where the 95% BER
/// interval band crosses the target.
#[derive(Debug, Clone, PartialEq)]
pub struct RequiredSnr {
    pub target_ber: f64,
    pub ebno_db: f64,
    pub low_db: f64,
    pub high_db: f64,
    pub points: Vec<BerPoint>,
}

impl RequiredSnr {
    pub fn separated_from(&self, other: &RequiredSnr) -> bool {
        self.high_db < other.low_db || other.high_db < self.low_db
    }
}

/// First crossing of `target` by a decreasing curve, interpolated linearly
/// in `log10` of the curve value. Points must be sorted by abscissa and
/// have positive values.
pub fn log_crossing(points: &[(f64, f64)], target: f64) -> Option<f64> {
    let i = points.iter().position(|&(_, y)| y <= target)?;
    if i == 0 {
        return None;
    }
    let (x0, y0) = points[i - 1];
    let (x1, y1) = points[i];
    let (l0, l1, lt) = (y0.log10(), y1.log10(), target.log10());
    if l0 == l1 {
        return Some(x1);
    }
    Some(x0 + (l0 - lt) / (l0 - l1) * (x1 - x0))
}

/// Point estimate used for interpolation; zero-error points count half an
/// error.
fn ber_estimate(p: &BerPoint) -> f64 {
    if p.bit_errors == 0 {
        0.5 / p.info_bits.max(1) as f64
    } else {
        p.ber
    }
}

/// Finds the Eb/N0 where `eval`'s BER curve crosses `target_ber`: steps up
/// from `search.start_db` until the BER is at most the target, then bisects
/// the bracket down to `search.resolution_db` (and further while the upper
/// point has no errors, down to a quarter of the resolution).
pub fn required_snr_with(
    mut eval: impl FnMut(f64) -> Result<BerPoint>,
    target_ber: f64,
    search: &SnrSearch,
) -> Result<RequiredSnr> {
    let not_bracketed = || Error::NotBracketed {
        target: target_ber,
        lo: search.start_db,
        hi: search.max_db,
    };
    if !(search.step_db > 0.0 && search.resolution_db > 0.0) {
        return Err(Error::Params(
            "SNR step and resolution must be positive".into(),
        ));
    }
    let mut points: Vec<BerPoint> = Vec::new();
    let first = eval(search.start_db)?;
    points.push(first);
    if first.ber <= target_ber {
        return Err(not_bracketed());
    }
    let (mut lo, mut hi) = (first, None);
    let mut x = search.start_db;
    while hi.is_none() {
        x += search.step_db;
        if x > search.max_db + 1e-9 {
            return Err(not_bracketed());
        }
        let p = eval(x)?;
        points.push(p);
        if p.ber <= target_ber {
            hi = Some(p);
        } else {
            lo = p;
        }
    }
    let mut hi = hi.expect("bracketed");
    while hi.ebno_db - lo.ebno_db > search.resolution_db
        || (hi.bit_errors == 0 && hi.ebno_db - lo.ebno_db > search.resolution_db / 4.0)
    {
        let p = eval(0.5 * (lo.ebno_db + hi.ebno_db))?;
        points.push(p);
        if p.ber <= target_ber {
            hi = p;
        } else {
            lo = p;
        }
    }
    points.sort_by(|a, b| a.ebno_db.total_cmp(&b.ebno_db));
    let curve = |f: &dyn Fn(&BerPoint) -> f64| -> Vec<(f64, f64)> {
        points
            .iter()
            .map(|p| (p.ebno_db, f(p).max(f64::MIN_POSITIVE)))
            .collect()
    };
    let ebno_db = log_crossing(
        &[
            (lo.ebno_db, ber_estimate(&lo)),
            (hi.ebno_db, ber_estimate(&hi)),
        ],
        target_ber,
    )
    .ok_or_else(not_bracketed)?;
    let first_x = points[0].ebno_db;
    let last_x = points[points.len() - 1].ebno_db;
    let low_db = log_crossing(&curve(&|p| p.ci_low), target_ber).unwrap_or(first_x);
    let high_db = log_crossing(&curve(&|p| p.ci_high), target_ber).unwrap_or(last_x);
    Ok(RequiredSnr {
        target_ber,
        ebno_db,
        low_db: low_db.min(ebno_db),
        high_db: high_db.max(ebno_db),
        points,
    })
}

/// Simulation-backed [`required_snr_with`].
pub fn required_snr(
    scenario: &Scenario,
    target_ber: f64,
    search: &SnrSearch,
) -> Result<RequiredSnr> {
    scenario.validate()?;
    let code = scenario.code()?;
    required_snr_with(
        |x| run_ber_point_with(scenario, &code, &ChannelSpec::new(x)),
        target_ber,
        search,
    )
}

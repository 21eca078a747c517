//! Shared oracles and property checks for the integration tests.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use scscc::encoder::{depuncture_llr, mux, scc_encode_block, SccStates};
use scscc::experiment::run_chunk;
use scscc::siso::{bcjr, SisoInput, SisoOutput};
use scscc::window::decode_stream;
use scscc::{
    Bit, ChannelBlock, ChannelSpec, CodedBlock, CouplingParams, DecoderMode, EncoderState,
    GeneratorSpec, Permutation, ScSccCode, ScSccEncoder, Scenario, SisoAlgorithm,
    StateDistribution, Trellis,
};

pub type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_bits(k: usize, rng: &mut impl Rng) -> Vec<Bit> {
    (0..k).map(|_| rng.random_range(0..2)).collect()
}

pub fn code(k: usize, m: usize, seed: u64) -> ScSccCode {
    ScSccCode::new(k, m, GeneratorSpec::RSC_5_7, GeneratorSpec::RSC_5_7, seed).unwrap()
}

/// `t` random blocks encoded with `code` and sent over AWGN.
pub fn noisy_stream(
    code: &ScSccCode,
    t: usize,
    ebno_db: f64,
    seed: u64,
) -> (Vec<Vec<Bit>>, Vec<ChannelBlock>) {
    let mut data = rng(seed);
    let mut noise = rng(seed ^ 0xA5A5);
    let spec = ChannelSpec::new(ebno_db);
    let mut enc = ScSccEncoder::new(code);
    let mut us = Vec::with_capacity(t);
    let mut rx = Vec::with_capacity(t);
    for _ in 0..t {
        let u = random_bits(code.k(), &mut data);
        let c = enc.encode_block(&u).unwrap();
        rx.push(ChannelBlock::through_awgn(&c, &spec, &mut noise));
        us.push(u);
    }
    (us, rx)
}

fn log_sum_exp(v: &[f64]) -> f64 {
    let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + v.iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}

/// Exhaustive MAP decoding of one trellis segment.
pub struct MapOracle {
    pub posterior: Vec<f64>,
    pub extrinsic: Vec<f64>,
    pub parity_posterior: Vec<f64>,
    pub parity_extrinsic: Vec<f64>,
}

/// Enumerates every start state and every input word.
pub fn brute_force_map(trellis: &Trellis, input: &SisoInput<'_>) -> MapOracle {
    let n = input.systematic.len();
    assert!(n <= 16, "exhaustive search limited to short segments");
    let s = trellis.num_states();
    let mut by_bit = vec![[Vec::new(), Vec::new()]; n];
    let mut by_parity = vec![[Vec::new(), Vec::new()]; n];
    for start in 0..s {
        let a = input.alpha_start.as_slice()[start];
        if a == f64::NEG_INFINITY {
            continue;
        }
        for word in 0..1u32 << n {
            let u: Vec<Bit> = (0..n).map(|i| ((word >> i) & 1) as Bit).collect();
            let (p, end) = trellis.encode(&u, EncoderState(start));
            let mut metric = a + input.beta_end.as_slice()[end.0];
            for i in 0..n {
                if u[i] == 1 {
                    metric -= input.systematic[i] + input.prior[i];
                }
                if p[i] == 1 {
                    metric -= input.parity[i];
                }
            }
            for i in 0..n {
                by_bit[i][u[i] as usize].push(metric);
                by_parity[i][p[i] as usize].push(metric);
            }
        }
    }
    let ratio = |v: &[Vec<f64>; 2]| log_sum_exp(&v[0]) - log_sum_exp(&v[1]);
    let posterior: Vec<f64> = by_bit.iter().map(ratio).collect();
    let parity_posterior: Vec<f64> = by_parity.iter().map(ratio).collect();
    let extrinsic = (0..n)
        .map(|i| posterior[i] - input.systematic[i] - input.prior[i])
        .collect();
    let parity_extrinsic = (0..n)
        .map(|i| parity_posterior[i] - input.parity[i])
        .collect();
    MapOracle {
        posterior,
        extrinsic,
        parity_posterior,
        parity_extrinsic,
    }
}

pub struct SisoCase {
    pub systematic: Vec<f64>,
    pub prior: Vec<f64>,
    pub parity: Vec<f64>,
    pub alpha_start: StateDistribution,
    pub beta_end: StateDistribution,
}

impl SisoCase {
    pub fn input(&self) -> SisoInput<'_> {
        SisoInput {
            systematic: &self.systematic,
            prior: &self.prior,
            parity: &self.parity,
            alpha_start: &self.alpha_start,
            beta_end: &self.beta_end,
        }
    }
}

fn random_distribution(states: usize, rng: &mut impl Rng) -> StateDistribution {
    match rng.random_range(0..3) {
        0 => StateDistribution::uniform(states),
        1 => StateDistribution::known(states, rng.random_range(0..states)),
        _ => {
            StateDistribution::from_log((0..states).map(|_| rng.random_range(-6.0..0.0)).collect())
        }
    }
}

/// Random segment of length `1..=max_len` with LLRs in `±scale`.
pub fn random_siso_case(states: usize, max_len: usize, scale: f64, rng: &mut impl Rng) -> SisoCase {
    let n = rng.random_range(1..=max_len);
    let mut v = || {
        (0..n)
            .map(|_| rng.random_range(-scale..scale))
            .collect::<Vec<f64>>()
    };
    let (systematic, prior, parity) = (v(), v(), v());
    SisoCase {
        systematic,
        prior,
        parity,
        alpha_start: random_distribution(states, rng),
        beta_end: random_distribution(states, rng),
    }
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// As [`max_abs_diff`] against an oracle that may be infinite for bits the
/// boundary states determine; a decoder output saturated beyond `±300` with
/// the right sign counts as exact there.
fn oracle_diff(got: &[f64], oracle: &[f64]) -> f64 {
    assert_eq!(got.len(), oracle.len());
    got.iter()
        .zip(oracle)
        .map(|(&x, &o)| {
            if o.is_infinite() {
                if x.signum() == o.signum() && x.abs() >= 300.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            } else {
                (x - o).abs()
            }
        })
        .fold(0.0, f64::max)
}

/// Largest deviation of the BCJR outputs from the exhaustive oracle.
pub fn oracle_error(trellis: &Trellis, case: &SisoCase) -> f64 {
    let input = case.input();
    let out: SisoOutput = bcjr(trellis, &input).unwrap();
    let o = brute_force_map(trellis, &input);
    [
        oracle_diff(&out.posterior, &o.posterior),
        oracle_diff(&out.extrinsic, &o.extrinsic),
        oracle_diff(&out.parity_posterior, &o.parity_posterior),
        oracle_diff(&out.parity_extrinsic, &o.parity_extrinsic),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}

/// Textbook iterative SCC decoder with continuous block-to-block state
/// threading, written against the component BCJR only.
pub struct ReferenceScc<'a> {
    outer: &'a Trellis,
    inner: &'a Trellis,
    perm: Permutation,
    iterations: usize,
    outer_alpha: StateDistribution,
    inner_alpha: StateDistribution,
}

impl<'a> ReferenceScc<'a> {
    pub fn new(code: &'a ScSccCode, iterations: usize) -> Self {
        assert_eq!(code.m(), 0);
        ReferenceScc {
            outer: code.outer(),
            inner: code.inner(),
            perm: code.interleaver1().then(code.interleaver2()).unwrap(),
            iterations,
            outer_alpha: StateDistribution::known(code.outer().num_states(), 0),
            inner_alpha: StateDistribution::known(code.inner().num_states(), 0),
        }
    }

    /// Posterior LLRs of the information bits of the next block.
    pub fn decode_block(&mut self, rx: &ChannelBlock) -> Vec<f64> {
        let k = rx.u.len();
        let ch = self.perm.permute(&mux(&rx.u, &rx.p_outer)).unwrap();
        let parity = depuncture_llr(&rx.p_inner);
        let inner_uniform = StateDistribution::uniform(self.inner.num_states());
        let outer_uniform = StateDistribution::uniform(self.outer.num_states());
        let mut outer_ext = vec![0.0; 2 * k];
        let mut posterior = vec![0.0; k];
        let (mut inner_end, mut outer_end) = (self.inner_alpha.clone(), self.outer_alpha.clone());
        for _ in 0..self.iterations {
            let prior = self.perm.permute(&outer_ext).unwrap();
            let inner = bcjr(
                self.inner,
                &SisoInput {
                    systematic: &ch,
                    prior: &prior,
                    parity: &parity,
                    alpha_start: &self.inner_alpha,
                    beta_end: &inner_uniform,
                },
            )
            .unwrap();
            inner_end = inner.alpha_end.clone();
            let inner_ext = self.perm.depermute(&inner.extrinsic).unwrap();
            let u_prior: Vec<f64> = (0..k).map(|i| inner_ext[2 * i]).collect();
            let p_obs: Vec<f64> = (0..k)
                .map(|i| rx.p_outer[i] + inner_ext[2 * i + 1])
                .collect();
            let outer = bcjr(
                self.outer,
                &SisoInput {
                    systematic: &rx.u,
                    prior: &u_prior,
                    parity: &p_obs,
                    alpha_start: &self.outer_alpha,
                    beta_end: &outer_uniform,
                },
            )
            .unwrap();
            outer_end = outer.alpha_end.clone();
            for i in 0..k {
                outer_ext[2 * i] = outer.extrinsic[i];
                outer_ext[2 * i + 1] = outer.parity_extrinsic[i];
            }
            posterior = outer.posterior;
        }
        self.inner_alpha = inner_end;
        self.outer_alpha = outer_end;
        posterior
    }
}

// Property checks. Each takes its random inputs as arguments so it can be
// driven both by proptest and by fixed seed lists.

pub fn check_permutation_bijective(len: usize, seed: u64) -> Check {
    let p = Permutation::random(len, seed).map_err(|e| e.to_string())?;
    let mut seen = vec![false; len];
    for &f in p.forward() {
        ensure!(f < len && !seen[f], "forward map is not injective");
        seen[f] = true;
    }
    for i in 0..len {
        ensure!(p.inverse()[p.forward()[i]] == i, "inverse mismatch at {i}");
    }
    let x: Vec<u64> = (0..len as u64)
        .map(|i| i.wrapping_mul(0x9E37_79B9))
        .collect();
    let y = p.permute(&x).map_err(|e| e.to_string())?;
    ensure!(
        p.depermute(&y).map_err(|e| e.to_string())? == x,
        "round trip failed"
    );
    ensure!(
        Permutation::random(len, seed).unwrap() == p,
        "same seed gave a different permutation"
    );
    Ok(())
}

/// Continuous encoding: each block's outer parity is the outer code run from
/// the previous block's end state, a prefix of the stream encodes exactly as
/// the whole stream does, and the rate is exactly 1/3.
pub fn check_encoder_chaining(k: usize, m: usize, t: usize, seed: u64) -> Check {
    let c = code(k, m, seed);
    let mut r = rng(seed);
    let blocks: Vec<Vec<Bit>> = (0..t).map(|_| random_bits(k, &mut r)).collect();
    let full = ScSccEncoder::new(&c)
        .encode_stream(&blocks)
        .map_err(|e| e.to_string())?;
    let mut state = EncoderState(0);
    for (i, (u, cb)) in blocks.iter().zip(&full).enumerate() {
        let (p, end) = c.outer().encode(u, state);
        ensure!(
            p == cb.p_outer,
            "block {i}: outer parity does not continue from the previous state"
        );
        ensure!(
            cb.len() == 3 * k,
            "block {i}: {} bits for K = {k}",
            cb.len()
        );
        state = end;
    }
    for cut in 1..t {
        let prefix = ScSccEncoder::new(&c).encode_stream(&blocks[..cut]).unwrap();
        ensure!(prefix[..] == full[..cut], "prefix of length {cut} differs");
    }
    Ok(())
}

/// With `m = 0` the coupled encoder is the uncoupled SCC with interleaver
/// `π2∘π1`, states carried across blocks.
pub fn check_m0_is_scc(k: usize, t: usize, seed: u64) -> Check {
    let c = code(k, 0, seed);
    let perm = c.interleaver1().then(c.interleaver2()).unwrap();
    let mut r = rng(seed);
    let mut enc = ScSccEncoder::new(&c);
    let mut states = SccStates::default();
    for i in 0..t {
        let u = random_bits(k, &mut r);
        let coupled: CodedBlock = enc.encode_block(&u).unwrap();
        let (reference, next) = scc_encode_block(&u, &perm, c.outer(), c.inner(), states).unwrap();
        ensure!(
            coupled == reference,
            "block {i} differs from the SCC encoder"
        );
        states = next;
    }
    Ok(())
}

/// Decisions on blocks `0..=t` depend on no block beyond `t + W - 1`.
pub fn check_decision_causality(
    k: usize,
    m: usize,
    w: usize,
    target: usize,
    seed: u64,
    mode: DecoderMode,
) -> Check {
    let c = code(k, m, seed);
    let params = CouplingParams::new(k, m, w, 2).map_err(|e| e.to_string())?;
    let t = target + w + 3;
    let (_, rx) = noisy_stream(&c, t, 1.0, seed);
    let base = decode_stream(&c, params, mode, SisoAlgorithm::LogMap, &rx).unwrap();
    let mut r = rng(seed ^ 0xF00D);
    let mut perturbed = rx.clone();
    for b in &mut perturbed[target + w..] {
        for l in b.u.iter_mut().chain(&mut b.p_outer).chain(&mut b.p_inner) {
            *l = r.random_range(-20.0..20.0);
        }
    }
    let out = decode_stream(&c, params, mode, SisoAlgorithm::LogMap, &perturbed).unwrap();
    for i in 0..=target {
        ensure!(
            out.blocks[i].posterior == base.blocks[i].posterior,
            "block {i} changed when blocks from {} on were replaced",
            target + w
        );
    }
    Ok(())
}

/// Identical seeds give identical chunks and points, on any thread count.
pub fn check_seed_determinism(seed: u64) -> Check {
    let params = CouplingParams::new(16, 1, 3, 2).unwrap();
    let s = Scenario::coupled(params)
        .with_seed(seed)
        .with_chunk_blocks(6)
        .with_stop(scscc::StopRule {
            min_errors: u64::MAX,
            min_bits: 0,
            max_bits: 16 * 6 * 5,
        });
    let c = s.code().unwrap();
    let a = run_chunk(&s, &c, 1.0, 3).unwrap();
    ensure!(
        a == run_chunk(&s, &c, 1.0, 3).unwrap(),
        "chunk not reproducible"
    );
    let other = s.clone().with_seed(seed ^ 1).code().unwrap();
    ensure!(
        other.interleaver1() != c.interleaver1(),
        "seed has no effect on the interleavers"
    );
    let point = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| scscc::experiment::run_ber_point(&s, 0.5).unwrap())
    };
    let one = point(1);
    ensure!(one == point(3), "result depends on the thread count");
    ensure!(one == point(1), "point not reproducible");
    Ok(())
}

//! Soft-in/soft-out BCJR decoding of one RSC trellis segment.
//!
//! The segment has arbitrary length and explicit boundary state
//! distributions, so a long trellis can be decoded in one pass or as a chain
//! of shorter segments whose boundaries are threaded from one call to the
//! next.
//!
//! Inputs per trellis section `k`:
//!
//! - `systematic[k]`: channel LLR of the input bit,
//! - `prior[k]`: a-priori LLR of the input bit,
//! - `parity[k]`: everything known about the parity bit (channel plus
//!   a-priori; 0 where punctured).
//!
//! Outputs are the extrinsic and a-posteriori LLRs of the input bits and,
//! optionally, of the parity bits, with
//! `posterior = systematic + prior + extrinsic` holding per position.
//!
//! Exact log-MAP is evaluated in the probability domain with per-section
//! rescaling for trellises of up to 64 states; if anything underflows
//! (strongly contradicting inputs) the call is redone in the log domain.
//! Larger trellises and max-log-MAP always run in the log domain.

use crate::trellis::Trellis;
use crate::{Error, Result};

/// Input LLRs are clamped to this magnitude before exponentiation.
pub const LLR_CLAMP: f64 = 300.0;

/// Extrinsic outputs saturate at this magnitude; the probability-domain
/// recursion cannot resolve a hypothesis more than about `e^-740` below its
/// competitor.
pub const EXTRINSIC_LIMIT: f64 = 700.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SisoAlgorithm {
    /// Exact log-MAP (log-sum-exp).
    #[default]
    LogMap,
    /// Max-log-MAP approximation.
    MaxLog,
}

/// Log-probabilities over trellis states, shifted so the largest entry is 0.
#[derive(Debug, Clone, PartialEq)]
pub struct StateDistribution(Vec<f64>);

impl StateDistribution {
    /// Nothing known about the state.
    pub fn uniform(num_states: usize) -> Self {
        StateDistribution(vec![0.0; num_states])
    }

    /// The state is known to be `state`.
    pub fn known(num_states: usize, state: usize) -> Self {
        let mut v = vec![f64::NEG_INFINITY; num_states];
        v[state] = 0.0;
        StateDistribution(v)
    }

    /// Normalizes arbitrary log-weights. An all `-∞` input becomes uniform.
    pub fn from_log(mut v: Vec<f64>) -> Self {
        let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if max == f64::NEG_INFINITY || !max.is_finite() {
            v.iter_mut().for_each(|x| *x = 0.0);
        } else {
            v.iter_mut().for_each(|x| *x -= max);
        }
        StateDistribution(v)
    }

    fn from_linear(p: &[f64]) -> Self {
        Self::from_log(p.iter().map(|&x| x.ln()).collect())
    }

    pub fn num_states(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Most likely state.
    pub fn argmax(&self) -> usize {
        self.0
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, &v)| {
                if v > best.1 {
                    (i, v)
                } else {
                    best
                }
            })
            .0
    }
}

/// One segment to decode.
#[derive(Debug, Clone, Copy)]
pub struct SisoInput<'a> {
    pub systematic: &'a [f64],
    pub prior: &'a [f64],
    pub parity: &'a [f64],
    /// State distribution before the first section.
    pub alpha_start: &'a StateDistribution,
    /// State distribution after the last section.
    pub beta_end: &'a StateDistribution,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SisoOutput {
    pub extrinsic: Vec<f64>,
    pub posterior: Vec<f64>,
    /// Empty unless parity outputs were requested.
    pub parity_extrinsic: Vec<f64>,
    pub parity_posterior: Vec<f64>,
    /// Forward state distribution after the last section.
    pub alpha_end: StateDistribution,
    /// Backward state distribution before the first section.
    pub beta_start: StateDistribution,
    /// Forward metrics for sections `0..=N`, row-major, linear or log scale.
    alphas: Vec<f64>,
    alphas_are_log: bool,
    num_states: usize,
}

impl SisoOutput {
    pub fn len(&self) -> usize {
        self.extrinsic.len()
    }

    pub fn is_empty(&self) -> bool {
        self.extrinsic.is_empty()
    }

    /// Forward state distribution before section `k` (`k = N` gives
    /// `alpha_end`).
    pub fn alpha_at(&self, k: usize) -> StateDistribution {
        let row = &self.alphas[k * self.num_states..(k + 1) * self.num_states];
        if self.alphas_are_log {
            StateDistribution::from_log(row.to_vec())
        } else {
            StateDistribution::from_linear(row)
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Edge {
    from: usize,
    to: usize,
    input: usize,
    parity: usize,
    /// `2·input + parity`
    symbol: usize,
}

/// BCJR decoder for one trellis.
#[derive(Debug, Clone)]
pub struct Bcjr {
    num_states: usize,
    edges: Vec<Edge>,
    algorithm: SisoAlgorithm,
    parity_outputs: bool,
}

impl Bcjr {
    pub fn new(trellis: &Trellis) -> Self {
        let num_states = trellis.num_states();
        let edges = (0..num_states)
            .flat_map(|s| (0..2u8).map(move |u| (s, u)))
            .map(|(s, u)| Edge {
                from: s,
                to: trellis.next_state(s, u),
                input: u as usize,
                parity: trellis.parity(s, u) as usize,
                symbol: 2 * u as usize + trellis.parity(s, u) as usize,
            })
            .collect();
        Bcjr {
            num_states,
            edges,
            algorithm: SisoAlgorithm::LogMap,
            parity_outputs: true,
        }
    }

    pub fn with_algorithm(mut self, algorithm: SisoAlgorithm) -> Self {
        self.algorithm = algorithm;
        self
    }

    /// Whether to compute parity-bit extrinsics (needed by an outer
    /// decoder, not by an inner one).
    pub fn with_parity_outputs(mut self, enabled: bool) -> Self {
        self.parity_outputs = enabled;
        self
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn decode(&self, input: &SisoInput<'_>) -> Result<SisoOutput> {
        self.check(input)?;
        let out = match self.algorithm {
            SisoAlgorithm::LogMap => match self.decode_linear(input) {
                Some(out) => out,
                None => self.decode_log(input),
            },
            SisoAlgorithm::MaxLog => self.decode_log(input),
        };
        Ok(out)
    }

    fn check(&self, input: &SisoInput<'_>) -> Result<()> {
        let n = input.systematic.len();
        for len in [input.prior.len(), input.parity.len()] {
            if len != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    actual: len,
                });
            }
        }
        for d in [input.alpha_start, input.beta_end] {
            if d.num_states() != self.num_states {
                return Err(Error::LengthMismatch {
                    expected: self.num_states,
                    actual: d.num_states(),
                });
            }
            if d.0.iter().any(|v| v.is_nan()) {
                return Err(Error::NanInput);
            }
        }
        let nan = [input.systematic, input.prior, input.parity]
            .iter()
            .any(|s| s.iter().any(|v| v.is_nan()));
        if nan {
            return Err(Error::NanInput);
        }
        Ok(())
    }

    /// Clamped input-bit and parity-bit LLRs of section `k`.
    #[inline]
    fn section_llrs(input: &SisoInput<'_>, k: usize) -> (f64, f64) {
        let l_in = (input.systematic[k] + input.prior[k]).clamp(-LLR_CLAMP, LLR_CLAMP);
        let l_par = input.parity[k].clamp(-LLR_CLAMP, LLR_CLAMP);
        (l_in, l_par)
    }

    /// Branch weights `[w(bit=0), w(bit=1)]` scaled so the larger one is 1.
    #[inline]
    fn weights(llr: f64) -> [f64; 2] {
        let small = (-llr.abs()).exp();
        if llr >= 0.0 {
            [1.0, small]
        } else {
            [small, 1.0]
        }
    }

    fn decode_linear(&self, input: &SisoInput<'_>) -> Option<SisoOutput> {
        match self.num_states {
            2 => self.decode_linear_n::<2>(input),
            4 => self.decode_linear_n::<4>(input),
            8 => self.decode_linear_n::<8>(input),
            16 => self.decode_linear_n::<16>(input),
            32 => self.decode_linear_n::<32>(input),
            64 => self.decode_linear_n::<64>(input),
            _ => None,
        }
    }

    fn decode_linear_n<const S: usize>(&self, input: &SisoInput<'_>) -> Option<SisoOutput> {
        let n = input.systematic.len();
        let weights: Vec<([f64; 2], [f64; 2])> = (0..n)
            .map(|k| {
                let (l_in, l_par) = Self::section_llrs(input, k);
                (Self::weights(l_in), Self::weights(l_par))
            })
            .collect();
        let gamma = |(gi, gp): ([f64; 2], [f64; 2])| {
            [gi[0] * gp[0], gi[0] * gp[1], gi[1] * gp[0], gi[1] * gp[1]]
        };
        let normalize = |v: &mut [f64; S]| -> Option<()> {
            let max = v.iter().copied().fold(0.0, f64::max);
            if !(max >= f64::MIN_POSITIVE && max.is_finite()) {
                return None;
            }
            let inv = 1.0 / max;
            v.iter_mut().for_each(|x| *x *= inv);
            Some(())
        };

        // incoming (from, symbol) pairs per state, outgoing per state
        let mut incoming = [[(0usize, 0usize); 2]; S];
        let mut outgoing = [[(0usize, 0usize); 2]; S];
        let (mut n_in, mut n_out) = ([0usize; S], [0usize; S]);
        for e in &self.edges {
            incoming[e.to][n_in[e.to]] = (e.from, e.symbol);
            n_in[e.to] += 1;
            outgoing[e.from][n_out[e.from]] = (e.to, e.symbol);
            n_out[e.from] += 1;
        }

        let mut alphas = vec![[0.0; S]; n + 1];
        for (a, &l) in alphas[0].iter_mut().zip(&input.alpha_start.0) {
            *a = l.exp();
        }
        for k in 0..n {
            let cur = alphas[k];
            let g = gamma(weights[k]);
            let mut next = [0.0; S];
            for (x, [(f0, s0), (f1, s1)]) in next.iter_mut().zip(&incoming) {
                *x = cur[*f0] * g[*s0] + cur[*f1] * g[*s1];
            }
            normalize(&mut next)?;
            alphas[k + 1] = next;
        }

        let mut extrinsic = vec![0.0; n];
        let mut parity_extrinsic = if self.parity_outputs {
            vec![0.0; n]
        } else {
            Vec::new()
        };
        let mut beta = [0.0; S];
        for (b, &l) in beta.iter_mut().zip(&input.beta_end.0) {
            *b = l.exp();
        }
        for k in (0..n).rev() {
            let alpha = &alphas[k];
            let (gi, gp) = weights[k];
            let g = gamma(weights[k]);
            let mut by_symbol = [0.0; 4];
            let mut prev = [0.0; S];
            for ((p, &a), [(t0, s0), (t1, s1)]) in prev.iter_mut().zip(alpha).zip(&outgoing) {
                let (b0, b1) = (beta[*t0], beta[*t1]);
                by_symbol[*s0] += a * b0;
                by_symbol[*s1] += a * b1;
                *p = g[*s0] * b0 + g[*s1] * b1;
            }
            let by_input = [
                by_symbol[0] * gp[0] + by_symbol[1] * gp[1],
                by_symbol[2] * gp[0] + by_symbol[3] * gp[1],
            ];
            let by_parity = [
                by_symbol[0] * gi[0] + by_symbol[2] * gi[1],
                by_symbol[1] * gi[0] + by_symbol[3] * gi[1],
            ];
            let fast_in = linear_ratio(by_input);
            let fast_par = if self.parity_outputs {
                linear_ratio(by_parity)
            } else {
                Some(0.0)
            };
            if let (Some(e), Some(p)) = (fast_in, fast_par) {
                extrinsic[k] = e;
                if self.parity_outputs {
                    parity_extrinsic[k] = p;
                }
            } else {
                let (l_in, l_par) = Self::section_llrs(input, k);
                let (e, p) = self.section_log(alpha, &beta, l_in, l_par)?;
                extrinsic[k] = e;
                if self.parity_outputs {
                    parity_extrinsic[k] = p;
                }
            }
            normalize(&mut prev)?;
            beta = prev;
        }
        if extrinsic
            .iter()
            .chain(&parity_extrinsic)
            .any(|v| !v.is_finite())
        {
            return None;
        }
        let alpha_end = StateDistribution::from_linear(&alphas[n]);
        Some(self.finish(
            input,
            extrinsic,
            parity_extrinsic,
            alpha_end,
            StateDistribution::from_linear(&beta),
            alphas.into_flattened(),
            false,
        ))
    }

    /// Input and parity extrinsics of one section from linear-scale
    /// boundary metrics, combined in the log domain. A hypothesis whose
    /// metrics all underflowed saturates the extrinsic when the competing
    /// one is not itself negligible; otherwise `None`.
    fn section_log(
        &self,
        alpha: &[f64],
        beta: &[f64],
        l_in: f64,
        l_par: f64,
    ) -> Option<(f64, f64)> {
        // weights [1, e^-|L|] in log form
        let metric = |l: f64, bit: usize| {
            if (bit == 0) == (l >= 0.0) {
                0.0
            } else {
                -l.abs()
            }
        };
        let log_alpha: Vec<f64> = alpha.iter().map(|a| a.ln()).collect();
        let log_beta: Vec<f64> = beta.iter().map(|b| b.ln()).collect();
        let mut by_input = [f64::NEG_INFINITY; 2];
        let mut by_parity = [f64::NEG_INFINITY; 2];
        for e in &self.edges {
            let ab = log_alpha[e.from] + log_beta[e.to];
            by_input[e.input] = max_star(by_input[e.input], ab + metric(l_par, e.parity));
            by_parity[e.parity] = max_star(by_parity[e.parity], ab + metric(l_in, e.input));
        }
        // lost mass is below 8·2^-1074, about e^-742
        let ratio = |v: [f64; 2]| match (v[0].is_finite(), v[1].is_finite()) {
            (true, true) => Some(saturate(v[0] - v[1])),
            (true, false) if v[0] >= -30.0 => Some(EXTRINSIC_LIMIT),
            (false, true) if v[1] >= -30.0 => Some(-EXTRINSIC_LIMIT),
            _ => None,
        };
        Some((ratio(by_input)?, ratio(by_parity)?))
    }

    fn decode_log(&self, input: &SisoInput<'_>) -> SisoOutput {
        let n = input.systematic.len();
        let s_count = self.num_states;
        let combine: fn(f64, f64) -> f64 = match self.algorithm {
            SisoAlgorithm::LogMap => max_star,
            SisoAlgorithm::MaxLog => f64::max,
        };
        // log branch metric: ±L/2 per bit
        let metric = |l: f64, bit: usize| if bit == 0 { 0.5 * l } else { -0.5 * l };

        let mut alphas = vec![f64::NEG_INFINITY; (n + 1) * s_count];
        alphas[..s_count].copy_from_slice(&input.alpha_start.0);
        for k in 0..n {
            let (l_in, l_par) = Self::section_llrs(input, k);
            let (cur, next) = alphas[k * s_count..(k + 2) * s_count].split_at_mut(s_count);
            for e in &self.edges {
                let v = cur[e.from] + metric(l_in, e.input) + metric(l_par, e.parity);
                next[e.to] = combine(next[e.to], v);
            }
            normalize_log(next);
        }

        let mut extrinsic = vec![0.0; n];
        let mut parity_extrinsic = if self.parity_outputs {
            vec![0.0; n]
        } else {
            Vec::new()
        };
        let mut beta = input.beta_end.0.clone();
        let mut beta_prev = vec![f64::NEG_INFINITY; s_count];
        for k in (0..n).rev() {
            let (l_in, l_par) = Self::section_llrs(input, k);
            let alpha = &alphas[k * s_count..(k + 1) * s_count];
            let mut by_input = [f64::NEG_INFINITY; 2];
            let mut by_parity = [f64::NEG_INFINITY; 2];
            beta_prev.iter_mut().for_each(|b| *b = f64::NEG_INFINITY);
            for e in &self.edges {
                let ab = alpha[e.from] + beta[e.to];
                let mi = metric(l_in, e.input);
                let mp = metric(l_par, e.parity);
                by_input[e.input] = combine(by_input[e.input], ab + mp);
                by_parity[e.parity] = combine(by_parity[e.parity], ab + mi);
                beta_prev[e.from] = combine(beta_prev[e.from], beta[e.to] + mi + mp);
            }
            extrinsic[k] = saturate(log_ratio(by_input));
            if self.parity_outputs {
                parity_extrinsic[k] = saturate(log_ratio(by_parity));
            }
            normalize_log(&mut beta_prev);
            std::mem::swap(&mut beta, &mut beta_prev);
        }
        let alpha_end = StateDistribution::from_log(alphas[n * s_count..].to_vec());
        self.finish(
            input,
            extrinsic,
            parity_extrinsic,
            alpha_end,
            StateDistribution::from_log(beta),
            alphas,
            true,
        )
    }

    #[allow(clippy::too_many_arguments)]
    fn finish(
        &self,
        input: &SisoInput<'_>,
        extrinsic: Vec<f64>,
        parity_extrinsic: Vec<f64>,
        alpha_end: StateDistribution,
        beta_start: StateDistribution,
        alphas: Vec<f64>,
        alphas_are_log: bool,
    ) -> SisoOutput {
        let posterior = extrinsic
            .iter()
            .zip(input.systematic.iter().zip(input.prior))
            .map(|(e, (s, p))| e + s + p)
            .collect();
        let parity_posterior = parity_extrinsic
            .iter()
            .zip(input.parity)
            .map(|(e, p)| e + p)
            .collect();
        SisoOutput {
            extrinsic,
            posterior,
            parity_extrinsic,
            parity_posterior,
            alpha_end,
            beta_start,
            alphas,
            alphas_are_log,
            num_states: self.num_states,
        }
    }
}

/// Decodes with exact log-MAP and parity outputs enabled.
pub fn bcjr(trellis: &Trellis, input: &SisoInput<'_>) -> Result<SisoOutput> {
    Bcjr::new(trellis).decode(input)
}

/// Jacobian logarithm `ln(eᵃ + eᵇ)`.
#[inline]
pub fn max_star(a: f64, b: f64) -> f64 {
    let m = a.max(b);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + (-(a - b).abs()).exp().ln_1p()
}

fn normalize_log(v: &mut [f64]) {
    let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max.is_finite() {
        v.iter_mut().for_each(|x| *x -= max);
    }
}

/// `ln(v[0]/v[1])` when both sums are normal numbers; the saturated value
/// when one underflowed and the other is at least `1e-3`, which puts the
/// ratio beyond `e^700`.
#[inline]
fn linear_ratio(v: [f64; 2]) -> Option<f64> {
    const MIN: f64 = f64::MIN_POSITIVE;
    match (v[0] >= MIN, v[1] >= MIN) {
        (true, true) => Some(saturate((v[0] / v[1]).ln())),
        (true, false) if v[0] >= 1e-3 => Some(EXTRINSIC_LIMIT),
        (false, true) if v[1] >= 1e-3 => Some(-EXTRINSIC_LIMIT),
        _ => None,
    }
}

#[inline]
fn saturate(l: f64) -> f64 {
    l.clamp(-EXTRINSIC_LIMIT, EXTRINSIC_LIMIT)
}

fn log_ratio(v: [f64; 2]) -> f64 {
    match (v[0] == f64::NEG_INFINITY, v[1] == f64::NEG_INFINITY) {
        (true, true) => 0.0,
        _ => v[0] - v[1],
    }
}

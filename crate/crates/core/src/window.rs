//! Sliding-window iterative decoding of SC-SCC streams.
//!
//! The decoder keeps `W` consecutive blocks in view. At each window
//! position it runs `I_W` iterations, each one inner BCJR pass followed by
//! one outer BCJR pass, then emits the hard decision of the leftmost
//! (target) block and slides by one block.
//!
//! Two schedules are available:
//!
//! - [`DecoderMode::WholeWindow`]: one BCJR over the `2K·W` inner sections
//!   and one over the `K·W` outer sections per iteration.
//! - [`DecoderMode::BlockWise`]: `W` short BCJR runs per decoder per
//!   iteration. The forward metrics are passed from block to block within
//!   the iteration; the backward boundary of each block is the backward
//!   metric its right neighbour produced in the previous iteration.
//!
//! Messages are stored per block in the outer code-bit domain (multiplexed
//! index `2k` for `u_k`, `2k+1` for `p^O_k`):
//!
//! - `outer_extrinsic` (L_e(p^O)): what the outer decoder says about its
//!   code bits, the inner decoder's a-priori input;
//! - `inner_extrinsic` (L_e(p^I)): what the inner decoders of blocks
//!   `t..=t+m` say about block `t`'s code bits, the outer decoder's
//!   a-priori input.
//!
//! Boundaries: the left edge forward distributions are threaded from the
//! previous window position (the known zero state at stream start); the
//! right edge is uniform. Emitted blocks are frozen but their last `m`
//! remain available for the coupled a-priori assembly. Code bits before the
//! stream start are known zeros. Entries owned by blocks that have not yet
//! entered the window are left at zero.

use std::collections::VecDeque;

use crate::channel::ChannelBlock;
use crate::encoder::{depuncture_llr, CouplingParams, ScSccCode};
use crate::siso::{Bcjr, SisoAlgorithm, SisoInput, SisoOutput, StateDistribution, LLR_CLAMP};
use crate::{Bit, Error, Result};

/// A-priori LLR given to code bits known to be zero.
pub const KNOWN_ZERO_LLR: f64 = LLR_CLAMP;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DecoderMode {
    /// One BCJR per decoder over the whole window per iteration.
    #[default]
    WholeWindow,
    /// One BCJR per decoder per block per iteration.
    BlockWise,
}

/// Messages of one block.
#[derive(Debug, Clone, PartialEq)]
pub struct LlrBlock {
    pub index: usize,
    pub ch_u: Vec<f64>,
    pub ch_p_outer: Vec<f64>,
    /// Depunctured: zeros at the punctured (odd) positions.
    pub ch_p_inner: Vec<f64>,
    pub outer_extrinsic: Vec<f64>,
    pub inner_extrinsic: Vec<f64>,
    pub posterior_u: Vec<f64>,
    /// Iterations this block took part in, per decoder.
    pub inner_passes: usize,
    pub outer_passes: usize,
    inner_beta_start: Option<StateDistribution>,
    outer_beta_start: Option<StateDistribution>,
}

impl LlrBlock {
    fn new(index: usize, ch: &ChannelBlock) -> Self {
        let k = ch.k();
        LlrBlock {
            index,
            ch_u: ch.u.clone(),
            ch_p_outer: ch.p_outer.clone(),
            ch_p_inner: depuncture_llr(&ch.p_inner),
            outer_extrinsic: vec![0.0; 2 * k],
            inner_extrinsic: vec![0.0; 2 * k],
            posterior_u: vec![0.0; k],
            inner_passes: 0,
            outer_passes: 0,
            inner_beta_start: None,
            outer_beta_start: None,
        }
    }

    /// Channel LLR of multiplexed outer code bit `bit`.
    #[inline]
    fn channel(&self, bit: usize) -> f64 {
        if bit.is_multiple_of(2) {
            self.ch_u[bit / 2]
        } else {
            self.ch_p_outer[bit / 2]
        }
    }

    /// Trellis sections spent on this block so far.
    pub fn sections(&self) -> usize {
        let k = self.ch_u.len();
        2 * k * self.inner_passes + k * self.outer_passes
    }

    fn hard_decision(&self) -> Vec<Bit> {
        hard_decisions(&self.posterior_u)
    }
}

/// Sign slicer; an LLR of exactly 0 decides 0.
pub fn hard_decisions(llrs: &[f64]) -> Vec<Bit> {
    llrs.iter().map(|&l| Bit::from(l < 0.0)).collect()
}

/// An emitted block.
#[derive(Debug, Clone, PartialEq)]
pub struct DecodedBlock {
    pub index: usize,
    pub bits: Vec<Bit>,
    pub posterior: Vec<f64>,
    pub inner_passes: usize,
    pub outer_passes: usize,
    pub sections: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DecoderStats {
    pub window_positions: usize,
    pub inner_calls: usize,
    pub outer_calls: usize,
    pub sections: usize,
}

/// Sliding-window decoder for one stream.
#[derive(Debug, Clone)]
pub struct WindowDecoder<'a> {
    code: &'a ScSccCode,
    params: CouplingParams,
    mode: DecoderMode,
    inner: Bcjr,
    outer: Bcjr,
    /// Up to `m` emitted blocks followed by the blocks in view.
    blocks: VecDeque<LlrBlock>,
    history: usize,
    next_index: usize,
    inner_alpha: StateDistribution,
    outer_alpha: StateDistribution,
    /// Forward distributions after the target block, from the last
    /// iteration; they become the left boundary after the slide.
    inner_alpha_next: Option<StateDistribution>,
    outer_alpha_next: Option<StateDistribution>,
    decoded_since_entry: bool,
    stats: DecoderStats,
}

impl<'a> WindowDecoder<'a> {
    pub fn new(
        code: &'a ScSccCode,
        params: CouplingParams,
        mode: DecoderMode,
        algorithm: SisoAlgorithm,
    ) -> Result<Self> {
        params.validate()?;
        if params.k != code.k() || params.m != code.m() {
            return Err(Error::Params(format!(
                "decoder (K = {}, m = {}) does not match code (K = {}, m = {})",
                params.k,
                params.m,
                code.k(),
                code.m()
            )));
        }
        Ok(WindowDecoder {
            code,
            params,
            mode,
            inner: Bcjr::new(code.inner())
                .with_algorithm(algorithm)
                .with_parity_outputs(false),
            outer: Bcjr::new(code.outer()).with_algorithm(algorithm),
            blocks: VecDeque::with_capacity(params.w + params.m),
            history: 0,
            next_index: 0,
            inner_alpha: StateDistribution::known(code.inner().num_states(), 0),
            outer_alpha: StateDistribution::known(code.outer().num_states(), 0),
            inner_alpha_next: None,
            outer_alpha_next: None,
            decoded_since_entry: false,
            stats: DecoderStats::default(),
        })
    }

    pub fn params(&self) -> CouplingParams {
        self.params
    }

    pub fn stats(&self) -> DecoderStats {
        self.stats
    }

    /// Blocks currently in view, target first.
    pub fn in_view(&self) -> impl Iterator<Item = &LlrBlock> {
        self.blocks.iter().skip(self.history)
    }

    pub fn view_len(&self) -> usize {
        self.blocks.len() - self.history
    }

    /// Index of the current target block.
    pub fn target_index(&self) -> usize {
        self.next_index - self.view_len()
    }

    /// Adds the next block of the stream to the right edge of the window.
    pub fn enter(&mut self, block: &ChannelBlock) -> Result<()> {
        let k = self.params.k;
        for len in [block.u.len(), block.p_outer.len(), block.p_inner.len()] {
            if len != k {
                return Err(Error::LengthMismatch {
                    expected: k,
                    actual: len,
                });
            }
        }
        if self.view_len() >= self.params.w {
            return Err(Error::Params(
                "window is full; slide before entering".into(),
            ));
        }
        self.blocks.push_back(LlrBlock::new(self.next_index, block));
        self.next_index += 1;
        self.decoded_since_entry = false;
        Ok(())
    }

    /// Enters `block`; once the window is full, decodes it and emits the
    /// target block.
    pub fn push(&mut self, block: &ChannelBlock) -> Result<Option<DecodedBlock>> {
        self.enter(block)?;
        if self.view_len() < self.params.w {
            return Ok(None);
        }
        self.decode_window()?;
        Ok(self.slide())
    }

    /// Emits the blocks left in view using their latest posteriors. Call
    /// after the last block was pushed.
    pub fn finish(&mut self) -> Result<Vec<DecodedBlock>> {
        if self.view_len() > 0 && !self.decoded_since_entry {
            return Err(Error::StreamTooShort {
                blocks: self.next_index,
                window: self.params.w,
            });
        }
        let mut out = Vec::with_capacity(self.view_len());
        while self.view_len() > 0 {
            out.extend(self.slide());
        }
        Ok(out)
    }

    /// Runs `I_W` iterations over the blocks in view and returns the hard
    /// decision on the target block.
    pub fn decode_window(&mut self) -> Result<Vec<Bit>> {
        if self.view_len() == 0 {
            return Err(Error::Params("no block in view".into()));
        }
        for _ in 0..self.params.iterations {
            match self.mode {
                DecoderMode::WholeWindow => {
                    self.inner_whole_window()?;
                    self.outer_whole_window()?;
                }
                DecoderMode::BlockWise => {
                    self.inner_block_wise()?;
                    self.outer_block_wise()?;
                }
            }
            let k = self.params.k;
            for b in self.blocks.iter_mut().skip(self.history) {
                b.inner_passes += 1;
                b.outer_passes += 1;
                self.stats.sections += 3 * k;
            }
        }
        self.stats.window_positions += 1;
        self.decoded_since_entry = true;
        Ok(self.blocks[self.history].hard_decision())
    }

    /// Emits the target block and moves the left window edge by one block.
    pub fn slide(&mut self) -> Option<DecodedBlock> {
        if self.view_len() == 0 {
            return None;
        }
        let target = &self.blocks[self.history];
        let decided = DecodedBlock {
            index: target.index,
            bits: target.hard_decision(),
            posterior: target.posterior_u.clone(),
            inner_passes: target.inner_passes,
            outer_passes: target.outer_passes,
            sections: target.sections(),
        };
        if let Some(a) = self.inner_alpha_next.take() {
            self.inner_alpha = a;
        }
        if let Some(a) = self.outer_alpha_next.take() {
            self.outer_alpha = a;
        }
        self.history += 1;
        while self.history > self.params.m {
            self.blocks.pop_front();
            self.history -= 1;
        }
        Some(decided)
    }

    /// Block with absolute index `index`, if still stored.
    fn block_pos(&self, index: usize) -> Option<usize> {
        let first = self.blocks.front()?.index;
        (index >= first && index - first < self.blocks.len()).then(|| index - first)
    }

    /// Inner trellis inputs (systematic, prior, parity) of in-view block
    /// `j`, appended to the given buffers.
    fn assemble_inner(&self, j: usize, sys: &mut Vec<f64>, pri: &mut Vec<f64>, par: &mut Vec<f64>) {
        let block = &self.blocks[self.history + j];
        let first = self.blocks[0].index;
        for (pos, src) in self.code.inner_sources().iter().enumerate() {
            match block.index.checked_sub(src.lag) {
                None => {
                    sys.push(0.0);
                    pri.push(KNOWN_ZERO_LLR);
                }
                Some(owner) => {
                    let o = &self.blocks[owner - first];
                    sys.push(o.channel(src.bit));
                    pri.push(o.outer_extrinsic[src.bit]);
                }
            }
            par.push(block.ch_p_inner[pos]);
        }
    }

    /// Routes inner extrinsics of in-view block `j` back to their owners.
    fn scatter_inner(&mut self, j: usize, ext: &[f64]) {
        let index = self.blocks[self.history + j].index;
        let target = self.target_index();
        let code = self.code;
        for (src, &e) in code.inner_sources().iter().zip(ext) {
            let Some(owner) = index.checked_sub(src.lag) else {
                continue;
            };
            if owner < target {
                continue;
            }
            let pos = self.block_pos(owner).expect("owner in view");
            self.blocks[pos].inner_extrinsic[src.bit] = e;
        }
    }

    fn assemble_outer(&self, j: usize, sys: &mut Vec<f64>, pri: &mut Vec<f64>, par: &mut Vec<f64>) {
        let b = &self.blocks[self.history + j];
        for k in 0..self.params.k {
            sys.push(b.ch_u[k]);
            pri.push(b.inner_extrinsic[2 * k]);
            par.push(b.ch_p_outer[k] + b.inner_extrinsic[2 * k + 1]);
        }
    }

    fn store_outer(&mut self, j: usize, out: &SisoOutput, offset: usize) {
        let k = self.params.k;
        let b = &mut self.blocks[self.history + j];
        for i in 0..k {
            b.outer_extrinsic[2 * i] = out.extrinsic[offset + i];
            b.outer_extrinsic[2 * i + 1] = out.parity_extrinsic[offset + i];
            b.posterior_u[i] = out.posterior[offset + i];
        }
    }

    fn inner_whole_window(&mut self) -> Result<()> {
        let n = self.view_len();
        let len = 2 * self.params.k;
        let (mut sys, mut pri, mut par) = (
            Vec::with_capacity(n * len),
            Vec::with_capacity(n * len),
            Vec::with_capacity(n * len),
        );
        for j in 0..n {
            self.assemble_inner(j, &mut sys, &mut pri, &mut par);
        }
        let uniform = StateDistribution::uniform(self.inner.num_states());
        let out = self.inner.decode(&SisoInput {
            systematic: &sys,
            prior: &pri,
            parity: &par,
            alpha_start: &self.inner_alpha,
            beta_end: &uniform,
        })?;
        self.stats.inner_calls += 1;
        for j in 0..n {
            self.scatter_inner(j, &out.extrinsic[j * len..(j + 1) * len]);
        }
        self.inner_alpha_next = Some(out.alpha_at(len));
        Ok(())
    }

    fn outer_whole_window(&mut self) -> Result<()> {
        let n = self.view_len();
        let k = self.params.k;
        let (mut sys, mut pri, mut par) = (
            Vec::with_capacity(n * k),
            Vec::with_capacity(n * k),
            Vec::with_capacity(n * k),
        );
        for j in 0..n {
            self.assemble_outer(j, &mut sys, &mut pri, &mut par);
        }
        let uniform = StateDistribution::uniform(self.outer.num_states());
        let out = self.outer.decode(&SisoInput {
            systematic: &sys,
            prior: &pri,
            parity: &par,
            alpha_start: &self.outer_alpha,
            beta_end: &uniform,
        })?;
        self.stats.outer_calls += 1;
        for j in 0..n {
            self.store_outer(j, &out, j * k);
        }
        self.outer_alpha_next = Some(out.alpha_at(k));
        Ok(())
    }

    fn inner_block_wise(&mut self) -> Result<()> {
        let n = self.view_len();
        let len = 2 * self.params.k;
        let uniform = StateDistribution::uniform(self.inner.num_states());
        let mut alpha = self.inner_alpha.clone();
        for j in 0..n {
            let (mut sys, mut pri, mut par) = (
                Vec::with_capacity(len),
                Vec::with_capacity(len),
                Vec::with_capacity(len),
            );
            self.assemble_inner(j, &mut sys, &mut pri, &mut par);
            let beta = match self.blocks.get(self.history + j + 1) {
                Some(next) => next
                    .inner_beta_start
                    .clone()
                    .unwrap_or_else(|| uniform.clone()),
                None => uniform.clone(),
            };
            let out = self.inner.decode(&SisoInput {
                systematic: &sys,
                prior: &pri,
                parity: &par,
                alpha_start: &alpha,
                beta_end: &beta,
            })?;
            self.stats.inner_calls += 1;
            self.scatter_inner(j, &out.extrinsic);
            self.blocks[self.history + j].inner_beta_start = Some(out.beta_start);
            if j == 0 {
                self.inner_alpha_next = Some(out.alpha_end.clone());
            }
            alpha = out.alpha_end;
        }
        Ok(())
    }

    fn outer_block_wise(&mut self) -> Result<()> {
        let n = self.view_len();
        let k = self.params.k;
        let uniform = StateDistribution::uniform(self.outer.num_states());
        let mut alpha = self.outer_alpha.clone();
        for j in 0..n {
            let (mut sys, mut pri, mut par) = (
                Vec::with_capacity(k),
                Vec::with_capacity(k),
                Vec::with_capacity(k),
            );
            self.assemble_outer(j, &mut sys, &mut pri, &mut par);
            let beta = match self.blocks.get(self.history + j + 1) {
                Some(next) => next
                    .outer_beta_start
                    .clone()
                    .unwrap_or_else(|| uniform.clone()),
                None => uniform.clone(),
            };
            let out = self.outer.decode(&SisoInput {
                systematic: &sys,
                prior: &pri,
                parity: &par,
                alpha_start: &alpha,
                beta_end: &beta,
            })?;
            self.stats.outer_calls += 1;
            self.store_outer(j, &out, 0);
            self.blocks[self.history + j].outer_beta_start = Some(out.beta_start.clone());
            if j == 0 {
                self.outer_alpha_next = Some(out.alpha_end.clone());
            }
            alpha = out.alpha_end;
        }
        Ok(())
    }
}

/// Result of decoding a whole stream.
#[derive(Debug, Clone, PartialEq)]
pub struct StreamDecoding {
    pub blocks: Vec<DecodedBlock>,
    pub stats: DecoderStats,
}

impl StreamDecoding {
    pub fn bits(&self) -> Vec<Bit> {
        self.blocks
            .iter()
            .flat_map(|b| b.bits.iter().copied())
            .collect()
    }
}

/// Decodes a complete stream of `T ≥ W` blocks, emitting all `T` blocks.
pub fn decode_stream(
    code: &ScSccCode,
    params: CouplingParams,
    mode: DecoderMode,
    algorithm: SisoAlgorithm,
    stream: &[ChannelBlock],
) -> Result<StreamDecoding> {
    if stream.len() < params.w {
        return Err(Error::StreamTooShort {
            blocks: stream.len(),
            window: params.w,
        });
    }
    let mut dec = WindowDecoder::new(code, params, mode, algorithm)?;
    let mut blocks = Vec::with_capacity(stream.len());
    for b in stream {
        blocks.extend(dec.push(b)?);
    }
    blocks.extend(dec.finish()?);
    Ok(StreamDecoding {
        blocks,
        stats: dec.stats(),
    })
}

/// Positions where `decided` differs from `truth`.
pub fn error_positions(decided: &[Bit], truth: &[Bit]) -> Vec<usize> {
    decided
        .iter()
        .zip(truth)
        .enumerate()
        .filter_map(|(i, (a, b))| (a != b).then_some(i))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::ChannelSpec;
    use crate::encoder::ScSccEncoder;
    use crate::seed::{self, Role};
    use crate::trellis::GeneratorSpec;
    use rand::Rng;

    fn code(k: usize, m: usize, seed: u64) -> ScSccCode {
        ScSccCode::new(k, m, GeneratorSpec::RSC_5_7, GeneratorSpec::RSC_5_7, seed).unwrap()
    }

    fn stream(
        code: &ScSccCode,
        t: usize,
        ebno_db: f64,
        seed: u64,
    ) -> (Vec<Vec<Bit>>, Vec<ChannelBlock>) {
        let mut data = seed::rng(seed, Role::Data, &[]);
        let mut noise = seed::rng(seed, Role::Noise, &[]);
        let spec = ChannelSpec::new(ebno_db);
        let mut enc = ScSccEncoder::new(code);
        let mut us = vec![];
        let mut rx = vec![];
        for _ in 0..t {
            let u: Vec<Bit> = (0..code.k()).map(|_| data.random_range(0..2)).collect();
            let c = enc.encode_block(&u).unwrap();
            rx.push(ChannelBlock::through_awgn(&c, &spec, &mut noise));
            us.push(u);
        }
        (us, rx)
    }

    #[test]
    fn noiseless_stream_decodes_in_one_iteration() {
        let c = code(16, 3, 1);
        let params = CouplingParams::new(16, 3, 6, 1).unwrap();
        let mut enc = ScSccEncoder::new(&c);
        let mut data = seed::rng(9, Role::Data, &[]);
        let mut us = vec![];
        let mut rx = vec![];
        for _ in 0..20 {
            let u: Vec<Bit> = (0..16).map(|_| data.random_range(0..2)).collect();
            rx.push(ChannelBlock::noiseless(
                &enc.encode_block(&u).unwrap(),
                20.0,
            ));
            us.push(u);
        }
        for mode in [DecoderMode::WholeWindow, DecoderMode::BlockWise] {
            let out = decode_stream(&c, params, mode, SisoAlgorithm::LogMap, &rx).unwrap();
            assert_eq!(out.blocks.len(), 20);
            for (b, u) in out.blocks.iter().zip(&us) {
                assert_eq!(&b.bits, u);
            }
        }
    }

    #[test]
    fn too_short_stream_is_rejected() {
        let c = code(8, 1, 1);
        let params = CouplingParams::new(8, 1, 4, 2).unwrap();
        let (_, rx) = stream(&c, 3, 2.0, 1);
        assert_eq!(
            decode_stream(
                &c,
                params,
                DecoderMode::WholeWindow,
                SisoAlgorithm::LogMap,
                &rx
            ),
            Err(Error::StreamTooShort {
                blocks: 3,
                window: 4
            })
        );
        let mut dec =
            WindowDecoder::new(&c, params, DecoderMode::WholeWindow, SisoAlgorithm::LogMap)
                .unwrap();
        for b in &rx {
            assert!(dec.push(b).unwrap().is_none());
        }
        assert!(dec.finish().is_err());
    }

    #[test]
    fn mismatched_params_are_rejected() {
        let c = code(8, 1, 1);
        let p = CouplingParams::new(8, 0, 4, 2).unwrap();
        assert!(
            WindowDecoder::new(&c, p, DecoderMode::WholeWindow, SisoAlgorithm::LogMap).is_err()
        );
        let p = CouplingParams::new(8, 1, 4, 2).unwrap();
        let mut dec =
            WindowDecoder::new(&c, p, DecoderMode::WholeWindow, SisoAlgorithm::LogMap).unwrap();
        let bad = ChannelBlock {
            u: vec![0.0; 7],
            p_outer: vec![0.0; 8],
            p_inner: vec![0.0; 8],
        };
        assert!(dec.enter(&bad).is_err());
    }

    #[test]
    fn t_equal_w_emits_every_block() {
        let c = code(8, 1, 2);
        let params = CouplingParams::new(8, 1, 4, 2).unwrap();
        let (_, rx) = stream(&c, 4, 3.0, 2);
        let out = decode_stream(
            &c,
            params,
            DecoderMode::WholeWindow,
            SisoAlgorithm::LogMap,
            &rx,
        )
        .unwrap();
        let idx: Vec<usize> = out.blocks.iter().map(|b| b.index).collect();
        assert_eq!(idx, vec![0, 1, 2, 3]);
        assert_eq!(out.stats.window_positions, 1);
        assert!(out.blocks.iter().all(|b| b.inner_passes == 2));
    }

    #[test]
    fn schedule_counts() {
        let c = code(8, 1, 3);
        let (w, iters, t) = (4, 3, 12);
        let params = CouplingParams::new(8, 1, w, iters).unwrap();
        let (_, rx) = stream(&c, t, 2.0, 3);
        let positions = t - w + 1;
        let whole = decode_stream(
            &c,
            params,
            DecoderMode::WholeWindow,
            SisoAlgorithm::LogMap,
            &rx,
        )
        .unwrap();
        assert_eq!(whole.stats.window_positions, positions);
        assert_eq!(whole.stats.inner_calls, positions * iters);
        assert_eq!(whole.stats.outer_calls, positions * iters);
        let blockwise = decode_stream(
            &c,
            params,
            DecoderMode::BlockWise,
            SisoAlgorithm::LogMap,
            &rx,
        )
        .unwrap();
        assert_eq!(blockwise.stats.inner_calls, positions * w * iters);
        assert_eq!(blockwise.stats.outer_calls, positions * w * iters);
        for b in &whole.blocks {
            if b.index >= w - 1 && b.index <= t - w {
                assert_eq!(b.inner_passes, w * iters);
                assert_eq!(b.sections, 3 * 8 * w * iters);
            } else {
                assert!(b.inner_passes < w * iters);
            }
        }
    }

    #[test]
    fn sliding_keeps_surviving_messages() {
        let c = code(8, 3, 4);
        let params = CouplingParams::new(8, 3, 5, 2).unwrap();
        let (_, rx) = stream(&c, 8, 1.5, 4);
        let mut dec =
            WindowDecoder::new(&c, params, DecoderMode::WholeWindow, SisoAlgorithm::LogMap)
                .unwrap();
        for b in &rx[..5] {
            dec.enter(b).unwrap();
        }
        dec.decode_window().unwrap();
        let before: Vec<LlrBlock> = dec.in_view().skip(1).cloned().collect();
        let emitted = dec.slide().unwrap();
        assert_eq!(emitted.index, 0);
        let after: Vec<LlrBlock> = dec.in_view().cloned().collect();
        assert_eq!(before, after);
        dec.enter(&rx[5]).unwrap();
        let fresh = dec.in_view().last().unwrap();
        assert!(fresh
            .outer_extrinsic
            .iter()
            .chain(&fresh.inner_extrinsic)
            .all(|&v| v == 0.0));
    }

    #[test]
    fn modes_coincide_for_single_block_window() {
        let c = code(16, 0, 5);
        let params = CouplingParams::new(16, 0, 1, 4).unwrap();
        let (_, rx) = stream(&c, 10, 1.0, 5);
        let a = decode_stream(
            &c,
            params,
            DecoderMode::WholeWindow,
            SisoAlgorithm::LogMap,
            &rx,
        )
        .unwrap();
        let b = decode_stream(
            &c,
            params,
            DecoderMode::BlockWise,
            SisoAlgorithm::LogMap,
            &rx,
        )
        .unwrap();
        assert_eq!(a.blocks, b.blocks);
    }

    #[test]
    fn decisions_ignore_blocks_beyond_the_window() {
        let c = code(12, 2, 6);
        let w = 4;
        let params = CouplingParams::new(12, 2, w, 3).unwrap();
        let (_, rx) = stream(&c, 14, 1.0, 6);
        let base = decode_stream(
            &c,
            params,
            DecoderMode::WholeWindow,
            SisoAlgorithm::LogMap,
            &rx,
        )
        .unwrap();
        let target = 5;
        let mut perturbed = rx.clone();
        for b in &mut perturbed[target + w..] {
            b.u.iter_mut().for_each(|l| *l = -*l * 3.0);
            b.p_inner.iter_mut().for_each(|l| *l = 7.0);
        }
        let out = decode_stream(
            &c,
            params,
            DecoderMode::WholeWindow,
            SisoAlgorithm::LogMap,
            &perturbed,
        )
        .unwrap();
        for t in 0..=target {
            assert_eq!(
                out.blocks[t].posterior, base.blocks[t].posterior,
                "block {t}"
            );
        }
    }

    #[test]
    fn error_positions_lists_differences() {
        assert_eq!(error_positions(&[0, 1, 1, 0], &[0, 0, 1, 1]), vec![1, 3]);
        assert_eq!(hard_decisions(&[0.0, -0.0, -1e-9, 2.0]), vec![0, 0, 1, 0]);
    }
}

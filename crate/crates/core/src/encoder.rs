//! SCC and SC-SCC encoders.
//!
//! Per block `t` the SC-SCC encoder
//!
//! 1. outer-encodes `u_t` (K bits) into `p^O_t`, continuing from the outer
//!    encoder's previous state;
//! 2. multiplexes `(u_t, p^O_t)` bitwise (`u₀ p₀ u₁ p₁ …`) and permutes the
//!    2K-bit result with interleaver 1 into `q^O_t`;
//! 3. splits `q^O_t` into `m+1` equal parts `q_{t,0} … q_{t,m}`;
//! 4. assembles `(q_{t,0}, q_{t-1,1}, …, q_{t-m,m})`, permutes it with
//!    interleaver 2 and inner-encodes it into `p^I_t` (2K bits), continuing
//!    from the inner encoder's previous state;
//! 5. keeps the even positions of `p^I_t`, giving `v_t = (u_t, p^O_t, p^I_t)`
//!    of 3K bits.
//!
//! Nothing is ever terminated. Before the stream start the past parts are
//! all-zero.

use std::collections::VecDeque;

use crate::interleaver::Permutation;
use crate::seed::{self, Role};
use crate::trellis::{EncoderState, GeneratorSpec, Trellis};
use crate::{Bit, Error, Result};

/// Block length, coupling memory, window size and iterations per window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CouplingParams {
    /// Information bits per block, `K`.
    pub k: usize,
    /// Coupling memory, `m`.
    pub m: usize,
    /// Decoding window size in blocks, `W`.
    pub w: usize,
    /// Iterations per window position, `I_W`.
    pub iterations: usize,
}

impl CouplingParams {
    pub fn new(k: usize, m: usize, w: usize, iterations: usize) -> Result<Self> {
        let p = CouplingParams {
            k,
            m,
            w,
            iterations,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::Params("K >= 1 required".into()));
        }
        if self.w == 0 {
            return Err(Error::Params("W >= 1 required".into()));
        }
        if self.iterations == 0 {
            return Err(Error::Params("I_W >= 1 required".into()));
        }
        validate_coupling(self.k, self.m)?;
        if self.m >= self.w {
            return Err(Error::Params(format!(
                "m < W required (m = {}, W = {})",
                self.m, self.w
            )));
        }
        Ok(())
    }

    /// Constraint length `C = K·(m+1)`.
    pub fn constraint_length(&self) -> usize {
        self.k * (self.m + 1)
    }

    /// Structural latency `L = W·K` in bits.
    pub fn latency(&self) -> usize {
        self.w * self.k
    }

    /// Effective iterations `I_eff = W·I_W`.
    pub fn effective_iterations(&self) -> usize {
        self.w * self.iterations
    }

    /// Length of one coupled subsequence, `2K/(m+1)`.
    pub fn part_len(&self) -> usize {
        2 * self.k / (self.m + 1)
    }
}

/// Checks the code-side constraints `m < 2K` and `(m+1) | 2K`.
pub fn validate_coupling(k: usize, m: usize) -> Result<()> {
    if m >= 2 * k {
        return Err(Error::Params(format!("m < 2K required (m = {m}, K = {k})")));
    }
    if !(2 * k).is_multiple_of(m + 1) {
        return Err(Error::Params(format!(
            "(m+1) must divide 2K (m = {m}, K = {k})"
        )));
    }
    Ok(())
}

/// The transmitted bits of one block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodedBlock {
    pub u: Vec<Bit>,
    pub p_outer: Vec<Bit>,
    /// Surviving (even-index) inner parity bits.
    pub p_inner: Vec<Bit>,
}

impl CodedBlock {
    /// Transmission order `u ‖ p^O ‖ p^I`.
    pub fn bits(&self) -> Vec<Bit> {
        [&self.u[..], &self.p_outer, &self.p_inner].concat()
    }

    pub fn len(&self) -> usize {
        self.u.len() + self.p_outer.len() + self.p_inner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Interleaves `(u, p)` as `u₀ p₀ u₁ p₁ …`.
pub fn mux<T: Copy>(u: &[T], p: &[T]) -> Vec<T> {
    debug_assert_eq!(u.len(), p.len());
    u.iter().zip(p).flat_map(|(&a, &b)| [a, b]).collect()
}

/// Splits `q` into `m+1` contiguous parts of equal length.
pub fn split_subsequences<T>(q: &[T], m: usize) -> Result<Vec<&[T]>> {
    if !q.len().is_multiple_of(2) {
        return Err(Error::OddLength(q.len()));
    }
    validate_coupling(q.len() / 2, m)?;
    Ok(q.chunks(q.len() / (m + 1)).collect())
}

/// Keeps the even positions of the inner parity.
pub fn puncture<T: Copy>(p: &[T]) -> Result<Vec<T>> {
    if !p.len().is_multiple_of(2) {
        return Err(Error::OddLength(p.len()));
    }
    Ok(p.iter().step_by(2).copied().collect())
}

/// Inverse of [`puncture`] on LLRs: punctured positions become erasures.
pub fn depuncture_llr(l: &[f64]) -> Vec<f64> {
    l.iter().flat_map(|&x| [x, 0.0]).collect()
}

/// Encoder states threaded between blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SccStates {
    pub outer: EncoderState,
    pub inner: EncoderState,
}

/// One block of the uncoupled SCC with interleaver `perm` (length 2K).
pub fn scc_encode_block(
    u: &[Bit],
    perm: &Permutation,
    outer: &Trellis,
    inner: &Trellis,
    states: SccStates,
) -> Result<(CodedBlock, SccStates)> {
    if perm.len() != 2 * u.len() {
        return Err(Error::LengthMismatch {
            expected: perm.len(),
            actual: 2 * u.len(),
        });
    }
    let (p_outer, outer_end) = outer.encode(u, states.outer);
    let q = perm.permute(&mux(u, &p_outer))?;
    let (p_full, inner_end) = inner.encode(&q, states.inner);
    let block = CodedBlock {
        u: u.to_vec(),
        p_outer,
        p_inner: puncture(&p_full)?,
    };
    Ok((
        block,
        SccStates {
            outer: outer_end,
            inner: inner_end,
        },
    ))
}

/// Where an inner-trellis input bit comes from: outer code bit `bit`
/// (multiplexed index, `2k` for `u_k`, `2k+1` for `p^O_k`) of the block
/// `lag` steps in the past.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InnerSource {
    pub lag: usize,
    pub bit: usize,
}

/// Fixed code description shared by the encoder and the decoder.
#[derive(Debug, Clone)]
pub struct ScSccCode {
    k: usize,
    m: usize,
    outer: Trellis,
    inner: Trellis,
    pi1: Permutation,
    pi2: Permutation,
    inner_sources: Vec<InnerSource>,
}

impl ScSccCode {
    /// Code with interleavers drawn from `base_seed`. The same two
    /// permutations are used at every time instant.
    pub fn new(
        k: usize,
        m: usize,
        outer: GeneratorSpec,
        inner: GeneratorSpec,
        base_seed: u64,
    ) -> Result<Self> {
        validate_coupling(k, m)?;
        let n = 2 * k as u64;
        let pi1 = Permutation::random(2 * k, seed::derive(base_seed, Role::Interleaver1, &[n]))?;
        let pi2 = Permutation::random(2 * k, seed::derive(base_seed, Role::Interleaver2, &[n]))?;
        Self::with_interleavers(k, m, outer, inner, pi1, pi2)
    }

    pub fn with_interleavers(
        k: usize,
        m: usize,
        outer: GeneratorSpec,
        inner: GeneratorSpec,
        pi1: Permutation,
        pi2: Permutation,
    ) -> Result<Self> {
        validate_coupling(k, m)?;
        for p in [&pi1, &pi2] {
            if p.len() != 2 * k {
                return Err(Error::LengthMismatch {
                    expected: 2 * k,
                    actual: p.len(),
                });
            }
        }
        let part = 2 * k / (m + 1);
        // Inner position n carries a_t[i] with i = π2⁻¹(n); a_t[i] is
        // q^O_{t-lag}[i] with lag = i / part, and q^O[i] = x[π1⁻¹(i)].
        let inner_sources = pi2
            .inverse()
            .iter()
            .map(|&i| InnerSource {
                lag: i / part,
                bit: pi1.inverse()[i],
            })
            .collect();
        Ok(ScSccCode {
            k,
            m,
            outer: Trellis::new(outer)?,
            inner: Trellis::new(inner)?,
            pi1,
            pi2,
            inner_sources,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn outer(&self) -> &Trellis {
        &self.outer
    }

    pub fn inner(&self) -> &Trellis {
        &self.inner
    }

    pub fn interleaver1(&self) -> &Permutation {
        &self.pi1
    }

    pub fn interleaver2(&self) -> &Permutation {
        &self.pi2
    }

    /// Source of each of the 2K inner trellis inputs of a block.
    pub fn inner_sources(&self) -> &[InnerSource] {
        &self.inner_sources
    }
}

/// Encoder memory carried from block to block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncoderPipelineState {
    pub outer_state: EncoderState,
    pub inner_state: EncoderState,
    /// `pending[i-1]` is `q^O_{t-i}` for `i = 1..=m`; its parts `i..=m` are
    /// still owed to the inner encoders of blocks `t..`.
    pub pending: VecDeque<Vec<Bit>>,
}

impl EncoderPipelineState {
    /// Zero-state start with all-zero past blocks.
    pub fn new(k: usize, m: usize) -> Self {
        EncoderPipelineState {
            outer_state: EncoderState::ZERO,
            inner_state: EncoderState::ZERO,
            pending: (0..m).map(|_| vec![0; 2 * k]).collect(),
        }
    }
}

/// Continuous SC-SCC encoder for one stream.
#[derive(Debug, Clone)]
pub struct ScSccEncoder<'a> {
    code: &'a ScSccCode,
    pipe: EncoderPipelineState,
    blocks: usize,
}

impl<'a> ScSccEncoder<'a> {
    pub fn new(code: &'a ScSccCode) -> Self {
        ScSccEncoder {
            code,
            pipe: EncoderPipelineState::new(code.k, code.m),
            blocks: 0,
        }
    }

    pub fn state(&self) -> &EncoderPipelineState {
        &self.pipe
    }

    pub fn blocks_encoded(&self) -> usize {
        self.blocks
    }

    pub fn encode_block(&mut self, u: &[Bit]) -> Result<CodedBlock> {
        let code = self.code;
        if u.len() != code.k {
            return Err(Error::LengthMismatch {
                expected: code.k,
                actual: u.len(),
            });
        }
        if self.pipe.pending.len() != code.m
            || self.pipe.pending.iter().any(|q| q.len() != 2 * code.k)
        {
            return Err(Error::Params(
                "encoder pipeline does not match the code".into(),
            ));
        }
        let (p_outer, outer_end) = code.outer.encode(u, self.pipe.outer_state);
        let q = code.pi1.permute(&mux(u, &p_outer))?;
        let parts = split_subsequences(&q, code.m)?;

        let mut assembled = Vec::with_capacity(2 * code.k);
        assembled.extend_from_slice(parts[0]);
        for lag in 1..=code.m {
            let past = split_subsequences(&self.pipe.pending[lag - 1], code.m)?;
            assembled.extend_from_slice(past[lag]);
        }

        let inner_in = code.pi2.permute(&assembled)?;
        let (p_full, inner_end) = code.inner.encode(&inner_in, self.pipe.inner_state);

        self.pipe.outer_state = outer_end;
        self.pipe.inner_state = inner_end;
        if code.m > 0 {
            self.pipe.pending.pop_back();
            self.pipe.pending.push_front(q);
        }
        self.blocks += 1;
        Ok(CodedBlock {
            u: u.to_vec(),
            p_outer,
            p_inner: puncture(&p_full)?,
        })
    }

    pub fn encode_stream<B: AsRef<[Bit]>>(&mut self, blocks: &[B]) -> Result<Vec<CodedBlock>> {
        blocks
            .iter()
            .map(|u| self.encode_block(u.as_ref()))
            .collect()
    }
}

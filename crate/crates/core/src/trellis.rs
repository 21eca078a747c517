//! Recursive systematic convolutional component codes.
//!
//! A rate-1/2 RSC code is given by a feedback polynomial `f` and a
//! feedforward polynomial `g`, both of degree at most `ν`. Bit `i` of the
//! integer representation is the coefficient of `D^i`, so the usual octal
//! notation `(1, 5/7)` means feedback `0o7 = 1 + D + D²` and feedforward
//! `0o5 = 1 + D²`.
//!
//! The realization is controller canonical form. With `w_k` the register
//! input,
//!
//! ```text
//! w_k = u_k ⊕ f_1·w_{k-1} ⊕ … ⊕ f_ν·w_{k-ν}
//! p_k = g_0·w_k ⊕ g_1·w_{k-1} ⊕ … ⊕ g_ν·w_{k-ν}
//! ```
//!
//! and the state index is `Σ_i w_{k-i}·2^(i-1)` for `i = 1..=ν`, i.e. the
//! most recent register bit is the LSB.

use crate::{Bit, Error, Result};

/// Feedback/feedforward polynomial pair of an RSC code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub feedback: u32,
    pub feedforward: u32,
    pub memory: u32,
}

impl GeneratorSpec {
    /// The 4-state `(1, 5/7)` code.
    pub const RSC_5_7: GeneratorSpec = GeneratorSpec {
        feedback: 0o7,
        feedforward: 0o5,
        memory: 2,
    };

    pub fn new(feedback: u32, feedforward: u32, memory: u32) -> Result<Self> {
        let spec = GeneratorSpec {
            feedback,
            feedforward,
            memory,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Parses both polynomials from octal digit strings.
    pub fn from_octal(feedback: &str, feedforward: &str, memory: u32) -> Result<Self> {
        let parse = |s: &str| {
            u32::from_str_radix(s.trim(), 8)
                .map_err(|_| Error::Generator(format!("'{s}' is not an octal polynomial")))
        };
        Self::new(parse(feedback)?, parse(feedforward)?, memory)
    }

    pub fn validate(&self) -> Result<()> {
        let nu = self.memory;
        if !(1..=16).contains(&nu) {
            return Err(Error::Generator(format!("memory {nu} outside 1..=16")));
        }
        let limit = 1u32 << (nu + 1);
        if self.feedback >= limit || self.feedforward >= limit {
            return Err(Error::Generator(format!(
                "polynomials {:o}/{:o} do not fit in {} bits",
                self.feedback,
                self.feedforward,
                nu + 1
            )));
        }
        if self.feedback & 1 == 0 {
            return Err(Error::Generator(format!(
                "feedback {:o} has constant term 0",
                self.feedback
            )));
        }
        if self.feedback >> nu != 1 {
            return Err(Error::Generator(format!(
                "feedback {:o} does not have degree {nu}",
                self.feedback
            )));
        }
        Ok(())
    }

    pub fn num_states(&self) -> usize {
        1 << self.memory
    }
}

impl Default for GeneratorSpec {
    fn default() -> Self {
        Self::RSC_5_7
    }
}

/// Encoder state index in `[0, 2^ν)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct EncoderState(pub usize);

impl EncoderState {
    pub const ZERO: EncoderState = EncoderState(0);
}

/// Tabulated transitions of an RSC code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trellis {
    spec: GeneratorSpec,
    num_states: usize,
    /// `next_state[2 * s + u]`
    next_state: Vec<usize>,
    /// `parity[2 * s + u]`
    parity: Vec<Bit>,
    /// `prev_edges[s]`: the two `(predecessor, input)` pairs entering `s`.
    prev_edges: Vec<[(usize, Bit); 2]>,
}

impl Trellis {
    pub fn new(spec: GeneratorSpec) -> Result<Self> {
        spec.validate()?;
        let nu = spec.memory as usize;
        let num_states = 1usize << nu;
        let mask = num_states - 1;
        let tap = |poly: u32, i: usize| ((poly >> i) & 1) as usize;

        let mut next_state = vec![0; 2 * num_states];
        let mut parity = vec![0; 2 * num_states];
        let mut incoming: Vec<Vec<(usize, Bit)>> = vec![Vec::with_capacity(2); num_states];
        for s in 0..num_states {
            // register bit w_{k-i} sits at bit (i - 1) of the state index
            let reg = |i: usize| (s >> (i - 1)) & 1;
            let fb = (1..=nu).fold(0, |acc, i| acc ^ (tap(spec.feedback, i) & reg(i)));
            let ff_past = (1..=nu).fold(0, |acc, i| acc ^ (tap(spec.feedforward, i) & reg(i)));
            for u in 0..2usize {
                let w = u ^ fb;
                let p = (tap(spec.feedforward, 0) & w) ^ ff_past;
                let ns = ((s << 1) | w) & mask;
                next_state[2 * s + u] = ns;
                parity[2 * s + u] = p as Bit;
                incoming[ns].push((s, u as Bit));
            }
        }
        let prev_edges = incoming
            .into_iter()
            .map(|e| {
                debug_assert_eq!(e.len(), 2);
                [e[0], e[1]]
            })
            .collect();
        Ok(Trellis {
            spec,
            num_states,
            next_state,
            parity,
            prev_edges,
        })
    }

    pub fn spec(&self) -> GeneratorSpec {
        self.spec
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    #[inline]
    pub fn next_state(&self, state: usize, input: Bit) -> usize {
        self.next_state[2 * state + input as usize]
    }

    #[inline]
    pub fn parity(&self, state: usize, input: Bit) -> Bit {
        self.parity[2 * state + input as usize]
    }

    pub fn prev_edges(&self, state: usize) -> &[(usize, Bit); 2] {
        &self.prev_edges[state]
    }

    /// Encodes `input` starting from `start`, without termination.
    ///
    /// Returns the parity sequence (same length as `input`) and the final
    /// state, which is the start state of the next block in continuous
    /// encoding.
    pub fn encode(&self, input: &[Bit], start: EncoderState) -> (Vec<Bit>, EncoderState) {
        let mut state = start.0;
        let parity = input
            .iter()
            .map(|&u| {
                let p = self.parity(state, u);
                state = self.next_state(state, u);
                p
            })
            .collect();
        (parity, EncoderState(state))
    }
}

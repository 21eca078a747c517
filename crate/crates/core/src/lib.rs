//! Spatially coupled serially concatenated convolutional codes (SC-SCCs).
//!
//! The crate covers the whole transmit/receive chain used to study these
//! codes:
//!
//! - [`trellis`]: recursive systematic convolutional (RSC) component codes
//!   with stateful encoding, so encoder state can be carried across blocks.
//! - [`interleaver`]: seeded pseudo-random permutations.
//! - [`encoder`]: the uncoupled SCC encoder and the SC-SCC encoder with
//!   coupling memory `m`, continuous encoding and rate-1/3 puncturing.
//! - [`channel`]: BPSK over AWGN and channel LLRs.
//! - [`siso`]: log-MAP BCJR over trellis segments with explicit boundary
//!   state distributions.
//! - [`window`]: the sliding-window iterative decoder (whole-window and
//!   block-wise BCJR schedules).
//! - [`experiment`]: latency/constraint-length/complexity algebra, the fixed
//!   latency scenario table and the Monte Carlo BER harness.
//!
//! LLR sign convention throughout: positive values favour bit 0.

pub mod channel;
pub mod encoder;
mod error;
pub mod experiment;
pub mod interleaver;
pub mod seed;
pub mod siso;
pub mod trellis;
pub mod window;

pub use channel::{ChannelBlock, ChannelSpec};
pub use encoder::{CodedBlock, CouplingParams, ScSccCode, ScSccEncoder};
pub use error::Error;
pub use experiment::{BerPoint, Scenario, StopRule};
pub use interleaver::Permutation;
pub use siso::{SisoAlgorithm, StateDistribution};
pub use trellis::{EncoderState, GeneratorSpec, Trellis};
pub use window::{DecoderMode, WindowDecoder};

/// A hard bit, always 0 or 1.
pub type Bit = u8;

pub type Result<T, E = Error> = std::result::Result<T, E>;

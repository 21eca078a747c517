//! BPSK over AWGN.
//!
//! Bit 0 maps to `+1`, bit 1 to `-1`. Noise variance per real dimension is
//! `σ² = 1 / (2·R·Eb/N0)` with unit symbol energy and code rate `R = 1/3`.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::encoder::CodedBlock;
use crate::{Bit, Result};

/// Code rate of the transmitted stream.
pub const CODE_RATE: f64 = 1.0 / 3.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSpec {
    pub ebno_db: f64,
    pub rate: f64,
    pub sigma2: f64,
}

impl ChannelSpec {
    pub fn new(ebno_db: f64) -> Self {
        Self::with_rate(ebno_db, CODE_RATE)
    }

    pub fn with_rate(ebno_db: f64, rate: f64) -> Self {
        let ebno = 10f64.powf(ebno_db / 10.0);
        ChannelSpec {
            ebno_db,
            rate,
            sigma2: 1.0 / (2.0 * rate * ebno),
        }
    }
}

pub fn modulate(bits: &[Bit]) -> Vec<f64> {
    bits.iter()
        .map(|&b| if b == 0 { 1.0 } else { -1.0 })
        .collect()
}

/// Adds i.i.d. Gaussian noise of variance `spec.sigma2`.
pub fn transmit<R: Rng + ?Sized>(symbols: &[f64], spec: &ChannelSpec, rng: &mut R) -> Vec<f64> {
    let sigma = spec.sigma2.sqrt();
    symbols
        .iter()
        .map(|&s| s + sigma * rng.sample::<f64, _>(StandardNormal))
        .collect()
}

/// `L = 2y/σ²`, positive favouring bit 0.
pub fn channel_llrs(received: &[f64], sigma2: f64) -> Vec<f64> {
    let scale = 2.0 / sigma2;
    received.iter().map(|&y| scale * y).collect()
}

/// Channel LLRs of one transmitted block.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelBlock {
    pub u: Vec<f64>,
    pub p_outer: Vec<f64>,
    /// LLRs of the surviving inner parity bits (K of them).
    pub p_inner: Vec<f64>,
}

impl ChannelBlock {
    /// Splits a `u ‖ p^O ‖ p^I` LLR vector of length 3K.
    pub fn from_llrs(llrs: &[f64]) -> Result<Self> {
        if !llrs.len().is_multiple_of(3) {
            return Err(crate::Error::LengthMismatch {
                expected: 3 * (llrs.len() / 3),
                actual: llrs.len(),
            });
        }
        let k = llrs.len() / 3;
        Ok(ChannelBlock {
            u: llrs[..k].to_vec(),
            p_outer: llrs[k..2 * k].to_vec(),
            p_inner: llrs[2 * k..].to_vec(),
        })
    }

    /// Noise-free LLRs of magnitude `magnitude`.
    pub fn noiseless(block: &CodedBlock, magnitude: f64) -> Self {
        let l = |bits: &[Bit]| -> Vec<f64> {
            bits.iter()
                .map(|&b| if b == 0 { magnitude } else { -magnitude })
                .collect()
        };
        ChannelBlock {
            u: l(&block.u),
            p_outer: l(&block.p_outer),
            p_inner: l(&block.p_inner),
        }
    }

    /// Modulates, corrupts and demaps a coded block.
    pub fn through_awgn<R: Rng + ?Sized>(
        block: &CodedBlock,
        spec: &ChannelSpec,
        rng: &mut R,
    ) -> Self {
        let y = transmit(&modulate(&block.bits()), spec, rng);
        Self::from_llrs(&channel_llrs(&y, spec.sigma2)).expect("3K symbols")
    }

    pub fn k(&self) -> usize {
        self.u.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn bpsk_mapping() {
        assert_eq!(modulate(&[0, 1, 1, 0]), vec![1.0, -1.0, -1.0, 1.0]);
        assert_eq!(modulate(&[0; 96]).len(), 96);
    }

    #[test]
    fn sigma2_accounts_for_rate() {
        let s = ChannelSpec::new(0.0);
        assert!((s.sigma2 - 1.5).abs() < 1e-15);
        let s = ChannelSpec::new(10.0);
        assert!((s.sigma2 - 0.15).abs() < 1e-15);
    }

    #[test]
    fn llr_formula() {
        assert_eq!(channel_llrs(&[1.0], 0.5), vec![4.0]);
        assert_eq!(channel_llrs(&[0.0], 0.5), vec![0.0]);
        assert_eq!(channel_llrs(&[-0.5], 2.0), vec![-0.5]);
    }

    #[test]
    fn vanishing_noise_is_transparent() {
        let spec = ChannelSpec {
            ebno_db: f64::INFINITY,
            rate: CODE_RATE,
            sigma2: 0.0,
        };
        let x = modulate(&[0, 1, 0]);
        let y = transmit(&x, &spec, &mut ChaCha8Rng::seed_from_u64(1));
        assert_eq!(x, y);
    }

    #[test]
    fn noise_variance_matches_spec() {
        let spec = ChannelSpec::new(1.0);
        let x = vec![1.0; 1_000_000];
        let y = transmit(&x, &spec, &mut ChaCha8Rng::seed_from_u64(7));
        let n = y.len() as f64;
        let mean = y.iter().map(|v| v - 1.0).sum::<f64>() / n;
        let var = y.iter().map(|v| (v - 1.0 - mean).powi(2)).sum::<f64>() / n;
        assert!((var / spec.sigma2 - 1.0).abs() < 0.01, "var {var}");
    }

    #[test]
    fn fixed_seed_is_reproducible() {
        let spec = ChannelSpec::new(2.0);
        let x = modulate(&[0, 1, 1, 0, 1]);
        let a = transmit(&x, &spec, &mut ChaCha8Rng::seed_from_u64(3));
        let b = transmit(&x, &spec, &mut ChaCha8Rng::seed_from_u64(3));
        assert_eq!(
            a.iter().map(|v| v.to_bits()).collect::<Vec<_>>(),
            b.iter().map(|v| v.to_bits()).collect::<Vec<_>>()
        );
    }

    #[test]
    fn llrs_are_consistent_gaussians() {
        // all-zero codeword: L ~ N(2/σ², 4/σ²)
        let spec = ChannelSpec::new(0.5);
        let y = transmit(
            &vec![1.0; 400_000],
            &spec,
            &mut ChaCha8Rng::seed_from_u64(11),
        );
        let l = channel_llrs(&y, spec.sigma2);
        let n = l.len() as f64;
        let mean = l.iter().sum::<f64>() / n;
        let var = l.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        assert!((mean / (2.0 / spec.sigma2) - 1.0).abs() < 0.02);
        assert!((var / (4.0 / spec.sigma2) - 1.0).abs() < 0.02);
    }

    #[test]
    fn sign_errors_vanish_at_high_snr() {
        let rate = |ebno_db: f64| {
            let spec = ChannelSpec::new(ebno_db);
            let y = transmit(
                &vec![1.0; 100_000],
                &spec,
                &mut ChaCha8Rng::seed_from_u64(5),
            );
            channel_llrs(&y, spec.sigma2)
                .iter()
                .filter(|&&l| l < 0.0)
                .count()
        };
        let (low, mid, high) = (rate(0.0), rate(6.0), rate(16.0));
        assert!(low > mid && mid > high);
        assert_eq!(high, 0);
    }
}

//! Maximum-length sequences and padded PMCW chip codes.
//!
//! A maximum-length sequence (MLS) is the output of a linear-feedback shift
//! register whose feedback polynomial is primitive. Over one period of
//! `2^degree - 1` chips its cyclic autocorrelation is two-valued: the period
//! length at lag zero and `-1` everywhere else.
//!
//! The transmit code used by the radar is one MLS period with a single chip
//! appended (a copy of chip 0), which makes the code length a power of two.
//! The padded code no longer has the ideal two-valued autocorrelation; its
//! sidelobes are whatever [`cyclic_autocorrelation`] says they are.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Degree of the canonical LFSR.
pub const CANONICAL_DEGREE: u32 = 7;
/// Feedback taps of the canonical LFSR, `x^7 + x^6 + 1`.
pub const CANONICAL_TAPS: [u32; 2] = [7, 6];
/// All-ones seed for the canonical LFSR.
pub const CANONICAL_SEED: u32 = 0x7f;

/// How the extra chip of a padded code is chosen.
pub const PADDING_RULE: &str = "copy-first-chip";

/// A binary phase code of `n_total = mls_len + 1` chips in `{-1, +1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PnSequence {
    chips: Vec<i8>,
    mls_len: usize,
}

impl PnSequence {
    /// The 128-chip code built from the canonical degree-7 MLS.
    pub fn canonical() -> Self {
        let mls = generate_mls(CANONICAL_DEGREE, &CANONICAL_TAPS, CANONICAL_SEED)
            .expect("canonical LFSR parameters are primitive");
        pad_sequence(&mls).expect("canonical MLS has a valid length")
    }

    /// Generate an MLS and pad it in one step.
    pub fn from_lfsr(degree: u32, taps: &[u32], seed: u32) -> Result<Self> {
        pad_sequence(&generate_mls(degree, taps, seed)?)
    }

    pub fn chips(&self) -> &[i8] {
        &self.chips
    }

    pub fn mls_len(&self) -> usize {
        self.mls_len
    }

    pub fn n_total(&self) -> usize {
        self.chips.len()
    }

    /// Chips lifted to complex values, for use as a correlation reference.
    pub fn to_complex(&self) -> Vec<Complex64> {
        self.chips
            .iter()
            .map(|&c| Complex64::new(f64::from(c), 0.0))
            .collect()
    }

    /// The chips of the underlying MLS period (without the padding chip).
    pub fn mls_chips(&self) -> &[i8] {
        &self.chips[..self.mls_len]
    }
}

/// Run a Fibonacci LFSR for one full period and return its output as chips.
///
/// Stage `k` (1-based) holds bit `k - 1` of `seed`. Each step outputs the
/// last stage, shifts the register towards it and feeds the XOR of the tap
/// stages into stage 1. Output bit `b` becomes chip `1 - 2b`.
///
/// The period is checked explicitly, so taps that do not describe a
/// primitive polynomial are rejected rather than silently producing a short
/// cycle.
pub fn generate_mls(degree: u32, taps: &[u32], seed: u32) -> Result<Vec<i8>> {
    if !(2..=31).contains(&degree) {
        return Err(Error::InvalidLfsr(format!(
            "degree {degree} outside 2..=31"
        )));
    }
    if taps.is_empty() || taps.iter().any(|&t| t == 0 || t > degree) {
        return Err(Error::InvalidLfsr(format!(
            "taps {taps:?} must lie in 1..={degree}"
        )));
    }
    if !taps.contains(&degree) {
        return Err(Error::InvalidLfsr(format!(
            "taps {taps:?} must include the register length {degree}"
        )));
    }
    let mask = (1u32 << degree) - 1;
    let seed = seed & mask;
    if seed == 0 {
        return Err(Error::DegenerateLfsrState);
    }

    let tap_mask = taps.iter().fold(0u32, |m, &t| m | (1 << (t - 1)));
    let period = mask as usize;
    let mut state = seed;
    let mut chips = Vec::with_capacity(period);
    for step in 0..period {
        if step > 0 && state == seed {
            return Err(Error::PeriodBelowMaximum {
                period: step,
                expected: period,
            });
        }
        let out = (state >> (degree - 1)) & 1;
        chips.push(1 - 2 * out as i8);
        let feedback = (state & tap_mask).count_ones() & 1;
        state = ((state << 1) | feedback) & mask;
    }
    if state != seed {
        // Only reachable if the register is not a permutation of its states,
        // which cannot happen while the last stage is tapped.
        return Err(Error::PeriodBelowMaximum {
            period: 0,
            expected: period,
        });
    }
    Ok(chips)
}

/// Append the padding chip (a copy of chip 0) to one MLS period.
pub fn pad_sequence(mls: &[i8]) -> Result<PnSequence> {
    let len = mls.len();
    if len < 3 || !(len + 1).is_power_of_two() {
        return Err(Error::SequenceLength {
            len,
            reason: "an MLS period has length 2^degree - 1",
        });
    }
    if mls.iter().any(|&c| c != 1 && c != -1) {
        return Err(Error::SequenceLength {
            len,
            reason: "chips must be +1 or -1",
        });
    }
    let mut chips = Vec::with_capacity(len + 1);
    chips.extend_from_slice(mls);
    chips.push(mls[0]);
    Ok(PnSequence {
        chips,
        mls_len: len,
    })
}

/// Direct O(N²) cyclic autocorrelation: `r[k] = Σ_n s[(n - k) mod N] · s[n]`.
pub fn cyclic_autocorrelation(seq: &[i8]) -> Vec<i64> {
    let n = seq.len();
    (0..n)
        .map(|lag| {
            (0..n)
                .map(|i| i64::from(seq[(i + n - lag) % n]) * i64::from(seq[i]))
                .sum()
        })
        .collect()
}

/// Direct O(N²) cyclic cross-correlation of `y` against the reference `x`:
/// `p[r] = Σ_n conj(x[(n - r) mod N]) · y[n]`.
///
/// This is the brute-force counterpart of the FFT correlator in
/// [`crate::rd::range_correlate`].
pub fn cyclic_cross_correlation(x: &[Complex64], y: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = x.len();
    if y.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "reference has {n} chips, signal has {}",
            y.len()
        )));
    }
    Ok((0..n)
        .map(|r| {
            (0..n)
                .map(|i| x[(i + n - r) % n].conj() * y[i])
                .sum()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent enumeration of the recurrence `a[k + d] = XOR of a[k + d - t]`
    /// over the taps, starting from the register read out last stage first.
    fn enumerate_by_recurrence(degree: u32, taps: &[u32], seed: u32) -> Vec<i8> {
        let d = degree as usize;
        let period = (1usize << d) - 1;
        // Stage d is emitted first, then stage d-1, ...
        let mut bits: Vec<u32> = (0..d).rev().map(|k| (seed >> k) & 1).collect();
        while bits.len() < period {
            let k = bits.len();
            let next = taps.iter().fold(0, |acc, &t| acc ^ bits[k - t as usize]);
            bits.push(next);
        }
        bits.iter().map(|&b| 1 - 2 * b as i8).collect()
    }

    #[test]
    fn degree_seven_balance() {
        let mls = generate_mls(7, &[7, 6], 0x7f).unwrap();
        assert_eq!(mls.len(), 127);
        let plus = mls.iter().filter(|&&c| c == 1).count();
        let minus = mls.iter().filter(|&&c| c == -1).count();
        let mut counts = [plus, minus];
        counts.sort();
        assert_eq!(counts, [63, 64]);
    }

    #[test]
    fn matches_recurrence_enumeration() {
        for (degree, taps) in [(3, vec![3, 2]), (5, vec![5, 3]), (7, vec![7, 6])] {
            let seed = (1 << degree) - 1;
            assert_eq!(
                generate_mls(degree, &taps, seed).unwrap(),
                enumerate_by_recurrence(degree, &taps, seed)
            );
        }
    }

    #[test]
    fn degree_three_autocorrelation() {
        let mls = generate_mls(3, &[3, 2], 0b111).unwrap();
        assert_eq!(cyclic_autocorrelation(&mls), vec![7, -1, -1, -1, -1, -1, -1]);
    }

    #[test]
    fn zero_seed_is_degenerate() {
        assert!(matches!(
            generate_mls(7, &[7, 6], 0),
            Err(Error::DegenerateLfsrState)
        ));
    }

    #[test]
    fn non_primitive_taps_rejected() {
        // x^4 + x^2 + 1 = (x^2 + x + 1)^2
        let err = generate_mls(4, &[4, 2], 0b1111).unwrap_err();
        assert!(matches!(err, Error::PeriodBelowMaximum { expected: 15, .. }));
        assert!(err.to_string().contains("sequence period below maximum"));
    }

    #[test]
    fn bad_taps_rejected() {
        assert!(generate_mls(7, &[8, 6], 1).is_err());
        assert!(generate_mls(7, &[6, 5], 1).is_err());
        assert!(generate_mls(1, &[1], 1).is_err());
    }

    #[test]
    fn padding_appends_first_chip() {
        let mls = generate_mls(7, &[7, 6], 0x7f).unwrap();
        let code = pad_sequence(&mls).unwrap();
        assert_eq!(code.n_total(), 128);
        assert_eq!(code.mls_len(), 127);
        assert_eq!(&code.chips()[..127], &mls[..]);
        assert_eq!(code.chips()[127], mls[0]);
        assert!(code.chips().iter().all(|&c| c == 1 || c == -1));
        assert_eq!(cyclic_autocorrelation(code.chips())[0], 128);
    }

    #[test]
    fn padding_rejects_wrong_length() {
        assert!(pad_sequence(&[1; 126]).is_err());
        assert!(pad_sequence(&[1; 128]).is_err());
        assert!(pad_sequence(&[]).is_err());
    }

    #[test]
    fn canonical_code_is_padded_mls() {
        let code = PnSequence::canonical();
        let auto = cyclic_autocorrelation(code.mls_chips());
        assert_eq!(auto[0], 127);
        assert!(auto[1..].iter().all(|&v| v == -1));
    }

    #[test]
    fn shifted_copy_peaks_at_shift() {
        let code = PnSequence::canonical().to_complex();
        let n = code.len();
        for shift in [0, 1, 17, 127] {
            let shifted: Vec<_> = (0..n).map(|i| code[(i + n - shift) % n]).collect();
            let p = cyclic_cross_correlation(&code, &shifted).unwrap();
            assert_eq!(p[shift], Complex64::new(n as f64, 0.0));
            let second = p
                .iter()
                .enumerate()
                .filter(|&(r, _)| r != shift)
                .map(|(_, v)| v.norm())
                .fold(0.0, f64::max);
            assert!(second < n as f64);
        }
    }

    #[test]
    fn cross_correlation_length_mismatch() {
        let x = vec![Complex64::new(1.0, 0.0); 4];
        assert!(cyclic_cross_correlation(&x, &x[..3]).is_err());
    }
}

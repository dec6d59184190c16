//! Point-target scenes and synthesis of the sampled baseband receive matrix.
//!
//! Sample `(n, m)` of the receive matrix is taken at `t = n·T + m·T_seq`.
//! Each target contributes its code delayed by a whole number of chips
//! (cyclically), scaled by its complex amplitude and rotated by the carrier
//! phase of the round-trip delay at that instant:
//!
//! ```text
//! y[n, m] = Σ_k γ_k · x[(n - d_k) mod N] · exp(-j·2π·f_c·τ_k(t)) + w[n, m]
//! τ_k(t)  = 2·r_k / c0 + 2·v_k·t / c0
//! d_k     = round(2·r_k / (c0·T))
//! ```
//!
//! The envelope delay `d_k` is frozen at the start of the CPI while the phase
//! follows the target continuously. Noise is circular complex Gaussian with
//! total variance `σ² = 10^(-snr_db / 10)`, i.e. the SNR is quoted per raw
//! sample against a unit-amplitude target.
//!
//! Doppler sign convention: with the slow-time DFT using `exp(-j2π v m / M)`,
//! a receding target (`v > 0`) lands in the upper half of the Doppler axis.
//! See [`predicted_doppler_bin`].

use std::f64::consts::TAU;

use ndarray::Array2;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequences::PnSequence;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Radar front-end and CPI parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RadarConfig {
    /// Carrier frequency f_c in Hz.
    pub carrier_freq_hz: f64,
    /// Chip duration T in seconds (also the sampling period).
    pub chip_duration_s: f64,
    /// Chips per code repetition, N.
    pub n_fast: usize,
    /// Raw code repetitions per CPI.
    pub m_raw: usize,
    /// Number of consecutive raw pulses summed into one slow-time sample.
    pub accumulation: usize,
}

impl Default for RadarConfig {
    /// 79 GHz, 10 ns chips, 128-chip code, 10240 pulses accumulated by 20.
    fn default() -> Self {
        RadarConfig {
            carrier_freq_hz: 79e9,
            chip_duration_s: 10e-9,
            n_fast: 128,
            m_raw: 10240,
            accumulation: 20,
        }
    }
}

impl RadarConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.carrier_freq_hz.is_finite() && self.carrier_freq_hz > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "carrier_freq_hz must be positive, got {}",
                self.carrier_freq_hz
            )));
        }
        if !(self.chip_duration_s.is_finite() && self.chip_duration_s > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "chip_duration_s must be positive, got {}",
                self.chip_duration_s
            )));
        }
        if self.n_fast == 0 || self.m_raw == 0 || self.accumulation == 0 {
            return Err(Error::InvalidConfig(
                "n_fast, m_raw and accumulation must be nonzero".into(),
            ));
        }
        if !self.m_raw.is_multiple_of(self.accumulation) {
            return Err(Error::InvalidConfig(format!(
                "m_raw = {} is not a multiple of accumulation = {}",
                self.m_raw, self.accumulation
            )));
        }
        Ok(())
    }

    /// Slow-time samples after accumulation, M = m_raw / A.
    pub fn m_slow(&self) -> usize {
        self.m_raw / self.accumulation
    }

    /// Duration of one code repetition, T_seq = N·T.
    pub fn sequence_duration_s(&self) -> f64 {
        self.n_fast as f64 * self.chip_duration_s
    }

    /// Range bin spacing c0·T/2.
    pub fn range_resolution_m(&self) -> f64 {
        SPEED_OF_LIGHT * self.chip_duration_s / 2.0
    }

    /// Doppler bin spacing expressed as radial velocity.
    pub fn velocity_resolution_mps(&self) -> f64 {
        SPEED_OF_LIGHT
            / (2.0
                * self.carrier_freq_hz
                * self.accumulation as f64
                * self.sequence_duration_s()
                * self.m_slow() as f64)
    }
}

/// Unambiguous range `c0·N·T/2` and unambiguous velocity half-interval
/// `c0 / (4·f_c·A·T_seq)`.
pub fn unambiguous_limits(config: &RadarConfig) -> (f64, f64) {
    let range = SPEED_OF_LIGHT * config.n_fast as f64 * config.chip_duration_s / 2.0;
    let velocity = SPEED_OF_LIGHT
        / (4.0
            * config.carrier_freq_hz
            * config.accumulation as f64
            * config.sequence_duration_s());
    (range, velocity)
}

/// Integer chip delay of a target at `range_m`.
pub fn range_bin(config: &RadarConfig, range_m: f64) -> i64 {
    (2.0 * range_m / (SPEED_OF_LIGHT * config.chip_duration_s)).round() as i64
}

/// Doppler bin (fractional, wrapped into `[0, M)`) at which a target with
/// radial velocity `velocity_mps` appears after accumulation and the
/// slow-time DFT.
///
/// Derived from the phase advance between accumulated pulses,
/// `-2π·f_c·2v·A·T_seq / c0`, which the DFT maps to bin `M·advance / 2π`.
pub fn predicted_doppler_bin(config: &RadarConfig, velocity_mps: f64) -> f64 {
    let m = config.m_slow() as f64;
    let cycles_per_pulse = -2.0
        * config.carrier_freq_hz
        * velocity_mps
        * config.accumulation as f64
        * config.sequence_duration_s()
        / SPEED_OF_LIGHT;
    (cycles_per_pulse * m).rem_euclid(m)
}

/// Radial velocity that lands exactly on signed Doppler bin `bin`
/// (`-M/2 < bin < M/2`).
pub fn velocity_for_doppler_bin(config: &RadarConfig, bin: i64) -> f64 {
    -(bin as f64) * config.velocity_resolution_mps()
}

/// A point scatterer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Target {
    /// Range at the start of the CPI, meters.
    pub range_m: f64,
    /// Radial velocity, m/s, positive when receding.
    pub velocity_mps: f64,
    /// Complex reflection amplitude.
    #[serde(with = "complex_pair")]
    pub gamma: Complex64,
}

impl Target {
    pub fn new(range_m: f64, velocity_mps: f64, gamma: Complex64) -> Self {
        Target {
            range_m,
            velocity_mps,
            gamma,
        }
    }
}

/// Targets plus the noise description used to synthesize one CPI.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scene {
    #[serde(default)]
    pub targets: Vec<Target>,
    /// Per-sample SNR in dB for a unit target; `None` means noiseless.
    #[serde(default)]
    pub snr_db: Option<f64>,
    /// Seed of the noise generator.
    #[serde(default)]
    pub rng_seed: u64,
}

impl Scene {
    pub fn noiseless(targets: Vec<Target>) -> Self {
        Scene {
            targets,
            snr_db: None,
            rng_seed: 0,
        }
    }

    pub fn with_noise(targets: Vec<Target>, snr_db: f64, rng_seed: u64) -> Self {
        Scene {
            targets,
            snr_db: Some(snr_db),
            rng_seed,
        }
    }

    /// Total complex noise variance σ², zero when noiseless.
    pub fn noise_variance(&self) -> f64 {
        self.snr_db.map_or(0.0, |snr| 10f64.powf(-snr / 10.0))
    }

    /// Check every target against the unambiguous window of `config`.
    pub fn validate(&self, config: &RadarConfig) -> Result<()> {
        if let Some(snr) = self.snr_db {
            if !snr.is_finite() {
                return Err(Error::InvalidConfig(format!("snr_db must be finite, got {snr}")));
            }
        }
        let (range_limit, velocity_limit) = unambiguous_limits(config);
        for t in &self.targets {
            let bin = range_bin(config, t.range_m);
            if !(t.range_m >= 0.0 && t.range_m < range_limit) || bin >= config.n_fast as i64 {
                return Err(Error::RangeAlias {
                    range_m: t.range_m,
                    limit_m: range_limit,
                });
            }
            // Written negated so that NaN is rejected too.
            #[allow(clippy::neg_cmp_op_on_partial_ord)]
            if !(t.velocity_mps.abs() < velocity_limit) {
                return Err(Error::VelocityAlias {
                    velocity_mps: t.velocity_mps,
                    limit_mps: velocity_limit,
                });
            }
            if !(t.gamma.re.is_finite() && t.gamma.im.is_finite()) {
                return Err(Error::InvalidConfig("target gamma must be finite".into()));
            }
        }
        Ok(())
    }
}

/// Fast-time × slow-time sample matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct AdcCube {
    data: Array2<Complex64>,
    quantized: bool,
}

impl AdcCube {
    /// Wrap full-precision samples, shape `(n_fast, pulses)`.
    pub fn new(data: Array2<Complex64>) -> Self {
        AdcCube {
            data,
            quantized: false,
        }
    }

    /// Wrap samples that are already one-bit valued. Fails if any component
    /// is not exactly ±1.
    pub fn from_one_bit(data: Array2<Complex64>) -> Result<Self> {
        if data
            .iter()
            .any(|z| z.re.abs() != 1.0 || z.im.abs() != 1.0)
        {
            return Err(Error::Malformed(
                "one-bit cube contains values other than ±1 ± j".into(),
            ));
        }
        Ok(AdcCube {
            data,
            quantized: true,
        })
    }

    pub fn data(&self) -> &Array2<Complex64> {
        &self.data
    }

    pub fn into_data(self) -> Array2<Complex64> {
        self.data
    }

    pub fn is_quantized(&self) -> bool {
        self.quantized
    }

    pub fn n_fast(&self) -> usize {
        self.data.nrows()
    }

    pub fn pulses(&self) -> usize {
        self.data.ncols()
    }
}

/// Sample the baseband receive signal of `scene` on the `(N, m_raw)` grid.
pub fn synthesize(config: &RadarConfig, code: &PnSequence, scene: &Scene) -> Result<AdcCube> {
    config.validate()?;
    if code.n_total() != config.n_fast {
        return Err(Error::DimensionMismatch(format!(
            "code has {} chips, config expects n_fast = {}",
            code.n_total(),
            config.n_fast
        )));
    }
    scene.validate(config)?;

    let n = config.n_fast;
    let m_raw = config.m_raw;
    let chip = config.chip_duration_s;
    let t_seq = config.sequence_duration_s();
    let mut data = Array2::<Complex64>::zeros((n, m_raw));

    for target in &scene.targets {
        let delay = range_bin(config, target.range_m) as usize;
        // Carrier cycles of the static delay, and cycles per second of the
        // moving part. Only the fractional part of the total enters the phase.
        let static_cycles = (config.carrier_freq_hz * 2.0 * target.range_m / SPEED_OF_LIGHT).fract();
        let doppler_rate = config.carrier_freq_hz * 2.0 * target.velocity_mps / SPEED_OF_LIGHT;
        let delayed: Vec<Complex64> = (0..n)
            .map(|i| target.gamma * f64::from(code.chips()[(i + n - delay) % n]))
            .collect();
        for ((i, m), y) in data.indexed_iter_mut() {
            let t = i as f64 * chip + m as f64 * t_seq;
            let cycles = (static_cycles + doppler_rate * t).fract();
            *y += delayed[i] * Complex64::cis(-TAU * cycles);
        }
    }

    if let Some(snr_db) = scene.snr_db {
        let sigma = (10f64.powf(-snr_db / 10.0) / 2.0).sqrt();
        let mut rng = ChaCha8Rng::seed_from_u64(scene.rng_seed);
        // Column-major draw order: pulse by pulse, real then imaginary.
        for m in 0..m_raw {
            for i in 0..n {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                data[[i, m]] += Complex64::new(sigma * re, sigma * im);
            }
        }
    }

    Ok(AdcCube::new(data))
}

mod complex_pair {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn small_config() -> RadarConfig {
        RadarConfig {
            m_raw: 40,
            accumulation: 4,
            ..RadarConfig::default()
        }
    }

    #[test]
    fn paper_limits() {
        let (range, velocity) = unambiguous_limits(&RadarConfig::default());
        assert_relative_eq!(range, 192.0, max_relative = 1e-3);
        assert_relative_eq!(range, SPEED_OF_LIGHT * 128.0 * 10e-9 / 2.0, max_relative = 1e-15);
        assert_relative_eq!(velocity, SPEED_OF_LIGHT / (4.0 * 79e9 * 25.6e-6), max_relative = 1e-12);
        assert!((velocity - 37.06).abs() < 0.01);
    }

    #[test]
    fn doubling_chip_duration() {
        let base = RadarConfig::default();
        let doubled = RadarConfig {
            chip_duration_s: 2.0 * base.chip_duration_s,
            ..base
        };
        let (r0, v0) = unambiguous_limits(&base);
        let (r1, v1) = unambiguous_limits(&doubled);
        assert_relative_eq!(r1, 2.0 * r0, max_relative = 1e-15);
        assert_relative_eq!(v1, v0 / 2.0, max_relative = 1e-15);
    }

    #[test]
    fn config_validation() {
        assert!(RadarConfig::default().validate().is_ok());
        assert_eq!(RadarConfig::default().m_slow(), 512);
        let bad = RadarConfig {
            m_raw: 10241,
            ..RadarConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = RadarConfig {
            chip_duration_s: 0.0,
            ..RadarConfig::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn zero_range_static_target_is_the_code() {
        let cfg = small_config();
        let code = PnSequence::canonical();
        let scene = Scene::noiseless(vec![Target::new(0.0, 0.0, Complex64::new(1.0, 0.0))]);
        let cube = synthesize(&cfg, &code, &scene).unwrap();
        for m in 0..cfg.m_raw {
            for i in 0..cfg.n_fast {
                assert_eq!(cube.data()[[i, m]], Complex64::new(f64::from(code.chips()[i]), 0.0));
            }
        }
    }

    #[test]
    fn two_bin_delay() {
        let cfg = small_config();
        let code = PnSequence::canonical();
        let range = 3.0;
        let scene = Scene::noiseless(vec![Target::new(range, 0.0, Complex64::new(1.0, 0.0))]);
        let cube = synthesize(&cfg, &code, &scene).unwrap();
        assert_eq!(range_bin(&cfg, range), 2);
        let phase = Complex64::cis(-TAU * cfg.carrier_freq_hz * 2.0 * range / SPEED_OF_LIGHT);
        for m in [0, 7, 39] {
            for i in 0..128 {
                let expected = phase * f64::from(code.chips()[(i + 126) % 128]);
                assert!((cube.data()[[i, m]] - expected).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn range_alias_rejected() {
        let cfg = small_config();
        let code = PnSequence::canonical();
        for range in [-1.0, 192.0, 191.9, 500.0] {
            let scene = Scene::noiseless(vec![Target::new(range, 0.0, Complex64::new(1.0, 0.0))]);
            assert!(matches!(
                synthesize(&cfg, &code, &scene),
                Err(Error::RangeAlias { .. })
            ));
        }
    }

    #[test]
    fn velocity_alias_rejected() {
        let cfg = small_config();
        let code = PnSequence::canonical();
        let (_, vmax) = unambiguous_limits(&cfg);
        let scene = Scene::noiseless(vec![Target::new(10.0, vmax * 1.01, Complex64::new(1.0, 0.0))]);
        assert!(matches!(
            synthesize(&cfg, &code, &scene),
            Err(Error::VelocityAlias { .. })
        ));
    }

    #[test]
    fn code_length_mismatch() {
        let cfg = RadarConfig {
            n_fast: 64,
            ..small_config()
        };
        let scene = Scene::noiseless(vec![]);
        assert!(matches!(
            synthesize(&cfg, &PnSequence::canonical(), &scene),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn noise_variance_matches_snr() {
        let cfg = RadarConfig::default();
        let scene = Scene::with_noise(vec![], 10.0, 1234);
        let cube = synthesize(&cfg, &PnSequence::canonical(), &scene).unwrap();
        let n = cube.data().len() as f64;
        let mean: Complex64 = cube.data().iter().sum::<Complex64>() / n;
        let var = cube.data().iter().map(|z| (z - mean).norm_sqr()).sum::<f64>() / n;
        assert_relative_eq!(var, 0.1, max_relative = 0.05);
        assert_eq!(scene.noise_variance(), 0.1);
    }

    #[test]
    fn deterministic_for_same_seed() {
        let cfg = small_config();
        let code = PnSequence::canonical();
        let scene = Scene::with_noise(vec![Target::new(30.0, 5.0, Complex64::new(0.3, 0.4))], 10.0, 99);
        let a = synthesize(&cfg, &code, &scene).unwrap();
        let b = synthesize(&cfg, &code, &scene).unwrap();
        assert_eq!(a, b);
        let other = Scene { rng_seed: 100, ..scene };
        assert_ne!(a, synthesize(&cfg, &code, &other).unwrap());
    }

    #[test]
    fn moving_target_phase_progression() {
        let cfg = small_config();
        let code = PnSequence::canonical();
        let v = 12.5;
        let scene = Scene::noiseless(vec![Target::new(45.0, v, Complex64::new(0.7, -0.2))]);
        let cube = synthesize(&cfg, &code, &scene).unwrap();
        let bin = range_bin(&cfg, 45.0) as usize;
        let expected = Complex64::cis(
            -TAU * cfg.carrier_freq_hz * 2.0 * v * cfg.sequence_duration_s() / SPEED_OF_LIGHT,
        );
        for m in 0..cfg.m_raw - 1 {
            let ratio = cube.data()[[bin, m + 1]] / cube.data()[[bin, m]];
            assert!((ratio - expected).norm() < 1e-9);
        }
    }

    #[test]
    fn predicted_bin_round_trip() {
        let cfg = RadarConfig::default();
        for bin in [-255i64, -3, 0, 1, 100, 255] {
            let v = velocity_for_doppler_bin(&cfg, bin);
            let predicted = predicted_doppler_bin(&cfg, v);
            let expected = bin.rem_euclid(512) as f64;
            assert!((predicted - expected).abs() < 1e-6, "{bin}: {predicted}");
        }
        // receding targets land in the upper half
        assert!(predicted_doppler_bin(&cfg, 5.0) > 256.0);
    }

    #[test]
    fn target_toml_round_trip() {
        let t = Target::new(12.0, -3.5, Complex64::new(0.5, -0.25));
        let text = toml::to_string(&t).unwrap();
        assert!(text.contains("gamma = [0.5, -0.25]"));
        assert_eq!(toml::from_str::<Target>(&text).unwrap(), t);
    }
}

//! Conventional range-Doppler processing.
//!
//! The chain is: coherent accumulation of consecutive raw pulses, cyclic
//! correlation of every fast-time column against the transmit code, then a
//! DFT along slow time for every range row. No window, no zero padding and no
//! normalization are applied; Doppler bins are stored in natural FFT order.

use ndarray::{Array2, Axis};
use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::scene::{AdcCube, RadarConfig};
use crate::sequences::PnSequence;

/// Fast-time correlation output, range bin × slow-time pulse.
#[derive(Debug, Clone, PartialEq)]
pub struct RangeProfile {
    pub data: Array2<Complex64>,
}

/// Range bin × Doppler bin map.
#[derive(Debug, Clone, PartialEq)]
pub struct RdMap {
    data: Array2<Complex64>,
    normalized: bool,
}

impl RdMap {
    pub fn new(data: Array2<Complex64>) -> Self {
        RdMap {
            data,
            normalized: false,
        }
    }

    pub(crate) fn normalized_from(data: Array2<Complex64>) -> Self {
        RdMap {
            data,
            normalized: true,
        }
    }

    pub fn data(&self) -> &Array2<Complex64> {
        &self.data
    }

    pub fn into_data(self) -> Array2<Complex64> {
        self.data
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn n_range(&self) -> usize {
        self.data.nrows()
    }

    pub fn n_doppler(&self) -> usize {
        self.data.ncols()
    }

    /// Magnitudes of the map.
    pub fn magnitude(&self) -> Array2<f64> {
        self.data.mapv(|z| z.norm())
    }

    /// `(range_bin, doppler_bin)` of the largest magnitude. Ties resolve to
    /// the first cell in row-major order.
    pub fn argmax(&self) -> (usize, usize) {
        let mut best = (0, 0);
        let mut best_mag = f64::NEG_INFINITY;
        for ((r, v), z) in self.data.indexed_iter() {
            let mag = z.norm_sqr();
            if mag > best_mag {
                best_mag = mag;
                best = (r, v);
            }
        }
        best
    }
}

/// Sum each run of `factor` consecutive pulses.
///
/// The result is full precision even when the input was one-bit valued.
pub fn accumulate(cube: &AdcCube, factor: usize) -> Result<AdcCube> {
    let pulses = cube.pulses();
    if factor == 0 || !pulses.is_multiple_of(factor) {
        return Err(Error::NonDivisibleAccumulation {
            m_raw: pulses,
            factor,
        });
    }
    let data = cube.data();
    let mut out = Array2::<Complex64>::zeros((cube.n_fast(), pulses / factor));
    for (m, mut col) in out.axis_iter_mut(Axis(1)).enumerate() {
        for k in m * factor..(m + 1) * factor {
            col += &data.column(k);
        }
    }
    Ok(AdcCube::new(out))
}

/// Cyclic correlation of every fast-time column against `code`,
/// `p[r, m] = Σ_n conj(x[(n - r) mod N]) · y[n, m]`, evaluated as
/// `IFFT(conj(FFT(x)) · FFT(y))`.
pub fn range_correlate(cube: &AdcCube, code: &PnSequence) -> Result<RangeProfile> {
    correlate_columns(cube.data(), &code.to_complex())
}

/// [`range_correlate`] against an arbitrary complex reference.
pub fn correlate_columns(data: &Array2<Complex64>, reference: &[Complex64]) -> Result<RangeProfile> {
    let n = data.nrows();
    if reference.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "reference has {} chips, cube has {} fast-time samples",
            reference.len(),
            n
        )));
    }
    let mut planner = FftPlanner::<f64>::new();
    let forward = planner.plan_fft_forward(n);
    let inverse = planner.plan_fft_inverse(n);

    let mut kernel = reference.to_vec();
    forward.process(&mut kernel);
    let scale = 1.0 / n as f64;
    for k in kernel.iter_mut() {
        *k = k.conj() * scale;
    }

    let mut out = Array2::<Complex64>::zeros(data.raw_dim());
    let mut buf = vec![Complex64::default(); n];
    for (src, mut dst) in data.axis_iter(Axis(1)).zip(out.axis_iter_mut(Axis(1))) {
        buf.iter_mut().zip(src.iter()).for_each(|(b, &s)| *b = s);
        forward.process(&mut buf);
        buf.iter_mut().zip(&kernel).for_each(|(b, k)| *b *= k);
        inverse.process(&mut buf);
        dst.iter_mut().zip(&buf).for_each(|(d, &b)| *d = b);
    }
    Ok(RangeProfile { data: out })
}

/// DFT along slow time for every range row, `q[r, v] = Σ_m p[r, m]·exp(-j2π·v·m/M)`.
pub fn doppler_dft(profile: &RangeProfile) -> RdMap {
    let m = profile.data.ncols();
    let mut out = profile.data.clone();
    if m == 0 {
        return RdMap::new(out);
    }
    let fft = FftPlanner::<f64>::new().plan_fft_forward(m);
    let mut buf = vec![Complex64::default(); m];
    for mut row in out.axis_iter_mut(Axis(0)) {
        buf.iter_mut().zip(row.iter()).for_each(|(b, &s)| *b = s);
        fft.process(&mut buf);
        row.iter_mut().zip(&buf).for_each(|(d, &b)| *d = b);
    }
    RdMap::new(out)
}

/// Accumulate, correlate and Doppler-transform a raw `(N, m_raw)` cube.
pub fn process(cube: &AdcCube, code: &PnSequence, config: &RadarConfig) -> Result<RdMap> {
    config.validate()?;
    if cube.n_fast() != config.n_fast || cube.pulses() != config.m_raw {
        return Err(Error::DimensionMismatch(format!(
            "cube is {}×{}, config expects {}×{}",
            cube.n_fast(),
            cube.pulses(),
            config.n_fast,
            config.m_raw
        )));
    }
    let accumulated = accumulate(cube, config.accumulation)?;
    let profile = range_correlate(&accumulated, code)?;
    Ok(doppler_dft(&profile))
}

//! Reconstruction and sidelobe metrics on peak-normalized RD maps.
//!
//! All metrics work on magnitudes of maps divided by their own peak
//! magnitude. PSL and ISL are measured along one Doppler column around the
//! main-lobe range bin `r̂`:
//!
//! ```text
//! MSE   = 1/(N·M) · Σ_v Σ_r (|a[r,v]| - |b[r,v]|)²
//! PSL_v = 20·log10( max_{r ∉ guard(r̂)} |q[r,v]| )
//! ISL_v = 20·log10( Σ_{r ∉ guard(r̂)} |q[r,v]|² )
//! ```
//!
//! ISL keeps the `20·log10` prefactor on a power sum by default; pass
//! [`IslScale::Power`] for the conventional `10·log10`.
//!
//! The guard window excludes range bins within cyclic distance `guard` of
//! `r̂` (the range axis of a cyclic correlation wraps). `guard = 0` excludes
//! only `r̂` itself.

use std::fmt;

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::rd::RdMap;

/// Scale applied to the ISL power sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IslScale {
    /// `20·log10(Σ|q|²)`.
    #[default]
    Amplitude,
    /// `10·log10(Σ|q|²)`.
    Power,
}

impl IslScale {
    fn factor(self) -> f64 {
        match self {
            IslScale::Amplitude => 20.0,
            IslScale::Power => 10.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            IslScale::Amplitude => "20log10",
            IslScale::Power => "10log10",
        }
    }
}

/// Divide every element by the peak magnitude.
pub fn normalize_peak(map: &RdMap) -> Result<RdMap> {
    let peak = map.data().iter().map(|z| z.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return Err(Error::DegenerateMap);
    }
    if !peak.is_finite() {
        return Err(Error::Malformed("map contains non-finite values".into()));
    }
    Ok(RdMap::normalized_from(map.data().mapv(|z| z / peak)))
}

fn require_normalized(map: &RdMap) -> Result<()> {
    if map.is_normalized() {
        Ok(())
    } else {
        Err(Error::NotNormalized)
    }
}

/// Mean squared difference of magnitudes of two normalized maps.
pub fn mse(a: &RdMap, b: &RdMap) -> Result<f64> {
    require_normalized(a)?;
    require_normalized(b)?;
    if a.data().dim() != b.data().dim() {
        return Err(Error::DimensionMismatch(format!(
            "maps are {:?} and {:?}",
            a.data().dim(),
            b.data().dim()
        )));
    }
    let cells = a.data().len();
    if cells == 0 {
        return Ok(0.0);
    }
    let sum: f64 = a
        .data()
        .iter()
        .zip(b.data().iter())
        .map(|(x, y)| (x.norm() - y.norm()).powi(2))
        .sum();
    Ok(sum / cells as f64)
}

/// Magnitudes of one Doppler column plus its peak range bin.
fn column_with_peak(map: &RdMap, doppler_bin: usize) -> Result<(Vec<f64>, usize)> {
    require_normalized(map)?;
    if doppler_bin >= map.n_doppler() {
        return Err(Error::OutOfRange {
            index: doppler_bin,
            len: map.n_doppler(),
        });
    }
    let column: Vec<f64> = map.data().column(doppler_bin).iter().map(|z| z.norm()).collect();
    let mut peak = 0;
    for (r, &v) in column.iter().enumerate() {
        if v > column[peak] {
            peak = r;
        }
    }
    if column.is_empty() || column[peak] == 0.0 {
        return Err(Error::ZeroColumn(doppler_bin));
    }
    Ok((column, peak))
}

fn sidelobes(column: &[f64], peak: usize, guard: usize) -> Result<impl Iterator<Item = f64> + '_> {
    let n = column.len();
    if 2 * guard + 1 >= n {
        return Err(Error::GuardTooWide { guard, len: n });
    }
    Ok(column.iter().enumerate().filter_map(move |(r, &v)| {
        let d = r.abs_diff(peak);
        let cyclic = d.min(n - d);
        (cyclic > guard).then_some(v)
    }))
}

/// Peak sidelobe level in dB and the main-lobe range bin of one column.
pub fn psl(map: &RdMap, doppler_bin: usize, guard: usize) -> Result<(f64, usize)> {
    let (column, peak) = column_with_peak(map, doppler_bin)?;
    let max = sidelobes(&column, peak, guard)?.fold(0.0, f64::max);
    Ok((20.0 * max.log10(), peak))
}

/// Integrated sidelobe level in dB with the default `20·log10` scale.
///
/// Returns negative infinity when every sidelobe cell is exactly zero.
pub fn isl(map: &RdMap, doppler_bin: usize, guard: usize) -> Result<f64> {
    isl_scaled(map, doppler_bin, guard, IslScale::Amplitude)
}

/// Integrated sidelobe level with an explicit dB scale.
pub fn isl_scaled(map: &RdMap, doppler_bin: usize, guard: usize, scale: IslScale) -> Result<f64> {
    let (column, peak) = column_with_peak(map, doppler_bin)?;
    let power: f64 = sidelobes(&column, peak, guard)?.map(|v| v * v).sum();
    Ok(scale.factor() * power.log10())
}

/// Knobs for [`evaluate`].
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MetricOptions {
    pub guard: usize,
    /// Column for PSL/ISL; defaults to the column of the map's global peak.
    pub doppler_bin: Option<usize>,
    pub isl_scale: IslScale,
}

/// Metrics of one map against a reference.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricReport {
    pub mse: f64,
    pub psl_db: f64,
    pub isl_db: f64,
    pub doppler_bin: usize,
    pub peak_range_bin: usize,
    pub guard: usize,
    pub isl_scale: IslScale,
}

/// Normalization convention recorded alongside every report.
pub const NORMALIZATION: &str = "peak-amplitude";

/// Column names of [`MetricReport::csv_row`].
pub const CSV_HEADER: &str =
    "label,mse,psl_db,isl_db,doppler_bin,peak_range_bin,guard,isl_scale,normalization";

impl MetricReport {
    /// Flat `key = value` record.
    pub fn to_key_value(&self) -> String {
        format!(
            "mse = {}\npsl_db = {}\nisl_db = {}\ndoppler_bin = {}\npeak_range_bin = {}\nguard = {}\nisl_scale = {}\nnormalization = {}\n",
            fmt_f64(self.mse),
            fmt_f64(self.psl_db),
            fmt_f64(self.isl_db),
            self.doppler_bin,
            self.peak_range_bin,
            self.guard,
            self.isl_scale.as_str(),
            NORMALIZATION,
        )
    }

    /// One CSV row matching [`CSV_HEADER`].
    pub fn csv_row(&self, label: &str) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            label,
            fmt_f64(self.mse),
            fmt_f64(self.psl_db),
            fmt_f64(self.isl_db),
            self.doppler_bin,
            self.peak_range_bin,
            self.guard,
            self.isl_scale.as_str(),
            NORMALIZATION,
        )
    }
}

impl fmt::Display for MetricReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_key_value())
    }
}

/// Infinite values print as `-inf`/`inf` so the sentinel is unambiguous.
/// Small magnitudes such as MSE switch to scientific notation.
fn fmt_f64(x: f64) -> String {
    if x == f64::NEG_INFINITY {
        "-inf".into()
    } else if x == f64::INFINITY {
        "inf".into()
    } else if x == 0.0 || (1e-3..1e6).contains(&x.abs()) {
        format!("{x:.6}")
    } else {
        format!("{x:.6e}")
    }
}

/// Normalize `map` and `reference`, then compute MSE against the reference
/// and PSL/ISL of `map`.
pub fn evaluate(map: &RdMap, reference: &RdMap, options: &MetricOptions) -> Result<MetricReport> {
    let map = if map.is_normalized() { map.clone() } else { normalize_peak(map)? };
    let reference = if reference.is_normalized() {
        reference.clone()
    } else {
        normalize_peak(reference)?
    };
    let mse = mse(&map, &reference)?;
    let doppler_bin = options.doppler_bin.unwrap_or_else(|| map.argmax().1);
    let (psl_db, peak_range_bin) = psl(&map, doppler_bin, options.guard)?;
    let isl_db = isl_scaled(&map, doppler_bin, options.guard, options.isl_scale)?;
    Ok(MetricReport {
        mse,
        psl_db,
        isl_db,
        doppler_bin,
        peak_range_bin,
        guard: options.guard,
        isl_scale: options.isl_scale,
    })
}

/// `20·log10` of the normalized magnitude of one Doppler column, floored.
pub fn column_db(map: &RdMap, doppler_bin: usize, floor_db: f64) -> Result<Vec<f64>> {
    require_normalized(map)?;
    if doppler_bin >= map.n_doppler() {
        return Err(Error::OutOfRange {
            index: doppler_bin,
            len: map.n_doppler(),
        });
    }
    Ok(map
        .data()
        .column(doppler_bin)
        .iter()
        .map(|z| (20.0 * z.norm().log10()).max(floor_db))
        .collect())
}

/// Peak-normalized magnitude matrix.
pub fn normalized_magnitude(map: &RdMap) -> Result<Array2<f64>> {
    Ok(normalize_peak(map)?.magnitude())
}

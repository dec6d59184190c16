//! Paired training corpora: one-bit ADC cubes with high-resolution
//! reference RD maps.
//!
//! A dataset directory holds `manifest.txt` (TOML) and `records.bin`. Each
//! record pairs a one-bit cube synthesized at the record's SNR with the RD
//! map of the same geometry synthesized at the reference SNR (50 dB by
//! default) and processed at full precision.
//!
//! `records.bin` layout, all integers little-endian:
//!
//! ```text
//! header   magic "PMCWDSET" (8) | version u32 | record_count u32
//! record   record_id u64 | payload_len u64 | payload | crc32(payload) u32
//! payload  snr_db f64 | noise_seed u64 | reference_snr_db f64 | reference_seed u64
//!          target_count u32 | target_count × (range_m, velocity_mps, gamma_re, gamma_im) f64
//!          n_fast u32 | m_raw u32 | sign bits, ceil(2·n_fast·m_raw / 8) bytes
//!          n_range u32 | n_doppler u32 | n_range·n_doppler × (re f32, im f32), row-major
//! ```
//!
//! Sign bits are packed LSB first. Sample `(n, m)` has flat index
//! `s = m·n_fast + n`; bit `2s` is the real part and bit `2s + 1` the
//! imaginary part, with a set bit meaning `-1`.

use std::f64::consts::TAU;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use ndarray::Array2;
use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::CodeConfig;
use crate::error::{Error, Result};
use crate::interchange::{self, Dtype};
use crate::quantize::one_bit;
use crate::rd::{process, RdMap};
use crate::scene::{synthesize, unambiguous_limits, AdcCube, RadarConfig, Scene, Target};
use crate::sequences::{PnSequence, PADDING_RULE};

pub const FORMAT_VERSION: u32 = 1;
pub const RECORDS_MAGIC: &[u8; 8] = b"PMCWDSET";
pub const MANIFEST_FILE: &str = "manifest.txt";
pub const RECORDS_FILE: &str = "records.bin";
const FORMAT_NAME: &str = "pmcw-onebit-dataset";
const NOISE_CONVENTION: &str =
    "per raw sample, unit target, complex variance 10^(-snr_db/10) split evenly over re/im";

/// Distribution that scene geometry is drawn from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SceneDistribution {
    pub targets_min: usize,
    pub targets_max: usize,
    /// Range bins kept clear at each end of the unambiguous interval.
    pub range_margin_bins: usize,
    /// Fraction of the unambiguous velocity interval that velocities span.
    pub velocity_fraction: f64,
    pub gamma_min: f64,
    pub gamma_max: f64,
}

impl Default for SceneDistribution {
    fn default() -> Self {
        SceneDistribution {
            targets_min: 1,
            targets_max: 5,
            range_margin_bins: 1,
            velocity_fraction: 0.9,
            gamma_min: 0.5,
            gamma_max: 1.0,
        }
    }
}

impl SceneDistribution {
    fn validate(&self, config: &RadarConfig) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidCorpus(msg));
        if self.targets_min == 0 || self.targets_min > self.targets_max {
            return bad(format!(
                "target count range {}..={} is empty or includes zero",
                self.targets_min, self.targets_max
            ));
        }
        if 2 * self.range_margin_bins >= config.n_fast {
            return bad(format!("range margin {} leaves no bins", self.range_margin_bins));
        }
        if !(self.velocity_fraction >= 0.0 && self.velocity_fraction < 1.0) {
            return bad(format!("velocity_fraction {} outside [0, 1)", self.velocity_fraction));
        }
        if !(self.gamma_min > 0.0 && self.gamma_min <= self.gamma_max && self.gamma_max.is_finite()) {
            return bad(format!("gamma range [{}, {}] invalid", self.gamma_min, self.gamma_max));
        }
        Ok(())
    }

    /// Draw one set of targets.
    pub fn draw(&self, config: &RadarConfig, rng: &mut impl Rng) -> Vec<Target> {
        let (_, vmax) = unambiguous_limits(config);
        let vspan = self.velocity_fraction * vmax;
        let count = rng.random_range(self.targets_min..=self.targets_max);
        let first_bin = self.range_margin_bins;
        let last_bin = config.n_fast - self.range_margin_bins;
        (0..count)
            .map(|_| {
                let bin = rng.random_range(first_bin..=last_bin.min(config.n_fast - 1));
                let velocity = if vspan > 0.0 { rng.random_range(-vspan..vspan) } else { 0.0 };
                let magnitude = if self.gamma_max > self.gamma_min {
                    rng.random_range(self.gamma_min..=self.gamma_max)
                } else {
                    self.gamma_min
                };
                let phase = rng.random_range(0.0..TAU);
                Target::new(
                    bin as f64 * config.range_resolution_m(),
                    velocity,
                    Complex64::from_polar(magnitude, phase),
                )
            })
            .collect()
    }
}

/// What to generate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusSpec {
    /// Records per entry of `snr_db`.
    pub count_per_snr: usize,
    pub snr_db: Vec<f64>,
    pub master_seed: u64,
    #[serde(default = "default_reference_snr")]
    pub reference_snr_db: f64,
    #[serde(default)]
    pub distribution: SceneDistribution,
}

fn default_reference_snr() -> f64 {
    50.0
}

impl CorpusSpec {
    pub fn new(count_per_snr: usize, snr_db: Vec<f64>, master_seed: u64) -> Self {
        CorpusSpec {
            count_per_snr,
            snr_db,
            master_seed,
            reference_snr_db: default_reference_snr(),
            distribution: SceneDistribution::default(),
        }
    }

    pub fn record_count(&self) -> usize {
        self.count_per_snr * self.snr_db.len()
    }

    pub fn validate(&self, config: &RadarConfig) -> Result<()> {
        if self.count_per_snr == 0 || self.snr_db.is_empty() {
            return Err(Error::InvalidCorpus("record counts must be positive".into()));
        }
        if let Some(bad) = self
            .snr_db
            .iter()
            .chain(std::iter::once(&self.reference_snr_db))
            .find(|s| !s.is_finite())
        {
            return Err(Error::InvalidCorpus(format!("non-finite SNR {bad}")));
        }
        self.distribution.validate(config)
    }

    /// Scene geometry and noise seeds of record `record_id`. Every record
    /// draws from its own ChaCha stream of `master_seed`, so records can be
    /// generated in any order.
    pub fn plan_record(&self, config: &RadarConfig, record_id: u64) -> RecordPlan {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(record_id);
        let targets = self.distribution.draw(config, &mut rng);
        let noise_seed = rng.next_u64();
        let reference_seed = rng.next_u64();
        let snr_db = self.snr_db[record_id as usize / self.count_per_snr];
        RecordPlan {
            record_id,
            scene: Scene::with_noise(targets, snr_db, noise_seed),
            reference_snr_db: self.reference_snr_db,
            reference_seed,
        }
    }
}

/// Everything needed to regenerate one record.
#[derive(Debug, Clone, PartialEq)]
pub struct RecordPlan {
    pub record_id: u64,
    /// Geometry plus the input SNR and noise seed.
    pub scene: Scene,
    pub reference_snr_db: f64,
    pub reference_seed: u64,
}

impl RecordPlan {
    /// The same geometry at the reference SNR.
    pub fn reference_scene(&self) -> Scene {
        Scene::with_noise(self.scene.targets.clone(), self.reference_snr_db, self.reference_seed)
    }
}

/// One stored pair.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetRecord {
    pub plan: RecordPlan,
    pub onebit_cube: AdcCube,
    pub reference_map: RdMap,
    pub config: RadarConfig,
}

impl DatasetRecord {
    pub fn record_id(&self) -> u64 {
        self.plan.record_id
    }

    /// Synthesize and process one record.
    pub fn generate(config: &RadarConfig, code: &PnSequence, plan: RecordPlan) -> Result<Self> {
        let noisy = synthesize(config, code, &plan.scene)?;
        let onebit_cube = one_bit(&noisy)?;
        drop(noisy);
        let reference = synthesize(config, code, &plan.reference_scene())?;
        let reference_map = process(&reference, code, config)?;
        Ok(DatasetRecord {
            plan,
            onebit_cube,
            reference_map,
            config: *config,
        })
    }

    /// Re-run the full-precision pipeline on the regenerated reference cube
    /// and return the largest element deviation from the stored map,
    /// relative to the stored map's peak magnitude.
    pub fn pairing_error(&self, code: &PnSequence) -> Result<f64> {
        let cube = synthesize(&self.config, code, &self.plan.reference_scene())?;
        let fresh = process(&cube, code, &self.config)?;
        let peak = self
            .reference_map
            .data()
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if peak == 0.0 {
            return Err(Error::DegenerateMap);
        }
        let worst = fresh
            .data()
            .iter()
            .zip(self.reference_map.data().iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        Ok(worst / peak)
    }
}

/// Count of records at one SNR.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SnrCount {
    pub snr_db: f64,
    pub count: usize,
}

/// Contents of `manifest.txt`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetManifest {
    pub format: String,
    pub version: u32,
    pub record_count: usize,
    /// One-bit cubes plus reference maps.
    pub stored_matrices: usize,
    pub records_file: String,
    pub checksum: String,
    pub master_seed: u64,
    pub reference_snr_db: f64,
    pub noise_convention: String,
    pub snr_split: Vec<SnrCount>,
    pub radar: RadarConfig,
    pub code: ManifestCode,
    pub distribution: SceneDistribution,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestCode {
    pub degree: u32,
    pub taps: Vec<u32>,
    pub seed: u32,
    pub padding: String,
}

impl DatasetManifest {
    fn describe(config: &RadarConfig, code: &CodeConfig, spec: &CorpusSpec) -> Self {
        DatasetManifest {
            format: FORMAT_NAME.into(),
            version: FORMAT_VERSION,
            record_count: spec.record_count(),
            stored_matrices: 2 * spec.record_count(),
            records_file: RECORDS_FILE.into(),
            checksum: "crc32".into(),
            master_seed: spec.master_seed,
            reference_snr_db: spec.reference_snr_db,
            noise_convention: NOISE_CONVENTION.into(),
            snr_split: spec
                .snr_db
                .iter()
                .map(|&snr_db| SnrCount {
                    snr_db,
                    count: spec.count_per_snr,
                })
                .collect(),
            radar: *config,
            code: ManifestCode {
                degree: code.degree,
                taps: code.taps.clone(),
                seed: code.seed,
                padding: PADDING_RULE.into(),
            },
            distribution: spec.distribution.clone(),
        }
    }

    pub fn code_config(&self) -> CodeConfig {
        CodeConfig {
            degree: self.code.degree,
            taps: self.code.taps.clone(),
            seed: self.code.seed,
        }
    }

    pub fn read(dir: &Path) -> Result<Self> {
        let path = dir.join(MANIFEST_FILE);
        let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        let value: toml::Table = toml::from_str(&text).map_err(|e| Error::Parse {
            path: path.clone(),
            message: e.to_string(),
        })?;
        // Check the version before the schema so newer manifests fail with a
        // version error rather than a field error.
        let version = value
            .get("version")
            .and_then(|v| v.as_integer())
            .ok_or_else(|| Error::Parse {
                path: path.clone(),
                message: "missing integer `version`".into(),
            })?;
        if version != i64::from(FORMAT_VERSION) {
            return Err(Error::VersionMismatch {
                found: u32::try_from(version).unwrap_or(u32::MAX),
                expected: FORMAT_VERSION,
            });
        }
        let manifest: DatasetManifest = toml::from_str(&text).map_err(|e| Error::Parse {
            path: path.clone(),
            message: e.to_string(),
        })?;
        let split_total: usize = manifest.snr_split.iter().map(|s| s.count).sum();
        if split_total != manifest.record_count {
            return Err(Error::Parse {
                path,
                message: format!(
                    "snr_split sums to {split_total}, record_count is {}",
                    manifest.record_count
                ),
            });
        }
        Ok(manifest)
    }

    fn write(&self, dir: &Path) -> Result<()> {
        let path = dir.join(MANIFEST_FILE);
        let text = toml::to_string(self).map_err(|e| Error::Malformed(e.to_string()))?;
        fs::write(&path, text).map_err(|e| Error::io(&path, e))
    }
}

/// Records generated concurrently before each sequential write.
const WRITE_BATCH: usize = 8;

/// Generate a full corpus into `out_dir`.
///
/// Records are generated in parallel and written in id order; the manifest
/// is written last so a directory with a manifest is always complete.
pub fn generate_corpus(
    config: &RadarConfig,
    code_config: &CodeConfig,
    spec: &CorpusSpec,
    out_dir: &Path,
) -> Result<DatasetManifest> {
    config.validate()?;
    spec.validate(config)?;
    let code = code_config.build()?;
    if code.n_total() != config.n_fast {
        return Err(Error::InvalidCorpus(format!(
            "code of {} chips does not match n_fast = {}",
            code.n_total(),
            config.n_fast
        )));
    }

    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let manifest_path = out_dir.join(MANIFEST_FILE);
    if manifest_path.exists() {
        fs::remove_file(&manifest_path).map_err(|e| Error::io(&manifest_path, e))?;
    }
    let records_path = out_dir.join(RECORDS_FILE);
    let file = File::create(&records_path).map_err(|e| Error::io(&records_path, e))?;
    let mut out = BufWriter::new(file);
    let total = spec.record_count();
    let mut header = Vec::with_capacity(16);
    header.extend_from_slice(RECORDS_MAGIC);
    header.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    header.extend_from_slice(&(total as u32).to_le_bytes());
    out.write_all(&header).map_err(|e| Error::io(&records_path, e))?;

    let ids: Vec<u64> = (0..total as u64).collect();
    for batch in ids.chunks(WRITE_BATCH) {
        let encoded: Vec<Result<Vec<u8>>> = batch
            .par_iter()
            .map(|&id| {
                let plan = spec.plan_record(config, id);
                DatasetRecord::generate(config, &code, plan)
                    .map(|record| encode_record(&record))
                    .map_err(|e| Error::Record {
                        record_id: id,
                        source: Box::new(e),
                    })
            })
            .collect();
        for (id, bytes) in batch.iter().zip(encoded) {
            let bytes = bytes?;
            out.write_all(&bytes).map_err(|e| Error::Record {
                record_id: *id,
                source: Box::new(Error::io(&records_path, e)),
            })?;
        }
    }
    out.flush().map_err(|e| Error::io(&records_path, e))?;

    let manifest = DatasetManifest::describe(config, code_config, spec);
    manifest.write(out_dir)?;
    Ok(manifest)
}

fn encode_record(record: &DatasetRecord) -> Vec<u8> {
    let plan = &record.plan;
    let cube = record.onebit_cube.data();
    let map = record.reference_map.data();
    let (n_fast, m_raw) = cube.dim();
    let sign_bytes = (2 * n_fast * m_raw).div_ceil(8);
    let mut p = Vec::with_capacity(64 + 32 * plan.scene.targets.len() + sign_bytes + 8 * map.len());

    p.extend_from_slice(&plan.scene.snr_db.unwrap_or(f64::INFINITY).to_le_bytes());
    p.extend_from_slice(&plan.scene.rng_seed.to_le_bytes());
    p.extend_from_slice(&plan.reference_snr_db.to_le_bytes());
    p.extend_from_slice(&plan.reference_seed.to_le_bytes());
    p.extend_from_slice(&(plan.scene.targets.len() as u32).to_le_bytes());
    for t in &plan.scene.targets {
        for v in [t.range_m, t.velocity_mps, t.gamma.re, t.gamma.im] {
            p.extend_from_slice(&v.to_le_bytes());
        }
    }

    p.extend_from_slice(&(n_fast as u32).to_le_bytes());
    p.extend_from_slice(&(m_raw as u32).to_le_bytes());
    p.extend_from_slice(&pack_signs(cube));

    p.extend_from_slice(&(map.nrows() as u32).to_le_bytes());
    p.extend_from_slice(&(map.ncols() as u32).to_le_bytes());
    for z in map.iter() {
        p.extend_from_slice(&(z.re as f32).to_le_bytes());
        p.extend_from_slice(&(z.im as f32).to_le_bytes());
    }

    let crc = crc32fast::hash(&p);
    let mut framed = Vec::with_capacity(p.len() + 20);
    framed.extend_from_slice(&plan.record_id.to_le_bytes());
    framed.extend_from_slice(&(p.len() as u64).to_le_bytes());
    framed.extend_from_slice(&p);
    framed.extend_from_slice(&crc.to_le_bytes());
    framed
}

/// Pack a one-bit cube into sign bits (see module docs for the order).
pub fn pack_signs(cube: &Array2<Complex64>) -> Vec<u8> {
    let (n_fast, m_raw) = cube.dim();
    let mut bytes = vec![0u8; (2 * n_fast * m_raw).div_ceil(8)];
    for m in 0..m_raw {
        for n in 0..n_fast {
            let s = m * n_fast + n;
            let z = cube[[n, m]];
            if z.re < 0.0 {
                bytes[(2 * s) / 8] |= 1 << ((2 * s) % 8);
            }
            if z.im < 0.0 {
                bytes[(2 * s + 1) / 8] |= 1 << ((2 * s + 1) % 8);
            }
        }
    }
    bytes
}

/// Inverse of [`pack_signs`].
pub fn unpack_signs(bytes: &[u8], n_fast: usize, m_raw: usize) -> Array2<Complex64> {
    let bit = |k: usize| if bytes[k / 8] >> (k % 8) & 1 == 1 { -1.0 } else { 1.0 };
    Array2::from_shape_fn((n_fast, m_raw), |(n, m)| {
        let s = m * n_fast + n;
        Complex64::new(bit(2 * s), bit(2 * s + 1))
    })
}

struct Cursor<'a> {
    bytes: &'a [u8],
    at: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, len: usize) -> Result<&'a [u8]> {
        let end = self
            .at
            .checked_add(len)
            .filter(|&end| end <= self.bytes.len())
            .ok_or_else(|| Error::Malformed("record payload truncated".into()))?;
        let slice = &self.bytes[self.at..end];
        self.at = end;
        Ok(slice)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn f32(&mut self) -> Result<f32> {
        Ok(f32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
}

fn decode_payload(record_id: u64, payload: &[u8], config: &RadarConfig) -> Result<DatasetRecord> {
    let mut c = Cursor { bytes: payload, at: 0 };
    let snr_db = c.f64()?;
    let noise_seed = c.u64()?;
    let reference_snr_db = c.f64()?;
    let reference_seed = c.u64()?;
    let count = c.u32()? as usize;
    let mut targets = Vec::with_capacity(count.min(1024));
    for _ in 0..count {
        let range_m = c.f64()?;
        let velocity_mps = c.f64()?;
        let re = c.f64()?;
        let im = c.f64()?;
        targets.push(Target::new(range_m, velocity_mps, Complex64::new(re, im)));
    }
    let n_fast = c.u32()? as usize;
    let m_raw = c.u32()? as usize;
    if (n_fast, m_raw) != (config.n_fast, config.m_raw) {
        return Err(Error::Malformed(format!(
            "cube is {n_fast}×{m_raw}, manifest says {}×{}",
            config.n_fast, config.m_raw
        )));
    }
    let signs = c.take((2 * n_fast * m_raw).div_ceil(8))?;
    let onebit_cube = AdcCube::from_one_bit(unpack_signs(signs, n_fast, m_raw))?;
    let rows = c.u32()? as usize;
    let cols = c.u32()? as usize;
    if (rows, cols) != (config.n_fast, config.m_slow()) {
        return Err(Error::Malformed(format!(
            "reference map is {rows}×{cols}, manifest says {}×{}",
            config.n_fast,
            config.m_slow()
        )));
    }
    let mut values = Vec::with_capacity(rows * cols);
    for _ in 0..rows * cols {
        let re = c.f32()?;
        let im = c.f32()?;
        values.push(Complex64::new(f64::from(re), f64::from(im)));
    }
    if c.at != payload.len() {
        return Err(Error::Malformed("trailing bytes in record payload".into()));
    }
    let reference_map = RdMap::new(
        Array2::from_shape_vec((rows, cols), values).map_err(|e| Error::Malformed(e.to_string()))?,
    );
    let snr_db = snr_db.is_finite().then_some(snr_db);
    Ok(DatasetRecord {
        plan: RecordPlan {
            record_id,
            scene: Scene {
                targets,
                snr_db,
                rng_seed: noise_seed,
            },
            reference_snr_db,
            reference_seed,
        },
        onebit_cube,
        reference_map,
        config: *config,
    })
}

/// Load record `record_id` from the dataset in `dir`.
pub fn load_record(dir: &Path, record_id: u64) -> Result<DatasetRecord> {
    let manifest = DatasetManifest::read(dir)?;
    load_record_with(dir, &manifest, record_id)
}

/// [`load_record`] with an already-parsed manifest.
pub fn load_record_with(dir: &Path, manifest: &DatasetManifest, record_id: u64) -> Result<DatasetRecord> {
    if record_id >= manifest.record_count as u64 {
        return Err(Error::OutOfRange {
            index: record_id as usize,
            len: manifest.record_count,
        });
    }
    let path: PathBuf = dir.join(&manifest.records_file);
    let io = |e| Error::io(&path, e);
    let mut input = BufReader::new(File::open(&path).map_err(io)?);
    let mut header = [0u8; 16];
    input.read_exact(&mut header).map_err(io)?;
    if &header[..8] != RECORDS_MAGIC {
        return Err(Error::Parse {
            path: path.clone(),
            message: "missing PMCWDSET header".into(),
        });
    }
    let version = u32::from_le_bytes(header[8..12].try_into().unwrap());
    if version != FORMAT_VERSION {
        return Err(Error::VersionMismatch {
            found: version,
            expected: FORMAT_VERSION,
        });
    }
    let count = u32::from_le_bytes(header[12..16].try_into().unwrap()) as u64;
    for _ in 0..count {
        let mut frame = [0u8; 16];
        input.read_exact(&mut frame).map_err(io)?;
        let id = u64::from_le_bytes(frame[..8].try_into().unwrap());
        let len = u64::from_le_bytes(frame[8..].try_into().unwrap());
        if id != record_id {
            input.seek(SeekFrom::Current(len as i64 + 4)).map_err(io)?;
            continue;
        }
        let mut payload = vec![0u8; len as usize];
        input.read_exact(&mut payload).map_err(io)?;
        let mut crc = [0u8; 4];
        input.read_exact(&mut crc).map_err(io)?;
        let stored = u32::from_le_bytes(crc);
        let computed = crc32fast::hash(&payload);
        if stored != computed {
            return Err(Error::Checksum {
                record_id,
                stored,
                computed,
            });
        }
        return decode_payload(record_id, &payload, &manifest.radar).map_err(|e| Error::Record {
            record_id,
            source: Box::new(e),
        });
    }
    Err(Error::RecordNotFound(record_id))
}

/// Write a record as two interchange arrays, `record_<id>_onebit.arr`
/// (`[n_fast, m_raw, 2]`) and `record_<id>_reference.arr` (`[N, M, 2]`),
/// both float32. Returns the two paths.
pub fn export_record(record: &DatasetRecord, out_dir: &Path) -> Result<(PathBuf, PathBuf)> {
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let id = record.record_id();
    let cube_path = out_dir.join(format!("record_{id:06}_onebit.arr"));
    let map_path = out_dir.join(format!("record_{id:06}_reference.arr"));
    interchange::write_complex_matrix(&cube_path, record.onebit_cube.data(), Dtype::F32)?;
    interchange::write_complex_matrix(&map_path, record.reference_map.data(), Dtype::F32)?;
    Ok((cube_path, map_path))
}

/// Export every record of the dataset in `dir` into `out_dir`.
pub fn export_dataset(dir: &Path, out_dir: &Path) -> Result<usize> {
    let manifest = DatasetManifest::read(dir)?;
    for id in 0..manifest.record_count as u64 {
        let record = load_record_with(dir, &manifest, id)?;
        export_record(&record, out_dir)?;
    }
    Ok(manifest.record_count)
}

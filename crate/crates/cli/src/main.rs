use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use pmcw_onebit::dataset;
use pmcw_onebit::interchange::{write_complex_matrix, Dtype};
use pmcw_onebit::metrics::{self, column_db, normalize_peak};
use pmcw_onebit::quantize::one_bit;
use pmcw_onebit::rd::process;
use pmcw_onebit::scene::{self, synthesize};
use pmcw_onebit::{AdcCube, PnSequence, RdMap, ScenarioConfig, Scene};

/// First line of every CSV the tool writes.
const CSV_SCHEMA: &str = "# pmcw-onebit csv schema 1";

/// Lowest level written to slice CSVs, in dB relative to the map peak.
const SLICE_FLOOR_DB: f64 = -50.0;

#[derive(Parser)]
#[command(name = "pmcw", version, about = "PMCW radar simulation and one-bit range-Doppler processing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize the ADC cube of a scenario.
    Simulate {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Variant::Hr)]
        variant: Variant,
    },
    /// Synthesize and process a scenario into a range-Doppler map.
    Process {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Variant::Hr)]
        variant: Variant,
    },
    /// Compare a pipeline variant against the full-precision reference.
    Metrics {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Variant::Onebit)]
        variant: Variant,
        /// Guard half-width around the main lobe, in range bins.
        #[arg(long)]
        guard: Option<usize>,
    },
    /// Write the target's Doppler column of each variant as a dB table.
    Slice {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, num_args = 1.., default_values_t = [Variant::Hr, Variant::Onebit])]
        variant: Vec<Variant>,
    },
    /// Generate the paired corpus described by the `[corpus]` table.
    Dataset {
        #[command(flatten)]
        common: Common,
        /// Also write every record as interchange arrays into this directory.
        #[arg(long)]
        export: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    /// Scenario file (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output directory, created if missing.
    #[arg(long)]
    out: PathBuf,
    /// Replaces `scene.rng_seed` and `corpus.master_seed`.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Variant {
    Hr,
    Onebit,
}

impl Variant {
    fn name(self) -> &'static str {
        match self {
            Variant::Hr => "hr",
            Variant::Onebit => "onebit",
        }
    }
}

struct Loaded {
    cfg: ScenarioConfig,
    code: PnSequence,
    out: PathBuf,
}

fn load(common: &Common) -> Result<Loaded> {
    let mut cfg = ScenarioConfig::from_path(&common.config)?;
    if let Some(seed) = common.seed {
        cfg.scene.rng_seed = seed;
        if let Some(corpus) = cfg.corpus.as_mut() {
            corpus.master_seed = seed;
        }
    }
    let code = cfg.code.build()?;
    fs::create_dir_all(&common.out).with_context(|| format!("creating {}", common.out.display()))?;
    Ok(Loaded {
        cfg,
        code,
        out: common.out.clone(),
    })
}

fn cube_for(loaded: &Loaded, scene: &Scene, variant: Variant) -> Result<AdcCube> {
    let cube = synthesize(&loaded.cfg.radar, &loaded.code, scene)?;
    Ok(match variant {
        Variant::Hr => cube,
        Variant::Onebit => one_bit(&cube)?,
    })
}

fn map_for(loaded: &Loaded, scene: &Scene, variant: Variant) -> Result<RdMap> {
    let cube = cube_for(loaded, scene, variant)?;
    Ok(process(&cube, &loaded.code, &loaded.cfg.radar)?)
}

/// The full-precision reference scene: the scenario itself, or the same
/// geometry at `[metrics] reference_snr_db` with its own noise draw.
fn reference_scene(cfg: &ScenarioConfig) -> Scene {
    match cfg.metrics.reference_snr_db {
        None => cfg.scene.clone(),
        Some(snr) => Scene::with_noise(cfg.scene.targets.clone(), snr, cfg.scene.rng_seed.wrapping_add(1)),
    }
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn simulate(common: &Common, variant: Variant) -> Result<()> {
    let loaded = load(common)?;
    let cube = cube_for(&loaded, &loaded.cfg.scene, variant)?;
    let path = loaded.out.join(format!("cube_{}.arr", variant.name()));
    write_complex_matrix(&path, cube.data(), Dtype::F64)?;
    println!("wrote {} ({} x {})", path.display(), cube.n_fast(), cube.pulses());
    Ok(())
}

fn run_process(common: &Common, variant: Variant) -> Result<()> {
    let loaded = load(common)?;
    let map = map_for(&loaded, &loaded.cfg.scene, variant)?;
    let path = loaded.out.join(format!("rd_{}.arr", variant.name()));
    write_complex_matrix(&path, map.data(), Dtype::F64)?;
    let (r, v) = map.argmax();
    println!("wrote {} ({} x {}), peak at range bin {r}, Doppler bin {v}", path.display(), map.n_range(), map.n_doppler());
    Ok(())
}

fn run_metrics(common: &Common, variant: Variant, guard: Option<usize>) -> Result<()> {
    let loaded = load(common)?;
    let mut options = loaded.cfg.metrics.options();
    if let Some(g) = guard {
        options.guard = g;
    }
    let map = map_for(&loaded, &loaded.cfg.scene, variant)?;
    let reference = map_for(&loaded, &reference_scene(&loaded.cfg), Variant::Hr)?;
    let report = metrics::evaluate(&map, &reference, &options)?;
    print!("variant = {}\n{report}", variant.name());
    let csv = format!("{CSV_SCHEMA}\n{}\n{}\n", metrics::CSV_HEADER, report.csv_row(variant.name()));
    write_text(&loaded.out.join("metrics.csv"), &csv)
}

fn run_slice(common: &Common, variants: &[Variant]) -> Result<()> {
    let loaded = load(common)?;
    let radar = &loaded.cfg.radar;
    let Some(dominant) = loaded
        .cfg
        .scene
        .targets
        .iter()
        .max_by(|a, b| a.gamma.norm().total_cmp(&b.gamma.norm()))
    else {
        bail!("slice needs at least one target in [scene]");
    };
    let m = radar.m_slow();
    let column = (scene::predicted_doppler_bin(radar, dominant.velocity_mps).round() as usize) % m;

    let mut columns = Vec::new();
    for &variant in variants {
        let map = normalize_peak(&map_for(&loaded, &loaded.cfg.scene, variant)?)?;
        columns.push(column_db(&map, column, SLICE_FLOOR_DB)?);
    }
    let mut csv = format!("{CSV_SCHEMA}\n# doppler_bin = {column}\nrange_bin");
    for variant in variants {
        write!(csv, ",{}_db", variant.name())?;
    }
    csv.push('\n');
    for r in 0..radar.n_fast {
        write!(csv, "{r}")?;
        for values in &columns {
            write!(csv, ",{:.4}", values[r])?;
        }
        csv.push('\n');
    }
    let path = loaded.out.join("slice.csv");
    write_text(&path, &csv)?;
    println!("wrote {} (Doppler bin {column})", path.display());
    Ok(())
}

fn run_dataset(common: &Common, export: Option<&Path>) -> Result<()> {
    let loaded = load(common)?;
    let Some(spec) = &loaded.cfg.corpus else {
        bail!("{} has no [corpus] table", common.config.display());
    };
    let manifest = dataset::generate_corpus(&loaded.cfg.radar, &loaded.cfg.code, spec, &loaded.out)?;
    println!("wrote {} records to {}", manifest.record_count, loaded.out.display());
    if let Some(dir) = export {
        let n = dataset::export_dataset(&loaded.out, dir)?;
        println!("exported {n} records to {}", dir.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Simulate { common, variant } => simulate(common, *variant),
        Command::Process { common, variant } => run_process(common, *variant),
        Command::Metrics { common, variant, guard } => run_metrics(common, *variant, *guard),
        Command::Slice { common, variant } => run_slice(common, variant),
        Command::Dataset { common, export } => run_dataset(common, export.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

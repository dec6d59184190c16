//! PMCW radar simulation and one-bit range-Doppler processing.
//!
//! The crate synthesizes the sampled baseband of a phase-coded CW radar
//! looking at point targets, optionally quantizes it to one bit per
//! component, and runs the conventional pipeline: pulse accumulation,
//! cyclic correlation along fast time and a DFT along slow time. Sidelobe
//! and reconstruction metrics compare maps, and the [`dataset`] module
//! writes paired one-bit/high-resolution corpora for learned denoisers.
//!
//! ```
//! use num_complex::Complex64;
//! use pmcw_onebit::{quantize, rd, scene, PnSequence, RadarConfig, Scene, Target};
//!
//! let config = RadarConfig { m_raw: 400, ..RadarConfig::default() };
//! let code = PnSequence::canonical();
//! let target = Target::new(12.0, 0.0, Complex64::new(1.0, 0.0));
//! let cube = scene::synthesize(&config, &code, &Scene::noiseless(vec![target]))?;
//!
//! let hr = rd::process(&cube, &code, &config)?;
//! let onebit = rd::process(&quantize::one_bit(&cube)?, &code, &config)?;
//! assert_eq!(hr.argmax(), (8, 0));
//! assert_eq!(onebit.argmax(), (8, 0));
//! # Ok::<(), pmcw_onebit::Error>(())
//! ```
//!
//! The guide under `book/` walks through each stage; its code blocks are
//! compiled and run as doctests of this crate.

pub mod config;
pub mod dataset;
pub mod error;
pub mod interchange;
pub mod metrics;
pub mod quantize;
pub mod rd;
pub mod scene;
pub mod sequences;

pub use config::{CodeConfig, ScenarioConfig};
pub use dataset::{CorpusSpec, DatasetManifest, DatasetRecord};
pub use error::{Error, Result};
pub use metrics::{MetricOptions, MetricReport};
pub use rd::{RangeProfile, RdMap};
pub use scene::{AdcCube, RadarConfig, Scene, Target};
pub use sequences::PnSequence;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/codes.md")]
    mod codes {}
    #[doc = include_str!("../../../book/src/signal-model.md")]
    mod signal_model {}
    #[doc = include_str!("../../../book/src/quantization.md")]
    mod quantization {}
    #[doc = include_str!("../../../book/src/processing.md")]
    mod processing {}
    #[doc = include_str!("../../../book/src/metrics.md")]
    mod metrics {}
    #[doc = include_str!("../../../book/src/dataset.md")]
    mod dataset {}
    #[doc = include_str!("../../../book/src/interchange.md")]
    mod interchange {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}

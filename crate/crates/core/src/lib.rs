//! Statistical radio-channel simulator for positioning studies.
//!
//! Channels follow the TR 38.901 two-step recipe: large-scale parameters per
//! drop ([`largescale`]), then a cluster set ([`builder`]). A second builder
//! for early clusters can be merged in ([`combiner`]), and geometric LOS and
//! ground-reflection paths are added from the link ([`deterministic`]). The
//! result is filtered to the signal band ([`waveform`]), fed to a first-path
//! estimator ([`toa`]) and summarized ([`metrics`], [`harness`]).

// `!(x > 0.0)` is used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod builder;
pub mod combiner;
pub mod deterministic;
pub mod error;
pub mod harness;
pub mod largescale;
pub mod metrics;
pub mod rng;
pub mod scenario;
pub mod toa;
pub mod waveform;

pub use builder::{BuilderTag, Cir, Cluster, ClusterDraw, Origin, PURE_NLOS};
pub use combiner::{CombinerConfig, ConfigId};
pub use error::{Error, Result};
pub use largescale::LspState;
pub use metrics::KecValue;
pub use scenario::{load_config, parse_config, GeometryLink, ScenarioParams, SimConfig};
pub use toa::{ToaConfig, ToaEstimate};
pub use waveform::{BandlimitedCir, SignalParams};

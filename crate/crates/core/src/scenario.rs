//! Scenario tables, link geometry and the simulation configuration.
//!
//! Every constant consumed by the other modules is reachable from a
//! [`SimConfig`]. Configurations are read from a flat `key = value` text
//! format:
//!
//! ```text
//! # comment
//! scenario.base = InF-LOS        # bundled table used as the starting point
//! scenario.r_tau = 3             # per-key overrides
//! signal.bandwidth_hz = 100e6
//! ```
//!
//! Keys are namespaced (`scenario.*`, `geometry.*`, `combiner.*`,
//! `signal.*`, `toa.*`, `sim.*`). Later assignments win, and `--set`
//! overrides are applied after the file.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use nalgebra::Point3;

use crate::combiner::{CombinerConfig, ConfigId};
use crate::error::{Error, Result};
use crate::toa::ToaConfig;
use crate::waveform::SignalParams;

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Version tag written into every emitted config and CSV header.
pub const SCHEMA_VERSION: u32 = 1;

const INF_LOS_TABLE: &str = include_str!("../scenarios/inf_los.conf");
const SYNTHETIC_TABLE: &str = include_str!("../scenarios/synthetic.conf");

/// Names of the scenario tables shipped with the crate.
pub const BUNDLED_SCENARIOS: &[&str] = &["InF-LOS", "synthetic"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathlossModel {
    FreeSpace,
    /// TR 38.901 InF-LOS pathloss formula.
    InfLos,
}

impl FromStr for PathlossModel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "free_space" | "freespace" => Ok(PathlossModel::FreeSpace),
            "inf_los" | "inflos" | "inflos-table" => Ok(PathlossModel::InfLos),
            other => Err(format!("unknown pathloss model '{other}'")),
        }
    }
}

impl PathlossModel {
    fn key(self) -> &'static str {
        match self {
            PathlossModel::FreeSpace => "free_space",
            PathlossModel::InfLos => "inf_los",
        }
    }
}

/// Decorrelation distances (meters) of the large-scale parameter fields.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecorrDistances {
    pub ds: f64,
    pub k: f64,
    pub sf: f64,
}

/// Cross-correlation coefficients between the lgDS, K and SF innovations.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LspCrossCorrelation {
    pub ds_k: f64,
    pub ds_sf: f64,
    pub k_sf: f64,
}

/// Statistical scenario table.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioParams {
    pub name: String,
    /// Delay proportionality factor, must exceed 1.
    pub r_tau: f64,
    pub num_clusters: usize,
    /// Mean of log10(DS / 1 s).
    pub mu_lg_ds: f64,
    pub sigma_lg_ds: f64,
    pub mu_k_db: f64,
    pub sigma_k_db: f64,
    pub sigma_sf_db: f64,
    /// Per-cluster shadowing standard deviation.
    pub zeta_db: f64,
    pub decorr: DecorrDistances,
    pub xcorr: LspCrossCorrelation,
    pub pathloss: PathlossModel,
}

impl ScenarioParams {
    /// Loads one of the [`BUNDLED_SCENARIOS`] tables by (case-insensitive) name.
    pub fn bundled(name: &str) -> Result<Self> {
        let text = match name.to_ascii_lowercase().as_str() {
            "inf-los" | "inf_los" | "inflos" => INF_LOS_TABLE,
            "synthetic" => SYNTHETIC_TABLE,
            _ => {
                return Err(Error::validation(format!(
                    "unknown scenario table '{name}' (bundled: {})",
                    BUNDLED_SCENARIOS.join(", ")
                )))
            }
        };
        let mut cfg = SimConfig::with_scenario(Self::blank());
        for entry in tokenize(text)? {
            apply_key(&mut cfg, &entry.key, &entry.value).map_err(|msg| Error::Parse {
                line: entry.line,
                msg,
            })?;
        }
        cfg.scenario.validate()?;
        Ok(cfg.scenario)
    }

    pub fn inf_los() -> Self {
        Self::bundled("InF-LOS").expect("bundled InF-LOS table is valid")
    }

    pub fn synthetic() -> Self {
        Self::bundled("synthetic").expect("bundled synthetic table is valid")
    }

    fn blank() -> Self {
        ScenarioParams {
            name: String::new(),
            r_tau: f64::NAN,
            num_clusters: 0,
            mu_lg_ds: f64::NAN,
            sigma_lg_ds: f64::NAN,
            mu_k_db: f64::NAN,
            sigma_k_db: f64::NAN,
            sigma_sf_db: f64::NAN,
            zeta_db: f64::NAN,
            decorr: DecorrDistances {
                ds: f64::NAN,
                k: f64::NAN,
                sf: f64::NAN,
            },
            xcorr: LspCrossCorrelation::default(),
            pathloss: PathlossModel::FreeSpace,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r_tau > 1.0) {
            return Err(Error::validation("r_tau must exceed 1"));
        }
        if self.num_clusters < 1 {
            return Err(Error::validation("num_clusters must be at least 1"));
        }
        if !self.mu_lg_ds.is_finite() || !self.mu_k_db.is_finite() {
            return Err(Error::validation("mu_lgDS and mu_K_dB must be finite"));
        }
        for (name, s) in [
            ("sigma_lgDS", self.sigma_lg_ds),
            ("sigma_K_dB", self.sigma_k_db),
            ("sigma_SF_dB", self.sigma_sf_db),
            ("zeta_dB", self.zeta_db),
        ] {
            if !(s >= 0.0) || !s.is_finite() {
                return Err(Error::validation(format!("{name} must be >= 0")));
            }
        }
        for (name, d) in [
            ("decorr_ds_m", self.decorr.ds),
            ("decorr_k_m", self.decorr.k),
            ("decorr_sf_m", self.decorr.sf),
        ] {
            if !(d > 0.0) || !d.is_finite() {
                return Err(Error::validation(format!("{name} must be > 0")));
            }
        }
        for (name, c) in [
            ("xcorr_ds_k", self.xcorr.ds_k),
            ("xcorr_ds_sf", self.xcorr.ds_sf),
            ("xcorr_k_sf", self.xcorr.k_sf),
        ] {
            if !(-1.0..=1.0).contains(&c) {
                return Err(Error::validation(format!("{name} must lie in [-1, 1]")));
            }
        }
        if crate::largescale::cross_correlation_factor(&self.xcorr).is_none() {
            return Err(Error::validation(
                "LSP cross-correlation matrix is not positive definite",
            ));
        }
        Ok(())
    }
}

/// Partial scenario used to derive a second builder's table from a base.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScenarioOverrides {
    pub r_tau: Option<f64>,
    pub num_clusters: Option<usize>,
    pub mu_lg_ds: Option<f64>,
    pub sigma_lg_ds: Option<f64>,
    pub zeta_db: Option<f64>,
}

impl ScenarioOverrides {
    pub fn apply(&self, base: &ScenarioParams) -> ScenarioParams {
        let mut s = base.clone();
        if let Some(v) = self.r_tau {
            s.r_tau = v;
        }
        if let Some(v) = self.num_clusters {
            s.num_clusters = v;
        }
        if let Some(v) = self.mu_lg_ds {
            s.mu_lg_ds = v;
        }
        if let Some(v) = self.sigma_lg_ds {
            s.sigma_lg_ds = v;
        }
        if let Some(v) = self.zeta_db {
            s.zeta_db = v;
        }
        s
    }
}

/// A BS-UE link with positions in meters; the ground plane is z = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometryLink {
    pub bs_position: Point3<f64>,
    pub ue_position: Point3<f64>,
    pub carrier_frequency: f64,
}

impl GeometryLink {
    pub fn new(bs: Point3<f64>, ue: Point3<f64>, carrier_frequency: f64) -> Result<Self> {
        if bs == ue {
            return Err(Error::InvalidGeometry(
                "BS and UE positions coincide".into(),
            ));
        }
        if !(carrier_frequency > 0.0) || !carrier_frequency.is_finite() {
            return Err(Error::InvalidGeometry(
                "carrier frequency must be positive".into(),
            ));
        }
        Ok(GeometryLink {
            bs_position: bs,
            ue_position: ue,
            carrier_frequency,
        })
    }

    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_frequency
    }

    pub fn distance_3d(&self) -> f64 {
        (self.ue_position - self.bs_position).norm()
    }

    pub fn horizontal_distance(&self) -> f64 {
        let d = self.ue_position - self.bs_position;
        d.x.hypot(d.y)
    }

    /// The same link with the two ends exchanged.
    pub fn swapped(&self) -> Self {
        GeometryLink {
            bs_position: self.ue_position,
            ue_position: self.bs_position,
            carrier_frequency: self.carrier_frequency,
        }
    }
}

/// Link layout used by the experiments: BS at `(0, 0, bs_height)`, UE at
/// `(horizontal_distance, 0, h)` with `h` drawn per drop from
/// `[ue_height_min, ue_height_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometryConfig {
    pub bs_height: f64,
    pub horizontal_distance: f64,
    pub carrier_frequency: f64,
    pub ue_height_min: f64,
    pub ue_height_max: f64,
}

impl Default for GeometryConfig {
    fn default() -> Self {
        GeometryConfig {
            bs_height: 1.7,
            horizontal_distance: 28.0,
            carrier_frequency: 3.75e9,
            ue_height_min: 0.7,
            ue_height_max: 3.3,
        }
    }
}

impl GeometryConfig {
    pub fn link_at(&self, ue_height: f64) -> Result<GeometryLink> {
        GeometryLink::new(
            Point3::new(0.0, 0.0, self.bs_height),
            Point3::new(self.horizontal_distance, 0.0, ue_height),
            self.carrier_frequency,
        )
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.bs_height > 0.0) {
            return Err(Error::validation("geometry.bs_height_m must be > 0"));
        }
        if !(self.ue_height_min > 0.0) || !(self.ue_height_max >= self.ue_height_min) {
            return Err(Error::validation(
                "geometry UE heights must satisfy 0 < ue_height_min_m <= ue_height_max_m",
            ));
        }
        if !(self.horizontal_distance >= 0.0) {
            return Err(Error::validation(
                "geometry.horizontal_distance_m must be >= 0",
            ));
        }
        if self.horizontal_distance == 0.0
            && self.ue_height_min <= self.bs_height
            && self.bs_height <= self.ue_height_max
        {
            return Err(Error::validation(
                "geometry allows the UE to coincide with the BS",
            ));
        }
        if !(self.carrier_frequency > 0.0) {
            return Err(Error::validation(
                "geometry.carrier_frequency_hz must be > 0",
            ));
        }
        Ok(())
    }
}

/// Pathloss in dB (positive = loss) for the scenario's pathloss model.
pub fn pathloss_db(link: &GeometryLink, scenario: &ScenarioParams) -> f64 {
    let d = link.distance_3d();
    let f = link.carrier_frequency;
    match scenario.pathloss {
        PathlossModel::FreeSpace => {
            20.0 * (4.0 * std::f64::consts::PI * d * f / SPEED_OF_LIGHT).log10()
        }
        PathlossModel::InfLos => 31.84 + 21.50 * d.log10() + 19.00 * (f / 1e9).log10(),
    }
}

/// Complete, validated simulation configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub scenario: ScenarioParams,
    pub combiner: CombinerConfig,
    pub signal: SignalParams,
    pub toa: ToaConfig,
    pub geometry: GeometryConfig,
    /// K_EC window in seconds.
    pub upsilon: f64,
    pub rng_seed: u64,
    pub num_drops: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig::with_scenario(ScenarioParams::inf_los())
    }
}

impl SimConfig {
    pub fn with_scenario(scenario: ScenarioParams) -> Self {
        SimConfig {
            scenario,
            combiner: CombinerConfig::default(),
            signal: SignalParams::default(),
            toa: ToaConfig::default(),
            geometry: GeometryConfig::default(),
            upsilon: 20e-9,
            rng_seed: 1,
            num_drops: 1000,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.scenario.validate()?;
        self.combiner.validate()?;
        self.signal.validate()?;
        self.toa.validate()?;
        self.geometry.validate()?;
        if !(self.upsilon > 0.0) {
            return Err(Error::validation("sim.upsilon_s must be > 0"));
        }
        if self.num_drops < 1 {
            return Err(Error::validation("sim.num_drops must be at least 1"));
        }
        Ok(())
    }

    /// Renders every field in the config-file format; reloading the output
    /// yields an equal `SimConfig`.
    pub fn to_config_string(&self) -> String {
        let s = &self.scenario;
        let c = &self.combiner;
        let g = &self.signal;
        let mut out = String::new();
        let _ = writeln!(out, "# ecsim config, schema version {SCHEMA_VERSION}");
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        kv("scenario.name", s.name.clone());
        kv("scenario.r_tau", format!("{:?}", s.r_tau));
        kv("scenario.num_clusters", s.num_clusters.to_string());
        kv("scenario.mu_lgDS", format!("{:?}", s.mu_lg_ds));
        kv("scenario.sigma_lgDS", format!("{:?}", s.sigma_lg_ds));
        kv("scenario.mu_K_dB", format!("{:?}", s.mu_k_db));
        kv("scenario.sigma_K_dB", format!("{:?}", s.sigma_k_db));
        kv("scenario.sigma_SF_dB", format!("{:?}", s.sigma_sf_db));
        kv("scenario.zeta_dB", format!("{:?}", s.zeta_db));
        kv("scenario.decorr_ds_m", format!("{:?}", s.decorr.ds));
        kv("scenario.decorr_k_m", format!("{:?}", s.decorr.k));
        kv("scenario.decorr_sf_m", format!("{:?}", s.decorr.sf));
        kv("scenario.xcorr_ds_k", format!("{:?}", s.xcorr.ds_k));
        kv("scenario.xcorr_ds_sf", format!("{:?}", s.xcorr.ds_sf));
        kv("scenario.xcorr_k_sf", format!("{:?}", s.xcorr.k_sf));
        kv("scenario.pathloss", s.pathloss.key().to_string());

        let geo = &self.geometry;
        kv("geometry.bs_height_m", format!("{:?}", geo.bs_height));
        kv(
            "geometry.horizontal_distance_m",
            format!("{:?}", geo.horizontal_distance),
        );
        kv(
            "geometry.carrier_frequency_hz",
            format!("{:?}", geo.carrier_frequency),
        );
        kv(
            "geometry.ue_height_min_m",
            format!("{:?}", geo.ue_height_min),
        );
        kv(
            "geometry.ue_height_max_m",
            format!("{:?}", geo.ue_height_max),
        );

        kv("combiner.mode", c.mode.to_string());
        kv("combiner.ec_power_ratio", format!("{:?}", c.ec_power_ratio));
        kv(
            "combiner.maintain_overall_k",
            c.maintain_overall_k.to_string(),
        );
        kv(
            "combiner.reflection_loss_dB",
            format!("{:?}", c.reflection_loss_db),
        );
        match &c.ec_overrides {
            None => kv("combiner.ec", "none".into()),
            Some(o) => {
                let opt = |v: Option<f64>| v.map_or("inherit".to_string(), |x| format!("{x:?}"));
                kv("combiner.ec.r_tau", opt(o.r_tau));
                kv(
                    "combiner.ec.num_clusters",
                    o.num_clusters
                        .map_or("inherit".to_string(), |n| n.to_string()),
                );
                kv("combiner.ec.mu_lgDS", opt(o.mu_lg_ds));
                kv("combiner.ec.sigma_lgDS", opt(o.sigma_lg_ds));
                kv("combiner.ec.zeta_dB", opt(o.zeta_db));
            }
        }

        kv("signal.bandwidth_hz", format!("{:?}", g.bandwidth));
        kv("signal.sample_rate_hz", format!("{:?}", g.sample_rate));
        kv(
            "signal.subcarrier_spacing_hz",
            format!("{:?}", g.subcarrier_spacing),
        );
        kv("signal.window_length_s", format!("{:?}", g.window_length));
        kv("signal.pre_window_s", format!("{:?}", g.pre_window));
        kv("signal.oversample_factor", g.oversample_factor.to_string());
        kv("signal.comb", g.comb.to_string());
        kv(
            "signal.snr_dB",
            g.snr_db.map_or("none".to_string(), |v| format!("{v:?}")),
        );

        kv(
            "toa.detect_threshold_rel_dB",
            format!("{:?}", self.toa.detect_threshold_rel_db),
        );
        kv(
            "toa.edge_search_back_s",
            self.toa
                .edge_search_back
                .map_or("auto".to_string(), |v| format!("{v:?}")),
        );

        kv("sim.upsilon_s", format!("{:?}", self.upsilon));
        kv("sim.seed", self.rng_seed.to_string());
        kv("sim.num_drops", self.num_drops.to_string());
        out
    }
}

/// Reads and validates a config file.
pub fn load_scenario(path: &Path) -> Result<SimConfig> {
    load_config(Some(path), &[])
}

/// Reads an optional config file, applies `key=value` overrides and validates.
pub fn load_config(path: Option<&Path>, overrides: &[String]) -> Result<SimConfig> {
    let text = match path {
        Some(p) => std::fs::read_to_string(p).map_err(|e| Error::io(p, e))?,
        None => String::new(),
    };
    parse_config(&text, overrides)
}

/// Parses config text plus `key=value` overrides into a validated `SimConfig`.
pub fn parse_config(text: &str, overrides: &[String]) -> Result<SimConfig> {
    let mut entries = tokenize(text)?;
    for (i, o) in overrides.iter().enumerate() {
        let (k, v) = o.split_once('=').ok_or_else(|| Error::Parse {
            line: 0,
            msg: format!("override #{} '{o}' is not key=value", i + 1),
        })?;
        entries.push(Entry {
            line: 0,
            key: k.trim().to_string(),
            value: v.trim().to_string(),
        });
    }

    let base = entries
        .iter()
        .rev()
        .find(|e| e.key == "scenario.base")
        .map(|e| e.value.as_str())
        .unwrap_or("InF-LOS");
    let mut cfg = SimConfig::with_scenario(ScenarioParams::bundled(base)?);
    for e in entries.iter().filter(|e| e.key != "scenario.base") {
        apply_key(&mut cfg, &e.key, &e.value).map_err(|msg| Error::Parse { line: e.line, msg })?;
    }
    cfg.validate()?;
    Ok(cfg)
}

struct Entry {
    line: usize,
    key: String,
    value: String,
}

fn tokenize(text: &str) -> Result<Vec<Entry>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
            line: i + 1,
            msg: format!("expected 'key = value', got '{line}'"),
        })?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || v.is_empty() {
            return Err(Error::Parse {
                line: i + 1,
                msg: format!("empty key or value in '{line}'"),
            });
        }
        out.push(Entry {
            line: i + 1,
            key: k.to_string(),
            value: v.to_string(),
        });
    }
    Ok(out)
}

fn num<T: FromStr>(key: &str, v: &str) -> std::result::Result<T, String> {
    v.parse()
        .map_err(|_| format!("{key}: cannot parse '{v}' as a number"))
}

fn flag(key: &str, v: &str) -> std::result::Result<bool, String> {
    match v.to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(format!("{key}: expected a boolean, got '{v}'")),
    }
}

fn seed(key: &str, v: &str) -> std::result::Result<u64, String> {
    match v.strip_prefix("0x").or_else(|| v.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => v.parse(),
    }
    .map_err(|_| format!("{key}: expected a 64-bit unsigned integer, got '{v}'"))
}

fn inherit<T: FromStr>(key: &str, v: &str) -> std::result::Result<Option<T>, String> {
    if v.eq_ignore_ascii_case("inherit") {
        Ok(None)
    } else {
        num(key, v).map(Some)
    }
}

fn apply_key(cfg: &mut SimConfig, key: &str, v: &str) -> std::result::Result<(), String> {
    let s = &mut cfg.scenario;
    match key {
        "scenario.name" => s.name = v.to_string(),
        "scenario.r_tau" => s.r_tau = num(key, v)?,
        "scenario.num_clusters" => s.num_clusters = num(key, v)?,
        "scenario.mu_lgDS" => s.mu_lg_ds = num(key, v)?,
        "scenario.sigma_lgDS" => s.sigma_lg_ds = num(key, v)?,
        "scenario.mu_K_dB" => s.mu_k_db = num(key, v)?,
        "scenario.sigma_K_dB" => s.sigma_k_db = num(key, v)?,
        "scenario.sigma_SF_dB" => s.sigma_sf_db = num(key, v)?,
        "scenario.zeta_dB" => s.zeta_db = num(key, v)?,
        "scenario.decorr_ds_m" => s.decorr.ds = num(key, v)?,
        "scenario.decorr_k_m" => s.decorr.k = num(key, v)?,
        "scenario.decorr_sf_m" => s.decorr.sf = num(key, v)?,
        "scenario.xcorr_ds_k" => s.xcorr.ds_k = num(key, v)?,
        "scenario.xcorr_ds_sf" => s.xcorr.ds_sf = num(key, v)?,
        "scenario.xcorr_k_sf" => s.xcorr.k_sf = num(key, v)?,
        "scenario.pathloss" => s.pathloss = v.parse()?,

        "geometry.bs_height_m" => cfg.geometry.bs_height = num(key, v)?,
        "geometry.horizontal_distance_m" => cfg.geometry.horizontal_distance = num(key, v)?,
        "geometry.carrier_frequency_hz" => cfg.geometry.carrier_frequency = num(key, v)?,
        "geometry.ue_height_min_m" => cfg.geometry.ue_height_min = num(key, v)?,
        "geometry.ue_height_max_m" => cfg.geometry.ue_height_max = num(key, v)?,
        "geometry.ue_height_m" => {
            let h = num(key, v)?;
            cfg.geometry.ue_height_min = h;
            cfg.geometry.ue_height_max = h;
        }

        "combiner.mode" => cfg.combiner.mode = v.parse::<ConfigId>()?,
        "combiner.ec_power_ratio" => cfg.combiner.ec_power_ratio = num(key, v)?,
        "combiner.maintain_overall_k" => cfg.combiner.maintain_overall_k = flag(key, v)?,
        "combiner.reflection_loss_dB" => cfg.combiner.reflection_loss_db = num(key, v)?,
        "combiner.ec" => {
            if v.eq_ignore_ascii_case("none") {
                cfg.combiner.ec_overrides = None;
            } else if v.eq_ignore_ascii_case("default") {
                cfg.combiner.ec_overrides = Some(CombinerConfig::default_ec_overrides());
            } else {
                return Err(format!("{key}: expected 'none' or 'default', got '{v}'"));
            }
        }
        k if k.starts_with("combiner.ec.") => {
            let o = cfg
                .combiner
                .ec_overrides
                .get_or_insert_with(Default::default);
            match &k["combiner.ec.".len()..] {
                "r_tau" => o.r_tau = inherit(key, v)?,
                "num_clusters" => o.num_clusters = inherit(key, v)?,
                "mu_lgDS" => o.mu_lg_ds = inherit(key, v)?,
                "sigma_lgDS" => o.sigma_lg_ds = inherit(key, v)?,
                "zeta_dB" => o.zeta_db = inherit(key, v)?,
                _ => return Err(format!("unknown key '{key}'")),
            }
        }

        "signal.bandwidth_hz" => cfg.signal.bandwidth = num(key, v)?,
        "signal.sample_rate_hz" => cfg.signal.sample_rate = num(key, v)?,
        "signal.subcarrier_spacing_hz" => cfg.signal.subcarrier_spacing = num(key, v)?,
        "signal.window_length_s" => cfg.signal.window_length = num(key, v)?,
        "signal.pre_window_s" => cfg.signal.pre_window = num(key, v)?,
        "signal.oversample_factor" => cfg.signal.oversample_factor = num(key, v)?,
        "signal.comb" => cfg.signal.comb = num(key, v)?,
        "signal.snr_dB" => {
            cfg.signal.snr_db = if v.eq_ignore_ascii_case("none") {
                None
            } else {
                Some(num(key, v)?)
            }
        }

        "toa.detect_threshold_rel_dB" => cfg.toa.detect_threshold_rel_db = num(key, v)?,
        "toa.edge_search_back_s" => {
            cfg.toa.edge_search_back = if v.eq_ignore_ascii_case("auto") {
                None
            } else {
                Some(num(key, v)?)
            }
        }

        "sim.upsilon_s" => cfg.upsilon = num(key, v)?,
        "sim.seed" => cfg.rng_seed = seed(key, v)?,
        "sim.num_drops" => cfg.num_drops = num(key, v)?,
        _ => return Err(format!("unknown key '{key}'")),
    }
    Ok(())
}

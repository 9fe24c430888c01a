//! Two-builder extension: an early-cluster (EC) builder and a late-cluster
//! (LC) builder whose outputs are merged under a common power budget, plus
//! the four named experiment configurations.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::builder::{build_statistical_cir, BuilderTag, Cir, Origin, PURE_NLOS};
use crate::deterministic::{ground_reflection_path, inject_deterministic, los_path};
use crate::error::{Error, Result};
use crate::largescale::{draw_lsps, LspState};
use crate::rng::DropStreams;
use crate::scenario::{pathloss_db, GeometryLink, ScenarioOverrides, SimConfig};

/// Experiment configuration identifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConfigId {
    /// "104.20": plain statistical InF-LOS channel.
    Baseline,
    /// "104.60": baseline plus ground reflection.
    BaselineGr,
    /// "104.63": EC + LC builders, overall K maintained.
    TwoBuilder,
    /// "104.66": 104.63 plus ground reflection.
    TwoBuilderGr,
}

impl ConfigId {
    pub const ALL: [ConfigId; 4] = [
        ConfigId::Baseline,
        ConfigId::BaselineGr,
        ConfigId::TwoBuilder,
        ConfigId::TwoBuilderGr,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ConfigId::Baseline => "104.20",
            ConfigId::BaselineGr => "104.60",
            ConfigId::TwoBuilder => "104.63",
            ConfigId::TwoBuilderGr => "104.66",
        }
    }

    pub fn has_ground_reflection(self) -> bool {
        matches!(self, ConfigId::BaselineGr | ConfigId::TwoBuilderGr)
    }

    pub fn uses_two_builders(self) -> bool {
        matches!(self, ConfigId::TwoBuilder | ConfigId::TwoBuilderGr)
    }
}

impl fmt::Display for ConfigId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ConfigId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        ConfigId::ALL
            .into_iter()
            .find(|c| c.as_str() == s.trim())
            .ok_or_else(|| {
                format!("unknown configuration '{s}' (expected 104.20, 104.60, 104.63 or 104.66)")
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CombinerConfig {
    /// Default configuration when none is given on the command line.
    pub mode: ConfigId,
    /// Fraction of the NLOS power given to the EC builder.
    pub ec_power_ratio: f64,
    /// Table changes applied to the base scenario for the EC builder.
    pub ec_overrides: Option<ScenarioOverrides>,
    pub maintain_overall_k: bool,
    /// Ground-reflection loss relative to LOS.
    pub reflection_loss_db: f64,
}

impl Default for CombinerConfig {
    fn default() -> Self {
        CombinerConfig {
            mode: ConfigId::Baseline,
            ec_power_ratio: 0.3,
            ec_overrides: Some(Self::default_ec_overrides()),
            maintain_overall_k: true,
            reflection_loss_db: 3.0,
        }
    }
}

impl CombinerConfig {
    /// DS fixed at 5 ns, four clusters, r_tau = 2.
    pub fn default_ec_overrides() -> ScenarioOverrides {
        ScenarioOverrides {
            r_tau: Some(2.0),
            num_clusters: Some(4),
            mu_lg_ds: Some(5e-9f64.log10()),
            sigma_lg_ds: Some(0.0),
            zeta_db: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_for(self.mode)
    }

    pub fn validate_for(&self, id: ConfigId) -> Result<()> {
        if !(0.0..=1.0).contains(&self.ec_power_ratio) {
            return Err(Error::validation(
                "combiner.ec_power_ratio must lie in [0, 1]",
            ));
        }
        if !self.reflection_loss_db.is_finite() {
            return Err(Error::validation(
                "combiner.reflection_loss_dB must be finite",
            ));
        }
        if id.uses_two_builders() && self.ec_overrides.is_none() {
            return Err(Error::validation(format!(
                "configuration {id} needs EC scenario overrides (combiner.ec.*)"
            )));
        }
        Ok(())
    }
}

/// Merges an LC channel (carrying the LOS cluster) with an NLOS-only EC
/// channel.
///
/// The NLOS budget is split `ec_power_ratio : 1 - ec_power_ratio` between the
/// EC clusters and the LC NLOS clusters. With `maintain_overall_k` the budget
/// is `T / (K + 1)` and the LOS gets `T K / (K + 1)`, so the overall K equals
/// `lsp.k_db`; otherwise the budget is the sum of both inputs' NLOS powers and
/// the result is rescaled to `T`. Zero-power clusters are dropped.
pub fn combine(lc: Cir, ec: Cir, cfg: &CombinerConfig, lsp: &LspState) -> Result<Cir> {
    let (t_lc, t_ec) = (lc.total_power_target_db, ec.total_power_target_db);
    if (t_lc - t_ec).abs() > 1e-12 * t_lc.abs().max(1.0) {
        return Err(Error::MismatchedTargets { lc: t_lc, ec: t_ec });
    }
    if ec.los().is_some() {
        return Err(Error::validation("EC input must not carry a LOS cluster"));
    }
    let los_power = lc.los().ok_or(Error::MissingLos)?.power;
    let total = lc.target_power();
    let lc_nlos: f64 = lc.nlos().map(|c| c.power).sum();
    let ec_sum: f64 = ec.clusters.iter().map(|c| c.power).sum();
    let ratio = cfg.ec_power_ratio;

    let (los_new, budget) = if cfg.maintain_overall_k {
        let k = 10f64.powf(lsp.k_db / 10.0);
        (total * k / (k + 1.0), total / (k + 1.0))
    } else {
        (los_power, lc_nlos + ec_sum)
    };
    let scale = |want: f64, have: f64| -> Result<f64> {
        if want == 0.0 {
            Ok(0.0)
        } else if have > 0.0 {
            Ok(want / have)
        } else {
            Err(Error::AllZeroPower)
        }
    };
    let ec_scale = scale(ratio * budget, ec_sum)?;
    let lc_scale = scale((1.0 - ratio) * budget, lc_nlos)?;

    let mut out = lc;
    for c in &mut out.clusters {
        c.power *= if c.origin == Origin::Los {
            los_new / los_power
        } else {
            lc_scale
        };
    }
    out.clusters.extend(ec.clusters.into_iter().map(|mut c| {
        c.power *= ec_scale;
        c
    }));
    out.clusters.retain(|c| c.power > 0.0);
    out.sort();
    if !cfg.maintain_overall_k {
        out.renormalize();
    }
    Ok(out)
}

/// Statistical part of a configuration (no geometry yet), normalized to
/// `target_db`. 104.20/104.60 use the LC builder alone; 104.63/104.66 add the
/// EC builder and combine.
pub fn statistical_cir(
    id: ConfigId,
    sim: &SimConfig,
    lsp: &LspState,
    target_db: f64,
    streams: &mut DropStreams,
) -> Result<Cir> {
    let two = id.uses_two_builders();
    let lc_tag = if two {
        BuilderTag::Late
    } else {
        BuilderTag::None
    };
    let lc = build_statistical_cir(&sim.scenario, lsp, &mut streams.late, lc_tag, target_db)?;
    if !two {
        return Ok(lc);
    }
    sim.combiner.validate_for(id)?;
    let overrides = sim.combiner.ec_overrides.as_ref().ok_or_else(|| {
        Error::validation(format!("configuration {id} needs EC scenario overrides"))
    })?;
    let ec_scenario = overrides.apply(&sim.scenario);
    ec_scenario.validate()?;
    let g: f64 = streams.early.sample(StandardNormal);
    let ec_lsp = LspState {
        ds: 10f64.powf(ec_scenario.mu_lg_ds + ec_scenario.sigma_lg_ds * g),
        k_db: PURE_NLOS,
        sf_db: lsp.sf_db,
    };
    let ec = build_statistical_cir(
        &ec_scenario,
        &ec_lsp,
        &mut streams.early,
        BuilderTag::Early,
        target_db,
    )?;
    combine(lc, ec, &sim.combiner, lsp)
}

/// Sets the LOS phase from the link and, for the GR configurations, injects
/// the ground reflection.
pub fn apply_geometry(cir: Cir, id: ConfigId, sim: &SimConfig, link: &GeometryLink) -> Result<Cir> {
    let los = los_path(link);
    let paths = if id.has_ground_reflection() {
        vec![ground_reflection_path(
            link,
            sim.combiner.reflection_loss_db,
        )?]
    } else {
        Vec::new()
    };
    inject_deterministic(cir, &los, &paths)
}

/// Full channel for one configuration on one link.
pub fn realize_configuration(
    id: ConfigId,
    sim: &SimConfig,
    link: &GeometryLink,
    streams: &mut DropStreams,
) -> Result<Cir> {
    let lsp = draw_lsps(&sim.scenario, &mut streams.large_scale);
    let target_db = pathloss_db(link, &sim.scenario) + lsp.sf_db;
    let cir = statistical_cir(id, sim, &lsp, target_db, streams)?;
    apply_geometry(cir, id, sim, link)
}

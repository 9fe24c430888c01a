//! Small-scale channel builder.
//!
//! For `N` clusters the builder draws `x_n ~ U(0, 1]` and
//! `z_n ~ N(0, zeta^2)` (all `x` first, then all `z`, then one uniform phase
//! per cluster), and evaluates
//!
//! ```text
//! tau_n = -r_tau * DS * ln(x_n)
//! P_n   = exp(-tau_n * (r_tau - 1) / (r_tau * DS)) * 10^(z_n / 10)
//! ```
//!
//! Powers use the raw delays; the emitted delays are shifted so the earliest
//! is zero. In LOS condition the LOS path takes the earliest delay slot, so
//! a table with `N` clusters yields the LOS path plus `N - 1` NLOS clusters.

use std::f64::consts::TAU;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::largescale::LspState;
use crate::scenario::ScenarioParams;

/// K-factor sentinel meaning "no LOS cluster".
pub const PURE_NLOS: f64 = f64::NEG_INFINITY;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterDraw {
    /// Uniform variate in (0, 1].
    pub x: f64,
    /// Per-cluster shadowing in dB.
    pub z_db: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Origin {
    Los,
    Statistical,
    GroundReflection,
}

impl Origin {
    pub fn as_str(self) -> &'static str {
        match self {
            Origin::Los => "LOS",
            Origin::Statistical => "statistical",
            Origin::GroundReflection => "GR",
        }
    }
}

/// Which builder produced a cluster.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BuilderTag {
    Early,
    Late,
    None,
}

impl BuilderTag {
    pub fn as_str(self) -> &'static str {
        match self {
            BuilderTag::Early => "EC",
            BuilderTag::Late => "LC",
            BuilderTag::None => "none",
        }
    }
}

/// One complex tap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cluster {
    /// Excess delay relative to the LOS path, seconds.
    pub delay: f64,
    /// Linear power.
    pub power: f64,
    /// Radians in [0, 2π).
    pub phase: f64,
    pub origin: Origin,
    pub tag: BuilderTag,
}

/// Wideband channel impulse response.
#[derive(Debug, Clone, PartialEq)]
pub struct Cir {
    /// Sorted by ascending delay; a LOS cluster, when present, comes first.
    pub clusters: Vec<Cluster>,
    /// Absolute LOS propagation time d/c, seconds.
    pub los_delay_abs: f64,
    /// Pathloss plus shadow fading, dB. Cluster powers sum to 10^(-target/10).
    pub total_power_target_db: f64,
    pub lsp: LspState,
    /// Draws behind the statistical clusters, kept for inspection.
    pub draws: Vec<ClusterDraw>,
}

impl Cir {
    pub fn total_power(&self) -> f64 {
        self.clusters.iter().map(|c| c.power).sum()
    }

    pub fn target_power(&self) -> f64 {
        db_to_lin(-self.total_power_target_db)
    }

    pub fn los(&self) -> Option<&Cluster> {
        self.clusters.iter().find(|c| c.origin == Origin::Los)
    }

    pub fn los_mut(&mut self) -> Option<&mut Cluster> {
        self.clusters.iter_mut().find(|c| c.origin == Origin::Los)
    }

    pub fn nlos(&self) -> impl Iterator<Item = &Cluster> {
        self.clusters.iter().filter(|c| c.origin != Origin::Los)
    }

    /// Scales every cluster so the powers sum to the target.
    pub fn renormalize(&mut self) {
        let scale = self.target_power() / self.total_power();
        for c in &mut self.clusters {
            c.power *= scale;
        }
    }

    /// Restores the ordering invariant (stable, LOS first among equal delays).
    pub fn sort(&mut self) {
        self.clusters.sort_by(|a, b| {
            a.delay
                .total_cmp(&b.delay)
                .then_with(|| (b.origin == Origin::Los).cmp(&(a.origin == Origin::Los)))
        });
    }
}

pub fn db_to_lin(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Draws `N` cluster variates: all `x_n`, then all `z_n`.
pub fn draw_cluster_draws<R: Rng + ?Sized>(
    scenario: &ScenarioParams,
    rng: &mut R,
) -> Vec<ClusterDraw> {
    let n = scenario.num_clusters;
    // random::<f64>() is in [0, 1); 1 - u is in (0, 1].
    let xs: Vec<f64> = (0..n).map(|_| 1.0 - rng.random::<f64>()).collect();
    let zs: Vec<f64> = (0..n)
        .map(|_| scenario.zeta_db * rng.sample::<f64, _>(StandardNormal))
        .collect();
    xs.into_iter()
        .zip(zs)
        .map(|(x, z_db)| ClusterDraw { x, z_db })
        .collect()
}

/// Unshifted delays `-r_tau * DS * ln(x_n)`, in draw order.
pub fn raw_cluster_delays(
    scenario: &ScenarioParams,
    lsp: &LspState,
    draws: &[ClusterDraw],
) -> Result<Vec<f64>> {
    draws
        .iter()
        .map(|d| {
            if !(d.x > 0.0 && d.x <= 1.0) {
                return Err(Error::DegenerateDraw(d.x));
            }
            // -0.0 for x = 1 would print oddly; the sum with 0.0 maps it to +0.
            Ok(-scenario.r_tau * lsp.ds * d.x.ln() + 0.0)
        })
        .collect()
}

/// Delays shifted so the earliest is zero, sorted ascending.
pub fn draw_cluster_delays(
    scenario: &ScenarioParams,
    lsp: &LspState,
    draws: &[ClusterDraw],
) -> Result<Vec<f64>> {
    let raw = raw_cluster_delays(scenario, lsp, draws)?;
    let min = raw.iter().copied().fold(f64::INFINITY, f64::min);
    let mut out: Vec<f64> = raw.iter().map(|t| t - min).collect();
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// Unnormalized cluster powers from the raw (pre-shift) delays.
pub fn draw_cluster_powers(
    scenario: &ScenarioParams,
    lsp: &LspState,
    delays_raw: &[f64],
    draws: &[ClusterDraw],
) -> Vec<f64> {
    assert_eq!(delays_raw.len(), draws.len(), "one delay per draw");
    let r = scenario.r_tau;
    delays_raw
        .iter()
        .zip(draws)
        .map(|(tau, d)| (-tau * (r - 1.0) / (r * lsp.ds)).exp() * 10f64.powf(d.z_db / 10.0))
        .collect()
}

/// Splits the total power between a LOS cluster and the given NLOS clusters
/// according to `lsp.k_db`, and scales everything to the target.
///
/// With `k_db == PURE_NLOS` no LOS cluster is created and the NLOS clusters
/// carry the whole target power.
pub fn apply_k_and_normalize(
    clusters: Vec<Cluster>,
    lsp: &LspState,
    total_power_target_db: f64,
) -> Result<Cir> {
    let total = db_to_lin(-total_power_target_db);
    let k_lin = db_to_lin(lsp.k_db);
    let with_los = lsp.k_db.is_finite();
    let nlos_sum: f64 = clusters.iter().map(|c| c.power).sum();

    if clusters.iter().any(|c| !(c.power >= 0.0)) {
        return Err(Error::validation("cluster powers must be non-negative"));
    }

    let mut out = Vec::with_capacity(clusters.len() + 1);
    let nlos_share = if with_los {
        if clusters.is_empty() {
            // LOS-only channel: nothing to split against.
            out.push(los_cluster(total));
            0.0
        } else {
            out.push(los_cluster(total * k_lin / (k_lin + 1.0)));
            total / (k_lin + 1.0)
        }
    } else {
        total
    };
    if !clusters.is_empty() {
        if !(nlos_sum > 0.0) {
            return Err(Error::AllZeroPower);
        }
        let scale = nlos_share / nlos_sum;
        out.extend(clusters.into_iter().map(|mut c| {
            c.power *= scale;
            c
        }));
    } else if !with_los {
        return Err(Error::AllZeroPower);
    }

    let mut cir = Cir {
        clusters: out,
        los_delay_abs: 0.0,
        total_power_target_db,
        lsp: *lsp,
        draws: Vec::new(),
    };
    cir.sort();
    Ok(cir)
}

fn los_cluster(power: f64) -> Cluster {
    Cluster {
        delay: 0.0,
        power,
        phase: 0.0,
        origin: Origin::Los,
        tag: BuilderTag::None,
    }
}

/// Full statistical CIR: draws, delays, powers, phases, K split and
/// normalization. The LOS phase is left at zero for the geometry stage.
pub fn build_statistical_cir<R: Rng + ?Sized>(
    scenario: &ScenarioParams,
    lsp: &LspState,
    rng: &mut R,
    tag: BuilderTag,
    total_power_target_db: f64,
) -> Result<Cir> {
    let draws = draw_cluster_draws(scenario, rng);
    let phases: Vec<f64> = (0..draws.len())
        .map(|_| rng.random::<f64>() * TAU)
        .collect();
    let raw = raw_cluster_delays(scenario, lsp, &draws)?;
    let powers = draw_cluster_powers(scenario, lsp, &raw, &draws);

    let (first, min) =
        raw.iter().enumerate().fold(
            (0, f64::INFINITY),
            |(bi, bv), (i, &v)| if v < bv { (i, v) } else { (bi, bv) },
        );
    let los_slot = lsp.k_db.is_finite().then_some(first);

    let clusters: Vec<Cluster> = (0..draws.len())
        .filter(|&i| Some(i) != los_slot)
        .map(|i| Cluster {
            delay: raw[i] - min,
            power: powers[i],
            phase: phases[i],
            origin: Origin::Statistical,
            tag,
        })
        .collect();

    let mut cir = apply_k_and_normalize(clusters, lsp, total_power_target_db)?;
    cir.draws = draws;
    Ok(cir)
}

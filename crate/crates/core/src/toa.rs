//! First-path time-of-arrival estimation on the correlation magnitude.
//!
//! The estimator looks for the inflection point of the first rising edge:
//!
//! 1. find the global magnitude peak;
//! 2. within `edge_search_back` before the peak, take the earliest sample whose
//!    magnitude is within `detect_threshold_rel_db` of the peak;
//! 3. follow the edge up to the next local maximum and take the largest first
//!    difference of the magnitude on that edge, refined by a parabola through
//!    the neighbouring differences;
//! 4. subtract the calibration offset, i.e. the inflection position of a clean
//!    unit pulse at delay 0 under the same signal parameters.

use std::collections::HashMap;
use std::sync::{LazyLock, Mutex};

use crate::builder::{BuilderTag, Cir, Cluster, Origin};
use crate::error::{Error, Result};
use crate::largescale::LspState;
use crate::waveform::{bandlimited_cir, BandlimitedCir, SignalParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToaConfig {
    /// Detection threshold below the peak, dB (positive number).
    pub detect_threshold_rel_db: f64,
    /// How far before the peak the first edge may lie, seconds. `None` means
    /// two inverse bandwidths.
    pub edge_search_back: Option<f64>,
}

impl Default for ToaConfig {
    fn default() -> Self {
        ToaConfig {
            detect_threshold_rel_db: 10.0,
            edge_search_back: None,
        }
    }
}

impl ToaConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.detect_threshold_rel_db > 0.0) || !self.detect_threshold_rel_db.is_finite() {
            return Err(Error::validation("toa.detect_threshold_rel_dB must be > 0"));
        }
        if let Some(b) = self.edge_search_back {
            if !(b > 0.0) || !b.is_finite() {
                return Err(Error::validation("toa.edge_search_back_s must be > 0"));
            }
        }
        Ok(())
    }

    pub fn search_back(&self, params: &SignalParams) -> f64 {
        self.edge_search_back.unwrap_or(2.0 / params.bandwidth)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToaEstimate {
    /// Estimated first-path time relative to the true LOS delay's frame
    /// (the LOS path sits at t = 0).
    pub toa: f64,
    /// `toa` minus the true LOS delay.
    pub error: f64,
    pub first_path_power_db: f64,
    pub peak_power_db: f64,
}

/// Uncalibrated inflection time of the first rising edge.
pub fn raw_inflection_time(blc: &BandlimitedCir, cfg: &ToaConfig) -> Result<f64> {
    let m = blc.magnitudes();
    let (peak, pmax) =
        m.iter().enumerate().fold(
            (0usize, 0.0f64),
            |a, (i, &v)| if v > a.1 { (i, v) } else { a },
        );
    if !(pmax > 0.0) || !pmax.is_finite() {
        return Err(Error::NoDetection);
    }
    let thr = pmax * 10f64.powf(-cfg.detect_threshold_rel_db / 20.0);
    let back = (cfg.search_back(&blc.params) * blc.rate).round() as usize;
    let lo = peak.saturating_sub(back);
    let start = (lo..=peak)
        .find(|&i| m[i] >= thr)
        .ok_or(Error::NoDetection)?;

    let mut top = start;
    while top < peak && m[top + 1] >= m[top] {
        top += 1;
    }
    // d[k] = m[k+1] - m[k]; the edge spans differences start-1 ..= top-1.
    let diff = |k: usize| m[k + 1] - m[k];
    let first = start.saturating_sub(1);
    let last = top.max(first + 1) - 1;
    let k = (first..=last)
        .max_by(|&a, &b| diff(a).total_cmp(&diff(b)).then(b.cmp(&a)))
        .unwrap_or(first);
    let mut delta = 0.0;
    if k >= 1 && k + 2 < m.len() {
        let (a, b, c) = (diff(k - 1), diff(k), diff(k + 1));
        let den = a - 2.0 * b + c;
        if den < 0.0 {
            delta = (0.5 * (a - c) / den).clamp(-0.5, 0.5);
        }
    }
    Ok(blc.time_of(k as f64 + 0.5 + delta))
}

fn unit_pulse() -> Cir {
    Cir {
        clusters: vec![Cluster {
            delay: 0.0,
            power: 1.0,
            phase: 0.0,
            origin: Origin::Los,
            tag: BuilderTag::None,
        }],
        los_delay_abs: 0.0,
        total_power_target_db: 0.0,
        lsp: LspState {
            ds: 0.0,
            k_db: f64::INFINITY,
            sf_db: 0.0,
        },
        draws: Vec::new(),
    }
}

type CacheKey = [u64; 9];

static OFFSETS: LazyLock<Mutex<HashMap<CacheKey, f64>>> = LazyLock::new(Default::default);

fn cache_key(p: &SignalParams, cfg: &ToaConfig) -> CacheKey {
    [
        p.bandwidth.to_bits(),
        p.sample_rate.to_bits(),
        p.subcarrier_spacing.to_bits(),
        p.window_length.to_bits(),
        p.pre_window.to_bits(),
        p.oversample_factor as u64,
        p.comb as u64,
        cfg.detect_threshold_rel_db.to_bits(),
        cfg.search_back(p).to_bits(),
    ]
}

/// Systematic offset between the detected inflection point and the true
/// delay for a clean unit pulse. Cached per parameter set.
pub fn calibrate_offset(params: &SignalParams, cfg: &ToaConfig) -> Result<f64> {
    let key = cache_key(params, cfg);
    if let Some(v) = OFFSETS.lock().unwrap().get(&key) {
        return Ok(*v);
    }
    let mut clean = *params;
    clean.snr_db = None;
    let offset = raw_inflection_time(&bandlimited_cir(&unit_pulse(), &clean), cfg)?;
    OFFSETS.lock().unwrap().insert(key, offset);
    Ok(offset)
}

/// Calibrated first-path estimate. The true LOS delay is 0 in the CIR's frame.
pub fn estimate_toa(blc: &BandlimitedCir, cfg: &ToaConfig) -> Result<ToaEstimate> {
    let toa = raw_inflection_time(blc, cfg)? - calibrate_offset(&blc.params, cfg)?;
    let peak = blc.samples.iter().map(|s| s.norm_sqr()).fold(0.0, f64::max);
    Ok(ToaEstimate {
        toa,
        error: toa,
        first_path_power_db: 10.0 * blc.eval_at(toa).norm_sqr().log10(),
        peak_power_db: 10.0 * peak.log10(),
    })
}

//! Channel metrics: K_EC, overall K-factor, delay spread, band powers and
//! empirical CDF helpers.

use std::fmt;

use crate::builder::{Cir, Origin};
use crate::error::{Error, Result};
use crate::toa::ToaEstimate;
use crate::waveform::BandlimitedCir;

/// K-factor restricted to NLOS clusters inside a window after the LOS path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KecValue {
    Db(f64),
    /// No NLOS cluster inside the window.
    NoEc,
}

impl KecValue {
    pub fn db(self) -> Option<f64> {
        match self {
            KecValue::Db(v) => Some(v),
            KecValue::NoEc => None,
        }
    }

    /// NoEC maps to +∞, which keeps orderings and CDFs consistent.
    pub fn as_f64(self) -> f64 {
        self.db().unwrap_or(f64::INFINITY)
    }

    pub fn is_no_ec(self) -> bool {
        self == KecValue::NoEc
    }
}

impl fmt::Display for KecValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KecValue::Db(v) => write!(f, "{v}"),
            KecValue::NoEc => f.write_str("inf"),
        }
    }
}

fn los_power(cir: &Cir) -> Result<f64> {
    match cir.los() {
        Some(c) if c.power > 0.0 => Ok(c.power),
        _ => Err(Error::MissingLos),
    }
}

fn ratio_db(los: f64, nlos: f64) -> f64 {
    if nlos > 0.0 {
        10.0 * (los / nlos).log10()
    } else {
        f64::INFINITY
    }
}

/// `10 log10(P_LOS / Σ P_n)` over NLOS clusters with delay `< upsilon`.
/// Ground reflections count as NLOS clusters here.
pub fn kec(cir: &Cir, upsilon: f64) -> Result<KecValue> {
    let los = los_power(cir)?;
    let mut any = false;
    let mut sum = 0.0;
    for c in cir.nlos().filter(|c| c.delay < upsilon) {
        any = true;
        sum += c.power;
    }
    Ok(if any {
        KecValue::Db(ratio_db(los, sum))
    } else {
        KecValue::NoEc
    })
}

/// Which side of the K-factor a deterministic ground reflection is booked on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GrAccounting {
    /// GR belongs to the specular component, as in the TR 38.901 ground
    /// reflection formulation where the reflected ray is scaled together with
    /// the direct ray by `K_R / (K_R + 1)`.
    #[default]
    Specular,
    /// GR counts as diffuse (NLOS) power.
    Diffuse,
}

/// Overall Ricean K-factor in dB, +∞ when there is no NLOS power.
///
/// Uses [`GrAccounting::Specular`]. Without deterministic paths this equals
/// `kec(cir, ∞)`.
pub fn overall_k(cir: &Cir) -> Result<f64> {
    overall_k_with(cir, GrAccounting::Specular)
}

pub fn overall_k_with(cir: &Cir, gr: GrAccounting) -> Result<f64> {
    let los = los_power(cir)?;
    let (mut spec, mut diff) = (los, 0.0);
    for c in cir.nlos() {
        if c.origin == Origin::GroundReflection && gr == GrAccounting::Specular {
            spec += c.power;
        } else {
            diff += c.power;
        }
    }
    Ok(ratio_db(spec, diff))
}

/// Power-weighted RMS delay spread in seconds.
pub fn rms_delay_spread(cir: &Cir) -> f64 {
    let p: f64 = cir.total_power();
    let m1 = cir.clusters.iter().map(|c| c.power * c.delay).sum::<f64>() / p;
    let m2 = cir
        .clusters
        .iter()
        .map(|c| c.power * c.delay * c.delay)
        .sum::<f64>()
        / p;
    (m2 - m1 * m1).max(0.0).sqrt()
}

fn sorted(samples: &[f64]) -> Result<Vec<f64>> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let mut v = samples.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// Right-continuous empirical CDF `#{s <= x} / n` at each point.
pub fn ecdf(samples: &[f64], points: &[f64]) -> Result<Vec<f64>> {
    let v = sorted(samples)?;
    let n = v.len() as f64;
    Ok(points
        .iter()
        .map(|x| v.partition_point(|s| s <= x) as f64 / n)
        .collect())
}

/// `(value, cum_fraction)` at every distinct sample value.
pub fn ecdf_steps(samples: &[f64]) -> Result<Vec<(f64, f64)>> {
    let v = sorted(samples)?;
    let n = v.len() as f64;
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (i, &s) in v.iter().enumerate() {
        match out.last_mut() {
            Some(last) if last.0 == s => last.1 = (i + 1) as f64 / n,
            _ => out.push((s, (i + 1) as f64 / n)),
        }
    }
    Ok(out)
}

/// Linear-interpolation quantile (Hyndman-Fan type 7), `q` in [0, 1].
pub fn quantile(samples: &[f64], q: f64) -> Result<f64> {
    let v = sorted(samples)?;
    let h = (v.len() - 1) as f64 * q.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    if lo == hi {
        return Ok(v[lo]);
    }
    Ok(v[lo] + (h - lo as f64) * (v[hi] - v[lo]))
}

/// Two-sample Kolmogorov-Smirnov statistic `sup |F_a - F_b|`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<f64> {
    let (a, b) = (sorted(a)?, sorted(b)?);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = if a[i].total_cmp(&b[j]).is_le() {
            a[i]
        } else {
            b[j]
        };
        while i < a.len() && a[i] == x {
            i += 1;
        }
        while j < b.len() && b[j] == x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(d)
}

/// `(rsrp_dB, rsrpp_dB)`: mean in-band power of the band-limited CIR and the
/// power of the correlation at the estimated first-path time.
pub fn band_powers(blc: &BandlimitedCir, est: &ToaEstimate) -> (f64, f64) {
    let rsrp = 10.0 * blc.in_band_power().log10();
    let rsrpp = 10.0 * blc.eval_at(est.toa).norm_sqr().log10();
    (rsrp, rsrpp)
}

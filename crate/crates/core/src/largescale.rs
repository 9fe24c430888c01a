//! Large-scale parameters: delay spread, Ricean K-factor and shadow fading.
//!
//! Per drop, three standard normal innovations are drawn in the fixed order
//! `g1` (lgDS), `g2` (K), `g3` (SF), mixed through the lower Cholesky factor
//! of the scenario's cross-correlation matrix, and mapped to
//!
//! ```text
//! ds    = 10^(mu_lgDS + sigma_lgDS * g1)   [s]
//! k_dB  = mu_K_dB + sigma_K_dB * g2
//! sf_dB = sigma_SF_dB * g3
//! ```
//!
//! With zero cross-correlation the factor is the identity and the mapping is
//! exactly the one above.

use nalgebra::{Cholesky, DMatrix, DVector, Matrix3, Point2, Point3, Vector3};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::rng::{substream, Purpose};
use crate::scenario::{LspCrossCorrelation, ScenarioParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LspState {
    /// RMS delay spread in seconds.
    pub ds: f64,
    pub k_db: f64,
    pub sf_db: f64,
}

/// Lower Cholesky factor of the 3x3 LSP correlation matrix, or `None` when the
/// matrix is not positive definite.
pub(crate) fn cross_correlation_factor(x: &LspCrossCorrelation) -> Option<Matrix3<f64>> {
    let m = Matrix3::new(
        1.0, x.ds_k, x.ds_sf, //
        x.ds_k, 1.0, x.k_sf, //
        x.ds_sf, x.k_sf, 1.0,
    );
    Cholesky::new(m).map(|c| c.l())
}

fn map_innovations(scenario: &ScenarioParams, g: Vector3<f64>) -> LspState {
    let l = cross_correlation_factor(&scenario.xcorr)
        .expect("scenario validated: cross-correlation matrix is positive definite");
    let g = l * g;
    LspState {
        ds: 10f64.powf(scenario.mu_lg_ds + scenario.sigma_lg_ds * g[0]),
        k_db: scenario.mu_k_db + scenario.sigma_k_db * g[1],
        sf_db: scenario.sigma_sf_db * g[2],
    }
}

/// Draws one LSP realization from `rng` (consumes exactly three normals).
pub fn draw_lsps<R: Rng + ?Sized>(scenario: &ScenarioParams, rng: &mut R) -> LspState {
    let g1: f64 = rng.sample(StandardNormal);
    let g2: f64 = rng.sample(StandardNormal);
    let g3: f64 = rng.sample(StandardNormal);
    map_innovations(scenario, Vector3::new(g1, g2, g3))
}

/// Spatially consistent LSPs at a list of positions.
///
/// Each innovation field is a zero-mean, unit-variance Gaussian process with
/// kernel `exp(-dist / d_decorr)`, sampled jointly on the unique positions via
/// a Cholesky factor. Decorrelation distances are horizontal-plane distances:
/// `dist` ignores z, so positions on one vertical line share their LSPs.
pub fn lsp_field_at(
    scenario: &ScenarioParams,
    positions: &[Point3<f64>],
    seed: u64,
) -> Vec<LspState> {
    let mut unique: Vec<Point2<f64>> = Vec::new();
    let index: Vec<usize> = positions
        .iter()
        .map(|p| {
            let h = Point2::new(p.x, p.y);
            match unique.iter().position(|u| *u == h) {
                Some(i) => i,
                None => {
                    unique.push(h);
                    unique.len() - 1
                }
            }
        })
        .collect();

    let decorr = [scenario.decorr.ds, scenario.decorr.k, scenario.decorr.sf];
    let fields: Vec<DVector<f64>> = decorr
        .iter()
        .enumerate()
        .map(|(which, &d)| {
            let mut rng = substream(seed, which as u64, Purpose::LspField);
            let g = DVector::from_fn(unique.len(), |_, _| rng.sample::<f64, _>(StandardNormal));
            exponential_kernel_factor(&unique, d) * g
        })
        .collect();

    index
        .iter()
        .map(|&i| {
            map_innovations(
                scenario,
                Vector3::new(fields[0][i], fields[1][i], fields[2][i]),
            )
        })
        .collect()
}

fn exponential_kernel_factor(points: &[Point2<f64>], decorr: f64) -> DMatrix<f64> {
    let n = points.len();
    let cov = DMatrix::from_fn(n, n, |i, j| {
        (-(points[i] - points[j]).norm() / decorr).exp()
    });
    // Distinct points give a positive definite matrix, but near-duplicates can
    // lose it to rounding; a vanishing diagonal load recovers it.
    let mut jitter = 0.0;
    loop {
        let m = &cov + DMatrix::identity(n, n) * jitter;
        if let Some(c) = Cholesky::new(m) {
            return c.l();
        }
        jitter = if jitter == 0.0 { 1e-12 } else { jitter * 10.0 };
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn degenerate() -> ScenarioParams {
        let mut s = ScenarioParams::inf_los();
        s.sigma_lg_ds = 0.0;
        s.sigma_k_db = 0.0;
        s.sigma_sf_db = 0.0;
        s
    }

    #[test]
    fn degenerate_distributions_return_means() {
        let s = degenerate();
        let lsp = draw_lsps(&s, &mut ChaCha8Rng::seed_from_u64(3));
        assert_eq!(lsp.ds, 10f64.powf(s.mu_lg_ds));
        assert_eq!(lsp.k_db, s.mu_k_db);
        assert_eq!(lsp.sf_db, 0.0);
    }

    #[test]
    fn mu_lg_ds_minus_7_7_is_about_20_ns() {
        let mut s = degenerate();
        s.mu_lg_ds = -7.7;
        let lsp = draw_lsps(&s, &mut ChaCha8Rng::seed_from_u64(0));
        assert!((lsp.ds - 19.9526e-9).abs() < 1e-12, "{}", lsp.ds);
    }

    #[test]
    fn k_factor_sample_std() {
        let mut s = ScenarioParams::inf_los();
        s.sigma_k_db = 4.0;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 100_000;
        let k: Vec<f64> = (0..n).map(|_| draw_lsps(&s, &mut rng).k_db).collect();
        let mean = k.iter().sum::<f64>() / n as f64;
        let var = k.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        let sd = var.sqrt();
        assert!((3.9..=4.1).contains(&sd), "{sd}");
    }

    #[test]
    fn draw_order_is_ds_then_k_then_sf() {
        let s = ScenarioParams::inf_los();
        let mut a = ChaCha8Rng::seed_from_u64(9);
        let mut b = a.clone();
        let lsp = draw_lsps(&s, &mut a);
        let g: Vec<f64> = (0..3).map(|_| b.sample(StandardNormal)).collect();
        assert_eq!(lsp.ds, 10f64.powf(s.mu_lg_ds + s.sigma_lg_ds * g[0]));
        assert_eq!(lsp.k_db, s.mu_k_db + s.sigma_k_db * g[1]);
        assert_eq!(lsp.sf_db, s.sigma_sf_db * g[2]);
    }

    #[test]
    fn identical_positions_identical_values() {
        let s = ScenarioParams::inf_los();
        let p = Point3::new(28.0, 0.0, 1.5);
        let out = lsp_field_at(&s, &[p, Point3::new(1.0, 2.0, 3.0), p], 42);
        assert_eq!(out[0], out[2]);
        assert_ne!(out[0], out[1]);
    }

    #[test]
    fn field_is_deterministic() {
        let s = ScenarioParams::inf_los();
        let pts: Vec<_> = (0..20).map(|i| Point3::new(i as f64, 0.0, 1.0)).collect();
        assert_eq!(lsp_field_at(&s, &pts, 5), lsp_field_at(&s, &pts, 5));
    }

    fn sf_correlation(separation: f64) -> f64 {
        let s = ScenarioParams::inf_los();
        let pts = [Point3::origin(), Point3::new(separation, 0.0, 0.0)];
        let n = 10_000;
        let pairs: Vec<(f64, f64)> = (0..n)
            .map(|seed| {
                let v = lsp_field_at(&s, &pts, seed);
                (v[0].sf_db, v[1].sf_db)
            })
            .collect();
        let ma = pairs.iter().map(|p| p.0).sum::<f64>() / n as f64;
        let mb = pairs.iter().map(|p| p.1).sum::<f64>() / n as f64;
        let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
        for (a, b) in &pairs {
            sab += (a - ma) * (b - mb);
            saa += (a - ma).powi(2);
            sbb += (b - mb).powi(2);
        }
        sab / (saa * sbb).sqrt()
    }

    #[test]
    fn field_correlation_near() {
        let d = ScenarioParams::inf_los().decorr.sf;
        let r = sf_correlation(0.1 * d);
        assert!((0.86..=0.95).contains(&r), "{r}");
    }

    #[test]
    fn field_correlation_far() {
        let d = ScenarioParams::inf_los().decorr.sf;
        let r = sf_correlation(100.0 * d);
        assert!(r.abs() < 0.05, "{r}");
    }

    #[test]
    fn height_sweep_shadowing_nearly_constant() {
        let s = ScenarioParams::inf_los();
        let pts: Vec<_> = (0..=260)
            .map(|i| Point3::new(28.0, 0.0, 0.7 + 0.01 * i as f64))
            .collect();
        for seed in 0..20 {
            let v = lsp_field_at(&s, &pts, seed);
            let (lo, hi) = v.iter().fold((f64::MAX, f64::MIN), |(lo, hi), l| {
                (lo.min(l.sf_db), hi.max(l.sf_db))
            });
            assert!(hi - lo < 0.5, "seed {seed}: spread {}", hi - lo);
        }
    }

    #[test]
    fn cross_correlation_is_applied() {
        let mut s = ScenarioParams::inf_los();
        s.xcorr.k_sf = 0.8;
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let n = 20_000;
        let v: Vec<LspState> = (0..n).map(|_| draw_lsps(&s, &mut rng)).collect();
        let mk = v.iter().map(|l| l.k_db).sum::<f64>() / n as f64;
        let ms = v.iter().map(|l| l.sf_db).sum::<f64>() / n as f64;
        let cov = v
            .iter()
            .map(|l| (l.k_db - mk) * (l.sf_db - ms))
            .sum::<f64>()
            / n as f64;
        let r = cov / (s.sigma_k_db * s.sigma_sf_db);
        assert!((r - 0.8).abs() < 0.02, "{r}");
    }
}

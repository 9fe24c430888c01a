//! Geometry-exact LOS and ground-reflection paths.
//!
//! The ground is the plane z = 0. The reflected path length is the distance
//! from the BS to the UE's mirror image `(x, y, -z)`.

use std::f64::consts::TAU;

use crate::builder::{db_to_lin, BuilderTag, Cir, Cluster, Origin};
use crate::error::{Error, Result};
use crate::scenario::{GeometryLink, SPEED_OF_LIGHT};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathKind {
    Los,
    GroundReflection,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeterministicPath {
    pub kind: PathKind,
    /// Meters.
    pub path_length: f64,
    /// Seconds relative to the LOS path.
    pub excess_delay: f64,
    /// Carrier phase of the path, `mod(-2π L / λ, 2π)`.
    pub phase: f64,
    /// Loss relative to the LOS amplitude; 0 for LOS.
    pub amplitude_gain_db: f64,
}

/// Carrier phase `mod(-2π L / λ, 2π)`. Whole multiples of λ map to 0.
pub fn geometric_phase(path_length: f64, wavelength: f64) -> f64 {
    let cycles = (path_length / wavelength).rem_euclid(1.0);
    let phase = (TAU * (1.0 - cycles)).rem_euclid(TAU);
    if TAU - phase < 1e-9 {
        0.0
    } else {
        phase
    }
}

pub fn los_path(link: &GeometryLink) -> DeterministicPath {
    let len = link.distance_3d();
    DeterministicPath {
        kind: PathKind::Los,
        path_length: len,
        excess_delay: 0.0,
        phase: geometric_phase(len, link.wavelength()),
        amplitude_gain_db: 0.0,
    }
}

pub fn ground_reflection_path(
    link: &GeometryLink,
    reflection_loss_db: f64,
) -> Result<DeterministicPath> {
    let (h_bs, h_ue) = (link.bs_position.z, link.ue_position.z);
    if !(h_bs > 0.0) || !(h_ue > 0.0) {
        return Err(Error::InvalidGeometry(format!(
            "ground reflection needs both antennas above ground (heights {h_bs} m, {h_ue} m)"
        )));
    }
    let dh = link.horizontal_distance();
    let los = link.distance_3d();
    let gr = dh.hypot(h_bs + h_ue);
    // gr^2 - los^2 = 4 h_bs h_ue; this form avoids cancellation for small h.
    let excess_len = 4.0 * h_bs * h_ue / (gr + los);
    Ok(DeterministicPath {
        kind: PathKind::GroundReflection,
        path_length: gr,
        excess_delay: excess_len / SPEED_OF_LIGHT,
        phase: geometric_phase(gr, link.wavelength()),
        amplitude_gain_db: -reflection_loss_db,
    })
}

/// Sets the LOS phase from geometry and appends the extra paths as
/// ground-reflection clusters with power `P_LOS * 10^(gain/10)`, then
/// rescales to the CIR's original target power.
pub fn inject_deterministic(
    mut cir: Cir,
    los: &DeterministicPath,
    paths: &[DeterministicPath],
) -> Result<Cir> {
    let los_cluster = cir.los_mut().ok_or(Error::MissingLos)?;
    los_cluster.phase = los.phase;
    let los_power = los_cluster.power;
    cir.los_delay_abs = los.path_length / SPEED_OF_LIGHT;

    if paths.is_empty() {
        return Ok(cir);
    }
    for p in paths {
        cir.clusters.push(Cluster {
            delay: p.excess_delay,
            power: los_power * db_to_lin(p.amplitude_gain_db),
            phase: p.phase,
            origin: Origin::GroundReflection,
            tag: BuilderTag::None,
        });
    }
    cir.sort();
    cir.renormalize();
    Ok(cir)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::largescale::LspState;
    use nalgebra::Point3;

    fn link(ue_h: f64) -> GeometryLink {
        GeometryLink::new(
            Point3::new(0.0, 0.0, 1.7),
            Point3::new(28.0, 0.0, ue_h),
            3.75e9,
        )
        .unwrap()
    }

    fn los_only_cir(power: f64) -> Cir {
        Cir {
            clusters: vec![
                Cluster {
                    delay: 0.0,
                    power,
                    phase: 0.0,
                    origin: Origin::Los,
                    tag: BuilderTag::None,
                },
                Cluster {
                    delay: 30e-9,
                    power: 1.0 - power,
                    phase: 1.0,
                    origin: Origin::Statistical,
                    tag: BuilderTag::Late,
                },
            ],
            los_delay_abs: 0.0,
            total_power_target_db: 0.0,
            lsp: LspState {
                ds: 1e-8,
                k_db: 0.0,
                sf_db: 0.0,
            },
            draws: vec![],
        }
    }

    #[test]
    fn los_length_hand_geometry() {
        assert!((los_path(&link(0.7)).path_length - 785f64.sqrt()).abs() < 1e-12);
        assert!((los_path(&link(0.7)).path_length - 28.0179).abs() < 1e-4);
        assert_eq!(los_path(&link(1.7)).path_length, 28.0);
    }

    #[test]
    fn whole_wavelengths_have_zero_phase() {
        let lambda = 0.08;
        assert_eq!(geometric_phase(350.0 * lambda, lambda), 0.0);
        assert_eq!(geometric_phase(0.0, lambda), 0.0);
        let quarter = geometric_phase(0.25 * lambda, lambda);
        assert!((quarter - 1.5 * std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn ground_reflection_low_ue() {
        let gr = ground_reflection_path(&link(0.7), 3.0).unwrap();
        assert!((gr.path_length - 789.76f64.sqrt()).abs() < 1e-12);
        let excess = gr.path_length - 785f64.sqrt();
        assert!((excess - 0.0848).abs() < 1e-3, "{excess}");
        assert!(
            (gr.excess_delay - 0.283e-9).abs() < 1e-12,
            "{}",
            gr.excess_delay
        );
        assert_eq!(gr.amplitude_gain_db, -3.0);
    }

    #[test]
    fn ground_reflection_high_ue() {
        let gr = ground_reflection_path(&link(3.3), 0.0).unwrap();
        let excess = gr.path_length - los_path(&link(3.3)).path_length;
        assert!((excess - 0.397).abs() < 1e-3, "{excess}");
        assert!(
            (gr.excess_delay - 1.32e-9).abs() < 0.01e-9,
            "{}",
            gr.excess_delay
        );
    }

    #[test]
    fn ground_reflection_vanishes_at_ground() {
        let gr = ground_reflection_path(&link(1e-9), 0.0).unwrap();
        assert!(gr.excess_delay < 1e-18);
        assert!(matches!(
            ground_reflection_path(&link(0.0), 0.0),
            Err(Error::InvalidGeometry(_))
        ));
    }

    #[test]
    fn sweep_spans_several_wavelengths() {
        let lo = ground_reflection_path(&link(0.7), 0.0)
            .unwrap()
            .excess_delay;
        let hi = ground_reflection_path(&link(3.3), 0.0)
            .unwrap()
            .excess_delay;
        let cycles = (hi - lo) * SPEED_OF_LIGHT / link(1.0).wavelength();
        assert!((3.0..=4.5).contains(&cycles), "{cycles}");
    }

    #[test]
    fn injection_without_paths_only_sets_phase() {
        let cir = los_only_cir(0.8);
        let l = los_path(&link(1.2));
        let out = inject_deterministic(cir.clone(), &l, &[]).unwrap();
        assert_eq!(out.clusters.len(), 2);
        assert_eq!(out.clusters[0].phase, l.phase);
        assert_eq!(out.clusters[0].power, 0.8);
        assert_eq!(out.clusters[1], cir.clusters[1]);
    }

    #[test]
    fn injection_adds_gr_and_renormalizes() {
        let cir = los_only_cir(0.8);
        let lk = link(2.0);
        let gr = ground_reflection_path(&lk, 3.0).unwrap();
        let out = inject_deterministic(cir, &los_path(&lk), &[gr]).unwrap();
        assert_eq!(out.clusters.len(), 3);
        assert_eq!(out.clusters[1].origin, Origin::GroundReflection);
        assert!((out.total_power() - 1.0).abs() < 1e-12);
        let ratio = out.clusters[1].power / out.clusters[0].power;
        assert!((ratio - 10f64.powf(-0.3)).abs() < 1e-12);
    }

    #[test]
    fn injection_requires_los() {
        let mut cir = los_only_cir(0.5);
        cir.clusters.remove(0);
        let lk = link(1.0);
        assert!(matches!(
            inject_deterministic(cir, &los_path(&lk), &[]),
            Err(Error::MissingLos)
        ));
    }

    proptest::proptest! {
        #[test]
        fn reciprocity(h_bs in 0.1f64..10.0, h_ue in 0.1f64..10.0, d in 0.0f64..100.0) {
            let a = GeometryLink::new(Point3::new(0.0, 0.0, h_bs), Point3::new(d, 0.0, h_ue), 3.75e9).unwrap();
            let b = a.swapped();
            let (la, lb) = (los_path(&a), los_path(&b));
            proptest::prop_assert!((la.path_length - lb.path_length).abs() < 1e-12);
            let ga = ground_reflection_path(&a, 3.0).unwrap();
            let gb = ground_reflection_path(&b, 3.0).unwrap();
            proptest::prop_assert!((ga.path_length - gb.path_length).abs() < 1e-12);
        }

        #[test]
        fn excess_delay_increasing_in_ue_height(h in 0.05f64..5.0, dh in 1e-4f64..1.0) {
            let a = ground_reflection_path(&link(h), 0.0).unwrap().excess_delay;
            let b = ground_reflection_path(&link(h + dh), 0.0).unwrap().excess_delay;
            proptest::prop_assert!(b > a);
            proptest::prop_assert!(a >= 0.0);
        }
    }
}

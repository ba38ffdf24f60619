use proptest::prelude::*;

use isosusy::specfun::{self, PrecisionConfig, WeberArgs};
use isosusy::superint2d::{self, System2D, SystemKind};
use isosusy::susy::{self, IsotonicParams, Region, Superpotential};
use isosusy::weber_spectra::{self, BarrierGeometry, EigenSolveConfig, OscillatorParams};
use isosusy::Execution;

fn seq() -> EigenSolveConfig {
    EigenSolveConfig {
        execution: Execution::Sequential,
        ..Default::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn weber_equation_holds(e in -8.0f64..4.0, z in -6.0f64..6.0) {
        let cfg = PrecisionConfig::default();
        let args = WeberArgs::new(e, z);
        for f in [
            specfun::weber_y1_jet(args, &cfg).unwrap(),
            specfun::weber_y2_jet(args, &cfg).unwrap(),
            specfun::pcf_u_jet(args, &cfg).unwrap(),
        ] {
            let r = (f.d2 - (0.25 * z * z + e) * f.value).abs() / f.value.abs().max(1.0);
            prop_assert!(r <= 1e-8, "residual {r}");
        }
    }

    #[test]
    fn wronskian_is_one(e in -8.0f64..4.0, z in -6.0f64..6.0) {
        let w = specfun::weber_wronskian(WeberArgs::new(e, z), &PrecisionConfig::default()).unwrap();
        prop_assert!((w - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn parity(e in -8.0f64..4.0, z in 0.0f64..6.0) {
        let cfg = PrecisionConfig::default();
        let (p, m) = (WeberArgs::new(e, z), WeberArgs::new(e, -z));
        prop_assert_eq!(specfun::weber_y1(p, &cfg).unwrap(), specfun::weber_y1(m, &cfg).unwrap());
        prop_assert_eq!(specfun::weber_y2(p, &cfg).unwrap(), -specfun::weber_y2(m, &cfg).unwrap());
    }

    #[test]
    fn superpotential_is_odd_and_partner_is_harmonic(x in -6.0f64..6.0, a in 0.3f64..3.0, hbar in 0.5f64..2.0) {
        let p = IsotonicParams::new(hbar, a).unwrap();
        prop_assume!((x.abs() - a).abs() > 1e-3 * a);
        let w = Superpotential::new(p);
        prop_assert!((w.w(x).unwrap() + w.w(-x).unwrap()).abs() <= 1e-12 * w.w(x).unwrap().abs().max(1.0));
        let v2 = hbar * hbar * x * x / (8.0 * a.powi(4)) - 5.0 * hbar * hbar / (4.0 * a * a);
        prop_assert!((p.v2(x) - v2).abs() <= 1e-9 * v2.abs().max(1.0));
    }

    #[test]
    fn structure_function_vanishes_at_ends(p in 0usize..40, a in 0.3f64..3.0) {
        let params = IsotonicParams::new(1.0, a).unwrap();
        let alg = superint2d::formal_algebra(p, &params);
        prop_assert_eq!(alg.phi.len(), p + 2);
        prop_assert_eq!(alg.phi[0], 0.0);
        prop_assert_eq!(alg.phi[p + 1], 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn half_line_energies_rise_with_barrier(b1 in -2.0f64..3.0, gap in 0.05f64..1.0) {
        let p = OscillatorParams::default();
        let lo = weber_spectra::solve_half_line(BarrierGeometry::half_line(b1), 3, &p, &seq()).unwrap();
        let hi = weber_spectra::solve_half_line(BarrierGeometry::half_line(b1 + gap), 3, &p, &seq()).unwrap();
        for (l, h) in lo.iter().zip(&hi) {
            prop_assert!(h.energy > l.energy);
        }
    }

    #[test]
    fn box_energies_fall_with_width(b1 in 0.3f64..3.0, gap in 0.05f64..1.0) {
        let p = OscillatorParams::default();
        let narrow = weber_spectra::solve_box(BarrierGeometry::symmetric_box(b1), 3, &p, &seq()).unwrap();
        let wide = weber_spectra::solve_box(BarrierGeometry::symmetric_box(b1 + gap), 3, &p, &seq()).unwrap();
        for (n, w) in narrow.iter().zip(&wide) {
            prop_assert!(w.energy < n.energy);
        }
    }

    #[test]
    fn box_lies_above_half_line(b in 0.3f64..3.0) {
        // [−b, b] sits inside [−b, ∞)
        let p = OscillatorParams::default();
        let boxed = weber_spectra::solve_box(BarrierGeometry::symmetric_box(b), 4, &p, &seq()).unwrap();
        let half = weber_spectra::solve_half_line(BarrierGeometry::half_line(-b), 4, &p, &seq()).unwrap();
        for (x, h) in boxed.iter().zip(&half) {
            prop_assert!(x.energy > h.energy);
        }
    }

    #[test]
    fn box_levels_alternate_parity(b in 0.3f64..3.0) {
        let p = OscillatorParams::default();
        let levels = weber_spectra::solve_box(BarrierGeometry::symmetric_box(b), 6, &p, &seq()).unwrap();
        for (n, l) in levels.iter().enumerate() {
            prop_assert_eq!(l.n, n);
            let want = if n % 2 == 0 { weber_spectra::Parity::Even } else { weber_spectra::Parity::Odd };
            prop_assert_eq!(l.parity, want);
        }
    }

    #[test]
    fn isotonic_energies_scale_with_a(a in 0.3f64..3.0) {
        let p = IsotonicParams::new(1.0, a).unwrap();
        let base = susy::region_energies(Region::R3, 3, &IsotonicParams::default(), &seq()).unwrap();
        let scaled = susy::region_energies(Region::R3, 3, &p, &seq()).unwrap();
        for ((e, en), (e0, en0)) in scaled.iter().zip(&base) {
            prop_assert_eq!(e, e0);
            prop_assert!((en * a * a - en0).abs() <= 1e-14 * en0);
        }
    }

    #[test]
    fn two_d_levels_are_sums_of_parts(kind in 0usize..4, n in 0usize..3, k in 0usize..3) {
        let sys = System2D::new(SystemKind::ALL[kind], IsotonicParams::default());
        let levels = superint2d::spectrum_2d(&sys, Region::R2, Region::R2, n, k, &seq()).unwrap();
        prop_assert_eq!(levels.len(), (n + 1) * (k + 1));
        for w in levels.windows(2) {
            prop_assert!(w[0].energy <= w[1].energy);
        }
        for l in &levels {
            prop_assert_eq!(l.energy, l.parts.0 + l.parts.1);
        }
    }
}

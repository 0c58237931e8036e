use nalgebra::DMatrix;
use proptest::prelude::*;

use trimer::analytic::{analytic_eigensystem, analytic_level, sorted_energies};
use trimer::export::{color_position, scan_to_csv, scan_to_json};
use trimer::hamiltonian::{build_hamiltonian, spectrum};
use trimer::negativity::partial_transpose_matrix;
use trimer::phase::{ground_phase, phase_negativity};
use trimer::scan::{scan_gtn_zero_t, thermal_negativity, Axis, AxisSpec, ZeroTOptions};
use trimer::thermal::{thermal_density_matrix, StateMode};
use trimer::{kron, LevelLabel, ModelParams, Operator, Site, C64};

fn coupling() -> impl Strategy<Value = f64> {
    -3.0f64..3.0
}

fn operator(n: usize) -> impl Strategy<Value = Operator> {
    proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n)
        .prop_map(move |v| Operator::new(DMatrix::from_iterator(n, n, v.into_iter().map(|(re, im)| C64::new(re, im)))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kron_mixed_product(a in operator(2), b in operator(3), c in operator(2), d in operator(3)) {
        let lhs = &kron(&a, &b) * &kron(&c, &d);
        let rhs = kron(&(&a * &c), &(&b * &d));
        prop_assert!((&lhs - &rhs).max_abs() < 1e-12);
    }

    #[test]
    fn analytic_energies_match_oracle(j1 in coupling(), d in coupling(), h in coupling()) {
        let p = ModelParams::dimensionless(j1, d, h);
        let a = sorted_energies(&p).unwrap();
        let n = spectrum(&p).unwrap().energies();
        for (x, y) in a.iter().zip(&n) {
            prop_assert!((x - y).abs() < 1e-8, "{x} vs {y}");
        }
    }

    #[test]
    fn analytic_vectors_are_eigenvectors(j1 in coupling(), d in coupling(), h in coupling()) {
        let p = ModelParams::dimensionless(j1, d, h);
        let op = build_hamiltonian(&p).unwrap();
        for level in analytic_eigensystem(&p).unwrap() {
            let v = &level.vector;
            prop_assert!((v.norm() - 1.0).abs() < 1e-10);
            let r = (op.apply(v) - v * C64::from(level.energy)).norm();
            prop_assert!(r < 1e-8, "{} residual {r}", level.label);
        }
    }

    #[test]
    fn zeeman_slope_is_minus_stz(j1 in coupling(), d in coupling(), h in coupling()) {
        let step = 1e-4;
        for fam in LevelLabel::FAMILIES {
            for label in [fam, fam.partner()] {
                let e = |h: f64| analytic_level(&ModelParams::dimensionless(j1, d, h), label).unwrap().energy;
                let slope = (e(h + step) - e(h - step)) / (2.0 * step);
                prop_assert!((slope + label.stz.value()).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn thermal_state_is_valid_and_symmetric(j1 in coupling(), d in coupling(), h in coupling(), log_kt in -2.0f64..1.5) {
        let p = ModelParams::dimensionless(j1, d, h);
        let s = spectrum(&p).unwrap();
        let kt = 10f64.powf(log_kt);
        let rho = thermal_density_matrix(&s, kt).unwrap();
        prop_assert!(rho.is_valid(1e-12));
        for site in Site::ALL {
            let pt = partial_transpose_matrix(&rho.matrix, site).unwrap();
            prop_assert!((pt.trace().re - 1.0).abs() < 1e-12);
            prop_assert!(Operator::new(pt).is_hermitian(1e-14));
        }
        let r = thermal_negativity(&s, kt).unwrap();
        prop_assert!(r.symmetry_defect() < 1e-9);
        prop_assert!((r.gtn - (r.n_mu * r.n_s1 * r.n_s2).cbrt()).abs() < 1e-12);
    }

    #[test]
    fn doublet_ii_depends_only_on_anisotropy(d in coupling(), j1 in 0.0f64..3.0, h in 0.0f64..3.0) {
        let base = phase_negativity(LevelLabel::DOUBLET_12_II, &ModelParams::dimensionless(0.0, d, 0.0), StateMode::Pure).unwrap();
        let here = phase_negativity(LevelLabel::DOUBLET_12_II, &ModelParams::dimensionless(j1, d, h), StateMode::Pure).unwrap();
        prop_assert!((base.gtn - here.gtn).abs() < 1e-9);
        prop_assert!(here.n_s1 >= here.n_mu);
    }

    #[test]
    fn color_position_strictly_increasing(a in 0.0f64..1.0, b in 0.0f64..1.0) {
        prop_assume!(a != b);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(color_position(lo, 0.0, 1.0) < color_position(hi, 0.0, 1.0));
    }
}

/// Ground-state labels from the closed form agree with the oracle.
#[test]
fn phase_labels_agree_with_oracle() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    for _ in 0..1000 {
        let p = ModelParams::dimensionless(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0), rng.gen_range(0.01..3.0));
        let phase = ground_phase(&p).unwrap();
        let s = spectrum(&p).unwrap();
        let level = analytic_level(&p, phase.level).unwrap();
        assert!((level.energy - s.ground_energy()).abs() < 1e-8, "{p:?}");
        if !phase.tie && s.levels[1].energy - s.levels[0].energy > 1e-6 {
            assert_eq!(s.levels[0].stz, phase.level.stz, "{p:?}");
            let overlap = s.levels[0].vector.dotc(&level.vector).norm();
            assert!((overlap - 1.0).abs() < 1e-8, "{p:?}: overlap {overlap}");
        }
    }
}

#[test]
fn scans_are_deterministic() {
    let x = AxisSpec::new(Axis::D, -1.0, 2.0, 13).unwrap();
    let y = AxisSpec::new(Axis::H, 0.0, 3.0, 9).unwrap();
    let p = ModelParams::dimensionless(0.5, 0.0, 0.0);
    let a = scan_gtn_zero_t(x, y, p, ZeroTOptions::default()).unwrap();
    let b = scan_gtn_zero_t(x, y, p, ZeroTOptions { threads: Some(1), ..Default::default() }).unwrap();
    assert_eq!(scan_to_csv(&a), scan_to_csv(&b));
    assert_eq!(scan_to_json(&a).unwrap(), scan_to_json(&b).unwrap());
}

use std::sync::OnceLock;

use lfunlab::characters::enumerate_characters;
use lfunlab::constants::Constants;
use lfunlab::eval::{completed_l, l_value};
use lfunlab::identities::{repulsion_from_csv, repulsion_to_csv, EulerHadamard};
use lfunlab::instances::{instance_by_name, LFunctionInstance};
use lfunlab::meanvalue::{halasz_m, partial_sum_lambda, scan_max, twist_phi, DEFAULT_T_CAP};
use lfunlab::special::BumpKernel;
use lfunlab::zeros::{find_zeros, ZeroSet};
use lfunlab::{Complex64, Error};
use proptest::prelude::*;

fn chi4() -> &'static LFunctionInstance {
    static I: OnceLock<LFunctionInstance> = OnceLock::new();
    I.get_or_init(|| instance_by_name("chi4", 0).unwrap())
}

fn chi4_zeros() -> &'static ZeroSet {
    static Z: OnceLock<ZeroSet> = OnceLock::new();
    Z.get_or_init(|| find_zeros(chi4(), 40.0).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn characters_are_periodic_and_multiplicative(q in 3u64..40, a in 1u64..500, b in 1u64..500) {
        for chi in enumerate_characters(q).unwrap() {
            let ab = chi.evaluate_u64(a * b);
            prop_assert!((ab - chi.evaluate_u64(a) * chi.evaluate_u64(b)).norm() < 1e-12);
            prop_assert!((chi.evaluate_u64(a + q) - chi.evaluate_u64(a)).norm() < 1e-12);
        }
    }

    #[test]
    fn real_coefficients_give_conjugate_twists(x in 1.0f64..5000.0, phi in -30.0f64..30.0) {
        let a = partial_sum_lambda(chi4(), x, phi).unwrap();
        let b = partial_sum_lambda(chi4(), x, -phi).unwrap();
        prop_assert!((a - b.conj()).norm() <= 1e-12 * (1.0 + a.norm()));
    }

    #[test]
    fn refined_argmax_dominates_grid(a in -3.0f64..3.0, w in 0.1f64..5.0, window in 0.0f64..20.0, even in any::<bool>()) {
        let scan = scan_max(window, 0.1, even, |t| Ok((w * t + a).sin() - 0.01 * t * t)).unwrap();
        prop_assert!(scan.value >= scan.grid_value);
        prop_assert!(scan.t.abs() <= scan.window + 1e-12);
        if even {
            prop_assert!(scan.t >= 0.0);
        }
    }

    #[test]
    fn functional_equation_holds(sigma in -0.4f64..1.4, t in -50.0f64..50.0) {
        let inst = chi4();
        let s = Complex64::new(sigma, t);
        let lhs = completed_l(inst, s).unwrap();
        let rhs = inst.gamma().root_number * completed_l(inst, Complex64::new(1.0 - sigma, t)).unwrap().conj();
        prop_assert!((lhs - rhs).norm() <= 1e-8 * lhs.norm());
    }

    #[test]
    fn l_values_are_conjugate_symmetric(sigma in 0.0f64..2.0, t in 0.0f64..50.0) {
        let a = l_value(chi4(), Complex64::new(sigma, t)).unwrap();
        let b = l_value(chi4(), Complex64::new(sigma, -t)).unwrap();
        prop_assert!((a - b.conj()).norm() <= 1e-12 * (1.0 + a.norm()));
    }

    #[test]
    fn small_discs_near_one_are_empty(t in 0.0f64..39.0, r in 0.0f64..0.499) {
        let count = chi4_zeros().count_in_disc(Complex64::new(1.0, t), r.min(39.5 - t)).unwrap();
        prop_assert_eq!(count, 0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn twist_identity(y0 in 2.0f64..11.0) {
        match twist_phi(chi4(), y0, DEFAULT_T_CAP) {
            Ok(tw) => {
                let want = y0.exp();
                prop_assert!((tw.partial_sum.norm() * tw.n - want).abs() <= 1e-12 * want);
                prop_assert!(tw.phi >= 0.0);
                prop_assert!(tw.scan.value >= tw.scan.grid_value);
            }
            Err(e) => prop_assert_eq!(e, Error::UndefinedN(y0)),
        }
    }

    #[test]
    fn halasz_m_stays_above_floor(e in 2.0f64..6.0) {
        let hm = halasz_m(chi4(), 10f64.powf(e), DEFAULT_T_CAP).unwrap();
        prop_assert!(hm.m >= -0.5);
    }
}

#[test]
fn truncated_form_with_wide_disc_equals_full_form() {
    let points = [Complex64::new(1.05, 3.0), Complex64::new(0.95, 17.5)];
    let eh = EulerHadamard::new(chi4(), chi4_zeros(), BumpKernel::shared(), 20.0, &points, &Constants::default())
        .unwrap();
    for i in 0..eh.len() {
        let full = eh.full(i, 1e3).unwrap();
        let wide = eh.truncated(i, 1e5, 4.0).unwrap();
        assert_eq!(full.extras["zeros_used"], wide.extras["zeros_used"]);
        assert!((full.rhs - wide.rhs).norm() <= 1e-12);
        // exp of the right side reproduces L(s).
        let l = l_value(chi4(), points[i]).unwrap();
        assert!((full.rhs.exp() - l).norm() <= 10.0 * full.residual.max(1e-15) * l.norm() + 1e-12);
    }
}

#[test]
fn full_form_improves_while_the_tail_dominates() {
    let points = [Complex64::new(0.95, 20.0)];
    let eh = EulerHadamard::new(chi4(), chi4_zeros(), BumpKernel::shared(), 20.0, &points, &Constants::default())
        .unwrap();
    let r: Vec<f64> = [2.0, 5.0, 10.0].iter().map(|&h| eh.full(0, h).unwrap().residual).collect();
    assert!(r[1] < r[0] && r[2] < r[1], "{r:?}");
}

#[test]
fn repulsion_csv_round_trips() {
    let c = Constants::default();
    let (records, summary) =
        lfunlab::identities::repulsion_scan(chi4(), 0.5, &[6.0, 10.0], &[0.02, 0.05], chi4_zeros(), &c).unwrap();
    assert_eq!(summary.records, 4);
    assert_eq!(summary.undefined_n, 2);
    let text = repulsion_to_csv(&records).unwrap();
    assert_eq!(repulsion_from_csv(&text).unwrap(), records);
}

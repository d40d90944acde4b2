mod common;

use mushy_core::direct::{consistency_residuals, front_r, front_s, temperature, Region};
use mushy_core::inverse::{convective, dirichlet};
use mushy_core::verify::{condition_residuals, GridSpec};
use mushy_core::{manufacture, Coefficient, FaceCondition, ManufactureInput, Precision};
use proptest::prelude::*;

fn input() -> impl Strategy<Value = ManufactureInput> {
    (
        0.05f64..2.0,
        -2.0f64..2.0,
        -2.0f64..2.0,
        -2.0f64..2.0,
        0.05f64..0.95,
        -2.0f64..2.0,
        -2.0f64..2.0,
        -2.0f64..2.0,
    )
        .prop_map(|(xi, lk, lr, lc, epsilon, lg, lq, lh)| {
            let (k, rho, c, q0) = (10f64.powf(lk), 10f64.powf(lr), 10f64.powf(lc), 10f64.powf(lq));
            let eff = (k * rho * c).sqrt();
            ManufactureInput {
                xi,
                k,
                rho,
                c,
                epsilon,
                gamma: 10f64.powf(lg) * 2.0 * q0 / eff,
                q0,
                h0: Some(10f64.powf(lh) * eff),
            }
        })
}

fn case() -> impl Strategy<Value = Coefficient> {
    prop::sample::select(Coefficient::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn convective_round_trip(input in input(), case in case()) {
        let s = manufacture(&input, FaceCondition::Convective).unwrap();
        let r = convective::solve(case, &s.known_without(case), &s.boundary, &Precision::default()).unwrap();
        let hidden = s.hidden_value(case);
        prop_assert!((r.value - hidden).abs() <= 1e-10 * hidden);
        prop_assert!((r.xi - s.xi).abs() <= 1e-11);
        prop_assert!(r.reports.iter().all(|x| x.satisfied));
        prop_assert!(r.solution.mu > r.solution.xi);
    }

    #[test]
    fn dirichlet_round_trip(input in input(), case in case()) {
        let s = manufacture(&input, FaceCondition::Dirichlet).unwrap();
        let r = dirichlet::solve_dirichlet_case(case, &s.known_without(case), &s.boundary, &Precision::default())
            .unwrap();
        let hidden = s.hidden_value(case);
        prop_assert!((r.value - hidden).abs() <= 1e-10 * hidden);
        let res = consistency_residuals(&r.thermal, &r.mushy, &r.boundary, r.xi, FaceCondition::Dirichlet);
        prop_assert!(res.within(1e-11));
    }

    #[test]
    fn closed_form_cases_share_xi(input in input()) {
        let s = manufacture(&input, FaceCondition::Convective).unwrap();
        let prec = Precision::default();
        let xi: Vec<u64> = [Coefficient::L, Coefficient::Gamma, Coefficient::Epsilon]
            .iter()
            .map(|&c| convective::solve(c, &s.known_without(c), &s.boundary, &prec).unwrap().xi.to_bits())
            .collect();
        prop_assert!(xi.iter().all(|&b| b == xi[0]));
        let x4 = convective::solve(Coefficient::K, &s.known_without(Coefficient::K), &s.boundary, &prec).unwrap().xi;
        let x5 = convective::solve(Coefficient::Rho, &s.known_without(Coefficient::Rho), &s.boundary, &prec).unwrap().xi;
        prop_assert!((x4 - x5).abs() <= 1e-13 * x4.max(1.0));
    }

    #[test]
    fn profile_shape(input in input(), t in 0.01f64..100.0) {
        let s = manufacture(&input, FaceCondition::Convective).unwrap();
        let sol = mushy_core::build_solution(&s.thermal, &s.mushy, &s.boundary, s.xi).unwrap();
        let (sf, rf) = (front_s(&sol, t).unwrap(), front_r(&sol, t).unwrap());
        prop_assert!(0.0 < sf && sf < rf);
        let mut prev = f64::NEG_INFINITY;
        for i in 0..=20 {
            let x = sf * i as f64 / 20.0;
            let v = temperature(&sol, x, t).unwrap();
            prop_assert!(v.value >= prev);
            prop_assert!(v.value <= 0.0 + 1e-12 * sol.a_coef.abs());
            prev = v.value;
        }
        let mushy = temperature(&sol, 0.5 * (sf + rf), t).unwrap();
        prop_assert_eq!(mushy.value, 0.0);
        prop_assert_eq!(mushy.region, Region::Mushy);
        prop_assert_eq!(temperature(&sol, 2.0 * rf, t).unwrap().region, Region::Liquid);
    }

    #[test]
    fn conditions_are_time_invariant(input in input(), t in 0.01f64..100.0) {
        let s = manufacture(&input, FaceCondition::Convective).unwrap();
        let sol = mushy_core::build_solution(&s.thermal, &s.mushy, &s.boundary, s.xi).unwrap();
        let g = condition_residuals(&sol, &s.thermal, &s.mushy, &s.boundary, &[t, 4.0 * t], s.face).unwrap();
        prop_assert!(g.failures(1e-10, 1.0).is_empty(), "{:?}", g);
    }
}

#[test]
fn pde_check_on_random_scenarios() {
    for s in common::scenarios(99, 40, FaceCondition::Dirichlet) {
        let sol = mushy_core::build_solution(&s.thermal, &s.mushy, &s.boundary, s.xi).unwrap();
        let r = mushy_core::verify::pde_residual(&sol, &GridSpec::default()).unwrap();
        assert!(r.pde_residual_max.unwrap() <= 1e-6, "{r:?}");
    }
}

#[test]
fn limit_coefficients_approach_dirichlet_value() {
    let s = manufacture(&ManufactureInput::default(), FaceCondition::Dirichlet).unwrap();
    let grid: Vec<f64> = (1..=6).map(|p| 10f64.powi(p)).collect();
    for case in Coefficient::ALL {
        let st =
            dirichlet::limit_study(&s.known_without(case), &s.boundary, case, &grid, &Precision::default()).unwrap();
        let gaps: Vec<f64> = st
            .rows
            .iter()
            .map(|r| (r.coefficient - st.coefficient_dirichlet).abs())
            .collect();
        assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{case}: {gaps:?}");
        let xi: Vec<f64> = st.rows.iter().map(|r| r.diff).collect();
        assert!(xi.windows(2).all(|w| w[1] < w[0]), "{case}: {xi:?}");
    }
}

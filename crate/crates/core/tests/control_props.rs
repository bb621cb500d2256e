use proptest::prelude::*;
use smc_irl::experiments::ExperimentConfig;
use smc_irl::numerics::Vector;
use smc_irl::smc::{
    check_saturation_conditions, default_grid, signum, SaturationFunction, SmcController,
    SrbfBasis, DEFAULT_TAIL,
};

fn controller(cfg: &ExperimentConfig, sat: SaturationFunction) -> SmcController {
    SmcController::new(cfg.model().unwrap(), cfg.sliding_config().unwrap(), sat).unwrap()
}

fn basis() -> SrbfBasis {
    SrbfBasis::uniform(vec![0.01, 0.03, 0.05, 0.1, 0.2, 0.5, 1.0], 1.0).unwrap()
}

fn variants(theta: Vec<f64>, delta: f64) -> Vec<SaturationFunction> {
    vec![
        SaturationFunction::Signum,
        SaturationFunction::Pwl { delta },
        SaturationFunction::Tanh,
        SaturationFunction::learned(basis(), theta).unwrap(),
    ]
}

proptest! {
    #[test]
    fn every_variant_is_odd(
        s in -60.0f64..60.0,
        theta in prop::collection::vec(-0.3f64..0.3, 7),
        delta in 0.01f64..2.0,
    ) {
        for sat in variants(theta.clone(), delta) {
            prop_assert_eq!(sat.eval_scalar(-s), -sat.eval_scalar(s));
        }
    }

    #[test]
    fn zero_weights_reduce_to_tanh(s in -10.0f64..10.0) {
        let sat = SaturationFunction::learned(basis(), vec![0.0; 7]).unwrap();
        prop_assert_eq!(sat.eval_scalar(s), s.tanh());
    }

    #[test]
    fn learned_tail_is_bounded(theta in prop::collection::vec(-1.0f64..1.0, 7)) {
        let sat = SaturationFunction::learned(basis(), theta.clone()).unwrap();
        for s in [DEFAULT_TAIL, -DEFAULT_TAIL] {
            let phi = basis().eval(s);
            let bound = (s.tanh() - signum(s)).abs()
                + theta.iter().zip(phi.iter()).map(|(t, p)| t.abs() * p.abs()).sum::<f64>();
            prop_assert!((sat.eval_scalar(s) - signum(s)).abs() <= bound + 1e-15);
            prop_assert!(bound < 1e-8);
        }
    }

    #[test]
    fn siso_signum_law_closed_form(x1 in -10.0f64..10.0, x2 in -10.0f64..10.0) {
        let cfg = ExperimentConfig::example1();
        let ctrl = controller(&cfg, SaturationFunction::Signum);
        let x = Vector::from_vec(vec![x1, x2]);
        let s = ctrl.control_parts(&x).unwrap().sliding;
        let closed = -(s.dot(&s.component_mul(cfg.sliding_config().unwrap().w()))
            + s.iter().zip(cfg.smc.k.iter()).map(|(si, k)| k * si.abs()).sum::<f64>());
        let v = ctrl.lyapunov_derivative(&x).unwrap();
        prop_assert!((v - closed).abs() <= 1e-9 * closed.abs().max(1.0));
    }

    #[test]
    fn vsr_signum_law_closed_form(x in prop::collection::vec(-0.5f64..0.5, 5)) {
        let cfg = ExperimentConfig::example2();
        let ctrl = controller(&cfg, SaturationFunction::Signum);
        let x = Vector::from_vec(x);
        let s = ctrl.control_parts(&x).unwrap().sliding;
        let closed = -(s.dot(&s.component_mul(cfg.sliding_config().unwrap().w()))
            + s.iter().zip(cfg.smc.k.iter()).map(|(si, k)| k * si.abs()).sum::<f64>());
        let v = ctrl.lyapunov_derivative(&x).unwrap();
        prop_assert!((v - closed).abs() <= 1e-9 * closed.abs().max(1.0));
        if s.amax() > 0.0 {
            prop_assert!(v < 0.0);
        }
    }
}

#[test]
fn built_in_variants_meet_all_conditions() {
    for sat in [
        SaturationFunction::Signum,
        SaturationFunction::Pwl { delta: 0.5 },
        SaturationFunction::Tanh,
    ] {
        let report = check_saturation_conditions(&sat, &default_grid(), DEFAULT_TAIL);
        assert!(report.all(), "{sat:?}: {report:?}");
    }
}

#[test]
fn large_weights_break_only_boundedness() {
    let sat = SaturationFunction::learned(basis(), vec![10.0; 7]).unwrap();
    let report = check_saturation_conditions(&sat, &default_grid(), DEFAULT_TAIL);
    assert!(report.structural());
    assert!(!report.bounded);
}

use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use smc_irl::numerics::{
    rk4_integrate, solve_bls, solve_regularized, AugmentedState, NumericsError, Vector,
};

fn system(rows: usize, cols: usize, seed: Vec<f64>) -> (DMatrix<f64>, DVector<f64>) {
    let psi = DMatrix::from_fn(rows, cols, |i, j| {
        seed[(i * cols + j) % seed.len()] + if i == j { 3.0 } else { 0.0 }
    });
    let xi = DVector::from_fn(rows, |i, _| seed[(7 * i + 3) % seed.len()]);
    (psi, xi)
}

fn decay_error(rate: f64, h: f64) -> f64 {
    let deriv = |_t: f64, y: &AugmentedState| -> Result<AugmentedState, NumericsError> {
        Ok(AugmentedState::new(&y.base * -rate, Vector::zeros(0)))
    };
    let y0 = AugmentedState::with_zeroed(Vector::from_element(1, 1.0), 0);
    let y1 = rk4_integrate(deriv, &y0, 0.0, 1.0, h).unwrap();
    (y1.base[0] - (-rate).exp()).abs()
}

proptest! {
    #[test]
    fn ridge_norm_shrinks_with_lambda(
        seed in prop::collection::vec(-1.0f64..1.0, 40..80),
        l1 in 0.0f64..2.0,
        dl in 0.0f64..2.0,
    ) {
        let (psi, xi) = system(12, 5, seed);
        let a = solve_regularized(&psi, &xi, l1).unwrap();
        let b = solve_regularized(&psi, &xi, l1 + dl).unwrap();
        prop_assert!(b.norm() <= a.norm() * (1.0 + 1e-10) + 1e-12);
    }

    #[test]
    fn ridge_satisfies_normal_equations(
        seed in prop::collection::vec(-1.0f64..1.0, 40..80),
        lambda in 0.0f64..5.0,
    ) {
        let (psi, xi) = system(15, 6, seed);
        let theta = solve_regularized(&psi, &xi, lambda).unwrap();
        let residual = psi.transpose() * (&psi * &theta - &xi) + &theta * lambda;
        let scale = (psi.transpose() * &xi).norm().max(1.0);
        prop_assert!(residual.norm() <= 1e-9 * scale);
    }

    #[test]
    fn zero_lambda_is_plain_least_squares(seed in prop::collection::vec(-1.0f64..1.0, 40..80)) {
        let (psi, xi) = system(10, 4, seed);
        let a = solve_regularized(&psi, &xi, 0.0).unwrap();
        let b = solve_bls(&psi, &xi).unwrap();
        prop_assert!((a - b).amax() <= 1e-10);
    }

    #[test]
    fn rk4_is_fourth_order(rate in 0.5f64..3.0) {
        let order = (decay_error(rate, 0.1) / decay_error(rate, 0.05)).log2();
        prop_assert!(order >= 3.9, "observed order {order}");
    }
}

#[test]
fn hand_solved_normal_equations() {
    // Ψ = [[1,0],[0,1],[1,1]], Ξ = [1,2,3]: ΨᵀΨ = [[2,1],[1,2]], ΨᵀΞ = [4,5] → θ = [1,2].
    let psi = DMatrix::from_row_slice(3, 2, &[1.0, 0.0, 0.0, 1.0, 1.0, 1.0]);
    let xi = DVector::from_vec(vec![1.0, 2.0, 3.0]);
    let theta = solve_bls(&psi, &xi).unwrap();
    assert!((theta[0] - 1.0).abs() < 1e-9 && (theta[1] - 2.0).abs() < 1e-9);

    // Inconsistent: Ξ = [1,1,0] → ΨᵀΞ = [1,1] → θ = [1/3, 1/3].
    let xi = DVector::from_vec(vec![1.0, 1.0, 0.0]);
    let theta = solve_bls(&psi, &xi).unwrap();
    assert!((theta[0] - 1.0 / 3.0).abs() < 1e-9 && (theta[1] - 1.0 / 3.0).abs() < 1e-9);
}

#[test]
fn underdetermined_least_squares_is_rejected() {
    let psi = DMatrix::from_row_slice(1, 2, &[1.0, 1.0]);
    let xi = DVector::from_vec(vec![1.0]);
    assert!(solve_bls(&psi, &xi).is_err());
    assert!(solve_regularized(&psi, &xi, 0.1).is_ok());
    assert!(solve_regularized(&psi, &xi, -0.1).is_err());
}

use liesys_core::control::{
    closed_loop_simulate, cost_eval, feedback_gain, riccati_backward_solve, riccati_backward_solve_classical,
    ControlLaw, LqrProblem,
};
use liesys_core::matkit::{symmetric_eigenvalues, Matrix};
use liesys_core::{ClassicalScheme, Error, LieScheme, StateVector, TimeGrid};

fn double_integrator() -> LqrProblem {
    LqrProblem::new(
        Matrix::from_literal(&[[0.0, 1.0], [0.0, 0.0]]),
        Matrix::from_literal(&[[0.0], [1.0]]),
        Matrix::identity(2),
        Matrix::identity(1),
        Matrix::diag(&[0.5, 0.0]),
        0.0,
        2.0,
    )
    .unwrap()
}

#[test]
fn matrix_riccati_agrees_with_direct_integration() {
    let prob = double_integrator();
    let grid = TimeGrid::new(0.0, 2.0, 2000).unwrap();
    let lie = riccati_backward_solve(&prob, LieScheme::Magnus4, &grid).unwrap();
    let direct = riccati_backward_solve_classical(&prob, ClassicalScheme::Rk4, &grid).unwrap();
    for (a, b) in lie.p.iter().zip(&direct.p) {
        assert!(a.distance(b) < 1e-8);
        assert!(a.distance(&a.transpose()) < 1e-10);
        assert!(symmetric_eigenvalues(a)[0] >= -1e-12);
    }
    assert!(lie.p.last().unwrap().distance(prob.s()) < 1e-14);
}

#[test]
fn optimal_cost_is_the_riccati_quadratic_form() {
    let prob = double_integrator();
    let grid = TimeGrid::new(0.0, 2.0, 1000).unwrap();
    let path = riccati_backward_solve(&prob, LieScheme::Rkmk4, &grid).unwrap();
    let law = ControlLaw::Feedback(feedback_gain(&path, &prob));
    let x0 = StateVector::from_vec(vec![1.0, -0.5]);
    let traj = closed_loop_simulate(&prob, &law, &x0, &grid.refined(4)).unwrap();
    let cost = cost_eval(&prob, &traj, &law).unwrap();
    let p0 = &path.p[0];
    let v = p0.matvec(x0.as_slice());
    let predicted = x0.as_slice().iter().zip(&v).map(|(a, b)| a * b).sum::<f64>();
    assert!((cost - predicted).abs() < 1e-6 * predicted, "{cost} vs {predicted}");
}

#[test]
fn rejects_indefinite_weights() {
    let err = LqrProblem::new(
        Matrix::identity(1),
        Matrix::identity(1),
        Matrix::diag(&[-1.0]),
        Matrix::identity(1),
        Matrix::zeros(1, 1),
        0.0,
        1.0,
    );
    assert!(matches!(err, Err(Error::InvalidInput(_))));
}

use liesys_core::integrators::estimate_order;
use liesys_core::liesys::{
    exact_sl3_example, scalar_riccati, solve_classical, solve_lie_system_with, CoefficientPath, ManifoldUpdate,
};
use liesys_core::{sweep, ClassicalScheme, LieScheme, Method, Problem, StateVector, TimeGrid};

#[test]
fn every_method_runs_on_every_problem() {
    for problem in Problem::ALL {
        let (a, b) = problem.interval();
        let grid = TimeGrid::new(a, b, 400).unwrap();
        let sys = problem.system();
        for method in Method::ALL {
            let tr = method.solve(&sys, &grid, &problem.initial_state()).unwrap();
            assert_eq!(tr.states.len(), 401, "{problem} {method}");
            assert!(tr.final_state().is_finite(), "{problem} {method}");
        }
    }
}

#[test]
fn time_dependent_scalar_riccati_matches_rk4() {
    // x' = cos t + (sin t) x - x²/2, no closed form
    let sys = scalar_riccati(
        "wavy",
        CoefficientPath::new(3, |t| vec![t.cos(), t.sin(), -0.5]),
    );
    let grid = TimeGrid::new(0.0, 2.0, 2000).unwrap();
    let x0 = StateVector::scalar(0.3);
    let reference = solve_classical(|t, x| sys.rhs(t, x), ClassicalScheme::Rk4, &grid, &x0);
    for scheme in LieScheme::ALL {
        let tr = solve_lie_system_with(&sys, scheme, &grid, &x0, ManifoldUpdate::Incremental).unwrap();
        let gap = tr.final_state().distance(reference.final_state());
        assert!(gap < 1e-6, "{scheme}: {gap}");
    }
}

#[test]
fn both_manifold_updates_agree_for_a_true_action() {
    let p = Problem::RiccatiSl2;
    let (a, b) = p.interval();
    let grid = TimeGrid::new(a, b, 900).unwrap();
    let sys = p.system();
    for scheme in LieScheme::ALL {
        let inc = solve_lie_system_with(&sys, scheme, &grid, &p.initial_state(), ManifoldUpdate::Incremental).unwrap();
        let all = solve_lie_system_with(&sys, scheme, &grid, &p.initial_state(), ManifoldUpdate::FromInitial).unwrap();
        for (x, y) in inc.states.iter().zip(&all.states) {
            assert!(x.distance(y) < 1e-9, "{scheme}");
        }
    }
}

#[test]
fn projective_sl3_recovers_full_order() {
    let hs = [0.1, 0.05, 0.025, 0.0125];
    for (scheme, lo) in [(LieScheme::Magnus2, 1.8), (LieScheme::Magnus4, 3.7), (LieScheme::Rkmk4, 3.7)] {
        let e = sweep::convergence_errors(Problem::RiccatiSl3Projective, Method::Geometric(scheme), &hs).unwrap();
        let slope = estimate_order(&hs, &e).unwrap();
        assert!(slope > lo, "{scheme}: {slope}");
    }
}

#[test]
fn sl3_exact_solution_starts_at_the_initial_state() {
    let p = Problem::RiccatiSl3;
    assert!(exact_sl3_example(0.0).distance(&p.initial_state()) < 1e-15);
}

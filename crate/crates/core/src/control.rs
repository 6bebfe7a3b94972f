//! Finite-horizon LQR: the backward matrix Riccati equation solved as a Lie
//! system, the feedback law, closed-loop simulation and cost evaluation.
//!
//! Plant `x' = A x + B u`, cost `J = x(tf)ᵀ S x(tf) + ∫ xᵀQx + uᵀRu`. The
//! Riccati equation `P' = P G P − P A − Aᵀ P − Q`, `G = B R⁻¹ Bᵀ`, runs
//! backward from `P(tf) = S`; it is solved forward in `τ = t0 + tf − t`.
//!
//! * `n = 1`: `dP/dτ = Q + 2A P − G P²` is a Riccati Lie system on SL(2) with
//!   coefficients `(Q, 2A, −G)` and the homography action.
//! * `n > 1`: the reversed flow is generated by `H = [[−A, G], [Q, Aᵀ]]` in
//!   sl(2n) acting on `P` by `(Y21 + Y22 P)(Y11 + Y12 P)⁻¹`.
//!
//! The scalar vehicle model is `Δv' = −2Δv + Δu` with `Q = R = S = 1` on
//! `[0, 1]`, giving `dP/dt = P² + 4P − 1`.

use crate::actions::MatrixRiccatiAction;
use crate::error::{Error, Result};
use crate::integrators::{ButcherTable, ClassicalScheme, LieScheme, MatrixPath, TimeGrid};
use crate::liesys::{scalar_riccati, solve_automorphic, solve_lie_system, CoefficientPath, ManifoldUpdate, Trajectory};
use crate::matkit::{symmetric_eigenvalues, Matrix, SquareMatrix, StateVector};

/// Tolerance of the symmetry and definiteness checks.
pub const DEFINITENESS_TOL: f64 = 1e-10;

/// Constant-coefficient LQR data on `[t0, tf]`.
#[derive(Clone, Debug, PartialEq)]
pub struct LqrProblem {
    a: SquareMatrix,
    b: Matrix,
    q: SquareMatrix,
    r: SquareMatrix,
    s: SquareMatrix,
    t0: f64,
    tf: f64,
    r_inv: SquareMatrix,
}

fn check_shape(m: &Matrix, rows: usize, cols: usize) -> Result<()> {
    if m.rows() != rows {
        return Err(Error::DimensionMismatch {
            expected: rows,
            found: m.rows(),
        });
    }
    if m.cols() != cols {
        return Err(Error::DimensionMismatch {
            expected: cols,
            found: m.cols(),
        });
    }
    Ok(())
}

fn check_symmetric(m: &SquareMatrix, what: &str) -> Result<()> {
    if m.distance(&m.transpose()) > DEFINITENESS_TOL * m.frobenius_norm().max(1.0) {
        return Err(Error::InvalidInput(format!("{what} must be symmetric")));
    }
    Ok(())
}

impl LqrProblem {
    pub fn new(
        a: SquareMatrix,
        b: Matrix,
        q: SquareMatrix,
        r: SquareMatrix,
        s: SquareMatrix,
        t0: f64,
        tf: f64,
    ) -> Result<Self> {
        let n = a.rows();
        let m = b.cols();
        check_shape(&a, n, n)?;
        check_shape(&b, n, m)?;
        check_shape(&q, n, n)?;
        check_shape(&r, m, m)?;
        check_shape(&s, n, n)?;
        if !(t0.is_finite() && tf.is_finite()) || tf <= t0 {
            return Err(Error::InvalidInput(format!("need t0 < tf, got [{t0}, {tf}]")));
        }
        for (mat, what) in [(&q, "Q"), (&s, "S")] {
            check_symmetric(mat, what)?;
            if symmetric_eigenvalues(mat)[0] < -DEFINITENESS_TOL {
                return Err(Error::InvalidInput(format!("{what} must be positive semi-definite")));
            }
        }
        check_symmetric(&r, "R")?;
        if symmetric_eigenvalues(&r)[0] <= DEFINITENESS_TOL {
            return Err(Error::InvalidInput("R must be positive definite".into()));
        }
        let r_inv = r.try_inverse()?;
        Ok(LqrProblem {
            a,
            b,
            q,
            r,
            s,
            t0,
            tf,
            r_inv,
        })
    }

    /// `Δv' = −2Δv + Δu`, `Q = R = S = 1` on `[0, 1]`.
    pub fn vehicle() -> Self {
        let one = || Matrix::identity(1);
        LqrProblem::new(Matrix::diag(&[-2.0]), one(), one(), one(), one(), 0.0, 1.0).expect("vehicle data is valid")
    }

    pub fn state_dim(&self) -> usize {
        self.a.rows()
    }

    pub fn input_dim(&self) -> usize {
        self.b.cols()
    }

    pub fn horizon(&self) -> (f64, f64) {
        (self.t0, self.tf)
    }

    pub fn a(&self) -> &SquareMatrix {
        &self.a
    }

    pub fn b(&self) -> &Matrix {
        &self.b
    }

    pub fn q(&self) -> &SquareMatrix {
        &self.q
    }

    pub fn r(&self) -> &SquareMatrix {
        &self.r
    }

    pub fn s(&self) -> &SquareMatrix {
        &self.s
    }

    /// `G = B R⁻¹ Bᵀ`
    pub fn g(&self) -> SquareMatrix {
        self.b.matmul(&self.r_inv).matmul(&self.b.transpose())
    }

    /// `P' = P G P − P A − Aᵀ P − Q` in the original time direction.
    pub fn riccati_rhs(&self, p: &SquareMatrix) -> SquareMatrix {
        p.matmul(&self.g())
            .matmul(p)
            .add_scaled(-1.0, &p.matmul(&self.a))
            .add_scaled(-1.0, &self.a.transpose().matmul(p))
            .add_scaled(-1.0, &self.q)
    }

    /// Generator of the reversed Riccati flow, `[[−A, G], [Q, Aᵀ]]`.
    pub fn reversed_hamiltonian(&self) -> SquareMatrix {
        let n = self.state_dim();
        let mut h = Matrix::zeros(2 * n, 2 * n);
        h.set_block(0, 0, &self.a.scale(-1.0));
        h.set_block(0, n, &self.g());
        h.set_block(n, 0, &self.q);
        h.set_block(n, n, &self.a.transpose());
        h
    }

    fn check_grid(&self, grid: &TimeGrid) -> Result<()> {
        let tol = 1e-12 * (self.tf - self.t0).abs().max(1.0);
        if (grid.start() - self.t0).abs() > tol || (grid.end() - self.tf).abs() > tol {
            return Err(Error::InvalidGrid(format!(
                "grid [{}, {}] does not cover the horizon [{}, {}]",
                grid.start(),
                grid.end(),
                self.t0,
                self.tf
            )));
        }
        Ok(())
    }
}

/// `P` at the nodes of a grid over `[t0, tf]`, in the original time direction.
#[derive(Clone, Debug, PartialEq)]
pub struct RiccatiPath {
    pub grid: TimeGrid,
    pub p: Vec<SquareMatrix>,
}

impl RiccatiPath {
    pub fn at_node(&self, k: usize) -> &SquareMatrix {
        &self.p[k]
    }

    fn from_reversed(grid: &TimeGrid, reversed: Vec<SquareMatrix>) -> Self {
        let mut p = reversed;
        p.reverse();
        RiccatiPath { grid: *grid, p }
    }
}

fn flatten(m: &SquareMatrix) -> StateVector {
    StateVector::from_vec(m.as_slice().to_vec())
}

fn unflatten(n: usize, x: &StateVector) -> SquareMatrix {
    Matrix::from_row_major(n, n, x.as_slice().to_vec()).expect("state holds an n×n matrix")
}

/// Backward Riccati solve with a Lie-group scheme, through `τ = t0 + tf − t`.
pub fn riccati_backward_solve(prob: &LqrProblem, scheme: LieScheme, grid: &TimeGrid) -> Result<RiccatiPath> {
    prob.check_grid(grid)?;
    let n = prob.state_dim();
    let states = if n == 1 {
        let coeffs = vec![prob.q[(0, 0)], 2.0 * prob.a[(0, 0)], -prob.g()[(0, 0)]];
        let sys = scalar_riccati("lqr-reversed", CoefficientPath::constant(coeffs));
        solve_lie_system(&sys, scheme, grid, &flatten(&prob.s))?.states
    } else {
        let path = MatrixPath::constant(prob.reversed_hamiltonian());
        let action = MatrixRiccatiAction::new(n)?;
        solve_automorphic(&path, &action, scheme, grid, &flatten(&prob.s), ManifoldUpdate::Incremental)?.states
    };
    Ok(RiccatiPath::from_reversed(grid, states.iter().map(|x| unflatten(n, x)).collect()))
}

/// Backward Riccati solve with a classical scheme on the matrix entries.
pub fn riccati_backward_solve_classical(prob: &LqrProblem, scheme: ClassicalScheme, grid: &TimeGrid) -> Result<RiccatiPath> {
    prob.check_grid(grid)?;
    let table = scheme.table();
    let h = grid.step_size();
    let mut p = vec![prob.s.clone()];
    for k in 0..grid.steps() {
        let next = table.step(|_, p: &Matrix| prob.riccati_rhs(p).scale(-1.0), grid.node(k), &p[k], h);
        if !next.is_finite() {
            return Err(Error::NonFinite.at_step(k + 1));
        }
        p.push(next);
    }
    Ok(RiccatiPath::from_reversed(grid, p))
}

/// `K(t) = −R⁻¹ Bᵀ P(t)`, with `P` interpolated between nodes by cubic
/// Hermite using the Riccati right-hand side as the slope.
#[derive(Clone, Debug)]
pub struct FeedbackLaw {
    grid: TimeGrid,
    p: Vec<SquareMatrix>,
    dp: Vec<SquareMatrix>,
    gain_factor: Matrix,
}

impl FeedbackLaw {
    pub fn p_at(&self, t: f64) -> SquareMatrix {
        let h = self.grid.step_size();
        let last = self.grid.steps() - 1;
        let k = (((t - self.grid.start()) / h).floor().max(0.0) as usize).min(last);
        let s = ((t - self.grid.node(k)) / h).clamp(0.0, 1.0);
        let (s2, s3) = (s * s, s * s * s);
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        self.p[k]
            .scale(h00)
            .add_scaled(h * h10, &self.dp[k])
            .add_scaled(h01, &self.p[k + 1])
            .add_scaled(h * h11, &self.dp[k + 1])
    }

    pub fn gain_at(&self, t: f64) -> Matrix {
        self.gain_factor.matmul(&self.p_at(t))
    }

    /// Gain at grid node `k`, without interpolation.
    pub fn gain_at_node(&self, k: usize) -> Matrix {
        self.gain_factor.matmul(&self.p[k])
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }
}

pub fn feedback_gain(path: &RiccatiPath, prob: &LqrProblem) -> FeedbackLaw {
    FeedbackLaw {
        grid: path.grid,
        dp: path.p.iter().map(|p| prob.riccati_rhs(p)).collect(),
        p: path.p.clone(),
        gain_factor: prob.r_inv.matmul(&prob.b.transpose()).scale(-1.0),
    }
}

/// Input applied in closed loop.
#[derive(Clone, Debug)]
pub enum ControlLaw {
    /// `u = K(t) x`
    Feedback(FeedbackLaw),
    /// `u ≡ u_c`
    Constant(StateVector),
}

impl ControlLaw {
    pub fn input(&self, t: f64, x: &StateVector) -> StateVector {
        match self {
            ControlLaw::Feedback(law) => StateVector::from_vec(law.gain_at(t).matvec(x.as_slice())),
            ControlLaw::Constant(u) => u.clone(),
        }
    }
}

/// RK4 simulation of `x' = A x + B u(t, x)` on `grid`.
pub fn closed_loop_simulate(prob: &LqrProblem, law: &ControlLaw, x0: &StateVector, grid: &TimeGrid) -> Result<Trajectory> {
    if x0.dim() != prob.state_dim() {
        return Err(Error::DimensionMismatch {
            expected: prob.state_dim(),
            found: x0.dim(),
        });
    }
    let rhs = |t: f64, x: &StateVector| {
        let u = law.input(t, x);
        let ax = prob.a.matvec(x.as_slice());
        let bu = prob.b.matvec(u.as_slice());
        StateVector::from_vec(ax.iter().zip(&bu).map(|(a, b)| a + b).collect())
    };
    let rk4 = ButcherTable::rk4();
    let h = grid.step_size();
    let mut xs = vec![x0.clone()];
    for k in 0..grid.steps() {
        let next = rk4.step(rhs, grid.node(k), &xs[k], h);
        xs.push(next);
    }
    Ok(Trajectory {
        grid: *grid,
        states: xs,
        group_path: None,
    })
}

fn quad_form(m: &SquareMatrix, x: &[f64]) -> f64 {
    m.matvec(x).iter().zip(x).map(|(a, b)| a * b).sum()
}

/// Composite quadrature of equally spaced samples: Simpson for an even number
/// of panels; otherwise Simpson on all but the last three panels and the 3/8
/// rule on those. A single panel falls back to the trapezoid rule.
pub fn integrate_samples(values: &[f64], h: f64) -> f64 {
    let panels = values.len().saturating_sub(1);
    match panels {
        0 => 0.0,
        1 => 0.5 * h * (values[0] + values[1]),
        _ => {
            let simpson_panels = if panels % 2 == 0 { panels } else { panels - 3 };
            let mut total = 0.0;
            if simpson_panels > 0 {
                let mut s = values[0] + values[simpson_panels];
                for (i, v) in values.iter().enumerate().take(simpson_panels).skip(1) {
                    s += if i % 2 == 1 { 4.0 } else { 2.0 } * v;
                }
                total += s * h / 3.0;
            }
            if simpson_panels < panels {
                let v = &values[simpson_panels..];
                total += 3.0 * h / 8.0 * (v[0] + 3.0 * v[1] + 3.0 * v[2] + v[3]);
            }
            total
        }
    }
}

/// `J = x(tf)ᵀ S x(tf) + ∫ (xᵀQx + uᵀRu) dt` on the trajectory grid.
pub fn cost_eval(prob: &LqrProblem, traj: &Trajectory, law: &ControlLaw) -> Result<f64> {
    prob.check_grid(&traj.grid)?;
    let integrand: Vec<f64> = traj
        .grid
        .nodes()
        .zip(&traj.states)
        .map(|(t, x)| {
            let u = law.input(t, x);
            quad_form(&prob.q, x.as_slice()) + quad_form(&prob.r, u.as_slice())
        })
        .collect();
    let running = integrate_samples(&integrand, traj.grid.step_size());
    Ok(quad_form(&prob.s, traj.final_state().as_slice()) + running)
}

/// Constant input taking the vehicle from `Δv(0) = v̄ − 1` to `Δv(1) = 0`:
/// `(2v̄ − 2)/(1 − e²)`.
pub fn constant_control(v_bar: f64) -> f64 {
    (2.0 * v_bar - 2.0) / (1.0 - std::f64::consts::E.powi(2))
}

/// Closed-form vehicle Riccati solution `P(t)`.
pub use crate::liesys::exact_lqr_vehicle_p as vehicle_p_exact;

/// Costs and terminal deviations of both vehicle controllers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VehicleComparison {
    pub v_bar: f64,
    pub cost_optimal: f64,
    pub cost_constant: f64,
    pub dv_end_optimal: f64,
    pub dv_end_constant: f64,
}

/// Both closed loops of the vehicle example for one cruise speed.
#[derive(Clone, Debug)]
pub struct VehicleSimulation {
    pub v_bar: f64,
    pub problem: LqrProblem,
    pub optimal_law: ControlLaw,
    pub constant_law: ControlLaw,
    pub optimal: Trajectory,
    pub constant: Trajectory,
}

impl VehicleSimulation {
    /// The Riccati solve runs at step `h`, the closed loops on a grid four
    /// times finer.
    pub fn run(v_bar: f64, scheme: LieScheme, h: f64) -> Result<Self> {
        let problem = LqrProblem::vehicle();
        let (t0, tf) = problem.horizon();
        let grid = TimeGrid::with_step(t0, tf, h)?;
        let optimal_law = ControlLaw::Feedback(feedback_gain(&riccati_backward_solve(&problem, scheme, &grid)?, &problem));
        let constant_law = ControlLaw::Constant(StateVector::scalar(constant_control(v_bar)));
        let fine = grid.refined(4);
        let x0 = StateVector::scalar(v_bar - 1.0);
        let optimal = closed_loop_simulate(&problem, &optimal_law, &x0, &fine)?;
        let constant = closed_loop_simulate(&problem, &constant_law, &x0, &fine)?;
        Ok(VehicleSimulation {
            v_bar,
            problem,
            optimal_law,
            constant_law,
            optimal,
            constant,
        })
    }

    pub fn comparison(&self) -> Result<VehicleComparison> {
        Ok(VehicleComparison {
            v_bar: self.v_bar,
            cost_optimal: cost_eval(&self.problem, &self.optimal, &self.optimal_law)?,
            cost_constant: cost_eval(&self.problem, &self.constant, &self.constant_law)?,
            dv_end_optimal: self.optimal.final_state()[0],
            dv_end_constant: self.constant.final_state()[0],
        })
    }
}

pub fn vehicle_comparison(v_bar: f64, scheme: LieScheme, h: f64) -> Result<VehicleComparison> {
    VehicleSimulation::run(v_bar, scheme, h)?.comparison()
}

/// Optimal cost in closed form, `P(t0) Δv0²`.
pub fn vehicle_optimal_cost_exact(v_bar: f64) -> f64 {
    vehicle_p_exact(0.0) * (v_bar - 1.0).powi(2)
}

/// Constant-control cost in closed form: `Δv(t) = c e^{−2t} + d` with
/// `d = Δu_c / 2`, `c = Δv0 − d`, integrated exactly.
pub fn vehicle_constant_cost_exact(v_bar: f64) -> f64 {
    let u = constant_control(v_bar);
    let d = 0.5 * u;
    let c = (v_bar - 1.0) - d;
    let e4 = (-4.0f64).exp();
    let e2 = (-2.0f64).exp();
    let int_v2 = c * c * (1.0 - e4) / 4.0 + 2.0 * c * d * (1.0 - e2) / 2.0 + d * d;
    let v_end = c * e2 + d;
    v_end * v_end + int_v2 + u * u
}

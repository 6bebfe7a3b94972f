//! Lie systems, their automorphic lift, and the geometric solver.
//!
//! Solver: `Y_0 = I`, `Y_{k+1} = exp(Ω_k) Y_k`, and the manifold point moves
//! by the increment only, `x_{k+1} = φ(exp(Ω_k), x_k)`. For a genuine action
//! this equals `φ(Y_{k+1}, x_0)`; applying the full `Y_{k+1}` to `x_k` would
//! count the history twice.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::actions::{GroupAction, Sl2Action, Sl3ChartAction, SlnAction};
use crate::error::{Error, Result};
use crate::integrators::{ClassicalScheme, LieScheme, MatrixPath, TimeGrid, MAGNUS_CONVERGENCE_BOUND};
use crate::lie::{sl2_basis, sl3_basis, LieAlgebraBasis};
use crate::matkit::{det, expm, Matrix, SquareMatrix, StateVector};

type CoeffFn = Arc<dyn Fn(f64) -> Vec<f64> + Send + Sync>;
type RhsFn = Arc<dyn Fn(f64, &StateVector) -> StateVector + Send + Sync>;

/// Coefficients `b(t) = (b_1, .., b_r)` with optional first and second
/// derivatives.
#[derive(Clone)]
pub struct CoefficientPath {
    r: usize,
    b: CoeffFn,
    db: Option<CoeffFn>,
    ddb: Option<CoeffFn>,
}

impl fmt::Debug for CoefficientPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoefficientPath")
            .field("r", &self.r)
            .field("analytic_derivatives", &(self.db.is_some() && self.ddb.is_some()))
            .finish()
    }
}

impl CoefficientPath {
    pub fn new(r: usize, b: impl Fn(f64) -> Vec<f64> + Send + Sync + 'static) -> Self {
        CoefficientPath {
            r,
            b: Arc::new(b),
            db: None,
            ddb: None,
        }
    }

    pub fn constant(values: Vec<f64>) -> Self {
        let r = values.len();
        CoefficientPath::new(r, move |_| values.clone()).with_derivatives(move |_| vec![0.0; r], move |_| vec![0.0; r])
    }

    pub fn with_derivatives(
        mut self,
        db: impl Fn(f64) -> Vec<f64> + Send + Sync + 'static,
        ddb: impl Fn(f64) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        self.db = Some(Arc::new(db));
        self.ddb = Some(Arc::new(ddb));
        self
    }

    pub fn len(&self) -> usize {
        self.r
    }

    pub fn is_empty(&self) -> bool {
        self.r == 0
    }

    pub fn at(&self, t: f64) -> Vec<f64> {
        (self.b)(t)
    }
}

/// `dx/dt = Σ b_α(t) X_α(x)` together with the matrix basis whose fundamental
/// fields under `action` are the `X_α`.
#[derive(Clone)]
pub struct LieSystem {
    name: String,
    basis: LieAlgebraBasis,
    coefficients: CoefficientPath,
    action: Arc<dyn GroupAction>,
    rhs: RhsFn,
}

impl fmt::Debug for LieSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LieSystem")
            .field("name", &self.name)
            .field("basis", &self.basis.name())
            .field("action", &self.action)
            .finish()
    }
}

impl LieSystem {
    pub fn new(
        name: impl Into<String>,
        basis: LieAlgebraBasis,
        coefficients: CoefficientPath,
        action: Arc<dyn GroupAction>,
        rhs: impl Fn(f64, &StateVector) -> StateVector + Send + Sync + 'static,
    ) -> Result<Self> {
        if coefficients.len() != basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: basis.dim(),
                found: coefficients.len(),
            });
        }
        if action.group_dim() != basis.matrix_size() {
            return Err(Error::DimensionMismatch {
                expected: basis.matrix_size(),
                found: action.group_dim(),
            });
        }
        Ok(LieSystem {
            name: name.into(),
            basis,
            coefficients,
            action,
            rhs: Arc::new(rhs),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn basis(&self) -> &LieAlgebraBasis {
        &self.basis
    }

    pub fn coefficients(&self) -> &CoefficientPath {
        &self.coefficients
    }

    pub fn action(&self) -> &dyn GroupAction {
        self.action.as_ref()
    }

    pub fn manifold_dim(&self) -> usize {
        self.action.manifold_dim()
    }

    pub fn rhs(&self, t: f64, x: &StateVector) -> StateVector {
        (self.rhs)(t, x)
    }
}

/// States on a time grid, optionally with the group path that produced them.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub grid: TimeGrid,
    pub states: Vec<StateVector>,
    pub group_path: Option<Vec<SquareMatrix>>,
}

impl Trajectory {
    pub fn final_state(&self) -> &StateVector {
        self.states.last().expect("trajectories are never empty")
    }

    /// `max_k |det Y_k - 1|` over the group path, if any.
    pub fn max_det_drift(&self) -> Option<f64> {
        self.group_path
            .as_ref()
            .map(|ys| ys.iter().map(|y| (det(y) - 1.0).abs()).fold(0.0, f64::max))
    }
}

/// `A(t) = Σ b_α(t) M_α`, with derivatives from the coefficient derivatives
/// when both are available.
pub fn lift_to_group(sys: &LieSystem) -> MatrixPath {
    let basis = sys.basis.clone();
    let coeffs = sys.coefficients.clone();
    let path = {
        let (basis, coeffs) = (basis.clone(), coeffs.clone());
        MatrixPath::new(basis.matrix_size(), move |t| basis.combine(&coeffs.at(t)))
    };
    match (coeffs.db.clone(), coeffs.ddb.clone()) {
        (Some(db), Some(ddb)) => {
            let b2 = basis.clone();
            path.with_derivatives(move |t| basis.combine(&db(t)), move |t| b2.combine(&ddb(t)))
        }
        _ => path,
    }
}

/// How the manifold point is advanced from the group path.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ManifoldUpdate {
    /// `x_{k+1} = φ(exp(Ω_k), x_k)`
    #[default]
    Incremental,
    /// `x_{k+1} = φ(Y_{k+1}, x_0)`
    FromInitial,
}

pub fn solve_lie_system(sys: &LieSystem, scheme: LieScheme, grid: &TimeGrid, x0: &StateVector) -> Result<Trajectory> {
    solve_lie_system_with(sys, scheme, grid, x0, ManifoldUpdate::Incremental)
}

pub fn solve_lie_system_with(
    sys: &LieSystem,
    scheme: LieScheme,
    grid: &TimeGrid,
    x0: &StateVector,
    update: ManifoldUpdate,
) -> Result<Trajectory> {
    solve_automorphic(&lift_to_group(sys), sys.action(), scheme, grid, x0, update)
}

/// Geometric solve for an arbitrary `A(t)` and action.
pub fn solve_automorphic(
    path: &MatrixPath,
    action: &dyn GroupAction,
    scheme: LieScheme,
    grid: &TimeGrid,
    x0: &StateVector,
    update: ManifoldUpdate,
) -> Result<Trajectory> {
    if !x0.is_finite() {
        return Err(Error::NonFinite);
    }
    // reject a start point outside the chart before doing any work
    action.apply(&Matrix::identity(path.size()), x0)?;
    let h = grid.step_size();
    let mut warned = false;
    let mut ys = Vec::with_capacity(grid.steps() + 1);
    let mut xs = Vec::with_capacity(grid.steps() + 1);
    ys.push(Matrix::identity(path.size()));
    xs.push(x0.clone());
    for k in 0..grid.steps() {
        let t = grid.node(k);
        let fail = |e: Error| e.at_step(k + 1);
        if !warned && h * path.at(t + 0.5 * h).frobenius_norm() > MAGNUS_CONVERGENCE_BOUND {
            log::warn!("step {}: h·||A|| exceeds the Magnus convergence bound", k + 1);
            warned = true;
        }
        let inc = expm(&scheme.omega(path, t, h).map_err(fail)?);
        let y_next = inc.matmul(&ys[k]);
        let x_next = match update {
            ManifoldUpdate::Incremental => action.apply(&inc, &xs[k]),
            ManifoldUpdate::FromInitial => action.apply(&y_next, x0),
        }
        .map_err(fail)?;
        if !x_next.is_finite() {
            return Err(fail(Error::NonFinite));
        }
        ys.push(y_next);
        xs.push(x_next);
    }
    Ok(Trajectory {
        grid: *grid,
        states: xs,
        group_path: Some(ys),
    })
}

/// Classical one-step integration directly on the manifold coordinates.
pub fn solve_classical(
    rhs: impl Fn(f64, &StateVector) -> StateVector,
    scheme: ClassicalScheme,
    grid: &TimeGrid,
    x0: &StateVector,
) -> Trajectory {
    let table = scheme.table();
    let h = grid.step_size();
    let mut xs = Vec::with_capacity(grid.steps() + 1);
    xs.push(x0.clone());
    for k in 0..grid.steps() {
        let next = table.step(&rhs, grid.node(k), &xs[k], h);
        xs.push(next);
    }
    Trajectory {
        grid: *grid,
        states: xs,
        group_path: None,
    }
}

/// Classical scheme on the group equation, mapped through the action.
///
/// `Z_k` is one classical step of `Y' = A(t) Y` from `I`; since the scheme is
/// linear in `Y`, `Ỹ_{k+1} = Z_k Ỹ_k` is the same step taken from `Ỹ_k`.
/// `Z_k` is generally not in the group; its determinant drift is kept in the
/// returned group path. The manifold moves by `x_{k+1} = φ(Z_k, x_k)`.
pub fn solve_via_group_action_alternate(
    sys: &LieSystem,
    scheme: ClassicalScheme,
    grid: &TimeGrid,
    x0: &StateVector,
) -> Result<Trajectory> {
    let path = lift_to_group(sys);
    let action = sys.action();
    let n = path.size();
    action.apply(&Matrix::identity(n), x0)?;
    let table = scheme.table();
    let h = grid.step_size();
    let identity = Matrix::identity(n);
    let mut ys = Vec::with_capacity(grid.steps() + 1);
    let mut xs = Vec::with_capacity(grid.steps() + 1);
    ys.push(identity.clone());
    xs.push(x0.clone());
    for k in 0..grid.steps() {
        let z = table.step(|t, y: &Matrix| path.at(t).matmul(y), grid.node(k), &identity, h);
        let x_next = action.apply(&z, &xs[k]).map_err(|e| e.at_step(k + 1))?;
        ys.push(z.matmul(&ys[k]));
        xs.push(x_next);
    }
    Ok(Trajectory {
        grid: *grid,
        states: xs,
        group_path: Some(ys),
    })
}

/// `max_k ||exact(t_k) - x_k||`.
pub fn global_error(traj: &Trajectory, exact: impl Fn(f64) -> StateVector) -> f64 {
    traj.grid
        .nodes()
        .zip(&traj.states)
        .map(|(t, x)| exact(t).distance(x))
        .fold(0.0, f64::max)
}

/// Riccati superposition `[x2(x3−x1) + ρ x3(x1−x2)] / [(x3−x1) + ρ(x1−x2)]`.
/// An infinite `ρ` takes the ratio of the `ρ` coefficients, i.e. `x3`.
pub fn riccati_superposition(x1: f64, x2: f64, x3: f64, rho: f64) -> Result<f64> {
    if x1 == x2 || x2 == x3 || x1 == x3 {
        return Err(Error::Degenerate("particular solutions must be pairwise distinct"));
    }
    if rho.is_infinite() {
        return Ok(x3 * (x1 - x2) / (x1 - x2));
    }
    let den = (x3 - x1) + rho * (x1 - x2);
    if den.abs() <= 1e-12 * (x3 - x1).abs().max((x1 - x2).abs()) {
        return Err(Error::Degenerate("superposition denominator vanishes"));
    }
    Ok((x2 * (x3 - x1) + rho * x3 * (x1 - x2)) / den)
}

/// The `ρ` for which the superposition of `x1, x2, x3` gives `x4`.
pub fn fit_superposition_rho(x1: f64, x2: f64, x3: f64, x4: f64) -> Result<f64> {
    if x1 == x2 || x2 == x3 || x1 == x3 {
        return Err(Error::Degenerate("particular solutions must be pairwise distinct"));
    }
    if x4 == x3 {
        return Ok(f64::INFINITY);
    }
    Ok((x2 - x4) * (x3 - x1) / ((x4 - x3) * (x1 - x2)))
}

/// `x(t) = (2t³ − 2t²)/(2t − 1)`, the solution of
/// `dx/dt = 2t − x/t + x²/t³`, `x(1) = 0`.
pub fn exact_sl2_example(t: f64) -> Result<f64> {
    let den = 2.0 * t - 1.0;
    if den.abs() <= 1e-12 {
        return Err(Error::InvalidInput("pole at t = 1/2".into()));
    }
    Ok((2.0 * t.powi(3) - 2.0 * t * t) / den)
}

/// Solution of `x' = 5 sin 10t − x + y`, `y' = 5 cos 10t + x + y`,
/// `(x, y)(0) = (1, 0)`.
pub fn exact_sl3_example(t: f64) -> StateVector {
    let r2 = std::f64::consts::SQRT_2;
    let (ch, sh) = ((r2 * t).cosh(), (r2 * t).sinh());
    let (s, c) = ((10.0 * t).sin(), (10.0 * t).cos());
    let x = 157.0 / 102.0 * ch - 2.0 * r2 * 19.0 / 51.0 * sh + 5.0 / 102.0 * s - 55.0 / 102.0 * c;
    let y = 27.0 * r2 / 34.0 * sh + 5.0 / 102.0 * ch + 15.0 / 34.0 * s - 5.0 / 102.0 * c;
    StateVector::from_vec(vec![x, y])
}

/// Exact `x(t)` of `dx/dt = 1 + 2x + x²` from `x(0) = x0`.
pub fn exact_constant_riccati(t: f64, x0: f64) -> f64 {
    (t * x0 + x0 + t) / (1.0 - t - t * x0)
}

/// Backward LQR Riccati `dP/dt = P² + 4P − 1`, `P(1) = 1`, in closed form.
pub fn exact_lqr_vehicle_p(t: f64) -> f64 {
    let s5 = 5f64.sqrt();
    let (ea, eb) = ((2.0 * s5 * t).exp(), (2.0 * s5).exp());
    ((5.0 + s5) * ea + (5.0 - s5) * eb) / ((5.0 - 3.0 * s5) * ea + (5.0 + 3.0 * s5) * eb)
}

/// Named reference problems.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Problem {
    /// `dx/dt = 1 + 2x + x²` on `[0, 0.5]`, `x(0) = 0`.
    RiccatiSl2Const,
    /// `dx/dt = 2t − x/t + x²/t³` on `[1, 10]`, `x(1) = 0`.
    RiccatiSl2,
    /// The planar system on SL(3) through the second-kind chart, `[0, 3]`.
    RiccatiSl3,
    /// The same planar system through the projective SL(3) action.
    RiccatiSl3Projective,
    /// Scalar LQR Riccati in reversed time `τ = 1 − t`, `P(τ=0) = 1`, on `[0, 1]`.
    LqrVehicle,
}

impl Problem {
    pub const ALL: [Problem; 5] = [
        Problem::RiccatiSl2Const,
        Problem::RiccatiSl2,
        Problem::RiccatiSl3,
        Problem::RiccatiSl3Projective,
        Problem::LqrVehicle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Problem::RiccatiSl2Const => "riccati-sl2-const",
            Problem::RiccatiSl2 => "riccati-sl2",
            Problem::RiccatiSl3 => "riccati-sl3",
            Problem::RiccatiSl3Projective => "riccati-sl3-projective",
            Problem::LqrVehicle => "lqr-vehicle",
        }
    }

    pub fn interval(self) -> (f64, f64) {
        match self {
            Problem::RiccatiSl2Const => (0.0, 0.5),
            Problem::RiccatiSl2 => (1.0, 10.0),
            Problem::RiccatiSl3 | Problem::RiccatiSl3Projective => (0.0, 3.0),
            Problem::LqrVehicle => (0.0, 1.0),
        }
    }

    pub fn initial_state(self) -> StateVector {
        match self {
            Problem::RiccatiSl2Const | Problem::RiccatiSl2 => StateVector::scalar(0.0),
            Problem::RiccatiSl3 | Problem::RiccatiSl3Projective => StateVector::from_vec(vec![1.0, 0.0]),
            Problem::LqrVehicle => StateVector::scalar(1.0),
        }
    }

    /// Exact solution from [`Self::initial_state`] at the start of
    /// [`Self::interval`].
    pub fn exact(self, t: f64) -> StateVector {
        match self {
            Problem::RiccatiSl2Const => StateVector::scalar(exact_constant_riccati(t, 0.0)),
            Problem::RiccatiSl2 => StateVector::scalar(exact_sl2_example(t).expect("t within the problem domain")),
            Problem::RiccatiSl3 | Problem::RiccatiSl3Projective => exact_sl3_example(t),
            Problem::LqrVehicle => StateVector::scalar(exact_lqr_vehicle_p(1.0 - t)),
        }
    }

    /// Exact solution from `x0` at `t0`, when a closed form is known: any
    /// start for the autonomous constant Riccati, otherwise only the
    /// default start.
    pub fn exact_from(self, t0: f64, x0: &StateVector, t: f64) -> Option<StateVector> {
        if self == Problem::RiccatiSl2Const && x0.dim() == 1 {
            return Some(StateVector::scalar(exact_constant_riccati(t - t0, x0[0])));
        }
        (t0 == self.interval().0 && *x0 == self.initial_state()).then(|| self.exact(t))
    }

    pub fn system(self) -> LieSystem {
        match self {
            Problem::RiccatiSl2Const => scalar_riccati(self.name(), CoefficientPath::constant(vec![1.0, 2.0, 1.0])),
            Problem::RiccatiSl2 => scalar_riccati(
                self.name(),
                CoefficientPath::new(3, |t| vec![2.0 * t, -1.0 / t, 1.0 / t.powi(3)]).with_derivatives(
                    |t| vec![2.0, 1.0 / (t * t), -3.0 / t.powi(4)],
                    |t| vec![0.0, -2.0 / t.powi(3), 12.0 / t.powi(5)],
                ),
            ),
            Problem::LqrVehicle => scalar_riccati(self.name(), CoefficientPath::constant(vec![1.0, -4.0, -1.0])),
            Problem::RiccatiSl3 => planar_system(self.name(), sl3_basis(), Arc::new(Sl3ChartAction)),
            Problem::RiccatiSl3Projective => planar_system(
                self.name(),
                projective_plane_basis(),
                Arc::new(SlnAction::new(3).expect("n = 3 is valid")),
            ),
        }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Problem {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Problem::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown problem '{s}'")))
    }
}

/// Any of the solvers, by the names used on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Geometric(LieScheme),
    Classical(ClassicalScheme),
    /// Classical scheme on the group equation, mapped through the action.
    Alternate(ClassicalScheme),
}

impl Method {
    pub const ALL: [Method; 7] = [
        Method::Geometric(LieScheme::Magnus2),
        Method::Geometric(LieScheme::Magnus4),
        Method::Geometric(LieScheme::Rkmk4),
        Method::Classical(ClassicalScheme::Heun),
        Method::Classical(ClassicalScheme::Rk4),
        Method::Alternate(ClassicalScheme::Heun),
        Method::Alternate(ClassicalScheme::Rk4),
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Geometric(s) => s.name(),
            Method::Classical(s) => s.name(),
            Method::Alternate(ClassicalScheme::Heun) => "alternate-heun",
            Method::Alternate(ClassicalScheme::Rk4) => "alternate-rk4",
        }
    }

    pub fn order(self) -> u32 {
        match self {
            Method::Geometric(s) => s.order(),
            Method::Classical(s) | Method::Alternate(s) => s.order(),
        }
    }

    pub fn solve(self, sys: &LieSystem, grid: &TimeGrid, x0: &StateVector) -> Result<Trajectory> {
        match self {
            Method::Geometric(s) => solve_lie_system(sys, s, grid, x0),
            Method::Classical(s) => {
                let tr = solve_classical(|t, x| sys.rhs(t, x), s, grid, x0);
                match tr.states.iter().position(|x| !x.is_finite()) {
                    Some(k) => Err(Error::NonFinite.at_step(k)),
                    None => Ok(tr),
                }
            }
            Method::Alternate(s) => solve_via_group_action_alternate(sys, s, grid, x0),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown scheme '{s}'")))
    }
}

/// Global error of `method` on `problem` over its default interval.
pub fn problem_error(problem: Problem, method: Method, grid: &TimeGrid) -> Result<f64> {
    let tr = method.solve(&problem.system(), grid, &problem.initial_state())?;
    Ok(global_error(&tr, |t| problem.exact(t)))
}

/// `dx/dt = b0 + b1 x + b2 x²` as a Lie system on SL(2) with the homography
/// action.
pub fn scalar_riccati(name: &str, coefficients: CoefficientPath) -> LieSystem {
    let c = coefficients.clone();
    LieSystem::new(name, sl2_basis(), coefficients, Arc::new(Sl2Action), move |t, x| {
        let b = c.at(t);
        StateVector::scalar(b[0] + b[1] * x[0] + b[2] * x[0] * x[0])
    })
    .expect("sl(2) Riccati system is well formed")
}

/// The eight planar fields `∂x, ∂y, x∂x, y∂y, y∂x, x∂y, x²∂x+xy∂y,
/// xy∂x+y²∂y` evaluated at `(x, y)`.
pub fn planar_fields(x: f64, y: f64) -> [[f64; 2]; 8] {
    [[1.0, 0.0], [0.0, 1.0], [x, 0.0], [0.0, y], [y, 0.0], [0.0, x], [x * x, x * y], [x * y, y * y]]
}

fn planar_system(name: &str, basis: LieAlgebraBasis, action: Arc<dyn GroupAction>) -> LieSystem {
    let coefficients = CoefficientPath::new(8, |t| {
        vec![5.0 * (10.0 * t).sin(), 5.0 * (10.0 * t).cos(), -1.0, 1.0, 1.0, 1.0, 0.0, 0.0]
    })
    .with_derivatives(
        |t| vec![50.0 * (10.0 * t).cos(), -50.0 * (10.0 * t).sin(), 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        |t| vec![-500.0 * (10.0 * t).sin(), -500.0 * (10.0 * t).cos(), 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    );
    let c = coefficients.clone();
    LieSystem::new(name, basis, coefficients, action, move |t, p| {
        let b = c.at(t);
        let fields = planar_fields(p[0], p[1]);
        let mut out = [0.0; 2];
        for (bk, f) in b.iter().zip(fields) {
            out[0] += bk * f[0];
            out[1] += bk * f[1];
        }
        StateVector::from_vec(out.to_vec())
    })
    .expect("planar system is well formed")
}

/// Generators whose fundamental fields under the projective SL(3) action are
/// the eight planar fields, in the same order.
pub fn projective_plane_basis() -> LieAlgebraBasis {
    let e = |i, j| Matrix::unit(3, i, j);
    let generators = vec![
        e(1, 0),
        e(2, 0),
        Matrix::diag(&[-1.0, 2.0, -1.0]).scale(1.0 / 3.0),
        Matrix::diag(&[-1.0, -1.0, 2.0]).scale(1.0 / 3.0),
        e(1, 2),
        e(2, 1),
        e(0, 1).scale(-1.0),
        e(0, 2).scale(-1.0),
    ];
    // the fields close with the constants of sl3_basis; a left action
    // realizes them through the opposite matrix brackets
    let c: Vec<Vec<Vec<f64>>> = sl3_basis().structure_constants().to_vec();
    LieAlgebraBasis::new("sl(3) projective", generators, c).expect("projective basis is valid")
}

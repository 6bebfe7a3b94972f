//! Fixed-step one-step methods: classical explicit Runge–Kutta on vector
//! spaces, and Lie-group steppers (Magnus 2/4, RKMK) for `Y' = A(t) Y`.
//!
//! Every Lie-group step is re-centered: the algebra unknown restarts at zero
//! at `t_k`, the step produces `Ω_k`, and the group point advances by
//! `Y_{k+1} = exp(Ω_k) Y_k`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lie::dexp_inv;
use crate::matkit::{commutator, expm, Matrix, SquareMatrix, StateVector};

/// Convergence radius of the Magnus series:
/// `∫_0^t ||A|| dξ <= ∫_0^{2π} dξ / (4 + ξ(1 - cot(ξ/2)))`.
pub const MAGNUS_CONVERGENCE_BOUND: f64 = 1.086868702;

/// Uniform grid `t_k = a + k h`, `h = (b - a) / N`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeGrid {
    a: f64,
    b: f64,
    steps: usize,
    h: f64,
}

impl TimeGrid {
    pub fn new(a: f64, b: f64, steps: usize) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) || b <= a {
            return Err(Error::InvalidGrid(format!("need a < b, got [{a}, {b}]")));
        }
        if steps == 0 {
            return Err(Error::InvalidGrid("need at least one step".into()));
        }
        Ok(TimeGrid {
            a,
            b,
            steps,
            h: (b - a) / steps as f64,
        })
    }

    /// Grid with step `h`; `(b - a) / h` must be an integer to 1e-9 relative.
    pub fn with_step(a: f64, b: f64, h: f64) -> Result<Self> {
        if !(h > 0.0) {
            return Err(Error::InvalidGrid(format!("step must be positive, got {h}")));
        }
        let ratio = (b - a) / h;
        let steps = ratio.round();
        if steps < 1.0 || (ratio - steps).abs() > 1e-9 * ratio.abs().max(1.0) {
            return Err(Error::InvalidGrid(format!(
                "step {h} does not divide [{a}, {b}] into a whole number of steps"
            )));
        }
        Self::new(a, b, steps as usize)
    }

    pub fn start(&self) -> f64 {
        self.a
    }

    pub fn end(&self) -> f64 {
        self.b
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn step_size(&self) -> f64 {
        self.h
    }

    /// Node `t_k`; the last node is exactly `b`.
    pub fn node(&self, k: usize) -> f64 {
        if k == self.steps {
            self.b
        } else {
            self.a + k as f64 * self.h
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.steps).map(move |k| self.node(k))
    }

    /// Same interval with `factor` times as many steps.
    pub fn refined(&self, factor: usize) -> TimeGrid {
        TimeGrid::new(self.a, self.b, self.steps * factor.max(1)).expect("refinement of a valid grid")
    }
}

type MatrixFn = Arc<dyn Fn(f64) -> SquareMatrix + Send + Sync>;

/// A `t`-dependent matrix `A(t)` with optional analytic derivatives.
#[derive(Clone)]
pub struct MatrixPath {
    n: usize,
    eval: MatrixFn,
    d1: Option<MatrixFn>,
    d2: Option<MatrixFn>,
    fd_fallback: bool,
}

impl fmt::Debug for MatrixPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MatrixPath")
            .field("n", &self.n)
            .field("analytic_derivatives", &(self.d1.is_some() && self.d2.is_some()))
            .field("fd_fallback", &self.fd_fallback)
            .finish()
    }
}

impl MatrixPath {
    pub fn new(n: usize, eval: impl Fn(f64) -> SquareMatrix + Send + Sync + 'static) -> Self {
        MatrixPath {
            n,
            eval: Arc::new(eval),
            d1: None,
            d2: None,
            fd_fallback: true,
        }
    }

    pub fn constant(a: SquareMatrix) -> Self {
        let n = a.dim();
        let zero = Matrix::zeros(n, n);
        let z2 = zero.clone();
        MatrixPath::new(n, move |_| a.clone()).with_derivatives(move |_| zero.clone(), move |_| z2.clone())
    }

    pub fn zero(n: usize) -> Self {
        Self::constant(Matrix::zeros(n, n))
    }

    pub fn with_derivatives(
        mut self,
        d1: impl Fn(f64) -> SquareMatrix + Send + Sync + 'static,
        d2: impl Fn(f64) -> SquareMatrix + Send + Sync + 'static,
    ) -> Self {
        self.d1 = Some(Arc::new(d1));
        self.d2 = Some(Arc::new(d2));
        self
    }

    /// Drops analytic derivatives (keeps the finite-difference fallback).
    pub fn without_derivatives(mut self) -> Self {
        self.d1 = None;
        self.d2 = None;
        self
    }

    pub fn without_fallback(mut self) -> Self {
        self.fd_fallback = false;
        self
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn has_analytic_derivatives(&self) -> bool {
        self.d1.is_some() && self.d2.is_some()
    }

    pub fn at(&self, t: f64) -> SquareMatrix {
        (self.eval)(t)
    }

    /// `(Ȧ(t), Ä(t))`, analytic when available, else central differences
    /// with `δ = max(1e-5, 1e-2 h)`.
    pub fn derivatives(&self, t: f64, h: f64) -> Result<(SquareMatrix, SquareMatrix)> {
        if let (Some(d1), Some(d2)) = (&self.d1, &self.d2) {
            return Ok((d1(t), d2(t)));
        }
        if !self.fd_fallback {
            return Err(Error::MissingDerivative);
        }
        let delta = (1e-2 * h).max(1e-5);
        let ap = self.at(t + delta);
        let am = self.at(t - delta);
        let a0 = self.at(t);
        let d1 = ap.add_scaled(-1.0, &am).scale(0.5 / delta);
        let d2 = ap.add_scaled(-2.0, &a0).add_scaled(1.0, &am).scale(1.0 / (delta * delta));
        Ok((d1, d2))
    }
}

/// Vector-space operations needed by explicit Runge–Kutta stages.
pub trait LinearState: Clone {
    /// `self + s * other`
    fn axpy(&self, s: f64, other: &Self) -> Self;
}

impl LinearState for StateVector {
    fn axpy(&self, s: f64, other: &Self) -> Self {
        self.add_scaled(s, other)
    }
}

impl LinearState for Matrix {
    fn axpy(&self, s: f64, other: &Self) -> Self {
        self.add_scaled(s, other)
    }
}

/// Explicit Runge–Kutta coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct ButcherTable {
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
    c: Vec<f64>,
}

impl ButcherTable {
    pub fn new(a: Vec<Vec<f64>>, b: Vec<f64>, c: Vec<f64>) -> Result<Self> {
        let s = b.len();
        if s == 0 || c.len() != s || a.len() != s {
            return Err(Error::InvalidInput("Butcher table needs s stages in a, b and c".into()));
        }
        for (j, row) in a.iter().enumerate() {
            if row.len() > j && row[j..].iter().any(|v| *v != 0.0) {
                return Err(Error::InvalidInput("only explicit tables are supported".into()));
            }
        }
        let sum: f64 = b.iter().sum();
        if (sum - 1.0).abs() > 1e-14 {
            return Err(Error::InvalidInput(format!("weights sum to {sum}, not 1")));
        }
        Ok(ButcherTable { a, b, c })
    }

    /// Heun: `c = (0, 1)`, `b = (1/2, 1/2)`.
    pub fn heun() -> Self {
        Self::new(vec![vec![], vec![1.0]], vec![0.5, 0.5], vec![0.0, 1.0]).unwrap()
    }

    /// Explicit midpoint; its RKMK version with `dexp⁻¹ ≈ id` is Magnus 2.
    pub fn midpoint() -> Self {
        Self::new(vec![vec![], vec![0.5]], vec![0.0, 1.0], vec![0.0, 0.5]).unwrap()
    }

    /// Classical fourth-order Runge–Kutta.
    pub fn rk4() -> Self {
        Self::new(
            vec![vec![], vec![0.5], vec![0.0, 0.5], vec![0.0, 0.0, 1.0]],
            vec![1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0],
            vec![0.0, 0.5, 0.5, 1.0],
        )
        .unwrap()
    }

    pub fn stages(&self) -> usize {
        self.b.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.b
    }

    pub fn nodes(&self) -> &[f64] {
        &self.c
    }

    fn coupling(&self, j: usize, l: usize) -> f64 {
        self.a[j].get(l).copied().unwrap_or(0.0)
    }

    /// One explicit step of `x' = f(t, x)`.
    pub fn step<S: LinearState>(&self, f: impl Fn(f64, &S) -> S, t: f64, x: &S, h: f64) -> S {
        let mut k: Vec<S> = Vec::with_capacity(self.stages());
        for j in 0..self.stages() {
            let mut xj = x.clone();
            for (l, kl) in k.iter().enumerate() {
                let a = self.coupling(j, l);
                if a != 0.0 {
                    xj = xj.axpy(h * a, kl);
                }
            }
            k.push(f(t + self.c[j] * h, &xj));
        }
        let mut out = x.clone();
        for (bl, kl) in self.b.iter().zip(&k) {
            if *bl != 0.0 {
                out = out.axpy(h * bl, kl);
            }
        }
        out
    }
}

pub fn heun_step(f: impl Fn(f64, &StateVector) -> StateVector, t: f64, x: &StateVector, h: f64) -> StateVector {
    ButcherTable::heun().step(f, t, x, h)
}

pub fn rk4_step(f: impl Fn(f64, &StateVector) -> StateVector, t: f64, x: &StateVector, h: f64) -> StateVector {
    ButcherTable::rk4().step(f, t, x, h)
}

/// Lie-group schemes for `Y' = A(t) Y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LieScheme {
    Magnus2,
    Magnus4,
    Rkmk4,
}

impl LieScheme {
    pub const ALL: [LieScheme; 3] = [LieScheme::Magnus2, LieScheme::Magnus4, LieScheme::Rkmk4];

    pub fn order(self) -> u32 {
        match self {
            LieScheme::Magnus2 => 2,
            LieScheme::Magnus4 | LieScheme::Rkmk4 => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LieScheme::Magnus2 => "magnus2",
            LieScheme::Magnus4 => "magnus4",
            LieScheme::Rkmk4 => "rkmk4",
        }
    }

    /// Algebra increment `Ω_k` for the step `[t, t + h]`.
    pub fn omega(self, a: &MatrixPath, t: f64, h: f64) -> Result<SquareMatrix> {
        match self {
            LieScheme::Magnus2 => Ok(magnus2_omega(a, t, h)),
            LieScheme::Magnus4 => magnus4_omega(a, t, h),
            LieScheme::Rkmk4 => Ok(rkmk_omega(&ButcherTable::rk4(), 2, a, t, h)),
        }
    }

    /// `exp(Ω_k) Y_k`.
    pub fn step(self, a: &MatrixPath, t: f64, h: f64, y: &SquareMatrix) -> Result<SquareMatrix> {
        Ok(expm(&self.omega(a, t, h)?).matmul(y))
    }
}

impl fmt::Display for LieScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LieScheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "magnus2" => Ok(LieScheme::Magnus2),
            "magnus4" => Ok(LieScheme::Magnus4),
            "rkmk4" | "rkmk" => Ok(LieScheme::Rkmk4),
            other => Err(Error::InvalidInput(format!("unknown Lie scheme '{other}'"))),
        }
    }
}

/// Classical schemes applied directly to a vector field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClassicalScheme {
    Heun,
    Rk4,
}

impl ClassicalScheme {
    pub fn table(self) -> ButcherTable {
        match self {
            ClassicalScheme::Heun => ButcherTable::heun(),
            ClassicalScheme::Rk4 => ButcherTable::rk4(),
        }
    }

    pub fn order(self) -> u32 {
        match self {
            ClassicalScheme::Heun => 2,
            ClassicalScheme::Rk4 => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ClassicalScheme::Heun => "heun",
            ClassicalScheme::Rk4 => "rk4",
        }
    }
}

impl fmt::Display for ClassicalScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn magnus2_omega(a: &MatrixPath, t: f64, h: f64) -> SquareMatrix {
    a.at(t + 0.5 * h).scale(h)
}

fn magnus4_omega(a: &MatrixPath, t: f64, h: f64) -> Result<SquareMatrix> {
    let mid = t + 0.5 * h;
    let a0 = a.at(mid);
    let (d1, d2) = a.derivatives(mid, h)?;
    let a1 = d1.scale(1.0 / 12.0);
    let a2 = d2.scale(1.0 / 24.0);
    let correction = a2.add_scaled(-1.0, &commutator(&a0, &a1));
    Ok(a0.scale(h).add_scaled(h * h * h, &correction))
}

/// RKMK algebra increment for an explicit table with `dexp⁻¹` truncated at
/// `order`: `Θ_j = h Σ a_jl F_l`, `F_j = dexp⁻¹_{Θ_j}(A(t + c_j h))`,
/// `Θ = h Σ b_l F_l`.
pub fn rkmk_omega(table: &ButcherTable, order: usize, a: &MatrixPath, t: f64, h: f64) -> SquareMatrix {
    let n = a.size();
    let mut f: Vec<SquareMatrix> = Vec::with_capacity(table.stages());
    for j in 0..table.stages() {
        let mut theta = Matrix::zeros(n, n);
        for (l, fl) in f.iter().enumerate() {
            let c = table.coupling(j, l);
            if c != 0.0 {
                theta = theta.add_scaled(h * c, fl);
            }
        }
        f.push(dexp_inv(&theta, &a.at(t + table.c[j] * h), order));
    }
    let mut theta = Matrix::zeros(n, n);
    for (bl, fl) in table.b.iter().zip(&f) {
        theta = theta.add_scaled(h * bl, fl);
    }
    theta
}

/// `exp(h A(t_k + h/2)) Y_k`.
pub fn magnus2_step(a: &MatrixPath, t: f64, h: f64, y: &SquareMatrix) -> SquareMatrix {
    expm(&magnus2_omega(a, t, h)).matmul(y)
}

/// `exp(h a0 + h³ (a2 - [a0, a1])) Y_k` with `a0 = A(t½)`, `a1 = Ȧ(t½)/12`,
/// `a2 = Ä(t½)/24`.
pub fn magnus4_step(a: &MatrixPath, t: f64, h: f64, y: &SquareMatrix) -> Result<SquareMatrix> {
    Ok(expm(&magnus4_omega(a, t, h)?).matmul(y))
}

/// Fourth-order RKMK with `dexp⁻¹` truncated after the `[Ω,[Ω,·]]` term.
pub fn rkmk4_step(a: &MatrixPath, t: f64, h: f64, y: &SquareMatrix) -> SquareMatrix {
    expm(&rkmk_omega(&ButcherTable::rk4(), 2, a, t, h)).matmul(y)
}

/// `steps` re-centered steps of `scheme` from `y0` at `t0`; returns
/// `[Y_0, .., Y_steps]`.
pub fn integrate_group_steps(
    scheme: LieScheme,
    a: &MatrixPath,
    t0: f64,
    h: f64,
    steps: usize,
    y0: SquareMatrix,
) -> Result<Vec<SquareMatrix>> {
    let mut out = Vec::with_capacity(steps + 1);
    out.push(y0);
    for k in 0..steps {
        let t = t0 + k as f64 * h;
        let next = scheme.step(a, t, h, &out[k]).map_err(|e| e.at_step(k + 1))?;
        out.push(next);
    }
    Ok(out)
}

/// `Y_0 = I`, `Y_{k+1} = exp(Ω_k) Y_k` over the grid.
pub fn integrate_group(scheme: LieScheme, a: &MatrixPath, grid: &TimeGrid) -> Result<Vec<SquareMatrix>> {
    integrate_group_from(scheme, a, grid, Matrix::identity(a.size()))
}

pub fn integrate_group_from(
    scheme: LieScheme,
    a: &MatrixPath,
    grid: &TimeGrid,
    y0: SquareMatrix,
) -> Result<Vec<SquareMatrix>> {
    integrate_group_steps(scheme, a, grid.start(), grid.step_size(), grid.steps(), y0)
}

/// True iff `∫_start^t ||A(ξ)||_F dξ` (composite Simpson, 1000 panels) is
/// within [`MAGNUS_CONVERGENCE_BOUND`].
pub fn check_magnus_bound(a: &MatrixPath, start: f64, t: f64) -> bool {
    assert!(t >= start, "bound check needs t >= start");
    magnus_norm_integral(a, start, t) <= MAGNUS_CONVERGENCE_BOUND
}

/// `∫_start^t ||A(ξ)||_F dξ` by composite Simpson with 1000 panels.
pub fn magnus_norm_integral(a: &MatrixPath, start: f64, t: f64) -> f64 {
    simpson(|x| a.at(x).frobenius_norm(), start, t, 1000)
}

/// Composite Simpson rule with `panels` (rounded up to even) subintervals.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let n = (panels.max(2) + 1) & !1;
    let h = (b - a) / n as f64;
    if h == 0.0 {
        return 0.0;
    }
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

/// Least-squares line through `(ln x, ln y)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogLogFit {
    pub slope: f64,
    pub intercept: f64,
    /// Pearson correlation of the log data.
    pub correlation: f64,
}

pub fn log_log_fit(xs: &[f64], ys: &[f64]) -> Result<LogLogFit> {
    if xs.len() != ys.len() {
        return Err(Error::DimensionMismatch {
            expected: xs.len(),
            found: ys.len(),
        });
    }
    if xs.len() < 2 {
        return Err(Error::InvalidInput("need at least two points".into()));
    }
    if xs.iter().chain(ys).any(|v| !(*v > 0.0) || !v.is_finite()) {
        return Err(Error::InvalidInput("log-log fit needs positive finite data".into()));
    }
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let m = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / m;
    let my = ly.iter().sum::<f64>() / m;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    let syy: f64 = ly.iter().map(|y| (y - my) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidInput("x values must not all coincide".into()));
    }
    let slope = sxy / sxx;
    let correlation = if syy == 0.0 { 0.0 } else { sxy / (sxx * syy).sqrt() };
    Ok(LogLogFit {
        slope,
        intercept: my - slope * mx,
        correlation,
    })
}

/// Observed order of convergence: slope of `ln(error)` against `ln(h)`.
pub fn estimate_order(h_values: &[f64], errors: &[f64]) -> Result<f64> {
    if h_values.len() < 3 {
        return Err(Error::InvalidInput("need at least three (h, error) pairs".into()));
    }
    Ok(log_log_fit(h_values, errors)?.slope)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::sl2_basis;
    use crate::matkit::det;
    use approx::assert_abs_diff_eq;

    fn sv(v: &[f64]) -> StateVector {
        StateVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn time_grid_invariants() {
        let g = TimeGrid::with_step(1.0, 10.0, 0.5).unwrap();
        assert_eq!(g.steps(), 18);
        assert_eq!(g.node(0), 1.0);
        assert_eq!(g.node(18), 10.0);
        assert_eq!(g.nodes().count(), 19);
        let g = TimeGrid::with_step(0.0, 1.0, 0.1).unwrap();
        assert_eq!(g.steps(), 10);
        assert!(TimeGrid::with_step(0.0, 1.0, 0.3).is_err());
        assert!(TimeGrid::new(1.0, 1.0, 4).is_err());
        assert!(TimeGrid::new(0.0, 1.0, 0).is_err());
        assert_eq!(g.refined(4).steps(), 40);
    }

    #[test]
    fn butcher_tables_are_consistent() {
        for t in [ButcherTable::heun(), ButcherTable::rk4(), ButcherTable::midpoint()] {
            assert_abs_diff_eq!(t.weights().iter().sum::<f64>(), 1.0, epsilon = 1e-14);
        }
        assert!(ButcherTable::new(vec![vec![]], vec![0.9], vec![0.0]).is_err());
        assert!(ButcherTable::new(vec![vec![1.0]], vec![1.0], vec![0.0]).is_err());
    }

    #[test]
    fn heun_examples() {
        let x = sv(&[0.7, -1.0]);
        assert_eq!(heun_step(|_, x| StateVector::zeros(x.dim()), 0.0, &x, 0.1), x);
        let y = heun_step(|_, x| x.clone(), 0.0, &sv(&[1.0]), 0.1);
        assert_abs_diff_eq!(y[0], 1.105, epsilon = 1e-15);
        let riccati = |_t: f64, x: &StateVector| sv(&[1.0 + 2.0 * x[0] + x[0] * x[0]]);
        let y = heun_step(riccati, 0.0, &sv(&[0.0]), 0.1);
        assert_abs_diff_eq!(y[0], 0.1105, epsilon = 1e-15);
    }

    #[test]
    fn rk4_examples() {
        let x = sv(&[3.0]);
        assert_eq!(rk4_step(|_, x| StateVector::zeros(x.dim()), 0.0, &x, 0.1), x);
        let y = rk4_step(|_, x| x.clone(), 0.0, &sv(&[1.0]), 0.1);
        // 1 + h + h²/2 + h³/6 + h⁴/24
        assert_abs_diff_eq!(y[0], 1.1051708333333333, epsilon = 1e-15);

        let sigma = Matrix::from_literal(&[[0.3, -1.0, 0.2], [0.5, -0.4, 0.0], [0.1, 0.9, 0.2]]);
        let x0 = sv(&[1.0, -0.5, 2.0]);
        for &h in &[0.2, 0.1, 0.05] {
            let y = rk4_step(|_, x| StateVector::from_vec(sigma.matvec(x.as_slice())), 0.0, &x0, h);
            let exact = StateVector::from_vec(expm(&sigma.scale(h)).matvec(x0.as_slice()));
            let bound = (sigma.frobenius_norm() * h).powi(5) / 120.0 * x0.norm();
            assert!(y.distance(&exact) <= bound, "h={h}");
        }
    }

    fn smooth_path() -> MatrixPath {
        let b = sl2_basis();
        let b1 = b.clone();
        let b2 = b.clone();
        MatrixPath::new(2, move |t| b.combine(&[t.sin(), 1.0 + t * t, (2.0 * t).cos()]))
            .with_derivatives(
                move |t| b1.combine(&[t.cos(), 2.0 * t, -2.0 * (2.0 * t).sin()]),
                move |t| b2.combine(&[-t.sin(), 2.0, -4.0 * (2.0 * t).cos()]),
            )
    }

    #[test]
    fn zero_path_leaves_group_point_unchanged() {
        let a = MatrixPath::zero(3);
        let y = expm(&Matrix::from_literal(&[[0.1, 0.2, 0.0], [0.0, -0.1, 0.3], [0.2, 0.0, 0.0]]));
        assert_eq!(magnus2_step(&a, 0.0, 0.1, &y), y);
        assert_eq!(magnus4_step(&a, 0.0, 0.1, &y).unwrap(), y);
        assert_eq!(rkmk4_step(&a, 0.0, 0.1, &y), y);
    }

    #[test]
    fn constant_path_is_integrated_exactly() {
        let m = Matrix::from_literal(&[[0.3, 1.0], [-0.7, -0.3]]);
        let a = MatrixPath::constant(m.clone());
        let h = 0.05;
        let exact = expm(&m.scale(h));
        assert!(magnus4_step(&a, 0.0, h, &Matrix::identity(2)).unwrap().distance(&exact) < 1e-14);
        assert!(rkmk4_step(&a, 0.0, h, &Matrix::identity(2)).distance(&exact) < 1e-14);
        for scheme in LieScheme::ALL {
            let ys = integrate_group_steps(scheme, &a, 0.0, h, 20, Matrix::identity(2)).unwrap();
            assert!(ys[20].distance(&expm(&m.scale(20.0 * h))) < 1e-10, "{scheme}");
        }
    }

    #[test]
    fn lqr_lift_single_magnus2_step_matches_group_closed_form() {
        // A = -M0 + 4 M1 + M2 from t=1 to t=2, y(t) = exp((t-1)Σ) y(1)
        let a = sl2_basis().combine(&[-1.0, 4.0, 1.0]);
        assert_eq!(a, Matrix::from_literal(&[[2.0, -1.0], [-1.0, -2.0]]));
        let y = magnus2_step(&MatrixPath::constant(a), 1.0, 1.0, &Matrix::identity(2));
        let s5 = 5f64.sqrt();
        let t = 2.0;
        let pre = (-(s5 * t + s5)).exp() / 10.0;
        let (ea, eb) = ((2.0 * s5 * t).exp(), (2.0 * s5).exp());
        let expected = Matrix::from_literal(&[
            [pre * ((5.0 + 2.0 * s5) * ea + (5.0 - 2.0 * s5) * eb), pre * (s5 * eb - s5 * ea)],
            [pre * (s5 * eb - s5 * ea), pre * ((5.0 - 2.0 * s5) * ea + (5.0 + 2.0 * s5) * eb)],
        ]);
        assert!(y.distance(&expected) < 1e-10 * expected.frobenius_norm());
    }

    #[test]
    fn constant_riccati_group_solution_from_magnus2() {
        let a = MatrixPath::constant(Matrix::from_literal(&[[1.0, 1.0], [-1.0, -1.0]]));
        let grid = TimeGrid::new(0.0, 2.0, 40).unwrap();
        let ys = integrate_group(LieScheme::Magnus2, &a, &grid).unwrap();
        for (k, y) in ys.iter().enumerate() {
            let t = grid.node(k);
            let exact = Matrix::from_literal(&[[t + 1.0, t], [-t, 1.0 - t]]);
            assert!(y.distance(&exact) < 1e-12);
        }
    }

    #[test]
    fn zero_steps_returns_initial_point() {
        let ys = integrate_group_steps(LieScheme::Rkmk4, &smooth_path(), 0.0, 0.1, 0, Matrix::identity(2)).unwrap();
        assert_eq!(ys, vec![Matrix::identity(2)]);
    }

    #[test]
    fn traceless_paths_stay_in_sl() {
        let grid = TimeGrid::new(0.0, 3.0, 300).unwrap();
        for scheme in LieScheme::ALL {
            let ys = integrate_group(scheme, &smooth_path(), &grid).unwrap();
            let worst = ys.iter().map(|y| (det(y) - 1.0).abs()).fold(0.0, f64::max);
            assert!(worst < 1e-9, "{scheme}: {worst}");
        }
    }

    #[test]
    fn magnus4_without_derivatives() {
        let p = smooth_path();
        let y = Matrix::identity(2);
        let analytic = magnus4_step(&p, 0.3, 0.1, &y).unwrap();
        let fd = magnus4_step(&p.clone().without_derivatives(), 0.3, 0.1, &y).unwrap();
        assert!(analytic.distance(&fd) < 1e-9);
        let err = magnus4_step(&p.without_derivatives().without_fallback(), 0.3, 0.1, &y);
        assert!(matches!(err, Err(Error::MissingDerivative)));
    }

    /// Group-level error at `T` against a fine same-scheme reference.
    fn group_error(scheme: LieScheme, steps: usize, reference: &SquareMatrix) -> f64 {
        let ys = integrate_group_steps(scheme, &smooth_path(), 0.0, 2.0 / steps as f64, steps, Matrix::identity(2)).unwrap();
        ys[steps].distance(reference)
    }

    #[test]
    fn group_level_self_convergence_orders() {
        let hs = [2.0 / 20.0, 2.0 / 40.0, 2.0 / 80.0];
        for scheme in LieScheme::ALL {
            // reference at h_min / 10
            let refs = integrate_group_steps(scheme, &smooth_path(), 0.0, 2.0 / 800.0, 800, Matrix::identity(2)).unwrap();
            let reference = &refs[800];
            let errs: Vec<f64> = [20, 40, 80].iter().map(|&n| group_error(scheme, n, reference)).collect();
            let p = estimate_order(&hs, &errs).unwrap();
            assert!((p - scheme.order() as f64).abs() <= 0.5, "{scheme}: slope {p}");
        }
    }

    #[test]
    fn rkmk4_truncation_order_two_is_sufficient() {
        // per-step difference against a j = 6 reference shrinks like h^5
        let p = smooth_path();
        let diffs: Vec<f64> = [0.2, 0.1, 0.05]
            .iter()
            .map(|&h| {
                let lo = rkmk_omega(&ButcherTable::rk4(), 2, &p, 0.4, h);
                let hi = rkmk_omega(&ButcherTable::rk4(), 6, &p, 0.4, h);
                expm(&lo).distance(&expm(&hi))
            })
            .collect();
        let slope = estimate_order(&[0.2, 0.1, 0.05], &diffs).unwrap();
        assert!(slope >= 4.5, "slope {slope}");
    }

    #[test]
    fn midpoint_rkmk_is_magnus2() {
        let p = smooth_path();
        let a = rkmk_omega(&ButcherTable::midpoint(), 0, &p, 0.2, 0.1);
        let b = LieScheme::Magnus2.omega(&p, 0.2, 0.1).unwrap();
        assert!(a.distance(&b) < 1e-15);
    }

    /// The bound value as the integral `∫_0^{2π} dξ / (4 + ξ(1 - cot(ξ/2)))`.
    #[test]
    fn magnus_bound_constant_matches_its_integral() {
        let f = |x: f64| {
            if x == 0.0 {
                0.5
            } else if (x - 2.0 * std::f64::consts::PI).abs() < 1e-15 {
                0.0
            } else {
                1.0 / (4.0 + x * (1.0 - 1.0 / (x / 2.0).tan()))
            }
        };
        let v = simpson(f, 0.0, 2.0 * std::f64::consts::PI, 200_000);
        assert_abs_diff_eq!(v, MAGNUS_CONVERGENCE_BOUND, epsilon = 1e-6);
    }

    #[test]
    fn magnus_bound_examples() {
        assert!(check_magnus_bound(&MatrixPath::zero(2), 0.0, 100.0));
        let unit = MatrixPath::constant(Matrix::from_literal(&[[0.0, 1.0], [0.0, 0.0]]));
        assert!(check_magnus_bound(&unit, 0.0, 1.08));
        assert!(!check_magnus_bound(&unit, 0.0, 1.09));
        let lqr = MatrixPath::constant(sl2_basis().combine(&[-1.0, 4.0, 1.0]));
        // ||A||_F = sqrt(10): threshold 1.086868702 / sqrt(10) ≈ 0.34370
        assert!(check_magnus_bound(&lqr, 0.0, 0.3436));
        assert!(!check_magnus_bound(&lqr, 0.0, 0.3438));
    }

    #[test]
    fn estimate_order_examples() {
        let hs = [0.2, 0.1, 0.05, 0.025];
        let e2: Vec<f64> = hs.iter().map(|h| h * h).collect();
        assert_abs_diff_eq!(estimate_order(&hs, &e2).unwrap(), 2.0, epsilon = 1e-12);
        let e4: Vec<f64> = hs.iter().map(|h| 3.0 * h.powi(4)).collect();
        assert_abs_diff_eq!(estimate_order(&hs, &e4).unwrap(), 4.0, epsilon = 1e-12);
        let noise = [1.01, 0.99, 1.01, 0.99];
        let en: Vec<f64> = hs.iter().zip(noise).map(|(h, n)| h * h * n).collect();
        let p = estimate_order(&hs, &en).unwrap();
        assert!((1.9..=2.1).contains(&p));
        assert!(estimate_order(&hs[..2], &e2[..2]).is_err());
        assert!(estimate_order(&[0.1, 0.0, 0.2], &[1.0, 1.0, 1.0]).is_err());
        assert!(estimate_order(&[0.1, 0.2, 0.3], &[1.0, -1.0, 1.0]).is_err());
    }
}

//! Group actions of SL(n) on Euclidean charts, flows of the basis vector
//! fields, and second-kind canonical coordinates.
//!
//! Indexing: `sl2_flow` takes 0..=2 and `sl3_flow` takes 1..=8, matching the
//! usual names of the vector fields. Generator `k` of [`sl3_basis`] (zero-based)
//! is the field with flow index `k + 1`.

use std::fmt;

use crate::error::{Error, Result};
use crate::lie::{sl2_basis, sl3_basis};
use crate::matkit::{expm, Matrix, SquareMatrix, StateVector};

/// Magnitude below which denominators and log arguments count as zero.
pub const CHART_THRESHOLD: f64 = 1e-12;

/// Step of the central difference in [`fundamental_field`].
pub const FIELD_STEP: f64 = 1e-6;

/// A left action `φ: G × N → N` of a subgroup of GL(n) on an open subset of
/// `R^d`.
pub trait GroupAction: Send + Sync + fmt::Debug {
    /// Size `n` of the acting matrices.
    fn group_dim(&self) -> usize;
    /// Dimension `d` of the manifold.
    fn manifold_dim(&self) -> usize;
    fn apply(&self, y: &SquareMatrix, x: &StateVector) -> Result<StateVector>;

    fn check_dims(&self, y: &SquareMatrix, x: &StateVector) -> Result<()> {
        if !y.is_square() || y.rows() != self.group_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.group_dim(),
                found: y.rows(),
            });
        }
        if x.dim() != self.manifold_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.manifold_dim(),
                found: x.dim(),
            });
        }
        Ok(())
    }
}

fn checked_denominator(d: f64) -> Result<f64> {
    if d.is_finite() && d.abs() > CHART_THRESHOLD {
        Ok(d)
    } else {
        Err(Error::SingularAction { denominator: d })
    }
}

/// Second-kind canonical coordinates `λ`.
#[derive(Clone, Debug, PartialEq)]
pub struct LambdaCoords(Vec<f64>);

impl LambdaCoords {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(LambdaCoords(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl std::ops::Index<usize> for LambdaCoords {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Homography `x ↦ (αx + β)/(γx + δ)` for `Y = [[α, β], [γ, δ]]`.
pub fn sl2_action(y: &SquareMatrix, x0: f64) -> Result<f64> {
    let (a, b, c, d) = (y[(0, 0)], y[(0, 1)], y[(1, 0)], y[(1, 1)]);
    let den = checked_denominator(c * x0 + d)?;
    Ok((a * x0 + b) / den)
}

/// `(λ0, λ1, λ2)` with `Y = exp(λ0 M0) exp(λ1 M1) exp(λ2 M2)`.
pub fn sl2_lambda_from_matrix(y: &SquareMatrix) -> Result<LambdaCoords> {
    let (b, c, d) = (y[(0, 1)], y[(1, 0)], y[(1, 1)]);
    if !(d > CHART_THRESHOLD) {
        return Err(Error::OutsideChart("SL(2) chart needs delta > 0"));
    }
    LambdaCoords::new(vec![b / d, -2.0 * d.ln(), -c / d])
}

pub fn sl2_matrix_from_lambda(l: &LambdaCoords) -> SquareMatrix {
    product_of_exponentials(sl2_basis().generators(), l.values())
}

/// Flows of `X0 = ∂x`, `X1 = x∂x`, `X2 = x²∂x`.
pub fn sl2_flow(index: usize, lambda: f64, x0: f64) -> Result<f64> {
    match index {
        0 => Ok(lambda + x0),
        1 => Ok(x0 * lambda.exp()),
        2 => {
            let den = 1.0 - lambda * x0;
            if den.abs() <= CHART_THRESHOLD {
                return Err(Error::FlowPole(den));
            }
            Ok(x0 / den)
        }
        i => Err(Error::OutOfRange {
            what: "sl(2) flow index",
            value: i as i64,
            range: "0..=2",
        }),
    }
}

/// The eight coordinates with `Y = ∏_{i=1}^{8} exp(λ_i M_i)`.
pub fn sl3_lambda_from_matrix(y: &SquareMatrix) -> Result<LambdaCoords> {
    let e = |i: usize, j: usize| y[(i - 1, j - 1)];
    let y11 = e(1, 1);
    if y11.abs() <= CHART_THRESHOLD {
        return Err(Error::OutsideChart("SL(3) chart needs y11 != 0"));
    }
    let d = e(1, 2) * e(2, 1) - y11 * e(2, 2);
    if d.abs() <= CHART_THRESHOLD {
        return Err(Error::OutsideChart("SL(3) chart needs y12*y21 - y11*y22 != 0"));
    }
    let arg3 = -y11 * d;
    let arg4 = d * d / y11;
    if !(arg3 > CHART_THRESHOLD) || !(arg4 > CHART_THRESHOLD) {
        return Err(Error::OutsideChart("SL(3) chart needs positive log arguments"));
    }
    LambdaCoords::new(vec![
        (e(2, 2) * e(3, 1) - e(2, 1) * e(3, 2)) / d,
        (y11 * e(3, 2) - e(1, 2) * e(3, 1)) / d,
        arg3.ln(),
        arg4.ln(),
        -y11 * e(2, 1) / d,
        e(1, 2) / y11,
        (e(1, 2) * e(2, 3) - e(1, 3) * e(2, 2)) / d,
        (e(1, 3) * e(2, 1) - y11 * e(2, 3)) / d,
    ])
}

pub fn sl3_matrix_from_lambda(l: &LambdaCoords) -> SquareMatrix {
    product_of_exponentials(sl3_basis().generators(), l.values())
}

fn product_of_exponentials(generators: &[SquareMatrix], lambda: &[f64]) -> SquareMatrix {
    assert_eq!(generators.len(), lambda.len(), "one coordinate per generator");
    let n = generators[0].rows();
    generators
        .iter()
        .zip(lambda)
        .fold(Matrix::identity(n), |acc, (m, l)| acc.matmul(&expm(&m.scale(*l))))
}

/// Flows of the eight vector fields `∂x, ∂y, x∂x, y∂y, y∂x, x∂y,
/// x²∂x + xy∂y, xy∂x + y²∂y`.
pub fn sl3_flow(index: usize, lambda: f64, p: &StateVector) -> Result<StateVector> {
    if p.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: p.dim(),
        });
    }
    let (x, y) = (p[0], p[1]);
    let projective = |s: f64| -> Result<StateVector> {
        let den = 1.0 - lambda * s;
        if den.abs() <= CHART_THRESHOLD {
            return Err(Error::FlowPole(den));
        }
        Ok(StateVector::from_vec(vec![x / den, y / den]))
    };
    let out = match index {
        1 => vec![x + lambda, y],
        2 => vec![x, y + lambda],
        3 => vec![x * lambda.exp(), y],
        4 => vec![x, y * lambda.exp()],
        5 => vec![x + lambda * y, y],
        6 => vec![x, y + lambda * x],
        7 => return projective(x),
        8 => return projective(y),
        i => {
            return Err(Error::OutOfRange {
                what: "sl(3) flow index",
                value: i as i64,
                range: "1..=8",
            })
        }
    };
    Ok(StateVector::from_vec(out))
}

/// SL(2) acting on the line by homographies.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Sl2Action;

impl GroupAction for Sl2Action {
    fn group_dim(&self) -> usize {
        2
    }

    fn manifold_dim(&self) -> usize {
        1
    }

    fn apply(&self, y: &SquareMatrix, x: &StateVector) -> Result<StateVector> {
        self.check_dims(y, x)?;
        Ok(StateVector::scalar(sl2_action(y, x[0])?))
    }
}

/// SL(3) on the plane through the second-kind chart: the coordinates of `Y`
/// are extracted and the composed flows are written as one homography.
///
/// The fundamental fields of the generators are the eight fields above, and
/// the identity law holds. The composition law does not: the generators
/// close with the same structure constants as the fields, while a left
/// action needs the opposite sign. [`SlnAction`] with `n = 3` is the
/// projective action that does compose.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Sl3ChartAction;

impl Sl3ChartAction {
    /// Homography coefficients `a_ij` (row-major, 3×3) from `λ`.
    pub fn coefficients(l: &LambdaCoords) -> [[f64; 3]; 3] {
        let v = l.values();
        let (l1, l2, l5, l6, l7, l8) = (v[0], v[1], v[4], v[5], v[6], v[7]);
        let e3 = v[2].exp();
        let e4 = v[3].exp();
        [
            [1.0, -l7, -l8],
            [l1, (1.0 + l5 * l6) * e3 - l1 * l7, l5 * e3 - l1 * l8],
            [l2, l6 * e4 - l2 * l7, e4 - l2 * l8],
        ]
    }
}

impl GroupAction for Sl3ChartAction {
    fn group_dim(&self) -> usize {
        3
    }

    fn manifold_dim(&self) -> usize {
        2
    }

    fn apply(&self, y: &SquareMatrix, p: &StateVector) -> Result<StateVector> {
        self.check_dims(y, p)?;
        let a = Self::coefficients(&sl3_lambda_from_matrix(y)?);
        let (x0, y0) = (p[0], p[1]);
        let den = checked_denominator(a[0][0] + a[0][1] * x0 + a[0][2] * y0)?;
        Ok(StateVector::from_vec(vec![
            (a[1][0] + a[1][1] * x0 + a[1][2] * y0) / den,
            (a[2][0] + a[2][1] * x0 + a[2][2] * y0) / den,
        ]))
    }
}

/// SL(n) on `R^{n-1}`: `x̄ = (1, p)`, `x_i = <a_i, x̄> / <a_0, x̄>` with `a_i`
/// the rows of `Y`.
///
/// For `n = 2` this is the SL(2) homography after swapping both rows and
/// columns: `sl2_action(Y, x) = sln_action(J Y J, x)` with `J = antidiag(1, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SlnAction {
    n: usize,
}

impl SlnAction {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::OutOfRange {
                what: "SL(n) size",
                value: n as i64,
                range: ">= 2",
            });
        }
        Ok(SlnAction { n })
    }
}

impl GroupAction for SlnAction {
    fn group_dim(&self) -> usize {
        self.n
    }

    fn manifold_dim(&self) -> usize {
        self.n - 1
    }

    fn apply(&self, y: &SquareMatrix, p: &StateVector) -> Result<StateVector> {
        self.check_dims(y, p)?;
        let mut xbar = Vec::with_capacity(self.n);
        xbar.push(1.0);
        xbar.extend_from_slice(p.as_slice());
        let img = y.matvec(&xbar);
        let den = checked_denominator(img[0])?;
        Ok(StateVector::from_vec(img[1..].iter().map(|v| v / den).collect()))
    }
}

pub fn sln_action(y: &SquareMatrix, p: &StateVector) -> Result<StateVector> {
    SlnAction::new(y.rows())?.apply(y, p)
}

/// SL(2n) acting on `n×n` matrices (stored row-major in a state vector):
/// `P ↦ (Y21 + Y22 P)(Y11 + Y12 P)⁻¹`. Generalizes the projective action to
/// the Lagrangian-graph chart, which carries matrix Riccati flows.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MatrixRiccatiAction {
    n: usize,
}

impl MatrixRiccatiAction {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::OutOfRange {
                what: "Riccati block size",
                value: 0,
                range: ">= 1",
            });
        }
        Ok(MatrixRiccatiAction { n })
    }

    pub fn block_size(&self) -> usize {
        self.n
    }
}

impl GroupAction for MatrixRiccatiAction {
    fn group_dim(&self) -> usize {
        2 * self.n
    }

    fn manifold_dim(&self) -> usize {
        self.n * self.n
    }

    fn apply(&self, y: &SquareMatrix, p: &StateVector) -> Result<StateVector> {
        self.check_dims(y, p)?;
        let n = self.n;
        let pm = Matrix::from_row_major(n, n, p.as_slice().to_vec())?;
        let top = y.block(0, 0, n, n).add_scaled(1.0, &y.block(0, n, n, n).matmul(&pm));
        let bottom = y.block(n, 0, n, n).add_scaled(1.0, &y.block(n, n, n, n).matmul(&pm));
        let lu = top.lu();
        let det = lu.det();
        if lu.is_singular() || det.abs() <= CHART_THRESHOLD {
            return Err(Error::SingularAction { denominator: det });
        }
        // bottom · top⁻¹ = (top⁻ᵀ bottomᵀ)ᵀ
        let out = top.transpose().lu().solve(&bottom.transpose())?.transpose();
        Ok(StateVector::from_vec(out.into_vec()))
    }
}

/// Fundamental vector field of `m` at `x`, by a central difference of the
/// action along `exp(±s m)`.
pub fn fundamental_field(action: &dyn GroupAction, m: &SquareMatrix, x: &StateVector) -> Result<StateVector> {
    let plus = action.apply(&expm(&m.scale(FIELD_STEP)), x)?;
    let minus = action.apply(&expm(&m.scale(-FIELD_STEP)), x)?;
    Ok(plus.add_scaled(-1.0, &minus).scale(0.5 / FIELD_STEP))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::sln_basis;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn sv(v: &[f64]) -> StateVector {
        StateVector::new(v.to_vec()).unwrap()
    }

    /// `expm` of a random combination of `basis` with coefficients in `±scale`.
    fn near_identity(basis: &[SquareMatrix], coeffs: &[f64], scale: f64) -> SquareMatrix {
        let n = basis[0].rows();
        let a = basis
            .iter()
            .zip(coeffs)
            .fold(Matrix::zeros(n, n), |acc, (m, c)| acc.add_scaled(scale * c, m));
        expm(&a)
    }

    #[test]
    fn sl2_action_examples() {
        assert_eq!(sl2_action(&Matrix::identity(2), 0.37).unwrap(), 0.37);
        assert_eq!(sl2_action(&Matrix::from_literal(&[[2.0, 0.0], [0.0, 0.5]]), 1.0).unwrap(), 4.0);
        for &t in &[0.1, 0.4, 0.7] {
            let y = Matrix::from_literal(&[[t + 1.0, t], [-t, 1.0 - t]]);
            let x0 = 0.2;
            let exact = (t * x0 + x0 + t) / (1.0 - t - t * x0);
            assert_abs_diff_eq!(sl2_action(&y, x0).unwrap(), exact, epsilon = 1e-14);
        }
        let pole = Matrix::from_literal(&[[1.0, 0.0], [-1.0, 1.0]]);
        assert!(matches!(sl2_action(&pole, 1.0), Err(Error::SingularAction { .. })));
    }

    #[test]
    fn sl2_lambda_examples() {
        assert_eq!(sl2_lambda_from_matrix(&Matrix::identity(2)).unwrap().values(), &[0.0, 0.0, 0.0]);
        let y = Matrix::from_literal(&[[1.5, 0.5], [-0.5, 0.5]]);
        let l = sl2_lambda_from_matrix(&y).unwrap();
        assert_abs_diff_eq!(l[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(l[1], -2.0 * 0.5f64.ln(), epsilon = 1e-15);
        assert_abs_diff_eq!(l[2], 1.0, epsilon = 1e-15);
        assert!(sl2_matrix_from_lambda(&l).distance(&y) < 1e-12);
        let outside = Matrix::from_literal(&[[-1.0, 0.0], [0.0, -1.0]]);
        assert!(matches!(sl2_lambda_from_matrix(&outside), Err(Error::OutsideChart(_))));
    }

    #[test]
    fn sl2_flow_examples() {
        assert_eq!(sl2_flow(0, 0.0, 0.3).unwrap(), 0.3);
        assert_eq!(sl2_flow(2, 1.0, 0.5).unwrap(), 1.0);
        assert!(matches!(sl2_flow(2, 1.0, 1.0), Err(Error::FlowPole(_))));
        assert!(matches!(sl2_flow(3, 1.0, 1.0), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn sl2_action_is_composition_of_flows() {
        let basis = sl2_basis();
        for (i, &x0) in [-0.4, 0.1, 0.8].iter().enumerate() {
            let y = near_identity(basis.generators(), &[0.3, -0.5 + i as f64 * 0.2, 0.4], 1.0);
            let l = sl2_lambda_from_matrix(&y).unwrap();
            let via_flows = sl2_flow(0, l[0], sl2_flow(1, l[1], sl2_flow(2, l[2], x0).unwrap()).unwrap()).unwrap();
            assert_abs_diff_eq!(sl2_action(&y, x0).unwrap(), via_flows, epsilon = 1e-12);
        }
    }

    #[test]
    fn sl3_flow_examples() {
        let p = sv(&[0.3, -0.7]);
        assert_eq!(sl3_flow(3, 0.2, &p).unwrap(), sv(&[0.3 * 0.2f64.exp(), -0.7]));
        assert_eq!(sl3_flow(7, 0.5, &sv(&[1.0, 2.0])).unwrap(), sv(&[2.0, 4.0]));
        assert_eq!(sl3_flow(5, 0.9, &sv(&[1.3, 0.0])).unwrap(), sv(&[1.3, 0.0]));
        assert!(matches!(sl3_flow(8, 0.5, &sv(&[0.0, 2.0])), Err(Error::FlowPole(_))));
        assert!(sl3_flow(0, 0.5, &p).is_err());
        assert!(sl3_flow(9, 0.5, &p).is_err());
    }

    #[test]
    fn sl3_lambda_examples() {
        let l = sl3_lambda_from_matrix(&Matrix::identity(3)).unwrap();
        assert!(l.values().iter().all(|v| v.abs() < 1e-15));
        let basis = sl3_basis();
        let l = sl3_lambda_from_matrix(&expm(&basis.generator(5).scale(0.1))).unwrap();
        for (i, v) in l.values().iter().enumerate() {
            let expected = if i == 5 { 0.1 } else { 0.0 };
            assert_abs_diff_eq!(*v, expected, epsilon = 1e-12);
        }
        let outside = Matrix::diag(&[-1.0, -1.0, 1.0]);
        assert!(matches!(sl3_lambda_from_matrix(&outside), Err(Error::OutsideChart(_))));
    }

    #[test]
    fn sl3_action_identity_and_flow_consistency() {
        let p = sv(&[0.3, -0.2]);
        assert!(Sl3ChartAction.apply(&Matrix::identity(3), &p).unwrap().distance(&p) < 1e-12);
        let basis = sl3_basis();
        for (k, m) in basis.generators().iter().enumerate() {
            for &lam in &[-0.3, 0.05, 0.4] {
                let via_action = Sl3ChartAction.apply(&expm(&m.scale(lam)), &p).unwrap();
                let via_flow = sl3_flow(k + 1, lam, &p).unwrap();
                assert!(via_action.distance(&via_flow) < 1e-9, "generator {k}, λ={lam}");
            }
        }
    }

    fn sl3_fields(x: f64, y: f64) -> [[f64; 2]; 8] {
        [[1.0, 0.0], [0.0, 1.0], [x, 0.0], [0.0, y], [y, 0.0], [0.0, x], [x * x, x * y], [x * y, y * y]]
    }

    #[test]
    fn fundamental_fields_reproduce_the_vector_fields() {
        let b2 = sl2_basis();
        for &x in &[-0.6, 0.2, 0.9] {
            let p = sv(&[x]);
            let f: Vec<f64> = (0..3).map(|a| fundamental_field(&Sl2Action, b2.generator(a), &p).unwrap()[0]).collect();
            assert_abs_diff_eq!(f[0], 1.0, epsilon = 1e-6);
            assert_abs_diff_eq!(f[1], x, epsilon = 1e-6);
            assert_abs_diff_eq!(f[2], x * x, epsilon = 1e-6);
        }
        let b3 = sl3_basis();
        for &(x, y) in &[(0.3, -0.2), (-0.5, 0.4), (0.1, 0.7)] {
            let p = sv(&[x, y]);
            for (k, expected) in sl3_fields(x, y).iter().enumerate() {
                let f = fundamental_field(&Sl3ChartAction, b3.generator(k), &p).unwrap();
                assert_abs_diff_eq!(f[0], expected[0], epsilon = 1e-6);
                assert_abs_diff_eq!(f[1], expected[1], epsilon = 1e-6);
            }
        }
    }

    #[test]
    fn sln_reduces_to_sl2_with_row_column_swap() {
        let j = Matrix::from_literal(&[[0.0, 1.0], [1.0, 0.0]]);
        let basis = sl2_basis();
        for seed in 0..5 {
            let c = [0.3 - 0.1 * seed as f64, 0.2 * seed as f64 - 0.3, 0.25];
            let y = near_identity(basis.generators(), &c, 1.0);
            let x = 0.1 * seed as f64 - 0.2;
            let a = sl2_action(&y, x).unwrap();
            let b = sln_action(&j.matmul(&y).matmul(&j), &sv(&[x])).unwrap()[0];
            assert_abs_diff_eq!(a, b, epsilon = 1e-14);
        }
    }

    #[test]
    fn sln_fundamental_fields_of_sl3_basis_are_projective() {
        // E_10 moves x by 1, E_01 gives -x(x, y), i.e. -(x²∂x + xy∂y)
        let a = SlnAction::new(3).unwrap();
        let p = sv(&[0.3, -0.2]);
        let f = fundamental_field(&a, &Matrix::unit(3, 1, 0), &p).unwrap();
        assert!(f.distance(&sv(&[1.0, 0.0])) < 1e-8);
        let f = fundamental_field(&a, &Matrix::unit(3, 0, 1), &p).unwrap();
        assert!(f.distance(&sv(&[-0.09, 0.06])) < 1e-8);
    }

    #[test]
    fn riccati_block_action_with_n1_is_sln2() {
        let a = MatrixRiccatiAction::new(1).unwrap();
        let y = near_identity(sl2_basis().generators(), &[0.4, -0.3, 0.2], 1.0);
        let p = sv(&[0.35]);
        let lhs = a.apply(&y, &p).unwrap();
        let rhs = sln_action(&y, &p).unwrap();
        assert!(lhs.distance(&rhs) < 1e-14);
    }

    #[test]
    fn dimension_errors() {
        assert!(matches!(
            Sl2Action.apply(&Matrix::identity(3), &sv(&[0.0])),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(Sl3ChartAction.apply(&Matrix::identity(3), &sv(&[0.0])).is_err());
        assert!(SlnAction::new(1).is_err());
        assert!(MatrixRiccatiAction::new(0).is_err());
    }

    fn composition_error(action: &dyn GroupAction, basis: &[SquareMatrix], cg: &[f64], ch: &[f64], p: &StateVector) -> f64 {
        let g = near_identity(basis, cg, 1.0);
        let h = near_identity(basis, ch, 1.0);
        let lhs = action.apply(&g, &action.apply(&h, p).unwrap()).unwrap();
        let rhs = action.apply(&g.matmul(&h), p).unwrap();
        lhs.distance(&rhs)
    }

    fn coeffs(r: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(-0.2f64..0.2, r)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn sl2_chart_round_trip(l in coeffs(3)) {
            let l: Vec<f64> = l.iter().map(|v| v * 2.5).collect();
            let y = sl2_matrix_from_lambda(&LambdaCoords::new(l.clone()).unwrap());
            let back = sl2_lambda_from_matrix(&y).unwrap();
            for (a, b) in back.values().iter().zip(&l) {
                prop_assert!((a - b).abs() < 1e-10);
            }
            prop_assert!(sl2_matrix_from_lambda(&back).distance(&y) < 1e-10);
        }

        #[test]
        fn sl3_chart_round_trip(l in coeffs(8)) {
            let l: Vec<f64> = l.iter().map(|v| v * 2.5).collect();
            let y = sl3_matrix_from_lambda(&LambdaCoords::new(l.clone()).unwrap());
            let back = sl3_lambda_from_matrix(&y).unwrap();
            for (a, b) in back.values().iter().zip(&l) {
                prop_assert!((a - b).abs() < 1e-9);
            }
        }

        #[test]
        fn sl2_action_laws(cg in coeffs(3), ch in coeffs(3), x in -1.0f64..1.0) {
            let p = StateVector::scalar(x);
            prop_assert!(Sl2Action.apply(&Matrix::identity(2), &p).unwrap().distance(&p) < 1e-12);
            prop_assert!(composition_error(&Sl2Action, sl2_basis().generators(), &cg, &ch, &p) < 1e-9);
        }

        #[test]
        fn sln_action_laws(cg in coeffs(15), ch in coeffs(15), p in prop::collection::vec(-1.0f64..1.0, 3)) {
            let basis = sln_basis(4).unwrap();
            let a = SlnAction::new(4).unwrap();
            let p = StateVector::from_vec(p);
            prop_assert!(a.apply(&Matrix::identity(4), &p).unwrap().distance(&p) < 1e-12);
            prop_assert!(composition_error(&a, basis.generators(), &cg, &ch, &p) < 1e-9);
        }

        #[test]
        fn riccati_block_action_laws(cg in coeffs(15), ch in coeffs(15), p in prop::collection::vec(-0.5f64..0.5, 4)) {
            let basis = sln_basis(4).unwrap();
            let a = MatrixRiccatiAction::new(2).unwrap();
            let p = StateVector::from_vec(p);
            prop_assert!(a.apply(&Matrix::identity(4), &p).unwrap().distance(&p) < 1e-12);
            prop_assert!(composition_error(&a, basis.generators(), &cg, &ch, &p) < 1e-9);
        }
    }
}

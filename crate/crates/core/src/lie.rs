//! Matrix Lie-algebra bases, Bernoulli numbers and the truncated `dexp⁻¹`.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::matkit::{commutator, Matrix, SquareMatrix};

/// Largest index served by [`bernoulli`].
pub const MAX_BERNOULLI: usize = 20;
/// Largest truncation order accepted by [`dexp_inv`].
pub const MAX_DEXP_ORDER: usize = 10;

/// Ordered basis `M_1..M_r` of a matrix Lie algebra together with the
/// structure constants of the vector-field algebra it integrates.
///
/// `structure_constants[a][b][g]` is `c_ab^g` in `[X_a, X_b] = Σ_g c_ab^g X_g`.
/// For a basis realizing a left action the matrices satisfy
/// `[M_a, M_b] = -Σ_g c_ab^g M_g`.
#[derive(Clone, Debug)]
pub struct LieAlgebraBasis {
    name: String,
    n: usize,
    generators: Vec<SquareMatrix>,
    structure_constants: Vec<Vec<Vec<f64>>>,
    traceless: bool,
}

impl LieAlgebraBasis {
    pub fn new(
        name: impl Into<String>,
        generators: Vec<SquareMatrix>,
        structure_constants: Vec<Vec<Vec<f64>>>,
    ) -> Result<Self> {
        let r = generators.len();
        if r == 0 {
            return Err(Error::InvalidInput("empty basis".into()));
        }
        let n = generators[0].rows();
        if generators.iter().any(|g| !g.is_square() || g.rows() != n) {
            return Err(Error::InvalidInput(
                "generators must be square matrices of one size".into(),
            ));
        }
        let shape_ok = structure_constants.len() == r
            && structure_constants
                .iter()
                .all(|row| row.len() == r && row.iter().all(|c| c.len() == r));
        if !shape_ok {
            return Err(Error::InvalidInput("structure constants must be r x r x r".into()));
        }
        let name = name.into();
        let traceless = name.starts_with("sl(");
        let basis = LieAlgebraBasis {
            name,
            n,
            generators,
            structure_constants,
            traceless,
        };
        if traceless && basis.generators.iter().any(|g| g.trace().abs() > 1e-14) {
            return Err(Error::InvalidInput(format!(
                "{} generators must be traceless",
                basis.name
            )));
        }
        if basis.gram_determinant().abs() < 1e-12 {
            return Err(Error::InvalidInput("generators are linearly dependent".into()));
        }
        Ok(basis)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Dimension `r` of the algebra.
    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    /// Size `n` of the matrices.
    pub fn matrix_size(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[SquareMatrix] {
        &self.generators
    }

    pub fn generator(&self, alpha: usize) -> &SquareMatrix {
        &self.generators[alpha]
    }

    pub fn structure_constants(&self) -> &[Vec<Vec<f64>>] {
        &self.structure_constants
    }

    pub fn is_traceless(&self) -> bool {
        self.traceless
    }

    /// `Σ_a coeffs[a] M_a`.
    pub fn combine(&self, coeffs: &[f64]) -> SquareMatrix {
        assert_eq!(coeffs.len(), self.dim(), "coefficient count must match basis size");
        let mut out = Matrix::zeros(self.n, self.n);
        for (c, m) in coeffs.iter().zip(&self.generators) {
            if *c != 0.0 {
                out = out.add_scaled(*c, m);
            }
        }
        out
    }

    /// Gram matrix of the vectorized generators under the Frobenius product.
    pub fn gram(&self) -> Matrix {
        let r = self.dim();
        let mut g = Matrix::zeros(r, r);
        for a in 0..r {
            for b in 0..r {
                g[(a, b)] = frob_dot(&self.generators[a], &self.generators[b]);
            }
        }
        g
    }

    pub fn gram_determinant(&self) -> f64 {
        self.gram().det()
    }

    /// Least-squares coordinates of `m` in this basis and the residual norm
    /// `||m - Σ c_a M_a||_F`.
    pub fn project(&self, m: &SquareMatrix) -> (Vec<f64>, f64) {
        let rhs: Vec<f64> = self.generators.iter().map(|g| frob_dot(g, m)).collect();
        let coords = self
            .gram()
            .lu()
            .solve_vec(&rhs)
            .expect("basis Gram matrix is nonsingular by construction");
        let residual = m.distance(&self.combine(&coords));
        (coords, residual)
    }

    /// Structure constants of the matrix algebra itself:
    /// `[M_a, M_b] = Σ_g d_ab^g M_g`.
    pub fn matrix_structure_constants(&self) -> Vec<Vec<Vec<f64>>> {
        matrix_structure_constants(&self.generators, self)
    }

    /// Largest residual of the bracket closure `[M_a, M_b] ∈ span{M_g}`.
    pub fn closure_residual(&self) -> f64 {
        let r = self.dim();
        let mut worst: f64 = 0.0;
        for a in 0..r {
            for b in 0..r {
                let (_, res) = self.project(&commutator(&self.generators[a], &self.generators[b]));
                worst = worst.max(res);
            }
        }
        worst
    }

    /// `max_ab || [M_a, M_b] + Σ_g c_ab^g M_g ||_F`; zero when the matrix
    /// basis is anti-isomorphic to the vector-field algebra.
    pub fn anti_isomorphism_residual(&self) -> f64 {
        self.sign_residual(-1.0)
    }

    /// `max_ab || [M_a, M_b] - Σ_g c_ab^g M_g ||_F`; zero when the matrix
    /// basis is isomorphic (same sign) to the vector-field algebra.
    pub fn isomorphism_residual(&self) -> f64 {
        self.sign_residual(1.0)
    }

    fn sign_residual(&self, sign: f64) -> f64 {
        let r = self.dim();
        let mut worst: f64 = 0.0;
        for a in 0..r {
            for b in 0..r {
                let lhs = commutator(&self.generators[a], &self.generators[b]);
                let rhs = self.combine(&self.structure_constants[a][b]).scale(sign);
                worst = worst.max(lhs.distance(&rhs));
            }
        }
        worst
    }
}

fn frob_dot(a: &Matrix, b: &Matrix) -> f64 {
    a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| x * y).sum()
}

fn matrix_structure_constants(
    generators: &[SquareMatrix],
    basis: &LieAlgebraBasis,
) -> Vec<Vec<Vec<f64>>> {
    let r = generators.len();
    (0..r)
        .map(|a| {
            (0..r)
                .map(|b| basis.project(&commutator(&generators[a], &generators[b])).0)
                .collect()
        })
        .collect()
}

/// One nonzero bracket `(a, b, [(g, c_ab^g), ...])` with `a < b`.
type Bracket<'a> = (usize, usize, &'a [(usize, f64)]);

/// Fills an antisymmetric `r x r x r` table from the listed nonzero brackets.
fn table(r: usize, brackets: &[Bracket]) -> Vec<Vec<Vec<f64>>> {
    let mut c = vec![vec![vec![0.0; r]; r]; r];
    for &(a, b, terms) in brackets {
        for &(g, v) in terms {
            c[a][b][g] = v;
            c[b][a][g] = -v;
        }
    }
    c
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Exact rational `num/den` with `den > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Ratio {
    num: i128,
    den: i128,
}

impl Ratio {
    fn new(num: i128, den: i128) -> Ratio {
        let g = gcd(num, den).max(1);
        let s = if den < 0 { -1 } else { 1 };
        Ratio {
            num: s * num / g,
            den: s * den / g,
        }
    }

    fn add(self, o: Ratio) -> Ratio {
        let g = gcd(self.den, o.den);
        let l = self.den / g * o.den;
        Ratio::new(self.num * (l / self.den) + o.num * (l / o.den), l)
    }

    fn mul_int(self, k: i128) -> Ratio {
        Ratio::new(self.num * k, self.den)
    }
}

fn binomial(n: i128, k: i128) -> i128 {
    let mut c = 1i128;
    for i in 0..k {
        c = c * (n - i) / (i + 1);
    }
    c
}

fn bernoulli_table() -> &'static [f64; MAX_BERNOULLI + 1] {
    static TABLE: OnceLock<[f64; MAX_BERNOULLI + 1]> = OnceLock::new();
    TABLE.get_or_init(|| {
        // Σ_{k=0}^{m} C(m+1, k) B_k = 0, B_0 = 1  (gives B_1 = -1/2)
        let mut exact = vec![Ratio::new(1, 1)];
        for m in 1..=MAX_BERNOULLI as i128 {
            let s = exact
                .iter()
                .enumerate()
                .fold(Ratio::new(0, 1), |acc, (k, b)| acc.add(b.mul_int(binomial(m + 1, k as i128))));
            exact.push(Ratio::new(-s.num, s.den * (m + 1)));
        }
        let mut out = [0.0; MAX_BERNOULLI + 1];
        for (o, r) in out.iter_mut().zip(exact) {
            *o = r.num as f64 / r.den as f64;
        }
        out
    })
}

/// The `j`-th Bernoulli number with the `B_1 = -1/2` convention.
pub fn bernoulli(j: usize) -> Result<f64> {
    if j > MAX_BERNOULLI {
        return Err(Error::OutOfRange {
            what: "Bernoulli index",
            value: j as i64,
            range: "0..=20",
        });
    }
    Ok(bernoulli_table()[j])
}

/// Truncated inverse differential of the exponential,
/// `Σ_{k=0}^{order} (B_k / k!) ad_Ω^k(H)`, by iterated commutators.
///
/// # Panics
/// On mismatched dimensions or `order > 10`.
pub fn dexp_inv(omega: &SquareMatrix, h: &SquareMatrix, order: usize) -> SquareMatrix {
    assert!(order <= MAX_DEXP_ORDER, "dexp_inv truncation order must be <= 10");
    assert!(
        omega.is_square() && h.is_square() && omega.rows() == h.rows(),
        "dexp_inv needs square matrices of equal size"
    );
    let table = bernoulli_table();
    let mut out = h.clone();
    let mut ad = h.clone();
    let mut factorial = 1.0;
    for (k, bk) in table.iter().enumerate().take(order + 1).skip(1) {
        ad = commutator(omega, &ad);
        factorial *= k as f64;
        if *bk != 0.0 {
            out = out.add_scaled(bk / factorial, &ad);
        }
    }
    out
}

/// Basis `{M_0, M_1, M_2}` of `sl(2, R)` realizing the Riccati vector fields
/// `∂x, x∂x, x²∂x`.
pub fn sl2_basis() -> LieAlgebraBasis {
    let m0 = Matrix::from_literal(&[[0.0, 1.0], [0.0, 0.0]]);
    let m1 = Matrix::from_literal(&[[0.5, 0.0], [0.0, -0.5]]);
    let m2 = Matrix::from_literal(&[[0.0, 0.0], [-1.0, 0.0]]);
    let c = table(
        3,
        &[
            (0, 1, &[(0, 1.0)]),
            (0, 2, &[(1, 2.0)]),
            (1, 2, &[(2, 1.0)]),
        ],
    );
    LieAlgebraBasis::new("sl(2)", vec![m0, m1, m2], c).expect("sl(2) basis is valid")
}

/// The eight `sl(3, R)` matrices used for the planar matrix Riccati system,
/// stored at indices `0..8` for `M_1..M_8`, with the vector-field brackets of
/// `X_1 = ∂x, X_2 = ∂y, X_3 = x∂x, X_4 = y∂y, X_5 = y∂x, X_6 = x∂y,
/// X_7 = x(x∂x + y∂y), X_8 = y(x∂x + y∂y)`.
///
/// These matrices reproduce the vector-field brackets with the *same* sign
/// (`isomorphism_residual() == 0`), not the opposite one; see
/// [`crate::actions::Sl3ChartAction`] for the consequence.
pub fn sl3_basis() -> LieAlgebraBasis {
    let e = |i, j| Matrix::unit(3, i, j);
    let gens = vec![
        e(2, 0).scale(-1.0),
        e(2, 1).scale(-1.0),
        Matrix::diag(&[2.0 / 3.0, -1.0 / 3.0, -1.0 / 3.0]),
        Matrix::diag(&[-1.0 / 3.0, 2.0 / 3.0, -1.0 / 3.0]),
        e(1, 0),
        e(0, 1),
        e(0, 2),
        e(1, 2),
    ];
    // zero-based: X_{k+1} lives at index k
    let c = table(
        8,
        &[
            (0, 2, &[(0, 1.0)]),
            (0, 5, &[(1, 1.0)]),
            (0, 6, &[(2, 2.0), (3, 1.0)]),
            (0, 7, &[(4, 1.0)]),
            (1, 3, &[(1, 1.0)]),
            (1, 4, &[(0, 1.0)]),
            (1, 6, &[(5, 1.0)]),
            (1, 7, &[(2, 1.0), (3, 2.0)]),
            (2, 4, &[(4, -1.0)]),
            (2, 5, &[(5, 1.0)]),
            (2, 6, &[(6, 1.0)]),
            (3, 4, &[(4, 1.0)]),
            (3, 5, &[(5, -1.0)]),
            (3, 7, &[(7, 1.0)]),
            (4, 5, &[(3, 1.0), (2, -1.0)]),
            (4, 6, &[(7, 1.0)]),
            (5, 7, &[(6, 1.0)]),
        ],
    );
    LieAlgebraBasis::new("sl(3)", gens, c).expect("sl(3) basis is valid")
}

/// Basis of `sl(n, R)`: the `n² - n` off-diagonal units `E_ij` (row-major
/// order) followed by the `n - 1` traceless diagonals `E_00 - E_kk`.
///
/// Structure constants are computed from the matrix brackets and stored with
/// the opposite sign, so the anti-isomorphism holds by construction.
pub fn sln_basis(n: usize) -> Result<LieAlgebraBasis> {
    if !(2..=8).contains(&n) {
        return Err(Error::OutOfRange {
            what: "sl(n) size",
            value: n as i64,
            range: "2..=8",
        });
    }
    let mut gens = Vec::with_capacity(n * n - 1);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                gens.push(Matrix::unit(n, i, j));
            }
        }
    }
    for k in 1..n {
        let mut d = Matrix::unit(n, 0, 0);
        d[(k, k)] = -1.0;
        gens.push(d);
    }
    let r = gens.len();
    let zero = vec![vec![vec![0.0; r]; r]; r];
    let name = format!("sl({n})");
    let provisional = LieAlgebraBasis::new(name.clone(), gens, zero)?;
    let d = provisional.matrix_structure_constants();
    let c = d
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|v| v.into_iter().map(|x| if x == 0.0 { 0.0 } else { -x }).collect())
                .collect()
        })
        .collect();
    LieAlgebraBasis::new(name, provisional.generators, c)
}

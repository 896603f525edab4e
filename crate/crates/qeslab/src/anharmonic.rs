//! The coupled anharmonic-oscillator family.
//!
//! Starting from `H(y) = −d²/dy² · I + M₃(y²)` with `M₃` polynomial of degree
//! at most three, a gauge transformation by `exp(−(p₂/2)y⁴ − p₁y²)` and the
//! change of variable `x = y²` produce an operator with polynomial
//! coefficients. Written in terms of the sl(2) generators it reads
//!
//! ```text
//! Ĥ(x) = −(4x d²/dx² + 2 d/dx)·I + 8p₂Q₊ + 8p₁Q₀ + 8p₂(W₃ + B)
//! ```
//!
//! with `B = cJ₊` and `W₃ = −c(J₊+J₋)`. The family preserves a dressed
//! polynomial tower only for 2×2 matrices; this module builds the operator,
//! recovers the physical potential, certifies the N=2 family and the N≥3
//! obstruction, extracts algebraic spectra, and reconstructs physical-space
//! eigenfunctions.

use thiserror::Error;

use crate::algebra::{charpoly, DiffOp, MatDiffOp, Poly, Scalar, ScalarMat};
use crate::sl2::{build_p, build_q, build_rep, RepParams};
use crate::spaces::{check_invariance, restriction_matrix, DressedSpace, RestrictionMatrix};

/// Parameters of the family: matrix size, gauge frequencies `p₁`, `p₂`,
/// coupling `c`, and the tower parameter `p`.
#[derive(Clone, Debug)]
pub struct AnhParams {
    pub n: usize,
    pub p1: Scalar,
    pub p2: Scalar,
    pub c: Scalar,
    pub p: i64,
}

#[derive(Debug, Error)]
pub enum AnhError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("the QES anharmonic family requires N = 2, got N = {0}")]
    NotTwoByTwo(usize),
    #[error("physical potential is not symmetric for N = {0} in this normalization")]
    NotSymmetric(usize),
}

impl AnhParams {
    pub fn new(n: usize, p1: Scalar, p2: Scalar, c: Scalar, p: i64) -> Result<Self, AnhError> {
        if p2.signum() <= 0 {
            return Err(AnhError::InvalidParams(
                "p2 must be > 0 for a normalizable gauge factor".into(),
            ));
        }
        // validate the representation parameters early
        RepParams::uniform(n, p, c.clone()).map_err(AnhError::InvalidParams)?;
        Ok(AnhParams { n, p1, p2, c, p })
    }

    fn rep(&self) -> RepParams {
        RepParams::uniform(self.n, self.p, self.c.clone()).expect("validated on construction")
    }

    /// The dressed invariant space `V' = P·V(N,p)`.
    pub fn space(&self) -> DressedSpace {
        let rep = self.rep();
        DressedSpace::new(rep.tower(), build_p(&rep)).with_label("V'")
    }
}

/// A matrix of plain polynomials (no derivatives).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatPoly {
    pub n: usize,
    entries: Vec<Poly>,
}

impl MatPoly {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Poly) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        MatPoly { n, entries }
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.n + j]
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (i..self.n).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.entries.iter().filter_map(|p| p.degree()).max()
    }

    /// Evaluates entrywise at a float argument.
    pub fn eval_f64(&self, x: f64) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j).eval_f64(x)).collect())
            .collect()
    }

    /// As a matrix of multiplication operators.
    pub fn as_matop(&self) -> MatDiffOp {
        MatDiffOp::from_fn(self.n, self.n, |i, j| DiffOp::mul_by(self.get(i, j).clone()))
    }
}

fn const_mat(m: &ScalarMat) -> MatDiffOp {
    MatDiffOp::from_fn(m.rows(), m.cols(), |i, j| {
        DiffOp::mul_by(Poly::constant(m[(i, j)].clone()))
    })
}

/// `W₃ = −c(J₊ + J₋)`.
fn w3_matrix(n: usize, c: &Scalar) -> ScalarMat {
    let triple = build_rep(n);
    (&triple.j_plus + &triple.j_minus).scale(&-c)
}

/// The gauged operator
/// `Ĥ = −(4x d²/dx² + 2 d/dx)·I + 8p₂Q₊ + 8p₁Q₀ + 8p₂(W₃ + B)`.
pub fn build_gauged_operator(params: &AnhParams) -> MatDiffOp {
    let rep = params.rep();
    let (q_plus, q_zero, _, b) = build_q(&rep);
    let n = params.n;
    let eight = Scalar::from_int(8);

    let kinetic = {
        let mut op = DiffOp::term(Poly::monomial(Scalar::from_int(-4), 1), 2);
        op = &op + &DiffOp::ddx().scale(&Scalar::from_int(-2));
        MatDiffOp::scalar_op(n, &op)
    };
    let w3b = &w3_matrix(n, &params.c) + &b;

    let mut h = kinetic;
    h = &h + &q_plus.scale(&(&eight * &params.p2));
    h = &h + &q_zero.scale(&(&eight * &params.p1));
    h = &h + &const_mat(&w3b).scale(&(&eight * &params.p2));
    h
}

/// Recovers the physical potential matrix
/// `M₃(x) = (4p₂²x³ + 8p₁p₂x² + (4p₁²−6p₂)x − 2p₁)·I + 16p₂xA + 8p₁A + 8p₂W₃`
/// and re-derives the gauged operator from it as a built-in identity check.
///
/// Only `N ≤ 2` yields a symmetric matrix in the rational normalization of
/// the representation.
pub fn derive_physical_potential(params: &AnhParams) -> Result<MatPoly, AnhError> {
    let n = params.n;
    let rep = params.rep();
    let (_, _, a, _) = build_q(&rep);
    let w3 = w3_matrix(n, &params.c);

    let p1 = &params.p1;
    let p2 = &params.p2;
    let four = Scalar::from_int(4);
    let six = Scalar::from_int(6);
    let eight = Scalar::from_int(8);
    let sixteen = Scalar::from_int(16);

    // scalar cubic: 4p₂²x³ + 8p₁p₂x² + (4p₁²−6p₂)x − 2p₁
    let cubic = Poly::from_coeffs(vec![
        &Scalar::from_int(-2) * p1,
        &(&four * &(p1 * p1)) - &(&six * p2),
        &(&eight * p1) * p2,
        &four * &(p2 * p2),
    ]);

    let m3 = MatPoly::from_fn(n, |i, j| {
        let mut entry = if i == j { cubic.clone() } else { Poly::zero() };
        // 16p₂x·A + 8p₁·A + 8p₂·W₃
        if !a[(i, j)].is_zero() {
            entry = &entry + &Poly::monomial(&(&sixteen * p2) * &a[(i, j)], 1);
            entry = &entry + &Poly::constant(&(&eight * p1) * &a[(i, j)]);
        }
        if !w3[(i, j)].is_zero() {
            entry = &entry + &Poly::constant(&(&eight * p2) * &w3[(i, j)]);
        }
        entry
    });

    if !m3.is_symmetric() {
        return Err(AnhError::NotSymmetric(n));
    }
    if m3.max_degree().unwrap_or(0) > 3 {
        return Err(AnhError::InvalidParams(
            "internal error: potential degree exceeds three".into(),
        ));
    }

    // identity check: re-gauging M₃ must reproduce the sl(2) form exactly
    let regauged = {
        let kinetic = {
            let mut op = DiffOp::term(Poly::monomial(Scalar::from_int(-4), 1), 2);
            op = &op + &DiffOp::ddx().scale(&Scalar::from_int(-2));
            MatDiffOp::scalar_op(n, &op)
        };
        // +8(p₂x + p₁)x d/dx
        let drift = DiffOp::from_terms([(
            1,
            Poly::from_coeffs(vec![Scalar::zero(), &eight * p1, &eight * p2]),
        )]);
        let mut h = &kinetic + &MatDiffOp::scalar_op(n, &drift);
        h = &h - &MatDiffOp::scalar_op(n, &DiffOp::mul_by(cubic.clone()));
        h = &h + &m3.as_matop();
        h
    };
    assert_eq!(
        regauged,
        build_gauged_operator(params),
        "re-gauge identity check failed (implementation bug)"
    );

    Ok(m3)
}

/// Whether the *full* gauged operator (kinetic line included) preserves
/// `V' = P·V(N,p)`. True exactly when `N = 2`.
pub fn check_matrix_extension(params: &AnhParams) -> bool {
    assert!(params.n >= 2, "extension check needs N ≥ 2");
    let h = build_gauged_operator(params);
    check_invariance(&h, &params.space()).invariant
}

/// One algebraic eigenvalue with its (tower-coordinate) eigenvector.
#[derive(Clone, Debug, serde::Serialize)]
pub struct EigenPair {
    pub re: f64,
    pub im: f64,
    /// Coordinates in the tower basis (empty when the eigenvector was not
    /// recovered, e.g. for complex pairs).
    pub vector: Vec<f64>,
    pub space_label: String,
}

/// Eigenvalues of a restriction matrix, sorted by real part then imaginary
/// part.
#[derive(Clone, Debug, serde::Serialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<EigenPair>,
}

impl Spectrum {
    pub fn from_restriction(r: &RestrictionMatrix, label: &str) -> Spectrum {
        let m = r.to_f64();
        let eig = crate::numeric::eig_dense(&m).expect("restriction eigensolve converged");
        let mut eigenvalues: Vec<EigenPair> = eig
            .into_iter()
            .map(|(re, im, vector)| EigenPair {
                re,
                im,
                vector,
                space_label: label.to_string(),
            })
            .collect();
        eigenvalues.sort_by(|a, b| {
            (a.re, a.im)
                .partial_cmp(&(b.re, b.im))
                .expect("finite eigenvalues")
        });
        Spectrum { eigenvalues }
    }

    pub fn reals(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|e| e.re).collect()
    }
}

/// The algebraic spectrum of the N=2 anharmonic family: eigenvalues of the
/// restriction of the gauged operator to `V'`.
pub fn qes_spectrum_anharmonic(
    params: &AnhParams,
) -> Result<(RestrictionMatrix, Spectrum), AnhError> {
    if params.n != 2 {
        return Err(AnhError::NotTwoByTwo(params.n));
    }
    let h = build_gauged_operator(params);
    let space = params.space();
    let r = restriction_matrix(&h, &space);
    let spec = Spectrum::from_restriction(&r, "V'");
    Ok((r, spec))
}

/// Exact characteristic polynomial of the restriction matrix (sensible for
/// dim ≲ 12), lowest coefficient first.
pub fn exact_charpoly(r: &RestrictionMatrix) -> Poly {
    charpoly(r.matrix())
}

/// A sampler for the reconstructed physical eigenfunction
/// `ψ(y) = exp(−(p₂/2)y⁴ − p₁y²) · (P·v)(x)|_{x=y²}`.
pub struct Wavefunction {
    p1: f64,
    p2: f64,
    dressed: Vec<Poly>,
}

impl Wavefunction {
    /// Componentwise values at `y`.
    pub fn eval(&self, y: f64) -> Vec<f64> {
        let x = y * y;
        let gauge = (-(self.p2 / 2.0) * x * x - self.p1 * x).exp();
        self.dressed.iter().map(|p| gauge * p.eval_f64(x)).collect()
    }
}

/// Builds the physical-space eigenfunction sampler for a tower vector `v`.
pub fn reconstruct_wavefunction(params: &AnhParams, v: &[Poly]) -> Wavefunction {
    let space = params.space();
    assert_eq!(v.len(), space.tower.components(), "component count mismatch");
    let dressed = space.dress.apply_vec(v);
    Wavefunction {
        p1: params.p1.to_f64(),
        p2: params.p2.to_f64(),
        dressed,
    }
}

/// Converts a restriction-matrix eigenvector (float coordinates in the tower
/// basis) into a polynomial tower vector.
pub fn tower_vector_from_coords(space: &DressedSpace, coords: &[f64]) -> Vec<Poly> {
    let basis = space.tower.basis();
    assert_eq!(coords.len(), basis.len(), "coordinate count mismatch");
    let mut v = vec![Poly::zero(); space.tower.components()];
    for (&(comp, deg), &c) in basis.iter().zip(coords) {
        if c == 0.0 {
            continue;
        }
        // rational snap keeps the algebra exact downstream; 2^40 grid is far
        // below f64 noise for normalized eigenvectors
        let scaled = (c * (1u64 << 40) as f64).round() as i64;
        let coeff = Scalar::from_ratio(scaled, 1i64 << 40);
        v[comp] = &v[comp] + &Poly::monomial(coeff, deg);
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture() -> AnhParams {
        AnhParams::new(
            2,
            Scalar::zero(),
            Scalar::from_ratio(1, 2),
            Scalar::from_ratio(1, 4),
            4,
        )
        .unwrap()
    }

    #[test]
    fn n2_preserves_dressed_tower() {
        let h = build_gauged_operator(&fixture());
        assert!(check_invariance(&h, &fixture().space()).invariant);
    }

    #[test]
    fn obstruction_at_n3() {
        let params = AnhParams::new(
            3,
            Scalar::from_ratio(1, 3),
            Scalar::one(),
            Scalar::from_ratio(1, 2),
            6,
        )
        .unwrap();
        assert!(!check_matrix_extension(&params));
        assert!(check_matrix_extension(&fixture()));
    }

    #[test]
    fn scalar_potential_is_the_sextic_form() {
        // N=1, p1=0, p2=1/2: the gauge bookkeeping must reproduce Ĥ exactly
        let params =
            AnhParams::new(1, Scalar::zero(), Scalar::from_ratio(1, 2), Scalar::zero(), 4)
                .unwrap();
        let m3 = derive_physical_potential(&params).unwrap();
        // x³ coefficient is 4p₂² = 1
        assert_eq!(m3.get(0, 0).coeff(3), Scalar::one());
        assert_eq!(m3.max_degree(), Some(3));
    }

    #[test]
    fn decoupled_when_c_is_zero() {
        let params = AnhParams::new(2, Scalar::zero(), Scalar::one(), Scalar::zero(), 4).unwrap();
        let m3 = derive_physical_potential(&params).unwrap();
        assert!(m3.get(0, 1).is_zero() && m3.get(1, 0).is_zero());
    }

    #[test]
    fn off_diagonal_is_constant_coupling() {
        let params = fixture();
        let m3 = derive_physical_potential(&params).unwrap();
        // M₃ off-diagonal = −8p₂c(J₊+J₋): constant −8·(1/2)·(1/4) = −1
        assert_eq!(*m3.get(0, 1), Poly::constant(Scalar::from_int(-1)));
        assert_eq!(*m3.get(1, 0), Poly::constant(Scalar::from_int(-1)));
        assert!(m3.is_symmetric());
    }

    #[test]
    fn potential_rejected_for_n3() {
        let params = AnhParams::new(
            3,
            Scalar::zero(),
            Scalar::one(),
            Scalar::from_ratio(1, 2),
            6,
        )
        .unwrap();
        assert!(matches!(
            derive_physical_potential(&params),
            Err(AnhError::NotSymmetric(3))
        ));
    }

    #[test]
    fn wavefunction_gauge_only() {
        // N=1, p=0, v=1 → ψ(y) = exp(−(p₂/2)y⁴ − p₁y²)
        let params =
            AnhParams::new(1, Scalar::from_ratio(1, 3), Scalar::one(), Scalar::zero(), 0).unwrap();
        let psi = reconstruct_wavefunction(&params, &[Poly::one()]);
        for &y in &[0.0, 0.7, -1.3] {
            let x: f64 = y * y;
            let want = (-(0.5) * x * x - x / 3.0).exp();
            assert!((psi.eval(y)[0] - want).abs() < 1e-14);
        }
        // zero vector stays zero
        let zero = reconstruct_wavefunction(&params, &[Poly::zero()]);
        assert_eq!(zero.eval(0.9)[0], 0.0);
    }
}

//! The 3×3 family: couplings `V₁₂ = V₂₁ = θ₁·cn·dn`, `V₂₃ = V₃₂ = θ₂·cn·dn`,
//! `V₁₃ = V₃₁ = θ₃·cn²`, prefactor `diag(cn, dn, cn)`, constant unipotent
//! dress `[[1,α,β],[0,1,γ],[0,0,1]]`, towers `(P(n−2), P(n−1), P(n))`.
//!
//! The unknown constants `(a₁,a₂,a₃,b₁,b₂,b₃,θ₁,θ₂,θ₃)` enter the operator
//! linearly, so the invariance residuals form an exact linear system; it is
//! solvable only at `k² = 1`, where the operator is a matrix Pöschl–Teller
//! system on the line.

use serde::Serialize;

use crate::algebra::{solve_linear, MatDiffOp, Scalar, ScalarMat};
use crate::elliptic::PrefTag;
use crate::spaces::{check_invariance, dense_residuals, DressedSpace, Tower};

use super::{LameError, LameOperator, OffDiag};

/// Solved constants of the 3×3 family.
#[derive(Clone, Debug, Serialize)]
pub struct Lame3Constants {
    pub n: i64,
    pub alpha: Scalar,
    pub beta: Scalar,
    pub gamma: Scalar,
    pub a: [Scalar; 3],
    pub b: [Scalar; 3],
    pub theta: [Scalar; 3],
    pub k2: Scalar,
}

/// Outcome of the exact linear solve.
#[derive(Clone, Debug, Serialize)]
pub enum Lame3Outcome {
    Solved(Lame3Constants),
    /// The system admits no solution (expected whenever `k² ≠ 1`).
    Inconsistent {
        equations: usize,
        unknowns: usize,
        rank: usize,
    },
    /// Consistent but with remaining freedom (reported, not an error).
    Underdetermined {
        particular: Vec<Scalar>,
        nullity: usize,
    },
}

/// Unknown layout: `(a₁,a₂,a₃,b₁,b₂,b₃,θ₁,θ₂,θ₃)`.
fn operator_for(u: &[Scalar], k2: &Scalar) -> LameOperator {
    LameOperator {
        n: 3,
        a: vec![u[0].clone(), u[1].clone(), u[2].clone()],
        b: vec![u[3].clone(), u[4].clone(), u[5].clone()],
        couplings: vec![
            OffDiag {
                i: 0,
                j: 1,
                theta: u[6].clone(),
                exps: (0, 1, 1),
            },
            OffDiag {
                i: 1,
                j: 2,
                theta: u[7].clone(),
                exps: (0, 1, 1),
            },
            OffDiag {
                i: 0,
                j: 2,
                theta: u[8].clone(),
                exps: (0, 2, 0),
            },
        ],
        k2: k2.clone(),
    }
}

fn dress_matrix(alpha: &Scalar, beta: &Scalar, gamma: &Scalar) -> MatDiffOp {
    let rows = vec![
        vec![Scalar::one(), alpha.clone(), beta.clone()],
        vec![Scalar::zero(), Scalar::one(), gamma.clone()],
        vec![Scalar::zero(), Scalar::zero(), Scalar::one()],
    ];
    MatDiffOp::from_scalar_rows(&rows)
}

fn space_for(n: i64, prefs: [PrefTag; 3], dress: &MatDiffOp) -> DressedSpace {
    DressedSpace::new(Tower::new(vec![n - 2, n - 1, n]), dress.clone())
        .with_prefactors(prefs.to_vec())
}

/// Dense residual vector of the dressed invariance condition as a function
/// of the unknown constants; affine in `u`.
fn residual_map(
    u: &[Scalar],
    n: i64,
    alpha: &Scalar,
    beta: &Scalar,
    gamma: &Scalar,
    k2: &Scalar,
    prefs: [PrefTag; 3],
) -> Vec<Scalar> {
    let op = operator_for(u, k2);
    let alg = op
        .to_algebraic(&prefs.to_vec(), &dress_matrix(alpha, beta, gamma))
        .expect("exponent conditions hold by construction");
    let space = DressedSpace::plain(Tower::new(vec![n - 2, n - 1, n]));
    let max_deg = n.max(0) as usize + 6;
    dense_residuals(&alg, &space, max_deg)
}

/// Builds and solves the exact linear system for the constants. `n ≥ 1`.
pub fn lame3_solve(
    n: i64,
    alpha: &Scalar,
    beta: &Scalar,
    gamma: &Scalar,
    k2: &Scalar,
) -> Lame3Outcome {
    lame3_solve_with_prefactors(n, alpha, beta, gamma, k2, [PrefTag::Cn, PrefTag::Dn, PrefTag::Cn])
}

/// Same system with an explicit prefactor choice (used by the double
/// algebraization).
pub fn lame3_solve_with_prefactors(
    n: i64,
    alpha: &Scalar,
    beta: &Scalar,
    gamma: &Scalar,
    k2: &Scalar,
    prefs: [PrefTag; 3],
) -> Lame3Outcome {
    assert!(n >= 1, "n must be ≥ 1");
    let dim = 9usize;
    let zero = vec![Scalar::zero(); dim];
    let base = residual_map(&zero, n, alpha, beta, gamma, k2, prefs);
    let rows = base.len();

    let mut cols = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut unit = zero.clone();
        unit[j] = Scalar::one();
        let r = residual_map(&unit, n, alpha, beta, gamma, k2, prefs);
        let col: Vec<Scalar> = r.iter().zip(&base).map(|(a, b)| a - b).collect();
        cols.push(col);
    }

    // residual(u) = base + Σ uⱼ·colⱼ = 0, plus the gauge constraint Σbⱼ = 0
    let mut a = ScalarMat::zero(rows + 1, dim);
    let mut rhs = vec![Scalar::zero(); rows + 1];
    for i in 0..rows {
        for (j, col) in cols.iter().enumerate() {
            a[(i, j)] = col[i].clone();
        }
        rhs[i] = -&base[i];
    }
    for j in 3..6 {
        a[(rows, j)] = Scalar::one();
    }

    let sol = solve_linear(&a, &rhs);
    if !sol.consistent {
        return Lame3Outcome::Inconsistent {
            equations: rows + 1,
            unknowns: dim,
            rank: sol.rank,
        };
    }
    let particular = sol.particular.clone().expect("consistent system");
    if !sol.nullspace.is_empty() {
        return Lame3Outcome::Underdetermined {
            particular,
            nullity: sol.nullspace.len(),
        };
    }
    let u = particular;
    Lame3Outcome::Solved(Lame3Constants {
        n,
        alpha: alpha.clone(),
        beta: beta.clone(),
        gamma: gamma.clone(),
        a: [u[0].clone(), u[1].clone(), u[2].clone()],
        b: [u[3].clone(), u[4].clone(), u[5].clone()],
        theta: [u[6].clone(), u[7].clone(), u[8].clone()],
        k2: k2.clone(),
    })
}

impl Lame3Constants {
    pub fn unknown_vector(&self) -> Vec<Scalar> {
        let mut v = Vec::with_capacity(9);
        v.extend(self.a.iter().cloned());
        v.extend(self.b.iter().cloned());
        v.extend(self.theta.iter().cloned());
        v
    }

    pub fn operator(&self) -> LameOperator {
        operator_for(&self.unknown_vector(), &self.k2)
    }

    pub fn dress(&self) -> MatDiffOp {
        dress_matrix(&self.alpha, &self.beta, &self.gamma)
    }

    /// `a₁+a₂+a₃`, which the family ties to `2(6n²−3n+4)`.
    pub fn a_sum(&self) -> Scalar {
        self.a.iter().fold(Scalar::zero(), |acc, x| &acc + x)
    }
}

/// Report of the double algebraization: the same constants must leave both
/// the `diag(cn,dn,cn)` and the `diag(dn,cn,dn)` dressed spaces invariant.
#[derive(Clone, Debug, Serialize)]
pub struct DoubleAlgebraization {
    pub primary_invariant: bool,
    pub alternate_invariant: bool,
}

pub fn lame3_double_algebraization(c: &Lame3Constants) -> Result<DoubleAlgebraization, LameError> {
    let op = c.operator();
    let dress = c.dress();
    let check = |prefs: [PrefTag; 3]| -> Result<bool, LameError> {
        let alg = op.to_algebraic(&prefs.to_vec(), &dress)?;
        let space = DressedSpace::plain(Tower::new(vec![c.n - 2, c.n - 1, c.n]))
            .with_prefactors(prefs.to_vec());
        Ok(check_invariance(&alg, &space).invariant)
    };
    Ok(DoubleAlgebraization {
        primary_invariant: check([PrefTag::Cn, PrefTag::Dn, PrefTag::Cn])?,
        alternate_invariant: check([PrefTag::Dn, PrefTag::Cn, PrefTag::Dn])?,
    })
}

/// The closed-form solution at `α = β = γ = 1` (exact, for tests and the
/// CLI): `a₁=a₂=(12n²−10n+11)/3`, `a₃=(2/3)(6n²+n+1)`, `b₁=b₂=(4n−3)/3`,
/// `b₃=−2b₁`, `θ₁=(7−2n)/6`, `θ₂=−(4n+1)/3`, `θ₃=2(4n+1)/3`.
pub fn closed_form_all_ones(n: i64) -> Lame3Constants {
    let a12 = Scalar::from_ratio(12 * n * n - 10 * n + 11, 3);
    let a3 = Scalar::from_ratio(2 * (6 * n * n + n + 1), 3);
    let b12 = Scalar::from_ratio(4 * n - 3, 3);
    let b3 = Scalar::from_ratio(-2 * (4 * n - 3), 3);
    Lame3Constants {
        n,
        alpha: Scalar::one(),
        beta: Scalar::one(),
        gamma: Scalar::one(),
        a: [a12.clone(), a12, a3],
        b: [b12.clone(), b12, b3],
        theta: [
            Scalar::from_ratio(7 - 2 * n, 6),
            Scalar::from_ratio(-(4 * n + 1), 3),
            Scalar::from_ratio(2 * (4 * n + 1), 3),
        ],
        k2: Scalar::one(),
    }
}

/// The closed-form solution at `α = −β = 1, γ = 0`.
pub fn closed_form_alternating(n: i64) -> Lame3Constants {
    Lame3Constants {
        n,
        alpha: Scalar::one(),
        beta: Scalar::from_int(-1),
        gamma: Scalar::zero(),
        a: [
            Scalar::from_ratio(2 * (6 * n * n - 7 * n + 3), 3),
            Scalar::from_ratio(12 * n * n - 2 * n + 9, 3),
            Scalar::from_ratio(12 * n * n - 2 * n + 9, 3),
        ],
        b: [
            Scalar::from_ratio(2 * (4 * n + 1), 3),
            Scalar::from_ratio(-(4 * n + 1), 3),
            Scalar::from_ratio(-(4 * n + 1), 3),
        ],
        theta: [
            Scalar::from_ratio(3 - 4 * n, 3),
            Scalar::from_ratio(20 * n - 3, 6),
            Scalar::from_ratio(2 * (4 * n - 1), 3),
        ],
        k2: Scalar::one(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n2_all_ones_reproduces_closed_forms() {
        let out = lame3_solve(
            2,
            &Scalar::one(),
            &Scalar::one(),
            &Scalar::one(),
            &Scalar::one(),
        );
        let Lame3Outcome::Solved(c) = out else {
            panic!("expected a unique solution, got {:?}", out);
        };
        assert_eq!(c.a[0], Scalar::from_int(13));
        assert_eq!(c.a[1], Scalar::from_int(13));
        assert_eq!(c.a[2], Scalar::from_int(18));
        assert_eq!(c.b[0], Scalar::from_ratio(5, 3));
        assert_eq!(c.b[1], Scalar::from_ratio(5, 3));
        assert_eq!(c.b[2], Scalar::from_ratio(-10, 3));
        assert_eq!(c.theta[0], Scalar::from_ratio(1, 2));
        assert_eq!(c.theta[1], Scalar::from_int(-3));
        assert_eq!(c.theta[2], Scalar::from_int(6));
        // sum rule at n=2: 2(24−6+4) = 44
        assert_eq!(c.a_sum(), Scalar::from_int(44));
    }

    #[test]
    fn n2_alternating_matches_second_closed_form() {
        let out = lame3_solve(
            2,
            &Scalar::one(),
            &Scalar::from_int(-1),
            &Scalar::zero(),
            &Scalar::one(),
        );
        let Lame3Outcome::Solved(c) = out else {
            panic!("expected a unique solution, got {:?}", out);
        };
        let want = closed_form_alternating(2);
        assert_eq!(c.a, want.a);
        assert_eq!(c.b, want.b);
        assert_eq!(c.theta, want.theta);
        // spot values from the closed forms at n=2
        assert_eq!(c.a[0], Scalar::from_ratio(26, 3));
        assert_eq!(c.a[1], Scalar::from_ratio(53, 3));
        assert_eq!(c.b[0], Scalar::from_int(6));
        assert_eq!(c.theta[2], Scalar::from_ratio(14, 3));
    }

    #[test]
    fn generic_modulus_is_inconsistent() {
        let out = lame3_solve(
            2,
            &Scalar::one(),
            &Scalar::one(),
            &Scalar::one(),
            &Scalar::from_ratio(1, 2),
        );
        assert!(matches!(out, Lame3Outcome::Inconsistent { .. }));
    }

    #[test]
    fn double_algebraization_holds() {
        let out = lame3_solve(
            2,
            &Scalar::one(),
            &Scalar::one(),
            &Scalar::one(),
            &Scalar::one(),
        );
        let Lame3Outcome::Solved(c) = out else {
            panic!("expected solution");
        };
        let d = lame3_double_algebraization(&c).unwrap();
        assert!(d.primary_invariant && d.alternate_invariant);
        // negative control: perturbing a₁ breaks both
        let mut bad = c.clone();
        bad.a[0] = &bad.a[0] + &Scalar::one();
        let d = lame3_double_algebraization(&bad).unwrap();
        assert!(!d.primary_invariant && !d.alternate_invariant);
    }
}

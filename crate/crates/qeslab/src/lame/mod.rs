//! Lamé-type matrix Schrödinger operators.
//!
//! Operators of the form `H(z) = −d²/dz²·I + V_D(z) + V_I(z)`, with diagonal
//! `V_D = sn²·diag(a) + diag(b)` and symmetric off-diagonal couplings built
//! from products of Jacobi elliptic functions, become operators with
//! polynomial coefficients in `x = sn²(z,k)` after extracting a diagonal
//! prefactor of Jacobi products and a triangular dress. This module holds the
//! transformation engine; the coupling catalogs live in [`catalog`], the
//! 3×3 constraint solver in [`three`], and the single-factor no-go scans in
//! [`nogo`].

pub mod catalog;
pub mod nogo;
pub mod three;

use thiserror::Error;

use crate::algebra::{DiffOp, MatDiffOp, Poly, Scalar};
use crate::elliptic::{appendix_table, jacobi, PrefTag};
use crate::numeric::MatrixPotential;
use crate::spaces::DressedSpace;

pub use catalog::{case_params, invariant_spaces, qes_spectrum_lame, trig_limit_potential,
    CaseConstants, Coupling, TrigEntry};
pub use three::{lame3_double_algebraization, lame3_solve, Lame3Constants, Lame3Outcome};

/// One symmetric off-diagonal coupling `θ·sn^{α₁}cn^{α₂}dn^{α₃}` between
/// components `i` and `j` (stored once for the pair).
#[derive(Clone, Debug)]
pub struct OffDiag {
    pub i: usize,
    pub j: usize,
    pub theta: Scalar,
    pub exps: (i64, i64, i64),
}

/// `H(z) = −d²/dz²·I + sn²·diag(a) + diag(b) + V_I`.
#[derive(Clone, Debug)]
pub struct LameOperator {
    pub n: usize,
    pub a: Vec<Scalar>,
    pub b: Vec<Scalar>,
    pub couplings: Vec<OffDiag>,
    pub k2: Scalar,
}

#[derive(Debug, Error)]
pub enum LameError {
    #[error("off-diagonal entry ({i},{j}) keeps odd or negative Jacobi exponents {exps:?} after the prefactor")]
    OddExponent {
        i: usize,
        j: usize,
        exps: (i64, i64, i64),
    },
    #[error("need one prefactor per component: {got} for N = {n}")]
    PrefactorCount { got: usize, n: usize },
    #[error("coupling constants are invalid: {0}")]
    BadConstants(String),
}

impl LameOperator {
    pub fn new(
        n: usize,
        a: Vec<Scalar>,
        b: Vec<Scalar>,
        couplings: Vec<OffDiag>,
        k2: Scalar,
    ) -> Self {
        assert_eq!(a.len(), n);
        assert_eq!(b.len(), n);
        let sum = b.iter().fold(Scalar::zero(), |acc, x| &acc + x);
        assert!(sum.is_zero(), "constant shifts must sum to zero");
        for c in &couplings {
            assert!(c.i < n && c.j < n && c.i != c.j, "coupling must be off-diagonal");
        }
        LameOperator {
            n,
            a,
            b,
            couplings,
            k2,
        }
    }

    /// The scalar Lamé operator `−d²/dz² + k²·l(l+1)·sn²`.
    pub fn scalar_lame(l: i64, k2: Scalar) -> Self {
        let strength = &Scalar::from_int(l * (l + 1)) * &k2;
        LameOperator::new(1, vec![strength], vec![Scalar::zero()], vec![], k2)
    }

    fn coupling_entry(&self, i: usize, j: usize) -> Option<&OffDiag> {
        self.couplings
            .iter()
            .find(|c| (c.i == i && c.j == j) || (c.i == j && c.j == i))
    }

    /// Conjugates by `U = diag(prefactors)`, substitutes `x = sn²` via the
    /// prefactor table, then conjugates by the `triangular` unipotent matrix.
    /// The result has polynomial coefficients; couplings whose exponents stay
    /// odd or negative after the prefactor are rejected.
    pub fn to_algebraic(
        &self,
        prefactors: &[PrefTag],
        triangular: &MatDiffOp,
    ) -> Result<MatDiffOp, LameError> {
        if prefactors.len() != self.n {
            return Err(LameError::PrefactorCount {
                got: prefactors.len(),
                n: self.n,
            });
        }
        let k2 = &self.k2;

        // −d²/dz² in the variable x = sn²:
        //   −[4x(1−x)(1−k²x)]D² − [2(3k²x² − 2(1+k²)x + 1)]D
        let lead = {
            // 4x(1−x)(1−k²x) = 4x − 4(1+k²)x² + 4k²x³
            Poly::from_coeffs(vec![
                Scalar::zero(),
                Scalar::from_int(4),
                &Scalar::from_int(-4) * &(&Scalar::one() + k2),
                &Scalar::from_int(4) * k2,
            ])
        };
        let drift_free = Poly::from_coeffs(vec![
            Scalar::from_int(2),
            &Scalar::from_int(-4) * &(&Scalar::one() + k2),
            &Scalar::from_int(6) * k2,
        ]);
        let minus_dzz = &DiffOp::term(-&lead, 2) + &DiffOp::term(-&drift_free, 1);

        let m = MatDiffOp::from_fn(self.n, self.n, |i, j| {
            if i == j {
                let pair = appendix_table(prefactors[i], k2);
                // −f″/f − 4·[(sn cn dn)f′/f]·D on top of the free part
                let mut op = minus_dzz.clone();
                op = &op + &DiffOp::term(pair.drift.scale(&Scalar::from_int(-4)), 1);
                op = &op + &DiffOp::mul_by(-&pair.f_ratio);
                op = &op
                    + &DiffOp::mul_by(Poly::from_coeffs(vec![
                        self.b[i].clone(),
                        self.a[i].clone(),
                    ]));
                op
            } else {
                DiffOp::zero()
            }
        });

        // off-diagonal couplings: θ·(Jacobi product)·f_j/f_i per entry (i,j)
        let mut mat = m;
        for i in 0..self.n {
            for j in 0..self.n {
                if i == j {
                    continue;
                }
                let Some(c) = self.coupling_entry(i, j) else {
                    continue;
                };
                let gi = prefactors[i].exponents();
                let gj = prefactors[j].exponents();
                let e = (
                    c.exps.0 + gj.0 - gi.0,
                    c.exps.1 + gj.1 - gi.1,
                    c.exps.2 + gj.2 - gi.2,
                );
                if e.0 < 0 || e.1 < 0 || e.2 < 0 || e.0 % 2 != 0 || e.1 % 2 != 0 || e.2 % 2 != 0 {
                    return Err(LameError::OddExponent { i, j, exps: e });
                }
                // sn^{2u}cn^{2v}dn^{2w} = x^u (1−x)^v (1−k²x)^w
                let mut poly = Poly::constant(c.theta.clone());
                poly = poly.mul_xk((e.0 / 2) as usize);
                let one_minus_x = Poly::from_coeffs(vec![Scalar::one(), Scalar::from_int(-1)]);
                for _ in 0..(e.1 / 2) {
                    poly = &poly * &one_minus_x;
                }
                let one_minus_k2x = Poly::from_coeffs(vec![Scalar::one(), -k2]);
                for _ in 0..(e.2 / 2) {
                    poly = &poly * &one_minus_k2x;
                }
                mat.set(i, j, DiffOp::mul_by(poly));
            }
        }

        // triangular dress
        let inv = triangular
            .unipotent_inverse()
            .expect("triangular dress must be unipotent");
        Ok(&(&inv * &mat) * triangular)
    }

    /// Physical potential sampler `z ↦ V_D(z) + V_I(z)` for the oracles.
    pub fn potential(&self) -> LamePotential {
        LamePotential {
            n: self.n,
            a: self.a.iter().map(Scalar::to_f64).collect(),
            b: self.b.iter().map(Scalar::to_f64).collect(),
            couplings: self
                .couplings
                .iter()
                .map(|c| (c.i, c.j, c.theta.to_f64(), c.exps))
                .collect(),
            k: self.k2.to_f64().sqrt(),
        }
    }

    /// Period of the physical operator: `4K(k)`.
    pub fn period(&self) -> f64 {
        4.0 * crate::elliptic::complete_k(self.k2.to_f64().sqrt())
    }
}

/// Float sampler of the Lamé matrix potential.
pub struct LamePotential {
    n: usize,
    a: Vec<f64>,
    b: Vec<f64>,
    couplings: Vec<(usize, usize, f64, (i64, i64, i64))>,
    k: f64,
}

impl MatrixPotential for LamePotential {
    fn channels(&self) -> usize {
        self.n
    }
    fn eval(&self, z: f64) -> Vec<Vec<f64>> {
        let jt = jacobi(z, self.k);
        let mut v = vec![vec![0.0; self.n]; self.n];
        for i in 0..self.n {
            v[i][i] = self.a[i] * jt.sn * jt.sn + self.b[i];
        }
        for &(i, j, theta, (e1, e2, e3)) in &self.couplings {
            let val = theta
                * jt.sn.powi(e1 as i32)
                * jt.cn.powi(e2 as i32)
                * jt.dn.powi(e3 as i32);
            v[i][j] = val;
            v[j][i] = val;
        }
        v
    }
}

/// Physical-space sampler `ψ(z) = U(z)·(T·v)(sn²(z))` for a tower vector of
/// a dressed space with Jacobi prefactors.
pub fn physical_wavefunction(
    space: &DressedSpace,
    v: &[Poly],
    k: f64,
) -> impl Fn(f64) -> Vec<f64> {
    let dressed = space.dress.apply_vec(v);
    let prefs = space.prefactors.clone();
    move |z: f64| {
        let jt = jacobi(z, k);
        let x = jt.sn * jt.sn;
        dressed
            .iter()
            .zip(&prefs)
            .map(|(p, tag)| tag.eval(&jt) * p.eval_f64(x))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::{check_invariance, restriction_matrix, Tower};

    #[test]
    fn scalar_lame_n1_matches_fuchsian_form() {
        // prefactor = 1, V = 2k²sn²: result is −(free operator) + 2k²x
        let k2 = Scalar::from_ratio(3, 5);
        let op = LameOperator::scalar_lame(1, k2.clone());
        let alg = op
            .to_algebraic(&[PrefTag::One], &MatDiffOp::identity(1))
            .unwrap();
        let want = {
            let lead = Poly::from_coeffs(vec![
                Scalar::zero(),
                Scalar::from_int(4),
                Scalar::from_ratio(-32, 5),
                Scalar::from_ratio(12, 5),
            ]);
            let drift = Poly::from_coeffs(vec![
                Scalar::from_int(2),
                Scalar::from_ratio(-32, 5),
                Scalar::from_ratio(18, 5),
            ]);
            let pot = Poly::from_coeffs(vec![Scalar::zero(), Scalar::from_ratio(6, 5)]);
            &(&DiffOp::term(-&lead, 2) + &DiffOp::term(-&drift, 1)) + &DiffOp::mul_by(pot)
        };
        assert_eq!(*alg.get(0, 0), want);
    }

    #[test]
    fn dn_prefactor_uses_its_table_row() {
        // zero potential, prefactor dn: the drift comes from the dn row
        let k2 = Scalar::from_ratio(1, 2);
        let op = LameOperator::new(
            1,
            vec![Scalar::zero()],
            vec![Scalar::zero()],
            vec![],
            k2.clone(),
        );
        let alg = op
            .to_algebraic(&[PrefTag::Dn], &MatDiffOp::identity(1))
            .unwrap();
        // coefficient of D must be −2(3k²x²−2(1+k²)x+1) − 4(k²x²−k²x)
        let want_d1 = Poly::from_coeffs(vec![
            Scalar::from_int(-2),
            &Scalar::from_int(4) * &(&Scalar::one() + &k2) + &(&Scalar::from_int(4) * &k2),
            &Scalar::from_int(-6) * &k2 - &(&Scalar::from_int(4) * &k2),
        ]);
        assert_eq!(alg.get(0, 0).coeff(1), want_d1);
        // and the order-0 part is −f″/f = −(2k²x − k²)
        assert_eq!(
            alg.get(0, 0).coeff(0),
            Poly::from_coeffs(vec![k2.clone(), &Scalar::from_int(-2) * &k2])
        );
    }

    /// The three 1-dimensional dressed spaces of the scalar Lamé operator
    /// with l = 1: prefactors sn, cn, dn on P(0) give the exact algebraic
    /// levels 1+k², 1, k².
    #[test]
    fn scalar_lame_l1_exact_levels() {
        for k2 in [Scalar::from_ratio(1, 2), Scalar::from_ratio(3, 5)] {
            let op = LameOperator::scalar_lame(1, k2.clone());
            let want = [
                (PrefTag::Sn, &Scalar::one() + &k2),
                (PrefTag::Cn, Scalar::one()),
                (PrefTag::Dn, k2.clone()),
            ];
            for (tag, level) in want {
                let alg = op.to_algebraic(&[tag], &MatDiffOp::identity(1)).unwrap();
                let space = DressedSpace::plain(Tower::new(vec![0]))
                    .with_prefactors(vec![tag]);
                assert!(check_invariance(&alg, &space).invariant);
                let r = restriction_matrix(&alg, &space);
                assert_eq!(*r.entry(0, 0), level, "prefactor {:?}", tag);
            }
        }
    }

    #[test]
    fn odd_exponent_rejected() {
        // V₁₂ = θ·sn with prefactors (1, cn) leaves sn·cn/1: odd in both
        let k2 = Scalar::from_ratio(1, 2);
        let op = LameOperator::new(
            2,
            vec![Scalar::zero(), Scalar::zero()],
            vec![Scalar::zero(), Scalar::zero()],
            vec![OffDiag {
                i: 0,
                j: 1,
                theta: Scalar::one(),
                exps: (1, 0, 0),
            }],
            k2,
        );
        assert!(matches!(
            op.to_algebraic(&[PrefTag::One, PrefTag::Cn], &MatDiffOp::identity(2)),
            Err(LameError::OddExponent { .. })
        ));
    }

    #[test]
    fn off_diagonal_transforms_to_even_products() {
        // coupling sn·cn with prefactors (sn, cn): images cn² = 1−x and sn² = x
        let k2 = Scalar::from_ratio(3, 5);
        let theta = Scalar::from_int(4);
        let op = LameOperator::new(
            2,
            vec![Scalar::zero(), Scalar::zero()],
            vec![Scalar::zero(), Scalar::zero()],
            vec![OffDiag {
                i: 0,
                j: 1,
                theta: theta.clone(),
                exps: (1, 1, 0),
            }],
            k2,
        );
        let alg = op
            .to_algebraic(&[PrefTag::Sn, PrefTag::Cn], &MatDiffOp::identity(2))
            .unwrap();
        assert_eq!(
            *alg.get(0, 1),
            DiffOp::mul_by(Poly::from_coeffs(vec![theta.clone(), -&theta]))
        );
        assert_eq!(
            *alg.get(1, 0),
            DiffOp::mul_by(Poly::monomial(theta, 1))
        );
    }
}

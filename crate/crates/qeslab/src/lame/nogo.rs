//! No-go scans for 2×2 couplings that are a constant or a single Jacobi
//! factor: the exact linear solve over `(a₁, a₂, b, θ)` forces `θ = 0` on
//! every candidate dressed space, so no genuinely coupled operator of that
//! shape exists.

use serde::Serialize;

use crate::algebra::{solve_linear, Scalar, ScalarMat};
use crate::elliptic::PrefTag;
use crate::spaces::{dense_residuals, DressedSpace, Tower};

use super::catalog::DressShape;
use super::{LameOperator, OffDiag};

/// The coupling shapes covered by the scan.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SingleFactor {
    Const,
    Sn,
    Cn,
    Dn,
}

impl SingleFactor {
    pub fn exponents(self) -> (i64, i64, i64) {
        match self {
            SingleFactor::Const => (0, 0, 0),
            SingleFactor::Sn => (1, 0, 0),
            SingleFactor::Cn => (0, 1, 0),
            SingleFactor::Dn => (0, 0, 1),
        }
    }

    /// All prefactor pairs (f, g) for which `V₁₂·g/f` and `V₁₂·f/g` reduce
    /// to even non-negative Jacobi exponents.
    fn prefactor_pairs(self) -> Vec<(PrefTag, PrefTag)> {
        let e = self.exponents();
        let mut out = Vec::new();
        for f in PrefTag::ALL {
            for g in PrefTag::ALL {
                let ef = f.exponents();
                let eg = g.exponents();
                let fwd = (e.0 + eg.0 - ef.0, e.1 + eg.1 - ef.1, e.2 + eg.2 - ef.2);
                let bwd = (e.0 + ef.0 - eg.0, e.1 + ef.1 - eg.1, e.2 + ef.2 - eg.2);
                let even_ok = |t: (i64, i64, i64)| {
                    t.0 >= 0 && t.1 >= 0 && t.2 >= 0 && t.0 % 2 == 0 && t.1 % 2 == 0 && t.2 % 2 == 0
                };
                if even_ok(fwd) && even_ok(bwd) {
                    out.push((f, g));
                }
            }
        }
        out
    }
}

/// One solved candidate from the scan.
#[derive(Clone, Debug, Serialize)]
pub struct NogoCase {
    pub prefactors: (String, String),
    pub degrees: (i64, i64),
    pub kappa: Scalar,
    pub consistent: bool,
    /// Whether some solution of the linear system carries `θ ≠ 0`.
    pub coupled_solution_exists: bool,
}

/// Scan result over all candidate spaces.
#[derive(Clone, Debug, Serialize)]
pub struct NogoReport {
    pub factor: SingleFactor,
    pub m: i64,
    pub cases: Vec<NogoCase>,
    /// True when no candidate space admits a solution with `θ ≠ 0`.
    pub theta_forced_zero: bool,
}

/// Unknown layout `(a₁, a₂, b, θ)` with `b₁ = b = −b₂`.
fn operator_for(u: &[Scalar], factor: SingleFactor, k2: &Scalar) -> LameOperator {
    LameOperator {
        n: 2,
        a: vec![u[0].clone(), u[1].clone()],
        b: vec![u[2].clone(), -&u[2]],
        couplings: vec![OffDiag {
            i: 0,
            j: 1,
            theta: u[3].clone(),
            exps: factor.exponents(),
        }],
        k2: k2.clone(),
    }
}

/// Runs the exact linear solve on every candidate space (prefactor pairs ×
/// tower variants × dress shapes × probe dress constants) and reports
/// whether any admits a solution with nonzero coupling.
pub fn nogo_scan(factor: SingleFactor, m: i64, k2: &Scalar) -> NogoReport {
    let kappas: Vec<Scalar> = [(0, 1), (1, 1), (-1, 1), (2, 1), (-2, 1), (1, 2), (-1, 2)]
        .iter()
        .map(|&(n, d)| Scalar::from_ratio(n, d))
        .collect();
    let towers = [(m, m), (m - 1, m), (m, m - 1), (m - 1, m - 1)];
    let shapes = [
        DressShape::ConstUpper,
        DressShape::ConstLower,
        DressShape::LinearUpper,
        DressShape::LinearLower,
    ];

    let mut cases = Vec::new();
    let mut theta_forced_zero = true;

    for (f, g) in factor.prefactor_pairs() {
        for &(d1, d2) in &towers {
            let tower = Tower::new(vec![d1, d2]);
            if tower.dim() == 0 {
                continue;
            }
            let max_deg = d1.max(d2).max(0) as usize + 6;
            for shape in shapes {
                for kappa in &kappas {
                    let dress = shape.dress(kappa);
                    let space = DressedSpace::new(tower.clone(), dress)
                        .with_prefactors(vec![f, g]);

                    let eval = |u: &[Scalar]| -> Vec<Scalar> {
                        let op = operator_for(u, factor, k2);
                        let alg = op
                            .to_algebraic(&[f, g], &space.dress)
                            .expect("pairs pre-filtered for even exponents");
                        let plain = DressedSpace::plain(tower.clone());
                        dense_residuals(&alg, &plain, max_deg)
                    };

                    let zero = vec![Scalar::zero(); 4];
                    let base = eval(&zero);
                    let rows = base.len();
                    let mut a = ScalarMat::zero(rows, 4);
                    for j in 0..4 {
                        let mut unit = zero.clone();
                        unit[j] = Scalar::one();
                        let r = eval(&unit);
                        for i in 0..rows {
                            a[(i, j)] = &r[i] - &base[i];
                        }
                    }
                    let rhs: Vec<Scalar> = base.iter().map(|x| -x).collect();
                    let sol = solve_linear(&a, &rhs);

                    let coupled = if !sol.consistent {
                        false
                    } else {
                        let theta_particular =
                            !sol.particular.as_ref().unwrap()[3].is_zero();
                        let theta_free =
                            sol.nullspace.iter().any(|v| !v[3].is_zero());
                        theta_particular || theta_free
                    };
                    if coupled {
                        theta_forced_zero = false;
                    }
                    cases.push(NogoCase {
                        prefactors: (f.name().into(), g.name().into()),
                        degrees: (d1, d2),
                        kappa: kappa.clone(),
                        consistent: sol.consistent,
                        coupled_solution_exists: coupled,
                    });
                }
            }
        }
    }

    NogoReport {
        factor,
        m,
        cases,
        theta_forced_zero,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefactor_pairs_cover_the_expected_splits() {
        let pairs = SingleFactor::Sn.prefactor_pairs();
        assert!(pairs.contains(&(PrefTag::Sn, PrefTag::One)));
        assert!(pairs.contains(&(PrefTag::One, PrefTag::Sn)));
        assert!(pairs.contains(&(PrefTag::Cn, PrefTag::SnCn)));
        assert_eq!(pairs.len(), 8);
        assert_eq!(SingleFactor::Const.prefactor_pairs().len(), 8);
    }

    #[test]
    fn single_sn_coupling_forces_theta_zero_m1() {
        let report = nogo_scan(SingleFactor::Sn, 1, &Scalar::from_ratio(3, 5));
        assert!(report.theta_forced_zero);
    }

    #[test]
    fn constant_coupling_forces_theta_zero_m1() {
        let report = nogo_scan(SingleFactor::Const, 1, &Scalar::from_ratio(1, 2));
        assert!(report.theta_forced_zero);
    }

    /// Control: the genuine sn·cn coupling does admit coupled solutions, so
    /// the scan machinery can tell the two situations apart.
    #[test]
    fn sncn_control_is_not_forced_to_zero() {
        // reuse the scan plumbing with the two-factor coupling via a local
        // operator: prefactors (sn, cn), towers (0, 1), dress constant κ
        use crate::spaces::dense_residuals;
        let k2 = Scalar::from_ratio(3, 5);
        let tower = Tower::new(vec![0, 1]);
        let kappa = Scalar::from_ratio(-1, 2);
        let dress = DressShape::ConstUpper.dress(&kappa);
        let eval = |u: &[Scalar]| -> Vec<Scalar> {
            let op = LameOperator {
                n: 2,
                a: vec![u[0].clone(), u[1].clone()],
                b: vec![u[2].clone(), -&u[2]],
                couplings: vec![OffDiag {
                    i: 0,
                    j: 1,
                    theta: u[3].clone(),
                    exps: (1, 1, 0),
                }],
                k2: k2.clone(),
            };
            let alg = op.to_algebraic(&[PrefTag::Sn, PrefTag::Cn], &dress).unwrap();
            dense_residuals(&alg, &DressedSpace::plain(tower.clone()), 7)
        };
        let zero = vec![Scalar::zero(); 4];
        let base = eval(&zero);
        let mut a = ScalarMat::zero(base.len(), 4);
        for j in 0..4 {
            let mut unit = zero.clone();
            unit[j] = Scalar::one();
            let r = eval(&unit);
            for i in 0..base.len() {
                a[(i, j)] = &r[i] - &base[i];
            }
        }
        let rhs: Vec<Scalar> = base.iter().map(|x| -x).collect();
        let sol = solve_linear(&a, &rhs);
        assert!(sol.consistent);
        let coupled = !sol.particular.as_ref().unwrap()[3].is_zero()
            || sol.nullspace.iter().any(|v| !v[3].is_zero());
        assert!(coupled, "the Pythagorean dress admits a coupled solution");
    }
}

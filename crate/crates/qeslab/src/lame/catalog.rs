//! The 2×2 coupling catalog: coupling-constant families (Types 1 and 2 per
//! coupling), the invariant dressed spaces, a discovery engine that recovers
//! the triangular-dress constants as exact roots of the residual equations,
//! the algebraic spectra, and the trigonometric `k → 0` limit.

use serde::Serialize;

use crate::algebra::{DiffOp, MatDiffOp, Poly, Scalar};
use crate::anharmonic::Spectrum;
use crate::elliptic::PrefTag;
use crate::spaces::{check_invariance, dense_residuals, restriction_matrix, DressedSpace,
    RestrictionMatrix, Tower};

use super::{LameError, LameOperator, OffDiag};

/// Which product of Jacobi functions couples the two channels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Coupling {
    SnCn,
    SnDn,
    CnDn,
}

impl Coupling {
    pub fn exponents(self) -> (i64, i64, i64) {
        match self {
            Coupling::SnCn => (1, 1, 0),
            Coupling::SnDn => (1, 0, 1),
            Coupling::CnDn => (0, 1, 1),
        }
    }

    pub fn tag(self) -> PrefTag {
        PrefTag::from_exponents(self.exponents()).unwrap()
    }

    /// The Jacobi function *not* present in the coupling.
    pub fn third(self) -> PrefTag {
        match self {
            Coupling::SnCn => PrefTag::Dn,
            Coupling::SnDn => PrefTag::Cn,
            Coupling::CnDn => PrefTag::Sn,
        }
    }

    /// The two single factors whose product is the coupling.
    pub fn split(self) -> (PrefTag, PrefTag) {
        match self {
            Coupling::SnCn => (PrefTag::Sn, PrefTag::Cn),
            Coupling::SnDn => (PrefTag::Sn, PrefTag::Dn),
            Coupling::CnDn => (PrefTag::Cn, PrefTag::Dn),
        }
    }

    pub fn parse(s: &str) -> Option<Coupling> {
        match s {
            "sncn" => Some(Coupling::SnCn),
            "sndn" => Some(Coupling::SnDn),
            "cndn" => Some(Coupling::CnDn),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Coupling::SnCn => "sncn",
            Coupling::SnDn => "sndn",
            Coupling::CnDn => "cndn",
        }
    }
}

/// Coupling constants of one catalog case. `theta` is the positive square
/// root of the case formula, possibly living in ℚ(√d).
#[derive(Clone, Debug)]
pub struct CaseConstants {
    pub coupling: Coupling,
    pub case_type: u8,
    pub m: i64,
    pub b: Scalar,
    pub k2: Scalar,
    pub a1: Scalar,
    pub a2: Scalar,
    pub theta2: Scalar,
    pub theta: Scalar,
}

/// Fills the derived constants for a catalog case. Fails when the case
/// formula gives `θ² ≤ 0` (no real coupling).
pub fn case_params(
    coupling: Coupling,
    case_type: u8,
    m: i64,
    b: Scalar,
    k2: Scalar,
) -> Result<CaseConstants, LameError> {
    assert!(case_type == 1 || case_type == 2, "type must be 1 or 2");
    assert!(m >= 0, "m must be a non-negative integer");
    let poly_m = match case_type {
        1 => Scalar::from_int(4 * m * m + 2 * m + 1),
        _ => Scalar::from_int(4 * m * m + 6 * m + 1),
    };
    let odd = match case_type {
        1 => Scalar::from_int(1 + 4 * m),
        _ => Scalar::from_int(3 + 4 * m),
    };
    let two_b = &Scalar::from_int(2) * &b;
    let four_b2 = &Scalar::from_int(4) * &(&b * &b);

    let (a1, a2, theta2) = match coupling {
        Coupling::SnCn => {
            let base = &k2 * &poly_m;
            let t2 = &four_b2 - &(&(&k2 * &k2) * &(&odd * &odd));
            (&base - &two_b, &base + &two_b, t2)
        }
        Coupling::SnDn => {
            let a1 = &k2 * &(&poly_m - &two_b);
            let a2 = &k2 * &(&poly_m + &two_b);
            let t2 = &(&k2 * &four_b2) - &(&k2 * &(&odd * &odd));
            (a1, a2, t2)
        }
        Coupling::CnDn => {
            let shift = &(&two_b * &k2) / &(&Scalar::one() + &k2);
            let base = &k2 * &poly_m;
            let t2 = &(&k2 * &(&odd * &odd)) - &(&(&four_b2 * &k2) / &(&Scalar::one() + &k2));
            (&base - &shift, &base + &shift, t2)
        }
    };

    if theta2.signum() <= 0 {
        return Err(LameError::BadConstants(format!(
            "theta^2 = {theta2} is not positive for {:?} type {case_type}, m={m}, b={b}, k2={k2}",
            coupling
        )));
    }
    let theta = theta2
        .sqrt()
        .ok_or_else(|| LameError::BadConstants(format!("theta^2 = {theta2} has no square root in ℚ or ℚ(√d)")))?;

    Ok(CaseConstants {
        coupling,
        case_type,
        m,
        b,
        k2,
        a1,
        a2,
        theta2,
        theta,
    })
}

impl CaseConstants {
    /// The physical 2×2 operator of this case.
    pub fn operator(&self) -> LameOperator {
        LameOperator::new(
            2,
            vec![self.a1.clone(), self.a2.clone()],
            vec![self.b.clone(), -&self.b],
            vec![OffDiag {
                i: 0,
                j: 1,
                theta: self.theta.clone(),
                exps: self.coupling.exponents(),
            }],
            self.k2.clone(),
        )
    }

    /// The paper's dress constants for the sn·cn coupling (used as an oracle
    /// for the discovery engine): `κ₁…κ₄` for Type 1, `κ₅…κ₈` for Type 2.
    pub fn sncn_kappas(&self) -> Vec<Scalar> {
        assert_eq!(self.coupling, Coupling::SnCn);
        let k2_odd = &self.k2 * &Scalar::from_int(1 + 4 * self.m);
        let k2_odd2 = &self.k2 * &Scalar::from_int(3 + 4 * self.m);
        let two_b = &Scalar::from_int(2) * &self.b;
        match self.case_type {
            1 => {
                let kappa1 = &(-&self.theta) / &(&two_b + &k2_odd);
                let kappa2 = &self.theta / &(&two_b - &k2_odd);
                let kappa3 = -&kappa2.inv();
                let kappa4 = -&kappa1.inv();
                vec![kappa1, kappa2, kappa3, kappa4]
            }
            _ => {
                let kappa5 = &(&k2_odd2 - &two_b) / &self.theta;
                let kappa6 = kappa5.clone();
                let kappa7 = &(&two_b - &k2_odd2) / &self.theta;
                let kappa8 = &(&two_b + &k2_odd2) / &self.theta;
                vec![kappa5, kappa6, kappa7, kappa8]
            }
        }
    }
}

/// Shape of the triangular dress in a template.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DressShape {
    ConstUpper,
    ConstLower,
    LinearUpper,
    LinearLower,
}

impl DressShape {
    /// The strictly triangular generator `L` with unit constant; the dress is
    /// `I + κ·L`.
    fn generator(self) -> MatDiffOp {
        let mut l = MatDiffOp::zero(2, 2);
        let entry = match self {
            DressShape::ConstUpper | DressShape::ConstLower => DiffOp::one(),
            DressShape::LinearUpper | DressShape::LinearLower => {
                DiffOp::mul_by(Poly::x())
            }
        };
        match self {
            DressShape::ConstUpper | DressShape::LinearUpper => l.set(0, 1, entry),
            DressShape::ConstLower | DressShape::LinearLower => l.set(1, 0, entry),
        }
        l
    }

    pub fn dress(self, kappa: &Scalar) -> MatDiffOp {
        &MatDiffOp::identity(2) + &self.generator().scale(kappa)
    }
}

/// One candidate invariant-space template: prefactor pair, tower degrees,
/// and dress shape.
#[derive(Clone, Debug)]
pub struct Template {
    pub label: String,
    pub pref: (PrefTag, PrefTag),
    pub degrees: (i64, i64),
    pub shape: DressShape,
}

/// The eight templates mirroring the catalog structure for a coupling:
/// the two split pairs on `(P(m−1), P(m))` with constant dress, the
/// third-function pair on `(P(m−1), P(m−1))` with linear dress (both
/// orientations), `(1, J)` on `(P(m), P(m))` with linear dress (both
/// orientations), and the augmented split pairs on `(P(m−1), P(m))` with
/// constant dress.
pub fn templates(coupling: Coupling, case_type: u8, m: i64) -> Vec<Template> {
    let (f1, f2) = coupling.split();
    let third = coupling.third();
    let j = coupling.tag();
    let aug = |a: PrefTag, b: PrefTag| {
        let ea = a.exponents();
        let eb = b.exponents();
        PrefTag::from_exponents((ea.0 + eb.0, ea.1 + eb.1, ea.2 + eb.2)).expect("augmented tag")
    };
    let offset = if case_type == 1 { 0 } else { 4 };
    let raw = if case_type == 1 {
        vec![
            ((f1, f2), (m - 1, m), DressShape::ConstUpper),
            ((f2, f1), (m - 1, m), DressShape::ConstUpper),
            ((third, PrefTag::SnCnDn), (m - 1, m - 1), DressShape::LinearUpper),
            ((PrefTag::SnCnDn, third), (m - 1, m - 1), DressShape::LinearLower),
        ]
    } else {
        vec![
            ((PrefTag::One, j), (m, m), DressShape::LinearUpper),
            ((j, PrefTag::One), (m, m), DressShape::LinearLower),
            ((aug(f1, third), aug(f2, third)), (m - 1, m), DressShape::ConstUpper),
            ((aug(f2, third), aug(f1, third)), (m - 1, m), DressShape::ConstUpper),
        ]
    };
    raw.into_iter()
        .enumerate()
        .map(|(idx, (pref, degrees, shape))| Template {
            label: format!("V{}", idx + 1 + offset),
            pref,
            degrees,
            shape,
        })
        .collect()
}

/// Exact solutions `κ` of the invariance equations for one template:
/// the conjugated operator is quadratic in `κ`,
/// `G(κ) = M + κ[M,L] − κ²·L·M·L`, so every residual coefficient is a
/// quadratic polynomial in `κ`; the template's valid dresses are the common
/// roots.
pub fn solve_dress_constant(
    alg: &MatDiffOp,
    template: &Template,
) -> Result<Vec<Scalar>, LameError> {
    let tower = Tower::new(vec![template.degrees.0, template.degrees.1]);
    if tower.dim() == 0 {
        return Ok(vec![]);
    }
    let max_deg = (tower
        .degrees()
        .iter()
        .copied()
        .max()
        .unwrap()
        .max(0) as usize)
        + 6;
    let space = DressedSpace::plain(tower);
    let l = template.shape.generator();
    let g0 = alg;
    let g1 = &(g0 * &l) - &(&l * g0);
    let g2 = -&(&(&l * g0) * &l);

    let r0 = dense_residuals(g0, &space, max_deg);
    let r1 = dense_residuals(&g1, &space, max_deg);
    let r2 = dense_residuals(&g2, &space, max_deg);

    // find a pivot constraint with genuine κ-dependence
    let mut candidates: Option<Vec<Scalar>> = None;
    for i in 0..r0.len() {
        if r2[i].is_zero() && r1[i].is_zero() {
            continue;
        }
        let roots = if r2[i].is_zero() {
            vec![&(-&r0[i]) / &r1[i]]
        } else {
            let disc = &(&r1[i] * &r1[i])
                - &(&(&Scalar::from_int(4) * &r2[i]) * &r0[i]);
            match disc.signum() {
                s if s < 0 => vec![],
                _ => match disc.sqrt() {
                    None => vec![],
                    Some(root) => {
                        let two_a = &Scalar::from_int(2) * &r2[i];
                        let mut v = vec![&(&(-&r1[i]) + &root) / &two_a];
                        if !root.is_zero() {
                            v.push(&(&(-&r1[i]) - &root) / &two_a);
                        }
                        v
                    }
                },
            }
        };
        candidates = Some(roots);
        break;
    }

    let candidates = match candidates {
        Some(c) => c,
        None => {
            // κ never appears: invariant for all κ iff the bare residuals
            // vanish; report κ = 0 in that case
            return Ok(if r0.iter().all(Scalar::is_zero) {
                vec![Scalar::zero()]
            } else {
                vec![]
            });
        }
    };

    let ok = candidates
        .into_iter()
        .filter(|kappa| {
            let k2s = kappa * kappa;
            (0..r0.len()).all(|i| {
                (&(&r0[i] + &(&r1[i] * kappa)) + &(&r2[i] * &k2s)).is_zero()
            })
        })
        .collect();
    Ok(ok)
}

/// The invariant dressed spaces of a catalog case, with the dress constants
/// recovered exactly from the residual equations. Every returned space has
/// passed the exact invariance check.
pub fn invariant_spaces(c: &CaseConstants) -> Result<Vec<DressedSpace>, LameError> {
    let op = c.operator();
    let mut out = Vec::new();
    for template in templates(c.coupling, c.case_type, c.m) {
        let prefs = vec![template.pref.0, template.pref.1];
        let alg = match op.to_algebraic(&prefs, &MatDiffOp::identity(2)) {
            Ok(a) => a,
            Err(LameError::OddExponent { .. }) => continue,
            Err(e) => return Err(e),
        };
        for kappa in solve_dress_constant(&alg, &template)? {
            let tower = Tower::new(vec![template.degrees.0, template.degrees.1]);
            if tower.dim() == 0 {
                continue;
            }
            let space = DressedSpace::new(tower, template.shape.dress(&kappa))
                .with_prefactors(prefs.clone())
                .with_label(template.label.clone());
            debug_assert!(check_invariance(&alg, &space).invariant);
            out.push(space);
        }
    }
    Ok(out)
}

/// Restriction matrices and spectra over all invariant spaces of a case.
pub fn qes_spectrum_lame(
    c: &CaseConstants,
) -> Result<Vec<(String, RestrictionMatrix, Spectrum)>, LameError> {
    let op = c.operator();
    let mut out = Vec::new();
    for space in invariant_spaces(c)? {
        let alg = op.to_algebraic(&space.prefactors, &MatDiffOp::identity(2))?;
        let report = check_invariance(&alg, &space);
        if !report.invariant {
            return Err(LameError::BadConstants(format!(
                "space {} failed exact invariance ({} residuals): wrong constants",
                space.label,
                report.residuals.len()
            )));
        }
        let r = restriction_matrix(&alg, &space);
        let spec = Spectrum::from_restriction(&r, &space.label);
        out.push((space.label.clone(), r, spec));
    }
    Ok(out)
}

/// One entry of the trigonometric-limit potential, canonicalized as
/// `cos2·cos²(z) + sincos·cos(z)sin(z) + constant` (sin² eliminated via
/// sin² = 1 − cos²).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrigEntry {
    pub cos2: Scalar,
    pub sincos: Scalar,
    pub constant: Scalar,
}

/// The `k → 0` limit of the Type-1 sn·cn family: with `a₁ → −2b`,
/// `a₂ → 2b`, `θ → 2b`, the potential becomes a trigonometric matrix
/// independent of `m`.
pub fn trig_limit_potential(b: &Scalar) -> Vec<Vec<TrigEntry>> {
    let two_b = &Scalar::from_int(2) * b;
    let zero = Scalar::zero;
    // V₁₁ = −2b·sin² + b = 2b·cos² − b; V₂₂ = 2b·sin² − b = −2b·cos² + b;
    // V₁₂ = 2b·sin·cos
    vec![
        vec![
            TrigEntry {
                cos2: two_b.clone(),
                sincos: zero(),
                constant: -b,
            },
            TrigEntry {
                cos2: zero(),
                sincos: two_b.clone(),
                constant: zero(),
            },
        ],
        vec![
            TrigEntry {
                cos2: zero(),
                sincos: two_b.clone(),
                constant: zero(),
            },
            TrigEntry {
                cos2: -&two_b,
                sincos: zero(),
                constant: b.clone(),
            },
        ],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Type 1, m=1, k²=3/5, b=5/2: θ² = 25 − 9 = 16, a fully rational case.
    fn pythagorean() -> CaseConstants {
        case_params(
            Coupling::SnCn,
            1,
            1,
            Scalar::from_ratio(5, 2),
            Scalar::from_ratio(3, 5),
        )
        .unwrap()
    }

    #[test]
    fn pythagorean_constants() {
        let c = pythagorean();
        assert_eq!(c.theta, Scalar::from_int(4));
        // κ₁ = −θ/(2b + k²(1+4m)) = −4/(5+3) = −1/2
        let kappas = c.sncn_kappas();
        assert_eq!(kappas[0], Scalar::from_ratio(-1, 2));
        assert_eq!(kappas[1], Scalar::from_int(2));
        assert_eq!(kappas[2], Scalar::from_ratio(-1, 2));
        assert_eq!(kappas[3], Scalar::from_int(2));
    }

    #[test]
    fn negative_theta_squared_rejected() {
        // m=0, k²=1, b=1/4: θ² = 1/4 − 1 < 0
        assert!(case_params(
            Coupling::SnCn,
            1,
            0,
            Scalar::from_ratio(1, 4),
            Scalar::one(),
        )
        .is_err());
    }

    #[test]
    fn discovery_matches_paper_kappas_type1() {
        let c = pythagorean();
        let spaces = invariant_spaces(&c).unwrap();
        assert_eq!(spaces.len(), 4, "all four Type-1 spaces must survive");
        let want = c.sncn_kappas();
        // V₁: prefactors (sn, cn), dress [[1, −1/2],[0,1]], towers (0, 1)
        let v1 = &spaces[0];
        assert_eq!(v1.label, "V1");
        assert_eq!(v1.prefactors, vec![PrefTag::Sn, PrefTag::Cn]);
        assert_eq!(v1.tower.degrees(), &[0, 1]);
        assert_eq!(
            *v1.dress.get(0, 1),
            DiffOp::mul_by(Poly::constant(want[0].clone()))
        );
        // V₃ carries the linear dress κ₃·x
        let v3 = &spaces[2];
        assert_eq!(v3.label, "V3");
        assert_eq!(
            *v3.dress.get(0, 1),
            DiffOp::mul_by(Poly::monomial(want[2].clone(), 1))
        );
    }

    #[test]
    fn discovery_matches_paper_kappas_type2() {
        // Type 2, m=1, k²=3/5, b=7/2: θ² = 49 − (9/25)·49 = 784/25, θ = 28/5
        let c = case_params(
            Coupling::SnCn,
            2,
            1,
            Scalar::from_ratio(7, 2),
            Scalar::from_ratio(3, 5),
        )
        .unwrap();
        assert_eq!(c.theta, Scalar::from_ratio(28, 5));
        let want = c.sncn_kappas();
        // κ₅ = (k²(4m+3) − 2b)/θ = (21/5 − 7)/(28/5) = −1/2
        assert_eq!(want[0], Scalar::from_ratio(-1, 2));
        let spaces = invariant_spaces(&c).unwrap();
        assert_eq!(spaces.len(), 4, "all four Type-2 spaces must survive");
        assert_eq!(
            *spaces[0].dress.get(0, 1),
            DiffOp::mul_by(Poly::monomial(want[0].clone(), 1))
        );
    }

    #[test]
    fn trig_limit_matches_displayed_matrix() {
        let v = trig_limit_potential(&Scalar::from_ratio(1, 2));
        // [[cos²−1/2, cos·sin],[cos·sin, sin²−1/2]]
        assert_eq!(v[0][0].cos2, Scalar::one());
        assert_eq!(v[0][0].constant, Scalar::from_ratio(-1, 2));
        assert_eq!(v[0][1].sincos, Scalar::one());
        assert_eq!(v[1][1].cos2, Scalar::from_int(-1));
        assert_eq!(v[1][1].constant, Scalar::from_ratio(1, 2));
        // b = 0 gives the zero matrix
        let z = trig_limit_potential(&Scalar::zero());
        assert!(z[0][0].cos2.is_zero() && z[0][1].sincos.is_zero());
        // linearity in b
        let vb = trig_limit_potential(&Scalar::from_int(3));
        assert_eq!(vb[0][0].cos2, Scalar::from_int(6));
    }

    #[test]
    fn m_zero_degenerate_towers() {
        // m=0, Type 1: towers (−1, 0) give a 1×1 restriction for V1/V2 and
        // empty spaces for V3/V4
        let c = case_params(
            Coupling::SnCn,
            1,
            0,
            Scalar::from_int(2),
            Scalar::from_ratio(3, 5),
        )
        .unwrap();
        let spaces = invariant_spaces(&c).unwrap();
        for s in &spaces {
            assert!(s.dim() >= 1);
        }
        let with_dim1 = spaces.iter().filter(|s| s.dim() == 1).count();
        assert!(with_dim1 >= 1, "m=0 keeps at least one 1-dimensional space");
    }
}

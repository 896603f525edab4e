//! The finite-dimensional sl(2) representation, the first-order operator
//! pair `Q₊`, `Q₀`, the unipotent change of basis `P`, and the exact
//! verification suites built on them.
//!
//! Conventions: the representation acts on ℂ^N with basis index `a = 0..N−1`;
//! `j₀ = diag(a − (N−1)/2)`, `j₊` has unit subdiagonal entries (`j₊ e_a =
//! e_{a+1}`), and `j₋ e_a = a(N−a) e_{a−1}`, so all matrix entries stay
//! rational and the brackets `[j₀, j±] = ±j±`, `[j₊, j₋] = 2j₀` hold exactly.

use serde::Serialize;

use crate::algebra::{DiffOp, MatDiffOp, Poly, Rat, Scalar, ScalarMat};
use crate::spaces::{check_invariance, DressedSpace, Tower};

/// The N×N matrices of the standard spin-(N−1)/2 representation.
#[derive(Clone, Debug)]
pub struct Sl2Triple {
    pub j_plus: ScalarMat,
    pub j_zero: ScalarMat,
    pub j_minus: ScalarMat,
}

/// Parameters of the operator realization: matrix size `N`, top tower degree
/// `p`, and the subdiagonal couplings `c₁..c_{N−1}`.
#[derive(Clone, Debug)]
pub struct RepParams {
    pub n: usize,
    pub p: i64,
    pub c: Vec<Scalar>,
}

impl RepParams {
    /// Validates `p ≥ 2(N−1)`, the coupling count, and that every
    /// denominator `p + 2 − 2j − k` of the `P` matrix elements is nonzero.
    pub fn new(n: usize, p: i64, c: Vec<Scalar>) -> Result<Self, String> {
        if n == 0 {
            return Err("N must be ≥ 1".into());
        }
        if c.len() != n - 1 {
            return Err(format!("expected {} couplings, got {}", n - 1, c.len()));
        }
        if p < 2 * (n as i64 - 1) {
            return Err(format!("p = {p} violates p ≥ 2(N−1) = {}", 2 * (n - 1)));
        }
        for j in 1..=n as i64 {
            for i in (j + 1)..=n as i64 {
                for k in 0..(i - j) {
                    if p + 2 - 2 * j - k == 0 {
                        return Err(format!(
                            "vanishing denominator p+2−2j−k at j={j}, k={k}"
                        ));
                    }
                }
            }
        }
        Ok(RepParams { n, p, c })
    }

    /// All couplings equal to a single scalar `c` (the Proposition-2 form).
    pub fn uniform(n: usize, p: i64, c: Scalar) -> Result<Self, String> {
        RepParams::new(n, p, vec![c; n - 1])
    }

    /// The tower `V(N,p) = P(p) ⊕ P(p−2) ⊕ … ⊕ P(p−2N+2)`.
    pub fn tower(&self) -> Tower {
        Tower::new((0..self.n).map(|j| self.p - 2 * j as i64).collect())
    }
}

/// Builds the standard representation; all commutators hold exactly.
pub fn build_rep(n: usize) -> Sl2Triple {
    assert!(n >= 1);
    let half = Scalar::from_ratio(n as i64 - 1, 2);
    let j_zero = ScalarMat::from_fn(n, n, |i, j| {
        if i == j {
            &Scalar::from_int(i as i64) - &half
        } else {
            Scalar::zero()
        }
    });
    let j_plus = ScalarMat::from_fn(n, n, |i, j| {
        if i == j + 1 {
            Scalar::one()
        } else {
            Scalar::zero()
        }
    });
    let j_minus = ScalarMat::from_fn(n, n, |i, j| {
        if j == i + 1 {
            // j₋ e_a = a(N−a) e_{a−1} with a = j
            Scalar::from_int(j as i64 * (n as i64 - j as i64))
        } else {
            Scalar::zero()
        }
    });
    Sl2Triple {
        j_plus,
        j_zero,
        j_minus,
    }
}

/// The diagonal matrix `A = Diag(0,…,N−1) − (p/2)·I`.
pub fn build_a(n: usize, p: i64) -> ScalarMat {
    ScalarMat::from_fn(n, n, |i, j| {
        if i == j {
            &Scalar::from_int(i as i64) - &Scalar::from_ratio(p, 2)
        } else {
            Scalar::zero()
        }
    })
}

/// The subdiagonal coupling matrix `B_{a,b} = c_b δ_{a,b+1}`.
pub fn build_b(params: &RepParams) -> ScalarMat {
    ScalarMat::from_fn(params.n, params.n, |i, j| {
        if i == j + 1 {
            params.c[j].clone()
        } else {
            Scalar::zero()
        }
    })
}

fn const_mat(m: &ScalarMat) -> MatDiffOp {
    MatDiffOp::from_fn(m.rows(), m.cols(), |i, j| {
        DiffOp::mul_by(Poly::constant(m[(i, j)].clone()))
    })
}

/// Constant matrix times the multiplication operator `x`.
fn x_times(m: &ScalarMat) -> MatDiffOp {
    MatDiffOp::from_fn(m.rows(), m.cols(), |i, j| {
        DiffOp::mul_by(Poly::monomial(m[(i, j)].clone(), 1))
    })
}

/// The generators `Q₊ = x²d/dx + 2xA − B` and `Q₀ = x d/dx + A`, together
/// with the matrices `A`, `B`. Checks `[A,B] = B` and `[Q₊,Q₀] = Q₊`
/// exactly before returning.
pub fn build_q(params: &RepParams) -> (MatDiffOp, MatDiffOp, ScalarMat, ScalarMat) {
    let n = params.n;
    let a = build_a(n, params.p);
    let b = build_b(params);
    assert_eq!(a.commutator(&b), b, "[A,B] = B must hold");

    let x2ddx = DiffOp::term(Poly::monomial(Scalar::one(), 2), 1);
    let xddx = DiffOp::term(Poly::x(), 1);

    let q_plus = &(&MatDiffOp::scalar_op(n, &x2ddx) + &x_times(&a.scale(&Scalar::from_int(2))))
        - &const_mat(&b);
    let q_zero = &MatDiffOp::scalar_op(n, &xddx) + &const_mat(&a);

    // weight-one relation: Q₊ is the raising partner of Q₀
    assert_eq!(
        q_zero.commutator(&q_plus),
        q_plus,
        "[Q0,Q+] = Q+ must hold"
    );
    (q_plus, q_zero, a, b)
}

/// The unipotent change of basis with matrix elements
/// `P_ij = (∏_{k=0}^{i−j−1} c_{j+k}/(p+2−2j−k)) · (1/(i−j)!) d^{i−j}/dx^{i−j}`
/// below the diagonal (1-based indices), 1 on the diagonal.
pub fn build_p(params: &RepParams) -> MatDiffOp {
    let n = params.n;
    MatDiffOp::from_fn(n, n, |i0, j0| {
        use std::cmp::Ordering::*;
        match i0.cmp(&j0) {
            Less => DiffOp::zero(),
            Equal => DiffOp::one(),
            Greater => {
                let (i, j) = (i0 as i64 + 1, j0 as i64 + 1);
                let mut coeff = Scalar::one();
                for k in 0..(i - j) {
                    let denom = Scalar::from_int(params.p + 2 - 2 * j - k);
                    coeff = &(&coeff * &params.c[(j + k - 1) as usize]) / &denom;
                }
                let mut fact = Scalar::one();
                for f in 1..=(i - j) {
                    fact = &fact * &Scalar::from_int(f);
                }
                DiffOp::ddx_pow((i - j) as usize).scale(&(&coeff / &fact))
            }
        }
    })
}

/// One named identity check: pass/fail plus the residual operator when it
/// fails.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub identity: String,
    pub pass: bool,
    pub residual: Option<String>,
}

impl IdentityCheck {
    fn from_diff(name: &str, diff: MatDiffOp) -> Self {
        let pass = diff.is_zero();
        IdentityCheck {
            identity: name.to_string(),
            pass,
            residual: if pass { None } else { Some(diff.to_string()) },
        }
    }
}

/// A bundle of identity checks.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<IdentityCheck>,
    pub pass: bool,
}

impl VerifyReport {
    fn new(checks: Vec<IdentityCheck>) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        VerifyReport { checks, pass }
    }
}

/// Verifies the three displayed identities
///
/// * `P⁻¹BP = P⁻¹(Q₊+B)P − (Q₊+B)`
/// * `P⁻¹Q₊P = x²d/dx + 2xA`
/// * `P⁻¹Q₀P = Q₀`
///
/// as exact operator equalities.
pub fn verify_prop1(params: &RepParams) -> VerifyReport {
    let n = params.n;
    let (q_plus, q_zero, a, b) = build_q(params);
    let p = build_p(params);
    let p_inv = p.unipotent_inverse().expect("P is unipotent");
    let conj = |m: &MatDiffOp| &(&p_inv * m) * &p;

    let b_op = const_mat(&b);
    let qb = &q_plus + &b_op;
    let lhs1 = conj(&b_op);
    let rhs1 = &conj(&qb) - &qb;

    let x2ddx = DiffOp::term(Poly::monomial(Scalar::one(), 2), 1);
    let rhs2 = &MatDiffOp::scalar_op(n, &x2ddx) + &x_times(&a.scale(&Scalar::from_int(2)));

    VerifyReport::new(vec![
        IdentityCheck::from_diff("P^-1 B P = P^-1 (Q+ + B) P - (Q+ + B)", &lhs1 - &rhs1),
        IdentityCheck::from_diff("P^-1 Q+ P = x^2 d/dx + 2xA", &conj(&q_plus) - &rhs2),
        IdentityCheck::from_diff("P^-1 Q0 P = Q0", &conj(&q_zero) - &q_zero),
    ])
}

/// Verification mode for the coupling-rigidity proposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Prop2Mode {
    /// Exact invariance with `B = cJ₊`, `W₃ = −c(J₊+J₋)`.
    Sufficiency,
    /// Random single-entry perturbations of `B` and `W₃` must break
    /// invariance.
    NecessityScan,
}

/// Report from [`verify_prop2`].
#[derive(Clone, Debug, Serialize)]
pub struct Prop2Report {
    pub n: usize,
    pub p: i64,
    pub mode: String,
    /// Sufficiency: whether `P⁻¹(W₃+B)P` preserves the tower exactly.
    pub invariant: bool,
    /// Necessity scan: (perturbations tried, perturbations that broke
    /// invariance).
    pub scan: Option<(usize, usize)>,
}

/// Default cap on `N` for the sufficiency mode; the claim is
/// machine-verified up to seven and conjectured beyond, so larger `N`
/// requires `allow_large_n`.
pub const PROP2_DEFAULT_MAX_N: usize = 7;

/// With `B = cJ₊` and `W₃ = −c(J₊+J₋)`, checks that `P⁻¹(W₃+B)P` preserves
/// `V(N,p)`; in scan mode, perturbs single entries and checks invariance
/// breaks.
pub fn verify_prop2(
    n: usize,
    p: i64,
    c: &Scalar,
    mode: Prop2Mode,
    allow_large_n: bool,
    seed: u64,
) -> Result<Prop2Report, String> {
    match mode {
        Prop2Mode::Sufficiency => {
            if n > PROP2_DEFAULT_MAX_N && !allow_large_n {
                return Err(format!(
                    "N = {n} exceeds the verified range (≤ {PROP2_DEFAULT_MAX_N}); pass allow_large_n to override"
                ));
            }
        }
        Prop2Mode::NecessityScan => {
            if n > 3 {
                return Err("necessity scan supports N ≤ 3".into());
            }
        }
    }
    let params = RepParams::uniform(n, p, c.clone())?;
    let triple = build_rep(n);
    // W₃ + B = cJ₊ − c(J₊+J₋) = −cJ₋
    let w3 = (&triple.j_plus + &triple.j_minus).scale(&-c);

    match mode {
        Prop2Mode::Sufficiency => {
            let invariant = prop2_invariance(&params, &build_b(&params), &w3);
            Ok(Prop2Report {
                n,
                p,
                mode: "sufficiency".into(),
                invariant,
                scan: None,
            })
        }
        Prop2Mode::NecessityScan => {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut tried = 0usize;
            let mut broken = 0usize;
            let rand_rat = |rng: &mut rand_chacha::ChaCha8Rng| {
                let num = rng.gen_range(1..=6i64);
                let den = rng.gen_range(1..=4i64);
                let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
                Scalar::from_ratio(sign * num, den)
            };
            // perturb each subdiagonal entry of B (rebuilding P from the
            // perturbed couplings) …
            for b_idx in 0..n - 1 {
                for _ in 0..3 {
                    let delta = rand_rat(&mut rng);
                    let mut cs = vec![c.clone(); n - 1];
                    cs[b_idx] = &cs[b_idx] + &delta;
                    let p_params = RepParams::new(n, p, cs)?;
                    tried += 1;
                    if !prop2_invariance(&p_params, &build_b(&p_params), &w3) {
                        broken += 1;
                    }
                }
            }
            // … and each off-diagonal entry of W₃ (P unchanged).
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    let delta = rand_rat(&mut rng);
                    let mut w = w3.clone();
                    w[(i, j)] = &w[(i, j)] + &delta;
                    tried += 1;
                    if !prop2_invariance(&params, &build_b(&params), &w) {
                        broken += 1;
                    }
                }
            }
            Ok(Prop2Report {
                n,
                p,
                mode: "necessity-scan".into(),
                invariant: false,
                scan: Some((tried, broken)),
            })
        }
    }
}

fn prop2_invariance(params: &RepParams, b: &ScalarMat, w3: &ScalarMat) -> bool {
    let h = const_mat(&(w3 + b));
    let space = DressedSpace::new(params.tower(), build_p(params));
    check_invariance(&h, &space).invariant
}

/// `exp(−xJ₋)` as a matrix of multiplication operators: the nilpotent series
/// `Σ_k (−x)^k J₋^k / k!`, exact in rationals.
pub fn exp_neg_x_jminus(n: usize) -> MatDiffOp {
    let triple = build_rep(n);
    let mut out = MatDiffOp::identity(n);
    let mut power = ScalarMat::identity(n);
    let mut fact = Rat::from(num_bigint::BigInt::from(1));
    for k in 1..n {
        power = &power * &triple.j_minus;
        if power.is_zero() {
            break;
        }
        fact = fact * Rat::from(num_bigint::BigInt::from(k as i64));
        let sign = if k % 2 == 1 { -1 } else { 1 };
        let coeff = &Scalar::from_int(sign) / &Scalar::from_rat(fact.clone());
        let term = MatDiffOp::from_fn(n, n, |i, j| {
            DiffOp::mul_by(Poly::monomial(&power[(i, j)] * &coeff, k))
        });
        out = &out + &term;
    }
    out
}

/// The Clebsch–Gordan change of basis `P_cg = exp(−xJ₋)·P`.
pub fn cg_matrix(params: &RepParams) -> MatDiffOp {
    &exp_neg_x_jminus(params.n) * &build_p(params)
}

/// Verifies the tensor-product decomposition with `μ = (N−p−1)/2`:
///
/// 1. `A = J₀ + μ·I` equals `Diag(0..N−1) − p/2`.
/// 2. Conjugating the tensor sums by `e^{xJ₋}` reproduces the `Q` operators:
///    with the dual triple `K± = −J±`, `K₀ = J₀` (same brackets as the
///    degree realization), `e^{xJ₋}(K_ε + j_ε)e^{−xJ₋}` equals `Q₊`, `Q₀`
///    from [`build_q`] with `c = 1`, and `d/dx·I` for the lowering sum.
/// 3. `P`-conjugation yields `Q̄₊ = x²d/dx + 2xA`, `Q̄₀ = x d/dx + A`,
///    `Q̄₋ = d/dx`.
/// 4. Both `J₋` and `j₋` preserve the dressed space `P·V(N,p)`.
pub fn verify_cg_decomposition(n: usize, p: i64) -> Result<VerifyReport, String> {
    let params = RepParams::uniform(n, p, Scalar::one())?;
    let triple = build_rep(n);
    let mu = Scalar::from_ratio(n as i64 - p - 1, 2);

    let mut checks = Vec::new();

    // (1) A = J₀ + μ·I
    let a = build_a(n, p);
    let j0_shift = &triple.j_zero + &ScalarMat::identity(n).scale(&mu);
    checks.push(IdentityCheck::from_diff(
        "A = J0 + mu*I",
        &const_mat(&a) - &const_mat(&j0_shift),
    ));

    // scalar degree realization with weight μ
    let x2ddx = DiffOp::term(Poly::monomial(Scalar::one(), 2), 1);
    let xddx = DiffOp::term(Poly::x(), 1);
    let j_plus_op = &x2ddx + &DiffOp::mul_by(Poly::monomial(&Scalar::from_int(2) * &mu, 1));
    let j_zero_op = &xddx + &DiffOp::mul_by(Poly::constant(mu.clone()));

    // dual matrix triple: K± = −J±, K₀ = J₀ (this copy obeys the same
    // bracket table as the degree realization, so the sums close)
    let k_plus = -&triple.j_plus;

    let sum_plus = &MatDiffOp::scalar_op(n, &j_plus_op) + &const_mat(&k_plus);
    let sum_zero = &MatDiffOp::scalar_op(n, &j_zero_op) + &const_mat(&triple.j_zero);
    let sum_minus = &MatDiffOp::scalar_op(n, &DiffOp::ddx()) + &const_mat(&triple.j_minus);

    let e_neg = exp_neg_x_jminus(n);
    let e_pos = e_neg.unipotent_inverse().expect("exp(−xJ₋) is unipotent");
    let conj_e = |m: &MatDiffOp| &(&e_pos * m) * &e_neg;

    let (q_plus, q_zero, _, _) = build_q(&params);
    checks.push(IdentityCheck::from_diff(
        "e^{xJ-} (K+ + j+) e^{-xJ-} = Q+",
        &conj_e(&sum_plus) - &q_plus,
    ));
    checks.push(IdentityCheck::from_diff(
        "e^{xJ-} (K0 + j0) e^{-xJ-} = Q0",
        &conj_e(&sum_zero) - &q_zero,
    ));
    checks.push(IdentityCheck::from_diff(
        "e^{xJ-} (J- + j-) e^{-xJ-} = d/dx",
        &conj_e(&sum_minus) - &MatDiffOp::scalar_op(n, &DiffOp::ddx()),
    ));

    // (3) P-conjugated forms
    let p_op = build_p(&params);
    let p_inv = p_op.unipotent_inverse().expect("P is unipotent");
    let conj_p = |m: &MatDiffOp| &(&p_inv * m) * &p_op;
    let qbar_plus =
        &MatDiffOp::scalar_op(n, &x2ddx) + &x_times(&a.scale(&Scalar::from_int(2)));
    let qbar_zero = &MatDiffOp::scalar_op(n, &xddx) + &const_mat(&a);
    checks.push(IdentityCheck::from_diff(
        "P^-1 Q+ P = x^2 d/dx + 2xA",
        &conj_p(&q_plus) - &qbar_plus,
    ));
    checks.push(IdentityCheck::from_diff(
        "P^-1 Q0 P = x d/dx + A",
        &conj_p(&q_zero) - &qbar_zero,
    ));
    checks.push(IdentityCheck::from_diff(
        "P^-1 (d/dx) P = d/dx",
        &conj_p(&MatDiffOp::scalar_op(n, &DiffOp::ddx()))
            - &MatDiffOp::scalar_op(n, &DiffOp::ddx()),
    ));

    // (4) J₋ and j₋ preserve the dressed space P·V(N,p)
    let space = DressedSpace::new(params.tower(), p_op.clone());
    let jm_inv = check_invariance(&const_mat(&triple.j_minus), &space).invariant;
    let dx_inv =
        check_invariance(&MatDiffOp::scalar_op(n, &DiffOp::ddx()), &space).invariant;
    checks.push(IdentityCheck {
        identity: "J- preserves P·V(N,p)".into(),
        pass: jm_inv,
        residual: None,
    });
    checks.push(IdentityCheck {
        identity: "j- preserves P·V(N,p)".into(),
        pass: dx_inv,
        residual: None,
    });

    Ok(VerifyReport::new(checks))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn commutator_identities_hold(n: usize) {
        let t = build_rep(n);
        assert_eq!(t.j_zero.commutator(&t.j_plus), t.j_plus, "N={n}");
        assert_eq!(
            t.j_zero.commutator(&t.j_minus),
            (&t.j_minus).scale(&Scalar::from_int(-1)),
            "N={n}"
        );
        assert_eq!(
            t.j_plus.commutator(&t.j_minus),
            t.j_zero.scale(&Scalar::from_int(2)),
            "N={n}"
        );
    }

    #[test]
    fn rep_commutators_up_to_12() {
        for n in 1..=12 {
            commutator_identities_hold(n);
        }
    }

    #[test]
    fn rep_small_cases() {
        let t1 = build_rep(1);
        assert!(t1.j_plus.is_zero() && t1.j_minus.is_zero() && t1.j_zero.is_zero());

        let t2 = build_rep(2);
        assert_eq!(t2.j_zero[(0, 0)], Scalar::from_ratio(-1, 2));
        assert_eq!(t2.j_zero[(1, 1)], Scalar::from_ratio(1, 2));
        assert_eq!(t2.j_plus[(1, 0)], Scalar::one());
        assert_eq!(t2.j_minus[(0, 1)], Scalar::one());
        let comm = t2.j_plus.commutator(&t2.j_minus);
        assert_eq!(comm[(0, 0)], Scalar::from_int(-1));
        assert_eq!(comm[(1, 1)], Scalar::from_int(1));

        let t3 = build_rep(3);
        let comm = t3.j_plus.commutator(&t3.j_minus);
        assert_eq!(
            comm,
            ScalarMat::diagonal(&[
                Scalar::from_int(-2),
                Scalar::zero(),
                Scalar::from_int(2)
            ])
        );
    }

    #[test]
    fn q_operators_scalar_case() {
        // N=1: Q₊ = x²d/dx − p·x, Q₀ = x d/dx − p/2; both preserve P(p)
        let p = 5i64;
        let params = RepParams::new(1, p, vec![]).unwrap();
        let (q_plus, q_zero, _, _) = build_q(&params);
        let s = DressedSpace::plain(Tower::new(vec![p]));
        assert!(check_invariance(&q_plus, &s).invariant);
        assert!(check_invariance(&q_zero, &s).invariant);
    }

    #[test]
    fn p_matrix_elements() {
        // N=2: P₂₁ = (c₁/p) d/dx
        let params = RepParams::new(2, 4, vec![Scalar::from_int(3)]).unwrap();
        let p = build_p(&params);
        assert_eq!(
            *p.get(1, 0),
            DiffOp::ddx().scale(&Scalar::from_ratio(3, 4))
        );

        // N=3, p=6, c=(1,1): P₃₁ = (1/(6·5))·(1/2!) d²/dx²
        let params = RepParams::new(3, 6, vec![Scalar::one(), Scalar::one()]).unwrap();
        let p = build_p(&params);
        assert_eq!(
            *p.get(2, 0),
            DiffOp::ddx_pow(2).scale(&Scalar::from_ratio(1, 60))
        );

        // N=1: P = (1)
        let params = RepParams::new(1, 0, vec![]).unwrap();
        assert!(build_p(&params).is_identity());
    }

    #[test]
    fn p_inverse_roundtrip() {
        let params =
            RepParams::new(4, 9, vec![Scalar::one(), Scalar::one(), Scalar::one()]).unwrap();
        let p = build_p(&params);
        let inv = p.unipotent_inverse().unwrap();
        assert!((&p * &inv).is_identity());
        assert!((&inv * &p).is_identity());
    }

    #[test]
    fn prop1_small_cases() {
        assert!(verify_prop1(&RepParams::new(1, 3, vec![]).unwrap()).pass);
        assert!(verify_prop1(&RepParams::new(2, 4, vec![Scalar::one()]).unwrap()).pass);
        let params = RepParams::new(
            3,
            7,
            vec![Scalar::from_int(1), Scalar::from_int(2)],
        )
        .unwrap();
        assert!(verify_prop1(&params).pass);
    }

    #[test]
    fn prop1_larger_random() {
        let params = RepParams::new(
            6,
            12,
            vec![
                Scalar::from_ratio(2, 3),
                Scalar::from_int(1),
                Scalar::from_ratio(-5, 2),
                Scalar::from_int(4),
                Scalar::from_ratio(7, 5),
            ],
        )
        .unwrap();
        assert!(verify_prop1(&params).pass);
    }

    #[test]
    fn q_commutator_n3() {
        let params = RepParams::new(3, 7, vec![Scalar::from_int(1), Scalar::from_int(2)])
            .unwrap();
        let (q_plus, q_zero, _, _) = build_q(&params);
        assert_eq!(q_zero.commutator(&q_plus), q_plus);
    }

    #[test]
    fn prop2_sufficiency_and_counterexample() {
        let rep = verify_prop2(2, 4, &Scalar::one(), Prop2Mode::Sufficiency, false, 0).unwrap();
        assert!(rep.invariant);

        // B₂₁ perturbed to c+1 with W₃ unchanged breaks invariance
        let params = RepParams::new(2, 4, vec![Scalar::from_int(2)]).unwrap();
        let triple = build_rep(2);
        let w3 = (&triple.j_plus + &triple.j_minus).scale(&Scalar::from_int(-1));
        assert!(!prop2_invariance(&params, &build_b(&params), &w3));
    }

    #[test]
    fn prop2_rejects_oversized_n() {
        assert!(verify_prop2(8, 14, &Scalar::one(), Prop2Mode::Sufficiency, false, 0).is_err());
    }

    #[test]
    fn exp_matrix_n2() {
        // exp(−xJ₋) = [[1, −x],[0, 1]]
        let e = exp_neg_x_jminus(2);
        assert_eq!(*e.get(0, 0), DiffOp::one());
        assert_eq!(
            *e.get(0, 1),
            DiffOp::mul_by(Poly::monomial(Scalar::from_int(-1), 1))
        );
        assert_eq!(*e.get(1, 0), DiffOp::zero());
    }

    #[test]
    fn cg_identity_for_n1() {
        let params = RepParams::new(1, 4, vec![]).unwrap();
        assert!(cg_matrix(&params).is_identity());
        assert!(verify_cg_decomposition(1, 4).unwrap().pass);
    }

    #[test]
    fn cg_decomposition_passes() {
        assert!(verify_cg_decomposition(2, 4).unwrap().pass);
        assert!(verify_cg_decomposition(3, 8).unwrap().pass);
    }
}

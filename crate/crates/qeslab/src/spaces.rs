//! Dressed polynomial vector spaces and exact invariance checking.
//!
//! The spaces under study are towers `P(n₁) ⊕ … ⊕ P(n_N)` of polynomial
//! components, moved by a unipotent triangular operator matrix (the "dress")
//! and tagged with optional Jacobi-function scalar prefactors per component.
//! Invariance of an operator matrix `H` is decided by conjugating,
//! `G = dress⁻¹ ∘ H ∘ dress`, and applying `G` to every tower basis vector:
//! any coefficient that lands outside the tower is an exact residual. When
//! no residual exists, the restriction matrix collects the tower coordinates
//! of the images and its eigenvalues are the algebraic levels.

use serde::Serialize;

use crate::algebra::{MatDiffOp, Poly, Scalar, ScalarMat};
use crate::elliptic::PrefTag;

/// A direct sum of polynomial spaces of bounded degree. A component with
/// degree −1 denotes the zero space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tower {
    degrees: Vec<i64>,
}

impl Tower {
    pub fn new(degrees: Vec<i64>) -> Self {
        assert!(!degrees.is_empty(), "tower needs at least one component");
        assert!(
            degrees.iter().all(|&d| d >= -1),
            "tower degrees must be ≥ −1"
        );
        Tower { degrees }
    }

    pub fn components(&self) -> usize {
        self.degrees.len()
    }

    pub fn degree(&self, comp: usize) -> i64 {
        self.degrees[comp]
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    /// Total dimension `Σ (nᵢ + 1)` over non-empty components.
    pub fn dim(&self) -> usize {
        self.degrees
            .iter()
            .map(|&d| if d >= 0 { (d + 1) as usize } else { 0 })
            .sum()
    }

    /// Fixed basis enumeration: component-major, degree-minor.
    pub fn basis(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.dim());
        for (comp, &d) in self.degrees.iter().enumerate() {
            for m in 0..=d {
                if m >= 0 {
                    out.push((comp, m as usize));
                }
            }
        }
        out
    }

    /// The basis vector `e_comp · x^m` as a polynomial vector.
    pub fn basis_vector(&self, comp: usize, m: usize) -> Vec<Poly> {
        let mut v = vec![Poly::zero(); self.components()];
        v[comp] = Poly::monomial(Scalar::one(), m);
        v
    }

    /// Whether a polynomial vector lies degreewise inside the tower.
    pub fn contains(&self, v: &[Poly]) -> bool {
        assert_eq!(v.len(), self.components(), "component count mismatch");
        v.iter().zip(&self.degrees).all(|(p, &d)| match p.degree() {
            None => true,
            Some(deg) => d >= 0 && (deg as i64) <= d,
        })
    }
}

/// A tower dressed by an invertible unipotent matrix operator, with optional
/// Jacobi scalar prefactors per component (inert for the algebra; used only
/// when reconstructing physical eigenfunctions).
#[derive(Clone, Debug)]
pub struct DressedSpace {
    pub tower: Tower,
    pub dress: MatDiffOp,
    pub prefactors: Vec<PrefTag>,
    pub label: String,
}

impl DressedSpace {
    pub fn new(tower: Tower, dress: MatDiffOp) -> Self {
        let n = tower.components();
        assert_eq!(dress.rows(), n, "dress shape mismatch");
        assert_eq!(dress.cols(), n, "dress shape mismatch");
        DressedSpace {
            tower,
            dress,
            prefactors: vec![PrefTag::One; n],
            label: String::new(),
        }
    }

    /// Undressed tower (identity dress).
    pub fn plain(tower: Tower) -> Self {
        let n = tower.components();
        DressedSpace::new(tower, MatDiffOp::identity(n))
    }

    pub fn with_prefactors(mut self, prefactors: Vec<PrefTag>) -> Self {
        assert_eq!(prefactors.len(), self.tower.components());
        self.prefactors = prefactors;
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.tower.dim()
    }

    fn conjugated(&self, h: &MatDiffOp) -> MatDiffOp {
        let inv = self
            .dress
            .unipotent_inverse()
            .expect("dress must be unipotent");
        &(&inv * h) * &self.dress
    }
}

/// One offending coefficient from an invariance check: applying the
/// conjugated operator to basis element `basis_index` produced `coeff·x^degree`
/// in component `component`, outside that component's degree bound.
#[derive(Clone, Debug, Serialize)]
pub struct Residual {
    pub basis_index: usize,
    pub component: usize,
    pub degree: usize,
    pub coeff: Scalar,
}

/// Exact invariance verdict with residual localization.
#[derive(Clone, Debug, Serialize)]
pub struct InvarianceReport {
    pub invariant: bool,
    pub residuals: Vec<Residual>,
}

/// Decides `H·S ⊆ S` exactly. `H` must be square with dimension equal to the
/// component count of `S`.
pub fn check_invariance(h: &MatDiffOp, s: &DressedSpace) -> InvarianceReport {
    assert_eq!(h.rows(), h.cols(), "operator must be square");
    assert_eq!(
        h.rows(),
        s.tower.components(),
        "operator dimension must match component count"
    );
    let g = s.conjugated(h);
    let mut residuals = Vec::new();
    for (idx, (comp, m)) in s.tower.basis().into_iter().enumerate() {
        let image = g.apply_vec(&s.tower.basis_vector(comp, m));
        for (i, p) in image.iter().enumerate() {
            let bound = s.tower.degree(i);
            for (deg, c) in p.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if bound < 0 || (deg as i64) > bound {
                    residuals.push(Residual {
                        basis_index: idx,
                        component: i,
                        degree: deg,
                        coeff: c.clone(),
                    });
                }
            }
        }
    }
    InvarianceReport {
        invariant: residuals.is_empty(),
        residuals,
    }
}

/// The finite matrix of `H` restricted to the dressed space, in the fixed
/// component-major/degree-minor basis. Column `j` holds the tower coordinates
/// of the conjugated operator applied to basis element `j`.
#[derive(Clone, Debug)]
pub struct RestrictionMatrix {
    pub dim: usize,
    pub basis: Vec<(usize, usize)>,
    entries: ScalarMat,
}

impl RestrictionMatrix {
    pub fn entry(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[(i, j)]
    }

    pub fn matrix(&self) -> &ScalarMat {
        &self.entries
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        self.entries.to_f64()
    }

    /// Serializes as `{dim, basis, entries}` with exact scalars.
    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<Vec<serde_json::Value>> = (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| serde_json::to_value(self.entry(i, j)).unwrap())
                    .collect()
            })
            .collect();
        serde_json::json!({
            "dim": self.dim,
            "basis": self.basis,
            "entries": entries,
        })
    }
}

/// Computes the restriction matrix; panics if the space is not invariant
/// (callers are expected to have checked, or to rely on the guard).
pub fn restriction_matrix(h: &MatDiffOp, s: &DressedSpace) -> RestrictionMatrix {
    let report = check_invariance(h, s);
    assert!(
        report.invariant,
        "restriction matrix requested for a non-invariant pair ({} residuals)",
        report.residuals.len()
    );
    let g = s.conjugated(h);
    let basis = s.tower.basis();
    let dim = basis.len();
    let index_of = |comp: usize, deg: usize| -> usize {
        basis
            .iter()
            .position(|&(c, m)| c == comp && m == deg)
            .expect("coordinate inside tower")
    };
    let mut entries = ScalarMat::zero(dim.max(1), dim.max(1));
    for (j, &(comp, m)) in basis.iter().enumerate() {
        let image = g.apply_vec(&s.tower.basis_vector(comp, m));
        for (i, p) in image.iter().enumerate() {
            for (deg, c) in p.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                entries[(index_of(i, deg), j)] = c.clone();
            }
        }
    }
    RestrictionMatrix { dim, basis, entries }
}

/// Residuals of `H` on `S` as a *fixed-length* dense vector: for every basis
/// element and component, the image coefficients from degree `bound+1` up to
/// `max_deg`. The layout depends only on the tower and `max_deg`, so results
/// from different operators can be combined linearly (the basis of the
/// affine constraint solvers). Panics if an image exceeds `max_deg`.
pub fn dense_residuals(h: &MatDiffOp, s: &DressedSpace, max_deg: usize) -> Vec<Scalar> {
    assert_eq!(h.rows(), h.cols(), "operator must be square");
    assert_eq!(h.rows(), s.tower.components());
    let g = s.conjugated(h);
    let mut out = Vec::new();
    for (comp, m) in s.tower.basis() {
        let image = g.apply_vec(&s.tower.basis_vector(comp, m));
        for (i, p) in image.iter().enumerate() {
            if let Some(d) = p.degree() {
                assert!(d <= max_deg, "image degree {d} exceeds max_deg {max_deg}");
            }
            let bound = s.tower.degree(i);
            let start = (bound + 1).max(0) as usize;
            for deg in start..=max_deg {
                out.push(p.coeff(deg));
            }
        }
    }
    out
}

/// Membership test: `v ∈ dress·tower`, i.e. `dress⁻¹·v` lies in the tower.
pub fn membership(v: &[Poly], s: &DressedSpace) -> bool {
    assert_eq!(v.len(), s.tower.components(), "component count mismatch");
    let inv = s
        .dress
        .unipotent_inverse()
        .expect("dress must be unipotent");
    s.tower.contains(&inv.apply_vec(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::DiffOp;

    fn xddx() -> DiffOp {
        DiffOp::term(Poly::x(), 1)
    }

    #[test]
    fn euler_operator_is_invariant_and_diagonal() {
        let s = DressedSpace::plain(Tower::new(vec![2]));
        let h = MatDiffOp::scalar_op(1, &xddx());
        assert!(check_invariance(&h, &s).invariant);
        let r = restriction_matrix(&h, &s);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j {
                    Scalar::from_int(i as i64)
                } else {
                    Scalar::zero()
                };
                assert_eq!(*r.entry(i, j), want);
            }
        }
    }

    #[test]
    fn multiplication_by_x_escapes() {
        let s = DressedSpace::plain(Tower::new(vec![2]));
        let h = MatDiffOp::scalar_op(1, &DiffOp::mul_by(Poly::x()));
        let report = check_invariance(&h, &s);
        assert!(!report.invariant);
        // the escaping image is x·x² = x³
        assert!(report
            .residuals
            .iter()
            .any(|r| r.component == 0 && r.degree == 3));
    }

    #[test]
    fn scalar_q0_restriction_is_the_weight_ladder() {
        // Q₀ = x d/dx + A with A = −p/2 on P(p): diag(−p/2, 1−p/2, …, p/2)
        let p = 4i64;
        let a = Scalar::from_ratio(-p, 2);
        let h = MatDiffOp::scalar_op(1, &(&xddx() + &DiffOp::mul_by(Poly::constant(a))));
        let s = DressedSpace::plain(Tower::new(vec![p]));
        let r = restriction_matrix(&h, &s);
        for m in 0..=p as usize {
            assert_eq!(
                *r.entry(m, m),
                &Scalar::from_int(m as i64) + &Scalar::from_ratio(-p, 2)
            );
        }
    }

    #[test]
    fn membership_and_zero_vector() {
        let mut dress = MatDiffOp::identity(2);
        dress.set(0, 1, DiffOp::mul_by(Poly::from_ints(&[0, 3])));
        let s = DressedSpace::new(Tower::new(vec![2, 1]), dress.clone());

        let zero = vec![Poly::zero(), Poly::zero()];
        assert!(membership(&zero, &s));

        // v = dress·(x², 0) is a member
        let v = dress.apply_vec(&[Poly::from_ints(&[0, 0, 1]), Poly::zero()]);
        assert!(membership(&v, &s));

        // degree n₁+1 in the first component with trivial dress is not
        let s_plain = DressedSpace::plain(Tower::new(vec![2, 1]));
        let w = vec![Poly::from_ints(&[0, 0, 0, 1]), Poly::zero()];
        assert!(!membership(&w, &s_plain));
    }

    #[test]
    fn empty_component_forces_zero() {
        // tower (−1, 0): first component must stay identically zero
        let s = DressedSpace::plain(Tower::new(vec![-1, 0]));
        assert_eq!(s.dim(), 1);
        // H swaps components: sends e₂ into component 1 ⇒ residual
        let mut h = MatDiffOp::zero(2, 2);
        h.set(0, 1, DiffOp::one());
        let report = check_invariance(&h, &s);
        assert!(!report.invariant);
    }
}

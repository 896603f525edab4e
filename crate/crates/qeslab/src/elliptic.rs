//! Jacobi elliptic functions, the complete elliptic integral of the first
//! kind, and the symbolic prefactor table that drives the `x = sn²` change
//! of variable.
//!
//! Numerics use the descending Landen transformation backed by the
//! arithmetic–geometric mean; the modulus `k` is the API parameter, the
//! internal recursions work with `m = k²`. The symbolic side takes `k²` as
//! an exact scalar so the operator algebra stays rational.

use serde::Serialize;

use crate::algebra::{Poly, Scalar};

/// Values of sn, cn, dn at one argument and modulus.
#[derive(Clone, Copy, Debug)]
pub struct JacobiTriple {
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
}

/// Scalar prefactor tags: exactly the products of Jacobi functions for which
/// `f″/f` and `(sn·cn·dn)·f′/f` are polynomials in `x = sn²`. This set is
/// closed; no other single function works.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum PrefTag {
    One,
    Sn,
    Cn,
    Dn,
    CnDn,
    SnDn,
    SnCn,
    SnCnDn,
}

impl PrefTag {
    pub const ALL: [PrefTag; 8] = [
        PrefTag::One,
        PrefTag::Sn,
        PrefTag::Cn,
        PrefTag::Dn,
        PrefTag::CnDn,
        PrefTag::SnDn,
        PrefTag::SnCn,
        PrefTag::SnCnDn,
    ];

    /// Exponents (α₁, α₂, α₃) of sn, cn, dn in the product.
    pub fn exponents(self) -> (i64, i64, i64) {
        match self {
            PrefTag::One => (0, 0, 0),
            PrefTag::Sn => (1, 0, 0),
            PrefTag::Cn => (0, 1, 0),
            PrefTag::Dn => (0, 0, 1),
            PrefTag::CnDn => (0, 1, 1),
            PrefTag::SnDn => (1, 0, 1),
            PrefTag::SnCn => (1, 1, 0),
            PrefTag::SnCnDn => (1, 1, 1),
        }
    }

    pub fn from_exponents(e: (i64, i64, i64)) -> Option<PrefTag> {
        PrefTag::ALL.into_iter().find(|t| t.exponents() == e)
    }

    /// Numerical value of the product at the given Jacobi triple.
    pub fn eval(self, j: &JacobiTriple) -> f64 {
        let (a1, a2, a3) = self.exponents();
        j.sn.powi(a1 as i32) * j.cn.powi(a2 as i32) * j.dn.powi(a3 as i32)
    }

    pub fn name(self) -> &'static str {
        match self {
            PrefTag::One => "1",
            PrefTag::Sn => "sn",
            PrefTag::Cn => "cn",
            PrefTag::Dn => "dn",
            PrefTag::CnDn => "cn·dn",
            PrefTag::SnDn => "sn·dn",
            PrefTag::SnCn => "sn·cn",
            PrefTag::SnCnDn => "sn·cn·dn",
        }
    }
}

/// The pair of polynomials (in `x = sn²`) attached to a prefactor `f`:
/// `f_ratio = f″/f` and `drift = (sn·cn·dn)·f′/f`. Both have degree ≤ 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TablePair {
    pub f_ratio: Poly,
    pub drift: Poly,
}

/// The hard-coded prefactor table.
///
/// Row layout, with `k² = k2`:
///
/// | f        | f″/f             | (sn cn dn) f′/f            |
/// |----------|------------------|----------------------------|
/// | 1        | 0                | 0                          |
/// | sn       | 2k²x − (1+k²)    | k²x² − (1+k²)x + 1         |
/// | cn       | 2k²x − 1         | k²x² − x                   |
/// | dn       | 2k²x − k²        | k²x² − k²x                 |
/// | cn dn    | 6k²x − (1+k²)    | 2k²x² − (1+k²)x            |
/// | sn dn    | 6k²x − (1+4k²)   | 2k²x² − (1+2k²)x + 1       |
/// | sn cn    | 6k²x − (4+k²)    | 2k²x² − (2+k²)x + 1        |
/// | sn cn dn | 12k²x − 4(1+k²)  | 3k²x² − 2(1+k²)x + 1       |
pub fn appendix_table(tag: PrefTag, k2: &Scalar) -> TablePair {
    let one = Scalar::one;
    let int = Scalar::from_int;
    let poly = |c0: Scalar, c1: Scalar, c2: Scalar| Poly::from_coeffs(vec![c0, c1, c2]);
    let z = Scalar::zero;
    let k2p1 = &one() + k2; // 1 + k²
    match tag {
        PrefTag::One => TablePair {
            f_ratio: Poly::zero(),
            drift: Poly::zero(),
        },
        PrefTag::Sn => TablePair {
            f_ratio: poly(-&k2p1, k2 * &int(2), z()),
            drift: poly(one(), -&k2p1, k2.clone()),
        },
        PrefTag::Cn => TablePair {
            f_ratio: poly(-one(), k2 * &int(2), z()),
            drift: poly(z(), -one(), k2.clone()),
        },
        PrefTag::Dn => TablePair {
            f_ratio: poly(-k2, k2 * &int(2), z()),
            drift: poly(z(), -k2, k2.clone()),
        },
        PrefTag::CnDn => TablePair {
            f_ratio: poly(-&k2p1, k2 * &int(6), z()),
            drift: poly(z(), -&k2p1, k2 * &int(2)),
        },
        PrefTag::SnDn => TablePair {
            f_ratio: poly(-&(&one() + &(k2 * &int(4))), k2 * &int(6), z()),
            drift: poly(one(), -&(&one() + &(k2 * &int(2))), k2 * &int(2)),
        },
        PrefTag::SnCn => TablePair {
            f_ratio: poly(-&(&int(4) + k2), k2 * &int(6), z()),
            drift: poly(one(), -&(&int(2) + k2), k2 * &int(2)),
        },
        PrefTag::SnCnDn => TablePair {
            f_ratio: poly(&int(-4) * &k2p1, k2 * &int(12), z()),
            drift: poly(one(), &int(-2) * &k2p1, k2 * &int(3)),
        },
    }
}

/// Re-derives a table row from the derivative identities
/// `sn′ = cn·dn`, `cn′ = −sn·dn`, `dn′ = −k²·sn·cn` and the reductions
/// `sn² = x`, `cn² = 1 − x`, `dn² = 1 − k²x`. Independent of the hard-coded
/// rows; the two must agree exactly.
pub fn derive_table_row(tag: PrefTag, k2: &Scalar) -> TablePair {
    let (a1, a2, a3) = tag.exponents();
    let a1 = Scalar::from_int(a1);
    let a2 = Scalar::from_int(a2);
    let a3 = Scalar::from_int(a3);

    let x = Poly::x();
    let one = Poly::one();
    let sn2 = x.clone();
    let cn2 = &one - &x;
    let dn2 = &one - &Poly::monomial(k2.clone(), 1);

    // (sn cn dn) f′/f = α₁ cn²dn² − α₂ sn²dn² − α₃ k² sn²cn²
    let drift = &(&(&cn2 * &dn2).scale(&a1) - &(&sn2 * &dn2).scale(&a2))
        - &(&sn2 * &cn2).scale(&(&a3 * k2));

    // f″/f for exponents in {0,1}:
    //   α₁(−dn² − k²cn²) + α₂(k²sn² − dn²) + α₃ k²(sn² − cn²)
    //   − 2α₁α₂ dn² − 2α₁α₃ k²cn² + 2α₂α₃ k²sn²
    let k2p = |p: &Poly| p.scale(k2);
    let two = Scalar::from_int(2);
    let term1 = (&(-&dn2) - &k2p(&cn2)).scale(&a1);
    let term2 = (&k2p(&sn2) - &dn2).scale(&a2);
    let term3 = k2p(&(&sn2 - &cn2)).scale(&a3);
    let cross12 = dn2.scale(&(&(&a1 * &a2) * &two));
    let cross13 = k2p(&cn2).scale(&(&(&a1 * &a3) * &two));
    let cross23 = k2p(&sn2).scale(&(&(&a2 * &a3) * &two));
    let f_ratio = &(&(&(&term1 + &term2) + &term3) - &(&cross12 + &cross13)) + &cross23;

    TablePair { f_ratio, drift }
}

/// Complete elliptic integral of the first kind `K(k)` by the
/// arithmetic–geometric mean. Panics for `k ∉ [0, 1)` (`K(1)` diverges).
pub fn complete_k(k: f64) -> f64 {
    assert!(
        (0.0..1.0).contains(&k),
        "complete_k requires 0 ≤ k < 1 (K diverges at k = 1), got {k}"
    );
    let mut a = 1.0f64;
    let mut b = (1.0 - k) .sqrt() * (1.0 + k).sqrt();
    for _ in 0..60 {
        if (a - b).abs() <= f64::EPSILON * a {
            break;
        }
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
    }
    std::f64::consts::FRAC_PI_2 / a
}

/// Jacobi elliptic functions sn, cn, dn of real argument `z` and modulus
/// `k ∈ [0, 1]`, by the descending Landen transformation. The hyperbolic
/// closed forms take over within `1e−10` of `k = 1`.
pub fn jacobi(z: f64, k: f64) -> JacobiTriple {
    assert!(
        (0.0..=1.0).contains(&k),
        "jacobi requires 0 ≤ k ≤ 1, got {k}"
    );
    assert!(z.is_finite(), "jacobi requires finite argument");

    if 1.0 - k < 1e-10 {
        let sech = 1.0 / z.cosh();
        return JacobiTriple {
            sn: z.tanh(),
            cn: sech,
            dn: sech,
        };
    }
    if k == 0.0 {
        return JacobiTriple {
            sn: z.sin(),
            cn: z.cos(),
            dn: 1.0,
        };
    }

    // descending Landen: a₀ = 1, b₀ = k′, cₙ₊₁ = (aₙ−bₙ)/2
    let kp = (1.0 - k).sqrt() * (1.0 + k).sqrt();
    let mut a = vec![1.0f64];
    let mut c = vec![k];
    let mut b = kp;
    while c.last().unwrap().abs() > f64::EPSILON * a.last().unwrap() {
        let (an, bn) = (*a.last().unwrap(), b);
        a.push(0.5 * (an + bn));
        c.push(0.5 * (an - bn));
        b = (an * bn).sqrt();
        if a.len() > 60 {
            break;
        }
    }

    let n = a.len() - 1;
    let mut phi = (1u64 << n) as f64 * a[n] * z;
    for i in (1..=n).rev() {
        let s = (c[i] / a[i] * phi.sin()).clamp(-1.0, 1.0);
        phi = 0.5 * (phi + s.asin());
    }
    let sn = phi.sin();
    let cn = phi.cos();
    // dn² = k′² + k²cn² avoids the cancellation in 1 − k²sn² near k = 1
    let dn = (kp * kp + k * k * cn * cn).sqrt();
    JacobiTriple { sn, cn, dn }
}

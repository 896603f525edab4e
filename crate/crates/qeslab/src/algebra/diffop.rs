//! Scalar differential operators `Σ_k p_k(x) d^k/dx^k` with polynomial
//! coefficients, in normal form (no zero coefficient stored for any order).
//!
//! Composition expands by the Leibniz rule, so normal-form equality is a
//! complete decision procedure for operator equality.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::poly::Poly;
use super::scalar::Scalar;

#[derive(Clone, PartialEq, Eq)]
pub struct DiffOp {
    terms: BTreeMap<usize, Poly>,
}

impl DiffOp {
    pub fn zero() -> Self {
        DiffOp {
            terms: BTreeMap::new(),
        }
    }

    /// The identity operator (multiplication by 1).
    pub fn one() -> Self {
        DiffOp::mul_by(Poly::one())
    }

    /// Multiplication by a polynomial (order-0 operator).
    pub fn mul_by(p: Poly) -> Self {
        DiffOp::term(p, 0)
    }

    /// `d/dx`.
    pub fn ddx() -> Self {
        DiffOp::term(Poly::one(), 1)
    }

    /// `d^k/dx^k`.
    pub fn ddx_pow(k: usize) -> Self {
        DiffOp::term(Poly::one(), k)
    }

    /// Single term `p(x) d^k/dx^k`.
    pub fn term(p: Poly, k: usize) -> Self {
        let mut terms = BTreeMap::new();
        if !p.is_zero() {
            terms.insert(k, p);
        }
        DiffOp { terms }
    }

    pub fn from_terms(pairs: impl IntoIterator<Item = (usize, Poly)>) -> Self {
        let mut op = DiffOp::zero();
        for (k, p) in pairs {
            op.add_term(k, p);
        }
        op
    }

    fn add_term(&mut self, k: usize, p: Poly) {
        if p.is_zero() {
            return;
        }
        let entry = self.terms.entry(k).or_insert_with(Poly::zero);
        *entry = &*entry + &p;
        if entry.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest derivative order present, or `None` for the zero operator.
    pub fn order(&self) -> Option<usize> {
        self.terms.keys().next_back().copied()
    }

    /// Coefficient polynomial of `d^k/dx^k`.
    pub fn coeff(&self, k: usize) -> Poly {
        self.terms.get(&k).cloned().unwrap_or_else(Poly::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &Poly)> {
        self.terms.iter().map(|(&k, p)| (k, p))
    }

    pub fn scale(&self, c: &Scalar) -> DiffOp {
        if c.is_zero() {
            return DiffOp::zero();
        }
        DiffOp {
            terms: self
                .terms
                .iter()
                .map(|(&k, p)| (k, p.scale(c)))
                .collect(),
        }
    }

    /// Left-multiplies every term by a polynomial: `q(x)·D`.
    pub fn premul_poly(&self, q: &Poly) -> DiffOp {
        let mut op = DiffOp::zero();
        for (&k, p) in &self.terms {
            op.add_term(k, q * p);
        }
        op
    }

    /// Applies the operator to a polynomial: `Σ p_k · q^{(k)}`.
    pub fn apply(&self, q: &Poly) -> Poly {
        let mut acc = Poly::zero();
        for (&k, p) in &self.terms {
            let dq = q.derivative_n(k);
            if dq.is_zero() {
                continue;
            }
            acc = &acc + &(p * &dq);
        }
        acc
    }

    /// Operator composition `self ∘ rhs` in normal form, via the Leibniz
    /// expansion `p D^m ∘ q D^n = p Σ_j C(m,j) q^{(j)} D^{m−j+n}`.
    pub fn compose(&self, rhs: &DiffOp) -> DiffOp {
        let mut out = DiffOp::zero();
        for (&m, p) in &self.terms {
            for (&n, q) in &rhs.terms {
                let mut binom = Scalar::one();
                let mut dq = q.clone();
                for j in 0..=m {
                    if j > 0 {
                        // C(m, j) = C(m, j−1)·(m−j+1)/j
                        binom = &(&binom * &Scalar::from_int((m - j + 1) as i64))
                            / &Scalar::from_int(j as i64);
                        dq = dq.derivative();
                    }
                    if dq.is_zero() {
                        break;
                    }
                    out.add_term(m - j + n, (p * &dq).scale(&binom));
                }
            }
        }
        out
    }
}

impl Add for &DiffOp {
    type Output = DiffOp;
    fn add(self, rhs: &DiffOp) -> DiffOp {
        let mut out = self.clone();
        for (&k, p) in &rhs.terms {
            out.add_term(k, p.clone());
        }
        out
    }
}

impl Sub for &DiffOp {
    type Output = DiffOp;
    fn sub(self, rhs: &DiffOp) -> DiffOp {
        self + &(-rhs)
    }
}

impl Neg for &DiffOp {
    type Output = DiffOp;
    fn neg(self) -> DiffOp {
        DiffOp {
            terms: self.terms.iter().map(|(&k, p)| (k, -p)).collect(),
        }
    }
}

impl Mul for &DiffOp {
    type Output = DiffOp;
    fn mul(self, rhs: &DiffOp) -> DiffOp {
        self.compose(rhs)
    }
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&k, p) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "[{}]", p)?,
                1 => write!(f, "[{}]·D", p)?,
                _ => write!(f, "[{}]·D^{}", p, k)?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

//! Matrices of differential operators.
//!
//! These carry the gauged Hamiltonians, the triangular changes of basis, and
//! every conjugation needed by the invariance checks. Equality is entrywise
//! normal-form equality, which is decidable and exact.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use super::diffop::DiffOp;
use super::poly::Poly;
use super::scalar::Scalar;

#[derive(Clone, PartialEq, Eq)]
pub struct MatDiffOp {
    rows: usize,
    cols: usize,
    entries: Vec<DiffOp>,
}

#[derive(Debug, Error)]
pub enum MatOpError {
    #[error("matrix is not unipotent: {0}")]
    NotUnipotent(String),
}

impl MatDiffOp {
    pub fn zero(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        MatDiffOp {
            rows,
            cols,
            entries: vec![DiffOp::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = MatDiffOp::zero(n, n);
        for i in 0..n {
            m.set(i, i, DiffOp::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> DiffOp) -> Self {
        let mut m = MatDiffOp::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Embeds a constant scalar matrix as a matrix of multiplication
    /// operators.
    pub fn from_scalar_rows(rows: &[Vec<Scalar>]) -> Self {
        let r = rows.len();
        let c = rows[0].len();
        MatDiffOp::from_fn(r, c, |i, j| DiffOp::mul_by(Poly::constant(rows[i][j].clone())))
    }

    /// A scalar operator times the identity: `op · I_n`.
    pub fn scalar_op(n: usize, op: &DiffOp) -> Self {
        MatDiffOp::from_fn(n, n, |i, j| if i == j { op.clone() } else { DiffOp::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &DiffOp {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, op: DiffOp) {
        self.entries[i * self.cols + j] = op;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == MatDiffOp::identity(self.rows)
    }

    pub fn scale(&self, c: &Scalar) -> MatDiffOp {
        MatDiffOp {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e.scale(c)).collect(),
        }
    }

    /// Applies the operator matrix to a vector of polynomials.
    pub fn apply_vec(&self, v: &[Poly]) -> Vec<Poly> {
        assert_eq!(v.len(), self.cols, "vector length must match column count");
        (0..self.rows)
            .map(|i| {
                let mut acc = Poly::zero();
                for (j, q) in v.iter().enumerate() {
                    if q.is_zero() {
                        continue;
                    }
                    acc = &acc + &self.get(i, j).apply(q);
                }
                acc
            })
            .collect()
    }

    /// Commutator `[self, rhs] = self·rhs − rhs·self`.
    pub fn commutator(&self, rhs: &MatDiffOp) -> MatDiffOp {
        &(self * rhs) - &(rhs * self)
    }

    /// Inverse of `I + L` with `L` nilpotent (in particular any unit
    /// triangular matrix), via the finite Neumann sum `Σ (−L)^k`.
    ///
    /// Fails if the diagonal is not exactly the identity or if the
    /// off-diagonal part is not nilpotent within `n` steps.
    pub fn unipotent_inverse(&self) -> Result<MatDiffOp, MatOpError> {
        if self.rows != self.cols {
            return Err(MatOpError::NotUnipotent("matrix is not square".into()));
        }
        let n = self.rows;
        let mut l = self.clone();
        for i in 0..n {
            if *l.get(i, i) != DiffOp::one() {
                return Err(MatOpError::NotUnipotent(format!(
                    "diagonal entry ({i},{i}) is {}, expected 1",
                    l.get(i, i)
                )));
            }
            l.set(i, i, DiffOp::zero());
        }
        let mut inv = MatDiffOp::identity(n);
        let mut power = MatDiffOp::identity(n);
        let mut sign = -1i32;
        for _ in 0..n {
            power = &power * &l;
            if power.is_zero() {
                break;
            }
            inv = if sign < 0 { &inv - &power } else { &inv + &power };
            sign = -sign;
        }
        if !(&power * &l).is_zero() {
            return Err(MatOpError::NotUnipotent(
                "off-diagonal part is not nilpotent".into(),
            ));
        }
        Ok(inv)
    }
}

impl Mul for &MatDiffOp {
    type Output = MatDiffOp;
    fn mul(self, rhs: &MatDiffOp) -> MatDiffOp {
        assert_eq!(
            self.cols, rhs.rows,
            "matrix dimension mismatch: {}x{} · {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let mut out = MatDiffOp::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = DiffOp::zero();
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    let b = rhs.get(k, j);
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = &acc + &a.compose(b);
                }
                out.set(i, j, acc);
            }
        }
        out
    }
}

impl Add for &MatDiffOp {
    type Output = MatDiffOp;
    fn add(self, rhs: &MatDiffOp) -> MatDiffOp {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        MatDiffOp {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &MatDiffOp {
    type Output = MatDiffOp;
    fn sub(self, rhs: &MatDiffOp) -> MatDiffOp {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        MatDiffOp {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &MatDiffOp {
    type Output = MatDiffOp;
    fn neg(self) -> MatDiffOp {
        MatDiffOp {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| -e).collect(),
        }
    }
}

impl fmt::Display for MatDiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[ ")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " | ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f, " ]")?;
        }
        Ok(())
    }
}

impl fmt::Debug for MatDiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cx_mul(c: i64) -> DiffOp {
        DiffOp::mul_by(Poly::monomial(Scalar::from_int(c), 1))
    }

    #[test]
    fn identity_is_neutral() {
        let m = MatDiffOp::from_fn(2, 2, |i, j| {
            DiffOp::term(Poly::from_ints(&[i as i64, 1]), j)
        });
        assert_eq!(&MatDiffOp::identity(2) * &m, m);
        assert_eq!(&m * &MatDiffOp::identity(2), m);
    }

    /// Conjugations of the nilpotent units by the triangular matrix
    /// [[1, ±A],[0, 1]] with A = multiplication by c·x.
    #[test]
    fn triangular_conjugation_identities() {
        let a = cx_mul(3);
        let t_neg = MatDiffOp::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) | (1, 1) => DiffOp::one(),
            (0, 1) => -&a,
            _ => DiffOp::zero(),
        });
        let t_pos = MatDiffOp::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) | (1, 1) => DiffOp::one(),
            (0, 1) => a.clone(),
            _ => DiffOp::zero(),
        });
        let e12 = MatDiffOp::from_fn(2, 2, |i, j| {
            if (i, j) == (0, 1) {
                DiffOp::one()
            } else {
                DiffOp::zero()
            }
        });
        let e21 = MatDiffOp::from_fn(2, 2, |i, j| {
            if (i, j) == (1, 0) {
                DiffOp::one()
            } else {
                DiffOp::zero()
            }
        });

        // [[1,−A],[0,1]]·[[0,1],[0,0]]·[[1,A],[0,1]] = [[0,1],[0,0]]
        assert_eq!(&(&t_neg * &e12) * &t_pos, e12);

        // [[1,−A],[0,1]]·[[0,0],[1,0]]·[[1,A],[0,1]] = [[−A,−A²],[1,A]]
        // (the −A² entry is what conjugation gives: the determinant of the
        // nilpotent unit must stay zero)
        let got = &(&t_neg * &e21) * &t_pos;
        let want = MatDiffOp::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => -&a,
            (0, 1) => -&a.compose(&a),
            (1, 0) => DiffOp::one(),
            _ => a.clone(),
        });
        assert_eq!(got, want);
    }

    #[test]
    fn unipotent_inverse_rank_one() {
        // L21 = c·d/dx, L² = 0 ⇒ inverse flips the sign
        let mut m = MatDiffOp::identity(2);
        m.set(1, 0, DiffOp::ddx().scale(&Scalar::from_int(5)));
        let inv = m.unipotent_inverse().unwrap();
        assert_eq!(
            *inv.get(1, 0),
            DiffOp::ddx().scale(&Scalar::from_int(-5))
        );
        assert!((&m * &inv).is_identity());
        assert!((&inv * &m).is_identity());
    }

    #[test]
    fn unipotent_inverse_second_order_term() {
        let mut m = MatDiffOp::identity(3);
        m.set(1, 0, DiffOp::ddx());
        m.set(2, 1, cx_mul(1));
        let inv = m.unipotent_inverse().unwrap();
        // (I + L)⁻¹ = I − L + L², so the (2,0) entry is L32∘L21
        assert_eq!(*inv.get(2, 0), cx_mul(1).compose(&DiffOp::ddx()));
        assert!((&m * &inv).is_identity());
    }

    #[test]
    fn non_unipotent_rejected() {
        let mut m = MatDiffOp::identity(2);
        m.set(0, 0, DiffOp::ddx());
        assert!(m.unipotent_inverse().is_err());
        // dense non-nilpotent off-diagonal part
        let mut m2 = MatDiffOp::identity(2);
        m2.set(0, 1, DiffOp::one());
        m2.set(1, 0, DiffOp::one());
        assert!(m2.unipotent_inverse().is_err());
    }

    #[test]
    fn upper_triangular_unipotent_also_inverts() {
        let mut m = MatDiffOp::identity(2);
        m.set(0, 1, cx_mul(2));
        let inv = m.unipotent_inverse().unwrap();
        assert!((&m * &inv).is_identity());
    }
}

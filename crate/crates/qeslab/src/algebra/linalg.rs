//! Exact linear algebra over [`Scalar`]: constant matrices, linear-system
//! solving with consistency reporting, characteristic polynomials, and real
//! root counting by Sturm chains.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::poly::Poly;
use super::scalar::Scalar;

/// Dense constant matrix over [`Scalar`], row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct ScalarMat {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl ScalarMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        ScalarMat {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = ScalarMat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut m = ScalarMat::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn diagonal(diag: &[Scalar]) -> Self {
        let n = diag.len();
        ScalarMat::from_fn(n, n, |i, j| {
            if i == j {
                diag[i].clone()
            } else {
                Scalar::zero()
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> ScalarMat {
        ScalarMat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && *self == self.transpose()
    }

    pub fn scale(&self, c: &Scalar) -> ScalarMat {
        ScalarMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn trace(&self) -> Scalar {
        assert_eq!(self.rows, self.cols);
        let mut t = Scalar::zero();
        for i in 0..self.rows {
            t = &t + &self[(i, i)];
        }
        t
    }

    pub fn commutator(&self, rhs: &ScalarMat) -> ScalarMat {
        &(self * rhs) - &(rhs * self)
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)].to_f64()).collect())
            .collect()
    }
}

impl std::ops::Index<(usize, usize)> for ScalarMat {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ScalarMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &ScalarMat {
    type Output = ScalarMat;
    fn mul(self, rhs: &ScalarMat) -> ScalarMat {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = ScalarMat::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    if rhs[(k, j)].is_zero() {
                        continue;
                    }
                    out[(i, j)] = &out[(i, j)] + &(&self[(i, k)] * &rhs[(k, j)]);
                }
            }
        }
        out
    }
}

impl Add for &ScalarMat {
    type Output = ScalarMat;
    fn add(self, rhs: &ScalarMat) -> ScalarMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ScalarMat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ScalarMat {
    type Output = ScalarMat;
    fn sub(self, rhs: &ScalarMat) -> ScalarMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ScalarMat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &ScalarMat {
    type Output = ScalarMat;
    fn neg(self) -> ScalarMat {
        ScalarMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -a).collect(),
        }
    }
}

impl fmt::Display for ScalarMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

impl fmt::Debug for ScalarMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Outcome of an exact linear solve `A·x = b`.
pub struct LinearSolution {
    /// Whether the system admits any solution.
    pub consistent: bool,
    /// One particular solution when consistent.
    pub particular: Option<Vec<Scalar>>,
    /// Basis of the solution space of `A·x = 0`.
    pub nullspace: Vec<Vec<Scalar>>,
    pub rank: usize,
}

impl LinearSolution {
    /// The unique solution, if the system is consistent and determined.
    pub fn unique(&self) -> Option<&Vec<Scalar>> {
        if self.consistent && self.nullspace.is_empty() {
            self.particular.as_ref()
        } else {
            None
        }
    }
}

/// Gauss–Jordan elimination over the exact scalar field.
pub fn solve_linear(a: &ScalarMat, b: &[Scalar]) -> LinearSolution {
    assert_eq!(a.rows(), b.len(), "right-hand side length mismatch");
    let (m, n) = (a.rows(), a.cols());
    // augmented matrix
    let mut aug = ScalarMat::from_fn(m, n + 1, |i, j| {
        if j < n {
            a[(i, j)].clone()
        } else {
            b[i].clone()
        }
    });

    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(piv) = (row..m).find(|&r| !aug[(r, col)].is_zero()) else {
            continue;
        };
        if piv != row {
            for j in 0..=n {
                let tmp = aug[(piv, j)].clone();
                aug[(piv, j)] = aug[(row, j)].clone();
                aug[(row, j)] = tmp;
            }
        }
        let inv = aug[(row, col)].inv();
        for j in col..=n {
            aug[(row, j)] = &aug[(row, j)] * &inv;
        }
        for r in 0..m {
            if r != row && !aug[(r, col)].is_zero() {
                let factor = aug[(r, col)].clone();
                for j in col..=n {
                    aug[(r, j)] = &aug[(r, j)] - &(&factor * &aug[(row, j)]);
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
        if row == m {
            break;
        }
    }
    let rank = pivot_cols.len();

    // consistency: a zero row with nonzero rhs means no solution
    let consistent = (rank..m).all(|r| aug[(r, n)].is_zero());

    let particular = if consistent {
        let mut x = vec![Scalar::zero(); n];
        for (r, &c) in pivot_cols.iter().enumerate() {
            x[c] = aug[(r, n)].clone();
        }
        Some(x)
    } else {
        None
    };

    let mut nullspace = Vec::new();
    let free_cols: Vec<usize> = (0..n).filter(|c| !pivot_cols.contains(c)).collect();
    for &fc in &free_cols {
        let mut v = vec![Scalar::zero(); n];
        v[fc] = Scalar::one();
        for (r, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -&aug[(r, fc)];
        }
        nullspace.push(v);
    }

    LinearSolution {
        consistent,
        particular,
        nullspace,
        rank,
    }
}

/// Characteristic polynomial `det(λI − A)` by the Faddeev–LeVerrier
/// recursion, exact over the scalar field. Coefficients are returned
/// lowest-degree first (monic).
pub fn charpoly(a: &ScalarMat) -> Poly {
    assert_eq!(a.rows(), a.cols(), "characteristic polynomial needs a square matrix");
    let n = a.rows();
    let mut coeffs = vec![Scalar::zero(); n + 1];
    coeffs[n] = Scalar::one();
    let mut m = ScalarMat::identity(n);
    for k in 1..=n {
        let am = a * &m;
        let c = &(-&am.trace()) / &Scalar::from_int(k as i64);
        coeffs[n - k] = c.clone();
        m = &am + &ScalarMat::identity(n).scale(&c);
    }
    Poly::from_coeffs(coeffs)
}

/// Number of *distinct* real roots of `p` by Sturm's theorem
/// (sign-change count of the Sturm chain between −∞ and +∞).
pub fn count_real_roots(p: &Poly) -> usize {
    if p.degree().unwrap_or(0) == 0 {
        return 0;
    }
    // squarefree part: p / gcd(p, p')
    let sf = squarefree_part(p);
    let mut chain = vec![sf.clone(), sf.derivative()];
    while !chain.last().unwrap().is_zero() {
        let k = chain.len();
        let (_, r) = chain[k - 2].div_rem(&chain[k - 1]);
        chain.push(-&r);
    }
    chain.pop();

    let sign_changes = |at_plus_infinity: bool| {
        let mut changes = 0;
        let mut last = 0i32;
        for q in &chain {
            let Some(deg) = q.degree() else { continue };
            let mut s = q.leading().unwrap().signum();
            if !at_plus_infinity && deg % 2 == 1 {
                s = -s;
            }
            if s == 0 {
                continue;
            }
            if last != 0 && s != last {
                changes += 1;
            }
            last = s;
        }
        changes
    };

    sign_changes(false) - sign_changes(true)
}

fn poly_gcd(a: &Poly, b: &Poly) -> Poly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let (_, r) = a.div_rem(&b);
        a = b;
        b = r;
    }
    // normalize monic
    if let Some(lead) = a.leading() {
        let inv = lead.inv();
        return a.scale(&inv);
    }
    a
}

fn squarefree_part(p: &Poly) -> Poly {
    let g = poly_gcd(p, &p.derivative());
    if g.degree() == Some(0) {
        return p.clone();
    }
    let (q, r) = p.div_rem(&g);
    debug_assert!(r.is_zero());
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn solve_unique() {
        // x + y = 3, x − y = 1 ⇒ (2, 1)
        let a = ScalarMat::from_fn(2, 2, |i, j| match (i, j) {
            (0, _) => s(1),
            (1, 0) => s(1),
            (1, 1) => s(-1),
            _ => unreachable!(),
        });
        let sol = solve_linear(&a, &[s(3), s(1)]);
        assert_eq!(sol.unique().unwrap(), &vec![s(2), s(1)]);
    }

    #[test]
    fn solve_inconsistent() {
        let a = ScalarMat::from_fn(2, 1, |_, _| s(1));
        let sol = solve_linear(&a, &[s(1), s(2)]);
        assert!(!sol.consistent);
    }

    #[test]
    fn solve_underdetermined() {
        let a = ScalarMat::from_fn(1, 2, |_, j| s(1 + j as i64));
        let sol = solve_linear(&a, &[s(5)]);
        assert!(sol.consistent);
        assert_eq!(sol.nullspace.len(), 1);
    }

    #[test]
    fn charpoly_diagonal() {
        let a = ScalarMat::diagonal(&[s(1), s(2), s(3)]);
        // (λ−1)(λ−2)(λ−3) = λ³ − 6λ² + 11λ − 6
        assert_eq!(charpoly(&a), Poly::from_ints(&[-6, 11, -6, 1]));
    }

    #[test]
    fn sturm_counts() {
        // x³ − 2x has 3 real roots; x² + 1 has none; (x−1)² has 1 distinct
        assert_eq!(count_real_roots(&Poly::from_ints(&[0, -2, 0, 1])), 3);
        assert_eq!(count_real_roots(&Poly::from_ints(&[1, 0, 1])), 0);
        assert_eq!(count_real_roots(&Poly::from_ints(&[1, -2, 1])), 1);
    }
}

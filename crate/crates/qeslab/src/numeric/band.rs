//! Symmetric banded eigenvalue machinery for the finite-difference oracles.
//!
//! Eigenvalues are extracted by spectrum slicing: the inertia of `A − σI`
//! comes from an unpivoted banded LDLᵀ factorization (with a retry on tiny
//! pivots, following the usual bisection practice), and each eigenvalue is
//! localized by bisection on the count function. Periodic discretizations
//! are banded matrices plus a rank-`N` corner correction; their counts use
//! the inertia additivity of the bordered matrix, which only needs banded
//! solves and the inertia of a small Schur complement.

/// Symmetric banded matrix. `bands[d][i]` stores `A[i][i+d]` for
/// `d = 0..=half_bw`.
#[derive(Clone, Debug)]
pub struct SymBand {
    pub dim: usize,
    pub half_bw: usize,
    bands: Vec<Vec<f64>>,
}

impl SymBand {
    pub fn zero(dim: usize, half_bw: usize) -> Self {
        let bands = (0..=half_bw)
            .map(|d| vec![0.0; dim.saturating_sub(d)])
            .collect();
        SymBand { dim, half_bw, bands }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        let d = hi - lo;
        if d > self.half_bw {
            0.0
        } else {
            self.bands[d][lo]
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        let d = hi - lo;
        assert!(d <= self.half_bw, "entry outside band");
        self.bands[d][lo] = v;
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let cur = self.get(i, j);
        self.set(i, j, cur + v);
    }

    /// Gershgorin interval containing the whole spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..self.dim {
            let mut radius = 0.0;
            for d in 1..=self.half_bw {
                if i + d < self.dim {
                    radius += self.bands[d][i].abs();
                }
                if i >= d {
                    radius += self.bands[d][i - d].abs();
                }
            }
            lo = lo.min(self.bands[0][i] - radius);
            hi = hi.max(self.bands[0][i] + radius);
        }
        (lo, hi)
    }

    /// Unpivoted banded LDLᵀ of `A − σI`. Returns the number of negative
    /// pivots and, when requested, the factors for subsequent solves.
    /// `None` when a pivot falls below the breakdown threshold.
    fn ldlt(&self, sigma: f64, keep: bool) -> Option<(usize, Option<BandFactors>)> {
        let n = self.dim;
        let b = self.half_bw;
        let scale: f64 = (0..n)
            .map(|i| self.bands[0][i].abs())
            .fold(1.0, f64::max);
        let tiny = 1e-13 * scale.max(sigma.abs());

        // l[d][i] holds L[i+d][i]; d = 1..=b
        let mut l: Vec<Vec<f64>> = (0..=b).map(|d| vec![0.0; n.saturating_sub(d)]).collect();
        let mut diag = vec![0.0f64; n];
        let mut negatives = 0usize;

        for j in 0..n {
            let mut dj = self.bands[0][j] - sigma;
            let kmin = j.saturating_sub(b);
            for k in kmin..j {
                let ljk = l[j - k][k];
                dj -= ljk * ljk * diag[k];
            }
            if dj.abs() < tiny {
                return None;
            }
            diag[j] = dj;
            if dj < 0.0 {
                negatives += 1;
            }
            let imax = (j + b).min(n - 1);
            for i in j + 1..=imax {
                let mut v = self.get(i, j);
                let kmin = i.saturating_sub(b);
                for k in kmin..j {
                    v -= l[i - k][k] * l[j - k][k] * diag[k];
                }
                l[i - j][j] = v / dj;
            }
        }

        let factors = if keep {
            Some(BandFactors {
                dim: n,
                half_bw: b,
                l,
                diag,
            })
        } else {
            None
        };
        Some((negatives, factors))
    }

    /// Number of eigenvalues strictly below `sigma`, with automatic jitter
    /// on factorization breakdown.
    pub fn count_below(&self, sigma: f64) -> usize {
        count_with_jitter(|s| self.ldlt(s, false).map(|(neg, _)| neg), sigma)
    }
}

/// LDLᵀ factors of a banded symmetric matrix shift.
pub struct BandFactors {
    dim: usize,
    half_bw: usize,
    l: Vec<Vec<f64>>,
    diag: Vec<f64>,
}

impl BandFactors {
    /// Solves `L D Lᵀ x = rhs` in place.
    pub fn solve(&self, rhs: &mut [f64]) {
        let n = self.dim;
        let b = self.half_bw;
        for j in 0..n {
            let xj = rhs[j];
            if xj != 0.0 {
                let imax = (j + b).min(n - 1);
                for i in j + 1..=imax {
                    rhs[i] -= self.l[i - j][j] * xj;
                }
            }
        }
        for j in 0..n {
            rhs[j] /= self.diag[j];
        }
        for j in (0..n).rev() {
            let imax = (j + b).min(n - 1);
            let mut acc = rhs[j];
            for i in j + 1..=imax {
                acc -= self.l[i - j][j] * rhs[i];
            }
            rhs[j] = acc;
        }
    }
}

fn count_with_jitter(count: impl Fn(f64) -> Option<usize>, sigma: f64) -> usize {
    let mut s = sigma;
    for attempt in 0..6 {
        if let Some(c) = count(s) {
            return c;
        }
        let bump = 1e-11 * (1.0 + sigma.abs()) * (attempt + 1) as f64;
        s = sigma + bump;
    }
    panic!("banded factorization kept breaking down near sigma = {sigma}");
}

/// A banded matrix plus a symmetric rank-`k` downdate `A = M − t·W·Wᵀ`
/// (the periodic discretization: corner couplings folded into a low-rank
/// correction of a banded core).
pub struct CorrectedBand {
    pub band: SymBand,
    /// Correction columns (each sparse in principle; stored dense for
    /// simplicity).
    pub w: Vec<Vec<f64>>,
    pub t: f64,
}

impl CorrectedBand {
    /// Eigenvalues of `A` strictly below `sigma`:
    /// `ν(A−σ) = ν(M−σ) + ν((1/t)I − Wᵀ(M−σ)⁻¹W)`.
    pub fn count_below(&self, sigma: f64) -> usize {
        let attempt = |s: f64| -> Option<usize> {
            let (neg_band, factors) = self.band.ldlt(s, true)?;
            let factors = factors.expect("factors requested");
            let k = self.w.len();
            let mut s_mat = vec![vec![0.0f64; k]; k];
            let mut solved: Vec<Vec<f64>> = Vec::with_capacity(k);
            for wc in &self.w {
                let mut rhs = wc.clone();
                factors.solve(&mut rhs);
                solved.push(rhs);
            }
            for a in 0..k {
                for b in a..k {
                    let dot: f64 = self.w[a].iter().zip(&solved[b]).map(|(x, y)| x * y).sum();
                    let v = if a == b { 1.0 / self.t - dot } else { -dot };
                    s_mat[a][b] = v;
                    s_mat[b][a] = v;
                }
            }
            let eigs = jacobi_eigenvalues(&mut s_mat);
            // a Schur eigenvalue crossing zero is exactly the staircase jump;
            // strict counting keeps the bisection monotone to jitter width
            let neg_s = eigs.iter().filter(|&&e| e < 0.0).count();
            Some(neg_band + neg_s)
        };
        count_with_jitter(attempt, sigma)
    }

    /// Gershgorin-style enclosure (band bounds widened by the correction).
    pub fn gershgorin(&self) -> (f64, f64) {
        let (lo, hi) = self.band.gershgorin();
        let mut corr: f64 = 0.0;
        for wc in &self.w {
            let norm2: f64 = wc.iter().map(|v| v * v).sum();
            corr += self.t.abs() * norm2;
        }
        (lo - corr, hi + corr)
    }
}

/// Cyclic Jacobi eigenvalues of a small dense symmetric matrix (in place).
pub fn jacobi_eigenvalues(a: &mut [Vec<f64>]) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..64 {
        let mut off = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                off += a[i][j] * a[i][j];
            }
        }
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).collect()
}

/// Extracts eigenvalues `first..first+count` (0-indexed, ascending) of a
/// matrix described by its count function, by bisection inside `(lo, hi)`.
pub fn bisect_eigenvalues(
    count_below: &dyn Fn(f64) -> usize,
    lo: f64,
    hi: f64,
    first: usize,
    count: usize,
) -> Vec<f64> {
    let mut out = Vec::with_capacity(count);
    for idx in first..first + count {
        let (mut a, mut b) = (lo, hi);
        // eigenvalue #idx is the infimum of { σ : count(σ) > idx }
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if b - a <= 1e-13 * (1.0 + mid.abs()) {
                break;
            }
            if count_below(mid) > idx {
                b = mid;
            } else {
                a = mid;
            }
        }
        out.push(0.5 * (a + b));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tridiag(diag: &[f64], off: f64) -> SymBand {
        let n = diag.len();
        let mut m = SymBand::zero(n, 1);
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
            if i + 1 < n {
                m.set(i, i + 1, off);
            }
        }
        m
    }

    #[test]
    fn count_matches_known_spectrum() {
        // free Dirichlet Laplacian stencil eigenvalues: 2 − 2cos(kπ/(n+1))
        let n = 40;
        let m = tridiag(&vec![2.0; n], -1.0);
        let exact: Vec<f64> = (1..=n)
            .map(|k| 2.0 - 2.0 * (k as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos())
            .collect();
        assert_eq!(m.count_below(exact[4] + 1e-9), 5);
        assert_eq!(m.count_below(exact[4] - 1e-9), 4);
        let got = bisect_eigenvalues(&|s| m.count_below(s), -1.0, 5.0, 0, 6);
        for (g, e) in got.iter().zip(&exact) {
            assert!((g - e).abs() < 1e-10);
        }
    }

    #[test]
    fn corrected_band_is_periodic_laplacian() {
        // periodic Laplacian on n points: eigenvalues 2 − 2cos(2πk/n)
        let n = 32;
        let mut band = tridiag(&vec![2.0; n], -1.0);
        let t = 1.0;
        band.add(0, 0, t);
        band.add(n - 1, n - 1, t);
        let mut w = vec![0.0; n];
        w[0] = 1.0;
        w[n - 1] = 1.0;
        let op = CorrectedBand {
            band,
            w: vec![w],
            t,
        };
        let mut exact: Vec<f64> = (0..n)
            .map(|k| 2.0 - 2.0 * (2.0 * std::f64::consts::PI * k as f64 / n as f64).cos())
            .collect();
        exact.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let (lo, hi) = op.gershgorin();
        let got = bisect_eigenvalues(&|s| op.count_below(s), lo, hi, 0, 8);
        for (g, e) in got.iter().zip(exact.iter().take(8)) {
            assert!((g - e).abs() < 1e-9, "got {g}, want {e}");
        }
    }

    #[test]
    fn jacobi_small_symmetric() {
        let mut a = vec![vec![2.0, 1.0], vec![1.0, 2.0]];
        let mut e = jacobi_eigenvalues(&mut a);
        e.sort_by(|x, y| x.partial_cmp(y).unwrap());
        assert!((e[0] - 1.0).abs() < 1e-12);
        assert!((e[1] - 3.0).abs() < 1e-12);
    }
}

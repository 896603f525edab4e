//! Dense nonsymmetric eigenvalue extraction: balancing, Householder
//! reduction to Hessenberg form, and the Francis double-shift QR iteration
//! (the classical Algol/EISPACK `hqr` lineage). Eigenvectors of real
//! eigenvalues are recovered by shifted inverse iteration on the original
//! matrix.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum EigError {
    #[error("QR iteration failed to converge within {cap} steps; {found} of {dim} eigenvalues found")]
    NonConvergence {
        cap: usize,
        found: usize,
        dim: usize,
    },
}

/// Total QR iteration cap, in units of the matrix dimension.
const ITER_CAP_PER_DIM: usize = 100;

fn eps() -> f64 {
    2.0f64.powi(-52)
}

/// Radix-2 balancing (diagonal similarity) to reduce the norm spread.
fn balance(a: &mut [Vec<f64>]) {
    let n = a.len();
    let radix = 2.0f64;
    let sqrdx = radix * radix;
    let mut done = false;
    let mut sweeps = 0;
    while !done && sweeps < 100 {
        done = true;
        sweeps += 1;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[j][i].abs();
                    r += a[i][j].abs();
                }
            }
            if c != 0.0 && r != 0.0 {
                let mut g = r / radix;
                let mut f = 1.0;
                let s = c + r;
                let mut c2 = c;
                while c2 < g {
                    f *= radix;
                    c2 *= sqrdx;
                }
                g = r * radix;
                while c2 > g {
                    f /= radix;
                    c2 /= sqrdx;
                }
                if (c2 + r) / f < 0.95 * s {
                    done = false;
                    let ginv = 1.0 / f;
                    for j in 0..n {
                        a[i][j] *= ginv;
                    }
                    for j in 0..n {
                        a[j][i] *= f;
                    }
                }
            }
        }
    }
}

/// Householder reduction to upper Hessenberg form (in place, no transform
/// accumulation).
fn hessenberg(a: &mut [Vec<f64>]) {
    let n = a.len();
    if n < 3 {
        return;
    }
    let high = n - 1;
    let mut ort = vec![0.0f64; n];
    for m in 1..high {
        let mut scale = 0.0;
        for i in m..=high {
            scale += a[i][m - 1].abs();
        }
        if scale == 0.0 {
            continue;
        }
        let mut h = 0.0;
        for i in (m..=high).rev() {
            ort[i] = a[i][m - 1] / scale;
            h += ort[i] * ort[i];
        }
        let mut g = h.sqrt();
        if ort[m] > 0.0 {
            g = -g;
        }
        h -= ort[m] * g;
        ort[m] -= g;

        for j in m..n {
            let mut f = 0.0;
            for i in (m..=high).rev() {
                f += ort[i] * a[i][j];
            }
            f /= h;
            for i in m..=high {
                a[i][j] -= f * ort[i];
            }
        }
        for i in 0..=high {
            let mut f = 0.0;
            for j in (m..=high).rev() {
                f += ort[j] * a[i][j];
            }
            f /= h;
            for j in m..=high {
                a[i][j] -= f * ort[j];
            }
        }
        a[m][m - 1] = scale * g;
    }
    // zero out the sub-Hessenberg part explicitly
    for i in 2..n {
        for j in 0..i - 1 {
            a[i][j] = 0.0;
        }
    }
}

/// Francis double-shift QR on an upper Hessenberg matrix; eigenvalues only.
fn hqr(h: &mut [Vec<f64>], cap: usize) -> Result<Vec<(f64, f64)>, EigError> {
    let nn = h.len() as isize;
    let dim = h.len();
    let mut wr = vec![0.0f64; dim];
    let mut wi = vec![0.0f64; dim];
    let eps = eps();

    let mut norm = 0.0;
    for i in 0..dim {
        for j in i.saturating_sub(1)..dim {
            norm += h[i][j].abs();
        }
    }
    if norm == 0.0 {
        return Ok(vec![(0.0, 0.0); dim]);
    }

    let mut n = nn - 1;
    let mut exshift = 0.0f64;
    let mut iter = 0usize;
    let mut total_iter = 0usize;
    let mut found = 0usize;
    let (mut p, mut q, mut r, mut s, mut z) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let (mut x, mut y, mut w);

    while n >= 0 {
        // find a small subdiagonal element
        let mut l = n;
        while l > 0 {
            s = h[(l - 1) as usize][(l - 1) as usize].abs() + h[l as usize][l as usize].abs();
            if s == 0.0 {
                s = norm;
            }
            if h[l as usize][(l - 1) as usize].abs() < eps * s {
                break;
            }
            l -= 1;
        }

        if l == n {
            // one root found
            wr[n as usize] = h[n as usize][n as usize] + exshift;
            wi[n as usize] = 0.0;
            n -= 1;
            found += 1;
            iter = 0;
        } else if l == n - 1 {
            // two roots found
            w = h[n as usize][(n - 1) as usize] * h[(n - 1) as usize][n as usize];
            p = (h[(n - 1) as usize][(n - 1) as usize] - h[n as usize][n as usize]) / 2.0;
            q = p * p + w;
            z = q.abs().sqrt();
            x = h[n as usize][n as usize] + exshift;
            if q >= 0.0 {
                z = if p >= 0.0 { p + z } else { p - z };
                wr[(n - 1) as usize] = x + z;
                wr[n as usize] = if z != 0.0 { x - w / z } else { x + z };
                wi[(n - 1) as usize] = 0.0;
                wi[n as usize] = 0.0;
            } else {
                wr[(n - 1) as usize] = x + p;
                wr[n as usize] = x + p;
                wi[(n - 1) as usize] = z;
                wi[n as usize] = -z;
            }
            n -= 2;
            found += 2;
            iter = 0;
        } else {
            // form shift
            x = h[n as usize][n as usize];
            y = h[(n - 1) as usize][(n - 1) as usize];
            w = h[n as usize][(n - 1) as usize] * h[(n - 1) as usize][n as usize];

            if iter == 10 || iter == 20 {
                // exceptional shift
                exshift += x;
                for i in 0..=n as usize {
                    h[i][i] -= x;
                }
                s = h[n as usize][(n - 1) as usize].abs()
                    + h[(n - 1) as usize][(n - 2) as usize].abs();
                y = 0.75 * s;
                x = y;
                w = -0.4375 * s * s;
            }
            iter += 1;
            total_iter += 1;
            if total_iter > cap {
                return Err(EigError::NonConvergence { cap, found, dim });
            }

            // look for two consecutive small subdiagonal elements
            let mut m = n - 2;
            while m >= l {
                z = h[m as usize][m as usize];
                r = x - z;
                s = y - z;
                p = (r * s - w) / h[(m + 1) as usize][m as usize] + h[m as usize][(m + 1) as usize];
                q = h[(m + 1) as usize][(m + 1) as usize] - z - r - s;
                r = h[(m + 2) as usize][(m + 1) as usize];
                s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = h[m as usize][(m - 1) as usize].abs() * (q.abs() + r.abs());
                let v = p.abs()
                    * (h[(m - 1) as usize][(m - 1) as usize].abs()
                        + z.abs()
                        + h[(m + 1) as usize][(m + 1) as usize].abs());
                if u < eps * v {
                    break;
                }
                m -= 1;
            }

            for i in (m + 2)..=n {
                h[i as usize][(i - 2) as usize] = 0.0;
                if i > m + 2 {
                    h[i as usize][(i - 3) as usize] = 0.0;
                }
            }

            // double QR step on rows l..n, columns m..n
            // (p, q, r carry the Householder direction found above)
            for k in m..n {
                let notlast = k != n - 1;
                if k != m {
                    p = h[k as usize][(k - 1) as usize];
                    q = h[(k + 1) as usize][(k - 1) as usize];
                    r = if notlast {
                        h[(k + 2) as usize][(k - 1) as usize]
                    } else {
                        0.0
                    };
                    x = p.abs() + q.abs() + r.abs();
                    if x == 0.0 {
                        continue;
                    }
                    p /= x;
                    q /= x;
                    r /= x;
                }
                s = (p * p + q * q + r * r).sqrt();
                if p < 0.0 {
                    s = -s;
                }
                if s == 0.0 {
                    continue;
                }
                if k != m {
                    h[k as usize][(k - 1) as usize] = -s * x;
                } else if l != m {
                    h[k as usize][(k - 1) as usize] = -h[k as usize][(k - 1) as usize];
                }
                p += s;
                x = p / s;
                y = q / s;
                z = r / s;
                q /= p;
                r /= p;

                for j in k as usize..dim {
                    let mut pp = h[k as usize][j] + q * h[(k + 1) as usize][j];
                    if notlast {
                        pp += r * h[(k + 2) as usize][j];
                        h[(k + 2) as usize][j] -= pp * z;
                    }
                    h[k as usize][j] -= pp * x;
                    h[(k + 1) as usize][j] -= pp * y;
                }
                let top = std::cmp::min(n, k + 3) as usize;
                for i in 0..=top {
                    let mut pp = x * h[i][k as usize] + y * h[i][(k + 1) as usize];
                    if notlast {
                        pp += z * h[i][(k + 2) as usize];
                        h[i][(k + 2) as usize] -= pp * r;
                    }
                    h[i][k as usize] -= pp;
                    h[i][(k + 1) as usize] -= pp * q;
                }
            }
        }
    }

    Ok(wr.into_iter().zip(wi).collect())
}

/// Eigenvalues of a dense real matrix, as `(re, im)` pairs sorted by real
/// part then imaginary part.
pub fn eig_values(a: &[Vec<f64>]) -> Result<Vec<(f64, f64)>, EigError> {
    let n = a.len();
    assert!(n > 0, "empty matrix");
    assert!(a.iter().all(|r| r.len() == n), "matrix must be square");
    assert!(n <= 512, "dense eigensolver capped at dim 512");
    let mut work: Vec<Vec<f64>> = a.to_vec();
    balance(&mut work);
    hessenberg(&mut work);
    let mut vals = hqr(&mut work, ITER_CAP_PER_DIM * n)?;
    vals.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
    Ok(vals)
}

/// LU factorization with partial pivoting; returns false if structurally
/// singular beyond rescue.
fn lu_factor(a: &mut [Vec<f64>], piv: &mut [usize], tiny: f64) -> bool {
    let n = a.len();
    for (i, p) in piv.iter_mut().enumerate() {
        *p = i;
    }
    for k in 0..n {
        let mut max = a[k][k].abs();
        let mut arg = k;
        for i in k + 1..n {
            if a[i][k].abs() > max {
                max = a[i][k].abs();
                arg = i;
            }
        }
        if arg != k {
            a.swap(k, arg);
            piv.swap(k, arg);
        }
        if a[k][k].abs() < tiny {
            a[k][k] = if a[k][k] >= 0.0 { tiny } else { -tiny };
        }
        for i in k + 1..n {
            a[i][k] /= a[k][k];
            let f = a[i][k];
            if f == 0.0 {
                continue;
            }
            for j in k + 1..n {
                a[i][j] -= f * a[k][j];
            }
        }
    }
    true
}

fn lu_solve(a: &[Vec<f64>], piv: &[usize], b: &[f64]) -> Vec<f64> {
    let n = a.len();
    let mut x: Vec<f64> = piv.iter().map(|&p| b[p]).collect();
    for k in 0..n {
        for i in k + 1..n {
            x[i] -= a[i][k] * x[k];
        }
    }
    for k in (0..n).rev() {
        for j in k + 1..n {
            x[k] -= a[k][j] * x[j];
        }
        x[k] /= a[k][k];
    }
    x
}

fn matvec(a: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(c, v)| c * v).sum())
        .collect()
}

fn norm2(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Shifted inverse iteration for the eigenvector of a (near-)simple real
/// eigenvalue. Returns `None` when the residual does not certify the pair.
fn inverse_iteration(a: &[Vec<f64>], lambda: f64, avoid: &[Vec<f64>]) -> Option<Vec<f64>> {
    let n = a.len();
    let scale: f64 = a
        .iter()
        .map(|r| r.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
        .max(1.0);
    let shift = lambda + 1e-11 * scale;
    let mut m: Vec<Vec<f64>> = a.to_vec();
    for i in 0..n {
        m[i][i] -= shift;
    }
    let mut piv = vec![0usize; n];
    lu_factor(&mut m, &mut piv, 1e-14 * scale);

    let mut x: Vec<f64> = (0..n)
        .map(|i| 1.0 / (1.0 + i as f64))
        .collect();
    for _ in 0..5 {
        // bias away from already-found vectors of a degenerate cluster
        for v in avoid {
            let dot: f64 = x.iter().zip(v).map(|(a, b)| a * b).sum();
            for (xi, vi) in x.iter_mut().zip(v) {
                *xi -= dot * vi;
            }
        }
        let y = lu_solve(&m, &piv, &x);
        let nrm = norm2(&y);
        if !nrm.is_finite() || nrm == 0.0 {
            return None;
        }
        x = y.into_iter().map(|v| v / nrm).collect();
    }
    // certify: ‖Ax − λx‖ ≤ tol·scale
    let ax = matvec(a, &x);
    let res: f64 = ax
        .iter()
        .zip(&x)
        .map(|(av, xv)| (av - lambda * xv).powi(2))
        .sum::<f64>()
        .sqrt();
    if res <= 1e-8 * scale {
        // fix an overall sign for reproducibility
        if let Some(first) = x.iter().find(|v| v.abs() > 1e-12) {
            if *first < 0.0 {
                for v in x.iter_mut() {
                    *v = -*v;
                }
            }
        }
        Some(x)
    } else {
        None
    }
}

/// Eigenvalues with eigenvectors: `(re, im, vector)`. Vectors are recovered
/// for real eigenvalues via inverse iteration; complex pairs carry an empty
/// vector.
pub fn eig_dense(a: &[Vec<f64>]) -> Result<Vec<(f64, f64, Vec<f64>)>, EigError> {
    let vals = eig_values(a)?;
    let scale: f64 = a
        .iter()
        .map(|r| r.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
        .max(1.0);
    let mut out = Vec::with_capacity(vals.len());
    let mut cluster: Vec<Vec<f64>> = Vec::new();
    let mut cluster_lambda = f64::NAN;
    for (re, im) in vals {
        if im.abs() > 1e-9 * scale {
            out.push((re, im, Vec::new()));
            continue;
        }
        if (re - cluster_lambda).abs() > 1e-8 * scale {
            cluster.clear();
            cluster_lambda = re;
        }
        let vec = inverse_iteration(a, re, &cluster).unwrap_or_default();
        if !vec.is_empty() {
            cluster.push(vec.clone());
        }
        out.push((re, im, vec));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_matrix() {
        let a = vec![
            vec![2.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ];
        let vals = eig_values(&a).unwrap();
        let re: Vec<f64> = vals.iter().map(|v| v.0).collect();
        assert!((re[0] - 0.0).abs() < 1e-12);
        assert!((re[1] - 1.0).abs() < 1e-12);
        assert!((re[2] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn reflection_pair() {
        let a = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
        let vals = eig_values(&a).unwrap();
        assert!((vals[0].0 + 1.0).abs() < 1e-12);
        assert!((vals[1].0 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn companion_of_cubic() {
        // x³ − 2x: roots 0, ±√2
        let a = vec![
            vec![0.0, 0.0, 0.0],
            vec![1.0, 0.0, 2.0],
            vec![0.0, 1.0, 0.0],
        ];
        let mut re: Vec<f64> = eig_values(&a).unwrap().iter().map(|v| v.0).collect();
        re.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((re[0] + 2.0f64.sqrt()).abs() < 1e-12);
        assert!(re[1].abs() < 1e-12);
        assert!((re[2] - 2.0f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn complex_pair_detected() {
        let a = vec![vec![0.0, -1.0], vec![1.0, 0.0]];
        let vals = eig_values(&a).unwrap();
        assert!((vals[0].1 + 1.0).abs() < 1e-12 || (vals[0].1 - 1.0).abs() < 1e-12);
        assert!((vals[0].0).abs() < 1e-12);
    }

    #[test]
    fn eigenvectors_certified() {
        let a = vec![
            vec![3.0, 1.0, 0.0],
            vec![0.0, 2.0, 5.0],
            vec![0.0, 0.0, -1.0],
        ];
        for (re, _im, v) in eig_dense(&a).unwrap() {
            assert!(!v.is_empty());
            let av = matvec(&a, &v);
            for (x, y) in av.iter().zip(&v) {
                assert!((x - re * y).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn random_matrix_satisfies_charpoly_trace() {
        // eigenvalue sum equals trace (exactly represented here)
        let a = vec![
            vec![1.0, 2.0, 3.0, -1.0],
            vec![0.5, -2.0, 1.0, 0.0],
            vec![-1.0, 4.0, 0.5, 2.0],
            vec![0.0, 1.0, 1.0, 3.0],
        ];
        let vals = eig_values(&a).unwrap();
        let sum: f64 = vals.iter().map(|v| v.0).sum();
        assert!((sum - 2.5).abs() < 1e-10);
    }
}

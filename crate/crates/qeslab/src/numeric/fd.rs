//! Finite-difference Schrödinger oracles.
//!
//! Units ħ = 2m = 1 throughout: the operator is `−d²/dz² + V(z)` with `V`
//! a symmetric matrix potential. Second-order central differences on a
//! uniform grid, Dirichlet or periodic ends, with optional Richardson
//! extrapolation over the `(n, 2n)` grid pair. Only the lowest part of the
//! spectrum is extracted (by banded bisection), which is what the
//! cross-validation of algebraic levels needs.

use serde::Serialize;

use super::band::{bisect_eigenvalues, CorrectedBand, SymBand};

/// Boundary condition of the discretization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Boundary {
    Dirichlet,
    Periodic,
}

/// Uniform grid description.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct GridSpec {
    pub z_min: f64,
    pub z_max: f64,
    pub n_points: usize,
    pub boundary: Boundary,
}

impl GridSpec {
    pub fn new(z_min: f64, z_max: f64, n_points: usize, boundary: Boundary) -> Self {
        assert!(n_points >= 16, "grid needs at least 16 points");
        assert!(z_max > z_min, "empty domain");
        GridSpec {
            z_min,
            z_max,
            n_points,
            boundary,
        }
    }
}

/// Finite-difference spectrum (lowest eigenvalues, ascending) with grid
/// metadata.
#[derive(Clone, Debug, Serialize)]
pub struct OracleResult {
    pub eigenvalues: Vec<f64>,
    pub grid: GridSpec,
    pub richardson: bool,
}

/// A matrix-potential sampler: `z ↦ V(z)`, symmetric `channels × channels`.
pub trait MatrixPotential {
    fn channels(&self) -> usize;
    fn eval(&self, z: f64) -> Vec<Vec<f64>>;
}

impl<F: Fn(f64) -> Vec<Vec<f64>>> MatrixPotential for (usize, F) {
    fn channels(&self) -> usize {
        self.0
    }
    fn eval(&self, z: f64) -> Vec<Vec<f64>> {
        (self.1)(z)
    }
}

/// Dirichlet discretization of `−d²/dz² + V` on `[z_min, z_max]` with `n`
/// interior points; grid-major ordering gives half-bandwidth `channels`.
fn line_matrix(v: &dyn MatrixPotential, z_min: f64, z_max: f64, n: usize) -> SymBand {
    let nc = v.channels();
    let h = (z_max - z_min) / (n as f64 + 1.0);
    let t = 1.0 / (h * h);
    let mut m = SymBand::zero(n * nc, nc);
    for i in 0..n {
        let z = z_min + (i as f64 + 1.0) * h;
        let pot = v.eval(z);
        for a in 0..nc {
            m.add(i * nc + a, i * nc + a, 2.0 * t + pot[a][a]);
            for b in a + 1..nc {
                m.add(i * nc + a, i * nc + b, pot[a][b]);
            }
            if i + 1 < n {
                m.add(i * nc + a, (i + 1) * nc + a, -t);
            }
        }
    }
    m
}

/// Periodic discretization on `[z_min, z_min + period)` with `n` points:
/// banded core plus the corner couplings as a rank-`channels` downdate.
fn periodic_matrix(v: &dyn MatrixPotential, z_min: f64, period: f64, n: usize) -> CorrectedBand {
    let nc = v.channels();
    let h = period / n as f64;
    let t = 1.0 / (h * h);
    let dim = n * nc;
    let mut band = SymBand::zero(dim, nc);
    for i in 0..n {
        let z = z_min + i as f64 * h;
        let pot = v.eval(z);
        for a in 0..nc {
            band.add(i * nc + a, i * nc + a, 2.0 * t + pot[a][a]);
            for b in a + 1..nc {
                band.add(i * nc + a, i * nc + b, pot[a][b]);
            }
            if i + 1 < n {
                band.add(i * nc + a, (i + 1) * nc + a, -t);
            }
        }
    }
    // corner coupling −t between (0,a) and (n−1,a):
    //   −t(uvᵀ+vuᵀ) = −t(u+v)(u+v)ᵀ + t·uuᵀ + t·vvᵀ
    let mut w = Vec::with_capacity(nc);
    for a in 0..nc {
        band.add(a, a, t);
        band.add((n - 1) * nc + a, (n - 1) * nc + a, t);
        let mut wc = vec![0.0; dim];
        wc[a] = 1.0;
        wc[(n - 1) * nc + a] = 1.0;
        w.push(wc);
    }
    CorrectedBand { band, w, t }
}

fn lowest_eigs_band(m: &SymBand, k: usize) -> Vec<f64> {
    let (lo, hi) = m.gershgorin();
    let k = k.min(m.dim);
    bisect_eigenvalues(&|s| m.count_below(s), lo - 1.0, hi + 1.0, 0, k)
}

fn lowest_eigs_corrected(m: &CorrectedBand, k: usize) -> Vec<f64> {
    let (lo, hi) = m.gershgorin();
    let k = k.min(m.band.dim);
    bisect_eigenvalues(&|s| m.count_below(s), lo - 1.0, hi + 1.0, 0, k)
}

fn richardson_pair(coarse: &[f64], fine: &[f64]) -> Vec<f64> {
    coarse
        .iter()
        .zip(fine)
        .map(|(c, f)| (4.0 * f - c) / 3.0)
        .collect()
}

/// Lowest `k` eigenvalues of `−d²/dy² + V(y)` on `[−l, l]` with Dirichlet
/// ends. With `richardson`, the `(n, 2n)` grids are combined to cancel the
/// `O(h²)` discretization error.
pub fn fd_spectrum_line(
    v: &dyn MatrixPotential,
    l: f64,
    n: usize,
    k: usize,
    richardson: bool,
) -> OracleResult {
    let grid = GridSpec::new(-l, l, n, Boundary::Dirichlet);
    let coarse = lowest_eigs_band(&line_matrix(v, -l, l, n), k);
    let eigenvalues = if richardson {
        let fine = lowest_eigs_band(&line_matrix(v, -l, l, 2 * n), k);
        richardson_pair(&coarse, &fine)
    } else {
        coarse
    };
    OracleResult {
        eigenvalues,
        grid,
        richardson,
    }
}

/// Lowest `k` eigenvalues of `−d²/dz² + V(z)` with periodic boundary on a
/// period starting at `z_min` (usually 0).
pub fn fd_spectrum_periodic(
    v: &dyn MatrixPotential,
    z_min: f64,
    period: f64,
    n: usize,
    k: usize,
    richardson: bool,
) -> OracleResult {
    let grid = GridSpec::new(z_min, z_min + period, n, Boundary::Periodic);
    let coarse = lowest_eigs_corrected(&periodic_matrix(v, z_min, period, n), k);
    let eigenvalues = if richardson {
        let fine = lowest_eigs_corrected(&periodic_matrix(v, z_min, period, 2 * n), k);
        richardson_pair(&coarse, &fine)
    } else {
        coarse
    };
    OracleResult {
        eigenvalues,
        grid,
        richardson,
    }
}

/// One-sided spectral match: every `algebraic` level must have a neighbor in
/// `oracle` within `tol·(1+|E|)`. Returns the offending levels.
pub fn unmatched_levels(algebraic: &[f64], oracle: &[f64], tol: f64) -> Vec<f64> {
    algebraic
        .iter()
        .copied()
        .filter(|&e| {
            !oracle
                .iter()
                .any(|&o| (o - e).abs() <= tol * (1.0 + e.abs()))
        })
        .collect()
}

/// Max-norm residual `|−ψ″ + Vψ − Eψ| / (1 + |E|·‖ψ‖∞)` over the grid
/// interior, with a second-order stencil. `psi` samples the (vector-valued)
/// candidate eigenfunction.
pub fn residual_check(
    v: &dyn MatrixPotential,
    psi: &dyn Fn(f64) -> Vec<f64>,
    e: f64,
    grid: &GridSpec,
) -> f64 {
    let nc = v.channels();
    let n = grid.n_points;
    let h = (grid.z_max - grid.z_min) / (n as f64 - 1.0);
    let samples: Vec<Vec<f64>> = (0..n)
        .map(|i| psi(grid.z_min + i as f64 * h))
        .collect();
    let sup = samples
        .iter()
        .flat_map(|row| row.iter().map(|x| x.abs()))
        .fold(0.0, f64::max);
    if sup == 0.0 {
        return 0.0;
    }
    let mut worst: f64 = 0.0;
    for i in 1..n - 1 {
        let z = grid.z_min + i as f64 * h;
        let pot = v.eval(z);
        for a in 0..nc {
            let lap = (samples[i + 1][a] - 2.0 * samples[i][a] + samples[i - 1][a]) / (h * h);
            let mut val = -lap - e * samples[i][a];
            for (b, sample) in samples[i].iter().enumerate().take(nc) {
                val += pot[a][b] * sample;
            }
            worst = worst.max(val.abs() / sup);
        }
    }
    worst / (1.0 + e.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar(f: impl Fn(f64) -> f64 + 'static) -> impl MatrixPotential {
        (1usize, move |z: f64| vec![vec![f(z)]])
    }

    #[test]
    fn harmonic_oscillator_levels() {
        // −ψ″ + y²ψ: E_n = 2n+1
        let v = scalar(|y| y * y);
        let res = fd_spectrum_line(&v, 8.0, 512, 4, true);
        for (i, want) in [1.0, 3.0, 5.0, 7.0].iter().enumerate() {
            assert!(
                (res.eigenvalues[i] - want).abs() < 1e-6,
                "level {i}: got {}, want {want}",
                res.eigenvalues[i]
            );
        }
    }

    #[test]
    fn particle_in_a_box() {
        // V = 0 on [−L, L], Dirichlet: E_n = (nπ/2L)²
        let l = 3.0;
        let v = scalar(|_| 0.0);
        let res = fd_spectrum_line(&v, l, 600, 3, true);
        for (i, e) in res.eigenvalues.iter().enumerate() {
            let n = (i + 1) as f64;
            let want = (n * std::f64::consts::PI / (2.0 * l)).powi(2);
            assert!((e - want).abs() < 1e-6, "level {i}: got {e}, want {want}");
        }
    }

    #[test]
    fn free_particle_on_a_circle() {
        // V = 0, period 2π: eigenvalues n² with double multiplicity for n>0
        let v = scalar(|_| 0.0);
        let res = fd_spectrum_periodic(&v, 0.0, 2.0 * std::f64::consts::PI, 256, 5, true);
        let want = [0.0, 1.0, 1.0, 4.0, 4.0];
        for (g, w) in res.eigenvalues.iter().zip(want) {
            assert!((g - w).abs() < 1e-5, "got {g}, want {w}");
        }
    }

    #[test]
    fn richardson_improves_order() {
        // eigenvalue error ratio between n and 2n grids approaches 4
        let v = scalar(|y| y * y);
        let e_n = fd_spectrum_line(&v, 8.0, 256, 1, false).eigenvalues[0];
        let e_2n = fd_spectrum_line(&v, 8.0, 512, 1, false).eigenvalues[0];
        let ratio = (e_n - 1.0) / (e_2n - 1.0);
        assert!((ratio - 4.0).abs() < 0.2, "convergence ratio {ratio}");
    }

    #[test]
    fn coupled_channels_decouple() {
        // block-diagonal 2-channel potential = union of scalar spectra
        let v = (2usize, |y: f64| {
            vec![vec![y * y, 0.0], vec![0.0, y * y + 2.0]]
        });
        let res = fd_spectrum_line(&v, 8.0, 384, 4, true);
        let want = [1.0, 3.0, 3.0, 5.0];
        for (g, w) in res.eigenvalues.iter().zip(want) {
            assert!((g - w).abs() < 1e-5, "got {g}, want {w}");
        }
    }

    #[test]
    fn residual_certifies_harmonic_ground_state() {
        let v = scalar(|y| y * y);
        let grid = GridSpec::new(-6.0, 6.0, 12_001, Boundary::Dirichlet);
        let psi = |y: f64| vec![(-0.5 * y * y).exp()];
        let r = residual_check(&v, &psi, 1.0, &grid);
        assert!(r < 1e-6, "residual {r}");
        // negative control: a non-eigenpair has a large residual
        let bad = residual_check(&v, &psi, 1.7, &grid);
        assert!(bad > 1e-2, "non-eigenpair residual {bad}");
    }
}

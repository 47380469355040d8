//! Extremal spectrum of the random-walk operator and the finite-time
//! deviation bounds derived from it.
//!
//! The transition matrix `M = A B^-1` is similar to the symmetric normalized
//! adjacency `S = B^-1/2 A B^-1/2`, whose top eigenpair is known exactly:
//! eigenvalue 1 with eigenvector `sqrt(k / 2m)`. That vector is projected out
//! of every Krylov vector, and a single Lanczos recurrence then yields both
//! the second-largest eigenvalue `alpha2` and the smallest `alpha_n`.
//!
//! Only `O(n)` vectors are kept for large graphs (no reorthogonalization
//! beyond the deflated direction); loss of orthogonality may create duplicate
//! Ritz values but does not perturb converged extremal ones.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{check_ergodic, Graph, PositionDistribution};

/// Full reorthogonalization is used when `n` is at most this size.
const FULL_REORTH_MAX_NODES: usize = 4096;
/// Row-parallel matrix-vector products above this many nodes.
const PARALLEL_MATVEC_MIN_NODES: usize = 50_000;

#[derive(Debug, Error, PartialEq)]
pub enum SpectralError {
    #[error("graph is not connected")]
    Disconnected,
    #[error("spectral iteration did not converge after {matvecs} products (residual {residual:e})")]
    NoConvergence { matvecs: usize, residual: f64 },
    #[error("graph has fewer than two nodes")]
    TooSmall,
}

#[derive(Clone, Copy, Debug)]
pub struct SpectralOptions {
    /// Convergence threshold on the Ritz residual, relative to the spectral
    /// radius (which is 1).
    pub tol: f64,
    pub max_matvecs: usize,
    /// Seed of the random starting vector.
    pub seed: u64,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        Self { tol: 1e-8, max_matvecs: 10_000, seed: 0x5eed }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralSummary {
    pub alpha2: f64,
    pub alpha_n: f64,
    /// `min(1 - alpha2, 1 - |alpha_n|)`; zero for bipartite graphs.
    pub gap: f64,
    /// `round(log(n) / gap)`; `None` when the gap is zero.
    pub mixing_time: Option<u64>,
    pub matvecs: usize,
}

pub fn mixing_time(n: usize, gap: f64) -> Option<u64> {
    (gap > 0.0).then(|| ((n as f64).ln() / gap).round() as u64)
}

/// `alpha2`, `alpha_n`, spectral gap and mixing time of a connected graph.
pub fn spectral_summary(g: &Graph, opts: &SpectralOptions) -> Result<SpectralSummary, SpectralError> {
    let n = g.node_count();
    if n < 2 {
        return Err(SpectralError::TooSmall);
    }
    let erg = check_ergodic(g);
    if !erg.is_connected {
        return Err(SpectralError::Disconnected);
    }
    let op = NormalizedAdjacency::new(g);
    let (mut alpha2, mut alpha_n, matvecs) = if n == 2 {
        // the deflated space is spanned by the bipartite sign vector
        (-1.0, -1.0, 0)
    } else {
        op.extremal_deflated(opts)?
    };
    if erg.is_bipartite {
        // -1 is an exact eigenvalue of every connected bipartite graph
        alpha_n = -1.0;
        alpha2 = alpha2.max(-1.0);
    }
    let gap = if erg.is_bipartite {
        0.0
    } else {
        (1.0 - alpha2).min(1.0 - alpha_n.abs()).max(0.0)
    };
    Ok(SpectralSummary { alpha2, alpha_n, gap, mixing_time: mixing_time(n, gap), matvecs })
}

/// `sqrt(n) (1 - gap)^t`, clamped to the L1 range `[0, 2]`.
pub fn tv_upper_bound(n: usize, gap: f64, t: u64) -> f64 {
    ((n as f64).sqrt() * decay(gap, t)).clamp(0.0, 2.0)
}

/// Worst-case `sum_i P_i(t)^2` for a walk stopped at step `t`:
/// `sum_i pi_i^2 + (1 - gap)^(2t)`.
pub fn sum_p_squared_bound(pi: &PositionDistribution, gap: f64, t: u64) -> f64 {
    pi.sum_squared() + decay(gap, t).powi(2)
}

/// `(1 - gap)^t` with `0^0 = 1`.
fn decay(gap: f64, t: u64) -> f64 {
    if t == 0 {
        1.0
    } else {
        (t as f64 * (-gap).ln_1p()).exp()
    }
}

struct NormalizedAdjacency<'a> {
    g: &'a Graph,
    inv_sqrt_degree: Vec<f64>,
    top: Vec<f64>,
}

impl<'a> NormalizedAdjacency<'a> {
    fn new(g: &'a Graph) -> Self {
        let two_m = 2.0 * g.edge_count() as f64;
        let degrees = g.degrees();
        Self {
            g,
            inv_sqrt_degree: degrees.iter().map(|&k| 1.0 / (k as f64).sqrt()).collect(),
            top: degrees.iter().map(|&k| (k as f64 / two_m).sqrt()).collect(),
        }
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let row = |i: usize| -> f64 {
            let s: f64 = self.g.neighbors(i).iter().map(|&j| x[j as usize] * self.inv_sqrt_degree[j as usize]).sum();
            s * self.inv_sqrt_degree[i]
        };
        if x.len() >= PARALLEL_MATVEC_MIN_NODES {
            y.par_iter_mut().enumerate().for_each(|(i, out)| *out = row(i));
        } else {
            y.iter_mut().enumerate().for_each(|(i, out)| *out = row(i));
        }
    }

    fn deflate(&self, v: &mut [f64]) {
        let c = dot(&self.top, v);
        axpy(-c, &self.top, v);
    }

    /// Largest and smallest eigenvalue of `S` restricted to the complement
    /// of the top eigenvector.
    fn extremal_deflated(&self, opts: &SpectralOptions) -> Result<(f64, f64, usize), SpectralError> {
        let n = self.top.len();
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let mut q: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
        self.deflate(&mut q);
        let inv = 1.0 / norm(&q);
        scale(&mut q, inv);

        let keep_basis = n <= FULL_REORTH_MAX_NODES;
        let mut basis: Vec<Vec<f64>> = Vec::new();
        let mut q_prev = vec![0.0; n];
        let mut w = vec![0.0; n];
        let mut diag: Vec<f64> = Vec::new();
        let mut off: Vec<f64> = Vec::new();
        let mut beta_prev = 0.0;
        let mut last_residual = f64::INFINITY;

        for j in 0..opts.max_matvecs {
            self.apply(&q, &mut w);
            let a = dot(&q, &w);
            axpy(-a, &q, &mut w);
            axpy(-beta_prev, &q_prev, &mut w);
            self.deflate(&mut w);
            if keep_basis {
                basis.push(q.clone());
                for _ in 0..2 {
                    for b in &basis {
                        let c = dot(b, &w);
                        axpy(-c, b, &mut w);
                    }
                }
            }
            diag.push(a);
            let beta = norm(&w);
            let steps = j + 1;
            // Krylov space exhausted (bounded by the deflated dimension n - 1)
            let exhausted = beta <= 1e-10 || (keep_basis && steps >= n - 1);
            if exhausted || steps % 5 == 0 || steps < 5 {
                let tri = Tridiagonal { diag: &diag, off: &off };
                let hi = tri.extreme(true);
                let lo = tri.extreme(false);
                if exhausted {
                    return Ok((hi, lo, steps));
                }
                let r_hi = beta * tri.eigvec_last_component(hi).abs();
                let r_lo = beta * tri.eigvec_last_component(lo).abs();
                last_residual = r_hi.max(r_lo);
                if last_residual <= opts.tol {
                    return Ok((hi, lo, steps));
                }
            }
            off.push(beta);
            beta_prev = beta;
            std::mem::swap(&mut q_prev, &mut q);
            q.copy_from_slice(&w);
            scale(&mut q, 1.0 / beta);
        }
        Err(SpectralError::NoConvergence { matvecs: opts.max_matvecs, residual: last_residual })
    }
}

/// Symmetric tridiagonal matrix given by its diagonal and off-diagonal.
struct Tridiagonal<'a> {
    diag: &'a [f64],
    off: &'a [f64],
}

impl Tridiagonal<'_> {
    /// Number of eigenvalues strictly less than `x` (Sturm sequence).
    fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut d = 1.0;
        for i in 0..self.diag.len() {
            let b2 = if i == 0 { 0.0 } else { self.off[i - 1] * self.off[i - 1] };
            d = self.diag[i] - x - if i == 0 { 0.0 } else { b2 / d };
            if d == 0.0 {
                d = -f64::EPSILON * (1.0 + x.abs());
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn extreme(&self, largest: bool) -> f64 {
        let n = self.diag.len();
        // Gershgorin bounds
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 } + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        let target = if largest { n - 1 } else { 0 };
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > target {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Last component of the unit eigenvector for eigenvalue `theta`, by two
    /// steps of inverse iteration.
    fn eigvec_last_component(&self, theta: f64) -> f64 {
        let n = self.diag.len();
        if n == 1 {
            return 1.0;
        }
        let shift = theta + 1e-10 * (1.0 + theta.abs());
        let mut x = vec![1.0; n];
        for _ in 0..2 {
            x = self.solve_shifted(shift, &x);
            let s = norm(&x);
            if !s.is_finite() || s == 0.0 {
                return 1.0;
            }
            scale(&mut x, 1.0 / s);
        }
        x[n - 1]
    }

    /// Solves `(T - shift I) y = rhs` by Gaussian elimination with partial
    /// pivoting on the tridiagonal band.
    fn solve_shifted(&self, shift: f64, rhs: &[f64]) -> Vec<f64> {
        let n = self.diag.len();
        // rows hold bands (a: sub, b: diag, c: super, d: super-super fill-in)
        let mut b: Vec<f64> = self.diag.iter().map(|d| d - shift).collect();
        let mut a: Vec<f64> = std::iter::once(0.0).chain(self.off.iter().copied()).take(n).collect();
        let mut c: Vec<f64> = self.off.iter().copied().chain(std::iter::once(0.0)).take(n).collect();
        let mut d = vec![0.0; n];
        let mut y = rhs.to_vec();
        for i in 0..n - 1 {
            // eliminate a[i+1] using row i, pivoting with row i+1 if larger
            if a[i + 1].abs() > b[i].abs() {
                // swap rows i and i+1 (row i+1 has entries a[i+1], b[i+1], c[i+1])
                let (ri_b, ri_c, ri_d) = (b[i], c[i], d[i]);
                b[i] = a[i + 1];
                c[i] = b[i + 1];
                d[i] = c[i + 1];
                a[i + 1] = ri_b;
                b[i + 1] = ri_c;
                c[i + 1] = ri_d;
                y.swap(i, i + 1);
            }
            let pivot = if b[i] == 0.0 { f64::EPSILON } else { b[i] };
            b[i] = pivot;
            let f = a[i + 1] / pivot;
            b[i + 1] -= f * c[i];
            if i + 1 < n - 1 {
                c[i + 1] -= f * d[i];
            }
            y[i + 1] -= f * y[i];
            a[i + 1] = 0.0;
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut s = y[i];
            if i + 1 < n {
                s -= c[i] * x[i + 1];
            }
            if i + 2 < n {
                s -= d[i] * x[i + 2];
            }
            let piv = if b[i] == 0.0 { f64::EPSILON } else { b[i] };
            x[i] = s / piv;
        }
        x
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += alpha * xi);
}

fn scale(x: &mut [f64], s: f64) {
    x.iter_mut().for_each(|v| *v *= s);
}

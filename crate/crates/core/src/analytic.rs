//! Stationary degree distribution of preferential attachment with a
//! hard cutoff.
//!
//! Writing `n_k` for the fraction of nodes with degree `k` and `nu` for
//! the coefficient of the total attachment rate (`A = nu * N`), the
//! stationary distribution satisfies
//!
//! ```text
//! n_m     = nu / (m + nu)
//! n_k     = (k - 1) n_{k-1} / (nu + k)      for m < k < k_c
//! n_{k_c} = (k_c - 1) n_{k_c-1} / nu
//! ```
//!
//! Here `nu` is the attachment rate per placed link, `A = m * nu * N`
//! with `A` the total attachment rate over the active (below-cutoff)
//! nodes, so self-consistency reads `nu = (1/m) Σ_{k=m}^{k_c-1} k n_k`;
//! nodes at the cutoff are inert and contribute nothing. The recursion
//! sums to one for any `nu`; the fixed point additionally pins the mean
//! degree at `2m`. For large `k_c`, `nu → 2 - 2m/k_c`, so the bulk
//! decays as `k^-(1+nu)` while the cutoff bin `n_{k_c}` carries an
//! excess spike of order `k_c^-nu`.
//!
//! A mean degree of `2m` only fits under the cutoff when `k_c > 2m`.
//! For `k_c <= 2m` the equations have no interior fixed point — the
//! distribution collapses onto the cutoff bin — and the solver returns
//! that boundary solution.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;


/// Output of [`solve_master_equation`].
#[derive(Clone, Debug)]
pub struct AnalyticSolution {
    pub m: usize,
    pub k_c: usize,
    /// Total attachment rate coefficient.
    pub nu: f64,
    /// `n[k - m]` is the stationary fraction of degree-`k` nodes,
    /// `k` in `[m, k_c]`.
    n: Vec<f64>,
}

impl AnalyticSolution {
    /// Stationary fraction of nodes with degree `k`.
    pub fn n_k(&self, k: usize) -> f64 {
        assert!(k >= self.m && k <= self.k_c, "degree {k} outside [m, k_c]");
        self.n[k - self.m]
    }

    /// `(k, n_k)` pairs for `k` in `[m, k_c]`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.n.iter().enumerate().map(|(i, &v)| (self.m + i, v))
    }

    /// Predicted magnitude of the log-log slope of `n_k` below the
    /// cutoff: `1 + nu`.
    pub fn bulk_exponent(&self) -> f64 {
        1.0 + self.nu
    }

    /// Predicted scaling exponent of the cutoff spike `n_{k_c}`: `nu`.
    pub fn spike_exponent(&self) -> f64 {
        self.nu
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum AnalyticError {
    /// Requires `k_c > m >= 1`.
    BadDegreeRange { m: usize, k_c: usize },
    /// Tolerance must be positive.
    BadTolerance(f64),
    /// Fixed-point iteration did not converge; carries the last iterate.
    NoConvergence { last_nu: f64 },
}

impl fmt::Display for AnalyticError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnalyticError::BadDegreeRange { m, k_c } => {
                write!(f, "need k_c > m >= 1, got m={m}, k_c={k_c}")
            }
            AnalyticError::BadTolerance(t) => write!(f, "tolerance must be positive, got {t}"),
            AnalyticError::NoConvergence { last_nu } => {
                write!(f, "fixed point did not converge; last iterate nu={last_nu}")
            }
        }
    }
}

impl core::error::Error for AnalyticError {}

const MAX_ITERS: usize = 1_000_000;

/// Evaluates the recursion at a fixed `nu`. Always sums to one.
fn recursion(m: usize, k_c: usize, nu: f64) -> Vec<f64> {
    let mut n = vec![0.0; k_c - m + 1];
    n[0] = nu / (m as f64 + nu);
    for k in (m + 1)..k_c {
        n[k - m] = (k as f64 - 1.0) * n[k - m - 1] / (nu + k as f64);
    }
    n[k_c - m] = (k_c as f64 - 1.0) * n[k_c - m - 1] / nu;
    n
}

/// Per-link attachment rate `(1/m) Σ_{k=m}^{k_c-1} k n_k` over the
/// active (below cutoff) degrees.
fn active_rate(m: usize, n: &[f64]) -> f64 {
    let sum: f64 = n[..n.len() - 1]
        .iter()
        .enumerate()
        .map(|(i, &v)| (m + i) as f64 * v)
        .sum();
    sum / m as f64
}

/// Smallest `nu` the solver reports; stands in for the `nu → 0` boundary
/// of the degenerate `k_c <= 2m` regime.
const NU_FLOOR: f64 = 1e-9;

/// Solves the stationary degree distribution for minimum degree `m` and
/// hard cutoff `k_c`.
///
/// Damped fixed-point iteration `nu ← (nu + rate(nu)) / 2`, started
/// from the large-`k_c` asymptote `2 - 2m/k_c`, until successive
/// iterates differ by less than `tol`. When `k_c <= 2m` the only fixed
/// point is the `nu → 0` boundary (all mass on the cutoff bin); that
/// limit is returned directly since the iteration would crawl toward it
/// sublinearly.
pub fn solve_master_equation(
    m: usize,
    k_c: usize,
    tol: f64,
) -> Result<AnalyticSolution, AnalyticError> {
    if m < 1 || k_c <= m {
        return Err(AnalyticError::BadDegreeRange { m, k_c });
    }
    if !(tol > 0.0) {
        return Err(AnalyticError::BadTolerance(tol));
    }
    if k_c <= 2 * m {
        return Ok(AnalyticSolution {
            m,
            k_c,
            nu: NU_FLOOR,
            n: recursion(m, k_c, NU_FLOOR),
        });
    }
    let hi = 2.0 * m as f64;
    let mut nu = asymptotic_nu(m, k_c).clamp(NU_FLOOR, hi - 1e-6);
    for _ in 0..MAX_ITERS {
        let n = recursion(m, k_c, nu);
        let next = 0.5 * nu + 0.5 * active_rate(m, &n);
        let done = (next - nu).abs() < tol;
        nu = next.clamp(NU_FLOOR, hi);
        if done {
            return Ok(AnalyticSolution {
                m,
                k_c,
                nu,
                n: recursion(m, k_c, nu),
            });
        }
    }
    Err(AnalyticError::NoConvergence { last_nu: nu })
}

/// Large-`k_c` limit of the attachment rate coefficient: `2 - 2m/k_c`.
pub fn asymptotic_nu(m: usize, k_c: usize) -> f64 {
    assert!(k_c > m, "asymptotic_nu needs k_c > m");
    2.0 - 2.0 * m as f64 / k_c as f64
}

/// Scaling estimate of the natural cutoff — the largest degree a finite
/// scale-free network of `n` nodes reaches without an imposed limit:
/// `m * n^(1/(gamma-1))`. Order-of-magnitude only; no prefactor.
pub fn natural_cutoff(m: usize, n: usize, gamma: f64) -> f64 {
    assert!(m >= 1 && n >= 1, "natural_cutoff needs m, n >= 1");
    assert!(gamma > 1.0, "natural_cutoff needs gamma > 1");
    m as f64 * (n as f64).powf(1.0 / (gamma - 1.0))
}

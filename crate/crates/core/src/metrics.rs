//! Topology measurements: degree distributions, discrete power-law
//! fits, connected components, and shortest-path estimates.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;

use crate::graph::{Graph, NodeId};

/// How a degree distribution is reported by [`DegreeDistribution::densities`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Binning {
    /// One bin per integer degree.
    Raw,
    /// Geometric bins with the given base (> 1); per-bin densities are
    /// normalized by the number of integer degrees the bin spans.
    Log { base: f64 },
}

/// Empirical degree histogram over the live nodes of a graph.
///
/// Raw counts are always retained; log-binning only changes the
/// [`densities`](Self::densities) view.
#[derive(Clone, Debug)]
pub struct DegreeDistribution {
    counts: BTreeMap<usize, u64>,
    n_live: u64,
    pub binning: Binning,
}

#[derive(Clone, Debug, PartialEq)]
pub enum MetricsError {
    /// Power-law fit window must contain at least 3 distinct degrees
    /// with nonzero counts.
    FitWindowTooNarrow { support: usize },
    /// Fit window bounds must satisfy `1 <= k_min <= k_max`.
    BadFitWindow { k_min: usize, k_max: usize },
    /// Mean shortest path needs a giant component of at least 2 nodes.
    GiantTooSmall { size: usize },
}

impl fmt::Display for MetricsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricsError::FitWindowTooNarrow { support } => {
                write!(f, "fit window holds {support} support points, need >= 3")
            }
            MetricsError::BadFitWindow { k_min, k_max } => {
                write!(f, "bad fit window [{k_min}, {k_max}]")
            }
            MetricsError::GiantTooSmall { size } => {
                write!(f, "giant component has {size} nodes, need >= 2")
            }
        }
    }
}

impl core::error::Error for MetricsError {}

impl DegreeDistribution {
    /// Builds a distribution from precomputed counts (e.g. synthetic
    /// samples); `n_live` must equal the count sum.
    pub fn from_counts(counts: BTreeMap<usize, u64>, binning: Binning) -> Self {
        let n_live = counts.values().sum();
        DegreeDistribution {
            counts,
            n_live,
            binning,
        }
    }

    /// Number of live nodes with degree `k`.
    pub fn count(&self, k: usize) -> u64 {
        self.counts.get(&k).copied().unwrap_or(0)
    }

    /// `(k, count)` pairs in ascending `k`, zero counts omitted.
    pub fn iter(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.counts.iter().map(|(&k, &c)| (k, c))
    }

    pub fn n_live(&self) -> u64 {
        self.n_live
    }

    /// Empirical fraction of nodes with degree `k`.
    pub fn p_k(&self, k: usize) -> f64 {
        self.count(k) as f64 / self.n_live as f64
    }

    pub fn max_degree(&self) -> usize {
        self.counts.keys().next_back().copied().unwrap_or(0)
    }

    /// `(degree, density)` points according to the stored binning.
    ///
    /// Raw: one point per observed degree at its exact `P(k)`. Log: one
    /// point per occupied geometric bin at the bin's geometric-mean
    /// degree, density averaged over the integer degrees the bin spans.
    /// Degree 0 never enters a log bin.
    pub fn densities(&self) -> Vec<(f64, f64)> {
        match self.binning {
            Binning::Raw => self
                .counts
                .iter()
                .map(|(&k, &c)| (k as f64, c as f64 / self.n_live as f64))
                .collect(),
            Binning::Log { base } => {
                assert!(base > 1.0, "log-binning base must exceed 1");
                let max_k = self.max_degree();
                let mut out = Vec::new();
                let mut lo = 1usize;
                while lo <= max_k {
                    let next = ((lo as f64 * base).ceil() as usize).max(lo + 1);
                    let hi = next - 1;
                    let width = (next - lo) as u64;
                    let total: u64 = self
                        .counts
                        .range(lo..=hi)
                        .map(|(_, &c)| c)
                        .sum();
                    if total > 0 {
                        let center = ((lo as f64) * (hi as f64)).sqrt();
                        let density = total as f64 / (width as f64 * self.n_live as f64);
                        out.push((center, density));
                    }
                    lo = next;
                }
                out
            }
        }
    }
}

/// Exact degree histogram of the live nodes.
pub fn degree_distribution(g: &Graph, binning: Binning) -> DegreeDistribution {
    let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
    for &u in g.live_nodes() {
        *counts.entry(g.degree(u)).or_insert(0) += 1;
    }
    DegreeDistribution {
        counts,
        n_live: g.live_count() as u64,
        binning,
    }
}

/// Discrete power-law exponent estimate.
#[derive(Clone, Copy, Debug)]
pub struct PowerLawFit {
    pub gamma_hat: f64,
    pub k_min: usize,
    pub k_max: usize,
    /// Standard error from the observed Fisher information.
    pub stderr: f64,
}

/// First two moments of `ln k` under the power law `P(k) ∝ k^-gamma`
/// zeta-normalized over every integer degree in `[k_min, k_max]`.
fn truncated_moments(k_min: usize, k_max: usize, gamma: f64) -> (f64, f64) {
    let mut z = 0.0;
    let mut m1 = 0.0;
    let mut m2 = 0.0;
    for k in k_min..=k_max {
        let lk = (k as f64).ln();
        let w = (-gamma * lk).exp();
        z += w;
        m1 += w * lk;
        m2 += w * lk * lk;
    }
    (m1 / z, m2 / z)
}

const GAMMA_LO: f64 = 1.000_001;
const GAMMA_HI: f64 = 30.0;

/// Maximum-likelihood fit of a discrete power law over the window
/// `[k_min, k_max]`.
///
/// The likelihood is zeta-normalized on the window's support, so the
/// estimate is exact for truncated data; the exponent solves
/// `E_gamma[ln k] = mean observed ln k` by bisection (the left side is
/// strictly decreasing in gamma). Estimates hitting the search bounds
/// are clamped, which keeps degenerate inputs (e.g. uniform degrees)
/// from crashing at the cost of a meaningless value there.
pub fn fit_power_law(
    d: &DegreeDistribution,
    k_min: usize,
    k_max: usize,
) -> Result<PowerLawFit, MetricsError> {
    if k_min < 1 || k_min > k_max {
        return Err(MetricsError::BadFitWindow { k_min, k_max });
    }
    let mut support: Vec<usize> = Vec::new();
    let mut n: u64 = 0;
    let mut sum_log = 0.0;
    for (k, c) in d.iter() {
        if k >= k_min && k <= k_max && c > 0 {
            support.push(k);
            n += c;
            sum_log += c as f64 * (k as f64).ln();
        }
    }
    if support.len() < 3 {
        return Err(MetricsError::FitWindowTooNarrow {
            support: support.len(),
        });
    }
    let mean_log = sum_log / n as f64;

    let mut lo = GAMMA_LO;
    let mut hi = GAMMA_HI;
    // E[ln k] decreases in gamma; clamp when the data sit outside the
    // bracket.
    let gamma_hat = if truncated_moments(&support, lo).0 <= mean_log {
        lo
    } else if truncated_moments(&support, hi).0 >= mean_log {
        hi
    } else {
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if truncated_moments(&support, mid).0 > mean_log {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };

    let (m1, m2) = truncated_moments(&support, gamma_hat);
    let var = (m2 - m1 * m1).max(f64::MIN_POSITIVE);
    Ok(PowerLawFit {
        gamma_hat,
        k_min,
        k_max,
        stderr: 1.0 / (n as f64 * var).sqrt(),
    })
}

/// Connected-component statistics of the live graph.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComponentReport {
    pub n_components: usize,
    /// Largest component size over live node count; 0 for an empty graph.
    pub giant_fraction: f64,
    pub isolated_nodes: usize,
}

struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    fn new(len: usize) -> Self {
        UnionFind {
            parent: (0..len as u32).collect(),
            size: vec![1; len],
        }
    }

    fn find(&mut self, x: u32) -> u32 {
        let mut x = x;
        while self.parent[x as usize] != x {
            // Path halving.
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let mut ra = self.find(a);
        let mut rb = self.find(b);
        if ra == rb {
            return;
        }
        if self.size[ra as usize] < self.size[rb as usize] {
            core::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb as usize] = ra;
        self.size[ra as usize] += self.size[rb as usize];
    }
}

fn union_over_edges(g: &Graph) -> UnionFind {
    let mut uf = UnionFind::new(g.id_bound());
    for &u in g.live_nodes() {
        for v in g.neighbors(u) {
            if v > u {
                uf.union(u.value(), v.value());
            }
        }
    }
    uf
}

/// Exact component counts via union-find over the live edges.
pub fn components(g: &Graph) -> ComponentReport {
    let n_live = g.live_count();
    if n_live == 0 {
        return ComponentReport {
            n_components: 0,
            giant_fraction: 0.0,
            isolated_nodes: 0,
        };
    }
    let mut uf = union_over_edges(g);
    let mut n_components = 0;
    let mut giant = 0;
    let mut isolated = 0;
    for &u in g.live_nodes() {
        if g.degree(u) == 0 {
            isolated += 1;
        }
        if uf.find(u.value()) == u.value() {
            n_components += 1;
            giant = giant.max(uf.size[u.index()] as usize);
        }
    }
    ComponentReport {
        n_components,
        giant_fraction: giant as f64 / n_live as f64,
        isolated_nodes: isolated,
    }
}

/// Live members of the largest connected component, ascending by id.
/// Ties broken by the smallest member id.
pub fn giant_component_nodes(g: &Graph) -> Vec<NodeId> {
    if g.live_count() == 0 {
        return Vec::new();
    }
    let mut uf = union_over_edges(g);
    let mut best_root: Option<u32> = None;
    let mut best_size = 0;
    let mut sorted: Vec<NodeId> = g.live_nodes().to_vec();
    sorted.sort_unstable();
    for &u in &sorted {
        let root = uf.find(u.value());
        let size = uf.size[root as usize];
        if size as usize > best_size {
            best_size = size as usize;
            best_root = Some(root);
        }
    }
    let best_root = best_root.unwrap();
    sorted
        .into_iter()
        .filter(|u| uf.find(u.value()) == best_root)
        .collect()
}

/// Mean BFS distance between node pairs of the giant component.
///
/// Exact over all pairs when the graph has at most 1000 live nodes;
/// otherwise averaged over `sample_pairs` uniformly sampled distinct
/// pairs. Errors when the giant component has fewer than 2 nodes.
pub fn mean_shortest_path<R: Rng>(
    g: &Graph,
    sample_pairs: usize,
    rng: &mut R,
) -> Result<f64, MetricsError> {
    assert!(sample_pairs >= 1, "sample_pairs must be >= 1");
    let giant = giant_component_nodes(g);
    if giant.len() < 2 {
        return Err(MetricsError::GiantTooSmall { size: giant.len() });
    }
    if g.live_count() <= 1000 {
        let mut total = 0u64;
        let mut pairs = 0u64;
        for (i, &s) in giant.iter().enumerate() {
            let dist = g.bfs_distances(s);
            for &t in &giant[i + 1..] {
                total += u64::from(dist[t.index()]);
                pairs += 1;
            }
        }
        Ok(total as f64 / pairs as f64)
    } else {
        let mut total = 0u64;
        for _ in 0..sample_pairs {
            let s = giant[rng.random_range(0..giant.len())];
            let t = loop {
                let t = giant[rng.random_range(0..giant.len())];
                if t != s {
                    break t;
                }
            };
            let dist = g.bfs_distances(s);
            total += u64::from(dist[t.index()]);
        }
        Ok(total as f64 / sample_pairs as f64)
    }
}

/// Least-squares slope of `ln y` against `ln x`. Callers drop zero or
/// negative points first.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    assert!(points.len() >= 2, "slope needs at least two points");
    let n = points.len() as f64;
    let mut sx = 0.0;
    let mut sy = 0.0;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for &(x, y) in points {
        let lx = x.ln();
        let ly = y.ln();
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

//! Parameter-sweep harness.
//!
//! A sweep spec is a JSON document listing value arrays for every
//! growth knob, an optional search section, a realization count, and a
//! base seed. The run set is the cartesian product of the ranges times
//! the realizations; each run's seed derives from (base seed, parameter
//! tuple, realization index), so any row of the output can be
//! regenerated in isolation. Realizations run in parallel; the reduce
//! is single-threaded, so output bytes do not depend on scheduling.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use alsf_core::{
    components, degree_distribution, fit_power_law, grow, Algorithm, Binning, Cutoff, GrowthParams,
    SimRng,
};
use anyhow::{bail, Context, Result};
use rand::SeedableRng;
use rayon::prelude::*;
use serde::Deserialize;

use crate::queries::{aggregate, run_query_set, sample_query_pairs, SearchAggregate};
use crate::seed::{derive_run_seed, search_seed};
use crate::report;

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub growth: GrowthRanges,
    #[serde(default)]
    pub search: Option<SearchSpec>,
    pub realizations: u64,
    pub base_seed: u64,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    /// Search TTLs stop early once mean coverage exceeds this fraction
    /// of the live node count; >= 1.0 disables the stop.
    #[serde(default = "default_coverage_stop")]
    pub coverage_stop: f64,
}

fn default_coverage_stop() -> f64 {
    0.99
}

/// Value lists for the five topology knobs plus the target size.
/// `k_c` entries are integers or `null` for no cutoff.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GrowthRanges {
    pub mu: Vec<f64>,
    pub tau_j: Vec<usize>,
    pub tau_l: Vec<usize>,
    pub k_c: Vec<Option<usize>>,
    pub m: Vec<usize>,
    pub n: Vec<usize>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchSpec {
    /// Any of "fl", "nf", "rw".
    pub algos: Vec<String>,
    pub ttl: Vec<usize>,
    #[serde(default = "default_queries")]
    pub queries: usize,
}

fn default_queries() -> usize {
    1000
}

pub fn parse_algo(tag: &str) -> Result<Algorithm> {
    match tag {
        "fl" => Ok(Algorithm::Flooding),
        "nf" => Ok(Algorithm::NormalizedFlooding),
        "rw" => Ok(Algorithm::RandomWalk),
        other => bail!("unknown search algorithm {other:?} (expected fl, nf, or rw)"),
    }
}

impl ExperimentSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: ExperimentSpec =
            serde_json::from_str(text).context("parsing experiment spec")?;
        if spec.realizations == 0 {
            bail!("realizations must be >= 1");
        }
        let g = &spec.growth;
        for (name, empty) in [
            ("mu", g.mu.is_empty()),
            ("tau_j", g.tau_j.is_empty()),
            ("tau_l", g.tau_l.is_empty()),
            ("k_c", g.k_c.is_empty()),
            ("m", g.m.is_empty()),
            ("n", g.n.is_empty()),
        ] {
            if empty {
                bail!("growth.{name} must list at least one value");
            }
        }
        if let Some(search) = &spec.search {
            for tag in &search.algos {
                parse_algo(tag)?;
            }
            if search.ttl.is_empty() || search.algos.is_empty() {
                bail!("search.algos and search.ttl must be non-empty when search is present");
            }
            if search.queries == 0 {
                bail!("search.queries must be >= 1");
            }
        }
        Ok(spec)
    }

    /// Parameter tuples in deterministic grid order.
    pub fn grid(&self) -> Vec<GrowthParams> {
        let g = &self.growth;
        let mut out = Vec::new();
        for &mu in &g.mu {
            for &tau_j in &g.tau_j {
                for &tau_l in &g.tau_l {
                    for &k_c in &g.k_c {
                        for &m in &g.m {
                            for &n_target in &g.n {
                                out.push(GrowthParams {
                                    mu,
                                    tau_j,
                                    tau_l,
                                    k_c: k_c.map_or(Cutoff::Unbounded, Cutoff::Bounded),
                                    m,
                                    n_target,
                                    seed: 0,
                                });
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

/// One output row of the tidy sweep CSV. Search columns are empty for
/// growth-only sweeps.
#[derive(Clone, Debug)]
pub struct SweepRow {
    pub params: GrowthParams,
    pub realization: u64,
    pub gamma_hat: Option<f64>,
    pub giant_fraction: f64,
    pub search: Option<SearchAggregate>,
}

struct RunOutput {
    rows: Vec<SweepRow>,
}

/// Grows one realization and measures it.
///
/// The power-law fit window is `[2m, k_c - 1]` (capped below the cutoff
/// spike, which scales with a different exponent) or `[2m, max degree]`
/// without a cutoff; a window too narrow to fit leaves the column
/// empty.
fn run_one(params: &GrowthParams, realization: u64, spec: &ExperimentSpec) -> Result<RunOutput> {
    let (graph, _trace) = grow(params)?;
    let dist = degree_distribution(&graph, Binning::Raw);
    let k_lo = 2 * params.m;
    let k_hi = match params.k_c {
        Cutoff::Bounded(k_c) => k_c - 1,
        Cutoff::Unbounded => dist.max_degree(),
    };
    let gamma_hat = if k_hi >= k_lo.max(1) {
        fit_power_law(&dist, k_lo.max(1), k_hi).ok().map(|f| f.gamma_hat)
    } else {
        None
    };
    let giant_fraction = components(&graph).giant_fraction;

    let base = SweepRow {
        params: params.clone(),
        realization,
        gamma_hat,
        giant_fraction,
        search: None,
    };

    let Some(search) = &spec.search else {
        return Ok(RunOutput { rows: vec![base] });
    };
    let algos: Vec<Algorithm> = search
        .algos
        .iter()
        .map(|t| parse_algo(t).expect("spec validated"))
        .collect();
    let mut rng = SimRng::seed_from_u64(search_seed(params.seed));
    let pairs = sample_query_pairs(&graph, search.queries, &mut rng)
        .with_context(|| format!("sampling queries for seed {}", params.seed))?;
    let stop = (spec.coverage_stop < 1.0).then_some(spec.coverage_stop);
    let rows = run_query_set(&graph, &algos, &search.ttl, &pairs, params.m, stop, &mut rng);
    let aggs = aggregate(&rows, &algos, &search.ttl);
    Ok(RunOutput {
        rows: aggs
            .into_iter()
            .map(|agg| SweepRow {
                search: Some(agg),
                ..base.clone()
            })
            .collect(),
    })
}

pub struct SweepReport {
    pub rows_written: usize,
    pub failures: usize,
    pub csv_path: PathBuf,
}

/// Executes the whole grid and writes `sweep.csv` into `out_dir`.
///
/// Failed runs are reported on stderr and skipped; the sweep continues
/// and the failure count is returned so the caller can set the exit
/// status.
pub fn run_sweep(spec: &ExperimentSpec, out_dir: &Path, workers: Option<usize>) -> Result<SweepReport> {
    fs::create_dir_all(out_dir)
        .with_context(|| format!("creating output dir {}", out_dir.display()))?;

    let mut runs: Vec<(GrowthParams, u64)> = Vec::new();
    for point in spec.grid() {
        for realization in 0..spec.realizations {
            let mut params = point.clone();
            params.seed = derive_run_seed(spec.base_seed, &params, realization);
            runs.push((params, realization));
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()
        .context("building worker pool")?;
    let results: Vec<Result<RunOutput>> = pool.install(|| {
        runs.par_iter()
            .map(|(params, realization)| run_one(params, *realization, spec))
            .collect()
    });

    let csv_path = out_dir.join("sweep.csv");
    let mut file = fs::File::create(&csv_path)
        .with_context(|| format!("creating {}", csv_path.display()))?;
    let g = &spec.growth;
    let mut detail = format!(
        "base_seed={} realizations={} coverage_stop={} mu={:?} tau_j={:?} tau_l={:?} kc={:?} m={:?} n={:?}",
        spec.base_seed, spec.realizations, spec.coverage_stop, g.mu, g.tau_j, g.tau_l, g.k_c, g.m, g.n
    );
    if let Some(s) = &spec.search {
        detail.push_str(&format!(
            " algos={:?} ttl={:?} queries={}",
            s.algos, s.ttl, s.queries
        ));
    }
    writeln!(file, "# {}", report::provenance("sweep", &detail))?;
    writeln!(
        file,
        "mu,tau_j,tau_l,kc,m,realization,seed,gamma_hat,giant_fraction,algo,ttl,mean_covered,success_rate"
    )?;

    let mut rows_written = 0;
    let mut failures = 0;
    for ((params, realization), result) in runs.iter().zip(results) {
        match result {
            Ok(out) => {
                for row in out.rows {
                    let gamma = row.gamma_hat.map(|v| v.to_string()).unwrap_or_default();
                    let (algo, ttl, cov, succ) = match row.search {
                        Some(a) => (
                            a.algo.to_string(),
                            a.ttl.to_string(),
                            a.mean_covered.to_string(),
                            a.success_rate.to_string(),
                        ),
                        None => Default::default(),
                    };
                    writeln!(
                        file,
                        "{},{},{},{},{},{},{},{},{},{},{},{},{}",
                        row.params.mu,
                        row.params.tau_j,
                        row.params.tau_l,
                        row.params.k_c,
                        row.params.m,
                        row.realization,
                        row.params.seed,
                        gamma,
                        row.giant_fraction,
                        algo,
                        ttl,
                        cov,
                        succ
                    )?;
                    rows_written += 1;
                }
            }
            Err(e) => {
                failures += 1;
                eprintln!(
                    "sweep: run failed (seed={}, realization={realization}): {e:#}",
                    params.seed
                );
            }
        }
    }
    file.flush()?;
    Ok(SweepReport {
        rows_written,
        failures,
        csv_path,
    })
}

//! CSV emitters. Every file starts with a `#`-comment provenance line
//! (tool version, seed, parameters) followed by a header row. No
//! timestamps — identical runs must produce identical bytes.

use std::io::{self, Write};

use alsf_core::analytic::AnalyticSolution;
use alsf_core::{Binning, ComponentReport, DegreeDistribution, GrowthParams, PowerLawFit};

use crate::queries::{QueryRow, SearchAggregate};
use crate::VERSION;

pub fn provenance(cmd: &str, detail: &str) -> String {
    format!("alsf v{VERSION} cmd={cmd} {detail}")
}

pub fn growth_detail(p: &GrowthParams) -> String {
    format!(
        "mu={} tau_j={} tau_l={} kc={} m={} n={} seed={}",
        p.mu, p.tau_j, p.tau_l, p.k_c, p.m, p.n_target, p.seed
    )
}

fn comment<W: Write>(w: &mut W, text: &str) -> io::Result<()> {
    writeln!(w, "# {text}")
}

/// `k,count,p_k` rows. Raw binning writes exact integer degrees; log
/// binning writes bin centers with summed counts and width-normalized
/// densities.
pub fn write_degree_distribution<W: Write>(
    w: &mut W,
    d: &DegreeDistribution,
    prov: &str,
) -> io::Result<()> {
    comment(w, prov)?;
    writeln!(w, "k,count,p_k")?;
    match d.binning {
        Binning::Raw => {
            for (k, c) in d.iter() {
                writeln!(w, "{k},{c},{}", d.p_k(k))?;
            }
        }
        Binning::Log { base } => {
            // Recover per-bin counts alongside the width-normalized
            // densities so raw mass stays inspectable.
            let mut lo = 1usize;
            let mut bins = d.densities().into_iter();
            while lo <= d.max_degree() {
                let next = ((lo as f64 * base).ceil() as usize).max(lo + 1);
                let count: u64 = (lo..next).map(|k| d.count(k)).sum();
                if count > 0 {
                    let (center, density) = bins.next().expect("occupied bin has a density");
                    writeln!(w, "{center},{count},{density}")?;
                }
                lo = next;
            }
        }
    }
    Ok(())
}

/// `gamma_hat,stderr,k_min,k_max` single-row fit report.
pub fn write_power_law_fit<W: Write>(w: &mut W, fit: &PowerLawFit, prov: &str) -> io::Result<()> {
    comment(w, prov)?;
    writeln!(w, "gamma_hat,stderr,k_min,k_max")?;
    writeln!(
        w,
        "{},{},{},{}",
        fit.gamma_hat, fit.stderr, fit.k_min, fit.k_max
    )
}

/// `n_components,giant_fraction,isolated` single-row component report.
pub fn write_components<W: Write>(
    w: &mut W,
    rep: &ComponentReport,
    prov: &str,
) -> io::Result<()> {
    comment(w, prov)?;
    writeln!(w, "n_components,giant_fraction,isolated")?;
    writeln!(
        w,
        "{},{},{}",
        rep.n_components, rep.giant_fraction, rep.isolated_nodes
    )
}

/// `k,n_k` rows plus the footer comment carrying `nu` and the implied
/// bulk exponent.
pub fn write_analytic_solution<W: Write>(
    w: &mut W,
    sol: &AnalyticSolution,
    prov: &str,
) -> io::Result<()> {
    comment(w, prov)?;
    writeln!(w, "k,n_k")?;
    for (k, n_k) in sol.iter() {
        writeln!(w, "{k},{n_k}")?;
    }
    comment(
        w,
        &format!("nu={} bulk_exponent={}", sol.nu, sol.bulk_exponent()),
    )
}

/// Per-query rows: `algo,ttl,query_id,source,target,covered,messages,success,hops_to_target`.
pub fn write_query_rows<W: Write>(w: &mut W, rows: &[QueryRow], prov: &str) -> io::Result<()> {
    comment(w, prov)?;
    writeln!(
        w,
        "algo,ttl,query_id,source,target,covered,messages,success,hops_to_target"
    )?;
    for r in rows {
        let hops = r.hops_to_target.map(|h| h.to_string()).unwrap_or_default();
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            r.algo, r.ttl, r.query_id, r.source, r.target, r.covered, r.messages, r.success, hops
        )?;
    }
    Ok(())
}

/// Aggregates: `algo,ttl,mean_covered,success_rate`.
pub fn write_search_aggregates<W: Write>(
    w: &mut W,
    aggs: &[SearchAggregate],
    prov: &str,
) -> io::Result<()> {
    comment(w, prov)?;
    writeln!(w, "algo,ttl,mean_covered,success_rate")?;
    for a in aggs {
        writeln!(
            w,
            "{},{},{},{}",
            a.algo, a.ttl, a.mean_covered, a.success_rate
        )?;
    }
    Ok(())
}

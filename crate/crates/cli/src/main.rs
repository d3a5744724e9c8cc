//! `alsf` — grow ad-hoc limited scale-free overlay topologies, search
//! them, and reproduce whole experiment grids.

use std::fs;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use alsf_core::{
    components, degree_distribution, fit_power_law, grow, solve_master_equation, Binning, Cutoff,
    GrowthParams, SimRng,
};
use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;

use alsf_cli::experiment::{parse_algo, run_sweep, ExperimentSpec};
use alsf_cli::queries::{aggregate, run_query_set, sample_query_pairs_from};
use alsf_cli::report;
use alsf_cli::{edgelist, VERSION};

#[derive(Parser)]
#[command(name = "alsf", version = VERSION)]
#[command(about = "Ad-hoc limited scale-free overlay topology toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GrowthArgs {
    /// Target number of live nodes.
    #[arg(long = "n")]
    n: usize,

    /// Minimum degree (number of stubs per joining node).
    #[arg(long = "m")]
    m: usize,

    /// Ad-hocness: per-step probability that a random node leaves.
    #[arg(long, default_value_t = 0.0)]
    mu: f64,

    /// Join horizon in hops.
    #[arg(long = "tau-j")]
    tau_j: usize,

    /// Leave horizon in hops.
    #[arg(long = "tau-l", default_value_t = 0)]
    tau_l: usize,

    /// Hard degree cutoff: an integer or "none".
    #[arg(long = "kc", default_value = "none", value_parser = parse_cutoff)]
    kc: Cutoff,

    /// RNG seed for the run.
    #[arg(long)]
    seed: u64,
}

fn parse_cutoff(s: &str) -> Result<Cutoff, String> {
    match s {
        "none" | "inf" => Ok(Cutoff::Unbounded),
        _ => s
            .parse::<usize>()
            .map(Cutoff::Bounded)
            .map_err(|_| format!("expected an integer or \"none\", got {s:?}")),
    }
}

impl GrowthArgs {
    fn to_params(&self) -> GrowthParams {
        GrowthParams {
            mu: self.mu,
            tau_j: self.tau_j,
            tau_l: self.tau_l,
            k_c: self.kc,
            m: self.m,
            n_target: self.n,
            seed: self.seed,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Grow one topology and write its edge list.
    Grow {
        #[command(flatten)]
        growth: GrowthArgs,

        /// Edge-list output path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,

        /// Also write the degree distribution as CSV.
        #[arg(long = "degdist-out")]
        degdist_out: Option<PathBuf>,

        /// Log-bin the degree-distribution CSV with this base.
        #[arg(long = "log-base")]
        log_base: Option<f64>,
    },

    /// Run seeded search queries over an edge-list topology.
    Search {
        /// Edge-list input file.
        #[arg(long)]
        input: PathBuf,

        /// The network's minimum degree (normalized flooding fan-out).
        #[arg(long = "m")]
        m: usize,

        /// Comma-separated algorithms: fl, nf, rw.
        #[arg(long, value_delimiter = ',', default_value = "fl,nf,rw")]
        algos: Vec<String>,

        /// Comma-separated TTL values.
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5,6,7,8")]
        ttl: Vec<usize>,

        /// Number of source/target query pairs.
        #[arg(long, default_value_t = 1000)]
        queries: usize,

        /// Pin every query's source to this node id.
        #[arg(long)]
        source: Option<u32>,

        #[arg(long)]
        seed: u64,

        /// Per-query CSV output (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,

        /// Aggregated per-(algo, ttl) CSV output.
        #[arg(long = "summary-out")]
        summary_out: Option<PathBuf>,
    },

    /// Degree distribution of an edge-list topology.
    Degdist {
        #[arg(long)]
        input: PathBuf,

        /// Log-bin with this base instead of raw integer bins.
        #[arg(long = "log-base")]
        log_base: Option<f64>,

        /// Also fit a discrete power law over [k-min, k-max].
        #[arg(long = "fit-kmin")]
        fit_kmin: Option<usize>,

        #[arg(long = "fit-kmax")]
        fit_kmax: Option<usize>,

        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Stationary degree distribution under a hard cutoff.
    Analytic {
        #[arg(long = "m")]
        m: usize,

        /// Hard cutoff (must exceed m).
        #[arg(long)]
        kc: usize,

        /// Fixed-point tolerance.
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,

        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Run a parameter sweep described by a JSON spec file.
    Sweep {
        /// Spec file; see docs/sweep-spec.md for the schema.
        #[arg(long)]
        spec: PathBuf,

        /// Output directory (overrides the spec's output_dir).
        #[arg(long = "out-dir")]
        out_dir: Option<PathBuf>,
    },

    /// Verify an edge-list file: format, ordering, graph invariants.
    Audit {
        file: PathBuf,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

/// Opens `--out` or falls back to stdout.
fn out_writer(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            fs::File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn read_graph(path: &Path) -> Result<alsf_core::Graph> {
    let file = fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    edgelist::read_edge_list(BufReader::new(file))
        .with_context(|| format!("parsing {}", path.display()))
}

fn binning(log_base: Option<f64>) -> Result<Binning> {
    match log_base {
        None => Ok(Binning::Raw),
        Some(base) if base > 1.0 => Ok(Binning::Log { base }),
        Some(base) => bail!("--log-base must exceed 1, got {base}"),
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Grow {
            growth,
            out,
            degdist_out,
            log_base,
        } => {
            let params = growth.to_params();
            params.validate()?;
            let binning = binning(log_base)?;
            let (graph, trace) = grow(&params)?;
            let detail = report::growth_detail(&params);
            let mut w = out_writer(&out)?;
            edgelist::write_edge_list(&mut w, &graph, &[report::provenance("grow", &detail)])?;
            w.flush()?;
            if let Some(path) = degdist_out {
                let dist = degree_distribution(&graph, binning);
                let mut w = BufWriter::new(fs::File::create(&path)?);
                report::write_degree_distribution(
                    &mut w,
                    &dist,
                    &report::provenance("grow", &detail),
                )?;
                w.flush()?;
            }
            eprintln!(
                "grew {} nodes / {} edges; joins={} leaves={} failed_stubs={} rewires={}/{}",
                graph.live_count(),
                graph.edge_count(),
                trace.joins,
                trace.leaves,
                trace.failed_stub_attachments,
                trace.rewires_completed,
                trace.rewires_attempted,
            );
        }

        Command::Search {
            input,
            m,
            algos,
            ttl,
            queries,
            source,
            seed,
            out,
            summary_out,
        } => {
            if m == 0 {
                bail!("--m must be >= 1");
            }
            let graph = read_graph(&input)?;
            let algos = algos
                .iter()
                .map(|t| parse_algo(t))
                .collect::<Result<Vec<_>>>()?;
            let source = source.map(alsf_core::NodeId::new);
            if let Some(s) = source {
                if !graph.is_live(s) {
                    bail!("--source {s} is not a node of the input graph");
                }
            }
            let mut rng = SimRng::seed_from_u64(seed);
            let pairs = sample_query_pairs_from(&graph, queries, source, &mut rng)?;
            let rows = run_query_set(&graph, &algos, &ttl, &pairs, m, None, &mut rng);
            let detail = format!(
                "input={} m={m} queries={queries} seed={seed}",
                input.display()
            );
            let prov = report::provenance("search", &detail);
            let mut w = out_writer(&out)?;
            report::write_query_rows(&mut w, &rows, &prov)?;
            w.flush()?;
            if let Some(path) = summary_out {
                let aggs = aggregate(&rows, &algos, &ttl);
                let mut w = BufWriter::new(fs::File::create(&path)?);
                report::write_search_aggregates(&mut w, &aggs, &prov)?;
                w.flush()?;
            }
        }

        Command::Degdist {
            input,
            log_base,
            fit_kmin,
            fit_kmax,
            out,
        } => {
            let binning = binning(log_base)?;
            let graph = read_graph(&input)?;
            let dist = degree_distribution(&graph, binning);
            let prov = report::provenance("degdist", &format!("input={}", input.display()));
            let mut w = out_writer(&out)?;
            report::write_degree_distribution(&mut w, &dist, &prov)?;
            match (fit_kmin, fit_kmax) {
                (Some(lo), Some(hi)) => {
                    let fit = fit_power_law(&dist, lo, hi)?;
                    report::write_power_law_fit(&mut w, &fit, &prov)?;
                }
                (None, None) => {}
                _ => bail!("--fit-kmin and --fit-kmax must be given together"),
            }
            let rep = components(&graph);
            report::write_components(&mut w, &rep, &prov)?;
            w.flush()?;
        }

        Command::Analytic { m, kc, tol, out } => {
            let sol = solve_master_equation(m, kc, tol)?;
            let prov = report::provenance("analytic", &format!("m={m} kc={kc} tol={tol}"));
            let mut w = out_writer(&out)?;
            report::write_analytic_solution(&mut w, &sol, &prov)?;
            w.flush()?;
        }

        Command::Sweep { spec, out_dir } => {
            let text = fs::read_to_string(&spec)
                .with_context(|| format!("reading {}", spec.display()))?;
            let parsed = ExperimentSpec::from_json(&text)?;
            let out_dir = out_dir
                .or_else(|| parsed.output_dir.clone())
                .unwrap_or_else(|| PathBuf::from("."));
            let workers = std::env::var("ALSF_WORKERS")
                .ok()
                .map(|v| {
                    v.parse::<usize>()
                        .with_context(|| format!("ALSF_WORKERS={v:?} is not a number"))
                })
                .transpose()?;
            let rep = run_sweep(&parsed, &out_dir, workers)?;
            eprintln!(
                "sweep: {} rows -> {} ({} failed runs)",
                rep.rows_written,
                rep.csv_path.display(),
                rep.failures
            );
            if rep.failures > 0 {
                bail!("{} runs failed", rep.failures);
            }
        }

        Command::Audit { file } => {
            let f = fs::File::open(&file).with_context(|| format!("opening {}", file.display()))?;
            let summary = edgelist::audit_edge_list(BufReader::new(f))
                .with_context(|| format!("auditing {}", file.display()))?;
            println!("{}: {summary}", file.display());
        }
    }
    Ok(())
}

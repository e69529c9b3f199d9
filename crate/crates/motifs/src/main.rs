//! Command-line surface for the census / sampling / inference pipeline.
//!
//! Exit codes: 0 success, 2 usage error, 3 data error (parse, I/O, invalid
//! arguments), 4 numeric error (empty sample, degenerate system).

use std::io::BufRead;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use motifs::bounds::{fisher_and_crlb, FisherReport};
use motifs::catalog::{build_catalog, compute_phi, MotifCatalog};
use motifs::census::{brute_force_enumerate, enumerate, CountVector};
use motifs::error::Error;
use motifs::eval::{run_eval, EvalConfig, EvalSampler};
use motifs::graph::{parse_stream_line, read_edge_list, GraphKind};
use motifs::inference::{build_p, infer_counts_via, EstimateReport, TransitionMatrix};
use motifs::sampler::{sample_graph, sample_stream, HashParams, SamplerConfig, DEFAULT_RHO};

#[derive(Parser)]
#[command(
    name = "motifs",
    version,
    about = "Count small connected subgraphs, sample edges, and infer motif concentrations from sampled graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Randomly keep each edge of a graph and write the sampled graph
    Sample(SampleArgs),
    /// Count all k-node connected induced subgraphs per motif class
    Enumerate(EnumerateArgs),
    /// Estimate the original graph's concentrations from a sampled graph
    Infer(InferArgs),
    /// Fisher-information error bounds from a fully known graph
    Bound(BoundArgs),
    /// Monte Carlo error measurement against exact ground truth
    Eval(EvalArgs),
    /// List the motif classes of a catalog
    Catalog(CatalogArgs),
}

fn parse_kind(s: &str) -> Result<GraphKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_hash_params(s: &str) -> Result<HashParams, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 5 {
        return Err("expected a,b,gamma,rho,delta".into());
    }
    let nums: Vec<u64> = parts
        .iter()
        .map(|p| {
            p.trim()
                .parse()
                .map_err(|_| format!("invalid integer '{p}'"))
        })
        .collect::<Result<_, String>>()?;
    Ok(HashParams {
        a: nums[0],
        b: nums[1],
        gamma: nums[2],
        rho: nums[3],
        delta: nums[4],
    })
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum ModeArg {
    Bernoulli,
    Hash,
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum FormatArg {
    Json,
    Tsv,
}

#[derive(Args)]
struct SampleArgs {
    /// Input edge-list file
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_parser = parse_kind)]
    kind: GraphKind,
    /// Sampling probability in (0, 1]
    #[arg(long)]
    p: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::Bernoulli)]
    mode: ModeArg,
    /// Seed for bernoulli draws, or for deriving hash parameters
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Explicit hash parameters (hash mode): a,b,gamma,rho,delta
    #[arg(long, value_parser = parse_hash_params, value_name = "A,B,GAMMA,RHO,DELTA")]
    hash_params: Option<HashParams>,
    /// Output edge-list path; a `.json` sidecar records the effective p
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_parser = parse_kind)]
    kind: GraphKind,
    #[arg(long)]
    k: usize,
    /// Use the subset-iteration oracle instead of pivot enumeration
    #[arg(long)]
    brute_force: bool,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct InferArgs {
    /// The sampled graph
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_parser = parse_kind)]
    kind: GraphKind,
    #[arg(long)]
    k: usize,
    /// The (known) probability each edge was kept with
    #[arg(long)]
    p: f64,
    /// Multiply by the explicit inverse instead of back-substituting
    #[arg(long)]
    via_inverse: bool,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BoundArgs {
    /// The fully known graph (ground truth is enumerated from it)
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_parser = parse_kind)]
    kind: GraphKind,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    p: f64,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_parser = parse_kind)]
    kind: GraphKind,
    #[arg(long)]
    k: usize,
    /// One or more sampling probabilities, comma separated
    #[arg(long, value_delimiter = ',', required = true)]
    p: Vec<f64>,
    #[arg(long, default_value_t = 1000)]
    runs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = ModeArg::Bernoulli)]
    mode: ModeArg,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CatalogArgs {
    #[arg(long)]
    k: usize,
    #[arg(long, value_parser = parse_kind)]
    kind: GraphKind,
    /// Also emit the transition matrix and its inverse at this probability
    #[arg(long)]
    p: Option<f64>,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> std::process::ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => std::process::ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            std::process::ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } | Error::SelfLoop { .. } | Error::Domain(_) | Error::Io(_) => 3,
        Error::EmptySample { .. }
        | Error::Numeric(_)
        | Error::Internal(_)
        | Error::Serialize(_) => 4,
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Sample(args) => cmd_sample(args),
        Command::Enumerate(args) => cmd_enumerate(args),
        Command::Infer(args) => cmd_infer(args),
        Command::Bound(args) => cmd_bound(args),
        Command::Eval(args) => cmd_eval(args),
        Command::Catalog(args) => cmd_catalog(args),
    }
}

fn write_output(out: Option<&PathBuf>, content: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

#[derive(Serialize)]
struct SampleSidecar {
    requested_p: f64,
    effective_p: f64,
    mode: &'static str,
    seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    hash_params: Option<HashParams>,
    input_edges: usize,
    kept_edges: usize,
    kept_nodes: usize,
}

fn cmd_sample(args: SampleArgs) -> Result<(), Error> {
    let (sampled, cfg, input_edges) = match args.mode {
        ModeArg::Bernoulli => {
            let g = read_edge_list(&args.input, args.kind)?;
            let cfg = SamplerConfig::bernoulli(args.p, args.seed)?;
            let edges = g.edge_count();
            (sample_graph(&g, &cfg)?, cfg, edges)
        }
        ModeArg::Hash => {
            // hash decisions are per pair, so the input streams line by line
            let params = match args.hash_params {
                Some(p) => p,
                None => {
                    let max_id = max_node_id_in_file(&args.input, args.kind)?;
                    HashParams::for_max_id(max_id, DEFAULT_RHO, args.seed)?
                }
            };
            let cfg = SamplerConfig::hash(args.p, params)?;
            let file = std::fs::File::open(&args.input)?;
            let mut records = Vec::new();
            let mut count = 0usize;
            for line in std::io::BufReader::new(file).lines() {
                if let Some(rec) = parse_stream_line(&line?, args.kind)? {
                    records.push(rec);
                    count += 1;
                }
            }
            (sample_stream(args.kind, records, &cfg)?, cfg, count)
        }
    };

    std::fs::write(&args.out, sampled.to_edge_list())?;
    let sidecar = SampleSidecar {
        requested_p: args.p,
        effective_p: cfg.effective_p(),
        mode: match args.mode {
            ModeArg::Bernoulli => "bernoulli",
            ModeArg::Hash => "hash",
        },
        seed: args.seed,
        hash_params: match cfg.mode {
            motifs::sampler::SamplerMode::Hash(p) => Some(p),
            _ => None,
        },
        input_edges,
        kept_edges: sampled.edge_count(),
        kept_nodes: sampled.node_count(),
    };
    let mut sidecar_path = args.out.clone().into_os_string();
    sidecar_path.push(".json");
    std::fs::write(
        PathBuf::from(sidecar_path),
        serde_json::to_string_pretty(&sidecar)?.to_string() + "\n",
    )?;
    eprintln!(
        "kept {} of {} edges (effective p = {})",
        sampled.edge_count(),
        input_edges,
        cfg.effective_p()
    );
    Ok(())
}

fn max_node_id_in_file(path: &PathBuf, kind: GraphKind) -> Result<u64, Error> {
    let file = std::fs::File::open(path)?;
    let mut max_id = 0u64;
    for line in std::io::BufReader::new(file).lines() {
        if let Some((u, v, _)) = parse_stream_line(&line?, kind)? {
            max_id = max_id.max(u as u64).max(v as u64);
        }
    }
    Ok(max_id)
}

#[derive(Serialize)]
struct CensusOutput {
    k: usize,
    kind: GraphKind,
    total: u64,
    counts: Vec<u64>,
    concentrations: Vec<f64>,
}

fn cmd_enumerate(args: EnumerateArgs) -> Result<(), Error> {
    let g = read_edge_list(&args.input, args.kind)?;
    let cat = build_catalog(args.k, args.kind)?;
    let counts = if args.brute_force {
        brute_force_enumerate(&g, &cat)?
    } else {
        enumerate(&g, &cat)
    };
    let content = match args.format {
        FormatArg::Json => {
            let out = CensusOutput {
                k: counts.k,
                kind: counts.kind,
                total: counts.total(),
                concentrations: counts.concentrations(),
                counts: counts.counts,
            };
            serde_json::to_string_pretty(&out)? + "\n"
        }
        FormatArg::Tsv => census_tsv(&counts, &cat),
    };
    write_output(args.out.as_ref(), &content)
}

fn census_tsv(counts: &CountVector, cat: &MotifCatalog) -> String {
    let total = counts.total();
    let mut out = String::from("id\tname\tcount\tconcentration\n");
    for id in cat.ids() {
        let c = counts.get(id);
        let conc = if total > 0 {
            c as f64 / total as f64
        } else {
            0.0
        };
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\n",
            id,
            cat.name(id).unwrap_or("-"),
            c,
            conc
        ));
    }
    out
}

#[derive(Serialize)]
struct InferOutput {
    #[serde(flatten)]
    report: EstimateReport,
    /// Plug-in error bounds evaluated at the (projected) estimates.
    rcrlb_plug_in: Option<Vec<f64>>,
}

fn cmd_infer(args: InferArgs) -> Result<(), Error> {
    let g = read_edge_list(&args.input, args.kind)?;
    let cat = build_catalog(args.k, args.kind)?;
    let phi = compute_phi(&cat)?;
    let pm = build_p(&phi, args.p, &cat)?;
    let m = enumerate(&g, &cat);
    let mut report = infer_counts_via(&m, &pm, args.via_inverse)?;

    let rcrlb = plug_in_bound(&pm, &mut report);
    let content = match args.format {
        FormatArg::Json => {
            serde_json::to_string_pretty(&InferOutput {
                report,
                rcrlb_plug_in: rcrlb,
            })? + "\n"
        }
        FormatArg::Tsv => {
            let mut tsv = report.to_tsv(&cat);
            if let Some(bounds) = &rcrlb {
                tsv = merge_tsv_column(&tsv, "rcrlb_plug_in", bounds);
            }
            tsv
        }
    };
    write_output(args.out.as_ref(), &content)
}

/// Bounds evaluated at the estimates themselves; unavailable when the
/// projected concentrations are degenerate.
fn plug_in_bound(pm: &TransitionMatrix, report: &mut EstimateReport) -> Option<Vec<f64>> {
    let omega = report.biased_projection();
    let n_total = report.n_hat.iter().sum::<f64>().round().max(1.0) as u64;
    match fisher_and_crlb(pm, &omega, n_total, true) {
        Ok(bound) => Some(bound.rcrlb),
        Err(_) => {
            report.flags.push("plug_in_bound_unavailable".into());
            None
        }
    }
}

fn merge_tsv_column(tsv: &str, header: &str, values: &[f64]) -> String {
    let mut lines = tsv.lines();
    let mut out = format!("{}\t{header}\n", lines.next().unwrap_or_default());
    for (line, v) in lines.zip(values) {
        out.push_str(&format!("{line}\t{v}\n"));
    }
    out
}

fn cmd_bound(args: BoundArgs) -> Result<(), Error> {
    let g = read_edge_list(&args.input, args.kind)?;
    let cat = build_catalog(args.k, args.kind)?;
    let phi = compute_phi(&cat)?;
    let pm = build_p(&phi, args.p, &cat)?;
    let truth = enumerate(&g, &cat);
    if truth.total() == 0 {
        return Err(Error::EmptySample { k: args.k });
    }
    let report: FisherReport = fisher_and_crlb(&pm, &truth.concentrations(), truth.total(), false)?;
    let content = match args.format {
        FormatArg::Json => serde_json::to_string_pretty(&report)? + "\n",
        FormatArg::Tsv => report.to_tsv(&cat),
    };
    write_output(args.out.as_ref(), &content)
}

fn cmd_eval(args: EvalArgs) -> Result<(), Error> {
    let g = read_edge_list(&args.input, args.kind)?;
    let cfg = EvalConfig {
        k: args.k,
        kind: args.kind,
        p_values: args.p,
        runs: args.runs,
        seed: args.seed,
        sampler: match args.mode {
            ModeArg::Bernoulli => EvalSampler::Bernoulli,
            ModeArg::Hash => EvalSampler::Hash { rho: DEFAULT_RHO },
        },
    };
    let report = run_eval(&g, &cfg)?;
    let content = match args.format {
        FormatArg::Json => serde_json::to_string_pretty(&report)? + "\n",
        FormatArg::Tsv => report.to_tsv(),
    };
    write_output(args.out.as_ref(), &content)
}

#[derive(Serialize)]
struct CatalogEntry {
    id: usize,
    name: Option<String>,
    skeleton_edges: usize,
    automorphisms: u64,
    edges: Vec<String>,
}

#[derive(Serialize)]
struct CatalogOutput {
    k: usize,
    kind: GraphKind,
    classes: Vec<CatalogEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    transition: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    inverse: Option<Vec<Vec<f64>>>,
}

fn cmd_catalog(args: CatalogArgs) -> Result<(), Error> {
    let cat = build_catalog(args.k, args.kind)?;
    let entries: Vec<CatalogEntry> = cat
        .ids()
        .map(|id| {
            let edges = cat
                .representative_edges(id)
                .into_iter()
                .map(|(u, v, label)| {
                    let mut line = format!("{u} {v}");
                    if let Some(tag) = edge_tag(label) {
                        line.push(' ');
                        line.push(tag);
                    }
                    line
                })
                .collect();
            CatalogEntry {
                id: id.get(),
                name: cat.name(id).map(str::to_string),
                skeleton_edges: cat.edge_count(id),
                automorphisms: cat.automorphism_count(id),
                edges,
            }
        })
        .collect();
    let matrices = match args.p {
        Some(p) => {
            let phi = compute_phi(&cat)?;
            let pm = build_p(&phi, p, &cat)?;
            let t = cat.len();
            let rows = |flat: &dyn Fn(usize, usize) -> f64| -> Vec<Vec<f64>> {
                (0..t)
                    .map(|i| (0..t).map(|j| flat(i, j)).collect())
                    .collect()
            };
            let transition = rows(&|i, j| pm.get(i, j));
            let inv = pm.inverse()?;
            let inverse = rows(&|i, j| inv[i * t + j]);
            Some((transition, inverse))
        }
        None => None,
    };
    let content = match args.format {
        FormatArg::Json => {
            let (transition, inverse) = match matrices {
                Some((t, i)) => (Some(t), Some(i)),
                None => (None, None),
            };
            let out = CatalogOutput {
                k: args.k,
                kind: args.kind,
                classes: entries,
                p: args.p,
                transition,
                inverse,
            };
            serde_json::to_string_pretty(&out)? + "\n"
        }
        FormatArg::Tsv => {
            let mut out = String::from("id\tname\tskeleton_edges\tautomorphisms\tedges\n");
            for e in &entries {
                out.push_str(&format!(
                    "{}\t{}\t{}\t{}\t{}\n",
                    e.id,
                    e.name.as_deref().unwrap_or("-"),
                    e.skeleton_edges,
                    e.automorphisms,
                    e.edges.join(";")
                ));
            }
            if let Some((transition, inverse)) = matrices {
                for (label, matrix) in [("P", transition), ("P_inverse", inverse)] {
                    out.push_str(&format!("# {label} at p = {}\n", args.p.unwrap()));
                    for row in matrix {
                        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                        out.push_str(&cells.join("\t"));
                        out.push('\n');
                    }
                }
            }
            out
        }
    };
    write_output(args.out.as_ref(), &content)
}

fn edge_tag(label: motifs::graph::EdgeLabel) -> Option<char> {
    use motifs::graph::EdgeLabel::*;
    match label {
        Plain => None,
        Fwd => Some('>'),
        Rev => Some('<'),
        Bidir => Some('='),
        Plus => Some('+'),
        Minus => Some('-'),
    }
}

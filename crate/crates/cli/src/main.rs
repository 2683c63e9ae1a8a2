//! `forge`: build and check Cayley hypergraphs of PSL/PGL(d, F_{q^{dn}}).
//!
//! Exit codes: 0 all checks pass, 1 internal error, 2 checks failed,
//! 3 invalid input, 4 resource cap.

mod config;
mod verify;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use forge_core::cayley::{regularity_check, CayleyError, CayleyHypergraph};
use forge_core::genset::fund_set;
use forge_core::skewpoly::{SkewError, SkewRing};
use forge_core::spectra::{ramanujan_check, CheckOptions, DEFAULT_DENSE_CUTOFF};

use config::{Failure, RunConfig};

#[derive(Parser)]
#[command(
    name = "forge",
    version,
    about = "Explicit Ramanujan hypergraphs from skew polynomials"
)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Factor 1 - t into d linear skew factors.
    Factor(FieldArgs),
    /// List the generator set.
    Gens(FieldArgs),
    /// Build the Cayley graph (or a ball) and write it out.
    Build(BuildArgs),
    /// Check the Ramanujan bound on a graph file.
    Spectra(SpectraArgs),
    /// Run the whole pipeline and report every check.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
    Edges,
}

#[derive(Args, Clone, Debug)]
pub struct FieldArgs {
    #[arg(long)]
    pub p: u32,
    #[arg(long, default_value_t = 1)]
    pub e: usize,
    #[arg(long)]
    pub d: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Clone, Debug)]
pub struct GraphArgs {
    #[arg(long)]
    pub p: u32,
    #[arg(long, default_value_t = 1)]
    pub e: usize,
    #[arg(long)]
    pub d: usize,
    /// Modulus as "c*t^k+..." over F_q, or "auto:n" for the smallest
    /// admissible irreducible of degree d*n.
    #[arg(long)]
    pub f: String,
    /// Build only the BFS ball of this radius.
    #[arg(long)]
    pub ball: Option<usize>,
    /// Maximum number of vertices.
    #[arg(long, default_value_t = 200_000)]
    pub cap: usize,
}

#[derive(Args, Clone, Debug)]
struct BuildArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone, Debug)]
struct SpectraArgs {
    /// Graph file written by `forge build --format json`.
    graph: PathBuf,
    /// Report JSON path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Eigenvalue CSV path.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_DENSE_CUTOFF)]
    dense_cutoff: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Clone, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, default_value_t = DEFAULT_DENSE_CUTOFF)]
    pub dense_cutoff: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random pairs for the representation check.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    /// Vertices sampled by the link check.
    #[arg(long, default_value_t = 1)]
    pub link_samples: usize,
    /// Report JSON path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors map to "invalid input" so 2 keeps meaning "checks failed"
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    }
    let result = match cli.command {
        Command::Factor(a) => cmd_factor(&a),
        Command::Gens(a) => cmd_gens(&a),
        Command::Build(a) => cmd_build(&a),
        Command::Spectra(a) => cmd_spectra(&a),
        Command::Verify(a) => verify::cmd_verify(&a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::Internal(format!("{}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct FactorOutput {
    q: u64,
    d: usize,
    /// x_d = 1, …, x_1 as F_{q^d} indices.
    xs: Vec<u64>,
    factors: Vec<String>,
    product: String,
}

fn cmd_factor(a: &FieldArgs) -> Result<u8, Failure> {
    let ctx = RunConfig::field_ctx(a.p, a.e, a.d, 1)?;
    let ring = SkewRing::new(&ctx);
    let sf = match ring.standard_factorization() {
        Ok(sf) => sf,
        Err(SkewError::ProductMismatch) => {
            return Err(Failure::Internal(
                "factor product differs from 1 - t".into(),
            ))
        }
        Err(e) => return Err(Failure::Internal(e.to_string())),
    };
    let out = FactorOutput {
        q: ctx.q(),
        d: ctx.d(),
        xs: sf.xs.iter().map(|x| ctx.skew().index(x)).collect(),
        factors: sf
            .factors
            .iter()
            .map(|g| ring.text(g).to_string())
            .collect(),
        product: ring.pretty_product(&sf.factors),
    };
    let text = match a.format {
        Format::Json => serde_json::to_string_pretty(&out).unwrap() + "\n",
        _ => {
            let xs: Vec<String> = out.xs.iter().map(u64::to_string).collect();
            format!(
                "x = [{}]\n1 - T^{} = {}\n",
                xs.join(", "),
                ctx.d(),
                out.product
            )
        }
    };
    emit(a.out.as_deref(), &text)?;
    Ok(0)
}

#[derive(Serialize)]
struct GenOutput {
    id: usize,
    #[serde(rename = "type")]
    kind: usize,
    subspace: Vec<Vec<u64>>,
    skew: String,
    complement: Option<usize>,
}

fn cmd_gens(a: &FieldArgs) -> Result<u8, Failure> {
    let ctx = RunConfig::field_ctx(a.p, a.e, a.d, 1)?;
    let ring = SkewRing::new(&ctx);
    let gens = fund_set(&ctx).map_err(|e| Failure::Internal(e.to_string()))?;
    let text = match a.format {
        Format::Json => {
            let out: Vec<GenOutput> = gens
                .iter()
                .map(|g| GenOutput {
                    id: g.id,
                    kind: g.kind,
                    subspace: g.subspace.basis_indices(&ctx),
                    skew: ring.text(&g.skew).to_string(),
                    complement: g.complement,
                })
                .collect();
            serde_json::to_string_pretty(&out).unwrap() + "\n"
        }
        _ => gens
            .iter()
            .map(|g| {
                format!(
                    "{} type={} W={:?} gamma={} complement={}\n",
                    g.id,
                    g.kind,
                    g.subspace.basis_indices(&ctx),
                    ring.pretty(&g.skew),
                    g.complement.map_or("-".into(), |c| c.to_string())
                )
            })
            .collect(),
    };
    emit(a.out.as_deref(), &text)?;
    Ok(0)
}

fn cmd_build(a: &BuildArgs) -> Result<u8, Failure> {
    let cfg = RunConfig::from_graph_args(&a.graph)?;
    let graph = cfg.build_graph(a.graph.ball)?;
    let text = match a.format {
        Format::Json | Format::Text => graph.to_json(&cfg.ctx) + "\n",
        Format::Dot => graph.to_dot(),
        Format::Edges => graph.to_edge_list(),
    };
    emit(a.out.as_deref(), &text)?;
    let reg = regularity_check(&graph);
    let scope = if graph.is_complete() {
        "all vertices"
    } else {
        "interior vertices"
    };
    eprintln!(
        "{} {} vertices, f = {}, regularity {:?} on {} {} ({})",
        graph.params.group,
        graph.vertex_count(),
        graph.params.f,
        graph.params.regularity,
        reg.checked_vertices,
        scope,
        if reg.ok { "ok" } else { "FAILED" }
    );
    if !graph.is_complete() {
        eprintln!(
            "spectra skipped: graph is a radius-{} ball, not the full closure",
            a.graph.ball.unwrap_or(0)
        );
    }
    Ok(if reg.ok { 0 } else { 2 })
}

fn cmd_spectra(a: &SpectraArgs) -> Result<u8, Failure> {
    let text = fs::read_to_string(&a.graph)
        .map_err(|e| Failure::Invalid(format!("{}: {e}", a.graph.display())))?;
    let (_, graph) =
        CayleyHypergraph::from_json(&text).map_err(|e| Failure::Invalid(e.to_string()))?;
    let opts = CheckOptions {
        dense_cutoff: a.dense_cutoff,
        seed: a.seed,
        ..Default::default()
    };
    let report = ramanujan_check(&graph, &opts).map_err(|e| match e {
        forge_core::spectra::SpectraError::Cayley(CayleyError::Partial(r)) => Failure::Invalid(
            format!("graph is a radius-{r} ball; spectra need the full closure"),
        ),
        e => Failure::Internal(e.to_string()),
    })?;
    if let Some(csv) = &a.csv {
        emit(Some(csv), &report.to_csv())?;
    }
    emit(a.out.as_deref(), &(report.to_json() + "\n"))?;
    for c in &report.colors {
        eprintln!(
            "color {}: max nontrivial |lambda| = {:.6}, bound {:.6}, margin {:.6} ({})",
            c.color,
            c.max_nontrivial_modulus,
            c.bound,
            c.margin,
            if c.pass { "PASS" } else { "FAIL" }
        );
    }
    eprintln!("runtime {:.2?}", report.runtime);
    Ok(if report.pass { 0 } else { 2 })
}

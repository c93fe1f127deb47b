//! Command-line front end. Every subcommand reads its inputs, calls one core
//! operation and writes the result; no numerics live here.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::DMatrix;
use pathcorr_core::chains::{amplification_factor, chain_sums, ChainSpec};
use pathcorr_core::gaussinfo::{
    conditional_mi_closed, conditional_mi_rescaled_checked, conditional_mi_series, InfoMethod, InfoResult,
    TriPartition, DEFAULT_N_MAX,
};
use pathcorr_core::matrices::{partial_to_marginal_oracle, spectral_report, PartialCorrelationGraph};
use pathcorr_core::pathsum::{
    convergence_profile, marginal_corr_closed, marginal_corr_expansion, rescale, ProfileRow, RescaledGraph,
};
use pathcorr_core::sampling::{
    canonical_graph, martingale_covariance, sample_partial_graph_flagged, Canonical, MartingaleSpec, SampleSpec,
    GENERATOR_ID,
};
use pathcorr_core::transforms::{
    detect_separating_nodes, latent_reduce, marginalize_nodes, marginalize_nodes_path_form, sever_nodes,
    verify_reduction, TOL_FACT,
};
use serde::Serialize;
use serde_json::json;

use crate::error::CliError;
use crate::figures;
use crate::io::{num, opt_num, read_matrix, write_csv, write_json, MatrixFile, MatrixKind, Provenance};

#[derive(Debug, Parser)]
#[command(name = "pathcorr", version, about = "Marginal correlations from partial-correlation graphs")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Convert between covariance, precision, partial and marginal forms
    Convert(ConvertArgs),
    /// Truncated path expansion of one marginal correlation
    Expand(ExpandArgs),
    /// Convergence profile of the expansion as CSV (L,rho_hat,abs_gap)
    Profile(ProfileArgs),
    /// Delete nodes, keeping the partial correlations of the rest
    Sever(SetArgs),
    /// Integrate nodes out, keeping the marginal correlations of the rest
    Marginalize(MarginalizeArgs),
    /// Replace a node set by the minimal number of latent variables
    Reduce(SetArgs),
    /// Connectivity and factorisation tests for every node
    Separators(SeparatorArgs),
    /// Homogeneous chain tables
    Chain(ChainArgs),
    /// Gaussian conditional mutual information I(A;B|Z)
    Mi(MiArgs),
    /// Generate a seeded or canonical test system
    Sample(SampleArgs),
    /// Data for the amplification, convergence and rescaling plots
    Figure(FigureArgs),
}

#[derive(Debug, Args)]
struct Input {
    /// Matrix file (JSON, or CSV with --kind)
    #[arg(long = "in")]
    input: PathBuf,
    /// Kind of a CSV input
    #[arg(long, value_enum)]
    kind: Option<MatrixKind>,
}

impl Input {
    fn graph(&self) -> Result<PartialCorrelationGraph, CliError> {
        read_matrix(&self.input, self.kind)?.to_graph()
    }
}

#[derive(Debug, Args)]
struct ConvertArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, value_enum)]
    to: MatrixKind,
    #[arg(long)]
    out: PathBuf,
}

/// `--q` takes a number or `auto` (0.95 of the admissible upper bound).
#[derive(Debug, Clone, Copy)]
enum QArg {
    Auto,
    Value(f64),
}

fn parse_q(s: &str) -> Result<QArg, String> {
    if s == "auto" {
        return Ok(QArg::Auto);
    }
    s.parse::<f64>()
        .map(QArg::Value)
        .map_err(|_| format!("expected a number or 'auto', got {s:?}"))
}

fn rescaled(g: &PartialCorrelationGraph, q: QArg) -> Result<RescaledGraph, CliError> {
    Ok(match q {
        QArg::Auto => rescale(g, None)?,
        QArg::Value(v) => rescale(g, Some(v))?,
    })
}

#[derive(Debug, Args)]
struct ExpandArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long)]
    i: String,
    #[arg(long)]
    j: String,
    #[arg(long = "L")]
    l: usize,
    #[arg(long, value_parser = parse_q)]
    q: Option<QArg>,
    /// JSON result file; a summary is always printed
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ProfileArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long)]
    i: String,
    #[arg(long)]
    j: String,
    #[arg(long = "Lmax")]
    lmax: usize,
    #[arg(long, value_parser = parse_q)]
    q: Option<QArg>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct SetArgs {
    #[command(flatten)]
    input: Input,
    /// Comma-separated labels
    #[arg(long = "S", value_delimiter = ',', required = true)]
    s: Vec<String>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct MarginalizeArgs {
    #[command(flatten)]
    set: SetArgs,
    /// Use path sums truncated at this length instead of the exact block form
    #[arg(long = "L")]
    l: Option<usize>,
    /// Use resummed path sums instead of the block form
    #[arg(long)]
    path_form: bool,
}

#[derive(Debug, Args)]
struct SeparatorArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, default_value_t = TOL_FACT)]
    tol: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ChainTable {
    /// d,r,i,j,rho
    Pairs,
    /// m,gamma at fixed --k
    Gamma,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PairSet {
    All,
    Ends,
    Adjacent,
}

#[derive(Debug, Args)]
struct ChainArgs {
    #[arg(long, value_enum, default_value = "pairs")]
    table: ChainTable,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    r: f64,
    #[arg(long, value_enum, default_value = "all")]
    pairs: PairSet,
    #[arg(long)]
    k: Option<usize>,
    /// Largest m of the gamma table
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MiMethod {
    Closed,
    Series,
    Rescaled,
}

#[derive(Debug, Args)]
struct MiArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long = "A", value_delimiter = ',', required = true)]
    a: Vec<String>,
    #[arg(long = "B", value_delimiter = ',', required = true)]
    b: Vec<String>,
    /// Conditioning set; every remaining node when omitted. Nodes in none of
    /// A, B, Z are marginalised out first.
    #[arg(long = "Z", value_delimiter = ',')]
    z: Option<Vec<String>>,
    #[arg(long, value_enum, default_value = "closed")]
    method: MiMethod,
    #[arg(long, default_value_t = DEFAULT_N_MAX)]
    n_max: usize,
    /// Rescaling parameter for --method rescaled
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Model {
    Gaussian,
    Chain,
    Ring,
    OneManyOne,
    Martingale,
}

#[derive(Debug, Args)]
struct SampleArgs {
    #[arg(long, value_enum, default_value = "gaussian")]
    model: Model,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, allow_hyphen_values = true)]
    r: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    /// Keep samples with spectral radius at least 1
    #[arg(long)]
    allow_flagged: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FigureKind {
    Fig4,
    Fig5,
    Fig6,
}

#[derive(Debug, Args)]
struct FigureArgs {
    #[arg(value_enum)]
    kind: FigureKind,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 10)]
    k: usize,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long = "Lmax")]
    lmax: Option<usize>,
    /// 1-based node numbers of the profiled pair
    #[arg(long, default_value_t = 1)]
    i: usize,
    #[arg(long, default_value_t = 2)]
    j: usize,
    #[arg(long)]
    out: PathBuf,
}

/// Parses `args` (program name first), runs the command and returns the exit
/// status: 0 on success, 1 on a domain or IO error, 2 on a usage error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.cmd) {
        Ok(summary) => {
            println!("{summary}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cmd: Command) -> Result<String, CliError> {
    match cmd {
        Command::Convert(a) => convert(a),
        Command::Expand(a) => expand(a),
        Command::Profile(a) => profile(a),
        Command::Sever(a) => sever(a),
        Command::Marginalize(a) => marginalize(a),
        Command::Reduce(a) => reduce(a),
        Command::Separators(a) => separators(a),
        Command::Chain(a) => chain(a),
        Command::Mi(a) => mi(a),
        Command::Sample(a) => sample(a),
        Command::Figure(a) => figure(a),
    }
}

fn convert(a: ConvertArgs) -> Result<String, CliError> {
    let f = read_matrix(&a.input.input, a.input.kind)?;
    let out = f.convert(a.to)?;
    write_json(&a.out, &out)?;
    Ok(format!(
        "{} -> {} (dim {}) written to {}",
        f.kind.name(),
        a.to.name(),
        out.dim,
        a.out.display()
    ))
}

#[derive(Serialize)]
struct ExpandOut<'a> {
    i: &'a str,
    j: &'a str,
    #[serde(rename = "L")]
    l: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    q: Option<f64>,
    rho_hat: f64,
    closed: f64,
    oracle: f64,
    abs_gap: f64,
    nu_r: f64,
}

fn expand(a: ExpandArgs) -> Result<String, CliError> {
    let g = a.input.graph()?;
    let (i, j) = (g.index_of(&a.i)?, g.index_of(&a.j)?);
    let oracle = partial_to_marginal_oracle(&g)?.get(i, j);
    let closed = marginal_corr_closed(&g, i, j)?;
    let (rho_hat, q) = match a.q {
        Some(q) => {
            let rg = rescaled(&g, q)?;
            (marginal_corr_expansion(&rg, i, j, a.l)?, Some(rg.q()))
        }
        None => (marginal_corr_expansion(&g, i, j, a.l)?, None),
    };
    let out = ExpandOut {
        i: &a.i,
        j: &a.j,
        l: a.l,
        q,
        rho_hat,
        closed,
        oracle,
        abs_gap: (rho_hat - oracle).abs(),
        nu_r: spectral_report(&g).nu_r,
    };
    if let Some(path) = &a.out {
        write_json(path, &out)?;
    }
    Ok(format!(
        "rho_hat({},{}; L={}) = {} (oracle {}, gap {:.3e})",
        a.i, a.j, a.l, rho_hat, oracle, out.abs_gap
    ))
}

fn profile_rows(rows: &[ProfileRow]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| vec![r.length.to_string(), opt_num(r.rho_hat), opt_num(r.abs_gap)])
        .collect()
}

fn profile(a: ProfileArgs) -> Result<String, CliError> {
    let g = a.input.graph()?;
    let (i, j) = (g.index_of(&a.i)?, g.index_of(&a.j)?);
    let rows = match a.q {
        Some(q) => convergence_profile(&rescaled(&g, q)?, i, j, a.lmax)?,
        None => convergence_profile(&g, i, j, a.lmax)?,
    };
    write_csv(&a.out, &["L", "rho_hat", "abs_gap"], &profile_rows(&rows))?;
    let last = rows.last().and_then(|r| r.abs_gap);
    Ok(format!(
        "profile {}-{} up to L={} written to {} (final gap {})",
        a.i,
        a.j,
        a.lmax,
        a.out.display(),
        opt_num(last)
    ))
}

fn sever(a: SetArgs) -> Result<String, CliError> {
    let g = a.input.graph()?;
    let s = g.indices_of(&a.s)?;
    let out = sever_nodes(&g, &s)?;
    write_json(&a.out, &MatrixFile::from_graph(&out))?;
    Ok(format!("severed {} nodes, {} remain, written to {}", s.len(), out.dim(), a.out.display()))
}

fn marginalize(a: MarginalizeArgs) -> Result<String, CliError> {
    let g = a.set.input.graph()?;
    let s = g.indices_of(&a.set.s)?;
    let out = match (a.l, a.path_form) {
        (Some(l), _) => marginalize_nodes_path_form(&g, &s, Some(l))?,
        (None, true) => marginalize_nodes_path_form(&g, &s, None)?,
        (None, false) => marginalize_nodes(&g, &s)?,
    };
    write_json(&a.set.out, &MatrixFile::from_graph(&out))?;
    Ok(format!(
        "marginalised {} nodes, {} remain, written to {}",
        s.len(),
        out.dim(),
        a.set.out.display()
    ))
}

fn rows_of(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

#[derive(Serialize)]
struct ReductionOut {
    kept: Vec<String>,
    removed: Vec<String>,
    latent_count: usize,
    singular_values: Vec<f64>,
    /// Rows follow `removed`, columns the latents.
    a_tilde: Vec<Vec<f64>>,
    /// Rows follow `kept`, columns the latents.
    b_tilde: Vec<Vec<f64>>,
    reduced_graph: MatrixFile,
    enlarged_graph: MatrixFile,
    residual: BTreeMap<&'static str, f64>,
}

fn reduce(a: SetArgs) -> Result<String, CliError> {
    let g = a.input.graph()?;
    let s = g.indices_of(&a.s)?;
    let red = latent_reduce(&g, &s)?;
    let res = verify_reduction(&g, &red)?;
    let labels = |v: &[usize]| v.iter().map(|&k| g.label(k).to_string()).collect::<Vec<_>>();
    let out = ReductionOut {
        kept: labels(&red.kept),
        removed: labels(&red.removed),
        latent_count: red.latent_count,
        singular_values: red.singular_values.clone(),
        a_tilde: rows_of(&red.a_tilde),
        b_tilde: rows_of(&red.b_tilde),
        reduced_graph: MatrixFile::from_graph(&red.reduced_graph),
        enlarged_graph: MatrixFile::from_graph(&red.enlarged_graph),
        residual: BTreeMap::from([
            ("partial", res.partial),
            ("marginal", res.marginal),
            ("enlarged", res.enlarged),
        ]),
    };
    write_json(&a.out, &out)?;
    Ok(format!(
        "{} nodes replaced by {} latent(s), residual {:.3e}, written to {}",
        s.len(),
        red.latent_count,
        res.max(),
        a.out.display()
    ))
}

#[derive(Serialize)]
struct SeparatorOut {
    node: String,
    components: (Vec<String>, Vec<String>),
    factorisation_residual: f64,
    splits_graph: bool,
    factorises: bool,
}

fn separators(a: SeparatorArgs) -> Result<String, CliError> {
    let g = a.input.graph()?;
    let reps = detect_separating_nodes(&g, a.tol)?;
    let labels = |v: &[usize]| v.iter().map(|&k| g.label(k).to_string()).collect::<Vec<_>>();
    let out: Vec<SeparatorOut> = reps
        .iter()
        .map(|r| SeparatorOut {
            node: g.label(r.node).to_string(),
            components: (labels(&r.components.0), labels(&r.components.1)),
            factorisation_residual: r.factorisation_residual,
            splits_graph: r.splits_graph,
            factorises: r.factorises,
        })
        .collect();
    write_json(&a.out, &out)?;
    let found: Vec<&str> = out.iter().filter(|r| r.splits_graph).map(|r| r.node.as_str()).collect();
    let disagree = reps.iter().filter(|r| !r.consistent()).count();
    Ok(format!(
        "separating nodes: [{}]; {disagree} disagreement(s); written to {}",
        found.join(","),
        a.out.display()
    ))
}

fn chain(a: ChainArgs) -> Result<String, CliError> {
    match a.table {
        ChainTable::Pairs => {
            let d = a.d.ok_or_else(|| CliError::Usage("--d is required for the pairs table".into()))?;
            let sol = chain_sums(&ChainSpec::new(d, a.r)?)?;
            let pairs: Vec<(usize, usize)> = match a.pairs {
                PairSet::All => (1..=d).flat_map(|i| (i + 1..=d).map(move |j| (i, j))).collect(),
                PairSet::Ends => vec![(1, d)],
                PairSet::Adjacent => (1..d).map(|i| (i, i + 1)).collect(),
            };
            let mut rows = Vec::with_capacity(pairs.len());
            for (i, j) in pairs {
                rows.push(vec![d.to_string(), num(a.r), i.to_string(), j.to_string(), num(sol.pair_corr(i, j)?)]);
            }
            write_csv(&a.out, &["d", "r", "i", "j", "rho"], &rows)?;
            Ok(format!("{} chain pairs written to {}", rows.len(), a.out.display()))
        }
        ChainTable::Gamma => {
            let k = a.k.ok_or_else(|| CliError::Usage("--k is required for the gamma table".into()))?;
            let m_max = a.m.ok_or_else(|| CliError::Usage("--m is required for the gamma table".into()))?;
            let mut rows = Vec::with_capacity(m_max + 1);
            for m in 0..=m_max {
                rows.push(vec![m.to_string(), num(amplification_factor(k, m, a.r)?)]);
            }
            write_csv(&a.out, &["m", "gamma"], &rows)?;
            Ok(format!("gamma for m = 0..={m_max} written to {}", a.out.display()))
        }
    }
}

fn method_name(m: InfoMethod) -> &'static str {
    match m {
        InfoMethod::Closed => "closed",
        InfoMethod::TraceSeries => "series",
        InfoMethod::RescaledSeries => "rescaled",
    }
}

fn mi(a: MiArgs) -> Result<String, CliError> {
    let mut g = a.input.graph()?;
    if let Some(z) = &a.z {
        // nodes outside A, B and Z are integrated out first
        let named: Vec<&String> = a.a.iter().chain(&a.b).chain(z).collect();
        let rest: Vec<usize> = (0..g.dim()).filter(|&k| !named.iter().any(|l| *l == g.label(k))).collect();
        for l in &named {
            g.index_of(l)?;
        }
        if !rest.is_empty() {
            g = marginalize_nodes(&g, &rest)?;
        }
    }
    let sa = g.indices_of(&a.a)?;
    let sb = g.indices_of(&a.b)?;
    let part = match &a.z {
        Some(z) => TriPartition::new(g.dim(), &sa, &sb, &g.indices_of(z)?)?,
        None => TriPartition::with_rest(g.dim(), &sa, &sb)?,
    };
    let res: InfoResult = match a.method {
        MiMethod::Closed => conditional_mi_closed(&g, &part)?,
        MiMethod::Series => conditional_mi_series(&g, &part, a.n_max)?,
        MiMethod::Rescaled => conditional_mi_rescaled_checked(&g, &part, a.q, a.n_max)?,
    };
    let mut out = json!({
        "nats": res.nats,
        "bits": res.bits(),
        "method": method_name(res.method),
    });
    if let Some(terms) = &res.series_terms {
        out["terms"] = json!(terms.len());
    }
    if let Some(q) = res.q {
        out["q"] = json!(q);
    }
    write_json(&a.out, &out)?;
    Ok(format!(
        "I = {} nats ({} bits) by {}, written to {}",
        res.nats,
        res.bits(),
        method_name(res.method),
        a.out.display()
    ))
}

fn need<T>(v: Option<T>, flag: &str, model: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("--{flag} is required for --model {model}")))
}

fn sample(a: SampleArgs) -> Result<String, CliError> {
    let mut params = BTreeMap::new();
    params.insert("d".to_string(), json!(a.d));
    let (file, kind, seed, generator) = match a.model {
        Model::Gaussian => {
            let n = need(a.n, "n", "gaussian")?;
            params.insert("n".into(), json!(n));
            let s = sample_partial_graph_flagged(&SampleSpec::new(a.d, n, a.seed)?)?;
            if s.flagged && !a.allow_flagged {
                return Err(CliError::Domain(pathcorr_core::Error::SpectralRadiusTooLarge(s.spectral.nu_r)));
            }
            params.insert("nu_r".into(), json!(s.spectral.nu_r));
            params.insert("flagged".into(), json!(s.flagged));
            (MatrixFile::from_graph(&s.graph), "gaussian", Some(a.seed), Some(GENERATOR_ID.to_string()))
        }
        Model::Chain | Model::Ring | Model::OneManyOne => {
            let r = need(a.r, "r", "chain/ring/one-many-one")?;
            params.insert("r".into(), json!(r));
            let (c, name) = match a.model {
                Model::Chain => (Canonical::Chain { d: a.d, r }, "chain"),
                Model::Ring => (Canonical::Ring { d: a.d, r }, "ring"),
                _ => (Canonical::OneManyOne { d: a.d, r }, "one_many_one"),
            };
            // canonical systems are taken with unit precision diagonal
            let g = canonical_graph(c)?.with_scale(vec![1.0; a.d])?;
            (MatrixFile::from_graph(&g), name, None, None)
        }
        Model::Martingale => {
            let alpha = need(a.alpha, "alpha", "martingale")?;
            params.insert("alpha".into(), json!(alpha));
            let c = martingale_covariance(&MartingaleSpec::uniform(a.d, alpha)?)?;
            let labels: Vec<String> = (1..=a.d).map(|k| k.to_string()).collect();
            (MatrixFile::new(MatrixKind::Covariance, c.matrix(), &labels), "martingale", None, None)
        }
    };
    let file = file.with_provenance(Provenance {
        kind: kind.to_string(),
        params,
        seed,
        generator,
    });
    write_json(&a.out, &file)?;
    Ok(format!("{kind} {} matrix (dim {}) written to {}", file.kind.name(), file.dim, a.out.display()))
}

fn figure(a: FigureArgs) -> Result<String, CliError> {
    if a.i == 0 || a.j == 0 || a.i == a.j {
        return Err(CliError::Usage("--i and --j must be distinct 1-based node numbers".into()));
    }
    let (i, j) = (a.i - 1, a.j - 1);
    match a.kind {
        FigureKind::Fig4 => {
            let rows = figures::fig4(&figures::FIG4_R, a.k, a.m.unwrap_or(20))?;
            let table: Vec<Vec<String>> = rows
                .iter()
                .map(|r| vec![num(r.r), r.m.to_string(), num(r.gamma)])
                .collect();
            write_csv(&a.out, &["r", "m", "gamma"], &table)?;
            Ok(format!("fig4: {} rows written to {}", table.len(), a.out.display()))
        }
        FigureKind::Fig5 => {
            let rows = figures::fig5(
                a.seed,
                3,
                a.d.unwrap_or(100),
                a.n.unwrap_or(1000),
                i,
                j,
                a.lmax.unwrap_or(10),
            )?;
            let table: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.seed.to_string(),
                        r.length.to_string(),
                        opt_num(r.rho_hat),
                        num(r.oracle),
                        opt_num(r.abs_gap),
                    ]
                })
                .collect();
            write_csv(&a.out, &["seed", "L", "rho_hat", "oracle", "abs_gap"], &table)?;
            Ok(format!("fig5: {} rows written to {}", table.len(), a.out.display()))
        }
        FigureKind::Fig6 => {
            let (seed, rows) = figures::fig6(
                a.seed,
                a.d.unwrap_or(20),
                a.n.unwrap_or(40),
                &figures::FIG6_Q_FRACTIONS,
                i,
                j,
                a.lmax.unwrap_or(60),
            )?;
            let table: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        num(r.fraction),
                        num(r.q),
                        r.length.to_string(),
                        opt_num(r.rho_hat),
                        opt_num(r.abs_gap),
                    ]
                })
                .collect();
            write_csv(&a.out, &["fraction", "q", "L", "rho_hat", "abs_gap"], &table)?;
            Ok(format!("fig6: sample seed {seed}, {} rows written to {}", table.len(), a.out.display()))
        }
    }
}

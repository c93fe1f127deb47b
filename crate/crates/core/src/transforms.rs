//! Structural transforms: node severance, marginalisation, separating-node
//! detection and the minimal latent-variable equivalent model.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg;
use crate::matrices::{partial_to_marginal_oracle, PartialCorrelationGraph};
use crate::pathsum::PathWeights;

/// Default absolute tolerance on the factorisation residual.
pub const TOL_FACT: f64 = 1e-9;

/// Links with `|r_ij|` at or below this are treated as absent by the
/// connectivity test of [`detect_separating_nodes`].
pub const EDGE_TOL: f64 = 1e-12;

/// Singular values below `RANK_TOL · s_max` do not count toward the latent count.
pub const RANK_TOL: f64 = 1e-10;

/// Split of the node set into kept nodes `T` and removed nodes `S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodePartition {
    pub kept: Vec<usize>,
    pub removed: Vec<usize>,
}

impl NodePartition {
    /// `removed` may be empty; `kept` (its complement) may not.
    pub fn new(dim: usize, removed: &[usize]) -> Result<Self> {
        let removed = linalg::normalize_set(dim, removed)?;
        let kept = linalg::complement(dim, &removed);
        if kept.is_empty() {
            return Err(Error::EmptyRemainder);
        }
        Ok(NodePartition { kept, removed })
    }
}

/// Deletes the nodes in `s`; partial correlations among the rest are unchanged.
pub fn sever_nodes(g: &PartialCorrelationGraph, s: &[usize]) -> Result<PartialCorrelationGraph> {
    let part = NodePartition::new(g.dim(), s)?;
    g.subgraph(&part.kept)
}

fn graph_from_precision_block(
    g: &PartialCorrelationGraph,
    kept: &[usize],
    omega: &DMatrix<f64>,
) -> PartialCorrelationGraph {
    let n = kept.len();
    let diag: Vec<f64> = (0..n).map(|a| libm::sqrt(omega[(a, a)])).collect();
    let w = DMatrix::from_fn(n, n, |a, b| {
        if a == b {
            0.0
        } else {
            (-omega[(a, b)] / (diag[a] * diag[b])).clamp(-1.0, 1.0)
        }
    });
    let labels = kept.iter().map(|&k| String::from(g.label(k))).collect();
    let scale = g
        .scale()
        .map(|l| kept.iter().zip(&diag).map(|(&k, &s)| l[k] * s).collect());
    PartialCorrelationGraph::from_parts_unchecked(w, labels, scale)
}

/// Integrates out the nodes in `s` with the Schur complement
/// `Ω' = Ω_T - Ω_TS Ω_S⁻¹ Ω_ST` of the normalised precision `1 - R`.
/// A stored scale vector is carried over so that `Λ'(1 - R')Λ'` is the
/// precision of the kept variables.
pub fn marginalize_nodes(g: &PartialCorrelationGraph, s: &[usize]) -> Result<PartialCorrelationGraph> {
    let part = NodePartition::new(g.dim(), s)?;
    if part.removed.is_empty() {
        return Ok(g.clone());
    }
    let (t, s) = (&part.kept, &part.removed);
    let omega = DMatrix::identity(g.dim(), g.dim()) - g.weights();
    let ch = linalg::cholesky(linalg::submatrix(&omega, s, s)).ok_or(Error::SingularBlock)?;
    let om_ts = linalg::submatrix(&omega, t, s);
    let mut schur = linalg::submatrix(&omega, t, t) - &om_ts * ch.solve(&om_ts.transpose());
    linalg::symmetrize(&mut schur);
    Ok(graph_from_precision_block(g, t, &schur))
}

/// Marginalisation through sums over paths whose interior lies in `s`:
/// `r'_ij = (r_ij + p_iSj) / sqrt((1 - p_iSi)(1 - p_jSj))`.
/// With `max_len = None` the sums are resummed exactly, otherwise truncated.
pub fn marginalize_nodes_path_form(
    g: &PartialCorrelationGraph,
    s: &[usize],
    max_len: Option<usize>,
) -> Result<PartialCorrelationGraph> {
    let part = NodePartition::new(g.dim(), s)?;
    let (t, s) = (&part.kept, &part.removed);
    let w = g.weights();
    let n = t.len();
    let through = |a: usize, b: usize| -> Result<f64> {
        match max_len {
            None => crate::pathsum::restricted_sum_closed(g, a, b, s),
            Some(l) => {
                let q = crate::pathsum::PathQuery::new(a, b, l).forbid(&[a, b]).allow_only(s);
                Ok(crate::pathsum::restricted_path_sums(g, &q)?.total())
            }
        }
    };
    let mut loops = Vec::with_capacity(n);
    for &a in t {
        let l = through(a, a)?;
        if !(l < 1.0 - crate::pathsum::DENOMINATOR_GUARD) {
            return Err(Error::DenominatorNonPositive { node: a, loop_sum: l });
        }
        loops.push(l);
    }
    let mut omega = DMatrix::from_diagonal(&DVector::from_iterator(n, loops.iter().map(|l| 1.0 - l)));
    for a in 0..n {
        for b in (a + 1)..n {
            let v = if s.is_empty() { w[(t[a], t[b])] } else { through(t[a], t[b])? };
            omega[(a, b)] = -v;
            omega[(b, a)] = -v;
        }
    }
    Ok(graph_from_precision_block(g, t, &omega))
}

/// Separating-node diagnostics for one node `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparatorReport {
    pub node: usize,
    /// Partition of the other nodes in `k`'s connected component. When removing
    /// `k` disconnects the component, this is one piece against the rest;
    /// otherwise it is the split minimising the factorisation residual.
    pub components: (Vec<usize>, Vec<usize>),
    /// `max |ρ_ij - ρ_ik ρ_kj|` over `i`, `j` on opposite sides.
    pub factorisation_residual: f64,
    /// Removing `k` disconnects its component.
    pub splits_graph: bool,
    /// `factorisation_residual < tol`.
    pub factorises: bool,
}

impl SeparatorReport {
    /// Whether the connectivity and factorisation criteria agree.
    pub fn consistent(&self) -> bool {
        self.splits_graph == self.factorises
    }
}

fn components_of(g: &PartialCorrelationGraph, nodes: &[usize], edge_tol: f64) -> Vec<Vec<usize>> {
    let mut seen = vec![false; g.dim()];
    let inside = {
        let mut m = vec![false; g.dim()];
        for &k in nodes {
            m[k] = true;
        }
        m
    };
    let mut out = Vec::new();
    for &start in nodes {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut head = 0;
        while head < comp.len() {
            let u = comp[head];
            head += 1;
            for v in 0..g.dim() {
                if inside[v] && !seen[v] && v != u && g.weight(u, v).abs() > edge_tol {
                    seen[v] = true;
                    comp.push(v);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Maximum spanning tree over the complete graph on `nodes` weighted by
/// `res`; returns the sides of the cut at its lightest edge and that weight,
/// which is the smallest achievable maximum cross residual.
fn bottleneck_split(nodes: &[usize], res: &DMatrix<f64>) -> (Vec<usize>, Vec<usize>, f64) {
    let n = nodes.len();
    let mut in_tree = vec![false; n];
    let mut best = vec![f64::NEG_INFINITY; n];
    let mut parent = vec![usize::MAX; n];
    let mut edges = Vec::with_capacity(n - 1);
    best[0] = f64::INFINITY;
    for _ in 0..n {
        let u = (0..n)
            .filter(|&v| !in_tree[v])
            .max_by(|&a, &b| best[a].total_cmp(&best[b]).then(b.cmp(&a)))
            .unwrap();
        in_tree[u] = true;
        if parent[u] != usize::MAX {
            edges.push((parent[u], u, best[u]));
        }
        for v in 0..n {
            if !in_tree[v] && res[(u, v)] > best[v] {
                best[v] = res[(u, v)];
                parent[v] = u;
            }
        }
    }
    let (cut, _) = edges
        .iter()
        .enumerate()
        .min_by(|a, b| a.1 .2.total_cmp(&b.1 .2))
        .unwrap();
    let weight = edges[cut].2;
    // label the side containing the first tree vertex after dropping the cut edge
    let mut side = vec![false; n];
    side[0] = true;
    let mut changed = true;
    while changed {
        changed = false;
        for (e, &(a, b, _)) in edges.iter().enumerate() {
            if e != cut && side[a] != side[b] {
                side[a] = true;
                side[b] = true;
                changed = true;
            }
        }
    }
    let left = (0..n).filter(|&v| side[v]).map(|v| nodes[v]).collect();
    let right = (0..n).filter(|&v| !side[v]).map(|v| nodes[v]).collect();
    (left, right, weight)
}

/// Runs the connectivity test and the marginal-factorisation test on every
/// node of every connected component with at least three nodes. Links no
/// larger than [`EDGE_TOL`] in magnitude do not count for connectivity.
pub fn detect_separating_nodes(g: &PartialCorrelationGraph, tol_fact: f64) -> Result<Vec<SeparatorReport>> {
    let p = partial_to_marginal_oracle(g)?;
    let all: Vec<usize> = (0..g.dim()).collect();
    let mut reports = Vec::new();
    for comp in components_of(g, &all, EDGE_TOL) {
        if comp.len() < 3 {
            continue;
        }
        for &k in &comp {
            let rest: Vec<usize> = comp.iter().copied().filter(|&v| v != k).collect();
            let m = rest.len();
            let res = DMatrix::from_fn(m, m, |a, b| {
                let (i, j) = (rest[a], rest[b]);
                (p.get(i, j) - p.get(i, k) * p.get(k, j)).abs()
            });
            let pieces = components_of(g, &rest, EDGE_TOL);
            let splits_graph = pieces.len() >= 2;
            let (left, right, residual) = if splits_graph {
                let left = pieces[0].clone();
                let mut right: Vec<usize> = pieces[1..].iter().flatten().copied().collect();
                right.sort_unstable();
                let pos = |v: usize| rest.binary_search(&v).unwrap();
                let mut worst = 0.0_f64;
                for &i in &left {
                    for &j in &right {
                        worst = worst.max(res[(pos(i), pos(j))]);
                    }
                }
                (left, right, worst)
            } else {
                bottleneck_split(&rest, &res)
            };
            reports.push(SeparatorReport {
                node: k,
                components: (left, right),
                factorisation_residual: residual,
                splits_graph,
                factorises: residual < tol_fact,
            });
        }
    }
    Ok(reports)
}

/// Minimal latent-variable equivalent model for marginalising `removed`.
#[derive(Debug, Clone, PartialEq)]
pub struct LatentReduction {
    pub kept: Vec<usize>,
    pub removed: Vec<usize>,
    /// Numerical rank `μ` of the removed-by-kept block `Q` of `R`.
    pub latent_count: usize,
    /// The `μ` retained singular values `s_u` of `Q`, descending. The latent
    /// connections use `σ_u = sqrt(s_u)`.
    pub singular_values: Vec<f64>,
    /// `ã`: partial correlations latent ↔ removed node, `|removed| × μ`.
    pub a_tilde: DMatrix<f64>,
    /// `b̃`: partial correlations latent ↔ kept node, `|kept| × μ`.
    pub b_tilde: DMatrix<f64>,
    /// Original nodes followed by the latents. No removed node touches a kept
    /// node; integrating out the latents gives back `R`.
    pub enlarged_graph: PartialCorrelationGraph,
    /// Kept nodes followed by the latents, with `R` unchanged among kept nodes.
    pub reduced_graph: PartialCorrelationGraph,
}

fn latent_labels(existing: &[String], mu: usize) -> Vec<String> {
    (1..=mu)
        .map(|u| {
            let mut name = format!("Y{u}");
            while existing.contains(&name) {
                name.push('\'');
            }
            name
        })
        .collect()
}

/// Replaces `removed` by the smallest number of latent variables that keeps
/// every partial and marginal correlation among the kept nodes.
///
/// `Q = R[S, T] = Σ s_u a^u b^uᵀ` gives `μ = rank Q` latents connected by
/// `ã^u_i = σ_u a^u_i / sqrt(1 + Σ_v σ_v² (a^v_i)²)` and likewise for `b̃`,
/// with `σ_u = sqrt(s_u)` and the largest-magnitude entry of each `a^u`
/// positive. Within-block weights of the enlarged graph are adjusted to
/// `δ_i δ_k r_ik - Σ_u c^u_i c^u_k` (`δ_i² = 1 - Σ_u (c^u_i)²`, `c = ã` or `b̃`)
/// so that integrating out the latents reproduces `R` exactly. The reduced
/// graph keeps `R_T`, joins kept node and latent with `W = B diag(s) L`,
/// `L Lᵀ = Aᵀ (1 - R_S)⁻¹ A`, and leaves the latents mutually unconnected.
pub fn latent_reduce(g: &PartialCorrelationGraph, removed: &[usize]) -> Result<LatentReduction> {
    let part = NodePartition::new(g.dim(), removed)?;
    let (t, s) = (&part.kept, &part.removed);
    let (ds, dt) = (s.len(), t.len());
    let q = linalg::submatrix(g.weights(), s, t);

    let mut comps: Vec<(f64, DVector<f64>, DVector<f64>)> = Vec::new();
    if ds > 0 && linalg::max_abs(&q) > 0.0 {
        let svd = q.clone().svd(true, true);
        let u = svd.u.as_ref().unwrap();
        let v_t = svd.v_t.as_ref().unwrap();
        for (c, &sv) in svd.singular_values.iter().enumerate() {
            comps.push((sv, u.column(c).into_owned(), v_t.row(c).transpose()));
        }
        comps.sort_by(|a, b| b.0.total_cmp(&a.0));
        let smax = comps[0].0;
        comps.retain(|c| c.0 >= RANK_TOL * smax);
        for (_, a, b) in comps.iter_mut() {
            let lead = a.iamax();
            if a[lead] < 0.0 {
                a.neg_mut();
                b.neg_mut();
            }
        }
    }
    let mu = comps.len();
    let sv: Vec<f64> = comps.iter().map(|c| c.0).collect();
    let amat = DMatrix::from_fn(ds, mu, |i, u| comps[u].1[i]);
    let bmat = DMatrix::from_fn(dt, mu, |j, u| comps[u].2[j]);
    let tilde = |m: &DMatrix<f64>| {
        DMatrix::from_fn(m.nrows(), mu, |i, u| {
            let norm: f64 = (0..mu).map(|v| sv[v] * m[(i, v)] * m[(i, v)]).sum();
            libm::sqrt(sv[u]) * m[(i, u)] / libm::sqrt(1.0 + norm)
        })
    };
    let a_tilde = tilde(&amat);
    let b_tilde = tilde(&bmat);

    let names = latent_labels(g.labels(), mu);

    // enlarged graph over the original nodes and the latents
    let d = g.dim();
    let mut c = DMatrix::zeros(d, mu);
    for (row, &i) in s.iter().enumerate() {
        c.set_row(i, &a_tilde.row(row));
    }
    for (row, &j) in t.iter().enumerate() {
        c.set_row(j, &b_tilde.row(row));
    }
    let delta: Vec<f64> = (0..d).map(|i| libm::sqrt(1.0 - c.row(i).norm_squared())).collect();
    let in_s = |k: usize| s.binary_search(&k).is_ok();
    let cc = &c * c.transpose();
    let mut e = DMatrix::zeros(d + mu, d + mu);
    for i in 0..d {
        for k in 0..d {
            if i != k && in_s(i) == in_s(k) {
                e[(i, k)] = delta[i] * delta[k] * g.weight(i, k) - cc[(i, k)];
            }
        }
        for u in 0..mu {
            e[(i, d + u)] = c[(i, u)];
            e[(d + u, i)] = c[(i, u)];
        }
    }
    let mut labels: Vec<String> = g.labels().to_vec();
    labels.extend(names.iter().cloned());
    let enlarged_graph = PartialCorrelationGraph::from_parts_unchecked(e, labels, None);

    // reduced graph over the kept nodes and the latents
    let mut h = DMatrix::zeros(dt + mu, dt + mu);
    h.view_mut((0, 0), (dt, dt))
        .copy_from(&linalg::submatrix(g.weights(), t, t));
    if mu > 0 {
        let one_minus_rs = DMatrix::identity(ds, ds) - linalg::submatrix(g.weights(), s, s);
        let ch = linalg::cholesky(one_minus_rs).ok_or(Error::SingularBlock)?;
        let gram = amat.transpose() * ch.solve(&amat);
        let l = linalg::cholesky(gram).ok_or(Error::SingularBlock)?.l();
        let w = &bmat * DMatrix::from_diagonal(&DVector::from_vec(sv.clone())) * l;
        h.view_mut((0, dt), (dt, mu)).copy_from(&w);
        h.view_mut((dt, 0), (mu, dt)).copy_from(&w.transpose());
    }
    let mut labels: Vec<String> = t.iter().map(|&k| String::from(g.label(k))).collect();
    labels.extend(names);
    let reduced_graph = PartialCorrelationGraph::from_parts_unchecked(h, labels, None);

    Ok(LatentReduction {
        kept: part.kept,
        removed: part.removed,
        latent_count: mu,
        singular_values: sv,
        a_tilde,
        b_tilde,
        enlarged_graph,
        reduced_graph,
    })
}

/// Deviations between an original graph and a reduction of it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReductionResidual {
    /// Largest `|r_ij|` difference among kept nodes.
    pub partial: f64,
    /// Largest `|ρ_ij|` difference among kept nodes.
    pub marginal: f64,
    /// Largest `|r_ij|` difference after integrating the latents out of the
    /// enlarged graph.
    pub enlarged: f64,
}

impl ReductionResidual {
    pub fn max(&self) -> f64 {
        self.partial.max(self.marginal).max(self.enlarged)
    }
}

pub fn verify_reduction(g: &PartialCorrelationGraph, red: &LatentReduction) -> Result<ReductionResidual> {
    let d = g.dim();
    let dt = red.kept.len();
    if let Some(&bad) = red.kept.iter().find(|&&k| k >= d) {
        return Err(Error::IndexOutOfRange { index: bad, dim: d });
    }
    if red.reduced_graph.dim() < dt {
        return Err(Error::DimensionMismatch {
            expected: dt,
            found: red.reduced_graph.dim(),
        });
    }
    if red.enlarged_graph.dim() < d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: red.enlarged_graph.dim(),
        });
    }
    let p = partial_to_marginal_oracle(g)?;
    let pr = partial_to_marginal_oracle(&red.reduced_graph)?;
    let mut partial = 0.0_f64;
    let mut marginal = 0.0_f64;
    for a in 0..dt {
        for b in 0..dt {
            let (i, j) = (red.kept[a], red.kept[b]);
            partial = partial.max((red.reduced_graph.weight(a, b) - g.weight(i, j)).abs());
            marginal = marginal.max((pr.get(a, b) - p.get(i, j)).abs());
        }
    }
    let latents: Vec<usize> = (d..red.enlarged_graph.dim()).collect();
    let back = marginalize_nodes(&red.enlarged_graph, &latents)?;
    let enlarged = (back.weights() - g.weights()).amax();
    Ok(ReductionResidual {
        partial,
        marginal,
        enlarged,
    })
}

impl PathWeights for LatentReduction {
    fn weight_matrix(&self) -> &DMatrix<f64> {
        self.reduced_graph.weights()
    }
}

//! Constrained path families on a weighted graph, their truncated and resummed
//! weight sums, and the star-path expansion of marginal correlations.
//!
//! Sums are always accumulated in order of increasing path length. Per-length
//! sums use restricted matrix powers, so explicit paths are only built when
//! [`enumerate_paths`] is called.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg;
use crate::matrices::{marginal_from_weights, PartialCorrelationGraph};

/// Loop sums at or above `1 - DENOMINATOR_GUARD` are rejected.
pub const DENOMINATOR_GUARD: f64 = 1e-12;

/// Fraction of the admissible upper bound used when `q` is not supplied.
pub const DEFAULT_Q_FRACTION: f64 = 0.95;

/// Anything that exposes a square weighted adjacency matrix. The diagonal holds
/// self-loop weights (zero for a plain partial-correlation graph).
pub trait PathWeights {
    fn weight_matrix(&self) -> &DMatrix<f64>;

    fn node_count(&self) -> usize {
        self.weight_matrix().nrows()
    }
}

impl PathWeights for PartialCorrelationGraph {
    fn weight_matrix(&self) -> &DMatrix<f64> {
        self.weights()
    }
}

/// Path family specification. Endpoints are exempt from the interior
/// restrictions: a node listed in `interior_forbidden` may still be the source
/// or the target, it just cannot appear strictly between them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathQuery {
    pub source: usize,
    pub target: usize,
    pub interior_forbidden: Vec<usize>,
    /// When set, interior vertices must belong to this set.
    pub interior_allowed: Option<Vec<usize>>,
    /// Maximum number of edges.
    pub max_length: usize,
    pub allow_self_loops: bool,
}

impl PathQuery {
    /// All walks from `source` to `target` with at most `max_length` edges.
    pub fn new(source: usize, target: usize, max_length: usize) -> Self {
        PathQuery {
            source,
            target,
            interior_forbidden: Vec::new(),
            interior_allowed: None,
            max_length,
            allow_self_loops: false,
        }
    }

    /// `ij*`-paths: `i` and `j` appear only at the endpoints.
    pub fn star(i: usize, j: usize, max_length: usize) -> Self {
        Self::new(i, j, max_length).forbid(&[i, j])
    }

    /// Closed paths at `i` that visit neither `i` nor `avoid` in between.
    pub fn closed_star(i: usize, avoid: usize, max_length: usize) -> Self {
        Self::new(i, i, max_length).forbid(&[i, avoid])
    }

    /// Paths from `i` to `j` whose interior stays inside `set`.
    pub fn through(i: usize, j: usize, set: &[usize], max_length: usize) -> Self {
        Self::new(i, j, max_length).forbid(&[i, j]).allow_only(set)
    }

    pub fn forbid(mut self, nodes: &[usize]) -> Self {
        self.interior_forbidden.extend_from_slice(nodes);
        self.interior_forbidden.sort_unstable();
        self.interior_forbidden.dedup();
        self
    }

    pub fn allow_only(mut self, nodes: &[usize]) -> Self {
        let mut v = nodes.to_vec();
        v.sort_unstable();
        v.dedup();
        self.interior_allowed = Some(v);
        self
    }

    pub fn with_self_loops(mut self, allow: bool) -> Self {
        self.allow_self_loops = allow;
        self
    }

    fn interior_ok(&self, k: usize) -> bool {
        self.interior_forbidden.binary_search(&k).is_err()
            && self
                .interior_allowed
                .as_ref()
                .map_or(true, |a| a.binary_search(&k).is_ok())
    }

    fn validate(&self, dim: usize) -> Result<()> {
        let all = [self.source, self.target]
            .into_iter()
            .chain(self.interior_forbidden.iter().copied())
            .chain(self.interior_allowed.iter().flatten().copied());
        for k in all {
            if k >= dim {
                return Err(Error::IndexOutOfRange { index: k, dim });
            }
        }
        Ok(())
    }

    fn interior_nodes(&self, dim: usize) -> Vec<usize> {
        (0..dim).filter(|&k| self.interior_ok(k)).collect()
    }
}

/// A walk with its weight (product of traversed edge weights).
#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    pub vertices: Vec<usize>,
    pub weight: f64,
}

impl Path {
    /// Number of edges.
    pub fn length(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }

    /// Recomputes the weight from `g`.
    pub fn weight_in<G: PathWeights + ?Sized>(&self, g: &G) -> f64 {
        let w = g.weight_matrix();
        self.vertices.windows(2).map(|e| w[(e[0], e[1])]).product()
    }

    pub fn reversed(&self) -> Path {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        Path {
            vertices,
            weight: self.weight,
        }
    }
}

/// Per-length weight sums of a path family.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSumResult {
    /// `per_length[l - 1]` is the total weight of paths with exactly `l` edges.
    pub per_length: Vec<f64>,
    /// `cumulative[l - 1]` is the total over lengths `1..=l`.
    pub cumulative: Vec<f64>,
    pub truncation_length: usize,
    /// Resummed value `w_st + w_sI (1 - W_I)⁻¹ w_It` when the solve succeeds.
    pub converged_estimate: Option<f64>,
}

impl PathSumResult {
    fn from_per_length(per_length: Vec<f64>, converged_estimate: Option<f64>) -> Self {
        let cumulative = per_length
            .iter()
            .scan(0.0, |acc, &x| {
                *acc += x;
                Some(*acc)
            })
            .collect();
        PathSumResult {
            truncation_length: per_length.len(),
            per_length,
            cumulative,
            converged_estimate,
        }
    }

    /// Sum over paths with exactly `l` edges (`l ≥ 1`).
    pub fn at_length(&self, l: usize) -> f64 {
        self.per_length[l - 1]
    }

    /// Sum over all paths up to the truncation length.
    pub fn total(&self) -> f64 {
        self.cumulative.last().copied().unwrap_or(0.0)
    }
}

/// Streams every path matching `query`, by increasing length and
/// lexicographically within a length.
pub fn enumerate_paths<'a, G: PathWeights + ?Sized>(
    g: &'a G,
    query: &PathQuery,
) -> Result<PathIter<'a>> {
    query.validate(g.node_count())?;
    Ok(PathIter {
        w: g.weight_matrix(),
        query: query.clone(),
        frontier: vec![(vec![query.source], 1.0)],
        ready: VecDeque::new(),
        length: 0,
    })
}

/// Iterator returned by [`enumerate_paths`].
#[derive(Debug, Clone)]
pub struct PathIter<'a> {
    w: &'a DMatrix<f64>,
    query: PathQuery,
    frontier: Vec<(Vec<usize>, f64)>,
    ready: VecDeque<Path>,
    length: usize,
}

impl PathIter<'_> {
    fn advance(&mut self) {
        self.length += 1;
        let dim = self.w.nrows();
        let mut next = Vec::new();
        for (verts, weight) in core::mem::take(&mut self.frontier) {
            let u = verts[verts.len() - 1];
            for v in 0..dim {
                if v == u && !self.query.allow_self_loops {
                    continue;
                }
                let e = self.w[(u, v)];
                if e == 0.0 {
                    continue;
                }
                let extend = self.length < self.query.max_length && self.query.interior_ok(v);
                if v != self.query.target && !extend {
                    continue;
                }
                let mut path = verts.clone();
                path.push(v);
                if v == self.query.target {
                    self.ready.push_back(Path {
                        vertices: path.clone(),
                        weight: weight * e,
                    });
                }
                if extend {
                    next.push((path, weight * e));
                }
            }
        }
        self.frontier = next;
    }
}

impl Iterator for PathIter<'_> {
    type Item = Path;

    fn next(&mut self) -> Option<Path> {
        loop {
            if let Some(p) = self.ready.pop_front() {
                return Some(p);
            }
            if self.length >= self.query.max_length || self.frontier.is_empty() {
                return None;
            }
            self.advance();
        }
    }
}

fn query_weights(w: &DMatrix<f64>, allow_self_loops: bool) -> DMatrix<f64> {
    let mut w = w.clone();
    if !allow_self_loops {
        w.fill_diagonal(0.0);
    }
    w
}

/// Per-length sums `w_st` (length 1) and `w_sI W_I^(l-2) w_It` (length `l ≥ 2`),
/// where `I` is the set of admissible interior nodes.
fn per_length_sums(w: &DMatrix<f64>, s: usize, t: usize, interior: &[usize], max_len: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(max_len);
    if max_len == 0 {
        return out;
    }
    out.push(w[(s, t)]);
    if max_len == 1 || interior.is_empty() {
        out.resize(max_len, 0.0);
        return out;
    }
    let wi = linalg::submatrix(w, interior, interior);
    let left = DVector::from_iterator(interior.len(), interior.iter().map(|&k| w[(s, k)]));
    let mut v = DVector::from_iterator(interior.len(), interior.iter().map(|&k| w[(k, t)]));
    for l in 2..=max_len {
        out.push(left.dot(&v));
        if l < max_len {
            v = &wi * v;
        }
    }
    out
}

fn resummed(w: &DMatrix<f64>, s: usize, t: usize, interior: &[usize]) -> Result<f64> {
    if interior.is_empty() {
        return Ok(w[(s, t)]);
    }
    let n = interior.len();
    let block = DMatrix::identity(n, n) - linalg::submatrix(w, interior, interior);
    let ch = linalg::cholesky(block).ok_or(Error::SingularRestrictedBlock)?;
    let right = DVector::from_iterator(n, interior.iter().map(|&k| w[(k, t)]));
    let left = DVector::from_iterator(n, interior.iter().map(|&k| w[(s, k)]));
    Ok(w[(s, t)] + left.dot(&ch.solve(&right)))
}

/// Per-length weight sums of the family described by `query`, computed with
/// restricted matrix powers (no path is materialised).
pub fn restricted_path_sums<G: PathWeights + ?Sized>(g: &G, query: &PathQuery) -> Result<PathSumResult> {
    let dim = g.node_count();
    query.validate(dim)?;
    let w = query_weights(g.weight_matrix(), query.allow_self_loops);
    let interior = query.interior_nodes(dim);
    let per = per_length_sums(&w, query.source, query.target, &interior, query.max_length);
    let est = resummed(&w, query.source, query.target, &interior).ok();
    Ok(PathSumResult::from_per_length(per, est))
}

/// Resummed weight of all paths from `s` to `t` with interior in `interior`:
/// `w_st + Σ w_sα [(1 - W_I)⁻¹]_αβ w_βt`.
pub fn restricted_sum_closed<G: PathWeights + ?Sized>(
    g: &G,
    s: usize,
    t: usize,
    interior: &[usize],
) -> Result<f64> {
    let dim = g.node_count();
    let interior = linalg::normalize_set(dim, interior)?;
    for k in [s, t] {
        if k >= dim {
            return Err(Error::IndexOutOfRange { index: k, dim });
        }
    }
    resummed(g.weight_matrix(), s, t, &interior)
}

fn check_pair(dim: usize, i: usize, j: usize) -> Result<()> {
    for k in [i, j] {
        if k >= dim {
            return Err(Error::IndexOutOfRange { index: k, dim });
        }
    }
    Ok(())
}

fn others(dim: usize, i: usize, j: usize) -> Vec<usize> {
    (0..dim).filter(|&k| k != i && k != j).collect()
}

/// Truncated sum over `ij*`-paths of length at most `max_len`. With `i == j`
/// this is the family of closed paths returning to `i` only at the end.
pub fn star_path_sum_truncated<G: PathWeights + ?Sized>(
    g: &G,
    i: usize,
    j: usize,
    max_len: usize,
) -> Result<PathSumResult> {
    restricted_path_sums(g, &PathQuery::star(i, j, max_len).with_self_loops(true))
}

/// Truncated sum over closed paths at `i` that avoid `avoid` (`p_ii^{j*}` with `j = avoid`).
pub fn loop_sum_truncated<G: PathWeights + ?Sized>(
    g: &G,
    i: usize,
    avoid: usize,
    max_len: usize,
) -> Result<PathSumResult> {
    restricted_path_sums(g, &PathQuery::closed_star(i, avoid, max_len).with_self_loops(true))
}

/// Infinite `ij*`-path sum, `r_ij + Σ r_iα [(1 - R_K)⁻¹]_αβ r_βj` with `K` the
/// nodes other than `i` and `j`.
pub fn star_path_sum_closed<G: PathWeights + ?Sized>(g: &G, i: usize, j: usize) -> Result<f64> {
    let dim = g.node_count();
    check_pair(dim, i, j)?;
    resummed(g.weight_matrix(), i, j, &others(dim, i, j))
}

/// Infinite sum over closed paths at `i` avoiding `avoid`.
pub fn loop_sum_closed<G: PathWeights + ?Sized>(g: &G, i: usize, avoid: usize) -> Result<f64> {
    let dim = g.node_count();
    check_pair(dim, i, avoid)?;
    resummed(g.weight_matrix(), i, i, &others(dim, i, avoid))
}

fn ratio(num: f64, loop_i: f64, loop_j: f64, i: usize, j: usize) -> Result<f64> {
    for (node, loop_sum) in [(i, loop_i), (j, loop_j)] {
        if !(loop_sum < 1.0 - DENOMINATOR_GUARD) {
            return Err(Error::DenominatorNonPositive { node, loop_sum });
        }
    }
    Ok(num / libm::sqrt((1.0 - loop_i) * (1.0 - loop_j)))
}

/// `ρ̂_ij(L)`: the star-path expansion with all three sums truncated at `max_len`.
pub fn marginal_corr_expansion<G: PathWeights + ?Sized>(
    g: &G,
    i: usize,
    j: usize,
    max_len: usize,
) -> Result<f64> {
    check_pair(g.node_count(), i, j)?;
    if i == j {
        return Ok(1.0);
    }
    let (num, li, lj) = expansion_parts(g, i, j, max_len)?;
    ratio(
        num.total(),
        li.total(),
        lj.total(),
        i,
        j,
    )
}

fn expansion_parts<G: PathWeights + ?Sized>(
    g: &G,
    i: usize,
    j: usize,
    max_len: usize,
) -> Result<(PathSumResult, PathSumResult, PathSumResult)> {
    let dim = g.node_count();
    let w = g.weight_matrix();
    let k = others(dim, i, j);
    let sums = |s, t| PathSumResult::from_per_length(per_length_sums(w, s, t, &k, max_len), None);
    Ok((sums(i, j), sums(i, i), sums(j, j)))
}

/// `ρ_ij` from the infinite star-path sums.
pub fn marginal_corr_closed<G: PathWeights + ?Sized>(g: &G, i: usize, j: usize) -> Result<f64> {
    check_pair(g.node_count(), i, j)?;
    if i == j {
        return Ok(1.0);
    }
    let num = star_path_sum_closed(g, i, j)?;
    let li = loop_sum_closed(g, i, j)?;
    let lj = loop_sum_closed(g, j, i)?;
    ratio(num, li, lj, i, j)
}

/// Graph with weights `R(q) = (1 - q) 1 + q R`, i.e. self-loops of weight `1 - q`.
#[derive(Debug, Clone, PartialEq)]
pub struct RescaledGraph {
    base: PartialCorrelationGraph,
    q: f64,
    weights: DMatrix<f64>,
}

impl RescaledGraph {
    pub fn base(&self) -> &PartialCorrelationGraph {
        &self.base
    }
    pub fn q(&self) -> f64 {
        self.q
    }
    /// `q (1 - R(q))⁻¹`, which equals `(1 - R)⁻¹` for every admissible `q`.
    pub fn resolvent(&self) -> Result<DMatrix<f64>> {
        let n = self.weights.nrows();
        let inv = linalg::spd_inverse(&(DMatrix::identity(n, n) - &self.weights))
            .ok_or(Error::SingularMatrix)?;
        Ok(inv * self.q)
    }
}

impl PathWeights for RescaledGraph {
    fn weight_matrix(&self) -> &DMatrix<f64> {
        &self.weights
    }
}

/// Upper end of the admissible interval for `q`, `2 / (1 + ν(R))`.
pub fn q_upper_bound(g: &PartialCorrelationGraph) -> f64 {
    2.0 / (1.0 + linalg::spectral_radius_sym(g.weights()))
}

/// Rescales `g`. Without `q`, uses `0.95` of the admissible upper bound.
pub fn rescale(g: &PartialCorrelationGraph, q: Option<f64>) -> Result<RescaledGraph> {
    let bound = q_upper_bound(g);
    let q = q.unwrap_or(DEFAULT_Q_FRACTION * bound);
    if !(q > 0.0 && q < bound) {
        return Err(Error::QOutOfRange { q, bound });
    }
    let n = g.dim();
    let weights = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            1.0 - q
        } else {
            q * g.weight(i, j)
        }
    });
    Ok(RescaledGraph {
        base: g.clone(),
        q,
        weights,
    })
}

/// One row of a convergence profile. `rho_hat` and `abs_gap` are `None` when a
/// truncated loop sum reaches 1 at that length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileRow {
    pub length: usize,
    pub rho_hat: Option<f64>,
    pub abs_gap: Option<f64>,
}

/// `ρ̂_ij(L)` for `L = 1..=max_len` together with the gap to the oracle value.
pub fn convergence_profile<G: PathWeights + ?Sized>(
    g: &G,
    i: usize,
    j: usize,
    max_len: usize,
) -> Result<Vec<ProfileRow>> {
    check_pair(g.node_count(), i, j)?;
    let oracle = marginal_from_weights(g.weight_matrix())?[(i, j)];
    if i == j {
        return Ok((1..=max_len)
            .map(|length| ProfileRow {
                length,
                rho_hat: Some(1.0),
                abs_gap: Some(0.0),
            })
            .collect());
    }
    let (num, li, lj) = expansion_parts(g, i, j, max_len)?;
    Ok((0..max_len)
        .map(|k| {
            let rho_hat = ratio(num.cumulative[k], li.cumulative[k], lj.cumulative[k], i, j).ok();
            ProfileRow {
                length: k + 1,
                rho_hat,
                abs_gap: rho_hat.map(|r| (r - oracle).abs()),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrices::partial_to_marginal_oracle;
    use approx::assert_abs_diff_eq;

    fn graph(rows: usize, data: &[f64]) -> PartialCorrelationGraph {
        PartialCorrelationGraph::new(DMatrix::from_row_slice(rows, rows, data)).unwrap()
    }

    fn pair(r: f64) -> PartialCorrelationGraph {
        graph(2, &[0.0, r, r, 0.0])
    }

    fn three_chain(a: f64, b: f64) -> PartialCorrelationGraph {
        graph(3, &[0.0, a, 0.0, a, 0.0, b, 0.0, b, 0.0])
    }

    fn one_many_one(d: usize, r: f64) -> PartialCorrelationGraph {
        let ends = |k: usize| k == 0 || k == d - 1;
        PartialCorrelationGraph::new(DMatrix::from_fn(d, d, |i, j| {
            if i != j && (ends(i) ^ ends(j)) {
                r
            } else {
                0.0
            }
        }))
        .unwrap()
    }

    fn example_r() -> PartialCorrelationGraph {
        graph(
            4,
            &[
                0.0, 0.2, 0.3, 0.0, //
                0.2, 0.0, 0.1, 0.25, //
                0.3, 0.1, 0.0, -0.2, //
                0.0, 0.25, -0.2, 0.0,
            ],
        )
    }

    fn vertex_lists(it: PathIter<'_>) -> Vec<Vec<usize>> {
        it.map(|p| p.vertices).collect()
    }

    #[test]
    fn pair_enumeration_lengths_one_three_five() {
        let g = pair(0.3);
        let paths = vertex_lists(enumerate_paths(&g, &PathQuery::new(0, 1, 5)).unwrap());
        assert_eq!(
            paths,
            vec![vec![0, 1], vec![0, 1, 0, 1], vec![0, 1, 0, 1, 0, 1]]
        );
    }

    #[test]
    fn closed_query_without_edges_is_empty() {
        let g = graph(2, &[0.0; 4]);
        assert_eq!(enumerate_paths(&g, &PathQuery::new(0, 0, 6)).unwrap().count(), 0);
    }

    #[test]
    fn example_r_length_two() {
        let g = example_r();
        let paths: Vec<_> = enumerate_paths(&g, &PathQuery::new(0, 3, 2))
            .unwrap()
            .filter(|p| p.length() == 2)
            .map(|p| p.vertices)
            .collect();
        assert_eq!(paths, vec![vec![0, 1, 3], vec![0, 2, 3]]);
        assert_eq!(enumerate_paths(&g, &PathQuery::new(0, 3, 1)).unwrap().count(), 0);
    }

    #[test]
    fn enumeration_is_length_then_lexicographic() {
        let g = example_r();
        let paths: Vec<_> = enumerate_paths(&g, &PathQuery::new(0, 3, 5)).unwrap().collect();
        for w in paths.windows(2) {
            let key = |p: &Path| (p.length(), p.vertices.clone());
            assert!(key(&w[0]) < key(&w[1]));
        }
        for p in &paths {
            assert_abs_diff_eq!(p.weight, p.weight_in(&g), epsilon = 1e-15);
        }
    }

    #[test]
    fn query_index_validation() {
        let g = pair(0.2);
        assert!(matches!(
            enumerate_paths(&g, &PathQuery::new(0, 2, 3)),
            Err(Error::IndexOutOfRange { index: 2, dim: 2 })
        ));
        assert!(restricted_path_sums(&g, &PathQuery::new(0, 1, 3).forbid(&[5])).is_err());
    }

    #[test]
    fn pair_star_sum_is_single_edge() {
        let g = pair(-0.4);
        for l in 1..6 {
            let s = star_path_sum_truncated(&g, 0, 1, l).unwrap();
            assert_eq!(s.total(), -0.4);
        }
        assert_eq!(star_path_sum_closed(&g, 0, 1).unwrap(), -0.4);
    }

    #[test]
    fn one_many_one_star_sum() {
        let (d, r) = (7, 0.2);
        let g = one_many_one(d, r);
        let s = star_path_sum_truncated(&g, 0, d - 1, 4).unwrap();
        assert_abs_diff_eq!(s.total(), (d - 2) as f64 * r * r, epsilon = 1e-15);
        assert_eq!(s.at_length(1), 0.0);
        assert_eq!(s.at_length(3), 0.0);
    }

    #[test]
    fn three_chain_loop_and_star() {
        let (a, b) = (0.3, -0.5);
        let g = three_chain(a, b);
        let l = loop_sum_truncated(&g, 1, 0, 6).unwrap();
        assert_abs_diff_eq!(l.total(), b * b, epsilon = 1e-16);
        assert_abs_diff_eq!(loop_sum_closed(&g, 1, 0).unwrap(), b * b, epsilon = 1e-16);
        assert_abs_diff_eq!(star_path_sum_closed(&g, 0, 2).unwrap(), a * b, epsilon = 1e-16);
    }

    #[test]
    fn three_chain_expansion_is_exact_from_length_two() {
        let (a, b) = (0.45, 0.6);
        let g = three_chain(a, b);
        let p = partial_to_marginal_oracle(&g).unwrap();
        for l in 2..8 {
            for (i, j) in [(0, 1), (1, 2), (0, 2)] {
                let e = marginal_corr_expansion(&g, i, j, l).unwrap();
                assert_abs_diff_eq!(e, p.get(i, j), epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn pair_expansion_any_length() {
        let g = pair(0.7);
        for l in 1..5 {
            assert_eq!(marginal_corr_expansion(&g, 0, 1, l).unwrap(), 0.7);
        }
        assert_eq!(marginal_corr_expansion(&g, 1, 1, 3).unwrap(), 1.0);
    }

    #[test]
    fn closed_examples() {
        let g = graph(3, &[0.0; 9]);
        assert_eq!(marginal_corr_closed(&g, 0, 2).unwrap(), 0.0);
        let g = one_many_one(6, 0.25);
        assert_abs_diff_eq!(marginal_corr_closed(&g, 0, 5).unwrap(), 1.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn truncated_denominator_guard() {
        // node 0 has two strong neighbours that are anti-correlated with each
        // other: the length-2 loop sum is 1.125 while the exact one stays below 1
        let g = graph(
            4,
            &[
                0.0, 0.75, 0.75, 0.1, //
                0.75, 0.0, -0.9, 0.0, //
                0.75, -0.9, 0.0, 0.0, //
                0.1, 0.0, 0.0, 0.0,
            ],
        );
        assert!(loop_sum_closed(&g, 0, 3).unwrap() < 1.0);
        let err = marginal_corr_expansion(&g, 0, 3, 2).unwrap_err();
        assert!(matches!(err, Error::DenominatorNonPositive { node: 0, .. }));
        assert!(marginal_corr_expansion(&g, 0, 3, 60).is_ok());
    }

    #[test]
    fn rescale_defaults_and_identity() {
        let g = pair(0.5);
        let rg = rescale(&g, None).unwrap();
        assert_abs_diff_eq!(rg.q(), 0.95 * 4.0 / 3.0, epsilon = 1e-12);
        let rg = rescale(&g, Some(1.0)).unwrap();
        assert_eq!(rg.weight_matrix(), g.weights());
        assert!(matches!(rescale(&g, Some(0.0)), Err(Error::QOutOfRange { .. })));
        assert!(matches!(rescale(&g, Some(1.4)), Err(Error::QOutOfRange { .. })));
    }

    #[test]
    fn rescaled_expansion_matches_oracle() {
        let r = -0.6;
        let g = graph(3, &[0.0, r, r, r, 0.0, r, r, r, 0.0]);
        let p = partial_to_marginal_oracle(&g).unwrap();
        let rg = rescale(&g, None).unwrap();
        assert_abs_diff_eq!(rg.resolvent().unwrap()[(0, 1)], {
            let n = 3;
            let inv = (DMatrix::<f64>::identity(n, n) - g.weights()).try_inverse().unwrap();
            inv[(0, 1)]
        }, epsilon = 1e-12);
        assert_abs_diff_eq!(marginal_corr_closed(&rg, 0, 1).unwrap(), p.get(0, 1), epsilon = 1e-12);
        let e = marginal_corr_expansion(&rg, 0, 1, 200).unwrap();
        assert_abs_diff_eq!(e, p.get(0, 1), epsilon = 1e-10);
    }

    #[test]
    fn profile_of_pair_and_chain() {
        let g = pair(0.3);
        for row in convergence_profile(&g, 0, 1, 5).unwrap() {
            assert_eq!(row.rho_hat, Some(0.3));
            assert_abs_diff_eq!(row.abs_gap.unwrap(), 0.0, epsilon = 1e-15);
        }
        let g = three_chain(0.3, 0.4);
        let rows = convergence_profile(&g, 0, 2, 6).unwrap();
        assert_eq!(rows.len(), 6);
        let settled = rows[1].rho_hat.unwrap();
        for row in &rows[1..] {
            assert_eq!(row.rho_hat.unwrap(), settled);
            assert!(row.abs_gap.unwrap() < 1e-15);
        }
    }

    #[test]
    fn pair_all_path_geometric_sums() {
        let r = 0.6;
        let g = pair(r);
        let s = restricted_path_sums(&g, &PathQuery::new(0, 1, 400)).unwrap();
        assert_abs_diff_eq!(s.total(), r / (1.0 - r * r), epsilon = 1e-14);
        assert_abs_diff_eq!(s.converged_estimate.unwrap(), r / (1.0 - r * r), epsilon = 1e-14);
        let s = restricted_path_sums(&g, &PathQuery::new(0, 0, 400)).unwrap();
        assert_abs_diff_eq!(s.total(), r * r / (1.0 - r * r), epsilon = 1e-14);
    }

    #[test]
    fn through_query_restricts_interior() {
        let g = example_r();
        let only_2: Vec<_> = enumerate_paths(&g, &PathQuery::through(0, 3, &[1], 4))
            .unwrap()
            .map(|p| p.vertices)
            .collect();
        assert_eq!(only_2, vec![vec![0, 1, 3]]);
    }
}

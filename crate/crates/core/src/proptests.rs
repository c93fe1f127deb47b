//! Property tests over randomly generated graphs. Kept inside the library so
//! they run alongside the unit tests.

use alloc::vec::Vec;
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;

use crate::chains::{amplification_factor, chain_pair_corr, chain_sums, l_infinity, ChainSpec};
use crate::gaussinfo::{conditional_mi_closed, conditional_mi_series, loop_sum_mi_identity, TriPartition};
use crate::linalg;
use crate::matrices::{
    cov_to_marginal, partial_to_marginal_oracle, partial_to_precision, precision_to_partial, spectral_report,
    CovarianceMatrix, PartialCorrelationGraph, PrecisionMatrix,
};
use crate::pathsum::{
    enumerate_paths, loop_sum_closed, marginal_corr_closed, rescale, star_path_sum_truncated, PathQuery,
};
use crate::sampling::{
    canonical_graph, martingale_covariance, sample_partial_graph_flagged, Canonical, MartingaleSpec, SampleSpec,
};
use crate::transforms::{detect_separating_nodes, marginalize_nodes, marginalize_nodes_path_form, sever_nodes, TOL_FACT};

fn weights(rng: &mut ChaCha8Rng, d: usize, density: f64, nu: f64) -> DMatrix<f64> {
    let mut w = DMatrix::zeros(d, d);
    for i in 0..d {
        for j in i + 1..d {
            if rng.random_bool(density) {
                let x = rng.random_range(-1.0..1.0);
                w[(i, j)] = x;
                w[(j, i)] = x;
            }
        }
    }
    let rad = linalg::spectral_radius_sym(&w);
    if rad > 0.0 {
        w *= nu / rad;
    }
    w
}

fn graph(seed: u64, d: usize) -> PartialCorrelationGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let density = rng.random_range(0.2..1.0);
    let nu = rng.random_range(0.1..0.95);
    PartialCorrelationGraph::new(weights(&mut rng, d, density, nu)).unwrap()
}

/// Positive-definite matrix `A Aᵀ + εI` with random positive scale.
fn spd(seed: u64, d: usize) -> DMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = DMatrix::from_fn(d, d, |_, _| rng.random_range(-1.0..1.0));
    let s: Vec<f64> = (0..d).map(|_| rng.random_range(0.1..10.0)).collect();
    let m = &a * a.transpose() + DMatrix::identity(d, d) * 0.1;
    DMatrix::from_fn(d, d, |i, j| m[(i, j)] * s[i] * s[j])
}

fn subset(seed: u64, d: usize, lo: usize, hi: usize) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let k = rng.random_range(lo..=hi);
    let mut all: Vec<usize> = (0..d).collect();
    for i in 0..k {
        let j = rng.random_range(i..d);
        all.swap(i, j);
    }
    let mut s = all[..k].to_vec();
    s.sort_unstable();
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn precision_round_trip(seed in any::<u64>(), d in 2usize..9) {
        let omega = PrecisionMatrix::new(spd(seed, d)).unwrap();
        let back = partial_to_precision(&precision_to_partial(&omega)).unwrap();
        let rel = (back.matrix() - omega.matrix()).amax() / omega.matrix().amax();
        prop_assert!(rel < 1e-12, "relative error {rel}");
    }

    #[test]
    fn covariance_and_oracle_agree(seed in any::<u64>(), d in 2usize..9) {
        let c = CovarianceMatrix::new(spd(seed, d)).unwrap();
        let direct = cov_to_marginal(&c);
        let via = partial_to_marginal_oracle(&precision_to_partial(&c.to_precision().unwrap())).unwrap();
        prop_assert!((direct.matrix() - via.matrix()).amax() < 1e-10);
    }

    #[test]
    fn eigenvalues_below_one_and_radius_order(seed in any::<u64>(), d in 2usize..9) {
        let g = precision_to_partial(&PrecisionMatrix::new(spd(seed, d)).unwrap());
        let ev = linalg::sym_eigenvalues(g.weights());
        prop_assert!(ev.iter().all(|&x| x < 1.0));
        let rep = spectral_report(&g);
        prop_assert!(rep.nu_r <= rep.nu_r_plus + 1e-12);
    }

    #[test]
    fn star_form_matches_oracle(seed in any::<u64>(), d in 2usize..12) {
        let g = graph(seed, d);
        let p = partial_to_marginal_oracle(&g).unwrap();
        for i in 0..d {
            for j in 0..d {
                prop_assert!((marginal_corr_closed(&g, i, j).unwrap() - p.get(i, j)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn loop_sums_in_unit_interval_and_match_variance_ratio(seed in any::<u64>(), d in 2usize..10) {
        let g = graph(seed, d);
        let n = g.dim();
        let omega = DMatrix::identity(n, n) - g.weights();
        let c = linalg::spd_inverse(&omega).unwrap();
        for i in 0..d {
            for j in 0..d {
                if i == j {
                    continue;
                }
                let l = loop_sum_closed(&g, i, j).unwrap();
                prop_assert!((0.0..1.0).contains(&l) || l.abs() < 1e-15);
                let var_all = 1.0 / omega[(i, i)];
                let var_j = c[(i, i)] - c[(i, j)] * c[(i, j)] / c[(j, j)];
                prop_assert!((l - (1.0 - var_all / var_j)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn truncated_star_sums_match_enumeration(seed in any::<u64>(), d in 2usize..7, len in 1usize..7) {
        let g = graph(seed, d);
        for i in 0..d {
            for j in 0..d {
                let m = star_path_sum_truncated(&g, i, j, len).unwrap();
                let q = PathQuery::star(i, j, len);
                let e: f64 = enumerate_paths(&g, &q).unwrap().map(|p| p.weight).sum();
                prop_assert!((m.total() - e).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn reversed_paths_weigh_the_same(seed in any::<u64>(), d in 2usize..6) {
        let g = graph(seed, d);
        for p in enumerate_paths(&g, &PathQuery::new(0, d - 1, 4)).unwrap() {
            prop_assert!((p.reversed().weight_in(&g) - p.weight).abs() <= 1e-15 * p.weight.abs());
        }
    }

    #[test]
    fn rescaled_resolvent_is_q_independent(seed in any::<u64>(), d in 2usize..10, a in 0.05f64..0.99, b in 0.05f64..0.99) {
        let g = graph(seed, d);
        let bound = crate::pathsum::q_upper_bound(&g);
        let ra = rescale(&g, Some(a * bound)).unwrap().resolvent().unwrap();
        let rb = rescale(&g, Some(b * bound)).unwrap().resolvent().unwrap();
        prop_assert!((ra - rb).amax() < 1e-10);
    }

    #[test]
    fn marginalisation_invariants(seed in any::<u64>(), d in 3usize..11) {
        let g = graph(seed, d);
        let s = subset(seed, d, 1, d - 2);
        let t: Vec<usize> = (0..d).filter(|k| !s.contains(k)).collect();
        let gm = marginalize_nodes(&g, &s).unwrap();
        let path = marginalize_nodes_path_form(&g, &s, None).unwrap();
        prop_assert!((gm.weights() - path.weights()).amax() < 1e-10);
        let full = partial_to_marginal_oracle(&g).unwrap();
        let red = partial_to_marginal_oracle(&gm).unwrap();
        for a in 0..t.len() {
            for b in 0..t.len() {
                prop_assert!((red.get(a, b) - full.get(t[a], t[b])).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn appended_subnetwork(seed in any::<u64>(), dt in 3usize..8, ds in 1usize..5) {
        // node 0 is the only link between the base graph and the appended nodes
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = dt + ds;
        let mut w = DMatrix::zeros(d, d);
        w.view_mut((0, 0), (dt, dt)).copy_from(&weights(&mut rng, dt, 0.6, 1.0));
        w.view_mut((dt, dt), (ds, ds)).copy_from(&weights(&mut rng, ds, 0.6, 1.0));
        let x = rng.random_range(0.2..1.0);
        w[(0, dt)] = x;
        w[(dt, 0)] = x;
        let rad = linalg::spectral_radius_sym(&w);
        let g = PartialCorrelationGraph::new(w * (rng.random_range(0.3..0.9) / rad)).unwrap();
        let s: Vec<usize> = (dt..d).collect();
        let before = partial_to_marginal_oracle(&g).unwrap();
        let severed = partial_to_marginal_oracle(&sever_nodes(&g, &s).unwrap()).unwrap();
        let marg = marginalize_nodes(&g, &s).unwrap();
        for j in 1..dt {
            let (b, a) = (before.get(0, j).abs(), severed.get(0, j).abs());
            prop_assert!(a <= b);
            if a > 1e-12 {
                prop_assert!(a < b);
            }
            if g.weight(0, j) != 0.0 {
                prop_assert!(marg.weight(0, j).abs() > g.weight(0, j).abs());
            }
        }
    }

    #[test]
    fn separators_biconditional(seed in any::<u64>(), d in 3usize..10) {
        let g = graph(seed, d);
        for rep in detect_separating_nodes(&g, TOL_FACT).unwrap() {
            if rep.splits_graph {
                prop_assert!(rep.factorises);
            }
        }
    }

    #[test]
    fn mi_properties(seed in any::<u64>(), d in 3usize..9) {
        let g = graph(seed, d);
        let ab = subset(seed, d, 2, d);
        let cut = 1 + (seed as usize) % (ab.len() - 1);
        let (a, b) = ab.split_at(cut);
        let part = TriPartition::with_rest(d, a, b).unwrap();
        let closed = conditional_mi_closed(&g, &part).unwrap().nats;
        prop_assert!(closed >= -1e-15);
        let block_zero = a.iter().all(|&i| b.iter().all(|&j| g.weight(i, j) == 0.0));
        prop_assert_eq!(block_zero, closed.abs() < 1e-14);
        let series = conditional_mi_series(&g, &part, 5000).unwrap();
        let terms = series.series_terms.unwrap();
        prop_assert!(terms.iter().all(|&t| t >= -1e-15));
        prop_assert!((series.nats - closed).abs() < 1e-8);
        for i in 0..d {
            let j = (i + 1) % d;
            prop_assert!(loop_sum_mi_identity(&g, i, j).unwrap().residual < 1e-10);
        }
    }

    #[test]
    fn sampling_is_deterministic(seed in any::<u64>(), d in 2usize..6) {
        let spec = SampleSpec::new(d, 4 * d + 3, seed).unwrap();
        let a = sample_partial_graph_flagged(&spec).unwrap();
        let b = sample_partial_graph_flagged(&spec).unwrap();
        for (x, y) in a.graph.weights().iter().zip(b.graph.weights().iter()) {
            prop_assert_eq!(x.to_bits(), y.to_bits());
        }
        prop_assert!(PartialCorrelationGraph::new(a.graph.weights().clone()).is_ok());
    }

    #[test]
    fn martingale_interior_nodes_separate(alpha in -1.5f64..1.5, t in 3usize..12, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v: Vec<f64> = (0..t).map(|_| rng.random_range(0.2..2.0)).collect();
        prop_assume!(alpha.abs() > 1e-3);
        let c = martingale_covariance(&MartingaleSpec::new(alpha, v).unwrap()).unwrap();
        let g = precision_to_partial(&c.to_precision().unwrap());
        let reps = detect_separating_nodes(&g, TOL_FACT).unwrap();
        for rep in reps {
            let interior = rep.node > 0 && rep.node + 1 < t;
            prop_assert_eq!(rep.splits_graph, interior);
            prop_assert!(rep.consistent());
        }
    }
}

#[test]
fn chain_matches_dense_oracle() {
    for &r in &[0.1, 0.3, 0.45, 0.5 - 1e-6] {
        for d in 2..=30 {
            let g = canonical_graph(Canonical::Chain { d, r }).unwrap();
            let p = partial_to_marginal_oracle(&g).unwrap();
            let spec = ChainSpec::new(d, r).unwrap();
            for i in 1..=d {
                for j in 1..=d {
                    let x = chain_pair_corr(&spec, i, j).unwrap();
                    assert!((x - p.get(i - 1, j - 1)).abs() < 1e-9, "d={d} r={r} ({i},{j})");
                }
            }
        }
    }
}

#[test]
fn chain_factorises_through_interior_nodes() {
    let d = 12;
    let sol = chain_sums(&ChainSpec::new(d, -0.43).unwrap()).unwrap();
    for i in 1..=d {
        for k in i + 1..=d {
            for j in k + 1..=d {
                let lhs = sol.pair_corr(i, j).unwrap();
                let rhs = sol.pair_corr(i, k).unwrap() * sol.pair_corr(k, j).unwrap();
                assert!((lhs - rhs).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn amplification_grows_and_loops_are_bounded() {
    for &r in &[0.05, 0.2, 0.35, 0.47, 0.5] {
        let mut prev = 1.0;
        for m in 0..40 {
            let g = amplification_factor(10, m, r).unwrap();
            assert!(g >= prev - 1e-15);
            prev = g;
        }
        let sol = chain_sums(&ChainSpec::new(200, r).unwrap()).unwrap();
        let linf = l_infinity(r).unwrap();
        let ls = sol.l_values();
        assert!(ls.windows(2).all(|w| w[1] >= w[0]));
        assert!(ls.iter().all(|&l| l <= linf + 1e-15));
    }
}

#[test]
fn chain_mutual_information_from_factorised_correlation() {
    let d = 7;
    let g = canonical_graph(Canonical::Chain { d, r: 0.4 }).unwrap();
    let (i, k, j) = (1, 3, 5);
    let p = partial_to_marginal_oracle(&g).unwrap();
    let rho = p.get(i, k) * p.get(k, j);
    let others: Vec<usize> = (0..d).filter(|&x| x != i && x != j).collect();
    let pair = marginalize_nodes(&g, &others).unwrap();
    let mi = conditional_mi_closed(&pair, &TriPartition::new(2, &[0], &[1], &[]).unwrap()).unwrap();
    assert!((mi.nats + 0.5 * libm::log(1.0 - rho * rho)).abs() < 1e-12);
}

#[test]
fn two_node_geometric_resummation() {
    let r = 0.6;
    let g = PartialCorrelationGraph::new(DMatrix::from_row_slice(2, 2, &[0.0, r, r, 0.0])).unwrap();
    let off = crate::pathsum::restricted_path_sums(&g, &PathQuery::new(0, 1, 201)).unwrap();
    let diag = crate::pathsum::restricted_path_sums(&g, &PathQuery::new(0, 0, 200)).unwrap();
    assert!((off.total() - r / (1.0 - r * r)).abs() < 1e-12);
    assert!((diag.total() - r * r / (1.0 - r * r)).abs() < 1e-12);
}

#![allow(dead_code)]

use nalgebra::DMatrix;
use pathcorr_core::matrices::PartialCorrelationGraph;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn spectral_radius(m: &DMatrix<f64>) -> f64 {
    m.clone().symmetric_eigenvalues().iter().fold(0.0_f64, |a, x| a.max(x.abs()))
}

/// Symmetric matrix with zero diagonal, each off-diagonal entry present with
/// probability `density` and uniform in `[-1, 1]`, rescaled to spectral radius `nu`.
pub fn random_weights(rng: &mut ChaCha8Rng, d: usize, density: f64, nu: f64) -> DMatrix<f64> {
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
    let rad = spectral_radius(&w);
    if rad > 0.0 {
        w *= nu / rad;
    }
    w
}

/// Random valid graph with `ν(R)` drawn in `[0.2, 0.95]`.
pub fn random_graph(rng: &mut ChaCha8Rng, d: usize, density: f64) -> PartialCorrelationGraph {
    let nu = rng.random_range(0.2..0.95);
    PartialCorrelationGraph::new(random_weights(rng, d, density, nu)).unwrap()
}

/// Random subset of `0..d` with size in `[lo, hi]`, sorted.
pub fn random_subset(rng: &mut ChaCha8Rng, d: usize, lo: usize, hi: usize) -> Vec<usize> {
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

/// Rank by Gaussian elimination with partial pivoting.
pub fn brute_rank(m: &DMatrix<f64>, tol: f64) -> usize {
    let mut a = m.clone();
    let (rows, cols) = a.shape();
    let scale = a.amax().max(1e-300);
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let (p, best) = (rank..rows)
            .map(|r| (r, a[(r, c)].abs()))
            .fold((rank, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best <= tol * scale {
            continue;
        }
        a.swap_rows(rank, p);
        for r in rank + 1..rows {
            let f = a[(r, c)] / a[(rank, c)];
            for k in c..cols {
                a[(r, k)] -= f * a[(rank, k)];
            }
        }
        rank += 1;
    }
    rank
}

/// Labelled path weights on small graphs by explicit recursion: sum over all
/// walks `s -> ... -> t` of exactly `len` steps whose interior avoids `forbid`.
pub fn brute_walk_sum(w: &DMatrix<f64>, s: usize, t: usize, len: usize, forbid: &[usize]) -> f64 {
    fn go(w: &DMatrix<f64>, at: usize, t: usize, left: usize, forbid: &[usize]) -> f64 {
        if left == 1 {
            return w[(at, t)];
        }
        let mut acc = 0.0;
        for k in 0..w.nrows() {
            if forbid.contains(&k) || w[(at, k)] == 0.0 {
                continue;
            }
            acc += w[(at, k)] * go(w, k, t, left - 1, forbid);
        }
        acc
    }
    go(w, s, t, len, forbid)
}

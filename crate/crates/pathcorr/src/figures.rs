//! Data tables behind the amplification, convergence and q-rescaling plots.

use pathcorr_core::chains::amplification_factor;
use pathcorr_core::matrices::partial_to_marginal_oracle;
use pathcorr_core::pathsum::{convergence_profile, q_upper_bound, rescale};
use pathcorr_core::sampling::{sample_partial_graph_flagged, SampleSpec};
use pathcorr_core::Result;

pub const FIG4_R: [f64; 6] = [0.1, 0.2, 0.3, 0.4, 0.47, 0.5];
pub const FIG6_Q_FRACTIONS: [f64; 4] = [0.3, 0.5, 0.7, 0.95];

#[derive(Debug, Clone, PartialEq)]
pub struct GammaRow {
    pub r: f64,
    pub m: usize,
    pub gamma: f64,
}

/// `γ(m)` for `m = 0..=m_max` at fixed `k`, one block per `r`.
pub fn fig4(rs: &[f64], k: usize, m_max: usize) -> Result<Vec<GammaRow>> {
    let mut rows = Vec::new();
    for &r in rs {
        for m in 0..=m_max {
            rows.push(GammaRow {
                r,
                m,
                gamma: amplification_factor(k, m, r)?,
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub seed: u64,
    pub length: usize,
    pub rho_hat: Option<f64>,
    pub oracle: f64,
    pub abs_gap: Option<f64>,
}

/// Profiles `ρ̂_ij(L)` on `count` sampled graphs. Seeds are tried upward from
/// `first_seed`; samples with `ν(R) ≥ 1` are skipped.
pub fn fig5(
    first_seed: u64,
    count: usize,
    d: usize,
    n: usize,
    i: usize,
    j: usize,
    max_len: usize,
) -> Result<Vec<ConvergenceRow>> {
    let mut rows = Vec::new();
    let mut seed = first_seed;
    let mut used = 0;
    while used < count {
        let s = sample_partial_graph_flagged(&SampleSpec::new(d, n, seed)?)?;
        if !s.flagged {
            let oracle = partial_to_marginal_oracle(&s.graph)?.get(i, j);
            for row in convergence_profile(&s.graph, i, j, max_len)? {
                rows.push(ConvergenceRow {
                    seed,
                    length: row.length,
                    rho_hat: row.rho_hat,
                    oracle,
                    abs_gap: row.abs_gap,
                });
            }
            used += 1;
        }
        seed = seed.wrapping_add(1);
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RescaledRow {
    pub fraction: f64,
    pub q: f64,
    pub length: usize,
    pub rho_hat: Option<f64>,
    pub abs_gap: Option<f64>,
}

/// Profiles the rescaled expansion for each `q = fraction · 2/(1 + ν(R))` on the
/// first sample, from `first_seed` upward, that has `ν(R) ≥ 1`.
pub fn fig6(
    first_seed: u64,
    d: usize,
    n: usize,
    fractions: &[f64],
    i: usize,
    j: usize,
    max_len: usize,
) -> Result<(u64, Vec<RescaledRow>)> {
    let mut seed = first_seed;
    let s = loop {
        let s = sample_partial_graph_flagged(&SampleSpec::new(d, n, seed)?)?;
        if s.flagged {
            break s;
        }
        seed = seed.wrapping_add(1);
    };
    let bound = q_upper_bound(&s.graph);
    let mut rows = Vec::new();
    for &fraction in fractions {
        let rg = rescale(&s.graph, Some(fraction * bound))?;
        for row in convergence_profile(&rg, i, j, max_len)? {
            rows.push(RescaledRow {
                fraction,
                q: rg.q(),
                length: row.length,
                rho_hat: row.rho_hat,
                abs_gap: row.abs_gap,
            });
        }
    }
    Ok((seed, rows))
}

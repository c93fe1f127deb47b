//! Seeded generators for test instances: sampled partial-correlation graphs,
//! factor models, canonical topologies and AR(1)-type martingales.

use alloc::vec::Vec;
use nalgebra::DMatrix;
use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::linalg;
use crate::matrices::{
    precision_to_partial, spectral_report, CovarianceMatrix, PartialCorrelationGraph, PrecisionMatrix,
    SpectralReport,
};

/// Identifies the uniform generator and the Gaussian transform.
pub const GENERATOR_ID: &str = "chacha20/rand_chacha-0.9;box-muller/libm";

/// Standard normal deviates from ChaCha20 (`seed_from_u64`) through Box-Muller.
///
/// Uniforms are `((u64 >> 11) + 0.5) · 2⁻⁵³`, strictly inside `(0, 1)`. Each
/// pair of uniforms yields two deviates, consumed in order.
#[derive(Debug, Clone)]
pub struct NormalSource {
    rng: ChaCha20Rng,
    spare: Option<f64>,
}

impl NormalSource {
    pub fn new(seed: u64) -> Self {
        NormalSource {
            rng: ChaCha20Rng::seed_from_u64(seed),
            spare: None,
        }
    }

    pub fn next_uniform(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    pub fn next_normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = self.next_uniform();
        let u2 = self.next_uniform();
        let radius = libm::sqrt(-2.0 * libm::log(u1));
        let angle = 2.0 * core::f64::consts::PI * u2;
        self.spare = Some(radius * libm::sin(angle));
        radius * libm::cos(angle)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleSpec {
    d: usize,
    n: usize,
    seed: u64,
}

impl SampleSpec {
    pub fn new(d: usize, n: usize, seed: u64) -> Result<Self> {
        if d == 0 {
            return Err(Error::Empty);
        }
        if n <= d {
            return Err(Error::TooFewSamples { n, d });
        }
        Ok(SampleSpec { d, n, seed })
    }
    pub fn d(&self) -> usize {
        self.d
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// `n × d` matrix of independent standard normals, filled row by row.
pub fn sample_gaussian(spec: &SampleSpec) -> DMatrix<f64> {
    let mut src = NormalSource::new(spec.seed);
    let mut x = DMatrix::zeros(spec.n, spec.d);
    for i in 0..spec.n {
        for j in 0..spec.d {
            x[(i, j)] = src.next_normal();
        }
    }
    x
}

/// `S = (1/n) Σ (x - x̄)(x - x̄)ᵀ` over the rows of `data`.
pub fn sample_covariance(data: &DMatrix<f64>) -> DMatrix<f64> {
    let n = data.nrows();
    let mut centred = data.clone();
    for mut col in centred.column_iter_mut() {
        let mean = col.sum() / n as f64;
        col.add_scalar_mut(-mean);
    }
    let mut s = centred.transpose() * &centred / n as f64;
    linalg::symmetrize(&mut s);
    s
}

/// A sampled graph with its spectral diagnostics. `flagged` is set when
/// `ν(R) ≥ 1`; such samples are discarded by [`sample_partial_graph`] and kept
/// only by [`sample_partial_graph_flagged`].
#[derive(Debug, Clone)]
pub struct SampledGraph {
    pub graph: PartialCorrelationGraph,
    pub spectral: SpectralReport,
    pub flagged: bool,
}

/// Samples, inverts and converts, whatever the spectral radius.
pub fn sample_partial_graph_flagged(spec: &SampleSpec) -> Result<SampledGraph> {
    let s = sample_covariance(&sample_gaussian(spec));
    let omega = linalg::spd_inverse(&s).ok_or(Error::SingularSampleCovariance)?;
    let omega = PrecisionMatrix::new(omega).map_err(|_| Error::SingularSampleCovariance)?;
    let graph = precision_to_partial(&omega);
    let spectral = spectral_report(&graph);
    Ok(SampledGraph {
        flagged: spectral.nu_r >= 1.0,
        graph,
        spectral,
    })
}

/// Sampled graph with `ν(R) < 1`; otherwise `SpectralRadiusTooLarge`.
pub fn sample_partial_graph(spec: &SampleSpec) -> Result<PartialCorrelationGraph> {
    let s = sample_partial_graph_flagged(spec)?;
    if s.flagged {
        return Err(Error::SpectralRadiusTooLarge(s.spectral.nu_r));
    }
    Ok(s.graph)
}

/// `d` mixing vectors `w_ℓ` (rows of `weights`) with per-factor variances `v_ℓ`.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorModel {
    weights: DMatrix<f64>,
    variances: Vec<f64>,
}

impl FactorModel {
    /// Unit variances.
    pub fn new(weights: DMatrix<f64>) -> Result<Self> {
        let k = weights.nrows();
        Self::with_variances(weights, alloc::vec![1.0; k])
    }

    pub fn with_variances(weights: DMatrix<f64>, variances: Vec<f64>) -> Result<Self> {
        let d = linalg::check_square(&weights)?;
        if variances.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: variances.len(),
            });
        }
        if let Some((i, &v)) = variances.iter().enumerate().find(|(_, v)| !(**v > 0.0 && v.is_finite())) {
            return Err(Error::InvalidScale { index: i, value: v });
        }
        Ok(FactorModel { weights, variances })
    }

    pub fn weights(&self) -> &DMatrix<f64> {
        &self.weights
    }
    pub fn variances(&self) -> &[f64] {
        &self.variances
    }

    /// `Σ_ℓ v_ℓ w_ℓ w_ℓᵀ`.
    pub fn precision(&self) -> DMatrix<f64> {
        let d = self.weights.ncols();
        DMatrix::from_fn(d, d, |i, j| {
            (0..self.weights.nrows())
                .map(|l| self.variances[l] * self.weights[(l, i)] * self.weights[(l, j)])
                .sum()
        })
    }
}

/// `r_ij = -Σ v_ℓ w_ℓi w_ℓj / sqrt(Σ v_ℓ w_ℓi² · Σ v_ℓ w_ℓj²)`.
pub fn factor_model_partial(fm: &FactorModel) -> Result<PartialCorrelationGraph> {
    let omega = fm.precision();
    let d = omega.nrows();
    if let Some(i) = (0..d).find(|&i| !(omega[(i, i)] > 0.0)) {
        return Err(Error::DegenerateColumn(i));
    }
    let w = DMatrix::from_fn(d, d, |i, j| {
        if i == j {
            0.0
        } else {
            -omega[(i, j)] / libm::sqrt(omega[(i, i)] * omega[(j, j)])
        }
    });
    PartialCorrelationGraph::new(w)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Canonical {
    /// Nodes `1..d` linked in sequence with weight `r`, `|r| ≤ 1/2`.
    Chain { d: usize, r: f64 },
    /// Chain closed into a cycle, `d ≥ 3`, `|r| < 1/2`.
    Ring { d: usize, r: f64 },
    /// Node 1 and node `d` each linked to every middle node with weight `r`,
    /// `(d - 2) r² < 1/2`.
    OneManyOne { d: usize, r: f64 },
    /// Four nodes with every link except 1-4.
    ExampleR {
        r12: f64,
        r13: f64,
        r23: f64,
        r24: f64,
        r34: f64,
    },
}

fn out_of_bound(name: &'static str, value: f64, bound: f64) -> Error {
    Error::ParamOutOfBound { name, value, bound }
}

pub fn canonical_graph(kind: Canonical) -> Result<PartialCorrelationGraph> {
    let w = match kind {
        Canonical::Chain { d, r } => {
            if d < 2 {
                return Err(out_of_bound("d", d as f64, 2.0));
            }
            if !(r.abs() <= 0.5) {
                return Err(out_of_bound("r", r, 0.5));
            }
            DMatrix::from_fn(d, d, |i, j| if i.abs_diff(j) == 1 { r } else { 0.0 })
        }
        Canonical::Ring { d, r } => {
            if d < 3 {
                return Err(out_of_bound("d", d as f64, 3.0));
            }
            if !(r.abs() < 0.5) {
                return Err(out_of_bound("r", r, 0.5));
            }
            DMatrix::from_fn(d, d, |i, j| {
                let gap = i.abs_diff(j);
                if gap == 1 || gap == d - 1 {
                    r
                } else {
                    0.0
                }
            })
        }
        Canonical::OneManyOne { d, r } => {
            if d < 3 {
                return Err(out_of_bound("d", d as f64, 3.0));
            }
            let bound = libm::sqrt(0.5 / (d - 2) as f64);
            if !(r.abs() < bound) {
                return Err(out_of_bound("r", r, bound));
            }
            let hub = |k: usize| k == 0 || k == d - 1;
            DMatrix::from_fn(d, d, |i, j| if hub(i) != hub(j) { r } else { 0.0 })
        }
        Canonical::ExampleR { r12, r13, r23, r24, r34 } => DMatrix::from_row_slice(
            4,
            4,
            &[
                0.0, r12, r13, 0.0, //
                r12, 0.0, r23, r24, //
                r13, r23, 0.0, r34, //
                0.0, r24, r34, 0.0,
            ],
        ),
    };
    PartialCorrelationGraph::new(w).map_err(|e| match e {
        Error::NotPositiveDefinite { min_eig, .. } => out_of_bound("1 - R min eigenvalue", min_eig, 0.0),
        other => other,
    })
}

/// `X_t = α X_{t-1} + ε_t` with `X_1 = ε_1` and independent `ε_t` of variance
/// `innovation_variances[t-1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MartingaleSpec {
    alpha: f64,
    innovation_variances: Vec<f64>,
}

impl MartingaleSpec {
    pub fn new(alpha: f64, innovation_variances: Vec<f64>) -> Result<Self> {
        if innovation_variances.is_empty() {
            return Err(Error::Empty);
        }
        if !alpha.is_finite() {
            return Err(out_of_bound("alpha", alpha, f64::MAX));
        }
        if let Some((i, &v)) = innovation_variances
            .iter()
            .enumerate()
            .find(|(_, v)| !(**v > 0.0 && v.is_finite()))
        {
            return Err(Error::InvalidScale { index: i, value: v });
        }
        Ok(MartingaleSpec {
            alpha,
            innovation_variances,
        })
    }

    /// Unit innovations over `horizon` steps.
    pub fn uniform(horizon: usize, alpha: f64) -> Result<Self> {
        Self::new(alpha, alloc::vec![1.0; horizon])
    }

    pub fn horizon(&self) -> usize {
        self.innovation_variances.len()
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn innovation_variances(&self) -> &[f64] {
        &self.innovation_variances
    }
}

/// `Var X_t = α² Var X_{t-1} + v_t` and `Cov(X_s, X_t) = α^{t-s} Var X_s`, `s ≤ t`.
pub fn martingale_covariance(spec: &MartingaleSpec) -> Result<CovarianceMatrix> {
    let t = spec.horizon();
    let a = spec.alpha;
    let mut var = Vec::with_capacity(t);
    let mut prev = 0.0;
    for &v in &spec.innovation_variances {
        prev = a * a * prev + v;
        var.push(prev);
    }
    let c = DMatrix::from_fn(t, t, |i, j| {
        let (s, u) = (i.min(j), i.max(j));
        libm::pow(a, (u - s) as f64) * var[s]
    });
    CovarianceMatrix::new(c)
}

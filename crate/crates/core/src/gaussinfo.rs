//! Gaussian conditional mutual information between node sets, in determinant
//! form and as a trace series over `T_ABA = R_AB (1 - R_BB)⁻¹ R_BA (1 - R_AA)⁻¹`.

use alloc::vec::Vec;
use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg;
use crate::matrices::{precision_to_partial, PartialCorrelationGraph, PrecisionMatrix};
use crate::pathsum::loop_sum_closed;

/// Default maximum number of series terms.
pub const DEFAULT_N_MAX: usize = 1000;

/// Summation stops once the remaining terms are bounded by this.
pub const SERIES_STOP: f64 = 1e-14;

/// Closed and series values further apart than this are treated as a failure
/// of the rescaled series.
pub const RESCALED_AGREEMENT: f64 = 1e-8;

/// Disjoint sets `A`, `B`, `Z` covering every node; `Z` may be empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriPartition {
    a: Vec<usize>,
    b: Vec<usize>,
    z: Vec<usize>,
}

impl TriPartition {
    pub fn new(dim: usize, a: &[usize], b: &[usize], z: &[usize]) -> Result<Self> {
        let a = linalg::normalize_set(dim, a)?;
        let b = linalg::normalize_set(dim, b)?;
        let z = linalg::normalize_set(dim, z)?;
        if a.is_empty() || b.is_empty() {
            return Err(Error::InvalidPartition("A and B must be nonempty"));
        }
        if a.len() + b.len() + z.len() != dim {
            return Err(Error::InvalidPartition("sets must cover every node exactly once"));
        }
        let mut all: Vec<usize> = a.iter().chain(&b).chain(&z).copied().collect();
        all.sort_unstable();
        all.dedup();
        if all.len() != dim {
            return Err(Error::InvalidPartition("sets must be disjoint"));
        }
        Ok(TriPartition { a, b, z })
    }

    /// `Z` is taken to be every node outside `A` and `B`.
    pub fn with_rest(dim: usize, a: &[usize], b: &[usize]) -> Result<Self> {
        let mut ab: Vec<usize> = a.iter().chain(b).copied().collect();
        ab = linalg::normalize_set(dim, &ab)?;
        let z = linalg::complement(dim, &ab);
        Self::new(dim, a, b, &z)
    }

    pub fn a(&self) -> &[usize] {
        &self.a
    }
    pub fn b(&self) -> &[usize] {
        &self.b
    }
    pub fn z(&self) -> &[usize] {
        &self.z
    }
    /// The same partition with `A` and `B` exchanged.
    pub fn swapped(&self) -> Self {
        TriPartition {
            a: self.b.clone(),
            b: self.a.clone(),
            z: self.z.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InfoMethod {
    Closed,
    TraceSeries,
    RescaledSeries,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InfoResult {
    pub nats: f64,
    pub method: InfoMethod,
    /// Per-term contributions `tr(Tⁿ) / 2n` for the series methods.
    pub series_terms: Option<Vec<f64>>,
    /// Rescaling parameter used by [`InfoMethod::RescaledSeries`].
    pub q: Option<f64>,
}

impl InfoResult {
    pub fn bits(&self) -> f64 {
        self.nats / core::f64::consts::LN_2
    }
}

/// Blocks of `1 - R` needed by every form of the information.
struct Blocks {
    /// `1 - R_AA`
    aa: DMatrix<f64>,
    /// `R_AB (1 - R_BB)⁻¹ R_BA`
    through_b: DMatrix<f64>,
}

fn blocks(g: &PartialCorrelationGraph, part: &TriPartition) -> Result<Blocks> {
    let w = g.weights();
    let (a, b) = (&part.a, &part.b);
    let covered = a.len() + b.len() + part.z.len();
    if covered != g.dim() {
        return Err(Error::DimensionMismatch { expected: g.dim(), found: covered });
    }
    let one_bb = DMatrix::identity(b.len(), b.len()) - linalg::submatrix(w, b, b);
    let r_ab = linalg::submatrix(w, a, b);
    let ch = linalg::cholesky(one_bb).ok_or(Error::SingularBlock)?;
    let mut through_b = &r_ab * ch.solve(&r_ab.transpose());
    linalg::symmetrize(&mut through_b);
    let aa = DMatrix::identity(a.len(), a.len()) - linalg::submatrix(w, a, a);
    Ok(Blocks { aa, through_b })
}

/// `I(A;B|Z) = -½ ln det(1 - T_ABA)`, evaluated as
/// `½ [ln det(1 - R_AA) - ln det(1 - R_AA - R_AB (1 - R_BB)⁻¹ R_BA)]`.
pub fn conditional_mi_closed(g: &PartialCorrelationGraph, part: &TriPartition) -> Result<InfoResult> {
    let bl = blocks(g, part)?;
    let ld_aa = linalg::log_det_spd(&bl.aa).ok_or(Error::SingularBlock)?;
    let ld_schur = linalg::log_det_spd(&(&bl.aa - &bl.through_b)).ok_or(Error::SingularBlock)?;
    Ok(InfoResult {
        nats: 0.5 * (ld_aa - ld_schur),
        method: InfoMethod::Closed,
        series_terms: None,
        q: None,
    })
}

/// Same quantity from a precision matrix (the information is scale free).
pub fn conditional_mi_closed_precision(omega: &PrecisionMatrix, part: &TriPartition) -> Result<InfoResult> {
    conditional_mi_closed(&precision_to_partial(omega), part)
}

/// Entropy-difference form `½ ln[det C_{A|Z} / det C_{A|B,Z}]` with
/// `C_{A|Z} = [(Ω_{A∪B})⁻¹]_AA` and `C_{A|B,Z} = (Ω_AA)⁻¹`, `Ω = 1 - R`.
pub fn conditional_mi_entropy(g: &PartialCorrelationGraph, part: &TriPartition) -> Result<f64> {
    let w = g.weights();
    let mut ab: Vec<usize> = part.a.iter().chain(&part.b).copied().collect();
    ab.sort_unstable();
    let na = part.a.len();
    let omega_ab = DMatrix::identity(ab.len(), ab.len()) - linalg::submatrix(w, &ab, &ab);
    let cov_ab = linalg::spd_inverse(&omega_ab).ok_or(Error::SingularBlock)?;
    let pos: Vec<usize> = part.a.iter().map(|k| ab.binary_search(k).unwrap()).collect();
    let cov_a_given_z = linalg::submatrix(&cov_ab, &pos, &pos);
    let omega_aa = DMatrix::identity(na, na) - linalg::submatrix(w, &part.a, &part.a);
    let ld_given_z = linalg::log_det_spd(&cov_a_given_z).ok_or(Error::SingularBlock)?;
    let ld_omega_aa = linalg::log_det_spd(&omega_aa).ok_or(Error::SingularBlock)?;
    Ok(0.5 * (ld_given_z + ld_omega_aa))
}

/// `L⁻¹ X L⁻ᵀ` with `L Lᵀ = 1 - R_AA`: symmetric and similar to `T_ABA`.
fn symmetric_t(bl: &Blocks) -> Result<DMatrix<f64>> {
    let ch = linalg::cholesky(bl.aa.clone()).ok_or(Error::SingularBlock)?;
    let l = ch.l();
    let y = l
        .solve_lower_triangular(&bl.through_b)
        .ok_or(Error::SingularBlock)?;
    let mut t = l
        .solve_lower_triangular(&y.transpose())
        .ok_or(Error::SingularBlock)?;
    linalg::symmetrize(&mut t);
    Ok(t)
}

/// `T_ABA` itself.
pub fn t_aba(g: &PartialCorrelationGraph, part: &TriPartition) -> Result<DMatrix<f64>> {
    let bl = blocks(g, part)?;
    let inv_aa = linalg::spd_inverse(&bl.aa).ok_or(Error::SingularBlock)?;
    Ok(bl.through_b * inv_aa)
}

/// Eigenvalues of `T_ABA`, ascending. They are real and lie in `[0, 1)` for a
/// positive-definite system.
pub fn t_aba_spectrum(g: &PartialCorrelationGraph, part: &TriPartition) -> Result<Vec<f64>> {
    Ok(linalg::sym_eigenvalues(&symmetric_t(&blocks(g, part)?)?))
}

// Individual traces can cancel (symmetric spectra), so the stop test uses the
// bound `dim · ν^n / 2n` on the next term rather than the term itself.
fn trace_series(t: &DMatrix<f64>, nu: f64, n_max: usize) -> Vec<f64> {
    let dim = t.nrows() as f64;
    let mut terms = Vec::new();
    let mut power = t.clone();
    let mut nu_n = nu;
    for n in 1..=n_max {
        terms.push(power.trace() / (2 * n) as f64);
        nu_n *= nu;
        if dim * nu_n / ((2 * n + 2) as f64) < SERIES_STOP {
            break;
        }
        power = &power * t;
    }
    terms
}

/// `Σ_{n=1}^{n_max} tr(T_ABAⁿ) / 2n`, stopping early once a term drops below
/// [`SERIES_STOP`].
pub fn conditional_mi_series(
    g: &PartialCorrelationGraph,
    part: &TriPartition,
    n_max: usize,
) -> Result<InfoResult> {
    let t = symmetric_t(&blocks(g, part)?)?;
    let nu = linalg::spectral_radius_sym(&t);
    if nu >= 1.0 {
        return Err(Error::SpectralRadiusTooLarge(nu));
    }
    let terms = trace_series(&t, nu, n_max);
    Ok(InfoResult {
        nats: terms.iter().sum(),
        method: InfoMethod::TraceSeries,
        series_terms: Some(terms),
        q: None,
    })
}

/// Series for `T(q) = (1 - q) 1 + q T_ABA`:
/// `I = ½ d_A ln q + Σ tr(T(q)ⁿ) / 2n`. Without `q`, uses
/// `q = 2 / (2 - λ_min - λ_max)`, which minimises the spectral radius of `T(q)`.
pub fn conditional_mi_series_rescaled(
    g: &PartialCorrelationGraph,
    part: &TriPartition,
    q: Option<f64>,
    n_max: usize,
) -> Result<InfoResult> {
    let t = symmetric_t(&blocks(g, part)?)?;
    let ev = linalg::sym_eigenvalues(&t);
    let (lo, hi) = (ev[0], ev[ev.len() - 1]);
    if hi >= 1.0 {
        return Err(Error::SpectralRadiusTooLarge(hi));
    }
    let bound = 2.0 / (1.0 - lo);
    let q = q.unwrap_or(2.0 / (2.0 - lo - hi));
    if !(q > 0.0 && q < bound) {
        return Err(Error::QOutOfRange { q, bound });
    }
    let n = t.nrows();
    let tq = DMatrix::identity(n, n) * (1.0 - q) + t * q;
    let nu = ((1.0 - q) + q * lo).abs().max(((1.0 - q) + q * hi).abs());
    let terms = trace_series(&tq, nu, n_max);
    let offset = 0.5 * n as f64 * libm::log(q);
    Ok(InfoResult {
        nats: offset + terms.iter().sum::<f64>(),
        method: InfoMethod::RescaledSeries,
        series_terms: Some(terms),
        q: Some(q),
    })
}

/// Rescaled series checked against the closed form; falls back to the closed
/// form when they disagree by more than [`RESCALED_AGREEMENT`].
pub fn conditional_mi_rescaled_checked(
    g: &PartialCorrelationGraph,
    part: &TriPartition,
    q: Option<f64>,
    n_max: usize,
) -> Result<InfoResult> {
    let closed = conditional_mi_closed(g, part)?;
    match conditional_mi_series_rescaled(g, part, q, n_max) {
        Ok(s) if (s.nats - closed.nats).abs() <= RESCALED_AGREEMENT => Ok(s),
        _ => Ok(closed),
    }
}

/// Closed loop sum `p_ii^{j*}` and `I(X_i; rest | X_j)`, which satisfy
/// `loop_sum = 1 - exp(-2 I)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoopInfo {
    pub loop_sum: f64,
    pub mi: f64,
    /// `|loop_sum - (1 - exp(-2 mi))|`
    pub residual: f64,
}

pub fn loop_sum_mi_identity(g: &PartialCorrelationGraph, i: usize, j: usize) -> Result<LoopInfo> {
    let d = g.dim();
    if d < 3 {
        return Err(Error::InvalidPartition("needs at least three nodes"));
    }
    if i == j {
        return Err(Error::InvalidPartition("i and j must differ"));
    }
    let loop_sum = loop_sum_closed(g, i, j)?;
    let rest: Vec<usize> = (0..d).filter(|&k| k != i && k != j).collect();
    let mi = conditional_mi_closed(g, &TriPartition::new(d, &[i], &rest, &[j])?)?.nats;
    Ok(LoopInfo {
        loop_sum,
        mi,
        residual: (loop_sum - (1.0 - libm::exp(-2.0 * mi))).abs(),
    })
}

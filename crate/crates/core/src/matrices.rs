//! Validated covariance, precision, marginal-correlation and partial-correlation
//! matrices, conversions among them, and the matrix-inversion oracle.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg;

/// Numerical tolerances used when validating raw matrices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Largest accepted `max |a_ij - a_ji| / max |a_ij|`.
    pub sym: f64,
    /// Smallest accepted eigenvalue, relative to the largest one.
    pub pd: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            sym: 1e-9,
            pd: 1e-12,
        }
    }
}

/// Condition number of `1 - R` above which the oracle result is flagged.
pub const CONDITION_FLAG: f64 = 1e8;

fn validate_spd(raw: DMatrix<f64>, tol: &Tolerances) -> Result<DMatrix<f64>> {
    linalg::check_square(&raw)?;
    let asymmetry = linalg::relative_asymmetry(&raw);
    if asymmetry > tol.sym {
        return Err(Error::NotSymmetric {
            asymmetry,
            tol: tol.sym,
        });
    }
    let mut m = raw;
    linalg::symmetrize(&mut m);
    check_pd(&m, tol)?;
    Ok(m)
}

fn check_pd(m: &DMatrix<f64>, tol: &Tolerances) -> Result<()> {
    let ev = linalg::sym_eigenvalues(m);
    let (min_eig, max_eig) = (ev[0], ev[ev.len() - 1]);
    if max_eig <= 0.0 || min_eig <= tol.pd * max_eig {
        return Err(Error::NotPositiveDefinite { min_eig, max_eig });
    }
    Ok(())
}

fn unit_diagonal_normalize(inv: &DMatrix<f64>) -> DMatrix<f64> {
    let n = inv.nrows();
    let s: Vec<f64> = (0..n).map(|i| libm::sqrt(inv[(i, i)])).collect();
    DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            1.0
        } else {
            (inv[(i, j)] / (s[i] * s[j])).clamp(-1.0, 1.0)
        }
    })
}

/// Symmetric positive-definite covariance matrix `C`.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    m: DMatrix<f64>,
}

/// Symmetric positive-definite precision matrix `Ω = C⁻¹`.
#[derive(Debug, Clone, PartialEq)]
pub struct PrecisionMatrix {
    m: DMatrix<f64>,
}

/// Marginal (Pearson) correlation matrix with unit diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct MarginalCorrelationMatrix {
    m: DMatrix<f64>,
}

/// Validates `raw` as a covariance matrix, symmetrising small asymmetries.
pub fn validate_covariance(raw: DMatrix<f64>, tol: &Tolerances) -> Result<CovarianceMatrix> {
    Ok(CovarianceMatrix {
        m: validate_spd(raw, tol)?,
    })
}

/// Validates `raw` as a precision matrix, symmetrising small asymmetries.
pub fn validate_precision(raw: DMatrix<f64>, tol: &Tolerances) -> Result<PrecisionMatrix> {
    Ok(PrecisionMatrix {
        m: validate_spd(raw, tol)?,
    })
}

/// Validates `raw` as a marginal correlation matrix: symmetric, unit diagonal,
/// entries in `[-1, 1]`, positive semi-definite.
pub fn validate_marginal(raw: DMatrix<f64>, tol: &Tolerances) -> Result<MarginalCorrelationMatrix> {
    let n = linalg::check_square(&raw)?;
    let asymmetry = linalg::relative_asymmetry(&raw);
    if asymmetry > tol.sym {
        return Err(Error::NotSymmetric {
            asymmetry,
            tol: tol.sym,
        });
    }
    let mut m = raw;
    linalg::symmetrize(&mut m);
    for i in 0..n {
        if (m[(i, i)] - 1.0).abs() > tol.sym {
            return Err(Error::EntryOutOfRange {
                i,
                j: i,
                value: m[(i, i)],
            });
        }
        m[(i, i)] = 1.0;
        for j in 0..n {
            if m[(i, j)].abs() > 1.0 {
                return Err(Error::EntryOutOfRange {
                    i,
                    j,
                    value: m[(i, j)],
                });
            }
        }
    }
    let ev = linalg::sym_eigenvalues(&m);
    let (min_eig, max_eig) = (ev[0], ev[n - 1]);
    if min_eig < -tol.pd * max_eig {
        return Err(Error::NotPositiveDefinite { min_eig, max_eig });
    }
    Ok(MarginalCorrelationMatrix { m })
}

impl CovarianceMatrix {
    /// Validates with default tolerances.
    pub fn new(raw: DMatrix<f64>) -> Result<Self> {
        validate_covariance(raw, &Tolerances::default())
    }
    pub fn dim(&self) -> usize {
        self.m.nrows()
    }
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }
    pub fn into_matrix(self) -> DMatrix<f64> {
        self.m
    }
    pub fn to_precision(&self) -> Result<PrecisionMatrix> {
        let m = linalg::spd_inverse(&self.m).ok_or(Error::SingularMatrix)?;
        Ok(PrecisionMatrix { m })
    }
}

impl PrecisionMatrix {
    /// Validates with default tolerances.
    pub fn new(raw: DMatrix<f64>) -> Result<Self> {
        validate_precision(raw, &Tolerances::default())
    }
    pub fn dim(&self) -> usize {
        self.m.nrows()
    }
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }
    pub fn into_matrix(self) -> DMatrix<f64> {
        self.m
    }
    pub fn to_covariance(&self) -> Result<CovarianceMatrix> {
        let m = linalg::spd_inverse(&self.m).ok_or(Error::SingularMatrix)?;
        Ok(CovarianceMatrix { m })
    }
}

impl MarginalCorrelationMatrix {
    pub fn new(raw: DMatrix<f64>) -> Result<Self> {
        validate_marginal(raw, &Tolerances::default())
    }
    pub fn dim(&self) -> usize {
        self.m.nrows()
    }
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.m[(i, j)]
    }
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }
    pub fn into_matrix(self) -> DMatrix<f64> {
        self.m
    }
    /// Reads the correlation matrix as the covariance of standardised variables.
    pub fn to_covariance(&self) -> Result<CovarianceMatrix> {
        CovarianceMatrix::new(self.m.clone())
    }
}

/// Partial-correlation graph: symmetric zero-diagonal weights `R`, node labels
/// and an optional scale vector `Λ` with `λ_i = sqrt(ω_ii)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialCorrelationGraph {
    weights: DMatrix<f64>,
    labels: Vec<String>,
    scale: Option<Vec<f64>>,
}

fn default_labels(n: usize) -> Vec<String> {
    (1..=n).map(|k| format!("{k}")).collect()
}

impl PartialCorrelationGraph {
    /// Builds a graph from `R` with default tolerances and labels `"1".."d"`.
    pub fn new(weights: DMatrix<f64>) -> Result<Self> {
        Self::with_tolerances(weights, &Tolerances::default())
    }

    pub fn with_tolerances(raw: DMatrix<f64>, tol: &Tolerances) -> Result<Self> {
        let n = linalg::check_square(&raw)?;
        let asymmetry = linalg::relative_asymmetry(&raw);
        if asymmetry > tol.sym {
            return Err(Error::NotSymmetric {
                asymmetry,
                tol: tol.sym,
            });
        }
        let mut w = raw;
        linalg::symmetrize(&mut w);
        for i in 0..n {
            if w[(i, i)].abs() > tol.sym {
                return Err(Error::NonZeroDiagonal {
                    index: i,
                    value: w[(i, i)],
                });
            }
            w[(i, i)] = 0.0;
            for j in (i + 1)..n {
                if w[(i, j)].abs() >= 1.0 {
                    return Err(Error::EntryOutOfRange {
                        i,
                        j,
                        value: w[(i, j)],
                    });
                }
            }
        }
        let one_minus = DMatrix::identity(n, n) - &w;
        check_pd(&one_minus, tol)?;
        Ok(Self::from_parts_unchecked(w, default_labels(n), None))
    }

    pub(crate) fn from_parts_unchecked(
        weights: DMatrix<f64>,
        labels: Vec<String>,
        scale: Option<Vec<f64>>,
    ) -> Self {
        PartialCorrelationGraph {
            weights,
            labels,
            scale,
        }
    }

    /// Replaces the node labels; they must be unique and one per node.
    pub fn with_labels<S: Into<String>>(mut self, labels: Vec<S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        check_labels(&labels, self.dim())?;
        self.labels = labels;
        Ok(self)
    }

    /// Attaches a strictly positive scale vector `Λ`.
    pub fn with_scale(mut self, scale: Vec<f64>) -> Result<Self> {
        if scale.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: scale.len(),
            });
        }
        if let Some((index, &value)) = scale
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v > 0.0))
        {
            return Err(Error::InvalidScale { index, value });
        }
        self.scale = Some(scale);
        Ok(self)
    }

    /// Drops the scale vector.
    pub fn without_scale(mut self) -> Self {
        self.scale = None;
        self
    }

    pub fn dim(&self) -> usize {
        self.weights.nrows()
    }
    pub fn weights(&self) -> &DMatrix<f64> {
        &self.weights
    }
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[(i, j)]
    }
    pub fn labels(&self) -> &[String] {
        &self.labels
    }
    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }
    pub fn scale(&self) -> Option<&[f64]> {
        self.scale.as_deref()
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(String::from(label)))
    }

    pub fn indices_of<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<usize>> {
        labels.iter().map(|l| self.index_of(l.as_ref())).collect()
    }

    /// Nodes joined to `i` by a nonzero edge, ascending.
    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        (0..self.dim())
            .filter(|&k| k != i && self.weights[(i, k)] != 0.0)
            .collect()
    }

    /// Induced subgraph on `nodes` (in the given order), keeping labels and scale.
    pub fn subgraph(&self, nodes: &[usize]) -> Result<Self> {
        let dim = self.dim();
        if nodes.is_empty() {
            return Err(Error::EmptyRemainder);
        }
        if let Some(&bad) = nodes.iter().find(|&&k| k >= dim) {
            return Err(Error::IndexOutOfRange { index: bad, dim });
        }
        let mut seen = nodes.to_vec();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != nodes.len() {
            return Err(Error::InvalidNodeSet("repeated node"));
        }
        Ok(Self::from_parts_unchecked(
            linalg::submatrix(&self.weights, nodes, nodes),
            nodes.iter().map(|&k| self.labels[k].clone()).collect(),
            self.scale
                .as_ref()
                .map(|s| nodes.iter().map(|&k| s[k]).collect()),
        ))
    }
}

fn check_labels(labels: &[String], dim: usize) -> Result<()> {
    if labels.len() != dim {
        return Err(Error::LabelCount {
            expected: dim,
            found: labels.len(),
        });
    }
    for (k, l) in labels.iter().enumerate() {
        if labels[..k].contains(l) {
            return Err(Error::DuplicateLabel(l.clone()));
        }
    }
    Ok(())
}

/// Convergence regime of the path expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `ν(R₊) < 1`: the expansion converges absolutely.
    Absolute,
    /// `ν(R) < 1 ≤ ν(R₊)`: converges when summed in order of path length.
    Conditional,
    /// `ν(R) ≥ 1`: the graph must be rescaled first.
    RescaleRequired,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralReport {
    pub nu_r: f64,
    pub nu_r_plus: f64,
    pub regime: Regime,
}

/// Oracle marginals with the conditioning of `1 - R`.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub marginal: MarginalCorrelationMatrix,
    pub condition_number: f64,
    /// True when `condition_number` exceeds [`CONDITION_FLAG`].
    pub ill_conditioned: bool,
}

/// `ρ_ij = c_ij / sqrt(c_ii c_jj)`.
pub fn cov_to_marginal(c: &CovarianceMatrix) -> MarginalCorrelationMatrix {
    MarginalCorrelationMatrix {
        m: unit_diagonal_normalize(&c.m),
    }
}

/// `r_ij = -ω_ij / sqrt(ω_ii ω_jj)`, storing `λ_i = sqrt(ω_ii)` as the scale.
pub fn precision_to_partial(omega: &PrecisionMatrix) -> PartialCorrelationGraph {
    let n = omega.dim();
    let lambda: Vec<f64> = (0..n).map(|i| libm::sqrt(omega.m[(i, i)])).collect();
    let w = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            0.0
        } else {
            (-omega.m[(i, j)] / (lambda[i] * lambda[j])).clamp(-1.0, 1.0)
        }
    });
    PartialCorrelationGraph::from_parts_unchecked(w, default_labels(n), Some(lambda))
}

/// `Ω = Λ (1 - R) Λ`.
pub fn partial_to_precision(g: &PartialCorrelationGraph) -> Result<PrecisionMatrix> {
    let lambda = g.scale().ok_or(Error::MissingScale)?;
    let n = g.dim();
    let m = DMatrix::from_fn(n, n, |i, j| {
        let base = if i == j { 1.0 } else { -g.weights[(i, j)] };
        lambda[i] * base * lambda[j]
    });
    Ok(PrecisionMatrix { m })
}

/// Exact marginal correlations from `(1 - R)⁻¹`, normalised to unit diagonal.
pub fn partial_to_marginal_oracle(g: &PartialCorrelationGraph) -> Result<MarginalCorrelationMatrix> {
    Ok(MarginalCorrelationMatrix {
        m: marginal_from_weights(&g.weights)?,
    })
}

/// Oracle marginals plus the condition number of `1 - R`.
pub fn oracle_report(g: &PartialCorrelationGraph) -> Result<OracleReport> {
    let marginal = partial_to_marginal_oracle(g)?;
    let n = g.dim();
    let ev = linalg::sym_eigenvalues(&(DMatrix::identity(n, n) - &g.weights));
    let condition_number = ev[n - 1] / ev[0];
    Ok(OracleReport {
        marginal,
        condition_number,
        ill_conditioned: !(condition_number <= CONDITION_FLAG),
    })
}

/// Normalised `(1 - W)⁻¹` for a weight matrix that may carry self-loops.
pub(crate) fn marginal_from_weights(w: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = w.nrows();
    let inv = linalg::spd_inverse(&(DMatrix::identity(n, n) - w)).ok_or(Error::SingularMatrix)?;
    Ok(unit_diagonal_normalize(&inv))
}

/// Spectral radii of `R` and `|R|` with the resulting convergence regime.
pub fn spectral_report(g: &PartialCorrelationGraph) -> SpectralReport {
    let nu_r = linalg::spectral_radius_sym(&g.weights);
    let nu_r_plus = linalg::spectral_radius_sym(&g.weights.map(f64::abs)).max(nu_r);
    let regime = if nu_r >= 1.0 {
        Regime::RescaleRequired
    } else if nu_r_plus >= 1.0 {
        Regime::Conditional
    } else {
        Regime::Absolute
    };
    SpectralReport {
        nu_r,
        nu_r_plus,
        regime,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn m(rows: usize, data: &[f64]) -> DMatrix<f64> {
        DMatrix::from_row_slice(rows, data.len() / rows, data)
    }

    #[test]
    fn identity_covariance_is_valid() {
        let c = CovarianceMatrix::new(DMatrix::identity(2, 2)).unwrap();
        assert_eq!(c.dim(), 2);
    }

    #[test]
    fn indefinite_covariance_rejected() {
        let err = CovarianceMatrix::new(m(2, &[1.0, 2.0, 2.0, 1.0])).unwrap_err();
        assert!(matches!(err, Error::NotPositiveDefinite { .. }));
    }

    #[test]
    fn small_asymmetry_is_averaged() {
        let tol = Tolerances {
            sym: 1e-3,
            ..Tolerances::default()
        };
        let c = validate_covariance(m(2, &[1.0, 0.5, 0.5001, 1.0]), &tol).unwrap();
        assert_abs_diff_eq!(c.matrix()[(0, 1)], 0.50005, epsilon = 1e-15);
        assert_abs_diff_eq!(c.matrix()[(1, 0)], 0.50005, epsilon = 1e-15);
        let err = CovarianceMatrix::new(m(2, &[1.0, 0.5, 0.5001, 1.0])).unwrap_err();
        assert!(matches!(err, Error::NotSymmetric { .. }));
    }

    #[test]
    fn not_square_rejected() {
        let err = CovarianceMatrix::new(DMatrix::zeros(2, 3)).unwrap_err();
        assert_eq!(err, Error::NotSquare { rows: 2, cols: 3 });
    }

    #[test]
    fn cov_to_marginal_examples() {
        let p = cov_to_marginal(&CovarianceMatrix::new(m(2, &[4.0, 0.0, 0.0, 9.0])).unwrap());
        assert_eq!(p.matrix(), &DMatrix::identity(2, 2));
        let p = cov_to_marginal(&CovarianceMatrix::new(m(2, &[4.0, 2.0, 2.0, 4.0])).unwrap());
        assert_abs_diff_eq!(p.get(0, 1), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn precision_to_partial_examples() {
        let g = precision_to_partial(&PrecisionMatrix::new(DMatrix::identity(3, 3)).unwrap());
        assert_eq!(g.weights(), &DMatrix::zeros(3, 3));
        let g = precision_to_partial(&PrecisionMatrix::new(m(2, &[1.0, -0.3, -0.3, 1.0])).unwrap());
        assert_abs_diff_eq!(g.weight(0, 1), 0.3, epsilon = 1e-15);
        assert_eq!(g.labels(), &["1", "2"]);
    }

    #[test]
    fn chain_precision_is_tridiagonal() {
        let g = PartialCorrelationGraph::new(m(3, &[0.0, 0.3, 0.0, 0.3, 0.0, -0.2, 0.0, -0.2, 0.0]))
            .unwrap()
            .with_scale(alloc::vec![1.0; 3])
            .unwrap();
        let omega = partial_to_precision(&g).unwrap();
        let expected = m(3, &[1.0, -0.3, 0.0, -0.3, 1.0, 0.2, 0.0, 0.2, 1.0]);
        assert_abs_diff_eq!(omega.matrix(), &expected, epsilon = 1e-15);
    }

    #[test]
    fn missing_scale_error() {
        let g = PartialCorrelationGraph::new(DMatrix::zeros(2, 2)).unwrap();
        assert_eq!(partial_to_precision(&g).unwrap_err(), Error::MissingScale);
    }

    #[test]
    fn graph_validation_errors() {
        assert!(matches!(
            PartialCorrelationGraph::new(m(2, &[0.1, 0.2, 0.2, 0.0])),
            Err(Error::NonZeroDiagonal { index: 0, .. })
        ));
        assert!(matches!(
            PartialCorrelationGraph::new(m(2, &[0.0, 1.0, 1.0, 0.0])),
            Err(Error::EntryOutOfRange { .. })
        ));
        // three nodes pairwise at 0.6: largest eigenvalue of R is 1.2
        assert!(matches!(
            PartialCorrelationGraph::new(m(3, &[0.0, 0.6, 0.6, 0.6, 0.0, 0.6, 0.6, 0.6, 0.0])),
            Err(Error::NotPositiveDefinite { .. })
        ));
        let g = PartialCorrelationGraph::new(DMatrix::zeros(2, 2)).unwrap();
        assert!(matches!(
            g.clone().with_labels(alloc::vec!["a", "a"]),
            Err(Error::DuplicateLabel(_))
        ));
        assert!(matches!(
            g.clone().with_labels(alloc::vec!["a"]),
            Err(Error::LabelCount { .. })
        ));
        assert!(matches!(
            g.with_scale(alloc::vec![1.0, 0.0]),
            Err(Error::InvalidScale { index: 1, .. })
        ));
    }

    #[test]
    fn oracle_small_cases() {
        let r = 0.35;
        let g = PartialCorrelationGraph::new(m(2, &[0.0, r, r, 0.0])).unwrap();
        let p = partial_to_marginal_oracle(&g).unwrap();
        assert_abs_diff_eq!(p.get(0, 1), r, epsilon = 1e-15);

        let (a, b) = (0.4, -0.3);
        let g = PartialCorrelationGraph::new(m(3, &[0.0, a, 0.0, a, 0.0, b, 0.0, b, 0.0])).unwrap();
        let p = partial_to_marginal_oracle(&g).unwrap();
        assert_abs_diff_eq!(p.get(0, 1), a / libm::sqrt(1.0 - b * b), epsilon = 1e-14);
        assert_abs_diff_eq!(p.get(1, 2), b / libm::sqrt(1.0 - a * a), epsilon = 1e-14);
        assert_abs_diff_eq!(
            p.get(0, 2),
            a * b / libm::sqrt((1.0 - a * a) * (1.0 - b * b)),
            epsilon = 1e-14
        );
    }

    #[test]
    fn oracle_one_many_one() {
        let (d, r) = (5, 0.3);
        let w = DMatrix::from_fn(d, d, |i, j| {
            let ends = |k: usize| k == 0 || k == d - 1;
            if i != j && (ends(i) ^ ends(j)) {
                r
            } else {
                0.0
            }
        });
        let p = partial_to_marginal_oracle(&PartialCorrelationGraph::new(w).unwrap()).unwrap();
        assert_abs_diff_eq!(p.get(0, d - 1), 0.27 / 0.73, epsilon = 1e-14);
        assert_abs_diff_eq!(p.get(0, d - 1), 0.369_863_013_698_630_1, epsilon = 1e-14);
    }

    #[test]
    fn spectral_examples() {
        let rep = spectral_report(&PartialCorrelationGraph::new(DMatrix::zeros(3, 3)).unwrap());
        assert_eq!(rep.nu_r, 0.0);
        assert_eq!(rep.regime, Regime::Absolute);

        let g = PartialCorrelationGraph::new(m(2, &[0.0, 0.5, 0.5, 0.0])).unwrap();
        let rep = spectral_report(&g);
        assert_abs_diff_eq!(rep.nu_r, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(rep.nu_r_plus, 0.5, epsilon = 1e-14);

        let d = 10;
        let w = DMatrix::from_fn(d, d, |i, j| if i.abs_diff(j) == 1 { 0.45 } else { 0.0 });
        let rep = spectral_report(&PartialCorrelationGraph::new(w).unwrap());
        let exact = 2.0 * 0.45 * libm::cos(core::f64::consts::PI / 11.0);
        assert!((rep.nu_r - exact).abs() <= 1e-10 * exact);
    }

    #[test]
    fn rescale_required_regime() {
        let r = -0.6;
        let g = PartialCorrelationGraph::new(m(3, &[0.0, r, r, r, 0.0, r, r, r, 0.0])).unwrap();
        let rep = spectral_report(&g);
        assert_abs_diff_eq!(rep.nu_r, 1.2, epsilon = 1e-12);
        assert_eq!(rep.regime, Regime::RescaleRequired);
    }

    #[test]
    fn conditional_regime() {
        // alternating-sign 4-cycle: R has spectral radius below 1, |R| does not
        let (a, b) = (0.55, -0.55);
        let w = m(
            4,
            &[0.0, a, 0.0, a, a, 0.0, b, 0.0, 0.0, b, 0.0, a, a, 0.0, a, 0.0],
        );
        let rep = spectral_report(&PartialCorrelationGraph::new(w).unwrap());
        assert!(rep.nu_r < 1.0 && rep.nu_r_plus >= 1.0);
        assert_eq!(rep.regime, Regime::Conditional);
    }

    #[test]
    fn ill_conditioned_flag() {
        let loose = Tolerances {
            pd: 1e-14,
            ..Tolerances::default()
        };
        let g = PartialCorrelationGraph::new(m(2, &[0.0, 0.5, 0.5, 0.0])).unwrap();
        let rep = oracle_report(&g).unwrap();
        assert_abs_diff_eq!(rep.condition_number, 3.0, epsilon = 1e-12);
        assert!(!rep.ill_conditioned);

        let r = 1.0 - 2e-10;
        let g = PartialCorrelationGraph::with_tolerances(m(2, &[0.0, r, r, 0.0]), &loose).unwrap();
        let rep = oracle_report(&g).unwrap();
        assert!(rep.ill_conditioned);
        assert!(rep.condition_number > 1e9);
        assert_abs_diff_eq!(rep.marginal.get(0, 1), r, epsilon = 1e-9);
    }

    #[test]
    fn subgraph_keeps_labels_and_scale() {
        let g = PartialCorrelationGraph::new(m(3, &[0.0, 0.1, 0.2, 0.1, 0.0, 0.3, 0.2, 0.3, 0.0]))
            .unwrap()
            .with_labels(alloc::vec!["a", "b", "c"])
            .unwrap()
            .with_scale(alloc::vec![1.0, 2.0, 3.0])
            .unwrap();
        let s = g.subgraph(&[2, 0]).unwrap();
        assert_eq!(s.labels(), &["c", "a"]);
        assert_eq!(s.scale().unwrap(), &[3.0, 1.0]);
        assert_eq!(s.weight(0, 1), 0.2);
        assert_eq!(g.index_of("b").unwrap(), 1);
        assert!(matches!(g.index_of("z"), Err(Error::UnknownLabel(_))));
        assert_eq!(g.neighbors(1), alloc::vec![0, 2]);
    }
}

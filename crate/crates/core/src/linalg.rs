//! Small dense helpers shared by the modules.

use alloc::vec::Vec;
use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::error::{Error, Result};

pub(crate) fn submatrix(m: &DMatrix<f64>, rows: &[usize], cols: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), cols.len(), |a, b| m[(rows[a], cols[b])])
}

pub(crate) fn cholesky(m: DMatrix<f64>) -> Option<Cholesky<f64, Dyn>> {
    Cholesky::new(m)
}

/// Inverse of a symmetric positive-definite matrix through its Cholesky factor.
pub(crate) fn spd_inverse(m: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    if m.nrows() == 0 {
        return Some(DMatrix::zeros(0, 0));
    }
    let mut inv = cholesky(m.clone())?.inverse();
    symmetrize(&mut inv);
    Some(inv)
}

/// `ln det m` for symmetric positive-definite `m`, accumulated from the Cholesky diagonal.
pub(crate) fn log_det_spd(m: &DMatrix<f64>) -> Option<f64> {
    if m.nrows() == 0 {
        return Some(0.0);
    }
    let ch = cholesky(m.clone())?;
    let l = ch.l_dirty();
    Some(2.0 * (0..m.nrows()).map(|i| libm::log(l[(i, i)])).sum::<f64>())
}

pub(crate) fn symmetrize(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let v = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
}

/// Eigenvalues of a symmetric matrix (lower triangle is read), ascending.
pub(crate) fn sym_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let ev: DVector<f64> = m.clone().symmetric_eigenvalues();
    let mut v: Vec<f64> = ev.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

pub(crate) fn spectral_radius_sym(m: &DMatrix<f64>) -> f64 {
    sym_eigenvalues(m)
        .iter()
        .fold(0.0_f64, |acc, &x| acc.max(x.abs()))
}

pub(crate) fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, &x| acc.max(x.abs()))
}

/// Largest `|m_ij - m_ji|` relative to the largest entry magnitude.
pub(crate) fn relative_asymmetry(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    let scale = max_abs(m);
    if scale > 0.0 {
        worst / scale
    } else {
        worst
    }
}

pub(crate) fn check_square(m: &DMatrix<f64>) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    if m.nrows() == 0 {
        return Err(Error::Empty);
    }
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            if !m[(i, j)].is_finite() {
                return Err(Error::NonFinite { i, j });
            }
        }
    }
    Ok(m.nrows())
}

/// Sorted, deduplicated copy of `set`, checked against `dim`.
pub(crate) fn normalize_set(dim: usize, set: &[usize]) -> Result<Vec<usize>> {
    let mut v: Vec<usize> = set.to_vec();
    v.sort_unstable();
    v.dedup();
    if let Some(&bad) = v.iter().find(|&&k| k >= dim) {
        return Err(Error::IndexOutOfRange { index: bad, dim });
    }
    Ok(v)
}

/// Indices `0..dim` not contained in the sorted set `set`.
pub(crate) fn complement(dim: usize, set: &[usize]) -> Vec<usize> {
    (0..dim).filter(|k| set.binary_search(k).is_err()).collect()
}

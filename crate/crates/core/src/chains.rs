//! Homogeneous linear chains: recurrences for the path sums, pairwise marginal
//! correlations, correlation length and the amplification factor of appended
//! chains.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Chain of `d` nodes with every link weighted `r`, `|r| ≤ 1/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainSpec {
    d: usize,
    r: f64,
}

impl ChainSpec {
    pub fn new(d: usize, r: f64) -> Result<Self> {
        if d == 0 {
            return Err(Error::ParamOutOfBound {
                name: "d",
                value: 0.0,
                bound: 1.0,
            });
        }
        check_r(r)?;
        Ok(ChainSpec { d, r })
    }
    pub fn d(&self) -> usize {
        self.d
    }
    pub fn r(&self) -> f64 {
        self.r
    }
}

fn check_r(r: f64) -> Result<()> {
    if !(r.abs() <= 0.5) {
        return Err(Error::ParamOutOfBound {
            name: "r",
            value: r,
            bound: 0.5,
        });
    }
    Ok(())
}

/// Recurrence state for `k = 2..=d`: star-path sum `c_k` between the ends of a
/// `k`-chain, closed loop sum `ℓ_k` at one end, and end-to-end correlation `ρ_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainSolution {
    d: usize,
    c: Vec<f64>,
    l: Vec<f64>,
    rho: Vec<f64>,
}

impl ChainSolution {
    pub fn d(&self) -> usize {
        self.d
    }
    /// `c_k` for `2 ≤ k ≤ d`.
    pub fn c(&self, k: usize) -> f64 {
        self.c[k - 2]
    }
    /// `ℓ_k` for `2 ≤ k ≤ d`.
    pub fn l(&self, k: usize) -> f64 {
        self.l[k - 2]
    }
    /// End-to-end correlation `ρ_k` of a `k`-chain, `2 ≤ k ≤ d`.
    pub fn rho_endpoint(&self, k: usize) -> f64 {
        self.rho[k - 2]
    }
    pub fn c_values(&self) -> &[f64] {
        &self.c
    }
    pub fn l_values(&self) -> &[f64] {
        &self.l
    }
    pub fn rho_endpoints(&self) -> &[f64] {
        &self.rho
    }

    /// `ρ_ij` between nodes `i` and `j` (1-based).
    pub fn pair_corr(&self, i: usize, j: usize) -> Result<f64> {
        let d = self.d;
        for k in [i, j] {
            if k == 0 || k > d {
                return Err(Error::IndexOutOfRange { index: k, dim: d });
            }
        }
        if i == j {
            return Ok(1.0);
        }
        let (i, j) = (i.min(j), i.max(j));
        let span = j - i + 1;
        let a = 1.0 - self.l(span) - self.l(i + 1);
        let b = 1.0 - self.l(span) - self.l(d - j + 2);
        Ok(self.c(span) / libm::sqrt(a * b))
    }
}

/// Runs `c_k = r c_{k-1} / (1 - ℓ_{k-1})`, `ℓ_k = ℓ_{k-1} + c_{k-1}² / (1 - ℓ_{k-1})`
/// from `c_2 = r`, `ℓ_2 = 0` up to `k = max(d, 2)`.
pub fn chain_sums(spec: &ChainSpec) -> Result<ChainSolution> {
    let d = spec.d.max(2);
    let r = spec.r;
    let mut c = Vec::with_capacity(d - 1);
    let mut l = Vec::with_capacity(d - 1);
    c.push(r);
    l.push(0.0);
    for _ in 3..=d {
        let (cp, lp) = (c[c.len() - 1], l[l.len() - 1]);
        let den = 1.0 - lp;
        if !(den > 0.0) {
            return Err(Error::DegenerateDenominator(den));
        }
        c.push(r * cp / den);
        l.push(lp + cp * cp / den);
    }
    let rho = c.iter().zip(&l).map(|(c, l)| c / (1.0 - l)).collect();
    Ok(ChainSolution { d, c, l, rho })
}

/// `ρ_ij` on the chain (1-based indices).
pub fn chain_pair_corr(spec: &ChainSpec, i: usize, j: usize) -> Result<f64> {
    if spec.d < 2 {
        return if i == 1 && j == 1 {
            Ok(1.0)
        } else {
            Err(Error::IndexOutOfRange {
                index: i.max(j),
                dim: spec.d,
            })
        };
    }
    chain_sums(spec)?.pair_corr(i, j)
}

/// End-to-end correlation through `ρ_k = ρ_{k-1}² / (ρ_{k-2} (1 - ρ_{k-1}²))`,
/// `ρ_1 = 1`, `ρ_2 = r`.
pub fn endpoint_corr_recurrence(spec: &ChainSpec) -> Result<f64> {
    if spec.d < 2 {
        return Err(Error::ParamOutOfBound {
            name: "d",
            value: spec.d as f64,
            bound: 2.0,
        });
    }
    if spec.r == 0.0 {
        return Ok(0.0);
    }
    let (mut prev, mut cur) = (1.0, spec.r);
    for _ in 3..=spec.d {
        let next = cur * cur / (prev * (1.0 - cur * cur));
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// `ξ = 1 / ln((1 + sqrt(1 - 4r²)) / (2|r|))`; `+∞` at `|r| = 1/2`.
pub fn correlation_length(r: f64) -> Result<f64> {
    check_r(r)?;
    if r == 0.0 {
        return Err(Error::UndefinedAtZero);
    }
    if r.abs() == 0.5 {
        return Ok(f64::INFINITY);
    }
    let disc = libm::sqrt(1.0 - 4.0 * r * r);
    Ok(1.0 / libm::log((1.0 + disc) / (2.0 * r.abs())))
}

/// `ℓ_∞ = (1 - sqrt(1 - 4r²)) / 2`, the loop sum at the end of an infinite chain.
pub fn l_infinity(r: f64) -> Result<f64> {
    check_r(r)?;
    Ok(0.5 * (1.0 - libm::sqrt((1.0 - 4.0 * r * r).max(0.0))))
}

/// Partial sum `Σ_{n=1}^{terms} C_{n-1} r^{2n}` of the Catalan series for `ℓ_∞`.
pub fn l_infinity_series(r: f64, terms: usize) -> f64 {
    let x = r * r;
    let mut catalan = 1.0;
    let mut power = x;
    let mut sum = 0.0;
    for n in 1..=terms {
        sum += catalan * power;
        // C_n = C_{n-1} · 2(2n - 1) / (n + 1)
        catalan *= 2.0 * (2 * n - 1) as f64 / (n + 1) as f64;
        power *= x;
    }
    sum
}

/// `γ = (1 - ℓ_{k+2}) / (1 - ℓ_{k+2} - ℓ_{m+2})`: growth of `ρ_ij` between
/// nodes `k + 1` links apart when an `m`-node chain is appended on each side.
pub fn amplification_factor(k: usize, m: usize, r: f64) -> Result<f64> {
    check_r(r)?;
    let sol = chain_sums(&ChainSpec::new(k.max(m) + 2, r)?)?;
    let lk = sol.l(k + 2);
    Ok((1.0 - lk) / (1.0 - lk - sol.l(m + 2)))
}

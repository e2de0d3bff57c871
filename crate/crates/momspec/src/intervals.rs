//! Geometry of the exterior domain: ℝ minus `n` disjoint closed intervals
//! `[βₖ, αₖ]`, leaving a left half-line, `n−1` bounded components, and a
//! right half-line.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Ordered endpoint data for the exterior domain.
///
/// The removed intervals are `[betas[k], alphas[k]]`, interlaced as
/// `β₁ < α₁ < β₂ < ⋯ < βₙ < αₙ`. Components are indexed `0..=n`:
/// component 0 is `(−∞, β₁)`, component `k` (for `1 ≤ k ≤ n−1`) is
/// `(αₖ, β_{k+1})`, and component `n` is `(αₙ, ∞)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalConfig {
    betas: Vec<f64>,
    alphas: Vec<f64>,
}

/// Where a point sits relative to the domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    /// Open component with this index (0 = left half-line, n = right).
    Component(usize),
    /// Inside (or on the boundary of) the `index`-th removed interval
    /// `[β, α]`; carries the components adjacent on each side.
    Removed {
        index: usize,
        left_component: usize,
        right_component: usize,
    },
}

impl IntervalConfig {
    /// Validates strict interlacing; `betas` and `alphas` must have equal,
    /// positive length.
    pub fn new(betas: Vec<f64>, alphas: Vec<f64>) -> Result<Self> {
        if betas.is_empty() || betas.len() != alphas.len() {
            return Err(Error::InvalidInterlacing(format!(
                "need equal positive counts of endpoints, got {} betas and {} alphas",
                betas.len(),
                alphas.len()
            )));
        }
        for (k, (&b, &a)) in betas.iter().zip(alphas.iter()).enumerate() {
            if b >= a || !(b - a).is_finite() {
                return Err(Error::InvalidInterlacing(format!(
                    "beta[{k}] < alpha[{k}] fails: {b} >= {a}"
                )));
            }
            if k + 1 < betas.len() && a >= betas[k + 1] {
                return Err(Error::InvalidInterlacing(format!(
                    "alpha[{k}] < beta[{next}] fails: {a} >= {nb}",
                    next = k + 1,
                    nb = betas[k + 1]
                )));
            }
        }
        Ok(Self { betas, alphas })
    }

    /// Rebuild endpoints from the first left endpoint, the removed-interval
    /// widths `G`, and the bounded-component lengths `L`. Exact inverse of
    /// [`lengths`](Self::lengths)/[`gaps`](Self::gaps).
    pub fn from_first_beta(beta1: f64, gaps: &[f64], lengths: &[f64]) -> Result<Self> {
        if gaps.is_empty() || lengths.len() + 1 != gaps.len() {
            return Err(Error::InvalidInterlacing(format!(
                "need len(L) = len(G) − 1, got {} lengths and {} gaps",
                lengths.len(),
                gaps.len()
            )));
        }
        let mut betas = vec![beta1];
        let mut alphas = vec![beta1 + gaps[0]];
        for (k, &l) in lengths.iter().enumerate() {
            let b = alphas[k] + l;
            betas.push(b);
            alphas.push(b + gaps[k + 1]);
        }
        Self::new(betas, alphas)
    }

    /// Number of removed intervals.
    pub fn n(&self) -> usize {
        self.betas.len()
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    /// Bounded-component lengths `L_k = β_{k+1} − α_k`, `k = 1..n−1`.
    pub fn lengths(&self) -> Vec<f64> {
        (0..self.n() - 1).map(|k| self.betas[k + 1] - self.alphas[k]).collect()
    }

    /// Removed-interval widths `G_i = α_i − β_i`, `i = 1..n`.
    pub fn gaps(&self) -> Vec<f64> {
        self.betas.iter().zip(self.alphas.iter()).map(|(b, a)| a - b).collect()
    }

    pub fn total_length(&self) -> f64 {
        self.lengths().iter().sum()
    }

    pub fn total_gap(&self) -> f64 {
        self.gaps().iter().sum()
    }

    /// Endpoints of component `k` as `(lo, hi)`; half-lines use ±∞.
    pub fn component_bounds(&self, k: usize) -> (f64, f64) {
        let n = self.n();
        if k == 0 {
            (f64::NEG_INFINITY, self.betas[0])
        } else if k == n {
            (self.alphas[n - 1], f64::INFINITY)
        } else {
            (self.alphas[k - 1], self.betas[k])
        }
    }

    /// Total function: component index for interior points, the removed
    /// interval (with its two neighbours) otherwise. Components are open;
    /// both endpoints of a removed interval answer `Removed`, since
    /// eigenfunction traces there are one-sided limits.
    pub fn classify(&self, x: f64) -> Region {
        let n = self.n();
        if x < self.betas[0] {
            return Region::Component(0);
        }
        for k in 0..n {
            if x >= self.betas[k] && x <= self.alphas[k] {
                return Region::Removed {
                    index: k,
                    left_component: k,
                    right_component: k + 1,
                };
            }
            let next_beta = if k + 1 < n { self.betas[k + 1] } else { f64::INFINITY };
            if x > self.alphas[k] && x < next_beta {
                return Region::Component(k + 1);
            }
        }
        Region::Component(n)
    }

    /// Translate the whole configuration by `s`.
    pub fn shifted(&self, s: f64) -> Self {
        Self {
            betas: self.betas.iter().map(|b| b + s).collect(),
            alphas: self.alphas.iter().map(|a| a + s).collect(),
        }
    }

    /// Largest |β_j − α_i| over all pairs; bounds the Lipschitz constant of
    /// the twisted boundary matrix in the spectral parameter.
    pub fn max_span(&self) -> f64 {
        let lo = self.betas[0].min(self.alphas[0]);
        let hi = self.alphas[self.n() - 1].max(self.betas[self.n() - 1]);
        hi - lo
    }
}

//! Shannon-weighted inner product between boundary conditions.
//!
//! Restricting the spectral transforms of two boundary conditions to the
//! union of the bounded components and pairing them gives
//!
//! ```text
//!     ⟨B, C⟩ = Σ_{j=1}^{n−1} ∫ A_j^{(B)}(λ)·conj(A_j^{(C)}(λ))·|Sh_j(λ)|² dλ,
//! ```
//!
//! with `Sh_j` the Fourier transform of the indicator of component `J_j`.
//! The conjugation sits on the second argument; that is the orientation the
//! two-interval closed forms (`⟨B,B⟩ = L₁`, `⟨B,C⟩ = a·c̄·L₁/(1 − b·d̄)`) are
//! derived from, and the one implemented here.

use crate::boundary::BoundaryMatrix;
use crate::eigensolver::coefficients_normalized;
use crate::error::{Error, Result};
use crate::intervals::IntervalConfig;
use crate::util::{e, TAU};
use crate::C64;

/// `Sh_j(λ) = ∫_{J_j} e(λx) dx`, the Shannon kernel of bounded component
/// `j` (1-based): modulus `|sin(πλL_j)/(πλ)|`, value `L_j` at λ = 0.
pub fn shannon(cfg: &IntervalConfig, j: usize, lam: f64) -> C64 {
    let (lo, hi) = cfg.component_bounds(j);
    let l = hi - lo;
    let center = 0.5 * (lo + hi);
    let sinc = if lam.abs() < 1e-300 {
        l
    } else {
        (core::f64::consts::PI * lam * l).sin() / (core::f64::consts::PI * lam)
    };
    e(lam * center) * sinc
}

/// Poisson kernel `P_b(ξ) = (1−|b|²) / (1 − 2|b|cos(2πξ) + |b|²)`;
/// positive, period 1, unit mean. Rejects `|b| ≥ 1`.
pub fn poisson_kernel(b: C64, xi: f64) -> Result<f64> {
    let r = b.norm();
    if r >= 1.0 {
        return Err(Error::PoissonModulus(r));
    }
    Ok((1.0 - r * r) / (1.0 - 2.0 * r * (TAU * xi).cos() + r * r))
}

/// Truncated periodization `Σ_{|m| ≤ N} |Sh_j(λ + m/L_j)|²` together with
/// an analytic tail bound; the full sum is identically `L_j²`.
pub fn per_shannon(cfg: &IntervalConfig, j: usize, lam: f64, truncation: usize) -> (f64, f64) {
    let lengths = cfg.lengths();
    let l = lengths[j - 1];
    let step = 1.0 / l;
    let mut sum = 0.0;
    for m in -(truncation as i64)..=truncation as i64 {
        let x = lam + m as f64 * step;
        sum += shannon(cfg, j, x).norm_sqr();
    }
    // |Sh(x)|² ≤ 1/(πx)²; bound the two tails by integrals of 1/(πx)².
    let offset = (truncation as f64 - l * lam.abs() - 1.0).max(0.5);
    let tail = 2.0 * l * l / (core::f64::consts::PI * core::f64::consts::PI * offset);
    (sum, tail)
}

/// Result of the quadrature inner product: value plus an explicit error
/// bound (truncation tail + Richardson change).
#[derive(Debug, Clone, Copy)]
pub struct InnerProduct {
    pub value: C64,
    pub error_bound: f64,
}

/// `⟨B, C⟩` by trapezoid quadrature over `|λ| ≤ Λ_max` with the `1/λ²`
/// tail of `|Sh_j|²` folded into the reported bound; Λ_max defaults to
/// `200/min_j L_j` and a Richardson check doubles it and requires the
/// change to stay within the bound.
pub fn inner_product(
    cfg: &IntervalConfig,
    b: &BoundaryMatrix,
    c: &BoundaryMatrix,
    lambda_max: Option<f64>,
) -> Result<InnerProduct> {
    let lengths = cfg.lengths();
    if lengths.is_empty() {
        return Ok(InnerProduct { value: C64::new(0.0, 0.0), error_bound: 0.0 });
    }
    let lmin = lengths.iter().cloned().fold(f64::INFINITY, f64::min);
    let lam_max = lambda_max.unwrap_or(200.0 / lmin);
    let coarse = quadrature_pass(cfg, b, c, lam_max)?;
    let fine = quadrature_pass(cfg, b, c, 2.0 * lam_max)?;
    let tail_bound = tail_estimate(cfg, b, c, lam_max)?;
    let change = (fine - coarse).norm();
    if change > tail_bound.max(1e-9) * 4.0 {
        return Err(Error::QuadratureBudget(change));
    }
    Ok(InnerProduct { value: fine, error_bound: tail_bound + change })
}

fn quadrature_pass(
    cfg: &IntervalConfig,
    b: &BoundaryMatrix,
    c: &BoundaryMatrix,
    lam_max: f64,
) -> Result<C64> {
    let lengths = cfg.lengths();
    // Resolve both the Shannon oscillation (~L_tot) and the coefficient
    // oscillation; 32 samples per unit of the fastest period.
    let density = 32.0 * (cfg.total_length() + 1.0);
    let m = ((2.0 * lam_max) * density).ceil() as usize;
    let h = 2.0 * lam_max / m as f64;
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..=m {
        let lam = -lam_max + i as f64 * h;
        let weight = if i == 0 || i == m { 0.5 } else { 1.0 };
        let ab = coefficients_normalized(cfg, b, C64::new(lam, 0.0))?;
        let ac = coefficients_normalized(cfg, c, C64::new(lam, 0.0))?;
        let mut term = C64::new(0.0, 0.0);
        for j in 1..=lengths.len() {
            let sh2 = shannon(cfg, j, lam).norm_sqr();
            term += ab[j] * ac[j].conj() * sh2;
        }
        acc += term * weight;
    }
    Ok(acc * h)
}

fn tail_estimate(
    cfg: &IntervalConfig,
    b: &BoundaryMatrix,
    c: &BoundaryMatrix,
    lam_max: f64,
) -> Result<f64> {
    // sup |A_j^(B) A_j^(C)| over a coarse grid times ∫_{|λ|>Λ} dλ/(πλ)².
    let lengths = cfg.lengths();
    let mut sup = 0.0f64;
    for i in 0..64 {
        let lam = -lam_max + 2.0 * lam_max * (i as f64 + 0.5) / 64.0;
        let ab = coefficients_normalized(cfg, b, C64::new(lam, 0.0))?;
        let ac = coefficients_normalized(cfg, c, C64::new(lam, 0.0))?;
        for j in 1..=lengths.len() {
            sup = sup.max((ab[j] * ac[j].conj()).norm());
        }
    }
    let pi = core::f64::consts::PI;
    Ok((lengths.len() as f64) * sup * 2.0 / (pi * pi * lam_max) * 1.5)
}

/// Two-interval closed form `⟨B, C⟩ = a·c̄·L₁ / (1 − b·d̄)` for the special
/// unitary pair `B = [[a,b],[−b̄,ā]]`, `C = [[c,d],[−d̄,c̄]]`.
pub fn inner_product_closed_form_n2(l1: f64, a: C64, b: C64, c: C64, d: C64) -> C64 {
    a * c.conj() * C64::from(l1) / (C64::new(1.0, 0.0) - b * d.conj())
}

/// Exact fast path for n = 2: reduce to one period with the periodization
/// identity, `⟨B,C⟩ = a·c̄·L₁²·∫₀^{1/L₁} dλ / ((1−b·e(λL₁))(1−d̄·e(−λL₁)))`,
/// midpoint rule over the single period (geometric convergence for
/// |b|, |d| < 1).
pub fn inner_product_periodized_n2(
    cfg: &IntervalConfig,
    bm: &BoundaryMatrix,
    cm: &BoundaryMatrix,
) -> Result<C64> {
    if cfg.n() != 2 || bm.dim() != 2 || cm.dim() != 2 {
        return Err(Error::NotApplicable);
    }
    let (a, b) = (bm.entry(0, 0), bm.entry(0, 1));
    let (c, d) = (cm.entry(0, 0), cm.entry(0, 1));
    if b.norm() >= 1.0 - 1e-12 || d.norm() >= 1.0 - 1e-12 {
        return Err(Error::PoissonModulus(b.norm().max(d.norm())));
    }
    let l1 = cfg.lengths()[0];
    let m = 4096;
    let h = 1.0 / (l1 * m as f64);
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..m {
        let lam = (i as f64 + 0.5) * h;
        let denom = (C64::new(1.0, 0.0) - b * e(lam * l1))
            * (C64::new(1.0, 0.0) - d.conj() * e(-lam * l1));
        acc += C64::new(1.0, 0.0) / denom;
    }
    Ok(a * c.conj() * C64::from(l1 * l1) * acc * C64::from(h))
}

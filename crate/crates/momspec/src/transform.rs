//! Spectral transform, time evolution, and the operators built from them.
//!
//! States live on a uniform spatial grid over a truncation box containing
//! every finite endpoint; samples inside the removed intervals are
//! structurally zero. The transform pairs the state against the
//! generalized eigenfunctions, which in the frequency domain reads
//!
//! ```text
//!     (Vf)(λ) = Σ_j conj(A_j(λ)) · (P_j f)^(λ),
//!     (V*g)   = Σ_j P_j · (A_j(λ)·g(λ))^∨,
//! ```
//!
//! with `P_j` the component restrictions and `A_0 ≡ 1`. Time evolution is
//! the multiplier `e(−λt)` conjugated by the transform; all translations
//! are realized as Fourier phases, so non-grid shifts are exact on the
//! periodic box. For operator-splitting boundary conditions (`u = w = 0`)
//! the scattering transform carries no amplitude on the bounded
//! components, and the trapped sector is evolved separately through its
//! eigenfunction expansion over the embedded point spectrum.

use crate::boundary::BoundaryMatrix;
use crate::eigensolver::{coefficients_normalized, solve_coefficients, Normalization};
use crate::error::{Error, Result};
use crate::intervals::{IntervalConfig, Region};
use crate::pointspec::find_point_spectrum;
use crate::util::TAU;
use crate::C64;
use rustfft::FftPlanner;
use std::sync::Arc;

/// Uniform grid on `[x_min, x_min + len·dx)`, sampled at cell midpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialGrid {
    pub x_min: f64,
    pub dx: f64,
    pub len: usize,
}

impl SpatialGrid {
    /// Box grid with an even number of cells covering `[x_min, x_max]`.
    pub fn new(x_min: f64, x_max: f64, dx_target: f64) -> Result<Self> {
        if x_min >= x_max || dx_target <= 0.0 || !(x_max - x_min).is_finite() || dx_target.is_nan() {
            return Err(Error::Dimension("bad grid box".into()));
        }
        let mut len = ((x_max - x_min) / dx_target).ceil() as usize;
        if len % 2 == 1 {
            len += 1;
        }
        let dx = (x_max - x_min) / len as f64;
        Ok(Self { x_min, dx, len })
    }

    /// Default sampling for a configuration: every length and gap spans at
    /// least `samples_per_feature` cells, box margins cover the horizon
    /// plus padding on both sides.
    pub fn auto(
        cfg: &IntervalConfig,
        horizon: f64,
        pad: f64,
        samples_per_feature: usize,
    ) -> Result<Self> {
        let mut feature = f64::INFINITY;
        for l in cfg.lengths() {
            feature = feature.min(l);
        }
        for g in cfg.gaps() {
            feature = feature.min(g);
        }
        let dx = feature / samples_per_feature as f64;
        let x_min = cfg.betas()[0] - horizon - pad;
        let x_max = cfg.alphas()[cfg.n() - 1] + horizon + pad;
        Self::new(x_min, x_max, dx)
    }

    /// Same box, cells halved.
    pub fn refined(&self) -> Self {
        Self { x_min: self.x_min, dx: self.dx * 0.5, len: self.len * 2 }
    }

    pub fn x(&self, m: usize) -> f64 {
        self.x_min + (m as f64 + 0.5) * self.dx
    }

    /// Dual frequency at monotone index `i` (0 ↦ −Nyquist).
    pub fn lambda(&self, i: usize) -> f64 {
        (i as i64 - (self.len / 2) as i64) as f64 / (self.len as f64 * self.dx)
    }

    pub fn dual_step(&self) -> f64 {
        1.0 / (self.len as f64 * self.dx)
    }

    pub fn nyquist(&self) -> f64 {
        0.5 / self.dx
    }
}

/// A complex-valued state sampled on the grid; removed-interval samples
/// are exactly zero, and the box margins must cover the declared horizon.
#[derive(Debug, Clone)]
pub struct GridState {
    pub cfg: IntervalConfig,
    pub grid: SpatialGrid,
    pub values: Vec<C64>,
    pub horizon: f64,
}

impl GridState {
    pub fn from_fn(
        cfg: &IntervalConfig,
        grid: &SpatialGrid,
        horizon: f64,
        f: impl Fn(f64) -> C64,
    ) -> Result<Self> {
        let n = cfg.n();
        if grid.x_min > cfg.betas()[0] - horizon
            || grid.x(grid.len - 1) < cfg.alphas()[n - 1] + horizon
        {
            return Err(Error::Dimension(format!(
                "grid box [{}, {}] lacks horizon {} margins around the endpoints",
                grid.x_min,
                grid.x(grid.len - 1),
                horizon
            )));
        }
        let values = (0..grid.len)
            .map(|m| {
                let x = grid.x(m);
                match cfg.classify(x) {
                    Region::Component(_) => f(x),
                    Region::Removed { .. } => C64::new(0.0, 0.0),
                }
            })
            .collect();
        Ok(Self { cfg: cfg.clone(), grid: grid.clone(), values, horizon })
    }

    /// Normalized Gaussian bump `exp(−(x−x₀)²/4σ²)·e(λ₀x)` confined to one
    /// component (zero outside it).
    pub fn gaussian(
        cfg: &IntervalConfig,
        grid: &SpatialGrid,
        horizon: f64,
        component: usize,
        center: f64,
        width: f64,
        momentum: f64,
    ) -> Result<Self> {
        let mut state = Self::from_fn(cfg, grid, horizon, |x| {
            let arg = -((x - center) * (x - center)) / (4.0 * width * width);
            C64::new(0.0, TAU * momentum * x).exp() * arg.exp()
        })?;
        let comp = component_of(cfg, grid);
        for (m, v) in state.values.iter_mut().enumerate() {
            if comp[m] != Some(component) {
                *v = C64::new(0.0, 0.0);
            }
        }
        let norm = state.l2_norm();
        if norm > 0.0 {
            for v in &mut state.values {
                *v /= C64::from(norm);
            }
        }
        Ok(state)
    }

    pub fn l2_norm(&self) -> f64 {
        (self.grid.dx * self.values.iter().map(|v| v.norm_sqr()).sum::<f64>()).sqrt()
    }

    /// `L²` mass per component, indices `0..=n`.
    pub fn component_masses(&self) -> Vec<f64> {
        let comp = component_of(&self.cfg, &self.grid);
        let mut masses = vec![0.0; self.cfg.n() + 1];
        for (m, v) in self.values.iter().enumerate() {
            if let Some(k) = comp[m] {
                masses[k] += self.grid.dx * v.norm_sqr();
            }
        }
        masses
    }

    pub fn distance(&self, other: &GridState) -> f64 {
        (self.grid.dx
            * self
                .values
                .iter()
                .zip(other.values.iter())
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>())
        .sqrt()
    }
}

/// Sampled spectral function on the dual grid, monotone in λ.
#[derive(Debug, Clone)]
pub struct SpectralFunction {
    pub grid: SpatialGrid,
    pub values: Vec<C64>,
}

impl SpectralFunction {
    pub fn l2_norm(&self) -> f64 {
        (self.grid.dual_step() * self.values.iter().map(|v| v.norm_sqr()).sum::<f64>()).sqrt()
    }

    pub fn distance(&self, other: &SpectralFunction) -> f64 {
        (self.grid.dual_step()
            * self
                .values
                .iter()
                .zip(other.values.iter())
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>())
        .sqrt()
    }
}

fn component_of(cfg: &IntervalConfig, grid: &SpatialGrid) -> Vec<Option<usize>> {
    (0..grid.len)
        .map(|m| match cfg.classify(grid.x(m)) {
            Region::Component(k) => Some(k),
            Region::Removed { .. } => None,
        })
        .collect()
}

/// One interior boundstate: eigenvalue plus its grid samples.
struct Boundstate {
    lambda: f64,
    vector: Vec<C64>,
}

/// Precomputed machinery for one `(cfg, B, grid)` triple: per-component
/// scattering coefficients on the dual grid, FFT plans, and (for splitting
/// boundary conditions) the trapped-sector eigenbasis.
pub struct TransformPlan {
    pub cfg: IntervalConfig,
    pub grid: SpatialGrid,
    /// `coeff[j][i] = A_j(λ_i)`, components `j = 0..=n`.
    coeff: Vec<Vec<C64>>,
    component: Vec<Option<usize>>,
    fft_fwd: Arc<dyn rustfft::Fft<f64>>,
    fft_inv: Arc<dyn rustfft::Fft<f64>>,
    boundstates: Vec<Boundstate>,
    pub warnings: Vec<String>,
}

impl TransformPlan {
    pub fn new(cfg: &IntervalConfig, b: &BoundaryMatrix, grid: &SpatialGrid) -> Result<Self> {
        let n = cfg.n();
        let len = grid.len;
        let mut warnings = Vec::new();
        let mut coeff = vec![vec![C64::new(0.0, 0.0); len]; n + 1];
        #[allow(clippy::needless_range_loop)]
        for i in 0..len {
            let lam = grid.lambda(i);
            let a = match coefficients_normalized(cfg, b, C64::new(lam, 0.0)) {
                Ok(a) => a,
                Err(_) => {
                    // Dual grid point resonates with the point spectrum;
                    // nudge off it and record the fact.
                    warnings.push(format!("grid resonance at λ = {lam}"));
                    coefficients_normalized(cfg, b, C64::new(lam + 1e-7, 0.0))?
                }
            };
            for j in 0..=n {
                coeff[j][i] = a[j];
            }
        }
        let mut planner = FftPlanner::new();
        let fft_fwd = planner.plan_fft_forward(len);
        let fft_inv = planner.plan_fft_inverse(len);

        let boundstates = if b.operator_split_form() && n >= 2 {
            build_boundstates(cfg, b, grid, &mut warnings)?
        } else {
            if b.is_degenerate() && !b.operator_split_form() {
                warnings.push(
                    "degenerate but non-splitting boundary condition: trapped states are not \
                     represented by the continuum transform"
                        .into(),
                );
            }
            Vec::new()
        };

        Ok(Self {
            cfg: cfg.clone(),
            grid: grid.clone(),
            coeff,
            component: component_of(cfg, grid),
            fft_fwd,
            fft_inv,
            boundstates,
            warnings,
        })
    }

    fn dft_forward(&self, masked: &[C64]) -> Vec<C64> {
        // f̂(λ_k) = dx · e(−λ_k x₀) · Σ_m f_m e^{−2πi k m / N}, monotone in k.
        let nlen = self.grid.len;
        let mut buf = masked.to_vec();
        self.fft_fwd.process(&mut buf);
        let x0 = self.grid.x(0);
        let dx = self.grid.dx;
        (0..nlen)
            .map(|i| {
                let k = i as i64 - (nlen / 2) as i64;
                let idx = k.rem_euclid(nlen as i64) as usize;
                let lam = self.grid.lambda(i);
                buf[idx] * C64::from(dx) * C64::new(0.0, -TAU * lam * x0).exp()
            })
            .collect()
    }

    fn dft_inverse(&self, spectral: &[C64]) -> Vec<C64> {
        let nlen = self.grid.len;
        let x0 = self.grid.x(0);
        let mut buf = vec![C64::new(0.0, 0.0); nlen];
        for (i, s) in spectral.iter().enumerate() {
            let k = i as i64 - (nlen / 2) as i64;
            let idx = k.rem_euclid(nlen as i64) as usize;
            let lam = self.grid.lambda(i);
            buf[idx] = s * C64::new(0.0, TAU * lam * x0).exp();
        }
        self.fft_inv.process(&mut buf);
        let dlam = self.grid.dual_step();
        buf.into_iter().map(|v| v * C64::from(dlam)).collect()
    }

    fn masked(&self, f: &GridState, j: usize) -> Vec<C64> {
        f.values
            .iter()
            .enumerate()
            .map(|(m, v)| if self.component[m] == Some(j) { *v } else { C64::new(0.0, 0.0) })
            .collect()
    }

    /// `(Vf)(λ) = Σ_j conj(A_j(λ))·(P_j f)^(λ)`.
    pub fn forward(&self, f: &GridState) -> SpectralFunction {
        let n = self.cfg.n();
        let mut acc = vec![C64::new(0.0, 0.0); self.grid.len];
        for j in 0..=n {
            let hat = self.dft_forward(&self.masked(f, j));
            for (i, h) in hat.iter().enumerate() {
                acc[i] += self.coeff[j][i].conj() * h;
            }
        }
        SpectralFunction { grid: self.grid.clone(), values: acc }
    }

    /// `V*g = Σ_j P_j (A_j·g)^∨`.
    pub fn inverse(&self, g: &SpectralFunction) -> GridState {
        let n = self.cfg.n();
        let mut values = vec![C64::new(0.0, 0.0); self.grid.len];
        for j in 0..=n {
            let weighted: Vec<C64> =
                g.values.iter().enumerate().map(|(i, v)| self.coeff[j][i] * v).collect();
            let pos = self.dft_inverse(&weighted);
            for (m, v) in pos.iter().enumerate() {
                if self.component[m] == Some(j) {
                    values[m] += v;
                }
            }
        }
        GridState { cfg: self.cfg.clone(), grid: self.grid.clone(), values, horizon: 0.0 }
    }

    /// `U(t)f = f + V*·(e(−λt) − 1)·Vf`, plus the trapped sector when
    /// present. Writing the multiplier composition in corrected form keeps
    /// `t = 0` the exact identity; the `V*V ≈ I` truncation defect stays
    /// frozen in place instead of being re-filtered on every call.
    pub fn evolve(&self, f: &GridState, t: f64) -> Result<GridState> {
        if t.abs() > f.horizon + 1e-12 {
            return Err(Error::HorizonExceeded { t, horizon: f.horizon });
        }
        let mut g = self.forward(f);
        for (i, v) in g.values.iter_mut().enumerate() {
            let lam = self.grid.lambda(i);
            *v *= C64::new(0.0, -TAU * lam * t).exp() - C64::new(1.0, 0.0);
        }
        let mut out = self.inverse(&g);
        for (v, f0) in out.values.iter_mut().zip(f.values.iter()) {
            *v += f0;
        }
        out.horizon = f.horizon;
        if !self.boundstates.is_empty() {
            let dx = self.grid.dx;
            for bs in &self.boundstates {
                let c: C64 = bs
                    .vector
                    .iter()
                    .zip(f.values.iter())
                    .map(|(phi, v)| phi.conj() * v)
                    .sum::<C64>()
                    * C64::from(dx);
                let phase = C64::new(0.0, -TAU * bs.lambda * t).exp() - C64::new(1.0, 0.0);
                for (m, phi) in bs.vector.iter().enumerate() {
                    out.values[m] += c * phase * phi;
                }
            }
        }
        Ok(out)
    }

    /// Spectral projection onto a finite union of half-open λ-bands
    /// `[lo, hi)`: `E(S)f = V*(χ_S·Vf)`. Half-open so bands that tile the
    /// axis count every dual frequency exactly once.
    pub fn spectral_projection(&self, f: &GridState, bands: &[(f64, f64)]) -> GridState {
        let mut g = self.forward(f);
        for (i, v) in g.values.iter_mut().enumerate() {
            let lam = self.grid.lambda(i);
            if !bands.iter().any(|&(lo, hi)| lam >= lo && lam < hi) {
                *v = C64::new(0.0, 0.0);
            }
        }
        let mut out = self.inverse(&g);
        out.horizon = f.horizon;
        out
    }

    /// Restriction to one of the three coarse regions.
    pub fn restrict(&self, f: &GridState, region: RegionSelector) -> GridState {
        let n = self.cfg.n();
        let keep = |k: usize| match region {
            RegionSelector::Left => k == 0,
            RegionSelector::Right => k == n,
            RegionSelector::Middle => k > 0 && k < n,
        };
        let values = f
            .values
            .iter()
            .enumerate()
            .map(|(m, v)| match self.component[m] {
                Some(k) if keep(k) => *v,
                _ => C64::new(0.0, 0.0),
            })
            .collect();
        GridState { cfg: f.cfg.clone(), grid: f.grid.clone(), values, horizon: f.horizon }
    }

    /// Compressed semigroup `Z(t) = P·U(t)·P` for one region, `t > 0`.
    pub fn semigroup_compress(
        &self,
        f: &GridState,
        t: f64,
        region: RegionSelector,
    ) -> Result<GridState> {
        if t <= 0.0 {
            return Ok(self.restrict(f, region));
        }
        let projected = self.restrict(f, region);
        let evolved = self.evolve(&projected, t)?;
        Ok(self.restrict(&evolved, region))
    }

    /// Number of trapped eigenstates represented on this grid.
    pub fn boundstate_count(&self) -> usize {
        self.boundstates.len()
    }

    /// Coefficient table entry `A_j(λ_i)`.
    pub fn coefficient(&self, j: usize, i: usize) -> C64 {
        self.coeff[j][i]
    }
}

/// Selector for the half-line / interior projections.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionSelector {
    Left,
    Middle,
    Right,
}

fn build_boundstates(
    cfg: &IntervalConfig,
    b: &BoundaryMatrix,
    grid: &SpatialGrid,
    warnings: &mut Vec<String>,
) -> Result<Vec<Boundstate>> {
    let band = grid.nyquist() * (1.0 - 4.0 / grid.len as f64);
    let spectrum = find_point_spectrum(cfg, b, (-band, band))?;
    let comp = component_of(cfg, grid);
    let mut states: Vec<Boundstate> = Vec::new();
    for &(lam, _) in &spectrum.points {
        let sols = solve_coefficients(cfg, b, C64::new(lam, 0.0), Normalization::KernelBasis)?;
        for sol in sols {
            // Trapped states carry no half-line amplitude; enforce it.
            let n = cfg.n();
            if sol.coefficients[0].norm() > 1e-8 || sol.coefficients[n].norm() > 1e-8 {
                warnings.push(format!("point {lam} has half-line amplitude; skipped"));
                continue;
            }
            let mut vector: Vec<C64> = (0..grid.len)
                .map(|m| match comp[m] {
                    Some(k) if k > 0 && k < n => {
                        sol.coefficients[k] * C64::new(0.0, TAU * lam * grid.x(m)).exp()
                    }
                    _ => C64::new(0.0, 0.0),
                })
                .collect();
            // Modified Gram-Schmidt against the states collected so far;
            // cross-λ vectors are near-orthogonal already, same-λ kernel
            // members need it.
            for prev in &states {
                let overlap: C64 = prev
                    .vector
                    .iter()
                    .zip(vector.iter())
                    .map(|(p, v)| p.conj() * v)
                    .sum::<C64>()
                    * C64::from(grid.dx);
                for (m, p) in prev.vector.iter().enumerate() {
                    vector[m] -= overlap * p;
                }
            }
            let norm = (grid.dx * vector.iter().map(|v| v.norm_sqr()).sum::<f64>()).sqrt();
            if norm < 1e-8 {
                continue;
            }
            for v in &mut vector {
                *v /= C64::from(norm);
            }
            states.push(Boundstate { lambda: lam, vector });
        }
    }
    Ok(states)
}

/// Convolution check of the component-restriction identity: for a bounded
/// component `i`,
///
/// ```text
///     (P_i f)^(λ) = ∫ χ̂_i(λ−ξ)·|A_i(ξ)|²·(P_i f)^(ξ) dξ,
/// ```
///
/// where `χ̂_i` is the Fourier transform of the component indicator.
/// Returns the sup-norm residual over (a thinning of) the dual grid.
pub fn shannon_identity_check(plan: &TransformPlan, f: &GridState, i: usize) -> Result<f64> {
    let n = plan.cfg.n();
    if i == 0 || i >= n {
        return Err(Error::Dimension(format!("component {i} is not bounded")));
    }
    let hat = plan.dft_forward(&plan.masked(f, i));
    let len = plan.grid.len;
    let dlam = plan.grid.dual_step();
    let mut residual = 0.0f64;
    let stride = (len / 512).max(1);
    for row in (0..len).step_by(stride) {
        let lam = plan.grid.lambda(row);
        let mut acc = C64::new(0.0, 0.0);
        for (col, h) in hat.iter().enumerate() {
            let xi = plan.grid.lambda(col);
            let kernel = crate::bform::shannon(&plan.cfg, i, lam - xi).conj();
            let a2 = plan.coeff[i][col].norm_sqr();
            acc += kernel * C64::from(a2) * h;
        }
        let rhs = acc * C64::from(dlam);
        residual = residual.max((hat[row] - rhs).norm());
    }
    Ok(residual)
}

/// The incoming-fixing intertwiner between two boundary conditions: the
/// per-component Fourier multiplier `A_j^{(B₂)}(λ)/A_j^{(B₁)}(λ)` (identity
/// on the left half-line, where both coefficients are 1).
pub fn intertwiner_apply(
    plan1: &TransformPlan,
    plan2: &TransformPlan,
    f: &GridState,
) -> Result<GridState> {
    let n = plan1.cfg.n();
    let len = plan1.grid.len;
    let mut values = vec![C64::new(0.0, 0.0); len];
    for j in 0..=n {
        let hat = plan1.dft_forward(&plan1.masked(f, j));
        let mut weighted = vec![C64::new(0.0, 0.0); len];
        for i in 0..len {
            let denom = plan1.coeff[j][i];
            if denom.norm() < 1e-10 {
                return Err(Error::PoleProximity(denom.norm()));
            }
            weighted[i] = plan2.coeff[j][i] / denom * hat[i];
        }
        let pos = plan1.dft_inverse(&weighted);
        for (m, v) in pos.iter().enumerate() {
            if plan1.component[m] == Some(j) {
                values[m] += v;
            }
        }
    }
    Ok(GridState { cfg: f.cfg.clone(), grid: f.grid.clone(), values, horizon: f.horizon })
}

/// Transport oracle for permutation boundary conditions: follow each mass
/// cell along the characteristics (speed 1, teleporting from the right end
/// of a component to the matched left end) and report component masses at
/// time `t`. Independent of the Fourier machinery.
pub fn characteristics_masses(
    cfg: &IntervalConfig,
    b: &BoundaryMatrix,
    f: &GridState,
    t: f64,
) -> Result<Vec<f64>> {
    let n = cfg.n();
    // σ: exit β-slot ↦ entry α-slot, read off the permutation matrix.
    let mut sigma = vec![usize::MAX; n];
    #[allow(clippy::needless_range_loop)]
    for j in 0..n {
        for i in 0..n {
            let v = b.entry(i, j);
            if (v.norm() - 1.0).abs() < 1e-12 {
                sigma[j] = i;
            } else if v.norm() > 1e-12 {
                return Err(Error::NotApplicable);
            }
        }
        if sigma[j] == usize::MAX {
            return Err(Error::NotApplicable);
        }
    }
    if t < 0.0 {
        return Err(Error::NotApplicable);
    }
    let betas = cfg.betas();
    let alphas = cfg.alphas();
    let mut masses = vec![0.0; n + 1];
    for m in 0..f.grid.len {
        let w = f.grid.dx * f.values[m].norm_sqr();
        if w == 0.0 {
            continue;
        }
        let mut x = f.grid.x(m);
        let mut comp = match cfg.classify(x) {
            Region::Component(k) => k,
            Region::Removed { .. } => continue,
        };
        let mut remaining = t;
        loop {
            if comp == n {
                break;
            }
            let end = betas[comp];
            if x + remaining < end {
                break;
            }
            remaining -= end - x;
            let entry = sigma[comp];
            comp = entry + 1;
            x = alphas[entry];
        }
        masses[comp] += w;
    }
    Ok(masses)
}

//! Embedded point spectrum: real zeros of the characteristic determinant
//! `D(λ) = det(I − B′_{α,β}(λ))`, their multiplicities and density, the
//! closed-form Dirac-comb templates, complex zero counting by the argument
//! principle, and the torus-motion reformulation for the glued three-interval
//! case.

use crate::boundary::BoundaryMatrix;
use crate::eigensolver::{
    solve_coefficients, spectral_det, spectral_det_derivative, Normalization, TwistedBoundary,
    POINT_DEGENERACY_TOL,
};
use crate::error::{Error, Result};
use crate::intervals::IntervalConfig;
use crate::util::{self, e, parallel_map};
use crate::C64;

/// An arithmetic progression `offset + step·ℤ` of eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Progression {
    pub offset: f64,
    pub step: f64,
}

impl Progression {
    /// Members inside `[lo, hi]`.
    pub fn members(&self, lo: f64, hi: f64) -> Vec<f64> {
        let mut out = Vec::new();
        let k0 = ((lo - self.offset) / self.step).floor() as i64;
        let k1 = ((hi - self.offset) / self.step).ceil() as i64;
        for k in k0..=k1 {
            let x = self.offset + self.step * k as f64;
            if x >= lo && x <= hi {
                out.push(x);
            }
        }
        out
    }

    pub fn contains(&self, x: f64, tol: f64) -> bool {
        let t = (x - self.offset) / self.step;
        (t - t.round()).abs() * self.step.abs() <= tol
    }
}

/// Point spectrum over a window: eigenvalues with multiplicities, plus
/// closed-form generators when the boundary condition matches a template.
#[derive(Debug, Clone)]
pub struct PointSpectrum {
    pub window: (f64, f64),
    /// Sorted `(λ, multiplicity)`.
    pub points: Vec<(f64, usize)>,
    pub progressions: Option<Vec<Progression>>,
    /// Pairs of refined roots that collided within 1e−10 (possible multiple
    /// roots; the reported multiplicity comes from the kernel dimension).
    pub collisions: Vec<f64>,
}

impl PointSpectrum {
    pub fn total_multiplicity(&self) -> usize {
        self.points.iter().map(|p| p.1).sum()
    }
}

/// Scan-and-refine root finder for `σ_min(λ) = σ_min(I − B′_{α,β}(λ))`.
///
/// The scan step `1/(16·max(L_tot,1))` oversamples the trigonometric
/// polynomial `D̃` (frequency content bounded by `L_tot`) by a factor ~16
/// over Nyquist. Local minima below an adaptive threshold are refined by
/// golden-section on σ_min, then polished by Newton on `D` with the
/// analytic derivative; Newton stalls fall back to the golden bracket.
pub fn find_point_spectrum(
    cfg: &IntervalConfig,
    b: &BoundaryMatrix,
    window: (f64, f64),
) -> Result<PointSpectrum> {
    let (lo, hi) = window;
    if lo >= hi || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::Dimension(format!("bad window [{lo}, {hi}]")));
    }
    if cfg.n() < 2 {
        return Ok(PointSpectrum {
            window,
            points: Vec::new(),
            progressions: None,
            collisions: Vec::new(),
        });
    }
    let l_tot = cfg.total_length();
    let step = 1.0 / (16.0 * l_tot.max(1.0));
    // σ_min is Lipschitz with constant ≤ 2π·span, so a root within half a
    // grid step of a sample keeps that sample below this threshold.
    let span = cfg.max_span();
    let candidate_threshold = (1e-4f64).max(util::TAU * span * step);

    let m = ((hi - lo) / step).ceil() as usize + 1;
    let sigma = parallel_map(m, |i| {
        let lam = lo + i as f64 * step;
        sigma_min_at(cfg, b, lam)
    });

    let mut candidates = Vec::new();
    for i in 0..m {
        let left = if i == 0 { f64::INFINITY } else { sigma[i - 1] };
        let right = if i + 1 == m { f64::INFINITY } else { sigma[i + 1] };
        if sigma[i] <= left && sigma[i] <= right && sigma[i] < candidate_threshold {
            candidates.push(lo + i as f64 * step);
        }
    }

    let mut roots: Vec<f64> = Vec::new();
    let mut collisions = Vec::new();
    for lam0 in candidates {
        let bracket = (lam0 - step, lam0 + step);
        if let Some(root) = refine_root(cfg, b, bracket) {
            if root < lo - 1e-12 || root > hi + 1e-12 {
                continue;
            }
            if let Some(&prev) = roots.last() {
                if (root - prev).abs() < 1e-10 {
                    collisions.push(root);
                    continue;
                }
            }
            roots.push(root);
        }
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots.dedup_by(|a, b| (*a - *b).abs() < 1e-10);

    let mut points = Vec::new();
    for root in roots {
        let tw = TwistedBoundary::new(cfg, b, C64::new(root, 0.0))?;
        let mm = tw.id_minus_interior();
        if util::sigma_min(&mm) > POINT_DEGENERACY_TOL {
            continue;
        }
        let mult = util::kernel_basis(&mm, POINT_DEGENERACY_TOL).len();
        points.push((root, mult.max(1)));
    }
    Ok(PointSpectrum { window, points, progressions: None, collisions })
}

fn sigma_min_at(cfg: &IntervalConfig, b: &BoundaryMatrix, lam: f64) -> f64 {
    TwistedBoundary::new(cfg, b, C64::new(lam, 0.0))
        .map(|tw| tw.sigma_min())
        .unwrap_or(f64::INFINITY)
}

/// Golden-section minimize σ_min on the bracket, then Newton-polish on the
/// analytic determinant; accept when σ_min ≤ the degeneracy tolerance.
fn refine_root(cfg: &IntervalConfig, b: &BoundaryMatrix, bracket: (f64, f64)) -> Option<f64> {
    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut bb) = bracket;
    let mut x1 = bb - inv_phi * (bb - a);
    let mut x2 = a + inv_phi * (bb - a);
    let mut f1 = sigma_min_at(cfg, b, x1);
    let mut f2 = sigma_min_at(cfg, b, x2);
    for _ in 0..90 {
        if bb - a < 1e-13 {
            break;
        }
        if f1 < f2 {
            bb = x2;
            x2 = x1;
            f2 = f1;
            x1 = bb - inv_phi * (bb - a);
            f1 = sigma_min_at(cfg, b, x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (bb - a);
            f2 = sigma_min_at(cfg, b, x2);
        }
    }
    let mut lam = 0.5 * (a + bb);

    // Newton on D(λ) along the real axis: λ ← λ − Re(D/D′). Quadratic for
    // simple roots; for multiple roots it still contracts, and the golden
    // result is already inside the basin.
    let width = bracket.1 - bracket.0;
    let mut best = lam;
    let mut best_sigma = sigma_min_at(cfg, b, lam);
    for _ in 0..40 {
        let z = C64::new(lam, 0.0);
        let d = spectral_det(cfg, b, z).ok()?;
        let dp = spectral_det_derivative(cfg, b, z).ok()?;
        if dp.norm() < 1e-14 {
            break;
        }
        let step = (d / dp).re;
        if !step.is_finite() || step.abs() > width {
            break;
        }
        lam -= step;
        let s = sigma_min_at(cfg, b, lam);
        if s < best_sigma {
            best_sigma = s;
            best = lam;
        }
        if step.abs() < 1e-15 {
            break;
        }
    }
    if best_sigma <= POINT_DEGENERACY_TOL {
        Some(best)
    } else {
        None
    }
}

/// Closed-form spectrum for boundary conditions with a diagonal corner.
///
/// When `B′ = diag(d₁, …, d_{n−1})` the twisted corner stays diagonal and
/// `D(λ) = Π_k (1 − d_k·e(λL_k))`, so the eigenvalues are the union of
/// the progressions `−θ_k/L_k + (1/L_k)ℤ` over the unit-modulus entries
/// `d_k = e(θ_k)` (entries with `|d_k| < 1` contribute no real zeros).
/// The multiplicity of λ is the number of progressions containing it.
/// Covers the `[[0, I], [c, 0]]` template, its phase variant, and the
/// partially trapping forms with some `|d_k| < 1`.
pub fn closed_form_spectrum(
    cfg: &IntervalConfig,
    b: &BoundaryMatrix,
    window: (f64, f64),
) -> Result<PointSpectrum> {
    let n = b.dim();
    if n < 2 || cfg.n() != n {
        return Err(Error::NotApplicable);
    }
    let corner = b.corner();
    let mut unit_phases = Vec::new();
    for i in 0..n - 1 {
        for j in 0..n - 1 {
            let entry = corner.interior[(i, j)];
            if i == j {
                if (entry.norm() - 1.0).abs() <= 1e-12 {
                    unit_phases.push(Some(entry.arg() / util::TAU));
                } else if entry.norm() < 1.0 {
                    unit_phases.push(None);
                } else {
                    return Err(Error::NotApplicable);
                }
            } else if entry.norm() > 1e-12 {
                return Err(Error::NotApplicable);
            }
        }
    }
    let lengths = cfg.lengths();
    let progressions: Vec<Progression> = lengths
        .iter()
        .zip(unit_phases.iter())
        .filter_map(|(&l, th)| th.map(|th| Progression { offset: -th / l, step: 1.0 / l }))
        .collect();

    let (lo, hi) = window;
    let mut members: Vec<f64> = progressions.iter().flat_map(|p| p.members(lo, hi)).collect();
    members.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut points: Vec<(f64, usize)> = Vec::new();
    for x in members {
        match points.last_mut() {
            Some((y, m)) if (x - *y).abs() <= 1e-9 => *m += 1,
            _ => points.push((x, 1)),
        }
    }
    Ok(PointSpectrum { window, points, progressions: Some(progressions), collisions: Vec::new() })
}

/// Counting density over the centered window `[a−T, a+T)`: multiplicities
/// summed, divided by `2T`. For the templates this converges to `Σ L_k`.
pub fn density(spectrum: &PointSpectrum, center: f64, half_width: f64) -> Result<f64> {
    let (lo, hi) = (center - half_width, center + half_width);
    if lo < spectrum.window.0 - 1e-9 || hi > spectrum.window.1 + 1e-9 {
        return Err(Error::WindowExceeded {
            lo,
            hi,
            have_lo: spectrum.window.0,
            have_hi: spectrum.window.1,
        });
    }
    let count: usize = spectrum
        .points
        .iter()
        .filter(|(x, _)| *x >= lo && *x < hi)
        .map(|(_, m)| m)
        .sum();
    Ok(count as f64 / (2.0 * half_width))
}

/// Axis-aligned rectangle in the complex plane.
#[derive(Debug, Clone, Copy)]
pub struct Rect {
    pub re: (f64, f64),
    pub im: (f64, f64),
}

impl Rect {
    fn corners(&self) -> [C64; 4] {
        [
            C64::new(self.re.0, self.im.0),
            C64::new(self.re.1, self.im.0),
            C64::new(self.re.1, self.im.1),
            C64::new(self.re.0, self.im.1),
        ]
    }
}

/// Count zeros of `D` inside a rectangle by the argument principle:
/// `(1/2πi)∮ D′/D dz` over the boundary, adaptive trapezoid per edge.
/// Errors when `|D|` dips below 1e−8 on the sampled boundary or the
/// winding refuses to come within 0.1 of an integer.
pub fn complex_zero_count(cfg: &IntervalConfig, b: &BoundaryMatrix, rect: Rect) -> Result<i64> {
    let winding = complex_zero_winding(cfg, b, rect)?;
    let rounded = winding.round();
    if (winding - rounded).abs() > 0.1 {
        return Err(Error::NonIntegerWinding(winding));
    }
    Ok(rounded as i64)
}

/// The raw (un-rounded) winding number of the contour integral.
pub fn complex_zero_winding(cfg: &IntervalConfig, b: &BoundaryMatrix, rect: Rect) -> Result<f64> {
    let corners = rect.corners();
    // Sampled precheck of |D| along the boundary.
    for k in 0..4 {
        let a = corners[k];
        let bz = corners[(k + 1) % 4];
        for i in 0..=256 {
            let z = a + (bz - a) * (i as f64 / 256.0);
            let d = spectral_det(cfg, b, z)?;
            if d.norm() < 1e-8 {
                return Err(Error::BoundaryZero(d.norm()));
            }
        }
    }
    let logderiv = |z: C64| -> Result<C64> {
        let d = spectral_det(cfg, b, z)?;
        if d.norm() < 1e-8 {
            return Err(Error::BoundaryZero(d.norm()));
        }
        Ok(spectral_det_derivative(cfg, b, z)? / d)
    };

    let mut total = C64::new(0.0, 0.0);
    for k in 0..4 {
        let a = corners[k];
        let bz = corners[(k + 1) % 4];
        total += adaptive_edge(&logderiv, a, bz, 0, 6)?;
    }
    Ok((total / C64::new(0.0, util::TAU)).re)
}

fn adaptive_edge<F>(f: &F, a: C64, b: C64, depth: usize, min_depth: usize) -> Result<C64>
where
    F: Fn(C64) -> Result<C64>,
{
    // Trapezoid vs two half-trapezoids; subdivide until they agree. The
    // mandatory depth guards against a coincidental match of the two rules
    // on a long oscillatory edge.
    let mid = (a + b) * 0.5;
    if depth < min_depth {
        return Ok(adaptive_edge(f, a, mid, depth + 1, min_depth)?
            + adaptive_edge(f, mid, b, depth + 1, min_depth)?);
    }
    let coarse = (f(a)? + f(b)?) * (b - a) * 0.5;
    let fine = (f(a)? + f(mid)?) * (mid - a) * 0.5 + (f(mid)? + f(b)?) * (b - mid) * 0.5;
    if (coarse - fine).norm() < 1e-10 || depth > 26 {
        if depth > 26 && (coarse - fine).norm() > 1e-6 {
            return Err(Error::NonIntegerWinding(f64::NAN));
        }
        return Ok(fine);
    }
    Ok(adaptive_edge(f, a, mid, depth + 1, min_depth)?
        + adaptive_edge(f, mid, b, depth + 1, min_depth)?)
}

/// Parameters of the glued three-interval template
/// `B = [[0, a, b], [0, −b̄, ā], [1, 0, 0]]` written as `a = w·e(φ₀)`.
#[derive(Debug, Clone, Copy)]
pub struct TorusMotion {
    pub modulus: f64,
    pub phase: f64,
    pub l1: f64,
    pub l2: f64,
}

impl TorusMotion {
    pub fn from_config(cfg: &IntervalConfig, a: C64) -> Result<Self> {
        let w = a.norm();
        if w <= 0.0 || w >= 1.0 || w.is_nan() {
            return Err(Error::NotApplicable);
        }
        let lengths = cfg.lengths();
        if lengths.len() != 2 {
            return Err(Error::NotApplicable);
        }
        Ok(Self { modulus: w, phase: a.arg() / util::TAU, l1: lengths[0], l2: lengths[1] })
    }

    /// The determinant as an exponential polynomial,
    /// `1 + e(λ(L₁+L₂)) − a·e(λL₁) − ā·e(λL₂)`.
    pub fn exponential_polynomial(&self, lam: f64) -> C64 {
        let a = C64::from(self.modulus) * e(self.phase);
        C64::new(1.0, 0.0) + e(lam * (self.l1 + self.l2))
            - a * e(lam * self.l1)
            - a.conj() * e(lam * self.l2)
    }

    /// Residual of the torus-motion equation
    /// `e(λL₂ − φ₀) = (1 − w·e(λL₁+φ₀)) / (w − e(λL₁+φ₀))`;
    /// vanishes exactly on the embedded point spectrum.
    pub fn residual(&self, lam: f64) -> Result<f64> {
        let p = e(lam * self.l1 + self.phase);
        let denom = C64::from(self.modulus) - p;
        if denom.norm() < 1e-8 {
            return Err(Error::MobiusPole(denom.norm()));
        }
        let rhs = (C64::new(1.0, 0.0) - C64::from(self.modulus) * p) / denom;
        let lhs = e(lam * self.l2 - self.phase);
        Ok((lhs - rhs).norm())
    }
}

/// Torus-motion residual for a case-2 boundary matrix; errors if `B` is
/// not of the glued template form.
pub fn torus_motion_residual(cfg: &IntervalConfig, b: &BoundaryMatrix, lam: f64) -> Result<f64> {
    if b.dim() != 3 || !b.operator_split_form() {
        return Err(Error::NotApplicable);
    }
    let a = b.entry(0, 1);
    TorusMotion::from_config(cfg, a)?.residual(lam)
}

/// For the case-2 template, report per-eigenvalue whether the boundstate
/// amplitudes satisfy `A₁ = A₂` up to the free global phase (the spectral
/// set indicator) along with `||A₁| − |A₂||` (always ~0).
pub fn spectral_set_indicator(
    cfg: &IntervalConfig,
    b: &BoundaryMatrix,
    spectrum: &PointSpectrum,
) -> Result<Vec<(f64, f64, bool)>> {
    let mut out = Vec::new();
    for &(lam, _) in &spectrum.points {
        let sols = solve_coefficients(cfg, b, C64::new(lam, 0.0), Normalization::KernelBasis)?;
        let Some(sol) = sols.first() else { continue };
        let a1 = sol.coefficients[1];
        let a2 = sol.coefficients[2];
        let mod_gap = (a1.norm() - a2.norm()).abs();
        let equal = if a1.norm() > 1e-12 {
            ((a2 / a1) - C64::new(1.0, 0.0)).norm() <= 1e-8
        } else {
            a2.norm() <= 1e-12
        };
        out.push((lam, mod_gap, equal));
    }
    Ok(out)
}

/// Re-verify a found spectrum through the eigensolver: each point must
/// activate a kernel branch whose solutions satisfy the boundary condition
/// to 1e−10.
pub fn verify_spectrum(
    cfg: &IntervalConfig,
    b: &BoundaryMatrix,
    spectrum: &PointSpectrum,
) -> Result<()> {
    for &(lam, mult) in &spectrum.points {
        let sols = solve_coefficients(cfg, b, C64::new(lam, 0.0), Normalization::KernelBasis)?;
        if sols.len() != mult {
            return Err(Error::Dimension(format!(
                "kernel family at λ={lam} has {} members, multiplicity says {mult}",
                sols.len()
            )));
        }
        for s in &sols {
            if s.boundary_residual > 1e-10 {
                return Err(Error::Dimension(format!(
                    "boundary residual {} at λ={lam}",
                    s.boundary_residual
                )));
            }
        }
    }
    Ok(())
}

/// Plain scan of `|D(λ)|` used as an independent oracle in tests: locates
/// minima below `accept` on a uniform grid of the given step and ternary-
/// searches `|D|` down to the stated resolution. No singular values, no
/// Newton; deliberately disjoint from the production path.
pub fn brute_force_scan(
    cfg: &IntervalConfig,
    b: &BoundaryMatrix,
    window: (f64, f64),
    step: f64,
    accept: f64,
) -> Result<Vec<f64>> {
    // Scan slightly past the window so roots sitting exactly on an
    // endpoint are interior minima of the scan.
    let lo = window.0 - 2.0 * step;
    let hi = window.1 + 2.0 * step;
    let m = ((hi - lo) / step).ceil() as usize + 1;
    let dvals = parallel_map(m, |i| {
        spectral_det(cfg, b, C64::new(lo + i as f64 * step, 0.0))
            .map(|d| d.norm())
            .unwrap_or(f64::INFINITY)
    });
    let mut roots: Vec<f64> = Vec::new();
    for i in 1..m - 1 {
        if dvals[i] <= dvals[i - 1] && dvals[i] <= dvals[i + 1] && dvals[i] < accept {
            let mut a = lo + (i - 1) as f64 * step;
            let mut c = lo + (i + 1) as f64 * step;
            let f = |x: f64| {
                spectral_det(cfg, b, C64::new(x, 0.0)).map(|d| d.norm()).unwrap_or(f64::INFINITY)
            };
            for _ in 0..200 {
                if c - a < 1e-13 {
                    break;
                }
                let m1 = a + (c - a) / 3.0;
                let m2 = c - (c - a) / 3.0;
                if f(m1) < f(m2) {
                    c = m2;
                } else {
                    a = m1;
                }
            }
            let root = 0.5 * (a + c);
            if f(root) < 1e-7 && root >= window.0 - 1e-9 && root <= window.1 + 1e-9 {
                match roots.last() {
                    Some(&prev) if (root - prev).abs() < 1e-9 => {}
                    _ => roots.push(root),
                }
            }
        }
    }
    Ok(roots)
}

/// Period of `D` in λ when every length is an integer multiple of a common
/// divisor `g`: the trigonometric polynomial then has period `1/g`.
pub fn commensurate_period(lengths: &[f64], tol: f64) -> Option<f64> {
    let lmin = lengths.iter().cloned().fold(f64::INFINITY, f64::min);
    for k in 1..=64u32 {
        let g = lmin / k as f64;
        if lengths.iter().all(|&l| {
            let r = l / g;
            (r - r.round()).abs() < tol
        }) {
            return Some(1.0 / g);
        }
    }
    None
}

/// σ_min of `I − B′_{α,β}(λ)`, exposed for diagnostics.
pub fn sigma_min_of(cfg: &IntervalConfig, b: &BoundaryMatrix, lam: f64) -> f64 {
    sigma_min_at(cfg, b, lam)
}

/// Closed-form complex pole progression for n = 2 (fixed branch of log):
/// `z ∈ (1/L)·((−1/2πi)·log b + ℤ)`.
pub fn two_interval_pole_progression(l: f64, b: C64) -> (C64, f64) {
    let log_b = C64::new(b.norm().ln(), b.arg());
    let base = log_b / C64::new(0.0, -util::TAU) / C64::from(l);
    (base, 1.0 / l)
}

/// All members of the n=2 pole progression strictly inside a rectangle.
pub fn poles_in_rect(l: f64, b: C64, rect: Rect) -> Vec<C64> {
    let (base, step) = two_interval_pole_progression(l, b);
    let mut out = Vec::new();
    let k0 = ((rect.re.0 - base.re) / step).floor() as i64 - 1;
    let k1 = ((rect.re.1 - base.re) / step).ceil() as i64 + 1;
    for k in k0..=k1 {
        let z = base + C64::from(step * k as f64);
        if z.re > rect.re.0 && z.re < rect.re.1 && z.im > rect.im.0 && z.im < rect.im.1 {
            out.push(z);
        }
    }
    out
}

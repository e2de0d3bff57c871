//! Scattering coefficients of generalized eigenfunctions.
//!
//! For a spectral parameter `z` (real on the spectrum, complex for the
//! meromorphic continuation) the boundary condition twists into
//! `B_{α,β}(z) = D_α*(z)·B·D_β(z)`, entrywise `b_ij·e(z(β_j − α_i))`.
//! The coefficient vector `(A_0, …, A_n)` of the plane-wave eigenfunction
//! solves
//!
//! ```text
//!     B_{α,β}(z)·(A_0, …, A_{n−1})ᵀ = (A_1, …, A_n)ᵀ,
//! ```
//!
//! which reduces to the corner system: with `A_0 = 1`,
//! `A_mid = (I − B′_{α,β})⁻¹ u(z)` and `A_n = c(z) + row·A_mid` away from
//! the zero set of `D(z) = det(I − B′_{α,β}(z))`; on the zero set the
//! kernel of `I − B′_{α,β}` supplies boundstate families.

use crate::boundary::BoundaryMatrix;
use crate::error::{Error, Result};
use crate::intervals::{IntervalConfig, Region};
use crate::util::{self, ez};
use crate::C64;
use nalgebra::{DMatrix, DVector};

/// σ_min(I − B′_{α,β}(z)) below this ⇒ the kernel branches apply.
pub const POINT_DEGENERACY_TOL: f64 = 1e-8;
/// Between the degeneracy threshold and this, the solver flags the point
/// as near-degenerate (warning, not an error).
pub const NEAR_DEGENERACY_TOL: f64 = 1e-6;
/// Condition-number ceiling for the non-degenerate solve.
pub const CONDITION_LIMIT: f64 = 1e12;

/// The twisted boundary matrix at a spectral point, with its corner pieces.
#[derive(Debug, Clone)]
pub struct TwistedBoundary {
    pub z: C64,
    /// Full n×n matrix `b_ij·e(z(β_j − α_i))`; unitary for real `z`.
    pub full: DMatrix<C64>,
    /// First column above the corner: `u(z)_i = b_{i,1}·e(z(β₁ − α_i))`.
    pub in_coupling: DVector<C64>,
    /// Upper-right corner `B′_{α,β}(z)`.
    pub interior: DMatrix<C64>,
    /// `c(z) = b_{n,1}·e(z(β₁ − αₙ))`.
    pub through: C64,
    /// Literal last-row entries `b_{n,j+1}·e(z(β_{j+1} − αₙ))`, kept
    /// unconjugated so they stay analytic in `z`; on the real axis this is
    /// the row `w(λ)*`.
    pub out_row: DVector<C64>,
}

impl TwistedBoundary {
    pub fn new(cfg: &IntervalConfig, b: &BoundaryMatrix, z: C64) -> Result<Self> {
        let n = cfg.n();
        if b.dim() != n {
            return Err(Error::Dimension(format!(
                "boundary matrix is {}×{} but the domain has {} removed intervals",
                b.dim(),
                b.dim(),
                n
            )));
        }
        let betas = cfg.betas();
        let alphas = cfg.alphas();
        let full = DMatrix::from_fn(n, n, |i, j| b.entry(i, j) * ez(z, betas[j] - alphas[i]));
        let in_coupling = DVector::from_iterator(n - 1, (0..n - 1).map(|i| full[(i, 0)]));
        let interior = DMatrix::from_fn(n - 1, n - 1, |i, j| full[(i, j + 1)]);
        let through = full[(n - 1, 0)];
        let out_row = DVector::from_iterator(n - 1, (0..n - 1).map(|j| full[(n - 1, j + 1)]));
        Ok(Self { z, full, in_coupling, interior, through, out_row })
    }

    /// `I − B′_{α,β}(z)`.
    pub fn id_minus_interior(&self) -> DMatrix<C64> {
        let k = self.interior.nrows();
        DMatrix::identity(k, k) - &self.interior
    }

    pub fn sigma_min(&self) -> f64 {
        if self.interior.nrows() == 0 {
            return 1.0;
        }
        util::sigma_min(&self.id_minus_interior())
    }
}

pub fn twisted(cfg: &IntervalConfig, b: &BoundaryMatrix, z: C64) -> Result<TwistedBoundary> {
    TwistedBoundary::new(cfg, b, z)
}

/// `D(z) = det(I_{n−1} − B′_{α,β}(z))`, the characteristic determinant
/// whose real zeros are the embedded point spectrum.
pub fn spectral_det(cfg: &IntervalConfig, b: &BoundaryMatrix, z: C64) -> Result<C64> {
    let tw = TwistedBoundary::new(cfg, b, z)?;
    Ok(tw.id_minus_interior().determinant())
}

/// Alternate route through the factorization
/// `det(I − D₁*·B′·D₂) = det(D₁*D₂)·det(D₁D₂* − B′)`:
///
/// ```text
///     D(z) = e(z·L_tot) · det[diag(e(−zL_j)) − B′],
/// ```
///
/// which makes visible that `D` depends on the component lengths only.
pub fn spectral_det_alt(cfg: &IntervalConfig, b: &BoundaryMatrix, z: C64) -> Result<C64> {
    let lengths = cfg.lengths();
    let corner = b.corner();
    let k = lengths.len();
    if corner.interior.nrows() != k {
        return Err(Error::Dimension("corner/lengths mismatch".into()));
    }
    let mut m = -corner.interior.clone();
    for (j, &l) in lengths.iter().enumerate() {
        m[(j, j)] += ez(z, -l);
    }
    Ok(ez(z, cfg.total_length()) * m.determinant())
}

/// `(1/2πi)·d/dz` of `D̃(z) = det[diag(e(zL_j)) − B′]`, expanded over
/// columns: `Σ_j L_j e(zL_j) D_j(z)` with `D_j` the principal minor
/// omitting row and column `j`.
pub fn spectral_det_alt_derivative(
    cfg: &IntervalConfig,
    b: &BoundaryMatrix,
    z: C64,
) -> Result<C64> {
    let lengths = cfg.lengths();
    let corner = b.corner();
    let mut m = -corner.interior.clone();
    for (j, &l) in lengths.iter().enumerate() {
        m[(j, j)] += ez(z, l);
    }
    let mut acc = C64::new(0.0, 0.0);
    for (j, &l) in lengths.iter().enumerate() {
        let minor = principal_minor_det(&m, j);
        acc += C64::from(l) * ez(z, l) * minor;
    }
    Ok(acc)
}

/// `dD/dz` for the normalization `D = det(I − B′_{α,β})`. Writing
/// `D(z) = e(zL_tot)·D̃(−z)` with `D̃` from [`spectral_det_alt_derivative`],
/// the product rule gives
/// `dD/dz = 2πi·e(zL_tot)·(L_tot·D̃(−z) − Σ_j L_j e(−zL_j) D_j(−z))`.
pub fn spectral_det_derivative(cfg: &IntervalConfig, b: &BoundaryMatrix, z: C64) -> Result<C64> {
    let l_tot = cfg.total_length();
    let dtilde_at = |w: C64| -> C64 {
        let lengths = cfg.lengths();
        let corner = b.corner();
        let mut m = -corner.interior.clone();
        for (j, &l) in lengths.iter().enumerate() {
            m[(j, j)] += ez(w, l);
        }
        m.determinant()
    };
    let sum = spectral_det_alt_derivative(cfg, b, -z)?;
    Ok(C64::new(0.0, util::TAU) * ez(z, l_tot) * (C64::from(l_tot) * dtilde_at(-z) - sum))
}

fn principal_minor_det(m: &DMatrix<C64>, omit: usize) -> C64 {
    let k = m.nrows();
    if k <= 1 {
        return C64::new(1.0, 0.0);
    }
    let idx: Vec<usize> = (0..k).filter(|&i| i != omit).collect();
    let sub = DMatrix::from_fn(k - 1, k - 1, |i, j| m[(idx[i], idx[j])]);
    sub.determinant()
}

/// Which branch of the boundary-value solve produced a solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `1 ∉ sp(B′_{α,β}(z))`: unique solution with `A_0 = 1`.
    NonDegenerate,
    /// Kernel-only family: `u(z)` outside the range of `I − B′`, so
    /// `A_0 = 0` and the solution is a pure boundstate direction.
    KernelOnly,
    /// `u(z)` in the range: affine family, particular solution with
    /// `A_0 = 1` plus the kernel directions.
    KernelAffine,
}

impl Branch {
    pub fn label(self) -> &'static str {
        match self {
            Branch::NonDegenerate => "nondegenerate",
            Branch::KernelOnly => "kernel-only",
            Branch::KernelAffine => "kernel-affine",
        }
    }
}

/// Coefficient vector of a generalized eigenfunction at one spectral point.
#[derive(Debug, Clone)]
pub struct ScatteringSolution {
    pub z: C64,
    /// `(A_0, …, A_n)`.
    pub coefficients: Vec<C64>,
    pub branch: Branch,
    /// Numerical kernel dimension of `I − B′_{α,β}(z)` (0 off the point
    /// spectrum).
    pub kernel_dim: usize,
    /// `‖B_{α,β}(z)(A_0..A_{n−1})ᵀ − (A_1..A_n)ᵀ‖`.
    pub boundary_residual: f64,
    /// Set when σ_min lands in the near-degenerate band.
    pub near_degenerate: bool,
}

/// Normalization policy for [`solve_coefficients`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// `A_0 = 1` (the convention that makes the spectral measure Lebesgue).
    IncomingUnit,
    /// Return only the kernel families of a degenerate point, unnormalized.
    KernelBasis,
}

fn assemble(_tw: &TwistedBoundary, a0: C64, mid: &DVector<C64>, an: C64) -> Vec<C64> {
    let mut coeff = Vec::with_capacity(mid.len() + 2);
    coeff.push(a0);
    coeff.extend(mid.iter().copied());
    coeff.push(an);
    coeff
}

fn boundary_residual(tw: &TwistedBoundary, coeff: &[C64]) -> f64 {
    let n = tw.full.nrows();
    let lhs = DVector::from_iterator(n, coeff[..n].iter().copied());
    let rhs = DVector::from_iterator(n, coeff[1..].iter().copied());
    (&tw.full * lhs - rhs).norm()
}

/// Solve the boundary-value system at `z`. Real `z` gives the spectral
/// coefficients; complex `z` the meromorphic continuation.
pub fn solve_coefficients(
    cfg: &IntervalConfig,
    b: &BoundaryMatrix,
    z: C64,
    normalization: Normalization,
) -> Result<Vec<ScatteringSolution>> {
    let tw = TwistedBoundary::new(cfg, b, z)?;
    let m = tw.id_minus_interior();
    let k = m.nrows();
    let smin = if k == 0 { 1.0 } else { util::sigma_min(&m) };

    if smin > POINT_DEGENERACY_TOL {
        let cond = if k == 0 { 1.0 } else { util::condition_number(&m) };
        if cond > CONDITION_LIMIT {
            return Err(Error::IllConditioned { cond });
        }
        let mid = if k == 0 {
            DVector::zeros(0)
        } else {
            m.clone().lu().solve(&tw.in_coupling).ok_or(Error::IllConditioned { cond })?
        };
        let an = tw.through + tw.out_row.dot(&mid);
        let coeff = assemble(&tw, C64::new(1.0, 0.0), &mid, an);
        let residual = boundary_residual(&tw, &coeff);
        return Ok(vec![ScatteringSolution {
            z,
            coefficients: coeff,
            branch: Branch::NonDegenerate,
            kernel_dim: 0,
            boundary_residual: residual,
            near_degenerate: smin < NEAR_DEGENERACY_TOL,
        }]);
    }

    // Degenerate point: kernel of I − B′ and a range test for u.
    let kernel = util::kernel_basis(&m, POINT_DEGENERACY_TOL);
    let kernel_dim = kernel.len();
    let u_norm = tw.in_coupling.norm();
    let (zeta0, ls_residual) = util::pinv_solve(&m, &tw.in_coupling, POINT_DEGENERACY_TOL);
    let u_in_range = ls_residual <= POINT_DEGENERACY_TOL * u_norm.max(1e-300);

    let mut out = Vec::new();
    if u_in_range && normalization == Normalization::IncomingUnit {
        let an = tw.through + tw.out_row.dot(&zeta0);
        let coeff = assemble(&tw, C64::new(1.0, 0.0), &zeta0, an);
        let residual = boundary_residual(&tw, &coeff);
        out.push(ScatteringSolution {
            z,
            coefficients: coeff,
            branch: Branch::KernelAffine,
            kernel_dim,
            boundary_residual: residual,
            near_degenerate: false,
        });
    }
    let kernel_branch = if u_in_range { Branch::KernelAffine } else { Branch::KernelOnly };
    for zeta in kernel {
        let an = tw.out_row.dot(&zeta);
        let coeff = assemble(&tw, C64::new(0.0, 0.0), &zeta, an);
        let residual = boundary_residual(&tw, &coeff);
        out.push(ScatteringSolution {
            z,
            coefficients: coeff,
            branch: kernel_branch,
            kernel_dim,
            boundary_residual: residual,
            near_degenerate: false,
        });
    }
    Ok(out)
}

/// The normalized coefficient vector `(1, A_1, …, A_n)` at `z`, failing on
/// degenerate points. Most downstream consumers want exactly this.
pub fn coefficients_normalized(
    cfg: &IntervalConfig,
    b: &BoundaryMatrix,
    z: C64,
) -> Result<Vec<C64>> {
    let sols = solve_coefficients(cfg, b, z, Normalization::IncomingUnit)?;
    let sol = sols
        .into_iter()
        .find(|s| s.branch == Branch::NonDegenerate || s.branch == Branch::KernelAffine)
        .ok_or(Error::PoleProximity(0.0))?;
    Ok(sol.coefficients)
}

/// Evaluate the generalized eigenfunction `ψ(x) = A_{k(x)}·e(λx)` built
/// from a solved coefficient vector; zero on the removed intervals.
pub fn eigenfunction_eval(
    cfg: &IntervalConfig,
    solution: &ScatteringSolution,
    x: f64,
) -> C64 {
    match cfg.classify(x) {
        Region::Component(k) => solution.coefficients[k] * ez(solution.z, x),
        Region::Removed { .. } => C64::new(0.0, 0.0),
    }
}

/// Resolvent `R(z) = (I − B′_{α,β}(z))⁻¹` and its `z`-derivative via the
/// commutator recursion `(1/2πi)·dR/dz = R·δ(B′_{α,β}(z))·R` with
/// `δ(M) = M·diag(β_{j+1}) − diag(α_j)·M`.
pub fn resolvent_and_derivative(
    cfg: &IntervalConfig,
    b: &BoundaryMatrix,
    z: C64,
) -> Result<(DMatrix<C64>, DMatrix<C64>)> {
    let tw = TwistedBoundary::new(cfg, b, z)?;
    let m = tw.id_minus_interior();
    let k = m.nrows();
    let smin = if k == 0 { 1.0 } else { util::sigma_min(&m) };
    if smin <= 1e-10 {
        return Err(Error::PoleProximity(smin));
    }
    let r = m.try_inverse().ok_or(Error::PoleProximity(smin))?;
    let delta = twist_commutator(cfg, &tw.interior);
    let dr = (&r * delta * &r) * C64::new(0.0, util::TAU);
    Ok((r, dr))
}

/// `δ(M) = M·L_β − L_α·M`, the entrywise multiplication by
/// `β_{j+1} − α_i` that differentiation of the twist produces.
pub fn twist_commutator(cfg: &IntervalConfig, m: &DMatrix<C64>) -> DMatrix<C64> {
    let k = m.nrows();
    let alphas = cfg.alphas();
    let betas = cfg.betas();
    DMatrix::from_fn(k, k, |i, j| m[(i, j)] * (betas[j + 1] - alphas[i]))
}

/// For a gauge `g` that diagonalizes the corner (`gB′g⁻¹ = diag(z_k)`),
/// the determinant collapses to `Π_k (1 − z_k·e(λL_k))`. Rejects `g`
/// when the conjugated corner is not diagonal within 1e−8.
pub fn gauge_diag_det(
    cfg: &IntervalConfig,
    b: &BoundaryMatrix,
    g: &DMatrix<C64>,
    z: C64,
) -> Result<C64> {
    let gres = util::unitarity_residual(g);
    if gres > 1e-10 {
        return Err(Error::NonUnitaryGauge(gres));
    }
    let corner = b.corner();
    let conj = g * &corner.interior * g.adjoint();
    let k = conj.nrows();
    let mut off = 0.0;
    for i in 0..k {
        for j in 0..k {
            if i != j {
                off += conj[(i, j)].norm_sqr();
            }
        }
    }
    let off = off.sqrt();
    if off > 1e-8 {
        return Err(Error::NotDiagonalized(off));
    }
    let lengths = cfg.lengths();
    let mut prod = C64::new(1.0, 0.0);
    for (j, &l) in lengths.iter().enumerate() {
        prod *= C64::new(1.0, 0.0) - conj[(j, j)] * ez(z, l);
    }
    Ok(prod)
}

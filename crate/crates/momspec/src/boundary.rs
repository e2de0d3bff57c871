//! Unitary boundary matrices and their corner algebra.
//!
//! A boundary matrix `B ∈ U(n)` couples the endpoint traces of the domain
//! through `B·f(β) = f(α)`. Splitting off the first column and last row,
//!
//! ```text
//!         ┌            ┐
//!     B = │  u   B′    │      u, w ∈ ℂ^{n−1},  c ∈ ℂ,
//!         │  c   w*    │      B′ the (n−1)×(n−1) upper-right corner,
//!         └            ┘
//! ```
//!
//! in coordinates `b_{i,1} = u_i`, `b_{n,1} = c`, `b_{n,j+1} = conj(w_j)`
//! (the bottom row of the matrix is `w*`, the conjugate of `w` laid out as
//! a row). Everything spectral is controlled by the corner `B′`: whether 1
//! is one of its eigenvalues, whether it is normal, and which entries of
//! `B` vanish.

use crate::error::{Error, Result};
use crate::util::{self, e, sigma_min, unitarity_residual};
use crate::C64;
use nalgebra::{DMatrix, DVector};

/// Frobenius tolerance for unitarity certification.
pub const UNITARITY_TOL: f64 = 1e-10;
/// Threshold on σ_min(I − B′) for declaring 1 ∈ sp(B′).
pub const DEGENERACY_TOL: f64 = 1e-8;
/// Entry tolerance for the support pattern in decomposition.
pub const SUPPORT_TOL: f64 = 1e-12;

/// A certified unitary boundary matrix.
#[derive(Debug, Clone)]
pub struct BoundaryMatrix {
    mat: DMatrix<C64>,
    residual: f64,
}

/// The four corner blocks of a boundary matrix (see module docs).
#[derive(Debug, Clone)]
pub struct CornerBlocks {
    /// First column above the corner scalar (`u`); couples the incoming
    /// half-line slot into the bounded components.
    pub in_coupling: DVector<C64>,
    /// Upper-right `(n−1)×(n−1)` block (`B′`); the internal dynamics.
    pub interior: DMatrix<C64>,
    /// Bottom-left scalar (`c`); direct incoming→outgoing transmission.
    pub through: C64,
    /// `w`, with `conj(w_j) = b_{n,j+1}`; couples the bounded components
    /// to the outgoing half-line slot.
    pub out_coupling: DVector<C64>,
}

/// Block structure of `B` under simultaneous row/column permutation.
#[derive(Debug, Clone)]
pub struct DecompositionReport {
    /// Indices 0-based, permuted so blocks are contiguous.
    pub permutation: Vec<usize>,
    /// Partition of `0..n` into the finest simultaneous blocks.
    pub blocks: Vec<Vec<usize>>,
    pub is_decomposable: bool,
    /// Whether `B` additionally has the operator-splitting form (`u = 0`).
    pub operator_split: bool,
}

impl BoundaryMatrix {
    /// Certify a matrix as unitary within [`UNITARITY_TOL`] (Frobenius).
    pub fn new(mat: DMatrix<C64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() || mat.nrows() == 0 {
            return Err(Error::Dimension(format!(
                "boundary matrix must be square and non-empty, got {}×{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let residual = unitarity_residual(&mat);
        if residual > UNITARITY_TOL {
            return Err(Error::NotUnitary { residual, tol: UNITARITY_TOL });
        }
        Ok(Self { mat, residual })
    }

    /// Project onto the closest unitary (polar factor) before certifying.
    /// Only used when the CLI is explicitly asked to repair an input.
    pub fn new_projected(mat: DMatrix<C64>) -> Result<Self> {
        let svd = mat.clone().svd(true, true);
        let u = svd.u.expect("svd u");
        let vt = svd.v_t.expect("svd v_t");
        Self::new(u * vt)
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn unitarity_residual(&self) -> f64 {
        self.residual
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.mat[(i, j)]
    }

    /// Identity boundary condition.
    pub fn identity(n: usize) -> Self {
        Self::new(DMatrix::identity(n, n)).expect("identity is unitary")
    }

    /// Permutation boundary condition from disjoint cycles over `1..=n`.
    /// A cycle `(j₁ j₂ … jₘ)` sends trace slot `j₁ → j₂ → … → j₁`, i.e.
    /// the matrix has `b_{σ(j), j} = 1`. Indices absent from all cycles
    /// are fixed.
    pub fn permutation_from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut sigma: Vec<usize> = (0..n).collect();
        for cycle in cycles {
            for &idx in cycle {
                if idx == 0 || idx > n {
                    return Err(Error::Dimension(format!(
                        "cycle entry {idx} outside 1..={n}"
                    )));
                }
            }
            for k in 0..cycle.len() {
                let from = cycle[k] - 1;
                let to = cycle[(k + 1) % cycle.len()] - 1;
                sigma[from] = to;
            }
        }
        let mut m = DMatrix::zeros(n, n);
        for j in 0..n {
            m[(sigma[j], j)] = C64::new(1.0, 0.0);
        }
        Self::new(m)
    }

    /// Diagonal boundary condition `diag(e(θ₁), …, e(θₙ))`.
    pub fn diagonal_phases(thetas: &[f64]) -> Result<Self> {
        let n = thetas.len();
        let mut m = DMatrix::zeros(n, n);
        for (k, &t) in thetas.iter().enumerate() {
            m[(k, k)] = e(t);
        }
        Self::new(m)
    }

    /// The 2×2 special-unitary boundary condition `[[a, b], [−b̄, ā]]`.
    pub fn su2(a: C64, b: C64) -> Result<Self> {
        let m = DMatrix::from_row_slice(2, 2, &[a, b, -b.conj(), a.conj()]);
        Self::new(m)
    }

    /// Three-interval template with the SU(2) block acting on the first two
    /// slots and the last slot passing straight through:
    /// `[[a, b, 0], [−b̄, ā, 0], [0, 0, 1]]`. Indecomposable dynamics for
    /// `0 < |b| < 1`.
    pub fn su2_case1(a: C64, b: C64) -> Result<Self> {
        let zero = C64::new(0.0, 0.0);
        let one = C64::new(1.0, 0.0);
        let m = DMatrix::from_row_slice(3, 3, &[
            a, b, zero,
            -b.conj(), a.conj(), zero,
            zero, zero, one,
        ]);
        Self::new(m)
    }

    /// Three-interval template whose corner is the SU(2) block:
    /// `[[0, a, b], [0, −b̄, ā], [1, 0, 0]]`. The half-lines glue into a
    /// line and the bounded components decouple as boundstates.
    pub fn su2_case2(a: C64, b: C64) -> Result<Self> {
        let zero = C64::new(0.0, 0.0);
        let one = C64::new(1.0, 0.0);
        let m = DMatrix::from_row_slice(3, 3, &[
            zero, a, b,
            zero, -b.conj(), a.conj(),
            one, zero, zero,
        ]);
        Self::new(m)
    }

    /// The gauge-fixed template `[[0, I_{n−1}], [e(θ), 0]]`: each bounded
    /// component closes on itself, the half-lines glue with phase `e(θ)`.
    pub fn interior_shift(n: usize, theta: f64) -> Result<Self> {
        let mut phases = vec![0.0; n];
        phases[0] = theta;
        Self::interior_phases(&phases)
    }

    /// `[[0, diag(e(θ₂),…,e(θₙ))], [e(θ₁), 0]]`: bounded component `k`
    /// closes on itself with phase `e(θ_{k+1})`, the half-lines glue with
    /// phase `e(θ₁)`. The general diagonal-corner template.
    pub fn interior_phases(thetas: &[f64]) -> Result<Self> {
        let n = thetas.len();
        if n < 2 {
            return Err(Error::Dimension("interior template needs n ≥ 2".into()));
        }
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n - 1 {
            m[(i, i + 1)] = e(thetas[i + 1]);
        }
        m[(n - 1, 0)] = e(thetas[0]);
        Self::new(m)
    }

    /// Corner blocks `(u, B′, c, w)`; see the module docs for coordinates.
    pub fn corner(&self) -> CornerBlocks {
        let n = self.dim();
        let in_coupling = DVector::from_iterator(n - 1, (0..n - 1).map(|i| self.mat[(i, 0)]));
        let interior = DMatrix::from_fn(n - 1, n - 1, |i, j| self.mat[(i, j + 1)]);
        let through = self.mat[(n - 1, 0)];
        let out_coupling =
            DVector::from_iterator(n - 1, (0..n - 1).map(|j| self.mat[(n - 1, j + 1)].conj()));
        CornerBlocks { in_coupling, interior, through, out_coupling }
    }

    /// The cyclically shifted layout `B·S = [[B′, u], [w*, c]]`, matching
    /// the convention some statements use. Conversion helper only; the
    /// crate works in the `[[u, B′], [c, w*]]` layout throughout.
    pub fn shifted_layout(&self) -> DMatrix<C64> {
        let n = self.dim();
        // S has first column e_2, ..., last column e_1 (cyclic down-shift),
        // so B·S moves column 1 of B to the last position.
        DMatrix::from_fn(n, n, |i, j| self.mat[(i, (j + 1) % n)])
    }

    /// `1 ∈ sp(B′)` within [`DEGENERACY_TOL`]; returns a unit kernel vector
    /// of `I − B′` when so. Degenerate boundary conditions are the ones
    /// that can carry embedded eigenvalues.
    pub fn degenerate_direction(&self) -> Option<DVector<C64>> {
        let corner = self.corner();
        let n1 = corner.interior.nrows();
        if n1 == 0 {
            return None;
        }
        let m = DMatrix::identity(n1, n1) - &corner.interior;
        if sigma_min(&m) < DEGENERACY_TOL {
            let ker = util::kernel_basis(&m, DEGENERACY_TOL);
            ker.into_iter().next()
        } else {
            None
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate_direction().is_some()
    }

    /// For degenerate `B`, both `u` and `w` must be orthogonal to the
    /// eigenvector `ζ`. Returns `(|⟨u,ζ⟩|, |⟨w,ζ⟩|)`; errors if either
    /// exceeds 1e−10, which indicates a broken certificate.
    pub fn degenerate_orthogonality(&self, zeta: &DVector<C64>) -> Result<(f64, f64)> {
        let corner = self.corner();
        let u_dot = corner.in_coupling.dotc(zeta).norm();
        let w_dot = corner.out_coupling.dotc(zeta).norm();
        if u_dot > 1e-10 || w_dot > 1e-10 {
            return Err(Error::OrthogonalityViolation { u_dot, w_dot });
        }
        Ok((u_dot, w_dot))
    }

    /// Whether the corner `B′` is a normal matrix, tested through the
    /// commutator ‖B′*B′ − B′B′*‖ ≤ 1e−10. Equivalent to `u` and `w` being
    /// proportional (or both zero); [`Self::corner_normal_by_proportionality`]
    /// checks that route.
    pub fn is_corner_normal(&self) -> bool {
        let corner = self.corner();
        let b = &corner.interior;
        let comm = b.adjoint() * b - b * b.adjoint();
        comm.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt() <= 1e-10
    }

    /// The proportionality criterion for corner normality: `u = μw` with
    /// `|μ| = 1`, or `u = w = 0`.
    pub fn corner_normal_by_proportionality(&self) -> bool {
        let corner = self.corner();
        let nu = corner.in_coupling.norm();
        let nw = corner.out_coupling.norm();
        if nu <= 1e-10 && nw <= 1e-10 {
            return true;
        }
        if (nu - nw).abs() > 1e-10 {
            return false;
        }
        // |⟨u, w⟩| = ‖u‖‖w‖ exactly when proportional.
        let dot = corner.in_coupling.dotc(&corner.out_coupling).norm();
        (dot - nu * nw).abs() <= 1e-10 * nu.max(1.0)
    }

    /// The gauge action `α_g(B) = [[gu, gB′g⁻¹], [c, (gw)*]]` of
    /// `g ∈ U(n−1)`; preserves unitarity and the solution structure.
    pub fn gauge(&self, g: &DMatrix<C64>) -> Result<Self> {
        let n = self.dim();
        if g.nrows() != n - 1 || g.ncols() != n - 1 {
            return Err(Error::Dimension(format!(
                "gauge must be {}×{}, got {}×{}",
                n - 1,
                n - 1,
                g.nrows(),
                g.ncols()
            )));
        }
        let gres = unitarity_residual(g);
        if gres > UNITARITY_TOL {
            return Err(Error::NonUnitaryGauge(gres));
        }
        let corner = self.corner();
        let gu = g * &corner.in_coupling;
        let gbg = g * &corner.interior * g.adjoint();
        let gw = g * &corner.out_coupling;
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n - 1 {
            m[(i, 0)] = gu[i];
            for j in 0..n - 1 {
                m[(i, j + 1)] = gbg[(i, j)];
            }
        }
        m[(n - 1, 0)] = corner.through;
        for j in 0..n - 1 {
            m[(n - 1, j + 1)] = gw[j].conj();
        }
        Self::new(m)
    }

    /// Finest block structure under simultaneous row/column permutation:
    /// connected components of the support graph (edge {i,j} wherever
    /// `|b_ij|` or `|b_ji|` exceeds [`SUPPORT_TOL`]). Each block of a
    /// unitary matrix is itself unitary.
    pub fn decompose(&self) -> DecompositionReport {
        let n = self.dim();
        let mut dsu: Vec<usize> = (0..n).collect();
        fn find(dsu: &mut Vec<usize>, i: usize) -> usize {
            if dsu[i] != i {
                let root = find(dsu, dsu[i]);
                dsu[i] = root;
            }
            dsu[i]
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && (self.mat[(i, j)].norm() > SUPPORT_TOL || self.mat[(j, i)].norm() > SUPPORT_TOL) {
                    let (ri, rj) = (find(&mut dsu, i), find(&mut dsu, j));
                    if ri != rj {
                        dsu[ri] = rj;
                    }
                }
            }
        }
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut root_of: Vec<Option<usize>> = vec![None; n];
        for i in 0..n {
            let r = find(&mut dsu, i);
            match root_of[r] {
                Some(g) => groups[g].push(i),
                None => {
                    root_of[r] = Some(groups.len());
                    groups.push(vec![i]);
                }
            }
        }
        groups.sort_by_key(|g| g[0]);
        let permutation: Vec<usize> = groups.iter().flatten().copied().collect();
        DecompositionReport {
            is_decomposable: groups.len() > 1,
            operator_split: self.operator_split_form(),
            permutation,
            blocks: groups,
        }
    }

    /// Extract the sub-unitary acting on a block of indices.
    pub fn block(&self, indices: &[usize]) -> Result<Self> {
        let k = indices.len();
        let m = DMatrix::from_fn(k, k, |i, j| self.mat[(indices[i], indices[j])]);
        Self::new(m)
    }

    /// `u = 0` (equivalently `w = 0`, equivalently `B′ ∈ U(n−1)`): the
    /// operator splits into a boundstate part on the bounded components and
    /// a glued-line part on the half-lines. The three characterizations are
    /// required to agree within 1e−10.
    pub fn operator_split_form(&self) -> bool {
        let corner = self.corner();
        let u_zero = corner.in_coupling.norm() <= 1e-10;
        let w_zero = corner.out_coupling.norm() <= 1e-10;
        let b_unitary = unitarity_residual(&corner.interior) <= 1e-10 || corner.interior.nrows() == 0;
        debug_assert!(
            u_zero == w_zero && (corner.interior.nrows() == 0 || u_zero == b_unitary),
            "split-form characterizations disagree"
        );
        u_zero && w_zero && b_unitary
    }
}

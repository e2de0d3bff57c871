//! Crate-wide error type. Variants carry the diagnostic the CLI surfaces
//! as machine-readable codes.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("interlacing violated: {0}")]
    InvalidInterlacing(String),

    #[error("matrix is not unitary: ‖B*B−I‖ = {residual:.3e} exceeds {tol:.1e}")]
    NotUnitary { residual: f64, tol: f64 },

    #[error("gauge matrix is not unitary (residual {0:.3e})")]
    NonUnitaryGauge(f64),

    #[error("matrix does not diagonalize the corner (off-diagonal {0:.3e})")]
    NotDiagonalized(f64),

    #[error("solve is ill-conditioned (cond {cond:.3e}); treat the point as near-degenerate")]
    IllConditioned { cond: f64 },

    #[error("spectral point too close to a pole (σ_min {0:.3e})")]
    PoleProximity(f64),

    #[error("degenerate-orthogonality violated: |⟨u,ζ⟩| = {u_dot:.3e}, |⟨w,ζ⟩| = {w_dot:.3e}")]
    OrthogonalityViolation { u_dot: f64, w_dot: f64 },

    #[error("determinant has a zero too close to the contour (|D| = {0:.3e} on boundary)")]
    BoundaryZero(f64),

    #[error("winding number {0} is not integral within 0.1 after refinement")]
    NonIntegerWinding(f64),

    #[error("evolution time {t} exceeds the declared horizon {horizon}")]
    HorizonExceeded { t: f64, horizon: f64 },

    #[error("density window [{lo}, {hi}] exceeds the computed spectrum range [{have_lo}, {have_hi}]")]
    WindowExceeded { lo: f64, hi: f64, have_lo: f64, have_hi: f64 },

    #[error("Möbius denominator too small (|w − e(λL₁+φ₀)| = {0:.3e})")]
    MobiusPole(f64),

    #[error("quadrature did not converge within budget (last change {0:.3e})")]
    QuadratureBudget(f64),

    #[error("|b| must be < 1 for the Poisson kernel, got {0}")]
    PoissonModulus(f64),

    #[error("boundary matrix does not match any closed-form template")]
    NotApplicable,

    #[error("config error at {pointer}: {message}")]
    Schema { pointer: String, message: String },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

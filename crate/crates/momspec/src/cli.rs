//! Config-document ingestion and subcommand dispatch.
//!
//! All runs are driven by a single JSON document (complex numbers as
//! `[re, im]` pairs, matrices row-major); every subcommand emits
//! deterministic CSV with round-trip-safe floats, so identical configs
//! produce bit-identical output. See the repository README for the schema.

use crate::bform;
use crate::boundary::BoundaryMatrix;
use crate::eigensolver::{solve_coefficients, Normalization};
use crate::error::{Error, Result};
use crate::infinite::{self, InfiniteConfig, PhaseSpec};
use crate::intervals::IntervalConfig;
use crate::pointspec::{self, Rect};
use crate::transform::{GridState, SpatialGrid, TransformPlan};
use crate::util::fmt_f64;
use crate::verify;
use crate::C64;
use nalgebra::DMatrix;
use serde::Deserialize;

#[derive(Debug, Clone, Deserialize)]
pub struct RunConfig {
    #[serde(default)]
    pub intervals: Option<IntervalInput>,
    #[serde(default)]
    pub infinite: Option<InfiniteInput>,
    #[serde(default)]
    pub boundary: Option<BoundaryInput>,
    /// Second boundary condition for `inner` / `intertwine`.
    #[serde(default)]
    pub boundary2: Option<BoundaryInput>,
    /// Re-unitarize inputs by polar projection instead of rejecting them.
    #[serde(default)]
    pub project_unitary: bool,

    #[serde(default)]
    pub window: Option<(f64, f64)>,
    /// λ-grid size for `coeffs`.
    #[serde(default = "default_grid_points")]
    pub grid_points: usize,
    /// Spatial samples per smallest feature for `evolve`/`intertwine`.
    #[serde(default = "default_samples")]
    pub samples_per_feature: usize,
    #[serde(default = "default_pad")]
    pub pad: f64,
    #[serde(default = "default_horizon")]
    pub horizon: f64,
    #[serde(default)]
    pub times: Vec<f64>,
    #[serde(default)]
    pub state: Option<StateInput>,
    #[serde(default)]
    pub rects: Vec<[f64; 4]>,
    #[serde(default)]
    pub lambda_max: Option<f64>,
    /// `(center, half_width)` for the `density` subcommand.
    #[serde(default)]
    pub density: Option<(f64, f64)>,
    /// Truncation level for `cantor`.
    #[serde(default)]
    pub level: Option<u32>,
    #[serde(default)]
    pub phases: Option<PhaseInput>,
}

fn default_grid_points() -> usize {
    1000
}
fn default_samples() -> usize {
    48
}
fn default_pad() -> f64 {
    6.0
}
fn default_horizon() -> f64 {
    1.0
}

#[derive(Debug, Clone, Deserialize)]
pub struct IntervalInput {
    pub betas: Vec<f64>,
    pub alphas: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InfiniteInput {
    CantorLevel(u32),
    Gaps(Vec<(f64, f64)>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryInput {
    /// Row-major complex matrix, entries as `[re, im]`.
    Explicit(Vec<Vec<[f64; 2]>>),
    /// Permutation by disjoint cycles over 1..=n, with explicit size.
    PermutationCycles { size: usize, cycles: Vec<Vec<usize>> },
    DiagonalPhases(Vec<f64>),
    /// `[[0, diag(e(θ₂)..)], [e(θ₁), 0]]` template.
    InteriorPhases(Vec<f64>),
    InteriorShift { size: usize, phase: f64 },
    Su2 { a: [f64; 2], b: [f64; 2] },
    Su2Case1 { a: [f64; 2], b: [f64; 2] },
    Su2Case2 { a: [f64; 2], b: [f64; 2] },
}

#[derive(Debug, Clone, Deserialize)]
pub struct StateInput {
    pub component: usize,
    pub center: f64,
    pub width: f64,
    #[serde(default)]
    pub momentum: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseInput {
    Constant(f64),
    List(Vec<f64>),
}

fn c(pair: [f64; 2]) -> C64 {
    C64::new(pair[0], pair[1])
}

impl RunConfig {
    pub fn from_json(doc: &str) -> Result<Self> {
        serde_json::from_str(doc).map_err(|e| Error::Schema {
            pointer: format!("line {} column {}", e.line(), e.column()),
            message: e.to_string(),
        })
    }

    pub fn interval_config(&self) -> Result<IntervalConfig> {
        let input = self.intervals.as_ref().ok_or(Error::Schema {
            pointer: "/intervals".into(),
            message: "missing interval endpoints".into(),
        })?;
        IntervalConfig::new(input.betas.clone(), input.alphas.clone())
    }

    pub fn boundary_matrix(&self) -> Result<BoundaryMatrix> {
        build_boundary(
            self.boundary.as_ref().ok_or(Error::Schema {
                pointer: "/boundary".into(),
                message: "missing boundary matrix spec".into(),
            })?,
            self.project_unitary,
        )
    }

    pub fn boundary_matrix2(&self) -> Result<BoundaryMatrix> {
        build_boundary(
            self.boundary2.as_ref().ok_or(Error::Schema {
                pointer: "/boundary2".into(),
                message: "missing second boundary matrix spec".into(),
            })?,
            self.project_unitary,
        )
    }

    fn window_or(&self, lo: f64, hi: f64) -> (f64, f64) {
        self.window.unwrap_or((lo, hi))
    }
}

fn build_boundary(input: &BoundaryInput, project: bool) -> Result<BoundaryMatrix> {
    let build = |m: DMatrix<C64>| {
        if project {
            BoundaryMatrix::new_projected(m)
        } else {
            BoundaryMatrix::new(m)
        }
    };
    match input {
        BoundaryInput::Explicit(rows) => {
            let n = rows.len();
            if rows.iter().any(|r| r.len() != n) {
                return Err(Error::Schema {
                    pointer: "/boundary/explicit".into(),
                    message: "matrix must be square".into(),
                });
            }
            build(DMatrix::from_fn(n, n, |i, j| c(rows[i][j])))
        }
        BoundaryInput::PermutationCycles { size, cycles } => {
            BoundaryMatrix::permutation_from_cycles(*size, cycles)
        }
        BoundaryInput::DiagonalPhases(t) => BoundaryMatrix::diagonal_phases(t),
        BoundaryInput::InteriorPhases(t) => BoundaryMatrix::interior_phases(t),
        BoundaryInput::InteriorShift { size, phase } => BoundaryMatrix::interior_shift(*size, *phase),
        BoundaryInput::Su2 { a, b } => BoundaryMatrix::su2(c(*a), c(*b)),
        BoundaryInput::Su2Case1 { a, b } => BoundaryMatrix::su2_case1(c(*a), c(*b)),
        BoundaryInput::Su2Case2 { a, b } => BoundaryMatrix::su2_case2(c(*a), c(*b)),
    }
}

/// The available subcommands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Coeffs,
    Pointspec,
    Density,
    Poles,
    Evolve,
    Intertwine,
    Inner,
    Decompose,
    Cantor,
}

impl Command {
    pub fn parse(name: &str) -> Option<Self> {
        Some(match name {
            "coeffs" => Self::Coeffs,
            "pointspec" => Self::Pointspec,
            "density" => Self::Density,
            "poles" => Self::Poles,
            "evolve" => Self::Evolve,
            "intertwine" => Self::Intertwine,
            "inner" => Self::Inner,
            "decompose" => Self::Decompose,
            "cantor" => Self::Cantor,
            _ => None?,
        })
    }
}

/// Result of a run: the CSV payload plus any numeric warnings, each with a
/// machine-readable code prefix.
#[derive(Debug)]
pub struct RunOutput {
    pub csv: String,
    pub warnings: Vec<String>,
}

pub fn run(cmd: Command, cfg: &RunConfig) -> Result<RunOutput> {
    match cmd {
        Command::Coeffs => run_coeffs(cfg),
        Command::Pointspec => run_pointspec(cfg),
        Command::Density => run_density(cfg),
        Command::Poles => run_poles(cfg),
        Command::Evolve => run_evolve(cfg),
        Command::Intertwine => run_intertwine(cfg),
        Command::Inner => run_inner(cfg),
        Command::Decompose => run_decompose(cfg),
        Command::Cantor => run_cantor(cfg),
    }
}

fn run_coeffs(cfg: &RunConfig) -> Result<RunOutput> {
    let ic = cfg.interval_config()?;
    let b = cfg.boundary_matrix()?;
    let (lo, hi) = cfg.window_or(-5.0, 5.0);
    let count = cfg.grid_points.max(2);
    let n = ic.n();
    let mut csv = String::from("lambda");
    for j in 0..=n {
        csv += &format!(",re_a{j},im_a{j},abs_a{j}");
    }
    csv += ",branch\n";
    let mut warnings = Vec::new();
    let step = (hi - lo) / (count - 1) as f64;
    for i in 0..count {
        let lam = lo + i as f64 * step;
        match solve_coefficients(&ic, &b, C64::new(lam, 0.0), Normalization::IncomingUnit) {
            Ok(sols) => {
                let s = &sols[0];
                if s.near_degenerate {
                    warnings.push(format!("W_NEAR_DEGENERATE lambda={}", fmt_f64(lam)));
                }
                csv += &fmt_f64(lam);
                for a in &s.coefficients {
                    csv += &format!(",{},{},{}", fmt_f64(a.re), fmt_f64(a.im), fmt_f64(a.norm()));
                }
                csv += &format!(",{}\n", s.branch.label());
            }
            Err(_) => {
                warnings.push(format!("W_DEGENERATE_POINT lambda={}", fmt_f64(lam)));
            }
        }
    }
    Ok(RunOutput { csv, warnings })
}

fn run_pointspec(cfg: &RunConfig) -> Result<RunOutput> {
    let ic = cfg.interval_config()?;
    let b = cfg.boundary_matrix()?;
    let window = cfg.window_or(-10.0, 10.0);
    let sp = pointspec::find_point_spectrum(&ic, &b, window)?;
    let mut csv = String::from("lambda,multiplicity\n");
    for (lam, m) in &sp.points {
        csv += &format!("{},{m}\n", fmt_f64(*lam));
    }
    let mut warnings: Vec<String> =
        sp.collisions.iter().map(|c| format!("W_ROOT_COLLISION lambda={}", fmt_f64(*c))).collect();
    if let Ok(closed) = pointspec::closed_form_spectrum(&ic, &b, window) {
        // Internal cross-check for the template forms.
        if closed.points.len() != sp.points.len() {
            warnings.push("W_CLOSED_FORM_MISMATCH count".into());
        }
    }
    Ok(RunOutput { csv, warnings })
}

fn run_density(cfg: &RunConfig) -> Result<RunOutput> {
    let ic = cfg.interval_config()?;
    let b = cfg.boundary_matrix()?;
    let (center, half_width) = cfg.density.ok_or(Error::Schema {
        pointer: "/density".into(),
        message: "need (center, half_width)".into(),
    })?;
    let window = cfg.window_or(center - half_width - 1.0, center + half_width + 1.0);
    let sp = match pointspec::closed_form_spectrum(&ic, &b, window) {
        Ok(s) => s,
        Err(Error::NotApplicable) => pointspec::find_point_spectrum(&ic, &b, window)?,
        Err(e) => return Err(e),
    };
    let d = pointspec::density(&sp, center, half_width)?;
    let limit = ic.total_length();
    let gap = if limit > 0.0 { (d - limit).abs() / limit } else { 0.0 };
    let csv = format!(
        "half_width,density,limit,relative_gap\n{},{},{},{}\n",
        fmt_f64(half_width),
        fmt_f64(d),
        fmt_f64(limit),
        fmt_f64(gap)
    );
    Ok(RunOutput { csv, warnings: Vec::new() })
}

fn run_poles(cfg: &RunConfig) -> Result<RunOutput> {
    let ic = cfg.interval_config()?;
    let b = cfg.boundary_matrix()?;
    let mut csv = String::from("re_min,re_max,im_min,im_max,count\n");
    for r in &cfg.rects {
        let rect = Rect { re: (r[0], r[1]), im: (r[2], r[3]) };
        let count = pointspec::complex_zero_count(&ic, &b, rect)?;
        csv += &format!(
            "{},{},{},{},{count}\n",
            fmt_f64(r[0]),
            fmt_f64(r[1]),
            fmt_f64(r[2]),
            fmt_f64(r[3])
        );
    }
    Ok(RunOutput { csv, warnings: Vec::new() })
}

fn state_from_input(
    ic: &IntervalConfig,
    grid: &SpatialGrid,
    horizon: f64,
    input: Option<&StateInput>,
) -> Result<GridState> {
    let st = input.ok_or(Error::Schema {
        pointer: "/state".into(),
        message: "need a Gaussian state spec".into(),
    })?;
    GridState::gaussian(ic, grid, horizon, st.component, st.center, st.width, st.momentum)
}

fn run_evolve(cfg: &RunConfig) -> Result<RunOutput> {
    let ic = cfg.interval_config()?;
    let b = cfg.boundary_matrix()?;
    let grid = SpatialGrid::auto(&ic, cfg.horizon, cfg.pad, cfg.samples_per_feature)?;
    let plan = TransformPlan::new(&ic, &b, &grid)?;
    let f = state_from_input(&ic, &grid, cfg.horizon, cfg.state.as_ref())?;
    let mut csv = String::from("t,x,re,im,abs2\n");
    for &t in &cfg.times {
        let ft = plan.evolve(&f, t)?;
        for m in 0..grid.len {
            let v = ft.values[m];
            csv += &format!(
                "{},{},{},{},{}\n",
                fmt_f64(t),
                fmt_f64(grid.x(m)),
                fmt_f64(v.re),
                fmt_f64(v.im),
                fmt_f64(v.norm_sqr())
            );
        }
    }
    let warnings = plan.warnings.iter().map(|w| format!("W_TRANSFORM {w}")).collect();
    Ok(RunOutput { csv, warnings })
}

fn run_intertwine(cfg: &RunConfig) -> Result<RunOutput> {
    let ic = cfg.interval_config()?;
    let b1 = cfg.boundary_matrix()?;
    let b2 = cfg.boundary_matrix2()?;
    let grid = SpatialGrid::auto(&ic, cfg.horizon, cfg.pad, cfg.samples_per_feature)?;
    let plan1 = TransformPlan::new(&ic, &b1, &grid)?;
    let plan2 = TransformPlan::new(&ic, &b2, &grid)?;
    let f = state_from_input(&ic, &grid, cfg.horizon, cfg.state.as_ref())?;
    // Snapshots of the intertwined image of the evolving state; t = 0 is
    // the plain intertwiner applied to the input.
    let times = if cfg.times.is_empty() { vec![0.0] } else { cfg.times.clone() };
    let mut csv = String::from("which,t,x,re,im,abs2\n");
    let emit = |tag: &str, t: f64, state: &GridState, csv: &mut String| {
        for m in 0..grid.len {
            let v = state.values[m];
            *csv += &format!(
                "{tag},{},{},{},{},{}\n",
                fmt_f64(t),
                fmt_f64(grid.x(m)),
                fmt_f64(v.re),
                fmt_f64(v.im),
                fmt_f64(v.norm_sqr())
            );
        }
    };
    emit("input", 0.0, &f, &mut csv);
    for &t in &times {
        let moved = plan1.evolve(&f, t)?;
        let wf = crate::transform::intertwiner_apply(&plan1, &plan2, &moved)?;
        emit("intertwined", t, &wf, &mut csv);
    }
    Ok(RunOutput { csv, warnings: Vec::new() })
}

fn run_inner(cfg: &RunConfig) -> Result<RunOutput> {
    let ic = cfg.interval_config()?;
    let b1 = cfg.boundary_matrix()?;
    let b2 = cfg.boundary_matrix2()?;
    let ip = bform::inner_product(&ic, &b1, &b2, cfg.lambda_max)?;
    let mut csv = String::from("re,im,error_bound");
    let mut tail = format!("{},{},{}", fmt_f64(ip.value.re), fmt_f64(ip.value.im), fmt_f64(ip.error_bound));
    if ic.n() == 2 {
        let closed = bform::inner_product_closed_form_n2(
            ic.lengths()[0],
            b1.entry(0, 0),
            b1.entry(0, 1),
            b2.entry(0, 0),
            b2.entry(0, 1),
        );
        csv += ",closed_re,closed_im";
        tail += &format!(",{},{}", fmt_f64(closed.re), fmt_f64(closed.im));
    }
    csv += "\n";
    csv += &tail;
    csv += "\n";
    Ok(RunOutput { csv, warnings: Vec::new() })
}

fn run_decompose(cfg: &RunConfig) -> Result<RunOutput> {
    let b = cfg.boundary_matrix()?;
    let report = b.decompose();
    let mut csv = String::from("block,member,is_decomposable,operator_split\n");
    for (bi, block) in report.blocks.iter().enumerate() {
        for &m in block {
            csv += &format!(
                "{bi},{},{},{}\n",
                m + 1,
                report.is_decomposable,
                report.operator_split
            );
        }
    }
    Ok(RunOutput { csv, warnings: Vec::new() })
}

fn run_cantor(cfg: &RunConfig) -> Result<RunOutput> {
    let inf = match (&cfg.infinite, cfg.level) {
        (Some(InfiniteInput::CantorLevel(j)), _) => InfiniteConfig::cantor_complement(*j),
        (Some(InfiniteInput::Gaps(g)), _) => InfiniteConfig::new(g.clone())?,
        (None, Some(j)) => InfiniteConfig::cantor_complement(j),
        (None, None) => {
            return Err(Error::Schema {
                pointer: "/infinite".into(),
                message: "need a cantor level or explicit gaps".into(),
            })
        }
    };
    let phases = match &cfg.phases {
        None => PhaseSpec::Zero,
        Some(PhaseInput::Constant(t)) => PhaseSpec::Constant(*t),
        Some(PhaseInput::List(v)) => PhaseSpec::List(v.clone()),
    };
    let window = cfg.window_or(-30.0, 30.0);
    let sp = infinite::diagonal_point_spectrum(&inf, &phases, window)?;
    let mut csv = String::from("lambda,multiplicity\n");
    for (lam, m) in &sp.points {
        csv += &format!("{},{m}\n", fmt_f64(*lam));
    }
    let warnings = vec![format!(
        "W_TRUNCATED gaps={} total_length={} (multiplicity at 0 grows with the truncation)",
        inf.gaps().len(),
        fmt_f64(inf.total_length())
    )];
    Ok(RunOutput { csv, warnings })
}

/// The invariant suites relevant to each subcommand.
pub fn verify_suites(cmd: Command) -> &'static [&'static str] {
    match cmd {
        Command::Coeffs | Command::Intertwine | Command::Evolve => &[
            "scattering-boundary-residual",
            "gauge-covariance",
            "unitarity-system",
        ],
        Command::Pointspec | Command::Density | Command::Poles | Command::Cantor => &[
            "determinant-identity",
            "scattering-boundary-residual",
        ],
        Command::Inner => &["scattering-boundary-residual", "unitarity-system"],
        Command::Decompose => &[
            "unitarity-system",
            "corner-eigenvalue-relations",
            "corner-norm-dominates-through",
            "degenerate-orthogonality",
        ],
    }
}

/// Run the verify suites for a subcommand; returns the report lines and
/// whether everything passed.
pub fn run_verification(cmd: Command, seed: u64, trials: usize) -> (Vec<String>, bool) {
    let mut lines = Vec::new();
    let mut ok = true;
    for name in verify_suites(cmd) {
        let report = verify::run_suite(name, seed, trials).expect("known suite");
        ok &= report.passed();
        lines.push(report.line());
    }
    (lines, ok)
}

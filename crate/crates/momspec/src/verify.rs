//! Seeded randomized invariant suites, shared by the CLI `--verify` flag
//! and the acceptance tests. Every suite runs a fixed number of trials
//! from a deterministic seed and reports its worst residual.

use crate::boundary::BoundaryMatrix;
use crate::eigensolver::{
    coefficients_normalized, solve_coefficients, spectral_det, spectral_det_alt, Normalization,
    TwistedBoundary,
};
use crate::intervals::IntervalConfig;
use crate::util::{self, random_unitary};
use crate::C64;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Outcome of one invariant suite.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub name: &'static str,
    pub trials: usize,
    pub failures: usize,
    pub worst: f64,
    pub tolerance: f64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn line(&self) -> String {
        format!(
            "VERIFY {:<32} {}  trials={} failures={} worst={:.3e} tol={:.1e}",
            self.name,
            if self.passed() { "PASS" } else { "FAIL" },
            self.trials,
            self.failures,
            self.worst,
            self.tolerance
        )
    }
}

pub const SUITE_NAMES: &[&str] = &[
    "unitarity-system",
    "corner-eigenvalue-relations",
    "corner-norm-dominates-through",
    "degenerate-orthogonality",
    "gauge-covariance",
    "scattering-boundary-residual",
    "determinant-identity",
];

/// Run one suite by name.
pub fn run_suite(name: &str, seed: u64, trials: usize) -> Option<SuiteReport> {
    match name {
        "unitarity-system" => Some(unitarity_system(seed, trials)),
        "corner-eigenvalue-relations" => Some(eigenvalue_relations(seed, trials)),
        "corner-norm-dominates-through" => Some(norm_dominates(seed, trials)),
        "degenerate-orthogonality" => Some(degenerate_orthogonality(seed, trials)),
        "gauge-covariance" => Some(gauge_covariance(seed, trials)),
        "scattering-boundary-residual" => Some(boundary_residual(seed, trials)),
        "determinant-identity" => Some(determinant_identity(seed, trials)),
        _ => None,
    }
}

pub fn run_all(seed: u64, trials: usize) -> Vec<SuiteReport> {
    SUITE_NAMES.iter().map(|n| run_suite(n, seed, trials).unwrap()).collect()
}

fn random_config<R: Rng>(rng: &mut R, n: usize) -> IntervalConfig {
    let beta1 = 2.0 * (rng.random::<f64>() - 0.5);
    let gaps: Vec<f64> = (0..n).map(|_| 0.2 + rng.random::<f64>()).collect();
    let lengths: Vec<f64> = (0..n - 1).map(|_| 0.2 + rng.random::<f64>()).collect();
    IntervalConfig::from_first_beta(beta1, &gaps, &lengths).expect("generated interlacing")
}

/// Random boundary condition whose corner fixes a known unit vector:
/// start from the template with the fixed direction in the first interior
/// slot, embed a Haar unitary on the complement, and gauge by a Haar
/// unitary. Returns `(B, ζ)`.
pub fn random_degenerate<R: Rng>(rng: &mut R, n: usize) -> (BoundaryMatrix, DVector<C64>) {
    assert!(n >= 3);
    let m = random_unitary(rng, n - 1);
    let mut seed = DMatrix::zeros(n, n);
    seed[(0, 1)] = C64::new(1.0, 0.0);
    // Rows 1..n act on columns {0, 2..n} through m.
    for i in 1..n {
        seed[(i, 0)] = m[(i - 1, 0)];
        for j in 2..n {
            seed[(i, j)] = m[(i - 1, j - 1)];
        }
    }
    let b0 = BoundaryMatrix::new(seed).expect("seed is unitary");
    let g = random_unitary(rng, n - 1);
    let b = b0.gauge(&g).expect("gauge of unitary");
    let zeta = DVector::from_iterator(n - 1, (0..n - 1).map(|i| g[(i, 0)]));
    (b, zeta)
}

fn unitarity_system(seed: u64, trials: usize) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x1);
    let tol = 1e-10;
    let mut worst = 0.0f64;
    let mut failures = 0;
    for _ in 0..trials {
        let n = 2 + rng.random_range(0..4usize);
        let b = BoundaryMatrix::new(random_unitary(&mut rng, n)).expect("unitary");
        let corner = b.corner();
        let k = n - 1;
        let id = DMatrix::<C64>::identity(k, k);
        let proj = |v: &DVector<C64>| -> DMatrix<C64> {
            let nn = v.norm().powi(2);
            if nn < 1e-300 {
                return DMatrix::zeros(k, k);
            }
            DMatrix::from_fn(k, k, |i, j| v[i] * v[j].conj() / C64::from(nn))
        };
        let bp = &corner.interior;
        let r1 = (bp.adjoint() * bp
            + proj(&corner.out_coupling) * C64::from(corner.out_coupling.norm().powi(2))
            - &id)
            .norm();
        let r2 = (bp * bp.adjoint()
            + proj(&corner.in_coupling) * C64::from(corner.in_coupling.norm().powi(2))
            - &id)
            .norm();
        let r3 = (bp * &corner.out_coupling + &corner.in_coupling * corner.through.conj()).norm();
        let r4 = (corner.out_coupling.norm().powi(2) + corner.through.norm_sqr() - 1.0).abs();
        let r5 = (corner.in_coupling.norm().powi(2) + corner.through.norm_sqr() - 1.0).abs();
        let r = r1.max(r2).max(r3).max(r4).max(r5);
        worst = worst.max(r);
        if r > tol {
            failures += 1;
        }
    }
    SuiteReport { name: "unitarity-system", trials, failures, worst, tolerance: tol }
}

fn eigenvalue_relations(seed: u64, trials: usize) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x2);
    let tol = 1e-10;
    let mut worst = 0.0f64;
    let mut failures = 0;
    for _ in 0..trials {
        let n = 2 + rng.random_range(0..4usize);
        let b = BoundaryMatrix::new(random_unitary(&mut rng, n)).expect("unitary");
        let corner = b.corner();
        let c2 = C64::from(corner.through.norm_sqr());
        let bp = &corner.interior;
        let r1 = (bp.adjoint() * bp * &corner.out_coupling - &corner.out_coupling * c2).norm();
        let r2 = (bp * bp.adjoint() * &corner.in_coupling - &corner.in_coupling * c2).norm();
        let r = r1.max(r2);
        worst = worst.max(r);
        if r > tol {
            failures += 1;
        }
    }
    SuiteReport { name: "corner-eigenvalue-relations", trials, failures, worst, tolerance: tol }
}

fn norm_dominates(seed: u64, trials: usize) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x3);
    let tol = 1e-12;
    let mut worst: f64 = 0.0;
    let mut failures = 0;
    for _ in 0..trials {
        let n = 2 + rng.random_range(0..4usize);
        let b = BoundaryMatrix::new(random_unitary(&mut rng, n)).expect("unitary");
        let corner = b.corner();
        let norm = util::singular_values(&corner.interior).first().copied().unwrap_or(0.0);
        let defect = (corner.through.norm() - norm).max(0.0);
        worst = worst.max(defect);
        if defect > tol {
            failures += 1;
        }
    }
    SuiteReport { name: "corner-norm-dominates-through", trials, failures, worst, tolerance: tol }
}

fn degenerate_orthogonality(seed: u64, trials: usize) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x4);
    let tol = 1e-10;
    let mut worst = 0.0f64;
    let mut failures = 0;
    for _ in 0..trials {
        let n = 3 + rng.random_range(0..3usize);
        let (b, zeta) = random_degenerate(&mut rng, n);
        let corner = b.corner();
        // ζ really is fixed by the corner.
        let fix = (&corner.interior * &zeta - &zeta).norm();
        let r = match b.degenerate_orthogonality(&zeta) {
            Ok((u_dot, w_dot)) => u_dot.max(w_dot).max(fix),
            Err(_) => 1.0,
        };
        worst = worst.max(r);
        if r > tol {
            failures += 1;
        }
    }
    SuiteReport { name: "degenerate-orthogonality", trials, failures, worst, tolerance: tol }
}

fn gauge_covariance(seed: u64, trials: usize) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5);
    let tol = 1e-10;
    let mut worst = 0.0f64;
    let mut failures = 0;
    let mut done = 0;
    while done < trials {
        let n = 2 + rng.random_range(0..4usize);
        let cfg = random_config(&mut rng, n);
        let b = BoundaryMatrix::new(random_unitary(&mut rng, n)).expect("unitary");
        let lam = 6.0 * (rng.random::<f64>() - 0.5);
        let tw = TwistedBoundary::new(&cfg, &b, C64::new(lam, 0.0)).expect("twist");
        if tw.sigma_min() < 1e-6 {
            continue;
        }
        let m = BoundaryMatrix::new(tw.full.clone()).expect("twist is unitary on the real axis");
        let g = random_unitary(&mut rng, n - 1);
        let gauged = m.gauge(&g).expect("gauge");
        // Solve both matrix problems at z = 0 (the twist is the matrix).
        let v1 = coefficients_normalized(&cfg, &m, C64::new(0.0, 0.0)).expect("solve");
        let v2 = coefficients_normalized(&cfg, &gauged, C64::new(0.0, 0.0)).expect("solve");
        let mid1 = DVector::from_iterator(n - 1, v1[1..n].iter().copied());
        let mid2 = DVector::from_iterator(n - 1, v2[1..n].iter().copied());
        let r =
            ((&g * mid1) - mid2).norm().max((v2[0] - v1[0]).norm()).max((v2[n] - v1[n]).norm());
        worst = worst.max(r);
        if r > tol {
            failures += 1;
        }
        done += 1;
    }
    SuiteReport { name: "gauge-covariance", trials, failures, worst, tolerance: tol }
}

fn boundary_residual(seed: u64, trials: usize) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6);
    let tol = 1e-10;
    let mut worst = 0.0f64;
    let mut failures = 0;
    for t in 0..trials {
        let n = 2 + rng.random_range(0..4usize);
        let cfg = random_config(&mut rng, n);
        // Mix generic, template, and degenerate boundary conditions.
        let b = match t % 3 {
            0 => BoundaryMatrix::new(random_unitary(&mut rng, n)).expect("unitary"),
            1 => {
                let thetas: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
                BoundaryMatrix::interior_phases(&thetas).expect("template")
            }
            _ if n >= 3 => random_degenerate(&mut rng, n).0,
            _ => BoundaryMatrix::new(random_unitary(&mut rng, n)).expect("unitary"),
        };
        let z = if t % 2 == 0 {
            C64::new(6.0 * (rng.random::<f64>() - 0.5), 0.0)
        } else {
            C64::new(4.0 * (rng.random::<f64>() - 0.5), 0.6 * (rng.random::<f64>() - 0.5))
        };
        let sols = match solve_coefficients(&cfg, &b, z, Normalization::IncomingUnit) {
            Ok(s) => s,
            Err(_) => continue,
        };
        for s in sols {
            worst = worst.max(s.boundary_residual);
            if s.boundary_residual > tol {
                failures += 1;
            }
        }
    }
    SuiteReport { name: "scattering-boundary-residual", trials, failures, worst, tolerance: tol }
}

fn determinant_identity(seed: u64, trials: usize) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7);
    let tol = 1e-12;
    let mut worst = 0.0f64;
    let mut failures = 0;
    for _ in 0..trials {
        let n = 2 + rng.random_range(0..4usize);
        let cfg = random_config(&mut rng, n);
        let b = BoundaryMatrix::new(random_unitary(&mut rng, n)).expect("unitary");
        let lam = C64::new(8.0 * (rng.random::<f64>() - 0.5), 0.0);
        let d = spectral_det(&cfg, &b, lam).expect("det");
        let d_alt = spectral_det_alt(&cfg, &b, lam).expect("det alt");
        // Same lengths, different gaps: identical determinant.
        let other = IntervalConfig::from_first_beta(
            cfg.betas()[0] - 1.0,
            &cfg.gaps().iter().rev().cloned().collect::<Vec<_>>(),
            &cfg.lengths(),
        )
        .expect("reshuffled");
        let d_other = spectral_det(&other, &b, lam).expect("det");
        let r = (d - d_alt).norm().max((d - d_other).norm());
        worst = worst.max(r);
        if r > tol {
            failures += 1;
        }
    }
    SuiteReport { name: "determinant-identity", trials, failures, worst, tolerance: tol }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass_with_fixed_seed() {
        for report in run_all(0xC0FFEE, 60) {
            assert!(report.passed(), "{}", report.line());
        }
    }

    #[test]
    fn suites_are_deterministic() {
        let a = run_suite("unitarity-system", 7, 20).unwrap();
        let b = run_suite("unitarity-system", 7, 20).unwrap();
        assert_eq!(a.worst.to_bits(), b.worst.to_bits());
    }

    #[test]
    fn unknown_suite_is_none() {
        assert!(run_suite("nope", 0, 1).is_none());
    }

    #[test]
    fn degenerate_factory_is_degenerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            let (b, zeta) = random_degenerate(&mut rng, 4);
            assert!(b.is_degenerate());
            let corner = b.corner();
            assert!(((&corner.interior * &zeta) - &zeta).norm() < 1e-10);
        }
    }
}

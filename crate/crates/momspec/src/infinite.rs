//! Domains with infinitely many components: open gap intervals inside
//! `(0,1)` plus the two half-lines, handled by finite truncation.
//!
//! For a diagonal boundary operator `diag(e(θ₀), e(θ₁), …)` on ℓ² the
//! embedded point spectrum is the union of the Dirac combs
//! `θ_k/ℓ_k + (1/ℓ_k)·ℤ` over the gap lengths `ℓ_k`, with the multiplicity
//! of `λ` counting the gaps whose comb contains it. Index 0 belongs to the
//! glued half-line pair and contributes the phase `θ₀` only, no comb.

use crate::error::{Error, Result};
use crate::intervals::IntervalConfig;
use crate::pointspec::{PointSpectrum, Progression};

/// A truncated infinite configuration: disjoint open gaps `(r_k, s_k)`
/// inside `(0, 1)`.
#[derive(Debug, Clone)]
pub struct InfiniteConfig {
    gaps: Vec<(f64, f64)>,
}

impl InfiniteConfig {
    pub fn new(mut gaps: Vec<(f64, f64)>) -> Result<Self> {
        gaps.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let mut prev_end = 0.0;
        for &(r, s) in &gaps {
            if r >= s || !(s - r).is_finite() || r < prev_end - 1e-15 || s > 1.0 + 1e-15 {
                return Err(Error::InvalidInterlacing(format!(
                    "gap ({r}, {s}) not disjoint inside (0, 1)"
                )));
            }
            prev_end = s;
        }
        Ok(Self { gaps })
    }

    /// Middle-thirds construction: all gap intervals
    /// `(a, a + 3^{−(j+1)})` for levels `0 ≤ j ≤ level`, where `a` runs
    /// over `0.x₁…x_j1` in base 3 with digits `x ∈ {0, 2}`; `2^j` gaps
    /// at level `j`.
    pub fn cantor_complement(level: u32) -> Self {
        let mut gaps = Vec::new();
        for j in 0..=level {
            let width = 3f64.powi(-(j as i32 + 1));
            for mask in 0..(1u64 << j) {
                let mut a = 0.0;
                for bit in 0..j {
                    if mask >> bit & 1 == 1 {
                        a += 2.0 * 3f64.powi(-(bit as i32 + 1));
                    }
                }
                a += width;
                gaps.push((a, a + width));
            }
        }
        Self::new(gaps).expect("cantor gaps are disjoint")
    }

    /// Dyadic lengths `ℓ_k = 2^{−k}`, `k = 1..=count`, packed left to
    /// right. The lengths alone sum to `1 − 2^{−count}`, so the separating
    /// walls share the leftover `2^{−count}` evenly.
    pub fn dyadic(count: u32) -> Self {
        let wall = 2f64.powi(-(count as i32 + 1)) / count.max(1) as f64;
        let mut gaps = Vec::new();
        let mut left = 0.0;
        for k in 1..=count {
            let l = 2f64.powi(-(k as i32));
            gaps.push((left, left + l));
            left += l + wall;
        }
        Self::new(gaps).expect("dyadic gaps are disjoint")
    }

    pub fn gaps(&self) -> &[(f64, f64)] {
        &self.gaps
    }

    pub fn lengths(&self) -> Vec<f64> {
        self.gaps.iter().map(|(r, s)| s - r).collect()
    }

    pub fn total_length(&self) -> f64 {
        self.lengths().iter().sum()
    }

    /// View the truncation as a finite exterior-domain configuration: the
    /// removed intervals are the closed walls of `[0,1]` between gaps.
    pub fn to_interval_config(&self) -> Result<IntervalConfig> {
        let mut betas = vec![0.0];
        let mut alphas = Vec::new();
        for &(r, s) in &self.gaps {
            alphas.push(r);
            betas.push(s);
        }
        alphas.push(1.0);
        // Degenerate walls (gap touching 0, 1, or its neighbour) would
        // break strict interlacing.
        IntervalConfig::new(betas, alphas)
    }
}

/// Phases `θ_k` of the diagonal boundary operator; `θ₀` belongs to the
/// glued half-lines.
#[derive(Debug, Clone)]
pub enum PhaseSpec {
    Zero,
    Constant(f64),
    List(Vec<f64>),
}

impl PhaseSpec {
    fn at(&self, k: usize) -> f64 {
        match self {
            PhaseSpec::Zero => 0.0,
            PhaseSpec::Constant(t) => *t,
            PhaseSpec::List(v) => v.get(k).copied().unwrap_or(0.0),
        }
    }
}

/// Point spectrum of the diagonal boundary operator on the truncation:
/// the union over gaps `k ≥ 1` of `θ_k/ℓ_k + (1/ℓ_k)·ℤ`, multiplicities by
/// membership counting with tolerance 1e−9 on `λℓ_k − θ_k`.
///
/// The multiplicity reported at λ = 0 (for zero phases) equals the
/// truncation count and grows without bound as the truncation is refined.
pub fn diagonal_point_spectrum(
    cfg: &InfiniteConfig,
    phases: &PhaseSpec,
    window: (f64, f64),
) -> Result<PointSpectrum> {
    let (lo, hi) = window;
    if lo >= hi || !(hi - lo).is_finite() {
        return Err(Error::Dimension(format!("bad window [{lo}, {hi}]")));
    }
    let lengths = cfg.lengths();
    let progressions: Vec<Progression> = lengths
        .iter()
        .enumerate()
        .map(|(i, &l)| Progression { offset: phases.at(i + 1) / l, step: 1.0 / l })
        .collect();

    let mut members: Vec<f64> = Vec::new();
    for p in &progressions {
        members.extend(p.members(lo, hi));
    }
    members.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut points: Vec<(f64, usize)> = Vec::new();
    for x in members {
        match points.last_mut() {
            Some((y, m)) if (x - *y).abs() <= 1e-9 => *m += 1,
            _ => points.push((x, 1)),
        }
    }
    // Re-count by the membership criterion |λℓ_k − θ_k − round| ≤ 1e−9 so
    // near-collisions across combs are resolved the same way throughout.
    for (lam, mult) in points.iter_mut() {
        let count = lengths
            .iter()
            .enumerate()
            .filter(|(i, &l)| {
                let t = *lam * l - phases.at(i + 1);
                (t - t.round()).abs() <= 1e-9
            })
            .count();
        *mult = count.max(*mult);
    }
    Ok(PointSpectrum { window, points, progressions: Some(progressions), collisions: Vec::new() })
}

/// Eigenvalues `2^k·θ_k` contributed by the dyadic-lengths example, for
/// `k ≤ truncation`, restricted to the window, with their distances to the
/// probe target. When `2^kθ_k → λ₀` these accumulate at `λ₀`, giving dense
/// point spectrum in the limit of suitable phase choices.
pub fn dense_spectrum_probe(
    phases: &[f64],
    target: f64,
    window: (f64, f64),
    truncation: usize,
) -> Vec<(usize, f64, f64)> {
    let mut out = Vec::new();
    for (idx, &theta) in phases.iter().enumerate().take(truncation) {
        let k = idx + 1;
        let lam = 2f64.powi(k as i32) * theta;
        if lam >= window.0 && lam <= window.1 {
            out.push((k, lam, (lam - target).abs()));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cantor_levels() {
        let c0 = InfiniteConfig::cantor_complement(0);
        assert_eq!(c0.gaps(), &[(1.0 / 3.0, 2.0 / 3.0)]);
        let c1 = InfiniteConfig::cantor_complement(1);
        let got = c1.gaps();
        assert_eq!(got.len(), 3);
        assert!((got[0].0 - 1.0 / 9.0).abs() < 1e-12 && (got[0].1 - 2.0 / 9.0).abs() < 1e-12);
        assert!((got[1].0 - 1.0 / 3.0).abs() < 1e-12);
        assert!((got[2].0 - 7.0 / 9.0).abs() < 1e-12 && (got[2].1 - 8.0 / 9.0).abs() < 1e-12);
        // Total removed length approaches 1 geometrically.
        for j in 0..8 {
            let c = InfiniteConfig::cantor_complement(j);
            let expect = 1.0 - (2.0f64 / 3.0).powi(j as i32 + 1);
            assert!((c.total_length() - expect).abs() < 1e-12, "level {j}");
            assert_eq!(c.gaps().len(), (1usize << (j + 1)) - 1);
        }
    }

    #[test]
    fn cantor_multiplicity_law() {
        // Multiples of 3^k but not 3^{k+1} have multiplicity 2^k − 1.
        let cfg = InfiniteConfig::cantor_complement(6);
        let sp = diagonal_point_spectrum(&cfg, &PhaseSpec::Zero, (-30.0, 30.0)).unwrap();
        let mult_at = |x: f64| -> usize {
            sp.points.iter().find(|(y, _)| (y - x).abs() < 1e-9).map(|(_, m)| *m).unwrap_or(0)
        };
        assert_eq!(mult_at(3.0), 1);
        assert_eq!(mult_at(6.0), 1);
        assert_eq!(mult_at(9.0), 3);
        assert_eq!(mult_at(-9.0), 3);
        assert_eq!(mult_at(27.0), 7);
        assert_eq!(mult_at(-27.0), 7);
        assert_eq!(mult_at(12.0), 1);
        assert_eq!(mult_at(18.0), 3);
        // Nothing off 3ℤ.
        assert!(sp.points.iter().all(|(x, _)| {
            let t = x / 3.0;
            (t - t.round()).abs() < 1e-9
        }));
        // λ = 0 multiplicity equals the truncation count.
        assert_eq!(mult_at(0.0), cfg.gaps().len());
    }

    #[test]
    fn dyadic_multiplicity_law() {
        // Eigenvalues in 2^k·ℤ_odd have multiplicity k; the union is 2ℤ.
        let cfg = InfiniteConfig::dyadic(8);
        let sp = diagonal_point_spectrum(&cfg, &PhaseSpec::Zero, (-100.0, 100.0)).unwrap();
        let mult_at = |x: f64| -> usize {
            sp.points.iter().find(|(y, _)| (y - x).abs() < 1e-9).map(|(_, m)| *m).unwrap_or(0)
        };
        for k in 1..=5 {
            let lam = 2f64.powi(k) * 3.0; // odd multiple 3 of 2^k
            assert_eq!(mult_at(lam), k as usize, "λ = 3·2^{k}");
            assert_eq!(mult_at(2f64.powi(k)), k as usize);
        }
        // The set is 2ℤ: odd integers are absent.
        assert_eq!(mult_at(3.0), 0);
        assert!(sp.points.iter().all(|(x, _)| {
            let t = x / 2.0;
            (t - t.round()).abs() < 1e-9
        }));
        // Counting density of the underlying set stays 1/2 (the combs nest
        // into 2ℤ instead of accumulating new points).
        let set_count = sp.points.iter().filter(|(x, _)| (-50.0..50.0).contains(x)).count();
        assert!((set_count as f64 / 100.0 - 0.5).abs() < 0.02);
    }

    #[test]
    fn irrational_ratios_give_simple_spectrum() {
        // Lengths with pairwise irrational ratios: every nonzero eigenvalue
        // in the window is simple.
        let cfg = InfiniteConfig::new(vec![
            (0.0, 1.0 / core::f64::consts::PI),
            (0.4, 0.4 + 1.0 / core::f64::consts::E),
            (0.85, 0.85 + 0.1 / 2f64.sqrt()),
        ])
        .unwrap();
        let sp = diagonal_point_spectrum(&cfg, &PhaseSpec::Zero, (-40.0, 40.0)).unwrap();
        for (lam, mult) in &sp.points {
            if lam.abs() > 1e-9 {
                assert_eq!(*mult, 1, "λ = {lam}");
            }
        }
    }

    #[test]
    fn truncation_is_monotone() {
        // Refining the truncation only adds points and never lowers an
        // existing multiplicity.
        let coarse = InfiniteConfig::cantor_complement(3);
        let fine = InfiniteConfig::cantor_complement(5);
        let window = (-30.0, 30.0);
        let sp_c = diagonal_point_spectrum(&coarse, &PhaseSpec::Zero, window).unwrap();
        let sp_f = diagonal_point_spectrum(&fine, &PhaseSpec::Zero, window).unwrap();
        for (lam, mult) in &sp_c.points {
            let found = sp_f.points.iter().find(|(y, _)| (y - lam).abs() < 1e-9);
            let (_, fine_mult) = found.expect("refinement keeps points");
            assert!(fine_mult >= mult);
        }
    }

    #[test]
    fn phase_shifts_move_combs() {
        let cfg = InfiniteConfig::new(vec![(0.0, 0.5), (0.6, 0.85)]).unwrap();
        let theta = 0.3;
        let sp =
            diagonal_point_spectrum(&cfg, &PhaseSpec::List(vec![0.0, theta, 0.0]), (-5.0, 5.0))
                .unwrap();
        // Gap 1 comb: θ/ℓ + (1/ℓ)ℤ with ℓ = 1/2.
        let target = theta / 0.5;
        assert!(sp.points.iter().any(|(x, _)| (x - target).abs() < 1e-9));
    }

    #[test]
    fn dense_probe_distances() {
        // θ_k = λ₀·2^{−k} hits λ₀ at every level; adding 2^{−2k} offsets by 2^{−k}.
        let lam0 = 0.7;
        let k_max = 10;
        let exact: Vec<f64> = (1..=k_max).map(|k| lam0 * 2f64.powi(-(k as i32))).collect();
        let probe = dense_spectrum_probe(&exact, lam0, (0.0, 2.0), k_max);
        assert_eq!(probe.len(), k_max);
        for (_, lam, dist) in &probe {
            assert!((lam - lam0).abs() < 1e-12);
            assert!(*dist < 1e-12);
        }
        let offset: Vec<f64> = (1..=k_max)
            .map(|k| lam0 * 2f64.powi(-(k as i32)) + 2f64.powi(-2 * k as i32))
            .collect();
        let probe = dense_spectrum_probe(&offset, lam0, (0.0, 2.0), k_max);
        for (k, _, dist) in &probe {
            assert!((dist - 2f64.powi(-(*k as i32))).abs() < 1e-12, "k={k} dist={dist}");
        }
        // Distances shrink to 0 as the truncation grows.
        assert!(probe.last().unwrap().2 < probe.first().unwrap().2);
        // Non-integer pairwise phase differences mean simple eigenvalues:
        // the probe eigenvalues are pairwise distinct here.
        for i in 0..probe.len() {
            for j in i + 1..probe.len() {
                assert!((probe[i].1 - probe[j].1).abs() > 1e-12);
            }
        }
    }

    #[test]
    fn truncated_config_embeds_as_intervals() {
        let cfg = InfiniteConfig::new(vec![(0.1, 0.3), (0.5, 0.8)]).unwrap();
        let ic = cfg.to_interval_config().unwrap();
        assert_eq!(ic.n(), 3);
        // Bounded components of the finite picture are exactly the gaps.
        let lens = ic.lengths();
        assert!((lens[0] - 0.2).abs() < 1e-12);
        assert!((lens[1] - 0.3).abs() < 1e-12);
    }

    #[test]
    fn contractive_corner_truncation_has_empty_spectrum() {
        // A boundary condition whose corner has norm < 1 on the truncated
        // configuration: no embedded point spectrum.
        use crate::boundary::BoundaryMatrix;
        use crate::pointspec::find_point_spectrum;
        let cfg = InfiniteConfig::new(vec![(0.1, 0.3), (0.5, 0.8)]).unwrap();
        let ic = cfg.to_interval_config().unwrap();
        // The pass-through template with a genuine SU(2) block keeps the
        // corner spectrum inside the open disc, so no real zeros appear.
        let b = BoundaryMatrix::su2_case1(
            crate::C64::new(0.6, 0.0),
            crate::C64::new(0.8, 0.0),
        )
        .unwrap();
        let sp = find_point_spectrum(&ic, &b, (-12.0, 12.0)).unwrap();
        assert!(sp.points.is_empty());
    }
}

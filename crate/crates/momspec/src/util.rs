//! Shared numeric helpers: unit phases, complex linear algebra wrappers,
//! random unitaries for the property suites, and a small thread pool.

use crate::C64;
use nalgebra::{DMatrix, DVector};
use rand::Rng;

pub const TAU: f64 = std::f64::consts::TAU;

/// `e(θ) = exp(2πiθ)` for real θ. The basic character of the whole theory.
pub fn e(theta: f64) -> C64 {
    C64::new(0.0, TAU * theta).exp()
}

/// `e(zτ) = exp(2πi z τ)` for complex spectral parameter `z` and real `τ`.
pub fn ez(z: C64, tau: f64) -> C64 {
    (C64::new(0.0, TAU) * z * tau).exp()
}

/// Frobenius norm of `M*M − I`, the unitarity defect.
pub fn unitarity_residual(m: &DMatrix<C64>) -> f64 {
    let n = m.ncols();
    let prod = m.adjoint() * m;
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            let expect = if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
            s += (prod[(i, j)] - expect).norm_sqr();
        }
    }
    s.sqrt()
}

/// Singular values of a complex matrix, descending.
pub fn singular_values(m: &DMatrix<C64>) -> Vec<f64> {
    let svd = m.clone().svd(false, false);
    let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    sv
}

/// Smallest singular value.
pub fn sigma_min(m: &DMatrix<C64>) -> f64 {
    singular_values(m).last().copied().unwrap_or(1.0)
}

/// Numerical kernel: right-singular vectors whose singular value is below
/// `tol`. Returned as orthonormal columns.
pub fn kernel_basis(m: &DMatrix<C64>, tol: f64) -> Vec<DVector<C64>> {
    let k = m.ncols();
    if k == 0 {
        return Vec::new();
    }
    let svd = m.clone().svd(false, true);
    let vt = svd.v_t.expect("svd requested v_t");
    let mut out = Vec::new();
    for (i, s) in svd.singular_values.iter().enumerate() {
        if *s < tol {
            let row = vt.row(i);
            let v = DVector::from_iterator(k, row.iter().map(|c| c.conj()));
            out.push(v);
        }
    }
    out
}

/// Least-squares solve `M x = b` through the SVD pseudo-inverse,
/// truncating singular values below `tol`. Returns `(x, residual_norm)`.
pub fn pinv_solve(m: &DMatrix<C64>, b: &DVector<C64>, tol: f64) -> (DVector<C64>, f64) {
    let k = m.ncols();
    if k == 0 {
        return (DVector::zeros(0), b.norm());
    }
    let svd = m.clone().svd(true, true);
    let u = svd.u.as_ref().expect("svd u");
    let vt = svd.v_t.as_ref().expect("svd v_t");
    let mut x = DVector::zeros(k);
    for (i, s) in svd.singular_values.iter().enumerate() {
        if *s >= tol {
            let coef: C64 = u.column(i).iter().zip(b.iter()).map(|(ui, bi)| ui.conj() * bi).sum();
            let dir = DVector::from_iterator(k, vt.row(i).iter().map(|c| c.conj()));
            x += dir * (coef / C64::from(*s));
        }
    }
    let residual = (m * &x - b).norm();
    (x, residual)
}

/// Condition number σ_max/σ_min (∞ when singular).
pub fn condition_number(m: &DMatrix<C64>) -> f64 {
    let sv = singular_values(m);
    match (sv.first(), sv.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        _ => f64::INFINITY,
    }
}

/// Standard-normal complex entries (Ginibre ensemble).
pub fn random_complex_matrix<R: Rng>(rng: &mut R, n: usize) -> DMatrix<C64> {
    DMatrix::from_fn(n, n, |_, _| {
        // Box-Muller; plain uniforms would do but this keeps the QR well
        // conditioned for Haar-like sampling.
        let u1: f64 = rng.random::<f64>().max(1e-12);
        let u2: f64 = rng.random();
        let r = (-2.0 * u1.ln()).sqrt();
        C64::new(r * (TAU * u2).cos(), r * (TAU * u2).sin())
    })
}

/// Haar-like random unitary: QR of a Ginibre matrix with the R-diagonal
/// phases absorbed into Q.
pub fn random_unitary<R: Rng>(rng: &mut R, n: usize) -> DMatrix<C64> {
    let g = random_complex_matrix(rng, n);
    let qr = g.qr();
    let q = qr.q();
    let r = qr.r();
    let mut phases = DMatrix::zeros(n, n);
    for i in 0..n {
        let d = r[(i, i)];
        phases[(i, i)] = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
    }
    q * phases
}

/// Parallel map over an index range with the thread count taken from
/// `MOMSPEC_THREADS` (default 1). Results are returned in index order, so
/// output is deterministic regardless of the thread count.
pub fn parallel_map<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let threads = std::env::var("MOMSPEC_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&t| t >= 1)
        .unwrap_or(1);
    parallel_map_with(threads, len, f)
}

/// [`parallel_map`] with an explicit thread count.
pub fn parallel_map_with<T, F>(threads: usize, len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    if threads <= 1 || len < 2 * threads {
        return (0..len).map(f).collect();
    }
    let chunk = len.div_ceil(threads);
    let mut out: Vec<Option<T>> = (0..len).map(|_| None).collect();
    let slots: Vec<(usize, &mut [Option<T>])> = {
        let mut rest = out.as_mut_slice();
        let mut acc = Vec::new();
        let mut start = 0;
        while !rest.is_empty() {
            let take = chunk.min(rest.len());
            let (head, tail) = rest.split_at_mut(take);
            acc.push((start, head));
            start += take;
            rest = tail;
        }
        acc
    };
    std::thread::scope(|scope| {
        for (start, slot) in slots {
            let f = &f;
            scope.spawn(move || {
                for (off, cell) in slot.iter_mut().enumerate() {
                    *cell = Some(f(start + off));
                }
            });
        }
    });
    out.into_iter().map(|x| x.unwrap()).collect()
}

/// Round-trip-safe float formatting for CSV output (17 significant digits).
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn phase_basics() {
        assert!((e(0.0) - C64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((e(0.5) + C64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((e(0.25) - C64::new(0.0, 1.0)).norm() < 1e-15);
        let z = C64::new(0.3, -0.2);
        assert!((ez(z, 2.0) - (C64::new(0.0, TAU) * z * 2.0).exp()).norm() < 1e-15);
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..6 {
            let u = random_unitary(&mut rng, n);
            assert!(unitarity_residual(&u) < 1e-12, "n={n}");
        }
    }

    #[test]
    fn kernel_and_pinv() {
        // M = diag(1, 0) has kernel e2; pinv-solve of b=(2,3) gives (2,0), residual 3.
        let m = DMatrix::from_row_slice(2, 2, &[
            C64::new(1.0, 0.0), C64::new(0.0, 0.0),
            C64::new(0.0, 0.0), C64::new(0.0, 0.0),
        ]);
        let ker = kernel_basis(&m, 1e-10);
        assert_eq!(ker.len(), 1);
        assert!((ker[0][0].norm() - 0.0).abs() < 1e-12);
        assert!((ker[0][1].norm() - 1.0).abs() < 1e-12);
        let b = DVector::from_vec(vec![C64::new(2.0, 0.0), C64::new(3.0, 0.0)]);
        let (x, res) = pinv_solve(&m, &b, 1e-10);
        assert!((x[0] - C64::new(2.0, 0.0)).norm() < 1e-12);
        assert!(x[1].norm() < 1e-12);
        assert!((res - 3.0).abs() < 1e-12);
    }

    #[test]
    fn parallel_map_matches_serial() {
        let serial: Vec<usize> = (0..100).map(|i| i * i).collect();
        let par = parallel_map(100, |i| i * i);
        assert_eq!(serial, par);
        for threads in [2, 3, 7, 16] {
            let par = parallel_map_with(threads, 101, |i| i * 3 + 1);
            let serial: Vec<usize> = (0..101).map(|i| i * 3 + 1).collect();
            assert_eq!(serial, par, "threads={threads}");
        }
    }
}

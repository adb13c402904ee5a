//! Hermitian eigenvalue decomposition via cyclic Jacobi sweeps.
//!
//! Every matrix in this crate has dimension d ≤ 8, where Jacobi iteration
//! is simple, unconditionally stable and accurate to machine precision, so
//! no LAPACK-style dependency is needed. Complex rotations annihilate one
//! off-diagonal entry at a time; the accumulated rotations give the
//! eigenvectors.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::matrix::ComplexMatrix;

/// Relative asymmetry tolerated before refusing to treat a matrix as
/// Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Eigenvalues (ascending) and matching orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    pub values: Vec<f64>,
    /// vectors[k] is the eigenvector for values[k].
    pub vectors: Vec<Vec<Complex64>>,
}

/// Full spectrum of a Hermitian matrix, ascending.
pub fn hermitian_spectrum(m: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(hermitian_eig(m)?.values)
}

/// Eigen-decomposition of a Hermitian matrix.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<HermitianEig> {
    let scale = 1.0 + m.frobenius_norm();
    let defect = m.hermitian_defect();
    if defect > HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian {
            defect,
            tol: HERMITIAN_TOL * scale,
        });
    }

    let d = m.dim();
    // Work on the exactly-Hermitian average so rounding in the input cannot
    // leak into complex eigenvalues.
    let mut a = m.add(&m.adjoint()).scale_re(0.5);
    let mut v = ComplexMatrix::identity(d);

    let norm = a.frobenius_norm().max(1.0);
    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..d {
            for q in (p + 1)..d {
                off += a.get(p, q).norm_sqr();
            }
        }
        if off.sqrt() <= 1e-15 * norm {
            break;
        }
        for p in 0..d {
            for q in (p + 1)..d {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&j, &k| a.get(j, j).re.total_cmp(&a.get(k, k).re));
    let values = order.iter().map(|&j| a.get(j, j).re).collect();
    let vectors = order
        .iter()
        .map(|&col| (0..d).map(|row| v.get(row, col)).collect())
        .collect();
    Ok(HermitianEig { values, vectors })
}

/// Annihilates a[p][q] with a complex plane rotation, updating a and the
/// accumulated eigenvector matrix v.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a.get(p, q);
    let r = apq.norm();
    if r <= f64::MIN_POSITIVE {
        return;
    }
    let phase = apq / r; // e^{iφ} with a[p][q] = r·e^{iφ}
    let tau = (a.get(q, q).re - a.get(p, p).re) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let d = a.dim();
    // Column update: A ← A·U with U = [[c, s·e^{iφ}], [−s·e^{−iφ}, c]] on
    // the (p,q) coordinates.
    let se_pos = phase * s; // s·e^{iφ}
    let se_neg = phase.conj() * s; // s·e^{−iφ}
    for row in 0..d {
        let ap = a.get(row, p);
        let aq = a.get(row, q);
        a.set(row, p, ap * c - aq * se_neg);
        a.set(row, q, ap * se_pos + aq * c);
    }
    // Row update: A ← U*·A.
    for col in 0..d {
        let ap = a.get(p, col);
        let aq = a.get(q, col);
        a.set(p, col, ap * c - aq * se_pos);
        a.set(q, col, ap * se_neg + aq * c);
    }
    // The pivot is now zero by construction; store that exactly.
    a.set(p, q, Complex64::new(0.0, 0.0));
    a.set(q, p, Complex64::new(0.0, 0.0));

    for row in 0..d {
        let vp = v.get(row, p);
        let vq = v.get(row, q);
        v.set(row, p, vp * c - vq * se_neg);
        v.set(row, q, vp * se_pos + vq * c);
    }
}

/// Spectral (operator) norm, computed as the square root of the largest
/// eigenvalue of M*M.
pub fn spectral_norm(m: &ComplexMatrix) -> f64 {
    let gram = m.adjoint().mul(m);
    let spec = hermitian_spectrum(&gram).expect("M*M is Hermitian by construction");
    spec.last().copied().unwrap_or(0.0).max(0.0).sqrt()
}

//! Dense complex matrices of small fixed dimension.
//!
//! Everything in this crate lives in coefficient dimension d ∈ {1, 2, 4}
//! (occasionally 8 in tests), so a simple row-major `Vec<Complex64>` with
//! O(d³) algorithms is the right tool; no external linear-algebra crate is
//! pulled in.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Dense d×d complex matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "dimension must be positive");
        Self {
            dim,
            entries: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for k in 0..dim {
            m.set(k, k, C64::new(1.0, 0.0));
        }
        m
    }

    /// Builds from a row-major slice of length dim².
    pub fn from_entries(dim: usize, entries: &[C64]) -> Self {
        assert_eq!(entries.len(), dim * dim, "need dim² entries");
        Self {
            dim,
            entries: entries.to_vec(),
        }
    }

    /// Builds from nested rows of real numbers.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Self {
        let dim = rows.len();
        let mut m = Self::zeros(dim);
        for (j, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), dim, "row {j} has wrong length");
            for (k, &x) in row.iter().enumerate() {
                m.set(j, k, C64::new(x, 0.0));
            }
        }
        m
    }

    /// Scalar c as a 1×1 matrix.
    pub fn scalar(c: C64) -> Self {
        Self::from_entries(1, &[c])
    }

    /// Diagonal matrix from the given diagonal.
    pub fn diag(d: &[C64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (k, &c) in d.iter().enumerate() {
            m.set(k, k, c);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, j: usize, k: usize) -> C64 {
        self.entries[j * self.dim + k]
    }

    #[inline]
    pub fn set(&mut self, j: usize, k: usize, v: C64) {
        self.entries[j * self.dim + k] = v;
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let entries: Vec<C64> = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Self {
            dim: self.dim,
            entries,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let entries: Vec<C64> = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        Self {
            dim: self.dim,
            entries,
        }
    }

    pub fn scale(&self, c: C64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|a| a * c).collect(),
        }
    }

    pub fn scale_re(&self, x: f64) -> Self {
        self.scale(C64::new(x, 0.0))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let d = self.dim;
        let mut out = Self::zeros(d);
        for j in 0..d {
            for l in 0..d {
                let a = self.get(j, l);
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for k in 0..d {
                    out.entries[j * d + k] += a * other.get(l, k);
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let d = self.dim;
        let mut out = Self::zeros(d);
        for j in 0..d {
            for k in 0..d {
                out.set(j, k, self.get(k, j).conj());
            }
        }
        out
    }

    /// Entrywise complex conjugation (conjugation by the canonical real
    /// structure on ℂᵈ in the standard basis).
    pub fn conj_entrywise(&self) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|a| a.conj()).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let d = self.dim;
        let mut out = Self::zeros(d);
        for j in 0..d {
            for k in 0..d {
                out.set(j, k, self.get(k, j));
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim);
        let d = self.dim;
        (0..d)
            .map(|j| (0..d).map(|k| self.get(j, k) * v[k]).sum())
            .collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Largest entrywise absolute value.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    /// ‖M − M*‖_F, the deviation from Hermitian symmetry.
    pub fn hermitian_defect(&self) -> f64 {
        self.sub(&self.adjoint()).frobenius_norm()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_defect() <= tol * (1.0 + self.frobenius_norm())
    }

    /// ‖MM* − 1‖_F.
    pub fn unitary_defect(&self) -> f64 {
        self.mul(&self.adjoint())
            .sub(&Self::identity(self.dim))
            .frobenius_norm()
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitary_defect() <= tol
    }

    /// max(‖M − M*‖_F, ‖M² − M‖_F).
    pub fn projection_defect(&self) -> f64 {
        let idem = self.mul(self).sub(self).frobenius_norm();
        self.hermitian_defect().max(idem)
    }

    pub fn is_projection(&self, tol: f64) -> bool {
        self.projection_defect() <= tol
    }

    /// Requires the projection invariant, returning the matrix for chaining.
    pub fn expect_projection(&self, tol: f64) -> Result<&Self> {
        let defect = self.projection_defect();
        if defect <= tol {
            Ok(self)
        } else {
            Err(Error::NotProjection { defect, tol })
        }
    }

    /// True when every entry is real (exactly zero imaginary part).
    pub fn is_real(&self) -> bool {
        self.entries.iter().all(|a| a.im == 0.0)
    }
}

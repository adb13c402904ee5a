//! Szegő-kernel machinery and Hankel quadratic forms.
//!
//! The Hankel form of a Carleson measure μ acts on Hardy functions through
//! their imaginary-axis values, ⟨f, H_μ g⟩ = ∫ ⟨f(iλ), dμ(λ) g(iλ)⟩, while a
//! symbol h realizes the same form through boundary values,
//! ⟨Q_z v, H_h Q_ξ w⟩ = ∫ conj(Q_z(x))·⟨v, h(x) w⟩·Q_ξ(−x) dx. Comparing the
//! two routes on kernel vectors is the workhorse verification that h is a
//! symbol of H_μ.
//!
//! Strict positivity of the form is handled honestly: a strictly positive
//! density on a grid sub-interval certifies it *at that resolution*,
//! finitely many atoms refute it via Blaschke products, and everything else
//! stays inconclusive with Gram evidence attached.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::measure::CarlesonMeasure;
use crate::numerics::{
    hermitian_eig, hermitian_spectrum, integrate_halfline, integrate_realline, ComplexMatrix,
    QuadratureSpec,
};
use crate::symbol::Symbol;

/// Szegő kernel of the upper half-plane: Q_ξ(z) = (1/2π)·i/(z − ξ̄).
pub fn szego_eval(xi: Complex64, z: Complex64) -> Complex64 {
    Complex64::new(0.0, 1.0 / (2.0 * PI)) / (z - xi.conj())
}

/// A kernel vector Q_ξ·v with ξ in the open upper half-plane and v ≠ 0.
#[derive(Debug, Clone)]
pub struct KernelVector {
    pub xi: Complex64,
    pub v: Vec<Complex64>,
}

impl KernelVector {
    pub fn new(xi: Complex64, v: Vec<Complex64>) -> Result<Self> {
        if !(xi.im > 0.0) {
            return Err(Error::DomainError(format!(
                "kernel point {xi} must lie in the open upper half-plane"
            )));
        }
        let norm_sq: f64 = v.iter().map(|c| c.norm_sqr()).sum();
        if !(norm_sq > 0.0) {
            return Err(Error::BadParams("kernel coefficient vector must be nonzero".into()));
        }
        Ok(Self { xi, v })
    }

    pub fn dim(&self) -> usize {
        self.v.len()
    }
}

type VectorFn = dyn Fn(f64) -> Vec<Complex64> + Send + Sync;

/// Boundary/axis samples of an H² function: axis_eval(λ) = f(iλ) and
/// optionally boundary_eval(x) = f(x).
#[derive(Clone)]
pub struct HardySample {
    pub dim: usize,
    pub axis_eval: Arc<VectorFn>,
    pub boundary_eval: Option<Arc<VectorFn>>,
}

impl HardySample {
    pub fn from_fn<F>(dim: usize, axis_eval: F) -> Self
    where
        F: Fn(f64) -> Vec<Complex64> + Send + Sync + 'static,
    {
        Self {
            dim,
            axis_eval: Arc::new(axis_eval),
            boundary_eval: None,
        }
    }

    /// Exact samples of the kernel vector Q_ξ·v.
    pub fn from_kernel(kv: &KernelVector) -> Self {
        let dim = kv.dim();
        let axis = kv.clone();
        let boundary = kv.clone();
        Self {
            dim,
            axis_eval: Arc::new(move |lam: f64| {
                let q = szego_eval(axis.xi, Complex64::new(0.0, lam));
                axis.v.iter().map(|c| c * q).collect()
            }),
            boundary_eval: Some(Arc::new(move |x: f64| {
                let q = szego_eval(boundary.xi, Complex64::new(x, 0.0));
                boundary.v.iter().map(|c| c * q).collect()
            })),
        }
    }

    /// The same sample with axis values multiplied by e^{−tλ} (the
    /// compressed one-parameter semigroup on the imaginary axis).
    pub fn damped(&self, t: f64) -> Self {
        let inner = self.axis_eval.clone();
        Self {
            dim: self.dim,
            axis_eval: Arc::new(move |lam: f64| {
                let factor = (-t * lam).exp();
                inner(lam)
                    .into_iter()
                    .map(|c| c * factor)
                    .collect()
            }),
            boundary_eval: None,
        }
    }
}

fn inner(v: &[Complex64], w: &[Complex64]) -> Complex64 {
    v.iter().zip(w).map(|(a, b)| a.conj() * b).sum()
}

/// ⟨f, H_μ g⟩ = ∫ ⟨f(iλ), dμ(λ) g(iλ)⟩ by quadrature plus atom sum.
pub fn hankel_form_measure(
    mu: &CarlesonMeasure,
    f: &HardySample,
    g: &HardySample,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    if f.dim != mu.dim() || g.dim != mu.dim() {
        return Err(Error::DimensionMismatch {
            expected: mu.dim(),
            got: f.dim.max(g.dim),
        });
    }
    let mut total = Complex64::new(0.0, 0.0);
    if mu.density().is_some() {
        let integrand = |lam: f64| {
            let fv = (f.axis_eval)(lam);
            let gv = (g.axis_eval)(lam);
            let rho_g = mu.density_at(lam).apply(&gv);
            ComplexMatrix::scalar(inner(&fv, &rho_g))
        };
        total += integrate_halfline(&integrand, spec)?.get(0, 0);
    }
    for atom in mu.atoms() {
        let fv = (f.axis_eval)(atom.lambda);
        let gv = (g.axis_eval)(atom.lambda);
        total += inner(&fv, &atom.weight.apply(&gv));
    }
    Ok(total)
}

/// ⟨Q_z v, H_h Q_ξ w⟩ = ∫ conj(Q_z(x))·⟨v, h(x) w⟩·Q_ξ(−x) dx, with the
/// declared singular point x = 0.
pub fn hankel_form_symbol(
    h: &Symbol,
    f: &KernelVector,
    g: &KernelVector,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    if f.dim() != h.dim() || g.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            got: f.dim().max(g.dim()),
        });
    }
    let integrand = |x: f64| -> ComplexMatrix {
        let qf = szego_eval(f.xi, Complex64::new(x, 0.0)).conj();
        let qg = szego_eval(g.xi, Complex64::new(-x, 0.0));
        let hw = h
            .eval(x)
            .expect("symbol evaluation failed inside quadrature")
            .apply(&g.v);
        ComplexMatrix::scalar(qf * inner(&f.v, &hw) * qg)
    };
    Ok(integrate_realline(&integrand, &[0.0], spec)?.get(0, 0))
}

/// max over sample pairs of |form_symbol − form_measure|.
pub fn verify_symbol(
    mu: &CarlesonMeasure,
    h: &Symbol,
    samples: &[(KernelVector, KernelVector)],
    spec: &QuadratureSpec,
) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::BadParams("verify_symbol needs at least one sample pair".into()));
    }
    let mut worst = 0.0f64;
    for (f, g) in samples {
        let by_symbol = hankel_form_symbol(h, f, g, spec)?;
        let by_measure =
            hankel_form_measure(mu, &HardySample::from_kernel(f), &HardySample::from_kernel(g), spec)?;
        worst = worst.max((by_symbol - by_measure).norm());
    }
    Ok(worst)
}

/// Default kernel sample points: iλ with λ log-spaced in [10⁻¹, 10¹] plus
/// the generic points 1+i and −2+i/2, coefficient vectors cycling through
/// the standard basis.
pub fn default_kernel_points(dim: usize, count: usize) -> Vec<KernelVector> {
    let mut points = Vec::with_capacity(count);
    let log_count = count.saturating_sub(2).max(1);
    for j in 0..count {
        let xi = if j + 2 == count {
            Complex64::new(1.0, 1.0)
        } else if j + 1 == count {
            Complex64::new(-2.0, 0.5)
        } else {
            let frac = if log_count == 1 {
                0.5
            } else {
                j as f64 / (log_count - 1) as f64
            };
            Complex64::new(0.0, 10.0f64.powf(-1.0 + 2.0 * frac))
        };
        let mut v = vec![Complex64::new(0.0, 0.0); dim];
        v[j % dim] = Complex64::new(1.0, 0.0);
        points.push(KernelVector::new(xi, v).expect("constructed points are valid"));
    }
    points
}

/// Pairs (points[j], points[k]) cycling through a point family, mixing
/// pure-imaginary and generic base points.
pub fn default_sample_pairs(dim: usize, count: usize) -> Vec<(KernelVector, KernelVector)> {
    let points = default_kernel_points(dim, count.max(4));
    (0..count)
        .map(|j| {
            let f = points[j % points.len()].clone();
            let g = points[(j * 2 + 1) % points.len()].clone();
            (f, g)
        })
        .collect()
}

/// Where a Gram compression gets its entries from.
pub enum GramSource<'a> {
    Measure(&'a CarlesonMeasure),
    Symbol(&'a Symbol),
}

/// Finite compression of the Hankel form onto kernel vectors.
#[derive(Debug, Clone, Serialize)]
pub struct GramReport {
    pub min_eig: f64,
    pub max_eig: f64,
    pub dim: usize,
    #[serde(skip)]
    pub matrix: ComplexMatrix,
}

/// G_{jk} = form(points[j], points[k]), Hermitized by averaging with its
/// adjoint, with its spectrum attached.
pub fn gram_matrix(
    source: &GramSource<'_>,
    points: &[KernelVector],
    spec: &QuadratureSpec,
) -> Result<GramReport> {
    if points.is_empty() {
        return Err(Error::BadParams("gram_matrix needs at least one point".into()));
    }
    let n = points.len();
    let mut g = ComplexMatrix::zeros(n);
    for j in 0..n {
        for k in 0..n {
            let val = match source {
                GramSource::Measure(mu) => hankel_form_measure(
                    mu,
                    &HardySample::from_kernel(&points[j]),
                    &HardySample::from_kernel(&points[k]),
                    spec,
                )?,
                GramSource::Symbol(h) => hankel_form_symbol(h, &points[j], &points[k], spec)?,
            };
            g.set(j, k, val);
        }
    }
    let g = g.add(&g.adjoint()).scale_re(0.5);
    let spectrum = hermitian_spectrum(&g)?;
    Ok(GramReport {
        min_eig: *spectrum.first().expect("n ≥ 1"),
        max_eig: *spectrum.last().expect("n ≥ 1"),
        dim: n,
        matrix: g,
    })
}

/// Reproducing-kernel Gram K_{jk} = Q_{ξ_k}(ξ_j)·⟨v_j, v_k⟩.
fn kernel_gram(points: &[KernelVector]) -> ComplexMatrix {
    let n = points.len();
    let mut k_mat = ComplexMatrix::zeros(n);
    for j in 0..n {
        for k in 0..n {
            let q = szego_eval(points[k].xi, points[j].xi);
            k_mat.set(j, k, q * inner(&points[j].v, &points[k].v));
        }
    }
    k_mat
}

/// Largest generalized eigenvalue θ of G c = θ K c, a certified lower bound
/// for the Hankel operator norm of μ. Errors with `SingularGram` when the
/// reproducing-kernel Gram K is conditioned worse than 10¹².
pub fn norm_lower_bound(
    mu: &CarlesonMeasure,
    points: &[KernelVector],
    spec: &QuadratureSpec,
) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::BadParams("norm_lower_bound needs at least one point".into()));
    }
    for (j, a) in points.iter().enumerate() {
        for b in &points[..j] {
            if a.xi == b.xi && a.v == b.v {
                return Err(Error::BadParams("norm_lower_bound points must be distinct".into()));
            }
        }
    }
    let g = gram_matrix(&GramSource::Measure(mu), points, spec)?.matrix;
    let k_mat = kernel_gram(points);
    let k_mat = k_mat.add(&k_mat.adjoint()).scale_re(0.5);
    let k_eig = hermitian_eig(&k_mat)?;
    let max = *k_eig.values.last().expect("n ≥ 1");
    let min = *k_eig.values.first().expect("n ≥ 1");
    if !(min > 0.0) || max / min > 1e12 {
        return Err(Error::SingularGram {
            cond: if min > 0.0 { max / min } else { f64::INFINITY },
        });
    }
    // Whiten: with K = V D V*, the generalized problem becomes the ordinary
    // spectrum of D^{-1/2} V* G V D^{-1/2}.
    let n = points.len();
    let mut w = ComplexMatrix::zeros(n);
    for (col, (val, vec)) in k_eig.values.iter().zip(&k_eig.vectors).enumerate() {
        let scale = 1.0 / val.sqrt();
        for row in 0..n {
            w.set(row, col, vec[row] * scale);
        }
    }
    let m = w.adjoint().mul(&g).mul(&w);
    let m = m.add(&m.adjoint()).scale_re(0.5);
    let spectrum = hermitian_spectrum(&m)?;
    Ok(*spectrum.last().expect("n ≥ 1"))
}

/// Verdict vocabulary for strict positivity at finite resolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StrictnessVerdict {
    CertifiedPositiveAtResolution,
    CertifiedNotStrict,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct EvidenceItem {
    pub name: String,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct StrictnessReport {
    pub verdict: StrictnessVerdict,
    pub evidence: Vec<EvidenceItem>,
}

/// Decides strict positivity of H_μ as far as finite data allows.
///
/// * The ac density exceeding `tol` on two consecutive grid points
///   certifies positivity at that resolution (sufficient criterion).
/// * A purely atomic measure with finitely many atoms always satisfies
///   Σ λⱼ/(λⱼ+1)² < ∞, which refutes strictness outright.
/// * Otherwise the verdict is inconclusive, with the Gram minimum attached
///   as evidence; for the rank-one counterexample density the hard-coded
///   witness function with vanishing form is also evaluated.
pub fn strict_positivity_report(
    mu: &CarlesonMeasure,
    grid: &[f64],
    spec: &QuadratureSpec,
) -> Result<StrictnessReport> {
    const POS_TOL: f64 = 1e-10;
    let mut evidence = Vec::new();

    if mu.density().is_some() {
        let min_eigs: Vec<f64> = grid
            .iter()
            .map(|&lam| {
                let spectrum = hermitian_spectrum(&mu.density_at(lam))?;
                Ok(*spectrum.first().expect("d ≥ 1"))
            })
            .collect::<Result<_>>()?;
        // Certified when the density is strictly positive on a grid
        // sub-interval, i.e. two consecutive nodes.
        let mut certified = false;
        let mut best = f64::NEG_INFINITY;
        for pair in min_eigs.windows(2) {
            let interval_min = pair[0].min(pair[1]);
            best = best.max(interval_min);
            if interval_min > POS_TOL {
                certified = true;
            }
        }
        evidence.push(EvidenceItem {
            name: "density_min_eig_best_interval".into(),
            value: best,
        });
        if certified {
            return Ok(StrictnessReport {
                verdict: StrictnessVerdict::CertifiedPositiveAtResolution,
                evidence,
            });
        }
    } else if !mu.atoms().is_empty() {
        // Finitely many atoms: the exclusion sum is finite and the measure
        // of the complement of the atom set is zero.
        let sum: f64 = mu
            .atoms()
            .iter()
            .map(|a| a.lambda / ((a.lambda + 1.0) * (a.lambda + 1.0)))
            .sum();
        evidence.push(EvidenceItem {
            name: "atom_exclusion_sum".into(),
            value: sum,
        });
        evidence.push(EvidenceItem {
            name: "complement_mass".into(),
            value: 0.0,
        });
        return Ok(StrictnessReport {
            verdict: StrictnessVerdict::CertifiedNotStrict,
            evidence,
        });
    }

    let gram = gram_matrix(
        &GramSource::Measure(mu),
        &default_kernel_points(mu.dim(), 6),
        spec,
    )?;
    evidence.push(EvidenceItem {
        name: "gram_min_eig".into(),
        value: gram.min_eig,
    });
    if mu.density().map(|h| h.name.as_str()) == Some("rank_one_fail") {
        let witness = rank_one_fail_witness();
        let value = hankel_form_measure(mu, &witness, &witness, spec)?;
        evidence.push(EvidenceItem {
            name: "witness_form_abs".into(),
            value: value.norm(),
        });
    }
    Ok(StrictnessReport {
        verdict: StrictnessVerdict::Inconclusive,
        evidence,
    })
}

/// The hard-coded kernel element of the rank-one counterexample form:
/// f(z) = ((i/(i+z))², i/(i+z)), so f(iλ) = ((1/(1+λ))², 1/(1+λ)).
pub fn rank_one_fail_witness() -> HardySample {
    HardySample::from_fn(2, |lam: f64| {
        let u = 1.0 / (1.0 + lam);
        vec![Complex64::new(u * u, 0.0), Complex64::new(u, 0.0)]
    })
}

/// Finite Blaschke product with zeros at {iλ : λ ∈ N}, normalized so that
/// |B| = 1 on ℝ and the factors with λ > 1 carry the sign flip that keeps
/// the infinite-product convention of the half-plane theory.
pub fn blaschke_witness(locations: &[f64], z: Complex64) -> Complex64 {
    let mut b = Complex64::new(1.0, 0.0);
    for &lam in locations {
        let factor = (z - Complex64::new(0.0, lam)) / (z + Complex64::new(0.0, lam));
        b *= if lam <= 1.0 { factor } else { -factor };
    }
    b
}

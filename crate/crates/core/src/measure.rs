//! Operator-valued Carleson measures on ℝ₊: an absolutely continuous
//! matrix density from a closed registry plus finitely many point masses.
//!
//! Built-in densities:
//!
//! * `lebesgue2` — dμ(λ) = 2·dλ·1 in any dimension.
//! * `example_t` — the 4×4 family ρ_t, t ∈ [0,1], whose symbol has an
//!   explicit closed form (see [`crate::symbol`]).
//! * `rank_one_fail` — the rank-one 2×2 density |(1, −1/(1+λ))⟩⟨·| whose
//!   Hankel form has a nontrivial kernel despite the density being
//!   pointwise nonnegative in every direction.
//! * `block_chi` — χ_(0,1)·diag(1,0) + χ_[1,∞)·diag(0,1), strictly positive
//!   Hankel form without a strictly positive density.
//!
//! Singular continuous parts are not representable: no numerical density
//! exists for them and none of the constructions used here need them.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{
    hermitian_spectrum, integrate_halfline, integrate_halfline_from, integrate_interval,
    spectral_norm, ComplexMatrix, QuadratureSpec,
};

/// Tolerance on the positive-semidefiniteness of densities and weights.
pub const PSD_TOL: f64 = 1e-12;

/// A point mass: location λ > 0 and a PSD matrix weight.
#[derive(Debug, Clone)]
pub struct Atom {
    pub lambda: f64,
    pub weight: ComplexMatrix,
}

/// Named density from the registry, with parameters.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct DensityHandle {
    pub name: String,
    #[serde(default)]
    pub params: Vec<f64>,
}

/// Positive-matrix-valued measure on ℝ₊, absolutely continuous part plus
/// finitely many atoms.
#[derive(Debug, Clone)]
pub struct CarlesonMeasure {
    dim: usize,
    density: Option<DensityHandle>,
    atoms: Vec<Atom>,
}

impl CarlesonMeasure {
    /// Assembles a measure, validating the invariants: PSD weights, strictly
    /// positive and pairwise distinct atom locations, and a registry density
    /// that exists for this dimension.
    pub fn new(
        dim: usize,
        density: Option<DensityHandle>,
        atoms: Vec<Atom>,
    ) -> Result<Self> {
        if let Some(handle) = &density {
            // Probe the registry so unknown names fail at construction.
            eval_density(handle, dim, 1.0)?;
        }
        for atom in &atoms {
            if !(atom.lambda > 0.0) {
                return Err(Error::BadParams(format!(
                    "atom location {} is not strictly positive",
                    atom.lambda
                )));
            }
            if atom.weight.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: atom.weight.dim(),
                });
            }
            check_psd(&atom.weight)?;
        }
        for (j, a) in atoms.iter().enumerate() {
            for b in &atoms[..j] {
                if a.lambda == b.lambda {
                    return Err(Error::BadParams(format!(
                        "duplicate atom location {}",
                        a.lambda
                    )));
                }
            }
        }
        Ok(Self {
            dim,
            density,
            atoms,
        })
    }

    /// The zero measure (no density, no atoms).
    pub fn empty(dim: usize) -> Self {
        Self {
            dim,
            density: None,
            atoms: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn density(&self) -> Option<&DensityHandle> {
        self.density.as_ref()
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// Density value ρ(λ); zero matrix when there is no ac part.
    pub fn density_at(&self, lambda: f64) -> ComplexMatrix {
        match &self.density {
            Some(handle) => eval_density(handle, self.dim, lambda)
                .expect("density validated at construction"),
            None => ComplexMatrix::zeros(self.dim),
        }
    }

    /// Matrix moment ∫ g(λ) dμ(λ) = ∫ g(λ)ρ(λ) dλ + Σ g(λⱼ)Aⱼ for a scalar
    /// weight g.
    pub fn moment<G>(&self, g: G, spec: &QuadratureSpec) -> Result<ComplexMatrix>
    where
        G: Fn(f64) -> Complex64,
    {
        let mut total = if self.density.is_some() {
            integrate_halfline(&|lam: f64| self.density_at(lam).scale(g(lam)), spec)?
        } else {
            ComplexMatrix::zeros(self.dim)
        };
        for atom in &self.atoms {
            total = total.add(&atom.weight.scale(g(atom.lambda)));
        }
        Ok(total)
    }

    /// Like [`Self::moment`] but restricted to [0, x].
    fn moment_on_initial<G>(&self, g: G, x: f64, spec: &QuadratureSpec) -> Result<ComplexMatrix>
    where
        G: Fn(f64) -> Complex64,
    {
        let mut total = if self.density.is_some() {
            integrate_interval(&|lam: f64| self.density_at(lam).scale(g(lam)), 0.0, x, spec)?
        } else {
            ComplexMatrix::zeros(self.dim)
        };
        for atom in &self.atoms {
            if atom.lambda <= x {
                total = total.add(&atom.weight.scale(g(atom.lambda)));
            }
        }
        Ok(total)
    }

    /// Like [`Self::moment`] but restricted to [s, ∞).
    fn moment_on_tail<G>(&self, g: G, s: f64, spec: &QuadratureSpec) -> Result<ComplexMatrix>
    where
        G: Fn(f64) -> Complex64,
    {
        let mut total = if self.density.is_some() {
            integrate_halfline_from(&|lam: f64| self.density_at(lam).scale(g(lam)), s, spec)?
        } else {
            ComplexMatrix::zeros(self.dim)
        };
        for atom in &self.atoms {
            if atom.lambda >= s {
                total = total.add(&atom.weight.scale(g(atom.lambda)));
            }
        }
        Ok(total)
    }

    /// True when the measure is purely atomic (no ac part).
    pub fn is_pure_point(&self) -> bool {
        self.density.is_none()
    }
}

fn check_psd(m: &ComplexMatrix) -> Result<()> {
    let scale = 1.0 + m.frobenius_norm();
    if !m.is_hermitian(PSD_TOL) {
        return Err(Error::BadParams(format!(
            "matrix weight is not Hermitian (defect {:.3e})",
            m.hermitian_defect()
        )));
    }
    let spec = hermitian_spectrum(m)?;
    let min = spec.first().copied().unwrap_or(0.0);
    if min < -PSD_TOL * scale {
        return Err(Error::BadParams(format!(
            "matrix weight has negative eigenvalue {min:.3e}"
        )));
    }
    Ok(())
}

/// Evaluates a registry density at λ.
pub fn eval_density(handle: &DensityHandle, dim: usize, lambda: f64) -> Result<ComplexMatrix> {
    match handle.name.as_str() {
        "lebesgue2" => Ok(ComplexMatrix::identity(dim).scale_re(2.0)),
        "example_t" => {
            let t = *handle
                .params
                .first()
                .ok_or_else(|| Error::BadParams("example_t needs parameter t".into()))?;
            if dim != 4 {
                return Err(Error::BadParams(format!(
                    "example_t requires dimension 4, got {dim}"
                )));
            }
            if !(0.0..=1.0).contains(&t) {
                return Err(Error::BadParams(format!(
                    "example_t requires t ∈ [0,1], got {t}"
                )));
            }
            Ok(example_density(t, lambda))
        }
        "rank_one_fail" => {
            if dim != 2 {
                return Err(Error::BadParams(format!(
                    "rank_one_fail requires dimension 2, got {dim}"
                )));
            }
            // |v⟩⟨v| with v = (1, −1/(1+λ)).
            let v = [1.0, -1.0 / (1.0 + lambda)];
            let mut m = ComplexMatrix::zeros(2);
            for j in 0..2 {
                for k in 0..2 {
                    m.set(j, k, Complex64::new(v[j] * v[k], 0.0));
                }
            }
            Ok(m)
        }
        "block_chi" => {
            if dim != 2 {
                return Err(Error::BadParams(format!(
                    "block_chi requires dimension 2, got {dim}"
                )));
            }
            let rows = if lambda < 1.0 {
                [vec![1.0, 0.0], vec![0.0, 0.0]]
            } else {
                [vec![0.0, 0.0], vec![0.0, 1.0]]
            };
            Ok(ComplexMatrix::from_real_rows(&rows))
        }
        other => Err(Error::UnknownDensity(other.to_string())),
    }
}

/// The 4×4 family ρ_t(λ) = [[A_t, B_t*], [B_t, A_t]] with
/// A_t = (2/(1+λ²))(t+λ²)·1₂ and
/// B_t = (2/(1+λ²))·[[√((1−t)λ)(λ−1), −√(1−t²)λ], [√(1−t²)λ, √((1−t)λ)(λ−1)]].
pub fn example_density(t: f64, lambda: f64) -> ComplexMatrix {
    let c = 2.0 / (1.0 + lambda * lambda);
    let a = c * (t + lambda * lambda);
    let b_diag = c * ((1.0 - t) * lambda).sqrt() * (lambda - 1.0);
    let b_off = c * (1.0 - t * t).sqrt() * lambda;
    ComplexMatrix::from_real_rows(&[
        vec![a, 0.0, b_diag, b_off],
        vec![0.0, a, -b_off, b_diag],
        vec![b_diag, -b_off, a, 0.0],
        vec![b_off, b_diag, 0.0, a],
    ])
}

/// Constructs one of the built-in measures.
///
/// * `lebesgue2`, `rank_one_fail`, `block_chi`, `example_t` — pure ac.
/// * `atoms` — pure point with identity weights at the given locations.
pub fn builtin_measure(name: &str, params: &[f64], dim: usize) -> Result<CarlesonMeasure> {
    match name {
        "lebesgue2" | "example_t" | "rank_one_fail" | "block_chi" => CarlesonMeasure::new(
            dim,
            Some(DensityHandle {
                name: name.to_string(),
                params: params.to_vec(),
            }),
            Vec::new(),
        ),
        "atoms" => {
            if params.is_empty() {
                return Err(Error::BadParams("atoms needs at least one location".into()));
            }
            let atoms = params
                .iter()
                .map(|&lambda| Atom {
                    lambda,
                    weight: ComplexMatrix::identity(dim),
                })
                .collect();
            CarlesonMeasure::new(dim, None, atoms)
        }
        other => Err(Error::UnknownDensity(other.to_string())),
    }
}

/// Evidence for the Carleson property: the two normalized mass ratios of
/// the embedding criterion, maximized over a grid. Finite values are
/// evidence, not certification.
#[derive(Debug, Clone, Serialize)]
pub struct CarlesonRatioReport {
    pub max_ratio_low: f64,
    pub max_ratio_high: f64,
}

/// sup over the grid of (1/x)·‖∫₀ˣ dμ/(1+λ²)‖ and (1/x)·‖∫_{1/x}^∞ dμ/(1+λ²)‖.
pub fn carleson_ratio_check(
    mu: &CarlesonMeasure,
    x_grid: &[f64],
    spec: &QuadratureSpec,
) -> Result<CarlesonRatioReport> {
    let mut low = 0.0f64;
    let mut high = 0.0f64;
    let g = |lam: f64| Complex64::new(1.0 / (1.0 + lam * lam), 0.0);
    for &x in x_grid {
        if !(x > 0.0) {
            return Err(Error::DomainError(format!(
                "carleson ratio grid point {x} must be positive"
            )));
        }
        let initial = mu.moment_on_initial(g, x, spec)?;
        let tail = mu.moment_on_tail(g, 1.0 / x, spec)?;
        low = low.max(spectral_norm(&initial) / x);
        high = high.max(spectral_norm(&tail) / x);
    }
    Ok(CarlesonRatioReport {
        max_ratio_low: low,
        max_ratio_high: high,
    })
}

// --- JSON wire format ---------------------------------------------------

/// Serialized shape of a measure:
/// `{"dim": d, "density": {"name", "params"}, "atoms": [{"lambda",
/// "weight_re": [[..]], "weight_im": [[..]]}]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasureJson {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<DensityHandle>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub atoms: Vec<AtomJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AtomJson {
    pub lambda: f64,
    pub weight_re: Vec<Vec<f64>>,
    pub weight_im: Vec<Vec<f64>>,
}

impl CarlesonMeasure {
    pub fn to_json(&self) -> MeasureJson {
        let d = self.dim;
        MeasureJson {
            dim: d,
            density: self.density.clone(),
            atoms: self
                .atoms
                .iter()
                .map(|atom| AtomJson {
                    lambda: atom.lambda,
                    weight_re: (0..d)
                        .map(|j| (0..d).map(|k| atom.weight.get(j, k).re).collect())
                        .collect(),
                    weight_im: (0..d)
                        .map(|j| (0..d).map(|k| atom.weight.get(j, k).im).collect())
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn from_json(json: &MeasureJson) -> Result<Self> {
        let d = json.dim;
        let atoms = json
            .atoms
            .iter()
            .map(|aj| {
                if aj.weight_re.len() != d || aj.weight_im.len() != d {
                    return Err(Error::DimensionMismatch {
                        expected: d,
                        got: aj.weight_re.len(),
                    });
                }
                let mut weight = ComplexMatrix::zeros(d);
                for j in 0..d {
                    if aj.weight_re[j].len() != d || aj.weight_im[j].len() != d {
                        return Err(Error::DimensionMismatch {
                            expected: d,
                            got: aj.weight_re[j].len(),
                        });
                    }
                    for k in 0..d {
                        weight.set(j, k, Complex64::new(aj.weight_re[j][k], aj.weight_im[j][k]));
                    }
                }
                Ok(Atom {
                    lambda: aj.lambda,
                    weight,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        CarlesonMeasure::new(d, json.density.clone(), atoms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C;

    #[test]
    fn builtin_lebesgue2() {
        let mu = builtin_measure("lebesgue2", &[], 4).unwrap();
        let rho = mu.density_at(3.7);
        assert_eq!(rho, ComplexMatrix::identity(4).scale_re(2.0));
        assert!(mu.atoms().is_empty());
    }

    #[test]
    fn example_t_one_is_twice_identity() {
        let mu = builtin_measure("example_t", &[1.0], 4).unwrap();
        for lam in [0.1, 1.0, 7.3] {
            let rho = mu.density_at(lam);
            assert!(
                rho.sub(&ComplexMatrix::identity(4).scale_re(2.0))
                    .frobenius_norm()
                    < 1e-12
            );
        }
    }

    #[test]
    fn example_t_half_spectrum_at_one() {
        // ρ_{0.5}(1): diagonal 1.5, off-diagonal block has singular values
        // √3/2, so the minimum eigenvalue is 1.5 − √3/2.
        let mu = builtin_measure("example_t", &[0.5], 4).unwrap();
        let spec = hermitian_spectrum(&mu.density_at(1.0)).unwrap();
        let expected = 1.5 - 3.0f64.sqrt() / 2.0;
        assert!((spec[0] - expected).abs() < 1e-12, "min eig {}", spec[0]);
    }

    #[test]
    fn builtin_params_validated() {
        assert!(matches!(
            builtin_measure("example_t", &[1.5], 4),
            Err(Error::BadParams(_))
        ));
        assert!(matches!(
            builtin_measure("example_t", &[0.5], 2),
            Err(Error::BadParams(_))
        ));
        assert!(matches!(
            builtin_measure("no_such", &[], 1),
            Err(Error::UnknownDensity(_))
        ));
    }

    #[test]
    fn atom_measure() {
        let mu = builtin_measure("atoms", &[1.0], 1).unwrap();
        assert!(mu.is_pure_point());
        let spec = QuadratureSpec::default();
        // Single-atom substitution: moment of any g is g(1)·A.
        let m = mu.moment(|l| C::new(l * l + 0.25, 0.0), &spec).unwrap();
        assert!((m.get(0, 0).re - 1.25).abs() < 1e-14);
    }

    #[test]
    fn lebesgue2_scalar_moment() {
        let mu = builtin_measure("lebesgue2", &[], 1).unwrap();
        let spec = QuadratureSpec::default();
        let m = mu
            .moment(|l| C::new(1.0 / ((1.0 + l) * (1.0 + l)), 0.0), &spec)
            .unwrap();
        assert!((m.get(0, 0).re - 2.0).abs() < 1e-10);
    }

    #[test]
    fn carleson_ratios_lebesgue2() {
        let mu = builtin_measure("lebesgue2", &[], 1).unwrap();
        let spec = QuadratureSpec::default();
        let grid: Vec<f64> = (0..10).map(|k| 10.0f64.powf(k as f64 / 3.0 - 1.5)).collect();
        let report = carleson_ratio_check(&mu, &grid, &spec).unwrap();
        assert!(report.max_ratio_low <= 2.0 + 1e-10);
        assert!(report.max_ratio_high <= 2.0 + 1e-10);
    }

    #[test]
    fn carleson_ratio_single_atom() {
        // Atom (1,1): ratio_low at x = 2 is (1/2)·(1/2) = 1/4.
        let mu = builtin_measure("atoms", &[1.0], 1).unwrap();
        let spec = QuadratureSpec::default();
        let report = carleson_ratio_check(&mu, &[2.0], &spec).unwrap();
        assert!((report.max_ratio_low - 0.25).abs() < 1e-14);
    }

    #[test]
    fn densities_are_psd_on_log_grid() {
        let measures = [
            builtin_measure("lebesgue2", &[], 4).unwrap(),
            builtin_measure("example_t", &[0.34], 4).unwrap(),
            builtin_measure("example_t", &[0.5], 4).unwrap(),
            builtin_measure("example_t", &[1.0], 4).unwrap(),
            builtin_measure("rank_one_fail", &[], 2).unwrap(),
            builtin_measure("block_chi", &[], 2).unwrap(),
        ];
        for mu in &measures {
            for k in 0..64 {
                let lam = 10.0f64.powf(-3.0 + 6.0 * k as f64 / 63.0);
                let spec = hermitian_spectrum(&mu.density_at(lam)).unwrap();
                assert!(spec[0] >= -PSD_TOL, "min eig {} at λ={lam}", spec[0]);
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let mu = builtin_measure("atoms", &[0.5, 2.0], 2).unwrap();
        let json = serde_json::to_string(&mu.to_json()).unwrap();
        let parsed: MeasureJson = serde_json::from_str(&json).unwrap();
        let back = CarlesonMeasure::from_json(&parsed).unwrap();
        assert_eq!(back.dim(), 2);
        assert_eq!(back.atoms().len(), 2);
        assert_eq!(back.atoms()[1].lambda, 2.0);
    }
}

//! Matrix-valued symbols on ℝ∖{0}: the β(μ,p,C) family, the ♯/♭
//! involutions, unitarity and projection-symmetry checks, and the
//! closed-form built-ins.
//!
//! With (𝓡, 𝓘) the boundary parts of the Pick transform of μ, a projection
//! p and a coupling C = pC(1−p), the symbol family is
//!
//! ```text
//! β(μ,p,C)(x) = i·p𝓘(x)p + i·(1−p)𝓘(x)(1−p)
//!             + C + p𝓡(x)(1−p) + C* + (1−p)𝓡(x)p .
//! ```
//!
//! Whenever the off-diagonal compression p𝓡(1−p) is bounded, β(μ,p,C) is a
//! symbol of the positive Hankel operator attached to μ, and it satisfies
//! h(−x) = h(x)* = −(2p−1)h(x)(2p−1). Boundedness itself is not decidable
//! from finitely many samples and is only probed on grids.
//!
//! The real structure underlying the ♯ involution is fixed as entrywise
//! complex conjugation in the standard basis, so "♯-fixed constants" are
//! exactly the real matrices.

use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::CarlesonMeasure;
use crate::numerics::{ComplexMatrix, QuadratureSpec};
use crate::pick::pick_boundary;

/// Outcome of a grid check, remembering what produced it.
#[derive(Debug, Clone, Serialize, PartialEq)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CheckFlag {
    Unknown,
    Pass {
        tol: f64,
        grid_points: usize,
        worst: f64,
    },
    Fail {
        tol: f64,
        grid_points: usize,
        worst: f64,
    },
}

impl CheckFlag {
    fn from_worst(worst: f64, tol: f64, grid_points: usize) -> Self {
        if worst <= tol {
            CheckFlag::Pass {
                tol,
                grid_points,
                worst,
            }
        } else {
            CheckFlag::Fail {
                tol,
                grid_points,
                worst,
            }
        }
    }

    pub fn passed(&self) -> bool {
        matches!(self, CheckFlag::Pass { .. })
    }
}

/// Grid-check flags carried by a symbol.
#[derive(Debug, Clone, Serialize)]
pub struct SymbolFlags {
    pub unitary_checked: CheckFlag,
    pub sharp_fixed: CheckFlag,
    pub flat_fixed: CheckFlag,
}

impl Default for SymbolFlags {
    fn default() -> Self {
        Self {
            unitary_checked: CheckFlag::Unknown,
            sharp_fixed: CheckFlag::Unknown,
            flat_fixed: CheckFlag::Unknown,
        }
    }
}

type EvalFn = dyn Fn(f64) -> Result<ComplexMatrix> + Send + Sync;

/// A matrix-valued function on ℝ∖{0} with check flags.
#[derive(Clone)]
pub struct Symbol {
    dim: usize,
    name: String,
    eval: Arc<EvalFn>,
    flags: SymbolFlags,
}

impl std::fmt::Debug for Symbol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Symbol")
            .field("dim", &self.dim)
            .field("name", &self.name)
            .field("flags", &self.flags)
            .finish()
    }
}

impl Symbol {
    pub fn from_fn<F>(name: &str, dim: usize, eval: F) -> Self
    where
        F: Fn(f64) -> Result<ComplexMatrix> + Send + Sync + 'static,
    {
        Self {
            dim,
            name: name.to_string(),
            eval: Arc::new(eval),
            flags: SymbolFlags::default(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn flags(&self) -> &SymbolFlags {
        &self.flags
    }

    /// Evaluates at x ≠ 0.
    pub fn eval(&self, x: f64) -> Result<ComplexMatrix> {
        if x == 0.0 {
            return Err(Error::DomainError("symbols are undefined at x = 0".into()));
        }
        (self.eval)(x)
    }

    /// (f^♯(x), f^♭(x)) = (𝒞 f(−x) 𝒞, f(−x)*) with 𝒞 the entrywise
    /// conjugation.
    pub fn involutions(&self, x: f64) -> Result<(ComplexMatrix, ComplexMatrix)> {
        let at_neg = self.eval(-x)?;
        Ok((at_neg.conj_entrywise(), at_neg.adjoint()))
    }

    /// Grid check of ‖h(x)h(x)* − 1‖ ≤ tol; records the result in
    /// `flags.unitary_checked`.
    pub fn check_unitary(&mut self, x_grid: &[f64], tol: f64) -> Result<CheckFlag> {
        let mut worst = 0.0f64;
        for &x in x_grid {
            worst = worst.max(self.eval(x)?.unitary_defect());
        }
        let flag = CheckFlag::from_worst(worst, tol, x_grid.len());
        self.flags.unitary_checked = flag.clone();
        Ok(flag)
    }

    /// Grid check of h^♯ = h; records the result in `flags.sharp_fixed`.
    pub fn check_sharp_fixed(&mut self, x_grid: &[f64], tol: f64) -> Result<CheckFlag> {
        let mut worst = 0.0f64;
        for &x in x_grid {
            let (sharp, _) = self.involutions(x)?;
            worst = worst.max(sharp.sub(&self.eval(x)?).frobenius_norm());
        }
        let flag = CheckFlag::from_worst(worst, tol, x_grid.len());
        self.flags.sharp_fixed = flag.clone();
        Ok(flag)
    }

    /// Grid check of h^♭ = h; records the result in `flags.flat_fixed`.
    pub fn check_flat_fixed(&mut self, x_grid: &[f64], tol: f64) -> Result<CheckFlag> {
        let mut worst = 0.0f64;
        for &x in x_grid {
            let (_, flat) = self.involutions(x)?;
            worst = worst.max(flat.sub(&self.eval(x)?).frobenius_norm());
        }
        let flag = CheckFlag::from_worst(worst, tol, x_grid.len());
        self.flags.flat_fixed = flag.clone();
        Ok(flag)
    }

    /// Grid check of the two equalities h(−x) = h(x)* and
    /// h(x)* = −(2p−1)h(x)(2p−1).
    pub fn projection_symmetry_check(
        &self,
        p: &ComplexMatrix,
        x_grid: &[f64],
        tol: f64,
    ) -> Result<CheckFlag> {
        p.expect_projection(1e-12)?;
        let two_p_minus_1 = p.scale_re(2.0).sub(&ComplexMatrix::identity(self.dim));
        let mut worst = 0.0f64;
        for &x in x_grid {
            let h = self.eval(x)?;
            let h_neg = self.eval(-x)?;
            let h_star = h.adjoint();
            worst = worst.max(h_neg.sub(&h_star).frobenius_norm());
            let conjugated = two_p_minus_1.mul(&h).mul(&two_p_minus_1).scale_re(-1.0);
            worst = worst.max(h_star.sub(&conjugated).frobenius_norm());
        }
        Ok(CheckFlag::from_worst(worst, tol, x_grid.len()))
    }
}

/// A projection p together with a coupling operator C mapping ran(1−p) to
/// ran(p), stored as a full d×d matrix supported on that block.
#[derive(Debug, Clone)]
pub struct ProjectionSpec {
    p: ComplexMatrix,
    c: ComplexMatrix,
}

impl ProjectionSpec {
    pub fn new(p: ComplexMatrix, c: ComplexMatrix) -> Result<Self> {
        p.expect_projection(1e-12)?;
        if c.dim() != p.dim() {
            return Err(Error::DimensionMismatch {
                expected: p.dim(),
                got: c.dim(),
            });
        }
        let q = ComplexMatrix::identity(p.dim()).sub(&p);
        let compressed = p.mul(&c).mul(&q);
        if c.sub(&compressed).frobenius_norm() > 1e-12 * (1.0 + c.frobenius_norm()) {
            return Err(Error::BadParams(
                "coupling C is not supported on the p·(1−p) block".into(),
            ));
        }
        // Store the exact compression so C = pC(1−p) holds exactly.
        Ok(Self { p, c: compressed })
    }

    pub fn dim(&self) -> usize {
        self.p.dim()
    }

    pub fn p(&self) -> &ComplexMatrix {
        &self.p
    }

    pub fn c(&self) -> &ComplexMatrix {
        &self.c
    }
}

/// Builds β(μ, p, C) as a quadrature-backed symbol.
pub fn beta_symbol(
    mu: &CarlesonMeasure,
    ps: &ProjectionSpec,
    spec: &QuadratureSpec,
) -> Result<Symbol> {
    if ps.dim() != mu.dim() {
        return Err(Error::DimensionMismatch {
            expected: mu.dim(),
            got: ps.dim(),
        });
    }
    let dim = mu.dim();
    let mu = mu.clone();
    let p = ps.p.clone();
    let q = ComplexMatrix::identity(dim).sub(&p);
    let c = ps.c.clone();
    let c_star = ps.c.adjoint();
    let spec = *spec;
    let name = format!("beta({}, p, C)", measure_label(&mu));
    Ok(Symbol::from_fn(&name, dim, move |x| {
        let (r, i) = pick_boundary(&mu, x, &spec)?;
        let imag = p.mul(&i).mul(&p).add(&q.mul(&i).mul(&q));
        let off = c
            .add(&p.mul(&r).mul(&q))
            .add(&c_star)
            .add(&q.mul(&r).mul(&p));
        Ok(imag.scale(Complex64::new(0.0, 1.0)).add(&off))
    }))
}

fn measure_label(mu: &CarlesonMeasure) -> String {
    match mu.density() {
        Some(handle) => handle.name.clone(),
        None => format!("{}-atoms", mu.atoms().len()),
    }
}

/// Closed-form built-in symbols.
///
/// * `i_sgn` — i·sgn(x)·1_d; params: none, any dim.
/// * `example_beta_closed` — the explicit 4×4 unitary symbol of the example
///   family; params: [t] with t ∈ [0,1], dim must be 4.
pub fn builtin_symbol(name: &str, params: &[f64], dim: usize) -> Result<Symbol> {
    match name {
        "i_sgn" => Ok(Symbol::from_fn("i_sgn", dim, move |x| {
            Ok(ComplexMatrix::identity(dim).scale(Complex64::new(0.0, x.signum())))
        })),
        "example_beta_closed" => {
            let t = *params
                .first()
                .ok_or_else(|| Error::BadParams("example_beta_closed needs parameter t".into()))?;
            if dim != 4 {
                return Err(Error::BadParams(format!(
                    "example_beta_closed requires dimension 4, got {dim}"
                )));
            }
            if !(0.0..=1.0).contains(&t) {
                return Err(Error::BadParams(format!(
                    "example_beta_closed requires t ∈ [0,1], got {t}"
                )));
            }
            Ok(Symbol::from_fn(
                &format!("example_beta_closed({t})"),
                4,
                move |x| Ok(example_beta_closed(t, x)),
            ))
        }
        other => Err(Error::UnknownSymbol(other.to_string())),
    }
}

/// The explicit value of the example-family symbol:
///
/// ```text
///            1     ⎛ i·s(t+|x|)      0          a    b  ⎞
/// β_t(x) = ────── ⎜     0       i·s(t+|x|)    −b    a  ⎟ ,  s = sgn(x),
///          1+|x|  ⎜     a          −b      i·s(t+|x|) 0 ⎟
///            ⎝     b           a          0  i·s(t+|x|)⎠
/// ```
///
/// with a = √(2(1−t)|x|) and b = √(1−t²). Unitarity follows from the scalar
/// identity (t+|x|)² + 2(1−t)|x| + (1−t²) = (|x|+1)².
pub fn example_beta_closed(t: f64, x: f64) -> ComplexMatrix {
    let s = x.signum();
    let ax = x.abs();
    let d = Complex64::new(0.0, s * (t + ax));
    let a = Complex64::new((2.0 * (1.0 - t) * ax).sqrt(), 0.0);
    let b = Complex64::new((1.0 - t * t).sqrt(), 0.0);
    let z = Complex64::new(0.0, 0.0);
    let entries = [
        d, z, a, b, //
        z, d, -b, a, //
        a, -b, d, z, //
        b, a, z, d,
    ];
    ComplexMatrix::from_entries(4, &entries).scale_re(1.0 / (1.0 + ax))
}

/// The block projection p = diag(1,1,0,0) used by the example family.
pub fn example_projection() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[
        vec![1.0, 0.0, 0.0, 0.0],
        vec![0.0, 1.0, 0.0, 0.0],
        vec![0.0, 0.0, 0.0, 0.0],
        vec![0.0, 0.0, 0.0, 0.0],
    ])
}

/// The coupling operator C_t of the example family, embedded as the
/// upper-right 2×2 block of a 4×4 matrix:
///
/// ```text
/// C_t = ⎛ √((1−t)/2)    √(1−t²)/2 ⎞
///       ⎝ −√(1−t²)/2   √((1−t)/2) ⎠ .
/// ```
pub fn example_coupling(t: f64) -> ComplexMatrix {
    let diag = ((1.0 - t) / 2.0).sqrt();
    let off = (1.0 - t * t).sqrt() / 2.0;
    ComplexMatrix::from_real_rows(&[
        vec![0.0, 0.0, diag, off],
        vec![0.0, 0.0, -off, diag],
        vec![0.0, 0.0, 0.0, 0.0],
        vec![0.0, 0.0, 0.0, 0.0],
    ])
}

/// Ready-made ProjectionSpec for the example family.
pub fn example_projection_spec(t: f64) -> Result<ProjectionSpec> {
    ProjectionSpec::new(example_projection(), example_coupling(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::builtin_measure;

    #[test]
    fn i_sgn_values() {
        let h = builtin_symbol("i_sgn", &[], 2).unwrap();
        let m = h.eval(-3.0).unwrap();
        assert!(m
            .sub(&ComplexMatrix::identity(2).scale(Complex64::new(0.0, -1.0)))
            .max_abs()
            .eq(&0.0));
        assert!(h.eval(0.0).is_err());
    }

    #[test]
    fn closed_form_entries_at_half() {
        // t = 0.5, x = 1: diagonal 0.75i, (1,3) entry 0.5, (1,4) entry √3/4.
        let m = example_beta_closed(0.5, 1.0);
        assert!((m.get(0, 0) - Complex64::new(0.0, 0.75)).norm() < 1e-15);
        assert!((m.get(0, 2) - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        assert!((m.get(0, 3) - Complex64::new(3.0f64.sqrt() / 4.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn closed_form_t_one_is_i_sgn() {
        for x in [0.1, -1.0, 10.0] {
            let m = example_beta_closed(1.0, x);
            let expect = ComplexMatrix::identity(4).scale(Complex64::new(0.0, x.signum()));
            assert!(m.sub(&expect).max_abs() < 1e-15);
        }
    }

    #[test]
    fn closed_form_unitary() {
        for t in [0.0, 0.4, 0.5, 0.75, 1.0] {
            for x in [0.1, -0.1, 1.0, -1.0, 10.0, -10.0] {
                assert!(
                    example_beta_closed(t, x).unitary_defect() < 1e-12,
                    "t={t}, x={x}"
                );
            }
        }
    }

    #[test]
    fn involutions_fix_i_sgn() {
        let h = builtin_symbol("i_sgn", &[], 3).unwrap();
        let (sharp, flat) = h.involutions(0.8).unwrap();
        let at_x = h.eval(0.8).unwrap();
        assert!(sharp.sub(&at_x).max_abs() < 1e-15);
        assert!(flat.sub(&at_x).max_abs() < 1e-15);
    }

    #[test]
    fn check_unitary_sets_flags() {
        let grid = [0.5, -0.5, 2.0, -2.0];
        let mut h = builtin_symbol("i_sgn", &[], 2).unwrap();
        assert!(h.check_unitary(&grid, 1e-12).unwrap().passed());
        assert!(h.flags().unitary_checked.passed());

        // i·𝓘 of an atom measure is not unitary: ‖𝓘(x)‖ = |x|/(π(1+x²)) < 1.
        let mu = builtin_measure("atoms", &[1.0], 1).unwrap();
        let spec = QuadratureSpec::default();
        let mu_clone = mu.clone();
        let mut h = Symbol::from_fn("i_I_atom", 1, move |x| {
            let (_, i) = pick_boundary(&mu_clone, x, &spec)?;
            Ok(i.scale(Complex64::new(0.0, 1.0)))
        });
        assert!(!h.check_unitary(&grid, 1e-12).unwrap().passed());
    }

    #[test]
    fn projection_symmetry_of_closed_form() {
        let grid = [0.3, -0.3, 1.0, -1.0, 5.0, -5.0];
        let h = builtin_symbol("example_beta_closed", &[0.5], 4).unwrap();
        let flag = h
            .projection_symmetry_check(&example_projection(), &grid, 1e-9)
            .unwrap();
        assert!(flag.passed(), "{flag:?}");

        // i·sgn with p = 1 also passes (−h = h*).
        let h = builtin_symbol("i_sgn", &[], 4).unwrap();
        let flag = h
            .projection_symmetry_check(&ComplexMatrix::identity(4), &grid, 1e-12)
            .unwrap();
        assert!(flag.passed());
    }

    #[test]
    fn perturbed_symbol_fails_symmetry() {
        let h = Symbol::from_fn("perturbed", 2, |x| {
            let mut m = ComplexMatrix::identity(2).scale(Complex64::new(0.0, x.signum()));
            m.set(0, 0, m.get(0, 0) + Complex64::new(0.1, 0.0));
            Ok(m)
        });
        let flag = h
            .projection_symmetry_check(&ComplexMatrix::identity(2), &[0.5, -0.5], 1e-9)
            .unwrap();
        assert!(!flag.passed());
    }

    #[test]
    fn beta_for_lebesgue2_is_i_sgn_plus_coupling() {
        // p𝓡(1−p) vanishes because 𝓡 is scalar, so β = i·sgn·1 + (C + C*).
        let mu = builtin_measure("lebesgue2", &[], 4).unwrap();
        let ps = example_projection_spec(0.5).unwrap();
        let spec = QuadratureSpec::default();
        let h = beta_symbol(&mu, &ps, &spec).unwrap();
        for x in [0.7, -2.0] {
            let got = h.eval(x).unwrap();
            let expect = ComplexMatrix::identity(4)
                .scale(Complex64::new(0.0, x.signum()))
                .add(&ps.c().add(&ps.c().adjoint()));
            assert!(got.sub(&expect).max_abs() < 1e-9, "x={x}");
        }
    }

    #[test]
    fn beta_with_full_projection_is_i_imag_part() {
        let mu = builtin_measure("lebesgue2", &[], 2).unwrap();
        let ps = ProjectionSpec::new(ComplexMatrix::identity(2), ComplexMatrix::zeros(2)).unwrap();
        let spec = QuadratureSpec::default();
        let h = beta_symbol(&mu, &ps, &spec).unwrap();
        let got = h.eval(1.5).unwrap();
        let expect = ComplexMatrix::identity(2).scale(Complex64::new(0.0, 1.0));
        assert!(got.sub(&expect).max_abs() < 1e-9);
    }

    #[test]
    fn beta_quadrature_matches_closed_form() {
        let spec = QuadratureSpec::default();
        for t in [0.5, 1.0] {
            let mu = builtin_measure("example_t", &[t], 4).unwrap();
            let ps = example_projection_spec(t).unwrap();
            let h = beta_symbol(&mu, &ps, &spec).unwrap();
            for x in [1.0, -0.7] {
                let got = h.eval(x).unwrap();
                let expect = example_beta_closed(t, x);
                assert!(
                    got.sub(&expect).max_abs() < 1e-8,
                    "t={t}, x={x}, err={}",
                    got.sub(&expect).max_abs()
                );
            }
        }
    }

    #[test]
    fn coupling_must_be_block_supported() {
        let bad = ComplexMatrix::identity(4);
        assert!(ProjectionSpec::new(example_projection(), bad).is_err());
    }
}

//! Classification of the quadruple attached to a symbol h and a projection
//! p at grid resolution: invalid symbol / outgoing reflection-positive only
//! / outgoing standard / Borchers-type.
//!
//! The pipeline follows the checkable characterizations: a reflection
//! positive quadruple needs h unitary-valued and ♯/♭-fixed; "standard"
//! additionally needs strict positivity of the Hankel form (entering only
//! as Gram evidence at a threshold — finite data cannot certify more) and
//! the projection symmetry h(−x) = h(x)* = −(2p−1)h(x)(2p−1); the
//! Borchers-type sub-class is exactly h = i·sgn·1. The verdicts are nested:
//! borchers ⇒ standard ⇒ rp_only.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::Result;
use crate::hankel::{default_kernel_points, gram_matrix, GramSource};
use crate::measure::CarlesonMeasure;
use crate::numerics::{ComplexMatrix, QuadratureSpec};
use crate::symbol::Symbol;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    InvalidSymbol,
    RpOnly,
    Standard,
    Borchers,
}

impl Verdict {
    /// Nesting of the hierarchy: borchers ⇒ standard ⇒ rp_only.
    pub fn implies(self, weaker: Verdict) -> bool {
        let rank = |v: Verdict| match v {
            Verdict::InvalidSymbol => 0,
            Verdict::RpOnly => 1,
            Verdict::Standard => 2,
            Verdict::Borchers => 3,
        };
        rank(self) >= rank(weaker)
    }
}

/// One line of the evidence chain.
#[derive(Debug, Clone, Serialize)]
pub struct EvidenceEntry {
    pub check: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Classification {
    pub verdict: Verdict,
    pub evidence: Vec<EvidenceEntry>,
    /// Present for standard/borchers verdicts: max over the grid of
    /// ‖I(x)² + 1‖ for I = h(2p−1).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub complex_structure_defect: Option<f64>,
    #[serde(skip)]
    pub complex_structure: Option<Symbol>,
}

/// Classifies (h, p) over a grid. When μ is given, the positivity evidence
/// uses the cheap measure-side Gram (the caller is responsible for having
/// verified that h is a symbol of H_μ); otherwise the symbol-side Gram is
/// used — slower but self-contained.
pub fn classify(
    h: &Symbol,
    p: &ComplexMatrix,
    mu: Option<&CarlesonMeasure>,
    x_grid: &[f64],
    tol: f64,
    spec: &QuadratureSpec,
) -> Result<Classification> {
    p.expect_projection(1e-12)?;
    let mut evidence = Vec::new();
    let mut h = h.clone();

    // Gate 1: reflection-positive quadruple conditions — unitary values and
    // ♯/♭ fixedness.
    let unitary = h.check_unitary(x_grid, tol)?;
    let sharp = h.check_sharp_fixed(x_grid, tol)?;
    let flat = h.check_flat_fixed(x_grid, tol)?;
    for (name, flag) in [
        ("unitary_values", &unitary),
        ("sharp_fixed", &sharp),
        ("flat_fixed", &flat),
    ] {
        push_flag(&mut evidence, name, flag, tol);
    }
    if !(unitary.passed() && sharp.passed() && flat.passed()) {
        return Ok(Classification {
            verdict: Verdict::InvalidSymbol,
            evidence,
            complex_structure_defect: None,
            complex_structure: None,
        });
    }

    // Gate 2: projection symmetry plus strict-positivity evidence.
    let symmetry = h.projection_symmetry_check(p, x_grid, tol)?;
    push_flag(&mut evidence, "projection_symmetry", &symmetry, tol);

    let gram = match mu {
        Some(mu) => gram_matrix(
            &GramSource::Measure(mu),
            &default_kernel_points(mu.dim(), 6),
            spec,
        )?,
        None => gram_matrix(
            &GramSource::Symbol(&h),
            &default_kernel_points(h.dim(), 6),
            spec,
        )?,
    };
    let strict_tol = 1e-8;
    let strictly_positive = gram.min_eig > strict_tol;
    evidence.push(EvidenceEntry {
        check: "gram_min_eig".into(),
        value: gram.min_eig,
        threshold: strict_tol,
        pass: strictly_positive,
    });

    if !(symmetry.passed() && strictly_positive) {
        let verdict = if gram.min_eig >= -strict_tol {
            Verdict::RpOnly
        } else {
            // A symbol whose Gram evidence goes genuinely negative is not
            // reflection positive at all.
            Verdict::InvalidSymbol
        };
        return Ok(Classification {
            verdict,
            evidence,
            complex_structure_defect: None,
            complex_structure: None,
        });
    }

    // Standard is established; attach the induced complex structure.
    let (structure, i2_defect, _) = induced_complex_structure(&h, p, x_grid, tol)?;

    // Gate 3: Borchers-type iff h = i·sgn·1 on the grid.
    let mut borchers_dist = 0.0f64;
    for &x in x_grid {
        let target = ComplexMatrix::identity(h.dim()).scale(Complex64::new(0.0, x.signum()));
        borchers_dist = borchers_dist.max(h.eval(x)?.sub(&target).frobenius_norm());
    }
    let is_borchers = borchers_dist <= tol;
    evidence.push(EvidenceEntry {
        check: "distance_to_i_sgn".into(),
        value: borchers_dist,
        threshold: tol,
        pass: is_borchers,
    });

    Ok(Classification {
        verdict: if is_borchers {
            Verdict::Borchers
        } else {
            Verdict::Standard
        },
        evidence,
        complex_structure_defect: Some(i2_defect),
        complex_structure: Some(structure),
    })
}

fn push_flag(
    evidence: &mut Vec<EvidenceEntry>,
    name: &str,
    flag: &crate::symbol::CheckFlag,
    tol: f64,
) {
    let (value, pass) = match flag {
        crate::symbol::CheckFlag::Pass { worst, .. } => (*worst, true),
        crate::symbol::CheckFlag::Fail { worst, .. } => (*worst, false),
        crate::symbol::CheckFlag::Unknown => (f64::NAN, false),
    };
    evidence.push(EvidenceEntry {
        check: name.into(),
        value,
        threshold: tol,
        pass,
    });
}

/// The induced complex structure I(x) = h(x)·(2p−1), together with the max
/// over the grid of ‖I(x)² + 1‖ and — when I is of the Borchers normal form
/// — the distance to i·sgn·(2p−1).
pub fn induced_complex_structure(
    h: &Symbol,
    p: &ComplexMatrix,
    x_grid: &[f64],
    _tol: f64,
) -> Result<(Symbol, f64, f64)> {
    p.expect_projection(1e-12)?;
    let dim = h.dim();
    let two_p_minus_1 = p.scale_re(2.0).sub(&ComplexMatrix::identity(dim));
    let h_inner = h.clone();
    let reflector = two_p_minus_1.clone();
    let structure = Symbol::from_fn(&format!("{}·(2p−1)", h.name()), dim, move |x| {
        Ok(h_inner.eval(x)?.mul(&reflector))
    });

    let mut i2_defect = 0.0f64;
    let mut borchers_defect = 0.0f64;
    for &x in x_grid {
        let i_val = structure.eval(x)?;
        let sq = i_val.mul(&i_val).add(&ComplexMatrix::identity(dim));
        i2_defect = i2_defect.max(sq.frobenius_norm());
        let normal_form = two_p_minus_1.scale(Complex64::new(0.0, x.signum()));
        borchers_defect = borchers_defect.max(i_val.sub(&normal_form).frobenius_norm());
    }
    Ok((structure, i2_defect, borchers_defect))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::builtin_measure;
    use crate::pick::pick_boundary;
    use crate::symbol::{builtin_symbol, example_projection, Symbol};

    fn grid() -> Vec<f64> {
        let mut g: Vec<f64> = (0..12)
            .map(|k| 10.0f64.powf(-1.0 + 2.0 * k as f64 / 11.0))
            .collect();
        let negs: Vec<f64> = g.iter().map(|x| -x).collect();
        g.extend(negs);
        g
    }

    #[test]
    fn i_sgn_is_borchers() {
        let h = builtin_symbol("i_sgn", &[], 4).unwrap();
        let spec = QuadratureSpec::default();
        let mu = builtin_measure("lebesgue2", &[], 4).unwrap();
        let result = classify(
            &h,
            &ComplexMatrix::identity(4),
            Some(&mu),
            &grid(),
            1e-9,
            &spec,
        )
        .unwrap();
        assert_eq!(result.verdict, Verdict::Borchers);
        assert!(result.verdict.implies(Verdict::Standard));
        assert!(result.complex_structure_defect.unwrap() < 1e-12);
    }

    #[test]
    fn example_half_is_standard_not_borchers() {
        let h = builtin_symbol("example_beta_closed", &[0.5], 4).unwrap();
        let spec = QuadratureSpec::default();
        let mu = builtin_measure("example_t", &[0.5], 4).unwrap();
        let result = classify(&h, &example_projection(), Some(&mu), &grid(), 1e-9, &spec).unwrap();
        assert_eq!(result.verdict, Verdict::Standard);
        assert!(result.complex_structure_defect.unwrap() < 1e-9);
    }

    #[test]
    fn example_t_one_is_borchers() {
        let h = builtin_symbol("example_beta_closed", &[1.0], 4).unwrap();
        let spec = QuadratureSpec::default();
        let mu = builtin_measure("example_t", &[1.0], 4).unwrap();
        let result = classify(&h, &example_projection(), Some(&mu), &grid(), 1e-9, &spec).unwrap();
        assert_eq!(result.verdict, Verdict::Borchers);
    }

    #[test]
    fn non_unitary_symbol_is_invalid() {
        let mu = builtin_measure("atoms", &[1.0], 1).unwrap();
        let spec = QuadratureSpec::default();
        let mu_c = mu.clone();
        let h = Symbol::from_fn("i_I_atom", 1, move |x| {
            let (_, i) = pick_boundary(&mu_c, x, &spec)?;
            Ok(i.scale(Complex64::new(0.0, 1.0)))
        });
        let result = classify(
            &h,
            &ComplexMatrix::identity(1),
            Some(&mu),
            &grid(),
            1e-9,
            &spec,
        )
        .unwrap();
        assert_eq!(result.verdict, Verdict::InvalidSymbol);
    }

    #[test]
    fn induced_structure_of_i_sgn_is_exact() {
        let h = builtin_symbol("i_sgn", &[], 4).unwrap();
        let p = example_projection();
        let (_, i2, borchers) = induced_complex_structure(&h, &p, &grid(), 1e-9).unwrap();
        assert!(i2 < 1e-14);
        assert!(borchers < 1e-14);
    }

    #[test]
    fn p_equals_identity_gives_h_itself() {
        let h = builtin_symbol("example_beta_closed", &[0.5], 4).unwrap();
        let p = ComplexMatrix::identity(4);
        let (structure, i2, _) = induced_complex_structure(&h, &p, &grid(), 1e-9).unwrap();
        let x = 0.7;
        assert!(
            structure
                .eval(x)
                .unwrap()
                .sub(&h.eval(x).unwrap())
                .max_abs()
                < 1e-15
        );
        // h(x)² ≠ −1 for this symbol with p = 1.
        assert!(i2 > 1e-3);
    }
}

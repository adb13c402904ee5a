//! Property-based tests of the structural invariants: symmetries that must
//! hold for every admissible input, not just the curated oracle values.

use num_complex::Complex64;
use proptest::prelude::*;

use hankel_symbol_lab::measure::{builtin_measure, CarlesonMeasure};
use hankel_symbol_lab::numerics::{
    hermitian_spectrum, integrate_realline, ComplexMatrix, QuadratureSpec,
};
use hankel_symbol_lab::pick::pick_boundary;
use hankel_symbol_lab::simulator::{apply_pplus, apply_s, apply_theta, Grid, GridField};
use hankel_symbol_lab::symbol::{builtin_symbol, example_beta_closed};

fn spec() -> QuadratureSpec {
    QuadratureSpec::default()
}

/// A nonzero grid coordinate, log-distributed over six decades both signs.
fn nonzero_x() -> impl Strategy<Value = f64> {
    (prop::bool::ANY, -3.0f64..3.0).prop_map(|(neg, e)| {
        let x = 10f64.powf(e);
        if neg {
            -x
        } else {
            x
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// 𝓡 is even and 𝓘 is odd in x, for both a scalar and a matrix measure.
    #[test]
    fn boundary_parts_have_parity(x in nonzero_x()) {
        for mu in [
            builtin_measure("lebesgue2", &[], 1).unwrap(),
            builtin_measure("example_t", &[0.6], 4).unwrap(),
        ] {
            let (r_pos, i_pos) = pick_boundary(&mu, x, &spec()).unwrap();
            let (r_neg, i_neg) = pick_boundary(&mu, -x, &spec()).unwrap();
            prop_assert!(r_pos.sub(&r_neg).max_abs() < 1e-8);
            prop_assert!(i_pos.add(&i_neg).max_abs() < 1e-8);
            // sgn(x)·𝓘(x) is positive semidefinite.
            let signed = i_pos.scale_re(x.signum());
            let eigs = hermitian_spectrum(&signed.add(&signed.adjoint()).scale_re(0.5)).unwrap();
            prop_assert!(eigs[0] > -1e-9, "min eig {}", eigs[0]);
        }
    }

    /// The closed-form example symbol stays exactly unitary and keeps its
    /// two involution symmetries across the whole parameter range.
    #[test]
    fn closed_beta_symmetries(t in 0.0f64..=1.0, x in nonzero_x()) {
        let h = example_beta_closed(t, x);
        prop_assert!(h.unitary_defect() < 1e-12);
        // ♯: 𝒞 h(−x) 𝒞 = h(x); ♭: h(−x)* = h(x).
        let h_neg = example_beta_closed(t, -x);
        prop_assert!(h_neg.conj_entrywise().sub(&h).max_abs() < 1e-12);
        prop_assert!(h_neg.adjoint().sub(&h).max_abs() < 1e-12);
    }

    /// Moments of purely atomic measures are exactly linear in the weight
    /// function (no quadrature involved).
    #[test]
    fn atomic_moments_are_linear(
        lambdas in prop::collection::vec(0.01f64..100.0, 1..5),
        a in -3.0f64..3.0,
        b in -3.0f64..3.0,
    ) {
        // Deduplicate: atoms must sit at distinct locations.
        let mut sorted = lambdas;
        sorted.sort_by(f64::total_cmp);
        sorted.dedup_by(|p, q| (*p - *q).abs() < 1e-9);
        let mu = builtin_measure("atoms", &sorted, 1).unwrap();
        let g1 = |lam: f64| Complex64::new((-lam).exp(), lam.sin());
        let g2 = |lam: f64| Complex64::new(1.0 / (1.0 + lam), lam.cos());
        let combo = mu
            .moment(|lam| a * g1(lam) + b * g2(lam), &spec())
            .unwrap();
        let separate = mu
            .moment(g1, &spec())
            .unwrap()
            .scale(Complex64::new(a, 0.0))
            .add(&mu.moment(g2, &spec()).unwrap().scale(Complex64::new(b, 0.0)));
        prop_assert!(combo.sub(&separate).max_abs() < 1e-12);
    }

    /// Eigenvalues of a Hermitian matrix are invariant under a unitary
    /// change of basis.
    #[test]
    fn spectrum_is_unitarily_invariant(entries in prop::collection::vec(-2.0f64..2.0, 16)) {
        // Hermitize a randomly filled 3×3 complex matrix.
        let d = 3;
        let mut m = ComplexMatrix::zeros(d);
        for j in 0..d {
            for k in 0..d {
                let re = entries[j * d + k];
                let im = entries[9 + ((j + k) % 7)];
                m.set(j, k, Complex64::new(re, im));
            }
        }
        let m = m.add(&m.adjoint()).scale_re(0.5);
        // A fixed unitary: eigenvectors of a fixed Hermitian matrix.
        let fixed = ComplexMatrix::from_entries(
            d,
            &[
                Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(0.5, 0.0),
                Complex64::new(0.0, -1.0), Complex64::new(2.0, 0.0), Complex64::new(0.0, 0.3),
                Complex64::new(0.5, 0.0), Complex64::new(0.0, -0.3), Complex64::new(-1.0, 0.0),
            ],
        );
        let eig = hankel_symbol_lab::numerics::hermitian_eig(&fixed).unwrap();
        let mut u = ComplexMatrix::zeros(d);
        for (col, vec) in eig.vectors.iter().enumerate() {
            for row in 0..d {
                u.set(row, col, vec[row]);
            }
        }
        prop_assert!(u.unitary_defect() < 1e-10);

        let rotated = u.adjoint().mul(&m).mul(&u);
        let s1 = hermitian_spectrum(&m).unwrap();
        let s2 = hermitian_spectrum(&rotated.add(&rotated.adjoint()).scale_re(0.5)).unwrap();
        for (a, b) in s1.iter().zip(&s2) {
            prop_assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }

    /// Odd integrands integrate to zero over the real line.
    #[test]
    fn odd_realline_integrand_vanishes(c in 0.2f64..3.0, s in 0.5f64..2.0) {
        let f = |x: f64| {
            ComplexMatrix::scalar(Complex64::new(c * x * (-s * x * x).exp(), 0.0))
        };
        let val = integrate_realline(&f, &[], &spec()).unwrap().get(0, 0);
        prop_assert!(val.norm() < 1e-10, "{val}");
    }

    /// Simulator: the multiplier group law and θ-S commutation are exact for
    /// arbitrary shift parameters, and P₊ is idempotent on random fields.
    #[test]
    fn simulator_exact_identities(t in -5.0f64..5.0, seed in 0u64..1000) {
        use rand::SeedableRng;
        let grid = Grid::new(128, 8.0).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        use rand::Rng;
        let values: Vec<Complex64> = (0..grid.n)
            .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        let f = GridField::from_values(grid, 1, values).unwrap();
        let norm = f.norm();

        let back = apply_s(-t, &apply_s(t, &f));
        prop_assert!(back.sub(&f).norm() / norm < 1e-12);

        let h = builtin_symbol("i_sgn", &[], 1).unwrap();
        let lhs = apply_theta(&h, &apply_s(t, &f)).unwrap();
        let rhs = apply_s(-t, &apply_theta(&h, &f).unwrap());
        prop_assert!(lhs.sub(&rhs).norm() / norm < 1e-12);

        let once = apply_pplus(&f).unwrap();
        let twice = apply_pplus(&once).unwrap();
        prop_assert!(twice.sub(&once).norm() / norm < 1e-12);
    }

    /// Measure JSON round-trips losslessly.
    #[test]
    fn measure_json_roundtrip(t in 0.0f64..=1.0, lam in 0.1f64..10.0) {
        let mut json = builtin_measure("example_t", &[t], 4).unwrap().to_json();
        json.atoms.push(hankel_symbol_lab::measure::AtomJson {
            lambda: lam,
            weight_re: (0..4).map(|j| (0..4).map(|k| f64::from(u8::from(j == k))).collect()).collect(),
            weight_im: vec![vec![0.0; 4]; 4],
        });
        let mu = CarlesonMeasure::from_json(&json).unwrap();
        let json2 = mu.to_json();
        let a = serde_json::to_string(&json).unwrap();
        let b = serde_json::to_string(&json2).unwrap();
        prop_assert_eq!(a, b);
    }
}

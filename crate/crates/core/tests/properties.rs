use ansl::analysis::drift;
use ansl::degenerate::{solve_model, BoundaryConditions, DegenerateMesh, DegenerateProblem, Domain, FarField, Forcing};
use ansl::fixtures::torus_fixture;
use ansl::io::{read_f64_le, write_f64_le};
use ansl::jet::{boundary_values, jet_recursion, Field};
use ansl::quadrature::{nonuniform_simpson_weights, weighted_sum};
use ansl::spectral::PeriodicGrid;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn f64_sidecar_roundtrip(values in prop::collection::vec(any::<f64>(), 0..64)) {
        let back = read_f64_le(&write_f64_le(&values)).unwrap();
        prop_assert_eq!(back.len(), values.len());
        for (a, b) in back.iter().zip(&values) {
            prop_assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn drift_is_a_fraction(values in prop::collection::vec(1e-3f64..1e3, 1..8)) {
        let d = drift(&values);
        prop_assert!((0.0..1.0).contains(&d));
    }

    #[test]
    fn spectral_derivative_of_a_mode(k in 1usize..6, phase in 0.0f64..6.0) {
        let g = PeriodicGrid::new(32, 2.0 * std::f64::consts::PI);
        let f: Vec<f64> = g.nodes().iter().map(|s| (k as f64 * s + phase).sin()).collect();
        let d = g.derivative(&f, 1, None);
        for (s, v) in g.nodes().iter().zip(d) {
            prop_assert!((v - k as f64 * (k as f64 * s + phase).cos()).abs() < 1e-11);
        }
    }

    #[test]
    fn simpson_integrates_quadratics_on_any_nodes(
        gaps in prop::collection::vec(0.05f64..1.0, 2..12),
        c in prop::array::uniform3(-2.0f64..2.0),
    ) {
        let mut nodes = vec![0.0];
        for g in &gaps {
            nodes.push(nodes.last().unwrap() + g);
        }
        let p = |x: f64| c[0] + c[1] * x + c[2] * x * x;
        let anti = |x: f64| c[0] * x + c[1] * x * x / 2.0 + c[2] * x.powi(3) / 3.0;
        let vals: Vec<f64> = nodes.iter().map(|&x| p(x)).collect();
        let b = *nodes.last().unwrap();
        let q = weighted_sum(&vals, &nonuniform_simpson_weights(&nodes));
        prop_assert!((q - anti(b)).abs() < 1e-9 * (1.0 + anti(b).abs()));
    }

    #[test]
    fn torus_boundary_values_for_any_radii(a in 0.2f64..2.0, ratio in 1.2f64..5.0) {
        let r = a * ratio;
        let chart = torus_fixture(a, r).unwrap().chart(8, 16).unwrap();
        let jet = boundary_values(&chart).unwrap();
        for i in 0..8 {
            prop_assert!((jet.n[0][i] - 1.0 / a).abs() < 1e-10 * (1.0 / a));
            prop_assert!((jet.l[1][i] - 1.0 / (a * r)).abs() < 1e-10 / (a * r));
        }
        let jet = jet_recursion(&chart, 3).unwrap();
        for m in 0..=3 {
            prop_assert!(jet.derivative(Field::M, m).unwrap().iter().all(|v| v.abs() < 1e-12));
        }
    }

    #[test]
    fn degenerate_solver_is_linear(scale in -3.0f64..3.0, a in 1.6f64..4.0) {
        let domain = Domain::Periodic { period: 2.0 * std::f64::consts::PI, t_max: 2.0 };
        let mesh = DegenerateMesh { n_s: 16, n_tau: 16 };
        let sampled = solve_model(&DegenerateProblem::manufactured(a, 1, domain.clone()), mesh).unwrap();
        let n_t = sampled.t.len();
        let with_forcing = |values: Vec<f64>| {
            let mut p = DegenerateProblem::manufactured(a, 1, domain.clone());
            p.f = Forcing::Grid { n_s: 16, n_t, values };
            p.bc = BoundaryConditions { far_field: FarField::Zero };
            solve_model(&p, mesh).unwrap()
        };
        let v1 = with_forcing(sampled.f.clone());
        let v2 = with_forcing(sampled.f.iter().map(|v| v * scale).collect());
        for (x, y) in v1.u.iter().zip(&v2.u) {
            prop_assert!((x * scale - y).abs() < 1e-10 * (1.0 + x.abs()));
        }
    }
}

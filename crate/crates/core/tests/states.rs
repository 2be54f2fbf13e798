use approx::assert_relative_eq;
use gncs::states::{
    build_state, evolve, normalization_series, overlap, overlap_closed, probe_grid, verify_eigenstate,
    GncsSpec, DEFAULT_TOLERANCE,
};
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

#[test]
fn probe_grid_is_normalized_and_matches_series_norm() {
    for spec in probe_grid() {
        let s = build_state(&spec, DEFAULT_TOLERANCE).unwrap();
        assert!((s.norm_check() - 1.0).abs() <= 1e-12, "{spec:?}");
        let m = normalization_series(&spec, 1e-15).unwrap();
        assert_relative_eq!(s.normalization(), m, max_relative = 1e-10);
    }
}

#[test]
fn probe_grid_eigenstate_residuals() {
    for spec in probe_grid() {
        let s = build_state(&spec, DEFAULT_TOLERANCE).unwrap();
        let res = verify_eigenstate(&s, &spec).unwrap();
        assert!(res < 1e-10, "{spec:?}: {res:e}");
    }
}

#[test]
fn probe_grid_temporal_stability() {
    for spec in probe_grid() {
        let s = build_state(&spec, DEFAULT_TOLERANCE).unwrap();
        for t in [0.3, 1.0, PI] {
            let evolved = evolve(&s, t);
            let rebuilt = build_state(&spec.with_phase(spec.z_phase - 2.0 * t), DEFAULT_TOLERANCE).unwrap();
            let phase = Complex64::from_polar(1.0, -t * spec.params.kappa());
            assert_eq!(evolved.n_max(), rebuilt.n_max());
            for (a, b) in evolved.amplitudes().iter().zip(rebuilt.amplitudes()) {
                assert!((a - b * phase).norm() < 1e-12, "{spec:?} t={t}");
            }
        }
    }
}

#[test]
fn equal_r_overlaps_match_hypergeometric_form() {
    let grid = probe_grid();
    for (a, b) in grid.iter().zip(grid.iter().skip(3)) {
        if a.lambda() != b.lambda() || a.r() != b.r() {
            continue;
        }
        let sa = build_state(a, DEFAULT_TOLERANCE).unwrap();
        let sb = build_state(b, DEFAULT_TOLERANCE).unwrap();
        let direct = overlap(&sa, &sb).unwrap();
        let closed = overlap_closed(a, b, 1e-15).unwrap();
        assert!((direct - closed).norm() <= 1e-10 * closed.norm(), "{a:?} {b:?} {direct} {closed}");
    }
}

#[test]
fn mixed_r_overlaps_match_hypergeometric_form() {
    for &lambda in &[0.25, 1.5] {
        for &zsq in &[0.5, 4.0] {
            let a = GncsSpec::new(lambda, 2, f64::sqrt(zsq), 0.4).unwrap();
            let b = GncsSpec::new(lambda, 3, f64::sqrt(zsq), 0.4).unwrap();
            let direct = overlap(
                &build_state(&a, DEFAULT_TOLERANCE).unwrap(),
                &build_state(&b, DEFAULT_TOLERANCE).unwrap(),
            )
            .unwrap();
            let closed = overlap_closed(&a, &b, 1e-15).unwrap();
            assert!(closed.im.abs() < 1e-14);
            assert!((direct - closed).norm() <= 1e-10 * closed.norm());
            assert!(closed.re < 1.0);
        }
    }
}

#[test]
fn barut_girardello_states_are_lowering_eigenstates() {
    use gncs::algebra::build_truncated;
    let spec = GncsSpec::new(0.75, 2, 1.8, 1.1).unwrap();
    let s = build_state(&spec, DEFAULT_TOLERANCE).unwrap();
    let g = build_truncated(&spec.params, s.n_max()).unwrap();
    let lowered = g.j_minus.apply(s.amplitudes());
    for n in 0..s.n_max() {
        assert!((lowered[n] - spec.z() * s.amplitudes()[n]).norm() < 1e-13);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]
    #[test]
    fn random_states_are_normalized(
        lambda in -0.45f64..3.0,
        r in 1u32..=6,
        z in 0.0f64..4.0,
        phi in -PI..PI,
    ) {
        let z_abs = if r == 1 { z / 4.2 } else { z };
        let spec = GncsSpec::new(lambda, r, z_abs, phi).unwrap();
        let s = build_state(&spec, DEFAULT_TOLERANCE).unwrap();
        prop_assert!((s.norm_check() - 1.0).abs() <= 1e-12);
        prop_assert!(verify_eigenstate(&s, &spec).unwrap() < 1e-10);
    }
}

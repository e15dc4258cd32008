use monopole::repkit::{dirac_consistency, lowering_norm_ratio};
use proptest::prelude::*;

#[test]
fn half_integers_terminate_at_abs_s() {
    for s2 in -6i64..=6 {
        let s = s2 as f64 / 2.0;
        let r = dirac_consistency(s);
        assert!(r.consistent, "s = {s}");
        assert_eq!(r.j0.unwrap().twice(), s2.abs());
    }
}

#[test]
fn known_negative_norms() {
    assert_eq!(dirac_consistency(0.3).first_negative_norm_j, Some(0.0));
    assert_eq!(dirac_consistency(1.3).first_negative_norm_j, Some(1.0));
    assert!(lowering_norm_ratio(1.3, 1.0) < 0.0);
}

proptest! {
    #[test]
    fn generic_s_is_inconsistent(s in 0.0f64..4.0) {
        let near_half = ((2.0 * s).round() - 2.0 * s).abs() < 1e-6;
        prop_assume!(!near_half);
        let r = dirac_consistency(s);
        prop_assert!(!r.consistent);
        prop_assert!(r.first_negative_norm_j.is_some());
        prop_assert!(r.chain.last().unwrap().ratio < 0.0);
    }
}

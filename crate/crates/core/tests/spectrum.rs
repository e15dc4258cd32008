use std::sync::Arc;

use monopole::repkit::{build_basis, Generators, NRoute, RepBasis, RepLabel};
use monopole::spectrumkit::{
    diagonalize_and_match, hamiltonian_algebraic, hamiltonian_coupled, hamiltonian_free, landau_table, PhysicalParams,
};
use monopole::HalfInt;

fn basis(s: HalfInt, depth: i64, hbar: f64) -> Arc<RepBasis> {
    Arc::new(build_basis(RepLabel::with_depth(s, depth, hbar).unwrap()).unwrap())
}

#[test]
fn algebraic_hamiltonian_matches_landau_levels() {
    let params = PhysicalParams {
        mass: 2.0,
        radius: 0.5,
        e: 2.0,
        g: -0.75,
        hbar: 1.0,
    };
    let s = params.s().unwrap();
    assert_eq!(s, HalfInt::from_twice(3));
    let g = Generators::build(&basis(s, 6, 1.0), NRoute::WignerEckart);
    let h = hamiltonian_algebraic(&g, &params).unwrap();
    let m = diagonalize_and_match(&h, &landau_table(s, 6, &params), &params, 1e-10);
    assert!(m.all_ok, "{m:?}");
    assert_eq!(m.levels[0].found_degeneracy, 4);
}

#[test]
fn sign_of_s_does_not_change_energies() {
    let p = PhysicalParams::unit_for(HalfInt::HALF);
    let q = PhysicalParams::unit_for(-HalfInt::HALF);
    let a = landau_table(HalfInt::HALF, 5, &p);
    let b = landau_table(-HalfInt::HALF, 5, &q);
    for (x, y) in a.rows.iter().zip(&b.rows) {
        assert_eq!(x.energy, y.energy);
        assert_eq!(x.degeneracy, y.degeneracy);
    }
}

#[test]
fn zero_field_coupling_is_free_hamiltonian() {
    let s = HalfInt::ONE;
    let b = basis(s, 4, 1.0);
    let g = Generators::build(&b, NRoute::EdgeRecursion);
    let p = PhysicalParams::unit_for(s);
    let zero = [0, 1, 2].map(|_| monopole::repkit::Operator::zeros(&b));
    let h = hamiltonian_coupled(&g, &p, &zero).unwrap();
    assert_eq!(h.sub(&hamiltonian_free(&b, &p).unwrap()).max_norm(), 0.0);
}

#[test]
fn mismatched_parameters_are_rejected() {
    let b = basis(HalfInt::HALF, 3, 1.0);
    let g = Generators::build(&b, NRoute::EdgeRecursion);
    assert!(hamiltonian_algebraic(&g, &PhysicalParams::unit_for(HalfInt::ONE)).is_err());
    let bad = PhysicalParams {
        e: 1.0,
        g: 0.3,
        ..Default::default()
    };
    assert!(bad.s().is_err());
}

use monopole::liecohom::{coboundary_space, cocycle_space, h2_dim, h2_report, StructureConstants};

#[test]
fn control_algebras() {
    assert_eq!(h2_dim(&StructureConstants::e3()).unwrap(), 0);
    assert_eq!(h2_dim(&StructureConstants::abelian(6)).unwrap(), 15);
    assert_eq!(h2_dim(&StructureConstants::abelian(2)).unwrap(), 1);
    assert_eq!(h2_dim(&StructureConstants::e2()).unwrap(), 1);
    assert_eq!(coboundary_space(&StructureConstants::so3()).len(), 3);
}

#[test]
fn abelian_cocycles_are_the_whole_space() {
    let a = StructureConstants::abelian(6);
    assert_eq!(cocycle_space(&a).len(), 15);
    assert_eq!(h2_report(&a).unwrap().dim_coboundaries, 0);
}

use monopole::classical::{
    charges, cone_oracle, integrate, poisson_bracket_exact, poisson_bracket_fd, Charge, ClassicalParams, ClassicalState,
    Scheme, Vec3,
};
use proptest::prelude::*;

fn params(eg: f64) -> ClassicalParams {
    ClassicalParams {
        e: 1.0,
        g: eg,
        ..Default::default()
    }
}

#[test]
fn orbit_lies_on_the_cone() {
    let p = params(0.6);
    let s = ClassicalState::projected(Vec3::new(1.0, 0.2, -0.3), Vec3::new(0.1, 0.4, 0.9)).unwrap();
    let j = charges(&s, &p).unwrap().j;
    let tr = integrate(&s, &p, 1e-3, 4.0, Scheme::StrangRotation, 10).unwrap();
    for pt in &tr.points {
        assert!((pt.state.x.dot(&j) / j.norm() + 0.6 / j.norm()).abs() < 1e-6);
    }
    let exact = cone_oracle(&s, &p, 4.0);
    assert!((tr.last().state.x - exact.x).amax() < 1e-5);
}

#[test]
fn both_schemes_agree() {
    let p = params(-1.2);
    let s = ClassicalState::projected(Vec3::new(0.0, 1.0, 0.5), Vec3::new(1.0, 0.0, 0.0)).unwrap();
    let a = integrate(&s, &p, 1e-3, 2.0, Scheme::Rk4Project, 2000).unwrap();
    let b = integrate(&s, &p, 1e-4, 2.0, Scheme::StrangRotation, 20000).unwrap();
    assert!((a.last().state.x - b.last().state.x).amax() < 1e-7);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]
    #[test]
    fn brackets_converge(x in prop::array::uniform3(-1.0f64..1.0), v in prop::array::uniform3(-1.0f64..1.0),
                         eg in -2.0f64..2.0, i in 0usize..3, j in 0usize..3) {
        let xv = Vec3::from(x);
        prop_assume!(xv.norm() > 0.1);
        let s = ClassicalState::projected(xv, Vec3::from(v)).unwrap();
        let p = params(eg);
        for (a, b) in [(Charge::J(i), Charge::J(j)), (Charge::J(i), Charge::N(j)), (Charge::N(i), Charge::J(j)), (Charge::N(i), Charge::N(j))] {
            let err = (poisson_bracket_fd(a, b, &s, &p, 1e-3) - poisson_bracket_exact(a, b, &s, &p)).abs();
            prop_assert!(err < 1e-5, "{a:?},{b:?}: {err}");
        }
        let c = charges(&s, &p).unwrap();
        prop_assert!((s.x.dot(&c.j) + eg).abs() < 1e-12);
    }
}

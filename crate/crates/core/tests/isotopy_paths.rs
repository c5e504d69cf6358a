use laginv::classifier;
use laginv::mesh::{standard_fixture, FixtureKind};
use laginv::Error;
use laginv_testkit as kit;

#[test]
fn constant_path_is_trivial() {
    let mesh = standard_fixture(FixtureKind::Torus, 1).unwrap();
    let inv = classifier::n_invariant(&mesh, &kit::constant_path(&mesh, 4)).unwrap();
    assert_eq!(inv.c, vec![0, 0]);
    assert_eq!((inv.n, inv.d), (0, 0));
}

#[test]
fn constant_rotation_loop_factors_through_a_circle() {
    let mesh = standard_fixture(FixtureKind::Torus, 1).unwrap();
    let inv = classifier::n_invariant(&mesh, &kit::rotation_loop_path(&mesh, 8).unwrap()).unwrap();
    assert_eq!(inv.c, vec![0, 0]);
    assert_eq!(inv.d, 0);

    let sphere = standard_fixture(FixtureKind::Sphere, 1).unwrap();
    let inv = classifier::n_invariant(&sphere, &kit::rotation_loop_path(&sphere, 8).unwrap()).unwrap();
    assert!(inv.c.is_empty());
    assert_eq!(inv.d, 0);
}

#[test]
fn open_path_is_rejected() {
    let mesh = standard_fixture(FixtureKind::Torus, 1).unwrap();
    let err = classifier::n_invariant(&mesh, &kit::open_path(&mesh, 4).unwrap()).unwrap_err();
    assert!(matches!(err, Error::BoundaryConditionViolated { .. }), "{err:?}");
}

use laginv::classifier::{self, Sweep};
use laginv::homology;
use laginv::mesh::{standard_fixture, FixtureKind};
use laginv::suspension::{basis_2cycles, build_suspension};
use laginv_testkit as kit;

#[test]
fn hopf_map_has_unit_degree() {
    let (mesh, x, map) = kit::hopf_fixture(kit::HOPF_RESOLUTION, kit::HOPF_SLICES).unwrap();
    let inv = classifier::classify_on_mesh(&mesh, &x, &map).unwrap();
    assert!(inv.c.is_empty());
    assert_eq!(inv.n, 0);
    assert_eq!(inv.d.abs(), 1);
}

#[test]
fn sweeps_and_value_order_agree_on_hopf() {
    let (_, x, map) = kit::hopf_fixture(kit::HOPF_RESOLUTION, kit::HOPF_SLICES).unwrap();
    let (p, q) = classifier::linking_pair(&x, &map).unwrap();
    let down = classifier::linking_number(&x, &map, p, q, Sweep::Down).unwrap();
    let up = classifier::linking_number(&x, &map, p, q, Sweep::Up).unwrap();
    let swapped = classifier::linking_number(&x, &map, q, p, Sweep::Down).unwrap();
    assert_eq!(down, up);
    assert_eq!(down, swapped);
}

#[test]
fn time_reversal_negates_degree() {
    let (mesh, x, map) = kit::hopf_fixture(kit::HOPF_RESOLUTION, kit::HOPF_SLICES).unwrap();
    let d = classifier::classify_on_mesh(&mesh, &x, &map).unwrap().d;
    let flipped = kit::time_reversed(&x, &map).unwrap();
    assert_eq!(classifier::classify_on_mesh(&mesh, &x, &flipped).unwrap().d, -d);
}

#[test]
fn concatenation_adds_degrees() {
    let (mesh, x, map) = kit::hopf_fixture(kit::HOPF_RESOLUTION, kit::HOPF_SLICES).unwrap();
    let d = classifier::classify_on_mesh(&mesh, &x, &map).unwrap().d;
    let flipped = kit::time_reversed(&x, &map).unwrap();

    let (x2, twice) = kit::concatenate(&mesh, (&x, &map), (&x, &map)).unwrap();
    assert_eq!(classifier::classify_on_mesh(&mesh, &x2, &twice).unwrap().d, 2 * d);

    let (x0, cancel) = kit::concatenate(&mesh, (&x, &map), (&x, &flipped)).unwrap();
    assert_eq!(classifier::classify_on_mesh(&mesh, &x0, &cancel).unwrap().d, 0);
}

#[test]
fn constant_map_is_trivial() {
    let mesh = standard_fixture(FixtureKind::Torus, 1).unwrap();
    let x = build_suspension(&mesh, 4).unwrap();
    let inv = classifier::classify_on_mesh(&mesh, &x, &kit::north_map(&x).unwrap()).unwrap();
    assert_eq!(inv.c, vec![0, 0]);
    assert_eq!(inv.d, 0);
}

#[test]
fn handle_generator_has_class_k_zero() {
    for k in 1..=3 {
        let (mesh, x, map) = kit::handle_fixture(3, 8, k).unwrap();
        let basis = homology::preferred_basis(&mesh).unwrap();
        let cycles = basis_2cycles(&x, &mesh, &basis).unwrap();
        let values = classifier::regular_values(&x, &map, 3).unwrap();
        for p in values {
            assert_eq!(classifier::chern_class_at(&x, &map, &cycles, p), vec![k, 0], "k={k} p={p:?}");
        }
        let inv = classifier::classify(&x, &map, &cycles).unwrap();
        assert_eq!(inv.n, k as u64);
        assert!((0..k).contains(&inv.d));
    }
}

#[test]
fn hopf_cap_shifts_degree_mod_two() {
    let (mesh, xh, handle) = kit::handle_fixture(3, 8, 2).unwrap();
    let xc = build_suspension(&mesh, 10).unwrap();
    let cap = classifier::SphereMap::new(&xc, kit::hopf_cap_vectors(&mesh, &xc), true).unwrap();

    let cap_inv = classifier::classify_on_mesh(&mesh, &xc, &cap).unwrap();
    assert_eq!(cap_inv.c, vec![0, 0]);
    assert_eq!(cap_inv.d.abs(), 1);

    let base = classifier::classify_on_mesh(&mesh, &xh, &handle).unwrap();
    let (x, joined) = kit::concatenate(&mesh, (&xh, &handle), (&xc, &cap)).unwrap();
    let inv = classifier::classify_on_mesh(&mesh, &x, &joined).unwrap();
    assert_eq!(inv.c, vec![2, 0]);
    assert_eq!(inv.n, 2);
    assert_eq!((inv.d - base.d).rem_euclid(2), 1);

    let (p, q) = classifier::linking_pair(&x, &joined).unwrap();
    let down = classifier::linking_number(&x, &joined, p, q, Sweep::Down).unwrap();
    let up = classifier::linking_number(&x, &joined, p, q, Sweep::Up).unwrap();
    assert_eq!((down - up).rem_euclid(2), 0);
}

#[test]
fn hopf_degree_survives_refinement() {
    let degree = |r, t| {
        let (mesh, x, map) = kit::hopf_fixture(r, t).unwrap();
        classifier::classify_on_mesh(&mesh, &x, &map).unwrap().d
    };
    let d = degree(kit::HOPF_RESOLUTION, kit::HOPF_SLICES);
    assert_eq!(degree(kit::HOPF_RESOLUTION + 2, 2 * kit::HOPF_SLICES - 2), d);
    assert_eq!(degree(kit::HOPF_RESOLUTION, 2 * kit::HOPF_SLICES - 2), d);
}

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use laginv::forms::{self, FormField};
use laginv::homology::{self, CohomologyClass};
use laginv::io;
use laginv::lambda;
use laginv::mesh::{standard_fixture, FixtureKind, SurfaceMesh};
use laginv::suspension::{build_suspension, homology_profile};
use laginv::winding::{self, AngleField, MatrixField};
use laginv_testkit as kit;
use nalgebra::Matrix2;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn torus(r: usize) -> SurfaceMesh {
    standard_fixture(FixtureKind::Torus, r).unwrap()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Applies a random product of elementary integer operations.
fn unimodular_image(v: &[i64], ops: &[(usize, usize, i64, u8)]) -> Vec<i64> {
    let mut v = v.to_vec();
    let n = v.len();
    for &(i, j, k, kind) in ops {
        let (i, j) = (i % n, j % n);
        match kind % 3 {
            0 if i != j => v[i] += k * v[j],
            1 => v.swap(i, j),
            _ => v[i] = -v[i],
        }
    }
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multiplicity_is_unimodular_invariant(
        v in prop::collection::vec(-50i64..50, 1..6),
        ops in prop::collection::vec((0usize..6, 0usize..6, -3i64..=3, any::<u8>()), 20..40),
    ) {
        let before = homology::multiplicity(&CohomologyClass { pairings: v.clone() });
        let after = homology::multiplicity(&CohomologyClass { pairings: unimodular_image(&v, &ops) });
        prop_assert_eq!(before, after);
        prop_assert_eq!(before as i64, v.iter().fold(0, |a, &b| gcd(a, b)));
    }

    #[test]
    fn lambda_is_symmetric(seed in any::<u64>(), a in -1i64..=1, b in -1i64..=1, c in -1i64..=1, d in -1i64..=1) {
        let mesh = torus(4);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w1 = kit::random_scaled_realization(&mesh, &[a, b], &mut rng).unwrap();
        let w0 = kit::random_scaled_realization(&mesh, &[c, d], &mut rng).unwrap();
        let forward = lambda::lambda(&mesh, &w1, &w0).unwrap();
        let backward = lambda::lambda(&mesh, &w0, &w1).unwrap();
        prop_assert_eq!(forward.lambda, backward.lambda);
        prop_assert_eq!(forward.lambda as i64, gcd(a - c, b - d));
    }

    #[test]
    fn realization_soundness(a in -3i64..=3, b in -3i64..=3) {
        let mesh = torus(4);
        let field = lambda::realization(&mesh, &[a, b]).unwrap();
        let report = lambda::lambda(&mesh, &field, &forms::canonical_field(&mesh)).unwrap();
        prop_assert_eq!(report.lambda as i64, gcd(a, b));
    }

    #[test]
    fn winding_ignores_constant_offset(a in -2i64..=2, b in -2i64..=2, offset in -10.0f64..10.0) {
        let mesh = torus(4);
        let basis = homology::preferred_basis(&mesh).unwrap();
        let field = winding::realizing_angle_field(&mesh, &basis, &[a, b]).unwrap();
        let shifted = AngleField::new(&mesh, field.angles().iter().map(|t| t + offset).collect()).unwrap();
        prop_assert_eq!(
            winding::winding_class(&mesh, &shifted, &basis).unwrap(),
            winding::winding_class(&mesh, &field, &basis).unwrap()
        );
    }

    #[test]
    fn winding_ignores_small_homotopies(a in -2i64..=2, b in -2i64..=2, seed in any::<u64>()) {
        use rand::Rng;
        let mesh = torus(4);
        let basis = homology::preferred_basis(&mesh).unwrap();
        let field = winding::realizing_angle_field(&mesh, &basis, &[a, b]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // a vertex function: its increments sum to zero on every cycle
        let bumped = field.angles().iter().map(|t| t + rng.gen_range(-0.3..0.3)).collect();
        let bumped = AngleField::new(&mesh, bumped).unwrap();
        prop_assert_eq!(
            winding::winding_class(&mesh, &bumped, &basis).unwrap().pairings,
            vec![a, b]
        );
    }

    #[test]
    fn relative_automorphisms_are_mutually_inverse(seed in any::<u64>(), a in -1i64..=1, b in -1i64..=1) {
        let mesh = torus(2);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w1 = kit::random_scaled_realization(&mesh, &[a, b], &mut rng).unwrap();
        let w0 = kit::random_scaled_realization(&mesh, &[0, 0], &mut rng).unwrap();
        let fwd = forms::relative_automorphism(&w1, &w0).unwrap();
        let bwd = forms::relative_automorphism(&w0, &w1).unwrap();
        for (f, g) in fwd.matrices().iter().zip(bwd.matrices()) {
            prop_assert!((f * g - Matrix2::identity()).amax() < 1e-10);
        }
    }

    #[test]
    fn omega_block_is_linear(seed in any::<u64>(), s in -3.0f64..3.0, t in -3.0f64..3.0) {
        use rand::Rng;
        let mesh = torus(1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut random_field = || {
            let mats = (0..mesh.vertex_count())
                .map(|_| winding::rotation(rng.gen_range(-3.0..3.0)) * kit::random_spd(&mut rng))
                .collect();
            forms::realize_from_automorphism(&MatrixField::new(&mesh, mats).unwrap()).unwrap()
        };
        let (p, q) = (random_field(), random_field());
        let combined: Vec<_> = p.matrices().iter().zip(q.matrices()).map(|(x, y)| x * s + y * t).collect();
        let sum = FormField::nondegenerate(&mesh, combined, 1e-12);
        // the combination may be degenerate; linearity is checked on the raw blocks
        for v in 0..mesh.vertex_count() {
            let expected = forms::block_of(&p.matrices()[v]) * s + forms::block_of(&q.matrices()[v]) * t;
            let got = forms::block_of(&(p.matrices()[v] * s + q.matrices()[v] * t));
            prop_assert!((got - expected).amax() < 1e-12);
            if let Ok(sum) = &sum {
                if let Ok(block) = forms::omega_block(sum, v) {
                    prop_assert!((block - expected).amax() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn mesh_round_trip_preserves_statistics(kind in 0usize..3, r in 1usize..3) {
        let kind = [FixtureKind::Sphere, FixtureKind::Torus, FixtureKind::Genus2][kind];
        let mesh = standard_fixture(kind, r).unwrap();
        let text = io::to_json(&io::mesh_to_file(&mesh));
        let back = io::mesh_from_file(&io::parse(text.as_bytes()).unwrap()).unwrap();
        prop_assert_eq!(back.statistics(), mesh.statistics());
        prop_assert_eq!(back.fingerprint(), mesh.fingerprint());
    }
}

#[test]
fn compatible_j_identities_on_random_inputs() {
    let mut rng = ChaCha8Rng::seed_from_u64(1000);
    for _ in 0..1000 {
        let g = kit::random_metric(&mut rng);
        let w = kit::random_form(&mut rng);
        let j = forms::compatible_j(&g, &w, 0).unwrap();
        let (defect, min_eig) = forms::compatibility_defects(&g, &w, &j);
        assert!(defect < 1e-8, "{defect}");
        assert!(min_eig > 0.0);
    }
}

#[test]
fn realization_of_identity_is_canonical() {
    let mesh = torus(1);
    let id = MatrixField::new(&mesh, vec![Matrix2::identity(); mesh.vertex_count()]).unwrap();
    let field = forms::realize_from_automorphism(&id).unwrap();
    assert_eq!(field.matrices(), forms::canonical_field(&mesh).matrices());
}

#[test]
fn rotation_angles_round_trip() {
    let mesh = torus(2);
    let angles: Vec<f64> = (0..mesh.vertex_count()).map(|v| (v as f64 * 0.37) % TAU).collect();
    let field = AngleField::new(&mesh, angles.clone()).unwrap();
    let back = winding::rotation_angle_field(&mesh, &winding::rotation_field(&mesh, &field)).unwrap();
    for (a, b) in back.angles().iter().zip(&angles) {
        let d = winding::normalize_angle(a - b);
        assert!(d.min(TAU - d) < 1e-12);
    }
}

#[test]
fn global_frame_rotation_keeps_multiplicity() {
    let mesh = torus(4);
    let field = lambda::realization(&mesh, &[2, 4]).unwrap();
    let base = lambda::lambda(&mesh, &field, &forms::canonical_field(&mesh)).unwrap();
    for k in 1..6 {
        let r = winding::rotation(0.9 * k as f64);
        let frames: Vec<_> = mesh
            .frames()
            .iter()
            .map(|f| {
                let e = |c: usize| [r[(0, c)] * f[0][0] + r[(1, c)] * f[1][0], r[(0, c)] * f[0][1] + r[(1, c)] * f[1][1], r[(0, c)] * f[0][2] + r[(1, c)] * f[1][2]];
                [e(0), e(1)]
            })
            .collect();
        let rotated = mesh.clone().with_frames(frames, mesh.frame_source()).unwrap();
        let moved = FormField::new(&rotated, field.matrices().to_vec(), Default::default()).unwrap();
        let report = lambda::lambda(&rotated, &moved, &forms::canonical_field(&rotated)).unwrap();
        assert_eq!(report.lambda, base.lambda);
    }
}

#[test]
fn lambda_refinement_stability() {
    for w in [[2, 4], [3, 0], [1, -1]] {
        let coarse = torus(4);
        let fine = torus(8);
        let l = |m: &SurfaceMesh| {
            let f = lambda::realization(m, &w).unwrap();
            lambda::lambda(m, &f, &forms::canonical_field(m)).unwrap().lambda
        };
        assert_eq!(l(&coarse), l(&fine));
    }
}

#[test]
fn genus_zero_lambda_is_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for r in 1..=3 {
        let sphere = standard_fixture(FixtureKind::Sphere, r).unwrap();
        let w = kit::random_scaled_realization(&sphere, &[], &mut rng).unwrap();
        let report = lambda::lambda(&sphere, &w, &forms::canonical_field(&sphere)).unwrap();
        assert_eq!(report.lambda, 0);
        assert!(report.class.is_empty());
    }
}

#[test]
fn suspension_profile_is_subdivision_invariant() {
    for (kind, r) in [(FixtureKind::Sphere, 1), (FixtureKind::Torus, 1), (FixtureKind::Genus2, 1)] {
        let mesh = standard_fixture(kind, r).unwrap();
        let profiles: Vec<_> = [2, 3, 5].iter().map(|&t| homology_profile(&build_suspension(&mesh, t).unwrap())).collect();
        for p in &profiles {
            assert_eq!(p, &profiles[0]);
            assert_eq!(p.ranks(), (1, 2 * mesh.genus(), 1));
            assert!(p.is_free());
        }
    }
}

#[test]
fn every_face_has_two_cofaces() {
    for t in [2, 3, 5] {
        let mesh = torus(1);
        let x = build_suspension(&mesh, t).unwrap();
        let mut cofaces: BTreeMap<usize, Vec<i64>> = BTreeMap::new();
        for tet in 0..x.cells(3).len() {
            for (f, s) in x.boundary_of(3, tet) {
                cofaces.entry(f).or_default().push(s);
            }
        }
        assert_eq!(cofaces.len(), x.cells(2).len());
        for signs in cofaces.values() {
            assert_eq!(signs.len(), 2);
            assert_eq!(signs[0] + signs[1], 0);
        }
    }
}

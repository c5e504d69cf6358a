//! Independent recomputations of the fiber-linear algebra.

use laginv::classifier;
use laginv::forms;
use laginv::lambda;
use laginv::mesh::{standard_fixture, FixtureKind};
use laginv::winding::{self, MatrixField};
use laginv_testkit as kit;
use nalgebra::{Matrix2, Matrix4, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn svd_angle(m: &Matrix2<f64>) -> f64 {
    let svd = m.svd(true, true);
    let r = svd.u.unwrap() * svd.v_t.unwrap();
    r[(1, 0)].atan2(r[(0, 0)])
}

fn angle_gap(a: f64, b: f64) -> f64 {
    let d = winding::normalize_angle(a - b);
    d.min(std::f64::consts::TAU - d)
}

#[test]
fn polar_angle_matches_svd() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    while checked < 500 {
        let m = Matrix2::from_fn(|_, _| rng.gen_range(-3.0..3.0));
        if m.determinant() < 1e-3 {
            continue;
        }
        let got = winding::polar_angle(&m, 0).unwrap();
        assert!(angle_gap(got, svd_angle(&m)) < 1e-9, "{m}");
        checked += 1;
    }
}

#[test]
fn positive_factor_contributes_nothing() {
    for k in 0..16 {
        let alpha = -3.0 + 0.4 * k as f64;
        let m = Matrix2::new(2.0, 0.0, 0.0, 1.0) * winding::rotation(alpha);
        let got = winding::polar_angle(&m, 0).unwrap();
        assert!(angle_gap(got, alpha) < 1e-12);
        assert!(angle_gap(svd_angle(&m), alpha) < 1e-9);
    }
}

/// `−dα(U, V)` for `α = Σ ρᵢⱼ yⱼ dxᵢ`, by central differences at `y = 0`.
fn minus_d_alpha(rho: &Matrix2<f64>) -> Matrix4<f64> {
    // coordinates (x1, x2, y1, y2); α at a point applied to a vector
    let alpha = |p: &Vector4<f64>, v: &Vector4<f64>| {
        (0..2).map(|i| (0..2).map(|j| rho[(i, j)] * p[2 + j] * v[i]).sum::<f64>()).sum::<f64>()
    };
    let h = 1e-4;
    let basis = |k: usize| Vector4::from_fn(|i, _| if i == k { 1.0 } else { 0.0 });
    let base = Vector4::new(0.3, -0.7, 0.0, 0.0);
    let deriv = |u: &Vector4<f64>, v: &Vector4<f64>| {
        (alpha(&(base + u * h), v) - alpha(&(base - u * h), v)) / (2.0 * h)
    };
    Matrix4::from_fn(|a, b| {
        let (u, v) = (basis(a), basis(b));
        -(deriv(&u, &v) - deriv(&v, &u))
    })
}

#[test]
fn realization_matches_differentiated_primitive() {
    let mesh = standard_fixture(FixtureKind::Torus, 1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let rho = Matrix2::from_fn(|_, _| rng.gen_range(-2.0..2.0));
        if rho.determinant() < 0.1 {
            continue;
        }
        let field = MatrixField::new(&mesh, vec![rho; mesh.vertex_count()]).unwrap();
        let w = forms::realize_from_automorphism(&field).unwrap().matrices()[0];
        let oracle = minus_d_alpha(&rho);
        assert!((w - oracle).amax() < 1e-8, "{w}\n{oracle}");
    }
}

#[test]
fn recovered_automorphism_of_rotation_realization() {
    let mesh = standard_fixture(FixtureKind::Torus, 1).unwrap();
    for k in 0..8 {
        let theta = 0.7 * k as f64 - 2.5;
        let rho = winding::rotation(theta);
        let w = minus_d_alpha(&rho);
        let field = forms::FormField::new(&mesh, vec![w; mesh.vertex_count()], forms::Tolerances { antisym: 1e-8, lagrangian: 1e-8 }).unwrap();
        let back = forms::relative_automorphism(&field, &forms::canonical_field(&mesh)).unwrap();
        assert!((back.matrices()[0] - rho).amax() < 1e-8);
    }
}

#[test]
fn compatible_j_has_eigenvalues_plus_minus_i() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let g = kit::random_metric(&mut rng);
        let w = kit::random_form(&mut rng);
        let j = forms::compatible_j(&g, &w, 0).unwrap();
        for ev in j.complex_eigenvalues().iter() {
            assert!(ev.re.abs() < 1e-7 && (ev.im.abs() - 1.0).abs() < 1e-7, "{ev}");
        }
        assert!((j * j + Matrix4::identity()).amax() < 1e-9);
        // g-skew, and ω(u, Jv) = uᵀWJv is a metric
        assert!((j.transpose() * g + g * j).amax() < 1e-8 * g.amax());
        let p = w * j;
        assert!((p - p.transpose()).amax() < 1e-8 * p.amax());
        assert!(((p + p.transpose()) / 2.0).symmetric_eigenvalues().min() > 0.0);
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

#[test]
fn realization_lambda_is_gcd() {
    let torus = standard_fixture(FixtureKind::Torus, 4).unwrap();
    let can = forms::canonical_field(&torus);
    for w in [[2, 4], [3, 0], [1, 1], [2, 2], [0, 0], [-3, 3], [2, -3]] {
        let field = lambda::realization(&torus, &w).unwrap();
        let report = lambda::lambda(&torus, &field, &can).unwrap();
        assert_eq!(report.lambda as i64, gcd(w[0], w[1]), "{w:?}");
    }
    let g2 = standard_fixture(FixtureKind::Genus2, 4).unwrap();
    let can = forms::canonical_field(&g2);
    for w in [[1, 0, 0, 0], [0, 3, 0, -3], [2, 2, 0, 4], [4, 0, 0, 0], [0, 2, 0, 2]] {
        let field = lambda::realization(&g2, &w).unwrap();
        let report = lambda::lambda(&g2, &field, &can).unwrap();
        let expected = w.iter().fold(0, |a, &b| gcd(a, b));
        assert_eq!(report.lambda as i64, expected, "{w:?}");
    }
}

fn flat(m: &Matrix4<f64>) -> Vec<f64> {
    m.iter().copied().collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Coordinates by Gram–Schmidt in the flattened Frobenius geometry.
fn gram_schmidt_coordinates(j: &Matrix4<f64>, j_ref: &Matrix4<f64>, j_plus: &Matrix4<f64>) -> [f64; 3] {
    let u3: Vec<f64> = {
        let v = flat(j_ref);
        let n = dot(&v, &v).sqrt();
        v.iter().map(|x| x / n).collect()
    };
    let u1: Vec<f64> = {
        let v = flat(j_plus);
        let c = dot(&v, &u3);
        let r: Vec<f64> = v.iter().zip(&u3).map(|(a, b)| a - c * b).collect();
        let n = dot(&r, &r).sqrt();
        r.iter().map(|x| x / n).collect()
    };
    let u2: Vec<f64> = {
        let m1 = Matrix4::from_column_slice(&u1);
        let v = flat(&(m1 * j_ref));
        let n = dot(&v, &v).sqrt();
        v.iter().map(|x| x / n).collect()
    };
    assert!(dot(&u2, &u1).abs() < 1e-9 && dot(&u2, &u3).abs() < 1e-9);
    let jv = flat(j);
    let c = [dot(&jv, &u1), dot(&jv, &u2), dot(&jv, &u3)];
    let n = (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt();
    [c[0] / n, c[1] / n, c[2] / n]
}

#[test]
fn s2_coordinates_match_gram_schmidt() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let id = forms::identity_metric();
    let j_ref = forms::compatible_j(&id, &forms::canonical_matrix(), 0).unwrap();
    let j_plus = forms::compatible_j(&id, &forms::symplectic_plus_matrix(), 0).unwrap();
    for _ in 0..200 {
        let j = forms::compatible_j(&id, &kit::random_form(&mut rng), 0).unwrap();
        let got = classifier::s2_coordinates(&j, &j_ref, &j_plus, 0).unwrap();
        let norm = (got[0] * got[0] + got[1] * got[1] + got[2] * got[2]).sqrt();
        assert!((norm - 1.0).abs() < 1e-9);
        let oracle = gram_schmidt_coordinates(&j, &j_ref, &j_plus);
        for k in 0..3 {
            assert!((got[k] - oracle[k]).abs() < 1e-9, "{got:?} {oracle:?}");
        }
    }
}

#[test]
fn rotation_realization_class_recovered() {
    let torus = standard_fixture(FixtureKind::Torus, 4).unwrap();
    let basis = laginv::homology::preferred_basis(&torus).unwrap();
    for periods in [[1, 0], [0, 2], [2, 4], [-1, 3]] {
        let field = lambda::realization(&torus, &periods).unwrap();
        let rho = forms::relative_automorphism(&field, &forms::canonical_field(&torus)).unwrap();
        let class = winding::matrix_winding_class(&torus, &rho, &basis).unwrap();
        assert_eq!(class.pairings, periods.to_vec());
    }
}

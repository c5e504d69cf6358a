//! Independent recomputations of the combinatorial and winding values.

use std::collections::BTreeSet;
use std::f64::consts::{PI, TAU};

use laginv::homology;
use laginv::mesh::{grid_torus, standard_fixture, FixtureKind, SurfaceMesh};
use laginv::winding::{self, AngleField};

fn direct_euler(mesh: &SurfaceMesh) -> i64 {
    let mut edges = BTreeSet::new();
    let mut verts = BTreeSet::new();
    for t in mesh.triangles() {
        for k in 0..3 {
            let (a, b) = (t[k], t[(k + 1) % 3]);
            edges.insert((a.min(b), a.max(b)));
            verts.insert(a);
        }
    }
    verts.len() as i64 - edges.len() as i64 + mesh.triangles().len() as i64
}

#[test]
fn grid_torus_counts() {
    let m = grid_torus(3, 3).unwrap();
    assert_eq!(m.vertex_count(), 9);
    assert_eq!(m.triangles().len(), 18);
    assert_eq!(direct_euler(&m), 0);
    assert_eq!(m.genus(), 1);
}

#[test]
fn fixture_genus_matches_direct_count() {
    for r in 1..=4 {
        for (kind, g) in [(FixtureKind::Sphere, 0), (FixtureKind::Torus, 1), (FixtureKind::Genus2, 2)] {
            let m = standard_fixture(kind, r).unwrap();
            assert_eq!(direct_euler(&m), 2 - 2 * g as i64, "{kind:?} r={r}");
            assert_eq!(m.genus(), g);
        }
    }
}

#[test]
fn torus_intersection_form_matches_crossing_count() {
    let m = standard_fixture(FixtureKind::Torus, 2).unwrap();
    let basis = homology::grid_basis(&m).unwrap();
    let form = homology::intersection_form(&m, &basis).unwrap();
    // the two grid loops meet transversally at their shared vertices
    let support = |k: usize| -> BTreeSet<i64> {
        basis.cycles()[k].edge_list(&m).iter().flat_map(|e| [e[0], e[1]]).collect()
    };
    let crossings = support(0).intersection(&support(1)).count() as i64;
    assert_eq!(crossings, 1);
    assert_eq!(form[0][0], 0);
    assert_eq!(form[1][1], 0);
    assert_eq!(form[0][1].abs(), crossings);
    assert_eq!(form[1][0], -form[0][1]);
}

fn permutation_det(a: &[Vec<i64>]) -> i64 {
    fn perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in perms(n - 1) {
            for k in 0..n {
                let mut q = p.clone();
                q.insert(k, n - 1);
                out.push(q);
            }
        }
        out
    }
    perms(a.len())
        .into_iter()
        .map(|p| {
            let mut inversions = 0;
            for i in 0..p.len() {
                for j in i + 1..p.len() {
                    if p[i] > p[j] {
                        inversions += 1;
                    }
                }
            }
            let sign = if inversions % 2 == 0 { 1 } else { -1 };
            sign * p.iter().enumerate().map(|(i, &j)| a[i][j]).product::<i64>()
        })
        .sum()
}

#[test]
fn genus2_intersection_form_is_unimodular() {
    for r in 1..=2 {
        let m = standard_fixture(FixtureKind::Genus2, r).unwrap();
        let basis = homology::preferred_basis(&m).unwrap();
        assert_eq!(basis.len(), 4);
        let form = homology::intersection_form(&m, &basis).unwrap();
        assert_eq!(permutation_det(&form).abs(), 1);
    }
}

fn grid_angles(m: &SurfaceMesh, f: impl Fn(usize, usize) -> f64) -> AngleField {
    let l = m.lattice().unwrap();
    AngleField::new(m, l.coords.iter().map(|&[i, j]| f(i, j)).collect()).unwrap()
}

fn wrap(a: f64) -> f64 {
    let mut a = a % TAU;
    if a > PI {
        a -= TAU;
    }
    if a < -PI {
        a += TAU;
    }
    a
}

/// Σ over the cycle's edges of the wrapped angle difference, in turns.
fn summed_winding(m: &SurfaceMesh, field: &AngleField, basis: &homology::CycleBasis) -> Vec<i64> {
    basis
        .cycles()
        .iter()
        .map(|c| {
            let total: f64 = c
                .edge_list(m)
                .iter()
                .map(|&[a, b, k]| k as f64 * wrap(field.angles()[b as usize] - field.angles()[a as usize]))
                .sum();
            (total / TAU).round() as i64
        })
        .collect()
}

#[test]
fn meridian_increments_are_uniform() {
    for n in [3, 5, 8] {
        let m = grid_torus(n, n).unwrap();
        let field = grid_angles(&m, |i, _| TAU * i as f64 / n as f64);
        let lifted = winding::lift_edge_increments(&m, &field).unwrap();
        let coords = &m.lattice().unwrap().coords;
        for (e, &inc) in m.edges().iter().zip(lifted.values()) {
            let di = (coords[e[1]][0] + n - coords[e[0]][0]) % n;
            let expected = match di {
                0 => 0.0,
                1 => TAU / n as f64,
                _ => -TAU / n as f64,
            };
            assert!((inc - expected).abs() < 1e-12);
        }
        for t in 0..m.triangles().len() {
            let s: f64 = m.triangle_edges(t).iter().map(|&(e, sg)| sg as f64 * lifted.values()[e]).sum();
            assert!(s.abs() < 1e-12);
        }
    }
}

#[test]
fn grid_winding_matches_direct_summation() {
    for n in [11, 13, 16] {
        let m = grid_torus(n, n).unwrap();
        let basis = homology::grid_basis(&m).unwrap();
        for (a, b) in [(1, 0), (0, 1), (2, 3), (-1, 2)] {
            let field = grid_angles(&m, |i, j| TAU * (a * i as i64 + b * j as i64) as f64 / n as f64);
            let class = winding::winding_class(&m, &field, &basis).unwrap();
            let oracle = summed_winding(&m, &field, &basis);
            assert_eq!(class.pairings, oracle, "n={n} ({a},{b})");
            assert_eq!(oracle.iter().map(|x| x.abs()).collect::<BTreeSet<_>>(), [a.abs(), b.abs()].into());
        }
    }
}

#[test]
fn rotation_field_class_matches_direct_summation() {
    let n = 8;
    let m = grid_torus(n, n).unwrap();
    let basis = homology::grid_basis(&m).unwrap();
    let field = grid_angles(&m, |i, _| TAU * i as f64 / n as f64);
    let rot = winding::rotation_field(&m, &field);
    let class = winding::matrix_winding_class(&m, &rot, &basis).unwrap();
    assert_eq!(class.pairings, summed_winding(&m, &field, &basis));
    assert_eq!(homology::multiplicity(&class), 1);
}

#[test]
fn coboundaries_pair_to_zero() {
    let m = standard_fixture(FixtureKind::Genus2, 1).unwrap();
    let basis = homology::preferred_basis(&m).unwrap();
    let f: Vec<f64> = (0..m.vertex_count()).map(|v| ((v * 37) % 11) as f64 - 5.0).collect();
    let df = homology::coboundary(&m, &f);
    for c in basis.cycles() {
        assert_eq!(homology::pair(&df, c).unwrap(), 0.0);
    }
}

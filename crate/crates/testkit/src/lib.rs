//! Fixture generators shared by the test suites and the shipped `fixtures/` files.

use std::f64::consts::{PI, TAU};
use std::path::Path;

use laginv::classifier::{IsotopyPath, SphereMap, Vec3, NORTH};
use laginv::forms::{self, FormField};
use laginv::homology;
use laginv::io;
use laginv::mesh::{standard_fixture, FixtureKind, SurfaceMesh};
use laginv::suspension::{build_suspension, SuspensionComplex};
use laginv::winding::{self, MatrixField};
use laginv::Result;
use nalgebra::{Matrix2, Matrix4};
use rand::Rng;

/// Unit quaternion `(a, b, c, d)` acting on `k = (0, 0, 1)`: `q k q̄`.
pub fn hopf(q: [f64; 4]) -> Vec3 {
    let [a, b, c, d] = q;
    let v = [2.0 * (b * d + a * c), 2.0 * (c * d - a * b), a * a - b * b - c * c + d * d];
    normalize(v)
}

pub fn normalize(v: Vec3) -> Vec3 {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

/// Time parameter of slice `s`: 0 on slice 1, 1 on slice `T−1`.
pub fn slice_time(x: &SuspensionComplex, s: usize) -> f64 {
    (s - 1) as f64 / (x.slices() - 2) as f64
}

/// Map sending the apex to the north pole and slice `s` vertex `v` to `f(t, v)`.
pub fn map_from(x: &SuspensionComplex, f: impl Fn(f64, usize) -> Vec3) -> Vec<Vec3> {
    let mut out = vec![NORTH; x.vertex_count()];
    for s in 1..x.slices() {
        let t = slice_time(x, s);
        for v in 0..x.base_vertex_count() {
            out[x.vertex(s, v)] = f(t, v);
        }
    }
    out
}

/// Hopf fibration composed with the suspension `S²×[0,1] → S³`,
/// `(x, t) ↦ cos πt + sin πt · x`, on the sphere fixture.
pub fn hopf_fixture(resolution: usize, slices: usize) -> Result<(SurfaceMesh, SuspensionComplex, SphereMap)> {
    let mesh = standard_fixture(FixtureKind::Sphere, resolution)?;
    let x = build_suspension(&mesh, slices)?;
    let pts = mesh.vertices().to_vec();
    let vectors = map_from(&x, |t, v| {
        if t == 0.0 || t == 1.0 {
            return NORTH;
        }
        let p = normalize(pts[v]);
        let (s, c) = (PI * t).sin_cos();
        hopf([c, s * p[0], s * p[1], s * p[2]])
    });
    let map = SphereMap::new(&x, vectors, true)?;
    Ok((mesh, x, map))
}

/// The map precomposed with time reversal (an orientation-reversing self-map of `X`).
pub fn time_reversed(x: &SuspensionComplex, map: &SphereMap) -> Result<SphereMap> {
    let last = x.slices() - 1;
    let mut out = map.vectors().to_vec();
    for s in 1..=last {
        for v in 0..x.base_vertex_count() {
            out[x.vertex(s, v)] = map.vectors()[x.vertex(last + 1 - s, v)];
        }
    }
    SphereMap::new(x, out, map.is_boundary_conditioned())
}

/// Concatenation in time of two boundary-conditioned maps on the same mesh;
/// the shared north slice is kept once.
pub fn concatenate(
    mesh: &SurfaceMesh,
    (x1, f1): (&SuspensionComplex, &SphereMap),
    (x2, f2): (&SuspensionComplex, &SphereMap),
) -> Result<(SuspensionComplex, SphereMap)> {
    let t = x1.slices() + x2.slices() - 2;
    let x = build_suspension(mesh, t)?;
    let mut out = vec![NORTH; x.vertex_count()];
    for v in 0..mesh.vertex_count() {
        for s in 1..x1.slices() {
            out[x.vertex(s, v)] = f1.vectors()[x1.vertex(s, v)];
        }
        for s in 2..x2.slices() {
            out[x.vertex(x1.slices() - 2 + s, v)] = f2.vectors()[x2.vertex(s, v)];
        }
    }
    let map = SphereMap::new(&x, out, true)?;
    Ok((x, map))
}

fn spherical(theta: f64, phi: f64) -> Vec3 {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    [st * cp, st * sp, ct]
}

/// The handle generator on a grid torus: for `t ≤ ½` the point at polar angle
/// `2πt` and longitude `−2πk·i/rows`; for `t ≥ ½` back to the north pole along
/// the zero meridian. Its class is `(k, 0)` against the grid basis.
pub fn handle_map_vectors(mesh: &SurfaceMesh, x: &SuspensionComplex, k: i64) -> Vec<Vec3> {
    let lattice = mesh.lattice().expect("grid torus");
    let rows = lattice.rows as f64;
    map_from(x, |t, v| {
        if t == 0.0 || t == 1.0 {
            return NORTH;
        }
        if t <= 0.5 {
            spherical(TAU * t, -TAU * k as f64 * lattice.coords[v][0] as f64 / rows)
        } else {
            spherical(TAU * (1.0 - t), 0.0)
        }
    })
}

pub fn handle_fixture(resolution: usize, slices: usize, k: i64) -> Result<(SurfaceMesh, SuspensionComplex, SphereMap)> {
    let mesh = standard_fixture(FixtureKind::Torus, resolution)?;
    let x = build_suspension(&mesh, slices)?;
    let map = SphereMap::new(&x, handle_map_vectors(&mesh, &x, k), true)?;
    Ok((mesh, x, map))
}

/// A Hopf map supported in a ball of `(lattice disc) × (time interval)`:
/// `r ↦ h(cos π|r|, sin π|r| · r/|r|)`, north outside the ball.
pub fn hopf_cap_vectors(mesh: &SurfaceMesh, x: &SuspensionComplex) -> Vec<Vec3> {
    let lattice = mesh.lattice().expect("grid torus");
    let (rows, cols) = (lattice.rows as f64, lattice.cols as f64);
    let radius = rows.min(cols) / 3.0;
    map_from(x, |t, v| {
        let [i, j] = lattice.coords[v];
        let r = [
            (i as f64 - rows / 2.0) / radius,
            (j as f64 - cols / 2.0) / radius,
            (t - 0.5) / 0.4,
        ];
        let len = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
        if len >= 1.0 {
            return NORTH;
        }
        if len == 0.0 {
            return hopf([1.0, 0.0, 0.0, 0.0]);
        }
        let (s, c) = (PI * len).sin_cos();
        hopf([c, s * r[0] / len, s * r[1] / len, s * r[2] / len])
    })
}

pub fn north_map(x: &SuspensionComplex) -> Result<SphereMap> {
    SphereMap::new(x, vec![NORTH; x.vertex_count()], true)
}

/// `ω_ρ` for `ρ = R(θ)·P` with `θ` realizing `periods` and `P` a random SPD scaling per vertex.
pub fn random_scaled_realization(mesh: &SurfaceMesh, periods: &[i64], rng: &mut impl Rng) -> Result<FormField> {
    let base = rotation_field_for(mesh, periods)?;
    let mats = base.matrices().iter().map(|r| r * random_spd(rng)).collect();
    forms::realize_from_automorphism(&MatrixField::new(mesh, mats)?)
}

fn rotation_field_for(mesh: &SurfaceMesh, periods: &[i64]) -> Result<MatrixField> {
    if mesh.genus() == 0 {
        return MatrixField::new(mesh, vec![Matrix2::identity(); mesh.vertex_count()]);
    }
    let basis = homology::preferred_basis(mesh)?;
    let angles = winding::realizing_angle_field(mesh, &basis, periods)?;
    Ok(winding::rotation_field(mesh, &angles))
}

/// A random SPD 2×2 matrix: a positive scale times a mildly anisotropic factor,
/// so the polar angle of `P·Q⁻¹` stays well below a quarter turn.
pub fn random_spd(rng: &mut impl Rng) -> Matrix2<f64> {
    let (a, b, c) = (rng.gen_range(-0.2..0.2), rng.gen_range(-0.2..0.2), rng.gen_range(-0.2..0.2));
    (Matrix2::identity() + Matrix2::new(a, b, b, c)) * rng.gen_range(0.5..2.0)
}

/// A random SPD 4×4 metric.
pub fn random_metric(rng: &mut impl Rng) -> Matrix4<f64> {
    let a = Matrix4::from_fn(|_, _| rng.gen_range(-1.0..1.0));
    a * a.transpose() + Matrix4::identity() * rng.gen_range(0.1..2.0)
}

/// A random antisymmetric 4×4 matrix with positive Pfaffian.
pub fn random_form(rng: &mut impl Rng) -> Matrix4<f64> {
    loop {
        let a = Matrix4::from_fn(|_, _| rng.gen_range(-2.0..2.0));
        let w = a - a.transpose();
        let pf = forms::pfaffian(&w);
        if pf.abs() > 1e-3 {
            if pf > 0.0 {
                return w;
            }
            // swapping e¹ and e² reverses the orientation
            let mut p = Matrix4::<f64>::identity();
            p.swap_rows(2, 3);
            return p * w * p;
        }
    }
}

/// Random winding vector with entries in `-range..=range`.
pub fn random_periods(len: usize, range: i64, rng: &mut impl Rng) -> Vec<i64> {
    (0..len).map(|_| rng.gen_range(-range..=range)).collect()
}

/// `T + 1` identical slices `(ω_can, ω⁺)` with the identity metric.
pub fn constant_path(mesh: &SurfaceMesh, steps: usize) -> IsotopyPath {
    let slice = (forms::canonical_field(mesh), forms::symplectic_plus_field(mesh));
    IsotopyPath { slices: vec![slice; steps + 1], metric: forms::identity_metric() }
}

/// Slices `ω_{R(2πt)}` for `t = 0, 1/T, …, 1` with constant `ω⁺`.
pub fn rotation_loop_path(mesh: &SurfaceMesh, steps: usize) -> Result<IsotopyPath> {
    let slices = (0..=steps)
        .map(|t| {
            let angle = TAU * t as f64 / steps as f64;
            let rho = MatrixField::new(mesh, vec![winding::rotation(angle); mesh.vertex_count()])?;
            Ok((forms::realize_from_automorphism(&rho)?, forms::symplectic_plus_field(mesh)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(IsotopyPath { slices, metric: forms::identity_metric() })
}

/// A path whose final slice is rotated by a quarter turn, violating the boundary condition.
pub fn open_path(mesh: &SurfaceMesh, steps: usize) -> Result<IsotopyPath> {
    let mut path = constant_path(mesh, steps);
    let rho = MatrixField::new(mesh, vec![winding::rotation(PI / 2.0); mesh.vertex_count()])?;
    path.slices[steps].0 = forms::realize_from_automorphism(&rho)?;
    Ok(path)
}

/// Writes the shipped fixture files into `dir`.
pub fn write_fixtures(dir: &Path) -> Result<()> {
    let write = |name: &str, text: String| io::write_bytes(&dir.join(name), text.as_bytes());

    write(
        "tetrahedron.json",
        r#"{
  "schema_version": 1,
  "vertices": [["1", "1", "1"], ["1", "-1", "-1"], ["-1", "1", "-1"], ["-1", "-1", "1"]],
  "triangles": [[0, 1, 2], [0, 3, 1], [0, 2, 3], [1, 3, 2]]
}
"#
        .to_string(),
    )?;
    write(
        "non_manifold.json",
        r#"{
  "schema_version": 1,
  "vertices": [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1], [0, 0, -1], [1, 1, 1]],
  "triangles": [[0, 1, 2], [0, 2, 3], [0, 3, 1], [1, 3, 2], [0, 1, 4], [1, 2, 5]]
}
"#
        .to_string(),
    )?;

    let sphere = standard_fixture(FixtureKind::Sphere, 2)?;
    write("sphere.json", io::to_json(&io::mesh_to_file(&sphere)))?;
    write("sphere_omega_can.json", io::to_json(&io::form_to_file(&forms::canonical_field(&sphere))))?;

    let torus = standard_fixture(FixtureKind::Torus, 4)?;
    write("torus.json", io::to_json(&io::mesh_to_file(&torus)))?;
    write("torus_omega_can.json", io::to_json(&io::form_to_file(&forms::canonical_field(&torus))))?;
    let w24 = laginv::lambda::realization(&torus, &[2, 4])?;
    write("torus_realization_2_4.json", io::to_json(&io::form_to_file(&w24)))?;

    let coarse = standard_fixture(FixtureKind::Torus, 1)?;
    write("torus_coarse.json", io::to_json(&io::mesh_to_file(&coarse)))?;
    write("torus_coarse_constant_path.json", io::to_json(&io::path_to_file(&constant_path(&coarse, 4))))?;
    write("torus_coarse_open_path.json", io::to_json(&io::path_to_file(&open_path(&coarse, 4)?)))?;

    let genus2 = standard_fixture(FixtureKind::Genus2, 1)?;
    write("genus2.json", io::to_json(&io::mesh_to_file(&genus2)))?;

    let (hopf_mesh, _, hopf_map) = hopf_fixture(HOPF_RESOLUTION, HOPF_SLICES)?;
    write("hopf_sphere.json", io::to_json(&io::mesh_to_file(&hopf_mesh)))?;
    write("hopf_map.json", io::to_json(&io::sphere_map_to_file(&hopf_map)))?;
    let x = build_suspension(&coarse, 4)?;
    write("torus_coarse_constant_map.json", io::to_json(&io::sphere_map_to_file(&north_map(&x)?)))?;
    Ok(())
}

pub const HOPF_RESOLUTION: usize = 4;
pub const HOPF_SLICES: usize = 12;

/// Names of the files written by [`write_fixtures`].
pub const FIXTURE_FILES: &[&str] = &[
    "tetrahedron.json",
    "non_manifold.json",
    "sphere.json",
    "sphere_omega_can.json",
    "torus.json",
    "torus_omega_can.json",
    "torus_realization_2_4.json",
    "torus_coarse.json",
    "torus_coarse_constant_path.json",
    "torus_coarse_open_path.json",
    "genus2.json",
    "hopf_sphere.json",
    "hopf_map.json",
    "torus_coarse_constant_map.json",
];

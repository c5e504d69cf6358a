//! Winding classes of circle-valued and `GL⁺(2,ℝ)`-valued vertex data.

use std::collections::VecDeque;
use std::f64::consts::{PI, TAU};

use nalgebra::Matrix2;

use crate::error::{Error, Result};
use crate::homology::{self, CohomologyClass, CycleBasis, IntegerCocycle};
use crate::mesh::SurfaceMesh;

/// An edge difference within this distance of ±π has no unambiguous lift.
pub const LIFT_TIE_TOLERANCE: f64 = 1e-9;
/// Condition number above which a matrix is treated as singular.
pub const MAX_CONDITION: f64 = 1e12;
const NEWTON_THRESHOLD: f64 = 1e-14;
const NEWTON_MAX_ITERATIONS: usize = 100;

/// Per-vertex angle in `[0, 2π)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleField {
    angles: Vec<f64>,
    mesh: u64,
}

impl AngleField {
    pub fn new(mesh: &SurfaceMesh, angles: Vec<f64>) -> Result<Self> {
        if angles.len() != mesh.vertex_count() {
            return Err(Error::WrongLength { found: angles.len(), expected: mesh.vertex_count() });
        }
        if let Some(a) = angles.iter().find(|a| !a.is_finite()) {
            return Err(Error::Parse(format!("angle {a} is not finite")));
        }
        let angles = angles.into_iter().map(normalize_angle).collect();
        Ok(AngleField { angles, mesh: mesh.fingerprint() })
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }
}

/// Per-vertex 2×2 matrix in the vertex frame, with positive determinant.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixField {
    matrices: Vec<Matrix2<f64>>,
    mesh: u64,
}

impl MatrixField {
    pub fn new(mesh: &SurfaceMesh, matrices: Vec<Matrix2<f64>>) -> Result<Self> {
        if matrices.len() != mesh.vertex_count() {
            return Err(Error::WrongLength {
                found: matrices.len(),
                expected: mesh.vertex_count(),
            });
        }
        if let Some(v) = matrices.iter().position(|m| !(m.determinant() > 0.0)) {
            return Err(Error::SingularMatrix(v));
        }
        Ok(MatrixField { matrices, mesh: mesh.fingerprint() })
    }

    pub fn matrices(&self) -> &[Matrix2<f64>] {
        &self.matrices
    }

    pub fn mesh_fingerprint(&self) -> u64 {
        self.mesh
    }

    pub(crate) fn from_parts(matrices: Vec<Matrix2<f64>>, mesh: u64) -> Self {
        MatrixField { matrices, mesh }
    }
}

pub fn normalize_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

pub fn rotation(angle: f64) -> Matrix2<f64> {
    let (s, c) = angle.sin_cos();
    Matrix2::new(c, -s, s, c)
}

/// Per directed edge, the lift of `θ(head) − θ(tail)` into `(−π, π)`.
pub fn lift_edge_increments(mesh: &SurfaceMesh, field: &AngleField) -> Result<IntegerCocycle> {
    if field.mesh != mesh.fingerprint() {
        return Err(Error::MeshMismatch);
    }
    let mut values = Vec::with_capacity(mesh.edges().len());
    for e in mesh.edges() {
        let d = field.angles[e[1]] - field.angles[e[0]];
        let w = d - TAU * (d / TAU).round();
        if (w.abs() - PI).abs() < LIFT_TIE_TOLERANCE {
            return Err(Error::EdgeAliasing(e[0], e[1]));
        }
        values.push(w);
    }
    for t in 0..mesh.triangles().len() {
        let s: f64 = mesh
            .triangle_edges(t)
            .iter()
            .map(|&(e, sg)| sg as f64 * values[e])
            .sum();
        // the sum is a multiple of 2π up to rounding
        if s.abs() > PI {
            return Err(Error::TriangleWrap(t));
        }
    }
    IntegerCocycle::new(mesh, values)
}

pub fn winding_class(
    mesh: &SurfaceMesh,
    field: &AngleField,
    basis: &CycleBasis,
) -> Result<CohomologyClass> {
    let lifted = lift_edge_increments(mesh, field)?;
    let pairings = basis
        .cycles()
        .iter()
        .map(|c| homology::round_integral(homology::pair(&lifted, c)? / TAU))
        .collect::<Result<_>>()?;
    Ok(CohomologyClass { pairings })
}

/// Singular values `(σ_max, σ_min)` of a 2×2 matrix.
pub fn singular_values(m: &Matrix2<f64>) -> (f64, f64) {
    let f2 = m.norm_squared();
    let det = m.determinant().abs();
    let sum = (f2 + 2.0 * det).max(0.0).sqrt();
    let diff = (f2 - 2.0 * det).max(0.0).sqrt();
    ((sum + diff) / 2.0, (sum - diff) / 2.0)
}

/// Rotation factor of the polar decomposition `A = R·P` by closed form:
/// `A + cof(A)` is a positive multiple of `R` when `det A > 0`.
pub fn polar_rotation_closed_form(m: &Matrix2<f64>) -> Matrix2<f64> {
    let (a, b, c, d) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    rotation((c - b).atan2(a + d))
}

/// Newton iteration `X ← (X + X⁻ᵀ)/2`; `None` if it fails to converge.
pub fn polar_rotation_newton(m: &Matrix2<f64>) -> Option<Matrix2<f64>> {
    let mut x = *m;
    for _ in 0..NEWTON_MAX_ITERATIONS {
        let inv_t = x.try_inverse()?.transpose();
        let next = (x + inv_t) * 0.5;
        let delta = (next - x).norm();
        x = next;
        if delta < NEWTON_THRESHOLD * x.norm().max(1.0) {
            return Some(x);
        }
    }
    None
}

/// Angle of the rotation factor of `m`, in `[0, 2π)`.
pub fn polar_angle(m: &Matrix2<f64>, vertex: usize) -> Result<f64> {
    let det = m.determinant();
    if !(det > 0.0) {
        return Err(Error::SingularMatrix(vertex));
    }
    let (smax, smin) = singular_values(m);
    if !(smin > 0.0) || smax / smin > MAX_CONDITION {
        return Err(Error::SingularMatrix(vertex));
    }
    let r = polar_rotation_newton(m).unwrap_or_else(|| polar_rotation_closed_form(m));
    Ok(normalize_angle(r[(1, 0)].atan2(r[(0, 0)])))
}

pub fn rotation_angle_field(mesh: &SurfaceMesh, field: &MatrixField) -> Result<AngleField> {
    if field.mesh != mesh.fingerprint() {
        return Err(Error::MeshMismatch);
    }
    let angles = field
        .matrices
        .iter()
        .enumerate()
        .map(|(v, m)| polar_angle(m, v))
        .collect::<Result<_>>()?;
    AngleField::new(mesh, angles)
}

pub fn matrix_winding_class(
    mesh: &SurfaceMesh,
    field: &MatrixField,
    basis: &CycleBasis,
) -> Result<CohomologyClass> {
    if basis.is_empty() {
        return Ok(CohomologyClass::zero(0));
    }
    winding_class(mesh, &rotation_angle_field(mesh, field)?, basis)
}

/// Field of rotations by the given angles.
pub fn rotation_field(mesh: &SurfaceMesh, angles: &AngleField) -> MatrixField {
    MatrixField::from_parts(angles.angles.iter().map(|&a| rotation(a)).collect(), mesh.fingerprint())
}

/// Circle-valued field whose winding class against `basis` is `periods`.
///
/// Takes the harmonic representative `h = z + δf` of the integer cocycle `z`
/// with the requested periods (least-squares `f`), integrates it along a BFS
/// tree and reduces mod 1. Edge increments are `2π·h`; an edge with
/// `|h| ≥ 1/2` cannot be lifted back and fails with `EdgeAliasing`.
pub fn realizing_angle_field(
    mesh: &SurfaceMesh,
    basis: &CycleBasis,
    periods: &[i64],
) -> Result<AngleField> {
    let z = homology::cocycle_with_periods(basis, periods)?;
    let f = harmonic_correction(mesh, &z);
    let h: Vec<f64> = mesh
        .edges()
        .iter()
        .zip(&z)
        .map(|(e, &zv)| zv as f64 + f[e[1]] - f[e[0]])
        .collect();
    for (e, hv) in mesh.edges().iter().zip(&h) {
        if hv.abs() >= 0.5 - LIFT_TIE_TOLERANCE / TAU {
            return Err(Error::EdgeAliasing(e[0], e[1]));
        }
    }

    let n = mesh.vertex_count();
    let adj = mesh.neighbors();
    let mut pot = vec![0.0f64; n];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        for &w in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                let (e, s) = mesh.edge_of(u, w).unwrap();
                pot[w] = pot[u] + s as f64 * h[e];
                queue.push_back(w);
            }
        }
    }
    AngleField::new(mesh, pot.iter().map(|p| TAU * (p - p.floor())).collect())
}

/// Minimizer `f` of `‖z + δf‖²` with `f(0) = 0`, by conjugate gradients on the graph Laplacian.
fn harmonic_correction(mesh: &SurfaceMesh, z: &[i64]) -> Vec<f64> {
    let n = mesh.vertex_count();
    let edges = mesh.edges();
    // rhs = −δᵀz
    let mut rhs = vec![0.0; n];
    for (e, &zv) in edges.iter().zip(z) {
        rhs[e[1]] -= zv as f64;
        rhs[e[0]] += zv as f64;
    }
    rhs[0] = 0.0;
    let apply = |x: &[f64], out: &mut [f64]| {
        out.iter_mut().for_each(|o| *o = 0.0);
        for e in edges {
            let d = x[e[1]] - x[e[0]];
            out[e[1]] += d;
            out[e[0]] -= d;
        }
        // pinned vertex: identity row, decoupled column
        out[0] = x[0];
        for e in edges {
            if e[0] == 0 {
                out[e[1]] -= x[0];
            } else if e[1] == 0 {
                out[e[0]] -= x[0];
            }
        }
    };
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let mut x = vec![0.0; n];
    let mut r = rhs.clone();
    let mut p = r.clone();
    let mut ap = vec![0.0; n];
    let mut rr = dot(&r, &r);
    let stop = 1e-28 * dot(&rhs, &rhs).max(1.0);
    for _ in 0..10 * n {
        if rr <= stop {
            break;
        }
        apply(&p, &mut ap);
        let alpha = rr / dot(&p, &ap);
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let rr_new = dot(&r, &r);
        let beta = rr_new / rr;
        for i in 0..n {
            p[i] = r[i] + beta * p[i];
        }
        rr = rr_new;
    }
    x
}

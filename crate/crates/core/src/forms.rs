//! Symplectic forms along the zero section of `T*L` and their compatible
//! complex structures.
//!
//! Index convention: at each vertex the 4×4 matrix `W` is written in the
//! basis `(e₁, e₂, e¹, e²)` where `(e₁, e₂)` is the vertex frame of `T_xL`
//! and `(e¹, e²)` the dual frame of `T*_xL`, so `ω(u, v) = uᵀ W v`.
//!
//! * [`omega_block`] returns the upper-right block `B`, `B[i][j] = ω(e_i, e^j)`.
//! * [`pfaffian`] is taken with respect to the symplectic orientation
//!   `(e₁, e¹, e₂, e²)`; for a Lagrangian-block matrix it equals `det B`.
//! * For a fiber automorphism `ρ`, the form `ω_ρ = −d(Σ ρ_ij y_j dx_i)` at
//!   `y = 0` has `B = ρ`, lower-left block `−ρᵀ` and vanishing diagonal
//!   blocks. Hence `ω_can` (ρ = I) has `ω(e₁, e¹) = 1`, Pfaffian 1, and
//!   `relative_automorphism(ω_ρ, ω_can) = ρ`.

use nalgebra::{Matrix2, Matrix4, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mesh::SurfaceMesh;
use crate::winding::MatrixField;

pub const DEFAULT_TOLERANCE: f64 = 1e-12;
pub const BLOCK_TOLERANCE: f64 = 1e-12;
pub const J_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub antisym: f64,
    pub lagrangian: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { antisym: DEFAULT_TOLERANCE, lagrangian: DEFAULT_TOLERANCE }
    }
}

/// Per-vertex antisymmetric 4×4 form with positive Pfaffian.
#[derive(Debug, Clone, PartialEq)]
pub struct FormField {
    matrices: Vec<Matrix4<f64>>,
    mesh: u64,
    lagrangian: bool,
}

impl FormField {
    /// Validates antisymmetry, positivity and the Lagrangian zero-section condition.
    pub fn new(mesh: &SurfaceMesh, matrices: Vec<Matrix4<f64>>, tol: Tolerances) -> Result<Self> {
        let field = Self::nondegenerate(mesh, matrices, tol.antisym)?;
        for (v, w) in field.matrices.iter().enumerate() {
            let lag = w[(0, 1)].abs().max(w[(1, 0)].abs()).max(w[(0, 0)].abs()).max(w[(1, 1)].abs());
            if lag > tol.lagrangian {
                return Err(Error::InvalidForm {
                    vertex: v,
                    reason: format!("zero section is not Lagrangian (|ω(e₁,e₂)| = {lag:e})"),
                });
            }
        }
        Ok(FormField { lagrangian: true, ..field })
    }

    /// Validates antisymmetry and positivity only.
    pub fn nondegenerate(mesh: &SurfaceMesh, matrices: Vec<Matrix4<f64>>, antisym: f64) -> Result<Self> {
        if matrices.len() != mesh.vertex_count() {
            return Err(Error::WrongLength { found: matrices.len(), expected: mesh.vertex_count() });
        }
        for (v, w) in matrices.iter().enumerate() {
            if w.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidForm { vertex: v, reason: "non-finite entry".into() });
            }
            let asym = (w + w.transpose()).amax();
            if asym > antisym {
                return Err(Error::InvalidForm {
                    vertex: v,
                    reason: format!("not antisymmetric (defect {asym:e})"),
                });
            }
            let pf = pfaffian(w);
            if !(pf > 0.0) {
                return Err(Error::InvalidForm {
                    vertex: v,
                    reason: format!("Pfaffian {pf:e} is not positive"),
                });
            }
        }
        Ok(FormField { matrices, mesh: mesh.fingerprint(), lagrangian: false })
    }

    pub fn matrices(&self) -> &[Matrix4<f64>] {
        &self.matrices
    }

    pub fn mesh_fingerprint(&self) -> u64 {
        self.mesh
    }

    pub fn is_lagrangian(&self) -> bool {
        self.lagrangian
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    /// The field multiplied by `k > 0`.
    pub fn scaled(&self, k: f64) -> FormField {
        assert!(k > 0.0);
        FormField { matrices: self.matrices.iter().map(|m| m * k).collect(), ..self.clone() }
    }

    /// Row-major 16-entry rows, as stored in form files.
    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.matrices.iter().map(|m| m.transpose().iter().copied().collect()).collect()
    }
}

/// Pfaffian in the symplectic orientation `(e₁, e¹, e₂, e²)`.
pub fn pfaffian(w: &Matrix4<f64>) -> f64 {
    w[(0, 2)] * w[(1, 3)] - w[(0, 1)] * w[(2, 3)] - w[(0, 3)] * w[(1, 2)]
}

/// `[[0, B], [−Bᵀ, 0]]`.
pub fn lagrangian_matrix(b: &Matrix2<f64>) -> Matrix4<f64> {
    let mut w = Matrix4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            w[(i, 2 + j)] = b[(i, j)];
            w[(2 + j, i)] = -b[(i, j)];
        }
    }
    w
}

pub fn canonical_matrix() -> Matrix4<f64> {
    lagrangian_matrix(&Matrix2::identity())
}

pub fn canonical_field(mesh: &SurfaceMesh) -> FormField {
    FormField {
        matrices: vec![canonical_matrix(); mesh.vertex_count()],
        mesh: mesh.fingerprint(),
        lagrangian: true,
    }
}

pub fn block_of(w: &Matrix4<f64>) -> Matrix2<f64> {
    Matrix2::new(w[(0, 2)], w[(0, 3)], w[(1, 2)], w[(1, 3)])
}

pub fn omega_block(field: &FormField, vertex: usize) -> Result<Matrix2<f64>> {
    let b = block_of(&field.matrices[vertex]);
    if b.determinant().abs() < BLOCK_TOLERANCE {
        return Err(Error::DegenerateBlock(vertex));
    }
    Ok(b)
}

/// Per-vertex `Ω_{ω′} · Ω_ω⁻¹`.
pub fn relative_automorphism(primed: &FormField, base: &FormField) -> Result<MatrixField> {
    if primed.mesh != base.mesh || primed.len() != base.len() {
        return Err(Error::MeshMismatch);
    }
    let mut out = Vec::with_capacity(base.len());
    for v in 0..base.len() {
        let p = omega_block(primed, v)?;
        let b = omega_block(base, v)?;
        let inv = b.try_inverse().ok_or(Error::DegenerateBlock(v))?;
        let m = p * inv;
        if !(m.determinant() > 0.0) {
            return Err(Error::SingularMatrix(v));
        }
        out.push(m);
    }
    Ok(MatrixField::from_parts(out, base.mesh))
}

/// The zero-section germ of `ω_ρ`.
pub fn realize_from_automorphism(rho: &MatrixField) -> Result<FormField> {
    let mut matrices = Vec::with_capacity(rho.matrices().len());
    for (v, r) in rho.matrices().iter().enumerate() {
        if !(r.determinant() > 0.0) {
            return Err(Error::SingularMatrix(v));
        }
        matrices.push(lagrangian_matrix(r));
    }
    Ok(FormField { matrices, mesh: rho.mesh_fingerprint(), lagrangian: true })
}

/// Zero section symplectic: `[[τ, I], [−I, 0]]` with `τ` the area form.
pub fn symplectic_plus_matrix() -> Matrix4<f64> {
    let mut w = canonical_matrix();
    w[(0, 1)] = 1.0;
    w[(1, 0)] = -1.0;
    w
}

pub fn symplectic_plus_field(mesh: &SurfaceMesh) -> FormField {
    FormField {
        matrices: vec![symplectic_plus_matrix(); mesh.vertex_count()],
        mesh: mesh.fingerprint(),
        lagrangian: false,
    }
}

/// The metric-skew-adjoint complex structure compatible with `w`.
///
/// With `G = LLᵀ` and `W̃ = L⁻¹WL⁻ᵀ` the form in a metric-orthonormal frame,
/// `J̃ = −W̃(W̃ᵀW̃)^{−1/2}` and `J = L⁻ᵀ J̃ Lᵀ`. Then `ω(·, J·)` is the positive
/// square root of `−W̃²` in that frame.
pub fn compatible_j(metric: &Matrix4<f64>, w: &Matrix4<f64>, vertex: usize) -> Result<Matrix4<f64>> {
    let sym = (metric - metric.transpose()).amax();
    if sym > 1e-12 * metric.amax().max(1.0) {
        return Err(Error::NotSpd(vertex));
    }
    let chol = metric.cholesky().ok_or(Error::NotSpd(vertex))?;
    let l = chol.l();
    let l_inv = l.try_inverse().ok_or(Error::NotSpd(vertex))?;
    let wt = l_inv * w * l_inv.transpose();
    let eig = SymmetricEigen::new(wt.transpose() * wt);
    let max = eig.eigenvalues.max();
    let min = eig.eigenvalues.min();
    if !(min > 1e-14 * max.max(f64::MIN_POSITIVE)) {
        return Err(Error::NondegeneracyFailure(vertex));
    }
    let inv_sqrt = &eig.eigenvectors
        * Matrix4::from_diagonal(&eig.eigenvalues.map(|x| 1.0 / x.sqrt()))
        * eig.eigenvectors.transpose();
    let jt = -wt * inv_sqrt;
    Ok(l_inv.transpose() * jt * l.transpose())
}

pub fn identity_metric() -> Matrix4<f64> {
    Matrix4::identity()
}

/// Per-vertex compatible structures for one shared metric.
pub fn compatible_skad_j(metric: &Matrix4<f64>, field: &FormField) -> Result<Vec<Matrix4<f64>>> {
    field.matrices.iter().enumerate().map(|(v, w)| compatible_j(metric, w, v)).collect()
}

/// Largest violation among `J² = −I`, `GJ + JᵀG = 0` and symmetry of `ω(·, J·)`,
/// plus the smallest eigenvalue of the symmetrized `WJ` (positive when compatible).
pub fn compatibility_defects(metric: &Matrix4<f64>, w: &Matrix4<f64>, j: &Matrix4<f64>) -> (f64, f64) {
    let square = (j * j + Matrix4::identity()).amax();
    let skew = (metric * j + j.transpose() * metric).amax();
    let g = w * j;
    let sym = (g - g.transpose()).amax();
    let min_eig = SymmetricEigen::new((g + g.transpose()) * 0.5).eigenvalues.min();
    (square.max(skew).max(sym), min_eig)
}

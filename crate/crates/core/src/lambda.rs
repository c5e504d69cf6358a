//! The λ-invariant: multiplicity of the winding class of a relative fiber automorphism.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::digest::sha256_hex;
use crate::error::{Error, Result};
use crate::forms::{self, FormField};
use crate::homology::{self, CohomologyClass};
use crate::mesh::{FrameSource, SurfaceMesh};
use crate::winding::{self, MatrixField};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LambdaReport {
    pub class: Vec<i64>,
    pub lambda: u64,
    pub basis: String,
    pub frame: String,
    pub inputs: BTreeMap<String, String>,
}

/// SHA-256 over the little-endian bytes of every entry, row-major per vertex.
pub fn field_digest(field: &FormField) -> String {
    let mut bytes = Vec::with_capacity(field.len() * 128);
    for row in field.to_rows() {
        for x in row {
            bytes.extend_from_slice(&x.to_le_bytes());
        }
    }
    sha256_hex(&bytes)
}

fn report(
    mesh: &SurfaceMesh,
    class: CohomologyClass,
    basis: &str,
    inputs: BTreeMap<String, String>,
) -> LambdaReport {
    LambdaReport {
        lambda: homology::multiplicity(&class),
        class: class.pairings,
        basis: basis.to_string(),
        frame: mesh.frame_source().as_str().to_string(),
        inputs,
    }
}

fn require_lagrangian(field: &FormField) -> Result<()> {
    if !field.is_lagrangian() {
        return Err(Error::InvalidForm {
            vertex: 0,
            reason: "field was not validated as Lagrangian along the zero section".into(),
        });
    }
    Ok(())
}

/// `λ(L, ω′, ω)`.
pub fn lambda(mesh: &SurfaceMesh, primed: &FormField, base: &FormField) -> Result<LambdaReport> {
    if primed.mesh_fingerprint() != mesh.fingerprint() || base.mesh_fingerprint() != mesh.fingerprint() {
        return Err(Error::MeshMismatch);
    }
    require_lagrangian(primed)?;
    require_lagrangian(base)?;
    let inputs = BTreeMap::from([
        ("omega".to_string(), field_digest(base)),
        ("omega_prime".to_string(), field_digest(primed)),
    ]);
    if mesh.genus() == 0 {
        return Ok(report(mesh, CohomologyClass::zero(0), "none", inputs));
    }
    let basis = homology::preferred_basis(mesh)?;
    let rel = forms::relative_automorphism(primed, base)?;
    let class = winding::matrix_winding_class(mesh, &rel, &basis)?;
    Ok(report(mesh, class, basis.kind().as_str(), inputs))
}

/// `λ(L, L₀, φ) = λ(L, ω₁, ω)` with `ω₁ = (φ⁻¹)*ω` the pulled-back form.
pub fn lambda_pair(mesh: &SurfaceMesh, omega1: &FormField, omega: &FormField) -> Result<LambdaReport> {
    let mut r = lambda(mesh, omega1, omega)?;
    r.inputs = BTreeMap::from([
        ("omega".to_string(), field_digest(omega)),
        ("omega1".to_string(), field_digest(omega1)),
    ]);
    Ok(r)
}

/// Absolute `λ(T², ω)` relative to the global grid frame.
pub fn lambda_absolute_torus(mesh: &SurfaceMesh, field: &FormField) -> Result<LambdaReport> {
    if mesh.genus() != 1 {
        return Err(Error::WrongGenus(mesh.genus()));
    }
    if mesh.frame_source() != FrameSource::Grid || mesh.lattice().is_none() {
        return Err(Error::MissingLattice);
    }
    if field.mesh_fingerprint() != mesh.fingerprint() {
        return Err(Error::MeshMismatch);
    }
    require_lagrangian(field)?;
    let blocks = (0..field.len())
        .map(|v| forms::omega_block(field, v))
        .collect::<Result<Vec<_>>>()?;
    let omega = MatrixField::new(mesh, blocks)?;
    let basis = homology::grid_basis(mesh)?;
    let class = winding::matrix_winding_class(mesh, &omega, &basis)?;
    let inputs = BTreeMap::from([("omega".to_string(), field_digest(field))]);
    Ok(report(mesh, class, basis.kind().as_str(), inputs))
}

/// Realization field `ω_ρ` for the rotation field of the given winding vector
/// against the preferred basis.
pub fn realization(mesh: &SurfaceMesh, periods: &[i64]) -> Result<FormField> {
    let expected = 2 * mesh.genus();
    if periods.len() != expected {
        return Err(Error::WrongLength { found: periods.len(), expected });
    }
    if expected == 0 {
        return Ok(forms::canonical_field(mesh));
    }
    let basis = homology::preferred_basis(mesh)?;
    let angles = winding::realizing_angle_field(mesh, &basis, periods)?;
    forms::realize_from_automorphism(&winding::rotation_field(mesh, &angles))
}

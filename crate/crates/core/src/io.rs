//! JSON file formats.

use std::path::Path;

use nalgebra::{Matrix2, Matrix4};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::classifier::{IsotopyPath, SphereMap, Vec3};
use crate::error::{Error, Result};
use crate::forms::{FormField, Tolerances};
use crate::mesh::{Frame, FrameSource, Lattice, SurfaceMesh};
use crate::suspension::{build_suspension, SuspensionComplex};
use crate::winding::{AngleField, MatrixField};

pub const MESH_SCHEMA_VERSION: u32 = 1;

/// A coordinate given either as a JSON number or as a decimal string.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Float(f64),
    Text(String),
}

impl Number {
    fn value(&self) -> Result<f64> {
        match self {
            Number::Float(x) => Ok(*x),
            Number::Text(s) => s
                .trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| Error::Parse(format!("invalid coordinate {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeFile {
    pub rows: usize,
    pub cols: usize,
    pub coords: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshFile {
    pub schema_version: u32,
    pub vertices: Vec<[Number; 3]>,
    pub triangles: Vec<[usize; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frames: Option<Vec<Frame>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame_source: Option<FrameSource>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<LatticeFile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormFile {
    pub omega: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleFieldFile {
    pub angles: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFieldFile {
    pub matrices: Vec<[[f64; 2]; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphereMapFile {
    pub vectors: Vec<Vec3>,
    pub boundary_conditioned: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathSliceFile {
    pub omega: Vec<Vec<f64>>,
    pub omega_plus: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathFile {
    pub slices: Vec<PathSliceFile>,
    pub metric: Vec<f64>,
}

pub fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn parse<T: DeserializeOwned>(bytes: &[u8]) -> Result<T> {
    serde_json::from_slice(bytes).map_err(|e| Error::Parse(e.to_string()))
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable value");
    s.push('\n');
    s
}

pub fn mesh_from_file(file: &MeshFile) -> Result<SurfaceMesh> {
    if file.schema_version != MESH_SCHEMA_VERSION {
        return Err(Error::Parse(format!("unsupported schema_version {}", file.schema_version)));
    }
    let vertices = file
        .vertices
        .iter()
        .map(|v| Ok([v[0].value()?, v[1].value()?, v[2].value()?]))
        .collect::<Result<Vec<_>>>()?;
    let lattice = file.lattice.as_ref().map(|l| Lattice { rows: l.rows, cols: l.cols, coords: l.coords.clone() });
    let mesh = SurfaceMesh::build_with_lattice(vertices, file.triangles.clone(), file.frames.clone(), lattice)?;
    match (file.frame_source, &file.frames) {
        (Some(FrameSource::Grid), Some(frames)) => {
            if mesh.lattice().is_none() {
                return Err(Error::MissingLattice);
            }
            mesh.clone().with_frames(frames.clone(), FrameSource::Grid)
        }
        _ => Ok(mesh),
    }
}

pub fn mesh_to_file(mesh: &SurfaceMesh) -> MeshFile {
    MeshFile {
        schema_version: MESH_SCHEMA_VERSION,
        vertices: mesh.vertices().iter().map(|v| v.map(Number::Float)).collect(),
        triangles: mesh.triangles().to_vec(),
        frames: Some(mesh.frames().to_vec()),
        frame_source: Some(mesh.frame_source()),
        lattice: mesh.lattice().map(|l| LatticeFile { rows: l.rows, cols: l.cols, coords: l.coords.clone() }),
    }
}

pub fn load_mesh(path: &Path) -> Result<SurfaceMesh> {
    mesh_from_file(&parse(&read_bytes(path)?)?)
}

fn matrix4(row: &[f64], vertex: usize) -> Result<Matrix4<f64>> {
    if row.len() != 16 {
        return Err(Error::InvalidForm { vertex, reason: format!("expected 16 entries, found {}", row.len()) });
    }
    Ok(Matrix4::from_row_slice(row))
}

fn matrices4(rows: &[Vec<f64>]) -> Result<Vec<Matrix4<f64>>> {
    rows.iter().enumerate().map(|(v, r)| matrix4(r, v)).collect()
}

pub fn form_from_file(mesh: &SurfaceMesh, file: &FormFile, tol: Tolerances) -> Result<FormField> {
    FormField::new(mesh, matrices4(&file.omega)?, tol)
}

pub fn form_to_file(field: &FormField) -> FormFile {
    FormFile { omega: field.to_rows() }
}

pub fn load_form(mesh: &SurfaceMesh, path: &Path, tol: Tolerances) -> Result<FormField> {
    form_from_file(mesh, &parse(&read_bytes(path)?)?, tol)
}

pub fn angle_field_from_file(mesh: &SurfaceMesh, file: &AngleFieldFile) -> Result<AngleField> {
    AngleField::new(mesh, file.angles.clone())
}

pub fn matrix_field_from_file(mesh: &SurfaceMesh, file: &MatrixFieldFile) -> Result<MatrixField> {
    MatrixField::new(mesh, file.matrices.iter().map(|m| Matrix2::new(m[0][0], m[0][1], m[1][0], m[1][1])).collect())
}

pub fn matrix_field_to_file(field: &MatrixField) -> MatrixFieldFile {
    MatrixFieldFile {
        matrices: field.matrices().iter().map(|m| [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]]).collect(),
    }
}

/// Number of slices `T` of the complex a map file is defined on.
pub fn slices_for(mesh: &SurfaceMesh, vector_count: usize) -> Result<usize> {
    let v = mesh.vertex_count();
    if vector_count < 1 || (vector_count - 1) % v != 0 || (vector_count - 1) / v < 1 {
        return Err(Error::InvalidSphereMap(format!(
            "{vector_count} vectors do not fit (T−1)·{v} + 1 for any T ≥ 2"
        )));
    }
    Ok((vector_count - 1) / v + 1)
}

pub fn sphere_map_from_file(mesh: &SurfaceMesh, file: &SphereMapFile) -> Result<(SuspensionComplex, SphereMap)> {
    let x = build_suspension(mesh, slices_for(mesh, file.vectors.len())?)?;
    let map = SphereMap::new(&x, file.vectors.clone(), file.boundary_conditioned)?;
    Ok((x, map))
}

pub fn sphere_map_to_file(map: &SphereMap) -> SphereMapFile {
    SphereMapFile { vectors: map.vectors().to_vec(), boundary_conditioned: map.is_boundary_conditioned() }
}

pub fn path_from_file(mesh: &SurfaceMesh, file: &PathFile, tol: Tolerances) -> Result<IsotopyPath> {
    let metric = matrix4(&file.metric, 0).map_err(|_| Error::Parse("metric must have 16 entries".into()))?;
    let slices = file
        .slices
        .iter()
        .map(|s| {
            Ok((
                FormField::new(mesh, matrices4(&s.omega)?, tol)?,
                FormField::nondegenerate(mesh, matrices4(&s.omega_plus)?, tol.antisym)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(IsotopyPath { slices, metric })
}

pub fn path_to_file(path: &IsotopyPath) -> PathFile {
    PathFile {
        slices: path
            .slices
            .iter()
            .map(|(w, p)| PathSliceFile { omega: w.to_rows(), omega_plus: p.to_rows() })
            .collect(),
        metric: path.metric.transpose().iter().copied().collect(),
    }
}

//! The identified double cone `X = L×[0,1] / L×{0,1}` as an oriented
//! simplicial 3-complex, with exact homology.
//!
//! Slices `s = 1, …, T−1` carry a copy of the mesh vertices; slice `s` vertex
//! `v` is numbered `(s−1)·V + v` and the single apex is numbered `(T−1)·V`.
//! Each slab between consecutive slices is a union of prisms over the mesh
//! triangles; a prism over `a < b < c` is split into
//! `[a₀b₀c₀c₁], [a₀b₀b₁c₁], [a₀a₁b₁c₁]`, so the quadrilateral over `a < b`
//! is always cut along `a₀b₁` and neighbouring prisms agree. The first and
//! last slices are coned to the apex.
//!
//! With `T = 2` both cones share slice 1 and the apex, so a bottom cone
//! simplex and the matching top cone simplex have the same vertex set. Cells
//! through the apex therefore carry a [`Side`] tag and the complex is a
//! Δ-complex rather than a simplicial complex; nothing else changes.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homology::CycleBasis;
use crate::mesh::SurfaceMesh;
use crate::snf::SparseIntMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Interior,
    Bottom,
    Top,
}

/// A cell: its vertices in ascending order, plus the cone it belongs to when it contains the apex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub vertices: Vec<usize>,
    pub side: Side,
}

impl Cell {
    fn new(mut vertices: Vec<usize>, side: Side, apex: usize) -> Self {
        vertices.sort_unstable();
        let side = if vertices.len() > 1 && vertices.contains(&apex) { side } else { Side::Interior };
        Cell { vertices, side }
    }

    /// Oriented boundary `Σ (−1)^i [.., v̂_i, ..]`.
    fn boundary(&self, apex: usize) -> Vec<(Cell, i64)> {
        (0..self.vertices.len())
            .map(|i| {
                let mut f = self.vertices.clone();
                f.remove(i);
                let sign = if i % 2 == 0 { 1 } else { -1 };
                (Cell::new(f, self.side, apex), sign)
            })
            .collect()
    }
}

/// Sign of the permutation sorting `xs`.
pub(crate) fn sort_sign(xs: &[usize]) -> i64 {
    let mut sign = 1;
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            if xs[i] > xs[j] {
                sign = -sign;
            }
        }
    }
    sign
}

#[derive(Debug, Clone)]
pub struct SuspensionComplex {
    mesh: u64,
    base_vertices: usize,
    slices: usize,
    /// cells by dimension 0..=3, in ascending order
    cells: [Vec<Cell>; 4],
    index: [HashMap<Cell, usize>; 4],
    /// orientation of each tetrahedron relative to ascending vertex order
    tet_sign: Vec<i64>,
}

/// Ranks `(b₁, b₂, b₃)` and torsion coefficients of `H₁, H₂, H₃`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyProfile {
    pub b0: usize,
    pub b1: usize,
    pub b2: usize,
    pub b3: usize,
    pub torsion: [Vec<u64>; 3],
}

impl HomologyProfile {
    pub fn ranks(&self) -> (usize, usize, usize) {
        (self.b1, self.b2, self.b3)
    }

    pub fn is_free(&self) -> bool {
        self.torsion.iter().all(Vec::is_empty)
    }
}

/// Serialized form: oriented tetrahedra, apex index and slice count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexFile {
    pub tets: Vec<[usize; 4]>,
    pub apex: usize,
    pub slices: usize,
}

pub fn build_suspension(mesh: &SurfaceMesh, slices: usize) -> Result<SuspensionComplex> {
    if slices < 2 {
        return Err(Error::TooFewTimeSteps(slices));
    }
    let nv = mesh.vertex_count();
    let apex = (slices - 1) * nv;
    let at = |s: usize, v: usize| (s - 1) * nv + v;

    // oriented tetrahedra as ordered vertex lists with positions (x, y, time)
    let mut tets: Vec<(Vec<usize>, Side)> = Vec::new();
    let mut push = |verts: Vec<usize>, pos: Vec<[f64; 3]>, side: Side| {
        let d = orientation(&pos);
        let mut v = verts;
        if d < 0.0 {
            v.swap(0, 1);
        }
        tets.push((v, side));
    };
    let apex_xy = [1.0 / 3.0, 1.0 / 3.0];
    for tri in mesh.triangles() {
        let xy = |v: usize| -> [f64; 2] {
            if v == tri[0] {
                [0.0, 0.0]
            } else if v == tri[1] {
                [1.0, 0.0]
            } else {
                [0.0, 1.0]
            }
        };
        let p = |v: usize, s: usize| [xy(v)[0], xy(v)[1], s as f64];
        let mut sorted = *tri;
        sorted.sort_unstable();
        let [a, b, c] = sorted;
        for s in 1..slices - 1 {
            let t = s + 1;
            for pattern in [[(a, s), (b, s), (c, s), (c, t)], [(a, s), (b, s), (b, t), (c, t)], [(a, s), (a, t), (b, t), (c, t)]] {
                push(
                    pattern.iter().map(|&(v, s)| at(s, v)).collect(),
                    pattern.iter().map(|&(v, s)| p(v, s)).collect(),
                    Side::Interior,
                );
            }
        }
        let bottom = [a, b, c];
        push(
            std::iter::once(apex).chain(bottom.iter().map(|&v| at(1, v))).collect(),
            std::iter::once([apex_xy[0], apex_xy[1], 0.0]).chain(bottom.iter().map(|&v| p(v, 1))).collect(),
            Side::Bottom,
        );
        let last = slices - 1;
        push(
            bottom.iter().map(|&v| at(last, v)).chain(std::iter::once(apex)).collect(),
            bottom.iter().map(|&v| p(v, last)).chain(std::iter::once([apex_xy[0], apex_xy[1], slices as f64])).collect(),
            Side::Top,
        );
    }

    let mut sets: [BTreeSet<Cell>; 4] = Default::default();
    let mut tet_orient: BTreeMap<Cell, i64> = BTreeMap::new();
    for (verts, side) in &tets {
        let cell = Cell::new(verts.clone(), *side, apex);
        if tet_orient.insert(cell.clone(), sort_sign(verts)).is_some() {
            return Err(Error::InconsistentPrismSplit);
        }
        let mut frontier = vec![cell.clone()];
        sets[3].insert(cell);
        for dim in (0..3).rev() {
            let mut next = Vec::new();
            for c in &frontier {
                for (f, _) in c.boundary(apex) {
                    if sets[dim].insert(f.clone()) {
                        next.push(f);
                    }
                }
            }
            frontier = next;
        }
    }
    let cells: [Vec<Cell>; 4] = sets.map(|s| s.into_iter().collect());
    let index = std::array::from_fn(|d| {
        cells[d].iter().enumerate().map(|(i, c)| (c.clone(), i)).collect::<HashMap<_, _>>()
    });
    let tet_sign = cells[3].iter().map(|c| tet_orient[c]).collect();
    let x = SuspensionComplex { mesh: mesh.fingerprint(), base_vertices: nv, slices, cells, index, tet_sign };
    if x.cells[0].len() != (slices - 1) * nv + 1 {
        return Err(Error::InconsistentPrismSplit);
    }
    if x.boundary_of_fundamental_chain().iter().any(|&c| c != 0) {
        return Err(Error::InconsistentPrismSplit);
    }
    Ok(x)
}

fn orientation(p: &[[f64; 3]]) -> f64 {
    let u = crate::mesh::sub(p[1], p[0]);
    let v = crate::mesh::sub(p[2], p[0]);
    let w = crate::mesh::sub(p[3], p[0]);
    crate::mesh::dot(u, crate::mesh::cross(v, w))
}

impl SuspensionComplex {
    pub fn slices(&self) -> usize {
        self.slices
    }

    pub fn mesh_fingerprint(&self) -> u64 {
        self.mesh
    }

    pub fn base_vertex_count(&self) -> usize {
        self.base_vertices
    }

    pub fn apex(&self) -> usize {
        (self.slices - 1) * self.base_vertices
    }

    /// Vertex of slice `s ∈ 1..T` over base vertex `v`.
    pub fn vertex(&self, s: usize, v: usize) -> usize {
        debug_assert!(s >= 1 && s < self.slices && v < self.base_vertices);
        (s - 1) * self.base_vertices + v
    }

    /// `(slice, base vertex)`, or `None` for the apex.
    pub fn slice_of(&self, x: usize) -> Option<(usize, usize)> {
        if x == self.apex() {
            None
        } else {
            Some((x / self.base_vertices + 1, x % self.base_vertices))
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.cells[0].len()
    }

    pub fn cells(&self, dim: usize) -> &[Cell] {
        &self.cells[dim]
    }

    pub fn cell_index(&self, dim: usize, vertices: &[usize], side: Side) -> Option<usize> {
        let cell = Cell::new(vertices.to_vec(), side, self.apex());
        self.index[dim].get(&cell).copied()
    }

    pub fn tet_sign(&self, t: usize) -> i64 {
        self.tet_sign[t]
    }

    /// Oriented tetrahedra as ordered vertex lists.
    pub fn oriented_tets(&self) -> Vec<[usize; 4]> {
        self.cells[3]
            .iter()
            .zip(&self.tet_sign)
            .map(|(c, &s)| {
                let mut v: [usize; 4] = c.vertices.clone().try_into().unwrap();
                if s < 0 {
                    v.swap(0, 1);
                }
                v
            })
            .collect()
    }

    pub fn to_file(&self) -> ComplexFile {
        ComplexFile { tets: self.oriented_tets(), apex: self.apex(), slices: self.slices }
    }

    /// Oriented boundary of cell `i` of dimension `dim ≥ 1` as `(face index, sign)`.
    pub fn boundary_of(&self, dim: usize, i: usize) -> Vec<(usize, i64)> {
        let sign = if dim == 3 { self.tet_sign[i] } else { 1 };
        self.cells[dim][i]
            .boundary(self.apex())
            .into_iter()
            .map(|(f, s)| (self.index[dim - 1][&f], s * sign))
            .collect()
    }

    /// `∂_dim` as a sparse integer matrix (rows: `dim−1` cells).
    pub fn boundary_matrix(&self, dim: usize) -> SparseIntMatrix {
        let columns: Vec<Vec<(usize, i64)>> =
            (0..self.cells[dim].len()).map(|i| self.boundary_of(dim, i)).collect();
        SparseIntMatrix::from_columns(self.cells[dim - 1].len(), &columns)
    }

    /// Applies `∂_dim` to an integer chain.
    pub fn boundary_chain(&self, dim: usize, chain: &[i64]) -> Vec<i64> {
        let mut out = vec![0i64; self.cells[dim - 1].len()];
        for (i, &k) in chain.iter().enumerate() {
            if k != 0 {
                for (f, s) in self.boundary_of(dim, i) {
                    out[f] += s * k;
                }
            }
        }
        out
    }

    fn boundary_of_fundamental_chain(&self) -> Vec<i64> {
        self.boundary_chain(3, &vec![1; self.cells[3].len()])
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.cells.iter().enumerate().map(|(d, c)| if d % 2 == 0 { c.len() as i64 } else { -(c.len() as i64) }).sum()
    }
}

pub fn homology_profile(x: &SuspensionComplex) -> HomologyProfile {
    let n: Vec<usize> = (0..4).map(|d| x.cells[d].len()).collect();
    let snf: Vec<_> = (1..4).map(|d| x.boundary_matrix(d).smith_invariants()).collect();
    let r = [0, snf[0].rank, snf[1].rank, snf[2].rank, 0];
    let torsion = |k: usize| -> Vec<u64> {
        snf[k].torsion.iter().map(|t: &BigInt| t.to_u64().unwrap_or(u64::MAX)).collect()
    };
    HomologyProfile {
        b0: n[0] - r[1],
        b1: n[1] - r[1] - r[2],
        b2: n[2] - r[2] - r[3],
        b3: n[3] - r[3],
        torsion: [torsion(1), torsion(2), vec![]],
    }
}

/// Suspension `γ×[0,1]` of each basis 1-cycle, coned off at both ends.
pub fn basis_2cycles(x: &SuspensionComplex, mesh: &SurfaceMesh, basis: &CycleBasis) -> Result<Vec<Vec<i64>>> {
    if mesh.fingerprint() != x.mesh {
        return Err(Error::MeshMismatch);
    }
    let mut out = Vec::with_capacity(basis.len());
    for (k, cycle) in basis.cycles().iter().enumerate() {
        let mut chain = vec![0i64; x.cells[2].len()];
        for (e, &coef) in cycle.coeffs().iter().enumerate() {
            if coef != 0 {
                let [lo, hi] = mesh.edges()[e];
                for (tri, side, sign) in edge_strip(x, lo, hi) {
                    let f = x.cell_index(2, &tri, side).ok_or(Error::NotACycle(format!("missing face {tri:?}")))?;
                    chain[f] += coef * sign * sort_sign(&tri);
                }
            }
        }
        if x.boundary_chain(2, &chain).iter().any(|&c| c != 0) {
            return Err(Error::NotACycle(format!("suspension of basis cycle {k}")));
        }
        out.push(chain);
    }
    Ok(out)
}

/// Oriented triangles of `[lo→hi] × [0,1]` (edge direction first, then time).
pub(crate) fn edge_strip(x: &SuspensionComplex, lo: usize, hi: usize) -> Vec<(Vec<usize>, Side, i64)> {
    let apex = x.apex();
    let last = x.slices - 1;
    let v = |s: usize, b: usize| x.vertex(s, b);
    let mut out = vec![(vec![apex, v(1, lo), v(1, hi)], Side::Bottom, -1)];
    // the strip of a slab follows the prism split, whose diagonal runs from the lower-index vertex upward
    let (a, b, flip) = if lo < hi { (lo, hi, 1) } else { (hi, lo, -1) };
    for s in 1..last {
        out.push((vec![v(s, a), v(s, b), v(s + 1, b)], Side::Interior, flip));
        out.push((vec![v(s, a), v(s + 1, a), v(s + 1, b)], Side::Interior, -flip));
    }
    out.push((vec![v(last, lo), v(last, hi), apex], Side::Top, 1));
    out
}

/// Whether the given 2-cycles generate `H₂(X)` (all invariant factors of
/// `[∂₃ | Z]` are one and its rank is `dim Z₂`).
pub fn generates_h2(x: &SuspensionComplex, cycles: &[Vec<i64>]) -> bool {
    let d3 = x.boundary_matrix(3);
    let cols: Vec<Vec<(usize, i64)>> = cycles
        .iter()
        .map(|c| c.iter().enumerate().filter(|(_, &k)| k != 0).map(|(i, &k)| (i, k)).collect())
        .collect();
    let z = SparseIntMatrix::from_columns(x.cells[2].len(), &cols);
    let inv = d3.hstack(&z).smith_invariants();
    let cycle_rank = x.cells[2].len() - x.boundary_matrix(2).rank();
    inv.torsion.is_empty() && inv.rank == cycle_rank
}

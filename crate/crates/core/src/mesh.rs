//! Triangulated closed oriented surfaces with per-vertex tangent frames.
//!
//! A [`SurfaceMesh`] is immutable once built. Construction checks that every
//! edge borders exactly two triangles with opposite induced directions, that
//! every vertex link is a single cycle, and that the complex is connected.
//!
//! Frames are stored explicitly and Gram–Schmidt orthonormalized. Frame order
//! is right-handed: `(e1 × e2) · n > 0` where `n` is the vertex normal induced
//! by the triangle orientation.

use std::collections::{HashMap, VecDeque};
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Point = [f64; 3];
/// Ordered pair of tangent vectors at a vertex.
pub type Frame = [[f64; 3]; 2];

/// Where a mesh's frames came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FrameSource {
    /// Supplied with the mesh.
    Explicit,
    /// Projected global axes (default construction).
    Projected,
    /// Coordinate directions of a grid torus.
    Grid,
}

impl FrameSource {
    pub fn as_str(self) -> &'static str {
        match self {
            FrameSource::Explicit => "explicit",
            FrameSource::Projected => "projected",
            FrameSource::Grid => "grid",
        }
    }
}

/// Integer `(i, j)` parametrization of an `rows × cols` grid torus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    pub rows: usize,
    pub cols: usize,
    pub coords: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MeshStatistics {
    pub vertex_count: usize,
    pub edge_count: usize,
    pub triangle_count: usize,
    pub genus: usize,
    pub orientable: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixtureKind {
    Sphere,
    Torus,
    Genus2,
}

impl std::str::FromStr for FixtureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sphere" => Ok(FixtureKind::Sphere),
            "torus" => Ok(FixtureKind::Torus),
            "genus2" => Ok(FixtureKind::Genus2),
            other => Err(Error::Parse(format!("unknown fixture kind {other:?}"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SurfaceMesh {
    vertices: Vec<Point>,
    triangles: Vec<[usize; 3]>,
    edges: Vec<[usize; 2]>,
    edge_index: HashMap<(usize, usize), usize>,
    frames: Vec<Frame>,
    frame_source: FrameSource,
    lattice: Option<Lattice>,
    genus: usize,
    fingerprint: u64,
}

impl SurfaceMesh {
    /// Validates the triangle list and derives edges and (when omitted) frames.
    pub fn build(
        vertices: Vec<Point>,
        triangles: Vec<[usize; 3]>,
        frames: Option<Vec<Frame>>,
    ) -> Result<Self> {
        Self::build_with_lattice(vertices, triangles, frames, None)
    }

    pub fn build_with_lattice(
        vertices: Vec<Point>,
        triangles: Vec<[usize; 3]>,
        frames: Option<Vec<Frame>>,
        lattice: Option<Lattice>,
    ) -> Result<Self> {
        let n = vertices.len();
        if n < 4 {
            return Err(Error::TooFewVertices(n));
        }
        for (t, tri) in triangles.iter().enumerate() {
            for &v in tri {
                if v >= n {
                    return Err(Error::IndexOutOfRange { triangle: t, index: v, count: n });
                }
            }
            if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
                return Err(Error::DegenerateTriangle(t));
            }
        }

        // edge -> incident (triangle, directed as lo->hi?)
        let mut incidence: HashMap<(usize, usize), Vec<(usize, bool)>> = HashMap::new();
        for (t, tri) in triangles.iter().enumerate() {
            for k in 0..3 {
                let (a, b) = (tri[k], tri[(k + 1) % 3]);
                incidence
                    .entry((a.min(b), a.max(b)))
                    .or_default()
                    .push((t, a < b));
            }
        }
        let mut edges: Vec<[usize; 2]> = incidence.keys().map(|&(a, b)| [a, b]).collect();
        edges.sort_unstable();
        for e in &edges {
            let inc = &incidence[&(e[0], e[1])];
            if inc.len() != 2 {
                return Err(Error::NonManifold(format!(
                    "edge ({}, {}) lies in {} triangles",
                    e[0],
                    e[1],
                    inc.len()
                )));
            }
        }

        check_vertex_links(n, &triangles)?;
        check_connected(n, &triangles, &incidence)?;
        check_orientation(&triangles, &edges, &incidence)?;

        let chi = n as i64 - edges.len() as i64 + triangles.len() as i64;
        if chi > 2 || (2 - chi) % 2 != 0 {
            return Err(Error::BadEulerCharacteristic(chi));
        }
        let genus = ((2 - chi) / 2) as usize;

        let normals = vertex_normals(&vertices, &triangles);
        let (frames, frame_source) = match frames {
            Some(fr) => {
                if fr.len() != n {
                    return Err(Error::Parse(format!(
                        "{} frames supplied for {} vertices",
                        fr.len(),
                        n
                    )));
                }
                let mut out = Vec::with_capacity(n);
                for (v, f) in fr.iter().enumerate() {
                    let f = orthonormalize(f).ok_or(Error::DegenerateFrame(v))?;
                    if dot(cross(f[0], f[1]), normals[v]) <= 0.0 {
                        return Err(Error::FrameOrientation(v));
                    }
                    out.push(f);
                }
                (out, FrameSource::Explicit)
            }
            None => {
                let mut out = Vec::with_capacity(n);
                for (v, nv) in normals.iter().enumerate() {
                    out.push(projected_frame(*nv).ok_or(Error::DegenerateFrame(v))?);
                }
                (out, FrameSource::Projected)
            }
        };

        if let Some(l) = &lattice {
            if l.coords.len() != n {
                return Err(Error::Parse("lattice length differs from vertex count".into()));
            }
        }

        let edge_index = edges
            .iter()
            .enumerate()
            .map(|(i, e)| ((e[0], e[1]), i))
            .collect();
        let fingerprint = fingerprint(n, &triangles);
        Ok(SurfaceMesh {
            vertices,
            triangles,
            edges,
            edge_index,
            frames,
            frame_source,
            lattice,
            genus,
            fingerprint,
        })
    }

    /// Replaces the frames with `frames` (orthonormalized and orientation-checked).
    pub fn with_frames(mut self, frames: Vec<Frame>, source: FrameSource) -> Result<Self> {
        let normals = vertex_normals(&self.vertices, &self.triangles);
        let mut out = Vec::with_capacity(frames.len());
        for (v, f) in frames.iter().enumerate() {
            let f = orthonormalize(f).ok_or(Error::DegenerateFrame(v))?;
            if dot(cross(f[0], f[1]), normals[v]) <= 0.0 {
                return Err(Error::FrameOrientation(v));
            }
            out.push(f);
        }
        self.frames = out;
        self.frame_source = source;
        Ok(self)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    /// Unordered edges as `[lo, hi]`, sorted. The canonical direction of an edge is lo → hi.
    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn frames(&self) -> &[Frame] {
        &self.frames
    }

    pub fn frame_source(&self) -> FrameSource {
        self.frame_source
    }

    pub fn lattice(&self) -> Option<&Lattice> {
        self.lattice.as_ref()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    /// Hash of the combinatorial structure; data attached to a mesh carries it.
    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    /// Index of the edge `{a, b}` and the sign of `a → b` relative to its canonical direction.
    pub fn edge_of(&self, a: usize, b: usize) -> Option<(usize, i64)> {
        let key = (a.min(b), a.max(b));
        self.edge_index
            .get(&key)
            .map(|&i| (i, if a < b { 1 } else { -1 }))
    }

    /// The three directed edges of triangle `t` as `(edge index, sign)`.
    pub fn triangle_edges(&self, t: usize) -> [(usize, i64); 3] {
        let tri = self.triangles[t];
        let mut out = [(0, 0); 3];
        for k in 0..3 {
            out[k] = self.edge_of(tri[k], tri[(k + 1) % 3]).unwrap();
        }
        out
    }

    /// Vertex adjacency lists, sorted.
    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for e in &self.edges {
            adj[e[0]].push(e[1]);
            adj[e[1]].push(e[0]);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        adj
    }

    pub fn statistics(&self) -> MeshStatistics {
        MeshStatistics {
            vertex_count: self.vertices.len(),
            edge_count: self.edges.len(),
            triangle_count: self.triangles.len(),
            genus: self.genus,
            orientable: true,
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.triangles.len() as i64
    }
}

pub fn genus(mesh: &SurfaceMesh) -> usize {
    mesh.genus()
}

fn fingerprint(n: usize, triangles: &[[usize; 3]]) -> u64 {
    let mut bytes = Vec::with_capacity(8 + triangles.len() * 24);
    bytes.extend_from_slice(&(n as u64).to_le_bytes());
    for t in triangles {
        for v in t {
            bytes.extend_from_slice(&(*v as u64).to_le_bytes());
        }
    }
    crate::digest::seed_from(&bytes)
}

fn check_vertex_links(n: usize, triangles: &[[usize; 3]]) -> Result<()> {
    // Link of v: the edges opposite v. It must form a single cycle.
    let mut link: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for tri in triangles {
        for k in 0..3 {
            link[tri[k]].push((tri[(k + 1) % 3], tri[(k + 2) % 3]));
        }
    }
    for (v, segs) in link.iter().enumerate() {
        if segs.is_empty() {
            return Err(Error::Disconnected);
        }
        let mut adj: HashMap<usize, Vec<usize>> = HashMap::new();
        for &(a, b) in segs {
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        }
        if adj.values().any(|x| x.len() != 2) {
            return Err(Error::NonManifold(format!("link of vertex {v} is not a cycle")));
        }
        // single component
        let start = segs[0].0;
        let mut seen = vec![start];
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for &y in &adj[&x] {
                if !seen.contains(&y) {
                    seen.push(y);
                    stack.push(y);
                }
            }
        }
        if seen.len() != adj.len() {
            return Err(Error::NonManifold(format!("vertex {v} is a pinch point")));
        }
    }
    Ok(())
}

fn check_connected(
    n: usize,
    triangles: &[[usize; 3]],
    incidence: &HashMap<(usize, usize), Vec<(usize, bool)>>,
) -> Result<()> {
    let mut seen = vec![false; triangles.len()];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    let mut touched = vec![false; n];
    while let Some(t) = queue.pop_front() {
        let tri = triangles[t];
        for k in 0..3 {
            touched[tri[k]] = true;
            let (a, b) = (tri[k], tri[(k + 1) % 3]);
            for &(u, _) in &incidence[&(a.min(b), a.max(b))] {
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
    }
    if seen.iter().all(|&s| s) && touched.iter().all(|&s| s) {
        Ok(())
    } else {
        Err(Error::Disconnected)
    }
}

fn check_orientation(
    triangles: &[[usize; 3]],
    edges: &[[usize; 2]],
    incidence: &HashMap<(usize, usize), Vec<(usize, bool)>>,
) -> Result<()> {
    let mut bad = None;
    for e in edges {
        let inc = &incidence[&(e[0], e[1])];
        if inc[0].1 == inc[1].1 {
            bad = Some((e[0], e[1]));
            break;
        }
    }
    let Some(bad) = bad else { return Ok(()) };

    // Distinguish a fixable orientation from a non-orientable surface.
    let mut flip: Vec<Option<bool>> = vec![None; triangles.len()];
    flip[0] = Some(false);
    let mut queue = VecDeque::from([0usize]);
    while let Some(t) = queue.pop_front() {
        let ft = flip[t].unwrap();
        let tri = triangles[t];
        for k in 0..3 {
            let (a, b) = (tri[k], tri[(k + 1) % 3]);
            for &(u, dir_u) in &incidence[&(a.min(b), a.max(b))] {
                if u == t {
                    continue;
                }
                // u must traverse the edge opposite to t after flips
                let dir_t = (a < b) ^ ft;
                let need = dir_u == dir_t;
                match flip[u] {
                    None => {
                        flip[u] = Some(need);
                        queue.push_back(u);
                    }
                    Some(f) if f != need => return Err(Error::NonOrientable),
                    _ => {}
                }
            }
        }
    }
    Err(Error::IncoherentOrientation(bad.0, bad.1))
}

/// Area-weighted normals induced by the triangle orientation.
pub fn vertex_normals(vertices: &[Point], triangles: &[[usize; 3]]) -> Vec<[f64; 3]> {
    let mut normals = vec![[0.0; 3]; vertices.len()];
    for tri in triangles {
        let (p, q, r) = (vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]);
        let nrm = cross(sub(q, p), sub(r, p));
        for &v in tri {
            for c in 0..3 {
                normals[v][c] += nrm[c];
            }
        }
    }
    normals
}

/// Projects the two global axes least aligned with `normal` onto its plane.
fn projected_frame(normal: [f64; 3]) -> Option<Frame> {
    let len = norm(normal);
    if len < 1e-300 {
        return None;
    }
    let nrm = scale(normal, 1.0 / len);
    let mut axes = [0usize, 1, 2];
    axes.sort_by(|&a, &b| nrm[a].abs().partial_cmp(&nrm[b].abs()).unwrap().then(a.cmp(&b)));
    let mut basis = [[0.0; 3]; 2];
    for (slot, &ax) in axes[..2].iter().enumerate() {
        let mut e = [0.0; 3];
        e[ax] = 1.0;
        basis[slot] = sub(e, scale(nrm, nrm[ax]));
    }
    let mut f = orthonormalize(&basis)?;
    if dot(cross(f[0], f[1]), nrm) < 0.0 {
        f.swap(0, 1);
    }
    Some(f)
}

fn orthonormalize(f: &Frame) -> Option<Frame> {
    let a = f[0];
    let la = norm(a);
    if la < 1e-12 {
        return None;
    }
    let e1 = scale(a, 1.0 / la);
    let b = sub(f[1], scale(e1, dot(e1, f[1])));
    let lb = norm(b);
    if lb < 1e-9 * norm(f[1]).max(1e-300) || lb < 1e-12 {
        return None;
    }
    Some([e1, scale(b, 1.0 / lb)])
}

pub(crate) fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn scale(a: [f64; 3], s: f64) -> [f64; 3] {
    [a[0] * s, a[1] * s, a[2] * s]
}

pub(crate) fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub(crate) fn norm(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

// ---------------------------------------------------------------------------
// Standard fixtures

/// Deterministic fixture surfaces. `resolution` is the number of edge
/// segments per quarter turn of every coordinate circle.
///
/// * `Sphere`: boundary of the octahedron with every face split into
///   `resolution²` triangles, projected to the unit sphere.
/// * `Torus`: `4·resolution × 4·resolution` grid torus with lattice
///   coordinates and grid frames.
/// * `Genus2`: two such grid tori with one triangle removed from each, glued
///   along the resulting boundary triangles.
pub fn standard_fixture(kind: FixtureKind, resolution: usize) -> Result<SurfaceMesh> {
    if resolution < 1 {
        return Err(Error::ResolutionTooLow { found: resolution, minimum: 1 });
    }
    match kind {
        FixtureKind::Sphere => octahedral_sphere(resolution),
        FixtureKind::Torus => grid_torus(4 * resolution, 4 * resolution),
        FixtureKind::Genus2 => glued_genus2(4 * resolution),
    }
}

fn octahedral_sphere(r: usize) -> Result<SurfaceMesh> {
    let mut index: HashMap<[i64; 3], usize> = HashMap::new();
    let mut vertices = Vec::new();
    let mut triangles = Vec::new();
    let ri = r as i64;
    let mut id = |p: [i64; 3], vertices: &mut Vec<Point>| -> usize {
        *index.entry(p).or_insert_with(|| {
            let q = [p[0] as f64, p[1] as f64, p[2] as f64];
            vertices.push(scale(q, 1.0 / norm(q)));
            vertices.len() - 1
        })
    };
    for sx in [1i64, -1] {
        for sy in [1i64, -1] {
            for sz in [1i64, -1] {
                let pt = |i: i64, j: i64| [sx * i, sy * j, sz * (ri - i - j)];
                for i in 0..ri {
                    for j in 0..ri - i {
                        let mut tris = vec![[pt(i, j), pt(i + 1, j), pt(i, j + 1)]];
                        if i + j <= ri - 2 {
                            tris.push([pt(i + 1, j), pt(i + 1, j + 1), pt(i, j + 1)]);
                        }
                        for t in tris {
                            let a = id(t[0], &mut vertices);
                            let b = id(t[1], &mut vertices);
                            let c = id(t[2], &mut vertices);
                            let (pa, pb, pc) = (vertices[a], vertices[b], vertices[c]);
                            let nrm = cross(sub(pb, pa), sub(pc, pa));
                            let centroid = [
                                pa[0] + pb[0] + pc[0],
                                pa[1] + pb[1] + pc[1],
                                pa[2] + pb[2] + pc[2],
                            ];
                            if dot(nrm, centroid) > 0.0 {
                                triangles.push([a, b, c]);
                            } else {
                                triangles.push([a, c, b]);
                            }
                        }
                    }
                }
            }
        }
    }
    SurfaceMesh::build(vertices, triangles, None)
}

const TORUS_MAJOR: f64 = 2.0;
const TORUS_MINOR: f64 = 1.0;

fn torus_point(u: f64, v: f64) -> Point {
    let rho = TORUS_MAJOR + TORUS_MINOR * v.cos();
    [rho * u.cos(), rho * u.sin(), TORUS_MINOR * v.sin()]
}

fn torus_triangles(rows: usize, cols: usize, offset: usize) -> Vec<[usize; 3]> {
    let idx = |i: usize, j: usize| offset + (i % rows) * cols + (j % cols);
    let mut tris = Vec::with_capacity(2 * rows * cols);
    for i in 0..rows {
        for j in 0..cols {
            tris.push([idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)]);
            tris.push([idx(i, j), idx(i + 1, j + 1), idx(i, j + 1)]);
        }
    }
    tris
}

/// `rows × cols` grid torus; vertex `(i, j)` has index `i * cols + j`.
pub fn grid_torus(rows: usize, cols: usize) -> Result<SurfaceMesh> {
    if rows < 3 || cols < 3 {
        return Err(Error::ResolutionTooLow { found: rows.min(cols), minimum: 3 });
    }
    let mut vertices = Vec::with_capacity(rows * cols);
    let mut frames = Vec::with_capacity(rows * cols);
    let mut coords = Vec::with_capacity(rows * cols);
    for i in 0..rows {
        for j in 0..cols {
            let u = 2.0 * PI * i as f64 / rows as f64;
            let v = 2.0 * PI * j as f64 / cols as f64;
            vertices.push(torus_point(u, v));
            let rho = TORUS_MAJOR + TORUS_MINOR * v.cos();
            let du = [-rho * u.sin(), rho * u.cos(), 0.0];
            let dv = [
                -TORUS_MINOR * v.sin() * u.cos(),
                -TORUS_MINOR * v.sin() * u.sin(),
                TORUS_MINOR * v.cos(),
            ];
            frames.push([du, dv]);
            coords.push([i, j]);
        }
    }
    let triangles = torus_triangles(rows, cols, 0);
    let lattice = Lattice { rows, cols, coords };
    let mesh = SurfaceMesh::build_with_lattice(vertices, triangles, Some(frames), Some(lattice))?;
    let frames = mesh.frames.clone();
    mesh.with_frames(frames, FrameSource::Grid)
}

fn glued_genus2(r: usize) -> Result<SurfaceMesh> {
    let per = r * r;
    let mut vertices = Vec::with_capacity(2 * per);
    for i in 0..r {
        for j in 0..r {
            let u = 2.0 * PI * i as f64 / r as f64;
            let v = 2.0 * PI * j as f64 / r as f64;
            vertices.push(torus_point(u, v));
        }
    }
    // second torus mirrored across the plane x = R + r
    let mirror = 2.0 * (TORUS_MAJOR + TORUS_MINOR);
    for k in 0..per {
        let p = vertices[k];
        vertices.push([mirror - p[0], p[1], p[2]]);
    }
    let mut tris_a = torus_triangles(r, r, 0);
    let mut tris_b = torus_triangles(r, r, per);
    let [a0, a1, a2] = tris_a.remove(0);
    let [b0, b1, b2] = tris_b.remove(0);
    // a0=b0, a1=b2, a2=b1 makes the two boundary circles run in opposite directions
    let glue: HashMap<usize, usize> = [(b0, a0), (b2, a1), (b1, a2)].into_iter().collect();

    let mut old_to_new = vec![usize::MAX; 2 * per];
    let mut new_vertices = Vec::with_capacity(2 * per - 3);
    for (old, p) in vertices.iter().enumerate() {
        if glue.contains_key(&old) {
            continue;
        }
        old_to_new[old] = new_vertices.len();
        new_vertices.push(*p);
    }
    for (&b, &a) in &glue {
        old_to_new[b] = old_to_new[a];
    }
    let triangles = tris_a
        .into_iter()
        .chain(tris_b)
        .map(|t| [old_to_new[t[0]], old_to_new[t[1]], old_to_new[t[2]]])
        .collect();
    SurfaceMesh::build(new_vertices, triangles, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tetrahedron() -> (Vec<Point>, Vec<[usize; 3]>) {
        let v = vec![
            [1.0, 1.0, 1.0],
            [1.0, -1.0, -1.0],
            [-1.0, 1.0, -1.0],
            [-1.0, -1.0, 1.0],
        ];
        let t = vec![[0, 1, 2], [0, 3, 1], [0, 2, 3], [1, 3, 2]];
        (v, t)
    }

    #[test]
    fn tetrahedron_is_a_sphere() {
        let (v, t) = tetrahedron();
        let m = SurfaceMesh::build(v, t, None).unwrap();
        assert_eq!(m.genus(), 0);
        assert_eq!(m.edges().len(), 6);
    }

    #[test]
    fn grid_torus_3x3_counts() {
        let m = grid_torus(3, 3).unwrap();
        let s = m.statistics();
        // V - E + F = 9 - 27 + 18
        assert_eq!((s.vertex_count, s.edge_count, s.triangle_count), (9, 27, 18));
        assert_eq!(s.genus, 1);
    }

    #[test]
    fn two_tetrahedra_are_disconnected() {
        let (mut v, mut t) = tetrahedron();
        let (v2, t2) = tetrahedron();
        v.extend(v2.iter().map(|p| [p[0] + 5.0, p[1], p[2]]));
        t.extend(t2.iter().map(|x| [x[0] + 4, x[1] + 4, x[2] + 4]));
        assert_eq!(SurfaceMesh::build(v, t, None).unwrap_err(), Error::Disconnected);
    }

    #[test]
    fn flipped_triangle_is_incoherent() {
        let (v, mut t) = tetrahedron();
        t[0] = [0, 2, 1];
        assert!(matches!(
            SurfaceMesh::build(v, t, None),
            Err(Error::IncoherentOrientation(..))
        ));
    }

    #[test]
    fn edge_in_three_triangles_is_non_manifold() {
        let (mut v, mut t) = tetrahedron();
        v.push([0.0, 0.0, 3.0]);
        t.push([0, 1, 4]);
        assert!(matches!(SurfaceMesh::build(v, t, None), Err(Error::NonManifold(_))));
    }

    #[test]
    fn projective_plane_is_non_orientable() {
        // 6-vertex real projective plane
        let t = vec![
            [0, 1, 2],
            [0, 2, 3],
            [0, 3, 4],
            [0, 4, 5],
            [0, 5, 1],
            [1, 2, 4],
            [2, 3, 5],
            [3, 4, 1],
            [4, 5, 2],
            [5, 1, 3],
        ];
        let v = (0..6).map(|i| [i as f64, (i * i) as f64, 1.0]).collect();
        let err = SurfaceMesh::build(v, t, None).unwrap_err();
        assert!(
            matches!(err, Error::NonOrientable | Error::IncoherentOrientation(..)),
            "{err:?}"
        );
        // the orientation check must identify it as non-orientable, not fixable
        assert_eq!(err, Error::NonOrientable);
    }

    #[test]
    fn fixture_counts() {
        let s = standard_fixture(FixtureKind::Sphere, 3).unwrap();
        assert_eq!(s.vertex_count(), 4 * 9 + 2);
        assert_eq!(s.genus(), 0);
        let t = standard_fixture(FixtureKind::Torus, 2).unwrap();
        assert_eq!(t.vertex_count(), 64);
        assert_eq!(t.genus(), 1);
        assert_eq!(t.frame_source(), FrameSource::Grid);
        let g = standard_fixture(FixtureKind::Genus2, 4).unwrap();
        assert_eq!(g.euler_characteristic(), -2);
        assert_eq!(g.genus(), 2);
        assert_eq!(
            standard_fixture(FixtureKind::Torus, 0).unwrap_err(),
            Error::ResolutionTooLow { found: 0, minimum: 1 }
        );
    }

    #[test]
    fn genus_independent_of_resolution() {
        for r in 1..=6 {
            assert_eq!(standard_fixture(FixtureKind::Sphere, r).unwrap().genus(), 0);
            assert_eq!(standard_fixture(FixtureKind::Torus, r).unwrap().genus(), 1);
            assert_eq!(standard_fixture(FixtureKind::Genus2, r).unwrap().genus(), 2);
        }
    }

    #[test]
    fn every_edge_has_two_opposite_uses() {
        for kind in [FixtureKind::Sphere, FixtureKind::Torus, FixtureKind::Genus2] {
            let m = standard_fixture(kind, 5).unwrap();
            let mut uses = vec![0i64; m.edges().len()];
            let mut count = vec![0usize; m.edges().len()];
            for t in 0..m.triangles().len() {
                for (e, s) in m.triangle_edges(t) {
                    uses[e] += s;
                    count[e] += 1;
                }
            }
            assert!(uses.iter().all(|&u| u == 0));
            assert!(count.iter().all(|&c| c == 2));
        }
    }

    #[test]
    fn frames_are_right_handed_and_orthonormal() {
        let m = standard_fixture(FixtureKind::Genus2, 4).unwrap();
        let normals = vertex_normals(m.vertices(), m.triangles());
        for (f, n) in m.frames().iter().zip(&normals) {
            assert!((norm(f[0]) - 1.0).abs() < 1e-12);
            assert!(dot(f[0], f[1]).abs() < 1e-12);
            assert!(dot(cross(f[0], f[1]), *n) > 0.0);
        }
    }

    #[test]
    fn reversed_explicit_frame_is_rejected() {
        let m = grid_torus(4, 4).unwrap();
        let mut frames = m.frames().to_vec();
        frames[3].swap(0, 1);
        let err = SurfaceMesh::build(m.vertices().to_vec(), m.triangles().to_vec(), Some(frames))
            .unwrap_err();
        assert_eq!(err, Error::FrameOrientation(3));
    }
}

//! Classification of PL maps `X → S²` by `(c, d mod n)`.
//!
//! A map is given by a unit vector per vertex of a [`SuspensionComplex`]; a
//! simplex maps by linear interpolation followed by radial projection. A face
//! with images `(a, b, c)` in ascending vertex order covers a value `p` with
//! sign `sign det(a, b, c)` when `p` lies in the open cone spanned by the
//! images; all such decisions are exact.
//!
//! * `c` pairs the pulled-back area generator with the suspended basis
//!   2-cycles: the signed count of covering faces of each cycle.
//! * `d` is the linking number of the preimages `A = F⁻¹(p)` and `B = F⁻¹(q)`
//!   of two regular values: `d = Σ_f x(f) · cover_q(f)` for an integer 2-chain
//!   `x` with `∂x = Â`, where `Â` is `A` pushed onto the 1-skeleton inside the
//!   tetrahedra it crosses. `p` and `q` are chosen so that `A` and `B` cross
//!   disjoint sets of tetrahedra, which makes the push invisible to `B`.
//!   Different bounding chains differ by 2-cycles, which change `d` by
//!   multiples of `n = gcd(c)`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::f64::consts::TAU;

use nalgebra::Matrix4;
use serde::{Deserialize, Serialize};

use crate::digest;
use crate::error::{Error, Result};
use crate::exact::orient3;
use crate::forms::{self, FormField};
use crate::homology;
use crate::mesh::{cross, dot, norm, SurfaceMesh};
use crate::suspension::{self, Side, SuspensionComplex};

pub type Vec3 = [f64; 3];

pub const NORTH: Vec3 = [0.0, 0.0, 1.0];
pub const UNIT_TOLERANCE: f64 = 1e-9;
/// Candidate values closer than this to an image edge arc are skipped.
pub const SCREEN_TOLERANCE: f64 = 1e-6;
/// A value closer than this to an image edge arc is not regular.
pub const REGULAR_TOLERANCE: f64 = 1e-9;
pub const MAX_ATTEMPTS: usize = 100;
pub const BOUNDARY_TOLERANCE: f64 = 1e-9;
pub const TRIVIALIZATION_CONDITION: f64 = 1e9;

/// Per-vertex images of a map `X → S²`.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereMap {
    vectors: Vec<Vec3>,
    boundary_conditioned: bool,
    mesh: u64,
    slices: usize,
}

impl SphereMap {
    pub fn new(x: &SuspensionComplex, vectors: Vec<Vec3>, boundary_conditioned: bool) -> Result<Self> {
        if vectors.len() != x.vertex_count() {
            return Err(Error::WrongLength { found: vectors.len(), expected: x.vertex_count() });
        }
        for (i, v) in vectors.iter().enumerate() {
            if !v.iter().all(|c| c.is_finite()) || (norm(*v) - 1.0).abs() > UNIT_TOLERANCE {
                return Err(Error::InvalidSphereMap(format!("vector {i} is not a unit vector")));
            }
        }
        if boundary_conditioned {
            let last = x.slices() - 1;
            let mut pinned = vec![x.apex()];
            for v in 0..x.base_vertex_count() {
                pinned.push(x.vertex(1, v));
                pinned.push(x.vertex(last, v));
            }
            if let Some(&i) = pinned.iter().find(|&&i| vectors[i] != NORTH) {
                return Err(Error::InvalidSphereMap(format!(
                    "boundary-conditioned map sends cone vertex {i} away from the north pole"
                )));
            }
        }
        Ok(SphereMap { vectors, boundary_conditioned, mesh: x.mesh_fingerprint(), slices: x.slices() })
    }

    pub fn vectors(&self) -> &[Vec3] {
        &self.vectors
    }

    pub fn is_boundary_conditioned(&self) -> bool {
        self.boundary_conditioned
    }

    /// SHA-256 of the little-endian coordinate bytes.
    pub fn digest_bytes(&self) -> Vec<u8> {
        let mut bytes = Vec::with_capacity(self.vectors.len() * 24 + 1);
        for v in &self.vectors {
            for c in v {
                bytes.extend_from_slice(&c.to_le_bytes());
            }
        }
        bytes.push(self.boundary_conditioned as u8);
        bytes
    }

    fn check(&self, x: &SuspensionComplex) -> Result<()> {
        if self.mesh != x.mesh_fingerprint() || self.slices != x.slices() {
            return Err(Error::MeshMismatch);
        }
        Ok(())
    }

    fn image(&self, cell: &[usize]) -> Vec<Vec3> {
        cell.iter().map(|&v| self.vectors[v]).collect()
    }
}

/// The pair `(c, d)` with `n = gcd |c|`; `d ∈ [0, n)` when `n > 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NInvariant {
    pub c: Vec<i64>,
    pub n: u64,
    pub d: i64,
    pub regular_values: Vec<Vec3>,
}

/// Coordinates of `j` in the orthonormal frame `(E₁, E₂, J_ref)` with
/// `E₁ ∝ J_plus − ⟨J_plus, J_ref⟩ J_ref` and `E₂ = E₁ J_ref`, under
/// `⟨A, B⟩ = tr(AᵀB)/4`. All inputs are skew in an orthonormal frame.
pub fn s2_coordinates(j: &Matrix4<f64>, j_ref: &Matrix4<f64>, j_plus: &Matrix4<f64>, vertex: usize) -> Result<Vec3> {
    let ip = |a: &Matrix4<f64>, b: &Matrix4<f64>| a.component_mul(b).sum() / 4.0;
    let c = ip(j_plus, j_ref);
    if !(c.abs() < 1.0) || (1.0 + c.abs()) / (1.0 - c.abs()) > TRIVIALIZATION_CONDITION {
        return Err(Error::DegenerateTrivialization(vertex));
    }
    if j == j_ref {
        return Ok(NORTH);
    }
    let e1 = (j_plus - j_ref * c) / (1.0 - c * c).sqrt();
    let e2 = e1 * j_ref;
    let v = [ip(j, &e1), ip(j, &e2), ip(j, j_ref)];
    let len = norm(v);
    if !(len > 0.0) {
        return Err(Error::DegenerateTrivialization(vertex));
    }
    Ok([v[0] / len, v[1] / len, v[2] / len])
}

/// Fails with `DegenerateImage` if some tetrahedron's image hull contains the origin.
pub fn check_image(x: &SuspensionComplex, map: &SphereMap) -> Result<()> {
    map.check(x)?;
    for (t, cell) in x.cells(3).iter().enumerate() {
        let p = map.image(&cell.vertices);
        if hull_contains_origin(&p) {
            return Err(Error::DegenerateImage(t));
        }
    }
    Ok(())
}

fn hull_contains_origin(p: &[Vec3]) -> bool {
    let (a, b, c, d) = (p[0], p[1], p[2], p[3]);
    // det(bcd)·a − det(acd)·b + det(abd)·c − det(abc)·d = 0
    let lambda = [orient3(b, c, d), -orient3(a, c, d), orient3(a, b, d), -orient3(a, b, c)];
    if lambda.iter().any(|&l| l != 0) {
        return lambda.iter().all(|&l| l >= 0) || lambda.iter().all(|&l| l <= 0);
    }
    // images span at most a plane through the origin
    let Some(u) = p.iter().copied().find(|v| norm(*v) > 0.0) else { return true };
    let normal = p
        .iter()
        .map(|v| cross(u, *v))
        .max_by(|x, y| norm(*x).total_cmp(&norm(*y)))
        .unwrap();
    if norm(normal) == 0.0 {
        return p.iter().any(|v| dot(*v, u) < 0.0);
    }
    let w = cross(normal, u);
    let mut angles: Vec<f64> = p.iter().map(|v| dot(*v, w).atan2(dot(*v, u))).collect();
    angles.sort_by(f64::total_cmp);
    let mut gap = angles[0] + TAU - angles[angles.len() - 1];
    for k in 1..angles.len() {
        gap = gap.max(angles[k] - angles[k - 1]);
    }
    gap <= std::f64::consts::PI
}

/// Signed covering of `p` by the image of a face: `sign det(a,b,c)` or zero.
pub fn face_cover(x: &SuspensionComplex, map: &SphereMap, face: usize, p: Vec3) -> i64 {
    let im = map.image(&x.cells(2)[face].vertices);
    cover(&im, p)
}

fn cover(im: &[Vec3], p: Vec3) -> i64 {
    let (a, b, c) = (im[0], im[1], im[2]);
    let s = orient3(p, b, c);
    if s == 0 || orient3(a, p, c) != s || orient3(a, b, p) != s || orient3(a, b, c) != s {
        return 0;
    }
    s as i64
}

fn covers(x: &SuspensionComplex, map: &SphereMap, p: Vec3) -> Vec<i64> {
    x.cells(2).iter().map(|f| cover(&map.image(&f.vertices), p)).collect()
}

/// Distance-like margin of `p` to the image arc of every edge; `p` is
/// rejected when within `tol` of an arc or of a collapsed edge image.
pub fn is_regular(x: &SuspensionComplex, map: &SphereMap, p: Vec3, tol: f64) -> bool {
    x.cells(1).iter().all(|e| {
        let a = map.vectors[e.vertices[0]];
        let b = map.vectors[e.vertices[1]];
        let n = cross(a, b);
        let nn = norm(n);
        if nn < 1e-12 {
            return norm([p[0] - a[0], p[1] - a[1], p[2] - a[2]]) >= tol
                && norm([p[0] - b[0], p[1] - b[1], p[2] - b[2]]) >= tol;
        }
        if dot(p, n).abs() / nn >= tol {
            return true;
        }
        // close to the great circle: reject only near the arc itself
        let within = dot(cross(a, p), n) >= -tol * nn && dot(cross(p, b), n) >= -tol * nn;
        !(within && dot(p, [a[0] + b[0], a[1] + b[1], a[2] + b[2]]) > 0.0)
    })
}

/// Low-discrepancy points on the sphere (additive recurrence on the square,
/// mapped by the area-preserving cylinder projection), offset by `seed`.
pub fn candidate_sequence(seed: u64) -> impl Iterator<Item = Vec3> {
    const G: f64 = 1.324_717_957_244_746;
    let (a1, a2) = (1.0 / G, 1.0 / (G * G));
    let s1 = (seed & 0xffff_ffff) as f64 / 4_294_967_296.0;
    let s2 = (seed >> 32) as f64 / 4_294_967_296.0;
    (1..).map(move |k| {
        let u = (s1 + k as f64 * a1).fract();
        let v = (s2 + k as f64 * a2).fract();
        let z = 1.0 - 2.0 * u;
        let r = (1.0 - z * z).max(0.0).sqrt();
        let phi = TAU * v;
        [r * phi.cos(), r * phi.sin(), z]
    })
}

fn seed(map: &SphereMap) -> u64 {
    digest::seed_from(&map.digest_bytes())
}

/// The first `count` screened regular values of the deterministic sequence.
pub fn regular_values(x: &SuspensionComplex, map: &SphereMap, count: usize) -> Result<Vec<Vec3>> {
    map.check(x)?;
    let mut out = Vec::with_capacity(count);
    for p in candidate_sequence(seed(map)).take(MAX_ATTEMPTS) {
        if is_regular(x, map, p, SCREEN_TOLERANCE) {
            out.push(p);
            if out.len() == count {
                return Ok(out);
            }
        }
    }
    Err(Error::NoRegularValue(MAX_ATTEMPTS))
}

/// Pairing of each 2-cycle with the pulled-back generator, counted at `p`.
pub fn chern_class_at(x: &SuspensionComplex, map: &SphereMap, cycles: &[Vec<i64>], p: Vec3) -> Vec<i64> {
    let cov = covers(x, map, p);
    cycles.iter().map(|z| z.iter().zip(&cov).map(|(a, b)| a * b).sum()).collect()
}

/// `c`, counted at two regular values which must agree.
pub fn chern_class(x: &SuspensionComplex, map: &SphereMap, cycles: &[Vec<i64>]) -> Result<Vec<i64>> {
    check_image(x, map)?;
    let values = regular_values(x, map, 2)?;
    let first = chern_class_at(x, map, cycles, values[0]);
    let second = chern_class_at(x, map, cycles, values[1]);
    if first != second {
        return Err(Error::RegularValueDisagreement(first, second));
    }
    Ok(first)
}

/// One oriented piece of a preimage: it enters tetrahedron `tet` through
/// face `from` and leaves through face `to`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Segment {
    pub tet: usize,
    pub from: usize,
    pub to: usize,
}

/// Preimage of a regular value, a 1-cycle on the graph whose nodes are the
/// crossing points (one per crossed face) and whose edges are tetrahedra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreimageCycle {
    pub segments: Vec<Segment>,
}

impl PreimageCycle {
    /// Net multiplicity at each crossing node; zero everywhere for a cycle.
    pub fn boundary(&self) -> BTreeMap<usize, i64> {
        let mut out = BTreeMap::new();
        for s in &self.segments {
            *out.entry(s.to).or_insert(0) += 1;
            *out.entry(s.from).or_insert(0) -= 1;
        }
        out.retain(|_, v| *v != 0);
        out
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn tets(&self) -> BTreeSet<usize> {
        self.segments.iter().map(|s| s.tet).collect()
    }

    /// Number of closed loops.
    pub fn components(&self) -> usize {
        let mut next: HashMap<usize, usize> = HashMap::new();
        for s in &self.segments {
            next.insert(s.from, s.to);
        }
        let mut seen = BTreeSet::new();
        let mut loops = 0;
        for s in &self.segments {
            if seen.contains(&s.from) {
                continue;
            }
            loops += 1;
            let mut f = s.from;
            while seen.insert(f) {
                f = next[&f];
            }
        }
        loops
    }
}

pub fn preimage_cycle(x: &SuspensionComplex, map: &SphereMap, p: Vec3) -> Result<PreimageCycle> {
    check_image(x, map)?;
    if !is_regular(x, map, p, REGULAR_TOLERANCE) {
        return Err(Error::NotRegular);
    }
    let cov = covers(x, map, p);
    let mut segments = Vec::new();
    for t in 0..x.cells(3).len() {
        let mut from = Vec::new();
        let mut to = Vec::new();
        for (f, s) in x.boundary_of(3, t) {
            match s * cov[f] {
                1 => to.push(f),
                -1 => from.push(f),
                _ => {}
            }
        }
        match (from.as_slice(), to.as_slice()) {
            ([], []) => {}
            ([a], [b]) => segments.push(Segment { tet: t, from: *a, to: *b }),
            _ => return Err(Error::NotRegular),
        }
    }
    let cycle = PreimageCycle { segments };
    if !cycle.boundary().is_empty() {
        return Err(Error::NotACycle("preimage".into()));
    }
    Ok(cycle)
}

/// Which end of `X` a bounding chain is swept to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sweep {
    Down,
    Up,
}

/// `Â`: each segment replaced by the edge joining the lowest vertices of its two faces.
pub fn pushed_cycle(x: &SuspensionComplex, cycle: &PreimageCycle) -> Result<BTreeMap<usize, i64>> {
    let mut out = BTreeMap::new();
    for s in &cycle.segments {
        let u = x.cells(2)[s.from].vertices[0];
        let w = x.cells(2)[s.to].vertices[0];
        if u == w {
            continue;
        }
        let side = x.cells(3)[s.tet].side;
        let e = x
            .cell_index(1, &[u, w], side)
            .ok_or_else(|| Error::NotACycle(format!("edge {u}-{w} missing")))?;
        *out.entry(e).or_insert(0) += if u < w { 1 } else { -1 };
    }
    out.retain(|_, v| *v != 0);
    Ok(out)
}

/// An integer 2-chain `x` with `∂x = cycle`.
///
/// Cycles avoiding the apex are swept slice by slice through the strip
/// triangles of the prism split and coned off at the chosen end; anything
/// else goes through an exact sparse solve of `∂₂ x = cycle`.
pub fn bounding_chain(x: &SuspensionComplex, cycle: &BTreeMap<usize, i64>, sweep: Sweep) -> Result<Vec<i64>> {
    let apex = x.apex();
    let touches_apex = cycle.keys().any(|&e| x.cells(1)[e].vertices.contains(&apex));
    let chain = if touches_apex { None } else { sweep_chain(x, cycle, sweep) };
    let chain = match chain {
        Some(c) => c,
        None => solve_chain(x, cycle)?,
    };
    let mut target = vec![0i64; x.cells(1).len()];
    for (&e, &k) in cycle {
        target[e] = k;
    }
    if x.boundary_chain(2, &chain) != target {
        return Err(Error::NotACycle("bounding chain".into()));
    }
    Ok(chain)
}

fn solve_chain(x: &SuspensionComplex, cycle: &BTreeMap<usize, i64>) -> Result<Vec<i64>> {
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;
    let mut b = vec![BigInt::from(0); x.cells(1).len()];
    for (&e, &k) in cycle {
        b[e] = BigInt::from(k);
    }
    let sol = x.boundary_matrix(2).solve(&b).ok_or(Error::NotNullHomologous)?;
    sol.iter().map(|v| v.to_i64().ok_or(Error::NotNullHomologous)).collect()
}

enum EdgeKind {
    Horizontal { s: usize, lo: usize, hi: usize },
    Diagonal { s: usize, lo: usize, hi: usize },
    Vertical { s: usize },
}

fn classify_edge(x: &SuspensionComplex, e: usize) -> EdgeKind {
    let v = &x.cells(1)[e].vertices;
    let (s0, b0) = x.slice_of(v[0]).unwrap();
    let (s1, b1) = x.slice_of(v[1]).unwrap();
    if s0 == s1 {
        EdgeKind::Horizontal { s: s0, lo: b0.min(b1), hi: b0.max(b1) }
    } else if b0 == b1 {
        EdgeKind::Vertical { s: s0 }
    } else {
        // the lower-slice end always has the lower base index
        EdgeKind::Diagonal { s: s0, lo: b0, hi: b1 }
    }
}

fn sweep_chain(x: &SuspensionComplex, cycle: &BTreeMap<usize, i64>, sweep: Sweep) -> Option<Vec<i64>> {
    let last = x.slices() - 1;
    let mut chain = vec![0i64; x.cells(2).len()];
    let mut z: BTreeMap<usize, i64> = cycle.clone();
    let v = |s: usize, b: usize| x.vertex(s, b);
    // remove edge `e` (coefficient k) by subtracting k·σ·∂F where σ = [e : ∂F]
    let mut eliminate = |z: &mut BTreeMap<usize, i64>, e: usize, k: i64, face: &[usize], side: Side| -> Option<()> {
        let f = x.cell_index(2, face, side)?;
        let bd = x.boundary_of(2, f);
        let sigma = bd.iter().find(|(g, _)| *g == e)?.1;
        chain[f] += k * sigma;
        for (g, s) in bd {
            *z.entry(g).or_insert(0) -= k * sigma * s;
        }
        z.retain(|_, c| *c != 0);
        Some(())
    };
    // level of an edge: the slice it is pushed away from
    let level = |e: usize| -> usize {
        match classify_edge(x, e) {
            EdgeKind::Horizontal { s, .. } => s,
            EdgeKind::Diagonal { s, .. } | EdgeKind::Vertical { s } => match sweep {
                Sweep::Down => s + 1,
                Sweep::Up => s,
            },
        }
    };
    let levels: Vec<usize> = match sweep {
        Sweep::Down => (1..=last).rev().collect(),
        Sweep::Up => (1..=last).collect(),
    };
    for s in levels {
        for pass in 0..2 {
            let edges: Vec<(usize, i64)> = z.iter().filter(|(&e, _)| level(e) == s).map(|(&e, &k)| (e, k)).collect();
            for (e, k) in edges {
                match (classify_edge(x, e), sweep) {
                    (EdgeKind::Horizontal { lo, hi, .. }, _) if pass == 0 => {
                        let (face, side) = match sweep {
                            Sweep::Down if s > 1 => (vec![v(s - 1, lo), v(s, lo), v(s, hi)], Side::Interior),
                            Sweep::Up if s < last => (vec![v(s, lo), v(s, hi), v(s + 1, hi)], Side::Interior),
                            Sweep::Down => (vec![v(s, lo), v(s, hi), x.apex()], Side::Bottom),
                            Sweep::Up => (vec![v(s, lo), v(s, hi), x.apex()], Side::Top),
                        };
                        eliminate(&mut z, e, k, &face, side)?;
                    }
                    (EdgeKind::Diagonal { s: d, lo, hi }, Sweep::Down) if pass == 1 => {
                        eliminate(&mut z, e, k, &[v(d, lo), v(d, hi), v(d + 1, hi)], Side::Interior)?;
                    }
                    (EdgeKind::Diagonal { s: d, lo, hi }, Sweep::Up) if pass == 1 => {
                        eliminate(&mut z, e, k, &[v(d, lo), v(d + 1, lo), v(d + 1, hi)], Side::Interior)?;
                    }
                    _ => {}
                }
            }
        }
        // what is left at this level must be vertical edges, which cancel for a cycle
        if z.keys().any(|&e| level(e) == s && !x.cells(1)[e].vertices.contains(&x.apex())) {
            return None;
        }
    }
    // remaining apex edges cancel for a cycle
    if !z.is_empty() {
        return None;
    }
    Some(chain)
}

/// `x · B` where `∂x = Â(p)` and `B = F⁻¹(q)`.
pub fn linking_number(x: &SuspensionComplex, map: &SphereMap, p: Vec3, q: Vec3, sweep: Sweep) -> Result<i64> {
    let a = preimage_cycle(x, map, p)?;
    let b = preimage_cycle(x, map, q)?;
    if !a.tets().is_disjoint(&b.tets()) {
        return Err(Error::NotRegular);
    }
    let chain = bounding_chain(x, &pushed_cycle(x, &a)?, sweep)?;
    let cov = covers(x, map, q);
    Ok(chain.iter().zip(&cov).map(|(a, b)| a * b).sum())
}

/// Two screened regular values whose preimages cross disjoint tetrahedra.
pub fn linking_pair(x: &SuspensionComplex, map: &SphereMap) -> Result<(Vec3, Vec3)> {
    map.check(x)?;
    let mut accepted: Vec<(Vec3, BTreeSet<usize>)> = Vec::new();
    for p in candidate_sequence(seed(map)).take(MAX_ATTEMPTS) {
        if !is_regular(x, map, p, SCREEN_TOLERANCE) {
            continue;
        }
        let tets = preimage_cycle(x, map, p)?.tets();
        if let Some((q, _)) = accepted.iter().find(|(_, t)| t.is_disjoint(&tets)) {
            return Ok((*q, p));
        }
        accepted.push((p, tets));
    }
    Err(Error::NoRegularValue(MAX_ATTEMPTS))
}

fn reduce(d: i64, n: u64) -> i64 {
    if n > 0 {
        d.rem_euclid(n as i64)
    } else {
        d
    }
}

/// Hopf degree, reduced into `[0, n)` when `n = gcd |c| > 0`.
pub fn hopf_degree(x: &SuspensionComplex, map: &SphereMap, c: &[i64]) -> Result<i64> {
    let n = homology::multiplicity(&homology::CohomologyClass { pairings: c.to_vec() });
    let (p, q) = linking_pair(x, map)?;
    Ok(reduce(linking_number(x, map, p, q, Sweep::Down)?, n))
}

pub fn classify(x: &SuspensionComplex, map: &SphereMap, cycles: &[Vec<i64>]) -> Result<NInvariant> {
    let c = chern_class(x, map, cycles)?;
    let n = homology::multiplicity(&homology::CohomologyClass { pairings: c.clone() });
    let (p, q) = linking_pair(x, map)?;
    let d = reduce(linking_number(x, map, p, q, Sweep::Down)?, n);
    Ok(NInvariant { c, n, d, regular_values: vec![p, q] })
}

/// Classifies a map on the suspension of `mesh`, using the preferred basis.
pub fn classify_on_mesh(mesh: &SurfaceMesh, x: &SuspensionComplex, map: &SphereMap) -> Result<NInvariant> {
    let cycles = if mesh.genus() == 0 {
        Vec::new()
    } else {
        suspension::basis_2cycles(x, mesh, &homology::preferred_basis(mesh)?)?
    };
    classify(x, map, &cycles)
}

/// Per-slice forms `(ω_t, ω⁺_t)` for `t = 0, …, T` and one reference metric.
#[derive(Debug, Clone)]
pub struct IsotopyPath {
    pub slices: Vec<(FormField, FormField)>,
    pub metric: Matrix4<f64>,
}

/// The sphere map of an isotopy path on `X` with `T + 2` slices: path slice
/// `t` sits on slice `t + 1` of `X`, and the boundary slices and cones map to
/// the north pole.
pub fn isotopy_sphere_map(mesh: &SurfaceMesh, path: &IsotopyPath) -> Result<(SuspensionComplex, SphereMap)> {
    let steps = path.slices.len();
    if steps < 2 {
        return Err(Error::TooFewTimeSteps(steps));
    }
    let g = path.metric;
    let chol = g.cholesky().ok_or(Error::NotSpd(0))?;
    let l = chol.l();
    let l_inv_t = l.try_inverse().ok_or(Error::NotSpd(0))?.transpose();
    // structures expressed in a metric-orthonormal frame, where they are skew
    let to_frame = |j: Matrix4<f64>| l.transpose() * j * l_inv_t;
    let reference = to_frame(forms::compatible_j(&g, &forms::canonical_matrix(), 0)?);

    let x = suspension::build_suspension(mesh, steps + 2)?;
    let nv = mesh.vertex_count();
    let mut vectors = vec![NORTH; x.vertex_count()];
    for (t, (omega, plus)) in path.slices.iter().enumerate() {
        if omega.mesh_fingerprint() != mesh.fingerprint() || plus.mesh_fingerprint() != mesh.fingerprint() {
            return Err(Error::MeshMismatch);
        }
        let boundary = t == 0 || t == steps - 1;
        for v in 0..nv {
            let j = to_frame(forms::compatible_j(&g, &omega.matrices()[v], v)?);
            if boundary {
                let dev = (j - reference).amax();
                if dev > BOUNDARY_TOLERANCE {
                    return Err(Error::BoundaryConditionViolated {
                        slice: t,
                        reason: format!("structure at vertex {v} deviates from the reference by {dev:e}"),
                    });
                }
                continue;
            }
            let jp = to_frame(forms::compatible_j(&g, &plus.matrices()[v], v)?);
            vectors[x.vertex(t + 1, v)] = s2_coordinates(&reference, &j, &jp, v)?;
        }
    }
    let map = SphereMap::new(&x, vectors, true)?;
    Ok((x, map))
}

pub fn n_invariant(mesh: &SurfaceMesh, path: &IsotopyPath) -> Result<NInvariant> {
    let (x, map) = isotopy_sphere_map(mesh, path)?;
    classify_on_mesh(mesh, &x, &map)
}

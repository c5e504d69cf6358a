//! Integer 1-homology and 1-cohomology of a [`SurfaceMesh`].
//!
//! Chains and cochains are indexed by mesh edge and measured against the
//! canonical edge direction `lo → hi`.

use std::collections::VecDeque;

use num_integer::Integer;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mesh::SurfaceMesh;
use crate::snf;

/// Relative tolerance for rounding a real pairing to an integer.
pub const INTEGRALITY_TOLERANCE: f64 = 1e-6;

/// Integer 1-chain with vanishing boundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle {
    coeffs: Vec<i64>,
    mesh: u64,
}

impl Cycle {
    /// Checks the boundary at every vertex.
    pub fn new(mesh: &SurfaceMesh, coeffs: Vec<i64>) -> Result<Self> {
        if coeffs.len() != mesh.edges().len() {
            return Err(Error::WrongLength { found: coeffs.len(), expected: mesh.edges().len() });
        }
        let mut bd = vec![0i64; mesh.vertex_count()];
        for (e, &k) in mesh.edges().iter().zip(&coeffs) {
            bd[e[1]] += k;
            bd[e[0]] -= k;
        }
        if let Some(v) = bd.iter().position(|&b| b != 0) {
            return Err(Error::NotACycle(format!("boundary {} at vertex {v}", bd[v])));
        }
        Ok(Cycle { coeffs, mesh: mesh.fingerprint() })
    }

    /// A closed vertex walk `v0 → v1 → … → v0` (the closing step is implied).
    pub fn from_vertex_loop(mesh: &SurfaceMesh, walk: &[usize]) -> Result<Self> {
        let mut coeffs = vec![0i64; mesh.edges().len()];
        for k in 0..walk.len() {
            let (a, b) = (walk[k], walk[(k + 1) % walk.len()]);
            let (e, s) = mesh
                .edge_of(a, b)
                .ok_or_else(|| Error::NotACycle(format!("({a}, {b}) is not an edge")))?;
            coeffs[e] += s;
        }
        Cycle::new(mesh, coeffs)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn mesh_fingerprint(&self) -> u64 {
        self.mesh
    }

    /// `(u, v, coeff)` triples for the nonzero canonical edges.
    pub fn edge_list(&self, mesh: &SurfaceMesh) -> Vec<[i64; 3]> {
        mesh.edges()
            .iter()
            .zip(&self.coeffs)
            .filter(|(_, &k)| k != 0)
            .map(|(e, &k)| [e[0] as i64, e[1] as i64, k])
            .collect()
    }
}

/// How a [`CycleBasis`] was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BasisKind {
    TreeCotree,
    /// Row and column loops of a grid torus.
    GridTorus,
}

impl BasisKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BasisKind::TreeCotree => "tree-cotree",
            BasisKind::GridTorus => "grid-torus",
        }
    }
}

#[derive(Debug, Clone)]
pub struct CycleBasis {
    cycles: Vec<Cycle>,
    kind: BasisKind,
    /// Cocycles with `dual[i](cycles[j]) = δ_ij`.
    dual: Vec<Vec<i64>>,
}

impl CycleBasis {
    pub fn cycles(&self) -> &[Cycle] {
        &self.cycles
    }

    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    /// Integer cocycles dual to the basis cycles.
    pub fn dual_cocycles(&self) -> &[Vec<i64>] {
        &self.dual
    }
}

/// Real-valued 1-cochain on canonical edges (antisymmetric under reversal).
#[derive(Debug, Clone, PartialEq)]
pub struct IntegerCocycle {
    values: Vec<f64>,
    mesh: u64,
}

impl IntegerCocycle {
    pub fn new(mesh: &SurfaceMesh, values: Vec<f64>) -> Result<Self> {
        if values.len() != mesh.edges().len() {
            return Err(Error::WrongLength { found: values.len(), expected: mesh.edges().len() });
        }
        Ok(IntegerCocycle { values, mesh: mesh.fingerprint() })
    }

    pub fn from_integers(mesh: &SurfaceMesh, values: &[i64]) -> Result<Self> {
        Self::new(mesh, values.iter().map(|&v| v as f64).collect())
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Largest absolute triangle sum; zero for a cocycle.
    pub fn closure_defect(&self, mesh: &SurfaceMesh) -> f64 {
        (0..mesh.triangles().len())
            .map(|t| {
                mesh.triangle_edges(t)
                    .iter()
                    .map(|&(e, s)| s as f64 * self.values[e])
                    .sum::<f64>()
                    .abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Pairing vector of a class against a basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyClass {
    pub pairings: Vec<i64>,
}

impl CohomologyClass {
    pub fn zero(len: usize) -> Self {
        CohomologyClass { pairings: vec![0; len] }
    }
}

/// Coboundary `δf(u → v) = f(v) − f(u)` of a vertex function.
pub fn coboundary(mesh: &SurfaceMesh, f: &[f64]) -> IntegerCocycle {
    let values = mesh.edges().iter().map(|e| f[e[1]] - f[e[0]]).collect();
    IntegerCocycle { values, mesh: mesh.fingerprint() }
}

pub fn pair(cocycle: &IntegerCocycle, cycle: &Cycle) -> Result<f64> {
    if cocycle.mesh != cycle.mesh {
        return Err(Error::MeshMismatch);
    }
    Ok(cocycle
        .values
        .iter()
        .zip(&cycle.coeffs)
        .map(|(v, &k)| v * k as f64)
        .sum())
}

/// Rounds `x` when it is within the integrality tolerance of an integer.
pub fn round_integral(x: f64) -> Result<i64> {
    let r = x.round();
    if (x - r).abs() < INTEGRALITY_TOLERANCE * x.abs().max(1.0) {
        Ok(r as i64)
    } else {
        Err(Error::NotIntegral(x))
    }
}

/// Greatest common divisor of the pairing entries; zero for the zero class.
pub fn multiplicity(class: &CohomologyClass) -> u64 {
    class
        .pairings
        .iter()
        .fold(0u64, |g, &v| g.gcd(&v.unsigned_abs()))
}

struct TreeCotree {
    /// parent edge (edge index, sign from child to parent) for each vertex but the root
    tree_parent: Vec<Option<(usize, usize, i64)>>,
    in_tree: Vec<bool>,
    /// triangles in BFS order of the dual tree, with the edge to the parent triangle
    dual_order: Vec<(usize, Option<usize>)>,
    generators: Vec<usize>,
}

fn tree_cotree(mesh: &SurfaceMesh) -> TreeCotree {
    let n = mesh.vertex_count();
    let ne = mesh.edges().len();
    let adj = mesh.neighbors();
    let mut tree_parent = vec![None; n];
    let mut in_tree = vec![false; ne];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        for &w in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                let (e, s) = mesh.edge_of(w, u).unwrap();
                tree_parent[w] = Some((u, e, s));
                in_tree[e] = true;
                queue.push_back(w);
            }
        }
    }

    // dual graph: triangles adjacent through non-tree edges
    let nt = mesh.triangles().len();
    let mut edge_tris = vec![Vec::with_capacity(2); ne];
    for t in 0..nt {
        for (e, _) in mesh.triangle_edges(t) {
            edge_tris[e].push(t);
        }
    }
    let mut in_cotree = vec![false; ne];
    let mut tseen = vec![false; nt];
    tseen[0] = true;
    let mut dual_order = vec![(0usize, None)];
    let mut tq = VecDeque::from([0usize]);
    while let Some(t) = tq.pop_front() {
        for (e, _) in mesh.triangle_edges(t) {
            if in_tree[e] {
                continue;
            }
            for &u in &edge_tris[e] {
                if !tseen[u] {
                    tseen[u] = true;
                    in_cotree[e] = true;
                    dual_order.push((u, Some(e)));
                    tq.push_back(u);
                }
            }
        }
    }
    let generators = (0..ne).filter(|&e| !in_tree[e] && !in_cotree[e]).collect();
    TreeCotree { tree_parent, in_tree, dual_order, generators }
}

fn tree_path_to_root(tc: &TreeCotree, mut v: usize, coeffs: &mut [i64], sign: i64) {
    while let Some((p, e, s)) = tc.tree_parent[v] {
        coeffs[e] += sign * s;
        v = p;
    }
}

/// Cocycle taking `values[k]` on generator `k`, zero on tree edges, closed on every triangle.
fn extend_generator_values(mesh: &SurfaceMesh, tc: &TreeCotree, gen_values: &[i64]) -> Vec<i64> {
    let ne = mesh.edges().len();
    let mut z = vec![0i64; ne];
    let mut known: Vec<bool> = tc.in_tree.clone();
    for (&g, &v) in tc.generators.iter().zip(gen_values) {
        z[g] = v;
        known[g] = true;
    }
    // leaves of the dual tree first: each has only its parent edge unknown
    for &(t, parent) in tc.dual_order.iter().rev() {
        let Some(pe) = parent else { continue };
        let mut acc = 0i64;
        let mut psign = 0i64;
        for (e, s) in mesh.triangle_edges(t) {
            if e == pe {
                psign = s;
            } else {
                debug_assert!(known[e]);
                acc += s * z[e];
            }
        }
        z[pe] = -acc * psign;
        known[pe] = true;
    }
    z
}

/// Homology basis from a tree–cotree decomposition: BFS spanning tree of the
/// 1-skeleton, BFS spanning tree of the dual graph on the remaining edges;
/// each leftover edge closes one generator through the tree.
pub fn homology_basis(mesh: &SurfaceMesh) -> Result<CycleBasis> {
    let tc = tree_cotree(mesh);
    let expected = 2 * mesh.genus();
    if tc.generators.len() != expected {
        return Err(Error::InternalRankError { found: tc.generators.len(), expected });
    }
    let ne = mesh.edges().len();
    let mut cycles = Vec::with_capacity(expected);
    for &g in &tc.generators {
        let [u, v] = mesh.edges()[g];
        let mut coeffs = vec![0i64; ne];
        coeffs[g] = 1;
        // root → u, then u → v, then v → root
        tree_path_to_root(&tc, u, &mut coeffs, -1);
        tree_path_to_root(&tc, v, &mut coeffs, 1);
        cycles.push(Cycle::new(mesh, coeffs)?);
    }
    let dual: Vec<Vec<i64>> = (0..expected)
        .map(|k| {
            let mut vals = vec![0i64; expected];
            vals[k] = 1;
            extend_generator_values(mesh, &tc, &vals)
        })
        .collect();
    let basis = CycleBasis { cycles, kind: BasisKind::TreeCotree, dual };
    check_unimodular(mesh, &basis)?;
    Ok(basis)
}

/// Row loop (`i` varies, `j = 0`) and column loop (`j` varies, `i = 0`) of a grid torus.
pub fn grid_basis(mesh: &SurfaceMesh) -> Result<CycleBasis> {
    let lattice = mesh.lattice().ok_or(Error::MissingLattice)?;
    if mesh.genus() != 1 {
        return Err(Error::WrongGenus(mesh.genus()));
    }
    let mut at = std::collections::HashMap::new();
    for (v, c) in lattice.coords.iter().enumerate() {
        at.insert(*c, v);
    }
    let lookup = |i: usize, j: usize| {
        at.get(&[i, j])
            .copied()
            .ok_or_else(|| Error::Parse(format!("lattice has no vertex at ({i}, {j})")))
    };
    let rows: Vec<usize> = (0..lattice.rows).map(|i| lookup(i, 0)).collect::<Result<_>>()?;
    let cols: Vec<usize> = (0..lattice.cols).map(|j| lookup(0, j)).collect::<Result<_>>()?;
    let cycles = vec![Cycle::from_vertex_loop(mesh, &rows)?, Cycle::from_vertex_loop(mesh, &cols)?];
    let dual = dual_cocycles_for(mesh, &cycles)?;
    let basis = CycleBasis { cycles, kind: BasisKind::GridTorus, dual };
    check_unimodular(mesh, &basis)?;
    Ok(basis)
}

/// Grid basis on a lattice torus, tree–cotree basis otherwise.
pub fn preferred_basis(mesh: &SurfaceMesh) -> Result<CycleBasis> {
    if mesh.lattice().is_some() && mesh.genus() == 1 {
        grid_basis(mesh)
    } else {
        homology_basis(mesh)
    }
}

/// Cocycles dual to an arbitrary list of cycles forming a basis.
fn dual_cocycles_for(mesh: &SurfaceMesh, cycles: &[Cycle]) -> Result<Vec<Vec<i64>>> {
    let reference = homology_basis(mesh)?;
    let n = cycles.len();
    if n != reference.len() {
        return Err(Error::WrongLength { found: n, expected: reference.len() });
    }
    // pairing[k][j] = <ζ_k, b_j>
    let pairing: Vec<Vec<i64>> = reference
        .dual
        .iter()
        .map(|z| cycles.iter().map(|c| int_pair(z, c.coeffs())).collect())
        .collect();
    let inv = snf::integer_inverse(&pairing).ok_or_else(|| {
        Error::NotUnimodular(i64::try_from(snf::determinant(&pairing)).unwrap_or(0))
    })?;
    // ζ'_i = Σ_k inv[i][k] ζ_k
    Ok((0..n)
        .map(|i| {
            let mut z = vec![0i64; mesh.edges().len()];
            for k in 0..n {
                for (zi, rk) in z.iter_mut().zip(&reference.dual[k]) {
                    *zi += inv[i][k] * rk;
                }
            }
            z
        })
        .collect())
}

fn int_pair(cochain: &[i64], chain: &[i64]) -> i64 {
    cochain.iter().zip(chain).map(|(a, b)| a * b).sum()
}

/// Evaluation of `α ∪ β` on the fundamental class, with vertices of each
/// triangle ordered by index.
pub fn cup_on_fundamental_class(mesh: &SurfaceMesh, alpha: &[i64], beta: &[i64]) -> i64 {
    let mut total = 0i64;
    for tri in mesh.triangles() {
        let mut sorted = *tri;
        sorted.sort_unstable();
        let sign = permutation_sign(tri, &sorted);
        let (e01, _) = mesh.edge_of(sorted[0], sorted[1]).unwrap();
        let (e12, _) = mesh.edge_of(sorted[1], sorted[2]).unwrap();
        total += sign * alpha[e01] * beta[e12];
    }
    total
}

/// Sign of the permutation taking `from` to `to` (same elements).
pub(crate) fn permutation_sign<const N: usize>(from: &[usize; N], to: &[usize; N]) -> i64 {
    let mut perm: Vec<usize> = from
        .iter()
        .map(|x| to.iter().position(|y| y == x).unwrap())
        .collect();
    let mut sign = 1;
    for i in 0..N {
        while perm[i] != i {
            let j = perm[i];
            perm.swap(i, j);
            sign = -sign;
        }
    }
    sign
}

/// Antisymmetric matrix of algebraic intersection numbers `I(b_i, b_j)`.
///
/// Computed as the inverse transpose of the cup-product matrix of the dual
/// cocycles, which is the Poincaré-duality expression of the intersection
/// pairing.
pub fn intersection_form(mesh: &SurfaceMesh, basis: &CycleBasis) -> Result<Vec<Vec<i64>>> {
    let n = basis.len();
    let cup: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| cup_on_fundamental_class(mesh, &basis.dual[i], &basis.dual[j]))
                .collect()
        })
        .collect();
    let inv = snf::integer_inverse(&cup).ok_or_else(|| {
        Error::NotUnimodular(i64::try_from(snf::determinant(&cup)).unwrap_or(0))
    })?;
    Ok((0..n).map(|i| (0..n).map(|j| inv[j][i]).collect()).collect())
}

fn check_unimodular(mesh: &SurfaceMesh, basis: &CycleBasis) -> Result<()> {
    let form = intersection_form(mesh, basis)?;
    let det = snf::determinant(&form);
    if det.abs().is_one() || basis.is_empty() {
        Ok(())
    } else {
        Err(Error::NotUnimodular(i64::try_from(det).unwrap_or(0)))
    }
}

/// Integer cocycle whose pairings with the basis cycles are `periods`.
pub fn cocycle_with_periods(basis: &CycleBasis, periods: &[i64]) -> Result<Vec<i64>> {
    if periods.len() != basis.len() {
        return Err(Error::WrongLength { found: periods.len(), expected: basis.len() });
    }
    let ne = basis.cycles.first().map_or(0, |c| c.coeffs.len());
    let mut z = vec![0i64; ne];
    for (d, &w) in basis.dual.iter().zip(periods) {
        for (zi, di) in z.iter_mut().zip(d) {
            *zi += w * di;
        }
    }
    Ok(z)
}

/// Pairings of an integer cocycle with every basis cycle.
pub fn integer_periods(basis: &CycleBasis, cocycle: &[i64]) -> Vec<i64> {
    basis.cycles.iter().map(|c| int_pair(cocycle, &c.coeffs)).collect()
}

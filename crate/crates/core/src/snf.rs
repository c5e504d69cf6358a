//! Exact integer linear algebra over arbitrary-precision integers.
//!
//! Boundary matrices of simplicial complexes are sparse with ±1 entries, so
//! [`SparseIntMatrix`] first eliminates unit pivots (Markowitz order, row
//! operations only) and hands the small residual block to a dense Smith
//! normal form with tracked transforms. After `k` unit pivots the matrix is,
//! up to permutation, `[[U, X], [0, R]]` with `U` unitriangular, so
//! `SNF(A) = I_k ⊕ SNF(R)`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone)]
pub struct SparseIntMatrix {
    nrows: usize,
    ncols: usize,
    rows: Vec<BTreeMap<usize, BigInt>>,
}

/// Rank and non-unit invariant factors of an integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithInvariants {
    pub rank: usize,
    /// Invariant factors greater than one (torsion coefficients), ascending.
    pub torsion: Vec<BigInt>,
}

impl SparseIntMatrix {
    pub fn new(nrows: usize, ncols: usize) -> Self {
        SparseIntMatrix { nrows, ncols, rows: vec![BTreeMap::new(); nrows] }
    }

    /// Builds a matrix from column lists of `(row, value)`; repeated entries add.
    pub fn from_columns(nrows: usize, columns: &[Vec<(usize, i64)>]) -> Self {
        let mut m = Self::new(nrows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            for &(r, v) in col {
                m.add(r, c, &BigInt::from(v));
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn add(&mut self, r: usize, c: usize, v: &BigInt) {
        assert!(r < self.nrows && c < self.ncols);
        let entry = self.rows[r].entry(c).or_insert_with(BigInt::zero);
        *entry += v;
        if entry.is_zero() {
            self.rows[r].remove(&c);
        }
    }

    pub fn get(&self, r: usize, c: usize) -> BigInt {
        self.rows[r].get(&c).cloned().unwrap_or_default()
    }

    /// Appends columns (same row count).
    pub fn hstack(&self, other: &SparseIntMatrix) -> SparseIntMatrix {
        assert_eq!(self.nrows, other.nrows);
        let mut m = self.clone();
        m.ncols += other.ncols;
        for (r, row) in other.rows.iter().enumerate() {
            for (c, v) in row {
                m.rows[r].insert(self.ncols + c, v.clone());
            }
        }
        m
    }

    pub fn mul_vec(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.ncols);
        self.rows
            .iter()
            .map(|row| row.iter().map(|(c, v)| v * &x[*c]).sum())
            .collect()
    }

    pub fn smith_invariants(&self) -> SmithInvariants {
        let red = self.clone().reduce(None);
        let residual = red.residual_dense();
        let snf = DenseSnf::compute(residual);
        let mut torsion: Vec<BigInt> =
            snf.diagonal.iter().filter(|d| **d > BigInt::one()).cloned().collect();
        torsion.sort();
        SmithInvariants { rank: red.pivots.len() + snf.rank(), torsion }
    }

    pub fn rank(&self) -> usize {
        self.smith_invariants().rank
    }

    /// An integer solution of `A x = b`, or `None` when none exists.
    pub fn solve(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(b.len(), self.nrows);
        let red = self.clone().reduce(Some(b.to_vec()));
        let rhs = red.rhs.as_ref().unwrap();
        let mut x = vec![BigInt::zero(); self.ncols];

        // residual block: R x_r = b_r
        let residual = red.residual_dense();
        let b_r: Vec<BigInt> = red.active_rows.iter().map(|&r| rhs[r].clone()).collect();
        if red.active_rows.is_empty() || red.active_cols.is_empty() {
            if b_r.iter().any(|v| !v.is_zero()) {
                return None;
            }
        } else {
            let snf = DenseSnf::compute(residual);
            let pb = mat_vec(&snf.p, &b_r);
            let mut y = vec![BigInt::zero(); red.active_cols.len()];
            for (i, v) in pb.iter().enumerate() {
                let d = snf.diagonal.get(i).cloned().unwrap_or_default();
                if d.is_zero() {
                    if !v.is_zero() {
                        return None;
                    }
                } else {
                    let (q, rem) = v.div_rem(&d);
                    if !rem.is_zero() {
                        return None;
                    }
                    y[i] = q;
                }
            }
            let xr = mat_vec(&snf.q, &y);
            for (k, &c) in red.active_cols.iter().enumerate() {
                x[c] = xr[k].clone();
            }
        }

        // back substitution through the unit pivots, last pivot first
        for &(r, c) in red.pivots.iter().rev() {
            let row = &red.matrix.rows[r];
            let unit = &row[&c];
            let mut acc = rhs[r].clone();
            for (j, v) in row {
                if *j != c {
                    acc -= v * &x[*j];
                }
            }
            x[c] = acc * unit;
        }
        debug_assert_eq!(self.mul_vec(&x), b.to_vec());
        Some(x)
    }

    fn reduce(self, rhs: Option<Vec<BigInt>>) -> Reduction {
        let nrows = self.nrows;
        let ncols = self.ncols;
        let mut m = self;
        let mut rhs = rhs;
        let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); ncols];
        for (r, row) in m.rows.iter().enumerate() {
            for c in row.keys() {
                col_rows[*c].insert(r);
            }
        }
        let mut row_active = vec![true; nrows];
        let mut col_active = vec![true; ncols];
        let mut pivots = Vec::new();

        loop {
            // Markowitz-cheapest unit entry among active rows and columns.
            let mut best: Option<(usize, usize, usize)> = None;
            for r in 0..nrows {
                if !row_active[r] {
                    continue;
                }
                let rlen = m.rows[r].len();
                if rlen == 0 {
                    continue;
                }
                for (c, v) in &m.rows[r] {
                    if !col_active[*c] || !(v.is_one() || (-v).is_one()) {
                        continue;
                    }
                    let clen = col_rows[*c].iter().filter(|&&i| row_active[i]).count();
                    let cost = (rlen - 1) * (clen - 1);
                    if best.map_or(true, |b| cost < b.2) {
                        best = Some((r, *c, cost));
                    }
                    if cost == 0 {
                        break;
                    }
                }
                if matches!(best, Some((_, _, 0))) {
                    break;
                }
            }
            let Some((pr, pc, _)) = best else { break };
            let unit = m.rows[pr][&pc].clone();
            let pivot_row = m.rows[pr].clone();
            let targets: Vec<usize> = col_rows[pc]
                .iter()
                .copied()
                .filter(|&i| i != pr && row_active[i])
                .collect();
            for i in targets {
                let factor = &m.rows[i][&pc] * &unit;
                for (c, v) in &pivot_row {
                    let entry = m.rows[i].entry(*c).or_insert_with(BigInt::zero);
                    *entry -= &factor * v;
                    if entry.is_zero() {
                        m.rows[i].remove(c);
                        col_rows[*c].remove(&i);
                    } else {
                        col_rows[*c].insert(i);
                    }
                }
                if let Some(b) = rhs.as_mut() {
                    let delta = &factor * &b[pr];
                    b[i] -= delta;
                }
            }
            row_active[pr] = false;
            col_active[pc] = false;
            pivots.push((pr, pc));
        }

        Reduction {
            active_rows: (0..nrows).filter(|&r| row_active[r]).collect(),
            active_cols: (0..ncols).filter(|&c| col_active[c]).collect(),
            matrix: m,
            rhs,
            pivots,
        }
    }
}

struct Reduction {
    matrix: SparseIntMatrix,
    rhs: Option<Vec<BigInt>>,
    pivots: Vec<(usize, usize)>,
    active_rows: Vec<usize>,
    active_cols: Vec<usize>,
}

impl Reduction {
    fn residual_dense(&self) -> Vec<Vec<BigInt>> {
        let col_pos: BTreeMap<usize, usize> =
            self.active_cols.iter().enumerate().map(|(k, &c)| (c, k)).collect();
        self.active_rows
            .iter()
            .map(|&r| {
                let mut row = vec![BigInt::zero(); self.active_cols.len()];
                for (c, v) in &self.matrix.rows[r] {
                    if let Some(&k) = col_pos.get(c) {
                        row[k] = v.clone();
                    }
                }
                row
            })
            .collect()
    }
}

fn mat_vec(a: &[Vec<BigInt>], x: &[BigInt]) -> Vec<BigInt> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(p, q)| p * q).sum())
        .collect()
}

/// Dense Smith normal form `P A Q = D` with unimodular `P`, `Q`.
#[derive(Debug, Clone)]
pub struct DenseSnf {
    /// Diagonal of `D`, nonnegative; length `min(m, n)`, nonzero entries first.
    pub diagonal: Vec<BigInt>,
    pub p: Vec<Vec<BigInt>>,
    pub q: Vec<Vec<BigInt>>,
}

impl DenseSnf {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|d| !d.is_zero()).count()
    }

    pub fn compute(mut a: Vec<Vec<BigInt>>) -> DenseSnf {
        let m = a.len();
        let n = if m == 0 { 0 } else { a[0].len() };
        let mut p = identity(m);
        let mut q = identity(n);
        let k = m.min(n);
        let mut t = 0;
        while t < k {
            // smallest nonzero magnitude in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if !a[i][j].is_zero()
                        && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { break };
            a.swap(t, bi);
            p.swap(t, bi);
            swap_cols(&mut a, t, bj);
            swap_cols(&mut q, t, bj);

            loop {
                let mut changed = false;
                // clear column t
                for i in t + 1..m {
                    if a[i][t].is_zero() {
                        continue;
                    }
                    let f = a[i][t].div_floor(&a[t][t]);
                    row_axpy(&mut a, i, t, &f);
                    row_axpy(&mut p, i, t, &f);
                    if !a[i][t].is_zero() {
                        a.swap(t, i);
                        p.swap(t, i);
                        changed = true;
                    }
                }
                // clear row t
                for j in t + 1..n {
                    if a[t][j].is_zero() {
                        continue;
                    }
                    let f = a[t][j].div_floor(&a[t][t]);
                    col_axpy(&mut a, j, t, &f);
                    col_axpy(&mut q, j, t, &f);
                    if !a[t][j].is_zero() {
                        swap_cols(&mut a, t, j);
                        swap_cols(&mut q, t, j);
                        changed = true;
                    }
                }
                if changed {
                    continue;
                }
                // divisibility of the trailing block
                let mut fix = None;
                'outer: for i in t + 1..m {
                    for j in t + 1..n {
                        if !(&a[i][j] % &a[t][t]).is_zero() {
                            fix = Some(i);
                            break 'outer;
                        }
                    }
                }
                match fix {
                    Some(i) => {
                        let one = -BigInt::one();
                        row_axpy(&mut a, t, i, &one);
                        row_axpy(&mut p, t, i, &one);
                    }
                    None => break,
                }
            }
            if a[t][t].is_negative() {
                for v in a[t].iter_mut() {
                    *v = -&*v;
                }
                for v in p[t].iter_mut() {
                    *v = -&*v;
                }
            }
            t += 1;
        }
        let diagonal = (0..k).map(|i| a[i][i].clone()).collect();
        DenseSnf { diagonal, p, q }
    }
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

fn swap_cols(a: &mut [Vec<BigInt>], i: usize, j: usize) {
    if i != j {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
    }
}

/// row_i -= f * row_t
fn row_axpy(a: &mut [Vec<BigInt>], i: usize, t: usize, f: &BigInt) {
    let src = a[t].clone();
    for (x, s) in a[i].iter_mut().zip(&src) {
        *x -= f * s;
    }
}

/// col_j -= f * col_t
fn col_axpy(a: &mut [Vec<BigInt>], j: usize, t: usize, f: &BigInt) {
    for row in a.iter_mut() {
        let s = row[t].clone();
        row[j] -= f * s;
    }
}

/// Determinant of a small square integer matrix (fraction-free Bareiss).
pub fn determinant(a: &[Vec<i64>]) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m: Vec<Vec<BigInt>> =
        a.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(s) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, s);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Inverse of a square integer matrix when it is integral (i.e. unimodular).
pub fn integer_inverse(a: &[Vec<i64>]) -> Option<Vec<Vec<i64>>> {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Vec<BigRational> =
                r.iter().map(|&v| BigRational::from_integer(v.into())).collect();
            row.extend((0..n).map(|j| {
                BigRational::from_integer(if i == j { BigInt::one() } else { BigInt::zero() })
            }));
            row
        })
        .collect();
    for k in 0..n {
        let s = (k..n).find(|&i| !m[i][k].is_zero())?;
        m.swap(k, s);
        let piv = m[k][k].clone();
        for v in m[k].iter_mut() {
            *v /= &piv;
        }
        for i in 0..n {
            if i != k && !m[i][k].is_zero() {
                let f = m[i][k].clone();
                let src = m[k].clone();
                for (x, s) in m[i].iter_mut().zip(&src) {
                    *x -= &f * s;
                }
            }
        }
    }
    m.iter()
        .map(|row| {
            row[n..]
                .iter()
                .map(|v| {
                    if v.is_integer() {
                        i64::try_from(v.to_integer()).ok()
                    } else {
                        None
                    }
                })
                .collect()
        })
        .collect()
}

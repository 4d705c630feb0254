//! Exact linear algebra: reduced row echelon form, nullspaces, span membership,
//! and an incremental echelon basis for sparse rational vectors.

use crate::scalar::{Field, Q};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

/// Sparse matrix with sorted rows and no stored zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Vec<(usize, T)>>,
}

impl<T: Field> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Vec::new(); rows] }
    }

    pub fn from_dense(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Matrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged matrix");
            for (j, x) in r.iter().enumerate() {
                if !x.is_zero() {
                    m.data[i].push((j, x.clone()));
                }
            }
        }
        m
    }

    /// Builds from sparse rows; entries are sorted and zeros dropped.
    pub fn from_sparse_rows(cols: usize, rows: Vec<Vec<(usize, T)>>) -> Self {
        let data = rows
            .into_iter()
            .map(|mut r| {
                r.retain(|(_, x)| !x.is_zero());
                r.sort_by_key(|(j, _)| *j);
                for (j, _) in &r {
                    assert!(*j < cols, "column out of range");
                }
                r
            })
            .collect::<Vec<_>>();
        Matrix { rows: data.len(), cols, data }
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        match self.data[i].binary_search_by_key(&j, |(c, _)| *c) {
            Ok(k) => self.data[i][k].1.clone(),
            Err(_) => T::zero(),
        }
    }

    pub fn row(&self, i: usize) -> &[(usize, T)] {
        &self.data[i]
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let mut out = vec![vec![T::zero(); self.cols]; self.rows];
        for (i, r) in self.data.iter().enumerate() {
            for (j, x) in r {
                out[i][*j] = x.clone();
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols);
        self.data.iter().map(|r| r.iter().fold(T::zero(), |acc, (j, x)| acc + x.clone() * v[*j].clone())).collect()
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }
}

/// Result of [`rref`].
#[derive(Clone, Debug, PartialEq)]
pub struct Rref<T> {
    pub rank: usize,
    pub pivots: Vec<usize>,
    pub reduced: Matrix<T>,
}

fn axpy<T: Field>(a: &[(usize, T)], s: &T, b: &[(usize, T)]) -> Vec<(usize, T)> {
    // a - s*b, both sorted
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, -(s.clone() * b[j].1.clone())));
            j += 1;
        } else {
            let x = a[i].1.clone() - s.clone() * b[j].1.clone();
            if !x.is_zero() {
                out.push((a[i].0, x));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Reduced row echelon form. Pivot choice is the first nonzero column.
pub fn rref<T: Field>(m: &Matrix<T>) -> Rref<T> {
    let mut rows: Vec<Vec<(usize, T)>> = m.data.iter().filter(|r| !r.is_empty()).cloned().collect();
    let mut done: Vec<Vec<(usize, T)>> = Vec::new();
    // forward elimination, one pivot column at a time
    while !rows.is_empty() {
        let col = rows.iter().map(|r| r[0].0).min().unwrap();
        let k = rows.iter().position(|r| r[0].0 == col).unwrap();
        let mut p = rows.swap_remove(k);
        let inv = p[0].1.inv();
        for e in p.iter_mut() {
            e.1 = e.1.clone() * inv.clone();
        }
        let mut next = Vec::with_capacity(rows.len());
        for r in rows.into_iter() {
            let r = if r[0].0 == col {
                let s = r[0].1.clone();
                axpy(&r, &s, &p)
            } else {
                r
            };
            if !r.is_empty() {
                next.push(r);
            }
        }
        rows = next;
        done.push(p);
    }
    // back substitution
    for i in (0..done.len()).rev() {
        let (pc, piv) = (done[i][0].0, done[i].clone());
        for row in done[..i].iter_mut() {
            if let Ok(pos) = row.binary_search_by_key(&pc, |(c, _)| *c) {
                let s = row[pos].1.clone();
                *row = axpy(row, &s, &piv);
            }
        }
    }
    let pivots = done.iter().map(|r| r[0].0).collect::<Vec<_>>();
    let rank = done.len();
    let mut data = done;
    data.resize(m.rows.max(rank), Vec::new());
    data.truncate(m.rows.max(rank));
    Rref { rank, pivots, reduced: Matrix { rows: data.len(), cols: m.cols, data } }
}

/// Nullspace basis; each vector has its first nonzero entry equal to 1.
pub fn nullspace<T: Field>(m: &Matrix<T>) -> Vec<Vec<T>> {
    let r = rref(m);
    let mut is_pivot = vec![false; m.cols];
    for &p in &r.pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..m.cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![T::zero(); m.cols];
        v[free] = T::one();
        for (i, &pc) in r.pivots.iter().enumerate() {
            let x = r.reduced.get(i, free);
            if !x.is_zero() {
                v[pc] = -x;
            }
        }
        normalize_leading(&mut v);
        basis.push(v);
    }
    basis
}

/// Scales so that the first nonzero entry is 1. Returns false for the zero vector.
pub fn normalize_leading<T: Field>(v: &mut [T]) -> bool {
    if let Some(x) = v.iter().find(|x| !x.is_zero()).cloned() {
        let inv = x.inv();
        for e in v.iter_mut() {
            *e = e.clone() * inv.clone();
        }
        true
    } else {
        false
    }
}

/// Coordinates of `v` in the span of `span`, if it lies there.
/// When the spanning list is dependent, free coordinates are set to zero.
pub fn membership<T: Field>(span: &[Vec<T>], v: &[T]) -> Option<Vec<T>> {
    let n = v.len();
    let k = span.len();
    for s in span {
        assert_eq!(s.len(), n, "vectors of different lengths");
    }
    // columns are the spanning vectors, augmented by v
    let rows = (0..n)
        .map(|i| {
            let mut r: Vec<T> = span.iter().map(|s| s[i].clone()).collect();
            r.push(v[i].clone());
            r
        })
        .collect::<Vec<_>>();
    if n == 0 {
        return Some(vec![T::zero(); k]);
    }
    let r = rref(&Matrix::from_dense(&rows));
    if r.pivots.contains(&k) {
        return None;
    }
    let mut coords = vec![T::zero(); k];
    for (i, &pc) in r.pivots.iter().enumerate() {
        coords[pc] = r.reduced.get(i, k);
    }
    Some(coords)
}

/// Rank of a matrix.
pub fn rank<T: Field>(m: &Matrix<T>) -> usize {
    rref(m).rank
}

// ---------------------------------------------------------------------------
// Incremental echelon basis over Q with fraction-free integer rows.

/// Sparse rational vector keyed by column.
pub type SparseQ = BTreeMap<usize, Q>;

type IntRow = Vec<(usize, BigInt)>;

fn content(r: &IntRow) -> BigInt {
    let mut g = BigInt::zero();
    for (_, x) in r {
        g = g.gcd(x);
        if g.is_one() {
            break;
        }
    }
    g
}

fn to_int_row(v: &SparseQ) -> (IntRow, BigInt) {
    let mut l = BigInt::one();
    for x in v.values() {
        l = l.lcm(x.denom());
    }
    let row = v.iter().filter(|(_, x)| !x.is_zero()).map(|(c, x)| (*c, x.numer() * (&l / x.denom()))).collect();
    (row, l)
}

// a*u - b*w, sorted merge
fn comb(a: &BigInt, u: &IntRow, b: &BigInt, w: &IntRow) -> IntRow {
    let mut out = Vec::with_capacity(u.len() + w.len());
    let (mut i, mut j) = (0, 0);
    while i < u.len() || j < w.len() {
        if j == w.len() || (i < u.len() && u[i].0 < w[j].0) {
            out.push((u[i].0, a * &u[i].1));
            i += 1;
        } else if i == u.len() || w[j].0 < u[i].0 {
            out.push((w[j].0, -(b * &w[j].1)));
            j += 1;
        } else {
            let x = a * &u[i].1 - b * &w[j].1;
            if !x.is_zero() {
                out.push((u[i].0, x));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Echelon basis of a subspace of a sparse coordinate space. Rows are kept as
/// primitive integer vectors with a positive leading entry.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<IntRow>,
    pivot_row: BTreeMap<usize, usize>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivot_row.keys().copied()
    }

    pub fn is_pivot(&self, c: usize) -> bool {
        self.pivot_row.contains_key(&c)
    }

    /// Reduces an integer row; returns the reduced row and the factor `s` with
    /// `reduced = s * (input) + (element of the span)`.
    fn reduce_int(&self, mut v: IntRow) -> (IntRow, Q) {
        let mut scale = Q::one();
        let mut k = 0;
        while k < v.len() {
            let c = v[k].0;
            if let Some(&ri) = self.pivot_row.get(&c) {
                let row = &self.rows[ri];
                let p = &row[0].1;
                let x = v[k].1.clone();
                let g = p.gcd(&x);
                let a = p / &g;
                let b = &x / &g;
                v = comb(&a, &v, &b, row);
                scale *= Q::from_integer(a);
                // entries before position k are untouched; restart at k
                while k < v.len() && v[k].0 < c {
                    k += 1;
                }
            } else {
                k += 1;
            }
        }
        let g = content(&v);
        if !g.is_zero() && !g.is_one() {
            for e in v.iter_mut() {
                e.1 = &e.1 / &g;
            }
            scale /= Q::from_integer(g);
        }
        (v, scale)
    }

    /// Adds a vector; returns true if it enlarged the span.
    pub fn insert(&mut self, v: &SparseQ) -> bool {
        let (row, _) = to_int_row(v);
        self.insert_int(row)
    }

    fn insert_int(&mut self, row: IntRow) -> bool {
        let (mut r, _) = self.reduce_int(row);
        if r.is_empty() {
            return false;
        }
        if r[0].1.is_negative() {
            for e in r.iter_mut() {
                e.1 = -e.1.clone();
            }
        }
        self.pivot_row.insert(r[0].0, self.rows.len());
        self.rows.push(r);
        true
    }

    pub fn contains(&self, v: &SparseQ) -> bool {
        let (row, _) = to_int_row(v);
        self.reduce_int(row).0.is_empty()
    }

    /// Canonical representative of `v` modulo the span: the unique element of
    /// `v + span` vanishing on every pivot column.
    pub fn reduce(&self, v: &SparseQ) -> SparseQ {
        let (row, l) = to_int_row(v);
        let (r, s) = self.reduce_int(row);
        let f = Q::one() / (s * Q::from_integer(l));
        r.into_iter().map(|(c, x)| (c, Q::from_integer(x) * &f)).collect()
    }

    /// Basis rows as rational sparse vectors.
    pub fn basis(&self) -> Vec<SparseQ> {
        self.rows.iter().map(|r| r.iter().map(|(c, x)| (*c, Q::from_integer(x.clone()))).collect()).collect()
    }

    /// Rows whose pivot column satisfies `keep`. With columns ordered so that
    /// the excluded coordinates come first, these span the intersection of the
    /// row space with the coordinate subspace where `keep` holds.
    pub fn rows_with_pivot(&self, keep: impl Fn(usize) -> bool) -> Vec<SparseQ> {
        self.rows
            .iter()
            .filter(|r| keep(r[0].0))
            .map(|r| r.iter().map(|(c, x)| (*c, Q::from_integer(x.clone()))).collect())
            .collect()
    }
}

/// Builds an [`Echelon`] from vectors.
pub fn echelon_of<'a>(vs: impl IntoIterator<Item = &'a SparseQ>) -> Echelon {
    let mut e = Echelon::new();
    for v in vs {
        e.insert(v);
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi};

    fn m(rows: &[&[i64]]) -> Matrix<Q> {
        Matrix::from_dense(&rows.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect::<Vec<_>>())
    }

    #[test]
    fn identity_rank() {
        assert_eq!(rank(&m(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])), 3);
    }

    #[test]
    fn proportional_rows() {
        let r = rref(&m(&[&[1, 2], &[2, 4]]));
        assert_eq!(r.rank, 1);
        assert_eq!(r.pivots, vec![0]);
    }

    #[test]
    fn nullspaces() {
        assert_eq!(nullspace(&m(&[&[0, 0, 0], &[0, 0, 0]])).len(), 3);
        assert_eq!(nullspace(&m(&[&[1, -1]])), vec![vec![qi(1), qi(1)]]);
    }

    #[test]
    fn membership_cases() {
        assert_eq!(membership(&[vec![qi(1), qi(2)]], &[qi(1), qi(2)]), Some(vec![qi(1)]));
        assert_eq!(membership(&[vec![qi(0), qi(1)]], &[qi(1), qi(0)]), None);
        assert_eq!(membership(&[vec![qi(2), qi(4)]], &[qi(1), qi(2)]), Some(vec![q(1, 2)]));
    }

    #[test]
    fn echelon_reduce_is_canonical() {
        let mut e = Echelon::new();
        let v1: SparseQ = [(0, qi(1)), (1, qi(1))].into_iter().collect();
        let v2: SparseQ = [(1, q(1, 2)), (2, qi(3))].into_iter().collect();
        assert!(e.insert(&v1));
        assert!(e.insert(&v2));
        assert!(!e.insert(&[(0, qi(2)), (1, q(3, 2)), (2, qi(-3))].into_iter().collect()));
        let w: SparseQ = [(0, qi(5)), (2, qi(1))].into_iter().collect();
        let r = e.reduce(&w);
        assert!(r.keys().all(|c| !e.is_pivot(*c)));
        // w - r must lie in the span
        let mut diff = w.clone();
        for (c, x) in &r {
            *diff.entry(*c).or_insert_with(Q::zero) -= x;
        }
        diff.retain(|_, x| !x.is_zero());
        assert!(e.contains(&diff));
        // 5*v1 - 10*v2 = (5, 0, -30); w - that = (0, 0, 31)
        assert_eq!(r, [(2, qi(31))].into_iter().collect());
    }
}

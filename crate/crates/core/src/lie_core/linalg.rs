//! Exact sparse linear algebra over `BigRational`.
//!
//! Vectors are sorted `(index, value)` lists with no explicit zeros. A
//! [`Subspace`] keeps its spanning rows in reduced row-echelon form, so two
//! subspaces are equal exactly when their row lists are equal.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct SparseVec {
    entries: Vec<(usize, Q)>,
}

impl SparseVec {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn unit(i: usize) -> Self {
        Self { entries: vec![(i, Q::one())] }
    }

    /// Builds a vector from unsorted pairs; repeated indices are summed.
    pub fn from_pairs<I: IntoIterator<Item = (usize, Q)>>(pairs: I) -> Self {
        let mut v: Vec<(usize, Q)> = pairs.into_iter().collect();
        v.sort_by_key(|(i, _)| *i);
        let mut entries: Vec<(usize, Q)> = Vec::with_capacity(v.len());
        for (i, x) in v {
            match entries.last_mut() {
                Some((j, y)) if *j == i => *y += x,
                _ => entries.push((i, x)),
            }
        }
        entries.retain(|(_, x)| !x.is_zero());
        Self { entries }
    }

    pub fn from_dense(values: &[Q]) -> Self {
        Self { entries: values.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect() }
    }

    pub fn to_dense(&self, n: usize) -> Vec<Q> {
        let mut out = vec![Q::zero(); n];
        for (i, x) in &self.entries {
            out[*i] = x.clone();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Q)> {
        self.entries.iter().map(|(i, x)| (*i, x))
    }

    pub fn get(&self, i: usize) -> Option<&Q> {
        self.entries.binary_search_by_key(&i, |(j, _)| *j).ok().map(|k| &self.entries[k].1)
    }

    pub fn leading(&self) -> Option<(usize, &Q)> {
        self.entries.first().map(|(i, x)| (*i, x))
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|(i, _)| *i)
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { entries: self.entries.iter().map(|(i, x)| (*i, x * c)).collect() }
    }

    pub fn neg(&self) -> Self {
        Self { entries: self.entries.iter().map(|(i, x)| (*i, -x)).collect() }
    }

    /// `self + c * other`
    pub fn axpy(&self, c: &Q, other: &SparseVec) -> Self {
        if c.is_zero() || other.is_zero() {
            return self.clone();
        }
        let (a, b) = (&self.entries, &other.entries);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i].clone());
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push((b[j].0, c * &b[j].1));
                j += 1;
            } else {
                let s = &a[i].1 + c * &b[j].1;
                if !s.is_zero() {
                    out.push((a[i].0, s));
                }
                i += 1;
                j += 1;
            }
        }
        Self { entries: out }
    }

    pub fn add(&self, other: &SparseVec) -> Self {
        self.axpy(&Q::one(), other)
    }

    pub fn sub(&self, other: &SparseVec) -> Self {
        self.axpy(&-Q::one(), other)
    }

    pub fn dot(&self, other: &SparseVec) -> Q {
        let mut s = Q::zero();
        let (a, b) = (&self.entries, &other.entries);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    s += &a[i].1 * &b[j].1;
                    i += 1;
                    j += 1;
                }
            }
        }
        s
    }

    /// Keeps only the entries whose index satisfies `keep`.
    pub fn restrict(&self, keep: impl Fn(usize) -> bool) -> Self {
        Self { entries: self.entries.iter().filter(|(i, _)| keep(*i)).cloned().collect() }
    }
}

impl fmt::Display for SparseVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, (i, x)) in self.entries.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{i}:{x}")?;
        }
        write!(f, "]")
    }
}

/// A subspace of `Q^dim` in canonical reduced row-echelon form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    dim: usize,
    rows: Vec<SparseVec>,
}

impl Subspace {
    pub fn zero(dim: usize) -> Self {
        Self { dim, rows: Vec::new() }
    }

    pub fn full(dim: usize) -> Self {
        Self { dim, rows: (0..dim).map(SparseVec::unit).collect() }
    }

    pub fn span<'a, I: IntoIterator<Item = &'a SparseVec>>(dim: usize, vs: I) -> Self {
        let mut s = Self::zero(dim);
        for v in vs {
            s.insert(v.clone());
        }
        s
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.leading().unwrap().0).collect()
    }

    /// Residue of `v` modulo the subspace (zero iff `v` lies in it).
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut v = v.clone();
        for r in &self.rows {
            if v.is_zero() {
                break;
            }
            let p = r.leading().unwrap().0;
            if let Some(c) = v.get(p) {
                let c = -c.clone();
                v = v.axpy(&c, r);
            }
        }
        v
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v`; returns whether the rank grew.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        debug_assert!(v.max_index().is_none_or(|m| m < self.dim));
        let v = self.reduce(&v);
        let Some((p, lead)) = v.leading() else {
            return false;
        };
        let v = v.scale(&lead.recip());
        for r in self.rows.iter_mut() {
            if let Some(c) = r.get(p) {
                let c = -c.clone();
                *r = r.axpy(&c, &v);
            }
        }
        let at = self.rows.partition_point(|r| r.leading().unwrap().0 < p);
        self.rows.insert(at, v);
        true
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.rows.iter().all(|r| self.contains(r))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut s = self.clone();
        for r in &other.rows {
            s.insert(r.clone());
        }
        s
    }

    /// Kernel of the linear map whose matrix has the given rows
    /// (each row is a linear functional on `Q^ncols`).
    pub fn kernel_of_rows<'a, I: IntoIterator<Item = &'a SparseVec>>(ncols: usize, rows: I) -> Subspace {
        let rowspace = Subspace::span(ncols, rows);
        rowspace.annihilator()
    }

    /// `{x : r·x = 0 for every row r}`.
    pub fn annihilator(&self) -> Subspace {
        let pivots = self.pivots();
        let mut is_pivot = vec![false; self.dim];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut out = Subspace::zero(self.dim);
        for f in (0..self.dim).filter(|&f| !is_pivot[f]) {
            let mut pairs = vec![(f, Q::one())];
            for r in &self.rows {
                if let Some(c) = r.get(f) {
                    pairs.push((r.leading().unwrap().0, -c.clone()));
                }
            }
            out.insert(SparseVec::from_pairs(pairs));
        }
        out
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        // (A ∩ B) = ann(ann A + ann B)
        let a = self.annihilator();
        let b = other.annihilator();
        a.sum(&b).annihilator()
    }
}

/// Dense exact matrix (row-major).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Q>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Q::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect())
    }

    /// Matrix whose `j`-th column is `cols[j]`.
    pub fn from_columns(nrows: usize, cols: &[SparseVec]) -> Self {
        let mut m = Self::zeros(nrows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, x) in c.iter() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> SparseVec {
        SparseVec::from_pairs((0..self.rows).map(|i| (i, self[(i, j)].clone())))
    }

    pub fn sparse_rows(&self) -> Vec<SparseVec> {
        (0..self.rows).map(|i| SparseVec::from_dense(self.row(i))).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = QMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut s = Q::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        s += a * b;
                    }
                }
                s
            })
            .collect()
    }

    pub fn sub(&self, other: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn add(&self, other: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, c: &Q) -> QMatrix {
        QMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn transpose(&self) -> QMatrix {
        let mut t = QMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn rank(&self) -> usize {
        Subspace::span(self.cols, &self.sparse_rows()).rank()
    }

    pub fn kernel(&self) -> Subspace {
        Subspace::kernel_of_rows(self.cols, &self.sparse_rows())
    }

    pub fn column_space(&self) -> Subspace {
        let cols: Vec<SparseVec> = (0..self.cols).map(|j| self.column(j)).collect();
        Subspace::span(self.rows, &cols)
    }

    /// Exact inverse by Gauss–Jordan; `None` when singular.
    pub fn inverse(&self) -> Option<QMatrix> {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = QMatrix::identity(n);
        for c in 0..n {
            let p = (c..n).find(|&r| !a[(r, c)].is_zero())?;
            if p != c {
                a.swap_rows(p, c);
                inv.swap_rows(p, c);
            }
            let piv = a[(c, c)].recip();
            for j in 0..n {
                a[(c, j)] *= &piv;
                inv[(c, j)] *= &piv;
            }
            for r in 0..n {
                if r == c || a[(r, c)].is_zero() {
                    continue;
                }
                let f = a[(r, c)].clone();
                for j in 0..n {
                    if !a[(c, j)].is_zero() {
                        let t = &f * &a[(c, j)];
                        a[(r, j)] -= t;
                    }
                    if !inv[(c, j)].is_zero() {
                        let t = &f * &inv[(c, j)];
                        inv[(r, j)] -= t;
                    }
                }
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn max_abs_entry(&self) -> Q {
        self.data.iter().map(|x| x.abs()).max().unwrap_or_else(Q::zero)
    }
}

impl std::ops::Index<(usize, usize)> for QMatrix {
    type Output = Q;
    fn index(&self, (i, j): (usize, usize)) -> &Q {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Q {
        &mut self.data[i * self.cols + j]
    }
}

//! Exact linear algebra over a [`FieldSpec`].
//!
//! [`Matrix`] is dense and used for the small maps (catalecticants,
//! multiplication maps). [`Subspace`] stores a canonical reduced row echelon
//! basis as sparse rows, which keeps truncated ideals cheap: almost all of
//! their basis vectors are single monomials.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::field::{FieldElem, FieldSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("ambient dimensions differ ({0} vs {1})")]
    AmbientMismatch(usize, usize),
    #[error("shape mismatch: {0}")]
    Shape(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    n_rows: usize,
    n_cols: usize,
    field: FieldSpec,
    entries: Vec<FieldElem>,
}

impl Matrix {
    pub fn zeros(n_rows: usize, n_cols: usize, field: FieldSpec) -> Self {
        Matrix {
            n_rows,
            n_cols,
            field,
            entries: vec![field.zero(); n_rows * n_cols],
        }
    }

    pub fn identity(n: usize, field: FieldSpec) -> Self {
        let mut m = Self::zeros(n, n, field);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<FieldElem>>) -> Result<Self, LinalgError> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != n_cols) {
            return Err(LinalgError::Shape("ragged rows".into()));
        }
        Ok(Matrix {
            n_rows,
            n_cols,
            field,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64_rows(field: FieldSpec, rows: &[&[i64]]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| field.from_i64(x)).collect())
            .collect();
        Self::from_rows(field, rows).expect("rectangular literal")
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn get(&self, r: usize, c: usize) -> &FieldElem {
        &self.entries[r * self.n_cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: FieldElem) {
        self.entries[r * self.n_cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[FieldElem] {
        &self.entries[r * self.n_cols..(r + 1) * self.n_cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Matrix::zeros(self.n_cols, self.n_rows, self.field);
        for r in 0..self.n_rows {
            for c in 0..self.n_cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.n_cols != other.n_rows {
            return Err(LinalgError::Shape(format!(
                "{}x{} times {}x{}",
                self.n_rows, self.n_cols, other.n_rows, other.n_cols
            )));
        }
        let mut out = Matrix::zeros(self.n_rows, other.n_cols, self.field);
        for i in 0..self.n_rows {
            for k in 0..self.n_cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.n_cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + &(a * b);
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[FieldElem]) -> Result<Vec<FieldElem>, LinalgError> {
        if v.len() != self.n_cols {
            return Err(LinalgError::Shape(format!(
                "vector of length {} for {} columns",
                v.len(),
                self.n_cols
            )));
        }
        Ok((0..self.n_rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(self.field.zero(), |acc, (a, b)| &acc + &(a * b))
            })
            .collect())
    }

    /// Gauss–Jordan elimination. Pivot: first nonzero entry in column order.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.n_cols {
            if row == m.n_rows {
                break;
            }
            let Some(p) = (row..m.n_rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m.get(row, col).inv().expect("pivot is nonzero");
            for c in col..m.n_cols {
                let v = m.get(row, c) * &inv;
                m.set(row, c, v);
            }
            for r in 0..m.n_rows {
                if r == row {
                    continue;
                }
                let factor = m.get(r, col).clone();
                if factor.is_zero() {
                    continue;
                }
                for c in col..m.n_cols {
                    let pv = m.get(row, c);
                    if pv.is_zero() {
                        continue;
                    }
                    let v = m.get(r, c) - &(&factor * pv);
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.n_cols {
            self.entries.swap(a * self.n_cols + c, b * self.n_cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Canonical basis of `{v : self * v = 0}`.
    pub fn kernel_basis(&self) -> Subspace {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.n_cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut vectors = Vec::new();
        for free in (0..self.n_cols).filter(|&c| !is_pivot[c]) {
            let mut v = SparseVec::new();
            for (i, &p) in pivots.iter().enumerate() {
                let x = r.get(i, free);
                if !x.is_zero() {
                    v.push(p, -x);
                }
            }
            v.push(free, self.field.one());
            v.sort();
            vectors.push(v);
        }
        let space = Subspace::from_vectors(self.n_cols, self.field, vectors);
        assert_eq!(pivots.len() + space.dim(), self.n_cols, "rank-nullity violated");
        space
    }
}

/// A sparse vector: strictly increasing column indices, no zero entries.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SparseVec {
    entries: Vec<(usize, FieldElem)>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec { entries: Vec::new() }
    }

    pub fn unit(col: usize, field: FieldSpec) -> Self {
        SparseVec {
            entries: vec![(col, field.one())],
        }
    }

    pub fn from_dense(v: &[FieldElem]) -> Self {
        SparseVec {
            entries: v
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, x)| (i, x.clone()))
                .collect(),
        }
    }

    /// Build from arbitrary (col, value) pairs, summing duplicates.
    pub fn from_pairs<I: IntoIterator<Item = (usize, FieldElem)>>(pairs: I) -> Self {
        let mut acc: BTreeMap<usize, FieldElem> = BTreeMap::new();
        for (c, v) in pairs {
            match acc.get_mut(&c) {
                Some(old) => *old = &*old + &v,
                None => {
                    acc.insert(c, v);
                }
            }
        }
        SparseVec {
            entries: acc.into_iter().filter(|(_, v)| !v.is_zero()).collect(),
        }
    }

    fn push(&mut self, col: usize, v: FieldElem) {
        if !v.is_zero() {
            self.entries.push((col, v));
        }
    }

    fn sort(&mut self) {
        self.entries.sort_by_key(|(c, _)| *c);
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(usize, FieldElem)] {
        &self.entries
    }

    pub fn lead(&self) -> Option<usize> {
        self.entries.first().map(|(c, _)| *c)
    }

    pub fn get(&self, col: usize) -> Option<&FieldElem> {
        self.entries
            .binary_search_by_key(&col, |(c, _)| *c)
            .ok()
            .map(|i| &self.entries[i].1)
    }

    pub fn scale(&self, k: &FieldElem) -> SparseVec {
        if k.is_zero() {
            return SparseVec::new();
        }
        SparseVec {
            entries: self.entries.iter().map(|(c, v)| (*c, v * k)).collect(),
        }
    }

    /// `self - k * other`.
    pub fn sub_scaled(&self, k: &FieldElem, other: &SparseVec) -> SparseVec {
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut i, mut j) = (0, 0);
        while i < self.entries.len() || j < other.entries.len() {
            let ci = self.entries.get(i).map(|e| e.0);
            let cj = other.entries.get(j).map(|e| e.0);
            match (ci, cj) {
                (Some(a), Some(b)) if a == b => {
                    let v = &self.entries[i].1 - &(k * &other.entries[j].1);
                    if !v.is_zero() {
                        out.push((a, v));
                    }
                    i += 1;
                    j += 1;
                }
                (Some(a), Some(b)) if a < b => {
                    out.push(self.entries[i].clone());
                    i += 1;
                }
                (Some(a), None) => {
                    out.push((a, self.entries[i].1.clone()));
                    i += 1;
                }
                (_, Some(b)) => {
                    out.push((b, -&(k * &other.entries[j].1)));
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        SparseVec { entries: out }
    }

    /// Relabel columns through `f`; entries mapped to `None` are dropped.
    pub fn map_columns<F: Fn(usize) -> Option<usize>>(&self, f: F) -> SparseVec {
        SparseVec::from_pairs(self.entries.iter().filter_map(|(c, v)| f(*c).map(|nc| (nc, v.clone()))))
    }

    pub fn to_dense(&self, len: usize, field: FieldSpec) -> Vec<FieldElem> {
        let mut v = vec![field.zero(); len];
        for (c, x) in &self.entries {
            v[*c] = x.clone();
        }
        v
    }
}

/// Incremental echelon basis. Each stored row has a distinct leading column
/// with entry 1 and is zero before it. [`finish`](Self::finish) produces the
/// canonical reduced form.
#[derive(Debug, Clone)]
pub struct SubspaceBuilder {
    ambient_dim: usize,
    field: FieldSpec,
    rows: BTreeMap<usize, SparseVec>,
}

impl SubspaceBuilder {
    pub fn new(ambient_dim: usize, field: FieldSpec) -> Self {
        SubspaceBuilder {
            ambient_dim,
            field,
            rows: BTreeMap::new(),
        }
    }

    pub fn from_subspace(s: &Subspace) -> Self {
        SubspaceBuilder {
            ambient_dim: s.ambient_dim,
            field: s.field,
            rows: s.pivots.iter().copied().zip(s.basis.iter().cloned()).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Residue of `v` after eliminating leading entries against the basis.
    fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut v = v.clone();
        while let Some((col, coef)) = v.entries.first().cloned() {
            match self.rows.get(&col) {
                Some(row) => v = v.sub_scaled(&coef, row),
                None => break,
            }
        }
        // A free leading column means v is outside the span.
        v
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Add `v`; returns whether the dimension grew.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let r = self.reduce(v);
        match r.entries.first() {
            None => false,
            Some((col, lead)) => {
                let inv = lead.inv().expect("nonzero lead");
                let col = *col;
                self.rows.insert(col, r.scale(&inv));
                true
            }
        }
    }

    pub fn finish(self) -> Subspace {
        // Back-substitute in decreasing pivot order so each row is cleared at
        // every later pivot column.
        let pivots: Vec<usize> = self.rows.keys().copied().collect();
        let mut reduced: BTreeMap<usize, SparseVec> = BTreeMap::new();
        for &p in pivots.iter().rev() {
            let mut row = self.rows[&p].clone();
            let later: Vec<(usize, FieldElem)> = row
                .entries
                .iter()
                .skip(1)
                .filter(|(c, _)| reduced.contains_key(c))
                .cloned()
                .collect();
            for (c, coef) in later {
                row = row.sub_scaled(&coef, &reduced[&c]);
            }
            reduced.insert(p, row);
        }
        Subspace {
            ambient_dim: self.ambient_dim,
            field: self.field,
            pivots: reduced.keys().copied().collect(),
            basis: reduced.into_values().collect(),
        }
    }
}

/// A subspace given by its canonical reduced row echelon basis: rows are
/// nonzero with entry 1 at their pivot, pivots strictly increase, and pivot
/// columns are zero in every other row. Two subspaces are equal iff their
/// bases are equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient_dim: usize,
    field: FieldSpec,
    basis: Vec<SparseVec>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize, field: FieldSpec) -> Self {
        Subspace {
            ambient_dim,
            field,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn from_vectors<I: IntoIterator<Item = SparseVec>>(ambient_dim: usize, field: FieldSpec, vs: I) -> Self {
        let mut b = SubspaceBuilder::new(ambient_dim, field);
        for v in vs {
            debug_assert!(v.entries.last().is_none_or(|(c, _)| *c < ambient_dim));
            b.insert(&v);
        }
        b.finish()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[SparseVec] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// `v - sum_p v[p] * row_p`; zero iff `v` lies in the subspace.
    pub fn residue(&self, v: &SparseVec) -> SparseVec {
        let mut r = v.clone();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if let Some(c) = v.get(p) {
                r = r.sub_scaled(c, row);
            }
        }
        r
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.residue(v).is_zero()
    }

    pub fn contains_dense(&self, v: &[FieldElem]) -> Result<bool, LinalgError> {
        if v.len() != self.ambient_dim {
            return Err(LinalgError::AmbientMismatch(self.ambient_dim, v.len()));
        }
        Ok(self.contains(&SparseVec::from_dense(v)))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        if self.ambient_dim != other.ambient_dim {
            return Err(LinalgError::AmbientMismatch(self.ambient_dim, other.ambient_dim));
        }
        let mut b = SubspaceBuilder::from_subspace(self);
        for v in &other.basis {
            b.insert(v);
        }
        Ok(b.finish())
    }

    /// `dim(S ∩ T) = dim S + dim T - dim(S + T)`.
    pub fn intersection_dim(&self, other: &Subspace) -> Result<usize, LinalgError> {
        let s = self.sum(other)?;
        Ok(self.dim() + other.dim() - s.dim())
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool, LinalgError> {
        if self.ambient_dim != other.ambient_dim {
            return Err(LinalgError::AmbientMismatch(self.ambient_dim, other.ambient_dim));
        }
        Ok(self.basis.iter().all(|v| other.contains(v)))
    }

    pub fn to_matrix(&self) -> Matrix {
        let rows = self
            .basis
            .iter()
            .map(|v| v.to_dense(self.ambient_dim, self.field))
            .collect::<Vec<_>>();
        if rows.is_empty() {
            return Matrix::zeros(0, self.ambient_dim, self.field);
        }
        Matrix::from_rows(self.field, rows).expect("rows share the ambient dimension")
    }
}

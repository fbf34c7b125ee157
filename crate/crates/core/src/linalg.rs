//! Sparse exact linear algebra.
//!
//! Ranks are computed by sparse Gaussian elimination over any [`Field`]. For
//! rational matrices there is additionally a fraction-free elimination over
//! the integers, which is what certifies nonzero kernels exactly.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::json;

use crate::field::{common_denominator, Field};

/// Sorted by index, without stored zeros.
pub type SparseVec<E> = Vec<(usize, E)>;

#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix<E> {
    nrows: usize,
    ncols: usize,
    rows: Vec<SparseVec<E>>,
}

impl<E: Clone> SparseMatrix<E> {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SparseMatrix { nrows, ncols, rows: vec![Vec::new(); nrows] }
    }

    /// Rows must be sorted by column, zero-free and in range.
    pub fn from_rows(nrows: usize, ncols: usize, rows: Vec<SparseVec<E>>) -> Self {
        assert_eq!(rows.len(), nrows);
        debug_assert!(rows
            .iter()
            .all(|r| r.windows(2).all(|w| w[0].0 < w[1].0) && r.iter().all(|(j, _)| *j < ncols)));
        SparseMatrix { nrows, ncols, rows }
    }

    /// Builds a matrix from its columns (each sorted by row index).
    pub fn from_columns(nrows: usize, columns: Vec<SparseVec<E>>) -> Self {
        let ncols = columns.len();
        let mut rows = vec![Vec::new(); nrows];
        for (j, col) in columns.into_iter().enumerate() {
            for (i, e) in col {
                rows[i].push((j, e));
            }
        }
        SparseMatrix { nrows, ncols, rows }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[SparseVec<E>] {
        &self.rows
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&E> {
        let row = &self.rows[i];
        row.binary_search_by_key(&j, |(c, _)| *c).ok().map(|k| &row[k].1)
    }

    pub fn transpose(&self) -> Self {
        let mut rows = vec![Vec::new(); self.ncols];
        for (i, row) in self.rows.iter().enumerate() {
            for (j, e) in row {
                rows[*j].push((i, e.clone()));
            }
        }
        SparseMatrix { nrows: self.ncols, ncols: self.nrows, rows }
    }

    pub fn map<G: Clone>(&self, mut f: impl FnMut(&E) -> Option<G>) -> Option<SparseMatrix<G>> {
        let mut rows = Vec::with_capacity(self.nrows);
        for row in &self.rows {
            let mut out = Vec::with_capacity(row.len());
            for (j, e) in row {
                out.push((*j, f(e)?));
            }
            rows.push(out);
        }
        Some(SparseMatrix { nrows: self.nrows, ncols: self.ncols, rows })
    }
}

impl<E: Clone> SparseMatrix<E> {
    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    pub fn to_dense<F: Field<Elem = E>>(&self, field: &F) -> Vec<Vec<E>> {
        let mut dense = vec![vec![field.zero(); self.ncols]; self.nrows];
        for (i, row) in self.rows.iter().enumerate() {
            for (j, e) in row {
                dense[i][*j] = e.clone();
            }
        }
        dense
    }

    /// `{"field": ..., "rows": n, "cols": m, "entries": [[...], ...]}` with dense entries.
    pub fn to_json<F: Field<Elem = E>>(&self, field: &F) -> serde_json::Value {
        let entries: Vec<serde_json::Value> = self
            .to_dense(field)
            .iter()
            .map(|row| serde_json::Value::Array(row.iter().map(|e| field.elem_to_json(e)).collect()))
            .collect();
        json!({
            "field": field.describe(),
            "rows": self.nrows,
            "cols": self.ncols,
            "entries": entries,
        })
    }
}

/// `v - c * w`, dropping zeros.
fn sub_scaled<F: Field>(field: &F, v: &[(usize, F::Elem)], c: &F::Elem, w: &[(usize, F::Elem)]) -> SparseVec<F::Elem> {
    let mut out = Vec::with_capacity(v.len() + w.len());
    let (mut i, mut k) = (0, 0);
    while i < v.len() || k < w.len() {
        let take_v = k == w.len() || (i < v.len() && v[i].0 < w[k].0);
        let take_w = i == v.len() || (k < w.len() && w[k].0 < v[i].0);
        if take_v {
            out.push(v[i].clone());
            i += 1;
        } else if take_w {
            let e = field.neg(&field.mul(c, &w[k].1));
            out.push((w[k].0, e));
            k += 1;
        } else {
            let e = field.sub(&v[i].1, &field.mul(c, &w[k].1));
            if !field.is_zero(&e) {
                out.push((v[i].0, e));
            }
            i += 1;
            k += 1;
        }
    }
    out
}

/// Product `a * b`.
pub fn mul<F: Field>(field: &F, a: &SparseMatrix<F::Elem>, b: &SparseMatrix<F::Elem>) -> SparseMatrix<F::Elem> {
    assert_eq!(a.ncols, b.nrows, "dimension mismatch in matrix product");
    let mut rows = Vec::with_capacity(a.nrows);
    let mut acc: HashMap<usize, F::Elem> = HashMap::new();
    for arow in &a.rows {
        acc.clear();
        for (k, x) in arow {
            for (j, y) in &b.rows[*k] {
                let slot = acc.entry(*j).or_insert_with(|| field.zero());
                field.add_mul_assign(slot, x, y);
            }
        }
        let mut row: SparseVec<F::Elem> = acc.drain().filter(|(_, e)| !field.is_zero(e)).collect();
        row.sort_unstable_by_key(|(j, _)| *j);
        rows.push(row);
    }
    SparseMatrix { nrows: a.nrows, ncols: b.ncols, rows }
}

/// Returns the vectors (rows or columns, whichever are fewer) together with
/// the dimension of the space they live in.
fn elimination_vectors<E: Clone>(m: &SparseMatrix<E>) -> (Vec<SparseVec<E>>, usize) {
    let (mut vecs, dim) = if m.nrows <= m.ncols {
        (m.rows.clone(), m.ncols)
    } else {
        (m.transpose().rows, m.nrows)
    };
    vecs.retain(|v| !v.is_empty());
    vecs.sort_by_key(Vec::len);
    (vecs, dim)
}

/// Rank by sparse Gaussian elimination over `field`.
pub fn rank<F: Field>(field: &F, m: &SparseMatrix<F::Elem>) -> usize {
    let (vecs, dim) = elimination_vectors(m);
    let mut pivots: Vec<Option<SparseVec<F::Elem>>> = vec![None; dim];
    let mut rank = 0;
    for mut v in vecs {
        while let Some((lead, c)) = v.first().cloned() {
            match &pivots[lead] {
                Some(p) => v = sub_scaled(field, &v, &c, p),
                None => {
                    let inv = field.inv(&c);
                    for (_, e) in v.iter_mut() {
                        *e = field.mul(e, &inv);
                    }
                    pivots[lead] = Some(v);
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

pub fn kernel_dim<F: Field>(field: &F, m: &SparseMatrix<F::Elem>) -> usize {
    m.ncols - rank(field, m)
}

fn make_primitive(v: &mut SparseVec<BigInt>) {
    let mut g = BigInt::zero();
    for (_, e) in v.iter() {
        g = g.gcd(e);
        if g.is_one() {
            break;
        }
    }
    let flip = v.first().is_some_and(|(_, e)| e.is_negative());
    if !g.is_zero() && !g.is_one() {
        for (_, e) in v.iter_mut() {
            *e = &*e / &g;
        }
    }
    if flip {
        for (_, e) in v.iter_mut() {
            *e = -&*e;
        }
    }
}

/// `(b*v - a*w) / content`, where `a`, `b` are the leading entries of `v` and `w`.
fn cross_eliminate(v: &[(usize, BigInt)], w: &[(usize, BigInt)]) -> SparseVec<BigInt> {
    let g = v[0].1.gcd(&w[0].1);
    let a = &v[0].1 / &g;
    let b = &w[0].1 / &g;
    let mut out = Vec::with_capacity(v.len() + w.len());
    let (mut i, mut k) = (1, 1);
    while i < v.len() || k < w.len() {
        if k == w.len() || (i < v.len() && v[i].0 < w[k].0) {
            out.push((v[i].0, &b * &v[i].1));
            i += 1;
        } else if i == v.len() || w[k].0 < v[i].0 {
            out.push((w[k].0, -(&a * &w[k].1)));
            k += 1;
        } else {
            let e = &b * &v[i].1 - &a * &w[k].1;
            if !e.is_zero() {
                out.push((v[i].0, e));
            }
            i += 1;
            k += 1;
        }
    }
    make_primitive(&mut out);
    out
}

/// Exact rank of a rational matrix by fraction-free elimination.
///
/// Each vector is scaled to a primitive integer vector; eliminating the
/// leading entry combines two integer vectors with cofactors and divides out
/// the content again, so no rational arithmetic is ever performed.
pub fn rank_fraction_free(m: &SparseMatrix<BigRational>) -> usize {
    let (vecs, dim) = elimination_vectors(m);
    let mut pivots: Vec<Option<SparseVec<BigInt>>> = vec![None; dim];
    let mut rank = 0;
    for v in vecs {
        let den = common_denominator(v.iter().map(|(_, q)| q));
        let mut v: SparseVec<BigInt> = v
            .into_iter()
            .map(|(j, q)| (j, q.numer() * (&den / q.denom())))
            .collect();
        make_primitive(&mut v);
        while let Some(lead) = v.first().map(|(j, _)| *j) {
            match &pivots[lead] {
                Some(p) => v = cross_eliminate(&v, p),
                None => {
                    pivots[lead] = Some(v);
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

pub fn kernel_dim_fraction_free(m: &SparseMatrix<BigRational>) -> usize {
    m.ncols - rank_fraction_free(m)
}

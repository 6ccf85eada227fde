//! Exact sparse linear algebra over the rationals and prime fields.
//!
//! Everything here is deterministic: reduced row echelon form is unique,
//! kernel bases are read off free columns in ascending order, and spans are
//! kept in fully reduced form so that downstream bases are reproducible.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::Field;

/// Sparse vector: `(index, value)` pairs sorted by index, no zero values.
pub type SparseVec<E> = Vec<(usize, E)>;

/// Builds a sparse vector from arbitrary (possibly repeated, unsorted)
/// index/value pairs, merging duplicates and dropping zeros.
pub fn sv_collect<F: Field>(
    field: &F,
    pairs: impl IntoIterator<Item = (usize, F::Elem)>,
) -> SparseVec<F::Elem> {
    let mut acc: BTreeMap<usize, F::Elem> = BTreeMap::new();
    for (i, v) in pairs {
        match acc.remove(&i) {
            Some(old) => {
                let s = field.add(&old, &v);
                if !field.is_zero(&s) {
                    acc.insert(i, s);
                }
            }
            None => {
                if !field.is_zero(&v) {
                    acc.insert(i, v);
                }
            }
        }
    }
    acc.into_iter().collect()
}

pub fn sv_unit<F: Field>(field: &F, i: usize) -> SparseVec<F::Elem> {
    vec![(i, field.one())]
}

pub fn sv_get<E>(v: &[(usize, E)], i: usize) -> Option<&E> {
    v.binary_search_by_key(&i, |(j, _)| *j)
        .ok()
        .map(|k| &v[k].1)
}

pub fn sv_scale<F: Field>(field: &F, v: &[(usize, F::Elem)], c: &F::Elem) -> SparseVec<F::Elem> {
    if field.is_zero(c) {
        return Vec::new();
    }
    v.iter().map(|(i, x)| (*i, field.mul(x, c))).collect()
}

pub fn sv_neg<F: Field>(field: &F, v: &[(usize, F::Elem)]) -> SparseVec<F::Elem> {
    v.iter().map(|(i, x)| (*i, field.neg(x))).collect()
}

/// `a + c*b`, merging sorted sparse vectors.
pub fn sv_add_scaled<F: Field>(
    field: &F,
    a: &[(usize, F::Elem)],
    b: &[(usize, F::Elem)],
    c: &F::Elem,
) -> SparseVec<F::Elem> {
    if field.is_zero(c) {
        return a.to_vec();
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i >= a.len() || b[j].0 < a[i].0 {
            let val = field.mul(&b[j].1, c);
            if !field.is_zero(&val) {
                out.push((b[j].0, val));
            }
            j += 1;
        } else {
            let val = field.add(&a[i].1, &field.mul(&b[j].1, c));
            if !field.is_zero(&val) {
                out.push((a[i].0, val));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn sv_sub<F: Field>(
    field: &F,
    a: &[(usize, F::Elem)],
    b: &[(usize, F::Elem)],
) -> SparseVec<F::Elem> {
    let minus_one = field.neg(&field.one());
    sv_add_scaled(field, a, b, &minus_one)
}

pub fn sv_to_dense<F: Field>(field: &F, v: &[(usize, F::Elem)], len: usize) -> Vec<F::Elem> {
    let mut out = vec![field.zero(); len];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

/// Sparse matrix in row-major form.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat<F: Field> {
    field: F,
    n_rows: usize,
    n_cols: usize,
    rows: Vec<SparseVec<F::Elem>>,
}

impl<F: Field> Mat<F> {
    pub fn zero(field: F, n_rows: usize, n_cols: usize) -> Self {
        Mat {
            field,
            n_rows,
            n_cols,
            rows: vec![Vec::new(); n_rows],
        }
    }

    pub fn identity(field: F, n: usize) -> Self {
        let rows = (0..n).map(|i| vec![(i, field.one())]).collect();
        Mat {
            field,
            n_rows: n,
            n_cols: n,
            rows,
        }
    }

    /// Builds a matrix from per-row sparse vectors, validating bounds and
    /// the no-stored-zero invariant.
    pub fn from_rows(field: F, n_cols: usize, rows: Vec<SparseVec<F::Elem>>) -> Result<Self> {
        for (i, row) in rows.iter().enumerate() {
            let mut last: Option<usize> = None;
            for (j, v) in row {
                if *j >= n_cols {
                    return Err(Error::dim(format!("row {i}: column {j} out of range")));
                }
                if let Some(l) = last {
                    if *j <= l {
                        return Err(Error::dim(format!("row {i}: unsorted sparse row")));
                    }
                }
                if field.is_zero(v) {
                    return Err(Error::dim(format!("row {i}: stored zero at column {j}")));
                }
                last = Some(*j);
            }
        }
        Ok(Mat {
            field,
            n_rows: rows.len(),
            n_cols,
            rows,
        })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn row(&self, i: usize) -> &SparseVec<F::Elem> {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[SparseVec<F::Elem>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> F::Elem {
        sv_get(&self.rows[i], j)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn set(&mut self, i: usize, j: usize, v: F::Elem) {
        assert!(i < self.n_rows && j < self.n_cols, "index out of range");
        let row = &mut self.rows[i];
        match row.binary_search_by_key(&j, |(c, _)| *c) {
            Ok(k) => {
                if self.field.is_zero(&v) {
                    row.remove(k);
                } else {
                    row[k].1 = v;
                }
            }
            Err(k) => {
                if !self.field.is_zero(&v) {
                    row.insert(k, (j, v));
                }
            }
        }
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    /// Matrix-vector product `M * v` for a sparse column vector.
    pub fn apply(&self, v: &[(usize, F::Elem)]) -> SparseVec<F::Elem> {
        let f = &self.field;
        let mut out = Vec::new();
        for (i, row) in self.rows.iter().enumerate() {
            let mut acc = f.zero();
            let (mut a, mut b) = (0, 0);
            while a < row.len() && b < v.len() {
                match row[a].0.cmp(&v[b].0) {
                    std::cmp::Ordering::Less => a += 1,
                    std::cmp::Ordering::Greater => b += 1,
                    std::cmp::Ordering::Equal => {
                        acc = f.add(&acc, &f.mul(&row[a].1, &v[b].1));
                        a += 1;
                        b += 1;
                    }
                }
            }
            if !f.is_zero(&acc) {
                out.push((i, acc));
            }
        }
        out
    }

    /// `self * other`.
    pub fn matmul(&self, other: &Mat<F>) -> Result<Mat<F>> {
        if self.n_cols != other.n_rows {
            return Err(Error::dim(format!(
                "matmul {}x{} by {}x{}",
                self.n_rows, self.n_cols, other.n_rows, other.n_cols
            )));
        }
        let f = &self.field;
        let mut rows = Vec::with_capacity(self.n_rows);
        for row in &self.rows {
            let mut acc: SparseVec<F::Elem> = Vec::new();
            for (k, c) in row {
                acc = sv_add_scaled(f, &acc, &other.rows[*k], c);
            }
            rows.push(acc);
        }
        Ok(Mat {
            field: f.clone(),
            n_rows: self.n_rows,
            n_cols: other.n_cols,
            rows,
        })
    }

    pub fn transpose(&self) -> Mat<F> {
        let mut rows: Vec<SparseVec<F::Elem>> = vec![Vec::new(); self.n_cols];
        for (i, row) in self.rows.iter().enumerate() {
            for (j, v) in row {
                rows[*j].push((i, v.clone()));
            }
        }
        Mat {
            field: self.field.clone(),
            n_rows: self.n_cols,
            n_cols: self.n_rows,
            rows,
        }
    }

    pub fn scale(&self, c: &F::Elem) -> Mat<F> {
        Mat {
            field: self.field.clone(),
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            rows: self
                .rows
                .iter()
                .map(|r| sv_scale(&self.field, r, c))
                .collect(),
        }
    }

    pub fn add(&self, other: &Mat<F>) -> Result<Mat<F>> {
        if self.n_rows != other.n_rows || self.n_cols != other.n_cols {
            return Err(Error::dim("matrix addition shape mismatch"));
        }
        let one = self.field.one();
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| sv_add_scaled(&self.field, a, b, &one))
            .collect();
        Ok(Mat {
            field: self.field.clone(),
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            rows,
        })
    }

    pub fn sub(&self, other: &Mat<F>) -> Result<Mat<F>> {
        self.add(&other.scale(&self.field.neg(&self.field.one())))
    }

    /// Flattens row-major into a single sparse vector of length rows*cols.
    pub fn flatten(&self) -> SparseVec<F::Elem> {
        let mut out = Vec::with_capacity(self.nnz());
        for (i, row) in self.rows.iter().enumerate() {
            for (j, v) in row {
                out.push((i * self.n_cols + j, v.clone()));
            }
        }
        out
    }

    /// `[self | other]` side by side.
    pub fn hstack(&self, other: &Mat<F>) -> Result<Mat<F>> {
        if self.n_rows != other.n_rows {
            return Err(Error::dim("hstack row mismatch"));
        }
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| {
                let mut r = a.clone();
                r.extend(b.iter().map(|(j, v)| (j + self.n_cols, v.clone())));
                r
            })
            .collect();
        Ok(Mat {
            field: self.field.clone(),
            n_rows: self.n_rows,
            n_cols: self.n_cols + other.n_cols,
            rows,
        })
    }

    /// Reduced row echelon form, pivot columns, and rank.
    ///
    /// Forward elimination groups rows by leading column and, for each
    /// column, picks the pivot with the shortest entry (then fewest
    /// nonzeros). Any pivot rule yields the same unique RREF; the heuristic
    /// only curbs fraction growth over the rationals.
    pub fn rref(&self) -> Rref<F> {
        let f = &self.field;
        let mut buckets: BTreeMap<usize, Vec<SparseVec<F::Elem>>> = BTreeMap::new();
        for row in &self.rows {
            if let Some(&(lead, _)) = row.first() {
                buckets.entry(lead).or_default().push(row.clone());
            }
        }
        let mut pivot_rows: Vec<SparseVec<F::Elem>> = Vec::new();
        let mut pivots: Vec<usize> = Vec::new();
        while let Some((&col, _)) = buckets.iter().next() {
            let mut rows_here = buckets.remove(&col).unwrap();
            // shortest-entry pivot heuristic
            let mut best = 0;
            let mut best_key = (f.weight(&rows_here[0][0].1), rows_here[0].len());
            for (k, r) in rows_here.iter().enumerate().skip(1) {
                let key = (f.weight(&r[0].1), r.len());
                if key < best_key {
                    best_key = key;
                    best = k;
                }
            }
            let pivot = rows_here.swap_remove(best);
            for r in rows_here {
                let c = f.neg(&f.div(&r[0].1, &pivot[0].1).expect("pivot nonzero"));
                let reduced = sv_add_scaled(f, &r, &pivot, &c);
                debug_assert!(reduced.first().map(|&(l, _)| l > col).unwrap_or(true));
                if let Some(&(lead, _)) = reduced.first() {
                    buckets.entry(lead).or_default().push(reduced);
                }
            }
            pivots.push(col);
            pivot_rows.push(pivot);
        }
        // normalize pivots to 1 and eliminate above
        for k in 0..pivot_rows.len() {
            let inv = f.inv(&pivot_rows[k][0].1).expect("pivot nonzero");
            pivot_rows[k] = sv_scale(f, &pivot_rows[k], &inv);
        }
        for k in (0..pivot_rows.len()).rev() {
            for j in 0..k {
                if let Some(c) = sv_get(&pivot_rows[j], pivots[k]) {
                    let c = f.neg(&c.clone());
                    pivot_rows[j] = sv_add_scaled(f, &pivot_rows[j], &pivot_rows[k], &c);
                }
            }
        }
        let rank = pivots.len();
        let mut rows = pivot_rows;
        rows.resize(self.n_rows, Vec::new());
        Rref {
            mat: Mat {
                field: f.clone(),
                n_rows: self.n_rows,
                n_cols: self.n_cols,
                rows,
            },
            pivots,
            rank,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis of the right null space, one vector per free column, in
    /// ascending free-column order.
    pub fn kernel_basis(&self) -> Vec<SparseVec<F::Elem>> {
        self.kernel_basis_with_free().0
    }

    /// Kernel basis together with the free column each vector belongs to.
    /// Vector k has value 1 at `free[k]` and 0 at every other free column,
    /// so coordinates in this basis can be read off the free columns.
    pub fn kernel_basis_with_free(&self) -> (Vec<SparseVec<F::Elem>>, Vec<usize>) {
        let f = &self.field;
        let r = self.rref();
        let mut is_pivot = vec![false; self.n_cols];
        for &p in &r.pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::with_capacity(self.n_cols - r.rank);
        let mut free_cols = Vec::with_capacity(self.n_cols - r.rank);
        for free in 0..self.n_cols {
            if is_pivot[free] {
                continue;
            }
            let mut v: Vec<(usize, F::Elem)> = Vec::new();
            for (k, &p) in r.pivots.iter().enumerate() {
                if let Some(c) = sv_get(&r.mat.rows[k], free) {
                    v.push((p, f.neg(c)));
                }
            }
            v.push((free, f.one()));
            v.sort_by_key(|(i, _)| *i);
            basis.push(v);
            free_cols.push(free);
        }
        (basis, free_cols)
    }

    /// One solution of `self * x = b`, if the system is consistent
    /// (free variables are set to zero).
    pub fn solve(&self, b: &[(usize, F::Elem)]) -> Result<Option<SparseVec<F::Elem>>> {
        for (i, _) in b {
            if *i >= self.n_rows {
                return Err(Error::dim("rhs length mismatch"));
            }
        }
        let rhs = Mat {
            field: self.field.clone(),
            n_rows: self.n_rows,
            n_cols: 1,
            rows: {
                let dense = sv_to_dense(&self.field, b, self.n_rows);
                dense
                    .into_iter()
                    .map(|v| {
                        if self.field.is_zero(&v) {
                            Vec::new()
                        } else {
                            vec![(0usize, v)]
                        }
                    })
                    .collect()
            },
        };
        let aug = self.hstack(&rhs)?;
        let r = aug.rref();
        if r.pivots.last() == Some(&self.n_cols) {
            return Ok(None); // inconsistent
        }
        let mut x: SparseVec<F::Elem> = Vec::new();
        for (k, &p) in r.pivots.iter().enumerate() {
            if let Some(c) = sv_get(&r.mat.rows[k], self.n_cols) {
                x.push((p, c.clone()));
            }
        }
        Ok(Some(x))
    }
}

/// Result of [`Mat::rref`].
pub struct Rref<F: Field> {
    pub mat: Mat<F>,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

/// True iff `v` is a linear combination of `basis`.
pub fn in_span<F: Field>(
    field: &F,
    n_cols: usize,
    v: &[(usize, F::Elem)],
    basis: &[SparseVec<F::Elem>],
) -> bool {
    let mut span = RowSpan::new(field.clone(), n_cols);
    for b in basis {
        span.insert(b);
    }
    span.contains(v)
}

/// A subspace kept as a fully reduced row basis (i.e. in RREF, rows ordered
/// by pivot column). Supports incremental insertion and membership tests;
/// the basis it exposes is canonical for the subspace.
#[derive(Clone, Debug)]
pub struct RowSpan<F: Field> {
    field: F,
    n_cols: usize,
    rows: Vec<SparseVec<F::Elem>>,
    pivots: Vec<usize>,
}

impl<F: Field> RowSpan<F> {
    pub fn new(field: F, n_cols: usize) -> Self {
        RowSpan {
            field,
            n_cols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn basis(&self) -> &[SparseVec<F::Elem>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Fully reduces `v` against the span.
    pub fn reduce(&self, v: &[(usize, F::Elem)]) -> SparseVec<F::Elem> {
        let f = &self.field;
        let mut cur = v.to_vec();
        for (k, &p) in self.pivots.iter().enumerate() {
            if let Some(c) = sv_get(&cur, p) {
                let c = f.neg(&c.clone());
                cur = sv_add_scaled(f, &cur, &self.rows[k], &c);
            }
        }
        cur
    }

    pub fn contains(&self, v: &[(usize, F::Elem)]) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v` to the span. Returns true if the dimension grew.
    pub fn insert(&mut self, v: &[(usize, F::Elem)]) -> bool {
        let f = self.field.clone();
        let red = self.reduce(v);
        let Some(&(lead, _)) = red.first() else {
            return false;
        };
        debug_assert!(lead < self.n_cols, "vector index out of range");
        let inv = f.inv(&red[0].1).expect("lead nonzero");
        let red = sv_scale(&f, &red, &inv);
        // clear the new pivot column from existing rows
        for row in self.rows.iter_mut() {
            if let Some(c) = sv_get(row, lead) {
                let c = f.neg(&c.clone());
                *row = sv_add_scaled(&f, row, &red, &c);
            }
        }
        let pos = self.pivots.partition_point(|&p| p < lead);
        self.pivots.insert(pos, lead);
        self.rows.insert(pos, red);
        true
    }

    /// True iff the two spans are the same subspace.
    pub fn same_span(&self, other: &RowSpan<F>) -> bool {
        self.pivots == other.pivots && self.rows == other.rows
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use proptest::prelude::*;

    fn qmat(rows: &[&[i64]]) -> Mat<Rationals> {
        let f = Rationals;
        let n_cols = rows.iter().map(|r| r.len()).max().unwrap_or(0);
        let rs = rows
            .iter()
            .map(|r| sv_collect(&f, r.iter().enumerate().map(|(j, &v)| (j, f.from_i64(v)))))
            .collect();
        Mat::from_rows(f, n_cols, rs).unwrap()
    }

    #[test]
    fn rref_identity_is_fixed() {
        let m = Mat::identity(Rationals, 2);
        let r = m.rref();
        assert_eq!(r.mat, m);
        assert_eq!(r.pivots, vec![0, 1]);
        assert_eq!(r.rank, 2);
    }

    #[test]
    fn rref_zero_matrix() {
        let m = Mat::zero(Rationals, 3, 3);
        let r = m.rref();
        assert!(r.mat.is_zero());
        assert!(r.pivots.is_empty());
        assert_eq!(r.rank, 0);
    }

    #[test]
    fn rref_rank_one() {
        // hand row-reduction: r2 <- r2 - 2 r1 gives [[1,2],[0,0]]
        let m = qmat(&[&[1, 2], &[2, 4]]);
        let r = m.rref();
        assert_eq!(r.mat, qmat(&[&[1, 2], &[0, 0]]));
        assert_eq!(r.rank, 1);
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        let m = Mat::identity(Rationals, 4);
        assert!(m.kernel_basis().is_empty());
    }

    #[test]
    fn kernel_of_zero_is_standard_basis() {
        let f = Rationals;
        let m = Mat::zero(f, 3, 3);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 3);
        for (i, v) in k.iter().enumerate() {
            assert_eq!(v, &sv_unit(&f, i));
        }
    }

    #[test]
    fn kernel_of_row_sum() {
        // x + y = 0 has solution space spanned by (1,-1)
        let f = Rationals;
        let m = qmat(&[&[1, 1]]);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        let expected = vec![(0, f.from_i64(1)), (1, f.from_i64(-1))];
        assert!(in_span(&f, 2, &expected, &k));
        assert!(in_span(&f, 2, &k[0], &[expected]));
    }

    #[test]
    fn in_span_examples() {
        let f = Rationals;
        let e1 = sv_unit(&f, 0);
        let e2 = sv_unit(&f, 1);
        assert!(in_span(&f, 3, &[], &[e2.clone()]));
        assert!(!in_span(&f, 3, &e1, &[e2]));
        // (1,2,3) = 1*(1,0,1) + 2*(0,1,1)
        let v = sv_collect(
            &f,
            [(0, f.from_i64(1)), (1, f.from_i64(2)), (2, f.from_i64(3))],
        );
        let b1 = sv_collect(&f, [(0, f.from_i64(1)), (2, f.from_i64(1))]);
        let b2 = sv_collect(&f, [(1, f.from_i64(1)), (2, f.from_i64(1))]);
        assert!(in_span(&f, 3, &v, &[b1, b2]));
    }

    #[test]
    fn solve_finds_solution() {
        let f = Rationals;
        let m = qmat(&[&[1, 0, 1], &[0, 1, 1]]);
        let b = sv_collect(&f, [(0, f.from_i64(1)), (1, f.from_i64(2))]);
        let x = m.solve(&b).unwrap().unwrap();
        assert_eq!(m.apply(&x), b);
        let inconsistent = qmat(&[&[1, 1], &[1, 1]]);
        let b2 = sv_unit(&f, 0);
        assert!(inconsistent.solve(&b2).unwrap().is_none());
    }

    #[test]
    fn solve_over_prime_field() {
        let f = PrimeField::new(5).unwrap();
        let rows = vec![
            sv_collect(&f, [(0, 2u64), (1, 3u64)]),
            sv_collect(&f, [(0, 1u64), (1, 1u64)]),
        ];
        let m = Mat::from_rows(f, 2, rows).unwrap();
        let b = sv_collect(&f, [(0, 1u64), (1, 2u64)]);
        let x = m.solve(&b).unwrap().unwrap();
        assert_eq!(m.apply(&x), b);
    }

    #[test]
    fn row_span_insert_and_contains() {
        let f = Rationals;
        let mut span = RowSpan::new(f, 3);
        let v1 = sv_collect(&f, [(0, f.from_i64(1)), (1, f.from_i64(1))]);
        let v2 = sv_collect(&f, [(1, f.from_i64(1)), (2, f.from_i64(1))]);
        assert!(span.insert(&v1));
        assert!(!span.insert(&sv_scale(&f, &v1, &f.from_i64(7))));
        assert!(span.insert(&v2));
        assert_eq!(span.dim(), 2);
        let sum = sv_add_scaled(&f, &v1, &v2, &f.from_i64(-3));
        assert!(span.contains(&sum));
        assert!(!span.contains(&sv_unit(&f, 0)));
    }

    fn arb_qmat() -> impl Strategy<Value = Mat<Rationals>> {
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-4i64..5, r * c).prop_map(move |vals| {
                let f = Rationals;
                let rows = (0..r)
                    .map(|i| sv_collect(&f, (0..c).map(|j| (j, f.from_i64(vals[i * c + j])))))
                    .collect();
                Mat::from_rows(f, c, rows).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn rref_is_idempotent(m in arb_qmat()) {
            let r1 = m.rref();
            let r2 = r1.mat.rref();
            prop_assert_eq!(&r1.mat, &r2.mat);
            prop_assert_eq!(r1.pivots, r2.pivots);
        }

        #[test]
        fn rank_nullity(m in arb_qmat()) {
            prop_assert_eq!(m.rank() + m.kernel_basis().len(), m.n_cols());
        }

        #[test]
        fn kernel_vectors_are_killed(m in arb_qmat()) {
            for v in m.kernel_basis() {
                prop_assert!(m.apply(&v).is_empty());
            }
        }

        #[test]
        fn row_span_matches_rref_rows(m in arb_qmat()) {
            // the incremental span and the batch RREF must agree on the row space
            let mut span = RowSpan::new(Rationals, m.n_cols());
            for row in m.rows() {
                span.insert(row);
            }
            let r = m.rref();
            prop_assert_eq!(span.dim(), r.rank);
            let nonzero: Vec<_> = r.mat.rows()[..r.rank].to_vec();
            prop_assert_eq!(span.basis().to_vec(), nonzero);
        }

        #[test]
        fn rref_preserves_row_space(m in arb_qmat()) {
            let r = m.rref();
            let mut orig = RowSpan::new(Rationals, m.n_cols());
            for row in m.rows() {
                orig.insert(row);
            }
            for row in r.mat.rows() {
                prop_assert!(orig.contains(row));
            }
        }
    }
}

//! Dense exact linear algebra over a [`Field`].
//!
//! Pivoting always takes the first nonzero entry in column order, so every
//! basis produced here is reproducible across runs.

use crate::error::{Error, Result};
use crate::gf::{Field, FieldElement};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
    field: Field,
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![FieldElement::ZERO; rows * cols],
            field: field.clone(),
        }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, FieldElement::ONE);
        }
        m
    }

    pub fn from_rows(field: &Field, cols: usize, rows: &[Vec<FieldElement>]) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch(format!(
                "row of length {} in a matrix with {cols} columns",
                bad.len()
            )));
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data: rows.concat(),
            field: field.clone(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn get(&self, r: usize, c: usize) -> FieldElement {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: FieldElement) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[FieldElement] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<FieldElement>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let v = f.add(out.get(r, c), f.mul(a, other.get(k, c)));
                    out.set(r, c, v);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[FieldElement]) -> Result<Vec<FieldElement>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        let f = &self.field;
        Ok((0..self.rows)
            .map(|r| f.sum(self.row(r).iter().zip(v).map(|(&a, &b)| f.mul(a, b))))
            .collect())
    }

    /// Applies `g` to every entry.
    pub fn map(&self, g: impl Fn(FieldElement) -> FieldElement) -> Matrix {
        Matrix {
            data: self.data.iter().map(|&x| g(x)).collect(),
            ..self.clone()
        }
    }

    /// Reduced row echelon form and strictly increasing pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if pr != r {
                for k in 0..cols {
                    self.data.swap(pr * cols + k, r * cols + k);
                }
            }
            let inv = f.inv(self.get(r, c)).expect("pivot is nonzero");
            for k in c..cols {
                let v = f.mul(self.get(r, k), inv);
                self.set(r, k, v);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, c);
                if factor.is_zero() {
                    continue;
                }
                for k in c..cols {
                    let v = f.sub(self.get(i, k), f.mul(factor, self.get(r, k)));
                    self.set(i, k, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel `{v : M v = 0}`, one vector per free column
    /// in increasing column order.
    pub fn kernel_basis(&self) -> Vec<Vec<FieldElement>> {
        let f = &self.field;
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![FieldElement::ZERO; self.cols];
                v[free] = FieldElement::ONE;
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = f.neg(r.get(row, free));
                }
                v
            })
            .collect()
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(Error::NotInvertible);
        }
        let n = self.rows;
        let mut aug = Self::zeros(&self.field, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, n + r, FieldElement::ONE);
        }
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::NotInvertible);
        }
        let mut inv = Self::zeros(&self.field, n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, aug.get(r, n + c));
            }
        }
        Ok(inv)
    }
}

/// Decides whether `v` lies in the span of `basis`; when it does, returns
/// coefficients `c` with `sum c_k basis_k = v`. Free directions get zero.
pub fn in_span(
    field: &Field,
    v: &[FieldElement],
    basis: &[Vec<FieldElement>],
) -> Result<Option<Vec<FieldElement>>> {
    let dim = v.len();
    if let Some(b) = basis.iter().find(|b| b.len() != dim) {
        return Err(Error::DimensionMismatch(format!(
            "basis vector of length {} against vector of length {dim}",
            b.len()
        )));
    }
    let k = basis.len();
    let mut aug = Matrix::zeros(field, dim, k + 1);
    for (j, b) in basis.iter().enumerate() {
        for (i, &x) in b.iter().enumerate() {
            aug.set(i, j, x);
        }
    }
    for (i, &x) in v.iter().enumerate() {
        aug.set(i, k, x);
    }
    let (r, pivots) = aug.rref();
    if pivots.last() == Some(&k) {
        return Ok(None);
    }
    let mut coords = vec![FieldElement::ZERO; k];
    for (row, &p) in pivots.iter().enumerate() {
        coords[p] = r.get(row, k);
    }
    Ok(Some(coords))
}

/// `sum c_k basis_k`.
pub fn combine(field: &Field, coords: &[FieldElement], basis: &[Vec<FieldElement>]) -> Vec<FieldElement> {
    let dim = basis.first().map_or(0, Vec::len);
    let mut out = vec![FieldElement::ZERO; dim];
    for (&c, b) in coords.iter().zip(basis) {
        if c.is_zero() {
            continue;
        }
        for (o, &x) in out.iter_mut().zip(b) {
            *o = field.add(*o, field.mul(c, x));
        }
    }
    out
}

/// Incrementally grown semi-echelon basis: each stored row has its first
/// nonzero entry (normalized to 1) at a distinct pivot column, and is zero
/// before it. Rows are never modified after insertion.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Field,
    cols: usize,
    rows: Vec<Vec<FieldElement>>,
    pivots: Vec<usize>,
    /// `pivot_row[c]` is the stored row whose pivot is column `c`.
    pivot_row: Vec<Option<usize>>,
}

impl Echelon {
    pub fn new(field: &Field, cols: usize) -> Self {
        Echelon {
            field: field.clone(),
            cols,
            rows: Vec::new(),
            pivots: Vec::new(),
            pivot_row: vec![None; cols],
        }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Stored rows in insertion order.
    pub fn rows(&self) -> &[Vec<FieldElement>] {
        &self.rows
    }

    /// Pivot column of each stored row, in insertion order.
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` against the stored rows; the result is zero iff `v` is in the span.
    pub fn reduce(&self, v: &mut [FieldElement]) {
        let f = &self.field;
        for c in 0..self.cols {
            let x = v[c];
            if x.is_zero() {
                continue;
            }
            if let Some(r) = self.pivot_row[c] {
                let row = &self.rows[r];
                for k in c..self.cols {
                    if !row[k].is_zero() {
                        v[k] = f.sub(v[k], f.mul(x, row[k]));
                    }
                }
            }
        }
    }

    pub fn contains(&self, v: &[FieldElement]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|x| x.is_zero())
    }

    /// Inserts `v` if it is not already in the span; returns the index of
    /// the new row.
    pub fn insert(&mut self, mut v: Vec<FieldElement>) -> Option<usize> {
        debug_assert_eq!(v.len(), self.cols);
        self.reduce(&mut v);
        let pivot = v.iter().position(|x| !x.is_zero())?;
        let inv = self.field.inv(v[pivot]).expect("pivot is nonzero");
        for x in &mut v[pivot..] {
            *x = self.field.mul(*x, inv);
        }
        self.rows.push(v);
        self.pivots.push(pivot);
        self.pivot_row[pivot] = Some(self.rows.len() - 1);
        Some(self.rows.len() - 1)
    }

    /// The fully reduced basis, sorted by pivot column.
    pub fn to_rref(&self) -> Matrix {
        let f = &self.field;
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&r| self.pivots[r]);
        let mut rows: Vec<Vec<FieldElement>> = order.iter().map(|&r| self.rows[r].clone()).collect();
        let pivots: Vec<usize> = order.iter().map(|&r| self.pivots[r]).collect();
        for i in (0..rows.len()).rev() {
            let (head, tail) = rows.split_at_mut(i);
            let ri = &tail[0];
            let pi = pivots[i];
            for rj in head.iter_mut() {
                let x = rj[pi];
                if x.is_zero() {
                    continue;
                }
                for k in pi..self.cols {
                    if !ri[k].is_zero() {
                        rj[k] = f.sub(rj[k], f.mul(x, ri[k]));
                    }
                }
            }
        }
        Matrix::from_rows(f, self.cols, &rows).expect("uniform rows")
    }
}

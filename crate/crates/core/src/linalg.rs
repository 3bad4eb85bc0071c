//! Small dense exact linear algebra.
//!
//! Vectors are plain `Vec<F>`. Matrices are row-major. Module homomorphisms
//! act on row vectors, so `x ↦ x · M` and a composite "first `f`, then `g`"
//! is the product `F · G`.

use crate::error::{Error, Result};
use crate::field::Field;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Mat<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Mat<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>, cols: usize) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix");
            data.extend(r);
        }
        Mat { rows: n, cols, data }
    }

    /// Matrix from a flat row-major vector.
    pub fn from_flat(rows: usize, cols: usize, data: Vec<F>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Mat { rows, cols, data }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(
            rows.iter().map(|r| r.iter().map(|&v| F::from_i64(v)).collect()).collect(),
            cols,
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &F {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[F] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn flat(&self) -> &[F] {
        &self.data
    }

    pub fn into_flat(self) -> Vec<F> {
        self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(F::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = r * out.cols + c;
                    out.data[idx] = out.data[idx].add(&a.mul(b));
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn scale(&self, s: &F) -> Self {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a.mul(s)).collect() }
    }

    /// Row vector times matrix.
    pub fn apply_row(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![F::zero(); self.cols];
        for (k, a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (c, o) in out.iter_mut().enumerate() {
                let b = self.get(k, c);
                if !b.is_zero() {
                    *o = o.add(&a.mul(b));
                }
            }
        }
        out
    }

    /// Matrix times column vector.
    pub fn apply_col(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(F::zero(), |acc, (a, b)| acc.add(&a.mul(b)))
            })
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            (0..self.rows)
                .map(|r| serde_json::Value::Array(self.row(r).iter().map(F::to_json).collect()))
                .collect(),
        )
    }
}

/// Reduced row echelon form in place; returns the pivot columns.
fn rref<F: Field>(m: &mut Mat<F>) -> Vec<usize> {
    let (rows, cols) = (m.rows, m.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m.get(i, c).is_zero()) else {
            continue;
        };
        if p != r {
            for k in 0..cols {
                m.data.swap(p * cols + k, r * cols + k);
            }
        }
        let inv = m.get(r, c).inv().expect("pivot is nonzero");
        for k in c..cols {
            let v = m.get(r, k).mul(&inv);
            m.set(r, k, v);
        }
        for i in 0..rows {
            if i == r || m.get(i, c).is_zero() {
                continue;
            }
            let factor = m.get(i, c).clone();
            for k in c..cols {
                let pv = m.get(r, k);
                if pv.is_zero() {
                    continue;
                }
                let v = m.get(i, k).sub(&factor.mul(pv));
                m.set(i, k, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Row rank over the field of `F`.
pub fn rank<F: Field>(m: &Mat<F>) -> usize {
    let mut work = m.clone();
    rref(&mut work).len()
}

/// Basis of `{v : m · v = 0}`; its size is `cols − rank`.
pub fn nullspace_basis<F: Field>(m: &Mat<F>) -> Vec<Vec<F>> {
    let mut work = m.clone();
    let pivots = rref(&mut work);
    let cols = m.cols;
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![F::zero(); cols];
        v[free] = F::one();
        for (r, &p) in pivots.iter().enumerate() {
            let a = work.get(r, free);
            if !a.is_zero() {
                v[p] = a.neg();
            }
        }
        basis.push(v);
    }
    basis
}

/// Incrementally maintained echelon basis of a subspace.
///
/// Rows are kept with a unit pivot and zeros at every earlier pivot, so a
/// vector is reduced by a single pass in insertion order. Optionally tracks,
/// for every row, its expression in terms of the vectors that were inserted.
#[derive(Clone, Debug)]
pub struct Echelon<F> {
    dim: usize,
    rows: Vec<(usize, Vec<F>, Vec<F>)>,
    inserted: usize,
    track: bool,
}

impl<F: Field> Echelon<F> {
    pub fn new(dim: usize) -> Self {
        Echelon { dim, rows: Vec::new(), inserted: 0, track: false }
    }

    /// Like [`Echelon::new`] but records combinations for [`Echelon::express`].
    pub fn tracking(dim: usize) -> Self {
        Echelon { dim, rows: Vec::new(), inserted: 0, track: true }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    fn reduce_with(&self, v: &mut [F], coeffs: &mut [F]) {
        for (pivot, row, rc) in &self.rows {
            if v[*pivot].is_zero() {
                continue;
            }
            let factor = v[*pivot].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = x.sub(&factor.mul(r));
                }
            }
            if self.track {
                for (x, r) in coeffs.iter_mut().zip(rc) {
                    if !r.is_zero() {
                        *x = x.add(&factor.mul(r));
                    }
                }
            }
        }
    }

    /// Residue of `v` after reduction against the current rows.
    pub fn reduce(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.dim);
        let mut w = v.to_vec();
        self.reduce_with(&mut w, &mut []);
        w
    }

    pub fn contains(&self, v: &[F]) -> bool {
        self.reduce(v).iter().all(F::is_zero)
    }

    /// Inserts `v`; returns whether it was independent of the current rows.
    /// Dependent vectors still count as inserted for coefficient indexing.
    pub fn insert(&mut self, v: &[F]) -> bool {
        assert_eq!(v.len(), self.dim);
        let idx = self.inserted;
        self.inserted += 1;
        let mut w = v.to_vec();
        let mut coeffs = if self.track { vec![F::zero(); self.inserted] } else { Vec::new() };
        if self.track {
            for (_, _, rc) in self.rows.iter_mut() {
                rc.push(F::zero());
            }
        }
        self.reduce_with(&mut w, &mut coeffs);
        let Some(pivot) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        // w = v − Σ coeffs·orig, so the new row is (v − Σ coeffs·orig) / w[pivot].
        let inv = w[pivot].inv().expect("nonzero pivot");
        for x in w.iter_mut() {
            *x = x.mul(&inv);
        }
        if self.track {
            for x in coeffs.iter_mut() {
                *x = x.neg().mul(&inv);
            }
            coeffs[idx] = inv.clone();
        }
        // keep earlier rows free of the new pivot
        for (_, row, rc) in self.rows.iter_mut() {
            if row[pivot].is_zero() {
                continue;
            }
            let factor = row[pivot].clone();
            for (x, r) in row.iter_mut().zip(&w) {
                if !r.is_zero() {
                    *x = x.sub(&factor.mul(r));
                }
            }
            if self.track {
                for (x, r) in rc.iter_mut().zip(&coeffs) {
                    if !r.is_zero() {
                        *x = x.sub(&factor.mul(r));
                    }
                }
            }
        }
        self.rows.push((pivot, w, coeffs));
        true
    }

    /// Coefficients of `v` in terms of every inserted vector, if `v` is in the span.
    pub fn express(&self, v: &[F]) -> Option<Vec<F>> {
        assert!(self.track, "express needs a tracking echelon");
        let mut w = v.to_vec();
        let mut coeffs = vec![F::zero(); self.inserted];
        self.reduce_with(&mut w, &mut coeffs);
        w.iter().all(F::is_zero).then_some(coeffs)
    }
}

/// Coefficients expressing `target` in the span of `basis`, if it lies there.
///
/// The basis need not be independent; when it is not, some solution is returned.
pub fn in_span<F: Field>(basis: &[Vec<F>], target: &[F]) -> Option<Vec<F>> {
    let mut ech = Echelon::tracking(target.len());
    for b in basis {
        assert_eq!(b.len(), target.len(), "vector length mismatch");
        ech.insert(b);
    }
    ech.express(target)
}

/// Representatives, drawn from `ambient`, whose cosets form a basis of
/// `span(ambient) / span(sub)`.
pub fn quotient_basis<F: Field>(ambient: &[Vec<F>], sub: &[Vec<F>]) -> Result<Vec<Vec<F>>> {
    let Some(dim) = ambient.first().or(sub.first()).map(Vec::len) else {
        return Ok(Vec::new());
    };
    let mut amb = Echelon::new(dim);
    for a in ambient {
        amb.insert(a);
    }
    let mut ech = Echelon::new(dim);
    for s in sub {
        if !amb.contains(s) {
            return Err(Error::Precondition("quotient_basis: sub is not inside the ambient span".into()));
        }
        ech.insert(s);
    }
    Ok(ambient.iter().filter(|a| ech.insert(a)).cloned().collect())
}

/// Sparse vector: `(index, value)` pairs, sorted by index, no explicit zeros.
pub type SparseVec<F> = Vec<(usize, F)>;

fn sparse_axpy<F: Field>(v: &SparseVec<F>, factor: &F, row: &SparseVec<F>) -> SparseVec<F> {
    // v − factor·row
    let mut out = Vec::with_capacity(v.len() + row.len());
    let (mut i, mut j) = (0, 0);
    while i < v.len() || j < row.len() {
        let take_v = j == row.len() || (i < v.len() && v[i].0 < row[j].0);
        let take_r = i == v.len() || (j < row.len() && row[j].0 < v[i].0);
        if take_v {
            out.push(v[i].clone());
            i += 1;
        } else if take_r {
            out.push((row[j].0, factor.mul(&row[j].1).neg()));
            j += 1;
        } else {
            let x = v[i].1.sub(&factor.mul(&row[j].1));
            if !x.is_zero() {
                out.push((v[i].0, x));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Echelon form over sparse rows, for the large and very sparse systems
/// that homomorphism spaces produce.
#[derive(Clone, Debug)]
pub struct SparseEchelon<F> {
    dim: usize,
    pivots: Vec<Option<SparseVec<F>>>,
    rank: usize,
}

impl<F: Field> SparseEchelon<F> {
    pub fn new(dim: usize) -> Self {
        SparseEchelon { dim, pivots: vec![None; dim], rank: 0 }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn reduce(&self, v: &SparseVec<F>) -> SparseVec<F> {
        let mut w = v.clone();
        let mut start = 0;
        loop {
            let Some(pos) = w.iter().position(|(c, _)| *c >= start && self.pivots[*c].is_some()) else {
                return w;
            };
            let (c, factor) = w[pos].clone();
            w = sparse_axpy(&w, &factor, self.pivots[c].as_ref().unwrap());
            start = c + 1;
        }
    }

    /// Inserts a row; returns whether it was independent.
    pub fn insert(&mut self, v: &SparseVec<F>) -> bool {
        debug_assert!(v.iter().all(|(c, _)| *c < self.dim));
        let w = self.reduce(v);
        let Some((pivot, lead)) = w.first().cloned() else {
            return false;
        };
        let inv = lead.inv().expect("nonzero pivot");
        let w: SparseVec<F> = w.into_iter().map(|(c, x)| (c, x.mul(&inv))).collect();
        self.pivots[pivot] = Some(w);
        self.rank += 1;
        true
    }

    /// Basis of the solutions `x` with `row · x = 0` for every inserted row.
    pub fn nullspace(&self) -> Vec<Vec<F>> {
        // back-substitute pivot rows into reduced form, highest pivot first
        let mut reduced: Vec<Option<SparseVec<F>>> = vec![None; self.dim];
        for p in (0..self.dim).rev() {
            let Some(row) = &self.pivots[p] else { continue };
            let mut r = row.clone();
            let mut k = 1;
            while k < r.len() {
                let c = r[k].0;
                if let Some(red) = &reduced[c] {
                    let factor = r[k].1.clone();
                    r = sparse_axpy(&r, &factor, red);
                } else {
                    k += 1;
                }
            }
            reduced[p] = Some(r);
        }
        let mut basis = Vec::new();
        for free in (0..self.dim).filter(|&c| self.pivots[c].is_none()) {
            let mut v = vec![F::zero(); self.dim];
            v[free] = F::one();
            for (p, row) in reduced.iter().enumerate() {
                if let Some(row) = row {
                    if let Some((_, x)) = row.iter().find(|(c, _)| *c == free) {
                        v[p] = x.neg();
                    }
                }
            }
            basis.push(v);
        }
        basis
    }
}

/// Sparse form of a dense vector.
pub fn to_sparse<F: Field>(v: &[F]) -> SparseVec<F> {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

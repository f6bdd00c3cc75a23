//! Dense and sparse complex matrices plus the few decompositions the
//! verification code needs.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Index, IndexMut, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
#[allow(unused_imports)] // float methods for no_std builds
use num_traits::Float;
use num_traits::Zero;
use rand::Rng;

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Dense row-major complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        assert_eq!(data.len(), rows * cols, "data length does not match shape");
        Self { rows, cols, data }
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Self {
        Self::from_rows(rows, cols, data.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn diag(d: &[C64]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, &x) in d.iter().enumerate() {
            m[(i, i)] = x;
        }
        m
    }

    pub fn random<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> Self {
        Self::from_fn(rows, cols, |_, _| C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
    }

    pub fn random_hermitian<R: Rng>(n: usize, rng: &mut R) -> Self {
        let a = Self::random(n, n, rng);
        let h = &a + &a.adjoint();
        h.scale(C64::new(0.5, 0.0))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| z * s).collect() }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frob_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Hilbert-Schmidt inner product `tr(self† other)`.
    pub fn hs_inner(&self, other: &Self) -> C64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.iter().zip(&other.data).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn matvec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn kron(&self, other: &Self) -> Self {
        let (r2, c2) = (other.rows, other.cols);
        Self::from_fn(self.rows * r2, self.cols * c2, |i, j| self[(i / r2, j / c2)] * other[(i % r2, j % c2)])
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])])
    }

    pub fn hstack(blocks: &[&CMat]) -> Self {
        let rows = blocks.first().map_or(0, |b| b.rows);
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(rows, cols);
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.rows, rows);
            for i in 0..rows {
                for j in 0..b.cols {
                    m[(i, off + j)] = b[(i, j)];
                }
            }
            off += b.cols;
        }
        m
    }

    pub fn vstack(blocks: &[&CMat]) -> Self {
        let cols = blocks.first().map_or(0, |b| b.cols);
        let mut data = Vec::new();
        let mut rows = 0;
        for b in blocks {
            assert_eq!(b.cols, cols);
            data.extend_from_slice(&b.data);
            rows += b.rows;
        }
        Self { rows, cols, data }
    }

    /// Stack the entries into a single column vector (row-major order).
    pub fn vectorize(&self) -> Vec<C64> {
        self.data.clone()
    }

    pub fn to_na(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    pub fn from_na(m: &DMatrix<C64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }

    /// Distance to being a self-adjoint idempotent.
    pub fn projector_residual(&self) -> f64 {
        let sa = (self - &self.adjoint()).max_abs();
        let idem = (&(self * self) - self).max_abs();
        sa.max(idem)
    }

    /// Distance to being unitary.
    pub fn unitarity_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        (&(&self.adjoint() * self) - &Self::identity(self.rows)).max_abs()
    }
}

impl Index<(usize, usize)> for CMat {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &CMat {
    type Output = CMat;
    fn mul(self, rhs: &CMat) -> CMat {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in product");
        let mut out = CMat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let orow = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for (k, &a) in self.row(i).iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (o, b) in orow.iter_mut().zip(rhs.row(k)) {
                    *o += a * b;
                }
            }
        }
        out
    }
}

impl Add for &CMat {
    type Output = CMat;
    fn add(self, rhs: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMat { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &CMat {
    type Output = CMat;
    fn sub(self, rhs: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMat { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

/// Eigen-decomposition of a Hermitian matrix; eigenvalues ascending, eigenvectors as columns.
pub fn eigh(m: &CMat) -> (Vec<f64>, CMat) {
    assert!(m.is_square());
    let n = m.rows();
    if n == 0 {
        return (Vec::new(), CMat::zeros(0, 0));
    }
    let herm = &(m + &m.adjoint()).scale_re(0.5);
    let eig = nalgebra::SymmetricEigen::new(herm.to_na());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap_or(core::cmp::Ordering::Equal));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = CMat::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    (vals, vecs)
}

/// Singular values (descending) together with the full right singular basis as columns.
fn svd_right(m: &CMat) -> (Vec<f64>, CMat) {
    let (r, c) = (m.rows(), m.cols());
    // pad to at least as many rows as columns so that the right basis is complete
    let padded = if r < c { CMat::vstack(&[m, &CMat::zeros(c - r, c)]) } else { m.clone() };
    let svd = nalgebra::SVD::new(padded.to_na(), false, true);
    let vt = svd.v_t.expect("right singular vectors requested");
    let mut order: Vec<usize> = (0..c).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].partial_cmp(&svd.singular_values[a]).unwrap_or(core::cmp::Ordering::Equal));
    let vals = order.iter().map(|&i| svd.singular_values[i]).collect();
    let v = CMat::from_fn(c, c, |i, j| vt[(order[j], i)].conj());
    (vals, v)
}

/// Orthonormal basis (columns) of the kernel of `m`, singular values below `tol` counted as zero.
pub fn null_space(m: &CMat, tol: f64) -> CMat {
    let c = m.cols();
    if c == 0 {
        return CMat::zeros(0, 0);
    }
    if m.rows() == 0 {
        return CMat::identity(c);
    }
    let (s, v) = svd_right(m);
    let keep: Vec<usize> = (0..c).filter(|&j| s[j] <= tol).collect();
    CMat::from_fn(c, keep.len(), |i, j| v[(i, keep[j])])
}

/// Orthonormal basis (columns) of the column span of `m`.
pub fn column_span(m: &CMat, tol: f64) -> CMat {
    let a = m.adjoint();
    let (s, v) = svd_right(&a);
    let keep: Vec<usize> = (0..a.cols()).filter(|&j| s[j] > tol).collect();
    CMat::from_fn(a.cols(), keep.len(), |i, j| v[(i, keep[j])])
}

pub fn rank(m: &CMat, tol: f64) -> usize {
    if m.rows() == 0 || m.cols() == 0 {
        return 0;
    }
    let (s, _) = if m.rows() >= m.cols() { svd_right(m) } else { svd_right(&m.adjoint()) };
    s.iter().filter(|&&x| x > tol).count()
}

/// Largest principal-angle residual between the column spans of two matrices with orthonormal columns.
pub fn subspace_distance(a: &CMat, b: &CMat) -> f64 {
    if a.cols() != b.cols() {
        return f64::INFINITY;
    }
    let pa = a * &a.adjoint();
    let pb = b * &b.adjoint();
    (&pa - &pb).max_abs()
}

/// Sparse complex matrix in compressed row form; column indices inside each
/// row are sorted and unique.
#[derive(Clone, Debug, PartialEq)]
pub struct SpMat {
    rows: usize,
    cols: usize,
    ptr: Vec<usize>,
    idx: Vec<usize>,
    val: Vec<C64>,
}

/// Row-by-row builder for compressed storage.
struct CsrBuilder {
    cols: usize,
    ptr: Vec<usize>,
    idx: Vec<usize>,
    val: Vec<C64>,
}

impl CsrBuilder {
    fn new(rows: usize, cols: usize, cap: usize) -> Self {
        let mut ptr = Vec::with_capacity(rows + 1);
        ptr.push(0);
        Self { cols, ptr, idx: Vec::with_capacity(cap), val: Vec::with_capacity(cap) }
    }

    fn push(&mut self, j: usize, v: C64) {
        self.idx.push(j);
        self.val.push(v);
    }

    fn end_row(&mut self) {
        self.ptr.push(self.idx.len());
    }

    fn finish(self) -> SpMat {
        SpMat { rows: self.ptr.len() - 1, cols: self.cols, ptr: self.ptr, idx: self.idx, val: self.val }
    }
}

impl SpMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, ptr: vec![0; rows + 1], idx: Vec::new(), val: Vec::new() }
    }

    pub fn identity(n: usize) -> Self {
        Self::diag(&vec![ONE; n])
    }

    pub fn diag(d: &[C64]) -> Self {
        let mut b = CsrBuilder::new(d.len(), d.len(), d.len());
        for (i, &x) in d.iter().enumerate() {
            if !x.is_zero() {
                b.push(i, x);
            }
            b.end_row();
        }
        b.finish()
    }

    /// Duplicate entries are summed; exact zeros are dropped.
    pub fn from_triplets(rows: usize, cols: usize, trips: impl IntoIterator<Item = (usize, usize, C64)>) -> Self {
        let mut all: Vec<(usize, usize, C64)> = trips.into_iter().collect();
        for &(i, j, _) in &all {
            assert!(i < rows && j < cols, "triplet out of range");
        }
        all.sort_unstable_by_key(|t| (t.0, t.1));
        let mut b = CsrBuilder::new(rows, cols, all.len());
        let mut k = 0;
        for i in 0..rows {
            while k < all.len() && all[k].0 == i {
                let j = all[k].1;
                let mut v = ZERO;
                while k < all.len() && all[k].0 == i && all[k].1 == j {
                    v += all[k].2;
                    k += 1;
                }
                if !v.is_zero() {
                    b.push(j, v);
                }
            }
            b.end_row();
        }
        b.finish()
    }

    pub fn from_dense(m: &CMat, tol: f64) -> Self {
        let mut b = CsrBuilder::new(m.rows(), m.cols(), 0);
        for i in 0..m.rows() {
            for (j, &z) in m.row(i).iter().enumerate() {
                if z.norm() > tol {
                    b.push(j, z);
                }
            }
            b.end_row();
        }
        b.finish()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, C64)> + '_ {
        let r = self.ptr[i]..self.ptr[i + 1];
        self.idx[r.clone()].iter().copied().zip(self.val[r].iter().copied())
    }

    pub fn nnz(&self) -> usize {
        self.idx.len()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        let r = self.ptr[i]..self.ptr[i + 1];
        self.idx[r.clone()].binary_search(&j).map_or(ZERO, |k| self.val[r.start + k])
    }

    /// All stored entries `(row, col, value)` in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        (0..self.rows).flat_map(move |i| self.row(i).map(move |(j, v)| (i, j, v)))
    }

    pub fn to_dense(&self) -> CMat {
        let mut m = CMat::zeros(self.rows, self.cols);
        for (i, j, v) in self.triplets() {
            m[(i, j)] = v;
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        let mut count = vec![0usize; self.cols + 1];
        for &j in &self.idx {
            count[j + 1] += 1;
        }
        for j in 0..self.cols {
            count[j + 1] += count[j];
        }
        let ptr = count.clone();
        let mut idx = vec![0; self.nnz()];
        let mut val = vec![ZERO; self.nnz()];
        for (i, j, v) in self.triplets() {
            let k = count[j];
            idx[k] = i;
            val[k] = v.conj();
            count[j] += 1;
        }
        Self { rows: self.cols, cols: self.rows, ptr, idx, val }
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = self.clone();
        for v in &mut out.val {
            *v *= s;
        }
        out
    }

    pub fn matvec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| self.row(i).map(|(j, a)| a * v[j]).sum()).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.val.iter().map(|e| e.norm()).fold(0.0, f64::max)
    }

    pub fn frob_norm(&self) -> f64 {
        self.val.iter().map(|e| e.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    /// Drop entries with modulus at most `tol`.
    pub fn pruned(&self, tol: f64) -> Self {
        let mut b = CsrBuilder::new(self.rows, self.cols, self.nnz());
        for i in 0..self.rows {
            for (j, v) in self.row(i) {
                if v.norm() > tol {
                    b.push(j, v);
                }
            }
            b.end_row();
        }
        b.finish()
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn projector_residual(&self) -> f64 {
        let sa = (self - &self.adjoint()).max_abs();
        let idem = (&(self * self) - self).max_abs();
        sa.max(idem)
    }

    /// Restrict to a set of row and column indices.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> CMat {
        let mut pos = vec![usize::MAX; self.cols];
        for (k, &j) in cols.iter().enumerate() {
            pos[j] = k;
        }
        let mut m = CMat::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (j, v) in self.row(i) {
                if pos[j] != usize::MAX {
                    m[(a, pos[j])] = v;
                }
            }
        }
        m
    }

    pub fn kron(&self, other: &Self) -> Self {
        let mut b = CsrBuilder::new(self.rows * other.rows, self.cols * other.cols, self.nnz() * other.nnz());
        for i1 in 0..self.rows {
            for i2 in 0..other.rows {
                for (j1, v1) in self.row(i1) {
                    for (j2, v2) in other.row(i2) {
                        b.push(j1 * other.cols + j2, v1 * v2);
                    }
                }
                b.end_row();
            }
        }
        b.finish()
    }
}

impl Mul for &SpMat {
    type Output = SpMat;
    fn mul(self, rhs: &SpMat) -> SpMat {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in sparse product");
        let mut acc = vec![ZERO; rhs.cols];
        let mut touched: Vec<usize> = Vec::new();
        let mut mark = vec![false; rhs.cols];
        let mut b = CsrBuilder::new(self.rows, rhs.cols, self.nnz().max(rhs.nnz()));
        for i in 0..self.rows {
            for (k, a) in self.row(i) {
                for (j, v) in rhs.row(k) {
                    if !mark[j] {
                        mark[j] = true;
                        touched.push(j);
                    }
                    acc[j] += a * v;
                }
            }
            touched.sort_unstable();
            for &j in &touched {
                if !acc[j].is_zero() {
                    b.push(j, acc[j]);
                }
                acc[j] = ZERO;
                mark[j] = false;
            }
            touched.clear();
            b.end_row();
        }
        b.finish()
    }
}

fn merge_rows(a: &SpMat, b: &SpMat, sign: f64) -> SpMat {
    assert_eq!((a.rows, a.cols), (b.rows, b.cols));
    let mut out = CsrBuilder::new(a.rows, a.cols, a.nnz() + b.nnz());
    for i in 0..a.rows {
        let (mut ra, mut rb) = (a.row(i).peekable(), b.row(i).peekable());
        loop {
            let (j, v) = match (ra.peek(), rb.peek()) {
                (None, None) => break,
                (Some(&(ja, va)), Some(&(jb, vb))) if ja == jb => {
                    ra.next();
                    rb.next();
                    (ja, va + vb * sign)
                }
                (Some(&(ja, va)), Some(&(jb, _))) if ja < jb => {
                    ra.next();
                    (ja, va)
                }
                (Some(&(ja, va)), None) => {
                    ra.next();
                    (ja, va)
                }
                (_, Some(&(jb, vb))) => {
                    rb.next();
                    (jb, vb * sign)
                }
            };
            if !v.is_zero() {
                out.push(j, v);
            }
        }
        out.end_row();
    }
    out.finish()
}

impl Add for &SpMat {
    type Output = SpMat;
    fn add(self, rhs: &SpMat) -> SpMat {
        merge_rows(self, rhs, 1.0)
    }
}

impl Sub for &SpMat {
    type Output = SpMat;
    fn sub(self, rhs: &SpMat) -> SpMat {
        merge_rows(self, rhs, -1.0)
    }
}

/// Complex number from polar data `r·e^{iθ}`.
pub fn polar(r: f64, theta: f64) -> C64 {
    C64::from_polar(r, theta)
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Deterministic generator used by every randomized check.
pub fn seeded_rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_adjoint() {
        let mut rng = seeded_rng(1);
        let a = CMat::random(3, 4, &mut rng);
        let b = CMat::random(4, 2, &mut rng);
        let lhs = (&a * &b).adjoint();
        let rhs = &b.adjoint() * &a.adjoint();
        assert!((&lhs - &rhs).max_abs() < 1e-14);
    }

    #[test]
    fn null_space_of_rank_deficient() {
        let mut rng = seeded_rng(2);
        let a = CMat::random(2, 5, &mut rng);
        let k = null_space(&a, 1e-10);
        assert_eq!(k.cols(), 3);
        assert!((&a * &k).max_abs() < 1e-12);
        assert!(k.unitarity_residual().is_infinite() || k.cols() == k.rows());
        assert!((&(&k.adjoint() * &k) - &CMat::identity(3)).max_abs() < 1e-12);
    }

    #[test]
    fn column_span_and_rank() {
        let mut rng = seeded_rng(3);
        let a = CMat::random(6, 2, &mut rng);
        let m = &a * &CMat::random(2, 5, &mut rng);
        assert_eq!(rank(&m, 1e-10), 2);
        let s = column_span(&m, 1e-10);
        assert_eq!(s.cols(), 2);
        let proj = &s * &s.adjoint();
        assert!((&(&proj * &m) - &m).max_abs() < 1e-12);
    }

    #[test]
    fn eigh_reconstructs() {
        let mut rng = seeded_rng(4);
        let h = CMat::random_hermitian(5, &mut rng);
        let (vals, v) = eigh(&h);
        let d = CMat::diag(&vals.iter().map(|&x| re(x)).collect::<Vec<_>>());
        let back = &(&v * &d) * &v.adjoint();
        assert!((&back - &h).max_abs() < 1e-12);
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn sparse_matches_dense() {
        let mut rng = seeded_rng(5);
        let a = CMat::random(4, 4, &mut rng);
        let b = CMat::random(4, 4, &mut rng);
        let (sa, sb) = (SpMat::from_dense(&a, 0.0), SpMat::from_dense(&b, 0.0));
        assert!((&(&sa * &sb).to_dense() - &(&a * &b)).max_abs() < 1e-13);
        assert!((&(&sa - &sb).to_dense() - &(&a - &b)).max_abs() < 1e-13);
        assert!((&sa.adjoint().to_dense() - &a.adjoint()).max_abs() < 1e-15);
        assert!((&sa.kron(&sb).to_dense() - &a.kron(&b)).max_abs() < 1e-13);
    }
}

//! Prime-field arithmetic and dense linear algebra over `F_p`.
//!
//! Everything downstream (graded pieces of exterior-algebra maps, Koszul
//! spaces, Macaulay matrices) is ultimately a [`Matrix`] over a small prime
//! field. Entries are stored as `u8`, so the modulus is limited to primes
//! below 256.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default characteristic used throughout the pipeline.
pub const DEFAULT_PRIME: u32 = 5;

/// Work threshold (entries touched per pivot) above which row elimination is
/// spread over the rayon pool.
const PARALLEL_THRESHOLD: usize = 1 << 17;

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Checks that `p` is usable as a matrix modulus.
pub fn check_prime(p: u32) -> Result<()> {
    if !is_prime(p) || p > 255 {
        return Err(Error::InvalidInput(format!(
            "modulus {p} must be a prime below 256"
        )));
    }
    Ok(())
}

/// Inverse of `a` modulo `p` by the extended Euclidean algorithm.
pub fn inv_mod(a: u32, p: u32) -> Option<u32> {
    let (mut r0, mut r1) = (p as i64, (a % p) as i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(p as i64) as u32)
}

/// Maps an arbitrary integer to its residue in `[0, p)`.
#[inline]
pub fn residue(x: i64, p: u32) -> u8 {
    x.rem_euclid(p as i64) as u8
}

/// Maps a residue to the symmetric range `(-p/2, p/2]`.
#[inline]
pub fn symmetric(x: u8, p: u32) -> i64 {
    let x = x as i64;
    if 2 * x > p as i64 {
        x - p as i64
    } else {
        x
    }
}

/// An element of `F_p`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct FieldElement {
    value: u32,
    modulus: u32,
}

impl FieldElement {
    pub fn new(value: i64, modulus: u32) -> Self {
        debug_assert!(is_prime(modulus));
        Self {
            value: value.rem_euclid(modulus as i64) as u32,
            modulus,
        }
    }

    pub fn zero(modulus: u32) -> Self {
        Self::new(0, modulus)
    }

    pub fn one(modulus: u32) -> Self {
        Self::new(1, modulus)
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> u32 {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn inv(self) -> Option<Self> {
        inv_mod(self.value, self.modulus).map(|v| Self {
            value: v,
            modulus: self.modulus,
        })
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Self::one(self.modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

impl Add for FieldElement {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        Self {
            value: (self.value + rhs.value) % self.modulus,
            modulus: self.modulus,
        }
    }
}

impl Sub for FieldElement {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        Self {
            value: (self.value + self.modulus - rhs.value) % self.modulus,
            modulus: self.modulus,
        }
    }
}

impl Mul for FieldElement {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        Self {
            value: (self.value * rhs.value) % self.modulus,
            modulus: self.modulus,
        }
    }
}

impl Neg for FieldElement {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            value: (self.modulus - self.value) % self.modulus,
            modulus: self.modulus,
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Barrett reduction for values below 2^16 and moduli below 256.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Reducer {
    p: u32,
    m: u32,
}

impl Reducer {
    pub(crate) fn new(p: u32) -> Self {
        Self {
            p,
            m: (1u32 << 16) / p + 1,
        }
    }

    #[inline(always)]
    pub(crate) fn reduce(self, x: u32) -> u32 {
        let q = (x * self.m) >> 16;
        let r = x as i32 - (q * self.p) as i32;
        (if r < 0 { r + self.p as i32 } else { r }) as u32
    }

    /// `dst[j] += f * src[j]` for all `j`.
    #[inline]
    pub(crate) fn axpy(self, dst: &mut [u8], src: &[u8], f: u8) {
        let f = f as u32;
        for (d, &s) in dst.iter_mut().zip(src) {
            *d = self.reduce(*d as u32 + f * s as u32) as u8;
        }
    }

    #[inline]
    pub(crate) fn scale(self, row: &mut [u8], f: u8) {
        let f = f as u32;
        for d in row.iter_mut() {
            *d = self.reduce(f * *d as u32) as u8;
        }
    }
}

/// Result of a reduced-row-echelon decomposition.
#[derive(Clone, Debug)]
pub struct Rref {
    pub rank: usize,
    pub pivots: Vec<usize>,
    pub reduced: Matrix,
}

/// Dense row-major matrix over `F_p`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over F_{}", self.rows, self.cols, self.p)?;
        for r in 0..self.rows.min(40) {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        Self {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from integer rows, reducing every entry mod `p`.
    pub fn from_rows<R: AsRef<[i64]>>(p: u32, rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::InvalidInput("ragged matrix rows".into()));
            }
            data.extend(r.iter().map(|&x| residue(x, p)));
        }
        Ok(Self {
            p,
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Builds a matrix from residues already in `[0, p)`.
    pub fn from_data(p: u32, rows: usize, cols: usize, data: Vec<u8>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count mismatch");
        debug_assert!(data.iter().all(|&x| (x as u32) < p));
        Self {
            p,
            rows,
            cols,
            data,
        }
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(p: u32, rows: usize, columns: &[Vec<u8>]) -> Self {
        let mut m = Self::zeros(p, rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (r, &v) in col.iter().enumerate() {
                m.data[r * m.cols + c] = v;
            }
        }
        m
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u8) {
        debug_assert!((v as u32) < self.p);
        self.data[r * self.cols + c] = v;
    }

    /// Adds `v` (any residue) to entry `(r, c)`.
    #[inline]
    pub fn add_to(&mut self, r: usize, c: usize, v: u32) {
        let e = &mut self.data[r * self.cols + c];
        *e = ((*e as u32 + v) % self.p) as u8;
    }

    pub fn element(&self, r: usize, c: usize) -> FieldElement {
        FieldElement::new(self.get(r, c) as i64, self.p)
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [u8] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u8> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<u8>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.rows || self.p != rhs.p {
            return Err(Error::InvalidInput(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let p = self.p;
        let n = rhs.cols;
        let mut out = vec![0u8; self.rows * n];
        // Accumulate in u32 and reduce once per output row; p^2 * 2^16 stays
        // far below u32::MAX for inner dimensions up to a few thousand when
        // flushed periodically.
        let flush_every = ((u32::MAX / 2) / ((p - 1) * (p - 1)).max(1)) as usize;
        let body = |(r, out_row): (usize, &mut [u8])| {
            let mut acc = vec![0u32; n];
            let lhs_row = &self.data[r * self.cols..(r + 1) * self.cols];
            for (k, &a) in lhs_row.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let a = a as u32;
                for (x, &b) in acc.iter_mut().zip(rhs.row(k)) {
                    *x += a * b as u32;
                }
                if (k + 1) % flush_every == 0 {
                    for x in acc.iter_mut() {
                        *x %= p;
                    }
                }
            }
            for (o, x) in out_row.iter_mut().zip(acc) {
                *o = (x % p) as u8;
            }
        };
        if n == 0 {
            return Ok(Self::zeros(p, self.rows, 0));
        }
        if self.rows * self.cols * n > PARALLEL_THRESHOLD * 8 {
            out.par_chunks_mut(n).enumerate().for_each(body);
        } else {
            out.chunks_mut(n).enumerate().for_each(body);
        }
        Ok(Self::from_data(p, self.rows, n, out))
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[u8]) -> Vec<u8> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let s: u64 = self
                    .row(r)
                    .iter()
                    .zip(v)
                    .map(|(&a, &b)| a as u64 * b as u64)
                    .sum();
                (s % self.p as u64) as u8
            })
            .collect()
    }

    pub fn add(&self, rhs: &Matrix) -> Result<Matrix> {
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return Err(Error::InvalidInput("shape mismatch in addition".into()));
        }
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(&a, &b)| ((a as u32 + b as u32) % self.p) as u8)
            .collect();
        Ok(Self::from_data(self.p, self.rows, self.cols, data))
    }

    pub fn scaled(&self, f: u8) -> Matrix {
        let mut m = self.clone();
        Reducer::new(self.p).scale(&mut m.data, f);
        m
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.cols {
            return Err(Error::InvalidInput("vstack column mismatch".into()));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Self::from_data(self.p, self.rows + other.rows, self.cols, data))
    }

    /// Places `other` to the right of `self`.
    pub fn hstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows {
            return Err(Error::InvalidInput("hstack row mismatch".into()));
        }
        let cols = self.cols + other.cols;
        let mut m = Self::zeros(self.p, self.rows, cols);
        for r in 0..self.rows {
            m.data[r * cols..r * cols + self.cols].copy_from_slice(self.row(r));
            m.data[r * cols + self.cols..(r + 1) * cols].copy_from_slice(other.row(r));
        }
        Ok(m)
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut m = Self::zeros(self.p, self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                m.data[r * cols.len() + j] = self.get(r, c);
            }
        }
        m
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            data.extend_from_slice(self.row(r));
        }
        Self::from_data(self.p, rows.len(), self.cols, data)
    }

    /// Gaussian elimination in place. With `full`, produces the reduced
    /// echelon form; otherwise only clears below each pivot. Returns the pivot
    /// columns in increasing order. Rows are permuted so that pivot rows come
    /// first.
    fn eliminate(&mut self, full: bool) -> Vec<usize> {
        let red = Reducer::new(self.p);
        let p = self.p;
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut prow = 0;
        for col in 0..cols {
            if prow == self.rows {
                break;
            }
            let Some(found) = (prow..self.rows).find(|&r| self.data[r * cols + col] != 0) else {
                continue;
            };
            if found != prow {
                for j in col..cols {
                    self.data.swap(found * cols + j, prow * cols + j);
                }
            }
            let inv = inv_mod(self.data[prow * cols + col] as u32, p).unwrap() as u8;
            red.scale(&mut self.data[prow * cols + col..(prow + 1) * cols], inv);
            let pivot: Vec<u8> = self.data[prow * cols + col..(prow + 1) * cols].to_vec();

            let start = if full { 0 } else { prow + 1 };
            let work = (self.rows - start) * (cols - col);
            let clear = |r: usize, row: &mut [u8]| {
                if r == prow {
                    return;
                }
                let a = row[col];
                if a != 0 {
                    red.axpy(&mut row[col..], &pivot, (p - a as u32) as u8);
                }
            };
            let region = &mut self.data[start * cols..];
            if work > PARALLEL_THRESHOLD {
                region
                    .par_chunks_mut(cols)
                    .enumerate()
                    .for_each(|(i, row)| clear(start + i, row));
            } else {
                region
                    .chunks_mut(cols)
                    .enumerate()
                    .for_each(|(i, row)| clear(start + i, row));
            }
            pivots.push(col);
            prow += 1;
        }
        pivots
    }

    pub fn rref(&self) -> Rref {
        let mut reduced = self.clone();
        let pivots = reduced.eliminate(true);
        Rref {
            rank: pivots.len(),
            pivots,
            reduced,
        }
    }

    pub fn rank(&self) -> usize {
        // Eliminate along the shorter side.
        if self.rows > self.cols {
            let mut t = self.transpose();
            t.eliminate(false).len()
        } else {
            let mut m = self.clone();
            m.eliminate(false).len()
        }
    }

    /// Columns spanning the right kernel, one per free column of the echelon
    /// form (so the result is in canonical reduced form).
    pub fn kernel_basis(&self) -> Matrix {
        let Rref {
            rank,
            pivots,
            reduced,
        } = self.rref();
        let p = self.p;
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut k = Self::zeros(p, self.cols, free.len());
        for (j, &f) in free.iter().enumerate() {
            k.set(f, j, 1);
            for (i, &pc) in pivots.iter().enumerate().take(rank) {
                let v = reduced.get(i, f);
                if v != 0 {
                    k.set(pc, j, (p - v as u32) as u8);
                }
            }
        }
        k
    }

    /// Rows spanning the left kernel `{y : y * self = 0}`.
    pub fn left_kernel_basis(&self) -> Matrix {
        self.transpose().kernel_basis().transpose()
    }

    /// Solves `self * x = b`. `Ok(None)` means the system is inconsistent.
    pub fn solve(&self, b: &Matrix) -> Result<Option<Matrix>> {
        if b.rows != self.rows || b.p != self.p {
            return Err(Error::InvalidInput(format!(
                "right-hand side has {} rows, expected {}",
                b.rows, self.rows
            )));
        }
        let aug = self.hstack(b)?;
        let Rref {
            rank,
            pivots,
            reduced,
        } = aug.rref();
        if pivots.iter().any(|&c| c >= self.cols) {
            return Ok(None);
        }
        let mut x = Self::zeros(self.p, self.cols, b.cols);
        for (i, &pc) in pivots.iter().enumerate().take(rank) {
            for j in 0..b.cols {
                x.set(pc, j, reduced.get(i, self.cols + j));
            }
        }
        Ok(Some(x))
    }

    /// Row echelon basis of the row space (nonzero rows of the rref).
    pub fn row_space(&self) -> Matrix {
        let r = self.rref();
        r.reduced.select_rows(&(0..r.rank).collect::<Vec<_>>())
    }
}

/// Incrementally maintained reduced echelon basis of a subspace of `F_p^n`.
///
/// Used wherever a canonical complement has to be chosen: new generators in
/// syzygy computations, new ideal generators, canonical representatives.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    p: u32,
    dim: usize,
    rows: Vec<Vec<u8>>,
    pivots: Vec<usize>,
}

impl EchelonBasis {
    pub fn new(p: u32, dim: usize) -> Self {
        Self {
            p,
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &[Vec<u8>] {
        &self.rows
    }

    /// Reduces `v` against the basis, returning the normal form.
    pub fn reduce(&self, v: &[u8]) -> Vec<u8> {
        let red = Reducer::new(self.p);
        let mut v = v.to_vec();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let a = v[pc];
            if a != 0 {
                red.axpy(&mut v, row, (self.p - a as u32) as u8);
            }
        }
        v
    }

    pub fn contains(&self, v: &[u8]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Inserts `v`; returns `true` if it enlarged the span.
    pub fn insert(&mut self, v: &[u8]) -> bool {
        assert_eq!(v.len(), self.dim);
        let red = Reducer::new(self.p);
        let mut v = self.reduce(v);
        let Some(pc) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = inv_mod(v[pc] as u32, self.p).unwrap() as u8;
        red.scale(&mut v, inv);
        for row in self.rows.iter_mut() {
            let a = row[pc];
            if a != 0 {
                red.axpy(row, &v, (self.p - a as u32) as u8);
            }
        }
        let at = self.pivots.partition_point(|&x| x < pc);
        self.pivots.insert(at, pc);
        self.rows.insert(at, v);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn barrett_reduction_is_exact() {
        for p in (2..256u32).filter(|&p| is_prime(p)) {
            let red = Reducer::new(p);
            for x in 0..(p * p) {
                assert_eq!(red.reduce(x), x % p, "p={p} x={x}");
            }
        }
    }

    #[test]
    fn inverses() {
        for a in 1..5 {
            let inv = inv_mod(a, 5).unwrap();
            assert_eq!(a * inv % 5, 1);
        }
        assert_eq!(inv_mod(0, 5), None);
        let x = FieldElement::new(-2, 5);
        assert_eq!(x.value(), 3);
        assert_eq!((x * x.inv().unwrap()).value(), 1);
        assert_eq!(x.pow(4).value(), 1);
    }

    #[test]
    fn identity_rref() {
        let r = Matrix::identity(5, 2).rref();
        assert_eq!(r.rank, 2);
        assert_eq!(r.pivots, vec![0, 1]);
    }

    #[test]
    fn zero_matrix_rref() {
        let r = Matrix::zeros(5, 3, 4).rref();
        assert_eq!(r.rank, 0);
        assert!(r.pivots.is_empty());
        assert_eq!(Matrix::zeros(5, 0, 0).rank(), 0);
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        assert_eq!(Matrix::identity(5, 4).kernel_basis().cols(), 0);
    }

    #[test]
    fn kernel_of_row_one_one() {
        let m = Matrix::from_rows(5, &[[1, 1]]).unwrap();
        let k = m.kernel_basis();
        assert_eq!(k.cols(), 1);
        assert_eq!(k.column(0), vec![4, 1]);
        assert!(m.mul(&k).unwrap().is_zero());
    }

    #[test]
    fn solve_identity_and_zero() {
        let b = Matrix::from_rows(5, &[[3, 1], [4, 0], [2, 2]]).unwrap();
        let x = Matrix::identity(5, 3).solve(&b).unwrap().unwrap();
        assert_eq!(x, b);
        let none = Matrix::zeros(5, 3, 3).solve(&b).unwrap();
        assert!(none.is_none());
        let bad = Matrix::zeros(5, 2, 1);
        assert!(matches!(
            Matrix::identity(5, 3).solve(&bad),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn echelon_basis_complement() {
        let mut e = EchelonBasis::new(5, 3);
        assert!(e.insert(&[1, 2, 0]));
        assert!(e.insert(&[0, 1, 1]));
        assert!(!e.insert(&[1, 3, 1]));
        assert!(e.contains(&[2, 4, 0]));
        assert_eq!(e.rank(), 2);
    }

    #[test]
    fn symmetric_residues() {
        assert_eq!(symmetric(3, 5), -2);
        assert_eq!(symmetric(2, 5), 2);
        assert_eq!(residue(-1, 5), 4);
    }
}

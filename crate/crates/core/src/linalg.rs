//! Exact dense linear algebra over a prime field F_p.
//!
//! Matrices act on column vectors. Every routine is exact; nothing here
//! allocates beyond the dense row-major buffers.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};

/// A prime field F_p with 2 <= p <= 2^31.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Field {
    p: u32,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn new(p: u64) -> Result<Self> {
        if p > (1u64 << 31) || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Field { p: p as u32 })
    }

    #[inline]
    pub fn p(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.p as u64) as u32
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.p as u64 - b as u64) % self.p as u64) as u32
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn pow(self, mut a: u32, mut e: u64) -> u32 {
        let mut acc = 1u32 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(self, a: u32) -> u32 {
        assert!(!a.is_multiple_of(self.p), "inverse of zero in F_{}", self.p);
        self.pow(a, self.p as u64 - 2)
    }

    /// Reduces a signed integer into [0, p).
    pub fn from_i64(self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    pub fn random<R: Rng + ?Sized>(self, rng: &mut R) -> u32 {
        rng.gen_range(0..self.p)
    }
}

impl Default for Field {
    fn default() -> Self {
        Field { p: 5 }
    }
}

/// Dense row-major matrix over F_p. Zero-row or zero-column matrices are
/// legal and stand for maps from or to the zero space.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix{}x{}[", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
        }
        write!(f, "]")
    }
}

/// Result of a reduced row echelon computation.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub reduced: Matrix,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % field.p;
        }
        m
    }

    /// Builds from row-major data, reducing every entry mod p.
    pub fn new(field: Field, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        let data = data.into_iter().map(|v| v % field.p).collect();
        Matrix { field, rows, cols, data }
    }

    pub fn from_rows(field: Field, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Self::zeros(field, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, field.from_i64(v));
            }
        }
        m
    }

    pub fn from_fn(field: Field, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u32) -> Self {
        let mut m = Self::zeros(field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = f(i, j) % field.p;
            }
        }
        m
    }

    /// Matrix whose columns are the given vectors (each of length `rows`).
    pub fn from_columns(field: Field, rows: usize, columns: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length");
            for (i, &v) in col.iter().enumerate() {
                m.data[i * columns.len() + j] = v % field.p;
            }
        }
        m
    }

    pub fn random<R: Rng + ?Sized>(field: Field, rows: usize, cols: usize, rng: &mut R) -> Self {
        Self::from_fn(field, rows, cols, |_, _| field.random(rng))
    }

    #[inline]
    pub fn field(&self) -> Field {
        self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.field.p;
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<u32>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Matrix {
        Self::from_fn(self.field, self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// Product `self * rhs`. Panics on shape mismatch.
    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape {}x{} * {}x{}", self.rows, self.cols, rhs.rows, rhs.cols);
        let p = self.field.p as u64;
        let mut out = Matrix::zeros(self.field, self.rows, rhs.cols);
        let mut acc = vec![0u64; rhs.cols];
        for i in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k] as u64;
                if a == 0 {
                    continue;
                }
                let rrow = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (slot, &b) in acc.iter_mut().zip(rrow) {
                    *slot = (*slot + a * b as u64) % p;
                }
            }
            for (j, &a) in acc.iter().enumerate() {
                out.data[i * rhs.cols + j] = a as u32;
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        let p = self.field.p as u64;
        (0..self.rows)
            .map(|i| {
                let mut s = 0u64;
                for (k, &x) in v.iter().enumerate() {
                    s = (s + self.data[i * self.cols + k] as u64 * x as u64) % p;
                }
                s as u32
            })
            .collect()
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix sum shape");
        let f = self.field;
        let data = self.data.iter().zip(&rhs.data).map(|(&a, &b)| f.add(a, b)).collect();
        Matrix { field: f, rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix difference shape");
        let f = self.field;
        let data = self.data.iter().zip(&rhs.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Matrix { field: f, rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: u32) -> Matrix {
        let f = self.field;
        let data = self.data.iter().map(|&a| f.mul(a, c)).collect();
        Matrix { field: f, rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> Matrix {
        self.scale(self.field.neg(1))
    }

    /// `self + c * rhs`.
    pub fn add_scaled(&self, rhs: &Matrix, c: u32) -> Matrix {
        self.add(&rhs.scale(c))
    }

    pub fn pow(&self, mut e: u64) -> Matrix {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Matrix::identity(self.field, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `[self | rhs]`.
    pub fn hstack(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.rows, rhs.rows, "hstack rows");
        Self::from_fn(self.field, self.rows, self.cols + rhs.cols, |i, j| {
            if j < self.cols {
                self.get(i, j)
            } else {
                rhs.get(i, j - self.cols)
            }
        })
    }

    /// `[self ; rhs]`.
    pub fn vstack(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.cols, "vstack cols");
        let mut data = self.data.clone();
        data.extend_from_slice(&rhs.data);
        Matrix { field: self.field, rows: self.rows + rhs.rows, cols: self.cols, data }
    }

    pub fn hstack_all(field: Field, rows: usize, parts: &[Matrix]) -> Matrix {
        parts.iter().fold(Matrix::zeros(field, rows, 0), |acc, m| acc.hstack(m))
    }

    pub fn vstack_all(field: Field, cols: usize, parts: &[Matrix]) -> Matrix {
        parts.iter().fold(Matrix::zeros(field, 0, cols), |acc, m| acc.vstack(m))
    }

    pub fn block_diag(field: Field, blocks: &[Matrix]) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(field, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            out.set_block(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.data[(r0 + i) * self.cols + c0 + j] = block.get(i, j);
            }
        }
    }

    pub fn block(&self, r0: usize, rows: usize, c0: usize, cols: usize) -> Matrix {
        Self::from_fn(self.field, rows, cols, |i, j| self.get(r0 + i, c0 + j))
    }

    /// Reduced row echelon form with the pivot columns.
    pub fn rref(&self) -> Echelon {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(piv) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            if piv != r {
                for j in 0..m.cols {
                    m.data.swap(piv * m.cols + j, r * m.cols + j);
                }
            }
            let inv = f.inv(m.get(r, c));
            for j in c..m.cols {
                let v = f.mul(m.get(r, j), inv);
                m.data[r * m.cols + j] = v;
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let t = m.get(i, c);
                if t == 0 {
                    continue;
                }
                for j in c..m.cols {
                    let v = f.sub(m.get(i, j), f.mul(t, m.get(r, j)));
                    m.data[i * m.cols + j] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon { reduced: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of the null space, one vector per free column in increasing order.
    pub fn kernel_basis(&self) -> Vec<Vec<u32>> {
        let f = self.field;
        let ech = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &ech.pivots {
            is_pivot[c] = true;
        }
        let mut out = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0u32; self.cols];
            v[free] = 1 % f.p;
            for (row, &pc) in ech.pivots.iter().enumerate() {
                v[pc] = f.neg(ech.reduced.get(row, free));
            }
            out.push(v);
        }
        out
    }

    /// Kernel basis as the columns of a matrix.
    pub fn kernel_matrix(&self) -> Matrix {
        Matrix::from_columns(self.field, self.cols, &self.kernel_basis())
    }

    /// Some `x` with `self * x = b`, free variables set to zero.
    pub fn solve(&self, b: &[u32]) -> Result<Option<Vec<u32>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side has length {}, matrix has {} rows",
                b.len(),
                self.rows
            )));
        }
        let rhs = Matrix::from_columns(self.field, self.rows, &[b.to_vec()]);
        let ech = self.hstack(&rhs).rref();
        if ech.pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![0u32; self.cols];
        for (row, &pc) in ech.pivots.iter().enumerate() {
            x[pc] = ech.reduced.get(row, self.cols);
        }
        Ok(Some(x))
    }

    /// Solves `self * X = B` column by column.
    pub fn solve_matrix(&self, b: &Matrix) -> Option<Matrix> {
        assert_eq!(b.rows, self.rows, "solve_matrix rows");
        let ech = self.hstack(b).rref();
        if ech.pivots.iter().any(|&c| c >= self.cols) {
            return None;
        }
        let mut x = Matrix::zeros(self.field, self.cols, b.cols);
        for (row, &pc) in ech.pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(pc, j, ech.reduced.get(row, self.cols + j));
            }
        }
        Some(x)
    }

    pub fn invert(&self) -> Result<Option<Matrix>> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let ech = self.hstack(&Matrix::identity(self.field, n)).rref();
        let full = ech.pivots.len() >= n && ech.pivots[..n].iter().enumerate().all(|(i, &c)| c == i);
        if !full {
            return Ok(None);
        }
        Ok(Some(ech.reduced.block(0, n, n, n)))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn is_nilpotent(&self) -> bool {
        assert!(self.is_square());
        self.rows == 0 || self.pow(self.rows as u64).is_zero()
    }

    /// Columns of `self` that form a basis of its column space.
    pub fn column_space(&self) -> Matrix {
        let ech = self.rref();
        Matrix::from_columns(self.field, self.rows, &ech.pivots.iter().map(|&c| self.column(c)).collect::<Vec<_>>())
    }

    /// Standard basis vectors completing the column space of `self` to
    /// the whole ambient space, as columns.
    pub fn complement(&self) -> Matrix {
        let n = self.rows;
        let ech = self.hstack(&Matrix::identity(self.field, n)).rref();
        let cols: Vec<Vec<u32>> = ech
            .pivots
            .iter()
            .filter(|&&c| c >= self.cols)
            .map(|&c| {
                let mut v = vec![0; n];
                v[c - self.cols] = 1;
                v
            })
            .collect();
        Matrix::from_columns(self.field, n, &cols)
    }

    /// Characteristic polynomial, low degree first, via Hessenberg reduction.
    pub fn charpoly(&self) -> Vec<u32> {
        assert!(self.is_square());
        let f = self.field;
        let n = self.rows;
        let mut h = self.clone();
        for j in 0..n.saturating_sub(2) {
            let Some(piv) = (j + 1..n).find(|&i| h.get(i, j) != 0) else {
                continue;
            };
            if piv != j + 1 {
                for c in 0..n {
                    h.data.swap(piv * n + c, (j + 1) * n + c);
                }
                for r in 0..n {
                    h.data.swap(r * n + piv, r * n + j + 1);
                }
            }
            let inv = f.inv(h.get(j + 1, j));
            for r in j + 2..n {
                let t = f.mul(h.get(r, j), inv);
                if t == 0 {
                    continue;
                }
                for c in 0..n {
                    let v = f.sub(h.get(r, c), f.mul(t, h.get(j + 1, c)));
                    h.data[r * n + c] = v;
                }
                for rr in 0..n {
                    let v = f.add(h.get(rr, j + 1), f.mul(t, h.get(rr, r)));
                    h.data[rr * n + j + 1] = v;
                }
            }
        }
        let mut polys: Vec<Vec<u32>> = vec![vec![1]];
        for m in 1..=n {
            let prev = &polys[m - 1];
            let mut pm = vec![0u32; m + 1];
            let hmm = h.get(m - 1, m - 1);
            for (k, &c) in prev.iter().enumerate() {
                pm[k + 1] = f.add(pm[k + 1], c);
                pm[k] = f.sub(pm[k], f.mul(hmm, c));
            }
            let mut t = 1u32;
            for i in 1..m {
                t = f.mul(t, h.get(m - i, m - i - 1));
                let coef = f.mul(t, h.get(m - i - 1, m - 1));
                if coef == 0 {
                    continue;
                }
                for (k, &c) in polys[m - i - 1].iter().enumerate() {
                    pm[k] = f.sub(pm[k], f.mul(coef, c));
                }
            }
            polys.push(pm);
        }
        polys.pop().unwrap()
    }
}

/// An incrementally built subspace of `F_p^len`. Keeps the vectors that
/// were accepted as a basis, in insertion order.
#[derive(Clone, Debug)]
pub struct Span {
    field: Field,
    len: usize,
    echelon: Vec<(usize, Vec<u32>)>,
    basis: Vec<Vec<u32>>,
}

impl Span {
    pub fn new(field: Field, len: usize) -> Self {
        Span { field, len, echelon: Vec::new(), basis: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.len
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.basis
    }

    /// Residue of `v` after elimination against the span.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.len, "vector length");
        let f = self.field;
        let mut v = v.to_vec();
        for (piv, row) in &self.echelon {
            let c = v[*piv];
            if c == 0 {
                continue;
            }
            for (x, &r) in v.iter_mut().zip(row) {
                *x = f.sub(*x, f.mul(c, r));
            }
        }
        v
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Adds `v`; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        let mut r = self.reduce(v);
        let Some(piv) = r.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = self.field.inv(r[piv]);
        r.iter_mut().for_each(|x| *x = self.field.mul(*x, inv));
        self.echelon.push((piv, r));
        self.basis.push(v.to_vec());
        true
    }
}

/// Polynomials over F_p as coefficient vectors, lowest degree first.
pub mod poly {
    use super::Field;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    pub fn trim(a: &mut Vec<u32>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn eval(f: Field, a: &[u32], x: u32) -> u32 {
        a.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn mul(f: Field, a: &[u32], b: &[u32]) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u32; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(x, y));
            }
        }
        trim(&mut out);
        out
    }

    /// Remainder of `a` modulo the nonzero polynomial `m`.
    fn rem(f: Field, a: &[u32], m: &[u32]) -> Vec<u32> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let lead_inv = f.inv(m[dm]);
        while r.len() > dm {
            let k = r.len() - 1 - dm;
            let c = f.mul(r[r.len() - 1], lead_inv);
            for (i, &mi) in m.iter().enumerate() {
                r[k + i] = f.sub(r[k + i], f.mul(c, mi));
            }
            trim(&mut r);
        }
        r
    }

    fn gcd(f: Field, a: &[u32], b: &[u32]) -> Vec<u32> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(f, &a, &b);
            a = b;
            b = r;
        }
        if let Some(&lead) = a.last() {
            let inv = f.inv(lead);
            a.iter_mut().for_each(|c| *c = f.mul(*c, inv));
        }
        a
    }

    fn powmod(f: Field, base: &[u32], mut e: u64, m: &[u32]) -> Vec<u32> {
        let mut acc = vec![1u32];
        let mut b = rem(f, base, m);
        while e > 0 {
            if e & 1 == 1 {
                acc = rem(f, &mul(f, &acc, &b), m);
            }
            e >>= 1;
            if e > 0 {
                b = rem(f, &mul(f, &b, &b), m);
            }
        }
        acc
    }

    /// Distinct roots in F_p, sorted.
    pub fn roots(f: Field, a: &[u32]) -> Vec<u32> {
        let mut a = a.to_vec();
        trim(&mut a);
        if a.len() <= 1 {
            return Vec::new();
        }
        let p = f.p();
        if p <= 4096 {
            return (0..p).filter(|&x| eval(f, &a, x) == 0).collect();
        }
        // gcd with x^p - x isolates the product of the linear factors
        let xp = powmod(f, &[0, 1], p as u64, &a);
        let mut xp_minus_x = xp;
        xp_minus_x.resize(xp_minus_x.len().max(2), 0);
        xp_minus_x[1] = f.sub(xp_minus_x[1], 1);
        let g = gcd(f, &a, &xp_minus_x);
        let mut out = Vec::new();
        let mut rng = StdRng::seed_from_u64(0x5eed);
        split_linear(f, g, &mut rng, &mut out);
        out.sort_unstable();
        out.dedup();
        out
    }

    fn split_linear(f: Field, g: Vec<u32>, rng: &mut StdRng, out: &mut Vec<u32>) {
        match g.len() {
            0 | 1 => {}
            2 => out.push(f.neg(f.mul(g[0], f.inv(g[1])))),
            _ => loop {
                let shift: u32 = rng.gen_range(0..f.p());
                let h = powmod(f, &[shift, 1], (f.p() as u64 - 1) / 2, &g);
                let mut h1 = h;
                if h1.is_empty() {
                    h1.push(0);
                }
                h1[0] = f.sub(h1[0], 1);
                let d = gcd(f, &g, &h1);
                if d.len() > 1 && d.len() < g.len() {
                    let (q, _) = divrem(f, &g, &d);
                    split_linear(f, d, rng, out);
                    split_linear(f, q, rng, out);
                    return;
                }
            },
        }
    }

    /// How a polynomial factors, as far as the Fitting decomposition cares.
    #[derive(Clone, Debug, PartialEq, Eq)]
    pub enum Primary {
        /// `a` is a power of this monic irreducible.
        Power(Vec<u32>),
        /// A monic proper factor coprime to its cofactor's other prime factors:
        /// `u(x)` is nilpotent on part of the primary decomposition and
        /// invertible on the rest.
        Split(Vec<u32>),
    }

    /// Classifies a polynomial of positive degree. Uses distinct-degree
    /// factorization and, if needed, one equal-degree splitting step.
    pub fn primary(f: Field, a: &[u32]) -> Primary {
        let mut a = a.to_vec();
        trim(&mut a);
        assert!(a.len() >= 2, "constant polynomial");
        let p = f.p() as u64;
        let deg = a.len() - 1;
        let mut frob = vec![0, 1];
        for d in 1..=deg {
            frob = powmod(f, &frob, p, &a);
            let mut h = frob.clone();
            h.resize(h.len().max(2), 0);
            h[1] = f.sub(h[1], 1);
            trim(&mut h);
            let g = gcd(f, &a, &h);
            if g.len() < 2 {
                continue;
            }
            let mut rest = a.clone();
            loop {
                let c = gcd(f, &rest, &g);
                if c.len() < 2 {
                    break;
                }
                rest = divrem(f, &rest, &c).0;
            }
            if rest.len() >= 2 {
                return Primary::Split(g);
            }
            if g.len() - 1 == d {
                return Primary::Power(g);
            }
            return Primary::Split(equal_degree_factor(f, &g, d));
        }
        unreachable!("x^(p^deg) - x is divisible by every irreducible of degree <= deg")
    }

    /// A proper monic factor of a squarefree product of irreducibles of degree `d`.
    fn equal_degree_factor(f: Field, g: &[u32], d: usize) -> Vec<u32> {
        let p = f.p() as u64;
        let mut rng = StdRng::seed_from_u64(0xedf);
        loop {
            let t: Vec<u32> = (0..g.len() - 1).map(|_| rng.gen_range(0..f.p())).collect();
            let mut t = t;
            trim(&mut t);
            if t.len() < 2 {
                continue;
            }
            let mut h = if p == 2 {
                // trace map t + t^2 + ... + t^(2^(d-1))
                let mut acc = Vec::new();
                let mut cur = rem(f, &t, g);
                for _ in 0..d {
                    acc = add(f, &acc, &cur);
                    cur = rem(f, &mul(f, &cur, &cur), g);
                }
                acc
            } else {
                // t^((p^d - 1)/2) as a product of Frobenius images of t^((p-1)/2)
                let s = powmod(f, &t, (p - 1) / 2, g);
                let mut acc = vec![1];
                let mut cur = s;
                for _ in 0..d {
                    acc = rem(f, &mul(f, &acc, &cur), g);
                    cur = powmod(f, &cur, p, g);
                }
                if acc.is_empty() {
                    acc.push(0);
                }
                acc[0] = f.sub(acc[0], 1);
                trim(&mut acc);
                acc
            };
            trim(&mut h);
            let c = gcd(f, g, &h);
            if c.len() >= 2 && c.len() < g.len() {
                return c;
            }
        }
    }

    fn add(f: Field, a: &[u32], b: &[u32]) -> Vec<u32> {
        let mut out = vec![0u32; a.len().max(b.len())];
        for (i, &x) in a.iter().enumerate() {
            out[i] = x;
        }
        for (i, &y) in b.iter().enumerate() {
            out[i] = f.add(out[i], y);
        }
        trim(&mut out);
        out
    }

    fn divrem(f: Field, a: &[u32], m: &[u32]) -> (Vec<u32>, Vec<u32>) {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        if r.len() <= dm {
            return (Vec::new(), r);
        }
        let mut q = vec![0u32; r.len() - dm];
        let lead_inv = f.inv(m[dm]);
        while r.len() > dm {
            let k = r.len() - 1 - dm;
            let c = f.mul(r[r.len() - 1], lead_inv);
            q[k] = c;
            for (i, &mi) in m.iter().enumerate() {
                r[k + i] = f.sub(r[k + i], f.mul(c, mi));
            }
            trim(&mut r);
        }
        (q, r)
    }
}

//! Dense matrices with exact entries.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::ring::{Frac, Pid, Ring};

/// Row-major dense matrix. Zero-sized shapes are allowed internally; file
/// formats reject them.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T> Matrix<T> {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }
}

impl<T: Clone> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<T>], cols: usize) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::Dimension(format!("row {i} has length {}, expected {cols}", r.len())));
            }
            data.extend_from_slice(r);
        }
        Ok(Self { rows: rows.len(), cols, data })
    }

    /// Matrix whose columns are the given vectors of length `rows`.
    pub fn from_cols(cols: &[Vec<T>], rows: usize) -> Result<Self> {
        Ok(Self::from_rows(cols, rows)?.transpose())
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn col_vecs(&self) -> Vec<Vec<T>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    /// Columns `self | other` side by side.
    pub fn hstack(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::Dimension(format!("hstack of {} and {} rows", self.rows, other.rows)));
        }
        Ok(Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        }))
    }

    pub fn select_cols(&self, cols: &[usize]) -> Self {
        let rows: Vec<usize> = (0..self.rows).collect();
        self.submatrix(&rows, cols)
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let cols: Vec<usize> = (0..self.cols).collect();
        self.submatrix(rows, &cols)
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<T: fmt::Display> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
        }
        write!(f, "]")
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl<T: Ring> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn diagonal(d: &[T]) -> Self {
        Self::from_fn(d.len(), d.len(), |i, j| if i == j { d[i].clone() } else { T::zero() })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(T::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = out[(i, j)].add(&a.mul(b));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!("{}-column matrix times length-{} vector", self.cols, v.len())));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(v).fold(T::zero(), |acc, (a, b)| acc.add(&a.mul(b)))
            })
            .collect())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension("matrix sum of different shapes".into()));
        }
        Ok(Self { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect() })
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|a| a.mul(c))
    }

    /// `row[dst] += c * row[src]`.
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, c: &T) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self[(src, j)].mul(c);
            self[(dst, j)] = self[(dst, j)].add(&v);
        }
    }

    /// `col[dst] += c * col[src]`.
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, c: &T) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self[(i, src)].mul(c);
            self[(i, dst)] = self[(i, dst)].add(&v);
        }
    }

    /// Replaces rows `a`, `b` by `(p*a + q*b, r*a + s*b)`.
    pub fn combine_rows(&mut self, a: usize, b: usize, [p, q, r, s]: [&T; 4]) {
        for j in 0..self.cols {
            let (x, y) = (self[(a, j)].clone(), self[(b, j)].clone());
            self[(a, j)] = p.mul(&x).add(&q.mul(&y));
            self[(b, j)] = r.mul(&x).add(&s.mul(&y));
        }
    }

    /// Replaces columns `a`, `b` by `(p*a + q*b, r*a + s*b)`.
    pub fn combine_cols(&mut self, a: usize, b: usize, [p, q, r, s]: [&T; 4]) {
        for i in 0..self.rows {
            let (x, y) = (self[(i, a)].clone(), self[(i, b)].clone());
            self[(i, a)] = p.mul(&x).add(&q.mul(&y));
            self[(i, b)] = r.mul(&x).add(&s.mul(&y));
        }
    }

    pub fn scale_row(&mut self, i: usize, c: &T) {
        for j in 0..self.cols {
            self[(i, j)] = self[(i, j)].mul(c);
        }
    }

    pub fn scale_col(&mut self, j: usize, c: &T) {
        for i in 0..self.rows {
            self[(i, j)] = self[(i, j)].mul(c);
        }
    }
}

impl<R: Pid> Matrix<R> {
    /// Determinant by fraction-free Bareiss elimination.
    pub fn det(&self) -> Result<R> {
        if !self.is_square() {
            return Err(Error::Dimension(format!("determinant of a {}x{} matrix", self.rows, self.cols)));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(R::one());
        }
        let mut a = self.clone();
        let mut sign = false;
        let mut prev = R::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = !sign;
                    }
                    None => return Ok(R::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = a[(i, j)].mul(&a[(k, k)]).sub(&a[(i, k)].mul(&a[(k, j)]));
                    a[(i, j)] = v.div_exact(&prev).expect("Bareiss division is exact");
                }
                a[(i, k)] = R::zero();
            }
            prev = a[(k, k)].clone();
        }
        let d = a[(n - 1, n - 1)].clone();
        Ok(if sign { d.neg() } else { d })
    }

    /// Classical adjoint: `A * adj(A) = adj(A) * A = det(A) I`.
    pub fn adjugate(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Dimension(format!("adjugate of a {}x{} matrix", self.rows, self.cols)));
        }
        let n = self.rows;
        if n == 1 {
            return Ok(Self::identity(1));
        }
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let rows: Vec<usize> = (0..n).filter(|&r| r != i).collect();
                let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
                let m = self.submatrix(&rows, &cols).det()?;
                out[(j, i)] = if (i + j) % 2 == 1 { m.neg() } else { m };
            }
        }
        Ok(out)
    }

    /// Normalized gcd of all `k x k` minors.
    pub fn minors_gcd(&self, k: usize) -> Result<R> {
        if k == 0 || k > self.rows.min(self.cols) {
            return Err(Error::OutOfRange(format!(
                "minor size {k} outside 1..={}",
                self.rows.min(self.cols)
            )));
        }
        let mut g = R::zero();
        for rs in subsets(self.rows, k) {
            for cs in subsets(self.cols, k) {
                let d = self.submatrix(&rs, &cs).det()?;
                g = g.gcd(&d);
                if g.is_unit() {
                    return Ok(g.normalized());
                }
            }
        }
        Ok(g)
    }

    pub fn to_frac(&self) -> Matrix<Frac<R>> {
        self.map(|a| Frac::from_ring(a.clone()))
    }

    /// Whether the matrix is square with unit determinant.
    pub fn is_unimodular(&self) -> bool {
        self.is_square() && self.det().map(|d| d.is_unit()).unwrap_or(false)
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::Cyclotomic;
use crate::{Error, Result};

/// Dense matrix over `Q(zeta_N)`; every entry carries the same order `N`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CycloMatrix {
    rows: usize,
    cols: usize,
    order: u64,
    data: Vec<Cyclotomic>,
}

impl CycloMatrix {
    pub fn zeros(rows: usize, cols: usize, order: u64) -> Self {
        CycloMatrix { rows, cols, order, data: vec![Cyclotomic::zero(order); rows * cols] }
    }

    pub fn identity(n: usize, order: u64) -> Self {
        let mut m = Self::zeros(n, n, order);
        for i in 0..n {
            m.data[i * n + i] = Cyclotomic::one(order);
        }
        m
    }

    pub fn scalar(n: usize, c: &Cyclotomic) -> Self {
        let mut m = Self::zeros(n, n, c.order());
        for i in 0..n {
            m.data[i * n + i] = c.clone();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, order: u64, mut f: impl FnMut(usize, usize) -> Cyclotomic) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j).lift(order).expect("entry order must divide matrix order"));
            }
        }
        CycloMatrix { rows, cols, order, data }
    }

    /// Rational matrix embedded in `Q(zeta_order)`.
    pub fn from_rationals(order: u64, rows: &[Vec<BigRational>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        Self::from_fn(r, c, order, |i, j| Cyclotomic::from_rational(order, rows[i][j].clone()))
    }

    pub fn from_ints(order: u64, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        Self::from_fn(r, c, order, |i, j| Cyclotomic::from_int(order, rows[i][j]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Cyclotomic {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Cyclotomic) {
        self.data[i * self.cols + j] = v.lift(self.order).expect("entry order must divide matrix order");
    }

    pub fn lift(&self, m: u64) -> Result<Self> {
        if m == self.order {
            return Ok(self.clone());
        }
        let data = self.data.iter().map(|c| c.lift(m)).collect::<Result<Vec<_>>>()?;
        Ok(CycloMatrix { rows: self.rows, cols: self.cols, order: m, data })
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        let m = super::lcm(self.order, other.order);
        (self.lift(m).unwrap(), other.lift(m).unwrap())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, self.order, |i, j| self.get(j, i).clone())
    }

    pub fn scale(&self, c: &Cyclotomic) -> Self {
        let m = super::lcm(self.order, c.order());
        let s = self.lift(m).unwrap();
        let c = c.lift(m).unwrap();
        CycloMatrix {
            rows: s.rows,
            cols: s.cols,
            order: m,
            data: s.data.iter().map(|x| if x.is_zero() { x.clone() } else { x * &c }).collect(),
        }
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        if self.order != rhs.order {
            let (a, b) = self.aligned(rhs);
            return a.try_mul(&b);
        }
        let mut out = Self::zeros(self.rows, rhs.cols, self.order);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * rhs.cols + j;
                    out.data[idx] = &out.data[idx] + &(a * b);
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u64) -> Self {
        assert!(self.is_square());
        let mut acc = Self::identity(self.rows, self.order);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    /// Kronecker product `self (x) rhs`.
    pub fn kron(&self, rhs: &Self) -> Self {
        let (a, b) = self.aligned(rhs);
        Self::from_fn(a.rows * b.rows, a.cols * b.cols, a.order, |i, j| {
            let x = a.get(i / b.rows, j / b.cols);
            if x.is_zero() {
                return x.clone();
            }
            x * b.get(i % b.rows, j % b.cols)
        })
    }

    pub fn block_diag(blocks: &[CycloMatrix]) -> Self {
        let order = blocks.iter().fold(1, |m, b| super::lcm(m, b.order));
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols, order);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(r0 + i, c0 + j, b.get(i, j).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Concatenates columns of matrices with equal row counts.
    pub fn hstack(parts: &[CycloMatrix]) -> Self {
        let order = parts.iter().fold(1, |m, b| super::lcm(m, b.order));
        let rows = parts.first().map_or(0, |p| p.rows);
        let cols: usize = parts.iter().map(|p| p.cols).sum();
        let mut out = Self::zeros(rows, cols, order);
        let mut c0 = 0;
        for p in parts {
            assert_eq!(p.rows, rows, "hstack row mismatch");
            for i in 0..rows {
                for j in 0..p.cols {
                    out.set(i, c0 + j, p.get(i, j).clone());
                }
            }
            c0 += p.cols;
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<Cyclotomic> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        Self::from_fn(self.rows, cols.len(), self.order, |i, j| self.get(i, cols[j]).clone())
    }

    pub fn from_columns(order: u64, rows: usize, columns: &[Vec<Cyclotomic>]) -> Self {
        Self::from_fn(rows, columns.len(), order, |i, j| columns[j][i].clone())
    }

    /// Row-major entries as a single vector.
    pub fn flatten(&self) -> Vec<Cyclotomic> {
        self.data.clone()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|c| c.is_zero())
    }

    /// `Some(c)` when the matrix equals `c * I`.
    pub fn as_scalar(&self) -> Option<Cyclotomic> {
        if !self.is_square() || self.rows == 0 {
            return None;
        }
        let c = self.get(0, 0).clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let x = self.get(i, j);
                let ok = if i == j { *x == c } else { x.is_zero() };
                if !ok {
                    return None;
                }
            }
        }
        Some(c)
    }

    /// Exactly one nonzero entry in every row and column.
    pub fn is_monomial(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        let mut col_count = vec![0usize; self.cols];
        for i in 0..self.rows {
            let mut row_count = 0;
            for j in 0..self.cols {
                if !self.get(i, j).is_zero() {
                    row_count += 1;
                    col_count[j] += 1;
                }
            }
            if row_count != 1 {
                return false;
            }
        }
        col_count.iter().all(|&c| c == 1)
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.row_vectors();
        eliminate(&mut rows, self.cols, false).len()
    }

    /// Basis of the right kernel `{v : A v = 0}`, returned as columns.
    pub fn kernel(&self) -> CycloMatrix {
        let mut rows = self.row_vectors();
        let pivots = eliminate(&mut rows, self.cols, true);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![Cyclotomic::zero(self.order); self.cols];
            v[f] = Cyclotomic::one(self.order);
            for (r, &p) in pivots.iter().enumerate() {
                let x = &rows[r][f];
                if !x.is_zero() {
                    v[p] = -x;
                }
            }
            basis.push(v);
        }
        CycloMatrix::from_columns(self.order, self.cols, &basis)
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let aug = CycloMatrix::hstack(&[self.clone(), CycloMatrix::identity(n, self.order)]);
        let mut rows = aug.row_vectors();
        let pivots = eliminate(&mut rows, n, true);
        if pivots.len() < n {
            return Err(Error::ZeroInversion);
        }
        Ok(Self::from_fn(n, n, self.order, |i, j| rows[i][n + j].clone()))
    }

    /// Dimension of the span of a family of matrices of equal shape.
    pub fn span_rank(family: &[CycloMatrix]) -> usize {
        if family.is_empty() {
            return 0;
        }
        let order = family.iter().fold(1, |m, b| super::lcm(m, b.order));
        let width = family[0].rows * family[0].cols;
        let mut rows: Vec<Vec<Cyclotomic>> = family.iter().map(|m| m.lift(order).unwrap().flatten()).collect();
        eliminate(&mut rows, width, false).len()
    }

    fn row_vectors(&self) -> Vec<Vec<Cyclotomic>> {
        (0..self.rows).map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec()).collect()
    }
}

/// Simultaneous eigenspaces of commuting matrices with `m_i^{n_i} = 1`.
///
/// Each space is labelled by exponents `k_i`, the eigenvalue of `m_i` being
/// `zeta_{n_i}^{k_i}`; bases are returned as columns.
pub fn joint_eigenspaces(mats: &[CycloMatrix], orders: &[u64]) -> Result<Vec<(Vec<u64>, CycloMatrix)>> {
    let dim = mats.first().map_or(1, |m| m.rows);
    let order = mats.iter().zip(orders).fold(1, |acc, (m, &n)| super::lcm(super::lcm(acc, m.order), n));
    let mut spaces: Vec<(Vec<u64>, CycloMatrix)> = vec![(vec![], CycloMatrix::identity(dim, order))];
    for (m, &n) in mats.iter().zip(orders) {
        let m = m.lift(order)?;
        let mut next = Vec::new();
        for (label, u) in &spaces {
            for k in 0..n {
                let lambda = Cyclotomic::zeta_pow(n, k as i64).lift(order)?;
                let shifted = &m - &CycloMatrix::scalar(dim, &lambda);
                let ker = shifted.try_mul(u)?.kernel();
                if ker.cols() > 0 {
                    let mut l = label.clone();
                    l.push(k);
                    next.push((l, u.try_mul(&ker)?));
                }
            }
        }
        if next.iter().map(|(_, u)| u.cols).sum::<usize>() != dim {
            return Err(Error::InternalInvariantViolation("matrices are not simultaneously diagonalisable".into()));
        }
        spaces = next;
    }
    Ok(spaces)
}

/// Gaussian elimination over the first `ncols` columns, in place.
///
/// Returns the pivot columns; the first `pivots.len()` rows are the reduced
/// nonzero rows with unit pivots. With `full` the pivot columns are cleared
/// above as well (reduced row echelon form).
fn eliminate(rows: &mut Vec<Vec<Cyclotomic>>, ncols: usize, full: bool) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("pivot is nonzero");
        if !inv.is_one() {
            for x in rows[r].iter_mut() {
                if !x.is_zero() {
                    *x = &*x * &inv;
                }
            }
        }
        let support: Vec<usize> = (0..rows[r].len()).filter(|&j| !rows[r][j].is_zero()).collect();
        let pivot_row = rows[r].clone();
        let start = if full { 0 } else { r + 1 };
        for i in start..rows.len() {
            if i == r || rows[i][c].is_zero() {
                continue;
            }
            let f = rows[i][c].clone();
            for &j in &support {
                let t = &f * &pivot_row[j];
                rows[i][j] = &rows[i][j] - &t;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

impl Mul for &CycloMatrix {
    type Output = CycloMatrix;

    fn mul(self, rhs: &CycloMatrix) -> CycloMatrix {
        self.try_mul(rhs).expect("matrix dimensions")
    }
}

impl Add for &CycloMatrix {
    type Output = CycloMatrix;

    fn add(self, rhs: &CycloMatrix) -> CycloMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix dimensions");
        let (a, b) = self.aligned(rhs);
        CycloMatrix {
            rows: a.rows,
            cols: a.cols,
            order: a.order,
            data: a.data.iter().zip(&b.data).map(|(x, y)| x + y).collect(),
        }
    }
}

impl Sub for &CycloMatrix {
    type Output = CycloMatrix;

    fn sub(self, rhs: &CycloMatrix) -> CycloMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix dimensions");
        let (a, b) = self.aligned(rhs);
        CycloMatrix {
            rows: a.rows,
            cols: a.cols,
            order: a.order,
            data: a.data.iter().zip(&b.data).map(|(x, y)| x - y).collect(),
        }
    }
}

impl fmt::Debug for CycloMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CycloMatrix {}x{} over Q(z{}):", self.rows, self.cols, self.order)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

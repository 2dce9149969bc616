//! Smith normal form over the integers with unimodular transforms.
//!
//! Matrices act on row vectors: a relation matrix `A` (one relation per
//! row) presents the group `Z^n / rowspace(A)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

pub(crate) type IntMatrix = Vec<Vec<BigInt>>;

/// `P * A * Q = diag(d)` with `P`, `Q` unimodular and `d_1 | d_2 | ...`.
#[derive(Clone, Debug)]
pub(crate) struct Snf {
    pub diag: Vec<BigInt>,
    pub p: IntMatrix,
    pub q: IntMatrix,
    pub q_inv: IntMatrix,
}

impl Snf {
    pub fn rank(&self) -> usize {
        self.diag.iter().take_while(|d| !d.is_zero()).count()
    }
}

pub(crate) fn to_big(rows: &[Vec<i64>]) -> IntMatrix {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

pub(crate) fn to_i64(x: &BigInt) -> Result<i64> {
    x.to_i64().ok_or_else(|| Error::InternalInvariantViolation(format!("integer {x} overflows i64")))
}

fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

pub(crate) fn smith(a: &IntMatrix, ncols: usize) -> Snf {
    let m = a.len();
    let n = ncols;
    let mut a = a.clone();
    let mut p = identity(m);
    let mut q = identity(n);
    let mut q_inv = identity(n);

    let swap_cols = |a: &mut IntMatrix, q: &mut IntMatrix, q_inv: &mut IntMatrix, s: usize, t: usize| {
        if s == t {
            return;
        }
        for row in a.iter_mut() {
            row.swap(s, t);
        }
        for row in q.iter_mut() {
            row.swap(s, t);
        }
        q_inv.swap(s, t);
    };
    // col_j -= f * col_t
    let col_op = |a: &mut IntMatrix, q: &mut IntMatrix, q_inv: &mut IntMatrix, j: usize, t: usize, f: &BigInt| {
        for row in a.iter_mut() {
            let v = &row[t] * f;
            row[j] -= v;
        }
        for row in q.iter_mut() {
            let v = &row[t] * f;
            row[j] -= v;
        }
        let add: Vec<BigInt> = q_inv[j].iter().map(|x| x * f).collect();
        for (x, y) in q_inv[t].iter_mut().zip(add) {
            *x += y;
        }
    };
    // row_i -= f * row_t
    let row_op = |a: &mut IntMatrix, p: &mut IntMatrix, i: usize, t: usize, f: &BigInt| {
        let sub: Vec<BigInt> = a[t].iter().map(|x| x * f).collect();
        for (x, y) in a[i].iter_mut().zip(sub) {
            *x -= y;
        }
        let sub: Vec<BigInt> = p[t].iter().map(|x| x * f).collect();
        for (x, y) in p[i].iter_mut().zip(sub) {
            *x -= y;
        }
    };

    let steps = m.min(n);
    for t in 0..steps {
        loop {
            // smallest nonzero entry of the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if a[i][j].is_zero() {
                        continue;
                    }
                    if best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                break;
            };
            a.swap(t, bi);
            p.swap(t, bi);
            swap_cols(&mut a, &mut q, &mut q_inv, t, bj);

            let mut clean = true;
            for i in t + 1..m {
                if a[i][t].is_zero() {
                    continue;
                }
                let f = a[i][t].div_floor(&a[t][t]);
                row_op(&mut a, &mut p, i, t, &f);
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                if a[t][j].is_zero() {
                    continue;
                }
                let f = a[t][j].div_floor(&a[t][t]);
                col_op(&mut a, &mut q, &mut q_inv, j, t, &f);
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility condition on the trailing block
            let pivot = a[t][t].clone();
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !(&a[i][j] % &pivot).is_zero()));
            match bad {
                Some(i) => {
                    // row_t += row_i
                    let f = -BigInt::one();
                    row_op(&mut a, &mut p, t, i, &f);
                }
                None => break,
            }
        }
        if a.get(t).map_or(false, |r| r[t].is_negative()) {
            for x in a[t].iter_mut() {
                *x = -&*x;
            }
            for x in p[t].iter_mut() {
                *x = -&*x;
            }
        }
    }
    let diag = (0..steps).map(|i| a[i][i].clone()).collect();
    Snf { diag, p, q, q_inv }
}

/// Integer kernel `{z : z * A = 0}` of a row-action matrix, as a basis of rows.
pub(crate) fn left_kernel(a: &IntMatrix, ncols: usize) -> IntMatrix {
    let snf = smith(a, ncols);
    let r = snf.rank();
    snf.p[r..].to_vec()
}

/// Solve `z * A = x` over the integers.
pub(crate) fn solve_left(a: &IntMatrix, ncols: usize, x: &[BigInt]) -> Option<Vec<BigInt>> {
    let snf = smith(a, ncols);
    let m = a.len();
    // y = x * Q
    let y: Vec<BigInt> = (0..ncols)
        .map(|j| (0..ncols).fold(BigInt::zero(), |acc, k| acc + &x[k] * &snf.q[k][j]))
        .collect();
    let r = snf.rank();
    let mut u = vec![BigInt::zero(); m];
    for j in 0..ncols {
        if j < r {
            let (quo, rem) = y[j].div_rem(&snf.diag[j]);
            if !rem.is_zero() {
                return None;
            }
            u[j] = quo;
        } else if !y[j].is_zero() {
            return None;
        }
    }
    // z = u * P
    Some(
        (0..m)
            .map(|j| (0..m).fold(BigInt::zero(), |acc, k| acc + &u[k] * &snf.p[k][j]))
            .collect(),
    )
}

pub(crate) fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

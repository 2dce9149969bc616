//! Dense univariate polynomials over `Q`, lowest degree first.

use num_rational::BigRational;
use num_traits::{One, Zero};

pub(crate) type Poly = Vec<BigRational>;

pub(crate) fn trim(p: &mut Poly) {
    while p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
}

pub(crate) fn degree(p: &Poly) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub(crate) fn sub(a: &Poly, b: &Poly) -> Poly {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
        let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
        out.push(x - y);
    }
    trim(&mut out);
    out
}

pub(crate) fn mul(a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

/// Euclidean division `a = q * b + r`; `b` must be nonzero.
pub(crate) fn divrem(a: &Poly, b: &Poly) -> (Poly, Poly) {
    let db = degree(b).expect("division by the zero polynomial");
    let lead = b[db].clone();
    let mut r = a.clone();
    trim(&mut r);
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = &r[dr] / &lead;
        let shift = dr - db;
        for (j, bj) in b.iter().enumerate().take(db + 1) {
            if !bj.is_zero() {
                r[shift + j] -= &c * bj;
            }
        }
        q[shift] = c;
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

/// Inverse of `a` modulo `m`, assuming `gcd(a, m) = 1`.
pub(crate) fn inverse_mod(a: &Poly, m: &Poly) -> Option<Poly> {
    // extended Euclid on (m, a) tracking only the coefficient of a
    let (mut r0, mut r1) = (m.clone(), a.clone());
    trim(&mut r1);
    let (mut t0, mut t1): (Poly, Poly) = (Vec::new(), vec![BigRational::one()]);
    while degree(&r1).is_some() {
        let (q, r) = divrem(&r0, &r1);
        let t2 = sub(&t0, &mul(&q, &t1));
        r0 = r1;
        r1 = r;
        t0 = t1;
        t1 = t2;
    }
    // r0 is the gcd; must be a nonzero constant
    match degree(&r0) {
        Some(0) => {
            let c = r0[0].clone();
            let mut inv: Poly = t0.into_iter().map(|x| x / &c).collect();
            let (_, rem) = divrem(&inv, m);
            inv = rem;
            Some(inv)
        }
        _ => None,
    }
}

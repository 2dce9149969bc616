use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::poly;
use super::rational;
use super::RootOfUnity;
use crate::{Error, Result};

pub fn euler_phi(n: u64) -> u64 {
    assert!(n > 0);
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

fn phi_cache() -> &'static RwLock<HashMap<u64, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<RwLock<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Integer coefficients of the `n`-th cyclotomic polynomial, lowest degree
/// first. Monic of degree `euler_phi(n)`.
pub fn cyclotomic_polynomial(n: u64) -> Arc<Vec<i64>> {
    assert!(n > 0);
    if let Some(p) = phi_cache().read().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by Phi_d for every proper divisor d
    let mut num: Vec<i64> = vec![0; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            let den = cyclotomic_polynomial(d);
            num = exact_int_div(&num, &den);
        }
    }
    let arc = Arc::new(num);
    phi_cache().write().unwrap().insert(n, arc.clone());
    arc
}

fn exact_int_div(a: &[i64], b: &[i64]) -> Vec<i64> {
    // b monic
    let db = b.len() - 1;
    let mut r = a.to_vec();
    let mut q = vec![0i64; a.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db];
        q[k] = c;
        if c != 0 {
            for (j, bj) in b.iter().enumerate() {
                r[k + j] -= c * bj;
            }
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0), "inexact cyclotomic division");
    q
}

/// An element of `Q(zeta_N)` stored as its residue modulo `Phi_N`.
///
/// The coefficient vector always has length `euler_phi(N)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cyclotomic {
    order: u64,
    coeffs: Vec<BigRational>,
}

impl Cyclotomic {
    pub fn zero(order: u64) -> Self {
        let d = euler_phi(order) as usize;
        Cyclotomic { order, coeffs: vec![BigRational::zero(); d] }
    }

    pub fn one(order: u64) -> Self {
        Self::from_rational(order, BigRational::one())
    }

    pub fn from_rational(order: u64, q: BigRational) -> Self {
        let mut c = Self::zero(order);
        c.coeffs[0] = q;
        c
    }

    pub fn from_int(order: u64, n: i64) -> Self {
        Self::from_rational(order, BigRational::from_integer(BigInt::from(n)))
    }

    /// `zeta_N^k` for any integer `k`.
    pub fn zeta_pow(order: u64, k: i64) -> Self {
        let e = k.rem_euclid(order as i64) as usize;
        let mut p = vec![BigRational::zero(); e + 1];
        p[e] = BigRational::one();
        Self::reduce(order, p)
    }

    /// Builds from an arbitrary polynomial in `zeta_N`, reducing it.
    pub fn from_poly(order: u64, p: Vec<BigRational>) -> Self {
        Self::reduce(order, p)
    }

    /// Builds from canonical coefficients; length must be `euler_phi(order)`.
    pub fn from_coeffs(order: u64, coeffs: Vec<BigRational>) -> Result<Self> {
        if order == 0 || coeffs.len() != euler_phi(order) as usize {
            return Err(Error::DimensionMismatch(format!(
                "Q(zeta_{order}) needs {} coefficients, got {}",
                if order == 0 { 0 } else { euler_phi(order) },
                coeffs.len()
            )));
        }
        Ok(Cyclotomic { order, coeffs })
    }

    fn reduce(order: u64, mut p: Vec<BigRational>) -> Self {
        let phi = cyclotomic_polynomial(order);
        let d = phi.len() - 1;
        let mut k = p.len();
        while k > d {
            k -= 1;
            let c = std::mem::take(&mut p[k]);
            if c.is_zero() {
                continue;
            }
            let shift = k - d;
            for (j, &pj) in phi.iter().enumerate().take(d) {
                if pj != 0 {
                    p[shift + j] -= &c * BigInt::from(pj);
                }
            }
        }
        p.resize(d, BigRational::zero());
        Cyclotomic { order, coeffs: p }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// The rational value if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    /// Re-express in `Q(zeta_m)`; requires `N | m`.
    pub fn lift(&self, m: u64) -> Result<Self> {
        if m == 0 || m % self.order != 0 {
            return Err(Error::IncompatibleOrder { from: self.order, to: m });
        }
        if m == self.order {
            return Ok(self.clone());
        }
        let step = (m / self.order) as usize;
        let mut p = vec![BigRational::zero(); (self.coeffs.len() - 1) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            p[i * step] = c.clone();
        }
        Ok(Self::reduce(m, p))
    }

    fn common(a: &Self, b: &Self) -> (Self, Self) {
        let m = super::lcm(a.order, b.order);
        (a.lift(m).unwrap(), b.lift(m).unwrap())
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroInversion);
        }
        if let Some(q) = self.as_rational() {
            return Ok(Self::from_rational(self.order, q.recip()));
        }
        let modulus: Vec<BigRational> = cyclotomic_polynomial(self.order)
            .iter()
            .map(|&c| BigRational::from_integer(BigInt::from(c)))
            .collect();
        let inv = poly::inverse_mod(&self.coeffs, &modulus)
            .ok_or_else(|| Error::InternalInvariantViolation("cyclotomic modulus not irreducible".into()))?;
        Ok(Self::reduce(self.order, inv))
    }

    pub fn pow(&self, k: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.order);
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

    pub fn scale(&self, q: &BigRational) -> Self {
        Cyclotomic { order: self.order, coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    /// `Some(w)` when the value is a root of unity; these are `+-zeta_N^k`.
    pub fn as_root_of_unity(&self) -> Option<RootOfUnity> {
        let l = super::lcm(2, self.order);
        let c = self.lift(l).ok()?;
        (0..l).map(|k| RootOfUnity::new(l, k as i64)).find(|w| Self::zeta_pow(l, w.exp() as i64) == c).map(|w| w.reduced())
    }

    /// Multiplication by `zeta_N^k`, cheaper than a general product.
    pub fn mul_zeta_pow(&self, k: i64) -> Self {
        let e = k.rem_euclid(self.order as i64) as usize;
        if e == 0 {
            return self.clone();
        }
        let mut p = vec![BigRational::zero(); e];
        p.extend(self.coeffs.iter().cloned());
        Self::reduce(self.order, p)
    }

    fn mul_same(&self, rhs: &Self) -> Self {
        if let Some(q) = rhs.as_rational() {
            return self.scale(q);
        }
        if let Some(q) = self.as_rational() {
            return rhs.scale(q);
        }
        Self::reduce(self.order, poly::mul(&self.coeffs, &rhs.coeffs))
    }
}

impl<'a> Add<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;

    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        if self.order != rhs.order {
            let (a, b) = Cyclotomic::common(self, rhs);
            return &a + &b;
        }
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;

    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        if self.order != rhs.order {
            let (a, b) = Cyclotomic::common(self, rhs);
            return &a - &b;
        }
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<'a> Mul<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;

    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        if self.order != rhs.order {
            let (a, b) = Cyclotomic::common(self, rhs);
            return a.mul_same(&b);
        }
        self.mul_same(rhs)
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;

    fn neg(self) -> Cyclotomic {
        Cyclotomic { order: self.order, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Add for Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: Cyclotomic) -> Cyclotomic {
        &self + &rhs
    }
}

impl Sub for Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: Cyclotomic) -> Cyclotomic {
        &self - &rhs
    }
}

impl Mul for Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: Cyclotomic) -> Cyclotomic {
        &self * &rhs
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            terms.push(match i {
                0 => format!("{c}"),
                1 => format!("{c}*z{}", self.order),
                _ => format!("{c}*z{}^{i}", self.order),
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CyclotomicRepr {
    order: u64,
    coeffs: Vec<String>,
}

impl Serialize for Cyclotomic {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CyclotomicRepr { order: self.order, coeffs: self.coeffs.iter().map(rational::to_string).collect() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cyclotomic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = CyclotomicRepr::deserialize(d)?;
        let coeffs = repr
            .coeffs
            .iter()
            .map(|s| rational::parse(s))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(serde::de::Error::custom)?;
        Cyclotomic::from_coeffs(repr.order, coeffs).map_err(serde::de::Error::custom)
    }
}

//! Exact arithmetic: rationals, roots of unity in exponent form and the
//! cyclotomic fields `Q(zeta_N)`.

mod cyclotomic;
mod matrix;
mod poly;
pub mod rational;

pub use cyclotomic::{cyclotomic_polynomial, euler_phi, Cyclotomic};
pub use matrix::{joint_eigenspaces, CycloMatrix};
pub use num_bigint::BigInt;
pub use num_rational::BigRational;

use std::fmt;
use std::ops::Mul;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// An abstract `N`-th root of unity `zeta_N^exp`.
///
/// Equality is equality of the abstract values: `zeta_2^1 == zeta_4^2`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct RootOfUnity {
    order: u64,
    exp: u64,
}

impl RootOfUnity {
    pub fn new(order: u64, exp: i64) -> Self {
        assert!(order > 0, "root of unity order must be positive");
        RootOfUnity { order, exp: exp.rem_euclid(order as i64) as u64 }
    }

    pub fn one() -> Self {
        RootOfUnity { order: 1, exp: 0 }
    }

    /// `-1` as a square root of unity.
    pub fn minus_one() -> Self {
        RootOfUnity { order: 2, exp: 1 }
    }

    /// The primitive generator `zeta_N`.
    pub fn primitive(order: u64) -> Self {
        RootOfUnity::new(order, 1)
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn exp(&self) -> u64 {
        self.exp
    }

    /// Multiplicative order of the value itself.
    pub fn value_order(&self) -> u64 {
        self.order / gcd(self.order, self.exp)
    }

    pub fn is_one(&self) -> bool {
        self.exp == 0
    }

    /// Re-express the value as a power of `zeta_m`.
    pub fn lift_order(&self, m: u64) -> Result<Self> {
        if m == 0 || m % self.order != 0 {
            return Err(Error::IncompatibleOrder { from: self.order, to: m });
        }
        Ok(RootOfUnity { order: m, exp: self.exp * (m / self.order) })
    }

    /// Smallest-order representative of the same value.
    pub fn reduced(&self) -> Self {
        let g = gcd(self.order, self.exp);
        RootOfUnity { order: self.order / g, exp: self.exp / g }
    }

    pub fn inv(&self) -> Self {
        RootOfUnity { order: self.order, exp: (self.order - self.exp) % self.order }
    }

    pub fn pow(&self, k: i64) -> Self {
        let e = (self.exp as i128 * k as i128).rem_euclid(self.order as i128);
        RootOfUnity { order: self.order, exp: e as u64 }
    }

    pub fn to_cyclotomic(&self, order: u64) -> Result<Cyclotomic> {
        let lifted = self.lift_order(order)?;
        Ok(Cyclotomic::zeta_pow(order, lifted.exp as i64))
    }
}

impl PartialEq for RootOfUnity {
    fn eq(&self, other: &Self) -> bool {
        let r1 = self.reduced();
        let r2 = other.reduced();
        r1.order == r2.order && r1.exp == r2.exp
    }
}

impl Eq for RootOfUnity {}

impl std::hash::Hash for RootOfUnity {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        let r = self.reduced();
        r.order.hash(state);
        r.exp.hash(state);
    }
}

impl Mul for RootOfUnity {
    type Output = RootOfUnity;

    fn mul(self, rhs: RootOfUnity) -> RootOfUnity {
        if self.order == rhs.order {
            return RootOfUnity { order: self.order, exp: (self.exp + rhs.exp) % self.order };
        }
        let m = lcm(self.order, rhs.order);
        let a = self.exp * (m / self.order);
        let b = rhs.exp * (m / rhs.order);
        RootOfUnity { order: m, exp: (a + b) % m }
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "z{}^{}", self.order, self.exp)
    }
}

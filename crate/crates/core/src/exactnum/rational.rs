//! String encoding of rationals as `"p/q"`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub fn to_string(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn parse(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|e| format!("bad numerator {n:?}: {e}"))?;
    let d: BigInt = d.parse().map_err(|e| format!("bad denominator {d:?}: {e}"))?;
    if d.is_zero() {
        return Err("zero denominator".into());
    }
    Ok(BigRational::new(n, d))
}

pub fn from_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn one() -> BigRational {
    BigRational::one()
}

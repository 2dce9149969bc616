//! Finite abelian groups in invariant-factor form, their elements,
//! characters, homomorphisms and subgroups.
//!
//! A group is stored as `Z/n_1 x ... x Z/n_r` with `n_{i+1} | n_i`.
//! Elements are enumerated with the first coordinate varying fastest, so
//! the canonical generator `g_1` precedes `g_2`; every deterministic
//! tie-break in the crate uses this order.

mod hom;
mod snf;
mod subgroup;

pub use hom::GroupHom;
pub use subgroup::{Quotient, Subgroup};

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::exactnum::RootOfUnity;
use crate::{Error, Result};

pub(crate) use snf::{gcd_u64, left_kernel, smith, solve_left, to_big, to_i64};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteAbelianGroup {
    factors: Arc<[u64]>,
}

/// Result of canonicalizing a presentation `Z^m / relations`.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub group: FiniteAbelianGroup,
    /// Image of each presented generator, in canonical coordinates.
    pub to_canonical: Vec<Vec<u64>>,
    /// Each canonical generator as an integer combination of presented ones.
    pub from_canonical: Vec<Vec<i64>>,
}

/// Canonicalizes the abelian group generated by `ngens` symbols subject to
/// the given relations (one integer row per relation).
pub fn smith_normal_form(relations: &[Vec<i64>], ngens: usize) -> Result<Presentation> {
    if relations.iter().any(|r| r.len() != ngens) {
        return Err(Error::DimensionMismatch("relation length differs from generator count".into()));
    }
    if let Some(p) = already_canonical(relations, ngens) {
        return Ok(p);
    }
    let a = to_big(relations);
    let s = smith(&a, ngens);
    let rank = s.rank();
    if rank < ngens {
        return Err(Error::InfiniteGroup(ngens - rank));
    }
    // canonical slots: nontrivial diagonal entries, largest first
    let slots: Vec<usize> = (0..ngens).rev().filter(|&i| s.diag[i] != BigInt::from(1)).collect();
    let factors: Vec<u64> = slots
        .iter()
        .map(|&i| to_i64(&s.diag[i]).map(|d| d as u64))
        .collect::<Result<_>>()?;
    let group = FiniteAbelianGroup::new(factors.clone())?;
    let to_canonical = (0..ngens)
        .map(|g| {
            slots
                .iter()
                .zip(&factors)
                .map(|(&i, &n)| {
                    let v = s.q[g][i].mod_floor(&BigInt::from(n));
                    to_i64(&v).map(|x| x as u64)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let from_canonical = slots
        .iter()
        .map(|&i| s.q_inv[i].iter().map(to_i64).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    Ok(Presentation { group, to_canonical, from_canonical })
}

fn already_canonical(relations: &[Vec<i64>], ngens: usize) -> Option<Presentation> {
    if relations.len() != ngens {
        return None;
    }
    let mut factors = Vec::with_capacity(ngens);
    for (i, row) in relations.iter().enumerate() {
        if row.iter().enumerate().any(|(j, &x)| j != i && x != 0) || row[i] < 2 {
            return None;
        }
        factors.push(row[i] as u64);
    }
    let group = FiniteAbelianGroup::new(factors).ok()?;
    let id: Vec<Vec<u64>> = (0..ngens).map(|i| (0..ngens).map(|j| (i == j) as u64).collect()).collect();
    let id_i: Vec<Vec<i64>> = id.iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect();
    Some(Presentation { group, to_canonical: id, from_canonical: id_i })
}

impl FiniteAbelianGroup {
    /// Validates the divisibility chain `n_{i+1} | n_i`, all `n_i >= 2`.
    pub fn new(factors: Vec<u64>) -> Result<Self> {
        if factors.iter().any(|&n| n < 2) {
            return Err(Error::InvalidGroup(format!("invariant factors must be >= 2: {factors:?}")));
        }
        if factors.windows(2).any(|w| w[0] % w[1] != 0) {
            return Err(Error::InvalidGroup(format!("invariant factors must form a chain n_(i+1) | n_i: {factors:?}")));
        }
        Ok(FiniteAbelianGroup { factors: factors.into() })
    }

    /// Canonical form of `Z/c_1 x ... x Z/c_k` for arbitrary positive `c_i`.
    pub fn from_cyclic_orders(orders: &[u64]) -> Result<Self> {
        if orders.iter().any(|&c| c == 0) {
            return Err(Error::InfiniteGroup(orders.iter().filter(|&&c| c == 0).count()));
        }
        let rel: Vec<Vec<i64>> = (0..orders.len())
            .map(|i| (0..orders.len()).map(|j| if i == j { orders[i] as i64 } else { 0 }).collect())
            .collect();
        Ok(smith_normal_form(&rel, orders.len())?.group)
    }

    pub fn trivial() -> Self {
        FiniteAbelianGroup { factors: Arc::from(Vec::new()) }
    }

    pub fn cyclic(n: u64) -> Self {
        if n <= 1 {
            Self::trivial()
        } else {
            FiniteAbelianGroup { factors: Arc::from(vec![n]) }
        }
    }

    /// `(Z/n)^r`.
    pub fn elementary(n: u64, r: usize) -> Self {
        if n <= 1 {
            Self::trivial()
        } else {
            FiniteAbelianGroup { factors: Arc::from(vec![n; r]) }
        }
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }

    pub fn exponent(&self) -> u64 {
        self.factors.first().copied().unwrap_or(1)
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    /// The character group; it has the same invariant factors.
    pub fn dual_group(&self) -> Self {
        self.clone()
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement { group: self.clone(), coords: vec![0; self.rank()] }
    }

    pub fn generator(&self, i: usize) -> GroupElement {
        let mut coords = vec![0; self.rank()];
        coords[i] = 1;
        GroupElement { group: self.clone(), coords }
    }

    pub fn generators(&self) -> Vec<GroupElement> {
        (0..self.rank()).map(|i| self.generator(i)).collect()
    }

    /// Element with the given coordinates, reduced mod `n_i`.
    pub fn element(&self, coords: &[i64]) -> Result<GroupElement> {
        if coords.len() != self.rank() {
            return Err(Error::DimensionMismatch(format!(
                "element of {self} needs {} coordinates, got {}",
                self.rank(),
                coords.len()
            )));
        }
        let coords = coords.iter().zip(self.factors.iter()).map(|(&c, &n)| c.rem_euclid(n as i64) as u64).collect();
        Ok(GroupElement { group: self.clone(), coords })
    }

    pub(crate) fn element_unchecked(&self, coords: Vec<u64>) -> GroupElement {
        debug_assert_eq!(coords.len(), self.rank());
        GroupElement { group: self.clone(), coords }
    }

    /// Element number `index` in enumeration order (first coordinate fastest).
    pub fn element_at(&self, index: u64) -> GroupElement {
        let mut rest = index;
        let coords = self
            .factors
            .iter()
            .map(|&n| {
                let c = rest % n;
                rest /= n;
                c
            })
            .collect();
        GroupElement { group: self.clone(), coords }
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order()).map(move |i| self.element_at(i))
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> GroupElement {
        let coords = self.factors.iter().map(|&n| rng.gen_range(0..n)).collect();
        GroupElement { group: self.clone(), coords }
    }

    pub fn trivial_character(&self) -> DualElement {
        DualElement { group: self.clone(), coords: vec![0; self.rank()] }
    }

    /// Character dual to the `i`-th canonical generator: `g_j -> zeta_{n_i}^{delta_ij}`.
    pub fn dual_generator(&self, i: usize) -> DualElement {
        let mut coords = vec![0; self.rank()];
        coords[i] = 1;
        DualElement { group: self.clone(), coords }
    }

    pub fn character(&self, coords: &[i64]) -> Result<DualElement> {
        let e = self.element(coords)?;
        Ok(DualElement { group: self.clone(), coords: e.coords })
    }

    pub fn characters(&self) -> impl Iterator<Item = DualElement> + '_ {
        self.elements().map(|e| DualElement { group: e.group, coords: e.coords })
    }

    /// Every canonical group of order exactly `n`.
    pub fn all_of_order(n: u64) -> Vec<FiniteAbelianGroup> {
        fn rec(remaining: u64, max: u64, prefix: &mut Vec<u64>, out: &mut Vec<FiniteAbelianGroup>) {
            if remaining == 1 {
                out.push(FiniteAbelianGroup { factors: Arc::from(prefix.clone()) });
                return;
            }
            // the next factor must divide the previous one and the remaining order
            for f in (2..=remaining.min(max)).rev() {
                if remaining % f == 0 && max % f == 0 {
                    prefix.push(f);
                    rec(remaining / f, f, prefix, out);
                    prefix.pop();
                }
            }
        }
        let mut out = Vec::new();
        if n == 0 {
            return out;
        }
        rec(n, n, &mut Vec::new(), &mut out);
        // the remaining order must be absorbable by the chain: filter invalid tails
        out.retain(|g| g.order() == n);
        out
    }

    pub fn all_up_to_order(n: u64) -> Vec<FiniteAbelianGroup> {
        (1..=n).flat_map(Self::all_of_order).collect()
    }

    pub(crate) fn check_same(&self, other: &FiniteAbelianGroup) -> Result<()> {
        if self != other {
            return Err(Error::ParentMismatch(self.to_string(), other.to_string()));
        }
        Ok(())
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "trivial");
        }
        let parts: Vec<String> = self.factors.iter().map(|n| format!("Z/{n}")).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

impl fmt::Debug for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Group{:?}", &*self.factors)
    }
}

#[derive(Serialize, Deserialize)]
struct GroupRepr {
    factors: Vec<u64>,
}

impl Serialize for FiniteAbelianGroup {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GroupRepr { factors: self.factors.to_vec() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteAbelianGroup {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = GroupRepr::deserialize(d)?;
        FiniteAbelianGroup::new(r.factors).map_err(serde::de::Error::custom)
    }
}

/// An element of a finite abelian group.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    group: FiniteAbelianGroup,
    coords: Vec<u64>,
}

impl GroupElement {
    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn order(&self) -> u64 {
        self.coords
            .iter()
            .zip(self.group.factors.iter())
            .fold(1, |acc, (&c, &n)| num_integer::lcm(acc, n / gcd_u64(c, n)))
    }

    /// Position in the enumeration order.
    pub fn index(&self) -> u64 {
        let mut idx = 0;
        for (&c, &n) in self.coords.iter().zip(self.group.factors.iter()).rev() {
            idx = idx * n + c;
        }
        idx
    }

    pub fn add(&self, other: &GroupElement) -> Result<GroupElement> {
        self.group.check_same(&other.group)?;
        Ok(self.add_unchecked(other))
    }

    pub(crate) fn add_unchecked(&self, other: &GroupElement) -> GroupElement {
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .zip(self.group.factors.iter())
            .map(|((&a, &b), &n)| (a + b) % n)
            .collect();
        GroupElement { group: self.group.clone(), coords }
    }

    pub fn neg(&self) -> GroupElement {
        self.scale(-1)
    }

    pub fn sub(&self, other: &GroupElement) -> Result<GroupElement> {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: i64) -> GroupElement {
        let coords = self
            .coords
            .iter()
            .zip(self.group.factors.iter())
            .map(|(&c, &n)| ((c as i128 * k as i128).rem_euclid(n as i128)) as u64)
            .collect();
        GroupElement { group: self.group.clone(), coords }
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coords)
    }
}

impl Serialize for GroupElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            coords: &'a [u64],
        }
        Repr { coords: &self.coords }.serialize(s)
    }
}

/// Coordinates of an element without its parent: `{"coords": [...]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ElementRepr {
    pub coords: Vec<i64>,
}

/// A character `x -> zeta_{n_1}^{sum_i c_i x_i n_1/n_i}` of a finite
/// abelian group. The canonical generators fix the duality once for the
/// whole crate.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DualElement {
    group: FiniteAbelianGroup,
    coords: Vec<u64>,
}

impl DualElement {
    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn is_trivial(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn order(&self) -> u64 {
        self.group.element_unchecked(self.coords.clone()).order()
    }

    /// Exponent `a` with `chi(x) = zeta_{n_1}^a`, `n_1` the group exponent.
    pub(crate) fn eval_exp(&self, x: &GroupElement) -> u64 {
        let n1 = self.group.exponent();
        let mut acc: u128 = 0;
        for ((&c, &xi), &n) in self.coords.iter().zip(&x.coords).zip(self.group.factors.iter()) {
            acc += c as u128 * xi as u128 * (n1 / n) as u128;
        }
        (acc % n1 as u128) as u64
    }

    pub fn eval(&self, x: &GroupElement) -> Result<RootOfUnity> {
        self.group.check_same(&x.group)?;
        Ok(RootOfUnity::new(self.group.exponent(), self.eval_exp(x) as i64))
    }

    pub fn add(&self, other: &DualElement) -> Result<DualElement> {
        self.group.check_same(&other.group)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .zip(self.group.factors.iter())
            .map(|((&a, &b), &n)| (a + b) % n)
            .collect();
        Ok(DualElement { group: self.group.clone(), coords })
    }

    pub fn neg(&self) -> DualElement {
        let coords = self.coords.iter().zip(self.group.factors.iter()).map(|(&c, &n)| (n - c) % n).collect();
        DualElement { group: self.group.clone(), coords }
    }
}

/// `chi(x)` for a character and an element of the same group.
pub fn eval_char(chi: &DualElement, x: &GroupElement) -> Result<RootOfUnity> {
    chi.eval(x)
}

impl fmt::Debug for DualElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "chi{:?}", self.coords)
    }
}

impl Serialize for DualElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords.serialize(s)
    }
}

//! Heisenberg groups `H(K) = mu_M x K x X(K)` and their standard representation.

mod rep;
mod split;
mod weight1;

pub use rep::{standard_rep, uh_basis, verify_irreducible, StandardRep, UhBasis};
pub use split::{split_if_trivial_pairing, LinearLift, ProjectiveRep, SplitOutcome};
pub use weight1::{decompose_weight1, Weight1Decomposition, Weight1Rep};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::exactnum::RootOfUnity;
use crate::fingroup::{DualElement, FiniteAbelianGroup, GroupElement};
use crate::pairing::AlternatingPairing;
use crate::{Error, Result};

/// `H(K)` with scalars truncated to `mu_M`, `exp(K) | M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeisenbergGroup {
    k: FiniteAbelianGroup,
    scalar_order: u64,
}

/// `(t, x, chi)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ThetaElement {
    pub scalar: RootOfUnity,
    pub x: GroupElement,
    pub chi: DualElement,
}

impl HeisenbergGroup {
    pub fn new(k: &FiniteAbelianGroup, scalar_order: u64) -> Result<Self> {
        if scalar_order == 0 || scalar_order % k.exponent() != 0 {
            return Err(Error::IncompatibleOrder { from: k.exponent(), to: scalar_order });
        }
        Ok(HeisenbergGroup { k: k.clone(), scalar_order })
    }

    /// Scalars in `mu_{exp K}`, enough for the group law.
    pub fn standard(k: &FiniteAbelianGroup) -> Self {
        HeisenbergGroup { k: k.clone(), scalar_order: k.exponent() }
    }

    pub fn k(&self) -> &FiniteAbelianGroup {
        &self.k
    }

    pub fn scalar_order(&self) -> u64 {
        self.scalar_order
    }

    /// `|mu_M x K x X(K)|`.
    pub fn order(&self) -> u64 {
        self.scalar_order * self.k.order() * self.k.order()
    }

    pub fn element(&self, scalar: RootOfUnity, x: &GroupElement, chi: &DualElement) -> Result<ThetaElement> {
        self.k.check_same(x.group())?;
        self.k.check_same(chi.group())?;
        if self.scalar_order % scalar.value_order() != 0 {
            return Err(Error::IncompatibleOrder { from: scalar.value_order(), to: self.scalar_order });
        }
        Ok(ThetaElement { scalar: scalar.reduced().lift_order(self.scalar_order)?, x: x.clone(), chi: chi.clone() })
    }

    pub fn identity(&self) -> ThetaElement {
        ThetaElement {
            scalar: RootOfUnity::new(self.scalar_order, 0),
            x: self.k.zero(),
            chi: self.k.trivial_character(),
        }
    }

    /// `(zeta_M^k, 0, 0)`.
    pub fn scalar(&self, k: i64) -> ThetaElement {
        ThetaElement { scalar: RootOfUnity::new(self.scalar_order, k), ..self.identity() }
    }

    /// The lattice `K (+) X(K)`, factors interleaved as `n_1, n_1, n_2, n_2, ...`.
    pub fn lattice(&self) -> FiniteAbelianGroup {
        lattice(&self.k)
    }

    /// `(1, x, chi)` for `h = (x, chi)` in the lattice.
    pub fn lift(&self, h: &GroupElement) -> Result<ThetaElement> {
        self.lattice().check_same(h.group())?;
        let (x, chi) = split_lattice(&self.k, h);
        Ok(ThetaElement { x, chi, ..self.identity() })
    }

    pub fn project(&self, a: &ThetaElement) -> GroupElement {
        join_lattice(&self.lattice(), &a.x, &a.chi)
    }

    /// `(1, k_i, 0)` then `(1, 0, chi_i)` for each `i`.
    pub fn generators(&self) -> Vec<ThetaElement> {
        self.lattice().generators().iter().map(|h| self.lift(h).expect("same lattice")).collect()
    }

    pub fn mul(&self, a: &ThetaElement, b: &ThetaElement) -> Result<ThetaElement> {
        theta_mul(a, b)
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> ThetaElement {
        let h = self.lattice().random_element(rng);
        let mut a = self.lift(&h).expect("same lattice");
        a.scalar = RootOfUnity::new(self.scalar_order, rng.gen_range(0..self.scalar_order) as i64);
        a
    }

    /// Every `(1, x, chi)`, ordered as the lattice elements.
    pub fn lifts(&self) -> Vec<ThetaElement> {
        self.lattice().elements().map(|h| self.lift(&h).expect("same lattice")).collect()
    }
}

/// `(t, x, chi)(t', x', chi') = (t t' chi'(x), x + x', chi + chi')`.
pub fn theta_mul(a: &ThetaElement, b: &ThetaElement) -> Result<ThetaElement> {
    let x = a.x.add(&b.x)?;
    let chi = a.chi.add(&b.chi)?;
    let scalar = align(a.scalar * b.scalar * b.chi.eval(&a.x)?, a.scalar.order());
    Ok(ThetaElement { scalar, x, chi })
}

/// `(t, x, chi)^{-1} = (t^{-1} chi(x), -x, -chi)`.
pub fn theta_inv(a: &ThetaElement) -> ThetaElement {
    let chi_x = a.chi.eval(&a.x).expect("components share K");
    ThetaElement { scalar: align(a.scalar.inv() * chi_x, a.scalar.order()), x: a.x.neg(), chi: a.chi.neg() }
}

/// Scalar part of `a b a^{-1} b^{-1}`.
pub fn theta_commutator(a: &ThetaElement, b: &ThetaElement) -> Result<RootOfUnity> {
    let ab = theta_mul(a, b)?;
    let c = theta_mul(&theta_mul(&ab, &theta_inv(a))?, &theta_inv(b))?;
    if !c.x.is_zero() || !c.chi.is_trivial() {
        return Err(Error::InternalInvariantViolation("commutator is not central".into()));
    }
    Ok(c.scalar.reduced())
}

/// `e((x, chi), (x', chi')) = chi'(x) chi(x')^{-1}` on `K (+) X(K)`.
pub fn commutator_pairing(k: &FiniteAbelianGroup) -> AlternatingPairing {
    let h = lattice(k);
    let n = h.exponent();
    let r = h.rank();
    let mut m = vec![vec![0i64; r]; r];
    for (i, &ni) in k.factors().iter().enumerate() {
        m[2 * i][2 * i + 1] = (n / ni) as i64;
        m[2 * i + 1][2 * i] = -((n / ni) as i64);
    }
    AlternatingPairing::new(&h, &m).expect("standard pairing is valid")
}

pub fn lattice(k: &FiniteAbelianGroup) -> FiniteAbelianGroup {
    let factors = k.factors().iter().flat_map(|&n| [n, n]).collect();
    FiniteAbelianGroup::new(factors).expect("interleaved factors form a chain")
}

pub(crate) fn split_lattice(k: &FiniteAbelianGroup, h: &GroupElement) -> (GroupElement, DualElement) {
    let c = h.coords();
    let x: Vec<i64> = (0..k.rank()).map(|i| c[2 * i] as i64).collect();
    let chi: Vec<i64> = (0..k.rank()).map(|i| c[2 * i + 1] as i64).collect();
    (k.element(&x).expect("coords in range"), k.character(&chi).expect("coords in range"))
}

pub(crate) fn join_lattice(h: &FiniteAbelianGroup, x: &GroupElement, chi: &DualElement) -> GroupElement {
    let coords: Vec<i64> = x.coords().iter().zip(chi.coords()).flat_map(|(&a, &b)| [a as i64, b as i64]).collect();
    h.element(&coords).expect("coords in range")
}

fn align(t: RootOfUnity, order: u64) -> RootOfUnity {
    t.reduced().lift_order(order).expect("scalar order divides the context order")
}

#[derive(Serialize, Deserialize)]
struct ThetaRepr {
    scalar: RootOfUnity,
    x: Vec<i64>,
    chi: Vec<i64>,
}

impl Serialize for ThetaElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ThetaRepr {
            scalar: self.scalar,
            x: self.x.coords().iter().map(|&c| c as i64).collect(),
            chi: self.chi.coords().iter().map(|&c| c as i64).collect(),
        }
        .serialize(s)
    }
}

impl HeisenbergGroup {
    /// Parses `{"scalar": {...}, "x": [...], "chi": [...]}` against this group.
    pub fn element_from_json(&self, v: &serde_json::Value) -> Result<ThetaElement> {
        let r: ThetaRepr =
            serde_json::from_value(v.clone()).map_err(|e| Error::InvalidGroup(format!("theta element: {e}")))?;
        self.element(r.scalar, &self.k.element(&r.x)?, &self.k.character(&r.chi)?)
    }
}

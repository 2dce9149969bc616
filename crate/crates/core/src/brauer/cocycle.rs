use serde::Serialize;

use crate::exactnum::{Cyclotomic, RootOfUnity};
use crate::fingroup::{FiniteAbelianGroup, GroupElement};
use crate::heisenberg::lattice;
use crate::pairing::{mumford_normal_form_strict, AlternatingPairing};
use crate::{Error, Result};

/// Twisted group algebra of `H` with basis `e_sigma` and
/// `e_sigma e_tau = a(sigma, tau) e_{sigma + tau}`.
///
/// The cocycle is bilinear, `a(sigma, tau) = zeta_N^{sigma^T A tau}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CocycleAlgebra {
    group: FiniteAbelianGroup,
    order: u64,
    matrix: Vec<Vec<u64>>,
}

/// `a((x, chi), (x', chi')) = chi'(x)` on `K + X(K)` with interleaved generators.
pub fn heisenberg_cocycle(k: &FiniteAbelianGroup) -> CocycleAlgebra {
    let h = lattice(k);
    let n = h.exponent();
    let r = h.rank();
    let mut matrix = vec![vec![0u64; r]; r];
    for (i, &ni) in k.factors().iter().enumerate() {
        matrix[2 * i][2 * i + 1] = n / ni;
    }
    CocycleAlgebra { group: h, order: n, matrix }
}

/// The cocycle `chi'(x)` transported along a maximal isotropic splitting of a
/// non-degenerate `e`.
pub fn standard_cocycle(e: &AlternatingPairing) -> Result<CocycleAlgebra> {
    let nf = mumford_normal_form_strict(e).map_err(|err| match err {
        Error::DegenerateInput(r) => Error::NoIsotropicSplitting(format!("radical of order {r}")),
        other => other,
    })?;
    let h = e.group().clone();
    let n = e.value_order();
    let blocks = nf.blocks();
    let images: Vec<GroupElement> =
        h.generators().iter().map(|g| nf.to_blocks().apply(g)).collect::<Result<_>>()?;
    let r = h.rank();
    let mut matrix = vec![vec![0u64; r]; r];
    for i in 0..r {
        for j in 0..r {
            let (s, t) = (images[i].coords(), images[j].coords());
            let mut acc: u128 = 0;
            for (b, blk) in blocks.iter().enumerate() {
                let w = (blk.d * (n / blk.n)) as u128;
                acc = (acc + s[2 * b] as u128 * t[2 * b + 1] as u128 * w) % n as u128;
            }
            matrix[i][j] = acc as u64;
        }
    }
    let alg = CocycleAlgebra { group: h, order: n, matrix };
    if alg.commutator_pairing()? != *e {
        return Err(Error::InternalInvariantViolation("transported cocycle has the wrong commutator".into()));
    }
    Ok(alg)
}

impl CocycleAlgebra {
    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    /// `N`: cocycle values are powers of `zeta_N`.
    pub fn value_order(&self) -> u64 {
        self.order
    }

    pub fn dimension(&self) -> u64 {
        self.group.order()
    }

    fn exp(&self, s: &GroupElement, t: &GroupElement) -> u64 {
        let n = self.order as u128;
        let mut acc: u128 = 0;
        for (i, &si) in s.coords().iter().enumerate() {
            if si == 0 {
                continue;
            }
            for (j, &tj) in t.coords().iter().enumerate() {
                acc = (acc + si as u128 * tj as u128 * self.matrix[i][j] as u128) % n;
            }
        }
        acc as u64
    }

    pub fn cocycle(&self, s: &GroupElement, t: &GroupElement) -> Result<RootOfUnity> {
        if s.group() != &self.group || t.group() != &self.group {
            return Err(Error::ParentMismatch(self.group.to_string(), format!("{} / {}", s.group(), t.group())));
        }
        Ok(RootOfUnity::new(self.order, self.exp(s, t) as i64))
    }

    /// `table[i][j] = a(h_i, h_j)` in enumeration order.
    pub fn table(&self) -> Vec<Vec<RootOfUnity>> {
        let elems: Vec<GroupElement> = self.group.elements().collect();
        elems
            .iter()
            .map(|s| elems.iter().map(|t| RootOfUnity::new(self.order, self.exp(s, t) as i64)).collect())
            .collect()
    }

    pub fn is_normalized(&self) -> bool {
        let zero = self.group.zero();
        self.group.elements().all(|s| self.exp(&zero, &s) == 0 && self.exp(&s, &zero) == 0)
    }

    /// First triple violating `a(s,t) a(s+t,u) = a(t,u) a(s,t+u)`.
    pub fn cocycle_failure(&self) -> Option<(GroupElement, GroupElement, GroupElement)> {
        let n = self.order;
        let elems: Vec<GroupElement> = self.group.elements().collect();
        for s in &elems {
            for t in &elems {
                let st = s.add(t).expect("same group");
                let a_st = self.exp(s, t);
                for u in &elems {
                    let lhs = (a_st + self.exp(&st, u)) % n;
                    let rhs = (self.exp(t, u) + self.exp(s, &t.add(u).expect("same group"))) % n;
                    if lhs != rhs {
                        return Some((s.clone(), t.clone(), u.clone()));
                    }
                }
            }
        }
        None
    }

    /// `e(s, t) = a(s, t) a(t, s)^{-1}`.
    pub fn commutator_pairing(&self) -> Result<AlternatingPairing> {
        let r = self.group.rank();
        let m: Vec<Vec<i64>> = (0..r)
            .map(|i| (0..r).map(|j| self.matrix[i][j] as i64 - self.matrix[j][i] as i64).collect())
            .collect();
        AlternatingPairing::new(&self.group, &m)
    }

    /// Exhaustive check of `e(s, t) = a(s, t) a(t, s)^{-1}` against a given pairing.
    pub fn commutator_matches(&self, e: &AlternatingPairing) -> Result<bool> {
        for s in self.group.elements() {
            for t in self.group.elements() {
                let lhs = e.eval(&s, &t)?;
                let rhs = self.cocycle(&s, &t)? * self.cocycle(&t, &s)?.inv();
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// `e_s e_t` as a scalar times a basis element.
    pub fn basis_product(&self, s: &GroupElement, t: &GroupElement) -> Result<(RootOfUnity, GroupElement)> {
        Ok((self.cocycle(s, t)?, s.add(t)?))
    }

    /// Product of two elements given by coefficient vectors in enumeration order.
    pub fn mul(&self, x: &[Cyclotomic], y: &[Cyclotomic]) -> Result<Vec<Cyclotomic>> {
        let dim = self.dimension() as usize;
        if x.len() != dim || y.len() != dim {
            return Err(Error::DimensionMismatch(format!("algebra elements have {dim} coordinates")));
        }
        let n = self.order.max(1);
        let mut out = vec![Cyclotomic::zero(n); dim];
        let elems: Vec<GroupElement> = self.group.elements().collect();
        for (s, xs) in elems.iter().zip(x) {
            if xs.is_zero() {
                continue;
            }
            let xs = xs.lift(n)?;
            for (t, yt) in elems.iter().zip(y) {
                if yt.is_zero() {
                    continue;
                }
                let (c, st) = self.basis_product(s, t)?;
                let term = (&xs * &yt.lift(n)?).mul_zeta_pow(c.lift_order(n)?.exp() as i64);
                let k = st.index() as usize;
                out[k] = &out[k] + &term;
            }
        }
        Ok(out)
    }

    /// First basis triple with `(e_s e_t) e_u != e_s (e_t e_u)`.
    pub fn associativity_failure(&self) -> Result<Option<(GroupElement, GroupElement, GroupElement)>> {
        let elems: Vec<GroupElement> = self.group.elements().collect();
        for s in &elems {
            for t in &elems {
                let (c1, st) = self.basis_product(s, t)?;
                for u in &elems {
                    let (c2, left) = self.basis_product(&st, u)?;
                    let (c3, tu) = self.basis_product(t, u)?;
                    let (c4, right) = self.basis_product(s, &tu)?;
                    if left != right || c1.clone() * c2 != c3 * c4 {
                        return Ok(Some((s.clone(), t.clone(), u.clone())));
                    }
                }
            }
        }
        Ok(None)
    }

    /// Dimension of the center.
    ///
    /// Conjugation by `e_t` scales each `e_s`, so the center is spanned by
    /// the basis elements commuting with every `e_t`.
    pub fn center_dimension(&self) -> Result<usize> {
        let mut count = 0;
        for s in self.group.elements() {
            let mut central = true;
            for t in self.group.elements() {
                if self.basis_product(&s, &t)? != self.basis_product(&t, &s)? {
                    central = false;
                    break;
                }
            }
            if central {
                count += 1;
            }
        }
        Ok(count)
    }
}

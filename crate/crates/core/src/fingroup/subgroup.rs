use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::{left_kernel, smith_normal_form, solve_left, to_i64, FiniteAbelianGroup, GroupElement, GroupHom};
use crate::{Error, Result};

/// A subgroup together with its own invariant-factor structure and a
/// basis of ambient elements realizing it: `basis[i]` has order
/// `structure.factors()[i]` and the basis is independent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    ambient: FiniteAbelianGroup,
    structure: FiniteAbelianGroup,
    basis: Vec<GroupElement>,
}

/// `G / S` with its projection and lifts of the canonical generators.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: FiniteAbelianGroup,
    pub projection: GroupHom,
    pub lifts: Vec<GroupElement>,
}

fn diag_rows(moduli: &[u64], width: usize) -> Vec<Vec<BigInt>> {
    (0..moduli.len())
        .map(|i| (0..width).map(|j| if i == j { BigInt::from(moduli[i]) } else { BigInt::zero() }).collect())
        .collect()
}

fn element_rows(elems: &[GroupElement]) -> Vec<Vec<BigInt>> {
    elems.iter().map(|e| e.coords().iter().map(|&c| BigInt::from(c)).collect()).collect()
}

impl Subgroup {
    pub fn trivial(ambient: &FiniteAbelianGroup) -> Self {
        Subgroup { ambient: ambient.clone(), structure: FiniteAbelianGroup::trivial(), basis: Vec::new() }
    }

    pub fn whole(ambient: &FiniteAbelianGroup) -> Self {
        Subgroup { ambient: ambient.clone(), structure: ambient.clone(), basis: ambient.generators() }
    }

    pub fn generated_by(ambient: &FiniteAbelianGroup, gens: &[GroupElement]) -> Result<Self> {
        for g in gens {
            ambient.check_same(g.group())?;
        }
        let gens: Vec<GroupElement> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
        if gens.is_empty() {
            return Ok(Self::trivial(ambient));
        }
        let k = gens.len();
        let r = ambient.rank();
        let mut a = element_rows(&gens);
        a.extend(diag_rows(ambient.factors(), r));
        // relations among the generators: c with sum c_j s_j = 0 in the ambient group
        let relations: Vec<Vec<i64>> = left_kernel(&a, r)
            .iter()
            .map(|z| z[..k].iter().map(to_i64).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        let p = smith_normal_form(&relations, k)?;
        let basis = p
            .from_canonical
            .iter()
            .map(|comb| {
                comb.iter().zip(&gens).fold(ambient.zero(), |acc, (&c, g)| acc.add_unchecked(&g.scale(c)))
            })
            .collect();
        Ok(Subgroup { ambient: ambient.clone(), structure: p.group, basis })
    }

    /// Elements `x` with `sum_i x_i * constraints[i][j] = 0 mod moduli[j]` for all `j`.
    ///
    /// Each row of `constraints` belongs to a canonical generator of the
    /// ambient group; the map must be well defined on it.
    pub fn kernel_of(ambient: &FiniteAbelianGroup, constraints: &[Vec<u64>], moduli: &[u64]) -> Result<Self> {
        let r = ambient.rank();
        let s = moduli.len();
        if constraints.len() != r || constraints.iter().any(|c| c.len() != s) {
            return Err(Error::DimensionMismatch("constraint matrix shape".into()));
        }
        for (i, row) in constraints.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                if (c as u128 * ambient.factors()[i] as u128) % moduli[j] as u128 != 0 {
                    return Err(Error::InvalidGroup(format!(
                        "constraint {j} is not well defined on generator {i}"
                    )));
                }
            }
        }
        if s == 0 {
            return Ok(Self::whole(ambient));
        }
        let mut a: Vec<Vec<BigInt>> =
            constraints.iter().map(|row| row.iter().map(|&c| BigInt::from(c)).collect()).collect();
        a.extend(diag_rows(moduli, s));
        let gens: Vec<GroupElement> = left_kernel(&a, s)
            .iter()
            .map(|z| {
                let coords: Vec<i64> = z[..r]
                    .iter()
                    .zip(ambient.factors())
                    .map(|(c, &n)| to_i64(&c.mod_floor(&BigInt::from(n))))
                    .collect::<Result<_>>()?;
                ambient.element(&coords)
            })
            .collect::<Result<_>>()?;
        Self::generated_by(ambient, &gens)
    }

    pub fn ambient(&self) -> &FiniteAbelianGroup {
        &self.ambient
    }

    pub fn structure(&self) -> &FiniteAbelianGroup {
        &self.structure
    }

    pub fn basis(&self) -> &[GroupElement] {
        &self.basis
    }

    pub fn order(&self) -> u64 {
        self.structure.order()
    }

    pub fn is_trivial(&self) -> bool {
        self.structure.is_trivial()
    }

    pub fn is_whole(&self) -> bool {
        self.order() == self.ambient.order()
    }

    /// Coordinates of `x` in the subgroup basis, or `None` if `x` is outside.
    pub fn coords_of(&self, x: &GroupElement) -> Option<Vec<u64>> {
        if x.group() != &self.ambient {
            return None;
        }
        if x.is_zero() {
            return Some(vec![0; self.basis.len()]);
        }
        if self.basis.is_empty() {
            return None;
        }
        let r = self.ambient.rank();
        let mut a = element_rows(&self.basis);
        a.extend(diag_rows(self.ambient.factors(), r));
        let target: Vec<BigInt> = x.coords().iter().map(|&c| BigInt::from(c)).collect();
        let z = solve_left(&a, r, &target)?;
        Some(
            z[..self.basis.len()]
                .iter()
                .zip(self.structure.factors())
                .map(|(c, &n)| to_i64(&c.mod_floor(&BigInt::from(n))).map(|v| v as u64))
                .collect::<Result<_>>()
                .ok()?,
        )
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        self.coords_of(x).is_some()
    }

    /// Element of the subgroup with the given structure coordinates.
    pub fn element_from_coords(&self, coords: &[u64]) -> GroupElement {
        coords
            .iter()
            .zip(&self.basis)
            .fold(self.ambient.zero(), |acc, (&c, b)| acc.add_unchecked(&b.scale(c as i64)))
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        self.structure.elements().map(move |e| self.element_from_coords(e.coords()))
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.basis.iter().all(|b| other.contains(b))
    }

    pub fn quotient(&self) -> Result<Quotient> {
        let r = self.ambient.rank();
        let mut rel: Vec<Vec<i64>> =
            self.basis.iter().map(|b| b.coords().iter().map(|&c| c as i64).collect()).collect();
        rel.extend((0..r).map(|i| (0..r).map(|j| if i == j { self.ambient.factors()[i] as i64 } else { 0 }).collect()));
        let p = smith_normal_form(&rel, r)?;
        let images: Vec<Vec<i64>> =
            p.to_canonical.iter().map(|row| row.iter().map(|&c| c as i64).collect()).collect();
        let projection = GroupHom::new(&self.ambient, &p.group, &images)?;
        let lifts = p
            .from_canonical
            .iter()
            .map(|comb| self.ambient.element(comb))
            .collect::<Result<_>>()?;
        Ok(Quotient { group: p.group, projection, lifts })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_subgroup_structure() {
        let g = FiniteAbelianGroup::new(vec![4, 2]).unwrap();
        let s = Subgroup::generated_by(&g, &[g.element(&[2, 1]).unwrap()]).unwrap();
        assert_eq!(s.structure().factors(), &[2]);
        assert!(s.contains(&g.element(&[2, 1]).unwrap()));
        assert!(!s.contains(&g.element(&[2, 0]).unwrap()));
        let all = Subgroup::generated_by(&g, &[g.element(&[1, 1]).unwrap(), g.element(&[0, 1]).unwrap()]).unwrap();
        assert!(all.is_whole());
        assert_eq!(all.elements().collect::<std::collections::HashSet<_>>().len(), 8);
    }

    #[test]
    fn kernel_of_character() {
        // x -> zeta_4^{x_1 + 2 x_2} on Z/4 x Z/2
        let g = FiniteAbelianGroup::new(vec![4, 2]).unwrap();
        let k = Subgroup::kernel_of(&g, &[vec![1], vec![2]], &[4]).unwrap();
        let brute: Vec<_> = g.elements().filter(|x| (x.coords()[0] + 2 * x.coords()[1]) % 4 == 0).collect();
        assert_eq!(k.order() as usize, brute.len());
        for x in &brute {
            assert!(k.contains(x));
        }
    }

    #[test]
    fn quotient_projection() {
        let g = FiniteAbelianGroup::new(vec![4, 4]).unwrap();
        let s = Subgroup::generated_by(&g, &[g.element(&[1, 1]).unwrap()]).unwrap();
        let q = s.quotient().unwrap();
        assert_eq!(q.group.factors(), &[4]);
        for x in s.elements() {
            assert!(q.projection.apply(&x).unwrap().is_zero());
        }
        for (i, l) in q.lifts.iter().enumerate() {
            assert_eq!(q.projection.apply(l).unwrap(), q.group.generator(i));
        }
    }
}

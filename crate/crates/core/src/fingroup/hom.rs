use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Serialize, Serializer};

use super::{solve_left, to_i64, FiniteAbelianGroup, GroupElement, Subgroup};
use crate::{Error, Result};

/// Homomorphism given by the images of the canonical source generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    source: FiniteAbelianGroup,
    target: FiniteAbelianGroup,
    images: Vec<GroupElement>,
}

impl GroupHom {
    pub fn new(source: &FiniteAbelianGroup, target: &FiniteAbelianGroup, matrix: &[Vec<i64>]) -> Result<Self> {
        if matrix.len() != source.rank() {
            return Err(Error::DimensionMismatch(format!(
                "hom from {source} needs {} images, got {}",
                source.rank(),
                matrix.len()
            )));
        }
        let images: Vec<GroupElement> = matrix.iter().map(|row| target.element(row)).collect::<Result<_>>()?;
        for (i, (img, &n)) in images.iter().zip(source.factors()).enumerate() {
            if !img.scale(n as i64).is_zero() {
                return Err(Error::InvalidGroup(format!(
                    "image of generator {i} has order {} not dividing {n}",
                    img.order()
                )));
            }
        }
        Ok(GroupHom { source: source.clone(), target: target.clone(), images })
    }

    pub fn identity(g: &FiniteAbelianGroup) -> Self {
        GroupHom { source: g.clone(), target: g.clone(), images: g.generators() }
    }

    pub fn source(&self) -> &FiniteAbelianGroup {
        &self.source
    }

    pub fn target(&self) -> &FiniteAbelianGroup {
        &self.target
    }

    pub fn images(&self) -> &[GroupElement] {
        &self.images
    }

    pub fn matrix(&self) -> Vec<Vec<u64>> {
        self.images.iter().map(|e| e.coords().to_vec()).collect()
    }

    pub fn apply(&self, x: &GroupElement) -> Result<GroupElement> {
        self.source.check_same(x.group())?;
        Ok(x.coords()
            .iter()
            .zip(&self.images)
            .fold(self.target.zero(), |acc, (&c, img)| acc.add_unchecked(&img.scale(c as i64))))
    }

    /// `next . self`.
    pub fn then(&self, next: &GroupHom) -> Result<GroupHom> {
        self.target.check_same(&next.source)?;
        let images = self.images.iter().map(|img| next.apply(img)).collect::<Result<_>>()?;
        Ok(GroupHom { source: self.source.clone(), target: next.target.clone(), images })
    }

    pub fn image(&self) -> Result<Subgroup> {
        Subgroup::generated_by(&self.target, &self.images)
    }

    pub fn kernel(&self) -> Result<Subgroup> {
        // x -> image coordinates, modulo the target invariant factors
        let constraints: Vec<Vec<u64>> = self.matrix();
        Subgroup::kernel_of(&self.source, &constraints, self.target.factors())
    }

    pub fn is_injective(&self) -> Result<bool> {
        Ok(self.kernel()?.is_trivial())
    }

    pub fn is_isomorphism(&self) -> Result<bool> {
        Ok(self.source.order() == self.target.order() && self.is_injective()?)
    }

    /// Inverse of an isomorphism.
    pub fn inverse(&self) -> Result<GroupHom> {
        if !self.is_isomorphism()? {
            return Err(Error::InvalidGroup("only isomorphisms can be inverted".into()));
        }
        let r = self.target.rank();
        let k = self.source.rank();
        let mut a: Vec<Vec<BigInt>> =
            self.images.iter().map(|e| e.coords().iter().map(|&c| BigInt::from(c)).collect()).collect();
        a.extend((0..r).map(|i| {
            (0..r).map(|j| if i == j { BigInt::from(self.target.factors()[i]) } else { BigInt::zero() }).collect()
        }));
        let rows = (0..r)
            .map(|i| {
                let e: Vec<BigInt> = (0..r).map(|j| BigInt::from((i == j) as u8)).collect();
                let z = solve_left(&a, r, &e)
                    .ok_or_else(|| Error::InternalInvariantViolation("isomorphism is not surjective".into()))?;
                z[..k]
                    .iter()
                    .zip(self.source.factors())
                    .map(|(c, &n)| to_i64(&c.mod_floor(&BigInt::from(n))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        GroupHom::new(&self.target, &self.source, &rows)
    }
}

impl Serialize for GroupHom {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            matrix: Vec<Vec<u64>>,
        }
        Repr { matrix: self.matrix() }.serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn ill_defined_hom_rejected() {
        let z2 = FiniteAbelianGroup::cyclic(2);
        let z4 = FiniteAbelianGroup::cyclic(4);
        assert!(GroupHom::new(&z2, &z4, &[vec![1]]).is_err());
        assert!(GroupHom::new(&z2, &z4, &[vec![2]]).is_ok());
    }

    #[test]
    fn kernel_and_image() {
        let z4 = FiniteAbelianGroup::cyclic(4);
        let double = GroupHom::new(&z4, &z4, &[vec![2]]).unwrap();
        assert_eq!(double.kernel().unwrap().order(), 2);
        assert_eq!(double.image().unwrap().order(), 2);
        assert!(!double.is_injective().unwrap());
        assert!(GroupHom::identity(&z4).is_isomorphism().unwrap());
    }

    #[test]
    fn inverse_of_isomorphism() {
        let g = FiniteAbelianGroup::new(vec![4, 2]).unwrap();
        let f = GroupHom::new(&g, &g, &[vec![1, 1], vec![2, 1]]).unwrap();
        let inv = f.inverse().unwrap();
        assert_eq!(f.then(&inv).unwrap(), GroupHom::identity(&g));
        assert_eq!(inv.then(&f).unwrap(), GroupHom::identity(&g));
        let z4 = FiniteAbelianGroup::cyclic(4);
        assert!(GroupHom::new(&z4, &z4, &[vec![2]]).unwrap().inverse().is_err());
    }

    fn random_hom(rng: &mut ChaCha8Rng, s: &FiniteAbelianGroup, t: &FiniteAbelianGroup) -> GroupHom {
        let rows: Vec<Vec<i64>> = s
            .factors()
            .iter()
            .map(|&n| {
                // scale a random element so that n kills it
                let x = t.random_element(rng);
                let k = t.exponent() / crate::exactnum::gcd(t.exponent(), n);
                x.scale(k as i64).coords().iter().map(|&c| c as i64).collect()
            })
            .collect();
        GroupHom::new(s, t, &rows).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn composition_is_associative(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let groups = FiniteAbelianGroup::all_up_to_order(24);
            let pick = |rng: &mut ChaCha8Rng| groups[rand::Rng::gen_range(rng, 0..groups.len())].clone();
            let (a, b, c, d) = (pick(&mut rng), pick(&mut rng), pick(&mut rng), pick(&mut rng));
            let f = random_hom(&mut rng, &a, &b);
            let g = random_hom(&mut rng, &b, &c);
            let h = random_hom(&mut rng, &c, &d);
            prop_assert_eq!(f.then(&g).unwrap().then(&h).unwrap(), f.then(&g.then(&h).unwrap()).unwrap());
            prop_assert_eq!(GroupHom::identity(&a).then(&f).unwrap(), f.clone());
            prop_assert_eq!(f.then(&GroupHom::identity(&b)).unwrap(), f.clone());
            for x in a.elements().take(16) {
                prop_assert_eq!(f.then(&g).unwrap().apply(&x).unwrap(), g.apply(&f.apply(&x).unwrap()).unwrap());
            }
        }
    }
}

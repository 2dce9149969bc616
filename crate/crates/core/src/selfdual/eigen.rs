use serde::Serialize;

use crate::exactnum::{joint_eigenspaces, lcm, CycloMatrix, RootOfUnity};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockKindTag {
    SelfPaired,
    Hyperbolic,
}

/// `V_lambda` with `lambda^2 = beta^{-1}`, or `V_lambda (+) V_mu` with `lambda mu = beta^{-1}`.
#[derive(Clone, Debug)]
pub struct EigenBlock {
    pub kind: BlockKindTag,
    pub weights: Vec<Vec<RootOfUnity>>,
    pub dims: Vec<usize>,
    pub basis: CycloMatrix,
}

#[derive(Clone, Debug)]
pub struct EigenSplit {
    pub blocks: Vec<EigenBlock>,
}

impl EigenSplit {
    pub fn self_paired(&self) -> usize {
        self.blocks.iter().filter(|b| b.kind == BlockKindTag::SelfPaired).count()
    }

    pub fn hyperbolic(&self) -> usize {
        self.blocks.iter().filter(|b| b.kind == BlockKindTag::Hyperbolic).count()
    }
}

/// Splits `V` along the weights of commuting central elements `z_i`
/// (`z_i^{n_i} = 1`) for a form with `B(z^{-1} v, z^{-1} w) = beta(z) B(v, w)`.
///
/// Checks that `B` is non-degenerate on every block, that distinct blocks are
/// orthogonal, and that the halves of a hyperbolic pair are isotropic.
pub fn eigen_split(central: &[CycloMatrix], orders: &[u64], betas: &[RootOfUnity], form: &CycloMatrix) -> Result<EigenSplit> {
    if central.len() != orders.len() || central.len() != betas.len() {
        return Err(Error::DimensionMismatch("one order and one beta value per central element".into()));
    }
    let spaces = joint_eigenspaces(central, orders)?;
    let weights: Vec<Vec<RootOfUnity>> = spaces
        .iter()
        .map(|(label, _)| label.iter().zip(orders).map(|(&k, &n)| RootOfUnity::new(n, k as i64)).collect())
        .collect();
    let partner = |w: &[RootOfUnity]| -> Vec<RootOfUnity> { w.iter().zip(betas).map(|(l, b)| (*l * *b).inv()).collect() };

    let order = spaces.first().map_or(form.order(), |(_, u)| lcm(u.order(), form.order()));
    let form = form.lift(order)?;
    let mut used = vec![false; spaces.len()];
    let mut blocks = Vec::new();
    for i in 0..spaces.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let mu = partner(&weights[i]);
        let ui = spaces[i].1.lift(order)?;
        if mu == weights[i] {
            blocks.push(EigenBlock {
                kind: BlockKindTag::SelfPaired,
                weights: vec![weights[i].clone()],
                dims: vec![ui.cols()],
                basis: ui,
            });
            continue;
        }
        let j = (0..spaces.len()).find(|&j| weights[j] == mu).ok_or(Error::FormDegenerateOnBlock)?;
        used[j] = true;
        let uj = spaces[j].1.lift(order)?;
        for u in [&ui, &uj] {
            if !u.transpose().try_mul(&form)?.try_mul(u)?.is_zero() {
                return Err(Error::FormDegenerateOnBlock);
            }
        }
        blocks.push(EigenBlock {
            kind: BlockKindTag::Hyperbolic,
            weights: vec![weights[i].clone(), weights[j].clone()],
            dims: vec![ui.cols(), uj.cols()],
            basis: CycloMatrix::hstack(&[ui, uj]),
        });
    }

    for (a, block) in blocks.iter().enumerate() {
        let restricted = block.basis.transpose().try_mul(&form)?.try_mul(&block.basis)?;
        if restricted.rank() != block.basis.cols() {
            return Err(Error::FormDegenerateOnBlock);
        }
        for other in &blocks[a + 1..] {
            if !block.basis.transpose().try_mul(&form)?.try_mul(&other.basis)?.is_zero() {
                return Err(Error::FormDegenerateOnBlock);
            }
        }
    }
    Ok(EigenSplit { blocks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{BigRational, Cyclotomic};
    use num_bigint::BigInt;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const O: u64 = 4;

    fn random_rational<R: Rng>(n: usize, rng: &mut R) -> CycloMatrix {
        let rows: Vec<Vec<BigRational>> = (0..n)
            .map(|_| (0..n).map(|_| BigRational::new(BigInt::from(rng.gen_range(-3..=3)), BigInt::from(rng.gen_range(1..=2)))).collect())
            .collect();
        CycloMatrix::from_rationals(O, &rows)
    }

    fn random_invertible<R: Rng>(n: usize, rng: &mut R) -> CycloMatrix {
        loop {
            let p = random_rational(n, rng);
            if p.rank() == n {
                return p;
            }
        }
    }

    fn random_symmetric_invertible<R: Rng>(n: usize, rng: &mut R) -> CycloMatrix {
        loop {
            let a = random_rational(n, rng);
            let s = &a + &a.transpose();
            if s.rank() == n {
                return s;
            }
        }
    }

    fn scalar_block(n: usize, k: i64) -> CycloMatrix {
        CycloMatrix::scalar(n, &Cyclotomic::zeta_pow(O, k))
    }

    fn hyperbolic_form(c: &CycloMatrix) -> CycloMatrix {
        let n = c.rows();
        let z = CycloMatrix::zeros(n, n, O);
        let top = CycloMatrix::hstack(&[z.clone(), c.clone()]);
        let bottom = CycloMatrix::hstack(&[c.transpose(), z]);
        CycloMatrix::from_fn(2 * n, 2 * n, O, |i, j| if i < n { top.get(i, j).clone() } else { bottom.get(i - n, j).clone() })
    }

    fn conjugated(z: &CycloMatrix, b: &CycloMatrix, p: &CycloMatrix) -> (CycloMatrix, CycloMatrix) {
        let p_inv = p.inverse().unwrap();
        (p_inv.try_mul(z).unwrap().try_mul(p).unwrap(), p.transpose().try_mul(b).unwrap().try_mul(p).unwrap())
    }

    #[test]
    fn dihedral_standard_is_one_block() {
        // the scalar i has beta = i^{-2} = -1
        let z = scalar_block(2, 1);
        let split = eigen_split(&[z], &[4], &[RootOfUnity::minus_one()], &CycloMatrix::identity(2, O)).unwrap();
        assert_eq!(split.blocks.len(), 1);
        assert_eq!(split.self_paired(), 1);
    }

    #[test]
    fn hyperbolic_pair_recovered() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let z = CycloMatrix::block_diag(&[scalar_block(2, 1), scalar_block(2, 3)]);
        let b = hyperbolic_form(&random_invertible(2, &mut rng));
        let p = random_invertible(4, &mut rng);
        let (z, b) = conjugated(&z, &b, &p);
        let split = eigen_split(&[z], &[4], &[RootOfUnity::one()], &b).unwrap();
        assert_eq!(split.hyperbolic(), 1);
        assert_eq!(split.self_paired(), 0);
        assert_eq!(split.blocks[0].dims, vec![2, 2]);
    }

    #[test]
    fn three_blocks_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..3 {
            let z = CycloMatrix::block_diag(&[scalar_block(2, 0), scalar_block(1, 2), scalar_block(1, 1), scalar_block(1, 3)]);
            let b = CycloMatrix::block_diag(&[
                random_symmetric_invertible(2, &mut rng),
                random_symmetric_invertible(1, &mut rng),
                hyperbolic_form(&random_invertible(1, &mut rng)),
            ]);
            let p = random_invertible(5, &mut rng);
            let (z, b) = conjugated(&z, &b, &p);
            let split = eigen_split(&[z], &[4], &[RootOfUnity::one()], &b).unwrap();
            assert_eq!((split.self_paired(), split.hyperbolic()), (2, 1));
            // oracle: direct orthogonality over all block pairs
            for (i, x) in split.blocks.iter().enumerate() {
                for y in &split.blocks[i + 1..] {
                    assert!(x.basis.transpose().try_mul(&b).unwrap().try_mul(&y.basis).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn degenerate_block_rejected() {
        let z = CycloMatrix::block_diag(&[scalar_block(1, 0), scalar_block(1, 2)]);
        let b = CycloMatrix::from_ints(O, &[vec![1, 0], vec![0, 0]]);
        assert_eq!(eigen_split(&[z], &[4], &[RootOfUnity::one()], &b).unwrap_err(), Error::FormDegenerateOnBlock);
        // a lonely weight whose partner is missing
        let z = scalar_block(2, 1);
        assert_eq!(
            eigen_split(&[z], &[4], &[RootOfUnity::one()], &CycloMatrix::identity(2, O)).unwrap_err(),
            Error::FormDegenerateOnBlock
        );
    }
}

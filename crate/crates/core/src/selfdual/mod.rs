//! Self-dual theta groups: the `F_2`-symplectic space `K (+) K*`, the
//! bilinear forms `B_{x, xi}`, the two Sp-orbits on weights, the dihedral and
//! quaternion blocks, and the orthogonal eigen-decomposition.
//!
//! Vectors of `F_2^{2r}` are bitmasks: bits `0..r` hold `x`, bits `r..2r` hold `xi`.

mod blocks;
mod eigen;
mod forms;
mod orbits;

pub use blocks::{build_block, central_product, classify_sign, classify_sign_in_form_basis, classify_sign_with, BlockKind, SelfDualThetaGroup, SignReport};
pub use eigen::{eigen_split, BlockKindTag, EigenBlock, EigenSplit};
pub use forms::{form_basis, FormBasis};
pub use orbits::{
    clifford_orbits, proof_family_orbits, sp_generators, sp_group_order, sp_orbits, transvections, validate_with_transvections,
    Orbit, OrbitReport, SymplecticMap, MAX_ORBIT_RANK,
};

use serde::Serialize;

/// `<a, b>` on `F_2^r`.
pub fn dot(a: u32, b: u32) -> u32 {
    (a & b).count_ones() & 1
}

/// `F_2^{2r}` with `omega((x, xi), (x', xi')) = <x, xi'> + <x', xi>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SymplecticSpaceF2 {
    pub rank: usize,
}

impl SymplecticSpaceF2 {
    pub fn new(rank: usize) -> Self {
        assert!(rank <= 15, "bitmask representation holds rank <= 15");
        SymplecticSpaceF2 { rank }
    }

    pub fn dim(&self) -> usize {
        2 * self.rank
    }

    pub fn size(&self) -> u32 {
        1 << (2 * self.rank)
    }

    pub fn split(&self, h: u32) -> (u32, u32) {
        let mask = (1u32 << self.rank) - 1;
        (h & mask, (h >> self.rank) & mask)
    }

    pub fn join(&self, x: u32, xi: u32) -> u32 {
        x | (xi << self.rank)
    }

    pub fn omega(&self, a: u32, b: u32) -> u32 {
        let (x, xi) = self.split(a);
        let (y, eta) = self.split(b);
        dot(x, eta) ^ dot(y, xi)
    }

    /// `q_0(x, xi) = <x, xi>`; its polar form is `omega`.
    pub fn q0(&self, h: u32) -> u32 {
        let (x, xi) = self.split(h);
        dot(x, xi)
    }

    /// The form as a bit matrix, `omega(e_i, e_j)`.
    pub fn form_matrix(&self) -> Vec<Vec<u8>> {
        let d = self.dim();
        (0..d).map(|i| (0..d).map(|j| self.omega(1 << i, 1 << j) as u8).collect()).collect()
    }
}

/// `chi_{x, xi}: (t, y, eta) -> t^{-2} (-1)^{<x, eta> + <y, xi>}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct AffineCharacter {
    pub x: u32,
    pub xi: u32,
}

impl AffineCharacter {
    pub fn is_symmetric(&self) -> bool {
        dot(self.x, self.xi) == 0
    }

    pub fn is_alternating(&self) -> bool {
        !self.is_symmetric()
    }

    /// Sign part `(-1)^{<x, eta> + <y, xi>}` as 0/1.
    pub fn sign_exponent(&self, y: u32, eta: u32) -> u32 {
        dot(self.x, eta) ^ dot(y, self.xi)
    }
}

/// `q: K -> F_2` given by an upper-triangular bit matrix,
/// `q(x) = sum_{i <= j} u_ij x_i x_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticFormF2 {
    rank: usize,
    upper: Vec<Vec<u8>>,
}

impl QuadraticFormF2 {
    pub fn new(upper: Vec<Vec<u8>>) -> Self {
        let rank = upper.len();
        let upper = upper
            .into_iter()
            .enumerate()
            .map(|(i, row)| row.into_iter().enumerate().map(|(j, v)| if j >= i { v & 1 } else { 0 }).collect())
            .collect();
        QuadraticFormF2 { rank, upper }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn eval(&self, x: u32) -> u32 {
        let mut acc = 0;
        for i in 0..self.rank {
            for j in i..self.rank {
                acc ^= (self.upper[i][j] as u32) & (x >> i) & (x >> j) & 1;
            }
        }
        acc
    }

    /// `phi` with `<phi(x), y> = q(x + y) + q(x) + q(y)`, as images of basis vectors.
    pub fn polar(&self) -> Vec<u32> {
        (0..self.rank)
            .map(|i| {
                (0..self.rank).fold(0u32, |acc, j| {
                    let b = self.eval((1 << i) ^ (1 << j)) ^ self.eval(1 << i) ^ self.eval(1 << j);
                    acc | (b << j)
                })
            })
            .collect()
    }

    pub fn apply_polar(&self, x: u32) -> u32 {
        self.polar().iter().enumerate().filter(|(i, _)| (x >> i) & 1 == 1).fold(0, |acc, (_, &c)| acc ^ c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_is_alternating_nondegenerate() {
        for r in 1..=4 {
            let s = SymplecticSpaceF2::new(r);
            for a in 0..s.size() {
                assert_eq!(s.omega(a, a), 0);
                if a != 0 {
                    assert!((0..s.size()).any(|b| s.omega(a, b) == 1));
                }
                for b in 0..s.size() {
                    // polar of q0
                    assert_eq!(s.q0(a ^ b) ^ s.q0(a) ^ s.q0(b), s.omega(a, b));
                }
            }
        }
    }

    #[test]
    fn polar_is_bilinear_alternating() {
        for bits in 0u32..64 {
            // all upper-triangular forms on F_2^3
            let mut upper = vec![vec![0u8; 3]; 3];
            let mut k = 0;
            for i in 0..3 {
                for j in i..3 {
                    upper[i][j] = ((bits >> k) & 1) as u8;
                    k += 1;
                }
            }
            let q = QuadraticFormF2::new(upper);
            for x in 0..8 {
                assert_eq!(dot(q.apply_polar(x), x), 0);
                for y in 0..8 {
                    assert_eq!(dot(q.apply_polar(x), y), q.eval(x ^ y) ^ q.eval(x) ^ q.eval(y));
                }
            }
        }
    }

    #[test]
    fn character_kinds() {
        let c = AffineCharacter { x: 0b1, xi: 0b1 };
        assert!(c.is_alternating());
        assert!(AffineCharacter { x: 0b01, xi: 0b10 }.is_symmetric());
    }
}

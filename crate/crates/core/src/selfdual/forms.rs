use super::{dot, AffineCharacter, SymplecticSpaceF2};
use crate::exactnum::{CycloMatrix, Cyclotomic, RootOfUnity};
use crate::fingroup::FiniteAbelianGroup;
use crate::heisenberg::{theta_inv, HeisenbergGroup, StandardRep, ThetaElement};
use crate::{Error, Result};

pub(crate) const ORDER: u64 = 4;

/// The forms `B_{x, xi} = sum_y (-1)^{<y, xi>} eps_y (x) eps_{x + y}` on `W = O(F_2^r)`,
/// as Gram matrices `G[y][x + y] = (-1)^{<y, xi>}`.
#[derive(Clone, Debug)]
pub struct FormBasis {
    space: SymplecticSpaceF2,
    forms: Vec<(AffineCharacter, CycloMatrix)>,
}

pub fn form_basis(r: usize) -> FormBasis {
    let space = SymplecticSpaceF2::new(r);
    let n = 1usize << r;
    let forms = (0..space.size())
        .map(|c| {
            let (x, xi) = space.split(c);
            let g = CycloMatrix::from_fn(n, n, ORDER, |a, b| {
                if b as u32 == (a as u32 ^ x) {
                    Cyclotomic::from_int(ORDER, if dot(a as u32, xi) == 0 { 1 } else { -1 })
                } else {
                    Cyclotomic::zero(ORDER)
                }
            });
            (AffineCharacter { x, xi }, g)
        })
        .collect();
    FormBasis { space, forms }
}

impl FormBasis {
    pub fn rank(&self) -> usize {
        self.space.rank
    }

    pub fn forms(&self) -> &[(AffineCharacter, CycloMatrix)] {
        &self.forms
    }

    pub fn get(&self, c: AffineCharacter) -> &CycloMatrix {
        &self.forms[self.space.join(c.x, c.xi) as usize].1
    }

    pub fn symmetric_count(&self) -> usize {
        self.forms.iter().filter(|(c, _)| c.is_symmetric()).count()
    }

    pub fn span_rank(&self) -> usize {
        let mats: Vec<CycloMatrix> = self.forms.iter().map(|(_, m)| m.clone()).collect();
        CycloMatrix::span_rank(&mats)
    }

    /// `H(K)` for `K = F_2^r` with scalars in `mu_4`, acting on `W`.
    pub fn theta_group(&self) -> HeisenbergGroup {
        HeisenbergGroup::new(&FiniteAbelianGroup::elementary(2, self.rank()), ORDER).expect("4 is a multiple of 2")
    }

    /// Canonical generators followed by the scalar `i`.
    pub fn theta_generators(&self) -> Vec<ThetaElement> {
        let g = self.theta_group();
        let mut gens = g.generators();
        gens.push(g.scalar(1));
        gens
    }

    /// `chi_{x, xi}(g)` from the formula.
    pub fn formula_weight(&self, c: AffineCharacter, g: &ThetaElement) -> RootOfUnity {
        let y = bits(g.x.coords());
        let eta = bits(g.chi.coords());
        g.scalar.pow(-2) * RootOfUnity::new(2, c.sign_exponent(y, eta) as i64)
    }

    /// `w` with `B(g^{-1} ., g^{-1} .) = w B`, measured on the matrices.
    pub fn measured_weight(&self, c: AffineCharacter, g: &ThetaElement) -> Result<RootOfUnity> {
        let rep = StandardRep::with_group(&self.theta_group());
        let g_inv = rep.matrix(&theta_inv(g))?;
        let b = self.get(c);
        let moved = g_inv.transpose().try_mul(b)?.try_mul(&g_inv)?;
        eigen_ratio(b, &moved)
    }

    /// Each `B_{x, xi}` is an eigenvector with the formula weight, and the
    /// weights on the generators are pairwise distinct.
    pub fn check_weights(&self) -> Result<bool> {
        let gens = self.theta_generators();
        let mut seen = std::collections::HashSet::new();
        for (c, _) in &self.forms {
            let mut tuple = Vec::with_capacity(gens.len());
            for g in &gens {
                let w = self.measured_weight(*c, g)?;
                if w != self.formula_weight(*c, g) {
                    return Ok(false);
                }
                tuple.push(w);
            }
            seen.insert(tuple);
        }
        Ok(seen.len() == self.forms.len())
    }
}

pub(crate) fn bits(coords: &[u64]) -> u32 {
    coords.iter().enumerate().fold(0, |acc, (i, &c)| acc | (((c & 1) as u32) << i))
}

/// `w` with `moved = w * base`, a root of unity.
pub(crate) fn eigen_ratio(base: &CycloMatrix, moved: &CycloMatrix) -> Result<RootOfUnity> {
    let (i, j) = (0..base.rows())
        .flat_map(|i| (0..base.cols()).map(move |j| (i, j)))
        .find(|&(i, j)| !base.get(i, j).is_zero())
        .ok_or_else(|| Error::InternalInvariantViolation("zero form".into()))?;
    let ratio = moved.get(i, j) * &base.get(i, j).inv()?;
    if *moved != base.scale(&ratio).lift(moved.order())? {
        return Err(Error::InternalInvariantViolation("not an eigenvector".into()));
    }
    ratio.as_root_of_unity().ok_or_else(|| Error::InternalInvariantViolation("weight is not a root of unity".into()))
}

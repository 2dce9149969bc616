use crate::exactnum::{joint_eigenspaces, lcm, CycloMatrix, Cyclotomic, RootOfUnity};
use crate::fingroup::{DualElement, FiniteAbelianGroup, GroupElement};
use crate::pairing::AlternatingPairing;
use crate::{Error, Result};

/// A projective representation of `H`: matrices lifting the canonical generators.
#[derive(Clone, Debug)]
pub struct ProjectiveRep {
    group: FiniteAbelianGroup,
    matrices: Vec<CycloMatrix>,
}

/// Genuine linear representation of `H` lifting a projective one, in a
/// basis of common eigenvectors.
#[derive(Clone, Debug)]
pub struct LinearLift {
    pub matrices: Vec<CycloMatrix>,
    pub basis: CycloMatrix,
    pub characters: Vec<DualElement>,
}

#[derive(Clone, Debug)]
pub enum SplitOutcome {
    Split(LinearLift),
    Refused { x: GroupElement, y: GroupElement, value: RootOfUnity },
}

impl ProjectiveRep {
    pub fn new(group: &FiniteAbelianGroup, matrices: Vec<CycloMatrix>) -> Result<Self> {
        if matrices.len() != group.rank() {
            return Err(Error::DimensionMismatch(format!("{} generators, {} matrices", group.rank(), matrices.len())));
        }
        if let Some(m) = matrices.first() {
            if matrices.iter().any(|x| !x.is_square() || x.rows() != m.rows()) {
                return Err(Error::DimensionMismatch("matrices must be square of equal size".into()));
            }
        }
        Ok(ProjectiveRep { group: group.clone(), matrices })
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn matrices(&self) -> &[CycloMatrix] {
        &self.matrices
    }

    pub fn dimension(&self) -> usize {
        self.matrices.first().map_or(1, |m| m.rows())
    }
}

impl LinearLift {
    /// `P^{-1} g_i P` is the diagonal of character values, and `g_i^{n_i} = 1`.
    pub fn verify(&self, group: &FiniteAbelianGroup) -> Result<bool> {
        let p_inv = self.basis.inverse()?;
        for (i, g) in self.matrices.iter().enumerate() {
            let n = g.rows();
            if g.pow(group.factors()[i]) != CycloMatrix::identity(n, g.order()) {
                return Ok(false);
            }
            let d = p_inv.try_mul(g)?.try_mul(&self.basis)?;
            let o = d.order();
            let expected = CycloMatrix::from_fn(n, n, o, |r, c| {
                if r != c {
                    return Cyclotomic::zero(o);
                }
                let v = self.characters[r].eval(&group.generator(i)).unwrap();
                v.to_cyclotomic(lcm(o, v.order())).unwrap().lift(o).unwrap()
            });
            if d != expected {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Splits the extension when `e = 1`; otherwise names a generator pair with
/// `e(x, y) != 1`. The matrices must realise `e` as their commutators.
pub fn split_if_trivial_pairing(e: &AlternatingPairing, rep: &ProjectiveRep) -> Result<SplitOutcome> {
    let h = e.group();
    h.check_same(&rep.group)?;
    let gens = h.generators();
    let n = e.value_order();
    for i in 0..gens.len() {
        for j in 0..gens.len() {
            let c = e.eval(&gens[i], &gens[j])?.to_cyclotomic(n)?;
            let lhs = rep.matrices[i].try_mul(&rep.matrices[j])?;
            let rhs = rep.matrices[j].try_mul(&rep.matrices[i])?.scale(&c);
            if lhs.lift(rhs.order())? != rhs {
                return Err(Error::NotARepresentation(format!("commutator of generators {i}, {j} disagrees with e")));
            }
        }
    }
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            let value = e.eval(&gens[i], &gens[j])?;
            if !value.is_one() {
                return Ok(SplitOutcome::Refused { x: gens[i].clone(), y: gens[j].clone(), value });
            }
        }
    }

    let dim = rep.dimension();
    let mut matrices = Vec::with_capacity(gens.len());
    for (i, g) in rep.matrices.iter().enumerate() {
        let ni = h.factors()[i];
        let c = g
            .pow(ni)
            .as_scalar()
            .and_then(|c| c.as_root_of_unity())
            .ok_or_else(|| Error::NotARepresentation(format!("generator {i} to the power {ni} is not a root of unity")))?;
        let s = RootOfUnity::new(c.order() * ni, -(c.exp() as i64));
        let o = lcm(g.order(), s.order());
        matrices.push(g.lift(o)?.scale(&s.to_cyclotomic(o)?));
    }

    let orders = h.factors().to_vec();
    let spaces = joint_eigenspaces(&matrices, &orders)?;
    let order = spaces.first().map_or(1, |(_, u)| u.order());
    let mut columns = Vec::with_capacity(dim);
    let mut characters = Vec::with_capacity(dim);
    for (coords, u) in &spaces {
        let coords: Vec<i64> = coords.iter().map(|&c| c as i64).collect();
        for j in 0..u.cols() {
            columns.push(u.column(j));
            characters.push(h.character(&coords)?);
        }
    }
    let basis = CycloMatrix::from_columns(order, dim, &columns);
    Ok(SplitOutcome::Split(LinearLift { matrices, basis, characters }))
}

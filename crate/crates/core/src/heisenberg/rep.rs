use serde::Serialize;

use super::{commutator_pairing, theta_inv, theta_mul, HeisenbergGroup, ThetaElement};
use crate::exactnum::{CycloMatrix, Cyclotomic, RootOfUnity};
use crate::fingroup::{FiniteAbelianGroup, GroupElement};
use crate::{Error, Result};

/// `((t, x, chi) f)(y) = t chi(y) f(x + y)` on functions `K -> Q(zeta_M)`.
///
/// The delta basis is ordered like `K::elements`, first coordinate fastest.
#[derive(Clone, Debug)]
pub struct StandardRep {
    group: HeisenbergGroup,
}

#[derive(Serialize)]
pub struct RepDumpEntry {
    pub element: ThetaElement,
    pub matrix: CycloMatrix,
}

pub fn standard_rep(k: &FiniteAbelianGroup) -> StandardRep {
    StandardRep { group: HeisenbergGroup::standard(k) }
}

impl StandardRep {
    pub fn with_group(group: &HeisenbergGroup) -> Self {
        StandardRep { group: group.clone() }
    }

    pub fn group(&self) -> &HeisenbergGroup {
        &self.group
    }

    pub fn k(&self) -> &FiniteAbelianGroup {
        self.group.k()
    }

    pub fn dimension(&self) -> usize {
        self.k().order() as usize
    }

    /// Cyclotomic order of the matrix entries.
    pub fn order(&self) -> u64 {
        self.group.scalar_order()
    }

    /// `g delta_z = t chi(z - x) delta_{z - x}`.
    pub fn matrix(&self, g: &ThetaElement) -> Result<CycloMatrix> {
        let k = self.k();
        k.check_same(g.x.group())?;
        k.check_same(g.chi.group())?;
        let m = self.order();
        let t = g.scalar.reduced().lift_order(m)?;
        let n = self.dimension();
        let mut out = CycloMatrix::zeros(n, n, m);
        for z in k.elements() {
            let y = z.sub(&g.x)?;
            let v = t * g.chi.eval(&y)?;
            let e = v.reduced().lift_order(m)?.exp();
            out.set(y.index() as usize, z.index() as usize, Cyclotomic::zeta_pow(m, e as i64));
        }
        Ok(out)
    }

    /// Images of `(1, x, chi)` for every lattice element.
    pub fn lift_images(&self) -> Vec<CycloMatrix> {
        self.group.lifts().iter().map(|g| self.matrix(g).expect("own group")).collect()
    }

    pub fn verify_irreducible(&self) -> bool {
        verify_irreducible(&self.lift_images())
    }

    pub fn dump(&self) -> Vec<RepDumpEntry> {
        self.group
            .generators()
            .into_iter()
            .map(|g| {
                let matrix = self.matrix(&g).expect("own group");
                RepDumpEntry { element: g, matrix }
            })
            .collect()
    }

    /// `rep(a b) = rep(a) rep(b)`, checked exactly.
    pub fn check_product(&self, a: &ThetaElement, b: &ThetaElement) -> Result<bool> {
        let lhs = self.matrix(&theta_mul(a, b)?)?;
        let rhs = self.matrix(a)?.try_mul(&self.matrix(b)?)?;
        Ok(lhs == rhs)
    }

    /// Homomorphism check: every element times every generator, scalars included.
    pub fn check_homomorphism(&self) -> Result<bool> {
        let mut gens = self.group.generators();
        gens.push(self.group.scalar(1));
        let mats: Vec<CycloMatrix> = gens.iter().map(|g| self.matrix(g)).collect::<Result<_>>()?;
        for a in self.group.lifts() {
            let ma = self.matrix(&a)?;
            if !ma.is_monomial() {
                return Ok(false);
            }
            for (g, mg) in gens.iter().zip(&mats) {
                if self.matrix(&theta_mul(&a, g)?)? != ma.try_mul(mg)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Scalar part of `rep(a) rep(b) rep(a)^{-1} rep(b)^{-1}`.
    pub fn matrix_commutator(&self, a: &ThetaElement, b: &ThetaElement) -> Result<RootOfUnity> {
        let c = self
            .matrix(a)?
            .try_mul(&self.matrix(b)?)?
            .try_mul(&self.matrix(&theta_inv(a))?)?
            .try_mul(&self.matrix(&theta_inv(b))?)?;
        c.as_scalar()
            .and_then(|s| s.as_root_of_unity())
            .ok_or_else(|| Error::InternalInvariantViolation("commutator of lifts is not a scalar root of unity".into()))
    }

    /// The commutator pairing read off the matrices on generator pairs.
    pub fn extracted_pairing(&self) -> Result<crate::pairing::AlternatingPairing> {
        let lat = self.group.lattice();
        let gens = self.group.generators();
        let n = lat.exponent();
        let mut m = vec![vec![0i64; gens.len()]; gens.len()];
        for (i, a) in gens.iter().enumerate() {
            for (j, b) in gens.iter().enumerate() {
                m[i][j] = self.matrix_commutator(a, b)?.lift_order(n)?.exp() as i64;
            }
        }
        crate::pairing::AlternatingPairing::new(&lat, &m)
    }
}

/// The images span the full matrix algebra.
pub fn verify_irreducible(images: &[CycloMatrix]) -> bool {
    match images.first() {
        None => false,
        Some(m) => CycloMatrix::span_rank(images) == m.rows() * m.rows(),
    }
}

/// `u_{x, chi} = rep(1, x, chi)`, indexed by the lattice `K (+) X(K)`.
#[derive(Clone, Debug)]
pub struct UhBasis {
    rep: StandardRep,
    elements: Vec<GroupElement>,
    matrices: Vec<CycloMatrix>,
}

pub fn uh_basis(k: &FiniteAbelianGroup) -> UhBasis {
    let rep = standard_rep(k);
    let elements: Vec<GroupElement> = rep.group().lattice().elements().collect();
    let matrices = rep.lift_images();
    UhBasis { rep, elements, matrices }
}

impl UhBasis {
    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn matrices(&self) -> &[CycloMatrix] {
        &self.matrices
    }

    pub fn get(&self, h: &GroupElement) -> &CycloMatrix {
        &self.matrices[h.index() as usize]
    }

    /// `c` with `u_h u_h' = c u_{h + h'}`, namely `chi'(x)`.
    pub fn structure_constant(&self, h: &GroupElement, h2: &GroupElement) -> RootOfUnity {
        let k = self.rep.k();
        let (x, _) = super::split_lattice(k, h);
        let (_, chi2) = super::split_lattice(k, h2);
        chi2.eval(&x).expect("same K")
    }

    pub fn span_rank(&self) -> usize {
        CycloMatrix::span_rank(&self.matrices)
    }

    pub fn is_basis(&self) -> bool {
        let n = self.rep.dimension();
        self.matrices.len() == n * n && self.span_rank() == n * n
    }

    /// Every product `u_h u_h'` against `chi'(x) u_{h + h'}`.
    pub fn check_products(&self) -> Result<bool> {
        let m = self.rep.order();
        for h in &self.elements {
            for h2 in &self.elements {
                let c = self.structure_constant(h, h2).reduced().lift_order(m)?;
                let lhs = self.get(h).try_mul(self.get(h2))?;
                let rhs = self.get(&h.add(h2)?).scale(&Cyclotomic::zeta_pow(m, c.exp() as i64));
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// `w` with `rep(h') u_h rep(h')^{-1} = w u_h`.
    pub fn conjugation_weight(&self, h_conj: &GroupElement, h: &GroupElement) -> Result<RootOfUnity> {
        let g = self.rep.group().lift(h_conj)?;
        let a = self.rep.matrix(&g)?;
        let a_inv = self.rep.matrix(&theta_inv(&g))?;
        let u = self.get(h);
        let c = a.try_mul(u)?.try_mul(&a_inv)?;
        let (i, j) = first_nonzero(u).ok_or_else(|| Error::InternalInvariantViolation("zero basis matrix".into()))?;
        let ratio = c.get(i, j) * &u.get(i, j).inv()?;
        if c != u.scale(&ratio) {
            return Err(Error::InternalInvariantViolation("conjugate is not a multiple of u_h".into()));
        }
        ratio.as_root_of_unity().ok_or_else(|| Error::InternalInvariantViolation("weight is not a root of unity".into()))
    }

    /// Weight tables `h' -> w(h', h)`, one per `h`; each is `e(h', h)`.
    pub fn conjugation_weights(&self) -> Result<Vec<Vec<RootOfUnity>>> {
        self.elements
            .iter()
            .map(|h| self.elements.iter().map(|h2| self.conjugation_weight(h2, h)).collect())
            .collect()
    }

    /// All `|H|` weight characters are distinct and agree with the pairing.
    pub fn weights_regular(&self) -> Result<bool> {
        let e = commutator_pairing(self.rep.k());
        let tables = self.conjugation_weights()?;
        for (h, row) in self.elements.iter().zip(&tables) {
            for (h2, w) in self.elements.iter().zip(row) {
                if *w != e.eval(h2, h)? {
                    return Ok(false);
                }
            }
        }
        let distinct: std::collections::HashSet<&Vec<RootOfUnity>> = tables.iter().collect();
        Ok(distinct.len() == self.elements.len())
    }
}

fn first_nonzero(m: &CycloMatrix) -> Option<(usize, usize)> {
    (0..m.rows()).flat_map(|i| (0..m.cols()).map(move |j| (i, j))).find(|&(i, j)| !m.get(i, j).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::CycloMatrix;

    fn group(f: &[u64]) -> FiniteAbelianGroup {
        FiniteAbelianGroup::new(f.to_vec()).unwrap()
    }

    #[test]
    fn z2_matrices() {
        let k = group(&[2]);
        let rep = standard_rep(&k);
        assert_eq!(rep.dimension(), 2);
        let g = rep.group();
        let a = g.element(RootOfUnity::one(), &k.generator(0), &k.trivial_character()).unwrap();
        let b = g.element(RootOfUnity::one(), &k.zero(), &k.dual_generator(0)).unwrap();
        assert_eq!(rep.matrix(&a).unwrap(), CycloMatrix::from_ints(2, &[vec![0, 1], vec![1, 0]]));
        assert_eq!(rep.matrix(&b).unwrap(), CycloMatrix::from_ints(2, &[vec![1, 0], vec![0, -1]]));
    }

    #[test]
    fn z2_lifted_generators_exhaustive() {
        // the 8 elements of mu_2 x K x X(K)
        let k = group(&[2]);
        let rep = standard_rep(&k);
        let g = rep.group();
        let all: Vec<ThetaElement> = (0..2)
            .flat_map(|s| g.lifts().into_iter().map(move |mut a| {
                a.scalar = RootOfUnity::new(2, s);
                a
            }))
            .collect();
        assert_eq!(all.len(), 8);
        for a in &all {
            for b in &all {
                assert!(rep.check_product(a, b).unwrap());
            }
        }
    }

    #[test]
    fn homomorphism_and_pairing_small() {
        for n in 1..=6 {
            for k in FiniteAbelianGroup::all_of_order(n) {
                let rep = standard_rep(&k);
                assert_eq!(rep.dimension() as u64, n);
                let lifts = rep.group().lifts();
                for a in &lifts {
                    for b in &lifts {
                        assert!(rep.check_product(a, b).unwrap());
                    }
                }
                assert!(rep.check_homomorphism().unwrap());
                assert_eq!(rep.extracted_pairing().unwrap(), commutator_pairing(&k));
            }
        }
    }

    #[test]
    fn irreducibility() {
        assert!(standard_rep(&group(&[2])).verify_irreducible());
        assert!(standard_rep(&group(&[3])).verify_irreducible());
        let doubled: Vec<CycloMatrix> =
            standard_rep(&group(&[2])).lift_images().iter().map(|m| CycloMatrix::block_diag(&[m.clone(), m.clone()])).collect();
        assert!(!verify_irreducible(&doubled));
    }

    #[test]
    fn uh_identity_and_z2_product() {
        let k = group(&[2]);
        let u = uh_basis(&k);
        let lat = u.elements()[0].group().clone();
        assert_eq!(u.get(&lat.zero()), &CycloMatrix::identity(2, 2));
        let a = lat.element(&[1, 0]).unwrap();
        let b = lat.element(&[0, 1]).unwrap();
        let ab = lat.element(&[1, 1]).unwrap();
        let prod = u.get(&a).try_mul(u.get(&b)).unwrap();
        assert_eq!(prod, u.get(&ab).scale(&Cyclotomic::from_int(2, -1)));
    }

    #[test]
    fn uh_suite_small() {
        for n in 1..=6 {
            for k in FiniteAbelianGroup::all_of_order(n) {
                let u = uh_basis(&k);
                assert!(u.is_basis(), "{k}");
                assert!(u.check_products().unwrap());
                assert!(u.weights_regular().unwrap());
            }
        }
        assert_eq!(uh_basis(&group(&[2, 2])).span_rank(), 16);
    }
}

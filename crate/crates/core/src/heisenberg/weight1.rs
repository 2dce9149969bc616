use super::split::ProjectiveRep;
use super::{standard_rep, HeisenbergGroup, ThetaElement};
use crate::exactnum::{lcm, CycloMatrix, Cyclotomic};
use crate::fingroup::DualElement;
use crate::{Error, Result};

/// A representation of `H(K)` on which scalars act by scalar multiplication,
/// stored by the images of `a_i = (1, k_i, 0)` and `b_i = (1, 0, chi_i)`.
#[derive(Clone, Debug)]
pub struct Weight1Rep {
    group: HeisenbergGroup,
    dim: usize,
    order: u64,
    a: Vec<CycloMatrix>,
    b: Vec<CycloMatrix>,
}

/// `V ~ W(K)^m` with `rho(g) T = T (I_m (x) W(g))`.
#[derive(Clone, Debug)]
pub struct Weight1Decomposition {
    pub multiplicity: usize,
    pub intertwiner: CycloMatrix,
}

impl Weight1Rep {
    /// Accepts images of arbitrary elements; the canonical generators must
    /// appear (up to a scalar), and everything else is checked against them.
    pub fn new(group: &HeisenbergGroup, generators: &[(ThetaElement, CycloMatrix)]) -> Result<Self> {
        let dim = generators.first().map(|(_, m)| m.rows()).ok_or_else(|| {
            Error::NotARepresentation("no generator images given".into())
        })?;
        if generators.iter().any(|(_, m)| m.rows() != dim || m.cols() != dim) {
            return Err(Error::DimensionMismatch("generator images must be square of equal size".into()));
        }
        let order = generators.iter().fold(group.scalar_order(), |acc, (_, m)| lcm(acc, m.order()));
        let lat = group.lattice();
        let mut slots: Vec<Option<CycloMatrix>> = vec![None; lat.rank()];
        for (g, m) in generators {
            let m = m.lift(order)?;
            let h = group.project(g);
            if h.is_zero() {
                let expected = CycloMatrix::scalar(dim, &g.scalar.to_cyclotomic(lcm(order, g.scalar.order()))?);
                if m != expected.lift(order)? {
                    return Err(Error::NotWeightOne(format!("scalar {} does not act as multiplication", g.scalar)));
                }
                continue;
            }
            if let Some(i) = lat.generators().iter().position(|x| *x == h) {
                let unscale = g.scalar.inv().to_cyclotomic(order)?;
                slots[i].get_or_insert(m.scale(&unscale));
            }
        }
        let mut a = Vec::new();
        let mut b = Vec::new();
        for (i, s) in slots.into_iter().enumerate() {
            let m = s.ok_or_else(|| Error::NotARepresentation(format!("missing image of lattice generator {i}")))?;
            if i % 2 == 0 {
                a.push(m);
            } else {
                b.push(m);
            }
        }
        let rep = Weight1Rep { group: group.clone(), dim, order, a, b };
        rep.check_relations()?;
        for (g, m) in generators {
            if !group.project(g).is_zero() && rep.image(g)? != m.lift(order)? {
                return Err(Error::NotARepresentation("image inconsistent with the generator images".into()));
            }
        }
        Ok(rep)
    }

    pub fn from_matrices(group: &HeisenbergGroup, a: Vec<CycloMatrix>, b: Vec<CycloMatrix>) -> Result<Self> {
        let gens: Vec<(ThetaElement, CycloMatrix)> = group
            .generators()
            .into_iter()
            .zip(a.into_iter().zip(b).flat_map(|(x, y)| [x, y]))
            .collect();
        if gens.len() != 2 * group.k().rank() {
            return Err(Error::DimensionMismatch("one image per canonical generator expected".into()));
        }
        Self::new(group, &gens)
    }

    pub fn standard(group: &HeisenbergGroup) -> Self {
        let rep = super::StandardRep::with_group(group);
        let gens: Vec<_> = group.generators().into_iter().map(|g| {
            let m = rep.matrix(&g).expect("own group");
            (g, m)
        }).collect();
        if gens.is_empty() {
            // K trivial: H(K) is just the scalars
            return Weight1Rep { group: group.clone(), dim: 1, order: group.scalar_order(), a: vec![], b: vec![] };
        }
        Self::new(group, &gens).expect("standard representation satisfies the relations")
    }

    pub fn group(&self) -> &HeisenbergGroup {
        &self.group
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn a(&self) -> &[CycloMatrix] {
        &self.a
    }

    pub fn b(&self) -> &[CycloMatrix] {
        &self.b
    }

    pub fn direct_sum(&self, other: &Weight1Rep) -> Result<Self> {
        if self.group != other.group {
            return Err(Error::ParentMismatch(self.group.k().to_string(), other.group.k().to_string()));
        }
        let order = lcm(self.order, other.order);
        let sum = |x: &CycloMatrix, y: &CycloMatrix| CycloMatrix::block_diag(&[x.lift(order).unwrap(), y.lift(order).unwrap()]);
        Ok(Weight1Rep {
            group: self.group.clone(),
            dim: self.dim + other.dim,
            order,
            a: self.a.iter().zip(&other.a).map(|(x, y)| sum(x, y)).collect(),
            b: self.b.iter().zip(&other.b).map(|(x, y)| sum(x, y)).collect(),
        })
    }

    /// `P^{-1} rho P`.
    pub fn conjugate(&self, p: &CycloMatrix) -> Result<Self> {
        let p_inv = p.inverse()?;
        let order = lcm(self.order, p.order());
        let conj = |m: &CycloMatrix| -> Result<CycloMatrix> { p_inv.try_mul(m)?.try_mul(p)?.lift(order) };
        Ok(Weight1Rep {
            group: self.group.clone(),
            dim: self.dim,
            order,
            a: self.a.iter().map(conj).collect::<Result<_>>()?,
            b: self.b.iter().map(conj).collect::<Result<_>>()?,
        })
    }

    /// `rho(t, x, chi) = t chi(x)^{-1} A(x) B(chi)`.
    pub fn image(&self, g: &ThetaElement) -> Result<CycloMatrix> {
        let k = self.group.k();
        k.check_same(g.x.group())?;
        let mut acc = CycloMatrix::identity(self.dim, self.order);
        for (i, &c) in g.x.coords().iter().enumerate() {
            acc = acc.try_mul(&self.a[i].pow(c))?;
        }
        for (i, &c) in g.chi.coords().iter().enumerate() {
            acc = acc.try_mul(&self.b[i].pow(c))?;
        }
        let t = g.scalar * g.chi.eval(&g.x)?.inv();
        let m = lcm(self.order, t.reduced().order());
        acc.scale(&t.to_cyclotomic(m)?).lift(m)
    }

    fn character_image(&self, chi: &DualElement) -> Result<CycloMatrix> {
        let mut acc = CycloMatrix::identity(self.dim, self.order);
        for (i, &c) in chi.coords().iter().enumerate() {
            acc = acc.try_mul(&self.b[i].pow(c))?;
        }
        Ok(acc)
    }

    /// `a_i^{n_i} = b_i^{n_i} = 1`, the `a`s and the `b`s commute among
    /// themselves, and `a_i b_j = chi_j(k_i) b_j a_i`.
    pub fn check_relations(&self) -> Result<()> {
        let k = self.group.k();
        let id = CycloMatrix::identity(self.dim, self.order);
        let fail = |msg: String| Err(Error::NotARepresentation(msg));
        for (i, &n) in k.factors().iter().enumerate() {
            if self.a[i].pow(n) != id {
                return fail(format!("a_{i}^{n} != 1"));
            }
            if self.b[i].pow(n) != id {
                return fail(format!("b_{i}^{n} != 1"));
            }
        }
        for i in 0..k.rank() {
            for j in 0..k.rank() {
                if i < j {
                    if self.a[i].try_mul(&self.a[j])? != self.a[j].try_mul(&self.a[i])? {
                        return fail(format!("a_{i} and a_{j} do not commute"));
                    }
                    if self.b[i].try_mul(&self.b[j])? != self.b[j].try_mul(&self.b[i])? {
                        return fail(format!("b_{i} and b_{j} do not commute"));
                    }
                }
                let c = k.dual_generator(j).eval(&k.generator(i))?.to_cyclotomic(self.order)?;
                let lhs = self.a[i].try_mul(&self.b[j])?;
                let rhs = self.b[j].try_mul(&self.a[i])?.scale(&c);
                if lhs != rhs {
                    return fail(format!("a_{i} b_{j} != chi_{j}(k_{i}) b_{j} a_{i}"));
                }
            }
        }
        Ok(())
    }

    /// The projective representation of `K (+) X(K)` obtained by forgetting scalars.
    pub fn projective(&self) -> ProjectiveRep {
        let matrices = self.a.iter().zip(&self.b).flat_map(|(x, y)| [x.clone(), y.clone()]).collect();
        ProjectiveRep::new(&self.group.lattice(), matrices).expect("one matrix per lattice generator")
    }
}

/// `m = dim V^K` together with an explicit isomorphism `W(K)^m -> V`.
pub fn decompose_weight1(rep: &Weight1Rep) -> Result<Weight1Decomposition> {
    let k = rep.group.k();
    let n = k.order() as usize;
    let dim = rep.dim;
    let order = rep.order;
    // common fixed space of the lifted K
    let r = k.rank();
    let stacked = CycloMatrix::from_fn(dim * r.max(1), dim, order, |row, col| {
        if r == 0 {
            return Cyclotomic::zero(order);
        }
        let (i, rr) = (row / dim, row % dim);
        let v = rep.a[i].get(rr, col).clone();
        if rr == col {
            v - Cyclotomic::one(order)
        } else {
            v
        }
    });
    let fixed = stacked.kernel();
    let m = fixed.cols();
    if m * n != dim {
        return Err(Error::NotARepresentation(format!("dim V^K = {m} but dim V = {dim} and |K| = {n}")));
    }

    let chars: Vec<DualElement> = k.characters().collect();
    let b_images: Vec<CycloMatrix> = chars.iter().map(|c| rep.character_image(c)).collect::<Result<_>>()?;
    // F[y][chi] = chi(y): the characters written in the delta basis
    let f = CycloMatrix::from_fn(n, n, order, |y, c| {
        let e = chars[c].eval(&k.element_at(y as u64)).unwrap();
        e.to_cyclotomic(order).unwrap()
    });
    let f_inv = f.inverse()?;
    let mut blocks = Vec::with_capacity(m);
    for j in 0..m {
        let v = CycloMatrix::from_columns(order, dim, &[fixed.column(j)]);
        let cols: Vec<Vec<Cyclotomic>> =
            b_images.iter().map(|b| b.try_mul(&v).map(|w| w.column(0))).collect::<Result<_>>()?;
        blocks.push(CycloMatrix::from_columns(order, dim, &cols).try_mul(&f_inv)?);
    }
    let t = CycloMatrix::hstack(&blocks);
    if t.rank() != dim {
        return Err(Error::NotARepresentation("translates of V^K do not span V".into()));
    }

    let w = standard_rep(k);
    for (g, image) in rep.group.generators().iter().zip(rep.a.iter().zip(&rep.b).flat_map(|(x, y)| [x, y])) {
        let wg = w.matrix(g)?.lift(order)?;
        let block = CycloMatrix::block_diag(&vec![wg; m]);
        if image.try_mul(&t)? != t.try_mul(&block)? {
            return Err(Error::NotARepresentation("intertwiner check failed".into()));
        }
    }
    Ok(Weight1Decomposition { multiplicity: m, intertwiner: t })
}

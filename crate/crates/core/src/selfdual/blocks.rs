use std::collections::{HashSet, VecDeque};

use serde::Serialize;

use super::forms::{form_basis, ORDER};
use crate::exactnum::{joint_eigenspaces, CycloMatrix, Cyclotomic, RootOfUnity};
use crate::pairing::{AlternatingPairing, Block};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BlockKind {
    Dihedral,
    Quaternion,
}

/// Lifted generators `a_1, b_1, ..., a_r, b_r` over `Q(i)` with a form `B`
/// satisfying `g^T B g = beta(g)^{-1} B`.
#[derive(Clone, Debug)]
pub struct SelfDualThetaGroup {
    rank: usize,
    sign: i8,
    generators: Vec<CycloMatrix>,
    form: CycloMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignReport {
    pub rank: usize,
    pub sign: i8,
    pub form: &'static str,
    pub group_order: usize,
}

/// `D = <X, Z>` preserving the identity form, or `Q = <iX, iZ>` preserving `J`.
pub fn build_block(kind: BlockKind) -> SelfDualThetaGroup {
    let x = CycloMatrix::from_ints(ORDER, &[vec![0, 1], vec![1, 0]]);
    let z = CycloMatrix::from_ints(ORDER, &[vec![1, 0], vec![0, -1]]);
    match kind {
        BlockKind::Dihedral => {
            SelfDualThetaGroup { rank: 1, sign: 1, generators: vec![x, z], form: CycloMatrix::identity(2, ORDER) }
        }
        BlockKind::Quaternion => {
            let i = Cyclotomic::zeta_pow(ORDER, 1);
            SelfDualThetaGroup {
                rank: 1,
                sign: -1,
                generators: vec![x.scale(&i), z.scale(&i)],
                form: CycloMatrix::from_ints(ORDER, &[vec![0, 1], vec![-1, 0]]),
            }
        }
    }
}

/// Realised on `W_a (x) W_b` with `B = B_a (x) B_b`.
pub fn central_product(a: &SelfDualThetaGroup, b: &SelfDualThetaGroup) -> SelfDualThetaGroup {
    let ia = CycloMatrix::identity(a.dimension(), ORDER);
    let ib = CycloMatrix::identity(b.dimension(), ORDER);
    let mut generators: Vec<CycloMatrix> = a.generators.iter().map(|g| g.kron(&ib)).collect();
    generators.extend(b.generators.iter().map(|g| ia.kron(g)));
    SelfDualThetaGroup { rank: a.rank + b.rank, sign: a.sign * b.sign, generators, form: a.form.kron(&b.form) }
}

impl SelfDualThetaGroup {
    pub fn new(rank: usize, sign: i8, generators: Vec<CycloMatrix>, form: CycloMatrix) -> Result<Self> {
        let n = 1usize << rank;
        if generators.len() != 2 * rank || generators.iter().any(|g| g.rows() != n || g.cols() != n) {
            return Err(Error::DimensionMismatch(format!("rank {rank} needs {} matrices of size {n}", 2 * rank)));
        }
        if form.rows() != n || form.cols() != n {
            return Err(Error::DimensionMismatch("form size".into()));
        }
        Ok(SelfDualThetaGroup { rank, sign, generators, form })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// The sign recorded at construction.
    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn generators(&self) -> &[CycloMatrix] {
        &self.generators
    }

    pub fn form(&self) -> &CycloMatrix {
        &self.form
    }

    pub fn dimension(&self) -> usize {
        1 << self.rank
    }

    /// `P^{-1} g P` and `P^T B P`.
    pub fn conjugate(&self, p: &CycloMatrix) -> Result<Self> {
        let p_inv = p.inverse()?;
        let generators = self.generators.iter().map(|g| p_inv.try_mul(g)?.try_mul(p)).collect::<Result<_>>()?;
        let form = p.transpose().try_mul(&self.form)?.try_mul(p)?;
        Ok(SelfDualThetaGroup { rank: self.rank, sign: self.sign, generators, form })
    }

    /// `g^T B g = B` for every generator.
    pub fn form_is_invariant(&self) -> Result<bool> {
        for g in &self.generators {
            if g.transpose().try_mul(&self.form)?.try_mul(g)? != self.form.lift(g.order().max(self.form.order()))? {
                return Ok(false);
            }
        }
        Ok(self.form.rank() == self.dimension())
    }

    /// Commutators of the generators, as a pairing on `(Z/2)^{2r}`.
    pub fn commutator_pairing(&self) -> Result<AlternatingPairing> {
        let k = self.generators.len();
        let mut m = vec![vec![0i64; k]; k];
        for i in 0..k {
            for j in 0..k {
                let gi = &self.generators[i];
                let gj = &self.generators[j];
                let lhs = gi.try_mul(gj)?;
                let rhs = gj.try_mul(gi)?;
                m[i][j] = if lhs == rhs {
                    0
                } else if lhs == rhs.scale(&Cyclotomic::from_int(ORDER, -1)) {
                    1
                } else {
                    return Err(Error::InternalInvariantViolation("generators neither commute nor anticommute".into()));
                };
            }
        }
        let h = crate::fingroup::FiniteAbelianGroup::elementary(2, k);
        AlternatingPairing::new(&h, &m)
    }

    /// The commutator pairing is the standard symplectic form.
    pub fn has_standard_pairing(&self) -> Result<bool> {
        let standard = AlternatingPairing::from_blocks(&vec![Block { n: 2, d: 1 }; self.rank])?;
        Ok(self.commutator_pairing()? == standard)
    }

    /// Order of the finite matrix group generated by the lifts.
    pub fn finite_order(&self) -> usize {
        let id = CycloMatrix::identity(self.dimension(), ORDER);
        let mut seen = HashSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(m) = queue.pop_front() {
            for g in &self.generators {
                let n = m.try_mul(g).expect("square matrices");
                if seen.insert(n.clone()) {
                    queue.push_back(n);
                }
            }
        }
        seen.len()
    }

    pub fn sign_report(&self) -> Result<SignReport> {
        let sign = classify_sign(self)?;
        Ok(SignReport {
            rank: self.rank,
            sign,
            form: if sign == 1 { "symmetric" } else { "alternating" },
            group_order: self.finite_order(),
        })
    }
}

/// Sign of the unique invariant form (`beta = 1` on the generator lifts).
pub fn classify_sign(g: &SelfDualThetaGroup) -> Result<i8> {
    classify_sign_with(g, &vec![RootOfUnity::one(); g.generators.len()])
}

/// Solves `g^T B g = beta(g)^{-1} B`; `+1` for a symmetric solution, `-1`
/// for an alternating one.
///
/// When some generators commute, the system is first restricted to their
/// joint eigenframe, where `B_T[i][j]` vanishes unless
/// `lambda_i lambda_j = beta^{-1}`; otherwise it is solved in the `B_{x, xi}`
/// basis.
pub fn classify_sign_with(g: &SelfDualThetaGroup, betas: &[RootOfUnity]) -> Result<i8> {
    if betas.len() != g.generators.len() {
        return Err(Error::DimensionMismatch("one beta value per generator".into()));
    }
    match classify_in_eigenframe(g, betas)? {
        Some(sign) => Ok(sign),
        None => classify_sign_in_form_basis(g, betas),
    }
}

fn matrix_order(m: &CycloMatrix, bound: u64) -> Option<u64> {
    let id = CycloMatrix::identity(m.rows(), m.order());
    let mut p = m.clone();
    for k in 1..=bound {
        if p == id {
            return Some(k);
        }
        p = p.try_mul(m).ok()?;
    }
    None
}

fn sign_of(b: &CycloMatrix) -> Result<i8> {
    let bt = b.transpose();
    if bt == *b {
        Ok(1)
    } else if bt == b.scale(&Cyclotomic::from_int(b.order(), -1)) {
        Ok(-1)
    } else {
        Err(Error::InternalInvariantViolation("invariant form is neither symmetric nor alternating".into()))
    }
}

fn classify_in_eigenframe(g: &SelfDualThetaGroup, betas: &[RootOfUnity]) -> Result<Option<i8>> {
    let base = g.generators.iter().fold(ORDER, |acc, m| crate::exactnum::lcm(acc, m.order()));
    let gens: Vec<CycloMatrix> = g.generators.iter().map(|m| m.lift(base)).collect::<Result<_>>()?;
    let mut chosen: Vec<usize> = Vec::new();
    let mut orders: Vec<u64> = Vec::new();
    for (idx, m) in gens.iter().enumerate() {
        let commutes = chosen.iter().all(|&c| gens[c].try_mul(m).ok() == m.try_mul(&gens[c]).ok());
        if commutes {
            if let Some(o) = matrix_order(m, 4 * base) {
                chosen.push(idx);
                orders.push(o);
            }
        }
    }
    if chosen.is_empty() {
        return Ok(None);
    }
    let mats: Vec<CycloMatrix> = chosen.iter().map(|&c| gens[c].clone()).collect();
    let Ok(spaces) = joint_eigenspaces(&mats, &orders) else {
        return Ok(None);
    };
    let order = orders.iter().fold(base, |acc, &o| crate::exactnum::lcm(acc, o));
    let order = betas.iter().fold(order, |acc, b| crate::exactnum::lcm(acc, b.reduced().order()));
    let n = g.dimension();
    let mut labels: Vec<Vec<u64>> = Vec::with_capacity(n);
    let mut parts = Vec::new();
    for (label, u) in spaces {
        labels.extend(std::iter::repeat(label).take(u.cols()));
        parts.push(u.lift(order)?);
    }
    let t = CycloMatrix::hstack(&parts);
    let t_inv = t.inverse()?;
    let eig = |i: usize, c: usize| RootOfUnity::new(orders[c], labels[i][c] as i64);
    let support: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| (0..chosen.len()).all(|c| eig(i, c) * eig(j, c) == betas[chosen[c]].inv()))
        .collect();
    let others: Vec<usize> = (0..gens.len()).filter(|i| !chosen.contains(i)).collect();
    let solution: CycloMatrix = if support.is_empty() {
        CycloMatrix::zeros(0, 0, order)
    } else if others.is_empty() {
        CycloMatrix::identity(support.len(), order)
    } else {
        let moved: Vec<(CycloMatrix, Cyclotomic)> = others
            .iter()
            .map(|&k| {
                let gt = t_inv.try_mul(&gens[k].lift(order)?)?.try_mul(&t)?;
                Ok((gt, betas[k].inv().to_cyclotomic(order)?))
            })
            .collect::<Result<_>>()?;
        let columns: Vec<Vec<Cyclotomic>> = support
            .iter()
            .map(|&(i, j)| {
                let mut col = Vec::with_capacity(n * n * moved.len());
                for (gt, beta_inv) in &moved {
                    for a in 0..n {
                        for b in 0..n {
                            let mut v = gt.get(i, a) * gt.get(j, b);
                            if a == i && b == j {
                                v = &v - beta_inv;
                            }
                            col.push(v);
                        }
                    }
                }
                col
            })
            .collect();
        CycloMatrix::from_columns(order, n * n * moved.len(), &columns).kernel()
    };
    match solution.cols() {
        0 => Err(Error::NoInvariantForm),
        1 => {
            let coeffs = solution.column(0);
            let mut bt = CycloMatrix::zeros(n, n, order);
            for (&(i, j), c) in support.iter().zip(&coeffs) {
                bt.set(i, j, c.clone());
            }
            sign_of(&bt).map(Some)
        }
        d => Err(Error::NonUniqueInvariantForm(d)),
    }
}

/// The same solve carried out directly in the coordinates of the `B_{x, xi}` basis.
pub fn classify_sign_in_form_basis(g: &SelfDualThetaGroup, betas: &[RootOfUnity]) -> Result<i8> {
    if betas.len() != g.generators.len() {
        return Err(Error::DimensionMismatch("one beta value per generator".into()));
    }
    let fb = form_basis(g.rank);
    let order = g.generators.iter().fold(ORDER, |acc, m| crate::exactnum::lcm(acc, m.order()));
    let order = betas.iter().fold(order, |acc, b| crate::exactnum::lcm(acc, b.reduced().order()));
    let n2 = g.dimension() * g.dimension();
    let mut columns: Vec<Vec<Cyclotomic>> = Vec::with_capacity(fb.forms().len());
    for (_, f) in fb.forms() {
        let mut col = Vec::with_capacity(n2 * g.generators.len());
        for (m, beta) in g.generators.iter().zip(betas) {
            let moved = m.transpose().try_mul(f)?.try_mul(m)?.lift(order)?;
            let target = f.lift(order)?.scale(&beta.inv().to_cyclotomic(order)?);
            col.extend((&moved - &target).flatten());
        }
        columns.push(col);
    }
    let system = CycloMatrix::from_columns(order, n2 * g.generators.len(), &columns);
    let ker = system.kernel();
    match ker.cols() {
        0 => Err(Error::NoInvariantForm),
        1 => {
            let coeffs = ker.column(0);
            let mut b = CycloMatrix::zeros(g.dimension(), g.dimension(), order);
            for ((_, f), c) in fb.forms().iter().zip(&coeffs) {
                if !c.is_zero() {
                    b = &b + &f.lift(order)?.scale(c);
                }
            }
            sign_of(&b)
        }
        d => Err(Error::NonUniqueInvariantForm(d)),
    }
}

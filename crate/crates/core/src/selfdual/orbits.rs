use std::collections::{BTreeMap, HashSet, VecDeque};

use serde::Serialize;

use super::forms::{form_basis, ORDER};
use super::{AffineCharacter, SymplecticSpaceF2};
use crate::exactnum::{CycloMatrix, Cyclotomic};
use crate::{Error, Result};

pub const MAX_ORBIT_RANK: usize = 4;

/// A linear map of `F_2^{2r}` given by the images of the basis vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymplecticMap {
    space: SymplecticSpaceF2,
    images: Vec<u32>,
}

impl SymplecticMap {
    pub fn new(space: SymplecticSpaceF2, images: Vec<u32>) -> Self {
        assert_eq!(images.len(), space.dim());
        SymplecticMap { space, images }
    }

    pub fn identity(space: SymplecticSpaceF2) -> Self {
        Self::new(space, (0..space.dim()).map(|i| 1 << i).collect())
    }

    pub fn apply(&self, v: u32) -> u32 {
        self.images.iter().enumerate().filter(|(i, _)| (v >> i) & 1 == 1).fold(0, |acc, (_, &c)| acc ^ c)
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &SymplecticMap) -> SymplecticMap {
        SymplecticMap::new(self.space, other.images.iter().map(|&v| self.apply(v)).collect())
    }

    pub fn is_symplectic(&self) -> bool {
        let d = self.space.dim();
        (0..d).all(|i| (0..d).all(|j| self.space.omega(self.images[i], self.images[j]) == self.space.omega(1 << i, 1 << j)))
    }

    /// Transvection `h -> h + omega(v, h) v`.
    pub fn transvection(space: SymplecticSpaceF2, v: u32) -> Self {
        Self::new(space, (0..space.dim()).map(|i| (1u32 << i) ^ if space.omega(v, 1 << i) == 1 { v } else { 0 }).collect())
    }

    /// `(x, xi) -> (x + x_j e_i, xi + xi_i e_j)`: an elementary matrix of `GL(K)`
    /// together with its inverse transpose.
    pub fn elementary(space: SymplecticSpaceF2, i: usize, j: usize) -> Self {
        let r = space.rank;
        let mut images: Vec<u32> = (0..space.dim()).map(|k| 1 << k).collect();
        images[j] ^= 1 << i;
        images[r + i] ^= 1 << (r + j);
        Self::new(space, images)
    }

    /// `(x, xi) -> (xi, x)`.
    pub fn swap(space: SymplecticSpaceF2) -> Self {
        let r = space.rank;
        Self::new(space, (0..space.dim()).map(|k| if k < r { 1 << (k + r) } else { 1 << (k - r) }).collect())
    }

    /// `(x, xi) -> (x, xi + S x)` for a symmetric `S` given by its columns.
    pub fn shear(space: SymplecticSpaceF2, columns: &[u32]) -> Self {
        let r = space.rank;
        Self::new(space, (0..space.dim()).map(|k| if k < r { (1 << k) ^ (columns[k] << r) } else { 1 << k }).collect())
    }

    /// Action on weights: `chi -> chi o g~` for any lift `g~` of `g`.
    ///
    /// With `chi_c = t^{-2} (-1)^{omega(c, h)}`, the lift rescales `t` by a
    /// fourth root of unity whose square is `(-1)^{q0(g h) + q0(h)}`.
    pub fn act(&self, c: AffineCharacter) -> AffineCharacter {
        let s = self.space;
        let c = s.join(c.x, c.xi);
        let ell = |h: u32| {
            let gh = self.apply(h);
            s.omega(c, gh) ^ s.q0(gh) ^ s.q0(h)
        };
        let r = s.rank;
        let xi = (0..r).fold(0u32, |acc, i| acc | (ell(1 << i) << i));
        let x = (0..r).fold(0u32, |acc, i| acc | (ell(1 << (r + i)) << i));
        AffineCharacter { x, xi }
    }
}

fn all_characters(space: SymplecticSpaceF2) -> Vec<AffineCharacter> {
    (0..space.size()).map(|c| {
        let (x, xi) = space.split(c);
        AffineCharacter { x, xi }
    }).collect()
}

fn gl_generators(space: SymplecticSpaceF2) -> Vec<SymplecticMap> {
    let r = space.rank;
    let mut gens = Vec::new();
    for i in 0..r {
        for j in 0..r {
            if i != j {
                gens.push(SymplecticMap::elementary(space, i, j));
            }
        }
    }
    gens
}

fn shears(space: SymplecticSpaceF2, with_diagonal: bool) -> Vec<SymplecticMap> {
    let r = space.rank;
    let mut gens = Vec::new();
    for i in 0..r {
        for j in i..r {
            if i == j && !with_diagonal {
                continue;
            }
            let mut cols = vec![0u32; r];
            cols[i] |= 1 << j;
            cols[j] |= 1 << i;
            gens.push(SymplecticMap::shear(space, &cols));
        }
    }
    gens
}

/// `GL(K)`, the swap and the shears by all symmetric `S`; these generate `Sp_{2r}(F_2)`.
pub fn sp_generators(space: SymplecticSpaceF2) -> Vec<SymplecticMap> {
    let mut gens = gl_generators(space);
    gens.push(SymplecticMap::swap(space));
    gens.extend(shears(space, true));
    gens
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Orbit {
    pub size: usize,
    pub kind: &'static str,
    #[serde(skip)]
    pub members: Vec<AffineCharacter>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitReport {
    pub rank: usize,
    pub orbits: Vec<Orbit>,
}

fn orbit_partition(space: SymplecticSpaceF2, gens: &[SymplecticMap]) -> Vec<Orbit> {
    let mut seen = HashSet::new();
    let mut orbits = Vec::new();
    for start in all_characters(space) {
        if !seen.insert(start) {
            continue;
        }
        let mut members = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(c) = queue.pop_front() {
            for g in gens {
                let d = g.act(c);
                if seen.insert(d) {
                    members.push(d);
                    queue.push_back(d);
                }
            }
        }
        members.sort();
        let sym = members.iter().filter(|c| c.is_symmetric()).count();
        let kind = if sym == members.len() {
            "symmetric"
        } else if sym == 0 {
            "alternating"
        } else {
            "mixed"
        };
        orbits.push(Orbit { size: members.len(), kind, members });
    }
    orbits.sort_by(|a, b| b.size.cmp(&a.size).then(a.members.cmp(&b.members)));
    orbits
}

/// Orbits of `Sp(H)` on the weights `chi_{x, xi}`, by exhaustive search.
pub fn sp_orbits(r: usize) -> Result<OrbitReport> {
    if r > MAX_ORBIT_RANK {
        return Err(Error::RankTooLarge { rank: r, max: MAX_ORBIT_RANK });
    }
    let space = SymplecticSpaceF2::new(r);
    Ok(OrbitReport { rank: r, orbits: orbit_partition(space, &sp_generators(space)) })
}

/// Orbits under `GL(K)`, the swap and the maps `u_q` with `F_2`-valued `q`
/// only (alternating shears). These all fix `chi_{0,0}`.
pub fn proof_family_orbits(r: usize) -> Result<OrbitReport> {
    if r > MAX_ORBIT_RANK {
        return Err(Error::RankTooLarge { rank: r, max: MAX_ORBIT_RANK });
    }
    let space = SymplecticSpaceF2::new(r);
    let mut gens = gl_generators(space);
    gens.push(SymplecticMap::swap(space));
    gens.extend(shears(space, false));
    Ok(OrbitReport { rank: r, orbits: orbit_partition(space, &gens) })
}

/// The generators are symplectic, preserve the symmetric weights, and the
/// orbit partition is stable under every transvection.
pub fn validate_with_transvections(r: usize) -> Result<bool> {
    let report = sp_orbits(r)?;
    let space = SymplecticSpaceF2::new(r);
    let gens = sp_generators(space);
    let chars = all_characters(space);
    if !gens.iter().all(SymplecticMap::is_symplectic) {
        return Ok(false);
    }
    if !gens.iter().all(|g| chars.iter().all(|c| g.act(*c).is_symmetric() == c.is_symmetric())) {
        return Ok(false);
    }
    let label: BTreeMap<AffineCharacter, usize> =
        report.orbits.iter().enumerate().flat_map(|(i, o)| o.members.iter().map(move |c| (*c, i))).collect();
    for v in 1..space.size() {
        let t = SymplecticMap::transvection(space, v);
        if !t.is_symplectic() || chars.iter().any(|c| label[&t.act(*c)] != label[c]) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Order of the group generated by `gens`, by closure.
pub fn sp_group_order(space: SymplecticSpaceF2, gens: &[SymplecticMap]) -> usize {
    let id = SymplecticMap::identity(space);
    let mut seen = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(m) = queue.pop_front() {
        for g in gens {
            let n = g.compose(&m);
            if seen.insert(n.clone()) {
                queue.push_back(n);
            }
        }
    }
    seen.len()
}

/// Transvections generate `Sp`; used to cross-check [`sp_generators`].
pub fn transvections(space: SymplecticSpaceF2) -> Vec<SymplecticMap> {
    (1..space.size()).map(|v| SymplecticMap::transvection(space, v)).collect()
}

fn clifford_generators(r: usize) -> Vec<CycloMatrix> {
    let n = 1usize << r;
    let z = |v: i64| Cyclotomic::from_int(ORDER, v);
    let mut gens = Vec::new();
    for j in 0..r {
        gens.push(CycloMatrix::from_fn(n, n, ORDER, |a, b| {
            if (a ^ b) & !(1 << j) != 0 {
                return z(0);
            }
            z(if (a >> j) & (b >> j) & 1 == 1 { -1 } else { 1 })
        }));
        gens.push(CycloMatrix::from_fn(n, n, ORDER, |a, b| {
            if a != b {
                z(0)
            } else {
                Cyclotomic::zeta_pow(ORDER, ((b >> j) & 1) as i64)
            }
        }));
        for t in 0..r {
            if t != j {
                gens.push(CycloMatrix::from_fn(n, n, ORDER, |a, b| z((a == b ^ (((b >> j) & 1) << t)) as i64)));
            }
        }
    }
    gens
}

/// Partition of the weights induced by Hadamard, phase and CNOT matrices acting
/// on the lines `k B_{x, xi}` by `B -> g^T B g`.
pub fn clifford_orbits(r: usize) -> Result<Vec<Vec<AffineCharacter>>> {
    if r > 3 {
        return Err(Error::RankTooLarge { rank: r, max: 3 });
    }
    let fb = form_basis(r);
    let gens = clifford_generators(r);
    let space = SymplecticSpaceF2::new(r);
    let mut seen = HashSet::new();
    let mut orbits = Vec::new();
    for start in all_characters(space) {
        if !seen.insert(start) {
            continue;
        }
        let mut members = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(c) = queue.pop_front() {
            for g in &gens {
                let moved = g.transpose().try_mul(fb.get(c))?.try_mul(g)?;
                let d = identify_line(&fb, &moved)?;
                if seen.insert(d) {
                    members.push(d);
                    queue.push_back(d);
                }
            }
        }
        members.sort();
        orbits.push(members);
    }
    orbits.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
    Ok(orbits)
}

fn identify_line(fb: &super::FormBasis, m: &CycloMatrix) -> Result<AffineCharacter> {
    let x = (0..m.cols()).find(|&b| !m.get(0, b).is_zero()).ok_or(Error::InternalInvariantViolation("zero form".into()))?;
    let base = m.get(0, x).clone();
    let mut xi = 0u32;
    for i in 0..fb.rank() {
        let row = 1usize << i;
        let v = m.get(row, row ^ x);
        if *v == -&base {
            xi |= 1 << i;
        }
    }
    let c = AffineCharacter { x: x as u32, xi };
    let candidate = fb.get(c).scale(&base);
    if candidate != *m {
        return Err(Error::InternalInvariantViolation("transformed form is not a multiple of a basis form".into()));
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_families_are_symplectic() {
        for r in 1..=4 {
            let s = SymplecticSpaceF2::new(r);
            assert!(sp_generators(s).iter().all(SymplecticMap::is_symplectic));
            assert!(transvections(s).iter().all(SymplecticMap::is_symplectic));
        }
    }

    #[test]
    fn action_is_affine() {
        // the rescaled functional is linear again
        for r in 1..=3 {
            let s = SymplecticSpaceF2::new(r);
            for g in sp_generators(s).iter().chain(transvections(s).iter()) {
                for c in all_characters(s) {
                    let d = g.act(c);
                    let cc = s.join(c.x, c.xi);
                    let dd = s.join(d.x, d.xi);
                    for h in 0..s.size() {
                        let gh = g.apply(h);
                        assert_eq!(s.omega(dd, h), s.omega(cc, gh) ^ s.q0(gh) ^ s.q0(h));
                    }
                }
            }
        }
    }

    #[test]
    fn group_orders() {
        let s1 = SymplecticSpaceF2::new(1);
        assert_eq!(sp_group_order(s1, &sp_generators(s1)), 6);
        assert_eq!(sp_group_order(s1, &transvections(s1)), 6);
        let s2 = SymplecticSpaceF2::new(2);
        assert_eq!(sp_group_order(s2, &sp_generators(s2)), 720);
        assert_eq!(sp_group_order(s2, &transvections(s2)), 720);
    }

    #[test]
    fn two_orbits_with_predicted_sizes() {
        for r in 1..=4 {
            let rep = sp_orbits(r).unwrap();
            assert_eq!(rep.orbits.len(), 2);
            let big = (1usize << (2 * r - 1)) + (1 << (r - 1));
            let small = (1usize << (2 * r - 1)) - (1 << (r - 1));
            assert_eq!((rep.orbits[0].size, rep.orbits[0].kind), (big, "symmetric"));
            assert_eq!((rep.orbits[1].size, rep.orbits[1].kind), (small, "alternating"));
            // symmetric count equals dim S^2 of a 2^r-dimensional space
            let n = 1usize << r;
            assert_eq!(big, n * (n + 1) / 2);
        }
        assert_eq!(sp_orbits(5).unwrap_err(), Error::RankTooLarge { rank: 5, max: 4 });
    }

    #[test]
    fn transvection_validation() {
        for r in 1..=3 {
            assert!(validate_with_transvections(r).unwrap());
        }
    }

    #[test]
    fn proof_family_fixes_origin() {
        for r in 1..=3 {
            let rep = proof_family_orbits(r).unwrap();
            assert!(rep.orbits.iter().any(|o| o.members == vec![AffineCharacter { x: 0, xi: 0 }]));
            assert_eq!(rep.orbits.len(), 3);
        }
    }

    #[test]
    fn clifford_cross_check() {
        for r in 1..=3 {
            let cliff = clifford_orbits(r).unwrap();
            let affine: Vec<Vec<AffineCharacter>> = sp_orbits(r).unwrap().orbits.into_iter().map(|o| o.members).collect();
            assert_eq!(cliff, affine, "rank {r}");
        }
    }

    #[test]
    fn report_json() {
        let v = serde_json::to_value(sp_orbits(1).unwrap()).unwrap();
        assert_eq!(
            v,
            serde_json::json!({"rank": 1, "orbits": [{"size": 3, "kind": "symmetric"}, {"size": 1, "kind": "alternating"}]})
        );
    }
}

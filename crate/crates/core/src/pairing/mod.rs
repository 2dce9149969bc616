//! Alternating bilinear pairings `H x H -> mu_N` on finite abelian groups.
//!
//! A pairing is stored by its values on canonical generators as exponents
//! of `zeta_N`, `N` the exponent of `H`: `e(g_i, g_j) = zeta_N^{E[i][j]}`.

mod normal_form;

pub use normal_form::{mumford_normal_form, mumford_normal_form_strict, Block, NormalForm};

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::exactnum::{gcd, RootOfUnity};
use crate::fingroup::{FiniteAbelianGroup, GroupElement, GroupHom, Subgroup};
use crate::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AlternatingPairing {
    group: FiniteAbelianGroup,
    matrix: Vec<Vec<u64>>,
}

/// The non-degenerate pairing induced on `H / H^perp`.
#[derive(Clone, Debug)]
pub struct NondegenerateQuotient {
    pub radical: Subgroup,
    pub pairing: AlternatingPairing,
    pub projection: GroupHom,
    pub lifts: Vec<GroupElement>,
}

impl AlternatingPairing {
    /// Validates alternation and well-definedness on the given exponent matrix.
    pub fn new(group: &FiniteAbelianGroup, matrix: &[Vec<i64>]) -> Result<Self> {
        let r = group.rank();
        let n = group.exponent();
        if matrix.len() != r || matrix.iter().any(|row| row.len() != r) {
            return Err(Error::InvalidPairing(format!("expected a {r}x{r} matrix for {group}")));
        }
        let m: Vec<Vec<u64>> =
            matrix.iter().map(|row| row.iter().map(|&x| x.rem_euclid(n as i64) as u64).collect()).collect();
        for i in 0..r {
            if m[i][i] != 0 {
                return Err(Error::InvalidPairing(format!("e(g{i}, g{i}) != 1: not alternating")));
            }
            for j in 0..r {
                if (m[i][j] + m[j][i]) % n != 0 {
                    return Err(Error::InvalidPairing(format!("entries ({i},{j}) and ({j},{i}) are not opposite")));
                }
                let g = gcd(group.factors()[i], group.factors()[j]);
                if (m[i][j] as u128 * g as u128) % n as u128 != 0 {
                    return Err(Error::InvalidPairing(format!(
                        "e(g{i}, g{j}) has order not dividing gcd(n_{i}, n_{j}) = {g}"
                    )));
                }
            }
        }
        Ok(AlternatingPairing { group: group.clone(), matrix: m })
    }

    pub fn trivial(group: &FiniteAbelianGroup) -> Self {
        let r = group.rank();
        AlternatingPairing { group: group.clone(), matrix: vec![vec![0; r]; r] }
    }

    /// The product of twisted standard blocks `e_{d_i}` on
    /// `(Z/n_1)^2 x (Z/n_2)^2 x ...` with generators ordered `x_1, y_1, x_2, ...`.
    pub fn from_blocks(blocks: &[Block]) -> Result<Self> {
        let mut factors = Vec::new();
        for b in blocks {
            factors.push(b.n);
            factors.push(b.n);
        }
        let group = FiniteAbelianGroup::new(factors)?;
        let n = group.exponent();
        let r = group.rank();
        let mut m = vec![vec![0i64; r]; r];
        for (i, b) in blocks.iter().enumerate() {
            let v = (b.d * (n / b.n)) as i64;
            m[2 * i][2 * i + 1] = v;
            m[2 * i + 1][2 * i] = -v;
        }
        Self::new(&group, &m)
    }

    /// Uniformly random pairing on `group`.
    pub fn random<R: Rng + ?Sized>(group: &FiniteAbelianGroup, rng: &mut R) -> Self {
        let r = group.rank();
        let n = group.exponent();
        let mut m = vec![vec![0u64; r]; r];
        for i in 0..r {
            for j in i + 1..r {
                // values of order dividing gcd(n_i, n_j): multiples of n / gcd
                let g = gcd(group.factors()[i], group.factors()[j]);
                let v = rng.gen_range(0..g) * (n / g);
                m[i][j] = v;
                m[j][i] = (n - v) % n;
            }
        }
        AlternatingPairing { group: group.clone(), matrix: m }
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn matrix(&self) -> &[Vec<u64>] {
        &self.matrix
    }

    /// `N`: values are powers of `zeta_N`.
    pub fn value_order(&self) -> u64 {
        self.group.exponent()
    }

    pub fn is_trivial(&self) -> bool {
        self.matrix.iter().flatten().all(|&x| x == 0)
    }

    pub(crate) fn eval_exp(&self, x: &GroupElement, y: &GroupElement) -> u64 {
        let n = self.value_order() as u128;
        let mut acc: u128 = 0;
        for (i, &xi) in x.coords().iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.coords().iter().enumerate() {
                if yj == 0 {
                    continue;
                }
                acc = (acc + xi as u128 * yj as u128 * self.matrix[i][j] as u128) % n;
            }
        }
        acc as u64
    }

    pub fn eval(&self, x: &GroupElement, y: &GroupElement) -> Result<RootOfUnity> {
        if x.group() != &self.group || y.group() != &self.group {
            return Err(Error::ParentMismatch(self.group.to_string(), format!("{} / {}", x.group(), y.group())));
        }
        Ok(RootOfUnity::new(self.value_order(), self.eval_exp(x, y) as i64))
    }

    /// `H^perp = {x : e(x, y) = 1 for all y}`.
    pub fn radical(&self) -> Subgroup {
        let n = self.value_order();
        Subgroup::kernel_of(&self.group, &self.matrix, &vec![n; self.group.rank()])
            .expect("pairing matrices are well defined by construction")
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.radical().is_trivial()
    }

    /// `d = sqrt([H : H^perp])`.
    pub fn homogeneous_index(&self) -> Result<u64> {
        let index = self.group.order() / self.radical().order();
        let d = (index as f64).sqrt().round() as u64;
        for c in d.saturating_sub(1)..=d + 1 {
            if c * c == index {
                return Ok(c);
            }
        }
        Err(Error::InternalInvariantViolation(format!("[H : H^perp] = {index} is not a perfect square")))
    }

    /// Induced non-degenerate pairing on `H / H^perp`.
    pub fn nondegenerate_quotient(&self) -> Result<NondegenerateQuotient> {
        let radical = self.radical();
        if radical.is_trivial() {
            return Ok(NondegenerateQuotient {
                radical,
                pairing: self.clone(),
                projection: GroupHom::identity(&self.group),
                lifts: self.group.generators(),
            });
        }
        let q = radical.quotient()?;
        let n = self.value_order();
        let nq = q.group.exponent();
        let scale = n / nq;
        let k = q.group.rank();
        let mut m = vec![vec![0i64; k]; k];
        for a in 0..k {
            for b in 0..k {
                let v = self.eval_exp(&q.lifts[a], &q.lifts[b]);
                if v % scale != 0 {
                    return Err(Error::InternalInvariantViolation("quotient pairing exceeds exponent".into()));
                }
                m[a][b] = (v / scale) as i64;
            }
        }
        let pairing = AlternatingPairing::new(&q.group, &m)?;
        Ok(NondegenerateQuotient { radical, pairing, projection: q.projection, lifts: q.lifts })
    }

    /// `e^m`; `m = -1` gives the pairing of the dual bundle.
    pub fn power(&self, m: i64) -> Self {
        let n = self.value_order() as i128;
        let matrix = self
            .matrix
            .iter()
            .map(|row| row.iter().map(|&x| ((x as i128 * m as i128).rem_euclid(n)) as u64).collect())
            .collect();
        AlternatingPairing { group: self.group.clone(), matrix }
    }

    pub fn inverse(&self) -> Self {
        self.power(-1)
    }

    /// Pointwise product `e_1 e_2`.
    pub fn mul(&self, other: &AlternatingPairing) -> Result<Self> {
        if self.group != other.group {
            return Err(Error::ParentMismatch(self.group.to_string(), other.group.to_string()));
        }
        let n = self.value_order();
        let matrix = self
            .matrix
            .iter()
            .zip(&other.matrix)
            .map(|(a, b)| a.iter().zip(b).map(|(&x, &y)| (x + y) % n).collect())
            .collect();
        Ok(AlternatingPairing { group: self.group.clone(), matrix })
    }

    /// Pull-back along a homomorphism `f: G -> H`: `(x, y) -> e(f x, f y)`.
    pub fn pullback(&self, f: &GroupHom) -> Result<Self> {
        if f.target() != &self.group {
            return Err(Error::ParentMismatch(f.target().to_string(), self.group.to_string()));
        }
        let src = f.source();
        let n = self.value_order();
        let ns = src.exponent();
        let imgs = f.images();
        let r = src.rank();
        let mut m = vec![vec![0i64; r]; r];
        for i in 0..r {
            for j in 0..r {
                let k = RootOfUnity::new(n, self.eval_exp(&imgs[i], &imgs[j]) as i64).reduced();
                if ns % k.order() != 0 {
                    return Err(Error::InvalidPairing("pull-back values exceed the source exponent".into()));
                }
                m[i][j] = (k.exp() * (ns / k.order())) as i64;
            }
        }
        Self::new(src, &m)
    }
}

impl fmt::Debug for AlternatingPairing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pairing on {:?} (mu_{}): {:?}", self.group, self.value_order(), self.matrix)
    }
}

#[derive(Serialize, Deserialize)]
struct PairingRepr {
    group: FiniteAbelianGroup,
    matrix: Vec<Vec<i64>>,
}

impl Serialize for AlternatingPairing {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PairingRepr {
            group: self.group.clone(),
            matrix: self.matrix.iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for AlternatingPairing {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = PairingRepr::deserialize(d)?;
        AlternatingPairing::new(&r.group, &r.matrix).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn group(f: &[u64]) -> FiniteAbelianGroup {
        FiniteAbelianGroup::new(f.to_vec()).unwrap()
    }

    fn brute_radical(e: &AlternatingPairing) -> Vec<GroupElement> {
        let g = e.group();
        g.elements().filter(|x| g.generators().iter().all(|y| e.eval(x, y).unwrap().is_one())).collect()
    }

    #[test]
    fn constructor_rejects_bad_matrices() {
        let g = group(&[2, 2]);
        assert!(AlternatingPairing::new(&g, &[vec![1, 0], vec![0, 0]]).is_err());
        assert!(AlternatingPairing::new(&g, &[vec![0, 1], vec![0, 0]]).is_err());
        assert!(AlternatingPairing::new(&g, &[vec![0, 1], vec![-1, 0]]).is_ok());
        let g = group(&[4, 2]);
        // e(g1, g2) must have order dividing 2
        assert!(AlternatingPairing::new(&g, &[vec![0, 1], vec![3, 0]]).is_err());
        assert!(AlternatingPairing::new(&g, &[vec![0, 2], vec![2, 0]]).is_ok());
        let g = group(&[3, 3]);
        assert!(AlternatingPairing::new(&g, &[vec![0, 1], vec![1, 0]]).is_err());
    }

    #[test]
    fn trivial_pairing_has_full_radical() {
        for g in FiniteAbelianGroup::all_up_to_order(32) {
            let e = AlternatingPairing::trivial(&g);
            assert!(e.radical().is_whole());
            assert_eq!(e.homogeneous_index().unwrap(), 1);
            if !g.is_trivial() {
                assert!(!e.is_nondegenerate());
            }
        }
    }

    #[test]
    fn standard_plane_over_f2() {
        let g = group(&[2, 2]);
        let e = AlternatingPairing::new(&g, &[vec![0, 1], vec![1, 0]]).unwrap();
        assert!(e.radical().is_trivial());
        assert_eq!(e.eval(&g.generator(0), &g.generator(1)).unwrap(), RootOfUnity::minus_one());
        // exactly one non-degenerate alternating form on F_2^2
        let count = (0..2).filter(|&v| AlternatingPairing::new(&g, &[vec![0, v], vec![v, 0]]).unwrap().is_nondegenerate()).count();
        assert_eq!(count, 1);
    }

    #[test]
    fn standard_pairings_nondegenerate() {
        for n in 2..=6 {
            let e = AlternatingPairing::from_blocks(&[Block { n, d: 1 }]).unwrap();
            assert!(e.is_nondegenerate());
            assert_eq!(e.homogeneous_index().unwrap(), n);
            assert!(e.power(n as i64).is_trivial());
        }
    }

    #[test]
    fn radical_matches_brute_force_on_4422() {
        let g = group(&[4, 4, 2, 2]);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let e = AlternatingPairing::random(&g, &mut rng);
            let brute = brute_radical(&e);
            let rad = e.radical();
            assert_eq!(rad.order() as usize, brute.len());
            assert!(brute.iter().all(|x| rad.contains(x)));
        }
    }

    #[test]
    fn non_square_order_forces_degeneracy() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for g in FiniteAbelianGroup::all_up_to_order(100) {
            let n = g.order();
            let s = (n as f64).sqrt().round() as u64;
            if s * s == n {
                continue;
            }
            for _ in 0..4 {
                let e = AlternatingPairing::random(&g, &mut rng);
                assert!(!e.is_nondegenerate());
                // brute-force confirmation
                assert!(brute_radical(&e).len() > 1);
            }
        }
    }

    #[test]
    fn homogeneous_index_on_extension_4422() {
        // blocks (4, 1) on (g1, g2) and (2, 1) on (g3, g4), then a degenerate variant
        let g = group(&[4, 4, 2, 2]);
        let full = AlternatingPairing::new(
            &g,
            &[vec![0, 1, 0, 0], vec![-1, 0, 0, 0], vec![0, 0, 0, 2], vec![0, 0, -2, 0]],
        )
        .unwrap();
        assert_eq!(full.homogeneous_index().unwrap(), 8);
        // drop the (2,2) block: radical (Z/2)^2, quotient (Z/4)^2
        let partial = AlternatingPairing::new(
            &g,
            &[vec![0, 1, 0, 0], vec![-1, 0, 0, 0], vec![0, 0, 0, 0], vec![0, 0, 0, 0]],
        )
        .unwrap();
        let q = partial.nondegenerate_quotient().unwrap();
        // oracle: count the quotient and take the square root
        let quotient_order = q.pairing.group().order();
        assert_eq!(quotient_order, 16);
        assert_eq!(partial.homogeneous_index().unwrap(), 4);
        // e(2 g1, g2) generates a rank-deficient extension: radical contains 2g1 x 2g2
        let squared = partial.power(2);
        assert_eq!(squared.homogeneous_index().unwrap(), 2);
    }

    #[test]
    fn power_laws() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for g in [group(&[6, 6]), group(&[4, 4, 2, 2]), group(&[12, 6, 2])] {
            let e = AlternatingPairing::random(&g, &mut rng);
            assert_eq!(e.power(1), e);
            assert!(e.mul(&e.inverse()).unwrap().is_trivial());
        }
    }

    #[test]
    fn json_round_trip() {
        let e = AlternatingPairing::from_blocks(&[Block { n: 3, d: 2 }]).unwrap();
        let s = serde_json::to_string(&e).unwrap();
        assert_eq!(s, r#"{"group":{"factors":[3,3]},"matrix":[[0,2],[1,0]]}"#);
        let back: AlternatingPairing = serde_json::from_str(&s).unwrap();
        assert_eq!(back, e);
        assert!(serde_json::from_str::<AlternatingPairing>(r#"{"group":{"factors":[2,2]},"matrix":[[1,0],[0,0]]}"#).is_err());
    }

    fn arb_pairing() -> impl Strategy<Value = AlternatingPairing> {
        let groups = FiniteAbelianGroup::all_up_to_order(256);
        (0..groups.len(), any::<u64>()).prop_map(move |(i, seed)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            AlternatingPairing::random(&groups[i], &mut rng)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn index_is_a_square(e in arb_pairing()) {
            let d = e.homogeneous_index().unwrap();
            prop_assert_eq!(d * d * e.radical().order(), e.group().order());
        }

        #[test]
        fn alternating_and_bilinear(e in arb_pairing(), seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = e.group();
            let (x, y, z) = (g.random_element(&mut rng), g.random_element(&mut rng), g.random_element(&mut rng));
            prop_assert!(e.eval(&x, &x).unwrap().is_one());
            let lhs = e.eval(&x.add(&y).unwrap(), &z).unwrap();
            prop_assert_eq!(lhs, e.eval(&x, &z).unwrap() * e.eval(&y, &z).unwrap());
            prop_assert_eq!(e.eval(&x, &y).unwrap(), e.eval(&y, &x).unwrap().inv());
        }

        #[test]
        fn e_to_the_index_is_trivial(e in arb_pairing()) {
            let d = e.homogeneous_index().unwrap();
            prop_assert!(e.power(d as i64).is_trivial());
        }
    }
}

//! Desk-scale model of `Br(X)_n` for an abelian variety `X`.
//!
//! `X_n` is modelled as `(Z/n)^{2g}` and the Neron-Severi group is supplied
//! as a list of integral alternating `2g x 2g` matrices. Alternating
//! pairings on `X_n` with values in `mu_n` form `(Z/n)^{g(2g-1)}`, with one
//! coordinate per entry above the diagonal; the Brauer group is the quotient
//! by the pairings coming from `NS(X)`.

mod cocycle;

pub use cocycle::{heisenberg_cocycle, standard_cocycle, CocycleAlgebra};

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use serde::{Deserialize, Serialize, Serializer};

use crate::fingroup::{solve_left, to_i64, DualElement, FiniteAbelianGroup, GroupElement, Quotient, Subgroup};
use crate::pairing::{mumford_normal_form, AlternatingPairing, Block};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ModelRepr", into = "ModelRepr")]
pub struct AbelianVarietyModel {
    g: usize,
    n: u64,
    ns: Vec<Vec<Vec<i64>>>,
}

#[derive(Serialize, Deserialize)]
struct ModelRepr {
    g: usize,
    n: u64,
    #[serde(default)]
    ns: Vec<Vec<Vec<i64>>>,
}

impl TryFrom<ModelRepr> for AbelianVarietyModel {
    type Error = Error;

    fn try_from(r: ModelRepr) -> Result<Self> {
        AbelianVarietyModel::new(r.g, r.n, r.ns)
    }
}

impl From<AbelianVarietyModel> for ModelRepr {
    fn from(m: AbelianVarietyModel) -> Self {
        ModelRepr { g: m.g, n: m.n, ns: m.ns }
    }
}

/// Index pairs `(i, j)`, `i < j`, in the order used for pairing coordinates.
fn upper_pairs(g: usize) -> Vec<(usize, usize)> {
    let r = 2 * g;
    (0..r).flat_map(|i| (i + 1..r).map(move |j| (i, j))).collect()
}

fn check_alternating(g: usize, m: &[Vec<i64>]) -> Result<()> {
    let r = 2 * g;
    if m.len() != r || m.iter().any(|row| row.len() != r) {
        return Err(Error::DimensionMismatch(format!("NS generator must be {r}x{r}")));
    }
    for i in 0..r {
        if m[i][i] != 0 {
            return Err(Error::InvalidPairing(format!("NS generator has nonzero diagonal entry {i}")));
        }
        for j in 0..r {
            if m[i][j] != -m[j][i] {
                return Err(Error::InvalidPairing(format!("NS generator is not antisymmetric at ({i},{j})")));
            }
        }
    }
    Ok(())
}

impl AbelianVarietyModel {
    pub fn new(g: usize, n: u64, ns: Vec<Vec<Vec<i64>>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGroup("torsion level must be positive".into()));
        }
        let coords = upper_pairs(g).len() as u32;
        if n.checked_pow(coords).map_or(true, |v| v > i64::MAX as u64) {
            return Err(Error::DomainError(format!("{n}^{coords} pairings exceed the supported range")));
        }
        for m in &ns {
            check_alternating(g, m)?;
        }
        Ok(AbelianVarietyModel { g, n, ns })
    }

    /// NS generated by the principal polarization `[[0, I], [-I, 0]]`.
    pub fn principal(g: usize, n: u64) -> Result<Self> {
        let r = 2 * g;
        let mut e = vec![vec![0i64; r]; r];
        for i in 0..g {
            e[i][g + i] = 1;
            e[g + i][i] = -1;
        }
        Self::new(g, n, vec![e])
    }

    /// NS equal to the whole lattice of alternating forms.
    pub fn full(g: usize, n: u64) -> Result<Self> {
        let r = 2 * g;
        let ns = upper_pairs(g)
            .into_iter()
            .map(|(i, j)| {
                let mut e = vec![vec![0i64; r]; r];
                e[i][j] = 1;
                e[j][i] = -1;
                e
            })
            .collect();
        Self::new(g, n, ns)
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn level(&self) -> u64 {
        self.n
    }

    pub fn ns(&self) -> &[Vec<Vec<i64>>] {
        &self.ns
    }

    /// Same variety, torsion level `m`.
    pub fn at_level(&self, m: u64) -> Result<Self> {
        Self::new(self.g, m, self.ns.clone())
    }

    /// `X_n = (Z/n)^{2g}`.
    pub fn torsion_group(&self) -> FiniteAbelianGroup {
        FiniteAbelianGroup::elementary(self.n, 2 * self.g)
    }

    /// `Hom(Λ^2 X_n, mu_n) = (Z/n)^{g(2g-1)}`.
    pub fn pairing_group(&self) -> FiniteAbelianGroup {
        FiniteAbelianGroup::elementary(self.n, upper_pairs(self.g).len())
    }

    /// `E -> zeta_n^{E(x, y)}`.
    pub fn phi(&self, e: &[Vec<i64>]) -> Result<AlternatingPairing> {
        check_alternating(self.g, e)?;
        let x = self.torsion_group();
        if x.is_trivial() {
            return Ok(AlternatingPairing::trivial(&x));
        }
        AlternatingPairing::new(&x, e)
    }

    pub fn pairing_to_element(&self, e: &AlternatingPairing) -> Result<GroupElement> {
        let x = self.torsion_group();
        if e.group() != &x {
            return Err(Error::ParentMismatch(x.to_string(), e.group().to_string()));
        }
        let p = self.pairing_group();
        if p.is_trivial() {
            return Ok(p.zero());
        }
        let coords: Vec<i64> = upper_pairs(self.g).iter().map(|&(i, j)| e.matrix()[i][j] as i64).collect();
        p.element(&coords)
    }

    pub fn element_to_pairing(&self, v: &GroupElement) -> Result<AlternatingPairing> {
        let p = self.pairing_group();
        if v.group() != &p {
            return Err(Error::ParentMismatch(p.to_string(), v.group().to_string()));
        }
        let x = self.torsion_group();
        if p.is_trivial() {
            return Ok(AlternatingPairing::trivial(&x));
        }
        let r = 2 * self.g;
        let mut m = vec![vec![0i64; r]; r];
        for (&(i, j), &c) in upper_pairs(self.g).iter().zip(v.coords()) {
            m[i][j] = c as i64;
            m[j][i] = -(c as i64);
        }
        AlternatingPairing::new(&x, &m)
    }

    fn ns_elements(&self) -> Result<Vec<GroupElement>> {
        self.ns.iter().map(|e| self.pairing_to_element(&self.phi(e)?)).collect()
    }

    /// The subgroup generated by the NS generators reduced mod `n`.
    pub fn phi_image(&self) -> Result<Subgroup> {
        Subgroup::generated_by(&self.pairing_group(), &self.ns_elements()?)
    }

    pub fn brauer_group(&self) -> Result<Arc<BrauerGroup>> {
        let image = self.phi_image()?;
        let quotient = image.quotient()?;
        Ok(Arc::new(BrauerGroup { model: self.clone(), image, quotient }))
    }
}

/// `Hom(Λ^2 X_n, mu_n) / phi(NS)` with its projection.
#[derive(Debug)]
pub struct BrauerGroup {
    model: AbelianVarietyModel,
    image: Subgroup,
    quotient: Quotient,
}

impl BrauerGroup {
    pub fn model(&self) -> &AbelianVarietyModel {
        &self.model
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.quotient.group
    }

    pub fn order(&self) -> u64 {
        self.quotient.group.order()
    }

    pub fn image(&self) -> &Subgroup {
        &self.image
    }

    pub fn image_order(&self) -> u64 {
        self.image.order()
    }

    pub fn project(&self, e: &AlternatingPairing) -> Result<GroupElement> {
        self.quotient.projection.apply(&self.model.pairing_to_element(e)?)
    }

    /// One pairing per class, in enumeration order of the quotient.
    pub fn coset_representatives(&self) -> Result<Vec<AlternatingPairing>> {
        let p = self.model.pairing_group();
        self.group()
            .elements()
            .map(|q| {
                let v = q
                    .coords()
                    .iter()
                    .zip(&self.quotient.lifts)
                    .fold(p.zero(), |acc, (&c, l)| acc.add(&l.scale(c as i64)).expect("same group"));
                self.model.element_to_pairing(&v)
            })
            .collect()
    }

    pub fn class(self: &Arc<Self>, e: &AlternatingPairing) -> Result<BrauerClass> {
        let coset = self.project(e)?;
        Ok(BrauerClass { br: Arc::clone(self), representative: e.clone(), coset })
    }

    pub fn trivial_class(self: &Arc<Self>) -> BrauerClass {
        let e = AlternatingPairing::trivial(&self.model.torsion_group());
        self.class(&e).expect("trivial pairing lives on X_n")
    }
}

impl Serialize for BrauerGroup {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            g: usize,
            n: u64,
            order: u64,
            invariant_factors: &'a [u64],
            phi_image_order: u64,
            pairing_group_order: u64,
        }
        Repr {
            g: self.model.g,
            n: self.model.n,
            order: self.order(),
            invariant_factors: self.group().factors(),
            phi_image_order: self.image_order(),
            pairing_group_order: self.model.pairing_group().order(),
        }
        .serialize(s)
    }
}

/// The class of an alternating pairing on `X_n` modulo `phi(NS)`.
#[derive(Clone, Debug)]
pub struct BrauerClass {
    br: Arc<BrauerGroup>,
    representative: AlternatingPairing,
    coset: GroupElement,
}

impl PartialEq for BrauerClass {
    fn eq(&self, other: &Self) -> bool {
        self.br.model == other.br.model && self.coset == other.coset
    }
}

impl Eq for BrauerClass {}

impl BrauerClass {
    pub fn brauer_group(&self) -> &Arc<BrauerGroup> {
        &self.br
    }

    pub fn model(&self) -> &AbelianVarietyModel {
        &self.br.model
    }

    pub fn representative(&self) -> &AlternatingPairing {
        &self.representative
    }

    /// Image in the quotient group.
    pub fn coset(&self) -> &GroupElement {
        &self.coset
    }

    pub fn is_trivial(&self) -> bool {
        self.coset.is_zero()
    }

    pub fn order(&self) -> u64 {
        self.coset.order()
    }

    pub fn mul(&self, other: &BrauerClass) -> Result<BrauerClass> {
        if self.br.model != other.br.model {
            return Err(Error::ParentMismatch(format!("{:?}", self.br.model), format!("{:?}", other.br.model)));
        }
        self.br.class(&self.representative.mul(&other.representative)?)
    }

    pub fn inverse(&self) -> BrauerClass {
        self.br.class(&self.representative.inverse()).expect("inverse stays on X_n")
    }

    pub fn pow(&self, k: i64) -> BrauerClass {
        self.br.class(&self.representative.power(k)).expect("powers stay on X_n")
    }

    pub fn cyclic_decomposition(&self) -> Result<Vec<Block>> {
        cyclic_decomposition(self)
    }

    pub fn is_projectivization(&self) -> Result<Projectivization> {
        is_projectivization(&self.representative, &self.br.model)
    }

    pub fn report(&self) -> Result<ClassReport> {
        let verdict = self.is_projectivization()?;
        Ok(ClassReport {
            order: self.order(),
            cyclic_blocks: self.cyclic_decomposition()?,
            is_projectivization: verdict.holds(),
            certificate: verdict,
        })
    }
}

/// Cyclic-algebra descriptors `(n_i, d_i)` of the representative.
pub fn cyclic_decomposition(c: &BrauerClass) -> Result<Vec<Block>> {
    if c.representative.is_trivial() {
        return Ok(Vec::new());
    }
    Ok(mumford_normal_form(&c.representative)?.blocks().to_vec())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassReport {
    pub order: u64,
    pub cyclic_blocks: Vec<Block>,
    pub is_projectivization: bool,
    pub certificate: Projectivization,
}

/// Verdict of [`is_projectivization`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Projectivization {
    /// Coefficients `c_k` with `e = prod_k phi(E_k)^{c_k}`.
    Yes { ns_coefficients: Vec<u64> },
    /// A character of the pairing group, trivial on `phi(NS)` but not on `e`.
    No { separating_character: DualElement },
}

impl Projectivization {
    pub fn holds(&self) -> bool {
        matches!(self, Projectivization::Yes { .. })
    }
}

impl Serialize for Projectivization {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(1))?;
        match self {
            Projectivization::Yes { ns_coefficients } => m.serialize_entry("ns_coefficients", ns_coefficients)?,
            Projectivization::No { separating_character } => {
                m.serialize_entry("separating_character", separating_character.coords())?
            }
        }
        m.end()
    }
}

fn torsion_level(g: usize, e: &AlternatingPairing) -> Result<u64> {
    let h = e.group();
    if h.is_trivial() {
        return Ok(1);
    }
    let m = h.exponent();
    if h.rank() != 2 * g || h.factors().iter().any(|&f| f != m) {
        return Err(Error::InvalidGroup(format!("pairing lives on {h}, not on (Z/m)^{}", 2 * g)));
    }
    Ok(m)
}

/// Decide whether `e` on `X_m` lies in `{e^{L^m}|_{X_m}}`, the level-`m`
/// image of `NS(X)`.
pub fn is_projectivization(e: &AlternatingPairing, model: &AbelianVarietyModel) -> Result<Projectivization> {
    let m = torsion_level(model.g, e)?;
    let model = model.at_level(m)?;
    let p = model.pairing_group();
    let target = model.pairing_to_element(e)?;
    let ns = model.ns_elements()?;
    if target.is_zero() {
        return Ok(Projectivization::Yes { ns_coefficients: vec![0; ns.len()] });
    }
    let r = p.rank();
    let mut rows: Vec<Vec<BigInt>> =
        ns.iter().map(|v| v.coords().iter().map(|&c| BigInt::from(c)).collect()).collect();
    rows.extend((0..r).map(|i| (0..r).map(|j| BigInt::from(if i == j { m } else { 0 })).collect()));
    let x: Vec<BigInt> = target.coords().iter().map(|&c| BigInt::from(c)).collect();
    if let Some(z) = solve_left(&rows, r, &x) {
        let coeffs: Vec<u64> = z[..ns.len()]
            .iter()
            .map(|c| to_i64(&c.mod_floor(&BigInt::from(m))).map(|c| c as u64))
            .collect::<Result<_>>()?;
        let check = coeffs
            .iter()
            .zip(&ns)
            .fold(p.zero(), |acc, (&c, v)| acc.add(&v.scale(c as i64)).expect("same group"));
        if check != target {
            return Err(Error::InternalInvariantViolation("NS certificate does not reproduce the pairing".into()));
        }
        return Ok(Projectivization::Yes { ns_coefficients: coeffs });
    }
    let q = Subgroup::generated_by(&p, &ns)?.quotient()?;
    let y = q.projection.apply(&target)?;
    let i = y
        .coords()
        .iter()
        .position(|&c| c != 0)
        .ok_or_else(|| Error::InternalInvariantViolation("unsolvable pairing projects to zero".into()))?;
    let qi = q.group.factors()[i];
    let coords: Vec<i64> =
        q.projection.images().iter().map(|im| (im.coords()[i] * (m / qi)) as i64).collect();
    let chi = p.character(&coords)?;
    if chi.eval(&target)?.is_one() || ns.iter().any(|v| !chi.eval(v).map(|z| z.is_one()).unwrap_or(false)) {
        return Err(Error::InternalInvariantViolation("character does not separate the pairing".into()));
    }
    Ok(Projectivization::No { separating_character: chi })
}

/// Whether `n^g = n (n-1) ... (n-g+1)` for `n = d - g + 1`.
pub fn symmetric_product_obstruction(g: u64, d: u64) -> Result<bool> {
    if d as i128 <= 2 * g as i128 - 2 {
        return Err(Error::DomainError(format!("degree {d} must exceed 2g - 2 = {}", 2 * g as i128 - 2)));
    }
    let n = d - g + 1;
    let power = BigUint::from(n).pow(g as u32);
    let falling = (0..g).fold(BigUint::from(1u32), |acc, i| acc * BigUint::from(n - i));
    Ok(power == falling)
}

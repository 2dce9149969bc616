//! Acceptance suite: one line per criterion, exit status 1 if any fails.

use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use thetakit::brauer::{is_projectivization, standard_cocycle, symmetric_product_obstruction, AbelianVarietyModel};
use thetakit::exactnum::{lcm, CycloMatrix, RootOfUnity};
use thetakit::fingroup::{FiniteAbelianGroup, GroupElement};
use thetakit::heisenberg::{
    commutator_pairing, decompose_weight1, lattice, standard_rep, uh_basis, HeisenbergGroup, Weight1Rep,
};
use thetakit::pairing::{mumford_normal_form, AlternatingPairing};
use thetakit::selfdual::{build_block, central_product, classify_sign, sp_orbits, BlockKind, SelfDualThetaGroup};
use thetakit::Error;

fn random_rational_invertible<R: Rng>(n: usize, order: u64, rng: &mut R) -> CycloMatrix {
    loop {
        let rows: Vec<Vec<BigRational>> = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| BigRational::new(BigInt::from(rng.gen_range(-2..=2)), BigInt::from(rng.gen_range(1..=3))))
                    .collect()
            })
            .collect();
        let p = CycloMatrix::from_rationals(order, &rows);
        if p.rank() == n {
            return p;
        }
    }
}

fn vstack(parts: &[CycloMatrix]) -> CycloMatrix {
    let ts: Vec<CycloMatrix> = parts.iter().map(|m| m.transpose()).collect();
    CycloMatrix::hstack(&ts).transpose()
}

fn brute_radical_order(e: &AlternatingPairing) -> u64 {
    let h = e.group();
    let gens = h.generators();
    h.elements().filter(|x| gens.iter().all(|y| e.eval(x, y).unwrap().is_one())).count() as u64
}

fn commutator_scalar(a: &CycloMatrix, b: &CycloMatrix) -> RootOfUnity {
    let c = a.try_mul(b).unwrap().try_mul(&a.inverse().unwrap()).unwrap().try_mul(&b.inverse().unwrap()).unwrap();
    c.as_scalar().expect("commutator is scalar").as_root_of_unity().expect("commutator is a root of unity")
}

/// Images of the generators of `H` in a projective representation with
/// commutator pairing `e`, built from the normal form and twisted
/// Schrodinger representations.
fn realize(e: &AlternatingPairing) -> Vec<CycloMatrix> {
    let nf = mumford_normal_form(e).unwrap();
    let orders = nf.block_orders();
    let k = FiniteAbelianGroup::new(orders.clone()).unwrap();
    let lat = lattice(&k);
    let rep = standard_rep(&k);
    let heis = HeisenbergGroup::standard(&k);
    e.group()
        .generators()
        .iter()
        .map(|g| {
            let b = nf.to_blocks().apply(g).unwrap();
            let c = b.coords();
            let twisted: Vec<i64> = (0..c.len())
                .map(|i| {
                    let blk = nf.blocks()[i / 2];
                    if i % 2 == 1 {
                        ((c[i] * blk.d) % blk.n) as i64
                    } else {
                        c[i] as i64
                    }
                })
                .collect();
            let h = lat.element(&twisted).unwrap();
            rep.matrix(&heis.lift(&h).unwrap()).unwrap()
        })
        .collect()
}

fn lifted(ms: &[CycloMatrix], order: u64) -> Vec<CycloMatrix> {
    ms.iter().map(|m| m.lift(order).unwrap()).collect()
}

fn criterion_1() {
    for k in FiniteAbelianGroup::all_up_to_order(12) {
        let rep = standard_rep(&k);
        assert!(rep.check_homomorphism().unwrap(), "K = {k}: not a homomorphism");
        let n = rep.dimension();
        assert_eq!(CycloMatrix::span_rank(&rep.lift_images()), n * n, "K = {k}: not irreducible");
        assert!(rep.verify_irreducible());
        // oracle: chi'(x) chi(x')^{-1} on lattice generators
        let extracted = rep.extracted_pairing().unwrap();
        let heis = HeisenbergGroup::standard(&k);
        let lat = lattice(&k);
        for h1 in lat.generators() {
            for h2 in lat.generators() {
                let (a, b) = (heis.lift(&h1).unwrap(), heis.lift(&h2).unwrap());
                let formula = b.chi.eval(&a.x).unwrap() * a.chi.eval(&b.x).unwrap().inv();
                assert_eq!(extracted.eval(&h1, &h2).unwrap(), formula, "K = {k}");
            }
        }
        assert_eq!(extracted, commutator_pairing(&k));
    }
}

fn criterion_2() {
    for k in FiniteAbelianGroup::all_up_to_order(6) {
        let u = uh_basis(&k);
        let n = k.order() as usize;
        assert_eq!(CycloMatrix::span_rank(u.matrices()), n * n, "K = {k}: u_h is not a basis");
        let heis = HeisenbergGroup::standard(&k);
        let lat = lattice(&k);
        for h1 in lat.elements() {
            for h2 in lat.elements() {
                let (a, b) = (heis.lift(&h1).unwrap(), heis.lift(&h2).unwrap());
                let c = b.chi.eval(&a.x).unwrap();
                let lhs = u.get(&h1).try_mul(u.get(&h2)).unwrap();
                let sum = h1.add(&h2).unwrap();
                let rhs = u.get(&sum).scale(&c.to_cyclotomic(lhs.order()).unwrap());
                assert_eq!(lhs, rhs.lift(lhs.order()).unwrap(), "K = {k}: u_h u_h' differs");
            }
        }
        let weights = u.conjugation_weights().unwrap();
        let e = commutator_pairing(&k);
        let elems: Vec<GroupElement> = lat.elements().collect();
        let mut columns = std::collections::HashSet::new();
        for (j, h) in elems.iter().enumerate() {
            // weights[j][i]: conjugating u_{h_j} by the lift of h_i
            let row: Vec<RootOfUnity> = weights[j].iter().map(|w| w.reduced()).collect();
            for (i, hc) in elems.iter().enumerate() {
                assert_eq!(weights[j][i], e.eval(hc, h).unwrap(), "K = {k}: weight mismatch");
            }
            columns.insert(row);
        }
        assert_eq!(columns.len(), elems.len(), "K = {k}: weights not distinct");
        assert!(u.weights_regular().unwrap());
    }
}

fn criterion_3() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let groups: Vec<FiniteAbelianGroup> =
        FiniteAbelianGroup::all_up_to_order(4096).into_iter().filter(|g| g.rank() >= 2).collect();
    for trial in 0..500 {
        let h = &groups[rng.gen_range(0..groups.len())];
        let e = AlternatingPairing::random(h, &mut rng);
        let nf = mumford_normal_form(&e).unwrap();
        assert_eq!(nf.reconstruct().unwrap(), e, "trial {trial}: round trip on {h}");
        let orders = nf.block_orders();
        for w in orders.windows(2) {
            assert_eq!(w[0] % w[1], 0, "trial {trial}: divisibility chain {orders:?}");
        }
        for b in nf.blocks() {
            assert_eq!(num_integer::gcd(b.n, b.d), 1);
        }
        let d: u64 = orders.iter().product();
        let index = h.order() / brute_radical_order(&e);
        assert_eq!(d * d, index, "trial {trial}: d^2 != [H : H^perp]");
        assert_eq!(e.homogeneous_index().unwrap(), d);
    }
}

fn criterion_4() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let groups: Vec<FiniteAbelianGroup> =
        FiniteAbelianGroup::all_up_to_order(4).into_iter().filter(|g| !g.is_trivial()).collect();
    for trial in 0..100 {
        let k = &groups[rng.gen_range(0..groups.len())];
        let m = rng.gen_range(1..=3usize);
        let heis = HeisenbergGroup::standard(k);
        let w = Weight1Rep::standard(&heis);
        let mut sum = w.clone();
        for _ in 1..m {
            sum = sum.direct_sum(&w).unwrap();
        }
        let p = random_rational_invertible(sum.dimension(), sum.order(), &mut rng);
        let v = sum.conjugate(&p).unwrap();
        let d = decompose_weight1(&v).unwrap();
        // oracle: common fixed space of the K-generators
        let id = CycloMatrix::identity(v.dimension(), v.order());
        let stacked = vstack(&v.a().iter().map(|a| a - &id).collect::<Vec<_>>());
        let fixed = stacked.kernel().cols();
        assert_eq!(fixed, m, "trial {trial}: dim V^K");
        assert_eq!(d.multiplicity, m, "trial {trial}: K = {k}, m = {m}");
    }
}

fn criterion_5() {
    for r in 1..=3usize {
        let report = sp_orbits(r).unwrap();
        let sizes: Vec<usize> = report.orbits.iter().map(|o| o.size).collect();
        let big = 1usize << (2 * r - 1);
        let half = 1usize << (r - 1);
        assert_eq!(sizes, vec![big + half, big - half], "r = {r}");
        assert_eq!(sizes.iter().sum::<usize>(), 1 << (2 * r));
    }
    assert_eq!(sp_orbits(1).unwrap().orbits.iter().map(|o| o.size).collect::<Vec<_>>(), vec![3, 1]);
    assert_eq!(sp_orbits(2).unwrap().orbits.iter().map(|o| o.size).collect::<Vec<_>>(), vec![10, 6]);
    assert_eq!(sp_orbits(3).unwrap().orbits.iter().map(|o| o.size).collect::<Vec<_>>(), vec![36, 28]);
}

fn product(kinds: &[BlockKind]) -> SelfDualThetaGroup {
    let mut g = build_block(kinds[0]);
    for &k in &kinds[1..] {
        g = central_product(&g, &build_block(k));
    }
    g
}

fn criterion_6() {
    let d = build_block(BlockKind::Dihedral);
    let q = build_block(BlockKind::Quaternion);
    assert_eq!(classify_sign(&d).unwrap(), 1);
    assert_eq!(classify_sign(&q).unwrap(), -1);
    let sign = |k: BlockKind| if k == BlockKind::Dihedral { 1i8 } else { -1 };
    let mut words: Vec<Vec<BlockKind>> = vec![vec![]];
    let mut groups = Vec::new();
    for _ in 0..3 {
        words = words
            .iter()
            .flat_map(|w| {
                [BlockKind::Dihedral, BlockKind::Quaternion].map(|k| {
                    let mut w = w.clone();
                    w.push(k);
                    w
                })
            })
            .collect();
        for w in &words {
            let g = product(w);
            let expected: i8 = w.iter().map(|&k| sign(k)).product();
            assert_eq!(classify_sign(&g).unwrap(), expected, "{w:?}");
            groups.push((w.clone(), g, expected));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for trial in 0..20 {
        let (w, g, expected) = &groups[rng.gen_range(0..groups.len())];
        let p = random_rational_invertible(g.dimension(), 4, &mut rng);
        let c = g.conjugate(&p).unwrap();
        assert!(c.form_is_invariant().unwrap());
        assert_eq!(classify_sign(&c).unwrap(), *expected, "trial {trial}: {w:?}");
    }
}

/// Oracle: rank over F_p of the NS coordinates, `p` prime.
fn image_order_mod_prime(model: &AbelianVarietyModel) -> u64 {
    let p = model.level() as i64;
    if p == 1 {
        return 1;
    }
    let r = 2 * model.g();
    let mut rows: Vec<Vec<i64>> = model
        .ns()
        .iter()
        .map(|e| {
            let mut v = Vec::new();
            for i in 0..r {
                for j in i + 1..r {
                    v.push(e[i][j].rem_euclid(p));
                }
            }
            v
        })
        .collect();
    let cols = r * (r - 1) / 2;
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(rank, piv);
        let inv = (1..p).find(|x| x * rows[rank][c] % p == 1).unwrap();
        for i in 0..rows.len() {
            if i != rank && rows[i][c] != 0 {
                let f = rows[i][c] * inv % p;
                for j in 0..cols {
                    rows[i][j] = (rows[i][j] - f * rows[rank][j]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    (p as u64).pow(rank as u32)
}

fn random_model<R: Rng>(g: usize, n: u64, rng: &mut R) -> AbelianVarietyModel {
    let r = 2 * g;
    let count = rng.gen_range(0..=3);
    let ns = (0..count)
        .map(|_| {
            let mut e = vec![vec![0i64; r]; r];
            for i in 0..r {
                for j in i + 1..r {
                    let v = rng.gen_range(-3..=3);
                    e[i][j] = v;
                    e[j][i] = -v;
                }
            }
            e
        })
        .collect();
    AbelianVarietyModel::new(g, n, ns).unwrap()
}

fn criterion_7() {
    for n in 1..=6 {
        let model = AbelianVarietyModel::principal(1, n).unwrap();
        assert_eq!(model.brauer_group().unwrap().order(), 1, "g = 1, n = {n}");
        let x = model.torsion_group();
        let mut rng = ChaCha8Rng::seed_from_u64(n);
        let e = AlternatingPairing::random(&x, &mut rng);
        assert!(is_projectivization(&e, &model).unwrap().holds());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for g in 1..=3usize {
        for n in 1..=3u64 {
            let mut models = vec![
                AbelianVarietyModel::principal(g, n).unwrap(),
                AbelianVarietyModel::full(g, n).unwrap(),
                AbelianVarietyModel::new(g, n, vec![]).unwrap(),
            ];
            models.extend((0..4).map(|_| random_model(g, n, &mut rng)));
            for model in models {
                let br = model.brauer_group().unwrap();
                let total = n.pow((g * (2 * g - 1)) as u32);
                assert_eq!(br.image_order(), image_order_mod_prime(&model), "g = {g}, n = {n}");
                assert_eq!(br.order() * br.image_order(), total, "g = {g}, n = {n}");
            }
        }
    }
    let mut nondegenerate = 0;
    for h in FiniteAbelianGroup::all_up_to_order(16) {
        for _ in 0..8 {
            let e = AlternatingPairing::random(&h, &mut rng);
            match standard_cocycle(&e) {
                Ok(alg) => {
                    nondegenerate += 1;
                    assert!(alg.cocycle_failure().is_none(), "{e:?}");
                    assert!(alg.associativity_failure().unwrap().is_none(), "{e:?}");
                    assert_eq!(alg.center_dimension().unwrap(), 1, "{e:?}");
                    // oracle: commutator of the structure constants is e
                    for s in h.elements() {
                        for t in h.elements() {
                            let c = alg.cocycle(&s, &t).unwrap() * alg.cocycle(&t, &s).unwrap().inv();
                            assert_eq!(c, e.eval(&s, &t).unwrap());
                        }
                    }
                }
                Err(Error::NoIsotropicSplitting(_)) => assert!(!e.is_nondegenerate()),
                Err(err) => panic!("{err}"),
            }
        }
    }
    assert!(nondegenerate > 0);
}

fn criterion_8() {
    for g in 0..=10u64 {
        for d in (2 * g)..=100 {
            let holds = symmetric_product_obstruction(g, d).unwrap();
            // oracle: exact integer comparison in u128 where it fits
            let n = (d - g + 1) as u128;
            if let Some(pow) = n.checked_pow(g as u32) {
                let falling: u128 = (0..g as u128).map(|i| n - i).product();
                assert_eq!(holds, pow == falling, "g = {g}, d = {d}");
            }
            assert_eq!(holds, g <= 1, "g = {g}, d = {d}");
        }
    }
}

fn criterion_9() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let groups: Vec<FiniteAbelianGroup> =
        FiniteAbelianGroup::all_up_to_order(16).into_iter().filter(|g| g.rank() >= 2).collect();
    for trial in 0..200 {
        let h = &groups[rng.gen_range(0..groups.len())];
        let e1 = AlternatingPairing::random(h, &mut rng);
        let e2 = AlternatingPairing::random(h, &mut rng);
        let (m1, m2) = (realize(&e1), realize(&e2));
        let order = lcm(m1[0].order(), m2[0].order());
        let (m1, m2) = (lifted(&m1, order), lifted(&m2, order));
        let tensor: Vec<CycloMatrix> = m1.iter().zip(&m2).map(|(a, b)| a.kron(b)).collect();
        let dual: Vec<CycloMatrix> = m1.iter().map(|a| a.inverse().unwrap().transpose()).collect();
        let gens = h.generators();
        for i in 0..gens.len() {
            for j in 0..gens.len() {
                let (gi, gj) = (&gens[i], &gens[j]);
                let v1 = e1.eval(gi, gj).unwrap();
                let v2 = e2.eval(gi, gj).unwrap();
                assert_eq!(commutator_scalar(&m1[i], &m1[j]), v1, "trial {trial}: realization of e1");
                assert_eq!(commutator_scalar(&tensor[i], &tensor[j]), v1.clone() * v2, "trial {trial}: e_(P1 P2)");
                assert_eq!(commutator_scalar(&dual[i], &dual[j]), v1.inv(), "trial {trial}: e_(P*)");
            }
        }
        assert_eq!(e1.mul(&e2).unwrap().eval(&gens[0], &gens[1]).unwrap(),
            e1.eval(&gens[0], &gens[1]).unwrap() * e2.eval(&gens[0], &gens[1]).unwrap());
        assert!(e1.mul(&e1.inverse()).unwrap().is_trivial());
        let d = e1.homogeneous_index().unwrap();
        let q = e1.nondegenerate_quotient().unwrap();
        assert!(q.pairing.power(d as i64).is_trivial(), "trial {trial}: e^d on the quotient");
        assert!(e1.power(d as i64).is_trivial());
    }
}

fn main() {
    let criteria: [(u32, &str, Duration, fn()); 9] = [
        (1, "Heisenberg representation correctness, |K| <= 12", Duration::from_secs(10), criterion_1),
        (2, "u_h basis, structure constants and regular weights, |K| <= 6", Duration::from_secs(10), criterion_2),
        (3, "normal-form round trip on 500 random pairings", Duration::from_secs(60), criterion_3),
        (4, "weight-1 multiplicity on 100 random conjugates", Duration::from_secs(30), criterion_4),
        (5, "two Sp(H) orbits for r <= 3", Duration::from_secs(60), criterion_5),
        (6, "sign classification of D, Q and central products", Duration::from_secs(30), criterion_6),
        (7, "Brauer group orders and cocycle algebras", Duration::from_secs(60), criterion_7),
        (8, "symmetric-product obstruction identity", Duration::from_secs(1), criterion_8),
        (9, "multiplicativity of pairings over 200 random pairs", Duration::from_secs(10), criterion_9),
    ];
    let filter: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    panic::set_hook(Box::new(|info| eprintln!("  {info}")));
    let mut failed = 0;
    for (id, name, budget, run) in criteria {
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(run));
        let elapsed = start.elapsed();
        let verdict = match result {
            Ok(()) if elapsed <= budget => "PASS",
            Ok(()) => "FAIL (over budget)",
            Err(_) => "FAIL",
        };
        if verdict != "PASS" {
            failed += 1;
        }
        println!("criterion {id}: {verdict} {name} [{:.2}s / {}s]", elapsed.as_secs_f64(), budget.as_secs());
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}

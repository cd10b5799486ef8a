use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use wittforge::coeq::{lax_quotient, Arrow, Category, Functor};
use wittforge::prism::{make_prism, PrismKind};
use wittforge::ring::{LocalSpec, RingSpec};
use wittforge::sigma::{self, g_act, Gmat};
use wittforge::witt::{all_vectors, random_vector};
use wittforge::{Ring, Strategy as Arith, WittVector};

fn small_ring() -> impl Strategy<Value = Ring> {
    (prop_oneof![Just(2u64), Just(3), Just(5)], 1u32..4, 1usize..4).prop_map(|(p, k, e)| Ring::local(p, k, e).unwrap())
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(r in small_ring(), seed in any::<u64>()) {
        let mut g = rng(seed);
        let (a, b, c) = (r.random(&mut g), r.random(&mut g), r.random(&mut g));
        prop_assert_eq!(r.mul(&a, &r.add(&b, &c)), r.add(&r.mul(&a, &b), &r.mul(&a, &c)));
        prop_assert_eq!(r.mul(&r.mul(&a, &b), &c), r.mul(&a, &r.mul(&b, &c)));
        prop_assert_eq!(r.sub(&r.add(&a, &b), &b), a.clone());
        prop_assert!(r.is_unit(&a) != r.is_nilpotent(&a));
        if r.is_unit(&a) {
            prop_assert_eq!(r.mul(&a, &r.inv(&a).unwrap()), r.one());
        }
    }

    #[test]
    fn witt_ring_laws(r in small_ring(), n in 1usize..4, seed in any::<u64>()) {
        let mut g = rng(seed);
        let x = random_vector(&r, n, 0, &mut g);
        let y = random_vector(&r, n, 0, &mut g);
        let z = random_vector(&r, n, 0, &mut g);
        prop_assert_eq!(x.add(&y).unwrap(), y.add(&x).unwrap());
        prop_assert_eq!(x.mul(&y).unwrap().mul(&z).unwrap(), x.mul(&y.mul(&z).unwrap()).unwrap());
        prop_assert_eq!(x.mul(&y.add(&z).unwrap()).unwrap(), x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap());
        prop_assert!(x.sub(&x).unwrap().is_zero());
    }

    #[test]
    fn strategies_agree(r in small_ring(), n in 1usize..4, seed in any::<u64>()) {
        let mut g = rng(seed);
        let x = random_vector(&r, n, 0, &mut g);
        let y = random_vector(&r, n, 0, &mut g);
        let u = x.mul_with(&y, Arith::Universal).unwrap();
        prop_assert_eq!(&u, &x.mul_with(&y, Arith::Ghost).unwrap());
        prop_assert_eq!(&u, &x.mul_with(&y, Arith::Differential).unwrap());
        prop_assert_eq!(x.add_with(&y, Arith::Universal).unwrap(), x.add_with(&y, Arith::Ghost).unwrap());
    }

    #[test]
    fn frobenius_and_verschiebung(r in small_ring(), n in 1usize..4, seed in any::<u64>()) {
        let mut g = rng(seed);
        let p = r.p() as i64;
        let x = random_vector(&r, n, 0, &mut g);
        let y = random_vector(&r, n + 1, 0, &mut g);
        prop_assert_eq!(x.verschiebung().unwrap().frobenius().unwrap(), x.mul_int(p).unwrap());
        prop_assert_eq!(
            x.verschiebung().unwrap().mul(&y).unwrap(),
            x.mul(&y.frobenius().unwrap()).unwrap().verschiebung().unwrap()
        );
        if r.is_char_p() && n > 1 {
            prop_assert_eq!(x.frobenius().unwrap().verschiebung().unwrap(), x.mul_int(p).unwrap());
        }
    }

    #[test]
    fn ghost_is_multiplicative(r in small_ring(), n in 1usize..4, seed in any::<u64>()) {
        let mut g = rng(seed);
        let x = random_vector(&r, n, 0, &mut g);
        let y = random_vector(&r, n, 0, &mut g);
        let (gx, gy, gxy) = (x.ghost(), y.ghost(), x.mul(&y).unwrap().ghost());
        for i in 0..n {
            prop_assert_eq!(&gxy.entries()[i], &r.mul(&gx.entries()[i], &gy.entries()[i]));
        }
    }

    #[test]
    fn teichmuller_is_multiplicative(r in small_ring(), n in 1usize..4, seed in any::<u64>()) {
        let mut g = rng(seed);
        let (a, b) = (r.random(&mut g), r.random(&mut g));
        let ta = WittVector::teichmuller(&r, &a, n, 0);
        let tb = WittVector::teichmuller(&r, &b, n, 0);
        prop_assert_eq!(ta.mul(&tb).unwrap(), WittVector::teichmuller(&r, &r.mul(&a, &b), n, 0));
    }

    #[test]
    fn units_of_witt_vectors(r in small_ring(), n in 1usize..4, seed in any::<u64>()) {
        let mut g = rng(seed);
        let x = random_vector(&r, n, 0, &mut g);
        prop_assert_eq!(x.is_unit(), r.is_unit(x.comp(0)));
        if x.is_unit() {
            prop_assert!(x.mul(&x.invert().unwrap()).unwrap().is_one());
        }
    }

    #[test]
    fn q_de_rham_delta(p in prop_oneof![Just(2u64), Just(3)], seed in any::<u64>()) {
        let m = make_prism(PrismKind::QdeRham, p, 4, 3).unwrap();
        let r = m.ring();
        let a = r.random(&mut rng(seed));
        let (_, d) = m.delta(&a).unwrap();
        let lifted = r.from_coeffs(d.coeffs().to_vec()).unwrap();
        prop_assert_eq!(r.sub(&m.phi().apply(&a), &r.pow(&a, p)), r.scale(&lifted, p as i64));
    }

    #[test]
    fn action_composes(i in 0usize..1000, j in 0usize..1000, k in 0usize..1000) {
        let r = Ring::zmod(2, 2).unwrap();
        let pts = sigma::all_points(&r, 2, true).unwrap();
        let pt = &pts[i % pts.len()];
        let alphas: Vec<WittVector> = all_vectors(&r, 2, 2).unwrap();
        let g1 = Gmat::from_alpha(pt.v(), &alphas[j % alphas.len()]);
        let g2 = Gmat::from_alpha(pt.v(), &alphas[k % alphas.len()]);
        if let (Ok(g1), Ok(g2)) = (g1, g2) {
            let moved = g_act(pt, &g1).unwrap();
            prop_assert!(moved.is_economic());
            prop_assert!(sigma::is_primitive(&moved.f_prime().unwrap()).unwrap());
            prop_assert_eq!(g_act(&moved, &g2).unwrap(), g_act(pt, &g1.then(&g2).unwrap()).unwrap());
        }
    }

    #[test]
    fn lax_quotient_of_a_permutation(perm in Just((0..5usize).collect::<Vec<_>>()).prop_shuffle(), n in 0u32..6) {
        let arrows = (0..5).map(|c| Arrow { src: c, dst: c, degree: 0, label: format!("1_{c}") }).collect();
        let c = Category::new((0..5).map(|c| c.to_string()).collect(), arrows, (0..5).collect(), (0, 0), |_, f, _| Ok(f)).unwrap();
        let sigma = Functor { obj: perm.clone(), arr: perm.clone() };
        let l = lax_quotient(&c, &sigma, n).unwrap();
        for a in 0..5 {
            let mut orbit = a;
            for m in 0..=n as i64 {
                for b in 0..5 {
                    prop_assert_eq!(l.hom(a, b, m).len(), usize::from(orbit == b));
                }
                orbit = perm[orbit];
            }
        }
    }
}

#[test]
fn product_rings_split() {
    let r = Ring::new(RingSpec::product(2, vec![LocalSpec::nil(1, 1), LocalSpec::nil(2, 1)])).unwrap();
    assert_eq!(r.cardinality(), 8);
    let x = WittVector::from_ints(&r, &[3, 1]).unwrap();
    let parts: Vec<WittVector> = (0..2).map(|f| x.project(f)).collect();
    assert_eq!(WittVector::from_factors(&r, &parts).unwrap(), x);
}

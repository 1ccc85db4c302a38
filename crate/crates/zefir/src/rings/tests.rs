use super::*;
use crate::rings::map::RingMap;
use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn z3_4() -> Ring {
    Ring::unramified(3, 4, 1).unwrap()
}

fn eisenstein_like() -> Ring {
    // Z[t]/(3^4, t^2+t+1): t is a primitive cube root of unity
    Ring::local(3, 4, &[1, 1, 1], None).unwrap()
}

#[test]
fn add_wraps_at_ell_power() {
    let r = z3_4();
    let x = r.from_i64(40);
    let y = r.from_i64(41);
    assert!((&x + &y).is_zero());
}

#[test]
fn quadratic_generator_relation() {
    let r = eisenstein_like();
    let t = r.gen().unwrap();
    let lhs = &t * &t;
    let rhs = r.from_coeffs(&[-1, -1]).unwrap();
    assert_eq!(lhs, rhs);
    // t^3 = 1: t is a cube root of unity
    assert_eq!(t.pow(3), r.one());
}

#[test]
fn fiber_componentwise_mul_keeps_gluing() {
    let base = z3_4();
    let fr = Ring::fiber(base.clone(), base.clone()).unwrap();
    let x = fr.pair(base.from_i64(1), base.from_i64(4)).unwrap();
    let sq = &x * &x;
    let expect = fr.pair(base.from_i64(1), base.from_i64(16)).unwrap();
    assert_eq!(sq, expect);
}

#[test]
fn fiber_rejects_incongruent_pairs() {
    let base = z3_4();
    let fr = Ring::fiber(base.clone(), base.clone()).unwrap();
    assert!(fr.pair(base.from_i64(1), base.from_i64(5)).is_err());
}

#[test]
fn unit_inverse_by_lifting() {
    let r = z3_4();
    let two = r.from_i64(2);
    let inv = r.is_unit(&two).expect("2 is a unit mod 81");
    assert_eq!(inv, r.from_i64(41));
    assert_eq!(&two * &inv, r.one());
    assert!(r.is_unit(&r.from_i64(3)).is_none());
}

#[test]
fn product_unit_needs_all_components() {
    let c = Ring::unramified(3, 2, 1).unwrap();
    let pr = Ring::product(vec![c.clone(), c.clone()]).unwrap();
    let x = pr.tuple(vec![c.from_i64(1), c.from_i64(3)]).unwrap();
    assert!(pr.is_unit(&x).is_none());
    let y = pr.tuple(vec![c.from_i64(1), c.from_i64(2)]).unwrap();
    let inv = pr.is_unit(&y).expect("componentwise unit");
    assert_eq!(&y * &inv, pr.one());
}

#[test]
fn teichmuller_pins() {
    let r = z3_4();
    assert_eq!(r.teichmuller(&r.from_i64(2)).unwrap(), r.from_i64(80));
    assert_eq!(r.teichmuller(&r.one()).unwrap(), r.one());
    assert!(r.teichmuller(&r.from_i64(3)).is_err());
}

#[test]
fn teichmuller_in_residue_degree_two() {
    let r = Ring::unramified(3, 2, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut next = || rng.next_u64();
    let mut seen = 0;
    while seen < 50 {
        let x = r.sample_element(&mut next);
        if r.is_unit(&x).is_none() {
            continue;
        }
        seen += 1;
        let y = r.teichmuller(&x).unwrap();
        // order divides 3^2 - 1 = 8, and the residue is preserved
        assert_eq!(y.pow(8), r.one());
        assert_eq!(y.pow(9), y);
        assert_eq!(r.residue_poly(&y).unwrap(), r.residue_poly(&x).unwrap());
    }
}

#[test]
fn teichmuller_is_multiplicative() {
    let r = Ring::unramified(3, 3, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut next = || rng.next_u64();
    let mut done = 0;
    while done < 100 {
        let x = r.sample_element(&mut next);
        let y = r.sample_element(&mut next);
        if r.is_unit(&x).is_none() || r.is_unit(&y).is_none() {
            continue;
        }
        done += 1;
        let lhs = r.teichmuller(&(&x * &y)).unwrap();
        let rhs = &r.teichmuller(&x).unwrap() * &r.teichmuller(&y).unwrap();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn idempotent_census() {
    let local = z3_4();
    assert_eq!(local.idempotents().len(), 2);

    let c = Ring::unramified(3, 2, 1).unwrap();
    let pr = Ring::product(vec![c.clone(), c.clone()]).unwrap();
    let idem = pr.idempotents();
    assert_eq!(idem.len(), 4);
    for e in &idem {
        assert_eq!(&(e * e), e);
    }

    let base = Ring::unramified(3, 3, 1).unwrap();
    let fr = Ring::fiber(base.clone(), base).unwrap();
    let idem = fr.idempotents();
    assert_eq!(idem.len(), 2);
    assert!(idem.contains(&fr.zero()) && idem.contains(&fr.one()));
}

#[test]
fn cyclotomic_presentation_shapes() {
    // Z[zeta_3]/3^6: reduction (t-1)^2
    let e3 = Ring::cyclotomic_local(3, 6, 3).unwrap();
    let lp = e3.local_pres().unwrap();
    assert_eq!(fpoly::deg(&lp.j), Some(1));
    assert_eq!(lp.e, 2);
    // Z[zeta_21]/3^6: reduction = (degree-6 irreducible)^2, residue field F_729
    let e21 = Ring::cyclotomic_local(3, 6, 21).unwrap();
    let lp = e21.local_pres().unwrap();
    assert_eq!(fpoly::deg(&lp.j), Some(6));
    assert_eq!(lp.e, 2);
    // mu_7 already present: extension demand is the identity
    let (ext, incl) = e21.required_cyclotomic_extension(7, 1).unwrap();
    assert_eq!(ext, e21);
    let g = e21.gen().unwrap();
    assert_eq!(incl.apply(&g).unwrap(), g);
    // zeta_21 really has order 21
    assert_eq!(g.pow(21), e21.one());
    assert_ne!(g.pow(7), e21.one());
    assert_ne!(g.pow(3), e21.one());
}

#[test]
fn extension_degrees_match_multiplicative_orders() {
    let r3 = Ring::unramified(3, 6, 1).unwrap();
    let (ext, _) = r3.required_cyclotomic_extension(7, 1).unwrap();
    let lp = ext.local_pres().unwrap();
    assert_eq!(fpoly::deg(&lp.j), Some(6)); // ord of 3 mod 7

    let r13 = Ring::unramified(13, 6, 1).unwrap();
    let (ext, _) = r13.required_cyclotomic_extension(5, 1).unwrap();
    assert_eq!(fpoly::deg(&ext.local_pres().unwrap().j), Some(4)); // ord of 13 mod 5

    let (same, _) = r3.required_cyclotomic_extension(7, 0).unwrap();
    assert_eq!(same, r3);
}

#[test]
fn inclusion_map_is_a_homomorphism() {
    // residue degree 2 -> 4 forces a real root search + Hensel lift
    let src = Ring::unramified(3, 4, 2).unwrap();
    let (dst, incl) = src.required_cyclotomic_extension(5, 1).unwrap();
    assert_eq!(fpoly::deg(&dst.local_pres().unwrap().j), Some(4));
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut next = || rng.next_u64();
    for _ in 0..200 {
        let x = src.sample_element(&mut next);
        let y = src.sample_element(&mut next);
        let fx = incl.apply(&x).unwrap();
        let fy = incl.apply(&y).unwrap();
        assert_eq!(incl.apply(&(&x + &y)).unwrap(), &fx + &fy);
        assert_eq!(incl.apply(&(&x * &y)).unwrap(), &fx * &fy);
        if let Some(xi) = src.is_unit(&x) {
            assert_eq!(&fx * &incl.apply(&xi).unwrap(), dst.one());
            // Teichmueller commutes with unramified inclusions
            assert_eq!(
                incl.apply(&src.teichmuller(&x).unwrap()).unwrap(),
                dst.teichmuller(&fx).unwrap()
            );
        }
    }
}

#[test]
fn precision_reduction_map() {
    let src = Ring::unramified(3, 6, 2).unwrap();
    let dst = Ring::unramified(3, 4, 2).unwrap();
    let map = RingMap::local_gen(src.clone(), dst.clone(), dst.gen().unwrap()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut next = || rng.next_u64();
    for _ in 0..200 {
        let x = src.sample_element(&mut next);
        let y = src.sample_element(&mut next);
        assert_eq!(
            map.apply(&(&x * &y)).unwrap(),
            &map.apply(&x).unwrap() * &map.apply(&y).unwrap()
        );
    }
    // the opposite direction is not a ring map: 3^4 is nonzero in precision 6
    assert!(RingMap::local_gen(dst, src.clone(), src.gen().unwrap()).is_err());
}

#[test]
fn residue_map_kills_exactly_the_maximal_ideal() {
    let r = Ring::cyclotomic_local(3, 4, 3).unwrap();
    let rm = r.residue_map().unwrap();
    let t = r.gen().unwrap();
    let pi = &t - &r.one(); // uniformizer: t - 1
    assert!(rm.apply(&pi).unwrap().is_zero());
    assert!(rm.apply(&r.from_i64(3)).unwrap().is_zero());
    assert!(!rm.apply(&t).unwrap().is_zero());
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut next = || rng.next_u64();
    for _ in 0..100 {
        let x = r.sample_element(&mut next);
        let is_unit = r.is_unit(&x).is_some();
        let res_zero = rm.apply(&x).unwrap().is_zero();
        assert_eq!(is_unit, !res_zero);
    }
}

#[test]
fn no_root_means_error() {
    let r = z3_4();
    // t^2 + 1 has no root mod 3
    assert!(r.embed_root_of(&[1, 0, 1]).is_err());
}

#[test]
fn ring_axioms_random() {
    let c = Ring::unramified(3, 3, 1).unwrap();
    let rings = vec![
        z3_4(),
        Ring::unramified(3, 4, 2).unwrap(),
        Ring::cyclotomic_local(3, 4, 3).unwrap(),
        Ring::cyclotomic_local(3, 3, 21).unwrap(),
        Ring::product(vec![c.clone(), Ring::unramified(3, 2, 2).unwrap()]).unwrap(),
        Ring::fiber(c.clone(), c.clone()).unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut next = || rng.next_u64();
    for r in rings {
        for _ in 0..200 {
            let x = r.sample_element(&mut next);
            let y = r.sample_element(&mut next);
            let z = r.sample_element(&mut next);
            assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
            assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            assert_eq!(&x * &y, &y * &x);
            assert_eq!(&x + &y, &y + &x);
            assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            assert_eq!(&x * &r.one(), x);
            assert!((&x + &(-&x)).is_zero());
            assert_eq!(&x - &y, &x + &(-&y));
        }
    }
}

#[test]
fn fiber_closure_under_ops() {
    let base = Ring::unramified(3, 4, 2).unwrap();
    let fr = Ring::fiber(base.clone(), base.clone()).unwrap();
    let rm = base.residue_map().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut next = || rng.next_u64();
    for _ in 0..300 {
        let x = fr.sample_element(&mut next);
        let y = fr.sample_element(&mut next);
        for v in [&x + &y, &x * &y, &x - &y] {
            let a = v.component(0).unwrap();
            let b = v.component(1).unwrap();
            assert_eq!(rm.apply(&a).unwrap(), rm.apply(&b).unwrap());
        }
    }
}

#[test]
fn checked_ops_reject_foreign_elements() {
    let r1 = z3_4();
    let r2 = Ring::unramified(3, 2, 1).unwrap();
    let x = r1.one();
    let y = r2.one();
    assert!(r1.add(&x, &y).is_err());
    assert!(r1.mul(&x, &y).is_err());
}

#[test]
fn display_round_trip_is_stable() {
    let r = Ring::unramified(3, 4, 2).unwrap();
    let x = r.from_coeffs(&[5, 7]).unwrap();
    assert_eq!(x.to_string(), "[5,7]");
    assert_eq!(r.label(), "unram(3,4,2)");
    let fr = Ring::fiber(z3_4(), z3_4()).unwrap();
    assert_eq!(fr.label(), "fiber(unram(3,4,1),unram(3,4,1))");
}

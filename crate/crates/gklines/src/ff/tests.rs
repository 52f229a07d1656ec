use super::upoly::UPoly;
use super::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn f(p: u64, k: u32) -> &'static Field {
    make_field(p, k).unwrap()
}

#[test]
fn modulus_selection_is_the_canonical_first_irreducible() {
    // prime field: modulus x
    assert_eq!(f(2, 1).modulus(), &[0, 1]);
    // unique irreducible quadratic over F_2
    assert_eq!(f(2, 2).modulus(), &[1, 1, 1]);
    assert_eq!(f(3, 1).modulus(), &[0, 1]);
}

#[test]
fn degree_six_modulus_has_no_small_factors() {
    // independent oracle: trial-divide by every monic polynomial of
    // degree 1..=3 over F_2
    let fld = f(2, 6);
    let m = fld.modulus().to_vec();
    for d in 1..=3usize {
        for n in 0..(1u32 << d) {
            let mut g = vec![0u8; d + 1];
            g[d] = 1;
            for (i, gi) in g.iter_mut().enumerate().take(d) {
                *gi = ((n >> i) & 1) as u8;
            }
            let r = super::pf_rem(&m, &g, 2);
            assert!(!r.is_empty(), "modulus divisible by degree-{d} factor");
        }
    }
}

#[test]
fn field_axioms_hold_on_random_triples() {
    for (p, k) in [(2u64, 2u32), (2, 6), (3, 2), (3, 6)] {
        let fld = f(p, k);
        let mut rng = StdRng::seed_from_u64(0x6b_6c69_6e65 + p + k as u64);
        let size = fld.size();
        for _ in 0..10_000 {
            let a = fld.element(rng.gen_range(0..size));
            let b = fld.element(rng.gen_range(0..size));
            let c = fld.element(rng.gen_range(0..size));
            assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            assert_eq!(&a * &b, &b * &a);
            if !a.is_zero() {
                assert!((&a * &a.inv()).is_one());
            }
        }
    }
}

#[test]
fn multiplicative_group_order_annihilates() {
    // exhaustive for fields up to 2^16 elements
    for (p, k) in [(2u64, 1u32), (2, 2), (2, 6), (2, 12), (3, 2), (3, 6)] {
        let fld = f(p, k);
        let ord = (fld.size() - 1) as u128;
        for e in fld.iter() {
            if !e.is_zero() {
                assert!(e.pow(ord).is_one());
            }
        }
    }
}

#[test]
fn frobenius_fixes_the_prime_subfield_and_squares_omega() {
    let f4 = f(2, 2);
    let omega = f4.gen();
    // ω² = ω + 1 in F_4
    let sq = frobenius(&omega, 2).unwrap();
    assert_eq!(sq, &omega + &f4.one());
    // Frobenius of order two on F_{q^2}
    for e in f4.iter() {
        assert_eq!(frobenius(&frobenius(&e, 2).unwrap(), 2).unwrap(), e);
    }
    // e^q = e on F_q embedded in F_{q^2}
    for v in 0..2 {
        let e = f4.from_prime(v);
        assert_eq!(frobenius(&e, 2).unwrap(), e);
    }
    assert!(frobenius(&omega, 3).is_err());
    // additivity on random pairs
    let f64f = f(2, 6);
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..1000 {
        let a = f64f.element(rng.gen_range(0..64));
        let b = f64f.element(rng.gen_range(0..64));
        assert_eq!(
            frobenius(&(&a + &b), 2).unwrap(),
            &frobenius(&a, 2).unwrap() + &frobenius(&b, 2).unwrap()
        );
    }
}

#[test]
fn tower_embeddings_are_homomorphic_and_compatible() {
    let mut tower = Tower::new(2).unwrap();
    for k in [1u16, 2, 6, 12, 18] {
        tower.field(k).unwrap();
    }
    let f2 = tower.get(1).unwrap();
    let f4 = tower.get(2).unwrap();
    let f64f = tower.get(6).unwrap();

    // embed(1) = 1
    let m26 = tower.map(2, 6).unwrap();
    assert!(m26.embed(&f4.one()).unwrap().is_one());
    // embed(ω) satisfies t² + t + 1 = 0 in F_64
    let omega = f4.gen();
    let img = m26.embed(&omega).unwrap();
    let val = &(&img * &img) + &(&img + &f64f.one());
    assert!(val.is_zero());

    // composition equals the direct map on the chain F_2 ⊂ F_4 ⊂ F_64
    let m12 = tower.map(1, 2).unwrap();
    let m16 = tower.map(1, 6).unwrap();
    for e in f2.iter() {
        let via = m26.embed(&m12.embed(&e).unwrap()).unwrap();
        assert_eq!(via, m16.embed(&e).unwrap());
    }

    // homomorphism on random pairs, and Frobenius commutes with embed
    let mut rng = StdRng::seed_from_u64(99);
    for _ in 0..2000 {
        let a = f4.element(rng.gen_range(0..4));
        let b = f4.element(rng.gen_range(0..4));
        assert_eq!(
            m26.embed(&(&a + &b)).unwrap(),
            &m26.embed(&a).unwrap() + &m26.embed(&b).unwrap()
        );
        assert_eq!(
            m26.embed(&(&a * &b)).unwrap(),
            &m26.embed(&a).unwrap() * &m26.embed(&b).unwrap()
        );
        assert_eq!(
            m26.embed(&a.pow(2)).unwrap(),
            m26.embed(&a).unwrap().pow(2)
        );
    }

    // preimage round-trip and subfield membership
    for e in f4.iter() {
        let up = m26.embed(&e).unwrap();
        assert_eq!(m26.preimage(&up), Some(e));
    }
    let outside = f64f.gen();
    assert!(m26.preimage(&outside).is_none());
}

#[test]
fn additive_solver_matches_exhaustive_scan() {
    let f4 = f(2, 2);
    let omega = f4.gen();
    let omega2 = &omega * &omega;
    // x² + x = 1 over F_4: {ω, ω²}
    let mut expect = vec![omega.clone(), omega2.clone()];
    expect.sort();
    assert_eq!(solve_additive(2, &f4.one()).unwrap(), expect);
    // x² + x = 0 over F_4: {0, 1}
    assert_eq!(
        solve_additive(2, &f4.zero()).unwrap(),
        vec![f4.zero(), f4.one()]
    );
    // kernel in F_{q²} has exactly q elements, and contains 0
    for (p, q) in [(2u64, 2u64), (3, 3)] {
        let fq2 = f(p, 2);
        let sols = solve_additive(q, &fq2.zero()).unwrap();
        assert_eq!(sols.len(), q as usize);
        assert!(sols.contains(&fq2.zero()));
    }
    // cross-check against a scan on F_9
    let f9 = f(3, 2);
    for c in f9.iter() {
        let fast = solve_additive(3, &c).unwrap();
        let slow: Vec<Element> = f9
            .iter()
            .filter(|x| (&x.pow(3) + x) == c)
            .collect();
        assert_eq!(fast, slow);
    }
}

#[test]
fn roots_of_unity_counts_and_values() {
    let f4 = f(2, 2);
    assert_eq!(roots_of_unity(1, f4), vec![f4.one()]);
    // q=2: the (q+1)-th roots in F_4 are all of F_4*
    let cubes = roots_of_unity(3, f4);
    assert_eq!(cubes.len(), 3);
    for z in &cubes {
        assert!(z.pow(3).is_one());
    }
    // q=2: n = q³+1 = 9 in F_64 gives exactly 9 (9 | 63)
    let f64f = f(2, 6);
    let nine = roots_of_unity(9, f64f);
    assert_eq!(nine.len(), 9);
    for z in &nine {
        assert!(z.pow(9).is_one());
    }
    // scan oracle
    let scan: Vec<Element> = f64f.iter().filter(|e| !e.is_zero() && e.pow(9).is_one()).collect();
    assert_eq!(nine, scan);
}

#[test]
fn univariate_roots_with_multiplicity() {
    let f4 = f(2, 2);
    // x² + x over F_4 → {(0,1), (1,1)}
    let p = UPoly::new(f4, vec![f4.zero(), f4.one(), f4.one()]);
    let roots = p.roots();
    assert_eq!(
        roots,
        vec![(f4.zero(), 1), (f4.one(), 1)]
    );
    // (x - c)³ → {(c, 3)}
    let c = f4.gen();
    let lin = UPoly::x_minus(&c);
    let cubed = lin.mul(&lin).mul(&lin);
    assert_eq!(cubed.roots(), vec![(c.clone(), 3)]);
    // irreducible quadratic over F_2: no roots there, two in F_4
    let f2 = f(2, 1);
    let q2 = UPoly::new(f2, vec![f2.one(), f2.one(), f2.one()]);
    assert!(q2.roots().is_empty());
    let mut tower = Tower::new(2).unwrap();
    tower.field(1).unwrap();
    tower.field(2).unwrap();
    let lift = q2.lift(tower.map(1, 2).unwrap());
    assert_eq!(lift.roots().len(), 2);
}

#[test]
fn root_extraction_above_the_scan_bound() {
    // F_{3^12} has 531441 elements, above the scan bound, so this
    // exercises the gcd/splitting path.
    let big = f(3, 12);
    assert!(big.size() > super::upoly::SCAN_BOUND);
    let a = big.element(12345);
    let b = big.element(67890);
    let pa = UPoly::x_minus(&a);
    let pb = UPoly::x_minus(&b);
    let prod = pa.mul(&pb).mul(&pb);
    let mut expect = vec![(a, 1), (b, 2)];
    expect.sort();
    let mut got = prod.roots();
    got.sort();
    assert_eq!(got, expect);
}

#[test]
fn factorization_multiplies_back_and_is_deterministic() {
    let f9 = f(3, 2);
    let mut rng = StdRng::seed_from_u64(0xfac);
    for _ in 0..200 {
        let deg = rng.gen_range(1..9usize);
        let mut coeffs: Vec<Element> =
            (0..=deg).map(|_| f9.element(rng.gen_range(0..9))).collect();
        if coeffs[deg].is_zero() {
            coeffs[deg] = f9.one();
        }
        let p = UPoly::new(f9, coeffs);
        let factors = p.factor();
        let mut prod = UPoly::constant(f9.one());
        for (g, m) in &factors {
            assert!(g.lead().unwrap().is_one());
            for _ in 0..*m {
                prod = prod.mul(g);
            }
        }
        assert_eq!(prod, p.monic());
        assert_eq!(p.factor(), factors);
    }
}

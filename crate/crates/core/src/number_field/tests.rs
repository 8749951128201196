use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::error::Error;
use crate::rational_core::rational::{rat, ratio};
use crate::rational_core::RationalPoly;
use crate::testing::*;

fn random_elt(t: &FieldTower, rng: &mut ChaCha8Rng) -> FieldElement {
    let n = t.l().degree();
    let c: Vec<_> = (0..n).map(|_| ratio(rng.gen_range(-9..=9), rng.gen_range(1..=4))).collect();
    t.l().element(RationalPoly::new(c))
}

#[test]
fn tower_shapes() {
    let t = sqrt2();
    assert_eq!((t.e(), t.f()), (2, 1));
    assert_eq!(t.l().real_embeddings(), 2);
    let t = gaussian();
    assert_eq!((t.e(), t.f()), (2, 1));
    assert_eq!(t.l().real_embeddings(), 0);
    let t = zeta5();
    assert_eq!((t.e(), t.f()), (2, 2));
    let t = quartic();
    assert_eq!((t.e(), t.f()), (2, 2));
}

#[test]
fn quartic_fibers() {
    let t = quartic();
    // k embeddings: -√2 then √2; l: -2^{1/4}, 2^{1/4}, then ±i 2^{1/4}
    let k_roots: Vec<f64> = (0..2).map(|j| t.k().embeddings().lo[j].re_f64()).collect();
    assert!(k_roots[0] < 0.0 && k_roots[1] > 0.0);
    assert_eq!(t.fiber_map(), &[1, 1, 0, 0]);
}

#[test]
fn fibers_are_well_separated() {
    for t in [sqrt2(), gaussian(), zeta5(), quartic()] {
        let p = t.precision_bits();
        let bound = 2f64.powi(-(p as i32) / 4);
        let values: Vec<_> = t
            .l()
            .embeddings()
            .lo
            .iter()
            .map(|r| crate::rational_core::mp::eval_rational(t.phi_in_theta().coeffs(), &r.value, p))
            .collect();
        for i in 0..values.len() {
            for j in 0..values.len() {
                let d = values[i].sub(&values[j], p).abs_f64(p);
                if t.fiber_map()[i] == t.fiber_map()[j] {
                    assert!(d < bound);
                } else {
                    assert!(d > 10.0 * bound);
                }
            }
        }
    }
}

#[test]
fn rejects_bad_towers() {
    let bad_gen = build_tower(poly(&[-2, 0, 1]), poly(&[-2, 0, 0, 0, 1]), poly(&[0, 1]), vec![poly(&[1]), poly(&[0, 1])], 128);
    assert_eq!(bad_gen.unwrap_err(), Error::GeneratorEmbedding);
    let half = RationalPoly::new(vec![rat(0), ratio(1, 2)]);
    let bad_psi = build_tower(poly(&[-2, 0, 1]), poly(&[-2, 0, 0, 0, 1]), poly(&[0, 0, 1]), vec![poly(&[1]), half], 128);
    assert_eq!(bad_psi.unwrap_err(), Error::NonIntegralBasis);
    let repeated = build_tower(poly(&[0, 1]), poly(&[1, 2, 1]), poly(&[]), vec![poly(&[1])], 128);
    assert_eq!(repeated.unwrap_err(), Error::NotSquarefree);
}

#[test]
fn arithmetic_examples() {
    let t = sqrt2();
    let l = t.l();
    assert!(l.mul(&l_elt(&t, &[1, 1]), &l_elt(&t, &[-1, 1])).unwrap().is_one());
    let theta = l.generator();
    assert_eq!(l.inv(&theta).unwrap(), l.element(RationalPoly::new(vec![rat(0), ratio(1, 2)])));
    let a = l_elt(&t, &[3, 5]);
    assert_eq!(field_arithmetic(&t, &a, &l.one(), ArithOp::Mul).unwrap(), a);
    assert_eq!(field_arithmetic(&t, &a, &t.k().one(), ArithOp::Add).unwrap_err(), Error::CrossField);
    assert_eq!(l.inv(&l.zero()).unwrap_err(), Error::DivisionByZero);
}

#[test]
fn reducible_modulus_gives_zero_divisor() {
    let f = crate::number_field::NumberField::new(FieldTag::L, poly(&[-1, 0, 1]), 64).unwrap();
    assert_eq!(f.inv(&f.element(poly(&[1, 1]))).unwrap_err(), Error::ZeroDivisor);
}

#[test]
fn embedding_k_in_l() {
    let t = quartic();
    assert!(t.embed_k_in_l(&t.k().one()).unwrap().is_one());
    assert_eq!(t.embed_k_in_l(&t.k().generator()).unwrap(), l_elt(&t, &[0, 0, 1]));
    assert_eq!(t.embed_k_in_l(&k_elt(&t, &[1, 1])).unwrap(), l_elt(&t, &[1, 0, 1]));
}

#[test]
fn multiplication_matrices_and_char_polys() {
    let t = sqrt2();
    let l = t.l();
    let m = l.mult_matrix(&l.generator());
    assert_eq!(m, vec![vec![rat(0), rat(2)], vec![rat(1), rat(0)]]);
    assert_eq!(l.mult_matrix(&l.zero()), vec![vec![rat(0); 2]; 2]);
    assert_eq!(l.char_poly(&l.generator()), poly(&[-2, 0, 1]));
    assert_eq!(l.char_poly(&l_elt(&t, &[3, 1])), poly(&[7, -6, 1]));
    let q = quartic();
    assert_eq!(q.l().char_poly(&q.l().one()), poly(&[-1, 1]).pow(4));
}

#[test]
fn relative_norm_examples() {
    let t = sqrt2();
    assert_eq!(t.relative_norm(&l_elt(&t, &[3, 1])).unwrap(), t.k().from_int(7));
    let g = gaussian();
    assert_eq!(g.relative_norm(&l_elt(&g, &[1, 1])).unwrap(), g.k().from_int(2));
    let q = quartic();
    let a = k_elt(&q, &[3, -1]);
    let expect = q.k().pow(&a, 2).unwrap();
    assert_eq!(q.relative_norm(&q.embed_k_in_l(&a).unwrap()).unwrap(), expect);
    // 1 + 2^{1/4} has relative norm 1 - √2
    assert_eq!(q.relative_norm(&l_elt(&q, &[1, 1])).unwrap(), k_elt(&q, &[1, -1]));
    assert!(t.relative_norm(&t.l().zero()).unwrap().is_zero());
}

#[test]
fn norm_is_multiplicative_and_transitive() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for t in [sqrt2(), gaussian(), zeta5(), quartic()] {
        for _ in 0..200 {
            let a = random_elt(&t, &mut rng);
            let b = random_elt(&t, &mut rng);
            let ab = t.l().mul(&a, &b).unwrap();
            let lhs = t.relative_norm(&ab).unwrap();
            let rhs = t.k().mul(&t.relative_norm(&a).unwrap(), &t.relative_norm(&b).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
        for _ in 0..20 {
            let a = random_elt(&t, &mut rng);
            let down = t.relative_norm(&a).unwrap();
            let cp = t.k().char_poly(&down);
            let mut nk = cp.coeff(0);
            if t.f() % 2 == 1 {
                nk = -nk;
            }
            assert_eq!(t.l().norm(&a), nk);
        }
    }
}

#[test]
fn char_poly_annihilates_and_matches_roots() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for t in [sqrt2(), gaussian(), zeta5(), quartic()] {
        let l = t.l();
        for _ in 0..20 {
            let a = random_elt(&t, &mut rng);
            let cp = l.char_poly(&a);
            assert!(l.eval_poly(&cp, &a).unwrap().is_zero());
            if a.is_zero() {
                continue;
            }
            let (_, ints) = cp.squarefree_part().primitive_part().unwrap();
            let roots = crate::rational_core::poly_complex_roots(&ints, 128).unwrap();
            let sf = cp.squarefree_part();
            let mult = (l.degree() / sf.degree().unwrap()) as f64;
            let log_prod: f64 = roots.iter().map(|r| r.re_f64().hypot(r.im_f64()).ln()).sum::<f64>() * mult;
            let n = l.norm(&a);
            let log_norm = crate::rational_core::mp::to_f64(&crate::rational_core::mp::ln(
                &crate::rational_core::mp::from_rational(&n.abs(), 128),
                128,
            ));
            assert!((log_prod - log_norm).abs() < 1e-9, "{log_prod} vs {log_norm}");
            assert!(!n.is_zero());
        }
    }
}

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::rational_core::RationalPoly;
use crate::testing::*;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() < tol
}

#[test]
fn place_counts() {
    let t = sqrt2();
    let pl = archimedean_places(&t, FieldTag::L);
    assert_eq!(pl.len(), 2);
    assert!(pl.iter().all(|w| w.is_real && w.d_w == 1));
    let g = gaussian();
    let pl = archimedean_places(&g, FieldTag::L);
    assert_eq!(pl.len(), 1);
    assert_eq!(pl[0].d_w, 2);
    let pk = archimedean_places(&g, FieldTag::K);
    assert_eq!(pk.len(), 1);
    assert_eq!(pk[0].d_w, 1);
    for t in [sqrt2(), gaussian(), zeta5(), quartic()] {
        for tag in [FieldTag::K, FieldTag::L] {
            let sum: usize = archimedean_places(&t, tag).iter().map(|w| w.d_w).sum();
            assert_eq!(sum, t.field(tag).degree());
        }
    }
}

#[test]
fn fibers() {
    let f = place_fibers(&sqrt2());
    assert_eq!(f.len(), 1);
    assert_eq!(f[0].members.len(), 2);
    let f = place_fibers(&gaussian());
    assert_eq!(f.len(), 1);
    assert_eq!(f[0].members.len(), 1);
    let q = quartic();
    let f = place_fibers(&q);
    // k places in order -√2, √2
    assert_eq!(f.len(), 2);
    assert_eq!(f[0].members.len(), 1);
    assert!(!f[0].members[0].is_real);
    assert_eq!(f[1].members.len(), 2);
    assert!(f[1].members.iter().all(|w| w.is_real));
    let f = place_fibers(&zeta5());
    assert_eq!(f.len(), 2);
    assert!(f.iter().all(|v| v.members.len() == 1));
}

#[test]
fn log_abs_examples() {
    let t = sqrt2();
    let pl = archimedean_places(&t, FieldTag::L);
    let a = l_elt(&t, &[3, 1]);
    // places ordered by the real root: -√2 first
    assert!(close(log_abs(&t, &a, &pl[1]).unwrap(), 0.5 * (3.0 + 2f64.sqrt()).ln(), 1e-12));
    assert!(close(log_abs(&t, &a, &pl[1]).unwrap(), 0.74241, 1e-5));
    assert_eq!(log_abs(&t, &t.l().one(), &pl[0]).unwrap(), 0.0);
    assert_eq!(log_abs(&t, &t.l().zero(), &pl[0]).unwrap_err(), Error::LogOfZero);
    let g = gaussian();
    let w = archimedean_places(&g, FieldTag::L)[0];
    assert!(close(log_abs(&g, &l_elt(&g, &[1, 1]), &w).unwrap(), 0.346574, 1e-6));
}

#[test]
fn log_vectors() {
    let t = sqrt2();
    let v = archimedean_log_vector(&t, &l_elt(&t, &[1, 1])).unwrap();
    assert!(close(v[0], -0.440687, 1e-6) && close(v[1], 0.440687, 1e-6));
    let v = archimedean_log_vector(&t, &l_elt(&t, &[13, 9])).unwrap();
    assert!(close(v[0], -0.65085, 1e-4) && close(v[1], 1.62379, 1e-5));
    assert!(close(v[0] + v[1], 0.5 * 7f64.ln(), 1e-12));
    assert_eq!(archimedean_log_vector(&t, &t.l().one()).unwrap(), vec![0.0, 0.0]);
}

#[test]
fn height_examples() {
    let t = sqrt2();
    let h = |c: &[i64]| weil_height(&t, &l_elt(&t, c)).unwrap();
    assert!(close(h(&[2]), 2f64.ln(), 1e-15));
    assert_eq!(h(&[1]), 0.0);
    assert_eq!(h(&[-1]), 0.0);
    assert!(close(h(&[1, 1]), 0.4406867935097715, 1e-15));
    let half = t.l().element(RationalPoly::new(vec![crate::rational_core::rational::ratio(1, 2)]));
    assert!(close(weil_height(&t, &half).unwrap(), 2f64.ln(), 1e-15));
    assert!(close(h(&[13, 9]), 1.62379, 1e-5));
    // roots of unity have height exactly zero
    let z = zeta5();
    for j in 0..5 {
        let zeta = z.l().pow(&z.l().generator(), j).unwrap();
        assert_eq!(weil_height(&z, &zeta).unwrap(), 0.0);
    }
    let g = gaussian();
    assert_eq!(weil_height(&g, &g.l().generator()).unwrap(), 0.0);
}

#[test]
fn rational_heights_match_classical_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let t = sqrt2();
    for _ in 0..50 {
        let p: i64 = rng.gen_range(-1000..=1000);
        let q: i64 = rng.gen_range(1..=1000);
        if p == 0 {
            continue;
        }
        let r = BigRational::new(BigInt::from(p), BigInt::from(q));
        let a = t.l().from_rational(r.clone());
        let expect = (r.numer().abs().max(r.denom().clone())).to_string().parse::<f64>().unwrap().ln();
        assert!(close(weil_height(&t, &a).unwrap(), expect, 1e-12));
        let b = t.k().from_rational(r);
        assert!(close(weil_height(&t, &b).unwrap(), expect, 1e-12));
    }
}

fn random_elt(t: &crate::number_field::FieldTower, rng: &mut ChaCha8Rng) -> FieldElement {
    let n = t.l().degree();
    loop {
        let c: Vec<i64> = (0..n).map(|_| rng.gen_range(-20..=20)).collect();
        let a = l_elt(t, &c);
        if !a.is_zero() {
            return a;
        }
    }
}

#[test]
fn product_formula_for_integers_and_units() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for t in [sqrt2(), gaussian(), zeta5(), quartic()] {
        for _ in 0..30 {
            let a = random_elt(&t, &mut rng);
            let s: f64 = archimedean_log_vector(&t, &a).unwrap().iter().sum();
            let n: f64 = t.l().norm(&a).abs().to_string().parse().unwrap();
            assert!(close(s, n.ln() / t.l().degree() as f64, 1e-9));
        }
    }
    let t = quartic();
    for u in [&[1, 1][..], &[1, 0, 1]] {
        let s: f64 = archimedean_log_vector(&t, &l_elt(&t, u)).unwrap().iter().sum();
        assert!(s.abs() < 1e-9);
    }
}

#[test]
fn height_symmetries() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for t in [sqrt2(), gaussian(), zeta5(), quartic()] {
        let l = t.l();
        for _ in 0..25 {
            let a = random_elt(&t, &mut rng);
            let b = random_elt(&t, &mut rng);
            let ha = weil_height(&t, &a).unwrap();
            let hinv = weil_height(&t, &l.inv(&a).unwrap()).unwrap();
            assert!(close(ha, hinv, 1e-9));
            let hneg = weil_height(&t, &l.neg(&a)).unwrap();
            assert_eq!(ha, hneg);
            let hab = weil_height(&t, &l.mul(&a, &b).unwrap()).unwrap();
            assert!(hab <= ha + weil_height(&t, &b).unwrap() + 1e-9);
        }
    }
}

#[test]
fn height_agrees_with_place_sum_for_integers() {
    // for algebraic integers the finite places contribute nothing
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let t = sqrt2();
    for _ in 0..100 {
        let a = random_elt(&t, &mut rng);
        let direct: f64 = archimedean_log_vector(&t, &a).unwrap().iter().map(|x| x.max(0.0)).sum();
        assert!(close(weil_height(&t, &a).unwrap(), direct, 1e-9));
    }
}

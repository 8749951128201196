use std::path::PathBuf;
use std::sync::OnceLock;

use num_bigint::BigInt;
use proptest::prelude::*;

use normform::cli::{ElementSpec, Instance, ProblemFile};
use normform::module_order::RelativeUnitSystem;
use normform::norm_form::norm_form_poly;
use normform::number_field::FieldElement;
use normform::places_heights::{archimedean_log_vector, weil_height};
use normform::rational_core::RationalPoly;
use normform::reduction::{balance_vector, reduce_solution, TOLERANCE};

struct Fixture {
    inst: Instance,
    sys: RelativeUnitSystem,
}

fn load(name: &str) -> Fixture {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "problems", name].iter().collect();
    let inst = ProblemFile::load(&path).unwrap().build(None).unwrap();
    let sys = inst.unit_system().unwrap();
    Fixture { inst, sys }
}

fn pell() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(|| load("pell.json"))
}

fn quartic() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(|| load("quartic_root2.json"))
}

fn zeta5() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(|| load("cyclotomic5.json"))
}

fn l_poly(f: &Fixture, c: &[i64]) -> FieldElement {
    f.inst.tower.l().element(RationalPoly::from_ints(c))
}

fn expr(f: &Fixture, s: &str) -> FieldElement {
    f.inst.l_element(&ElementSpec::Expr(s.into())).unwrap()
}

fn coeffs(n: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-20i64..=20, n).prop_filter("nonzero", |v| v.iter().any(|&x| x != 0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn division_inverts_multiplication(a in coeffs(4), b in coeffs(4)) {
        let f = quartic();
        let l = f.inst.tower.l();
        let (x, y) = (l_poly(f, &a), l_poly(f, &b));
        prop_assert_eq!(l.div(&l.mul(&x, &y).unwrap(), &y).unwrap(), x);
    }

    #[test]
    fn relative_norm_is_multiplicative(a in coeffs(4), b in coeffs(4)) {
        let f = quartic();
        let (t, k) = (&f.inst.tower, f.inst.tower.k());
        let (x, y) = (l_poly(f, &a), l_poly(f, &b));
        let lhs = t.relative_norm(&t.l().mul(&x, &y).unwrap()).unwrap();
        let rhs = k.mul(&t.relative_norm(&x).unwrap(), &t.relative_norm(&y).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn norm_form_agrees_with_relative_norm(nu in coeffs(4)) {
        let f = quartic();
        let m = &f.inst.module;
        let form = norm_form_poly(m).unwrap();
        let t = &f.inst.tower;
        let k = t.k();
        let ints: Vec<BigInt> = nu.iter().map(|&x| BigInt::from(x)).collect();
        // ν_i = ν_{i,0} + ν_{i,1} φ
        let x: Vec<FieldElement> = nu.chunks(2).map(|c| k.element(RationalPoly::from_ints(c))).collect();
        prop_assert_eq!(form.evaluate(k, &x).unwrap(), m.relative_norm(&m.element(&ints)).unwrap());
    }

    #[test]
    fn height_symmetries(a in coeffs(4), n in 1i64..4) {
        let f = zeta5();
        let (t, l) = (&f.inst.tower, f.inst.tower.l());
        let x = l_poly(f, &a);
        let h = weil_height(t, &x).unwrap();
        prop_assert!(h >= -1e-12);
        prop_assert!((weil_height(t, &l.inv(&x).unwrap()).unwrap() - h).abs() < 1e-9);
        prop_assert!((weil_height(t, &l.pow(&x, n).unwrap()).unwrap() - n as f64 * h).abs() < 1e-9 * (1.0 + h * n as f64));
        // multiplying by a root of unity leaves the height alone
        let zeta = l.neg(&l.generator());
        prop_assert!((weil_height(t, &l.mul(&zeta, &x).unwrap()).unwrap() - h).abs() < 1e-9);
    }

    #[test]
    fn balancing_vectors_sum_to_zero_on_fibers(a in coeffs(4)) {
        let f = quartic();
        let z = balance_vector(&l_poly(f, &a), &f.sys).unwrap();
        prop_assert!(z.is_balanced());
        prop_assert_eq!(z.fiber_sums.len(), f.sys.fibers().len());
    }

    #[test]
    fn pell_reduction_contract(n in -12i64..=12, pick in 0usize..4) {
        let f = pell();
        let l = f.inst.tower.l();
        let base = expr(f, ["3+θ", "3-θ", "1+2θ", "5+4θ"][pick]);
        let mu = l.mul(&l.pow(&f.sys.epsilons()[0], n).unwrap(), &base).unwrap();
        let beta = f.inst.beta().unwrap();
        let r = reduce_solution(&mu, &beta, &f.sys).unwrap();
        prop_assert_eq!(l.mul(&r.gamma, &mu).unwrap(), r.mu_out.clone());
        prop_assert!(r.height_out <= r.bound + TOLERANCE);
        for (u, m) in r.u.iter().zip(&r.m) {
            prop_assert!((*m as f64 - u).abs() <= 0.5 + 1e-12);
        }
        let pow = f.sys.unit_power(&r.m).unwrap();
        prop_assert!(r.gamma == pow || r.gamma == l.neg(&pow));
        let again = reduce_solution(&r.mu_out, &beta, &f.sys).unwrap();
        prop_assert!((again.height_out - r.height_out).abs() < 1e-9);
    }

    #[test]
    fn quartic_norm_bookkeeping(a in coeffs(4)) {
        let f = quartic();
        let t = &f.inst.tower;
        let m = &f.inst.module;
        let ints: Vec<BigInt> = a.iter().map(|&x| BigInt::from(x)).collect();
        let mu = m.element(&ints);
        let beta = m.relative_norm(&mu).unwrap();
        let r = reduce_solution(&mu, &beta, &f.sys).unwrap();
        prop_assert!(r.height_out <= r.bound + TOLERANCE);
        let logs = archimedean_log_vector(t, &r.mu_out).unwrap();
        let logs_beta = archimedean_log_vector(t, &beta).unwrap();
        for fb in f.sys.fibers() {
            let s: f64 = fb.members.iter().map(|w| logs[w.index]).sum();
            prop_assert!((t.e() as f64 * s - logs_beta[fb.v.index]).abs() < 1e-9 * (1.0 + logs_beta[fb.v.index].abs()));
        }
    }
}

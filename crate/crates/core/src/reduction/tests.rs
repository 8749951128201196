use std::sync::Arc;

use super::*;
use crate::module_order::{build_module, relative_units, RelativeUnitSystem};
use crate::number_field::FieldTower;
use crate::places_heights::archimedean_places;
use crate::rational_core::rational::ratio;
use crate::rational_core::RationalPoly;
use crate::testing::*;

const S2: f64 = std::f64::consts::SQRT_2;

fn system(t: FieldTower, omega: &[&[i64]], units_l: &[&[i64]], units_k: &[FieldElement]) -> RelativeUnitSystem {
    let t = Arc::new(t);
    let om = omega.iter().map(|c| l_elt(&t, c)).collect();
    let m = build_module(t.clone(), om).unwrap();
    let ul: Vec<_> = units_l.iter().map(|c| l_elt(&t, c)).collect();
    relative_units(&m, &ul, units_k).unwrap()
}

fn pell() -> RelativeUnitSystem {
    system(sqrt2(), &[&[1], &[0, 1]], &[&[1, 1]], &[])
}

/// Half-logs of the two real conjugates of `a + b√2`, listed in place order.
fn pell_logs(sys: &RelativeUnitSystem, a: f64, b: f64) -> Vec<f64> {
    archimedean_places(sys.tower(), FieldTag::L)
        .iter()
        .map(|w| {
            let (root, _) = sys.tower().l().embed_f64(&sys.tower().l().generator(), w.embedding);
            let sign = root.signum();
            0.5 * (a + sign * b * S2).abs().ln()
        })
        .collect()
}

#[test]
fn balancing_pell_elements() {
    let sys = pell();
    let t = sys.tower();
    let z = balance_vector(&l_elt(t, &[13, 9]), &sys).unwrap();
    let logs = pell_logs(&sys, 13.0, 9.0);
    let mean = (logs[0] + logs[1]) / 2.0;
    for (zi, li) in z.coords.iter().zip(&logs) {
        assert!((zi - (mean - li)).abs() < 1e-12);
    }
    assert!((z.coords[0].abs() - 1.13732).abs() < 1e-5);
    assert!(z.is_balanced());
    let z = balance_vector(&l_elt(t, &[3, 1]), &sys).unwrap();
    assert!((z.coords[0].abs() - 0.25593).abs() < 1e-5);
    let z = balance_vector(&t.l().one(), &sys).unwrap();
    assert!(z.coords.iter().all(|c| c.abs() < 1e-15));
    assert_eq!(balance_vector(&t.l().zero(), &sys).unwrap_err(), Error::LogOfZero);
}

#[test]
fn rounding_to_units() {
    let sys = pell();
    let t = sys.tower();
    let z = balance_vector(&l_elt(t, &[13, 9]), &sys).unwrap();
    let (gamma, u, m) = round_to_unit(&z, &sys).unwrap();
    assert!((u[0] - z.coords[0] / sys.log_matrix()[0][0]).abs() < 1e-12);
    assert!((u[0] + 2.58078).abs() < 1e-4);
    assert_eq!(m, vec![-3]);
    assert_eq!(gamma, l_elt(t, &[-7, 5]));
    let d = discrepancy(&sys, &gamma, &z).unwrap();
    assert!((d - 0.36948).abs() < 1e-4 && d <= sys.height_sum());

    let zero = BalancedSubspaceVector::new(vec![0.0, 0.0], sys.fibers());
    let (gamma, _, m) = round_to_unit(&zero, &sys).unwrap();
    assert_eq!((gamma, m), (t.l().one(), vec![0]));

    let col = BalancedSubspaceVector::new(sys.log_matrix().iter().map(|r| r[0]).collect(), sys.fibers());
    let (gamma, u, m) = round_to_unit(&col, &sys).unwrap();
    assert!((u[0] - 1.0).abs() < 1e-12);
    assert_eq!((gamma.clone(), m), (l_elt(t, &[1, 1]), vec![1]));
    assert!(discrepancy(&sys, &gamma, &col).unwrap() < 1e-12);

    let off = BalancedSubspaceVector::new(vec![1.0, 1.0], sys.fibers());
    assert_eq!(round_to_unit(&off, &sys).unwrap_err(), Error::NotInSpan);
}

#[test]
fn ties_round_toward_zero() {
    assert_eq!(round_half_toward_zero(2.5), 2);
    assert_eq!(round_half_toward_zero(-2.5), -2);
    assert_eq!(round_half_toward_zero(-2.51), -3);
    assert_eq!(round_half_toward_zero(0.49), 0);
    assert_eq!(round_half_toward_zero(-0.5), 0);
}

#[test]
fn pell_reduction_trace() {
    let sys = pell();
    let t = sys.tower();
    let beta = k_elt(t, &[7]);
    let half_ln7 = 0.5 * 7f64.ln();
    // h(1+√2) = ½ log(1+√2)
    let bound = 0.25 * (1.0 + S2).ln() + half_ln7;

    let r = reduce_solution(&l_elt(t, &[13, 9]), &beta, &sys).unwrap();
    assert_eq!(r.gamma, l_elt(t, &[-7, 5]));
    assert_eq!(r.mu_out, l_elt(t, &[-1, 2]));
    assert_eq!(r.m, vec![-3]);
    assert!(!r.sign_flipped);
    assert_eq!(r.zeta, k_elt(t, &[1]));
    assert_eq!(r.zeta_prime, k_elt(t, &[-1]));
    assert!((r.height_out - half_ln7).abs() < 1e-9);
    assert!((r.bound - bound).abs() < 1e-9);
    assert!((r.bound - 1.19329847127).abs() < 1e-9);
    assert!(r.bound_satisfied);

    let r = reduce_solution(&l_elt(t, &[3, 1]), &beta, &sys).unwrap();
    assert_eq!(r.mu_out, l_elt(t, &[-1, 2]));
    assert_eq!(r.m, vec![-1]);
    assert!((r.u[0] + 0.58075).abs() < 1e-4);

    let r = reduce_solution(&l_elt(t, &[1, 1]), &k_elt(t, &[1]), &sys).unwrap();
    assert_eq!(r.m, vec![-1]);
    assert_eq!(r.mu_out, t.l().one());
    assert!(r.height_out.abs() < 1e-12);
    assert!((r.bound - 0.25 * (1.0 + S2).ln()).abs() < 1e-9);
}

#[test]
fn sign_normalization() {
    let sys = pell();
    let t = sys.tower();
    let r = reduce_solution(&l_elt(t, &[1, -2]), &k_elt(t, &[7]), &sys).unwrap();
    assert!(r.sign_flipped);
    assert_eq!(r.mu_out, l_elt(t, &[-1, 2]));
    assert_eq!(t.l().mul(&r.gamma, &r.mu_in).unwrap(), r.mu_out);
}

#[test]
fn reduction_errors() {
    let sys = pell();
    let t = sys.tower();
    let seven = k_elt(t, &[7]);
    assert_eq!(reduce_solution(&l_elt(t, &[1, 1]), &seven, &sys).unwrap_err(), Error::NotASolution);
    let half = t.l().element(RationalPoly::new(vec![ratio(3, 2), ratio(1, 2)]));
    assert_eq!(reduce_solution(&half, &seven, &sys).unwrap_err(), Error::OutsideModule);
    assert_eq!(reduce_solution(&t.l().zero(), &seven, &sys).unwrap_err(), Error::NotASolution);
    assert_eq!(reduce_solution(&l_elt(t, &[3, 1]), &k_elt(t, &[0]), &sys).unwrap_err().exit_code(), 2);
    assert_eq!(reduce_solution(&l_elt(t, &[3, 1]), &l_elt(t, &[7]), &sys).unwrap_err(), Error::CrossField);
}

#[test]
fn inflated_solutions_respect_the_bound() {
    let sys = pell();
    let t = sys.tower();
    let l = t.l();
    let beta = k_elt(t, &[7]);
    let eps = l_elt(t, &[1, 1]);
    for base in [l_elt(t, &[3, 1]), l_elt(t, &[3, -1])] {
        for n in -8..=8 {
            let mu = l.mul(&l.pow(&eps, n).unwrap(), &base).unwrap();
            let r = reduce_solution(&mu, &beta, &sys).unwrap();
            assert!(r.height_out <= r.bound + TOLERANCE);
            let again = reduce_solution(&r.mu_out, &beta, &sys).unwrap();
            assert!((again.height_out - r.height_out).abs() < 1e-9);
            // γ is an exact ε-power up to sign
            let pow = sys.unit_power(&r.m).unwrap();
            assert!(r.gamma == pow || r.gamma == l.neg(&pow));
        }
    }
}

#[test]
fn rank_zero_identities() {
    let g = system(gaussian(), &[&[1], &[0, 1]], &[], &[]);
    let t = g.tower();
    let id = cm_height_identity(&l_elt(t, &[1, 1]), &k_elt(t, &[2]), &g).unwrap();
    assert!(id.equal);
    assert!((id.h_mu - 0.5 * 2f64.ln()).abs() < 1e-9);
    let id = cm_height_identity(&l_elt(t, &[0, 1]), &k_elt(t, &[1]), &g).unwrap();
    assert!(id.equal && id.h_mu.abs() < 1e-12);
    let r = reduce_solution(&l_elt(t, &[1, 1]), &k_elt(t, &[2]), &g).unwrap();
    assert_eq!(r.mu_out, l_elt(t, &[1, 1]));
    assert!(r.cm_identity.unwrap().equal);

    let z = zeta5();
    let golden = z.k().element(RationalPoly::new(vec![ratio(1, 2), ratio(1, 2)]));
    let sys = system(z, &[&[1], &[0, 1]], &[&[1, 1]], &[golden]);
    let t = sys.tower();
    let beta = t.k().element(RationalPoly::new(vec![ratio(5, 2), ratio(-1, 2)]));
    let id = cm_height_identity(&l_elt(t, &[1, -1]), &beta, &sys).unwrap();
    assert!(id.equal);
    assert!((id.h_mu - 0.25 * 5f64.ln()).abs() < 1e-9);
    assert!((id.h_mu - 0.402359).abs() < 1e-6);
}

#[test]
fn norm_bookkeeping_per_place_of_k() {
    let q = quartic();
    let uk = k_elt(&q, &[1, 1]);
    let sys = system(q, &[&[1], &[0, 1]], &[&[1, 1], &[1, 0, 1]], &[uk]);
    let t = sys.tower();
    let mu = l_elt(t, &[1, 2, 0, 1]);
    let beta = sys.module().relative_norm(&mu).unwrap();
    let r = reduce_solution(&mu, &beta, &sys).unwrap();
    let logs_out = archimedean_log_vector(t, &r.mu_out).unwrap();
    let logs_beta = archimedean_log_vector(t, &beta).unwrap();
    for f in sys.fibers() {
        let s: f64 = f.members.iter().map(|w| logs_out[w.index]).sum();
        assert!((t.e() as f64 * s - logs_beta[f.v.index]).abs() < 1e-9);
    }
    assert!(r.height_out <= r.bound + TOLERANCE);
}

#[test]
fn randomized_inequalities() {
    let pell = pell();
    let s = rounding_trials(&pell, 200, 1).unwrap();
    assert_eq!((s.trials, s.failures), (200, 0));
    let s = balancing_trials(&pell, 100, 30, 2).unwrap();
    assert_eq!((s.trials, s.failures), (100, 0));
    let q = quartic();
    let uk = k_elt(&q, &[1, 1]);
    let sys = system(q, &[&[1], &[0, 1]], &[&[1, 1], &[1, 0, 1]], &[uk]);
    let s = rounding_trials(&sys, 100, 3).unwrap();
    assert_eq!(s.failures, 0);
    let s = balancing_trials(&sys, 50, 10, 4).unwrap();
    assert_eq!(s.failures, 0);
}

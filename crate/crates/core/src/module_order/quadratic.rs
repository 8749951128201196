//! Fundamental units of real quadratic fields by continued fractions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::number_field::{FieldElement, NumberField};
use crate::rational_core::RationalPoly;

/// Squarefree kernel `s` and cofactor `r` with `n = s r²` (`n > 0`).
fn squarefree_decompose(n: &BigInt) -> (BigInt, BigInt) {
    let mut s = BigInt::one();
    let mut r = BigInt::one();
    let mut m = n.clone();
    let mut p = BigInt::from(2);
    while &p * &p <= m {
        let mut e = 0u32;
        while (&m % &p).is_zero() {
            m /= &p;
            e += 1;
        }
        if e % 2 == 1 {
            s *= &p;
        }
        r *= p.pow(e / 2);
        p += 1;
    }
    (s * m, r)
}

/// The fundamental unit `ε > 1` (under the larger real embedding of the
/// generator) of the maximal order of a real quadratic field.
pub fn real_quadratic_fundamental_unit(field: &NumberField) -> Result<FieldElement> {
    if field.degree() != 2 || field.real_embeddings() != 2 {
        return Err(Error::input("fundamental unit search needs a real quadratic field"));
    }
    // θ² + bθ + c = 0, so (2θ + b)² = b² - 4c
    let f = field.minpoly();
    let (b, c) = (f.coeff(1), f.coeff(0));
    let disc = &b * &b - BigRational::from_integer(4.into()) * &c;
    let den = disc.denom().clone();
    let (d, r) = squarefree_decompose(&(disc.numer() * &den));
    // √d = (2θ + b) * den / r
    let two_theta_b = RationalPoly::new(vec![b.clone(), BigRational::from_integer(2.into())]);
    let sqrt_d = field.element(two_theta_b.scale(&BigRational::new(den, r)));

    let (x, y, half) = fundamental_solution(&d);
    let mut eps = field.add(&field.from_rational(BigRational::from_integer(x)), &field.scale(&sqrt_d, &BigRational::from_integer(y)))?;
    if half {
        eps = field.scale(&eps, &BigRational::new(1.into(), 2.into()));
    }
    let (v, _) = field.embed_f64(&eps, 1);
    if v.abs() < 1.0 {
        eps = field.inv(&eps)?;
    }
    let (v, _) = field.embed_f64(&eps, 1);
    if v < 0.0 {
        eps = field.neg(&eps);
    }
    if !field.is_unit(&eps) {
        return Err(Error::internal("continued fraction produced a non-unit"));
    }
    Ok(eps)
}

/// Least `(x, y)`, `y > 0`, with `(x + y√d)/2` (when `half`) or `x + y√d` a
/// unit of the maximal order of ℚ(√d).
fn fundamental_solution(d: &BigInt) -> (BigInt, BigInt, bool) {
    let one_mod_four = d.mod_floor(&BigInt::from(4)) == BigInt::one();
    // continued fraction of ω = (P + √d) / Q with ω = (1 + √d)/2 or √d
    let (mut pp, mut qq) = if one_mod_four { (BigInt::one(), BigInt::from(2)) } else { (BigInt::zero(), BigInt::one()) };
    let sd = d.sqrt();
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    loop {
        let a = (&pp + &sd).div_floor(&qq);
        let h2 = &a * &h1 + &h0;
        let k2 = &a * &k1 + &k0;
        (h0, h1) = (h1, h2);
        (k0, k1) = (k1, k2);
        // unit candidate h - k ω̄ with ω̄ the conjugate of ω
        let (x, y) = if one_mod_four {
            // h - k(1 - √d)/2 = (2h - k + k√d)/2
            (BigInt::from(2) * &h1 - &k1, k1.clone())
        } else {
            (h1.clone(), k1.clone())
        };
        let norm = &x * &x - d * &y * &y;
        let target = if one_mod_four { BigInt::from(4) } else { BigInt::one() };
        if norm.abs() == target {
            return (x, y, one_mod_four);
        }
        pp = &a * &qq - &pp;
        qq = (d - &pp * &pp) / &qq;
    }
}

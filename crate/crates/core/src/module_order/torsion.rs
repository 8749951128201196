//! Roots of unity in k and l.

use astro_float::{BigFloat, Sign};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::number_field::{FieldElement, FieldTag, FieldTower, NumberField};
use crate::rational_core::lll::lll_reduce;
use crate::rational_core::mp::{self, Cplx};
use crate::rational_core::{cyclotomic, poly_complex_roots, totient, RationalPoly};

/// Orders `n` of roots of unity that can occur in a field of degree `d`
/// (`φ(n) | d`), ascending.
pub fn possible_orders(d: usize) -> Vec<u64> {
    let d = d as u64;
    (1..=2 * d * d + 2).filter(|&n| d.is_multiple_of(totient(n))).collect()
}

/// Exact test for `x` being a root of unity.
pub fn is_torsion(field: &NumberField, x: &FieldElement) -> Result<bool> {
    if x.is_zero() {
        return Ok(false);
    }
    if !field.is_unit(x) {
        return Ok(false);
    }
    let orders = possible_orders(field.degree());
    let mut power = field.one();
    let mut k = 0u64;
    for n in orders {
        while k < n {
            power = field.mul(&power, x)?;
            k += 1;
        }
        if power.is_one() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// The group of roots of unity of k or l, ordered by argument under the
/// first embedding (so `1` comes first).
pub fn torsion_units(tower: &FieldTower, tag: FieldTag) -> Result<Vec<FieldElement>> {
    let field = tower.field(tag);
    let generator = if field.real_embeddings() > 0 {
        field.from_int(-1)
    } else {
        let mut found = None;
        for n in possible_orders(field.degree()).into_iter().rev().filter(|n| n % 2 == 0) {
            if let Some(z) = primitive_root_of_unity(field, n)? {
                found = Some(z);
                break;
            }
        }
        found.ok_or_else(|| Error::internal("no root of unity found in a totally complex field"))?
    };
    let mut group = vec![field.one()];
    let mut cur = generator.clone();
    while !cur.is_one() {
        group.push(cur.clone());
        cur = field.mul(&cur, &generator)?;
    }
    let angle = |z: &FieldElement| {
        let (re, im) = field.embed_f64(z, 0);
        let a = im.atan2(re);
        if a < -1e-12 {
            a + std::f64::consts::TAU
        } else {
            a.max(0.0)
        }
    };
    group.sort_by(|a, b| angle(a).total_cmp(&angle(b)));
    Ok(group)
}

/// A root of `Φ_n` in `field`, found as an integer relation between the
/// powers of the generator and `e^(2πi/n)` under the first embedding, then
/// checked exactly.
fn primitive_root_of_unity(field: &NumberField, n: u64) -> Result<Option<FieldElement>> {
    let d = field.degree();
    let phi_n = cyclotomic(n);
    if n <= 2 {
        let z = field.from_int(if n == 1 { 1 } else { -1 });
        return Ok(Some(z));
    }
    let (_, ints) = phi_n.primitive_part()?;
    let p = field.precision_bits();
    let hp = 2 * p;
    let omega = poly_complex_roots(&ints, hp)?
        .into_iter()
        .filter(|r| r.im_f64() > 0.0)
        .max_by(|a, b| a.re_f64().total_cmp(&b.re_f64()))
        .ok_or_else(|| Error::internal("cyclotomic polynomial without upper-half roots"))?;
    let t = &field.embeddings().hi[0].value;

    let scale = mp::pow2((hp - 24) as i32, hp + 64);
    let to_int = |x: &BigFloat| big_round(&mp::mul(x, &scale, hp + 64));
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(d + 1);
    let mut power = Cplx::from_f64(1.0, 0.0, hp);
    for i in 0..=d {
        let target = if i < d { power.clone() } else { omega.value.neg() };
        let mut row = vec![BigInt::zero(); d + 1];
        row[i] = BigInt::from(1);
        row.push(to_int(&target.re));
        row.push(to_int(&target.im));
        rows.push(row);
        power = power.mul(t, hp);
    }
    let Some(reduced) = lll_reduce(&rows) else {
        return Ok(None);
    };
    for v in reduced.iter().take(3) {
        let den = &v[d];
        if den.is_zero() {
            continue;
        }
        let coeffs: Vec<BigRational> = (0..d).map(|i| BigRational::new(v[i].clone(), den.clone())).collect();
        let z = field.element(RationalPoly::new(coeffs));
        if field.eval_poly(&phi_n, &z)?.is_zero() {
            return Ok(Some(z));
        }
    }
    Ok(None)
}

/// Nearest integer to a multi-precision float.
fn big_round(x: &BigFloat) -> BigInt {
    let Some((m, _, s, e, _)) = x.as_raw_parts() else {
        return BigInt::zero();
    };
    if x.is_zero() {
        return BigInt::zero();
    }
    // value = 0.m * 2^e with little-endian words
    let mut mant = BigInt::zero();
    for w in m.iter().rev() {
        mant = (mant << 64) + BigInt::from(*w);
    }
    let bits = (m.len() * 64) as i64;
    let shift = e as i64 - bits;
    let mut v = if shift >= 0 {
        mant << (shift as usize)
    } else {
        let sh = (-shift) as usize;
        let half = BigInt::from(1) << (sh - 1);
        (mant + half) >> sh
    };
    if s == Sign::Neg {
        v = -v;
    }
    v
}

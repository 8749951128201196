//! Multi-precision binary floating point helpers over `astro_float`.
//!
//! All arithmetic rounds to nearest-even at an explicit precision. The
//! constant cache needed for logarithms is kept per thread.

use std::cell::RefCell;

use astro_float::{BigFloat, Consts, RoundingMode, Sign, Word};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constant cache"));
}

pub fn from_f64(x: f64, p: usize) -> BigFloat {
    BigFloat::from_f64(x, p)
}

pub fn zero(p: usize) -> BigFloat {
    BigFloat::from_word(0, p)
}

pub fn from_int(n: &BigInt, p: usize) -> BigFloat {
    if n.is_zero() {
        return zero(p);
    }
    let (sign, digits) = n.to_u64_digits();
    let words: Vec<Word> = digits.iter().map(|&d| d as Word).collect();
    let s = if sign == num_bigint::Sign::Minus { Sign::Neg } else { Sign::Pos };
    let e = (words.len() * Word::BITS as usize) as i32;
    let exact = BigFloat::from_words(&words, s, e);
    // round to the working precision
    exact.add(&zero(p), p, RM)
}

pub fn from_rational(q: &BigRational, p: usize) -> BigFloat {
    let n = from_int(q.numer(), p + 64);
    let d = from_int(q.denom(), p + 64);
    n.div(&d, p, RM)
}

/// Nearest `f64`.
pub fn to_f64(x: &BigFloat) -> f64 {
    let Some((m, _, s, e, _)) = x.as_raw_parts() else {
        return f64::NAN;
    };
    if x.is_zero() {
        return 0.0;
    }
    // value = 0.m * 2^e, words little-endian
    let top = m[m.len() - 1] as f64;
    let next = if m.len() > 1 { m[m.len() - 2] as f64 } else { 0.0 };
    let frac = (top + next / 2f64.powi(64)) / 2f64.powi(64);
    let v = scale_pow2(frac, e);
    if s == Sign::Neg {
        -v
    } else {
        v
    }
}

fn scale_pow2(mut v: f64, mut e: i32) -> f64 {
    while e > 1000 {
        v *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        v *= 2f64.powi(-1000);
        e += 1000;
    }
    v * 2f64.powi(e)
}

pub fn add(a: &BigFloat, b: &BigFloat, p: usize) -> BigFloat {
    a.add(b, p, RM)
}

pub fn sub(a: &BigFloat, b: &BigFloat, p: usize) -> BigFloat {
    a.sub(b, p, RM)
}

pub fn mul(a: &BigFloat, b: &BigFloat, p: usize) -> BigFloat {
    a.mul(b, p, RM)
}

pub fn div(a: &BigFloat, b: &BigFloat, p: usize) -> BigFloat {
    a.div(b, p, RM)
}

pub fn sqrt(a: &BigFloat, p: usize) -> BigFloat {
    a.sqrt(p, RM)
}

pub fn ln(a: &BigFloat, p: usize) -> BigFloat {
    CONSTS.with(|cc| a.ln(p, RM, &mut cc.borrow_mut()))
}

/// `2^k` exactly.
pub fn pow2(k: i32, p: usize) -> BigFloat {
    let mut one = BigFloat::from_word(1, p);
    one.set_exponent(k + 1);
    one
}

pub fn is_exact(a: &BigFloat) -> bool {
    !a.inexact()
}

/// A complex number with multi-precision parts.
#[derive(Debug, Clone)]
pub struct Cplx {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl Cplx {
    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        Cplx { re, im }
    }

    pub fn zero(p: usize) -> Self {
        Cplx { re: zero(p), im: zero(p) }
    }

    pub fn from_f64(re: f64, im: f64, p: usize) -> Self {
        Cplx { re: from_f64(re, p), im: from_f64(im, p) }
    }

    pub fn from_real(re: BigFloat, p: usize) -> Self {
        Cplx { re, im: zero(p) }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (to_f64(&self.re), to_f64(&self.im))
    }

    pub fn add(&self, o: &Self, p: usize) -> Self {
        Cplx { re: add(&self.re, &o.re, p), im: add(&self.im, &o.im, p) }
    }

    pub fn sub(&self, o: &Self, p: usize) -> Self {
        Cplx { re: sub(&self.re, &o.re, p), im: sub(&self.im, &o.im, p) }
    }

    pub fn mul(&self, o: &Self, p: usize) -> Self {
        let q = p + 16;
        let re = sub(&mul(&self.re, &o.re, q), &mul(&self.im, &o.im, q), p);
        let im = add(&mul(&self.re, &o.im, q), &mul(&self.im, &o.re, q), p);
        Cplx { re, im }
    }

    pub fn scale(&self, s: &BigFloat, p: usize) -> Self {
        Cplx { re: mul(&self.re, s, p), im: mul(&self.im, s, p) }
    }

    pub fn norm_sqr(&self, p: usize) -> BigFloat {
        add(&mul(&self.re, &self.re, p + 8), &mul(&self.im, &self.im, p + 8), p)
    }

    pub fn abs(&self, p: usize) -> BigFloat {
        sqrt(&self.norm_sqr(p + 8), p)
    }

    pub fn conj(&self) -> Self {
        Cplx { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn neg(&self) -> Self {
        Cplx { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn div(&self, o: &Self, p: usize) -> Self {
        let q = p + 16;
        let den = o.norm_sqr(q);
        let num = self.mul(&o.conj(), q);
        Cplx { re: div(&num.re, &den, p), im: div(&num.im, &den, p) }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// Modulus as `f64`.
    pub fn abs_f64(&self, p: usize) -> f64 {
        to_f64(&self.abs(p))
    }
}

/// Horner evaluation of a rational-coefficient polynomial (constant first).
pub fn eval_rational(coeffs: &[BigRational], z: &Cplx, p: usize) -> Cplx {
    let q = p + 32;
    let mut acc = Cplx::zero(q);
    for c in coeffs.iter().rev() {
        acc = acc.mul(z, q);
        acc.re = add(&acc.re, &from_rational(c, q), q);
    }
    Cplx { re: acc.re.add(&zero(p), p, RM), im: acc.im.add(&zero(p), p, RM) }
}

/// Horner evaluation of an integer polynomial and its derivative.
pub fn eval_int_with_derivative(coeffs: &[BigInt], z: &Cplx, p: usize) -> (Cplx, Cplx) {
    let mut val = Cplx::zero(p);
    let mut der = Cplx::zero(p);
    for c in coeffs.iter().rev() {
        der = der.mul(z, p).add(&val, p);
        val = val.mul(z, p);
        val.re = add(&val.re, &from_int(c, p), p);
    }
    (val, der)
}

pub fn abs_int_f64(n: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    n.abs().to_f64().unwrap_or(f64::INFINITY)
}

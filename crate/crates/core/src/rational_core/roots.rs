//! Complex roots of squarefree integer polynomials.
//!
//! Roots are found by simultaneous (Aberth) iteration: first in `f64` from a
//! circle of starting points, then continued at the requested precision and
//! again at twice that precision. The disagreement between the two runs plus
//! the Newton inclusion radius `deg * |q(z)/q'(z)|` is the reported error
//! radius.

use astro_float::BigFloat;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::mp::{self, Cplx};
use super::poly::RationalPoly;
use crate::error::{Error, Result};

/// A root approximation together with a certified error radius.
#[derive(Debug, Clone)]
pub struct ComplexApprox {
    pub value: Cplx,
    pub error_radius: f64,
    pub precision_bits: usize,
    /// The root was certified real; its imaginary part is exactly zero.
    pub is_real: bool,
}

impl ComplexApprox {
    pub fn re_f64(&self) -> f64 {
        mp::to_f64(&self.value.re)
    }

    pub fn im_f64(&self) -> f64 {
        mp::to_f64(&self.value.im)
    }

    pub fn conj(&self) -> Self {
        ComplexApprox { value: self.value.conj(), ..self.clone() }
    }
}

/// Roots at working precision and, index for index, the same roots at twice
/// the working precision.
#[derive(Debug, Clone)]
pub struct RootPair {
    pub lo: Vec<ComplexApprox>,
    pub hi: Vec<ComplexApprox>,
}

impl RootPair {
    pub fn precision_bits(&self) -> usize {
        self.lo.first().map_or(0, |r| r.precision_bits)
    }
}

/// All complex roots of `q` (constant coefficient first), each with error
/// radius below `2^(-precision_bits/2)`. Real roots come first in increasing
/// order, then conjugate pairs with the positive imaginary part first.
pub fn poly_complex_roots(q: &[BigInt], precision_bits: usize) -> Result<Vec<ComplexApprox>> {
    Ok(certified_roots(q, precision_bits)?.lo)
}

pub fn certified_roots(q: &[BigInt], precision_bits: usize) -> Result<RootPair> {
    let q = trim(q);
    let n = q.len().saturating_sub(1);
    if n == 0 {
        return Err(Error::input("root finding needs a nonconstant polynomial"));
    }
    if !RationalPoly::from_bigints(&q).is_squarefree() {
        return Err(Error::NotSquarefree);
    }
    let p = precision_bits.max(32);
    let hp = 2 * p;
    if n == 1 {
        return Ok(linear_root(&q, p));
    }

    let seeds = aberth_f64(&q);
    let lo = aberth_mp(&q, seeds.iter().map(|z| Cplx::from_f64(z.re, z.im, p + 32)).collect(), p)?;
    let hi = aberth_mp(&q, lo.clone(), hp)?;

    // pair every working-precision root with its nearest high-precision root
    let mut used = vec![false; n];
    let mut matched: Vec<(Cplx, Cplx, f64)> = Vec::with_capacity(n);
    let coeffs_hi = coeffs_mp(&q, hp);
    for z in &lo {
        let (j, dist) = hi
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, w)| (j, w.sub(z, hp).abs_f64(hp)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("as many high-precision roots as roots");
        used[j] = true;
        let radius = dist + newton_radius(&coeffs_hi, z, n, hp);
        matched.push((z.clone(), hi[j].clone(), radius));
    }

    let limit = 2f64.powi(-(p as i32) / 2);
    if let Some(bad) = matched.iter().find(|m| m.2.is_nan() || m.2 >= limit) {
        return Err(Error::precision(format!(
            "root certification radius {:.3e} exceeds 2^-{}",
            bad.2,
            p / 2
        )));
    }

    let mut real = Vec::new();
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    for (z, w, r) in matched {
        let im = mp::to_f64(&w.im);
        let hi_r = newton_radius(&coeffs_hi, &w, n, hp) + rounding_slack(&w, hp);
        if im.abs() <= r {
            let z = Cplx::from_real(z.re, p);
            let w = Cplx::from_real(w.re, hp);
            real.push((z, w, r, hi_r));
        } else if im > 0.0 {
            upper.push((z, w, r, hi_r));
        } else {
            lower.push((z, w, r, hi_r));
        }
    }
    if upper.len() != lower.len() {
        return Err(Error::precision("nonreal roots do not pair up into conjugates"));
    }
    real.sort_by(|a, b| mp::to_f64(&a.1.re).total_cmp(&mp::to_f64(&b.1.re)));
    upper.sort_by(|a, b| {
        let ka = (mp::to_f64(&a.1.re), mp::to_f64(&a.1.im));
        let kb = (mp::to_f64(&b.1.re), mp::to_f64(&b.1.im));
        ka.0.total_cmp(&kb.0).then(ka.1.total_cmp(&kb.1))
    });

    let mut out = RootPair { lo: Vec::with_capacity(n), hi: Vec::with_capacity(n) };
    for (z, w, r, hr) in real {
        out.lo.push(ComplexApprox { value: z, error_radius: r, precision_bits: p, is_real: true });
        out.hi.push(ComplexApprox { value: w, error_radius: hr, precision_bits: hp, is_real: true });
    }
    for (z, w, r, hr) in upper {
        // the partner is the nearest lower-half root to the conjugate
        let target = w.conj();
        let (idx, _) = lower
            .iter()
            .enumerate()
            .map(|(i, l)| (i, l.1.sub(&target, hp).abs_f64(hp)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("paired");
        let partner = lower.swap_remove(idx);
        let r = r.max(partner.2);
        let hr = hr.max(partner.3);
        let lo_root = ComplexApprox { value: z, error_radius: r, precision_bits: p, is_real: false };
        let hi_root = ComplexApprox { value: w, error_radius: hr, precision_bits: hp, is_real: false };
        out.lo.push(lo_root.clone());
        out.lo.push(lo_root.conj());
        out.hi.push(hi_root.clone());
        out.hi.push(hi_root.conj());
    }
    Ok(out)
}

fn trim(q: &[BigInt]) -> Vec<BigInt> {
    let mut v = q.to_vec();
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn linear_root(q: &[BigInt], p: usize) -> RootPair {
    let root = BigRational::new(-q[0].clone(), q[1].clone());
    let make = |prec: usize| {
        let v = mp::from_rational(&root, prec);
        let radius = if mp::is_exact(&v) || root.is_zero() {
            0.0
        } else {
            mp::to_f64(&v).abs() * 2f64.powi(-(prec as i32) + 1)
        };
        ComplexApprox { value: Cplx::from_real(v, prec), error_radius: radius, precision_bits: prec, is_real: true }
    };
    RootPair { lo: vec![make(p)], hi: vec![make(2 * p)] }
}

fn rounding_slack(z: &Cplx, p: usize) -> f64 {
    z.abs_f64(p).max(1.0) * 2f64.powi(-(p as i32) + 2)
}

fn newton_radius(coeffs: &[Cplx], z: &Cplx, n: usize, p: usize) -> f64 {
    let (v, d) = eval_with_derivative(coeffs, z, p);
    if v.is_zero() {
        return 0.0;
    }
    let dv = d.abs_f64(p);
    if dv == 0.0 {
        return f64::INFINITY;
    }
    n as f64 * v.abs_f64(p) / dv
}

fn coeffs_mp(q: &[BigInt], p: usize) -> Vec<Cplx> {
    q.iter().map(|c| Cplx::from_real(mp::from_int(c, p), p)).collect()
}

fn eval_with_derivative(coeffs: &[Cplx], z: &Cplx, p: usize) -> (Cplx, Cplx) {
    let mut val = Cplx::zero(p);
    let mut der = Cplx::zero(p);
    for c in coeffs.iter().rev() {
        der = der.mul(z, p).add(&val, p);
        val = val.mul(z, p).add(c, p);
    }
    (val, der)
}

/// Binary exponent bound: `|x| < 2^mag(x)`; very negative for zero.
fn mag(x: &BigFloat) -> i64 {
    if x.is_zero() {
        i64::MIN / 4
    } else {
        x.exponent().map_or(i64::MAX / 4, i64::from)
    }
}

fn cmag(z: &Cplx) -> i64 {
    mag(&z.re).max(mag(&z.im)) + 1
}

fn aberth_mp(q: &[BigInt], seeds: Vec<Cplx>, p: usize) -> Result<Vec<Cplx>> {
    let wp = p + 32;
    let n = seeds.len();
    let coeffs = coeffs_mp(q, wp);
    let mut z: Vec<Cplx> = seeds;
    let one = Cplx::from_f64(1.0, 0.0, wp);
    for _ in 0..400 {
        let mut converged = true;
        for i in 0..n {
            let (v, d) = eval_with_derivative(&coeffs, &z[i], wp);
            if v.is_zero() {
                continue;
            }
            let ratio = v.div(&d, wp);
            let mut s = Cplx::zero(wp);
            for j in 0..n {
                if j != i {
                    s = s.add(&one.div(&z[i].sub(&z[j], wp), wp), wp);
                }
            }
            let w = ratio.div(&one.sub(&ratio.mul(&s, wp), wp), wp);
            let scale = cmag(&z[i]).max(0);
            if cmag(&w) > scale - (p as i64 + 4) {
                converged = false;
            }
            z[i] = z[i].sub(&w, wp);
        }
        if converged {
            return Ok(z
                .into_iter()
                .map(|c| Cplx::new(mp::add(&c.re, &mp::zero(p), p), mp::add(&c.im, &mp::zero(p), p)))
                .collect());
        }
    }
    Err(Error::precision("root iteration did not converge"))
}

fn aberth_f64(q: &[BigInt]) -> Vec<Complex64> {
    let n = q.len() - 1;
    let lead = BigRational::from_integer(q[n].clone());
    let monic: Vec<f64> = q
        .iter()
        .map(|c| (BigRational::from_integer(c.clone()) / &lead).to_f64().unwrap_or(f64::NAN))
        .collect();
    let radius = 1.0 + monic[..n].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let circle: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, std::f64::consts::TAU * k as f64 / n as f64 + 0.4))
        .collect();
    if !monic.iter().all(|c| c.is_finite()) || !radius.is_finite() {
        return circle;
    }
    let eval = |z: Complex64| {
        let mut v = Complex64::new(0.0, 0.0);
        let mut d = Complex64::new(0.0, 0.0);
        for c in monic.iter().rev() {
            d = d * z + v;
            v = v * z + c;
        }
        (v, d)
    };
    let mut z = circle.clone();
    for _ in 0..1000 {
        let mut worst = 0.0f64;
        for i in 0..n {
            let (v, d) = eval(z[i]);
            let ratio = v / d;
            let s: Complex64 = (0..n).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let w = ratio / (1.0 - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                worst = worst.max(w.norm() / z[i].norm().max(1.0));
            }
        }
        if worst < 1e-15 {
            break;
        }
    }
    if z.iter().all(|c| c.is_finite()) {
        z
    } else {
        circle
    }
}

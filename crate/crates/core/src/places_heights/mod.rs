//! Archimedean places, normalized absolute values and the Weil height.
//!
//! Every real number here is computed twice, at the tower's working
//! precision and at twice that, and rejected if the two disagree beyond
//! `2^(-p/4)`.

use astro_float::BigFloat;

use crate::error::{Error, Result};
use crate::number_field::{FieldElement, FieldTag, FieldTower, NumberField};
use crate::rational_core::mp;
use crate::rational_core::roots::{certified_roots, ComplexApprox};

/// An archimedean place: a real embedding or a pair of complex conjugate
/// embeddings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Place {
    pub field_tag: FieldTag,
    pub index: usize,
    pub is_real: bool,
    /// Local degree: 1 for real places, 2 for complex ones.
    pub d_w: usize,
    /// Degree of the owning field over ℚ.
    pub d: usize,
    /// Embedding index of the representative (the one with positive
    /// imaginary part for complex places).
    pub embedding: usize,
}

impl Place {
    /// Embedding indices belonging to this place.
    pub fn embeddings(&self) -> Vec<usize> {
        if self.is_real {
            vec![self.embedding]
        } else {
            vec![self.embedding, self.embedding + 1]
        }
    }
}

/// The places of l lying over one place of k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaceFiber {
    pub v: Place,
    pub members: Vec<Place>,
}

pub fn archimedean_places(tower: &FieldTower, tag: FieldTag) -> Vec<Place> {
    places_of(tower.field(tag))
}

fn places_of(field: &NumberField) -> Vec<Place> {
    let roots = &field.embeddings().lo;
    let mut out = Vec::new();
    let mut i = 0;
    while i < roots.len() {
        let is_real = roots[i].is_real;
        out.push(Place {
            field_tag: field.tag(),
            index: out.len(),
            is_real,
            d_w: if is_real { 1 } else { 2 },
            d: field.degree(),
            embedding: i,
        });
        i += if is_real { 1 } else { 2 };
    }
    out
}

pub fn place_fibers(tower: &FieldTower) -> Vec<PlaceFiber> {
    let l_places = archimedean_places(tower, FieldTag::L);
    archimedean_places(tower, FieldTag::K)
        .into_iter()
        .map(|v| {
            let below = v.embeddings();
            let members = l_places
                .iter()
                .filter(|w| below.contains(&tower.fiber_map()[w.embedding]))
                .copied()
                .collect();
            PlaceFiber { v, members }
        })
        .collect()
}

/// Accepts a value computed at `p` and `2p` bits if they agree to `2^(-p/4)`
/// relative to the magnitude.
fn agree(lo: &BigFloat, hi: &BigFloat, p: usize, what: &str) -> Result<f64> {
    let diff = mp::to_f64(&mp::sub(lo, hi, 2 * p)).abs();
    let scale = mp::to_f64(hi).abs().max(1.0);
    if diff.is_nan() || diff > 2f64.powi(-(p as i32) / 4) * scale {
        return Err(Error::precision(format!("{what}: working and doubled precision disagree by {diff:.3e}")));
    }
    Ok(mp::to_f64(lo))
}

fn log_abs_at(field: &NumberField, a: &FieldElement, w: &Place, high: bool) -> Result<BigFloat> {
    let z = field.embed(a, w.embedding, high);
    let p = if high { 2 * field.precision_bits() } else { field.precision_bits() };
    let n2 = z.norm_sqr(p + 16);
    if n2.is_zero() {
        return Err(Error::precision("element vanishes numerically at an embedding"));
    }
    // (d_w / d) * ln|z| = d_w / (2d) * ln|z|^2
    let ln = mp::ln(&n2, p);
    let factor = mp::from_f64(w.d_w as f64 / (2.0 * w.d as f64), p);
    Ok(mp::mul(&ln, &factor, p))
}

/// `log|a|_w = (d_w/d) log‖a‖_w`.
pub fn log_abs(tower: &FieldTower, a: &FieldElement, w: &Place) -> Result<f64> {
    if a.owner() != w.field_tag {
        return Err(Error::CrossField);
    }
    if a.is_zero() {
        return Err(Error::LogOfZero);
    }
    let field = tower.field(a.owner());
    let lo = log_abs_at(field, a, w, false)?;
    let hi = log_abs_at(field, a, w, true)?;
    agree(&lo, &hi, field.precision_bits(), "log_abs")
}

/// `(log|a|_w)_w` over the archimedean places of the field of `a`.
pub fn archimedean_log_vector(tower: &FieldTower, a: &FieldElement) -> Result<Vec<f64>> {
    archimedean_places(tower, a.owner()).iter().map(|w| log_abs(tower, a, w)).collect()
}

/// The absolute logarithmic Weil height, through the Mahler measure of the
/// minimal polynomial.
pub fn weil_height(tower: &FieldTower, a: &FieldElement) -> Result<f64> {
    if a.is_zero() {
        return Err(Error::LogOfZero);
    }
    let field = tower.field(a.owner());
    let p = field.precision_bits();
    let minpoly = field.char_poly(a).squarefree_part();
    let (_, ints) = minpoly.primitive_part()?;
    let deg = ints.len() - 1;
    let roots = certified_roots(&ints, p)?;
    let lead = mp::from_int(&ints[deg], 4 * p);
    let lo = mahler_log(&lead, &roots.lo, deg, p);
    let hi = mahler_log(&lead, &roots.hi, deg, 2 * p);
    agree(&lo, &hi, p, "weil_height")
}

/// `(log a + Σ log⁺|root|) / deg`, with roots certified to lie within their
/// error radius of the unit circle contributing exactly zero.
fn mahler_log(lead: &BigFloat, roots: &[ComplexApprox], deg: usize, p: usize) -> BigFloat {
    let mut acc = mp::ln(lead, p);
    for r in roots {
        let n2 = r.value.norm_sqr(p + 16);
        let modulus = mp::to_f64(&mp::sqrt(&n2, p));
        if (modulus - 1.0).abs() <= r.error_radius || modulus <= 1.0 {
            continue;
        }
        let half = mp::from_f64(0.5, p);
        acc = mp::add(&acc, &mp::mul(&mp::ln(&n2, p), &half, p), p);
    }
    mp::div(&acc, &mp::from_int(&(deg as u64).into(), p), p)
}

#[cfg(test)]
mod tests;

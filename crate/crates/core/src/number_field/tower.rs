//! The tower ℚ ⊆ k ⊆ l and the relative norm.

use num_rational::BigRational;
use num_traits::Zero;

use super::field::{FieldElement, FieldTag, NumberField};
use crate::error::{Error, Result};
use crate::rational_core::mp;
use crate::rational_core::ratmat::{self, RatMatrix};
use crate::rational_core::RationalPoly;

#[derive(Debug, Clone)]
pub struct FieldTower {
    k: NumberField,
    l: NumberField,
    phi_in_theta: RationalPoly,
    e: usize,
    f: usize,
    psi_basis: Vec<FieldElement>,
    fiber_map: Vec<usize>,
    default_basis: RelativeBasis,
    precision_bits: usize,
}

/// Builds and validates the tower. `f_k = x` encodes k = ℚ with generator 0.
pub fn build_tower(
    f_k: RationalPoly,
    f_l: RationalPoly,
    phi_in_theta: RationalPoly,
    psi_basis: Vec<RationalPoly>,
    precision_bits: usize,
) -> Result<FieldTower> {
    let k = NumberField::new(FieldTag::K, f_k, precision_bits)?;
    let l = NumberField::new(FieldTag::L, f_l, precision_bits)?;
    let (f, ef) = (k.degree(), l.degree());
    if ef % f != 0 {
        return Err(Error::input(format!("[k:Q] = {f} does not divide [l:Q] = {ef}")));
    }
    if phi_in_theta.degree().is_some_and(|d| d >= ef) {
        return Err(Error::input("k generator expression must have degree below [l:Q]"));
    }
    let image = k.minpoly().compose(&phi_in_theta).rem(l.minpoly())?;
    if !image.is_zero() {
        return Err(Error::GeneratorEmbedding);
    }

    if psi_basis.len() != f {
        return Err(Error::input(format!("integral basis of k needs {f} elements")));
    }
    let mut psi = Vec::with_capacity(f);
    for p in psi_basis {
        if p.degree().is_some_and(|d| d >= f) {
            return Err(Error::input("integral basis element has too many coefficients"));
        }
        let a = k.element(p);
        if !k.is_integral(&a) {
            return Err(Error::NonIntegralBasis);
        }
        psi.push(a);
    }
    let psi_rows: RatMatrix = psi.iter().map(|a| a.coeff_vec(f)).collect();
    if ratmat::rank(&psi_rows) < f {
        return Err(Error::input("integral basis of k is linearly dependent"));
    }

    let fiber_map = fibration(&k, &l, &phi_in_theta, precision_bits)?;

    let mut tower = FieldTower {
        k,
        l,
        phi_in_theta,
        e: ef / f,
        f,
        psi_basis: psi,
        fiber_map,
        default_basis: RelativeBasis::placeholder(),
        precision_bits,
    };
    let theta = tower.l.generator();
    let omega = (0..tower.e).map(|i| tower.l.pow(&theta, i as i64)).collect::<Result<Vec<_>>>()?;
    tower.default_basis = RelativeBasis::new(&tower, omega)?;
    Ok(tower)
}

/// Assigns each embedding of l to the embedding of k it restricts to.
fn fibration(k: &NumberField, l: &NumberField, phi: &RationalPoly, p: usize) -> Result<Vec<usize>> {
    let threshold = 2f64.powi(-(p as i32) / 4);
    let mut map = Vec::with_capacity(l.degree());
    for root in &l.embeddings().lo {
        let value = mp::eval_rational(phi.coeffs(), &root.value, p);
        let hits: Vec<usize> = k
            .embeddings()
            .lo
            .iter()
            .enumerate()
            .filter(|(_, r)| value.sub(&r.value, p).abs_f64(p) < threshold)
            .map(|(j, _)| j)
            .collect();
        match hits.as_slice() {
            [j] => map.push(*j),
            _ => return Err(Error::Fibration),
        }
    }
    let e = l.degree() / k.degree();
    for j in 0..k.degree() {
        if map.iter().filter(|&&m| m == j).count() != e {
            return Err(Error::Fibration);
        }
    }
    Ok(map)
}

impl FieldTower {
    pub fn k(&self) -> &NumberField {
        &self.k
    }

    pub fn l(&self) -> &NumberField {
        &self.l
    }

    pub fn field(&self, tag: FieldTag) -> &NumberField {
        match tag {
            FieldTag::K => &self.k,
            FieldTag::L => &self.l,
        }
    }

    /// `[l:k]`.
    pub fn e(&self) -> usize {
        self.e
    }

    /// `[k:ℚ]`.
    pub fn f(&self) -> usize {
        self.f
    }

    pub fn phi_in_theta(&self) -> &RationalPoly {
        &self.phi_in_theta
    }

    pub fn psi_basis(&self) -> &[FieldElement] {
        &self.psi_basis
    }

    pub fn precision_bits(&self) -> usize {
        self.precision_bits
    }

    /// For each embedding of l, the index of the embedding of k below it.
    pub fn fiber_map(&self) -> &[usize] {
        &self.fiber_map
    }

    /// The power basis `1, θ, …, θ^(e-1)` of l over k.
    pub fn default_basis(&self) -> &RelativeBasis {
        &self.default_basis
    }

    pub fn embed_k_in_l(&self, a: &FieldElement) -> Result<FieldElement> {
        if a.owner() != FieldTag::K {
            return Err(Error::CrossField);
        }
        Ok(self.l.element(a.poly().compose(&self.phi_in_theta)))
    }

    /// `Norm_{l/k}(mu)` computed through the power basis of l over k.
    pub fn relative_norm(&self, mu: &FieldElement) -> Result<FieldElement> {
        self.default_basis.relative_norm(self, mu)
    }

    /// Exact binary arithmetic on two elements of the same field.
    pub fn arith(&self, a: &FieldElement, b: &FieldElement, op: ArithOp) -> Result<FieldElement> {
        if a.owner() != b.owner() {
            return Err(Error::CrossField);
        }
        let field = self.field(a.owner());
        match op {
            ArithOp::Add => field.add(a, b),
            ArithOp::Sub => field.sub(a, b),
            ArithOp::Mul => field.mul(a, b),
            ArithOp::Div => field.div(a, b),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// `a op b` in the field both operands belong to.
pub fn field_arithmetic(tower: &FieldTower, a: &FieldElement, b: &FieldElement, op: ArithOp) -> Result<FieldElement> {
    tower.arith(a, b, op)
}

/// A k-basis `ω_1..ω_e` of l, flattened against the integral basis of k to
/// the ℚ-basis `{ω_i ψ_j}` (index `i * f + j`).
#[derive(Debug, Clone)]
pub struct RelativeBasis {
    omega: Vec<FieldElement>,
    products: Vec<FieldElement>,
    /// Maps power-basis coordinates of l to coordinates in `products`.
    to_products: RatMatrix,
    e: usize,
    f: usize,
}

impl RelativeBasis {
    fn placeholder() -> Self {
        RelativeBasis { omega: Vec::new(), products: Vec::new(), to_products: Vec::new(), e: 0, f: 0 }
    }

    pub fn new(tower: &FieldTower, omega: Vec<FieldElement>) -> Result<Self> {
        let (e, f) = (tower.e(), tower.f());
        if omega.len() != e {
            return Err(Error::input(format!("module basis needs exactly {e} elements")));
        }
        if omega.iter().any(|w| w.owner() != FieldTag::L) {
            return Err(Error::CrossField);
        }
        let l = tower.l();
        let mut products = Vec::with_capacity(e * f);
        for w in &omega {
            for psi in tower.psi_basis() {
                products.push(l.mul(w, &tower.embed_k_in_l(psi)?)?);
            }
        }
        let n = e * f;
        // columns are the power-basis coordinates of the products
        let cols: RatMatrix = products.iter().map(|p| p.coeff_vec(n)).collect();
        let to_products = ratmat::inverse(&ratmat::transpose(&cols)).map_err(|_| Error::DependentOmega)?;
        Ok(RelativeBasis { omega, products, to_products, e, f })
    }

    pub fn omega(&self) -> &[FieldElement] {
        &self.omega
    }

    /// The ℚ-basis `ω_i ψ_j`.
    pub fn products(&self) -> &[FieldElement] {
        &self.products
    }

    /// Rational coordinates of `a` in the product basis.
    pub fn flat_coords(&self, a: &FieldElement) -> Vec<BigRational> {
        ratmat::mat_vec(&self.to_products, &a.coeff_vec(self.e * self.f))
    }

    /// Coordinates of `a` over k in the basis `ω`.
    pub fn k_coords(&self, tower: &FieldTower, a: &FieldElement) -> Result<Vec<FieldElement>> {
        if a.owner() != FieldTag::L {
            return Err(Error::CrossField);
        }
        let x = self.flat_coords(a);
        let k = tower.k();
        (0..self.e)
            .map(|i| {
                let mut acc = k.zero();
                for (j, psi) in tower.psi_basis().iter().enumerate() {
                    acc = k.add(&acc, &k.scale(psi, &x[i * self.f + j]))?;
                }
                Ok(acc)
            })
            .collect()
    }

    /// `Σ c_i ω_i` for k-coordinates `c`.
    pub fn combine(&self, tower: &FieldTower, coords: &[FieldElement]) -> Result<FieldElement> {
        let l = tower.l();
        let mut acc = l.zero();
        for (c, w) in coords.iter().zip(&self.omega) {
            acc = l.add(&acc, &l.mul(&tower.embed_k_in_l(c)?, w)?)?;
        }
        Ok(acc)
    }

    /// `Σ x_t b_t` for rational coordinates in the product basis.
    pub fn combine_flat(&self, tower: &FieldTower, x: &[BigRational]) -> FieldElement {
        let l = tower.l();
        let n = self.e * self.f;
        let mut coeffs = vec![BigRational::zero(); n];
        for (xt, b) in x.iter().zip(&self.products) {
            if xt.is_zero() {
                continue;
            }
            for (c, bc) in coeffs.iter_mut().zip(b.coeff_vec(n)) {
                *c += xt * bc;
            }
        }
        l.element(RationalPoly::new(coeffs))
    }

    /// Matrix over k of multiplication by `mu` in the basis `ω`
    /// (column `i` = coordinates of `mu ω_i`).
    pub fn k_matrix(&self, tower: &FieldTower, mu: &FieldElement) -> Result<Vec<Vec<FieldElement>>> {
        let l = tower.l();
        let cols = self
            .omega
            .iter()
            .map(|w| self.k_coords(tower, &l.mul(mu, w)?))
            .collect::<Result<Vec<_>>>()?;
        Ok((0..self.e).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect())
    }

    /// `Norm_{l/k}(mu)`: the determinant over k of multiplication by `mu`.
    pub fn relative_norm(&self, tower: &FieldTower, mu: &FieldElement) -> Result<FieldElement> {
        if mu.owner() != FieldTag::L {
            return Err(Error::CrossField);
        }
        k_determinant(tower.k(), self.k_matrix(tower, mu)?)
    }
}

/// Determinant of a square matrix over the field `k` by elimination.
pub fn k_determinant(k: &NumberField, mut a: Vec<Vec<FieldElement>>) -> Result<FieldElement> {
    let n = a.len();
    let mut det = k.one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Ok(k.zero());
        };
        if p != c {
            a.swap(p, c);
            det = k.neg(&det);
        }
        det = k.mul(&det, &a[c][c])?;
        let inv = k.inv(&a[c][c])?;
        let pivot_row = a[c].clone();
        for row in a.iter_mut().skip(c + 1) {
            if row[c].is_zero() {
                continue;
            }
            let factor = k.mul(&row[c], &inv)?;
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x = k.sub(x, &k.mul(&factor, y)?)?;
            }
        }
    }
    Ok(det)
}

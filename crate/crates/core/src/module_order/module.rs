//! Full O_k-modules in l and their coefficient rings.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::number_field::{FieldElement, FieldTag, FieldTower, RelativeBasis};
use crate::rational_core::intmat::hnf_rows;
use crate::rational_core::ratmat::{self, RatMatrix};
use crate::rational_core::rational::denominator_lcm;
use crate::rational_core::RationalPoly;

/// `M = O_k ω_1 + … + O_k ω_e`, with ℤ-basis `ω_i ψ_j`.
#[derive(Debug, Clone)]
pub struct FullModule {
    tower: Arc<FieldTower>,
    basis: RelativeBasis,
}

pub fn build_module(tower: Arc<FieldTower>, omega: Vec<FieldElement>) -> Result<FullModule> {
    let basis = RelativeBasis::new(&tower, omega)?;
    for b in basis.products() {
        if !tower.l().is_integral(b) {
            return Err(Error::ModuleNotIntegral);
        }
    }
    Ok(FullModule { tower, basis })
}

impl FullModule {
    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn tower_arc(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    pub fn basis(&self) -> &RelativeBasis {
        &self.basis
    }

    pub fn omega(&self) -> &[FieldElement] {
        self.basis.omega()
    }

    /// The ℤ-basis `ω_i ψ_j`, index `i * f + j`.
    pub fn z_basis(&self) -> &[FieldElement] {
        self.basis.products()
    }

    pub fn rank(&self) -> usize {
        self.z_basis().len()
    }

    /// Rational coordinates in the ℤ-basis.
    pub fn coords(&self, a: &FieldElement) -> Vec<BigRational> {
        self.basis.flat_coords(a)
    }

    /// Integer coordinates, if `a ∈ M`.
    pub fn int_coords(&self, a: &FieldElement) -> Option<Vec<BigInt>> {
        let c = self.coords(a);
        c.iter().all(|x| x.is_integer()).then(|| c.iter().map(|x| x.to_integer()).collect())
    }

    /// The element with the given ℤ-basis coordinates.
    pub fn element(&self, coords: &[BigInt]) -> FieldElement {
        let q: Vec<BigRational> = coords.iter().map(|c| BigRational::from_integer(c.clone())).collect();
        self.basis.combine_flat(&self.tower, &q)
    }

    /// Relative norm computed in this module's k-basis.
    pub fn relative_norm(&self, mu: &FieldElement) -> Result<FieldElement> {
        self.basis.relative_norm(&self.tower, mu)
    }
}

/// Membership in `M` with the (rational) ℤ-basis coordinates.
pub fn module_contains(m: &FullModule, a: &FieldElement) -> (bool, Vec<BigRational>) {
    let c = m.coords(a);
    (c.iter().all(|x| x.is_integer()), c)
}

/// `O_M = {α ∈ l : αM ⊆ M}` with a ℤ-basis in Hermite form on the power
/// basis of l.
#[derive(Debug, Clone)]
pub struct CoefficientRing {
    z_basis: Vec<FieldElement>,
    /// Power-basis coordinates to ring coordinates.
    to_ring: RatMatrix,
}

impl CoefficientRing {
    pub fn z_basis(&self) -> &[FieldElement] {
        &self.z_basis
    }

    pub fn coords(&self, a: &FieldElement) -> Vec<BigRational> {
        ratmat::mat_vec(&self.to_ring, &a.coeff_vec(self.z_basis.len()))
    }

    pub fn contains(&self, a: &FieldElement) -> bool {
        self.coords(a).iter().all(|x| x.is_integer())
    }
}

pub fn coefficient_ring(m: &FullModule) -> Result<CoefficientRing> {
    let tower = m.tower();
    let l = tower.l();
    let n = m.rank();
    let b = m.z_basis();
    // α = Σ x_t b_t lies in O_M iff C x is integral, where the rows of C run
    // over the coordinates of the products b_t b_s
    let mut rows: RatMatrix = vec![Vec::with_capacity(n); n * n];
    for bt in b {
        for (s, bs) in b.iter().enumerate() {
            let c = m.coords(&l.mul(bt, bs)?);
            for (i, x) in c.into_iter().enumerate() {
                rows[s * n + i].push(x);
            }
        }
    }
    let h = scaled_hnf(&rows);
    if h.len() != n {
        return Err(Error::internal("multiplier lattice is not full rank"));
    }
    // O_M is the dual lattice H^{-1} ℤ^n
    let hinv = ratmat::inverse(&h)?;
    let gens: Vec<FieldElement> = (0..n)
        .map(|j| {
            let col: Vec<BigRational> = hinv.iter().map(|r| r[j].clone()).collect();
            m.basis().combine_flat(tower, &col)
        })
        .collect();
    // canonical form on the power basis
    let power_rows: RatMatrix = gens.iter().map(|g| g.coeff_vec(n)).collect();
    let canon = scaled_hnf(&power_rows);
    let z_basis: Vec<FieldElement> = canon.into_iter().map(|r| l.element(RationalPoly::new(r))).collect();
    let cols: RatMatrix = z_basis.iter().map(|g| g.coeff_vec(n)).collect();
    let to_ring = ratmat::inverse(&ratmat::transpose(&cols))?;
    let ring = CoefficientRing { z_basis, to_ring };

    if !ring.contains(&l.one()) {
        return Err(Error::internal("coefficient ring misses 1"));
    }
    for x in &ring.z_basis {
        if !l.is_integral(x) {
            return Err(Error::internal("coefficient ring element not integral"));
        }
        for y in &ring.z_basis {
            if !ring.contains(&l.mul(x, y)?) {
                return Err(Error::internal("coefficient ring not closed under multiplication"));
            }
        }
        for bs in b {
            if m.int_coords(&l.mul(x, bs)?).is_none() {
                return Err(Error::internal("coefficient ring does not preserve the module"));
            }
        }
    }
    Ok(ring)
}

/// Hermite basis of the lattice spanned by rational rows.
fn scaled_hnf(rows: &[Vec<BigRational>]) -> RatMatrix {
    let den = denominator_lcm(rows.iter().flatten());
    let d = BigRational::from_integer(den.clone());
    let ints: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|x| (x * &d).to_integer()).collect()).collect();
    hnf_rows(&ints)
        .into_iter()
        .map(|r| r.into_iter().map(|x| BigRational::new(x, den.clone())).collect())
        .collect()
}

/// Whether `eps` lies in `O_M^×`, i.e. `eps M = M`.
pub fn is_module_unit(m: &FullModule, ring: &CoefficientRing, eps: &FieldElement) -> Result<bool> {
    if eps.owner() != FieldTag::L || eps.is_zero() {
        return Ok(false);
    }
    let l = m.tower().l();
    Ok(ring.contains(eps) && ring.contains(&l.inv(eps)?))
}

/// Least `n ≥ 1` with `eps^n ∈ O_M^×`, searching up to `cap`.
pub fn least_power_in_ring(m: &FullModule, eps: &FieldElement, cap: u32) -> Result<u32> {
    let tower = m.tower();
    let l = tower.l();
    let n = m.rank();
    // action of eps on the ℤ-basis of M
    let cols: RatMatrix = m
        .z_basis()
        .iter()
        .map(|b| Ok(m.coords(&l.mul(eps, b)?)))
        .collect::<Result<_>>()?;
    let t = ratmat::transpose(&cols);
    let tinv = ratmat::inverse(&t)?;
    let integral = |a: &RatMatrix| a.iter().flatten().all(|x| x.is_integer());
    let (mut p, mut q) = (t.clone(), tinv.clone());
    for k in 1..=cap {
        if integral(&p) && integral(&q) {
            return Ok(k);
        }
        p = ratmat::mat_mul(&p, &t);
        q = ratmat::mat_mul(&q, &tinv);
        if p.len() != n {
            return Err(Error::internal("action matrix lost shape"));
        }
    }
    Err(Error::OrderIndexTooLarge)
}

//! Reduction of a solution to a small-height representative of its class.
//!
//! Given `μ` with `Norm_{l/k}(μ) = ζβ`, the log vector of `μ` is balanced
//! within each fiber of places over k, the balancing vector is written in
//! the unit lattice, and the rounded exponents give `γ ∈ E_{l/k}(M)` with
//! `h(γμ) ≤ ½ Σ h(ε_j) + h(β)/e`.

use num_bigint::{BigInt, Sign};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::module_order::RelativeUnitSystem;
use crate::number_field::{FieldElement, FieldTag};
use crate::places_heights::{archimedean_log_vector, weil_height, PlaceFiber};
use crate::rational_core::realmat;

/// Slack allowed on every proven inequality.
pub const TOLERANCE: f64 = 1e-9;

/// Largest residual accepted when solving `log_matrix · u = z`.
pub const SPAN_RESIDUAL: f64 = 1e-6;

/// A vector indexed by the archimedean places of l whose entries sum to zero
/// over each fiber.
#[derive(Debug, Clone, PartialEq)]
pub struct BalancedSubspaceVector {
    pub coords: Vec<f64>,
    pub fiber_sums: Vec<f64>,
}

impl BalancedSubspaceVector {
    pub fn new(coords: Vec<f64>, fibers: &[PlaceFiber]) -> Self {
        let fiber_sums = fibers.iter().map(|f| f.members.iter().map(|w| coords[w.index]).sum()).collect();
        BalancedSubspaceVector { coords, fiber_sums }
    }

    pub fn is_balanced(&self) -> bool {
        self.fiber_sums.iter().all(|s| s.abs() <= TOLERANCE)
    }
}

/// `z_w = |W_v|^{-1} Σ_{x|v} log|μ|_x − log|μ|_w`.
pub fn balance_vector(mu: &FieldElement, sys: &RelativeUnitSystem) -> Result<BalancedSubspaceVector> {
    if mu.is_zero() {
        return Err(Error::LogOfZero);
    }
    let logs = archimedean_log_vector(sys.tower(), mu)?;
    let mut z = vec![0.0; logs.len()];
    for fiber in sys.fibers() {
        let mean = fiber.members.iter().map(|w| logs[w.index]).sum::<f64>() / fiber.members.len() as f64;
        for w in &fiber.members {
            z[w.index] = mean - logs[w.index];
        }
    }
    let z = BalancedSubspaceVector::new(z, sys.fibers());
    if !z.is_balanced() {
        return Err(Error::internal("balancing vector leaves the fiber-sum subspace"));
    }
    Ok(z)
}

/// Rounds to the nearest integer, exact halves toward zero.
pub fn round_half_toward_zero(u: f64) -> i64 {
    let t = u.trunc();
    if ((u - t).abs() - 0.5).abs() < 1e-12 {
        t as i64
    } else {
        u.round() as i64
    }
}

/// Solves `log_matrix · u = z`, rounds `u` to `m` and returns
/// `γ = Π ε_j^{m_j}` with `u` and `m`.
pub fn round_to_unit(
    z: &BalancedSubspaceVector,
    sys: &RelativeUnitSystem,
) -> Result<(FieldElement, Vec<f64>, Vec<i64>)> {
    if !z.is_balanced() {
        return Err(Error::NotInSpan);
    }
    let (u, residual) = realmat::least_squares(sys.log_matrix(), &z.coords).ok_or(Error::NotInSpan)?;
    if residual.is_nan() || residual > SPAN_RESIDUAL {
        return Err(Error::NotInSpan);
    }
    let m: Vec<i64> = u.iter().map(|&x| round_half_toward_zero(x)).collect();
    let gamma = sys.unit_power(&m)?;
    Ok((gamma, u, m))
}

/// `Σ_w |log|γ|_w − z_w|`, bounded by `Σ h(ε_j)` for the rounded `γ`.
pub fn discrepancy(sys: &RelativeUnitSystem, gamma: &FieldElement, z: &BalancedSubspaceVector) -> Result<f64> {
    let logs = archimedean_log_vector(sys.tower(), gamma)?;
    Ok(logs.iter().zip(&z.coords).map(|(a, b)| (a - b).abs()).sum())
}

/// `Σ_v Σ_{w|v} |log|x|_w − |W_v|^{-1} Σ_{y|v} log|x|_y|`.
pub fn fiber_deviation(sys: &RelativeUnitSystem, x: &FieldElement) -> Result<f64> {
    let logs = archimedean_log_vector(sys.tower(), x)?;
    let mut total = 0.0;
    for fiber in sys.fibers() {
        let mean = fiber.members.iter().map(|w| logs[w.index]).sum::<f64>() / fiber.members.len() as f64;
        total += fiber.members.iter().map(|w| (logs[w.index] - mean).abs()).sum::<f64>();
    }
    Ok(total)
}

/// Both sides of `h(μ) = h(β)/e` for a tower without relative units.
#[derive(Debug, Clone, PartialEq)]
pub struct CmIdentity {
    pub h_mu: f64,
    pub h_beta_over_e: f64,
    pub equal: bool,
}

/// `ζ` with `Norm_{l/k}(μ) = ζβ`, if `μ` solves the equation.
pub fn torsion_factor(mu: &FieldElement, beta: &FieldElement, sys: &RelativeUnitSystem) -> Result<Option<FieldElement>> {
    let k = sys.tower().k();
    if mu.is_zero() {
        return Ok(None);
    }
    let zeta = k.div(&sys.module().relative_norm(mu)?, beta)?;
    Ok(sys.is_k_torsion(&zeta).then_some(zeta))
}

fn check_beta(beta: &FieldElement, sys: &RelativeUnitSystem) -> Result<()> {
    if beta.owner() != FieldTag::K {
        return Err(Error::CrossField);
    }
    if beta.is_zero() {
        return Err(Error::input("beta must be nonzero"));
    }
    if !sys.tower().k().is_integral(beta) {
        return Err(Error::input("beta must be an algebraic integer of k"));
    }
    Ok(())
}

pub fn cm_height_identity(mu: &FieldElement, beta: &FieldElement, sys: &RelativeUnitSystem) -> Result<CmIdentity> {
    if sys.rank() != 0 {
        return Err(Error::input("the height identity needs r(l/k) = 0"));
    }
    check_beta(beta, sys)?;
    if sys.fibers().iter().any(|f| f.members.len() != 1) {
        return Err(Error::NotCm);
    }
    if torsion_factor(mu, beta, sys)?.is_none() {
        return Err(Error::NotASolution);
    }
    let tower = sys.tower();
    let h_mu = weil_height(tower, mu)?;
    let h_beta_over_e = weil_height(tower, beta)? / tower.e() as f64;
    Ok(CmIdentity { h_mu, h_beta_over_e, equal: (h_mu - h_beta_over_e).abs() < TOLERANCE })
}

/// Trace of one reduction.
#[derive(Debug, Clone)]
pub struct ReductionReport {
    pub mu_in: FieldElement,
    pub beta: FieldElement,
    /// `ζ` with `Norm(μ_in) = ζβ`.
    pub zeta: FieldElement,
    pub gamma: FieldElement,
    pub mu_out: FieldElement,
    pub z: BalancedSubspaceVector,
    pub u: Vec<f64>,
    pub m: Vec<i64>,
    /// `γ` was multiplied by −1 to make the last nonzero ℤ-coordinate of
    /// `μ_out` positive.
    pub sign_flipped: bool,
    pub height_in: f64,
    pub height_out: f64,
    pub bound: f64,
    /// `ζ′` with `Norm(μ_out) = ζ′β`.
    pub zeta_prime: FieldElement,
    pub bound_satisfied: bool,
    pub cm_identity: Option<CmIdentity>,
}

/// `½ Σ h(ε_j) + h(β)/e`.
pub fn height_bound(beta: &FieldElement, sys: &RelativeUnitSystem) -> Result<f64> {
    let tower = sys.tower();
    Ok(0.5 * sys.height_sum() + weil_height(tower, beta)? / tower.e() as f64)
}

pub fn reduce_solution(mu: &FieldElement, beta: &FieldElement, sys: &RelativeUnitSystem) -> Result<ReductionReport> {
    let tower = sys.tower();
    let (l, k) = (tower.l(), tower.k());
    if mu.owner() != FieldTag::L {
        return Err(Error::CrossField);
    }
    check_beta(beta, sys)?;
    let module = sys.module();
    if module.int_coords(mu).is_none() {
        return Err(Error::OutsideModule);
    }
    let zeta = torsion_factor(mu, beta, sys)?.ok_or(Error::NotASolution)?;
    let height_in = weil_height(tower, mu)?;
    let bound = height_bound(beta, sys)?;

    let (gamma, z, u, m, cm_identity) = if sys.rank() == 0 {
        let cm = cm_height_identity(mu, beta, sys)?;
        let z = BalancedSubspaceVector::new(vec![0.0; archimedean_log_vector(tower, mu)?.len()], sys.fibers());
        (l.one(), z, Vec::new(), Vec::new(), Some(cm))
    } else {
        let z = balance_vector(mu, sys)?;
        let (gamma, u, m) = round_to_unit(&z, sys)?;
        (gamma, z, u, m, None)
    };

    let mut gamma = gamma;
    let mut mu_out = l.mul(&gamma, mu)?;
    let coords = module
        .int_coords(&mu_out)
        .ok_or_else(|| Error::Verification("reduced element left the module".into()))?;
    let sign_flipped = coords.iter().rev().find(|c| c.sign() != Sign::NoSign).is_some_and(|c| c.sign() == Sign::Minus);
    if sign_flipped {
        gamma = l.neg(&gamma);
        mu_out = l.neg(&mu_out);
    }
    let zeta_prime = k.div(&module.relative_norm(&mu_out)?, beta)?;
    if !sys.is_k_torsion(&zeta_prime) {
        return Err(Error::Verification("norm of the reduced element is not a torsion multiple of beta".into()));
    }
    let height_out = weil_height(tower, &mu_out)?;
    let bound_satisfied = height_out <= bound + TOLERANCE;
    if !bound_satisfied {
        return Err(Error::BoundViolated { height: height_out, bound });
    }
    Ok(ReductionReport {
        mu_in: mu.clone(),
        beta: beta.clone(),
        zeta,
        gamma,
        mu_out,
        z,
        u,
        m,
        sign_flipped,
        height_in,
        height_out,
        bound,
        zeta_prime,
        bound_satisfied,
        cm_identity,
    })
}

/// Outcome of a batch of randomized inequality checks.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialSummary {
    pub trials: usize,
    pub failures: usize,
    /// Largest `lhs − Σ h(ε_j)` seen.
    pub worst_excess: f64,
}

impl TrialSummary {
    fn record(&mut self, lhs: f64, rhs: f64) {
        self.trials += 1;
        let excess = lhs - rhs;
        if excess > TOLERANCE {
            self.failures += 1;
        }
        if self.trials == 1 || excess > self.worst_excess {
            self.worst_excess = excess;
        }
    }

    fn empty() -> Self {
        TrialSummary { trials: 0, failures: 0, worst_excess: f64::NEG_INFINITY }
    }
}

/// Random `z ∈ D` built as real combinations of the unit log columns; the
/// rounded `γ` must satisfy `Σ_w |log|γ|_w − z_w| ≤ Σ h(ε_j)`.
pub fn rounding_trials(sys: &RelativeUnitSystem, trials: usize, seed: u64) -> Result<TrialSummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = TrialSummary::empty();
    if sys.rank() == 0 {
        return Ok(out);
    }
    let rhs = sys.height_sum();
    for _ in 0..trials {
        let c: Vec<f64> = (0..sys.rank()).map(|_| rng.gen_range(-6.0..6.0)).collect();
        let coords = sys.log_matrix().iter().map(|row| row.iter().zip(&c).map(|(a, b)| a * b).sum()).collect();
        let z = BalancedSubspaceVector::new(coords, sys.fibers());
        let (gamma, _, _) = round_to_unit(&z, sys)?;
        out.record(discrepancy(sys, &gamma, &z)?, rhs);
    }
    Ok(out)
}

/// Random nonzero module elements `μ`; after balancing and rounding, the
/// fiber deviation of `γμ` must be at most `Σ h(ε_j)`.
pub fn balancing_trials(sys: &RelativeUnitSystem, trials: usize, bound: i64, seed: u64) -> Result<TrialSummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = TrialSummary::empty();
    if sys.rank() == 0 {
        return Ok(out);
    }
    let module = sys.module();
    let l = sys.tower().l();
    let rhs = sys.height_sum();
    while out.trials < trials {
        let c: Vec<BigInt> = (0..module.rank()).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect();
        let mu = module.element(&c);
        if mu.is_zero() {
            continue;
        }
        let z = balance_vector(&mu, sys)?;
        let (gamma, _, _) = round_to_unit(&z, sys)?;
        out.record(fiber_deviation(sys, &l.mul(&gamma, &mu)?)?, rhs);
    }
    Ok(out)
}

#[cfg(test)]
mod tests;

//! The relative unit group `E_{l/k}(M)` and its rank certificate.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::module::{coefficient_ring, is_module_unit, least_power_in_ring, CoefficientRing, FullModule};
use super::torsion::{is_torsion, torsion_units};
use crate::error::{Error, Result};
use crate::number_field::{FieldElement, FieldTag, FieldTower, NumberField};
use crate::places_heights::{archimedean_log_vector, place_fibers, weil_height, PlaceFiber};
use crate::rational_core::integer_kernel;
use crate::rational_core::realmat;

/// Cap on the exponent searched when pushing a unit into `O_M^×`.
pub const POWER_SEARCH_CAP: u32 = 10_000;

const RANK_TOL: f64 = 1e-9;

/// Independent relative units `ε_1..ε_s` of `M` with their log matrix.
#[derive(Debug, Clone)]
pub struct RelativeUnitSystem {
    module: FullModule,
    ring: CoefficientRing,
    epsilons: Vec<FieldElement>,
    /// Rows are the archimedean places of l, columns the `ε_j`.
    log_matrix: Vec<Vec<f64>>,
    heights: Vec<f64>,
    torsion_k: Vec<FieldElement>,
    fibers: Vec<PlaceFiber>,
    ranks: (usize, usize, usize),
}

impl RelativeUnitSystem {
    pub fn module(&self) -> &FullModule {
        &self.module
    }

    pub fn tower(&self) -> &FieldTower {
        self.module.tower()
    }

    pub fn ring(&self) -> &CoefficientRing {
        &self.ring
    }

    pub fn epsilons(&self) -> &[FieldElement] {
        &self.epsilons
    }

    pub fn log_matrix(&self) -> &[Vec<f64>] {
        &self.log_matrix
    }

    /// `h(ε_j)`.
    pub fn heights(&self) -> &[f64] {
        &self.heights
    }

    pub fn height_sum(&self) -> f64 {
        self.heights.iter().sum()
    }

    pub fn torsion_k(&self) -> &[FieldElement] {
        &self.torsion_k
    }

    pub fn fibers(&self) -> &[PlaceFiber] {
        &self.fibers
    }

    /// `(r(l), r(k), r(l/k))`.
    pub fn ranks(&self) -> (usize, usize, usize) {
        self.ranks
    }

    pub fn rank(&self) -> usize {
        self.epsilons.len()
    }

    /// `Π ε_j^{m_j}`, exactly.
    pub fn unit_power(&self, m: &[i64]) -> Result<FieldElement> {
        let l = self.tower().l();
        let mut acc = l.one();
        for (eps, &mj) in self.epsilons.iter().zip(m) {
            if mj != 0 {
                acc = l.mul(&acc, &l.pow(eps, mj)?)?;
            }
        }
        Ok(acc)
    }

    /// Whether `x ∈ k` is one of the listed roots of unity.
    pub fn is_k_torsion(&self, x: &FieldElement) -> bool {
        self.torsion_k.iter().any(|z| z == x)
    }
}

fn log_matrix_of(tower: &FieldTower, units: &[FieldElement]) -> Result<Vec<Vec<f64>>> {
    let cols = units.iter().map(|u| archimedean_log_vector(tower, u)).collect::<Result<Vec<_>>>()?;
    let rows = cols.first().map_or_else(|| places_count(tower, units), Vec::len);
    Ok((0..rows).map(|r| cols.iter().map(|c| c[r]).collect()).collect())
}

fn places_count(tower: &FieldTower, units: &[FieldElement]) -> usize {
    let tag = units.first().map_or(FieldTag::L, FieldElement::owner);
    crate::places_heights::archimedean_places(tower, tag).len()
}

fn check_unit_list(tower: &FieldTower, field: &NumberField, units: &[FieldElement], tag: FieldTag) -> Result<()> {
    if units.iter().any(|u| u.owner() != tag) {
        return Err(Error::CrossField);
    }
    for u in units {
        if !field.is_unit(u) {
            return Err(Error::UnitData);
        }
    }
    let r = field.unit_rank();
    let rank = if units.is_empty() { 0 } else { realmat::rank(&log_matrix_of(tower, units)?, RANK_TOL) };
    if units.len() != r || rank != r {
        return Err(Error::DependentUnits);
    }
    Ok(())
}

/// Writes `x` (a unit of k) as `ζ Π v_j^{a_j}` modulo torsion with rational
/// exponents of small denominator, verified exactly. Returns the exponents
/// scaled to a common denominator together with that denominator.
fn express_in_k_units(tower: &FieldTower, x: &FieldElement, units_k: &[FieldElement]) -> Result<(Vec<BigInt>, i64)> {
    let k = tower.k();
    if units_k.is_empty() {
        return if is_torsion(k, x)? { Ok((Vec::new(), 1)) } else { Err(Error::UnitData) };
    }
    let a = log_matrix_of(tower, units_k)?;
    let y = archimedean_log_vector(tower, x)?;
    let (u, residual) = realmat::least_squares(&a, &y).ok_or(Error::UnitData)?;
    if residual > 1e-6 {
        return Err(Error::UnitData);
    }
    for den in 1..=64i64 {
        let scaled: Vec<f64> = u.iter().map(|v| v * den as f64).collect();
        if scaled.iter().any(|s| (s - s.round()).abs() > 1e-6) {
            continue;
        }
        let ints: Vec<i64> = scaled.iter().map(|s| s.round() as i64).collect();
        // x^den / Π v_j^{ints_j} must be torsion
        let mut q = k.pow(x, den)?;
        for (v, &e) in units_k.iter().zip(&ints) {
            q = k.div(&q, &k.pow(v, e)?)?;
        }
        if is_torsion(k, &q)? {
            return Ok((ints.into_iter().map(BigInt::from).collect(), den));
        }
    }
    Err(Error::UnitData)
}

/// Builds `ε_1..ε_s ∈ E_{l/k}(M)` from independent units of l and k.
pub fn relative_units(m: &FullModule, units_l: &[FieldElement], units_k: &[FieldElement]) -> Result<RelativeUnitSystem> {
    let tower = m.tower();
    let (l, k) = (tower.l(), tower.k());
    check_unit_list(tower, l, units_l, FieldTag::L)?;
    check_unit_list(tower, k, units_k, FieldTag::K)?;
    let (rl, rk) = (l.unit_rank(), k.unit_rank());

    // exponent matrix of the norm map: column i expresses Norm(u_i)
    let mut cols: Vec<(Vec<BigInt>, i64)> = Vec::with_capacity(rl);
    for u in units_l {
        cols.push(express_in_k_units(tower, &m.relative_norm(u)?, units_k)?);
    }
    let common = cols.iter().fold(1i64, |acc, (_, d)| num_integer::lcm(acc, *d));
    let matrix: Vec<Vec<BigInt>> = (0..rk)
        .map(|j| cols.iter().map(|(v, d)| &v[j] * BigInt::from(common / d)).collect())
        .collect();
    let kernel = integer_kernel(&matrix, rl);
    if kernel.len() != rl - rk {
        return Err(Error::RankCertificate(format!(
            "norm map kernel has rank {} but r(l) - r(k) = {}",
            kernel.len(),
            rl - rk
        )));
    }

    let mut epsilons = Vec::with_capacity(kernel.len());
    for v in &kernel {
        let mut eta = l.one();
        for (u, e) in units_l.iter().zip(v) {
            let e = e.to_i64().ok_or_else(|| Error::internal("kernel exponent overflow"))?;
            eta = l.mul(&eta, &l.pow(u, e)?)?;
        }
        if !is_torsion(k, &m.relative_norm(&eta)?)? {
            return Err(Error::internal("kernel element has non-torsion norm"));
        }
        let n = least_power_in_ring(m, &eta, POWER_SEARCH_CAP)?;
        epsilons.push(l.pow(&eta, n as i64)?);
    }
    from_epsilons(m.clone(), epsilons)
}

/// Validates user-supplied relative units and assembles the system.
pub fn from_epsilons(m: FullModule, epsilons: Vec<FieldElement>) -> Result<RelativeUnitSystem> {
    let tower = m.tower();
    let (l, k) = (tower.l(), tower.k());
    let ring = coefficient_ring(&m)?;
    let torsion_k = torsion_units(tower, FieldTag::K)?;
    for eps in &epsilons {
        if eps.owner() != FieldTag::L {
            return Err(Error::CrossField);
        }
        if !is_module_unit(&m, &ring, eps)? {
            return Err(Error::UnitData);
        }
        let n = m.relative_norm(eps)?;
        if !torsion_k.contains(&n) {
            return Err(Error::UnitData);
        }
    }
    let log_matrix = log_matrix_of(tower, &epsilons)?;
    let heights = epsilons.iter().map(|e| weil_height(tower, e)).collect::<Result<Vec<_>>>()?;
    let ranks = (l.unit_rank(), k.unit_rank(), l.unit_rank() - k.unit_rank());
    let sys = RelativeUnitSystem {
        fibers: place_fibers(tower),
        module: m,
        ring,
        epsilons,
        log_matrix,
        heights,
        torsion_k,
        ranks,
    };
    verify_rank(&sys)?;
    Ok(sys)
}

/// Recomputes `(r(l), r(k), r(l/k))` from place counts and checks it
/// against the system: the number of `ε_j`, the numerical rank of the log
/// matrix, and vanishing fiber sums of every column.
pub fn verify_rank(sys: &RelativeUnitSystem) -> Result<(usize, usize, usize)> {
    let tower = sys.tower();
    let pl = crate::places_heights::archimedean_places(tower, FieldTag::L).len();
    let pk = crate::places_heights::archimedean_places(tower, FieldTag::K).len();
    let (rl, rk) = (pl - 1, pk - 1);
    if rl < rk {
        return Err(Error::RankCertificate("r(l) < r(k)".into()));
    }
    let s = rl - rk;
    if (rl, rk, s) != sys.ranks {
        return Err(Error::RankCertificate("rank triple disagrees with place counts".into()));
    }
    if sys.epsilons.len() != s {
        return Err(Error::RankCertificate(format!("{} relative units supplied, r(l/k) = {s}", sys.epsilons.len())));
    }
    let numeric = if s == 0 { 0 } else { realmat::rank(&sys.log_matrix, RANK_TOL) };
    if numeric != s {
        return Err(Error::RankCertificate(format!("log matrix has numerical rank {numeric}, expected {s}")));
    }
    for j in 0..s {
        for fiber in &sys.fibers {
            let sum: f64 = fiber.members.iter().map(|w| sys.log_matrix[w.index][j]).sum();
            if sum.abs() > 1e-9 {
                return Err(Error::RankCertificate(format!("fiber sum {sum:.3e} for unit {}", j + 1)));
            }
        }
    }
    Ok((rl, rk, s))
}

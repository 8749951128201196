//! The norm form `F(x) = Norm_{l/k}(Σ ω_i x_i)`, its integral solutions of
//! bounded size, and their classes under `E_{l/k}(M)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::module_order::{torsion_units, FullModule, RelativeUnitSystem};
use crate::number_field::{FieldElement, FieldTag, NumberField};
use crate::reduction::{reduce_solution, ReductionReport};

/// Largest number of box points `enumerate_solutions` will visit.
pub const MAX_BOX_POINTS: u128 = 100_000_000;

type Monomial = Vec<u32>;

/// A homogeneous form over k, exponent vectors mapped to coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct NormFormPoly {
    omega: Vec<FieldElement>,
    terms: BTreeMap<Monomial, FieldElement>,
}

impl NormFormPoly {
    pub fn terms(&self) -> &BTreeMap<Monomial, FieldElement> {
        &self.terms
    }

    pub fn omega(&self) -> &[FieldElement] {
        &self.omega
    }

    pub fn variables(&self) -> usize {
        self.omega.len()
    }

    /// Total degree, which is `e` for a nonzero form.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.iter().sum()).max().unwrap_or(0)
    }

    pub fn coefficient(&self, monomial: &[u32]) -> Option<&FieldElement> {
        self.terms.get(monomial)
    }

    /// `F(x)` for `x ∈ k^e`, exactly.
    pub fn evaluate(&self, k: &NumberField, x: &[FieldElement]) -> Result<FieldElement> {
        if x.len() != self.variables() {
            return Err(Error::input(format!("norm form takes {} arguments, got {}", self.variables(), x.len())));
        }
        let mut acc = k.zero();
        for (mono, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &a) in x.iter().zip(mono) {
                if a > 0 {
                    t = k.mul(&t, &k.pow(xi, a as i64)?)?;
                }
            }
            acc = k.add(&acc, &t)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for NormFormPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest monomials first, so x1^2 precedes x2^2
        for (n, (mono, c)) in self.terms.iter().rev().enumerate() {
            let vars: Vec<String> = mono
                .iter()
                .enumerate()
                .filter(|(_, &a)| a > 0)
                .map(|(i, &a)| if a == 1 { format!("x{}", i + 1) } else { format!("x{}^{a}", i + 1) })
                .collect();
            let vars = vars.join("*");
            let (neg, body) = match c.as_rational() {
                Some(q) => {
                    let s = crate::rational_core::format_rational(&q.abs());
                    (q.is_negative(), if s == "1" && !vars.is_empty() { String::new() } else { s })
                }
                None => (false, format!("({c})")),
            };
            let sep = match (n, neg) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            };
            let star = if body.is_empty() || vars.is_empty() { "" } else { "*" };
            write!(f, "{sep}{body}{star}{vars}")?;
        }
        Ok(())
    }
}

type KPoly = BTreeMap<Monomial, FieldElement>;

fn kpoly_add_assign(k: &NumberField, acc: &mut KPoly, p: &KPoly) -> Result<()> {
    for (m, c) in p {
        let s = match acc.get(m) {
            Some(a) => k.add(a, c)?,
            None => c.clone(),
        };
        if s.is_zero() {
            acc.remove(m);
        } else {
            acc.insert(m.clone(), s);
        }
    }
    Ok(())
}

fn kpoly_mul(k: &NumberField, a: &KPoly, b: &KPoly) -> Result<KPoly> {
    let mut out = KPoly::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let m: Monomial = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
            let mut t = KPoly::new();
            t.insert(m, k.mul(ca, cb)?);
            kpoly_add_assign(k, &mut out, &t)?;
        }
    }
    Ok(out)
}

/// Determinant of the generic multiplication matrix `Σ x_i A(ω_i)` by
/// Laplace expansion along rows, memoized on the set of used columns.
pub fn norm_form_poly(m: &FullModule) -> Result<NormFormPoly> {
    let tower = m.tower();
    let k = tower.k();
    let e = tower.e();
    let mats = m.omega().iter().map(|w| m.basis().k_matrix(tower, w)).collect::<Result<Vec<_>>>()?;
    let mut generic = vec![vec![KPoly::new(); e]; e];
    for (i, a) in mats.iter().enumerate() {
        let mut mono = vec![0u32; e];
        mono[i] = 1;
        for r in 0..e {
            for c in 0..e {
                if !a[r][c].is_zero() {
                    generic[r][c].insert(mono.clone(), a[r][c].clone());
                }
            }
        }
    }
    let mut memo: HashMap<u64, KPoly> = HashMap::new();
    let terms = laplace(k, &generic, 0, 0, &mut memo)?;
    Ok(NormFormPoly { omega: m.omega().to_vec(), terms })
}

fn laplace(k: &NumberField, a: &[Vec<KPoly>], row: usize, used: u64, memo: &mut HashMap<u64, KPoly>) -> Result<KPoly> {
    let e = a.len();
    if row == e {
        let mut one = KPoly::new();
        one.insert(vec![0; a.first().map_or(0, |r| r.len())], k.one());
        return Ok(one);
    }
    if let Some(p) = memo.get(&used) {
        return Ok(p.clone());
    }
    let mut acc = KPoly::new();
    let mut sign_neg = false;
    for c in 0..e {
        if used & (1 << c) != 0 {
            continue;
        }
        if !a[row][c].is_empty() {
            let minor = laplace(k, a, row + 1, used | (1 << c), memo)?;
            let mut t = kpoly_mul(k, &a[row][c], &minor)?;
            if sign_neg {
                t = t.into_iter().map(|(m, v)| (m, k.neg(&v))).collect();
            }
            kpoly_add_assign(k, &mut acc, &t)?;
        }
        sign_neg = !sign_neg;
    }
    memo.insert(used, acc.clone());
    Ok(acc)
}

/// Which right-hand sides `ζβ` count as solutions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ZetaMode {
    /// Any root of unity of k.
    #[default]
    AnyTorsion,
    /// Only `ζ = 1`.
    One,
}

fn check_beta(k: &NumberField, beta: &FieldElement) -> Result<()> {
    if beta.owner() != FieldTag::K {
        return Err(Error::CrossField);
    }
    if beta.is_zero() {
        return Err(Error::input("beta must be nonzero"));
    }
    if !k.is_integral(beta) {
        return Err(Error::input("beta must be an algebraic integer of k"));
    }
    Ok(())
}

/// Forms `μ = Σ ω_i ν_i` from the ℤ-coordinates `ν` (index `i * f + j` for
/// `ψ_j`) and returns `ζ` if `Norm_{l/k}(μ) = ζβ` for an allowed root of
/// unity.
pub fn check_solution(
    nu: &[BigInt],
    beta: &FieldElement,
    m: &FullModule,
    torsion_k: &[FieldElement],
    mode: ZetaMode,
) -> Result<Option<FieldElement>> {
    if nu.len() != m.rank() {
        return Err(Error::input(format!("expected {} coordinates, got {}", m.rank(), nu.len())));
    }
    if nu.iter().all(Zero::is_zero) {
        return Err(Error::ZeroCandidate);
    }
    let k = m.tower().k();
    check_beta(k, beta)?;
    let zeta = k.div(&m.relative_norm(&m.element(nu))?, beta)?;
    let ok = match mode {
        ZetaMode::AnyTorsion => torsion_k.contains(&zeta),
        ZetaMode::One => zeta.is_one(),
    };
    Ok(ok.then_some(zeta))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub coords: Vec<BigInt>,
    pub mu: FieldElement,
    pub zeta: FieldElement,
}

#[derive(Debug, Clone)]
pub struct SolutionClass {
    /// Indices into `SolutionSet::solutions`.
    pub members: Vec<usize>,
    pub representative: ReductionReport,
}

#[derive(Debug, Clone)]
pub struct SolutionSet {
    pub beta: FieldElement,
    pub solutions: Vec<Solution>,
    pub classes: Vec<SolutionClass>,
    /// Every ℤ-coordinate was searched in `[-search_box, search_box]`.
    pub search_box: u64,
    pub zeta_mode: ZetaMode,
}

/// All nonzero `ν` in the coordinate box `|ν_t| ≤ coeff_bound` with
/// `F(ν) = ζβ`. Candidates pass an `f64` absolute-norm filter before the
/// exact check.
pub fn enumerate_solutions(m: &FullModule, beta: &FieldElement, coeff_bound: u64, mode: ZetaMode) -> Result<SolutionSet> {
    let tower = m.tower();
    let (k, l) = (tower.k(), tower.l());
    check_beta(k, beta)?;
    if coeff_bound == 0 {
        return Err(Error::input("coeff_bound must be positive"));
    }
    let n = m.rank();
    let side = 2 * coeff_bound as u128 + 1;
    let total = (0..n).try_fold(1u128, |acc, _| acc.checked_mul(side).filter(|&t| t <= MAX_BOX_POINTS));
    let total = total.ok_or(Error::SearchBoxTooLarge)? as u64;
    let torsion_k = torsion_units(tower, FieldTag::K)?;

    let target = k.norm(beta).abs().to_f64().ok_or_else(|| Error::precision("norm of beta overflows f64"))?;
    let emb: Vec<Vec<Complex64>> = (0..l.degree())
        .map(|s| {
            m.z_basis()
                .iter()
                .map(|b| {
                    let (re, im) = l.embed_f64(b, s);
                    Complex64::new(re, im)
                })
                .collect()
        })
        .collect();
    let bound = coeff_bound as i64;
    let decode = |mut idx: u64| -> Vec<i64> {
        (0..n)
            .map(|_| {
                let d = (idx % side as u64) as i64;
                idx /= side as u64;
                d - bound
            })
            .collect()
    };
    let candidates: Vec<Vec<i64>> = (0..total)
        .into_par_iter()
        .filter_map(|idx| {
            let c = decode(idx);
            if c.iter().all(|&x| x == 0) {
                return None;
            }
            let (mut prod, mut rel) = (1.0f64, 0.0f64);
            for row in &emb {
                let (mut v, mut mag) = (Complex64::new(0.0, 0.0), 0.0f64);
                for (x, b) in c.iter().zip(row) {
                    v += b * (*x as f64);
                    mag += b.norm() * (x.abs() as f64);
                }
                let a = v.norm();
                prod *= a;
                rel += 1e-13 * mag / a.max(f64::MIN_POSITIVE);
            }
            ((prod - target).abs() <= target * (1e-6 + 8.0 * rel)).then_some(c)
        })
        .collect();

    let mut solutions = Vec::new();
    for c in candidates {
        let nu: Vec<BigInt> = c.into_iter().map(BigInt::from).collect();
        if let Some(zeta) = check_solution(&nu, beta, m, &torsion_k, mode)? {
            solutions.push(Solution { mu: m.element(&nu), coords: nu, zeta });
        }
    }
    solutions.sort_by(|a, b| a.coords.cmp(&b.coords));
    Ok(SolutionSet { beta: beta.clone(), solutions, classes: Vec::new(), search_box: coeff_bound, zeta_mode: mode })
}

/// Whether `b = γa` for some `γ ∈ E_{l/k}(M)`: the quotient must be a unit of
/// `O_M` whose relative norm is a root of unity of k.
pub fn equivalent(sys: &RelativeUnitSystem, a: &FieldElement, b: &FieldElement) -> Result<bool> {
    let l = sys.tower().l();
    if a.is_zero() || b.is_zero() {
        return Ok(a.is_zero() && b.is_zero());
    }
    let q = l.div(b, a)?;
    let ring = sys.ring();
    if !ring.contains(&q) || !ring.contains(&l.inv(&q)?) {
        return Ok(false);
    }
    Ok(sys.is_k_torsion(&sys.tower().relative_norm(&q)?))
}

/// Splits the solutions into orbits under `E_{l/k}(M)`, each with its
/// reduced representative.
pub fn partition_classes(mut set: SolutionSet, sys: &RelativeUnitSystem) -> Result<SolutionSet> {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, s) in set.solutions.iter().enumerate() {
        let mut placed = false;
        for class in classes.iter_mut() {
            if equivalent(sys, &set.solutions[class[0]].mu, &s.mu)? {
                class.push(i);
                placed = true;
                break;
            }
        }
        if !placed {
            classes.push(vec![i]);
        }
    }
    set.classes = classes
        .into_iter()
        .map(|members| {
            let representative = reduce_solution(&set.solutions[members[0]].mu, &set.beta, sys)?;
            Ok(SolutionClass { members, representative })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(set)
}

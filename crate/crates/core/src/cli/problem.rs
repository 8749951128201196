//! Problem files: a JSON document describing the tower, the module and the
//! equation. Rationals are strings (`"p/q"`), elements are either coefficient
//! lists in ascending powers of the generator or expression strings.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::expr::{parse_expr, Binding, PHI_NAMES, THETA_NAMES};
use crate::error::{Error, Result};
use crate::module_order::{
    build_module, from_epsilons, real_quadratic_fundamental_unit, relative_units, FullModule, RelativeUnitSystem,
};
use crate::norm_form::ZetaMode;
use crate::number_field::{build_tower, FieldElement, FieldTag, FieldTower, NumberField};
use crate::rational_core::{parse_rational, RationalPoly};

pub const DEFAULT_PRECISION_BITS: usize = 128;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementSpec {
    Coeffs(Vec<String>),
    Expr(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseField {
    pub minpoly: Vec<String>,
    pub integral_basis: Vec<ElementSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Extension {
    #[serde(rename = "minpoly_over_Q")]
    pub minpoly_over_q: Vec<String>,
    pub k_generator_in_l: ElementSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZetaModeSpec {
    AnyTorsion,
    One,
}

impl From<ZetaModeSpec> for ZetaMode {
    fn from(z: ZetaModeSpec) -> Self {
        match z {
            ZetaModeSpec::AnyTorsion => ZetaMode::AnyTorsion,
            ZetaModeSpec::One => ZetaMode::One,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub base_field: BaseField,
    pub extension: Extension,
    pub module_basis: Vec<ElementSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub units_l: Option<Vec<ElementSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub units_k: Option<Vec<ElementSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relative_units: Option<Vec<ElementSpec>>,
    pub beta: ElementSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<ElementSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision_bits: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeta_mode: Option<ZetaModeSpec>,
}

impl ProblemFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::input(format!("problem file: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::input(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem files always serialize")
    }

    /// Builds the tower and module. `precision` overrides the file.
    pub fn build(&self, precision: Option<usize>) -> Result<Instance> {
        let p = precision.or(self.precision_bits).unwrap_or(DEFAULT_PRECISION_BITS);
        if p < 32 {
            return Err(Error::input("precision_bits must be at least 32"));
        }
        let f_k = rational_poly(&self.base_field.minpoly)?;
        let f_l = rational_poly(&self.extension.minpoly_over_q)?;
        let deg_k = f_k.degree().ok_or_else(|| Error::input("base minpoly is zero"))?;
        let deg_l = f_l.degree().ok_or_else(|| Error::input("extension minpoly is zero"))?;
        let phi_vars: Vec<Binding> = vec![(PHI_NAMES, RationalPoly::x())];
        let theta_vars: Vec<Binding> = vec![(THETA_NAMES, RationalPoly::x())];
        let psi = self
            .base_field
            .integral_basis
            .iter()
            .map(|s| element_poly(s, &phi_vars, deg_k))
            .collect::<Result<Vec<_>>>()?;
        let phi = element_poly(&self.extension.k_generator_in_l, &theta_vars, deg_l)?;
        let tower = Arc::new(build_tower(f_k, f_l, phi.clone(), psi, p)?);
        let omega = self
            .module_basis
            .iter()
            .map(|s| Ok(tower.l().element(element_poly(s, &theta_vars, deg_l)?)))
            .collect::<Result<Vec<_>>>()?;
        if omega.len() != tower.e() {
            return Err(Error::input(format!("module_basis has {} elements, [l:k] = {}", omega.len(), tower.e())));
        }
        let module = build_module(tower.clone(), omega)?;
        Ok(Instance { problem: self.clone(), tower, module, phi, precision_bits: p })
    }
}

fn rational_poly(c: &[String]) -> Result<RationalPoly> {
    Ok(RationalPoly::new(c.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?))
}

fn element_poly(spec: &ElementSpec, vars: &[Binding], degree: usize) -> Result<RationalPoly> {
    match spec {
        ElementSpec::Coeffs(c) => {
            if c.len() > degree {
                return Err(Error::input(format!("coefficient list {c:?} longer than the field degree {degree}")));
            }
            rational_poly(c)
        }
        ElementSpec::Expr(s) => parse_expr(s, vars),
    }
}

/// A parsed problem: tower, module and the raw file.
#[derive(Debug, Clone)]
pub struct Instance {
    pub problem: ProblemFile,
    pub tower: Arc<FieldTower>,
    pub module: FullModule,
    phi: RationalPoly,
    pub precision_bits: usize,
}

impl Instance {
    /// An element of l; `φ` may appear and stands for the generator of k.
    pub fn l_element(&self, spec: &ElementSpec) -> Result<FieldElement> {
        let l = self.tower.l();
        let vars: Vec<Binding> = vec![(THETA_NAMES, RationalPoly::x()), (PHI_NAMES, self.phi.clone())];
        Ok(l.element(element_poly(spec, &vars, l.degree())?))
    }

    pub fn k_element(&self, spec: &ElementSpec) -> Result<FieldElement> {
        let k = self.tower.k();
        let vars: Vec<Binding> = vec![(PHI_NAMES, RationalPoly::x())];
        Ok(k.element(element_poly(spec, &vars, k.degree())?))
    }

    pub fn beta(&self) -> Result<FieldElement> {
        self.k_element(&self.problem.beta)
    }

    pub fn mu(&self) -> Result<FieldElement> {
        let spec = self.problem.mu.as_ref().ok_or_else(|| Error::input("problem has no mu"))?;
        self.l_element(spec)
    }

    pub fn zeta_mode(&self) -> ZetaMode {
        self.problem.zeta_mode.map(Into::into).unwrap_or_default()
    }

    /// The relative units: given directly, derived from `units_l`/`units_k`,
    /// or found automatically when each field is ℚ, imaginary quadratic or
    /// real quadratic.
    pub fn unit_system(&self) -> Result<RelativeUnitSystem> {
        if let Some(eps) = &self.problem.relative_units {
            let eps = eps.iter().map(|s| self.l_element(s)).collect::<Result<Vec<_>>>()?;
            return from_epsilons(self.module.clone(), eps);
        }
        let units_l = match &self.problem.units_l {
            Some(v) => v.iter().map(|s| self.l_element(s)).collect::<Result<Vec<_>>>()?,
            None => default_units(self.tower.l())?,
        };
        let units_k = match &self.problem.units_k {
            Some(v) => v.iter().map(|s| self.k_element(s)).collect::<Result<Vec<_>>>()?,
            None => default_units(self.tower.k())?,
        };
        relative_units(&self.module, &units_l, &units_k)
    }
}

fn default_units(field: &NumberField) -> Result<Vec<FieldElement>> {
    match field.unit_rank() {
        0 => Ok(Vec::new()),
        1 if field.degree() == 2 => Ok(vec![real_quadratic_fundamental_unit(field)?]),
        _ => {
            let which = if field.tag() == FieldTag::L { "units_l" } else { "units_k" };
            Err(Error::input(format!("{which} must be given for this field")))
        }
    }
}

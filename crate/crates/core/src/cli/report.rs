//! JSON renderings of exact elements, reals and algorithm traces.

use serde_json::{json, Value};

use crate::module_order::{FullModule, RelativeUnitSystem};
use crate::norm_form::{NormFormPoly, SolutionSet, ZetaMode};
use crate::number_field::{FieldElement, FieldTag, FieldTower};
use crate::places_heights::{archimedean_places, Place};
use crate::rational_core::format_rational;
use crate::reduction::{CmIdentity, ReductionReport, TrialSummary};

/// A real rounded to 12 significant digits.
pub fn real(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let r: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    json!(r)
}

pub fn reals(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| real(x)).collect())
}

pub fn element(tower: &FieldTower, a: &FieldElement) -> Value {
    let field = tower.field(a.owner());
    let coeffs: Vec<String> = a.coeff_vec(field.degree()).iter().map(format_rational).collect();
    json!({ "coeffs": coeffs, "text": a.poly().to_string_in(a.owner().generator_name()) })
}

/// An element of M with its ℤ-coordinates.
pub fn module_element(m: &FullModule, a: &FieldElement) -> Value {
    let mut v = element(m.tower(), a);
    if let Some(c) = m.int_coords(a) {
        v["module_coords"] = json!(c.iter().map(ToString::to_string).collect::<Vec<_>>());
    }
    v
}

fn place(w: &Place) -> Value {
    json!({ "index": w.index, "real": w.is_real, "local_degree": w.d_w, "embedding": w.embedding })
}

pub fn tower(t: &FieldTower) -> Value {
    let field = |tag: FieldTag| {
        let f = t.field(tag);
        let r1 = f.real_embeddings();
        json!({
            "minpoly": f.minpoly().to_string_in("x"),
            "degree": f.degree(),
            "signature": [r1, (f.degree() - r1) / 2],
            "unit_rank": f.unit_rank(),
            "places": archimedean_places(t, tag).iter().map(place).collect::<Vec<_>>(),
        })
    };
    json!({
        "k": field(FieldTag::K),
        "l": field(FieldTag::L),
        "e": t.e(),
        "f": t.f(),
        "k_generator_in_l": t.phi_in_theta().to_string_in("θ"),
        "fibers": crate::places_heights::place_fibers(t)
            .iter()
            .map(|fb| json!({ "k_place": fb.v.index, "l_places": fb.members.iter().map(|w| w.index).collect::<Vec<_>>() }))
            .collect::<Vec<_>>(),
    })
}

pub fn units(sys: &RelativeUnitSystem) -> Value {
    let t = sys.tower();
    let (rl, rk, s) = sys.ranks();
    json!({
        "ranks": { "r_l": rl, "r_k": rk, "r_l_over_k": s },
        "epsilons": sys.epsilons().iter().map(|e| element(t, e)).collect::<Vec<_>>(),
        "heights": reals(sys.heights()),
        "log_matrix": sys.log_matrix().iter().map(|r| reals(r)).collect::<Vec<_>>(),
        "torsion_k": sys.torsion_k().iter().map(|z| element(t, z)).collect::<Vec<_>>(),
        "coefficient_ring": sys.ring().z_basis().iter().map(|b| element(t, b)).collect::<Vec<_>>(),
        "module_z_basis": sys.module().z_basis().iter().map(|b| element(t, b)).collect::<Vec<_>>(),
    })
}

pub fn cm_identity(c: &CmIdentity) -> Value {
    json!({ "h_mu": real(c.h_mu), "h_beta_over_e": real(c.h_beta_over_e), "equal": c.equal })
}

pub fn reduction(sys: &RelativeUnitSystem, r: &ReductionReport) -> Value {
    let t = sys.tower();
    let m = sys.module();
    json!({
        "mu_in": module_element(m, &r.mu_in),
        "beta": element(t, &r.beta),
        "zeta": element(t, &r.zeta),
        "gamma": element(t, &r.gamma),
        "mu_out": module_element(m, &r.mu_out),
        "z": { "coords": reals(&r.z.coords), "fiber_sums": reals(&r.z.fiber_sums) },
        "u": reals(&r.u),
        "m": r.m,
        "sign_flipped": r.sign_flipped,
        "height_in": real(r.height_in),
        "height_out": real(r.height_out),
        "bound": real(r.bound),
        "zeta_prime": element(t, &r.zeta_prime),
        "bound_satisfied": r.bound_satisfied,
        "cm_identity": r.cm_identity.as_ref().map(cm_identity),
    })
}

pub fn norm_form(t: &FieldTower, f: &NormFormPoly) -> Value {
    let terms: Vec<Value> = f
        .terms()
        .iter()
        .rev()
        .map(|(mono, c)| json!({ "exponents": mono, "coefficient": element(t, c) }))
        .collect();
    json!({ "text": f.to_string(), "degree": f.degree(), "terms": terms })
}

pub fn solutions(sys: &RelativeUnitSystem, set: &SolutionSet) -> Value {
    let t = sys.tower();
    let sols: Vec<Value> = set
        .solutions
        .iter()
        .map(|s| {
            json!({
                "coords": s.coords.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "mu": element(t, &s.mu),
                "zeta": element(t, &s.zeta),
            })
        })
        .collect();
    let classes: Vec<Value> = set
        .classes
        .iter()
        .map(|c| json!({ "members": c.members, "size": c.members.len(), "representative": reduction(sys, &c.representative) }))
        .collect();
    json!({
        "beta": element(t, &set.beta),
        "zeta_mode": match set.zeta_mode { ZetaMode::AnyTorsion => "any_torsion", ZetaMode::One => "one" },
        "search_box": set.search_box,
        "complete_within_box_only": true,
        "solution_count": set.solutions.len(),
        "class_count": set.classes.len(),
        "solutions": sols,
        "classes": classes,
    })
}

pub fn trials(s: &TrialSummary) -> Value {
    json!({ "trials": s.trials, "failures": s.failures, "worst_excess": real(s.worst_excess) })
}

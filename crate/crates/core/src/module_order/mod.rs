//! Full modules, coefficient rings, roots of unity and relative units.

mod module;
mod quadratic;
mod torsion;
mod units;

pub use module::{
    build_module, coefficient_ring, is_module_unit, least_power_in_ring, module_contains, CoefficientRing, FullModule,
};
pub use quadratic::real_quadratic_fundamental_unit;
pub use torsion::{is_torsion, possible_orders, torsion_units};
pub use units::{from_epsilons, relative_units, verify_rank, RelativeUnitSystem, POWER_SEARCH_CAP};

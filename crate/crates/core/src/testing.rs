//! Small towers shared by the unit tests.

use crate::number_field::{build_tower, FieldElement, FieldTower};
use crate::rational_core::rational::ratio;
use crate::rational_core::RationalPoly;

pub fn poly(c: &[i64]) -> RationalPoly {
    RationalPoly::from_ints(c)
}

/// ℚ(√2) over ℚ.
pub fn sqrt2() -> FieldTower {
    build_tower(poly(&[0, 1]), poly(&[-2, 0, 1]), poly(&[]), vec![poly(&[1])], 128).unwrap()
}

/// ℚ(i) over ℚ.
pub fn gaussian() -> FieldTower {
    build_tower(poly(&[0, 1]), poly(&[1, 0, 1]), poly(&[]), vec![poly(&[1])], 128).unwrap()
}

/// ℚ(ζ₅) over ℚ(√5).
pub fn zeta5() -> FieldTower {
    let half = RationalPoly::new(vec![ratio(1, 2), ratio(1, 2)]);
    build_tower(poly(&[-5, 0, 1]), poly(&[1, 1, 1, 1, 1]), poly(&[-1, 0, -2, -2]), vec![poly(&[1]), half], 128)
        .unwrap()
}

/// ℚ(2^{1/4}) over ℚ(√2).
pub fn quartic() -> FieldTower {
    build_tower(poly(&[-2, 0, 1]), poly(&[-2, 0, 0, 0, 1]), poly(&[0, 0, 1]), vec![poly(&[1]), poly(&[0, 1])], 128)
        .unwrap()
}

pub fn l_elt(t: &FieldTower, c: &[i64]) -> FieldElement {
    t.l().element(poly(c))
}

pub fn k_elt(t: &FieldTower, c: &[i64]) -> FieldElement {
    t.k().element(poly(c))
}

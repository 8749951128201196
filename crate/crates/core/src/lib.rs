//! Norm form equations over number-field towers ℚ ⊆ k ⊆ l.

#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod error;
pub mod module_order;
pub mod norm_form;
pub mod number_field;
pub mod places_heights;
pub mod rational_core;
pub mod reduction;

#[cfg(test)]
mod testing;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/towers.md")]
    mod towers {}
    #[doc = include_str!("../../../book/src/heights.md")]
    mod heights {}
    #[doc = include_str!("../../../book/src/modules.md")]
    mod modules {}
    #[doc = include_str!("../../../book/src/reduction.md")]
    mod reduction {}
    #[doc = include_str!("../../../book/src/norm_forms.md")]
    mod norm_forms {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}

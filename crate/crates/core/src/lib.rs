//! Numerical frame geometry on the space forms `S³_q(1)` and `H³_q(-1)` in `R⁴_v`.
//!
//! The crate is `no_std` and only needs `alloc`. IO, configuration and the
//! command-line front end live in the companion `frameforge` crate.
#![no_std]
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod congruence;
pub mod electromagnetic;
pub mod energy;
pub mod error;
pub mod fd;
pub mod fixtures;
pub mod frenet;
pub mod linalg;
pub mod metric;
pub mod space_form;

pub use error::{Error, Result};
pub use metric::{AmbientVector, CausalCharacter, MetricIndex};
pub use space_form::{FormPoint, SpaceForm};

//! Canonical t-ary trees: exact enumeration, exact finite-size distributions of
//! the height, number of distinct leaf depths, width, leaves on the last level
//! and total path length, and interval-certified asymptotic constants.

pub mod asymptotics;
pub mod bigdp;
pub mod genfun;
pub mod interval;
pub mod locallimit;
pub mod model;
pub mod series;
pub mod width;

pub use interval::{ComplexBox, Interval};
pub use model::{Arity, LevelProfile};

//! Exact algebra for the plane birational maps k_F = j_F o iota.

pub mod poly;
pub mod projmap;
pub mod tower;
pub mod picard;

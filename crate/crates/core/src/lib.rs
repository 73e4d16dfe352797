pub mod error;
pub mod gf2;
pub mod loopcalc;
pub mod geometry;
pub mod merge;
pub mod cabling;
pub mod invariants;
pub mod obstructions;
pub mod appio;

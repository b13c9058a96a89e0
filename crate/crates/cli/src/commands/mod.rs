pub mod analysis;
pub mod circuits;
pub mod eval;
pub mod gen;

pub mod analysis;
pub mod construct;
pub mod formats;
pub mod gf;
pub mod graph;
pub mod group;
pub mod hermitian;

pub mod cone;
pub mod error;
pub mod fan;
pub mod hull;
pub mod lattice;
pub mod mixed_volume;
pub mod tropical;
pub mod linalg;

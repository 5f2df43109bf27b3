pub mod error;
pub mod frames;
pub mod lattice;
pub mod morphisms;
pub mod nuclei;
pub mod constructions;
pub mod adjunctions;
pub mod cli;
pub mod random;
pub mod laws;
pub mod format;
pub mod table;
pub mod worked;

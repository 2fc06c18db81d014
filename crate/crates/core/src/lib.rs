pub mod arith;
pub mod cli;
pub mod cmforms;
pub mod exactalg;
pub mod fixtures;
pub mod heckechars;
pub mod heckeops;
pub mod lacunarity;
pub mod qseries;
pub mod quadideals;

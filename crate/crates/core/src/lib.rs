pub mod adcond;
pub mod bispectral;
pub mod diffop;
pub mod error;
pub mod families;
pub mod hyp;
pub mod linalg;
pub mod parallel;
pub mod poly;
pub mod ratfun;
pub mod rational;
mod render;
pub mod rng;
pub mod series;
pub mod verify;

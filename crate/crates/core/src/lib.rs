//! Exact cyclotomic arithmetic, cross-ratio obstructions and discrete tomography
//! of cyclotomic model sets.

pub mod cyclotomic;
pub mod enumerate;
pub mod error;
pub mod exec;
pub mod linalg;
pub mod modelset;
pub mod quadratic;
pub mod rational;
pub mod reference;
pub mod sign;
pub mod tomography;
pub mod upolygon;

pub use cyclotomic::CycNum;
pub use error::{Error, Result};
pub use exec::Exec;
pub use quadratic::QuadraticSurd;
pub use rational::Q;

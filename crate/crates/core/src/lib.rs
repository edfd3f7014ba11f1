//! Exact verification of initial degenerations of the open Grassmannian
//! Gr0(3,8) through matroidal subdivisions, tight spans and presentations of
//! thin Schubert cells.

pub mod driver;
pub mod known;
pub mod lp;
pub mod matroid;
pub mod rational;
pub mod schubert;
pub mod subdivision;
pub mod verify;
pub mod linalg;

//! Exact arithmetic on generalized Markoff surfaces
//! `x1^2 + x2^2 + x3^2 + a1 x2 x3 + a2 x1 x3 + a3 x1 x2 = s x1 x2 x3` over F_p.

pub mod cli;
pub mod conics;
pub mod delta;
pub mod enumeration;
pub mod error;
pub mod field;
pub mod obstruction;
pub mod orbits;
pub mod special;
pub mod sweep;
pub mod surface;

pub use error::{Error, Result};
pub use field::{Fp, Prime};
pub use surface::{Coord, ParamClass, SurfaceParams, Triple};

//! Legendre curves in the plane, their surfaces of revolution as framed
//! surfaces, and the singularities of both.

pub mod config;
pub mod construct;
pub mod error;
pub mod expr;
pub mod framed;
pub mod io;
pub mod jet;
pub mod legendre;
pub mod numdiff;
pub mod ode;
pub mod quad;
pub mod revolution;
pub mod singular;

pub use error::{Error, Result};
pub use jet::Jet;

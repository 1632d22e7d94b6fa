pub mod analysis;
pub mod bath;
pub mod constants;
pub mod dynamics;
pub mod error;
pub mod interp;
pub mod io;
pub mod pipeline;
pub mod special;
pub mod waveguide;

pub use error::{Error, Result};

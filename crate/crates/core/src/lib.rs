pub mod error;
pub mod exactnum;
pub mod fixlocus;
pub mod galois;
pub mod groebner;
pub mod hypersurface;
pub mod planecurves;
pub mod polyring;
pub mod projlin;
pub mod text;

pub use error::{Error, Result};

pub mod error;
pub mod io;
pub mod linalg;
pub mod model;
pub mod catalog;
pub mod classify;
pub mod spectra;
pub mod structure;
pub mod verify;

pub use error::{Error, Result};

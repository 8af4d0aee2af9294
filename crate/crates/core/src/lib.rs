pub mod circle;
pub mod error;
pub mod par;

pub use error::{Error, Result};
pub mod cayley;
pub mod zoo;
pub mod expansion;
pub mod boundary;
pub mod discreteness;
pub mod lab;

pub mod error;
pub mod circuit;
pub mod grassmann;
pub mod limits;
pub mod linalg;
pub mod metric;
pub mod trotter;
pub mod unitary_nets;
pub mod verify;

pub use error::{Error, Result};

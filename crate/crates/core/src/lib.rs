pub mod cdindex;
pub mod error;
pub mod exec;
pub mod flag;
pub mod linalg;
pub mod ncpoly;
pub mod poset;

pub use error::{Error, Result};
pub mod artinian;
pub mod complex;
pub mod constructions;
pub mod corpus;
pub mod homology;
pub mod sheaf;
pub mod verify;

//! Divergences on finite monads, graded codensity liftings, and a
//! relational program logic over the computational metalanguage.

pub mod acrl;
pub mod divergences;
pub mod domains;
pub mod error;
pub mod instances;
pub mod lifting;
pub mod metalang;
pub mod monads;
pub mod qet;
pub mod report;

pub use error::{Error, Result};

pub mod algebra;
pub mod decompose;
pub mod ar;
pub mod bimodule;
pub mod error;
pub mod eta;
pub mod fuzz;
pub mod homological;
pub mod io;
pub mod kato;
pub mod linalg;
pub mod module;
pub mod seq;
pub mod zoo;

pub use algebra::{Algebra, Quiver};
pub use error::{Error, Result};
pub use linalg::Mat;
pub use module::Module;

pub mod capacity;
pub mod error;
pub mod experiment;
pub mod grid;
pub mod linalg;
pub mod measure;
pub mod nonlinearity;
pub mod reduced;
pub mod solver;

pub use error::{Error, Result};
pub use grid::{build_grid, integrate, Grid, GridFunction, GridSpec, NegLaplacian};
pub use measure::DiscreteMeasure;

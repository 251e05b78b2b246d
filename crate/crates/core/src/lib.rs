//! Exact arithmetic for finite-dimensional quasi-Hopf algebras: axiom
//! verification, the elements γ, δ, F, u, û, ǔ, ũ, twisting, antipode
//! modification, coopposite constructions and ribbon elements.

pub mod builders;
pub mod cli;
pub mod datum;
pub mod derived;
pub mod dsl;
pub mod error;
pub mod linalg;
pub mod quasitriangular;
pub mod report;
pub mod ribbon;
pub mod rng;
pub mod scalar;
pub mod tensor;
pub mod twisting;
pub mod verify;

pub use datum::{QuasiHopf, QuasiHopfDatum};
pub use error::{Error, Result};
pub use report::{CheckReport, Status, Witness};
pub use scalar::{Field, Scalar};
pub use tensor::SparseTensor;
pub use verify::{verify, Level};

pub mod cartan;
pub mod engine;
pub mod error;
pub mod freealg;
pub mod identities;
pub mod lin;
pub mod linalg;
pub mod modules;
pub mod primitive;
pub mod report;
pub mod scalar;
pub mod symmetries;
pub mod ualg;
pub mod uplus;

pub use error::{Error, Result};
pub use lin::Lin;
pub use scalar::Scalar;

//! Pure-state N-representability toolkit for fermionic one-particle density
//! matrices, centred on three fermions in six orbitals.

pub mod cli;
pub mod error;
pub mod explorer;
pub mod fermion;
pub mod io;
pub mod numerics;
pub mod representability;

pub use error::{Error, Result};

//! Resonances of Schottky surfaces and their Hecke congruence covers.
//!
//! The library is organised bottom-up:
//!
//! * [`schottky`] holds exact Schottky data: integer generators, disks,
//!   reduced words, nested intervals and the τ-partitions `Z(τ)`, `Y(τ)`.
//! * [`transfer`] builds finite-rank approximations of the (twisted,
//!   refined) transfer operators on the Bergman space of the disks and
//!   evaluates their Hilbert–Schmidt norms by kernel integrals.
//! * [`zeta`] evaluates Selberg zeta functions as Fredholm determinants,
//!   cross-checks them against Euler products and locates zeros.
//! * [`congruence`] reduces the group modulo primes and realises the
//!   induced representation `λ_p = 1 ⊕ λ_p⁰` on the projective line.
//! * [`arithmetic`] provides the Kronecker symbol, prime sieving, character
//!   sums, the prime-summed Hilbert–Schmidt diagnostic and Jensen bounds.
//! * [`cli`] wires everything into a batch command runner.

pub mod arithmetic;
pub mod cli;
pub mod congruence;
pub mod error;
pub mod linalg;
pub mod schottky;
pub mod transfer;
pub mod zeta;

pub use error::{Error, Result};
pub use schottky::{Disk, MoebiusMatrix, Partition, SchottkyGroup, Word};
pub use transfer::{TransferMatrix, UnitaryRep};

/// Library version embedded in every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

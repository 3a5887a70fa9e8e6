//! Transfer operators on the Bergman space of the Schottky disks.

mod assemble;
mod bergman;
pub mod quadrature;
mod rep;

pub use assemble::{active_terms, assemble, hs_norm_matrix, term_block, AssembleOptions, Mode, TransferMatrix, WordSet};
pub use bergman::{bergman_kernel, hs_norm_integral, hs_record, HsRecord, PairIntegral, PairTable, QUADRATURE_TOL};
pub use rep::{trace, trace_of_product, UnitaryRep};

//! Kronecker symbols, prime sieving, character sums, prime-summed
//! Hilbert–Schmidt norms and Jensen bounds.

mod charsum;
mod jensen;
mod kronecker;
mod sieve;

pub use charsum::{
    char_sum, char_sum_over, char_sum_range, hs_prime_sum, hs_prime_sum_range, CharSumRecord, HsPrimeSumRecord, HsSumMode, PrimeRange,
};
pub use jensen::{jensen_bound, JensenRecord, JENSEN_TOL};
pub use kronecker::{kronecker, kronecker_bigint};
pub use sieve::{is_prime, primes_between, DEFAULT_SIEVE_CAP};

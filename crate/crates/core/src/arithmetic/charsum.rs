//! Log-weighted quadratic character sums over `p ∼ x` and the prime-summed
//! Hilbert–Schmidt norms of the refined operators twisted by `λ_p⁰`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::kronecker::kronecker_bigint;
use super::sieve::{primes_between, DEFAULT_SIEVE_CAP};
use crate::congruence::{fixed_lines, rep_lambda_p0, surjective_mod_p, DEFAULT_ENUMERATION_CAP};
use crate::error::{Error, Result};
use crate::schottky::{SchottkyGroup, DEFAULT_WORD_CAP};
use crate::transfer::PairTable;

/// `Σ_{x/2 < p ≤ x} log p · (d/p)` and its normalised size.
#[derive(Debug, Clone, Serialize)]
pub struct CharSumRecord {
    /// Exact discriminant, as a decimal string.
    pub d: String,
    pub x: f64,
    pub sum: f64,
    /// `Σ (d/p)` without the logarithmic weight.
    pub unweighted: i64,
    /// `|sum| / (√x · log(|d| x)²)`.
    pub bound_ratio: f64,
    pub prime_count: usize,
}

/// `log(|d|·x)` for arbitrary-size `d`.
fn log_dx(d: &BigInt, x: f64) -> f64 {
    let a = d.abs();
    let ld = match a.to_f64() {
        Some(v) if v.is_finite() => v.ln(),
        _ => a.bits() as f64 * std::f64::consts::LN_2,
    };
    ld + x.ln()
}

/// Character sum over a precomputed prime list.
pub fn char_sum_over(d: &BigInt, x: f64, primes: &[u64]) -> CharSumRecord {
    let mut sum = 0.0;
    let mut unweighted = 0i64;
    for &p in primes {
        let k = kronecker_bigint(d, p);
        sum += k as f64 * (p as f64).ln();
        unweighted += k as i64;
    }
    CharSumRecord {
        d: d.to_string(),
        x,
        sum,
        unweighted,
        bound_ratio: sum.abs() / (x.sqrt() * log_dx(d, x).powi(2)),
        prime_count: primes.len(),
    }
}

/// Which primes a sum runs over.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PrimeRange {
    /// `x/2 < p ≤ x`.
    #[default]
    Dyadic,
    /// `p ≤ x`.
    Full,
}

impl PrimeRange {
    pub fn primes(self, x: f64) -> Result<Vec<u64>> {
        let lo = match self {
            PrimeRange::Dyadic => x / 2.0,
            PrimeRange::Full => 0.0,
        };
        primes_between(lo, x, DEFAULT_SIEVE_CAP)
    }
}

/// `Σ_{p∼x} log p · (d/p)`.
pub fn char_sum(d: &BigInt, x: f64) -> Result<CharSumRecord> {
    char_sum_range(d, x, PrimeRange::Dyadic)
}

/// [`char_sum`] over either prime range.
pub fn char_sum_range(d: &BigInt, x: f64, range: PrimeRange) -> Result<CharSumRecord> {
    if d.sign() == num_bigint::Sign::NoSign {
        return Err(Error::Precondition("d must be nonzero".into()));
    }
    Ok(char_sum_over(d, x, &range.primes(x)?))
}

/// Which evaluation paths [`hs_prime_sum`] runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HsSumMode {
    Direct,
    Decomposed,
    Both,
}

#[derive(Debug, Clone, Serialize)]
pub struct HsPrimeSumRecord {
    pub tau: f64,
    pub s: [f64; 2],
    pub x: f64,
    pub range: PrimeRange,
    pub primes: Vec<u64>,
    /// Primes dropped from a full range for lack of a surjective reduction.
    pub excluded: Vec<u64>,
    /// `Σ_{p∼x} log p · ‖L_{τ,s,λ_p⁰}‖²_HS` from per-prime traces.
    pub direct: Option<f64>,
    /// Diagonal plus Kronecker off-diagonal decomposition.
    pub decomposed: Option<f64>,
    pub diagonal: Option<f64>,
    pub offdiagonal: Option<f64>,
    /// Word pairs whose off-diagonal trace fell back to fixed-line counting.
    pub fallback_pairs: usize,
    /// Fallback pairs with `‖γ_a⁻¹γ_b‖ < x²/20`.
    pub small_norm_fallbacks: usize,
    /// `max ‖γ_a⁻¹ γ_b‖ · τ` over pairs.
    pub max_pair_norm_tau: f64,
    /// `max ‖γ_a‖‖γ_b‖ · τ` over pairs.
    pub max_norm_product_tau: f64,
    /// `‖γ_a⁻¹γ_b‖ ≤ ‖γ_a‖‖γ_b‖` held for every pair.
    pub submultiplicative: bool,
    pub q: usize,
}

/// Primes dividing `γ ∓ I`, i.e. with `γ ≡ ±I mod p`.
fn pm_identity_primes(h: &crate::schottky::MoebiusMatrix, primes: &[u64]) -> Vec<u64> {
    primes.iter().copied().filter(|&p| h.is_pm_identity_mod(&BigInt::from(p))).collect()
}

/// Prime-summed HS norms `Σ_{p∼x} log p ‖L_{τ,s,λ_p⁰}‖²_HS` by one or both paths.
pub fn hs_prime_sum(g: &SchottkyGroup, tau: f64, s: Complex64, x: f64, mode: HsSumMode, q: usize) -> Result<HsPrimeSumRecord> {
    hs_prime_sum_range(g, tau, s, x, mode, q, PrimeRange::Dyadic)
}

/// [`hs_prime_sum`] over either prime range.
pub fn hs_prime_sum_range(
    g: &SchottkyGroup,
    tau: f64,
    s: Complex64,
    x: f64,
    mode: HsSumMode,
    q: usize,
    range: PrimeRange,
) -> Result<HsPrimeSumRecord> {
    let mut primes = range.primes(x)?;
    let mut excluded = Vec::new();
    if range == PrimeRange::Full {
        // λ_p⁰ needs a surjective reduction; small primes may lack one
        let mut kept = Vec::with_capacity(primes.len());
        for p in primes {
            if surjective_mod_p(g, p, DEFAULT_ENUMERATION_CAP)?.surjective {
                kept.push(p);
            } else {
                excluded.push(p);
            }
        }
        primes = kept;
    }
    let part = g.partition(tau, DEFAULT_WORD_CAP)?;
    let table = PairTable::new(g, &part, s, q)?;
    let mats: Vec<_> = table.words.iter().map(|w| g.word_matrix(w)).collect();
    let inv: Vec<_> = table.words.iter().map(|w| g.word_matrix(&g.mirror(w))).collect();

    let mut rec = HsPrimeSumRecord {
        tau,
        s: [s.re, s.im],
        x,
        range,
        primes: primes.clone(),
        excluded,
        direct: None,
        decomposed: None,
        diagonal: None,
        offdiagonal: None,
        fallback_pairs: 0,
        small_norm_fallbacks: 0,
        max_pair_norm_tau: 0.0,
        max_norm_product_tau: 0.0,
        submultiplicative: true,
        q,
    };

    if matches!(mode, HsSumMode::Direct | HsSumMode::Both) {
        let mut total = 0.0;
        for &p in &primes {
            let rho = rep_lambda_p0(g, p)?;
            let (v, _) = table.combine(table.rep_traces(&rho));
            total += (p as f64).ln() * v.re;
        }
        rec.direct = Some(total);
    }

    if matches!(mode, HsSumMode::Decomposed | HsSumMode::Both) {
        let plogp: f64 = primes.iter().map(|&p| p as f64 * (p as f64).ln()).sum();
        let mut diag = Complex64::new(0.0, 0.0);
        let mut off = Complex64::new(0.0, 0.0);
        let mut cache: std::collections::HashMap<(usize, usize), f64> = Default::default();
        for &(_, i, j, v, _) in &table.pairs {
            if i == j {
                diag += v * plogp;
                continue;
            }
            let weight = match cache.get(&(i, j)) {
                Some(&w) => w,
                None => {
                    let h = inv[i].mul(&mats[j]);
                    let hn = h.norm();
                    let prod = mats[i].norm() * mats[j].norm();
                    rec.max_pair_norm_tau = rec.max_pair_norm_tau.max(hn * tau);
                    rec.max_norm_product_tau = rec.max_norm_product_tau.max(prod * tau);
                    if hn > prod * (1.0 + 1e-12) {
                        rec.submultiplicative = false;
                    }
                    let w = if pm_identity_primes(&h, &primes).is_empty() {
                        let t = h.trace();
                        char_sum_over(&(&t * &t - 4), x, &primes).sum
                    } else {
                        rec.fallback_pairs += 1;
                        if hn < x * x / 20.0 {
                            rec.small_norm_fallbacks += 1;
                        }
                        primes.iter().map(|&p| (p as f64).ln() * (fixed_lines(&h, p) as f64 - 1.0)).sum()
                    };
                    cache.insert((i, j), w);
                    w
                }
            };
            off += v * weight;
        }
        rec.diagonal = Some(diag.re);
        rec.offdiagonal = Some(off.re);
        rec.decomposed = Some((diag + off).re);
    }
    Ok(rec)
}

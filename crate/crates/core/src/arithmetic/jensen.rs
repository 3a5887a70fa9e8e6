//! Jensen-formula upper bound for the number of new real zeros.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::congruence::rep_lambda_p0;
use crate::error::{Error, Result};
use crate::schottky::{SchottkyGroup, DEFAULT_WORD_CAP};
use crate::transfer::AssembleOptions;
use crate::zeta::refined_zeta_log;

/// Relative change at which the circle mean is accepted.
pub const JENSEN_TOL: f64 = 1e-4;
const INITIAL_SAMPLES: usize = 256;
const MAX_SAMPLES: usize = 8192;

#[derive(Debug, Clone, Serialize)]
pub struct JensenRecord {
    pub p: u64,
    pub sigma: f64,
    pub tau: f64,
    pub k: f64,
    pub delta: f64,
    pub sigma0: f64,
    pub r1: f64,
    pub r2: f64,
    /// Mean of `log|ζ_τ|` over the circle of radius `r2`.
    pub circle_mean: f64,
    /// `log|ζ_τ(σ₀)|`.
    pub center_log: f64,
    pub samples: usize,
    pub bound: f64,
    pub n: usize,
}

/// `(mean log|ζ_τ(σ₀ + r₂e^{2πiθ})| − log|ζ_τ(σ₀)|) / log(r₂/r₁)` for `ζ_τ(·, λ_p⁰)`.
pub fn jensen_bound(g: &SchottkyGroup, p: u64, sigma: f64, tau: f64, k: f64, delta: f64, opts: &AssembleOptions) -> Result<JensenRecord> {
    if !(sigma > 0.0 && sigma < delta) {
        return Err(Error::Precondition(format!("sigma = {sigma} must lie in (0, delta = {delta})")));
    }
    if !(k > 0.0) {
        return Err(Error::Precondition(format!("K must be positive, got {k}")));
    }
    let rho = rep_lambda_p0(g, p)?;
    let part = g.partition(tau, DEFAULT_WORD_CAP)?;
    let sigma0 = delta + k;
    let r1 = ((sigma0 - sigma).powi(2) + 1.0).sqrt();
    let r2 = r1 + 1.0 / k;
    let logz = |s: Complex64| -> Result<f64> { Ok(refined_zeta_log(g, &part, s, &rho, opts)?.log_abs) };
    let center_log = logz(Complex64::new(sigma0, 0.0))?;
    if center_log < -12.0 * std::f64::consts::LN_10 {
        return Err(Error::JensenCenterZero(sigma0));
    }
    let real = rho.is_real();
    let at = |j: usize, n: usize| Complex64::new(sigma0, 0.0) + Complex64::from_polar(r2, 2.0 * PI * j as f64 / n as f64);
    let mut n = INITIAL_SAMPLES;
    let mut vals = circle_samples(&(0..n).collect::<Vec<_>>(), n, real, |j| logz(at(j, n)))?;
    let mut mean = vals.iter().sum::<f64>() / n as f64;
    loop {
        if 2 * n > MAX_SAMPLES {
            return Err(Error::QuadratureNotConverged(f64::NAN));
        }
        // the doubled grid reuses every old sample
        let odd_idx: Vec<usize> = (0..n).map(|j| 2 * j + 1).collect();
        let odd = circle_samples(&odd_idx, 2 * n, real, |j| logz(at(j, 2 * n)))?;
        let mut merged = Vec::with_capacity(2 * n);
        for (e, o) in vals.iter().zip(&odd) {
            merged.push(*e);
            merged.push(*o);
        }
        n *= 2;
        vals = merged;
        let next = vals.iter().sum::<f64>() / n as f64;
        let change = (next - mean).abs() / next.abs().max(1e-300);
        mean = next;
        if change < JENSEN_TOL {
            break;
        }
    }
    let bound = (mean - center_log) / (r2 / r1).ln();
    Ok(JensenRecord { p, sigma, tau, k, delta, sigma0, r1, r2, circle_mean: mean, center_log, samples: n, bound, n: opts.n })
}

/// Values `f(j)` at grid indices `idx` on an `n`-point circle. For a real
/// representation, `log|ζ|` is symmetric under `j ↦ n − j`, so only the upper
/// half is evaluated.
fn circle_samples<F>(idx: &[usize], n: usize, real: bool, f: F) -> Result<Vec<f64>>
where
    F: Fn(usize) -> Result<f64> + Sync,
{
    let canon = |j: usize| if real { j.min(n - j) } else { j };
    let mut unique: Vec<usize> = idx.iter().map(|&j| canon(j)).collect();
    unique.sort_unstable();
    unique.dedup();
    let vals: Vec<f64> = unique.par_iter().map(|&j| f(j)).collect::<Result<_>>()?;
    Ok(idx
        .iter()
        .map(|&j| vals[unique.binary_search(&canon(j)).expect("canonical index present")])
        .collect())
}

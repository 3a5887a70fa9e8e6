//! Observed constants of the distortion and scaling estimates.

use num_complex::Complex64;
use serde::Serialize;

use super::group::SchottkyGroup;
use super::partition::DEFAULT_WORD_CAP;
use super::word::Word;
use crate::error::Result;

/// Observed `[min, max]` of a ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Range {
    pub min: f64,
    pub max: f64,
}

impl Range {
    fn empty() -> Self {
        Range { min: f64::INFINITY, max: f64::NEG_INFINITY }
    }

    fn add(&mut self, x: f64) {
        self.min = self.min.min(x);
        self.max = self.max.max(x);
    }

    /// `max / min`: the width of the band as a multiplicative factor.
    pub fn spread(&self) -> f64 {
        self.max / self.min
    }

    pub fn is_finite_positive(&self) -> bool {
        self.min > 0.0 && self.max.is_finite()
    }
}

/// Per-τ scaling statistics over `Y(τ)`.
#[derive(Debug, Clone, Serialize)]
pub struct TauStats {
    pub tau: f64,
    pub z_count: usize,
    pub y_count: usize,
    /// `|Y(τ)|·τ^δ`, present when δ was supplied.
    pub y_count_tau_delta: Option<f64>,
    /// `Υ_a / τ` over `a ∈ Y(τ)`.
    pub upsilon_over_tau: Range,
    /// `‖γ_a‖·√τ` over `a ∈ Y(τ)`.
    pub norm_sqrt_tau: Range,
}

#[derive(Debug, Clone, Serialize)]
pub struct DistortionReport {
    pub max_len: usize,
    pub pair_len: usize,
    /// `Υ_w̄ / Υ_w`.
    pub mirror: Range,
    /// `Υ_{wv} / (Υ_w Υ_v)` for `w → v`.
    pub product: Range,
    /// `|γ_w′(z)| / Υ_w` for sampled `z` in admissible disks.
    pub derivative: Range,
    /// Largest `|γ_w′(z₁)| / |γ_w′(z₂)|` over a common admissible disk.
    pub bounded_distortion: f64,
    /// Largest `|γ_w′|` on admissible disks for each word length `1..=max_len`.
    pub contraction_by_length: Vec<f64>,
    /// Fitted geometric rate `θ` of `contraction_by_length`.
    pub contraction_theta: f64,
    pub taus: Vec<TauStats>,
}

/// Sample points in disk `b`: center and four points at 0.9 of the radius.
fn disk_samples(g: &SchottkyGroup, b: usize) -> [Complex64; 5] {
    let d = g.disks[b];
    let c = Complex64::new(d.center, 0.0);
    let r = 0.9 * d.radius;
    [c, c + r, c - r, c + Complex64::new(0.0, r), c - Complex64::new(0.0, r)]
}

/// Distortion extremes over words of length `≤ max_len` and the per-τ scaling data.
pub fn distortion_report(g: &SchottkyGroup, max_len: usize, taus: &[f64], delta: Option<f64>) -> Result<DistortionReport> {
    let words = g.words_up_to(max_len);
    let ups: Vec<f64> = words.iter().map(|w| g.upsilon(w)).collect::<Result<_>>()?;
    let mut mirror = Range::empty();
    let mut derivative = Range::empty();
    let mut bounded_distortion: f64 = 1.0;
    let mut contraction = vec![0.0f64; max_len];
    for (w, &u) in words.iter().zip(&ups) {
        mirror.add(g.upsilon(&g.mirror(w))? / u);
        let m = g.word_matrix(w).to_f64();
        for b in (0..g.alphabet_size()).filter(|&b| g.arrow(w, b)) {
            let vals: Vec<f64> = disk_samples(g, b).iter().map(|&z| m.derivative(z).map(|d| d.norm())).collect::<Result<_>>()?;
            let (lo, hi) = vals.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &v| (lo.min(v), hi.max(v)));
            for v in &vals {
                derivative.add(v / u);
            }
            bounded_distortion = bounded_distortion.max(hi / lo);
            contraction[w.len() - 1] = contraction[w.len() - 1].max(hi);
        }
    }
    let pair_len = max_len.div_ceil(2).max(1);
    let short: Vec<(&Word, f64)> = words.iter().zip(ups.iter().copied()).filter(|(w, _)| w.len() <= pair_len).collect();
    let mut product = Range::empty();
    for (w, uw) in &short {
        for (v, uv) in &short {
            if g.arrow(w, v.first().unwrap()) {
                product.add(g.upsilon(&w.concat(v))? / (uw * uv));
            }
        }
    }
    let contraction_theta = fit_rate(&contraction);
    let mut stats = Vec::with_capacity(taus.len());
    for &tau in taus {
        stats.push(tau_stats(g, tau, delta)?);
    }
    Ok(DistortionReport {
        max_len,
        pair_len,
        mirror,
        product,
        derivative,
        bounded_distortion,
        contraction_by_length: contraction,
        contraction_theta,
        taus: stats,
    })
}

/// Scaling statistics of `Y(τ)`.
pub fn tau_stats(g: &SchottkyGroup, tau: f64, delta: Option<f64>) -> Result<TauStats> {
    let p = g.partition(tau, DEFAULT_WORD_CAP)?;
    let mut upsilon_over_tau = Range::empty();
    let mut norm_sqrt_tau = Range::empty();
    for e in &p.y {
        upsilon_over_tau.add(e.upsilon / tau);
        norm_sqrt_tau.add(g.word_matrix(&e.word).norm() * tau.sqrt());
    }
    Ok(TauStats {
        tau,
        z_count: p.z.len(),
        y_count: p.y.len(),
        y_count_tau_delta: delta.map(|d| p.y.len() as f64 * tau.powf(d)),
        upsilon_over_tau,
        norm_sqrt_tau,
    })
}

/// Least-squares slope of `ln v_n` against `n`, returned as `exp(slope)`.
fn fit_rate(v: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = v.iter().enumerate().filter(|(_, &x)| x > 0.0).map(|(i, &x)| (i as f64, x.ln())).collect();
    if pts.len() < 2 {
        return f64::NAN;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (sxy / sxx).exp()
}

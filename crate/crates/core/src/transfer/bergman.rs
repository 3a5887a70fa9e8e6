//! Bergman kernels of the disks and the kernel-integral form of the
//! Hilbert–Schmidt norm of the refined operator.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::quadrature::disk_rule;
use super::rep::{trace_of_product, UnitaryRep};
use crate::error::{Error, Result};
use crate::schottky::{Disk, Partition, SchottkyGroup, Word};

/// Relative change between orders `Q` and `2Q` above which quadrature fails.
pub const QUADRATURE_TOL: f64 = 1e-6;

/// `B_D(z, w) = r² / (π (r² − (z−c)(w̄−c))²)`.
pub fn bergman_kernel(disk: &Disk, z: Complex64, w: Complex64) -> Result<Complex64> {
    let c = Complex64::new(disk.center, 0.0);
    let r2 = disk.radius * disk.radius;
    let den = r2 - (z - c) * (w.conj() - c);
    if den.norm() <= 1e-300 {
        return Err(Error::Pole);
    }
    Ok(Complex64::new(r2, 0.0) / (den * den * PI))
}

/// One kernel integral `I_{a,a′}^{(b)}`.
#[derive(Debug, Clone, Serialize)]
pub struct PairIntegral {
    pub target: usize,
    pub a: usize,
    pub a2: usize,
    pub value: [f64; 2],
}

/// All nonzero `I_{a,a′}^{(b)}` at orders `Q` and `2Q`, indexed into `words`.
#[derive(Debug, Clone)]
pub struct PairTable {
    pub tau: f64,
    pub s: Complex64,
    pub q: usize,
    pub words: Vec<Word>,
    /// `(target, a, a′, I at Q, I at 2Q)`.
    pub pairs: Vec<(usize, usize, usize, Complex64, Complex64)>,
}

/// Per-term samples of `γ_w′(z)^s` and `γ_w(z)` on a quadrature rule.
fn term_samples(g: &SchottkyGroup, w: &Word, s: Complex64, rule: &[(Complex64, f64)]) -> Result<Vec<(Complex64, Complex64)>> {
    let m = g.word_matrix(w).to_f64();
    rule.iter().map(|&(z, _)| Ok((m.derivative_power(z, s)?, m.map(z)))).collect()
}

fn pair_integrals_at(g: &SchottkyGroup, terms: &[(usize, usize)], words: &[Word], s: Complex64, q: usize) -> Result<Vec<(usize, usize, usize, Complex64)>> {
    let mut out = Vec::new();
    for b in 0..g.alphabet_size() {
        let d = g.disks[b];
        let rule = disk_rule(d.center, d.radius, q);
        let idx: Vec<usize> = terms.iter().filter(|t| t.1 == b).map(|t| t.0).collect();
        let samples: Vec<Vec<(Complex64, Complex64)>> =
            idx.par_iter().map(|&i| term_samples(g, &words[i], s, &rule)).collect::<Result<_>>()?;
        let pairs: Vec<(usize, usize)> = (0..idx.len())
            .flat_map(|i| (0..idx.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| words[idx[i]].first() == words[idx[j]].first())
            .collect();
        let vals: Vec<Complex64> = pairs
            .par_iter()
            .map(|&(i, j)| {
                let disk = &g.disks[words[idx[i]].first().unwrap()];
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, &(_, wt)) in rule.iter().enumerate() {
                    let (pi, zi) = samples[i][k];
                    let (pj, zj) = samples[j][k];
                    acc += pi * pj.conj() * bergman_kernel(disk, zi, zj)? * wt;
                }
                Ok(acc)
            })
            .collect::<Result<_>>()?;
        out.extend(pairs.iter().zip(vals).map(|(&(i, j), v)| (b, idx[i], idx[j], v)));
    }
    Ok(out)
}

impl PairTable {
    /// Kernel integrals for the refined terms of `p`.
    pub fn new(g: &SchottkyGroup, p: &Partition, s: Complex64, q: usize) -> Result<Self> {
        if q < 4 {
            return Err(Error::Precondition(format!("quadrature order must be at least 4, got {q}")));
        }
        let words: Vec<Word> = p.y.iter().map(|e| e.word.clone()).collect();
        let terms: Vec<(usize, usize)> = p
            .terms
            .iter()
            .map(|t| (words.binary_search(&t.word).expect("refined words lie in Y"), t.target))
            .collect();
        let lo = pair_integrals_at(g, &terms, &words, s, q)?;
        let hi = pair_integrals_at(g, &terms, &words, s, 2 * q)?;
        let pairs = lo.into_iter().zip(hi).map(|((b, i, j, v), (_, _, _, w))| (b, i, j, v, w)).collect();
        Ok(PairTable { tau: p.tau, s, q, words, pairs })
    }

    /// `Σ_b Σ_{a,a′} t(a, a′) I_{a,a′}^{(b)}` at orders `Q` and `2Q`.
    pub fn combine(&self, trace: impl Fn(usize, usize) -> Complex64) -> (Complex64, Complex64) {
        let mut lo = Complex64::new(0.0, 0.0);
        let mut hi = lo;
        for &(_, i, j, v, w) in &self.pairs {
            let t = trace(i, j);
            lo += t * v;
            hi += t * w;
        }
        (lo, hi)
    }

    /// Traces `tr(ρ(γ_a)⁻¹ ρ(γ_{a′}))` for all word pairs that occur.
    pub fn rep_traces(&self, rho: &UnitaryRep) -> impl Fn(usize, usize) -> Complex64 {
        let inv: Vec<_> = self.words.iter().map(|w| rho.word_image_inverse(w)).collect();
        let fwd: Vec<_> = self.words.iter().map(|w| rho.word_image(w)).collect();
        let n = self.words.len();
        let mut table = vec![Complex64::new(0.0, 0.0); n * n];
        for &(_, i, j, _, _) in &self.pairs {
            table[i * n + j] = trace_of_product(&inv[i], &fwd[j]);
        }
        move |i, j| table[i * n + j]
    }

    /// Smallest `C` with `|I| ≤ (Cτ)^{2σ} e^{C|t|}` over all pairs.
    pub fn observed_constant(&self) -> f64 {
        let (sigma, t) = (self.s.re, self.s.im.abs());
        self.pairs.iter().map(|p| bound_constant(p.3.norm(), self.tau, sigma, t)).fold(0.0, f64::max)
    }
}

/// Solve `2σ ln(Cτ) + C t = ln v` for `C` by bisection (the left side increases in `C` when `σ > 0`).
fn bound_constant(v: f64, tau: f64, sigma: f64, t: f64) -> f64 {
    if v <= 0.0 {
        return 0.0;
    }
    if sigma <= 0.0 {
        return f64::NAN;
    }
    let f = |c: f64| 2.0 * sigma * (c * tau).ln() + c * t - v.ln();
    let (mut lo, mut hi) = (1.0f64, 1.0f64);
    while f(hi) < 0.0 {
        hi *= 2.0;
    }
    while f(lo) > 0.0 {
        lo *= 0.5;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-13 * hi {
            break;
        }
    }
    hi
}

/// Kernel-side Hilbert–Schmidt norm.
#[derive(Debug, Clone, Serialize)]
pub struct HsRecord {
    /// `‖L_{τ,s,ρ}‖²_HS` at order `Q`.
    pub value: f64,
    /// Same at order `2Q`.
    pub value_check: f64,
    pub tau: f64,
    pub s: [f64; 2],
    pub rep: String,
    pub q: usize,
    pub pair_count: usize,
    /// Observed `C` in the per-pair bound.
    pub observed_c: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pairs: Option<Vec<PairIntegral>>,
}

impl HsRecord {
    /// The norm itself (square root of `value`).
    pub fn norm(&self) -> f64 {
        self.value.sqrt()
    }
}

/// Build a record from a precomputed table, checking quadrature convergence.
pub fn hs_record(table: &PairTable, rho: &UnitaryRep, keep_pairs: bool) -> Result<HsRecord> {
    let (lo, hi) = table.combine(table.rep_traces(rho));
    let change = (lo - hi).norm() / hi.norm().max(f64::MIN_POSITIVE);
    if change > QUADRATURE_TOL {
        return Err(Error::QuadratureNotConverged(change));
    }
    let pairs = keep_pairs.then(|| {
        table
            .pairs
            .iter()
            .map(|&(b, i, j, v, _)| PairIntegral { target: b, a: i, a2: j, value: [v.re, v.im] })
            .collect()
    });
    Ok(HsRecord {
        value: lo.re,
        value_check: hi.re,
        tau: table.tau,
        s: [table.s.re, table.s.im],
        rep: rho.label.clone(),
        q: table.q,
        pair_count: table.pairs.len(),
        observed_c: table.observed_constant(),
        pairs,
    })
}

/// `‖L_{τ,s,ρ}‖²_HS` by kernel integrals.
pub fn hs_norm_integral(g: &SchottkyGroup, p: &Partition, s: Complex64, rho: &UnitaryRep, q: usize) -> Result<HsRecord> {
    let table = PairTable::new(g, p, s, q)?;
    hs_record(&table, rho, false)
}

//! Block matrices of the (refined, twisted) transfer operator in the
//! orthonormal monomial basis of the Bergman space of each disk.

use std::f64::consts::PI;
use std::io::Write;
use std::path::Path;

use faer::Mat;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::rep::UnitaryRep;
use crate::error::{Error, Result};
use crate::linalg;
use crate::schottky::{Partition, SchottkyGroup, Word};

/// Which summands the operator uses.
#[derive(Debug, Clone, Copy)]
pub enum WordSet<'a> {
    /// Single letters `a → b`.
    Standard,
    /// The refined terms of a τ-partition.
    Refined(&'a Partition),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum Mode {
    Standard,
    Refined { tau: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AssembleOptions {
    /// Basis functions per disk.
    pub n: usize,
    /// Sampling circle radius as a fraction of the disk radius.
    pub sample_radius: f64,
    /// Largest allowed matrix dimension.
    pub dim_cap: usize,
}

impl Default for AssembleOptions {
    fn default() -> Self {
        AssembleOptions { n: 16, sample_radius: 0.75, dim_cap: 8192 }
    }
}

impl AssembleOptions {
    pub fn with_n(n: usize) -> Self {
        AssembleOptions { n, ..Default::default() }
    }
}

/// Finite-rank approximation; row index `(b·N + k)·dim(ρ) + v`.
#[derive(Debug, Clone)]
pub struct TransferMatrix {
    pub matrix: Mat<Complex64>,
    pub mode: Mode,
    pub s: Complex64,
    pub rep_label: String,
    pub rep_dim: usize,
    pub n: usize,
    pub disks: usize,
}

#[derive(Serialize)]
struct DumpMeta<'a> {
    rows: usize,
    cols: usize,
    layout: &'static str,
    mode: Mode,
    s: [f64; 2],
    rep: &'a str,
    rep_dim: usize,
    n: usize,
    disks: usize,
    version: &'static str,
}

impl TransferMatrix {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Row/column index of basis function `k` of disk `b`, component `v`.
    pub fn index(&self, b: usize, k: usize, v: usize) -> usize {
        (b * self.n + k) * self.rep_dim + v
    }

    /// Write `<stem>.bin` (row-major little-endian `f64` pairs) and `<stem>.json`.
    pub fn dump(&self, dir: &Path, stem: &str) -> Result<()> {
        let mut bin = std::io::BufWriter::new(std::fs::File::create(dir.join(format!("{stem}.bin")))?);
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let z = self.matrix[(i, j)];
                bin.write_all(&z.re.to_le_bytes())?;
                bin.write_all(&z.im.to_le_bytes())?;
            }
        }
        bin.flush()?;
        let meta = DumpMeta {
            rows: self.dim(),
            cols: self.dim(),
            layout: "row-major complex128 little-endian, (re, im) pairs",
            mode: self.mode,
            s: [self.s.re, self.s.im],
            rep: &self.rep_label,
            rep_dim: self.rep_dim,
            n: self.n,
            disks: self.disks,
            version: crate::VERSION,
        };
        std::fs::write(dir.join(format!("{stem}.json")), serde_json::to_string_pretty(&meta)?)?;
        Ok(())
    }
}

/// Summands `(word, target disk)` sorted by target then word.
pub fn active_terms(g: &SchottkyGroup, set: WordSet<'_>) -> Vec<(Word, usize)> {
    match set {
        WordSet::Standard => {
            let mut t = Vec::new();
            for b in 0..g.alphabet_size() {
                for a in 0..g.alphabet_size() {
                    if a != g.bar(b) {
                        t.push((Word::letter(a), b));
                    }
                }
            }
            t
        }
        WordSet::Refined(p) => p.terms.iter().map(|t| (t.word.clone(), t.target)).collect(),
    }
}

/// Scalar block `T[k, j] = ⟨e_k^{(b)}, γ_w′^s · e_j^{(c)} ∘ γ_w⟩` with `c` the first letter of `w`.
pub fn term_block(g: &SchottkyGroup, w: &Word, b: usize, s: Complex64, opts: &AssembleOptions) -> Result<Mat<Complex64>> {
    let n = opts.n;
    let k_samples = 4 * n;
    let gm = g.word_matrix(w).to_f64();
    let c = w.first().ok_or_else(|| Error::Precondition("empty word in transfer operator".into()))?;
    let (db, dc) = (g.disks[b], g.disks[c]);
    let rho = opts.sample_radius;
    let cc = Complex64::new(dc.center, 0.0);
    let norms: Vec<f64> = (0..n).map(|j| ((j + 1) as f64 / PI).sqrt()).collect();
    let mut values = Mat::<Complex64>::zeros(k_samples, n);
    for l in 0..k_samples {
        let e = Complex64::from_polar(1.0, 2.0 * PI * l as f64 / k_samples as f64);
        let z = Complex64::new(db.center, 0.0) + e * (rho * db.radius);
        let phi = gm.derivative_power(z, s)?;
        let u = (gm.map(z) - cc) / dc.radius;
        let mut pow = phi / dc.radius;
        for j in 0..n {
            values[(l, j)] = pow * norms[j];
            pow *= u;
        }
    }
    let dft = Mat::<Complex64>::from_fn(n, k_samples, |k, l| {
        Complex64::from_polar(1.0 / k_samples as f64, -2.0 * PI * ((k * l) % k_samples) as f64 / k_samples as f64)
    });
    let mut t = dft * values;
    for k in 0..n {
        let scale = db.radius / (norms[k] * rho.powi(k as i32));
        for j in 0..n {
            t[(k, j)] *= scale;
        }
    }
    Ok(t)
}

/// Assemble the matrix of `L_{s,ρ}` (standard) or `L_{τ,s,ρ}` (refined).
pub fn assemble(g: &SchottkyGroup, set: WordSet<'_>, s: Complex64, rho: &UnitaryRep, opts: &AssembleOptions) -> Result<TransferMatrix> {
    if opts.n == 0 {
        return Err(Error::Precondition("truncation N must be at least 1".into()));
    }
    if rho.images.len() != g.alphabet_size() {
        return Err(Error::InvalidRep(format!("representation has {} letter images, group has {}", rho.images.len(), g.alphabet_size())));
    }
    let (n, dr, nd) = (opts.n, rho.dim, g.alphabet_size());
    let dim = nd * n * dr;
    if dim > opts.dim_cap {
        return Err(Error::DimensionCap { dim, cap: opts.dim_cap });
    }
    let terms = active_terms(g, set);
    let blocks: Vec<(Mat<Complex64>, Mat<Complex64>)> = terms
        .par_iter()
        .map(|(w, b)| Ok((term_block(g, w, *b, s, opts)?, rho.word_image_inverse(w))))
        .collect::<Result<_>>()?;
    let mut m = Mat::<Complex64>::zeros(dim, dim);
    for ((w, b), (t, r)) in terms.iter().zip(&blocks) {
        let c = w.first().unwrap();
        for k in 0..n {
            for j in 0..n {
                let tkj = t[(k, j)];
                let (row0, col0) = ((b * n + k) * dr, (c * n + j) * dr);
                for v in 0..dr {
                    for u in 0..dr {
                        m[(row0 + v, col0 + u)] += tkj * r[(v, u)];
                    }
                }
            }
        }
    }
    let mode = match set {
        WordSet::Standard => Mode::Standard,
        WordSet::Refined(p) => Mode::Refined { tau: p.tau },
    };
    Ok(TransferMatrix { matrix: m, mode, s, rep_label: rho.label.clone(), rep_dim: dr, n, disks: nd })
}

/// Frobenius norm of the truncation, the matrix-side Hilbert–Schmidt norm.
pub fn hs_norm_matrix(m: &TransferMatrix) -> f64 {
    linalg::frobenius(m.matrix.as_ref())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimension_and_sparsity() {
        let g = SchottkyGroup::gamma_m(2);
        let n = 6;
        let t = assemble(&g, WordSet::Standard, Complex64::new(0.5, 0.0), &UnitaryRep::trivial(2), &AssembleOptions::with_n(n)).unwrap();
        assert_eq!(t.dim(), 4 * n);
        for b in 0..4 {
            for c in 0..4 {
                let block_norm: f64 = (0..n)
                    .flat_map(|k| (0..n).map(move |j| (k, j)))
                    .map(|(k, j)| t.matrix[(t.index(b, k, 0), t.index(c, j, 0))].norm())
                    .sum();
                // the block b ← c is fed by the letter c, which needs c → b
                assert_eq!(block_norm > 0.0, c != g.bar(b), "b={b} c={c}");
            }
        }
    }

    #[test]
    fn constant_function_image_matches_direct_evaluation() {
        // L applied to e_0 on disk c, evaluated at the center of disk b
        let g = SchottkyGroup::gamma_m(2);
        let s = Complex64::new(0.8, 0.3);
        let opts = AssembleOptions::with_n(20);
        let (a, b) = (0usize, 1usize);
        let t = term_block(&g, &Word::letter(a), b, s, &opts).unwrap();
        let e0 = |r: f64| 1.0 / (PI.sqrt() * r);
        let db = g.disks[b];
        let z = Complex64::new(db.center + 0.3, -0.2);
        let direct = g.generator(a).derivative_power(z, s).unwrap() * e0(g.disks[a].radius);
        let u = (z - db.center) / db.radius;
        let series: Complex64 = (0..opts.n)
            .map(|k| t[(k, 0)] * ((k + 1) as f64 / PI).sqrt() / db.radius * u.powi(k as i32))
            .sum();
        assert!((series - direct).norm() < 1e-12 * direct.norm(), "{series} vs {direct}");
    }

    #[test]
    fn frobenius_doubles_for_doubled_rep() {
        let g = SchottkyGroup::gamma_m(2);
        let t = UnitaryRep::trivial(2);
        let tt = t.direct_sum(&t).unwrap();
        let s = Complex64::new(0.9, 0.5);
        let o = AssembleOptions::with_n(8);
        let a = hs_norm_matrix(&assemble(&g, WordSet::Standard, s, &t, &o).unwrap());
        let b = hs_norm_matrix(&assemble(&g, WordSet::Standard, s, &tt, &o).unwrap());
        assert!((b * b - 2.0 * a * a).abs() < 1e-12 * b * b);
    }

    #[test]
    fn dimension_cap_enforced() {
        let g = SchottkyGroup::gamma_m(2);
        let o = AssembleOptions { n: 16, sample_radius: 0.75, dim_cap: 10 };
        let r = assemble(&g, WordSet::Standard, Complex64::new(1.0, 0.0), &UnitaryRep::trivial(2), &o);
        assert!(matches!(r, Err(Error::DimensionCap { .. })));
    }

    #[test]
    fn dump_writes_files() {
        let g = SchottkyGroup::gamma_m(1);
        let t = assemble(&g, WordSet::Standard, Complex64::new(1.0, 0.0), &UnitaryRep::trivial(1), &AssembleOptions::with_n(3)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        t.dump(dir.path(), "m").unwrap();
        let len = std::fs::metadata(dir.path().join("m.bin")).unwrap().len();
        assert_eq!(len as usize, t.dim() * t.dim() * 16);
        let meta: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.path().join("m.json")).unwrap()).unwrap();
        assert_eq!(meta["rows"], 6);
    }
}

//! δ, real zeros with multiplicity, and winding-number zero counts.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::det::{leading_eigenvalue, zeta_det};
use crate::congruence;
use crate::error::{Error, Result};
use crate::schottky::SchottkyGroup;
use crate::transfer::{AssembleOptions, UnitaryRep};

/// Samples cap for one contour.
pub const CONTOUR_SAMPLE_CAP: usize = 20_000;

#[derive(Debug, Clone, Serialize)]
pub struct DeltaReport {
    pub by_eigenvalue: f64,
    pub by_determinant: f64,
    pub tol: f64,
    pub n: usize,
}

impl DeltaReport {
    pub fn value(&self) -> f64 {
        self.by_determinant
    }
}

/// Bisect `f` (with `f(lo)`, `f(hi)` of opposite signs) to width `tol`.
pub fn bisect(mut f: impl FnMut(f64) -> Result<f64>, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let mut flo = f(lo)?;
    let fhi = f(hi)?;
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::Bracket(format!("no sign change on [{lo}, {hi}]")));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// δ as the parameter where the leading eigenvalue of `L_s` crosses one.
pub fn delta_by_eigenvalue(g: &SchottkyGroup, tol: f64, opts: &AssembleOptions) -> Result<f64> {
    let t = UnitaryRep::trivial(g.m);
    bisect(|s| Ok(leading_eigenvalue(g, s, &t, opts)? - 1.0), 0.0, 2.0, tol)
}

/// δ as the largest real zero of `det(1 − L_s)`, scanning down from `s = 2`.
pub fn delta_by_determinant(g: &SchottkyGroup, tol: f64, opts: &AssembleOptions) -> Result<f64> {
    let t = UnitaryRep::trivial(g.m);
    let f = |s: f64| Ok(zeta_det(g, Complex64::new(s, 0.0), &t, opts)?.re);
    let step = 0.02;
    let mut hi = 2.0;
    let mut fhi = f(hi)?;
    while hi > step / 2.0 {
        let lo = hi - step;
        let flo = f(lo)?;
        if flo == 0.0 || flo.signum() != fhi.signum() {
            return bisect(f, lo, hi, tol);
        }
        hi = lo;
        fhi = flo;
    }
    Err(Error::Bracket("no real zero of the determinant in (0, 2]".into()))
}

/// Both δ computations.
pub fn delta(g: &SchottkyGroup, tol: f64, opts: &AssembleOptions) -> Result<DeltaReport> {
    Ok(DeltaReport {
        by_eigenvalue: delta_by_eigenvalue(g, tol, opts)?,
        by_determinant: delta_by_determinant(g, tol, opts)?,
        tol,
        n: opts.n,
    })
}

/// Winding number of `f` along the closed curve `curve(t)`, `t ∈ [0, 1]`,
/// refining until every phase increment is below `π/2`.
pub fn winding_number<F, C>(f: &F, curve: C, initial: usize) -> Result<i64>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
    C: Fn(f64) -> Complex64 + Sync,
{
    let ts: Vec<f64> = (0..=initial).map(|i| i as f64 / initial as f64).collect();
    let vals: Vec<Complex64> = ts.par_iter().map(|&t| f(curve(t))).collect::<Result<_>>()?;
    let scale = vals.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let check = |z: Complex64, v: Complex64| -> Result<()> {
        if v.norm() <= 1e-10 * scale || !v.norm().is_finite() {
            return Err(Error::BoundaryZero { re: z.re, im: z.im });
        }
        Ok(())
    };
    for (t, v) in ts.iter().zip(&vals) {
        check(curve(*t), *v)?;
    }
    let mut total = 0.0;
    let mut samples = vals.len();
    let mut stack: Vec<(f64, Complex64, f64, Complex64)> = Vec::new();
    for i in (0..initial).rev() {
        stack.push((ts[i], vals[i], ts[i + 1], vals[i + 1]));
    }
    while let Some((t0, v0, t1, v1)) = stack.pop() {
        let d = (v1 / v0).arg();
        if d.abs() < PI / 2.0 {
            total += d;
            continue;
        }
        samples += 1;
        if samples > CONTOUR_SAMPLE_CAP {
            return Err(Error::ContourNotConverged(samples));
        }
        let tm = 0.5 * (t0 + t1);
        let zm = curve(tm);
        let vm = f(zm)?;
        check(zm, vm)?;
        stack.push((tm, vm, t1, v1));
        stack.push((t0, v0, tm, vm));
    }
    Ok((total / (2.0 * PI)).round() as i64)
}

/// Rectangle `[re0, re1] × [im0, im1]` in the `s`-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, serde::Deserialize)]
pub struct Rect {
    pub re0: f64,
    pub re1: f64,
    pub im0: f64,
    pub im1: f64,
}

impl Rect {
    /// Counter-clockwise boundary parametrised by `t ∈ [0, 1]`.
    pub fn boundary(&self, t: f64) -> Complex64 {
        let c = [
            Complex64::new(self.re0, self.im0),
            Complex64::new(self.re1, self.im0),
            Complex64::new(self.re1, self.im1),
            Complex64::new(self.re0, self.im1),
        ];
        let u = (t * 4.0).clamp(0.0, 4.0);
        let k = (u.floor() as usize).min(3);
        let f = u - k as f64;
        c[k] + (c[(k + 1) % 4] - c[k]) * f
    }
}

/// Zeros of an analytic function inside a rectangle, by the argument principle.
pub fn count_zeros_rect_fn<F>(f: &F, rect: Rect) -> Result<i64>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    if !(rect.re0 < rect.re1 && rect.im0 < rect.im1) {
        return Err(Error::Precondition(format!("degenerate rectangle {rect:?}")));
    }
    winding_number(f, |t| rect.boundary(t), 64)
}

/// Zeros of `det(1 − L_{s,ρ})` inside `rect`.
pub fn count_zeros_rect(g: &SchottkyGroup, rho: &UnitaryRep, rect: Rect, opts: &AssembleOptions) -> Result<i64> {
    count_zeros_rect_fn(&|s| zeta_det(g, s, rho, opts), rect)
}

/// Search controls for [`real_zeros`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZeroOptions {
    pub tol: f64,
    /// Number of grid intervals in the sign scan.
    pub grid: usize,
    /// Allowed `|Im f| / max|f|` on the real axis.
    pub imag_tol: f64,
}

impl Default for ZeroOptions {
    fn default() -> Self {
        ZeroOptions { tol: 1e-10, grid: 64, imag_tol: 1e-8 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Zero {
    pub re: f64,
    pub im: f64,
    pub multiplicity: usize,
    /// `s(1 − s)`.
    pub lambda: f64,
}

/// Real zeros of a function that is real on the real axis.
pub fn real_zeros_fn<F>(f: &F, lo: f64, hi: f64, zo: &ZeroOptions) -> Result<(Vec<Zero>, f64)>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    if !(lo < hi) || zo.grid < 2 {
        return Err(Error::Precondition(format!("empty search interval [{lo}, {hi}]")));
    }
    let h = (hi - lo) / zo.grid as f64;
    let xs: Vec<f64> = (0..=zo.grid).map(|i| if i == zo.grid { hi } else { lo + i as f64 * h }).collect();
    let vals: Vec<Complex64> = xs.par_iter().map(|&x| f(Complex64::new(x, 0.0))).collect::<Result<_>>()?;
    let scale = vals.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let mut max_imag_ratio: f64 = 0.0;
    for (x, v) in xs.iter().zip(&vals) {
        let ratio = v.im.abs() / scale.max(f64::MIN_POSITIVE);
        max_imag_ratio = max_imag_ratio.max(ratio);
        if ratio > zo.imag_tol {
            return Err(Error::NotReal { s: *x, ratio });
        }
    }
    let fr = |x: f64| -> Result<f64> { Ok(f(Complex64::new(x, 0.0))?.re) };
    let re: Vec<f64> = vals.iter().map(|v| v.re).collect();
    let mut cands: Vec<(f64, bool)> = Vec::new();
    for i in 0..zo.grid {
        if re[i] == 0.0 {
            cands.push((xs[i], true));
        } else if re[i + 1] != 0.0 && re[i].signum() != re[i + 1].signum() {
            cands.push((bisect(fr, xs[i], xs[i + 1], zo.tol)?, true));
        }
    }
    if re[zo.grid] == 0.0 {
        cands.push((hi, true));
    }
    // touching zeros: interior local minima of |f| without a sign change
    for i in 1..zo.grid {
        let (a, b, c) = (re[i - 1], re[i], re[i + 1]);
        if b.abs() < a.abs() && b.abs() <= c.abs() && a.signum() == b.signum() && b.signum() == c.signum() {
            let (x, fx) = golden_min(|x| Ok(fr(x)?.abs()), xs[i - 1], xs[i + 1], zo.tol)?;
            if fx <= 1e-6 * a.abs().max(c.abs()) {
                cands.push((x, false));
            }
        }
    }
    cands.sort_by(|a, b| a.0.total_cmp(&b.0));
    cands.dedup_by(|a, b| (a.0 - b.0).abs() <= 10.0 * zo.tol);
    let mut zeros = Vec::new();
    for (i, &(x, sign_change)) in cands.iter().enumerate() {
        let mut r = (5.0 * zo.tol).max(1e-3);
        let gap = [i.checked_sub(1).map(|j| x - cands[j].0), cands.get(i + 1).map(|c| c.0 - x)]
            .into_iter()
            .flatten()
            .fold(f64::INFINITY, f64::min);
        r = r.min(0.4 * gap);
        let w = winding_number(f, |t| Complex64::new(x, 0.0) + Complex64::from_polar(r, 2.0 * PI * t), 16)?;
        let mult = if sign_change { w.max(1) } else { w.max(0) } as usize;
        if mult > 0 {
            zeros.push(Zero { re: x, im: 0.0, multiplicity: mult, lambda: x * (1.0 - x) });
        }
    }
    Ok((zeros, max_imag_ratio))
}

/// Golden-section minimisation on `[a, b]`.
fn golden_min(mut f: impl FnMut(f64) -> Result<f64>, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, f64)> {
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    while b - a > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc < fd { (c, fc) } else { (d, fd) })
}

#[derive(Debug, Clone, Serialize)]
pub struct ZeroReport {
    pub rep: String,
    pub lo: f64,
    pub hi: f64,
    pub zeros: Vec<Zero>,
    pub n: usize,
    pub tau: Option<f64>,
    pub tol: f64,
    pub grid: usize,
    pub max_imag_ratio: f64,
}

impl ZeroReport {
    /// Zeros counted with multiplicity.
    pub fn count(&self) -> usize {
        self.zeros.iter().map(|z| z.multiplicity).sum()
    }

    /// CSV with columns `re_s, im_s, multiplicity, lambda`.
    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["re_s", "im_s", "multiplicity", "lambda"])?;
        for z in &self.zeros {
            out.write_record([fmt17(z.re), fmt17(z.im), z.multiplicity.to_string(), fmt17(z.lambda)])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Round-trip-safe float formatting with 17 significant digits.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Real zeros of `Z_Γ(·, ρ)` in `[lo, hi]`, `0 < lo < hi`.
pub fn real_zeros(g: &SchottkyGroup, rho: &UnitaryRep, lo: f64, hi: f64, zo: &ZeroOptions, opts: &AssembleOptions) -> Result<ZeroReport> {
    if !(lo > 0.0) {
        return Err(Error::Precondition(format!("search interval must lie in s > 0, got lo = {lo}")));
    }
    let (zeros, max_imag_ratio) = real_zeros_fn(&|s| zeta_det(g, s, rho, opts), lo, hi, zo)?;
    Ok(ZeroReport { rep: rho.label.clone(), lo, hi, zeros, n: opts.n, tau: None, tol: zo.tol, grid: zo.grid, max_imag_ratio })
}

/// `N_p(σ)`: real zeros of `Z_Γ(·, λ_p⁰)` in `[σ, δ]` with multiplicity.
pub fn new_eigenvalue_count(g: &SchottkyGroup, p: u64, sigma: f64, delta: f64, zo: &ZeroOptions, opts: &AssembleOptions) -> Result<usize> {
    let rho = congruence::rep_lambda_p0(g, p)?;
    let dim = g.alphabet_size() * opts.n * rho.dim;
    if dim > opts.dim_cap {
        return Err(Error::DimensionCap { dim, cap: opts.dim_cap });
    }
    if !(sigma > 0.0) {
        return Err(Error::Precondition(format!("sigma must be positive, got {sigma}")));
    }
    if sigma > delta {
        return Ok(0);
    }
    let hi = delta + 10.0 * zo.tol;
    let lo = sigma.min(hi - 1e-6);
    Ok(real_zeros(g, &rho, lo, hi, zo, opts)?.count())
}

//! Zeta functions as Fredholm determinants of the assembled matrices.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, LogDet};
use crate::schottky::{Partition, SchottkyGroup};
use crate::transfer::{assemble, AssembleOptions, UnitaryRep, WordSet};

/// `Z_Γ(s, ρ) = det(1 − L_{s,ρ})`.
pub fn zeta_det(g: &SchottkyGroup, s: Complex64, rho: &UnitaryRep, opts: &AssembleOptions) -> Result<Complex64> {
    let m = assemble(g, WordSet::Standard, s, rho, opts)?;
    Ok(linalg::det(linalg::identity_plus(m.matrix.as_ref(), -1.0).as_ref()))
}

/// `log|Z_Γ(s, ρ)|` and its phase, safe against overflow for large `dim ρ`.
pub fn zeta_log_det(g: &SchottkyGroup, s: Complex64, rho: &UnitaryRep, opts: &AssembleOptions) -> Result<LogDet> {
    let m = assemble(g, WordSet::Standard, s, rho, opts)?;
    Ok(linalg::log_det(linalg::identity_plus(m.matrix.as_ref(), -1.0).as_ref()))
}

/// `ζ_τ(s, ρ) = det(1 − L²_{τ,s,ρ})`, evaluated as `det(1 − L)·det(1 + L)`.
pub fn refined_zeta_log(g: &SchottkyGroup, p: &Partition, s: Complex64, rho: &UnitaryRep, opts: &AssembleOptions) -> Result<LogDet> {
    let m = assemble(g, WordSet::Refined(p), s, rho, opts)?;
    let minus = linalg::log_det(linalg::identity_plus(m.matrix.as_ref(), -1.0).as_ref());
    let plus = linalg::log_det(linalg::identity_plus(m.matrix.as_ref(), 1.0).as_ref());
    Ok(minus.mul(&plus))
}

pub fn refined_zeta(g: &SchottkyGroup, p: &Partition, s: Complex64, rho: &UnitaryRep, opts: &AssembleOptions) -> Result<Complex64> {
    Ok(refined_zeta_log(g, p, s, rho, opts)?.value())
}

/// Double `N` from `opts.n` until `f` changes by less than `tol` relative; returns the value and the final `N`.
pub fn converge_in_n(
    opts: &AssembleOptions,
    n_cap: usize,
    tol: f64,
    mut f: impl FnMut(&AssembleOptions) -> Result<Complex64>,
) -> Result<(Complex64, usize)> {
    let mut o = *opts;
    let mut prev = f(&o)?;
    let mut change = f64::INFINITY;
    while 2 * o.n <= n_cap {
        o.n *= 2;
        let cur = f(&o)?;
        change = (cur - prev).norm() / cur.norm().max(f64::MIN_POSITIVE);
        if change < tol {
            return Ok((cur, o.n));
        }
        prev = cur;
    }
    Err(Error::TruncationNotConverged { n: o.n, change })
}

/// Leading eigenvalue modulus of the standard operator.
pub fn leading_eigenvalue(g: &SchottkyGroup, s: f64, rho: &UnitaryRep, opts: &AssembleOptions) -> Result<f64> {
    let m = assemble(g, WordSet::Standard, Complex64::new(s, 0.0), rho, opts)?;
    linalg::spectral_radius(m.matrix.as_ref())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn doubled_rep_squares_determinant() {
        let g = SchottkyGroup::gamma_m(2);
        let t = UnitaryRep::trivial(2);
        let tt = t.direct_sum(&t).unwrap();
        let o = AssembleOptions::with_n(12);
        for s in [Complex64::new(0.9, 0.0), Complex64::new(0.4, 2.0)] {
            let a = zeta_det(&g, s, &t, &o).unwrap();
            let b = zeta_det(&g, s, &tt, &o).unwrap();
            assert!((b - a * a).norm() < 1e-10 * (1.0 + (a * a).norm()));
        }
    }

    #[test]
    fn truncation_converges() {
        let g = SchottkyGroup::gamma_m(2);
        let t = UnitaryRep::trivial(2);
        let s = Complex64::new(0.6, 1.0);
        let (v, n) = converge_in_n(&AssembleOptions::with_n(8), 128, 1e-8, |o| zeta_det(&g, s, &t, o)).unwrap();
        assert!(n <= 64);
        assert!(v.norm().is_finite());
    }

    #[test]
    fn leading_eigenvalue_decreases() {
        let g = SchottkyGroup::gamma_m(2);
        let t = UnitaryRep::trivial(2);
        let o = AssembleOptions::with_n(12);
        let a = leading_eigenvalue(&g, 0.2, &t, &o).unwrap();
        let b = leading_eigenvalue(&g, 0.4, &t, &o).unwrap();
        assert!(a > 1.0 && b < 1.0, "{a} {b}");
    }
}

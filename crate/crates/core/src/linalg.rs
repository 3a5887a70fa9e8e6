//! Thin wrappers over `faer` for the dense complex kernels used by the
//! zeta engine: determinants (plain and logarithmic) and eigenvalues.

use faer::dyn_stack::{MemBuffer, MemStack};
use faer::linalg::lu::partial_pivoting::factor::{lu_in_place, lu_in_place_scratch};
use faer::{Mat, MatRef, Par};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Determinant split as `exp(log_abs) * phase` with `|phase| = 1`.
///
/// `log_abs` is `-inf` (and `phase` is zero) for a singular matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogDet {
    pub log_abs: f64,
    pub phase: Complex64,
}

impl LogDet {
    pub fn one() -> Self {
        LogDet { log_abs: 0.0, phase: Complex64::new(1.0, 0.0) }
    }

    /// Recombine into a plain complex value (may overflow to infinity).
    pub fn value(&self) -> Complex64 {
        if self.log_abs == f64::NEG_INFINITY {
            return Complex64::new(0.0, 0.0);
        }
        self.phase * self.log_abs.exp()
    }

    pub fn mul(&self, other: &LogDet) -> LogDet {
        LogDet { log_abs: self.log_abs + other.log_abs, phase: self.phase * other.phase }
    }
}

/// LU with partial pivoting, returning the factored matrix and the parity of
/// the row permutation.
fn lu_factor(a: MatRef<'_, Complex64>) -> (Mat<Complex64>, bool) {
    assert_eq!(a.nrows(), a.ncols(), "determinant of a non-square matrix");
    let n = a.nrows();
    let mut factors = a.to_owned();
    let mut fwd = vec![0usize; n];
    let mut bwd = vec![0usize; n];
    let par = Par::Seq;
    let mut buf = MemBuffer::new(lu_in_place_scratch::<usize, Complex64>(n, n, par, Default::default()));
    let (info, _) = lu_in_place(
        factors.as_mut(),
        &mut fwd,
        &mut bwd,
        par,
        MemStack::new(&mut buf),
        Default::default(),
    );
    (factors, info.transposition_count % 2 == 1)
}

/// Determinant by dense LU with partial pivoting.
pub fn det(a: MatRef<'_, Complex64>) -> Complex64 {
    if a.nrows() == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let (f, odd) = lu_factor(a);
    let mut d = Complex64::new(1.0, 0.0);
    for i in 0..f.nrows() {
        d *= f[(i, i)];
    }
    if odd {
        -d
    } else {
        d
    }
}

/// Logarithmic determinant: sums `ln|u_ii|` so large matrices cannot overflow.
pub fn log_det(a: MatRef<'_, Complex64>) -> LogDet {
    if a.nrows() == 0 {
        return LogDet::one();
    }
    let (f, odd) = lu_factor(a);
    let mut log_abs = 0.0;
    let mut phase = Complex64::new(if odd { -1.0 } else { 1.0 }, 0.0);
    for i in 0..f.nrows() {
        let u = f[(i, i)];
        let r = u.norm();
        if r == 0.0 {
            return LogDet { log_abs: f64::NEG_INFINITY, phase: Complex64::new(0.0, 0.0) };
        }
        log_abs += r.ln();
        phase *= u / r;
    }
    // renormalise accumulated drift in the unit phase
    phase /= phase.norm();
    LogDet { log_abs, phase }
}

/// `I + c·A` for a scalar `c`.
pub fn identity_plus(a: MatRef<'_, Complex64>, c: f64) -> Mat<Complex64> {
    let n = a.nrows();
    Mat::from_fn(n, n, |i, j| {
        let v = a[(i, j)] * c;
        if i == j {
            v + 1.0
        } else {
            v
        }
    })
}

/// All eigenvalues of a square complex matrix.
pub fn eigenvalues(a: MatRef<'_, Complex64>) -> Result<Vec<Complex64>> {
    let owned = a.to_owned();
    owned
        .eigenvalues()
        .map_err(|e| Error::Precondition(format!("eigenvalue solver failed: {e:?}")))
}

/// Largest eigenvalue modulus.
pub fn spectral_radius(a: MatRef<'_, Complex64>) -> Result<f64> {
    Ok(eigenvalues(a)?.iter().map(|z| z.norm()).fold(0.0, f64::max))
}

/// Frobenius norm.
pub fn frobenius(a: MatRef<'_, Complex64>) -> f64 {
    let mut acc = 0.0;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            acc += a[(i, j)].norm_sqr();
        }
    }
    acc.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn det_of_permutation_has_sign() {
        let p = Mat::from_fn(3, 3, |i, j| if (i + 1) % 3 == j { c(1.0, 0.0) } else { c(0.0, 0.0) });
        assert!((det(p.as_ref()) - c(1.0, 0.0)).norm() < 1e-14);
        let swap = Mat::from_fn(2, 2, |i, j| if i != j { c(1.0, 0.0) } else { c(0.0, 0.0) });
        assert!((det(swap.as_ref()) + c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn log_det_matches_det() {
        let a = Mat::from_fn(5, 5, |i, j| c((i * 7 + j * 3) as f64 % 5.0 - 2.0, (i as f64 - j as f64) * 0.3));
        let d = det(a.as_ref());
        let l = log_det(a.as_ref());
        assert!((l.value() - d).norm() < 1e-10 * d.norm().max(1.0));
    }

    #[test]
    fn log_det_survives_overflow() {
        let n = 400;
        let a = Mat::from_fn(n, n, |i, j| if i == j { c(1e3, 0.0) } else { c(0.0, 0.0) });
        let l = log_det(a.as_ref());
        assert!(!det(a.as_ref()).norm().is_finite());
        assert!((l.log_abs - n as f64 * 1e3f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn eigenvalues_of_diagonal() {
        let a = Mat::from_fn(3, 3, |i, j| if i == j { c(i as f64 + 1.0, 0.0) } else { c(0.0, 0.0) });
        assert!((spectral_radius(a.as_ref()).unwrap() - 3.0).abs() < 1e-12);
    }
}

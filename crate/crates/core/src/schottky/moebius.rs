//! Exact integer Möbius matrices and their action on the Riemann sphere.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A point of the extended complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtComplex {
    Finite(Complex64),
    Infinity,
}

impl ExtComplex {
    pub fn real(x: f64) -> Self {
        ExtComplex::Finite(Complex64::new(x, 0.0))
    }

    pub fn finite(self) -> Option<Complex64> {
        match self {
            ExtComplex::Finite(z) => Some(z),
            ExtComplex::Infinity => None,
        }
    }
}

/// Integer matrix `[[a, b], [c, d]]`; group elements have `ad − bc = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MoebiusMatrix {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl MoebiusMatrix {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>, d: impl Into<BigInt>) -> Self {
        MoebiusMatrix { a: a.into(), b: b.into(), c: c.into(), d: d.into() }
    }

    pub fn identity() -> Self {
        Self::new(1, 0, 0, 1)
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn trace(&self) -> BigInt {
        &self.a + &self.d
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.d.is_one() && self.b.is_zero() && self.c.is_zero()
    }

    /// Adjugate, which is the inverse when the determinant is one.
    pub fn inverse(&self) -> Self {
        MoebiusMatrix { a: self.d.clone(), b: -&self.b, c: -&self.c, d: self.a.clone() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        MoebiusMatrix {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }

    /// Exact `a² + b² + c² + d²`.
    pub fn norm_sq(&self) -> BigInt {
        &self.a * &self.a + &self.b * &self.b + &self.c * &self.c + &self.d * &self.d
    }

    /// Frobenius norm, rounded from the exact square.
    pub fn norm(&self) -> f64 {
        self.norm_sq().to_f64().unwrap_or(f64::INFINITY).sqrt()
    }

    /// Floating copy `[a, b, c, d]` for analytic evaluation.
    pub fn to_f64(&self) -> MoebiusF64 {
        let f = |x: &BigInt| x.to_f64().unwrap_or(f64::NAN);
        MoebiusF64 { a: f(&self.a), b: f(&self.b), c: f(&self.c), d: f(&self.d) }
    }

    /// True if the matrix is `±I` modulo `q`.
    pub fn is_pm_identity_mod(&self, q: &BigInt) -> bool {
        let r = |x: &BigInt| ((x % q) + q) % q;
        if !r(&self.b).is_zero() || !r(&self.c).is_zero() {
            return false;
        }
        let (a, d) = (r(&self.a), r(&self.d));
        let minus_one = q - BigInt::one();
        (a.is_one() && d.is_one()) || (a == minus_one && d == minus_one)
    }

    pub fn apply(&self, z: ExtComplex) -> ExtComplex {
        self.to_f64().apply(z)
    }

    /// `γ′(z) = 1/(cz+d)²`.
    pub fn derivative(&self, z: Complex64) -> Result<Complex64> {
        self.to_f64().derivative(z)
    }

    /// `exp(s·𝕃(γ′(z)))` with the principal logarithm.
    pub fn derivative_power(&self, z: Complex64, s: Complex64) -> Result<Complex64> {
        self.to_f64().derivative_power(z, s)
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.trace().abs() > BigInt::from(2)
    }
}

impl fmt::Display for MoebiusMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

impl Serialize for MoebiusMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let e = |x: &BigInt| x.to_string();
        [[e(&self.a), e(&self.b)], [e(&self.c), e(&self.d)]].serialize(s)
    }
}

/// Floating-point Möbius map used on hot evaluation paths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoebiusF64 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl MoebiusF64 {
    pub fn mul(&self, o: &Self) -> Self {
        MoebiusF64 {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    pub fn apply(&self, z: ExtComplex) -> ExtComplex {
        match z {
            ExtComplex::Infinity => {
                if self.c == 0.0 {
                    ExtComplex::Infinity
                } else {
                    ExtComplex::real(self.a / self.c)
                }
            }
            ExtComplex::Finite(z) => {
                let den = z * self.c + self.d;
                if den == Complex64::new(0.0, 0.0) {
                    ExtComplex::Infinity
                } else {
                    ExtComplex::Finite((z * self.a + self.b) / den)
                }
            }
        }
    }

    /// Image of a finite point; callers guarantee it is not the pole.
    #[inline]
    pub fn map(&self, z: Complex64) -> Complex64 {
        (z * self.a + self.b) / (z * self.c + self.d)
    }

    #[inline]
    pub fn map_real(&self, x: f64) -> f64 {
        (self.a * x + self.b) / (self.c * x + self.d)
    }

    pub fn derivative(&self, z: Complex64) -> Result<Complex64> {
        let den = z * self.c + self.d;
        if den.norm() == 0.0 {
            return Err(Error::Pole);
        }
        let inv = den.inv();
        Ok(inv * inv)
    }

    pub fn derivative_power(&self, z: Complex64, s: Complex64) -> Result<Complex64> {
        let g = self.derivative(z)?;
        if g.re < 0.0 && g.im.abs() <= 1e-14 * g.norm() {
            return Err(Error::BranchCut(g.re));
        }
        if s == Complex64::new(0.0, 0.0) {
            return Ok(Complex64::new(1.0, 0.0));
        }
        let log = Complex64::new(g.norm().ln(), g.arg());
        Ok((s * log).exp())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g1() -> MoebiusMatrix {
        MoebiusMatrix::new(4, 15, 1, 4)
    }

    #[test]
    fn identity_fixes_i() {
        let i = Complex64::new(0.0, 1.0);
        assert_eq!(MoebiusMatrix::identity().apply(ExtComplex::Finite(i)), ExtComplex::Finite(i));
    }

    #[test]
    fn g1_infinity_and_pole() {
        assert_eq!(g1().apply(ExtComplex::Infinity), ExtComplex::real(4.0));
        assert_eq!(g1().apply(ExtComplex::real(-4.0)), ExtComplex::Infinity);
    }

    #[test]
    fn derivative_power_oracles() {
        let z = Complex64::new(4.0, 0.0);
        let v = g1().derivative_power(z, Complex64::new(1.0, 0.0)).unwrap();
        assert!((v - Complex64::new(1.0 / 64.0, 0.0)).norm() < 1e-16);
        let v0 = g1().derivative_power(Complex64::new(3.7, 0.2), Complex64::new(0.0, 0.0)).unwrap();
        assert_eq!(v0, Complex64::new(1.0, 0.0));
        let vi = MoebiusMatrix::identity()
            .derivative_power(Complex64::new(-7.0, 2.0), Complex64::new(2.0, 3.0))
            .unwrap();
        assert!((vi - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn derivative_errors() {
        assert!(matches!(g1().derivative(Complex64::new(-4.0, 0.0)), Err(Error::Pole)));
        // 1/(z+4)² is negative real at z = −4 + i
        assert!(matches!(
            g1().derivative_power(Complex64::new(-4.0, 1.0), Complex64::new(0.5, 0.0)),
            Err(Error::BranchCut(_))
        ));
    }

    #[test]
    fn inverse_and_norm() {
        let g = g1();
        assert!(g.mul(&g.inverse()).is_identity());
        assert_eq!(g.norm_sq(), BigInt::from(16 + 225 + 1 + 16));
        assert!(MoebiusMatrix::new(-1, 0, 0, -1).is_pm_identity_mod(&BigInt::from(5)));
        assert!(MoebiusMatrix::new(6, 5, 10, 11).is_pm_identity_mod(&BigInt::from(5)));
        assert!(!g.is_pm_identity_mod(&BigInt::from(5)));
    }
}

//! Primitive conjugacy classes and truncated Euler products.

use faer::Mat;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg;
use crate::schottky::{SchottkyGroup, Word};
use crate::transfer::UnitaryRep;

/// A primitive hyperbolic class, represented by its lexicographically
/// minimal cyclic rotation.
#[derive(Debug, Clone, Serialize)]
pub struct PrimitiveClass {
    pub word: Word,
    #[serde(serialize_with = "ser_bigint")]
    pub trace: BigInt,
    /// `ℓ = 2·arccosh(|tr|/2)`.
    pub length: f64,
}

fn ser_bigint<S: serde::Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// `2·arccosh(|t|/2)`, computed stably for huge traces.
pub fn trace_to_length(t: &BigInt) -> f64 {
    let a = t.abs();
    match a.to_f64() {
        Some(x) if x.is_finite() && x < 1e150 => 2.0 * (x / 2.0).acosh(),
        _ => {
            // arccosh(x/2) = ln x + O(x⁻²)
            let shift = a.bits().saturating_sub(64);
            let top = (&a >> shift).to_f64().unwrap_or(f64::NAN);
            2.0 * (top.ln() + shift as f64 * std::f64::consts::LN_2)
        }
    }
}

fn is_min_rotation_and_primitive(w: &[usize]) -> bool {
    let n = w.len();
    for r in 1..n {
        let rotated = w[r..].iter().chain(&w[..r]);
        match rotated.cmp(w.iter()) {
            std::cmp::Ordering::Less => return false,
            // equal rotation ⇒ proper period ⇒ a power
            std::cmp::Ordering::Equal => return false,
            std::cmp::Ordering::Greater => {}
        }
    }
    true
}

/// One representative per primitive class of word length `1..=len_max`.
pub fn primitive_classes(g: &SchottkyGroup, len_max: usize) -> Vec<PrimitiveClass> {
    let mut out = Vec::new();
    for n in 1..=len_max {
        for w in g.words_of_length(n) {
            if g.is_cyclically_reduced(&w) && is_min_rotation_and_primitive(&w.0) {
                let trace = g.word_matrix(&w).trace();
                let length = trace_to_length(&trace);
                out.push(PrimitiveClass { word: w, trace, length });
            }
        }
    }
    out
}

/// Euler-product result with convergence bookkeeping.
#[derive(Debug, Clone, Serialize)]
pub struct EulerProduct {
    pub value: [f64; 2],
    pub len_max: usize,
    pub classes: usize,
    pub k_max: usize,
    /// `Σ dim ρ · e^{−σℓ}` over the classes of each word length.
    pub shell_sums: Vec<f64>,
}

impl EulerProduct {
    pub fn complex(&self) -> Complex64 {
        Complex64::new(self.value[0], self.value[1])
    }
}

/// `Π_γ Π_k det(I − ρ(γ) e^{−(s+k)ℓ(γ)})` over classes of word length `≤ len_max`.
pub fn euler_product(g: &SchottkyGroup, s: Complex64, rho: &UnitaryRep, len_max: usize) -> Result<EulerProduct> {
    let classes = primitive_classes(g, len_max);
    euler_product_over(&classes, s, rho, len_max)
}

pub fn euler_product_over(classes: &[PrimitiveClass], s: Complex64, rho: &UnitaryRep, len_max: usize) -> Result<EulerProduct> {
    if classes.is_empty() {
        return Ok(EulerProduct { value: [1.0, 0.0], len_max, classes: 0, k_max: 0, shell_sums: vec![] });
    }
    let sigma = s.re;
    let l_min = classes.iter().map(|c| c.length).fold(f64::INFINITY, f64::min);
    // smallest k with e^{−(σ+k)ℓ_min} < 1e−16
    let k_max = ((16.0 * std::f64::consts::LN_10 / l_min) - sigma).ceil().max(0.0) as usize;
    let mut shell_sums = vec![0.0; len_max];
    let mut log_total = Complex64::new(0.0, 0.0);
    for c in classes {
        shell_sums[c.word.len() - 1] += rho.dim as f64 * (-sigma * c.length).exp();
        let img = (rho.dim > 1).then(|| rho.word_image(&c.word));
        let scalar = word_scalar(rho, &c.word);
        for k in 0..=k_max {
            let x = (-(s + k as f64) * c.length).exp();
            let factor = match &img {
                None => Complex64::new(1.0, 0.0) - scalar * x,
                Some(m) => {
                    let a = Mat::from_fn(rho.dim, rho.dim, |i, j| -m[(i, j)] * x);
                    linalg::det(linalg::identity_plus(a.as_ref(), 1.0).as_ref())
                }
            };
            log_total += factor.ln();
        }
    }
    if len_max >= 2 {
        let (last, prev) = (shell_sums[len_max - 1], shell_sums[len_max - 2]);
        if last >= prev {
            return Err(Error::EulerDivergent { len_max, last, prev });
        }
    }
    let v = log_total.exp();
    Ok(EulerProduct { value: [v.re, v.im], len_max, classes: classes.len(), k_max, shell_sums })
}

fn word_scalar(rho: &UnitaryRep, w: &Word) -> Complex64 {
    w.0.iter().map(|&a| rho.images[a][(0, 0)]).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn length_one_classes() {
        let g = SchottkyGroup::gamma_m(2);
        let c = primitive_classes(&g, 1);
        assert_eq!(c.len(), 4);
        assert_eq!(c[0].trace, BigInt::from(8));
        assert!((c[0].length - 2.0 * 4f64.acosh()).abs() < 1e-14);
        assert!((c[0].length - 4.12687).abs() < 1e-5);
    }

    #[test]
    fn necklace_counts() {
        // cyclically reduced words in F_2: C(n) = 3ⁿ + 1 + (1 + (−1)ⁿ) = 4, 12, 28, 84;
        // primitive necklaces P(n) = (1/n) Σ_{d|n} μ(n/d) C(d) = 4, 4, 8, 18
        let g = SchottkyGroup::gamma_m(2);
        let c = primitive_classes(&g, 4);
        let counts: Vec<usize> = (1..=4).map(|n| c.iter().filter(|x| x.word.len() == n).count()).collect();
        assert_eq!(counts, vec![4, 4, 8, 18]);
        assert!(c.iter().all(|x| x.trace.abs() > BigInt::from(2)));
    }

    #[test]
    fn empty_product_is_one() {
        let g = SchottkyGroup::gamma_m(2);
        let e = euler_product(&g, Complex64::new(2.0, 0.0), &UnitaryRep::trivial(2), 0).unwrap();
        assert_eq!(e.complex(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn single_class_factor() {
        let g = SchottkyGroup::gamma_m(1);
        let c = primitive_classes(&g, 1);
        let s = Complex64::new(1.3, 0.2);
        let one = euler_product_over(&c[..1], s, &UnitaryRep::trivial(1), 1).unwrap();
        let l = c[0].length;
        let expected: Complex64 = (0..=one.k_max).map(|k| Complex64::new(1.0, 0.0) - (-(s + k as f64) * l).exp()).product();
        assert!((one.complex() - expected).norm() < 1e-15);
    }

    #[test]
    fn huge_trace_length() {
        let t = BigInt::from(10).pow(400);
        let l = trace_to_length(&t);
        assert!((l - 2.0 * 400.0 * std::f64::consts::LN_10).abs() < 1e-6 * l);
    }
}

//! Gauss–Legendre nodes and the polar product rule on a disk.

use std::f64::consts::PI;

use num_complex::Complex64;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, z);
        dp = if d != 0.0 { d } else { dp };
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// `(P_n(z), P_n′(z))` by the three-term recurrence.
fn legendre(n: usize, z: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, z);
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    (p1, n as f64 * (z * p1 - p0) / (z * z - 1.0))
}

/// Polar tensor rule on the disk `|z − center| < radius`: `q` Gauss–Legendre
/// radial nodes (weight `r dr`) times `2q` equispaced angles.
pub fn disk_rule(center: f64, radius: f64, q: usize) -> Vec<(Complex64, f64)> {
    let (x, w) = gauss_legendre(q);
    let na = 2 * q;
    let mut out = Vec::with_capacity(q * na);
    for (xi, wi) in x.iter().zip(&w) {
        let r = 0.5 * (xi + 1.0) * radius;
        let wr = 0.5 * radius * wi * r * (2.0 * PI / na as f64);
        for k in 0..na {
            let th = 2.0 * PI * k as f64 / na as f64;
            out.push((Complex64::new(center, 0.0) + Complex64::from_polar(r, th), wr));
        }
    }
    out
}

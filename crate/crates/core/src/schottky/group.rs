//! Schottky groups: disks on the real line paired by integer generators.

use num_complex::Complex64;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::moebius::{ExtComplex, MoebiusF64, MoebiusMatrix};
use crate::error::{Error, Result, Violation};

/// Closed disk centered on the real axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    pub center: f64,
    pub radius: f64,
}

impl Disk {
    pub fn contains(&self, z: Complex64) -> bool {
        (z - Complex64::new(self.center, 0.0)).norm() <= self.radius
    }
}

/// Raw group description as read from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub m: usize,
    pub disks: Vec<Disk>,
    pub generators: Vec<[[i64; 2]; 2]>,
    #[serde(default = "standard_pairing")]
    pub pairing: String,
}

fn standard_pairing() -> String {
    "standard".into()
}

impl GroupSpec {
    /// The family `g_k = [[4k, 16k²−1], [1, 4k]]`, `k = 1..m`, with unit disks at `±4k`.
    ///
    /// Letter `k−1` is `g_k` (disk at `+4k`), letter `k−1+m` its inverse (disk at `−4k`).
    pub fn gamma_m(m: usize) -> Self {
        let mut disks = Vec::with_capacity(2 * m);
        let mut generators = Vec::with_capacity(2 * m);
        for sign in [1i64, -1] {
            for k in 1..=m as i64 {
                disks.push(Disk { center: (sign * 4 * k) as f64, radius: 1.0 });
                generators.push([[4 * k, sign * (16 * k * k - 1)], [sign, 4 * k]]);
            }
        }
        GroupSpec { m, disks, generators, pairing: standard_pairing() }
    }

    /// Resolve `"gamma_m:<m>"` names.
    pub fn named(name: &str) -> Result<Self> {
        let m = name
            .strip_prefix("gamma_m:")
            .and_then(|m| m.parse::<usize>().ok())
            .filter(|&m| m >= 1)
            .ok_or_else(|| Error::Config(format!("unknown group name {name:?}, expected gamma_m:<m>")))?;
        Ok(Self::gamma_m(m))
    }
}

/// A validated Schottky group. Letters are `0..2m`, with `bar(a) = (a + m) mod 2m`.
#[derive(Debug, Clone)]
pub struct SchottkyGroup {
    pub m: usize,
    pub disks: Vec<Disk>,
    pub generators: Vec<MoebiusMatrix>,
    pub(crate) gens_f64: Vec<MoebiusF64>,
    pub spec: GroupSpec,
}

/// Boundary samples used by the mapping check.
const BOUNDARY_SAMPLES: usize = 64;

/// Check every group invariant, collecting all violations.
pub fn validate_group(spec: &GroupSpec) -> Result<SchottkyGroup> {
    let mut v = Vec::new();
    let mut push = |code: &str, detail: String| v.push(Violation { code: code.into(), detail });
    let m = spec.m;
    if m == 0 {
        push("empty", "m must be at least 1".into());
    }
    if spec.pairing != "standard" {
        push("pairing", format!("unsupported pairing {:?}", spec.pairing));
    }
    if spec.disks.len() != 2 * m || spec.generators.len() != 2 * m {
        push(
            "count",
            format!("expected {} disks and generators, got {} and {}", 2 * m, spec.disks.len(), spec.generators.len()),
        );
        return Err(Error::InvalidGroup(v));
    }
    let gens: Vec<MoebiusMatrix> =
        spec.generators.iter().map(|g| MoebiusMatrix::new(g[0][0], g[0][1], g[1][0], g[1][1])).collect();
    for (i, d) in spec.disks.iter().enumerate() {
        if !(d.radius > 0.0 && d.radius.is_finite() && d.center.is_finite()) {
            push("disk", format!("disk {} has invalid center/radius {:?}", i + 1, d));
        }
    }
    for (i, g) in gens.iter().enumerate() {
        if !g.det().is_one() {
            push("not_unimodular", format!("generator {} = {} has determinant {}", i + 1, g, g.det()));
        }
    }
    for i in 0..2 * m {
        for j in i + 1..2 * m {
            let (a, b) = (spec.disks[i], spec.disks[j]);
            if (a.center - b.center).abs() <= a.radius + b.radius {
                push("overlap", format!("closed disks {} and {} intersect", i + 1, j + 1));
            }
        }
    }
    for a in 0..m {
        if gens[a + m] != gens[a].inverse() {
            push("pairing", format!("generator {} is not the inverse of generator {}", a + m + 1, a + 1));
        }
    }
    for a in 0..2 * m {
        let abar = (a + m) % (2 * m);
        let (da, db) = (spec.disks[a], spec.disks[abar]);
        let g = gens[a].to_f64();
        let ca = Complex64::new(da.center, 0.0);
        let mut boundary_bad = 0;
        let mut exterior_bad = 0;
        for k in 0..BOUNDARY_SAMPLES {
            let th = 2.0 * std::f64::consts::PI * (k as f64 + 0.5) / BOUNDARY_SAMPLES as f64;
            let u = Complex64::from_polar(1.0, th);
            let z = Complex64::new(db.center, 0.0) + u * db.radius;
            match g.apply(ExtComplex::Finite(z)) {
                ExtComplex::Finite(w) if ((w - ca).norm() - da.radius).abs() <= 1e-9 * da.radius.max(1.0) => {}
                _ => boundary_bad += 1,
            }
            for scale in [1.5, 4.0, 1e3] {
                let z = Complex64::new(db.center, 0.0) + u * (db.radius * scale);
                match g.apply(ExtComplex::Finite(z)) {
                    ExtComplex::Finite(w) if (w - ca).norm() < da.radius => {}
                    _ => exterior_bad += 1,
                }
            }
        }
        match g.apply(ExtComplex::Infinity) {
            ExtComplex::Finite(w) if (w - ca).norm() < da.radius => {}
            _ => exterior_bad += 1,
        }
        if boundary_bad > 0 {
            push(
                "mapping_boundary",
                format!("generator {} maps {} boundary samples of disk {} off the boundary of disk {}", a + 1, boundary_bad, abar + 1, a + 1),
            );
        }
        if exterior_bad > 0 {
            push(
                "mapping_exterior",
                format!("generator {} maps {} exterior samples of disk {} outside disk {}", a + 1, exterior_bad, abar + 1, a + 1),
            );
        }
    }
    if !v.is_empty() {
        return Err(Error::InvalidGroup(v));
    }
    let gens_f64 = gens.iter().map(|g| g.to_f64()).collect();
    Ok(SchottkyGroup { m, disks: spec.disks.clone(), generators: gens, gens_f64, spec: spec.clone() })
}

impl SchottkyGroup {
    /// Validated member of the explicit family.
    pub fn gamma_m(m: usize) -> Self {
        validate_group(&GroupSpec::gamma_m(m)).expect("the explicit family is a Schottky group")
    }

    pub fn alphabet_size(&self) -> usize {
        2 * self.m
    }

    #[inline]
    pub fn bar(&self, a: usize) -> usize {
        (a + self.m) % (2 * self.m)
    }

    pub fn generator(&self, a: usize) -> &MoebiusMatrix {
        &self.generators[a]
    }

    pub fn generator_f64(&self, a: usize) -> &MoebiusF64 {
        &self.gens_f64[a]
    }

    /// Interval diameter of the smallest single-letter disk.
    pub fn min_letter_diameter(&self) -> f64 {
        self.disks.iter().map(|d| 2.0 * d.radius).fold(f64::INFINITY, f64::min)
    }
}

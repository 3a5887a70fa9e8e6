//! Finite-dimensional unitary representations given on generator letters.

use faer::Mat;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::schottky::Word;

const UNITARY_TOL: f64 = 1e-12;

/// Letter `a ↦ ρ(γ_a)`, with `ρ(γ_ā) = ρ(γ_a)*`.
#[derive(Debug, Clone)]
pub struct UnitaryRep {
    pub dim: usize,
    pub label: String,
    /// Indexed by letter `0..2m`.
    pub images: Vec<Mat<Complex64>>,
}

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

fn adjoint(a: &Mat<Complex64>) -> Mat<Complex64> {
    Mat::from_fn(a.ncols(), a.nrows(), |i, j| a[(j, i)].conj())
}

fn max_dev_from_identity(a: &Mat<Complex64>) -> f64 {
    let mut dev: f64 = 0.0;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            let t = if i == j { one() } else { zero() };
            dev = dev.max((a[(i, j)] - t).norm());
        }
    }
    dev
}

impl UnitaryRep {
    /// Validate images on all `2m` letters.
    pub fn from_matrices(label: impl Into<String>, m: usize, images: Vec<Mat<Complex64>>) -> Result<Self> {
        if images.len() != 2 * m || images.is_empty() {
            return Err(Error::InvalidRep(format!("expected {} letter images, got {}", 2 * m, images.len())));
        }
        let dim = images[0].nrows();
        for (a, x) in images.iter().enumerate() {
            if x.nrows() != dim || x.ncols() != dim {
                return Err(Error::InvalidRep(format!("image of letter {} is not {dim}x{dim}", a + 1)));
            }
            let dev = max_dev_from_identity(&(x * adjoint(x)));
            if dev > UNITARY_TOL {
                return Err(Error::InvalidRep(format!("image of letter {} is not unitary (deviation {dev:e})", a + 1)));
            }
        }
        for a in 0..m {
            let dev = max_dev_from_identity(&(&images[a] * &images[a + m]));
            if dev > UNITARY_TOL {
                return Err(Error::InvalidRep(format!("images of letters {} and {} are not inverse", a + 1, a + m + 1)));
            }
        }
        Ok(UnitaryRep { dim, label: label.into(), images })
    }

    /// Images on the letters `0..m`; inverses are filled in as adjoints.
    pub fn from_generators(label: impl Into<String>, gens: Vec<Mat<Complex64>>) -> Result<Self> {
        let m = gens.len();
        let mut images = gens.clone();
        images.extend(gens.iter().map(adjoint));
        Self::from_matrices(label, m, images)
    }

    pub fn trivial(m: usize) -> Self {
        UnitaryRep { dim: 1, label: "trivial".into(), images: vec![Mat::from_fn(1, 1, |_, _| one()); 2 * m] }
    }

    /// Permutation representation: `[x, y] = 1` iff letter `a` sends `x` to `y`.
    pub fn from_permutations(label: impl Into<String>, perms: &[Vec<usize>]) -> Result<Self> {
        let m = perms.len() / 2;
        let images = perms
            .iter()
            .map(|p| Mat::from_fn(p.len(), p.len(), |x, y| if p[x] == y { one() } else { zero() }))
            .collect();
        Self::from_matrices(label, m, images)
    }

    pub fn direct_sum(&self, o: &UnitaryRep) -> Result<Self> {
        if self.images.len() != o.images.len() {
            return Err(Error::InvalidRep("direct sum of representations of different groups".into()));
        }
        let (d1, d2) = (self.dim, o.dim);
        let images = self
            .images
            .iter()
            .zip(&o.images)
            .map(|(a, b)| {
                Mat::from_fn(d1 + d2, d1 + d2, |i, j| match (i < d1, j < d1) {
                    (true, true) => a[(i, j)],
                    (false, false) => b[(i - d1, j - d1)],
                    _ => zero(),
                })
            })
            .collect();
        Ok(UnitaryRep { dim: d1 + d2, label: format!("{}+{}", self.label, o.label), images })
    }

    /// `U ρ U*` for a unitary `U`.
    pub fn conjugate(&self, u: &Mat<Complex64>) -> Result<Self> {
        let ua = adjoint(u);
        let images = self.images.iter().map(|x| u * x * &ua).collect();
        Self::from_matrices(format!("{}^U", self.label), self.images.len() / 2, images)
    }

    pub fn identity(&self) -> Mat<Complex64> {
        Mat::from_fn(self.dim, self.dim, |i, j| if i == j { one() } else { zero() })
    }

    /// `ρ(γ_w)` as a product of letter images.
    pub fn word_image(&self, w: &Word) -> Mat<Complex64> {
        w.0.iter().fold(self.identity(), |acc, &a| acc * &self.images[a])
    }

    /// `ρ(γ_w)⁻¹ = ρ(γ_w)*`.
    pub fn word_image_inverse(&self, w: &Word) -> Mat<Complex64> {
        adjoint(&self.word_image(w))
    }

    /// Every image has zero imaginary part, so `Z(s̄, ρ) = conj Z(s, ρ)`.
    pub fn is_real(&self) -> bool {
        self.images.iter().all(|m| (0..m.nrows()).all(|i| (0..m.ncols()).all(|j| m[(i, j)].im == 0.0)))
    }

    pub fn is_trivial(&self) -> bool {
        self.dim == 1 && self.images.iter().all(|x| (x[(0, 0)] - one()).norm() == 0.0)
    }
}

/// `tr(X Y)` without forming the product.
pub fn trace_of_product(x: &Mat<Complex64>, y: &Mat<Complex64>) -> Complex64 {
    let mut t = zero();
    for i in 0..x.nrows() {
        for j in 0..x.ncols() {
            t += x[(i, j)] * y[(j, i)];
        }
    }
    t
}

pub fn trace(x: &Mat<Complex64>) -> Complex64 {
    (0..x.nrows()).map(|i| x[(i, i)]).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schottky::SchottkyGroup;

    fn rotation(theta: f64) -> Mat<Complex64> {
        let (c, s) = (theta.cos(), theta.sin());
        Mat::from_fn(2, 2, |i, j| Complex64::new([[c, -s], [s, c]][i][j], 0.0))
    }

    #[test]
    fn trivial_and_sum() {
        let t = UnitaryRep::trivial(2);
        assert!(t.is_trivial());
        let tt = t.direct_sum(&t).unwrap();
        assert_eq!(tt.dim, 2);
        assert_eq!(tt.label, "trivial+trivial");
    }

    #[test]
    fn homomorphism_on_words() {
        let g = SchottkyGroup::gamma_m(2);
        let r = UnitaryRep::from_generators("rot", vec![rotation(0.3), rotation(1.1)]).unwrap();
        for w in g.words_up_to(3) {
            let inv = r.word_image(&g.mirror(&w));
            let p = r.word_image(&w) * inv;
            assert!(max_dev_from_identity(&p) < 1e-12);
            assert!(max_dev_from_identity(&(r.word_image(&w) * r.word_image_inverse(&w))) < 1e-12);
        }
    }

    #[test]
    fn rejects_non_unitary() {
        let mut a = rotation(0.2);
        a[(0, 0)] *= 2.0;
        assert!(UnitaryRep::from_generators("bad", vec![a, rotation(0.1)]).is_err());
        assert!(UnitaryRep::from_matrices("bad", 1, vec![rotation(0.2), rotation(0.2)]).is_err());
    }

    #[test]
    fn permutation_rep_is_homomorphic() {
        // letter 0: 0→1→2→0, letter 1: swap 0,1
        let perms = vec![vec![1, 2, 0], vec![1, 0, 2], vec![2, 0, 1], vec![1, 0, 2]];
        let r = UnitaryRep::from_permutations("perm", &perms).unwrap();
        let w = Word(vec![0, 1]);
        let img = r.word_image(&w);
        // x·(letter0)·(letter1): 0→1→0, 1→2→2, 2→0→1
        for (x, y) in [(0, 0), (1, 2), (2, 1)] {
            assert_eq!(img[(x, y)], one());
        }
        assert_eq!(trace(&img), one());
    }
}

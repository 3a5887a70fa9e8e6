//! Nested intervals `I_w`, the distortion weights `Υ_w`, and τ-partitions.

use serde::Serialize;

use super::group::SchottkyGroup;
use super::moebius::MoebiusF64;
use super::word::Word;
use crate::error::{Error, Result};

/// Default cap on the number of words visited by [`SchottkyGroup::partition`].
pub const DEFAULT_WORD_CAP: usize = 1_000_000;

/// Interval data attached to a word.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WordData {
    pub word: Word,
    pub left: f64,
    pub right: f64,
    pub diameter: f64,
    pub upsilon: f64,
}

/// One summand of the refined operator: the map `γ_word` feeding target disk `target`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RefinedTerm {
    pub word: Word,
    pub target: usize,
}

/// The sets `Z(τ)` and `Y(τ) = (Z̄)′` with their metadata.
#[derive(Debug, Clone, Serialize)]
pub struct Partition {
    pub tau: f64,
    pub z: Vec<WordData>,
    pub y: Vec<WordData>,
    /// Pairs `(v̄′, last letter of v̄)` for `v ∈ Z(τ)`, i.e. `a ∈ Y(τ)` with `a b ∈ Z̄(τ)`.
    pub terms: Vec<RefinedTerm>,
    pub words_visited: usize,
}

fn image_interval(g: &MoebiusF64, center: f64, radius: f64) -> (f64, f64, f64) {
    let (x1, x2) = (center - radius, center + radius);
    let (y1, y2) = (g.map_real(x1), g.map_real(x2));
    let diameter = (x2 - x1) / ((g.c * x1 + g.d) * (g.c * x2 + g.d)).abs();
    (y1.min(y2), y1.max(y2), diameter)
}

impl SchottkyGroup {
    /// `I_w = γ_{w′}(D_{w_n}) ∩ ℝ` as `(left, right)`.
    pub fn interval(&self, w: &Word) -> Result<(f64, f64)> {
        let (l, r, _) = self.interval_with_diameter(w)?;
        Ok((l, r))
    }

    /// `|I_w|`, with `|I_∅| = +∞`.
    pub fn diameter(&self, w: &Word) -> Result<f64> {
        if w.is_empty() {
            return Ok(f64::INFINITY);
        }
        Ok(self.interval_with_diameter(w)?.2)
    }

    fn interval_with_diameter(&self, w: &Word) -> Result<(f64, f64, f64)> {
        let last = w.last().ok_or_else(|| Error::Precondition("interval of the empty word".into()))?;
        self.check_reduced(w)?;
        let g = self.word_matrix(&w.prefix()).to_f64();
        let d = self.disks[last];
        Ok(image_interval(&g, d.center, d.radius))
    }

    /// Lowest letter `b` with `w → b`; its disk center is the test point `o_w`.
    pub fn test_letter(&self, w: &Word) -> usize {
        (0..self.alphabet_size()).find(|&b| self.arrow(w, b)).expect("m >= 1 leaves an admissible letter")
    }

    /// `Υ_w = |γ_w′(o_w)|`.
    pub fn upsilon(&self, w: &Word) -> Result<f64> {
        if w.is_empty() {
            return Err(Error::Precondition("upsilon of the empty word".into()));
        }
        self.check_reduced(w)?;
        let g = self.word_matrix(w).to_f64();
        let o = self.disks[self.test_letter(w)].center;
        let den = g.c * o + g.d;
        Ok(1.0 / (den * den))
    }

    fn word_data(&self, w: &Word) -> Result<WordData> {
        let (left, right, diameter) = self.interval_with_diameter(w)?;
        Ok(WordData { word: w.clone(), left, right, diameter, upsilon: self.upsilon(w)? })
    }

    /// `Z(τ)` by depth-first descent while `|I_w| > τ`, then `Y(τ)` and the refined terms.
    pub fn partition(&self, tau: f64, word_cap: usize) -> Result<Partition> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::Precondition(format!("tau must be positive, got {tau}")));
        }
        let mut z = Vec::new();
        let mut visited = 0usize;
        let mut stack: Vec<Word> = (0..self.alphabet_size()).rev().map(Word::letter).collect();
        while let Some(w) = stack.pop() {
            visited += 1;
            if visited > word_cap {
                return Err(Error::WordCap(word_cap));
            }
            if self.diameter(&w)? <= tau {
                if w.len() < 2 {
                    return Err(Error::TauTooLarge { tau, len: w.len() });
                }
                z.push(w);
            } else {
                for b in (0..self.alphabet_size()).rev() {
                    if self.arrow(&w, b) {
                        stack.push(w.push(b));
                    }
                }
            }
        }
        let mut terms: Vec<RefinedTerm> = z
            .iter()
            .map(|v| {
                let vb = self.mirror(v);
                RefinedTerm { word: vb.prefix(), target: vb.last().unwrap() }
            })
            .collect();
        terms.sort_by(|a, b| (a.target, &a.word).cmp(&(b.target, &b.word)));
        let mut y: Vec<Word> = terms.iter().map(|t| t.word.clone()).collect();
        y.sort();
        y.dedup();
        Ok(Partition {
            tau,
            z: z.iter().map(|w| self.word_data(w)).collect::<Result<_>>()?,
            y: y.iter().map(|w| self.word_data(w)).collect::<Result<_>>()?,
            terms,
            words_visited: visited,
        })
    }
}

impl Partition {
    /// Re-check `|I_w| ≤ τ < |I_{w′}|` for every `w ∈ Z(τ)`.
    pub fn verify(&self, g: &SchottkyGroup) -> Result<()> {
        for e in &self.z {
            let parent = g.diameter(&e.word.prefix())?;
            if !(e.diameter <= self.tau && self.tau < parent) {
                return Err(Error::Precondition(format!(
                    "partition condition fails at {}: |I_w| = {}, |I_w'| = {parent}",
                    e.word, e.diameter
                )));
            }
        }
        Ok(())
    }

    /// Number of elements of `Z(τ)` that are prefixes of `w`.
    pub fn prefixes_in_z(&self, w: &Word) -> usize {
        self.z.iter().filter(|e| e.word.is_prefix_of(w)).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_letter_interval_is_the_disk() {
        let g = SchottkyGroup::gamma_m(2);
        for a in 0..4 {
            let (l, r) = g.interval(&Word::letter(a)).unwrap();
            let d = g.disks[a];
            assert_eq!((l, r), (d.center - d.radius, d.center + d.radius));
        }
    }

    #[test]
    fn intervals_nest_and_separate() {
        let g = SchottkyGroup::gamma_m(2);
        let ws = g.words_up_to(5);
        let iv: Vec<_> = ws.iter().map(|w| g.interval(w).unwrap()).collect();
        for (i, w) in ws.iter().enumerate() {
            for (j, v) in ws.iter().enumerate() {
                if i == j {
                    continue;
                }
                let ((a0, a1), (b0, b1)) = (iv[i], iv[j]);
                if w.is_prefix_of(v) {
                    assert!(a0 <= b0 && b1 <= a1, "{w} {v}");
                } else if !v.is_prefix_of(w) {
                    assert!(a1 < b0 || b1 < a0, "{w} {v} overlap");
                }
            }
        }
    }

    #[test]
    fn diameter_matches_endpoints() {
        let g = SchottkyGroup::gamma_m(3);
        for w in g.words_up_to(4) {
            let (l, r) = g.interval(&w).unwrap();
            let d = g.diameter(&w).unwrap();
            assert!(((r - l) - d).abs() <= 1e-13 + 1e-10 * d, "{w}");
        }
    }

    #[test]
    fn upsilon_single_letter() {
        let g = SchottkyGroup::gamma_m(2);
        // g₁′(z) = 1/(z+4)², tested at the center of disk 1 (letter 0, at +4)
        let u = g.upsilon(&Word::letter(0)).unwrap();
        assert!((u - 1.0 / 64.0).abs() < 1e-16);
        // g₁⁻¹′(z) = 1/(4−z)²; letter 0 is barred after letter 2, so o = 8
        let u = g.upsilon(&Word::letter(2)).unwrap();
        assert!((u - 1.0 / 16.0).abs() < 1e-16);
    }

    #[test]
    fn partition_is_a_partition() {
        let g = SchottkyGroup::gamma_m(2);
        let p = g.partition(2f64.powi(-6), DEFAULT_WORD_CAP).unwrap();
        p.verify(&g).unwrap();
        for w in g.words_of_length(8) {
            assert_eq!(p.prefixes_in_z(&w), 1, "{w}");
        }
        // intervals of Z pairwise disjoint
        let mut iv: Vec<_> = p.z.iter().map(|e| (e.left, e.right)).collect();
        iv.sort_by(|a, b| a.0.total_cmp(&b.0));
        assert!(iv.windows(2).all(|p| p[0].1 < p[1].0));
        assert_eq!(p.terms.len(), p.z.len());
        for t in &p.terms {
            assert!(g.arrow(&t.word, t.target));
            assert!(p.y.iter().any(|e| e.word == t.word));
        }
    }

    #[test]
    fn partition_rejects_large_tau_and_caps() {
        let g = SchottkyGroup::gamma_m(2);
        assert!(matches!(g.partition(2.5, DEFAULT_WORD_CAP), Err(Error::TauTooLarge { .. })));
        assert!(matches!(g.partition(1e-9, 100), Err(Error::WordCap(100))));
    }

    #[test]
    fn refinement_is_monotone() {
        let g = SchottkyGroup::gamma_m(2);
        let coarse = g.partition(2f64.powi(-6), DEFAULT_WORD_CAP).unwrap();
        let fine = g.partition(2f64.powi(-9), DEFAULT_WORD_CAP).unwrap();
        for e in &fine.z {
            assert_eq!(coarse.prefixes_in_z(&e.word), 1);
        }
    }
}

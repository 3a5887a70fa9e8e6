//! Reduced words over the alphabet `0..2m` and their matrices.

use std::fmt;

use serde::{Serialize, Serializer};

use super::group::SchottkyGroup;
use super::moebius::{MoebiusF64, MoebiusMatrix};
use crate::error::{Error, Result};

/// A word in the letters `0..2m`. Printed 1-based, e.g. `(1,2)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(a: usize) -> Self {
        Word(vec![a])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<usize> {
        self.0.last().copied()
    }

    /// `w′`: the word with its last letter removed.
    pub fn prefix(&self) -> Word {
        let mut v = self.0.clone();
        v.pop();
        Word(v)
    }

    pub fn push(&self, a: usize) -> Word {
        let mut v = self.0.clone();
        v.push(a);
        Word(v)
    }

    pub fn concat(&self, o: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&o.0);
        Word(v)
    }

    /// True if `self` is a (not necessarily proper) prefix of `o`.
    pub fn is_prefix_of(&self, o: &Word) -> bool {
        o.0.starts_with(&self.0)
    }

    /// Parse a 1-based letter list such as `"1,2,4"`.
    pub fn parse(s: &str, g: &SchottkyGroup) -> Result<Word> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        if s.is_empty() {
            return Ok(Word::empty());
        }
        let mut v = Vec::new();
        for t in s.split(',') {
            let a: usize = t.trim().parse().map_err(|_| Error::Config(format!("bad letter {t:?}")))?;
            if a == 0 || a > g.alphabet_size() {
                return Err(Error::Config(format!("letter {a} outside 1..={}", g.alphabet_size())));
            }
            v.push(a - 1);
        }
        let w = Word(v);
        g.check_reduced(&w)?;
        Ok(w)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", a + 1)?;
        }
        write!(f, ")")
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter().map(|a| a + 1))
    }
}

impl SchottkyGroup {
    pub fn is_reduced(&self, w: &Word) -> bool {
        w.0.windows(2).all(|p| p[1] != self.bar(p[0]))
    }

    pub fn check_reduced(&self, w: &Word) -> Result<()> {
        match w.0.windows(2).position(|p| p[1] == self.bar(p[0])) {
            Some(i) => Err(Error::NotReduced(i)),
            None => Ok(()),
        }
    }

    /// `a → b`: the concatenation `a b` is reduced. The empty word precedes everything.
    #[inline]
    pub fn arrow(&self, a: &Word, b: usize) -> bool {
        a.last().is_none_or(|l| b != self.bar(l))
    }

    /// Mirror word: reversed and barred, so that its matrix is the inverse.
    pub fn mirror(&self, w: &Word) -> Word {
        Word(w.0.iter().rev().map(|&a| self.bar(a)).collect())
    }

    /// Cyclically reduced: reduced and first letter not the inverse of the last.
    pub fn is_cyclically_reduced(&self, w: &Word) -> bool {
        self.is_reduced(w) && (w.len() <= 1 || w.0[0] != self.bar(w.0[w.len() - 1]))
    }

    /// All reduced words of length `n`, in lexicographic order.
    pub fn words_of_length(&self, n: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        for _ in 0..n {
            let mut next = Vec::with_capacity(out.len() * (2 * self.m));
            for w in &out {
                for b in 0..self.alphabet_size() {
                    if self.arrow(w, b) {
                        next.push(w.push(b));
                    }
                }
            }
            out = next;
        }
        out
    }

    /// All reduced words of length `1..=n`, shortest first.
    pub fn words_up_to(&self, n: usize) -> Vec<Word> {
        (1..=n).flat_map(|k| self.words_of_length(k)).collect()
    }

    /// Exact product `γ_{w_1} ⋯ γ_{w_n}`.
    pub fn word_matrix(&self, w: &Word) -> MoebiusMatrix {
        w.0.iter().fold(MoebiusMatrix::identity(), |acc, &a| acc.mul(&self.generators[a]))
    }

    pub fn word_matrix_f64(&self, w: &Word) -> MoebiusF64 {
        w.0.iter().fold(MoebiusF64 { a: 1.0, b: 0.0, c: 0.0, d: 1.0 }, |acc, &a| acc.mul(&self.gens_f64[a]))
    }
}

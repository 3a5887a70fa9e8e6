//! Reduction modulo primes, the action on the projective line, and the
//! induced representations `λ_p = 1 ⊕ λ_p⁰`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::{Mutex, OnceLock};

use faer::Mat;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::arithmetic::kronecker_bigint;
use crate::error::{Error, Result};
use crate::schottky::{MoebiusMatrix, SchottkyGroup};
use crate::transfer::UnitaryRep;

/// Default cap on `|SL₂(𝔽_p)|` for closure enumeration.
pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

/// A 2×2 matrix over `ℤ/q`, entries in `0..q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ModMatrix {
    pub q: u64,
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
}

impl ModMatrix {
    pub fn identity(q: u64) -> Self {
        ModMatrix { q, a: 1 % q, b: 0, c: 0, d: 1 % q }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let q = self.q as u128;
        let f = |x: u64, y: u64, z: u64, w: u64| ((x as u128 * y as u128 + z as u128 * w as u128) % q) as u64;
        ModMatrix {
            q: self.q,
            a: f(self.a, o.a, self.b, o.c),
            b: f(self.a, o.b, self.b, o.d),
            c: f(self.c, o.a, self.d, o.c),
            d: f(self.c, o.b, self.d, o.d),
        }
    }

    pub fn det(&self) -> u64 {
        let q = self.q as u128;
        let ad = self.a as u128 * self.d as u128 % q;
        let bc = self.b as u128 * self.c as u128 % q;
        ((ad + q - bc) % q) as u64
    }

    fn key(&self) -> [u64; 4] {
        [self.a, self.b, self.c, self.d]
    }
}

fn residue(x: &BigInt, q: u64) -> u64 {
    let q = BigInt::from(q);
    (((x % &q) + &q) % &q).to_u64().expect("residue fits in u64")
}

/// Entrywise reduction modulo `q ≥ 2`.
pub fn reduce_mod(g: &MoebiusMatrix, q: u64) -> ModMatrix {
    ModMatrix { q, a: residue(&g.a, q), b: residue(&g.b, q), c: residue(&g.c, q), d: residue(&g.d, q) }
}

/// Size of the subgroup of `SL₂(ℤ/q)` generated by the reductions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Surjectivity {
    pub p: u64,
    pub surjective: bool,
    pub closure_size: u64,
}

fn closure_size(gens: &[ModMatrix], q: u64) -> u64 {
    let id = ModMatrix::identity(q);
    let mut seen: HashSet<[u64; 4]> = HashSet::new();
    seen.insert(id.key());
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.mul(g);
            if seen.insert(y.key()) {
                queue.push_back(y);
            }
        }
    }
    seen.len() as u64
}

type SurjCache = Mutex<HashMap<(u64, Vec<[u64; 4]>), Surjectivity>>;

fn cache() -> &'static SurjCache {
    static CACHE: OnceLock<SurjCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Whether `Γ → SL₂(𝔽_p)` is onto, decided by breadth-first closure.
pub fn surjective_mod_p(g: &SchottkyGroup, p: u64, cap: u64) -> Result<Surjectivity> {
    let order = p.checked_mul(p * p - 1).unwrap_or(u64::MAX);
    if order > cap {
        return Err(Error::EnumerationCap { size: order, cap });
    }
    let gens: Vec<ModMatrix> = (0..g.m).map(|a| reduce_mod(g.generator(a), p)).collect();
    let key = (p, gens.iter().map(|m| m.key()).collect::<Vec<_>>());
    if let Some(s) = cache().lock().unwrap().get(&key) {
        return Ok(*s);
    }
    let size = closure_size(&gens, p);
    let s = Surjectivity { p, surjective: size == order, closure_size: size };
    cache().lock().unwrap().insert(key, s);
    Ok(s)
}

/// The projective line `ℙ¹(𝔽_p)`: index `x < p` is `(1 : x)`, index `p` is `(0 : 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ProjLine {
    pub p: u64,
}

impl ProjLine {
    pub fn len(&self) -> usize {
        self.p as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn point(&self, i: usize) -> (u64, u64) {
        if (i as u64) < self.p {
            (1, i as u64)
        } else {
            (0, 1)
        }
    }

    /// Canonical index of the line through the nonzero vector `(u, v)`.
    pub fn index(&self, u: u64, v: u64) -> usize {
        let p = self.p;
        if u % p == 0 {
            p as usize
        } else {
            (v % p * mod_inverse(u % p, p) % p) as usize
        }
    }

    /// Right action `[(u, v)] ↦ [(u, v)·g]`.
    pub fn act(&self, i: usize, g: &ModMatrix) -> usize {
        let (u, v) = self.point(i);
        let p = self.p;
        self.index((u * g.a + v * g.c) % p, (u * g.b + v * g.d) % p)
    }
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // Fermat, p prime
    let (mut base, mut e, mut r) = (a % p, p - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * base as u128 % p as u128) as u64;
        }
        base = (base as u128 * base as u128 % p as u128) as u64;
        e >>= 1;
    }
    r
}

/// Permutation `x ↦ x·g` of the lines.
pub fn coset_perm(g: &MoebiusMatrix, p: u64) -> Vec<usize> {
    let line = ProjLine { p };
    let r = reduce_mod(g, p);
    (0..line.len()).map(|i| line.act(i, &r)).collect()
}

/// Number of lines fixed by `g`.
pub fn fixed_lines(g: &MoebiusMatrix, p: u64) -> usize {
    coset_perm(g, p).iter().enumerate().filter(|(i, &j)| *i == j).count()
}

/// A prime with verified surjective reduction.
#[derive(Debug, Clone)]
pub struct CongruenceContext {
    pub p: u64,
    pub surjectivity: Surjectivity,
}

impl CongruenceContext {
    pub fn new(g: &SchottkyGroup, p: u64) -> Result<Self> {
        Self::with_cap(g, p, DEFAULT_ENUMERATION_CAP)
    }

    pub fn with_cap(g: &SchottkyGroup, p: u64, cap: u64) -> Result<Self> {
        if p < 2 || !crate::arithmetic::is_prime(p) {
            return Err(Error::Precondition(format!("{p} is not prime")));
        }
        let s = surjective_mod_p(g, p, cap)?;
        if !s.surjective {
            return Err(Error::NotSurjective(p));
        }
        Ok(CongruenceContext { p, surjectivity: s })
    }

    /// `tr λ_p⁰(g)`: fixed lines minus one.
    pub fn trace_bruteforce(&self, g: &MoebiusMatrix) -> i64 {
        fixed_lines(g, self.p) as i64 - 1
    }

    /// `p` if `g ≡ ±I`, else the Kronecker symbol of `tr(g)² − 4` at `p`.
    pub fn trace_formula(&self, g: &MoebiusMatrix) -> i64 {
        if g.is_pm_identity_mod(&BigInt::from(self.p)) {
            return self.p as i64;
        }
        let t = g.trace();
        kronecker_bigint(&(&t * &t - 4), self.p) as i64
    }
}

/// `tr λ_p⁰(g)` by counting fixed lines.
pub fn trace_bruteforce(group: &SchottkyGroup, g: &MoebiusMatrix, p: u64) -> Result<i64> {
    Ok(CongruenceContext::new(group, p)?.trace_bruteforce(g))
}

/// `tr λ_p⁰(g)` by the discriminant formula.
pub fn trace_formula(group: &SchottkyGroup, g: &MoebiusMatrix, p: u64) -> Result<i64> {
    Ok(CongruenceContext::new(group, p)?.trace_formula(g))
}

fn letter_perms(g: &SchottkyGroup, p: u64) -> Vec<Vec<usize>> {
    (0..g.alphabet_size()).map(|a| coset_perm(g.generator(a), p)).collect()
}

/// `λ_p` as a `(p+1)`-dimensional permutation representation.
pub fn rep_lambda_p(g: &SchottkyGroup, p: u64) -> Result<UnitaryRep> {
    CongruenceContext::new(g, p)?;
    UnitaryRep::from_permutations(format!("lambda_{p}"), &letter_perms(g, p))
}

/// Orthonormal Helmert basis of the sum-zero subspace of `ℂ^{n+1}`, as columns.
pub fn helmert_basis(n: usize) -> Mat<f64> {
    Mat::from_fn(n + 1, n, |i, k| {
        let k1 = (k + 1) as f64;
        let norm = (k1 * (k1 + 1.0)).sqrt();
        if i <= k {
            1.0 / norm
        } else if i == k + 1 {
            -k1 / norm
        } else {
            0.0
        }
    })
}

/// `λ_p⁰`: the permutation matrices restricted to the sum-zero subspace.
pub fn rep_lambda_p0(g: &SchottkyGroup, p: u64) -> Result<UnitaryRep> {
    CongruenceContext::new(g, p)?;
    let n = p as usize;
    let h = helmert_basis(n);
    let images = letter_perms(g, p)
        .iter()
        .map(|perm| {
            // (Hᵀ P H)[i, j] = Σ_x H[x, i] H[perm(x), j]
            let mut out = Mat::<f64>::zeros(n, n);
            for x in 0..=n {
                for i in 0..n {
                    let hx = h[(x, i)];
                    if hx == 0.0 {
                        continue;
                    }
                    for j in 0..n {
                        out[(i, j)] += hx * h[(perm[x], j)];
                    }
                }
            }
            Mat::from_fn(n, n, |i, j| Complex64::new(out[(i, j)], 0.0))
        })
        .collect();
    UnitaryRep::from_matrices(format!("lambda0_{p}"), g.m, images)
}

/// Outcome of the congruence norm bound for one element.
#[derive(Debug, Clone, Serialize)]
pub struct NormCheck {
    pub q: u64,
    pub norm: f64,
    pub bound: f64,
    pub passes: bool,
    /// `tr(g) mod q²` in `0..q²`.
    pub trace_residue: u64,
    /// Whether `tr(g) ≡ ±2 mod q²`.
    pub trace_congruence: bool,
}

/// For hyperbolic `g ≡ ±I mod q`: is `‖g‖ > q²/3`, and is `tr g ≡ ±2 mod q²`?
pub fn congruence_norm_check(g: &MoebiusMatrix, q: u64) -> Result<NormCheck> {
    if !g.is_hyperbolic() {
        return Err(Error::Precondition(format!("{g} is not hyperbolic")));
    }
    if !g.is_pm_identity_mod(&BigInt::from(q)) {
        return Err(Error::Precondition(format!("{g} is not ±I mod {q}")));
    }
    let q2 = q * q;
    let bound = q2 as f64 / 3.0;
    // ‖g‖² > q⁴/9 decided exactly
    let passes = BigInt::from(9) * g.norm_sq() > BigInt::from(q2) * BigInt::from(q2);
    let tr = residue(&g.trace(), q2);
    let trace_congruence = tr == 2 % q2 || (tr + 2) % q2 == 0;
    Ok(NormCheck { q, norm: g.norm(), bound, passes, trace_residue: tr, trace_congruence })
}

/// Surjectivity rows `(p, surjective, closure_size)` for CSV export.
pub fn surjectivity_table(g: &SchottkyGroup, primes: &[u64]) -> Result<Vec<Surjectivity>> {
    primes.iter().map(|&p| surjective_mod_p(g, p, DEFAULT_ENUMERATION_CAP)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schottky::Word;
    use crate::transfer::trace;

    #[test]
    fn reduction_oracles() {
        assert_eq!(reduce_mod(&MoebiusMatrix::identity(), 7), ModMatrix::identity(7));
        let r = reduce_mod(&MoebiusMatrix::new(4, 15, 1, 4), 5);
        assert_eq!((r.a, r.b, r.c, r.d), (4, 0, 1, 4));
        assert_eq!(reduce_mod(&MoebiusMatrix::new(-4, -15, -1, 4), 5).b, 0);
        let g = SchottkyGroup::gamma_m(2);
        for (i, w) in g.words_up_to(4).iter().enumerate().take(100) {
            let q = 4 + (i as u64 % 47);
            assert_eq!(reduce_mod(&g.word_matrix(w), q).det(), 1 % q);
        }
    }

    #[test]
    fn surjectivity_oracles() {
        let g = SchottkyGroup::gamma_m(2);
        let s = surjective_mod_p(&g, 5, DEFAULT_ENUMERATION_CAP).unwrap();
        assert!(s.surjective);
        assert_eq!(s.closure_size, 120);
        assert!(!surjective_mod_p(&g, 3, DEFAULT_ENUMERATION_CAP).unwrap().surjective);
        assert!(matches!(surjective_mod_p(&g, 1009, 1000), Err(Error::EnumerationCap { .. })));
        // generators ≡ I mod p
        let gens = [ModMatrix::identity(7)];
        assert_eq!(closure_size(&gens, 7), 1);
        // order independence
        let a = reduce_mod(g.generator(0), 7);
        let b = reduce_mod(g.generator(1), 7);
        assert_eq!(closure_size(&[a, b], 7), closure_size(&[b, a], 7));
    }

    #[test]
    fn projective_line_is_canonical() {
        let l = ProjLine { p: 7 };
        let pts: HashSet<_> = (0..l.len()).map(|i| l.point(i)).collect();
        assert_eq!(pts.len(), 8);
        for i in 0..l.len() {
            let (u, v) = l.point(i);
            assert_eq!(l.index(3 * u % 7, 3 * v % 7), i);
        }
    }

    #[test]
    fn permutations_are_homomorphic() {
        let g = SchottkyGroup::gamma_m(2);
        assert_eq!(coset_perm(&MoebiusMatrix::identity(), 7), (0..8).collect::<Vec<_>>());
        for w in g.words_up_to(4) {
            let pw = coset_perm(&g.word_matrix(&w), 7);
            let pinv = coset_perm(&g.word_matrix(&g.mirror(&w)), 7);
            assert!((0..8).all(|x| pinv[pw[x]] == x));
        }
    }

    #[test]
    fn trace_oracles() {
        let g = SchottkyGroup::gamma_m(2);
        let c13 = CongruenceContext::new(&g, 13).unwrap();
        let c7 = CongruenceContext::new(&g, 7).unwrap();
        let c11 = CongruenceContext::new(&g, 11).unwrap();
        let g1 = g.generator(0);
        assert_eq!(c13.trace_formula(g1), -1);
        assert_eq!(c7.trace_formula(g1), 1);
        assert_eq!(c11.trace_formula(&MoebiusMatrix::identity()), 11);
        assert_eq!(c11.trace_bruteforce(&MoebiusMatrix::identity()), 11);
        let g12 = g.word_matrix(&Word(vec![0, 1]));
        assert_eq!(c13.trace_bruteforce(&g12), kronecker_bigint(&BigInt::from(20160), 13) as i64);
        assert!(matches!(CongruenceContext::new(&g, 3), Err(Error::NotSurjective(3))));
    }

    #[test]
    fn lambda_p0_matches_trace_formula() {
        let g = SchottkyGroup::gamma_m(2);
        let ctx = CongruenceContext::new(&g, 7).unwrap();
        let r = rep_lambda_p0(&g, 7).unwrap();
        assert_eq!(r.dim, 7);
        assert!((trace(&r.word_image(&Word::empty())) - Complex64::new(7.0, 0.0)).norm() < 1e-12);
        for w in g.words_up_to(3) {
            let t = trace(&r.word_image(&w));
            assert!((t.re - ctx.trace_formula(&g.word_matrix(&w)) as f64).abs() < 1e-9, "{w}");
        }
    }

    #[test]
    fn norm_check() {
        let g = SchottkyGroup::gamma_m(2);
        assert!(congruence_norm_check(g.generator(0), 5).is_err());
        // g₁² ≡ ? mod 2: g₁ = [[0,1],[1,0]] mod 2, so g₁² ≡ I
        let g11 = g.word_matrix(&Word(vec![0, 0]));
        let c = congruence_norm_check(&g11, 2).unwrap();
        assert!(c.passes && c.trace_congruence);
    }
}

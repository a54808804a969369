//! Sparse noncommutative polynomials over ℤ in the letters a, b or c, d.
//!
//! Words are packed into a `u64`: letter `j` (0-based, left to right) is bit `j`, with
//! `a`/`c` as 0 and `b`/`d` as 1. Up to 63 letters are supported.

use std::collections::BTreeMap;
use std::fmt;
use std::hash::Hash;

use crate::error::{Error, Result};

pub const MAX_LETTERS: usize = 63;

/// A monomial in one of the two alphabets.
pub trait Word: Copy + Ord + Hash + fmt::Debug + Send + Sync {
    const LETTERS: [char; 2];
    fn from_parts(len: usize, bits: u64) -> Self;
    fn len(&self) -> usize;
    fn bits(&self) -> u64;
    /// Weighted degree (`deg d = 2` for cd-words).
    fn degree(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn empty() -> Self {
        Self::from_parts(0, 0)
    }

    fn letter(&self, j: usize) -> bool {
        self.bits() >> j & 1 == 1
    }

    fn concat(&self, other: &Self) -> Self {
        assert!(self.len() + other.len() <= MAX_LETTERS, "word too long");
        Self::from_parts(
            self.len() + other.len(),
            self.bits() | other.bits() << self.len(),
        )
    }

    /// The word with its last `k` letters removed, when those letters equal `suffix`.
    fn strip_suffix(&self, suffix: &Self) -> Option<Self> {
        let k = suffix.len();
        if k > self.len() {
            return None;
        }
        let head = self.len() - k;
        if self.bits() >> head == suffix.bits() {
            Some(Self::from_parts(head, self.bits() & ((1u64 << head) - 1)))
        } else {
            None
        }
    }

    fn from_str_word(s: &str) -> Option<Self> {
        if s.len() > MAX_LETTERS {
            return None;
        }
        let mut bits = 0u64;
        for (j, ch) in s.chars().enumerate() {
            if ch == Self::LETTERS[1] {
                bits |= 1 << j;
            } else if ch != Self::LETTERS[0] {
                return None;
            }
        }
        Some(Self::from_parts(s.chars().count(), bits))
    }

    fn to_word_string(&self) -> String {
        (0..self.len())
            .map(|j| Self::LETTERS[self.letter(j) as usize])
            .collect()
    }
}

/// A word over {a, b}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AbWord {
    len: u8,
    bits: u64,
}

/// A word over {c, d}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CdWord {
    len: u8,
    bits: u64,
}

impl Word for AbWord {
    const LETTERS: [char; 2] = ['a', 'b'];
    fn from_parts(len: usize, bits: u64) -> Self {
        Self {
            len: len as u8,
            bits,
        }
    }
    fn len(&self) -> usize {
        self.len as usize
    }
    fn bits(&self) -> u64 {
        self.bits
    }
    fn degree(&self) -> usize {
        self.len as usize
    }
}

impl Word for CdWord {
    const LETTERS: [char; 2] = ['c', 'd'];
    fn from_parts(len: usize, bits: u64) -> Self {
        Self {
            len: len as u8,
            bits,
        }
    }
    fn len(&self) -> usize {
        self.len as usize
    }
    fn bits(&self) -> u64 {
        self.bits
    }
    fn degree(&self) -> usize {
        self.len as usize + self.bits.count_ones() as usize
    }
}

impl AbWord {
    /// The characteristic monomial `w_S` of a rank-set bitmask (bit `i-1` for `i ∈ S`).
    pub fn characteristic(n: usize, mask: u64) -> Self {
        Self::from_parts(n, mask)
    }

    pub fn a() -> Self {
        Self::from_parts(1, 0)
    }

    pub fn b() -> Self {
        Self::from_parts(1, 1)
    }

    /// Exchanges a and b.
    pub fn swap(&self) -> Self {
        let mask = if self.len == 0 {
            0
        } else {
            u64::MAX >> (64 - self.len as u32)
        };
        Self::from_parts(self.len(), !self.bits & mask)
    }
}

impl CdWord {
    pub fn c() -> Self {
        Self::from_parts(1, 0)
    }

    pub fn d() -> Self {
        Self::from_parts(1, 1)
    }

    /// `c^k`.
    pub fn c_pow(k: usize) -> Self {
        Self::from_parts(k, 0)
    }

    /// All cd-words of weighted degree `n`, in a fixed order (there are `F_{n+1}` of them).
    pub fn all_of_degree(n: usize) -> Vec<CdWord> {
        let mut out = Vec::new();
        fn rec(rem: usize, cur: CdWord, out: &mut Vec<CdWord>) {
            if rem == 0 {
                out.push(cur);
                return;
            }
            rec(rem - 1, cur.concat(&CdWord::c()), out);
            if rem >= 2 {
                rec(rem - 2, cur.concat(&CdWord::d()), out);
            }
        }
        rec(n, CdWord::empty(), &mut out);
        out
    }

    /// Whether the last letter is `d`.
    pub fn ends_with_d(&self) -> bool {
        self.len > 0 && self.letter(self.len() - 1)
    }
}

/// A homogeneous polynomial with `i128` coefficients. Coefficient overflow panics.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<W: Word> {
    degree: usize,
    terms: BTreeMap<W, i128>,
}

pub type AbPoly = Poly<AbWord>;
pub type CdPoly = Poly<CdWord>;

impl<W: Word> Poly<W> {
    pub fn zero(degree: usize) -> Self {
        Self {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::monomial(W::empty(), 1)
    }

    pub fn monomial(w: W, coeff: i128) -> Self {
        let mut p = Self::zero(w.degree());
        p.add_term(w, coeff);
        p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &W) -> i128 {
        self.terms.get(w).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&W, &i128)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Adds `coeff·w`. Panics if `w` has the wrong degree.
    pub fn add_term(&mut self, w: W, coeff: i128) {
        assert_eq!(w.degree(), self.degree, "inhomogeneous term");
        if coeff == 0 {
            return;
        }
        let e = self.terms.entry(w).or_insert(0);
        *e = e.checked_add(coeff).expect("coefficient overflow");
        if *e == 0 {
            self.terms.remove(&w);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        if out.is_zero() && out.degree != other.degree {
            out.degree = other.degree;
        }
        if other.is_zero() {
            return out;
        }
        for (w, c) in &other.terms {
            out.add_term(*w, *c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(-1)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: i128) -> Self {
        let mut out = Self::zero(self.degree);
        if k == 0 {
            return out;
        }
        for (w, c) in &self.terms {
            out.terms
                .insert(*w, c.checked_mul(k).expect("coefficient overflow"));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.degree + other.degree);
        for (u, x) in &self.terms {
            for (v, y) in &other.terms {
                out.add_term(
                    u.concat(v),
                    x.checked_mul(*y).expect("coefficient overflow"),
                );
            }
        }
        out
    }

    /// Right multiplication by a single word.
    pub fn mul_word(&self, w: W) -> Self {
        self.mul(&Self::monomial(w, 1))
    }

    /// Coefficient-wise `self ≥ 0`.
    pub fn is_nonnegative(&self) -> bool {
        self.terms.values().all(|&c| c >= 0)
    }

    /// Coefficient-wise `self ≤ other`.
    pub fn le_coefficientwise(&self, other: &Self) -> bool {
        other.sub(self).is_nonnegative()
    }

    /// Sum of coefficients of words ending in `suffix`, with the suffix removed.
    pub fn extract_suffix(&self, suffix: &W) -> Self {
        let deg = self.degree.checked_sub(suffix.degree()).unwrap_or(0);
        let mut out = Self::zero(deg);
        for (w, c) in &self.terms {
            if let Some(head) = w.strip_suffix(suffix) {
                out.add_term(head, *c);
            }
        }
        out
    }

    /// Parses `<int>*<word>` terms joined by `+`/`-`; a bare word means coefficient 1
    /// and `1` or `0` denotes the constant.
    pub fn parse(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::PolySyntax("empty input".into()));
        }
        let mut terms: Vec<(W, i128)> = Vec::new();
        let mut rest = compact.as_str();
        let mut first = true;
        while !rest.is_empty() {
            let (sign, body) = match rest.as_bytes()[0] {
                b'+' => (1, &rest[1..]),
                b'-' => (-1, &rest[1..]),
                _ if first => (1, rest),
                _ => return Err(Error::PolySyntax(format!("expected sign before `{rest}`"))),
            };
            first = false;
            let end = body[1.min(body.len())..]
                .find(['+', '-'])
                .map_or(body.len(), |i| i + 1);
            let term = &body[..end];
            rest = &body[end..];
            if term.is_empty() {
                return Err(Error::PolySyntax("dangling sign".into()));
            }
            let (coef, word) = match term.split_once('*') {
                Some((c, w)) => (
                    c.parse::<i128>()
                        .map_err(|_| Error::PolySyntax(format!("bad coefficient `{c}`")))?,
                    w,
                ),
                None if term.chars().all(|c| c.is_ascii_digit()) => (
                    term.parse::<i128>()
                        .map_err(|_| Error::PolySyntax(format!("bad coefficient `{term}`")))?,
                    "",
                ),
                None => (1, term),
            };
            let w = W::from_str_word(word)
                .ok_or_else(|| Error::PolySyntax(format!("bad word `{word}`")))?;
            terms.push((w, sign * coef));
        }
        let degree = terms[0].0.degree();
        let mut p = Self::zero(degree);
        for (w, c) in terms {
            if w.degree() != degree {
                return Err(Error::PolySyntax("polynomial is not homogeneous".into()));
            }
            p.add_term(w, c);
        }
        Ok(p)
    }
}

impl AbPoly {
    /// Exchanges a and b in every word.
    pub fn swap_ab(&self) -> Self {
        let mut out = Self::zero(self.degree);
        for (w, c) in &self.terms {
            out.add_term(w.swap(), *c);
        }
        out
    }

    /// `(a − b)^k`.
    pub fn a_minus_b_pow(k: usize) -> Self {
        let base = {
            let mut p = Self::zero(1);
            p.add_term(AbWord::a(), 1);
            p.add_term(AbWord::b(), -1);
            p
        };
        (0..k).fold(Self::one(), |acc, _| acc.mul(&base))
    }
}

impl CdPoly {
    /// Substitutes `c = a + b`, `d = ab + ba`.
    pub fn expand(&self) -> AbPoly {
        let mut out = AbPoly::zero(self.degree);
        for (w, coeff) in &self.terms {
            // Expand word by word as a list of ab-masks.
            let mut cur: Vec<(usize, u64)> = vec![(0, 0)];
            for j in 0..w.len() {
                let mut next = Vec::with_capacity(cur.len() * 2);
                for &(len, bits) in &cur {
                    if w.letter(j) {
                        next.push((len + 2, bits | 0b10 << len));
                        next.push((len + 2, bits | 0b01 << len));
                    } else {
                        next.push((len + 1, bits));
                        next.push((len + 1, bits | 1 << len));
                    }
                }
                cur = next;
            }
            for (len, bits) in cur {
                out.add_term(AbWord::from_parts(len, bits), *coeff);
            }
        }
        out
    }
}

impl<W: Word> fmt::Display for Poly<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut sorted: Vec<(String, i128)> = self
            .terms
            .iter()
            .map(|(w, c)| (w.to_word_string(), *c))
            .collect();
        sorted.sort();
        for (i, (w, c)) in sorted.iter().enumerate() {
            let (sign, mag) = if *c < 0 { ("-", -c) } else { ("+", *c) };
            if i == 0 {
                if *c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if w.is_empty() {
                write!(f, "{mag}")?;
            } else {
                write!(f, "{mag}*{w}")?;
            }
        }
        Ok(())
    }
}

impl<W: Word> fmt::Debug for Poly<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab(s: &str) -> AbPoly {
        AbPoly::parse(s).unwrap()
    }

    fn cd(s: &str) -> CdPoly {
        CdPoly::parse(s).unwrap()
    }

    #[test]
    fn expansion_of_generators() {
        assert_eq!(cd("c").expand(), ab("a + b"));
        assert_eq!(cd("d").expand(), ab("ab + ba"));
        assert_eq!(cd("cd").expand(), ab("aab + aba + bab + bba"));
    }

    #[test]
    fn fibonacci_basis_sizes() {
        let fib = [1, 1, 2, 3, 5, 8, 13, 21, 34, 55];
        for n in 0..9 {
            assert_eq!(CdWord::all_of_degree(n).len(), fib[n]);
        }
    }

    #[test]
    fn display_and_parse_round_trip() {
        let p = cd("1*ccc + 4*cd + 4*dc");
        assert_eq!(p.to_string(), "1*ccc + 4*cd + 4*dc");
        assert_eq!(cd(&p.to_string()), p);
        let q = cd("-d");
        assert_eq!(q.to_string(), "-1*d");
        assert_eq!(cd("1").degree(), 0);
        assert!(CdPoly::parse("c + dd").is_err());
        assert!(CdPoly::parse("c + x").is_err());
    }

    #[test]
    fn suffix_extraction() {
        let phi = cd("ccc + 4*cd + 4*dc");
        assert_eq!(
            phi.extract_suffix(&CdWord::from_str_word("dc").unwrap()),
            cd("4")
        );
        assert_eq!(phi.extract_suffix(&CdWord::d()), cd("4*c"));
        assert_eq!(phi.extract_suffix(&CdWord::empty()), phi);
    }

    #[test]
    fn swap_is_an_involution() {
        let p = ab("aa + ba");
        assert_eq!(p.swap_ab(), ab("bb + ab"));
        assert_eq!(p.swap_ab().swap_ab(), p);
    }

    #[test]
    fn zero_plus_nonzero_takes_degree() {
        let z = CdPoly::zero(0);
        let p = cd("cd");
        assert_eq!(z.add(&p), p);
    }
}

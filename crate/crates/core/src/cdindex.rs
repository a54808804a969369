//! ab→cd rewriting by exact linear solves: cd-index, b-/a-expressions, the extended
//! cd-index, the κ bijection and coefficient extraction.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::flag::flag_f;
use crate::linalg::{rational_to_i128, solve_rational};
use crate::ncpoly::{AbPoly, AbWord, CdPoly, CdWord, Word};
use crate::poset::GradedPoset;

/// Solves `p = Σ x_j columns[j]` over ℚ and insists on a unique integral solution.
fn solve_in_span(p: &AbPoly, columns: &[AbPoly]) -> Result<Vec<i128>> {
    let n = p.degree();
    let m = columns.len();
    let mut rows: Vec<Vec<(usize, i128)>> = vec![Vec::new(); 1 << n];
    for (j, col) in columns.iter().enumerate() {
        for (w, &c) in col.terms() {
            rows[w.bits() as usize].push((j, c));
        }
    }
    for (w, &c) in p.terms() {
        rows[w.bits() as usize].push((m, c));
    }
    let rows: Vec<_> = rows.into_iter().filter(|r| !r.is_empty()).collect();
    let x = solve_rational(&rows, m).ok_or(Error::NotRepresentable)?;
    x.iter()
        .map(|q| rational_to_i128(q).ok_or(Error::NonIntegralSolution))
        .collect()
}

/// The cd-polynomial `Φ` with `expand(Φ) = p`, if one exists.
pub fn to_cd(p: &AbPoly) -> Result<CdPoly> {
    let basis = CdWord::all_of_degree(p.degree());
    let cols: Vec<AbPoly> = basis
        .iter()
        .map(|w| CdPoly::monomial(*w, 1).expand())
        .collect();
    let x = solve_in_span(p, &cols)?;
    let mut out = CdPoly::zero(p.degree());
    for (w, c) in basis.into_iter().zip(x) {
        out.add_term(w, c);
    }
    Ok(out)
}

/// The cd-index of an Eulerian poset from its flag h-vector.
pub fn cd_index(p: &GradedPoset) -> Result<CdPoly> {
    to_cd(&flag_f(p)?.to_h()?.ab_index())
}

/// `Ψ = Φ + Υ·b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BExpression {
    pub phi: CdPoly,
    pub upsilon: CdPoly,
}

impl BExpression {
    pub fn reconstruct(&self) -> AbPoly {
        self.phi
            .expand()
            .add(&self.upsilon.expand().mul_word(AbWord::b()))
    }
}

/// `Ψ = Φ′ + Υ′·a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AExpression {
    pub phi_prime: CdPoly,
    pub upsilon_prime: CdPoly,
}

impl AExpression {
    pub fn reconstruct(&self) -> AbPoly {
        self.phi_prime
            .expand()
            .add(&self.upsilon_prime.expand().mul_word(AbWord::a()))
    }
}

/// `Ψ = Φ^d·d + Φ^a·a + Φ^b·b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedCdIndex {
    pub phi_d: CdPoly,
    pub phi_a: CdPoly,
    pub phi_b: CdPoly,
}

impl ExtendedCdIndex {
    pub fn reconstruct(&self) -> AbPoly {
        let d = CdPoly::monomial(CdWord::d(), 1).expand();
        let mut out = self.phi_a.expand().mul_word(AbWord::a());
        out = out.add(&self.phi_b.expand().mul_word(AbWord::b()));
        if !self.phi_d.is_zero() {
            out = out.add(&self.phi_d.expand().mul(&d));
        }
        out
    }

    pub fn is_nonnegative(&self) -> bool {
        self.phi_d.is_nonnegative() && self.phi_a.is_nonnegative() && self.phi_b.is_nonnegative()
    }

    /// Coefficientwise comparison of all three components.
    pub fn le(&self, other: &Self) -> bool {
        self.phi_d.le_coefficientwise(&other.phi_d)
            && self.phi_a.le_coefficientwise(&other.phi_a)
            && self.phi_b.le_coefficientwise(&other.phi_b)
    }
}

fn require_positive_degree(p: &AbPoly) -> Result<usize> {
    match p.degree() {
        0 => Err(Error::WrongDegree {
            expected: 1,
            found: 0,
        }),
        d => Ok(d),
    }
}

/// Solves against the basis of degree-`d` cd-words together with degree-`(d−1)` cd-words
/// followed by `b`.
pub fn b_expression(p: &AbPoly) -> Result<BExpression> {
    let d = require_positive_degree(p)?;
    let top = CdWord::all_of_degree(d);
    let low = CdWord::all_of_degree(d - 1);
    let mut cols: Vec<AbPoly> = top
        .iter()
        .map(|w| CdPoly::monomial(*w, 1).expand())
        .collect();
    cols.extend(
        low.iter()
            .map(|w| CdPoly::monomial(*w, 1).expand().mul_word(AbWord::b())),
    );
    let x = solve_in_span(p, &cols)?;
    let mut phi = CdPoly::zero(d);
    let mut upsilon = CdPoly::zero(d - 1);
    for (w, &c) in top.iter().zip(&x) {
        phi.add_term(*w, c);
    }
    for (w, &c) in low.iter().zip(&x[top.len()..]) {
        upsilon.add_term(*w, c);
    }
    Ok(BExpression { phi, upsilon })
}

/// `Φ′ = Φ + Υc`, `Υ′ = −Υ`.
pub fn a_expression(p: &AbPoly) -> Result<AExpression> {
    let b = b_expression(p)?;
    Ok(AExpression {
        phi_prime: b.phi.add(&b.upsilon.mul_word(CdWord::c())),
        upsilon_prime: b.upsilon.neg(),
    })
}

/// Splits `Φ = Φ′c + Φ″d` from the b-expression and returns `(Φ″, Φ′, Φ′ + Υ)`.
pub fn extended_from_b(b: &BExpression) -> ExtendedCdIndex {
    let d = b.phi.degree();
    let phi_a = b.phi.extract_suffix(&CdWord::c());
    let phi_d = if d >= 2 {
        b.phi.extract_suffix(&CdWord::d())
    } else {
        CdPoly::zero(0)
    };
    let phi_b = phi_a.add(&b.upsilon);
    ExtendedCdIndex {
        phi_d,
        phi_a,
        phi_b,
    }
}

pub fn extended_cd_index(p: &AbPoly) -> Result<ExtendedCdIndex> {
    Ok(extended_from_b(&b_expression(p)?))
}

/// `κ_n`: the set `{1 + deg(prefix) : each d}` of a degree-`n` cd-word.
pub fn kappa_to_set(n: usize, w: &CdWord) -> Result<Vec<usize>> {
    if w.degree() != n {
        return Err(Error::WrongDegree {
            expected: n,
            found: w.degree(),
        });
    }
    let mut out = Vec::new();
    let mut deg = 0;
    for j in 0..w.len() {
        if w.letter(j) {
            out.push(deg + 1);
            deg += 2;
        } else {
            deg += 1;
        }
    }
    Ok(out)
}

/// `κ_n^{-1}` on sparse subsets of `[n−1]`.
pub fn kappa_to_word(n: usize, set: &[usize]) -> Result<CdWord> {
    let mut s = set.to_vec();
    s.sort_unstable();
    s.dedup();
    if s.windows(2).any(|w| w[1] == w[0] + 1) {
        return Err(Error::ConsecutiveIntegers(s));
    }
    if s.first() == Some(&0) || s.last().is_some_and(|&m| m + 1 > n) {
        return Err(Error::OutOfRange {
            value: *s.last().unwrap() as i64,
            range: format!("[1, {}]", n.saturating_sub(1)),
        });
    }
    let mut w = CdWord::empty();
    let mut next = 1;
    for &i in &s {
        w = w.concat(&CdWord::c_pow(i - next)).concat(&CdWord::d());
        next = i + 2;
    }
    Ok(w.concat(&CdWord::c_pow(n + 1 - next)))
}

/// The sets of `A_n`, ordered like [`CdWord::all_of_degree`].
pub fn sparse_sets(n: usize) -> Vec<Vec<usize>> {
    CdWord::all_of_degree(n)
        .iter()
        .map(|w| kappa_to_set(n, w).expect("degree matches"))
        .collect()
}

/// `α_S(Φ)`.
pub fn alpha(phi: &CdPoly, set: &[usize]) -> Result<i128> {
    Ok(phi.coeff(&kappa_to_word(phi.degree(), set)?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlphaEntry {
    pub set: Vec<usize>,
    pub value: i128,
}

/// `α_S(Φ)` for every `S ∈ A_n`, sorted by size and then lexicographically.
pub fn alpha_table(phi: &CdPoly) -> Vec<AlphaEntry> {
    let n = phi.degree();
    let mut out: Vec<AlphaEntry> = CdWord::all_of_degree(n)
        .iter()
        .map(|w| AlphaEntry {
            set: kappa_to_set(n, w).expect("degree matches"),
            value: phi.coeff(w),
        })
        .collect();
    out.sort_by(|a, b| {
        a.set
            .len()
            .cmp(&b.set.len())
            .then_with(|| a.set.cmp(&b.set))
    });
    out
}

/// `Φ_u`: words of `Φ` ending in `u`, with `u` removed.
pub fn extract_sub(phi: &CdPoly, u: &CdWord) -> CdPoly {
    phi.extract_suffix(u)
}

/// `Φ_k = Φ_{d·c^{n−2−k}}` for `0 ≤ k ≤ n−2`.
pub fn phi_block(phi: &CdPoly, k: usize) -> CdPoly {
    let n = phi.degree();
    assert!(n >= 2 && k <= n - 2);
    extract_sub(phi, &CdWord::d().concat(&CdWord::c_pow(n - 2 - k)))
}

/// Substitutes `a = 1`: the coefficient of `b^k`.
pub fn h_polynomial(p: &AbPoly) -> Vec<i128> {
    let mut out = vec![0i128; p.degree() + 1];
    for (w, &c) in p.terms() {
        out[w.bits().count_ones() as usize] += c;
    }
    out
}

pub fn swap_ab(p: &AbPoly) -> AbPoly {
    p.swap_ab()
}

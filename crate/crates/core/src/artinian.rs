//! Graded pieces of Stanley–Reisner rings modulo random linear forms over `F_p`:
//! Hilbert functions, ranks of multiplication maps and the Kruskal–Katona test.

use std::collections::{BTreeMap, HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::exec::par_map;
use crate::linalg::{Echelon, Field};

/// A monomial as a sorted multiset of vertices.
type Monomial = Vec<u32>;
/// A polynomial with coefficients in `[1, p)`.
type Poly = BTreeMap<Monomial, u64>;

fn require_prime(field: Field) -> Result<u64> {
    match field {
        Field::Prime(p) => Ok(p),
        Field::Rational => Err(Error::BadParameter(
            "Artinian reduction needs a prime field".into(),
        )),
    }
}

/// Random linear forms, one coefficient per vertex.
pub fn random_forms(count: usize, vertices: usize, p: u64, seed: u64) -> Vec<Vec<u64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (0..vertices).map(|_| rng.gen_range(1..p)).collect())
        .collect()
}

/// `K[Δ]/(θ_1, …, θ_m)` over `F_p`, built degree by degree.
#[derive(Clone, Debug)]
pub struct ArtinianReduction {
    p: u64,
    faces: HashSet<Vec<u32>>,
    nv: usize,
    theta: Vec<Vec<u64>>,
    bases: Vec<Vec<Monomial>>,
    index: Vec<HashMap<Monomial, usize>>,
    ideals: Vec<Option<Echelon>>,
}

impl ArtinianReduction {
    pub fn new(delta: &SimplicialComplex, forms: Vec<Vec<u64>>, field: Field) -> Result<Self> {
        let p = require_prime(field)?;
        let nv = delta.vertices().len();
        if forms.iter().any(|f| f.len() != nv) {
            return Err(Error::BadParameter(format!(
                "linear forms must have {nv} coefficients"
            )));
        }
        let faces = delta.faces_by_size().into_iter().flatten().collect();
        let mut out = Self {
            p,
            faces,
            nv,
            theta: forms,
            bases: Vec::new(),
            index: Vec::new(),
            ideals: Vec::new(),
        };
        out.extend_to(1);
        Ok(out)
    }

    pub fn with_seed(
        delta: &SimplicialComplex,
        num_forms: usize,
        field: Field,
        seed: u64,
    ) -> Result<Self> {
        let p = require_prime(field)?;
        Self::new(
            delta,
            random_forms(num_forms, delta.vertices().len(), p, seed),
            field,
        )
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    fn extend_to(&mut self, k: usize) {
        if self.bases.is_empty() {
            self.bases.push(vec![Vec::new()]);
            self.index.push(HashMap::from([(Vec::new(), 0)]));
        }
        while self.bases.len() <= k {
            let prev = self.bases.last().expect("degree 0 exists");
            let mut next: Vec<Monomial> = Vec::new();
            for m in prev {
                let start = m.last().copied().unwrap_or(0);
                for v in start..self.nv as u32 {
                    let mut n = m.clone();
                    n.push(v);
                    if self.supported(&n) {
                        next.push(n);
                    }
                }
            }
            let index = next
                .iter()
                .cloned()
                .enumerate()
                .map(|(i, m)| (m, i))
                .collect();
            self.bases.push(next);
            self.index.push(index);
        }
    }

    fn supported(&self, m: &Monomial) -> bool {
        let mut s = m.clone();
        s.dedup();
        self.faces.contains(&s)
    }

    /// Monomials of degree `k` whose support is a face.
    pub fn basis(&mut self, k: usize) -> &[Monomial] {
        self.extend_to(k);
        &self.bases[k]
    }

    fn mul_linear(&self, form: &[u64], f: &Poly) -> Poly {
        let mut out = Poly::new();
        for (m, &c) in f {
            let mut support = m.clone();
            support.dedup();
            for (v, &a) in form.iter().enumerate() {
                let v = v as u32;
                if a == 0 {
                    continue;
                }
                let pos = support.partition_point(|&x| x < v);
                if support.get(pos) != Some(&v) {
                    support.insert(pos, v);
                    let ok = self.faces.contains(&support);
                    support.remove(pos);
                    if !ok {
                        continue;
                    }
                }
                let mut n = m.clone();
                let pos = n.partition_point(|&x| x <= v);
                n.insert(pos, v);
                let e = out.entry(n).or_insert(0);
                *e = (*e + c * a % self.p) % self.p;
            }
        }
        out.retain(|_, c| *c != 0);
        out
    }

    fn to_sparse(&self, k: usize, f: &Poly) -> Vec<(usize, i64)> {
        let mut v: Vec<(usize, i64)> = f
            .iter()
            .map(|(m, &c)| (self.index[k][m], c as i64))
            .collect();
        v.sort_unstable();
        v
    }

    /// The span of `Θ·K[Δ]_{k−1}` inside `K[Δ]_k`, cached per degree.
    fn ideal(&mut self, k: usize) -> &Echelon {
        self.extend_to(k);
        if self.ideals.len() <= k {
            self.ideals.resize(k + 1, None);
        }
        if self.ideals[k].is_none() {
            let mut ech = Echelon::new(Field::Prime(self.p));
            if k > 0 {
                for m in &self.bases[k - 1] {
                    let mono = Poly::from([(m.clone(), 1)]);
                    for form in &self.theta {
                        let prod = self.mul_linear(form, &mono);
                        if !prod.is_empty() {
                            ech.insert(&self.to_sparse(k, &prod));
                        }
                    }
                }
            }
            self.ideals[k] = Some(ech);
        }
        self.ideals[k].as_ref().expect("just filled")
    }

    /// `dim_K (K[Δ]/Θ)_k`.
    pub fn quotient_dim(&mut self, k: usize) -> usize {
        let rank = self.ideal(k).rank();
        self.bases[k].len() - rank
    }

    /// Quotient dimensions from degree 0 until they vanish. Fails when degree `m + 1`
    /// is still nonzero for `m` forms.
    pub fn hilbert(&mut self) -> Result<Vec<usize>> {
        let limit = self.theta.len() + 1;
        let mut out = Vec::new();
        for k in 0..=limit {
            let dim = self.quotient_dim(k);
            if dim == 0 {
                return Ok(out);
            }
            if k == limit {
                return Err(Error::NotArtinian { degree: k, dim });
            }
            out.push(dim);
        }
        unreachable!("loop returns at the limit")
    }

    /// Rank of `×w^power : (K[Δ]/Θ)_k → (K[Δ]/Θ)_{k+power}`.
    pub fn multiplication_rank(&mut self, w: &[u64], k: usize, power: usize) -> usize {
        let t = k + power;
        if self.quotient_dim(k) == 0 || self.quotient_dim(t) == 0 {
            return 0;
        }
        let mut ech = self.ideal(t).clone();
        let base = ech.rank();
        for m in self.bases[k].clone() {
            let mut f = Poly::from([(m, 1)]);
            for _ in 0..power {
                f = self.mul_linear(w, &f);
            }
            if !f.is_empty() {
                ech.insert(&self.to_sparse(t, &f));
            }
        }
        ech.rank() - base
    }
}

/// Hilbert function of `K[Δ]` modulo `num_forms` random forms drawn from `seed`.
pub fn quotient_hilbert(
    delta: &SimplicialComplex,
    num_forms: usize,
    field: Field,
    seed: u64,
) -> Result<Vec<usize>> {
    ArtinianReduction::with_seed(delta, num_forms, field, seed)?.hilbert()
}

/// Hilbert functions for several seeds, computed independently.
pub fn hilbert_over_seeds(
    delta: &SimplicialComplex,
    num_forms: usize,
    field: Field,
    seeds: &[u64],
) -> Vec<Result<Vec<usize>>> {
    par_map(seeds, |&s| quotient_hilbert(delta, num_forms, field, s))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MapKind {
    Bijective,
    Injective,
    Surjective,
    Neither,
}

/// What the polyhedral-type theory predicts for a map, if anything.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Expectation {
    Injective,
    Surjective,
    Unconstrained,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LefschetzMap {
    pub source_degree: usize,
    pub power: usize,
    pub source_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
    pub kind: MapKind,
    pub expected: Expectation,
}

impl LefschetzMap {
    /// Whether the observed rank meets the expectation.
    pub fn meets_expectation(&self) -> bool {
        match self.expected {
            Expectation::Injective => self.rank == self.source_dim,
            Expectation::Surjective => self.rank == self.target_dim,
            Expectation::Unconstrained => true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankProfile {
    pub hilbert: Vec<usize>,
    pub single_steps: Vec<LefschetzMap>,
    pub powers: Vec<LefschetzMap>,
}

impl RankProfile {
    pub fn meets_expectations(&self) -> bool {
        self.single_steps
            .iter()
            .chain(&self.powers)
            .all(LefschetzMap::meets_expectation)
    }

    /// Whether every single-step map is injective or surjective.
    pub fn weak_lefschetz(&self) -> bool {
        self.single_steps.iter().all(|m| m.kind != MapKind::Neither)
    }
}

fn classify(rank: usize, source: usize, target: usize) -> MapKind {
    match (rank == source, rank == target) {
        (true, true) => MapKind::Bijective,
        (true, false) => MapKind::Injective,
        (false, true) => MapKind::Surjective,
        (false, false) => MapKind::Neither,
    }
}

/// Hilbert function and multiplication ranks for `d = dim Δ + 1` random forms and a random
/// linear form `w`. Single steps `k−1 → k` are expected injective for `k ≤ d/2` and
/// surjective for `k ≥ d/2 + 1`; the powers `×w^{d−1−2k}` on degrees `k` and `k + 1` are
/// expected injective and surjective respectively.
pub fn lefschetz_profile(
    delta: &SimplicialComplex,
    theta_seed: u64,
    w_seed: u64,
    field: Field,
) -> Result<RankProfile> {
    let p = require_prime(field)?;
    let d = (delta.dim() + 1) as usize;
    let mut red = ArtinianReduction::with_seed(delta, d, field, theta_seed)?;
    let hilbert = red.hilbert()?;
    let w = random_forms(1, delta.vertices().len(), p, w_seed).remove(0);
    let dim = |k: usize| hilbert.get(k).copied().unwrap_or(0);
    let make = |red: &mut ArtinianReduction, k: usize, power: usize, expected| {
        let rank = red.multiplication_rank(&w, k, power);
        let (s, t) = (dim(k), dim(k + power));
        LefschetzMap {
            source_degree: k,
            power,
            source_dim: s,
            target_dim: t,
            rank,
            kind: classify(rank, s, t),
            expected,
        }
    };
    let mut single_steps = Vec::new();
    for k in 1..=d {
        let expected = if 2 * k <= d {
            Expectation::Injective
        } else if 2 * k >= d + 2 {
            Expectation::Surjective
        } else {
            Expectation::Unconstrained
        };
        single_steps.push(make(&mut red, k - 1, 1, expected));
    }
    let mut powers = Vec::new();
    if d >= 1 {
        for k in 0..=(d - 1) / 2 {
            let power = d - 1 - 2 * k;
            powers.push(make(&mut red, k, power, Expectation::Injective));
            powers.push(make(&mut red, k + 1, power, Expectation::Surjective));
        }
    }
    Ok(RankProfile {
        hilbert,
        single_steps,
        powers,
    })
}

fn binomial(n: i128, k: i128) -> Option<i128> {
    if k < 0 || n < k {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut r: i128 = 1;
    for i in 0..k {
        r = r.checked_mul(n - i)? / (i + 1);
    }
    Some(r)
}

/// The `i`-th Macaulay representation `m = Σ_j C(a_j, j)` as `(a_j, j)` pairs, `j` decreasing.
pub fn macaulay_representation(mut m: i128, i: usize) -> Result<Vec<(i128, i128)>> {
    let overflow = || Error::Overflow("binomial coefficient");
    let mut out = Vec::new();
    let mut j = i as i128;
    while m > 0 && j >= 1 {
        let mut hi = j;
        while binomial(hi * 2, j).ok_or_else(overflow)? <= m {
            hi *= 2;
        }
        hi *= 2;
        let mut lo = j;
        while lo < hi {
            let mid = (lo + hi + 1) / 2;
            if binomial(mid, j).ok_or_else(overflow)? <= m {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        m -= binomial(lo, j).ok_or_else(overflow)?;
        out.push((lo, j));
        j -= 1;
    }
    Ok(out)
}

/// Upper bound on the number of `(i+1)`-sets given `m` sets of size `i`.
fn upper_shadow_bound(m: i128, i: usize) -> Result<i128> {
    macaulay_representation(m, i)?
        .into_iter()
        .try_fold(0i128, |acc, (a, j)| {
            binomial(a, j + 1)
                .and_then(|b| acc.checked_add(b))
                .ok_or(Error::Overflow("Kruskal-Katona bound"))
        })
}

/// Whether `(f_{−1}, f_0, f_1, …)` is the f-vector of a simplicial complex.
pub fn kruskal_katona_check(candidate: &[i128]) -> Result<bool> {
    if let Some(&neg) = candidate.iter().find(|&&x| x < 0) {
        return Err(Error::NegativeEntry(neg));
    }
    match candidate.first() {
        None => return Ok(true),
        Some(0) => return Ok(candidate.iter().all(|&x| x == 0)),
        Some(1) => {}
        Some(_) => return Ok(false),
    }
    for size in 1..candidate.len().saturating_sub(1) {
        if candidate[size + 1] > upper_shadow_bound(candidate[size], size)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::order_complex;
    use crate::constructions::{boolean, pyramid_with_flap};

    const P: Field = Field::Prime(32003);

    fn triangle_boundary() -> SimplicialComplex {
        SimplicialComplex::from_named_facets(&[&["a", "b"], &["b", "c"], &["a", "c"]])
    }

    #[test]
    fn basis_counts_match_faces() {
        let delta = order_complex(&pyramid_with_flap());
        let faces = delta.faces_by_size();
        let mut red = ArtinianReduction::with_seed(&delta, 3, P, 1).unwrap();
        for k in 1..5usize {
            let expected: i128 = faces
                .iter()
                .enumerate()
                .skip(1)
                .map(|(s, l)| l.len() as i128 * binomial(k as i128 - 1, s as i128 - 1).unwrap())
                .sum();
            assert_eq!(red.basis(k).len() as i128, expected);
        }
    }

    #[test]
    fn hilbert_functions() {
        assert_eq!(
            quotient_hilbert(&triangle_boundary(), 2, P, 7).unwrap(),
            vec![1, 1, 1]
        );
        let point = SimplicialComplex::from_named_facets(&[&["x"]]);
        assert_eq!(quotient_hilbert(&point, 1, P, 7).unwrap(), vec![1]);
        let delta = order_complex(&pyramid_with_flap());
        assert_eq!(
            quotient_hilbert(&delta, 3, P, 7).unwrap(),
            vec![1, 19, 17, 1]
        );
        assert!(matches!(
            quotient_hilbert(&triangle_boundary(), 1, P, 7),
            Err(Error::NotArtinian { .. })
        ));
        assert!(quotient_hilbert(&point, 1, Field::Rational, 7).is_err());
    }

    #[test]
    fn lefschetz_on_flap() {
        let delta = order_complex(&pyramid_with_flap());
        let prof = lefschetz_profile(&delta, 3, 4, P).unwrap();
        assert_eq!(prof.single_steps[0].kind, MapKind::Injective);
        assert_eq!(prof.single_steps[2].kind, MapKind::Surjective);
        assert_eq!(prof.single_steps[1].expected, Expectation::Unconstrained);
        assert!(prof.meets_expectations());
        let ball = order_complex(&boolean(2).unwrap());
        assert!(lefschetz_profile(&ball, 1, 2, P)
            .unwrap()
            .meets_expectations());
    }

    #[test]
    fn kruskal_katona() {
        assert!(kruskal_katona_check(&[1, 3, 3]).unwrap());
        assert!(!kruskal_katona_check(&[1, 2, 3]).unwrap());
        assert!(kruskal_katona_check(&[1, 18]).unwrap());
        assert!(kruskal_katona_check(&[1, 4, 6, 4, 1]).unwrap());
        assert!(!kruskal_katona_check(&[1, 4, 6, 5]).unwrap());
        assert!(matches!(
            kruskal_katona_check(&[1, -1]),
            Err(Error::NegativeEntry(-1))
        ));
        assert_eq!(macaulay_representation(7, 2).unwrap(), vec![(4, 2), (1, 1)]);
    }
}

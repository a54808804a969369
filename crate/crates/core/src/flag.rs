//! Flag f- and h-vectors, aggregate vectors and rank statistics.
//!
//! A subset `S ⊆ [n]` is a bitmask with bit `i-1` set when `i ∈ S`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec;
use crate::ncpoly::{AbPoly, AbWord};
use crate::poset::{GradedPoset, BOTTOM};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    F,
    H,
}

/// All `2^n` entries of a flag vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagVector {
    n: usize,
    flavor: Flavor,
    entries: Vec<i128>,
}

pub fn mask_to_set(mask: u64) -> Vec<usize> {
    (0..64)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| i + 1)
        .collect()
}

pub fn set_to_mask(set: &[usize]) -> u64 {
    set.iter().fold(0, |m, &i| m | 1 << (i - 1))
}

fn checked_sum(a: i128, b: i128) -> Result<i128> {
    a.checked_add(b).ok_or(Error::Overflow("counting chains"))
}

impl FlagVector {
    pub fn new(n: usize, flavor: Flavor, entries: Vec<i128>) -> Self {
        assert_eq!(entries.len(), 1 << n, "flag vector needs 2^n entries");
        Self { n, flavor, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn get(&self, mask: u64) -> i128 {
        self.entries[mask as usize]
    }

    pub fn get_set(&self, set: &[usize]) -> i128 {
        self.get(set_to_mask(set))
    }

    pub fn entries(&self) -> &[i128] {
        &self.entries
    }

    /// `(S, value)` pairs in mask order.
    pub fn pairs(&self) -> Vec<(Vec<usize>, i128)> {
        self.entries
            .iter()
            .enumerate()
            .map(|(m, &v)| (mask_to_set(m as u64), v))
            .collect()
    }

    fn transform(&self, flavor: Flavor, sign: i128) -> Result<Self> {
        let mut e = self.entries.clone();
        for bit in 0..self.n {
            for m in 0..e.len() {
                if m >> bit & 1 == 1 {
                    let t = e[m ^ 1 << bit]
                        .checked_mul(sign)
                        .and_then(|t| e[m].checked_add(t))
                        .ok_or(Error::Overflow("transforming flag vector"))?;
                    e[m] = t;
                }
            }
        }
        Ok(Self::new(self.n, flavor, e))
    }

    /// `h_S = Σ_{T⊆S} (−1)^{|S−T|} f_T`.
    pub fn to_h(&self) -> Result<Self> {
        self.transform(Flavor::H, -1)
    }

    /// `f_S = Σ_{T⊆S} h_T`.
    pub fn to_f(&self) -> Result<Self> {
        self.transform(Flavor::F, 1)
    }

    /// Sums by `|S|`; index `k` holds the sum over `|S| = k`.
    pub fn aggregate(&self) -> Vec<i128> {
        let mut out = vec![0i128; self.n + 1];
        for (m, &v) in self.entries.iter().enumerate() {
            let k = (m as u64).count_ones() as usize;
            out[k] = out[k].checked_add(v).expect("aggregate overflow");
        }
        out
    }

    /// `Σ_S v_S w_S`.
    pub fn ab_index(&self) -> AbPoly {
        let mut p = AbPoly::zero(self.n);
        for (m, &v) in self.entries.iter().enumerate() {
            p.add_term(AbWord::characteristic(self.n, m as u64), v);
        }
        p
    }

    /// Reads an ab-polynomial of degree `n` back as a flag vector.
    pub fn from_ab_index(p: &AbPoly, flavor: Flavor) -> Self {
        let n = p.degree();
        let mut e = vec![0; 1 << n];
        for (w, &c) in p.terms() {
            e[crate::ncpoly::Word::bits(w) as usize] = c;
        }
        Self::new(n, flavor, e)
    }

    /// Entries with `S ⊆ [k]`, as a flag vector of rank `k`.
    pub fn restrict(&self, k: usize) -> Self {
        assert!(k <= self.n);
        Self::new(k, self.flavor, self.entries[..1 << k].to_vec())
    }

    /// Entrywise difference.
    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let e = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        Self::new(self.n, self.flavor, e)
    }
}

/// For each element `x` of rank `r ≥ 1`, `counts[x][T]` is the number of chains
/// `y_1 < … < y_k < x` with rank set exactly `T ⊆ [r−1]`.
pub fn chain_counts(p: &GradedPoset) -> Result<Vec<Vec<i128>>> {
    let mut counts: Vec<Vec<i128>> = vec![Vec::new(); p.len()];
    counts[BOTTOM] = vec![1];
    for r in 1..=p.rank() {
        let layer = p.elements_of_rank(r);
        let done = &counts;
        let tables: Vec<Result<Vec<i128>>> = exec::par_map(layer, |&x| {
            let below = p.strictly_below(x);
            let mut g = vec![0i128; 1 << (r - 1)];
            g[0] = 1;
            for t in 1..r {
                let lower: Vec<usize> = p
                    .elements_of_rank(t)
                    .iter()
                    .copied()
                    .filter(|&y| below.contains(y))
                    .collect();
                let top = 1usize << (t - 1);
                for rest in 0..top {
                    let mut s = 0i128;
                    for &y in &lower {
                        s = checked_sum(s, done[y][rest])?;
                    }
                    g[top | rest] = s;
                }
            }
            Ok(g)
        });
        for (&x, t) in layer.iter().zip(tables) {
            counts[x] = t?;
        }
    }
    Ok(counts)
}

/// `f_S = Σ_{S-chains C} w(max C)` and `f_∅ = w(0̂)`.
pub fn weighted_flag_f(p: &GradedPoset, weights: &[i128]) -> Result<FlagVector> {
    let counts = chain_counts(p)?;
    weighted_flag_f_with(p, &counts, weights)
}

pub(crate) fn weighted_flag_f_with(
    p: &GradedPoset,
    counts: &[Vec<i128>],
    weights: &[i128],
) -> Result<FlagVector> {
    let n = p.rank();
    let mut e = vec![0i128; 1 << n];
    e[0] = weights[BOTTOM];
    for x in p.proper_elements() {
        if weights[x] == 0 {
            continue;
        }
        let r = p.rank_of(x);
        let top = 1usize << (r - 1);
        for (rest, &c) in counts[x].iter().enumerate() {
            let v = c
                .checked_mul(weights[x])
                .ok_or(Error::Overflow("counting chains"))?;
            e[top | rest] = checked_sum(e[top | rest], v)?;
        }
    }
    Ok(FlagVector::new(n, Flavor::F, e))
}

/// Flag f-vector of `p`.
pub fn flag_f(p: &GradedPoset) -> Result<FlagVector> {
    weighted_flag_f(p, &vec![1; p.len()])
}

/// Rank generating data and the Euler relation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankStatistics {
    /// `f_{i}` for `i = 0..=n`, with `f_0 = 1`.
    pub rank_gen: Vec<i128>,
    /// `α_{k}` for `k = 1..n−1`.
    pub alpha_singletons: Vec<i128>,
    pub euler_holds: bool,
}

pub fn rank_statistics(p: &GradedPoset) -> RankStatistics {
    let n = p.rank();
    let rank_gen: Vec<i128> = (0..=n)
        .map(|r| p.elements_of_rank(r).len() as i128)
        .collect();
    let alt = |k: usize| -> i128 {
        (0..=k)
            .map(|i| {
                if (k - i) % 2 == 0 {
                    rank_gen[i]
                } else {
                    -rank_gen[i]
                }
            })
            .sum()
    };
    let alpha_singletons = (1..n).map(|k| alt(k) - 1).collect();
    RankStatistics {
        euler_holds: alt(n) == 1,
        rank_gen,
        alpha_singletons,
    }
}

//! Finite graded posets with an implicit minimum.
//!
//! Elements are stored by dense index. Index [`BOTTOM`] is the minimum `0̂`; the remaining
//! elements are sorted by rank (ties keep declaration order), which lets most algorithms
//! sweep ranks bottom-up without extra bookkeeping.

use std::collections::HashMap;
use std::fmt::Write as _;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

/// Index of the implicit minimum.
pub const BOTTOM: usize = 0;
/// Reserved identifier of the implicit minimum in the text format.
pub const BOTTOM_NAME: &str = "_0";
/// Largest rank accepted; flag vectors store all `2^n` entries densely.
pub const MAX_RANK: usize = 20;

/// Raw element/rank/cover listing prior to validation.
#[derive(Clone, Debug, Default)]
pub struct PosetBuilder {
    elements: Vec<(String, usize)>,
    covers: Vec<(String, String)>,
    declared_rank: Option<usize>,
}

impl PosetBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn element(&mut self, name: impl Into<String>, rank: usize) -> &mut Self {
        self.elements.push((name.into(), rank));
        self
    }

    /// Records that `upper` covers `lower`.
    pub fn cover(&mut self, upper: impl Into<String>, lower: impl Into<String>) -> &mut Self {
        self.covers.push((upper.into(), lower.into()));
        self
    }

    pub fn declared_rank(&mut self, n: usize) -> &mut Self {
        self.declared_rank = Some(n);
        self
    }

    pub fn build(&self) -> Result<GradedPoset> {
        GradedPoset::validate(self)
    }
}

/// A validated finite graded poset with minimum `0̂`.
#[derive(Clone, Debug)]
pub struct GradedPoset {
    names: Vec<String>,
    ranks: Vec<usize>,
    lower: Vec<Vec<usize>>,
    upper: Vec<Vec<usize>>,
    below: Vec<FixedBitSet>,
    index: HashMap<String, usize>,
    by_rank: Vec<Vec<usize>>,
    rank: usize,
}

impl PartialEq for GradedPoset {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.ranks == other.ranks && self.lower == other.lower
    }
}

impl Eq for GradedPoset {}

fn valid_identifier(name: &str) -> bool {
    !name.is_empty() && name != BOTTOM_NAME && !name.chars().any(char::is_whitespace)
}

/// Which subposet [`GradedPoset::subposet`] extracts around an element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubposetKind {
    /// `⟨σ⟩ = {τ ≤ σ}`.
    ClosedInterval,
    /// `∂σ = {τ < σ}`.
    OpenInterval,
    /// `{τ ≥ σ}`, re-ranked so that `σ` becomes the new minimum.
    Link,
    /// `{τ : τ ≱ σ}`, an order ideal.
    Costar,
}

impl GradedPoset {
    fn validate(raw: &PosetBuilder) -> Result<Self> {
        let mut index: HashMap<&str, usize> = HashMap::new();
        for (i, (name, rank)) in raw.elements.iter().enumerate() {
            if !valid_identifier(name) {
                return Err(Error::BadIdentifier(name.clone()));
            }
            if *rank == 0 {
                return Err(Error::BadRank(name.clone()));
            }
            if index.insert(name.as_str(), i).is_some() {
                return Err(Error::DuplicateElement(name.clone()));
            }
        }
        let m = raw.elements.len();
        // Raw indices: 0..m are declared elements, m stands for the bottom.
        let lookup = |name: &str| -> Option<usize> {
            if name == BOTTOM_NAME {
                Some(m)
            } else {
                index.get(name).copied()
            }
        };
        let mut raw_lower: Vec<Vec<usize>> = vec![Vec::new(); m];
        for (upper, lower) in &raw.covers {
            let (Some(u), Some(l)) = (lookup(upper), lookup(lower)) else {
                return Err(Error::DanglingReference {
                    upper: upper.clone(),
                    lower: lower.clone(),
                });
            };
            if u == m {
                return Err(Error::DanglingReference {
                    upper: upper.clone(),
                    lower: lower.clone(),
                });
            }
            if !raw_lower[u].contains(&l) {
                raw_lower[u].push(l);
            }
        }

        // Kahn's algorithm on the cover digraph (edges upper -> lower).
        let mut indegree = vec![0usize; m];
        for lows in &raw_lower {
            for &l in lows {
                if l < m {
                    indegree[l] += 1;
                }
            }
        }
        let mut stack: Vec<usize> = (0..m).filter(|&i| indegree[i] == 0).collect();
        let mut seen = 0;
        while let Some(u) = stack.pop() {
            seen += 1;
            for &l in &raw_lower[u] {
                if l < m {
                    indegree[l] -= 1;
                    if indegree[l] == 0 {
                        stack.push(l);
                    }
                }
            }
        }
        if seen < m {
            let culprit = (0..m).find(|&i| indegree[i] > 0).unwrap_or(0);
            return Err(Error::CycleDetected(raw.elements[culprit].0.clone()));
        }

        let rank_of = |i: usize| if i == m { 0 } else { raw.elements[i].1 };
        for (u, lows) in raw_lower.iter().enumerate() {
            for &l in lows {
                let gap = rank_of(u) as i64 - rank_of(l) as i64;
                if gap != 1 {
                    return Err(Error::NonGradedCover {
                        upper: raw.elements[u].0.clone(),
                        lower: if l == m {
                            BOTTOM_NAME.to_string()
                        } else {
                            raw.elements[l].0.clone()
                        },
                        gap,
                    });
                }
            }
        }

        // Final order: bottom first, then by rank, stable in declaration order.
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by_key(|&i| raw.elements[i].1);
        let mut new_index = vec![0usize; m + 1];
        new_index[m] = BOTTOM;
        for (pos, &i) in order.iter().enumerate() {
            new_index[i] = pos + 1;
        }
        let n_total = m + 1;
        let mut names = Vec::with_capacity(n_total);
        let mut ranks = Vec::with_capacity(n_total);
        names.push(BOTTOM_NAME.to_string());
        ranks.push(0);
        let mut lower = vec![Vec::new(); n_total];
        for &i in &order {
            names.push(raw.elements[i].0.clone());
            ranks.push(raw.elements[i].1);
            let mut lows: Vec<usize> = raw_lower[i].iter().map(|&l| new_index[l]).collect();
            if raw.elements[i].1 == 1 && lows.is_empty() {
                lows.push(BOTTOM);
            }
            lows.sort_unstable();
            lower[new_index[i]] = lows;
        }

        // Longest chain from the bottom must equal the declared rank.
        let mut longest = vec![0usize; n_total];
        for x in 1..n_total {
            longest[x] = 1 + lower[x].iter().map(|&l| longest[l]).max().unwrap_or(0);
            if longest[x] != ranks[x] {
                return Err(Error::RankMismatch {
                    element: names[x].clone(),
                    declared: ranks[x],
                    computed: longest[x],
                });
            }
            if lower[x].is_empty() {
                lower[x].push(BOTTOM);
            }
        }

        let rank = ranks.iter().copied().max().unwrap_or(0);
        if let Some(declared) = raw.declared_rank {
            if declared != rank {
                return Err(Error::DeclaredRankMismatch {
                    declared,
                    actual: rank,
                });
            }
        }
        if rank > MAX_RANK {
            return Err(Error::RankTooLarge(rank));
        }
        Ok(Self::assemble(names, ranks, lower))
    }

    /// Builds derived tables from validated name/rank/lower-cover data.
    fn assemble(names: Vec<String>, ranks: Vec<usize>, lower: Vec<Vec<usize>>) -> Self {
        let n_total = names.len();
        let mut upper = vec![Vec::new(); n_total];
        for (x, lows) in lower.iter().enumerate() {
            for &l in lows {
                upper[l].push(x);
            }
        }
        let mut below = Vec::with_capacity(n_total);
        for x in 0..n_total {
            let mut set = FixedBitSet::with_capacity(n_total);
            for &l in &lower[x] {
                set.union_with(&below[l]);
                set.insert(l);
            }
            below.push(set);
        }
        let rank = ranks.iter().copied().max().unwrap_or(0);
        let mut by_rank = vec![Vec::new(); rank + 1];
        for (x, &r) in ranks.iter().enumerate() {
            by_rank[r].push(x);
        }
        let index = names
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        Self {
            names,
            ranks,
            lower,
            upper,
            below,
            index,
            by_rank,
            rank,
        }
    }

    /// Total number of elements including the minimum.
    pub fn len(&self) -> usize {
        self.names.len()
    }

    /// True for the one-element poset `{0̂}`.
    pub fn is_empty(&self) -> bool {
        self.names.len() == 1
    }

    /// Rank of the poset (maximal element rank).
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn rank_of(&self, x: usize) -> usize {
        self.ranks[x]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::ElementNotFound(name.to_string()))
    }

    /// Elements covered by `x` (the minimum for rank-1 elements).
    pub fn lower_covers(&self, x: usize) -> &[usize] {
        &self.lower[x]
    }

    pub fn upper_covers(&self, x: usize) -> &[usize] {
        &self.upper[x]
    }

    pub fn elements_of_rank(&self, r: usize) -> &[usize] {
        self.by_rank.get(r).map_or(&[], Vec::as_slice)
    }

    /// `a < b`.
    pub fn lt(&self, a: usize, b: usize) -> bool {
        self.below[b].contains(a)
    }

    /// `a ≤ b`.
    pub fn leq(&self, a: usize, b: usize) -> bool {
        a == b || self.lt(a, b)
    }

    /// Strict down-set of `x` as a bitset over element indices.
    pub fn strictly_below(&self, x: usize) -> &FixedBitSet {
        &self.below[x]
    }

    /// Elements of the poset that are not the minimum.
    pub fn proper_elements(&self) -> std::ops::Range<usize> {
        1..self.len()
    }

    /// Maximal elements (no upper covers), excluding the minimum unless the poset is `{0̂}`.
    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&x| self.upper[x].is_empty())
            .collect()
    }

    /// Cover pairs `(upper, lower)` excluding covers of the minimum.
    pub fn covers(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.lower
            .iter()
            .enumerate()
            .flat_map(|(x, lows)| lows.iter().map(move |&l| (x, l)))
            .filter(|&(_, l)| l != BOTTOM)
    }

    pub fn is_order_ideal(&self, keep: &FixedBitSet) -> bool {
        self.first_ideal_violation(keep).is_none()
    }

    fn first_ideal_violation(&self, keep: &FixedBitSet) -> Option<usize> {
        keep.ones().find(|&x| {
            self.lower[x]
                .iter()
                .any(|&l| l != BOTTOM && !keep.contains(l))
        })
    }

    /// Subposet induced on an order ideal (the minimum is always retained).
    pub fn order_ideal(&self, keep: &FixedBitSet) -> Result<GradedPoset> {
        if let Some(x) = self.first_ideal_violation(keep) {
            return Err(Error::NotAnOrderIdeal(self.names[x].clone()));
        }
        let mut b = PosetBuilder::new();
        for x in keep.ones().filter(|&x| x != BOTTOM && x < self.len()) {
            b.element(self.names[x].clone(), self.ranks[x]);
            for &l in &self.lower[x] {
                if l != BOTTOM {
                    b.cover(self.names[x].clone(), self.names[l].clone());
                }
            }
        }
        b.build()
    }

    pub fn subposet(&self, kind: SubposetKind, sigma: usize) -> Result<GradedPoset> {
        if sigma >= self.len() {
            return Err(Error::ElementNotFound(format!("#{sigma}")));
        }
        let n = self.len();
        match kind {
            SubposetKind::ClosedInterval | SubposetKind::OpenInterval => {
                let mut keep = self.below[sigma].clone();
                if kind == SubposetKind::ClosedInterval {
                    keep.insert(sigma);
                }
                keep.insert(BOTTOM);
                self.order_ideal(&keep)
            }
            SubposetKind::Costar => {
                let mut keep = FixedBitSet::with_capacity(n);
                for x in 0..n {
                    if !self.leq(sigma, x) {
                        keep.insert(x);
                    }
                }
                keep.insert(BOTTOM);
                self.order_ideal(&keep)
            }
            SubposetKind::Link => {
                if sigma == BOTTOM {
                    return Ok(self.clone());
                }
                let base = self.ranks[sigma];
                let mut b = PosetBuilder::new();
                for x in 0..n {
                    if x != sigma && self.leq(sigma, x) {
                        b.element(self.names[x].clone(), self.ranks[x] - base);
                        for &l in &self.lower[x] {
                            if l != sigma && self.leq(sigma, l) {
                                b.cover(self.names[x].clone(), self.names[l].clone());
                            }
                        }
                    }
                }
                b.build()
            }
        }
    }

    /// The `k`-skeleton: elements of rank at most `k + 1`.
    pub fn skeleton(&self, k: i64) -> Result<GradedPoset> {
        if k < -1 || k >= self.rank as i64 {
            return Err(Error::OutOfRange {
                value: k,
                range: format!("[-1, {})", self.rank),
            });
        }
        let mut keep = FixedBitSet::with_capacity(self.len());
        for x in 0..self.len() {
            if self.ranks[x] as i64 <= k + 1 {
                keep.insert(x);
            }
        }
        self.order_ideal(&keep)
    }

    /// Re-creates a builder holding this poset's elements and covers.
    pub fn to_builder(&self) -> PosetBuilder {
        let mut b = PosetBuilder::new();
        for x in self.proper_elements() {
            b.element(self.names[x].clone(), self.ranks[x]);
        }
        for (u, l) in self.covers() {
            b.cover(self.names[u].clone(), self.names[l].clone());
        }
        b
    }

    /// Serializes to the line-oriented poset text format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "n {}", self.rank);
        for x in self.proper_elements() {
            let _ = writeln!(out, "elem {} {}", self.names[x], self.ranks[x]);
        }
        for (u, l) in self.covers() {
            let _ = writeln!(out, "cover {} {}", self.names[u], self.names[l]);
        }
        out
    }

    /// Parses the poset text format. Validation failures are reported with the line of the
    /// offending declaration where one exists.
    pub fn parse(text: &str) -> Result<GradedPoset> {
        let mut b = PosetBuilder::new();
        let mut elem_line: HashMap<String, usize> = HashMap::new();
        let mut cover_line: HashMap<(String, String), usize> = HashMap::new();
        for (i, raw_line) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw_line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let parts: Vec<&str> = content.split_whitespace().collect();
            let bad = |message: String| Error::Parse { line, message };
            match parts.as_slice() {
                ["n", r] => {
                    let r = r
                        .parse::<usize>()
                        .map_err(|_| bad(format!("invalid rank `{r}`")))?;
                    b.declared_rank(r);
                }
                ["elem", id, r] => {
                    let r = r
                        .parse::<usize>()
                        .map_err(|_| bad(format!("invalid rank `{r}`")))?;
                    elem_line.entry(id.to_string()).or_insert(line);
                    b.element(*id, r);
                }
                ["cover", u, l] => {
                    cover_line
                        .entry((u.to_string(), l.to_string()))
                        .or_insert(line);
                    b.cover(*u, *l);
                }
                [keyword, ..] => {
                    return Err(bad(format!(
                        "malformed `{keyword}` line: expected `n <rank>`, `elem <id> <rank>` or `cover <upper> <lower>`"
                    )))
                }
                [] => unreachable!(),
            }
        }
        b.build().map_err(|e| {
            let line = match &e {
                Error::DanglingReference { upper, lower }
                | Error::NonGradedCover { upper, lower, .. } => {
                    cover_line.get(&(upper.clone(), lower.clone())).copied()
                }
                Error::DuplicateElement(n)
                | Error::BadIdentifier(n)
                | Error::BadRank(n)
                | Error::CycleDetected(n) => elem_line.get(n).copied(),
                Error::RankMismatch { element, .. } => elem_line.get(element).copied(),
                _ => None,
            };
            match line {
                Some(line) => Error::Parse {
                    line,
                    message: e.to_string(),
                },
                None => e,
            }
        })
    }
}

//! Exact linear algebra: incremental sparse echelon forms over ℚ (fraction-free, with an
//! overflow fallback to big integers) and over prime fields, plus small dense kernels.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Sparse vector: strictly increasing indices, no stored zeros.
pub type SparseVec = Vec<(usize, i64)>;

/// The coefficient field of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rational,
    Prime(u64),
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    /// Validates `p` as an odd prime below `2^31`.
    pub fn prime(p: u64) -> Result<Self> {
        if p % 2 == 1 && p < (1 << 31) && is_prime(p) {
            Ok(Field::Prime(p))
        } else {
            Err(Error::BadField(p))
        }
    }

    /// Parses `q` or `fp:<p>`.
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "q" | "Q" => Ok(Field::Rational),
            _ => {
                let p = s
                    .strip_prefix("fp:")
                    .and_then(|t| t.parse::<u64>().ok())
                    .ok_or_else(|| Error::BadParameter(format!("unknown field `{s}`")))?;
                Field::prime(p)
            }
        }
    }

    /// Maps an integer into the field's canonical representative (identity over ℚ).
    pub fn reduce(&self, x: i64) -> i64 {
        match *self {
            Field::Rational => x,
            Field::Prime(p) => x.rem_euclid(p as i64),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

pub(crate) fn mod_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

pub(crate) fn mod_inv(a: u64, p: u64) -> u64 {
    mod_pow(a, p - 2, p)
}

trait IntLike: Clone + Integer + Signed + CheckedMul + CheckedSub + From<i64> {}
impl<T: Clone + Integer + Signed + CheckedMul + CheckedSub + From<i64>> IntLike for T {}

/// Fraction-free incremental echelon basis over ℤ ⊂ ℚ.
#[derive(Clone, Debug)]
struct IntEchelon<T> {
    pivots: HashMap<usize, Vec<(usize, T)>>,
}

impl<T: IntLike> IntEchelon<T> {
    fn new() -> Self {
        Self {
            pivots: HashMap::new(),
        }
    }

    /// `a·v − b·w` with `a = w_lead/g`, `b = v_lead/g`; `None` on overflow.
    fn eliminate(v: &[(usize, T)], w: &[(usize, T)]) -> Option<Vec<(usize, T)>> {
        let g = v[0].1.gcd(&w[0].1);
        let a = w[0].1.clone() / g.clone();
        let b = v[0].1.clone() / g;
        let mut out = Vec::with_capacity(v.len() + w.len());
        let (mut i, mut j) = (1, 1);
        while i < v.len() || j < w.len() {
            let vi = v.get(i).map(|e| e.0).unwrap_or(usize::MAX);
            let wj = w.get(j).map(|e| e.0).unwrap_or(usize::MAX);
            let (idx, val) = if vi < wj {
                i += 1;
                (vi, a.checked_mul(&v[i - 1].1)?)
            } else if wj < vi {
                j += 1;
                (wj, T::zero().checked_sub(&b.checked_mul(&w[j - 1].1)?)?)
            } else {
                i += 1;
                j += 1;
                let x = a.checked_mul(&v[i - 1].1)?;
                let y = b.checked_mul(&w[j - 1].1)?;
                (vi, x.checked_sub(&y)?)
            };
            if !val.is_zero() {
                out.push((idx, val));
            }
        }
        Some(out)
    }

    fn normalize(v: &mut [(usize, T)]) {
        let mut g = T::zero();
        for (_, x) in v.iter() {
            g = g.gcd(x);
            if g.is_one() {
                break;
            }
        }
        if v[0].1.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for (_, x) in v.iter_mut() {
                *x = x.clone() / g.clone();
            }
        }
    }

    /// Reduces `v` against the basis; returns the residue (empty if in the span).
    fn reduce(&self, mut v: Vec<(usize, T)>) -> Option<Vec<(usize, T)>> {
        while let Some(&(lead, _)) = v.first() {
            match self.pivots.get(&lead) {
                Some(w) => {
                    v = Self::eliminate(&v, w)?;
                    if !v.is_empty() {
                        Self::normalize(&mut v);
                    }
                }
                None => break,
            }
        }
        Some(v)
    }

    /// Inserts `v`; returns whether the rank grew, or `None` on overflow.
    fn insert(&mut self, v: Vec<(usize, T)>) -> Option<bool> {
        let mut r = self.reduce(v)?;
        if r.is_empty() {
            return Some(false);
        }
        Self::normalize(&mut r);
        self.pivots.insert(r[0].0, r);
        Some(true)
    }
}

#[derive(Clone, Debug)]
struct ModEchelon {
    p: u64,
    pivots: HashMap<usize, Vec<(usize, u64)>>,
}

impl ModEchelon {
    fn new(p: u64) -> Self {
        Self {
            p,
            pivots: HashMap::new(),
        }
    }

    fn insert(&mut self, mut v: Vec<(usize, u64)>) -> bool {
        let p = self.p;
        while let Some(&(lead, c)) = v.first() {
            let Some(w) = self.pivots.get(&lead) else {
                break;
            };
            // w is monic at its leading index.
            let f = c;
            let mut out = Vec::with_capacity(v.len() + w.len());
            let (mut i, mut j) = (1, 1);
            while i < v.len() || j < w.len() {
                let vi = v.get(i).map(|e| e.0).unwrap_or(usize::MAX);
                let wj = w.get(j).map(|e| e.0).unwrap_or(usize::MAX);
                let (idx, val) = if vi < wj {
                    i += 1;
                    (vi, v[i - 1].1)
                } else if wj < vi {
                    j += 1;
                    (wj, (p - f * w[j - 1].1 % p) % p)
                } else {
                    i += 1;
                    j += 1;
                    (vi, (v[i - 1].1 + p - f * w[j - 1].1 % p) % p)
                };
                if val != 0 {
                    out.push((idx, val));
                }
            }
            v = out;
        }
        if v.is_empty() {
            return false;
        }
        let inv = mod_inv(v[0].1, p);
        for e in v.iter_mut() {
            e.1 = e.1 * inv % p;
        }
        self.pivots.insert(v[0].0, v);
        true
    }
}

fn to_t<T: From<i64>>(v: &[(usize, i64)]) -> Vec<(usize, T)> {
    v.iter().map(|&(i, x)| (i, T::from(x))).collect()
}

fn to_mod(v: &[(usize, i64)], p: u64) -> Vec<(usize, u64)> {
    v.iter()
        .filter_map(|&(i, x)| {
            let r = x.rem_euclid(p as i64) as u64;
            (r != 0).then_some((i, r))
        })
        .collect()
}

/// Incremental span over a field, with [`Echelon::insert`] reporting rank growth.
#[derive(Clone, Debug)]
pub struct Echelon {
    inner: EchelonInner,
    rank: usize,
}

#[derive(Clone, Debug)]
enum EchelonInner {
    Small(IntEchelon<i128>, Vec<SparseVec>),
    Big(IntEchelon<BigInt>),
    Mod(ModEchelon),
}

impl Echelon {
    pub fn new(field: Field) -> Self {
        let inner = match field {
            Field::Rational => EchelonInner::Small(IntEchelon::new(), Vec::new()),
            Field::Prime(p) => EchelonInner::Mod(ModEchelon::new(p)),
        };
        Self { inner, rank: 0 }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Adds a vector (entries sorted by index, no zeros); returns whether it was independent.
    pub fn insert(&mut self, v: &[(usize, i64)]) -> bool {
        let grew = match &mut self.inner {
            EchelonInner::Mod(m) => m.insert(to_mod(v, m.p)),
            EchelonInner::Big(b) => b.insert(to_t(v)).expect("big integers do not overflow"),
            EchelonInner::Small(s, history) => match s.insert(to_t(v)) {
                Some(g) => {
                    if g {
                        history.push(v.to_vec());
                    }
                    g
                }
                None => {
                    // Rebuild from the independent vectors seen so far.
                    let mut big = IntEchelon::<BigInt>::new();
                    for h in history.iter() {
                        big.insert(to_t(h));
                    }
                    let g = big.insert(to_t(v)).expect("big integers do not overflow");
                    self.inner = EchelonInner::Big(big);
                    g
                }
            },
        };
        if grew {
            self.rank += 1;
        }
        grew
    }
}

/// Rank of a family of sparse integer vectors over `field`.
pub fn rank(field: Field, vectors: &[SparseVec]) -> usize {
    let mut e = Echelon::new(field);
    for v in vectors {
        e.insert(v);
    }
    e.rank()
}

/// Transposes a sparse column list into a sparse row list.
pub fn transpose(cols: &[SparseVec], nrows: usize) -> Vec<SparseVec> {
    let mut rows = vec![Vec::new(); nrows];
    for (j, c) in cols.iter().enumerate() {
        for &(i, x) in c {
            rows[i].push((j, x));
        }
    }
    rows
}

/// Dense vector to sparse form.
pub fn sparse(dense: &[i64]) -> SparseVec {
    dense
        .iter()
        .enumerate()
        .filter(|(_, &x)| x != 0)
        .map(|(i, &x)| (i, x))
        .collect()
}

/// Rank over ℚ of a dense big-integer matrix by Bareiss fraction-free elimination.
pub fn bareiss_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, piv);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = &m[r][c] * &m[i][j] - &m[i][c] * &m[r][j];
                m[i][j] = v / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Solves `A x = b` exactly over ℚ where `rows` lists the rows of `[A | b]` sparsely
/// (column `ncols` holds `b`). Returns `Ok(None)` when inconsistent; free variables are 0.
pub fn solve_rational(rows: &[Vec<(usize, i128)>], ncols: usize) -> Option<Vec<BigRational>> {
    let mut small = IntEchelon::<i128>::new();
    let mut overflow = false;
    for r in rows {
        if small.insert(r.clone()).is_none() {
            overflow = true;
            break;
        }
    }
    let pivots: HashMap<usize, Vec<(usize, BigInt)>> = if overflow {
        let mut big = IntEchelon::<BigInt>::new();
        for r in rows {
            let v: Vec<(usize, BigInt)> = r.iter().map(|&(i, x)| (i, BigInt::from(x))).collect();
            big.insert(v);
        }
        big.pivots
    } else {
        small
            .pivots
            .into_iter()
            .map(|(k, v)| {
                (
                    k,
                    v.into_iter().map(|(i, x)| (i, BigInt::from(x))).collect(),
                )
            })
            .collect()
    };
    if pivots.contains_key(&ncols) {
        return None;
    }
    let mut leads: Vec<usize> = pivots.keys().copied().collect();
    leads.sort_unstable_by(|a, b| b.cmp(a));
    let mut x = vec![BigRational::zero(); ncols];
    for lead in leads {
        let row = &pivots[&lead];
        let mut rhs = BigRational::zero();
        for (i, c) in row.iter().skip(1) {
            if *i == ncols {
                rhs += BigRational::from_integer(c.clone());
            } else {
                rhs -= BigRational::from_integer(c.clone()) * &x[*i];
            }
        }
        x[lead] = rhs / BigRational::from_integer(row[0].1.clone());
    }
    Some(x)
}

/// Converts an integral rational to `i128`.
pub fn rational_to_i128(q: &BigRational) -> Option<i128> {
    if q.is_integer() {
        q.to_integer().to_i128()
    } else {
        None
    }
}

/// A basis of the kernel of a small dense integer matrix over `field`.
///
/// Over ℚ each basis vector is scaled to primitive integers; over `F_p` entries are returned
/// as representatives in `(-p/2, p/2]`.
pub fn kernel(field: Field, m: &[Vec<i64>], ncols: usize) -> Vec<Vec<i64>> {
    match field {
        Field::Rational => kernel_q(m, ncols),
        Field::Prime(p) => kernel_p(m, ncols, p),
    }
}

fn kernel_q(m: &[Vec<i64>], ncols: usize) -> Vec<Vec<i64>> {
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .map(|r| {
            r.iter()
                .map(|&x| BigRational::from_integer(x.into()))
                .collect()
        })
        .collect();
    let pivcols = rref(
        &mut a,
        ncols,
        |x| x.is_zero(),
        |x| x.recip(),
        |x, y| x * y,
        |x, y| x - y,
    );
    free_basis(
        &a,
        &pivcols,
        ncols,
        BigRational::zero(),
        BigRational::one(),
        |x| -x.clone(),
    )
    .into_iter()
    .map(|v| {
        let l = v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let ints: Vec<BigInt> = v
            .iter()
            .map(|q| (q * BigRational::from_integer(l.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        ints.iter()
            .map(|x| (x / &g).to_i64().expect("kernel entry fits i64"))
            .collect()
    })
    .collect()
}

fn kernel_p(m: &[Vec<i64>], ncols: usize, p: u64) -> Vec<Vec<i64>> {
    let mut a: Vec<Vec<u64>> = m
        .iter()
        .map(|r| r.iter().map(|&x| x.rem_euclid(p as i64) as u64).collect())
        .collect();
    let pivcols = rref(
        &mut a,
        ncols,
        |x| *x == 0,
        |x| mod_inv(*x, p),
        |x, y| x * y % p,
        |x, y| (x + p - y) % p,
    );
    free_basis(&a, &pivcols, ncols, 0u64, 1u64, |x| (p - x) % p)
        .into_iter()
        .map(|v| {
            v.into_iter()
                .map(|x| {
                    if x > p / 2 {
                        x as i64 - p as i64
                    } else {
                        x as i64
                    }
                })
                .collect()
        })
        .collect()
}

fn rref<E: Clone>(
    a: &mut [Vec<E>],
    ncols: usize,
    is_zero: impl Fn(&E) -> bool,
    inv: impl Fn(&E) -> E,
    mul: impl Fn(&E, &E) -> E,
    sub: impl Fn(&E, &E) -> E,
) -> Vec<usize> {
    let mut pivcols = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..a.len()).find(|&i| !is_zero(&a[i][c])) else {
            continue;
        };
        a.swap(r, pr);
        let iv = inv(&a[r][c]);
        for j in 0..ncols {
            a[r][j] = mul(&a[r][j], &iv);
        }
        for i in 0..a.len() {
            if i != r && !is_zero(&a[i][c]) {
                let f = a[i][c].clone();
                for j in 0..ncols {
                    let t = mul(&f, &a[r][j]);
                    a[i][j] = sub(&a[i][j], &t);
                }
            }
        }
        pivcols.push(c);
        r += 1;
    }
    pivcols
}

fn free_basis<E: Clone>(
    a: &[Vec<E>],
    pivcols: &[usize],
    ncols: usize,
    zero: E,
    one: E,
    neg: impl Fn(&E) -> E,
) -> Vec<Vec<E>> {
    let free: Vec<usize> = (0..ncols).filter(|c| !pivcols.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![zero.clone(); ncols];
            v[f] = one.clone();
            for (r, &pc) in pivcols.iter().enumerate() {
                v[pc] = neg(&a[r][f]);
            }
            v
        })
        .collect()
}

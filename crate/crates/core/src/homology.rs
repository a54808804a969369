//! Chain complexes, homology ranks, Reisner-type link criteria and incidence functions.

use serde::Serialize;

use crate::complex::{order_complex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::exec;
use crate::linalg::{self, Field, SparseVec};
use crate::poset::{GradedPoset, SubposetKind};

/// An augmented chain complex starting in degree −1.
///
/// `dims[k]` is `dim C_{k−1}`; `boundaries[k]` holds `∂ : C_{k−1} → C_{k−2}` as one sparse
/// column per basis element of `C_{k−1}` (`boundaries[0]` is empty).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplexData {
    dims: Vec<usize>,
    boundaries: Vec<Vec<SparseVec>>,
}

impl ChainComplexData {
    pub fn new(dims: Vec<usize>, boundaries: Vec<Vec<SparseVec>>) -> Self {
        assert_eq!(dims.len(), boundaries.len());
        for (k, b) in boundaries.iter().enumerate().skip(1) {
            assert_eq!(b.len(), dims[k], "boundary column count");
        }
        Self { dims, boundaries }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn boundary(&self, k: usize) -> &[SparseVec] {
        &self.boundaries[k]
    }

    /// Ranks of `∂` out of each `C_{k−1}`.
    pub fn boundary_ranks(&self, field: Field) -> Vec<usize> {
        exec::par_map_range(self.dims.len(), |k| {
            if k == 0 {
                0
            } else {
                linalg::rank(field, &self.boundaries[k])
            }
        })
    }

    /// `rank H_{k−1}` for each index `k`.
    pub fn homology_ranks(&self, field: Field) -> Vec<usize> {
        let r = self.boundary_ranks(field);
        (0..self.dims.len())
            .map(|k| self.dims[k] - r[k] - r.get(k + 1).copied().unwrap_or(0))
            .collect()
    }

    /// Exact check of `∂ ∘ ∂ = 0` over ℤ.
    pub fn squares_to_zero(&self) -> bool {
        (2..self.dims.len()).all(|k| {
            let lower = &self.boundaries[k - 1];
            self.boundaries[k].iter().all(|col| {
                let mut acc = vec![0i64; self.dims[k - 2]];
                for &(j, x) in col {
                    for &(i, y) in &lower[j] {
                        acc[i] += x * y;
                    }
                }
                acc.iter().all(|&v| v == 0)
            })
        })
    }

    /// `Σ (−1)^{k−1} dim C_{k−1}`.
    pub fn euler_characteristic(&self) -> i64 {
        self.dims
            .iter()
            .enumerate()
            .map(|(k, &d)| if k % 2 == 1 { d as i64 } else { -(d as i64) })
            .sum()
    }
}

/// Reduced homology ranks `H̃_{−1} … H̃_{dim Δ}` of a simplicial complex.
pub fn reduced_homology_ranks(delta: &SimplicialComplex, field: Field) -> Vec<usize> {
    delta.chain_complex().homology_ranks(field)
}

/// Outcome of a certification, with the first violation found.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<String>,
}

impl Verdict {
    pub fn pass() -> Self {
        Self {
            holds: true,
            witness: None,
        }
    }

    pub fn fail(witness: impl Into<String>) -> Self {
        Self {
            holds: false,
            witness: Some(witness.into()),
        }
    }
}

fn link_scan(delta: &SimplicialComplex, field: Field, sphere: bool) -> Verdict {
    let faces: Vec<Vec<u32>> = delta.faces_by_size().into_iter().flatten().collect();
    let bad = exec::par_find_first(&faces, |f| {
        let lk = delta.link(f).expect("face of the complex");
        let h = reduced_homology_ranks(&lk, field);
        let top = (lk.dim() + 1) as usize;
        if let Some(i) = (0..top).find(|&i| h[i] != 0) {
            return Some(format!(
                "link of {:?} has H~_{} of rank {}",
                delta.face_names(f),
                i as i64 - 1,
                h[i]
            ));
        }
        if sphere && h[top] != 1 {
            return Some(format!(
                "link of {:?} has top homology H~_{} of rank {}",
                delta.face_names(f),
                lk.dim(),
                h[top]
            ));
        }
        None
    });
    bad.map_or_else(Verdict::pass, Verdict::fail)
}

/// Reisner's criterion: every link has vanishing reduced homology below its dimension.
pub fn reisner_cm(delta: &SimplicialComplex, field: Field) -> Verdict {
    link_scan(delta, field, false)
}

/// Every link (including that of ∅) is a homology sphere of its own dimension.
pub fn gorenstein_star(delta: &SimplicialComplex, field: Field) -> Verdict {
    link_scan(delta, field, true)
}

/// Every `∂σ` has a Gorenstein* order complex.
pub fn quasi_cw_check(p: &GradedPoset, field: Field) -> Verdict {
    let elems: Vec<usize> = p.proper_elements().filter(|&x| p.rank_of(x) >= 2).collect();
    let bad = exec::par_find_first(&elems, |&x| {
        let boundary = p
            .subposet(SubposetKind::OpenInterval, x)
            .expect("element exists");
        let v = gorenstein_star(&order_complex(&boundary), field);
        (!v.holds).then(|| {
            format!(
                "boundary of `{}`: {}",
                p.name(x),
                v.witness.unwrap_or_default()
            )
        })
    });
    bad.map_or_else(Verdict::pass, Verdict::fail)
}

/// Signs `ε(σ, τ)` for every cover `σ ⋗ τ`, aligned with [`GradedPoset::lower_covers`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceFunction {
    signs: Vec<Vec<i8>>,
}

impl IncidenceFunction {
    /// `ε(σ, τ)`, zero when `σ` does not cover `τ`.
    pub fn get(&self, p: &GradedPoset, sigma: usize, tau: usize) -> i64 {
        p.lower_covers(sigma)
            .iter()
            .position(|&t| t == tau)
            .map_or(0, |i| self.signs[sigma][i] as i64)
    }

    /// Signs on the lower covers of `sigma`, in cover order.
    pub fn signs(&self, sigma: usize) -> &[i8] {
        &self.signs[sigma]
    }

    /// Checks the diamond condition on every length-2 interval.
    pub fn satisfies_diamond(&self, p: &GradedPoset) -> bool {
        p.proper_elements().filter(|&x| p.rank_of(x) >= 2).all(|x| {
            let mut acc: std::collections::HashMap<usize, i64> = Default::default();
            for (i, &t) in p.lower_covers(x).iter().enumerate() {
                for (j, &r) in p.lower_covers(t).iter().enumerate() {
                    *acc.entry(r).or_default() += self.signs[x][i] as i64 * self.signs[t][j] as i64;
                }
            }
            acc.values().all(|&v| v == 0)
        })
    }
}

/// Builds an incidence function by induction on rank. Each kernel generator is scaled so
/// its first nonzero entry is `+1`.
pub fn incidence_function(p: &GradedPoset, field: Field) -> Result<IncidenceFunction> {
    let mut signs: Vec<Vec<i8>> = vec![Vec::new(); p.len()];
    for r in 1..=p.rank() {
        let layer = p.elements_of_rank(r);
        let done = &signs;
        let computed: Vec<Result<Vec<i8>>> = exec::par_map(layer, |&x| {
            let taus = p.lower_covers(x);
            if r == 1 {
                return Ok(vec![1; taus.len()]);
            }
            let mut rhos: Vec<usize> = taus
                .iter()
                .flat_map(|&t| p.lower_covers(t).iter().copied())
                .collect();
            rhos.sort_unstable();
            rhos.dedup();
            let mut m = vec![vec![0i64; taus.len()]; rhos.len()];
            for (j, &t) in taus.iter().enumerate() {
                for (k, &rho) in p.lower_covers(t).iter().enumerate() {
                    let i = rhos.binary_search(&rho).expect("collected above");
                    m[i][j] = done[t][k] as i64;
                }
            }
            let ker = linalg::kernel(field, &m, taus.len());
            if ker.len() != 1 {
                return Err(Error::KernelDimensionNotOne {
                    element: p.name(x).to_string(),
                    dim: ker.len(),
                });
            }
            let v = &ker[0];
            let lead = v.iter().copied().find(|&e| e != 0).unwrap_or(0);
            let scaled: Option<Vec<i8>> = v
                .iter()
                .map(|&e| match field {
                    Field::Rational => match (e == lead, e == -lead) {
                        (true, _) => Some(1),
                        (_, true) => Some(-1),
                        _ => None,
                    },
                    Field::Prime(q) => {
                        let l = lead.rem_euclid(q as i64) as u64;
                        let s = e.rem_euclid(q as i64) as u64 * linalg::mod_inv(l, q) % q;
                        if s == 1 {
                            Some(1)
                        } else if s == q - 1 {
                            Some(-1)
                        } else {
                            None
                        }
                    }
                })
                .collect();
            scaled.ok_or_else(|| Error::NonUnitEntries(p.name(x).to_string()))
        });
        for (&x, s) in layer.iter().zip(computed) {
            signs[x] = s?;
        }
    }
    Ok(IncidenceFunction { signs })
}

/// The augmented oriented chain complex with `C_{i}` spanned by the rank-`(i+1)` elements.
pub fn poset_chain_complex(p: &GradedPoset, eps: &IncidenceFunction) -> ChainComplexData {
    let weights = vec![1usize; p.len()];
    stalk_chain_complex(p, eps, &weights, |_, _| 1)
}

/// Chain complex of a sheaf whose cover restrictions are `1×1` scalars, or zero where a
/// stalk vanishes. Used for structure sheaves of order ideals and their quotients.
pub(crate) fn stalk_chain_complex(
    p: &GradedPoset,
    eps: &IncidenceFunction,
    keep: &[usize],
    res: impl Fn(usize, usize) -> i64,
) -> ChainComplexData {
    let n = p.rank();
    let mut pos = vec![usize::MAX; p.len()];
    let mut dims = vec![0usize; n + 1];
    for r in 0..=n {
        for &x in p.elements_of_rank(r) {
            if keep[x] > 0 {
                pos[x] = dims[r];
                dims[r] += 1;
            }
        }
    }
    let mut boundaries = vec![Vec::new()];
    for r in 1..=n {
        let cols = p
            .elements_of_rank(r)
            .iter()
            .filter(|&&x| keep[x] > 0)
            .map(|&x| {
                let mut col: SparseVec = p
                    .lower_covers(x)
                    .iter()
                    .zip(eps.signs(x))
                    .filter(|(&t, _)| keep[t] > 0)
                    .map(|(&t, &s)| (pos[t], s as i64 * res(x, t)))
                    .filter(|&(_, v)| v != 0)
                    .collect();
                col.sort_unstable();
                col
            })
            .collect();
        boundaries.push(cols);
    }
    ChainComplexData::new(dims, boundaries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::PosetBuilder;

    fn ngon(m: usize) -> GradedPoset {
        let mut b = PosetBuilder::new();
        for i in 0..m {
            b.element(format!("v{i}"), 1);
        }
        for i in 0..m {
            b.element(format!("e{i}"), 2);
            b.cover(format!("e{i}"), format!("v{i}"));
            b.cover(format!("e{i}"), format!("v{}", (i + 1) % m));
        }
        b.build().unwrap()
    }

    #[test]
    fn simplicial_homology_basics() {
        let pt = SimplicialComplex::from_named_facets(&[&["x"]]);
        assert_eq!(reduced_homology_ranks(&pt, Field::Rational), vec![0, 0]);
        let circle = SimplicialComplex::from_named_facets(&[&["a", "b"], &["b", "c"], &["a", "c"]]);
        assert_eq!(
            reduced_homology_ranks(&circle, Field::Rational),
            vec![0, 0, 1]
        );
        let empty = SimplicialComplex::from_facets(vec![], vec![]).unwrap();
        assert_eq!(reduced_homology_ranks(&empty, Field::Rational), vec![1]);
    }

    #[test]
    fn reisner_and_gorenstein() {
        let two_edges = SimplicialComplex::from_named_facets(&[&["a", "b"], &["c", "d"]]);
        assert!(!reisner_cm(&two_edges, Field::Rational).holds);
        let path = SimplicialComplex::from_named_facets(&[&["a", "b"], &["b", "c"]]);
        assert!(reisner_cm(&path, Field::Rational).holds);
        assert!(!gorenstein_star(&path, Field::Rational).holds);
        for m in 3..=8 {
            assert!(gorenstein_star(&order_complex(&ngon(m)), Field::Rational).holds);
        }
    }

    #[test]
    fn three_atoms_under_one_element_are_not_quasi_cw() {
        let mut b = PosetBuilder::new();
        b.element("x", 1)
            .element("y", 1)
            .element("z", 1)
            .element("t", 2);
        b.cover("t", "x").cover("t", "y").cover("t", "z");
        let p = b.build().unwrap();
        assert!(!quasi_cw_check(&p, Field::Rational).holds);
        assert!(matches!(
            incidence_function(&p, Field::Rational),
            Err(Error::KernelDimensionNotOne { dim: 2, .. })
        ));
    }

    #[test]
    fn segment_incidence() {
        let mut b = PosetBuilder::new();
        b.element("v1", 1).element("v2", 1).element("e", 2);
        b.cover("e", "v1").cover("e", "v2");
        let p = b.build().unwrap();
        for field in [Field::Rational, Field::Prime(32003)] {
            let eps = incidence_function(&p, field).unwrap();
            let e = p.index_of("e").unwrap();
            assert_eq!(eps.get(&p, e, p.index_of("v1").unwrap()), 1);
            assert_eq!(eps.get(&p, e, p.index_of("v2").unwrap()), -1);
            let cc = poset_chain_complex(&p, &eps);
            assert!(cc.squares_to_zero());
            assert_eq!(cc.homology_ranks(field), vec![0, 0, 0]);
        }
    }

    #[test]
    fn polygon_chain_complex() {
        let p = ngon(5);
        let eps = incidence_function(&p, Field::Rational).unwrap();
        assert!(eps.satisfies_diamond(&p));
        let cc = poset_chain_complex(&p, &eps);
        assert!(cc.squares_to_zero());
        assert_eq!(cc.homology_ranks(Field::Rational), vec![0, 0, 1]);
    }
}

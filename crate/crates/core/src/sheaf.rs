//! Sheaves of finite-dimensional vector spaces on a graded poset, their chain complexes,
//! link quotients, canonical-module stalk dimensions and skeleton oracles.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use crate::cdindex::{b_expression, phi_block};
use crate::error::{Error, Result};
use crate::exec;
use crate::flag::{weighted_flag_f, FlagVector, Flavor};
use crate::homology::{ChainComplexData, IncidenceFunction, Verdict};
use crate::linalg::{Field, SparseVec};
use crate::ncpoly::{AbPoly, AbWord, CdPoly};
use crate::poset::{GradedPoset, BOTTOM};

/// A dense integer matrix, row-major.
pub type Matrix = Vec<Vec<i64>>;

fn mat_mul(a: &Matrix, b: &Matrix, inner: usize, cols: usize) -> Matrix {
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

/// Stalks and cover restrictions `res^σ_τ : F_σ → F_τ` (shape `dim F_τ × dim F_σ`).
#[derive(Clone, Debug)]
pub struct SheafData {
    base: GradedPoset,
    stalks: Vec<usize>,
    restrictions: Vec<Vec<Matrix>>,
}

impl SheafData {
    /// Validates shapes and functoriality along every pair of saturated chains.
    pub fn new(
        base: GradedPoset,
        stalks: Vec<usize>,
        restrictions: Vec<Vec<Matrix>>,
    ) -> Result<Self> {
        assert_eq!(stalks.len(), base.len());
        for x in base.proper_elements() {
            let covers = base.lower_covers(x);
            let mats = restrictions.get(x).map(Vec::as_slice).unwrap_or(&[]);
            if mats.len() != covers.len() {
                return Err(Error::BadRestrictionShape {
                    upper: base.name(x).into(),
                    lower: base.name(covers.first().copied().unwrap_or(BOTTOM)).into(),
                });
            }
            for (m, &t) in mats.iter().zip(covers) {
                let ok = m.len() == stalks[t] && m.iter().all(|r| r.len() == stalks[x]);
                if !ok {
                    return Err(Error::BadRestrictionShape {
                        upper: base.name(x).into(),
                        lower: base.name(t).into(),
                    });
                }
            }
        }
        let sheaf = Self {
            base,
            stalks,
            restrictions,
        };
        sheaf.check_functorial()?;
        Ok(sheaf)
    }

    fn check_functorial(&self) -> Result<()> {
        let p = &self.base;
        let mut comp: Vec<HashMap<usize, Matrix>> = vec![HashMap::new(); p.len()];
        for x in p.proper_elements() {
            let mut mine: HashMap<usize, Matrix> = HashMap::new();
            for (i, &t) in p.lower_covers(x).iter().enumerate() {
                let r = &self.restrictions[x][i];
                let mut candidates = vec![(t, r.clone())];
                for (&rho, m) in &comp[t] {
                    candidates.push((rho, mat_mul(m, r, self.stalks[t], self.stalks[x])));
                }
                for (rho, m) in candidates {
                    match mine.get(&rho) {
                        Some(prev) if *prev != m => {
                            return Err(Error::NotFunctorial {
                                upper: p.name(x).into(),
                                lower: p.name(rho).into(),
                            })
                        }
                        Some(_) => {}
                        None => {
                            mine.insert(rho, m);
                        }
                    }
                }
            }
            comp[x] = mine;
        }
        Ok(())
    }

    /// `K[Q]` for an order ideal `Q`: stalk `K` on `Q ∪ {0̂}`, identity restrictions.
    pub fn from_order_ideal(p: &GradedPoset, q: &FixedBitSet) -> Result<Self> {
        if let Some(x) = q.ones().find(|&x| {
            p.lower_covers(x)
                .iter()
                .any(|&t| t != BOTTOM && !q.contains(t))
        }) {
            return Err(Error::NotAnOrderIdeal(p.name(x).to_string()));
        }
        let stalks: Vec<usize> = (0..p.len())
            .map(|x| usize::from(x == BOTTOM || q.contains(x)))
            .collect();
        Ok(Self::scalar(p.clone(), stalks))
    }

    /// The structure sheaf of `K[P]`.
    pub fn structure(p: &GradedPoset) -> Self {
        Self::scalar(p.clone(), vec![1; p.len()])
    }

    fn scalar(base: GradedPoset, stalks: Vec<usize>) -> Self {
        let restrictions = (0..base.len())
            .map(|x| {
                base.lower_covers(x)
                    .iter()
                    .map(|&t| vec![vec![1i64; stalks[x]]; stalks[t]])
                    .collect()
            })
            .collect();
        Self {
            base,
            stalks,
            restrictions,
        }
    }

    pub fn base(&self) -> &GradedPoset {
        &self.base
    }

    pub fn stalks(&self) -> &[usize] {
        &self.stalks
    }

    /// `max{rank σ : F_σ ≠ 0}` (0 for the zero sheaf).
    pub fn dim(&self) -> usize {
        (0..self.base.len())
            .filter(|&x| self.stalks[x] > 0)
            .map(|x| self.base.rank_of(x))
            .max()
            .unwrap_or(0)
    }

    /// Stalks above rank `k + 1` are zeroed.
    pub fn skeleton(&self, k: usize) -> Self {
        let stalks: Vec<usize> = (0..self.base.len())
            .map(|x| {
                if self.base.rank_of(x) <= k + 1 {
                    self.stalks[x]
                } else {
                    0
                }
            })
            .collect();
        let restrictions = (0..self.base.len())
            .map(|x| {
                self.base
                    .lower_covers(x)
                    .iter()
                    .enumerate()
                    .map(|(i, &t)| {
                        if stalks[x] == 0 {
                            vec![Vec::new(); stalks[t]]
                        } else {
                            self.restrictions[x][i].clone()
                        }
                    })
                    .collect()
            })
            .collect();
        Self {
            base: self.base.clone(),
            stalks,
            restrictions,
        }
    }

    /// Flag f-vector of the associated module: `f_S = Σ_{S-chains C} dim F_{max C}`.
    pub fn module_flag_f(&self) -> Result<FlagVector> {
        let w: Vec<i128> = self.stalks.iter().map(|&s| s as i128).collect();
        weighted_flag_f(&self.base, &w)
    }

    /// Chain complex on the elements selected by `keep`, with `C_i = ⊕_{rank σ = i+1} F_σ`.
    fn complex_on(
        &self,
        eps: &IncidenceFunction,
        keep: impl Fn(usize) -> bool,
    ) -> ChainComplexData {
        let p = &self.base;
        let n = p.rank();
        let mut offset = vec![usize::MAX; p.len()];
        let mut dims = vec![0usize; n + 1];
        for r in 0..=n {
            for &x in p.elements_of_rank(r) {
                if keep(x) {
                    offset[x] = dims[r];
                    dims[r] += self.stalks[x];
                }
            }
        }
        let mut boundaries = vec![Vec::new()];
        for r in 1..=n {
            let mut cols: Vec<SparseVec> = Vec::with_capacity(dims[r]);
            for &x in p.elements_of_rank(r) {
                if !keep(x) {
                    continue;
                }
                for j in 0..self.stalks[x] {
                    let mut col: SparseVec = Vec::new();
                    for (i, &t) in p.lower_covers(x).iter().enumerate() {
                        if !keep(t) {
                            continue;
                        }
                        let s = eps.signs(x)[i] as i64;
                        let m = &self.restrictions[x][i];
                        for (row, mrow) in m.iter().enumerate() {
                            let v = s * mrow[j];
                            if v != 0 {
                                col.push((offset[t] + row, v));
                            }
                        }
                    }
                    col.sort_unstable();
                    cols.push(col);
                }
            }
            boundaries.push(cols);
        }
        ChainComplexData::new(dims, boundaries)
    }

    /// The complex `C_•^F` with blocks `ε(σ,τ)·res^σ_τ`.
    pub fn chain_complex(&self, eps: &IncidenceFunction) -> ChainComplexData {
        self.complex_on(eps, |_| true)
    }

    /// `C_•^F / C_•^{cost_F(σ)}`: the basis elements `≥ σ`.
    pub fn quotient_complex(&self, eps: &IncidenceFunction, sigma: usize) -> ChainComplexData {
        self.complex_on(eps, |x| self.base.leq(sigma, x))
    }

    /// `H̃_j(lk_F σ) = H_{j + rank σ}` of the quotient at `σ`, for `j = −1 … d−1−rank σ`.
    pub fn link_quotient_homology(
        &self,
        eps: &IncidenceFunction,
        sigma: usize,
        field: Field,
    ) -> Vec<usize> {
        let h = self.quotient_complex(eps, sigma).homology_ranks(field);
        let r = self.base.rank_of(sigma);
        let d = self.dim();
        if d < r {
            return Vec::new();
        }
        // Index k of `h` holds H_{k−1}; H_{j+r} sits at k = j + r + 1.
        (r..=d).map(|k| h[k]).collect()
    }

    /// Sheaf-theoretic CM criterion: at every σ the quotient homology is concentrated in
    /// degree `d − 1`.
    pub fn cm_check(&self, eps: &IncidenceFunction, d: usize, field: Field) -> Verdict {
        let elems: Vec<usize> = (0..self.base.len()).collect();
        let bad = exec::par_find_first(&elems, |&x| {
            let h = self.quotient_complex(eps, x).homology_ranks(field);
            h.iter().enumerate().find_map(|(k, &v)| {
                (v != 0 && k != d).then(|| {
                    let j = k as i64 - 1 - self.base.rank_of(x) as i64;
                    format!("H~_{j}(lk `{}`) has rank {v}", self.base.name(x))
                })
            })
        });
        bad.map_or_else(Verdict::pass, Verdict::fail)
    }

    /// `dim F^∨_σ = rank H_{d−1}(C^F / C^{cost σ})` for every σ.
    pub fn dual_stalk_dims(&self, eps: &IncidenceFunction, d: usize, field: Field) -> Vec<usize> {
        exec::par_map_range(self.base.len(), |x| {
            let cc = self.quotient_complex(eps, x);
            let h = cc.homology_ranks(field);
            h.get(d).copied().unwrap_or(0)
        })
    }

    /// Evaluates the ab-index from stalk dimensions and the cd-indices
    /// of the boundaries `∂σ`.
    pub fn ab_index_via_stalks(&self, boundary_cd: &HashMap<usize, CdPoly>) -> Result<AbPoly> {
        let d = self.dim();
        let p = &self.base;
        let mut out = AbPoly::a_minus_b_pow(d).scale(self.stalks[BOTTOM] as i128);
        for x in p.proper_elements() {
            if self.stalks[x] == 0 {
                continue;
            }
            let phi = boundary_cd
                .get(&x)
                .ok_or_else(|| Error::MissingBoundaryIndex(p.name(x).to_string()))?;
            let term = phi
                .expand()
                .mul_word(AbWord::b())
                .mul(&AbPoly::a_minus_b_pow(d - p.rank_of(x)))
                .scale(self.stalks[x] as i128);
            out = out.add(&term);
        }
        Ok(out)
    }
}

/// One skeleton's worth of the dual-sheaf subtraction route.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KaruBlock {
    pub k: usize,
    /// Flag-f difference of `Ω(F^(k))` and `F^(k)` restricted to `S ⊆ [k]`, as an ab-index.
    pub quotient_psi: AbPoly,
    /// The same block read off the b-expression.
    pub expected: CdPoly,
    /// Whether the full degree-`(k+1)` difference equals `Φ_k·(a − b)`.
    pub full_difference_ok: bool,
}

impl KaruBlock {
    pub fn agrees(&self) -> bool {
        self.quotient_psi == self.expected.expand() && self.full_difference_ok
    }
}

/// For each `k ≤ d − 2`, compares the ab-index of `Ω(F^(k))/F^(k)` obtained by dimension
/// subtraction with `Φ_k` from the b-expression of `Ψ_F`.
pub fn karu_phi_oracle(
    sheaf: &SheafData,
    eps: &IncidenceFunction,
    field: Field,
) -> Result<Vec<KaruBlock>> {
    let d = sheaf.dim();
    if d < 2 {
        return Ok(Vec::new());
    }
    let psi = sheaf.module_flag_f()?.restrict(d).to_h()?.ab_index();
    let b = b_expression(&psi)?;
    let blocks: Vec<Result<KaruBlock>> = exec::par_map_range(d - 1, |k| {
        let skel = sheaf.skeleton(k);
        let dual: Vec<i128> = skel
            .dual_stalk_dims(eps, k + 1, field)
            .into_iter()
            .map(|v| v as i128)
            .collect();
        let diff = weighted_flag_f(&sheaf.base, &dual)?
            .restrict(k + 1)
            .sub(&skel.module_flag_f()?.restrict(k + 1));
        if let Some((m, &v)) = diff.entries().iter().enumerate().find(|(_, &v)| v < 0) {
            return Err(Error::NegativeQuotientDim {
                skeleton: k,
                set: crate::flag::mask_to_set(m as u64),
                value: v,
            });
        }
        let expected = phi_block(&b.phi, k);
        let quotient_psi = diff.restrict(k).to_h()?.ab_index();
        let full = FlagVector::new(k + 1, Flavor::F, diff.entries().to_vec())
            .to_h()?
            .ab_index();
        let mut ab = AbPoly::zero(1);
        ab.add_term(AbWord::a(), 1);
        ab.add_term(AbWord::b(), -1);
        let full_difference_ok = full == expected.expand().mul(&ab);
        Ok(KaruBlock {
            k,
            quotient_psi,
            expected,
            full_difference_ok,
        })
    });
    blocks.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::incidence_function;
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

    fn segment() -> GradedPoset {
        let mut b = PosetBuilder::new();
        b.element("v1", 1).element("v2", 1).element("e", 2);
        b.cover("e", "v1").cover("e", "v2");
        b.build().unwrap()
    }

    #[test]
    fn segment_links_and_dual() {
        let p = segment();
        let f = SheafData::structure(&p);
        let eps = incidence_function(&p, Field::Rational).unwrap();
        let e = p.index_of("e").unwrap();
        let v = p.index_of("v1").unwrap();
        assert_eq!(f.link_quotient_homology(&eps, e, Field::Rational), vec![1]);
        assert_eq!(
            f.link_quotient_homology(&eps, v, Field::Rational),
            vec![0, 0]
        );
        assert!(f.cm_check(&eps, 2, Field::Rational).holds);
        let dual = f.dual_stalk_dims(&eps, 2, Field::Rational);
        assert_eq!(dual[0], 0);
        assert_eq!(dual[v], 0);
        assert_eq!(dual[e], 1);
    }

    #[test]
    fn polygon_dual_is_itself_and_oracle_holds() {
        let p = ngon(3);
        let f = SheafData::structure(&p);
        let eps = incidence_function(&p, Field::Rational).unwrap();
        assert!(f.chain_complex(&eps).squares_to_zero());
        assert_eq!(
            f.dual_stalk_dims(&eps, 2, Field::Rational),
            vec![1; p.len()]
        );
        let blocks = karu_phi_oracle(&f, &eps, Field::Rational).unwrap();
        assert_eq!(blocks.len(), 1);
        assert_eq!(blocks[0].expected, CdPoly::parse("1").unwrap());
        assert!(blocks[0].agrees());
    }

    #[test]
    fn order_ideal_sheaves() {
        let p = ngon(4);
        let e0 = p.index_of("e0").unwrap();
        let mut q = FixedBitSet::with_capacity(p.len());
        q.insert(e0);
        for &v in p.lower_covers(e0) {
            q.insert(v);
        }
        let f = SheafData::from_order_ideal(&p, &q).unwrap();
        assert_eq!(f.module_flag_f().unwrap().entries(), &[1, 2, 1, 2]);
        let mut bad = FixedBitSet::with_capacity(p.len());
        bad.insert(e0);
        assert!(matches!(
            SheafData::from_order_ideal(&p, &bad),
            Err(Error::NotAnOrderIdeal(_))
        ));
    }

    #[test]
    fn stalks_formula_for_triangle() {
        let p = ngon(3);
        let f = SheafData::structure(&p);
        let mut cds = HashMap::new();
        for x in p.proper_elements() {
            let phi = if p.rank_of(x) == 1 { "1" } else { "c" };
            cds.insert(x, CdPoly::parse(phi).unwrap());
        }
        let psi = f.ab_index_via_stalks(&cds).unwrap();
        assert_eq!(psi, CdPoly::parse("cc + d").unwrap().expand());
        cds.remove(&1);
        assert!(f.ab_index_via_stalks(&cds).is_err());
    }

    #[test]
    fn non_functorial_data_is_rejected() {
        let p = segment();
        let e = p.index_of("e").unwrap();
        let mut res: Vec<Vec<Matrix>> = (0..p.len())
            .map(|x| p.lower_covers(x).iter().map(|_| vec![vec![1]]).collect())
            .collect();
        assert!(SheafData::new(p.clone(), vec![1; p.len()], res.clone()).is_ok());
        res[e][0] = vec![vec![2]];
        assert!(matches!(
            SheafData::new(p, vec![1; 4], res),
            Err(Error::NotFunctorial { .. })
        ));
    }
}

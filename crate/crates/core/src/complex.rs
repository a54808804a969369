//! Abstract simplicial complexes given by facets, and the order complex of a poset.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::homology::ChainComplexData;
use crate::poset::{GradedPoset, BOTTOM};

/// A simplicial complex on vertices `0..vertices.len()`. Faces are sorted index lists and
/// the complex always contains the empty face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertices: Vec<String>,
    facets: Vec<Vec<u32>>,
}

fn is_subset(a: &[u32], b: &[u32]) -> bool {
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j == b.len() || b[j] != x {
            return false;
        }
        j += 1;
    }
    true
}

impl SimplicialComplex {
    /// Builds a complex from possibly redundant facet lists; non-maximal faces are dropped.
    pub fn from_facets(vertices: Vec<String>, facets: Vec<Vec<u32>>) -> Result<Self> {
        let nv = vertices.len() as u32;
        let mut fs: Vec<Vec<u32>> = facets
            .into_iter()
            .map(|mut f| {
                f.sort_unstable();
                f.dedup();
                f
            })
            .collect();
        if let Some(&bad) = fs.iter().flatten().find(|&&v| v >= nv) {
            return Err(Error::ElementNotFound(format!("vertex #{bad}")));
        }
        fs.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        fs.dedup();
        let mut kept: Vec<Vec<u32>> = Vec::new();
        for f in fs {
            if !kept.iter().any(|k| k.len() > f.len() && is_subset(&f, k)) {
                kept.push(f);
            }
        }
        if kept.is_empty() {
            kept.push(Vec::new());
        }
        kept.sort();
        Ok(Self {
            vertices,
            facets: kept,
        })
    }

    /// Builds a complex from facets named by vertex labels.
    pub fn from_named_facets(facets: &[&[&str]]) -> Self {
        let mut index: HashMap<&str, u32> = HashMap::new();
        let mut vertices = Vec::new();
        let mut fs = Vec::new();
        for f in facets {
            let mut face = Vec::new();
            for &v in *f {
                let id = *index.entry(v).or_insert_with(|| {
                    vertices.push(v.to_string());
                    vertices.len() as u32 - 1
                });
                face.push(id);
            }
            fs.push(face);
        }
        Self::from_facets(vertices, fs).expect("indices are in range")
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Vec<u32>] {
        &self.facets
    }

    /// `max |F| − 1`; `−1` for `{∅}`.
    pub fn dim(&self) -> i64 {
        self.facets
            .iter()
            .map(|f| f.len() as i64)
            .max()
            .unwrap_or(0)
            - 1
    }

    pub fn is_pure(&self) -> bool {
        let d = self.facets[0].len();
        self.facets.iter().all(|f| f.len() == d)
    }

    /// Faces grouped by cardinality: entry `k` lists the faces with `k` vertices, sorted.
    pub fn faces_by_size(&self) -> Vec<Vec<Vec<u32>>> {
        let top = (self.dim() + 1) as usize;
        let mut sets: Vec<HashSet<Vec<u32>>> = vec![HashSet::new(); top + 1];
        for f in &self.facets {
            let k = f.len();
            for mask in 0u32..(1 << k) {
                let face: Vec<u32> = (0..k)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| f[i])
                    .collect();
                sets[face.len()].insert(face);
            }
        }
        sets.into_iter()
            .map(|s| {
                let mut v: Vec<Vec<u32>> = s.into_iter().collect();
                v.sort();
                v
            })
            .collect()
    }

    /// `(f_{−1}, f_0, …, f_{dim})`.
    pub fn f_vector(&self) -> Vec<i128> {
        self.faces_by_size()
            .iter()
            .map(|l| l.len() as i128)
            .collect()
    }

    pub fn contains_face(&self, face: &[u32]) -> bool {
        self.facets.iter().any(|f| is_subset(face, f))
    }

    /// `lk F = {G ∖ F : F ⊆ G ∈ Δ}` on the same vertex set.
    pub fn link(&self, face: &[u32]) -> Result<Self> {
        let mut face = face.to_vec();
        face.sort_unstable();
        let fs: Vec<Vec<u32>> = self
            .facets
            .iter()
            .filter(|g| is_subset(&face, g))
            .map(|g| {
                g.iter()
                    .copied()
                    .filter(|v| face.binary_search(v).is_err())
                    .collect()
            })
            .collect();
        if fs.is_empty() {
            return Err(Error::ElementNotFound(format!("face {face:?}")));
        }
        Ok(Self {
            vertices: self.vertices.clone(),
            facets: {
                let mut fs = fs;
                fs.sort();
                fs
            },
        })
    }

    pub fn face_names(&self, face: &[u32]) -> Vec<String> {
        face.iter()
            .map(|&v| self.vertices[v as usize].clone())
            .collect()
    }

    /// The augmented oriented simplicial chain complex; `C_{k−1}` is spanned by `k`-vertex faces.
    pub fn chain_complex(&self) -> ChainComplexData {
        let faces = self.faces_by_size();
        let dims: Vec<usize> = faces.iter().map(Vec::len).collect();
        let mut boundaries = vec![Vec::new()];
        for k in 1..faces.len() {
            let index: HashMap<&[u32], usize> = faces[k - 1]
                .iter()
                .enumerate()
                .map(|(i, f)| (f.as_slice(), i))
                .collect();
            let cols = faces[k]
                .iter()
                .map(|f| {
                    let mut col: Vec<(usize, i64)> = (0..f.len())
                        .map(|i| {
                            let mut g = f.clone();
                            g.remove(i);
                            let sign = if i % 2 == 0 { 1 } else { -1 };
                            (index[g.as_slice()], sign)
                        })
                        .collect();
                    col.sort_unstable();
                    col
                })
                .collect();
            boundaries.push(cols);
        }
        ChainComplexData::new(dims, boundaries)
    }
}

/// The order complex: chains of `P ∖ {0̂}`. Vertex `i` is element `i + 1`.
pub fn order_complex(p: &GradedPoset) -> SimplicialComplex {
    let vertices: Vec<String> = p.proper_elements().map(|x| p.name(x).to_string()).collect();
    let mut facets = Vec::new();
    fn descend(p: &GradedPoset, x: usize, chain: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        chain.push(x as u32 - 1);
        if p.rank_of(x) == 1 {
            let mut f = chain.clone();
            f.sort_unstable();
            out.push(f);
        } else {
            for &y in p.lower_covers(x) {
                descend(p, y, chain, out);
            }
        }
        chain.pop();
    }
    for x in p.maximal_elements() {
        if x != BOTTOM {
            descend(p, x, &mut Vec::new(), &mut facets);
        }
    }
    if facets.is_empty() {
        facets.push(Vec::new());
    }
    facets.sort();
    SimplicialComplex { vertices, facets }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::PosetBuilder;

    fn segment() -> GradedPoset {
        let mut b = PosetBuilder::new();
        b.element("v1", 1).element("v2", 1).element("e", 2);
        b.cover("e", "v1").cover("e", "v2");
        b.build().unwrap()
    }

    #[test]
    fn redundant_facets_are_removed() {
        let c = SimplicialComplex::from_named_facets(&[&["a", "b"], &["a"], &["b", "c"]]);
        assert_eq!(c.facets().len(), 2);
        assert_eq!(c.dim(), 1);
        assert_eq!(c.f_vector(), vec![1, 3, 2]);
    }

    #[test]
    fn order_complexes() {
        let mut b = PosetBuilder::new();
        b.element("p", 1).element("q", 1);
        let s0 = order_complex(&b.build().unwrap());
        assert_eq!(s0.facets(), &[vec![0], vec![1]]);
        let path = order_complex(&segment());
        assert_eq!(path.f_vector(), vec![1, 3, 2]);
        let empty = order_complex(&PosetBuilder::new().build().unwrap());
        assert_eq!(empty.dim(), -1);
        assert_eq!(empty.f_vector(), vec![1]);
    }

    #[test]
    fn links() {
        let c = SimplicialComplex::from_named_facets(&[&["a", "b", "c"], &["a", "c", "d"]]);
        let lk = c.link(&[0]).unwrap();
        assert_eq!(lk.f_vector(), vec![1, 3, 2]);
        let lk = c.link(&[0, 1, 2]).unwrap();
        assert_eq!(lk.dim(), -1);
        assert!(c.link(&[1, 3]).is_err());
    }
}

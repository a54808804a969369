//! Fixture posets and surgeries: polytope face posets, face posets of complexes,
//! barycentric subdivision, suspension, unzipping and the extremal generator.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use crate::complex::{order_complex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::poset::{GradedPoset, PosetBuilder, BOTTOM};

/// A named fixture.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Recipe {
    SZero,
    SimplexBoundary(usize),
    CrossPolytope(usize),
    NGon(usize),
    Boolean(usize),
    Cube(usize),
    PyramidWithFlap,
}

impl FromStr for Recipe {
    type Err = Error;

    /// `szero`, `simplex:<d>`, `cross:<d>`, `ngon:<m>`, `boolean:<d>`, `cube[:<d>]`, `flap`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, arg) = match s.split_once(':') {
            Some((k, a)) => (k, Some(a)),
            None => (s, None),
        };
        let num = |default: Option<usize>| -> Result<usize> {
            match arg {
                Some(a) => a
                    .trim()
                    .parse()
                    .map_err(|_| Error::BadParameter(format!("not a number: {a}"))),
                None => {
                    default.ok_or_else(|| Error::BadParameter(format!("{kind} needs a parameter")))
                }
            }
        };
        match kind.trim().to_ascii_lowercase().as_str() {
            "szero" | "s0" => Ok(Recipe::SZero),
            "simplex" => Ok(Recipe::SimplexBoundary(num(None)?)),
            "cross" | "octahedron" => Ok(Recipe::CrossPolytope(num(Some(3))?)),
            "ngon" => Ok(Recipe::NGon(num(None)?)),
            "boolean" => Ok(Recipe::Boolean(num(None)?)),
            "cube" => Ok(Recipe::Cube(num(Some(3))?)),
            "flap" | "pyramid-with-flap" => Ok(Recipe::PyramidWithFlap),
            other => Err(Error::BadParameter(format!("unknown fixture {other}"))),
        }
    }
}

impl fmt::Display for Recipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Recipe::SZero => write!(f, "szero"),
            Recipe::SimplexBoundary(d) => write!(f, "simplex:{d}"),
            Recipe::CrossPolytope(d) => write!(f, "cross:{d}"),
            Recipe::NGon(m) => write!(f, "ngon:{m}"),
            Recipe::Boolean(d) => write!(f, "boolean:{d}"),
            Recipe::Cube(d) => write!(f, "cube:{d}"),
            Recipe::PyramidWithFlap => write!(f, "flap"),
        }
    }
}

pub fn standard_poset(recipe: &Recipe) -> Result<GradedPoset> {
    match *recipe {
        Recipe::SZero => Ok(s_zero()),
        Recipe::SimplexBoundary(d) => simplex_boundary(d),
        Recipe::CrossPolytope(d) => cross_polytope(d),
        Recipe::NGon(m) => ngon(m),
        Recipe::Boolean(d) => boolean(d),
        Recipe::Cube(d) => cube(d),
        Recipe::PyramidWithFlap => Ok(pyramid_with_flap()),
    }
}

fn at_least(what: &str, value: usize, min: usize) -> Result<()> {
    if value < min {
        return Err(Error::BadParameter(format!(
            "{what} must be at least {min}, got {value}"
        )));
    }
    Ok(())
}

/// Two atoms.
pub fn s_zero() -> GradedPoset {
    let mut b = PosetBuilder::new();
    b.element("p", 1).element("q", 1);
    b.build().expect("valid fixture")
}

/// Faces of `Δ` ranked by cardinality; names join vertex labels with `+`.
pub fn face_poset(delta: &SimplicialComplex) -> GradedPoset {
    let faces = delta.faces_by_size();
    let name = |f: &[u32]| delta.face_names(f).join("+");
    let mut b = PosetBuilder::new();
    for (k, layer) in faces.iter().enumerate().skip(1) {
        for f in layer {
            b.element(name(f), k);
            if k >= 2 {
                for i in 0..k {
                    let mut g = f.clone();
                    g.remove(i);
                    b.cover(name(f), name(&g));
                }
            }
        }
    }
    b.build().expect("face posets of complexes are graded")
}

/// `P` subdivided: the face poset of its order complex.
pub fn barycentric(p: &GradedPoset) -> GradedPoset {
    face_poset(&order_complex(p))
}

fn vertex_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("v{i}")).collect()
}

/// Proper faces of the `d`-simplex (rank `d`).
pub fn simplex_boundary(d: usize) -> Result<GradedPoset> {
    at_least("d", d, 1)?;
    let facets = (0..=d as u32)
        .map(|skip| (0..=d as u32).filter(|&v| v != skip).collect())
        .collect();
    Ok(face_poset(&SimplicialComplex::from_facets(
        vertex_labels(d + 1),
        facets,
    )?))
}

/// All nonempty faces of the `d`-simplex including the top (rank `d + 1`).
pub fn boolean(d: usize) -> Result<GradedPoset> {
    at_least("d", d, 1)?;
    let facets = vec![(0..=d as u32).collect()];
    Ok(face_poset(&SimplicialComplex::from_facets(
        vertex_labels(d + 1),
        facets,
    )?))
}

/// Boundary of the `d`-dimensional cross-polytope (rank `d`).
pub fn cross_polytope(d: usize) -> Result<GradedPoset> {
    at_least("d", d, 1)?;
    if d > 12 {
        return Err(Error::BadParameter(format!(
            "cross-polytope dimension {d} is too large"
        )));
    }
    let vertices: Vec<String> = (1..=d)
        .flat_map(|i| [format!("p{i}"), format!("m{i}")])
        .collect();
    let facets = (0u32..1 << d)
        .map(|signs| (0..d as u32).map(|i| 2 * i + (signs >> i & 1)).collect())
        .collect();
    Ok(face_poset(&SimplicialComplex::from_facets(
        vertices, facets,
    )?))
}

/// Boundary of the `m`-gon: vertices `v1..vm`, edge `ei` joining `vi` and `v(i+1)`.
pub fn ngon(m: usize) -> Result<GradedPoset> {
    at_least("m", m, 2)?;
    let mut b = PosetBuilder::new();
    for i in 1..=m {
        b.element(format!("v{i}"), 1);
    }
    for i in 1..=m {
        b.element(format!("e{i}"), 2);
        b.cover(format!("e{i}"), format!("v{i}"));
        b.cover(format!("e{i}"), format!("v{}", i % m + 1));
    }
    b.build()
}

/// Boundary of the `d`-cube. Faces are words over `{0, 1, *}` other than `*…*`.
pub fn cube(d: usize) -> Result<GradedPoset> {
    at_least("d", d, 1)?;
    if d > 10 {
        return Err(Error::BadParameter(format!(
            "cube dimension {d} is too large"
        )));
    }
    let mut words: Vec<Vec<u8>> = vec![Vec::new()];
    for _ in 0..d {
        words = words
            .into_iter()
            .flat_map(|w| {
                [b'0', b'1', b'*'].map(|c| {
                    let mut w = w.clone();
                    w.push(c);
                    w
                })
            })
            .collect();
    }
    let name = |w: &[u8]| String::from_utf8(w.to_vec()).expect("ascii");
    let mut b = PosetBuilder::new();
    for w in words.iter().filter(|w| w.iter().any(|&c| c != b'*')) {
        let stars = w.iter().filter(|&&c| c == b'*').count();
        b.element(name(w), stars + 1);
        for i in (0..d).filter(|&i| w[i] == b'*') {
            for c in [b'0', b'1'] {
                let mut l = w.clone();
                l[i] = c;
                b.cover(name(w), name(&l));
            }
        }
    }
    b.build()
}

/// The boundary of a square pyramid with one extra triangle glued along a base edge.
pub fn pyramid_with_flap() -> GradedPoset {
    let mut b = PosetBuilder::new();
    for v in ["A", "1", "2", "3", "4", "5"] {
        b.element(v, 1);
    }
    let edges = [
        ("A", "1"),
        ("A", "2"),
        ("A", "3"),
        ("A", "4"),
        ("1", "2"),
        ("2", "3"),
        ("3", "4"),
        ("4", "1"),
        ("1", "5"),
        ("2", "5"),
    ];
    for (u, v) in edges {
        let e = format!("{u}{v}");
        b.element(e.clone(), 2);
        b.cover(e.clone(), u).cover(e, v);
    }
    let cells: [(&str, &[&str]); 6] = [
        ("A12", &["A1", "A2", "12"]),
        ("A23", &["A2", "A3", "23"]),
        ("A34", &["A3", "A4", "34"]),
        ("A41", &["A4", "A1", "41"]),
        ("1234", &["12", "23", "34", "41"]),
        ("125", &["12", "15", "25"]),
    ];
    for (c, bd) in cells {
        b.element(c, 3);
        for e in bd {
            b.cover(c, *e);
        }
    }
    b.build().expect("valid fixture")
}

fn fresh(taken: &HashSet<String>, base: &str) -> String {
    let mut name = base.to_string();
    while taken.contains(&name) {
        name.push('\'');
    }
    name
}

fn name_set(p: &GradedPoset) -> HashSet<String> {
    p.names().iter().cloned().collect()
}

/// `P ∪ {top}`, with the new element covering every maximal element.
pub fn with_top(p: &GradedPoset) -> Result<GradedPoset> {
    let top = fresh(&name_set(p), "top");
    let mut b = p.to_builder();
    b.element(top.clone(), p.rank() + 1);
    for x in p.maximal_elements() {
        if x != BOTTOM {
            b.cover(top.clone(), p.name(x).to_string());
        }
    }
    b.build()
}

fn suspend_named(q: &GradedPoset, eta: &str, eta_prime: &str) -> Result<GradedPoset> {
    let n = q.rank() + 1;
    let mut b = q.to_builder();
    b.element(eta, n).element(eta_prime, n);
    for &x in q.elements_of_rank(n - 1) {
        if x != BOTTOM {
            b.cover(eta, q.name(x).to_string());
            b.cover(eta_prime, q.name(x).to_string());
        }
    }
    b.build()
}

/// `ΣQ`: two new elements of rank `rank Q + 1` covering the top-rank elements of `Q`.
pub fn suspend(q: &GradedPoset) -> Result<GradedPoset> {
    let taken = name_set(q);
    let eta = fresh(&taken, "eta");
    let mut taken = taken;
    taken.insert(eta.clone());
    let eta_prime = fresh(&taken, "eta'");
    suspend_named(q, &eta, &eta_prime)
}

fn unzip_named(
    p: &GradedPoset,
    sigma: usize,
    tau: usize,
    s_new: &str,
    t_new: &str,
) -> Result<GradedPoset> {
    if sigma >= p.len() || tau >= p.len() {
        return Err(Error::ElementNotFound(format!("#{}", sigma.max(tau))));
    }
    if tau == BOTTOM {
        return Err(Error::TauIsBottom);
    }
    if !p.lower_covers(sigma).contains(&tau) {
        return Err(Error::NotACover {
            upper: p.name(sigma).to_string(),
            lower: p.name(tau).to_string(),
        });
    }
    let (s, t) = (p.name(sigma).to_string(), p.name(tau).to_string());
    let mut b = PosetBuilder::new();
    for x in p.proper_elements() {
        b.element(p.name(x).to_string(), p.rank_of(x));
    }
    b.element(s_new, p.rank_of(sigma))
        .element(t_new, p.rank_of(tau));
    for (u, l) in p.covers() {
        if (u, l) != (sigma, tau) {
            b.cover(p.name(u).to_string(), p.name(l).to_string());
        }
    }
    for &rho in p.upper_covers(sigma) {
        b.cover(p.name(rho).to_string(), s_new);
    }
    for &rho in p.lower_covers(tau) {
        if rho != BOTTOM {
            b.cover(t_new, p.name(rho).to_string());
        }
    }
    b.cover(s_new, t_new)
        .cover(s_new, t.clone())
        .cover(s, t_new);
    b.build()
}

/// `U(P; σ, τ)`. The new elements take the names of `σ` and `τ` with primes appended.
pub fn unzip(p: &GradedPoset, sigma: usize, tau: usize) -> Result<GradedPoset> {
    let mut taken = name_set(p);
    let s_new = fresh(&taken, &format!("{}'", p.name(sigma.min(p.len() - 1))));
    taken.insert(s_new.clone());
    let t_new = fresh(&taken, &format!("{}'", p.name(tau.min(p.len() - 1))));
    unzip_named(p, sigma, tau, &s_new, &t_new)
}

/// Builds a Gorenstein* poset of rank `alphas.len() + 1` whose sparse coefficients are the
/// products of the given `α_i`. Returns the poset and the distinguished top-rank element
/// whose boundary is the previous stage.
pub fn gorenstein_generator(alphas: &[u64]) -> Result<(GradedPoset, usize)> {
    if alphas.len() + 1 > crate::poset::MAX_RANK {
        return Err(Error::BadParameter(format!(
            "{} alphas exceed the rank limit",
            alphas.len()
        )));
    }
    let mut b = PosetBuilder::new();
    b.element("s0_0", 1).element("s0_1", 1);
    let mut p = b.build()?;
    let mut tau = "s0_0".to_string();
    for (i, &a) in alphas.iter().enumerate() {
        let stage = i + 1;
        let eta = format!("s{stage}_0");
        let eta_prime = format!("s{stage}_1");
        p = suspend_named(&p, &eta, &eta_prime)?;
        let (mut s, mut t) = (eta, tau.clone());
        for j in 1..=a {
            let s_new = format!("s{stage}_{}", 2 * j);
            let t_new = format!("s{stage}_{}", 2 * j + 1);
            p = unzip_named(&p, p.index_of(&s)?, p.index_of(&t)?, &s_new, &t_new)?;
            (s, t) = (s_new, t_new);
        }
        tau = eta_prime;
    }
    let top = p.index_of(&tau)?;
    Ok((p, top))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cdindex::cd_index;
    use crate::flag::flag_f;
    use crate::ncpoly::CdPoly;

    fn cd(s: &str) -> CdPoly {
        CdPoly::parse(s).unwrap()
    }

    #[test]
    fn small_fixtures() {
        assert_eq!(cd_index(&s_zero()).unwrap(), cd("c"));
        assert_eq!(cd_index(&ngon(5).unwrap()).unwrap(), cd("cc + 3*d"));
        assert_eq!(
            flag_f(&simplex_boundary(2).unwrap()).unwrap(),
            flag_f(&ngon(3).unwrap()).unwrap()
        );
        let oct = cross_polytope(3).unwrap();
        assert_eq!(flag_f(&oct).unwrap().aggregate(), vec![1, 26, 72, 48]);
        assert_eq!(oct.elements_of_rank(3).len(), 8);
        let c3 = cube(3).unwrap();
        assert_eq!([1, 2, 3].map(|r| c3.elements_of_rank(r).len()), [8, 12, 6]);
        assert_eq!(boolean(2).unwrap().rank(), 3);
    }

    #[test]
    fn recipes_round_trip() {
        for s in [
            "szero",
            "simplex:3",
            "cross:2",
            "ngon:7",
            "boolean:2",
            "cube:2",
            "flap",
        ] {
            let r: Recipe = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
        }
        assert!(matches!(
            "ngon:x".parse::<Recipe>(),
            Err(Error::BadParameter(_))
        ));
        assert!(matches!(
            standard_poset(&Recipe::NGon(1)),
            Err(Error::BadParameter(_))
        ));
    }

    #[test]
    fn flap_flag_vector() {
        let f = flag_f(&pyramid_with_flap()).unwrap();
        assert_eq!(f.entries(), &[1, 6, 10, 20, 6, 19, 19, 38]);
    }

    #[test]
    fn suspension_multiplies_by_c() {
        assert_eq!(cd_index(&suspend(&s_zero()).unwrap()).unwrap(), cd("cc"));
        let sq = suspend(&ngon(4).unwrap()).unwrap();
        assert_eq!(cd_index(&sq).unwrap(), cd("ccc + 2*dc"));
    }

    #[test]
    fn unzip_square_gives_pentagon() {
        let sq = ngon(4).unwrap();
        let u = unzip(&sq, sq.index_of("e1").unwrap(), sq.index_of("v1").unwrap()).unwrap();
        assert_eq!(cd_index(&u).unwrap(), cd("cc + 3*d"));
        assert!(u.index_of("e1'").is_ok() && u.index_of("v1'").is_ok());
        assert!(matches!(
            unzip(&sq, sq.index_of("e1").unwrap(), sq.index_of("v3").unwrap()),
            Err(Error::NotACover { .. })
        ));
        assert!(matches!(
            unzip(&sq, sq.index_of("v1").unwrap(), BOTTOM),
            Err(Error::TauIsBottom)
        ));
    }

    #[test]
    fn generator_examples() {
        let (p, _) = gorenstein_generator(&[3]).unwrap();
        assert_eq!(cd_index(&p).unwrap(), cd("cc + 3*d"));
        let (p, top) = gorenstein_generator(&[1, 2, 1]).unwrap();
        assert_eq!(p.rank(), 4);
        assert_eq!(cd_index(&p).unwrap(), cd("cccc + dcc + 2*cdc + ccd + dd"));
        assert_eq!(p.name(top), "s3_1");
        let (p, _) = gorenstein_generator(&[0, 0]).unwrap();
        assert_eq!(cd_index(&p).unwrap(), cd("ccc"));
    }

    #[test]
    fn barycentric_segment() {
        let mut b = PosetBuilder::new();
        b.element("a", 1).element("b", 1).element("e", 2);
        b.cover("e", "a").cover("e", "b");
        let sd = barycentric(&b.build().unwrap());
        assert_eq!(sd.elements_of_rank(1).len(), 3);
        assert_eq!(sd.elements_of_rank(2).len(), 2);
    }
}

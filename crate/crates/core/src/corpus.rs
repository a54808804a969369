//! Built-in fixture collections.

use crate::complex::SimplicialComplex;
use crate::constructions::{
    barycentric, boolean, cross_polytope, cube, face_poset, gorenstein_generator, ngon,
    pyramid_with_flap, s_zero, simplex_boundary, with_top,
};
use crate::error::Result;
use crate::poset::GradedPoset;

pub type Named = (String, GradedPoset);

fn gen(alphas: &[u64]) -> Result<Named> {
    let label = alphas
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(",");
    Ok((format!("gen:{label}"), gorenstein_generator(alphas)?.0))
}

fn complex(name: &str, facets: &[&[&str]]) -> Result<Named> {
    Ok((
        name.to_string(),
        face_poset(&SimplicialComplex::from_named_facets(facets)),
    ))
}

fn named(name: &str, p: Result<GradedPoset>) -> Result<Named> {
    Ok((name.to_string(), p?))
}

/// Rank-`n` fixtures for `n = 2, 3, 4`, mixing spheres, balls and the flap family.
pub fn span_corpus(n: usize) -> Result<Vec<Named>> {
    match n {
        2 => vec![
            named("ngon:3", ngon(3)),
            named("ngon:4", ngon(4)),
            named("ngon:5", ngon(5)),
            named("boolean:1", boolean(1)),
            named("path:2", boolean(1).map(|p| barycentric(&p))),
        ],
        3 => vec![
            named("simplex:3", simplex_boundary(3)),
            named("cube:3", cube(3)),
            named("cross:3", cross_polytope(3)),
            Ok(("flap".to_string(), pyramid_with_flap())),
            gen(&[1, 1]),
            gen(&[2, 0]),
            named("boolean:2", boolean(2)),
            named("ball:ngon:4", ngon(4).and_then(|p| with_top(&p))),
            named("ball:ngon:5", ngon(5).and_then(|p| with_top(&p))),
            named("bary:boolean:2", boolean(2).map(|p| barycentric(&p))),
        ],
        4 => vec![
            named("simplex:4", simplex_boundary(4)),
            named("cross:4", cross_polytope(4)),
            named("cube:4", cube(4)),
            gen(&[1, 1, 1]),
            gen(&[2, 0, 2]),
            gen(&[0, 1, 0]),
            named("boolean:3", boolean(3)),
            named("ball:cube:3", cube(3).and_then(|p| with_top(&p))),
            named("ball:cross:3", cross_polytope(3).and_then(|p| with_top(&p))),
            named("bary:boolean:3", boolean(3).map(|p| barycentric(&p))),
            complex(
                "tets:1234,1235",
                &[&["1", "2", "3", "4"], &["1", "2", "3", "5"]],
            ),
            complex(
                "tet+flap:1234,125",
                &[&["1", "2", "3", "4"], &["1", "2", "5"]],
            ),
        ],
        _ => Vec::new(),
    }
    .into_iter()
    .collect()
}

/// The reconstruction corpus: polytopes up to rank 4, generator outputs up to rank 5,
/// balls, the flap and barycentric subdivisions.
pub fn standard_corpus() -> Result<Vec<Named>> {
    let mut out = vec![("szero".to_string(), s_zero())];
    for n in 2..=4 {
        out.extend(span_corpus(n)?);
    }
    out.extend([
        named("ngon:6", ngon(6))?,
        named("simplex:2", simplex_boundary(2))?,
        gen(&[3])?,
        gen(&[0])?,
        gen(&[1, 2, 1])?,
        gen(&[1, 1, 1, 1])?,
        gen(&[2, 1, 0, 1])?,
        gen(&[0, 0, 0, 0])?,
        named("bary:ngon:3", ngon(3).map(|p| barycentric(&p)))?,
        named("bary:cube:3", cube(3).map(|p| barycentric(&p)))?,
        named("bary:flap", Ok(barycentric(&pyramid_with_flap())))?,
    ]);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::{a_expression_span_rank, fibonacci_plus_two};

    #[test]
    fn span_ranks_reach_fibonacci() {
        for n in 2..=4 {
            let posets: Vec<GradedPoset> = span_corpus(n)
                .unwrap()
                .into_iter()
                .map(|(_, p)| p)
                .collect();
            assert_eq!(
                a_expression_span_rank(&posets, n).unwrap(),
                fibonacci_plus_two(n),
                "rank {n}"
            );
        }
    }

    #[test]
    fn standard_corpus_is_large() {
        assert!(standard_corpus().unwrap().len() >= 30);
    }
}

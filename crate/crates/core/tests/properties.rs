use cdindex::cdindex::{kappa_to_set, kappa_to_word};
use cdindex::complex::{order_complex, SimplicialComplex};
use cdindex::constructions::face_poset;
use cdindex::flag::{flag_f, FlagVector, Flavor};
use cdindex::homology::{incidence_function, poset_chain_complex, reduced_homology_ranks};
use cdindex::linalg::Field;
use cdindex::ncpoly::{CdPoly, CdWord};
use proptest::prelude::*;

fn flag_vector() -> impl Strategy<Value = FlagVector> {
    (0usize..=6).prop_flat_map(|n| {
        prop::collection::vec(-1000i128..1000, 1 << n)
            .prop_map(move |e| FlagVector::new(n, Flavor::F, e))
    })
}

fn cd_poly(degree: usize) -> impl Strategy<Value = CdPoly> {
    let words = CdWord::all_of_degree(degree);
    prop::collection::vec(-4i128..=4, words.len()).prop_map(move |cs| {
        let mut p = CdPoly::zero(degree);
        for (w, c) in words.iter().zip(cs) {
            p.add_term(*w, c);
        }
        p
    })
}

fn complex() -> impl Strategy<Value = SimplicialComplex> {
    prop::collection::vec(prop::collection::btree_set(0u32..6, 1..=4), 1..6).prop_map(|facets| {
        let vertices = (0..6).map(|i| format!("v{i}")).collect();
        let facets = facets
            .into_iter()
            .map(|f| f.into_iter().collect())
            .collect();
        SimplicialComplex::from_facets(vertices, facets).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn flag_round_trip(f in flag_vector()) {
        let h = f.to_h().unwrap();
        prop_assert_eq!(h.to_f().unwrap(), f.clone());
        prop_assert_eq!(FlagVector::from_ab_index(&h.ab_index(), Flavor::H), h);
    }

    #[test]
    fn expand_is_multiplicative(
        (x, y) in (0usize..5, 0usize..5).prop_flat_map(|(m, n)| (cd_poly(m), cd_poly(n)))
    ) {
        prop_assert_eq!(x.mul(&y).expand(), x.expand().mul(&y.expand()));
    }

    #[test]
    fn kappa_round_trip(n in 1usize..=8, pick in any::<prop::sample::Index>()) {
        let words = CdWord::all_of_degree(n);
        let w = pick.get(&words);
        let s = kappa_to_set(n, w).unwrap();
        prop_assert_eq!(&kappa_to_word(n, &s).unwrap(), w);
    }

    #[test]
    fn boundaries_square_to_zero(delta in complex()) {
        prop_assert!(delta.chain_complex().squares_to_zero());
        let p = face_poset(&delta);
        let eps = incidence_function(&p, Field::Rational).unwrap();
        prop_assert!(poset_chain_complex(&p, &eps).squares_to_zero());
    }

    #[test]
    fn engines_agree_on_homology(delta in complex()) {
        let p = face_poset(&delta);
        let eps = incidence_function(&p, Field::Rational).unwrap();
        let cells = poset_chain_complex(&p, &eps).homology_ranks(Field::Rational);
        prop_assert_eq!(&cells, &reduced_homology_ranks(&delta, Field::Rational));
        prop_assert_eq!(cells, reduced_homology_ranks(&order_complex(&p), Field::Rational));
    }

    #[test]
    fn face_poset_flag_f_counts_faces(delta in complex()) {
        let p = face_poset(&delta);
        let f = flag_f(&p).unwrap();
        let counts = delta.f_vector();
        for (i, &c) in counts.iter().enumerate().skip(1) {
            prop_assert_eq!(f.get(1 << (i - 1)), c);
        }
    }
}

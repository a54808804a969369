//! The fourteen acceptance criteria, one line each. Exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use cdindex::artinian::{lefschetz_profile, quotient_hilbert};
use cdindex::cdindex::{
    alpha, b_expression, cd_index, extended_from_b, kappa_to_set, kappa_to_word, sparse_sets,
};
use cdindex::complex::order_complex;
use cdindex::constructions::{
    cross_polytope, cube, gorenstein_generator, ngon, pyramid_with_flap, simplex_boundary, unzip,
};
use cdindex::corpus::{span_corpus, standard_corpus, Named};
use cdindex::flag::{flag_f, FlagVector, Flavor};
use cdindex::homology::{
    gorenstein_star, incidence_function, poset_chain_complex, reduced_homology_ranks, reisner_cm,
};
use cdindex::linalg::Field;
use cdindex::ncpoly::{AbPoly, CdPoly, CdWord, Word};
use cdindex::poset::{GradedPoset, SubposetKind, BOTTOM};
use cdindex::sheaf::{karu_phi_oracle, SheafData};
use cdindex::verify::{
    a_expression_span_rank, bounds_scan, fibonacci_plus_two, lemma26_ab_index,
    unimodality_violation, Analysis, Check, Status, VerifyOptions,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

const Q: Field = Field::Rational;
const FP: Field = Field::Prime(32003);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn psi(p: &GradedPoset) -> AbPoly {
    flag_f(p).unwrap().to_h().unwrap().ab_index()
}

fn cd(s: &str) -> CdPoly {
    CdPoly::parse(s).unwrap()
}

struct Corpus {
    members: Vec<Named>,
    cm: Vec<bool>,
    gorenstein: Vec<bool>,
}

impl Corpus {
    fn load() -> Self {
        let members = standard_corpus().unwrap();
        let cm = members
            .iter()
            .map(|(_, p)| reisner_cm(&order_complex(p), Q).holds)
            .collect();
        let gorenstein = members
            .iter()
            .map(|(_, p)| gorenstein_star(&order_complex(p), Q).holds)
            .collect();
        Self {
            members,
            cm,
            gorenstein,
        }
    }

    fn cm_members(&self) -> impl Iterator<Item = &Named> {
        self.members
            .iter()
            .zip(&self.cm)
            .filter(|(_, &c)| c)
            .map(|(m, _)| m)
    }

    fn gorenstein_members(&self) -> impl Iterator<Item = &Named> {
        self.members
            .iter()
            .zip(&self.gorenstein)
            .filter(|(_, &g)| g)
            .map(|(m, _)| m)
    }

    /// Members built from polytopes, simplicial complexes or subdivisions.
    fn polyhedral_cm(&self) -> impl Iterator<Item = &Named> {
        self.cm_members()
            .filter(|(name, _)| !name.starts_with("gen:") && name != "szero")
    }
}

fn flap_end_to_end() -> Outcome {
    let p = pyramid_with_flap();
    let f = flag_f(&p).unwrap();
    ensure(f.entries() == [1, 6, 10, 20, 6, 19, 19, 38], || {
        format!("flag f {:?}", f.entries())
    })?;
    let h = f.to_h().unwrap();
    ensure(h.entries() == [1, 5, 9, 5, 5, 8, 4, 1], || {
        format!("flag h {:?}", h.entries())
    })?;
    let ext = extended_from_b(&b_expression(&h.ab_index()).unwrap());
    ensure(
        ext.phi_d == cd("4*c") && ext.phi_a == cd("cc + 4*d") && ext.phi_b == cd("cc + 3*d"),
        || {
            format!(
                "extended index ({}, {}, {})",
                ext.phi_d, ext.phi_a, ext.phi_b
            )
        },
    )?;
    let delta = order_complex(&p);
    ensure(reisner_cm(&delta, Q).holds, || "not CM".into())?;
    ensure(!gorenstein_star(&delta, Q).holds, || {
        "unexpectedly Gorenstein*".into()
    })?;
    Ok("flag f, flag h, (4c, c^2+4d, c^2+3d), CM, not Gorenstein*".into())
}

fn reconstruction(c: &Corpus) -> Outcome {
    for (name, p) in &c.members {
        let psi = psi(p);
        let b = b_expression(&psi).map_err(|e| format!("{name}: {e}"))?;
        ensure(b.reconstruct() == psi, || format!("{name}: b-expression"))?;
        ensure(extended_from_b(&b).reconstruct() == psi, || {
            format!("{name}: extended index")
        })?;
    }
    Ok(format!("{} posets", c.members.len()))
}

fn nonnegativity(c: &Corpus) -> Outcome {
    let mut n = 0;
    for (name, p) in c.cm_members() {
        let ext = extended_from_b(&b_expression(&psi(p)).unwrap());
        ensure(ext.is_nonnegative(), || {
            format!("{name}: negative coefficient")
        })?;
        n += 1;
    }
    Ok(format!("{n} CM posets"))
}

fn unimodality(c: &Corpus) -> Outcome {
    let mut n = 0;
    for (name, p) in c.cm_members() {
        let h = flag_f(p).unwrap().to_h().unwrap().aggregate();
        if let Some(w) = unimodality_violation(&h) {
            return Err(format!("{name}: {w}"));
        }
        n += 1;
    }
    Ok(format!("{n} CM posets"))
}

fn karu_oracle(c: &Corpus) -> Outcome {
    let mut blocks = 0;
    for (name, p) in c.cm_members() {
        let eps = incidence_function(p, Q).map_err(|e| format!("{name}: {e}"))?;
        let res = karu_phi_oracle(&SheafData::structure(p), &eps, Q)
            .map_err(|e| format!("{name}: {e}"))?;
        if let Some(b) = res.iter().find(|b| !b.agrees()) {
            return Err(format!("{name}: block {} gives {}", b.k, b.quotient_psi));
        }
        blocks += res.len();
    }
    Ok(format!("{blocks} blocks"))
}

fn lemma26(c: &Corpus) -> Outcome {
    for (name, p) in &c.members {
        let via = lemma26_ab_index(p).map_err(|e| format!("{name}: {e}"))?;
        ensure(via == psi(p), || {
            format!("{name}: stalk formula gives {via}")
        })?;
    }
    Ok(format!("{} posets", c.members.len()))
}

fn duality(c: &Corpus) -> Outcome {
    let (mut sym, mut dual) = (0, 0);
    for ((name, p), &g) in c.members.iter().zip(&c.gorenstein) {
        let a = Analysis::new(p, VerifyOptions::default()).unwrap();
        if !g && !a.cm().holds {
            continue;
        }
        let r = a.run(Check::Duality);
        ensure(r.status == Status::Pass, || {
            format!("{name}: {:?}", r.witness)
        })?;
        if g {
            sym += 1;
        } else {
            dual += 1;
        }
    }
    Ok(format!("{sym} symmetric, {dual} via dual sheaf"))
}

fn unzipping() -> Outcome {
    let d = CdPoly::monomial(CdWord::d(), 1);
    let fixtures: Vec<GradedPoset> = vec![
        ngon(3).unwrap(),
        ngon(4).unwrap(),
        simplex_boundary(3).unwrap(),
        cube(3).unwrap(),
        cross_polytope(3).unwrap(),
        gorenstein_generator(&[1, 2]).unwrap().0,
        simplex_boundary(4).unwrap(),
    ];
    let mut count = 0;
    for p in &fixtures {
        // One cover per rank pair.
        let mut seen = std::collections::HashSet::new();
        for (s, t) in p.covers() {
            if t == BOTTOM || !seen.insert(p.rank_of(s)) {
                continue;
            }
            let u = unzip(p, s, t).unwrap();
            let lhs = cd_index(&u).unwrap();
            let boundary = cd_index(&p.subposet(SubposetKind::OpenInterval, t).unwrap()).unwrap();
            let link = cd_index(&p.subposet(SubposetKind::Link, s).unwrap()).unwrap();
            let rhs = cd_index(p).unwrap().add(&boundary.mul(&d).mul(&link));
            ensure(lhs == rhs, || {
                format!("U({}, {}): {lhs} vs {rhs}", p.name(s), p.name(t))
            })?;
            ensure(gorenstein_star(&order_complex(&u), Q).holds, || {
                format!("U({}, {}) is not Gorenstein*", p.name(s), p.name(t))
            })?;
            count += 1;
        }
    }
    ensure(count >= 10, || format!("only {count} instances"))?;
    Ok(format!("{count} instances"))
}

fn product(alphas: &[u64], s: &[usize]) -> i128 {
    s.iter().map(|&i| alphas[i - 1] as i128).product()
}

fn sharpness() -> Outcome {
    let cases: [&[u64]; 5] = [&[0], &[3], &[1, 2, 1], &[2, 0, 2], &[1, 1, 1, 1]];
    let mut sets = 0;
    for alphas in cases {
        let (p, top) = gorenstein_generator(alphas).unwrap();
        let n = p.rank();
        let phi = cd_index(&p).unwrap();
        for s in sparse_sets(n) {
            let a = alpha(&phi, &s).unwrap();
            ensure(a == product(alphas, &s), || {
                format!("{alphas:?}: alpha_{s:?} = {a}")
            })?;
            sets += 1;
        }
        let boundary = cd_index(&p.subposet(SubposetKind::OpenInterval, top).unwrap()).unwrap();
        for s in sparse_sets(n - 1) {
            let a = alpha(&boundary, &s).unwrap();
            ensure(a == product(alphas, &s), || {
                format!("{alphas:?}: boundary alpha_{s:?} = {a}")
            })?;
        }
    }
    Ok(format!("{sets} sets over 5 generator inputs"))
}

fn upper_bounds(c: &Corpus) -> Outcome {
    let (mut n, mut strict) = (0, 0);
    for (name, p) in c.gorenstein_members() {
        let phi = cd_index(p).map_err(|e| format!("{name}: {e}"))?;
        let (violation, equal, total) = bounds_scan(&phi).unwrap();
        if let Some(w) = violation {
            return Err(format!("{name}: {w}"));
        }
        if name.starts_with("gen:") {
            ensure(equal == total, || {
                format!("{name}: equality on {equal} of {total}")
            })?;
        } else if equal < total {
            strict += 1;
        }
        n += 1;
    }
    Ok(format!(
        "{n} Gorenstein* posets, generator outputs tight, {strict} others strict somewhere"
    ))
}

fn trimmed_h(p: &GradedPoset) -> Vec<usize> {
    let mut h = flag_f(p).unwrap().to_h().unwrap().aggregate();
    while h.len() > 1 && h.last() == Some(&0) {
        h.pop();
    }
    h.into_iter().map(|v| v as usize).collect()
}

fn artinian(c: &Corpus) -> Outcome {
    let seeds = [11u64, 22, 33];
    let (mut fixtures, mut wlp, mut findings) = (0, 0, Vec::new());
    for (name, p) in c.cm_members().filter(|(_, p)| p.rank() <= 4) {
        let delta = order_complex(p);
        let h = trimmed_h(p);
        let agree = seeds
            .iter()
            .filter(|&&s| quotient_hilbert(&delta, p.rank(), FP, s).is_ok_and(|q| q == h))
            .count();
        if agree < seeds.len() {
            findings.push(format!(
                "{name}: Hilbert function matched on {agree} of 3 seeds"
            ));
        }
        ensure(agree >= 2, || {
            format!("{name}: Hilbert function matched on {agree} of 3 seeds")
        })?;
        fixtures += 1;
        let polyhedral = !name.starts_with("gen:") && name != "szero";
        if polyhedral && p.rank() % 2 == 0 {
            let ok = seeds
                .iter()
                .filter(|&&s| {
                    lefschetz_profile(&delta, s, s + 1000, FP)
                        .is_ok_and(|prof| prof.weak_lefschetz())
                })
                .count();
            if ok < seeds.len() {
                findings.push(format!("{name}: WLP on {ok} of 3 seeds"));
            }
            ensure(ok >= 2, || {
                format!("{name}: WLP on {ok} of 3 seeds {seeds:?}")
            })?;
            wlp += 1;
        }
    }
    let mut msg = format!("{fixtures} Hilbert functions, {wlp} even-rank Lefschetz profiles");
    if !findings.is_empty() {
        msg.push_str(&format!("; findings: {}", findings.join("; ")));
    }
    Ok(msg)
}

fn kruskal_katona(c: &Corpus) -> Outcome {
    let mut n = 0;
    for (name, p) in c.polyhedral_cm() {
        let r = Analysis::new(p, VerifyOptions::default())
            .unwrap()
            .run(Check::Kk);
        ensure(r.status == Status::Pass, || {
            format!("{name}: {:?}", r.witness)
        })?;
        n += 1;
    }
    Ok(format!("{n} polyhedral CM posets"))
}

fn span_rank() -> Outcome {
    let mut parts = Vec::new();
    for n in 2..=4 {
        let ps: Vec<GradedPoset> = span_corpus(n)
            .unwrap()
            .into_iter()
            .map(|(_, p)| p)
            .collect();
        let r = a_expression_span_rank(&ps, n).unwrap();
        ensure(r == fibonacci_plus_two(n), || format!("rank {n}: span {r}"))?;
        parts.push(format!("n={n}: {r}"));
    }
    Ok(parts.join(", "))
}

fn random_cd(rng: &mut ChaCha8Rng, degree: usize) -> CdPoly {
    let mut p = CdPoly::zero(degree);
    for w in CdWord::all_of_degree(degree) {
        if rng.gen_bool(0.6) {
            p.add_term(w, rng.gen_range(-5..=5));
        }
    }
    p
}

fn properties(c: &Corpus) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for (name, p) in &c.members {
        let f = flag_f(p).unwrap();
        ensure(f.to_h().unwrap().to_f().unwrap() == f, || {
            format!("{name}: flag round trip")
        })?;
        let back = FlagVector::from_ab_index(&f.to_h().unwrap().ab_index(), Flavor::H)
            .to_f()
            .unwrap();
        ensure(back == f, || format!("{name}: ab-index round trip"))?;
    }
    for n in 0..=6 {
        for m in 0u64..1 << n {
            let h: Vec<i128> = (0..1u64 << n).map(|x| if x == m { 1 } else { 0 }).collect();
            let v = FlagVector::new(n, Flavor::H, h);
            ensure(v.to_f().unwrap().to_h().unwrap() == v, || {
                format!("unit vector {m} of rank {n}")
            })?;
        }
    }
    let mut products = 0;
    for _ in 0..200 {
        let (d1, d2) = (rng.gen_range(0..5), rng.gen_range(0..5));
        let (x, y) = (random_cd(&mut rng, d1), random_cd(&mut rng, d2));
        ensure(x.mul(&y).expand() == x.expand().mul(&y.expand()), || {
            format!("expand({x} * {y})")
        })?;
        products += 1;
    }
    let mut words = 0;
    for n in 1..=8 {
        for w in CdWord::all_of_degree(n) {
            let s = kappa_to_set(n, &w).unwrap();
            ensure(kappa_to_word(n, &s).unwrap() == w, || {
                format!("kappa round trip at {}", w.to_word_string())
            })?;
            words += 1;
        }
    }
    let mut complexes = 0;
    for (name, p) in &c.members {
        let delta = order_complex(p);
        ensure(delta.chain_complex().squares_to_zero(), || {
            format!("{name}: simplicial boundary")
        })?;
        if let Ok(eps) = incidence_function(p, Q) {
            let cc = poset_chain_complex(p, &eps);
            ensure(cc.squares_to_zero(), || {
                format!("{name}: cellular boundary")
            })?;
            for field in [Q, FP] {
                let cells = cc.homology_ranks(field);
                let simp = reduced_homology_ranks(&delta, field);
                ensure(cells == simp, || {
                    format!("{name}: homology {cells:?} vs {simp:?} over {field}")
                })?;
            }
            complexes += 1;
        }
    }
    Ok(format!(
        "{products} products, {words} kappa words, {complexes} cross-engine homology comparisons"
    ))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let corpus = Corpus::load();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("flap end-to-end", Box::new(flap_end_to_end)),
        (
            "reconstruction identities",
            Box::new(|| reconstruction(&corpus)),
        ),
        (
            "extended index nonnegativity",
            Box::new(|| nonnegativity(&corpus)),
        ),
        ("h-vector unimodality", Box::new(|| unimodality(&corpus))),
        (
            "dual sheaf skeleton oracle",
            Box::new(|| karu_oracle(&corpus)),
        ),
        ("stalk formula oracle", Box::new(|| lemma26(&corpus))),
        ("duality", Box::new(|| duality(&corpus))),
        ("unzipping", Box::new(unzipping)),
        ("generator sharpness", Box::new(sharpness)),
        ("upper bounds", Box::new(|| upper_bounds(&corpus))),
        ("Artinian reduction", Box::new(|| artinian(&corpus))),
        ("Kruskal-Katona", Box::new(|| kruskal_katona(&corpus))),
        ("a-expression span rank", Box::new(span_rank)),
        ("property suites", Box::new(|| properties(&corpus))),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(run))
            .unwrap_or_else(|e| Err(format!("panicked: {:?}", e.downcast_ref::<String>())));
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS {name} ({detail}) [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {detail} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed in {:.1}s",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

//! The verification suite: per-poset artifacts, the check catalogue and the report format.

use std::cell::OnceCell;
use std::collections::HashMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::artinian::{kruskal_katona_check, lefschetz_profile};
use crate::cdindex::{
    alpha, alpha_table, b_expression, cd_index, extended_from_b, sparse_sets, swap_ab, to_cd,
    AlphaEntry, BExpression, ExtendedCdIndex,
};
use crate::complex::{order_complex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::flag::{flag_f, rank_statistics, weighted_flag_f, FlagVector, RankStatistics};
use crate::homology::{
    gorenstein_star, incidence_function, quasi_cw_check, reduced_homology_ranks, reisner_cm,
    IncidenceFunction, Verdict,
};
use crate::linalg::Field;
use crate::ncpoly::{AbPoly, CdPoly};
use crate::poset::{GradedPoset, SubposetKind};
use crate::sheaf::{karu_phi_oracle, SheafData};

/// Prime used by the Artinian checks when the report field is `Q`.
pub const DEFAULT_PRIME: u64 = 32003;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Check {
    Euler,
    Cm,
    Gorenstein,
    QuasiCw,
    Nonneg,
    Unimodal,
    Duality,
    Bounds,
    KaruOracle,
    Lemma26Oracle,
    Corollary74,
    Conjecture84,
    Lefschetz,
    Kk,
    FvecUnimodal,
}

impl Check {
    pub const ALL: [Check; 15] = [
        Check::Euler,
        Check::Cm,
        Check::Gorenstein,
        Check::QuasiCw,
        Check::Nonneg,
        Check::Unimodal,
        Check::Duality,
        Check::Bounds,
        Check::KaruOracle,
        Check::Lemma26Oracle,
        Check::Corollary74,
        Check::Conjecture84,
        Check::Lefschetz,
        Check::Kk,
        Check::FvecUnimodal,
    ];

    /// Everything except the exploratory `fvec-unimodal`.
    pub fn default_set() -> Vec<Check> {
        Self::ALL
            .iter()
            .copied()
            .filter(|c| *c != Check::FvecUnimodal)
            .collect()
    }

    pub fn name(self) -> &'static str {
        match self {
            Check::Euler => "euler",
            Check::Cm => "cm",
            Check::Gorenstein => "gorenstein",
            Check::QuasiCw => "quasicw",
            Check::Nonneg => "nonneg",
            Check::Unimodal => "unimodal",
            Check::Duality => "duality",
            Check::Bounds => "bounds",
            Check::KaruOracle => "karu-oracle",
            Check::Lemma26Oracle => "lemma26-oracle",
            Check::Corollary74 => "corollary74",
            Check::Conjecture84 => "conjecture84",
            Check::Lefschetz => "lefschetz",
            Check::Kk => "kk",
            Check::FvecUnimodal => "fvec-unimodal",
        }
    }

    /// Parses a comma-separated list; `all` selects the default set.
    pub fn parse_list(s: &str) -> Result<Vec<Check>> {
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            if part == "all" {
                out.extend(Self::default_set());
            } else {
                out.push(part.parse()?);
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::BadParameter(format!("unknown check {s}")))
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    pub witness: Option<String>,
}

impl CheckResult {
    fn new(check: Check, status: Status, witness: impl Into<String>) -> Self {
        let witness = witness.into();
        Self {
            name: check.name().to_string(),
            status,
            witness: (!witness.is_empty()).then_some(witness),
        }
    }

    fn verdict(check: Check, holds: bool, witness: impl Into<String>) -> Self {
        Self::new(
            check,
            if holds { Status::Pass } else { Status::Fail },
            witness,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlagEntry {
    pub set: Vec<usize>,
    pub value: i128,
}

fn flag_entries(f: &FlagVector) -> Vec<FlagEntry> {
    f.pairs()
        .into_iter()
        .map(|(set, value)| FlagEntry { set, value })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ExtendedArtifact {
    pub phi_d: String,
    pub phi_a: String,
    pub phi_b: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Artifacts {
    pub rank: usize,
    pub flag_f: Vec<FlagEntry>,
    pub flag_h: Vec<FlagEntry>,
    pub psi: String,
    /// The cd-index, when `Ψ` is a cd-polynomial.
    pub cd_index: Option<String>,
    pub phi: Option<String>,
    pub upsilon: Option<String>,
    pub extended: Option<ExtendedArtifact>,
    pub alphas: Vec<AlphaEntry>,
    pub fvec: Vec<i128>,
    pub hvec: Vec<i128>,
    pub rank_statistics: RankStatistics,
    /// Reduced homology ranks of the order complex, `H̃_{−1}, H̃_0, …`.
    pub homology: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub poset: String,
    pub field: String,
    pub checks: Vec<CheckResult>,
    pub artifacts: Artifacts,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let a = &self.artifacts;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "poset {} (rank {}, field {})",
            self.poset, a.rank, self.field
        );
        let flag = |v: &[FlagEntry]| {
            v.iter()
                .map(|e| format!("{:?}={}", e.set, e.value))
                .collect::<Vec<_>>()
                .join(" ")
        };
        let _ = writeln!(out, "flag f: {}", flag(&a.flag_f));
        let _ = writeln!(out, "flag h: {}", flag(&a.flag_h));
        let _ = writeln!(out, "f-vector: {:?}", a.fvec);
        let _ = writeln!(out, "h-vector: {:?}", a.hvec);
        let _ = writeln!(out, "psi: {}", a.psi);
        if let Some(cd) = &a.cd_index {
            let _ = writeln!(out, "cd-index: {cd}");
        }
        if let (Some(phi), Some(ups)) = (&a.phi, &a.upsilon) {
            let _ = writeln!(out, "b-expression: phi = {phi}; upsilon = {ups}");
        }
        if let Some(e) = &a.extended {
            let _ = writeln!(
                out,
                "extended: phi_d = {}; phi_a = {}; phi_b = {}",
                e.phi_d, e.phi_a, e.phi_b
            );
        }
        if !a.alphas.is_empty() {
            let s: Vec<String> = a
                .alphas
                .iter()
                .map(|e| format!("{:?}={}", e.set, e.value))
                .collect();
            let _ = writeln!(out, "alpha: {}", s.join(" "));
        }
        let _ = writeln!(out, "homology of order complex: {:?}", a.homology);
        for c in &self.checks {
            match &c.witness {
                Some(w) => {
                    let _ = writeln!(out, "{:<15} {:<8} {}", c.name, c.status, w);
                }
                None => {
                    let _ = writeln!(out, "{:<15} {}", c.name, c.status);
                }
            }
        }
        out
    }

    pub fn status(&self, check: Check) -> Option<Status> {
        self.checks
            .iter()
            .find(|c| c.name == check.name())
            .map(|c| c.status)
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub field: Field,
    pub seed: u64,
    /// Maximum number of order ideals examined by `corollary74`.
    pub ideal_cap: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            field: Field::Rational,
            seed: 0,
            ideal_cap: 64,
        }
    }
}

/// Lazily computed invariants of one poset, shared by the checks.
pub struct Analysis<'a> {
    p: &'a GradedPoset,
    opts: VerifyOptions,
    flag_f: FlagVector,
    flag_h: FlagVector,
    psi: AbPoly,
    b: Option<BExpression>,
    ext: Option<ExtendedCdIndex>,
    delta: OnceCell<SimplicialComplex>,
    cm: OnceCell<Verdict>,
    gorenstein: OnceCell<Verdict>,
    quasi_cw: OnceCell<Verdict>,
    eps: OnceCell<Option<IncidenceFunction>>,
}

fn poly_terms<W: crate::ncpoly::Word>(
    p: &crate::ncpoly::Poly<W>,
) -> impl Iterator<Item = (String, i128)> + '_ {
    p.terms().map(|(w, &c)| (w.to_word_string(), c))
}

impl<'a> Analysis<'a> {
    pub fn new(p: &'a GradedPoset, opts: VerifyOptions) -> Result<Self> {
        let flag_f = flag_f(p)?;
        let flag_h = flag_f.to_h()?;
        let psi = flag_h.ab_index();
        let b = if p.rank() >= 1 {
            b_expression(&psi).ok()
        } else {
            None
        };
        let ext = b.as_ref().map(extended_from_b);
        Ok(Self {
            p,
            opts,
            flag_f,
            flag_h,
            psi,
            b,
            ext,
            delta: OnceCell::new(),
            cm: OnceCell::new(),
            gorenstein: OnceCell::new(),
            quasi_cw: OnceCell::new(),
            eps: OnceCell::new(),
        })
    }

    pub fn poset(&self) -> &GradedPoset {
        self.p
    }

    pub fn psi(&self) -> &AbPoly {
        &self.psi
    }

    pub fn b_expression(&self) -> Option<&BExpression> {
        self.b.as_ref()
    }

    pub fn extended(&self) -> Option<&ExtendedCdIndex> {
        self.ext.as_ref()
    }

    pub fn order_complex(&self) -> &SimplicialComplex {
        self.delta.get_or_init(|| order_complex(self.p))
    }

    pub fn cm(&self) -> &Verdict {
        self.cm
            .get_or_init(|| reisner_cm(self.order_complex(), self.opts.field))
    }

    pub fn gorenstein(&self) -> &Verdict {
        self.gorenstein
            .get_or_init(|| gorenstein_star(self.order_complex(), self.opts.field))
    }

    pub fn quasi_cw(&self) -> &Verdict {
        self.quasi_cw
            .get_or_init(|| quasi_cw_check(self.p, self.opts.field))
    }

    fn eps(&self) -> Option<&IncidenceFunction> {
        self.eps
            .get_or_init(|| incidence_function(self.p, self.opts.field).ok())
            .as_ref()
    }

    /// `(h_0, …, h_n)` of the order complex.
    pub fn hvec(&self) -> Vec<i128> {
        self.flag_h.aggregate()
    }

    pub fn artifacts(&self) -> Artifacts {
        let n = self.p.rank();
        Artifacts {
            rank: n,
            flag_f: flag_entries(&self.flag_f),
            flag_h: flag_entries(&self.flag_h),
            psi: self.psi.to_string(),
            cd_index: to_cd(&self.psi).ok().map(|c| c.to_string()),
            phi: self.b.as_ref().map(|b| b.phi.to_string()),
            upsilon: self.b.as_ref().map(|b| b.upsilon.to_string()),
            extended: self.ext.as_ref().map(|e| ExtendedArtifact {
                phi_d: e.phi_d.to_string(),
                phi_a: e.phi_a.to_string(),
                phi_b: e.phi_b.to_string(),
            }),
            alphas: self
                .b
                .as_ref()
                .map(|b| alpha_table(&b.phi))
                .unwrap_or_default(),
            fvec: self.flag_f.aggregate(),
            hvec: self.hvec(),
            rank_statistics: rank_statistics(self.p),
            homology: reduced_homology_ranks(self.order_complex(), self.opts.field),
        }
    }

    /// Returns the skip reason when a prerequisite fails.
    fn require(&self, needs: &[Check]) -> Option<String> {
        for &c in needs {
            let v = match c {
                Check::Cm => self.cm(),
                Check::QuasiCw => self.quasi_cw(),
                Check::Gorenstein => self.gorenstein(),
                _ => unreachable!("only certifications are prerequisites"),
            };
            if !v.holds {
                return Some(format!(
                    "requires {c}: {}",
                    v.witness.clone().unwrap_or_default()
                ));
            }
        }
        None
    }

    pub fn run(&self, check: Check) -> CheckResult {
        let needs: &[Check] = match check {
            Check::Nonneg | Check::Unimodal | Check::Bounds | Check::Corollary74 => {
                &[Check::Cm, Check::QuasiCw]
            }
            Check::KaruOracle | Check::Conjecture84 | Check::Lefschetz | Check::Kk => &[Check::Cm],
            Check::Lemma26Oracle => &[Check::QuasiCw],
            _ => &[],
        };
        if let Some(reason) = self.require(needs) {
            return CheckResult::new(check, Status::Skipped, reason);
        }
        if self.b.is_none()
            && matches!(
                check,
                Check::Nonneg
                    | Check::Bounds
                    | Check::Corollary74
                    | Check::Conjecture84
                    | Check::KaruOracle
            )
        {
            return CheckResult::new(check, Status::Skipped, "no b-expression");
        }
        match self.run_inner(check) {
            Ok(r) => r,
            Err(e) => CheckResult::new(check, Status::Fail, e.to_string()),
        }
    }

    fn run_inner(&self, check: Check) -> Result<CheckResult> {
        let n = self.p.rank();
        Ok(match check {
            Check::Euler => {
                let rg = rank_statistics(self.p).rank_gen;
                let alt: i128 = (0..=n)
                    .map(|i| if (n - i) % 2 == 0 { rg[i] } else { -rg[i] })
                    .sum();
                CheckResult::verdict(check, alt == 1, format!("sum (-1)^(n-i) f_i = {alt}"))
            }
            Check::Cm => verdict_result(check, self.cm()),
            Check::Gorenstein => verdict_result(check, self.gorenstein()),
            Check::QuasiCw => verdict_result(check, self.quasi_cw()),
            Check::Nonneg => {
                let e = self.ext.as_ref().expect("checked above");
                let neg = [
                    ("phi_d", &e.phi_d),
                    ("phi_a", &e.phi_a),
                    ("phi_b", &e.phi_b),
                ]
                .into_iter()
                .flat_map(|(name, p)| poly_terms(p).map(move |(w, c)| (name, w, c)))
                .find(|&(_, _, c)| c < 0);
                match neg {
                    Some((name, w, c)) => {
                        CheckResult::verdict(check, false, format!("{name} has {c}*{w}"))
                    }
                    None => CheckResult::verdict(check, true, ""),
                }
            }
            Check::Unimodal => {
                let h = self.hvec();
                match unimodality_violation(&h) {
                    Some(w) => CheckResult::verdict(check, false, w),
                    None => CheckResult::verdict(check, true, format!("h = {h:?}")),
                }
            }
            Check::Duality => self.duality(),
            Check::Bounds => {
                let phi = &self.b.as_ref().expect("checked above").phi;
                let (violation, equal, total) = bounds_scan(phi)?;
                match violation {
                    Some(w) => CheckResult::verdict(check, false, w),
                    None => CheckResult::verdict(
                        check,
                        true,
                        format!("equality on {equal} of {total} sets"),
                    ),
                }
            }
            Check::KaruOracle => {
                let Some(eps) = self.eps() else {
                    return Ok(CheckResult::new(
                        check,
                        Status::Skipped,
                        "no incidence function",
                    ));
                };
                let blocks = karu_phi_oracle(&SheafData::structure(self.p), eps, self.opts.field)?;
                match blocks.iter().find(|b| !b.agrees()) {
                    Some(b) => CheckResult::verdict(
                        check,
                        false,
                        format!(
                            "k={}: quotient {} vs expected {}",
                            b.k,
                            b.quotient_psi,
                            b.expected.expand()
                        ),
                    ),
                    None => {
                        CheckResult::verdict(check, true, format!("{} blocks agree", blocks.len()))
                    }
                }
            }
            Check::Lemma26Oracle => {
                let via = lemma26_ab_index(self.p)?;
                CheckResult::verdict(check, via == self.psi, format!("stalk formula gives {via}"))
            }
            Check::Corollary74 => self.corollary74()?,
            Check::Conjecture84 => {
                let phi = &self.b.as_ref().expect("checked above").phi;
                match conjecture84_violation(phi)? {
                    Some(w) => CheckResult::verdict(check, false, w),
                    None => CheckResult::verdict(check, true, ""),
                }
            }
            Check::Lefschetz => self.lefschetz()?,
            Check::Kk => {
                let h = self.hvec();
                let m = n / 2;
                let diff: Vec<i128> = (0..=m)
                    .map(|i| if i == 0 { h[0] } else { h[i] - h[i - 1] })
                    .collect();
                match kruskal_katona_check(&diff) {
                    Ok(ok) => {
                        CheckResult::verdict(check, ok, format!("difference vector {diff:?}"))
                    }
                    Err(Error::NegativeEntry(v)) => CheckResult::verdict(
                        check,
                        false,
                        format!("difference vector {diff:?} has entry {v}"),
                    ),
                    Err(e) => return Err(e),
                }
            }
            Check::FvecUnimodal => {
                let f = self.flag_f.aggregate();
                let ok = is_unimodal(&f);
                CheckResult::verdict(check, ok, format!("f = {f:?}"))
            }
        })
    }

    fn duality(&self) -> CheckResult {
        let check = Check::Duality;
        let swapped = swap_ab(&self.psi);
        if self.gorenstein().holds {
            return CheckResult::verdict(check, swapped == self.psi, "psi(a,b) vs psi(b,a)");
        }
        if let Some(reason) = self.require(&[Check::Cm]) {
            return CheckResult::new(check, Status::Skipped, reason);
        }
        let Some(eps) = self.eps() else {
            return CheckResult::new(check, Status::Skipped, "no incidence function");
        };
        let n = self.p.rank();
        let dual: Vec<i128> = SheafData::structure(self.p)
            .dual_stalk_dims(eps, n, self.opts.field)
            .into_iter()
            .map(|v| v as i128)
            .collect();
        let via_dual = weighted_flag_f(self.p, &dual)
            .and_then(|f| f.to_h())
            .map(|h| h.ab_index());
        match via_dual {
            Ok(d) => CheckResult::verdict(check, d == swapped, format!("dual sheaf gives {d}")),
            Err(e) => CheckResult::new(check, Status::Fail, e.to_string()),
        }
    }

    fn corollary74(&self) -> Result<CheckResult> {
        let check = Check::Corollary74;
        let ext_p = self.ext.as_ref().expect("checked above");
        let ideals = deletion_ideals(self.p, self.opts.ideal_cap);
        let field = self.opts.field;
        let results =
            crate::exec::par_map(&ideals, |(label, keep)| -> Result<Option<Option<String>>> {
                let q = self.p.order_ideal(keep)?;
                if q.rank() != self.p.rank() || !reisner_cm(&order_complex(&q), field).holds {
                    return Ok(None);
                }
                let psi_q = flag_f(&q)?.to_h()?.ab_index();
                let ext_q = extended_from_b(&b_expression(&psi_q)?);
                Ok(Some((!ext_q.le(ext_p)).then(|| {
                    format!("deleting {label} breaks the inequality")
                })))
            });
        let mut certified = 0;
        for r in results {
            if let Some(outcome) = r? {
                certified += 1;
                if let Some(w) = outcome {
                    return Ok(CheckResult::verdict(check, false, w));
                }
            }
        }
        Ok(CheckResult::verdict(
            check,
            true,
            format!("{certified} CM ideals of {} examined", ideals.len()),
        ))
    }

    fn lefschetz(&self) -> Result<CheckResult> {
        let check = Check::Lefschetz;
        let field = match self.opts.field {
            Field::Prime(p) => Field::Prime(p),
            Field::Rational => Field::Prime(DEFAULT_PRIME),
        };
        let mut h = self.hvec();
        while h.len() > 1 && h.last() == Some(&0) {
            h.pop();
        }
        let h: Vec<usize> = h.into_iter().map(|v| v as usize).collect();
        let delta = self.order_complex();
        let seeds: Vec<u64> = (0..3).map(|i| self.opts.seed.wrapping_add(i)).collect();
        let mut good = 0;
        let mut notes = Vec::new();
        let profiles = crate::exec::par_map(&seeds, |&s| {
            lefschetz_profile(delta, s, s ^ 0x5eed_5eed, field)
        });
        for (&s, prof) in seeds.iter().zip(profiles) {
            match prof {
                Ok(prof) => {
                    let ok = prof.hilbert == h && prof.meets_expectations();
                    good += ok as usize;
                    let bad: Vec<String> = prof
                        .single_steps
                        .iter()
                        .chain(&prof.powers)
                        .filter(|m| !m.meets_expectation())
                        .map(|m| {
                            format!(
                                "x w^{} from degree {} has rank {}",
                                m.power, m.source_degree, m.rank
                            )
                        })
                        .collect();
                    notes.push(format!(
                        "seed {s}: hilbert {:?}{}",
                        prof.hilbert,
                        if bad.is_empty() {
                            String::new()
                        } else {
                            format!(", {}", bad.join(", "))
                        }
                    ));
                }
                Err(e) => notes.push(format!("seed {s}: {e}")),
            }
        }
        Ok(CheckResult::verdict(check, good >= 2, notes.join("; ")))
    }

    /// Runs the given checks in catalogue order.
    pub fn report(&self, name: &str, checks: &[Check]) -> Report {
        let mut checks = checks.to_vec();
        checks.sort();
        checks.dedup();
        Report {
            poset: name.to_string(),
            field: self.opts.field.to_string(),
            checks: checks.into_iter().map(|c| self.run(c)).collect(),
            artifacts: self.artifacts(),
        }
    }
}

fn verdict_result(check: Check, v: &Verdict) -> CheckResult {
    CheckResult::verdict(check, v.holds, v.witness.clone().unwrap_or_default())
}

/// Computes the artifacts of a poset and runs `checks` on it.
pub fn verify(
    p: &GradedPoset,
    name: &str,
    checks: &[Check],
    opts: VerifyOptions,
) -> Result<Report> {
    Ok(Analysis::new(p, opts)?.report(name, checks))
}

/// The unimodality inequalities on `h = (h_0, …, h_d)`; returns the first violation.
pub fn unimodality_violation(h: &[i128]) -> Option<String> {
    let d = h.len() - 1;
    for k in 0..d {
        if 2 * k < d {
            if h[k] > h[d - 1 - k] {
                return Some(format!(
                    "h_{k} = {} > h_{} = {}",
                    h[k],
                    d - 1 - k,
                    h[d - 1 - k]
                ));
            }
            if h[d - k] > h[k + 1] {
                return Some(format!(
                    "h_{} = {} > h_{} = {}",
                    d - k,
                    h[d - k],
                    k + 1,
                    h[k + 1]
                ));
            }
        }
    }
    for k in 1..=d {
        if 2 * k <= d && h[k - 1] > h[k] {
            return Some(format!("h_{} = {} > h_{k} = {}", k - 1, h[k - 1], h[k]));
        }
    }
    for k in 0..d {
        if 2 * k >= d && h[k] < h[k + 1] {
            return Some(format!("h_{k} = {} < h_{} = {}", h[k], k + 1, h[k + 1]));
        }
    }
    None
}

pub fn is_unimodal(v: &[i128]) -> bool {
    let mut falling = false;
    for w in v.windows(2) {
        if w[1] < w[0] {
            falling = true;
        } else if w[1] > w[0] && falling {
            return false;
        }
    }
    true
}

/// Scans `α_S ≤ Π_{i∈S} α_i`; returns the first violation, the number of sets with equality
/// and the number of sets.
pub fn bounds_scan(phi: &CdPoly) -> Result<(Option<String>, usize, usize)> {
    let n = phi.degree();
    let singles: HashMap<usize, i128> = (1..n)
        .map(|i| Ok((i, alpha(phi, &[i])?)))
        .collect::<Result<_>>()?;
    let sets = sparse_sets(n);
    let mut equal = 0;
    for s in &sets {
        let a = alpha(phi, s)?;
        let bound = s
            .iter()
            .try_fold(1i128, |acc, i| acc.checked_mul(singles[i]))
            .ok_or(Error::Overflow("product of alphas"))?;
        if a > bound {
            return Ok((
                Some(format!("alpha_{s:?} = {a} > {bound}")),
                equal,
                sets.len(),
            ));
        }
        equal += (a == bound) as usize;
    }
    Ok((None, equal, sets.len()))
}

/// Scans `α_S ≤ α_{T₁}·α_{T₂}` over all splits of every `S ∈ A_n`.
pub fn conjecture84_violation(phi: &CdPoly) -> Result<Option<String>> {
    let n = phi.degree();
    for s in sparse_sets(n) {
        let a = alpha(phi, &s)?;
        for mask in 0u64..1 << s.len() {
            let (t1, t2): (Vec<usize>, Vec<usize>) = {
                let mut t1 = Vec::new();
                let mut t2 = Vec::new();
                for (j, &x) in s.iter().enumerate() {
                    if mask >> j & 1 == 1 {
                        t1.push(x);
                    } else {
                        t2.push(x);
                    }
                }
                (t1, t2)
            };
            let bound = alpha(phi, &t1)?
                .checked_mul(alpha(phi, &t2)?)
                .ok_or(Error::Overflow("product of alphas"))?;
            if a > bound {
                return Ok(Some(format!(
                    "alpha_{s:?} = {a} > alpha_{t1:?} * alpha_{t2:?} = {bound}"
                )));
            }
        }
    }
    Ok(None)
}

/// `Ψ` from stalk dimensions of the structure sheaf and the cd-indices of all `∂σ`.
pub fn lemma26_ab_index(p: &GradedPoset) -> Result<AbPoly> {
    let mut boundary = HashMap::new();
    for x in p.proper_elements() {
        boundary.insert(x, cd_index(&p.subposet(SubposetKind::OpenInterval, x)?)?);
    }
    SheafData::structure(p).ab_index_via_stalks(&boundary)
}

/// Order ideals obtained by deleting one or two maximal elements, at most `cap` of them.
pub fn deletion_ideals(p: &GradedPoset, cap: usize) -> Vec<(String, FixedBitSet)> {
    let maxima: Vec<usize> = p
        .maximal_elements()
        .into_iter()
        .filter(|&x| x != crate::poset::BOTTOM)
        .collect();
    let full = {
        let mut b = FixedBitSet::with_capacity(p.len());
        b.insert_range(..);
        b
    };
    let mut out = Vec::new();
    'outer: for (i, &x) in maxima.iter().enumerate() {
        for &y in std::iter::once(&x).chain(&maxima[i + 1..]) {
            if out.len() >= cap {
                break 'outer;
            }
            let mut keep = full.clone();
            keep.set(x, false);
            keep.set(y, false);
            let label = if x == y {
                p.name(x).to_string()
            } else {
                format!("{} and {}", p.name(x), p.name(y))
            };
            out.push((label, keep));
        }
    }
    out
}

/// Rank of the matrix of a-expression coefficient vectors `(Φ′ | Υ′)` of rank-`n` posets.
pub fn a_expression_span_rank(posets: &[GradedPoset], n: usize) -> Result<usize> {
    let top = crate::ncpoly::CdWord::all_of_degree(n);
    let low = crate::ncpoly::CdWord::all_of_degree(n.saturating_sub(1));
    let mut vecs = Vec::new();
    for p in posets.iter().filter(|p| p.rank() == n) {
        let a = crate::cdindex::a_expression(&flag_f(p)?.to_h()?.ab_index())?;
        let coeffs = top
            .iter()
            .map(|w| a.phi_prime.coeff(w))
            .chain(low.iter().map(|w| a.upsilon_prime.coeff(w)));
        let mut v = Vec::new();
        for (j, c) in coeffs.enumerate() {
            if c != 0 {
                v.push((
                    j,
                    i64::try_from(c).map_err(|_| Error::Overflow("coefficient"))?,
                ));
            }
        }
        vecs.push(v);
    }
    Ok(crate::linalg::rank(Field::Rational, &vecs))
}

/// `F_{n+2}` with `F_1 = F_2 = 1`.
pub fn fibonacci_plus_two(n: usize) -> usize {
    let (mut a, mut b) = (1usize, 1usize);
    for _ in 0..n {
        (a, b) = (b, a + b);
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{gorenstein_generator, ngon, pyramid_with_flap};

    #[test]
    fn flap_report() {
        let p = pyramid_with_flap();
        let r = verify(&p, "flap", &Check::default_set(), VerifyOptions::default()).unwrap();
        assert_eq!(r.status(Check::Euler), Some(Status::Pass));
        assert_eq!(r.status(Check::Cm), Some(Status::Pass));
        assert_eq!(r.status(Check::Gorenstein), Some(Status::Fail));
        for c in [
            Check::QuasiCw,
            Check::Nonneg,
            Check::Unimodal,
            Check::Duality,
            Check::Bounds,
            Check::KaruOracle,
            Check::Lemma26Oracle,
            Check::Corollary74,
            Check::Conjecture84,
            Check::Lefschetz,
            Check::Kk,
        ] {
            assert_eq!(r.status(c), Some(Status::Pass), "{c}: {:?}", r.checks);
        }
        let e = r.artifacts.extended.as_ref().unwrap();
        assert_eq!(
            (e.phi_d.as_str(), e.phi_a.as_str(), e.phi_b.as_str()),
            ("4*c", "1*cc + 4*d", "1*cc + 3*d")
        );
    }

    #[test]
    fn generator_bounds_are_tight() {
        let (p, _) = gorenstein_generator(&[1, 2, 1]).unwrap();
        let r = verify(&p, "gen", &[Check::Bounds], VerifyOptions::default()).unwrap();
        assert_eq!(r.checks[0].status, Status::Pass);
        assert_eq!(
            r.checks[0].witness.as_deref(),
            Some("equality on 5 of 5 sets")
        );
    }

    #[test]
    fn hexagon_duality_and_json() {
        let p = ngon(6).unwrap();
        let r = verify(&p, "hex", &[Check::Duality], VerifyOptions::default()).unwrap();
        assert_eq!(r.checks[0].status, Status::Pass);
        let json = r.to_json();
        assert!(json.contains("\"flagF\"") && json.contains("\"phiD\""));
        assert_eq!(
            json,
            verify(&p, "hex", &[Check::Duality], VerifyOptions::default())
                .unwrap()
                .to_json()
        );
    }

    #[test]
    fn check_names_parse() {
        assert_eq!(Check::parse_list("all").unwrap().len(), 14);
        assert_eq!(
            Check::parse_list("kk, euler").unwrap(),
            vec![Check::Euler, Check::Kk]
        );
        assert!(Check::parse_list("bogus").is_err());
        assert_eq!(fibonacci_plus_two(2), 3);
        assert_eq!(fibonacci_plus_two(4), 8);
        assert!(unimodality_violation(&[1, 19, 17, 1]).is_none());
        assert!(unimodality_violation(&[1, 3, 1, 2]).is_some());
    }
}

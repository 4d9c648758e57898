//! Per-class abelianness verdicts, the zero-trace density and the theorem cross-check.
//!
//! Everything here is a finite check over the cosets of `[G,G]` in `G`:
//!
//! * `x` is *weakly abelian* when some coset has constant trace `x`;
//! * `x` is *semi-abelian* when some coset never attains the trace `x`;
//! * `x` is *abelian* when the elements of trace `x` form a union of cosets.
//!
//! `G` is *totally abelian* when every coset has constant trace, which happens exactly
//! for groups conjugate into the Borel subgroup over the quadratic extension.
//!
//! ```
//! use abcong::abelian::analyze;
//! use abcong::ffield::FieldSpec;
//! use abcong::matgrp::{Mat2, MatGroup};
//!
//! let f2 = FieldSpec::prime(2).unwrap();
//! let g = MatGroup::gl2(&f2);
//! let report = analyze(&g).unwrap();
//! let zero = f2.from_int(0);
//! assert!(report.per_class[&zero].weak);
//! assert!(!report.per_class[&zero].semi);
//! assert!(!report.totally);
//! assert_eq!(report.density.to_string(), "2/3");
//! ```

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use num_rational::Ratio;
use serde_json::json;
use thiserror::Error;

use crate::classify::{
    classify_projective, dihedral_rotation, is_borel_conjugable, BorelWitness, ClassifyError,
    DicksonClass, DicksonLabel,
};
use crate::ffield::{prime_factors, rad, Fe, FieldSpec};
use crate::matgrp::{Coset, Mat2, MatGroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AbelianError {
    #[error("class {0} is not attained as a trace in the group")]
    NotProper(String),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error("density {found} does not match the {label} row of the density table ({expected})")]
    DensityMismatch {
        label: String,
        found: String,
        expected: String,
    },
    #[error("totally-abelian routes disagree: Borel test {borel}, constant traces on cosets {constant}")]
    TotallyMismatch { borel: bool, constant: bool },
    #[error("modulus case {case:?} does not fit the group: {reason}")]
    CaseMismatch { case: BoundCase, reason: String },
    #[error("theorem check failed: {0}")]
    Inconsistent(String),
}

/// Cosets of `[G,G]` in `G` with their trace sets, computed once and shared by the verdicts.
#[derive(Debug, Clone)]
pub struct CosetTraces {
    pub field: FieldSpec,
    pub cosets: Vec<Coset>,
    pub traces: Vec<BTreeSet<Fe>>,
}

impl CosetTraces {
    pub fn new(g: &MatGroup) -> CosetTraces {
        let f = g.field().clone();
        let cosets = g
            .cosets(&g.commutator_subgroup())
            .expect("[G,G] is a subgroup of G");
        let traces = cosets
            .iter()
            .map(|c| c.members.iter().map(|m| m.trace(&f)).collect())
            .collect();
        CosetTraces { field: f, cosets, traces }
    }

    pub fn proper(&self) -> BTreeSet<Fe> {
        self.traces.iter().flatten().copied().collect()
    }

    fn check_proper(&self, x: Fe) -> Result<(), AbelianError> {
        if self.traces.iter().any(|t| t.contains(&x)) {
            Ok(())
        } else {
            Err(AbelianError::NotProper(self.field.show(x)))
        }
    }

    /// A coset of constant trace `x`.
    pub fn weak_witness(&self, x: Fe) -> Result<Option<&Coset>, AbelianError> {
        self.check_proper(x)?;
        Ok(self
            .traces
            .iter()
            .position(|t| t.len() == 1 && t.contains(&x))
            .map(|i| &self.cosets[i]))
    }

    /// A coset avoiding the trace `x`.
    pub fn semi_witness(&self, x: Fe) -> Result<Option<&Coset>, AbelianError> {
        self.check_proper(x)?;
        Ok(self
            .traces
            .iter()
            .position(|t| !t.contains(&x))
            .map(|i| &self.cosets[i]))
    }

    /// Every coset either has constant trace `x` or avoids `x`.
    pub fn is_abelian(&self, x: Fe) -> Result<bool, AbelianError> {
        self.check_proper(x)?;
        Ok(self
            .traces
            .iter()
            .all(|t| !t.contains(&x) || t.len() == 1))
    }

    pub fn all_constant(&self) -> bool {
        self.traces.iter().all(|t| t.len() == 1)
    }
}

/// `{tr g : g in G}`.
pub fn proper_classes(g: &MatGroup) -> BTreeSet<Fe> {
    let f = g.field();
    g.elements().iter().map(|m| m.trace(f)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    /// Representative of a witnessing coset.
    pub witness: Option<Mat2>,
}

pub fn is_weakly_abelian(g: &MatGroup, x: Fe) -> Result<Verdict, AbelianError> {
    let w = CosetTraces::new(g).weak_witness(x)?.map(|c| c.representative);
    Ok(Verdict { holds: w.is_some(), witness: w })
}

pub fn is_semi_abelian(g: &MatGroup, x: Fe) -> Result<Verdict, AbelianError> {
    let w = CosetTraces::new(g).semi_witness(x)?.map(|c| c.representative);
    Ok(Verdict { holds: w.is_some(), witness: w })
}

pub fn is_lambda_abelian(g: &MatGroup, x: Fe) -> Result<bool, AbelianError> {
    CosetTraces::new(g).is_abelian(x)
}

/// Totally abelian, decided by the Borel test and by constant coset traces; the two must agree.
pub fn is_totally_abelian(g: &MatGroup) -> Result<bool, AbelianError> {
    let borel = is_borel_conjugable(g)?.is_some();
    let constant = CosetTraces::new(g).all_constant();
    if borel != constant {
        return Err(AbelianError::TotallyMismatch { borel, constant });
    }
    Ok(borel)
}

/// Fraction of elements with trace zero.
pub fn traceless_fraction(g: &MatGroup) -> Ratio<u64> {
    let f = g.field();
    let zeros = g.elements().iter().filter(|m| m.trace(f).is_zero()).count();
    Ratio::new(zeros as u64, g.order() as u64)
}

/// What the density table says for a label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DensityRule {
    Exact(Ratio<u64>),
    /// `0` or `1/d` with `d | q - 1` or `d | q + 1`, and `d` even in odd characteristic.
    Borel { q: u64, odd_char: bool },
}

impl DensityRule {
    pub fn admits(&self, c: Ratio<u64>) -> bool {
        match *self {
            DensityRule::Exact(r) => r == c,
            DensityRule::Borel { q, odd_char } => {
                if *c.numer() == 0 {
                    return true;
                }
                let d = *c.denom();
                *c.numer() == 1
                    && ((q - 1) % d == 0 || (q + 1) % d == 0)
                    && (!odd_char || d.is_multiple_of(2))
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            DensityRule::Exact(r) => r.to_string(),
            DensityRule::Borel { q, odd_char } => format!(
                "0 or 1/d with d | {} or d | {}{}",
                q - 1,
                q + 1,
                if *odd_char { ", d even" } else { "" }
            ),
        }
    }
}

pub fn density_rule(class: &DicksonClass, f: &FieldSpec) -> DensityRule {
    let odd = f.p() != 2;
    let r = |a: u64, b: u64| DensityRule::Exact(Ratio::new(a, b));
    match class.label {
        DicksonLabel::BorelConjugable | DicksonLabel::Cyclic => DensityRule::Borel { q: f.q(), odd_char: odd },
        DicksonLabel::Pgl2 { q } => r(q, (q - 1) * (q + 1)),
        DicksonLabel::Psl2 { q } => {
            // 1/(q + eps) with eps = (-1)^((q+1)/2).
            if q.div_ceil(2) % 2 == 0 {
                r(1, q + 1)
            } else {
                r(1, q - 1)
            }
        }
        DicksonLabel::Dihedral { n, .. } => {
            if n % 2 == 1 && odd {
                r(1, 2)
            } else {
                r(n + 1, 2 * n)
            }
        }
        DicksonLabel::A4 => if odd { r(1, 4) } else { r(1, 3) },
        DicksonLabel::S4 => if odd { r(3, 8) } else { r(5, 12) },
        DicksonLabel::A5 => if odd { r(1, 4) } else { r(4, 15) },
    }
}

/// Traceless fraction of `G`, asserted against the density table for its Dickson label.
pub fn density_c(g: &MatGroup) -> Result<Ratio<u64>, AbelianError> {
    let class = classify_projective(&g.projectivize())?;
    density_checked(g, &class)
}

fn density_checked(g: &MatGroup, class: &DicksonClass) -> Result<Ratio<u64>, AbelianError> {
    let c = traceless_fraction(g);
    let rule = density_rule(class, g.field());
    if !rule.admits(c) {
        return Err(AbelianError::DensityMismatch {
            label: class.label.to_string(),
            found: c.to_string(),
            expected: rule.describe(),
        });
    }
    Ok(c)
}

/// Contains an element `c` with `c^2 = 1` and `det c = -1`, as the image of complex
/// conjugation must. Always true in characteristic 2.
pub fn has_odd_involution(g: &MatGroup) -> bool {
    let f = g.field();
    let minus_one = f.from_int(-1);
    f.p() == 2
        || g.elements()
            .iter()
            .any(|m| m.det(f) == minus_one && m.mul(m, f) == Mat2::IDENTITY)
}

/// Dihedral parameter of the projective image, counting `C_2` as `D_1`.
pub fn dihedral_parameter(g: &MatGroup) -> Option<u64> {
    let p = g.projectivize();
    if p.order() == 2 {
        return Some(1);
    }
    dihedral_rotation(&p).map(|(n, _)| n)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub class: Option<Fe>,
    pub predicted: bool,
    pub observed: bool,
}

impl Check {
    pub fn agrees(&self) -> bool {
        self.predicted == self.observed
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CrosscheckReport {
    pub checks: Vec<Check>,
}

impl CrosscheckReport {
    pub fn consistent(&self) -> bool {
        self.checks.iter().all(Check::agrees)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.agrees()).collect()
    }

    pub fn ensure_consistent(&self, f: &FieldSpec) -> Result<(), AbelianError> {
        match self.failures().first() {
            None => Ok(()),
            Some(c) => Err(AbelianError::Inconsistent(format!(
                "{} at class {}: predicted {}, observed {}",
                c.name,
                c.class.map_or("-".to_string(), |x| f.show(x)),
                c.predicted,
                c.observed
            ))),
        }
    }

    fn push(&mut self, name: &'static str, class: Option<Fe>, predicted: bool, observed: bool) {
        self.checks.push(Check { name, class, predicted, observed });
    }
}

/// The semi-abelian prediction of the density/semi table for a class, where the table is definite.
pub fn predicted_semi(
    g: &MatGroup,
    class: &DicksonClass,
    proper: &BTreeSet<Fe>,
    x: Fe,
) -> Option<bool> {
    let f = g.field();
    let ell = f.p();
    let dets: BTreeSet<Fe> = g.determinants().into_iter().collect();
    let pm1: BTreeSet<Fe> = [Fe::ONE, f.from_int(-1)].into_iter().collect();
    let odd = has_odd_involution(g);
    let zero = x.is_zero();
    match class.label {
        DicksonLabel::BorelConjugable | DicksonLabel::Cyclic => Some(proper.len() > 1),
        DicksonLabel::Pgl2 { q } | DicksonLabel::Psl2 { q } => {
            if q == f.q() || zero {
                Some(false)
            } else if dets.iter().any(|&d| !f.in_subfield(d, q)) {
                Some(true)
            } else {
                None
            }
        }
        DicksonLabel::Dihedral { .. } => Some(!zero || ell != 2),
        DicksonLabel::A4 | DicksonLabel::S4 => {
            if zero {
                return Some(class.label == DicksonLabel::A4);
            }
            if !odd {
                return None;
            }
            // A scalar outside F_3 scales some coset of [G,G] away from +-1, so the
            // exception also needs every scalar of G to lie in F_3.
            let exceptional = ell == 3
                && dets == pm1
                && g.scalars().iter().all(|&a| f.in_subfield(a, 3));
            Some(!(exceptional && pm1.contains(&x)))
        }
        DicksonLabel::A5 => {
            if zero {
                return Some(false);
            }
            if !odd {
                return None;
            }
            let not_semi = match ell {
                2 => dets.iter().all(|&d| f.in_subfield(d, 4)) && f.in_subfield(x, 4),
                // Four classes: the x in F_9 with x^2 outside F_3, so not +-1 or +-sqrt(-1).
                3 => dets == pm1 && f.in_subfield(x, 9) && !f.in_subfield(f.mul(x, x), 3),
                5 => dets == pm1 && f.in_subfield(x, 5),
                29 => dets == pm1 && [2, -2, 5, -5].iter().any(|&v| f.from_int(v) == x),
                _ => false,
            };
            Some(!not_semi)
        }
    }
}

fn traceless_union_of_projective_cosets(g: &MatGroup) -> bool {
    let p = g.projectivize();
    let f = p.field();
    let comm = p.commutator_classes();
    let traceless: BTreeSet<Mat2> = p
        .classes()
        .iter()
        .filter(|m| m.trace(f).is_zero())
        .copied()
        .collect();
    traceless.iter().all(|t| {
        comm.iter()
            .all(|h| traceless.contains(&p.mul(t, h)))
    })
}

/// Compares brute-force coset verdicts with what the structure theorems predict.
pub fn theorem_crosscheck(g: &MatGroup) -> Result<CrosscheckReport, AbelianError> {
    let ct = CosetTraces::new(g);
    let class = classify_projective(&g.projectivize())?;
    Ok(crosscheck_with(g, &ct, &class))
}

fn crosscheck_with(g: &MatGroup, ct: &CosetTraces, class: &DicksonClass) -> CrosscheckReport {
    let f = g.field();
    let ell = f.p();
    let mut rep = CrosscheckReport::default();
    let proper = ct.proper();
    let borel = class.all_applicable.contains(&DicksonLabel::BorelConjugable);
    let totally = ct.all_constant();
    let dih = dihedral_parameter(g);

    rep.push("Borel iff totally abelian", None, borel, totally);

    for &x in proper.iter().filter(|x| !x.is_zero()) {
        let weak = ct.weak_witness(x).unwrap().is_some();
        if weak {
            rep.push("weak for a nonzero class implies Borel", Some(x), true, borel);
        }
        if !borel {
            rep.push("non-Borel is not abelian for nonzero classes", Some(x), false, ct.is_abelian(x).unwrap());
        }
    }

    let zero = Fe::ZERO;
    let weak0 = proper.contains(&zero) && ct.weak_witness(zero).unwrap().is_some();
    let dihedral_weak = !borel && matches!(dih, Some(n) if n > 1 && n % ell != 0);
    rep.push("weak for 0 and not totally iff dihedral D_n, n > 1, ell not dividing n", None, dihedral_weak, weak0 && !totally);

    let abelian0 = proper.contains(&zero) && ct.is_abelian(zero).unwrap();
    let dihedral_abelian = !borel
        && ell != 2
        && matches!(dih, Some(n) if n % ell != 0 && (n == 2 || (n >= 3 && n % 2 == 1)));
    rep.push("abelian for 0 and not totally iff D_2 or D_odd, ell odd, ell not dividing n", None, dihedral_abelian, abelian0 && !totally);

    if proper.contains(&zero) {
        rep.push(
            "abelian for 0 iff traceless projective classes are a union of [P,P]-cosets",
            Some(zero),
            traceless_union_of_projective_cosets(g),
            abelian0,
        );
    }

    if let Some(n) = dih {
        rep.push("dihedral image is Borel iff n = 1 or ell divides n", None, n == 1 || n % ell == 0, borel);
    }

    for &x in &proper {
        let semi = ct.semi_witness(x).unwrap().is_some();
        let abelian = ct.is_abelian(x).unwrap();
        let weak = ct.weak_witness(x).unwrap().is_some();
        if abelian {
            rep.push("abelian implies weak and (semi or the only class)", Some(x), true, weak && (semi || proper.len() == 1));
        }
        if let Some(pred) = predicted_semi(g, class, &proper, x) {
            rep.push("semi-abelian table", Some(x), pred, semi);
        }
    }

    let c = traceless_fraction(g);
    rep.push("density table", None, true, density_rule(class, f).admits(c));
    rep
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassVerdict {
    pub weak: bool,
    pub semi: bool,
    pub abelian: bool,
    pub weak_witness: Option<Mat2>,
    pub semi_witness: Option<Mat2>,
}

#[derive(Debug, Clone)]
pub struct AbelianReport {
    pub group: MatGroup,
    pub proper: BTreeSet<Fe>,
    pub per_class: BTreeMap<Fe, ClassVerdict>,
    pub totally: bool,
    pub density: Ratio<u64>,
    pub dickson: DicksonClass,
    pub crosscheck: CrosscheckReport,
}

impl AbelianReport {
    pub fn consistent(&self) -> bool {
        self.crosscheck.consistent()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let f = self.group.field();
        let per_class: serde_json::Map<String, serde_json::Value> = self
            .per_class
            .iter()
            .map(|(x, v)| {
                (
                    f.show(*x),
                    json!({
                        "weak": v.weak,
                        "semi": v.semi,
                        "abelian": v.abelian,
                        "weak_witness": v.weak_witness.map(|m| m.to_json(f)),
                        "semi_witness": v.semi_witness.map(|m| m.to_json(f)),
                    }),
                )
            })
            .collect();
        json!({
            "order": self.group.order(),
            "proper": self.proper.iter().map(|&x| f.to_json(x)).collect::<Vec<_>>(),
            "per_class": per_class,
            "totally": self.totally,
            "c": self.density.to_string(),
            "dickson": self.dickson.to_json(f),
            "consistent": self.consistent(),
        })
    }
}

/// Full analysis of a group: verdicts for every proper class, density, label and cross-check.
pub fn analyze(g: &MatGroup) -> Result<AbelianReport, AbelianError> {
    let ct = CosetTraces::new(g);
    let dickson = classify_projective(&g.projectivize())?;
    let borel = dickson.all_applicable.contains(&DicksonLabel::BorelConjugable);
    let totally = ct.all_constant();
    if borel != totally {
        return Err(AbelianError::TotallyMismatch { borel, constant: totally });
    }
    let density = density_checked(g, &dickson)?;
    let proper = ct.proper();
    let per_class = proper
        .iter()
        .map(|&x| {
            let w = ct.weak_witness(x).unwrap().map(|c| c.representative);
            let s = ct.semi_witness(x).unwrap().map(|c| c.representative);
            let v = ClassVerdict {
                weak: w.is_some(),
                semi: s.is_some(),
                abelian: ct.is_abelian(x).unwrap(),
                weak_witness: w,
                semi_witness: s,
            };
            (x, v)
        })
        .collect();
    let crosscheck = crosscheck_with(g, &ct, &dickson);
    Ok(AbelianReport {
        group: g.clone(),
        proper,
        per_class,
        totally,
        density,
        dickson,
        crosscheck,
    })
}

/// Result of running [`analyze`] on every two-generated subgroup of a group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleSummary {
    pub q: u64,
    pub subgroups: usize,
    /// Primary label -> number of subgroups.
    pub labels: BTreeMap<String, usize>,
    /// `(subgroup order, description)` for every disagreement or error.
    pub failures: Vec<(usize, String)>,
}

impl OracleSummary {
    pub fn consistent(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "q": self.q,
            "subgroups": self.subgroups,
            "labels": self.labels,
            "failures": self.failures.iter().map(|(o, d)| json!({"order": o, "check": d})).collect::<Vec<_>>(),
            "consistent": self.consistent(),
        })
    }
}

/// Exhaustive cross-check over the two-generated subgroups of `g` (all subgroups when
/// `g = GL_2(F_2)` or `GL_2(F_3)`).
pub fn oracle(g: &MatGroup) -> OracleSummary {
    let f = g.field();
    let subs = crate::matgrp::two_generated_subgroups(g);
    let mut labels = BTreeMap::new();
    let mut failures = Vec::new();
    for h in &subs {
        match analyze(h) {
            Ok(r) => {
                *labels.entry(r.dickson.label.to_string()).or_insert(0) += 1;
                for c in r.crosscheck.failures() {
                    let class = c.class.map(|x| f.show(x)).unwrap_or_else(|| "-".into());
                    failures.push((h.order(), format!("{} at class {class}", c.name)));
                }
            }
            Err(e) => failures.push((h.order(), e.to_string())),
        }
    }
    OracleSummary {
        q: f.q(),
        subgroups: subs.len(),
        labels,
        failures,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize, clap::ValueEnum)]
pub enum BoundCase {
    /// Totally abelian image: `rad(N l) * gcd(2 exp(ss image), S)`.
    Borel,
    /// Dihedral weak case: `rad(N l) * gcd(2, N l)^2`.
    DihedralWeak,
    /// `D_2` with odd `l`: `rad(N l) * gcd(2, N)^2`.
    D2,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModulusBound {
    pub level: u64,
    pub ell: u64,
    pub case: BoundCase,
    pub bound: u64,
    /// Prime factorization of `bound`.
    pub factors: Vec<(u64, u32)>,
    /// The symbolic shape, e.g. `rad(1014) * gcd(2,1014)^2 = 78 * 4`.
    pub decomposition: String,
}

impl ModulusBound {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "N": self.level,
            "ell": self.ell,
            "case": format!("{:?}", self.case),
            "bound": self.bound,
            "factors": self.factors.iter().map(|(p, e)| json!([p, e])).collect::<Vec<_>>(),
            "decomposition": self.decomposition,
        })
    }

    /// Renders the factorization as `2^4*5*13`.
    pub fn factored(&self) -> String {
        self.factors
            .iter()
            .map(|&(p, e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") })
            .collect::<Vec<_>>()
            .join("*")
    }
}

pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    for p in prime_factors(n) {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        out.push((p, e));
    }
    out
}

/// The part of `n` supported at the primes dividing `support`.
pub fn part_supported_at(n: u64, support: u64) -> u64 {
    factorize(n)
        .into_iter()
        .filter(|&(p, _)| support.is_multiple_of(p))
        .map(|(p, e)| p.pow(e))
        .product()
}

/// Modulus bound from the level, the residue characteristic and, for the Borel case,
/// the exponent of the semisimplified image.
pub fn modulus_bound(
    level: u64,
    ell: u64,
    case: BoundCase,
    ss_exponent: Option<u64>,
) -> Result<ModulusBound, AbelianError> {
    let nl = level * ell;
    let r = rad(nl);
    let (extra, decomposition) = match case {
        BoundCase::Borel => {
            let e = ss_exponent.ok_or(AbelianError::CaseMismatch {
                case,
                reason: "the Borel bound needs the exponent of the semisimplified image".into(),
            })?;
            let g = part_supported_at(2 * e, nl);
            (g, format!("rad({nl}) * gcd({}, S) = {r} * {g}", 2 * e))
        }
        BoundCase::DihedralWeak => {
            let g = nl.gcd(&2).pow(2);
            (g, format!("rad({nl}) * gcd(2,{nl})^2 = {r} * {g}"))
        }
        BoundCase::D2 => {
            let g = level.gcd(&2).pow(2);
            (g, format!("rad({nl}) * gcd(2,{level})^2 = {r} * {g}"))
        }
    };
    let bound = r * extra;
    Ok(ModulusBound {
        level,
        ell,
        case,
        bound,
        factors: factorize(bound),
        decomposition,
    })
}

/// Exponent of the diagonal part after triangularizing with a Borel witness.
pub fn semisimple_exponent(g: &MatGroup, w: &BorelWitness) -> u64 {
    let f = g.field();
    let k = &w.extension;
    g.elements().iter().fold(1, |acc, m| {
        let t = w.triangularize(f, m);
        let a = k.mult_order(t.0[0]).expect("invertible");
        let d = k.mult_order(t.0[3]).expect("invertible");
        acc.lcm(&a.lcm(&d))
    })
}

/// Modulus bound with the case checked against the group's structure.
pub fn modulus_bound_for_group(
    g: &MatGroup,
    level: u64,
    case: BoundCase,
) -> Result<ModulusBound, AbelianError> {
    let ell = g.field().p();
    let witness = is_borel_conjugable(g)?;
    let mismatch = |reason: &str| AbelianError::CaseMismatch { case, reason: reason.into() };
    match case {
        BoundCase::Borel => {
            let w = witness.ok_or_else(|| mismatch("the group is not Borel-conjugable"))?;
            modulus_bound(level, ell, case, Some(semisimple_exponent(g, &w)))
        }
        BoundCase::DihedralWeak => match dihedral_parameter(g) {
            Some(n) if witness.is_none() && n > 1 && n % ell != 0 => modulus_bound(level, ell, case, None),
            _ => Err(mismatch("projective image is not D_n with n > 1 prime to ell")),
        },
        BoundCase::D2 => match dihedral_parameter(g) {
            Some(2) if witness.is_none() && ell != 2 => modulus_bound(level, ell, case, None),
            _ => Err(mismatch("projective image is not C2 x C2 in odd characteristic")),
        },
    }
}

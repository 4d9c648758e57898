//! Dickson labels for finite subgroups of `PGL_2` and Borel recognition.
//!
//! Borel-conjugability is decided twice. The group-theoretic route checks that the
//! identity is the only element of `[G,G]` diagonalisable over the quadratic extension.
//! The geometric route searches `P^1(F_{q^2})` for a common eigenvector. The two must
//! agree, and the geometric route yields the change-of-basis witness.
//!
//! ```
//! use abcong::classify::{classify_projective, DicksonLabel};
//! use abcong::ffield::FieldSpec;
//! use abcong::matgrp::MatGroup;
//!
//! let f3 = FieldSpec::prime(3).unwrap();
//! let class = classify_projective(&MatGroup::gl2(&f3).projectivize()).unwrap();
//! assert_eq!(class.label, DicksonLabel::S4);
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde_json::json;
use thiserror::Error;

use crate::ffield::{Fe, FieldSpec};
use crate::matgrp::{Mat2, MatGroup, ProjGroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("projective image of order {order} matches no Dickson family")]
    Unrecognized { order: usize },
    #[error("Borel tests disagree: commutator criterion says {by_commutator}, eigenvector search says {by_eigenvector}")]
    BorelRoutesDisagree { by_commutator: bool, by_eigenvector: bool },
    #[error("trace set of [G,G] for {label} is {found:?}, expected {expected:?}")]
    TraceSetMismatch {
        label: String,
        found: Vec<String>,
        expected: Vec<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DicksonLabel {
    BorelConjugable,
    Cyclic,
    /// `D_n` with `n >= 2`; `coprime_to_char` records whether the characteristic misses `n`.
    Dihedral { n: u64, coprime_to_char: bool },
    Psl2 { q: u64 },
    Pgl2 { q: u64 },
    A4,
    S4,
    A5,
}

impl DicksonLabel {
    pub fn name(&self) -> &'static str {
        match self {
            DicksonLabel::BorelConjugable => "BorelConjugable",
            DicksonLabel::Cyclic => "Cyclic",
            DicksonLabel::Dihedral { .. } => "Dihedral",
            DicksonLabel::Psl2 { .. } => "PSL2",
            DicksonLabel::Pgl2 { .. } => "PGL2",
            DicksonLabel::A4 => "A4",
            DicksonLabel::S4 => "S4",
            DicksonLabel::A5 => "A5",
        }
    }
}

impl fmt::Display for DicksonLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DicksonLabel::Dihedral { n, .. } => write!(f, "Dihedral({n})"),
            DicksonLabel::Psl2 { q } => write!(f, "PSL2(F{q})"),
            DicksonLabel::Pgl2 { q } => write!(f, "PGL2(F{q})"),
            other => f.write_str(other.name()),
        }
    }
}

/// A common eigenvector over `K = F_{q^2}` and the basis it induces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BorelWitness {
    /// The quadratic extension the basis lives in.
    pub extension: FieldSpec,
    /// Image in `K` of the generator `t` of the base field.
    pub embedding_root: Fe,
    /// Columns of the change of basis; the first column is the common eigenvector.
    pub basis: Mat2,
}

impl BorelWitness {
    pub fn embed(&self, base: &FieldSpec, a: Fe) -> Fe {
        embed_with(base, &self.extension, self.embedding_root, a)
    }

    pub fn embed_matrix(&self, base: &FieldSpec, m: &Mat2) -> Mat2 {
        Mat2(m.0.map(|x| self.embed(base, x)))
    }

    /// `B^-1 m B` over the extension.
    pub fn triangularize(&self, base: &FieldSpec, m: &Mat2) -> Mat2 {
        let k = &self.extension;
        let bi = self.basis.inverse(k).expect("basis is invertible");
        bi.mul(&self.embed_matrix(base, m), k).mul(&self.basis, k)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Borel(BorelWitness),
    /// A class generating the cyclic image.
    Generator(Mat2),
    /// Generator of the index-2 cyclic subgroup.
    Rotation(Mat2),
    /// The field generated by `tr^2/det`.
    TraceField { q: u64 },
    OrderStatistics(BTreeMap<u64, usize>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DicksonClass {
    pub label: DicksonLabel,
    pub witness: Witness,
    pub all_applicable: Vec<DicksonLabel>,
    pub order: usize,
}

impl DicksonClass {
    pub fn dihedral_n(&self) -> Option<u64> {
        match self.label {
            DicksonLabel::Dihedral { n, .. } => Some(n),
            _ => None,
        }
    }

    pub fn to_json(&self, base: &FieldSpec) -> serde_json::Value {
        let (n, sub) = match self.label {
            DicksonLabel::Dihedral { n, .. } => (Some(n), None),
            DicksonLabel::Psl2 { q } | DicksonLabel::Pgl2 { q } => (None, Some(q)),
            _ => (None, None),
        };
        let witness = match &self.witness {
            Witness::Borel(w) => json!({
                "extension": w.extension,
                "embedding_root": w.extension.to_json(w.embedding_root),
                "basis": w.basis.to_json(&w.extension),
            }),
            Witness::Generator(m) => json!({"generator": m.to_json(base)}),
            Witness::Rotation(m) => json!({"rotation": m.to_json(base)}),
            Witness::TraceField { q } => json!({"trace_field_q": q}),
            Witness::OrderStatistics(s) => {
                json!({"element_orders": s.iter().map(|(k, v)| (k.to_string(), *v)).collect::<BTreeMap<_, _>>()})
            }
        };
        json!({
            "label": self.label.name(),
            "n": n,
            "subfield_q": sub,
            "all_applicable": self.all_applicable.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
            "witness": witness,
        })
    }
}

fn embed_with(base: &FieldSpec, ext: &FieldSpec, root: Fe, a: Fe) -> Fe {
    let mut acc = Fe::ZERO;
    let mut power = Fe::ONE;
    for c in base.coeffs(a) {
        acc = ext.add(acc, ext.mul(ext.from_int(c as i64), power));
        power = ext.mul(power, root);
    }
    acc
}

/// `F_{q^2}` together with a root of the base field's modulus.
pub fn quadratic_extension(base: &FieldSpec) -> (FieldSpec, Fe) {
    let ext = FieldSpec::new(base.p(), 2 * base.r(), None).expect("q^2 within the field guard");
    if base.r() == 1 {
        return (ext, Fe::ZERO);
    }
    let m = base.modulus();
    let root = ext
        .elements()
        .find(|&x| {
            let mut acc = Fe::ZERO;
            for &c in m.iter().rev() {
                acc = ext.add(ext.mul(acc, x), ext.from_int(c as i64));
            }
            acc.is_zero()
        })
        .expect("the modulus splits in the quadratic extension");
    (ext, root)
}

/// Group-theoretic route: no non-identity element of `[G,G]` is diagonalisable over `F_{q^2}`.
pub fn borel_by_commutator(g: &MatGroup) -> bool {
    let f = g.field();
    g.commutator_subgroup()
        .elements()
        .iter()
        .all(|m| *m == Mat2::IDENTITY || !m.is_diagonalisable_quadratic(f))
}

/// Geometric route: a point of `P^1(F_{q^2})` fixed by every generator.
pub fn common_eigenvector(g: &MatGroup) -> Option<BorelWitness> {
    let base = g.field();
    let (ext, root) = quadratic_extension(base);
    let gens: Vec<Mat2> = g
        .small_generating_set()
        .iter()
        .map(|m| Mat2(m.0.map(|x| embed_with(base, &ext, root, x))))
        .collect();
    let fixes = |x: Fe, y: Fe| {
        gens.iter().all(|m| {
            let [a, b, c, d] = m.0;
            let u = ext.add(ext.mul(a, x), ext.mul(b, y));
            let v = ext.add(ext.mul(c, x), ext.mul(d, y));
            ext.sub(ext.mul(u, y), ext.mul(v, x)).is_zero()
        })
    };
    let points: Vec<(Fe, Fe)> = std::iter::once((Fe::ONE, Fe::ZERO))
        .chain(ext.elements().map(|x| (x, Fe::ONE)))
        .collect();
    for (x, y) in points {
        if fixes(x, y) {
            let basis = if y.is_zero() {
                Mat2::new(x, Fe::ZERO, y, Fe::ONE)
            } else {
                Mat2::new(x, Fe::ONE, y, Fe::ZERO)
            };
            return Some(BorelWitness {
                extension: ext,
                embedding_root: root,
                basis,
            });
        }
    }
    None
}

/// Borel-conjugability over the quadratic extension, confirmed by both routes.
pub fn is_borel_conjugable(g: &MatGroup) -> Result<Option<BorelWitness>, ClassifyError> {
    let by_commutator = borel_by_commutator(g);
    let witness = common_eigenvector(g);
    if by_commutator != witness.is_some() {
        return Err(ClassifyError::BorelRoutesDisagree {
            by_commutator,
            by_eigenvector: witness.is_some(),
        });
    }
    Ok(witness)
}

/// The subfield generated by the projective invariants `tr(g)^2 / det(g)`.
pub fn projective_trace_field(g: &MatGroup) -> u64 {
    let f = g.field();
    f.generated_subfield(g.elements().iter().map(|m| {
        let t = m.trace(f);
        f.div(f.mul(t, t), m.det(f)).unwrap()
    }))
}

fn cyclic_generator(p: &ProjGroup, stats: &BTreeMap<u64, usize>) -> Option<Mat2> {
    let n = p.order() as u64;
    if !stats.contains_key(&n) {
        return None;
    }
    p.classes().iter().copied().find(|x| p.element_order(x) == n)
}

/// An element `r` of order `|P|/2` whose cyclic subgroup has only involutions outside it.
pub fn dihedral_rotation(p: &ProjGroup) -> Option<(u64, Mat2)> {
    let order = p.order() as u64;
    if order < 4 || order % 2 == 1 {
        return None;
    }
    let n = order / 2;
    for r in p.classes() {
        if p.element_order(r) != n {
            continue;
        }
        let rot = p.closure(&[*r]);
        let ok = p
            .classes()
            .iter()
            .filter(|x| rot.binary_search(x).is_err())
            .all(|x| p.element_order(x) == 2);
        if ok {
            return Some((n, *r));
        }
    }
    None
}

fn psl2_order(k: u64) -> u64 {
    k * (k * k - 1) / if k.is_multiple_of(2) { 1 } else { 2 }
}

fn pgl2_order(k: u64) -> u64 {
    k * (k * k - 1)
}

fn reference_statistics(p: u64, s: u32, special: bool) -> BTreeMap<u64, usize> {
    let f = FieldSpec::new(p, s, None).expect("subfield exists");
    let g = if special { MatGroup::sl2(&f) } else { MatGroup::gl2(&f) };
    g.projectivize().order_statistics()
}

const A4_STATS: [(u64, usize); 3] = [(1, 1), (2, 3), (3, 8)];
const S4_STATS: [(u64, usize); 4] = [(1, 1), (2, 9), (3, 8), (4, 6)];
const A5_STATS: [(u64, usize); 4] = [(1, 1), (2, 15), (3, 20), (5, 24)];

fn stats_are(stats: &BTreeMap<u64, usize>, expected: &[(u64, usize)]) -> bool {
    stats.len() == expected.len() && expected.iter().all(|(k, v)| stats.get(k) == Some(v))
}

/// Classifies the projective image; the primary label follows the precedence
/// Borel, cyclic, dihedral, `PSL_2`/`PGL_2` of a subfield with more than 3 elements,
/// then `A_4`, `S_4`, `A_5`.
pub fn classify_projective(p: &ProjGroup) -> Result<DicksonClass, ClassifyError> {
    let base = p.base();
    let f = base.field();
    let ell = f.p();
    let order = p.order();
    let stats = p.order_statistics();
    let mut found: Vec<(DicksonLabel, Witness)> = Vec::new();

    if let Some(w) = is_borel_conjugable(base)? {
        found.push((DicksonLabel::BorelConjugable, Witness::Borel(w)));
    }
    if let Some(gen) = cyclic_generator(p, &stats) {
        found.push((DicksonLabel::Cyclic, Witness::Generator(gen)));
    }
    if let Some((n, r)) = dihedral_rotation(p) {
        let label = DicksonLabel::Dihedral {
            n,
            coprime_to_char: n % ell != 0,
        };
        found.push((label, Witness::Rotation(r)));
    }
    let trace_field = projective_trace_field(base);
    let mut subfield_labels = Vec::new();
    for s in (1..=f.r()).filter(|s| f.r().is_multiple_of(*s)) {
        let k = ell.pow(s);
        for special in [false, true] {
            let target = if special { psl2_order(k) } else { pgl2_order(k) };
            if target != order as u64 || (special && k % 2 == 0) {
                continue;
            }
            if reference_statistics(ell, s, special) != stats {
                continue;
            }
            let label = if special {
                DicksonLabel::Psl2 { q: k }
            } else {
                DicksonLabel::Pgl2 { q: k }
            };
            let primary = k > 3 && trace_field == k;
            subfield_labels.push((label, primary));
            if k % 2 == 0 {
                // PSL_2 and PGL_2 coincide in characteristic 2.
                subfield_labels.push((DicksonLabel::Psl2 { q: k }, false));
            }
        }
    }
    subfield_labels.sort_by_key(|(_, primary)| !primary);
    for (label, _) in &subfield_labels {
        found.push((*label, Witness::TraceField { q: trace_field }));
    }
    let exceptional = [
        (DicksonLabel::A4, &A4_STATS[..]),
        (DicksonLabel::S4, &S4_STATS[..]),
        (DicksonLabel::A5, &A5_STATS[..]),
    ];
    for (label, expected) in exceptional {
        if stats_are(&stats, expected) {
            found.push((label, Witness::OrderStatistics(stats.clone())));
        }
    }

    let primary_allowed = |l: &DicksonLabel| match l {
        DicksonLabel::Psl2 { q } | DicksonLabel::Pgl2 { q } => subfield_labels
            .iter()
            .any(|(s, primary)| s == l && *primary && *q > 3),
        _ => true,
    };
    let (label, witness) = found
        .iter()
        .find(|(l, _)| primary_allowed(l))
        .cloned()
        .ok_or(ClassifyError::Unrecognized { order })?;
    let mut all_applicable: Vec<DicksonLabel> = found.iter().map(|(l, _)| *l).collect();
    all_applicable.dedup();
    Ok(DicksonClass {
        label,
        witness,
        all_applicable,
        order,
    })
}

/// Classes of the projective image with trace zero.
pub fn traceless_count(p: &ProjGroup) -> usize {
    let f = p.field();
    p.classes().iter().filter(|m| m.trace(f).is_zero()).count()
}

/// The trace set the Dickson label predicts for `[G,G]`, when there is a lemma for it.
pub fn predicted_commutator_traces(class: &DicksonClass, f: &FieldSpec) -> Option<BTreeSet<Fe>> {
    let ints = |xs: &[i64]| xs.iter().map(|&x| f.from_int(x)).collect::<BTreeSet<Fe>>();
    match class.label {
        DicksonLabel::A4 if f.p() != 2 => Some(ints(&[0, 2, -2])),
        DicksonLabel::S4 => Some(ints(&[0, 1, -1, 2, -2])),
        DicksonLabel::A5 => {
            let mut set = ints(&[0, 1, -1, 2, -2]);
            // phi is a root of x^2 - x - 1; the other root is 1 - phi = -(phi - 1).
            let phi = *f.quadratic_roots(f.from_int(-1), f.from_int(-1)).first()?;
            let phi1 = f.sub(phi, Fe::ONE);
            set.extend([phi, f.neg(phi), phi1, f.neg(phi1)]);
            Some(set)
        }
        DicksonLabel::Psl2 { q } | DicksonLabel::Pgl2 { q } => {
            Some(f.elements().filter(|&x| f.in_subfield(x, q)).collect())
        }
        _ => None,
    }
}

/// Traces attained on `[G,G]`, checked against the lemma for the detected label.
pub fn commutator_trace_set(g: &MatGroup) -> Result<BTreeSet<Fe>, ClassifyError> {
    let f = g.field();
    let found: BTreeSet<Fe> = g
        .commutator_subgroup()
        .elements()
        .iter()
        .map(|m| m.trace(f))
        .collect();
    let class = classify_projective(&g.projectivize())?;
    if let Some(expected) = predicted_commutator_traces(&class, f) {
        if expected != found {
            let show = |s: &BTreeSet<Fe>| s.iter().map(|&x| f.show(x)).collect();
            return Err(ClassifyError::TraceSetMismatch {
                label: class.label.to_string(),
                found: show(&found),
                expected: show(&expected),
            });
        }
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn borel_examples() {
        let f5 = FieldSpec::prime(5).unwrap();
        let g = f5.primitive();
        let diag = MatGroup::close(&f5, &[Mat2::diag(g, Fe::ONE), Mat2::diag(Fe::ONE, g)]).unwrap();
        assert!(is_borel_conjugable(&diag).unwrap().is_some());
        let f3 = FieldSpec::prime(3).unwrap();
        assert!(is_borel_conjugable(&MatGroup::gl2(&f3)).unwrap().is_none());
        // Nonsplit Cartan of GL_2(F_3): multiplication by t in F_9 = F_3[t]/(t^2+1) is cyclic of order 8
        // only for a primitive t; use 1 + t, which has order 8.
        let c = MatGroup::close(&f3, &[Mat2::from_ints(&f3, [[1, -1], [1, 1]])]).unwrap();
        assert_eq!(c.order(), 8);
        let w = is_borel_conjugable(&c).unwrap().expect("abelian groups are Borel over F_9");
        for m in c.elements() {
            let t = w.triangularize(&f3, m);
            assert!(t.0[2].is_zero(), "lower-left entry vanishes");
        }
    }

    #[test]
    fn labels_of_small_groups() {
        let f3 = FieldSpec::prime(3).unwrap();
        let c = classify_projective(&MatGroup::gl2(&f3).projectivize()).unwrap();
        assert_eq!(c.label, DicksonLabel::S4);
        assert!(c.all_applicable.contains(&DicksonLabel::Pgl2 { q: 3 }));
        let f2 = FieldSpec::prime(2).unwrap();
        let c = classify_projective(&MatGroup::gl2(&f2).projectivize()).unwrap();
        assert_eq!(c.label, DicksonLabel::Dihedral { n: 3, coprime_to_char: true });
        assert!(c.all_applicable.contains(&DicksonLabel::Pgl2 { q: 2 }));
        let f5 = FieldSpec::prime(5).unwrap();
        let c = classify_projective(&MatGroup::gl2(&f5).projectivize()).unwrap();
        assert_eq!(c.label, DicksonLabel::Pgl2 { q: 5 });
        assert!(!c.all_applicable.contains(&DicksonLabel::S4));
        let c = classify_projective(&MatGroup::sl2(&f5).projectivize()).unwrap();
        assert_eq!(c.label, DicksonLabel::Psl2 { q: 5 });
        assert!(c.all_applicable.contains(&DicksonLabel::A5));
        let f4 = FieldSpec::new(2, 2, None).unwrap();
        let c = classify_projective(&MatGroup::gl2(&f4).projectivize()).unwrap();
        assert_eq!(c.label, DicksonLabel::Pgl2 { q: 4 });
        assert!(c.all_applicable.contains(&DicksonLabel::A5));
    }

    #[test]
    fn split_cartan_normaliser_is_dihedral() {
        let f5 = FieldSpec::prime(5).unwrap();
        let g = f5.primitive();
        let n = MatGroup::close(
            &f5,
            &[Mat2::diag(g, Fe::ONE), Mat2::diag(Fe::ONE, g), Mat2::from_ints(&f5, [[0, 1], [1, 0]])],
        )
        .unwrap();
        assert_eq!(n.order(), 32);
        let c = classify_projective(&n.projectivize()).unwrap();
        assert_eq!(c.label, DicksonLabel::Dihedral { n: 4, coprime_to_char: true });
    }

    #[test]
    fn traceless_counts() {
        let f3 = FieldSpec::prime(3).unwrap();
        assert_eq!(traceless_count(&MatGroup::gl2(&f3).projectivize()), 9);
        let f5 = FieldSpec::prime(5).unwrap();
        assert_eq!(traceless_count(&MatGroup::sl2(&f5).projectivize()), 15);
        assert_eq!(traceless_count(&MatGroup::trivial(&f5).projectivize()), 0);
        let f2 = FieldSpec::prime(2).unwrap();
        assert_eq!(traceless_count(&MatGroup::trivial(&f2).projectivize()), 1);
    }

    #[test]
    fn trace_sets() {
        let f3 = FieldSpec::prime(3).unwrap();
        let s = commutator_trace_set(&MatGroup::gl2(&f3)).unwrap();
        assert_eq!(s.len(), 3);
        let f5 = FieldSpec::prime(5).unwrap();
        let g = f5.primitive();
        let diag = MatGroup::close(&f5, &[Mat2::diag(g, Fe::ONE)]).unwrap();
        assert_eq!(commutator_trace_set(&diag).unwrap(), BTreeSet::from([Fe(2)]));
    }
}

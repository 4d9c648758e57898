//! Empirical congruence discovery on `(p, a_p mod l)` datasets.
//!
//! For a residue `x` and a modulus `M`, every residue class `r` of `p mod M` is sorted into
//! one of three bins: all samples have `a_p = x`, none do, or both happen. From this we read
//! off two candidate sets:
//!
//! * `S_sup`, the classes where every sample has `a_p = x` (`p mod M in S_sup => a_p = x`);
//! * `S_nec`, the classes where some sample has `a_p = x` (`a_p = x => p mod M in S_nec`).
//!
//! These are observations over finitely many primes, never proofs; reports say so.
//!
//! ```
//! use abcong::discover::{discover, Direction};
//! use abcong::eigendata::{build_dataset, ApSource};
//!
//! let ds = build_dataset(&ApSource::Delta, 23, 3000).unwrap();
//! let entry = discover(&ds, 0, 23).unwrap();
//! assert_eq!(entry.direction, Direction::Iff);
//! assert_eq!(entry.s_nec, vec![5, 7, 10, 11, 14, 15, 17, 19, 20, 21, 22]);
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::abelian::{density_c, factorize, AbelianError, CosetTraces};
use crate::eigendata::ApDataset;
use crate::ffield::{is_prime, kronecker, rad, Fe};
use crate::matgrp::{Coset, MatGroup};

/// Samples needed in every coprime residue class before an `Iff` may be reported.
pub const MIN_SAMPLES_PER_CLASS: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiscoverError {
    #[error("insufficient data: no sample in residue class {residue} mod {modulus}")]
    InsufficientData { modulus: u64, residue: u64 },
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("residue {x} is not reduced mod {ell}")]
    BadResidue { x: u64, ell: u64 },
    #[error(transparent)]
    Abelian(#[from] AbelianError),
    #[error("synthetic sampling needs a prime field, got q = {0}")]
    NotPrimeField(u64),
}

/// Relation between `a_p = x` and `p mod M in S`, as in the row `a_p = x  DIR  p in S`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// `a_p = x <=> p mod M in S` (with `S = S_sup = S_nec`).
    Iff,
    /// Both one-way statements hold with different sets.
    Both,
    /// Only `a_p = x => p mod M in S_nec` (the semi direction).
    Implies,
    /// Only `p mod M in S_sup => a_p = x` (the weak direction).
    ImpliedBy,
    None,
}

impl Direction {
    pub fn symbol(self) -> &'static str {
        match self {
            Direction::Iff => "<=>",
            Direction::Both => "<=/=>",
            Direction::Implies => "=>",
            Direction::ImpliedBy => "<=",
            Direction::None => "-",
        }
    }

    pub fn weak(self) -> bool {
        matches!(self, Direction::Iff | Direction::Both | Direction::ImpliedBy)
    }

    pub fn semi(self) -> bool {
        matches!(self, Direction::Iff | Direction::Both | Direction::Implies)
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Direction::Iff => "iff",
            Direction::Both => "both",
            Direction::Implies => "implies",
            Direction::ImpliedBy => "implied_by",
            Direction::None => "none",
        };
        f.write_str(s)
    }
}

/// Discovery result for one residue `x` at one modulus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassEntry {
    pub x: u64,
    pub modulus: u64,
    /// Residues where every sample has `a_p = x`.
    pub s_sup: Vec<u64>,
    /// Residues where some sample has `a_p = x`.
    pub s_nec: Vec<u64>,
    pub direction: Direction,
    /// Samples with `p mod M in S_nec` but `a_p != x`: the obstruction to an iff.
    pub violations: usize,
    /// Samples used (primes coprime to `M`).
    pub samples: usize,
    /// Fewest samples seen in a coprime residue class.
    pub min_class_samples: usize,
}

/// Coprime residues mod `m` in increasing order.
pub fn units(m: u64) -> Vec<u64> {
    (0..m).filter(|r| r.gcd(&m) == 1).collect()
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factorize(n) {
        let prev = out.clone();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            out.extend(prev.iter().map(|d| d * pk));
        }
    }
    out.sort_unstable();
    out
}

/// Per-residue histogram of `a_p mod l` over samples with `gcd(p, M) = 1`.
pub fn residue_table(ds: &ApDataset, m: u64) -> BTreeMap<u64, BTreeMap<u64, usize>> {
    let mut t: BTreeMap<u64, BTreeMap<u64, usize>> = BTreeMap::new();
    for &(p, a) in &ds.samples {
        if p.gcd(&m) == 1 {
            *t.entry(p % m).or_default().entry(a).or_default() += 1;
        }
    }
    t
}

pub fn discover(ds: &ApDataset, x: u64, m: u64) -> Result<ClassEntry, DiscoverError> {
    if m == 0 {
        return Err(DiscoverError::ZeroModulus);
    }
    if x >= ds.ell {
        return Err(DiscoverError::BadResidue { x, ell: ds.ell });
    }
    let table = residue_table(ds, m);
    let mut s_sup = Vec::new();
    let mut s_nec = Vec::new();
    let mut violations = 0;
    let mut samples = 0;
    let mut min_class = usize::MAX;
    for r in units(m) {
        let hist = table
            .get(&r)
            .ok_or(DiscoverError::InsufficientData { modulus: m, residue: r })?;
        let total: usize = hist.values().sum();
        let hits = hist.get(&x).copied().unwrap_or(0);
        samples += total;
        min_class = min_class.min(total);
        if hits == total {
            s_sup.push(r);
        }
        if hits > 0 {
            s_nec.push(r);
            violations += total - hits;
        }
    }
    let n_units = units(m).len();
    let weak = !s_sup.is_empty();
    let semi = !s_nec.is_empty() && s_nec.len() < n_units;
    let mut direction = match (weak, semi) {
        (true, true) if s_sup == s_nec => Direction::Iff,
        (true, true) => Direction::Both,
        (false, true) => Direction::Implies,
        (true, false) => Direction::ImpliedBy,
        (false, false) => Direction::None,
    };
    if direction == Direction::Iff && min_class < MIN_SAMPLES_PER_CLASS {
        direction = Direction::Both;
    }
    Ok(ClassEntry {
        x,
        modulus: m,
        s_sup,
        s_nec,
        direction,
        violations,
        samples,
        min_class_samples: min_class,
    })
}

/// Best modulus among the divisors of `bound`, least first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModulusSearch {
    pub x: u64,
    pub bound: u64,
    /// Least divisor with an iff, if any.
    pub iff: Option<ClassEntry>,
    /// Least divisor with a nonempty `S_sup`.
    pub weak: Option<ClassEntry>,
    /// Least divisor with a proper `S_nec`.
    pub semi: Option<ClassEntry>,
    /// Divisors skipped for lack of data.
    pub skipped: Vec<u64>,
}

pub fn search_modulus(ds: &ApDataset, x: u64, bound: u64) -> Result<ModulusSearch, DiscoverError> {
    let mut out = ModulusSearch {
        x,
        bound,
        iff: None,
        weak: None,
        semi: None,
        skipped: Vec::new(),
    };
    for m in divisors(bound) {
        let e = match discover(ds, x, m) {
            Ok(e) => e,
            Err(DiscoverError::InsufficientData { .. }) => {
                out.skipped.push(m);
                continue;
            }
            Err(e) => return Err(e),
        };
        if out.weak.is_none() && e.direction.weak() {
            out.weak = Some(e.clone());
        }
        if out.semi.is_none() && e.direction.semi() {
            out.semi = Some(e.clone());
        }
        if e.direction == Direction::Iff {
            out.iff = Some(e);
            break;
        }
    }
    Ok(out)
}

/// A fitted `(D/p) = -1 => a_p = x` statement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LegendreFit {
    pub discriminant: i64,
    /// `Iff` when the converse also holds on the data, else `ImpliedBy`.
    pub direction: Direction,
    /// Samples with `(D/p) = -1`.
    pub premise: usize,
    /// Samples with `a_p = x` but `(D/p) != -1`.
    pub converse_violations: usize,
}

/// `+-d` for the divisors `d` of `rad(N l) * gcd(2, N l)^2`, plus `-1`, ordered by `|d|`.
pub fn legendre_candidates(level: u64, ell: u64) -> Vec<i64> {
    let nl = level * ell;
    let bound = rad(nl) * nl.gcd(&2).pow(2);
    let mut c = vec![-1i64];
    for d in divisors(bound).into_iter().filter(|&d| d > 1) {
        c.push(-(d as i64));
        c.push(d as i64);
    }
    c
}

/// Candidates with zero counterexamples to `(D/p) = -1 => a_p = x` and a nonempty premise.
pub fn legendre_fit(ds: &ApDataset, x: u64, candidates: &[i64]) -> Vec<LegendreFit> {
    let mut fits = Vec::new();
    for &d in candidates {
        if d == 0 {
            continue;
        }
        let mut premise = 0;
        let mut broken = false;
        let mut converse = 0;
        for &(p, a) in &ds.samples {
            let k = kronecker(d, p as i64);
            if k == -1 {
                premise += 1;
                if a != x {
                    broken = true;
                    break;
                }
            } else if a == x {
                converse += 1;
            }
        }
        if broken || premise == 0 {
            continue;
        }
        fits.push(LegendreFit {
            discriminant: d,
            direction: if converse == 0 { Direction::Iff } else { Direction::ImpliedBy },
            premise,
            converse_violations: converse,
        });
    }
    fits
}

/// Counts for `a_p = 0 <=> (p/l) = -1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoodmodVerdict {
    pub ell: u64,
    pub samples: usize,
    /// `a_p = 0` while `p` is a square mod `l`.
    pub zero_but_square: usize,
    /// `p` a non-square mod `l` while `a_p != 0`.
    pub nonsquare_but_nonzero: usize,
    pub first_counterexample: Option<(u64, u64)>,
}

impl GoodmodVerdict {
    pub fn holds(&self) -> bool {
        self.zero_but_square == 0 && self.nonsquare_but_nonzero == 0
    }
}

pub fn goodmod_check(ds: &ApDataset, ell: u64) -> GoodmodVerdict {
    let mut v = GoodmodVerdict {
        ell,
        samples: 0,
        zero_but_square: 0,
        nonsquare_but_nonzero: 0,
        first_counterexample: None,
    };
    for &(p, a) in &ds.samples {
        if p % ell == 0 {
            continue;
        }
        v.samples += 1;
        let nonsquare = kronecker(p as i64, ell as i64) == -1;
        let bad = match (a == 0, nonsquare) {
            (true, false) => {
                v.zero_but_square += 1;
                true
            }
            (false, true) => {
                v.nonsquare_but_nonzero += 1;
                true
            }
            _ => false,
        };
        if bad && v.first_counterexample.is_none() {
            v.first_counterexample = Some((p, a));
        }
    }
    v
}

/// The three-way rule for `tau(p) mod 23`: `0` when `-23` is not a square mod `p`,
/// `2` when `p = x^2 + 23 y^2`, and `-1` otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionCheck {
    pub checked: usize,
    /// Counts of primes in the classes `0`, `2`, `-1`.
    pub counts: [usize; 3],
    /// `(p, tau(p) mod 23, predicted)`.
    pub exceptions: Vec<(u64, u64, u64)>,
}

pub fn delta_partition(ds: &ApDataset) -> Result<PartitionCheck, crate::eigendata::DataError> {
    let mut out = PartitionCheck {
        checked: 0,
        counts: [0; 3],
        exceptions: Vec::new(),
    };
    for &(p, a) in &ds.samples {
        if p == 23 {
            continue;
        }
        let (slot, want) = if kronecker(-23, p as i64) == -1 {
            (0, 0)
        } else if crate::eigendata::quadform_represents(p, 1, 0, 23)? {
            (1, 2)
        } else {
            (2, 22)
        };
        out.checked += 1;
        out.counts[slot] += 1;
        if a != want {
            out.exceptions.push((p, a, want));
        }
    }
    Ok(out)
}

/// Which way a printed table row reads.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowKind {
    /// `a_p in T => p mod M in R`.
    TraceImpliesResidue,
    /// `p mod M in R => a_p in T`.
    ResidueImpliesTrace,
    Iff,
}

/// One row of a congruence table, with residues and traces given as integers (reduced here).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub traces: Vec<i64>,
    pub residues: Vec<i64>,
    pub kind: RowKind,
}

impl TableRow {
    pub fn new(kind: RowKind, traces: &[i64], residues: &[i64]) -> TableRow {
        TableRow {
            traces: traces.to_vec(),
            residues: residues.to_vec(),
            kind,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowCheck {
    pub row: TableRow,
    pub checked: usize,
    pub violations: usize,
    pub first_violation: Option<(u64, u64)>,
}

/// Checks table rows against samples with `gcd(p, M) = 1` and `p >= p_min`.
pub fn verify_table(ds: &ApDataset, m: u64, p_min: u64, rows: &[TableRow]) -> Vec<RowCheck> {
    let ell = ds.ell as i64;
    let m_i = m as i64;
    rows.iter()
        .map(|row| {
            let traces: BTreeSet<u64> = row.traces.iter().map(|t| t.rem_euclid(ell) as u64).collect();
            let residues: BTreeSet<u64> = row.residues.iter().map(|r| r.rem_euclid(m_i) as u64).collect();
            let mut check = RowCheck {
                row: row.clone(),
                checked: 0,
                violations: 0,
                first_violation: None,
            };
            for &(p, a) in &ds.samples {
                if p < p_min || p.gcd(&m) != 1 {
                    continue;
                }
                check.checked += 1;
                let t = traces.contains(&a);
                let r = residues.contains(&(p % m));
                let ok = match row.kind {
                    RowKind::TraceImpliesResidue => !t || r,
                    RowKind::ResidueImpliesTrace => !r || t,
                    RowKind::Iff => t == r,
                };
                if !ok {
                    check.violations += 1;
                    check.first_violation.get_or_insert((p, a));
                }
            }
            check
        })
        .collect()
}

/// Discovery results for several residues at one modulus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceReport {
    pub source: String,
    pub level: u64,
    pub ell: u64,
    pub modulus: u64,
    pub samples: usize,
    pub per_class: BTreeMap<u64, ClassEntry>,
    pub legendre_fits: Vec<LegendreFit>,
}

impl CongruenceReport {
    /// Runs [`discover`] for every residue seen in the data and fits the default Legendre candidates for `x = 0`.
    pub fn build(ds: &ApDataset, m: u64) -> Result<CongruenceReport, DiscoverError> {
        let seen: BTreeSet<u64> = ds.samples.iter().map(|s| s.1).collect();
        let mut per_class = BTreeMap::new();
        for x in seen {
            per_class.insert(x, discover(ds, x, m)?);
        }
        let legendre_fits = legendre_fit(ds, 0, &legendre_candidates(ds.level, ds.ell));
        Ok(CongruenceReport {
            source: ds.source.clone(),
            level: ds.level,
            ell: ds.ell,
            modulus: m,
            samples: ds.samples.len(),
            per_class,
            legendre_fits,
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "source": self.source,
            "level": self.level,
            "ell": self.ell,
            "modulus": self.modulus,
            "samples": self.samples,
            "empirical": true,
            "per_class": self.per_class.iter().map(|(x, e)| (x.to_string(), json!({
                "S_sup": e.s_sup,
                "S_nec": e.s_nec,
                "direction": e.direction.to_string(),
                "violations": e.violations,
                "min_class_samples": e.min_class_samples,
            }))).collect::<serde_json::Map<_, _>>(),
            "legendre_fits": self.legendre_fits.iter().map(|f| json!({
                "discriminant": f.discriminant,
                "direction": f.direction.to_string(),
                "premise": f.premise,
            })).collect::<Vec<_>>(),
        })
    }

    /// Rows `a_p = x  DIR  p = ... mod M`, one per residue.
    pub fn to_table(&self) -> String {
        let mut s = format!(
            "{} mod {} (level {}), {} samples, modulus {} [empirical]\n",
            self.source, self.ell, self.level, self.samples, self.modulus
        );
        for (x, e) in &self.per_class {
            let set = match e.direction {
                Direction::ImpliedBy => &e.s_sup,
                _ => &e.s_nec,
            };
            let list = set.iter().map(u64::to_string).collect::<Vec<_>>().join(", ");
            s.push_str(&format!(
                "a_p = {x:>3}  {:<5}  p = {list} mod {}\n",
                e.direction.symbol(),
                self.modulus
            ));
        }
        for f in &self.legendre_fits {
            s.push_str(&format!(
                "({}/p) = -1  {}  a_p = 0\n",
                f.discriminant,
                if f.direction == Direction::Iff { "<=>" } else { "=>" }
            ));
        }
        s
    }
}

/// How synthetic "primes" are tied to the cosets of `[G,G]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntheticLabelling {
    /// Prime modulus with `M = 1 mod (number of cosets)`.
    pub modulus: u64,
    /// `label[r]` is the coset index attached to the residue `r` (unused at `r = 0`).
    pub label: Vec<usize>,
    pub cosets: Vec<Coset>,
}

impl SyntheticLabelling {
    /// Residues `1..M` are dealt round-robin onto the cosets, so every coset gets `(M-1)/k` of them.
    pub fn new(g: &MatGroup) -> SyntheticLabelling {
        let cosets = g
            .cosets(&g.commutator_subgroup())
            .expect("commutator subgroup is normal");
        let k = cosets.len() as u64;
        let modulus = (2..).find(|&m| is_prime(m) && (m - 1) % k == 0 && m > 2).unwrap();
        let mut label = vec![0; modulus as usize];
        for r in 1..modulus {
            label[r as usize] = ((r - 1) % k) as usize;
        }
        SyntheticLabelling { modulus, label, cosets }
    }

    pub fn residues_of(&self, coset: usize) -> Vec<u64> {
        (1..self.modulus).filter(|&r| self.label[r as usize] == coset).collect()
    }

    /// `S_sup` and `S_nec` implied by the coset traces.
    pub fn expected(&self, g: &MatGroup, x: Fe) -> (Vec<u64>, Vec<u64>) {
        let f = g.field();
        let sup = (1..self.modulus)
            .filter(|&r| self.cosets[self.label[r as usize]].constant_trace(f) == Some(x))
            .collect();
        let nec = (1..self.modulus)
            .filter(|&r| self.cosets[self.label[r as usize]].attains_trace(f, x))
            .collect();
        (sup, nec)
    }
}

/// Samples `n` Frobenius stand-ins uniformly from `G` and attaches increasing fake primes
/// `p_i = M i + r_i` whose residue `r_i` is labelled by the coset of the sample.
pub fn synthetic_dataset(
    g: &MatGroup,
    labelling: &SyntheticLabelling,
    n: usize,
    seed: u64,
) -> Result<ApDataset, DiscoverError> {
    let f = g.field();
    if f.r() != 1 {
        return Err(DiscoverError::NotPrimeField(f.q()));
    }
    let mut coset_of = BTreeMap::new();
    for (i, c) in labelling.cosets.iter().enumerate() {
        for m in &c.members {
            coset_of.insert(*m, i);
        }
    }
    let by_coset: Vec<Vec<u64>> = (0..labelling.cosets.len())
        .map(|c| labelling.residues_of(c))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let elements = g.elements();
    let m = labelling.modulus;
    let samples = (0..n as u64)
        .map(|i| {
            let e = &elements[rng.gen_range(0..elements.len())];
            let r = *by_coset[coset_of[e]].choose(&mut rng).expect("each coset has residues");
            (m * (i + 1) + r, e.trace(f).0 as u64)
        })
        .collect();
    Ok(ApDataset {
        source: "synthetic".into(),
        level: 1,
        ell: f.p(),
        samples,
    })
}

/// Outcome of group theory -> synthetic primes -> discovery.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedLoop {
    pub order: usize,
    pub modulus: u64,
    pub samples: usize,
    /// Classes whose discovered sets or direction disagree with the coset verdicts.
    pub mismatched: Vec<u64>,
    pub empirical_c: f64,
    pub density: Ratio<u64>,
    pub tolerance: f64,
}

impl ClosedLoop {
    pub fn density_ok(&self) -> bool {
        let c = *self.density.numer() as f64 / *self.density.denom() as f64;
        (self.empirical_c - c).abs() <= self.tolerance
    }

    pub fn ok(&self) -> bool {
        self.mismatched.is_empty() && self.density_ok()
    }
}

pub fn closed_loop(g: &MatGroup, n: usize, seed: u64) -> Result<ClosedLoop, DiscoverError> {
    let labelling = SyntheticLabelling::new(g);
    let ds = synthetic_dataset(g, &labelling, n, seed)?;
    let traces = CosetTraces::new(g);
    let mut mismatched = Vec::new();
    for x in traces.proper() {
        let entry = discover(&ds, x.0 as u64, labelling.modulus)?;
        let (sup, nec) = labelling.expected(g, x);
        let abelian = traces.is_abelian(x)?;
        let sets_ok = entry.s_sup == sup && entry.s_nec == nec;
        let dir_ok = (entry.direction == Direction::Iff) == abelian
            && entry.direction.weak() == traces.weak_witness(x)?.is_some()
            && entry.direction.semi() == traces.semi_witness(x)?.is_some();
        if !(sets_ok && dir_ok) {
            mismatched.push(x.0 as u64);
        }
    }
    let zeros = ds.samples.iter().filter(|s| s.1 == 0).count();
    Ok(ClosedLoop {
        order: g.order(),
        modulus: labelling.modulus,
        samples: n,
        mismatched,
        empirical_c: zeros as f64 / n as f64,
        density: density_c(g)?,
        tolerance: 3.0 / (n as f64).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigendata::{build_dataset, ApSource};
    use crate::ffield::FieldSpec;
    use crate::matgrp::Mat2;

    fn delta(pmax: u64) -> ApDataset {
        build_dataset(&ApSource::Delta, 23, pmax).unwrap()
    }

    #[test]
    fn divisors_small() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(312).len(), 16);
        assert_eq!(units(8), vec![1, 3, 5, 7]);
    }

    #[test]
    fn delta_discovery() {
        let ds = delta(3000);
        let zero = discover(&ds, 0, 23).unwrap();
        let nonres: Vec<u64> = (1..23).filter(|&r| kronecker(r as i64, 23) == -1).collect();
        assert_eq!(zero.s_sup, nonres);
        assert_eq!(zero.direction, Direction::Iff);
        assert_eq!(zero.violations, 0);
        let minus1 = discover(&ds, 22, 23).unwrap();
        assert_ne!(minus1.direction, Direction::Iff);
        assert_eq!(minus1.direction, Direction::Implies);
        assert!(matches!(
            discover(&delta(30), 0, 23),
            Err(DiscoverError::InsufficientData { .. })
        ));
        assert!(goodmod_check(&ds, 23).holds());
        let part = delta_partition(&ds).unwrap();
        assert!(part.exceptions.is_empty());
        assert_eq!(part.counts.iter().sum::<usize>(), part.checked);
        assert!(part.counts.iter().all(|&c| c > 0));
    }

    #[test]
    fn thin_classes_block_iff() {
        let ds = delta(400);
        let e = discover(&ds, 0, 23).unwrap();
        assert!(e.min_class_samples < MIN_SAMPLES_PER_CLASS);
        assert_eq!(e.direction, Direction::Both);
    }

    #[test]
    fn delta_legendre() {
        let ds = delta(2000);
        let fits = legendre_fit(&ds, 0, &legendre_candidates(1, 23));
        // (-23/p) = (p/23) by reciprocity; (23/p) is not the same character.
        assert_eq!(fits.len(), 1);
        assert_eq!(fits[0].discriminant, -23);
        assert_eq!(fits[0].direction, Direction::Iff);
    }

    #[test]
    fn search_picks_least_modulus() {
        let ds = delta(3000);
        let s = search_modulus(&ds, 0, 46).unwrap();
        assert_eq!(s.iff.unwrap().modulus, 23);
    }

    #[test]
    fn table_rows() {
        let ds = delta(2000);
        let nonres: Vec<i64> = (1..23).filter(|&r| kronecker(r, 23) == -1).collect();
        let rows = [
            TableRow::new(RowKind::Iff, &[0], &nonres),
            TableRow::new(RowKind::ResidueImpliesTrace, &[2, -1], &[1]),
            TableRow::new(RowKind::TraceImpliesResidue, &[2], &[2]),
        ];
        let checks = verify_table(&ds, 23, 0, &rows);
        assert_eq!(checks[0].violations, 0);
        assert_eq!(checks[1].violations, 0);
        assert!(checks[2].violations > 0);
    }

    #[test]
    fn synthetic_loop_s3() {
        let f = FieldSpec::prime(7).unwrap();
        let g = MatGroup::close(
            &f,
            &[Mat2::from_ints(&f, [[0, 1], [1, 0]]), Mat2::from_ints(&f, [[2, 0], [0, 1]])],
        )
        .unwrap();
        let lab = SyntheticLabelling::new(&g);
        assert_eq!(lab.cosets.len(), 6);
        assert_eq!(lab.modulus, 7);
        let r = closed_loop(&g, 20_000, 1).unwrap();
        assert!(r.ok(), "{r:?}");
    }
}

//! 2x2 matrices over a [`FieldSpec`] and finite groups stored as explicit element sets.
//!
//! A [`Mat2`] is four [`Fe`] codes and carries no field; every operation takes the
//! field explicitly. Matrices order lexicographically on `(a, b, c, d)`, which is
//! the canonical element order of a [`MatGroup`].
//!
//! ```
//! use abcong::ffield::FieldSpec;
//! use abcong::matgrp::{Mat2, MatGroup};
//!
//! let f3 = FieldSpec::prime(3).unwrap();
//! let gl = MatGroup::close(&f3, &[
//!     Mat2::from_ints(&f3, [[1, 1], [0, 1]]),
//!     Mat2::from_ints(&f3, [[0, 1], [1, 0]]),
//! ]).unwrap();
//! assert_eq!(gl.order(), 48);
//! assert_eq!(gl.commutator_subgroup().order(), 24);
//! ```

use std::collections::{BTreeMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ffield::{Fe, FieldError, FieldSpec};

/// Largest group [`MatGroup::close`] will enumerate.
pub const MAX_GROUP_ORDER: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("generator {0} is singular")]
    Singular(usize),
    #[error("group closure exceeded {MAX_GROUP_ORDER} elements")]
    TooLarge,
    #[error("the subgroup is not contained in the group")]
    NotSubgroup,
    #[error("groups live over different fields")]
    FieldMismatch,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("malformed group file: {0}")]
    Format(String),
}

/// Row-major matrix `[[a, b], [c, d]]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Mat2(pub [Fe; 4]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([Fe::ONE, Fe::ZERO, Fe::ZERO, Fe::ONE]);

    pub fn new(a: Fe, b: Fe, c: Fe, d: Fe) -> Mat2 {
        Mat2([a, b, c, d])
    }

    pub fn from_ints(f: &FieldSpec, rows: [[i64; 2]; 2]) -> Mat2 {
        Mat2([
            f.from_int(rows[0][0]),
            f.from_int(rows[0][1]),
            f.from_int(rows[1][0]),
            f.from_int(rows[1][1]),
        ])
    }

    pub fn scalar(alpha: Fe) -> Mat2 {
        Mat2([alpha, Fe::ZERO, Fe::ZERO, alpha])
    }

    pub fn diag(x: Fe, y: Fe) -> Mat2 {
        Mat2([x, Fe::ZERO, Fe::ZERO, y])
    }

    pub fn mul(&self, o: &Mat2, f: &FieldSpec) -> Mat2 {
        let [a, b, c, d] = self.0;
        let [e, g, h, k] = o.0;
        Mat2([
            f.add(f.mul(a, e), f.mul(b, h)),
            f.add(f.mul(a, g), f.mul(b, k)),
            f.add(f.mul(c, e), f.mul(d, h)),
            f.add(f.mul(c, g), f.mul(d, k)),
        ])
    }

    pub fn det(&self, f: &FieldSpec) -> Fe {
        let [a, b, c, d] = self.0;
        f.sub(f.mul(a, d), f.mul(b, c))
    }

    pub fn trace(&self, f: &FieldSpec) -> Fe {
        f.add(self.0[0], self.0[3])
    }

    pub fn inverse(&self, f: &FieldSpec) -> Option<Mat2> {
        let di = f.inv(self.det(f))?;
        let [a, b, c, d] = self.0;
        Some(Mat2([f.mul(d, di), f.mul(f.neg(b), di), f.mul(f.neg(c), di), f.mul(a, di)]))
    }

    pub fn scale(&self, s: Fe, f: &FieldSpec) -> Mat2 {
        Mat2(self.0.map(|x| f.mul(x, s)))
    }

    pub fn pow(&self, mut e: u64, f: &FieldSpec) -> Mat2 {
        let mut acc = Mat2::IDENTITY;
        let mut b = *self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b, f);
            }
            b = b.mul(&b, f);
            e >>= 1;
        }
        acc
    }

    /// `x y x^-1 y^-1`.
    pub fn commutator(&self, y: &Mat2, f: &FieldSpec) -> Mat2 {
        let xi = self.inverse(f).expect("invertible");
        let yi = y.inverse(f).expect("invertible");
        self.mul(y, f).mul(&xi, f).mul(&yi, f)
    }

    /// `g self g^-1`.
    pub fn conjugate_by(&self, g: &Mat2, f: &FieldSpec) -> Mat2 {
        g.mul(self, f).mul(&g.inverse(f).expect("invertible"), f)
    }

    /// Multiplicative order; the matrix must be invertible.
    pub fn order(&self, f: &FieldSpec) -> u64 {
        let mut x = *self;
        let mut n = 1;
        while x != Mat2::IDENTITY {
            x = x.mul(self, f);
            n += 1;
        }
        n
    }

    /// Order of the image in `PGL_2`: least `k` with `m^k` scalar.
    pub fn projective_order(&self, f: &FieldSpec) -> u64 {
        let mut x = *self;
        let mut n = 1;
        while x.is_scalar().is_none() {
            x = x.mul(self, f);
            n += 1;
        }
        n
    }

    /// `Some(alpha)` when the matrix is `alpha * id`.
    pub fn is_scalar(&self) -> Option<Fe> {
        let [a, b, c, d] = self.0;
        (b.is_zero() && c.is_zero() && a == d).then_some(a)
    }

    /// Scales so the first nonzero entry in `(a, b, c, d)` is 1.
    pub fn projective_canonical(&self, f: &FieldSpec) -> Mat2 {
        match self.0.iter().find(|x| !x.is_zero()) {
            Some(&lead) => self.scale(f.inv(lead).unwrap(), f),
            None => *self,
        }
    }

    /// Diagonalisable over the quadratic extension: scalar, or distinct eigenvalues.
    pub fn is_diagonalisable_quadratic(&self, f: &FieldSpec) -> bool {
        if self.is_scalar().is_some() {
            return true;
        }
        let t = self.trace(f);
        let disc = f.sub(f.mul(t, t), f.mul(f.from_int(4), self.det(f)));
        !disc.is_zero()
    }

    pub fn to_json(&self, f: &FieldSpec) -> serde_json::Value {
        let [a, b, c, d] = self.0;
        serde_json::json!([[f.to_json(a), f.to_json(b)], [f.to_json(c), f.to_json(d)]])
    }

    pub fn from_json(v: &serde_json::Value, f: &FieldSpec) -> Result<Mat2, GroupError> {
        let bad = || GroupError::Format(format!("expected [[a,b],[c,d]], got {v}"));
        let rows = v.as_array().filter(|r| r.len() == 2).ok_or_else(bad)?;
        let mut out = [Fe::ZERO; 4];
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_array().filter(|r| r.len() == 2).ok_or_else(bad)?;
            for (j, x) in row.iter().enumerate() {
                out[2 * i + j] = f.from_json(x)?;
            }
        }
        Ok(Mat2(out))
    }
}

/// A finite subgroup of `GL_2(F_q)` with its elements in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatGroup {
    field: FieldSpec,
    generators: Vec<Mat2>,
    elements: Vec<Mat2>,
}

/// `|GL_2(F_q)| = (q^2 - 1)(q^2 - q)`.
pub fn gl2_order(q: u64) -> u64 {
    (q * q - 1) * (q * q - q)
}

impl MatGroup {
    /// Closure of `generators` under multiplication. Errors on singular input or
    /// when the group outgrows [`MAX_GROUP_ORDER`].
    pub fn close(field: &FieldSpec, generators: &[Mat2]) -> Result<MatGroup, GroupError> {
        Self::close_with_limit(field, generators, MAX_GROUP_ORDER)
    }

    pub fn close_with_limit(
        field: &FieldSpec,
        generators: &[Mat2],
        limit: usize,
    ) -> Result<MatGroup, GroupError> {
        for (i, g) in generators.iter().enumerate() {
            if g.det(field).is_zero() || g.0.iter().any(|x| x.0 as u64 >= field.q()) {
                return Err(GroupError::Singular(i));
            }
        }
        let mut seen: HashSet<Mat2> = HashSet::new();
        seen.insert(Mat2::IDENTITY);
        let mut queue = VecDeque::from([Mat2::IDENTITY]);
        while let Some(x) = queue.pop_front() {
            for g in generators {
                let y = x.mul(g, field);
                if seen.insert(y) {
                    if seen.len() > limit {
                        return Err(GroupError::TooLarge);
                    }
                    queue.push_back(y);
                }
            }
        }
        let mut elements: Vec<Mat2> = seen.into_iter().collect();
        elements.sort_unstable();
        let group = MatGroup {
            field: field.clone(),
            generators: generators.to_vec(),
            elements,
        };
        assert_eq!(gl2_order(field.q()) % group.order() as u64, 0, "Lagrange");
        Ok(group)
    }

    /// Builds a group from a list already known to be closed. Sorting and dedup are applied.
    pub fn from_elements(field: &FieldSpec, mut elements: Vec<Mat2>) -> MatGroup {
        elements.sort_unstable();
        elements.dedup();
        MatGroup {
            field: field.clone(),
            generators: elements.clone(),
            elements,
        }
    }

    /// The trivial group over `field`.
    pub fn trivial(field: &FieldSpec) -> MatGroup {
        MatGroup::from_elements(field, vec![Mat2::IDENTITY])
    }

    /// `GL_2(F_q)` itself.
    pub fn gl2(field: &FieldSpec) -> MatGroup {
        let g = field.primitive();
        let gens = [
            Mat2::diag(g, Fe::ONE),
            Mat2::new(field.neg(Fe::ONE), Fe::ONE, field.neg(Fe::ONE), Fe::ZERO),
            Mat2::new(Fe::ONE, Fe::ONE, Fe::ZERO, Fe::ONE),
        ];
        MatGroup::close(field, &gens).expect("GL2 within the guard")
    }

    /// `SL_2(F_q)`.
    pub fn sl2(field: &FieldSpec) -> MatGroup {
        let gens = [
            Mat2::new(Fe::ONE, Fe::ONE, Fe::ZERO, Fe::ONE),
            Mat2::new(Fe::ONE, Fe::ZERO, Fe::ONE, Fe::ONE),
            Mat2::new(Fe::ONE, field.primitive(), Fe::ZERO, Fe::ONE),
            Mat2::new(Fe::ONE, Fe::ZERO, field.primitive(), Fe::ONE),
        ];
        MatGroup::close(field, &gens).expect("SL2 within the guard")
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn generators(&self) -> &[Mat2] {
        &self.generators
    }

    pub fn elements(&self) -> &[Mat2] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, m: &Mat2) -> bool {
        self.elements.binary_search(m).is_ok()
    }

    pub fn is_subgroup_of(&self, g: &MatGroup) -> bool {
        self.field == g.field && self.elements.iter().all(|h| g.contains(h))
    }

    pub fn is_abelian(&self) -> bool {
        let f = &self.field;
        let gens = self.small_generating_set();
        gens.iter()
            .all(|x| gens.iter().all(|y| x.mul(y, f) == y.mul(x, f)))
    }

    /// A generating set, preferring the stored generators.
    pub fn small_generating_set(&self) -> Vec<Mat2> {
        if self.generators.len() <= 8 {
            return self.generators.clone();
        }
        let mut gens = Vec::new();
        let mut sub = MatGroup::trivial(&self.field);
        for x in &self.elements {
            if !sub.contains(x) {
                gens.push(*x);
                sub = MatGroup::close(&self.field, &gens).expect("subgroup of a valid group");
            }
        }
        gens
    }

    /// `[G,G]` as the normal closure of the generator commutators.
    pub fn commutator_subgroup(&self) -> MatGroup {
        let f = &self.field;
        let gens = self.small_generating_set();
        let mut ngens: Vec<Mat2> = Vec::new();
        for x in &gens {
            for y in &gens {
                let c = x.commutator(y, f);
                if c != Mat2::IDENTITY && !ngens.contains(&c) {
                    ngens.push(c);
                }
            }
        }
        let mut n = MatGroup::close(f, &ngens).expect("subgroup of a valid group");
        loop {
            let fresh = gens.iter().find_map(|g| {
                n.generators
                    .iter()
                    .map(|h| h.conjugate_by(g, f))
                    .find(|c| !n.contains(c))
            });
            match fresh {
                Some(c) => {
                    ngens.push(c);
                    n = MatGroup::close(f, &ngens).expect("subgroup of a valid group");
                }
                None => break,
            }
        }
        debug_assert!(n.elements.iter().all(|m| m.det(f) == Fe::ONE));
        n
    }

    /// `[G,G]` from every pairwise commutator. Quadratic in `|G|`; used as a test oracle.
    pub fn commutator_subgroup_bruteforce(&self) -> MatGroup {
        let f = &self.field;
        let mut comms: Vec<Mat2> = Vec::new();
        for x in &self.elements {
            for y in &self.elements {
                comms.push(x.commutator(y, f));
            }
        }
        comms.sort_unstable();
        comms.dedup();
        MatGroup::close(f, &comms).expect("subgroup of a valid group")
    }

    /// Left cosets `gH`, each represented by its least element, in representative order.
    pub fn cosets(&self, h: &MatGroup) -> Result<Vec<Coset>, GroupError> {
        if self.field != h.field {
            return Err(GroupError::FieldMismatch);
        }
        if !h.is_subgroup_of(self) {
            return Err(GroupError::NotSubgroup);
        }
        let f = &self.field;
        let mut assigned: HashSet<Mat2> = HashSet::with_capacity(self.order());
        let mut out = Vec::with_capacity(self.order() / h.order());
        for g in &self.elements {
            if assigned.contains(g) {
                continue;
            }
            let mut members: Vec<Mat2> = h.elements.iter().map(|x| g.mul(x, f)).collect();
            members.sort_unstable();
            assigned.extend(members.iter().copied());
            debug_assert_eq!(members[0], *g);
            out.push(Coset {
                representative: *g,
                members,
            });
        }
        Ok(out)
    }

    /// Exponent: lcm of element orders.
    pub fn exponent(&self) -> u64 {
        let e = self
            .elements
            .iter()
            .fold(1u64, |acc, m| num_integer::lcm(acc, m.order(&self.field)));
        assert_eq!(self.order() as u64 % e, 0);
        e
    }

    pub fn trace_multiset(&self) -> BTreeMap<Fe, usize> {
        trace_multiset(&self.field, &self.elements)
    }

    /// Determinants attained, ascending.
    pub fn determinants(&self) -> Vec<Fe> {
        let mut d: Vec<Fe> = self.elements.iter().map(|m| m.det(&self.field)).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// Scalar matrices in the group, as their scalars.
    pub fn scalars(&self) -> Vec<Fe> {
        self.elements.iter().filter_map(|m| m.is_scalar()).collect()
    }

    pub fn projectivize(&self) -> ProjGroup {
        ProjGroup::new(self)
    }

    /// `{g H g^-1 : g in G} == H` for every element `g`.
    pub fn is_normal_subgroup(&self, h: &MatGroup) -> bool {
        let f = &self.field;
        h.is_subgroup_of(self)
            && self
                .elements
                .iter()
                .all(|g| h.elements.iter().all(|x| h.contains(&x.conjugate_by(g, f))))
    }

    /// Group file format: `{"field": ..., "generators": [[[a,b],[c,d]], ...]}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "field": self.field,
            "generators": self.generators.iter().map(|m| m.to_json(&self.field)).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<MatGroup, GroupError> {
        let field: FieldSpec = serde_json::from_value(
            v.get("field")
                .cloned()
                .ok_or_else(|| GroupError::Format("missing \"field\"".into()))?,
        )
        .map_err(|e| GroupError::Format(e.to_string()))?;
        let gens = v
            .get("generators")
            .and_then(|g| g.as_array())
            .ok_or_else(|| GroupError::Format("missing \"generators\" list".into()))?;
        let gens: Vec<Mat2> = gens
            .iter()
            .map(|m| Mat2::from_json(m, &field))
            .collect::<Result<_, _>>()?;
        MatGroup::close(&field, &gens)
    }
}

/// Every subgroup of `g` generated by at most two elements, deduplicated and sorted by
/// order then elements. For `GL_2(F_2)` and `GL_2(F_3)` this is every subgroup.
pub fn two_generated_subgroups(g: &MatGroup) -> Vec<MatGroup> {
    let f = g.field();
    let mut seen: HashSet<Vec<Mat2>> = HashSet::new();
    let mut out = Vec::new();
    let mut cyclic: Vec<MatGroup> = Vec::new();
    let mut push = |h: MatGroup, out: &mut Vec<MatGroup>| {
        if seen.insert(h.elements.clone()) {
            out.push(h);
        }
    };
    for x in &g.elements {
        let h = MatGroup::close(f, &[*x]).expect("subgroup of a valid group");
        if !cyclic.iter().any(|c| c.elements == h.elements) {
            cyclic.push(h.clone());
        }
        push(h, &mut out);
    }
    // Pairs of cyclic subgroups suffice: <x, y> depends only on <x> and <y>.
    for (i, a) in cyclic.iter().enumerate() {
        for b in &cyclic[i + 1..] {
            if a.is_subgroup_of(b) || b.is_subgroup_of(a) {
                continue;
            }
            let h = MatGroup::close(f, &[a.generators[0], b.generators[0]]).expect("subgroup");
            push(h, &mut out);
        }
    }
    out.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.elements.cmp(&b.elements)));
    out
}

/// Upper-triangular matrices in `GL_2(F_q)`.
pub fn borel(f: &FieldSpec) -> MatGroup {
    let g = f.primitive();
    let gens = [
        Mat2::diag(g, Fe::ONE),
        Mat2::diag(Fe::ONE, g),
        Mat2::new(Fe::ONE, Fe::ONE, Fe::ZERO, Fe::ONE),
    ];
    MatGroup::close(f, &gens).expect("Borel within the guard")
}

/// Diagonal and anti-diagonal matrices: projectively `D_{q-1}`.
pub fn split_cartan_normaliser(f: &FieldSpec) -> MatGroup {
    let g = f.primitive();
    let gens = [
        Mat2::diag(g, Fe::ONE),
        Mat2::diag(Fe::ONE, g),
        Mat2::new(Fe::ZERO, Fe::ONE, Fe::ONE, Fe::ZERO),
    ];
    MatGroup::close(f, &gens).expect("within the guard")
}

/// `F_{q^2}^x` acting on itself, with the Frobenius: projectively `D_{q+1}`. Odd `q` only.
pub fn nonsplit_cartan_normaliser(f: &FieldSpec) -> Option<MatGroup> {
    if f.p() == 2 {
        return None;
    }
    let d = f.elements().find(|&x| !x.is_zero() && !f.is_square(x))?;
    // a + b sqrt(d) acts as [[a, b d], [b, a]].
    let mut gens: Vec<Mat2> = f
        .elements()
        .flat_map(|a| f.elements().map(move |b| (a, b)))
        .filter(|&(a, b)| !(a.is_zero() && b.is_zero()))
        .map(|(a, b)| Mat2::new(a, f.mul(b, d), b, a))
        .collect();
    gens.push(Mat2::diag(Fe::ONE, f.neg(Fe::ONE)));
    MatGroup::close(f, &gens).ok()
}

/// A subgroup of `GL_2(F_q)` whose projective image is `A_4`, `S_4` or `A_5` (`k = 3, 4, 5`),
/// generated by `a, b` with projective orders `2, 3` and `ab` of projective order `k`.
pub fn exceptional_lift(f: &FieldSpec, k: u64) -> Option<MatGroup> {
    let minus_one = f.neg(Fe::ONE);
    let b = *MatGroup::sl2(f)
        .elements
        .iter()
        .find(|m| m.trace(f) == minus_one && m.is_scalar().is_none())?;
    for x in f.elements() {
        for y in f.elements() {
            for z in f.elements() {
                let a = Mat2::new(x, y, z, f.neg(x));
                if a.det(f).is_zero() || a.projective_order(f) != 2 {
                    continue;
                }
                if a.mul(&b, f).projective_order(f) == k {
                    return MatGroup::close(f, &[a, b]).ok();
                }
            }
        }
    }
    None
}

pub fn trace_multiset(f: &FieldSpec, items: &[Mat2]) -> BTreeMap<Fe, usize> {
    let mut out = BTreeMap::new();
    for m in items {
        *out.entry(m.trace(f)).or_insert(0) += 1;
    }
    out
}

/// A left coset `rH` of a subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coset {
    pub representative: Mat2,
    pub members: Vec<Mat2>,
}

impl Coset {
    pub fn trace_multiset(&self, f: &FieldSpec) -> BTreeMap<Fe, usize> {
        trace_multiset(f, &self.members)
    }

    /// The common trace when every member has the same trace.
    pub fn constant_trace(&self, f: &FieldSpec) -> Option<Fe> {
        let t = self.members[0].trace(f);
        self.members.iter().all(|m| m.trace(f) == t).then_some(t)
    }

    pub fn attains_trace(&self, f: &FieldSpec, x: Fe) -> bool {
        self.members.iter().any(|m| m.trace(f) == x)
    }
}

/// Image of a group in `PGL_2`, stored as canonical representatives.
#[derive(Clone, Debug)]
pub struct ProjGroup {
    base: MatGroup,
    classes: Vec<Mat2>,
    scalar_kernel_size: usize,
}

impl ProjGroup {
    pub fn new(base: &MatGroup) -> ProjGroup {
        let f = &base.field;
        let mut classes: Vec<Mat2> = base
            .elements
            .iter()
            .map(|m| m.projective_canonical(f))
            .collect();
        classes.sort_unstable();
        classes.dedup();
        let scalar_kernel_size = base.scalars().len();
        assert_eq!(classes.len() * scalar_kernel_size, base.order());
        ProjGroup {
            base: base.clone(),
            classes,
            scalar_kernel_size,
        }
    }

    pub fn base(&self) -> &MatGroup {
        &self.base
    }

    pub fn field(&self) -> &FieldSpec {
        &self.base.field
    }

    pub fn classes(&self) -> &[Mat2] {
        &self.classes
    }

    pub fn order(&self) -> usize {
        self.classes.len()
    }

    pub fn scalar_kernel_size(&self) -> usize {
        self.scalar_kernel_size
    }

    pub fn contains(&self, m: &Mat2) -> bool {
        self.classes
            .binary_search(&m.projective_canonical(self.field()))
            .is_ok()
    }

    pub fn mul(&self, x: &Mat2, y: &Mat2) -> Mat2 {
        let f = self.field();
        x.mul(y, f).projective_canonical(f)
    }

    pub fn inverse(&self, x: &Mat2) -> Mat2 {
        let f = self.field();
        x.inverse(f).expect("invertible").projective_canonical(f)
    }

    /// Order of a class in `PGL_2`.
    pub fn element_order(&self, x: &Mat2) -> u64 {
        let f = self.field();
        let id = Mat2::IDENTITY;
        let mut y = x.projective_canonical(f);
        let mut n = 1;
        while y != id {
            y = self.mul(&y, x);
            n += 1;
        }
        n
    }

    /// Counts of element orders.
    pub fn order_statistics(&self) -> BTreeMap<u64, usize> {
        let mut out = BTreeMap::new();
        for x in &self.classes {
            *out.entry(self.element_order(x)).or_insert(0) += 1;
        }
        out
    }

    /// Projective subgroup generated by `gens`, as canonical classes.
    pub fn closure(&self, gens: &[Mat2]) -> Vec<Mat2> {
        let f = self.field();
        let gens: Vec<Mat2> = gens.iter().map(|g| g.projective_canonical(f)).collect();
        let mut seen: HashSet<Mat2> = HashSet::from([Mat2::IDENTITY]);
        let mut queue = VecDeque::from([Mat2::IDENTITY]);
        while let Some(x) = queue.pop_front() {
            for g in &gens {
                let y = self.mul(&x, g);
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        let mut out: Vec<Mat2> = seen.into_iter().collect();
        out.sort_unstable();
        out
    }

    /// `[P,P]` computed inside `PGL_2` from every pairwise commutator.
    pub fn commutator_classes(&self) -> Vec<Mat2> {
        let f = self.field();
        let mut comms: HashSet<Mat2> = HashSet::new();
        for x in &self.classes {
            for y in &self.classes {
                comms.insert(x.commutator(y, f).projective_canonical(f));
            }
        }
        let gens: Vec<Mat2> = comms.into_iter().collect();
        self.closure(&gens)
    }

    pub fn is_abelian(&self) -> bool {
        self.classes
            .iter()
            .all(|x| self.classes.iter().all(|y| self.mul(x, y) == self.mul(y, x)))
    }
}

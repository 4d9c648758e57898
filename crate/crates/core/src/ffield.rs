//! Small finite fields `F_{p^r}` with table-driven multiplication.
//!
//! An element is stored as a [`Fe`] code: the integer `c_0 + c_1 p + ... + c_{r-1} p^{r-1}`
//! for the polynomial `c_0 + c_1 t + ... + c_{r-1} t^{r-1}` modulo the field's
//! defining polynomial. Codes order elements lexicographically on the coefficient
//! vector read from the top coefficient down, which is the canonical order used
//! everywhere else in the crate.
//!
//! ```
//! use abcong::ffield::FieldSpec;
//!
//! let f9 = FieldSpec::new(3, 2, None).unwrap();
//! assert_eq!(f9.modulus(), &[1, 0, 1]); // t^2 + 1
//! let t = f9.from_coeffs(&[0, 1]).unwrap();
//! assert_eq!(f9.mul(t, t), f9.from_int(-1));
//! ```

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest field size accepted by [`FieldSpec::new`].
pub const MAX_FIELD_SIZE: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field of size {p}^{r} exceeds the guard 2^20")]
    TooLarge { p: u64, r: u32 },
    #[error("modulus must be monic of degree {expected}")]
    BadModulus { expected: u32 },
    #[error("modulus is reducible over F_{0}")]
    Reducible(u64),
    #[error("coefficient {0} out of range")]
    BadCoefficient(i64),
    #[error("operands belong to different fields")]
    SpecMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero has no multiplicative order")]
    ZeroOrder,
}

/// Raw element code inside some [`FieldSpec`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Fe(pub u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    pub fn code(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct Inner {
    p: u32,
    r: u32,
    q: u32,
    modulus: Vec<u32>,
    // exp[i] = g^i for i in 0..2(q-1); log[code] for nonzero codes.
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// A finite field `F_p[t]/(m(t))`. Cheap to clone.
#[derive(Clone)]
pub struct FieldSpec(Arc<Inner>);

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.r == other.0.r && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FieldSpec {}

impl std::hash::Hash for FieldSpec {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.p.hash(state);
        self.0.modulus.hash(state);
    }
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.0.q)?;
        if self.0.r > 1 {
            write!(f, "{:?}", self.0.modulus)?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct FieldSpecRepr {
    p: u64,
    r: u32,
    modulus: Vec<u32>,
}

impl Serialize for FieldSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        FieldSpecRepr {
            p: self.0.p as u64,
            r: self.0.r,
            modulus: self.0.modulus.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Loose {
            p: u64,
            #[serde(default)]
            r: Option<u32>,
            #[serde(default)]
            modulus: Option<Vec<i64>>,
        }
        let l = Loose::deserialize(d)?;
        let r = l.r.unwrap_or_else(|| l.modulus.as_ref().map_or(1, |m| m.len().saturating_sub(1) as u32));
        FieldSpec::new(l.p, r, l.modulus.as_deref()).map_err(serde::de::Error::custom)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) || n.is_multiple_of(3) {
        return false;
    }
    let mut d = 5u64;
    while d * d <= n {
        if n.is_multiple_of(d) || n.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}

/// Distinct prime factors of `n`, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Product of the distinct primes dividing `n` (`rad(0)` is taken to be 0).
pub fn rad(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    prime_factors(n).into_iter().product()
}

/// All primes up to and including `n`.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| i as u64)
        .collect()
}

/// Kronecker symbol `(a/n)` for arbitrary integers.
pub fn kronecker(a: i64, n: i64) -> i32 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut a = a as i128;
    let mut n = n as i128;
    let mut result = 1i32;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    let mut twos = 0;
    while n % 2 == 0 {
        n /= 2;
        twos += 1;
    }
    if twos > 0 {
        if a % 2 == 0 {
            return 0;
        }
        if twos % 2 == 1 {
            let r8 = a.rem_euclid(8);
            if r8 == 3 || r8 == 5 {
                result = -result;
            }
        }
    }
    // n is now odd and positive: Jacobi symbol.
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r8 = n % 8;
            if r8 == 3 || r8 == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Legendre symbol `(a/p)` for an odd prime `p`.
pub fn legendre(a: i64, p: u64) -> Result<i32, FieldError> {
    if p == 2 || !is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    Ok(kronecker(a, p as i64))
}

fn poly_mulmod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let r = modulus.len() - 1;
    let p64 = p as u64;
    let mut prod = vec![0u64; 2 * r];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p64;
        }
    }
    for k in (r..2 * r).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        for (i, &m) in modulus[..r].iter().enumerate() {
            let sub = c * m as u64 % p64;
            prod[k - r + i] = (prod[k - r + i] + p64 - sub) % p64;
        }
    }
    prod.truncate(r);
    prod.into_iter().map(|x| x as u32).collect()
}

fn poly_rem_is_zero(num: &[u32], den: &[u32], p: u32) -> bool {
    let p64 = p as u64;
    let mut rem: Vec<u64> = num.iter().map(|&x| x as u64).collect();
    let dd = den.len() - 1;
    let lead_inv = pow_mod(den[dd] as u64, p64 - 2, p64);
    while rem.len() > dd {
        let top = rem.len() - 1;
        let c = rem[top] * lead_inv % p64;
        if c != 0 {
            for (i, &d) in den.iter().enumerate() {
                let idx = top - dd + i;
                rem[idx] = (rem[idx] + p64 - c * d as u64 % p64) % p64;
            }
        }
        rem.pop();
    }
    rem.iter().all(|&x| x == 0)
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// Irreducibility by trial division with every monic polynomial of degree `1..=r/2`.
fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let r = modulus.len() - 1;
    if r <= 1 {
        return true;
    }
    for d in 1..=r / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut f = decode(code as u32, p, d as u32);
            f.push(1);
            if poly_rem_is_zero(modulus, &f, p) {
                return false;
            }
        }
    }
    true
}

fn decode(mut code: u32, p: u32, r: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(r as usize);
    for _ in 0..r {
        out.push(code % p);
        code /= p;
    }
    out
}

fn encode(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

impl FieldSpec {
    /// Builds `F_{p^r}`. Without a modulus the least monic irreducible of degree `r`
    /// (comparing coefficient vectors from the top down) is used; prime fields use `t`.
    pub fn new(p: u64, r: u32, modulus: Option<&[i64]>) -> Result<FieldSpec, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if r == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let q = (p as u128).checked_pow(r).filter(|&q| q <= MAX_FIELD_SIZE as u128);
        let q = q.ok_or(FieldError::TooLarge { p, r })? as u32;
        let p = p as u32;
        let modulus = match modulus {
            Some(m) => {
                if m.len() != r as usize + 1 || m[r as usize].rem_euclid(p as i64) != 1 {
                    return Err(FieldError::BadModulus { expected: r });
                }
                let m: Vec<u32> = m.iter().map(|&c| c.rem_euclid(p as i64) as u32).collect();
                if !is_irreducible(&m, p) {
                    return Err(FieldError::Reducible(p as u64));
                }
                m
            }
            None if r == 1 => vec![0, 1],
            None => (0..q)
                .map(|code| {
                    let mut m = decode(code, p, r);
                    m.push(1);
                    m
                })
                .find(|m| is_irreducible(m, p))
                .expect("irreducible polynomials exist in every degree"),
        };
        Ok(FieldSpec(Arc::new(Self::build_tables(p, r, q, modulus))))
    }

    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Result<FieldSpec, FieldError> {
        Self::new(p, 1, None)
    }

    fn build_tables(p: u32, r: u32, q: u32, modulus: Vec<u32>) -> Inner {
        let n = q - 1;
        let factors = prime_factors(n as u64);
        let pow_poly = |base: &[u32], mut e: u64| {
            let mut acc = decode(1, p, r);
            let mut b = base.to_vec();
            while e > 0 {
                if e & 1 == 1 {
                    acc = poly_mulmod(&acc, &b, &modulus, p);
                }
                b = poly_mulmod(&b, &b, &modulus, p);
                e >>= 1;
            }
            acc
        };
        let one = decode(1, p, r);
        let g = if q == 2 {
            one.clone()
        } else {
            (2..q)
                .map(|c| decode(c, p, r))
                .find(|g| factors.iter().all(|&f| pow_poly(g, n as u64 / f) != one))
                .expect("the multiplicative group is cyclic")
        };
        let mut exp = vec![0u32; 2 * n as usize];
        let mut log = vec![0u32; q as usize];
        let mut cur = one;
        for i in 0..n as usize {
            let c = encode(&cur, p);
            exp[i] = c;
            exp[i + n as usize] = c;
            log[c as usize] = i as u32;
            cur = poly_mulmod(&cur, &g, &modulus, p);
        }
        Inner { p, r, q, modulus, exp, log }
    }

    pub fn p(&self) -> u64 {
        self.0.p as u64
    }

    pub fn r(&self) -> u32 {
        self.0.r
    }

    /// Number of elements.
    pub fn q(&self) -> u64 {
        self.0.q as u64
    }

    /// Monic defining polynomial, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    /// All elements in code order.
    pub fn elements(&self) -> impl Iterator<Item = Fe> + '_ {
        (0..self.0.q).map(Fe)
    }

    /// A fixed generator of the multiplicative group.
    pub fn primitive(&self) -> Fe {
        Fe(self.0.exp[1 % self.0.exp.len().max(1)])
    }

    pub fn from_int(&self, n: i64) -> Fe {
        Fe(n.rem_euclid(self.0.p as i64) as u32)
    }

    pub fn from_coeffs(&self, coeffs: &[i64]) -> Result<Fe, FieldError> {
        if coeffs.len() > self.0.r as usize {
            return Err(FieldError::BadModulus { expected: self.0.r });
        }
        let c: Vec<u32> = coeffs
            .iter()
            .map(|&x| x.rem_euclid(self.0.p as i64) as u32)
            .collect();
        Ok(Fe(encode(&c, self.0.p)))
    }

    /// Checked conversion from a raw code.
    pub fn from_code(&self, code: u32) -> Result<Fe, FieldError> {
        if code < self.0.q {
            Ok(Fe(code))
        } else {
            Err(FieldError::BadCoefficient(code as i64))
        }
    }

    pub fn coeffs(&self, a: Fe) -> Vec<u32> {
        decode(a.0, self.0.p, self.0.r)
    }

    /// `Some(n)` when `a` lies in the prime field, with `0 <= n < p`.
    pub fn as_prime_field(&self, a: Fe) -> Option<u32> {
        (a.0 < self.0.p).then_some(a.0)
    }

    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let p = self.0.p;
        if self.0.r == 1 {
            let s = a.0 + b.0;
            return Fe(if s >= p { s - p } else { s });
        }
        let (mut x, mut y, mut out, mut place) = (a.0, b.0, 0u32, 1u32);
        while x > 0 || y > 0 {
            let d = (x % p + y % p) % p;
            out += d * place;
            place *= p;
            x /= p;
            y /= p;
        }
        Fe(out)
    }

    pub fn neg(&self, a: Fe) -> Fe {
        let p = self.0.p;
        if self.0.r == 1 {
            return Fe(if a.0 == 0 { 0 } else { p - a.0 });
        }
        let (mut x, mut out, mut place) = (a.0, 0u32, 1u32);
        while x > 0 {
            out += ((p - x % p) % p) * place;
            place *= p;
            x /= p;
        }
        Fe(out)
    }

    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe::ZERO;
        }
        let i = self.0.log[a.0 as usize] + self.0.log[b.0 as usize];
        Fe(self.0.exp[i as usize])
    }

    pub fn inv(&self, a: Fe) -> Option<Fe> {
        if a.0 == 0 {
            return None;
        }
        let n = self.0.q - 1;
        let l = self.0.log[a.0 as usize];
        Some(Fe(self.0.exp[((n - l) % n) as usize]))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Option<Fe> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    /// `a^e` for a signed exponent; `0^0 = 1`, negative powers of zero are `None`.
    pub fn pow(&self, a: Fe, e: i64) -> Option<Fe> {
        if a.0 == 0 {
            return match e {
                0 => Some(Fe::ONE),
                e if e > 0 => Some(Fe::ZERO),
                _ => None,
            };
        }
        let n = (self.0.q - 1) as i64;
        let l = self.0.log[a.0 as usize] as i64;
        let k = (l as i128 * e as i128).rem_euclid(n as i128) as usize;
        Some(Fe(self.0.exp[k]))
    }

    /// Discrete logarithm to the base [`FieldSpec::primitive`].
    pub fn log(&self, a: Fe) -> Option<u64> {
        (a.0 != 0).then(|| self.0.log[a.0 as usize] as u64)
    }

    pub fn mult_order(&self, a: Fe) -> Option<u64> {
        let n = self.q() - 1;
        self.log(a).map(|l| n / num_integer::gcd(l, n))
    }

    pub fn is_square(&self, a: Fe) -> bool {
        a.0 == 0 || self.0.p == 2 || self.0.log[a.0 as usize].is_multiple_of(2)
    }

    /// The root of `a` with the smallest code, if any.
    pub fn sqrt(&self, a: Fe) -> Option<Fe> {
        if a.0 == 0 {
            return Some(Fe::ZERO);
        }
        let n = self.0.q - 1;
        let l = self.0.log[a.0 as usize];
        if self.0.p == 2 {
            // Squaring is a bijection; halve the log modulo the odd order n.
            let half = if l.is_multiple_of(2) { l / 2 } else { (l + n) / 2 };
            return Some(Fe(self.0.exp[half as usize]));
        }
        if l % 2 == 1 {
            return None;
        }
        let s1 = Fe(self.0.exp[(l / 2) as usize]);
        Some(s1.min(self.neg(s1)))
    }

    /// Frobenius `a -> a^p`.
    pub fn frobenius(&self, a: Fe) -> Fe {
        self.pow(a, self.0.p as i64).expect("positive exponent")
    }

    /// Sizes `p^s` of the subfields (`s | r`), ascending.
    pub fn subfield_sizes(&self) -> Vec<u64> {
        (1..=self.0.r)
            .filter(|s| self.0.r.is_multiple_of(*s))
            .map(|s| self.p().pow(s))
            .collect()
    }

    /// Whether `a` lies in the subfield with `k` elements.
    pub fn in_subfield(&self, a: Fe, k: u64) -> bool {
        self.pow(a, k as i64) == Some(a)
    }

    /// Size of the smallest subfield containing every element of `items`.
    pub fn generated_subfield(&self, items: impl IntoIterator<Item = Fe>) -> u64 {
        let items: Vec<Fe> = items.into_iter().collect();
        self.subfield_sizes()
            .into_iter()
            .find(|&k| items.iter().all(|&a| self.in_subfield(a, k)))
            .unwrap_or(self.q())
    }

    /// Roots of `x^2 + b x + c` in code order.
    pub fn quadratic_roots(&self, b: Fe, c: Fe) -> Vec<Fe> {
        if self.0.p == 2 {
            let mut roots: Vec<Fe> = self
                .elements()
                .filter(|&x| self.add(self.mul(x, self.add(x, b)), c).is_zero())
                .collect();
            roots.sort();
            return roots;
        }
        let two = self.from_int(2);
        let four = self.from_int(4);
        let disc = self.sub(self.mul(b, b), self.mul(four, c));
        match self.sqrt(disc) {
            None => Vec::new(),
            Some(s) => {
                let nb = self.neg(b);
                let mut roots = vec![
                    self.div(self.add(nb, s), two).unwrap(),
                    self.div(self.sub(nb, s), two).unwrap(),
                ];
                roots.sort();
                roots.dedup();
                roots
            }
        }
    }

    /// Human-readable form: an integer for prime-field elements, else the polynomial in `t`.
    pub fn show(&self, a: Fe) -> String {
        if let Some(n) = self.as_prime_field(a) {
            return n.to_string();
        }
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs(a).iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let coef = if c == 1 && i > 0 { String::new() } else { c.to_string() };
            terms.push(match i {
                0 => coef,
                1 => format!("{coef}t"),
                _ => format!("{coef}t^{i}"),
            });
        }
        terms.join("+")
    }

    /// JSON value for an element: an integer in prime fields, a coefficient list otherwise.
    pub fn to_json(&self, a: Fe) -> serde_json::Value {
        if self.0.r == 1 {
            serde_json::Value::from(a.0)
        } else {
            serde_json::Value::from(self.coeffs(a))
        }
    }

    /// Parses an integer or a coefficient list.
    pub fn from_json(&self, v: &serde_json::Value) -> Result<Fe, FieldError> {
        match v {
            serde_json::Value::Number(n) => n
                .as_i64()
                .map(|n| self.from_int(n))
                .ok_or(FieldError::BadCoefficient(0)),
            serde_json::Value::Array(items) => {
                let c: Option<Vec<i64>> = items.iter().map(|x| x.as_i64()).collect();
                self.from_coeffs(&c.ok_or(FieldError::BadCoefficient(0))?)
            }
            _ => Err(FieldError::BadCoefficient(0)),
        }
    }
}

/// An element bundled with its field, for callers that want checked mixed-field arithmetic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    pub spec: FieldSpec,
    pub value: Fe,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl FieldElement {
    pub fn new(spec: &FieldSpec, value: Fe) -> FieldElement {
        FieldElement { spec: spec.clone(), value }
    }

    pub fn coeffs(&self) -> Vec<u32> {
        self.spec.coeffs(self.value)
    }

    pub fn arith(&self, other: &FieldElement, op: ArithOp) -> Result<FieldElement, FieldError> {
        if self.spec != other.spec {
            return Err(FieldError::SpecMismatch);
        }
        let f = &self.spec;
        let (a, b) = (self.value, other.value);
        let v = match op {
            ArithOp::Add => f.add(a, b),
            ArithOp::Sub => f.sub(a, b),
            ArithOp::Mul => f.mul(a, b),
            ArithOp::Div => f.div(a, b).ok_or(FieldError::DivisionByZero)?,
        };
        Ok(FieldElement::new(f, v))
    }

    pub fn pow(&self, e: i64) -> Result<FieldElement, FieldError> {
        let v = self.spec.pow(self.value, e).ok_or(FieldError::DivisionByZero)?;
        Ok(FieldElement::new(&self.spec, v))
    }

    pub fn inv(&self) -> Result<FieldElement, FieldError> {
        self.pow(-1)
    }

    pub fn mult_order(&self) -> Result<u64, FieldError> {
        self.spec.mult_order(self.value).ok_or(FieldError::ZeroOrder)
    }

    pub fn sqrt(&self) -> Option<FieldElement> {
        self.spec.sqrt(self.value).map(|v| FieldElement::new(&self.spec, v))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec.show(self.value))
    }
}
